import pytest
from hypothesis import given, strategies as st

from obsolens.corpus import (
    BadTokenLine,
    Decade,
    MalformedHeader,
    NonNumericYear,
    bucket_decade,
    normalize_form,
    parse_vertical,
    serialize_vertical,
)


def test_parse_minimal_document():
    text = "#doc id=d1 year=1910 genre=fic\nIn\tii\norder\tnn1\nthat\tcst\n"
    docs = parse_vertical(text)
    assert len(docs) == 1
    doc = docs[0]
    assert (doc.doc_id, doc.year, doc.genre) == ("d1", 1910, "fic")
    assert len(doc.sentences) == 1
    assert [t.surface for t in doc.sentences[0].tokens] == ["In", "order", "that"]
    assert [t.pos for t in doc.sentences[0].tokens] == ["ii", "nn1", "cst"]


def test_empty_stream():
    assert parse_vertical("") == []


def test_blank_line_closes_sentence():
    text = "#doc id=d1 year=1900 genre=nf\na\tx\n\nb\ty\n"
    (doc,) = parse_vertical(text)
    assert len(doc.sentences) == 2


def test_comment_lines_ignored():
    text = "## a comment\n#doc id=d1 year=1900 genre=nf\na\tx\n## another\nb\ty\n"
    (doc,) = parse_vertical(text)
    assert doc.token_count() == 2


def test_crlf_accepted():
    text = "#doc id=d1 year=1900 genre=nf\r\na\tx\r\n"
    (doc,) = parse_vertical(text)
    assert doc.sentences[0].tokens[0].surface == "a"


def test_lemma_preserved():
    text = "#doc id=d1 year=1900 genre=nf\nwent\tvvd\tgo\n"
    (doc,) = parse_vertical(text)
    assert doc.sentences[0].tokens[0].lemma == "go"


def test_header_keys_any_order():
    text = "#doc genre=mag id=x year=1955\na\tx\n"
    (doc,) = parse_vertical(text)
    assert (doc.doc_id, doc.year, doc.genre) == ("x", 1955, "mag")


def test_bad_token_line_reports_line_number():
    text = "#doc id=d1 year=1900 genre=nf\norder\n"
    with pytest.raises(BadTokenLine) as exc:
        parse_vertical(text)
    assert exc.value.line_no == 2


def test_missing_header_fields():
    with pytest.raises(MalformedHeader):
        parse_vertical("#doc id=d1 year=1900\na\tx\n")


def test_non_numeric_year():
    with pytest.raises(NonNumericYear):
        parse_vertical("#doc id=d1 year=abcd genre=nf\na\tx\n")


def test_year_out_of_range_rejected():
    with pytest.raises(MalformedHeader):
        parse_vertical("#doc id=d1 year=1200 genre=nf\na\tx\n")


def test_duplicate_doc_id_rejected():
    text = (
        "#doc id=d1 year=1900 genre=nf\na\tx\n\n"
        "#doc id=d1 year=1910 genre=nf\nb\tx\n"
    )
    with pytest.raises(MalformedHeader):
        parse_vertical(text)


def test_token_count_equals_token_lines(documents, corpus_bytes):
    token_lines = [
        line
        for line in corpus_bytes.decode("utf-8").splitlines()
        if line.strip() and not line.startswith("#")
    ]
    assert sum(d.token_count() for d in documents) == len(token_lines)


def test_round_trip(documents):
    assert parse_vertical(serialize_vertical(documents)) == documents


@pytest.mark.parametrize("year,expected", [(1910, 1910), (1919, 1910), (2000, 2000)])
def test_bucket_decade(year, expected):
    assert bucket_decade(year) == Decade(expected)


@given(st.integers(min_value=1500, max_value=2100))
def test_bucket_decade_idempotent_and_constant(year):
    decade = bucket_decade(year)
    assert decade.start_year % 10 == 0
    assert bucket_decade(decade.start_year) == decade
    assert all(
        bucket_decade(y) == decade
        for y in range(decade.start_year, decade.start_year + 10)
    )


@pytest.mark.parametrize("surface,expected", [("In", "in"), ("SO", "so"), ("that", "that")])
def test_normalize_form(surface, expected):
    assert normalize_form(surface) == expected


@given(st.text())
def test_normalize_form_idempotent(text):
    assert normalize_form(normalize_form(text)) == normalize_form(text)


def test_decade_requires_multiple_of_ten():
    with pytest.raises(ValueError):
        Decade(1905)


def test_token_indexes_gapless(documents):
    for doc in documents[:5]:
        for sentence in doc.sentences:
            assert [t.index for t in sentence.tokens] == list(range(len(sentence)))
