import pytest
from hypothesis import given, settings, strategies as st

from obsolens.corpus import Decade, parse_vertical
from obsolens.index import build_index
from obsolens.query import (
    AllWildcards,
    BareUnderscore,
    EmptyPattern,
    Literal,
    TagConstraint,
    Wildcard,
    export_matches_csv,
    frequency_series,
    kwic,
    match_pattern,
    parse_pattern,
    scan_pattern,
)

ACCEPTANCE_PATTERNS = [
    "in order that",
    "so that * _vm*",
    "so that * * _vm*",
    "so that * * * _vm*",
    "for * to",
]


def corpus_of(sentence_words, year=1950, genre="fic"):
    """One document, one sentence; words are (surface, pos) pairs."""
    lines = [f"#doc id=d1 year={year} genre={genre}"]
    lines += [f"{surface}\t{pos}" for surface, pos in sentence_words]
    return build_index(parse_vertical("\n".join(lines) + "\n"))


PRIVACY_SENTENCE = [
    ("The", "at"), ("doctors", "nn2"), ("gave", "vvd"), ("us", "ppx"),
    ("this", "dd1"), ("room", "nn1"), ("so", "cs"), ("that", "cst"),
    ("we", "pp"), ("could", "vm"), ("have", "vhi"), ("privacy", "nn1"),
]


# ---- parse_pattern ----

def test_parse_modal_gap_pattern():
    pattern = parse_pattern("so that * _vm*")
    assert pattern.elements == (
        Literal("so"), Literal("that"), Wildcard(), TagConstraint("vm", exact=False),
    )


def test_parse_literals_case_folded():
    pattern = parse_pattern("In Order THAT")
    assert pattern.elements == (Literal("in"), Literal("order"), Literal("that"))


def test_parse_exact_tag():
    (element,) = parse_pattern("_vm").elements
    assert element == TagConstraint("vm", exact=True)


def test_parse_errors():
    with pytest.raises(EmptyPattern):
        parse_pattern("   ")
    with pytest.raises(AllWildcards):
        parse_pattern("*")
    with pytest.raises(AllWildcards):
        parse_pattern("* * *")
    with pytest.raises(BareUnderscore):
        parse_pattern("so _")
    with pytest.raises(BareUnderscore):
        parse_pattern("so _*")


# ---- match_pattern ----

def test_modal_gap_matches_privacy_example():
    idx = corpus_of(PRIVACY_SENTENCE)
    (match,) = match_pattern(idx, parse_pattern("so that * _vm*"))
    assert (match.start, match.end) == (6, 9)
    assert kwic(idx, match, 0).hit == "so that we could"


def test_two_gap_pattern_misses_one_gap_sentence():
    idx = corpus_of(PRIVACY_SENTENCE)
    assert match_pattern(idx, parse_pattern("so that * * _vm*")) == []


def test_overlapping_matches_all_reported():
    idx = corpus_of([("a", "x"), ("a", "x"), ("a", "x")])
    matches = match_pattern(idx, parse_pattern("a a"))
    assert [(m.start, m.end) for m in matches] == [(0, 1), (1, 2)]


def test_match_does_not_cross_sentences():
    text = "#doc id=d1 year=1950 genre=fic\nso\tcs\n\nthat\tcst\n"
    idx = build_index(parse_vertical(text))
    assert match_pattern(idx, parse_pattern("so that")) == []


def test_matching_case_insensitive():
    idx = corpus_of([("SO", "CS"), ("That", "CST"), ("We", "PP"), ("Could", "VM")])
    assert len(match_pattern(idx, parse_pattern("so that * _vm*"))) == 1


def test_tag_only_pattern_scans():
    idx = corpus_of(PRIVACY_SENTENCE)
    matches = match_pattern(idx, parse_pattern("_vm"))
    assert [m.start for m in matches] == [9]


@pytest.mark.parametrize("pattern_text", ACCEPTANCE_PATTERNS)
def test_oracle_equivalence_fixture_corpus(documents, corpus_index, pattern_text):
    pattern = parse_pattern(pattern_text)
    indexed = match_pattern(corpus_index, pattern)
    scanned = scan_pattern(documents, pattern)
    assert set(indexed) == set(scanned)
    assert len(indexed) == len(scanned)
    assert len(indexed) > 0


def test_match_monotone_under_added_document(documents, corpus_index):
    pattern = parse_pattern("in order that")
    before = set(match_pattern(corpus_index, pattern))
    extra = parse_vertical(
        "#doc id=extra year=1955 genre=fic\nHello\tuh\nworld\tnn1\n"
    )
    after = set(match_pattern(build_index(list(documents) + extra), pattern))
    assert before <= after


token_strategy = st.tuples(
    st.sampled_from(["so", "that", "we", "could", "a", "b"]),
    st.sampled_from(["cs", "cst", "pp", "vm", "nn1"]),
)
sentence_strategy = st.lists(token_strategy, min_size=1, max_size=12)


@settings(max_examples=60, deadline=None)
@given(st.lists(sentence_strategy, min_size=1, max_size=5),
       st.sampled_from(ACCEPTANCE_PATTERNS + ["so _cst", "we", "_nn1"]))
def test_oracle_equivalence_random_corpora(sentences, pattern_text):
    lines = ["#doc id=d1 year=1950 genre=fic"]
    for sentence in sentences:
        lines += [f"{s}\t{p}" for s, p in sentence]
        lines.append("")
    docs = parse_vertical("\n".join(lines) + "\n")
    pattern = parse_pattern(pattern_text)
    assert set(match_pattern(build_index(docs), pattern)) == set(
        scan_pattern(docs, pattern)
    )


# ---- kwic ----

def test_kwic_sentence_start_empty_left():
    idx = corpus_of([("so", "cs"), ("that", "cst"), ("we", "pp"), ("could", "vm"),
                     ("go", "vvi")])
    (match,) = match_pattern(idx, parse_pattern("so that"))
    line = kwic(idx, match, 5)
    assert line.left == ""
    assert line.right == "we could go"


def test_kwic_width_zero():
    idx = corpus_of(PRIVACY_SENTENCE)
    (match,) = match_pattern(idx, parse_pattern("so that * _vm*"))
    line = kwic(idx, match, 0)
    assert line.left == "" and line.right == ""


def test_kwic_window_verbatim():
    idx = corpus_of(PRIVACY_SENTENCE)
    (match,) = match_pattern(idx, parse_pattern("so that * _vm*"))
    line = kwic(idx, match, 4)
    window = " ".join(filter(None, [line.left, line.hit, line.right]))
    assert window == "gave us this room so that we could have privacy"


def test_kwic_negative_width():
    idx = corpus_of(PRIVACY_SENTENCE)
    (match,) = match_pattern(idx, parse_pattern("so that * _vm*"))
    with pytest.raises(ValueError):
        kwic(idx, match, -1)


# ---- frequency_series ----

def test_frequency_series_pmw_definition():
    lines = ["#doc id=d1 year=1950 genre=fic"]
    lines += ["hit\tx"] * 5 + ["w\ty"] * (1_000_000 - 5)
    idx = build_index(parse_vertical("\n".join(lines) + "\n"))
    matches = match_pattern(idx, parse_pattern("hit"))
    series = frequency_series(matches, idx)
    assert series.points[0].pmw == 5.0


def test_frequency_series_zero_counts_included(corpus_index):
    series = frequency_series([], corpus_index)
    assert len(series) == len(corpus_index.decades)
    assert all(p.pmw == 0.0 for p in series.points)


def test_frequency_series_matches_hand_recount(corpus_bytes, corpus_index):
    # independent recount: sliding window over raw token lines per document
    text = corpus_bytes.decode("utf-8")
    counts: dict[int, int] = {}
    decade = None
    window: list[str] = []
    for line in text.splitlines():
        if line.startswith("#doc"):
            decade = int(line.split("year=")[1].split()[0]) // 10 * 10
            window = []
        elif line.startswith("#") or not line.strip():
            window = []
        else:
            window.append(line.split("\t")[0].casefold())
            if window[-3:] == ["in", "order", "that"]:
                counts[decade] = counts.get(decade, 0) + 1
    matches = match_pattern(corpus_index, parse_pattern("in order that"))
    series = frequency_series(matches, corpus_index)
    assert {p.decade.start_year: p.count for p in series.points} == counts


def test_frequency_series_genre_filter(corpus_index):
    matches = match_pattern(corpus_index, parse_pattern("in order that"))
    whole = frequency_series(matches, corpus_index)
    by_genre = [
        frequency_series(matches, corpus_index, genre_filter=g)
        for g in sorted(corpus_index.genres)
    ]
    for i, point in enumerate(whole.points):
        assert point.count == sum(s.points[i].count for s in by_genre)


# ---- CSV export ----

def test_export_matches_csv_columns(corpus_index):
    matches = match_pattern(corpus_index, parse_pattern("in order that"))[:3]
    text = export_matches_csv(corpus_index, matches)
    header, *rows = text.splitlines()
    assert header == "doc_id,year,decade,genre,sentence_no,start,end,hit,left,right"
    assert len(rows) == 3
    assert all("in order that" in row.casefold() for row in rows)
