"""Token-pattern language, matcher, KWIC rendering and frequency series.

Pattern syntax, whitespace-separated elements:
  word      literal token (case-insensitive)
  *         any single token
  _vm       exact POS tag vm
  _vm*      POS tags starting with vm
Matches never cross sentence boundaries; a `*` matches exactly one token.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import Decade, Document, Sentence, Token, normalize_form
from .index import CorpusIndex
from .stats import FrequencyPoint, FrequencySeries, per_million


class PatternError(Exception):
    pass


class EmptyPattern(PatternError):
    pass


class AllWildcards(PatternError):
    pass


class BareUnderscore(PatternError):
    pass


@dataclass(frozen=True)
class Literal:
    form: str


@dataclass(frozen=True)
class Wildcard:
    pass


@dataclass(frozen=True)
class TagConstraint:
    prefix: str
    exact: bool


PatternElement = Literal | Wildcard | TagConstraint


@dataclass(frozen=True)
class QueryPattern:
    elements: tuple[PatternElement, ...]
    source: str

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class Match:
    doc_id: str
    doc_no: int
    sentence_no: int
    start: int
    end: int  # inclusive
    decade: Decade
    genre: str
    year: int


@dataclass(frozen=True)
class ConcordanceLine:
    left: str
    hit: str
    right: str
    match: Match


def parse_pattern(text: str) -> QueryPattern:
    parts = text.split()
    if not parts:
        raise EmptyPattern("pattern is empty")
    elements: list[PatternElement] = []
    for part in parts:
        if part == "*":
            elements.append(Wildcard())
        elif part.startswith("_"):
            tag = part[1:]
            exact = True
            if tag.endswith("*"):
                tag = tag[:-1]
                exact = False
            if not tag:
                raise BareUnderscore(f"tag constraint {part!r} names no tag")
            elements.append(TagConstraint(prefix=tag.casefold(), exact=exact))
        else:
            elements.append(Literal(normalize_form(part)))
    if all(isinstance(e, Wildcard) for e in elements):
        raise AllWildcards("pattern must contain at least one non-wildcard element")
    return QueryPattern(tuple(elements), source=text)


def element_matches(element: PatternElement, token: Token) -> bool:
    if isinstance(element, Literal):
        return token.norm == element.form
    if isinstance(element, Wildcard):
        return True
    tag = token.pos.casefold()
    return tag == element.prefix if element.exact else tag.startswith(element.prefix)


def _window_matches(
    elements: Sequence[PatternElement], sentence: Sentence, start: int
) -> bool:
    return all(
        element_matches(el, sentence.tokens[start + i]) for i, el in enumerate(elements)
    )


def _make_match(doc_no: int, doc: Document, sentence_no: int, start: int, length: int) -> Match:
    return Match(
        doc_id=doc.doc_id,
        doc_no=doc_no,
        sentence_no=sentence_no,
        start=start,
        end=start + length - 1,
        decade=doc.decade,
        genre=doc.genre,
        year=doc.year,
    )


def match_pattern(index: CorpusIndex, pattern: QueryPattern) -> list[Match]:
    """All sentence-internal windows matching the pattern, overlaps included,
    ordered by (document, sentence, start).

    Uses the rarest literal's postings as candidate anchors; patterns without
    a literal fall back to scanning every sentence.
    """
    m = len(pattern)
    anchor_offset = None
    anchor_postings = None
    for offset, element in enumerate(pattern.elements):
        if isinstance(element, Literal):
            postings = index.postings.get(element.form, ())
            if anchor_postings is None or len(postings) < len(anchor_postings):
                anchor_offset = offset
                anchor_postings = postings
    matches: list[Match] = []
    if anchor_postings is not None:
        for posting in anchor_postings:
            start = posting.token_index - anchor_offset
            doc = index.documents[posting.doc_no]
            sentence = doc.sentences[posting.sentence_no]
            if start < 0 or start + m > len(sentence):
                continue
            if _window_matches(pattern.elements, sentence, start):
                matches.append(
                    _make_match(posting.doc_no, doc, posting.sentence_no, start, m)
                )
        matches.sort(key=lambda mt: (mt.doc_no, mt.sentence_no, mt.start))
        return matches
    for doc_no, doc in enumerate(index.documents):
        for sentence_no, sentence in enumerate(doc.sentences):
            for start in range(len(sentence) - m + 1):
                if _window_matches(pattern.elements, sentence, start):
                    matches.append(_make_match(doc_no, doc, sentence_no, start, m))
    return matches


def scan_pattern(documents: Sequence[Document], pattern: QueryPattern) -> list[Match]:
    """Index-free linear scan over every window; reference implementation kept
    deliberately simple so it can serve as an oracle for match_pattern.
    """
    m = len(pattern)
    matches: list[Match] = []
    for doc_no, doc in enumerate(documents):
        for sentence_no, sentence in enumerate(doc.sentences):
            for start in range(len(sentence) - m + 1):
                if _window_matches(pattern.elements, sentence, start):
                    matches.append(_make_match(doc_no, doc, sentence_no, start, m))
    return matches


def kwic(index: CorpusIndex, match: Match, width: int) -> ConcordanceLine:
    """Keyword-in-context line with up to `width` tokens of same-sentence context."""
    if width < 0:
        raise ValueError("width must be >= 0")
    sentence = index.documents[match.doc_no].sentences[match.sentence_no]
    surfaces = [t.surface for t in sentence.tokens]
    left = surfaces[max(0, match.start - width) : match.start]
    hit = surfaces[match.start : match.end + 1]
    right = surfaces[match.end + 1 : match.end + 1 + width]
    return ConcordanceLine(" ".join(left), " ".join(hit), " ".join(right), match)


def frequency_series(
    matches: Iterable[Match],
    index: CorpusIndex,
    label: str = "",
    genre_filter: str | None = None,
) -> FrequencySeries:
    """Per-decade pmw series over every decade present in the index.

    With a genre filter, both match counts and token denominators are
    restricted to that genre. Decades whose (filtered) total is zero are
    omitted rather than reported as fake zeros.
    """
    from .index import token_totals

    counts: dict[Decade, int] = {}
    for match in matches:
        if genre_filter is not None and match.genre != genre_filter:
            continue
        counts[match.decade] = counts.get(match.decade, 0) + 1
    points = []
    for decade in index.decades:
        total = token_totals(index, decade, genre_filter)
        if total == 0:
            continue
        count = counts.get(decade, 0)
        points.append(FrequencyPoint(decade, count, total, per_million(count, total)))
    return FrequencySeries(label, tuple(points))


def export_matches_csv(index: CorpusIndex, matches: Iterable[Match], width: int = 8) -> str:
    """RFC 4180 CSV of matches with KWIC context."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["doc_id", "year", "decade", "genre", "sentence_no", "start", "end",
         "hit", "left", "right"]
    )
    for match in matches:
        line = kwic(index, match, width)
        writer.writerow(
            [match.doc_id, match.year, match.decade.start_year, match.genre,
             match.sentence_no, match.start, match.end, line.hit, line.left,
             line.right]
        )
    return buf.getvalue()
