"""Vertical-format corpus parsing and the basic time/genre vocabulary.

A corpus file is one token per line (``surface<TAB>pos[<TAB>lemma]``),
with blank lines closing sentences and ``#doc`` header lines opening
documents.  Lines starting with ``##`` are comments.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, Iterator

MIN_YEAR = 1500
MAX_YEAR = 2100


class CorpusError(Exception):
    """Base class for vertical-format parse errors; carries a line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class MalformedHeader(CorpusError):
    pass


class BadTokenLine(CorpusError):
    pass


class NonNumericYear(CorpusError):
    pass


def normalize_form(surface: str) -> str:
    """Case-fold a surface form. No stemming, no lemmatization."""
    return surface.casefold()


@dataclass(frozen=True)
class Decade:
    start_year: int

    def __post_init__(self):
        if self.start_year % 10 != 0:
            raise ValueError(f"decade start must be a multiple of 10: {self.start_year}")

    def __lt__(self, other: "Decade") -> bool:
        return self.start_year < other.start_year

    def __str__(self) -> str:
        return str(self.start_year)


def bucket_decade(year: int) -> Decade:
    """Floor a calendar year to its decade."""
    return Decade(year - year % 10)


@dataclass(frozen=True)
class Token:
    surface: str
    pos: str
    index: int
    lemma: str | None = None
    norm: str = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "norm", normalize_form(self.surface))


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("sentence must contain at least one token")

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Document:
    doc_id: str
    year: int
    genre: str
    sentences: tuple[Sentence, ...]

    def __post_init__(self):
        if not (MIN_YEAR <= self.year <= MAX_YEAR):
            raise ValueError(f"year out of range [{MIN_YEAR}, {MAX_YEAR}]: {self.year}")
        if not self.genre:
            raise ValueError("genre must be non-empty")

    @property
    def decade(self) -> Decade:
        return bucket_decade(self.year)

    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)


def _parse_header(line: str, line_no: int) -> tuple[str, int, str]:
    fields = line.split()
    kv: dict[str, str] = {}
    for part in fields[1:]:
        key, sep, value = part.partition("=")
        if sep:
            kv[key] = value
    missing = {"id", "year", "genre"} - kv.keys()
    if missing:
        raise MalformedHeader(f"header missing {', '.join(sorted(missing))}", line_no)
    try:
        year = int(kv["year"])
    except ValueError:
        raise NonNumericYear(f"non-numeric year {kv['year']!r}", line_no) from None
    return kv["id"], year, kv["genre"]


def parse_vertical(stream: io.IOBase | Iterable[str] | bytes | str) -> list[Document]:
    """Parse a vertical-format stream into documents, in file order.

    Accepts bytes, text, or any iterable of lines. Raises MalformedHeader,
    NonNumericYear or BadTokenLine with the offending line number.
    """
    if isinstance(stream, bytes):
        lines: Iterable[str] = stream.decode("utf-8").splitlines()
    elif isinstance(stream, str):
        lines = stream.splitlines()
    else:
        lines = stream

    documents: list[Document] = []
    header: tuple[str, int, str] | None = None
    sentences: list[Sentence] = []
    tokens: list[Token] = []
    seen_ids: set[str] = set()

    def close_sentence():
        nonlocal tokens
        if tokens:
            sentences.append(Sentence(tuple(tokens)))
            tokens = []

    def close_document(line_no: int):
        nonlocal sentences
        close_sentence()
        if header is not None:
            doc_id, year, genre = header
            if doc_id in seen_ids:
                raise MalformedHeader(f"duplicate doc id {doc_id!r}", line_no)
            seen_ids.add(doc_id)
            try:
                documents.append(Document(doc_id, year, genre, tuple(sentences)))
            except ValueError as exc:
                raise MalformedHeader(str(exc), line_no) from None
        sentences = []

    line_no = 0
    for raw in lines:
        line_no += 1
        line = raw.rstrip("\r\n")
        if line.startswith("##"):
            continue
        if line.startswith("#doc"):
            close_document(line_no)
            header = _parse_header(line, line_no)
            continue
        if not line.strip():
            close_sentence()
            continue
        if header is None:
            raise MalformedHeader("token line before any #doc header", line_no)
        fields = line.split("\t")
        if len(fields) < 2 or not fields[0] or not fields[1]:
            raise BadTokenLine(f"expected surface<TAB>pos, got {line!r}", line_no)
        lemma = fields[2] if len(fields) > 2 else None
        tokens.append(Token(fields[0], fields[1], index=len(tokens), lemma=lemma))
    close_document(line_no + 1)
    return documents


def serialize_vertical(documents: Iterable[Document]) -> str:
    """Render documents back to vertical format (round-trips with parse_vertical)."""
    out: list[str] = []
    for doc in documents:
        out.append(f"#doc id={doc.doc_id} year={doc.year} genre={doc.genre}")
        for sentence in doc.sentences:
            for tok in sentence.tokens:
                if tok.lemma is not None:
                    out.append(f"{tok.surface}\t{tok.pos}\t{tok.lemma}")
                else:
                    out.append(f"{tok.surface}\t{tok.pos}")
            out.append("")
    return "\n".join(out) + ("\n" if out else "")


def iter_tokens(documents: Iterable[Document]) -> Iterator[Token]:
    for doc in documents:
        for sentence in doc.sentences:
            yield from sentence.tokens
