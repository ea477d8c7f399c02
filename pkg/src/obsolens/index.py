"""Immutable corpus index: token postings plus per-(decade, genre) totals."""

from __future__ import annotations

import hashlib
import pickle
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import Decade, Document, bucket_decade

CACHE_VERSION = 1


class EmptyDecade(Exception):
    pass


@dataclass(frozen=True)
class Posting:
    """Location of one token occurrence: document, sentence and token index."""

    doc_no: int
    sentence_no: int
    token_index: int


@dataclass(frozen=True)
class GenreShareTable:
    shares: dict[tuple[Decade, str], float]

    def share(self, decade: Decade, genre: str) -> float:
        return self.shares.get((decade, genre), 0.0)


class CorpusIndex:
    """Read-only index over parsed documents.

    Postings are keyed by normalized form only; POS constraints are checked
    against the stored token at match time.
    """

    def __init__(self, documents: Sequence[Document]):
        self.documents: tuple[Document, ...] = tuple(documents)
        postings: dict[str, list[Posting]] = defaultdict(list)
        slice_totals: dict[tuple[Decade, str], int] = defaultdict(int)
        for doc_no, doc in enumerate(self.documents):
            decade = doc.decade
            for sent_no, sentence in enumerate(doc.sentences):
                for tok in sentence.tokens:
                    postings[tok.norm].append(Posting(doc_no, sent_no, tok.index))
                slice_totals[(decade, doc.genre)] += len(sentence)
        self.postings: dict[str, tuple[Posting, ...]] = {
            form: tuple(plist) for form, plist in postings.items()
        }
        self.slice_totals: dict[tuple[Decade, str], int] = dict(slice_totals)
        self.decades: tuple[Decade, ...] = tuple(
            sorted({d for d, _ in self.slice_totals}, key=lambda d: d.start_year)
        )
        self.genres: frozenset[str] = frozenset(g for _, g in self.slice_totals)

    def total_tokens(self) -> int:
        return sum(self.slice_totals.values())


def build_index(documents: Iterable[Document]) -> CorpusIndex:
    """Build an index; deterministic given document order."""
    return CorpusIndex(list(documents))


def token_totals(index: CorpusIndex, decade: Decade, genre: str | None = None) -> int:
    """Token total for a decade, optionally restricted to one genre. 0 if absent."""
    if genre is not None:
        return index.slice_totals.get((decade, genre), 0)
    return sum(
        count for (d, _), count in index.slice_totals.items() if d == decade
    )


def genre_shares(index: CorpusIndex, decade: Decade) -> GenreShareTable:
    """Per-genre share of the decade's tokens; shares sum to 1."""
    total = token_totals(index, decade)
    if total == 0:
        raise EmptyDecade(f"no tokens in decade {decade}")
    shares = {
        (d, g): count / total
        for (d, g), count in index.slice_totals.items()
        if d == decade
    }
    return GenreShareTable(shares)


def all_genre_shares(index: CorpusIndex) -> GenreShareTable:
    """Shares for every decade present in the index, in one table."""
    shares: dict[tuple[Decade, str], float] = {}
    for decade in index.decades:
        shares.update(genre_shares(index, decade).shares)
    return GenreShareTable(shares)


def corpus_hash(corpus_bytes: bytes) -> str:
    return hashlib.sha256(corpus_bytes).hexdigest()


def save_cache(index: CorpusIndex, path: Path, content_hash: str) -> None:
    """Write the on-disk cache. Internal format, not a compatibility surface."""
    with open(path, "wb") as fh:
        pickle.dump({"version": CACHE_VERSION, "hash": content_hash, "index": index}, fh)


def load_cache(path: Path, content_hash: str) -> CorpusIndex | None:
    """Load a cached index; returns None on any mismatch (stale or wrong version)."""
    try:
        with open(path, "rb") as fh:
            payload = pickle.load(fh)
    except (OSError, pickle.UnpicklingError, EOFError):
        return None
    if payload.get("version") != CACHE_VERSION or payload.get("hash") != content_hash:
        return None
    return payload["index"]
