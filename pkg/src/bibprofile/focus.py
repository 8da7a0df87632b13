"""Research focus: term extraction, relevance selection, co-occurrence maps, subject spread."""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .baselines import JournalMetricsTable, Metric
from .graph import Edge, Graph, Node
from .corpus import PublicationRecord
from .text import normalize_text

MAX_NGRAM = 3
UNCLASSIFIED = "Unclassified"

# Sentence-level punctuation ends a phrase; terms never span it.
_SEGMENT_RE = re.compile(r"[.;:!?,()\[\]{}\"]+|\s[-\u2013\u2014]\s")


class TermSource(str, Enum):
    TITLE_ABSTRACT = "TitleAbstract"
    KEYWORDS = "Keywords"


def default_stopwords() -> frozenset[str]:
    text = resources.files("bibprofile").joinpath("data/stopwords_en.txt").read_text(encoding="utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


def load_stopwords(path: str | Path) -> frozenset[str]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return frozenset(normalize_text(w) for w in lines if w.strip())


@dataclass(frozen=True)
class TermStats:
    term: str
    occurrences: int
    relevance: float = 0.0
    selected: bool = False
    pub_ids: tuple[str, ...] = ()


def phrase_terms(text: str, stopwords: frozenset[str]) -> set[str]:
    """All contiguous 1..3-grams of ``text`` that neither contain nor cross a stopword."""
    terms: set[str] = set()
    for segment in _SEGMENT_RE.split(text or ""):
        run: list[str] = []
        for token in [*normalize_text(segment).split(), None]:
            if token is None or token in stopwords:
                for n in range(1, MAX_NGRAM + 1):
                    for i in range(len(run) - n + 1):
                        terms.add(" ".join(run[i : i + n]))
                run = []
            else:
                run.append(token)
    return terms


def terms_of(
    pub: PublicationRecord, source: TermSource, stopwords: frozenset[str]
) -> set[str]:
    if source is TermSource.KEYWORDS:
        return {k for k in (normalize_text(kw) for kw in pub.keywords) if k}
    return phrase_terms(pub.title, stopwords) | phrase_terms(pub.abstract or "", stopwords)


def extract_terms(
    pubs: Iterable[PublicationRecord],
    source: TermSource | str = TermSource.TITLE_ABSTRACT,
    stopwords: frozenset[str] | None = None,
) -> list[TermStats]:
    """Terms with the number of publications containing them, sorted by term."""
    source = TermSource(source)
    stopwords = default_stopwords() if stopwords is None else stopwords
    holders: dict[str, list[str]] = {}
    for pub in pubs:
        for term in terms_of(pub, source, stopwords):
            holders.setdefault(term, []).append(pub.id)
    return [
        TermStats(term, len(ids), pub_ids=tuple(sorted(ids))) for term, ids in sorted(holders.items())
    ]


def select_terms(
    terms: Sequence[TermStats],
    citations: Mapping[str, int],
    min_occurrences: int = 2,
    keep_fraction: float = 0.6,
) -> list[TermStats]:
    """Keep the most relevant share of the terms that pass the occurrence threshold.

    Relevance is the mean citation count of the publications containing the term.
    """
    if not 0 < keep_fraction <= 1:
        raise ValueError("keep_fraction must be in (0, 1]")
    if min_occurrences < 1:
        raise ValueError("min_occurrences must be >= 1")
    passing = [
        replace(t, relevance=math.fsum(citations.get(i, 0) for i in t.pub_ids) / len(t.pub_ids))
        for t in terms
        if t.occurrences >= min_occurrences and t.pub_ids
    ]
    keep = math.ceil(keep_fraction * len(passing))
    passing.sort(key=lambda t: (-t.relevance, -t.occurrences, t.term))
    return [replace(t, selected=True) for t in passing[:keep]]


def term_cooccurrence_map(pubs: Sequence[PublicationRecord], selected_terms: Sequence[TermStats]) -> Graph:
    """Terms weighted by occurrences, linked by the number of publications containing both."""
    pub_ids = {p.id for p in pubs}
    holders = {t.term: set(t.pub_ids) & pub_ids for t in selected_terms}
    nodes = tuple(Node(term, term, float(len(ids))) for term, ids in sorted(holders.items()))
    edges = []
    for a, b in combinations(sorted(holders), 2):
        w = len(holders[a] & holders[b])
        if w:
            edges.append(Edge(a, b, float(w)))
    return Graph(nodes, tuple(edges))


@dataclass(frozen=True)
class InterdisciplinarityProfile:
    category_counts: dict[str, int]
    distinct_categories: int
    unclassified: int


def interdisciplinarity(
    pubs: Iterable[PublicationRecord],
    metrics_table: JournalMetricsTable | None,
    metric: Metric | None = None,
    edition_year: int | None = None,
) -> InterdisciplinarityProfile:
    """Subject categories of the publishing venues; multiple assignments all count."""
    counts: Counter[str] = Counter()
    unclassified = 0
    for pub in pubs:
        cats = (
            metrics_table.categories_of(pub.venue_id, metric, edition_year)
            if metrics_table is not None and pub.venue_id
            else ()
        )
        if cats:
            counts.update(cats)
        else:
            unclassified += 1
    return InterdisciplinarityProfile(
        category_counts=dict(sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))),
        distinct_categories=len(counts),
        unclassified=unclassified,
    )
