"""Co-authorship, country and coupling networks; cooperation and citing-side analyses."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .baselines import BaselineTable, JournalMetricsTable, LookupFailure, Metric, percentile_flags
from .config import Window
from .corpus import AuthorIdentity, Corpus, PublicationRecord, Sector
from .graph import Edge, Graph, Node, cooccurrence_graph
from .indicators import (
    CountShare,
    QuartileResolver,
    citation_count,
    in_window,
    normalized_impact,
    quartile_distribution,
    rank_counts,
)
from .text import normalize_name

INTERNATIONAL = "international"
NATIONAL = "national"
DOMESTIC = "domestic"


def coauthor_network(corpus: Corpus, window: Window | None = None) -> Graph:
    """Authors weighted by publication count, linked by co-publication count."""
    pubs = in_window(corpus.focal_pubs, window)
    identity = AuthorIdentity(a for p in pubs for a in p.authors)
    groups = [{identity.key(a) for a in p.authors} for p in pubs]
    labels = {k: identity.label(k) for g in groups for k in g}
    return cooccurrence_graph(groups, labels)


def _country_graph(pubs: Iterable[PublicationRecord]) -> Graph:
    return cooccurrence_graph({a.country for a in p.affiliations} for p in pubs)


def country_copub_network(corpus: Corpus, window: Window | None = None) -> Graph:
    return _country_graph(in_window(corpus.focal_pubs, window))


def citing_country_network(corpus: Corpus) -> Graph:
    return _country_graph(corpus.citing_pubs)


# ---------------------------------------------------------------------------
# Collaboration classes
# ---------------------------------------------------------------------------


def collaboration_class(pub: PublicationRecord, home_country: str) -> str | None:
    """International beats national beats domestic; ``None`` without affiliations."""
    if not pub.affiliations:
        return None
    if any(a.country != home_country for a in pub.affiliations):
        return INTERNATIONAL
    if len({normalize_name(a.institution) for a in pub.affiliations}) >= 2:
        return NATIONAL
    return DOMESTIC


@dataclass(frozen=True)
class CollaborationWindow:
    window: Window | None
    classified: int
    unclassified: int
    counts: dict[str, int]
    shares: dict[str, float]


@dataclass(frozen=True)
class CollaborationShares:
    periods: tuple[CollaborationWindow, ...]


def collaboration_shares(corpus: Corpus, windows: Sequence[Window | None]) -> CollaborationShares:
    periods = []
    for window in windows:
        counts = {INTERNATIONAL: 0, NATIONAL: 0, DOMESTIC: 0}
        unclassified = 0
        for pub in in_window(corpus.focal_pubs, window):
            cls = collaboration_class(pub, corpus.home_country)
            if cls is None:
                unclassified += 1
            else:
                counts[cls] += 1
        n = sum(counts.values())
        periods.append(
            CollaborationWindow(
                window=window,
                classified=n,
                unclassified=unclassified,
                counts=counts,
                shares={k: (v / n if n else 0.0) for k, v in counts.items()},
            )
        )
    return CollaborationShares(tuple(periods))


# ---------------------------------------------------------------------------
# Institution cooperation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CooperationRow:
    institution: str
    country: str
    copubs: CountShare
    citations: int
    cnci: float | None
    top10_pct: float
    top1_pct: float
    intl_pct: float
    industry_pct: float


def _is_home(aff_institution: str, is_home: bool, home: str) -> bool:
    return is_home or normalize_name(aff_institution) == normalize_name(home)


def institution_cooperation_table(
    corpus: Corpus,
    baselines: BaselineTable | None,
    metrics_table: JournalMetricsTable | None = None,
    window: Window | None = None,
    primary_source: str | None = None,
    metric: Metric = Metric.IF,
    max_rows: int | None = None,
) -> list[CooperationRow]:
    """One row per external institution, with impact computed over the shared records."""
    pubs = in_window(corpus.focal_pubs, window)
    if primary_source is None:
        sources = corpus.source_names()
        primary_source = sources[0] if sources else None
    edge_counts = corpus.edge_counts()
    citations = {p.id: citation_count(p, primary_source, edge_counts) for p in pubs}
    resolver = QuartileResolver(metrics_table, metric)

    shared: dict[str, list[PublicationRecord]] = {}
    names: dict[str, tuple[str, str]] = {}
    for pub in pubs:
        seen = set()
        for aff in pub.affiliations:
            if _is_home(aff.institution, aff.is_home, corpus.home_institution):
                continue
            key = normalize_name(aff.institution)
            names.setdefault(key, (aff.institution, aff.country))
            if key not in seen:
                seen.add(key)
                shared.setdefault(key, []).append(pub)

    rows = []
    for key, subset in shared.items():
        norm = normalized_impact(subset, citations, baselines, resolver)
        n = len(subset)
        rows.append(
            CooperationRow(
                institution=names[key][0],
                country=names[key][1],
                copubs=CountShare.of(n, len(pubs)),
                citations=sum(citations[p.id] for p in subset),
                cnci=norm.cnci_mean,
                top10_pct=norm.top10.percent,
                top1_pct=norm.top1.percent,
                intl_pct=sum(
                    collaboration_class(p, corpus.home_country) == INTERNATIONAL for p in subset
                )
                / n,
                industry_pct=sum(
                    any(a.sector is Sector.INDUSTRY for a in p.affiliations) for p in subset
                )
                / n,
            )
        )
    rows.sort(key=lambda r: (-r.copubs.count, -r.citations, r.institution))
    return rows[:max_rows] if max_rows is not None else rows


# ---------------------------------------------------------------------------
# Citing documents
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CitingDocsProfile:
    citing_publications: int
    quartile_distribution: dict[str, int]
    top_quartile_share: float
    cnci_mean: float | None
    top10: CountShare
    top1: CountShare
    assessed: int
    excluded: tuple[str, ...]
    warnings: tuple[str, ...]


def citing_docs_profile(
    corpus: Corpus,
    metrics_table: JournalMetricsTable | None,
    baselines: BaselineTable | None,
    primary_source: str | None = None,
    metric: Metric = Metric.IF,
    edition_year: int | None = None,
    edition_mode: str = "latest",
) -> CitingDocsProfile:
    """Visibility and normalized impact of the documents citing the focal corpus."""
    pubs = list(corpus.citing_pubs)
    resolver = QuartileResolver(metrics_table, metric, edition_year, edition_mode)
    dist = quartile_distribution(pubs, resolver, include_missing_venue=True)
    if primary_source is None:
        sources = corpus.source_names()
        primary_source = sources[0] if sources else None
    citations = {p.id: p.times_cited.get(primary_source, 0) if primary_source else 0 for p in pubs}
    norm = normalized_impact(pubs, citations, baselines, resolver)
    return CitingDocsProfile(
        citing_publications=len(pubs),
        quartile_distribution=dist,
        top_quartile_share=dist["Q1"] / len(pubs) if pubs else 0.0,
        cnci_mean=norm.cnci_mean,
        top10=norm.top10,
        top1=norm.top1,
        assessed=norm.assessed,
        excluded=norm.excluded,
        warnings=norm.warnings,
    )


# ---------------------------------------------------------------------------
# Field analyses
# ---------------------------------------------------------------------------


def reference_keys(pub: PublicationRecord) -> set[str]:
    return {r.key for r in pub.references if r.key}


def bibliographic_coupling(pubs: Sequence[PublicationRecord]) -> Graph:
    """Publications linked by the number of cited references they share."""
    refs = {p.id: reference_keys(p) for p in pubs}
    nodes = tuple(Node(p.id, p.title or p.id, 1.0) for p in sorted(pubs, key=lambda p: p.id))
    edges = []
    for a, b in combinations(sorted(refs), 2):
        w = len(refs[a] & refs[b])
        if w:
            edges.append(Edge(a, b, float(w)))
    return Graph(nodes, tuple(edges))


@dataclass(frozen=True)
class RankedPublication:
    id: str
    title: str
    year: int
    first_author: str
    citations: int
    top10: bool | None
    top1: bool | None


@dataclass(frozen=True)
class KeyActors:
    authors: tuple[tuple[str, int], ...]
    institutions: tuple[tuple[str, int], ...]
    funders: tuple[tuple[str, int], ...]
    publications: tuple[RankedPublication, ...]
    first_authors_by_citations: tuple[tuple[str, int], ...]


def key_actors(
    pubs: Sequence[PublicationRecord],
    baselines: BaselineTable | None = None,
    metrics_table: JournalMetricsTable | None = None,
    primary_source: str | None = None,
    metric: Metric = Metric.IF,
) -> KeyActors:
    """Most active authors, institutions and funders, and the most cited records."""
    identity = AuthorIdentity(a for p in pubs for a in p.authors)
    authors: Counter[str] = Counter()
    institutions: Counter[str] = Counter()
    funders: Counter[str] = Counter()
    inst_labels: dict[str, str] = {}
    for pub in pubs:
        authors.update({identity.label(identity.key(a)) for a in pub.authors})
        for aff in pub.affiliations:
            inst_labels.setdefault(normalize_name(aff.institution), aff.institution)
        institutions.update({inst_labels[normalize_name(a.institution)] for a in pub.affiliations})
        funders.update({f.strip() for f in pub.funders if f.strip()})

    citations = {
        p.id: p.times_cited.get(primary_source, 0) if primary_source else max(p.times_cited.values(), default=0)
        for p in pubs
    }
    flags: dict[str, tuple[bool, bool]] = {}
    if baselines is not None:
        resolver = QuartileResolver(metrics_table, metric)
        for pub in pubs:
            cats = resolver.categories(pub.venue_id, pub.year)
            try:
                f = percentile_flags(citations[pub.id], cats, pub.year, pub.doc_type, baselines)
            except LookupFailure:
                continue
            flags[pub.id] = (f.top10, f.top1)

    ranked = sorted(pubs, key=lambda p: (-citations[p.id], p.id))
    first_cites: Counter[str] = Counter()
    for pub in pubs:
        first_cites[identity.label(identity.key(pub.authors[0]))] += citations[pub.id]
    return KeyActors(
        authors=rank_counts(authors),
        institutions=rank_counts(institutions),
        funders=rank_counts(funders),
        publications=tuple(
            RankedPublication(
                id=p.id,
                title=p.title,
                year=p.year,
                first_author=p.authors[0].display_name,
                citations=citations[p.id],
                top10=flags[p.id][0] if p.id in flags else None,
                top1=flags[p.id][1] if p.id in flags else None,
            )
            for p in ranked
        ),
        first_authors_by_citations=rank_counts(first_cites),
    )
