"""Activity, co-authorship, funding, visibility and impact indicators."""

from __future__ import annotations

import logging
import math
import statistics
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .baselines import (
    BaselineTable,
    JournalMetricsTable,
    LookupFailure,
    Metric,
    Quartile,
    TopJournalList,
    best_quartile,
    expected_citations,
    percentile_flags,
)
from .config import Config, Window
from .corpus import (
    AuthorIdentity,
    Corpus,
    CoverageResult,
    PublicationRecord,
)

logger = logging.getLogger(__name__)

UNRANKED = "Unranked"
QUARTILE_LABELS = (*(q.value for q in Quartile), UNRANKED)


class Scope(str, Enum):
    CITABLE = "CitableItems"
    ALL = "AllItems"


def in_scope(pubs: Iterable[PublicationRecord], scope: Scope) -> list[PublicationRecord]:
    if scope is Scope.CITABLE:
        return [p for p in pubs if p.is_citable]
    return list(pubs)


def in_window(pubs: Iterable[PublicationRecord], window: Window | None) -> list[PublicationRecord]:
    if window is None:
        return list(pubs)
    return [p for p in pubs if p.year in window]


def citation_count(pub: PublicationRecord, source: str | None, edge_counts: Mapping[str, int]) -> int:
    """Citations of ``pub`` in ``source``; falls back to the edge-derived count."""
    if source is not None and source in pub.times_cited:
        return pub.times_cited[source]
    return edge_counts.get(pub.id, 0)


def _share(count: int, total: int) -> float:
    return count / total if total else 0.0


@dataclass(frozen=True)
class CountShare:
    count: int
    percent: float

    @classmethod
    def of(cls, count: int, total: int) -> CountShare:
        return cls(count, _share(count, total))


# ---------------------------------------------------------------------------
# Activity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ActivityProfile:
    window: Window
    per_year_counts: dict[int, dict[str, int]]
    doc_type_totals: dict[str, int]
    window_total: int
    citable_total: int
    trend_slope: float
    earlier_count: int
    current_incomplete_year_count: int


def ols_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    n = len(xs)
    if n < 2:
        return 0.0
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        return 0.0
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx


def activity_profile(
    corpus: Corpus, window: Window, reference_year: int | None = None
) -> ActivityProfile:
    """Yearly output by document type over a window of complete years."""
    if reference_year is not None and window.end >= reference_year:
        raise ValueError(f"window {window.label} includes the incomplete year {reference_year}")
    per_year: dict[int, dict[str, int]] = {y: {"total": 0, "citable": 0} for y in window.years}
    doc_totals: Counter[str] = Counter()
    earlier = later = 0
    for pub in corpus.focal_pubs:
        if pub.year < window.start:
            earlier += 1
            continue
        if pub.year > window.end:
            later += 1
            continue
        row = per_year[pub.year]
        row[pub.doc_type.value] = row.get(pub.doc_type.value, 0) + 1
        row["total"] += 1
        row["citable"] += pub.is_citable
        doc_totals[pub.doc_type.value] += 1
    totals = [per_year[y]["total"] for y in window.years]
    return ActivityProfile(
        window=window,
        per_year_counts=per_year,
        doc_type_totals=dict(sorted(doc_totals.items())),
        window_total=sum(totals),
        citable_total=sum(per_year[y]["citable"] for y in window.years),
        trend_slope=ols_slope(list(window.years), totals),
        earlier_count=earlier,
        current_incomplete_year_count=later,
    )


# ---------------------------------------------------------------------------
# Co-authorship
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoauthorStats:
    window: Window | None
    publications: int
    coauthors_total: int
    distinct_coauthors: int
    coauthors_mean: float
    coauthors_median: float
    coauthors_max: int
    single_authored: CountShare
    first: CountShare
    last: CountShare
    corresponding: CountShare
    dependence_key: str | None
    dependence_label: str | None
    dependence_share: float
    dependence_flag: bool
    alphabetical_share: float
    alphabetical_suppressed: bool


@dataclass(frozen=True)
class CoauthorProfile:
    periods: tuple[CoauthorStats, ...]

    @property
    def headline(self) -> CoauthorStats:
        return self.periods[0]


def _is_alphabetical(pub: PublicationRecord) -> bool:
    keys = [a.normalized_key for a in pub.authors]
    return keys == sorted(keys)


def _coauthor_stats(
    corpus: Corpus,
    pubs: list[PublicationRecord],
    window: Window | None,
    identity: AuthorIdentity,
    flag_min: float,
    suppress_min: float,
) -> CoauthorStats:
    n = len(pubs)
    counts = [len(p.authors) - 1 for p in pubs]
    first = last = corresponding = 0
    shared: Counter[str] = Counter()
    multi = [p for p in pubs if len(p.authors) > 1]
    for pub in pubs:
        idx = corpus.focal_index(pub)
        if idx is not None:
            first += idx == 0
            last += idx == len(pub.authors) - 1
            if pub.corresponding_author_index is None:
                corresponding += len(pub.authors) == 1
            else:
                corresponding += idx == pub.corresponding_author_index
        coauthors = {
            identity.key(a)
            for i, a in enumerate(pub.authors)
            if i != idx and not corpus.is_focal_author(a)
        }
        shared.update(coauthors)
    if shared:
        dep_key, dep_count = min(shared.items(), key=lambda kv: (-kv[1], kv[0]))
    else:
        dep_key, dep_count = None, 0
    dep_share = _share(dep_count, n)
    alpha = _share(sum(_is_alphabetical(p) for p in multi), len(multi))
    return CoauthorStats(
        window=window,
        publications=n,
        coauthors_total=sum(counts),
        distinct_coauthors=len(shared),
        coauthors_mean=statistics.fmean(counts) if counts else 0.0,
        coauthors_median=float(statistics.median(counts)) if counts else 0.0,
        coauthors_max=max(counts, default=0),
        single_authored=CountShare.of(sum(c == 0 for c in counts), n),
        first=CountShare.of(first, n),
        last=CountShare.of(last, n),
        corresponding=CountShare.of(corresponding, n),
        dependence_key=dep_key,
        dependence_label=identity.label(dep_key) if dep_key else None,
        dependence_share=dep_share,
        dependence_flag=dep_share > flag_min,
        alphabetical_share=alpha,
        alphabetical_suppressed=bool(multi) and alpha >= suppress_min,
    )


def coauthor_profile(
    corpus: Corpus,
    windows: Sequence[Window | None],
    dependence_flag_min: float = 0.75,
    alphabetical_suppress_min: float = 0.80,
) -> CoauthorProfile:
    """Co-author counts, author roles and co-author dependence per period.

    ``None`` in ``windows`` stands for the whole corpus.
    """
    identity = AuthorIdentity(a for p in corpus.focal_pubs for a in p.authors)
    return CoauthorProfile(
        tuple(
            _coauthor_stats(
                corpus,
                in_window(corpus.focal_pubs, w),
                w,
                identity,
                dependence_flag_min,
                alphabetical_suppress_min,
            )
            for w in windows
        )
    )


# ---------------------------------------------------------------------------
# Funding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FundingProfile:
    publications: int
    funded: CountShare
    funder_ranking: tuple[tuple[str, int], ...]


def rank_counts(counter: Mapping[str, int]) -> tuple[tuple[str, int], ...]:
    """Sort by count descending, then name."""
    return tuple(sorted(counter.items(), key=lambda kv: (-kv[1], kv[0])))


def funding_profile(corpus: Corpus, window: Window | None = None) -> FundingProfile:
    pubs = in_window(corpus.focal_pubs, window)
    funders: Counter[str] = Counter()
    for pub in pubs:
        funders.update({f.strip() for f in pub.funders if f.strip()})
    funded = sum(1 for p in pubs if any(f.strip() for f in p.funders))
    return FundingProfile(len(pubs), CountShare.of(funded, len(pubs)), rank_counts(funders))


# ---------------------------------------------------------------------------
# Visibility
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JournalRow:
    venue_id: str
    venue_name: str
    items: int
    citations: int
    metric_value: float | None
    quartile: str


@dataclass(frozen=True)
class VisibilityProfile:
    window: Window
    metric: str
    edition_year: int | None
    coverage: dict[str, CoverageResult]
    publications: int
    english: CountShare
    open_access: CountShare
    quartile_distribution: dict[str, dict[str, int]]
    journal_table: tuple[JournalRow, ...]
    top_list_counts: dict[str, int]


def empty_distribution() -> dict[str, int]:
    return {label: 0 for label in QUARTILE_LABELS}


class QuartileResolver:
    """Best quartile of a venue under the configured metric and edition policy."""

    def __init__(
        self,
        table: JournalMetricsTable | None,
        metric: Metric,
        edition_year: int | None = None,
        mode: str = "latest",
    ):
        self.metric = metric
        self.mode = mode
        table = table or JournalMetricsTable([])
        self.table = table.averaged(metric) if mode == "mean" else table
        self.edition = edition_year if edition_year is not None else self.table.latest_edition(metric)

    def edition_for(self, pub_year: int | None) -> int | None:
        if self.mode == "publication_year" and pub_year is not None:
            return pub_year
        return self.edition

    def quartile(self, venue_id: str | None, pub_year: int | None = None) -> str:
        edition = self.edition_for(pub_year)
        if not venue_id or edition is None:
            return UNRANKED
        try:
            return best_quartile(venue_id, self.metric, edition, self.table).quartile.value
        except LookupFailure:
            return UNRANKED

    def value(self, venue_id: str) -> float | None:
        row = self.table.get(venue_id, self.metric, self.edition) if self.edition else None
        return row.value if row else None

    def categories(self, venue_id: str | None, pub_year: int | None = None) -> tuple[str, ...]:
        if not venue_id:
            return ()
        return self.table.categories_of(venue_id, self.metric, self.edition_for(pub_year))


def quartile_distribution(
    pubs: Iterable[PublicationRecord], resolver: QuartileResolver, include_missing_venue: bool = False
) -> dict[str, int]:
    dist = empty_distribution()
    for pub in pubs:
        if pub.venue_id or include_missing_venue:
            dist[resolver.quartile(pub.venue_id, pub.year)] += 1
    return dist


def visibility_profile(
    corpus: Corpus,
    metrics_table: JournalMetricsTable | None,
    config: Config,
    top_lists: Sequence[TopJournalList] = (),
    coverage: Mapping[str, CoverageResult] | None = None,
) -> VisibilityProfile:
    window = config.window
    resolver = QuartileResolver(
        metrics_table, config.visibility_metric, config.visibility_edition_year, config.visibility_edition_mode
    )
    pubs = in_window(corpus.focal_pubs, window)
    source = config.primary_source(corpus.source_names())
    edge_counts = corpus.edge_counts()

    distributions = {window.label: quartile_distribution(pubs, resolver)}
    if window.start != window.end:
        for half in window.halves():
            distributions[half.label] = quartile_distribution(in_window(pubs, half), resolver)

    grouped: dict[str, list[PublicationRecord]] = {}
    for pub in pubs:
        if pub.venue_id:
            grouped.setdefault(pub.venue_id, []).append(pub)
    rows = [
        JournalRow(
            venue_id=vid,
            venue_name=items[0].venue_name,
            items=len(items),
            citations=sum(citation_count(p, source, edge_counts) for p in items),
            metric_value=resolver.value(vid),
            quartile=resolver.quartile(vid),
        )
        for vid, items in grouped.items()
    ]
    rows.sort(key=lambda r: (-r.items, -r.citations, r.venue_name, r.venue_id))

    return VisibilityProfile(
        window=window,
        metric=config.visibility_metric.value,
        edition_year=resolver.edition,
        coverage=dict(coverage or {}),
        publications=len(pubs),
        english=CountShare.of(sum(p.is_english for p in pubs), len(pubs)),
        open_access=CountShare.of(sum(p.open_access for p in pubs), len(pubs)),
        quartile_distribution=distributions,
        journal_table=tuple(rows),
        top_list_counts={
            tl.name: sum(1 for p in pubs if p.venue_id in tl.journal_ids) for tl in top_lists
        },
    )


# ---------------------------------------------------------------------------
# Index family
# ---------------------------------------------------------------------------


def h_index(citation_counts: Iterable[int]) -> int:
    h = 0
    for i, c in enumerate(sorted(citation_counts, reverse=True), start=1):
        if c < i:
            break
        h = i
    return h


def g_index(citation_counts: Iterable[int]) -> int:
    """Largest g (at most the number of items) whose top-g citations sum to >= g**2."""
    g = total = 0
    for i, c in enumerate(sorted(citation_counts, reverse=True), start=1):
        total += c
        if total >= i * i:
            g = i
    return g


def i_index(citation_counts: Iterable[int], threshold: int) -> int:
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    return sum(1 for c in citation_counts if c >= threshold)


def m_quotient(h: int, first_pub_year: int, reference_year: int) -> float:
    if reference_year < first_pub_year:
        raise ValueError("reference year precedes first publication")
    return h / (reference_year - first_pub_year + 1)


# ---------------------------------------------------------------------------
# Self-citations and normalized impact
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SelfCitation:
    rate: float
    self_citations: int
    citations: int
    flag: str


def self_citation_rate(corpus: Corpus, scope: Scope = Scope.ALL, usual_max: float = 0.20) -> SelfCitation:
    """Share of citation edges whose citing and cited records share an author."""
    cited_ids = {p.id for p in in_scope(corpus.focal_pubs, scope)}
    total = hits = 0
    for edge in corpus.edges:
        if edge.cited_id not in cited_ids:
            continue
        total += 1
        citing = corpus.pub(edge.citing_id)
        cited = corpus.pub(edge.cited_id)
        if any(a.same_person(b) for a in citing.authors for b in cited.authors):
            hits += 1
    rate = _share(hits, total)
    return SelfCitation(rate, hits, total, "usual" if rate <= usual_max else "elevated")


def cnci(
    pub: PublicationRecord, citations: int, baselines: BaselineTable, categories: Sequence[str]
) -> float:
    """Citations over the mean expected citations of the publication's categories."""
    expected = expected_citations(categories, pub.year, pub.doc_type, baselines)
    if expected <= 0:
        if citations == 0:
            return 0.0
        raise LookupFailure(f"zero expected citations for {pub.id}")
    return citations / expected


@dataclass(frozen=True)
class NormalizedImpact:
    assessed: int
    cnci_values: dict[str, float]
    cnci_mean: float | None
    top10: CountShare
    top1: CountShare
    excluded: tuple[str, ...]
    warnings: tuple[str, ...]


def normalized_impact(
    pubs: Sequence[PublicationRecord],
    citations: Mapping[str, int],
    baselines: BaselineTable | None,
    resolver: QuartileResolver,
) -> NormalizedImpact:
    """CNCI and Top-k flags; records without baselines are excluded with a warning."""
    values: dict[str, float] = {}
    top10 = top1 = 0
    excluded: list[str] = []
    warnings: list[str] = []
    for pub in pubs:
        cats = resolver.categories(pub.venue_id, pub.year)
        try:
            if baselines is None:
                raise LookupFailure("no baseline table loaded")
            if not cats:
                raise LookupFailure(f"no subject categories for venue {pub.venue_id!r}")
            value = cnci(pub, citations[pub.id], baselines, cats)
            flags = percentile_flags(citations[pub.id], cats, pub.year, pub.doc_type, baselines)
        except LookupFailure as exc:
            excluded.append(pub.id)
            warnings.append(f"{pub.id} excluded from CNCI/top-k: {exc}")
            continue
        values[pub.id] = value
        top10 += flags.top10
        top1 += flags.top1
    n = len(values)
    for w in warnings:
        logger.debug(w)
    return NormalizedImpact(
        assessed=n,
        cnci_values=values,
        cnci_mean=math.fsum(values.values()) / n if n else None,
        top10=CountShare.of(top10, n),
        top1=CountShare.of(top1, n),
        excluded=tuple(excluded),
        warnings=tuple(warnings),
    )


@dataclass(frozen=True)
class SourceIndices:
    total_citations: int
    h_index: int
    g_index: int


@dataclass(frozen=True)
class ImpactProfile:
    scope: Scope
    source: str | None
    publications: int
    total_citations: int
    max_citations: int
    mean_citations: float
    std_citations: float | None
    cited: CountShare
    citations_per_cited_doc: float
    h_index: int
    g_index: int
    m_quotient: float
    i_indices: dict[int, int]
    self_citation: SelfCitation
    cnci_mean: float | None
    top10: CountShare
    top1: CountShare
    assessed: int
    excluded: tuple[str, ...]
    per_source: dict[str, SourceIndices]
    warnings: tuple[str, ...] = field(default=())


def impact_profile(
    corpus: Corpus,
    baselines: BaselineTable | None,
    config: Config,
    scope: Scope = Scope.ALL,
    metrics_table: JournalMetricsTable | None = None,
) -> ImpactProfile:
    """Citation indicators over the focal records selected by ``scope``."""
    pubs = in_scope(corpus.focal_pubs, scope)
    sources = corpus.source_names()
    source = config.primary_source(sources)
    edge_counts = corpus.edge_counts()
    citations = {p.id: citation_count(p, source, edge_counts) for p in pubs}
    counts = list(citations.values())
    cited = [c for c in counts if c > 0]
    total = sum(counts)
    h = h_index(counts)
    resolver = QuartileResolver(
        metrics_table, config.visibility_metric, config.visibility_edition_year, config.visibility_edition_mode
    )
    norm = normalized_impact(pubs, citations, baselines, resolver)
    first_year = min((p.year for p in pubs), default=config.reference_year)
    per_source = {}
    for name in sources:
        sc = [p.times_cited[name] for p in pubs if name in p.times_cited]
        per_source[name] = SourceIndices(sum(sc), h_index(sc), g_index(sc))
    return ImpactProfile(
        scope=scope,
        source=source,
        publications=len(pubs),
        total_citations=total,
        max_citations=max(counts, default=0),
        mean_citations=_share(total, len(counts)),
        std_citations=(statistics.pstdev(counts) if counts else 0.0) if config.impact_show_std else None,
        cited=CountShare.of(len(cited), len(counts)),
        citations_per_cited_doc=_share(total, len(cited)),
        h_index=h,
        g_index=g_index(counts),
        m_quotient=m_quotient(h, first_year, max(config.reference_year, first_year)),
        i_indices={n: i_index(counts, n) for n in sorted(config.i_thresholds)},
        self_citation=self_citation_rate(corpus, scope, config.selfcite_usual_max),
        cnci_mean=norm.cnci_mean,
        top10=norm.top10,
        top1=norm.top1,
        assessed=norm.assessed,
        excluded=norm.excluded,
        per_source=per_source,
        warnings=norm.warnings,
    )
