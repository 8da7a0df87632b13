"""Reference analysis: composition, age, most cited sources, venue and peer overlap."""

from __future__ import annotations

import statistics
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .corpus import CitedReference, Corpus, PublicationRecord, RefType
from .indicators import rank_counts
from .text import normalize_text


@dataclass(frozen=True)
class ReferenceStats:
    total_refs: int
    undated: int
    type_shares: dict[str, float]
    year_histogram: dict[int, int]
    median_age: float | None
    field_half_life: float | None
    older_than_half_life: bool | None
    source_ranking: tuple[tuple[str, int], ...]


def reference_stats(
    pubs: Iterable[PublicationRecord], field_half_life: float | None = None
) -> ReferenceStats:
    """Aggregate every cited reference of ``pubs``; no de-duplication at the total level."""
    total = undated = 0
    types: Counter[str] = Counter()
    years: Counter[int] = Counter()
    sources: Counter[str] = Counter()
    labels: dict[str, str] = {}
    ages: list[int] = []
    for pub in pubs:
        for ref in pub.references:
            total += 1
            types[ref.ref_type.value] += 1
            if ref.source_name:
                key = normalize_text(ref.source_name)
                labels.setdefault(key, ref.source_name)
                sources[labels[key]] += 1
            if ref.year is None:
                undated += 1
                continue
            years[ref.year] += 1
            # in-press references may post-date the citing record by a year
            ages.append(max(0, pub.year - ref.year))
    median = float(statistics.median(ages)) if ages else None
    return ReferenceStats(
        total_refs=total,
        undated=undated,
        type_shares={t.value: types[t.value] / total for t in RefType if types[t.value]} if total else {},
        year_histogram=dict(sorted(years.items())),
        median_age=median,
        field_half_life=field_half_life,
        older_than_half_life=(
            median > field_half_life if median is not None and field_half_life is not None else None
        ),
        source_ranking=rank_counts(sources),
    )


@dataclass(frozen=True)
class VenueOverlap:
    publishing_venues: frozenset[str]
    top_cited_venues: tuple[str, ...]
    overlap: frozenset[str]
    overlap_ratio: float


def venue_overlap(corpus: Corpus, top_n: int = 10) -> VenueOverlap:
    """Share of the most cited sources in which the researcher also publishes."""
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    cited: Counter[str] = Counter(
        normalize_text(r.source_name) for p in corpus.focal_pubs for r in p.references if r.source_name
    )
    top = tuple(name for name, _ in rank_counts(cited)[:top_n])
    publishing = frozenset(normalize_text(p.venue_name) for p in corpus.focal_pubs if p.venue_name)
    overlap = frozenset(top) & publishing
    return VenueOverlap(
        publishing_venues=publishing,
        top_cited_venues=top,
        overlap=overlap,
        overlap_ratio=len(overlap) / len(top) if top else 0.0,
    )


def references_of(pubs: Iterable[PublicationRecord]) -> list[CitedReference]:
    return [r for p in pubs for r in p.references]


def most_cited_references(refs: Iterable[CitedReference], top_n: int) -> tuple[tuple[str, int], ...]:
    counts: Counter[str] = Counter(r.key for r in refs if r.key)
    return rank_counts(counts)[:top_n]


@dataclass(frozen=True)
class PeerReferenceComparison:
    peer: str
    focal_top: tuple[str, ...]
    peer_top: tuple[str, ...]
    intersection: tuple[str, ...]
    focal_only: tuple[str, ...]
    peer_only: tuple[str, ...]

    @property
    def overlap_ratio(self) -> float:
        return len(self.intersection) / len(self.focal_top) if self.focal_top else 0.0


def peer_reference_comparison(
    focal_refs: Sequence[CitedReference],
    peer_refs: Mapping[str, Sequence[CitedReference]],
    top_n: int = 20,
) -> list[PeerReferenceComparison]:
    """Compare the ``top_n`` most cited references of the focal researcher with each peer's."""
    if not peer_refs:
        raise ValueError("at least one peer is required")
    focal_top = tuple(k for k, _ in most_cited_references(focal_refs, top_n))
    out = []
    for peer, refs in peer_refs.items():
        peer_top = tuple(k for k, _ in most_cited_references(refs, top_n))
        peer_set, focal_set = set(peer_top), set(focal_top)
        out.append(
            PeerReferenceComparison(
                peer=peer,
                focal_top=focal_top,
                peer_top=peer_top,
                intersection=tuple(k for k in focal_top if k in peer_set),
                focal_only=tuple(k for k in focal_top if k not in peer_set),
                peer_only=tuple(k for k in peer_top if k not in focal_set),
            )
        )
    return out
