"""Journal impact tables, category quartiles and citation baselines."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import DocType, normalize_doc_type


class Metric(str, Enum):
    IF = "IF"
    IF5 = "IF5"
    AIS = "AIS"
    SJR = "SJR"
    SNIP = "SNIP"


class Quartile(str, Enum):
    Q1 = "Q1"
    Q2 = "Q2"
    Q3 = "Q3"
    Q4 = "Q4"


QUARTILES = tuple(Quartile)


class TableError(ValueError):
    """Malformed table file or violated table invariant."""


class LookupFailure(LookupError):
    """Journal, category, edition or baseline row not present in a table."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class MissingBaselineError(LookupFailure):
    pass


def quartile_for_rank(rank: int, size: int) -> Quartile:
    """Quartile band of a 1-based rank in a category of ``size`` journals.

    A journal alone in its category is its category's top journal, so it is Q1
    even though the ceiling formula would put it in Q4.
    """
    if not 1 <= rank <= size:
        raise ValueError(f"rank {rank} outside 1..{size}")
    if size == 1:
        return Quartile.Q1
    return QUARTILES[math.ceil(4 * rank / size) - 1]


@dataclass(frozen=True)
class MetricRow:
    journal_id: str
    edition_year: int
    metric: Metric
    value: float
    categories: tuple[str, ...]


@dataclass(frozen=True)
class QuartileAssignment:
    journal_id: str
    category: str
    metric: Metric
    edition_year: int
    rank: int
    category_size: int
    quartile: Quartile

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.rank, self.category_size)


class JournalMetricsTable:
    """Per-edition journal impact values with their subject categories."""

    def __init__(self, rows: Iterable[MetricRow]):
        self._rows: dict[tuple[str, int, Metric], MetricRow] = {}
        for row in rows:
            key = (row.journal_id, row.edition_year, row.metric)
            if key in self._rows:
                raise TableError(f"duplicate metrics row {key}")
            if row.value < 0:
                raise TableError(f"negative metric value for {key}")
            if not row.categories:
                raise TableError(f"no categories for {key}")
            self._rows[key] = row

    @classmethod
    def from_csv(cls, path: str | Path) -> JournalMetricsTable:
        rows = []
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            expected = ["journal_id", "edition_year", "metric", "value", "categories"]
            if reader.fieldnames != expected:
                raise TableError(f"{path}: header must be {','.join(expected)}")
            for lineno, rec in enumerate(reader, start=2):
                try:
                    rows.append(
                        MetricRow(
                            journal_id=rec["journal_id"].strip(),
                            edition_year=int(rec["edition_year"]),
                            metric=Metric(rec["metric"].strip()),
                            value=float(rec["value"]),
                            categories=tuple(
                                c.strip() for c in rec["categories"].split(";") if c.strip()
                            ),
                        )
                    )
                except (ValueError, AttributeError) as exc:
                    raise TableError(f"{path}:{lineno}: {exc}") from None
        return cls(rows)

    def __len__(self) -> int:
        return len(self._rows)

    def rows(self) -> list[MetricRow]:
        return list(self._rows.values())

    def editions(self, metric: Metric) -> list[int]:
        return sorted({r.edition_year for r in self._rows.values() if r.metric == metric})

    def latest_edition(self, metric: Metric) -> int | None:
        editions = self.editions(metric)
        return editions[-1] if editions else None

    def get(self, journal_id: str, metric: Metric, edition_year: int) -> MetricRow | None:
        return self._rows.get((journal_id, edition_year, metric))

    def categories_of(
        self, journal_id: str, metric: Metric | None = None, edition_year: int | None = None
    ) -> tuple[str, ...]:
        """Categories of a journal, preferring the requested edition and metric."""
        if metric is not None and edition_year is not None:
            row = self.get(journal_id, metric, edition_year)
            if row is not None:
                return row.categories
        cats: dict[str, None] = {}
        for row in sorted(
            (r for r in self._rows.values() if r.journal_id == journal_id),
            key=lambda r: (-r.edition_year, r.metric.value),
        ):
            for c in row.categories:
                cats.setdefault(c, None)
        return tuple(cats)

    def category_members(self, category: str, metric: Metric, edition_year: int) -> list[MetricRow]:
        return [
            r
            for r in self._rows.values()
            if r.metric == metric and r.edition_year == edition_year and category in r.categories
        ]

    def averaged(self, metric: Metric) -> JournalMetricsTable:
        """Collapse all editions of ``metric`` into one pseudo-edition of mean values.

        The pseudo-edition takes the number of the latest edition and the
        categories of each journal's latest row.
        """
        latest = self.latest_edition(metric)
        if latest is None:
            return JournalMetricsTable([])
        grouped: dict[str, list[MetricRow]] = {}
        for row in self._rows.values():
            if row.metric == metric:
                grouped.setdefault(row.journal_id, []).append(row)
        rows = []
        for jid, items in grouped.items():
            items.sort(key=lambda r: r.edition_year)
            rows.append(
                MetricRow(
                    journal_id=jid,
                    edition_year=latest,
                    metric=metric,
                    value=sum(r.value for r in items) / len(items),
                    categories=items[-1].categories,
                )
            )
        return JournalMetricsTable(rows)


def quartile_of(
    journal_id: str,
    category: str,
    metric: Metric,
    edition_year: int,
    table: JournalMetricsTable,
) -> QuartileAssignment:
    """Rank a journal within one category; tied values share the best rank."""
    if edition_year not in table.editions(metric):
        raise LookupFailure(f"unknown edition {edition_year} for metric {metric.value}")
    members = table.category_members(category, metric, edition_year)
    mine = next((r for r in members if r.journal_id == journal_id), None)
    if mine is None:
        raise LookupFailure(
            f"journal {journal_id!r} not in category {category!r} ({metric.value} {edition_year})"
        )
    rank = 1 + sum(1 for r in members if r.value > mine.value)
    size = len(members)
    return QuartileAssignment(
        journal_id=journal_id,
        category=category,
        metric=metric,
        edition_year=edition_year,
        rank=rank,
        category_size=size,
        quartile=quartile_for_rank(rank, size),
    )


def best_quartile(
    journal_id: str, metric: Metric, edition_year: int, table: JournalMetricsTable
) -> QuartileAssignment:
    row = table.get(journal_id, metric, edition_year)
    if row is None:
        raise LookupFailure(f"journal {journal_id!r} unknown for {metric.value} {edition_year}")
    assignments = [quartile_of(journal_id, c, metric, edition_year, table) for c in row.categories]
    return min(assignments, key=lambda a: (a.quartile.value, a.ratio, a.category))


# ---------------------------------------------------------------------------
# Citation baselines
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BaselineRow:
    category: str
    pub_year: int
    doc_type: DocType
    expected_citations: float
    p90: float
    p99: float


@dataclass(frozen=True)
class PercentileFlags:
    top10: bool
    top1: bool


class BaselineTable:
    """Expected citations and percentile thresholds per category, year and doc type."""

    def __init__(self, rows: Iterable[BaselineRow]):
        self._rows: dict[tuple[str, int, DocType], BaselineRow] = {}
        for row in rows:
            key = (row.category, row.pub_year, row.doc_type)
            if key in self._rows:
                raise TableError(f"duplicate baseline row {_fmt_key(key)}")
            if not (row.p99 >= row.p90 >= 0) or row.expected_citations < 0:
                raise TableError(f"baseline row {_fmt_key(key)} violates p99 >= p90 >= 0")
            self._rows[key] = row

    @classmethod
    def from_csv(cls, path: str | Path) -> BaselineTable:
        rows = []
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            expected = ["category", "pub_year", "doc_type", "expected", "p90", "p99"]
            if reader.fieldnames != expected:
                raise TableError(f"{path}: header must be {','.join(expected)}")
            for lineno, rec in enumerate(reader, start=2):
                try:
                    rows.append(
                        BaselineRow(
                            category=rec["category"].strip(),
                            pub_year=int(rec["pub_year"]),
                            doc_type=normalize_doc_type(rec["doc_type"]),
                            expected_citations=float(rec["expected"]),
                            p90=float(rec["p90"]),
                            p99=float(rec["p99"]),
                        )
                    )
                except (ValueError, AttributeError) as exc:
                    raise TableError(f"{path}:{lineno}: {exc}") from None
        return cls(rows)

    def __len__(self) -> int:
        return len(self._rows)

    def row(self, category: str, pub_year: int, doc_type: DocType) -> BaselineRow:
        try:
            return self._rows[(category, pub_year, doc_type)]
        except KeyError:
            raise MissingBaselineError(
                f"missing baseline row {_fmt_key((category, pub_year, doc_type))}"
            ) from None

    def rows_for(self, categories: Sequence[str], pub_year: int, doc_type: DocType) -> list[BaselineRow]:
        if not categories:
            raise MissingBaselineError("no categories to look up a baseline for")
        return [self.row(c, pub_year, doc_type) for c in categories]


def _fmt_key(key: tuple[str, int, DocType]) -> str:
    return f"({key[0]}, {key[1]}, {key[2].value})"


def expected_citations(
    categories: Sequence[str], pub_year: int, doc_type: DocType, table: BaselineTable
) -> float:
    """Mean expected citations over all categories of the publication's journal."""
    rows = table.rows_for(categories, pub_year, doc_type)
    return sum(r.expected_citations for r in rows) / len(rows)


def percentile_flags(
    citations: int,
    categories: Sequence[str],
    pub_year: int,
    doc_type: DocType,
    table: BaselineTable,
) -> PercentileFlags:
    """Top-10%/Top-1% membership against the most favourable category threshold."""
    rows = table.rows_for(categories, pub_year, doc_type)
    top1 = citations >= min(r.p99 for r in rows)
    top10 = top1 or citations >= min(r.p90 for r in rows)
    return PercentileFlags(top10=top10, top1=top1)


@dataclass(frozen=True)
class TopJournalList:
    name: str
    journal_ids: frozenset[str]

    def __post_init__(self) -> None:
        if not self.journal_ids:
            raise TableError(f"top journal list {self.name!r} is empty")

    @classmethod
    def from_file(cls, path: str | Path, name: str | None = None) -> TopJournalList:
        ids = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                ids.append(line)
        return cls(name or Path(path).stem, frozenset(ids))
