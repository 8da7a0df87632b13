"""Assemble the sectioned report, render it, and compare against peers."""

from __future__ import annotations

import dataclasses
import datetime as _dt
import json
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Mapping, Sequence

from .baselines import BaselineTable, JournalMetricsTable, TopJournalList
from .config import SECTION_NAMES, Config, Window
from .corpus import (
    AuthorRef,
    Corpus,
    CoverageResult,
    DocType,
    PublicationRecord,
    load_alias_table,
    load_publications,
    match_publication_list,
)
from .focus import (
    TermSource,
    extract_terms,
    interdisciplinarity,
    load_stopwords,
    select_terms,
    term_cooccurrence_map,
)
from .graph import FORMATS, Graph, export_graph
from .indicators import (
    QUARTILE_LABELS,
    CountShare,
    Scope,
    activity_profile,
    citation_count,
    coauthor_profile,
    funding_profile,
    impact_profile,
    in_window,
    visibility_profile,
)
from .knowledge import (
    peer_reference_comparison,
    reference_stats,
    references_of,
    venue_overlap,
)
from .networks import (
    citing_country_network,
    citing_docs_profile,
    coauthor_network,
    collaboration_shares,
    country_copub_network,
    institution_cooperation_table,
)
from .text import normalize_name

logger = logging.getLogger(__name__)

MASK = "<masked>"
FORMAT_VERSION = 1


class MissingTableError(LookupError):
    """A section needs a table that was not supplied."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


@dataclass
class Tables:
    metrics: JournalMetricsTable | None = None
    baselines: BaselineTable | None = None
    top_lists: list[TopJournalList] = field(default_factory=list)
    aliases: dict[str, DocType] | None = None
    stopwords: frozenset[str] | None = None
    exports: dict[str, list[PublicationRecord]] = field(default_factory=dict)


def load_tables(config: Config) -> Tables:
    """Read every table the configuration points at (paths relative to the config file)."""
    tables = Tables()
    if config.tables_aliases:
        tables.aliases = load_alias_table(config.resolve(config.tables_aliases))
    if config.tables_metrics:
        tables.metrics = JournalMetricsTable.from_csv(config.resolve(config.tables_metrics))
    if config.tables_baselines:
        tables.baselines = BaselineTable.from_csv(config.resolve(config.tables_baselines))
    if config.tables_stoplist:
        tables.stopwords = load_stopwords(config.resolve(config.tables_stoplist))
    for name, path in sorted(config.top_lists.items()):
        tables.top_lists.append(TopJournalList.from_file(config.resolve(path), name))
    for source, path in config.coverage_exports.items():
        tables.exports[source] = load_publications(config.resolve(path), tables.aliases)
    return tables


# ---------------------------------------------------------------------------
# JSON conversion
# ---------------------------------------------------------------------------


def to_jsonable(obj: Any) -> Any:
    """Convert analysis results into plain JSON values with string keys."""
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Window):
        return obj.label
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj) if not f.name.startswith("_")}
    if isinstance(obj, Mapping):
        return {str(to_jsonable(k)): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (frozenset, set)):
        return sorted(to_jsonable(v) for v in obj)
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def resolve_path(payloads: Mapping[str, Any], path: str) -> Any:
    """Follow a dotted path such as ``Impact.all_items.h_index`` or ``x.periods.0``."""
    node: Any = payloads
    for part in path.split("."):
        node = node[int(part)] if isinstance(node, list) else node[part]
    return node


# ---------------------------------------------------------------------------
# Report document
# ---------------------------------------------------------------------------


@dataclass
class Section:
    name: str
    enabled: bool
    payload: dict[str, Any]
    notes: list[str] = field(default_factory=list)


@dataclass
class ReportDocument:
    metadata: dict[str, Any]
    sections: list[Section]
    graphs: dict[str, Graph] = field(default_factory=dict, compare=False)

    def section(self, name: str) -> Section:
        return next(s for s in self.sections if s.name == name)

    def payloads(self) -> dict[str, Any]:
        return {s.name: s.payload for s in self.sections}

    def to_dict(self, mask_timestamp: bool = False) -> dict[str, Any]:
        meta = dict(self.metadata)
        if mask_timestamp:
            meta["generated_at"] = MASK
        return {
            "format_version": FORMAT_VERSION,
            "metadata": meta,
            "sections": [
                {"name": s.name, "enabled": s.enabled, "notes": list(s.notes), "payload": s.payload}
                for s in self.sections
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> ReportDocument:
        if data.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"unsupported report format_version {data.get('format_version')!r}")
        return cls(
            metadata=dict(data["metadata"]),
            sections=[
                Section(s["name"], s["enabled"], s["payload"], list(s["notes"])) for s in data["sections"]
            ],
        )


def _slug(text: str) -> str:
    return re.sub(r"[^a-z0-9]+", "-", normalize_name(text)).strip("-") or "report"


def report_id(corpus: Corpus, config: Config) -> str:
    return config.report_id or _slug(corpus.focal_author.display_name)



def graph_filename(rid: str, name: str, fmt: str) -> str:
    return f"{rid}.{name}.{fmt.lower()}"


def _require(table: Any, label: str, section: str) -> None:
    if table is None:
        raise MissingTableError(f"{section} section requires the {label} table (tables.{label})")


METHODOLOGY_NOTES = (
    "Counts are normal (whole) counts; activity trends use an ordinary least-squares slope of yearly totals.",
    "Journal quartiles rank journals within each subject category by the selected impact measure, "
    "tied values sharing the best rank; a journal in several categories gets its best quartile.",
    "CNCI divides citations by the mean expected citations over the journal's categories for the same "
    "publication year and document type; the set value is the arithmetic mean over assessed records.",
    "Top 10% / Top 1% flags compare citations with the lowest 90th / 99th percentile threshold "
    "across the journal's categories.",
    "Records without a baseline are excluded from CNCI and Top-k denominators and listed in the annex.",
    "The g-index is capped at the number of publications; the m-quotient divides h by the inclusive "
    "number of years since the first publication.",
    "Self-citations are citations whose citing and cited records share an author (ORCID, else "
    "normalized name); they stay in all citation counts and are reported as control data.",
    "Term relevance is the mean citation count of the publications containing the term.",
    "Summary headline: publication totals, h- and g-index (all items), CNCI and Top 10%/1% counts "
    "(citable items), Q1 share (full window), collaboration shares (full window) and the self-citation flag.",
)


def build_report(
    corpus: Corpus,
    tables: Tables,
    config: Config,
    timestamp: str | None = None,
    load_warnings: Sequence[str] = (),
    graph_format: str = "dot",
) -> ReportDocument:
    """Run every enabled analysis and assemble the report in its fixed section order."""
    if graph_format not in FORMATS:
        raise ValueError(f"unsupported graph format {graph_format!r}")
    enabled = {name: config.section_enabled(name) for name in SECTION_NAMES}
    if enabled["Visibility"]:
        _require(tables.metrics, "metrics", "Visibility")
    if enabled["Impact"]:
        _require(tables.baselines, "baselines", "Impact")
    if enabled["Cooperation"]:
        _require(tables.baselines, "baselines", "Cooperation")
    if enabled["CitingAnalysis"]:
        _require(tables.metrics, "metrics", "CitingAnalysis")
        _require(tables.baselines, "baselines", "CitingAnalysis")

    window = config.window
    halves: tuple[Window, ...] = window.halves() if window.start != window.end else ()
    periods: list[Window | None] = [window, *halves]
    source = config.primary_source(corpus.source_names())
    rid = report_id(corpus, config)
    warnings: list[str] = list(load_warnings)
    payloads: dict[str, dict[str, Any]] = {}
    notes: dict[str, list[str]] = {name: [] for name in SECTION_NAMES}
    graphs: dict[str, Graph] = {}
    annex: dict[str, Any] = {}

    coverage: dict[str, CoverageResult] = {}
    if enabled["Coverage"]:
        for name in sorted(tables.exports):
            coverage[name] = match_publication_list(corpus.focal_pubs, tables.exports[name], name)
            warnings.extend(f"coverage {name}: {w}" for w in coverage[name].warnings)
        payloads["Coverage"] = {
            "sources": {
                n: {"total_master": c.total_master, "matched": c.matched, "percent": c.percent}
                for n, c in coverage.items()
            }
        }
        if not coverage:
            notes["Coverage"].append("No database exports configured (coverage.exports).")
        annex["unmatched"] = {n: list(c.unmatched_ids) for n, c in coverage.items()}

    if enabled["Activity"]:
        act = activity_profile(corpus, window, config.reference_year)
        payloads["Activity"] = {"corpus_total": len(corpus.focal_pubs), **to_jsonable(act)}

    if enabled["AffiliationFunding"]:
        pubs = in_window(corpus.focal_pubs, window)
        home = sum(
            any(a.is_home or normalize_name(a.institution) == normalize_name(corpus.home_institution)
                for a in p.affiliations)
            for p in pubs
        )
        payloads["AffiliationFunding"] = {
            "home_affiliation": to_jsonable(CountShare.of(home, len(pubs))),
            "funding": to_jsonable(funding_profile(corpus, window)),
        }

    if enabled["Coauthorship"]:
        co = coauthor_profile(corpus, periods, config.dependence_flag_min, config.alphabetical_suppress_min)
        payloads["Coauthorship"] = to_jsonable(co)
        head = co.headline
        if head.alphabetical_suppressed:
            notes["Coauthorship"].append(
                f"{head.alphabetical_share:.0%} of multi-author papers list authors alphabetically; "
                "first/last author roles are not interpreted."
            )
        if head.dependence_flag:
            notes["Coauthorship"].append(
                f"Co-author dependence: {head.dependence_label} appears on {head.dependence_share:.0%} "
                "of the publications."
            )

    if enabled["Visibility"]:
        vis = visibility_profile(corpus, tables.metrics, config, tables.top_lists, coverage)
        full = vis.quartile_distribution[window.label]
        ranked_total = sum(full.values())
        payload = to_jsonable(vis)
        payload["q1_share"] = full["Q1"] / ranked_total if ranked_total else 0.0
        payload["coverage"] = payloads.get("Coverage", {}).get("sources", {})
        payload["journal_table"] = payload["journal_table"][:20]
        payloads["Visibility"] = payload
        annex["journal_table"] = to_jsonable(vis.journal_table)

    if enabled["Impact"]:
        impact = {}
        for key, scope in (("citable_items", Scope.CITABLE), ("all_items", Scope.ALL)):
            prof = impact_profile(corpus, tables.baselines, config, scope, tables.metrics)
            impact[key] = to_jsonable(prof)
            warnings.extend(prof.warnings)
        payloads["Impact"] = impact
        annex["excluded_from_normalization"] = impact["citable_items"]["excluded"]
        annex["per_source_indices"] = impact["all_items"]["per_source"]
        sc = impact["all_items"]["self_citation"]
        if sc["flag"] == "elevated":
            notes["Impact"].append(
                f"Self-citation rate {sc['rate']:.0%} exceeds {config.selfcite_usual_max:.0%} and needs explanation."
            )

    if enabled["CitingAnalysis"]:
        citing = citing_docs_profile(
            corpus,
            tables.metrics,
            tables.baselines,
            source,
            config.visibility_metric,
            config.visibility_edition_year,
            config.visibility_edition_mode,
        )
        warnings.extend(citing.warnings)
        graphs["citing_countries"] = citing_country_network(corpus)
        payloads["CitingAnalysis"] = {
            **to_jsonable(citing),
            "citing_countries_graph": {"name": "citing_countries", **graphs["citing_countries"].summary()},
        }

    if enabled["Cooperation"]:
        graphs["countries"] = country_copub_network(corpus, window)
        graphs["coauthors"] = coauthor_network(corpus, window)
        if "citing_countries" not in graphs:
            graphs["citing_countries"] = citing_country_network(corpus)
        table = institution_cooperation_table(
            corpus, tables.baselines, tables.metrics, window, source, config.visibility_metric
        )
        payloads["Cooperation"] = {
            "collaboration": to_jsonable(collaboration_shares(corpus, periods)),
            "institutions": to_jsonable(table[: config.cooperation_max_rows]),
            "institutions_total": len(table),
            "countries_graph": {"name": "countries", **graphs["countries"].summary()},
            "coauthors_graph": {"name": "coauthors", **graphs["coauthors"].summary()},
            "citing_countries_graph": {
                "name": "citing_countries",
                **graphs["citing_countries"].summary(),
            },
        }
        annex["cooperation_table"] = to_jsonable(table)

    if enabled["ReferenceAnalysis"]:
        refs = reference_stats(in_window(corpus.focal_pubs, window), config.field_half_life)
        payloads["ReferenceAnalysis"] = {
            "references": to_jsonable(refs),
            "venue_overlap": to_jsonable(venue_overlap(corpus, config.knowledge_top_n)),
        }
        if refs.undated:
            notes["ReferenceAnalysis"].append(f"{refs.undated} undated reference(s) left out of the age analysis.")

    if enabled["ResearchFocus"]:
        pubs = in_window(corpus.focal_pubs, window)
        edge_counts = corpus.edge_counts()
        cites = {p.id: citation_count(p, source, edge_counts) for p in pubs}
        terms = extract_terms(pubs, TermSource(config.focus_source), tables.stopwords)
        selected = select_terms(terms, cites, config.focus_min_occurrences, config.focus_keep_fraction)
        graphs["terms"] = term_cooccurrence_map(pubs, selected)
        payloads["ResearchFocus"] = {
            "source": config.focus_source,
            "terms_extracted": len(terms),
            "terms_passing_threshold": sum(t.occurrences >= config.focus_min_occurrences for t in terms),
            "selected_terms": [
                {"term": t.term, "occurrences": t.occurrences, "relevance": t.relevance} for t in selected
            ],
            "terms_graph": {"name": "terms", **graphs["terms"].summary()},
            "interdisciplinarity": to_jsonable(
                interdisciplinarity(
                    pubs, tables.metrics, config.visibility_metric, config.visibility_edition_year
                )
            ),
        }

    if enabled["Methodology"]:
        payloads["Methodology"] = {
            "researcher": corpus.focal_author.display_name,
            "window": window.label,
            "halves": [h.label for h in halves],
            "citation_sources": corpus.source_names(),
            "primary_source": source,
            "visibility_metric": config.visibility_metric.value,
            "edition_mode": config.visibility_edition_mode,
            "i_thresholds": list(config.i_thresholds),
            "definitions": list(METHODOLOGY_NOTES),
        }

    if enabled["Summary"]:
        payloads["Summary"] = _summary(payloads, enabled, window.label)

    for w in sorted(set(warnings)):
        logger.warning(w)
    if enabled["Annex"]:
        annex["warnings"] = sorted(set(warnings))
        payloads["Annex"] = annex

    sections = [
        Section(name, enabled[name], payloads.get(name, {}), notes[name] if enabled[name] else ["disabled"])
        for name in SECTION_NAMES
    ]
    metadata = {
        "report_id": rid,
        "researcher": corpus.focal_author.display_name,
        "corpus_sha256": corpus.fingerprint(),
        "config": config.to_dict(),
        "graph_format": graph_format,
        "graphs": {name: graph_filename(rid, name, graph_format) for name in sorted(graphs)},
        "generated_at": timestamp
        or _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    return ReportDocument(metadata, sections, graphs)


def _summary(payloads: Mapping[str, Any], enabled: Mapping[str, bool], window_label: str) -> dict[str, Any]:
    """Headline numbers, each carrying the payload path it was copied from."""
    wanted = [
        ("publications_total", "Activity.corpus_total"),
        ("publications_in_window", "Activity.window_total"),
        ("h_index", "Impact.all_items.h_index"),
        ("g_index", "Impact.all_items.g_index"),
        ("total_citations", "Impact.all_items.total_citations"),
        ("citations_per_cited_doc", "Impact.all_items.citations_per_cited_doc"),
        ("cnci_mean", "Impact.citable_items.cnci_mean"),
        ("top10_count", "Impact.citable_items.top10.count"),
        ("top1_count", "Impact.citable_items.top1.count"),
        ("self_citation_rate", "Impact.all_items.self_citation.rate"),
        ("self_citation_flag", "Impact.all_items.self_citation.flag"),
        ("q1_share", "Visibility.q1_share"),
        ("international_share", "Cooperation.collaboration.periods.0.shares.international"),
        ("national_share", "Cooperation.collaboration.periods.0.shares.national"),
        ("domestic_share", "Cooperation.collaboration.periods.0.shares.domestic"),
    ]
    out = {}
    for name, path in wanted:
        if enabled.get(path.split(".", 1)[0]) and path.split(".", 1)[0] in payloads:
            out[name] = {"value": resolve_path(payloads, path), "source": path}
    return out


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def render(report: ReportDocument, fmt: str = "structured", mask_timestamp: bool = False) -> bytes:
    fmt = fmt.lower()
    if fmt == "structured":
        text = json.dumps(report.to_dict(mask_timestamp), indent=2, ensure_ascii=False, allow_nan=False)
        return (text + "\n").encode("utf-8")
    if fmt == "markdown":
        return render_markdown(report, mask_timestamp).encode("utf-8")
    raise ValueError(f"unsupported report format {fmt!r}")


def parse_structured(data: bytes) -> ReportDocument:
    return ReportDocument.from_dict(json.loads(data.decode("utf-8")))


def _fmt_value(value: Any) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        text = f"{value:.4f}".rstrip("0").rstrip(".")
        return text or "0"
    if isinstance(value, list) and all(not isinstance(v, (dict, list)) for v in value):
        return ", ".join(_fmt_value(v) for v in value) if value else "none"
    return str(value).replace("|", "\\|").replace("\n", " ")


def _flat_row(row: Mapping[str, Any], prefix: str = "") -> dict[str, Any]:
    out: dict[str, Any] = {}
    for k, v in row.items():
        if isinstance(v, Mapping):
            out.update(_flat_row(v, f"{prefix}{k}."))
        else:
            out[f"{prefix}{k}"] = v
    return out


def _md_table(rows: Sequence[Any]) -> list[str]:
    if all(isinstance(r, list) for r in rows):
        width = max(len(r) for r in rows)
        header = [f"col{i + 1}" for i in range(width)]
        body = [[_fmt_value(v) for v in r] + [""] * (width - len(r)) for r in rows]
    else:
        flat = [_flat_row(r) for r in rows]
        header = list(dict.fromkeys(k for r in flat for k in r))
        body = [[_fmt_value(r.get(h)) for h in header] for r in flat]
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(r) + " |" for r in body]
    return lines


def _md_block(payload: Mapping[str, Any], files: Mapping[str, str], depth: int = 0) -> list[str]:
    lines: list[str] = []
    indent = "  " * depth
    for key, value in payload.items():
        if key.endswith("_graph") and isinstance(value, Mapping) and "name" in value:
            lines.append(
                f"{indent}- **{key}**: `{files.get(value['name'], value['name'])}` "
                f"({value['nodes']} nodes, {value['edges']} edges)"
            )
        elif isinstance(value, Mapping):
            if not value:
                lines.append(f"{indent}- **{key}**: none")
            else:
                lines.append(f"{indent}- **{key}**:")
                lines.extend(_md_block(value, files, depth + 1))
        elif isinstance(value, list) and value and all(isinstance(v, (dict, list)) for v in value):
            if all(isinstance(v, dict) and not any(isinstance(x, list) for x in v.values()) for v in value) or all(
                isinstance(v, list) for v in value
            ):
                lines.append(f"{indent}- **{key}**:")
                lines.append("")
                lines.extend(_md_table(value))
                lines.append("")
            else:
                lines.append(f"{indent}- **{key}**:")
                for i, v in enumerate(value):
                    lines.append(f"{indent}  - [{i}]")
                    lines.extend(_md_block(v, files, depth + 2))
        elif isinstance(value, list) and any(isinstance(v, str) and len(v) > 60 for v in value):
            lines.append(f"{indent}- **{key}**:")
            lines.extend(f"{indent}  - {_fmt_value(v)}" for v in value)
        else:
            lines.append(f"{indent}- **{key}**: {_fmt_value(value)}")
    return lines


def render_markdown(report: ReportDocument, mask_timestamp: bool = False) -> str:
    meta = report.metadata
    rid = meta["report_id"]
    stamp = MASK if mask_timestamp else meta["generated_at"]
    out = [
        f"# Bibliometric profile: {meta['researcher']}",
        "",
        f"Report `{rid}` · generated {stamp} · corpus sha256 `{meta['corpus_sha256'][:16]}`",
        "",
    ]
    for section in report.sections:
        out.append(f"## {section.name}")
        out.append("")
        if not section.enabled:
            out += ["_Section disabled._", ""]
            continue
        if section.name == "Summary":
            out += ["| indicator | value | from |", "|---|---|---|"]
            for name, entry in section.payload.items():
                out.append(f"| {name} | {_fmt_value(entry['value'])} | `{entry['source']}` |")
            out.append("")
        else:
            out += _md_block(section.payload, meta.get("graphs", {}))
            out.append("")
        for note in section.notes:
            out += [f"> {note}", ""]
    return "\n".join(out).rstrip() + "\n"


def write_outputs(
    report: ReportDocument,
    out_dir: str | Path,
    fmt: str = "structured",
    graph_format: str | None = None,
) -> list[Path]:
    """Write the rendered report and its graph files under ``out_dir``.

    Graphs use the format recorded in the report metadata unless overridden.
    """
    graph_format = graph_format or report.metadata.get("graph_format", "dot")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rid = report.metadata["report_id"]
    suffix = {"structured": "json", "markdown": "md"}[fmt]
    written = []
    path = out / f"{rid}.report.{suffix}"
    path.write_bytes(render(report, fmt))
    written.append(path)
    for name, graph in sorted(report.graphs.items()):
        gpath = out / graph_filename(rid, name, graph_format)
        gpath.write_bytes(export_graph(graph, graph_format, name))
        written.append(gpath)
    return written


# ---------------------------------------------------------------------------
# Peer comparison
# ---------------------------------------------------------------------------

HEADLINE_FIELDS = (
    "publications",
    "total_citations",
    "citations_per_cited_doc",
    "h_index",
    "g_index",
    "cnci_mean",
    "top10_count",
    "top1_count",
    "q1_share",
    "venue_overlap",
)


@dataclass(frozen=True)
class PartyProfile:
    name: str
    quartile_distribution: dict[str, int]
    headline: dict[str, float | int | None]
    top_terms: tuple[str, ...]


@dataclass(frozen=True)
class PeerBlock:
    peer: PartyProfile
    deltas: dict[str, float | None]
    reference_intersection: tuple[str, ...]
    focal_only: tuple[str, ...]
    peer_only: tuple[str, ...]


@dataclass(frozen=True)
class PeerComparison:
    window: Window
    focal: PartyProfile
    peers: tuple[PeerBlock, ...]


def corpus_from_publications(
    pubs: Sequence[PublicationRecord], name: str, home_country: str = "AT"
) -> Corpus:
    """Wrap a peer's publication set so the corpus-level analyses can run on it."""
    return Corpus(
        focal_pubs=tuple(pubs),
        citing_pubs=(),
        edges=(),
        focal_author=AuthorRef(name),
        home_institution="",
        home_country=home_country,
    )


def _party(name: str, corpus: Corpus, tables: Tables, config: Config) -> PartyProfile:
    window = config.window
    focal = tuple(in_window(corpus.focal_pubs, window))
    known = {p.id for p in (*focal, *corpus.citing_pubs)}
    windowed = Corpus(
        focal_pubs=focal,
        citing_pubs=corpus.citing_pubs,
        edges=tuple(
            e for e in corpus.edges if corpus.pub(e.cited_id).year in window and e.citing_id in known
        ),
        focal_author=corpus.focal_author,
        home_institution=corpus.home_institution,
        home_country=corpus.home_country,
    )
    vis = visibility_profile(windowed, tables.metrics, config, tables.top_lists)
    dist = vis.quartile_distribution[window.label]
    ranked = sum(dist.values())
    impact = impact_profile(windowed, tables.baselines, config, Scope.ALL, tables.metrics)
    citable = impact_profile(windowed, tables.baselines, config, Scope.CITABLE, tables.metrics)
    source = config.primary_source(windowed.source_names())
    edge_counts = windowed.edge_counts()
    cites = {p.id: citation_count(p, source, edge_counts) for p in windowed.focal_pubs}
    terms = select_terms(
        extract_terms(windowed.focal_pubs, TermSource(config.focus_source), tables.stopwords),
        cites,
        config.focus_min_occurrences,
        config.focus_keep_fraction,
    )
    return PartyProfile(
        name=name,
        quartile_distribution=dist,
        headline={
            "publications": impact.publications,
            "total_citations": impact.total_citations,
            "citations_per_cited_doc": impact.citations_per_cited_doc,
            "h_index": impact.h_index,
            "g_index": impact.g_index,
            "cnci_mean": citable.cnci_mean,
            "top10_count": citable.top10.count,
            "top1_count": citable.top1.count,
            "q1_share": dist["Q1"] / ranked if ranked else 0.0,
            "venue_overlap": venue_overlap(windowed, config.knowledge_top_n).overlap_ratio,
        },
        top_terms=tuple(t.term for t in terms[:20]),
    )


def compare_peers(
    focal_corpus: Corpus,
    peer_corpora: Sequence[tuple[str, Corpus]],
    tables: Tables,
    config: Config,
) -> PeerComparison:
    """Profile the focal researcher and each peer over the same window and configuration."""
    if not peer_corpora:
        raise ValueError("at least one peer corpus is required")
    names = [name for name, _ in peer_corpora]
    if len(set(names)) != len(names):
        raise ValueError(f"peer names must be unique: {', '.join(names)}")
    window = config.window
    focal = _party(focal_corpus.focal_author.display_name, focal_corpus, tables, config)
    focal_refs = references_of(in_window(focal_corpus.focal_pubs, window))
    comparisons = peer_reference_comparison(
        focal_refs,
        {name: references_of(in_window(c.focal_pubs, window)) for name, c in peer_corpora},
        config.peers_top_n,
    )
    blocks = []
    for (name, corpus), refcmp in zip(peer_corpora, comparisons):
        party = _party(name, corpus, tables, config)
        deltas: dict[str, float | None] = {}
        for key in HEADLINE_FIELDS:
            a, b = focal.headline[key], party.headline[key]
            deltas[key] = None if a is None or b is None else b - a
        for label in QUARTILE_LABELS:
            deltas[f"quartile.{label}"] = party.quartile_distribution[label] - focal.quartile_distribution[label]
        blocks.append(
            PeerBlock(
                peer=party,
                deltas=deltas,
                reference_intersection=refcmp.intersection,
                focal_only=refcmp.focal_only,
                peer_only=refcmp.peer_only,
            )
        )
    return PeerComparison(window, focal, tuple(blocks))
