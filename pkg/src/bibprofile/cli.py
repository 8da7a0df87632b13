"""Command line entry point: ``bibprofile <command> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from importlib import resources
from pathlib import Path
from typing import Sequence

from .baselines import TableError
from .config import Config, ConfigError, load_config
from .corpus import CorpusError, load_corpus, load_publications, match_publication_list, validate_corpus
from .focus import TermSource, extract_terms, select_terms, term_cooccurrence_map
from .graph import FORMATS, export_graph
from .indicators import citation_count
from .networks import (
    bibliographic_coupling,
    citing_country_network,
    coauthor_network,
    country_copub_network,
    key_actors,
)
from .reporting import (
    MissingTableError,
    Tables,
    build_report,
    compare_peers,
    corpus_from_publications,
    graph_filename,
    load_tables,
    report_id,
    to_jsonable,
    write_outputs,
)

logger = logging.getLogger("bibprofile")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_MISSING = 2


def _dump(obj: object) -> str:
    return json.dumps(to_jsonable(obj), indent=2, ensure_ascii=False) + "\n"


def _setup(args: argparse.Namespace) -> tuple[Config, Tables]:
    config = load_config(getattr(args, "config", None))
    try:
        tables = load_tables(config)
    except (OSError, TableError) as exc:
        raise MissingTableError(f"cannot load table: {exc}") from None
    return config, tables


def _out_dir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_validate(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    tables = load_tables(config) if args.config else Tables()
    warnings: list[str] = []
    corpus = load_corpus(args.corpus, tables.aliases, warnings)
    issues = validate_corpus(corpus, config.primary_source(corpus.source_names()))
    print(f"{len(corpus.focal_pubs)} focal, {len(corpus.citing_pubs)} citing, {len(corpus.edges)} edges")
    for w in warnings:
        print(f"warning: {w}")
    for issue in issues:
        print(f"issue: {issue.message}")
    if not issues:
        print("clean")
    return EXIT_VALIDATION if args.strict and issues else EXIT_OK


def cmd_coverage(args: argparse.Namespace) -> int:
    master = load_publications(args.master)
    export = load_publications(args.export)
    result = match_publication_list(master, export, args.source)
    text = _dump(result)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    config, tables = _setup(args)
    warnings: list[str] = []
    corpus = load_corpus(args.corpus, tables.aliases, warnings)
    issues = validate_corpus(corpus, config.primary_source(corpus.source_names()))
    warnings += [f"validation: {i.message}" for i in issues]
    report = build_report(corpus, tables, config, load_warnings=warnings, graph_format=args.graph_format)
    for path in write_outputs(report, args.out, args.format):
        print(path)
    return EXIT_OK


def cmd_graphs(args: argparse.Namespace) -> int:
    config, tables = _setup(args)
    corpus = load_corpus(args.corpus, tables.aliases)
    rid = report_id(corpus, config)
    out = _out_dir(args.out)
    graphs = {
        "coauthors": coauthor_network(corpus, config.window),
        "countries": country_copub_network(corpus, config.window),
        "citing_countries": citing_country_network(corpus),
    }
    for name, graph in graphs.items():
        path = out / graph_filename(rid, name, args.format)
        path.write_bytes(export_graph(graph, args.format, name))
        print(path)
    return EXIT_OK


def cmd_focus(args: argparse.Namespace) -> int:
    config, tables = _setup(args)
    corpus = load_corpus(args.corpus, tables.aliases)
    rid = report_id(corpus, config)
    out = _out_dir(args.out)
    pubs = [p for p in corpus.focal_pubs if p.year in config.window] if args.window else list(corpus.focal_pubs)
    source = config.primary_source(corpus.source_names())
    edge_counts = corpus.edge_counts()
    cites = {p.id: citation_count(p, source, edge_counts) for p in pubs}
    terms = extract_terms(pubs, TermSource(config.focus_source), tables.stopwords)
    selected = select_terms(terms, cites, config.focus_min_occurrences, config.focus_keep_fraction)
    terms_path = out / f"{rid}.terms.json"
    terms_path.write_text(
        _dump({"extracted": len(terms), "selected": [
            {"term": t.term, "occurrences": t.occurrences, "relevance": t.relevance} for t in selected
        ]}),
        encoding="utf-8",
    )
    graph_path = out / graph_filename(rid, "terms", args.format)
    graph_path.write_bytes(export_graph(term_cooccurrence_map(pubs, selected), args.format, "terms"))
    print(terms_path)
    print(graph_path)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    config, tables = _setup(args)
    corpus = load_corpus(args.corpus, tables.aliases)
    peers = [
        (Path(p).stem, corpus_from_publications(load_publications(p, tables.aliases), Path(p).stem, corpus.home_country))
        for p in args.peer
    ]
    result = compare_peers(corpus, peers, tables, config)
    path = _out_dir(args.out) / f"{report_id(corpus, config)}.compare.json"
    path.write_text(_dump(result), encoding="utf-8")
    print(path)
    return EXIT_OK


def cmd_field(args: argparse.Namespace) -> int:
    config, tables = _setup(args)
    corpus = load_corpus(args.corpus, tables.aliases)
    pubs = [p for p in corpus.focal_pubs if p.year in config.window] if args.window else list(corpus.focal_pubs)
    rid = report_id(corpus, config)
    out = _out_dir(args.out)
    actors = key_actors(
        pubs, tables.baselines, tables.metrics, config.primary_source(corpus.source_names()), config.visibility_metric
    )
    actors_path = out / f"{rid}.field.json"
    actors_path.write_text(_dump(actors), encoding="utf-8")
    graph_path = out / graph_filename(rid, "coupling", args.format)
    graph_path.write_bytes(export_graph(bibliographic_coupling(pubs), args.format, "coupling"))
    print(actors_path)
    print(graph_path)
    return EXIT_OK


def cmd_interview_template(args: argparse.Namespace) -> int:
    text = resources.files("bibprofile").joinpath("data/interview_template.md").read_text(encoding="utf-8")
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text(text, encoding="utf-8")
    print(args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bibprofile", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="log analysis warnings")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse a corpus and list invariant warnings")
    p.add_argument("corpus")
    p.add_argument("--config")
    p.add_argument("--strict", action="store_true", help="exit 1 when any issue is found")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("coverage", help="match a publication list against a database export")
    p.add_argument("master")
    p.add_argument("export")
    p.add_argument("--source", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("report", help="build the full report")
    p.add_argument("corpus")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("structured", "markdown"), default="structured")
    p.add_argument("--graph-format", choices=FORMATS, default="dot")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("graphs", help="write co-author and country networks")
    p.add_argument("corpus")
    p.add_argument("--config")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=FORMATS, default="dot")
    p.set_defaults(func=cmd_graphs)

    p = sub.add_parser("focus", help="extract terms and write the co-occurrence map")
    p.add_argument("corpus")
    p.add_argument("--config")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=FORMATS, default="dot")
    p.add_argument("--window", action="store_true", help="restrict to the configured window")
    p.set_defaults(func=cmd_focus)

    p = sub.add_parser("compare", help="compare the researcher with peer publication sets")
    p.add_argument("corpus")
    p.add_argument("--peer", nargs="+", required=True)
    p.add_argument("--config")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("field", help="key actors and bibliographic coupling of a field delineation")
    p.add_argument("corpus")
    p.add_argument("--config")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=FORMATS, default="dot")
    p.add_argument("--window", action="store_true", help="restrict to the configured window")
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("interview-template", help="write the interview questionnaire")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_interview_template)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.verbose else logging.ERROR, format="%(levelname)s %(name)s: %(message)s"
    )
    try:
        return args.func(args)
    except CorpusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (MissingTableError, ConfigError, TableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING


if __name__ == "__main__":
    sys.exit(main())
