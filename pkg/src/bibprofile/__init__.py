"""Individual bibliometric profiles from a researcher's publication corpus."""

import logging

from .baselines import (
    BaselineTable,
    JournalMetricsTable,
    Metric,
    Quartile,
    TopJournalList,
    best_quartile,
    expected_citations,
    percentile_flags,
    quartile_of,
)
from .config import Config, Window, load_config
from .corpus import (
    Corpus,
    CorpusError,
    DocType,
    PublicationRecord,
    load_corpus,
    match_publication_list,
    normalize_doc_type,
    validate_corpus,
)
from .graph import Graph, export_graph, parse_graph
from .indicators import g_index, h_index, i_index, m_quotient
from .reporting import Tables, build_report, compare_peers, load_tables, render

__version__ = "0.1.0"

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    "BaselineTable",
    "Config",
    "Corpus",
    "CorpusError",
    "DocType",
    "Graph",
    "JournalMetricsTable",
    "Metric",
    "PublicationRecord",
    "Quartile",
    "Tables",
    "TopJournalList",
    "Window",
    "best_quartile",
    "build_report",
    "compare_peers",
    "expected_citations",
    "export_graph",
    "g_index",
    "h_index",
    "i_index",
    "load_config",
    "load_corpus",
    "load_tables",
    "m_quotient",
    "match_publication_list",
    "normalize_doc_type",
    "parse_graph",
    "percentile_flags",
    "quartile_of",
    "render",
    "validate_corpus",
]
