"""Canonical data model, corpus file I/O, validation and coverage matching."""

from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import json
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import pycountry

from .text import author_key, normalize_doi, normalize_name, normalize_text

logger = logging.getLogger(__name__)

MIN_YEAR = 1900


class DocType(str, Enum):
    MONOGRAPH = "Monograph"
    BOOK_CHAPTER = "BookChapter"
    JOURNAL_ARTICLE = "JournalArticle"
    REVIEW = "Review"
    PROCEEDINGS_PAPER = "ProceedingsPaper"
    CONFERENCE = "Conference"
    BOOK_REVIEW = "BookReview"
    EDITED_VOLUME = "EditedVolume"
    REPORT = "Report"
    PATENT = "Patent"
    OTHER = "Other"


CITABLE_TYPES = frozenset({DocType.JOURNAL_ARTICLE, DocType.REVIEW, DocType.PROCEEDINGS_PAPER})

# Highest precedence first; used when a raw type string maps to several groups.
DOC_TYPE_PRECEDENCE: tuple[DocType, ...] = (
    DocType.PATENT,
    DocType.MONOGRAPH,
    DocType.EDITED_VOLUME,
    DocType.PROCEEDINGS_PAPER,
    DocType.REVIEW,
    DocType.JOURNAL_ARTICLE,
    DocType.BOOK_CHAPTER,
    DocType.BOOK_REVIEW,
    DocType.CONFERENCE,
    DocType.REPORT,
    DocType.OTHER,
)

DEFAULT_DOC_TYPE_ALIASES: dict[str, DocType] = {
    "article": DocType.JOURNAL_ARTICLE,
    "journal article": DocType.JOURNAL_ARTICLE,
    "research article": DocType.JOURNAL_ARTICLE,
    "letter": DocType.JOURNAL_ARTICLE,
    "note": DocType.JOURNAL_ARTICLE,
    "early access": DocType.JOURNAL_ARTICLE,
    "review": DocType.REVIEW,
    "review article": DocType.REVIEW,
    "proceedings paper": DocType.PROCEEDINGS_PAPER,
    "conference paper": DocType.PROCEEDINGS_PAPER,
    "conference proceedings": DocType.PROCEEDINGS_PAPER,
    "inproceedings": DocType.PROCEEDINGS_PAPER,
    "meeting abstract": DocType.CONFERENCE,
    "meeting": DocType.CONFERENCE,
    "conference": DocType.CONFERENCE,
    "talk": DocType.CONFERENCE,
    "poster": DocType.CONFERENCE,
    "presentation": DocType.CONFERENCE,
    "book": DocType.MONOGRAPH,
    "monograph": DocType.MONOGRAPH,
    "book chapter": DocType.BOOK_CHAPTER,
    "chapter": DocType.BOOK_CHAPTER,
    "book review": DocType.BOOK_REVIEW,
    "edited book": DocType.EDITED_VOLUME,
    "edited volume": DocType.EDITED_VOLUME,
    "journal issue": DocType.EDITED_VOLUME,
    "editorial material": DocType.OTHER,
    "report": DocType.REPORT,
    "working paper": DocType.REPORT,
    "technical report": DocType.REPORT,
    "patent": DocType.PATENT,
    "other": DocType.OTHER,
    "miscellaneous": DocType.OTHER,
}
for _dt_member in DocType:
    DEFAULT_DOC_TYPE_ALIASES[_dt_member.value.lower()] = _dt_member


class Sector(str, Enum):
    ACADEMIC = "Academic"
    INDUSTRY = "Industry"
    GOVERNMENT = "Government"
    OTHER = "Other"


class RefType(str, Enum):
    JOURNAL = "Journal"
    BOOK = "Book"
    PROCEEDINGS = "Proceedings"
    OTHER = "Other"
    UNKNOWN = "Unknown"


class CorpusError(ValueError):
    """Fatal problem while parsing or validating a corpus file."""

    def __init__(self, message: str, record_ids: Sequence[str] = ()):
        super().__init__(message)
        self.record_ids = tuple(record_ids)


@dataclass(frozen=True)
class Issue:
    code: str
    message: str
    record_ids: tuple[str, ...] = ()

    def __str__(self) -> str:
        return self.message


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AuthorRef:
    display_name: str
    normalized_key: str = ""
    orcid: str | None = None
    is_focal: bool = False

    def __post_init__(self) -> None:
        if not self.normalized_key:
            object.__setattr__(self, "normalized_key", author_key(self.display_name))

    def same_person(self, other: AuthorRef) -> bool:
        """ORCID decides when both carry one, otherwise the normalized key."""
        if self.orcid and other.orcid:
            return self.orcid == other.orcid
        return self.normalized_key == other.normalized_key


@dataclass(frozen=True)
class Affiliation:
    institution: str
    country: str
    sector: Sector = Sector.ACADEMIC
    is_home: bool = False


@dataclass(frozen=True)
class CitedReference:
    raw: str
    year: int | None = None
    source_name: str | None = None
    ref_type: RefType = RefType.UNKNOWN
    matched_pub_id: str | None = None

    @property
    def key(self) -> str:
        """Identity used for reference comparison and coupling."""
        if self.matched_pub_id:
            return f"id:{self.matched_pub_id}"
        return normalize_text(self.raw)


@dataclass(frozen=True)
class PublicationRecord:
    id: str
    title: str
    year: int
    doc_type: DocType
    authors: tuple[AuthorRef, ...]
    source_ids: dict[str, str] = field(default_factory=dict)
    abstract: str | None = None
    language: str = ""
    corresponding_author_index: int | None = None
    affiliations: tuple[Affiliation, ...] = ()
    venue_id: str | None = None
    venue_name: str = ""
    open_access: bool = False
    funders: tuple[str, ...] = ()
    keywords: tuple[str, ...] = ()
    times_cited: dict[str, int] = field(default_factory=dict)
    references: tuple[CitedReference, ...] = ()

    @property
    def doi(self) -> str:
        for name, value in self.source_ids.items():
            if name.lower() == "doi":
                return normalize_doi(value)
        return ""

    @property
    def is_citable(self) -> bool:
        return self.doc_type in CITABLE_TYPES

    @property
    def is_english(self) -> bool:
        return self.language.lower().split("-")[0] in {"en", "eng"}


@dataclass(frozen=True)
class CitationEdge:
    citing_id: str
    cited_id: str


@dataclass(frozen=True)
class Corpus:
    focal_pubs: tuple[PublicationRecord, ...]
    citing_pubs: tuple[PublicationRecord, ...]
    edges: tuple[CitationEdge, ...]
    focal_author: AuthorRef
    home_institution: str
    home_country: str

    def pub(self, pub_id: str) -> PublicationRecord:
        return self._index()[pub_id]

    def _index(self) -> dict[str, PublicationRecord]:
        cached = self.__dict__.get("_pub_index")
        if cached is None:
            cached = {p.id: p for p in (*self.focal_pubs, *self.citing_pubs)}
            object.__setattr__(self, "_pub_index", cached)
        return cached

    def edge_counts(self) -> Counter[str]:
        """Citations received per focal publication, derived from the edge list."""
        return Counter(e.cited_id for e in self.edges)

    def source_names(self) -> list[str]:
        """Citation sources in order of first appearance over the focal records."""
        seen: dict[str, None] = {}
        for pub in self.focal_pubs:
            for name in pub.times_cited:
                seen.setdefault(name, None)
        return list(seen)

    def is_focal_author(self, author: AuthorRef) -> bool:
        return author.is_focal or author.same_person(self.focal_author)

    def focal_index(self, pub: PublicationRecord) -> int | None:
        """Position of the focal author in ``pub.authors``."""
        for i, author in enumerate(pub.authors):
            if author.is_focal:
                return i
        for i, author in enumerate(pub.authors):
            if author.same_person(self.focal_author):
                return i
        return None

    def fingerprint(self) -> str:
        payload = json.dumps(corpus_to_dict(self), sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class CoverageResult:
    source_name: str
    total_master: int
    matched: int
    percent: float
    unmatched_ids: tuple[str, ...] = ()
    pairs: tuple[tuple[str, str], ...] = ()
    warnings: tuple[str, ...] = ()


# ---------------------------------------------------------------------------
# Author identity
# ---------------------------------------------------------------------------


class AuthorIdentity:
    """Assigns one stable key per person across a set of author references.

    A normalized key seen with exactly one ORCID is folded into that ORCID, so
    records that omit the ORCID still join the right person.
    """

    def __init__(self, authors: Iterable[AuthorRef]):
        orcids_by_key: dict[str, set[str]] = defaultdict(set)
        labels: dict[str, str] = {}
        authors = list(authors)
        for a in authors:
            if a.orcid:
                orcids_by_key[a.normalized_key].add(a.orcid)
        self._key_to_orcid = {k: next(iter(v)) for k, v in orcids_by_key.items() if len(v) == 1}
        for a in authors:
            labels.setdefault(self.key(a), a.display_name)
        self._labels = labels

    def key(self, author: AuthorRef) -> str:
        if author.orcid:
            return f"orcid:{author.orcid}"
        orcid = self._key_to_orcid.get(author.normalized_key)
        if orcid:
            return f"orcid:{orcid}"
        return author.normalized_key

    def label(self, key: str) -> str:
        return self._labels.get(key, key)


# ---------------------------------------------------------------------------
# Document types
# ---------------------------------------------------------------------------


def load_alias_table(path: str | Path) -> dict[str, DocType]:
    """Read a ``raw,canonical`` CSV and merge it over the default aliases."""
    aliases = dict(DEFAULT_DOC_TYPE_ALIASES)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or set(reader.fieldnames) != {"raw", "canonical"}:
            raise CorpusError(f"{path}: alias table must have header 'raw,canonical'")
        for lineno, row in enumerate(reader, start=2):
            try:
                canonical = DocType(row["canonical"].strip())
            except ValueError:
                raise CorpusError(
                    f"{path}:{lineno}: unknown canonical type {row['canonical']!r}"
                ) from None
            aliases[" ".join(row["raw"].lower().split())] = canonical
    return aliases


def normalize_doc_type(
    raw: str,
    aliases: Mapping[str, DocType] | None = None,
    warnings: list[str] | None = None,
) -> DocType:
    """Map a raw document type string onto one of the standard groups.

    Multi-valued strings (``"Article; Proceedings Paper"``) resolve to the
    highest-precedence group among the parts that map.
    """
    table = DEFAULT_DOC_TYPE_ALIASES if aliases is None else aliases
    found: set[DocType] = set()
    for part in (raw or "").split(";"):
        key = " ".join(part.lower().split())
        if key in table:
            found.add(table[key])
    if not found:
        if raw and raw.strip():
            msg = f"unmapped document type {raw!r} -> Other"
            logger.warning(msg)
            if warnings is not None:
                warnings.append(msg)
        return DocType.OTHER
    return min(found, key=DOC_TYPE_PRECEDENCE.index)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_TOP_KEYS = {"focal_author", "home_institution", "home_country", "focal_pubs", "citing_pubs", "edges"}
_PUB_KEYS = {
    "id", "source_ids", "title", "abstract", "year", "doc_type", "language", "authors",
    "corresponding_author_index", "affiliations", "venue_id", "venue_name", "open_access",
    "funders", "keywords", "times_cited", "references",
}  # fmt: skip
_AUTHOR_KEYS = {"display_name", "normalized_key", "orcid", "is_focal"}
_AFF_KEYS = {"institution", "country", "sector", "is_home"}
_REF_KEYS = {"raw", "year", "source_name", "ref_type", "matched_pub_id"}
_EDGE_KEYS = {"citing_id", "cited_id"}


def _check_keys(obj: Any, allowed: set[str], where: str, required: Iterable[str] = ()) -> None:
    if not isinstance(obj, dict):
        raise CorpusError(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise CorpusError(f"{where}: unknown key(s) {', '.join(unknown)}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise CorpusError(f"{where}: missing key(s) {', '.join(missing)}")


def _valid_country(code: str) -> bool:
    return len(code) == 2 and code.isupper() and pycountry.countries.get(alpha_2=code) is not None


def _parse_author(obj: Any, where: str) -> AuthorRef:
    _check_keys(obj, _AUTHOR_KEYS, where, required=("display_name",))
    author = AuthorRef(
        display_name=str(obj["display_name"]),
        orcid=obj.get("orcid") or None,
        is_focal=bool(obj.get("is_focal", False)),
    )
    given = obj.get("normalized_key")
    if given and given != author.normalized_key:
        raise CorpusError(
            f"{where}: normalized_key {given!r} does not match {author.normalized_key!r}"
        )
    return author


def _parse_affiliation(obj: Any, where: str) -> Affiliation:
    _check_keys(obj, _AFF_KEYS, where, required=("institution", "country"))
    country = str(obj["country"])
    if not _valid_country(country):
        raise CorpusError(f"{where}: invalid ISO-3166 alpha-2 country code {country!r}")
    try:
        sector = Sector(obj.get("sector") or Sector.ACADEMIC.value)
    except ValueError:
        raise CorpusError(f"{where}: unknown sector {obj.get('sector')!r}") from None
    return Affiliation(
        institution=str(obj["institution"]),
        country=country,
        sector=sector,
        is_home=bool(obj.get("is_home", False)),
    )


def _parse_reference(obj: Any, where: str) -> CitedReference:
    _check_keys(obj, _REF_KEYS, where, required=("raw",))
    if not str(obj["raw"]).strip():
        raise CorpusError(f"{where}: empty reference string")
    try:
        ref_type = RefType(obj.get("ref_type") or RefType.UNKNOWN.value)
    except ValueError:
        raise CorpusError(f"{where}: unknown ref_type {obj.get('ref_type')!r}") from None
    year = obj.get("year")
    return CitedReference(
        raw=str(obj["raw"]),
        year=int(year) if year is not None else None,
        source_name=obj.get("source_name") or None,
        ref_type=ref_type,
        matched_pub_id=obj.get("matched_pub_id") or None,
    )


def _parse_pub(
    obj: Any, where: str, aliases: Mapping[str, DocType] | None, warnings: list[str]
) -> PublicationRecord:
    _check_keys(obj, _PUB_KEYS, where, required=("id", "title", "year", "doc_type", "authors"))
    pub_id = str(obj["id"])
    if not pub_id:
        raise CorpusError(f"{where}: empty id")
    where = f"{where} (id={pub_id})"
    if not isinstance(obj["year"], int) or isinstance(obj["year"], bool):
        raise CorpusError(f"{where}: year must be an integer")
    authors = tuple(_parse_author(a, f"{where}.authors[{i}]") for i, a in enumerate(obj["authors"]))
    if not authors:
        raise CorpusError(f"{where}: authors must be non-empty", [pub_id])
    if sum(a.is_focal for a in authors) > 1:
        raise CorpusError(f"{where}: more than one author flagged is_focal", [pub_id])
    corr = obj.get("corresponding_author_index")
    if corr is not None and not (0 <= int(corr) < len(authors)):
        raise CorpusError(f"{where}: corresponding_author_index {corr} out of range", [pub_id])
    times_cited = {str(k): int(v) for k, v in (obj.get("times_cited") or {}).items()}
    if any(v < 0 for v in times_cited.values()):
        raise CorpusError(f"{where}: negative times_cited", [pub_id])
    doc_warnings: list[str] = []
    doc_type = normalize_doc_type(str(obj["doc_type"]), aliases, doc_warnings)
    warnings.extend(f"{pub_id}: {w}" for w in doc_warnings)
    return PublicationRecord(
        id=pub_id,
        source_ids={str(k): str(v) for k, v in (obj.get("source_ids") or {}).items()},
        title=str(obj["title"]),
        abstract=obj.get("abstract") or None,
        year=obj["year"],
        doc_type=doc_type,
        language=str(obj.get("language") or ""),
        authors=authors,
        corresponding_author_index=int(corr) if corr is not None else None,
        affiliations=tuple(
            _parse_affiliation(a, f"{where}.affiliations[{i}]")
            for i, a in enumerate(obj.get("affiliations") or ())
        ),
        venue_id=obj.get("venue_id") or None,
        venue_name=str(obj.get("venue_name") or ""),
        open_access=bool(obj.get("open_access", False)),
        funders=tuple(str(f) for f in obj.get("funders") or ()),
        keywords=tuple(str(k) for k in obj.get("keywords") or ()),
        times_cited=times_cited,
        references=tuple(
            _parse_reference(r, f"{where}.references[{i}]")
            for i, r in enumerate(obj.get("references") or ())
        ),
    )


def _read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def parse_corpus(
    data: Any,
    aliases: Mapping[str, DocType] | None = None,
    warnings: list[str] | None = None,
) -> Corpus:
    """Build a validated :class:`Corpus` from the decoded canonical document."""
    warnings = [] if warnings is None else warnings
    _check_keys(
        data, _TOP_KEYS, "corpus", required=("focal_author", "home_institution", "home_country", "focal_pubs")
    )
    focal = tuple(
        _parse_pub(p, f"focal_pubs[{i}]", aliases, warnings)
        for i, p in enumerate(data["focal_pubs"])
    )
    if not focal:
        raise CorpusError("corpus has no focal publications")
    citing = tuple(
        _parse_pub(p, f"citing_pubs[{i}]", aliases, warnings)
        for i, p in enumerate(data.get("citing_pubs") or ())
    )
    ids = Counter(p.id for p in (*focal, *citing))
    dupes = sorted(k for k, n in ids.items() if n > 1)
    if dupes:
        raise CorpusError(f"duplicate record id(s): {', '.join(dupes)}", dupes)

    focal_ids = {p.id for p in focal}
    edges: list[CitationEdge] = []
    seen: set[tuple[str, str]] = set()
    for i, obj in enumerate(data.get("edges") or ()):
        where = f"edges[{i}]"
        _check_keys(obj, _EDGE_KEYS, where, required=("citing_id", "cited_id"))
        edge = CitationEdge(str(obj["citing_id"]), str(obj["cited_id"]))
        if edge.cited_id not in focal_ids:
            raise CorpusError(f"{where}: dangling cited_id {edge.cited_id!r}", [edge.cited_id])
        if edge.citing_id not in ids:
            raise CorpusError(f"{where}: dangling citing_id {edge.citing_id!r}", [edge.citing_id])
        if edge.citing_id == edge.cited_id:
            raise CorpusError(f"{where}: self-loop on {edge.cited_id!r}", [edge.cited_id])
        if (edge.citing_id, edge.cited_id) in seen:
            raise CorpusError(
                f"{where}: duplicate edge {edge.citing_id}->{edge.cited_id}", [edge.citing_id]
            )
        seen.add((edge.citing_id, edge.cited_id))
        edges.append(edge)

    home_country = str(data["home_country"])
    if not _valid_country(home_country):
        raise CorpusError(f"corpus: invalid home_country {home_country!r}")
    return Corpus(
        focal_pubs=focal,
        citing_pubs=citing,
        edges=tuple(edges),
        focal_author=_parse_author(data["focal_author"], "focal_author"),
        home_institution=str(data["home_institution"]),
        home_country=home_country,
    )


def load_corpus(
    path: str | Path,
    aliases: Mapping[str, DocType] | None = None,
    warnings: list[str] | None = None,
) -> Corpus:
    return parse_corpus(_read_json(path), aliases, warnings)


def load_publications(
    path: str | Path, aliases: Mapping[str, DocType] | None = None
) -> list[PublicationRecord]:
    """Read the focal publications of a file.

    Accepts a full corpus document or one restricted to ``focal_pubs`` (the
    format used for database exports and peer publication sets).
    """
    data = _read_json(path)
    _check_keys(data, _TOP_KEYS, str(path), required=("focal_pubs",))
    warnings: list[str] = []
    pubs = [
        _parse_pub(p, f"focal_pubs[{i}]", aliases, warnings)
        for i, p in enumerate(data["focal_pubs"])
    ]
    dupes = sorted(k for k, n in Counter(p.id for p in pubs).items() if n > 1)
    if dupes:
        raise CorpusError(f"{path}: duplicate record id(s): {', '.join(dupes)}", dupes)
    return pubs


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _author_to_dict(a: AuthorRef) -> dict[str, Any]:
    return {
        "display_name": a.display_name,
        "normalized_key": a.normalized_key,
        "orcid": a.orcid,
        "is_focal": a.is_focal,
    }


def pub_to_dict(p: PublicationRecord) -> dict[str, Any]:
    return {
        "id": p.id,
        "source_ids": dict(p.source_ids),
        "title": p.title,
        "abstract": p.abstract,
        "year": p.year,
        "doc_type": p.doc_type.value,
        "language": p.language,
        "authors": [_author_to_dict(a) for a in p.authors],
        "corresponding_author_index": p.corresponding_author_index,
        "affiliations": [
            {"institution": a.institution, "country": a.country, "sector": a.sector.value, "is_home": a.is_home}
            for a in p.affiliations
        ],
        "venue_id": p.venue_id,
        "venue_name": p.venue_name,
        "open_access": p.open_access,
        "funders": list(p.funders),
        "keywords": list(p.keywords),
        "times_cited": dict(p.times_cited),
        "references": [
            {
                "raw": r.raw,
                "year": r.year,
                "source_name": r.source_name,
                "ref_type": r.ref_type.value,
                "matched_pub_id": r.matched_pub_id,
            }
            for r in p.references
        ],
    }


def corpus_to_dict(corpus: Corpus) -> dict[str, Any]:
    return {
        "focal_author": _author_to_dict(corpus.focal_author),
        "home_institution": corpus.home_institution,
        "home_country": corpus.home_country,
        "focal_pubs": [pub_to_dict(p) for p in corpus.focal_pubs],
        "citing_pubs": [pub_to_dict(p) for p in corpus.citing_pubs],
        "edges": [{"citing_id": e.citing_id, "cited_id": e.cited_id} for e in corpus.edges],
    }


def dump_corpus(corpus: Corpus, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(corpus_to_dict(corpus), indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate_corpus(
    corpus: Corpus, primary_source: str | None = None, current_year: int | None = None
) -> list[Issue]:
    """Return the non-fatal invariant violations of a parsed corpus."""
    current_year = current_year or _dt.date.today().year
    if primary_source is None:
        sources = corpus.source_names()
        primary_source = sources[0] if sources else None
    issues: list[Issue] = []

    for pub in (*corpus.focal_pubs, *corpus.citing_pubs):
        if not MIN_YEAR <= pub.year <= current_year:
            issues.append(
                Issue("year-range", f"year out of range id={pub.id} ({pub.year})", (pub.id,))
            )
        for ref in pub.references:
            if ref.year is not None and ref.year > pub.year + 1:
                issues.append(
                    Issue(
                        "reference-year",
                        f"reference newer than citing record id={pub.id} ({ref.year} > {pub.year + 1})",
                        (pub.id,),
                    )
                )

    if corpus.edges and primary_source:
        derived = corpus.edge_counts()
        for pub in corpus.focal_pubs:
            stated = pub.times_cited.get(primary_source)
            if stated is not None and stated != derived.get(pub.id, 0):
                issues.append(
                    Issue(
                        "cited-count",
                        f"cited-count mismatch id={pub.id} ({stated} vs {derived.get(pub.id, 0)})",
                        (pub.id,),
                    )
                )

    if not any(corpus.focal_index(p) is not None for p in corpus.focal_pubs):
        issues.append(Issue("focal-author", "focal author not found on any focal publication"))
    else:
        missing = [p.id for p in corpus.focal_pubs if corpus.focal_index(p) is None]
        if missing:
            issues.append(
                Issue(
                    "focal-author",
                    f"focal author missing from {len(missing)} publication(s): {', '.join(missing)}",
                    tuple(missing),
                )
            )
    return issues


# ---------------------------------------------------------------------------
# Coverage
# ---------------------------------------------------------------------------


def match_publication_list(
    master: Sequence[PublicationRecord],
    export: Sequence[PublicationRecord],
    source_name: str,
) -> CoverageResult:
    """Match a researcher's publication list against a database export.

    DOI equality is tried for every master record first; remaining records
    fall back to equal normalized title with publication years at most one
    apart. Each export record is consumed at most once and, among several
    candidates, the smallest export id wins.
    """
    warnings: list[str] = []
    used: set[str] = set()
    matched: dict[str, str] = {}

    by_doi: dict[str, list[PublicationRecord]] = defaultdict(list)
    by_title: dict[str, list[PublicationRecord]] = defaultdict(list)
    for rec in export:
        if rec.doi:
            by_doi[rec.doi].append(rec)
        by_title[normalize_text(rec.title)].append(rec)

    def take(m: PublicationRecord, candidates: list[PublicationRecord], how: str) -> None:
        free = sorted((c for c in candidates if c.id not in used), key=lambda c: c.id)
        if not free:
            return
        if len(free) > 1:
            warnings.append(
                f"ambiguous {how} match for {m.id}: {', '.join(c.id for c in free)}; took {free[0].id}"
            )
        used.add(free[0].id)
        matched[m.id] = free[0].id

    for m in master:
        if m.doi:
            take(m, by_doi.get(m.doi, []), "DOI")
    for m in master:
        if m.id in matched:
            continue
        title = normalize_text(m.title)
        if title:
            take(m, [c for c in by_title.get(title, []) if abs(c.year - m.year) <= 1], "title")

    total = len(master)
    count = len(matched)
    return CoverageResult(
        source_name=source_name,
        total_master=total,
        matched=count,
        percent=count / total if total else 0.0,
        unmatched_ids=tuple(m.id for m in master if m.id not in matched),
        pairs=tuple((m.id, matched[m.id]) for m in master if m.id in matched),
        warnings=tuple(warnings),
    )


__all__ = [
    "Affiliation",
    "AuthorIdentity",
    "AuthorRef",
    "CITABLE_TYPES",
    "CitationEdge",
    "CitedReference",
    "Corpus",
    "CorpusError",
    "CoverageResult",
    "DocType",
    "Issue",
    "PublicationRecord",
    "RefType",
    "Sector",
    "corpus_to_dict",
    "dump_corpus",
    "load_alias_table",
    "load_corpus",
    "load_publications",
    "match_publication_list",
    "normalize_doc_type",
    "normalize_name",
    "parse_corpus",
    "pub_to_dict",
    "validate_corpus",
]
