"""Small builders for in-memory test records."""

from __future__ import annotations

from typing import Iterable, Sequence

from bibprofile.corpus import (
    Affiliation,
    AuthorRef,
    CitationEdge,
    CitedReference,
    Corpus,
    DocType,
    PublicationRecord,
    Sector,
)

FOCAL = "Doe, Jane"


def author(name: str, orcid: str | None = None, focal: bool = False) -> AuthorRef:
    return AuthorRef(name, orcid=orcid, is_focal=focal)


def aff(institution: str, country: str = "AT", sector: Sector = Sector.ACADEMIC, home: bool = False) -> Affiliation:
    return Affiliation(institution, country, sector, home)


def ref(raw: str, year: int | None = None, source: str | None = None, matched: str | None = None, **kw) -> CitedReference:
    return CitedReference(raw, year=year, source_name=source, matched_pub_id=matched, **kw)


def pub(
    pub_id: str,
    year: int = 2012,
    authors: Sequence[str | AuthorRef] = (FOCAL,),
    doc_type: DocType = DocType.JOURNAL_ARTICLE,
    cites: int | None = None,
    **kw,
) -> PublicationRecord:
    refs = tuple(a if isinstance(a, AuthorRef) else AuthorRef(a) for a in authors)
    if cites is not None:
        kw.setdefault("times_cited", {"WoS": cites})
    kw.setdefault("title", f"Title of {pub_id}")
    for key in ("affiliations", "references", "funders", "keywords"):
        if key in kw:
            kw[key] = tuple(kw[key])
    return PublicationRecord(id=pub_id, year=year, doc_type=doc_type, authors=refs, **kw)


def corpus(
    focal: Iterable[PublicationRecord],
    citing: Iterable[PublicationRecord] = (),
    edges: Iterable[tuple[str, str]] = (),
    focal_author: str | AuthorRef = FOCAL,
    home_institution: str = "University of Vienna",
    home_country: str = "AT",
) -> Corpus:
    fa = focal_author if isinstance(focal_author, AuthorRef) else AuthorRef(focal_author)
    return Corpus(
        focal_pubs=tuple(focal),
        citing_pubs=tuple(citing),
        edges=tuple(CitationEdge(a, b) for a, b in edges),
        focal_author=fa,
        home_institution=home_institution,
        home_country=home_country,
    )
