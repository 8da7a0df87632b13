"""String normalization shared by matching, reference comparison and term extraction."""

from __future__ import annotations

import re
import unicodedata

_PUNCT_RE = re.compile(r"[^\w\s]|_", re.UNICODE)
_SPACE_RE = re.compile(r"\s+")
_DOI_PREFIX_RE = re.compile(r"^(?:https?://(?:dx\.)?doi\.org/|doi:\s*)", re.IGNORECASE)


def strip_diacritics(text: str) -> str:
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def normalize_text(text: str | None) -> str:
    """Lowercase, drop diacritics and punctuation, collapse whitespace."""
    if not text:
        return ""
    text = strip_diacritics(text).lower()
    text = _PUNCT_RE.sub(" ", text)
    return _SPACE_RE.sub(" ", text).strip()


def normalize_doi(doi: str | None) -> str:
    if not doi:
        return ""
    return _DOI_PREFIX_RE.sub("", doi.strip()).lower()


def normalize_name(text: str | None) -> str:
    """Casefolded, whitespace-collapsed form used for institution and venue keys."""
    if not text:
        return ""
    return _SPACE_RE.sub(" ", strip_diacritics(text).casefold()).strip()


def author_key(display_name: str) -> str:
    """Derive the ``"surname, initials"`` key for an author display name.

    Accepts both ``"Surname, Given Names"`` and ``"Given Names Surname"``.
    Hyphenated given names contribute one initial per part.

    >>> author_key("Gorraiz, Juan")
    'gorraiz, j'
    >>> author_key("Christian Gumpenberger")
    'gumpenberger, c'
    """
    name = strip_diacritics(display_name).lower().strip()
    if "," in name:
        surname, _, given = name.partition(",")
    else:
        parts = name.split()
        if len(parts) <= 1:
            surname, given = name, ""
        else:
            surname, given = parts[-1], " ".join(parts[:-1])
    surname = normalize_text(surname)
    initials = "".join(
        tok[0] for tok in re.split(r"[\s\-.]+", given) if tok and tok[0].isalnum()
    )
    return f"{surname}, {initials}" if initials else surname
