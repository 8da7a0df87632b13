"""Analysis configuration: window, thresholds, table locations, section toggles."""

from __future__ import annotations

import datetime as _dt
import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

import yaml

from .baselines import Metric

SECTION_NAMES = (
    "Methodology",
    "Coverage",
    "Activity",
    "AffiliationFunding",
    "Coauthorship",
    "Visibility",
    "Impact",
    "CitingAnalysis",
    "Cooperation",
    "ReferenceAnalysis",
    "ResearchFocus",
    "Summary",
    "Annex",
)

I_THRESHOLD_PRESETS = {"default": (10, 50, 100), "social_sciences": (10, 50)}
EDITION_MODES = ("latest", "publication_year", "mean")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Window:
    """Inclusive range of complete calendar years."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValueError(f"empty window {self.start}-{self.end}")

    def __contains__(self, year: object) -> bool:
        return isinstance(year, int) and self.start <= year <= self.end

    @property
    def years(self) -> range:
        return range(self.start, self.end + 1)

    @property
    def label(self) -> str:
        return f"{self.start}-{self.end}"

    def halves(self) -> tuple[Window, Window]:
        """Split into two consecutive halves; the first gets the extra year when odd."""
        if self.start == self.end:
            raise ValueError("a single-year window cannot be halved")
        mid = self.start + (self.end - self.start + 1 + 1) // 2 - 1
        return Window(self.start, mid), Window(mid + 1, self.end)


@dataclass(frozen=True)
class Config:
    reference_year: int = field(default_factory=lambda: _dt.date.today().year)
    window_start: int | None = None
    window_end: int | None = None
    i_thresholds: tuple[int, ...] = I_THRESHOLD_PRESETS["default"]
    visibility_metric: Metric = Metric.IF
    visibility_edition_year: int | None = None
    visibility_edition_mode: str = "latest"
    citation_sources: tuple[str, ...] = ()
    citation_primary_source: str | None = None
    selfcite_usual_max: float = 0.20
    dependence_flag_min: float = 0.75
    alphabetical_suppress_min: float = 0.80
    impact_show_std: bool = False
    cooperation_max_rows: int = 50
    focus_min_occurrences: int = 2
    focus_keep_fraction: float = 0.6
    focus_source: str = "TitleAbstract"
    field_half_life: float | None = None
    knowledge_top_n: int = 10
    peers_top_n: int = 20
    report_id: str | None = None
    tables_metrics: str | None = None
    tables_baselines: str | None = None
    tables_aliases: str | None = None
    tables_stoplist: str | None = None
    top_lists: dict[str, str] = field(default_factory=dict)
    coverage_exports: dict[str, str] = field(default_factory=dict)
    sections: dict[str, bool] = field(default_factory=dict)
    base_dir: str = "."

    def __post_init__(self) -> None:
        if self.visibility_edition_mode not in EDITION_MODES:
            raise ConfigError(f"visibility.edition_mode must be one of {', '.join(EDITION_MODES)}")
        if not 0 < self.focus_keep_fraction <= 1:
            raise ConfigError("focus.keep_fraction must be in (0, 1]")
        if self.focus_min_occurrences < 1:
            raise ConfigError("focus.min_occurrences must be >= 1")
        if any(n < 1 for n in self.i_thresholds):
            raise ConfigError("i_thresholds must be >= 1")
        if self.focus_source not in ("TitleAbstract", "Keywords"):
            raise ConfigError("focus.source must be TitleAbstract or Keywords")
        try:
            self.window
        except ValueError as exc:
            raise ConfigError(f"window: {exc}") from None
        unknown = set(self.sections) - set(SECTION_NAMES)
        if unknown:
            raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")

    @property
    def window(self) -> Window:
        end = self.window_end if self.window_end is not None else self.reference_year - 1
        start = self.window_start if self.window_start is not None else end - 9
        return Window(start, end)

    def section_enabled(self, name: str) -> bool:
        return self.sections.get(name, True)

    def primary_source(self, available: list[str]) -> str | None:
        if self.citation_primary_source:
            return self.citation_primary_source
        if self.citation_sources:
            return self.citation_sources[0]
        return available[0] if available else None

    def resolve(self, path: str | None) -> Path | None:
        if path is None:
            return None
        p = Path(path)
        return p if p.is_absolute() else Path(self.base_dir) / p

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for f in fields(self):
            if f.name == "base_dir":
                continue
            value = getattr(self, f.name)
            if isinstance(value, Metric):
                value = value.value
            elif isinstance(value, tuple):
                value = list(value)
            elif isinstance(value, dict):
                value = dict(sorted(value.items()))
            out[_DOTTED[f.name]] = value
        return out


# Config file key -> dataclass attribute.
_KEYS = {
    "reference_year": "reference_year",
    "window.start": "window_start",
    "window.end": "window_end",
    "i_thresholds": "i_thresholds",
    "visibility.metric": "visibility_metric",
    "visibility.edition_year": "visibility_edition_year",
    "visibility.edition_mode": "visibility_edition_mode",
    "citation.sources": "citation_sources",
    "citation.primary_source": "citation_primary_source",
    "selfcite.usual_max": "selfcite_usual_max",
    "dependence.flag_min": "dependence_flag_min",
    "alphabetical.suppress_min": "alphabetical_suppress_min",
    "impact.show_std": "impact_show_std",
    "cooperation.max_rows": "cooperation_max_rows",
    "focus.min_occurrences": "focus_min_occurrences",
    "focus.keep_fraction": "focus_keep_fraction",
    "focus.source": "focus_source",
    "field_half_life": "field_half_life",
    "knowledge.top_n": "knowledge_top_n",
    "peers.top_n": "peers_top_n",
    "report.id": "report_id",
    "tables.metrics": "tables_metrics",
    "tables.baselines": "tables_baselines",
    "tables.aliases": "tables_aliases",
    "tables.stoplist": "tables_stoplist",
    "top_lists": "top_lists",
    "coverage.exports": "coverage_exports",
    "sections": "sections",
}
_DOTTED = {attr: key for key, attr in _KEYS.items()}
_MAPPING_KEYS = {"top_lists", "coverage.exports", "sections"}


def _flatten(data: dict[str, Any], prefix: str = "") -> dict[str, Any]:
    flat: dict[str, Any] = {}
    for key, value in data.items():
        full = f"{prefix}{key}"
        if isinstance(value, dict) and full not in _MAPPING_KEYS:
            flat.update(_flatten(value, f"{full}."))
        elif full.startswith("sections."):
            flat.setdefault("sections", {})[full.split(".", 1)[1]] = value
        else:
            flat[full] = value
    return flat


def _on_off(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    if str(value).lower() in ("on", "true", "yes", "1"):
        return True
    if str(value).lower() in ("off", "false", "no", "0"):
        return False
    raise ConfigError(f"section toggle must be on/off, got {value!r}")


def config_from_dict(data: dict[str, Any], base_dir: str | Path = ".") -> Config:
    """Build a :class:`Config` from nested or dotted keys; unknown keys are rejected."""
    flat = _flatten(data or {})
    if "i_preset" in flat:
        preset = flat.pop("i_preset")
        if preset not in I_THRESHOLD_PRESETS:
            raise ConfigError(f"unknown i_preset {preset!r}")
        flat.setdefault("i_thresholds", list(I_THRESHOLD_PRESETS[preset]))
    unknown = sorted(set(flat) - set(_KEYS))
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    kwargs: dict[str, Any] = {"base_dir": str(base_dir)}
    try:
        for key, value in flat.items():
            attr = _KEYS[key]
            if attr == "visibility_metric":
                value = Metric(value)
            elif attr in ("i_thresholds", "citation_sources"):
                value = tuple(int(v) if attr == "i_thresholds" else str(v) for v in value)
            elif attr == "sections":
                value = {str(k): _on_off(v) for k, v in value.items()}
            elif attr in ("top_lists", "coverage_exports"):
                value = {str(k): str(v) for k, v in value.items()}
            kwargs[attr] = value
        return Config(**kwargs)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


def load_config(path: str | Path | None) -> Config:
    if path is None:
        return Config()
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        data = json.loads(text) if path.suffix == ".json" else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if data is not None and not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return config_from_dict(data or {}, base_dir=path.parent)


def with_overrides(config: Config, **changes: Any) -> Config:
    return replace(config, **changes)
