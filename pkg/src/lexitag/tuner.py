"""Annotation configuration, normalization helpers and the tuning history.

The configuration is a frozen snapshot: edits go through :func:`update_config`,
which validates the result atomically and returns a new snapshot (the input is
never mutated). The same normalization (diacritics, casing, lemma lookup) is
applied to lexicon surfaces at compile time and to corpus tokens at annotation
time, so both sides always agree.
"""

from __future__ import annotations

import dataclasses
import datetime as _dt
import hashlib
import json
import subprocess
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .errors import ConfigError

__all__ = [
    "AnnotationConfig",
    "FuzzyConfig",
    "LemmaTable",
    "Normalizer",
    "TuningStep",
    "strip_diacritics",
    "lemmatize_token",
    "update_config",
    "record_step",
    "run_external_lemmatizer",
    "history_to_json",
    "history_from_json",
]


def strip_diacritics(s: str) -> str:
    """Remove combining marks: canonical decomposition, drop marks, recompose.

    Idempotent; characters without a canonical decomposition (e.g. "ø") pass
    through unchanged.
    """
    decomposed = unicodedata.normalize("NFD", s)
    stripped = "".join(c for c in decomposed if unicodedata.category(c) != "Mn")
    return unicodedata.normalize("NFC", stripped)


class LemmaTable:
    """Exact-match surface-to-lemma mapping loaded from a two-column TSV file."""

    def __init__(self, mapping: Mapping[str, str]):
        self.mapping = dict(mapping)

    @classmethod
    def load(cls, path: str | Path) -> "LemmaTable":
        mapping: dict[str, str] = {}
        text = Path(path).read_text(encoding="utf-8")
        for line in text.splitlines():
            line = line.strip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                continue
            surface, lemma = parts[0].strip(), parts[1].strip()
            if surface and lemma:
                mapping[surface] = lemma
        return cls(mapping)

    def get(self, token: str, default: str) -> str:
        return self.mapping.get(token, default)

    def content_digest(self) -> str:
        canon = json.dumps(sorted(self.mapping.items()), ensure_ascii=False)
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()

    def __len__(self) -> int:
        return len(self.mapping)


def lemmatize_token(t: str, table: LemmaTable | Mapping[str, str]) -> str:
    """Exact lookup of ``t`` in the lemma table; unknown tokens pass through."""
    if isinstance(table, LemmaTable):
        return table.get(t, t)
    return table.get(t, t)


def run_external_lemmatizer(command: Sequence[str], tokens: Sequence[str]) -> list[str]:
    """Pipe tokens through an external lemmatizer, one token per line.

    The command must echo exactly one lemma line per input line; any other
    shape is a hard error because silent misalignment would corrupt matching.
    """
    proc = subprocess.run(
        list(command),
        input="\n".join(tokens) + ("\n" if tokens else ""),
        capture_output=True,
        text=True,
        check=True,
    )
    lemmas = proc.stdout.splitlines()
    if len(lemmas) != len(tokens):
        raise ConfigError(
            "lemmatizer_command",
            f"expected {len(tokens)} output lines, got {len(lemmas)}",
        )
    return lemmas


@dataclass(frozen=True)
class FuzzyConfig:
    enabled: bool = False
    max_cost: int = 0
    min_token_len: int = 5

    def to_dict(self) -> dict:
        return {
            "enabled": self.enabled,
            "max_cost": self.max_cost,
            "min_token_len": self.min_token_len,
        }


_CONFIG_FIELDS = (
    "case_insensitive",
    "strip_diacritics",
    "lemmatize",
    "lemma_table",
    "stopword_language",
    "false_positives",
    "extra_aliases",
    "split_names",
    "min_length",
    "priority_order",
    "fuzzy",
)


@dataclass(frozen=True)
class AnnotationConfig:
    """Declarative tuning state controlling lexicon transforms and matching."""

    case_insensitive: bool = False
    strip_diacritics: bool = False
    lemmatize: bool = False
    lemma_table: Optional[str] = None  # path to a surface<TAB>lemma file
    stopword_language: Optional[str] = None
    false_positives: frozenset[str] = frozenset()
    extra_aliases: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    split_names: frozenset[str] = frozenset()  # lexicon names with splitting on
    min_length: int = 0  # characters of the normalized, space-joined surface
    priority_order: tuple[str, ...] = ()
    fuzzy: FuzzyConfig = field(default_factory=FuzzyConfig)

    def validate(self) -> None:
        if self.min_length < 0:
            raise ConfigError("min_length", "must be >= 0")
        if self.lemmatize and not self.lemma_table:
            raise ConfigError("lemma_table", "required when lemmatize is enabled")
        if len(set(self.priority_order)) != len(self.priority_order):
            raise ConfigError("priority_order", "lexicon names must be unique")
        if self.fuzzy.max_cost < 0:
            raise ConfigError("fuzzy.max_cost", "must be >= 0")
        if self.fuzzy.min_token_len < 1:
            raise ConfigError("fuzzy.min_token_len", "must be >= 1")
        if self.fuzzy.enabled and self.fuzzy.max_cost == 0:
            raise ConfigError("fuzzy.max_cost", "must be >= 1 when fuzzy is enabled")
        if not self.fuzzy.enabled and self.fuzzy.max_cost != 0:
            raise ConfigError("fuzzy.max_cost", "must be 0 when fuzzy is disabled")

    def to_dict(self) -> dict:
        return {
            "case_insensitive": self.case_insensitive,
            "strip_diacritics": self.strip_diacritics,
            "lemmatize": self.lemmatize,
            "lemma_table": self.lemma_table,
            "stopword_language": self.stopword_language,
            "false_positives": sorted(self.false_positives),
            "extra_aliases": {k: list(v) for k, v in sorted(self.extra_aliases.items())},
            "split_names": sorted(self.split_names),
            "min_length": self.min_length,
            "priority_order": list(self.priority_order),
            "fuzzy": self.fuzzy.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "AnnotationConfig":
        unknown = set(data) - set(_CONFIG_FIELDS)
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown field")
        cfg = _coerce_fields(cls(), data)
        cfg.validate()
        return cfg

    def matching_digest(self) -> str:
        """Hash of every field that can change compilation or matching.

        The lemma table enters by content (not path), and only while
        lemmatization is enabled, so renaming an unused file does not
        invalidate caches.
        """
        payload = self.to_dict()
        payload["lemma_table"] = (
            LemmaTable.load(self.lemma_table).content_digest()
            if self.lemmatize and self.lemma_table
            else None
        )
        canon = json.dumps(payload, sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def _coerce_fields(base: AnnotationConfig, data: Mapping) -> AnnotationConfig:
    kwargs: dict = {}
    for name, value in data.items():
        if name == "false_positives":
            kwargs[name] = frozenset(str(v) for v in value)
        elif name == "split_names":
            kwargs[name] = frozenset(str(v) for v in value)
        elif name == "extra_aliases":
            if not isinstance(value, Mapping):
                raise ConfigError("extra_aliases", "must be a mapping")
            kwargs[name] = {str(k): tuple(str(a) for a in v) for k, v in value.items()}
        elif name == "priority_order":
            kwargs[name] = tuple(str(v) for v in value)
        elif name == "fuzzy":
            if isinstance(value, FuzzyConfig):
                kwargs[name] = value
            elif isinstance(value, Mapping):
                unknown = set(value) - {"enabled", "max_cost", "min_token_len"}
                if unknown:
                    raise ConfigError(f"fuzzy.{sorted(unknown)[0]}", "unknown field")
                merged = base.fuzzy.to_dict()
                merged.update(value)
                kwargs[name] = FuzzyConfig(
                    enabled=bool(merged["enabled"]),
                    max_cost=int(merged["max_cost"]),
                    min_token_len=int(merged["min_token_len"]),
                )
            else:
                raise ConfigError("fuzzy", "must be a mapping")
        elif name in ("case_insensitive", "strip_diacritics", "lemmatize"):
            kwargs[name] = bool(value)
        elif name == "min_length":
            kwargs[name] = int(value)
        elif name in ("lemma_table", "stopword_language"):
            kwargs[name] = None if value is None else str(value)
        else:
            raise ConfigError(name, "unknown field")
    return dataclasses.replace(base, **kwargs)


def update_config(current: AnnotationConfig, edit: Mapping) -> AnnotationConfig:
    """Apply a field-level change set; reject invalid combinations atomically.

    On error the caller's config is untouched (configs are immutable), so the
    previous state remains the active one.
    """
    candidate = _coerce_fields(current, edit)
    candidate.validate()
    return candidate


class Normalizer:
    """Per-token normalization shared by compilation and annotation.

    Pipeline order is fixed: strip diacritics, lowercase, lemma lookup. When
    casing or diacritics transforms are active, lemma-table keys and values
    are passed through the same steps so lookups stay consistent.
    """

    def __init__(self, config: AnnotationConfig, lemma_table: LemmaTable | None = None):
        self.config = config
        if config.lemmatize:
            if lemma_table is None:
                if not config.lemma_table:
                    raise ConfigError("lemma_table", "required when lemmatize is enabled")
                lemma_table = LemmaTable.load(config.lemma_table)
            self._lemmas = {
                self._pre(k): self._pre(v) for k, v in lemma_table.mapping.items()
            }
        else:
            self._lemmas = {}

    def _pre(self, token: str) -> str:
        if self.config.strip_diacritics:
            token = strip_diacritics(token)
        if self.config.case_insensitive:
            token = token.lower()
        return token

    def normalize_token(self, token: str) -> str:
        token = self._pre(token)
        if self.config.lemmatize:
            token = self._lemmas.get(token, token)
        return token

    def normalize_tokens(self, tokens: Iterable[str]) -> list[str]:
        return [self.normalize_token(t) for t in tokens]


@dataclass(frozen=True)
class TuningStep:
    """One recorded point of the tuning trajectory."""

    index: int
    description: str
    config: AnnotationConfig
    metrics: Optional[dict] = None  # {label: {precision, recall, f1}}
    timestamp: str = ""


def record_step(
    history: Sequence[TuningStep],
    description: str,
    config: AnnotationConfig,
    report=None,
) -> list[TuningStep]:
    """Append a tuning step; the input history is not modified."""
    metrics = None
    if report is not None:
        metrics = report.summary() if hasattr(report, "summary") else dict(report)
    index = (max(s.index for s in history) + 1) if history else 0
    step = TuningStep(
        index=index,
        description=description,
        config=config,
        metrics=metrics,
        timestamp=_dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    )
    return list(history) + [step]


def history_to_json(history: Sequence[TuningStep]) -> str:
    return json.dumps(
        [
            {
                "index": s.index,
                "description": s.description,
                "config": s.config.to_dict(),
                "metrics": s.metrics,
                "timestamp": s.timestamp,
            }
            for s in history
        ],
        ensure_ascii=False,
        indent=2,
    )


def history_from_json(text: str) -> list[TuningStep]:
    raw = json.loads(text)
    return [
        TuningStep(
            index=item["index"],
            description=item["description"],
            config=AnnotationConfig.from_dict(item["config"]),
            metrics=item.get("metrics"),
            timestamp=item.get("timestamp", ""),
        )
        for item in raw
    ]
