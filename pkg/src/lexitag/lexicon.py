"""Lexicon transforms and compilation into one token-trie matcher.

The transform pipeline has a fixed, documented order:

1. merge config-added aliases
2. split multi-word names (when enabled for the lexicon)
3. tokenize each surface with the corpus tokenizer
4. strip diacritics            (when enabled)
5. lowercase                   (when case-insensitive)
6. lemmatize each token        (when enabled)
7. drop entries whose whole surface is a stopword
8. drop entries shorter than min_length characters (space-joined)
9. drop entries on the false-positive list

Duplicates collapse to their first occurrence. Stopword and false-positive
comparisons run both sides through the same normalization and are always
case-insensitive (the filters exist to kill noise, not to split hairs over
casing).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .corpus import load_stopwords, tokenize
from .errors import ConfigError
from .kb import RawLexicon
from .tuner import AnnotationConfig, LemmaTable, Normalizer

__all__ = [
    "Provenance",
    "CompiledEntry",
    "CompiledMatcher",
    "apply_transforms",
    "compile_entries",
    "build_matcher",
]

MIN_SPLIT_PART_LEN = 2  # name splitting never emits single characters


@dataclass(frozen=True)
class Provenance:
    lexicon: str
    source_item: str
    surface: str  # original surface before any transform


@dataclass(frozen=True)
class CompiledEntry:
    key: tuple[str, ...]  # normalized token sequence
    label: str
    priority: int  # position of the lexicon in priority_order; lower wins
    provenance: Provenance


def _normalized_filter_set(
    terms: Iterable[str], normalizer: Normalizer
) -> frozenset[str]:
    out = set()
    for term in terms:
        tokens = [t for sent in tokenize(term) for t in sent]
        norm = normalizer.normalize_tokens(tokens)
        if norm:
            out.add(" ".join(norm).casefold())
    return frozenset(out)


def apply_transforms(
    raw: RawLexicon,
    config: AnnotationConfig,
    name: Optional[str] = None,
    normalizer: Optional[Normalizer] = None,
    lemma_table: Optional[LemmaTable] = None,
) -> list[CompiledEntry]:
    """Run the documented pipeline over one raw lexicon.

    ``name`` identifies the lexicon within ``config.priority_order`` and
    defaults to the lexicon's label.
    """
    name = name if name is not None else raw.label
    if name not in config.priority_order:
        raise ConfigError(
            "priority_order", f"lexicon {name!r} missing from priority order"
        )
    priority = config.priority_order.index(name)
    if normalizer is None:
        normalizer = Normalizer(config, lemma_table)

    # (working surface, source item, provenance surface): split parts keep
    # their parent's surface in provenance
    surfaces: list[tuple[str, str, str]] = [
        (e.surface, e.source_item, e.surface) for e in raw.entries
    ]
    for surface, source_item, _ in list(surfaces):
        for alias in config.extra_aliases.get(surface, ()):
            alias = alias.strip()
            if alias:
                surfaces.append((alias, source_item, alias))

    if name in config.split_names:
        for surface, source_item, origin in list(surfaces):
            parts = surface.split()
            if len(parts) < 2:
                continue
            for part in parts:
                if len(part) >= MIN_SPLIT_PART_LEN:
                    surfaces.append((part, source_item, origin))

    stopwords = (
        load_stopwords(config.stopword_language) if config.stopword_language else frozenset()
    )
    false_positives = _normalized_filter_set(config.false_positives, normalizer)

    entries: list[CompiledEntry] = []
    seen_keys: set[tuple[str, ...]] = set()
    for surface, source_item, origin in surfaces:
        tokens = [t for sent in tokenize(surface) for t in sent]
        key = tuple(normalizer.normalize_tokens(tokens))
        if not key:
            continue
        joined = " ".join(key)
        if stopwords and joined.casefold() in stopwords:
            continue
        if len(joined) < config.min_length:
            continue
        if joined.casefold() in false_positives:
            continue
        if key in seen_keys:
            continue
        seen_keys.add(key)
        entries.append(
            CompiledEntry(
                key=key,
                label=raw.label,
                priority=priority,
                provenance=Provenance(name, source_item, origin),
            )
        )
    return entries


class _Node:
    __slots__ = ("children", "entries")

    def __init__(self) -> None:
        self.children: dict[str, _Node] = {}
        self.entries: list[CompiledEntry] = []


@dataclass
class CompiledMatcher:
    """Immutable token trie over all compiled lexicons.

    ``fingerprint`` covers the configuration and the lexicon contents;
    ``config_digest`` alone lets annotation detect a stale matcher cheaply.
    """

    root: _Node
    fingerprint: str
    config_digest: str
    max_key_len: int
    entry_count: int
    lexicon_names: tuple[str, ...] = ()

    def lookup(self, key: Sequence[str]) -> list[CompiledEntry]:
        node = self.root
        for token in key:
            child = node.children.get(token)
            if child is None:
                return []
            node = child
        return list(node.entries)

    def accepting_nodes(self) -> int:
        count = 0
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.entries:
                count += 1
            stack.extend(node.children.values())
        return count

    def iter_entries(self) -> Iterable[CompiledEntry]:
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield from node.entries
            stack.extend(node.children.values())


def _entries_digest(named: Sequence[tuple[str, Sequence[CompiledEntry]]]) -> str:
    canon = []
    for name, entries in sorted(named, key=lambda pair: pair[0]):
        canon.append(
            (
                name,
                sorted(
                    (
                        list(e.key),
                        e.label,
                        e.priority,
                        e.provenance.source_item,
                        e.provenance.surface,
                    )
                    for e in entries
                ),
            )
        )
    blob = json.dumps(canon, ensure_ascii=False, sort_keys=True)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def compile_entries(
    entry_lists: Sequence[tuple[str, Sequence[CompiledEntry]]],
    priority_order: Sequence[str],
    config: Optional[AnnotationConfig] = None,
) -> CompiledMatcher:
    """Build the trie; deterministic for equal inputs.

    Every lexicon name must appear exactly once in ``priority_order``.
    """
    names = [name for name, _ in entry_lists]
    if len(set(names)) != len(names):
        raise ConfigError("priority_order", "duplicate lexicon names")
    if len(set(priority_order)) != len(priority_order):
        raise ConfigError("priority_order", "duplicate names in priority order")
    missing = [n for n in names if n not in priority_order]
    if missing:
        raise ConfigError(
            "priority_order", f"lexicons missing from priority order: {missing}"
        )
    root = _Node()
    max_key_len = 0
    entry_count = 0
    for _, entries in entry_lists:
        for entry in entries:
            node = root
            for token in entry.key:
                node = node.children.setdefault(token, _Node())
            node.entries.append(entry)
            max_key_len = max(max_key_len, len(entry.key))
            entry_count += 1
    stack = [root]
    while stack:
        node = stack.pop()
        node.entries.sort(key=lambda e: (e.priority, e.provenance.lexicon))
        stack.extend(node.children.values())
    config_digest = config.matching_digest() if config is not None else ""
    fingerprint = hashlib.sha256(
        (config_digest + ":" + _entries_digest(entry_lists)).encode("utf-8")
    ).hexdigest()
    return CompiledMatcher(
        root=root,
        fingerprint=fingerprint,
        config_digest=config_digest,
        max_key_len=max_key_len,
        entry_count=entry_count,
        lexicon_names=tuple(names),
    )


def build_matcher(
    lexicons: Sequence[tuple[str, RawLexicon]],
    config: AnnotationConfig,
) -> CompiledMatcher:
    """Transform every lexicon under ``config`` and compile the matcher."""
    config.validate()
    loaded = [name for name, _ in lexicons]
    not_covered = [n for n in loaded if n not in config.priority_order]
    if not_covered:
        raise ConfigError(
            "priority_order", f"priority order does not cover: {not_covered}"
        )
    lemma_table = (
        LemmaTable.load(config.lemma_table)
        if config.lemmatize and config.lemma_table
        else None
    )
    normalizer = Normalizer(config, lemma_table)
    entry_lists = [
        (name, apply_transforms(raw, config, name=name, normalizer=normalizer))
        for name, raw in lexicons
    ]
    return compile_entries(entry_lists, config.priority_order, config=config)
