"""Greedy leftmost-longest annotation over a compiled matcher.

At each uncovered position the longest match wins; equal-length matches are
ranked exact-before-fuzzy, then by lexicon priority, then lexicon name, and
finally by key tokens so the result is a total order. Fuzzy matching spends a
per-entity edit budget, one bounded Levenshtein comparison per token, and only
on tokens long enough to make one edit unambiguous.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Optional, Sequence

from .errors import StaleMatcherError
from .lexicon import CompiledEntry, CompiledMatcher
from .tuner import AnnotationConfig, Normalizer

if TYPE_CHECKING:
    from .corpus import LabeledCorpus

__all__ = [
    "Span",
    "annotate",
    "annotate_corpus",
    "spans_to_tags",
    "tags_to_spans",
    "plain_spans_from_tags",
    "tags_from_plain_spans",
    "candidates_covering",
    "bounded_levenshtein",
]


@dataclass(frozen=True)
class Span:
    start: int  # token index, inclusive
    end: int  # token index, exclusive
    label: str
    entry: Optional[CompiledEntry] = None
    fuzzy_cost: int = 0


def bounded_levenshtein(a: str, b: str, limit: int) -> Optional[int]:
    """Edit distance if it is <= limit, else None. O(len*limit) band DP."""
    if abs(len(a) - len(b)) > limit:
        return None
    if a == b:
        return 0
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i] + [0] * len(b)
        best = cur[0]
        for j, cb in enumerate(b, start=1):
            cur[j] = min(
                prev[j] + 1,
                cur[j - 1] + 1,
                prev[j - 1] + (ca != cb),
            )
            best = min(best, cur[j])
        if best > limit:
            return None
        prev = cur
    return prev[-1] if prev[-1] <= limit else None


def _rank(length: int, cost: int, entry: CompiledEntry) -> tuple:
    return (-length, cost, entry.priority, entry.provenance.lexicon, entry.key)


def _match_at(
    matcher: CompiledMatcher,
    tokens: Sequence[str],
    pos: int,
    config: AnnotationConfig,
) -> Optional[tuple[int, int, CompiledEntry]]:
    """Best (length, cost, entry) for a match starting at ``pos``, or None."""
    fuzzy = config.fuzzy
    budget = fuzzy.max_cost if fuzzy.enabled else 0
    min_len = fuzzy.min_token_len
    states: dict = {matcher.root: 0}
    best_rank: Optional[tuple] = None
    best: Optional[tuple[int, int, CompiledEntry]] = None
    n = len(tokens)
    depth = 0
    while states and pos + depth < n and depth < matcher.max_key_len:
        token = tokens[pos + depth]
        next_states: dict = {}
        for node, cost in states.items():
            for edge, child in node.children.items():
                if edge == token:
                    new_cost = cost
                elif (
                    budget
                    and cost < budget
                    and len(token) >= min_len
                    and len(edge) >= min_len
                ):
                    dist = bounded_levenshtein(edge, token, budget - cost)
                    if dist is None or dist == 0:
                        continue
                    new_cost = cost + dist
                else:
                    continue
                prev = next_states.get(child)
                if prev is None or new_cost < prev:
                    next_states[child] = new_cost
        depth += 1
        for node, cost in next_states.items():
            if not node.entries:
                continue
            entry = node.entries[0]  # pre-sorted by (priority, lexicon)
            rank = _rank(depth, cost, entry)
            if best_rank is None or rank < best_rank:
                best_rank = rank
                best = (depth, cost, entry)
        states = next_states
    return best


def _check_fresh(matcher: CompiledMatcher, config: AnnotationConfig) -> None:
    if matcher.config_digest != config.matching_digest():
        raise StaleMatcherError(
            "matcher was compiled for a different configuration; recompile"
        )


def _annotate_normalized(
    matcher: CompiledMatcher, norm_tokens: Sequence[str], config: AnnotationConfig
) -> list[Span]:
    spans: list[Span] = []
    pos = 0
    n = len(norm_tokens)
    while pos < n:
        found = _match_at(matcher, norm_tokens, pos, config)
        if found is None:
            pos += 1
            continue
        length, cost, entry = found
        spans.append(
            Span(start=pos, end=pos + length, label=entry.label, entry=entry, fuzzy_cost=cost)
        )
        pos += length
    return spans


def annotate(
    matcher: CompiledMatcher,
    tokens: Sequence[str],
    config: AnnotationConfig,
    normalizer: Optional[Normalizer] = None,
    check_fingerprint: bool = True,
) -> list[Span]:
    """Annotate one token sequence; spans are non-overlapping, start-sorted."""
    if check_fingerprint:
        _check_fresh(matcher, config)
    if normalizer is None:
        normalizer = Normalizer(config)
    return _annotate_normalized(matcher, normalizer.normalize_tokens(tokens), config)


def candidates_covering(
    matcher: CompiledMatcher,
    norm_tokens: Sequence[str],
    index: int,
    config: AnnotationConfig,
) -> list[tuple[int, int, int, CompiledEntry]]:
    """Every (start, length, cost, entry) whose match covers ``index``.

    Greedy suppression is deliberately ignored; this is the raw candidate set
    used for token inspection.
    """
    fuzzy = config.fuzzy
    budget = fuzzy.max_cost if fuzzy.enabled else 0
    min_len = fuzzy.min_token_len
    n = len(norm_tokens)
    out: dict[tuple[int, int, int], int] = {}
    entries_by_id: dict[int, CompiledEntry] = {}
    first_start = max(0, index - matcher.max_key_len + 1)
    for start in range(first_start, index + 1):
        states: dict = {matcher.root: 0}
        depth = 0
        while states and start + depth < n and depth < matcher.max_key_len:
            token = norm_tokens[start + depth]
            next_states: dict = {}
            for node, cost in states.items():
                for edge, child in node.children.items():
                    if edge == token:
                        new_cost = cost
                    elif (
                        budget
                        and cost < budget
                        and len(token) >= min_len
                        and len(edge) >= min_len
                    ):
                        dist = bounded_levenshtein(edge, token, budget - cost)
                        if dist is None or dist == 0:
                            continue
                        new_cost = cost + dist
                    else:
                        continue
                    prev = next_states.get(child)
                    if prev is None or new_cost < prev:
                        next_states[child] = new_cost
            depth += 1
            if start + depth > index:
                for node, cost in next_states.items():
                    for entry in node.entries:
                        key = (start, depth, id(entry))
                        if key not in out or cost < out[key]:
                            out[key] = cost
                            entries_by_id[id(entry)] = entry
            states = next_states
    results = [
        (start, length, cost, entries_by_id[entry_id])
        for (start, length, entry_id), cost in out.items()
    ]
    results.sort(key=lambda r: (r[0], -r[1], r[2], r[3].priority, r[3].provenance.lexicon))
    return results


def annotate_corpus(
    matcher: CompiledMatcher,
    corpus: "LabeledCorpus",
    config: AnnotationConfig,
    threads: int = 1,
) -> "LabeledCorpus":
    """Fill the predicted layer sentence by sentence; order is preserved.

    Gold tags and manual overrides pass through untouched, so re-annotation
    with a new configuration keeps user corrections.
    """
    _check_fresh(matcher, config)
    normalizer = Normalizer(config)

    def tag_sentence(sentence):
        spans = _annotate_normalized(
            matcher, normalizer.normalize_tokens(sentence.tokens), config
        )
        return replace(sentence, predicted=spans_to_tags(spans, len(sentence.tokens)))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            tagged = list(pool.map(tag_sentence, corpus.sentences))
    else:
        tagged = [tag_sentence(s) for s in corpus.sentences]
    out = corpus.copy()
    out.sentences = tagged
    return out


def tags_from_plain_spans(spans: Sequence[tuple[int, int, str]], n: int) -> list[str]:
    tags = ["O"] * n
    last_end = -1
    for start, end, label in sorted(spans):
        if not (0 <= start < end <= n):
            raise ValueError(f"span ({start}, {end}) out of range for {n} tokens")
        if start < last_end:
            raise ValueError(f"overlapping span at {start}")
        last_end = end
        tags[start] = f"B-{label}"
        for i in range(start + 1, end):
            tags[i] = f"I-{label}"
    return tags


def plain_spans_from_tags(tags: Sequence[str]) -> list[tuple[int, int, str]]:
    spans: list[tuple[int, int, str]] = []
    start = None
    label = None
    for i, tag in enumerate(tags):
        if tag.startswith("B-"):
            if start is not None:
                spans.append((start, i, label))
            start, label = i, tag[2:]
        elif tag.startswith("I-") and label == tag[2:] and start is not None:
            continue
        elif tag == "O":
            if start is not None:
                spans.append((start, i, label))
            start, label = None, None
        else:
            # I-X without matching open span: treat as entity start
            if start is not None:
                spans.append((start, i, label))
            start, label = i, tag[2:]
    if start is not None:
        spans.append((start, len(tags), label))
    return spans


def spans_to_tags(spans: Sequence[Span], n: int) -> list[str]:
    """BIO-encode spans; rejects overlapping or out-of-range spans."""
    return tags_from_plain_spans([(s.start, s.end, s.label) for s in spans], n)


def tags_to_spans(tags: Sequence[str]) -> list[Span]:
    """Inverse of :func:`spans_to_tags`, minus provenance."""
    return [Span(start=s, end=e, label=lab) for s, e, lab in plain_spans_from_tags(tags)]
