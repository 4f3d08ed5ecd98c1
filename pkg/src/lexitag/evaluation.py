"""Token-level scoring against gold tags, error rankings, token inspection.

Metrics are token-level on purpose: a token counts as a true positive for
label X when both tags carry X (B/I prefixes ignored). Degenerate ratios use
the 0/0 := 0 convention throughout. Span-exact scoring is a non-goal.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .annotator import annotate, candidates_covering, spans_to_tags
from .corpus import LabeledCorpus, ManualOverride, Sentence, merged_tags
from .errors import AlignmentError, MissingLayerError, OverrideConflictError
from .lexicon import CompiledMatcher, Provenance
from .tuner import AnnotationConfig, Normalizer

__all__ = [
    "LabelMetrics",
    "EvalReport",
    "Candidate",
    "TokenInspection",
    "token_prf",
    "top_errors",
    "evaluate_tags",
    "evaluate_corpus",
    "inspect_token",
    "override_label",
]


@dataclass(frozen=True)
class LabelMetrics:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def _metrics(tp: int, fp: int, fn: int) -> LabelMetrics:
    precision = _ratio(tp, tp + fp)
    recall = _ratio(tp, tp + fn)
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return LabelMetrics(tp, fp, fn, precision, recall, f1)


def _label_of(tag: str) -> Optional[str]:
    if tag == "O":
        return None
    if len(tag) > 2 and tag[0] in "BI" and tag[1] == "-":
        return tag[2:]
    return tag  # tolerate bare labels from foreign files


def _check_aligned(pred: Sequence[Sequence[str]], gold: Sequence[Sequence[str]]) -> None:
    if len(pred) != len(gold):
        raise AlignmentError(
            f"corpora differ in sentence count: {len(pred)} vs {len(gold)}"
        )
    for i, (p, g) in enumerate(zip(pred, gold)):
        if len(p) != len(g):
            raise AlignmentError(
                f"sentence {i}: predicted has {len(p)} tokens, gold has {len(g)}"
            )


def _count(pred, gold) -> dict[str, list[int]]:
    counts: dict[str, list[int]] = {}  # label -> [tp, fp, fn]
    for p_tags, g_tags in zip(pred, gold):
        for p_tag, g_tag in zip(p_tags, g_tags):
            p_label, g_label = _label_of(p_tag), _label_of(g_tag)
            if p_label == g_label:
                if p_label is not None:
                    counts.setdefault(p_label, [0, 0, 0])[0] += 1
                continue
            if p_label is not None:
                counts.setdefault(p_label, [0, 0, 0])[1] += 1
            if g_label is not None:
                counts.setdefault(g_label, [0, 0, 0])[2] += 1
    return counts


def token_prf(
    pred: Sequence[Sequence[str]],
    gold: Sequence[Sequence[str]],
    label: str,
) -> tuple[float, float, float]:
    """Token-level precision, recall and F1 for one label."""
    _check_aligned(pred, gold)
    tp, fp, fn = _count(pred, gold).get(label, [0, 0, 0])
    m = _metrics(tp, fp, fn)
    return m.precision, m.recall, m.f1


def top_errors(
    tokens: Sequence[Sequence[str]],
    pred: Sequence[Sequence[str]],
    gold: Sequence[Sequence[str]],
    k: int,
) -> tuple[list[tuple[str, int]], list[tuple[str, int]]]:
    """Most frequent false-positive and false-negative tokens, top ``k`` each.

    A token instance is a false positive when predicted non-O and the gold
    label differs, a false negative when gold non-O and the prediction
    differs; a label confusion therefore shows up in both rankings.
    """
    _check_aligned(pred, gold)
    fp_counts: Counter[str] = Counter()
    fn_counts: Counter[str] = Counter()
    for toks, p_tags, g_tags in zip(tokens, pred, gold):
        for tok, p_tag, g_tag in zip(toks, p_tags, g_tags):
            p_label, g_label = _label_of(p_tag), _label_of(g_tag)
            if p_label == g_label:
                continue
            if p_label is not None:
                fp_counts[tok] += 1
            if g_label is not None:
                fn_counts[tok] += 1

    def ranked(counts: Counter[str]) -> list[tuple[str, int]]:
        return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[: max(k, 0)]

    return ranked(fp_counts), ranked(fn_counts)


@dataclass
class EvalReport:
    per_label: dict[str, LabelMetrics]
    micro: LabelMetrics
    top_false_positives: list[tuple[str, int]]
    top_false_negatives: list[tuple[str, int]]

    def summary(self) -> dict:
        return {
            "labels": {
                label: {"precision": m.precision, "recall": m.recall, "f1": m.f1}
                for label, m in sorted(self.per_label.items())
            },
            "micro": {
                "precision": self.micro.precision,
                "recall": self.micro.recall,
                "f1": self.micro.f1,
            },
        }

    def to_dict(self) -> dict:
        def as_dict(m: LabelMetrics) -> dict:
            return {
                "tp": m.tp,
                "fp": m.fp,
                "fn": m.fn,
                "precision": m.precision,
                "recall": m.recall,
                "f1": m.f1,
            }

        return {
            "per_label": {label: as_dict(m) for label, m in sorted(self.per_label.items())},
            "micro": as_dict(self.micro),
            "top_false_positives": [list(t) for t in self.top_false_positives],
            "top_false_negatives": [list(t) for t in self.top_false_negatives],
        }

    def render_text(self) -> str:
        lines = [f"{'label':<12} {'P':>6} {'R':>6} {'F1':>6} {'tp':>6} {'fp':>6} {'fn':>6}"]
        for label, m in sorted(self.per_label.items()):
            lines.append(
                f"{label:<12} {100 * m.precision:>6.1f} {100 * m.recall:>6.1f} "
                f"{100 * m.f1:>6.1f} {m.tp:>6} {m.fp:>6} {m.fn:>6}"
            )
        m = self.micro
        lines.append(
            f"{'micro':<12} {100 * m.precision:>6.1f} {100 * m.recall:>6.1f} "
            f"{100 * m.f1:>6.1f} {m.tp:>6} {m.fp:>6} {m.fn:>6}"
        )
        if self.top_false_positives:
            lines.append("top false positives: " + ", ".join(
                f"{tok} ({n})" for tok, n in self.top_false_positives
            ))
        if self.top_false_negatives:
            lines.append("top false negatives: " + ", ".join(
                f"{tok} ({n})" for tok, n in self.top_false_negatives
            ))
        return "\n".join(lines)


def evaluate_tags(
    tokens: Sequence[Sequence[str]],
    pred: Sequence[Sequence[str]],
    gold: Sequence[Sequence[str]],
    top_k: int = 10,
) -> EvalReport:
    _check_aligned(pred, gold)
    counts = _count(pred, gold)
    per_label = {label: _metrics(*c) for label, c in counts.items()}
    micro = _metrics(
        sum(c[0] for c in counts.values()),
        sum(c[1] for c in counts.values()),
        sum(c[2] for c in counts.values()),
    )
    fp_rank, fn_rank = top_errors(tokens, pred, gold, top_k)
    return EvalReport(per_label, micro, fp_rank, fn_rank)


def _prediction_layer(sentence: Sentence) -> list[str]:
    return merged_tags(sentence) if sentence.overrides else list(sentence.predicted or [])


def evaluate_corpus(corpus: LabeledCorpus, top_k: int = 10) -> EvalReport:
    """Score the corpus's predictions (with overrides applied) against gold."""
    tokens, pred, gold = [], [], []
    for i, sentence in enumerate(corpus.sentences):
        if sentence.gold is None:
            raise MissingLayerError(f"sentence {i} has no gold tags")
        if sentence.predicted is None:
            raise MissingLayerError(f"sentence {i} has no predicted tags")
        tokens.append(sentence.tokens)
        pred.append(_prediction_layer(sentence))
        gold.append(sentence.gold)
    return evaluate_tags(tokens, pred, gold, top_k)


@dataclass(frozen=True)
class Candidate:
    label: str
    provenance: Provenance
    start: int
    length: int
    fuzzy_cost: int
    won: bool


@dataclass
class TokenInspection:
    token: str
    gold: Optional[str]
    predicted: str
    candidates: list[Candidate] = field(default_factory=list)


def inspect_token(
    matcher: CompiledMatcher,
    tokens: Sequence[str],
    index: int,
    config: AnnotationConfig,
    gold: Optional[str] = None,
) -> TokenInspection:
    """All entries whose match covers the token, with the actual winner marked.

    Candidates are recomputed without greedy suppression, so losing
    alternatives ("United" inside the full country name) stay visible.
    """
    if not 0 <= index < len(tokens):
        raise IndexError(f"token index {index} out of range")
    normalizer = Normalizer(config)
    norm = normalizer.normalize_tokens(tokens)
    spans = annotate(matcher, tokens, config, normalizer=normalizer)
    tags = spans_to_tags(spans, len(tokens))
    winner = next((s for s in spans if s.start <= index < s.end), None)
    candidates = []
    for start, length, cost, entry in candidates_covering(matcher, norm, index, config):
        won = (
            winner is not None
            and winner.start == start
            and winner.end == start + length
            and winner.entry == entry
        )
        candidates.append(
            Candidate(
                label=entry.label,
                provenance=entry.provenance,
                start=start,
                length=length,
                fuzzy_cost=cost,
                won=won,
            )
        )
    return TokenInspection(
        token=tokens[index],
        gold=gold,
        predicted=tags[index],
        candidates=candidates,
    )


def override_label(
    corpus: LabeledCorpus,
    sentence_index: int,
    start: int,
    end: int,
    label: str,
) -> LabeledCorpus:
    """Record a manual correction; label "O" erases whatever was predicted.

    Overrides live beside the automatic predictions and survive
    re-annotation. Overlapping a previously recorded override is rejected.
    """
    if not 0 <= sentence_index < len(corpus.sentences):
        raise IndexError(f"sentence index {sentence_index} out of range")
    sentence = corpus.sentences[sentence_index]
    n = len(sentence.tokens)
    if not 0 <= start < end <= n:
        raise ValueError(f"span ({start}, {end}) out of range for {n} tokens")
    if not label:
        raise ValueError("label must be non-empty (use 'O' to clear)")
    for existing in sentence.overrides:
        if start < existing.end and existing.start < end:
            raise OverrideConflictError(
                f"span ({start}, {end}) overlaps existing override "
                f"({existing.start}, {existing.end})"
            )
    sentence.overrides.append(ManualOverride(start, end, label))
    return corpus
