"""Corpus parsing and serialization: CoNLL column files, raw text, stopwords.

The default tokenizer is a small frozen rule set (see :func:`tokenize`); for
anything smarter, preprocess externally or use the pipe hook
(:func:`run_external_tokenizer`).
"""

from __future__ import annotations

import subprocess
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Optional, Sequence

from .errors import ConllError, MissingLayerError, UnknownLanguageError

__all__ = [
    "ManualOverride",
    "Sentence",
    "LabeledCorpus",
    "parse_conll",
    "write_conll",
    "tokenize",
    "load_stopwords",
    "available_stopword_languages",
    "run_external_tokenizer",
]


@dataclass(frozen=True)
class ManualOverride:
    """A user-applied tag correction; label "O" erases the span."""

    start: int
    end: int
    label: str


@dataclass
class Sentence:
    tokens: list[str]
    gold: Optional[list[str]] = None
    predicted: Optional[list[str]] = None
    payload: Optional[list[list[str]]] = None  # middle CoNLL columns, opaque
    overrides: list[ManualOverride] = field(default_factory=list)


@dataclass
class LabeledCorpus:
    sentences: list[Sentence] = field(default_factory=list)
    language: str = ""
    source_name: str = ""
    repaired_tags: int = 0  # IOB1 tags rewritten to BIO during parsing

    def __len__(self) -> int:
        return len(self.sentences)

    def token_count(self) -> int:
        return sum(len(s.tokens) for s in self.sentences)

    def copy(self) -> "LabeledCorpus":
        return LabeledCorpus(
            sentences=[
                replace(
                    s,
                    tokens=list(s.tokens),
                    gold=list(s.gold) if s.gold is not None else None,
                    predicted=list(s.predicted) if s.predicted is not None else None,
                    payload=[list(p) for p in s.payload] if s.payload is not None else None,
                    overrides=list(s.overrides),
                )
                for s in self.sentences
            ],
            language=self.language,
            source_name=self.source_name,
            repaired_tags=self.repaired_tags,
        )


def _validate_and_repair(tags: list[str], line_nos: list[int]) -> tuple[list[str], int]:
    # Accepts BIO and IOB1; entity-initial I-X becomes B-X. Anything that is
    # not O / B-X / I-X is unrepairable.
    repaired = 0
    out: list[str] = []
    prev_label: Optional[str] = None
    for tag, line_no in zip(tags, line_nos):
        if tag == "O":
            out.append(tag)
            prev_label = None
            continue
        if len(tag) < 3 or tag[0] not in "BI" or tag[1] != "-":
            raise ConllError(f"unrecognized tag {tag!r}", line_no)
        kind, label = tag[0], tag[2:]
        if kind == "I" and prev_label != label:
            out.append(f"B-{label}")
            repaired += 1
        else:
            out.append(tag)
        prev_label = label
    return out, repaired


def parse_conll(text: str) -> LabeledCorpus:
    """Parse CoNLL column text: token first, tag last, blank line per sentence.

    Middle columns survive as opaque payload so multi-column files round-trip.
    ``-DOCSTART-`` lines are skipped. IOB1 input is repaired to BIO and the
    repair count recorded on the corpus.
    """
    if text.startswith("﻿"):
        text = text[1:]
    corpus = LabeledCorpus()
    tokens: list[str] = []
    tags: list[Optional[str]] = []
    payloads: list[list[str]] = []
    line_nos: list[int] = []
    any_payload = False

    def flush() -> None:
        nonlocal tokens, tags, payloads, line_nos, any_payload
        if not tokens:
            return
        tagged = [t for t in tags if t is not None]
        if tagged and len(tagged) != len(tokens):
            missing = tags.index(None)
            raise ConllError("missing tag column", line_nos[missing])
        gold: Optional[list[str]] = None
        if tagged:
            gold, repaired = _validate_and_repair(list(tagged), line_nos)
            corpus.repaired_tags += repaired
        corpus.sentences.append(
            Sentence(
                tokens=tokens,
                gold=gold,
                payload=payloads if any_payload else None,
            )
        )
        tokens, tags, payloads, line_nos = [], [], [], []
        any_payload = False

    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            flush()
            continue
        cols = line.split()
        if cols[0] == "-DOCSTART-":
            continue
        tokens.append(cols[0])
        line_nos.append(line_no)
        if len(cols) >= 2:
            tags.append(cols[-1])
            payloads.append(cols[1:-1])
            if len(cols) > 2:
                any_payload = True
        else:
            tags.append(None)
            payloads.append([])
    flush()
    return corpus


def merged_tags(sentence: Sentence) -> list[str]:
    """Predicted tags with manual overrides applied.

    An override replaces every automatic span it overlaps; label "O" just
    removes them. Output is re-encoded so it stays valid BIO.
    """
    from .annotator import plain_spans_from_tags, tags_from_plain_spans

    if sentence.predicted is None:
        raise MissingLayerError("sentence has no predicted tags")
    spans = plain_spans_from_tags(sentence.predicted)
    kept = [
        (s, e, lab)
        for (s, e, lab) in spans
        if not any(s < o.end and o.start < e for o in sentence.overrides)
    ]
    for o in sentence.overrides:
        if o.label != "O":
            kept.append((o.start, o.end, o.label))
    kept.sort()
    return tags_from_plain_spans(kept, len(sentence.tokens))


def _layer_tags(sentence: Sentence, which: str) -> list[str]:
    if which == "gold":
        if sentence.gold is None:
            raise MissingLayerError("corpus has no gold tags")
        return sentence.gold
    if which == "predicted":
        if sentence.predicted is None:
            raise MissingLayerError("corpus has no predicted tags")
        return sentence.predicted
    if which == "merged":
        return merged_tags(sentence)
    raise ValueError(f"unknown layer {which!r}")


def write_conll(corpus: LabeledCorpus, which: str = "gold") -> str:
    """Serialize one tag layer back to CoNLL columns.

    ``which`` is one of gold, predicted or merged (predicted plus manual
    overrides). Payload columns recorded at parse time are written back
    between token and tag.
    """
    blocks: list[str] = []
    for sentence in corpus.sentences:
        tags = _layer_tags(sentence, which)
        lines = []
        for i, token in enumerate(sentence.tokens):
            payload = sentence.payload[i] if sentence.payload else []
            lines.append(" ".join([token, *payload, tags[i]]))
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n" if blocks else ""


# Punctuation peeled from token edges; hyphens/apostrophes inside words stay.
_PUNCT = set(".,;:!?()\"'«»„“”")
_OPENING_QUOTES = set("«„“\"'‘")
_TERMINATORS = set(".!?")


def _split_chunk(chunk: str) -> list[str]:
    tokens: list[str] = []
    i = 0
    while i < len(chunk) and chunk[i] in _PUNCT:
        tokens.append(chunk[i])
        i += 1
    core = chunk[i:]
    trailing: list[str] = []
    while core:
        last = core[-1]
        if last not in _PUNCT:
            break
        if last == "." and "." in core[:-1]:
            # abbreviation heuristic: final period stays on "U.A.E."
            break
        trailing.append(last)
        core = core[:-1]
    if core:
        tokens.append(core)
    tokens.extend(reversed(trailing))
    return tokens


def _sentence_chunks(raw: str) -> list[str]:
    chunks: list[str] = []
    start = 0
    i = 0
    n = len(raw)
    while i < n:
        if raw[i] in _TERMINATORS:
            j = i + 1
            while j < n and raw[j] in _TERMINATORS:
                j += 1
            k = j
            while k < n and raw[k].isspace():
                k += 1
            if k > j and k < n and (raw[k].isupper() or raw[k] in _OPENING_QUOTES):
                chunks.append(raw[start:j])
                start = k
                i = k
                continue
            i = j
        else:
            i += 1
    if start < n:
        chunks.append(raw[start:])
    return [c for c in chunks if c.strip()]


def tokenize(raw: str, language: str = "") -> list[list[str]]:
    """Rule-based default tokenizer; returns sentences of tokens.

    Whitespace-splits, peels edge punctuation into separate tokens, keeps
    internal hyphens/apostrophes, and starts a new sentence after .!? followed
    by whitespace and an uppercase letter or opening quote. ``language`` is
    accepted for interface symmetry; the rules are language-independent.
    """
    del language
    sentences = []
    for chunk in _sentence_chunks(raw):
        tokens: list[str] = []
        for piece in chunk.split():
            tokens.extend(_split_chunk(piece))
        if tokens:
            sentences.append(tokens)
    return sentences


def run_external_tokenizer(command: Sequence[str], raw_sentences: Sequence[str]) -> list[list[str]]:
    """Pipe hook: one raw sentence per input line, tab-separated tokens out."""
    proc = subprocess.run(
        list(command),
        input="\n".join(raw_sentences) + ("\n" if raw_sentences else ""),
        capture_output=True,
        text=True,
        check=True,
    )
    lines = proc.stdout.splitlines()
    if len(lines) != len(raw_sentences):
        raise ConllError(
            f"external tokenizer returned {len(lines)} lines for {len(raw_sentences)} sentences",
            line_no=min(len(lines), len(raw_sentences)) + 1,
        )
    return [[t for t in line.split("\t") if t] for line in lines]


def _stopword_dir():
    return resources.files("lexitag").joinpath("data/stopwords")


def available_stopword_languages() -> list[str]:
    return sorted(
        entry.name[: -len(".txt")]
        for entry in _stopword_dir().iterdir()
        if entry.name.endswith(".txt")
    )


def load_stopwords(language: str) -> set[str]:
    """Bundled stopword list for a language code; lowercase, deduplicated."""
    path = _stopword_dir().joinpath(f"{language}.txt")
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise UnknownLanguageError(
            f"no stopword list for {language!r}; available: "
            + ", ".join(available_stopword_languages())
        ) from None
    words = set()
    for line in text.splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.add(word.lower())
    return words
