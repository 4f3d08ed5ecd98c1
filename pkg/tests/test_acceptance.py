"""Acceptance suite: one test per criterion, at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v`` — each criterion reports one
ACCEPTANCE PASS/FAIL line on stderr (see conftest).
"""

import json
import random
import resource
import subprocess
import sys
import textwrap
import time
import unicodedata
from fractions import Fraction

from lexitag.annotator import annotate, annotate_corpus
from lexitag.corpus import LabeledCorpus, Sentence, parse_conll, write_conll
from lexitag.evaluation import evaluate_corpus, evaluate_tags, token_prf
from lexitag.kb import extract_lexicon, save_lexicon
from lexitag.lexicon import build_matcher
from lexitag.tuner import AnnotationConfig, strip_diacritics, update_config

import oracle
from conftest import entity_line, make_lexicon
from test_annotator import direct_matcher, random_instance, span_tuples


def config_for(*names, **extra):
    return AnnotationConfig.from_dict({"priority_order": list(names), **extra})


# -- criterion: matcher oracle equivalence -------------------------------------


def test_matcher_oracle_equivalence():
    """>= 1000 randomized instances, exact span-set equality, < 10 s."""
    rng = random.Random(6021023)
    started = time.monotonic()
    checked = 0
    for _ in range(1000):
        named_keys, tokens, config = random_instance(rng)
        matcher, entries = direct_matcher(named_keys, list(config.priority_order), config)
        got = span_tuples(annotate(matcher, tokens, config))
        fuzzy = config.fuzzy
        expected = oracle.greedy_annotate(
            entries, tokens, fuzzy.enabled, fuzzy.max_cost, fuzzy.min_token_len
        )
        assert got == expected, (named_keys, tokens, config.fuzzy)
        checked += 1
    elapsed = time.monotonic() - started
    assert checked == 1000
    assert elapsed < 10.0, f"oracle equivalence took {elapsed:.1f}s"


# -- criterion: longest-match fixture --------------------------------------------


def test_longest_match_fixture():
    config = config_for("COUNTRY", "AIRLINE")
    matcher = build_matcher(
        [
            ("COUNTRY", make_lexicon("COUNTRY", ["United Arab Emirates"])),
            ("AIRLINE", make_lexicon("AIRLINE", ["United"])),
        ],
        config,
    )
    spans = annotate(matcher, ["United", "Arab", "Emirates"], config)
    assert span_tuples(spans) == [(0, 3, "COUNTRY", 0)]


# -- criterion: priority fixture ---------------------------------------------------


def test_priority_fixture():
    lexicons = [
        ("PER", make_lexicon("PER", ["Washington"])),
        ("LOC", make_lexicon("LOC", ["Washington"])),
    ]
    for order in (["LOC", "PER"], ["PER", "LOC"]):
        config = config_for(*order)
        matcher = build_matcher(lexicons, config)
        spans = annotate(matcher, ["Washington"], config)
        assert [s.label for s in spans] == [order[0]]


# -- criterion: metric correctness ----------------------------------------------------


def tags(*specs):
    return [list(s) for s in specs]


# (pred, gold, label, P, R, F1) — every expected value computed by hand as a
# fraction from the token counts written in the comment.
METRIC_FIXTURES = [
    # tp=2 fp=1 fn=1
    (tags(["B-X", "B-X", "B-X", "O"]), tags(["B-X", "B-X", "O", "B-X"]), "X",
     Fraction(2, 3), Fraction(2, 3), Fraction(2, 3)),
    # all-O vs all-O: every ratio is 0/0
    (tags(["O", "O"]), tags(["O", "O"]), "X", 0, 0, 0),
    # tp=1 fp=0 fn=1
    (tags(["B-LOC", "O"]), tags(["B-LOC", "B-LOC"]), "LOC",
     1, Fraction(1, 2), Fraction(2, 3)),
    # tp=0 fp=0 fn=2: P = 0/0
    (tags(["O", "O"]), tags(["B-X", "I-X"]), "X", 0, 0, 0),
    # tp=0 fp=2 fn=0: R = 0/0
    (tags(["B-X", "I-X"]), tags(["O", "O"]), "X", 0, 0, 0),
    # tp=0 fp=1 fn=1: F1 = 0/0
    (tags(["B-X", "O"]), tags(["O", "B-X"]), "X", 0, 0, 0),
    # tp=1 fp=0 fn=0
    (tags(["B-X"]), tags(["B-X"]), "X", 1, 1, 1),
    # tp=3 fp=1 fn=0
    (tags(["B-X", "I-X", "I-X", "B-X"]), tags(["B-X", "I-X", "I-X", "O"]), "X",
     Fraction(3, 4), 1, Fraction(6, 7)),
    # tp=1 fp=3 fn=0
    (tags(["B-X", "B-X", "B-X", "B-X"]), tags(["B-X", "O", "O", "O"]), "X",
     Fraction(1, 4), 1, Fraction(2, 5)),
    # tp=1 fp=0 fn=3
    (tags(["B-X", "O", "O", "O"]), tags(["B-X", "B-X", "B-X", "B-X"]), "X",
     1, Fraction(1, 4), Fraction(2, 5)),
    # tp=5 fp=5 fn=5
    (tags(["B-X"] * 10 + ["O"] * 5), tags(["B-X"] * 5 + ["O"] * 5 + ["B-X"] * 5), "X",
     Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)),
    # tp=2 fp=0 fn=2
    (tags(["B-X", "I-X", "O", "O"]), tags(["B-X", "I-X", "B-X", "I-X"]), "X",
     1, Fraction(1, 2), Fraction(2, 3)),
    # label absent on both sides: all 0/0
    (tags(["B-Y"]), tags(["B-Y"]), "X", 0, 0, 0),
    # B/I prefixes ignored: tp=1
    (tags(["I-X"]), tags(["B-X"]), "X", 1, 1, 1),
    # confusion counted against predicted label: fp=1 for X
    (tags(["B-X"]), tags(["B-Y"]), "X", 0, 0, 0),
    # and as a miss for the gold label: fn=1 for Y
    (tags(["B-X"]), tags(["B-Y"]), "Y", 0, 0, 0),
    # same counts split across sentences: tp=2 fp=1 fn=1
    (tags(["B-X", "B-X"], ["B-X", "O"]), tags(["B-X", "B-X"], ["O", "B-X"]), "X",
     Fraction(2, 3), Fraction(2, 3), Fraction(2, 3)),
    # tp=1 fp=1 fn=0
    (tags(["B-X", "B-X"]), tags(["B-X", "O"]), "X", Fraction(1, 2), 1, Fraction(2, 3)),
    # tp=1 fp=0 fn=1
    (tags(["B-X", "O"]), tags(["B-X", "B-X"]), "X", 1, Fraction(1, 2), Fraction(2, 3)),
    # tp=1 fp=9 fn=0
    (tags(["B-X"] * 10), tags(["B-X"] + ["O"] * 9), "X",
     Fraction(1, 10), 1, Fraction(2, 11)),
]


def test_metric_correctness():
    assert len(METRIC_FIXTURES) == 20
    for i, (pred, gold, label, p_exp, r_exp, f_exp) in enumerate(METRIC_FIXTURES):
        p, r, f1 = token_prf(pred, gold, label)
        assert abs(p - float(p_exp)) <= 1e-12, f"fixture {i} precision"
        assert abs(r - float(r_exp)) <= 1e-12, f"fixture {i} recall"
        assert abs(f1 - float(f_exp)) <= 1e-12, f"fixture {i} f1"

    rng = random.Random(77)
    labels = ["PER", "LOC", "ORG"]

    def random_tag():
        return "O" if rng.random() < 0.5 else f"{rng.choice('BI')}-{rng.choice(labels)}"

    for _ in range(1000):
        n = rng.randint(0, 30)
        pred = [[random_tag() for _ in range(n)]]
        gold = [[random_tag() for _ in range(n)]]
        report = evaluate_tags([["w"] * n], pred, gold, top_k=0)
        for label in labels:
            gold_count = sum(1 for t in gold[0] if t != "O" and t[2:] == label)
            pred_count = sum(1 for t in pred[0] if t != "O" and t[2:] == label)
            m = report.per_label.get(label)
            tp = m.tp if m else 0
            fp = m.fp if m else 0
            fn = m.fn if m else 0
            assert tp + fn == gold_count
            assert tp + fp == pred_count


# -- criterion: tuning directionality ---------------------------------------------------


def tuning_fixture_corpus():
    return LabeledCorpus(
        sentences=[
            Sentence(tokens=["Ta", "külastas", "Eestis"], gold=["O", "O", "B-LOC"]),
            Sentence(tokens=["Tallinnas", "on", "ilus"], gold=["B-LOC", "O", "O"]),
            Sentence(tokens=["Tallinn", "on", "pealinn"], gold=["B-LOC", "O", "O"]),
            Sentence(tokens=["Of", "course", "not"], gold=["O", "O", "O"]),
            Sentence(tokens=["Alan", "Turing", "arrived"], gold=["B-PER", "I-PER", "O"]),
        ]
    )


def test_tuning_directionality(tmp_path):
    lemmas = tmp_path / "lemmas.tsv"
    lemmas.write_text("Eestis\tEesti\nTallinnas\tTallinn\n", encoding="utf-8")
    lexicons = [
        ("LOC", make_lexicon("LOC", ["Eesti", "Tallinn", "Of"])),
        ("PER", make_lexicon("PER", ["Alan Turing"])),
    ]
    corpus = tuning_fixture_corpus()

    def run(config):
        matcher = build_matcher(lexicons, config)
        return evaluate_corpus(annotate_corpus(matcher, corpus, config))

    base = config_for("LOC", "PER")
    before = run(base)
    with_lemmas = update_config(base, {"lemmatize": True, "lemma_table": str(lemmas)})
    after = run(with_lemmas)

    # recall strictly up for the morphology-hit label, never down anywhere
    assert after.per_label["LOC"].recall > before.per_label["LOC"].recall
    for label in before.per_label:
        assert after.per_label[label].recall >= before.per_label[label].recall

    # the planted false positive: filtering it strictly raises LOC precision
    filtered = update_config(with_lemmas, {"false_positives": ["Of"]})
    final = run(filtered)
    assert final.per_label["LOC"].precision > after.per_label["LOC"].precision
    assert final.per_label["LOC"].fp == 0


# -- criterion: streaming memory -----------------------------------------------------------


def generate_big_dump(path, lines=1_000_000):
    rng = random.Random(1)
    pad = "x" * 700
    with open(path, "w", encoding="utf-8") as handle:
        for i in range(lines):
            cls = f"Q{rng.randint(1, 500)}"
            handle.write(
                '{"type":"item","id":"Q%d","labels":{"en":{"language":"en","value":"Item %d"}},'
                '"aliases":{"en":[{"language":"en","value":"alias %d"}]},'
                '"claims":{"P31":[{"mainsnak":{"snaktype":"value","property":"P31",'
                '"datavalue":{"value":{"entity-type":"item","id":"%s"},"type":"wikibase-entityid"}}}]},'
                '"sitelinks":{"pad":"%s"}}\n' % (i, i, i, cls, pad)
            )


CHILD_SCRIPT = textwrap.dedent(
    """
    import resource, sys
    limit = 256 * 1024 * 1024
    resource.setrlimit(resource.RLIMIT_AS, (limit, limit))
    from lexitag.kb import DumpFile, build_class_index, extract_lexicon
    path = sys.argv[1]
    index = build_class_index(DumpFile(path), "en")
    lexicon = extract_lexicon(path, {"Q5"}, "en", "X")
    peak = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024
    print(len(index), len(lexicon.entries), peak)
    """
)


def test_streaming_memory(tmp_path):
    """1M-line (~1 GB) dump indexes and extracts inside 256 MB, under 5 min."""
    dump = tmp_path / "big_dump.json"
    generate_big_dump(dump)
    try:
        size = dump.stat().st_size
        assert size > 900_000_000, f"dump only {size} bytes"
        started = time.monotonic()
        proc = subprocess.run(
            [sys.executable, "-c", CHILD_SCRIPT, str(dump)],
            capture_output=True,
            text=True,
            timeout=300,
        )
        elapsed = time.monotonic() - started
        assert proc.returncode == 0, f"child failed under the ceiling:\n{proc.stderr[-2000:]}"
        classes, entries, peak = (int(v) for v in proc.stdout.split())
        assert classes == 500
        assert entries > 0
        assert peak <= 256 * 1024 * 1024
        assert elapsed < 300, f"pipeline took {elapsed:.0f}s"
    finally:
        dump.unlink(missing_ok=True)


# -- criterion: CoNLL round-trip ----------------------------------------------------------------


def test_conll_round_trip():
    fixtures = [
        "Alan B-PER\nTuring I-PER\n\nlives O\nin O\nLondon B-LOC\n",
        # 4-column CoNLL03-shaped
        "U.N. NNP I-NP I-ORG\nofficial NN I-NP O\nEkeus NNP I-NP I-PER\n",
        # IOB1 with adjacent same-type entities
        "a I-PER\nb I-PER\nc B-PER\nd I-PER\n",
        "",
    ]
    for text in fixtures:
        once = parse_conll(text)
        twice = parse_conll(write_conll(once, "gold")) if once.sentences else once
        assert [s.tokens for s in twice.sentences] == [s.tokens for s in once.sentences]
        assert [s.gold for s in twice.sentences] == [s.gold for s in once.sentences]
        assert [s.payload for s in twice.sentences] == [s.payload for s in once.sentences]
    # canonical BIO single-space files survive byte-for-byte
    stable = "Alan B-PER\nTuring I-PER\n\nlives O\n"
    assert write_conll(parse_conll(stable), "gold") == stable


# -- criterion: diacritics -------------------------------------------------------------------------


def test_diacritics():
    assert strip_diacritics("Yorùbá") == "Yoruba"
    assert strip_diacritics("Tõnis") == "Tonis"
    rng = random.Random(99)
    pools = [
        (0x0020, 0x024F),  # latin incl. extended
        (0x0300, 0x036F),  # combining marks
        (0x0370, 0x03FF),  # greek
        (0x0400, 0x04FF),  # cyrillic
        (0x1E00, 0x1EFF),  # latin extended additional
        (0x3040, 0x30FF),  # kana
        (0xAC00, 0xD7A3),  # hangul syllables
    ]
    checked = 0
    for _ in range(10_000):
        length = rng.randint(0, 12)
        chars = []
        for _ in range(length):
            lo, hi = rng.choice(pools)
            chars.append(chr(rng.randint(lo, hi)))
        s = "".join(chars)
        once = strip_diacritics(s)
        assert strip_diacritics(once) == once
        assert not any(unicodedata.category(c) == "Mn" for c in unicodedata.normalize("NFD", once))
        checked += 1
    assert checked == 10_000


# -- criterion: determinism --------------------------------------------------------------------------


def full_pipeline(tmp_path, tag):
    dump = tmp_path / f"dump_{tag}.json"
    dump.write_text(
        "\n".join(
            [
                entity_line("Q5", labels={"en": "human"}),
                entity_line("Q1", labels={"en": "Alan Turing"},
                            aliases={"en": ["A. M. Turing"]}, instance_of=["Q5"]),
                entity_line("Q2", labels={"en": "Ada Lovelace"}, instance_of=["Q5"]),
            ]
        ),
        encoding="utf-8",
    )
    lexicon = extract_lexicon(dump, {"Q5"}, "en", "PER")
    lexicon_path = tmp_path / f"lexicon_{tag}.json"
    save_lexicon(lexicon, lexicon_path)

    config = config_for("PER", case_insensitive=True)
    matcher = build_matcher([("PER", lexicon)], config)

    corpus = parse_conll(
        "alan B-PER\nturing I-PER\nmet O\nada B-PER\nlovelace I-PER\n\nnobody O\n"
    )
    tagged = annotate_corpus(matcher, corpus, config)
    export = write_conll(tagged, "predicted")
    report = evaluate_corpus(tagged, top_k=5)
    report_blob = json.dumps(report.to_dict(), sort_keys=True)
    return lexicon_path.read_bytes(), matcher.fingerprint, export.encode(), report_blob


def test_determinism(tmp_path):
    first = full_pipeline(tmp_path, "a")
    second = full_pipeline(tmp_path, "b")
    assert first[0] == second[0], "serialized lexicon differs"
    assert first[1] == second[1], "matcher fingerprint differs"
    assert first[2] == second[2], "annotated export differs"
    assert first[3] == second[3], "evaluation report differs"
