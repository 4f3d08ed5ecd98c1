import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


def pytest_runtest_logreport(report):
    # one visible pass/fail line per acceptance criterion
    if "test_acceptance" in report.nodeid and report.when == "call":
        name = report.nodeid.split("::")[-1]
        verdict = "PASS" if report.passed else "FAIL"
        print(f"\nACCEPTANCE {verdict}: {name}", file=sys.stderr)

from lexitag import AnnotationConfig, Project, RawLexicon
from lexitag.kb import LexiconEntry


def entity_line(item_id, labels=None, aliases=None, instance_of=(), trailing=""):
    """One dump line following the public entity-JSON schema subset."""
    obj = {
        "type": "item",
        "id": item_id,
        "labels": {
            lang: {"language": lang, "value": value}
            for lang, value in (labels or {}).items()
        },
        "aliases": {
            lang: [{"language": lang, "value": v} for v in values]
            for lang, values in (aliases or {}).items()
        },
        "claims": {
            "P31": [
                {
                    "mainsnak": {
                        "snaktype": "value",
                        "property": "P31",
                        "datavalue": {
                            "value": {"entity-type": "item", "id": cid},
                            "type": "wikibase-entityid",
                        },
                    },
                    "type": "statement",
                }
                for cid in instance_of
            ]
        },
        "sitelinks": {},
    }
    return json.dumps(obj, ensure_ascii=False) + trailing


def make_lexicon(label, surfaces, language="en", aliases=None):
    entries = []
    for i, surface in enumerate(surfaces, start=1):
        entries.append(LexiconEntry(surface, f"Q{i}:{label}", False))
    for surface, alias_list in (aliases or {}).items():
        for alias in alias_list:
            entries.append(LexiconEntry(alias, f"alias:{surface}", True))
    return RawLexicon(label=label, language=language, entries=entries)


@pytest.fixture
def uae_setup():
    """Country vs airline fixture: 'United Arab Emirates' and 'United'."""
    country = make_lexicon("COUNTRY", ["United Arab Emirates"])
    airline = make_lexicon("AIRLINE", ["United"])
    config = AnnotationConfig.from_dict({"priority_order": ["COUNTRY", "AIRLINE"]})
    return country, airline, config


@pytest.fixture
def fixture_project(tmp_path):
    """A small but complete project used by CLI and server tests."""
    root = tmp_path / "proj"
    project = Project.init_dir(root, language="en")

    from lexitag.kb import save_lexicon

    save_lexicon(make_lexicon("COUNTRY", ["United Arab Emirates"]), root / "lexicons" / "COUNTRY.json")
    save_lexicon(make_lexicon("AIRLINE", ["United"]), root / "lexicons" / "AIRLINE.json")
    save_lexicon(make_lexicon("LOC", ["Washington", "Of", "Tallinn"]), root / "lexicons" / "LOC.json")
    save_lexicon(make_lexicon("PER", ["Washington", "Alan Turing"]), root / "lexicons" / "PER.json")

    project.save_config(
        AnnotationConfig.from_dict(
            {"priority_order": ["COUNTRY", "AIRLINE", "LOC", "PER"]}
        )
    )

    conll = "\n".join(
        [
            "United B-COUNTRY",
            "Arab I-COUNTRY",
            "Emirates I-COUNTRY",
            "flights O",
            "",
            "Washington B-LOC",
            "spoke O",
            "Of O",
            "Alan B-PER",
            "Turing I-PER",
            "",
            "Of O",
            "course O",
            "Tallinn B-LOC",
            "",
        ]
    )
    (root / "corpora" / "demo.conll").write_text(conll, encoding="utf-8")
    return project
