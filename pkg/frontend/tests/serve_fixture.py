"""Start the backend on a throwaway fixture project for frontend e2e tests.

Usage: python3 serve_fixture.py <port>
"""

import sys
import tempfile
from pathlib import Path

import uvicorn

from lexitag import AnnotationConfig, Project
from lexitag.kb import LexiconEntry, RawLexicon, save_lexicon
from lexitag.server import create_app

CONLL = "\n".join(
    [
        "United B-COUNTRY",
        "Arab I-COUNTRY",
        "Emirates I-COUNTRY",
        "",
        "Washington B-LOC",
        "visited O",
        "Of O",
        "course O",
        "",
        "Of O",
        "to O",
        "Tallinn B-LOC",
        "",
    ]
)


def lexicon(label, surfaces):
    return RawLexicon(
        label=label,
        language="en",
        entries=[
            LexiconEntry(surface, f"Q{i}:{label}", False)
            for i, surface in enumerate(surfaces, start=1)
        ],
    )


def build_fixture(root: Path) -> Project:
    project = Project.init_dir(root, language="en")
    save_lexicon(lexicon("COUNTRY", ["United Arab Emirates"]), root / "lexicons" / "COUNTRY.json")
    save_lexicon(lexicon("AIRLINE", ["United"]), root / "lexicons" / "AIRLINE.json")
    save_lexicon(lexicon("LOC", ["Washington", "Of", "Tallinn"]), root / "lexicons" / "LOC.json")
    project.save_config(
        AnnotationConfig.from_dict({"priority_order": ["COUNTRY", "AIRLINE", "LOC"]})
    )
    (root / "corpora" / "demo.conll").write_text(CONLL, encoding="utf-8")
    return project


if __name__ == "__main__":
    port = int(sys.argv[1])
    root = Path(tempfile.mkdtemp(prefix="lexitag-ui-fixture-"))
    project = build_fixture(root)
    app = create_app(project, static_dir=None)
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")
