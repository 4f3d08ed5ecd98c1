"""Project directory layout and persistence.

A project root contains::

    project.json    workspace metadata (language, dump path)
    config.json     the annotation configuration, nothing else
    lexicons/       one RawLexicon JSON per lexicon, file stem = lexicon name
    corpora/        CoNLL (.conll) or raw text (.txt) corpora
    overrides/      manual corrections per corpus
    history.json    recorded tuning steps
    class_index/    cached dump class indexes keyed by checksum
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Union

from . import kb
from .corpus import LabeledCorpus, ManualOverride, parse_conll, tokenize, write_conll
from .errors import ProjectError
from .lexicon import CompiledMatcher, build_matcher
from .tuner import (
    AnnotationConfig,
    TuningStep,
    history_from_json,
    history_to_json,
    update_config,
)

__all__ = ["Project"]


class Project:
    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)

    # -- layout ---------------------------------------------------------

    @property
    def config_path(self) -> Path:
        return self.root / "config.json"

    @property
    def project_path(self) -> Path:
        return self.root / "project.json"

    @property
    def lexicon_dir(self) -> Path:
        return self.root / "lexicons"

    @property
    def corpus_dir(self) -> Path:
        return self.root / "corpora"

    @property
    def override_dir(self) -> Path:
        return self.root / "overrides"

    @property
    def history_path(self) -> Path:
        return self.root / "history.json"

    @property
    def class_index_dir(self) -> Path:
        return self.root / "class_index"

    # -- creation / loading ---------------------------------------------

    @classmethod
    def init_dir(
        cls,
        root: Union[str, Path],
        language: str = "en",
        dump: Optional[str] = None,
    ) -> "Project":
        project = cls(root)
        project.root.mkdir(parents=True, exist_ok=True)
        project.lexicon_dir.mkdir(exist_ok=True)
        project.corpus_dir.mkdir(exist_ok=True)
        project.override_dir.mkdir(exist_ok=True)
        project.class_index_dir.mkdir(exist_ok=True)
        if not project.config_path.exists():
            project.save_config(AnnotationConfig())
        if not project.project_path.exists():
            project.project_path.write_text(
                json.dumps({"language": language, "dump": dump}, indent=2) + "\n",
                encoding="utf-8",
            )
        if not project.history_path.exists():
            project.history_path.write_text("[]\n", encoding="utf-8")
        return project

    @classmethod
    def load(cls, root: Union[str, Path]) -> "Project":
        project = cls(root)
        if not project.root.is_dir():
            raise ProjectError(f"{project.root} is not a directory")
        if not project.config_path.exists():
            raise ProjectError(f"{project.config_path} missing; run 'lexitag init'")
        config = project.config()  # validates
        names = set(project.lexicon_names())
        missing = [n for n in config.priority_order if n not in names]
        if missing:
            raise ProjectError(
                f"priority_order references missing lexicons: {missing}"
            )
        return project

    # -- metadata ---------------------------------------------------------

    def meta(self) -> dict:
        if self.project_path.exists():
            return json.loads(self.project_path.read_text(encoding="utf-8"))
        return {"language": "en", "dump": None}

    def save_meta(self, meta: dict) -> None:
        self.project_path.write_text(
            json.dumps(meta, indent=2) + "\n", encoding="utf-8"
        )

    @property
    def language(self) -> str:
        return self.meta().get("language", "en")

    @property
    def dump_path(self) -> Optional[Path]:
        dump = self.meta().get("dump")
        if not dump:
            return None
        path = Path(dump)
        return path if path.is_absolute() else self.root / path

    # -- config -----------------------------------------------------------

    def config(self) -> AnnotationConfig:
        data = json.loads(self.config_path.read_text(encoding="utf-8"))
        return AnnotationConfig.from_dict(data)

    def save_config(self, config: AnnotationConfig) -> None:
        self.config_path.write_text(
            json.dumps(config.to_dict(), indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )

    def resolve_lemma_table(self, config: AnnotationConfig) -> AnnotationConfig:
        """Make a relative lemma-table path absolute against the project root."""
        if config.lemma_table and not Path(config.lemma_table).is_absolute():
            resolved = self.root / config.lemma_table
            if resolved.exists():
                return update_config(config, {"lemma_table": str(resolved)})
        return config

    # -- lexicons -----------------------------------------------------------

    def lexicon_names(self) -> list[str]:
        if not self.lexicon_dir.is_dir():
            return []
        return sorted(p.stem for p in self.lexicon_dir.glob("*.json"))

    def load_lexicon(self, name: str) -> kb.RawLexicon:
        path = self.lexicon_dir / f"{name}.json"
        if not path.exists():
            raise ProjectError(f"lexicon {name!r} not found in {self.lexicon_dir}")
        return kb.load_lexicon(path)

    def save_lexicon(self, name: str, lexicon: kb.RawLexicon) -> None:
        self.lexicon_dir.mkdir(parents=True, exist_ok=True)
        kb.save_lexicon(lexicon, self.lexicon_dir / f"{name}.json")

    def loaded_lexicons(self, config: AnnotationConfig) -> list[tuple[str, kb.RawLexicon]]:
        return [(name, self.load_lexicon(name)) for name in config.priority_order]

    def build_matcher(self, config: Optional[AnnotationConfig] = None) -> CompiledMatcher:
        if config is None:
            config = self.config()
        config = self.resolve_lemma_table(config)
        return build_matcher(self.loaded_lexicons(config), config)

    # -- corpora ------------------------------------------------------------

    def corpus_ids(self) -> list[str]:
        if not self.corpus_dir.is_dir():
            return []
        return sorted(
            p.stem for p in self.corpus_dir.iterdir() if p.suffix in (".conll", ".txt")
        )

    def load_corpus(self, corpus_id: str) -> LabeledCorpus:
        conll = self.corpus_dir / f"{corpus_id}.conll"
        text = self.corpus_dir / f"{corpus_id}.txt"
        if conll.exists():
            corpus = parse_conll(conll.read_text(encoding="utf-8"))
        elif text.exists():
            from .corpus import Sentence

            sentences = tokenize(text.read_text(encoding="utf-8"), self.language)
            corpus = LabeledCorpus(sentences=[Sentence(tokens=t) for t in sentences])
        else:
            raise ProjectError(f"corpus {corpus_id!r} not found in {self.corpus_dir}")
        corpus.language = self.language
        corpus.source_name = corpus_id
        self._apply_saved_overrides(corpus_id, corpus)
        return corpus

    def save_corpus(self, corpus_id: str, corpus: LabeledCorpus, layer: str = "gold") -> None:
        self.corpus_dir.mkdir(parents=True, exist_ok=True)
        (self.corpus_dir / f"{corpus_id}.conll").write_text(
            write_conll(corpus, layer), encoding="utf-8"
        )

    def _override_path(self, corpus_id: str) -> Path:
        return self.override_dir / f"{corpus_id}.json"

    def _apply_saved_overrides(self, corpus_id: str, corpus: LabeledCorpus) -> None:
        path = self._override_path(corpus_id)
        if not path.exists():
            return
        for item in json.loads(path.read_text(encoding="utf-8")):
            sent = item["sentence"]
            if 0 <= sent < len(corpus.sentences):
                corpus.sentences[sent].overrides.append(
                    ManualOverride(item["start"], item["end"], item["label"])
                )

    def save_overrides(self, corpus_id: str, corpus: LabeledCorpus) -> None:
        self.override_dir.mkdir(parents=True, exist_ok=True)
        payload = [
            {"sentence": i, "start": o.start, "end": o.end, "label": o.label}
            for i, sentence in enumerate(corpus.sentences)
            for o in sentence.overrides
        ]
        self._override_path(corpus_id).write_text(
            json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )

    # -- history --------------------------------------------------------------

    def history(self) -> list[TuningStep]:
        if not self.history_path.exists():
            return []
        return history_from_json(self.history_path.read_text(encoding="utf-8"))

    def save_history(self, history: list[TuningStep]) -> None:
        self.history_path.write_text(history_to_json(history) + "\n", encoding="utf-8")

    # -- class index -------------------------------------------------------------

    def class_index(self, language: Optional[str] = None, force: bool = False):
        dump = self.dump_path
        if dump is None:
            raise ProjectError("project has no dump configured (project.json 'dump')")
        return kb.index_dump(
            dump, language or self.language, cache_dir=self.class_index_dir, force=force
        )

    def cached_class_index(self, language: Optional[str] = None):
        """Return the cached index if one exists for the dump, else None."""
        dump = self.dump_path
        if dump is None or not dump.exists():
            return None
        checksum = kb.dump_checksum(dump)
        path = self.class_index_dir / f"{checksum}.{(language or self.language).lower()}.json"
        if path.exists():
            return kb.load_class_index(path)
        return None
