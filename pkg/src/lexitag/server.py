"""HTTP JSON API exposing the full workbench to the browser UI.

All routes live under /api/v1. Long-running work (dump indexing, lexicon
extraction, corpus annotation) runs as background jobs polled via
``GET /jobs/{id}``; at most one extraction-type and one annotation-type job
runs per project. Mutations funnel through a single lock and replace whole
snapshots, so readers always observe a consistent state. The service binds to
loopback unless explicitly told otherwise (it has no authentication).
"""

from __future__ import annotations

import io
import itertools
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, File, Form, Request, UploadFile
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import kb
from .annotator import annotate_corpus
from .corpus import LabeledCorpus, Sentence, merged_tags, parse_conll, tokenize, write_conll
from .errors import ConfigError, LexitagError, MissingLayerError, OverrideConflictError
from .evaluation import EvalReport, evaluate_corpus, inspect_token, override_label
from .lexicon import CompiledMatcher
from .project import Project
from .tuner import AnnotationConfig, record_step, update_config

DEFAULT_MAX_UPLOAD = 100 * 1024 * 1024


@dataclass
class Job:
    id: str
    kind: str  # "extract" | "annotate"
    state: str = "queued"  # queued -> running -> done | failed
    progress: float = 0.0
    error: Optional[str] = None
    result: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "state": self.state,
            "progress": round(self.progress, 4),
            "error": self.error,
            "result": self.result,
        }

    def bump(self, progress: float) -> None:
        self.progress = max(self.progress, min(progress, 1.0))


class AppState:
    def __init__(self, project: Project):
        self.project = project
        self.lock = threading.RLock()
        self.config: AnnotationConfig = project.resolve_lemma_table(project.config())
        self.corpora: dict[str, LabeledCorpus] = {}
        self.matchers: dict[str, CompiledMatcher] = {}
        self.annotated: dict[tuple[str, str], LabeledCorpus] = {}
        self.last_eval: Optional[EvalReport] = None
        self.jobs: dict[str, Job] = {}
        self.class_index = project.cached_class_index()

    # -- helpers --------------------------------------------------------

    def corpus(self, corpus_id: str) -> LabeledCorpus:
        with self.lock:
            if corpus_id not in self.corpora:
                self.corpora[corpus_id] = self.project.load_corpus(corpus_id)
            return self.corpora[corpus_id]

    def matcher(self) -> CompiledMatcher:
        digest = self.config.matching_digest()
        with self.lock:
            if digest not in self.matchers:
                self.matchers[digest] = self.project.build_matcher(self.config)
            return self.matchers[digest]

    def annotated_corpus(self, corpus_id: str, progress=None) -> LabeledCorpus:
        config = self.config
        digest = config.matching_digest()
        key = (corpus_id, digest)
        with self.lock:
            cached = self.annotated.get(key)
        if cached is not None:
            if progress:
                progress(1.0)
            return cached
        matcher = self.matcher()
        source = self.corpus(corpus_id)
        if progress is None:
            tagged = annotate_corpus(matcher, source, config)
        else:
            from .annotator import annotate, spans_to_tags
            from .tuner import Normalizer

            if matcher.config_digest != digest:
                raise LexitagError("matcher is stale; recompile")
            tagged = source.copy()
            normalizer = Normalizer(config)
            total = max(len(tagged.sentences), 1)
            for i, sentence in enumerate(tagged.sentences):
                spans = annotate(
                    matcher,
                    sentence.tokens,
                    config,
                    normalizer=normalizer,
                    check_fingerprint=False,
                )
                sentence.predicted = spans_to_tags(spans, len(sentence.tokens))
                progress(0.99 * (i + 1) / total)
        with self.lock:
            self.annotated[key] = tagged
        return tagged

    def running(self, kind: str) -> Optional[Job]:
        with self.lock:
            for job in self.jobs.values():
                if job.kind == kind and job.state in ("queued", "running"):
                    return job
        return None

    def start_job(self, kind: str, target) -> Job:
        job = Job(id=uuid.uuid4().hex[:12], kind=kind)
        with self.lock:
            self.jobs[job.id] = job

        def run():
            job.state = "running"
            try:
                job.result = target(job)
                job.bump(1.0)
                job.state = "done"
            except Exception as exc:  # failed jobs report, never crash the app
                job.error = str(exc)
                job.state = "failed"

        threading.Thread(target=run, daemon=True).start()
        return job

    def invalidate_after_config_change(self, old: AnnotationConfig) -> None:
        if old.matching_digest() != self.config.matching_digest():
            self.last_eval = None


def _sentence_view(sentence: Sentence, index: int) -> dict:
    tags = None
    spans: list[dict] = []
    if sentence.predicted is not None:
        tags = merged_tags(sentence) if sentence.overrides else sentence.predicted
        from .annotator import plain_spans_from_tags

        spans = [
            {"start": s, "end": e, "label": lab}
            for s, e, lab in plain_spans_from_tags(tags)
        ]
    return {
        "index": index,
        "tokens": sentence.tokens,
        "gold": sentence.gold,
        "tags": tags,
        "spans": spans,
        "overrides": [
            {"start": o.start, "end": o.end, "label": o.label}
            for o in sentence.overrides
        ],
    }


class ExtractBody(BaseModel):
    class_ids: list[str]
    lang: Optional[str] = None
    label: str
    name: Optional[str] = None


class AnnotateBody(BaseModel):
    corpus_id: str


class OverrideBody(BaseModel):
    corpus_id: str
    sentence: int
    start: int
    end: int
    label: str


class HistoryBody(BaseModel):
    description: str


def create_app(
    project: Project,
    static_dir: Optional[Path] = None,
    max_upload: int = DEFAULT_MAX_UPLOAD,
) -> FastAPI:
    state = AppState(project)
    app = FastAPI(title="lexitag", version="0.1.0")
    app.state.workbench = state
    api = "/api/v1"

    @app.exception_handler(ConfigError)
    async def config_error(_req: Request, exc: ConfigError):
        return JSONResponse(
            status_code=422,
            content={"errors": [{"field": exc.field, "message": exc.message}]},
        )

    @app.exception_handler(OverrideConflictError)
    async def override_conflict(_req: Request, exc: OverrideConflictError):
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.exception_handler(MissingLayerError)
    async def missing_layer(_req: Request, exc: MissingLayerError):
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.exception_handler(LexitagError)
    async def lexitag_error(_req: Request, exc: LexitagError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    # -- project overview ------------------------------------------------

    @app.get(api + "/project")
    def get_project():
        corpora = []
        for corpus_id in project.corpus_ids():
            corpus = state.corpus(corpus_id)
            digest = state.config.matching_digest()
            corpora.append(
                {
                    "id": corpus_id,
                    "sentences": len(corpus.sentences),
                    "tokens": corpus.token_count(),
                    "has_gold": all(s.gold is not None for s in corpus.sentences)
                    and bool(corpus.sentences),
                    "annotated": (corpus_id, digest) in state.annotated,
                }
            )
        lexicons = []
        for name in project.lexicon_names():
            lex = project.load_lexicon(name)
            lexicons.append(
                {
                    "name": name,
                    "label": lex.label,
                    "language": lex.language,
                    "entries": len(lex.entries),
                }
            )
        return {
            "language": project.language,
            "dump": str(project.dump_path) if project.dump_path else None,
            "corpora": corpora,
            "lexicons": lexicons,
            "has_index": state.class_index is not None,
            "config_digest": state.config.matching_digest(),
        }

    # -- class search ------------------------------------------------------

    @app.get(api + "/classes")
    def get_classes(q: str, lang: Optional[str] = None, limit: int = 50):
        del lang  # the cached index is language-bound already
        if state.class_index is None:
            return JSONResponse(
                status_code=409,
                content={"detail": "class index not built; POST /api/v1/index first"},
            )
        if not q.strip():
            return JSONResponse(status_code=400, content={"detail": "q must be non-empty"})
        entries = kb.search_classes(state.class_index, q)[: max(limit, 0)]
        return [
            {
                "class_id": e.class_id,
                "label": e.label,
                "language": e.language,
                "instance_count": e.instance_count,
            }
            for e in entries
        ]

    @app.post(api + "/index", status_code=202)
    def post_index():
        if state.running("extract"):
            return JSONResponse(
                status_code=409, content={"detail": "an extraction job is already running"}
            )

        def work(job: Job):
            job.bump(0.1)
            index = state.project.class_index()
            with state.lock:
                state.class_index = index
            return {"classes": len(index)}

        return {"job_id": state.start_job("extract", work).id}

    # -- lexicons ---------------------------------------------------------

    @app.get(api + "/lexicons")
    def get_lexicons():
        out = []
        for name in project.lexicon_names():
            lex = project.load_lexicon(name)
            out.append(
                {
                    "name": name,
                    "label": lex.label,
                    "language": lex.language,
                    "entries": len(lex.entries),
                }
            )
        return out

    @app.post(api + "/lexicons", status_code=202)
    def post_lexicons(body: ExtractBody):
        if state.running("extract"):
            return JSONResponse(
                status_code=409, content={"detail": "an extraction job is already running"}
            )
        dump = project.dump_path
        if dump is None or not dump.exists():
            return JSONResponse(
                status_code=409, content={"detail": "project has no dump configured"}
            )
        name = body.name or body.label
        language = body.lang or project.language

        def work(job: Job):
            size = dump.stat().st_size or 1
            raw = open(dump, "rb")
            stream: object
            if dump.suffix == ".gz":
                import gzip

                stream = gzip.open(raw, "rt", encoding="utf-8")
            elif dump.suffix == ".bz2":
                import bz2

                stream = bz2.open(raw, "rt", encoding="utf-8")
            else:
                stream = io.TextIOWrapper(raw, encoding="utf-8")
            counter = itertools.count()

            def items():
                for item in kb.stream_items(stream):
                    if next(counter) % 1000 == 0:
                        job.bump(raw.tell() / size * 0.95)
                    yield item

            try:
                lexicon = kb.extract_lexicon(items(), set(body.class_ids), language, body.label)
            finally:
                stream.close()
            with state.lock:
                project.save_lexicon(name, lexicon)
                if name not in state.config.priority_order:
                    old = state.config
                    state.config = update_config(
                        old, {"priority_order": list(old.priority_order) + [name]}
                    )
                    project.save_config(state.config)
                    state.invalidate_after_config_change(old)
            return {
                "name": name,
                "label": body.label,
                "entries": len(lexicon.entries),
                "warnings": lexicon.warnings,
            }

        return {"job_id": state.start_job("extract", work).id}

    @app.post(api + "/userlists", status_code=201)
    async def post_userlist(
        file: UploadFile = File(...),
        label: str = Form(...),
        name: Optional[str] = Form(None),
    ):
        content = await file.read()
        if len(content) > max_upload:
            return JSONResponse(status_code=413, content={"detail": "upload too large"})
        lexicon = kb.load_user_list(content.decode("utf-8"), label, project.language)
        list_name = name or label
        with state.lock:
            project.save_lexicon(list_name, lexicon)
            if list_name not in state.config.priority_order:
                old = state.config
                state.config = update_config(
                    old, {"priority_order": list(old.priority_order) + [list_name]}
                )
                project.save_config(state.config)
                state.invalidate_after_config_change(old)
        return {"name": list_name, "label": label, "entries": len(lexicon.entries)}

    # -- jobs ----------------------------------------------------------------

    @app.get(api + "/jobs/{job_id}")
    def get_job(job_id: str):
        job = state.jobs.get(job_id)
        if job is None:
            return JSONResponse(status_code=404, content={"detail": "no such job"})
        return job.to_dict()

    # -- config ---------------------------------------------------------------

    @app.get(api + "/config")
    def get_config():
        return state.config.to_dict()

    @app.put(api + "/config")
    def put_config(body: dict):
        with state.lock:
            old = state.config
            state.config = project.resolve_lemma_table(update_config(old, body))
            project.save_config(state.config)
            state.invalidate_after_config_change(old)
        return state.config.to_dict()

    # -- corpora ------------------------------------------------------------------

    @app.post(api + "/corpora", status_code=201)
    async def post_corpus(
        file: UploadFile = File(...),
        corpus_id: Optional[str] = Form(None),
        format: str = Form("conll"),
    ):
        content = await file.read()
        if len(content) > max_upload:
            return JSONResponse(status_code=413, content={"detail": "upload too large"})
        text = content.decode("utf-8")
        cid = corpus_id or Path(file.filename or "corpus").stem
        if format == "text":
            corpus = LabeledCorpus(
                sentences=[Sentence(tokens=t) for t in tokenize(text, project.language)],
                language=project.language,
                source_name=cid,
            )
            project.corpus_dir.mkdir(parents=True, exist_ok=True)
            (project.corpus_dir / f"{cid}.txt").write_text(text, encoding="utf-8")
        else:
            corpus = parse_conll(text)
            project.corpus_dir.mkdir(parents=True, exist_ok=True)
            (project.corpus_dir / f"{cid}.conll").write_text(text, encoding="utf-8")
        with state.lock:
            state.corpora[cid] = corpus
        return {
            "id": cid,
            "sentences": len(corpus.sentences),
            "tokens": corpus.token_count(),
        }

    @app.get(api + "/corpora/{corpus_id}")
    def get_corpus(corpus_id: str, page: int = 0, size: int = 50):
        digest = state.config.matching_digest()
        key = (corpus_id, digest)
        with state.lock:
            corpus = state.annotated.get(key)
        if corpus is None:
            corpus = state.corpus(corpus_id)
        start = max(page, 0) * max(size, 1)
        views = [
            _sentence_view(s, i)
            for i, s in enumerate(corpus.sentences[start : start + max(size, 1)], start=start)
        ]
        return {
            "id": corpus_id,
            "page": page,
            "size": size,
            "total_sentences": len(corpus.sentences),
            "annotated": key in state.annotated,
            "sentences": views,
        }

    # -- annotation --------------------------------------------------------------

    @app.post(api + "/annotate", status_code=202)
    def post_annotate(body: AnnotateBody):
        if state.running("annotate"):
            return JSONResponse(
                status_code=409, content={"detail": "an annotation job is already running"}
            )
        corpus_id = body.corpus_id
        if corpus_id not in project.corpus_ids() and corpus_id not in state.corpora:
            return JSONResponse(status_code=404, content={"detail": "no such corpus"})
        fingerprint = state.config.matching_digest()

        def work(job: Job):
            state.annotated_corpus(corpus_id, progress=job.bump)
            return {"corpus_id": corpus_id, "fingerprint": fingerprint}

        return {"job_id": state.start_job("annotate", work).id}

    # -- evaluation ---------------------------------------------------------------

    @app.get(api + "/eval")
    def get_eval(corpus_id: str, top_k: int = 10):
        tagged = state.annotated_corpus(corpus_id)
        report = evaluate_corpus(tagged, top_k=top_k)
        with state.lock:
            state.last_eval = report
        return report.to_dict()

    @app.get(api + "/inspect")
    def get_inspect(corpus_id: str, sent: int, tok: int):
        tagged = state.annotated_corpus(corpus_id)
        if not 0 <= sent < len(tagged.sentences):
            return JSONResponse(status_code=404, content={"detail": "no such sentence"})
        sentence = tagged.sentences[sent]
        if not 0 <= tok < len(sentence.tokens):
            return JSONResponse(status_code=404, content={"detail": "no such token"})
        gold = sentence.gold[tok] if sentence.gold else None
        inspection = inspect_token(
            state.matcher(), sentence.tokens, tok, state.config, gold=gold
        )
        return {
            "token": inspection.token,
            "gold": inspection.gold,
            "predicted": inspection.predicted,
            "candidates": [
                {
                    "label": c.label,
                    "lexicon": c.provenance.lexicon,
                    "source_item": c.provenance.source_item,
                    "surface": c.provenance.surface,
                    "start": c.start,
                    "length": c.length,
                    "fuzzy_cost": c.fuzzy_cost,
                    "won": c.won,
                }
                for c in inspection.candidates
            ],
        }

    # -- overrides -------------------------------------------------------------------

    @app.post(api + "/override")
    def post_override(body: OverrideBody):
        digest = state.config.matching_digest()
        key = (body.corpus_id, digest)
        with state.lock:
            corpus = state.annotated.get(key)
            if corpus is None:
                corpus = state.corpus(body.corpus_id)
            override_label(corpus, body.sentence, body.start, body.end, body.label)
            # keep the base corpus and every annotated variant in sync
            base = state.corpus(body.corpus_id)
            if base is not corpus:
                base.sentences[body.sentence].overrides = list(
                    corpus.sentences[body.sentence].overrides
                )
            for (cid, _), variant in state.annotated.items():
                if cid == body.corpus_id and variant is not corpus:
                    variant.sentences[body.sentence].overrides = list(
                        corpus.sentences[body.sentence].overrides
                    )
            project.save_overrides(body.corpus_id, corpus)
            state.last_eval = None
        return _sentence_view(corpus.sentences[body.sentence], body.sentence)

    # -- history -----------------------------------------------------------------------

    @app.get(api + "/history")
    def get_history():
        return [
            {
                "index": s.index,
                "description": s.description,
                "metrics": s.metrics,
                "timestamp": s.timestamp,
                "config": s.config.to_dict(),
            }
            for s in project.history()
        ]

    @app.post(api + "/history", status_code=201)
    def post_history(body: HistoryBody):
        with state.lock:
            history = record_step(
                project.history(), body.description, state.config, state.last_eval
            )
            project.save_history(history)
            step = history[-1]
        return {
            "index": step.index,
            "description": step.description,
            "metrics": step.metrics,
            "timestamp": step.timestamp,
        }

    # -- export ------------------------------------------------------------------------

    @app.get(api + "/export")
    def get_export(corpus_id: str, layer: str = "merged"):
        if layer in ("merged", "predicted"):
            corpus = state.annotated_corpus(corpus_id)
        else:
            corpus = state.corpus(corpus_id)
        text = write_conll(corpus, layer)
        return PlainTextResponse(
            text,
            media_type="text/plain; charset=utf-8",
            headers={
                "Content-Disposition": f'attachment; filename="{corpus_id}.{layer}.conll"'
            },
        )

    if static_dir is None:
        candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        static_dir = candidate if candidate.is_dir() else None
    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
