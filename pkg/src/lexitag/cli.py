"""Batch entry point: lexitag <subcommand>.

Exit codes: 0 success (including empty results with warnings), 1 usage error,
2 data or format error. The project positional can be omitted when the
LEXITAG_PROJECT environment variable points at a project root.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import kb
from .annotator import annotate_corpus
from .corpus import parse_conll, write_conll
from .errors import LexitagError
from .evaluation import evaluate_tags
from .project import Project
from .tuner import record_step

PROJECT_ENV = "LEXITAG_PROJECT"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _project_arg(parser: _Parser) -> None:
    parser.add_argument(
        "project",
        nargs="?",
        default=os.environ.get(PROJECT_ENV),
        help=f"project directory (default: ${PROJECT_ENV})",
    )


def _require_project(args) -> Project:
    if not args.project:
        print(f"error: no project given and ${PROJECT_ENV} unset", file=sys.stderr)
        raise SystemExit(1)
    return Project.load(args.project)


def build_parser() -> _Parser:
    parser = _Parser(prog="lexitag", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("init", help="create a project directory skeleton")
    p.add_argument("directory")
    p.add_argument("--lang", default="en")
    p.add_argument("--dump", default=None, help="knowledge-base dump path")
    p.set_defaults(func=cmd_init)

    p = sub.add_parser("index", help="build/cache the dump class index, print top classes")
    p.add_argument("dump")
    p.add_argument("--lang", required=True)
    p.add_argument("--top", type=int, default=20)
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--query", default=None, help="search the index instead of listing")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("extract", help="extract an entity lexicon from a dump")
    p.add_argument("dump")
    p.add_argument("--class-id", action="append", required=True, dest="class_ids")
    p.add_argument("--lang", required=True)
    p.add_argument("--label", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("annotate", help="compile lexicons and annotate a corpus")
    _project_arg(p)
    p.add_argument("corpus", help="CoNLL or plain-text corpus file")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", default="conll", choices=["conll"])
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("eval", help="score predictions against gold CoNLL")
    _project_arg(p)
    p.add_argument("pred")
    p.add_argument("gold")
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--json", action="store_true")
    p.add_argument("--record", default=None, metavar="DESCRIPTION",
                   help="append a tuning-history step with these metrics")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("report", help="write TSV metrics plus figures to a directory")
    _project_arg(p)
    p.add_argument("pred")
    p.add_argument("gold")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--top-k", type=int, default=10)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="start the HTTP service for the tuning UI")
    _project_arg(p)
    p.add_argument("--bind", default="127.0.0.1:8571")
    p.add_argument("--allow-remote", action="store_true",
                   help="permit binding to a non-loopback address")
    p.set_defaults(func=cmd_serve)

    return parser


def cmd_init(args) -> int:
    Project.init_dir(args.directory, language=args.lang, dump=args.dump)
    print(f"initialized project at {args.directory}")
    return 0


def cmd_index(args) -> int:
    index = kb.index_dump(args.dump, args.lang, cache_dir=args.cache_dir)
    entries = kb.search_classes(index, args.query) if args.query else index
    entries = entries[: args.top] if args.top >= 0 else entries
    if args.json:
        print(json.dumps(
            [
                {
                    "class_id": e.class_id,
                    "label": e.label,
                    "language": e.language,
                    "instance_count": e.instance_count,
                }
                for e in entries
            ],
            ensure_ascii=False,
        ))
    else:
        for e in entries:
            print(f"{e.class_id}\t{e.instance_count}\t{e.label}")
    return 0


def cmd_extract(args) -> int:
    lexicon = kb.extract_lexicon(args.dump, set(args.class_ids), args.lang, args.label)
    for warning in lexicon.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    kb.save_lexicon(lexicon, args.out)
    print(f"wrote {len(lexicon.entries)} entries to {args.out}", file=sys.stderr)
    return 0


def _read_corpus(path: str, language: str):
    from .corpus import LabeledCorpus, Sentence, tokenize

    text = Path(path).read_text(encoding="utf-8")
    if path.endswith(".txt"):
        return LabeledCorpus(
            sentences=[Sentence(tokens=t) for t in tokenize(text, language)],
            language=language,
            source_name=Path(path).stem,
        )
    return parse_conll(text)


def cmd_annotate(args) -> int:
    project = _require_project(args)
    config = project.resolve_lemma_table(project.config())
    matcher = project.build_matcher(config)
    corpus = _read_corpus(args.corpus, project.language)
    tagged = annotate_corpus(matcher, corpus, config, threads=max(args.threads, 1))
    output = write_conll(tagged, "merged" if any(s.overrides for s in tagged.sentences) else "predicted")
    if args.out:
        Path(args.out).write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)
    return 0


def _load_eval_pair(args, project: Project):
    pred = parse_conll(Path(args.pred).read_text(encoding="utf-8"))
    gold = parse_conll(Path(args.gold).read_text(encoding="utf-8"))
    tokens = [s.tokens for s in gold.sentences]
    pred_tags = [s.gold or ["O"] * len(s.tokens) for s in pred.sentences]
    gold_tags = [s.gold or ["O"] * len(s.tokens) for s in gold.sentences]
    return tokens, pred_tags, gold_tags


def cmd_eval(args) -> int:
    project = _require_project(args)
    tokens, pred_tags, gold_tags = _load_eval_pair(args, project)
    report = evaluate_tags(tokens, pred_tags, gold_tags, top_k=args.top_k)
    if args.json:
        print(json.dumps(report.to_dict(), ensure_ascii=False, sort_keys=True))
    else:
        print(report.render_text())
    if args.record is not None:
        history = record_step(project.history(), args.record, project.config(), report)
        project.save_history(history)
    return 0


def cmd_report(args) -> int:
    from .report import write_report

    project = _require_project(args)
    tokens, pred_tags, gold_tags = _load_eval_pair(args, project)
    report = evaluate_tags(tokens, pred_tags, gold_tags, top_k=args.top_k)
    written = write_report(report, args.out_dir, history=project.history())
    for path in written:
        print(path)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    project = _require_project(args)
    host, _, port = args.bind.rpartition(":")
    host = host or "127.0.0.1"
    if host not in ("127.0.0.1", "localhost", "::1") and not args.allow_remote:
        print(
            f"error: refusing to bind {host} without --allow-remote "
            "(the service has no authentication)",
            file=sys.stderr,
        )
        raise SystemExit(1)
    app = create_app(project)
    uvicorn.run(app, host=host, port=int(port or 8571), log_level="info")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LexitagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
