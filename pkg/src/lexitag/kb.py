"""Knowledge-base dump streaming, class indexing and lexicon extraction.

Dumps are newline-delimited entity JSON (one entity per line, optionally
wrapped in array framing) and are always processed in a single streaming
pass, so memory stays bounded by the largest line plus whatever is being
collected. ``.gz`` and ``.bz2`` dumps are decompressed on the fly.

Only direct "instance of" membership counts; subclass closure is not
followed (it would need a separate relation pass and is documented as a
limitation).
"""

from __future__ import annotations

import bz2
import gzip
import hashlib
import io
import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator, Optional, Union

from .errors import DumpReadError, FormatMismatchError

__all__ = [
    "KbItem",
    "ClassIndexEntry",
    "LexiconEntry",
    "RawLexicon",
    "DumpStats",
    "DumpFile",
    "open_dump",
    "stream_items",
    "build_class_index",
    "search_classes",
    "extract_lexicon",
    "load_user_list",
    "save_lexicon",
    "load_lexicon",
    "save_class_index",
    "load_class_index",
    "dump_checksum",
    "index_dump",
]

INSTANCE_OF = "P31"

_FORMAT_PROBE_LINES = 1000


@dataclass(frozen=True)
class KbItem:
    """Slimmed-down knowledge-base entity: ids, names, class membership."""

    item_id: str
    labels: dict[str, str] = field(default_factory=dict)
    aliases: dict[str, list[str]] = field(default_factory=dict)
    instance_of: tuple[str, ...] = ()


@dataclass(frozen=True)
class ClassIndexEntry:
    class_id: str
    label: str
    language: str
    instance_count: int


@dataclass(frozen=True)
class LexiconEntry:
    surface: str
    source_item: str
    is_alias: bool


@dataclass
class RawLexicon:
    """A named list of entity surface forms for one label and language."""

    label: str
    language: str
    entries: list[LexiconEntry] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)  # not serialized

    def surfaces(self) -> list[str]:
        return [e.surface for e in self.entries]


@dataclass
class DumpStats:
    lines: int = 0
    items: int = 0
    malformed: int = 0


def open_dump(path: Union[str, Path]) -> IO[str]:
    """Open a dump file as UTF-8 text, decompressing by extension."""
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, "rt", encoding="utf-8")
    if path.suffix == ".bz2":
        return bz2.open(path, "rt", encoding="utf-8")
    return open(path, "rt", encoding="utf-8")


def _parse_entity(obj: dict) -> Optional[KbItem]:
    item_id = obj.get("id")
    if not item_id or not isinstance(item_id, str):
        return None
    labels: dict[str, str] = {}
    for lang, val in (obj.get("labels") or {}).items():
        if isinstance(val, dict) and isinstance(val.get("value"), str):
            labels[lang.lower()] = val["value"]
    aliases: dict[str, list[str]] = {}
    for lang, vals in (obj.get("aliases") or {}).items():
        seen: list[str] = []
        for val in vals if isinstance(vals, list) else []:
            if isinstance(val, dict) and isinstance(val.get("value"), str):
                if val["value"] not in seen:
                    seen.append(val["value"])
        if seen:
            aliases[lang.lower()] = seen
    instance_of: list[str] = []
    claims = obj.get("claims") or {}
    for claim in claims.get(INSTANCE_OF, []) if isinstance(claims, dict) else []:
        try:
            cid = claim["mainsnak"]["datavalue"]["value"]["id"]
        except (KeyError, TypeError):
            continue
        if isinstance(cid, str):
            instance_of.append(cid)
    return KbItem(
        item_id=item_id,
        labels=labels,
        aliases=aliases,
        instance_of=tuple(instance_of),
    )


def stream_items(
    source: Union[IO[str], IO[bytes], Iterable[str]],
    format_hint: str = "ndjson",
    stats: Optional[DumpStats] = None,
) -> Iterator[KbItem]:
    """Yield one KbItem per parseable entity line, in stream order.

    Array framing lines ("[", "]", trailing commas) are tolerated regardless
    of ``format_hint``. Malformed lines are counted in ``stats`` and skipped;
    if more than half of the first 1000 entity lines fail to parse the stream
    is rejected as a whole.
    """
    del format_hint  # both framings are handled uniformly
    if stats is None:
        stats = DumpStats()
    if isinstance(source, (io.RawIOBase, io.BufferedIOBase)) or (
        hasattr(source, "read") and isinstance(getattr(source, "mode", ""), str) and "b" in getattr(source, "mode", "")
    ):
        source = io.TextIOWrapper(source, encoding="utf-8")  # type: ignore[arg-type]
    line_no = 0
    lines = iter(source)
    while True:
        try:
            line = next(lines)
        except StopIteration:
            break
        except (OSError, UnicodeDecodeError) as exc:
            raise DumpReadError(f"dump read failed: {exc}", line_no + 1) from exc
        line_no += 1
        stats.lines = line_no
        if isinstance(line, bytes):
            line = line.decode("utf-8", errors="replace")
        text = line.strip()
        if not text or text in ("[", "]"):
            continue
        text = text.lstrip("[").rstrip(",]").rstrip(",")
        if not text:
            continue
        item = None
        try:
            obj = json.loads(text)
            if isinstance(obj, dict):
                item = _parse_entity(obj)
        except json.JSONDecodeError:
            item = None
        if item is None:
            stats.malformed += 1
        else:
            stats.items += 1
            yield item
        probed = stats.items + stats.malformed
        if probed == _FORMAT_PROBE_LINES and stats.malformed * 2 > probed:
            raise FormatMismatchError(
                f"{stats.malformed} of the first {probed} entity lines were "
                "malformed; input does not look like an entity-JSON dump"
            )


class DumpFile:
    """Re-iterable view of a dump file; each iteration is a fresh pass."""

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self.last_stats = DumpStats()

    def __iter__(self) -> Iterator[KbItem]:
        stats = DumpStats()
        self.last_stats = stats
        with open_dump(self.path) as stream:
            yield from stream_items(stream, stats=stats)


def build_class_index(items: Iterable[KbItem], language: str) -> list[ClassIndexEntry]:
    """One entry per distinct class id seen in any item's class membership.

    Labels come from the class's own item when it appears in the data, else
    the raw identifier. Re-iterable inputs (lists, :class:`DumpFile`) are
    scanned twice so only per-class state is held; one-shot iterators fall
    back to buffering labels in memory.
    """
    language = language.lower()
    counts: Counter[str] = Counter()
    labels: dict[str, str] = {}
    if iter(items) is not items:  # re-iterable: two passes, bounded memory
        for item in items:
            counts.update(set(item.instance_of))
        for item in items:
            if item.item_id in counts:
                label = item.labels.get(language)
                if label:
                    labels[item.item_id] = label
    else:
        all_labels: dict[str, str] = {}
        for item in items:
            counts.update(set(item.instance_of))
            label = item.labels.get(language)
            if label:
                all_labels[item.item_id] = label
        labels = {cid: all_labels[cid] for cid in counts if cid in all_labels}
    entries = [
        ClassIndexEntry(
            class_id=cid,
            label=labels.get(cid, cid),
            language=language,
            instance_count=count,
        )
        for cid, count in counts.items()
    ]
    entries.sort(key=lambda e: (-e.instance_count, e.class_id))
    return entries


def search_classes(index: list[ClassIndexEntry], query: str) -> list[ClassIndexEntry]:
    """Case-insensitive label search: exact, then prefix, then substring.

    Ties break by descending instance count, then class id, which makes the
    ranking a total order.
    """
    q = query.strip().lower()
    if not q:
        raise ValueError("query must be non-empty")
    ranked: list[tuple[tuple, ClassIndexEntry]] = []
    for entry in index:
        label = entry.label.lower()
        if label == q:
            tier = 0
        elif label.startswith(q):
            tier = 1
        elif q in label:
            tier = 2
        else:
            continue
        ranked.append(((tier, -entry.instance_count, entry.class_id), entry))
    ranked.sort(key=lambda pair: pair[0])
    return [entry for _, entry in ranked]


def _as_items(source, stats: Optional[DumpStats]) -> Iterable[KbItem]:
    if isinstance(source, (str, Path)):
        with open_dump(source) as stream:
            yield from stream_items(stream, stats=stats)
        return
    if isinstance(source, DumpFile):
        yield from source
        return
    if hasattr(source, "read"):
        yield from stream_items(source, stats=stats)
        return
    iterator = iter(source)
    first = next(iterator, None)
    if first is None:
        return
    if isinstance(first, KbItem):
        yield first
        yield from iterator
    else:
        def _chain():
            yield first
            yield from iterator

        yield from stream_items(_chain(), stats=stats)


def extract_lexicon(
    dump_source,
    class_ids: Iterable[str],
    language: str,
    label: str,
    stats: Optional[DumpStats] = None,
) -> RawLexicon:
    """Single streaming pass: collect names and aliases of matching items.

    ``dump_source`` may be a path, an open stream, or an iterable of already
    parsed items. Items lacking a name in the requested language contribute
    nothing (no cross-language fallback). Output is duplicate-free on
    (surface, source item).
    """
    language = language.lower()
    wanted = set(class_ids)
    if not wanted:
        raise ValueError("class_ids must be non-empty")
    lexicon = RawLexicon(label=label, language=language)
    seen: set[tuple[str, str]] = set()
    matched_items = 0

    def add(surface: str, source_item: str, is_alias: bool) -> None:
        surface = surface.strip()
        if not surface or (surface, source_item) in seen:
            return
        seen.add((surface, source_item))
        lexicon.entries.append(LexiconEntry(surface, source_item, is_alias))

    for item in _as_items(dump_source, stats):
        if not wanted.intersection(item.instance_of):
            continue
        matched_items += 1
        name = item.labels.get(language)
        if name:
            add(name, item.item_id, is_alias=False)
        for alias in item.aliases.get(language, []):
            add(alias, item.item_id, is_alias=True)
    if matched_items == 0:
        lexicon.warnings.append(
            "no items matched the requested class ids; lexicon is empty"
        )
    elif not lexicon.entries:
        lexicon.warnings.append(
            f"{matched_items} items matched but none had a {language!r} name"
        )
    return lexicon


def load_user_list(text: str, label: str, language: str) -> RawLexicon:
    """Parse a user-provided list: one surface per line, optional aliases.

    A line "surface | alias1 | alias2" attaches the aliases to that surface's
    synthetic source item. ``#`` lines are comments; repeated surfaces keep
    their first occurrence.
    """
    lexicon = RawLexicon(label=label, language=language.lower())
    seen: set[str] = set()
    ordinal = 0
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split("|")]
        surface = parts[0]
        if not surface:
            continue
        ordinal += 1
        source = f"user:{label}:{ordinal}"
        if surface not in seen:
            seen.add(surface)
            lexicon.entries.append(LexiconEntry(surface, source, is_alias=False))
        for alias in parts[1:]:
            if alias and alias not in seen:
                seen.add(alias)
                lexicon.entries.append(LexiconEntry(alias, source, is_alias=True))
    return lexicon


def lexicon_to_dict(lexicon: RawLexicon) -> dict:
    return {
        "label": lexicon.label,
        "language": lexicon.language,
        "entries": [
            {"surface": e.surface, "source_item": e.source_item, "is_alias": e.is_alias}
            for e in lexicon.entries
        ],
    }


def lexicon_from_dict(data: dict) -> RawLexicon:
    return RawLexicon(
        label=data["label"],
        language=data["language"],
        entries=[
            LexiconEntry(e["surface"], e["source_item"], bool(e["is_alias"]))
            for e in data["entries"]
        ],
    )


def save_lexicon(lexicon: RawLexicon, path: Union[str, Path]) -> None:
    Path(path).write_text(
        json.dumps(lexicon_to_dict(lexicon), ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )


def load_lexicon(path: Union[str, Path]) -> RawLexicon:
    return lexicon_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def save_class_index(entries: list[ClassIndexEntry], path: Union[str, Path]) -> None:
    payload = [
        {
            "class_id": e.class_id,
            "label": e.label,
            "language": e.language,
            "instance_count": e.instance_count,
        }
        for e in entries
    ]
    Path(path).write_text(
        json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )


def load_class_index(path: Union[str, Path]) -> list[ClassIndexEntry]:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    return [
        ClassIndexEntry(
            class_id=e["class_id"],
            label=e["label"],
            language=e["language"],
            instance_count=int(e["instance_count"]),
        )
        for e in raw
    ]


def dump_checksum(path: Union[str, Path]) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def index_dump(
    path: Union[str, Path],
    language: str,
    cache_dir: Optional[Union[str, Path]] = None,
    force: bool = False,
) -> list[ClassIndexEntry]:
    """Build (or load from cache) the class index of a dump file.

    The cache sidecar is keyed by the dump's checksum, so repeated sessions
    on the same bytes skip the scan entirely.
    """
    cache_path = None
    if cache_dir is not None:
        cache_dir = Path(cache_dir)
        cache_dir.mkdir(parents=True, exist_ok=True)
        checksum = dump_checksum(path)
        cache_path = cache_dir / f"{checksum}.{language.lower()}.json"
        if cache_path.exists() and not force:
            return load_class_index(cache_path)
    index = build_class_index(DumpFile(path), language)
    if cache_path is not None:
        save_class_index(index, cache_path)
    return index
