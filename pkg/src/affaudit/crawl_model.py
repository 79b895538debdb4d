"""Crawl-log schema: video metadata, per-link browser traces, and ingestion.

The on-disk format is UTF-8 JSON lines, one record per line, discriminated by
a "kind" field ("video" or "crawl") and carrying schema_version 1. Everything
else in the toolkit consumes the in-memory Corpus produced here, so URL
normalization and invariant checks happen exactly once, at ingest.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from pathlib import Path

from . import SCHEMA_VERSION
from .urltools import UrlError, is_valid_origin, normalize_url

# The category vocabulary seen in the crawl. Membership is not enforced at
# ingest (real logs may grow new names); the generator only emits these.
CATEGORIES = (
    "Autos & Vehicles",
    "Comedy",
    "Education",
    "Entertainment",
    "Film & Animation",
    "Gaming",
    "Howto & Style",
    "Music",
    "News & Politics",
    "Nonprofits",
    "People & Blogs",
    "Pets & Animals",
    "Science & Technology",
    "Shows",
    "Sports",
    "Travel & Events",
)

DATE_LOWER = date(2015, 1, 1)
DATE_UPPER = date(2024, 12, 31)


class SourceTag(str, Enum):
    Reddit = "Reddit"
    Random = "Random"
    Trending = "Trending"
    Shopping = "Shopping"


class OriginLocation(str, Enum):
    Description = "Description"
    ShoppingShelf = "ShoppingShelf"


class StatusClass(str, Enum):
    HttpRedirect = "HttpRedirect"
    JsNavigation = "JsNavigation"
    MetaRefresh = "MetaRefresh"


class StorageAction(str, Enum):
    Read = "Read"
    Write = "Write"


@dataclass(frozen=True, slots=True)
class VideoMeta:
    """Metadata for one video as supplied by the collection stage."""

    video_id: str
    channel_id: str
    upload_date: date
    category: str
    subscriber_count: int
    source_tag: SourceTag
    description_text: str
    language_tag: str = "en"


@dataclass(frozen=True, slots=True)
class RedirectEvent:
    """One hop of a redirect chain; query_params are the target URL's pairs."""

    sequence_index: int
    source_url: str
    target_url: str
    status_class: StatusClass
    query_params: tuple[tuple[str, str], ...]


@dataclass(frozen=True, slots=True)
class StorageEvent:
    actor_origin: str
    storage_key: str
    storage_value: str
    action: StorageAction


@dataclass(frozen=True, slots=True)
class CrawlRecord:
    """Full browser trace for one clicked hyperlink."""

    link_id: str
    video_id: str
    origin_location: OriginLocation
    original_url: str
    redirects: tuple[RedirectEvent, ...]
    storage_events: tuple[StorageEvent, ...]
    dom_hooks: tuple[tuple[str, str], ...]
    js_calls: tuple[str, ...]
    landing_url: str

    @property
    def chain_urls(self) -> tuple[str, ...]:
        """original_url followed by each redirect target, in order."""
        return (self.original_url,) + tuple(r.target_url for r in self.redirects)


@dataclass(frozen=True, slots=True)
class Violation:
    """One schema problem, pinned to an input line and field path."""

    line_no: int
    field_path: str
    message: str

    def __str__(self) -> str:
        return f"line {self.line_no}: {self.field_path}: {self.message}"


class IngestError(ValueError):
    """Raised in strict mode on the first schema violation."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        head = "; ".join(str(v) for v in violations[:5])
        more = f" (+{len(violations) - 5} more)" if len(violations) > 5 else ""
        super().__init__(f"{len(violations)} schema violation(s): {head}{more}")


@dataclass
class Corpus:
    """Validated, immutable-by-convention in-memory corpus."""

    videos: dict[str, VideoMeta] = field(default_factory=dict)
    records: list[CrawlRecord] = field(default_factory=list)

    def records_for_video(self, video_id: str) -> list[CrawlRecord]:
        return [r for r in self.records if r.video_id == video_id]

    def __len__(self) -> int:
        return len(self.records)


class _LineError(Exception):
    def __init__(self, field_path: str, message: str):
        self.field_path = field_path
        self.message = message


def _need(obj: dict, key: str, kind: type):
    if key not in obj:
        raise _LineError(key, "missing field")
    value = obj[key]
    if kind is int:
        # bool is an int subclass; counts must be plain integers
        if isinstance(value, bool) or not isinstance(value, int):
            raise _LineError(key, f"expected integer, got {type(value).__name__}")
    elif not isinstance(value, kind):
        raise _LineError(key, f"expected {kind.__name__}, got {type(value).__name__}")
    return value


def _need_enum(obj: dict, key: str, enum_cls):
    raw = _need(obj, key, str)
    try:
        return enum_cls(raw)
    except ValueError:
        allowed = ", ".join(e.value for e in enum_cls)
        raise _LineError(key, f"{raw!r} not one of {{{allowed}}}") from None


def _need_url(obj: dict, key: str) -> str:
    raw = _need(obj, key, str)
    try:
        return normalize_url(raw)
    except UrlError as exc:
        raise _LineError(key, str(exc)) from None


def _check_schema_version(obj: dict) -> None:
    version = obj.get("schema_version")
    if version != SCHEMA_VERSION:
        raise _LineError("schema_version", f"expected {SCHEMA_VERSION}, got {version!r}")


def parse_video(obj: dict, date_bounds: tuple[date, date] | None = (DATE_LOWER, DATE_UPPER)) -> VideoMeta:
    _check_schema_version(obj)
    video_id = _need(obj, "video_id", str)
    channel_id = _need(obj, "channel_id", str)
    if not video_id:
        raise _LineError("video_id", "must be non-empty")
    if not channel_id:
        raise _LineError("channel_id", "must be non-empty")
    raw_date = _need(obj, "upload_date", str)
    try:
        upload_date = date.fromisoformat(raw_date)
    except ValueError:
        raise _LineError("upload_date", f"not an ISO date: {raw_date!r}") from None
    if date_bounds is not None and not (date_bounds[0] <= upload_date <= date_bounds[1]):
        raise _LineError("upload_date", f"{upload_date} outside [{date_bounds[0]}, {date_bounds[1]}]")
    category = _need(obj, "category", str)
    if not category:
        raise _LineError("category", "must be non-empty")
    subs = _need(obj, "subscriber_count", int)
    if subs < 0:
        raise _LineError("subscriber_count", "must be >= 0")
    source_tag = _need_enum(obj, "source_tag", SourceTag)
    description = _need(obj, "description_text", str)
    language = _need(obj, "language_tag", str)
    if not language:
        raise _LineError("language_tag", "must be non-empty")
    return VideoMeta(video_id, channel_id, upload_date, category, subs, source_tag, description, language)


def _parse_redirect(obj, index: int) -> RedirectEvent:
    prefix = f"redirects[{index}]"
    if not isinstance(obj, dict):
        raise _LineError(prefix, "expected object")
    try:
        seq = _need(obj, "sequence_index", int)
        src = _need_url(obj, "source_url")
        dst = _need_url(obj, "target_url")
        status = _need_enum(obj, "status_class", StatusClass)
        raw_params = _need(obj, "query_params", list)
    except _LineError as exc:
        raise _LineError(f"{prefix}.{exc.field_path}", exc.message) from None
    params = []
    for j, pair in enumerate(raw_params):
        if (not isinstance(pair, (list, tuple)) or len(pair) != 2
                or not all(isinstance(p, str) for p in pair)):
            raise _LineError(f"{prefix}.query_params[{j}]", "expected [key, value] string pair")
        params.append((pair[0], pair[1]))
    return RedirectEvent(seq, src, dst, status, tuple(params))


def _parse_storage(obj, index: int) -> StorageEvent:
    prefix = f"storage_events[{index}]"
    if not isinstance(obj, dict):
        raise _LineError(prefix, "expected object")
    try:
        origin = _need(obj, "actor_origin", str)
        key = _need(obj, "storage_key", str)
        value = _need(obj, "storage_value", str)
        action = _need_enum(obj, "action", StorageAction)
    except _LineError as exc:
        raise _LineError(f"{prefix}.{exc.field_path}", exc.message) from None
    origin = origin.lower()
    if not is_valid_origin(origin):
        raise _LineError(f"{prefix}.actor_origin", f"not a valid origin: {origin!r}")
    return StorageEvent(origin, key, value, action)


def parse_crawl(obj: dict) -> CrawlRecord:
    _check_schema_version(obj)
    link_id = _need(obj, "link_id", str)
    if not link_id:
        raise _LineError("link_id", "must be non-empty")
    video_id = _need(obj, "video_id", str)
    if not video_id:
        raise _LineError("video_id", "must be non-empty")
    location = _need_enum(obj, "origin_location", OriginLocation)
    original = _need_url(obj, "original_url")
    redirects = tuple(_parse_redirect(o, i) for i, o in enumerate(_need(obj, "redirects", list)))
    storage = tuple(_parse_storage(o, i) for i, o in enumerate(_need(obj, "storage_events", list)))
    raw_hooks = _need(obj, "dom_hooks", list)
    hooks = []
    for j, pair in enumerate(raw_hooks):
        if (not isinstance(pair, (list, tuple)) or len(pair) != 2
                or not all(isinstance(p, str) for p in pair)):
            raise _LineError(f"dom_hooks[{j}]", "expected [element_name, class_id] string pair")
        hooks.append((pair[0], pair[1]))
    raw_calls = _need(obj, "js_calls", list)
    for j, name in enumerate(raw_calls):
        if not isinstance(name, str):
            raise _LineError(f"js_calls[{j}]", "expected string")
    landing = _need_url(obj, "landing_url")

    for i, ev in enumerate(redirects):
        if ev.sequence_index != i:
            raise _LineError(f"redirects[{i}].sequence_index", f"expected {i}, got {ev.sequence_index}")
    for i in range(1, len(redirects)):
        if redirects[i].source_url != redirects[i - 1].target_url:
            raise _LineError(f"redirects[{i}].source_url", "chain break: does not equal previous target_url")
    if redirects and redirects[0].source_url != original:
        raise _LineError("redirects[0].source_url", "chain break: does not equal original_url")
    expected_landing = redirects[-1].target_url if redirects else original
    if landing != expected_landing:
        raise _LineError("landing_url", "landing mismatch: not the final chain URL")
    sources = [r.source_url for r in redirects]
    if len(set(sources)) != len(sources):
        raise _LineError("redirects", "chain revisits a source URL (not a path)")

    return CrawlRecord(link_id, video_id, location, original, redirects, storage,
                       tuple(hooks), tuple(raw_calls), landing)


def video_to_dict(v: VideoMeta) -> dict:
    return {
        "kind": "video",
        "schema_version": SCHEMA_VERSION,
        "video_id": v.video_id,
        "channel_id": v.channel_id,
        "upload_date": v.upload_date.isoformat(),
        "category": v.category,
        "subscriber_count": v.subscriber_count,
        "source_tag": v.source_tag.value,
        "description_text": v.description_text,
        "language_tag": v.language_tag,
    }


def crawl_to_dict(r: CrawlRecord) -> dict:
    return {
        "kind": "crawl",
        "schema_version": SCHEMA_VERSION,
        "link_id": r.link_id,
        "video_id": r.video_id,
        "origin_location": r.origin_location.value,
        "original_url": r.original_url,
        "redirects": [
            {
                "sequence_index": e.sequence_index,
                "source_url": e.source_url,
                "target_url": e.target_url,
                "status_class": e.status_class.value,
                "query_params": [list(p) for p in e.query_params],
            }
            for e in r.redirects
        ],
        "storage_events": [
            {
                "actor_origin": e.actor_origin,
                "storage_key": e.storage_key,
                "storage_value": e.storage_value,
                "action": e.action.value,
            }
            for e in r.storage_events
        ],
        "dom_hooks": [list(p) for p in r.dom_hooks],
        "js_calls": list(r.js_calls),
        "landing_url": r.landing_url,
    }


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    """Serialize videos then crawl records, one JSON object per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for video in corpus.videos.values():
            fh.write(json.dumps(video_to_dict(video), sort_keys=True) + "\n")
        for record in corpus.records:
            fh.write(json.dumps(crawl_to_dict(record), sort_keys=True) + "\n")


def ingest_corpus(
    path: str | Path,
    strict: bool = False,
    date_bounds: tuple[date, date] | None = (DATE_LOWER, DATE_UPPER),
) -> tuple[Corpus, list[Violation]]:
    """Read a crawl-log file into a validated Corpus.

    Strict mode raises IngestError on any violation. Lenient mode skips
    offending lines and returns them as Violations with 1-based line numbers.
    Cross-record checks (duplicate link_id, dangling video_id) run in both
    modes after line parsing.
    """
    corpus = Corpus()
    violations: list[Violation] = []
    record_lines: dict[str, int] = {}

    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                violations.append(Violation(line_no, "<line>", f"not valid JSON: {exc.msg}"))
                continue
            if not isinstance(obj, dict):
                violations.append(Violation(line_no, "<line>", "expected a JSON object"))
                continue
            kind = obj.get("kind")
            try:
                if kind == "video":
                    video = parse_video(obj, date_bounds)
                    if video.video_id in corpus.videos:
                        raise _LineError("video_id", f"duplicate video_id {video.video_id!r}")
                    corpus.videos[video.video_id] = video
                elif kind == "crawl":
                    record = parse_crawl(obj)
                    if record.link_id in record_lines:
                        raise _LineError(
                            "link_id",
                            f"duplicate link_id {record.link_id!r} (first at line {record_lines[record.link_id]})",
                        )
                    record_lines[record.link_id] = line_no
                    corpus.records.append(record)
                else:
                    raise _LineError("kind", f"unknown kind {kind!r}")
            except _LineError as exc:
                violations.append(Violation(line_no, exc.field_path, exc.message))

    for record in list(corpus.records):
        if record.video_id not in corpus.videos:
            violations.append(Violation(
                record_lines[record.link_id], "video_id",
                f"dangling video_id {record.video_id!r}",
            ))
            corpus.records.remove(record)
            del record_lines[record.link_id]

    if strict and violations:
        raise IngestError(violations)
    return corpus, violations


def extract_hyperlinks(description_text: str) -> list[tuple[str, int]]:
    """Every absolute http(s) URL in a description with its char offset.

    Left to right, duplicates preserved; bare domains without a scheme are
    not extracted. URLs are returned as written (not normalized) so offsets
    stay valid for disclosure-adjacency checks.
    """
    from .urltools import find_urls

    return find_urls(description_text)
