"""Shared builders: compact constructors for videos, crawl records, corpora.

Every helper fills sensible defaults so individual tests only spell out the
fields they actually exercise.
"""

from __future__ import annotations

from datetime import date
from pathlib import Path

import pytest

from affaudit.crawl_model import (
    Corpus,
    CrawlRecord,
    OriginLocation,
    RedirectEvent,
    SourceTag,
    StatusClass,
    StorageAction,
    StorageEvent,
    VideoMeta,
    write_corpus,
)
from affaudit.urltools import parse_query


def make_video(video_id: str = "v001", **overrides) -> VideoMeta:
    values = dict(
        video_id=video_id,
        channel_id="ch001",
        upload_date=date(2019, 6, 1),
        category="Howto & Style",
        subscriber_count=50_000,
        source_tag=SourceTag.Random,
        description_text="Thanks for watching!",
        language_tag="en",
    )
    values.update(overrides)
    return VideoMeta(**values)


def chain_record(
    urls: list[str],
    *,
    link_id: str = "l001",
    video_id: str = "v001",
    storage: tuple[StorageEvent, ...] = (),
    dom_hooks: tuple[tuple[str, str], ...] = (),
    js_calls: tuple[str, ...] = (),
    status: StatusClass = StatusClass.HttpRedirect,
    origin: OriginLocation = OriginLocation.Description,
) -> CrawlRecord:
    """Build a record whose chain follows `urls`; decorations come from each
    target URL's own query string."""
    redirects = tuple(
        RedirectEvent(
            sequence_index=i,
            source_url=urls[i],
            target_url=urls[i + 1],
            status_class=status,
            query_params=tuple(parse_query(urls[i + 1])),
        )
        for i in range(len(urls) - 1)
    )
    return CrawlRecord(
        link_id=link_id,
        video_id=video_id,
        origin_location=origin,
        original_url=urls[0],
        redirects=redirects,
        storage_events=storage,
        dom_hooks=dom_hooks,
        js_calls=js_calls,
        landing_url=urls[-1],
    )


def write_event(origin: str, key: str, value: str) -> StorageEvent:
    return StorageEvent(origin, key, value, StorageAction.Write)


def read_event(origin: str, key: str, value: str) -> StorageEvent:
    return StorageEvent(origin, key, value, StorageAction.Read)


def make_corpus(records: list[CrawlRecord], videos: list[VideoMeta] | None = None) -> Corpus:
    """Corpus containing `records`, with a video stub for each referenced id
    unless explicit videos are given."""
    if videos is None:
        videos = [make_video(vid) for vid in dict.fromkeys(r.video_id for r in records)]
    return Corpus(videos={v.video_id: v for v in videos}, records=list(records))


@pytest.fixture
def corpus_file(tmp_path: Path):
    """Writes a corpus to a JSON-lines file and returns the path."""

    def _write(corpus: Corpus, name: str = "corpus.jsonl") -> Path:
        path = tmp_path / name
        write_corpus(corpus, path)
        return path

    return _write
