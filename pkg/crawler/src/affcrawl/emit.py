"""Builders for schema-version-1 crawl-log lines.

This module is the crawler's half of the file-format contract: one JSON
object per line, ``kind`` discriminating video metadata from per-link crawl
records. Field names and shapes here must match what ``affaudit ingest``
validates; the integration tests enforce that by round-tripping real output
through ``affaudit ingest --strict``.
"""

from __future__ import annotations

from . import SCHEMA_VERSION
from .driver import TraceResult
from .jobs import CrawlJob


def video_line(job: CrawlJob) -> dict:
    v = job.video
    return {
        "kind": "video",
        "schema_version": SCHEMA_VERSION,
        "video_id": job.video_id,
        "channel_id": v.channel_id,
        "upload_date": v.upload_date,
        "category": v.category,
        "subscriber_count": v.subscriber_count,
        "source_tag": v.source_tag,
        "description_text": v.description_text,
        "language_tag": v.language_tag,
    }


def crawl_line(link_id: str, video_id: str, result: TraceResult) -> dict:
    """One crawl record for a completed trace.

    Crawled links all come from video descriptions, so origin_location is
    always "Description"; the plain-HTTP driver observes no DOM hooks or JS
    calls, so those lists are empty (the schema allows that).
    """
    return {
        "kind": "crawl",
        "schema_version": SCHEMA_VERSION,
        "link_id": link_id,
        "video_id": video_id,
        "origin_location": "Description",
        "original_url": result.original_url,
        "redirects": [
            {
                "sequence_index": hop.sequence_index,
                "source_url": hop.source_url,
                "target_url": hop.target_url,
                "status_class": hop.status_class,
                "query_params": [list(pair) for pair in hop.query_params],
            }
            for hop in result.redirects
        ],
        "storage_events": [
            {
                "actor_origin": cookie.actor_origin,
                "storage_key": cookie.storage_key,
                "storage_value": cookie.storage_value,
                "action": "Write",
            }
            for cookie in result.storage_events
        ],
        "dom_hooks": [],
        "js_calls": [],
        "landing_url": result.landing_url,
    }
