"""Crawl jobs: which URLs to visit, how politely, and for which video.

A jobs file is JSON — either a bare list of job objects or ``{"jobs": [...]}``.
Each job names a video, the URLs to click, and the video metadata that the
crawl log must carry so records do not dangle:

    {
      "video_id": "vid0001",
      "urls": ["https://example.com/a", "https://example.com/b"],
      "video": {
        "channel_id": "chan01",
        "upload_date": "2023-05-01",
        "category": "Howto & Style",
        "subscriber_count": 52000,
        "source_tag": "Random",
        "description_text": "links below",
        "language_tag": "en"
      },
      "politeness_delay": 2.0,      // optional, falls back to CLI default
      "timeout": 30.0,              // optional
      "max_chain_hops": 10          // optional
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from urllib.parse import urlsplit

SOURCE_TAGS = ("Reddit", "Random", "Trending", "Shopping")

MIN_POLITENESS_DELAY = 1.0


class JobError(ValueError):
    """Raised when a jobs file or a single job is malformed."""


@dataclass(frozen=True)
class VideoInfo:
    """Metadata emitted as the video line preceding a job's crawl records."""

    channel_id: str
    upload_date: str
    category: str
    subscriber_count: int
    source_tag: str
    description_text: str = ""
    language_tag: str = "en"

    def __post_init__(self):
        if not self.channel_id:
            raise JobError("video.channel_id must be non-empty")
        if not self.category:
            raise JobError("video.category must be non-empty")
        try:
            date.fromisoformat(self.upload_date)
        except ValueError:
            raise JobError(f"video.upload_date is not an ISO date: {self.upload_date!r}") from None
        if self.subscriber_count < 0:
            raise JobError("video.subscriber_count must be >= 0")
        if self.source_tag not in SOURCE_TAGS:
            raise JobError(f"video.source_tag {self.source_tag!r} not one of {SOURCE_TAGS}")
        if not self.language_tag:
            raise JobError("video.language_tag must be non-empty")


@dataclass(frozen=True)
class CrawlJob:
    """One unit of crawling: a video and the unique URLs to trace for it.

    Invariants enforced here: the politeness delay is at least
    ``MIN_POLITENESS_DELAY`` (no hammering), and each unique URL is kept
    once — duplicates in the input collapse, first occurrence wins, so a
    URL is clicked at most once per job.
    """

    video_id: str
    urls: tuple[str, ...]
    video: VideoInfo
    politeness_delay: float = 2.0
    timeout: float = 30.0
    max_chain_hops: int = 10

    def __post_init__(self):
        if not self.video_id:
            raise JobError("video_id must be non-empty")
        if self.politeness_delay < MIN_POLITENESS_DELAY:
            raise JobError(
                f"politeness_delay {self.politeness_delay!r} below minimum {MIN_POLITENESS_DELAY}"
            )
        if self.timeout <= 0:
            raise JobError("timeout must be positive")
        if self.max_chain_hops < 0:
            raise JobError("max_chain_hops must be >= 0")
        deduped = tuple(dict.fromkeys(self.urls))
        for url in deduped:
            scheme = urlsplit(url).scheme.lower()
            if scheme not in ("http", "https"):
                raise JobError(f"not an absolute http(s) URL: {url!r}")
        object.__setattr__(self, "urls", deduped)


def _job_from_dict(obj: dict, index: int, defaults: dict) -> CrawlJob:
    if not isinstance(obj, dict):
        raise JobError(f"jobs[{index}]: expected an object")
    try:
        video_id = obj["video_id"]
        urls = obj["urls"]
        video_obj = obj["video"]
    except KeyError as exc:
        raise JobError(f"jobs[{index}]: missing field {exc.args[0]!r}") from None
    if not isinstance(urls, list) or not all(isinstance(u, str) for u in urls):
        raise JobError(f"jobs[{index}].urls: expected a list of strings")
    if not isinstance(video_obj, dict):
        raise JobError(f"jobs[{index}].video: expected an object")
    try:
        video = VideoInfo(**video_obj)
    except TypeError as exc:
        raise JobError(f"jobs[{index}].video: {exc}") from None
    except JobError as exc:
        raise JobError(f"jobs[{index}].{exc}") from None
    try:
        return CrawlJob(
            video_id=video_id,
            urls=tuple(urls),
            video=video,
            politeness_delay=obj.get("politeness_delay", defaults["politeness_delay"]),
            timeout=obj.get("timeout", defaults["timeout"]),
            max_chain_hops=obj.get("max_chain_hops", defaults["max_chain_hops"]),
        )
    except JobError as exc:
        raise JobError(f"jobs[{index}]: {exc}") from None


def load_jobs(
    path: str | Path,
    politeness_delay: float = 2.0,
    timeout: float = 30.0,
    max_chain_hops: int = 10,
) -> list[CrawlJob]:
    """Parse a jobs file; keyword arguments fill per-job omissions.

    Raises JobError on any malformed job or when two jobs share a video_id
    (the crawl log would carry a duplicate video line).
    """
    defaults = {
        "politeness_delay": politeness_delay,
        "timeout": timeout,
        "max_chain_hops": max_chain_hops,
    }
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise JobError(f"jobs file is not valid JSON: {exc.msg}") from None
    if isinstance(payload, dict):
        payload = payload.get("jobs")
    if not isinstance(payload, list):
        raise JobError('jobs file must be a JSON list or an object with a "jobs" list')
    jobs = [_job_from_dict(obj, i, defaults) for i, obj in enumerate(payload)]
    seen: dict[str, int] = {}
    for i, job in enumerate(jobs):
        if job.video_id in seen:
            raise JobError(
                f"jobs[{i}]: duplicate video_id {job.video_id!r} (first at jobs[{seen[job.video_id]}])"
            )
        seen[job.video_id] = i
    return jobs
