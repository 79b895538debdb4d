"""Crawl execution: politeness, atomic appends, and honest failure handling.

A job's lines (its video line plus one crawl line per successfully traced
URL) are appended to the output file in a single exclusively-locked write,
so independent crawler processes can share one output file without
interleaving. Failed URLs never produce records — not even partial ones —
they produce a line in the error log with the reason.
"""

from __future__ import annotations

import fcntl
import json
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable

from .driver import TraceFailure, TraceResult, trace
from .emit import crawl_line, video_line
from .jobs import CrawlJob


@dataclass(frozen=True)
class Failure:
    video_id: str
    url: str
    reason: str


@dataclass
class RunSummary:
    jobs: int = 0
    urls_attempted: int = 0
    records_written: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def append_locked(path: str | Path, lines: Iterable[str]) -> None:
    """Append lines to path under an exclusive advisory lock."""
    with open(path, "a", encoding="utf-8") as fh:
        fcntl.flock(fh, fcntl.LOCK_EX)
        try:
            for line in lines:
                fh.write(line + "\n")
            fh.flush()
        finally:
            fcntl.flock(fh, fcntl.LOCK_UN)


def _error_lines(failures: Iterable[Failure]) -> list[str]:
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return [f"{stamp}\t{f.video_id}\t{f.url}\t{f.reason}" for f in failures]


def crawl_job(
    job: CrawlJob,
    driver: Callable[..., TraceResult] = trace,
    sleep: Callable[[float], None] = time.sleep,
    first_visit_done: bool = False,
) -> tuple[list[dict], list[Failure]]:
    """Trace every URL of one job; returns (record dicts, failures).

    The politeness delay runs before every visit except the very first of
    the whole run (first_visit_done=False); hops within one navigation are
    part of a single click and are not delayed.
    """
    lines: list[dict] = [video_line(job)]
    failures: list[Failure] = []
    for index, url in enumerate(job.urls):
        if first_visit_done or index > 0:
            sleep(job.politeness_delay)
        try:
            result = driver(url, timeout=job.timeout, max_chain_hops=job.max_chain_hops)
        except TraceFailure as exc:
            failures.append(Failure(job.video_id, url, str(exc)))
            continue
        lines.append(crawl_line(f"{job.video_id}-l{index:03d}", job.video_id, result))
    return lines, failures


def run(
    jobs: list[CrawlJob],
    out: str | Path,
    error_log: str | Path,
    driver: Callable[..., TraceResult] = trace,
    sleep: Callable[[float], None] = time.sleep,
) -> RunSummary:
    """Crawl all jobs, appending crawl-log lines to out and failures to error_log."""
    summary = RunSummary()
    visited_any = False
    for job in jobs:
        lines, failures = crawl_job(job, driver=driver, sleep=sleep, first_visit_done=visited_any)
        visited_any = visited_any or bool(job.urls)
        append_locked(out, [json.dumps(obj, sort_keys=True) for obj in lines])
        if failures:
            append_locked(error_log, _error_lines(failures))
        summary.jobs += 1
        summary.urls_attempted += len(job.urls)
        summary.records_written += len(lines) - 1
        summary.failures.extend(failures)
    return summary
