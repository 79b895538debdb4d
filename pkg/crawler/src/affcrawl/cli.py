"""Command line: affcrawl --jobs <file> --out crawl.log --delay 2 --timeout 30."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .jobs import JobError, load_jobs
from .runner import run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="affcrawl",
        description="Trace description links into a schema-version-1 crawl log.",
    )
    parser.add_argument("--jobs", required=True, help="JSON jobs file")
    parser.add_argument("--out", required=True, help="crawl log to append to")
    parser.add_argument("--delay", type=float, default=2.0,
                        help="politeness delay in seconds between clicks (default 2)")
    parser.add_argument("--timeout", type=float, default=30.0,
                        help="per-URL navigation timeout in seconds (default 30)")
    parser.add_argument("--max-hops", type=int, default=10,
                        help="abandon chains longer than this many hops (default 10)")
    parser.add_argument("--error-log", default=None,
                        help="failure log (default: <out>.errors)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    error_log = args.error_log or f"{args.out}.errors"
    try:
        jobs = load_jobs(
            args.jobs,
            politeness_delay=args.delay,
            timeout=args.timeout,
            max_chain_hops=args.max_hops,
        )
    except (JobError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        summary = run(jobs, Path(args.out), Path(error_log))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"jobs: {summary.jobs}")
    print(f"urls: {summary.urls_attempted}")
    print(f"records: {summary.records_written}")
    print(f"failures: {len(summary.failures)}")
    for failure in summary.failures:
        print(f"  {failure.url}: {failure.reason}", file=sys.stderr)
    return 0 if summary.ok else 1


if __name__ == "__main__":
    sys.exit(main())
