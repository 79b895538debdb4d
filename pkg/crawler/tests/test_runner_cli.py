"""End-to-end runs: politeness, failure honesty, appends, and the audit handoff.

The handoff contract is exercised for real: output written by the affcrawl
command line is fed to `affaudit ingest --strict` in a subprocess, which
must accept it with zero violations.
"""

import json
import subprocess
import sys

import pytest

from affcrawl.driver import TraceFailure, TraceResult
from affcrawl.jobs import CrawlJob, VideoInfo
from affcrawl.runner import Failure, append_locked, crawl_job, run

VIDEO = {
    "channel_id": "chan01",
    "upload_date": "2023-05-01",
    "category": "Howto & Style",
    "subscriber_count": 52_000,
    "source_tag": "Random",
    "description_text": "links below",
    "language_tag": "en",
}


def cli(*args):
    return subprocess.run([sys.executable, "-m", "affcrawl", *args],
                          capture_output=True, text=True)


def audit_ingest_strict(path):
    return subprocess.run([sys.executable, "-m", "affaudit", "ingest", str(path), "--strict"],
                          capture_output=True, text=True)


def write_jobs(path, jobs):
    path.write_text(json.dumps(jobs), encoding="utf-8")
    return path


def job_dict(video_id, urls, **extra):
    return {"video_id": video_id, "urls": urls, "video": dict(VIDEO), **extra}


def read_lines(path):
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]


@pytest.fixture(scope="module")
def workspace(server, tmp_path_factory):
    """One CLI crawl over a chain job, a duplicate-URL job, and a meta job."""
    root = tmp_path_factory.mktemp("crawlrun")
    jobs_path = write_jobs(root / "jobs.json", [
        job_dict("vid-chain", [f"{server.base_url}/chain/start"]),
        job_dict("vid-dedup", [f"{server.base_url}/once", f"{server.base_url}/once"]),
        job_dict("vid-meta", [f"{server.base_url}/meta"]),
    ])
    out = root / "crawl.log"
    proc = cli("--jobs", str(jobs_path), "--out", str(out),
               "--delay", "1", "--timeout", "5")
    return {"root": root, "out": out, "proc": proc, "lines": read_lines(out)}


class TestCliRun:
    def test_clean_run_exits_zero_and_reports_counts(self, workspace):
        proc = workspace["proc"]
        assert proc.returncode == 0, proc.stderr
        assert "records: 3" in proc.stdout
        assert "failures: 0" in proc.stdout

    def test_each_job_emits_its_video_line_before_its_records(self, workspace):
        kinds = [(line["kind"], line["video_id"]) for line in workspace["lines"]]
        assert kinds == [
            ("video", "vid-chain"), ("crawl", "vid-chain"),
            ("video", "vid-dedup"), ("crawl", "vid-dedup"),
            ("video", "vid-meta"), ("crawl", "vid-meta"),
        ]

    def test_two_hop_chain_is_recorded_with_chain_length_three(self, workspace, server):
        (record,) = [l for l in workspace["lines"]
                     if l["kind"] == "crawl" and l["video_id"] == "vid-chain"]
        assert len(record["redirects"]) == 2
        chain = [record["original_url"]] + [h["target_url"] for h in record["redirects"]]
        assert len(chain) == 3
        assert record["landing_url"] == chain[-1]
        assert record["original_url"] == f"{server.base_url}/chain/start"
        assert {e["storage_key"] for e in record["storage_events"]} == {
            "aff_session", "click_id",
        }

    def test_emitted_log_passes_strict_ingest_with_zero_violations(self, workspace):
        proc = audit_ingest_strict(workspace["out"])
        assert proc.returncode == 0, proc.stderr
        assert "violations: 0" in proc.stdout
        assert "videos: 3" in proc.stdout
        assert "records: 3" in proc.stdout

    def test_duplicate_url_in_a_job_is_fetched_once(self, workspace, server):
        assert server.count("/once") == 1
        dedup_records = [l for l in workspace["lines"]
                         if l["kind"] == "crawl" and l["video_id"] == "vid-dedup"]
        assert len(dedup_records) == 1

    def test_meta_refresh_hop_appears_in_the_log(self, workspace):
        (record,) = [l for l in workspace["lines"]
                     if l["kind"] == "crawl" and l["video_id"] == "vid-meta"]
        assert [h["status_class"] for h in record["redirects"]] == ["MetaRefresh"]

    def test_link_ids_are_unique(self, workspace):
        ids = [l["link_id"] for l in workspace["lines"] if l["kind"] == "crawl"]
        assert len(set(ids)) == len(ids)

    def test_no_error_log_when_nothing_failed(self, workspace):
        assert not (workspace["root"] / "crawl.log.errors").exists()


class TestCliFailures:
    def test_failed_urls_are_logged_but_never_emitted(self, server, tmp_path):
        jobs_path = write_jobs(tmp_path / "jobs.json", [
            job_dict("vid-fail", [f"{server.base_url}/loop/a", f"{server.base_url}/plain"]),
        ])
        out = tmp_path / "crawl.log"
        proc = cli("--jobs", str(jobs_path), "--out", str(out),
                   "--delay", "1", "--timeout", "5")
        assert proc.returncode == 1
        assert "loop" in proc.stderr
        lines = read_lines(out)
        assert [l["kind"] for l in lines] == ["video", "crawl"]
        assert lines[1]["original_url"] == f"{server.base_url}/plain"
        error_log = (tmp_path / "crawl.log.errors").read_text(encoding="utf-8")
        assert "vid-fail" in error_log and "loop" in error_log
        assert audit_ingest_strict(out).returncode == 0

    def test_malformed_jobs_file_exits_two(self, tmp_path):
        bad = tmp_path / "jobs.json"
        bad.write_text("{broken", encoding="utf-8")
        proc = cli("--jobs", str(bad), "--out", str(tmp_path / "crawl.log"))
        assert proc.returncode == 2
        assert "error:" in proc.stderr

    def test_delay_below_minimum_exits_two(self, server, tmp_path):
        jobs_path = write_jobs(tmp_path / "jobs.json",
                               [job_dict("vid-x", [f"{server.base_url}/plain"])])
        proc = cli("--jobs", str(jobs_path), "--out", str(tmp_path / "crawl.log"),
                   "--delay", "0.2")
        assert proc.returncode == 2
        assert "politeness_delay" in proc.stderr


class TestAppendSharing:
    def test_two_runs_append_into_one_strict_valid_log(self, server, tmp_path):
        out = tmp_path / "crawl.log"
        for batch, video_id in (("a", "vid-a"), ("b", "vid-b")):
            jobs_path = write_jobs(tmp_path / f"jobs_{batch}.json",
                                   [job_dict(video_id, [f"{server.base_url}/plain"])])
            proc = cli("--jobs", str(jobs_path), "--out", str(out),
                       "--delay", "1", "--timeout", "5")
            assert proc.returncode == 0, proc.stderr
        lines = read_lines(out)
        assert len(lines) == 4
        proc = audit_ingest_strict(out)
        assert proc.returncode == 0
        assert "videos: 2" in proc.stdout

    def test_append_locked_writes_complete_lines(self, tmp_path):
        path = tmp_path / "sink.log"
        append_locked(path, ["one", "two"])
        append_locked(path, ["three"])
        assert path.read_text(encoding="utf-8") == "one\ntwo\nthree\n"


def make_job(video_id, urls, delay=1.0):
    return CrawlJob(video_id=video_id, urls=tuple(urls), video=VideoInfo(**VIDEO),
                    politeness_delay=delay, timeout=5.0, max_chain_hops=10)


def fake_driver(result_for):
    def drive(url, timeout, max_chain_hops):
        outcome = result_for[url]
        if isinstance(outcome, Exception):
            raise outcome
        return outcome

    return drive


def landed(url):
    return TraceResult(original_url=url, landing_url=url)


class TestRunnerUnits:
    def test_politeness_delay_runs_before_every_visit_except_the_first(self):
        sleeps = []
        jobs = [make_job("v1", ["http://x.example/1", "http://x.example/2"], delay=1.0),
                make_job("v2", ["http://x.example/3", "http://x.example/4"], delay=1.5)]
        driver = fake_driver({f"http://x.example/{i}": landed(f"http://x.example/{i}")
                              for i in range(1, 5)})
        summary = run(jobs, "/dev/null", "/dev/null", driver=driver, sleep=sleeps.append)
        assert sleeps == [1.0, 1.5, 1.5]
        assert summary.records_written == 4

    def test_failure_produces_no_record_but_keeps_the_video_line(self):
        job = make_job("v1", ["http://x.example/ok", "http://x.example/bad"])
        driver = fake_driver({
            "http://x.example/ok": landed("http://x.example/ok"),
            "http://x.example/bad": TraceFailure("timed out after 5s"),
        })
        lines, failures = crawl_job(job, driver=driver, sleep=lambda _: None)
        assert [l["kind"] for l in lines] == ["video", "crawl"]
        assert failures == [Failure("v1", "http://x.example/bad", "timed out after 5s")]

    def test_job_with_no_urls_emits_only_its_video_line(self):
        lines, failures = crawl_job(make_job("v1", []), driver=fake_driver({}),
                                    sleep=lambda _: None)
        assert [l["kind"] for l in lines] == ["video"]
        assert failures == []

    def test_link_ids_follow_the_video_id_and_position(self):
        job = make_job("v9", ["http://x.example/1", "http://x.example/2"])
        driver = fake_driver({f"http://x.example/{i}": landed(f"http://x.example/{i}")
                              for i in (1, 2)})
        lines, _ = crawl_job(job, driver=driver, sleep=lambda _: None)
        assert [l["link_id"] for l in lines if l["kind"] == "crawl"] == [
            "v9-l000", "v9-l001",
        ]
