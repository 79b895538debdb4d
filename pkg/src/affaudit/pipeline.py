"""End-to-end run driver.

Stage order: ingest, label, graph, features, classify, disclose, metrics,
stats. Every artifact lands in one run directory and is checksummed into
manifest.json (written last), so two runs agree byte-for-byte exactly when
their manifests agree. Any stage failure raises StageError carrying the stage
name and, where known, the offending record id.

Link verdicts: pattern-registry hits are Known*, the forest decides the rest.
A link the registry cannot label and whose record carries no behavioral
evidence at all (no redirects, storage events, DOM hooks, or JS calls) is
Unresolvable; it counts as non-affiliate in the metrics.
"""

from __future__ import annotations

import hashlib
import json
from contextlib import contextmanager
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from . import SCHEMA_VERSION, __version__
from .compliance import (
    ChannelTier,
    ComplianceStatus,
    Period,
    VideoComplianceRecord,
    compensation_status,
    compute_metrics,
    make_record,
    relationship_status,
    reports_to_csv,
    reports_to_table,
    write_records,
)
from .crawl_model import Corpus, CrawlRecord, extract_hyperlinks, ingest_corpus
from .disclosure import aggregate_video_labels, detect_disclosures, get_classifier, segment_sentences
from .features import FEATURE_NAMES, FEATURE_SCHEMA_VERSION, FeatureVector, extract_features
from .forest import DEFAULT_GRID, REDUCED_GRID, load_model, model_to_dict, predict, train_forest
from .interaction_graph import build_graph, graph_to_dict
from .pattern_labeler import Phase1Label, default_registry, label_corpus, load_registry
from .stats import welch_ttest, ztest_proportions
from .urltools import UrlError, landing_domain, normalize_url

STAGES = ("ingest", "label", "graph", "features", "classify", "disclose", "metrics", "stats")


class LinkVerdict(str, Enum):
    KnownAffiliate = "KnownAffiliate"
    KnownNonAffiliate = "KnownNonAffiliate"
    PredictedAffiliate = "PredictedAffiliate"
    PredictedNonAffiliate = "PredictedNonAffiliate"
    Unresolvable = "Unresolvable"


AFFILIATE_VERDICTS = frozenset({LinkVerdict.KnownAffiliate, LinkVerdict.PredictedAffiliate})


class StageError(RuntimeError):
    """A pipeline stage failed; message carries stage and offending record."""

    def __init__(self, stage: str, message: str, record_id: str | None = None):
        self.stage = stage
        self.record_id = record_id
        at = f" (record {record_id})" if record_id else ""
        super().__init__(f"[{stage}]{at} {message}")


@dataclass(frozen=True, slots=True)
class RunConfig:
    seed: int = 0
    registry_path: str | None = None
    model_path: str | None = None
    classifier_spec: str = "rules"
    group_by: tuple[str, ...] = ("category",)
    grid: str = "reduced"
    n_folds: int = 3
    strict_ingest: bool = True

    def __post_init__(self):
        if self.grid not in ("reduced", "full"):
            raise ValueError("grid must be 'reduced' or 'full'")
        if self.n_folds < 2:
            raise ValueError("n_folds must be at least 2")

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "registry_path": self.registry_path,
            "model_path": self.model_path,
            "classifier_spec": self.classifier_spec,
            "group_by": list(self.group_by),
            "grid": self.grid,
            "n_folds": self.n_folds,
            "strict_ingest": self.strict_ingest,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        allowed = set(cls.__dataclass_fields__)
        unknown = set(data) - allowed
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "group_by" in data:
            data = {**data, "group_by": tuple(data["group_by"])}
        return cls(**data)

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _sha256_file(path: Path) -> str:
    return _sha256_bytes(path.read_bytes())


@contextmanager
def _stage(name: str):
    try:
        yield
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, str(exc)) from exc


class _RunDir:
    """Artifact writer that remembers every checksum for the manifest."""

    def __init__(self, out_dir: str | Path):
        self.root = Path(out_dir)
        self.root.mkdir(parents=True, exist_ok=True)
        self.checksums: dict[str, str] = {}

    def write_text(self, name: str, text: str) -> None:
        data = text.encode("utf-8")
        (self.root / name).write_bytes(data)
        self.checksums[name] = _sha256_bytes(data)

    def write_json(self, name: str, obj) -> None:
        self.write_text(name, json.dumps(obj, sort_keys=True, indent=1) + "\n")

    def write_jsonl(self, name: str, rows) -> None:
        self.write_text(name, "".join(json.dumps(row, sort_keys=True) + "\n" for row in rows))


def _feature_row(fv: FeatureVector) -> dict:
    return {"link_id": fv.link_id, **{name: getattr(fv, name) for name in FEATURE_NAMES}}


def _train_from_phase1(
    records: list[CrawlRecord],
    labels: dict[str, Phase1Label],
    feature_vectors: dict[str, FeatureVector],
    config: RunConfig,
):
    """Model trained on pattern-labeled links, or None when infeasible."""
    rows, targets = [], []
    for record in records:
        label = labels[record.link_id]
        if label is Phase1Label.KnownAffiliate:
            targets.append(1)
        elif label is Phase1Label.KnownNonAffiliate:
            targets.append(0)
        else:
            continue
        rows.append(feature_vectors[record.link_id].to_array())
    if not rows:
        return None, None
    y = np.array(targets)
    # each class must be able to appear in every CV fold
    if min((y == 1).sum(), (y == 0).sum()) < config.n_folds:
        return None, None
    grid = REDUCED_GRID if config.grid == "reduced" else DEFAULT_GRID
    return train_forest(np.vstack(rows), y, grid=grid, seed=config.seed, n_folds=config.n_folds)


def _has_evidence(record: CrawlRecord) -> bool:
    return bool(record.redirects or record.storage_events or record.dom_hooks or record.js_calls)


def _decide_verdicts(
    records: list[CrawlRecord],
    labels: dict[str, Phase1Label],
    feature_vectors: dict[str, FeatureVector],
    model,
) -> dict[str, dict]:
    verdicts: dict[str, dict] = {}
    for record in records:
        label = labels[record.link_id]
        if label is Phase1Label.KnownAffiliate:
            verdict, score, source = LinkVerdict.KnownAffiliate, 1.0, "pattern"
        elif label is Phase1Label.KnownNonAffiliate:
            verdict, score, source = LinkVerdict.KnownNonAffiliate, 0.0, "pattern"
        elif model is not None and _has_evidence(record):
            name, score = predict(model, feature_vectors[record.link_id])
            verdict = LinkVerdict.PredictedAffiliate if name == "Affiliate" \
                else LinkVerdict.PredictedNonAffiliate
            source = "classifier"
        else:
            verdict, score, source = LinkVerdict.Unresolvable, None, "none"
        verdicts[record.link_id] = {
            "verdict": verdict.value,
            "score": score,
            "provenance": source,
        }
    return verdicts


def _video_partner(affiliate_records: list[CrawlRecord]) -> str:
    if not affiliate_records:
        return ""
    for record in affiliate_records:
        domain = landing_domain(record.landing_url)
        if domain == "amazon.com" or domain.startswith("amazon."):
            return "amazon"
    return "network"


def _build_video_records(
    corpus: Corpus,
    verdicts: dict[str, dict],
    classifier_spec: str,
) -> tuple[list[VideoComplianceRecord], list[dict]]:
    classifier = get_classifier(classifier_spec)
    by_video: dict[str, list[CrawlRecord]] = {}
    for record in corpus.records:
        by_video.setdefault(record.video_id, []).append(record)

    records_out: list[VideoComplianceRecord] = []
    disclosure_rows: list[dict] = []
    for video_id, video in corpus.videos.items():
        try:
            record, disclosure_row = _process_video(
                video_id, video, by_video.get(video_id, []), verdicts, classifier)
        except Exception as exc:
            raise StageError("disclose", str(exc), record_id=video_id) from exc
        records_out.append(record)
        disclosure_rows.append(disclosure_row)
    return records_out, disclosure_rows


def _process_video(video_id, video, crawls, verdicts, classifier):
    """(VideoComplianceRecord, disclosure artifact row) for one video."""
    affiliate_of: dict[str, bool] = {}
    total_urls, affiliate_urls = set(), set()
    affiliate_crawls = []
    for crawl in crawls:
        is_affiliate = verdicts[crawl.link_id]["verdict"] in (
            LinkVerdict.KnownAffiliate.value, LinkVerdict.PredictedAffiliate.value)
        affiliate_of[crawl.original_url] = affiliate_of.get(crawl.original_url, False) or is_affiliate
        total_urls.add(crawl.original_url)
        if is_affiliate:
            affiliate_urls.add(crawl.original_url)
            affiliate_crawls.append(crawl)

    text = video.description_text
    links = []
    for url, offset in extract_hyperlinks(text):
        try:
            normalized = normalize_url(url)
        except UrlError:
            continue
        links.append((url, offset, affiliate_of.get(normalized, False)))
    # disclosure analysis covers English descriptions only
    english = video.language_tag.lower().startswith("en")
    if english:
        segments = detect_disclosures(
            segment_sentences(text), classifier, links=links, text=text)
    else:
        segments = []
    disclosure_row = {
        "video_id": video_id,
        "language_skipped": not english,
        "segments": [{
            "sentence_indexes": list(s.sentence_indexes),
            "text": s.text,
            "compensation": s.compensation.value,
            "relationship": s.relationship.value,
            "relationship_vacuous": s.relationship_vacuous,
            "char_span": list(s.char_span),
        } for s in segments],
    }

    aggregate = aggregate_video_labels(segments)
    compensation = compensation_status(aggregate[0] if aggregate else None)
    relationship = relationship_status(aggregate[1] if aggregate else None)
    record = make_record(
        video_id=video_id,
        channel_id=video.channel_id,
        affiliate_link_count=len(affiliate_urls),
        total_link_count=len(total_urls),
        compensation=compensation,
        relationship=relationship,
        category=video.category,
        subscriber_count=video.subscriber_count,
        source_tag=video.source_tag,
        upload_date=video.upload_date,
        partner=_video_partner(affiliate_crawls),
    )
    return record, disclosure_row


def _stats_summary(records: list[VideoComplianceRecord], verdicts: dict[str, dict]) -> dict:
    verdict_counts: dict[str, int] = {}
    for entry in verdicts.values():
        verdict_counts[entry["verdict"]] = verdict_counts.get(entry["verdict"], 0) + 1
    summary: dict = {"verdict_counts": dict(sorted(verdict_counts.items()))}

    affiliate = [r for r in records if r.is_affiliate_video]
    pre = [r for r in affiliate if r.period is Period.Pre2018]
    post = [r for r in affiliate if r.period is Period.Post2018]
    if pre and post:
        result = ztest_proportions(
            sum(1 for r in pre if r.status is ComplianceStatus.CC), len(pre),
            sum(1 for r in post if r.status is ComplianceStatus.CC), len(post))
        summary["cc_share_pre_vs_post_2018"] = {
            "z": result.z, "p": result.p, "degenerate": result.degenerate,
            "n_pre": len(pre), "n_post": len(post),
        }
    t1 = [float(r.affiliate_link_count) for r in affiliate if r.channel_tier is ChannelTier.T1]
    t3 = [float(r.affiliate_link_count) for r in affiliate if r.channel_tier is ChannelTier.T3]
    if len(t1) >= 2 and len(t3) >= 2:
        try:
            result = welch_ttest(t1, t3)
            summary["nalpv_t1_vs_t3"] = {
                "t": result.t, "df": result.df, "p": result.p,
                "n_t1": len(t1), "n_t3": len(t3),
            }
        except ValueError as exc:
            summary["nalpv_t1_vs_t3"] = {"skipped": str(exc)}
    return summary


def run_pipeline(corpus_path: str | Path, config: RunConfig, out_dir: str | Path) -> dict:
    """Execute all stages over one corpus file; returns the manifest."""
    corpus_path = Path(corpus_path)
    run_dir = _RunDir(out_dir)

    with _stage("ingest"):
        corpus, violations = ingest_corpus(corpus_path, strict=config.strict_ingest)
        run_dir.write_json("violations.json", [{
            "line_no": v.line_no, "field_path": v.field_path, "message": v.message,
        } for v in violations])

    with _stage("label"):
        registry = load_registry(config.registry_path) if config.registry_path \
            else default_registry()
        labels, coverage = label_corpus(corpus, registry)
        run_dir.write_json("phase1_labels.json", {
            "coverage": coverage,
            "labels": {link_id: label.value for link_id, label in sorted(labels.items())},
        })

    graphs: dict[str, object] = {}
    graph_rows = []
    for record in corpus.records:
        try:
            graphs[record.link_id] = build_graph(record)
        except Exception as exc:
            raise StageError("graph", str(exc), record_id=record.link_id) from exc
        graph_rows.append({"link_id": record.link_id,
                           "graph": graph_to_dict(graphs[record.link_id])})
    with _stage("graph"):
        run_dir.write_jsonl("graphs.jsonl", graph_rows)

    feature_vectors: dict[str, FeatureVector] = {}
    for record in corpus.records:
        try:
            feature_vectors[record.link_id] = extract_features(graphs[record.link_id])
        except Exception as exc:
            raise StageError("features", str(exc), record_id=record.link_id) from exc
    with _stage("features"):
        run_dir.write_jsonl(
            "features.jsonl", [_feature_row(feature_vectors[r.link_id]) for r in corpus.records])

    with _stage("classify"):
        model_source = "none"
        cv_report = None
        if config.model_path:
            model = load_model(config.model_path)
            model_source = "provided"
        else:
            model, cv_report = _train_from_phase1(
                corpus.records, labels, feature_vectors, config)
            if model is not None:
                model_source = "trained"
                run_dir.write_json("model.json", model_to_dict(model))
                run_dir.write_json("cv_report.json", {
                    "chosen": {
                        "n_trees": cv_report.chosen.n_trees,
                        "max_depth": cv_report.chosen.max_depth,
                        "min_samples_leaf": cv_report.chosen.min_samples_leaf,
                    },
                    "fold_f1": [fold.f1 for fold in cv_report.folds],
                })
        verdicts = _decide_verdicts(corpus.records, labels, feature_vectors, model)
        run_dir.write_json("verdicts.json", verdicts)

    with _stage("disclose"):
        records, disclosure_rows = _build_video_records(
            corpus, verdicts, config.classifier_spec)
        run_dir.write_jsonl("disclosures.jsonl", disclosure_rows)
        write_records(records, run_dir.root / "video_records.jsonl")
        run_dir.checksums["video_records.jsonl"] = _sha256_file(
            run_dir.root / "video_records.jsonl")

    with _stage("metrics"):
        if records:
            overall = compute_metrics(records, ())
            grouped = compute_metrics(records, config.group_by)
        else:
            overall, grouped = [], []
        run_dir.write_text("report_overall.csv", reports_to_csv(overall))
        run_dir.write_text("report.csv", reports_to_csv(grouped))
        run_dir.write_text("report.txt", reports_to_table(grouped) if grouped else "")

    with _stage("stats"):
        run_dir.write_json("stats_summary.json", _stats_summary(records, verdicts))

    registry_sha = _sha256_file(Path(config.registry_path)) if config.registry_path \
        else _sha256_bytes(_default_registry_bytes())
    model_sha = None
    if config.model_path:
        model_sha = _sha256_file(Path(config.model_path))
    elif "model.json" in run_dir.checksums:
        model_sha = run_dir.checksums["model.json"]
    manifest = {
        "artifacts": dict(sorted(run_dir.checksums.items())),
        "config": config.to_dict(),
        "corpus": {
            "name": corpus_path.name,
            "sha256": _sha256_file(corpus_path),
            "n_videos": len(corpus.videos),
            "n_records": len(corpus.records),
            "n_violations": len(violations),
        },
        "model": {"source": model_source, "sha256": model_sha},
        "registry_sha256": registry_sha,
        "seeds": {"train_seed": config.seed},
        "versions": {
            "package": __version__,
            "schema_version": SCHEMA_VERSION,
            "feature_schema_version": FEATURE_SCHEMA_VERSION,
        },
    }
    run_dir.write_json("manifest.json", manifest)
    return manifest


def _default_registry_bytes() -> bytes:
    from importlib import resources

    return resources.files("affaudit").joinpath("data/default_registry.json").read_bytes()
