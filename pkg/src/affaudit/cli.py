"""Command-line umbrella.

Subcommands mirror the pipeline stages plus corpus generation and effect
estimation. Exit codes: 0 success, 1 schema violations found, 2 operational
failure (stage-tagged on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from enum import Enum
from pathlib import Path

import numpy as np

from .compliance import compute_metrics, read_records, reports_to_csv, reports_to_table
from .crawl_model import IngestError, extract_hyperlinks, ingest_corpus
from .disclosure import aggregate_video_labels, detect_disclosures, get_classifier, segment_sentences
from .features import extract_features, feature_matrix
from .fixtures import GeneratorSpec, generate_corpus, write_generated
from .forest import DEFAULT_GRID, REDUCED_GRID, load_model, predict, save_model, train_forest
from .interaction_graph import build_graph, graph_to_dict
from .pattern_labeler import default_registry, label_corpus, load_registry
from .pipeline import RunConfig, StageError, run_pipeline
from .stats import EffectMetric, StratifiedSampleSpec, bootstrap_effect, stratified_sample
from .urltools import UrlError, normalize_url

_FIELD_ALIASES = {"tier": "channel_tier", "source": "source_tag"}


def _canon_field(name: str) -> str:
    return _FIELD_ALIASES.get(name, name)


def _group_by(arg: str) -> tuple[str, ...]:
    return tuple(_canon_field(part.strip()) for part in arg.split(",") if part.strip())


def _load_corpus(args):
    return ingest_corpus(args.corpus, strict=getattr(args, "strict", False))


def _registry(args):
    return load_registry(args.registry) if getattr(args, "registry", None) else default_registry()


def _cmd_ingest(args) -> int:
    try:
        corpus, violations = ingest_corpus(args.corpus, strict=args.strict)
    except IngestError as exc:
        print(f"[ingest] {exc}", file=sys.stderr)
        return 1
    print(f"videos: {len(corpus.videos)}")
    print(f"records: {len(corpus.records)}")
    print(f"violations: {len(violations)}")
    for violation in violations:
        print(f"  {violation}")
    return 1 if violations else 0


def _cmd_label(args) -> int:
    corpus, _ = _load_corpus(args)
    labels, coverage = label_corpus(corpus, _registry(args))
    counts: dict[str, int] = {}
    for label in labels.values():
        counts[label.value] = counts.get(label.value, 0) + 1
    payload = {
        "coverage": coverage,
        "counts": dict(sorted(counts.items())),
        "labels": {k: v.value for k, v in sorted(labels.items())},
    }
    if args.out:
        Path(args.out).write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n",
                                  encoding="utf-8")
        print(f"wrote {args.out}")
    print(f"coverage: {coverage:.4f}")
    for name, count in sorted(counts.items()):
        print(f"  {name}: {count}")
    return 0


def _cmd_graph(args) -> int:
    corpus, _ = _load_corpus(args)
    total_nodes = total_edges = 0
    with open(args.out, "w", encoding="utf-8") as fh:
        for record in corpus.records:
            graph = build_graph(record)
            total_nodes += len(graph.nodes)
            total_edges += len(graph.edges)
            fh.write(json.dumps({"link_id": record.link_id, "graph": graph_to_dict(graph)},
                                sort_keys=True) + "\n")
    print(f"graphs: {len(corpus.records)}  nodes: {total_nodes}  edges: {total_edges}")
    print(f"wrote {args.out}")
    return 0


def _truth_labels(path: str) -> dict[str, bool]:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return {k: bool(v) for k, v in payload["links"].items()}


def _cmd_train(args) -> int:
    corpus, _ = _load_corpus(args)
    vectors = {r.link_id: extract_features(build_graph(r)) for r in corpus.records}
    if args.truth:
        truth = _truth_labels(args.truth)
        ids = [r.link_id for r in corpus.records if r.link_id in truth]
        y = np.array([int(truth[i]) for i in ids])
    else:
        labels, _ = label_corpus(corpus, _registry(args))
        ids = [r.link_id for r in corpus.records if labels[r.link_id].value != "Unknown"]
        y = np.array([int(labels[i].value == "KnownAffiliate") for i in ids])
    if len(ids) == 0 or len(set(y.tolist())) < 2:
        print("[train] need labeled links of both classes", file=sys.stderr)
        return 2
    X = feature_matrix([vectors[i] for i in ids])
    grid = REDUCED_GRID if args.grid == "reduced" else DEFAULT_GRID
    model, report = train_forest(X, y, grid=grid, seed=args.seed, n_folds=args.folds)
    save_model(model, args.out)
    mean_f1 = sum(f.f1 for f in report.folds) / len(report.folds)
    chosen = report.chosen
    print(f"chosen: n_trees={chosen.n_trees} max_depth={chosen.max_depth} "
          f"min_samples_leaf={chosen.min_samples_leaf}")
    print(f"cv mean F1: {mean_f1:.4f} over {len(report.folds)} folds ({len(ids)} links)")
    print(f"wrote {args.out}")
    return 0


def _cmd_classify(args) -> int:
    corpus, _ = _load_corpus(args)
    model = load_model(args.model)
    labels, _ = label_corpus(corpus, _registry(args))
    verdicts = {}
    for record in corpus.records:
        label = labels[record.link_id]
        if label.value == "KnownAffiliate":
            verdicts[record.link_id] = {"verdict": "KnownAffiliate", "score": 1.0,
                                        "provenance": "pattern"}
        elif label.value == "KnownNonAffiliate":
            verdicts[record.link_id] = {"verdict": "KnownNonAffiliate", "score": 0.0,
                                        "provenance": "pattern"}
        else:
            name, score = predict(model, extract_features(build_graph(record)))
            verdict = "PredictedAffiliate" if name == "Affiliate" else "PredictedNonAffiliate"
            verdicts[record.link_id] = {"verdict": verdict, "score": score,
                                        "provenance": "classifier"}
    text = json.dumps(verdicts, sort_keys=True, indent=1) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        print(text, end="")
    return 0


def _cmd_disclose(args) -> int:
    corpus, _ = _load_corpus(args)
    classifier = get_classifier(args.classifier)
    affiliate_urls: dict[str, set] = {}
    if args.verdicts:
        verdicts = json.loads(Path(args.verdicts).read_text(encoding="utf-8"))
        for record in corpus.records:
            entry = verdicts.get(record.link_id)
            if entry and entry["verdict"] in ("KnownAffiliate", "PredictedAffiliate"):
                affiliate_urls.setdefault(record.video_id, set()).add(record.original_url)
    else:
        labels, _ = label_corpus(corpus, _registry(args))
        for record in corpus.records:
            if labels[record.link_id].value == "KnownAffiliate":
                affiliate_urls.setdefault(record.video_id, set()).add(record.original_url)

    rows = []
    for video_id, video in corpus.videos.items():
        text = video.description_text
        links = []
        for url, offset in extract_hyperlinks(text):
            try:
                normalized = normalize_url(url)
            except UrlError:
                continue
            links.append((url, offset, normalized in affiliate_urls.get(video_id, set())))
        segments = detect_disclosures(segment_sentences(text), classifier,
                                      links=links, text=text)
        aggregate = aggregate_video_labels(segments)
        rows.append({
            "video_id": video_id,
            "video_compensation": aggregate[0].value if aggregate else None,
            "video_relationship": aggregate[1].value if aggregate else None,
            "segments": [{
                "text": s.text,
                "compensation": s.compensation.value,
                "relationship": s.relationship.value,
                "relationship_vacuous": s.relationship_vacuous,
                "char_span": list(s.char_span),
            } for s in segments],
        })
    text_out = "".join(json.dumps(row, sort_keys=True) + "\n" for row in rows)
    if args.out:
        Path(args.out).write_text(text_out, encoding="utf-8")
        print(f"wrote {args.out} ({len(rows)} videos)")
    else:
        print(text_out, end="")
    return 0


def _cmd_report(args) -> int:
    records = read_records(args.records)
    if not records:
        print("[report] no records in input", file=sys.stderr)
        return 2
    reports = compute_metrics(records, _group_by(args.group_by) if args.group_by else ())
    if args.out:
        Path(args.out).write_text(reports_to_csv(reports), encoding="utf-8")
        print(f"wrote {args.out}")
    print(reports_to_table(reports), end="")
    return 0


def _value_str(record, field: str) -> str:
    value = getattr(record, field)
    if isinstance(value, Enum):
        value = value.value
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _cmd_effect(args) -> int:
    records = read_records(args.records)
    field = _canon_field(args.split_on)
    set_a = {v.strip() for v in args.group_a.split(",") if v.strip()}
    set_b = {v.strip() for v in args.group_b.split(",") if v.strip()}
    group_a = [r for r in records if _value_str(r, field) in set_a]
    group_b = [r for r in records if _value_str(r, field) in set_b]
    if args.strata:
        spec = StratifiedSampleSpec(
            strata_fields=_group_by(args.strata), quota=args.quota, seed=args.seed)
        group_a, dropped_a = stratified_sample(group_a, spec)
        group_b, dropped_b = stratified_sample(group_b, spec)
        for name, dropped in (("a", dropped_a), ("b", dropped_b)):
            for stratum in dropped:
                if not stratum.sampled:
                    print(f"group {name}: stratum {stratum.key} has {stratum.size} "
                          f"< quota {args.quota}, dropped", file=sys.stderr)
    estimate = bootstrap_effect(group_a, group_b, EffectMetric(args.metric),
                                n_boot=args.n_boot, seed=args.seed)
    print(json.dumps({
        "metric": estimate.metric,
        "split_on": field,
        "group_a": sorted(set_a),
        "group_b": sorted(set_b),
        "delta": estimate.delta,
        "ci_low": estimate.ci_low,
        "ci_high": estimate.ci_high,
        "significant": estimate.significant,
        "n_boot": estimate.n_boot,
        "n_a": estimate.n_a,
        "n_b": estimate.n_b,
    }, sort_keys=True, indent=1))
    return 0


def _cmd_gen(args) -> int:
    spec = GeneratorSpec(seed=args.seed, n_videos=args.n_videos,
                         affiliate_video_rate=args.affiliate_rate)
    generated = generate_corpus(spec)
    corpus_path, truth_path = write_generated(generated, args.out_dir)
    print(f"wrote {corpus_path} ({len(generated.corpus.videos)} videos, "
          f"{len(generated.corpus.records)} records)")
    print(f"wrote {truth_path}")
    return 0


def _cmd_run(args) -> int:
    if args.config:
        config = RunConfig.from_file(args.config)
    else:
        config = RunConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.model:
        overrides["model_path"] = args.model
    if args.registry:
        overrides["registry_path"] = args.registry
    if args.group_by:
        overrides["group_by"] = _group_by(args.group_by)
    if args.grid:
        overrides["grid"] = args.grid
    if overrides:
        config = RunConfig.from_dict({**config.to_dict(), **overrides,
                                      "group_by": list(overrides.get("group_by", config.group_by))})
    manifest = run_pipeline(args.corpus, config, args.out_dir)
    print(f"run complete: {len(manifest['artifacts'])} artifacts in {args.out_dir}")
    print(f"corpus: {manifest['corpus']['n_videos']} videos, "
          f"{manifest['corpus']['n_records']} records, "
          f"{manifest['corpus']['n_violations']} violations")
    print(f"manifest: {Path(args.out_dir) / 'manifest.json'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="affaudit",
        description="Audit affiliate links and disclosure clarity in crawl logs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate a crawl-log file")
    p.add_argument("corpus")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(fn=_cmd_ingest)

    p = sub.add_parser("label", help="pattern-registry labels per link")
    p.add_argument("corpus")
    p.add_argument("--registry")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_label)

    p = sub.add_parser("graph", help="build interaction graphs")
    p.add_argument("corpus")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_graph)

    p = sub.add_parser("train", help="train the forest classifier")
    p.add_argument("corpus")
    p.add_argument("--truth", help="truth labels JSON; defaults to pattern labels")
    p.add_argument("--registry")
    p.add_argument("--grid", choices=("reduced", "full"), default="reduced")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_train)

    p = sub.add_parser("classify", help="apply a trained model")
    p.add_argument("corpus")
    p.add_argument("--model", required=True)
    p.add_argument("--registry")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("disclose", help="detect and label disclosures")
    p.add_argument("corpus")
    p.add_argument("--classifier", default="rules",
                   help="rules, keywords, or external:<command>")
    p.add_argument("--registry")
    p.add_argument("--verdicts", help="verdicts JSON from classify")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_disclose)

    p = sub.add_parser("report", help="prevalence/compliance metrics")
    p.add_argument("--records", required=True)
    p.add_argument("--group-by", default="")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_report)

    p = sub.add_parser("effect", help="bootstrap effect between record groups")
    p.add_argument("--records", required=True)
    p.add_argument("--split-on", required=True)
    p.add_argument("--group-a", required=True, help="comma-separated field values")
    p.add_argument("--group-b", required=True, help="comma-separated field values")
    p.add_argument("--metric", choices=("CC", "PC", "NC"), default="CC")
    p.add_argument("--n-boot", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strata", help="comma-separated stratum fields")
    p.add_argument("--quota", type=int, default=50)
    p.set_defaults(fn=_cmd_effect)

    p = sub.add_parser("gen", help="generate a synthetic corpus with truth labels")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--n-videos", type=int, default=600)
    p.add_argument("--affiliate-rate", type=float, default=0.55)
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("run", help="full pipeline over one corpus")
    p.add_argument("corpus")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--seed", type=int)
    p.add_argument("--model")
    p.add_argument("--registry")
    p.add_argument("--group-by")
    p.add_argument("--grid", choices=("reduced", "full"))
    p.set_defaults(fn=_cmd_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except StageError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except (OSError, ValueError, IngestError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
