#!/usr/bin/env python3
"""Holdout evaluation of the link classifier against the pattern baseline.

Generates a corpus, splits it 60/20/20 with the unseen-domain protocol,
trains the forest on the training portion's truth labels, and prints
precision/recall/F1 on both holdouts next to the URL-pattern baseline.
"""

from __future__ import annotations

import argparse

import numpy as np

from affaudit.features import extract_features, feature_matrix
from affaudit.fixtures import GeneratorSpec, generate_corpus
from affaudit.forest import (
    DEFAULT_GRID,
    REDUCED_GRID,
    precision_recall_f1,
    predict_batch,
    train_forest,
)
from affaudit.interaction_graph import build_graph
from affaudit.pattern_labeler import Phase1Label, default_registry, label_url
from affaudit.splits import make_split
from affaudit.urltools import landing_domain


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=17)
    parser.add_argument("--n-videos", type=int, default=720)
    parser.add_argument("--grid", choices=("reduced", "full"), default="reduced")
    parser.add_argument("--folds", type=int, default=3)
    args = parser.parse_args()

    generated = generate_corpus(GeneratorSpec(seed=args.seed, n_videos=args.n_videos))
    records = {r.link_id: r for r in generated.corpus.records}
    plan = make_split(
        [(r.link_id, landing_domain(r.landing_url)) for r in generated.corpus.records],
        seed=args.seed)
    print(f"{len(records)} links: {len(plan.train_ids)} train, "
          f"{len(plan.holdout_seen_ids)} seen holdout, "
          f"{len(plan.holdout_unseen_ids)} unseen holdout")

    vectors = {link_id: extract_features(build_graph(r)) for link_id, r in records.items()}

    def matrix(ids):
        return feature_matrix([vectors[i] for i in ids])

    def truth(ids):
        return np.array([int(generated.link_truth[i]) for i in ids])

    grid = REDUCED_GRID if args.grid == "reduced" else DEFAULT_GRID
    model, report = train_forest(matrix(plan.train_ids), truth(plan.train_ids),
                                 grid=grid, seed=args.seed, n_folds=args.folds)
    chosen = report.chosen
    print(f"chosen config: n_trees={chosen.n_trees} max_depth={chosen.max_depth} "
          f"min_samples_leaf={chosen.min_samples_leaf}")

    registry = default_registry()
    print(f"{'holdout':8s} {'model P/R/F1':>26s} {'baseline P/R/F1':>26s}")
    for name, ids in (("seen", plan.holdout_seen_ids), ("unseen", plan.holdout_unseen_ids)):
        predicted, _ = predict_batch(model, matrix(ids))
        mp, mr, mf = precision_recall_f1(truth(ids), predicted)
        baseline = np.array([
            int(label_url(records[i].original_url, registry) is Phase1Label.KnownAffiliate)
            for i in ids])
        bp, br, bf = precision_recall_f1(truth(ids), baseline)
        print(f"{name:8s} {mp:8.4f} {mr:8.4f} {mf:8.4f} {bp:8.4f} {br:8.4f} {bf:8.4f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
