#!/usr/bin/env python3
"""Bootstrap calibration sweep on two-group scenarios with known effects.

For each scenario, repeatedly draws fresh two-group data, bootstraps the
group difference, and reports how often the 95% CI covers the true delta
and how often it excludes zero.
"""

from __future__ import annotations

import argparse

from affaudit.fixtures import two_group_scenario
from affaudit.stats import bootstrap_effect

SCENARIOS = (
    # (metric, p_a, p_b) — true delta is 100 * (p_a - p_b) percentage points
    ("CC", 0.3262, 0.2151),
    ("NC", 0.2980, 0.7458),
    ("PC", 0.5000, 0.5000),
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-per-group", type=int, default=1_500)
    parser.add_argument("--repetitions", type=int, default=100)
    parser.add_argument("--n-boot", type=int, default=10_000)
    args = parser.parse_args()

    print(f"{'scenario':>16s} {'truth':>8s} {'covered':>8s} {'excl. 0':>8s} {'mean delta':>11s}")
    for index, (metric, p_a, p_b) in enumerate(SCENARIOS):
        truth = 100 * (p_a - p_b)
        covered = excluded = 0
        delta_sum = 0.0
        for rep in range(args.repetitions):
            seed = index * 100_000 + rep
            group_a, group_b = two_group_scenario(args.n_per_group, p_a, p_b,
                                                  metric=metric, seed=seed)
            estimate = bootstrap_effect(group_a, group_b, metric,
                                        n_boot=args.n_boot, seed=seed)
            covered += estimate.ci_low <= truth <= estimate.ci_high
            excluded += estimate.significant
            delta_sum += estimate.delta
        label = f"{metric} {p_a:.2f}/{p_b:.2f}"
        print(f"{label:>16s} {truth:+8.2f} {covered:5d}/{args.repetitions:<3d}"
              f" {excluded:5d}/{args.repetitions:<3d} {delta_sum / args.repetitions:+11.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
