"""Train/holdout split with a domain-exclusive unseen holdout.

The unseen holdout is built first by drawing whole landing domains until it
covers at least 20% of links, so no unseen-holdout domain ever appears in
training. The remaining links are then split 60/20 (of the original total)
into train and the seen holdout by plain link-level shuffling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

MIN_DISTINCT_DOMAINS = 10


@dataclass(frozen=True, slots=True)
class SplitPlan:
    train_ids: tuple[str, ...]
    holdout_seen_ids: tuple[str, ...]
    holdout_unseen_ids: tuple[str, ...]
    seed: int


def make_split(items: Sequence[tuple[str, str]], seed: int,
               unseen_frac: float = 0.2, seen_frac: float = 0.2) -> SplitPlan:
    """items are (link_id, landing_domain) pairs; needs >= 10 distinct domains."""
    if len({d for _, d in items}) < MIN_DISTINCT_DOMAINS:
        raise ValueError(f"need at least {MIN_DISTINCT_DOMAINS} distinct landing domains")
    rng = np.random.default_rng([seed])
    by_domain: dict[str, list[str]] = {}
    for link_id, domain in items:
        by_domain.setdefault(domain, []).append(link_id)

    domains = sorted(by_domain)
    order = rng.permutation(len(domains))
    n = len(items)
    unseen_target = math.ceil(unseen_frac * n)
    unseen: list[str] = []
    taken = set()
    for di in order:
        if len(unseen) >= unseen_target:
            break
        domain = domains[di]
        unseen.extend(by_domain[domain])
        taken.add(domain)

    rest = [link_id for domain in domains if domain not in taken for link_id in by_domain[domain]]
    rest_order = rng.permutation(len(rest))
    n_seen = min(round(seen_frac * n), len(rest))
    seen = [rest[i] for i in rest_order[:n_seen]]
    train = [rest[i] for i in rest_order[n_seen:]]
    if not train:
        raise ValueError("too few links outside the unseen holdout to form a training set")
    return SplitPlan(tuple(train), tuple(seen), tuple(unseen), seed)
