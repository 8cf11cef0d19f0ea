"""Train/test splitting strategies over a chronological sample list.

All strategies keep train and test chronological and disjoint. Stratified
variants apply the train fraction within each month or season group, taking
each group's chronological head for training.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import ConfigError, DataError
from .features import SEASONS, Sample, season_year

STRATEGIES = ("ordered", "seasonal", "monthly", "single_season")


@dataclass(frozen=True)
class SplitSpec:
    strategy: str
    season: Optional[str] = None
    train_fraction: float = 0.8

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"unknown split strategy {self.strategy!r}")
        if self.strategy == "single_season":
            if self.season not in SEASONS:
                raise ConfigError(
                    f"single_season split needs a season in {SEASONS}, "
                    f"got {self.season!r}"
                )
        elif self.season is not None:
            raise ConfigError(f"season only applies to single_season splits")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError(
                f"train_fraction must be in (0,1), got {self.train_fraction}"
            )


def _group_key(sample: Sample, strategy: str):
    ts = sample.origin_timestamp
    if strategy == "monthly":
        return (ts.year, ts.month)
    if strategy == "seasonal":
        return (season_year(ts.year, ts.month), sample.features.season)
    return 0  # ordered / single_season: one global group


def split(samples: Sequence[Sample], spec: SplitSpec):
    """Returns (train, test); both chronological, disjoint, union = selection."""
    if spec.strategy == "single_season":
        selected = [s for s in samples if s.features.season == spec.season]
    else:
        selected = list(samples)
    if not selected:
        raise DataError(
            f"empty selection for split strategy {spec.strategy!r}"
            + (f" (season {spec.season})" if spec.season else "")
        )

    strategy = spec.strategy
    counts: dict = {}
    for s in selected:
        key = _group_key(s, strategy)
        counts[key] = counts.get(key, 0) + 1
    take = {k: math.ceil(spec.train_fraction * n) for k, n in counts.items()}

    train, test = [], []
    seen: dict = {}
    for s in selected:
        key = _group_key(s, strategy)
        i = seen.get(key, 0)
        seen[key] = i + 1
        (train if i < take[key] else test).append(s)
    return train, test
