"""Calendar feature extraction from aggregated buckets.

Features: year, month, ISO week of year, day of year, day of month, day of
week (Monday=0), hour, half-hour slot, meteorological season, weekend flag,
plus optional lagged consumption values.
"""
from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from typing import Optional, Sequence

import numpy as np

from .readings import AggregatedRecord, Granularity

SEASONS = ("winter", "spring", "summer", "autumn")

_MONTH_TO_SEASON = {
    12: "winter", 1: "winter", 2: "winter",
    3: "spring", 4: "spring", 5: "spring",
    6: "summer", 7: "summer", 8: "summer",
    9: "autumn", 10: "autumn", 11: "autumn",
}

BASE_FEATURES = (
    "year",
    "month",
    "week_of_year",
    "day_of_year",
    "day_of_month",
    "day_of_week",
    "hour",
    "half_hour",
    "season",
    "is_weekend",
)

# enum/boolean features that skip scaling and ride along as small integers
PASSTHROUGH_FEATURES = frozenset({"season", "is_weekend"})


def season_of_month(month: int) -> str:
    return _MONTH_TO_SEASON[month]


def season_year(year: int, month: int) -> int:
    """December belongs to the following year's winter."""
    return year + 1 if month == 12 else year


@dataclass(frozen=True)
class FeatureVector:
    year: int
    month: int
    week_of_year: int
    day_of_year: int
    day_of_month: int
    day_of_week: int
    hour: int
    half_hour: int
    season: str
    is_weekend: bool
    lags: Optional[tuple] = None

    def as_array(self) -> np.ndarray:
        base = [
            self.year,
            self.month,
            self.week_of_year,
            self.day_of_year,
            self.day_of_month,
            self.day_of_week,
            self.hour,
            self.half_hour,
            SEASONS.index(self.season),
            int(self.is_weekend),
        ]
        if self.lags is not None:
            base.extend(self.lags)
        return np.array(base, dtype=float)


@dataclass(frozen=True)
class Sample:
    features: FeatureVector
    target: float
    origin_timestamp: datetime


def feature_names(lag_offsets: Optional[Sequence[int]] = None) -> list:
    names = list(BASE_FEATURES)
    if lag_offsets:
        names.extend(f"lag_{k}" for k in lag_offsets)
    return names


def default_lag_offsets(granularity: Granularity) -> tuple:
    bpd = granularity.buckets_per_day
    return (1, 2, 3, bpd, 7 * bpd)


def extract_features(
    record: AggregatedRecord,
    history: Optional[Sequence[float]] = None,
    lag_offsets: Optional[Sequence[int]] = None,
) -> FeatureVector:
    """Calendar features of the bucket start; optional lags from `history`
    (chronological prior targets, most recent last). Offsets reaching before
    the history start fall back to the earliest known target."""
    ts = record.bucket_start
    lags = None
    if lag_offsets:
        lags = []
        for k in lag_offsets:
            if history is None or len(history) == 0:
                lags.append(record.target)
            elif k <= len(history):
                lags.append(history[-k])
            else:
                lags.append(history[0])
        lags = tuple(lags)
    return FeatureVector(
        year=ts.year,
        month=ts.month,
        week_of_year=ts.isocalendar()[1],
        day_of_year=ts.timetuple().tm_yday,
        day_of_month=ts.day,
        day_of_week=ts.weekday(),
        hour=ts.hour,
        half_hour=(ts.hour * 60 + ts.minute) // 30,
        season=season_of_month(ts.month),
        is_weekend=ts.weekday() >= 5,
        lags=lags,
    )


def build_samples(
    records: Sequence[AggregatedRecord],
    lag_offsets: Optional[Sequence[int]] = None,
) -> list:
    """Featurize aggregated records in chronological order."""
    samples = []
    history: list = []
    for rec in records:
        fv = extract_features(rec, history if lag_offsets else None, lag_offsets)
        samples.append(Sample(fv, rec.target, rec.bucket_start))
        history.append(rec.target)
    return samples


def feature_matrix(samples: Sequence[Sample]) -> np.ndarray:
    return np.stack([s.features.as_array() for s in samples])


def target_vector(samples: Sequence[Sample]) -> np.ndarray:
    return np.array([s.target for s in samples], dtype=float)
