"""Minute-level meter data: CSV parsing, null repair, and aggregation.

Input files hold one row per minute with a timestamp column followed by one
power column (kW) per meter. Empty cells are nulls and get repaired by linear
interpolation before aggregation.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from datetime import datetime, timedelta
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ConfigError, DataError


@dataclass(frozen=True)
class Granularity:
    """Bucket width in minutes; buckets must tile a day exactly."""

    minutes: int

    def __post_init__(self):
        if self.minutes < 1:
            raise ConfigError(f"granularity must be >= 1 minute, got {self.minutes}")
        if 1440 % self.minutes != 0:
            raise ConfigError(
                f"granularity {self.minutes} does not divide 1440 (a day)"
            )

    @property
    def buckets_per_day(self) -> int:
        return 1440 // self.minutes


@dataclass(frozen=True)
class RawReading:
    """One minute-level record: timestamp plus per-meter kW values (None = missing)."""

    timestamp: datetime
    values: tuple


@dataclass(frozen=True)
class AggregatedRecord:
    """One bucket: start time, index within its day, and mean total power (kW)."""

    bucket_start: datetime
    bucket_index: int
    target: float


def minute_of_day(ts: datetime) -> int:
    return ts.hour * 60 + ts.minute


def bucket_index_of(ts: datetime, granularity: Granularity) -> int:
    """floor(minutes elapsed in the day / bucket width)."""
    return minute_of_day(ts) // granularity.minutes


def parse_readings(csv_text) -> list:
    """Parse a readings CSV (string or line iterable) into RawReading objects.

    Row numbers in error messages count the header as row 1.
    """
    if isinstance(csv_text, str):
        lines = io.StringIO(csv_text)
    else:
        lines = csv_text
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("empty input: missing header row")
    if not header or header[0].strip() != "timestamp":
        raise DataError("header must start with a 'timestamp' column")
    n_cols = len(header)
    if n_cols < 2:
        raise DataError("header declares no meter columns")

    readings = []
    prev_ts = None
    for row_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != n_cols:
            raise DataError(
                f"inconsistent column count at row {row_no}: "
                f"expected {n_cols}, got {len(row)}"
            )
        try:
            ts = datetime.fromisoformat(row[0])
        except ValueError:
            raise DataError(f"malformed timestamp at row {row_no}: {row[0]!r}")
        if prev_ts is not None and ts <= prev_ts:
            raise DataError(f"non-monotonic timestamp at row {row_no}")
        prev_ts = ts
        values = []
        for col, cell in enumerate(row[1:], start=1):
            cell = cell.strip()
            if cell == "":
                values.append(None)
                continue
            try:
                v = float(cell)
            except ValueError:
                raise DataError(f"malformed reading at row {row_no}, column {col}")
            if not math.isfinite(v):
                raise DataError(f"non-finite reading at row {row_no}, column {col}")
            if v < 0:
                raise DataError(f"negative reading at row {row_no}, column {col}")
            values.append(v)
        readings.append(RawReading(ts, tuple(values)))
    return readings


def interpolate_nulls(readings: Sequence[RawReading]) -> list:
    """Replace nulls per meter column.

    Interior nulls are linearly interpolated against minute distance between
    the nearest non-null neighbours; leading/trailing nulls copy the nearest
    non-null value. Non-null inputs are returned unchanged.
    """
    if not readings:
        return []
    n_meters = len(readings[0].values)
    t0 = readings[0].timestamp
    t = np.array(
        [(r.timestamp - t0).total_seconds() / 60.0 for r in readings], dtype=float
    )
    columns = []
    for j in range(n_meters):
        col = np.array(
            [np.nan if r.values[j] is None else r.values[j] for r in readings],
            dtype=float,
        )
        known = ~np.isnan(col)
        if not known.any():
            raise DataError(f"meter column {j + 1} is entirely null")
        if not known.all():
            filled = np.interp(t, t[known], col[known])
            # only touch the null slots so existing values stay bit-identical
            col = np.where(known, col, filled)
        columns.append(col)
    stacked = np.stack(columns, axis=1)
    return [
        RawReading(r.timestamp, tuple(stacked[i].tolist()))
        for i, r in enumerate(readings)
    ]


def aggregate(
    readings: Sequence[RawReading], granularity: Granularity
) -> list:
    """Sum meters into a building total per minute, then average totals per
    (date, bucket) group. Buckets with no readings are simply absent."""
    groups: dict = {}
    for i, r in enumerate(readings):
        total = 0.0
        for v in r.values:
            if v is None:
                raise DataError(
                    f"null reading at {r.timestamp.isoformat()}; "
                    "run interpolate_nulls first"
                )
            total += v
        key = (r.timestamp.date(), bucket_index_of(r.timestamp, granularity))
        groups.setdefault(key, []).append(total)

    records = []
    for (day, bi), totals in sorted(groups.items()):
        start = datetime(day.year, day.month, day.day) + timedelta(
            minutes=bi * granularity.minutes
        )
        records.append(AggregatedRecord(start, bi, float(np.mean(totals))))
    return records
