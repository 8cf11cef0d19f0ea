import random
from datetime import datetime, timedelta

from loadcast.features import (
    BASE_FEATURES,
    SEASONS,
    build_samples,
    default_lag_offsets,
    extract_features,
    feature_matrix,
    feature_names,
    season_of_month,
    season_year,
)
from loadcast.readings import AggregatedRecord, Granularity

import oracles


def record(ts, target=1.0):
    return AggregatedRecord(ts, (ts.hour * 60 + ts.minute) // 60, target)


def test_summer_sunday_afternoon():
    fv = extract_features(record(datetime(2015, 6, 21, 14, 31)))
    assert fv.year == 2015
    assert fv.month == 6
    assert fv.day_of_year == 172
    assert fv.day_of_week == 6  # 2015-06-21 was a Sunday
    assert fv.hour == 14
    assert fv.half_hour == 29
    assert fv.season == "summer"
    assert fv.is_weekend is True
    assert fv.week_of_year == 25


def test_new_year_boundary():
    fv = extract_features(record(datetime(2015, 1, 1, 0, 0)))
    assert fv.month == 1
    assert fv.day_of_month == 1
    assert fv.hour == 0
    assert fv.half_hour == 0
    assert fv.season == "winter"


def test_saturday_is_weekend():
    fv = extract_features(record(datetime(2015, 3, 7, 9, 0)))  # a Saturday
    assert fv.day_of_week == 5
    assert fv.is_weekend is True


def test_season_mapping():
    expected = {
        12: "winter", 1: "winter", 2: "winter",
        3: "spring", 4: "spring", 5: "spring",
        6: "summer", 7: "summer", 8: "summer",
        9: "autumn", 10: "autumn", 11: "autumn",
    }
    for month, season in expected.items():
        assert season_of_month(month) == season


def test_december_belongs_to_next_winter():
    assert season_year(2015, 12) == 2016
    assert season_year(2015, 1) == 2015


def test_calendar_against_independent_oracle():
    rng = random.Random(42)
    for _ in range(1200):
        year = rng.randint(2000, 2030)  # mixes leap and non-leap years
        month = rng.randint(1, 12)
        day = rng.randint(1, oracles.days_in_month(year, month))
        hour = rng.randint(0, 23)
        minute = rng.randint(0, 59)
        ts = datetime(year, month, day, hour, minute)
        fv = extract_features(record(ts))
        assert fv.day_of_week == oracles.weekday_monday0(year, month, day)
        assert fv.day_of_year == oracles.day_of_year(year, month, day)
        assert fv.week_of_year == oracles.iso_week(year, month, day)
        assert fv.half_hour == (hour * 60 + minute) // 30
        assert fv.is_weekend == (fv.day_of_week in (5, 6))
        assert 1 <= fv.week_of_year <= 53
        assert 1 <= fv.day_of_year <= 366


def test_feature_names_and_matrix_shape():
    names = feature_names()
    assert names == list(BASE_FEATURES)
    names = feature_names((1, 2, 24))
    assert names[-3:] == ["lag_1", "lag_2", "lag_24"]

    records = [
        record(datetime(2015, 1, 1) + timedelta(hours=i), target=float(i))
        for i in range(10)
    ]
    samples = build_samples(records, lag_offsets=(1, 2, 24))
    X = feature_matrix(samples)
    assert X.shape == (10, len(names))


def test_default_lag_offsets():
    assert default_lag_offsets(Granularity(60)) == (1, 2, 3, 24, 168)
    assert default_lag_offsets(Granularity(1440)) == (1, 2, 3, 1, 7)


def test_lags_from_history():
    records = [
        record(datetime(2015, 1, 1) + timedelta(hours=i), target=10.0 + i)
        for i in range(6)
    ]
    samples = build_samples(records, lag_offsets=(1, 3))
    # first sample has no history: falls back to its own (earliest) target
    assert samples[0].features.lags == (10.0, 10.0)
    # offset 3 before history start uses the earliest known target
    assert samples[2].features.lags == (11.0, 10.0)
    assert samples[5].features.lags == (14.0, 12.0)


def test_season_encoding_round_trip():
    for s in SEASONS:
        assert SEASONS[SEASONS.index(s)] == s
