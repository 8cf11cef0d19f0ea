"""Independent reference implementations used to cross-check the library.

Everything here is deliberately written from first principles (plain Python
loops, hand-coded calendar arithmetic) rather than reusing library code, so
the checks are a genuinely separate route to the same answers.
"""
import math


# ---------------------------------------------------------------------------
# exhaustive split search


def brute_force_best_split(X, y):
    """Try every feature and every midpoint between consecutive distinct
    values; return (feature_id, threshold, gain) or None."""
    n = len(y)
    if n < 2:
        return None

    def sse(vals):
        s = 0.0
        s2 = 0.0
        for v in vals:
            s += v
            s2 += v * v
        return s2 - s * s / len(vals)

    parent = sse([y[i] for i in range(n)])
    if parent / n <= 0.0:
        return None

    best = None
    n_features = len(X[0])
    for f in range(n_features):
        distinct = sorted(set(float(X[i][f]) for i in range(n)))
        for a, b in zip(distinct, distinct[1:]):
            thr = (a + b) / 2
            left = [y[i] for i in range(n) if X[i][f] <= thr]
            right = [y[i] for i in range(n) if X[i][f] > thr]
            gain = (parent - sse(left) - sse(right)) / n
            if gain > 0.0 and (best is None or gain > best[2]):
                best = (f, thr, gain)
    return best


# ---------------------------------------------------------------------------
# spreadsheet-style error metrics


def spreadsheet_metrics(actual, predicted):
    """Returns (rmse, mae, mad, mape_or_None) via plain loops."""
    n = len(actual)
    errors = [predicted[i] - actual[i] for i in range(n)]
    rmse = math.sqrt(sum(e * e for e in errors) / n)
    mae = sum(abs(e) for e in errors) / n
    mean_error = sum(errors) / n
    mad = sum(abs(e - mean_error) for e in errors) / n
    ratios = [
        abs(errors[i]) / abs(actual[i]) for i in range(n) if actual[i] != 0.0
    ]
    mape = 100.0 * sum(ratios) / len(ratios) if ratios else None
    return rmse, mae, mad, mape


# ---------------------------------------------------------------------------
# calendar arithmetic from first principles


def is_leap_year(year):
    return year % 4 == 0 and (year % 100 != 0 or year % 400 == 0)


_MONTH_DAYS = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)


def days_in_month(year, month):
    if month == 2 and is_leap_year(year):
        return 29
    return _MONTH_DAYS[month - 1]


def day_of_year(year, month, day):
    total = day
    for m in range(1, month):
        total += days_in_month(year, m)
    return total


def days_from_civil(year, month, day):
    """Days since 1970-01-01 (Hinnant's civil-from-days inverse)."""
    y = year - (month <= 2)
    era = (y if y >= 0 else y - 399) // 400
    yoe = y - era * 400
    doy = (153 * (month + (-3 if month > 2 else 9)) + 2) // 5 + day - 1
    doe = yoe * 365 + yoe // 4 - yoe // 100 + doy
    return era * 146097 + doe - 719468


def weekday_monday0(year, month, day):
    # 1970-01-01 was a Thursday (Monday=0 index 3)
    return (days_from_civil(year, month, day) + 3) % 7


def _iso_weeks_in_year(year):
    def dec31_dow(y):
        return (y + y // 4 - y // 100 + y // 400) % 7

    return 53 if dec31_dow(year) == 4 or dec31_dow(year - 1) == 3 else 52


def iso_week(year, month, day):
    iso_dow = weekday_monday0(year, month, day) + 1  # 1 = Monday
    week = (day_of_year(year, month, day) - iso_dow + 10) // 7
    if week < 1:
        return _iso_weeks_in_year(year - 1)
    if week > _iso_weeks_in_year(year):
        return 1
    return week
