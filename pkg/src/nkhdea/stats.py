"""Sample summaries and two-sample t-tests.

The Student-t tail probability comes from a self-contained regularized
incomplete beta function (continued fraction, modified Lentz), so results do
not depend on scipy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParameterError

ALPHA = 0.05

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 500


@dataclass(frozen=True)
class SampleSummary:
    count: int
    mean: float
    min: float
    max: float
    variance: float


@dataclass(frozen=True)
class TTestResult:
    t_statistic: float
    degrees_of_freedom: float
    p_value: float
    significant_at_05: bool


def _mean(xs):
    # fsum keeps mean exact enough that min <= mean <= max always holds.
    m = math.fsum(xs) / len(xs)
    return min(max(m, min(xs)), max(xs))


def _variance(xs, mean):
    if len(xs) < 2:
        return 0.0
    return math.fsum((x - mean) ** 2 for x in xs) / (len(xs) - 1)


def summarize(samples) -> SampleSummary:
    xs = [float(x) for x in samples]
    if not xs:
        raise InvalidParameterError("cannot summarize an empty sample")
    m = _mean(xs)
    return SampleSummary(len(xs), m, min(xs), max(xs), _variance(xs, m))


def _betacf(a, b, x):
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = _TINY if abs(d) < _TINY else d
        c = 1.0 + aa / c
        c = _TINY if abs(c) < _TINY else c
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = _TINY if abs(d) < _TINY else d
        c = 1.0 + aa / c
        c = _TINY if abs(c) < _TINY else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"incomplete beta failed to converge for a={a}, b={b}, x={x}")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function ``I_x(a, b)`` for ``a, b > 0``."""
    if a <= 0 or b <= 0:
        raise InvalidParameterError("betainc needs a > 0 and b > 0")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    # The continued fraction converges fast only on one side of the mean.
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def t_two_tailed_p(t: float, df: float) -> float:
    """``P(|T| >= |t|)`` for Student's t with ``df`` degrees of freedom."""
    if math.isnan(t):
        return float("nan")
    if math.isinf(t):
        return 0.0
    p = betainc(df / 2.0, 0.5, df / (df + t * t))
    return min(max(p, 0.0), 1.0)


def _result(t, df):
    p = t_two_tailed_p(t, df)
    return TTestResult(t, df, p, p < ALPHA)


def welch_t_test(a, b) -> TTestResult:
    """Unpaired two-tailed Welch t-test of ``mean(a) == mean(b)``.

    Two constant samples give ``t = 0, p = 1`` when their means agree and
    ``t = +-inf, p = 0`` otherwise; the degrees of freedom then fall back to
    ``na + nb - 2``.
    """
    xa = [float(x) for x in a]
    xb = [float(x) for x in b]
    na, nb = len(xa), len(xb)
    if na < 2 or nb < 2:
        raise InvalidParameterError("each sample needs at least 2 values")
    ma, mb = math.fsum(xa) / na, math.fsum(xb) / nb
    sa, sb = _variance(xa, ma) / na, _variance(xb, mb) / nb
    se2 = sa + sb
    if se2 == 0.0:
        diff = ma - mb
        t = 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
        return _result(t, float(na + nb - 2))
    t = (ma - mb) / math.sqrt(se2)
    df = se2 * se2 / (sa * sa / (na - 1) + sb * sb / (nb - 1))
    return _result(t, df)


def paired_t_test(a, b) -> TTestResult:
    """Two-tailed paired t-test on the element-wise differences ``a - b``."""
    xa = [float(x) for x in a]
    xb = [float(x) for x in b]
    if len(xa) != len(xb):
        raise InvalidParameterError("paired samples must have equal length")
    if len(xa) < 2:
        raise InvalidParameterError("each sample needs at least 2 values")
    diffs = [x - y for x, y in zip(xa, xb)]
    n = len(diffs)
    m = math.fsum(diffs) / n
    var = _variance(diffs, m)
    if var == 0.0:
        t = 0.0 if m == 0.0 else math.copysign(math.inf, m)
        return _result(t, float(n - 1))
    return _result(m / math.sqrt(var / n), float(n - 1))
