"""Regularized incomplete gamma functions and the chi-squared upper tail.

Self-contained double-precision evaluation in the classic style: power
series for the lower function when x < a + 1, modified-Lentz continued
fraction for the upper function otherwise.  Relative accuracy is well
inside 1e-8 over the chi-squared ranges used here (it is close to machine
precision away from the extreme tails), which keeps the statistics stack
free of any external dependency.
"""

from __future__ import annotations

import math

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 500


def _lower_series(a: float, x: float) -> float:
    """P(a, x) by series: x^a e^-x / Gamma(a) * sum_k x^k / (a+1)...(a+k)."""
    term = 1.0 / a
    total = term
    denom = a
    for _ in range(_MAX_ITER):
        denom += 1.0
        term *= x / denom
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    else:
        raise ArithmeticError(f"gamma series failed to converge for a={a}, x={x}")
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _upper_continued_fraction(a: float, x: float) -> float:
    """Q(a, x) by the Lentz-evaluated continued fraction."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    else:
        raise ArithmeticError(f"gamma continued fraction failed to converge for a={a}, x={x}")
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def regularized_gamma_p(a: float, x: float) -> float:
    """Lower regularized incomplete gamma P(a, x) = gamma(a, x) / Gamma(a)."""
    if a <= 0.0:
        raise ValueError(f"shape parameter must be positive, got {a}")
    if x < 0.0:
        raise ValueError(f"argument must be nonnegative, got {x}")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return min(1.0, _lower_series(a, x))
    return max(0.0, 1.0 - _upper_continued_fraction(a, x))


def regularized_gamma_q(a: float, x: float) -> float:
    """Upper regularized incomplete gamma Q(a, x) = 1 - P(a, x)."""
    if a <= 0.0:
        raise ValueError(f"shape parameter must be positive, got {a}")
    if x < 0.0:
        raise ValueError(f"argument must be nonnegative, got {x}")
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _lower_series(a, x))
    return min(1.0, _upper_continued_fraction(a, x))


def chi_squared_sf(statistic: float, dof: int) -> float:
    """Upper-tail probability of the chi-squared distribution.

    Pr[X >= statistic] for X chi-squared with ``dof`` degrees of freedom,
    i.e. Q(dof/2, statistic/2).
    """
    if dof < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {dof}")
    if statistic < 0.0:
        raise ValueError(f"chi-squared statistic must be nonnegative, got {statistic}")
    if math.isinf(statistic):
        return 0.0
    return regularized_gamma_q(dof / 2.0, statistic / 2.0)
