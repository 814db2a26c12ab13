"""Confidence intervals for the SDR by inverting the exponent-based test.

The level-alpha test rejects "E[S] <= mu" when log(alpha) >= phi(mu), where
phi is the exact worst-case exponent at the observed agreement sum.  phi is
nondecreasing in mu, so the smallest non-rejected mu is found by bisection
and converts into an upper confidence bound 1 - mu_low / A on the SDR.  The
lower tail reuses the same machinery on the reflected counts a_i - X_i.
"""

from dataclasses import dataclass
from math import log

import numpy as np

from .tail_bounds import BoundProblem, tight_exponent

_CACHE = {}
_CACHE_CAP = 16384


@dataclass(frozen=True)
class Interval:
    """Confidence interval with its level and sidedness."""

    lower: float
    upper: float
    level: float
    side: str  # "upper-only", "lower-only" or "two-sided"

    def __post_init__(self):
        if self.lower > self.upper + 1e-12:
            raise ValueError("interval lower end exceeds upper end")
        if not 0.0 < self.level < 1.0:
            raise ValueError("level must lie in (0, 1)")
        if self.side not in ("upper-only", "lower-only", "two-sided"):
            raise ValueError(f"unknown side {self.side!r}")


def reject_mean_at_most(summary, mu, alpha, **solver_kwargs):
    """True iff the null E[S] <= mu is rejected at level alpha."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    if not 0.0 <= mu <= summary.total:
        raise ValueError("mu must lie in [0, total]")
    exponent = tight_exponent(
        BoundProblem(summary.widths, mu, float(summary.total_agree)), **solver_kwargs
    ).log_bound
    return log(alpha) >= exponent


def mean_lower_bound(widths, s_agree, alpha, *, xtol=None, max_iter=200, **solver_kwargs):
    """Smallest mu not rejected by the upper-tail test at observation s_agree.

    Bisection between 0 (always rejected for s_agree > 0) and s_agree (never
    rejected); phi is monotone in mu so the bracket is valid throughout.
    """
    widths = np.asarray(widths, dtype=float)
    s_agree = float(s_agree)
    if s_agree <= 0.0:
        return 0.0
    if xtol is None:
        xtol = 1e-9 * float(widths.sum())
    log_alpha = log(alpha)

    def rejected(mu):
        return log_alpha >= tight_exponent(
            BoundProblem(widths, mu, s_agree), **solver_kwargs
        ).log_bound

    lo, hi = 0.0, s_agree
    if not rejected(lo):
        return 0.0
    for _ in range(max_iter):
        if hi - lo <= xtol:
            break
        mid = 0.5 * (lo + hi)
        if rejected(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _cached_mean_lower(widths, s_agree, alpha, solver_kwargs):
    key = (widths.tobytes(), float(s_agree), float(alpha),
           tuple(sorted(solver_kwargs.items())))
    hit = _CACHE.get(key)
    if hit is None:
        if len(_CACHE) >= _CACHE_CAP:
            _CACHE.clear()
        hit = mean_lower_bound(widths, s_agree, alpha, **solver_kwargs)
        _CACHE[key] = hit
    return hit


def sdr_upper_ci(summary, alpha, **solver_kwargs):
    """One-sided upper confidence interval [0, 1 - mu_low / A] for the SDR."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    widths = summary.widths.astype(float)
    mu_low = _cached_mean_lower(widths, summary.total_agree, alpha, solver_kwargs)
    upper = min(1.0, 1.0 - mu_low / summary.total)
    return Interval(0.0, upper, 1.0 - alpha, "upper-only")


def sdr_two_sided_ci(summary, alpha, **solver_kwargs):
    """Two-sided SDR interval from equal alpha/2 tail tests.

    The lower tail tests the reflected counts a_i - X_i, which bounds the
    expected disagreement sum from below.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    widths = summary.widths.astype(float)
    half = alpha / 2.0
    mu_low = _cached_mean_lower(widths, summary.total_agree, half, solver_kwargs)
    refl_low = _cached_mean_lower(
        widths, summary.total - summary.total_agree, half, solver_kwargs
    )
    upper = min(1.0, 1.0 - mu_low / summary.total)
    lower = max(0.0, refl_low / summary.total)
    return Interval(lower, upper, 1.0 - alpha, "two-sided")
