"""Simultaneous confidence regions for SDRs over nested module prefixes.

For a nesting fixed by confidence scores alone, the partial agreement sums
form a martingale, and a single submartingale tail bound at the full-set sum
covers every prefix at once: with s_obs the total agreement count,

    U_k = SDP_k + worst_slack(s_obs) / |S_k|

is a joint (1 - alpha) upper confidence region for all prefix SDRs.  The
slack is the largest gap between a mean's critical sum and the mean itself,
over all means the observation fails to reject.

Merged regions split alpha over several score thresholds, rebuild the region
on each upper score set at level alpha / cuts, and keep the smallest bound
available for each subset, which sharpens the small prefixes considerably.
"""

from dataclasses import dataclass
from math import log
from typing import Optional

import numpy as np

from .confidence import mean_lower_bound
from .errors import DegenerateScores, MissingScores
from .tail_bounds import BoundProblem, tight_exponent

INVPHI = 0.6180339887498949

_SLACK_CACHE = {}
_SLACK_CACHE_CAP = 8192


@dataclass(frozen=True, eq=False)
class NestedSummaries:
    """Module summaries in nesting order plus the per-parameter data.

    ``order`` lists parameter positions in inclusion order and ``boundaries``
    the cumulative parameter count after each step, so prefix k is
    ``order[:boundaries[k-1]]``.  Per-step widths/counts and their cumulative
    sums are precomputed.  The per-parameter arrays (indexed by original
    position) let restricted regions be rebuilt from the same object.
    """

    order: np.ndarray
    boundaries: np.ndarray
    widths: np.ndarray
    counts: np.ndarray
    sizes: np.ndarray
    agreements: np.ndarray
    param_module: np.ndarray
    param_agree: np.ndarray
    scores: Optional[np.ndarray]

    @property
    def depth(self):
        return self.widths.size

    @property
    def total(self):
        return int(self.sizes[-1])

    @property
    def total_agree(self):
        return int(self.agreements[-1])

    def sdp_path(self):
        return 1.0 - self.agreements / self.sizes


def build_nested(study, positions=None):
    """Nest whole modules by descending mean confidence score.

    ``positions`` restricts to a subset of parameter positions (used by the
    merged construction); modules without retained parameters are dropped.
    Ties in the mean score keep the original module order.
    """
    if study.scores is None:
        raise MissingScores("module ordering requires confidence scores")
    if positions is None:
        positions = np.arange(study.n)
    mods = study.modules[positions]
    scores = study.scores[positions]
    agree = study.agree[positions]

    n_mod = study.n_modules
    width = np.bincount(mods, minlength=n_mod)
    present = np.flatnonzero(width > 0)
    mean_score = np.full(n_mod, -np.inf)
    mean_score[present] = (
        np.bincount(mods, weights=scores, minlength=n_mod)[present] / width[present]
    )
    ranked = present[np.argsort(-mean_score[present], kind="stable")]

    # parameters grouped by module, original order within each module
    rank_of_module = np.full(n_mod, n_mod, dtype=np.intp)
    rank_of_module[ranked] = np.arange(ranked.size)
    order = positions[np.argsort(rank_of_module[mods], kind="stable")]

    counts = np.bincount(mods, weights=agree.astype(float), minlength=n_mod)
    step_w = width[ranked].astype(np.int64)
    step_x = counts[ranked].astype(np.int64)
    boundaries = np.cumsum(step_w)
    return NestedSummaries(
        order=order,
        boundaries=boundaries,
        widths=step_w,
        counts=step_x,
        sizes=boundaries.copy(),
        agreements=np.cumsum(step_x),
        param_module=study.modules,
        param_agree=study.agree,
        scores=study.scores,
    )


@dataclass(frozen=True, eq=False)
class ConfidenceRegion:
    """Joint upper bounds U_k for the prefix SDRs at the stated level."""

    uppers: np.ndarray
    sizes: np.ndarray
    level: float
    kind: str  # "single" or "merged"


def critical_sum(widths, mu, alpha, *, xtol=None, max_iter=200, **solver_kwargs):
    """Boundary observation where the exponent at mean mu crosses log(alpha).

    The exponent is continuous and nonincreasing in s on [mu, total], equal
    to 0 at s = mu; if it never reaches log(alpha) the boundary is the total
    width itself.
    """
    widths = np.asarray(widths, dtype=float)
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    total = float(widths.sum())
    mu = float(mu)
    if not 0.0 <= mu <= total:
        raise ValueError("mu must lie in [0, sum(widths)]")
    if xtol is None:
        xtol = 1e-9 * total
    log_alpha = log(alpha)

    def exponent(s):
        return tight_exponent(BoundProblem(widths, mu, s), **solver_kwargs).log_bound

    if exponent(total) >= log_alpha:
        return total
    lo, hi = mu, total
    for _ in range(max_iter):
        if hi - lo <= xtol:
            break
        mid = 0.5 * (lo + hi)
        if exponent(mid) >= log_alpha:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def worst_slack(widths, s_obs, alpha, *, prescan=64, xtol=None, max_iter=200,
                **solver_kwargs):
    """Largest critical_sum(mu) - mu over means not rejected at s_obs.

    The acceptance set is the interval [mu_low(s_obs), total] by monotonicity
    of the exponent in mu.  A coarse grid pre-scan guards against the gap not
    being unimodal, then golden section refines around the best cell; results
    are memoized since the function is pure and expensive.
    """
    widths = np.asarray(widths, dtype=float)
    total = float(widths.sum())
    s_obs = float(s_obs)
    if not 0.0 <= s_obs <= total:
        raise ValueError("s_obs must lie in [0, sum(widths)]")
    if xtol is None:
        xtol = 1e-9 * total

    key = (widths.tobytes(), s_obs, float(alpha), prescan, xtol, max_iter,
           tuple(sorted(solver_kwargs.items())))
    hit = _SLACK_CACHE.get(key)
    if hit is not None:
        return hit

    mu_low = mean_lower_bound(widths, s_obs, alpha, xtol=xtol,
                              max_iter=max_iter, **solver_kwargs)

    def gap(mu):
        return critical_sum(widths, mu, alpha, xtol=xtol,
                            max_iter=max_iter, **solver_kwargs) - mu

    grid = np.linspace(mu_low, total, prescan)
    values = np.array([gap(mu) for mu in grid])
    best = int(np.argmax(values))
    result = float(values[best])

    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, prescan - 1)]
    h = hi - lo
    if h > xtol:
        c = hi - INVPHI * h
        d = lo + INVPHI * h
        fc, fd = gap(c), gap(d)
        result = max(result, fc, fd)
        for _ in range(max_iter):
            if h <= xtol:
                break
            if fc >= fd:
                hi, d, fd = d, c, fc
                h = hi - lo
                c = hi - INVPHI * h
                fc = gap(c)
                result = max(result, fc)
            else:
                lo, c, fc = c, d, fd
                h = hi - lo
                d = lo + INVPHI * h
                fd = gap(d)
                result = max(result, fd)

    if len(_SLACK_CACHE) >= _SLACK_CACHE_CAP:
        _SLACK_CACHE.clear()
    _SLACK_CACHE[key] = result
    return result


def simultaneous_region(nested, alpha, **slack_kwargs):
    """Joint (1 - alpha) upper confidence region over the nested prefixes."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    slack = worst_slack(
        nested.widths.astype(float), float(nested.total_agree), alpha, **slack_kwargs
    )
    sdp_path = nested.sdp_path()
    uppers = np.minimum(1.0, sdp_path + slack / nested.sizes)
    return ConfidenceRegion(uppers, nested.sizes.copy(), 1.0 - alpha, "single")


def _prefix_matches(nested, sub_nested):
    """Map each restricted prefix to the equal full-family prefix, or -1.

    A restricted prefix equals a full prefix iff the deepest full-order rank
    it touches has exactly the same cumulative size, so the match test is
    exact and O(1) per step.
    """
    n_mod = nested.param_module.max() + 1
    rank = np.full(n_mod, -1, dtype=np.intp)
    full_mods = nested.param_module[nested.order]
    first = np.cumsum(np.r_[0, nested.widths[:-1]])
    rank[full_mods[first]] = np.arange(nested.depth)

    out = np.full(sub_nested.depth, -1, dtype=np.intp)
    deepest = -1
    for k in range(sub_nested.depth):
        lo = 0 if k == 0 else sub_nested.boundaries[k - 1]
        step = sub_nested.order[lo:sub_nested.boundaries[k]]
        step_rank = rank[nested.param_module[step]].max()
        deepest = max(deepest, step_rank)
        if deepest >= 0 and nested.sizes[deepest] == sub_nested.sizes[k]:
            out[k] = deepest
    return out


def merged_region(nested, alpha, cuts, **slack_kwargs):
    """Intersection of `cuts` score-threshold regions at level alpha / cuts.

    Thresholds are cuts+1 evenly spaced values from the minimum to the
    maximum observed score with the last discarded, so the first threshold
    keeps everything and every full-family prefix receives a bound.  Where a
    restricted prefix coincides with a full prefix, the smaller bound wins.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    if cuts < 1:
        raise ValueError("cuts must be a positive integer")
    if nested.scores is None:
        raise MissingScores("merged regions require confidence scores")
    scores = nested.scores[nested.order]
    lo, hi = float(scores.min()), float(scores.max())
    if lo == hi:
        raise DegenerateScores("all confidence scores are equal")

    sub_alpha = alpha / cuts
    thresholds = np.linspace(lo, hi, cuts + 1)[:cuts]
    uppers = np.full(nested.depth, np.inf)

    # rebuild each restricted family through a lightweight study stand-in
    carrier = _Carrier(nested)
    for thr in thresholds:
        keep = nested.order[nested.scores[nested.order] >= thr]
        sub = build_nested(carrier, positions=np.sort(keep))
        region = simultaneous_region(sub, sub_alpha, **slack_kwargs)
        where = _prefix_matches(nested, sub)
        for k in range(sub.depth):
            j = where[k]
            if j >= 0:
                uppers[j] = min(uppers[j], region.uppers[k])

    if not np.all(np.isfinite(uppers)):
        raise AssertionError("the minimum-score threshold must bound every prefix")
    return ConfidenceRegion(uppers, nested.sizes.copy(), 1.0 - alpha, "merged")


class _Carrier:
    """Just enough of the study interface for build_nested."""

    def __init__(self, nested):
        self.modules = nested.param_module
        self.scores = nested.scores
        self.agree = nested.param_agree
        self.n = nested.param_module.size
        self.n_modules = int(nested.param_module.max()) + 1
