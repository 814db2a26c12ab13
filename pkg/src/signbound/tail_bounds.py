"""Worst-case Chernoff-Cramer tail exponents for sums of bounded variables.

Given module widths ``a_1..a_m``, a mean budget ``mu`` and a threshold ``s``,
``tight_exponent`` computes

    log sup P(X_1 + ... + X_m >= s)

where the supremum ranges over all products of independent distributions with
``X_i`` supported on ``[0, a_i]`` and total mean at most ``mu``.  The extremal
distributions are two-point ("scaled Bernoulli") laws, which reduces the
problem to a finite minimax over the Chernoff tilt ``t`` and the per-module
means; the inner maximization is handled through its Lagrangian dual, leaving
a two-dimensional convex minimization solved by nested golden-section line
searches (see ``_kernels``).

The classical quadratic bound ``-2 (s - mu)^2 / sum(a_i^2)`` is provided for
comparison; the exact exponent is never larger.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import OptimizerDidNotConverge

NEG_INF = float("-inf")


@dataclass(frozen=True, eq=False)
class BoundProblem:
    """Widths, mean budget and threshold defining one tail-bound instance.

    Parameters
    ----------
    widths : sequence of positive reals
        Interval length ``a_i`` for each independent module.
    mu : float
        Upper bound on the expected sum, ``0 <= mu <= sum(widths)``.
    s : float
        Threshold whose exceedance probability is bounded; ``s`` above
        ``sum(widths)`` is allowed and yields an exponent of ``-inf``.
    """

    widths: np.ndarray
    mu: float
    s: float

    def __init__(self, widths, mu, s):
        w = np.asarray(widths, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("widths must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise ValueError("every width must be finite and strictly positive")
        mu = float(mu)
        s = float(s)
        if not math.isfinite(mu) or mu < 0.0 or mu > w.sum():
            raise ValueError("mu must satisfy 0 <= mu <= sum(widths)")
        if not math.isfinite(s) or s < 0.0:
            raise ValueError("s must be a finite nonnegative real")
        object.__setattr__(self, "widths", w)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "s", s)

    @property
    def total(self):
        return float(self.widths.sum())


@dataclass(frozen=True, eq=False)
class BoundResult:
    """Optimal exponent with its minimax witnesses.

    ``log_bound`` is the exponent on natural-log scale (always <= 0, with
    ``-inf`` for impossible thresholds).  ``t_opt`` is the minimizing tilt
    (``inf`` when the bound is attained only in the ``t -> inf`` limit),
    ``lam_opt`` the inner dual multiplier, and ``means_opt`` the maximizing
    per-module means, which sum to ``mu`` whenever ``0 < mu < sum(widths)``.
    """

    log_bound: float
    t_opt: float
    lam_opt: float
    means_opt: np.ndarray = field(repr=False)


def mgf_coeff(width, t):
    """Per-unit-mean MGF gain (exp(width * t) - 1) / width of a two-point law.

    Exactly zero at ``t = 0`` and evaluated via ``expm1`` so small arguments
    keep full relative accuracy.
    """
    if width <= 0.0:
        raise ValueError("width must be positive")
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    return math.expm1(width * t) / width


def dual_objective(problem, t, lam):
    """Lagrangian-dual value g(t, lam) of the inner mean-allocation problem.

    At ``t = 0`` every log term vanishes and the value is ``-t * s = 0``
    (continuity of the primal).  At ``lam = 0`` the clamped maximizers
    saturate at the widths.
    """
    if t < 0.0 or lam < 0.0:
        raise ValueError("t and lam must be nonnegative")
    if t == 0.0:
        return 0.0
    a = problem.widths
    xi = np.expm1(a * t) / a
    if lam == 0.0:
        tau = a
    else:
        tau = np.clip((xi - lam) / (xi * lam), 0.0, a)
    return float(np.log1p(xi * tau).sum() + lam * (problem.mu - tau.sum()) - t * problem.s)


def _saturated_limit(widths, mu):
    """t -> inf exponent at s = sum(widths): max of sum log(tau_i / a_i).

    The maximizing means follow a water-filling level c with
    sum_i min(c, a_i) = mu.
    """
    asc = np.sort(widths)
    m = asc.size
    prefix = 0.0
    c = asc[-1]
    for j in range(m):
        cand = (mu - prefix) / (m - j)
        if cand <= asc[j]:
            c = cand
            break
        prefix += asc[j]
    tau = np.minimum(c, widths)
    with np.errstate(divide="ignore"):
        value = float(np.sum(np.log(tau / widths)))
    lam = math.inf if c == 0.0 else 1.0 / c
    return value, lam, tau


def tight_exponent(problem, *, objective_tol=1e-10, max_iter=10_000):
    """Exact worst-case exponent min_t min_lam g(t, lam) with witnesses.

    Special cases: ``s <= mu`` gives 0 (the trivial bound), ``s`` equal to the
    total width gives the saturated t -> inf limit, and ``s`` beyond the total
    width gives ``-inf``.

    Raises
    ------
    OptimizerDidNotConverge
        If a line search hits ``max_iter`` before reaching tolerance.
    """
    a = problem.widths
    mu = problem.mu
    s = problem.s
    total = problem.total

    if s <= mu:
        means = a * (mu / total)
        return BoundResult(0.0, 0.0, 0.0, means)
    if s > total:
        return BoundResult(NEG_INF, math.inf, 0.0, a * (mu / total))
    if mu == 0.0:
        return BoundResult(NEG_INF, math.inf, 0.0, np.zeros_like(a))
    if s == total:
        value, lam, tau = _saturated_limit(a, mu)
        return BoundResult(min(value, 0.0), math.inf, lam, tau)

    desc = np.sort(a)[::-1].copy()
    # y_tol controls log(lam) resolution; t resolution is relative to the
    # bracket.  Both leave the objective converged far below objective_tol.
    y_tol = max(1e-12, objective_tol * 1e-2)
    value, t_star, lam_star, status = _kernels.minimize_exponent(
        desc, mu, s, y_tol, 1e-12, max_iter
    )
    if status != _kernels.STATUS_OK:
        raise OptimizerDidNotConverge(
            f"line search exceeded {max_iter} iterations for widths sum "
            f"{total:g}, mu={mu:g}, s={s:g}"
        )
    xi = np.expm1(a * t_star) / a
    tau = np.clip((xi - lam_star) / (xi * lam_star), 0.0, a)
    return BoundResult(min(value, 0.0), float(t_star), float(lam_star), tau)


def hoeffding_exponent(problem):
    """Classical quadratic exponent -2 (s - mu)^2 / sum(a_i^2), for s >= mu."""
    if problem.s < problem.mu:
        raise ValueError("hoeffding_exponent requires s >= mu")
    gap = problem.s - problem.mu
    return -2.0 * gap * gap / float(np.sum(problem.widths ** 2))


def improvement_ratio(problem, **solver_kwargs):
    """Gap hoeffding - tight between the two log exponents (>= 0 up to tol).

    On log scale this is the log of the ratio of the two probability bounds,
    so values above 0 mean the exact exponent is strictly tighter.  Both
    exponents vanish at s = mu, where the gap is exactly 0.
    """
    if problem.s < problem.mu:
        raise ValueError("improvement_ratio requires s >= mu")
    tight = tight_exponent(problem, **solver_kwargs).log_bound
    return hoeffding_exponent(problem) - tight
