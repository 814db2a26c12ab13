"""Synthetic replicated-study benchmark and the directional BH baseline.

Parameters are standard normal; each replicate measures them with normal
noise whose variance is sigma^2 for most parameters and k * sigma^2 for a
random tenth, the classic setting where a pooled equal-variance model is
misspecified.  The SDR-based selectors see one replicate as proposer and the
rest as validator; the BH baseline sees all replicates pooled under the
equal-variance model and assigns signs from the combined estimate.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .error_control import ControlConfig, select
from .errors import InsufficientReplicates
from .sdr_core import SignStudy, split_replicates

SDR_METHODS = {
    "sdr-sdp": "sdp-point",
    "sdr-ci": "ci-per-subset",
    "sdr-simultaneous": "simultaneous",
}
ALL_METHODS = tuple(SDR_METHODS) + ("bh",)


@dataclass(frozen=True)
class SimConfig:
    """One simulation cell: size, noise scale, inflation factor and seed."""

    n: int
    sigma: float
    k: float = 1.0
    inflated_fraction: float = 0.10
    replicates: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.sigma <= 0.0:
            raise ValueError("sigma must be positive")
        if self.k < 1.0:
            raise ValueError("k must be at least 1")
        if not 0.0 <= self.inflated_fraction <= 1.0:
            raise ValueError("inflated_fraction must lie in [0, 1]")
        if self.replicates < 1:
            raise ValueError("replicates must be positive")


@dataclass(frozen=True)
class SimOutcome:
    """One method's result on one cell."""

    method: str
    sigma: float
    k: float
    seed: int
    discoveries: int
    type_s_proportion: float
    target: float


def _setup(config):
    rng = np.random.default_rng(config.seed)
    theta = rng.standard_normal(config.n)
    n_inflated = int(math.ceil(config.inflated_fraction * config.n))
    inflated = rng.permutation(config.n)[:n_inflated]
    sd = np.full(config.n, config.sigma)
    sd[inflated] = config.sigma * math.sqrt(config.k)
    return rng, theta, sd


def generate(config):
    """Truth vector and an R x n replicate estimate matrix, seed-reproducible.

    Draw order is fixed (truth, inflation shuffle, then noise) so identical
    configs give byte-identical outputs.
    """
    rng, theta, sd = _setup(config)
    noise = rng.standard_normal((config.replicates, config.n))
    return theta, theta[None, :] + sd[None, :] * noise


def true_sds(config):
    """Per-parameter replicate noise sd implied by the config's seed."""
    return _setup(config)[2]


def variance_pool(estimates):
    """Pooled per-replicate sd from within-parameter sample variances.

    With two replicates this is sqrt(mean((rep1 - rep2)^2 / 2)); identical
    replicates are guarded to 1e-12.
    """
    est = np.asarray(estimates, dtype=float)
    if est.ndim != 2 or est.shape[0] < 2:
        raise InsufficientReplicates("variance pooling needs at least 2 replicates")
    return max(float(np.sqrt(est.var(axis=0, ddof=1).mean())), 1e-12)


def bh_directional(estimates, assumed_sd, level):
    """Step-up selection on two-sided normal p-values, signs from estimates.

    p_i = 2 * upper_tail(|estimate_i| / assumed_sd); the largest rank i with
    p_(i) <= i * level / n and everything below it is selected.  Returns
    (indices ascending, signs) and may be empty.
    """
    est = np.asarray(estimates, dtype=float)
    if assumed_sd <= 0.0:
        raise ValueError("assumed_sd must be positive")
    n = est.size
    z = np.abs(est) / assumed_sd
    pvals = erfc(z / math.sqrt(2.0))  # = 2 * standard normal upper tail
    order = np.argsort(pvals, kind="stable")
    passing = np.flatnonzero(pvals[order] <= level * np.arange(1, n + 1) / n)
    if passing.size == 0:
        return np.array([], dtype=np.intp), np.array([], dtype=np.int8)
    chosen = np.sort(order[: passing[-1] + 1])
    return chosen, np.sign(est[chosen]).astype(np.int8)


def score_selection(selected, signs, theta, target, *, method="external",
                    sigma=float("nan"), k=float("nan"), seed=-1):
    """Realized type S proportion of an externally supplied selection.

    Lets selections computed by other tools be scored on the same simulated
    truth; an empty selection scores 0.
    """
    selected = np.asarray(selected, dtype=np.intp)
    if selected.size:
        wrong = np.sign(np.asarray(theta, dtype=float)[selected]) != np.asarray(signs)
        proportion = float(np.mean(wrong))
    else:
        proportion = 0.0
    return SimOutcome(method, sigma, k, seed, int(selected.size), proportion, target)


def _cell_seed(seed, i_sigma, i_k):
    ss = np.random.SeedSequence((int(seed), int(i_sigma), int(i_k)))
    return int(ss.generate_state(1)[0])


def run_comparison(base, sigma_grid, k_grid, seeds, methods, *, target=0.1,
                   q=0.5, alpha=0.1, **solver_kwargs):
    """One SimOutcome per (method, sigma, k, seed) over the grid.

    Each parameter is its own module, confidence scores are the absolute
    proposer estimates, and SDR methods select at the faithfulness-adjusted
    threshold (estimate / q <= target).  Every cell derives an independent
    seed substream from its grid position, so results do not depend on
    traversal order.
    """
    methods = tuple(methods)
    for name in methods:
        if name not in ALL_METHODS:
            raise ValueError(f"unknown method {name!r}")
    outcomes = []
    for i_sigma, sigma in enumerate(sigma_grid):
        for i_k, k in enumerate(k_grid):
            for seed in seeds:
                config = SimConfig(
                    n=base.n,
                    sigma=float(sigma),
                    k=float(k),
                    inflated_fraction=base.inflated_fraction,
                    replicates=base.replicates,
                    seed=_cell_seed(seed, i_sigma, i_k),
                )
                theta, est = generate(config)
                outcomes.extend(
                    _score_cell(theta, est, methods, float(sigma), float(k),
                                int(seed), target, q, alpha, solver_kwargs)
                )
    return outcomes


def _score_cell(theta, est, methods, sigma, k, seed, target, q, alpha, solver_kwargs):
    results = []
    proposed, validation = split_replicates(est, (0,), tie="random", seed=seed)
    study = SignStudy(
        proposed, validation, np.arange(theta.size, dtype=np.intp),
        scores=np.abs(est[0]),
    )
    for name in methods:
        if name == "bh":
            # The equal-variance model is stated per replicate estimate, so BH
            # tests one replicate against the sd pooled from all of them; at
            # k = 1 that model is exactly correct.
            idx, signs = bh_directional(est[0], variance_pool(est), target)
            results.append(score_selection(idx, signs, theta, target, method=name,
                                           sigma=sigma, k=k, seed=seed))
        else:
            config = ControlConfig(target_v=target, q=q, alpha=alpha,
                                   method=SDR_METHODS[name])
            picked = select(study, config, **solver_kwargs)
            results.append(score_selection(
                picked.selected, proposed[picked.selected], theta, target,
                method=name, sigma=sigma, k=k, seed=seed,
            ))
    return results
