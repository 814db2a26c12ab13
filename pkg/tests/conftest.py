"""Shared oracles and fixture builders.

The grid oracle below is the independent check for the exponent solver: brute
force over a dense (t, means) grid, no shared code with the solver.
"""

import math

import numpy as np
import pytest
from numba import njit

from signbound import SignStudy


def binary_kl(p, q):
    """KL divergence between Bernoulli(p) and Bernoulli(q)."""
    terms = 0.0
    if p > 0:
        terms += p * math.log(p / q)
    if p < 1:
        terms += (1 - p) * math.log((1 - p) / (1 - q))
    return terms


def equal_width_exponent(m, width, mu, s):
    """Closed form for m modules of equal width: -m * KL(s/A || mu/A)."""
    total = m * width
    return -m * binary_kl(s / total, mu / total)


@njit(cache=True)
def _grid_oracle_kernel(widths, mu, s, t_grid, n_axis):
    m = widths.shape[0]
    best = np.inf
    for it in range(t_grid.shape[0]):
        t = t_grid[it]
        xi0 = np.expm1(widths[0] * t) / widths[0]
        val = -np.inf
        if m == 1:
            val = np.log1p(xi0 * mu)
        elif m == 2:
            xi1 = np.expm1(widths[1] * t) / widths[1]
            for j in range(n_axis):
                tau0 = widths[0] * j / (n_axis - 1)
                tau1 = mu - tau0
                if tau1 < 0.0:
                    break
                if tau1 > widths[1]:
                    continue
                v = np.log1p(xi0 * tau0) + np.log1p(xi1 * tau1)
                if v > val:
                    val = v
        else:
            xi1 = np.expm1(widths[1] * t) / widths[1]
            xi2 = np.expm1(widths[2] * t) / widths[2]
            for j0 in range(n_axis):
                tau0 = widths[0] * j0 / (n_axis - 1)
                if tau0 > mu:
                    break
                for j1 in range(n_axis):
                    tau1 = widths[1] * j1 / (n_axis - 1)
                    tau2 = mu - tau0 - tau1
                    if tau2 < 0.0:
                        break
                    if tau2 > widths[2]:
                        continue
                    v = (np.log1p(xi0 * tau0) + np.log1p(xi1 * tau1)
                         + np.log1p(xi2 * tau2))
                    if v > val:
                        val = v
        cand = val - t * s
        if cand < best:
            best = cand
    return best


def grid_oracle(widths, mu, s, *, n_t=2000, n_axis=200):
    """Brute-force exponent: dense log-spaced t grid x per-axis means grid."""
    widths = np.asarray(widths, dtype=float)
    if widths.size > 3:
        raise ValueError("grid oracle supports m <= 3")
    t_hi = 700.0 / widths.max()
    t_grid = np.logspace(-5, np.log10(t_hi), n_t)
    return float(_grid_oracle_kernel(widths, float(mu), float(s), t_grid, n_axis))


def study_from_probs(rng, widths, agree_probs, *, scores=None):
    """Study with per-module Bernoulli agreement and all-(+1) proposed signs."""
    widths = np.asarray(widths, dtype=int)
    mods = np.repeat(np.arange(widths.size), widths)
    n = int(widths.sum())
    agree = rng.random(n) < np.asarray(agree_probs, dtype=float)[mods]
    proposed = np.ones(n, dtype=np.int8)
    validation = np.where(agree, 1, -1).astype(np.int8)
    if scores is None:
        scores = rng.standard_normal(n)
    return SignStudy(proposed, validation, mods, scores)


@pytest.fixture
def rng():
    return np.random.default_rng(20240801)
