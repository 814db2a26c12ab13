"""Discovery-subset selection controlling the type S error proportion.

Candidate subsets are nested by confidence score (per parameter, or whole
modules by mean score).  Each subset gets an SDR estimate: the raw SDP, a
per-subset upper confidence bound, or a simultaneous region over the whole
nesting.  The selected subset is the largest whose estimate, divided by the
faithfulness level q, stays below the target proportion.  Only the
simultaneous estimator carries a formal guarantee (false sign discovery
exceedance at most alpha); the others are tagged accordingly.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .confidence import sdr_upper_ci
from .errors import EmptySubset, InvalidFaithfulness, MissingScores
from .sdr_core import AgreementSummary, type_s_bound
from .simultaneous import build_nested, merged_region, simultaneous_region

METHODS = ("sdp-point", "ci-per-subset", "simultaneous")
ORDERINGS = ("by-parameter-score", "by-module-mean-score")
PREPROCESS_KINDS = ("top-k-per-module", "top-fraction-of-modules", "score-threshold")


@dataclass(frozen=True)
class Preprocess:
    """Score-based filter applied before any subsets are formed."""

    kind: str
    value: float

    def __post_init__(self):
        if self.kind not in PREPROCESS_KINDS:
            raise ValueError(f"unknown preprocessing {self.kind!r}")
        if self.kind == "top-k-per-module" and int(self.value) < 1:
            raise ValueError("top-k-per-module needs k >= 1")
        if self.kind == "top-fraction-of-modules" and not 0.0 < self.value <= 1.0:
            raise ValueError("top-fraction-of-modules needs f in (0, 1]")


@dataclass(frozen=True)
class ControlConfig:
    """Target level, faithfulness, estimator choice and subset ordering."""

    target_v: float
    q: float = 0.5
    alpha: float = 0.05
    method: str = "sdp-point"
    ordering: Optional[str] = None
    preprocess: Optional[Preprocess] = None
    cuts: int = 1

    def __post_init__(self):
        if not 0.0 < self.target_v < 1.0:
            raise ValueError("target_v must lie in (0, 1)")
        if not 0.5 <= self.q <= 1.0:
            raise InvalidFaithfulness("q must lie in [1/2, 1]")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        ordering = self.ordering
        if ordering is None:
            ordering = "by-module-mean-score" if self.method == "simultaneous" \
                else "by-parameter-score"
            object.__setattr__(self, "ordering", ordering)
        if self.ordering not in ORDERINGS:
            raise ValueError(f"unknown ordering {self.ordering!r}")
        if self.method == "simultaneous" and self.ordering != "by-module-mean-score":
            raise ValueError("the simultaneous method nests whole modules; "
                             "use by-module-mean-score ordering")
        if self.cuts < 1:
            raise ValueError("cuts must be a positive integer")


@dataclass(frozen=True, eq=False)
class ControlResult:
    """Selected positions, the stopping index and the estimate trace."""

    selected: np.ndarray
    k_star: int
    trace: list  # (subset size, SDR estimate U_k) pairs, sizes increasing
    guarantee: str


def apply_preprocess(study, prep):
    """Positions retained by the filter (all positions when prep is None)."""
    if prep is None:
        return np.arange(study.n)
    if study.scores is None:
        raise MissingScores("preprocessing requires confidence scores")
    scores = study.scores
    if prep.kind == "score-threshold":
        keep = np.flatnonzero(scores >= prep.value)
    elif prep.kind == "top-k-per-module":
        k = int(prep.value)
        parts = []
        for mod in range(study.n_modules):
            members = np.flatnonzero(study.modules == mod)
            best = members[np.argsort(-scores[members], kind="stable")[:k]]
            parts.append(best)
        keep = np.sort(np.concatenate(parts))
    else:  # top-fraction-of-modules
        n_mod = study.n_modules
        width = np.bincount(study.modules, minlength=n_mod)
        means = np.bincount(study.modules, weights=scores, minlength=n_mod) / width
        ranked = np.argsort(-means, kind="stable")
        kept = ranked[: int(np.ceil(prep.value * n_mod))]
        keep = np.flatnonzero(np.isin(study.modules, kept))
    if keep.size == 0:
        raise EmptySubset("preprocessing removed every parameter")
    return keep


def nested_subsets(study, config):
    """Nested candidate subsets after preprocessing, per the config ordering.

    By-parameter ordering nests single parameters by descending score;
    by-module ordering nests whole modules by descending mean score.  Ties
    keep the original index order.  Returns (nested, positions) where
    positions maps the working study back to the input study.
    """
    if study.scores is None:
        raise MissingScores("nested subsets require confidence scores")
    keep = apply_preprocess(study, config.preprocess)
    work, positions = study.restrict(keep)
    if config.ordering == "by-module-mean-score":
        return build_nested(work), positions
    order = np.argsort(-work.scores, kind="stable")
    agree = work.agree
    from .simultaneous import NestedSummaries

    step_w = np.ones(work.n, dtype=np.int64)
    step_x = agree[order].astype(np.int64)
    bounds = np.cumsum(step_w)
    nested = NestedSummaries(
        order=order,
        boundaries=bounds,
        widths=step_w,
        counts=step_x,
        sizes=bounds.copy(),
        agreements=np.cumsum(step_x),
        param_module=work.modules,
        param_agree=agree,
        scores=work.scores,
    )
    return nested, positions


def _prefix_summary(nested, k):
    """AgreementSummary of prefix k grouped by the true modules."""
    pos = nested.order[: nested.sizes[k]]
    mods = nested.param_module[pos]
    n_mod = int(nested.param_module.max()) + 1
    width = np.bincount(mods, minlength=n_mod)
    agree = np.bincount(mods, weights=nested.param_agree[pos].astype(float),
                        minlength=n_mod)
    present = width > 0
    counts = agree[present].astype(np.int64)
    widths = width[present].astype(np.int64)
    return AgreementSummary(counts, widths, int(counts.sum()), int(widths.sum()))


def select(study, config, **solver_kwargs):
    """Largest nested subset whose type S bound stays within the target.

    The per-subset estimate U_k is divided by q before comparison with
    target_v (the faithfulness bound), so the effective rule is
    U_k <= q * target_v.  An empty selection (k_star = 0) is a valid result.
    """
    nested, positions = nested_subsets(study, config)
    if config.method == "sdp-point":
        uppers = nested.sdp_path()
        guarantee = "none"
    elif config.method == "ci-per-subset":
        uppers = np.array([
            sdr_upper_ci(_prefix_summary(nested, k), config.alpha, **solver_kwargs).upper
            for k in range(nested.depth)
        ])
        guarantee = "heuristic"
    else:
        if config.cuts > 1:
            region = merged_region(nested, config.alpha, config.cuts, **solver_kwargs)
        else:
            region = simultaneous_region(nested, config.alpha, **solver_kwargs)
        uppers = region.uppers
        guarantee = f"exceedance(alpha={config.alpha:g})"

    ok = np.array([type_s_bound(u, config.q) <= config.target_v for u in uppers])
    qualifying = np.flatnonzero(ok)
    k_star = int(qualifying[-1]) + 1 if qualifying.size else 0
    if k_star:
        selected = np.sort(positions[nested.order[: nested.sizes[k_star - 1]]])
    else:
        selected = np.array([], dtype=np.intp)
    trace = list(zip(nested.sizes.tolist(), uppers.tolist()))
    return ControlResult(selected, k_star, trace, guarantee)


def false_sign_exceedance(selected, signs, truth, target_v, *, count=False):
    """Whether the sign errors among the selection exceed the target.

    The default compares the error proportion to target_v; ``count=True``
    compares the raw error count instead.  An empty selection never exceeds.
    """
    selected = np.asarray(selected, dtype=np.intp)
    if selected.size == 0:
        return False
    signs = np.asarray(signs)
    truth = np.asarray(truth, dtype=float)
    errors = int(np.sum(np.sign(truth[selected]) != signs[selected]))
    if count:
        return errors > target_v
    return errors / selected.size > target_v
