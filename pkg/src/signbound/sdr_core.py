"""Study data model, sign disagreement proportions and the faithfulness bound.

A study pairs fixed proposed signs with random validation signs over the same
parameters, partitioned into independent modules.  The sign disagreement
proportion (SDP) over a subset is the observed disagreement fraction; its
expectation over the validation randomness is the sign disagreement rate
(SDR).  If each validation sign is correct with probability at least q, the
type S error proportion of the proposed signs is at most SDR / q.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple, Optional

import numpy as np

from .errors import DegenerateAverage, EmptySubset, InvalidFaithfulness


def _as_signs(values, name):
    arr = np.asarray(values)
    out = arr.astype(np.int8, copy=True)
    if arr.dtype.kind == "f" and not np.array_equal(arr, out):
        raise ValueError(f"{name} must contain only -1 and +1")
    if not np.all(np.abs(out) == 1):
        raise ValueError(f"{name} must contain only -1 and +1 (0 is not allowed)")
    return out


@dataclass(frozen=True, eq=False)
class SignStudy:
    """Proposed and validation signs with a module partition.

    ``modules`` holds dense internal ids ``0..m-1``; ``module_labels`` maps
    them back to the external names.  ``scores`` are optional per-parameter
    confidence scores used for ordering and preprocessing only.
    """

    proposed: np.ndarray
    validation: np.ndarray
    modules: np.ndarray
    scores: Optional[np.ndarray] = None
    module_labels: tuple = ()

    def __post_init__(self):
        proposed = _as_signs(self.proposed, "proposed")
        validation = _as_signs(self.validation, "validation")
        modules = np.asarray(self.modules, dtype=np.intp)
        n = proposed.size
        if validation.size != n or modules.size != n or n == 0:
            raise ValueError("proposed, validation and modules must share a positive length")
        if modules.min() != 0:
            raise ValueError("module ids must be dense and start at 0")
        m = int(modules.max()) + 1
        if np.unique(modules).size != m:
            raise ValueError("every module id in 0..m-1 must appear at least once")
        scores = self.scores
        if scores is not None:
            scores = np.asarray(scores, dtype=float)
            if scores.size != n:
                raise ValueError("scores must have the same length as the signs")
            if not np.all(np.isfinite(scores)):
                raise ValueError("scores must be finite")
        labels = self.module_labels
        if not labels:
            labels = tuple(str(i) for i in range(m))
        if len(labels) != m:
            raise ValueError("module_labels must have one entry per module")
        object.__setattr__(self, "proposed", proposed)
        object.__setattr__(self, "validation", validation)
        object.__setattr__(self, "modules", modules)
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "module_labels", tuple(str(x) for x in labels))

    @classmethod
    def from_labels(cls, proposed, validation, module_ids, scores=None):
        """Build a study from per-parameter module labels (any hashables)."""
        seen = {}
        dense = np.empty(len(module_ids), dtype=np.intp)
        labels = []
        for i, mid in enumerate(module_ids):
            if mid not in seen:
                seen[mid] = len(labels)
                labels.append(str(mid))
            dense[i] = seen[mid]
        return cls(proposed, validation, dense, scores, tuple(labels))

    @property
    def n(self):
        return self.proposed.size

    @property
    def n_modules(self):
        return len(self.module_labels)

    @property
    def agree(self):
        return self.proposed == self.validation

    def restrict(self, keep):
        """Sub-study on the given positions; empty modules are re-densified.

        Returns (study, positions) where positions are the kept original
        indices in ascending order.
        """
        keep = np.asarray(keep)
        if keep.dtype == bool:
            positions = np.flatnonzero(keep)
        else:
            positions = np.unique(np.asarray(keep, dtype=np.intp))
        if positions.size == 0:
            raise EmptySubset("cannot restrict a study to an empty subset")
        old_mods = self.modules[positions]
        kept_ids = np.unique(old_mods)
        remap = np.full(self.n_modules, -1, dtype=np.intp)
        remap[kept_ids] = np.arange(kept_ids.size)
        sub = SignStudy(
            self.proposed[positions],
            self.validation[positions],
            remap[old_mods],
            None if self.scores is None else self.scores[positions],
            tuple(self.module_labels[i] for i in kept_ids),
        )
        return sub, positions


@dataclass(frozen=True, eq=False)
class AgreementSummary:
    """Per-module agreement counts and widths; sufficient for all bounds."""

    counts: np.ndarray
    widths: np.ndarray
    total_agree: int
    total: int

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        widths = np.asarray(self.widths, dtype=np.int64)
        if counts.shape != widths.shape or counts.ndim != 1 or counts.size == 0:
            raise ValueError("counts and widths must be matching non-empty vectors")
        if np.any(widths <= 0):
            raise ValueError("module widths must be positive")
        if np.any(counts < 0) or np.any(counts > widths):
            raise ValueError("counts must satisfy 0 <= X_i <= a_i")
        if int(counts.sum()) != self.total_agree or int(widths.sum()) != self.total:
            raise ValueError("totals must equal the sums of counts and widths")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "widths", widths)

    @property
    def sdp(self):
        return 1.0 - self.total_agree / self.total


def _positions(subset, n):
    pos = np.asarray(subset)
    if pos.dtype == bool:
        pos = np.flatnonzero(pos)
    else:
        pos = pos.astype(np.intp)
    if pos.size == 0:
        raise EmptySubset("subset must be non-empty")
    if pos.min() < 0 or pos.max() >= n:
        raise ValueError("subset indices out of range")
    return pos


def sdp(study, subset):
    """Observed disagreement fraction over the subset (0-based positions)."""
    pos = _positions(subset, study.n)
    return float(np.mean(study.proposed[pos] != study.validation[pos]))


def summarize(study, subset):
    """Agreement counts and widths per module over the subset.

    Modules with no retained parameter are dropped; the identity
    SDP = 1 - total_agree / total holds exactly.
    """
    pos = _positions(subset, study.n)
    mods = study.modules[pos]
    agree = study.agree[pos]
    widths = np.bincount(mods, minlength=study.n_modules)
    counts = np.bincount(mods, weights=agree.astype(float), minlength=study.n_modules)
    present = widths > 0
    widths = widths[present]
    counts = counts[present].astype(np.int64)
    return AgreementSummary(counts, widths, int(counts.sum()), int(widths.sum()))


def type_s_bound(sdr_upper, q):
    """Faithfulness bound min(sdr_upper / q, 1) on the type S proportion."""
    if not 0.5 <= q <= 1.0:
        raise InvalidFaithfulness(f"q must lie in [1/2, 1], got {q!r}")
    if sdr_upper < 0.0:
        raise ValueError("sdr_upper must be nonnegative")
    return min(sdr_upper / q, 1.0)


def _signs_of_means(means, tie, rng, what):
    signs = np.sign(means).astype(np.int8)
    zeros = np.flatnonzero(signs == 0)
    if zeros.size:
        if tie == "error":
            raise DegenerateAverage(
                f"{what} average is exactly zero at positions {zeros.tolist()[:10]}"
            )
        signs[zeros] = rng.choice(np.array([-1, 1], dtype=np.int8), size=zeros.size)
    return signs


def split_replicates(estimates, proposer_indices, *, tie="error", seed=None):
    """Signs of the proposer-replicate mean and of the remaining-replicate mean.

    ``tie`` controls exact-zero averages: "error" raises DegenerateAverage,
    "random" assigns a seeded random sign (such parameters then carry the
    minimum possible |mean| confidence score of 0).
    """
    est = np.asarray(estimates, dtype=float)
    if est.ndim != 2:
        raise ValueError("estimates must be an R x n matrix")
    r = est.shape[0]
    prop = sorted(set(int(i) for i in proposer_indices))
    if not prop or len(prop) >= r or min(prop) < 0 or max(prop) >= r:
        raise ValueError("proposer_indices must be a proper non-empty subset of replicates")
    if tie not in ("error", "random"):
        raise ValueError("tie must be 'error' or 'random'")
    rest = [i for i in range(r) if i not in prop]
    rng = np.random.default_rng(seed)
    proposed = _signs_of_means(est[prop].mean(axis=0), tie, rng, "proposer")
    validation = _signs_of_means(est[rest].mean(axis=0), tie, rng, "validator")
    return proposed, validation


class SplitEnumeration(NamedTuple):
    splits: list
    sdps: np.ndarray
    mean_sdp: float


def split_enumeration(estimates, proposer_count, *, tie="error", seed=None):
    """SDP of every (R choose proposer_count) replicate split, plus the mean.

    Convenience for averaging over all splits; a single designated split is
    the default workflow elsewhere.
    """
    est = np.asarray(estimates, dtype=float)
    r = est.shape[0]
    if not 1 <= proposer_count < r:
        raise ValueError("proposer_count must satisfy 1 <= R_p < R")
    splits = list(combinations(range(r), proposer_count))
    sdps = np.empty(len(splits))
    for j, prop in enumerate(splits):
        proposed, validation = split_replicates(est, prop, tie=tie, seed=seed)
        sdps[j] = np.mean(proposed != validation)
    return SplitEnumeration(splits, sdps, float(sdps.mean()))
