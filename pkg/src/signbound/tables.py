"""Delimiter-separated file formats: study tables, sweep tables, sim outcomes.

All numeric columns serialize with 17 significant digits so a written file
reproduces the exact doubles on re-read.
"""

import csv

import numpy as np

from .errors import SchemaError
from .sdr_core import SignStudy

STUDY_HEADER = ["param_id", "module_id", "proposed_sign", "validation_sign",
                "confidence_score"]
SWEEP_HEADER = ["subset_size", "sdp", "ci_lower", "ci_upper", "simultaneous_upper"]
SIM_HEADER = ["method", "sigma", "k", "seed", "discoveries", "type_s_proportion",
              "target"]


def _fmt(x):
    return format(float(x), ".17g")


def _parse_sign(text, row):
    try:
        value = int(text)
    except ValueError:
        raise SchemaError(f"row {row}: sign {text!r} is not an integer") from None
    if value not in (-1, 1):
        raise SchemaError(f"row {row}: sign must be -1 or +1, got {value}")
    return value


def read_study(path):
    """Parse a study table; returns (SignStudy, param_ids tuple).

    Confidence scores must be present for every row or for none; duplicate
    param_ids, invalid signs and malformed headers raise SchemaError.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("empty file: header row is mandatory") from None
        if [h.strip() for h in header] != STUDY_HEADER:
            raise SchemaError(f"expected header {','.join(STUDY_HEADER)!r}, "
                              f"got {','.join(header)!r}")
        ids, mods, prop, val, scores = [], [], [], [], []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 5:
                raise SchemaError(f"row {lineno}: expected 5 fields, got {len(row)}")
            pid, mid, p, v, score = (field.strip() for field in row)
            if not pid:
                raise SchemaError(f"row {lineno}: empty param_id")
            ids.append(pid)
            mods.append(mid)
            prop.append(_parse_sign(p, lineno))
            val.append(_parse_sign(v, lineno))
            if score == "":
                scores.append(None)
            else:
                try:
                    scores.append(float(score))
                except ValueError:
                    raise SchemaError(
                        f"row {lineno}: bad confidence_score {score!r}") from None
    if not ids:
        raise SchemaError("study table has no data rows")
    if len(set(ids)) != len(ids):
        raise SchemaError("param_id values must be unique")
    have = [s is not None for s in scores]
    if any(have) and not all(have):
        raise SchemaError("confidence_score must be present for all rows or none")
    score_arr = np.array(scores, dtype=float) if all(have) else None
    study = SignStudy.from_labels(prop, val, mods, score_arr)
    return study, tuple(ids)


def write_study(path, study, param_ids):
    if len(param_ids) != study.n:
        raise ValueError("one param_id per parameter is required")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(STUDY_HEADER)
        labels = study.module_labels
        for i in range(study.n):
            score = "" if study.scores is None else _fmt(study.scores[i])
            writer.writerow([param_ids[i], labels[study.modules[i]],
                             int(study.proposed[i]), int(study.validation[i]), score])


def write_sweep(path, rows):
    """rows: iterables of (subset_size, sdp, ci_lower, ci_upper, simultaneous_upper).

    The last entry may be None, which serializes as an empty field.
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_HEADER)
        for size, sdp, lo, hi, simu in rows:
            writer.writerow([int(size), _fmt(sdp), _fmt(lo), _fmt(hi),
                             "" if simu is None else _fmt(simu)])


def read_sweep(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip() for h in header] != SWEEP_HEADER:
            raise SchemaError("bad sweep table header")
        rows = []
        for row in reader:
            if not row:
                continue
            simu = None if row[4] == "" else float(row[4])
            rows.append((int(row[0]), float(row[1]), float(row[2]), float(row[3]), simu))
    return rows


def write_sim_outcomes(path, outcomes):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SIM_HEADER)
        for out in outcomes:
            writer.writerow([out.method, _fmt(out.sigma), _fmt(out.k), int(out.seed),
                             int(out.discoveries), _fmt(out.type_s_proportion),
                             _fmt(out.target)])
