"""Greedy seed growth: ACV-guided insertion and deletion sweeps to local optimality."""

from __future__ import annotations

import bisect
import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .metrics import Bicluster, acv_submatrix, acv_terms

STAGES = ("initial", "column-insertion", "row-insertion", "column-deletion", "row-deletion")

# a move must beat the current ACV by more than float jitter to count as an improvement
ACV_TOL = 1e-12

# on_accept(stage, acv_before, acv_after), invoked once per accepted move
AcceptHook = Callable[[str, float, float], None]


@dataclass(frozen=True)
class StageRecord:
    stage: str
    avg_acv: float
    avg_volume: float


@dataclass(frozen=True)
class StageTrace:
    """Averages across all seeds after each growth stage, in fixed stage order."""

    records: tuple[StageRecord, ...]

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["stage", "avg_acv", "avg_volume"])
            for rec in self.records:
                writer.writerow([rec.stage, repr(rec.avg_acv), repr(rec.avg_volume)])


def _acv_of(data: np.ndarray, rows: list[int], cols: list[int]) -> float:
    return acv_submatrix(data[np.ix_(rows, cols)])


def _terms_of(data: np.ndarray, rows: list[int], cols: list[int]):
    row_term, col_term = acv_terms(data[np.ix_(rows, cols)])
    return row_term, col_term


def _insertion_pass(data, rows, cols, axis, current, stage, on_accept):
    """Sweep non-members in ascending order, accepting strict ACV improvements,
    until a full sweep changes nothing. Mutates rows/cols in place.

    One extension to strict acceptance: an addition that keeps the result
    at the exact-coherence ceiling (a term equal to 1) is accepted even
    though ACV cannot exceed 1; a perfectly coherent block would otherwise
    be frozen at its seed size. Only a non-degenerate ceiling counts:
    correlations of 2-coordinate vectors are +/-1 by construction, so a
    ceiling term qualifies only when its vectors have >= 3 coordinates.
    On incoherent data no qualifying ceiling occurs and acceptance is
    purely strict.
    """
    limit = data.shape[axis]
    members = set(rows if axis == 0 else cols)
    changed = True
    while changed:
        changed = False
        for idx in range(limit):
            if idx in members:
                continue
            trial_rows = rows + [idx] if axis == 0 else rows
            trial_cols = cols + [idx] if axis == 1 else cols
            row_term, col_term = _terms_of(data, trial_rows, trial_cols)
            candidate = max(t for t in (row_term, col_term) if t is not None)
            at_ceiling = (
                row_term is not None
                and row_term >= 1.0 - ACV_TOL
                and len(trial_cols) >= 3
            ) or (
                col_term is not None
                and col_term >= 1.0 - ACV_TOL
                and len(trial_rows) >= 3
            )
            if candidate > current + ACV_TOL or at_ceiling:
                bisect.insort(rows if axis == 0 else cols, idx)
                members.add(idx)
                if on_accept is not None:
                    on_accept(stage, current, candidate)
                current = candidate
                changed = True
    return current


def _deletion_pass(data, rows, cols, axis, current, stage, on_accept):
    """Sweep members in ascending order, removing an element only when removal
    strictly increases ACV and at least 2 rows and 2 columns remain."""
    target = rows if axis == 0 else cols
    changed = True
    while changed:
        changed = False
        for idx in list(target):
            if len(target) <= 2:
                break
            trial = [v for v in target if v != idx]
            trial_rows = trial if axis == 0 else rows
            trial_cols = trial if axis == 1 else cols
            candidate = _acv_of(data, trial_rows, trial_cols)
            if candidate > current + ACV_TOL:
                target.remove(idx)
                if on_accept is not None:
                    on_accept(stage, current, candidate)
                current = candidate
                changed = True
    return current


def enlarge(matrix, b: Bicluster, on_accept: AcceptHook | None = None) -> Bicluster:
    """Column-insertion then row-insertion, each to its own fixpoint."""
    data = np.asarray(getattr(matrix, "values", matrix), dtype=float)
    if len(b.rows) < 2 or len(b.cols) < 2:
        raise ValueError("enlarge requires a bicluster of at least 2x2")
    rows, cols = list(b.rows), list(b.cols)
    current = _acv_of(data, rows, cols)
    current = _insertion_pass(data, rows, cols, 1, current, "column-insertion", on_accept)
    _insertion_pass(data, rows, cols, 0, current, "row-insertion", on_accept)
    return Bicluster(tuple(rows), tuple(cols))


def refine(matrix, b: Bicluster, on_accept: AcceptHook | None = None) -> Bicluster:
    """Column-deletion then row-deletion, never shrinking below 2x2."""
    data = np.asarray(getattr(matrix, "values", matrix), dtype=float)
    if len(b.rows) < 2 or len(b.cols) < 2:
        raise ValueError("refine requires a bicluster of at least 2x2")
    rows, cols = list(b.rows), list(b.cols)
    current = _acv_of(data, rows, cols)
    current = _deletion_pass(data, rows, cols, 1, current, "column-deletion", on_accept)
    _deletion_pass(data, rows, cols, 0, current, "row-deletion", on_accept)
    return Bicluster(tuple(rows), tuple(cols))


def _grow_one(data, seed: Bicluster, on_accept):
    """Grow one seed to single-move local optimality.

    The four stages run in fixed order; per-stage snapshots come from the
    first cycle, then the cycle repeats until no stage accepts a move so no
    single insertion or deletion can improve the result.
    """
    rows, cols = list(seed.rows), list(seed.cols)
    current = _acv_of(data, rows, cols)
    snapshots = [(current, len(rows) * len(cols))]
    passes = (
        (_insertion_pass, 1, "column-insertion"),
        (_insertion_pass, 0, "row-insertion"),
        (_deletion_pass, 1, "column-deletion"),
        (_deletion_pass, 0, "row-deletion"),
    )
    first_cycle = True
    while True:
        before = (current, len(rows), len(cols))
        for fn, axis, stage in passes:
            current = fn(data, rows, cols, axis, current, stage, on_accept)
            if first_cycle:
                snapshots.append((current, len(rows) * len(cols)))
        first_cycle = False
        if (current, len(rows), len(cols)) == before:
            break
    return Bicluster(tuple(rows), tuple(cols)), snapshots


def grow_all(
    matrix, seeds: list[Bicluster], on_accept: AcceptHook | None = None
) -> tuple[list[Bicluster], StageTrace]:
    """Grow every seed independently; trace stage-wise ACV/volume averages."""
    if not seeds:
        raise ValueError("grow_all requires at least one seed")
    data = np.asarray(getattr(matrix, "values", matrix), dtype=float)
    grown: list[Bicluster] = []
    all_snaps: list[list[tuple[float, int]]] = []
    for seed in seeds:
        result, snaps = _grow_one(data, seed, on_accept)
        grown.append(result)
        all_snaps.append(snaps)
    records = []
    for pos, stage in enumerate(STAGES):
        records.append(
            StageRecord(
                stage=stage,
                avg_acv=float(np.mean([s[pos][0] for s in all_snaps])),
                avg_volume=float(np.mean([s[pos][1] for s in all_snaps])),
            )
        )
    return grown, StageTrace(tuple(records))
