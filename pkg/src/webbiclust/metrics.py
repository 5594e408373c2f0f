"""Coherence and evaluation measures for biclusters.

ACV (average correlation value) scores a bicluster by the larger of its
mean absolute pairwise row correlation and mean absolute pairwise column
correlation. Fitness thresholds ACV and rewards volume; the overlap
degree R quantifies element sharing across a set of biclusters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Bicluster:
    """A submatrix selection: a set of row indices and a set of column indices."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(sorted(set(int(r) for r in self.rows))))
        object.__setattr__(self, "cols", tuple(sorted(set(int(c) for c in self.cols))))


@dataclass(frozen=True, eq=False)
class OverlapReport:
    """Per-element coverage counts plus the scalar overlap degree R."""

    coverage: np.ndarray  # (n, m) ints, how many biclusters contain each element
    count: int  # number of biclusters N
    r: float  # clamped overlap degree, in [0, 1]
    r_unclamped: float  # raw value; negative when many elements are uncovered


def _data_of(matrix) -> np.ndarray:
    return np.asarray(getattr(matrix, "values", matrix), dtype=float)


def pearson(x, y) -> float:
    """Pearson product-moment correlation; 0.0 when either vector has zero variance."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("pearson requires two equal-length 1-d vectors")
    if x.size < 2:
        raise ValueError("pearson requires vectors of length >= 2")
    xc = x - x.mean()
    yc = y - y.mean()
    nx = np.sqrt(xc @ xc)
    ny = np.sqrt(yc @ yc)
    if nx == 0.0 or ny == 0.0:
        return 0.0
    return float(np.clip((xc @ yc) / (nx * ny), -1.0, 1.0))


def _mean_abs_offdiag_corr(X: np.ndarray) -> float:
    """Mean |Pearson| over the distinct ordered row pairs of X (>= 2 rows).

    Zero-variance rows correlate 0 with everything, keeping the result in [0, 1].
    """
    k = X.shape[0]
    if X.shape[1] == 0:
        return 0.0
    Xc = X - X.mean(axis=1, keepdims=True)
    norms = np.linalg.norm(Xc, axis=1)
    safe = np.where(norms > 0.0, norms, 1.0)
    C = Xc @ Xc.T
    C /= safe[:, None]
    C /= safe
    dead = norms == 0.0
    if dead.any():
        C[dead, :] = 0.0
        C[:, dead] = 0.0
    np.fill_diagonal(C, 0.0)
    np.abs(C, out=C)
    np.clip(C, 0.0, 1.0, out=C)
    return float(C.sum() / (k * k - k))


def acv_terms(sub: np.ndarray) -> tuple[float | None, float | None]:
    """(row term, column term) of ACV for a submatrix; None where undefined (< 2 vectors)."""
    sub = np.asarray(sub, dtype=float)
    row_term = _mean_abs_offdiag_corr(sub) if sub.shape[0] >= 2 else None
    col_term = _mean_abs_offdiag_corr(sub.T) if sub.shape[1] >= 2 else None
    return row_term, col_term


def acv_submatrix(sub: np.ndarray) -> float:
    """ACV of an already-extracted submatrix: max of the defined row/column terms."""
    row_term, col_term = acv_terms(sub)
    terms = [t for t in (row_term, col_term) if t is not None]
    if not terms:
        raise ValueError("ACV undefined for submatrices with < 2 rows and < 2 columns")
    return max(terms)


def acv(matrix, b: Bicluster) -> float:
    """ACV of bicluster b over the host matrix; requires >= 2 rows or >= 2 columns."""
    data = _data_of(matrix)
    n, m = data.shape
    if b.rows and (b.rows[0] < 0 or b.rows[-1] >= n):
        raise ValueError("bicluster row index out of range")
    if b.cols and (b.cols[0] < 0 or b.cols[-1] >= m):
        raise ValueError("bicluster column index out of range")
    return acv_submatrix(data[np.ix_(b.rows, b.cols)])


def volume(b: Bicluster) -> int:
    """Element count |rows| * |cols|."""
    return len(b.rows) * len(b.cols)


def fitness(matrix, b: Bicluster, delta: float) -> float:
    """Volume when the bicluster is valid (>= 2x2) and its ACV reaches delta, else 0.

    Degenerate biclusters score 0 rather than erroring so arbitrary
    chromosome decodings can be evaluated.
    """
    if not 0.0 <= delta <= 1.0:
        raise ValueError("delta must lie in [0, 1]")
    if len(b.rows) < 2 or len(b.cols) < 2:
        return 0.0
    if acv(matrix, b) >= delta:
        return float(volume(b))
    return 0.0


def overlap_degree(biclusters: list[Bicluster], n: int, m: int) -> OverlapReport:
    """Overlap degree R over a set of >= 2 biclusters on an n x m host.

    Each element's contribution is (coverage - 1)/(N - 1), clamped at 0 so
    uncovered elements do not drive R negative; the unclamped aggregate is
    also reported.
    """
    count = len(biclusters)
    if count < 2:
        raise ValueError("overlap degree requires at least 2 biclusters")
    coverage = np.zeros((n, m), dtype=np.int64)
    for b in biclusters:
        if b.rows and b.cols:
            coverage[np.ix_(b.rows, b.cols)] += 1
    t = np.maximum(coverage - 1, 0) / (count - 1)
    t_raw = (coverage - 1) / (count - 1)
    r = float(t.sum() / (n * m))
    r_raw = float(t_raw.sum() / (n * m))
    return OverlapReport(coverage=coverage, count=count, r=r, r_unclamped=r_raw)
