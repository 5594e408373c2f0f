"""Synthetic access matrices with implanted coherent blocks, plus recovery scoring."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ingest import AccessMatrix
from .metrics import Bicluster, volume

MODELS = ("shift", "scale", "shift-scale")


@dataclass(frozen=True)
class ImplantSpec:
    """One coherent block to implant: placement, size, and coherence model.

    shift: row_i = base + beta_i; scale: row_i = alpha_i * base (alpha_i > 0);
    shift-scale: row_i = alpha_i * base + beta_i.
    """

    n_rows: int
    n_cols: int
    model: str = "shift"
    row_start: int = 0
    col_start: int = 0
    base_range: tuple[float, float] = (10.0, 50.0)
    shift_range: tuple[float, float] = (0.0, 30.0)
    scale_range: tuple[float, float] = (0.5, 3.0)
    # draw base/shift/scale as integers so the block stays exactly coherent
    # after rounding; with real-valued draws rounding perturbs the correlations
    integer_valued: bool = False

    def __post_init__(self):
        if self.n_rows < 2 or self.n_cols < 2:
            raise ValueError("implants must be at least 2x2")
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}")
        if self.scale_range[0] <= 0.0:
            raise ValueError("scale coefficients must be strictly positive")


@dataclass(frozen=True, eq=False)
class SyntheticData:
    matrix: AccessMatrix
    truth: tuple[Bicluster, ...]
    raw: np.ndarray  # real-valued matrix before integer rounding
    overwrites: tuple[dict, ...] = ()  # cells a later implant took from an earlier one


def generate(
    n: int,
    m: int,
    implants: list[ImplantSpec],
    seed: int | None = None,
    noise_range: tuple[int, int] = (0, 5),
) -> SyntheticData:
    """Uniform-noise background with each implant's block overwritten by its model.

    Overlapping implants are allowed; the later implant wins per cell and the
    conflict is recorded. Final entries are rounded to nonnegative integers.
    """
    if n < 2 or m < 2:
        raise ValueError("matrix must be at least 2x2")
    rng = np.random.default_rng(seed)
    raw = rng.integers(noise_range[0], noise_range[1] + 1, size=(n, m)).astype(float)
    owner = np.full((n, m), -1, dtype=int)
    truth: list[Bicluster] = []
    overwrites: list[dict] = []
    for idx, spec in enumerate(implants):
        r0, c0 = spec.row_start, spec.col_start
        r1, c1 = r0 + spec.n_rows, c0 + spec.n_cols
        if r0 < 0 or c0 < 0 or r1 > n or c1 > m:
            raise ValueError(f"implant {idx} does not fit inside the {n}x{m} matrix")
        if spec.integer_valued:
            base = rng.integers(
                int(np.ceil(spec.base_range[0])), int(spec.base_range[1]) + 1, size=spec.n_cols
            ).astype(float)
        else:
            base = rng.uniform(*spec.base_range, size=spec.n_cols)
        block = np.tile(base, (spec.n_rows, 1))
        if spec.model in ("scale", "shift-scale"):
            if spec.integer_valued:
                lo = max(1, int(np.ceil(spec.scale_range[0])))
                hi = max(lo, int(spec.scale_range[1]))
                alphas = rng.integers(lo, hi + 1, size=(spec.n_rows, 1)).astype(float)
            else:
                alphas = rng.uniform(*spec.scale_range, size=(spec.n_rows, 1))
            block *= alphas
        if spec.model in ("shift", "shift-scale"):
            if spec.integer_valued:
                betas = rng.integers(
                    int(np.ceil(spec.shift_range[0])), int(spec.shift_range[1]) + 1,
                    size=(spec.n_rows, 1),
                ).astype(float)
            else:
                betas = rng.uniform(*spec.shift_range, size=(spec.n_rows, 1))
            block += betas
        taken = int((owner[r0:r1, c0:c1] >= 0).sum())
        if taken:
            overwrites.append({"implant": idx, "cells_overwritten": taken})
        raw[r0:r1, c0:c1] = block
        owner[r0:r1, c0:c1] = idx
        truth.append(Bicluster(tuple(range(r0, r1)), tuple(range(c0, c1))))
    values = np.maximum(np.rint(raw), 0).astype(np.int64)
    matrix = AccessMatrix(
        values,
        tuple(f"user_{i}" for i in range(n)),
        tuple(f"page_{j}" for j in range(m)),
    )
    return SyntheticData(matrix, tuple(truth), raw, tuple(overwrites))


def jaccard(b1: Bicluster, b2: Bicluster) -> float:
    """Intersection-over-union of the two element (cell) sets; 0 when both empty."""
    inter = len(set(b1.rows) & set(b2.rows)) * len(set(b1.cols) & set(b2.cols))
    union = volume(b1) + volume(b2) - inter
    return inter / union if union else 0.0


def score_recovery(found: list[Bicluster], truth: list[Bicluster]) -> tuple[list[float], float]:
    """Best Jaccard per ground-truth block over the found set, plus the mean."""
    scores = [max((jaccard(f, t) for f in found), default=0.0) for t in truth]
    mean = sum(scores) / len(scores) if scores else 0.0
    return scores, mean


def to_json(data: SyntheticData, path: str | Path) -> None:
    payload = {
        "matrix": data.matrix.values.tolist(),
        "users": list(data.matrix.user_labels),
        "pages": list(data.matrix.page_labels),
        "truth": [{"rows": list(b.rows), "cols": list(b.cols)} for b in data.truth],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True)


def from_json(path: str | Path) -> tuple[AccessMatrix, list[Bicluster]]:
    with open(path) as fh:
        payload = json.load(fh)
    matrix = AccessMatrix(
        np.asarray(payload["matrix"], dtype=np.int64),
        tuple(payload["users"]),
        tuple(payload["pages"]),
    )
    truth = [Bicluster(tuple(t["rows"]), tuple(t["cols"])) for t in payload.get("truth", [])]
    return matrix, truth
