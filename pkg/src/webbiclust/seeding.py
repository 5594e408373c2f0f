"""Seed formation: independent K-means over rows and columns, crossed into biclusters."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import Bicluster


@dataclass(frozen=True)
class SeedingConfig:
    k_users: int = 12
    k_pages: int = 10
    max_iter: int = 100
    restarts: int = 5
    seed: int | None = None
    normalize_rows: bool = False  # L1-normalize vectors before clustering


def _kmeans_pp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    centroids = np.empty((k, X.shape[1]), dtype=float)
    centroids[0] = X[rng.integers(len(X))]
    d2 = ((X - centroids[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            idx = rng.integers(len(X))
        else:
            idx = int(np.searchsorted(np.cumsum(d2 / total), rng.random()))
            idx = min(idx, len(X) - 1)
        centroids[c] = X[idx]
        d2 = np.minimum(d2, ((X - centroids[c]) ** 2).sum(axis=1))
    return centroids


def _lloyd(X: np.ndarray, k: int, rng: np.random.Generator, max_iter: int):
    centroids = _kmeans_pp_init(X, k, rng)
    labels = np.zeros(len(X), dtype=np.int64)
    for _ in range(max_iter):
        d2 = ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        labels = d2.argmin(axis=1)
        new = np.empty_like(centroids)
        empties = [c for c in range(k) if not (labels == c).any()]
        if empties:
            # repair: re-seed each emptied centroid at a point far from its own centroid
            far_order = np.argsort(-d2[np.arange(len(X)), labels])
            for c, point in zip(empties, far_order):
                labels[point] = c
        for c in range(k):
            new[c] = X[labels == c].mean(axis=0)
        if np.array_equal(new, centroids):
            break
        centroids = new
    d2 = ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    labels = d2.argmin(axis=1)
    inertia = float(d2[np.arange(len(X)), labels].sum())
    return labels, inertia


def kmeans(
    points,
    k: int,
    *,
    max_iter: int = 100,
    restarts: int = 5,
    seed: int | None = None,
) -> np.ndarray:
    """Lloyd K-means with k-means++ restarts; returns the per-point cluster labels.

    Deterministic for a fixed seed: restarts use independently spawned RNG
    streams and the lowest-inertia run wins, earliest restart on ties.
    """
    X = np.asarray(points, dtype=float)
    if X.ndim != 2:
        raise ValueError("points must form a 2-d array")
    if not 1 <= k <= len(X):
        raise ValueError(f"k={k} must lie in 1..{len(X)}")
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    streams = root.spawn(max(restarts, 1))
    best_labels, best_inertia = None, np.inf
    for ss in streams:
        labels, inertia = _lloyd(X, k, np.random.default_rng(ss), max_iter)
        if inertia < best_inertia:
            best_labels, best_inertia = labels, inertia
    return best_labels


def form_seeds(matrix, user_assignment, page_assignment) -> list[Bicluster]:
    """Cross user clusters with page clusters; drop combinations thinner than 2x2."""
    user_assignment = np.asarray(user_assignment)
    page_assignment = np.asarray(page_assignment)
    seeds = []
    for uc in sorted(set(user_assignment.tolist())):
        rows = np.flatnonzero(user_assignment == uc)
        if len(rows) < 2:
            continue
        for pc in sorted(set(page_assignment.tolist())):
            cols = np.flatnonzero(page_assignment == pc)
            if len(cols) < 2:
                continue
            seeds.append(Bicluster(tuple(rows.tolist()), tuple(cols.tolist())))
    return seeds


def two_way_seeds(matrix, cfg: SeedingConfig) -> list[Bicluster]:
    """Cluster rows and columns of the matrix independently and cross the partitions."""
    data = np.asarray(getattr(matrix, "values", matrix), dtype=float)
    n, m = data.shape
    if not (1 <= cfg.k_users <= n and 1 <= cfg.k_pages <= m):
        raise ValueError("cluster counts must not exceed the matrix dimensions")
    rows = data
    cols = data.T
    if cfg.normalize_rows:
        rows = rows / np.maximum(rows.sum(axis=1, keepdims=True), 1.0)
        cols = cols / np.maximum(cols.sum(axis=1, keepdims=True), 1.0)
    ss = np.random.SeedSequence(cfg.seed).spawn(2)
    user_assignment = kmeans(
        rows, cfg.k_users, max_iter=cfg.max_iter, restarts=cfg.restarts, seed=ss[0]
    )
    page_assignment = kmeans(
        cols, cfg.k_pages, max_iter=cfg.max_iter, restarts=cfg.restarts, seed=ss[1]
    )
    return form_seeds(matrix, user_assignment, page_assignment)
