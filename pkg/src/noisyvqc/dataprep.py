"""Dataset ingestion, PCA reduction to circuit features, and splitting.

The reduction pipeline: mean-center, eigendecompose the covariance with a
cyclic Jacobi sweep (dependency-free and deterministic, including the sign
convention: each component's largest-magnitude entry is made positive),
project onto the top-k components, then min-max scale every component to
[0, pi] so the features are valid rotation angles.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .formatting import csv_line
from .seeding import derive_rng


@dataclass(frozen=True)
class RawDataset:
    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        if self.features.ndim != 2:
            raise ValueError("features must be 2-D")
        if self.labels.shape != (self.features.shape[0],):
            raise ValueError("labels must match features in length")

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]


@dataclass(frozen=True)
class ReducedDataset:
    """Projected and scaled features plus enough metadata to invert the
    scaling. basis rows are the principal components (k x original width)."""

    features: np.ndarray
    labels: np.ndarray
    basis: np.ndarray
    component_min: np.ndarray
    component_max: np.ndarray

    def __post_init__(self):
        k = self.features.shape[1]
        if self.features.min(initial=0.0) < -1e-9 or self.features.max(initial=0.0) > math.pi + 1e-9:
            raise ValueError("scaled features must lie in [0, pi]")
        gram = self.basis @ self.basis.T
        if not np.allclose(gram, np.eye(self.basis.shape[0]), atol=1e-8):
            raise ValueError("basis rows must be orthonormal")
        if self.basis.shape[0] != k:
            raise ValueError("basis row count must match feature width")

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    def unscale(self, scaled: np.ndarray) -> np.ndarray:
        """Invert the [0, pi] scaling back to projected coordinates."""
        span = self.component_max - self.component_min
        return np.asarray(scaled) / math.pi * span + self.component_min


def load_csv(path: str) -> RawDataset:
    """Rows of comma-separated features with a trailing integer label."""
    rows = []
    labels = []
    width = None
    with open(path) as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if width is None:
                width = len(fields)
                if width < 2:
                    raise ValueError(f"line {lineno}: need at least one feature and a label")
            if len(fields) != width:
                raise ValueError(
                    f"line {lineno}: {len(fields)} fields, expected {width}"
                )
            try:
                values = [float(f) for f in fields]
            except ValueError as exc:
                raise ValueError(f"line {lineno}: non-numeric field ({exc})") from None
            label = values[-1]
            if abs(label - round(label)) > 1e-9:
                raise ValueError(f"line {lineno}: label {label} is not an integer")
            rows.append(values[:-1])
            labels.append(int(round(label)))
    if not rows:
        raise ValueError(f"{path}: no rows")
    return RawDataset(np.array(rows, dtype=float), np.array(labels, dtype=int))


def filter_binary(data: RawDataset, labels: Tuple[int, int] = (0, 1)) -> RawDataset:
    """Keep only the two requested classes, preserving row order."""
    mask = np.isin(data.labels, labels)
    if not mask.any():
        raise ValueError(f"no rows with labels {labels}")
    return RawDataset(data.features[mask], data.labels[mask])


def jacobi_eigh(matrix: np.ndarray, max_sweeps: int = 60) -> Tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns (eigenvalues, eigenvectors-as-columns), sorted descending.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if not np.allclose(a, a.T, atol=1e-10 * max(1.0, float(np.abs(a).max()))):
        raise ValueError("matrix must be symmetric")
    m = a.shape[0]
    v = np.eye(m)
    scale = float(np.abs(a).max())
    if scale == 0.0:
        return np.zeros(m), v
    for _ in range(max_sweeps):
        # cancellation can push the difference a hair below zero once the
        # matrix is numerically diagonal
        off = math.sqrt(max(0.0, float((a**2).sum() - (np.diag(a) ** 2).sum())))
        if off <= 1e-14 * scale * m:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[p, q]
                if abs(apq) <= 1e-18 * scale:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                col_p = c * a[:, p] - s * a[:, q]
                col_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = col_p, col_q
                row_p = c * a[p, :] - s * a[q, :]
                row_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = row_p, row_q
                a[p, q] = a[q, p] = 0.0
                vec_p = c * v[:, p] - s * v[:, q]
                vec_q = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = vec_p, vec_q
    order = np.argsort(np.diag(a))[::-1]
    return np.diag(a)[order], v[:, order]


def pca_reduce(data: RawDataset, k: int = 3) -> ReducedDataset:
    """Top-k principal components of the feature covariance, scaled to [0, pi]."""
    n, width = data.features.shape
    if n < k:
        raise ValueError(f"need at least {k} rows, got {n}")
    if width < k:
        raise ValueError(f"need at least {k} feature columns, got {width}")
    centered = data.features - data.features.mean(axis=0)
    cov = centered.T @ centered / (n - 1) if n > 1 else np.zeros((width, width))
    eigenvalues, eigenvectors = jacobi_eigh(cov)
    floor = max(float(eigenvalues.max(initial=0.0)), 0.0) * 1e-12
    achievable = int((eigenvalues > floor).sum())
    if achievable < k:
        raise ValueError(
            f"covariance rank {achievable} is below the requested {k} components"
        )
    basis = eigenvectors[:, :k].T.copy()
    for row in basis:
        if row[np.argmax(np.abs(row))] < 0.0:
            row *= -1.0
    projected = centered @ basis.T
    lo = projected.min(axis=0)
    hi = projected.max(axis=0)
    if np.any(hi - lo <= 0.0):
        raise ValueError("a selected component has zero spread; cannot scale")
    scaled = (projected - lo) / (hi - lo) * math.pi
    return ReducedDataset(
        features=scaled,
        labels=data.labels.copy(),
        basis=basis,
        component_min=lo,
        component_max=hi,
    )


def split(data, n_train: int, n_test: int, seed: int):
    """Random disjoint (train, test) split covering the first n_train + n_test
    positions of a seeded permutation; returns two datasets of `data`'s type."""
    n = data.features.shape[0]
    if n_train < 1 or n_test < 1:
        raise ValueError("both split sizes must be >= 1")
    if n_train + n_test > n:
        raise ValueError(f"split {n_train}+{n_test} exceeds {n} rows")
    perm = derive_rng(seed, "split").permutation(n)
    train_idx = perm[:n_train]
    test_idx = perm[n_train : n_train + n_test]
    def take(idx):
        return dataclasses.replace(data, features=data.features[idx], labels=data.labels[idx])

    return take(train_idx), take(test_idx)


def synthesize(n: int, seed: int, separation: float = 6.0, width: int = 64) -> RawDataset:
    """Offline stand-in for the digits file: two Gaussian blobs in [0, 16]^width
    with labels alternating 0, 1. Deterministic given seed."""
    if n < 2:
        raise ValueError("need n >= 2")
    rng = derive_rng(seed, "synthesize")
    labels = np.arange(n) % 2
    centers = np.where(labels[:, None] == 0, 8.0 - separation / 2.0, 8.0 + separation / 2.0)
    features = rng.normal(loc=centers, scale=1.5, size=(n, width))
    return RawDataset(np.clip(features, 0.0, 16.0), labels.astype(int))


def reduced_to_csv(data: ReducedDataset) -> str:
    k = data.features.shape[1]
    lines = [",".join([f"f{i + 1}" for i in range(k)] + ["label"])]
    for row, label in zip(data.features, data.labels):
        lines.append(csv_line(list(row) + [int(label)]))
    return "\n".join(lines) + "\n"


def load_reduced_csv(path: str) -> ReducedDataset:
    """Read back a reduced CSV (header f1..fk,label). The basis and scaler
    metadata are not stored in the file; identity placeholders are used."""
    rows = []
    labels = []
    with open(path) as handle:
        header = handle.readline().strip().split(",")
        k = len(header) - 1
        if k < 1 or header[-1] != "label":
            raise ValueError(f"{path}: expected header f1,...,label")
        for lineno, line in enumerate(handle, start=2):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if len(fields) != k + 1:
                raise ValueError(f"line {lineno}: {len(fields)} fields, expected {k + 1}")
            rows.append([float(f) for f in fields[:-1]])
            labels.append(int(round(float(fields[-1]))))
    if not rows:
        raise ValueError(f"{path}: no rows")
    features = np.array(rows, dtype=float)
    lo = features.min(axis=0)
    hi = features.max(axis=0)
    basis = np.eye(k)
    return ReducedDataset(
        features=features,
        labels=np.array(labels, dtype=int),
        basis=basis,
        component_min=lo,
        component_max=hi,
    )
