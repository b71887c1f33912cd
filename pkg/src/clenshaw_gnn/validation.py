"""Input validation helpers shared by the estimator API and data paths."""

from __future__ import annotations

import numpy as np

from .graphs import Graph


def check_feature_matrix(x, n: int | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"feature matrix must be 2-D, got shape {x.shape}")
    if n is not None and x.shape[0] != n:
        raise ValueError(f"expected {n} rows, got {x.shape[0]}")
    if not np.all(np.isfinite(x)):
        raise ValueError("feature matrix contains NaN or Inf")
    return x


def check_labels(y, n: int) -> np.ndarray:
    y = np.asarray(y)
    if y.shape != (n,):
        raise ValueError(f"labels must have shape ({n},), got {y.shape}")
    if not np.issubdtype(y.dtype, np.integer):
        rounded = np.rint(np.asarray(y, dtype=np.float64))
        if not np.array_equal(rounded, np.asarray(y, dtype=np.float64)):
            raise ValueError("labels must be integers")
        y = rounded
    y = y.astype(np.int64)
    if y.min() < 0:
        raise ValueError("labels must be non-negative class indices")
    return y


def check_indices(idx, n: int, name: str = "index set") -> np.ndarray:
    idx = np.asarray(idx, dtype=np.int64).ravel()
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise ValueError(f"{name} out of range for n={n}")
    if np.unique(idx).size != idx.size:
        raise ValueError(f"{name} contains duplicates")
    return idx


def check_graph(g) -> Graph:
    if not isinstance(g, Graph):
        raise ValueError(f"expected a Graph, got {type(g).__name__}; pass graph= at construction")
    return g
