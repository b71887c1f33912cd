"""Undirected graphs in CSR form and their normalized propagation operators.

The propagation operator used everywhere downstream is the self-looped
symmetrically normalized adjacency

    P = (D + I)^{-1/2} (A + I) (D + I)^{-1/2},

whose spectrum lies in (-1, 1], and the matching normalized Laplacian
L = I - P.  All arithmetic is float64.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

PROP_ADJACENCY = "normalized-adjacency"
PROP_LAPLACIAN = "laplacian"


@dataclass(frozen=True, eq=False)
class Graph:
    """Symmetric sparse adjacency, CSR layout, no stored self-loops.

    Column indices are strictly increasing within each row.  Instances are
    immutable after construction; build them with :func:`build_graph`.
    """

    n: int
    rows: np.ndarray  # (n+1,) int64 row offsets
    cols: np.ndarray  # (nnz,) int64 column indices
    vals: np.ndarray  # (nnz,) float64 edge weights

    @property
    def nnz(self) -> int:
        return int(self.cols.shape[0])

    @property
    def num_edges(self) -> int:
        """Number of undirected edges (each stored twice)."""
        return self.nnz // 2

    def degrees(self) -> np.ndarray:
        """Weighted degree of every node (sum of incident edge weights)."""
        row_idx = np.repeat(np.arange(self.n), np.diff(self.rows))
        return np.bincount(row_idx, weights=self.vals, minlength=self.n)

    def neighbors(self, u: int) -> np.ndarray:
        return self.cols[self.rows[u] : self.rows[u + 1]]

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u in range(self.n):
            a[u, self.neighbors(u)] = self.vals[self.rows[u] : self.rows[u + 1]]
        return a


@dataclass(frozen=True, eq=False)
class PropagationOperator:
    """Sparse symmetric n x n operator, tagged as P (adjacency) or L = I - P."""

    matrix: sp.csr_matrix = field(repr=False)
    kind: str

    def __post_init__(self):
        if self.kind not in (PROP_ADJACENCY, PROP_LAPLACIAN):
            raise ValueError(f"unknown operator kind {self.kind!r}")
        m = self.matrix
        if m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got {m.shape}")
        asym = abs(m - m.T).max() if m.nnz else 0.0
        if asym > 1e-12:
            raise ValueError(f"operator not symmetric: max |M - M^T| = {asym:.3e}")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()


def build_graph(edges, n: int) -> Graph:
    """Build a symmetric Graph from an edge list of (u, v) or (u, v, w) tuples.

    Every input edge is inserted in both directions.  Self-loops are dropped
    (normalization re-adds exactly one per node).  Duplicate edges keep the
    first weight seen in input order; for the unweighted graphs used
    throughout, the result is independent of input order.
    """
    if n <= 0:
        raise ValueError(f"node count must be positive, got {n}")
    seen: dict[tuple[int, int], float] = {}
    for e in edges:
        if len(e) == 2:
            u, v = e
            w = 1.0
        else:
            u, v, w = e
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            continue
        if (u, v) not in seen:
            seen[(u, v)] = float(w)
            seen[(v, u)] = float(w)
    counts = np.zeros(n + 1, dtype=np.int64)
    for u, _ in seen:
        counts[u + 1] += 1
    rows = np.cumsum(counts)
    cols = np.zeros(rows[-1], dtype=np.int64)
    vals = np.zeros(rows[-1], dtype=np.float64)
    cursor = rows[:-1].copy()
    for u, v in sorted(seen):
        k = cursor[u]
        cols[k] = v
        vals[k] = seen[(u, v)]
        cursor[u] = k + 1
    return Graph(n=n, rows=rows, cols=cols, vals=vals)


def normalized_adjacency(g: Graph) -> PropagationOperator:
    """Self-looped symmetric normalization of g's adjacency.

    Off-diagonal entry (u, v) is w_uv / sqrt((d_u + 1)(d_v + 1)); the
    injected self-loop gives diagonal 1 / (d_u + 1).  Isolated nodes get
    diagonal 1.
    """
    deg = g.degrees()
    inv_sqrt = 1.0 / np.sqrt(deg + 1.0)
    row_idx = np.repeat(np.arange(g.n), np.diff(g.rows))
    data = np.concatenate([g.vals * inv_sqrt[row_idx] * inv_sqrt[g.cols], inv_sqrt**2])
    coo_r = np.concatenate([row_idx, np.arange(g.n)])
    coo_c = np.concatenate([g.cols, np.arange(g.n)])
    m = sp.csr_matrix((data, (coo_r, coo_c)), shape=(g.n, g.n))
    m.sort_indices()
    return PropagationOperator(matrix=m, kind=PROP_ADJACENCY)


def laplacian(p: PropagationOperator) -> PropagationOperator:
    """L = I - P.  Requires a normalized-adjacency operator."""
    if p.kind != PROP_ADJACENCY:
        raise ValueError(f"laplacian expects a {PROP_ADJACENCY} operator, got {p.kind}")
    m = (sp.identity(p.n, format="csr") - p.matrix).tocsr()
    m.sort_indices()
    return PropagationOperator(matrix=m, kind=PROP_LAPLACIAN)


def spmm(p: PropagationOperator, h: np.ndarray) -> np.ndarray:
    """Sparse-dense product P @ h with deterministic per-row accumulation."""
    h = np.asarray(h, dtype=np.float64)
    if h.ndim != 2 or h.shape[0] != p.n:
        raise ValueError(f"signal shape {h.shape} incompatible with operator n={p.n}")
    return p.matrix @ h


def read_edge_list(path) -> list[tuple[int, int, float]]:
    """Parse a whitespace-separated edge-list file.

    Each line is "u v" or "u v w"; lines starting with '#' and blank lines
    are ignored.  Node ids are 0-based integers.
    """
    edges = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise ValueError(f"{path}:{lineno}: expected 'u v' or 'u v w', got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
            edges.append((u, v, w))
    return edges
