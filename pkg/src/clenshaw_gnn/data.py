"""Dataset ingestion, synthetic block-model graphs, splits and homophily."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph, build_graph, read_edge_list


@dataclass(eq=False)
class Dataset:
    graph: Graph
    features: np.ndarray  # (n, f)
    labels: np.ndarray  # (n,) ints in 0..C-1
    names: list[str] | None = None

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        n = self.graph.n
        if self.features.ndim != 2 or self.features.shape[0] != n:
            raise ValueError(f"feature matrix must be ({n}, f), got {self.features.shape}")
        if self.labels.shape != (n,):
            raise ValueError(f"need one label per node, got shape {self.labels.shape}")
        if self.labels.min() < 0:
            raise ValueError("labels must be non-negative class indices")
        if self.n_classes < 2:
            raise ValueError("need at least 2 classes")

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def n_classes(self) -> int:
        return int(self.labels.max()) + 1


@dataclass(frozen=True, eq=False)
class Split:
    train: np.ndarray
    val: np.ndarray
    test: np.ndarray
    seed: int = 0

    def __post_init__(self):
        parts = [set(self.train.tolist()), set(self.val.tolist()), set(self.test.tolist())]
        total = sum(len(s) for s in parts)
        if len(parts[0] | parts[1] | parts[2]) != total:
            raise ValueError("split parts must be disjoint")


def load_dataset(edge_file, feature_file, label_file, normalize_features: bool = False) -> Dataset:
    """Read the on-disk triple (edge list, feature CSV, label lines).

    Features: one CSV row per node.  Labels: one integer per line.  The node
    count comes from the feature file; the files must agree.
    """
    features = []
    with open(feature_file) as fh:
        width = None
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                row = [float(tok) for tok in line.split(",")]
            except ValueError as exc:
                raise ValueError(f"{feature_file}:{lineno}: {exc}") from None
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ValueError(
                    f"{feature_file}:{lineno}: expected {width} values, got {len(row)}"
                )
            features.append(row)
    if not features:
        raise ValueError(f"{feature_file}: no feature rows")
    x = np.asarray(features, dtype=np.float64)

    labels = []
    with open(label_file) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                labels.append(int(line))
            except ValueError:
                raise ValueError(f"{label_file}:{lineno}: expected an integer label") from None
    y = np.asarray(labels, dtype=np.int64)
    if y.shape[0] != x.shape[0]:
        raise ValueError(
            f"row-count mismatch: {x.shape[0]} feature rows vs {y.shape[0]} labels"
        )

    edges = read_edge_list(edge_file)
    graph = build_graph(edges, n=x.shape[0])
    if normalize_features:
        norms = np.abs(x).sum(axis=1, keepdims=True)
        x = np.divide(x, norms, out=np.zeros_like(x), where=norms > 0)
    return Dataset(graph=graph, features=x, labels=y)


def random_split(n: int, proportions=(0.6, 0.2, 0.2), seed: int = 0) -> Split:
    """Seeded shuffle followed by contiguous train/val/test slicing."""
    if sum(proportions) > 1.0 + 1e-12:
        raise ValueError(f"proportions sum to {sum(proportions)} > 1")
    sizes = [int(n * p) for p in proportions]
    if min(sizes) < 1:
        raise ValueError(f"n={n} too small for nonempty parts at proportions {proportions}")
    perm = np.random.default_rng(seed).permutation(n)
    a, b, c = sizes
    return Split(
        train=np.sort(perm[:a]),
        val=np.sort(perm[a : a + b]),
        test=np.sort(perm[a + b : a + b + c]),
        seed=seed,
    )


def generate_sbm(
    n_per_block: int,
    blocks: int,
    p_in: float,
    p_out: float,
    feature_dim: int = 16,
    noise: float = 1.0,
    seed: int = 0,
) -> Dataset:
    """Stochastic block model with the block id as the class label.

    Node features are the class-mean basis vector plus isotropic Gaussian
    noise.  p_out > p_in yields a heterophilic graph, p_in > p_out a
    homophilic one.
    """
    if n_per_block < 1 or blocks < 2:
        raise ValueError("need n_per_block >= 1 and blocks >= 2")
    if not (0.0 <= p_in <= 1.0 and 0.0 <= p_out <= 1.0):
        raise ValueError("edge probabilities must be in [0, 1]")
    if feature_dim < blocks:
        raise ValueError(f"feature_dim={feature_dim} must be >= blocks={blocks}")
    n = n_per_block * blocks
    labels = np.repeat(np.arange(blocks), n_per_block)
    rng = np.random.default_rng(seed)

    iu, ju = np.triu_indices(n, k=1)
    prob = np.where(labels[iu] == labels[ju], p_in, p_out)
    keep = rng.random(iu.size) < prob
    edges = list(zip(iu[keep].tolist(), ju[keep].tolist()))
    graph = build_graph(edges, n=n)

    means = np.eye(blocks, feature_dim)
    x = means[labels] + noise * rng.standard_normal((n, feature_dim))
    return Dataset(graph=graph, features=x, labels=labels)


def homophily(g: Graph, labels) -> float:
    """Mean same-label neighbor fraction over non-isolated nodes."""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (g.n,):
        raise ValueError(f"need one label per node, got shape {labels.shape}")
    fractions = []
    for u in range(g.n):
        nbrs = g.neighbors(u)
        if nbrs.size == 0:
            continue
        fractions.append(float(np.mean(labels[nbrs] == labels[u])))
    if not fractions:
        raise ValueError("homophily undefined: every node is isolated")
    return float(np.mean(fractions))
