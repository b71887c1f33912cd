"""Minimal reverse-mode automatic differentiation on an append-only tape.

Nodes are appended in forward order, so reverse insertion order is a valid
topological order for the backward sweep.  Values are float64 ndarrays or
python floats (scalars); the graph operator is a constant, so no gradient
flows through graph structure.
"""

from __future__ import annotations

import numpy as np

from .graphs import PropagationOperator, spmm

ALPHA_GROUP = "alpha-group"
WEIGHT_GROUP = "weight-group"


class Parameter:
    """Trainable value with a same-shape gradient slot and optimizer group."""

    def __init__(self, value, group: str = WEIGHT_GROUP, name: str = ""):
        self.value = np.asarray(value, dtype=np.float64)
        self.grad = np.zeros_like(self.value)
        if group not in (ALPHA_GROUP, WEIGHT_GROUP):
            raise ValueError(f"unknown parameter group {group!r}")
        self.group = group
        self.name = name

    def zero_grad(self):
        self.grad[...] = 0.0

    def __repr__(self):
        return f"Parameter({self.name or 'unnamed'}, shape={self.value.shape}, group={self.group})"


class Node:
    __slots__ = ("idx", "value", "parents", "vjp")

    def __init__(self, idx, value, parents, vjp):
        self.idx = idx
        self.value = value
        self.parents = parents
        self.vjp = vjp


class Tape:
    """Append-only record of forward operations evaluated eagerly.

    One tape per forward/backward cycle; build, call :func:`backward`,
    discard.
    """

    def __init__(self):
        self.nodes: list[Node] = []
        self.param_leaves: list[tuple[int, Parameter]] = []

    def _add(self, value, parents=(), vjp=None) -> Node:
        node = Node(len(self.nodes), value, tuple(parents), vjp)
        self.nodes.append(node)
        return node

    # -- leaves ---------------------------------------------------------

    def constant(self, value) -> Node:
        return self._add(np.asarray(value, dtype=np.float64))

    def param(self, p: Parameter) -> Node:
        node = self._add(p.value)
        self.param_leaves.append((node.idx, p))
        return node

    # -- elementwise / linear ops ---------------------------------------

    def add(self, a: Node, b: Node) -> Node:
        if np.shape(a.value) != np.shape(b.value):
            raise ValueError(f"add shape mismatch: {np.shape(a.value)} vs {np.shape(b.value)}")
        return self._add(a.value + b.value, (a, b), lambda g: (g, g))

    def sub(self, a: Node, b: Node) -> Node:
        if np.shape(a.value) != np.shape(b.value):
            raise ValueError(f"sub shape mismatch: {np.shape(a.value)} vs {np.shape(b.value)}")
        return self._add(a.value - b.value, (a, b), lambda g: (g, -g))

    def scale_const(self, a: Node, s: float) -> Node:
        s = float(s)
        return self._add(s * a.value, (a,), lambda g: (s * g,))

    def scale(self, a: Node, s: Node) -> Node:
        if np.ndim(s.value) != 0:
            raise ValueError("scale expects a scalar node as multiplier")
        aval, sval = a.value, float(s.value)
        return self._add(sval * aval, (a, s), lambda g: (sval * g, float(np.sum(g * aval))))

    def matmul(self, a: Node, b: Node) -> Node:
        if a.value.shape[1] != b.value.shape[0]:
            raise ValueError(f"matmul shape mismatch: {a.value.shape} @ {b.value.shape}")
        aval, bval = a.value, b.value
        return self._add(aval @ bval, (a, b), lambda g: (g @ bval.T, aval.T @ g))

    def spmm_const(self, p: PropagationOperator, a: Node) -> Node:
        # operator is symmetric, so the pullback is another propagation
        return self._add(spmm(p, a.value), (a,), lambda g: (spmm(p, g),))

    def add_bias(self, a: Node, b: Node) -> Node:
        if b.value.ndim != 1 or b.value.shape[0] != a.value.shape[1]:
            raise ValueError(f"bias shape {b.value.shape} incompatible with {a.value.shape}")
        return self._add(a.value + b.value[None, :], (a, b), lambda g: (g, g.sum(axis=0)))

    def get(self, vec: Node, i: int) -> Node:
        if vec.value.ndim != 1:
            raise ValueError("get expects a vector node")
        size = vec.value.shape[0]

        def vjp(g):
            out = np.zeros(size)
            out[i] = g
            return (out,)

        return self._add(float(vec.value[i]), (vec,), vjp)

    def sum_all(self, a: Node) -> Node:
        shape = np.shape(a.value)
        return self._add(float(np.sum(a.value)), (a,), lambda g: (np.full(shape, g),))

    # -- nonlinearities ---------------------------------------------------

    def relu(self, a: Node) -> Node:
        # subgradient 1 at exactly 0: the residue coefficients start at
        # (0,...,0,1), which puts every early-layer pre-activation exactly on
        # the kink; a 0 convention there would freeze those coefficients
        mask = a.value >= 0
        return self._add(np.where(mask, a.value, 0.0), (a,), lambda g: (g * mask,))

    def dropout(self, a: Node, rate: float, rng: np.random.Generator, mode: str) -> Node:
        """Inverted-scaling dropout; identity in eval/linear mode."""
        if not 0.0 <= rate < 1.0:
            raise ValueError(f"dropout rate must be in [0, 1), got {rate}")
        if mode != "train" or rate == 0.0:
            return a
        keep = rng.random(a.value.shape) >= rate
        scale = 1.0 / (1.0 - rate)
        mask = keep * scale
        return self._add(a.value * mask, (a,), lambda g: (g * mask,))

    def log_softmax_rows(self, a: Node) -> Node:
        m = a.value.max(axis=1, keepdims=True)
        shifted = a.value - m
        lse = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
        out = shifted - lse
        softmax = np.exp(out)
        return self._add(out, (a,), lambda g: (g - softmax * g.sum(axis=1, keepdims=True),))

    def nll_loss(self, logp: Node, labels: np.ndarray, mask: np.ndarray) -> Node:
        """Mean negative log-likelihood over the masked rows."""
        labels = np.asarray(labels, dtype=np.int64)
        mask = np.asarray(mask, dtype=np.int64)
        if mask.size == 0:
            raise ValueError("nll_loss mask selects no nodes")
        picked = logp.value[mask, labels[mask]]
        loss = -float(picked.mean())
        shape = logp.value.shape

        def vjp(g):
            out = np.zeros(shape)
            np.subtract.at(out, (mask, labels[mask]), g / mask.size)
            return (out,)

        return self._add(loss, (logp,), vjp)


def identity_mapping(tape: Tape, h: Node, w: Node, beta: float) -> Node:
    """h ((1-beta) I + beta W), computed as (1-beta) h + beta (h W)."""
    if w.value.ndim != 2 or w.value.shape[0] != w.value.shape[1]:
        raise ValueError(f"identity mapping needs a square matrix, got {w.value.shape}")
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must be in [0, 1], got {beta}")
    return tape.add(tape.scale_const(h, 1.0 - beta), tape.scale_const(tape.matmul(h, w), beta))


def backward(tape: Tape, loss: Node):
    """Reverse sweep from the scalar loss; accumulates Parameter.grad."""
    if np.ndim(loss.value) != 0:
        raise ValueError("backward requires a scalar loss node")
    grads: dict[int, object] = {loss.idx: 1.0}
    for node in reversed(tape.nodes[: loss.idx + 1]):
        g = grads.get(node.idx)
        if g is None or node.vjp is None:
            continue
        for parent, pg in zip(node.parents, node.vjp(g)):
            if parent.idx in grads:
                grads[parent.idx] = grads[parent.idx] + pg
            else:
                grads[parent.idx] = pg
    for idx, p in tape.param_leaves:
        if idx in grads:
            p.grad += grads[idx]
