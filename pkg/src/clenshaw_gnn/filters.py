"""Linearized propagation rules: Horner, Clenshaw and fixed-residue forms.

These are the recurrences the model stacks implement once nonlinearities
and weights are stripped.  Layer coefficient alpha_ell multiplies the
shared input h_star at layer ell; the equivalent filter on a polynomial
basis uses the reversed vector c_k = alpha_{K-k}, and that reversal
happens here, explicitly, via :func:`layer_alphas_to_filter_coeffs`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import PROP_ADJACENCY, PropagationOperator, spmm
from .polybasis import CoeffVector


@dataclass(frozen=True, eq=False)
class LinearPropagationTrace:
    """All intermediate states of a linear propagation run.

    states[0] and states[1] are the zero back-states (indices -2 and -1);
    states[ell + 2] is the layer-ell representation.  Length is K + 3.
    """

    states: list[np.ndarray]
    alphas: np.ndarray

    def state(self, ell: int) -> np.ndarray:
        """Layer state for ell in -2..K."""
        return self.states[ell + 2]

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    @property
    def order(self) -> int:
        return len(self.states) - 3


def _check_inputs(p: PropagationOperator, h_star: np.ndarray, alphas, k: int):
    if p.kind != PROP_ADJACENCY:
        raise ValueError(f"propagation requires a {PROP_ADJACENCY} operator, got {p.kind}")
    h_star = np.asarray(h_star, dtype=np.float64)
    if h_star.ndim != 2 or h_star.shape[0] != p.n:
        raise ValueError(f"signal shape {h_star.shape} incompatible with n={p.n}")
    alphas = np.asarray(alphas, dtype=np.float64).ravel()
    if alphas.size != k + 1:
        raise ValueError(f"need K+1={k + 1} layer coefficients, got {alphas.size}")
    return h_star, alphas


def horner_propagate_linear(
    p: PropagationOperator, h_star: np.ndarray, alphas, k: int
) -> LinearPropagationTrace:
    """Single-back-state recurrence H_ell = P H_{ell-1} + alpha_ell h_star.

    The final state expands to sum_ell alpha_{K-ell} P^ell h_star, i.e. a
    monomial-basis filter with reversed coefficients.
    """
    h_star, alphas = _check_inputs(p, h_star, alphas, k)
    zero = np.zeros_like(h_star)
    states = [zero, zero.copy()]
    cur = zero
    for ell in range(k + 1):
        cur = spmm(p, cur) + alphas[ell] * h_star
        states.append(cur)
    return LinearPropagationTrace(states=states, alphas=alphas)


def clenshaw_propagate_linear(
    p: PropagationOperator, h_star: np.ndarray, alphas, k: int
) -> LinearPropagationTrace:
    """Two-back-state recurrence H_ell = 2 P H_{ell-1} - H_{ell-2} + alpha_ell h_star.

    Mirrors the backward Clenshaw recurrence; the final state equals a
    second-kind Chebyshev filter with coefficients c_k = alpha_{K-k}.
    """
    h_star, alphas = _check_inputs(p, h_star, alphas, k)
    zero = np.zeros_like(h_star)
    states = [zero, zero.copy()]
    prev2, prev1 = states[0], states[1]
    for ell in range(k + 1):
        cur = (2.0 * spmm(p, prev1) - prev2) + alphas[ell] * h_star
        states.append(cur)
        prev2, prev1 = prev1, cur
    return LinearPropagationTrace(states=states, alphas=alphas)


def gcnii_propagate_linear(
    p: PropagationOperator, h_star: np.ndarray, alpha: float, k: int
) -> np.ndarray:
    """Fixed initial-residue diffusion H_ell = (1-alpha) P H_{ell-1} + alpha h_star.

    Starting from H_0 = h_star, K steps unfold to sum_ell w_ell P^ell h_star
    with w_ell = alpha (1-alpha)^ell for ell < K and (1-alpha)^K at ell = K.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    h_star = np.asarray(h_star, dtype=np.float64)
    if h_star.ndim != 2 or h_star.shape[0] != p.n:
        raise ValueError(f"signal shape {h_star.shape} incompatible with n={p.n}")
    cur = h_star
    for _ in range(k):
        cur = (1.0 - alpha) * spmm(p, cur) + alpha * h_star
    return cur


def fixed_param_coefficients(alpha: float, k: int) -> np.ndarray:
    """Layer coefficients of the fixed-residue ablation, teleport style.

    w_ell = alpha (1-alpha)^{K-ell} for ell >= 1 and w_0 = (1-alpha)^K;
    the entries sum to 1.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    out = np.empty(k + 1)
    out[0] = (1.0 - alpha) ** k
    for ell in range(1, k + 1):
        out[ell] = alpha * (1.0 - alpha) ** (k - ell)
    return out


def layer_alphas_to_filter_coeffs(alphas, basis: str) -> CoeffVector:
    """Reverse layer-ordered coefficients into degree order for filtering."""
    alphas = np.asarray(alphas, dtype=np.float64).ravel()
    return CoeffVector(alphas[::-1].copy(), basis)
