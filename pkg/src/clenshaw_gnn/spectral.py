"""Dense symmetric eigendecomposition and exact spectral filtering.

This is the ground-truth instrument the propagation recurrences are checked
against, so it deliberately shares no code with them: eigenvalues come from
a hand-rolled cyclic Jacobi sweep, not from the recurrence modules.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .polybasis import CHEBYSHEV_T, CHEBYSHEV_U, MONOMIAL, CoeffVector, cheb_t, clenshaw_sum_u, horner_eval

DENSE_LIMIT = 2048


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Orthonormal eigenvectors U (columns) and ascending spectrum mu of P.

    lam holds the derived Laplacian eigenvalues 1 - mu.
    """

    U: np.ndarray
    mu: np.ndarray

    @property
    def lam(self) -> np.ndarray:
        return 1.0 - self.mu

    @property
    def n(self) -> int:
        return self.mu.size


def eig_sym(m: np.ndarray, dense_limit: int = DENSE_LIMIT) -> EigenDecomposition:
    """Eigendecomposition of a dense symmetric matrix by cyclic Jacobi.

    Sweeps zero each off-diagonal pair in a fixed (p, q) order until the
    off-diagonal Frobenius mass drops below 1e-12 * ||m||_F (at most 100
    sweeps), which makes the result deterministic for a given input.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    n = m.shape[0]
    if n > dense_limit:
        raise ValueError(f"matrix size {n} exceeds dense limit {dense_limit}")
    asym = np.abs(m - m.T).max() if n else 0.0
    if asym > 1e-10:
        raise ValueError(f"matrix not symmetric: max |m - m^T| = {asym:.3e}")

    a = 0.5 * (m + m.T)
    v = np.eye(n)
    norm = np.linalg.norm(a)
    tol = 1e-12 * norm
    for _ in range(100):
        # off-diagonal Frobenius mass, summed directly (the textbook
        # ||A||^2 - ||diag||^2 form cancels catastrophically near zero)
        strict = a.copy()
        np.fill_diagonal(strict, 0.0)
        off = np.linalg.norm(strict)
        if off <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-2 * tol / max(n, 1):
                    continue
                # stable rotation angle (Golub & Van Loan style)
                theta = 0.5 * (a[q, q] - a[p, p]) / apq
                t = np.sign(theta) / (abs(theta) + np.sqrt(1.0 + theta * theta))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    mu = np.diag(a).copy()
    order = np.argsort(mu, kind="stable")
    return EigenDecomposition(U=v[:, order], mu=mu[order])


def _eval_filter(c: CoeffVector, mu: np.ndarray) -> np.ndarray:
    if c.basis == MONOMIAL:
        return horner_eval(c, mu)
    if c.basis == CHEBYSHEV_U:
        return clenshaw_sum_u(c, mu)
    if c.basis == CHEBYSHEV_T:
        return sum(a * cheb_t(k, mu) for k, a in enumerate(c.coeffs))
    raise ValueError(f"unsupported basis {c.basis!r}")


def apply_filter_exact(d: EigenDecomposition, c: CoeffVector, x: np.ndarray) -> np.ndarray:
    """Exact polynomial filter U diag(h(mu)) U^T x on the spectrum of P."""
    if c.basis not in (MONOMIAL, CHEBYSHEV_U):
        raise ValueError(f"apply_filter_exact supports monomial or chebyshev-u, got {c.basis}")
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] != d.n:
        raise ValueError(f"signal shape {x.shape} incompatible with n={d.n}")
    h = _eval_filter(c, d.mu)
    return d.U @ (h[:, None] * (d.U.T @ x))


def filter_response(c: CoeffVector, grid) -> list[tuple[float, float]]:
    """Pointwise filter values h(mu) over a grid of mu in [-1, 1]."""
    grid = np.asarray(grid, dtype=np.float64)
    vals = _eval_filter(c, grid)
    return list(zip(grid.tolist(), np.atleast_1d(vals).tolist()))
