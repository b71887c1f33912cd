"""Scalar polynomial machinery: Chebyshev recurrences, Horner, Clenshaw.

Coefficient vectors are indexed by basis degree (index k multiplies the
degree-k basis function).  Reversals between layer order and degree order
are performed by the propagation module, never here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MONOMIAL = "monomial"
CHEBYSHEV_U = "chebyshev-u"
CHEBYSHEV_T = "chebyshev-t"

_BASES = (MONOMIAL, CHEBYSHEV_U, CHEBYSHEV_T)


@dataclass(frozen=True, eq=False)
class CoeffVector:
    """Ordered polynomial coefficients c_0..c_K with a declared basis."""

    coeffs: np.ndarray
    basis: str

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.atleast_1d(np.asarray(self.coeffs, dtype=np.float64)))
        if self.basis not in _BASES:
            raise ValueError(f"unknown basis {self.basis!r}, expected one of {_BASES}")
        if self.coeffs.ndim != 1 or self.coeffs.size < 1:
            raise ValueError("coefficient vector must be 1-D with at least one entry")
        if not np.all(np.isfinite(self.coeffs)):
            raise ValueError("coefficients must be finite")

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __len__(self) -> int:
        return self.coeffs.size


def _require_basis(c: CoeffVector, basis: str, op: str):
    if c.basis != basis:
        raise ValueError(f"{op} requires {basis} coefficients, got {c.basis}")


def cheb_u(k: int, x):
    """Chebyshev polynomial of the second kind, U_k(x), k >= -1.

    U_{-1} = 0, U_0 = 1, U_1 = 2x, U_k = 2x U_{k-1} - U_{k-2}.  Accepts
    scalar or ndarray x and is evaluated iteratively in O(k).
    """
    if k < -1:
        raise ValueError(f"k must be >= -1, got {k}")
    x = np.asarray(x, dtype=np.float64)
    prev = np.zeros_like(x)  # U_{-1}
    cur = np.ones_like(x)  # U_0
    if k == -1:
        return prev[()] if prev.ndim == 0 else prev
    for _ in range(k):
        prev, cur = cur, 2.0 * x * cur - prev
    return cur[()] if cur.ndim == 0 else cur


def cheb_t(k: int, x):
    """Chebyshev polynomial of the first kind, T_k(x), k >= 0."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    x = np.asarray(x, dtype=np.float64)
    cur = np.ones_like(x)  # T_0
    nxt = x.copy()  # T_1
    for _ in range(k):
        cur, nxt = nxt, 2.0 * x * nxt - cur
    return cur[()] if cur.ndim == 0 else cur


def horner_eval(c: CoeffVector, x):
    """Evaluate a monomial-basis polynomial by Horner's backward recursion."""
    _require_basis(c, MONOMIAL, "horner_eval")
    x = np.asarray(x, dtype=np.float64)
    a = c.coeffs
    b = np.full_like(x, a[-1])
    for k in range(a.size - 2, -1, -1):
        b = a[k] + b * x
    return b[()] if b.ndim == 0 else b


def clenshaw_sum_u(c: CoeffVector, x):
    """Evaluate S(x) = sum_k c_k U_k(x) by the backward Clenshaw recurrence.

    b_{n+2} = b_{n+1} = 0, then b_k = c_k + 2x b_{k+1} - b_{k+2} down to
    k = 0; the sum is b_0.  No adjusted final step is needed for the
    second-kind basis.
    """
    _require_basis(c, CHEBYSHEV_U, "clenshaw_sum_u")
    x = np.asarray(x, dtype=np.float64)
    a = c.coeffs
    b2 = np.zeros_like(x)
    b1 = np.zeros_like(x)
    for k in range(a.size - 1, -1, -1):
        b2, b1 = b1, a[k] + 2.0 * x * b1 - b2
    return b1[()] if b1.ndim == 0 else b1


def clenshaw_b_sequence(c: CoeffVector, x: float) -> np.ndarray:
    """All backward-recurrence values [b_{-1}, b_0, ..., b_n] for one x.

    b_{-1} extends the recurrence one step with a padded zero coefficient;
    the vector b satisfies b^T A = (0, c_0, ..., c_n) for the banded matrix
    of :func:`clenshaw_band_matrix`, and b_0 equals the Clenshaw sum.
    """
    _require_basis(c, CHEBYSHEV_U, "clenshaw_b_sequence")
    a = c.coeffs
    n = a.size - 1
    b = np.zeros(n + 2)  # index k stored at position k + 1
    b2 = 0.0
    b1 = 0.0
    for k in range(n, -1, -1):
        b2, b1 = b1, a[k] + 2.0 * x * b1 - b2
        b[k + 1] = b1
    b[0] = 2.0 * x * b1 - b2  # k = -1, padded coefficient 0
    return b


def clenshaw_band_matrix(degree: int, x: float) -> np.ndarray:
    """Lower-banded (n+2) x (n+2) matrix with rows/cols indexed -1..n.

    Unit diagonal, -2x on the first subdiagonal, 1 on the second.  It maps
    the stacked basis values (U_{-1}, ..., U_n) to the 0-degree indicator
    and encodes the elimination order of the backward recurrence.
    """
    m = degree + 2
    a = np.eye(m)
    idx = np.arange(m - 1)
    a[idx + 1, idx] = -2.0 * x
    idx = np.arange(m - 2)
    a[idx + 2, idx] = 1.0
    return a


def direct_sum_u(c: CoeffVector, x):
    """Term-by-term oracle for sum_k c_k U_k(x); O(n^2), test use only."""
    _require_basis(c, CHEBYSHEV_U, "direct_sum_u")
    x = np.asarray(x, dtype=np.float64)
    total = np.zeros_like(x)
    for k, a in enumerate(c.coeffs):
        total = total + a * cheb_u(k, x)
    return total[()] if total.ndim == 0 else total


def u_basis_to_monomial(c: CoeffVector) -> CoeffVector:
    """Exact conversion of second-kind Chebyshev coefficients to monomials.

    Runs the three-term recurrence on coefficient vectors; e.g. a pure U_4
    becomes (1, 0, -12, 0, 16).
    """
    _require_basis(c, CHEBYSHEV_U, "u_basis_to_monomial")
    n = c.degree
    out = np.zeros(n + 1)
    prev = np.zeros(n + 1)  # U_{-1}
    cur = np.zeros(n + 1)
    cur[0] = 1.0  # U_0
    out += c.coeffs[0] * cur
    for k in range(1, n + 1):
        nxt = np.zeros(n + 1)
        nxt[1:] = 2.0 * cur[:-1]
        nxt -= prev
        prev, cur = cur, nxt
        out += c.coeffs[k] * cur
    return CoeffVector(out, MONOMIAL)
