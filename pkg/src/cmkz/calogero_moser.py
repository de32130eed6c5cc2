"""Calogero-Moser matrix, first integrals, level-set residuals, and the
normal-form map into rank-one pairs (Z, Q).

The matrix Q carries momenta p on the diagonal and 1/(z_a - z_b) off it.
Writing det(u - Q) = u^n - Q_1 u^{n-1} + ... +- Q_n, the coefficient Q_a
is the a-th elementary symmetric function of the eigenvalues of Q; these
are the commuting first integrals.  The zero level set of all Q_a is the
variety the Gaudin joint spectra fill out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .polyalg import elementary_symmetric
from .serialize import pair_list, pair_matrix


def _check_positions(z, min_sep_rel: float = 1e-8):
    z = np.asarray(z, dtype=complex).ravel()
    n = len(z)
    if n == 0:
        raise ValueError("need at least one position")
    if n > 1:
        diffs = np.abs(z[:, None] - z[None, :])[np.triu_indices(n, 1)]
        scale = max(1.0, np.abs(z).max())
        if diffs.min() < min_sep_rel * scale:
            raise ValueError("coincident positions: min |z_a - z_b| below tolerance")
    return z


def cm_matrix(z, p) -> np.ndarray:
    """Momenta on the diagonal, 1/(z_a - z_b) off the diagonal."""
    z = _check_positions(z)
    p = np.asarray(p, dtype=complex).ravel()
    if len(p) != len(z):
        raise ValueError("z and p must have equal length")
    n = len(z)
    Q = np.zeros((n, n), dtype=complex)
    for a in range(n):
        for b in range(n):
            Q[a, b] = p[a] if a == b else 1.0 / (z[a] - z[b])
    return Q


@dataclass(frozen=True)
class FirstIntegrals:
    """Characteristic-polynomial coefficients Q_1, ..., Q_n of the CM matrix."""

    values: tuple[complex, ...]

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, a):
        return self.values[a]

    def max_abs(self) -> float:
        return max(abs(v) for v in self.values)


def first_integrals(z, p) -> FirstIntegrals:
    """Elementary symmetric functions of the eigenvalues of cm_matrix(z, p)."""
    eigs = np.linalg.eigvals(cm_matrix(z, p))
    return FirstIntegrals(tuple(elementary_symmetric(eigs)))


def cm_hamiltonian(z, p) -> complex:
    """sum_a p_a^2 - sum_{a<b} 2/(z_a - z_b)^2."""
    z = _check_positions(z)
    p = np.asarray(p, dtype=complex).ravel()
    h = np.sum(p**2)
    n = len(z)
    for a in range(n):
        for b in range(a + 1, n):
            h -= 2.0 / (z[a] - z[b]) ** 2
    return complex(h)


def _degree_scale(p, q=None) -> float:
    s = max(1.0, np.abs(np.asarray(p, dtype=complex)).max())
    if q is not None and len(np.atleast_1d(q)):
        s = max(s, np.abs(np.asarray(q, dtype=complex)).max())
    return s


def l0_residual(z, p) -> float:
    """max_a |Q_a(z, p)| with each degree scaled by max(1, |p|_inf)^a."""
    fi = first_integrals(z, p)
    s = _degree_scale(p)
    return max(abs(v) / s ** (a + 1) for a, v in enumerate(fi.values))


def lq_residual(z, p, q) -> float:
    """Degree-scaled max_a |Q_a(z, p) - e_a(q)|; q = 0 recovers l0_residual."""
    p = np.asarray(p, dtype=complex).ravel()
    q = np.asarray(q, dtype=complex).ravel()
    if len(q) != len(p):
        raise ValueError("q must have the same length as p")
    fi = first_integrals(z, p)
    sigma = elementary_symmetric(q)
    s = _degree_scale(p, q)
    return max(
        abs(v - sigma[a]) / s ** (a + 1) for a, v in enumerate(fi.values)
    )


@dataclass(eq=False)
class CMPoint:
    """Normal-form representative: Z diagonal, Q full, rank([Z,Q]+1) = 1."""

    Z: np.ndarray
    Q: np.ndarray

    def __post_init__(self):
        self.Z = np.asarray(self.Z, dtype=complex).ravel()
        self.Q = np.asarray(self.Q, dtype=complex)
        n = len(self.Z)
        if self.Q.shape != (n, n):
            raise ValueError("Q must be n x n for n diagonal entries of Z")

    @property
    def n(self) -> int:
        return len(self.Z)

    def as_dict(self) -> dict:
        return {"Z": pair_list(self.Z), "Q": pair_matrix(self.Q)}


def xi(z, p) -> CMPoint:
    """Lift (z, p) to the pair (diag(z), cm_matrix(z, p))."""
    z = _check_positions(z)
    return CMPoint(z, cm_matrix(z, p))


def rank_one_residual(point: CMPoint) -> float:
    """Second singular value of [Z, Q] + 1 over the largest; 0 means rank one."""
    n = point.n
    if n == 1:
        return 0.0
    Zm = np.diag(point.Z)
    comm = Zm @ point.Q - point.Q @ Zm + np.eye(n, dtype=complex)
    sv = np.linalg.svd(comm, compute_uv=False)
    if sv[0] == 0.0:
        return 1.0
    return float(sv[1] / sv[0])


def bivariate_char(point: CMPoint, u, v) -> complex:
    """det((u - Z)(v - Q) - 1) at scalar arguments."""
    n = point.n
    m = (u - point.Z)[:, None] * (v * np.eye(n) - point.Q) - np.eye(n)
    return complex(np.linalg.det(m))


def pi_image(point: CMPoint) -> tuple[np.ndarray, np.ndarray]:
    """Elementary symmetric coordinates of spec(Z) and spec(Q)."""
    sz = elementary_symmetric(point.Z)
    sq = elementary_symmetric(np.linalg.eigvals(point.Q))
    return sz, sq


def cm_points_close(a: CMPoint, b: CMPoint, tol: float = 1e-8) -> bool:
    """Equality of normal-form points: permutation matching of Z entries
    with the aligned Q blocks compared entrywise."""
    if a.n != b.n:
        return False
    n = a.n
    from scipy.optimize import linear_sum_assignment

    cost = np.abs(a.Z[:, None] - b.Z[None, :])
    rows, cols = linear_sum_assignment(cost)
    if cost[rows, cols].max() > tol:
        return False
    perm = np.empty(n, dtype=int)
    perm[rows] = cols
    q_aligned = b.Q[np.ix_(perm, perm)]
    return bool(np.abs(a.Q - q_aligned).max() <= tol * max(1.0, np.abs(a.Q).max()))
