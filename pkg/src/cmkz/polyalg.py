"""Dense polynomial arithmetic over complex coefficients.

Polynomials are 1-D numpy arrays ordered low degree to high, so ``c[k]``
is the coefficient of ``u**k``.  Quasi-exponentials ``exp(rate*u)*g(u)``
are held as :class:`ExpPoly`; differentiation keeps the rate and maps
``g -> rate*g + g'``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.polynomial.polynomial as npp


def as_poly(c) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(c, dtype=complex))
    if arr.ndim != 1:
        raise ValueError("polynomial coefficients must form a 1-D sequence")
    return arr


def padd(a, b) -> np.ndarray:
    a, b = as_poly(a), as_poly(b)
    if len(a) < len(b):
        a, b = b, a
    out = a.copy()
    out[: len(b)] += b
    return out


def pmul(a, b) -> np.ndarray:
    return np.convolve(as_poly(a), as_poly(b))


def pder(c, order: int = 1) -> np.ndarray:
    c = as_poly(c)
    for _ in range(order):
        if len(c) == 1:
            c = np.zeros(1, dtype=complex)
        else:
            c = c[1:] * np.arange(1, len(c), dtype=float)
    return c


def peval(c, x):
    return npp.polyval(x, as_poly(c))


def from_roots(roots) -> np.ndarray:
    """Monic polynomial with the given roots, low-to-high coefficients."""
    out = np.array([1.0 + 0j])
    for r in np.asarray(roots, dtype=complex):
        out = np.convolve(out, np.array([-r, 1.0 + 0j]))
    return out


def elementary_symmetric(values) -> np.ndarray:
    """e_1, ..., e_n of the given values, read off prod(u - v_i)."""
    values = np.asarray(values, dtype=complex)
    n = len(values)
    monic = from_roots(values)
    return np.array([(-1) ** a * monic[n - a] for a in range(1, n + 1)])


def roots(c) -> np.ndarray:
    c = as_poly(c)
    mags = np.abs(c)
    top = mags.max()
    if top == 0.0:
        raise ValueError("zero polynomial has no well-defined roots")
    deg = int(np.nonzero(mags > 0)[0][-1])
    if deg == 0:
        return np.zeros(0, dtype=complex)
    # companion-matrix eigenvalues, as np.roots does internally
    return np.roots(c[deg::-1])


def lexsorted(values: np.ndarray) -> np.ndarray:
    """Sort complex values by (real, imag)."""
    values = np.asarray(values, dtype=complex)
    return values[np.lexsort((values.imag, values.real))]


def cap_degree(c, degree: int, rel: float = 1e-10) -> np.ndarray:
    """Truncate to the stated degree, checking the tail is numerically zero.

    Coefficient cancellations above the structural degree leave roundoff
    residue; anything larger than ``rel`` times the coefficient scale is a
    genuine degree violation.
    """
    c = as_poly(c)
    scale = max(np.abs(c).max(), 1e-300)
    if len(c) > degree + 1:
        tail = np.abs(c[degree + 1 :]).max()
        if tail > rel * scale:
            raise ValueError(
                f"polynomial degree exceeds {degree} (tail magnitude {tail:.3e})"
            )
        c = c[: degree + 1]
    if len(c) < degree + 1:
        c = np.concatenate([c, np.zeros(degree + 1 - len(c), dtype=complex)])
    return c


def poly_det(mat) -> np.ndarray:
    """Determinant of a square matrix of polynomials.

    Subset dynamic programming over row choices: exact in coefficient
    arithmetic, O(2^n * n) convolutions.
    """
    n = len(mat)
    if n == 0:
        return np.ones(1, dtype=complex)
    rows = [[as_poly(entry) for entry in row] for row in mat]
    if any(len(row) != n for row in rows):
        raise ValueError("matrix must be square")
    layer = {0: np.ones(1, dtype=complex)}
    for col in range(n):
        nxt: dict[int, np.ndarray] = {}
        for used, acc in layer.items():
            for r in range(n):
                bit = 1 << r
                if used & bit:
                    continue
                entry = rows[r][col]
                if not np.any(entry):
                    continue
                # inversions added: rows already used with index above r
                sign = -1.0 if ((used >> (r + 1)).bit_count() & 1) else 1.0
                term = np.convolve(acc, entry) * sign
                key = used | bit
                if key in nxt:
                    nxt[key] = padd(nxt[key], term)
                else:
                    nxt[key] = term
        layer = nxt
        if not layer:
            return np.zeros(1, dtype=complex)
    return layer.get((1 << n) - 1, np.zeros(1, dtype=complex))


@dataclass(eq=False)
class ExpPoly:
    """The function exp(rate*u) * poly(u)."""

    rate: complex
    coeffs: np.ndarray

    def __post_init__(self):
        self.rate = complex(self.rate)
        self.coeffs = as_poly(self.coeffs)

    def deriv(self) -> "ExpPoly":
        return ExpPoly(self.rate, padd(self.rate * self.coeffs, pder(self.coeffs)))

    def __call__(self, x):
        return np.exp(self.rate * x) * peval(self.coeffs, x)
