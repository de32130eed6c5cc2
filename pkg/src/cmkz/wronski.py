"""Wronskians, the attached degree-n differential operators, and the maps
back to spectral data (z, p).

Conventions
-----------
A tuple x in the polynomial family attached to a partition consists of
monic polynomials f_i of degree d_i = lambda_i + n - i whose free
coefficients sit exactly at the degrees d_i - j not occurring among the
d's; there are n of them in total.  The Wronskian of the tuple equals
prod_{i<j} (d_j - d_i) times a monic degree-n polynomial whose
coefficients W_a (signs (-1)^a) give the Wronski map.

The operator coefficients are stored as P[i, j] multiplying
u^(n-j) d^(n-i), so row i of P, reversed, is the coefficient polynomial
of d^(n-i) in increasing powers of u.  The row determinant keeps the
symbolic last row (1, d, ..., d^n) rightmost in every product, which
amounts to a signed cofactor expansion along that row.

Quasi-exponential tuples e^(q_i u)(u + c_i) follow the same scheme with
the exponential and Vandermonde-of-q prefactors stripped; their operator
has full (n+1) x (n+1) coefficient support.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import polyalg as pa
from .calogero_moser import xi
from .partitions import Partition, irrep_dimension, shifted
from .polyalg import ExpPoly
from .serialize import pair, pair_matrix
from .tensor_gaudin import SpectralPoint


def free_positions(lam: Partition) -> tuple[tuple[int, int], ...]:
    """Free coefficient slots (i, j): degree d_i - j, with d_i - j not a d."""
    entries = shifted(lam).entries
    occupied = set(entries)
    out = []
    for i0, d in enumerate(entries):
        for j in range(1, d + 1):
            if d - j not in occupied:
                out.append((i0 + 1, j))
    return tuple(out)


def _shift_prefactor(lam: Partition) -> int:
    entries = shifted(lam).entries
    pref = 1
    n = len(entries)
    for i in range(n):
        for j in range(i + 1, n):
            pref *= entries[j] - entries[i]
    return pref


@dataclass(eq=False)
class PolyTuple:
    """A point of the polynomial family: partition plus free coefficients."""

    lam: Partition
    coeffs: dict[tuple[int, int], complex]

    def __post_init__(self):
        expected = set(free_positions(self.lam))
        got = set(self.coeffs)
        if got != expected:
            raise ValueError(
                f"coefficient slots {sorted(got)} do not match {sorted(expected)}"
            )
        self.coeffs = {k: complex(v) for k, v in self.coeffs.items()}

    def polys(self) -> list[np.ndarray]:
        entries = shifted(self.lam).entries
        out = []
        for i0, d in enumerate(entries):
            c = np.zeros(d + 1, dtype=complex)
            c[d] = 1.0
            for (i, j), val in self.coeffs.items():
                if i == i0 + 1:
                    c[d - j] = val
            out.append(c)
        return out

    def vector(self) -> np.ndarray:
        return np.array(
            [self.coeffs[pos] for pos in free_positions(self.lam)], dtype=complex
        )

    def as_dict(self) -> dict:
        return {
            "lambda": self.lam.as_list(),
            "coeffs": {f"{i},{j}": pair(v) for (i, j), v in sorted(self.coeffs.items())},
        }


def poly_tuple_from_vector(lam: Partition, vec) -> PolyTuple:
    vec = np.asarray(vec, dtype=complex).ravel()
    pos = free_positions(lam)
    if len(vec) != len(pos):
        raise ValueError(f"need {len(pos)} coefficients")
    return PolyTuple(lam, dict(zip(pos, vec)))


def random_poly_tuple(lam: Partition, rng, scale: float = 1.0) -> PolyTuple:
    pos = free_positions(lam)
    vals = scale * (
        rng.standard_normal(len(pos)) + 1j * rng.standard_normal(len(pos))
    )
    return PolyTuple(lam, dict(zip(pos, vals)))


@dataclass(eq=False)
class QuasiExpTuple:
    """Functions e^(q_i u) (u + c_i) with pairwise distinct exponents."""

    q: np.ndarray
    shifts: np.ndarray

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=complex).ravel()
        self.shifts = np.asarray(self.shifts, dtype=complex).ravel()
        n = len(self.q)
        if len(self.shifts) != n:
            raise ValueError("need one shift per exponent")
        if n > 1:
            d = np.abs(self.q[:, None] - self.q[None, :])[np.triu_indices(n, 1)]
            if d.min() < 1e-12 * max(1.0, np.abs(self.q).max()):
                raise ValueError("exponents q must be pairwise distinct")

    @property
    def n(self) -> int:
        return len(self.q)

    def functions(self) -> list[ExpPoly]:
        return [
            ExpPoly(qi, np.array([ci, 1.0 + 0j]))
            for qi, ci in zip(self.q, self.shifts)
        ]


@dataclass(eq=False)
class MonicPoly:
    """u^n + sum_a (-1)^a W_a u^(n-a), stored through the W_a."""

    n: int
    w: np.ndarray

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=complex).ravel()
        if len(self.w) != self.n:
            raise ValueError("need n coefficients W_1..W_n")

    def coeffs(self) -> np.ndarray:
        c = np.zeros(self.n + 1, dtype=complex)
        c[self.n] = 1.0
        for a in range(1, self.n + 1):
            c[self.n - a] = (-1) ** a * self.w[a - 1]
        return c

    def roots(self) -> np.ndarray:
        return pa.roots(self.coeffs())

    def __call__(self, x):
        return pa.peval(self.coeffs(), x)


def _derivative_rows(funcs, n_cols: int):
    """Coefficient rows (g, g', ..., g^(n_cols-1)) with exponential rates split off.

    Returns (rates, rows); plain polynomials carry rate 0.
    """
    rates = []
    rows = []
    for f in funcs:
        if isinstance(f, ExpPoly):
            rate = complex(f.rate)
            cur = pa.as_poly(f.coeffs)
        else:
            rate = 0.0 + 0j
            cur = pa.as_poly(f)
        rates.append(rate)
        row = [cur]
        for _ in range(n_cols - 1):
            cur = pa.padd(rate * cur, pa.pder(cur)) if rate != 0 else pa.pder(cur)
            row.append(cur)
        rows.append(row)
    return np.array(rates), rows


def wronskian(funcs):
    """Determinant of the derivative matrix (g_i^(j-1)).

    Plain polynomial input yields a coefficient array; if any entry is an
    ExpPoly the result is an ExpPoly carrying the summed rate.
    """
    funcs = list(funcs)
    if not funcs:
        raise ValueError("need at least one function")
    rates, rows = _derivative_rows(funcs, len(funcs))
    det = pa.poly_det(rows)
    # strip exactly-zero tail
    nz = np.nonzero(det)[0]
    det = det[: nz[-1] + 1] if len(nz) else np.zeros(1, dtype=complex)
    if np.any(rates):
        return ExpPoly(rates.sum(), det)
    return det


def wronski_map(lam: Partition, x: PolyTuple) -> MonicPoly:
    """The W_a of the tuple, after dividing out the shift prefactor."""
    n = lam.n
    raw = wronskian(x.polys())
    pref = float(_shift_prefactor(lam))
    c = pa.cap_degree(raw, n)
    if abs(c[n] - pref) > 1e-10 * abs(pref):
        raise ValueError(
            f"Wronskian leading coefficient {c[n]:.6e} deviates from {pref:.6e}"
        )
    monic = c / pref
    w = np.array([(-1) ** a * monic[n - a] for a in range(1, n + 1)])
    return MonicPoly(n, w)


@dataclass(eq=False)
class DiffOpCoeffs:
    """Coefficients P[i, j] of u^(n-j) d^(n-i) for a monic degree-n operator."""

    n: int
    P: np.ndarray

    def __post_init__(self):
        self.P = np.asarray(self.P, dtype=complex)
        if self.P.shape != (self.n + 1, self.n + 1):
            raise ValueError("P must be (n+1) x (n+1)")

    def coefficient_poly(self, i: int) -> np.ndarray:
        """Coefficient polynomial of d^(n-i), low-to-high in u."""
        return self.P[i, ::-1].copy()

    def apply(self, f):
        """Apply the operator; accepts a polynomial or an ExpPoly."""
        n = self.n
        if isinstance(f, ExpPoly):
            _, rows = _derivative_rows([f], n + 1)
            acc = np.zeros(1, dtype=complex)
            for i in range(n + 1):
                acc = pa.padd(acc, pa.pmul(self.coefficient_poly(i), rows[0][n - i]))
            return ExpPoly(f.rate, acc)
        f = pa.as_poly(f)
        acc = np.zeros(1, dtype=complex)
        for i in range(n + 1):
            acc = pa.padd(acc, pa.pmul(self.coefficient_poly(i), pa.pder(f, n - i)))
        return acc

    def annihilation_residual(self, f) -> float:
        """max |D f| coefficient over the scale of the summed terms."""
        n = self.n
        if isinstance(f, ExpPoly):
            _, rows = _derivative_rows([f], n + 1)
            terms = [
                pa.pmul(self.coefficient_poly(i), rows[0][n - i]) for i in range(n + 1)
            ]
        else:
            terms = [
                pa.pmul(self.coefficient_poly(i), pa.pder(pa.as_poly(f), n - i))
                for i in range(n + 1)
            ]
        scale = max(max(np.abs(t).max() for t in terms), 1.0)
        acc = np.zeros(1, dtype=complex)
        for t in terms:
            acc = pa.padd(acc, t)
        return float(np.abs(acc).max() / scale)

    def as_dense(self):
        return pair_matrix(self.P)


def _operator_from_rows(rows, n: int, pref: complex) -> DiffOpCoeffs:
    """Signed cofactors of the symbolic row (1, d, ..., d^n), scaled by 1/pref."""
    P = np.zeros((n + 1, n + 1), dtype=complex)
    for i in range(n + 1):
        c = n - i
        cols = [k for k in range(n + 1) if k != c]
        minor = pa.poly_det([[row[k] for k in cols] for row in rows])
        sign = (-1.0) ** (n + c)
        ni = pa.cap_degree(sign * minor / pref, n)
        P[i, :] = ni[::-1]
    return DiffOpCoeffs(n, P)


def fundamental_operator(lam: Partition, x: PolyTuple) -> DiffOpCoeffs:
    """The monic degree-n operator annihilating every polynomial of the tuple."""
    n = lam.n
    _, rows = _derivative_rows(x.polys(), n + 1)
    return _operator_from_rows(rows, n, float(_shift_prefactor(lam)))


def fla_residual(lam: Partition, x: PolyTuple) -> float:
    """Deviation in sum_{i>=0} P_ii prod_{j>i}(s+j) = prod_j (s - lambda_j + j).

    The sum starts at i = 0, where P_00 = 1.  The residual is the largest
    coefficient mismatch in s; it depends only on the partition.
    """
    n = lam.n
    op = fundamental_operator(lam, x)
    lhs = np.zeros(1, dtype=complex)
    for i in range(n + 1):
        tail = pa.from_roots([-float(j) for j in range(i + 1, n + 1)])
        lhs = pa.padd(lhs, op.P[i, i] * tail)
    parts = lam.padded(n)
    rhs = pa.from_roots([parts[j - 1] - j for j in range(1, n + 1)])
    diff = pa.padd(lhs, -rhs)
    return float(np.abs(diff).max())


def _momenta_from_operator(
    z: np.ndarray, n2_poly: np.ndarray, trace_shift: complex
) -> np.ndarray:
    """p_a = trace_shift - N_2(z_a)/prod_{b!=a}(z_a-z_b) + sum_{b!=a} 1/(z_a-z_b)."""
    n = len(z)
    p = np.zeros(n, dtype=complex)
    for a in range(n):
        others = np.delete(z, a)
        denom = np.prod(z[a] - others) if len(others) else 1.0
        p[a] = trace_shift - pa.peval(n2_poly, z[a]) / denom
        if len(others):
            p[a] += np.sum(1.0 / (z[a] - others))
    return p


def _checked_roots(monic: MonicPoly, min_sep_rel: float = 1e-6) -> np.ndarray:
    # an exact double root splits by about sqrt(eps) under the companion
    # eigensolve, so the simplicity cutoff must sit well above that
    z = pa.lexsorted(monic.roots())
    n = len(z)
    if n > 1:
        diffs = np.abs(z[:, None] - z[None, :])[np.triu_indices(n, 1)]
        if diffs.min() < min_sep_rel * max(1.0, np.abs(z).max()):
            raise ValueError("Wronskian has (numerically) multiple roots")
    return z


def psi(lam: Partition, x: PolyTuple) -> SpectralPoint:
    """Spectral data of a tuple with simple Wronskian roots.

    z is the lexicographically ordered root set of the monic Wronskian;
    the momenta come from the d^(n-2) coefficient polynomial of the
    fundamental operator evaluated at each root.
    """
    n = lam.n
    if n < 2:
        raise ValueError("spectral extraction needs n >= 2")
    z = _checked_roots(wronski_map(lam, x))
    op = fundamental_operator(lam, x)
    p = _momenta_from_operator(z, op.coefficient_poly(2), 0.0)
    return SpectralPoint(z, p, 0.0)


def bivariate_identity_residual(
    lam: Partition, x: PolyTuple, seed: int = 0, grid: int = 5
) -> float:
    """Check det((u - Z)(v - Q) - 1) = sum_ij P_ij u^(n-j) v^(n-i) on a
    random grid, with (Z, Q) built from the spectral data of the tuple."""
    import numpy.polynomial.polynomial as npp

    sp = psi(lam, x)
    point = xi(sp.z, sp.p)
    op = fundamental_operator(lam, x)
    rng = np.random.default_rng(seed)
    us = rng.standard_normal(grid) + 1j * rng.standard_normal(grid)
    vs = rng.standard_normal(grid) + 1j * rng.standard_normal(grid)
    # C[a, b] = coefficient of u^a v^b
    C = op.P[::-1, ::-1].T
    worst = 0.0
    scale = 1.0
    from .calogero_moser import bivariate_char

    for u in us:
        for v in vs:
            lhs = bivariate_char(point, u, v)
            rhs = complex(npp.polyval2d(u, v, C))
            worst = max(worst, abs(lhs - rhs))
            scale = max(scale, abs(lhs))
    return worst / scale


def _wronskian_jacobian_rows(lam: Partition, x_vec: np.ndarray):
    """Derivative tables for the tuple and for each coefficient direction."""
    entries = shifted(lam).entries
    positions = free_positions(lam)
    tup = poly_tuple_from_vector(lam, x_vec)
    _, rows = _derivative_rows(tup.polys(), lam.n)
    direction_rows = []
    for (i, j) in positions:
        d = entries[i - 1] - j
        mono = np.zeros(d + 1, dtype=complex)
        mono[d] = 1.0
        _, mrows = _derivative_rows([mono], lam.n)
        direction_rows.append((i - 1, mrows[0]))
    return rows, direction_rows


def _w_values(lam: Partition, rows) -> np.ndarray:
    n = lam.n
    pref = float(_shift_prefactor(lam))
    det = pa.cap_degree(pa.poly_det(rows), n)
    monic = det / pref
    return np.array([(-1) ** a * monic[n - a] for a in range(1, n + 1)])


def wronski_fiber(
    lam: Partition,
    sigma_target,
    starts: int = 32,
    tol: float = 1e-9,
    seed: int = 0,
    max_rounds: int = 4,
) -> list[PolyTuple]:
    """All tuples mapping to the target elementary symmetric data.

    Seeded multistart Newton on the n free coefficients with analytic
    Jacobian (the Wronskian is multilinear in its rows).  Start counts
    escalate fourfold per round until the count reaches the Wronski-map
    degree or the rounds cap out; an undercount is the caller's signal.
    """
    n = lam.n
    sigma = np.asarray(sigma_target, dtype=complex).ravel()
    if len(sigma) != n:
        raise ValueError(f"need {n} target coordinates")
    expected = irrep_dimension(lam)
    rng = np.random.default_rng(seed)

    def residual_map(vec):
        rows, dir_rows = _wronskian_jacobian_rows(lam, vec)
        F = _w_values(lam, rows) - sigma
        J = np.zeros((n, n), dtype=complex)
        for k, (row_idx, mrow) in enumerate(dir_rows):
            patched = [mrow if r == row_idx else rows[r] for r in range(n)]
            J[:, k] = _w_values(lam, patched)
        return F, J

    def newton(vec):
        F, J = residual_map(vec)
        fn = np.abs(F).max()
        for _ in range(60):
            if fn <= tol:
                return vec
            try:
                step = np.linalg.solve(J, F)
            except np.linalg.LinAlgError:
                return None
            alpha = 1.0
            while alpha > 1e-12:
                cand = vec - alpha * step
                Fc, Jc = residual_map(cand)
                fcn = np.abs(Fc).max()
                if fcn < fn * (1.0 - 0.25 * alpha) or fcn <= tol:
                    vec, F, J, fn = cand, Fc, Jc, fcn
                    break
                alpha *= 0.5
            else:
                return None
        return vec if fn <= tol else None

    found: list[np.ndarray] = []
    scale = max(1.0, np.abs(sigma).max())
    n_starts = starts
    for _ in range(max_rounds):
        for _ in range(n_starts):
            v0 = 2.0 * scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
            v = newton(v0)
            if v is None:
                continue
            vs = max(1.0, np.abs(v).max())
            if all(np.abs(v - prev).max() > 1e-6 * vs for prev in found):
                found.append(v)
        if len(found) >= expected:
            break
        n_starts *= 4
    found.sort(key=lambda v: tuple(x for c in v for x in (c.real, c.imag)))
    return [poly_tuple_from_vector(lam, v) for v in found]


def _vandermonde_prefactor(q: np.ndarray) -> complex:
    pref = 1.0 + 0j
    n = len(q)
    for i in range(n):
        for j in range(i + 1, n):
            pref *= q[j] - q[i]
    return pref


def wronski_map_q(x: QuasiExpTuple) -> MonicPoly:
    """W_a of a quasi-exponential tuple, exponential and Vandermonde
    prefactors removed."""
    n = x.n
    _, rows = _derivative_rows(x.functions(), n)
    det = pa.cap_degree(pa.poly_det(rows), n)
    pref = _vandermonde_prefactor(x.q)
    monic = det / pref
    if abs(monic[n] - 1.0) > 1e-10:
        raise ValueError("quasi-exponential Wronskian failed the monic check")
    w = np.array([(-1) ** a * monic[n - a] for a in range(1, n + 1)])
    return MonicPoly(n, w)


def fundamental_operator_q(x: QuasiExpTuple) -> DiffOpCoeffs:
    """Annihilating operator of a quasi-exponential tuple; full P support."""
    n = x.n
    _, rows = _derivative_rows(x.functions(), n + 1)
    return _operator_from_rows(rows, n, _vandermonde_prefactor(x.q))


def psi_q(x: QuasiExpTuple, min_sep_rel: float = 1e-6) -> SpectralPoint:
    """Spectral data of a quasi-exponential tuple.

    Requires n >= 2, simple Wronskian roots, and roots away from the
    exponents q.  The momentum extraction shifts by e_1(q): a point in
    the q-level set has sum_a p_a = q_1 + ... + q_n, and the d^(n-2)
    coefficient polynomial measures momenta relative to that trace.
    """
    n = x.n
    if n < 2:
        raise ValueError("spectral extraction needs n >= 2")
    z = _checked_roots(wronski_map_q(x), min_sep_rel)
    gap = np.abs(z[:, None] - x.q[None, :]).min()
    if gap < min_sep_rel * max(1.0, np.abs(z).max(), np.abs(x.q).max()):
        raise ValueError("Wronskian root collides with an exponent q_i")
    op = fundamental_operator_q(x)
    p = _momenta_from_operator(z, op.coefficient_poly(2), np.sum(x.q))
    return SpectralPoint(z, p, 0.0)
