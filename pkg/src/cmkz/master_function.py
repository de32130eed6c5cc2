"""Master functions, their gradients, and Bethe critical-point solving.

For a partition lam of n with levels l_1 >= ... >= l_{N-1} (l_a = sum of
parts below row a), the master function in positions z and auxiliary
variables t grouped by level is

    Phi(z, t) = sum_{a<b} log(z_a - z_b)
              - sum_a sum_{i<=l_1} log(t_i^(1) - z_a)
              + 2 sum_k sum_{i<j} log(t_i^(k) - t_j^(k))
              - sum_{k<=N-2} sum_{i,j} log(t_i^(k) - t_j^(k+1)).

Only level 1 interacts with z, and cross terms couple adjacent levels
only.  Critical points in t solve the Bethe equations; the momenta are
p_a = dPhi/dz_a.  The deformed variant adds linear terms
(q_{k+1} - q_k) per level-k variable and q_1 per z_a, with level sizes
fixed at (n-1, n-2, ..., 1).

Phi itself is defined modulo 2*pi*i; the value functions below use
principal-branch logarithms and are meant for finite-difference checks,
not for branch-consistent evaluation along paths.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .partitions import Partition, bethe_levels, irrep_dimension
from .serialize import pair_list


def level_sizes(lam: Partition) -> tuple[int, ...]:
    """Positive auxiliary-variable counts per level (trailing zeros dropped)."""
    rows = max(1, len(lam.trimmed))
    sizes = bethe_levels(lam, rows).l
    return tuple(s for s in sizes if s > 0)


def q_level_sizes(n: int) -> tuple[int, ...]:
    """Level sizes n-1, n-2, ..., 1 of the deformed master function."""
    return tuple(range(n - 1, 0, -1))


@dataclass(eq=False)
class BetheConfiguration:
    """Positions z plus auxiliary variables grouped by level."""

    z: np.ndarray
    t: tuple[np.ndarray, ...]

    def __post_init__(self):
        self.z = np.asarray(self.z, dtype=complex).ravel()
        self.t = tuple(np.asarray(tk, dtype=complex).ravel() for tk in self.t)

    @property
    def flat_t(self) -> np.ndarray:
        if not self.t:
            return np.zeros(0, dtype=complex)
        return np.concatenate(self.t)

    def as_dict(self) -> dict:
        return {
            "z": pair_list(self.z),
            "t": [pair_list(tk) for tk in self.t],
        }


@dataclass(eq=False)
class CriticalPoint:
    """A converged Bethe configuration with its momenta p = dPhi/dz."""

    config: BetheConfiguration
    grad_norm: float
    p: np.ndarray

    def as_dict(self) -> dict:
        d = self.config.as_dict()
        d["p"] = pair_list(self.p)
        d["grad_norm"] = float(self.grad_norm)
        return d


def _min_separation(z, tlevels) -> float:
    """Smallest distance among the argument pairs Phi actually contains."""
    best = np.inf
    zv = np.asarray(z, dtype=complex)
    if len(zv) > 1:
        d = np.abs(zv[:, None] - zv[None, :])[np.triu_indices(len(zv), 1)]
        best = min(best, d.min())
    for k, tk in enumerate(tlevels):
        if len(tk) > 1:
            d = np.abs(tk[:, None] - tk[None, :])[np.triu_indices(len(tk), 1)]
            best = min(best, d.min())
        if k == 0 and len(tk):
            best = min(best, np.abs(tk[:, None] - zv[None, :]).min())
        if k + 1 < len(tlevels) and len(tk) and len(tlevels[k + 1]):
            nxt = tlevels[k + 1]
            best = min(best, np.abs(tk[:, None] - nxt[None, :]).min())
    return float(best)


def _config_scale(z, tlevels) -> float:
    vals = [1.0, np.abs(z).max() if len(z) else 0.0]
    vals += [np.abs(tk).max() for tk in tlevels if len(tk)]
    return max(vals)


def _check_domain(z, tlevels, min_sep_rel: float = 1e-8):
    if _min_separation(z, tlevels) < min_sep_rel * _config_scale(z, tlevels):
        raise ValueError("argument collision inside the master function domain")


def _split(flat: np.ndarray, sizes) -> tuple[np.ndarray, ...]:
    out = []
    pos = 0
    for s in sizes:
        out.append(flat[pos : pos + s])
        pos += s
    return tuple(out)


def _grad_t_raw(z, tlevels, linear=None) -> np.ndarray:
    pieces = []
    for k, tk in enumerate(tlevels):
        g = np.zeros(len(tk), dtype=complex)
        for i, ti in enumerate(tk):
            if k == 0:
                g[i] -= np.sum(1.0 / (ti - z))
            others = np.delete(tk, i)
            if len(others):
                g[i] += 2.0 * np.sum(1.0 / (ti - others))
            if k + 1 < len(tlevels) and len(tlevels[k + 1]):
                g[i] -= np.sum(1.0 / (ti - tlevels[k + 1]))
            if k > 0 and len(tlevels[k - 1]):
                g[i] -= np.sum(1.0 / (ti - tlevels[k - 1]))
        if linear is not None:
            g += linear[k]
        pieces.append(g)
    if not pieces:
        return np.zeros(0, dtype=complex)
    return np.concatenate(pieces)


def _hess_t_raw(z, tlevels) -> np.ndarray:
    sizes = [len(tk) for tk in tlevels]
    total = sum(sizes)
    H = np.zeros((total, total), dtype=complex)
    offs = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    for k, tk in enumerate(tlevels):
        for i, ti in enumerate(tk):
            row = offs[k] + i
            diag = 0.0 + 0j
            if k == 0:
                diag += np.sum(1.0 / (ti - z) ** 2)
            for j, tj in enumerate(tk):
                if j == i:
                    continue
                val = 1.0 / (ti - tj) ** 2
                diag -= 2.0 * val
                H[row, offs[k] + j] += 2.0 * val
            for dk in (-1, 1):
                kk = k + dk
                if 0 <= kk < len(tlevels):
                    for j, tj in enumerate(tlevels[kk]):
                        val = 1.0 / (ti - tj) ** 2
                        diag += val
                        H[row, offs[kk] + j] -= val
            H[row, row] = diag
    return H


def _grad_z_raw(z, tlevels, q1: complex = 0.0) -> np.ndarray:
    n = len(z)
    p = np.zeros(n, dtype=complex)
    t1 = tlevels[0] if tlevels else np.zeros(0, dtype=complex)
    for a in range(n):
        others = np.delete(z, a)
        if len(others):
            p[a] += np.sum(1.0 / (z[a] - others))
        if len(t1):
            p[a] += np.sum(1.0 / (t1 - z[a]))
        p[a] += q1
    return p


def _value_raw(z, tlevels, linear=None, qz: complex = 0.0) -> complex:
    val = 0.0 + 0j
    n = len(z)
    for a in range(n):
        for b in range(a + 1, n):
            val += np.log(z[a] - z[b])
    if tlevels and len(tlevels[0]):
        for ti in tlevels[0]:
            val -= np.sum(np.log(ti - z))
    for tk in tlevels:
        for i in range(len(tk)):
            for j in range(i + 1, len(tk)):
                val += 2.0 * np.log(tk[i] - tk[j])
    for k in range(len(tlevels) - 1):
        for ti in tlevels[k]:
            for tj in tlevels[k + 1]:
                val -= np.log(ti - tj)
    if linear is not None:
        for k, tk in enumerate(tlevels):
            val += linear[k] * np.sum(tk)
    val += qz * np.sum(z)
    return complex(val)


def _coerce_levels(lam: Partition, z, t):
    z = np.asarray(z, dtype=complex).ravel()
    if len(z) != lam.n:
        raise ValueError(f"need {lam.n} positions for {lam!r}")
    sizes = level_sizes(lam)
    tlevels = tuple(np.asarray(tk, dtype=complex).ravel() for tk in t)
    if tuple(len(tk) for tk in tlevels) != sizes:
        raise ValueError(
            f"level sizes {tuple(len(tk) for tk in tlevels)} do not match {sizes}"
        )
    _check_domain(z, tlevels)
    return z, tlevels


def grad_t(lam: Partition, z, t) -> np.ndarray:
    """dPhi/dt for all auxiliary variables, level 1 first."""
    z, tlevels = _coerce_levels(lam, z, t)
    return _grad_t_raw(z, tlevels)


def grad_z(lam: Partition, z, t) -> np.ndarray:
    """Momenta p_a = sum_{b != a} 1/(z_a - z_b) + sum_i 1/(t_i^(1) - z_a)."""
    z, tlevels = _coerce_levels(lam, z, t)
    return _grad_z_raw(z, tlevels)


def master_value(lam: Partition, z, t) -> complex:
    """Principal-branch value of Phi; well defined modulo 2*pi*i."""
    z, tlevels = _coerce_levels(lam, z, t)
    return _value_raw(z, tlevels)


def _coerce_levels_q(q, z, t):
    z = np.asarray(z, dtype=complex).ravel()
    q = np.asarray(q, dtype=complex).ravel()
    n = len(z)
    if len(q) != n:
        raise ValueError("q must match the number of positions")
    if n > 1:
        dq = np.abs(q[:, None] - q[None, :])[np.triu_indices(n, 1)]
        if dq.min() < 1e-12 * max(1.0, np.abs(q).max()):
            raise ValueError("exponents q must be pairwise distinct")
    sizes = q_level_sizes(n)
    tlevels = tuple(np.asarray(tk, dtype=complex).ravel() for tk in t)
    if tuple(len(tk) for tk in tlevels) != sizes:
        raise ValueError(
            f"level sizes {tuple(len(tk) for tk in tlevels)} do not match {sizes}"
        )
    _check_domain(z, tlevels)
    linear = tuple(q[k + 1] - q[k] for k in range(n - 1))
    return q, z, tlevels, linear


def grad_t_q(q, z, t) -> np.ndarray:
    """dPhi_q/dt: the undeformed gradient plus (q_{k+1} - q_k) per level."""
    q, z, tlevels, linear = _coerce_levels_q(q, z, t)
    return _grad_t_raw(z, tlevels, linear)


def grad_z_q(q, z, t) -> np.ndarray:
    """Momenta of the deformed master function; adds q_1 to each dPhi/dz_a."""
    q, z, tlevels, _ = _coerce_levels_q(q, z, t)
    return _grad_z_raw(z, tlevels, q1=q[0])


def master_value_q(q, z, t) -> complex:
    q, z, tlevels, linear = _coerce_levels_q(q, z, t)
    return _value_raw(z, tlevels, linear, qz=q[0])


def _canonical_levels(tlevels) -> tuple[np.ndarray, ...]:
    out = []
    for tk in tlevels:
        order = np.lexsort((tk.imag, tk.real))
        out.append(tk[order])
    return tuple(out)


def _newton(z, sizes, t0, tol, linear, min_sep_rel=1e-8, max_iter=60):
    # without linear terms the gradient decays like 1/t, so Newton has an
    # escape ray t -> 2t; cut those iterates off early.  With linear terms
    # the gradient tends to a nonzero constant instead, and genuine roots
    # can sit far out when the q gaps are small, so no cutoff applies.
    escape = 25.0 * (1.0 + np.abs(z).max()) if linear is None else np.inf
    t = t0.copy()
    tl = _split(t, sizes)
    if _min_separation(z, tl) < min_sep_rel * _config_scale(z, tl):
        return None
    g = _grad_t_raw(z, tl, linear)
    gn = np.abs(g).max()
    for _ in range(max_iter):
        if gn <= tol:
            # quadratic tail: a couple of undamped steps push the root to
            # machine precision rather than stopping at the loose tolerance
            for _ in range(2):
                try:
                    extra = np.linalg.solve(_hess_t_raw(z, tl), g)
                except np.linalg.LinAlgError:
                    break
                cand = t - extra
                cl = _split(cand, sizes)
                if _min_separation(z, cl) < min_sep_rel * _config_scale(z, cl):
                    break
                gc = _grad_t_raw(z, cl, linear)
                if np.abs(gc).max() >= gn:
                    break
                t, tl, g = cand, cl, gc
                gn = np.abs(g).max()
            return t
        if np.abs(t).max() > escape:
            return None
        H = _hess_t_raw(z, tl)
        try:
            step = np.linalg.solve(H, g)
        except np.linalg.LinAlgError:
            return None
        alpha = 1.0
        moved = False
        while alpha > 1e-12:
            cand = t - alpha * step
            cl = _split(cand, sizes)
            if _min_separation(z, cl) >= min_sep_rel * _config_scale(z, cl):
                gc = _grad_t_raw(z, cl, linear)
                gcn = np.abs(gc).max()
                if gcn < gn * (1.0 - 0.25 * alpha) or gcn <= tol:
                    t, tl, g, gn = cand, cl, gc, gcn
                    moved = True
                    break
            alpha *= 0.5
        if not moved:
            return None
    return t if gn <= tol else None


def _random_start(rng, z, size, widen: float = 1.0):
    center = np.mean(z)
    radius = widen * (1.4 * max(np.abs(z - center).max(), 0.25) + 0.3)
    r = radius * np.sqrt(rng.uniform(size=size))
    theta = rng.uniform(0.0, 2.0 * np.pi, size=size)
    return center + r * np.exp(1j * theta)


def _hull_start(rng, z, size):
    # undeformed critical points interlace the z cloud (Gauss-Lucas for the
    # top level), so convex combinations of z with jitter cover their basins
    # far more densely than a uniform disc
    weights = rng.dirichlet(np.ones(len(z)), size=size)
    pts = weights @ z
    spread = max(np.abs(z - np.mean(z)).max(), 0.2)
    jitter = 0.2 * spread * (rng.standard_normal(size) + 1j * rng.standard_normal(size))
    return pts + jitter


def _poly_residual(z, sizes, tflat, linear):
    """Denominator-cleared critical equations with a per-equation scale.

    Each gradient component sum_w c_w/(t - w) + delta is multiplied by the
    product of its pole distances; partial products use prefix/suffix
    sweeps, so near-pole evaluations stay finite and cancellation-free.
    """
    tlevels = _split(tflat, sizes)
    L = len(tlevels)
    P = np.empty(len(tflat), dtype=complex)
    S = np.empty(len(tflat))
    r = 0
    for k, tk in enumerate(tlevels):
        for i, ti in enumerate(tk):
            poles: list[complex] = []
            coeffs: list[float] = []
            if k == 0:
                poles.extend(z)
                coeffs.extend([-1.0] * len(z))
            for j, tj in enumerate(tk):
                if j != i:
                    poles.append(tj)
                    coeffs.append(2.0)
            if k + 1 < L:
                poles.extend(tlevels[k + 1])
                coeffs.extend([-1.0] * len(tlevels[k + 1]))
            if k > 0:
                poles.extend(tlevels[k - 1])
                coeffs.extend([-1.0] * len(tlevels[k - 1]))
            d = ti - np.asarray(poles, dtype=complex)
            m = len(d)
            pre = np.ones(m + 1, dtype=complex)
            for a in range(m):
                pre[a + 1] = pre[a] * d[a]
            suf = np.ones(m + 1, dtype=complex)
            for a in range(m - 1, -1, -1):
                suf[a] = suf[a + 1] * d[a]
            partial = pre[:m] * suf[1:]
            cw = np.asarray(coeffs)
            delta = linear[k] if linear is not None else 0.0
            P[r] = np.sum(cw * partial) + delta * pre[m]
            S[r] = np.sum(np.abs(cw * partial)) + abs(delta * pre[m]) + 1e-300
            r += 1
    return P, S


def _poly_newton(z, sizes, t0, linear, rel_tol=1e-9, max_iter=45):
    """Globalizing stage: damped Newton on the cleared polynomial system.

    The polynomial residual grows at infinity, so the escape ray of the
    rational system is repelling here.  The Jacobian is taken by central
    differences; the returned point is only a candidate for polishing.
    """
    l = len(t0)
    t = t0.copy()

    def rel(F, S):
        return np.abs(F / S).max()

    F, S = _poly_residual(z, sizes, t, linear)
    fn = rel(F, S)
    h = 1e-6
    for _ in range(max_iter):
        if fn <= rel_tol:
            return t
        J = np.empty((l, l), dtype=complex)
        step_h = h * max(1.0, np.abs(t).max())
        for c in range(l):
            e = np.zeros(l, dtype=complex)
            e[c] = step_h
            Fp, _ = _poly_residual(z, sizes, t + e, linear)
            Fm, _ = _poly_residual(z, sizes, t - e, linear)
            J[:, c] = (Fp - Fm) / (2.0 * step_h)
        try:
            step = np.linalg.solve(J, F)
        except np.linalg.LinAlgError:
            return None
        alpha = 1.0
        moved = False
        while alpha > 1e-12:
            cand = t - alpha * step
            Fc, Sc = _poly_residual(z, sizes, cand, linear)
            fcn = rel(Fc, Sc)
            if fcn < fn * (1.0 - 0.25 * alpha) or fcn <= rel_tol:
                t, F, S, fn = cand, Fc, Sc, fcn
                moved = True
                break
            alpha *= 0.5
        if not moved:
            return t if fn <= 1e-6 else None
    return t if fn <= 1e-6 else None


def _multistart(z, sizes, linear, starts, tol, seed, expected, max_rounds, dedup_tol):
    rng = np.random.default_rng(seed)
    total = sum(sizes)
    found: list[tuple[np.ndarray, ...]] = []

    # deformed roots scale like charge / |q gap|, so cover wider shells too
    widths = [1.0]
    if linear is not None:
        gap = min(abs(d) for d in linear) if linear else 1.0
        wide = min(60.0, 1.0 + 2.0 * (len(z) + total) / max(gap, 1e-3))
        widths = [1.0, wide / 3.0, wide]

    def is_new(cand):
        flat = np.concatenate(cand)
        scale = max(1.0, np.abs(flat).max())
        for prev in found:
            if np.abs(np.concatenate(prev) - flat).max() <= dedup_tol * scale:
                return False
        return True

    n_starts = starts
    for round_idx in range(max_rounds):
        for k in range(n_starts):
            if linear is None and k % 2 == 0:
                t0 = _hull_start(rng, z, total)
            else:
                t0 = _random_start(rng, z, total, widen=widths[k % len(widths)])
            rough = _poly_newton(z, sizes, t0, linear)
            if rough is None:
                continue
            tl = _split(rough, sizes)
            if _min_separation(z, tl) < 1e-8 * _config_scale(z, tl):
                continue  # cleared-system root on an excluded diagonal
            if np.abs(_grad_t_raw(z, tl, linear)).max() > 1e-5:
                continue
            t = _newton(z, sizes, rough, tol, linear)
            if t is None:
                continue
            cand = _canonical_levels(_split(t, sizes))
            if is_new(cand):
                found.append(cand)
        if expected is not None and len(found) >= expected:
            break
        n_starts *= 4
    found.sort(
        key=lambda tl: tuple(x for tk in tl for v in tk for x in (v.real, v.imag))
    )
    return found


def solve_bethe(
    lam: Partition,
    z,
    starts: int = 64,
    tol: float = 1e-10,
    seed: int = 0,
    max_rounds: int = 3,
) -> list[CriticalPoint]:
    """Multistart damped Newton on dPhi/dt = 0.

    Critical points are canonicalized by sorting each level by (re, im)
    and deduplicated at 1e-6 relative.  For generic z the count equals
    irrep_dimension(lam); the caller compares.
    """
    z = np.asarray(z, dtype=complex).ravel()
    if len(z) != lam.n:
        raise ValueError(f"need {lam.n} positions for {lam!r}")
    sizes = level_sizes(lam)
    if not sizes:
        cfg = BetheConfiguration(z, ())
        return [CriticalPoint(cfg, 0.0, _grad_z_raw(z, ()))]
    expected = irrep_dimension(lam)
    sols = _multistart(
        z, sizes, None, starts, tol, seed, expected, max_rounds, dedup_tol=1e-6
    )
    out = []
    for tl in sols:
        cfg = BetheConfiguration(z, tl)
        gn = float(np.abs(_grad_t_raw(z, tl)).max())
        out.append(CriticalPoint(cfg, gn, _grad_z_raw(z, tl)))
    return out


def solve_bethe_q(
    q,
    z,
    starts: int = 96,
    tol: float = 1e-10,
    seed: int = 0,
    max_rounds: int = 2,
) -> list[CriticalPoint]:
    """Critical points of the deformed master function.

    The expected count n! is reported by the caller, not enforced here;
    starts escalate a bounded number of rounds.
    """
    z = np.asarray(z, dtype=complex).ravel()
    q = np.asarray(q, dtype=complex).ravel()
    n = len(z)
    if len(q) != n:
        raise ValueError("q must match the number of positions")
    sizes = q_level_sizes(n)
    linear = tuple(q[k + 1] - q[k] for k in range(n - 1))
    if not sizes:
        cfg = BetheConfiguration(z, ())
        return [CriticalPoint(cfg, 0.0, _grad_z_raw(z, (), q1=q[0]))]
    import math

    sols = _multistart(
        z, sizes, linear, starts, tol, seed, math.factorial(n), max_rounds, 1e-6
    )
    out = []
    for tl in sols:
        cfg = BetheConfiguration(z, tl)
        gn = float(np.abs(_grad_t_raw(z, tl, linear)).max())
        out.append(CriticalPoint(cfg, gn, _grad_z_raw(z, tl, q1=q[0])))
    return out
