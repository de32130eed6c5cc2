"""Suite orchestration: point-set matching, the q -> 0 collision study,
and the named verification checks behind the command line.

Every check derives its generator from (master seed, check id), so replay
with one config is bit-stable no matter how the pool schedules the work.
Reports carry no timestamps; bodies of identical runs compare equal.
"""

from __future__ import annotations

import hashlib
import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import calogero_moser as cm
from . import master_function as mf
from . import wronski as wr
from .partitions import Partition, enumerate_partitions, irrep_dimension
from .polyalg import elementary_symmetric
from .serialize import canonical_json, pair_list
from .tensor_gaudin import (
    generalized_gaudin,
    generalized_spectrum,
    joint_eigenspace_dim,
    sample_generic_z,
    spectral_points,
)

SUITES = ("l0", "lq", "bethe", "wronski", "identities", "collision")


@dataclass(frozen=True)
class Tolerances:
    eigen: float = 1e-8
    bethe: float = 1e-10
    residual: float = 1e-8
    match: float = 1e-6
    n_independence: float = 1e-8
    closed_form: float = 1e-10
    fiber: float = 1e-9
    identity: float = 1e-10
    bivariate: float = 1e-8
    annihilation: float = 1e-12
    rank_one: float = 1e-12
    gradient_fd: float = 1e-5
    collision_match: float = 1e-4


@dataclass(frozen=True)
class VerificationConfig:
    n_min: int = 2
    n_max: int = 4
    extra_l0_cases: tuple[tuple[int, int], ...] = ((5, 3),)
    trials: int = 20
    seed: int = 2024
    partition_filter: tuple[tuple[int, ...], ...] | None = None
    tolerances: Tolerances = field(default_factory=Tolerances)
    q_scales: tuple[float, ...] = (1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
    collision_cutoff_coeff: float = 10.0
    collision_cutoff_exponent: float = 0.5
    suites: tuple[str, ...] = SUITES
    jobs: int = 2

    def as_dict(self) -> dict:
        d = asdict(self)
        d["partition_filter"] = (
            None
            if self.partition_filter is None
            else [list(p) for p in self.partition_filter]
        )
        d["extra_l0_cases"] = [list(c) for c in self.extra_l0_cases]
        d["q_scales"] = list(self.q_scales)
        d["suites"] = list(self.suites)
        return d

    def digest(self) -> str:
        return hashlib.sha256(canonical_json(self.as_dict()).encode()).hexdigest()[:16]


def check_seed(master_seed: int, check_id: str) -> int:
    return int(
        np.random.SeedSequence([master_seed, zlib.crc32(check_id.encode())])
        .generate_state(1)[0]
    )


# ---------------------------------------------------------------------------
# point-set matching


@dataclass(eq=False)
class MatchResult:
    ok: bool
    pairs: tuple[tuple[int, int, float], ...]
    unmatched_a: tuple[int, ...]
    unmatched_b: tuple[int, ...]

    @property
    def max_distance(self) -> float:
        return max((d for _, _, d in self.pairs), default=0.0)


def match_points(A, B, tol: float) -> MatchResult:
    """Bipartite nearest matching of complex tuples under the sup metric.

    Succeeds iff the sets have equal size and an assignment exists with
    every distance at most tol; failures list the unmatched entries.
    """
    A = [np.asarray(a, dtype=complex).ravel() for a in A]
    B = [np.asarray(b, dtype=complex).ravel() for b in B]
    if not A and not B:
        return MatchResult(True, (), (), ())
    if not A or not B:
        return MatchResult(False, (), tuple(range(len(A))), tuple(range(len(B))))
    cost = np.zeros((len(A), len(B)))
    for i, a in enumerate(A):
        for j, b in enumerate(B):
            if len(a) != len(b):
                cost[i, j] = np.inf
            else:
                cost[i, j] = np.abs(a - b).max()
    finite = np.where(np.isfinite(cost), cost, 1e300)
    rows, cols = linear_sum_assignment(finite)
    pairs = []
    bad_a, bad_b = [], []
    for i, j in zip(rows, cols):
        d = cost[i, j]
        if np.isfinite(d) and d <= tol:
            pairs.append((int(i), int(j), float(d)))
        else:
            bad_a.append(int(i))
            bad_b.append(int(j))
    matched_a = {i for i, _, _ in pairs}
    matched_b = {j for _, j, _ in pairs}
    bad_a += [i for i in range(len(A)) if i not in matched_a and i not in bad_a]
    bad_b += [j for j in range(len(B)) if j not in matched_b and j not in bad_b]
    ok = len(A) == len(B) and not bad_a and not bad_b
    return MatchResult(ok, tuple(pairs), tuple(sorted(bad_a)), tuple(sorted(bad_b)))


# ---------------------------------------------------------------------------
# collision study


@dataclass(eq=False)
class ClusterRecord:
    centroid: np.ndarray
    size: int
    lam: Partition | None
    match_distance: float
    eigenspace_dim: int

    def as_dict(self) -> dict:
        return {
            "centroid": pair_list(self.centroid),
            "size": self.size,
            "lambda": None if self.lam is None else self.lam.as_list(),
            "match_distance": self.match_distance,
            "eigenspace_dim": self.eigenspace_dim,
        }


@dataclass(eq=False)
class CollisionReport:
    n: int
    z: np.ndarray
    q_direction: np.ndarray
    scales: tuple[float, ...]
    clusters: list[ClusterRecord]
    resolved: bool
    per_lambda_sizes: dict[tuple[int, ...], list[int]]

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "z": pair_list(self.z),
            "q_direction": pair_list(self.q_direction),
            "scales": list(self.scales),
            "clusters": [c.as_dict() for c in self.clusters],
            "resolved": self.resolved,
            "per_lambda_sizes": {
                ",".join(map(str, k)): v for k, v in self.per_lambda_sizes.items()
            },
        }


def _single_linkage(points: list[np.ndarray], cutoff: float) -> list[list[int]]:
    m = len(points)
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(m):
        for j in range(i + 1, m):
            if np.abs(points[i] - points[j]).max() <= cutoff:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups: dict[int, list[int]] = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def collision_study(
    n: int,
    q_direction,
    scales=None,
    seed: int = 0,
    cutoff_coeff: float = 10.0,
    cutoff_exponent: float = 0.5,
    match_tol: float = 1e-4,
) -> CollisionReport:
    """Track the joint spectrum of H_a(z, s*q0) as s -> 0.

    At the smallest scale the n! tuples are clustered by single linkage
    with cutoff coeff * s^exponent (square-root splitting is the generic
    branching rate), clusters are matched against the per-partition
    spectra at q = 0, and the joint eigenspace dimension at q = 0 is
    measured for each limiting tuple.
    """
    if n > 4:
        raise ValueError("collision study supports n <= 4")
    q0 = np.asarray(q_direction, dtype=complex).ravel()
    if len(q0) != n:
        raise ValueError(f"q_direction must have {n} entries")
    if n > 1:
        dmin = np.abs(q0[:, None] - q0[None, :])[np.triu_indices(n, 1)].min()
        if dmin <= 0:
            raise ValueError("q_direction entries must be distinct")
    scales = tuple(scales) if scales is not None else (1.0, 1e-2, 1e-4, 1e-6)
    rng = np.random.default_rng(seed)
    z = sample_generic_z(n, rng)

    reference: list[tuple[Partition, np.ndarray]] = []
    for lam in enumerate_partitions(n, n):
        for sp in spectral_points(lam, z, seed=seed + 1):
            reference.append((lam, sp.p))

    tuples_by_scale = {}
    for s in sorted(scales, reverse=True):
        pts = generalized_spectrum(z, s * q0, seed=seed + 2)
        tuples_by_scale[s] = [sp.p for sp in pts]

    s_min = min(scales)
    final = tuples_by_scale[s_min]
    cutoff = cutoff_coeff * s_min**cutoff_exponent
    groups = _single_linkage(final, cutoff)

    ops0 = [generalized_gaudin(a, z, np.zeros(n), n) for a in range(1, n + 1)]
    mats0 = [op.matrix for op in ops0]

    clusters = []
    used_refs: set[int] = set()
    resolved = True
    per_lambda: dict[tuple[int, ...], list[int]] = {}
    for group in groups:
        centroid = np.mean([final[i] for i in group], axis=0)
        best, best_d = None, np.inf
        for ridx, (lam, p_ref) in enumerate(reference):
            if ridx in used_refs:
                continue
            d = np.abs(centroid - p_ref).max()
            if d < best_d:
                best, best_d = ridx, d
        if best is None or best_d > match_tol:
            resolved = False
            lam_match = None
            dim = 0
        else:
            used_refs.add(best)
            lam_match, p_ref = reference[best]
            dim = joint_eigenspace_dim(mats0, p_ref)
            if len(group) != irrep_dimension(lam_match) or dim != irrep_dimension(
                lam_match
            ):
                resolved = False
        clusters.append(
            ClusterRecord(
                centroid,
                len(group),
                lam_match,
                float(best_d if best is not None else np.inf),
                dim,
            )
        )
        if lam_match is not None:
            per_lambda.setdefault(lam_match.trimmed, []).append(len(group))
    if len(used_refs) != len(reference):
        resolved = False
    clusters.sort(key=lambda c: tuple(x for v in c.centroid for x in (v.real, v.imag)))
    return CollisionReport(
        n, z, q0, scales, clusters, resolved, per_lambda
    )


# ---------------------------------------------------------------------------
# named checks


@dataclass(eq=False)
class CheckRecord:
    check: str
    suite: str
    claim: str
    seed: int
    passed: bool
    counts: dict
    residuals: dict
    details: dict = field(default_factory=dict)
    error: str | None = None

    def as_dict(self) -> dict:
        return {
            "check": self.check,
            "suite": self.suite,
            "claim": self.claim,
            "seed": self.seed,
            "passed": self.passed,
            "counts": self.counts,
            "residuals": self.residuals,
            "details": self.details,
            "error": self.error,
        }


def _l0_case_list(config: VerificationConfig):
    cases = []
    for n in range(config.n_min, config.n_max + 1):
        cases.append((n, n))
    for n, max_parts in config.extra_l0_cases:
        cases.append((n, max_parts))
    out = []
    for n, max_parts in cases:
        for lam in enumerate_partitions(n, max_parts):
            if config.partition_filter is not None and all(
                lam != Partition(f) for f in config.partition_filter
            ):
                continue
            out.append((n, lam))
    return out


def check_l0_membership(config: VerificationConfig) -> CheckRecord:
    """Joint Gaudin tuples on singular weight spaces lie on the zero level
    of every first integral, with the per-partition counts d and the
    weighted total n!."""
    seed = check_seed(config.seed, "l0-membership")
    rng = np.random.default_rng(seed)
    tol = config.tolerances.residual
    worst = 0.0
    ok = True
    count_rows = {}
    totals_ok = True
    full_range = set(range(config.n_min, config.n_max + 1))
    weighted = {n: 0 for n in full_range}
    for n, lam in _l0_case_list(config):
        d = irrep_dimension(lam)
        found = set()
        for _ in range(config.trials):
            z = sample_generic_z(n, rng)
            pts = spectral_points(
                lam, z, tol=config.tolerances.eigen, seed=int(rng.integers(2**31))
            )
            found.add(len(pts))
            if len(pts) != d:
                ok = False
            for sp in pts:
                fi = cm.first_integrals(sp.z, sp.p)
                scale = 1.0 + np.abs(sp.p).max()
                rel = max(
                    abs(v) / scale ** (a + 1) for a, v in enumerate(fi.values)
                )
                worst = max(worst, rel)
                if rel > tol:
                    ok = False
        count_rows[",".join(map(str, lam.trimmed))] = {
            "expected": d,
            "found": sorted(found),
        }
        if n in full_range and len(found) == 1:
            weighted[n] += d * found.pop()
    for n in sorted(full_range):
        if weighted[n] != math.factorial(n):
            totals_ok = False
            ok = False
    return CheckRecord(
        "l0-membership",
        "l0",
        "joint Gaudin spectra on singular subspaces satisfy the zero-level "
        "equations of the Calogero-Moser first integrals",
        seed,
        ok,
        {"per_lambda": count_rows, "weighted_totals_match_factorial": totals_ok},
        {"max_scaled_residual": worst, "tolerance": tol},
    )


def check_n_independence(config: VerificationConfig) -> CheckRecord:
    """Spectra agree when the partition is carried with one extra zero row."""
    seed = check_seed(config.seed, "n-independence")
    rng = np.random.default_rng(seed)
    tol = config.tolerances.n_independence
    ok = True
    worst = 0.0
    cases = 0
    for n, lam in _l0_case_list(config):
        z = sample_generic_z(n, rng)
        rows = max(1, len(lam.trimmed))
        a = spectral_points(lam, z, N=rows, seed=int(rng.integers(2**31)))
        b = spectral_points(lam, z, N=rows + 1, seed=int(rng.integers(2**31)))
        res = match_points([sp.p for sp in a], [sp.p for sp in b], tol)
        worst = max(worst, res.max_distance)
        cases += 1
        if not res.ok:
            ok = False
    return CheckRecord(
        "n-independence",
        "l0",
        "the spectral variety is unchanged when the weight gains a zero row",
        seed,
        ok,
        {"cases": cases},
        {"max_match_distance": worst, "tolerance": tol},
    )


def check_closed_forms(config: VerificationConfig) -> CheckRecord:
    """Row and column extreme partitions have explicit one-point spectra."""
    seed = check_seed(config.seed, "closed-forms")
    rng = np.random.default_rng(seed)
    tol = config.tolerances.closed_form
    ok = True
    worst = 0.0
    for n in range(2, 6):
        z = sample_generic_z(n, rng)
        expected = np.array(
            [np.sum(1.0 / (z[a] - np.delete(z, a))) for a in range(n)]
        )
        for lam, sign in ((Partition((n,)), 1.0), (Partition((1,) * n), -1.0)):
            pts = spectral_points(lam, z, seed=int(rng.integers(2**31)))
            if len(pts) != 1:
                ok = False
                continue
            dev = np.abs(pts[0].p - sign * expected).max()
            worst = max(worst, dev)
            if dev > tol:
                ok = False
    return CheckRecord(
        "closed-forms",
        "l0",
        "single-row and single-column spectra match the explicit pole sums",
        seed,
        ok,
        {"n_range": [2, 5]},
        {"max_deviation": worst, "tolerance": tol},
    )


BETHE_CASES = (
    (2, (1, 1)),
    (3, (2, 1)),
    (4, (2, 2)),
    (4, (3, 1)),
    (4, (2, 1, 1)),
)


def check_bethe(config: VerificationConfig) -> CheckRecord:
    """Critical points of the master function reproduce the joint spectra."""
    seed = check_seed(config.seed, "bethe-correspondence")
    rng = np.random.default_rng(seed)
    ok = True
    worst_grad = 0.0
    worst_match = 0.0
    counts = {}
    midpoint_dev = 0.0
    for n, parts in BETHE_CASES:
        lam = Partition(parts)
        d = irrep_dimension(lam)
        z = sample_generic_z(n, rng)
        crits = mf.solve_bethe(
            lam, z, tol=config.tolerances.bethe, seed=int(rng.integers(2**31))
        )
        counts[",".join(map(str, parts))] = {"expected": d, "found": len(crits)}
        if len(crits) != d:
            ok = False
            continue
        worst_grad = max(worst_grad, max(c.grad_norm for c in crits))
        if any(c.grad_norm > config.tolerances.bethe for c in crits):
            ok = False
        pts = spectral_points(lam, z, seed=int(rng.integers(2**31)))
        res = match_points(
            [c.p for c in crits], [sp.p for sp in pts], config.tolerances.match
        )
        worst_match = max(worst_match, res.max_distance)
        if not res.ok:
            ok = False
        if parts == (1, 1):
            t = crits[0].config.t[0][0]
            midpoint_dev = abs(t - (z[0] + z[1]) / 2.0)
            if midpoint_dev > 1e-12:
                ok = False
    return CheckRecord(
        "bethe-correspondence",
        "bethe",
        "Bethe critical points map onto the joint Gaudin spectra with the "
        "full critical count",
        seed,
        ok,
        counts,
        {
            "max_grad_norm": worst_grad,
            "max_match_distance": worst_match,
            "midpoint_deviation": midpoint_dev,
        },
    )


def check_lq(config: VerificationConfig) -> CheckRecord:
    """The deformed spectra fill the q-level set of the first integrals."""
    seed = check_seed(config.seed, "lq-membership")
    rng = np.random.default_rng(seed)
    tol = config.tolerances.residual
    ok = True
    worst = 0.0
    worst_trace = 0.0
    for n in (2, 3):
        for _ in range(config.trials):
            z = sample_generic_z(n, rng)
            q = sample_generic_z(n, rng, radius=1.5)
            pts = generalized_spectrum(z, q, seed=int(rng.integers(2**31)))
            if len(pts) != math.factorial(n):
                ok = False
            sigma1 = np.sum(q)
            for sp in pts:
                rel = cm.lq_residual(sp.z, sp.p, q)
                worst = max(worst, rel)
                if rel > tol:
                    ok = False
                tdev = abs(np.sum(sp.p) - sigma1)
                worst_trace = max(worst_trace, tdev)
                if tdev > 1e-10:
                    ok = False
    return CheckRecord(
        "lq-membership",
        "lq",
        "joint spectra of the deformed Hamiltonians solve Q_a = e_a(q) with "
        "trace e_1(q)",
        seed,
        ok,
        {"trials": config.trials, "n_values": [2, 3]},
        {"max_scaled_residual": worst, "max_trace_deviation": worst_trace},
    )


def check_collision(config: VerificationConfig) -> CheckRecord:
    """Cluster sizes and limit points of the q -> 0 degeneration at n = 3."""
    seed = check_seed(config.seed, "collision-multiplicity")
    rng = np.random.default_rng(seed)
    n = 3
    q0 = np.array([1.0 + 0.3j, -0.7 + 0.1j, 0.2 - 0.9j])
    report = collision_study(
        n,
        q0,
        scales=config.q_scales,
        seed=int(rng.integers(2**31)),
        cutoff_coeff=config.collision_cutoff_coeff,
        cutoff_exponent=config.collision_cutoff_exponent,
        match_tol=config.tolerances.collision_match,
    )
    sizes = sorted(c.size for c in report.clusters)
    ok = report.resolved and sizes == [1, 1, 2, 2]
    dims_ok = all(
        c.lam is not None and c.eigenspace_dim == irrep_dimension(c.lam)
        for c in report.clusters
    )
    ok = ok and dims_ok
    return CheckRecord(
        "collision-multiplicity",
        "collision",
        "as q -> 0 the n! deformed tuples merge onto the per-partition "
        "spectra in groups of the irrep dimension",
        seed,
        ok,
        {
            "cluster_sizes": sizes,
            "per_lambda": {
                ",".join(map(str, k)): v for k, v in report.per_lambda_sizes.items()
            },
        },
        {
            "max_match_distance": max(
                (c.match_distance for c in report.clusters), default=0.0
            ),
            "tolerance": config.tolerances.collision_match,
        },
        {"resolved": report.resolved},
    )


FIBER_CASES = ((2, 0), (1, 1), (2, 1), (2, 2), (3, 1))


def check_wronski_degree(config: VerificationConfig) -> CheckRecord:
    """Fiber cardinalities of the Wronski map at generic targets."""
    seed = check_seed(config.seed, "wronski-degree")
    rng = np.random.default_rng(seed)
    ok = True
    worst = 0.0
    counts = {}
    targets = 5
    for parts in FIBER_CASES:
        lam = Partition(parts)
        n = lam.n
        d = irrep_dimension(lam)
        found_counts = []
        for _ in range(targets):
            z = sample_generic_z(n, rng)
            sigma = elementary_symmetric(z)
            sols = wr.wronski_fiber(
                lam,
                sigma,
                tol=config.tolerances.fiber,
                seed=int(rng.integers(2**31)),
            )
            found_counts.append(len(sols))
            if len(sols) != d:
                ok = False
            for sol in sols:
                w = wr.wronski_map(lam, sol)
                res = np.abs(w.w - sigma).max()
                worst = max(worst, res)
                if res > config.tolerances.fiber:
                    ok = False
        counts[",".join(map(str, parts))] = {
            "expected": d,
            "found": found_counts,
        }
    return CheckRecord(
        "wronski-degree",
        "wronski",
        "Wronski fibers at generic targets carry exactly the irrep dimension "
        "of solutions",
        seed,
        ok,
        counts,
        {"max_w_residual": worst, "tolerance": config.tolerances.fiber},
    )


def check_operator_identities(config: VerificationConfig) -> CheckRecord:
    """Diagonal coefficient identity, bivariate determinant identity, and
    annihilation of the source tuple."""
    seed = check_seed(config.seed, "operator-identities")
    rng = np.random.default_rng(seed)
    t = config.tolerances
    ok = True
    worst_fla = 0.0
    worst_biv = 0.0
    worst_ann = 0.0
    for n in range(1, 6):
        for lam in enumerate_partitions(n, n):
            for _ in range(100):
                x = wr.random_poly_tuple(lam, rng)
                worst_fla = max(worst_fla, wr.fla_residual(lam, x))
            x = wr.random_poly_tuple(lam, rng)
            op = wr.fundamental_operator(lam, x)
            for f in x.polys():
                worst_ann = max(worst_ann, op.annihilation_residual(f))
    if worst_fla > t.identity or worst_ann > t.annihilation:
        ok = False
    for n in range(2, 5):
        for lam in enumerate_partitions(n, n):
            done = 0
            for _ in range(40):
                if done >= 3:
                    break
                x = wr.random_poly_tuple(lam, rng)
                try:
                    r = wr.bivariate_identity_residual(
                        lam, x, seed=int(rng.integers(2**31))
                    )
                except ValueError:
                    continue  # tuple outside the simple-root stratum
                worst_biv = max(worst_biv, r)
                done += 1
            if done < 3 or worst_biv > t.bivariate:
                ok = False
    return CheckRecord(
        "operator-identities",
        "identities",
        "the annihilating operator satisfies the diagonal-coefficient and "
        "bivariate determinant identities",
        seed,
        ok,
        {"partition_sets": "n <= 5 (diagonal), n <= 4 (bivariate)"},
        {
            "max_fla_residual": worst_fla,
            "max_bivariate_residual": worst_biv,
            "max_annihilation_residual": worst_ann,
        },
    )


def _fd_gradient(value_fn, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    g = np.zeros(len(x), dtype=complex)
    for k in range(len(x)):
        e = np.zeros(len(x), dtype=complex)
        e[k] = h
        g[k] = (value_fn(x + e) - value_fn(x - e)) / (2.0 * h)
    return g


def check_structural_invariants(config: VerificationConfig) -> CheckRecord:
    """Rank-one lift, Hamiltonian identities, and gradient consistency."""
    seed = check_seed(config.seed, "structural-invariants")
    rng = np.random.default_rng(seed)
    t = config.tolerances
    ok = True
    worst_rank = 0.0
    worst_ham = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 7))
        z = sample_generic_z(n, rng)
        p = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        point = cm.xi(z, p)
        worst_rank = max(worst_rank, cm.rank_one_residual(point))
        h = cm.cm_hamiltonian(z, p)
        q1, q2 = cm.first_integrals(z, p).values[:2]
        tr2 = complex(np.trace(point.Q @ point.Q))
        scale = max(1.0, abs(h))
        worst_ham = max(
            worst_ham, abs(h - tr2) / scale, abs(h - (q1**2 - 2.0 * q2)) / scale
        )
    if worst_rank > t.rank_one or worst_ham > t.identity:
        ok = False

    worst_grad = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 5))
        lams = [l for l in enumerate_partitions(n, n) if mf.level_sizes(l)]
        lam = lams[int(rng.integers(len(lams)))]
        z = sample_generic_z(n, rng)
        sizes = mf.level_sizes(lam)
        tvars = [
            3.0 * (rng.standard_normal(s) + 1j * rng.standard_normal(s))
            for s in sizes
        ]
        flat = np.concatenate([z] + tvars)

        def split(v):
            zz = v[:n]
            tl, pos = [], n
            for s in sizes:
                tl.append(v[pos : pos + s])
                pos += s
            return zz, tl

        def val(v):
            zz, tl = split(v)
            return mf.master_value(lam, zz, tl)

        try:
            analytic = np.concatenate(
                [mf.grad_z(lam, z, tvars), mf.grad_t(lam, z, tvars)]
            )
            fd = _fd_gradient(val, flat)
        except ValueError:
            continue  # sampled configuration too close to a collision
        rel = np.abs(analytic - fd).max() / max(1.0, np.abs(analytic).max())
        worst_grad = max(worst_grad, rel)

        q = sample_generic_z(n, rng, radius=1.5)
        qsizes = mf.q_level_sizes(n)
        tq = [
            3.0 * (rng.standard_normal(s) + 1j * rng.standard_normal(s))
            for s in qsizes
        ]
        flatq = np.concatenate([z] + tq)

        def splitq(v):
            zz = v[:n]
            tl, pos = [], n
            for s in qsizes:
                tl.append(v[pos : pos + s])
                pos += s
            return zz, tl

        def valq(v):
            zz, tl = splitq(v)
            return mf.master_value_q(q, zz, tl)

        try:
            analytic_q = np.concatenate(
                [mf.grad_z_q(q, z, tq), mf.grad_t_q(q, z, tq)]
            )
            fdq = _fd_gradient(valq, flatq)
        except ValueError:
            continue
        relq = np.abs(analytic_q - fdq).max() / max(1.0, np.abs(analytic_q).max())
        worst_grad = max(worst_grad, relq)
    if worst_grad > t.gradient_fd:
        ok = False
    return CheckRecord(
        "structural-invariants",
        "identities",
        "the rank-one lift, Hamiltonian coefficient identities, and analytic "
        "gradients hold at random inputs",
        seed,
        ok,
        {"rank_one_trials": 1000, "gradient_trials": 100},
        {
            "max_rank_one_residual": worst_rank,
            "max_hamiltonian_mismatch": worst_ham,
            "max_gradient_fd_mismatch": worst_grad,
        },
    )


CHECKS = {
    "l0-membership": ("l0", check_l0_membership),
    "n-independence": ("l0", check_n_independence),
    "closed-forms": ("l0", check_closed_forms),
    "bethe-correspondence": ("bethe", check_bethe),
    "lq-membership": ("lq", check_lq),
    "wronski-degree": ("wronski", check_wronski_degree),
    "operator-identities": ("identities", check_operator_identities),
    "structural-invariants": ("identities", check_structural_invariants),
    "collision-multiplicity": ("collision", check_collision),
}


@dataclass(eq=False)
class Report:
    config: VerificationConfig
    records: list[CheckRecord]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def as_dict(self) -> dict:
        return {
            "config": self.config.as_dict(),
            "config_digest": self.config.digest(),
            "seed": self.config.seed,
            "records": [r.as_dict() for r in self.records],
            "passed": self.passed,
        }

    def body_json(self) -> str:
        return canonical_json(self.as_dict())


def run_suite(config: VerificationConfig) -> Report:
    """Run the selected suites; deterministic given (config, seed).

    Checks execute in a small thread pool and are merged in registry
    order, so scheduling cannot influence the report body.  A check that
    raises is recorded as failed, not fatal.
    """
    for s in config.suites:
        if s not in SUITES:
            raise ValueError(f"unknown suite {s!r}; choose from {SUITES}")
    selected = [
        (cid, fn) for cid, (suite, fn) in CHECKS.items() if suite in config.suites
    ]

    def run_one(item):
        cid, fn = item
        try:
            return fn(config)
        except Exception as exc:  # recorded, not fatal
            return CheckRecord(
                cid,
                CHECKS[cid][0],
                "check aborted",
                check_seed(config.seed, cid),
                False,
                {},
                {},
                error=f"{type(exc).__name__}: {exc}",
            )

    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            records = list(pool.map(run_one, selected))
    else:
        records = [run_one(item) for item in selected]
    return Report(config, records)
