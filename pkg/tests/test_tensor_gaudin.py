import math

import numpy as np
import pytest

from cmkz.calogero_moser import l0_residual
from cmkz.partitions import Partition, irrep_dimension
from cmkz.tensor_gaudin import (
    NonCommutingOperatorsError,
    NumericalRankError,
    Subspace,
    apply_eij,
    eij_matrix,
    gaudin_hamiltonian,
    generalized_gaudin,
    generalized_spectrum,
    joint_eigen,
    joint_eigenspace_dim,
    sample_generic_z,
    singular_basis,
    spectral_points,
    summed_eij,
    weight_basis,
)


def test_weight_basis_examples():
    b = weight_basis(2, 2, (1, 1))
    assert b.indices == ((1, 2), (2, 1))
    assert weight_basis(2, 2, (2, 0)).indices == ((1, 1),)
    b3 = weight_basis(3, 3, (1, 1, 1))
    assert b3.dim == 6
    assert b3.indices[0] == (1, 2, 3)


def test_weight_basis_counts_and_order():
    b = weight_basis(3, 4, (2, 1, 1))
    assert b.dim == math.factorial(4) // 2
    assert list(b.indices) == sorted(b.indices)


def test_weight_basis_validation():
    with pytest.raises(ValueError):
        weight_basis(2, 2, (1, 2))
    with pytest.raises(ValueError):
        weight_basis(2, 3, (-1, 4))


def test_apply_eij_examples():
    b = weight_basis(2, 2, (2, 0))
    vec = np.array([1.0])  # e1 (x) e1
    out, target = apply_eij(2, 1, 2, vec, b)
    assert target.weight == (1, 1)
    k = target.index_of((1, 2))  # e1 (x) e2
    assert abs(out[k] - 1.0) < 1e-15 and np.abs(np.delete(out, k)).max() == 0.0

    b11 = weight_basis(2, 2, (1, 1))
    e12 = np.zeros(2)
    e12[b11.index_of((1, 2))] = 1.0
    out, target = apply_eij(1, 2, 1, e12, b11)
    assert np.abs(out).max() == 0.0  # slot 1 holds letter 1, not 2

    out, target = apply_eij(1, 1, 1, e12, b11)
    assert target is b11 or target.weight == (1, 1)
    assert np.allclose(out, e12)


def test_gaudin_matches_explicit_generator_composition():
    rng = np.random.default_rng(8)
    for N, n, weight in ((2, 2, (1, 1)), (2, 3, (2, 1)), (3, 3, (1, 1, 1))):
        basis = weight_basis(N, n, weight)
        z = sample_generic_z(n, rng)
        sub = Subspace(basis)
        for a in range(1, n + 1):
            H = gaudin_hamiltonian(a, z, sub).matrix
            ref = np.zeros((basis.dim, basis.dim), dtype=complex)
            for i in range(1, N + 1):
                for j in range(1, N + 1):
                    for b in range(1, n + 1):
                        if b == a:
                            continue
                        mji, mid = eij_matrix(j, i, b, basis)
                        if mid is None:
                            continue
                        mij, back = eij_matrix(i, j, a, mid)
                        if back is None:
                            continue
                        ref += (mij @ mji) / (z[a - 1] - z[b - 1])
            assert np.abs(H - ref).max() < 1e-12


def test_singular_basis_small_cases():
    sub = singular_basis(Partition((2,)), 2)
    assert sub.dim == 1
    assert np.allclose(np.abs(sub.columns[:, 0]), [1.0])  # e1 (x) e1

    sub = singular_basis(Partition((1, 1)), 2)
    assert sub.dim == 1
    v = sub.columns[:, 0]
    expected = np.array([1.0, -1.0]) / np.sqrt(2.0)
    overlap = abs(np.vdot(expected, v))
    assert abs(overlap - 1.0) < 1e-12

    assert singular_basis(Partition((2, 1)), 2).dim == 2


def test_singular_basis_dimension_matches_tableau_count():
    for n in range(2, 6):
        from cmkz.partitions import enumerate_partitions

        for lam in enumerate_partitions(n, min(n, 3)):
            rows = max(1, len(lam.trimmed))
            assert singular_basis(lam, rows).dim == irrep_dimension(lam)


def test_singular_basis_rejects_narrow_N():
    with pytest.raises(ValueError):
        singular_basis(Partition((1, 1, 1)), 2)


def test_gaudin_one_by_one_and_sum_rule():
    z = np.array([0.2 + 0.1j, -0.4 - 0.3j])
    sub = singular_basis(Partition((2,)), 2)
    H1 = gaudin_hamiltonian(1, z, sub).matrix
    assert H1.shape == (1, 1)
    assert abs(H1[0, 0] - 1.0 / (z[0] - z[1])) < 1e-14
    H2 = gaudin_hamiltonian(2, z, sub).matrix
    assert abs(H1[0, 0] + H2[0, 0]) < 1e-14


def test_gaudin_sum_vanishes_on_weight_space():
    rng = np.random.default_rng(9)
    basis = weight_basis(2, 3, (2, 1))
    z = sample_generic_z(3, rng)
    total = sum(
        gaudin_hamiltonian(a, z, Subspace(basis)).matrix for a in range(1, 4)
    )
    assert np.abs(total).max() < 1e-13


def test_gaudin_commutators_and_gl_symmetry():
    rng = np.random.default_rng(10)
    basis = weight_basis(3, 4, (2, 1, 1))
    z = sample_generic_z(4, rng)
    mats = [gaudin_hamiltonian(a, z, Subspace(basis)).matrix for a in range(1, 5)]
    top = max(np.linalg.norm(m) for m in mats)
    for i in range(4):
        for j in range(i + 1, 4):
            comm = mats[i] @ mats[j] - mats[j] @ mats[i]
            assert np.linalg.norm(comm) < 1e-10 * max(1.0, top**2)
    # H_a intertwines with the global raising action
    for i in range(1, 4):
        for j in range(i + 1, 4):
            E, target = summed_eij(i, j, basis)
            if target is None or target.dim == 0:
                continue
            for a in range(1, 5):
                Ht = gaudin_hamiltonian(a, z, Subspace(target)).matrix
                Hs = mats[a - 1]
                assert np.abs(E @ Hs - Ht @ E).max() < 1e-12


def test_gaudin_rejects_coincident_z():
    sub = singular_basis(Partition((2,)), 2)
    with pytest.raises(ValueError):
        gaudin_hamiltonian(1, [0.5, 0.5 + 1e-12], sub)


def test_generalized_gaudin_two_by_two():
    z = np.array([0.0, 1.0])
    q = np.array([0.3 + 0.1j, -0.9 + 0.4j])
    H1 = generalized_gaudin(1, z, q, 2).matrix
    s = 1.0 / (z[0] - z[1])
    # basis order: (1,2), (2,1)
    assert np.abs(H1 - np.array([[q[0], s], [s, q[1]]])).max() < 1e-14
    H0 = generalized_gaudin(1, z, np.zeros(2), 2).matrix
    b = weight_basis(2, 2, (1, 1))
    Hg = gaudin_hamiltonian(1, z, Subspace(b)).matrix
    assert np.abs(H0 - Hg).max() == 0.0


def test_generalized_gaudin_trace_identity():
    rng = np.random.default_rng(11)
    for n in (2, 3):
        z = sample_generic_z(n, rng)
        q = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        total = sum(generalized_gaudin(a, z, q, n).matrix for a in range(1, n + 1))
        dim = math.factorial(n)
        assert abs(np.trace(total) - np.sum(q) * dim) < 1e-10
        assert np.abs(total - np.sum(q) * np.eye(dim)).max() < 1e-12


def test_joint_eigen_diagonal_and_identity():
    entries = joint_eigen([np.diag([3.0, 5.0])], seed=1)
    assert sorted(p[0].real for p, _, _ in entries) == pytest.approx([3.0, 5.0])
    entries = joint_eigen([np.eye(2)], seed=1)
    assert len(entries) == 2
    for p, _, res in entries:
        assert abs(p[0] - 1.0) < 1e-12
        assert res < 1e-12


def test_joint_eigen_generalized_pair():
    z = np.array([0.0, 1.0])
    q = np.array([0.2, 1.4])
    mats = [generalized_gaudin(a, z, q, 2).matrix for a in (1, 2)]
    entries = joint_eigen(mats, seed=2)
    assert len(entries) == 2
    for p, _, _ in entries:
        assert abs(p[0] + p[1] - q.sum()) < 1e-12


def test_joint_eigen_rejects_non_commuting():
    a = np.array([[0.0, 1.0], [0.0, 0.0]])
    b = np.array([[1.0, 0.0], [0.0, -1.0]])
    with pytest.raises(NonCommutingOperatorsError):
        joint_eigen([a, b], seed=0)


def test_spectral_points_closed_forms():
    rng = np.random.default_rng(12)
    for n in (2, 3, 4):
        z = sample_generic_z(n, rng)
        expected = np.array([np.sum(1.0 / (z[a] - np.delete(z, a))) for a in range(n)])
        pts = spectral_points(Partition((n,)), z, seed=3)
        assert len(pts) == 1
        assert np.abs(pts[0].p - expected).max() < 1e-10
        pts = spectral_points(Partition((1,) * n), z, seed=3)
        assert len(pts) == 1
        assert np.abs(pts[0].p + expected).max() < 1e-10


def test_spectral_points_land_on_zero_level():
    rng = np.random.default_rng(13)
    lam = Partition((2, 1))
    z = sample_generic_z(3, rng)
    pts = spectral_points(lam, z, seed=5)
    assert len(pts) == 2
    for sp in pts:
        assert l0_residual(sp.z, sp.p) < 1e-8
        assert abs(np.sum(sp.p)) < 1e-10


def test_spectral_points_independent_of_row_count():
    rng = np.random.default_rng(14)
    lam = Partition((2, 2))
    z = sample_generic_z(4, rng)
    a = spectral_points(lam, z, N=2, seed=1)
    b = spectral_points(lam, z, N=3, seed=9)
    da = sorted((round(p.real, 8), round(p.imag, 8)) for sp in a for p in sp.p)
    db = sorted((round(p.real, 8), round(p.imag, 8)) for sp in b for p in sp.p)
    assert da == db


def test_generalized_spectrum_count_and_eigenspace_dim():
    rng = np.random.default_rng(15)
    n = 3
    z = sample_generic_z(n, rng)
    q = sample_generic_z(n, rng, radius=1.5)
    pts = generalized_spectrum(z, q, seed=4)
    assert len(pts) == 6
    mats0 = [generalized_gaudin(a, z, np.zeros(n), n).matrix for a in range(1, n + 1)]
    ref = spectral_points(Partition((2, 1)), z, seed=6)
    assert joint_eigenspace_dim(mats0, ref[0].p) == 2


def test_sample_generic_z_determinism_and_separation():
    a = sample_generic_z(5, 42)
    b = sample_generic_z(5, 42)
    assert np.array_equal(a, b)
    d = np.abs(a[:, None] - a[None, :])[np.triu_indices(5, 1)]
    assert d.min() >= 0.02


def test_spectral_point_json():
    rng = np.random.default_rng(16)
    z = sample_generic_z(2, rng)
    sp = spectral_points(Partition((2,)), z, seed=0)[0]
    d = sp.as_dict()
    assert set(d) == {"z", "p", "residual"}
    assert len(d["z"]) == 2 and len(d["z"][0]) == 2
