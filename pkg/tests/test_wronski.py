import numpy as np
import pytest

from cmkz.calogero_moser import l0_residual, lq_residual
from cmkz.harness import match_points
from cmkz.partitions import Partition, enumerate_partitions, irrep_dimension
from cmkz.polyalg import ExpPoly, elementary_symmetric, peval
from cmkz.tensor_gaudin import generalized_spectrum, sample_generic_z, spectral_points
from cmkz.wronski import (
    PolyTuple,
    QuasiExpTuple,
    bivariate_identity_residual,
    fla_residual,
    free_positions,
    fundamental_operator,
    fundamental_operator_q,
    poly_tuple_from_vector,
    psi,
    psi_q,
    random_poly_tuple,
    wronski_fiber,
    wronski_map,
    wronski_map_q,
    wronskian,
)


def test_free_positions_examples():
    assert free_positions(Partition((2, 0))) == ((1, 1), (1, 2))
    assert free_positions(Partition((1, 1))) == ((1, 2), (2, 1))
    for n in range(1, 7):
        for lam in enumerate_partitions(n, n):
            assert len(free_positions(lam)) == n


def test_poly_tuple_validation_and_polys():
    lam = Partition((2, 0))
    x = PolyTuple(lam, {(1, 1): 2.0, (1, 2): -1.0})
    f1, f2 = x.polys()
    assert np.allclose(f1, [0.0, -1.0, 2.0, 1.0])  # u^3 + 2u^2 - u
    assert np.allclose(f2, [1.0])
    with pytest.raises(ValueError):
        PolyTuple(lam, {(1, 1): 2.0})


def test_wronskian_examples():
    assert np.allclose(wronskian([np.array([1.0]), np.array([0.0, 1.0])]), [1.0])
    w = wronskian([np.array([0, 0, 0, 1.0]), np.array([1.0])])
    assert np.allclose(w, [0.0, 0.0, -3.0])
    q1, q2 = 0.7 + 0.2j, -0.4 + 1.1j
    w = wronskian([ExpPoly(q1, [1.0]), ExpPoly(q2, [1.0])])
    assert isinstance(w, ExpPoly)
    assert abs(w.rate - (q1 + q2)) < 1e-15
    assert np.allclose(w.coeffs, [q2 - q1])


def test_wronski_map_row_pair_closed_form():
    lam = Partition((2, 0))
    rng = np.random.default_rng(0)
    for _ in range(5):
        a, b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        x = PolyTuple(lam, {(1, 1): a, (1, 2): b})
        w = wronski_map(lam, x)
        assert abs(w.w[0] - (-2.0 * a / 3.0)) < 1e-13
        assert abs(w.w[1] - b / 3.0) < 1e-13
    x0 = PolyTuple(lam, {(1, 1): 0.0, (1, 2): 0.0})
    assert np.abs(wronski_map(lam, x0).w).max() == 0.0


def test_wronski_map_column_pair_closed_form():
    lam = Partition((1, 1))
    x = PolyTuple(lam, {(1, 2): 0.3 + 0.1j, (2, 1): -0.8 + 0.5j})
    w = wronski_map(lam, x)
    assert abs(w.w[0] - (-2.0 * x.coeffs[(2, 1)])) < 1e-13
    assert abs(w.w[1] - (-x.coeffs[(1, 2)])) < 1e-13


def test_wronski_map_target_inversion():
    # solving W = e(z) for lam = (2,0) is linear: f11 = -3 e1/2, f12 = 3 e2
    lam = Partition((2, 0))
    z = np.array([0.0, 1.0])
    x = PolyTuple(lam, {(1, 1): -1.5, (1, 2): 0.0})
    w = wronski_map(lam, x)
    assert np.abs(w.w - elementary_symmetric(z)).max() < 1e-13


def test_fundamental_operator_monomial_case():
    lam = Partition((2, 0))
    x = PolyTuple(lam, {(1, 1): 0.0, (1, 2): 0.0})
    op = fundamental_operator(lam, x)
    expected = np.zeros((3, 3), dtype=complex)
    expected[0, 0] = 1.0
    expected[1, 1] = -2.0
    assert np.abs(op.P - expected).max() < 1e-14


def test_fundamental_operator_general_row_pair():
    lam = Partition((2, 0))
    s1, s2 = 0.9 - 0.3j, -0.2 + 0.7j
    x = PolyTuple(lam, {(1, 1): -1.5 * s1, (1, 2): 3.0 * s2})
    P = fundamental_operator(lam, x).P
    assert abs(P[0, 0] - 1.0) < 1e-14
    assert abs(P[0, 1] + s1) < 1e-13
    assert abs(P[0, 2] - s2) < 1e-13
    assert abs(P[1, 1] + 2.0) < 1e-13
    assert abs(P[1, 2] - s1) < 1e-13
    assert abs(P[2, 2]) < 1e-13


def test_operator_annihilates_tuple():
    rng = np.random.default_rng(1)
    for n in (1, 2, 3, 4):
        for lam in enumerate_partitions(n, n):
            x = random_poly_tuple(lam, rng)
            op = fundamental_operator(lam, x)
            for f in x.polys():
                assert op.annihilation_residual(f) < 1e-12
    # structural shape: P vanishes below the diagonal for polynomial tuples
    lam = Partition((2, 1))
    x = random_poly_tuple(lam, rng)
    P = fundamental_operator(lam, x).P
    assert abs(P[0, 0] - 1.0) < 1e-12
    for i in range(1, 4):
        for j in range(i):
            assert abs(P[i, j]) < 1e-12


def test_fla_identity_frozen_and_random():
    lam = Partition((2, 0))
    x = PolyTuple(lam, {(1, 1): 1.7, (1, 2): -0.4})
    assert fla_residual(lam, x) < 1e-12
    lam = Partition((1, 1))
    x = PolyTuple(lam, {(1, 2): 0.6j, (2, 1): 2.0})
    assert fla_residual(lam, x) < 1e-12
    rng = np.random.default_rng(2)
    for n in (3, 4, 5):
        for lam in enumerate_partitions(n, n):
            vals = [fla_residual(lam, random_poly_tuple(lam, rng)) for _ in range(5)]
            assert max(vals) < 1e-10  # independent of the free coefficients


def test_psi_row_pair_closed_form():
    lam = Partition((2, 0))
    x = PolyTuple(lam, {(1, 1): -1.5, (1, 2): 0.0})  # roots 0, 1
    sp = psi(lam, x)
    assert np.allclose(sp.z, [0.0, 1.0])
    assert np.abs(sp.p - np.array([-1.0, 1.0])).max() < 1e-12


def test_psi_outputs_lie_on_zero_level_and_match_spectra():
    rng = np.random.default_rng(3)
    for parts in ((2, 1), (2, 2), (3, 1)):
        lam = Partition(parts)
        x = random_poly_tuple(lam, rng)
        sp = psi(lam, x)
        assert l0_residual(sp.z, sp.p) < 1e-10
        ref = spectral_points(lam, sp.z, seed=7)
        assert min(np.abs(sp.p - r.p).max() for r in ref) < 1e-6


def test_psi_rejects_multiple_roots_and_n1():
    lam = Partition((2, 0))
    # W = (u-1)^2: e1 = 2, e2 = 1 -> f11 = -3, f12 = 3
    x = PolyTuple(lam, {(1, 1): -3.0, (1, 2): 3.0})
    with pytest.raises(ValueError):
        psi(lam, x)
    lam1 = Partition((1,))
    x1 = PolyTuple(lam1, {(1, 1): 0.5})
    with pytest.raises(ValueError):
        psi(lam1, x1)


def test_bivariate_identity_residual_small():
    lam = Partition((2, 0))
    x = PolyTuple(lam, {(1, 1): -1.5, (1, 2): 0.0})
    assert bivariate_identity_residual(lam, x, seed=1) < 1e-12
    rng = np.random.default_rng(4)
    for parts in ((2, 1), (2, 2), (3, 1), (2, 1, 1)):
        lam = Partition(parts)
        x = random_poly_tuple(lam, rng)
        assert bivariate_identity_residual(lam, x, seed=2) < 1e-8


def test_wronski_fiber_counts():
    rng = np.random.default_rng(5)
    for parts, expected in (((2, 0), 1), ((1, 1), 1), ((2, 1), 2), ((3, 1), 3)):
        lam = Partition(parts)
        z = sample_generic_z(lam.n, rng)
        sigma = elementary_symmetric(z)
        sols = wronski_fiber(lam, sigma, seed=8)
        assert len(sols) == expected
        for sol in sols:
            assert np.abs(wronski_map(lam, sol).w - sigma).max() < 1e-9


def test_wronski_fiber_row_pair_closed_form():
    lam = Partition((2, 0))
    sigma = np.array([0.8 - 0.2j, -0.5 + 0.9j])
    sols = wronski_fiber(lam, sigma, seed=9)
    assert len(sols) == 1
    v = sols[0].coeffs
    assert abs(v[(1, 1)] - (-1.5 * sigma[0])) < 1e-9
    assert abs(v[(1, 2)] - 3.0 * sigma[1]) < 1e-9


def test_quasi_exponential_map_one_function():
    x = QuasiExpTuple([0.7 + 0.1j], [2.0 - 0.5j])
    w = wronski_map_q(x)
    assert abs(w.w[0] - (-(2.0 - 0.5j))) < 1e-14
    assert abs(w.roots()[0] - (-(2.0 - 0.5j))) < 1e-12
    op = fundamental_operator_q(x)
    q1, c = 0.7 + 0.1j, 2.0 - 0.5j
    expected = np.array([[1.0, c], [-q1, -(1.0 + q1 * c)]])
    assert np.abs(op.P - expected).max() < 1e-14
    f = ExpPoly(q1, [c, 1.0])
    assert op.annihilation_residual(f) < 1e-14


def test_quasi_exponential_pair_wronskian_formula():
    q = np.array([0.2 - 0.3j, 1.5 + 0.4j])
    c = np.array([0.6 + 0.2j, -1.1 + 0.9j])
    x = QuasiExpTuple(q, c)
    w = wronski_map_q(x)
    # (u + c1)(u + c2) + (c1 - c2)/(q2 - q1)
    shift = (c[0] - c[1]) / (q[1] - q[0])
    rng = np.random.default_rng(6)
    for _ in range(5):
        u = complex(rng.standard_normal(), rng.standard_normal())
        expected = (u + c[0]) * (u + c[1]) + shift
        assert abs(w(u) - expected) < 1e-12


def test_psi_q_against_joint_spectrum():
    rng = np.random.default_rng(7)
    for n in (2, 3):
        q = sample_generic_z(n, rng, radius=1.5)
        x = QuasiExpTuple(q, rng.standard_normal(n) + 1j * rng.standard_normal(n))
        sp = psi_q(x)
        assert lq_residual(sp.z, sp.p, q) < 1e-8
        assert abs(np.sum(sp.p) - np.sum(q)) < 1e-10
        ref = generalized_spectrum(sp.z, q, seed=3)
        assert min(np.abs(sp.p - r.p).max() for r in ref) < 1e-6


def test_psi_q_operator_annihilates():
    rng = np.random.default_rng(8)
    n = 3
    q = sample_generic_z(n, rng, radius=1.5)
    x = QuasiExpTuple(q, rng.standard_normal(n) + 1j * rng.standard_normal(n))
    op = fundamental_operator_q(x)
    for f in x.functions():
        assert op.annihilation_residual(f) < 1e-12


def test_psi_q_rejects_n1_and_root_exponent_collision():
    with pytest.raises(ValueError):
        psi_q(QuasiExpTuple([0.5], [1.0]))
    # n = 2 with a Wronskian root placed on q_1: root -c is forced onto q_1
    q = np.array([1.0, 3.0])
    # choose shifts so one root equals q_1 = 1: (u+c1)(u+c2)+(c1-c2)/2 has
    # root 1 iff (1+c1)(1+c2) + (c1-c2)/2 = 0; take c1 = -1 - d, solve for c2
    d = 0.25
    c1 = -1.0 - d
    # (1+c1) = -d, so -d(1+c2) + (c1-c2)/2 = 0 gives c2 = (c1/2 - d)/(d + 1/2)
    c2 = (0.5 * c1 - d) / (0.5 + d)
    x = QuasiExpTuple(q, [c1, c2])
    w = wronski_map_q(x)
    assert min(abs(r - 1.0) for r in w.roots()) < 1e-10
    with pytest.raises(ValueError):
        psi_q(x)


def test_poly_tuple_json_round_trip():
    lam = Partition((2, 1))
    x = poly_tuple_from_vector(lam, [1.0 + 2.0j, -0.5j, 3.0])
    d = x.as_dict()
    assert d["lambda"] == [2, 1]
    assert d["coeffs"]["1,1"] == [1.0, 2.0]
    op = fundamental_operator(lam, x)
    dense = op.as_dense()
    assert len(dense) == 4 and len(dense[0]) == 4
