import math

import numpy as np
import pytest

from spectral_census.bounds import theorem_bound
from spectral_census.dn_gap import (SphereField, build_dn_kernel, chord_numerator_lower, dn_atomic_report,
                                    dn_lower_bound, fs_integral, fs_integral_bound, sphere_quadrature,
                                    verify_kc_identity)
from spectral_census.domains import BoxDomain, chi_hat_box
from spectral_census.errors import UsageError
from spectral_census.kernels import kappa
from spectral_census.measures import chord_measure
from spectral_census.oracle import count_below
from spectral_census.quadrature import make_quadrature

SQUARE = BoxDomain((1.0, 1.0))


def box_rule(n):
    return make_quadrature("box-product", lower=[0.0, 0.0], upper=[1.0, 1.0], n=n)


def test_dn_kernel_zero_diagonal_and_kappa(rng):
    k = build_dn_kernel(SQUARE, 3.0)
    q = sphere_quadrature(2, 3.0, 40)
    np.testing.assert_array_equal(k.diagonal(q.nodes), 0.0)
    i, j = rng.integers(0, 40, (2, 50))
    np.testing.assert_allclose(kappa(k, q.nodes[i], q.nodes[j]), -np.abs(k(q.nodes[i], q.nodes[j])), atol=1e-14)
    M = k.matrix(q.nodes)
    np.testing.assert_allclose(M, M.conj().T, atol=1e-13)


def test_dn_kernel_antipodal():
    k = build_dn_kernel(SQUARE, 1.0)
    xi = np.array([math.cos(0.3), math.sin(0.3)])
    assert k(xi, -xi) == pytest.approx(-4.0 * chi_hat_box(SQUARE, 2 * xi), abs=1e-15)


def test_kc_zero_field():
    q = sphere_quadrature(2, 3.0, 32)
    res = verify_kc_identity(SQUARE, 3.0, SphereField(q, np.zeros(32)), box_rule(32))
    assert res.lhs == 0.0 and res.rhs == 0.0


def test_kc_random_fields(rng):
    q = sphere_quadrature(2, 3.0, 32)
    for _ in range(3):
        u = SphereField(q, rng.normal(size=32) + 1j * rng.normal(size=32))
        res = verify_kc_identity(SQUARE, 3.0, u, box_rule(64))
        assert res.rel_err <= 1e-6 and not res.under_resolved


def test_kc_two_antipodal_nodes_with_vanishing_chi_hat():
    lam = math.pi
    nodes = np.array([[lam, 0.0], [-lam, 0.0]])
    q = make_quadrature("circle-uniform", radius=lam, n=2)
    np.testing.assert_allclose(np.sort(q.nodes, axis=0), np.sort(nodes, axis=0), atol=1e-15)
    res = verify_kc_identity(SQUARE, lam, SphereField(q, [1.0, 1j]), box_rule(64))
    assert abs(res.rhs) < 1e-14
    assert abs(res.lhs) < 1e-12


def test_kc_under_resolved_flag(rng):
    q = sphere_quadrature(2, 20.0, 16)
    res = verify_kc_identity(SQUARE, 20.0, SphereField(q, rng.normal(size=16)), box_rule(8))
    assert res.under_resolved


def test_chord_numerator_bound():
    lam = 6.0
    k = build_dn_kernel(SQUARE, lam)
    for r in (1.0, 3.0, 7.5):
        mu = chord_measure(lam, r, 2, 512)
        num = theorem_bound(k, mu, 0.0).numerator
        assert num >= chord_numerator_lower(SQUARE, r, 1024) - 1e-10


def test_fs_integral_holds_at_4_and_16():
    for lam in (4.0, 16.0):
        assert fs_integral(SQUARE, lam, 256) <= fs_integral_bound(SQUARE, lam)


def test_nystrom_count_at_least_one():
    for lam in (2.0, 5.0, 9.0):
        q = sphere_quadrature(2, lam, 64)
        assert count_below(build_dn_kernel(SQUARE, lam), q, 0.0).count_below_t >= 1


def test_dn_lower_bound_example():
    reps = [dn_lower_bound(SQUARE, 5.0, 1.0, n) for n in (128, 256)]
    assert reps[0].nystrom_count == reps[1].nystrom_count
    rep = reps[1]
    assert rep.nystrom_count >= math.ceil(rep.raw_bound)
    assert rep.dn_lower == rep.nystrom_count
    d = rep.to_dict()
    assert set(d) >= {"box", "lambda", "r", "c_t", "raw_bound", "fs_bound", "nystrom_count", "dn_lower"}
    with pytest.raises(UsageError):
        dn_lower_bound(SQUARE, 5.0, 10.0, 64)


@pytest.mark.parametrize("lam", [4.0, 16.0])
def test_theorem_bound_vs_closed_form(lam):
    for j in range(1, 9):
        rep = dn_lower_bound(SQUARE, lam, 2 * lam * j / 9, 256)
        assert rep.raw_bound >= rep.fs_bound * 0.95


def test_lambda_sweep_shape_column():
    rows = [dn_lower_bound(SQUARE, lam, 1.0, 128).csv_row() for lam in (4.0, 8.0, 16.0)]
    from spectral_census.domains import boundary_layer_volume
    for row in rows:
        assert row[-1] == pytest.approx(row[0] ** -2 / boundary_layer_volume(SQUARE, row[0]))


def test_atomic_report_degenerate_pair():
    lam = math.pi
    rep = dn_atomic_report(SQUARE, lam, [[lam, 0.0], [-lam, 0.0]], c3_asserted=True)
    assert math.isinf(rep.bound.c_t) and rep.dim_ker == 2 and rep.dn_lower >= 2


def test_sphere_quadrature_3d():
    q = sphere_quadrature(3, 2.0, 8)
    assert q.total == pytest.approx(1.0) and q.dim == 3
    with pytest.raises(UsageError):
        sphere_quadrature(4, 1.0, 8)
