import numpy as np
import pytest

from conftest import custom_kernel, two_atom_kernel
from spectral_census.errors import AdmissibilityError, UsageError
from spectral_census.kernels import builtin_kernel, constant_kernel, kappa
from spectral_census.measures import make_symmetric
from spectral_census.proof_trace import (Configuration, assemble, check_configuration, hs_off_closed_form,
                                         inertia_count, inertia_count_ldl, mc_average_check, sample_configuration)


def test_assemble_n1_constant_kernel():
    pm = assemble(constant_kernel(-1.0), Configuration([[0.2]], [[0.7]]), 0.0)
    np.testing.assert_array_equal(pm.k_off, 0.0)
    np.testing.assert_allclose(np.diag(pm.lambda_diag), 2 ** -0.5)
    np.testing.assert_allclose(np.linalg.eigvalsh(pm.k_diag), [-1.0, 0.0], atol=1e-15)
    np.testing.assert_array_equal(pm.k2n, pm.k2n.conj().T)


def test_assemble_invariants(rng, mexican_hat):
    cfg = Configuration(rng.uniform(-3, 3, (4, 1)), rng.uniform(-3, 3, (4, 1)))
    t = float(np.max(kappa(mexican_hat, cfg.xi, cfg.eta))) + 0.01
    t = min(t, 0.0)
    pm = assemble(mexican_hat, cfg, t)
    L = pm.lambda_diag
    np.testing.assert_allclose(pm.k_tilde, L @ (pm.k2n - t * np.eye(8)) @ L, atol=1e-13)
    np.testing.assert_array_equal(pm.k_tilde, pm.k_diag + pm.k_off)
    for j in range(4):
        np.testing.assert_array_equal(pm.k_off[2 * j:2 * j + 2, 2 * j:2 * j + 2], 0.0)
        block = pm.k_diag[2 * j:2 * j + 2, 2 * j:2 * j + 2]
        assert np.linalg.eigvalsh(block)[0] == pytest.approx(-1.0, abs=1e-11)


def test_assemble_rejects_inadmissible():
    with pytest.raises(UsageError):
        assemble(constant_kernel(-1.0), Configuration([[0.0]], [[1.0]]), -3.0)


def test_inertia_count_examples():
    A = np.diag([-2.0, -1.0, 0.0, 3.0])
    assert inertia_count(A, 0.0, 0.0) == 2
    assert inertia_count(A, -1.0, 0.0) == 1
    assert inertia_count_ldl(A, 0.0) == 2
    with pytest.raises(UsageError):
        inertia_count(np.array([[0.0, 1.0], [0.5, 0.0]]), 0.0)


def test_inertia_two_routes(rng):
    for _ in range(100):
        A = rng.normal(size=(20, 20)) + 1j * rng.normal(size=(20, 20))
        A = (A + A.conj().T) / 2
        t = rng.normal()
        assert inertia_count(A, t) == inertia_count_ldl(A, t)


def test_hs_off_closed_form_examples(rng):
    k = constant_kernel(-1.0)
    assert hs_off_closed_form(k, Configuration([[0.1]], [[0.4]]), 0.0) == 0.0
    cfg = Configuration([[0.1], [0.2]], [[0.3], [0.9]])
    assert hs_off_closed_form(k, cfg, 0.0) == pytest.approx(2.0, abs=1e-14)
    mh = builtin_kernel("mexican-hat", dim=1)
    cfg = Configuration(rng.uniform(-2, 2, (5, 1)), rng.uniform(-2, 2, (5, 1)))
    pm = assemble(mh, cfg, 0.0)
    assert np.sum(np.abs(pm.k_off) ** 2) == pytest.approx(hs_off_closed_form(mh, cfg, 0.0), rel=1e-11)


def test_mc_two_atom_target():
    k = two_atom_kernel()
    mu = make_symmetric([((0.0, 1.0), 1.0)])
    res = mc_average_check(k, mu, 0.0, 2, 10000, 7)
    assert res.target == pytest.approx(4.0)
    assert abs(res.empirical_mean - res.target) <= 3 * res.stderr + 1e-12
    res1 = mc_average_check(k, mu, 0.0, 1, 200, 7)
    assert res1.target == 0.0 and res1.empirical_mean == 0.0


def test_mc_stderr_scaling(mexican_hat, rng):
    xi = rng.uniform(-3, 3, (12, 1))
    eta = xi + rng.uniform(1.5, 2.5, (12, 1))
    mu = make_symmetric([((a[0], b[0]), 1.0) for a, b in zip(xi, eta)])
    a = mc_average_check(mexican_hat, mu, 0.0, 3, 20000, 1)
    b = mc_average_check(mexican_hat, mu, 0.0, 3, 40000, 2)
    assert 1.2 <= a.stderr / b.stderr <= 1.7


def test_mc_preconditions():
    k = two_atom_kernel()
    mu = make_symmetric([((0.0, 1.0), 1.0)])
    with pytest.raises(UsageError):
        mc_average_check(k, mu, 0.0, 2, 50, 0)
    with pytest.raises(AdmissibilityError):
        mc_average_check(k, mu, -3.0, 2, 200, 0)


def test_mc_deterministic():
    k = custom_kernel()
    mu = make_symmetric([((0.0, 1.0), 1.0), ((0.5, -1.0), 2.0)])
    assert mc_average_check(k, mu, 0.0, 3, 500, 11) == mc_average_check(k, mu, 0.0, 3, 500, 11)


@pytest.mark.parametrize("k", [builtin_kernel("mexican-hat", dim=1), custom_kernel(),
                               builtin_kernel("difference", h={"name": "mexican-hat", "dim": 1,
                                                               "modulation": [0.9]})],
                         ids=lambda k: k.label)
def test_check_configuration_all_pass(k, rng):
    pool = rng.uniform(-3, 3, (40, 2, 1))
    mu = make_symmetric([((p[0, 0], p[1, 0]), 1.0) for p in pool])
    for n in (1, 2, 4, 6):
        cfg = sample_configuration(k, mu, 0.0, n, rng)
        recs = check_configuration(k, cfg, 0.0)
        assert {r["check"] for r in recs} >= {"inertia_congruence", "block_eigenvalue_minus_one",
                                              "off_diagonal_hs_identity", "combined_count"}
        assert all(r["pass"] for r in recs), recs
