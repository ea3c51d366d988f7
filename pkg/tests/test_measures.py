import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spectral_census.errors import UsageError
from spectral_census.kernels import KernelSpec, constant_kernel, difference_kernel, HFunction, kappa
from spectral_census.measures import (AtomicMeasure, SymmetricAtomicMeasure, check_c2, chord_measure,
                                      make_symmetric, marginal, shift_measure, symmetrize)


def _atoms(mu):
    return sorted((tuple(x), tuple(y), w) for x, y, w in zip(mu.xi.tolist(), mu.eta.tolist(), mu.weights.tolist()))


def test_make_symmetric_examples():
    mu = make_symmetric([((0.0, 1.0), 1.0)])
    assert _atoms(mu) == [((0.0,), (1.0,), 0.5), ((1.0,), (0.0,), 0.5)]
    assert mu.mass == 1.0
    mu = make_symmetric([((2.0, 2.0), 1.0)])
    assert _atoms(mu) == [((2.0,), (2.0,), 1.0)]
    assert len(make_symmetric([])) == 0
    with pytest.raises(UsageError):
        make_symmetric([((0.0, 1.0), 0.0)])


def test_rejects_asymmetric():
    with pytest.raises(UsageError):
        SymmetricAtomicMeasure([[0.0]], [[1.0]], [1.0])


def test_marginal_examples():
    m = marginal(make_symmetric([((0.0, 1.0), 1.0)]))
    assert sorted(zip(m.points[:, 0].tolist(), m.weights.tolist())) == [(0.0, 0.5), (1.0, 0.5)]
    m = marginal(make_symmetric([((3.0, 3.0), 1.0)]))
    assert m.points.tolist() == [[3.0]] and m.weights.tolist() == [1.0]


pairs = st.lists(st.tuples(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.01, 5)), max_size=12)


@given(pairs)
def test_symmetrize_swap_invariant_and_mass(ps):
    mu = make_symmetric([((a, b), w) for a, b, w in ps])
    swapped = sorted((y, x, w) for x, y, w in _atoms(mu))
    assert swapped == _atoms(mu)
    assert math.isclose(marginal(mu).mass, mu.mass, rel_tol=1e-15, abs_tol=0)
    assert math.isclose(mu.mass, math.fsum(w for *_, w in ps), rel_tol=1e-13, abs_tol=1e-300)


def test_shift_measure_examples():
    delta = AtomicMeasure(np.zeros((1, 1)), np.ones(1))
    mu = shift_measure(delta, [1.0])
    assert _atoms(mu) == [((0.0,), (1.0,), 1.0), ((1.0,), (0.0,), 1.0)]
    assert mu.mass == 2.0
    m = marginal(mu).merged()
    assert m.points[:, 0].tolist() == [0.0, 1.0] and m.weights.tolist() == [1.0, 1.0]
    mu = shift_measure(AtomicMeasure([[0.0], [0.5]], [0.5, 0.5]), [1.0])
    assert len(mu) == 4 and np.all(mu.weights == 0.5)
    with pytest.raises(UsageError):
        shift_measure(delta, [0.0])
    with pytest.raises(UsageError):
        shift_measure(AtomicMeasure([[0.0]], [0.9]), [1.0])


def test_shift_measure_numerator(rng):
    h = HFunction.from_dict({"name": "cos", "dim": 1, "offset": -0.5})
    k = difference_kernel(h)
    base = AtomicMeasure(rng.normal(size=(5, 1)), np.full(5, 0.2))
    for theta in (2.5, 3.0, math.pi):
        mu = shift_measure(base, [theta])
        for t in (0.0, -0.1):
            num = math.fsum(mu.weights * np.maximum(t - kappa(k, mu.xi, mu.eta), 0))
            expect = 2 * max(abs(h([theta])) - h.at_zero() + t, 0)
            assert num == pytest.approx(expect, abs=1e-12)


def test_chord_measure_d2_square():
    mu = chord_measure(1.0, math.sqrt(2.0), 2, 4)
    cos = np.sum(mu.xi * mu.eta, axis=1)
    np.testing.assert_allclose(cos, 0.0, atol=1e-14)
    m = marginal(mu).merged()
    assert len(m) == 4
    np.testing.assert_allclose(m.weights, 0.25, atol=1e-15)


@pytest.mark.parametrize("lam,r,n", [(1.0, 0.3, 8), (5.0, 7.0, 33), (2.0, 1.0, 64)])
def test_chord_measure_d2_lengths(lam, r, n):
    mu = chord_measure(lam, r, 2, n)
    np.testing.assert_allclose(np.linalg.norm(mu.xi - mu.eta, axis=1), r, atol=1e-10)
    assert mu.mass == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("lam,r,n", [(1.0, 0.3, 8), (5.0, 7.0, 33), (2.0, 1.0, 64)])
def test_chord_measure_d2_marginal_uniform(lam, r, n):
    # a mixture of rotated equispaced grids: every Fourier moment below n vanishes
    m = marginal(chord_measure(lam, r, 2, n))
    phi = np.arctan2(m.points[:, 1], m.points[:, 0])
    for j in range(1, n):
        assert abs(np.sum(m.weights * np.exp(1j * j * phi))) < 1e-13


def test_chord_measure_d3():
    mu = chord_measure(1.0, 1.0, 3, 16)
    assert marginal(mu).mass == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(np.linalg.norm(mu.xi - mu.eta, axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose(np.linalg.norm(mu.eta, axis=1), 1.0, atol=1e-12)


def test_chord_measure_d3_marginal_approaches_uniform():
    # the second moment of a coordinate is 1/3 under the uniform measure
    errs = []
    for n in (8, 32):
        m = marginal(chord_measure(1.0, 0.8, 3, n))
        errs.append(abs(np.sum(m.weights * m.points[:, 2] ** 2) - 1.0 / 3.0))
    assert errs[1] < errs[0] / 2


def test_chord_measure_errors():
    with pytest.raises(UsageError):
        chord_measure(1.0, 2.0, 2, 8)
    with pytest.raises(UsageError):
        chord_measure(1.0, 1.0, 4, 8)


def test_check_c2():
    mu = make_symmetric([((0.0, 1.0), 1.0), ((0.5, 0.5), 2.0)])
    assert check_c2(mu, constant_kernel(-1.0), 0.0)
    ident = KernelSpec(1, lambda x, y: np.all(x == y, axis=-1).astype(float), True, "identity-like")
    assert not check_c2(mu, ident, 0.0)
    assert not check_c2(make_symmetric([]), constant_kernel(-1.0), 0.0)


def test_records_round_trip():
    mu = symmetrize(np.array([[0.0, 1.0]]), np.array([[2.0, -1.0]]), np.array([3.0]), "r")
    back = SymmetricAtomicMeasure.from_records(mu.to_records())
    assert _atoms(back) == _atoms(mu)


def test_scaled():
    mu = make_symmetric([((0.0, 1.0), 1.0)])
    assert mu.scaled(3.0).mass == pytest.approx(3.0)
    with pytest.raises(UsageError):
        mu.scaled(0.0)
