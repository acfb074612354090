import numpy as np
import pytest

from mixq.coherence import (
    DephasingSpec,
    cat_preparation,
    coherence_orders,
    coherence_spectrum,
    collective_dephasing,
    collective_rotation,
    mq_signal,
)
from mixq.core import DensityMatrix, Operator, PAULI, embed
from mixq.errors import ArgumentError
from mixq.states import basis_state, cat_state, random_density

from conftest import assert_valid_density


def total_z(n):
    return sum(embed(PAULI["z"], [k], n).data for k in range(n)) / 2


def test_orders_follow_total_spin_z():
    for n in (1, 2, 3):
        m = np.diag(total_z(n)).real
        np.testing.assert_array_equal(coherence_orders(n), np.subtract.outer(m, m))


def test_raising_product_sits_at_order_n():
    n = 3
    op = embed(np.kron(np.kron(Operator.raising().data, Operator.raising().data), Operator.raising().data), [0, 1, 2], n).data
    rows, cols = np.nonzero(op)
    assert set(coherence_orders(n)[rows, cols]) == {n}


def test_spectrum_examples():
    spec = coherence_spectrum(DensityMatrix(np.diag([0.1, 0.2, 0.3, 0.4])))
    assert spec.weights[0] == pytest.approx(0.3)
    assert all(w == 0 for p, w in spec.weights.items() if p)
    for n in (2, 3, 5):
        w = coherence_spectrum(DensityMatrix.from_pure(cat_state(n))).weights
        assert w[n] == pytest.approx(0.25) and w[-n] == pytest.approx(0.25)
        assert w[0] == pytest.approx(0.5)
        assert sum(w.values()) == pytest.approx(1)
    plus = DensityMatrix.from_pure(np.array([1, 1]) / np.sqrt(2))
    assert coherence_spectrum(plus).weights == pytest.approx({-1: 0.25, 0: 0.5, 1: 0.25})


@pytest.mark.parametrize("seed", range(8))
def test_spectrum_total_is_purity_and_symmetric(seed):
    n = 1 + seed
    rho = random_density(n, seed, rank=1 + seed % 3)
    spec = coherence_spectrum(rho)
    assert abs(spec.total - np.trace(rho.data @ rho.data).real) <= 1e-10
    assert abs(sum(spec.weights.values()) - spec.total) <= 1e-10
    for p in range(1, n + 1):
        assert spec.weights[p] == pytest.approx(spec.weights[-p], abs=1e-14)


@pytest.mark.parametrize("phi", [0.3, 1.7, np.pi])
def test_rotation_matches_matrix_exponential(phi):
    n = 3
    rho = random_density(n, 4)
    u = np.diag(np.exp(-1j * phi * np.diag(total_z(n)).real))
    expected = u @ rho.data @ u.conj().T
    np.testing.assert_allclose(collective_rotation(rho, phi).data, expected, atol=1e-14)


def test_rotation_examples():
    diag = DensityMatrix(np.diag([0.5, 0.25, 0.125, 0.125]))
    assert collective_rotation(diag, 1.234).allclose(diag, atol=0)
    rho = random_density(3, 8)
    assert collective_rotation(rho, 2 * np.pi).allclose(rho, atol=1e-13)
    for n in (2, 3, 4):
        cat = DensityMatrix.from_pure(cat_state(n))
        phi = 0.37
        out = collective_rotation(cat, phi).data
        assert out[0, -1] / cat.data[0, -1] == pytest.approx(np.exp(-1j * n * phi))


@pytest.mark.parametrize("seed", range(5))
def test_rotation_preserves_spectrum(seed):
    rho = random_density(4, seed)
    before = coherence_spectrum(rho).weights
    after = coherence_spectrum(collective_rotation(rho, 0.1 + seed)).weights
    for p in before:
        assert abs(before[p] - after[p]) <= 1e-12


def test_dephasing_examples():
    rho = random_density(3, 2)
    assert collective_dephasing(rho, DephasingSpec(0.0)).allclose(rho, atol=0)
    diag = DensityMatrix(np.diag([0.4, 0.3, 0.2, 0.1]))
    assert collective_dephasing(diag, DephasingSpec(2.0)).allclose(diag, atol=0)
    for n in (2, 3):
        sigma = 0.3
        cat = DensityMatrix.from_pure(cat_state(n))
        w = coherence_spectrum(collective_dephasing(cat, DephasingSpec(sigma))).weights
        assert w[n] / w[0] == pytest.approx(0.5 * np.exp(-(n**2) * sigma**2))
    with pytest.raises(ArgumentError):
        DephasingSpec(-0.1)


def test_dephasing_is_gaussian_average_of_rotations():
    rho = random_density(2, 6)
    sigma = 0.4
    # Gauss-Hermite quadrature of the rotation average
    x, w = np.polynomial.hermite_e.hermegauss(40)
    avg = sum(wi * collective_rotation(rho, sigma * xi).data for xi, wi in zip(x, w)) / w.sum()
    np.testing.assert_allclose(collective_dephasing(rho, DephasingSpec(sigma)).data, avg, atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_dephasing_never_increases_weights(seed):
    rho = random_density(3, 20 + seed)
    out = collective_dephasing(rho, DephasingSpec(0.2 * (seed + 1)))
    assert_valid_density(out)
    before, after = coherence_spectrum(rho).weights, coherence_spectrum(out).weights
    assert after[0] == before[0]
    assert all(after[p] <= before[p] + 1e-15 for p in before)


def test_cat_preparation():
    for n in (1, 2, 4):
        v = cat_preparation(n)
        assert v.is_unitary()
        np.testing.assert_allclose(v.data @ basis_state("0" * n), cat_state(n), atol=1e-15)


def test_mq_signal_closed_form_n2():
    eps = 0.6
    sig = mq_signal(2, eps, 64)
    expected = eps**2 / 2 * (1 + np.cos(2 * sig.phi)) - eps**2 / 4
    np.testing.assert_allclose(sig.signal, expected, atol=1e-14)
    nonzero = np.flatnonzero(sig.amplitudes > 1e-12)
    assert set(sig.orders[nonzero]) == {-2, 0, 2}
    assert sig.peak_order == 2


def test_mq_signal_single_spin():
    sig = mq_signal(1, 1.0, 16)
    assert sig.peak_order == 1
    assert sig.amplitudes[1] == pytest.approx(sig.amplitudes[-1])


@pytest.mark.parametrize("n", range(2, 9))
def test_mq_signal_peak_at_n(n):
    assert mq_signal(n, 0.5, 64).peak_order == n


def test_mq_signal_arguments():
    with pytest.raises(ArgumentError):
        mq_signal(2, 0.5, 48)
    with pytest.raises(ArgumentError):
        mq_signal(8, 0.5, 16)
