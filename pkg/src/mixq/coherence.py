"""Multiple-quantum coherence orders, collective z rotations and dephasing.

Basis state ``|b>`` has total spin-z number ``M_b = n/2 - popcount(b)``
(|0> counts +1/2). Element ``rho[a, b]`` has coherence order
``p = M_a - M_b``, so the product of raising operators I+^1 ... I+^n sits
at order +n.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import HADAMARD, DensityMatrix, Operator, check_cap, embed
from .dqc1 import controlled
from .errors import ArgumentError
from .states import basis_state, cat_state, pseudo_pure

_CNOT = controlled(Operator.pauli("x")).data


@lru_cache(maxsize=None)
def _orders(n: int) -> np.ndarray:
    pop = np.array([bin(b).count("1") for b in range(2**n)])
    out = pop[None, :] - pop[:, None]
    out.setflags(write=False)
    return out


def coherence_orders(n: int) -> np.ndarray:
    """Integer matrix of coherence orders p[a, b] for ``n`` spins."""
    return _orders(int(n))


@dataclass(frozen=True)
class CoherenceSpectrum:
    weights: dict
    total: float

    def as_dict(self) -> dict:
        return {"weights": {str(p): w for p, w in self.weights.items()}, "total": self.total}


def coherence_spectrum(rho: DensityMatrix) -> CoherenceSpectrum:
    """Squared-magnitude weight of every coherence order, p = -n..n."""
    n = rho.n_qubits
    sq = np.abs(rho.data) ** 2
    sums = np.bincount((_orders(n) + n).ravel(), weights=sq.ravel(), minlength=2 * n + 1)
    weights = {p: float(sums[p + n]) for p in range(-n, n + 1)}
    return CoherenceSpectrum(weights, float(sq.sum()))


def collective_rotation(rho: DensityMatrix, phi: float) -> DensityMatrix:
    """Conjugate by exp(-i phi sum_k sigma_z^k / 2): order p picks up exp(-i p phi)."""
    return DensityMatrix(rho.data * np.exp(-1j * phi * _orders(rho.n_qubits)))


@dataclass(frozen=True)
class DephasingSpec:
    sigma: float = 0.0

    def __post_init__(self):
        if not self.sigma >= 0:
            raise ArgumentError(f"dephasing sigma must be nonnegative, got {self.sigma}")


def collective_dephasing(rho: DensityMatrix, spec: DephasingSpec) -> DensityMatrix:
    """Average of collective rotations over a Gaussian angle with spread sigma."""
    damp = np.exp(-(_orders(rho.n_qubits) ** 2) * spec.sigma**2 / 2)
    return DensityMatrix(rho.data * damp)


def cat_preparation(n: int) -> Operator:
    """Hadamard on qubit 0 followed by CNOTs 0 -> k; maps |0...0> to the cat state."""
    check_cap(n)
    u = embed(HADAMARD, [0], n).data
    for k in range(1, n):
        u = embed(_CNOT, [0, k], n).data @ u
    return Operator(u)


@dataclass
class MQSignal:
    n: int
    phi: np.ndarray
    signal: np.ndarray
    orders: np.ndarray
    amplitudes: np.ndarray
    peak_order: int

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "peak_order": self.peak_order,
            "phi": self.phi.tolist(),
            "signal": self.signal.tolist(),
            "orders": self.orders.tolist(),
            "amplitudes": self.amplitudes.tolist(),
        }


def mq_signal(n: int, epsilon: float = 1.0, phi_samples: int = 64) -> MQSignal:
    """Encode/rotate/decode experiment on a pseudo-pure cat state.

    For each phase phi: prepare the pseudo-pure cat state, rotate it
    collectively by phi, undo the preparation unitary exactly, and record the
    overlap Tr[Delta0 rho] with the initial deviation Delta0 = rho0 - 1/2^n.
    The signal is (eps^2/2)(1 + cos(n phi)) - eps^2/2^n, so its Fourier
    spectrum peaks at orders +-n.
    """
    if phi_samples < 2 or phi_samples & (phi_samples - 1):
        raise ArgumentError(f"phi_samples must be a power of two, got {phi_samples}")
    if phi_samples <= 2 * n:
        raise ArgumentError(f"{phi_samples} samples alias coherence order {n}; need more than {2 * n}")
    check_cap(n)
    dim = 2**n
    v = cat_preparation(n).data
    rho0 = pseudo_pure(n, epsilon, basis_state("0" * n))
    delta0 = rho0.data - np.eye(dim) / dim
    prepared = pseudo_pure(n, epsilon, cat_state(n))
    phis = 2 * np.pi * np.arange(phi_samples) / phi_samples
    signal = np.empty(phi_samples)
    for i, phi in enumerate(phis):
        rotated = collective_rotation(prepared, phi).data
        decoded = v.conj().T @ rotated @ v
        signal[i] = np.real(np.sum(delta0 * decoded.T))
    amps = np.abs(np.fft.fft(signal)) / phi_samples
    orders = np.rint(np.fft.fftfreq(phi_samples, d=1 / phi_samples)).astype(int)
    positive = np.flatnonzero(orders > 0)
    peak = int(orders[positive[np.argmax(amps[positive])]])
    return MQSignal(n, phis, signal, orders, amps, peak)
