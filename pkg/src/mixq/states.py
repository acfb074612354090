"""Constructors for the state families used throughout the package.

Bell basis order is fixed as ``(psi_plus, phi_plus, phi_minus, psi_minus)``
with

    psi_plus  = (|00> + |11>)/sqrt2
    phi_plus  = (|01> + |10>)/sqrt2
    phi_minus = (|01> - |10>)/sqrt2
    psi_minus = (|00> - |11>)/sqrt2

Note that ``psi_plus`` here is the state often written Phi+ elsewhere.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    Bipartition,
    DensityMatrix,
    Operator,
    PAULI,
    check_cap,
    embed,
    partial_trace,
)
from .errors import ArgumentError

NORM_TOL = 1e-10
DEFAULT_POLARIZATION = 1e-5

_S = 1 / np.sqrt(2)
BELL_LABELS = ("psi_plus", "phi_plus", "phi_minus", "psi_minus")
BELL_VECTORS = np.array(
    [
        [_S, 0, 0, _S],
        [0, _S, _S, 0],
        [0, _S, -_S, 0],
        [_S, 0, 0, -_S],
    ],
    dtype=np.complex128,
)
BELL_VECTORS.setflags(write=False)


def basis_state(bits: str) -> np.ndarray:
    """Computational basis vector from a bit string, qubit 0 first."""
    if not bits or set(bits) - {"0", "1"}:
        raise ArgumentError(f"invalid bit string {bits!r}")
    psi = np.zeros(2 ** len(bits), dtype=np.complex128)
    psi[int(bits, 2)] = 1
    return psi


def _normalized(psi, n_qubits: int | None = None) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128).ravel()
    if n_qubits is not None and psi.size != 2**n_qubits:
        raise ArgumentError(f"state vector of length {psi.size} does not match {n_qubits} qubits")
    if abs(np.linalg.norm(psi) - 1) > NORM_TOL:
        raise ArgumentError(f"state vector is not normalized (norm {np.linalg.norm(psi):.12g})")
    return psi


def _check_epsilon(epsilon: float, lo: float = 0.0, hi: float = 1.0) -> float:
    epsilon = float(epsilon)
    if not lo <= epsilon <= hi:
        raise ArgumentError(f"epsilon={epsilon} outside [{lo}, {hi}]")
    return epsilon


@dataclass(frozen=True, eq=False)
class ThermalSpec:
    h: Operator
    beta: float
    n_qubits: int

    def __post_init__(self):
        if not isinstance(self.h, Operator):
            object.__setattr__(self, "h", Operator(self.h))
        if self.h.dim != 2**self.n_qubits:
            raise ArgumentError(
                f"Hamiltonian dimension {self.h.dim} does not match {self.n_qubits} qubits"
            )
        if not self.h.is_hermitian():
            raise ArgumentError("Hamiltonian must be Hermitian")
        if not self.beta >= 0:
            raise ArgumentError(f"beta must be nonnegative, got {self.beta}")
        if not np.isfinite(self.beta * np.linalg.norm(self.h.data, 2)):
            raise ArgumentError("beta * ||H|| must be finite")


def zeeman_hamiltonian(n_qubits: int, frequencies: Sequence[float] | None = None) -> Operator:
    """Diagonal H = sum_k w_k sigma_z^k / 2.

    Default frequencies are ``1 + 0.1 k`` so that every spin is distinguishable.
    """
    if frequencies is None:
        frequencies = [1 + 0.1 * k for k in range(n_qubits)]
    if len(frequencies) != n_qubits:
        raise ArgumentError("need one frequency per qubit")
    h = sum(w / 2 * embed(PAULI["z"], [k], n_qubits).data for k, w in enumerate(frequencies))
    return Operator(h, label="zeeman")


def thermal_state(spec: ThermalSpec, first_order: bool = False) -> DensityMatrix:
    """Gibbs state exp(-beta H)/Z.

    With ``first_order`` the high-temperature form (1 - beta H)/Tr(1 - beta H)
    is returned instead; it is only positive while beta * max eig(H) <= 1.
    """
    h = spec.h.data
    check_cap(spec.n_qubits)
    if first_order:
        m = np.eye(h.shape[0]) - spec.beta * h
        return DensityMatrix(m / np.trace(m).real)
    vals, vecs = np.linalg.eigh((h + h.conj().T) / 2)
    w = np.exp(-spec.beta * (vals - vals.min()))
    w /= w.sum()
    return DensityMatrix((vecs * w) @ vecs.conj().T)


def werner(epsilon: float) -> DensityMatrix:
    """(1-eps)/4 I + eps |psi_plus><psi_plus|."""
    epsilon = _check_epsilon(epsilon)
    return pseudo_pure(2, epsilon, BELL_VECTORS[0])


def pseudo_pure(n: int, epsilon: float, psi) -> DensityMatrix:
    """(1-eps)/2^n I + eps |psi><psi|."""
    epsilon = _check_epsilon(epsilon)
    check_cap(n)
    psi = _normalized(psi, n)
    dim = 2**n
    mat = (1 - epsilon) / dim * np.eye(dim) + epsilon * np.outer(psi, psi.conj())
    return DensityMatrix(mat)


def cat_state(n: int) -> np.ndarray:
    """(|0...0> + |1...1>)/sqrt2 as a state vector."""
    if n < 1:
        raise ArgumentError("cat state needs at least one qubit")
    check_cap(n)
    psi = np.zeros(2**n, dtype=np.complex128)
    psi[0] = psi[-1] = _S
    return psi


def deviation_state(n: int, epsilon: float, sign: int = -1) -> DensityMatrix:
    """(1 + sign * eps * sigma_z on qubit 0)/2^n.

    ``sign=-1`` (the default) gives 1 - eps sigma_z^1; ``sign=+1`` the
    conventional thermal sign.
    """
    epsilon = _check_epsilon(epsilon, -1.0, 1.0)
    if sign not in (-1, 1):
        raise ArgumentError("sign must be +1 or -1")
    check_cap(n)
    diag = np.ones(2**n)
    diag[: 2 ** (n - 1)] += sign * epsilon
    diag[2 ** (n - 1):] -= sign * epsilon
    return DensityMatrix(np.diag(diag / 2**n))


def bell_mixture(weights: Sequence[float]) -> DensityMatrix:
    """sum_k w_k |Bell_k><Bell_k| in the fixed Bell order."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (4,) or np.any(w < 0) or abs(w.sum() - 1) > 1e-10:
        raise ArgumentError("bell_mixture needs 4 nonnegative weights summing to 1")
    mat = np.einsum("k,ki,kj->ij", w, BELL_VECTORS, BELL_VECTORS.conj())
    return DensityMatrix(mat)


def werner_bell_weights(epsilon: float) -> np.ndarray:
    epsilon = _check_epsilon(epsilon)
    return np.array([(1 + 3 * epsilon) / 4] + [(1 - epsilon) / 4] * 3)


@dataclass(frozen=True, eq=False)
class SeparableDecomposition:
    """Convex combination sum_i a_i rho1_i (x) rho2_i."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((float(a), r1, r2) for a, r1, r2 in self.terms)
        if not terms:
            raise ArgumentError("decomposition needs at least one term")
        weights = np.array([a for a, _, _ in terms])
        if np.any(weights < 0) or abs(weights.sum() - 1) > 1e-10:
            raise ArgumentError("decomposition weights must be nonnegative and sum to 1")
        for _, r1, r2 in terms:
            if not isinstance(r1, DensityMatrix) or not isinstance(r2, DensityMatrix):
                raise ArgumentError("decomposition factors must be DensityMatrix instances")
        object.__setattr__(self, "terms", terms)

    def assemble(self) -> np.ndarray:
        dims = {(r1.dim, r2.dim) for _, r1, r2 in self.terms}
        if len(dims) != 1:
            raise ArgumentError(f"inconsistent factor dimensions {sorted(dims)}")
        return sum(a * np.kron(r1.data, r2.data) for a, r1, r2 in self.terms)


def werner_separable_decomposition(epsilon: float) -> SeparableDecomposition:
    """Explicit product-state decomposition of werner(eps) for eps <= 1/3.

    The six single-qubit Pauli eigenstates form a 2-design, so averaging
    |v><v| (x) |v*><v*| over them gives werner(1/3); the rest of the weight
    goes on I/2 (x) I/2.
    """
    epsilon = _check_epsilon(epsilon, 0.0, 1 / 3)
    s = _S
    vecs = [(1, 0), (0, 1), (s, s), (s, -s), (s, 1j * s), (s, -1j * s)]
    terms = [
        (epsilon / 2, DensityMatrix.from_pure(v), DensityMatrix.from_pure(np.conj(v)))
        for v in vecs
    ]
    half = DensityMatrix.maximally_mixed(1)
    terms.append((1 - 3 * epsilon, half, half))
    return SeparableDecomposition(terms)


def verify_separable_decomposition(d: SeparableDecomposition, rho: DensityMatrix) -> float:
    """Max elementwise deviation between the decomposition and ``rho``.

    A residual of at most 1e-10 certifies ``rho`` as separable.
    """
    mixed = d.assemble()
    if mixed.shape != rho.data.shape:
        raise ArgumentError(
            f"decomposition dimension {mixed.shape[0]} does not match state dimension {rho.dim}"
        )
    return float(np.max(np.abs(mixed - rho.data)))


def is_product(psi, cut: Bipartition) -> bool:
    """True iff the pure state ``psi`` has Schmidt rank one across ``cut``."""
    psi = _normalized(psi, cut.n_qubits)
    reduced = partial_trace(DensityMatrix.from_pure(psi), cut.side_a)
    return reduced.purity() >= 1 - 1e-10


def random_pure(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return psi / np.linalg.norm(psi)


def random_density(n: int, seed: int, rank: int | None = None) -> DensityMatrix:
    """Random state from the induced (Ginibre) measure, full rank by default."""
    check_cap(n)
    rng = np.random.default_rng(seed)
    dim = 2**n
    g = rng.normal(size=(dim, rank or dim)) + 1j * rng.normal(size=(dim, rank or dim))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return DensityMatrix(m / np.trace(m).real)
