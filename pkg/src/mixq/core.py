"""Dense density matrices, operators and the linear algebra built on them.

Qubit 0 is the most significant tensor factor everywhere: basis index
``b`` of an ``n``-qubit register has qubit ``k`` in state ``(b >> (n-1-k)) & 1``.
Entropies are in bits.
"""
from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Iterator, Union

import numpy as np

from .errors import ArgumentError, ResourceError

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
ENTROPY_FLOOR = 1e-12
DEFAULT_MAX_QUBITS = 12

_max_qubits: contextvars.ContextVar[int] = contextvars.ContextVar(
    "max_qubits", default=DEFAULT_MAX_QUBITS
)


def max_qubits() -> int:
    """Current dense-size cap (number of qubits)."""
    return _max_qubits.get()


@contextlib.contextmanager
def qubit_cap(n: int) -> Iterator[int]:
    """Temporarily override the dense-size cap within the current context."""
    if int(n) < 1:
        raise ArgumentError(f"qubit cap must be positive, got {n}")
    token = _max_qubits.set(int(n))
    try:
        yield int(n)
    finally:
        _max_qubits.reset(token)


def check_cap(n_qubits: int) -> None:
    cap = max_qubits()
    if n_qubits > cap:
        raise ResourceError(
            f"{n_qubits} qubits exceeds the dense cap of {cap} qubits"
        )


def qubits_for_dim(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise ArgumentError(f"dimension {dim} is not a power of two >= 2")
    return n


def _square(data, what: str) -> np.ndarray:
    mat = np.array(data, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ArgumentError(f"{what} must be a square matrix, got shape {mat.shape}")
    return mat


def hermiticity_error(mat: np.ndarray) -> float:
    return float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0


def density_violations(mat: np.ndarray) -> list[str]:
    """Names of the density-matrix invariants that ``mat`` violates."""
    bad = []
    if hermiticity_error(mat) > HERMITIAN_TOL:
        bad.append("Hermitian")
    if abs(np.trace(mat) - 1.0) > TRACE_TOL:
        bad.append("unit trace")
    if not bad:
        herm = (mat + mat.conj().T) / 2
        if np.linalg.eigvalsh(herm)[0] < -PSD_TOL:
            bad.append("positive semidefinite")
    return bad


@dataclass(frozen=True, eq=False)
class Operator:
    """A complex square matrix on a register of qubits.

    Unitarity and Hermiticity are checked on demand rather than stored.
    """

    data: np.ndarray
    label: str = ""

    def __post_init__(self):
        mat = _square(self.data, "operator")
        qubits_for_dim(mat.shape[0])
        mat.setflags(write=False)
        object.__setattr__(self, "data", mat)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def n_qubits(self) -> int:
        return qubits_for_dim(self.dim)

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return hermiticity_error(self.data) <= tol

    def is_unitary(self, tol: float = HERMITIAN_TOL) -> bool:
        resid = self.data @ self.data.conj().T - np.eye(self.dim)
        return float(np.max(np.abs(resid))) <= tol

    def adjoint(self) -> "Operator":
        return Operator(self.data.conj().T, label=f"{self.label}†" if self.label else "")

    def __matmul__(self, other: "Operator") -> "Operator":
        return Operator(self.data @ other.data)

    @classmethod
    def identity(cls, n_qubits: int) -> "Operator":
        return cls(np.eye(2**n_qubits), label="I")

    @classmethod
    def pauli(cls, axis: str) -> "Operator":
        return cls(PAULI[axis.lower()], label=f"sigma_{axis.lower()}")

    @classmethod
    def raising(cls) -> "Operator":
        """Single-spin I+ = (sigma_x + i sigma_y)/2 = |0><1|."""
        return cls((PAULI["x"] + 1j * PAULI["y"]) / 2, label="I+")


PAULI = {
    "i": np.eye(2, dtype=np.complex128),
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
for _m in (*PAULI.values(), HADAMARD):
    _m.setflags(write=False)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix on ``n_qubits``.

    Construction validates all three invariants (tolerance 1e-10) and the
    dense cap; the stored array is read-only.
    """

    data: np.ndarray
    n_qubits: int = field(init=False)

    def __post_init__(self):
        mat = _square(self.data, "density matrix")
        n = qubits_for_dim(mat.shape[0])
        check_cap(n)
        bad = density_violations(mat)
        if bad:
            raise ArgumentError(
                "not a valid density matrix: violates " + ", ".join(bad)
            )
        mat.setflags(write=False)
        object.__setattr__(self, "data", mat)
        object.__setattr__(self, "n_qubits", n)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @classmethod
    def from_pure(cls, psi) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=np.complex128).ravel()
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def maximally_mixed(cls, n_qubits: int) -> "DensityMatrix":
        check_cap(n_qubits)
        return cls(np.eye(2**n_qubits) / 2**n_qubits)

    def purity(self) -> float:
        return float(np.real(np.vdot(self.data, self.data)))

    def allclose(self, other, atol: float = 1e-12) -> bool:
        other = other.data if isinstance(other, (DensityMatrix, Operator)) else other
        return bool(np.allclose(self.data, other, rtol=0, atol=atol))


Matrixlike = Union[DensityMatrix, Operator, np.ndarray]


def _raw(m: Matrixlike) -> np.ndarray:
    if isinstance(m, (DensityMatrix, Operator)):
        return m.data
    return np.asarray(m, dtype=np.complex128)


@dataclass(frozen=True)
class Bipartition:
    """Split of qubits ``0..n-1`` into two nonempty complementary sides."""

    side_a: frozenset
    side_b: frozenset

    def __post_init__(self):
        a, b = frozenset(self.side_a), frozenset(self.side_b)
        if not a or not b:
            raise ArgumentError("both sides of a bipartition must be nonempty")
        if a & b:
            raise ArgumentError(f"bipartition sides overlap on {sorted(a & b)}")
        if a | b != frozenset(range(len(a) + len(b))):
            raise ArgumentError("bipartition must cover qubits 0..n-1 exactly")
        object.__setattr__(self, "side_a", a)
        object.__setattr__(self, "side_b", b)

    @classmethod
    def of(cls, side_a: Iterable[int], n_qubits: int) -> "Bipartition":
        a = frozenset(int(q) for q in side_a)
        if any(q < 0 or q >= n_qubits for q in a):
            raise ArgumentError(f"qubit indices {sorted(a)} out of range for {n_qubits} qubits")
        return cls(a, frozenset(range(n_qubits)) - a)

    @property
    def n_qubits(self) -> int:
        return len(self.side_a) + len(self.side_b)

    def swapped(self) -> "Bipartition":
        return Bipartition(self.side_b, self.side_a)

    def __str__(self):
        return f"{sorted(self.side_a)}|{sorted(self.side_b)}"


def tensor(*factors: Matrixlike):
    """Kronecker product; returns a DensityMatrix when every factor is one."""
    if not factors:
        raise ArgumentError("tensor needs at least one factor")
    out = reduce(np.kron, (_raw(f) for f in factors))
    if all(isinstance(f, DensityMatrix) for f in factors):
        return DensityMatrix(out)
    return Operator(out)


def embed(op: Matrixlike, targets: Iterable[int], n_qubits: int) -> Operator:
    """Lift ``op`` acting on ``targets`` (in that order) to the full register."""
    targets = [int(t) for t in targets]
    mat = _raw(op)
    k = len(targets)
    if mat.shape != (2**k, 2**k):
        raise ArgumentError(f"operator shape {mat.shape} does not match {k} target qubits")
    if len(set(targets)) != k or any(t < 0 or t >= n_qubits for t in targets):
        raise ArgumentError(f"invalid targets {targets} for {n_qubits} qubits")
    rest = [q for q in range(n_qubits) if q not in targets]
    full = np.kron(mat, np.eye(2 ** len(rest)))
    order = targets + rest
    inv = list(np.argsort(order))
    t = full.reshape([2] * (2 * n_qubits))
    t = t.transpose(inv + [n_qubits + i for i in inv])
    return Operator(t.reshape(2**n_qubits, 2**n_qubits))


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the qubits in ``keep`` (ascending order)."""
    mat = _raw(rho)
    n = qubits_for_dim(mat.shape[0])
    keep = sorted(set(int(q) for q in keep))
    if not keep:
        raise ArgumentError("partial_trace needs a nonempty keep set")
    if keep[0] < 0 or keep[-1] >= n:
        raise ArgumentError(f"keep set {keep} out of range for {n} qubits")
    gone = [q for q in range(n) if q not in keep]
    dk, dg = 2 ** len(keep), 2 ** len(gone)
    t = mat.reshape([2] * (2 * n)).transpose(
        keep + gone + [n + q for q in keep] + [n + q for q in gone]
    )
    reduced = np.einsum("ajbj->ab", t.reshape(dk, dg, dk, dg))
    return DensityMatrix(reduced)


def partial_transpose(rho: Matrixlike, cut: Bipartition) -> np.ndarray:
    """Transpose the ``side_b`` qubits of ``cut``; returns a Hermitian array."""
    mat = _raw(rho)
    n = qubits_for_dim(mat.shape[0])
    if cut.n_qubits != n:
        raise ArgumentError(f"cut {cut} does not match a {n}-qubit state")
    axes = list(range(2 * n))
    for q in cut.side_b:
        axes[q], axes[n + q] = n + q, q
    return mat.reshape([2] * (2 * n)).transpose(axes).reshape(mat.shape)


def eig_hermitian(m: Matrixlike, vectors: bool = False):
    """Eigenvalues in descending order, optionally with matching eigenvectors.

    Raises ArgumentError when ``m`` is not Hermitian within 1e-10.
    """
    mat = _square(_raw(m), "matrix")
    if hermiticity_error(mat) > HERMITIAN_TOL:
        raise ArgumentError("eig_hermitian requires a Hermitian matrix")
    if vectors:
        vals, vecs = np.linalg.eigh(mat)
        return vals[::-1], vecs[:, ::-1]
    return np.linalg.eigvalsh(mat)[::-1]


def entropy_of_spectrum(vals) -> float:
    vals = np.asarray(vals, dtype=float)
    vals = vals[vals > ENTROPY_FLOOR]
    return float(-np.sum(vals * np.log2(vals))) + 0.0


def entropy(rho: DensityMatrix) -> float:
    """Von Neumann entropy in bits."""
    return entropy_of_spectrum(eig_hermitian(rho))


def expectation(rho: DensityMatrix, op: Matrixlike) -> float:
    """Re Tr[O rho]."""
    r, o = _raw(rho), _raw(op)
    if o.shape != r.shape:
        raise ArgumentError(f"operator shape {o.shape} does not match state shape {r.shape}")
    if hermiticity_error(o) > HERMITIAN_TOL:
        raise ArgumentError("expectation requires a Hermitian observable")
    return float(np.real(np.sum(o * r.T)))


def apply_unitary(rho: DensityMatrix, u: Matrixlike) -> DensityMatrix:
    """U rho U^dagger."""
    r = _raw(rho)
    u = u if isinstance(u, Operator) else Operator(u)
    if u.dim != r.shape[0]:
        raise ArgumentError(f"unitary dimension {u.dim} does not match state dimension {r.shape[0]}")
    if not u.is_unitary():
        raise ArgumentError("apply_unitary requires a unitary operator")
    return DensityMatrix(u.data @ r @ u.data.conj().T)
