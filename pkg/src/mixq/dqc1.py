"""One-clean-qubit trace estimation.

The clean qubit is qubit 0 and starts in ``(1 - eps sigma_z)/2``; the
register (qubits 1..n) starts maximally mixed. After a Hadamard on the clean
qubit and a controlled-U, the clean qubit's transverse polarization encodes
the normalized trace:

    <sigma_x> = p0 * Re Tr(U) / 2^n,   <sigma_y> = p0 * Im Tr(U) / 2^n

where ``p0 = <sigma_z>`` of the initial state (``-eps`` for the default sign).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .core import (
    HADAMARD,
    PAULI,
    DensityMatrix,
    Operator,
    check_cap,
    embed,
    expectation,
    qubits_for_dim,
)
from .errors import ArgumentError, DomainError
from .states import deviation_state

SEED_MASK = (1 << 64) - 1
_CHUNK = 1 << 20
S_DAGGER = np.diag([1, -1j]).astype(np.complex128)


@dataclass(frozen=True)
class Hadamard:
    qubit: int


@dataclass(frozen=True, eq=False)
class SingleQubit:
    qubit: int
    matrix: np.ndarray
    label: str = ""


@dataclass(frozen=True, eq=False)
class ControlledU:
    control: int
    targets: tuple
    u: Operator


Gate = Union[Hadamard, SingleQubit, ControlledU]


@dataclass(frozen=True, eq=False)
class Circuit:
    n_total: int
    gates: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if isinstance(g, ControlledU):
                qubits = (g.control, *g.targets)
                if g.control in g.targets:
                    raise ArgumentError("controlled gate targets must exclude the control")
                if 2 ** len(g.targets) != g.u.dim:
                    raise ArgumentError("controlled unitary size does not match its targets")
            else:
                qubits = (g.qubit,)
            if any(q < 0 or q >= self.n_total for q in qubits):
                raise ArgumentError(f"gate {g} acts outside a {self.n_total}-qubit register")

    def gate_matrix(self, g: Gate) -> np.ndarray:
        if isinstance(g, Hadamard):
            return embed(HADAMARD, [g.qubit], self.n_total).data
        if isinstance(g, SingleQubit):
            return embed(g.matrix, [g.qubit], self.n_total).data
        return embed(controlled(g.u), [g.control, *g.targets], self.n_total).data

    def unitary(self) -> Operator:
        total = np.eye(2**self.n_total, dtype=np.complex128)
        for g in self.gates:
            total = self.gate_matrix(g) @ total
        return Operator(total)

    def run(self, rho: DensityMatrix) -> DensityMatrix:
        u = self.unitary().data
        return DensityMatrix(u @ rho.data @ u.conj().T)


def controlled(u: Operator) -> Operator:
    """diag(I, U) with the control as the most significant qubit."""
    u = u if isinstance(u, Operator) else Operator(u)
    if not u.is_unitary():
        raise ArgumentError("controlled() requires a unitary operator")
    d = u.dim
    out = np.zeros((2 * d, 2 * d), dtype=np.complex128)
    out[:d, :d] = np.eye(d)
    out[d:, d:] = u.data
    return Operator(out)


def dqc1_circuit(u: Operator, final: str | None = None) -> Circuit:
    """Hadamard on the clean qubit, then controlled-U on qubits 1..n.

    ``final="re"`` appends a Hadamard and ``final="im"`` appends S-dagger and
    a Hadamard, so that sigma_z of the clean qubit reads the requested
    quadrature directly.
    """
    n = u.n_qubits
    gates = [Hadamard(0), ControlledU(0, tuple(range(1, n + 1)), u)]
    if final == "im":
        gates.append(SingleQubit(0, S_DAGGER, "S†"))
    if final in ("re", "im"):
        gates.append(Hadamard(0))
    elif final is not None:
        raise ArgumentError(f"final must be None, 're' or 'im', got {final!r}")
    return Circuit(n + 1, gates)


def _checked(u: Operator, epsilon: float) -> Operator:
    u = u if isinstance(u, Operator) else Operator(u)
    if not u.is_unitary():
        raise ArgumentError("DQC1 requires a unitary operator")
    check_cap(u.n_qubits + 1)
    if epsilon == 0:
        raise DomainError("epsilon = 0 carries no signal")
    return u


def clean_qubit_signals(
    u: Operator, epsilon: float = 1.0, sign: int = -1, literal: bool = False
) -> tuple[float, float, float]:
    """(initial <sigma_z>, Re-quadrature signal, Im-quadrature signal) of the clean qubit."""
    u = _checked(u, epsilon)
    n_total = u.n_qubits + 1
    rho0 = deviation_state(n_total, epsilon, sign)
    z0 = embed(PAULI["z"], [0], n_total)
    p0 = expectation(rho0, z0)
    if literal:
        sig_re = expectation(dqc1_circuit(u, "re").run(rho0), z0)
        sig_im = expectation(dqc1_circuit(u, "im").run(rho0), z0)
    else:
        rho = dqc1_circuit(u).run(rho0)
        sig_re = expectation(rho, embed(PAULI["x"], [0], n_total))
        sig_im = expectation(rho, embed(PAULI["y"], [0], n_total))
    return p0, sig_re, sig_im


def dqc1_exact(
    u: Operator, epsilon: float = 1.0, sign: int = -1, literal: bool = False
) -> complex:
    """Tr(U)/2^n recovered by simulating the one-clean-qubit circuit.

    Both readout signals are divided by the clean qubit's initial
    polarization, which makes the result independent of ``epsilon``.
    ``literal`` measures sigma_z after the extra basis-change gates instead
    of sigma_x / sigma_y directly.
    """
    p0, sig_re, sig_im = clean_qubit_signals(u, epsilon, sign, literal)
    return complex(sig_re / p0, sig_im / p0)


@dataclass(frozen=True)
class ShotResult:
    estimate: float
    stderr: float
    shots: int
    seed: int

    def as_dict(self) -> dict:
        return {"estimate": self.estimate, "stderr": self.stderr, "shots": self.shots, "seed": self.seed}


def shot_uniforms(seed: int, stream: int, start: int, count: int) -> np.ndarray:
    """Uniforms for shot indices ``start .. start+count-1`` of one stream.

    Philox is keyed by (seed, stream); shot ``i`` always comes from counter
    block ``i // 4``, so any chunking of the index range gives the same values.
    """
    bg = np.random.Philox(key=np.array([seed & SEED_MASK, stream], dtype=np.uint64))
    bg.advance(start // 4)
    skip = start % 4
    return np.random.Generator(bg).random(skip + count)[skip:]


def _count_plus(seed: int, stream: int, p_plus: float, shots: int, chunk: int) -> int:
    plus = 0
    for start in range(0, shots, chunk):
        count = min(chunk, shots - start)
        plus += int(np.count_nonzero(shot_uniforms(seed, stream, start, count) < p_plus))
    return plus


def dqc1_sampled(
    u: Operator,
    epsilon: float,
    shots: int,
    seed: int,
    sign: int = -1,
    chunk: int = _CHUNK,
) -> tuple[ShotResult, ShotResult]:
    """Finite-shot estimates of Re and Im of Tr(U)/2^n.

    Each shot is a +-1 outcome of the clean qubit's sigma_x (stream 0) or
    sigma_y (stream 1) with the exact expectation as its mean. The outcome
    mean is rescaled by the initial polarization; ``stderr`` is the binomial
    standard error of that rescaled mean.
    """
    if shots < 1:
        raise ArgumentError("shots must be at least 1")
    p0, sig_re, sig_im = clean_qubit_signals(u, epsilon, sign)
    out = []
    for stream, signal in enumerate((sig_re, sig_im)):
        m = min(1.0, max(-1.0, signal))
        plus = _count_plus(seed, stream, (1 + m) / 2, shots, chunk)
        mean = (2 * plus - shots) / shots
        stderr = np.sqrt(max(0.0, 1 - mean**2) / shots) / abs(p0)
        out.append(ShotResult(mean / p0, float(stderr), shots, seed))
    return out[0], out[1]


def random_unitary(dim: int, seed: int) -> Operator:
    """Haar-random unitary from the QR decomposition of a complex Ginibre
    matrix, with R's diagonal phases absorbed into Q."""
    qubits_for_dim(dim)
    rng = np.random.default_rng(seed & SEED_MASK)
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return Operator(q * (d / np.abs(d)), label=f"haar({seed})")
