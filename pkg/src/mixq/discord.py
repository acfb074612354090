"""Quantum mutual information, measured classical correlation and discord.

The measured subsystem Y is ``cut.side_b`` and must be a single qubit; X is
``cut.side_a``. Measurements are rank-one projective, parametrized by the
Bloch angles of the ``+`` outcome.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import (
    ENTROPY_FLOOR,
    PAULI,
    Bipartition,
    DensityMatrix,
    entropy,
    partial_trace,
)
from .errors import ArgumentError, UnsupportedError

PROB_FLOOR = 1e-12
CLIP_TOL = 1e-8
# smallest gain that counts as an improvement during refinement (rounding floor)
IMPROVE_TOL = 1e-14


@dataclass(frozen=True)
class ProjectiveBasis:
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if not 0 <= self.theta <= np.pi:
            raise ArgumentError(f"theta={self.theta} outside [0, pi]")
        if not 0 <= self.phi < 2 * np.pi:
            raise ArgumentError(f"phi={self.phi} outside [0, 2pi)")

    @classmethod
    def wrapped(cls, theta: float, phi: float) -> "ProjectiveBasis":
        """Same measurement axis with angles folded into the canonical ranges."""
        theta = float(np.mod(theta, 2 * np.pi))
        if theta > np.pi:
            theta, phi = 2 * np.pi - theta, phi + np.pi
        phi = float(np.mod(phi, 2 * np.pi))
        if phi >= 2 * np.pi:
            phi = 0.0
        return cls(theta, phi)

    @property
    def axis(self) -> np.ndarray:
        return _bloch_axis(np.array(self.theta), np.array(self.phi))

    @property
    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        p = _projectors(np.array([self.theta]), np.array([self.phi]))[0]
        return p[0], p[1]


def _bloch_axis(theta, phi):
    return np.stack(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1
    )


def _projectors(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Array of shape (k, 2, 2, 2): for each angle pair, (Pi_plus, Pi_minus)."""
    axis = _bloch_axis(theta, phi)
    ns = np.einsum("ka,aij->kij", axis, np.stack([PAULI["x"], PAULI["y"], PAULI["z"]]))
    eye = np.eye(2)
    return np.stack([(eye + ns) / 2, (eye - ns) / 2], axis=1)


def _measured_qubit(rho: DensityMatrix, cut: Bipartition) -> int:
    if cut.n_qubits != rho.n_qubits:
        raise ArgumentError(f"cut {cut} does not match a {rho.n_qubits}-qubit state")
    if len(cut.side_b) != 1:
        raise UnsupportedError("only a single measured qubit (|side_b| == 1) is supported")
    return next(iter(cut.side_b))


def _xy_blocks(rho: DensityMatrix, y: int) -> np.ndarray:
    """rho reshaped to (dX, 2, dX, 2) with X qubits ascending and Y last."""
    n = rho.n_qubits
    xs = [q for q in range(n) if q != y]
    t = rho.data.reshape([2] * (2 * n)).transpose(xs + [y] + [n + q for q in xs] + [n + y])
    dx = 2 ** (n - 1)
    return t.reshape(dx, 2, dx, 2)


def _conditional_entropies(blocks: np.ndarray, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """H(X|Y) for every angle pair, vectorized over the batch."""
    proj = _projectors(theta, phi)
    # Tr_Y[(1 (x) Pi) rho (1 (x) Pi)] = Tr_Y[(1 (x) Pi) rho] since Pi is a projector
    cond = np.einsum("iajb,kcba->kcij", blocks, proj)
    cond = (cond + np.conj(np.swapaxes(cond, -1, -2))) / 2
    lam = np.linalg.eigvalsh(cond)
    p = lam.sum(axis=-1)
    safe_p = np.where(p < PROB_FLOOR, 1.0, p)
    q = lam / safe_p[..., None]
    keep = (q > ENTROPY_FLOOR) & (p[..., None] >= PROB_FLOOR)
    h = -np.sum(np.where(keep, q * np.log2(np.where(keep, q, 1.0)), 0.0), axis=-1)
    h = np.where(p < PROB_FLOOR, 0.0, h)
    return np.sum(p * h, axis=-1)


def mutual_information(rho: DensityMatrix, cut: Bipartition) -> float:
    """I = H(A) + H(B) - H(AB), in bits."""
    if cut.n_qubits != rho.n_qubits:
        raise ArgumentError(f"cut {cut} does not match a {rho.n_qubits}-qubit state")
    return (
        entropy(partial_trace(rho, cut.side_a))
        + entropy(partial_trace(rho, cut.side_b))
        - entropy(rho)
    )


def conditional_entropy(rho: DensityMatrix, cut: Bipartition, basis: ProjectiveBasis) -> float:
    """Entropy of X averaged over the outcomes of measuring Y in ``basis``."""
    y = _measured_qubit(rho, cut)
    h = _conditional_entropies(_xy_blocks(rho, y), np.array([basis.theta]), np.array([basis.phi]))
    return float(h[0])


def classical_J(rho: DensityMatrix, cut: Bipartition, basis: ProjectiveBasis) -> float:
    """J = H(X) - H(X|Y) for one measurement basis on Y."""
    return entropy(partial_trace(rho, cut.side_a)) - conditional_entropy(rho, cut, basis)


def angle_grid(grid_density: int) -> tuple[np.ndarray, np.ndarray]:
    """``grid_density`` polar angles including both poles, and twice as many
    azimuths on [0, 2pi)."""
    if grid_density < 2:
        raise ArgumentError("grid_density must be at least 2")
    theta = np.linspace(0, np.pi, grid_density)
    phi = 2 * np.pi * np.arange(2 * grid_density) / (2 * grid_density)
    return theta, phi


def optimize_classical_J(
    rho: DensityMatrix,
    cut: Bipartition,
    grid_density: int = 64,
    refine_iters: int = 200,
) -> tuple[float, ProjectiveBasis]:
    """Maximize J over measurement bases on Y.

    A full (theta, phi) grid is scanned first; ties go to the lowest flat grid
    index. A compass search then starts from the best grid point with the
    grid spacing as step, moving to the best improving neighbour or halving
    both steps when none improves.
    """
    y = _measured_qubit(rho, cut)
    blocks = _xy_blocks(rho, y)
    h_x = entropy(partial_trace(rho, cut.side_a))

    theta, phi = angle_grid(grid_density)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    j_grid = h_x - _conditional_entropies(blocks, tt.ravel(), pp.ravel())
    best = int(np.argmax(j_grid))
    t0, p0, j0 = float(tt.ravel()[best]), float(pp.ravel()[best]), float(j_grid[best])

    dt, dp = theta[1] - theta[0], phi[1] - phi[0]
    moves = np.array([[1, 0], [-1, 0], [0, 1], [0, -1]], dtype=float)
    for _ in range(refine_iters):
        cand_t = t0 + moves[:, 0] * dt
        cand_p = p0 + moves[:, 1] * dp
        j_cand = h_x - _conditional_entropies(blocks, cand_t, cand_p)
        k = int(np.argmax(j_cand))
        if j_cand[k] > j0 + IMPROVE_TOL:
            t0, p0, j0 = float(cand_t[k]), float(cand_p[k]), float(j_cand[k])
        else:
            dt, dp = dt / 2, dp / 2
    return j0, ProjectiveBasis.wrapped(t0, p0)


@dataclass(frozen=True)
class DiscordSettings:
    grid_density: int = 64
    refine_iters: int = 200
    basis: ProjectiveBasis = field(default_factory=ProjectiveBasis)


@dataclass(frozen=True)
class DiscordReport:
    I: float
    J_at_basis: float
    J_max: float
    basis_argmax: ProjectiveBasis
    D_standard: float
    D_paper_sign: float
    basis: Optional[ProjectiveBasis] = None

    def as_dict(self) -> dict:
        return {
            "I": self.I,
            "J_at_basis": self.J_at_basis,
            "J_max": self.J_max,
            "basis_argmax": {"theta": self.basis_argmax.theta, "phi": self.basis_argmax.phi},
            "D_standard": self.D_standard,
            "D_paper_sign": self.D_paper_sign,
        }


def discord(
    rho: DensityMatrix, cut: Bipartition, settings: DiscordSettings | None = None
) -> DiscordReport:
    """Discord report; ``D_standard = I - J_max`` and ``D_paper_sign`` its negative."""
    settings = settings or DiscordSettings()
    info = mutual_information(rho, cut)
    j_basis = classical_J(rho, cut, settings.basis)
    j_max, argmax = optimize_classical_J(rho, cut, settings.grid_density, settings.refine_iters)
    if j_basis > j_max:
        j_max, argmax = j_basis, settings.basis
    d = info - j_max
    if -CLIP_TOL < d < 0:
        d = 0.0
    return DiscordReport(info, j_basis, j_max, argmax, d, j_max - info, settings.basis)
