"""Partial-transpose entanglement certificates, threshold search and the
polarization/threshold crossing analysis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .core import PSD_TOL, Bipartition, DensityMatrix, check_cap, partial_transpose
from .errors import ArgumentError, DomainError
from .states import DEFAULT_POLARIZATION, cat_state, pseudo_pure, werner

CROSSING_RTOL = 1e-9


@dataclass(frozen=True)
class PptReport:
    min_eigenvalue: float
    is_ppt: bool
    negativity: float
    cut: Bipartition
    conclusive: bool

    @property
    def verdict(self) -> str:
        if not self.is_ppt:
            return "entangled"
        return "separable" if self.conclusive else "inconclusive"

    def as_dict(self) -> dict:
        return {
            "min_eigenvalue": self.min_eigenvalue,
            "is_ppt": self.is_ppt,
            "negativity": self.negativity,
            "cut": [sorted(self.cut.side_a), sorted(self.cut.side_b)],
            "conclusive": self.conclusive,
            "verdict": self.verdict,
        }


def ppt_check(rho: DensityMatrix, cut: Bipartition) -> PptReport:
    """Peres-Horodecki test across ``cut``.

    A negative partial transpose always certifies entanglement. A positive
    one certifies separability only when the whole system is two qubits;
    otherwise the report is marked inconclusive.
    """
    if cut.n_qubits != rho.n_qubits:
        raise ArgumentError(f"cut {cut} does not match a {rho.n_qubits}-qubit state")
    pt = partial_transpose(rho, cut)
    vals = np.linalg.eigvalsh((pt + pt.conj().T) / 2)
    min_eig = float(vals[0])
    is_ppt = min_eig >= -PSD_TOL
    negativity = 0.0 if is_ppt else float(-vals[vals < 0].sum())
    conclusive = (not is_ppt) or rho.n_qubits == 2
    return PptReport(min_eig, is_ppt, negativity, cut, conclusive)


@dataclass(frozen=True, eq=False)
class ParametrizedFamily:
    name: str
    generator: Callable[[float], DensityMatrix]
    cut: Bipartition


def werner_family() -> ParametrizedFamily:
    return ParametrizedFamily("werner", werner, Bipartition.of([0], 2))


def cat_family(n: int, balanced: bool = False) -> ParametrizedFamily:
    """Pseudo-pure cat states on ``n`` qubits.

    The cut is qubit 0 against the rest unless ``balanced`` is set, in which
    case the first ``n // 2`` qubits form side A.
    """
    if n < 2:
        raise ArgumentError("a cat family needs at least two qubits")
    check_cap(n)
    psi = cat_state(n)
    side_a = range(n // 2) if balanced else [0]
    return ParametrizedFamily(
        f"cat{n}", lambda eps: pseudo_pure(n, eps, psi), Bipartition.of(side_a, n)
    )


def threshold_bisect(family: ParametrizedFamily, tol: float = 1e-9) -> float:
    """Bisect the PPT/NPT boundary of ``family`` on [0, 1] to within ``tol``."""
    if not tol > 0:
        raise ArgumentError("tol must be positive")

    def ppt(eps):
        return ppt_check(family.generator(eps), family.cut).is_ppt

    if not ppt(0.0) or ppt(1.0):
        raise DomainError(
            f"family {family.name!r} is not PPT at 0 and NPT at 1; no transition to bisect"
        )
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if ppt(mid):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def analytic_cat_threshold(n: int) -> float:
    """Exact PPT boundary of the n-qubit pseudo-pure cat state, any cut."""
    return 1 / (1 + 2.0 ** (n - 1))


def separability_bound(n: int) -> float:
    """Largest eps for which every n-qubit pseudo-pure state is provably
    separable, 1/(1 + 2^(2n-1)) (Braunstein et al., PRL 83, 1054)."""
    return 1 / (1 + 2.0 ** (2 * n - 1))


def cat_threshold_table(n_values, tol: float = 1e-10) -> list[tuple[int, float]]:
    """Numerically bisected cat thresholds for each n; strictly decreasing."""
    table = [(int(n), threshold_bisect(cat_family(int(n)), tol)) for n in n_values]
    for (n0, e0), (n1, e1) in zip(table, table[1:]):
        if not e1 < e0:
            raise DomainError(f"cat thresholds not decreasing between n={n0} and n={n1}")
    return table


@dataclass(frozen=True, eq=False)
class ThresholdCurve:
    """n -> eps_c(n), computed numerically up to ``numeric_max`` and from
    ``analytic`` beyond that (reported as extrapolated)."""

    name: str
    analytic: Callable[[int], float]
    numeric: Optional[Callable[[int], float]] = None
    numeric_max: int = 0

    def __call__(self, n: int) -> tuple[float, bool]:
        if self.numeric is not None and n <= self.numeric_max:
            return self.numeric(n), False
        return self.analytic(n), True


@lru_cache(maxsize=None)
def _numeric_cat_threshold(n: int, tol: float) -> float:
    return threshold_bisect(cat_family(n), tol)


def cat_threshold_curve(numeric_max: int = 8, tol: float = 1e-10) -> ThresholdCurve:
    return ThresholdCurve(
        "cat", analytic_cat_threshold, lambda n: _numeric_cat_threshold(n, tol), numeric_max
    )


def separability_bound_curve() -> ThresholdCurve:
    return ThresholdCurve("separability-bound", separability_bound)


THRESHOLD_CURVES = {
    "separability-bound": separability_bound_curve,
    "cat": cat_threshold_curve,
}


def _n_exp2(n: int) -> float:
    return n * 2.0**-n


def _exp2(n: int) -> float:
    return 2.0**-n


POLARIZATION_FORMS = {"n_exp2": _n_exp2, "exp2": _exp2}


@dataclass(frozen=True, eq=False)
class PolarizationModel:
    """Achievable pseudo-pure polarization eps(n) = c * form(n)."""

    c: float
    threshold_curve: ThresholdCurve = field(default_factory=separability_bound_curve)
    form: str = "n_exp2"

    def __post_init__(self):
        if not self.c > 0:
            raise ArgumentError("polarization scale c must be positive")
        if self.form not in POLARIZATION_FORMS:
            raise ArgumentError(f"unknown polarization form {self.form!r}")

    def polarization(self, n: int) -> float:
        return self.c * POLARIZATION_FORMS[self.form](n)

    @classmethod
    def calibrated(
        cls,
        value: float = DEFAULT_POLARIZATION,
        at_n: int = 2,
        threshold_curve: ThresholdCurve | None = None,
        form: str = "n_exp2",
    ) -> "PolarizationModel":
        """Choose c so that eps(at_n) == value."""
        c = value / POLARIZATION_FORMS[form](at_n)
        return cls(c, threshold_curve or separability_bound_curve(), form)


@dataclass
class CrossingReport:
    n_cross: Optional[int]
    unique: bool
    rows: list

    def as_dict(self) -> dict:
        return {"n_cross": self.n_cross, "unique": self.unique, "curves": self.rows}


def crossing_analysis(model: PolarizationModel, n_max: int, n_min: int = 2) -> CrossingReport:
    """First n in [n_min, n_max] where the achievable polarization reaches the
    entanglement threshold.

    Equality counts as reaching it (relative tolerance 1e-9). ``unique`` is
    true when the comparison flips exactly once and never flips back.
    """
    if n_max < n_min:
        raise ArgumentError("n_max must be at least n_min")
    rows = []
    for n in range(n_min, n_max + 1):
        eps = model.polarization(n)
        eps_c, extrapolated = model.threshold_curve(n)
        rows.append(
            {
                "n": n,
                "polarization": eps,
                "threshold": eps_c,
                "extrapolated": extrapolated,
                "above": bool(eps >= eps_c * (1 - CROSSING_RTOL)),
            }
        )
    above = [r["above"] for r in rows]
    n_cross = next((r["n"] for r in rows if r["above"]), None)
    flips = sum(a != b for a, b in zip(above, above[1:]))
    unique = n_cross is not None and flips == (0 if above[0] else 1)
    return CrossingReport(n_cross, unique, rows)


def log_ratio(model: PolarizationModel, n: int) -> float:
    """log10(eps(n) / eps_c(n)); positive once entanglement is certifiable."""
    return math.log10(model.polarization(n) / model.threshold_curve(n)[0])
