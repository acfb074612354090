import numpy as np
import pytest

from mixq.core import Bipartition, DensityMatrix, tensor
from mixq.entanglement import (
    ParametrizedFamily,
    PolarizationModel,
    ThresholdCurve,
    analytic_cat_threshold,
    cat_family,
    cat_threshold_curve,
    cat_threshold_table,
    crossing_analysis,
    ppt_check,
    separability_bound,
    separability_bound_curve,
    threshold_bisect,
    werner_family,
)
from mixq.errors import ArgumentError, DomainError
from mixq.states import cat_state, pseudo_pure, random_density, werner


def test_ppt_werner_below_threshold_is_conclusively_separable():
    rep = ppt_check(werner(0.2), Bipartition.of([0], 2))
    assert rep.is_ppt and rep.conclusive and rep.verdict == "separable"
    assert rep.negativity == 0


def test_ppt_werner_half():
    rep = ppt_check(werner(0.5), Bipartition.of([0], 2))
    assert rep.min_eigenvalue == pytest.approx((1 - 3 * 0.5) / 4, abs=1e-14)
    assert not rep.is_ppt and rep.verdict == "entangled"


@pytest.mark.parametrize("seed", range(5))
def test_ppt_product_states(seed):
    rho = tensor(*(random_density(1, seed + k) for k in range(3)))
    for side_a in ([0], [1], [2], [0, 2]):
        rep = ppt_check(rho, Bipartition.of(side_a, 3))
        assert rep.is_ppt and rep.negativity == 0
        assert not rep.conclusive  # three qubits: PPT proves nothing


def test_ppt_dimension_mismatch():
    with pytest.raises(ArgumentError):
        ppt_check(werner(0.1), Bipartition.of([0], 3))


def test_werner_negativity_on_grid():
    cut = Bipartition.of([0], 2)
    for eps in np.linspace(0, 1, 50):
        rep = ppt_check(werner(eps), cut)
        assert abs(rep.negativity - max(0.0, (3 * eps - 1) / 4)) <= 1e-10
        assert rep.is_ppt == (rep.min_eigenvalue >= -1e-10)


@pytest.mark.parametrize("seed", range(20))
def test_ppt_verdict_independent_of_transposed_side(seed):
    n = 2 + seed % 3
    rho = random_density(n, seed, rank=1 + seed % 3)
    cut = Bipartition.of([0], n)
    a, b = ppt_check(rho, cut), ppt_check(rho, cut.swapped())
    assert a.is_ppt == b.is_ppt
    assert a.min_eigenvalue == pytest.approx(b.min_eigenvalue, abs=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_cat_partial_transpose_spectrum_matches_block_formula(n):
    # PT moves the eps/2 coherence into a 2x2 block whose diagonal is (1-eps)/2^n
    cut = Bipartition.of([0], n)
    for eps in np.linspace(0, 1, 9):
        rep = ppt_check(pseudo_pure(n, eps, cat_state(n)), cut)
        assert rep.min_eigenvalue == pytest.approx(min((1 - eps) / 2**n - eps / 2, (1 - eps) / 2**n), abs=1e-14)


def test_threshold_werner():
    assert abs(threshold_bisect(werner_family(), 1e-9) - 1 / 3) <= 1e-9


def test_threshold_cat_examples():
    assert abs(threshold_bisect(cat_family(3), 1e-10) - 1 / 5) <= 1e-9
    assert abs(threshold_bisect(cat_family(2), 1e-10) - 1 / 3) <= 1e-9
    assert abs(threshold_bisect(cat_family(4, balanced=True), 1e-10) - 1 / 9) <= 1e-9


def test_threshold_refinement_invariance():
    fam = cat_family(4)
    for tol in (1e-4, 1e-6, 1e-8):
        assert abs(threshold_bisect(fam, tol) - threshold_bisect(fam, tol / 2)) <= 2 * tol


def test_threshold_requires_bracket():
    always_ppt = ParametrizedFamily(
        "mixed-only", lambda eps: DensityMatrix.maximally_mixed(2), Bipartition.of([0], 2)
    )
    with pytest.raises(DomainError):
        threshold_bisect(always_ppt)
    with pytest.raises(ArgumentError):
        threshold_bisect(werner_family(), 0)


def test_cat_table_matches_formula():
    table = cat_threshold_table(range(2, 9), 1e-10)
    for n, eps_c in table:
        assert abs(eps_c - 1 / (1 + 2 ** (n - 1))) <= 1e-8
    values = [e for _, e in table]
    assert all(b < a for a, b in zip(values, values[1:]))
    assert dict(table)[4] == pytest.approx(1 / 9, abs=1e-8)


def test_threshold_curves_are_decreasing():
    for f in (analytic_cat_threshold, separability_bound):
        vals = [f(n) for n in range(1, 40)]
        assert all(b < a for a, b in zip(vals, vals[1:]))


def test_crossing_exact_at_five():
    curve = ThresholdCurve("cat", analytic_cat_threshold)
    c = analytic_cat_threshold(5) / (5 * 2.0**-5)
    rep = crossing_analysis(PolarizationModel(c, curve), 12)
    assert rep.n_cross == 5 and rep.unique


def test_crossing_exact_at_five_with_numeric_thresholds():
    curve = cat_threshold_curve(numeric_max=6)
    c = analytic_cat_threshold(5) / (5 * 2.0**-5)
    rep = crossing_analysis(PolarizationModel(c * (1 + 1e-7), curve), 10)
    assert rep.n_cross == 5
    assert [r["extrapolated"] for r in rep.rows] == [n > 6 for n in range(2, 11)]


def test_crossing_absent_for_tiny_scale():
    rep = crossing_analysis(PolarizationModel(1e-30, cat_threshold_curve(numeric_max=4)), 20)
    assert rep.n_cross is None and not rep.unique


def test_default_model_against_separability_bound():
    model = PolarizationModel.calibrated()
    assert model.polarization(2) == pytest.approx(1e-5)
    rep = crossing_analysis(model, 30)
    assert rep.unique
    assert 10 <= rep.n_cross <= 16
    assert all(r["extrapolated"] for r in rep.rows)


def test_polarization_model_validation():
    with pytest.raises(ArgumentError):
        PolarizationModel(0.0)
    with pytest.raises(ArgumentError):
        PolarizationModel(1.0, separability_bound_curve(), "cubic")
    with pytest.raises(ArgumentError):
        crossing_analysis(PolarizationModel(1.0), 1, 2)
