"""Series extraction on the perturbed pair and the scalar mean profile.

Closed forms used as oracles here:
  (I + e sz)^(1/2)            = I + (e/2) sz - (e^2/8) I + O(e^3)
  A_e^(-1/2) B_e A_e^(-1/2)   = I + e (sx - sz) + e^2 I + O(e^3)
  harmonic mean of the pair   = (1 - e^2) / (1 - e^2/2) (I + e (sz + sx)/2),
which makes the harmonic c2 exactly -I/2.
"""

import numpy as np
import pytest

from meanlab import (
    DEFAULT_GRID,
    DomainError,
    EpsFamily,
    FitFailure,
    HermitianMatrix,
    IllConditioned,
    check_power_mean_expansion,
    check_wasserstein_expansion,
    fit_series,
    fit_series_general,
    frobenius,
    gp_d1,
    gp_d2,
    gp_eval,
    mean,
    mpow,
    pauli_basis,
    pauli_pair,
)
from meanlab import HARMONIC

SZ, SX, _U = pauli_basis()
I2 = np.eye(2, dtype=complex)

EXACT_TOL = 1e-8
C1_CLOSED_TOL = 1e-6
C2_CLOSED_TOL = 1e-4
P_VALUES = (-0.9, -0.5, -0.1, 0.1, 0.5, 0.9)


def central_second_derivative(f, x, h=1e-4):
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)


def test_exact_polynomial_family_is_recovered():
    fit = fit_series(lambda e: HermitianMatrix(I2 + 3.0 * e * SX.mat), DEFAULT_GRID)
    assert frobenius(fit.c0 - I2) <= EXACT_TOL
    assert frobenius(fit.c1 - 3.0 * SX.mat) <= EXACT_TOL
    assert frobenius(fit.c2) <= EXACT_TOL


def test_square_root_of_the_perturbed_factor():
    def family(e):
        A, _ = pauli_pair(e)
        return mpow(A, 0.5)

    fit = fit_series(family, DEFAULT_GRID)
    assert frobenius(fit.c1 - 0.5 * SZ.mat) <= C1_CLOSED_TOL
    assert frobenius(fit.c2 + 0.125 * I2) <= C2_CLOSED_TOL


def test_conjugated_factor_expansion():
    def family(e):
        A, B = pauli_pair(e)
        Aih = mpow(A, -0.5)
        return HermitianMatrix(Aih.mat @ B.mat @ Aih.mat)

    # The cubic tail of this family is large; halving the grid keeps the
    # truncation bias out of the c1 read.
    fit = fit_series(family, DEFAULT_GRID.scaled(0.5))
    assert frobenius(fit.c1 - (SX.mat - SZ.mat)) <= C1_CLOSED_TOL
    assert frobenius(fit.c2 - I2) <= C2_CLOSED_TOL


def test_harmonic_mean_second_order_closed_form():
    def family(e):
        A, B = pauli_pair(e)
        return mean(HARMONIC, A, B)

    fit = fit_series(family, DEFAULT_GRID)
    assert frobenius(fit.c0 - I2) <= 1e-9
    assert frobenius(fit.c1 - 0.5 * (SZ.mat + SX.mat)) <= C1_CLOSED_TOL
    assert frobenius(fit.c2 + 0.5 * I2) <= C2_CLOSED_TOL


def test_residual_bound_is_quadratic_fit_residual():
    fit = fit_series(lambda e: HermitianMatrix((1.0 + e**3) * I2), DEFAULT_GRID)
    # A pure cubic leaves the degree-2 read with a visible residual even
    # though the reported coefficients absorb it.
    assert fit.residual_bound > 1e-7
    assert frobenius(fit.c2) <= 1e-4


@pytest.mark.parametrize("p", P_VALUES)
def test_gp_normalization_and_slope(p):
    assert gp_eval(p, 1.0) == pytest.approx(1.0, abs=1e-14)
    assert gp_d1(p, 1.0) == 0.5


@pytest.mark.parametrize("p", P_VALUES)
def test_gp_second_derivative_matches_central_differences(p):
    want = central_second_derivative(lambda x: gp_eval(p, x), 1.0)
    assert gp_d2(p, 1.0) == pytest.approx(want, abs=1e-6)


def test_gp_away_from_the_base_point():
    # p = 1/2 at x = 4: closed form ((1 + 2)/2)^2 = 2.25 and its derivatives.
    assert gp_eval(0.5, 4.0) == pytest.approx(2.25)
    h = 1e-6
    slope = (gp_eval(0.5, 4.0 + h) - gp_eval(0.5, 4.0 - h)) / (2.0 * h)
    assert gp_d1(0.5, 4.0) == pytest.approx(slope, abs=1e-8)


def test_gp_rejects_bad_arguments():
    with pytest.raises(DomainError):
        gp_eval(0.0, 1.0)
    with pytest.raises(DomainError):
        gp_eval(0.5, -1.0)
    with pytest.raises(DomainError):
        gp_d2(2.0, 1.0)


def test_grid_needs_enough_points():
    with pytest.raises(DomainError, match="at least 4"):
        EpsFamily((0.01, 0.02))


def test_grid_range_is_enforced():
    with pytest.raises(DomainError):
        EpsFamily((0.01, 0.02, 0.04, 0.3))
    with pytest.raises(DomainError):
        EpsFamily((0.0, 0.02, 0.04, 0.1))


def test_grid_points_must_be_distinct():
    with pytest.raises(DomainError, match="distinct"):
        EpsFamily((0.01, 0.01, 0.02, 0.1))


def test_grid_is_stored_sorted():
    fam = EpsFamily((0.1, 0.01, 0.04, 0.02))
    assert fam.eps_grid == (0.01, 0.02, 0.04, 0.1)


def test_scaled_grid():
    fam = DEFAULT_GRID.scaled(0.5)
    assert fam.eps_grid == tuple(e / 2.0 for e in DEFAULT_GRID.eps_grid)


def test_ill_conditioned_grid_is_refused():
    wide = EpsFamily((1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4))
    with pytest.raises(IllConditioned):
        fit_series(lambda e: HermitianMatrix((1.0 + e) * I2), wide)


def test_non_polynomial_family_fails_the_sanity_check():
    with pytest.raises(FitFailure):
        fit_series(
            lambda e: HermitianMatrix((1.0 + np.sin(60.0 * e)) * I2), DEFAULT_GRID
        )


def test_non_hermitian_family_is_routed_to_the_general_fit():
    N = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    with pytest.raises(DomainError, match="general fit"):
        fit_series(lambda e: I2 + e * N, DEFAULT_GRID)
    fit = fit_series_general(lambda e: I2 + e * N, DEFAULT_GRID)
    assert frobenius(fit.c1 - N) <= EXACT_TOL


def test_power_expansion_report_separates_the_two_references():
    rep = check_power_mean_expansion(0.5)
    by_name = {item.name: item for item in rep.items}
    assert by_name["mean c1 deviation from (sigma_z + sigma_x)/2"].passed
    assert by_name["mean c2 deviation from g_p''(1) I = (-0.125000) I (derived)"].passed
    assert not by_name["mean c2 deviation from (+0.000000) I (tabulated)"].passed
    assert by_name["p-th power c2 trace/2 vs composed p(p-1)/2 (derived)"].passed
    assert not rep.all_pass


def test_wasserstein_expansion_report_pattern():
    rep = check_wasserstein_expansion()
    by_name = {item.name: item for item in rep.items}
    assert by_name["mean c2 deviation from -I/8 (derived)"].passed
    assert by_name["sqrt c2 deviation from -I/8 (derived)"].passed
    assert by_name["transport c2 deviation from sigma_x sigma_z / 2 - I/4 (derived)"].passed
    assert not by_name["mean c2 norm (tabulated: vanishes)"].passed
    assert not by_name["sqrt c2 deviation from -I/16 (tabulated)"].passed
    assert not rep.all_pass


def test_report_json_shape():
    rep = check_power_mean_expansion(0.9)
    blob = rep.to_json()
    assert blob["title"].startswith("power-mean expansion")
    assert isinstance(blob["all_pass"], bool)
    assert {"name", "observed", "tolerance", "passed", "mode"} <= set(
        blob["items"][0]
    )
