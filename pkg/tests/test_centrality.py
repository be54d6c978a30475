"""Commutation probes and the two identity chains.

Pair classes matter here: commuting pairs must drive every gap to roundoff,
generic pairs must keep every gap visibly large, and the matched family
separates the hypothesis identity from actual commutation.
"""

import numpy as np
import pytest

from meanlab import (
    HARMONIC,
    WASSERSTEIN,
    DomainError,
    arith_mean_commutator,
    centrality_probe,
    comm_tol,
    commutator_norm,
    commutator_report,
    identity_pd,
    kubo_ando_power,
    mean,
    mpow,
    pauli_basis,
    probe_report,
    random_pd,
    remark1_identity_chain,
    remark2_identity_chain,
    rng_for,
)

SZ, SX, U = pauli_basis()
I2 = np.eye(2, dtype=complex)

COMMUTING_GAP_TOL = 1e-11
GENERIC_GAP_FLOOR = 1e-3
DERIVATIVE_TOL = 1e-5


@pytest.fixture
def commuting_pair(pd):
    return pd(np.diag([1.0, 4.0])), pd(np.diag([9.0, 16.0]))


@pytest.fixture
def generic_pair(pd):
    return pd(np.diag([1.0, 4.0])), pd(I2 + 0.6 * SX.mat)


@pytest.fixture
def matched_pair(pd):
    return pd(I2 + 0.5 * SZ.mat), pd(I2 + 0.5 * SX.mat)


def test_comm_tol_has_a_floor(pd):
    tiny = pd(0.01 * np.eye(2))
    assert comm_tol(tiny, tiny) >= 1e-9


def test_commutator_norm_on_paulis(pd):
    A = pd(I2 + 0.5 * SZ.mat)
    B = pd(I2 + 0.5 * SX.mat)
    # [A, B] = 0.25 [sz, sx] and ||[sz, sx]||_F = 2 sqrt(2).
    assert commutator_norm(A, B) == pytest.approx(0.5 * np.sqrt(2.0))


def test_arith_mean_commutator_vanishes_when_commuting(commuting_pair):
    A, B = commuting_pair
    for kind in (HARMONIC, WASSERSTEIN, kubo_ando_power(0.5)):
        assert arith_mean_commutator(kind, A, B) <= COMMUTING_GAP_TOL


def test_arith_mean_commutator_rejects_p_one(commuting_pair):
    A, B = commuting_pair
    with pytest.raises(DomainError, match="arithmetic mean with itself"):
        arith_mean_commutator(kubo_ando_power(1.0), A, B)


def test_scalar_matrices_pass_the_probe():
    lam = identity_pd(2)
    assert centrality_probe(lam, WASSERSTEIN, samples=30, seed=3)
    assert centrality_probe(lam, kubo_ando_power(0.5), samples=30, seed=3)


def test_non_scalar_matrices_fail_the_probe(pd):
    A = pd(np.diag([1.0, 4.0]))
    assert not centrality_probe(A, WASSERSTEIN, samples=30, seed=3)
    assert not centrality_probe(A, kubo_ando_power(-0.5), samples=30, seed=3)


def test_probe_report_carries_the_evidence(pd):
    rep = probe_report(pd(np.diag([1.0, 4.0])), HARMONIC, samples=10, seed=0)
    assert not rep.central
    assert rep.failures > 0
    assert rep.samples == 10
    assert rep.worst_gap > GENERIC_GAP_FLOOR


def test_probe_kind_validation(pd):
    A = identity_pd(2)
    with pytest.raises(DomainError):
        centrality_probe(A, kubo_ando_power(1.0), samples=5, seed=0)


def test_commutator_report_verdicts(commuting_pair, generic_pair):
    A, B = commuting_pair
    assert commutator_report(HARMONIC, A, B, pair_id="pair-0").verdict == "commutes"
    C, D = generic_pair
    assert commutator_report(HARMONIC, C, D).verdict == "does_not_commute"


def test_remark1_gap_names(commuting_pair):
    rep = remark1_identity_chain(*commuting_pair)
    assert [name for name, _ in rep.gaps] == [
        "hypothesis-identity",
        "square-root-commutator",
        "square-commutator",
        "commutator",
    ]


def test_remark1_commuting(commuting_pair):
    rep = remark1_identity_chain(*commuting_pair)
    assert rep.all_small(COMMUTING_GAP_TOL)
    assert rep.derivative_error <= DERIVATIVE_TOL


def test_remark1_generic(generic_pair):
    rep = remark1_identity_chain(*generic_pair)
    assert rep.all_large(GENERIC_GAP_FLOOR)
    # The chain differentiates an exact polynomial in t, so the derivative
    # check stays sharp even off the commuting locus.
    assert rep.derivative_error <= DERIVATIVE_TOL


def test_remark1_matched_family_separation(matched_pair):
    rep = remark1_identity_chain(*matched_pair)
    assert rep.gap("hypothesis-identity") <= COMMUTING_GAP_TOL
    assert rep.gap("commutator") > GENERIC_GAP_FLOOR
    assert not rep.all_small(COMMUTING_GAP_TOL)
    assert not rep.all_large(GENERIC_GAP_FLOOR)


@pytest.mark.parametrize("p", [0.5, 0.9])
def test_remark2_positive_case(p, commuting_pair, generic_pair):
    rep = remark2_identity_chain(*commuting_pair, p=p)
    assert rep.case == "positive-power"
    assert rep.all_small(COMMUTING_GAP_TOL)
    assert rep.derivative_error <= DERIVATIVE_TOL
    rep = remark2_identity_chain(*generic_pair, p=p)
    assert rep.all_large(GENERIC_GAP_FLOOR)


@pytest.mark.parametrize("p", [-0.5, -0.9])
def test_remark2_negative_case(p, commuting_pair, generic_pair):
    rep = remark2_identity_chain(*commuting_pair, p=p)
    assert rep.case == "negative-power"
    assert rep.all_small(COMMUTING_GAP_TOL)
    assert rep.derivative_error <= DERIVATIVE_TOL
    rep = remark2_identity_chain(*generic_pair, p=p)
    assert rep.all_large(GENERIC_GAP_FLOOR)
    # Off the commuting locus the fractional-power tail of the one-sided
    # stencil grows as |p| approaches 1, so only an order-of-magnitude
    # bound is stable here.
    assert rep.derivative_error <= 1e-4


def test_remark2_harmonic_case(commuting_pair, generic_pair):
    rep = remark2_identity_chain(*commuting_pair, p=-1.0)
    assert rep.case == "harmonic"
    assert rep.derivative_error is None
    assert rep.all_small(COMMUTING_GAP_TOL)
    assert "inverse-commutator" in dict(rep.gaps)
    rep = remark2_identity_chain(*generic_pair, p=-1.0)
    assert rep.all_large(GENERIC_GAP_FLOOR)


def test_remark2_parameter_validation(commuting_pair):
    A, B = commuting_pair
    for bad in (0.0, 1.0, 1.2, -1.5):
        with pytest.raises(DomainError):
            remark2_identity_chain(A, B, p=bad)


def test_chain_report_json(commuting_pair):
    blob = remark1_identity_chain(*commuting_pair).to_json()
    assert set(blob) >= {"label", "case", "gaps", "tolerance"}
    assert isinstance(blob["gaps"], dict)


def test_probe_matches_square_root_transfer(pd, rng):
    """[A, B] = 0 forces [sqrt(A), B] = 0; the probe's tolerance respects
    the scaling used by comm_tol."""
    A = random_pd(rng, 2)
    B = mpow(A, 2.0)
    assert commutator_norm(mpow(A, 0.5), B) <= comm_tol(A, B)
    assert arith_mean_commutator(kubo_ando_power(0.5), A, B) <= comm_tol(A, B)
