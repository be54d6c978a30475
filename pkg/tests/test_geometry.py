"""Bures-Wasserstein distance and the two geodesic constructions.

Scalar pairs give exact oracles: for aI and bI in dimension two the distance
is sqrt(2) |sqrt(b) - sqrt(a)| and both geodesics are scalar curves.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meanlab import (
    GEODESIC_BW,
    GEODESIC_TRACE,
    GEOMETRIC,
    WASSERSTEIN,
    DimMismatch,
    DomainError,
    check_geodesic_metric,
    d_bw,
    frobenius,
    geodesic,
    identity_pd,
    mean,
    random_pd,
    random_unitary,
    rng_for,
)

ENDPOINT_TOL = 1e-11
MIDPOINT_TOL = 1e-10
SELF_DISTANCE_TOL = 1e-6
UNITARY_TOL = 1e-10


def test_distance_between_scalar_matrices(pd):
    assert d_bw(identity_pd(2), pd(4.0 * np.eye(2))) == pytest.approx(
        np.sqrt(2.0), abs=1e-12
    )
    # sqrt(2) (sqrt(6) - sqrt(2)) = sqrt(12) - 2
    assert d_bw(pd(2.0 * np.eye(2)), pd(6.0 * np.eye(2))) == pytest.approx(
        np.sqrt(12.0) - 2.0, abs=1e-12
    )


def test_distance_is_symmetric(rng):
    A = random_pd(rng, 2)
    B = random_pd(rng, 2)
    assert abs(d_bw(A, B) - d_bw(B, A)) <= ENDPOINT_TOL


def test_self_distance_is_roundoff_only(rng):
    # The radicand cancels to ~1e-14 and the square root amplifies that
    # to ~1e-7, so this cannot be pinned tighter.
    for _ in range(5):
        A = random_pd(rng, 2)
        assert d_bw(A, A) <= SELF_DISTANCE_TOL


def test_triangle_inequality_on_samples(rng):
    for _ in range(50):
        A = random_pd(rng, 2)
        B = random_pd(rng, 2)
        C = random_pd(rng, 2)
        slack = d_bw(A, B) + d_bw(B, C) - d_bw(A, C)
        assert slack >= -1e-10


def test_unitary_invariance(pd, rng):
    A = random_pd(rng, 2)
    B = random_pd(rng, 2)
    Q = random_unitary(rng, 2)
    rotated = d_bw(pd(Q @ A.mat @ Q.conj().T), pd(Q @ B.mat @ Q.conj().T))
    assert abs(rotated - d_bw(A, B)) <= UNITARY_TOL


def test_distance_rejects_dimension_mismatch(rng):
    with pytest.raises(DimMismatch):
        d_bw(random_pd(rng, 2), random_pd(rng, 3))


@pytest.mark.parametrize("kind", [GEODESIC_TRACE, GEODESIC_BW], ids=lambda k: k.tag)
def test_geodesic_endpoints(kind, rng):
    A = random_pd(rng, 2)
    B = random_pd(rng, 2)
    assert frobenius(geodesic(kind, A, B, 0.0).mat - A.mat) <= ENDPOINT_TOL
    assert frobenius(geodesic(kind, A, B, 1.0).mat - B.mat) <= ENDPOINT_TOL


def test_trace_midpoint_is_the_geometric_mean(rng):
    A = random_pd(rng, 2)
    B = random_pd(rng, 2)
    mid = geodesic(GEODESIC_TRACE, A, B, 0.5)
    assert frobenius(mid.mat - mean(GEOMETRIC, A, B).mat) <= MIDPOINT_TOL


def test_bw_midpoint_is_the_wasserstein_mean(rng):
    A = random_pd(rng, 2)
    B = random_pd(rng, 2)
    mid = geodesic(GEODESIC_BW, A, B, 0.5)
    assert frobenius(mid.mat - mean(WASSERSTEIN, A, B).mat) <= MIDPOINT_TOL


def test_bw_geodesic_scalar_oracle(pd):
    # Between 2I and 6I the curve is ((1-t) sqrt(2) + t sqrt(6))^2 I.
    got = geodesic(GEODESIC_BW, pd(2.0 * np.eye(2)), pd(6.0 * np.eye(2)), 0.5)
    want = ((np.sqrt(2.0) + np.sqrt(6.0)) / 2.0) ** 2
    assert frobenius(got.mat - want * np.eye(2)) <= 1e-12


def test_bw_geodesic_distance_is_additive(rng):
    A = random_pd(rng, 2)
    B = random_pd(rng, 2)
    total = d_bw(A, B)
    dev = check_geodesic_metric(A, B, (0.0, 0.25, 0.5, 0.75, 1.0))
    assert dev <= 1e-8 * max(total, 1e-8)


def test_geodesic_parameter_range(rng):
    A = random_pd(rng, 2)
    B = random_pd(rng, 2)
    for t in (-0.1, 1.1):
        with pytest.raises(DomainError):
            geodesic(GEODESIC_BW, A, B, t)


def test_partition_validation(rng):
    A = random_pd(rng, 2)
    B = random_pd(rng, 2)
    with pytest.raises(DomainError):
        check_geodesic_metric(A, B, (0.0,))
    with pytest.raises(DomainError):
        check_geodesic_metric(A, B, (0.1, 0.5, 1.0))
    with pytest.raises(DomainError):
        check_geodesic_metric(A, B, (0.0, 0.5, 0.9))


@settings(max_examples=40, deadline=None)
@given(
    a=st.floats(min_value=0.2, max_value=9.0),
    b=st.floats(min_value=0.2, max_value=9.0),
)
def test_scalar_distance_closed_form(a, b):
    from meanlab import HermitianMatrix, PdMatrix

    A = PdMatrix.certify(HermitianMatrix(a * np.eye(2, dtype=complex)))
    B = PdMatrix.certify(HermitianMatrix(b * np.eye(2, dtype=complex)))
    want = np.sqrt(2.0) * abs(np.sqrt(b) - np.sqrt(a))
    assert d_bw(A, B) == pytest.approx(want, abs=1e-7)
