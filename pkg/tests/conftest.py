"""Shared fixtures.

The eigh_oracle fixture wraps numpy.linalg.eigh so matcore's bespoke solver
is always compared against an independent route, never against itself.
"""

import numpy as np
import pytest

from meanlab import HermitianMatrix, PdMatrix, pauli_basis, rng_for


@pytest.fixture
def rng():
    return rng_for(1234)


@pytest.fixture
def pd():
    def make(arr) -> PdMatrix:
        H = HermitianMatrix(np.asarray(arr, dtype=complex))
        return PdMatrix.certify(H)

    return make


@pytest.fixture
def herm():
    def make(arr) -> HermitianMatrix:
        return HermitianMatrix(np.asarray(arr, dtype=complex))

    return make


@pytest.fixture
def pauli():
    return pauli_basis()


@pytest.fixture
def eigh_oracle():
    def solve(arr):
        return np.linalg.eigh(np.asarray(arr, dtype=complex))

    return solve
