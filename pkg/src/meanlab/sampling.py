"""Seeded random matrix generators used by the check batteries."""

from __future__ import annotations

import numpy as np

from .matcore import HermitianMatrix, PdMatrix

# Random PD draws get at least this much identity added, keeping condition
# numbers benign across large sample counts.
PD_FLOOR = 0.1


def rng_for(seed, *stream) -> np.random.Generator:
    """Independent generator for (seed, stream...) without sequential coupling."""
    return np.random.default_rng(np.random.SeedSequence((int(seed),) + tuple(int(s) for s in stream)))


def random_complex(rng: np.random.Generator, dim: int) -> np.ndarray:
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


def random_hermitian(rng: np.random.Generator, dim: int) -> HermitianMatrix:
    M = random_complex(rng, dim)
    return HermitianMatrix._wrap((M + M.conj().T) / 2.0)


def random_pd(rng: np.random.Generator, dim: int, floor: float = PD_FLOOR) -> PdMatrix:
    """Draw M*M + floor*I, certified."""
    M = random_complex(rng, dim)
    G = M.conj().T @ M + floor * np.eye(dim)
    return PdMatrix.certify(HermitianMatrix._wrap(G))


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-ish unitary from the QR of a complex Gaussian matrix."""
    Q, R = np.linalg.qr(random_complex(rng, dim))
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_invertible_hermitian(rng: np.random.Generator, dim: int) -> HermitianMatrix:
    """Hermitian with spectrum pushed away from zero on both sides."""
    H = random_hermitian(rng, dim).mat
    from .matcore import _eig_array

    w, V = _eig_array(H)
    signs = np.where(w >= 0.0, 1.0, -1.0)
    shifted = w + signs * 0.2
    return HermitianMatrix._wrap((V * shifted) @ V.conj().T)
