"""Hermitian and positive definite matrix core.

Value types (:class:`HermitianMatrix`, :class:`PdMatrix`, :class:`Spectrum`)
are frozen dataclasses wrapping complex128 arrays. The eigensolver is local
to the package: a closed form for 2x2 blocks and a cyclic complex Jacobi
iteration built on those blocks for larger sizes. Spectral functions, powers,
congruences and the Loewner order test all route through it.

Matrices enter as anything ``np.asarray`` accepts; nested lists work. Arrays
stored on value types are non-writeable copies, so instances can be shared
freely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimMismatch,
    DomainError,
    PositivityError,
    SingularError,
)

# Relative asymmetry above this rejects construction outright instead of
# silently symmetrizing away real data.
HERMITICITY_RTOL = 1e-8

# lambda_min must exceed PD_TOLERANCE * max(1, ||A||_F) to certify.
PD_TOLERANCE = 1e-12

# Loewner comparisons tolerate eigenvalues this far below zero (scaled).
LOEWNER_TOL = 1e-10

# Jacobi sweep budget and off-diagonal stopping threshold (relative to the
# initial Frobenius norm).
JACOBI_MAX_SWEEPS = 100
JACOBI_OFF_RTOL = 1e-14

# |p * log(lambda)| beyond this would overflow float64 in mpow.
_POW_LOG_LIMIT = 700.0


def _to_complex_array(entries) -> np.ndarray:
    arr = np.asarray(entries, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise ValueError("matrix entries must be finite")
    return arr


def frobenius(entries) -> float:
    """Frobenius norm of an array or wrapped matrix."""
    return float(np.linalg.norm(as_array(entries)))


def as_array(X) -> np.ndarray:
    """Unwrap a HermitianMatrix or PdMatrix to its ndarray, pass arrays through."""
    if isinstance(X, PdMatrix):
        return X.matrix.mat
    if isinstance(X, HermitianMatrix):
        return X.mat
    return np.asarray(X, dtype=np.complex128)


@dataclass(frozen=True)
class HermitianMatrix:
    """A validated Hermitian matrix.

    Construction symmetrizes to (M + M*)/2 after checking that the input was
    already Hermitian to within ``HERMITICITY_RTOL`` relative to
    max(1, ||M||_F). The stored array is complex128 and non-writeable.
    """

    mat: np.ndarray

    def __post_init__(self) -> None:
        arr = _to_complex_array(self.mat)
        asym = np.linalg.norm(arr - arr.conj().T)
        if asym > HERMITICITY_RTOL * max(1.0, np.linalg.norm(arr)):
            raise ValueError(
                f"matrix is not Hermitian: asymmetry {asym:.3e} exceeds tolerance"
            )
        sym = (arr + arr.conj().T) / 2.0
        sym.setflags(write=False)
        object.__setattr__(self, "mat", sym)

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "HermitianMatrix":
        # Fast path for arrays produced internally; symmetrizes without the
        # asymmetry check.
        sym = (arr + arr.conj().T) / 2.0
        sym.setflags(write=False)
        out = object.__new__(cls)
        object.__setattr__(out, "mat", sym)
        return out

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.mat).real)

    def norm(self) -> float:
        return float(np.linalg.norm(self.mat))

    def __add__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        return HermitianMatrix._wrap(self.mat + as_array(other))

    def __sub__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        return HermitianMatrix._wrap(self.mat - as_array(other))

    def __rmul__(self, scalar: float) -> "HermitianMatrix":
        return HermitianMatrix._wrap(float(scalar) * self.mat)


def pd_tolerance(entries) -> float:
    """Certification threshold for the matrix at hand."""
    return PD_TOLERANCE * max(1.0, frobenius(entries))


@dataclass(frozen=True)
class PdMatrix:
    """A Hermitian matrix certified positive definite.

    ``min_eigenvalue`` is the certificate; construction re-checks it against
    the scaled tolerance, so a PdMatrix in hand is always safely invertible.
    Use :meth:`certify` to go from a plain matrix to a certified one.
    """

    matrix: HermitianMatrix
    min_eigenvalue: float

    def __post_init__(self) -> None:
        if not isinstance(self.matrix, HermitianMatrix):
            object.__setattr__(self, "matrix", HermitianMatrix(self.matrix))
        lam = float(self.min_eigenvalue)
        if not math.isfinite(lam) or lam <= pd_tolerance(self.matrix):
            raise PositivityError(
                f"minimum eigenvalue {lam:.3e} does not clear the positivity tolerance"
            )
        object.__setattr__(self, "min_eigenvalue", lam)

    @classmethod
    def certify(cls, matrix) -> "PdMatrix":
        """Diagonalize and certify, raising PositivityError when not PD."""
        H = matrix if isinstance(matrix, HermitianMatrix) else HermitianMatrix(matrix)
        w, _ = _eig_array(H.mat)
        return cls(H, float(w[0]))

    @property
    def mat(self) -> np.ndarray:
        return self.matrix.mat

    @property
    def dim(self) -> int:
        return self.matrix.dim

    def trace(self) -> float:
        return self.matrix.trace()

    def norm(self) -> float:
        return self.matrix.norm()


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in ascending order with matching orthonormal columns."""

    eigenvalues: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        V = self.vectors
        return (V * self.eigenvalues) @ V.conj().T


def identity_pd(dim: int) -> PdMatrix:
    """The identity, pre-certified."""
    return PdMatrix(HermitianMatrix._wrap(np.eye(dim, dtype=np.complex128)), 1.0)


def _canonical_phases(V: np.ndarray) -> np.ndarray:
    # Deterministic eigenvector phases: the largest-modulus entry of each
    # column is made real and positive.
    for j in range(V.shape[1]):
        col = V[:, j]
        k = int(np.argmax(np.abs(col)))
        piv = col[k]
        mag = abs(piv)
        if mag > 0.0:
            V[:, j] = col * (piv.conjugate() / mag)
    return V


def _eig2_closed(arr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Closed form for the 2x2 Hermitian case. With m the mean of the diagonal
    # and r = hypot((a-d)/2, |b|), the eigenvalues are m -+ r. The eigenvector
    # for the upper eigenvalue is (b, lam2 - a); lam2 - a >= 0 always, so the
    # pair (b, lam2 - a) only degenerates when b = 0, which is handled apart.
    a = arr[0, 0].real
    d = arr[1, 1].real
    b = arr[0, 1]
    babs = abs(b)
    if babs == 0.0:
        V = np.eye(2, dtype=np.complex128)
        if a <= d:
            return np.array([a, d]), V
        return np.array([d, a]), V[:, ::-1].copy()
    half_gap = (a - d) / 2.0
    m = (a + d) / 2.0
    r = math.hypot(half_gap, babs)
    lam = np.array([m - r, m + r])
    t = lam[1] - a
    nrm = math.hypot(babs, t)
    V = np.empty((2, 2), dtype=np.complex128)
    V[0, 0] = -t / nrm
    V[1, 0] = b.conjugate() / nrm
    V[0, 1] = b / nrm
    V[1, 1] = t / nrm
    return lam, _canonical_phases(V)


def _eig_jacobi(arr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Cyclic complex Jacobi: sweep all upper pairs, diagonalize each embedded
    # 2x2 block exactly, accumulate the rotations. Quadratic convergence makes
    # the 100 sweep budget generous for the sizes this package touches.
    A = arr.astype(np.complex128, copy=True)
    n = A.shape[0]
    fro = np.linalg.norm(A)
    V = np.eye(n, dtype=np.complex128)
    if fro == 0.0:
        return np.zeros(n), V
    thresh = JACOBI_OFF_RTOL * fro
    skip = thresh / n
    for _ in range(JACOBI_MAX_SWEEPS):
        # Summed directly: the difference ||A||^2 - ||diag||^2 cancels
        # catastrophically once the off-diagonal mass nears machine epsilon.
        off = float(np.linalg.norm(A - np.diag(np.diag(A))))
        if off <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(A[p, q]) <= skip:
                    continue
                block = np.array(
                    [[A[p, p].real, A[p, q]], [A[p, q].conjugate(), A[q, q].real]],
                    dtype=np.complex128,
                )
                _, W = _eig2_closed(block)
                cols = A[:, [p, q]] @ W
                A[:, p] = cols[:, 0]
                A[:, q] = cols[:, 1]
                rows = W.conj().T @ A[[p, q], :]
                A[p, :] = rows[0]
                A[q, :] = rows[1]
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                cols = V[:, [p, q]] @ W
                V[:, p] = cols[:, 0]
                V[:, q] = cols[:, 1]
    else:
        raise ConvergenceFailure(
            f"Jacobi did not reach the off-diagonal threshold in {JACOBI_MAX_SWEEPS} sweeps"
        )
    w = np.diag(A).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], _canonical_phases(V[:, order])


def _eig_array(arr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = arr.shape[0]
    if n == 1:
        return np.array([arr[0, 0].real]), np.ones((1, 1), dtype=np.complex128)
    if n == 2:
        return _eig2_closed(arr)
    return _eig_jacobi(arr)


def eig(X) -> Spectrum:
    """Full spectral decomposition of a Hermitian matrix.

    Parameters
    ----------
    X : HermitianMatrix, PdMatrix or array_like
        Raw arrays are validated (and symmetrized) first.

    Returns
    -------
    Spectrum
        Eigenvalues ascending; ``vectors`` columns orthonormal with
        deterministic phases.
    """
    if isinstance(X, PdMatrix):
        arr = X.matrix.mat
    elif isinstance(X, HermitianMatrix):
        arr = X.mat
    else:
        arr = HermitianMatrix(X).mat
    w, V = _eig_array(arr)
    return Spectrum(w, V)


def _apply_spectral(arr: np.ndarray, fvals: np.ndarray, V: np.ndarray) -> np.ndarray:
    return (V * fvals) @ V.conj().T


def func_calc(A: PdMatrix, f: Callable[[float], float]) -> HermitianMatrix:
    """Spectral calculus f(A) for a real scalar function.

    ``f`` is evaluated once per eigenvalue. Any exception it raises, or any
    non-finite value it returns, surfaces as DomainError.
    """
    w, V = _eig_array(A.mat)
    vals = np.empty(len(w))
    for i, lam in enumerate(w):
        try:
            y = float(f(float(lam)))
        except Exception as exc:
            raise DomainError(f"scalar function failed at eigenvalue {lam!r}: {exc}") from exc
        if not math.isfinite(y):
            raise DomainError(f"scalar function returned non-finite value at {lam!r}")
        vals[i] = y
    return HermitianMatrix._wrap(_apply_spectral(A.mat, vals, V))


def _pow_arr(arr: np.ndarray, p: float) -> np.ndarray:
    # Fractional power of Hermitian data assumed positive definite; raises
    # when the spectrum computed here says otherwise.
    w, V = _eig_array(arr)
    lam_min = float(w[0])
    if lam_min <= 0.0 and (p != round(p) or p < 0.0):
        raise PositivityError(
            f"power {p} of a matrix with minimum eigenvalue {lam_min:.3e}"
        )
    for lam in (w[0], w[-1]):
        if lam > 0.0 and abs(p * math.log(lam)) > _POW_LOG_LIMIT:
            raise DomainError(f"power {p} overflows at eigenvalue {lam:.3e}")
    return _apply_spectral(arr, np.power(w, p), V)


def mpow(A: PdMatrix, p: float) -> PdMatrix:
    """Matrix power A**p through the spectral decomposition.

    The result carries the exact certificate min(lambda_i ** p); DomainError
    fires before float64 overflow can.
    """
    p = float(p)
    w, V = _eig_array(A.mat)
    if float(w[0]) <= 0.0:
        raise PositivityError(
            f"matrix power needs a positive spectrum, found {float(w[0]):.3e}"
        )
    for lam in (float(w[0]), float(w[-1])):
        if abs(p * math.log(lam)) > _POW_LOG_LIMIT:
            raise DomainError(f"power {p} overflows at eigenvalue {lam:.3e}")
    vals = np.power(w, p)
    H = HermitianMatrix._wrap(_apply_spectral(A.mat, vals, V))
    return PdMatrix(H, float(vals.min()))


def congruence(C, A) -> HermitianMatrix:
    """The transform C A C*.

    ``C`` must be numerically invertible: sigma_min > 1e-12 sigma_max,
    checked on the Gram matrix C*C. SingularError otherwise.
    """
    Carr = as_array(C)
    Aarr = as_array(A)
    if Carr.shape != Aarr.shape:
        raise DimMismatch(
            f"congruence shapes differ: {Carr.shape} vs {Aarr.shape}"
        )
    gram = Carr.conj().T @ Carr
    w, _ = _eig_array((gram + gram.conj().T) / 2.0)
    if float(w[0]) <= (1e-12) ** 2 * float(w[-1]):
        raise SingularError("congruence transform is numerically singular")
    return HermitianMatrix._wrap(Carr @ Aarr @ Carr.conj().T)


def loewner_leq(A, B, tol: float | None = None) -> bool:
    """Test A <= B in the Loewner order.

    The default tolerance is LOEWNER_TOL scaled by max(1, ||B - A||_F); the
    difference may dip that far below zero and still count.
    """
    D = as_array(B) - as_array(A)
    D = (D + D.conj().T) / 2.0
    if tol is None:
        tol = LOEWNER_TOL * max(1.0, float(np.linalg.norm(D)))
    w, _ = _eig_array(D)
    return float(w[0]) >= -tol


def pauli_basis(dim: int = 2) -> tuple[HermitianMatrix, HermitianMatrix, HermitianMatrix]:
    """The pair sigma_z, sigma_x and the symmetric unitary (sigma_z + sigma_x)/sqrt(2)."""
    if dim != 2:
        raise DimMismatch("the Pauli basis is two dimensional")
    sz = HermitianMatrix._wrap(np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128))
    sx = HermitianMatrix._wrap(np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128))
    u = HermitianMatrix._wrap((sz.mat + sx.mat) / math.sqrt(2.0))
    return sz, sx, u


def matrix_to_json(X) -> dict:
    """JSON payload {dim, re, im} for a matrix."""
    arr = as_array(X)
    return {
        "dim": int(arr.shape[0]),
        "re": arr.real.tolist(),
        "im": arr.imag.tolist(),
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    """Rebuild a complex matrix from {dim, re, im}; ValueError on bad payloads."""
    if not isinstance(obj, dict):
        raise ValueError("matrix payload must be a JSON object")
    try:
        dim = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=np.float64)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix payload: {exc}") from exc
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise ValueError(
            f"matrix payload shapes {re.shape}, {im.shape} do not match dim {dim}"
        )
    arr = re + 1j * im
    if not np.all(np.isfinite(re)) or not np.all(np.isfinite(im)):
        raise ValueError("matrix payload entries must be finite")
    return arr
