"""Two-variable operator means on positive definite matrices.

The Kubo-Ando family is evaluated through its representing function: for an
operator monotone f with f(1) = 1,

    A sigma B = A^(1/2) f(A^(-1/2) B A^(-1/2)) A^(1/2),

and f is recovered from the mean by f(t) I = I sigma (t I). Built-in kinds
cover the arithmetic, harmonic and geometric means, the power family
m_p with representing function g_p(x) = ((1 + x^p)/2)^(1/p) for
0 < |p| <= 1, and two means that live outside the Kubo-Ando class: the
spectral geometric mean and the Wasserstein mean

    A sigma_W B = (A + B + A Q + Q A)/4,    Q = A^(-1) # B.

Every public evaluation returns a freshly certified :class:`PdMatrix`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DimMismatch, DomainError, NotKuboAndo
from .matcore import (
    HermitianMatrix,
    PdMatrix,
    _eig_array,
    _pow_arr,
    as_array,
    congruence,
    identity_pd,
    loewner_leq,
)
from .sampling import (
    random_invertible_hermitian,
    random_pd,
    rng_for,
)

# Power parameters are kept away from 0, where g_p degenerates.
P_MIN = 1e-6

# Tolerances for the axiom battery. Equality checks are relative to
# max(1, scale of the matrices involved).
AXIOM_EQ_TOL = 1e-10
AXIOM_NORMALIZATION_TOL = 1e-11
AXIOM_ORDER_TOL = 1e-10
VARIATIONAL_TOL = 1e-10

TAG_ARITHMETIC = "arithmetic"
TAG_HARMONIC = "harmonic"
TAG_GEOMETRIC = "geometric"
TAG_POWER = "kubo-ando-power"
TAG_CONVENTIONAL_POWER = "conventional-power"
TAG_SPECTRAL_GEOMETRIC = "spectral-geometric"
TAG_WASSERSTEIN = "wasserstein"
TAG_FROM_FUNCTION = "from-function"

KUBO_ANDO_TAGS = frozenset(
    {TAG_ARITHMETIC, TAG_HARMONIC, TAG_GEOMETRIC, TAG_POWER, TAG_FROM_FUNCTION}
)
NON_KUBO_ANDO_TAGS = frozenset(
    {TAG_CONVENTIONAL_POWER, TAG_SPECTRAL_GEOMETRIC, TAG_WASSERSTEIN}
)
ALL_TAGS = KUBO_ANDO_TAGS | NON_KUBO_ANDO_TAGS
_POWER_TAGS = frozenset({TAG_POWER, TAG_CONVENTIONAL_POWER})


@dataclass(frozen=True)
class RepresentingFunction:
    """A scalar function normalized by f(1) = 1, for from-function means."""

    fn: Callable[[float], float]
    name: str = "f"

    def __post_init__(self) -> None:
        try:
            at_one = float(self.fn(1.0))
        except Exception as exc:
            raise ValueError(f"representing function failed at 1: {exc}") from exc
        if not math.isfinite(at_one) or abs(at_one - 1.0) > 1e-12:
            raise ValueError(f"representing function must satisfy f(1) = 1, got {at_one!r}")

    def __call__(self, x: float) -> float:
        return float(self.fn(x))


@dataclass(frozen=True)
class MeanKind:
    """A mean selector: a tag plus the parameter the tag needs.

    Power tags carry ``p`` with P_MIN <= |p| <= 1; the from-function tag
    carries a :class:`RepresentingFunction`. Other tags take nothing.
    """

    tag: str
    p: float | None = None
    f: RepresentingFunction | None = None

    def __post_init__(self) -> None:
        if self.tag not in ALL_TAGS:
            raise DomainError(f"unknown mean tag {self.tag!r}")
        if self.tag in _POWER_TAGS:
            if self.p is None:
                raise DomainError(f"{self.tag} requires a power parameter")
            p = float(self.p)
            if not (P_MIN <= abs(p) <= 1.0):
                raise DomainError(
                    f"power parameter must satisfy {P_MIN} <= |p| <= 1, got {p}"
                )
            object.__setattr__(self, "p", p)
        elif self.p is not None:
            raise DomainError(f"{self.tag} takes no power parameter")
        if self.tag == TAG_FROM_FUNCTION:
            if not isinstance(self.f, RepresentingFunction):
                raise DomainError("from-function means require a RepresentingFunction")
        elif self.f is not None:
            raise DomainError(f"{self.tag} takes no representing function")

    @property
    def label(self) -> str:
        if self.tag in _POWER_TAGS:
            return f"{self.tag}(p={self.p:g})"
        if self.tag == TAG_FROM_FUNCTION:
            return f"{self.tag}({self.f.name})"
        return self.tag

    @property
    def is_kubo_ando(self) -> bool:
        return self.tag in KUBO_ANDO_TAGS


ARITHMETIC = MeanKind(TAG_ARITHMETIC)
HARMONIC = MeanKind(TAG_HARMONIC)
GEOMETRIC = MeanKind(TAG_GEOMETRIC)
SPECTRAL_GEOMETRIC = MeanKind(TAG_SPECTRAL_GEOMETRIC)
WASSERSTEIN = MeanKind(TAG_WASSERSTEIN)


def kubo_ando_power(p: float) -> MeanKind:
    """The mean with representing function ((1 + x^p)/2)^(1/p)."""
    return MeanKind(TAG_POWER, p=float(p))


def conventional_power(p: float) -> MeanKind:
    """The entrywise-spectral power mean ((A^p + B^p)/2)^(1/p)."""
    return MeanKind(TAG_CONVENTIONAL_POWER, p=float(p))


def from_function(f: RepresentingFunction | Callable[[float], float], name: str = "f") -> MeanKind:
    if not isinstance(f, RepresentingFunction):
        f = RepresentingFunction(f, name)
    return MeanKind(TAG_FROM_FUNCTION, f=f)


def _geometric_arr(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    Xh = _pow_arr(X, 0.5)
    Xih = _pow_arr(X, -0.5)
    inner = Xih @ Y @ Xih
    inner = (inner + inner.conj().T) / 2.0
    return Xh @ _pow_arr(inner, 0.5) @ Xh


def _normalized_inner(Aarr: np.ndarray, Barr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    Ah = _pow_arr(Aarr, 0.5)
    Aih = _pow_arr(Aarr, -0.5)
    N = Aih @ Barr @ Aih
    return Ah, (N + N.conj().T) / 2.0


def _mean_arr(kind: MeanKind, Aarr: np.ndarray, Barr: np.ndarray) -> np.ndarray:
    tag = kind.tag
    if tag == TAG_ARITHMETIC:
        return (Aarr + Barr) / 2.0
    if tag == TAG_HARMONIC:
        return _pow_arr((_pow_arr(Aarr, -1.0) + _pow_arr(Barr, -1.0)) / 2.0, -1.0)
    if tag == TAG_GEOMETRIC:
        return _geometric_arr(Aarr, Barr)
    if tag == TAG_POWER:
        p = kind.p
        Ah, N = _normalized_inner(Aarr, Barr)
        inner = (np.eye(len(N)) + _pow_arr(N, p)) / 2.0
        inner = (inner + inner.conj().T) / 2.0
        return Ah @ _pow_arr(inner, 1.0 / p) @ Ah
    if tag == TAG_CONVENTIONAL_POWER:
        p = kind.p
        S = (_pow_arr(Aarr, p) + _pow_arr(Barr, p)) / 2.0
        return _pow_arr((S + S.conj().T) / 2.0, 1.0 / p)
    if tag == TAG_SPECTRAL_GEOMETRIC:
        Q = _geometric_arr(_pow_arr(Aarr, -1.0), Barr)
        R = _pow_arr((Q + Q.conj().T) / 2.0, 0.5)
        return R @ Aarr @ R
    if tag == TAG_WASSERSTEIN:
        Q = _geometric_arr(_pow_arr(Aarr, -1.0), Barr)
        AQ = Aarr @ Q
        return (Aarr + Barr + AQ + AQ.conj().T) / 4.0
    if tag == TAG_FROM_FUNCTION:
        Ah, N = _normalized_inner(Aarr, Barr)
        w, V = _eig_array(N)
        vals = np.empty(len(w))
        for i, lam in enumerate(w):
            try:
                y = float(kind.f(float(lam)))
            except Exception as exc:
                raise DomainError(
                    f"representing function failed at eigenvalue {lam!r}: {exc}"
                ) from exc
            if not math.isfinite(y) or y <= 0.0:
                raise DomainError(
                    f"representing function must stay positive, got {y!r} at {lam!r}"
                )
            vals[i] = y
        return Ah @ ((V * vals) @ V.conj().T) @ Ah
    raise DomainError(f"unknown mean tag {tag!r}")


def mean(kind: MeanKind, A: PdMatrix, B: PdMatrix) -> PdMatrix:
    """Evaluate the selected mean at (A, B).

    Parameters
    ----------
    kind : MeanKind
    A, B : PdMatrix
        Must share a dimension.

    Returns
    -------
    PdMatrix
        The result is re-certified positive definite; a certification failure
        here would indicate a genuine numerical breakdown, not a soft warning.
    """
    if A.dim != B.dim:
        raise DimMismatch(f"operands have dimensions {A.dim} and {B.dim}")
    out = _mean_arr(kind, A.mat, B.mat)
    return PdMatrix.certify(HermitianMatrix._wrap(out))


def wasserstein_alt(A: PdMatrix, B: PdMatrix) -> PdMatrix:
    """The fixed-point form (A + B + T + T*)/4 with T = A^(-1/2)(A^(1/2) B A^(1/2))^(1/2) A^(1/2).

    Agrees with the Q-form of the Wasserstein mean; kept separate so the two
    routes can be compared against each other.
    """
    if A.dim != B.dim:
        raise DimMismatch(f"operands have dimensions {A.dim} and {B.dim}")
    Ah = _pow_arr(A.mat, 0.5)
    Aih = _pow_arr(A.mat, -0.5)
    S = Ah @ B.mat @ Ah
    S = _pow_arr((S + S.conj().T) / 2.0, 0.5)
    T = Aih @ S @ Ah
    out = (A.mat + B.mat + T + T.conj().T) / 4.0
    return PdMatrix.certify(HermitianMatrix._wrap(out))


def kubo_ando_from_function(f, A: PdMatrix, B: PdMatrix, name: str = "f") -> PdMatrix:
    """Evaluate the mean induced by a representing function directly."""
    return mean(from_function(f, name), A, B)


def representing_function_of(kind: MeanKind, t: float) -> float:
    """Recover f(t) from the mean via f(t) I = I sigma (t I).

    Raises NotKuboAndo for kinds outside the Kubo-Ando class and DomainError
    for t <= 0.
    """
    if kind.tag in NON_KUBO_ANDO_TAGS:
        raise NotKuboAndo(f"{kind.label} is not a Kubo-Ando mean")
    t = float(t)
    if not (t > 0.0) or not math.isfinite(t):
        raise DomainError(f"representing functions live on t > 0, got {t}")
    I2 = identity_pd(2)
    tI = PdMatrix(HermitianMatrix._wrap(t * np.eye(2, dtype=np.complex128)), t)
    M = mean(kind, I2, tI)
    return float(M.mat[0, 0].real)


@dataclass(frozen=True)
class AxiomCheck:
    """Outcome of one axiom over the sampled battery."""

    axiom: str
    samples: int
    failures: int
    worst_violation: float

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {
            "axiom": self.axiom,
            "samples": self.samples,
            "failures": self.failures,
            "worst_violation": self.worst_violation,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class AxiomReport:
    """Battery outcome for one mean kind at one dimension."""

    kind_label: str
    dim: int
    seed: int
    checks: tuple[AxiomCheck, ...] = field(default=())

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "kind": self.kind_label,
            "dim": self.dim,
            "seed": self.seed,
            "all_pass": self.all_pass,
            "checks": [c.to_json() for c in self.checks],
        }


def _rel_gap(X: np.ndarray, Y: np.ndarray) -> float:
    return float(np.linalg.norm(X - Y)) / max(1.0, float(np.linalg.norm(Y)))


def _order_violation(M1: PdMatrix, M2: PdMatrix) -> float:
    # How far M1 <= M2 fails, as the most negative eigenvalue of M2 - M1.
    D = M2.mat - M1.mat
    w, _ = _eig_array((D + D.conj().T) / 2.0)
    return max(0.0, -float(w[0]))


def check_kubo_ando_axioms(
    kind: MeanKind,
    samples: int = 50,
    rng_seed: int = 0,
    dim: int = 2,
) -> AxiomReport:
    """Sampled test of the four defining axioms.

    For each draw: (1) normalization I sigma I = I; (2) joint monotonicity,
    A <= B and C <= D imply A sigma C <= B sigma D; (3) the transformer
    property as an equality T (A sigma B) T* = (T A T*) sigma (T B T*) for an
    invertible Hermitian T, alternating with a positive definite T;
    (4) continuity from above along A + I/k for k = 1, 2, 4, ..., 32, checked
    as Loewner-monotone decrease plus norm convergence consistent with a 1/k
    envelope.

    Each axiom failure counts once per sample; worst violations are recorded
    in absolute Frobenius or eigenvalue units.
    """
    counts = {name: 0 for name in ("normalization", "monotonicity", "transformer", "continuity")}
    worsts = {name: 0.0 for name in counts}
    I_pd = identity_pd(dim)
    ks = (1, 2, 4, 8, 16, 32)
    for i in range(int(samples)):
        rng = rng_for(rng_seed, i)

        M = mean(kind, I_pd, I_pd)
        v = float(np.linalg.norm(M.mat - np.eye(dim)))
        worsts["normalization"] = max(worsts["normalization"], v)
        if v > AXIOM_NORMALIZATION_TOL:
            counts["normalization"] += 1

        A = random_pd(rng, dim)
        C = random_pd(rng, dim)
        G1 = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        G2 = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        B = PdMatrix.certify(HermitianMatrix._wrap(A.mat + G1.conj().T @ G1 + 0.05 * np.eye(dim)))
        D = PdMatrix.certify(HermitianMatrix._wrap(C.mat + G2.conj().T @ G2 + 0.05 * np.eye(dim)))
        lo = mean(kind, A, C)
        hi = mean(kind, B, D)
        v = _order_violation(lo, hi)
        worsts["monotonicity"] = max(worsts["monotonicity"], v)
        if not loewner_leq(lo.matrix, hi.matrix, AXIOM_ORDER_TOL * max(1.0, hi.norm())):
            counts["monotonicity"] += 1

        if i % 2 == 0:
            T = random_invertible_hermitian(rng, dim).mat
        else:
            T = random_pd(rng, dim).mat
        lhs = congruence(T, lo.matrix)
        rhs = mean(
            kind,
            PdMatrix.certify(congruence(T, A.matrix)),
            PdMatrix.certify(congruence(T, C.matrix)),
        )
        v = _rel_gap(lhs.mat, rhs.mat)
        worsts["transformer"] = max(worsts["transformer"], v)
        if v > AXIOM_EQ_TOL:
            counts["transformer"] += 1

        shifts = [
            mean(
                kind,
                PdMatrix(HermitianMatrix._wrap(A.mat + np.eye(dim) / k), A.min_eigenvalue),
                PdMatrix(HermitianMatrix._wrap(C.mat + np.eye(dim) / k), C.min_eigenvalue),
            )
            for k in ks
        ]
        limit = lo
        mono_bad = 0.0
        for j in range(len(ks) - 1):
            mono_bad = max(mono_bad, _order_violation(shifts[j + 1], shifts[j]))
        dists = [float(np.linalg.norm(S.mat - limit.mat)) for S in shifts]
        envelope = 10.0 * max(1.0, limit.norm()) / ks[-1]
        converged = (
            dists[-1] <= envelope
            and dists[-1] <= dists[0] / 4.0 + AXIOM_EQ_TOL
        )
        v = max(mono_bad, 0.0 if converged else dists[-1])
        worsts["continuity"] = max(worsts["continuity"], v)
        if mono_bad > AXIOM_ORDER_TOL * max(1.0, shifts[0].norm()) or not converged:
            counts["continuity"] += 1

    checks = tuple(
        AxiomCheck(name, int(samples), counts[name], worsts[name]) for name in counts
    )
    return AxiomReport(kind.label, dim, int(rng_seed), checks)


def ando_variational_certificate(A: PdMatrix, B: PdMatrix, X) -> bool:
    """Whether the block matrix [[A, X], [X, B]] is positive semidefinite.

    This is the feasibility side of the variational description of the
    geometric mean: A # B is the largest Hermitian X passing this test.
    """
    if A.dim != B.dim:
        raise DimMismatch(f"operands have dimensions {A.dim} and {B.dim}")
    Xarr = as_array(X)
    if Xarr.shape != A.mat.shape:
        raise DimMismatch(f"block X has shape {Xarr.shape}, expected {A.mat.shape}")
    n = A.dim
    block = np.empty((2 * n, 2 * n), dtype=np.complex128)
    block[:n, :n] = A.mat
    block[:n, n:] = Xarr
    block[n:, :n] = Xarr.conj().T
    block[n:, n:] = B.mat
    w, _ = _eig_array((block + block.conj().T) / 2.0)
    return float(w[0]) >= -VARIATIONAL_TOL * max(1.0, float(np.linalg.norm(block)))
