"""Commutation probes linking operator means to centrality in M2.

The hypothesis under test is commutation of a mean with the arithmetic mean:
when it holds for every partner B, the fixed matrix A must be scalar. Each
probe draws random partners; each identity chain evaluates the algebraic
links of the corresponding proof as Frobenius gaps, so that on a commuting
pair every link vanishes and on a generic non-commuting pair every link is
visibly large. The chains report raw gaps and never enforce an
all-or-nothing verdict themselves: specially matched pairs satisfy the
hypothesis link while failing the commutator link, and that separation is
the point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .matcore import PdMatrix, _pow_arr, as_array
from .means import (
    P_MIN,
    TAG_HARMONIC,
    TAG_POWER,
    TAG_WASSERSTEIN,
    MeanKind,
    kubo_ando_power,
    mean,
)
from .sampling import random_pd, rng_for

# Separates true identities (observed <= 1e-11) from generic failure
# (observed >= 1e-3) by orders of magnitude.
COMM_TOL_SCALE = 1e-9

# Step for the first-order coefficient extraction inside the chains.
DERIVATIVE_STEP = 1e-4

GENERIC_GAP_FLOOR = 1e-3


def comm_tol(A: PdMatrix, B: PdMatrix) -> float:
    return COMM_TOL_SCALE * max(1.0, A.norm() * B.norm())


def commutator_norm(A, B) -> float:
    X = as_array(A)
    Y = as_array(B)
    return float(np.linalg.norm(X @ Y - Y @ X))


def _validate_probe_kind(kind: MeanKind) -> None:
    if kind.tag == TAG_WASSERSTEIN or kind.tag == TAG_HARMONIC:
        return
    if kind.tag == TAG_POWER:
        if kind.p is not None and -1.0 <= kind.p < 1.0:
            return
        raise DomainError(
            f"power must lie in [-1, 1) excluding 0, got {kind.p}; "
            "at p = 1 the hypothesis compares the arithmetic mean with itself"
        )
    raise DomainError(f"commutation probes support the Wasserstein mean and m_p, not {kind.label}")


def arith_mean_commutator(kind: MeanKind, A: PdMatrix, B: PdMatrix) -> float:
    """Frobenius norm of [(A+B)/2, mean(kind, A, B)]."""
    _validate_probe_kind(kind)
    M = mean(kind, A, B).mat
    arith = (A.mat + B.mat) / 2.0
    return float(np.linalg.norm(arith @ M - M @ arith))


@dataclass(frozen=True)
class CommutatorReport:
    """Single-pair verdict on the mean-vs-arithmetic commutation hypothesis."""

    pair_id: str
    kind_label: str
    commutator_norm: float
    tolerance: float

    @property
    def verdict(self) -> str:
        return "commutes" if self.commutator_norm <= self.tolerance else "does_not_commute"

    def to_json(self) -> dict:
        return {
            "pair_id": self.pair_id,
            "kind": self.kind_label,
            "commutator_norm": self.commutator_norm,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
        }


def commutator_report(kind: MeanKind, A: PdMatrix, B: PdMatrix, pair_id: str = "pair") -> CommutatorReport:
    return CommutatorReport(
        pair_id=pair_id,
        kind_label=kind.label,
        commutator_norm=arith_mean_commutator(kind, A, B),
        tolerance=comm_tol(A, B),
    )


@dataclass(frozen=True)
class ProbeReport:
    """Outcome of sampling the hypothesis over random partners."""

    kind_label: str
    samples: int
    seed: int
    failures: int
    worst_gap: float
    central: bool

    def to_json(self) -> dict:
        return {
            "kind": self.kind_label,
            "samples": self.samples,
            "seed": self.seed,
            "failures": self.failures,
            "worst_gap": self.worst_gap,
            "central": self.central,
        }


def probe_report(A: PdMatrix, kind: MeanKind, samples: int = 50, seed: int = 0) -> ProbeReport:
    _validate_probe_kind(kind)
    if samples < 1:
        raise DomainError("at least one sample is required")
    failures = 0
    worst = 0.0
    for i in range(samples):
        B = random_pd(rng_for(seed, i), A.dim)
        gap = arith_mean_commutator(kind, A, B)
        worst = max(worst, gap)
        if gap > comm_tol(A, B):
            failures += 1
    return ProbeReport(
        kind_label=kind.label,
        samples=samples,
        seed=seed,
        failures=failures,
        worst_gap=worst,
        central=failures == 0,
    )


def centrality_probe(A: PdMatrix, kind: MeanKind, samples: int = 50, seed: int = 0) -> bool:
    """True iff the commutation hypothesis held for every sampled partner.

    In M2 this is a centrality test: scalars pass, and any non-scalar A
    fails against some sampled partner.
    """
    return probe_report(A, kind, samples, seed).central


@dataclass(frozen=True)
class ChainReport:
    """Named Frobenius gaps for each link of a commutation identity chain.

    ``derivative_error`` measures the numerical first-order extraction that
    connects the substituted identity to the next link; it is None when the
    chain has no derivative step. Helpers classify gap profiles; callers
    choose which profile a given pair class must satisfy.
    """

    label: str
    case: str
    gaps: tuple[tuple[str, float], ...]
    derivative_error: float | None
    tolerance: float

    def all_small(self, tol: float | None = None) -> bool:
        t = self.tolerance if tol is None else tol
        return all(g <= t for _, g in self.gaps)

    def all_large(self, threshold: float = GENERIC_GAP_FLOOR) -> bool:
        return all(g > threshold for _, g in self.gaps)

    def gap(self, name: str) -> float:
        for n, g in self.gaps:
            if n == name:
                return g
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "case": self.case,
            "gaps": {n: g for n, g in self.gaps},
            "derivative_error": self.derivative_error,
            "tolerance": self.tolerance,
        }


def remark1_identity_chain(A: PdMatrix, B: PdMatrix) -> ChainReport:
    """Links of the Wasserstein-vs-arithmetic commutation argument.

    With S = (A^(1/2) B A^(1/2))^(1/2) and N = A^(-1/2) B A^(-1/2), the
    hypothesis is equivalent to

        (A + S)^2 (I + N) A = A (I + N) (A + S)^2,

    and the chain descends through [A^2, S] = 0 and [A^2, B] = 0 to
    [A, B] = 0. The derivative step substitutes t S and t^2 N, which is the
    polynomial form the substitution B -> t^2 B produces for t >= 0, and
    checks that the central difference at 0 recovers the t-linear
    coefficient S A^2 - A^2 S.
    """
    Aa = A.mat
    Ba = B.mat
    dim = Aa.shape[0]
    I = np.eye(dim)
    Ah = _pow_arr(Aa, 0.5)
    Aih = _pow_arr(Aa, -0.5)
    S = _pow_arr(Ah @ Ba @ Ah, 0.5)
    N = Aih @ Ba @ Aih
    A2 = Aa @ Aa

    def assembled(t: float) -> np.ndarray:
        P = Aa + t * S
        P2 = P @ P
        R = I + t * t * N
        return P2 @ R @ Aa - Aa @ R @ P2

    h = DERIVATIVE_STEP
    diff = (assembled(h) - assembled(-h)) / (2.0 * h)
    target = S @ A2 - A2 @ S
    derivative_error = float(np.linalg.norm(diff - target))

    gaps = (
        ("hypothesis-identity", float(np.linalg.norm(assembled(1.0)))),
        ("square-root-commutator", float(np.linalg.norm(A2 @ S - S @ A2))),
        ("square-commutator", float(np.linalg.norm(A2 @ Ba - Ba @ A2))),
        ("commutator", float(np.linalg.norm(Aa @ Ba - Ba @ Aa))),
    )
    return ChainReport(
        label="wasserstein-vs-arithmetic",
        case="wasserstein",
        gaps=gaps,
        derivative_error=derivative_error,
        tolerance=comm_tol(A, B),
    )


def _remark2_positive(A: PdMatrix, B: PdMatrix, p: float) -> ChainReport:
    Aa = A.mat
    Ba = B.mat
    I = np.eye(Aa.shape[0])
    Bp = _pow_arr(Ba, p)
    X = _pow_arr(I + Bp, 1.0 / p)
    hyp = arith_mean_commutator(kubo_ando_power(p), A, B)
    ident = float(np.linalg.norm(X @ Aa @ (I + Ba) - (I + Ba) @ Aa @ X))

    def F(e: float) -> np.ndarray:
        L = _pow_arr(I + e * Bp, 1.0 / p)
        R = I + e ** (1.0 / p) * Ba
        return L @ Aa @ R - R @ Aa @ L

    h = DERIVATIVE_STEP
    # One-sided stencil: the substituted parameter enters through e^(1/p),
    # which has no left neighborhood at 0.
    diff = (4.0 * F(h) - F(2.0 * h) - 3.0 * F(0.0)) / (2.0 * h)
    target = (Bp @ Aa - Aa @ Bp) / p
    derivative_error = float(np.linalg.norm(diff - target))

    gaps = (
        ("hypothesis-commutator", hyp),
        ("resolvent-identity", ident),
        ("power-commutator", float(np.linalg.norm(Aa @ Bp - Bp @ Aa))),
        ("commutator", float(np.linalg.norm(Aa @ Ba - Ba @ Aa))),
    )
    return ChainReport(
        label=f"power-vs-arithmetic[p={p:g}]",
        case="positive-power",
        gaps=gaps,
        derivative_error=derivative_error,
        tolerance=comm_tol(A, B),
    )


def _remark2_negative(A: PdMatrix, B: PdMatrix, p: float) -> ChainReport:
    q = -p
    Aa = A.mat
    Ba = B.mat
    I = np.eye(Aa.shape[0])
    Bq = _pow_arr(Ba, q)
    Bi = _pow_arr(Ba, -1.0)
    X = _pow_arr(I + Bq, -1.0 / q)
    Bp1 = _pow_arr(Ba, p + 1.0)
    hyp = arith_mean_commutator(kubo_ando_power(p), A, B)
    ident = float(np.linalg.norm(X @ Aa @ (I + Bi) - (I + Bi) @ Aa @ X))

    def F(e: float) -> np.ndarray:
        L = _pow_arr(I + e * Bq, -1.0 / q)
        R = e ** (1.0 / q) * I + Bi
        return L @ Aa @ R - R @ Aa @ L

    h = DERIVATIVE_STEP
    diff = (4.0 * F(h) - F(2.0 * h) - 3.0 * F(0.0)) / (2.0 * h)
    target = -(Bq @ Aa @ Bi - Bi @ Aa @ Bq) / q
    derivative_error = float(np.linalg.norm(diff - target))

    gaps = (
        ("hypothesis-commutator", hyp),
        ("resolvent-identity", ident),
        ("power-commutator", float(np.linalg.norm(Aa @ Bp1 - Bp1 @ Aa))),
        ("commutator", float(np.linalg.norm(Aa @ Ba - Ba @ Aa))),
    )
    return ChainReport(
        label=f"power-vs-arithmetic[p={p:g}]",
        case="negative-power",
        gaps=gaps,
        derivative_error=derivative_error,
        tolerance=comm_tol(A, B),
    )


def _remark2_harmonic(A: PdMatrix, B: PdMatrix) -> ChainReport:
    Aa = A.mat
    Ba = B.mat
    Ai = _pow_arr(Aa, -1.0)
    Bi = _pow_arr(Ba, -1.0)
    H = 2.0 * _pow_arr(Ai + Bi, -1.0)
    arith = (Aa + Ba) / 2.0
    gaps = (
        ("hypothesis-commutator", float(np.linalg.norm(H @ arith - arith @ H))),
        ("inverse-commutator", float(np.linalg.norm(Aa @ Bi - Bi @ Aa))),
        ("commutator", float(np.linalg.norm(Aa @ Ba - Ba @ Aa))),
    )
    return ChainReport(
        label="power-vs-arithmetic[p=-1]",
        case="harmonic",
        gaps=gaps,
        derivative_error=None,
        tolerance=comm_tol(A, B),
    )


def remark2_identity_chain(A: PdMatrix, B: PdMatrix, p: float) -> ChainReport:
    """Links of the power-vs-arithmetic commutation argument at exponent p.

    Three cases. For 0 < p < 1 the resolvent identity is
    (I + B^p)^(1/p) A (I + B) = (I + B) A (I + B^p)^(1/p) and the chain ends
    at [A, B^p] = 0. For -1 < p < 0 the inverted identity
    (I + B^q)^(-1/q) A (I + B^(-1)) with q = -p takes its place and the
    power link is [A, B^(p+1)] = 0. At p = -1 the harmonic mean commutator
    and [A, B^(-1)] = 0 carry the argument with no derivative step.

    The positive-case derivative is extracted one-sidedly; its accuracy
    degrades like h^(1/p - 1) times the commutator norm on non-commuting
    pairs, so the reported ``derivative_error`` is meaningful as a check on
    commuting pairs and as a raw magnitude elsewhere.
    """
    p = float(p)
    if not (-1.0 <= p < 1.0) or abs(p) < P_MIN:
        raise DomainError(f"exponent must lie in [-1, 1) with |p| >= {P_MIN}, got {p}")
    if p == -1.0:
        return _remark2_harmonic(A, B)
    if p > 0.0:
        return _remark2_positive(A, B, p)
    return _remark2_negative(A, B, p)
