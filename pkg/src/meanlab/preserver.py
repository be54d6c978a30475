"""Mean-preserving scalar functionals on the positive definite cone of M2.

A preserver for a mean sigma is a positive functional f with
f(A sigma B) = f(A) sigma f(B), the right side read as the scalar mean. The
machinery here covers the transform phi = (.)^p o f o (.)^(1/p), the affine
model phi(tI + sG) = c_I t + c_G s + (1 - c_I) on the maximal Abelian
subalgebra spanned by I and a traceless self-adjoint unitary G, residual
evaluation, and the small linear solve that extracts the constraints the
perturbed pair (I + eps sigma_z, I + eps sigma_x) imposes on
(c_I, c_sigma_z, c_sigma_x, c_U).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimMismatch, DomainError, NotInCone
from .expansion import DEFAULT_GRID, _coerce_grid, _poly_fit, pauli_pair
from .matcore import HermitianMatrix, PdMatrix, as_array, mpow, pauli_basis
from .means import (
    P_MIN,
    TAG_ARITHMETIC,
    TAG_POWER,
    TAG_WASSERSTEIN,
    MeanKind,
    mean,
)
from .report import CheckItem, CheckReport

# Entrywise tolerance when matching a derived direction to a stored one.
DIRECTION_MATCH_TOL = 1e-9

# A direction key must be traceless and square to I within this.
DIRECTION_SHAPE_TOL = 1e-9

# |c_I| below this counts as forced to zero; also the row-vanishing threshold.
C_I_FORCE_TOL = 1e-6

FIRST_ORDER_TOL = 1e-6
SECOND_ORDER_TOL = 1e-4
NULLSPACE_RTOL = 1e-9

KAPPA_EXPECTED = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class ScalarFunctional:
    """A positive scalar functional on PD matrices, with a display label."""

    fn: Callable[[PdMatrix], float]
    label: str = "f"

    def __call__(self, A: PdMatrix) -> float:
        y = float(self.fn(A))
        if not math.isfinite(y) or y <= 0.0:
            raise DomainError(f"functional {self.label} returned non-positive {y!r}")
        return y


def constant_functional(c: float) -> ScalarFunctional:
    c = float(c)
    if not (c > 0.0) or not math.isfinite(c):
        raise DomainError(f"constant must be positive, got {c}")
    return ScalarFunctional(lambda A: c, f"const[{c:g}]")


def linear_functional(W: HermitianMatrix) -> ScalarFunctional:
    """f(A) = tr(W A); positive on the cone when W is PSD and nonzero."""
    Warr = as_array(W)
    return ScalarFunctional(lambda A: float(np.trace(Warr @ A.mat).real), "linear[tr(W.)]")


def trace_power_functional(p: float) -> ScalarFunctional:
    """f(A) = (tr(A^p)/dim)^(1/p); at p = 1/2 on M2 this is (tr(A^(1/2))/2)^2."""
    p = float(p)
    if not (P_MIN <= abs(p) <= 1.0):
        raise DomainError(f"power must satisfy {P_MIN} <= |p| <= 1, got {p}")
    return ScalarFunctional(
        lambda A: (float(np.trace(mpow(A, p).mat).real) / A.dim) ** (1.0 / p),
        f"trace-power[p={p:g}]",
    )


def phi_of(f: ScalarFunctional, p: float) -> ScalarFunctional:
    """The transform phi(X) = f(X^(1/p))^p.

    Composing back, (.)^(1/p) o phi o (.)^p recovers f on the cone.
    """
    p = float(p)
    if not (P_MIN <= abs(p) <= 1.0):
        raise DomainError(f"power must satisfy {P_MIN} <= |p| <= 1, got {p}")
    return ScalarFunctional(
        lambda X: f(mpow(X, 1.0 / p)) ** p,
        f"phi[p={p:g}]({f.label})",
    )


def canonical_direction(G) -> HermitianMatrix:
    """Validate and sign-normalize a traceless self-adjoint unitary direction.

    The first nonzero entry in row-major order (real part inspected before
    imaginary) is made positive, so G and -G share one canonical key.
    """
    arr = as_array(G)
    if arr.shape != (2, 2):
        raise DimMismatch("directions live in M2")
    H = HermitianMatrix(arr)
    arr = H.mat
    if abs(float(np.trace(arr).real)) > DIRECTION_SHAPE_TOL:
        raise DomainError("direction must be traceless")
    if float(np.linalg.norm(arr @ arr - np.eye(2))) > DIRECTION_SHAPE_TOL:
        raise DomainError("direction must be a self-adjoint unitary")
    sign = 0.0
    for entry in arr.reshape(-1):
        for part in (entry.real, entry.imag):
            if abs(part) > DIRECTION_SHAPE_TOL:
                sign = part
                break
        if sign != 0.0:
            break
    if sign < 0.0:
        arr = -arr
    return HermitianMatrix._wrap(arr)


@dataclass(frozen=True)
class MasaFunctional:
    """The affine candidate phi(tI + sG) = c_I t + c_G s + (1 - c_I).

    ``directions`` maps canonical G keys to their c_G; a direction not stored
    evaluates with c_G = 0, which only matters for exploration (the solver
    registers everything it touches). The defining inequality |c_G| <= c_I is
    enforced at construction.
    """

    c_I: float
    directions: tuple[tuple[HermitianMatrix, float], ...] = ()

    def __post_init__(self) -> None:
        c_I = float(self.c_I)
        if not math.isfinite(c_I) or c_I < 0.0:
            raise DomainError(f"c_I must be a nonnegative real, got {c_I}")
        canon = []
        for G, c in self.directions:
            c = float(c)
            if abs(c) > c_I + 1e-12:
                raise DomainError(f"|c_G| = {abs(c)} exceeds c_I = {c_I}")
            canon.append((canonical_direction(G), c))
        object.__setattr__(self, "c_I", c_I)
        object.__setattr__(self, "directions", tuple(canon))

    def with_direction(self, G, c_G: float) -> "MasaFunctional":
        key = canonical_direction(G)
        kept = tuple(
            (H, c) for H, c in self.directions
            if float(np.max(np.abs(H.mat - key.mat))) > DIRECTION_MATCH_TOL
        )
        return MasaFunctional(self.c_I, kept + ((key, float(c_G)),))

    def coefficient_for(self, G) -> float:
        key = canonical_direction(G)
        for H, c in self.directions:
            if float(np.max(np.abs(H.mat - key.mat))) <= DIRECTION_MATCH_TOL:
                return c
        return 0.0


def masa_split(X) -> tuple[float, float, HermitianMatrix | None]:
    """Coordinates (t, s, G) of X = tI + sG with canonical G; G is None when s = 0.

    The sign convention lives in G: s is signed so that s * G reproduces the
    traceless part exactly.
    """
    arr = as_array(X)
    if arr.shape != (2, 2):
        raise DimMismatch("the affine model is defined on M2")
    t = float(np.trace(arr).real) / 2.0
    D = arr - t * np.eye(2)
    s = float(np.linalg.norm(D)) / math.sqrt(2.0)
    if s <= 1e-13 * max(1.0, float(np.linalg.norm(arr))):
        return t, 0.0, None
    G = canonical_direction(D / s)
    if float(np.max(np.abs(D - s * G.mat))) > float(np.max(np.abs(D + s * G.mat))):
        s = -s
    return t, s, G


def masa_eval(m: MasaFunctional, X) -> float:
    """Evaluate the affine model at X = tI + sG; requires X inside the cone."""
    t, s, G = masa_split(X)
    if t - abs(s) <= 0.0:
        raise NotInCone(f"matrix with eigenvalues {t - abs(s):.3e}, {t + abs(s):.3e}")
    if G is None:
        return m.c_I * t + (1.0 - m.c_I)
    return m.c_I * t + m.coefficient_for(G) * s + (1.0 - m.c_I)


def _scalar_mean(kind: MeanKind, x: float, y: float) -> float:
    if kind.tag == TAG_ARITHMETIC:
        return (x + y) / 2.0
    if kind.tag == TAG_POWER:
        p = kind.p
        return ((x**p + y**p) / 2.0) ** (1.0 / p)
    if kind.tag == TAG_WASSERSTEIN:
        return ((math.sqrt(x) + math.sqrt(y)) / 2.0) ** 2
    raise DomainError(f"no scalar mean for kind {kind.label}")


def preserver_residual(f: ScalarFunctional, kind: MeanKind, A: PdMatrix, B: PdMatrix) -> float:
    """|f(A sigma B) - f(A) sigma f(B)| with the right side the scalar mean."""
    if kind.tag not in (TAG_ARITHMETIC, TAG_POWER, TAG_WASSERSTEIN):
        raise DomainError(f"preserver residuals support m_p, arithmetic and Wasserstein, not {kind.label}")
    M = mean(kind, A, B)
    return abs(f(M) - _scalar_mean(kind, f(A), f(B)))


def _fit_scalar(values: list[float], eps: np.ndarray) -> tuple[list[float], float]:
    samples = [np.array([v], dtype=np.complex128) for v in values]
    degree = min(len(eps) - 1, 5)
    coeffs, _ = _poly_fit(samples, eps, degree)
    _, resid2 = _poly_fit(samples, eps, 2)
    return [float(c[0].real) for c in coeffs], resid2


@dataclass(frozen=True)
class CoefficientSolveReport:
    """Constraint rows and null space of the sampled preserver equation.

    Unknowns are ordered (c_I, c_sigma_z, c_sigma_x, c_U). ``rows`` holds the
    first-order and second-order constraint rows assembled from fitted series
    of the trace-pairing coordinates. ``c_i_projection`` is the largest |c_I|
    attainable by a unit vector of the null space: 0 means c_I is forced to
    zero, 1 means it is completely unconstrained.
    """

    kind_label: str
    outer_power: float
    grid: tuple[float, ...]
    unknowns: tuple[str, str, str, str]
    rows: tuple[tuple[float, float, float, float], ...]
    kappa_observed: float
    kappa_expected: float
    second_order_coefficient: float
    second_order_reference: float
    null_dim: int
    null_space: tuple[tuple[float, float, float, float], ...]
    c_i_projection: float
    c_i_forced: bool
    fit_residual: float
    masa_crosscheck: float

    def to_json(self) -> dict:
        return {
            "kind": self.kind_label,
            "outer_power": self.outer_power,
            "grid": list(self.grid),
            "unknowns": list(self.unknowns),
            "rows": [list(r) for r in self.rows],
            "kappa_observed": self.kappa_observed,
            "kappa_expected": self.kappa_expected,
            "second_order_coefficient": self.second_order_coefficient,
            "second_order_reference": self.second_order_reference,
            "null_dim": self.null_dim,
            "null_space": [list(v) for v in self.null_space],
            "c_i_projection": self.c_i_projection,
            "c_i_forced": self.c_i_forced,
            "fit_residual": self.fit_residual,
            "masa_crosscheck": self.masa_crosscheck,
        }

    def contract_report(self, tol_scale: float = 1.0) -> CheckReport:
        """The forced-constancy contract as pass/fail items."""
        items = (
            CheckItem.compare(
                "first-order constraint: kappa = 1/sqrt(2)",
                self.kappa_expected,
                self.kappa_observed,
                FIRST_ORDER_TOL * tol_scale,
            ),
            CheckItem.compare(
                "second-order coefficient on c_I vs reference",
                self.second_order_reference,
                self.second_order_coefficient,
                SECOND_ORDER_TOL * tol_scale,
            ),
            CheckItem.bound(
                "c_I forced to zero (null-space projection)",
                self.c_i_projection,
                C_I_FORCE_TOL * tol_scale,
            ),
            CheckItem.bound(
                "affine model reproduces the sampled residual",
                self.masa_crosscheck,
                1e-11 * tol_scale,
            ),
        )
        return CheckReport(f"forced constancy, {self.kind_label}", items)


def solve_coefficients(kind: MeanKind, grid=DEFAULT_GRID) -> CoefficientSolveReport:
    """Assemble and solve the constraint system on (c_I, c_sigma_z, c_sigma_x, c_U).

    For the power family the equation compares phi((A_eps m_p B_eps)^p)
    against the average of phi(A_eps^p) and phi(B_eps^p); for the Wasserstein
    mean the outer power is 1/2. Each matrix is reduced to trace-pairing
    coordinates t = tr(M)/2 and s = tr(G M)/2 in its own subalgebra, the
    affine model turns the equation into a linear form in the four unknowns,
    and the eps and eps^2 coefficients of that form (fitted over the grid)
    are the two constraint rows.
    """
    if kind.tag == TAG_POWER:
        outer = float(kind.p)
        second_ref = (outer - 1.0) ** 2 / 4.0
    elif kind.tag == TAG_WASSERSTEIN:
        outer = 0.5
        second_ref = 1.0 / 16.0
    else:
        raise DomainError(f"solve_coefficients supports m_p and the Wasserstein mean, not {kind.label}")

    g = _coerce_grid(grid)
    eps = np.array(g.eps_grid)
    sz, sx, U = pauli_basis()

    t_L, s_L, t_A, s_A, t_B, s_B = [], [], [], [], [], []
    mats = []
    for e in eps:
        A, B = pauli_pair(float(e))
        L = mpow(mean(kind, A, B), outer)
        Ap = mpow(A, outer)
        Bp = mpow(B, outer)
        mats.append((L, Ap, Bp))
        t_L.append(float(np.trace(L.mat).real) / 2.0)
        s_L.append(float(np.trace(U.mat @ L.mat).real) / 2.0)
        t_A.append(float(np.trace(Ap.mat).real) / 2.0)
        s_A.append(float(np.trace(sz.mat @ Ap.mat).real) / 2.0)
        t_B.append(float(np.trace(Bp.mat).real) / 2.0)
        s_B.append(float(np.trace(sx.mat @ Bp.mat).real) / 2.0)

    delta_t = [tl - (ta + tb) / 2.0 for tl, ta, tb in zip(t_L, t_A, t_B)]
    k, resid_k = _fit_scalar(delta_t, eps)
    sig, resid_s = _fit_scalar(s_L, eps)
    a, resid_a = _fit_scalar(s_A, eps)
    b, resid_b = _fit_scalar(s_B, eps)
    fit_residual = max(resid_k, resid_s, resid_a, resid_b)

    rows = (
        (k[1], -a[1] / 2.0, -b[1] / 2.0, sig[1]),
        (k[2], -a[2] / 2.0, -b[2] / 2.0, sig[2]),
    )
    M = np.array(rows)
    _, svals, Vt = np.linalg.svd(M)
    smax = float(svals[0]) if len(svals) else 0.0
    # Rows are fitted coefficients of order-one trace coordinates; a singular
    # value at or below the row-vanishing threshold is fit noise, not a
    # constraint, so it is cut absolutely rather than relative to smax.
    cut = max(NULLSPACE_RTOL * smax, C_I_FORCE_TOL)
    rank = int(np.sum(svals > cut))
    null = Vt[rank:]
    proj = float(np.linalg.norm(null[:, 0])) if null.size else 0.0

    kappa = a[1] / (2.0 * sig[1]) if sig[1] != 0.0 else math.inf

    # Cross-check: the affine model evaluated through masa_eval must agree
    # with the linear form assembled from the same trace pairings.
    probe = MasaFunctional(
        0.6,
        (
            (sz, 0.5),
            (sx, 0.3),
            (U, 0.8 / math.sqrt(2.0)),
        ),
    )
    cross = 0.0
    for (L, Ap, Bp), tl, sl, ta, sa, tb, sb in zip(mats, t_L, s_L, t_A, s_A, t_B, s_B):
        via_masa = masa_eval(probe, L) - (masa_eval(probe, Ap) + masa_eval(probe, Bp)) / 2.0
        direct = (
            probe.c_I * (tl - (ta + tb) / 2.0)
            + probe.coefficient_for(U) * sl
            - (probe.coefficient_for(sz) * sa + probe.coefficient_for(sx) * sb) / 2.0
        )
        cross = max(cross, abs(via_masa - direct))

    return CoefficientSolveReport(
        kind_label=kind.label,
        outer_power=outer,
        grid=g.eps_grid,
        unknowns=("c_I", "c_sigma_z", "c_sigma_x", "c_U"),
        rows=rows,
        kappa_observed=float(kappa),
        kappa_expected=KAPPA_EXPECTED,
        second_order_coefficient=k[2],
        second_order_reference=second_ref,
        null_dim=int(null.shape[0]),
        null_space=tuple(tuple(float(x) for x in v) for v in null),
        c_i_projection=proj,
        c_i_forced=proj <= C_I_FORCE_TOL,
        fit_residual=fit_residual,
        masa_crosscheck=cross,
    )
