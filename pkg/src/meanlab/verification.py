"""Acceptance batteries: eleven numbered criteria, each a CheckReport.

Every criterion pins its tolerances and seeds here. Items that compare
against tabulated coefficient values carry the "(tabulated)" suffix; where
an independently derived value disagrees with a tabulated one, both appear
so a failing line sits next to the passing dual route. The batteries never
relax a comparison to make it pass.
"""

from __future__ import annotations

import math

import numpy as np

from .centrality import (
    centrality_probe,
    remark1_identity_chain,
    remark2_identity_chain,
)
from .expansion import (
    DEFAULT_GRID,
    check_unitary_invariance,
    fit_series,
    fit_series_general,
    gp_d1,
    gp_d2,
    gp_d2_tabulated_anchor,
    gp_eval,
    pauli_pair,
    power_mean_c2_tabulated,
    _transport,
)
from .geometry import GEODESIC_BW, GEODESIC_TRACE, check_geodesic_metric, d_bw, geodesic
from .matcore import HermitianMatrix, PdMatrix, identity_pd, mpow, pauli_basis
from .means import (
    ARITHMETIC,
    GEOMETRIC,
    HARMONIC,
    WASSERSTEIN,
    check_kubo_ando_axioms,
    conventional_power,
    kubo_ando_power,
    mean,
    wasserstein_alt,
)
from .preserver import (
    constant_functional,
    linear_functional,
    preserver_residual,
    solve_coefficients,
    trace_power_functional,
)
from .report import CheckItem, CheckReport
from .sampling import random_pd, random_unitary, rng_for

P_VALUES = (-0.9, -0.5, -0.1, 0.1, 0.5, 0.9)

# Central-difference steps for the derivative anchors: first differences are
# accurate to ~1e-11 at 1e-5; second differences balance truncation against
# roundoff near 1e-4.
_CD1_STEP = 1e-5
_CD2_STEP = 1e-4


def _fro(arr) -> float:
    return float(np.linalg.norm(np.asarray(arr)))


def _maxabs(arr) -> float:
    return float(np.max(np.abs(np.asarray(arr))))


def criterion_1(seed: int = 0, tol_scale: float = 1.0) -> CheckReport:
    """Perturbed means commute with the symmetrizing unitary U."""
    tol = 1e-11 * tol_scale
    _, _, U = pauli_basis()
    items = []
    for p in P_VALUES:
        worst = max(check_unitary_invariance(p, e) for e in (0.1, 0.3, 0.5))
        items.append(CheckItem.bound(f"[U, A m_p B] vanishes, p = {p:g}", worst, tol))
    worst_w = 0.0
    for e in (0.1, 0.4):
        M = mean(WASSERSTEIN, *pauli_pair(e)).mat
        worst_w = max(worst_w, _fro(U.mat @ M - M @ U.mat))
    items.append(CheckItem.bound("[U, Wasserstein mean] vanishes", worst_w, tol))
    return CheckReport("criterion 1: unitary commutation of perturbed means", tuple(items))


def criterion_2(seed: int = 0, tol_scale: float = 1.0) -> CheckReport:
    """Power-mean expansion coefficients against the tabulated displays."""
    c1_tol = 1e-6 * tol_scale
    c2_tol = 1e-4 * tol_scale
    sz, sx, _ = pauli_basis()
    w_half = (sz.mat + sx.mat) / 2.0
    I2 = np.eye(2)
    items = []
    for p in P_VALUES:
        kind = kubo_ando_power(p)
        fit = fit_series(lambda e: mean(kind, *pauli_pair(e)), DEFAULT_GRID)
        items.append(
            CheckItem.bound(
                f"c1 = (sigma_z + sigma_x)/2, p = {p:g}",
                _maxabs(fit.c1.mat - w_half),
                c1_tol,
            )
        )
        items.append(
            CheckItem.bound(
                f"c2 = (p/2 + 1/(4p) - 3/4) I (tabulated), p = {p:g}",
                _maxabs(fit.c2.mat - power_mean_c2_tabulated(p) * I2),
                c2_tol,
            )
        )
    return CheckReport("criterion 2: power-mean expansion coefficients", tuple(items))


def criterion_3(seed: int = 0, tol_scale: float = 1.0) -> CheckReport:
    """Wasserstein expansion coefficients against the tabulated displays."""
    tol = 1e-4 * tol_scale
    sz, sx, _ = pauli_basis()
    I2 = np.eye(2)
    fit_mean = fit_series(lambda e: mean(WASSERSTEIN, *pauli_pair(e)), DEFAULT_GRID)
    fit_sqrt = fit_series(
        lambda e: mpow(mean(WASSERSTEIN, *pauli_pair(e)), 0.5), DEFAULT_GRID
    )
    fit_tr = fit_series_general(lambda e: _transport(e), DEFAULT_GRID)
    sxz = sx.mat @ sz.mat
    items = (
        CheckItem.bound(
            "Wasserstein c2 norm vanishes (tabulated)", _fro(fit_mean.c2.mat), tol
        ),
        CheckItem.bound(
            "sqrt-of-Wasserstein c2 = -I/16 (tabulated)",
            _maxabs(fit_sqrt.c2.mat + I2 / 16.0),
            tol,
        ),
        CheckItem.bound(
            "transport-factor c2 = sigma_x sigma_z / 2 (tabulated)",
            _maxabs(fit_tr.c2 - sxz / 2.0),
            tol,
        ),
    )
    return CheckReport("criterion 3: Wasserstein expansion coefficients", items)


def criterion_4(seed: int = 0, tol_scale: float = 1.0) -> CheckReport:
    """Representing-function derivative anchors at x = 1."""
    d1_tol = 1e-8 * tol_scale
    d2_tol = 1e-6 * tol_scale
    items = []
    for p in P_VALUES:
        d1 = gp_d1(p, 1.0)
        h = _CD1_STEP
        cd1 = (gp_eval(p, 1.0 + h) - gp_eval(p, 1.0 - h)) / (2.0 * h)
        h = _CD2_STEP
        cd2 = (gp_eval(p, 1.0 + h) - 2.0 * gp_eval(p, 1.0) + gp_eval(p, 1.0 - h)) / (h * h)
        items.append(CheckItem.compare(f"g_p'(1) formula = 1/2, p = {p:g}", 0.5, d1, 0.0))
        items.append(
            CheckItem.compare(f"g_p'(1) vs central differences, p = {p:g}", cd1, d1, d1_tol)
        )
        items.append(
            CheckItem.compare(
                f"tabulated second-derivative anchor vs central differences, p = {p:g}",
                cd2,
                gp_d2_tabulated_anchor(p),
                d2_tol,
            )
        )
        items.append(
            CheckItem.compare(
                f"g_p''(1) formula vs central differences (derived), p = {p:g}",
                cd2,
                gp_d2(p, 1.0),
                d2_tol,
            )
        )
    return CheckReport("criterion 4: derivative anchors of g_p at 1", tuple(items))


def criterion_5(seed: int = 0, tol_scale: float = 1.0) -> CheckReport:
    """Forced constancy: the coefficient solve must pin c_I to zero."""
    tol = 1e-6 * tol_scale
    items = []
    for p in P_VALUES:
        rep = solve_coefficients(kubo_ando_power(p))
        items.append(
            CheckItem.bound(
                f"c_I forced to zero in the null space, p = {p:g}",
                rep.c_i_projection,
                tol,
            )
        )
    rep = solve_coefficients(WASSERSTEIN)
    items.append(
        CheckItem.bound("c_I forced to zero in the null space, Wasserstein", rep.c_i_projection, tol)
    )
    rep1 = solve_coefficients(kubo_ando_power(1.0))
    items.append(
        CheckItem.bound(
            "second-order constraint row vanishes, p = 1",
            _fro(np.array(rep1.rows[1])),
            tol,
        )
    )
    items.append(
        CheckItem.compare(
            "c_I unconstrained at p = 1 (null-space projection)",
            1.0,
            rep1.c_i_projection,
            0.5,
        )
    )
    return CheckReport("criterion 5: forced constancy of the affine model", tuple(items))


def criterion_6(seed: int = 0, tol_scale: float = 1.0) -> CheckReport:
    """Residual separation: constants preserve, a genuine functional does not."""
    const_tol = 1e-13 * tol_scale
    linear_tol = 1e-12 * tol_scale
    # Separation thresholds are not tolerances; they stay fixed.
    sep_floor = 1e-4
    f_const = constant_functional(1.7)
    kinds = (
        ("m_0.5", kubo_ando_power(0.5)),
        ("m_-0.5", kubo_ando_power(-0.5)),
        ("Wasserstein", WASSERSTEIN),
    )
    items = []
    for name, kind in kinds:
        worst = 0.0
        for i in range(100):
            rng = rng_for(seed, 60, i)
            A = random_pd(rng, 2)
            B = random_pd(rng, 2)
            worst = max(worst, preserver_residual(f_const, kind, A, B))
        items.append(
            CheckItem.bound(f"constants preserve {name} (100 pairs)", worst, const_tol)
        )

    f_tp = trace_power_functional(0.5)
    A5, B5 = pauli_pair(0.5)
    items.append(
        CheckItem.floor(
            "trace-power functional fails to preserve m_0.5",
            preserver_residual(f_tp, kubo_ando_power(0.5), A5, B5),
            sep_floor,
        )
    )

    worst = 0.0
    for i in range(100):
        rng = rng_for(seed, 61, i)
        G = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        W = G.conj().T @ G
        W = W / float(np.trace(W).real)
        f_lin = linear_functional(HermitianMatrix(W))
        A = random_pd(rng, 2)
        B = random_pd(rng, 2)
        worst = max(worst, preserver_residual(f_lin, ARITHMETIC, A, B))
    items.append(
        CheckItem.bound("positive linear functionals preserve the arithmetic mean", worst, linear_tol)
    )
    return CheckReport("criterion 6: preserver residual separation", tuple(items))


def criterion_7(seed: int = 0, tol_scale: float = 1.0) -> CheckReport:
    """Kubo-Ando axiom battery, zero failures allowed."""
    kinds = (
        ("harmonic", HARMONIC),
        ("geometric", GEOMETRIC),
        ("m_0.5", kubo_ando_power(0.5)),
        ("m_-0.5", kubo_ando_power(-0.5)),
    )
    items = []
    for name, kind in kinds:
        for dim in (2, 3):
            rep = check_kubo_ando_axioms(kind, samples=200, rng_seed=seed, dim=dim)
            failures = sum(c.failures for c in rep.checks)
            items.append(
                CheckItem.bound(f"axiom failures, {name}, dim {dim}", float(failures), 0.0)
            )
    return CheckReport("criterion 7: Kubo-Ando axiom battery", tuple(items))


def _commuting_pair(rng, dim: int = 2, spread=(0.5, 3.0)):
    V = random_unitary(rng, dim)
    d1 = rng.uniform(*spread, size=dim)
    d2 = rng.uniform(*spread, size=dim)
    A = PdMatrix.certify(HermitianMatrix(V @ np.diag(d1) @ V.conj().T))
    B = PdMatrix.certify(HermitianMatrix(V @ np.diag(d2) @ V.conj().T))
    return A, B


def criterion_8(seed: int = 0, tol_scale: float = 1.0) -> CheckReport:
    """Commuting-case coincidences and the two Wasserstein formulas."""
    tol_c = 1e-10 * tol_scale
    tol_w = 1e-11 * tol_scale
    items = []
    for p in (0.5, -0.5):
        ka = kubo_ando_power(p)
        cp = conventional_power(p)
        worst = 0.0
        for i in range(100):
            A, B = _commuting_pair(rng_for(seed, 80, i))
            worst = max(worst, _fro(mean(ka, A, B).mat - mean(cp, A, B).mat))
        items.append(
            CheckItem.bound(f"m_p vs conventional power on commuting pairs, p = {p:g}", worst, tol_c)
        )
    cp_half = conventional_power(0.5)
    worst = 0.0
    for i in range(100):
        A, B = _commuting_pair(rng_for(seed, 81, i))
        worst = max(worst, _fro(mean(WASSERSTEIN, A, B).mat - mean(cp_half, A, B).mat))
    items.append(
        CheckItem.bound("Wasserstein vs conventional power 1/2 on commuting pairs", worst, tol_c)
    )
    worst = 0.0
    for i in range(100):
        rng = rng_for(seed, 82, i)
        A = random_pd(rng, 2)
        B = random_pd(rng, 2)
        worst = max(worst, _fro(mean(WASSERSTEIN, A, B).mat - wasserstein_alt(A, B).mat))
    items.append(CheckItem.bound("two Wasserstein formulas agree", worst, tol_w))
    return CheckReport("criterion 8: mean coincidences", tuple(items))


def criterion_9(seed: int = 0, tol_scale: float = 1.0) -> CheckReport:
    """Centrality probes and the identity chains on pinned pair classes."""
    small = 1e-11 * tol_scale
    # Separation threshold, not a tolerance; stays fixed.
    large = 1e-3
    deriv_tol = 1e-5 * tol_scale
    sz, sx, _ = pauli_basis()
    I2 = identity_pd(2)
    scalar = PdMatrix.certify(HermitianMatrix(3.0 * np.eye(2)))
    items = [
        CheckItem.bound(
            "scalar passes the probe, Wasserstein",
            0.0 if centrality_probe(scalar, WASSERSTEIN, 50, seed) else 1.0,
            0.0,
        ),
        CheckItem.bound(
            "scalar passes the probe, m_0.5",
            0.0 if centrality_probe(scalar, kubo_ando_power(0.5), 50, seed) else 1.0,
            0.0,
        ),
    ]
    fails = 0
    for i in range(10):
        rng = rng_for(seed, 90, i)
        A = random_pd(rng, 2)
        while _fro(A.mat - (A.trace() / 2.0) * np.eye(2)) < 0.05:
            A = random_pd(rng, 2)
        kind = WASSERSTEIN if i % 2 == 0 else kubo_ando_power(0.5)
        if not centrality_probe(A, kind, 50, seed + i):
            fails += 1
    items.append(
        CheckItem.compare("non-scalar matrices failing the probe (of 10)", 10.0, float(fails), 0.0)
    )

    Ac = PdMatrix.certify(HermitianMatrix(np.diag([1.0, 4.0])))
    Bc = PdMatrix.certify(HermitianMatrix(np.diag([9.0, 16.0])))
    ch = remark1_identity_chain(Ac, Bc)
    items.append(
        CheckItem.bound("chain gaps on a commuting pair (Wasserstein route)", max(g for _, g in ch.gaps), small)
    )
    items.append(
        CheckItem.bound("chain derivative step on a commuting pair (Wasserstein route)", ch.derivative_error, deriv_tol)
    )
    for p in (0.5, -0.5, -1.0):
        ch = remark2_identity_chain(Ac, Bc, p)
        items.append(
            CheckItem.bound(
                f"chain gaps on a commuting pair (power route, p = {p:g})",
                max(g for _, g in ch.gaps),
                small,
            )
        )
        if ch.derivative_error is not None:
            items.append(
                CheckItem.bound(
                    f"chain derivative step on a commuting pair (power route, p = {p:g})",
                    ch.derivative_error,
                    deriv_tol,
                )
            )

    Ag = PdMatrix.certify(HermitianMatrix(np.diag([1.0, 4.0])))
    Bg = PdMatrix.certify(HermitianMatrix(np.eye(2) + 0.6 * sx.mat))
    ch = remark1_identity_chain(Ag, Bg)
    items.append(
        CheckItem.floor("all gaps large on the generic pair (Wasserstein route)", min(g for _, g in ch.gaps), large)
    )
    items.append(
        CheckItem.bound(
            "derivative step still accurate on the generic pair (Wasserstein route)",
            ch.derivative_error,
            deriv_tol,
        )
    )
    for p in (0.5, -1.0):
        ch = remark2_identity_chain(Ag, Bg, p)
        items.append(
            CheckItem.floor(
                f"all gaps large on the generic pair (power route, p = {p:g})",
                min(g for _, g in ch.gaps),
                large,
            )
        )

    Am = PdMatrix.certify(HermitianMatrix(np.eye(2) + 0.5 * sz.mat))
    Bm = PdMatrix.certify(HermitianMatrix(np.eye(2) + 0.5 * sx.mat))
    ch = remark1_identity_chain(Am, Bm)
    items.append(
        CheckItem.bound("matched family satisfies the hypothesis link", ch.gap("hypothesis-identity"), small)
    )
    items.append(
        CheckItem.floor("matched family still fails to commute", ch.gap("commutator"), large)
    )
    return CheckReport("criterion 9: centrality probes and identity chains", tuple(items))


def criterion_10(seed: int = 0, tol_scale: float = 1.0) -> CheckReport:
    """Metric and geodesic properties of the Bures-Wasserstein structure."""
    sym_tol = 1e-11 * tol_scale
    tri_slack = 1e-10 * tol_scale
    end_tol = 1e-11 * tol_scale
    mid_tol = 1e-10 * tol_scale
    add_rtol = 1e-8 * tol_scale
    exact_tol = 1e-12 * tol_scale

    worst_sym = worst_id = worst_tri = 0.0
    for i in range(200):
        rng = rng_for(seed, 100, i)
        A = random_pd(rng, 2)
        B = random_pd(rng, 2)
        C = random_pd(rng, 2)
        dab = d_bw(A, B)
        worst_sym = max(worst_sym, abs(dab - d_bw(B, A)))
        worst_id = max(worst_id, d_bw(A, A))
        violation = d_bw(A, C) - (dab + d_bw(B, C))
        worst_tri = max(worst_tri, violation)
    items = [
        CheckItem.bound("distance symmetry (200 triples)", worst_sym, sym_tol),
        # The square root amplifies ~1e-14 trace roundoff in the radicand to
        # ~1e-7 in the distance, so exact self-coincidence gets a looser bound.
        CheckItem.bound("self-distance vanishes (200 triples)", worst_id, 1e-6 * tol_scale),
        CheckItem.bound("triangle inequality violation (200 triples)", max(0.0, worst_tri), tri_slack),
    ]

    worst_end = worst_mid_tr = worst_mid_bw = 0.0
    for i in range(20):
        rng = rng_for(seed, 101, i)
        A = random_pd(rng, 2)
        B = random_pd(rng, 2)
        for kind in (GEODESIC_TRACE, GEODESIC_BW):
            worst_end = max(worst_end, _fro(geodesic(kind, A, B, 0.0).mat - A.mat))
            worst_end = max(worst_end, _fro(geodesic(kind, A, B, 1.0).mat - B.mat))
        worst_mid_tr = max(
            worst_mid_tr,
            _fro(geodesic(GEODESIC_TRACE, A, B, 0.5).mat - mean(GEOMETRIC, A, B).mat),
        )
        worst_mid_bw = max(
            worst_mid_bw,
            _fro(geodesic(GEODESIC_BW, A, B, 0.5).mat - mean(WASSERSTEIN, A, B).mat),
        )
    items.append(CheckItem.bound("geodesic endpoints (both kinds, 20 pairs)", worst_end, end_tol))
    items.append(CheckItem.bound("trace-metric midpoint is the geometric mean", worst_mid_tr, mid_tol))
    items.append(CheckItem.bound("Bures-Wasserstein midpoint is the Wasserstein mean", worst_mid_bw, mid_tol))

    worst_ratio = 0.0
    partition = (0.0, 0.25, 0.5, 0.75, 1.0)
    for i in range(50):
        rng = rng_for(seed, 102, i)
        A = random_pd(rng, 2)
        B = random_pd(rng, 2)
        dev = check_geodesic_metric(A, B, partition)
        worst_ratio = max(worst_ratio, dev / d_bw(A, B))
    items.append(CheckItem.bound("distance accrues proportionally along the curve", worst_ratio, add_rtol))

    four = PdMatrix.certify(HermitianMatrix(4.0 * np.eye(2)))
    items.append(
        CheckItem.compare("d_bw(I, 4I) = sqrt(2)", math.sqrt(2.0), d_bw(identity_pd(2), four), exact_tol)
    )
    return CheckReport("criterion 10: Bures-Wasserstein geometry", tuple(items))


def criterion_11(seed: int = 0, tol_scale: float = 1.0) -> CheckReport:
    """Degree-2 residual scales like eps_max cubed for the power family."""
    kind = kubo_ando_power(0.5)
    base = fit_series(lambda e: mean(kind, *pauli_pair(e)), DEFAULT_GRID)
    doubled = fit_series(lambda e: mean(kind, *pauli_pair(e)), DEFAULT_GRID.scaled(2.0))
    factor = doubled.residual_bound / base.residual_bound
    item = CheckItem.compare(
        "log2 of residual growth under grid doubling",
        3.0,
        math.log2(factor),
        0.5 * tol_scale,
    )
    return CheckReport("criterion 11: cubic truncation of the degree-2 fit", (item,))


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
}


def run_all(seed: int = 0, tol_scale: float = 1.0) -> list[CheckReport]:
    return [CRITERIA[n](seed=seed, tol_scale=tol_scale) for n in sorted(CRITERIA)]
