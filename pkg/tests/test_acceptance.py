"""Acceptance checks, one test per criterion, each printing a PASS/FAIL line.

Lines are also collected in ``RESULTS`` and repeated in the terminal
summary, so they show up without ``-s``.
"""

import json
import subprocess
import sys
import time

import mpmath as mp
import numpy as np
import pytest
from scipy.integrate import quad

from selfrecip import cstransform as cs
from selfrecip import eigenchain as ec
from selfrecip import mellin as me
from selfrecip.grid import default_grid, l2_norm
from selfrecip.oscquad import (DEFAULT_EPSILON_POLICY, DEFAULT_TRUNCATION_POLICY, bound_ratio, calibrate_bound,
                               regularized_limit)
from selfrecip.special import FAMILIES, closed_form_power_integral, kappa, phase_values, verify_gamma_identities
from selfrecip.verify import density_norm, mellin_suite, phi_suite, transform_suite

RESULTS = {}
VARIANTS = [(f, s) for f in FAMILIES for s in ("plus", "minus")]


def _record(key, title, checks, elapsed, budget=None):
    """``checks`` holds ``(label, value, tol)``; ``tol=None`` marks a count that must be zero."""
    ok = all(v == 0 if tol is None else v < tol for _, v, tol in checks)
    if budget is not None:
        ok = ok and elapsed < budget
    detail = ", ".join(f"{lab} {v}" if tol is None else f"{lab} {v:.2e} (< {tol:.0e})" for lab, v, tol in checks)
    clock = f"{elapsed:.1f} s" + (f" of {budget:.0f} s" if budget else "")
    line = f"{'PASS' if ok else 'FAIL'}  {title}: {detail}; {clock}"
    RESULTS[key] = line
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def grid():
    return default_grid()


def test_gamma_identities():
    start = time.perf_counter()
    worst = 0.0
    for a in np.linspace(0.02, 0.98, 40):
        for b in np.linspace(-20, 20, 40):
            worst = max(worst, max(verify_gamma_identities(complex(a, b)).values()))
    _record(1, "gamma identities, 40x40 strip grid", [("max residual", worst, 1e-11)],
            time.perf_counter() - start, 5)


def test_kappa_product_law():
    start = time.perf_counter()
    rng = np.random.default_rng(31)
    pts = rng.uniform(0.005, 0.995, 1000) + 1j * rng.uniform(-40, 40, 1000)
    worst = max(abs(kappa(f, z).kappa_a * kappa(f, z).kappa_one_minus_a - 1) for f in FAMILIES for z in pts)
    _record(2, "kappa(a) kappa(1-a) = 1, 1000 points", [("max residual", worst, 1e-12)],
            time.perf_counter() - start, 1)


def test_regularized_power_integrals():
    start = time.perf_counter()
    rng = np.random.default_rng(11)
    pts = rng.uniform(0.1, 0.9, 50) + 1j * rng.uniform(-6, 6, 50)
    closed = paths = 0.0
    for z in pts:
        for fam in FAMILIES:
            # independent oracle for the closed form
            zz = mp.mpc(z.real, z.imag)
            trig = mp.cos if fam == "cosine" else mp.sin
            ref = complex(trig(mp.pi * zz / 2) * mp.gamma(zz))
            assert abs(closed_form_power_integral(fam, z) - ref) < 1e-12 * max(1, abs(ref))
            ve, _ = regularized_limit(fam, z, DEFAULT_EPSILON_POLICY)
            vt, _ = regularized_limit(fam, z, DEFAULT_TRUNCATION_POLICY)
            scale = max(1.0, abs(ref))
            closed = max(closed, abs(ve - ref) / scale, abs(vt - ref) / scale)
            paths = max(paths, abs(ve - vt) / scale)
    # constant fitted on |tau| <= 5, R <= 1e3; checked on |tau| <= 10, R <= 1e4 and four eps values
    const = calibrate_bound(0.25, tau_max=5.0, r_max=1e3)
    wide = max(bound_ratio(fam, complex(re, im), 1e4, (1.0, 0.1, 0.01, 0.001))
               for re in (0.25, 0.4, 0.6, 0.75) for im in np.linspace(-10, 10, 41) for fam in FAMILIES)
    _record(3, "regularized limits, path agreement, uniform bound",
            [("closed form", closed, 1e-6), ("eps vs R", paths, 1e-6),
             ("sup/C - 1", wide / const - 1, 1e-9)],
            time.perf_counter() - start, 60)


def test_involution_and_parseval(grid):
    start = time.perf_counter()
    inv = par = 0.0
    for _, f in transform_suite():
        x = grid.sample(f)
        nx = l2_norm(x)
        for fam in FAMILIES:
            y = cs.transform(x, fam)
            inv = max(inv, l2_norm(cs.transform(y, fam) - x) / nx)
            par = max(par, abs(l2_norm(y) ** 2 - nx ** 2) / nx ** 2)
    _record(4, "C and S involution and Parseval, 20 functions, N = 4096",
            [("involution", inv, 1e-6), ("Parseval", par, 1e-6)], time.perf_counter() - start, 30)


def test_hermite_eigenbasis(grid):
    start = time.perf_counter()
    pattern = [("cosine", "plus"), ("sine", "plus"), ("cosine", "minus"), ("sine", "minus")]
    worst = max(cs.eigen_residual(cs.hermite(k, grid), *pattern[k % 4]) for k in range(8))
    _record(5, "Hermite functions h_0..h_7 as eigenfunctions", [("max eigen residual", worst, 1e-5)],
            time.perf_counter() - start, 10)


def test_mellin_round_trip_and_parseval(grid):
    start = time.perf_counter()
    rt = pv = 0.0
    for _, f in mellin_suite():
        x = grid.sample(f)
        pair = me.mellin_pair(x)
        rt = max(rt, l2_norm(me.mellin_inverse(pair.image, grid) - x) / l2_norm(x))
        pv = max(pv, me.parseval_residual(pair))
    phi = me.mellin_forward(grid.sample(lambda t: np.exp(-t)))
    sel = np.abs(phi.tau) <= 20
    ref = np.array([complex(mp.gamma(mp.mpc(0.5, s))) for s in phi.tau[sel]])
    gam = np.abs(phi.values[sel] - ref).max()
    _record(6, "Mellin round trip, Parseval, Gamma oracle",
            [("round trip", rt, 1e-7), ("Parseval", pv, 1e-5), ("exp(-t) vs Gamma", gam, 1e-8)],
            time.perf_counter() - start, 10)


def test_multiplier_relation(grid):
    start = time.perf_counter()
    cases = [lambda t: np.exp(-t * t / 2), lambda t: np.exp(-t), lambda t: t * np.exp(-t * t / 2)]
    rel = max(me.verify_multiplier_relation(grid.sample(f), fam) for f in cases for fam in FAMILIES)
    tau = np.linspace(-100, 100, 2001)
    sq = max(np.abs(me.titchmarsh_multiplier(f, 0.5 + 1j * tau) - phase_values(f, tau) ** 2).max()
             for f in FAMILIES)
    _record(7, "Mellin multiplier relation", [("relation", rel, 1e-5), ("M - phase^2", sq, 1e-11)],
            time.perf_counter() - start)


def test_operator_suite(grid):
    start = time.perf_counter()
    iso = rng_res = tt = 0.0
    for fam, sign in VARIANTS:
        for _, phi in phi_suite(sign):
            x = ec.t_apply(fam, sign, phi, grid)
            norm = density_norm(phi)
            iso = max(iso, abs(l2_norm(x) - norm) / norm)
            rng_res = max(rng_res, cs.eigen_residual(x, fam, sign))
            back = ec.t_adjoint(fam, sign, x)
            tt = max(tt, np.abs(back.values - phi(back.tau)).max() / np.abs(phi(back.tau)).max())
    proj = idem = split = 0.0
    for fam in FAMILIES:
        for _, f in transform_suite()[1::3]:
            x = grid.sample(f)
            nx = l2_norm(x)
            parts = {s: ec.projector_apply(fam, s, x) for s in ("plus", "minus")}
            for s, p in parts.items():
                proj = max(proj, l2_norm(p - ec.involution_projector(fam, s, x)) / nx)
                if l2_norm(p) > 1e-3 * nx:
                    idem = max(idem, l2_norm(ec.projector_apply(fam, s, p) - p) / nx)
            split = max(split, l2_norm(parts["plus"] + parts["minus"] - x) / nx)
    _record(8, "synthesis, adjoint and projectors",
            [("isometry", iso, 1e-5), ("range eigen residual", rng_res, 1e-4), ("T*T - I", tt, 1e-5),
             ("TT* vs (I +- T)/2", proj, 1e-5), ("P^2 - P", idem, 1e-5), ("P+ + P- - I", split, 1e-6)],
            time.perf_counter() - start, 120)


def test_broad_sense_eigenfunctions():
    start = time.perf_counter()
    worst = 0.0
    growing = 0
    for fam, sign in VARIANTS:
        try:
            res = ec.broad_sense_residual(lambda s: np.exp(-s * s), fam, sign)
            worst = max(worst, res[-1])
        except ec.ResidualGrowthError:
            growing += 1
            worst = np.inf
    _record(9, "broad-sense eigen-relation for phi = exp(-tau^2), four variants",
            [("residual at R = 200 pi", worst, 1e-3), ("variants not decreasing", growing, None)],
            time.perf_counter() - start, 120)


def test_path_agreement(grid):
    start = time.perf_counter()
    gap = max(ec.path_gap(fam, sign, phi, grid) for fam, sign in VARIANTS for _, phi in phi_suite(sign))
    _record(10, "quadrature path vs inverse-Mellin path", [("max relative L2 gap", gap, 1e-5)],
            time.perf_counter() - start)


def test_pointwise_estimates(grid):
    start = time.perf_counter()
    t = np.geomspace(1e-8, 1e8, 81)
    tau = np.linspace(0, 60, 241)
    excess = max((np.abs(ec.chain_values(f, s, t[:, None], tau[None, :])) * np.sqrt(np.pi * t)[:, None]).max() - 1
                 for f, s in VARIANTS)
    at_zero = max(np.abs(ec.chain_values(f, "plus", t, 0.0) * np.sqrt(np.pi * t) - 1).max() for f in FAMILIES)
    l1_excess = 0.0
    for fam, sign in VARIANTS:
        for _, phi in phi_suite(sign):
            l1 = quad(lambda s: abs(phi(s)), 0, np.inf, epsabs=0, epsrel=1e-12)[0]
            x = ec.t_apply(fam, sign, phi, grid)
            bound = l1 / np.sqrt(np.pi * grid.t)
            l1_excess = max(l1_excess, (np.abs(x.values) / bound).max() - 1)
    _record(11, "pointwise estimates for e(t, tau) and synthesized x",
            [("|e| sqrt(pi t) - 1", max(excess, 0.0), 1e-12), ("equality at tau = 0", at_zero, 1e-12),
             ("L1 bound excess", max(l1_excess, 0.0), 1e-9)],
            time.perf_counter() - start)


REQUIRED = {
    1: ["gamma.gamma_identities_strip_grid"],
    2: ["gamma.kappa_product_law"],
    3: ["lemma1.regularized_limit_vs_closed_form", "lemma1.epsilon_vs_truncation_path",
        "lemma1.uniform_bound_calibrated_constant"],
    4: ["transforms.cosine_involution", "transforms.sine_involution", "transforms.cosine_parseval",
        "transforms.sine_parseval"],
    5: ["transforms.hermite_eigenbasis"],
    6: ["mellin.mellin_round_trip", "mellin.mellin_parseval", "mellin.mellin_gamma_oracle"],
    7: ["mellin.multiplier_relation", "mellin.multiplier_equals_phase_squared"],
    8: ["chains.synthesis_isometry", "chains.synthesis_range_eigen_residual", "chains.adjoint_inverts_synthesis",
        "chains.projector_matches_involution_oracle", "chains.projector_idempotent",
        "chains.projectors_sum_to_identity"],
    9: ["chains.broad_sense_residual"],
    10: ["chains.path_agreement"],
    11: ["chains.chain_pointwise_bound", "chains.chain_bound_equality_at_zero", "chains.synthesis_l1_estimate"],
}


def test_verify_all_command(tmp_path):
    start = time.perf_counter()
    report = tmp_path / "report.json"
    proc = subprocess.run([sys.executable, "-m", "selfrecip", "verify", "--suite", "all", "--output", str(report)],
                          capture_output=True, text=True)
    doc = json.loads(report.read_text())
    names = {c["name"]: c["pass"] for c in doc["checks"]}
    missing = [n for group in REQUIRED.values() for n in group if n not in names]
    failed = [n for n, ok in names.items() if not ok]
    _record(12, "verify --suite all",
            [("exit code", proc.returncode, None), ("missing checks", len(missing), None),
             ("failed checks", len(failed), None)],
            time.perf_counter() - start)
