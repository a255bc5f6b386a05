"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines; every tolerance is pinned here.
"""

import json
import math
import time
from fractions import Fraction

import numpy as np

from branekit.brane_check import (
    equivalence_check,
    linearized_deformation_check,
    verify_brane,
)
from branekit.cli import main as cli_main
from branekit.cohomology import (
    CohClass,
    class_of_constant_form,
    constant_form_of_class,
    k3_space,
    signature,
    standard_basis,
    torus_space,
)
from branekit.exterior4 import Form2, compose_i, type_projectors, wedge22
from branekit.period_domain import (
    QuadricSpec,
    affine_normal_form,
    build_chart,
    chart_point,
    deformation_residual,
    hodge_splitting,
    metric_at,
    quadric_contains,
    reconstruct_brane,
    scalar_with_imaginary_part,
    torus_quadric_alt_value,
    torus_quadric_coefficients,
    torus_quadric_residuals,
)
from branekit.torus_forms import (
    integrability_identity_residual,
    nijenhuis_defect,
    rotation_family,
    standard_brane,
    standard_kahler,
    standard_symplectic,
)

from conftest import random_form2


def _report(number, description, ok, elapsed, budget):
    status = "PASS" if ok and elapsed < budget else "FAIL"
    print(f"[{status}] criterion {number}: {description} ({elapsed:.3f}s < {budget}s)")
    assert ok, f"criterion {number} failed: {description}"
    assert elapsed < budget, f"criterion {number} exceeded runtime budget"


def test_criterion_1_standard_torus_example_exact():
    start = time.perf_counter()
    omega = Form2(c14=Fraction(1), c23=Fraction(1))
    f0 = Form2(c13=Fraction(1), c24=Fraction(-1))
    rep = verify_brane(omega, f0)
    zero_residuals = (
        rep.passed
        and rep.wedge_square_resid == 0
        and rep.wedge_orth_resid == 0
        and rep.closedness_resid == 0
        and rep.i_square_resid == 0
    )
    i = compose_i(omega, f0)
    expected = ((0, -1, 0, 0), (1, 0, 0, 0), (0, 0, 0, -1), (0, 0, 1, 0))
    i_matches = all(
        i.m[a][b] == expected[a][b] for a in range(4) for b in range(4)
    )
    sq = i @ i
    squares_exactly = all(
        sq.m[a][b] == (-1 if a == b else 0) for a in range(4) for b in range(4)
    )
    ok = zero_residuals and i_matches and squares_exactly
    _report(
        1,
        "standard torus pair verifies exactly; I is the block rotation with I^2=-Id",
        ok,
        time.perf_counter() - start,
        0.1,
    )


def test_criterion_2_equivalence_on_random_pairs():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    checked = 0
    ok = True
    while checked < 200:
        omega = random_form2(rng)
        if wedge22(omega, omega).v == 0:
            continue
        f = random_form2(rng)
        ok = ok and equivalence_check(omega, f, tol=1e-9)
        checked += 1
    _report(
        2,
        "brane and holomorphic-symplectic checks agree on 200 random pairs",
        ok,
        time.perf_counter() - start,
        1.0,
    )


def test_criterion_3_integrability_equivalence():
    start = time.perf_counter()
    omega = standard_symplectic()
    rot = rotation_family((1, 0, 0, 0))
    defect, max_df = nijenhuis_defect(omega, rot, grid=8)
    obstructed = defect > 1e-2 and max_df > 1e-2

    flat_defect, flat_df = nijenhuis_defect(omega, standard_brane(), grid=8)
    theta = math.pi / 3
    const_member = math.cos(theta) * standard_brane() + math.sin(theta) * standard_kahler()
    flat2_defect, flat2_df = nijenhuis_defect(omega, const_member, grid=8)
    flat = max(flat_defect, flat_df, flat2_defect, flat2_df) <= 1e-8

    x = (1.0, 1.0, 1.0, 1.0)
    r1 = integrability_identity_residual(omega, rot, x, h=1e-4)
    r2 = integrability_identity_residual(omega, rot, x, h=5e-5)
    identity_ok = r1 <= 1e-6 and 3.0 <= r1 / r2 <= 5.0

    _report(
        3,
        "rotation family is obstructed, constants are flat, identity residual is O(h^2)",
        obstructed and flat and identity_ok,
        time.perf_counter() - start,
        10.0,
    )


def test_criterion_4_signatures_and_dimensions():
    start = time.perf_counter()
    t4, k3 = torus_space(), k3_space()
    sigs = signature(t4) == (3, 3) and signature(k3) == (3, 19)

    f0c = class_of_constant_form(standard_brane(), t4)
    w0c = class_of_constant_form(standard_symplectic(), t4)
    chart_t4 = build_chart(QuadricSpec(t4, w0c), f0c)
    e = standard_basis(k3)
    chart_k3 = build_chart(QuadricSpec(k3, e[0]), e[1])
    dims = chart_t4.dim == 4 and chart_k3.dim == 20

    _report(
        4,
        "signatures (3,3)/(3,19); quadric dimensions 4/20",
        sigs and dims,
        time.perf_counter() - start,
        0.1,
    )


def test_criterion_5_cylinder_chart_and_metric():
    start = time.perf_counter()
    rng = np.random.default_rng(55)
    ok = True

    charts = {}
    t4 = torus_space()
    w0c = class_of_constant_form(standard_symplectic(), t4)
    f0c = class_of_constant_form(standard_brane(), t4)
    charts["t4"] = (QuadricSpec(t4, w0c), build_chart(QuadricSpec(t4, w0c), f0c))
    k3 = k3_space()
    e = standard_basis(k3)
    charts["k3"] = (QuadricSpec(k3, e[0]), build_chart(QuadricSpec(k3, e[0]), e[1]))

    for name, (q, chart) in charts.items():
        expected_sig = (1, q.space.dim - 3)
        for _ in range(1000):
            theta = rng.uniform(0, 2 * math.pi)
            ybar = rng.normal(size=len(chart.neg))
            cls = chart_point(chart, theta, ybar)
            ok = ok and quadric_contains(q, cls, tol=1e-12)
            sample = metric_at(chart, theta, ybar)
            ok = ok and sample.off_diag_max <= 1e-12
            ok = ok and sample.gamma_resid <= 1e-10
            ok = ok and sample.signature == expected_sig

    q_t4, chart_t4 = charts["t4"]
    for lam in (Fraction(1, 2), 2, 3):
        q2 = QuadricSpec(t4, lam * w0c)
        chart2 = build_chart(q2, lam * f0c)
        for _ in range(20):
            theta = rng.uniform(0, 2 * math.pi)
            ybar = rng.normal(size=3)
            g1 = metric_at(chart_t4, theta, ybar).g
            g2 = metric_at(chart2, theta, ybar).g
            ok = ok and np.abs(g2 - float(lam) ** 2 * g1).max() <= 1e-10

    _report(
        5,
        "1000-sample chart/metric sweep on both models; metric scales like lambda^2",
        ok,
        time.perf_counter() - start,
        5.0,
    )


def test_criterion_6_deformation_quadric():
    start = time.perf_counter()
    rng = np.random.default_rng(66)
    t4 = torus_space()
    w0c = class_of_constant_form(standard_symplectic(), t4)
    f0c = class_of_constant_form(standard_brane(), t4)
    q = QuadricSpec(t4, w0c)
    chart = build_chart(q, f0c)
    ok = True
    for _ in range(200):
        cls = chart_point(chart, rng.uniform(0, 2 * math.pi), rng.normal(size=3))
        r1, r2 = deformation_residual(q, f0c, cls - f0c)
        ok = ok and abs(r1) <= 1e-10 and abs(r2) <= 1e-10
        form, report = reconstruct_brane(q, cls, tol=1e-12)
        ok = ok and report.passed

    normal = affine_normal_form(*torus_quadric_coefficients())
    ok = ok and normal.squares == (1, 1, -1, -1, -1)

    _report(
        6,
        "200 sampled classes deform and reconstruct; normal form is (+,+,-,-,-)",
        ok,
        time.perf_counter() - start,
        5.0,
    )


def test_criterion_7_linearized_theory():
    start = time.perf_counter()
    rng = np.random.default_rng(77)
    omega, f0 = standard_symplectic(), standard_brane()
    f0c = class_of_constant_form(f0)
    w0c = class_of_constant_form(omega)
    i0 = compose_i(omega, f0)
    t4 = torus_space()
    b = standard_basis(t4)
    h11_span = [b[0], b[1], b[2] - b[3], b[4] - b[5]]

    ok = True
    for n in range(200):
        if n % 2 == 0:
            alpha_class = CohClass(t4, tuple(int(v) for v in rng.integers(-3, 4, size=6)))
        else:
            weights = rng.integers(-3, 4, size=4)
            alpha_class = sum(
                (int(w) * v for w, v in zip(weights[1:], h11_span[1:])),
                int(weights[0]) * h11_span[0],
            )
        alpha = constant_form_of_class(alpha_class)
        check = linearized_deformation_check(omega, f0, alpha, tol=1e-10)
        pairings_vanish = (
            abs(alpha_class.pair(f0c)) <= 1e-10 and abs(alpha_class.pair(w0c)) <= 1e-10
        )
        p11, _ = type_projectors(i0, alpha)
        projector_fixes = max(abs(v) for v in (p11 - alpha).coeffs) <= 1e-10
        ok = ok and (check == pairings_vanish == projector_fixes)

    _, h11 = hodge_splitting(QuadricSpec(t4, w0c), f0c)
    kernel_rank_ok = len(h11) == 4
    for h in h11:
        kernel_rank_ok = kernel_rank_ok and h.pair(f0c) == 0 and h.pair(w0c) == 0
    stacked = np.array([[float(v) for v in h.coeffs] for h in h11])
    kernel_rank_ok = kernel_rank_ok and np.linalg.matrix_rank(stacked) == 4

    _report(
        7,
        "linearized check = class pairings = pointwise type over 200 samples; "
        "the (1,1) summand is the exact kernel",
        ok and kernel_rank_ok,
        time.perf_counter() - start,
        1.0,
    )


def test_criterion_8_unique_scalar_exact():
    start = time.perf_counter()
    t4 = torus_space()
    f0c = CohClass(t4, tuple(Fraction(v) for v in (0, 0, 1, 1, 0, 0)))
    w0c = CohClass(t4, tuple(Fraction(v) for v in (0, 0, 0, 0, 1, 1)))
    a1, b1 = scalar_with_imaginary_part(f0c, w0c, w0c)
    a2, b2 = scalar_with_imaginary_part(f0c, w0c, f0c)
    ok = (a1, b1) == (1, 0) and (a2, b2) == (0, 1)
    ok = ok and all(isinstance(v, Fraction) for v in (a1, b1, a2, b2))
    _report(
        8,
        "unique scalar with prescribed imaginary part is (1,0)/(0,1), exact rationals",
        ok,
        time.perf_counter() - start,
        0.1,
    )


def test_criterion_9_discrepancy_guards(capsys):
    start = time.perf_counter()
    t4 = torus_space()
    w0c = class_of_constant_form(standard_symplectic(), t4)
    f0c = class_of_constant_form(standard_brane(), t4)
    chart = build_chart(QuadricSpec(t4, w0c), f0c)

    # pushforward circle coefficient vs the sqrt closed form at ybar=(1,0,0)
    sample = metric_at(chart, 0.0, (1.0, 0.0, 0.0))
    omega_sq = 2.0
    pushforward_ok = abs(sample.g_theta_theta - 2.0 * omega_sq) <= 1e-12
    sqrt_form_ok = abs(sample.g_theta_theta_sqrt_form - math.sqrt(2.0) * omega_sq) <= 1e-12
    ratio = sample.g_theta_theta / sample.g_theta_theta_sqrt_form
    ratio_ok = abs(ratio - math.sqrt(2.0)) <= 1e-12

    # wedge-derived quadric accepts the solution the alternate form rejects
    residuals = torus_quadric_residuals(1, 1, -1, -1, 0, 0)
    alt = torus_quadric_alt_value(1, 1, -1, -1, 0, 0)
    quadric_ok = residuals == (0, 0) and alt == -6

    # both discrepancies are logged by the bundled example, not failed
    code = cli_main(["example-torus", "--no-timestamp"])
    report = json.loads(capsys.readouterr().out)
    notes = report["discrepancy_notes"]
    logged_ok = (
        code == 0
        and report["pass"] is True
        and len(notes) == 2
        and any("sqrt(1+r^2)" in n for n in notes)
        and any("-6" in n for n in notes)
    )

    _report(
        9,
        "circle-metric and quadric discrepancies are reported with the expected "
        "values and logged, never failed",
        pushforward_ok and sqrt_form_ok and ratio_ok and quadric_ok and logged_ok,
        time.perf_counter() - start,
        5.0,
    )
