"""Brane-condition verification, the holomorphic-symplectic equivalence,
and the deformation equations."""

import math
from fractions import Fraction

import numpy as np
import pytest

from branekit.brane_check import (
    brane_of_complex_structure,
    deformation_residuals,
    equivalence_check,
    linearized_deformation_check,
    verify_brane,
    verify_holomorphic_symplectic,
)
from branekit.cohomology import class_of_constant_form, constant_form_of_class, torus_space
from branekit.errors import NonDegenerateRequired, NotAlmostComplex, NotSkew
from branekit.exterior4 import Form2, LinearMap4, compose_i, wedge22
from branekit.period_domain import QuadricSpec, build_chart, chart_point
from branekit.torus_forms import (
    TrigPolyForm2,
    rotation_family,
    standard_brane,
    standard_kahler,
    standard_symplectic,
)

from conftest import random_brane_pair, random_form2

W0 = standard_symplectic()
F0 = standard_brane()
KAPPA = standard_kahler()


class TestVerifyBrane:
    def test_standard_pair_exact_zero_residuals(self):
        rep = verify_brane(W0, F0)
        assert rep.passed
        assert rep.wedge_square_resid == 0
        assert rep.wedge_orth_resid == 0
        assert rep.closedness_resid == 0
        assert rep.i_square_resid == 0
        assert rep.orientation_ok

    def test_kahler_partner_is_a_brane(self):
        assert verify_brane(W0, KAPPA).passed

    def test_rotation_family_fails_only_closedness(self):
        rep = verify_brane(W0, rotation_family((1, 0, 0, 0)))
        assert not rep.passed
        assert rep.closedness_resid > 0.5
        assert rep.wedge_square_resid <= 1e-12
        assert rep.wedge_orth_resid <= 1e-12
        assert rep.i_square_resid <= 1e-12

    def test_degenerate_omega_rejected(self):
        with pytest.raises(NonDegenerateRequired):
            verify_brane(Form2(c12=1), F0)

    def test_orientation_reversal_fails(self):
        # -F0 wedge -F0 is still positive, so flip one factor instead:
        # e^{13} + e^{24} squares to -2
        rep = verify_brane(W0, Form2(c13=1, c24=1))
        assert not rep.passed
        assert not rep.orientation_ok

    def test_random_exact_brane_pairs_pass(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            omega, f, _ = random_brane_pair(rng)
            rep = verify_brane(omega, f)
            assert rep.passed
            assert rep.wedge_square_resid == 0
            assert rep.i_square_resid == 0


class TestVerifyHolomorphicSymplectic:
    def test_standard_form_passes_with_positivity_four(self):
        rep = verify_holomorphic_symplectic(F0, W0)
        assert rep.passed
        assert rep.positivity_min == 4  # = 2 * omega^omega
        assert rep.square_resid == 0

    def test_equal_parts_fail_isotropy(self):
        rep = verify_holomorphic_symplectic(W0, W0)
        assert not rep.passed
        assert rep.square_resid == 4  # |2i * 2|

    def test_vanishing_real_part_fails_isotropy(self):
        rep = verify_holomorphic_symplectic(Form2(), W0)
        assert not rep.passed
        assert rep.square_resid == 2


class TestEquivalence:
    def test_standard_pair(self):
        assert equivalence_check(W0, F0)

    def test_rotation_family(self):
        assert equivalence_check(W0, rotation_family((1, 0, 0, 0)))

    def test_decomposable_form(self):
        assert equivalence_check(W0, Form2(c12=1))

    def test_randomised_pairs_always_agree(self):
        rng = np.random.default_rng(42)
        checked = 0
        while checked < 60:
            omega = random_form2(rng)
            if wedge22(omega, omega).v == 0:
                continue
            f = random_form2(rng)
            assert equivalence_check(omega, f)
            checked += 1


class TestBraneOfComplexStructure:
    def test_inverse_of_compose(self):
        i0 = compose_i(W0, F0)
        assert brane_of_complex_structure(W0, i0) == Form2.from_coeffs(
            tuple(Fraction(c) for c in F0.coeffs)
        )

    def test_round_trip_through_kahler_partner(self):
        ik = compose_i(W0, KAPPA)
        assert brane_of_complex_structure(W0, ik) == Form2.from_coeffs(
            tuple(Fraction(c) for c in KAPPA.coeffs)
        )

    def test_identity_is_rejected_as_not_complex(self):
        with pytest.raises(NotAlmostComplex):
            brane_of_complex_structure(W0, LinearMap4.identity())

    def test_skewness_violation_detected(self):
        i0 = compose_i(W0, F0)
        with pytest.raises(NotSkew):
            brane_of_complex_structure(Form2(c13=1), i0)

    def test_round_trip_on_random_brane_pairs(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            omega, f, _ = random_brane_pair(rng)
            i = compose_i(omega, f)
            back = brane_of_complex_structure(omega, i)
            assert all(Fraction(a) == b for a, b in zip(f.coeffs, back.coeffs))


def _quadric_solution_alphas(count, seed):
    """Constant deformation directions F0 -> F0 + alpha staying on the
    quadric, produced by the cylinder chart."""
    space = torus_space()
    q = QuadricSpec(space, class_of_constant_form(W0, space))
    chart = build_chart(q, class_of_constant_form(F0, space))
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        theta = rng.uniform(0, 2 * math.pi)
        ybar = rng.normal(size=3)
        cls = chart_point(chart, theta, ybar)
        out.append(constant_form_of_class(cls) - F0)
    return out


class TestDeformation:
    def test_kahler_direction_is_exact_solution(self):
        assert deformation_residuals(W0, F0, KAPPA - F0) == (0, 0, 0)

    def test_quadratic_obstruction_of_linear_direction(self):
        t = Fraction(3, 10)
        alpha = t * Form2(c12=1, c34=-1)
        res = deformation_residuals(W0, F0, alpha)
        assert res == (Fraction(9, 100), 0, 0)

    def test_zero_deformation(self):
        assert deformation_residuals(W0, F0, Form2()) == (0, 0, 0)

    def test_residuals_vanish_iff_deformed_form_is_brane(self):
        rng = np.random.default_rng(5)
        solutions = _quadric_solution_alphas(15, seed=9)
        generic = [random_form2(rng) for _ in range(15)]
        for alpha in solutions + generic:
            res = deformation_residuals(W0, F0, alpha)
            all_zero = all(abs(float(r)) <= 1e-9 for r in res)
            assert all_zero == verify_brane(W0, F0 + alpha, tol=1e-9).passed

    def test_scaling_isotropic_11_directions_stays_brane(self):
        # closed (1,1) directions with vanishing square solve the equations
        # for every scaling
        alpha = Form2(c12=1)  # wedge-isotropic, orthogonal to F0 and W0
        assert wedge22(alpha, alpha).v == 0
        for t in (-3, Fraction(1, 7), 2, 10):
            assert deformation_residuals(W0, F0, t * alpha) == (0, 0, 0)
            assert verify_brane(W0, F0 + t * alpha).passed


class TestLinearizedDeformation:
    def test_examples(self):
        assert linearized_deformation_check(W0, F0, Form2(c12=1, c34=-1))
        assert linearized_deformation_check(W0, F0, KAPPA)
        assert not linearized_deformation_check(W0, F0, W0)

    def test_equivalent_to_pointwise_wedge_conditions(self):
        rng = np.random.default_rng(21)
        for _ in range(40):
            alpha = random_form2(rng)
            expected = (
                wedge22(alpha, F0).v == 0 and wedge22(alpha, W0).v == 0
            )  # constant forms are closed
            assert linearized_deformation_check(W0, F0, alpha) == expected

    def test_nonclosed_form_fails(self):
        from branekit.torus_forms import TrigPolyFn, exterior_d

        # cos(x3) e^{12}: pointwise (1,1) everywhere but not closed
        alpha = TrigPolyForm2.from_fns(
            [TrigPolyFn.mode((0, 0, 1, 0), cos=1), 0, 0, 0, 0, 0]
        )
        assert exterior_d(alpha).coefficient_norm() > 0
        assert not linearized_deformation_check(W0, F0, alpha)


class TestBraneCircle:
    def test_rotation_circle_consists_of_branes(self):
        for j in range(64):
            theta = 2 * math.pi * j / 64
            f = math.cos(theta) * F0 + math.sin(theta) * KAPPA
            assert verify_brane(W0, f).passed
