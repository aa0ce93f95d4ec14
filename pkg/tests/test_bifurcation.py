"""Certification machinery: determinant, reduction, Miranda, classification."""

import math
import random

import pytest

from pcr4bp.bifurcation import (
    ClassKind,
    ComponentCertificate,
    EquilibriumField,
    Mechanism,
    VectorField,
    certify_single_component,
    classify_inner,
    max_k_solutions,
    miranda_exists,
    no_bifurcation,
)
from pcr4bp.interval import EMPTY, IBox, Interval
from pcr4bp.potential import Ordering, ParamRect
from pcr4bp.solve import count_solutions
from pcr4bp.taylor import Jet2, ReductionUnavailable, implicit_curve_jet

INNER_REGION = IBox(Interval(1.0 / 3.0, 1.0), Interval(-0.2, 0.7))
UNIT_SQUARE = IBox(Interval(-1.0, 1.0), Interval(-1.0, 1.0))


def _point_params(s: float, t: float) -> ParamRect:
    return ParamRect(Interval(s), Interval(t))


class Synthetic(VectorField):
    """Test field built from closures over interval and jet evaluations."""

    def __init__(self, value_fn, jet_fn=None):
        self._value_fn = value_fn
        self._jet_fn = jet_fn

    def value(self, box, pr):
        return self._value_fn(box, pr)

    def jet(self, box, pr, order):
        if self._jet_fn is None:
            raise NotImplementedError("this synthetic field has no jets")
        return self._jet_fn(box, pr, order)


def identity_field() -> Synthetic:
    return Synthetic(
        lambda box, pr: IBox(box.x1, box.x2),
        lambda box, pr, n: (Jet2.lift(box, 0, n), Jet2.lift(box, 1, n)),
    )


def fold_field() -> Synthetic:
    """f = (x1^2 - p, x2): two zeros for p > 0, none for p < 0."""

    def value(box, p):
        return IBox(box.x1.sq() - p, box.x2)

    def jet(box, p, n):
        x1 = Jet2.lift(box, 0, n)
        x2 = Jet2.lift(box, 1, n)
        return x1.sq() - Jet2.constant(p, n), x2

    return Synthetic(value, jet)


def quad_normal_form() -> Synthetic:
    """f = (x1^2 - p, x2 - x1): reduced function g = x1^2 - p."""

    def value(box, p):
        return IBox(box.x1.sq() - p, box.x2 - box.x1)

    def jet(box, p, n):
        x1 = Jet2.lift(box, 0, n)
        x2 = Jet2.lift(box, 1, n)
        return x1.sq() - Jet2.constant(p, n), x2 - x1

    return Synthetic(value, jet)


def cubic_normal_form() -> Synthetic:
    """f = (x1^3 - p*x1 - q, x2) with parameters pr = (p, q)."""

    def value(box, pr):
        p, q = pr
        return IBox(box.x1.powi(3) - box.x1 * p - q, box.x2)

    def jet(box, pr, n):
        p, q = pr
        x1 = Jet2.lift(box, 0, n)
        x2 = Jet2.lift(box, 1, n)
        return x1.powi(3) - x1.scale(p) - Jet2.constant(q, n), x2

    return Synthetic(value, jet)


class TestNoBifurcation:
    def test_identity_map(self):
        assert no_bifurcation(UNIT_SQUARE, None, field=identity_field())

    def test_fold_straddling_zero(self):
        # det DF = 2*x1 vanishes at the fold regardless of p.
        assert not no_bifurcation(
            UNIT_SQUARE, Interval(-0.1, 0.1), field=fold_field()
        )

    def test_real_solution_neighbourhoods(self):
        pr = _point_params(0.25, 0.25)
        region = IBox(Interval(1.0 / 3.0, 2.0), Interval(-math.pi, math.pi))
        report = count_solutions(region, pr, tol=1e-6)
        assert report.conclusive
        for tight in report.tight_list:
            pad_r = Interval(tight.r.lo - 1e-3, tight.r.hi + 1e-3)
            pad_phi = Interval(tight.phi.lo - 1e-3, tight.phi.hi + 1e-3)
            assert no_bifurcation(IBox(pad_r, pad_phi), pr)

    def test_determinant_exclusivity(self):
        # Nonvanishing determinant means at most one certified zero inside.
        rng = random.Random(0xB1F)
        pr = _point_params(0.25, 0.25)
        checked = 0
        for _ in range(40):
            r0 = rng.uniform(0.4, 1.9)
            phi0 = rng.uniform(-3.0, 3.0)
            box = IBox(
                Interval(r0 - 0.03, r0 + 0.03), Interval(phi0 - 0.03, phi0 + 0.03)
            )
            if not no_bifurcation(box, pr):
                continue
            checked += 1
            report = count_solutions(box, pr, tol=1e-6)
            assert report.solution_count <= 1
        assert checked > 10


class TestSingleComponent:
    def test_horizontal_axis(self):
        field = Synthetic(
            lambda box, pr: IBox(box.x1, box.x2),
            lambda box, pr, n: (Jet2.lift(box, 0, n), Jet2.lift(box, 1, n)),
        )
        assert certify_single_component(UNIT_SQUARE, None, field=field)

    def test_parabola_level_set_rejected(self):
        quarter = Interval(0.25)

        def value(box, pr):
            return IBox(box.x1, box.x2.sq() - quarter)

        def jet(box, pr, n):
            x2 = Jet2.lift(box, 1, n)
            return Jet2.lift(box, 0, n), x2.sq() - Jet2.constant(quarter, n)

        # d(f2)/d(x2) = 2*x2 straddles zero: monotonicity fails.
        assert not certify_single_component(
            UNIT_SQUARE, None, field=Synthetic(value, jet)
        )

    def test_reversed_orientation_accepted(self):
        def value(box, pr):
            return IBox(box.x1, -box.x2)

        def jet(box, pr, n):
            return Jet2.lift(box, 0, n), -Jet2.lift(box, 1, n)

        assert certify_single_component(UNIT_SQUARE, None, field=Synthetic(value, jet))


class TestMaxKSolutions:
    def test_quadratic_normal_form(self):
        field = quad_normal_form()
        # x2 range strictly wider than x1 so the diagonal level set of
        # f2 = x2 - x1 enters through the side edges, not the corners.
        box = IBox(Interval(-0.4, 0.4), Interval(-0.5, 0.5))
        p = Interval(-0.01, 0.01)
        assert certify_single_component(box, p, field=field)
        assert not max_k_solutions(box, p, 1, field=field)
        assert max_k_solutions(box, p, 2, field=field)

    def test_cubic_normal_form(self):
        field = cubic_normal_form()
        box = IBox(Interval(-0.5, 0.5), Interval(-0.5, 0.5))
        pr = (Interval(-0.01, 0.01), Interval(-0.01, 0.01))
        assert not max_k_solutions(box, pr, 2, field=field)
        assert max_k_solutions(box, pr, 3, field=field)

    def test_reduction_unavailable_propagates(self):
        def value(box, pr):
            return IBox(box.x1, box.x1)

        def jet(box, pr, n):
            x1 = Jet2.lift(box, 0, n)
            return x1, x1

        with pytest.raises(ReductionUnavailable):
            max_k_solutions(UNIT_SQUARE, None, 2, field=Synthetic(value, jet))

    def test_rejects_bad_k(self):
        with pytest.raises(ValueError):
            max_k_solutions(UNIT_SQUARE, None, 4, field=identity_field())

    def test_reduced_derivative_matches_jacobian_ratio(self):
        # d(g)/d(x1) = det(DF) / (dF2/dx2) wherever the reduction succeeds.
        from pcr4bp.potential import F_jet, jacobian

        rng = random.Random(0x6D1)
        pr = _point_params(0.25, 0.25)
        hits = 0
        for _ in range(100):
            r0 = rng.uniform(0.4, 1.9)
            phi0 = rng.uniform(-3.0, 3.0)
            box = IBox(
                Interval(r0 - 1e-3, r0 + 1e-3), Interval(phi0 - 1e-3, phi0 + 1e-3)
            )
            try:
                j1, j2 = F_jet(box, pr, 1)
                g = implicit_curve_jet(j1, j2, 1)
            except ReductionUnavailable:
                continue
            except Exception:
                continue
            (d11, d12), (d21, d22) = jacobian(box, pr)
            expected = (d11 * d22 - d12 * d21) / d22
            assert g.coeffs[1].intersect(expected) is not EMPTY
            hits += 1
        assert hits >= 60


class TestMirandaExists:
    def test_identity_square(self):
        assert miranda_exists(UNIT_SQUARE, None, field=identity_field())

    def test_shifted_identity_fails(self):
        two = Interval(2.0)
        field = Synthetic(lambda box, pr: IBox(box.x1 - two, box.x2 - two))
        assert not miranda_exists(UNIT_SQUARE, None, field=field)

    def test_cubic_with_quiet_edges(self):
        # f2 = x2 has no zeros on the top edge at all; the separation
        # condition must then hold vacuously for the variant to pass.
        field = cubic_normal_form()
        box = IBox(Interval(-0.6, 0.6), Interval(-0.4, 0.4))
        pr = (Interval(0.05), Interval(0.0, 0.01))
        assert miranda_exists(box, pr, field=field)

    def test_perturbed_identity_sample(self):
        rng = random.Random(0xACE5)
        located = 0
        for _ in range(100):
            a1, b1 = rng.uniform(-0.15, 0.15), rng.uniform(-0.15, 0.15)
            a2, b2 = rng.uniform(-0.15, 0.15), rng.uniform(-0.15, 0.15)
            c1 = Interval(a1)
            c2 = Interval(b1)
            c3 = Interval(a2)
            c4 = Interval(b2)

            def value(box, pr):
                f1 = box.x1 + box.x2.sin() * c1 + box.x1.sq() * c2
                f2 = box.x2 + box.x1.sin() * c3 + box.x2.sq() * c4
                return IBox(f1, f2)

            field = Synthetic(value)
            if not miranda_exists(UNIT_SQUARE, None, field=field):
                continue
            # A zero really is inside: damped fixed-point iteration from 0.
            x = y = 0.0
            for _ in range(200):
                fx = x + math.sin(y) * a1 + x * x * b1
                fy = y + math.sin(x) * a2 + y * y * b2
                x, y = x - 0.5 * fx, y - 0.5 * fy
            assert abs(x) <= 1.0 and abs(y) <= 1.0
            fx = x + math.sin(y) * a1 + x * x * b1
            fy = y + math.sin(x) * a2 + y * y * b2
            assert math.hypot(fx, fy) < 1e-8
            located += 1
        assert located >= 80


class TestComponentCertificate:
    def test_invariants_enforced(self):
        box = UNIT_SQUARE
        with pytest.raises(ValueError):
            ComponentCertificate(box, 4, False, Mechanism.DETERMINANT)
        with pytest.raises(ValueError):
            ComponentCertificate(box, 2, False, Mechanism.DETERMINANT)
        with pytest.raises(ValueError):
            ComponentCertificate(box, 1, False, Mechanism.QUADRATIC)
        cert = ComponentCertificate(box, 3, True, Mechanism.CUBIC_MIRANDA)
        assert cert.max_solutions == 3


class TestClassifyInner:
    def test_fold_family_empty(self):
        result = classify_inner(UNIT_SQUARE, Interval(-0.5, -0.1), field=fold_field())
        assert result.certified
        assert result.components == ()
        assert result.solution_bound == 0

    def test_fold_family_two_simple_zeros(self):
        result = classify_inner(UNIT_SQUARE, Interval(0.2, 0.3), field=fold_field())
        assert result.certified
        assert result.solution_bound == 2
        assert len(result.components) == 2
        assert all(
            c.mechanism is Mechanism.DETERMINANT for c in result.components
        )
        # Brute force: x = +-sqrt(p), y = 0, two real zeros.
        for p in (0.2, 0.25, 0.3):
            root = math.sqrt(p)
            covered = sum(
                1
                for c in result.components
                if c.box.contains_point(root, 0.0) or c.box.contains_point(-root, 0.0)
            )
            assert covered == 2

    def test_fold_family_across_the_fold(self):
        result = classify_inner(
            UNIT_SQUARE, Interval(-0.05, 0.05), field=fold_field()
        )
        assert result.certified
        assert result.solution_bound == 2
        assert len(result.components) == 1
        assert result.components[0].mechanism is Mechanism.QUADRATIC

    def test_unordered_parameters_short_circuit(self):
        pr = ParamRect(Interval(0.0, 0.4), Interval(0.63, 0.66))
        assert pr.ordering() is Ordering.ALL_UNORDERED
        result = classify_inner(INNER_REGION, pr)
        assert result.kind is ClassKind.S0
        assert result.components == ()

    def test_real_system_single_inner_solution(self):
        pr = _point_params(0.25, 0.3)
        result = classify_inner(INNER_REGION, pr)
        assert result.kind is ClassKind.S1
        assert result.solution_bound == 1
        cert = result.components[0]
        assert cert.mechanism is Mechanism.DETERMINANT
        assert cert.has_solution

    def test_real_system_three_inner_solutions(self):
        pr = _point_params(0.45, 0.6)
        result = classify_inner(INNER_REGION, pr)
        assert result.kind is ClassKind.S111
        assert result.solution_bound == 3
        assert all(c.mechanism is Mechanism.DETERMINANT for c in result.components)

    def test_inner_count_matches_direct_search(self):
        # The classification bound agrees with a direct certified count.
        for s, t in ((0.25, 0.3), (0.45, 0.6)):
            pr = _point_params(s, t)
            direct = count_solutions(INNER_REGION, pr, tol=1e-6)
            assert direct.conclusive
            result = classify_inner(INNER_REGION, pr)
            assert result.solution_bound == direct.solution_count
