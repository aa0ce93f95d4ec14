import math
import random

import pytest

from pcr4bp.interval import EMPTY, IBox, Interval
from pcr4bp.taylor import (
    Jet1,
    Jet2,
    JetSingularity,
    ReductionUnavailable,
    implicit_curve_jet,
    partials,
)


def _point_box(x: float, y: float) -> IBox:
    return IBox(Interval(x), Interval(y))


def _contains_approx(iv: Interval, value: float, slack: float = 1e-9) -> bool:
    return iv.lo - slack <= value <= iv.hi + slack


class TestJet1:
    def test_square_at_point(self):
        x = Jet1.variable(Interval(3.0), 2)
        sq = x * x
        assert _contains_approx(sq.coeffs[0], 9.0, 0.0)
        assert _contains_approx(sq.coeffs[1], 6.0, 0.0)
        assert _contains_approx(sq.coeffs[2], 1.0, 0.0)

    def test_division_roundtrip(self):
        x = Jet1.variable(Interval(2.0, 2.5), 4)
        y = (x * x + Jet1.constant(Interval(1.0), 4))
        z = (y / x) * x
        for a, b in zip(z.coeffs, y.coeffs):
            assert a.intersect(b) is not EMPTY

    def test_sqrt_inverts_square(self):
        x = Jet1.variable(Interval(1.5, 1.6), 5)
        r = (x * x).sqrt()
        for a, b in zip(r.coeffs, x.coeffs):
            assert a.lo - 1e-12 <= b.hi and b.lo <= a.hi + 1e-12

    def test_sin_cos_pythagorean(self):
        x = Jet1.variable(Interval(0.3, 0.4), 4)
        s, c = x.sin_cos()
        total = s * s + c * c
        assert total.coeffs[0].contains(1.0)
        for k in range(1, 5):
            assert total.coeffs[k].contains(0.0)

    def test_sin_cycle_against_closed_form(self):
        x0 = 0.7
        x = Jet1.variable(Interval(x0), 6)
        s = x.sin()
        derivs = [math.sin, math.cos, lambda t: -math.sin(t), lambda t: -math.cos(t)]
        for k in range(7):
            expected = derivs[k % 4](x0) / math.factorial(k)
            assert _contains_approx(s.coeffs[k], expected)

    def test_arcsin_half_angle_series(self):
        # arcsin(x/2) = x/2 + x^3/48 + 3 x^5 / 1280 + ...
        x = Jet1.variable(Interval(0.0), 5)
        u = x.scale(Interval(0.5))
        f = u.arcsin()
        assert _contains_approx(f.coeffs[0], 0.0, 1e-15)
        assert _contains_approx(f.coeffs[1], 0.5)
        assert _contains_approx(f.coeffs[2], 0.0, 1e-15)
        assert _contains_approx(f.coeffs[3], 1.0 / 48.0)
        assert _contains_approx(f.coeffs[4], 0.0, 1e-15)
        assert _contains_approx(f.coeffs[5], 3.0 / 1280.0)

    def test_arcsin_singular_leading(self):
        x = Jet1.variable(Interval(0.9, 1.1), 3)
        with pytest.raises(JetSingularity):
            x.arcsin()

    def test_division_by_zero_leading(self):
        x = Jet1.variable(Interval(-0.5, 0.5), 3)
        with pytest.raises(JetSingularity):
            Jet1.constant(Interval(1.0), 3) / x

    def test_powi_matches_repeated_product(self):
        x = Jet1.variable(Interval(1.1, 1.2), 4)
        cube = x.powi(3)
        manual = x * x * x
        for a, b in zip(cube.coeffs, manual.coeffs):
            assert a.lo == b.lo and a.hi == b.hi

    def test_eval_horner(self):
        x = Jet1.variable(Interval(2.0), 3)
        p = x * x * x  # (2 + d)^3
        v = p.eval(Interval(0.1))
        assert _contains_approx(v, 2.1 ** 3)


class TestJet2:
    def test_lift_shape(self):
        box = IBox(Interval(2.0, 3.0), Interval(0.0, 1.0))
        jx = Jet2.lift(box, 0, order=2)
        assert jx.coeff(0, 0) == Interval(2.0, 3.0)
        assert jx.coeff(1, 0) == Interval(1.0)
        assert jx.coeff(0, 1) == Interval(0.0)
        jy = Jet2.lift(box, 1, order=2)
        assert jy.coeff(0, 0) == Interval(0.0, 1.0)
        assert jy.coeff(0, 1) == Interval(1.0)
        assert jy.coeff(1, 0) == Interval(0.0)

    def test_identity_roundtrip(self):
        box = IBox(Interval(1.0, 1.5), Interval(-0.5, 0.5))
        assert Jet2.lift(box, 0, 3).value() == box.x1
        assert Jet2.lift(box, 1, 3).value() == box.x2

    def test_pythagorean_identity(self):
        box = IBox(Interval(0.2, 0.3), Interval(1.0, 1.2))
        s, c = Jet2.lift(box, 1, 3).sin_cos()
        total = s * s + c * c
        assert total.coeff(0, 0).contains(1.0)
        for i in range(4):
            for j in range(4 - i):
                if i == j == 0:
                    continue
                assert total.coeff(i, j).contains(0.0)

    def test_inverse_distance_first_partial_fd(self):
        rng = random.Random(1234)
        for _ in range(20):
            r0 = rng.uniform(1.3, 1.9)
            a0 = rng.uniform(0.5, 2.5)

            def invd(r, a):
                return 1.0 / math.sqrt(r * r - 2.0 * r * math.cos(a) + 1.0)

            h = 1e-5
            fd = (invd(r0 + h, a0) - invd(r0 - h, a0)) / (2.0 * h)

            box = _point_box(r0, a0)
            r = Jet2.lift(box, 0, 2)
            al = Jet2.lift(box, 1, 2)
            d2 = r.sq() - r.scale(Interval(2.0)) * al.cos() + Jet2.constant(Interval(1.0), 2)
            jet = d2.sqrt().recip()
            got = jet.partials(1, 0).mid()
            assert abs(got - fd) <= 1e-6 * max(1.0, abs(fd))

    def test_partials_second_derivative(self):
        box = IBox(Interval(1.0, 2.0), Interval(0.0, 1.0))
        f = Jet2.lift(box, 0, 3).sq()
        assert f.partials(2, 0).contains(2.0)
        assert f.partials(0, 0) == f.value()

    def test_partials_against_symbolic_polynomials(self):
        rng = random.Random(99)
        for _ in range(15):
            terms = [
                (rng.uniform(-2, 2), i, j)
                for i in range(5)
                for j in range(5 - i)
                if rng.random() < 0.5
            ]
            if not terms:
                continue
            x0, y0 = rng.uniform(-1, 1), rng.uniform(-1, 1)
            box = _point_box(x0, y0)
            jx = Jet2.lift(box, 0, 4)
            jy = Jet2.lift(box, 1, 4)
            jet = Jet2.constant(Interval(0.0), 4)
            for c, i, j in terms:
                jet = jet + (jx.powi(i) * jy.powi(j)).scale(Interval(c))
            for a in range(3):
                for b in range(3 - a):
                    oracle = 0.0
                    for c, i, j in terms:
                        if i >= a and j >= b:
                            coeff = (
                                c
                                * (math.factorial(i) // math.factorial(i - a))
                                * (math.factorial(j) // math.factorial(j - b))
                            )
                            oracle += coeff * x0 ** (i - a) * y0 ** (j - b)
                    assert _contains_approx(jet.partials(a, b), oracle, 1e-8)

    def test_truncation_consistency(self):
        box = IBox(Interval(1.1, 1.3), Interval(0.4, 0.6))
        def build(order):
            r = Jet2.lift(box, 0, order)
            a = Jet2.lift(box, 1, order)
            return (r.sq() + a.sin()).sqrt().recip()
        lo_order = build(4)
        hi_order = build(6)
        for i in range(5):
            for j in range(5 - i):
                lo_c = lo_order.coeff(i, j)
                hi_c = hi_order.coeff(i, j)
                assert lo_c.intersect(hi_c) is not EMPTY
                assert abs(lo_c.lo - hi_c.lo) < 1e-10 and abs(lo_c.hi - hi_c.hi) < 1e-10


class TestImplicitCurve:
    def test_linear_identity_branch(self):
        box = IBox(Interval(-0.1, 0.1), Interval(-0.1, 0.1))
        f1 = Jet2.lift(box, 0, 3) + Jet2.lift(box, 1, 3)
        f2 = Jet2.lift(box, 1, 3) - Jet2.lift(box, 0, 3)
        g = implicit_curve_jet(f1, f2, 3)
        assert g.coeffs[1].contains(2.0)
        assert g.coeffs[1].width() < 1e-12

    def test_linear_system_determinant(self):
        # A = [[3, 1], [2, 5]]: det = 13, g' = det / A22 = 2.6
        box = IBox(Interval(-0.05, 0.05), Interval(-0.05, 0.05))
        x, y = Jet2.lift(box, 0, 2), Jet2.lift(box, 1, 2)
        f1 = x.scale(Interval(3.0)) + y.scale(Interval(1.0))
        f2 = x.scale(Interval(2.0)) + y.scale(Interval(5.0))
        g = implicit_curve_jet(f1, f2, 2)
        assert g.coeffs[1].contains(13.0 / 5.0)

    def test_fold_normal_form(self):
        # f2 = y - x^2 defines y = x^2; g = y has g' containing 0, g'' = 2
        box = IBox(Interval(-0.1, 0.1), Interval(0.0, 0.01))
        x, y = Jet2.lift(box, 0, 3), Jet2.lift(box, 1, 3)
        f2 = y - x.sq()
        g = implicit_curve_jet(y, f2, 3)
        assert g.coeffs[1].contains(0.0)
        d2 = g.coeffs[2] * Interval(2.0)  # 2! * c2
        assert d2.contains(2.0)
        assert d2.width() < 1e-9

    def test_monotonicity_failure_signals(self):
        box = IBox(Interval(-0.1, 0.1), Interval(-0.1, 0.1))
        x, y = Jet2.lift(box, 0, 2), Jet2.lift(box, 1, 2)
        f2 = y.sq() - x  # df2/dy straddles zero on this box
        with pytest.raises(ReductionUnavailable):
            implicit_curve_jet(x, f2, 2)

    def test_chain_rule_cross_check(self):
        # nonlinear system: g' jet enclosure meets det(Df)/(df2/dy)
        box = IBox(Interval(0.95, 1.05), Interval(0.95, 1.06))
        x, y = Jet2.lift(box, 0, 2), Jet2.lift(box, 1, 2)
        f1 = x.sin() + y
        f2 = x * y - Jet2.constant(Interval(1.0), 2)
        g = implicit_curve_jet(f1, f2, 2)
        d11 = f1.partials(1, 0)
        d12 = f1.partials(0, 1)
        d21 = f2.partials(1, 0)
        d22 = f2.partials(0, 1)
        det = d11 * d22 - d12 * d21
        independent = det / d22
        assert g.coeffs[1].intersect(independent) is not EMPTY

    def test_module_level_partials_alias(self):
        box = _point_box(1.0, 2.0)
        f = Jet2.lift(box, 0, 2) * Jet2.lift(box, 1, 2)
        assert partials(f, 1, 1).contains(1.0)
