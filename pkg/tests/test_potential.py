import math
import random

import pytest

from pcr4bp.interval import EMPTY, IBox, Interval
from pcr4bp.potential import (
    F,
    F_jet,
    Ordering,
    ParamRect,
    PhasePoint,
    SingularChord,
    chord,
    exclude_far,
    exclude_near_primary,
    grad_v,
    jacobian,
    params_from_masses,
    split_at_seam,
)


def _rect(s_lo, s_hi, t_lo, t_hi) -> ParamRect:
    return ParamRect(Interval(s_lo, s_hi), Interval(t_lo, t_hi))


def _pbox(r_lo, r_hi, p_lo, p_hi) -> PhasePoint:
    return IBox(Interval(r_lo, r_hi), Interval(p_lo, p_hi))


class TestChord:
    def test_at_center(self):
        for a in (0.0, 1.0, -2.5):
            assert chord(Interval(0.0), Interval(a)).contains(1.0)

    def test_on_primary(self):
        assert chord(Interval(1.0), Interval(0.0)).contains(0.0)

    def test_antipodal(self):
        d = chord(Interval(1.0), Interval(math.pi - 1e-16, math.pi + 1e-16))
        assert d.contains(2.0)

    def test_triangle_inequality_sample(self):
        rng = random.Random(7)
        for _ in range(50):
            r = rng.uniform(0.0, 2.0)
            a = rng.uniform(-3.0, 3.0)
            d = chord(Interval(r), Interval(a))
            true = math.hypot(r - math.cos(a), math.sin(a))
            assert d.lo - 1e-12 <= true <= d.hi + 1e-12


class TestParamRect:
    def test_validation(self):
        with pytest.raises(ValueError):
            _rect(-0.1, 0.2, 0.1, 0.2)
        with pytest.raises(ValueError):
            _rect(0.0, 0.6, 0.1, 0.2)
        with pytest.raises(ValueError):
            _rect(0.0, 0.5, 0.0, 0.7)

    def test_masses_sum_to_one(self):
        pr = _rect(0.1, 0.3, 0.2, 0.5)
        m1, m2, m3 = pr.masses()
        total = m1 + m2 + m3
        assert total.contains(1.0)

    def test_mass_roundtrip(self):
        pr = _rect(0.2, 0.25, 0.3, 0.35)
        m1, m2, _ = pr.masses()
        s, t = params_from_masses(m1, m2)
        assert s.intersect(pr.s) is not EMPTY
        assert t.intersect(pr.t) is not EMPTY
        # point rectangles come back containing the original values
        pt = _rect(0.25, 0.25, 0.25, 0.25)
        m1, m2, _ = pt.masses()
        s, t = params_from_masses(m1, m2)
        assert s.contains(0.25) and t.contains(0.25)

    def test_ordering_classification(self):
        # strictly inside the ordered region (the boundary itself cannot be
        # certified with outward rounding and classifies as mixed)
        assert _rect(0.0, 0.5, 0.0, 0.49).ordering() is Ordering.ALL_ORDERED
        assert _rect(0.0, 0.1, 0.53, 0.6).ordering() is Ordering.ALL_UNORDERED
        assert _rect(0.0, 0.5, 0.4, 2.0 / 3.0).ordering() is Ordering.MIXED

    def test_bisect_covers(self):
        pr = _rect(0.0, 0.5, 0.2, 0.3)
        a, b = pr.bisect()
        assert a.s.hi == b.s.lo  # s was wider
        assert a.t == pr.t and b.t == pr.t


class TestF:
    def test_symmetric_axis_zero(self):
        pr = _rect(0.5, 0.5, 0.3, 0.3)
        for r in (0.5, 0.9, 1.4, 1.9):
            out = F(_pbox(r, r, 0.0, 0.0), pr)
            assert out.x2.contains(0.0)

    def test_symmetry_reflection(self):
        # s = 1/2: F1 even in phi, F2 odd in phi
        pr = _rect(0.5, 0.5, 0.4, 0.4)
        p = _pbox(1.2, 1.25, 0.3, 0.4)
        q = _pbox(1.2, 1.25, -0.4, -0.3)
        fp, fq = F(p, pr), F(q, pr)
        assert fp.x1.intersect(fq.x1) is not EMPTY
        assert fp.x2.intersect(-fq.x2) is not EMPTY

    def test_singularity_signalled(self):
        pr = _rect(0.25, 0.25, 0.25, 0.25)
        with pytest.raises(SingularChord):
            F(_pbox(0.95, 1.05, math.pi / 6 - 0.01, math.pi / 6 + 0.01), pr)

    def test_gradient_consistency_samples(self):
        # F and the unrescaled gradient vanish together (away from primaries)
        pr = _rect(0.25, 0.25, 0.25, 0.25)
        m1, m2, m3 = pr.masses()
        rng = random.Random(42)
        for _ in range(40):
            p = _pbox(*(lambda r, a: (r, r, a, a))(rng.uniform(0.4, 1.9), rng.uniform(-3.0, 3.0)))
            try:
                f = F(p, pr)
                g = grad_v(p, m1, m2, m3)
            except SingularChord:
                continue
            # dV/dr == F1 after the rescale by 1 (radial part is unscaled)
            assert f.x1.intersect(g.x1) is not EMPTY
            # dV/dphi = r * t * F2
            scaled = p.r * pr.t * f.x2
            assert scaled.intersect(g.x2) is not EMPTY

    def test_jet_order0_matches_value(self):
        pr = _rect(0.2, 0.3, 0.3, 0.4)
        p = _pbox(1.1, 1.2, 0.5, 0.6)
        f = F(p, pr)
        j1, j2 = F_jet(p, pr, order=1)
        assert j1.value() == f.x1
        assert j2.value() == f.x2


class TestJacobian:
    def test_against_jet_partials(self):
        rng = random.Random(5)
        for _ in range(25):
            r0 = rng.uniform(0.4, 1.9)
            a0 = rng.uniform(-3.0, 3.0)
            p = _pbox(r0, r0 + 0.01, a0, a0 + 0.01)
            pr = _rect(0.2, 0.22, 0.3, 0.32)
            try:
                (d11, d12), (d21, d22) = jacobian(p, pr)
                j1, j2 = F_jet(p, pr, order=1)
            except SingularChord:
                continue
            pairs = [
                (d11, j1.partials(1, 0)),
                (d12, j1.partials(0, 1)),
                (d21, j2.partials(1, 0)),
                (d22, j2.partials(0, 1)),
            ]
            for analytic, jet in pairs:
                assert analytic.intersect(jet) is not EMPTY

    def test_f2_phi_finite_difference(self):
        pr = _rect(0.3, 0.3, 0.2, 0.2)
        rng = random.Random(11)
        h = 1e-5
        for _ in range(20):
            r0 = rng.uniform(0.5, 1.8)
            a0 = rng.uniform(-2.8, 2.8)
            if abs(abs(a0) - math.pi / 6) < 0.2 and abs(r0 - 1.0) < 0.2:
                continue
            f_hi = F(_pbox(r0, r0, a0 + h, a0 + h), pr).x2.mid()
            f_lo = F(_pbox(r0, r0, a0 - h, a0 - h), pr).x2.mid()
            fd = (f_hi - f_lo) / (2.0 * h)
            (_, _), (_, d22) = jacobian(_pbox(r0, r0, a0, a0), pr)
            assert d22.lo - 1e-4 <= fd <= d22.hi + 1e-4


class TestExclusion:
    def test_heaviest_primary_third(self):
        # m3 >= 1/3 on the whole parameter domain: the inner disk is dead
        pr = _rect(0.0, 0.5, 0.0, 2.0 / 3.0)
        box = _pbox(0.05, 1.0 / 3.0, -math.pi, math.pi)
        assert exclude_near_primary(3, box, pr)

    def test_light_primary_disk(self):
        # m1 ~ 0.01 excludes a disk of radius sqrt(m1)/2 = 0.05 around p1
        pr = _rect(0.1, 0.1, 0.1, 0.1)
        box = _pbox(0.96, 1.04, math.pi / 6, math.pi / 6)
        assert exclude_near_primary(1, box, pr)

    def test_refined_radius_by_bisection(self):
        # largest excluded point radius around p3 for m3 >= 1/3
        pr = _rect(0.0, 0.5, 0.0, 2.0 / 3.0)

        def holds(radius: float) -> bool:
            return exclude_near_primary(3, _pbox(radius, radius, 0.0, 0.0), pr)

        lo, hi = 0.3, 0.4
        assert holds(lo) and not holds(hi)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if holds(mid):
                lo = mid
            else:
                hi = mid
        assert lo > 0.34
        assert hi < 0.3406

    def test_far_fast_path(self):
        pr = _rect(0.0, 0.5, 0.0, 0.5)
        assert exclude_far(3, _pbox(2.0, 2.5, 0.0, 0.1), pr)

    def test_far_inequality_fails_massless(self):
        pr = _rect(0.0, 0.0, 0.0, 0.0)  # m1 = 0
        # chord to p1 around 1.5
        assert not exclude_far(1, _pbox(2.5, 2.5, math.pi / 6, math.pi / 6), pr)

    def test_far_straddling_is_inconclusive(self):
        # m1 = 0 and a chord to p1 spanning [1.9, 2.1]: the inequality holds
        # at the far end of the interval but fails at the near end, so the
        # interval check must refuse to certify
        pr = _rect(0.0, 0.0, 0.0, 0.0)
        assert not exclude_far(1, _pbox(2.9, 3.1, math.pi / 6, math.pi / 6), pr)

    def test_exclusion_gradient_soundness(self):
        # wherever a lemma fires, the true gradient cannot vanish
        rng = random.Random(17)
        pr = _rect(0.1, 0.12, 0.3, 0.32)
        m1, m2, m3 = pr.masses()
        hits = 0
        for _ in range(400):
            r0 = rng.uniform(0.02, 0.33)
            a0 = rng.uniform(-3.1, 3.1)
            box = _pbox(r0, r0, a0, a0)
            if exclude_near_primary(3, box, pr):
                hits += 1
                g = grad_v(box, m1, m2, m3)
                assert not (g.x1.contains(0.0) and g.x2.contains(0.0))
        assert hits > 100  # the lemma actually fired on the sample

    def test_index_validation(self):
        pr = _rect(0.1, 0.1, 0.1, 0.1)
        with pytest.raises(ValueError):
            exclude_near_primary(4, _pbox(0.1, 0.1, 0.0, 0.0), pr)


class TestSeam:
    def test_inside_untouched(self):
        p = _pbox(1.0, 1.1, -3.0, 3.0)
        assert list(split_at_seam(p)) == [p]

    def test_overhang_folds_back(self):
        p = _pbox(1.0, 1.1, 3.0, 3.5)
        parts = list(split_at_seam(p))
        assert len(parts) == 2
        for q in parts:
            assert -math.pi <= q.phi.lo <= q.phi.hi <= math.pi
