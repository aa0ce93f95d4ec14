import math

import pytest

from pcr4bp.interval import EMPTY, IBox, Interval
from pcr4bp.potential import ParamRect
from pcr4bp.solve import (
    CountReport,
    KrawczykOutcome,
    KrawczykVerdict,
    count_solutions,
    krawczyk,
    zero_set_enclosure,
)

SEARCH_REGION = IBox(
    Interval(1.0 / 3.0, 2.0), Interval(-math.pi, math.pi)
)


def _point_params(s: float, t: float) -> ParamRect:
    return ParamRect(Interval(s), Interval(t))


def test_one_dimensional_hand_example():
    """Krawczyk for f(x) = x^2 - 2 on [1.3, 1.5] with C = 1/2.8.

    Hand evaluation: K = 1.4 - (1.96 - 2)/2.8 + (1 - [2.6, 3]/2.8)*[-0.1, 0.1]
                       = 1.4142857... + [-0.0714..., 0.0714...]*[-0.1, 0.1]
                       = [1.40714..., 1.42142...]
    which is strictly inside the input, certifying the unique zero sqrt(2).
    """
    x = Interval(1.3, 1.5)
    xc = Interval(1.4)
    c = Interval(1.0) / Interval(2.8)
    fc = xc.sq() - Interval(2.0)
    df = Interval(2.0) * x
    k = xc - c * fc + (Interval(1.0) - c * df) * (x - xc)
    assert x.lo < k.lo and k.hi < x.hi
    assert abs(k.lo - 1.4071428571) < 1e-9
    assert abs(k.hi - 1.4214285714) < 1e-9
    assert k.contains(math.sqrt(2.0))


def test_exclusion_far_from_zero():
    pr = _point_params(0.25, 0.25)
    box = IBox(Interval(0.40, 0.45), Interval(0.10, 0.15))
    out = krawczyk(box, pr)
    assert out.verdict is KrawczykVerdict.EXCLUDED
    assert out.tight is None


def test_outcome_invariant():
    with pytest.raises(ValueError):
        KrawczykOutcome(KrawczykVerdict.EXCLUDED, tight=SEARCH_REGION)
    with pytest.raises(ValueError):
        KrawczykOutcome(KrawczykVerdict.UNIQUE_ZERO, tight=None)


class TestCountSolutions:
    def test_quarter_quarter_eight(self):
        report = count_solutions(SEARCH_REGION, _point_params(0.25, 0.25), tol=1e-6)
        assert report.solution_count == 8
        assert report.conclusive
        assert not report.small_list
        for box, tight in zip(report.yes_list, report.tight_list):
            assert box.contains_in_interior(tight) or box.r.contains(tight.r.mid())

    def test_nine_twentieths_ten(self):
        report = count_solutions(
            SEARCH_REGION, _point_params(0.45, 0.6), tol=1e-6
        )
        assert report.solution_count == 10
        assert report.conclusive

    def test_krawczyk_confirms_each_certified_box(self):
        pr = _point_params(0.25, 0.25)
        report = count_solutions(SEARCH_REGION, pr, tol=1e-6)
        for box in report.yes_list:
            assert krawczyk(box, pr).verdict is KrawczykVerdict.UNIQUE_ZERO

    def test_small_excluded_region(self):
        pr = _point_params(0.25, 0.25)
        region = IBox(Interval(0.40, 0.41), Interval(0.10, 0.11))
        report = count_solutions(region, pr, tol=1e-6)
        assert report.solution_count == 0
        assert report.no_count == 1
        assert report.processed == 1
        assert report.conclusive

    def test_monotone_refinement(self):
        pr = _point_params(0.25, 0.25)
        coarse = count_solutions(SEARCH_REGION, pr, tol=1e-4)
        fine = count_solutions(SEARCH_REGION, pr, tol=1e-6)
        assert fine.solution_count >= coarse.solution_count

    def test_parameter_inflation_robustness(self):
        h = 5e-9
        pr = ParamRect(Interval(0.25 - h, 0.25 + h), Interval(0.25 - h, 0.25 + h))
        report = count_solutions(SEARCH_REGION, pr, tol=1e-6)
        assert report.solution_count == 8
        assert report.conclusive

    def test_tight_boxes_disjoint(self):
        report = count_solutions(SEARCH_REGION, _point_params(0.45, 0.6), tol=1e-6)
        assert report.tight_disjoint()


class TestZeroSetEnclosure:
    def test_single_root(self):
        out = zero_set_enclosure(lambda x: x.sq() - Interval(2.0), Interval(0.0, 2.0))
        assert len(out) == 1
        assert out[0].contains(math.sqrt(2.0))
        assert out[0].width() < 0.01

    def test_two_roots(self):
        def f(x: Interval) -> Interval:
            return (x - Interval(1.0)) * (x - Interval(2.0))

        out = zero_set_enclosure(f, Interval(0.0, 3.0))
        assert len(out) == 2
        assert out[0].contains(1.0)
        assert out[1].contains(2.0)

    def test_no_roots(self):
        out = zero_set_enclosure(lambda x: x.sq() + Interval(1.0), Interval(-1.0, 1.0))
        assert out == []
