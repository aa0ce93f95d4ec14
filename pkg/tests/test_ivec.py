"""Scalar/vector agreement for the batched interval kernels.

The scalar lane in :mod:`pcr4bp.interval` is the reference implementation.
Both lanes must enclose the true range of every operation, so on any shared
input the two results have to overlap, and their endpoints may differ only
by rounding slack.
"""

import math

import numpy as np
import pytest

from pcr4bp import ivec
from pcr4bp.interval import Interval

RNG = np.random.default_rng(0x5EED)
N = 4000


def _random_pairs(lo=-20.0, hi=20.0, max_w=3.0):
    a = RNG.uniform(lo, hi, N)
    w = RNG.uniform(0.0, max_w, N)
    return a, a + w

def _close(a, b, tol=1e-9):
    return np.all(np.abs(a - b) <= tol * np.maximum(1.0, np.maximum(np.abs(a), np.abs(b))))


def _check_against_scalar(vec_lo, vec_hi, scalars, tol=1e-9):
    s_lo = np.array([s.lo for s in scalars])
    s_hi = np.array([s.hi for s in scalars])
    # soundness of the pair: the results overlap ...
    assert np.all(vec_lo <= s_hi) and np.all(s_lo <= vec_hi)
    # ... and neither lane is systematically wider
    assert _close(vec_lo, s_lo, tol) and _close(vec_hi, s_hi, tol)


def test_add_sub_mul_match_scalar():
    alo, ahi = _random_pairs()
    blo, bhi = _random_pairs()
    sa = [Interval(l, h) for l, h in zip(alo, ahi)]
    sb = [Interval(l, h) for l, h in zip(blo, bhi)]

    lo, hi = ivec.vadd((alo, ahi), (blo, bhi))
    _check_against_scalar(lo, hi, [x + y for x, y in zip(sa, sb)])

    lo, hi = ivec.vsub((alo, ahi), (blo, bhi))
    _check_against_scalar(lo, hi, [x - y for x, y in zip(sa, sb)])

    lo, hi = ivec.vmul((alo, ahi), (blo, bhi))
    _check_against_scalar(lo, hi, [x * y for x, y in zip(sa, sb)])


def test_div_matches_scalar_on_signed_denominators():
    alo, ahi = _random_pairs()
    blo, bhi = _random_pairs(lo=0.5, hi=20.0)  # strictly positive
    sa = [Interval(l, h) for l, h in zip(alo, ahi)]
    sb = [Interval(l, h) for l, h in zip(blo, bhi)]
    lo, hi = ivec.vdiv((alo, ahi), (blo, bhi))
    _check_against_scalar(lo, hi, [x / y for x, y in zip(sa, sb)])
    # negative denominators too
    lo, hi = ivec.vdiv((alo, ahi), (-bhi, -blo))
    _check_against_scalar(lo, hi, [x / (-y) for x, y in zip(sa, sb)])


def test_sq_cube_sqrt_match_scalar():
    alo, ahi = _random_pairs()
    sa = [Interval(l, h) for l, h in zip(alo, ahi)]

    lo, hi = ivec.vsq((alo, ahi))
    _check_against_scalar(lo, hi, [x.sq() for x in sa])

    lo, hi = ivec.vcube((alo, ahi))
    _check_against_scalar(lo, hi, [x.powi(3) for x in sa])

    plo, phi = _random_pairs(lo=0.0, hi=30.0)
    sp = [Interval(l, h) for l, h in zip(plo, phi)]
    lo, hi = ivec.vsqrt((plo, phi))
    _check_against_scalar(lo, hi, [x.sqrt() for x in sp])


def test_trig_match_scalar():
    alo, ahi = _random_pairs(lo=-12.0, hi=12.0, max_w=2.0)
    sa = [Interval(l, h) for l, h in zip(alo, ahi)]
    lo, hi = ivec.vsin((alo, ahi))
    _check_against_scalar(lo, hi, [x.sin() for x in sa], tol=1e-8)
    lo, hi = ivec.vcos((alo, ahi))
    _check_against_scalar(lo, hi, [x.cos() for x in sa], tol=1e-8)


def test_trig_point_containment():
    """Midpoints evaluated in floats land inside the vector enclosures."""
    alo, ahi = _random_pairs(lo=-12.0, hi=12.0, max_w=2.0)
    mid = 0.5 * (alo + ahi)
    lo, hi = ivec.vsin((alo, ahi))
    assert np.all(lo <= np.sin(mid)) and np.all(np.sin(mid) <= hi)
    lo, hi = ivec.vcos((alo, ahi))
    assert np.all(lo <= np.cos(mid)) and np.all(np.cos(mid) <= hi)


def test_trig_interior_extrema():
    # boxes straddling known extrema must clamp to +-1
    lo = np.array([6.0, -0.1, math.pi - 0.1])
    hi = np.array([6.5, 0.1, math.pi + 0.1])
    clo, chi = ivec.vcos((lo, hi))
    assert chi[0] == 1.0  # 2*pi inside
    assert chi[1] == 1.0  # 0 inside
    assert clo[2] == -1.0  # pi inside
    slo, shi = ivec.vsin((np.array([1.5]), np.array([1.7])))
    assert shi[0] == 1.0  # pi/2 inside


def test_wide_rows_saturate():
    lo = np.array([0.0])
    hi = np.array([7.0])  # wider than 2*pi
    slo, shi = ivec.vsin((lo, hi))
    assert slo[0] == -1.0 and shi[0] == 1.0


def test_zero_mask_helpers():
    lo = np.array([-1.0, 0.5, -2.0])
    hi = np.array([1.0, 2.0, -0.5])
    assert list(ivec.contains_zero((lo, hi))) == [True, False, False]
    assert list(ivec.excludes_zero((lo, hi))) == [False, True, True]


def test_select_compresses_rows():
    lo = np.array([1.0, 2.0, 3.0])
    hi = np.array([4.0, 5.0, 6.0])
    mask = np.array([True, False, True])
    slo, shi = ivec.select((lo, hi), mask)
    assert list(slo) == [1.0, 3.0] and list(shi) == [4.0, 6.0]


def test_vpoint_and_scale():
    lo, hi = ivec.vpoint(np.array([1.5, -2.0]))
    assert list(lo) == [1.5, -2.0] and list(hi) == [1.5, -2.0]
    slo, shi = ivec.vscale((lo, hi), 2.0)
    assert np.all(slo <= [3.0, -4.0]) and np.all(shi >= [3.0, -4.0])
    assert _close(slo, np.array([3.0, -4.0]))
