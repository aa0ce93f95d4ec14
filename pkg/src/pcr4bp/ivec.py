"""Vectorized mirror of the scalar interval kernel.

An interval vector is a pair ``(lo, hi)`` of equally shaped float64 arrays.
Each function below implements the same outward-rounded enclosure as the
corresponding method in :mod:`pcr4bp.interval`, lifted elementwise over
numpy arrays, which is what makes the adaptive searches affordable: one
pass here classifies tens of thousands of boxes.

The scalar lane stays the reference implementation.  The equivalence test
drives both lanes over random boxes and requires the vector result to
contain the scalar one, so a rounding bug on either side cannot hide.

Callers must mask out rows whose denominators straddle zero before calling
``vdiv``/``vrecip``; these functions do not signal singularities themselves.
"""

from __future__ import annotations

import numpy as np

from .interval import PI

_NINF = np.float64(-np.inf)
_PINF = np.float64(np.inf)

PI_LO = PI.lo
PI_HI = PI.hi
TWOPI_LO = np.nextafter(2.0 * PI_LO, -np.inf)
TWOPI_HI = np.nextafter(2.0 * PI_HI, np.inf)

IVec = tuple[np.ndarray, np.ndarray]


def nd(x: np.ndarray) -> np.ndarray:
    return np.nextafter(x, _NINF)


def nu(x: np.ndarray) -> np.ndarray:
    return np.nextafter(x, _PINF)


def nd2(x: np.ndarray) -> np.ndarray:
    return np.nextafter(np.nextafter(x, _NINF), _NINF)


def nu2(x: np.ndarray) -> np.ndarray:
    return np.nextafter(np.nextafter(x, _PINF), _PINF)


def vpoint(x) -> IVec:
    a = np.asarray(x, dtype=np.float64)
    return (a.copy(), a.copy())


def vadd(a: IVec, b: IVec) -> IVec:
    return (nd(a[0] + b[0]), nu(a[1] + b[1]))


def vsub(a: IVec, b: IVec) -> IVec:
    return (nd(a[0] - b[1]), nu(a[1] - b[0]))


def vneg(a: IVec) -> IVec:
    return (-a[1], -a[0])


def vmul(a: IVec, b: IVec) -> IVec:
    p1 = a[0] * b[0]
    p2 = a[0] * b[1]
    p3 = a[1] * b[0]
    p4 = a[1] * b[1]
    lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
    hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
    return (nd(lo), nu(hi))


def vscale(a: IVec, c: float) -> IVec:
    """Multiply by an exact nonnegative scalar."""
    if c < 0.0:
        raise ValueError("vscale expects a nonnegative scalar")
    return (nd(a[0] * c), nu(a[1] * c))


def vdiv(a: IVec, b: IVec) -> IVec:
    q1 = a[0] / b[0]
    q2 = a[0] / b[1]
    q3 = a[1] / b[0]
    q4 = a[1] / b[1]
    lo = np.minimum(np.minimum(q1, q2), np.minimum(q3, q4))
    hi = np.maximum(np.maximum(q1, q2), np.maximum(q3, q4))
    return (nd(lo), nu(hi))


def vrecip(a: IVec) -> IVec:
    return vdiv(vpoint(np.ones_like(a[0])), a)


def vsq(a: IVec) -> IVec:
    lo_abs = np.where((a[0] <= 0.0) & (a[1] >= 0.0), 0.0, np.minimum(np.abs(a[0]), np.abs(a[1])))
    hi_abs = np.maximum(np.abs(a[0]), np.abs(a[1]))
    return (np.maximum(nd(lo_abs * lo_abs), 0.0), nu(hi_abs * hi_abs))


def vcube(a: IVec) -> IVec:
    lo = nd(nd(a[0] * a[0]) * a[0])
    hi = nu(nu(a[1] * a[1]) * a[1])
    return (lo, hi)


def vsqrt(a: IVec) -> IVec:
    lo = np.maximum(a[0], 0.0)
    return (np.maximum(nd(np.sqrt(lo)), 0.0), nu(np.sqrt(np.maximum(a[1], 0.0))))


def _grid_overlap(lo: np.ndarray, hi: np.ndarray, parity: int) -> np.ndarray:
    """Rows where some multiple k*pi with k = parity (mod 2) may meet [lo, hi].

    Assumes widths below 2*pi (the trig wrappers special-case wider rows).
    """
    hit = np.zeros(lo.shape, dtype=bool)
    k_base = np.floor(lo / PI_LO)
    for dk in range(-2, 4):
        k = k_base + dk
        want = (np.mod(k, 2.0) == float(parity % 2))
        g1 = k * PI_LO
        g2 = k * PI_HI
        glo = nd(np.minimum(g1, g2))
        ghi = nu(np.maximum(g1, g2))
        hit |= want & (ghi >= lo) & (glo <= hi)
    return hit


def vcos(a: IVec) -> IVec:
    lo_in, hi_in = a
    ca = np.cos(lo_in)
    cb = np.cos(hi_in)
    lo = np.maximum(nd2(np.minimum(ca, cb)), -1.0)
    hi = np.minimum(nu2(np.maximum(ca, cb)), 1.0)
    hit_max = _grid_overlap(lo_in, hi_in, 0)
    hit_min = _grid_overlap(lo_in, hi_in, 1)
    wide = (hi_in - lo_in) >= TWOPI_LO
    hi = np.where(hit_max | wide, 1.0, hi)
    lo = np.where(hit_min | wide, -1.0, lo)
    return (lo, hi)


def vsin(a: IVec) -> IVec:
    # sin extrema sit on the half-integer grid; shifting by pi/2 reuses the
    # integer-multiple test: sin has a max where x - pi/2 hits even k*pi.
    lo_in, hi_in = a
    sa = np.sin(lo_in)
    sb = np.sin(hi_in)
    lo = np.maximum(nd2(np.minimum(sa, sb)), -1.0)
    hi = np.minimum(nu2(np.maximum(sa, sb)), 1.0)
    half_lo = 0.5 * PI_LO
    half_hi = nu(0.5 * PI_HI)
    shifted_lo = nd(lo_in - half_hi)
    shifted_hi = nu(hi_in - half_lo)
    hit_max = _grid_overlap(shifted_lo, shifted_hi, 0)
    shifted_lo2 = nd(lo_in + half_lo)
    shifted_hi2 = nu(hi_in + half_hi)
    hit_min = _grid_overlap(shifted_lo2, shifted_hi2, 0)
    wide = (hi_in - lo_in) >= TWOPI_LO
    hi = np.where(hit_max | wide, 1.0, hi)
    lo = np.where(hit_min | wide, -1.0, lo)
    return (lo, hi)


def contains_zero(a: IVec) -> np.ndarray:
    return (a[0] <= 0.0) & (a[1] >= 0.0)


def excludes_zero(a: IVec) -> np.ndarray:
    return (a[0] > 0.0) | (a[1] < 0.0)


def select(a: IVec, mask: np.ndarray) -> IVec:
    return (a[0][mask], a[1][mask])
