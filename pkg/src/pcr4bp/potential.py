"""Amended potential of the planar problem in desingularised form.

Polar coordinates are centred at the heaviest primary; the two lighter
ones sit on the unit circle at angles +-pi/6.  Masses are parametrised by

    m1 = s*t,  m2 = (1 - s)*t,  m3 = 1 - t,

so the whole mass simplex with m1 <= m2 <= m3 maps into the rectangle
s in [0, 1/2], t in [0, 2/3].  The critical-point system solved
throughout the package is the rescaled gradient

    F1(r, phi; s, t) = r - (1 - t)/r^2 + s*t*Wr(r, phi - pi/6)
                       + (1 - s)*t*Wr(r, phi + pi/6),
    F2(r, phi; s, t) = s*Ws(r, phi - pi/6) + (1 - s)*Ws(r, phi + pi/6),

with Wr(r, a) = -(r - cos a)/d^3 - cos a and Ws(r, a) = sin a (1 - 1/d^3)
over the chord distance d(r, a) = sqrt(r^2 - 2 r cos a + 1).  The factor
1/(m1 + m2) pulled out of the angular equation is what keeps the system
nondegenerate as t -> 0, which the small-mass certification relies on.

Zeros of F over a mass rectangle are exactly the relative equilibria for
those masses.  The module also carries the coarse distance estimates that
exclude neighbourhoods of the primaries and the far field without ever
evaluating F there.
"""

from __future__ import annotations

import enum
import math
from typing import Iterator

from .interval import (
    EMPTY,
    PI_OVER_6,
    DivisionByZeroInterval,
    IBox,
    Interval,
)
from .taylor import Jet2, JetSingularity

# The phase-space type is the same interval pair used everywhere else;
# the alias keeps signatures close to the problem vocabulary.
PhasePoint = IBox

_ONE = Interval(1.0)
_TWO = Interval(2.0)
_THREE = Interval(3.0)


class SingularChord(Exception):
    """A chord distance interval touches zero: the box meets a primary."""


class Ordering(enum.Enum):
    """Position of a mass rectangle relative to m1 <= m2 <= m3."""

    ALL_ORDERED = "ordered"
    ALL_UNORDERED = "unordered"
    MIXED = "mixed"


class ParamRect:
    """Rectangle of mass parameters (s, t) with the simplex bounds baked in."""

    __slots__ = ("s", "t")

    def __init__(self, s: Interval, t: Interval):
        if s.lo < 0.0 or s.hi > 0.5:
            raise ValueError(f"s must lie in [0, 1/2], got {s}")
        # The ordered-mass region needs t <= 2/3 only; the search domain is
        # allowed to overhang it slightly (the widest published run reaches
        # t = 0.67) and the overhang is discarded by the ordering filter.
        if t.lo < 0.0 or t.hi > 0.67 + 1e-15:
            raise ValueError(f"t must lie in [0, 0.67], got {t}")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)

    def __setattr__(self, name, value):
        raise AttributeError("ParamRect is immutable")

    def masses(self) -> tuple[Interval, Interval, Interval]:
        m1 = self.s * self.t
        m2 = (_ONE - self.s) * self.t
        m3 = _ONE - self.t
        return m1, m2, m3

    def ordering(self) -> Ordering:
        """Compare the rectangle against the ordered-mass region.

        With s <= 1/2 by construction, m1 <= m2 always holds; the rectangle
        is ordered precisely where t <= 1/(2 - s).
        """
        threshold = _ONE / (_TWO - self.s)
        if self.t.hi <= threshold.lo:
            return Ordering.ALL_ORDERED
        if self.t.lo > threshold.hi:
            return Ordering.ALL_UNORDERED
        return Ordering.MIXED

    def widths(self) -> tuple[float, float]:
        return self.s.width(), self.t.width()

    def max_width(self) -> float:
        return max(self.s.width(), self.t.width())

    def bisect(self) -> tuple["ParamRect", "ParamRect"]:
        """Split the wider side; ties split s."""
        ws, wt = self.widths()
        if ws >= wt:
            m = self.s.mid()
            return (
                ParamRect(Interval(self.s.lo, m), self.t),
                ParamRect(Interval(m, self.s.hi), self.t),
            )
        m = self.t.mid()
        return (
            ParamRect(self.s, Interval(self.t.lo, m)),
            ParamRect(self.s, Interval(m, self.t.hi)),
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ParamRect) and self.s == other.s and self.t == other.t
        )

    def __hash__(self) -> int:
        return hash((self.s, self.t))

    def __repr__(self) -> str:
        return f"ParamRect(s={self.s}, t={self.t})"


def params_from_masses(m1: Interval, m2: Interval) -> tuple[Interval, Interval]:
    """Recover (s, t) = (m1/(m1+m2), m1+m2); partial inverse for round-trips."""
    total = m1 + m2
    return m1 / total, total


def chord(r: Interval, alpha: Interval) -> Interval:
    """Distance d(r, alpha) = sqrt(r^2 - 2 r cos(alpha) + 1).

    Evaluated in the completed-square form (r - cos a)^2 + sin^2 a, which
    is the same polynomial but keeps each input to a single occurrence;
    the expanded form cancels catastrophically on boxes of moderate width.
    The radicand is clipped at zero: its true range is nonnegative, and
    rounding may only push the interval evaluation slightly below.
    """
    arg = (r - alpha.cos()).sq() + alpha.sin().sq()
    return arg.sqrt()


def _w_r(r: Interval, alpha: Interval) -> Interval:
    c = alpha.cos()
    d = chord(r, alpha)
    try:
        d3 = d.powi(3)
        return -(r - c) / d3 - c
    except DivisionByZeroInterval as exc:
        raise SingularChord(f"chord touches a primary: d={d}") from exc


def _w_star_alpha(r: Interval, alpha: Interval) -> Interval:
    d = chord(r, alpha)
    try:
        return alpha.sin() * (_ONE - d.powi(3).recip())
    except DivisionByZeroInterval as exc:
        raise SingularChord(f"chord touches a primary: d={d}") from exc


def F(p: PhasePoint, pr: ParamRect) -> IBox:
    """Enclosure of the rescaled critical-point system over a phase box."""
    r, phi = p.r, p.phi
    s, t = pr.s, pr.t
    a1 = phi - PI_OVER_6
    a2 = phi + PI_OVER_6
    try:
        central = (_ONE - t) / r.sq()
    except DivisionByZeroInterval as exc:
        raise SingularChord(f"radius touches the central primary: r={r}") from exc
    f1 = r - central + s * t * _w_r(r, a1) + (_ONE - s) * t * _w_r(r, a2)
    f2 = s * _w_star_alpha(r, a1) + (_ONE - s) * _w_star_alpha(r, a2)
    return IBox(f1, f2)


def F_jet(p: PhasePoint, pr: ParamRect, order: int = 1) -> tuple[Jet2, Jet2]:
    """Jets of (F1, F2) in (r, phi) over the box; parameters stay intervals.

    The order-0 coefficients reproduce :func:`F` exactly: the jet
    evaluation follows the same operation sequence, so no extra rounding
    creeps in at the value level.
    """
    s, t = pr.s, pr.t
    jr = Jet2.lift(p, 0, order)
    jphi = Jet2.lift(p, 1, order)
    one = Jet2.constant(_ONE, order)

    def w_jets(alpha_offset: Interval) -> tuple[Jet2, Jet2]:
        a = jphi + Jet2.constant(alpha_offset, order)
        sin_a, cos_a = a.sin_cos()
        d = ((jr - cos_a).sq() + sin_a.sq()).sqrt()
        d3 = d * d * d
        w_r = -(jr - cos_a) / d3 - cos_a
        w_s = sin_a * (one - d3.recip())
        return w_r, w_s

    try:
        wr1, ws1 = w_jets(-PI_OVER_6)
        wr2, ws2 = w_jets(PI_OVER_6)
        f1 = (
            jr
            - (one - Jet2.constant(t, order)) / jr.sq()
            + wr1.scale(s * t)
            + wr2.scale((_ONE - s) * t)
        )
        f2 = ws1.scale(s) + ws2.scale(_ONE - s)
        return f1, f2
    except JetSingularity as exc:
        raise SingularChord("box touches a primary in jet evaluation") from exc


def jacobian(p: PhasePoint, pr: ParamRect) -> tuple[tuple[Interval, Interval], tuple[Interval, Interval]]:
    """Interval Jacobian of F in (r, phi) from closed-form second partials.

    Cheaper than an order-1 jet evaluation and used in the inner search
    loops; agreement with the jet route is covered by tests.
    """
    r, phi = p.r, p.phi
    s, t = pr.s, pr.t
    a1 = phi - PI_OVER_6
    a2 = phi + PI_OVER_6
    try:
        d11 = _ONE + _TWO * (_ONE - t) / r.powi(3)
        d12 = Interval(0.0)
        d21 = Interval(0.0)
        d22 = Interval(0.0)
        for alpha, weight in ((a1, s), (a2, _ONE - s)):
            sin_a = alpha.sin()
            cos_a = alpha.cos()
            d = chord(r, alpha)
            d3 = d.powi(3)
            d5 = d.powi(5)
            rc = r - cos_a
            w_rr = -d3.recip() + _THREE * rc.sq() / d5
            w_ra = sin_a * (_ONE - d3.recip()) + _THREE * r * sin_a * rc / d5
            ws_r = _THREE * sin_a * rc / d5
            ws_a = cos_a * (_ONE - d3.recip()) + _THREE * r * sin_a.sq() / d5
            wt = weight * t
            d11 = d11 + wt * w_rr
            d12 = d12 + wt * w_ra
            d21 = d21 + weight * ws_r
            d22 = d22 + weight * ws_a
        return (d11, d12), (d21, d22)
    except DivisionByZeroInterval as exc:
        raise SingularChord("box touches a primary in Jacobian evaluation") from exc


def grad_v(p: PhasePoint, m1: Interval, m2: Interval, m3: Interval) -> IBox:
    """Unrescaled polar gradient of the amended potential.

    Used only by consistency checks; the searches always work with F.
    """
    r, phi = p.r, p.phi
    a1 = phi - PI_OVER_6
    a2 = phi + PI_OVER_6
    dvdr = r - m3 / r.sq() + m1 * _w_r(r, a1) + m2 * _w_r(r, a2)
    dvdphi = m1 * r * _w_star_alpha(r, a1) + m2 * r * _w_star_alpha(r, a2)
    return IBox(dvdr, dvdphi)


def _distance_to_primary(i: int, p: PhasePoint) -> Interval:
    if i == 1:
        return chord(p.r, p.phi - PI_OVER_6)
    if i == 2:
        return chord(p.r, p.phi + PI_OVER_6)
    if i == 3:
        return p.r.abs()
    raise ValueError(f"primary index must be 1, 2 or 3, got {i}")


def exclude_near_primary(i: int, p: PhasePoint, pr: ParamRect) -> bool:
    """No critical point in the box if m_i/r_i^2 dominates the other pulls.

    Verifies the strict inequality  m_i/r_i^2 > (1-m_i)/(1-r_i)^2 + r_i + 1
    with the left side at its infimum and the right at its supremum.  A
    False return is inconclusive, never a certificate of existence.
    """
    ri = _distance_to_primary(i, p)
    mi = pr.masses()[i - 1]
    if ri.hi == 0.0:
        return False
    try:
        lhs = Interval(mi.lo) / Interval(ri.hi).sq()
        rhs = (_ONE - Interval(mi.lo)) / (_ONE - ri).sq() + ri + _ONE
    except DivisionByZeroInterval:
        return False
    return lhs.lo > rhs.hi


def exclude_far(i: int, p: PhasePoint, pr: ParamRect) -> bool:
    """No critical point in the box if r_i is large.

    Distances of at least 2 are excluded outright; otherwise the strict
    inequality  r_i - 1 > (1-m_i)/(1-r_i)^2 + m_i/r_i^2  is attempted.
    """
    ri = _distance_to_primary(i, p)
    if ri.lo >= 2.0:
        return True
    if ri.lo <= 1.0:
        return False
    mi = pr.masses()[i - 1]
    try:
        rhs = (_ONE - Interval(mi.lo)) / (_ONE - ri).sq() + Interval(mi.hi) / ri.sq()
    except DivisionByZeroInterval:
        return False
    return ri.lo - 1.0 > rhs.hi


def split_at_seam(p: PhasePoint) -> Iterator[PhasePoint]:
    """Yield sub-boxes of a phase box that crosses the angle seam at +-pi.

    Boxes already inside [-pi, pi] come back unchanged; a box sticking out
    is folded back by a full turn so downstream code never sees angles far
    outside the principal range.
    """
    if p.phi.lo >= -math.pi and p.phi.hi <= math.pi:
        yield p
        return
    lo, hi = p.phi.lo, p.phi.hi
    if lo < -math.pi:
        yield IBox(p.r, Interval(max(lo + 2.0 * math.pi, -math.pi), math.pi))
        lo = -math.pi
    if hi > math.pi:
        yield IBox(p.r, Interval(-math.pi, min(hi - 2.0 * math.pi, math.pi)))
        hi = math.pi
    yield IBox(p.r, Interval(lo, hi))
