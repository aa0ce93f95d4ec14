"""Outward-rounded interval arithmetic over IEEE double precision.

Every operation returns an interval that contains the true real result for
all real inputs drawn from the operand intervals (the inclusion property).
Directed rounding is emulated by nudging computed endpoints outward with
``math.nextafter``; all rounding lives in this module so that nothing above
it needs to know how conservatism is achieved.

Nudging policy:

* ``+ - * /`` and ``sqrt`` are correctly rounded by IEEE 754, so a one-ulp
  nudge strictly contains the true result.
* ``sin``, ``cos`` and ``asin`` come from libm, which is not correctly
  rounded but stays within one ulp on every platform we target; endpoints
  from these get a two-ulp nudge.

The empty set is the explicit singleton ``EMPTY``, never a NaN pair.
"""

from __future__ import annotations

import math
from math import inf, nextafter


class IntervalError(Exception):
    """Base class for interval arithmetic failures."""


class DivisionByZeroInterval(IntervalError):
    """Denominator interval contains zero: a genuine singularity may hide there."""


class DomainError(IntervalError):
    """Argument interval leaves the natural domain of an elementary function."""


def _down(x: float) -> float:
    return nextafter(x, -inf)


def _up(x: float) -> float:
    return nextafter(x, inf)


def _down2(x: float) -> float:
    return nextafter(nextafter(x, -inf), -inf)


def _up2(x: float) -> float:
    return nextafter(nextafter(x, inf), inf)


class _Empty:
    """The empty interval.  A singleton; compare with ``is EMPTY``."""

    __slots__ = ()

    @property
    def is_empty(self) -> bool:
        return True

    def intersect(self, other):
        return self

    def contains(self, x: float) -> bool:
        return False

    def __repr__(self) -> str:
        return "EMPTY"

    def __bool__(self) -> bool:
        return False


EMPTY = _Empty()


class Interval:
    """A closed interval [lo, hi] of doubles with lo <= hi, both finite."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float | None = None):
        if hi is None:
            hi = lo
        lo = float(lo)
        hi = float(hi)
        if not (lo <= hi):
            raise IntervalError(f"invalid endpoints [{lo!r}, {hi!r}]")
        if math.isinf(lo) or math.isinf(hi):
            raise IntervalError(f"endpoints must be finite, got [{lo!r}, {hi!r}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("Interval is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def point(x: float) -> "Interval":
        """Degenerate interval [x, x]; x is taken to be exact."""
        return Interval(x, x)

    @staticmethod
    def ratio(p: int, q: int) -> "Interval":
        """Tight enclosure of the rational p/q."""
        if q == 0:
            raise DivisionByZeroInterval("ratio with zero denominator")
        quot = p / q
        if quot * q == p and abs(p) < 2 ** 53:
            return Interval(quot, quot)
        return Interval(_down(quot), _up(quot))

    # -- basic queries ------------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return False

    def width(self) -> float:
        return self.hi - self.lo

    def mid(self) -> float:
        m = 0.5 * (self.lo + self.hi)
        # Guard against overflow-free but out-of-interval midpoints at the
        # extremes of the double range; clamping keeps mid() inside.
        if m < self.lo:
            return self.lo
        if m > self.hi:
            return self.hi
        return m

    def mag(self) -> float:
        """sup |x| over the interval."""
        return max(abs(self.lo), abs(self.hi))

    def mig(self) -> float:
        """inf |x| over the interval (0 if the interval straddles 0)."""
        if self.lo <= 0.0 <= self.hi:
            return 0.0
        return min(abs(self.lo), abs(self.hi))

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def contains_in_interior(self, other: "Interval") -> bool:
        return self.lo < other.lo and other.hi < self.hi

    def intersect(self, other):
        if other is EMPTY:
            return EMPTY
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return EMPTY
        return Interval(lo, hi)

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __eq__(self, other) -> bool:
        return isinstance(other, Interval) and self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    def __repr__(self) -> str:
        return f"[{self.lo!r}, {self.hi!r}]"

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)  # exact

    def __add__(self, other) -> "Interval":
        o = _coerce(other)
        return Interval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        o = _coerce(other)
        return Interval(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other) -> "Interval":
        return _coerce(other).__sub__(self)

    def __mul__(self, other) -> "Interval":
        o = _coerce(other)
        a, b, c, d = self.lo, self.hi, o.lo, o.hi
        p1 = a * c
        p2 = a * d
        p3 = b * c
        p4 = b * d
        return Interval(_down(min(p1, p2, p3, p4)), _up(max(p1, p2, p3, p4)))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        o = _coerce(other)
        if o.lo <= 0.0 <= o.hi:
            raise DivisionByZeroInterval(f"denominator {o} contains zero")
        a, b, c, d = self.lo, self.hi, o.lo, o.hi
        q1 = a / c
        q2 = a / d
        q3 = b / c
        q4 = b / d
        return Interval(_down(min(q1, q2, q3, q4)), _up(max(q1, q2, q3, q4)))

    def __rtruediv__(self, other) -> "Interval":
        return _coerce(other).__truediv__(self)

    def recip(self) -> "Interval":
        return _coerce(1.0).__truediv__(self)

    def sq(self) -> "Interval":
        """Square with the sign-aware lower bound (never negative)."""
        return self.powi(2)

    def powi(self, n: int) -> "Interval":
        """Integer power, exact about parity: [-1, 2]**2 == [0, 4]."""
        if n < 0:
            return self.powi(-n).recip()
        if n == 0:
            return Interval(1.0, 1.0)
        if n == 1:
            return self
        if n % 2 == 0:
            lo_abs = self.mig()
            hi_abs = self.mag()
            return Interval(max(_pow_down(lo_abs, n), 0.0), _pow_up(hi_abs, n))
        return Interval(_pow_down(self.lo, n), _pow_up(self.hi, n))

    def abs(self) -> "Interval":
        if self.lo >= 0.0:
            return self
        if self.hi <= 0.0:
            return -self
        return Interval(0.0, self.mag())

    def sqrt(self) -> "Interval":
        dom = self.intersect(_NONNEG)
        if dom is EMPTY:
            raise DomainError(f"sqrt of negative interval {self}")
        lo = math.sqrt(dom.lo)
        if lo * lo > dom.lo:
            lo = _down(lo)
        return Interval(max(lo, 0.0), _up(math.sqrt(dom.hi)))

    def sin(self) -> "Interval":
        return _sin(self)

    def cos(self) -> "Interval":
        return _cos(self)

    def arcsin(self) -> "Interval":
        dom = self.intersect(_ASIN_DOM)
        if dom is EMPTY:
            raise DomainError(f"arcsin of interval {self} outside [-1, 1]")
        return Interval(
            max(_down2(math.asin(dom.lo)), -_ASIN_LIM),
            min(_up2(math.asin(dom.hi)), _ASIN_LIM),
        )

    def arccos(self) -> "Interval":
        dom = self.intersect(_ASIN_DOM)
        if dom is EMPTY:
            raise DomainError(f"arccos of interval {self} outside [-1, 1]")
        return Interval(max(_down2(math.acos(dom.hi)), 0.0), _up2(math.acos(dom.lo)))


def _coerce(x) -> Interval:
    if isinstance(x, Interval):
        return x
    if isinstance(x, (int, float)):
        return Interval(float(x), float(x))
    raise TypeError(f"cannot mix Interval with {type(x).__name__}")


def _pow_down(x: float, n: int) -> float:
    if x == 0.0:
        return 0.0
    if x < 0.0:
        # Only odd n reaches here; x**n = -(|x|**n), so the rounding
        # direction flips along with the sign.
        return -_pow_up(-x, n)
    r = x
    for _ in range(n - 1):
        r = _down(r * x)
    return r


def _pow_up(x: float, n: int) -> float:
    if x == 0.0:
        return 0.0
    if x < 0.0:
        return -_pow_down(-x, n)
    r = x
    for _ in range(n - 1):
        r = _up(r * x)
    return r


_NONNEG = Interval(0.0, float.fromhex("0x1.fffffffffffffp+1023"))

# math.pi is the double just below the true pi, so [pi, nextafter(pi)] is the
# tightest representable enclosure.
PI = Interval(math.pi, _up(math.pi))
TWO_PI = Interval(_down(2.0 * PI.lo), _up(2.0 * PI.hi))
HALF_PI = PI * Interval(0.5)
PI_OVER_3 = PI / Interval(3.0)
PI_OVER_6 = PI / Interval(6.0)
_ASIN_DOM = Interval(-1.0, 1.0)
_ASIN_LIM = _up2(math.pi / 2.0)


def _cos(x: Interval) -> Interval:
    if x.width() >= TWO_PI.lo:
        return Interval(-1.0, 1.0)
    ca = math.cos(x.lo)
    cb = math.cos(x.hi)
    lo = min(ca, cb)
    hi = max(ca, cb)
    lo = max(_down2(lo), -1.0)
    hi = min(_up2(hi), 1.0)
    if _grid_hits(x, TWO_PI, 0):
        hi = 1.0
    if _grid_hits(x, TWO_PI, 1):
        lo = -1.0
    return Interval(lo, hi)


def _sin(x: Interval) -> Interval:
    if x.width() >= TWO_PI.lo:
        return Interval(-1.0, 1.0)
    sa = math.sin(x.lo)
    sb = math.sin(x.hi)
    lo = min(sa, sb)
    hi = max(sa, sb)
    lo = max(_down2(lo), -1.0)
    hi = min(_up2(hi), 1.0)
    # maxima at pi/2 + 2k pi, minima at -pi/2 + 2k pi
    if _grid_hits(x, TWO_PI, 0, offset=HALF_PI):
        hi = 1.0
    if _grid_hits(x, TWO_PI, 0, offset=-HALF_PI):
        lo = -1.0
    return Interval(lo, hi)


def _grid_hits(x: Interval, period: Interval, parity: int, offset: Interval | None = None) -> bool:
    """Whether some grid point offset + (2k + parity) * period/2 may lie in x.

    Conservative: answers True whenever the enclosure of a grid point
    overlaps x, so extrema are never missed.
    """
    lo, hi = x.lo, x.hi
    if offset is not None:
        lo -= offset.hi
        hi -= offset.lo
    half_lo = 0.5 * period.lo
    k_first = math.floor(lo / half_lo) - 1
    k_last = math.ceil(hi / half_lo) + 1
    for k in range(k_first, k_last + 1):
        if (k - parity) % 2 != 0:
            continue
        glo = _down(k * half_lo)
        ghi = _up(k * (0.5 * period.hi))
        if glo > ghi:
            glo, ghi = ghi, glo
        if ghi >= lo and glo <= hi:
            return True
    return False


class IBox:
    """Axis-aligned box: an interval in r crossed with an interval in phi.

    Geometry-aware bisection splits the side with the larger arc-scaled
    width, so highly eccentric boxes in polar coordinates relax toward
    roughly square patches of the plane.
    """

    __slots__ = ("r", "phi")

    def __init__(self, r: Interval, phi: Interval):
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "phi", phi)

    def __setattr__(self, name, value):
        raise AttributeError("IBox is immutable")

    # The bifurcation machinery treats an IBox as a generic (x1, x2) box.
    @property
    def x1(self) -> Interval:
        return self.r

    @property
    def x2(self) -> Interval:
        return self.phi

    def mid(self) -> tuple[float, float]:
        return (self.r.mid(), self.phi.mid())

    def widths(self) -> tuple[float, float]:
        return (self.r.width(), self.phi.width())

    def scaled_widths(self) -> tuple[float, float]:
        """(radial width, angular width times the midpoint radius)."""
        return (self.r.width(), self.phi.width() * abs(self.r.mid()))

    def max_width(self) -> float:
        return max(self.r.width(), self.phi.width())

    def bisect(self) -> tuple["IBox", "IBox"]:
        wr, wp = self.scaled_widths()
        if wr >= wp:
            m = self.r.mid()
            return (
                IBox(Interval(self.r.lo, m), self.phi),
                IBox(Interval(m, self.r.hi), self.phi),
            )
        m = self.phi.mid()
        return (
            IBox(self.r, Interval(self.phi.lo, m)),
            IBox(self.r, Interval(m, self.phi.hi)),
        )

    def bisect_dim(self, dim: int) -> tuple["IBox", "IBox"]:
        if dim == 0:
            m = self.r.mid()
            return (
                IBox(Interval(self.r.lo, m), self.phi),
                IBox(Interval(m, self.r.hi), self.phi),
            )
        m = self.phi.mid()
        return (
            IBox(self.r, Interval(self.phi.lo, m)),
            IBox(self.r, Interval(m, self.phi.hi)),
        )

    def intersect(self, other: "IBox"):
        r = self.r.intersect(other.r)
        if r is EMPTY:
            return EMPTY
        phi = self.phi.intersect(other.phi)
        if phi is EMPTY:
            return EMPTY
        return IBox(r, phi)

    def hull(self, other: "IBox") -> "IBox":
        return IBox(self.r.hull(other.r), self.phi.hull(other.phi))

    def contains_in_interior(self, other: "IBox") -> bool:
        return self.r.contains_in_interior(other.r) and self.phi.contains_in_interior(other.phi)

    def contains_point(self, r: float, phi: float) -> bool:
        return self.r.contains(r) and self.phi.contains(phi)

    def touches(self, other: "IBox", slack: float = 0.0) -> bool:
        """Edge or corner adjacency (closed boxes overlapping within slack)."""
        return (
            self.r.lo <= other.r.hi + slack
            and other.r.lo <= self.r.hi + slack
            and self.phi.lo <= other.phi.hi + slack
            and other.phi.lo <= self.phi.hi + slack
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, IBox) and self.r == other.r and self.phi == other.phi

    def __hash__(self) -> int:
        return hash((self.r, self.phi))

    def __repr__(self) -> str:
        return f"IBox({self.r!r}, {self.phi!r})"
