"""Zero certification and the adaptive bisection counter.

Two certificates drive everything: the exclusion principle (an interval
evaluation of F that misses zero proves there is no zero) and the
Krawczyk operator

    K(x) = x_c - C*F(x_c) + (I - C*DF(x)) * (x - x_c),

with ``x_c`` the midpoint of the box and ``C`` a floating-point inverse
of the midpoint Jacobian.  If K(x) lands in the strict interior of x the
map has exactly one zero in x; if K(x) misses x entirely it has none.
Every evaluation keeps the mass parameters as intervals, so a UniqueZero
verdict holds uniformly over the whole parameter rectangle.

The bisection counter sweeps a phase-space region with a depth-first
work queue, classifying boxes into the verdict lists until everything is
either certified or has been ground below the resolution floor.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

from .interval import EMPTY, IBox, Interval
from .potential import (
    F,
    ParamRect,
    SingularChord,
    chord,
    exclude_far,
    exclude_near_primary,
    jacobian,
)
from .interval import PI_OVER_6

_ONE = Interval(1.0)


class KrawczykVerdict(enum.Enum):
    EXCLUDED = "excluded"
    UNIQUE_ZERO = "unique_zero"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class KrawczykOutcome:
    verdict: KrawczykVerdict
    tight: IBox | None = None

    def __post_init__(self):
        if (self.tight is not None) != (self.verdict is KrawczykVerdict.UNIQUE_ZERO):
            raise ValueError("tight enclosure present iff the zero is unique")


def _mid_inverse(
    df: tuple[tuple[Interval, Interval], tuple[Interval, Interval]]
) -> tuple[tuple[float, float], tuple[float, float]] | None:
    """Float inverse of the midpoint of an interval matrix, or None."""
    a = df[0][0].mid()
    b = df[0][1].mid()
    c = df[1][0].mid()
    d = df[1][1].mid()
    det = a * d - b * c
    if not math.isfinite(det) or abs(det) < 1e-300:
        return None
    return ((d / det, -b / det), (-c / det, a / det))


def krawczyk(box: IBox, pr: ParamRect) -> KrawczykOutcome:
    """Certify the zero count of F on a phase box, uniformly over ``pr``."""
    fbox = F(box, pr)
    if not (fbox.x1.contains(0.0) and fbox.x2.contains(0.0)):
        return KrawczykOutcome(KrawczykVerdict.EXCLUDED)

    df = jacobian(box, pr)
    inv = _mid_inverse(df)
    if inv is None:
        return KrawczykOutcome(KrawczykVerdict.INCONCLUSIVE)
    c11, c12 = Interval(inv[0][0]), Interval(inv[0][1])
    c21, c22 = Interval(inv[1][0]), Interval(inv[1][1])

    r_mid, phi_mid = box.mid()
    center = IBox(Interval(r_mid), Interval(phi_mid))
    fc = F(center, pr)

    # I - C * DF(box)
    m11 = _ONE - (c11 * df[0][0] + c12 * df[1][0])
    m12 = -(c11 * df[0][1] + c12 * df[1][1])
    m21 = -(c21 * df[0][0] + c22 * df[1][0])
    m22 = _ONE - (c21 * df[0][1] + c22 * df[1][1])

    dr = box.r - Interval(r_mid)
    dphi = box.phi - Interval(phi_mid)

    k1 = Interval(r_mid) - (c11 * fc.x1 + c12 * fc.x2) + m11 * dr + m12 * dphi
    k2 = Interval(phi_mid) - (c21 * fc.x1 + c22 * fc.x2) + m21 * dr + m22 * dphi

    strictly_inside = (
        box.r.lo < k1.lo
        and k1.hi < box.r.hi
        and box.phi.lo < k2.lo
        and k2.hi < box.phi.hi
    )
    if strictly_inside:
        tight = IBox(k1.intersect(box.r), k2.intersect(box.phi))
        return KrawczykOutcome(KrawczykVerdict.UNIQUE_ZERO, tight)
    if k1.intersect(box.r) is EMPTY or k2.intersect(box.phi) is EMPTY:
        return KrawczykOutcome(KrawczykVerdict.EXCLUDED)
    return KrawczykOutcome(KrawczykVerdict.INCONCLUSIVE)


@dataclass
class CountReport:
    """Classified boxes from one bisection sweep at fixed parameters."""

    region: IBox
    tol: float
    yes_list: list[IBox] = field(default_factory=list)
    tight_list: list[IBox] = field(default_factory=list)
    small_list: list[IBox] = field(default_factory=list)
    no_count: int = 0
    ndt_count: int = 0
    processed: int = 0

    @property
    def solution_count(self) -> int:
        return len(self.yes_list)

    def tight_disjoint(self) -> bool:
        boxes = self.tight_list
        for i in range(len(boxes)):
            for j in range(i + 1, len(boxes)):
                if boxes[i].intersect(boxes[j]) is not EMPTY:
                    return False
        return True

    @property
    def conclusive(self) -> bool:
        return not self.small_list and self.tight_disjoint()


def _try_primary_lemmas(box: IBox, pr: ParamRect) -> bool:
    for i in (1, 2, 3):
        if exclude_near_primary(i, box, pr):
            return True
        if exclude_far(i, box, pr):
            return True
    return False


def _touches_primary(box: IBox) -> bool:
    if box.r.contains(0.0):
        return True
    for offset in (-PI_OVER_6, PI_OVER_6):
        if chord(box.r, box.phi + offset).contains(0.0):
            return True
    return False


def count_solutions(region: IBox, pr: ParamRect, tol: float = 1e-6) -> CountReport:
    """Strategy-1 sweep: count zeros of F over a fixed parameter rectangle.

    Depth-first bisection with the arc-length splitting rule.  Boxes are
    excluded by interval evaluation or the distance lemmas, certified by
    the Krawczyk operator, or split; anything narrower than ``tol`` that
    still resists lands in the small list and spoils conclusiveness.
    """
    report = CountReport(region=region, tol=tol)
    stack = [region]
    while stack:
        box = stack.pop()
        report.processed += 1

        if _touches_primary(box):
            if _try_primary_lemmas(box, pr):
                report.ndt_count += 1
                continue
            if box.max_width() <= tol:
                report.small_list.append(box)
                continue
            stack.extend(box.bisect())
            continue

        try:
            outcome = krawczyk(box, pr)
        except SingularChord:
            # wide trig enclosures may hide a primary from the chord test
            outcome = KrawczykOutcome(KrawczykVerdict.INCONCLUSIVE)

        if outcome.verdict is KrawczykVerdict.EXCLUDED:
            report.no_count += 1
        elif outcome.verdict is KrawczykVerdict.UNIQUE_ZERO:
            report.yes_list.append(box)
            report.tight_list.append(outcome.tight)
        else:
            if box.max_width() <= tol:
                report.small_list.append(box)
            else:
                stack.extend(box.bisect())
    return report


def zero_set_enclosure(
    f: Callable[[Interval], Interval],
    domain: Interval,
    rel_tol: float = 1e-3,
) -> list[Interval]:
    """Connected enclosures of the zero set of a 1-D interval function.

    Bisects ``domain`` until every surviving subinterval is narrower than
    ``rel_tol`` times the domain width, then merges adjacent survivors.
    The result covers every zero of f in the domain; components may be
    spurious (f merely close to zero), never missing.
    """
    width_floor = max(domain.width() * rel_tol, 1e-15)
    survivors: list[Interval] = []
    stack = [domain]
    while stack:
        piece = stack.pop()
        if not f(piece).contains(0.0):
            continue
        if piece.width() <= width_floor:
            survivors.append(piece)
            continue
        m = piece.mid()
        stack.append(Interval(piece.lo, m))
        stack.append(Interval(m, piece.hi))
    if not survivors:
        return []
    survivors.sort(key=lambda iv: iv.lo)
    merged = [survivors[0]]
    for piece in survivors[1:]:
        if piece.lo <= merged[-1].hi + width_floor * 0.5:
            merged[-1] = merged[-1].hull(piece)
        else:
            merged.append(piece)
    return merged
