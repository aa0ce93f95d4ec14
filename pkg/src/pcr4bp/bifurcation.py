"""Certificates bounding how many equilibria a region can hold.

The machinery here upgrades plain zero exclusion to structural statements.
A Jacobian determinant that excludes zero caps a component at one solution;
a monotone level set combined with a derivative bound on the reduced
one-variable problem caps it at two or three; and a corner-sign topological
argument proves that at least one solution actually exists.  classify_inner
glues these together into the per-parameter-rectangle classification that
the bifurcation search consumes.

Every operation accepts an optional ``field`` so that the same certificates
can be exercised on synthetic normal forms (folds, cusps, perturbed
identities) in tests; the default field is the equilibrium system itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .interval import (
    EMPTY,
    DivisionByZeroInterval,
    IBox,
    Interval,
    IntervalError,
    PI_OVER_6,
)
from .potential import (
    Ordering,
    ParamRect,
    SingularChord,
    chord,
    exclude_far,
    exclude_near_primary,
)
from .solve import KrawczykVerdict, count_solutions, krawczyk, zero_set_enclosure
from .taylor import Jet2, JetSingularity, ReductionUnavailable, implicit_curve_jet

__all__ = [
    "Classification",
    "ClassKind",
    "ComponentCertificate",
    "EquilibriumField",
    "Mechanism",
    "VectorField",
    "certify_single_component",
    "classify_inner",
    "max_k_solutions",
    "miranda_exists",
    "no_bifurcation",
]

# Anything the interval kernel can signal while evaluating on a box that
# merely means "this box could not be resolved", never "this box is clean".
_EVAL_ERRORS = (SingularChord, IntervalError, JetSingularity)


class VectorField:
    """A planar map with interval enclosures and Taylor jets.

    ``pr`` is an opaque parameter payload threaded through unchanged;
    the default field expects a ParamRect, synthetic test fields may
    carry a bare Interval or a tuple.
    """

    def value(self, box: IBox, pr) -> IBox:
        raise NotImplementedError

    def jet(self, box: IBox, pr, order: int):
        raise NotImplementedError

    def jacobian(self, box: IBox, pr):
        j1, j2 = self.jet(box, pr, 1)
        return (
            (j1.partials(1, 0), j1.partials(0, 1)),
            (j2.partials(1, 0), j2.partials(0, 1)),
        )

    def excluded(self, box: IBox, pr) -> bool:
        """Domain-specific exclusion for boxes the map cannot be evaluated on."""
        return False

    def root_certificate(self, box: IBox, pr):
        """Optional existence hook; return a tight IBox around a proven zero, or None."""
        return None


class EquilibriumField(VectorField):
    """The rotating-frame equilibrium system in polar coordinates."""

    def value(self, box: IBox, pr: ParamRect) -> IBox:
        return F(box, pr)

    def jet(self, box: IBox, pr: ParamRect, order: int):
        return F_jet(box, pr, order)

    def jacobian(self, box: IBox, pr: ParamRect):
        return jacobian(box, pr)

    def excluded(self, box: IBox, pr: ParamRect) -> bool:
        # Interval evaluation within a few diameters of a primary is too
        # wide to separate from zero, so such boxes route to the distance
        # lemmas instead of the plain value test.
        reach = 3.0 * (box.r.width() + box.r.hi * box.phi.width())
        near = box.r.lo <= reach
        if not near:
            for offset in (-PI_OVER_6, PI_OVER_6):
                if chord(box.r, box.phi + offset).lo <= reach:
                    near = True
                    break
        if not near:
            return False
        for i in (1, 2, 3):
            if exclude_near_primary(i, box, pr) or exclude_far(i, box, pr):
                return True
        return False

    def keep_mask(self, rows: np.ndarray, pr: ParamRect) -> np.ndarray:
        """Batched survivor mask for covers; see engine.candidate_mask."""
        from .engine import candidate_mask

        return candidate_mask(rows, pr)

    def root_certificate(self, box: IBox, pr: ParamRect):
        try:
            outcome = krawczyk(box, pr)
            if outcome.verdict is KrawczykVerdict.UNIQUE_ZERO:
                return outcome.tight
            if pr.s.width() > 1e-9 or pr.t.width() > 1e-9:
                # Over a parameter rectangle of real width the zero sweeps
                # out a curve no fixed box certifies; bisecting further
                # only burns the budget, and classification needs no
                # existence witness on the determinant path anyway.
                return None
            # The zero may sit off-centre in the box; a short certified
            # count bisects until the operator lands.
            report = count_solutions(box, pr, tol=1e-4)
        except _EVAL_ERRORS:
            return None
        if report.conclusive and report.solution_count == 1:
            return report.tight_list[0]
        return None


_DEFAULT_FIELD = EquilibriumField()


class Mechanism(Enum):
    DETERMINANT = "Determinant"
    QUADRATIC = "Quadratic"
    CUBIC_MIRANDA = "CubicMiranda"


@dataclass(frozen=True)
class ComponentCertificate:
    """Upper (and optionally lower) solution bound for one component box."""

    box: IBox
    max_solutions: int
    has_solution: bool
    mechanism: Mechanism

    def __post_init__(self):
        if self.max_solutions not in (1, 2, 3):
            raise ValueError("max_solutions must be 1, 2 or 3")
        if (self.max_solutions == 1) != (self.mechanism is Mechanism.DETERMINANT):
            raise ValueError("a one-solution cap comes from the determinant test only")


class ClassKind(Enum):
    """Buckets of the per-parameter classification.

    S0 marks rectangles of entirely unordered masses (discarded unanalyzed).
    S1/S111/S210/S300 mirror the component patterns the search stores; any
    certified-but-unnamed pattern, or a failure to certify, is UNRESOLVED.
    """

    S0 = "s0"
    S1 = "s1"
    S111 = "s111"
    S210 = "s210"
    S300 = "s300"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class Classification:
    kind: ClassKind
    components: tuple[ComponentCertificate, ...]
    unresolved: tuple[IBox, ...]

    @property
    def certified(self) -> bool:
        """Every surviving component carries a certificate (pattern may be unnamed)."""
        return not self.unresolved

    @property
    def solution_bound(self) -> int | None:
        """Total upper bound on solutions, when fully certified."""
        if self.unresolved:
            return None
        return sum(c.max_solutions for c in self.components)


def _det(field: VectorField, box: IBox, pr) -> Interval:
    (d11, d12), (d21, d22) = field.jacobian(box, pr)
    return d11 * d22 - d12 * d21


def no_bifurcation(box: IBox, pr, *, field: VectorField | None = None) -> bool:
    """True when the Jacobian determinant excludes zero over the whole box.

    Every real matrix inside the interval Jacobian then has nonzero
    determinant, so the map is injective on the box: it holds at most one
    solution and no bifurcation can occur for any parameter in pr.
    """
    field = field or _DEFAULT_FIELD
    try:
        det = _det(field, box, pr)
    except _EVAL_ERRORS:
        return False
    return not det.contains(0.0)


def _point(x: float, y: float) -> IBox:
    return IBox(Interval(x), Interval(y))


# The four edges of a box as (builder, running-domain, d-index) triples,
# where builder maps a subinterval of the running variable to a sub-edge box
# and d-index selects the matching column of the Jacobian (0 = d/dx1).
def _edges(box: IBox):
    x1, x2 = box.x1, box.x2
    lo1, hi1 = Interval(x1.lo), Interval(x1.hi)
    lo2, hi2 = Interval(x2.lo), Interval(x2.hi)
    return (
        (lambda u: IBox(u, lo2), x1, 0),      # bottom
        (lambda u: IBox(u, hi2), x1, 0),      # top
        (lambda u: IBox(lo1, u), x2, 1),      # left
        (lambda u: IBox(hi1, u), x2, 1),      # right
    )


def certify_single_component(
    box: IBox,
    pr,
    *,
    field: VectorField | None = None,
    rel_tol: float = 1e-3,
) -> bool:
    """Certify that the second-component level set crosses the box exactly once.

    Checks, in order: the level set is monotone in x2 throughout the box;
    the second component has opposite strict signs at the lower-left and
    upper-right corners; its zero set on each edge is enclosed and strictly
    monotone in the running variable; and the total number of boundary
    crossings is exactly two.  The same test is repeated with the component
    negated, since the level set does not care about an overall sign.

    False always means "could not establish", never "disproved".
    """
    field = field or _DEFAULT_FIELD
    try:
        jac = field.jacobian(box, pr)
        if jac[1][1].contains(0.0):
            return False
        ll = field.value(_point(box.x1.lo, box.x2.lo), pr).x2
        ur = field.value(_point(box.x1.hi, box.x2.hi), pr).x2
    except _EVAL_ERRORS:
        return False

    # Opposite strict corner signs; either orientation will do, since the
    # crossing count below does not depend on an overall sign.
    if not ((ll.hi < 0.0 and ur.lo > 0.0) or (ll.lo > 0.0 and ur.hi < 0.0)):
        return False
    return _two_monotone_crossings(field, box, pr, rel_tol)


def _two_monotone_crossings(
    field: VectorField, box: IBox, pr, rel_tol: float
) -> bool:
    crossings = 0
    for build, domain, d_index in _edges(box):
        if domain.width() == 0.0:
            return False

        def f2_on_edge(u: Interval, _build=build) -> Interval:
            return field.value(_build(u), pr).x2

        try:
            parts = zero_set_enclosure(f2_on_edge, domain, rel_tol)
        except _EVAL_ERRORS:
            return False
        for part in parts:
            sub = build(part)
            try:
                jac = field.jacobian(sub, pr)
            except _EVAL_ERRORS:
                return False
            if jac[1][d_index].contains(0.0):
                return False
            crossings += 1
    return crossings == 2


def max_k_solutions(
    box: IBox, pr, k: int, *, field: VectorField | None = None
) -> bool:
    """Cap the number of solutions in the box at k via the reduced problem.

    Solving the (monotone) second component for x2 along the level set and
    substituting into the first yields a scalar function g of x1 alone whose
    zeros are in bijection with the solutions in the box.  An enclosure of
    g's k-th derivative that excludes zero bounds the zero count of g, and
    hence the solution count, by k.

    Only meaningful after certify_single_component has succeeded on the box.
    Raises ReductionUnavailable when the level set is not monotone in x2.
    """
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    field = field or _DEFAULT_FIELD
    try:
        j1, j2 = field.jet(box, pr, k)
        g = implicit_curve_jet(j1, j2, k)
    except ReductionUnavailable:
        raise
    except _EVAL_ERRORS:
        return False
    deriv = g.coeffs[k]
    fact = float(math.factorial(k))
    if fact != 1.0:
        deriv = deriv * Interval(fact)
    return not deriv.contains(0.0)


def _sign_definite(f, domain: Interval, want_negative: bool, floor: float) -> bool:
    """Prove f < 0 (or f > 0) over a one-dimensional domain by bisection."""
    stack = [domain]
    while stack:
        piece = stack.pop()
        try:
            v = f(piece)
        except _EVAL_ERRORS:
            return False
        if (v.hi < 0.0) if want_negative else (v.lo > 0.0):
            continue
        if (v.lo >= 0.0) if want_negative else (v.hi <= 0.0):
            return False
        if piece.width() <= floor:
            return False
        m = piece.mid()
        stack.append(Interval(piece.lo, m))
        stack.append(Interval(m, piece.hi))
    return True


def miranda_exists(
    box: IBox,
    pr,
    *,
    field: VectorField | None = None,
    rel_tol: float = 1e-3,
) -> bool:
    """Prove the box contains at least one solution for every parameter in pr.

    The corner-sign argument: both components strictly negative along the
    left and bottom edges, both strictly positive at the upper-right corner,
    and on each of the remaining two edges the zero sets of the two
    components stay strictly separated in the right order.  A continuous
    deformation then reduces the picture to the two-dimensional
    intermediate-value theorem.  All four statements are open conditions,
    so verifying them with interval enclosures extends the conclusion to
    set-valued parameters.

    The argument is insensitive to negating the map or swapping its
    components, so all four symmetry variants are tried.  When the strong
    edge condition fails, a relaxed variant is attempted in which only the
    first component must be negative along the bottom edge and only the
    second along the left edge; the deformation argument goes through
    unchanged.
    """
    field = field or _DEFAULT_FIELD
    for relaxed in (False, True):
        for swap in (False, True):
            for negate in (False, True):
                if _miranda_variant(field, box, pr, swap, negate, relaxed, rel_tol):
                    return True
    return False


def _miranda_variant(
    field: VectorField,
    box: IBox,
    pr,
    swap: bool,
    negate: bool,
    relaxed: bool,
    rel_tol: float,
) -> bool:
    def comps(b: IBox) -> tuple[Interval, Interval]:
        v = field.value(b, pr)
        c1, c2 = (v.x2, v.x1) if swap else (v.x1, v.x2)
        if negate:
            c1, c2 = -c1, -c2
        return c1, c2

    x1, x2 = box.x1, box.x2
    if x1.width() == 0.0 or x2.width() == 0.0:
        return False
    floor1 = max(x1.width() * rel_tol, 1e-15)
    floor2 = max(x2.width() * rel_tol, 1e-15)

    left = lambda u: IBox(Interval(x1.lo), u)
    bottom = lambda u: IBox(u, Interval(x2.lo))
    top = lambda u: IBox(u, Interval(x2.hi))
    right = lambda u: IBox(Interval(x1.hi), u)

    try:
        # Both components strictly positive at the upper-right corner.
        c1, c2 = comps(_point(x1.hi, x2.hi))
        if not (c1.lo > 0.0 and c2.lo > 0.0):
            return False
        # Strong form: both components strictly negative along the left and
        # bottom edges.  Relaxed form: the first component negative along
        # the bottom edge, the second along the left edge.
        if relaxed:
            wanted = ((bottom, x1, floor1, 0), (left, x2, floor2, 1))
        else:
            wanted = (
                (left, x2, floor2, 0),
                (left, x2, floor2, 1),
                (bottom, x1, floor1, 0),
                (bottom, x1, floor1, 1),
            )
        for edge, domain, floor, pick in wanted:
            if not _sign_definite(
                lambda u: comps(edge(u))[pick], domain, True, floor
            ):
                return False
        # Top edge: every zero of the first component lies strictly left of
        # every zero of the second.  An empty zero set imposes no constraint
        # (the component then keeps one sign along the whole edge).
        z1 = zero_set_enclosure(lambda u: comps(top(u))[0], x1, rel_tol)
        z2 = zero_set_enclosure(lambda u: comps(top(u))[1], x1, rel_tol)
        top_max = z1[-1].hi if z1 else -math.inf
        top_min = z2[0].lo if z2 else math.inf
        if not (top_max < top_min and top_max < x1.hi and top_min > x1.lo):
            return False
        # Right edge: every zero of the second component lies strictly below
        # every zero of the first.
        w1 = zero_set_enclosure(lambda u: comps(right(u))[0], x2, rel_tol)
        w2 = zero_set_enclosure(lambda u: comps(right(u))[1], x2, rel_tol)
        right_max = w2[-1].hi if w2 else -math.inf
        right_min = w1[0].lo if w1 else math.inf
        if not (right_max < right_min and right_max < x2.hi and right_min > x2.lo):
            return False
    except _EVAL_ERRORS:
        return False
    return True


def _inflate(box: IBox, factor: float, clip: IBox) -> IBox:
    """Grow a box about its midpoint, clipped to stay inside a region."""
    out = []
    for side, lim in ((box.x1, clip.x1), (box.x2, clip.x2)):
        pad = 0.5 * (factor - 1.0) * side.width() + 1e-12
        lo = max(side.lo - pad, lim.lo)
        hi = min(side.hi + pad, lim.hi)
        out.append(Interval(lo, hi))
    return IBox(out[0], out[1])


def _cover(field: VectorField, region: IBox, pr, width: float, budget: int):
    """Boxes at most ``width`` wide covering every solution in the region.

    Returns None when the box budget runs out before the sweep finishes.
    Fields exposing a ``keep_mask`` batch hook are swept level by level
    through numpy; everything else takes the scalar path below.
    """
    batch = getattr(field, "keep_mask", None)
    if batch is not None:
        return _cover_batched(batch, region, pr, width, budget)
    survivors: list[IBox] = []
    stack = [region]
    processed = 0
    while stack:
        b = stack.pop()
        processed += 1
        if processed > budget:
            return None
        resolved = False
        try:
            if field.excluded(b, pr):
                continue
            v = field.value(b, pr)
            resolved = True
            if not (v.x1.contains(0.0) and v.x2.contains(0.0)):
                continue
        except _EVAL_ERRORS:
            pass
        if b.max_width() <= width:
            survivors.append(b)
            continue
        if not resolved and b.max_width() <= 1e-12:
            # Unevaluable at floor width: give up on the whole sweep.
            return None
        w1, w2 = b.widths()
        left, right = b.bisect_dim(0 if w1 >= w2 else 1)
        stack.append(left)
        stack.append(right)
    survivors.sort(key=lambda b: (b.x1.lo, b.x2.lo))
    return survivors


def _cover_batched(batch, region: IBox, pr, width: float, budget: int):
    rows = np.array(
        [[region.x1.lo, region.x1.hi, region.x2.lo, region.x2.hi]]
    )
    survivors: list[IBox] = []
    processed = 0
    while rows.shape[0]:
        processed += rows.shape[0]
        if processed > budget:
            return None
        rows = rows[batch(rows, pr)]
        if rows.shape[0] == 0:
            break
        w1 = rows[:, 1] - rows[:, 0]
        w2 = rows[:, 3] - rows[:, 2]
        done = np.maximum(w1, w2) <= width
        for v in rows[done]:
            survivors.append(IBox(Interval(v[0], v[1]), Interval(v[2], v[3])))
        todo = rows[~done]
        if todo.shape[0] == 0:
            break
        split1 = (todo[:, 1] - todo[:, 0]) >= (todo[:, 3] - todo[:, 2])
        left = todo.copy()
        right = todo.copy()
        m1 = 0.5 * (todo[:, 0] + todo[:, 1])
        m2 = 0.5 * (todo[:, 2] + todo[:, 3])
        left[split1, 1] = m1[split1]
        right[split1, 0] = m1[split1]
        left[~split1, 3] = m2[~split1]
        right[~split1, 2] = m2[~split1]
        rows = np.concatenate([left, right])
    survivors.sort(key=lambda b: (b.x1.lo, b.x2.lo))
    return survivors


def _connected_clusters(boxes: list[IBox]) -> list[list[IBox]]:
    """Group boxes into maximal edge-or-corner adjacent clusters."""
    n = len(boxes)
    if n == 0:
        return []
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    # Closed-overlap adjacency (the touches predicate), batched so large
    # covers do not drown in a quadratic Python loop.
    lo1 = np.array([b.x1.lo for b in boxes])
    hi1 = np.array([b.x1.hi for b in boxes])
    lo2 = np.array([b.x2.lo for b in boxes])
    hi2 = np.array([b.x2.hi for b in boxes])
    block = 1024
    for start in range(0, n, block):
        stop = min(start + block, n)
        adj = (
            (lo1[start:stop, None] <= hi1[None, :])
            & (lo1[None, :] <= hi1[start:stop, None])
            & (lo2[start:stop, None] <= hi2[None, :])
            & (lo2[None, :] <= hi2[start:stop, None])
        )
        for a, j in zip(*np.nonzero(adj)):
            i = start + a
            if i < j:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[IBox]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(boxes[i])
    clusters = list(groups.values())
    clusters.sort(key=lambda g: (g[0].x1.lo, g[0].x2.lo))
    return clusters


def _certify_component(
    field: VectorField, hull: IBox, pr, region: IBox
) -> ComponentCertificate | None:
    work = _inflate(hull, 1.6, region)
    if no_bifurcation(work, pr, field=field):
        tight = field.root_certificate(work, pr)
        return ComponentCertificate(work, 1, tight is not None, Mechanism.DETERMINANT)
    try:
        if not certify_single_component(work, pr, field=field):
            return None
        if max_k_solutions(work, pr, 2, field=field):
            return ComponentCertificate(work, 2, False, Mechanism.QUADRATIC)
        if max_k_solutions(work, pr, 3, field=field) and miranda_exists(
            work, pr, field=field
        ):
            return ComponentCertificate(work, 3, True, Mechanism.CUBIC_MIRANDA)
    except ReductionUnavailable:
        return None
    return None


_NAMED_PATTERNS = {
    (1,): ClassKind.S1,
    (1, 1, 1): ClassKind.S111,
    (1, 2): ClassKind.S210,
    (3,): ClassKind.S300,
}


def _overlapping(certs: list[ComponentCertificate]) -> bool:
    for i in range(len(certs)):
        for j in range(i + 1, len(certs)):
            ix = certs[i].box.intersect(certs[j].box)
            if ix is EMPTY:
                continue
            if ix.x1.width() > 0.0 and ix.x2.width() > 0.0:
                return True
    return False


def classify_inner(
    region: IBox,
    pr,
    *,
    tol: float = 1e-3,
    field: VectorField | None = None,
    max_boxes: int = 20000,
) -> Classification:
    """Classify the solution structure of a region at a fixed parameter set.

    Bisects the region, discarding boxes proven solution-free, until the
    remaining cover resolves into connected components; then certifies each
    component with the strongest available bound (determinant, then
    quadratic, then cubic-with-existence).  The cover width starts coarse
    and is halved after each failed attempt, down to ``tol``.

    A parameter rectangle of entirely unordered masses short-circuits to S0.
    Named patterns map to S1/S111/S210/S300; everything else comes back
    UNRESOLVED, which callers resolve by bisecting the parameter rectangle.
    """
    field = field or _DEFAULT_FIELD
    ordering = getattr(pr, "ordering", None)
    if callable(ordering) and ordering() is Ordering.ALL_UNORDERED:
        return Classification(ClassKind.S0, (), ())

    width = max(region.max_width() / 8.0, tol)
    best = Classification(ClassKind.UNRESOLVED, (), (region,))
    while True:
        attempt = _attempt(field, region, pr, width, max_boxes)
        if attempt is None:
            # The cover blew its box budget; halving the width can only
            # cost more, so hand the rectangle back for parameter splits.
            return best
        best = attempt
        if best.certified or width <= tol:
            return best
        width = max(width / 2.0, tol)


def _attempt(
    field: VectorField, region: IBox, pr, width: float, max_boxes: int
) -> Classification | None:
    survivors = _cover(field, region, pr, width, max_boxes)
    if survivors is None:
        return None

    certs: list[ComponentCertificate] = []
    failed: list[IBox] = []
    for cluster in _connected_clusters(survivors):
        hull = cluster[0]
        for b in cluster[1:]:
            hull = hull.hull(b)
        cert = _certify_component(field, hull, pr, region)
        if cert is None:
            failed.append(hull)
        else:
            certs.append(cert)

    if failed:
        return Classification(ClassKind.UNRESOLVED, tuple(certs), tuple(failed))
    if _overlapping(certs):
        return Classification(
            ClassKind.UNRESOLVED, tuple(certs), tuple(c.box for c in certs)
        )

    pattern = tuple(sorted(c.max_solutions for c in certs))
    kind = _NAMED_PATTERNS.get(pattern, ClassKind.UNRESOLVED)
    if kind is ClassKind.S300 and not certs[0].has_solution:
        kind = ClassKind.UNRESOLVED
    return Classification(kind, tuple(certs), ())
