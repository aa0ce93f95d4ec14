"""Vectorized four-dimensional sweep proving the absence of bifurcations.

The implicit search certifies, box by box, that no parameter inside a
rectangle can change the number of relative equilibria.  A box of the
product space (r, phi, s, t) is retired once one of the following holds:

* the masses are unordered everywhere in the box (discarded, counted);
* the equilibrium system excludes zero on the box (``noList``);
* the Jacobian determinant excludes zero on the box (``ndgList``);
* the box hugs a light primary and either a distance lemma or a
  small-mass certificate applies (``ndtList``).

Everything else is bisected along its widest side until the absolute
stopping tolerance is reached; leftovers land in ``smallList`` and spoil
conclusiveness.

The heavy lifting runs on :mod:`pcr4bp.ivec` so that one numpy pass
classifies an entire chunk of boxes; only the rows near the primaries
fall back to the scalar lemmas.  The scalar field in
:mod:`pcr4bp.potential` remains the reference: the sweep evaluates the
same expressions, and the equivalence is covered by tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import ivec
from .interval import IBox, Interval, PI_OVER_6
from .ivec import IVec
from .potential import ParamRect, exclude_far, exclude_near_primary
from .small_masses import DISK_RADIUS, certify_small_mass_region

__all__ = [
    "Cell",
    "SweepResult",
    "candidate_mask",
    "no_bifurcation_sweep",
    "NEAR_CUT",
    "RETAIN_CAP",
]

# Boxes whose chord to a light primary may dip below this are handled by
# the scalar near-primary lane.  The cut sits strictly inside the
# small-mass disk so that a box shrinking onto the boundary circle is
# eventually caught by one side or the other: either its chord stays
# above the cut (regular lane) or the whole box fits inside the disk.
NEAR_CUT = 5e-4

_CHUNK_CAP = 1 << 15
RETAIN_CAP = 100_000

_ONEV = (np.float64(1.0), np.float64(1.0))
_TWOV = (np.float64(2.0), np.float64(2.0))
_P6 = (np.float64(PI_OVER_6.lo), np.float64(PI_OVER_6.hi))

# Column layout of a chunk: (n, 8) float64.
_RLO, _RHI, _PLO, _PHI, _SLO, _SHI, _TLO, _THI = range(8)


@dataclass(frozen=True)
class Cell:
    """One classified box of the product space."""

    r: Interval
    phi: Interval
    s: Interval
    t: Interval

    def ibox(self) -> IBox:
        return IBox(self.r, self.phi)

    def rect(self) -> ParamRect:
        return ParamRect(self.s, self.t)

    def endpoints(self) -> tuple[float, float, float, float, float, float, float, float]:
        return (
            self.r.lo, self.r.hi, self.phi.lo, self.phi.hi,
            self.s.lo, self.s.hi, self.t.lo, self.t.hi,
        )


@dataclass
class SweepResult:
    """Counts and retained boxes from one no-bifurcation sweep."""

    region: IBox
    param: ParamRect
    tol: float
    no_count: int = 0
    ndg_count: int = 0
    ndt_count: int = 0
    small_count: int = 0
    unordered_count: int = 0
    processed: int = 0
    certificates_invoked: int = 0
    no_list: list[Cell] = field(default_factory=list)
    ndg_list: list[Cell] = field(default_factory=list)
    ndt_list: list[Cell] = field(default_factory=list)
    small_list: list[Cell] = field(default_factory=list)
    truncated: set[str] = field(default_factory=set)

    @property
    def conclusive(self) -> bool:
        return self.small_count == 0

    def merge(self, other: "SweepResult") -> None:
        self.no_count += other.no_count
        self.ndg_count += other.ndg_count
        self.ndt_count += other.ndt_count
        self.small_count += other.small_count
        self.unordered_count += other.unordered_count
        self.processed += other.processed
        self.certificates_invoked += other.certificates_invoked
        for name in ("no_list", "ndg_list", "ndt_list", "small_list"):
            mine = getattr(self, name)
            theirs = getattr(other, name)
            room = RETAIN_CAP - len(mine)
            if room < len(theirs):
                self.truncated.add(name)
            mine.extend(theirs[:max(room, 0)])
        self.truncated |= other.truncated


def _col(rows: np.ndarray, lo: int) -> IVec:
    return (rows[:, lo], rows[:, lo + 1])


def _cells_from_rows(rows: np.ndarray) -> list[Cell]:
    out = []
    for i in range(rows.shape[0]):
        v = rows[i]
        out.append(
            Cell(
                Interval(v[_RLO], v[_RHI]),
                Interval(v[_PLO], v[_PHI]),
                Interval(v[_SLO], v[_SHI]),
                Interval(v[_TLO], v[_THI]),
            )
        )
    return out


def _retain(result: SweepResult, name: str, rows: np.ndarray) -> None:
    if rows.shape[0] == 0:
        return
    target = getattr(result, name)
    room = RETAIN_CAP - len(target)
    if room <= 0:
        result.truncated.add(name)
        return
    if rows.shape[0] > room:
        result.truncated.add(name)
        rows = rows[:room]
    target.extend(_cells_from_rows(rows))


def _chord_sq(r: IVec, c: IVec, sa: IVec) -> IVec:
    body = ivec.vadd(ivec.vsq(ivec.vsub(r, c)), ivec.vsq(sa))
    return (np.maximum(body[0], 0.0), body[1])


def _kernel_parts(r: IVec, c: IVec, sa: IVec, d: IVec, d3: IVec):
    """Per-primary pieces of F and DF sharing the chord powers."""
    d5 = ivec.vmul(d3, ivec.vsq(d))
    rc = ivec.vsub(r, c)
    inv3 = ivec.vrecip(d3)
    tail = ivec.vsub(_ONEV, inv3)
    sa_rc_d5 = ivec.vdiv(ivec.vscale(ivec.vmul(sa, rc), 3.0), d5)
    w_r = ivec.vsub(ivec.vneg(ivec.vdiv(rc, d3)), c)
    w_s = ivec.vmul(sa, tail)
    w_rr = ivec.vadd(ivec.vneg(inv3), ivec.vdiv(ivec.vscale(ivec.vsq(rc), 3.0), d5))
    w_ra = ivec.vadd(w_s, ivec.vmul(r, sa_rc_d5))
    ws_a = ivec.vadd(
        ivec.vmul(c, tail),
        ivec.vdiv(ivec.vscale(ivec.vmul(r, ivec.vsq(sa)), 3.0), d5),
    )
    return w_r, w_s, w_rr, w_ra, sa_rc_d5, ws_a


def _mix(a: IVec, b: IVec, s: IVec) -> IVec:
    """Enclosure of b + s (a - b), the single-occurrence convex mix."""
    return ivec.vadd(b, ivec.vmul(s, ivec.vsub(a, b)))


def _trig_chords(r: IVec, p: IVec):
    """cos, sin and chord length to both heavy primaries."""
    a1 = ivec.vsub(p, _P6)
    a2 = ivec.vadd(p, _P6)
    c1, s1 = ivec.vcos(a1), ivec.vsin(a1)
    c2, s2 = ivec.vcos(a2), ivec.vsin(a2)
    d1 = ivec.vsqrt(_chord_sq(r, c1, s1))
    d2 = ivec.vsqrt(_chord_sq(r, c2, s2))
    return c1, s1, d1, c2, s2, d2


def _field_and_det(
    r: IVec, s: IVec, t: IVec,
    c1: IVec, s1: IVec, d1: IVec,
    c2: IVec, s2: IVec, d2: IVec,
) -> tuple[IVec, IVec, IVec]:
    """F1, F2 and det DF over one batch, parameters factored to single use.

    The algebra pulls each of s and t out to one occurrence per
    component: F1 = r - 1/r^2 + t (1/r^2 + Wr2 + s (Wr1 - Wr2)) and so
    on, which is what keeps the enclosures usable on parameter boxes of
    macroscopic width.  These are rewrites of the same polynomials in
    the same kernels as the scalar reference field, so both lanes
    enclose the identical true range; the equivalence is covered by
    tests on point boxes and overlap tests on wide ones.
    """
    d1c = ivec.vmul(ivec.vsq(d1), d1)
    d2c = ivec.vmul(ivec.vsq(d2), d2)

    wr1, ws1, w_rr1, w_ra1, wsr1, wsa1 = _kernel_parts(r, c1, s1, d1, d1c)
    wr2, ws2, w_rr2, w_ra2, wsr2, wsa2 = _kernel_parts(r, c2, s2, d2, d2c)

    inv_r2 = ivec.vrecip(ivec.vsq(r))
    f1 = ivec.vadd(
        ivec.vsub(r, inv_r2),
        ivec.vmul(t, ivec.vadd(inv_r2, _mix(wr1, wr2, s))),
    )
    f2 = _mix(ws1, ws2, s)

    inv_r3 = ivec.vdiv(inv_r2, r)
    two_inv_r3 = ivec.vscale(inv_r3, 2.0)
    d11 = ivec.vadd(
        ivec.vadd(_ONEV, two_inv_r3),
        ivec.vmul(t, ivec.vsub(_mix(w_rr1, w_rr2, s), two_inv_r3)),
    )
    d12 = ivec.vmul(t, _mix(w_ra1, w_ra2, s))
    d21 = _mix(wsr1, wsr2, s)
    d22 = _mix(wsa1, wsa2, s)
    det = ivec.vsub(ivec.vmul(d11, d22), ivec.vmul(d12, d21))
    return f1, f2, det


def _field_pair(
    r: IVec, s: IVec, t: IVec,
    c1: IVec, s1: IVec, d1: IVec,
    c2: IVec, s2: IVec, d2: IVec,
) -> tuple[IVec, IVec]:
    """F1 and F2 alone, with the same parameter factoring as the full form."""
    d1c = ivec.vmul(ivec.vsq(d1), d1)
    d2c = ivec.vmul(ivec.vsq(d2), d2)
    wr1 = ivec.vsub(ivec.vneg(ivec.vdiv(ivec.vsub(r, c1), d1c)), c1)
    wr2 = ivec.vsub(ivec.vneg(ivec.vdiv(ivec.vsub(r, c2), d2c)), c2)
    ws1 = ivec.vmul(s1, ivec.vsub(_ONEV, ivec.vrecip(d1c)))
    ws2 = ivec.vmul(s2, ivec.vsub(_ONEV, ivec.vrecip(d2c)))
    inv_r2 = ivec.vrecip(ivec.vsq(r))
    f1 = ivec.vadd(
        ivec.vsub(r, inv_r2),
        ivec.vmul(t, ivec.vadd(inv_r2, _mix(wr1, wr2, s))),
    )
    f2 = _mix(ws1, ws2, s)
    return f1, f2


def candidate_mask(rows: np.ndarray, pr: ParamRect) -> np.ndarray:
    """Keep-mask over (n, 4) phase rows for one fixed parameter rectangle.

    A row survives when the equilibrium system may vanish somewhere in
    it: either the interval evaluation fails to exclude zero, or the row
    sits close enough to a primary that the evaluation is unreliable and
    no distance lemma retires it.  "Close" scales with the row diagonal,
    since the enclosures near a primary only separate from zero once the
    box is a few times smaller than its chord to the singularity.  The
    determinant plays no part here: this mask is for solution covers.
    """
    n = rows.shape[0]
    r = (rows[:, 0], rows[:, 1])
    p = (rows[:, 2], rows[:, 3])
    sv = (np.float64(pr.s.lo), np.float64(pr.s.hi))
    tv = (np.float64(pr.t.lo), np.float64(pr.t.hi))
    c1, s1, d1, c2, s2, d2 = _trig_chords(r, p)
    disp = (rows[:, 1] - rows[:, 0]) + rows[:, 1] * (rows[:, 3] - rows[:, 2])
    cut = np.maximum(NEAR_CUT, 3.0 * disp)
    near = (d1[0] <= cut) | (d2[0] <= cut) | (rows[:, 0] <= cut)
    keep = np.ones(n, dtype=bool)
    reg = ~near
    if reg.any():
        ri = np.nonzero(reg)[0]
        sub = lambda v: (v[0][ri], v[1][ri])  # noqa: E731
        f1, f2 = _field_pair(
            sub(r), sv, tv,
            sub(c1), sub(s1), sub(d1), sub(c2), sub(s2), sub(d2),
        )
        drop = ivec.excludes_zero(f1) | ivec.excludes_zero(f2)
        keep[ri[drop]] = False
    for i in np.nonzero(near)[0]:
        box = IBox(Interval(rows[i, 0], rows[i, 1]), Interval(rows[i, 2], rows[i, 3]))
        for k in (1, 2, 3):
            if exclude_near_primary(k, box, pr) or exclude_far(k, box, pr):
                keep[i] = False
                break
    return keep


def _near_lane(
    result: SweepResult,
    rows: np.ndarray,
    d1hi: np.ndarray,
    d2hi: np.ndarray,
    use_certificates: bool,
) -> np.ndarray:
    """Scalar treatment of boxes close to a light primary.

    Returns the boolean mask of rows that resisted and must be bisected.
    """
    n = rows.shape[0]
    resist = np.zeros(n, dtype=bool)
    retired = []
    for i in range(n):
        v = rows[i]
        box = IBox(Interval(v[_RLO], v[_RHI]), Interval(v[_PLO], v[_PHI]))
        rect = ParamRect(Interval(v[_SLO], v[_SHI]), Interval(v[_TLO], v[_THI]))
        done = False
        for k in (1, 2, 3):
            if exclude_near_primary(k, box, rect) or exclude_far(k, box, rect):
                done = True
                break
        if not done and use_certificates:
            if d1hi[i] < DISK_RADIUS and certify_small_mass_region(rect, "p1"):
                result.certificates_invoked += 1
                done = True
            elif d2hi[i] < DISK_RADIUS and certify_small_mass_region(rect, "p2"):
                result.certificates_invoked += 1
                done = True
        if done:
            result.ndt_count += 1
            retired.append(i)
        else:
            resist[i] = True
    if retired:
        _retain(result, "ndt_list", rows[np.asarray(retired)])
    return resist


def _bisect_rows(
    rows: np.ndarray,
    d1lo: np.ndarray | None = None,
    d2lo: np.ndarray | None = None,
) -> np.ndarray:
    widths = np.stack(
        [
            rows[:, _RHI] - rows[:, _RLO],
            rows[:, _PHI] - rows[:, _PLO],
            rows[:, _SHI] - rows[:, _SLO],
            rows[:, _THI] - rows[:, _TLO],
        ]
    )
    if d1lo is None:
        dim = np.argmax(widths, axis=0)
    else:
        # Split the direction with the largest smear, width times local
        # sensitivity, instead of the plain widest one.  Away from the
        # primaries every sensitivity is O(1) and this degenerates to
        # the absolute rule; near a light primary the box's mass range
        # acts on the field through 1/d^3 and the thin parameter slabs
        # would otherwise never win a width vote, leaving the
        # determinant test straddling zero at every spatial depth.  The
        # amplification 3 m / d^4 on the spatial directions keeps their
        # resolution proportional to the distance scale for boxes
        # riding a satellite shell.  Only the box tests carry rigor;
        # the split choice is plain float arithmetic.
        s_lo = rows[:, _SLO]
        s_hi = rows[:, _SHI]
        t_hi = rows[:, _THI]
        e1 = np.maximum(d1lo, DISK_RADIUS)
        e2 = np.maximum(d2lo, DISK_RADIUS)
        g1 = e1**-3
        g2 = e2**-3
        m1hi = s_hi * t_hi
        m2hi = (1.0 - s_lo) * t_hi
        amp = 1.0 + 3.0 * (m1hi * g1 / e1 + m2hi * g2 / e2)
        smear = np.stack(
            [
                widths[0] * amp,
                widths[1] * rows[:, _RHI] * amp,
                widths[2] * t_hi * (g1 + g2),
                widths[3] * (1.0 + s_hi * g1 + (1.0 - s_lo) * g2),
            ]
        )
        dim = np.argmax(smear, axis=0)
    left = rows.copy()
    right = rows.copy()
    for d, lo_col in enumerate((_RLO, _PLO, _SLO, _TLO)):
        sel = dim == d
        if not sel.any():
            continue
        mid = 0.5 * (rows[sel, lo_col] + rows[sel, lo_col + 1])
        left[sel, lo_col + 1] = mid
        right[sel, lo_col] = mid
    return np.concatenate([left, right])


def _sweep_chunked(
    init: np.ndarray,
    tol: float,
    result: SweepResult,
    use_certificates: bool,
) -> None:
    stack: list[np.ndarray] = [init]
    while stack:
        rows = stack.pop()
        n = rows.shape[0]
        result.processed += n

        s = _col(rows, _SLO)
        t = _col(rows, _TLO)
        threshold = ivec.vdiv(_ONEV, ivec.vsub(_TWOV, s))
        unordered = t[0] > threshold[1]
        result.unordered_count += int(unordered.sum())
        rows = rows[~unordered]
        if rows.shape[0] == 0:
            continue

        r = _col(rows, _RLO)
        p = _col(rows, _PLO)
        s = _col(rows, _SLO)
        t = _col(rows, _TLO)
        c1, s1, d1, c2, s2, d2 = _trig_chords(r, p)

        near = (
            (d1[0] <= NEAR_CUT)
            | (d2[0] <= NEAR_CUT)
            | (d1[1] < DISK_RADIUS)
            | (d2[1] < DISK_RADIUS)
        )
        pending = np.zeros(rows.shape[0], dtype=bool)
        if near.any():
            idx = np.nonzero(near)[0]
            resist = _near_lane(
                result, rows[idx], d1[1][idx], d2[1][idx], use_certificates
            )
            pending[idx[resist]] = True

        reg = ~near
        if reg.any():
            ri = np.nonzero(reg)[0]
            sub = lambda v: (v[0][ri], v[1][ri])  # noqa: E731
            f1, f2, det = _field_and_det(
                sub(r), sub(s), sub(t),
                sub(c1), sub(s1), sub(d1), sub(c2), sub(s2), sub(d2),
            )
            no_mask = ivec.excludes_zero(f1) | ivec.excludes_zero(f2)
            result.no_count += int(no_mask.sum())
            _retain(result, "no_list", rows[ri[no_mask]])

            ndg_mask = ~no_mask & ivec.excludes_zero(det)
            result.ndg_count += int(ndg_mask.sum())
            _retain(result, "ndg_list", rows[ri[ndg_mask]])
            pending[ri[~no_mask & ~ndg_mask]] = True

        if not pending.any():
            continue
        todo = rows[pending]
        td1 = d1[0][pending]
        td2 = d2[0][pending]
        widths = np.maximum.reduce(
            [
                todo[:, _RHI] - todo[:, _RLO],
                todo[:, _PHI] - todo[:, _PLO],
                todo[:, _SHI] - todo[:, _SLO],
                todo[:, _THI] - todo[:, _TLO],
            ]
        )
        small = widths <= tol
        if small.any():
            result.small_count += int(small.sum())
            _retain(result, "small_list", todo[small])
            keep = ~small
            todo = todo[keep]
            td1 = td1[keep]
            td2 = td2[keep]
        if todo.shape[0] == 0:
            continue
        children = _bisect_rows(todo, td1, td2)
        for start in range(0, children.shape[0], _CHUNK_CAP):
            stack.append(children[start : start + _CHUNK_CAP])


def no_bifurcation_sweep(
    region: IBox,
    pr: ParamRect,
    tol: float,
    *,
    threads: int = 1,
    use_certificates: bool = True,
) -> SweepResult:
    """Sweep region x pr and classify every box as bifurcation-free.

    ``tol`` is an absolute stopping width: a box whose largest side
    drops below it without being classified is abandoned (and
    conclusiveness with it).  Bisection always halves the widest side,
    ties resolved in the order r, phi, s, t, so directions that start
    out thin are split only once every wide direction has caught down
    to them.  ``threads`` slices the initial region in the angular
    direction; each slice is swept independently and the results
    merged, which keeps the outcome deterministic.

    ``use_certificates=False`` disables the small-mass certificates and
    exists for ablation tests: runs brushing a light primary with a
    vanishing mass then lose their only closing argument.
    """
    if tol <= 0.0:
        raise ValueError("tolerance must be positive")
    result = SweepResult(region=region, param=pr, tol=tol)

    def seed(phi_lo: float, phi_hi: float) -> np.ndarray:
        return np.array(
            [[
                region.r.lo, region.r.hi, phi_lo, phi_hi,
                pr.s.lo, pr.s.hi, pr.t.lo, pr.t.hi,
            ]]
        )

    threads = max(1, int(threads))
    if threads == 1 or region.phi.width() == 0.0:
        _sweep_chunked(seed(region.phi.lo, region.phi.hi), tol, result, use_certificates)
        return result

    from concurrent.futures import ThreadPoolExecutor

    edges = np.linspace(region.phi.lo, region.phi.hi, threads + 1)
    parts = [
        SweepResult(region=region, param=pr, tol=tol) for _ in range(threads)
    ]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(
                _sweep_chunked,
                seed(edges[k], edges[k + 1]),
                tol,
                parts[k],
                use_certificates,
            )
            for k in range(threads)
        ]
        for fut in futures:
            fut.result()
    for part in parts:
        result.merge(part)
    return result
