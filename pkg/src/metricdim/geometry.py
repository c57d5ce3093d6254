"""Distance geometry along branches.

For a landmark s and branches A, B, the pairs (a, b) that s fails to
distinguish (d(s,a) == d(s,b)) form the *indistinct set* of (s, A, B).
Plotted with branch positions as coordinates, it is a union of slope +/-1
lattice segments. Rotating by 45 degrees, (u, v) = (x+y, x-y), turns those
into axis-parallel segments whose valid points satisfy u == v (mod 2),
so intersection emptiness is decidable from coordinate order and parity.

A *stem* is a maximal run of positions along a branch where the
combinatorial structure of every pair's indistinct set stays constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .decomposition import BranchDecomposition
from .graphs import Graph, bfs_row

NONDECREASING = "nondecreasing"
NONINCREASING = "nonincreasing"


class ParityError(ValueError):
    """Rotated coordinates with u != v (mod 2) have no lattice preimage."""


# ---------------------------------------------------------------------------
# 45-degree rotation


def rotate(point: tuple[int, int]) -> tuple[int, int]:
    """(x, y) -> (x+y, x-y), the unscaled 45-degree rotation."""
    x, y = point
    return (x + y, x - y)


def unrotate(point: tuple[int, int]) -> tuple[int, int]:
    u, v = point
    if (u - v) % 2 != 0:
        raise ParityError("(%d, %d) has u != v (mod 2)" % (u, v))
    return ((u + v) // 2, (u - v) // 2)


# ---------------------------------------------------------------------------
# Segments


@dataclass(frozen=True)
class DiagonalSegment:
    """Lattice segment of slope +1 or -1 in branch-position coordinates.

    Endpoints are ordered with a0 <= a1; degenerate single-point segments
    keep the slope of the construction that produced them.
    """

    a0: int
    b0: int
    a1: int
    b1: int
    slope: int

    def __post_init__(self):
        if abs(self.a1 - self.a0) != abs(self.b1 - self.b0):
            raise ValueError("not a slope +/-1 segment: %r" % (self,))
        if self.a0 != self.a1 and (self.b1 - self.b0) != self.slope * (self.a1 - self.a0):
            raise ValueError("slope field disagrees with endpoints: %r" % (self,))

    @property
    def degenerate(self) -> bool:
        return self.a0 == self.a1

    def points(self) -> list[tuple[int, int]]:
        return [
            (self.a0 + i, self.b0 + self.slope * i)
            for i in range(self.a1 - self.a0 + 1)
        ]

    def to_json_dict(self) -> dict:
        return {
            "a0": self.a0,
            "b0": self.b0,
            "a1": self.a1,
            "b1": self.b1,
            "slope": self.slope,
        }


@dataclass(frozen=True)
class RotatedSegment:
    """Axis-parallel segment in rotated coordinates.

    axis "h": v fixed, u varies; axis "v": u fixed, v varies. Valid lattice
    points are the ones whose varying coordinate matches the parity of the
    fixed one (u == v mod 2); they step by 2.
    """

    axis: str
    fixed: int
    lo: int
    hi: int

    def valid_range(self) -> tuple[int, int]:
        """Parity-snapped inclusive bounds of the varying coordinate."""
        par = self.fixed & 1
        lo = self.lo if (self.lo & 1) == par else self.lo + 1
        hi = self.hi if (self.hi & 1) == par else self.hi - 1
        return lo, hi

    def points(self) -> list[tuple[int, int]]:
        lo, hi = self.valid_range()
        if self.axis == "h":
            return [(u, self.fixed) for u in range(lo, hi + 1, 2)]
        return [(self.fixed, v) for v in range(lo, hi + 1, 2)]


def to_rotated(seg: DiagonalSegment) -> RotatedSegment:
    u0, v0 = rotate((seg.a0, seg.b0))
    u1, v1 = rotate((seg.a1, seg.b1))
    if seg.slope == 1:
        return RotatedSegment("h", v0, min(u0, u1), max(u0, u1))
    return RotatedSegment("v", u0, min(v0, v1), max(v0, v1))


def segments_intersect(s1: RotatedSegment, s2: RotatedSegment) -> tuple[tuple[int, int], ...]:
    """Common valid lattice points of two rotated segments.

    Crossings of a horizontal with a vertical land on the lattice only when
    the parities of the two fixed coordinates agree; collinear overlaps are
    parity-filtered intervals.
    """
    if s1.axis == s2.axis:
        if s1.fixed != s2.fixed:
            return ()
        lo1, hi1 = s1.valid_range()
        lo2, hi2 = s2.valid_range()
        lo, hi = max(lo1, lo2), min(hi1, hi2)
        if lo > hi:
            return ()
        if s1.axis == "h":
            return tuple((u, s1.fixed) for u in range(lo, hi + 1, 2))
        return tuple((s1.fixed, v) for v in range(lo, hi + 1, 2))
    h, v = (s1, s2) if s1.axis == "h" else (s2, s1)
    # crossing point is (v.fixed, h.fixed)
    if (v.fixed - h.fixed) % 2 != 0:
        return ()
    if h.lo <= v.fixed <= h.hi and v.lo <= h.fixed <= v.hi:
        return ((v.fixed, h.fixed),)
    return ()


# ---------------------------------------------------------------------------
# Monotone partition of a branch with respect to one source


@dataclass(frozen=True)
class MonotonePiece:
    branch_id: int
    source: int
    lo: int
    hi: int
    direction: str


def monotone_partition(
    g: Graph,
    d: BranchDecomposition,
    branch_id: int,
    s: int,
    row=None,
) -> tuple[MonotonePiece, ...]:
    """Split a branch into maximal runs where distance from s is monotone.

    Each piece has unit steps with at most one flat step; there are at most
    three pieces, and at most two when s does not belong to the branch.
    """
    if row is None:
        row = bfs_row(g, s)
    br = d.branches[branch_id]
    values = [row[v] for v in br.vertices]
    pieces = []
    start = 0
    eps = 0
    flats = 0
    for i in range(1, len(values)):
        step = values[i] - values[i - 1]
        if step == 0:
            if flats:
                pieces.append((start, i - 1, eps))
                start, eps, flats = i, 0, 0
            else:
                flats = 1
        elif eps == 0:
            eps = step
        elif step != eps:
            pieces.append((start, i - 1, eps))
            start, eps, flats = i, step, 0
    pieces.append((start, len(values) - 1, eps))
    return tuple(
        MonotonePiece(
            branch_id,
            s,
            lo,
            hi,
            NONINCREASING if eps < 0 else NONDECREASING,
        )
        for lo, hi, eps in pieces
    )


# ---------------------------------------------------------------------------
# Indistinct sets


@dataclass(frozen=True)
class IndistinctSet:
    source: int
    branch_a: int
    branch_b: int
    segments: tuple[DiagonalSegment, ...]

    def lattice_points(self) -> frozenset[tuple[int, int]]:
        pts: set[tuple[int, int]] = set()
        for seg in self.segments:
            pts.update(seg.points())
        return frozenset(pts)

    def to_json_dict(self) -> dict:
        return {
            "s": self.source,
            "A": self.branch_a,
            "B": self.branch_b,
            "segments": [seg.to_json_dict() for seg in self.segments],
        }


def _strict_runs(values, lo: int, hi: int):
    """Maximal strictly monotone runs of values over positions [lo, hi].

    Returns (start, end, eps) triples; eps is the unit step inside the run,
    and single-position runs borrow the sign of the step entering them
    (falling back to the leaving step, then +1).
    """
    if lo > hi:
        return []
    runs = []
    start = lo
    eps = 0
    for i in range(lo + 1, hi + 1):
        step = values[i] - values[i - 1]
        if step == 0 or (eps != 0 and step != eps):
            runs.append((start, i - 1, eps))
            start, eps = i, 0
        else:
            eps = step
    runs.append((start, hi, eps))
    fixed = []
    for idx, (a, b, eps) in enumerate(runs):
        if eps == 0:  # single position
            if a > lo:
                eps = values[a] - values[a - 1]
            if eps == 0 and b < hi:
                eps = values[b + 1] - values[b]
            if eps == 0:
                eps = 1
        fixed.append((a, b, eps))
    return fixed


def _run_segment(values_a, run_a, values_b, run_b):
    """The matched-distance segment of one run pair, or None."""
    a0, a1, ea = run_a
    b0, b1, eb = run_b
    va_lo, va_hi = sorted((values_a[a0], values_a[a1]))
    vb_lo, vb_hi = sorted((values_b[b0], values_b[b1]))
    v_lo, v_hi = max(va_lo, vb_lo), min(va_hi, vb_hi)
    if v_lo > v_hi:
        return None

    def pos(run, values, v):
        start, _, eps = run
        return start + eps * (v - values[start])

    pa0, pb0 = pos(run_a, values_a, v_lo), pos(run_b, values_b, v_lo)
    pa1, pb1 = pos(run_a, values_a, v_hi), pos(run_b, values_b, v_hi)
    if pa0 > pa1:
        pa0, pa1, pb0, pb1 = pa1, pa0, pb1, pb0
    return DiagonalSegment(pa0, pb0, pa1, pb1, ea * eb)


def indistinct_set(
    g: Graph,
    d: BranchDecomposition,
    s: int,
    branch_a: int,
    branch_b: int,
    row=None,
) -> IndistinctSet:
    """Segments covering exactly the member pairs of (A, B) equidistant
    from s, excluding the identity diagonal when A == B."""
    if row is None:
        row = bfs_row(g, s)
    br_a = d.branches[branch_a]
    br_b = d.branches[branch_b]
    lo_a, hi_a = d.member_range(branch_a)
    lo_b, hi_b = d.member_range(branch_b)
    segs: list[DiagonalSegment] = []
    if lo_a <= hi_a and lo_b <= hi_b:
        values_a = [row[v] for v in br_a.vertices]
        values_b = [row[v] for v in br_b.vertices]
        runs_a = _strict_runs(values_a, lo_a, hi_a)
        runs_b = _strict_runs(values_b, lo_b, hi_b)
        same = branch_a == branch_b
        for ia, run_a in enumerate(runs_a):
            for ib, run_b in enumerate(runs_b):
                if same and ia == ib:
                    continue  # identity diagonal: (x, x) pairs are not violations
                seg = _run_segment(values_a, run_a, values_b, run_b)
                if seg is not None:
                    segs.append(seg)
    segs.sort(key=lambda t: (t.a0, t.b0, t.a1, t.b1, t.slope))
    return IndistinctSet(s, branch_a, branch_b, tuple(segs))


# ---------------------------------------------------------------------------
# Combinatorial structure


def _crossings(segments):
    """Geometric crossings between +1 and -1 slope segments, in rotated
    coordinates. Same-slope segments are parallel and disjoint by
    construction, so only h-v pairs can meet."""
    rot = [to_rotated(seg) for seg in segments]
    hs = [i for i, r in enumerate(rot) if r.axis == "h"]
    vs = [i for i, r in enumerate(rot) if r.axis == "v"]
    cross = {}
    for i in hs:
        h = rot[i]
        for j in vs:
            v = rot[j]
            if h.lo <= v.fixed <= h.hi and v.lo <= h.fixed <= v.hi:
                cross[(i, j)] = (v.fixed, h.fixed)
    return rot, hs, vs, cross


def combinatorial_structure(iset: IndistinctSet):
    """Canonical fingerprint of the segment arrangement.

    Two indistinct sets get equal fingerprints exactly when some segment
    bijection preserves slopes, crossings, and the coordinate order of
    crossing points along each segment.
    """
    segments = iset.segments
    rot, hs, vs, cross = _crossings(segments)

    h_act = sorted({i for (i, _) in cross})
    v_act = sorted({j for (_, j) in cross})
    iso_h = len(hs) - len(h_act)
    iso_v = len(vs) - len(v_act)

    if not cross:
        return ("structure", iso_h, iso_v, (), ())

    # order of crossings along a segment: by u along horizontals, by v along
    # verticals; ties (concurrent crossings) grouped
    h_seq = {}
    for i in h_act:
        items = sorted((cross[(i, j)][0], j) for j in v_act if (i, j) in cross)
        groups = []
        for u, j in items:
            if groups and groups[-1][0] == u:
                groups[-1][1].append(j)
            else:
                groups.append([u, [j]])
        h_seq[i] = [tuple(sorted(g[1])) for g in groups]
    v_seq = {}
    for j in v_act:
        items = sorted((cross[(i, j)][1], i) for i in h_act if (i, j) in cross)
        groups = []
        for v, i in items:
            if groups and groups[-1][0] == v:
                groups[-1][1].append(i)
            else:
                groups.append([v, [i]])
        v_seq[j] = [tuple(sorted(g[1])) for g in groups]

    # refinement invariant to keep the canonical search tiny
    def invariant(idx, seq, other_deg):
        degs = tuple(sorted(other_deg[j] for grp in seq[idx] for j in grp))
        shape = tuple(len(grp) for grp in seq[idx])
        return (len(degs), shape, degs)

    h_deg = {i: sum(len(grp) for grp in h_seq[i]) for i in h_act}
    v_deg = {j: sum(len(grp) for grp in v_seq[j]) for j in v_act}
    h_groups: dict = {}
    for i in h_act:
        h_groups.setdefault(invariant(i, h_seq, v_deg), []).append(i)
    v_groups: dict = {}
    for j in v_act:
        v_groups.setdefault(invariant(j, v_seq, h_deg), []).append(j)

    h_group_list = [h_groups[k] for k in sorted(h_groups)]
    v_group_list = [v_groups[k] for k in sorted(v_groups)]

    work = 1
    for group in h_group_list + v_group_list:
        for size in range(2, len(group) + 1):
            work *= size
    if work > 2_000_000:
        raise RuntimeError(
            "segment arrangement too symmetric to canonize (%d orderings)" % work
        )

    def orderings(group_list):
        if not group_list:
            yield ()
            return
        head, rest = group_list[0], group_list[1:]
        for perm in permutations(head):
            for tail in orderings(rest):
                yield perm + tail

    best = None
    for h_order in orderings(h_group_list):
        h_rank = {i: r for r, i in enumerate(h_order)}
        for v_order in orderings(v_group_list):
            v_rank = {j: r for r, j in enumerate(v_order)}
            enc_h = tuple(
                tuple(tuple(sorted(v_rank[j] for j in grp)) for grp in h_seq[i])
                for i in h_order
            )
            enc_v = tuple(
                tuple(tuple(sorted(h_rank[i] for i in grp)) for grp in v_seq[j])
                for j in v_order
            )
            enc = (enc_h, enc_v)
            if best is None or enc < best:
                best = enc
    return ("structure", iso_h, iso_v, best[0], best[1])


def structures_equal(f1, f2) -> bool:
    return f1 == f2


# ---------------------------------------------------------------------------
# Stems


@dataclass(frozen=True)
class Stem:
    branch_id: int
    lo: int
    hi: int
    fingerprint: tuple


class GeometryContext:
    """Shared per-graph caches: BFS rows, indistinct sets, fingerprints."""

    def __init__(self, g: Graph, d: BranchDecomposition):
        self.g = g
        self.d = d
        self._rows: dict[int, list] = {}
        self._sets: dict[tuple[int, int, int], IndistinctSet] = {}
        self._fps: dict[tuple[int, int, int], tuple] = {}
        self.pairs = tuple(
            (a, b)
            for a in range(d.branch_count)
            for b in range(a, d.branch_count)
            if d.member_range(a)[0] <= d.member_range(a)[1]
            and d.member_range(b)[0] <= d.member_range(b)[1]
        )

    def row(self, s: int):
        row = self._rows.get(s)
        if row is None:
            row = bfs_row(self.g, s)
            self._rows[s] = row
        return row

    def iset(self, s: int, a: int, b: int) -> IndistinctSet:
        key = (s, a, b)
        found = self._sets.get(key)
        if found is None:
            found = indistinct_set(self.g, self.d, s, a, b, row=self.row(s))
            self._sets[key] = found
        return found

    def fingerprint(self, s: int, a: int, b: int):
        key = (s, a, b)
        found = self._fps.get(key)
        if found is None:
            found = combinatorial_structure(self.iset(s, a, b))
            self._fps[key] = found
        return found


def compute_stems(
    g: Graph,
    d: BranchDecomposition,
    ctx: GeometryContext | None = None,
) -> dict[int, tuple[Stem, ...]]:
    """Partition each branch's member positions into maximal runs with a
    constant combinatorial structure for every branch pair.

    Computed by evaluating the structure at every position; this is the
    refinement pass run exhaustively, which makes the stem invariant hold
    by construction at desk scale.
    """
    if ctx is None:
        ctx = GeometryContext(g, d)
    stems: dict[int, tuple[Stem, ...]] = {}
    for br in d.branches:
        lo, hi = d.member_range(br.id)
        if lo > hi:
            stems[br.id] = ()
            continue
        vector = []
        for p in range(lo, hi + 1):
            s = br.vertices[p]
            vector.append(tuple(ctx.fingerprint(s, a, b) for a, b in ctx.pairs))
        out = []
        start = lo
        for p in range(lo + 1, hi + 1):
            if vector[p - lo] != vector[p - 1 - lo]:
                out.append(Stem(br.id, start, p - 1, vector[start - lo]))
                start = p
        out.append(Stem(br.id, start, hi, vector[start - lo]))
        stems[br.id] = tuple(out)
    return stems


# ---------------------------------------------------------------------------
# Parametric families: how segments move as the source slides along a stem


@dataclass(frozen=True)
class ParametricSegment:
    """Segment endpoints as affine functions of the source position t.

    Each coordinate is value = const + coef * t with coef in {-1, 0, +1}.
    """

    slope: int
    a0: tuple[int, int]
    b0: tuple[int, int]
    a1: tuple[int, int]
    b1: tuple[int, int]

    def at(self, t: int) -> DiagonalSegment:
        return DiagonalSegment(
            self.a0[0] + self.a0[1] * t,
            self.b0[0] + self.b0[1] * t,
            self.a1[0] + self.a1[1] * t,
            self.b1[0] + self.b1[1] * t,
            self.slope,
        )


@dataclass(frozen=True)
class ParametricFamily:
    """Piecewise-affine description of a stem's indistinct segments.

    Pieces cover the stem's positions; within a piece every segment moves
    affinely with the source position. Cycle branches wrap, which can force
    more than one piece even though the combinatorial structure is constant.
    """

    branch_id: int
    branch_a: int
    branch_b: int
    pieces: tuple[tuple[int, int, tuple[ParametricSegment, ...]], ...]

    def instantiate(self, t: int) -> tuple[DiagonalSegment, ...]:
        for lo, hi, segs in self.pieces:
            if lo <= t <= hi:
                return tuple(ps.at(t) for ps in segs)
        raise ValueError("position %d outside the stem" % t)


def _fit_piece(seg_lists, ts):
    """Affine fit of sorted segment lists over consecutive positions; the
    list of (piece ranges, ParametricSegments) produced is exact by
    construction because it is rebuilt from the instantiated lists."""
    pieces = []
    start = 0
    coefs = None

    def affine(idx_from, idx_to):
        # per-segment, per-coordinate slope between consecutive positions
        la, lb = seg_lists[idx_from], seg_lists[idx_to]
        if len(la) != len(lb):
            return None
        out = []
        for s1, s2 in zip(la, lb):
            if s1.slope != s2.slope:
                return None
            delta = (s2.a0 - s1.a0, s2.b0 - s1.b0, s2.a1 - s1.a1, s2.b1 - s1.b1)
            if any(x not in (-1, 0, 1) for x in delta):
                return None
            out.append(delta)
        return out

    def close(start, end):
        t0 = ts[start]
        segs = []
        for k, seg in enumerate(seg_lists[start]):
            if coefs is None or start == end:
                delta = (0, 0, 0, 0)
            else:
                delta = coefs[k]
            segs.append(
                ParametricSegment(
                    seg.slope,
                    (seg.a0 - delta[0] * t0, delta[0]),
                    (seg.b0 - delta[1] * t0, delta[1]),
                    (seg.a1 - delta[2] * t0, delta[2]),
                    (seg.b1 - delta[3] * t0, delta[3]),
                )
            )
        pieces.append((ts[start], ts[end], tuple(segs)))

    for i in range(1, len(ts)):
        step = affine(i - 1, i)
        if step is not None and (coefs is None or step == coefs):
            coefs = step if coefs is None else coefs
            continue
        close(start, i - 1)
        start = i
        coefs = None
    close(start, len(ts) - 1)
    return pieces


def parametric_indistinct(
    g: Graph,
    d: BranchDecomposition,
    stem: Stem,
    branch_a: int,
    branch_b: int,
    ctx: GeometryContext | None = None,
) -> ParametricFamily:
    """Fit the stem's indistinct segments for (A, B) as affine functions of
    the source position, verified against every position in the stem."""
    if ctx is None:
        ctx = GeometryContext(g, d)
    br = d.branches[stem.branch_id]
    ts = list(range(stem.lo, stem.hi + 1))
    seg_lists = [
        sorted(
            ctx.iset(br.vertices[t], branch_a, branch_b).segments,
            key=lambda sg: (sg.a0, sg.b0, sg.a1, sg.b1, sg.slope),
        )
        for t in ts
    ]
    pieces = _fit_piece(seg_lists, ts)
    fam = ParametricFamily(stem.branch_id, branch_a, branch_b, tuple(pieces))
    for t in ts:
        got = set(fam.instantiate(t))
        want = set(ctx.iset(br.vertices[t], branch_a, branch_b).segments)
        if got != want:
            raise RuntimeError(
                "parametric family failed to reproduce position %d of branch %d"
                % (t, stem.branch_id)
            )
    return fam
