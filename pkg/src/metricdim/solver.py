"""Exact metric-dimension engines built on branches, stems, and segment
geometry.

Two engines share the same outer loop over the landmark count k:

* pragmatic: places landmarks on concrete vertices and scans all
  k-subsets, resolving branch pairs through the indistinct-set families and
  junction pairs by direct distance comparison. Exhaustive, so a miss at
  size k is a proof.
* faithful: explores the nondeterministic choice space instead of concrete
  positions: a stem per landmark, order relations and parities of the
  rotated segment endpoints, with realizability decided by an integer
  feasibility system over the landmark positions. Practical only for a
  couple of branches.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement

from .decomposition import JUNCTION, BranchDecomposition, compute_branches
from .geometry import (
    GeometryContext,
    ParametricFamily,
    ParametricSegment,
    Stem,
    compute_stems,
    parametric_indistinct,
)
from .graphs import Graph, distance_matrix, require_connected
from .oracle import canonical_locating_set, is_locating_set

FAITHFUL = "faithful"
PRAGMATIC = "pragmatic"


class BudgetExceededError(RuntimeError):
    """Search budget ran out; carries the best bounds known so far."""

    def __init__(self, message, upper_bound=None, upper_witness=None, infeasible_up_to=0):
        super().__init__(message)
        self.upper_bound = upper_bound
        self.upper_witness = upper_witness
        self.infeasible_up_to = infeasible_up_to


class InconsistentProfileError(ValueError):
    """A profile's weak ordering contradicts segment-internal facts."""


@dataclass
class Budget:
    time_ms: int | None = None
    max_nodes: int | None = None


class _Clock:
    def __init__(self, budget: Budget | None):
        self.budget = budget or Budget()
        self.nodes = 0
        self.deadline = None
        if self.budget.time_ms is not None:
            self.deadline = time.monotonic() + self.budget.time_ms / 1000.0

    def tick(self, amount: int = 1):
        self.nodes += amount
        if self.budget.max_nodes is not None and self.nodes > self.budget.max_nodes:
            raise _BudgetSignal()
        if self.deadline is not None and (self.nodes <= 1 or (self.nodes & 0xFF) == 0):
            if time.monotonic() > self.deadline:
                raise _BudgetSignal()


class _BudgetSignal(Exception):
    pass


# ---------------------------------------------------------------------------
# Integer feasibility: two-variable linear constraints plus parities


@dataclass(frozen=True)
class FeasibilitySystem:
    """Conjunction of a*t_i + b*t_j <= c constraints, variable domains, and
    single-variable parity congruences."""

    domains: tuple[tuple[int, int], ...]
    constraints: tuple[tuple[int, int, int, int | None, int], ...]  # (a, i, b, j, c)
    parities: tuple[tuple[int, int], ...] = ()  # (var, residue mod 2)


def _propagate(domains, constraints, parities):
    """Bounds + parity propagation to fixpoint; None when a domain empties."""
    lo = [d[0] for d in domains]
    hi = [d[1] for d in domains]
    par = [None] * len(domains)
    for v, r in parities:
        if par[v] is not None and par[v] != r:
            return None
        par[v] = r

    def snap(i) -> bool:
        if par[i] is not None:
            if lo[i] % 2 != par[i]:
                lo[i] += 1
            if hi[i] % 2 != par[i]:
                hi[i] -= 1
        return lo[i] <= hi[i]

    for i in range(len(domains)):
        if not snap(i):
            return None
    changed = True
    while changed:
        changed = False
        for a, i, b, j, c in constraints:
            if a == 0 and (b == 0 or j is None):
                if c < 0:
                    return None
                continue
            # tighten t_i from a*t_i <= c - b*t_j
            if a != 0:
                if b and j is not None:
                    rest = c - (b * lo[j] if b > 0 else b * hi[j])
                else:
                    rest = c
                if a > 0:
                    bound = rest // a
                    if bound < hi[i]:
                        hi[i] = bound
                        if not snap(i):
                            return None
                        changed = True
                else:
                    q, r = divmod(rest, a)  # ceil(rest / a) with a < 0
                    bound = q + (1 if r else 0)
                    if bound > lo[i]:
                        lo[i] = bound
                        if not snap(i):
                            return None
                        changed = True
            if b != 0 and j is not None:
                rest = c - (a * lo[i] if a > 0 else a * hi[i]) if a else c
                if b > 0:
                    bound = rest // b
                    if bound < hi[j]:
                        hi[j] = bound
                        if not snap(j):
                            return None
                        changed = True
                else:
                    q, r = divmod(rest, b)
                    bound = q + (1 if r else 0)
                    if bound > lo[j]:
                        lo[j] = bound
                        if not snap(j):
                            return None
                        changed = True
    return lo, hi, par


def _check_assignment(values, constraints) -> bool:
    for a, i, b, j, c in constraints:
        total = a * values[i] + (b * values[j] if j is not None else 0)
        if total > c:
            return False
    return True


def integer_feasibility(system: FeasibilitySystem):
    """A satisfying integer point, or None when the system is infeasible.

    Constraint propagation on bounds and parities to fixpoint, then
    backtracking on the smallest remaining domain.
    """
    state = _propagate(system.domains, system.constraints, system.parities)
    if state is None:
        return None
    lo, hi, par = state

    nvars = len(lo)
    order = sorted(range(nvars), key=lambda i: hi[i] - lo[i])

    def search(idx, values):
        if idx == nvars:
            return tuple(values[i] for i in range(nvars)) if _check_assignment(values, system.constraints) else None
        v = order[idx]
        start = lo[v]
        if par[v] is not None and start % 2 != par[v]:
            start += 1
        step = 2 if par[v] is not None else 1
        for val in range(start, hi[v] + 1, step):
            values[v] = val
            # cheap forward check against fixed vars
            ok = True
            for a, i, b, j, c in system.constraints:
                if i in values and (j is None or j in values):
                    total = a * values[i] + (b * values[j] if j is not None else 0)
                    if total > c:
                        ok = False
                        break
            if ok:
                found = search(idx + 1, values)
                if found is not None:
                    return found
            del values[v]
        return None

    return search(0, {})


def enumerate_feasible(system: FeasibilitySystem, limit: int | None = None):
    """All integer points of a small system, lexicographic in variable order."""
    state = _propagate(system.domains, system.constraints, system.parities)
    if state is None:
        return
    lo, hi, par = state
    nvars = len(lo)
    count = 0

    def rec(idx, values):
        nonlocal count
        if idx == nvars:
            if _check_assignment(values, system.constraints):
                yield tuple(values[i] for i in range(nvars))
            return
        start = lo[idx]
        if par[idx] is not None and start % 2 != par[idx]:
            start += 1
        step = 2 if par[idx] is not None else 1
        for val in range(start, hi[idx] + 1, step):
            values[idx] = val
            yield from rec(idx + 1, values)
            del values[idx]

    for point in rec(0, {}):
        yield point
        count += 1
        if limit is not None and count >= limit:
            return


# ---------------------------------------------------------------------------
# Placement sites: member stems plus one pseudo-stem per junction


@dataclass(frozen=True)
class PlacementSite:
    index: int
    branch_id: int | None  # None for a junction site
    junction: int | None
    lo: int
    hi: int

    @property
    def is_junction(self) -> bool:
        return self.junction is not None


def build_sites(d: BranchDecomposition, stems: dict[int, tuple[Stem, ...]]):
    sites = []
    for bid in range(d.branch_count):
        for stem in stems[bid]:
            sites.append(PlacementSite(len(sites), bid, None, stem.lo, stem.hi))
    for j in sorted(d.junctions):
        sites.append(PlacementSite(len(sites), None, j, 0, 0))
    return tuple(sites)


def _site_vertex(d: BranchDecomposition, site: PlacementSite, t: int) -> int:
    if site.is_junction:
        return site.junction
    return d.branches[site.branch_id].vertices[t]


def _junction_pairs(d: BranchDecomposition):
    n = d.graph.vertex_count
    owner = d.owner
    out = []
    for u in range(n):
        if owner[u] == JUNCTION:
            for v in range(n):
                if v != u and (owner[v] != JUNCTION or v > u):
                    out.append((u, v))
    return tuple(out)


# ---------------------------------------------------------------------------
# Engine context shared by both engines and all k


class _EngineContext:
    def __init__(self, g: Graph, budget: Budget | None):
        require_connected(g, "metric-dimension solve")
        if g.vertex_count < 2:
            raise ValueError("solver needs at least 2 vertices")
        self.g = g
        self.clock = _Clock(budget)
        self.d = compute_branches(g)
        self.ctx = GeometryContext(g, self.d)
        self.stems = compute_stems(g, self.d, self.ctx)
        self.sites = build_sites(self.d, self.stems)
        self.matrix = distance_matrix(g)
        self.jpairs = _junction_pairs(self.d)
        self.families: dict[tuple[tuple[int, int, int], tuple[int, int]], ParametricFamily] = {}
        for bid in range(self.d.branch_count):
            for stem in self.stems[bid]:
                for pair in self.ctx.pairs:
                    self.families[(self._stem_key(stem), pair)] = parametric_indistinct(
                        g, self.d, stem, pair[0], pair[1], self.ctx
                    )
        # concrete per-vertex point sets, instantiated from the families
        self.vertex_points: list[dict[tuple[int, int], frozenset]] = [
            {} for _ in range(g.vertex_count)
        ]
        for bid in range(self.d.branch_count):
            branch = self.d.branches[bid]
            for stem in self.stems[bid]:
                for pair in self.ctx.pairs:
                    fam = self.families[(self._stem_key(stem), pair)]
                    for t in range(stem.lo, stem.hi + 1):
                        pts = frozenset(
                            p for seg in fam.instantiate(t) for p in seg.points()
                        )
                        if pts:
                            self.vertex_points[branch.vertices[t]][pair] = pts
        for j in self.d.junctions:
            for pair in self.ctx.pairs:
                pts = self.ctx.iset(j, pair[0], pair[1]).lattice_points()
                if pts:
                    self.vertex_points[j][pair] = pts
        self.stats = {"profiles": 0, "feasibility_calls": 0}

    @staticmethod
    def _stem_key(stem: Stem):
        return (stem.branch_id, stem.lo, stem.hi)

    def resolves_junction_pairs(self, subset) -> bool:
        matrix = self.matrix
        for u, v in self.jpairs:
            for s in subset:
                if matrix[s][u] != matrix[s][v]:
                    break
            else:
                return False
        return True


@dataclass
class SolveResult:
    dimension: int
    witness: tuple[int, ...]
    engine: str
    stats: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "witness": list(self.witness),
            "engine": self.engine,
            "stats": dict(self.stats),
        }


# ---------------------------------------------------------------------------
# Pragmatic engine: exhaustive scan of concrete placements


def _pragmatic_k(ec: _EngineContext, k: int):
    n = ec.g.vertex_count
    pairs = ec.ctx.pairs
    vertex_points = ec.vertex_points
    for subset in combinations(range(n), k):
        ec.clock.tick()
        failed = False
        for pair in pairs:
            sets = []
            resolved = False
            for s in subset:
                pts = vertex_points[s].get(pair)
                if pts is None:
                    resolved = True  # this landmark separates the whole pair
                    break
                sets.append(pts)
            if resolved:
                continue
            sets.sort(key=len)
            common = sets[0]
            for other in sets[1:]:
                common = common & other
                if not common:
                    break
            if common:
                failed = True
                break
        if failed:
            continue
        if not ec.resolves_junction_pairs(subset):
            continue
        ok, bad = is_locating_set(ec.g, subset)
        if not ok:
            raise RuntimeError(
                "internal error: candidate %r passed the pair machinery but "
                "fails verification on %r" % (subset, bad)
            )
        return subset
    return None


def solve_pragmatic(g: Graph, k: int, budget: Budget | None = None):
    """Witness locating set of size exactly k, or None (proved by exhaustion)."""
    ec = _EngineContext(g, budget)
    try:
        return _pragmatic_k(ec, k)
    except _BudgetSignal:
        raise BudgetExceededError(
            "budget exhausted scanning size-%d placements" % k,
            upper_bound=len(canonical_locating_set(ec.d)),
            upper_witness=canonical_locating_set(ec.d),
        ) from None


# ---------------------------------------------------------------------------
# Faithful engine: symbolic choices over orders and parities


@dataclass(frozen=True)
class _Lin:
    """const + coef * t_var; var is a landmark index (None for pure consts)."""

    const: int
    coef: int = 0
    var: int | None = None

    def shift(self, delta: int) -> "_Lin":
        return _Lin(self.const + delta, self.coef, self.var)

    def value(self, positions) -> int:
        if self.var is None or self.coef == 0:
            return self.const
        return self.const + self.coef * positions[self.var]


@dataclass(frozen=True)
class _SymSeg:
    axis: str  # "h" or "v"
    fixed: _Lin
    lo: _Lin
    hi: _Lin


class _Store:
    """Growable constraint set over landmark positions with propagation."""

    def __init__(self, domains):
        self.domains = list(domains)
        self.cons: list[tuple[int, int, int, int | None, int]] = []
        self.parity: list[int | None] = [None] * len(domains)

    def copy(self) -> "_Store":
        s = _Store(self.domains)
        s.cons = list(self.cons)
        s.parity = list(self.parity)
        return s

    def feasible(self) -> bool:
        parities = tuple((i, p) for i, p in enumerate(self.parity) if p is not None)
        return (
            _propagate(tuple(self.domains), tuple(self.cons), parities) is not None
        )

    def add_le(self, f: _Lin, g: _Lin, slack: int = 0) -> bool:
        """Record f <= g + slack; returns False only on a constant clash.
        Callers run feasible() after a batch of additions."""
        if f.var is not None and g.var is not None and f.var == g.var:
            dcoef = f.coef - g.coef
            dconst = g.const + slack - f.const
            if dcoef == 0:
                return dconst >= 0
            self.cons.append((dcoef, f.var, 0, None, dconst))
        else:
            a = f.coef if f.var is not None else 0
            i = f.var if f.var is not None else 0
            b = -g.coef if g.var is not None else 0
            j = g.var
            self.cons.append((a, i, b, j, g.const + slack - f.const))
        return True

    def add_eq(self, f: _Lin, g: _Lin) -> bool:
        return self.add_le(f, g) and self.add_le(g, f)

    def add_parity(self, f: _Lin, bit: int) -> bool:
        if f.var is None or f.coef % 2 == 0:
            return f.const % 2 == bit
        want = (bit - f.const) % 2
        cur = self.parity[f.var]
        if cur is not None:
            return cur == want
        self.parity[f.var] = want
        return True

    def to_system(self) -> FeasibilitySystem:
        return FeasibilitySystem(
            tuple((lo, hi) for lo, hi in self.domains),
            tuple(self.cons),
            tuple((i, p) for i, p in enumerate(self.parity) if p is not None),
        )


def _sym_segments(fam_piece, landmark: int):
    """Rotated symbolic segments of one family piece for one landmark."""
    out = []
    for ps in fam_piece:
        a0c, a0k = ps.a0
        b0c, b0k = ps.b0
        a1c, a1k = ps.a1
        b1c, b1k = ps.b1
        u0 = _Lin(a0c + b0c, a0k + b0k, landmark)
        v0 = _Lin(a0c - b0c, a0k - b0k, landmark)
        u1 = _Lin(a1c + b1c, a1k + b1k, landmark)
        v1 = _Lin(a1c - b1c, a1k - b1k, landmark)
        if ps.slope == 1:
            out.append(_SymSeg("h", v0, u0, u1))
        else:
            out.append(_SymSeg("v", u0, v0, v1))
    return out


def _dead_options(p: _SymSeg, q: _SymSeg):
    """Constraint alternatives under which p and q share no valid point."""
    opts = []
    if p.axis == q.axis:
        opts.append([("le", p.fixed, q.fixed, -1)])
        opts.append([("le", q.fixed, p.fixed, -1)])
        opts.append([("eq", p.fixed, q.fixed), ("le", p.hi, q.lo, -1)])
        opts.append([("eq", p.fixed, q.fixed), ("le", q.hi, p.lo, -1)])
        return opts
    h, v = (p, q) if p.axis == "h" else (q, p)
    opts.append([("le", v.fixed, h.lo, -1)])
    opts.append([("le", h.hi, v.fixed, -1)])
    opts.append([("le", h.fixed, v.lo, -1)])
    opts.append([("le", v.hi, h.fixed, -1)])
    for bit in (0, 1):
        opts.append([("par", h.fixed, bit), ("par", v.fixed, 1 - bit)])
    return opts


def _alive_options(p: _SymSeg, q: _SymSeg):
    """(constraints, resulting piece) alternatives where p and q overlap."""
    opts = []
    if p.axis == q.axis:
        for lo_from, lo_other, lo_bias in ((p.lo, q.lo, 0), (q.lo, p.lo, -1)):
            for hi_from, hi_other, hi_bias in ((p.hi, q.hi, 0), (q.hi, p.hi, -1)):
                cons = [
                    ("eq", p.fixed, q.fixed),
                    ("le", lo_other, lo_from, lo_bias),
                    ("le", hi_from, hi_other, hi_bias),
                    ("le", lo_from, hi_from, 0),
                ]
                opts.append((cons, _SymSeg(p.axis, p.fixed, lo_from, hi_from)))
        return opts
    h, v = (p, q) if p.axis == "h" else (q, p)
    for bit in (0, 1):
        cons = [
            ("le", h.lo, v.fixed, 0),
            ("le", v.fixed, h.hi, 0),
            ("le", v.lo, h.fixed, 0),
            ("le", h.fixed, v.hi, 0),
            ("par", h.fixed, bit),
            ("par", v.fixed, bit),
        ]
        opts.append((cons, _SymSeg("h", h.fixed, v.fixed, v.fixed)))
    return opts


def _is_const(f: _Lin) -> bool:
    return f.var is None or f.coef == 0


def _apply(store: _Store, cons) -> _Store | None:
    """Apply a constraint batch to a copy of the store; constant facts are
    checked in place so trivially-decided branches cost nothing. One
    propagation pass runs at the end of the batch."""
    out = None
    for item in cons:
        if item[0] == "le":
            _, f, g, slack = item
            if _is_const(f) and _is_const(g):
                if f.const > g.const + slack:
                    return None
                continue
            out = store.copy() if out is None else out
            if not out.add_le(f, g, slack):
                return None
        elif item[0] == "eq":
            _, f, g = item
            if _is_const(f) and _is_const(g):
                if f.const != g.const:
                    return None
                continue
            out = store.copy() if out is None else out
            if not out.add_eq(f, g):
                return None
        else:
            _, f, bit = item
            if _is_const(f):
                if f.const % 2 != bit:
                    return None
                continue
            out = store.copy() if out is None else out
            if not out.add_parity(f, bit):
                return None
    if out is None:
        return store
    return out if out.feasible() else None


_SATISFIABLE = object()


class _FaithfulSearch:
    """DFS over the emptiness choices of every branch pair, then integer
    feasibility and junction checks on each accepted leaf."""

    def __init__(self, ec: _EngineContext, assignment, site_objects):
        self.ec = ec
        self.assignment = assignment
        self.sites = site_objects
        self.k = len(assignment)
        self._seg_cache: dict = {}

    def run(self, store: _Store):
        # a pair that cannot be emptied even in isolation sinks the whole
        # assignment; checking each alone first avoids re-proving that at
        # every leaf of the other pairs' joint choice space
        for pair_idx in range(len(self.ec.ctx.pairs)):
            if self._start_pair(pair_idx, store, lambda s: _SATISFIABLE) is None:
                return None
        return self._pair_dfs(0, store)

    def _pair_dfs(self, pair_idx: int, store: _Store):
        if pair_idx == len(self.ec.ctx.pairs):
            return self._finish(store)
        return self._start_pair(
            pair_idx, store, lambda s: self._pair_dfs(pair_idx + 1, s)
        )

    def _start_pair(self, pair_idx: int, store: _Store, cont):
        pair = self.ec.ctx.pairs[pair_idx]
        fams = []
        for lm, site in enumerate(self.sites):
            fams.append((len(self._segments(lm, site, pair)), lm))
        fams.sort()
        order = [(lm, self.sites[lm]) for _, lm in fams]
        first_lm, first_site = order[0]
        pieces = self._segments(first_lm, first_site, pair)
        return self._landmark_dfs(pair, order, 1, pieces, store, cont)

    def _segments(self, landmark: int, site, pair):
        key = (landmark, pair)
        cached = self._seg_cache.get(key)
        if cached is not None:
            return cached
        ec = self.ec
        if site.is_junction:
            segs = ec.ctx.iset(site.junction, pair[0], pair[1]).segments
            const_fams = [
                ParametricSegment(s.slope, (s.a0, 0), (s.b0, 0), (s.a1, 0), (s.b1, 0))
                for s in segs
            ]
            out = _sym_segments(const_fams, landmark)
        else:
            fam = ec.families[((site.branch_id, site.stem_lo, site.stem_hi), pair)]
            out = None
            for lo, hi, segs in fam.pieces:
                if lo <= site.lo and site.hi <= hi:
                    out = _sym_segments(segs, landmark)
                    break
            if out is None:
                raise RuntimeError("site does not sit inside one affine piece")
        self._seg_cache[key] = out
        return out

    def _landmark_dfs(self, pair, order, next_idx, pieces, store, cont):
        ec = self.ec
        ec.clock.tick()
        if not pieces:
            return cont(store)
        if next_idx == len(order):
            return None  # intersection provably nonempty on this branch
        lm, site = order[next_idx]
        segs = self._segments(lm, site, pair)
        if not segs:
            return cont(store)
        combos = [(p, q) for p in pieces for q in segs]
        last = next_idx == len(order) - 1

        def combo_dfs(idx, cur_store, survivors):
            ec.clock.tick()
            if idx == len(combos):
                return self._landmark_dfs(
                    pair, order, next_idx + 1, survivors, cur_store, cont
                )
            p, q = combos[idx]
            for cons in _dead_options(p, q):
                nxt = _apply(cur_store, cons)
                if nxt is not None:
                    found = combo_dfs(idx + 1, nxt, survivors)
                    if found is not None:
                        return found
            if not last:
                for cons, piece in _alive_options(p, q):
                    nxt = _apply(cur_store, cons)
                    if nxt is not None:
                        found = combo_dfs(idx + 1, nxt, survivors + [piece])
                        if found is not None:
                            return found
            return None

        return combo_dfs(0, store, [])

    def _finish(self, store: _Store):
        ec = self.ec
        ec.stats["profiles"] += 1
        ec.stats["feasibility_calls"] += 1
        system = store.to_system()
        if integer_feasibility(system) is None:
            return None
        for positions in enumerate_feasible(system):
            ec.clock.tick()
            subset = tuple(
                sorted(
                    _site_vertex(ec.d, site.site, positions[i])
                    for i, site in enumerate(self.sites)
                )
            )
            if len(set(subset)) != len(subset):
                continue
            if not ec.resolves_junction_pairs(subset):
                continue
            ok, bad = is_locating_set(ec.g, subset)
            if not ok:
                raise RuntimeError(
                    "internal error: faithful placement %r fails verification on %r"
                    % (subset, bad)
                )
            return subset
        return None


@dataclass(frozen=True)
class _AffineSite:
    """A stem restricted to one affine piece (or a junction pseudo-stem)."""

    site: PlacementSite
    lo: int
    hi: int

    @property
    def is_junction(self):
        return self.site.is_junction

    @property
    def junction(self):
        return self.site.junction

    @property
    def branch_id(self):
        return self.site.branch_id

    @property
    def stem_lo(self):
        return self.site.lo

    @property
    def stem_hi(self):
        return self.site.hi


def _affine_sites(ec: _EngineContext):
    """Split every stem at the boundaries of its pairs' affine pieces so a
    landmark inside one site has affine features for every pair."""
    out = []
    for site in ec.sites:
        if site.is_junction:
            out.append(_AffineSite(site, 0, 0))
            continue
        cuts = {site.lo, site.hi + 1}
        for pair in ec.ctx.pairs:
            fam = ec.families[((site.branch_id, site.lo, site.hi), pair)]
            for lo, hi, _ in fam.pieces:
                cuts.add(lo)
                cuts.add(hi + 1)
        marks = sorted(c for c in cuts if site.lo <= c <= site.hi + 1)
        for a, b in zip(marks, marks[1:]):
            out.append(_AffineSite(site, a, b - 1))
    return tuple(out)


def _faithful_k(ec: _EngineContext, k: int, sites):
    def spread(assignment):
        groups = set()
        for idx in assignment:
            site = sites[idx]
            groups.add(("j", site.junction) if site.is_junction else ("b", site.branch_id))
        return len(groups)

    # placements spread over distinct branches resolve pairs faster, so try
    # them first; the order stays a pure function of the assignment
    assignments = sorted(
        combinations_with_replacement(range(len(sites)), k),
        key=lambda a: (k - spread(a), a),
    )
    for assignment in assignments:
        ec.clock.tick()
        chosen = [sites[i] for i in assignment]
        domains = [(s.lo, s.hi) for s in chosen]
        store = _Store(domains)
        for i in range(k - 1):
            if assignment[i] == assignment[i + 1]:
                store.add_le(_Lin(0, 1, i), _Lin(0, 1, i + 1), -1)
        if not store.feasible():
            continue
        found = _FaithfulSearch(ec, assignment, chosen).run(store)
        if found is not None:
            return found
    return None


# ---------------------------------------------------------------------------
# Public driver


def solve_fpt(g: Graph, mode: str = PRAGMATIC, budget: Budget | None = None) -> SolveResult:
    """Exact metric dimension with a verified witness.

    Tries k = 1, 2, ... and returns at the first feasible size, so the
    dimension equals the brute-force answer whenever the search completes.
    """
    if mode not in (FAITHFUL, PRAGMATIC):
        raise ValueError("unknown mode %r" % mode)
    started = time.monotonic()
    ec = _EngineContext(g, budget)
    upper = canonical_locating_set(ec.d)
    k_cap = min(len(upper), g.vertex_count - 1, 3 * ec.d.branch_count)
    sites = _affine_sites(ec) if mode == FAITHFUL else None
    k = 0
    try:
        for k in range(1, k_cap + 1):
            if mode == PRAGMATIC:
                witness = _pragmatic_k(ec, k)
            else:
                witness = _faithful_k(ec, k, sites)
            if witness is not None:
                ec.stats["ms"] = int((time.monotonic() - started) * 1000)
                ec.stats["nodes"] = ec.clock.nodes
                return SolveResult(
                    dimension=k,
                    witness=tuple(sorted(witness)),
                    engine="fpt-faithful" if mode == FAITHFUL else "fpt-pragmatic",
                    stats=dict(ec.stats),
                )
    except _BudgetSignal:
        raise BudgetExceededError(
            "budget exhausted at k=%d" % k,
            upper_bound=len(upper),
            upper_witness=upper,
            infeasible_up_to=k - 1,
        ) from None
    raise RuntimeError(
        "no locating set of size <= %d found; canonical-set invariant violated" % k_cap
    )


# ---------------------------------------------------------------------------
# Materialized choice profiles (the literal enumeration, desk scale only)


@dataclass(frozen=True)
class _Feature:
    """One endpoint coordinate of one symbolic segment."""

    landmark: int
    segment: int
    role: str  # "fixed", "lo", "hi"
    axis: str  # "u" or "v"
    expr: _Lin


@dataclass(frozen=True)
class ChoiceProfile:
    k: int
    assignment: tuple[int, ...]
    pair_features: tuple[tuple[tuple[int, int], tuple[_Feature, ...]], ...]
    u_ranks: tuple[tuple[int, ...], ...]  # per pair, rank per u-feature
    v_ranks: tuple[tuple[int, ...], ...]
    parities: tuple[tuple[int, ...], ...]  # per pair, bit per feature


def _pair_feature_table(sites, assignment, segments_of):
    """Features of every landmark's segments for one pair, in canonical order."""
    feats = []
    for lm in range(len(assignment)):
        for si, seg in enumerate(segments_of(lm)):
            if seg.axis == "h":
                feats.append(_Feature(lm, si, "fixed", "v", seg.fixed))
                feats.append(_Feature(lm, si, "lo", "u", seg.lo))
                feats.append(_Feature(lm, si, "hi", "u", seg.hi))
            else:
                feats.append(_Feature(lm, si, "fixed", "u", seg.fixed))
                feats.append(_Feature(lm, si, "lo", "v", seg.lo))
                feats.append(_Feature(lm, si, "hi", "v", seg.hi))
    return tuple(feats)


def _weak_orders(count: int):
    """All rank vectors of total preorders on `count` items."""
    if count == 0:
        yield ()
        return
    items = list(range(count))

    def rec(remaining, rank, ranks):
        if not remaining:
            yield tuple(ranks[i] for i in items)
            return
        # choose the nonempty set of items sharing the next rank
        rest = list(remaining)
        for size in range(1, len(rest) + 1):
            for block in combinations(rest, size):
                for i in block:
                    ranks[i] = rank
                yield from rec(
                    [i for i in rest if i not in block], rank + 1, ranks
                )
        return

    yield from rec(items, 0, {})


def enumerate_profiles(k, sites, pair_segment_fn=None, max_profiles: int = 200_000):
    """Stream of materialized ChoiceProfiles: landmark-to-site assignments
    (as multisets), then per-pair weak orderings and parity bits.

    Orders contradicting segment-internal facts (a lo ranked after its hi)
    are not generated. `pair_segment_fn(assignment) -> [(pair, segments_of)]`
    supplies the symbolic segments; with no pairs the stream is just the
    assignments.
    """
    produced = 0
    for assignment in combinations_with_replacement(range(len(sites)), k):
        tables = []
        if pair_segment_fn is not None:
            tables = pair_segment_fn(assignment)

        def expand(idx, acc_feats, acc_u, acc_v, acc_par):
            nonlocal produced
            if idx == len(tables):
                profile = ChoiceProfile(
                    k,
                    assignment,
                    tuple(acc_feats),
                    tuple(acc_u),
                    tuple(acc_v),
                    tuple(acc_par),
                )
                produced += 1
                if produced > max_profiles:
                    raise BudgetExceededError(
                        "profile space exceeds %d" % max_profiles
                    )
                yield profile
                return
            pair, segments_of = tables[idx]
            feats = _pair_feature_table(sites, assignment, segments_of)
            u_idx = [i for i, f in enumerate(feats) if f.axis == "u"]
            v_idx = [i for i, f in enumerate(feats) if f.axis == "v"]
            seg_coords: dict = {}
            for i, f in enumerate(feats):
                seg_coords.setdefault((f.landmark, f.segment), {})[f.role] = i

            def consistent(ranks, idx_list):
                pos = {g: r for g, r in zip(idx_list, ranks)}
                for coords in seg_coords.values():
                    lo, hi = coords["lo"], coords["hi"]
                    if lo in pos and hi in pos and pos[lo] > pos[hi]:
                        return False
                return True

            nseg = len(seg_coords)
            for u_ranks in _weak_orders(len(u_idx)):
                if not consistent(u_ranks, u_idx):
                    continue
                for v_ranks in _weak_orders(len(v_idx)):
                    if not consistent(v_ranks, v_idx):
                        continue
                    for bits in range(1 << nseg):
                        par = [0] * len(feats)
                        for sidx, coords in enumerate(sorted(seg_coords)):
                            bit = (bits >> sidx) & 1
                            for i in seg_coords[coords].values():
                                par[i] = bit
                        yield from expand(
                            idx + 1,
                            acc_feats + [(pair, feats)],
                            acc_u + [u_ranks],
                            acc_v + [v_ranks],
                            acc_par + [tuple(par)],
                        )

        yield from expand(0, [], [], [], [])


def symbolic_empty_intersection(profile: ChoiceProfile, pair) -> bool:
    """Decide, from declared orders and parities alone, whether every
    cross-landmark segment pair of `pair`'s families is empty of valid
    lattice points. Contradictory profiles raise InconsistentProfileError."""
    pair_idx = None
    for i, (p, _) in enumerate(profile.pair_features):
        if p == pair:
            pair_idx = i
            break
    if pair_idx is None:
        raise ValueError("pair %r not in profile" % (pair,))
    feats = profile.pair_features[pair_idx][1]
    u_rank_list = profile.u_ranks[pair_idx]
    v_rank_list = profile.v_ranks[pair_idx]
    parities = profile.parities[pair_idx]

    u_idx = [i for i, f in enumerate(feats) if f.axis == "u"]
    v_idx = [i for i, f in enumerate(feats) if f.axis == "v"]
    rank = {}
    for i, r in zip(u_idx, u_rank_list):
        rank[i] = ("u", r)
    for i, r in zip(v_idx, v_rank_list):
        rank[i] = ("v", r)

    segs: dict = {}
    for i, f in enumerate(feats):
        segs.setdefault((f.landmark, f.segment), {})[f.role] = i
    for coords in segs.values():
        lo, hi = coords["lo"], coords["hi"]
        if rank[lo][1] > rank[hi][1]:
            raise InconsistentProfileError(
                "segment lo ranked after its hi in declared order"
            )
        if parities[lo] != parities[coords["fixed"]] or parities[hi] != parities[coords["fixed"]]:
            raise InconsistentProfileError(
                "segment endpoint parities disagree with its fixed coordinate"
            )

    seg_list = sorted(segs)
    axis_of = {}
    for key in seg_list:
        fixed_axis = feats[segs[key]["fixed"]].axis
        axis_of[key] = "h" if fixed_axis == "v" else "v"

    def r(i):
        return rank[i][1]

    for a_key, b_key in combinations(seg_list, 2):
        if a_key[0] == b_key[0]:
            continue  # same landmark: only cross-landmark intersections matter
        a, b = segs[a_key], segs[b_key]
        ax_a, ax_b = axis_of[a_key], axis_of[b_key]
        if ax_a == ax_b:
            if r(a["fixed"]) != r(b["fixed"]):
                continue
            if r(a["hi"]) < r(b["lo"]) or r(b["hi"]) < r(a["lo"]):
                continue
            return False
        h, v = (a, b) if ax_a == "h" else (b, a)
        if r(h["lo"]) <= r(v["fixed"]) <= r(h["hi"]) and r(v["lo"]) <= r(h["fixed"]) <= r(v["hi"]):
            if parities[h["fixed"]] == parities[v["fixed"]]:
                return False
    return True


def build_feasibility(profile: ChoiceProfile, domains) -> FeasibilitySystem:
    """Translate a profile's declared orders and parities into a feasibility
    system over landmark positions: each adjacent pair in a sorted order
    becomes one two-variable constraint, each parity bit one congruence."""
    cons: list[tuple[int, int, int, int | None, int]] = []
    parities: list[tuple[int, int]] = []
    infeasible = False

    def add_le(f: _Lin, g: _Lin, slack: int):
        nonlocal infeasible
        if (f.var is None or f.coef == 0) and (g.var is None or g.coef == 0):
            if f.const > g.const + slack:
                infeasible = True
            return
        a = f.coef if f.var is not None else 0
        i = f.var if f.var is not None else 0
        b = -g.coef if g.var is not None else 0
        j = g.var if g.var is not None else None
        if f.var is not None and g.var is not None and f.var == g.var:
            cons.append((f.coef - g.coef, f.var, 0, None, g.const + slack - f.const))
        else:
            cons.append((a, i, b, j, g.const + slack - f.const))

    for pair_idx in range(len(profile.pair_features)):
        feats = profile.pair_features[pair_idx][1]
        for axis, ranks in (("u", profile.u_ranks[pair_idx]), ("v", profile.v_ranks[pair_idx])):
            idx_list = [i for i, f in enumerate(feats) if f.axis == axis]
            by_rank = sorted(zip(ranks, idx_list))
            for (r1, i1), (r2, i2) in zip(by_rank, by_rank[1:]):
                f, g = feats[i1].expr, feats[i2].expr
                if r1 == r2:
                    add_le(f, g, 0)
                    add_le(g, f, 0)
                else:
                    add_le(f, g, -1)
        for i, bit in enumerate(profile.parities[pair_idx]):
            expr = feats[i].expr
            if expr.var is None or expr.coef % 2 == 0:
                if expr.const % 2 != bit:
                    infeasible = True
            else:
                parities.append((expr.var, (bit - expr.const) % 2))
    if infeasible:
        cons.append((0, 0, 0, None, -1))
    return FeasibilitySystem(tuple(domains), tuple(cons), tuple(set(parities)))
