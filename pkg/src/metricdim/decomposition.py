"""Branch decomposition, 2-core, weighted quotient graph, exact max leaf number.

A branch is a maximal path or cycle whose internal vertices all have degree
two in the host graph. A vertex belongs to a branch when all of its incident
edges are edges of that branch; every other vertex is a junction.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .graphs import Graph, require_connected

PATH = "path"
CYCLE = "cycle"

# owner value for vertices that belong to no branch
JUNCTION = -1


class SizeGuardError(ValueError):
    """Input too large for an exhaustive operation."""


@dataclass(frozen=True)
class Branch:
    """One maximal degree-two chain.

    For PATH kind, `vertices` runs from the smaller endpoint to the larger
    and `endpoints` is that sorted pair. For CYCLE kind attached to a
    junction u, `vertices` starts at u (endpoints (u, u)) and the closing
    edge back to u is implicit. A cycle spanning the whole graph has
    endpoints None and starts at its smallest vertex id.
    """

    id: int
    kind: str
    endpoints: tuple[int, int] | None
    vertices: tuple[int, ...]

    @property
    def length(self) -> int:
        """Edge count."""
        if self.kind == CYCLE:
            return len(self.vertices)
        return len(self.vertices) - 1

    @property
    def position_count(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class BranchDecomposition:
    graph: Graph
    branches: tuple[Branch, ...]
    owner: tuple[int, ...]  # per vertex: branch id, or JUNCTION
    junctions: frozenset[int]

    @property
    def branch_count(self) -> int:
        return len(self.branches)

    def member_range(self, branch_id: int) -> tuple[int, int]:
        """Positions of vertices belonging to the branch, as inclusive (lo, hi).

        Empty ranges come back with lo > hi (e.g. a single-edge branch
        between two junctions).
        """
        br = self.branches[branch_id]
        owner = self.owner
        verts = br.vertices
        lo = 0
        hi = len(verts) - 1
        while lo <= hi and owner[verts[lo]] != branch_id:
            lo += 1
        while hi >= lo and owner[verts[hi]] != branch_id:
            hi -= 1
        return lo, hi


def compute_branches(g: Graph) -> BranchDecomposition:
    """Decompose a connected graph with at least one edge into branches.

    Linear in the graph size.
    """
    n = g.vertex_count
    if n == 0 or g.edge_count == 0:
        raise ValueError("branch decomposition needs at least one edge")
    require_connected(g, "branch decomposition")

    adjacency = g.adjacency
    deg = [len(a) for a in adjacency]
    specials = [v for v in range(n) if deg[v] != 2]

    raw: list[tuple[str, tuple[int, ...]]] = []
    if not specials and n == 3:
        # a lone triangle gets the complete-graph treatment: three one-edge
        # branches meeting at three junctions, matching b(K_n) = n(n-1)/2
        raw.extend((PATH, e) for e in ((0, 1), (0, 2), (1, 2)))
        specials = [0, 1, 2]
    elif not specials:
        # the whole graph is one cycle; cut at the smallest id, head toward
        # its smaller neighbor
        start = 0
        nxt = min(adjacency[start])
        verts = [start]
        prev, cur = start, nxt
        while cur != start:
            verts.append(cur)
            a, b = adjacency[cur]
            prev, cur = cur, (b if a == prev else a)
        raw.append((CYCLE, tuple(verts)))
    else:
        visited = bytearray(n)  # degree-2 interiors, each in exactly one branch
        used_direct = set()  # edges between two special vertices
        for u in specials:
            for w in adjacency[u]:
                if deg[w] != 2:
                    key = (u, w) if u < w else (w, u)
                    if key in used_direct:
                        continue
                    used_direct.add(key)
                    raw.append((PATH, (u, w)))
                    continue
                if visited[w]:
                    continue
                chain = [u, w]
                visited[w] = 1
                prev, cur = u, w
                while deg[cur] == 2:
                    a, b = adjacency[cur]
                    nxt = b if a == prev else a
                    if deg[nxt] == 2:
                        if visited[nxt]:  # interiors sit on exactly one branch
                            raise RuntimeError("branch walk revisited an interior vertex")
                        visited[nxt] = 1
                    chain.append(nxt)
                    prev, cur = cur, nxt
                end = chain[-1]
                if end == u:
                    # cycle hanging off the junction u; drop the repeated u
                    raw.append((CYCLE, tuple(chain[:-1])))
                else:
                    raw.append((PATH, tuple(chain)))

    canonical: list[tuple[str, tuple[int, int] | None, tuple[int, ...]]] = []
    for kind, verts in raw:
        if kind == PATH:
            if verts[0] > verts[-1]:
                verts = tuple(reversed(verts))
            canonical.append((PATH, (verts[0], verts[-1]), verts))
        elif specials:
            # cycle hanging off a junction: keep the attachment first and
            # orient toward its smaller neighbor within the cycle
            if len(verts) >= 3 and verts[1] > verts[-1]:
                verts = (verts[0],) + tuple(reversed(verts[1:]))
            canonical.append((CYCLE, (verts[0], verts[0]), verts))
        else:
            # the whole graph is this cycle
            canonical.append((CYCLE, None, verts))

    canonical.sort(key=lambda item: (item[2], item[0]))
    branches = tuple(
        Branch(i, kind, endpoints, verts)
        for i, (kind, endpoints, verts) in enumerate(canonical)
    )

    # a vertex belongs to a branch iff it touches no other branch's edges
    owner = [-2] * n  # -2: untouched so far
    for br in branches:
        for v in br.vertices:
            if owner[v] == -2:
                owner[v] = br.id
            elif owner[v] != br.id:
                owner[v] = JUNCTION
    junctions = frozenset(v for v in range(n) if owner[v] == JUNCTION)
    return BranchDecomposition(g, branches, tuple(owner), junctions)


@dataclass(frozen=True)
class TwoCoreResult:
    core: Graph
    removed: frozenset[int]
    kept: tuple[int, ...]  # kept[i] = original id of core vertex i


def two_core(g: Graph) -> TwoCoreResult:
    """Recursively strip degree-one vertices; the rest is relabeled compactly."""
    n = g.vertex_count
    deg = [g.degree(v) for v in range(n)]
    removed = bytearray(n)
    stack = [v for v in range(n) if deg[v] <= 1]
    for v in stack:
        removed[v] = 1
    while stack:
        v = stack.pop()
        for w in g.adjacency[v]:
            if not removed[w]:
                deg[w] -= 1
                if deg[w] <= 1:
                    removed[w] = 1
                    stack.append(w)
    kept = tuple(v for v in range(n) if not removed[v])
    relabel = {old: new for new, old in enumerate(kept)}
    edges = [
        (relabel[u], relabel[v])
        for u, v in g.edges()
        if not removed[u] and not removed[v]
    ]
    core = Graph.from_edges(len(kept), edges, validate=False)
    return TwoCoreResult(core, frozenset(v for v in range(n) if removed[v]), kept)


@dataclass(frozen=True)
class QuotientGraph:
    """Weighted multigraph with one vertex per junction (plus one
    representative per junction-free cycle) and one edge per branch."""

    vertices: tuple[int, ...]  # host vertex ids
    edges: tuple[tuple[int, int, int, int], ...]  # (u, v, weight, branch id)

    def distance(self, u: int, v: int):
        """Shortest path between two quotient vertices by edge weight."""
        if u == v:
            return 0
        adj: dict[int, list[tuple[int, int]]] = {x: [] for x in self.vertices}
        for a, b, w, _ in self.edges:
            if a != b:
                adj[a].append((b, w))
                adj[b].append((a, w))
        dist = {u: 0}
        heap = [(0, u)]
        while heap:
            d, x = heapq.heappop(heap)
            if x == v:
                return d
            if d > dist.get(x, d):
                continue
            for y, w in adj[x]:
                nd = d + w
                if nd < dist.get(y, nd + 1):
                    dist[y] = nd
                    heapq.heappush(heap, (nd, y))
        return None


def quotient_graph(d: BranchDecomposition) -> QuotientGraph:
    # quotient vertices: junctions and the remaining branch endpoints
    # (degree-one tips, or the representative of a junction-free cycle)
    vertices = set(d.junctions)
    edges = []
    for br in d.branches:
        if br.endpoints is None:
            rep = br.vertices[0]
            vertices.add(rep)
            edges.append((rep, rep, br.length, br.id))
        else:
            u, v = br.endpoints
            vertices.update((u, v))
            edges.append((u, v, br.length, br.id))
    return QuotientGraph(tuple(sorted(vertices)), tuple(edges))


# ---------------------------------------------------------------------------
# Exact max leaf number by branch and bound over edge inclusion.


def _greedy_seed(g: Graph) -> tuple[int, list[tuple[int, int]]]:
    """Best BFS spanning tree over all roots; a lower bound to prune against."""
    n = g.vertex_count
    best = -1
    best_tree: list[tuple[int, int]] = []
    for root in range(n):
        parent = [-1] * n
        seen = bytearray(n)
        seen[root] = 1
        order = [root]
        head = 0
        while head < len(order):
            u = order[head]
            head += 1
            for v in g.adjacency[u]:
                if not seen[v]:
                    seen[v] = 1
                    parent[v] = u
                    order.append(v)
        tree = [(v, parent[v]) for v in range(n) if parent[v] >= 0]
        degs = [0] * n
        for a, b in tree:
            degs[a] += 1
            degs[b] += 1
        leaves = sum(1 for v in range(n) if degs[v] == 1)
        if leaves > best:
            best = leaves
            best_tree = [(min(a, b), max(a, b)) for a, b in tree]
    return best, best_tree


def max_leaf_exact(g: Graph, guard: int = 20) -> tuple[int, tuple[tuple[int, int], ...]]:
    """Maximum leaf count over all spanning trees, with a witness tree.

    Branch and bound over edge inclusion; a vertex with forest degree >= 2
    can never become a leaf, which gives the upper bound. Practical at desk
    scale only, hence the vertex-count guard.
    """
    n = g.vertex_count
    if n < 2:
        raise ValueError("max leaf number needs at least 2 vertices")
    require_connected(g, "max leaf number")
    if n > guard:
        raise SizeGuardError(
            "n=%d exceeds guard %d; use the decomposition bound (max leaf <= 2b) instead"
            % (n, guard)
        )
    if n == 2:
        return 2, (tuple(g.edges())[0],)

    edges = list(g.edges())
    m = len(edges)
    best, best_tree = _greedy_seed(g)

    def spannable(excluded: set[int]) -> bool:
        # is the graph minus the excluded edges still connected?
        adj = [0] * n
        for idx, (u, v) in enumerate(edges):
            if idx not in excluded:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                v = low.bit_length() - 1
                f ^= low
                nxt |= adj[v]
            frontier = nxt & ~seen
            seen |= frontier
        return seen == (1 << n) - 1

    state_best = [best, best_tree]

    def rec(idx: int, parent_uf: list[int], deg_f: list[int], chosen: list[int], excluded: set[int]):
        chosen_count = len(chosen)
        if chosen_count == n - 1:
            leaves = sum(1 for v in range(n) if deg_f[v] == 1)
            if leaves > state_best[0]:
                state_best[0] = leaves
                state_best[1] = [edges[i] for i in chosen]
            return
        if idx == m:
            return
        internal = sum(1 for v in range(n) if deg_f[v] >= 2)
        if n - internal <= state_best[0]:
            return

        def find(x: int) -> int:
            while parent_uf[x] != x:
                parent_uf[x] = parent_uf[parent_uf[x]]
                x = parent_uf[x]
            return x

        u, v = edges[idx]
        ru, rv = find(u), find(v)
        if ru != rv:
            # include edges[idx]
            parent_uf2 = list(parent_uf)
            parent_uf2[ru] = rv
            deg_f[u] += 1
            deg_f[v] += 1
            chosen.append(idx)
            rec(idx + 1, parent_uf2, deg_f, chosen, excluded)
            chosen.pop()
            deg_f[u] -= 1
            deg_f[v] -= 1
        # exclude edges[idx]
        excluded.add(idx)
        if spannable(excluded):
            rec(idx + 1, parent_uf, deg_f, chosen, excluded)
        excluded.discard(idx)

    rec(0, list(range(n)), [0] * n, [], set())
    witness = tuple(sorted(state_best[1]))
    return state_best[0], witness


@dataclass(frozen=True)
class ParameterReport:
    b: int
    ell: int
    ell_le_2b: bool
    ratio_b_over_ell_sq: float
    witness_tree: tuple[tuple[int, int], ...]

    def to_json_dict(self) -> dict:
        return {
            "b": self.b,
            "ell": self.ell,
            "ell_le_2b": self.ell_le_2b,
            "ratio_b_over_ell_sq": self.ratio_b_over_ell_sq,
        }


def check_parameter_bounds(g: Graph, guard: int = 20) -> ParameterReport:
    """Branch count b and max leaf number, with the max-leaf <= 2b check."""
    d = compute_branches(g)
    b = d.branch_count
    ell, tree = max_leaf_exact(g, guard=guard)
    return ParameterReport(
        b=b,
        ell=ell,
        ell_le_2b=(ell <= 2 * b),
        ratio_b_over_ell_sq=b / (ell * ell),
        witness_tree=tree,
    )
