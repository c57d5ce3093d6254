"""Shared test fixtures: corpora, independent oracles, and an exhaustive
enumerator of small connected graphs up to isomorphism."""

from __future__ import annotations

import random
from itertools import combinations, permutations

from metricdim import Graph, bfs_row, compute_branches, generate

# ---------------------------------------------------------------------------
# Hand-built families the generators do not cover


def tadpole(cycle_len: int, tail_len: int) -> Graph:
    edges = [(i, (i + 1) % cycle_len) for i in range(cycle_len)]
    prev = 0
    for i in range(tail_len):
        edges.append((prev, cycle_len + i))
        prev = cycle_len + i
    return Graph.from_edges(cycle_len + tail_len, edges)


def figure_eight(c1: int, c2: int) -> Graph:
    edges = [(i, (i + 1) % c1) for i in range(c1)]
    ring = [0] + list(range(c1, c1 + c2 - 1))
    for i in range(len(ring)):
        edges.append((ring[i], ring[(i + 1) % len(ring)]))
    return Graph.from_edges(c1 + c2 - 1, edges)


def theta(l1: int, l2: int, l3: int) -> Graph:
    """Two junctions joined by three internally disjoint paths."""
    edges = []
    nxt = 2
    for length in (l1, l2, l3):
        prev = 0
        for _ in range(length - 1):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, 1))
    return Graph.from_edges(nxt, edges)


def dumbbell(c1: int, c2: int, bridge: int) -> Graph:
    """Two cycles joined by a path with `bridge` edges."""
    edges = [(i, (i + 1) % c1) for i in range(c1)]
    prev = 0
    nxt = c1
    for _ in range(bridge):
        edges.append((prev, nxt))
        prev = nxt
        nxt += 1
    ring = [prev] + list(range(nxt, nxt + c2 - 1))
    for i in range(len(ring)):
        edges.append((ring[i], ring[(i + 1) % len(ring)]))
    return Graph.from_edges(nxt + c2 - 1, edges)


def family_corpus() -> list[tuple[str, Graph]]:
    """Small named graphs exercising every branch shape."""
    out = []
    for n in range(2, 10):
        out.append(("path%d" % n, generate("path", n)))
    for n in range(3, 10):
        out.append(("cycle%d" % n, generate("cycle", n)))
    for n in range(3, 7):
        out.append(("complete%d" % n, generate("complete", n)))
    for k in range(2, 7):
        out.append(("star%d" % k, generate("star", k)))
    for legs, length in [(2, 2), (3, 1), (3, 2), (3, 3), (4, 2)]:
        out.append(("spider%dx%d" % (legs, length), generate("spider", legs, length)))
    for n, t in [(3, 1), (3, 2), (4, 1)]:
        out.append(("subdiv%d_%d" % (n, t), generate("subdivided_complete", n, t)))
    out.append(("theta234", theta(2, 3, 4)))
    out.append(("theta223", theta(2, 2, 3)))
    out.append(("tadpole4_2", tadpole(4, 2)))
    out.append(("tadpole5_3", tadpole(5, 3)))
    out.append(("fig8_3_4", figure_eight(3, 4)))
    out.append(("fig8_4_4", figure_eight(4, 4)))
    out.append(("dumbbell3_3_2", dumbbell(3, 3, 2)))
    return out


def random_corpus(count: int, n_lo: int, n_hi: int, seed: int, extra_edges: int = 5):
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randrange(n_lo, n_hi + 1)
        m_max = min(n * (n - 1) // 2, n - 1 + extra_edges)
        m = rng.randrange(n - 1, m_max + 1)
        out.append(
            ("rand%d_n%d_m%d" % (i, n, m), generate("random_connected", n, m, seed=seed * 1000 + i))
        )
    return out


def uneven_spider(leg_lengths) -> Graph:
    edges = []
    nxt = 1
    for length in leg_lengths:
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Graph.from_edges(nxt, edges)


def low_branch_corpus(count: int, n_hi: int, b_max: int, seed: int):
    """Sampled connected graphs with few branches: parametrized families
    plus randomly subdivided small multigraph skeletons."""
    rng = random.Random(seed)
    pool: list[tuple[str, Graph]] = []
    for n in range(2, n_hi + 1):
        pool.append(("path%d" % n, generate("path", n)))
    for n in range(3, n_hi + 1):
        pool.append(("cycle%d" % n, generate("cycle", n)))
    for c in range(3, n_hi):
        for t in range(1, n_hi - c + 1):
            pool.append(("tadpole%d_%d" % (c, t), tadpole(c, t)))
    for c1 in range(3, n_hi):
        for c2 in range(c1, n_hi + 2 - c1):
            if c1 + c2 - 1 <= n_hi:
                pool.append(("fig8_%d_%d" % (c1, c2), figure_eight(c1, c2)))
    if b_max >= 3:
        for legs in (3, 4):
            if legs > b_max:
                continue
            seen = set()
            for _ in range(count):
                lengths = tuple(
                    sorted(rng.randrange(1, (n_hi - 1) // 2 + 1) for _ in range(legs))
                )
                if sum(lengths) + 1 > n_hi or lengths in seen:
                    continue
                seen.add(lengths)
                pool.append(("spider%s" % (lengths,), uneven_spider(lengths)))
        for l1 in range(1, 6):
            for l2 in range(max(2, l1), 7):
                for l3 in range(l2, 8):
                    g = theta(l1, l2, l3)
                    if g.vertex_count <= n_hi:
                        pool.append(("theta%d%d%d" % (l1, l2, l3), g))
        for c1 in (3, 4, 5):
            for c2 in (3, 4, 5):
                for bridge in range(1, n_hi - c1 - c2 + 2):
                    g = dumbbell(c1, c2, bridge)
                    if g.vertex_count <= n_hi:
                        pool.append(
                            ("dumbbell%d_%d_%d" % (c1, c2, bridge), g)
                        )
    filtered = []
    seen_adj = set()
    for name, g in pool:
        if g.vertex_count <= n_hi and compute_branches(g).branch_count <= b_max:
            if g.adjacency not in seen_adj:
                seen_adj.add(g.adjacency)
                filtered.append((name, g))
    tries = 0
    while len(filtered) < count and tries < count * 60:
        tries += 1
        n = rng.randrange(4, n_hi + 1)
        m = rng.randrange(n - 1, min(n + 3, n * (n - 1) // 2) + 1)
        g = generate("random_connected", n, m, seed=seed * 7919 + tries)
        if compute_branches(g).branch_count <= b_max and g.adjacency not in seen_adj:
            seen_adj.add(g.adjacency)
            filtered.append(("rand%d" % tries, g))
    out = []
    while len(out) < count:
        out.extend(filtered)
    return out[:count]


# ---------------------------------------------------------------------------
# Independent oracles


def floyd_warshall(g: Graph):
    n = g.vertex_count
    inf = float("inf")
    dist = [[inf] * n for _ in range(n)]
    for v in range(n):
        dist[v][v] = 0
    for u, v in g.edges():
        dist[u][v] = dist[v][u] = 1
    for k in range(n):
        dk = dist[k]
        for i in range(n):
            dik = dist[i][k]
            if dik == inf:
                continue
            di = dist[i]
            for j in range(n):
                alt = dik + dk[j]
                if alt < di[j]:
                    di[j] = alt
    return dist

def brute_indistinct_pairs(g, d, s, branch_a, branch_b):
    """The matched-distance pair set straight from BFS rows."""
    row = bfs_row(g, s)
    lo_a, hi_a = d.member_range(branch_a)
    lo_b, hi_b = d.member_range(branch_b)
    va = d.branches[branch_a].vertices
    vb = d.branches[branch_b].vertices
    out = set()
    for i in range(lo_a, hi_a + 1):
        for j in range(lo_b, hi_b + 1):
            if branch_a == branch_b and i == j:
                continue
            if row[va[i]] == row[vb[j]]:
                out.add((i, j))
    return out


def max_leaf_bruteforce(g: Graph) -> int:
    """Max spanning-tree leaves by enumerating all edge subsets of size n-1."""
    n = g.vertex_count
    edges = list(g.edges())
    best = -1
    for subset in combinations(range(len(edges)), n - 1):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        deg = [0] * n
        ok = True
        for idx in subset:
            u, v = edges[idx]
            ru, rv = find(u), find(v)
            if ru == rv:
                ok = False
                break
            parent[ru] = rv
            deg[u] += 1
            deg[v] += 1
        if ok:
            best = max(best, sum(1 for v in range(n) if deg[v] == 1))
    return best


def metric_dimension_unpruned(g: Graph):
    """Plain subset scan without twin pruning; independent reference."""
    from metricdim import distance_matrix

    matrix = distance_matrix(g)
    n = g.vertex_count
    for k in range(1, n):
        for subset in combinations(range(n), k):
            sigs = {tuple(matrix[s][v] for s in subset) for v in range(n)}
            if len(sigs) == n:
                return k, subset
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# Exhaustive connected graphs up to isomorphism

KNOWN_CONNECTED_COUNTS = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853, 8: 11117}


def _adj_sets(g: Graph):
    return [set(nbrs) for nbrs in g.adjacency]


def _invariant(g: Graph) -> tuple:
    n = g.vertex_count
    adj = _adj_sets(g)
    deg = sorted(len(a) for a in adj)
    tri = []
    for v in range(n):
        t = 0
        for u in adj[v]:
            t += len(adj[v] & adj[u])
        tri.append(t)
    dists = tuple(sorted(tuple(sorted(bfs_row(g, v))) for v in range(n)))
    return (n, g.edge_count, tuple(deg), tuple(sorted(tri)), dists)


def _isomorphic(g1: Graph, g2: Graph) -> bool:
    n = g1.vertex_count
    if n != g2.vertex_count or g1.edge_count != g2.edge_count:
        return False
    a1, a2 = _adj_sets(g1), _adj_sets(g2)
    deg1 = [len(a) for a in a1]
    deg2 = [len(a) for a in a2]
    if sorted(deg1) != sorted(deg2):
        return False
    order = sorted(range(n), key=lambda v: -deg1[v])
    mapping = [-1] * n
    used = [False] * n

    def extend(idx: int) -> bool:
        if idx == n:
            return True
        v = order[idx]
        for w in range(n):
            if used[w] or deg2[w] != deg1[v]:
                continue
            ok = True
            for prev in order[:idx]:
                if (prev in a1[v]) != (mapping[prev] in a2[w]):
                    ok = False
                    break
            if ok:
                mapping[v] = w
                used[w] = True
                if extend(idx + 1):
                    return True
                used[w] = False
                mapping[v] = -1
        return False

    return extend(0)


def connected_graphs_upto(max_n: int, dedupe_last: bool = True):
    """All connected graphs with 2..max_n vertices, one per isomorphism
    class, grown by attaching a new vertex to every nonempty subset of a
    smaller graph's vertices."""
    levels: dict[int, list[Graph]] = {2: [generate("path", 2)]}
    yield levels[2][0]
    for n in range(3, max_n + 1):
        buckets: dict[tuple, list[Graph]] = {}
        result = []
        parents = levels[n - 1]
        for parent in parents:
            base_edges = list(parent.edges())
            for mask in range(1, 1 << (n - 1)):
                extra = [
                    (v, n - 1) for v in range(n - 1) if mask & (1 << v)
                ]
                cand = Graph.from_edges(n, base_edges + extra, validate=False)
                if not dedupe_last and n == max_n:
                    yield cand
                    continue
                key = _invariant(cand)
                bucket = buckets.setdefault(key, [])
                if any(_isomorphic(cand, seen) for seen in bucket):
                    continue
                bucket.append(cand)
                result.append(cand)
                yield cand
        levels[n] = result
