"""Simple undirected graphs: construction, parsing, generators, BFS distances.

Vertices are the contiguous integers 0..n-1. Graphs are immutable after
construction and safe to share between threads.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass

# Distance sentinel for vertices in other components. Deliberately not a
# number so that accidental arithmetic raises instead of silently working.
UNREACHABLE = None


class GraphParseError(ValueError):
    """Malformed edge-list input. Carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


class DisconnectedGraphError(ValueError):
    """Raised by operations that require a connected graph."""

    def __init__(self, message: str, components: list[list[int]] | None = None):
        super().__init__(message)
        self.components = components or []


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph as a sorted adjacency structure."""

    adjacency: tuple[tuple[int, ...], ...]

    @property
    def vertex_count(self) -> int:
        return len(self.adjacency)

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def edges(self):
        """Yield edges as (u, v) pairs with u < v, lexicographically sorted."""
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield (u, v)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    @staticmethod
    def from_edges(n: int, edges, validate: bool = True) -> "Graph":
        """Build a graph on vertices 0..n-1 from an iterable of (u, v) pairs.

        Duplicate edges are collapsed; self-loops are rejected.
        """
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if validate:
                if not (0 <= u < n and 0 <= v < n):
                    raise ValueError("edge (%r, %r) out of range for n=%d" % (u, v, n))
                if u == v:
                    raise ValueError("self-loop at vertex %d" % u)
            adj[u].add(v)
            adj[v].add(u)
        return Graph(tuple(tuple(sorted(s)) for s in adj))


def bfs_row(g: Graph, source: int) -> list:
    """Hop distances from source as a plain list; UNREACHABLE where cut off."""
    n = g.vertex_count
    if not 0 <= source < n:
        raise ValueError("source %d out of range for n=%d" % (source, n))
    dist = [UNREACHABLE] * n
    dist[source] = 0
    queue = deque([source])
    adjacency = g.adjacency
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in adjacency[u]:
            if dist[v] is UNREACHABLE:
                dist[v] = du
                queue.append(v)
    return dist


@dataclass(frozen=True)
class DistanceRow:
    """BFS distances from one source vertex."""

    source: int
    dist: tuple

    def __getitem__(self, v: int):
        return self.dist[v]


def bfs_distances(g: Graph, source: int) -> DistanceRow:
    return DistanceRow(source, tuple(bfs_row(g, source)))


def distance_matrix(g: Graph) -> list[list]:
    """All-sources BFS. Intended for desk-scale graphs only."""
    return [bfs_row(g, s) for s in range(g.vertex_count)]


def connected_components(g: Graph) -> list[list[int]]:
    """Vertex sets of the connected components, each sorted, ordered by minimum."""
    n = g.vertex_count
    seen = bytearray(n)
    components = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = 1
        block = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in g.adjacency[u]:
                if not seen[v]:
                    seen[v] = 1
                    block.append(v)
                    queue.append(v)
        components.append(sorted(block))
    return components


def is_connected(g: Graph) -> bool:
    n = g.vertex_count
    if n == 0:
        return True
    seen = bytearray(n)
    seen[0] = 1
    count = 1
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in g.adjacency[u]:
            if not seen[v]:
                seen[v] = 1
                count += 1
                queue.append(v)
    return count == n


def require_connected(g: Graph, what: str = "operation") -> None:
    if not is_connected(g):
        comps = connected_components(g)
        raise DisconnectedGraphError(
            "%s requires a connected graph (%d components)" % (what, len(comps)),
            components=comps,
        )


# ---------------------------------------------------------------------------
# Edge-list text format


def parse_edge_list(text: str) -> Graph:
    """Parse "u v" lines into a Graph.

    Lines starting with '#' are comments, blank lines are ignored, and an
    optional "n <count>" header fixes the vertex count (otherwise it is
    1 + the largest id seen). Duplicate edges collapse; self-loops are errors.
    """
    declared_n = None
    edges: list[tuple[int, int]] = []
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "n":
            if declared_n is not None:
                raise GraphParseError("duplicate 'n' header", lineno)
            if len(parts) != 2:
                raise GraphParseError("expected 'n <count>'", lineno)
            try:
                declared_n = int(parts[1])
            except ValueError:
                raise GraphParseError("bad vertex count %r" % parts[1], lineno) from None
            if declared_n < 0:
                raise GraphParseError("negative vertex count", lineno)
            continue
        if len(parts) != 2:
            raise GraphParseError("expected 'u v', got %r" % line, lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError("malformed token in %r" % line, lineno) from None
        if u < 0 or v < 0:
            raise GraphParseError("negative vertex id in %r" % line, lineno)
        if u == v:
            raise GraphParseError("self-loop at vertex %d" % u, lineno)
        edges.append((u, v))
        if u > max_id:
            max_id = u
        if v > max_id:
            max_id = v
    n = declared_n if declared_n is not None else max_id + 1
    if max_id >= n:
        raise GraphParseError(
            "vertex id %d exceeds declared count %d" % (max_id, n)
        )
    return Graph.from_edges(n, edges, validate=False)


def format_edge_list(g: Graph) -> str:
    """Serialize to the edge-list format; parse(format(g)) == g."""
    lines = ["n %d" % g.vertex_count]
    lines.extend("%d %d" % e for e in g.edges())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# JSON format: {"n": int, "edges": [[u, v], ...]} with edges sorted


def graph_to_json_dict(g: Graph) -> dict:
    return {"n": g.vertex_count, "edges": [list(e) for e in g.edges()]}


def graph_from_json_dict(obj: dict) -> Graph:
    return Graph.from_edges(int(obj["n"]), [tuple(e) for e in obj["edges"]])


def graph_to_json(g: Graph) -> str:
    return json.dumps(graph_to_json_dict(g), sort_keys=True)


def graph_from_json(text: str) -> Graph:
    return graph_from_json_dict(json.loads(text))


# ---------------------------------------------------------------------------
# Generators. All deterministic for fixed parameters (and seed).

GENERATOR_FAMILIES = (
    "path",
    "cycle",
    "complete",
    "star",
    "spider",
    "subdivided_complete",
    "random_connected",
)


def path(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs n >= 1")
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)), validate=False)


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph.from_edges(
        n, [(i, (i + 1) % n) for i in range(n)], validate=False
    )


def complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete needs n >= 1")
    return Graph.from_edges(
        n, ((i, j) for i in range(n) for j in range(i + 1, n)), validate=False
    )


def star(k: int) -> Graph:
    """K_{1,k}: center 0 with k leaves."""
    if k < 1:
        raise ValueError("star needs k >= 1")
    return Graph.from_edges(k + 1, ((0, i) for i in range(1, k + 1)), validate=False)


def spider(legs: int, length: int) -> Graph:
    """Center 0 with `legs` paths of `length` edges each hanging off it."""
    if legs < 1 or length < 1:
        raise ValueError("spider needs legs >= 1 and length >= 1")
    edges = []
    for leg in range(legs):
        prev = 0
        for step in range(length):
            v = 1 + leg * length + step
            edges.append((prev, v))
            prev = v
    return Graph.from_edges(1 + legs * length, edges, validate=False)


def subdivided_complete(n: int, t: int) -> Graph:
    """K_n with every edge subdivided t times (t extra vertices per edge)."""
    if n < 2 or t < 0:
        raise ValueError("subdivided_complete needs n >= 2 and t >= 0")
    edges = []
    next_id = n
    for i in range(n):
        for j in range(i + 1, n):
            prev = i
            for _ in range(t):
                edges.append((prev, next_id))
                prev = next_id
                next_id += 1
            edges.append((prev, j))
    return Graph.from_edges(next_id, edges, validate=False)


def random_connected(n: int, m: int, seed: int, max_attempts: int = 200) -> Graph:
    """Random connected graph with n vertices and m edges, reproducible by seed."""
    if n < 1:
        raise ValueError("random_connected needs n >= 1")
    max_m = n * (n - 1) // 2
    if m < n - 1 or m > max_m:
        raise ValueError("m=%d impossible for connected graph on n=%d" % (m, n))
    rng = random.Random(seed)
    for _ in range(max_attempts):
        chosen: set[tuple[int, int]] = set()
        # seed with a random spanning tree so most attempts connect
        order = list(range(n))
        rng.shuffle(order)
        for i in range(1, n):
            u = order[i]
            v = order[rng.randrange(i)]
            chosen.add((min(u, v), max(u, v)))
        while len(chosen) < m:
            u = rng.randrange(n)
            v = rng.randrange(n)
            if u != v:
                chosen.add((min(u, v), max(u, v)))
        g = Graph.from_edges(n, chosen, validate=False)
        if is_connected(g):
            return g
    raise ValueError("could not build a connected graph in %d attempts" % max_attempts)


def generate(family: str, *params: int, seed: int | None = None) -> Graph:
    """Build a graph from a named family; see GENERATOR_FAMILIES."""
    if family == "path":
        (n,) = params
        return path(n)
    if family == "cycle":
        (n,) = params
        return cycle(n)
    if family == "complete":
        (n,) = params
        return complete(n)
    if family == "star":
        (k,) = params
        return star(k)
    if family == "spider":
        legs, length = params
        return spider(legs, length)
    if family == "subdivided_complete":
        n, t = params
        return subdivided_complete(n, t)
    if family == "random_connected":
        n, m = params
        if seed is None:
            raise ValueError("random_connected requires a seed")
        return random_connected(n, m, seed)
    raise ValueError("unknown family %r" % family)
