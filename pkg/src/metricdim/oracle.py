"""Ground-truth metric dimension by exhaustive search, plus the locating-set
verifier used as the correctness reference everywhere else."""

from __future__ import annotations

import time
from itertools import combinations

from .decomposition import CYCLE, BranchDecomposition
from .graphs import Graph, bfs_row, distance_matrix, require_connected


class SearchBudgetError(RuntimeError):
    """Brute-force search exceeded its subset budget."""


def is_locating_set(g: Graph, landmarks) -> tuple[bool, tuple[int, int] | None]:
    """Check whether the landmark distances separate every vertex pair.

    Returns (True, None), or (False, (u, v)) for the first unresolved pair
    in vertex order.
    """
    require_connected(g, "locating-set check")
    n = g.vertex_count
    landmarks = sorted(set(landmarks))
    for s in landmarks:
        if not 0 <= s < n:
            raise ValueError("landmark %d out of range" % s)
    rows = [bfs_row(g, s) for s in landmarks]
    seen: dict[tuple, int] = {}
    for v in range(n):
        sig = tuple(row[v] for row in rows)
        if sig in seen:
            return False, (seen[sig], v)
        seen[sig] = v
    return True, None


def _twin_classes(g: Graph) -> list[list[int]]:
    """Group vertices with identical open or closed neighborhoods.

    Such twins are equidistant from every other vertex, so any locating set
    must contain all but one of each class.
    """
    n = g.vertex_count
    groups: dict[tuple, list[int]] = {}
    for v in range(n):
        open_nb = frozenset(g.adjacency[v])
        groups.setdefault(("o", open_nb), []).append(v)
        groups.setdefault(("c", open_nb | {v}), []).append(v)
    classes = []
    used = set()
    for members in groups.values():
        if len(members) >= 2:
            key = frozenset(members)
            if key not in used:
                used.add(key)
                classes.append(sorted(members))
    return classes


def metric_dimension_bruteforce(
    g: Graph,
    max_subsets: int = 20_000_000,
    use_twin_pruning: bool = True,
    deadline: float | None = None,
) -> tuple[int, tuple[int, ...]]:
    """Minimum locating set by exhaustive search in increasing size.

    Returns (dimension, lexicographically smallest witness). Raises
    SearchBudgetError when the subset budget runs out or the monotonic
    deadline passes.
    """
    require_connected(g, "metric dimension")
    n = g.vertex_count
    if n < 2:
        raise ValueError("metric dimension needs at least 2 vertices")
    if deadline is not None and time.monotonic() > deadline:
        raise SearchBudgetError("time budget exhausted before the search began")
    matrix = distance_matrix(g)
    twins = _twin_classes(g) if use_twin_pruning else []
    twin_sets = [set(c) for c in twins]

    checked = 0
    for k in range(1, n):
        for subset in combinations(range(n), k):
            if twin_sets:
                chosen = set(subset)
                if any(len(c - chosen) >= 2 for c in twin_sets):
                    continue
            checked += 1
            if checked > max_subsets:
                raise SearchBudgetError(
                    "exceeded %d candidate sets (n=%d, size %d)"
                    % (max_subsets, n, k)
                )
            if deadline is not None and checked % 1024 == 0:
                if time.monotonic() > deadline:
                    raise SearchBudgetError("time budget exhausted (n=%d)" % n)
            seen = set()
            ok = True
            for v in range(n):
                sig = tuple(matrix[s][v] for s in subset)
                if sig in seen:
                    ok = False
                    break
                seen.add(sig)
            if ok:
                return k, subset
    raise RuntimeError("no locating set found; graph invariants violated")


def canonical_locating_set(d: BranchDecomposition) -> tuple[int, ...]:
    """A locating set of size at most 3b built from the branch structure:
    branch endpoints plus a fixed interior vertex per branch.

    Interior picks are by branch position rather than by vertex id: for a
    path branch the smallest-id interior vertex works, but for cycles a
    badly placed pick (the mirror axis) fails, so cycle picks use the
    positions next to the attachment and near the antipode.
    """
    chosen: set[int] = set()
    for br in d.branches:
        verts = br.vertices
        if br.kind == CYCLE:
            size = len(verts)
            if br.endpoints is None:
                # junction-free cycle: canonical start plus the two farthest
                # positions from it
                m = (size - 1) // 2
                chosen.add(verts[0])
                chosen.add(verts[m])
                chosen.add(verts[min(m + 1, size - 1)])
            else:
                # attached cycle: attachment, its in-cycle successor, and an
                # antipodal-ish vertex to break the mirror symmetry
                chosen.add(verts[0])
                chosen.add(verts[1])
                chosen.add(verts[size // 2])
        else:
            chosen.add(verts[0])
            chosen.add(verts[-1])
            interior = verts[1:-1]
            if interior:
                chosen.add(min(interior))
    return tuple(sorted(chosen))


def oracle_result_json(dimension: int, witness) -> dict:
    return {"dimension": dimension, "witness": sorted(witness), "engine": "brute"}
