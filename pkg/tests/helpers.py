"""Shared test oracles: exact rational formulas, brute-force vertex
connectivity, naive key-graph construction, and a zoo of named graphs.

Everything here is deliberately independent of the implementation paths
it checks: rational arithmetic instead of floating point, exhaustive
subset removal instead of max-flow, pairwise ring comparison instead of
the inverted index.
"""

from fractions import Fraction
from itertools import combinations
from math import comb

from keygraph import Graph


def edge_prob_exact(ki: int, kj: int, pool: int) -> Fraction:
    """1 - C(pool-ki, kj)/C(pool, kj) in exact rational arithmetic."""
    if ki + kj > pool:
        return Fraction(1)
    return 1 - Fraction(comb(pool - ki, kj), comb(pool, kj))


def mean_edge_prob_exact(mu, K, pool: int, cls: int) -> Fraction:
    """Exact mean over the partner class; floats in mu convert exactly."""
    return sum(
        (Fraction(m) * edge_prob_exact(K[cls], kj, pool) for m, kj in zip(mu, K)),
        start=Fraction(0),
    )


def naive_key_edges(rings) -> set[tuple[int, int]]:
    """All pairs of nodes whose rings intersect, by direct comparison."""
    edges = set()
    sets = [set(r.tolist() if hasattr(r, "tolist") else r) for r in rings]
    for x, y in combinations(range(len(sets)), 2):
        if sets[x] & sets[y]:
            edges.add((x, y))
    return edges


def _is_disconnected(n: int, adj_sets, removed: set[int]) -> bool:
    survivors = [v for v in range(n) if v not in removed]
    if len(survivors) <= 1:
        return False
    seen = {survivors[0]}
    stack = [survivors[0]]
    while stack:
        v = stack.pop()
        for w in adj_sets[v]:
            if w not in removed and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) < len(survivors)


def kappa_brute(g: Graph) -> int:
    """Exhaustive vertex connectivity: smallest removal set that
    disconnects, n-1 for complete graphs."""
    n = g.n
    adj_sets = [set(neighbors) for neighbors in g.adj]
    if n >= 2 and all(len(s) == n - 1 for s in adj_sets):
        return n - 1
    if _is_disconnected(n, adj_sets, set()):
        return 0
    for size in range(1, n - 1):
        for subset in combinations(range(n), size):
            if _is_disconnected(n, adj_sets, set(subset)):
                return size
    return n - 1


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star(n: int) -> Graph:
    return Graph.from_edges(n, [(0, i) for i in range(1, n)])


def complete(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def wheel(n: int) -> Graph:
    """Hub 0 joined to a cycle on 1..n-1 (n nodes total, n >= 4)."""
    rim = [(i, i % (n - 1) + 1) for i in range(1, n)]
    spokes = [(0, i) for i in range(1, n)]
    return Graph.from_edges(n, rim + spokes)


def hypercube3() -> Graph:
    edges = [(a, b) for a, b in combinations(range(8), 2) if bin(a ^ b).count("1") == 1]
    return Graph.from_edges(8, edges)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def two_triangles_shared_vertex() -> Graph:
    return Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])


def random_graph(rng, n: int, p: float) -> Graph:
    edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, edges)
