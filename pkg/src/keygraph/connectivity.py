"""Graph connectivity algorithms.

Connected components, minimum degree, k-connectivity certification, and
exact vertex connectivity with extraction of a minimum vertex cut.  The
exact computation splits every node v into v_in -> v_out with unit
capacity (original edges become infinite arcs both ways) and takes the
minimum s-t flow over the standard pair schedule: a minimum-degree node
s against all of its non-neighbors, then all non-adjacent pairs of
neighbors of s.  The inner s-t max-flow is delegated to scipy's
compiled solver; cut nodes are read off the saturated node-split arcs
on the residual reachability frontier.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, maximum_flow

from .graphgen import Graph

__all__ = [
    "CutResult",
    "connected_components",
    "min_degree",
    "is_k_connected",
    "vertex_connectivity",
    "delete_nodes",
]


@dataclass(frozen=True)
class CutResult:
    """Vertex connectivity kappa plus one witnessing minimum cut.

    cut_nodes is empty for complete graphs (kappa = n-1 by convention)
    and for disconnected input (kappa = 0).
    """

    kappa: int
    cut_nodes: frozenset[int]


def connected_components(g: Graph) -> np.ndarray:
    """Component label per node; labels are 0-based in order of first
    appearance, so two nodes share a label iff a path joins them."""
    n = g.n
    labels = np.full(n, -1, np.int64)
    adj = g.adj
    current = 0
    for start in range(n):
        if labels[start] != -1:
            continue
        labels[start] = current
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if labels[w] == -1:
                    labels[w] = current
                    queue.append(w)
        current += 1
    return labels


def min_degree(g: Graph) -> int:
    if g.n == 0:
        raise ValueError("min_degree is undefined for the empty graph")
    return int(g.degrees().min())


def _is_complete(degs: np.ndarray, n: int) -> bool:
    return n >= 2 and int(degs.min()) == n - 1


def _has_cut_vertex(g: Graph) -> bool:
    """Articulation-point test (iterative lowlink DFS); g must be connected."""
    n, adj = g.n, g.adj
    disc = [0] * n  # 0 = unvisited, else discovery time
    low = [0] * n
    cursor = [0] * n
    parent = [-1] * n
    timer = 1
    disc[0] = low[0] = timer
    root_children = 0
    stack = [0]
    while stack:
        v = stack[-1]
        if cursor[v] < len(adj[v]):
            w = adj[v][cursor[v]]
            cursor[v] += 1
            if disc[w] == 0:
                parent[w] = v
                timer += 1
                disc[w] = low[w] = timer
                if v == 0:
                    root_children += 1
                stack.append(w)
            elif w != parent[v] and disc[w] < low[v]:
                low[v] = disc[w]
        else:
            stack.pop()
            p = parent[v]
            if p != -1:
                if low[v] < low[p]:
                    low[p] = low[v]
                if p != 0 and low[v] >= disc[p]:
                    return True
    return root_children >= 2


def _split_capacity_matrix(g: Graph) -> csr_matrix:
    """Node-split digraph: v_in = 2v, v_out = 2v+1; unit node arcs,
    edge arcs with capacity n (effectively unbounded for vertex flows)."""
    n = g.n
    us, vs = g.edge_arrays()
    node_ids = np.arange(n, dtype=np.int64)
    rows = np.concatenate([2 * node_ids, 2 * us + 1, 2 * vs + 1])
    cols = np.concatenate([2 * node_ids + 1, 2 * vs, 2 * us])
    data = np.concatenate(
        [
            np.ones(n, np.int32),
            np.full(us.size, n, np.int32),
            np.full(us.size, n, np.int32),
        ]
    )
    return csr_matrix((data, (rows, cols)), shape=(2 * n, 2 * n), dtype=np.int32)


def _flow_value(mat: csr_matrix, a: int, b: int) -> int:
    return int(maximum_flow(mat, 2 * a + 1, 2 * b).flow_value)


def _min_cut_nodes(mat: csr_matrix, n: int, a: int, b: int) -> list[int]:
    """Minimum vertex cut separating non-adjacent a from b: the nodes whose
    split arc crosses the residual reachability frontier of a max flow."""
    result = maximum_flow(mat, 2 * a + 1, 2 * b)
    residual = mat - result.flow
    order = breadth_first_order(
        (residual > 0).astype(np.int8), 2 * a + 1, directed=True, return_predecessors=False
    )
    reachable = np.zeros(2 * n, bool)
    reachable[order] = True
    return [v for v in range(n) if reachable[2 * v] and not reachable[2 * v + 1]]


def _pair_schedule(g: Graph, s: int):
    """Deterministic pair order whose flow minimum equals kappa:
    (s, every non-neighbor), then non-adjacent pairs of neighbors of s."""
    nbrs = g.adj[s]
    in_closed = np.zeros(g.n, bool)
    in_closed[s] = True
    in_closed[nbrs] = True
    for t in range(g.n):
        if not in_closed[t]:
            yield s, t
    nbr_sets = {x: set(g.adj[x]) for x in nbrs}
    for i, x in enumerate(nbrs):
        for y in nbrs[i + 1 :]:
            if y not in nbr_sets[x]:
                yield x, y


def is_k_connected(g: Graph, k: int) -> bool:
    """True iff the graph stays connected after removal of any k-1 nodes,
    i.e. vertex connectivity >= k.

    Conventions: a complete graph on n nodes is (n-1)-connected and not
    n-connected; a single node is 0-connected only.
    """
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    if g.n == 0:
        raise ValueError("is_k_connected is undefined for the empty graph")
    if g.n == 1:
        return False
    degs = g.degrees()
    if int(degs.min()) < k:
        return False
    labels = connected_components(g)
    if int(labels.max()) > 0:
        return False
    if _is_complete(degs, g.n):
        return k <= g.n - 1
    if k == 1:
        return True
    if k == 2:
        return not _has_cut_vertex(g)
    mat = _split_capacity_matrix(g)
    s = int(degs.argmin())
    for a, b in _pair_schedule(g, s):
        if _flow_value(mat, a, b) < k:
            return False
    return True


def vertex_connectivity(g: Graph) -> CutResult:
    """Exact vertex connectivity and one minimum vertex cut.

    Returns kappa = 0 with an empty cut for disconnected input and
    kappa = n-1 with an empty cut for complete graphs.  Among multiple
    minimum cuts, the first one discovered under the deterministic pair
    schedule is returned.
    """
    if g.n < 2:
        raise ValueError(f"vertex_connectivity needs at least 2 nodes, got n={g.n}")
    labels = connected_components(g)
    if int(labels.max()) > 0:
        return CutResult(kappa=0, cut_nodes=frozenset())
    degs = g.degrees()
    if _is_complete(degs, g.n):
        return CutResult(kappa=g.n - 1, cut_nodes=frozenset())
    s = int(degs.argmin())
    delta = int(degs[s])
    mat = _split_capacity_matrix(g)
    # The neighborhood of s is itself a cut of size delta, the a-priori best.
    best_value = delta
    best_pair = None
    for a, b in _pair_schedule(g, s):
        value = _flow_value(mat, a, b)
        if value < best_value:
            best_value = value
            best_pair = (a, b)
    if best_pair is None:
        cut = frozenset(g.adj[s])
    else:
        cut = frozenset(_min_cut_nodes(mat, g.n, *best_pair))
    assert len(cut) == best_value
    assert best_value <= delta  # Whitney
    assert int(connected_components(delete_nodes(g, cut)).max()) > 0
    return CutResult(kappa=best_value, cut_nodes=cut)


def delete_nodes(g: Graph, victims) -> Graph:
    """Induced subgraph on the complement of `victims`, indices compacted
    in increasing order of the surviving original labels."""
    victims = set(int(v) for v in victims)
    for v in victims:
        if not 0 <= v < g.n:
            raise ValueError(f"victim {v} out of range for n={g.n}")
    keep = np.ones(g.n, bool)
    keep[list(victims)] = False
    n_new = int(keep.sum())
    if g.m == 0 or n_new == 0:
        return Graph.empty(n_new)
    new_id = np.cumsum(keep) - 1
    us, vs = g.edge_arrays()
    mask = keep[us] & keep[vs]
    codes = new_id[us[mask]] * n_new + new_id[vs[mask]]
    return Graph(n_new, codes.astype(np.int64))
