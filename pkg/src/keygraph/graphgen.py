"""Seeded, reproducible sampling of the random graph model.

Three samplers compose into the network model: class labels and key
rings (key-overlap graph), an independent-channel graph, and their
intersection.  Every sampler derives its randomness from an RngSeed via
tagged sub-streams, so a (master_seed, stream_id) pair pins down every
draw of a trial regardless of scheduling or thread count.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .model import NetworkParams

__all__ = [
    "RngSeed",
    "KeyAssignment",
    "Graph",
    "sample_key_assignment",
    "build_key_graph",
    "sample_er_graph",
    "intersect_graphs",
    "sample_intersection_model",
    "write_edgelist",
    "read_edgelist",
]

_U64 = 2**64

# Fixed sub-stream tags so a sampler consumes the same stream whether it
# is called standalone or inside sample_intersection_model.
_CLASS_STREAM = 0
_RING_STREAM = 1
_CHANNEL_STREAM = 2

# Ring sampling strategy switch: rejection sampling wins while the ring
# is a small fraction of the pool, a partial shuffle wins otherwise.
_REJECTION_MAX_FRACTION = 1.0 / 64.0


@dataclass(frozen=True)
class RngSeed:
    """Reproducibility handle: (master_seed, stream_id) determines every
    sample drawn in one trial."""

    master_seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("master_seed", "stream_id"):
            value = getattr(self, name)
            if not 0 <= int(value) < _U64:
                raise ValueError(f"{name} must be a 64-bit unsigned integer, got {value}")

    def generator(self, *tags: int) -> np.random.Generator:
        """Independent generator for the sub-stream named by `tags`."""
        seq = np.random.SeedSequence(
            entropy=self.master_seed, spawn_key=(self.stream_id, *tags)
        )
        return np.random.Generator(np.random.PCG64(seq))


@dataclass(frozen=True, eq=False)
class KeyAssignment:
    """Sampled per-node class labels and key rings.

    classes[x] is the class of node x; rings[x] is a sorted array of
    distinct key identifiers (0-based) of size K[classes[x]].
    """

    classes: np.ndarray
    rings: list[np.ndarray] = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.rings)


class Graph:
    """Undirected simple graph on nodes 0..n-1.

    Edges are held canonically as a sorted array of codes u*n + v with
    u < v; sorted adjacency lists are materialized lazily on first use.
    """

    __slots__ = ("n", "_codes", "_adj")

    def __init__(self, n: int, codes: np.ndarray):
        self.n = int(n)
        self._codes = np.asarray(codes, dtype=np.int64)
        self._adj = None

    @classmethod
    def from_edges(cls, n, edges) -> "Graph":
        codes = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u > v:
                u, v = v, u
            codes.add(u * n + v)
        return cls(n, np.fromiter(sorted(codes), np.int64, len(codes)))

    @classmethod
    def empty(cls, n) -> "Graph":
        return cls(n, np.empty(0, np.int64))

    @property
    def m(self) -> int:
        return int(self._codes.size)

    def edge_codes(self) -> np.ndarray:
        return self._codes

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return self._codes // self.n, self._codes % self.n

    def edges(self):
        us, vs = self.edge_arrays()
        return list(zip(us.tolist(), vs.tolist()))

    @property
    def adj(self) -> list[list[int]]:
        if self._adj is None:
            adj = [[] for _ in range(self.n)]
            us, vs = self.edge_arrays()
            for u, v in zip(us.tolist(), vs.tolist()):
                adj[u].append(v)
                adj[v].append(u)
            for lst in adj:
                lst.sort()
            self._adj = adj
        return self._adj

    def degrees(self) -> np.ndarray:
        if self.m == 0:
            return np.zeros(self.n, np.int64)
        us, vs = self.edge_arrays()
        return np.bincount(np.concatenate([us, vs]), minlength=self.n)

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        if u > v:
            u, v = v, u
        code = u * self.n + v
        i = np.searchsorted(self._codes, code)
        return i < self._codes.size and self._codes[i] == code

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._codes, other._codes)

    def __hash__(self):
        return hash((self.n, self._codes.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def _ring_by_rejection(rng: np.random.Generator, k: int, pool: int) -> np.ndarray:
    seen: set[int] = set()
    while len(seen) < k:
        seen.update(rng.integers(0, pool, size=k - len(seen)).tolist())
    return np.fromiter(sorted(seen), np.int64, k)


def _ring_by_partial_shuffle(rng: np.random.Generator, k: int, pool: int) -> np.ndarray:
    arr = np.arange(pool, dtype=np.int64)
    js = rng.integers(np.arange(k), pool)
    for i, j in enumerate(js.tolist()):
        arr[i], arr[j] = arr[j], arr[i]
    ring = arr[:k]
    ring.sort()
    return ring


def _sample_ring(rng: np.random.Generator, k: int, pool: int) -> np.ndarray:
    if k == 0:
        return np.empty(0, np.int64)
    if k <= pool * _REJECTION_MAX_FRACTION:
        return _ring_by_rejection(rng, k, pool)
    return _ring_by_partial_shuffle(rng, k, pool)


def sample_key_assignment(params: NetworkParams, seed: RngSeed) -> KeyAssignment:
    """Draw class labels i.i.d. from mu and a uniform key ring per node."""
    rng_classes = seed.generator(_CLASS_STREAM)
    classes = rng_classes.choice(params.r, size=params.n, p=params.mu)
    rng_rings = seed.generator(_RING_STREAM)
    rings = [_sample_ring(rng_rings, params.K[c], params.P) for c in classes.tolist()]
    return KeyAssignment(classes=classes, rings=rings)


def build_key_graph(assignment: KeyAssignment) -> Graph:
    """Connect every pair of nodes whose key rings intersect.

    Uses an inverted index key -> holders, so the cost scales with the
    number of co-held keys instead of n^2 ring comparisons; the result
    is identical to the naive pairwise check.
    """
    n = assignment.n
    holders: dict[int, list[int]] = {}
    for x, ring in enumerate(assignment.rings):
        for key in ring.tolist():
            holders.setdefault(key, []).append(x)
    pair_codes: set[int] = set()
    for nodes in holders.values():
        if len(nodes) < 2:
            continue
        for i, u in enumerate(nodes):
            base = u * n
            for v in nodes[i + 1 :]:
                pair_codes.add(base + v)
    return Graph(n, np.fromiter(sorted(pair_codes), np.int64, len(pair_codes)))


@functools.lru_cache(maxsize=4)
def _triu_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    iu, iv = np.triu_indices(n, k=1)
    return iu.astype(np.int64), iv.astype(np.int64)


def sample_er_graph(n: int, alpha: float, seed: RngSeed) -> Graph:
    """Independent-channel graph: each unordered pair is an edge with
    probability alpha.  Cost is Theta(n^2) draws; intended for desk-scale n."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    rng = seed.generator(_CHANNEL_STREAM)
    iu, iv = _triu_pairs(n)
    mask = rng.random(iu.size) < alpha
    return Graph(n, iu[mask] * n + iv[mask])


def intersect_graphs(a: Graph, b: Graph) -> Graph:
    """Graph holding exactly the edges present in both inputs."""
    if a.n != b.n:
        raise ValueError(f"node counts differ: {a.n} != {b.n}")
    codes = np.intersect1d(a.edge_codes(), b.edge_codes(), assume_unique=True)
    return Graph(a.n, codes)


def sample_intersection_model(params: NetworkParams, seed: RngSeed) -> Graph:
    """One sample of the full model: key-overlap graph AND channel graph.

    The two samplers consume disjoint tagged sub-streams of `seed`, so
    the composition is deterministic and the per-pair edge probability
    for classes (i, j) is alpha * p_ij.
    """
    assignment = sample_key_assignment(params, seed)
    key_graph = build_key_graph(assignment)
    channel_graph = sample_er_graph(params.n, params.alpha, seed)
    return intersect_graphs(key_graph, channel_graph)


def write_edgelist(g: Graph, path) -> None:
    """Dump a graph as text: header line "n m", then one "u v" per edge."""
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(f"{g.n} {g.m}\n")
            for u, v in g.edges():
                fh.write(f"{u} {v}\n")
    except OSError as exc:
        raise OSError(f"failed writing edge list to {path}: {exc}") from exc


def read_edgelist(path) -> Graph:
    """Parse the write_edgelist format back into a Graph."""
    try:
        with open(path) as fh:
            header = fh.readline().split()
            if len(header) != 2:
                raise ValueError(f"{path}: malformed header {header!r}")
            n, m = int(header[0]), int(header[1])
            edges = []
            for line in fh:
                if line.strip():
                    u, v = line.split()
                    edges.append((int(u), int(v)))
    except OSError as exc:
        raise OSError(f"failed reading edge list from {path}: {exc}") from exc
    if len(edges) != m:
        raise ValueError(f"{path}: header promises {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)
