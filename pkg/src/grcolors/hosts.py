"""Host graphs and edge ranking.

Hosts are always complete: the complete graph K_n, the complete bipartite
graph K_{n,n}, or the complete k-uniform hypergraph K_n^k.  Edges are
identified by their colexicographic rank within the host's edge set, so
ranks are stable when a small host is embedded in a larger one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np


class Mode(Enum):
    COMPLETE = "complete"
    BIPARTITE = "bipartite"
    UNIFORM = "uniform"


class InvalidEdge(ValueError):
    """Vertex set is not an edge of the host, or a rank is out of range."""


@dataclass(frozen=True)
class HostSpec:
    """One of K_n, K_{n,n}, K_n^k.

    For bipartite hosts `n` counts vertices per side; the left side is
    {0..n-1} and the right side is {n..2n-1}.  For the other modes `n`
    is the total vertex count.  `k` is the edge arity: 2 except for
    uniform hosts, where 3 <= k <= n.
    """

    mode: Mode
    n: int
    k: int = 2

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one vertex, got n={self.n}")
        if self.mode in (Mode.COMPLETE, Mode.BIPARTITE):
            if self.k != 2:
                raise ValueError(f"{self.mode.value} hosts have k=2, got {self.k}")
        else:
            if not 3 <= self.k <= self.n:
                raise ValueError(f"uniform host needs 3 <= k <= n, got k={self.k}, n={self.n}")

    @property
    def vertex_count(self) -> int:
        return 2 * self.n if self.mode is Mode.BIPARTITE else self.n

    @property
    def edge_count(self) -> int:
        if self.mode is Mode.COMPLETE:
            return math.comb(self.n, 2)
        if self.mode is Mode.BIPARTITE:
            return self.n * self.n
        return math.comb(self.n, self.k)

    def is_left(self, v: int) -> bool:
        if self.mode is not Mode.BIPARTITE:
            raise ValueError("sides only exist for bipartite hosts")
        return v < self.n

    def __str__(self) -> str:
        if self.mode is Mode.COMPLETE:
            return f"K_{self.n}"
        if self.mode is Mode.BIPARTITE:
            return f"K_{{{self.n},{self.n}}}"
        return f"K_{self.n}^{self.k}"


def complete(n: int) -> HostSpec:
    return HostSpec(Mode.COMPLETE, n)


def bipartite(n: int) -> HostSpec:
    return HostSpec(Mode.BIPARTITE, n)


def uniform(n: int, k: int) -> HostSpec:
    return HostSpec(Mode.UNIFORM, n, k)


def _check_verts(host: HostSpec, verts) -> tuple[int, ...]:
    vs = tuple(sorted(verts))
    if len(vs) != host.k or len(set(vs)) != host.k:
        raise InvalidEdge(f"edge of {host} needs {host.k} distinct vertices, got {verts}")
    if vs[0] < 0 or vs[-1] >= host.vertex_count:
        raise InvalidEdge(f"vertex out of range for {host}: {verts}")
    if host.mode is Mode.BIPARTITE and not (vs[0] < host.n <= vs[1]):
        raise InvalidEdge(f"bipartite edge needs one endpoint per side: {verts}")
    return vs


def rank_edge(host: HostSpec, verts) -> int:
    """Colexicographic rank of the sorted vertex set `verts` in E(host)."""
    vs = _check_verts(host, verts)
    if host.mode is Mode.BIPARTITE:
        return (vs[1] - host.n) * host.n + vs[0]
    return sum(math.comb(v, i + 1) for i, v in enumerate(vs))


def unrank_edge(host: HostSpec, rank: int) -> tuple[int, ...]:
    """Inverse of rank_edge."""
    if not 0 <= rank < host.edge_count:
        raise InvalidEdge(f"rank {rank} out of range for {host}")
    if host.mode is Mode.BIPARTITE:
        right, left = divmod(rank, host.n)
        return (left, host.n + right)
    out = [0] * host.k
    r = rank
    for i in range(host.k, 0, -1):
        # largest c with comb(c, i) <= r
        c = i - 1
        while math.comb(c + 1, i) <= r:
            c += 1
        out[i - 1] = c
        r -= math.comb(c, i)
    return tuple(out)


@lru_cache(maxsize=64)
def edge_vertex_table(host: HostSpec) -> np.ndarray:
    """Dense (edge_count x k) table of edge vertex sets, by rank."""
    table = np.empty((host.edge_count, host.k), dtype=np.int64)
    for r in range(host.edge_count):
        table[r] = unrank_edge(host, r)
    return table


def pair_rank_array(host: HostSpec, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Vectorized rank of 2-edges {u,v} (graph hosts only); u,v need not be sorted."""
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    if host.mode is Mode.COMPLETE:
        return hi * (hi - 1) // 2 + lo
    if host.mode is Mode.BIPARTITE:
        return (hi - host.n) * host.n + lo
    raise ValueError("pair ranks only apply to graph hosts")


def edges_at_vertex(host: HostSpec, v: int) -> list[int]:
    """Ranks of all edges containing vertex v."""
    out = []
    if host.mode is Mode.COMPLETE:
        for u in range(host.n):
            if u != v:
                out.append(rank_edge(host, (min(u, v), max(u, v))))
    elif host.mode is Mode.BIPARTITE:
        if host.is_left(v):
            out = [r * host.n + v for r in range(host.n)]
        else:
            out = [(v - host.n) * host.n + u for u in range(host.n)]
    else:
        import itertools

        others = [u for u in range(host.n) if u != v]
        for rest in itertools.combinations(others, host.k - 1):
            out.append(rank_edge(host, tuple(sorted(rest + (v,)))))
    return out
