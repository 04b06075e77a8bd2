"""Canonical, deterministic streams of pattern copies.

Five pattern families are supported: cycles C_m, paths P_t, clique vertex
sets, bipartite cycles, and tight k-uniform cycles.  Every placement of a
pattern is emitted exactly once, as a canonical vertex sequence:

  * cycles / tight cycles: the rotation or reflection that puts the
    smallest vertex first and the smaller of its two neighbors second;
  * paths: the direction with the smaller endpoint first;
  * clique sets: the sorted vertex tuple.

Streams are lazy generators with a platform-independent order (subsets in
lexicographic order, arrangements in lexicographic order within a subset),
so dumps are byte-identical across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, permutations

from .hosts import HostSpec, Mode, rank_edge


class UnsupportedKind(ValueError):
    """Pattern family is not defined for the given host."""


@dataclass(frozen=True)
class CopyKind:
    family: str  # cycle | path | clique | tight
    param: int

    def __str__(self) -> str:
        return f"{self.family}({self.param})"


def cycle(m: int) -> CopyKind:
    return CopyKind("cycle", m)


def path(t: int) -> CopyKind:
    return CopyKind("path", t)


def clique_set(p: int) -> CopyKind:
    return CopyKind("clique", p)


def tight_cycle(ell: int) -> CopyKind:
    return CopyKind("tight", ell)


def validate_kind(host: HostSpec, kind: CopyKind) -> None:
    f, p = kind.family, kind.param
    if f == "cycle":
        if host.mode is Mode.UNIFORM:
            raise UnsupportedKind("graph cycles need a graph host")
        if p < 3:
            raise UnsupportedKind("cycles need length >= 3")
        if host.mode is Mode.BIPARTITE and (p % 2 or p < 4):
            raise UnsupportedKind("bipartite cycles must have even length >= 4")
    elif f == "path":
        if host.mode is Mode.UNIFORM:
            raise UnsupportedKind("graph paths need a graph host")
        if p < 2:
            raise UnsupportedKind("paths need at least 2 vertices")
    elif f == "clique":
        if host.mode is Mode.BIPARTITE:
            raise UnsupportedKind("clique sets are not defined on bipartite hosts")
        if p < host.k:
            raise UnsupportedKind(f"clique sets need at least k={host.k} vertices")
    elif f == "tight":
        if host.mode is not Mode.UNIFORM:
            raise UnsupportedKind("tight cycles need a uniform host")
        if p < host.k + 1:
            raise UnsupportedKind("tight cycles need at least k+1 vertices")
    else:
        raise UnsupportedKind(f"unknown family {f!r}")


def copy_edges(host: HostSpec, kind: CopyKind, seq: tuple[int, ...]) -> list[tuple[int, ...]]:
    """The exact edge set of a copy, as sorted vertex tuples."""
    f = kind.family
    if f == "cycle":
        return [tuple(sorted((seq[i], seq[(i + 1) % len(seq)]))) for i in range(len(seq))]
    if f == "path":
        return [tuple(sorted((seq[i], seq[i + 1]))) for i in range(len(seq) - 1)]
    if f == "clique":
        return [tuple(c) for c in combinations(sorted(seq), host.k)]
    # tight cycle: all windows of k cyclically consecutive vertices
    m = len(seq)
    return [tuple(sorted(seq[(i + j) % m] for j in range(host.k))) for i in range(m)]


def copy_edge_ranks(host: HostSpec, kind: CopyKind, seq: tuple[int, ...]) -> list[int]:
    return [rank_edge(host, e) for e in copy_edges(host, kind, seq)]


def canonical_copy(kind: CopyKind, seq) -> tuple[int, ...]:
    """Map any labeled placement to its canonical vertex sequence."""
    seq = tuple(seq)
    if kind.family == "clique":
        return tuple(sorted(seq))
    if kind.family == "path":
        return min(seq, seq[::-1])
    # cyclic: minimize over rotations of both directions
    best = None
    for d in (seq, seq[::-1]):
        i = d.index(min(d))
        rot = d[i:] + d[:i]
        if best is None or rot < best:
            best = rot
    return best


def _arrangement_patterns(kind: CopyKind, size: int) -> list[tuple[int, ...]]:
    """Canonical position patterns over a sorted vertex tuple of given size.

    Applying each pattern to any sorted tuple yields all canonical copies
    on that vertex set, in the stream's within-subset order.
    """
    if kind.family == "clique":
        return [tuple(range(size))]
    pats = []
    if kind.family == "path":
        for perm in permutations(range(size)):
            if perm[0] < perm[-1]:
                pats.append(perm)
    else:  # cycle / tight: position 0 pinned to the subset minimum
        for perm in permutations(range(1, size)):
            if perm[0] < perm[-1]:
                pats.append((0,) + perm)
    return pats


def stream_copies(host: HostSpec, kind: CopyKind):
    """Yield every copy exactly once, canonically, in a deterministic order."""
    validate_kind(host, kind)
    f, p = kind.family, kind.param
    if host.mode is Mode.BIPARTITE:
        yield from _stream_bipartite(host, kind)
        return
    if p > host.n:
        return
    pats = _arrangement_patterns(kind, p)
    for verts in combinations(range(host.n), p):
        for pat in pats:
            yield tuple(verts[i] for i in pat)


def _stream_bipartite(host: HostSpec, kind: CopyKind):
    n = host.n
    if kind.family == "cycle":
        s = kind.param // 2
        if s > n:
            return
        for lefts in combinations(range(n), s):
            for rights in combinations(range(n, 2 * n), s):
                # canonical: min left first, then alternate; reflection fixed
                # by first right < last right
                batch = []
                for rest in permutations(lefts[1:]):
                    order_l = (lefts[0],) + rest
                    for order_r in permutations(rights):
                        if order_r[0] < order_r[-1]:
                            seq = []
                            for i in range(s):
                                seq.append(order_l[i])
                                seq.append(order_r[i])
                            batch.append(tuple(seq))
                yield from sorted(batch)
    elif kind.family == "path":
        t = kind.param
        if t > 2 * n:
            return
        for verts in combinations(range(2 * n), t):
            for perm in permutations(verts):
                if perm[0] >= perm[-1]:
                    continue
                if all(host.is_left(perm[i]) != host.is_left(perm[i + 1]) for i in range(t - 1)):
                    yield perm
    else:
        raise UnsupportedKind(f"{kind.family} not defined on bipartite hosts")


def stream_order_key(seq: tuple[int, ...]):
    """Sort key reproducing the order of stream_copies."""
    return (tuple(sorted(seq)), seq)


def stream_copies_through(host: HostSpec, kind: CopyKind, edge_rank: int):
    """Exactly the copies whose edge set contains the given edge.

    Emitted in global stream order; intended for localized re-checking,
    so the construction only touches vertices near the edge.
    """
    from .hosts import unrank_edge

    validate_kind(host, kind)
    anchor = unrank_edge(host, edge_rank)
    found: set[tuple[int, ...]] = set()
    f, p = kind.family, kind.param
    verts_all = range(host.vertex_count if host.mode is Mode.BIPARTITE else host.n)
    others = [v for v in verts_all if v not in anchor]

    if f == "clique":
        if len(anchor) <= p:
            for rest in combinations(others, p - len(anchor)):
                found.add(tuple(sorted(anchor + rest)))
    elif f == "cycle":
        u, v = anchor
        for mid in permutations(others, p - 2):
            seq = (u,) + mid + (v,)
            if host.mode is Mode.BIPARTITE and not all(
                host.is_left(seq[i]) != host.is_left(seq[(i + 1) % p]) for i in range(p)
            ):
                continue
            found.add(canonical_copy(kind, seq))
    elif f == "path":
        u, v = anchor
        for split in range(p - 1):
            # u at position split, v at split+1
            for left in permutations(others, split):
                rem = [w for w in others if w not in left]
                for right in permutations(rem, p - 2 - split):
                    for a, b in ((u, v), (v, u)):
                        seq = left + (a, b) + right
                        if host.mode is Mode.BIPARTITE and not all(
                            host.is_left(seq[i]) != host.is_left(seq[i + 1]) for i in range(p - 1)
                        ):
                            continue
                        found.add(canonical_copy(kind, seq))
    else:  # tight
        k = host.k
        for mid in permutations(others, p - k):
            # anchor vertices occupy k consecutive positions, in any order
            for anchor_order in permutations(anchor):
                seq = anchor_order + mid
                found.add(canonical_copy(kind, seq))

    for seq in sorted(found, key=stream_order_key):
        yield seq


def count_copies(host: HostSpec, kind: CopyKind) -> int:
    """Total copy count; closed form where available, else by streaming."""
    validate_kind(host, kind)
    f, p = kind.family, kind.param
    n = host.n
    if host.mode is Mode.BIPARTITE:
        if f == "cycle":
            s = p // 2
            return math.comb(n, s) ** 2 * math.factorial(s) * math.factorial(s - 1) // 2
        if f == "path":
            s = p // 2
            if p % 2 == 0:
                return math.comb(n, s) ** 2 * math.factorial(s) ** 2
            return (
                math.comb(n, s + 1)
                * math.comb(n, s)
                * math.factorial(s + 1)
                * math.factorial(s)
            )
        raise UnsupportedKind(f)
    if f == "cycle" or f == "tight":
        return math.comb(n, p) * math.factorial(p - 1) // 2
    if f == "path":
        return math.comb(n, p) * math.factorial(p) // 2
    return math.comb(n, p)
