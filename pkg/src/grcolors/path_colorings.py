"""Explicit quadratic-palette colorings built on clique packings of K_n.

Three constructions:

  * three fresh matching colors per K_4 block, singletons on leftover
    edges: every P_6 spans at least 4 colors;
  * the rainbow coloring: every P_7 spans at least 5 colors trivially;
  * seven fresh colors per K_6 block arranged so the coloring is proper
    and every P_8 spans at least 5 colors.

Perfect block decompositions are found by seeded randomized backtracking
when the divisibility conditions allow one; otherwise (or when the search
budget runs out) a maximal greedy packing is used and flagged.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .coloring import Coloring
from .hosts import complete, rank_edge


@dataclass
class CliquePacking:
    s: int
    blocks: list[tuple[int, ...]]
    leftover: list[int]  # edge ranks in no block
    perfect: bool
    fell_back: bool  # perfect decomposition was attempted but not found


def _decomposition_divisible(n: int, s: int) -> bool:
    if s == 4:
        return n % 12 in (1, 4)
    if s == 6:
        return n % 15 in (1, 6)
    return False


class _PairCover:
    """Uncovered-pair graph as per-vertex bitmasks."""

    def __init__(self, n: int):
        self.n = n
        full = (1 << n) - 1
        self.adj = [full & ~(1 << v) for v in range(n)]

    def cover(self, block) -> None:
        for u, v in combinations(block, 2):
            self.adj[u] &= ~(1 << v)
            self.adj[v] &= ~(1 << u)

    def uncover(self, block) -> None:
        for u, v in combinations(block, 2):
            self.adj[u] |= 1 << v
            self.adj[v] |= 1 << u

    def lowest_pair(self) -> tuple[int, int] | None:
        for v in range(self.n):
            rest = self.adj[v] >> (v + 1)
            if rest:
                return (v, v + 1 + (rest & -rest).bit_length() - 1)
        return None

    def blocks_through(self, pair: tuple[int, int], s: int) -> list[tuple[int, ...]]:
        u, v = pair
        out: list[tuple[int, ...]] = []
        chosen: list[int] = []

        def grow(mask: int, lo: int) -> None:
            if len(chosen) == s - 2:
                out.append(tuple(sorted((u, v, *chosen))))
                return
            m = mask >> lo << lo
            while m:
                w = (m & -m).bit_length() - 1
                m &= m - 1
                chosen.append(w)
                grow(mask & self.adj[w], w + 1)
                chosen.pop()

        grow(self.adj[u] & self.adj[v], 0)
        return out


def pack_cliques(
    n: int, s: int, seed: int = 0, exact_when_possible: bool = True
) -> CliquePacking:
    """Edge-disjoint K_s blocks in K_n, s in {4, 6}.

    Deterministic for a given seed.  The backtracking budget is generous
    for desk-scale n but finite; exhaustion falls back to greedy.
    """
    if s not in (4, 6):
        raise ValueError("block size must be 4 or 6")
    if n < s:
        raise ValueError(f"need n >= {s}")
    host = complete(n)
    rng = random.Random(seed)

    attempt_perfect = exact_when_possible and _decomposition_divisible(n, s)
    blocks = None
    if attempt_perfect:
        blocks = _backtrack_decomposition(n, s, rng, budget=25_000, restarts=5)
        if blocks is not None:
            return CliquePacking(s, blocks, [], True, False)

    blocks = max(
        (_greedy_packing(n, s, rng) for _ in range(30)),
        key=len,
    )
    covered = set()
    for b in blocks:
        for u, v in combinations(b, 2):
            covered.add(rank_edge(host, (u, v)))
    leftover = [r for r in range(host.edge_count) if r not in covered]
    return CliquePacking(s, blocks, leftover, not leftover, attempt_perfect)


def _backtrack_decomposition(n, s, rng, budget, restarts):
    for _ in range(restarts):
        cover = _PairCover(n)
        nodes = [0]
        result = _descend(cover, s, [], rng, nodes, budget)
        if result is not None:
            return result
    return None


def _descend(cover, s, blocks, rng, nodes, budget):
    nodes[0] += 1
    if nodes[0] > budget:
        return None
    pair = cover.lowest_pair()
    if pair is None:
        return list(blocks)
    cands = cover.blocks_through(pair, s)
    rng.shuffle(cands)
    for block in cands:
        cover.cover(block)
        blocks.append(block)
        got = _descend(cover, s, blocks, rng, nodes, budget)
        if got is not None:
            return got
        blocks.pop()
        cover.uncover(block)
        if nodes[0] > budget:
            return None
    return None


def _greedy_packing(n, s, rng):
    # anchoring on the lowest uncovered pair traps the packing in poor
    # maximal configurations; sweep pairs in a random order instead
    cover = _PairCover(n)
    blocks: list[tuple[int, ...]] = []
    pairs = list(combinations(range(n), 2))
    while True:
        progressed = False
        rng.shuffle(pairs)
        for pair in pairs:
            if not cover.adj[pair[0]] >> pair[1] & 1:
                continue
            fits = cover.blocks_through(pair, s)
            if fits:
                block = fits[rng.randrange(len(fits))]
                cover.cover(block)
                blocks.append(block)
                progressed = True
                break
        if not progressed:
            return blocks


def color_p6(n: int, seed: int = 0) -> Coloring:
    """Three perfect-matching colors per K_4 block, singleton leftovers.

    Palette is 3*blocks + leftover; every color class is a matching, so
    no path can repeat a color on adjacent edges.
    """
    packing = pack_cliques(n, 4, seed)
    host = complete(n)
    palette = 3 * len(packing.blocks) + len(packing.leftover)
    coloring = Coloring.empty(host, palette)
    nxt = 0
    for w, x, y, z in packing.blocks:
        for m1, m2 in (((w, x), (y, z)), ((w, y), (x, z)), ((w, z), (x, y))):
            coloring.colors[rank_edge(host, m1)] = nxt
            coloring.colors[rank_edge(host, m2)] = nxt
            nxt += 1
    for r in packing.leftover:
        coloring.colors[r] = nxt
        nxt += 1
    return coloring


def color_p7(n: int) -> Coloring:
    """Rainbow: palette C(n,2)."""
    host = complete(n)
    coloring = Coloring.empty(host, host.edge_count)
    for r in range(host.edge_count):
        coloring.colors[r] = r
    return coloring


def color_p8_proper(n: int, seed: int = 0) -> Coloring:
    """Seven colors per K_6 block, singleton leftovers; proper.

    Block vertices sorted and labeled a1,b1,a2,b2,a3,b3 in order: one color
    on the matching {a_i b_i}, and two fresh colors on the two perfect
    matchings between {a_i, b_i} and {a_j, b_j} for each i < j.
    """
    packing = pack_cliques(n, 6, seed)
    host = complete(n)
    palette = 7 * len(packing.blocks) + len(packing.leftover)
    coloring = Coloring.empty(host, palette)
    nxt = 0
    for block in packing.blocks:
        a = [block[0], block[2], block[4]]
        b = [block[1], block[3], block[5]]
        spine = nxt
        nxt += 1
        for i in range(3):
            coloring.colors[rank_edge(host, tuple(sorted((a[i], b[i]))))] = spine
        for i, j in combinations(range(3), 2):
            for m1, m2 in (
                ((a[i], a[j]), (b[i], b[j])),
                ((a[i], b[j]), (b[i], a[j])),
            ):
                coloring.colors[rank_edge(host, tuple(sorted(m1)))] = nxt
                coloring.colors[rank_edge(host, tuple(sorted(m2)))] = nxt
                nxt += 1
    for r in packing.leftover:
        coloring.colors[r] = nxt
        nxt += 1
    return coloring
