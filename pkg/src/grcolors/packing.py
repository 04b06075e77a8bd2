"""Stage-1 constructions: conflict-aware randomized greedy tile packing.

Three families:

  * complete:   monochromatic K_{k-1} tiles in K_n, no 2-colored cycle of
                length k..ell anywhere in the colored subgraph;
  * bipartite:  monochromatic K_{a,k-1} tiles in K_{n,n} whose same-side
                pairs are drawn from a sampled pool, any two tiles sharing
                at most one vertex, no 2-colored C_2k;
  * hyper:      K_{k+1}^k tiles in K_n^k carrying k colors with exactly one
                repeated on two edges sharing k-1 vertices.

Candidates are drawn uniformly and accepted only if explicit structural
predicates pass, so the outputs satisfy the target properties exactly; the
greedy loop stops after a run of consecutive rejections or a hard cap.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .bounds import bip_nonedge_prob, bip_tile_width, hyper_clique_upper_coeff
from .coloring import UNCOLORED, Coloring
from .hosts import HostSpec, bipartite, complete, rank_edge, uniform, unrank_edge


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PackConfig:
    seed: int = 0
    ell: int | None = None  # complete family: largest forbidden cycle length
    delta: float = 0.15  # stage-2 palette exponent; hypergraph slot thinning
    stall_limit: int | None = None  # default 50n consecutive rejections
    max_candidates: int | None = None  # default 5000n
    # stage-1 palette multiplier (complete family): a fresh color can never
    # close a 2-colored cycle, so extra rounds of n/(k-2) colors let the
    # packer push past the point where every reused color conflicts
    palette_rounds: int = 1

    def __post_init__(self):
        if not 0 < self.delta < 0.5:
            raise ConfigError(f"delta must be in (0, 1/2), got {self.delta}")
        if self.stall_limit is not None and self.stall_limit < 1:
            raise ConfigError("stall_limit must be >= 1")
        if self.palette_rounds < 1:
            raise ConfigError("palette_rounds must be >= 1")


@dataclass(frozen=True)
class CliqueTile:
    verts: tuple[int, ...]
    color: int


@dataclass(frozen=True)
class BipTile:
    """Monochromatic complete bipartite tile; the wide side (size a) sits
    on either side of the host, the other side has k-1 vertices."""

    left: tuple[int, ...]
    right: tuple[int, ...]
    color: int

    @property
    def verts(self) -> tuple[int, ...]:
        return self.left + self.right


@dataclass(frozen=True)
class HyperTile:
    verts: tuple[int, ...]
    edge_colors: tuple[tuple[tuple[int, ...], int], ...]  # (edge, color), one per edge

    @property
    def repeated(self) -> tuple[tuple[int, ...], tuple[int, ...], int]:
        by_color: dict[int, list[tuple[int, ...]]] = {}
        for e, c in self.edge_colors:
            by_color.setdefault(c, []).append(e)
        for c, es in by_color.items():
            if len(es) == 2:
                return es[0], es[1], c
        raise AssertionError("tile lacks a repeated color")


@dataclass
class PackState:
    family: str
    host: HostSpec
    k: int  # family parameter, not the host edge arity
    cfg: PackConfig
    palette: int
    coloring: Coloring
    tiles: list = field(default_factory=list)
    # per vertex, per color: the other vertices of that vertex's tile
    vertex_tiles: dict[int, dict[int, tuple[int, ...]]] = field(default_factory=dict)
    candidates_tried: int = 0
    accepted: int = 0
    # bipartite only
    tile_width: int = 0
    nonedges: set[tuple[int, int]] = field(default_factory=set)
    consumed_pairs: set[tuple[int, int]] = field(default_factory=set)
    # hyper only
    slot_alive: np.ndarray | None = None
    slot_used: np.ndarray | None = None
    comp_sets: dict[int, list[frozenset[int]]] = field(default_factory=dict)
    comp_at: dict[tuple[int, int], list[int]] = field(default_factory=dict)
    pair_guard: dict[tuple[int, ...], set[int]] = field(default_factory=dict)

    @property
    def ell(self) -> int:
        if self.cfg.ell is not None:
            return self.cfg.ell
        return self.k if self.family == "cycles" else 2 * self.k

    def leftover_ranks(self) -> list[int]:
        return [int(r) for r in np.flatnonzero(self.coloring.colors == UNCOLORED)]

    def coverage(self) -> float:
        return self.coloring.colored_count / self.coloring.host.edge_count


def _limits(cfg: PackConfig, n: int) -> tuple[int, int]:
    stall = cfg.stall_limit if cfg.stall_limit is not None else 50 * n
    cap = cfg.max_candidates if cfg.max_candidates is not None else 5000 * n
    return stall, cap


def _tile_neighbors(state: PackState, v: int, color: int) -> tuple[int, ...]:
    return state.vertex_tiles.get(v, {}).get(color, ())


def _register_tile_members(state: PackState, verts, color, members_of) -> None:
    for v in verts:
        state.vertex_tiles.setdefault(v, {})[color] = members_of(v)


# ---------------------------------------------------------------------------
# complete graphs: monochromatic K_{k-1} tiles


def _pick_bit(mask: int, rng: random.Random) -> int:
    """Uniform set-bit index of a nonzero mask."""
    idx = rng.randrange(mask.bit_count())
    while idx:
        mask &= mask - 1
        idx -= 1
    return (mask & -mask).bit_length() - 1


def pack_complete(n: int, k: int, cfg: PackConfig) -> PackState:
    """Guided greedy: candidates grow from a uniform uncolored edge and
    take a color free at every tile vertex, so draws are spent on tiles
    that can actually be placed; the conflict predicate does the vetoing.
    """
    if k < 4:
        raise ConfigError("cycle family needs k >= 4")
    if n < 2 * (k - 1):
        raise ConfigError(f"need n >= {2 * (k - 1)}")
    ell = cfg.ell if cfg.ell is not None else k
    if ell < k:
        raise ConfigError("need ell >= k")
    palette = -(-n // (k - 2)) * cfg.palette_rounds
    host = complete(n)
    state = PackState("cycles", host, k, cfg, palette, Coloring.empty(host, palette))
    rng = random.Random(cfg.seed)
    stall_limit, cap = _limits(cfg, n)

    colors = state.coloring.colors
    uncov = [((1 << n) - 1) & ~(1 << v) for v in range(n)]
    free = [(1 << palette) - 1 for _ in range(n)]
    open_edges = [unrank_edge(host, r) for r in range(host.edge_count)]
    open_pos = {e: i for i, e in enumerate(open_edges)}

    def close_edge(u: int, v: int) -> None:
        e = (u, v)
        i = open_pos.pop(e)
        last = open_edges.pop()
        if last != e:
            open_edges[i] = last
            open_pos[last] = i
        uncov[u] &= ~(1 << v)
        uncov[v] &= ~(1 << u)

    def extensions(prefix: list[int], mask: int, cmask: int):
        """All (verts, common-free-color mask) completions of the prefix,
        in seeded random order of the added vertices."""
        if len(prefix) == k - 1:
            if cmask:
                yield tuple(sorted(prefix)), cmask
            return
        bits = []
        m = mask
        while m:
            bits.append((m & -m).bit_length() - 1)
            m &= m - 1
        rng.shuffle(bits)
        for w in bits:
            nc = cmask & free[w]
            if nc:
                yield from extensions(prefix + [w], mask & uncov[w], nc)

    stall = 0
    while stall < stall_limit and state.candidates_tried < cap and open_edges:
        state.candidates_tried += 1
        u, v = open_edges[rng.randrange(len(open_edges))]
        placed = None
        for verts, cmask in extensions([u, v], uncov[u] & uncov[v], free[u] & free[v]):
            # ascending color order keeps per-vertex palettes aligned,
            # otherwise late tiles rarely find a shared color
            cm = cmask
            adj = _clique_adj(verts)
            while cm:
                color = (cm & -cm).bit_length() - 1
                cm &= cm - 1
                if not _bicolored_cycle_through(state, adj, color, state.k, ell):
                    placed = (verts, color)
                    break
            if placed:
                break
        if placed is None:
            stall += 1
            continue
        verts, color = placed
        for a, b in combinations(verts, 2):
            colors[rank_edge(host, (a, b))] = color
            close_edge(a, b)
        for w in verts:
            free[w] &= ~(1 << color)
        _register_tile_members(
            state, verts, color, lambda w: tuple(x for x in verts if x != w)
        )
        state.tiles.append(CliqueTile(verts, color))
        state.accepted += 1
        stall = 0
    return state


def _bicolored_cycle_through(state: PackState, cand_adj, color, min_len, max_len) -> bool:
    """Would adding the candidate tile close a cycle of length in
    [min_len, max_len] using at most two colors?

    cand_adj maps each tile vertex to its tile neighbors (the edges the
    tile would color).  Any new short 2-colored cycle passes through a
    candidate edge, so search simple paths between candidate-edge
    endpoints in the union of the candidate edges, the color class of
    `color`, and one other class bound on first use.
    """

    def moves(w: int, second: int | None):
        out = []
        for x in _tile_neighbors(state, w, color):
            out.append((x, color))
        for x in cand_adj.get(w, ()):
            out.append((x, color))
        if second is None:
            for c2, members in state.vertex_tiles.get(w, {}).items():
                if c2 != color:
                    for x in members:
                        out.append((x, c2))
        elif second != color:
            for x in _tile_neighbors(state, w, second):
                out.append((x, second))
        return out

    def search(start: int, target: int) -> bool:
        # path of d edges closes a cycle of length d+1 with the anchor edge
        stack = [(start, 1, None, frozenset((start,)))]
        while stack:
            w, depth, second, visited = stack.pop()
            for x, ecol in moves(w, second):
                nsecond = second
                if ecol != color:
                    nsecond = ecol
                if x == target:
                    # depth 1 closures would reuse the anchor edge, but never
                    # pass the length floor since min_len >= 4
                    if min_len <= depth + 1 <= max_len:
                        return True
                    continue
                if depth + 1 > max_len - 1 or x in visited:
                    continue
                stack.append((x, depth + 1, nsecond, visited | {x}))
        return False

    for u in sorted(cand_adj):
        for v in cand_adj[u]:
            if u < v and search(v, u):
                return True
    return False


def _clique_adj(verts) -> dict[int, tuple[int, ...]]:
    return {v: tuple(x for x in verts if x != v) for v in verts}


# ---------------------------------------------------------------------------
# complete bipartite graphs: monochromatic K_{a,k-1} tiles over sampled pairs


def pack_bipartite(n: int, k: int, cfg: PackConfig) -> PackState:
    """Greedy K_{a,k-1} packing over a sampled same-side pair pool.

    Tiles take both orientations: pinning the wide side to one half would
    consume C(a,2) pooled pairs there per tile against an average budget
    of (C(a,2)+C(k-1,2))/2, capping coverage near one half.
    """
    if k < 3:
        raise ConfigError("bipartite family needs k >= 3")
    a = bip_tile_width(k)
    if n < max(a, k - 1):
        raise ConfigError(f"need n >= {max(a, k - 1)}")
    coeff = Fraction(1, 2 * (k - 1)) + Fraction(1, 2 * a)
    pal = coeff * n
    palette = -(-pal.numerator // pal.denominator) * cfg.palette_rounds
    host = bipartite(n)
    state = PackState("bipartite-cycles", host, k, cfg, palette, Coloring.empty(host, palette))
    state.tile_width = a
    rng = random.Random(cfg.seed)

    p = float(bip_nonedge_prob(k))
    for side_base in (0, n):
        for x, y in combinations(range(side_base, side_base + n), 2):
            if rng.random() < p:
                state.nonedges.add((x, y))

    stall_limit, cap = _limits(cfg, n)
    colors = state.coloring.colors

    # pooled same-side pairs still available, as bitmasks over vertex ids
    pair_mask = [0] * (2 * n)
    for x, y in state.nonedges:
        pair_mask[x] |= 1 << y
        pair_mask[y] |= 1 << x
    # uncovered cross partners per vertex
    left_all = (1 << n) - 1
    right_all = left_all << n
    uncov = [right_all if v < n else left_all for v in range(2 * n)]
    free = [(1 << palette) - 1] * (2 * n)
    open_edges = [unrank_edge(host, r) for r in range(host.edge_count)]
    open_pos = {e: i for i, e in enumerate(open_edges)}

    def close_edge(l: int, r: int) -> None:
        e = (l, r)
        i = open_pos.pop(e)
        last = open_edges.pop()
        if last != e:
            open_edges[i] = last
            open_pos[last] = i
        uncov[l] &= ~(1 << r)
        uncov[r] &= ~(1 << l)

    def shuffled_bits(mask: int) -> list[int]:
        bits = []
        while mask:
            bits.append((mask & -mask).bit_length() - 1)
            mask &= mask - 1
        rng.shuffle(bits)
        return bits

    def grow(lefts, rights, need_l, need_r, cmask):
        if len(rights) < need_r:
            m = right_all
            for r in rights:
                m &= pair_mask[r]
            for l in lefts:
                m &= uncov[l]
            for r in shuffled_bits(m):
                nc = cmask & free[r]
                if nc:
                    yield from grow(lefts, rights + [r], need_l, need_r, nc)
        elif len(lefts) < need_l:
            m = left_all
            for l in lefts:
                m &= pair_mask[l]
            for r in rights:
                m &= uncov[r]
            for l in shuffled_bits(m):
                nc = cmask & free[l]
                if nc:
                    yield from grow(lefts + [l], rights, need_l, need_r, nc)
        else:
            yield lefts, rights, cmask

    stall = 0
    # tiles consume their pooled pairs for good (that is what keeps any two
    # tiles on <= 1 shared vertex), but the pool itself is only a sampling
    # artifact: replenish it with fresh draws when the packer stalls
    pool_rounds_left = cfg.palette_rounds - 1
    while stall < stall_limit and state.candidates_tried < cap and open_edges:
        state.candidates_tried += 1
        l0, r0 = open_edges[rng.randrange(len(open_edges))]
        placed = None
        shapes = [(a, k - 1), (k - 1, a)]
        rng.shuffle(shapes)
        for need_l, need_r in shapes:
            for lefts, rights, cmask in grow([l0], [r0], need_l, need_r, free[l0] & free[r0]):
                adj = {l: tuple(rights) for l in lefts} | {r: tuple(lefts) for r in rights}
                cm = cmask
                while cm:
                    color = (cm & -cm).bit_length() - 1
                    cm &= cm - 1
                    if not _bicolored_cycle_through(state, adj, color, 2 * k, 2 * k):
                        placed = (tuple(sorted(lefts)), tuple(sorted(rights)), color)
                        break
                if placed:
                    break
            if placed:
                break
        if placed is None:
            stall += 1
            if stall >= stall_limit and pool_rounds_left > 0:
                pool_rounds_left -= 1
                stall = 0
                for side_base in (0, n):
                    for x, y in combinations(range(side_base, side_base + n), 2):
                        if (x, y) not in state.nonedges and rng.random() < p:
                            state.nonedges.add((x, y))
                            pair_mask[x] |= 1 << y
                            pair_mask[y] |= 1 << x
            continue
        left, right, color = placed
        for l in left:
            for r in right:
                colors[rank_edge(host, (l, r))] = color
                close_edge(l, r)
        for side in (left, right):
            for x, y in combinations(side, 2):
                state.consumed_pairs.add((x, y))
                pair_mask[x] &= ~(1 << y)
                pair_mask[y] &= ~(1 << x)
        for v in left + right:
            free[v] &= ~(1 << color)
        _register_tile_members(
            state, left + right, color, lambda v: right if v < n else left
        )
        state.tiles.append(BipTile(left, right, color))
        state.accepted += 1
        stall = 0
    return state


# ---------------------------------------------------------------------------
# complete k-uniform hypergraphs: k-colored K_{k+1}^k tiles


def _subset_rank(verts: tuple[int, ...]) -> int:
    return sum(math.comb(v, i + 1) for i, v in enumerate(verts))


def pack_hyper(n: int, k: int, cfg: PackConfig) -> PackState:
    if k < 3:
        raise ConfigError("hypergraph family needs k >= 3")
    if n < k + 2:
        raise ConfigError("need n >= k+2")
    rho = n ** (-cfg.delta)
    palette = math.ceil((1 + rho) * float(hyper_clique_upper_coeff(k)) * n)
    host = uniform(n, k)
    state = PackState("hyper-cliques", host, k, cfg, palette, Coloring.empty(host, palette))
    rng = random.Random(cfg.seed)

    # slot S_i alive with probability 1-p, p = rho/(1+rho); colors major,
    # (k-1)-sets in colex order
    p_dead = rho / (1 + rho)
    nslots = math.comb(n, k - 1)
    alive = np.empty((palette, nslots), dtype=bool)
    for c in range(palette):
        for s in range(nslots):
            alive[c, s] = rng.random() >= p_dead
    state.slot_alive = alive
    state.slot_used = np.zeros((palette, nslots), dtype=bool)

    stall_limit, cap = _limits(cfg, n)
    colors = state.coloring.colors
    edge_positions = list(combinations(range(k + 1), k))
    stall = 0
    while stall < stall_limit and state.candidates_tried < cap:
        state.candidates_tried += 1
        base = tuple(sorted(rng.sample(range(n), k + 1)))
        chosen = rng.sample(range(palette), k)
        pair_pos = rng.randrange(math.comb(k + 1, 2))
        tile = _assemble_hyper_tile(base, chosen, pair_pos, edge_positions)
        if _accept_hyper_tile(state, tile):
            _commit_hyper_tile(state, tile)
            state.accepted += 1
            stall = 0
        else:
            stall += 1
    return state


def _assemble_hyper_tile(base, chosen, pair_pos, edge_positions) -> HyperTile:
    edges = [tuple(base[i] for i in pos) for pos in edge_positions]
    pair = list(combinations(range(len(edges)), 2))[pair_pos]
    assignment = []
    nxt = 1
    for idx, e in enumerate(edges):
        if idx in pair:
            assignment.append((e, chosen[0]))
        else:
            assignment.append((e, chosen[nxt]))
            nxt += 1
    return HyperTile(base, tuple(assignment))


def _hyper_components(tile: HyperTile) -> list[tuple[int, frozenset[int]]]:
    e1, e2, c0 = tile.repeated
    comps = [(c0, frozenset(e1) | frozenset(e2))]
    for e, c in tile.edge_colors:
        if c != c0:
            comps.append((c, frozenset(e)))
    return comps


def _accept_hyper_tile(state: PackState, tile: HyperTile) -> bool:
    host, k = state.host, state.k
    colors = state.coloring.colors
    for e, _ in tile.edge_colors:
        if colors[rank_edge(host, e)] != UNCOLORED:
            return False

    for e, c in tile.edge_colors:
        for s in combinations(e, k - 1):
            sr = _subset_rank(s)
            if not state.slot_alive[c, sr] or state.slot_used[c, sr]:
                return False

    # repeated-pair separation: the pair's (k-1)-set intersection must not
    # sit inside any edge of the tile's other colors, in either direction
    e1, e2, c0 = tile.repeated
    shared = tuple(sorted(frozenset(e1) & frozenset(e2)))
    others = {c for _, c in tile.edge_colors if c != c0}
    for c in others:
        if state.slot_used[c, _subset_rank(shared)]:
            return False
    for e, c in tile.edge_colors:
        for s in combinations(e, k - 1):
            if c in state.pair_guard.get(s, ()):
                return False

    # same-color components must overlap existing ones in <= k-2 vertices
    for c, vs in _hyper_components(tile):
        counts: dict[int, int] = {}
        for v in vs:
            for ci in state.comp_at.get((v, c), ()):
                counts[ci] = counts.get(ci, 0) + 1
                if counts[ci] >= k - 1:
                    return False

    return not _creates_doomed_set(state, tile)


def _creates_doomed_set(state: PackState, tile: HyperTile) -> bool:
    """Would accepting leave some (k+2)-set with two or more repeated colors?

    Two repeats among already-colored edges of a (k+2)-set can never be
    undone by coloring the remaining edges, so such sets must be excluded
    whether or not they are fully colored yet.
    """
    host, k, n = state.host, state.k, state.host.n
    colors = state.coloring.colors
    cand = {e: c for e, c in tile.edge_colors}
    base = set(tile.verts)
    others = [x for x in range(n) if x not in base]

    candidates: set[tuple[int, ...]] = set()
    for x in others:
        candidates.add(tuple(sorted(tile.verts + (x,))))
    for e in cand:
        for x, y in combinations(others, 2):
            candidates.add(tuple(sorted(e + (x, y))))

    for w in candidates:
        colored = 0
        present: set[int] = set()
        for sub in combinations(w, k):
            c = int(colors[rank_edge(host, sub)])
            if c == UNCOLORED:
                c2 = cand.get(sub)
                if c2 is None:
                    continue
                c = c2
            colored += 1
            present.add(c)
        if colored - len(present) >= 2:
            return True
    return False


def _commit_hyper_tile(state: PackState, tile: HyperTile) -> None:
    host, k = state.host, state.k
    colors = state.coloring.colors
    for e, c in tile.edge_colors:
        colors[rank_edge(host, e)] = c
        for s in combinations(e, k - 1):
            state.slot_used[c, _subset_rank(s)] = True
    e1, e2, c0 = tile.repeated
    shared = tuple(sorted(frozenset(e1) & frozenset(e2)))
    others = {c for _, c in tile.edge_colors if c != c0}
    state.pair_guard.setdefault(shared, set()).update(others)
    for c, vs in _hyper_components(tile):
        idx = len(state.comp_sets.setdefault(c, []))
        state.comp_sets[c].append(vs)
        for v in vs:
            state.comp_at.setdefault((v, c), []).append(idx)
    state.tiles.append(tile)
