"""Stage 2: color the leftover edges by Moser-Tardos resampling.

Leftover edges get uniform colors from a small fresh palette disjoint from
stage 1.  While any bad event fires, the first one in a fixed scan order
has its leftover edges re-randomized.  Stage-1 colors are never touched.

Bad events:

  * a cycle of a forbidden length (k..ell for complete hosts, exactly 2k
    for bipartite ones) carrying at most two colors in total and at least
    one leftover edge;
  * (hypergraph) a (k+2)-set spanning at most C(k+2,k)-2 colors.

Cycles with no leftover edge are excluded by the stage-1 packer, so an
empty event stream means no forbidden cycle anywhere has two or fewer
colors (resp. no clique set is color-deficient); the verifier re-checks
this independently in tests.

Every firing cycle event here has at least two resamplable degrees of
freedom or a second color to escape to, so no event is permanently stuck:
a one-leftover-edge cycle would need a monochromatic stage-1 path of
length m-1 inside one tile, which is longer than any simple path a tile
admits.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import combinations, islice

from .coloring import UNCOLORED, Coloring
from .hosts import rank_edge, unrank_edge
from .packing import PackState


@dataclass(frozen=True)
class FinishConfig:
    seed: int = 0
    c2: int | None = None  # fresh palette size, default ceil(n^(1-delta))
    max_resamples: int = 1_000_000
    ell: int | None = None  # override for the forbidden cycle range

    def __post_init__(self):
        if self.c2 is not None and self.c2 < 2:
            raise ValueError("fresh palette needs at least 2 colors")
        if self.max_resamples < 1:
            raise ValueError("max_resamples must be >= 1")


@dataclass(frozen=True)
class TwoColorCycle:
    verts: tuple[int, ...]
    leftover: tuple[int, ...]  # ranks to resample


@dataclass(frozen=True)
class DeficientClique:
    verts: tuple[int, ...]
    leftover: tuple[int, ...]


class NotFinished(RuntimeError):
    def __init__(self, remaining: list, resamples: int):
        super().__init__(
            f"resample cap hit with {len(remaining)} bad event(s) still firing"
        )
        self.remaining = remaining
        self.resamples = resamples


@dataclass
class FinishResult:
    coloring: Coloring
    resamples: int
    c2: int
    fresh_base: int  # first fresh color id


def default_fresh_palette(n: int, delta: float) -> int:
    return max(2, math.ceil(n ** (1 - delta)))


def finish(stage1: PackState, cfg: FinishConfig) -> FinishResult:
    leftover = stage1.leftover_ranks()
    base = stage1.palette
    c2 = cfg.c2 if cfg.c2 is not None else default_fresh_palette(stage1.host.n, stage1.cfg.delta)
    coloring = Coloring(stage1.host, stage1.coloring.colors.copy(), base + c2)
    assert stage1.coloring.colored_count == sum(
        _tile_edge_count(stage1, t) for t in stage1.tiles
    ), "stage-1 coloring out of sync with its tiles"

    rng = random.Random(cfg.seed)
    for r in leftover:
        coloring.colors[r] = base + rng.randrange(c2)

    resamples = 0
    while True:
        ev = next(enumerate_bad_events(coloring, stage1, cfg), None)
        if ev is None:
            break
        if resamples >= cfg.max_resamples:
            remaining = list(islice(enumerate_bad_events(coloring, stage1, cfg), 100))
            raise NotFinished(remaining, resamples)
        for r in ev.leftover:
            coloring.colors[r] = base + rng.randrange(c2)
        resamples += 1
    return FinishResult(coloring, resamples, c2, base)


def _tile_edge_count(stage1: PackState, tile) -> int:
    if stage1.family == "cycles":
        return math.comb(len(tile.verts), 2)
    if stage1.family == "bipartite-cycles":
        return len(tile.left) * len(tile.right)
    return len(tile.edge_colors)


def _cycle_lengths(stage1: PackState, cfg: FinishConfig) -> range:
    if stage1.family == "bipartite-cycles":
        m = 2 * stage1.k
        return range(m, m + 1)
    hi = cfg.ell if cfg.ell is not None else stage1.ell
    return range(stage1.k, hi + 1)


def enumerate_bad_events(coloring: Coloring, stage1: PackState, cfg: FinishConfig):
    """Yield every firing bad event, in the resampling scan order."""
    leftover = stage1.leftover_ranks()
    if stage1.family == "hyper-cliques":
        yield from _scan_deficient_cliques(coloring, stage1, leftover)
        return
    yield from _scan_two_color_cycles(coloring, stage1, leftover, _cycle_lengths(stage1, cfg))


def _scan_two_color_cycles(coloring, stage1, leftover, lengths):
    """Cycles with at most two colors in total and >= 1 leftover edge.

    Anchored at their lowest-rank leftover edge.  Color budget along a
    path: the anchor's fresh color plus at most one other color, either a
    second fresh color or one stage-1 color (stage-1 segments then stay
    inside single tiles, walked via the packer's tile membership).
    """
    host = coloring.host
    max_len = max(lengths)

    fresh_adj: dict[int, list[tuple[int, int, int]]] = {}
    for r in leftover:
        u, v = unrank_edge(host, r)
        c = int(coloring.colors[r])
        fresh_adj.setdefault(u, []).append((v, r, c))
        fresh_adj.setdefault(v, []).append((u, r, c))
    for lst in fresh_adj.values():
        lst.sort(key=lambda t: t[1])

    for e in leftover:
        u, v = unrank_edge(host, e)
        c1 = int(coloring.colors[e])

        # state: (vertex, edges used, second fresh color, stage color,
        #         visited vertices, leftover ranks used)
        stack = [(v, 1, None, None, (v,), (e,))]
        while stack:
            w, depth, fresh2, stage_col, visited, ranks = stack.pop()
            moves: list[tuple[int, int | None, int | None, int | None]] = []
            for x, r, c in fresh_adj.get(w, ()):  # leftover continuations
                if r in ranks or r < e:
                    continue
                if c == c1:
                    moves.append((x, r, fresh2, stage_col))
                elif stage_col is None and (fresh2 is None or fresh2 == c):
                    moves.append((x, r, c, stage_col))
            if fresh2 is None:  # stage-1 continuations inside one tile
                tiles_at = stage1.vertex_tiles.get(w, {})
                if stage_col is None:
                    for c in sorted(tiles_at):
                        for x in tiles_at[c]:
                            moves.append((x, None, fresh2, c))
                elif stage_col in tiles_at:
                    for x in tiles_at[stage_col]:
                        moves.append((x, None, fresh2, stage_col))
            for x, r, nfresh2, nstage in moves:
                nranks = ranks if r is None else ranks + (r,)
                if x == u:
                    if depth + 1 in lengths:
                        yield TwoColorCycle(visited + (u,), nranks)
                    continue
                if depth + 1 > max_len - 1 or x in visited:
                    continue
                stack.append((x, depth + 1, nfresh2, nstage, visited + (x,), nranks))


def _scan_deficient_cliques(coloring: Coloring, stage1: PackState, leftover: list[int]):
    host = coloring.host
    k = host.k
    need = math.comb(k + 2, k) - 1
    seen: set[tuple[int, ...]] = set()
    for e in leftover:
        verts = unrank_edge(host, e)
        others = [x for x in range(host.n) if x not in verts]
        for extra in combinations(others, 2):
            w = tuple(sorted(verts + extra))
            if w in seen:
                continue
            seen.add(w)
            cols = [int(coloring.colors[rank_edge(host, sub)]) for sub in combinations(w, k)]
            if any(c == UNCOLORED for c in cols):
                continue
            if len(set(cols)) <= need - 1:
                lo = [
                    rank_edge(host, sub)
                    for sub in combinations(w, k)
                    if stage1.coloring.colors[rank_edge(host, sub)] == UNCOLORED
                ]
                yield DeficientClique(w, tuple(lo))
