"""Exact minimum palette sizes on tiny hosts by branch and bound.

Edges are assigned in a fixed order (most copies through the edge first);
each edge takes an already-open color or opens the next fresh id, which
breaks color symmetry without losing optimality.  A branch dies as soon as
a fully colored copy falls below its q, properness fails where required,
or the open-color count reaches the incumbent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coloring import UNCOLORED, Coloring
from .copies import CopyKind, copy_edge_ranks, stream_copies, validate_kind
from .hosts import HostSpec, unrank_edge

MAX_EDGES = 36


@dataclass(frozen=True)
class ExactProblem:
    host: HostSpec
    kinds: tuple[tuple[CopyKind, int], ...]
    require_proper: bool = False


class BudgetExceeded(RuntimeError):
    def __init__(self, lower: int, upper: int | None, nodes: int):
        super().__init__(f"budget of {nodes} nodes exhausted; bounds [{lower}, {upper}]")
        self.lower = lower
        self.upper = upper
        self.nodes = nodes


class _Exhausted(Exception):
    pass


@dataclass
class ExactResult:
    value: int
    witness: Coloring
    nodes: int


def min_colors(
    problem: ExactProblem, budget: int = 2_000_000, edge_order: list[int] | None = None
) -> ExactResult:
    host = problem.host
    ecount = host.edge_count
    if ecount > MAX_EDGES:
        raise ValueError(f"host has {ecount} edges, cap is {MAX_EDGES}")
    for kind, _ in problem.kinds:
        validate_kind(host, kind)

    copies: list[tuple[int, list[int]]] = []  # (q, edge ranks)
    for kind, q in problem.kinds:
        for seq in stream_copies(host, kind):
            ranks = copy_edge_ranks(host, kind, seq)
            if q > len(set(ranks)):
                raise ValueError(f"q={q} exceeds the edge count of {kind}")
            copies.append((q, sorted(set(ranks))))

    through: list[list[int]] = [[] for _ in range(ecount)]
    for ci, (_, ranks) in enumerate(copies):
        for r in ranks:
            through[r].append(ci)

    if edge_order is None:
        edge_order = sorted(range(ecount), key=lambda r: (-len(through[r]), r))
    position = {r: i for i, r in enumerate(edge_order)}

    adjacent: list[list[int]] = [[] for _ in range(ecount)]
    if problem.require_proper:
        verts = [set(unrank_edge(host, r)) for r in range(ecount)]
        for r in range(ecount):
            adjacent[r] = [s for s in range(ecount) if s != r and verts[r] & verts[s]]

    colors = np.full(ecount, UNCOLORED, dtype=np.int64)
    best_value = ecount + 1
    best_assign: np.ndarray | None = None
    nodes = 0
    frontier_floor = ecount + 1  # smallest open-color count among pruned-by-budget nodes

    def violates(rank: int) -> bool:
        c = colors[rank]
        if problem.require_proper:
            for s in adjacent[rank]:
                if colors[s] == c:
                    return True
        for ci in through[rank]:
            q, ranks = copies[ci]
            seen = set()
            full = True
            for r in ranks:
                cr = colors[r]
                if cr == UNCOLORED:
                    full = False
                    break
                seen.add(int(cr))
            if full and len(seen) < q:
                return True
        return False

    def descend(idx: int, used: int) -> None:
        nonlocal nodes, best_value, best_assign, frontier_floor
        nodes += 1
        if nodes > budget:
            frontier_floor = min(frontier_floor, used)
            raise _Exhausted
        if used >= best_value:
            return
        if idx == ecount:
            best_value = used
            best_assign = colors.copy()
            return
        rank = edge_order[idx]
        # candidate colors: every open id, plus one fresh id if the total
        # can still beat the incumbent
        limit = used + 1 if used + 1 < best_value else used
        for c in range(limit):
            colors[rank] = c
            if not violates(rank):
                descend(idx + 1, max(used, c + 1))
        colors[rank] = UNCOLORED

    try:
        descend(0, 0)
    except _Exhausted:
        raise BudgetExceeded(
            min(frontier_floor, best_value), best_value if best_assign is not None else None, nodes
        ) from None

    assert best_assign is not None, "search exhausted without any valid coloring"
    witness = Coloring(host, best_assign, best_value)
    return ExactResult(best_value, witness, nodes)
