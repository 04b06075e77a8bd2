"""Deciding whether a coloring spreads enough colors over every copy.

The central predicate: for each (kind, q) requested, every fully colored
copy of the pattern must span at least q distinct colors.  Copies with an
uncolored edge are exempt, so partial stage-1 colorings are judged only on
their colored subgraph.

Three exhaustive strategies share one verdict contract:

  * a plain stream walk (reference-grade, any host and kind);
  * a vectorized walk over all copies for paths/cycles in K_n;
  * for cycles at q <= 3, a search of two-color-class unions, since a
    violating cycle lies entirely inside the union of at most two classes.

Sampling draws copies uniformly with replacement from a seeded generator,
so a verdict and its witness are reproducible byte for byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .coloring import UNCOLORED, Coloring
from .copies import (
    CopyKind,
    _arrangement_patterns,
    canonical_copy,
    copy_edge_ranks,
    count_copies,
    stream_copies,
    stream_order_key,
    validate_kind,
)
from .hosts import HostSpec, Mode, edges_at_vertex, pair_rank_array, rank_edge, unrank_edge

_VECTOR_LIMIT = 6_000_000  # max subsets materialized by the vectorized walk


class PartialColoring(ValueError):
    """Operation needs a total coloring."""


@dataclass(frozen=True)
class CheckSpec:
    kinds: tuple[tuple[CopyKind, int], ...]
    sample: tuple[int, int] | None = None  # (count, seed); None means exhaustive
    require_proper: bool = False

    def __post_init__(self):
        for _, q in self.kinds:
            if q < 1:
                raise ValueError("q must be >= 1")
        if self.sample is not None and self.sample[0] < 1:
            raise ValueError("sample count must be >= 1")


@dataclass
class Violation:
    kind: CopyKind
    q: int
    copy: tuple[int, ...]
    distinct_colors: int
    colors_seen: list[int]


@dataclass
class KindResult:
    kind: CopyKind
    q: int
    copies_checked: int
    violations: int
    first_violation: Violation | None


@dataclass
class CheckReport:
    ok: bool
    first_violation: Violation | None
    copies_checked: int
    results: list[KindResult] = field(default_factory=list)
    proper_pair: tuple[int, int] | None = None  # edge ranks sharing vertex and color


def proper_violation(coloring: Coloring) -> tuple[int, int] | None:
    """First pair of adjacent colored edges with equal color, or None."""
    host = coloring.host
    for v in range(host.vertex_count):
        seen: dict[int, int] = {}
        for r in edges_at_vertex(host, v):
            c = int(coloring.colors[r])
            if c == UNCOLORED:
                continue
            if c in seen:
                return (min(seen[c], r), max(seen[c], r))
            seen[c] = r
    return None


def check(coloring: Coloring, spec: CheckSpec) -> CheckReport:
    host = coloring.host
    report = CheckReport(ok=True, first_violation=None, copies_checked=0)
    if spec.require_proper:
        pair = proper_violation(coloring)
        if pair is not None:
            report.ok = False
            report.proper_pair = pair
    for kind, q in spec.kinds:
        validate_kind(host, kind)
        if spec.sample is not None:
            res = _check_sampled(coloring, kind, q, *spec.sample)
        else:
            res = _check_exhaustive(coloring, kind, q)
        report.results.append(res)
        report.copies_checked += res.copies_checked
        if res.violations:
            report.ok = False
            if report.first_violation is None:
                report.first_violation = res.first_violation
    return report


# ---------------------------------------------------------------------------
# exhaustive strategies


def _check_exhaustive(coloring: Coloring, kind: CopyKind, q: int) -> KindResult:
    host = coloring.host
    if kind.family == "cycle" and q <= 3:
        return _check_cycles_by_class_pairs(coloring, kind, q)
    if (
        host.mode is Mode.COMPLETE
        and kind.family in ("path", "cycle")
        and math.comb(host.n, kind.param) <= _VECTOR_LIMIT
    ):
        return _check_vectorized_complete(coloring, kind, q)
    return _check_stream(coloring, kind, q)


def _violation_from_seq(coloring, kind, q, seq) -> Violation:
    ranks = copy_edge_ranks(coloring.host, kind, seq)
    cols = [int(coloring.colors[r]) for r in ranks]
    return Violation(kind, q, tuple(seq), len(set(cols)), cols)


def _check_stream(coloring: Coloring, kind: CopyKind, q: int) -> KindResult:
    colors = coloring.colors
    host = coloring.host
    checked = violations = 0
    first = None
    for seq in stream_copies(host, kind):
        checked += 1
        cols = [int(colors[r]) for r in copy_edge_ranks(host, kind, seq)]
        if min(cols) == UNCOLORED:
            continue
        if len(set(cols)) < q:
            violations += 1
            if first is None:
                first = Violation(kind, q, seq, len(set(cols)), cols)
    return KindResult(kind, q, checked, violations, first)


def _subset_matrix(n: int, p: int) -> np.ndarray:
    flat = np.fromiter(
        (v for combo in combinations(range(n), p) for v in combo),
        dtype=np.int64,
        count=math.comb(n, p) * p,
    )
    return flat.reshape(-1, p)


def _seq_edge_ranks(host: HostSpec, seqs: np.ndarray, family: str) -> np.ndarray:
    if family == "cycle":
        u = seqs
        v = np.roll(seqs, -1, axis=1)
    else:
        u = seqs[:, :-1]
        v = seqs[:, 1:]
    return pair_rank_array(host, u, v)


def _distinct_per_row(cols: np.ndarray) -> np.ndarray:
    s = np.sort(cols, axis=1)
    return (np.diff(s, axis=1) != 0).sum(axis=1) + 1


def _check_vectorized_complete(coloring: Coloring, kind: CopyKind, q: int) -> KindResult:
    host, p = coloring.host, kind.param
    if p > host.n:
        return KindResult(kind, q, 0, 0, None)
    subsets = _subset_matrix(host.n, p)
    colors = coloring.colors
    total = 0
    violations = 0
    best: tuple[int, int] | None = None  # (subset_idx, pattern_idx), stream order
    pats = _arrangement_patterns(kind, p)
    for pi, pat in enumerate(pats):
        seqs = subsets[:, pat]
        cols = colors[_seq_edge_ranks(host, seqs, kind.family)]
        full = (cols != UNCOLORED).all(axis=1)
        bad = full & (_distinct_per_row(cols) < q)
        total += seqs.shape[0]
        nbad = int(bad.sum())
        if nbad:
            violations += nbad
            si = int(np.argmax(bad))
            if best is None or (si, pi) < best:
                best = (si, pi)
    first = None
    if best is not None:
        seq = tuple(int(x) for x in subsets[best[0]][list(pats[best[1]])])
        first = _violation_from_seq(coloring, kind, q, seq)
    return KindResult(kind, q, total, violations, first)


def _class_edge_lists(coloring: Coloring) -> dict[int, list[tuple[int, int]]]:
    host = coloring.host
    out: dict[int, list[tuple[int, int]]] = {}
    for r in range(host.edge_count):
        c = int(coloring.colors[r])
        if c != UNCOLORED:
            out.setdefault(c, []).append(tuple(unrank_edge(host, r)))
    return out


def _cycles_of_length(adj: dict[int, set[int]], m: int) -> list[tuple[int, ...]]:
    """All simple cycles of length exactly m, each once, canonically."""
    out: list[tuple[int, ...]] = []

    def extend(path: list[int], visited: set[int]) -> None:
        cur = path[-1]
        if len(path) == m:
            if path[0] in adj[cur] and path[1] < path[-1]:
                out.append(tuple(path))
            return
        for w in sorted(adj[cur]):
            if w > path[0] and w not in visited:
                visited.add(w)
                path.append(w)
                extend(path, visited)
                path.pop()
                visited.remove(w)

    for s in sorted(adj):
        extend([s], {s})
    return out


def _check_cycles_by_class_pairs(coloring: Coloring, kind: CopyKind, q: int) -> KindResult:
    """Exhaustive cycle check for q <= 3.

    A fully colored cycle with fewer than q <= 3 colors lives inside the
    union of at most two color classes, so scanning all class pairs decides
    the predicate without touching the full copy stream.
    """
    host, m = coloring.host, kind.param
    classes = _class_edge_lists(coloring)
    ids = sorted(classes)
    found: list[tuple[int, ...]] = []
    violations = 0

    def scan(edges, need_both=None) -> None:
        nonlocal violations
        adj: dict[int, set[int]] = {}
        for u, v in edges:
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        for cyc in _cycles_of_length(adj, m):
            if need_both is not None:
                cols = set()
                for i in range(m):
                    e = tuple(sorted((cyc[i], cyc[(i + 1) % m])))
                    cols.add(int(coloring.colors[rank_edge(host, e)]))
                if cols != need_both:
                    continue
            violations += 1
            found.append(canonical_copy(kind, cyc))

    for i in ids:
        scan(classes[i])  # monochromatic
    if q >= 3:
        for i, j in combinations(ids, 2):
            scan(classes[i] + classes[j], need_both={i, j})

    first = None
    if found:
        seq = min(found, key=stream_order_key)
        first = _violation_from_seq(coloring, kind, q, seq)
    return KindResult(kind, q, count_copies(host, kind), violations, first)


# ---------------------------------------------------------------------------
# sampled strategy


def _check_sampled(coloring: Coloring, kind: CopyKind, q: int, count: int, seed: int) -> KindResult:
    host = coloring.host
    if count_copies(host, kind) == 0:
        return KindResult(kind, q, 0, 0, None)
    rng = np.random.Generator(np.random.PCG64(seed))
    if host.mode is Mode.COMPLETE and kind.family in ("path", "cycle"):
        return _sampled_vectorized(coloring, kind, q, count, rng)
    return _sampled_generic(coloring, kind, q, count, rng)


def _sampled_vectorized(coloring, kind, q, count, rng) -> KindResult:
    host, p = coloring.host, kind.param
    colors = coloring.colors
    violations = 0
    first = None
    done = 0
    base = np.tile(np.arange(host.n, dtype=np.int64), (min(count, 1 << 17), 1))
    while done < count:
        b = min(count - done, base.shape[0])
        seqs = rng.permuted(base[:b], axis=1)[:, :p]
        cols = colors[_seq_edge_ranks(host, seqs, kind.family)]
        full = (cols != UNCOLORED).all(axis=1)
        bad = full & (_distinct_per_row(cols) < q)
        nbad = int(bad.sum())
        if nbad and first is None:
            seq = canonical_copy(kind, tuple(int(x) for x in seqs[int(np.argmax(bad))]))
            first = _violation_from_seq(coloring, kind, q, seq)
        violations += nbad
        done += b
    return KindResult(kind, q, count, violations, first)


def _sampled_generic(coloring, kind, q, count, rng) -> KindResult:
    host, p = coloring.host, kind.param
    colors = coloring.colors
    violations = 0
    first = None
    for _ in range(count):
        if host.mode is Mode.BIPARTITE:
            if kind.family != "cycle":
                raise NotImplementedError("bipartite sampling supports cycles only")
            s = p // 2
            lefts = rng.choice(host.n, size=s, replace=False)
            rights = rng.choice(host.n, size=s, replace=False) + host.n
            seq = tuple(int(x) for pair in zip(lefts, rights) for x in pair)
        else:
            seq = tuple(int(x) for x in rng.choice(host.n, size=p, replace=False))
        seq = canonical_copy(kind, seq)
        cols = [int(colors[r]) for r in copy_edge_ranks(host, kind, seq)]
        if min(cols) == UNCOLORED:
            continue
        if len(set(cols)) < q:
            violations += 1
            if first is None:
                first = Violation(kind, q, seq, len(set(cols)), cols)
    return KindResult(kind, q, count, violations, first)


# ---------------------------------------------------------------------------
# structural statistics


def mono_path(coloring: Coloring, t: int) -> list[int] | None:
    """A path on t vertices inside one color class, or None.

    Graph hosts only; the witness is the vertex sequence.
    """
    if t < 2:
        raise ValueError("paths need t >= 2")
    host = coloring.host
    if host.mode is Mode.UNIFORM:
        raise ValueError("monochromatic path search applies to graph hosts")
    classes = _class_edge_lists(coloring)

    for c in sorted(classes):
        adj: dict[int, set[int]] = {}
        for u, v in classes[c]:
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)

        def extend(path: list[int], visited: set[int]) -> list[int] | None:
            if len(path) == t:
                return list(path)
            for w in sorted(adj[path[-1]]):
                if w not in visited:
                    visited.add(w)
                    path.append(w)
                    got = extend(path, visited)
                    if got:
                        return got
                    path.pop()
                    visited.remove(w)
            return None

        for s in sorted(adj):
            got = extend([s], {s})
            if got:
                return got
    return None


@dataclass
class ClassStructureCounts:
    """Coverage statistics of a total coloring of K_n^k.

    uncovered_slots counts ((k-1)-set, color) pairs with no edge of that
    color containing the set; lone_edges counts colored edges with no
    same-color edge meeting them in k-1 vertices; mated_pairs counts
    unordered same-color pairs sharing exactly k-1 vertices.
    """

    uncovered_slots: int
    lone_edges: int
    mated_pairs: int


def class_structure_counts(coloring: Coloring) -> ClassStructureCounts:
    host = coloring.host
    if host.mode is not Mode.UNIFORM:
        raise ValueError("class structure counts apply to uniform hosts")
    if not coloring.is_total:
        raise PartialColoring("coloring must be total")
    k = host.k
    classes: dict[int, list[frozenset[int]]] = {}
    for r in range(host.edge_count):
        c = int(coloring.colors[r])
        classes.setdefault(c, []).append(frozenset(unrank_edge(host, r)))

    lone = mated = 0
    covered: set[tuple[tuple[int, ...], int]] = set()
    for c, edges in classes.items():
        for e in edges:
            for s in combinations(sorted(e), k - 1):
                covered.add((s, c))
        for i, e in enumerate(edges):
            mates = 0
            for j, f in enumerate(edges):
                if i != j and len(e & f) == k - 1:
                    mates += 1
                    if i < j:
                        mated += 1
            if mates == 0:
                lone += 1
    total_slots = math.comb(host.n, k - 1) * coloring.palette_size
    return ClassStructureCounts(total_slots - len(covered), lone, mated)


@dataclass
class LeftoverStats:
    max_uncolored_degree: int
    max_uncolored_codegree: int
    max_dangerous_pairs: int


def leftover_stats(coloring: Coloring) -> LeftoverStats:
    """Concentration statistics of the uncolored remainder of a coloring."""
    host = coloring.host
    colors = coloring.colors
    uncolored = [r for r in range(host.edge_count) if colors[r] == UNCOLORED]

    deg: dict[int, int] = {}
    for r in uncolored:
        for v in unrank_edge(host, r):
            deg[v] = deg.get(v, 0) + 1
    max_deg = max(deg.values(), default=0)

    if host.mode is Mode.UNIFORM:
        codeg: dict[tuple[int, ...], int] = {}
        for r in uncolored:
            verts = unrank_edge(host, r)
            for s in combinations(verts, host.k - 1):
                codeg[s] = codeg.get(s, 0) + 1
        max_codeg = max(codeg.values(), default=0)
    else:
        max_codeg = max_deg

    if host.mode is Mode.COMPLETE:
        dangerous = _dangerous_complete(coloring, uncolored)
    elif host.mode is Mode.BIPARTITE:
        dangerous = _dangerous_bipartite(coloring, uncolored)
    else:
        dangerous = _dangerous_uniform(coloring, uncolored)
    return LeftoverStats(max_deg, max_codeg, dangerous)


def _dangerous_complete(coloring: Coloring, uncolored: list[int]) -> int:
    host, colors = coloring.host, coloring.colors
    pairs = [unrank_edge(host, r) for r in uncolored]

    def col(u, v):
        return int(colors[rank_edge(host, (min(u, v), max(u, v)))])

    best = 0
    for x in range(host.n):
        for y in range(x + 1, host.n):
            cnt = 0
            for a, b in pairs:
                if x in (a, b) or y in (a, b):
                    continue
                if (col(x, b) != UNCOLORED and col(x, b) == col(y, a)) or (
                    col(x, a) != UNCOLORED and col(x, a) == col(y, b)
                ):
                    cnt += 1
            best = max(best, cnt)
    return best


def _dangerous_bipartite(coloring: Coloring, uncolored: list[int]) -> int:
    # same-side pairs covered together by one tile show up as two edges of
    # equal color to a common opposite vertex
    host, colors = coloring.host, coloring.colors
    n = host.n
    left_pair: dict[tuple[int, int], set[int]] = {}
    right_pair: dict[tuple[int, int], set[int]] = {}
    for w in range(n, 2 * n):
        buckets: dict[int, list[int]] = {}
        for x in range(n):
            c = int(colors[rank_edge(host, (x, w))])
            if c != UNCOLORED:
                buckets.setdefault(c, []).append(x)
        for c, xs in buckets.items():
            for a, b in combinations(xs, 2):
                left_pair.setdefault((a, b), set()).add(c)
    for x in range(n):
        buckets = {}
        for w in range(n, 2 * n):
            c = int(colors[rank_edge(host, (x, w))])
            if c != UNCOLORED:
                buckets.setdefault(c, []).append(w)
        for c, ws in buckets.items():
            for a, b in combinations(ws, 2):
                right_pair.setdefault((a, b), set()).add(c)

    pairs = [unrank_edge(host, r) for r in uncolored]
    best = 0
    for x in range(n):
        for y in range(n, 2 * n):
            cnt = 0
            for a, b in pairs:  # a left, b right
                if a == x or b == y:
                    continue
                lc = left_pair.get((min(a, x), max(a, x)), set())
                rc = right_pair.get((min(b, y), max(b, y)), set())
                if lc & rc:
                    cnt += 1
            best = max(best, cnt)
    return best


def _dangerous_uniform(coloring: Coloring, uncolored: list[int]) -> int:
    host, colors = coloring.host, coloring.colors

    def col(verts):
        return int(colors[rank_edge(host, tuple(sorted(verts)))])

    leftover_by_core: dict[tuple[int, ...], list[tuple[int, int]]] = {}
    for r in uncolored:
        verts = unrank_edge(host, r)
        for xy in combinations(verts, 2):
            core = tuple(v for v in verts if v not in xy)
            leftover_by_core.setdefault(core, []).append(xy)

    best = 0
    for r in range(host.edge_count):
        verts = unrank_edge(host, r)
        for xy in combinations(verts, 2):
            x, y = xy
            core = tuple(v for v in verts if v not in xy)
            cnt = 0
            for a, b in leftover_by_core.get(core, []):
                if a in verts or b in verts:
                    continue
                c1 = col(core + (x, a))
                if c1 != UNCOLORED and c1 == col(core + (y, b)):
                    cnt += 1
                    continue
                c2 = col(core + (x, b))
                if c2 != UNCOLORED and c2 == col(core + (y, a)):
                    cnt += 1
            best = max(best, cnt)
    return best
