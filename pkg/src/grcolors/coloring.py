"""Edge colorings, color-class indexing, and the grc file format.

A coloring is a dense array over edge ranks.  Entries are color ids in
[0, palette_size) or the UNCOLORED sentinel (-1): stage-1 constructions
genuinely leave edges uncolored, so the sentinel is reserved outside the
color id space rather than being a special color.
"""

from __future__ import annotations

import math
from bisect import insort
from dataclasses import dataclass, field

import numpy as np

from .hosts import HostSpec, Mode, rank_edge, unrank_edge

UNCOLORED = -1


class ParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class Coloring:
    host: HostSpec
    colors: np.ndarray
    palette_size: int

    @classmethod
    def empty(cls, host: HostSpec, palette_size: int = 0) -> "Coloring":
        return cls(host, np.full(host.edge_count, UNCOLORED, dtype=np.int64), palette_size)

    def color_of(self, rank: int) -> int:
        return int(self.colors[rank])

    def set_color(self, rank: int, color: int) -> None:
        if color != UNCOLORED and not 0 <= color < self.palette_size:
            raise ValueError(f"color {color} outside palette of size {self.palette_size}")
        self.colors[rank] = color

    @property
    def colored_count(self) -> int:
        return int(np.count_nonzero(self.colors != UNCOLORED))

    @property
    def is_total(self) -> bool:
        return self.colored_count == self.host.edge_count

    def used_colors(self) -> list[int]:
        used = np.unique(self.colors[self.colors != UNCOLORED])
        return [int(c) for c in used]

    def normalized(self) -> "Coloring":
        """Compact color ids to 0..u-1 preserving ascending id order.

        palette_size must equal the number of ids actually in use, e.g.
        before reporting palette sizes against the closed-form bounds.
        """
        used = self.used_colors()
        remap = {c: i for i, c in enumerate(used)}
        out = np.full_like(self.colors, UNCOLORED)
        for old, new in remap.items():
            out[self.colors == old] = new
        return Coloring(self.host, out, len(used))

    def copy(self) -> "Coloring":
        return Coloring(self.host, self.colors.copy(), self.palette_size)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Coloring)
            and self.host == other.host
            and self.palette_size == other.palette_size
            and bool(np.array_equal(self.colors, other.colors))
        )


def color_class_sizes(coloring: Coloring) -> list[int]:
    """Multiset of class sizes, descending. Sums to the colored edge count."""
    mask = coloring.colors != UNCOLORED
    if not mask.any():
        return []
    counts = np.bincount(coloring.colors[mask])
    return sorted((int(c) for c in counts if c > 0), reverse=True)


class ColorClassIndex:
    """Edge lists per color plus per (vertex, color) incidence counts.

    Maintained incrementally alongside a mutating coloring; rebuilding
    from scratch must give an equal index.
    """

    def __init__(self, coloring: Coloring):
        self.host = coloring.host
        self.edges_by_color: dict[int, list[int]] = {}
        self.incidence: dict[tuple[int, int], int] = {}
        for r in range(coloring.host.edge_count):
            c = int(coloring.colors[r])
            if c != UNCOLORED:
                self._add(r, c)

    def _add(self, rank: int, color: int) -> None:
        insort(self.edges_by_color.setdefault(color, []), rank)
        for v in unrank_edge(self.host, rank):
            key = (v, color)
            self.incidence[key] = self.incidence.get(key, 0) + 1

    def _remove(self, rank: int, color: int) -> None:
        lst = self.edges_by_color[color]
        lst.remove(rank)
        if not lst:
            del self.edges_by_color[color]
        for v in unrank_edge(self.host, rank):
            key = (v, color)
            self.incidence[key] -= 1
            if self.incidence[key] == 0:
                del self.incidence[key]

    def apply(self, rank: int, old_color: int, new_color: int) -> None:
        if old_color != UNCOLORED:
            self._remove(rank, old_color)
        if new_color != UNCOLORED:
            self._add(rank, new_color)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ColorClassIndex)
            and self.edges_by_color == other.edges_by_color
            and self.incidence == other.incidence
        )


_MODE_TOKEN = {Mode.COMPLETE: "complete", Mode.BIPARTITE: "bipartite", Mode.UNIFORM: "uniform"}
_TOKEN_MODE = {v: k for k, v in _MODE_TOKEN.items()}


def save_coloring(coloring: Coloring, path) -> None:
    """Write the grc text format; uncolored edges are omitted."""
    host = coloring.host
    lines = [f"grc 1 {_MODE_TOKEN[host.mode]} {host.n} {host.k} {coloring.palette_size}"]
    for r in range(host.edge_count):
        c = int(coloring.colors[r])
        if c != UNCOLORED:
            verts = " ".join(str(v) for v in unrank_edge(host, r))
            lines.append(f"e {verts} {c}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_coloring(path) -> Coloring:
    with open(path, "r", encoding="ascii") as fh:
        raw = fh.read().splitlines()

    header = None
    header_line = 0
    for i, line in enumerate(raw, start=1):
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            header, header_line = stripped.split(), i
            break
    if header is None:
        raise ParseError("missing header", 1)
    if len(header) != 6 or header[0] != "grc" or header[1] != "1":
        raise ParseError("malformed header, expected 'grc 1 <mode> <n> <k> <palette>'", header_line)
    if header[2] not in _TOKEN_MODE:
        raise ParseError(f"unknown mode {header[2]!r}", header_line)
    try:
        n, k, palette = int(header[3]), int(header[4]), int(header[5])
        host = HostSpec(_TOKEN_MODE[header[2]], n, k)
    except ValueError as exc:
        raise ParseError(str(exc), header_line) from exc
    if palette < 0:
        raise ParseError("negative palette size", header_line)

    coloring = Coloring.empty(host, palette)
    for i, line in enumerate(raw, start=1):
        if i <= header_line:
            continue
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if parts[0] != "e":
            raise ParseError(f"unknown record {parts[0]!r}", i)
        if len(parts) != host.k + 2:
            raise ParseError(f"edge line needs {host.k} vertices and a color", i)
        try:
            verts = [int(p) for p in parts[1 : 1 + host.k]]
            color = int(parts[-1])
        except ValueError as exc:
            raise ParseError("non-integer field", i) from exc
        if verts != sorted(verts):
            raise ParseError("vertices must be ascending", i)
        try:
            rank = rank_edge(host, verts)
        except Exception as exc:
            raise ParseError(str(exc), i) from exc
        if not 0 <= color < palette:
            raise ParseError(f"color {color} outside declared palette {palette}", i)
        if coloring.colors[rank] != UNCOLORED:
            raise ParseError(f"duplicate edge {verts}", i)
        coloring.colors[rank] = color
    return coloring
