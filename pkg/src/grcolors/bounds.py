"""Closed-form palette bounds, evaluated in exact rational arithmetic.

Everything here is integer or Fraction; no floats.  Entries marked
asymptotic carry unknown lower-order terms and must never be asserted
against finite colorings; the exact entries are safe as hard bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction


class Direction(Enum):
    LOWER = "lower"
    UPPER = "upper"


class Exactness(Enum):
    EXACT = "exact"
    ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class BoundEntry:
    name: str
    value: Fraction
    direction: Direction
    exactness: Exactness


def ex_path(n: int, k: int) -> int:
    """Maximum edge count of an n-vertex graph with no path on k vertices.

    Faudree-Schelp: with n = q(k-1) + r, 0 <= r < k-1, the maximum is
    q*C(k-1,2) + C(r,2), attained by disjoint cliques K_{k-1} plus K_r.
    """
    if n < 0 or k < 2:
        raise ValueError("need n >= 0 and k >= 2")
    q, r = divmod(n, k - 1)
    return q * math.comb(k - 1, 2) + math.comb(r, 2)


def cycle_lower(n: int, k: int) -> int:
    """Palette floor for colorings where every C_k spans >= 3 colors.

    Such a coloring has no monochromatic P_k, so each class holds at most
    ex_path(n, k) edges and ceil(C(n,2) / ex_path(n,k)) classes are needed.
    """
    if not n >= k >= 4:
        raise ValueError("need n >= k >= 4")
    return -(-math.comb(n, 2) // ex_path(n, k))


def bip_tile_width(k: int) -> int:
    """Left-side size of the bipartite tiles K_{a,k-1}: floor((2k-1+sqrt(8k-7))/2).

    Exact integer arithmetic: with s = isqrt(8k-7), the floor equals
    (2k-1+s)//2 in both the perfect-square and irrational cases.
    """
    if k < 3:
        raise ValueError("need k >= 3")
    s = math.isqrt(8 * k - 7)
    return (2 * k - 1 + s) // 2


def bip_nonedge_prob(k: int) -> Fraction:
    """Sampling probability for same-side pairs: (a-1)/(2(k-1)) + (k-2)/(2a) <= 1."""
    a = bip_tile_width(k)
    p = Fraction(a - 1, 2 * (k - 1)) + Fraction(k - 2, 2 * a)
    assert p <= 1
    return p


def bipartite_bounds(n: int, k: int) -> tuple[Fraction, Fraction]:
    """Leading terms of the palette range for 3-coloring every C_2k in K_{n,n}.

    Both carry unknown O(1)/o(n) slack and are reported as asymptotic.
    """
    a = bip_tile_width(k)
    lower = Fraction(n, 2 * (k - 1))
    upper = (Fraction(1, 2 * (k - 1)) + Fraction(1, 2 * a)) * n
    return lower, upper


def hyper_clique_lower(n: int, k: int) -> Fraction:
    """Exact palette floor for colorings of K_n^k where every K_{k+2}^k
    spans >= C(k+2,k)-1 colors: (k - 1/(k+1)) * C(n,k) / C(n,k-1)."""
    if k < 2 or n < k + 2:
        raise ValueError("need k >= 2 and n >= k+2")
    return (k - Fraction(1, k + 1)) * Fraction(math.comb(n, k), math.comb(n, k - 1))


def hyper_clique_upper_coeff(k: int) -> Fraction:
    return Fraction(k * k + k - 1, k * k + k)


def p8_lower(n: int) -> int:
    """Exact floor ceil((7/15)*C(n,2)) on palettes of proper colorings in
    which every P_8 spans >= 5 colors."""
    v = Fraction(7, 15) * math.comb(n, 2)
    return -(-v.numerator // v.denominator)


def tight_cycle_bounds(n: int, k: int, ell: int) -> tuple[Fraction, Fraction]:
    """Asymptotic palette range for (k+1)-coloring every tight cycle on ell
    vertices in K_n^k: lower 2n/(k*ell+ell-1), upper n/(ell-k)."""
    if not (k >= 2 and ell > k):
        raise ValueError("need k >= 2 and ell > k")
    return Fraction(2 * n, k * ell + ell - 1), Fraction(n, ell - k)


def tight_path_extremal_cap(n: int, k: int, ell: int) -> Fraction:
    """Upper bound ((k*ell+ell-1)/2k) * C(n,k-1) on the extremal number of
    the tight path on ell vertices; feeds the tight-cycle palette floor."""
    return Fraction(k * ell + ell - 1, 2 * k) * math.comb(n, k - 1)


def bounds_report(mode: str, n: int, k: int, ell: int | None = None) -> list[BoundEntry]:
    """Every bound relevant to a host family, as exact rationals."""
    entries: list[BoundEntry] = []
    if mode == "complete":
        entries.append(BoundEntry("ex_path", Fraction(ex_path(n, k)), Direction.UPPER, Exactness.EXACT))
        if n >= k >= 4:
            entries.append(
                BoundEntry("cycle_lower", Fraction(cycle_lower(n, k)), Direction.LOWER, Exactness.EXACT)
            )
        if n >= 2:
            entries.append(
                BoundEntry("p6_coeff", Fraction(n * n, 4), Direction.UPPER, Exactness.ASYMPTOTIC)
            )
            entries.append(
                BoundEntry("p7_coeff", Fraction(n * n, 2), Direction.UPPER, Exactness.ASYMPTOTIC)
            )
            entries.append(
                BoundEntry("p8_proper_lower", Fraction(p8_lower(n)), Direction.LOWER, Exactness.EXACT)
            )
    elif mode == "bipartite":
        lo, hi = bipartite_bounds(n, k)
        entries.append(BoundEntry("bipartite_lower", lo, Direction.LOWER, Exactness.ASYMPTOTIC))
        entries.append(BoundEntry("bipartite_upper", hi, Direction.UPPER, Exactness.ASYMPTOTIC))
    elif mode == "uniform":
        entries.append(
            BoundEntry(
                "hyper_clique_lower", hyper_clique_lower(n, k), Direction.LOWER, Exactness.EXACT
            )
        )
        entries.append(
            BoundEntry(
                "hyper_clique_upper",
                hyper_clique_upper_coeff(k) * n,
                Direction.UPPER,
                Exactness.ASYMPTOTIC,
            )
        )
        if ell is not None:
            lo, hi = tight_cycle_bounds(n, k, ell)
            entries.append(BoundEntry("tight_cycle_lower", lo, Direction.LOWER, Exactness.ASYMPTOTIC))
            entries.append(BoundEntry("tight_cycle_upper", hi, Direction.UPPER, Exactness.ASYMPTOTIC))
            entries.append(
                BoundEntry(
                    "tight_path_cap",
                    tight_path_extremal_cap(n, k, ell),
                    Direction.UPPER,
                    Exactness.EXACT,
                )
            )
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return entries
