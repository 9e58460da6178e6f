"""Overlapping vertical-strip decompositions and partitions of unity.

The unit square is covered by two subdomains, each the union of q
vertical strips of width 1/(2q) widened by half the overlap parameter xi
on every interior side:

    subdomain 1, strip i:  ( 2(i-1) w - xi/2 ,  (2i-1) w + xi/2 )
    subdomain 2, strip i:  ( (2i-1) w - xi/2 ,  2i w     + xi/2 )

with w = 1/(2q) and the outer ends clamped to 0 and 1.  Strips of one
subdomain are pairwise disjoint open intervals for 0 < xi <= 1/(2q);
consecutive strips of the two subdomains overlap on bands of width xi.

The subordinate partition of unity is built from sine bumps: on a strip
(alpha, beta),

    s(x) = sin(pi (x - alpha) / (beta - alpha)),

extended by zero outside, and rho_k(x) is the sum of subdomain k's bumps
divided by the sum over all subdomains.  Where exactly one subdomain
covers a point the ratio is 1 or 0; the only points of the closed square
where every bump vanishes are x = 0 and x = 1, where membership of the
closed strips decides (these values never enter assembled operators
because boundary nodes are eliminated).

All strip endpoints are exact rationals and node membership is decided
with exact comparisons of i/M against them, never with floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "Decomposition",
    "PartitionOfUnity",
    "ComponentMap",
    "make_strip_decomposition",
    "make_partition_of_unity",
    "component_indices",
]


@dataclass(frozen=True)
class Decomposition:
    """Two overlapping subdomains, each a union of q disjoint vertical strips.

    strips[k][l] is the open interval (alpha, beta) of subdomain k's
    strip l in x, as exact Fractions; every strip spans [0, 1] in y.
    """

    q: int
    xi: Fraction
    strips: tuple

    @property
    def m(self) -> int:
        return len(self.strips)

    def components(self, k: int):
        return self.strips[k]


def make_strip_decomposition(q: int, xi) -> Decomposition:
    """Strip cover of the unit square with overlap xi.

    Parameters
    ----------
    q : int >= 1
        Strips per subdomain.
    xi : Fraction, str or int-ratio float
        Overlap width, 0 < xi <= 1/(2q).  Strings like "1/8" are parsed
        exactly; floats are converted via Fraction and should be exact
        binary values.
    """
    if q < 1:
        raise ValueError(f"need at least one strip per subdomain, got q={q}")
    xi = Fraction(xi)
    w = Fraction(1, 2 * q)
    if not 0 < xi <= w:
        raise ValueError(
            f"overlap xi={xi} must satisfy 0 < xi <= 1/(2q) = {w} so the strips "
            "of each subdomain stay disjoint"
        )
    half = xi / 2
    sub1, sub2 = [], []
    for i in range(1, q + 1):
        a1 = Fraction(0) if i == 1 else 2 * (i - 1) * w - half
        b1 = (2 * i - 1) * w + half
        a2 = (2 * i - 1) * w - half
        b2 = Fraction(1) if i == q else 2 * i * w + half
        sub1.append((a1, b1))
        sub2.append((a2, b2))
    return Decomposition(q=q, xi=xi, strips=(tuple(sub1), tuple(sub2)))


@dataclass(frozen=True)
class PartitionOfUnity:
    """Sine-bump weights rho_k subordinate to a strip decomposition."""

    decomposition: Decomposition

    def _bump_sums(self, x):
        x = np.asarray(x, dtype=float)
        sums = []
        for comps in self.decomposition.strips:
            s = np.zeros_like(x)
            for alpha, beta in comps:
                a, b = float(alpha), float(beta)
                inside = (x > a) & (x < b)
                s = np.where(inside, s + np.sin(np.pi * (x - a) / (b - a)), s)
            sums.append(s)
        return sums

    def _cover_counts(self, x):
        x = np.asarray(x, dtype=float)
        covers = []
        for comps in self.decomposition.strips:
            c = np.zeros(x.shape, dtype=bool)
            for alpha, beta in comps:
                c |= (x >= float(alpha)) & (x <= float(beta))
            covers.append(c)
        return covers

    def rho_all(self, x, y=None):
        """Weights of every subdomain at x; returns a list of arrays.

        The y argument is accepted for signature symmetry with the
        coefficient fields; the strips do not vary in y.
        """
        sums = self._bump_sums(x)
        total = np.zeros_like(sums[0])
        for s in sums:
            total = total + s
        positive = total > 0.0
        if not positive.all():
            covers = self._cover_counts(x)
            count = np.zeros(np.asarray(x, dtype=float).shape, dtype=int)
            for c in covers:
                count = count + c.astype(int)
            # every degenerate point must belong to exactly one closed strip;
            # for valid geometries that is only x = 0 and x = 1
            assert np.all(count[~positive] == 1), "point outside the strip cover"
            safe = np.where(positive, total, 1.0)
            return [
                np.where(positive, s / safe, c.astype(float))
                for s, c in zip(sums, covers)
            ]
        return [s / total for s in sums]

    def rho(self, k: int, x, y=None):
        """Weight of subdomain k (0-based) at x."""
        return self.rho_all(x, y)[k]


def make_partition_of_unity(decomposition: Decomposition) -> PartitionOfUnity:
    return PartitionOfUnity(decomposition)


def component_indices(decomposition: Decomposition, grid, k: int, l: int):
    """Interior-node indices whose x-coordinate lies in the closed strip l
    of subdomain k (both 0-based), sorted ascending.

    Membership uses exact rational comparisons of i/M against the strip
    endpoints.  With the x-major node numbering the result is a
    contiguous range.
    """
    if not 0 <= k < decomposition.m:
        raise ValueError(f"subdomain index {k} out of range for m={decomposition.m}")
    if not 0 <= l < decomposition.q:
        raise ValueError(f"strip index {l} out of range for q={decomposition.q}")
    alpha, beta = decomposition.strips[k][l]
    M = grid.M
    n = M - 1
    lo, hi = None, None
    for i in range(1, M):
        xi_frac = Fraction(i, M)
        if alpha <= xi_frac <= beta:
            if lo is None:
                lo = i
            hi = i
    if lo is None:
        return np.empty(0, dtype=np.intp)
    return np.arange((lo - 1) * n, hi * n, dtype=np.intp)


class ComponentMap:
    """Index bookkeeping for all component strips of a decomposition.

    Restriction to a component is numpy fancy indexing with the stored
    index array; extension by zero is its transpose.  The index sets of
    one subdomain are pairwise disjoint whenever xi < 1/(2q); at the
    limiting overlap xi = 1/(2q) consecutive closed strips share one
    node column.
    """

    def __init__(self, decomposition: Decomposition, grid):
        self.decomposition = decomposition
        self.grid = grid
        self._sets = {
            (k, l): component_indices(decomposition, grid, k, l)
            for k in range(decomposition.m)
            for l in range(decomposition.q)
        }

    def indices(self, k: int, l: int):
        return self._sets[k, l]

    def subdomain_indices(self, k: int):
        parts = [self._sets[k, l] for l in range(self.decomposition.q)]
        return np.unique(np.concatenate(parts))
