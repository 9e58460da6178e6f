"""Operator splittings A = A_1 + ... + A_m and the splitting-error action.

Two splittings of the assembled elliptic operator are provided.  The
alternating-direction split separates the coordinate directions,

    A_1 = -(a11 u_x)_x + c/2 u,    A_2 = -(a22 u_y)_y + c/2 u,

and requires a12 = 0.  The domain-decomposition split weights the full
operator by a partition of unity,

    A_k = -div(rho_k a grad u) + rho_k c u,

and applies to any tensor.  Both are assembled so that the parts sum to
the unsplit matrix exactly (to rounding): every coefficient evaluation
point of the parts coincides with the corresponding point of the full
assembly, multiplied by weights that sum to one there.

The m-stage factored scheme perturbs the implicit operator by

    B = theta^2 tau sum_{i<j} A_i A_j
      + theta^3 tau^2 sum_{i<j<k} A_i A_j A_k + ... ,

equivalently B v = [prod_k (I + theta tau A_k) v - v - theta tau A v] / tau.
bh_apply evaluates this action without forming matrix products and with
the telescoping cancellation done symbolically: with g_{m+1} = 0 and

    g_k = g_{k+1} + theta tau A_k (v + g_{k+1}),

one has prod_{k'>=k} (I + theta tau A_k') v = v + g_k, hence

    B v = theta * sum_k A_k g_{k+1}.

This costs about 2m matrix-vector products and returns exact zeros
wherever the supports of the factors do not interact, which the
subtract-then-divide form would lose to roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .decomposition import ComponentMap, make_partition_of_unity
from .mesh import assemble_operator

__all__ = [
    "SplitOperators",
    "UnsupportedSplittingError",
    "build_unsplit",
    "build_adi_split",
    "build_dd_split",
    "bh_apply",
]


class UnsupportedSplittingError(ValueError):
    """The requested splitting cannot represent the given coefficient."""


@dataclass(frozen=True)
class SplitOperators:
    """The unsplit matrix, its parts, and how the split was built.

    kind is "unsplit", "adi" or "dd"; component_map is set for "dd".
    The parts always satisfy sum(parts) == full up to rounding.
    """

    full: object
    parts: tuple
    kind: str
    component_map: Optional[ComponentMap] = None

    @property
    def m(self) -> int:
        return len(self.parts)


def build_unsplit(grid, coeff, c=None) -> SplitOperators:
    """Trivial one-part split; the m = 1 schemes reduce to the theta scheme."""
    A = assemble_operator(grid, coeff, c)
    return SplitOperators(full=A, parts=(A,), kind="unsplit")


def build_adi_split(grid, coeff, c=None) -> SplitOperators:
    """Directionwise split into one-dimensional operators.

    Each part gets half the reaction term so the parts sum to the full
    operator.  Raises UnsupportedSplittingError for tensors with mixed
    terms, which no directionwise split can represent.
    """
    if coeff.has_mixed:
        name = f" {coeff.name!r}" if getattr(coeff, "name", "") else ""
        raise UnsupportedSplittingError(
            f"alternating-direction splitting cannot handle coefficient{name}: "
            "its off-diagonal entries produce mixed-derivative terms that belong "
            "to neither direction; use a domain-decomposition splitting instead"
        )
    half_c = None
    if c is not None:
        def half_c(x, y, _c=c):
            return 0.5 * np.asarray(_c(x, y), dtype=float)
    A1 = assemble_operator(grid, coeff, half_c, terms=("xx",))
    A2 = assemble_operator(grid, coeff, half_c, terms=("yy",))
    A = assemble_operator(grid, coeff, c)
    return SplitOperators(full=A, parts=(A1, A2), kind="adi")


def build_dd_split(grid, coeff, decomposition, c=None, component_map=None) -> SplitOperators:
    """Split weighted by the partition of unity of a strip decomposition.

    Works for any symmetric positive definite tensor, mixed terms
    included.  The weight of part k is evaluated at exactly the points
    where the unweighted assembly evaluates the coefficient, so the
    parts sum to the full matrix to rounding.
    """
    pou = make_partition_of_unity(decomposition)
    parts = []
    for k in range(decomposition.m):
        def weight(x, y, _k=k):
            return pou.rho(_k, x, y)
        parts.append(assemble_operator(grid, coeff, c, weight=weight))
    A = assemble_operator(grid, coeff, c)
    cmap = component_map or ComponentMap(decomposition, grid)
    return SplitOperators(full=A, parts=tuple(parts), kind="dd", component_map=cmap)


def bh_apply(split: SplitOperators, theta: float, tau: float, v):
    """Action of the splitting-error operator B on a vector.

    Exact rearrangement of [prod_k (I + theta tau A_k) v - v
    - theta tau A v] / tau; see the module docstring.  For m = 1 the
    result is identically zero.
    """
    if not 0.0 < theta <= 1.0:
        raise ValueError(f"theta must lie in (0, 1], got {theta}")
    if not tau > 0.0:
        raise ValueError(f"time step must be positive, got {tau}")
    v = np.asarray(v, dtype=float)
    if v.shape != (split.full.shape[0],):
        raise ValueError(f"vector has shape {v.shape}, expected ({split.full.shape[0]},)")
    acc = np.zeros_like(v)
    g = np.zeros_like(v)
    for A_k in reversed(split.parts):
        acc += A_k @ g
        g = g + theta * tau * (A_k @ (v + g))
    return theta * acc
