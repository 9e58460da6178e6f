"""Uniform grids on the unit square and finite-difference operator assembly.

The elliptic operator

    L u = -div(a grad u) + c u,    a = [[a11, a12], [a12, a22]],

is discretized on a uniform (M+1) x (M+1) node lattice over [0, 1]^2 with
homogeneous Dirichlet boundary conditions.  Boundary nodes are eliminated,
so the assembled matrix acts on the (M-1)^2 interior values only.

The diagonal flux terms -(a11 u_x)_x and -(a22 u_y)_y use conservative
differencing with the coefficient sampled at edge midpoints,

    -(a11 u_x)_x  ~  (a_e (u_ij - u_{i+1,j}) + a_w (u_ij - u_{i-1,j})) / h^2,

with a_e = a11(x + h/2, y), a_w = a11(x - h/2, y).  The mixed terms
-(a12 u_y)_x - (a12 u_x)_y use centered differences on the diagonal 2h
cross stencil with a12 sampled at the four neighbouring nodes.  Both
choices make the matrix symmetric for any symmetric coefficient tensor
and second-order consistent for smooth data.

Every coefficient evaluation accepts an optional scalar weight field that
multiplies the tensor and the reaction term at the evaluation point.
Weight fields that sum to one pointwise therefore produce operator
families that sum exactly (to rounding) to the unweighted operator,
which the splitting constructions rely on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

__all__ = ["Grid", "assemble_operator", "apply_operator"]

_ALL_TERMS = ("xx", "yy", "mixed")


@dataclass(frozen=True)
class Grid:
    """Uniform (M+1) x (M+1) node lattice on the closed unit square.

    Interior nodes (i, j) with 1 <= i, j <= M-1 are the unknowns; they are
    numbered x-major, so index(i, j) = (i-1)*(M-1) + (j-1) and a vertical
    strip of columns occupies a contiguous index range.
    """

    M: int

    def __post_init__(self):
        if self.M < 4:
            raise ValueError(f"grid needs M >= 4 intervals per side, got M={self.M}")

    @property
    def h(self) -> float:
        return 1.0 / self.M

    @property
    def n_interior(self) -> int:
        return (self.M - 1) ** 2

    def node(self, i: int, j: int):
        return (i * self.h, j * self.h)

    def index(self, i: int, j: int) -> int:
        if not (1 <= i <= self.M - 1 and 1 <= j <= self.M - 1):
            raise ValueError(f"({i}, {j}) is not an interior node of an M={self.M} grid")
        return (i - 1) * (self.M - 1) + (j - 1)

    def interior_coords(self):
        """Coordinate arrays X, Y of shape (M-1, M-1), X[a, b] = (a+1)*h."""
        s = np.arange(1, self.M) * self.h
        return np.meshgrid(s, s, indexing="ij")


def _field_at(field, x, y, weight=None):
    v = np.broadcast_to(np.asarray(field(x, y), dtype=float), x.shape)
    if weight is not None:
        v = v * np.broadcast_to(np.asarray(weight(x, y), dtype=float), x.shape)
    return v


def _check_tensor(coeff, x, y):
    a11 = np.broadcast_to(np.asarray(coeff.a11(x, y), dtype=float), x.shape)
    a22 = np.broadcast_to(np.asarray(coeff.a22(x, y), dtype=float), x.shape)
    if coeff.has_mixed:
        a12 = np.broadcast_to(np.asarray(coeff.a12(x, y), dtype=float), x.shape)
    else:
        a12 = np.zeros_like(a11)
    det = a11 * a22 - a12 * a12
    if a11.min() <= 0.0 or det.min() <= 0.0:
        raise ValueError(
            "coefficient tensor is not symmetric positive definite on the grid "
            f"(min a11 = {a11.min():.3g}, min det = {det.min():.3g})"
        )


def _check_weight(weight, x, y):
    w = np.broadcast_to(np.asarray(weight(x, y), dtype=float), x.shape)
    if w.min() < -1e-12 or w.max() > 1.0 + 1e-12:
        raise ValueError(
            f"weight field leaves [0, 1] on the grid (range [{w.min():.3g}, {w.max():.3g}])"
        )


def assemble_operator(grid: Grid, coeff, c=None, weight=None, terms=_ALL_TERMS):
    """Assemble the interior finite-difference matrix of -div(a grad u) + c u.

    Parameters
    ----------
    grid : Grid
    coeff : diffusion tensor with callable fields a11, a22, a12 and a
        boolean flag has_mixed; each callable maps coordinate arrays to
        values.
    c : callable or None
        Reaction coefficient c(x, y); None means c = 0.
    weight : callable or None
        Scalar field multiplying the tensor and reaction at every
        evaluation point; must take values in [0, 1] (checked at grid
        nodes).
    terms : tuple of str
        Which parts to assemble, a subset of ("xx", "yy", "mixed").  The
        alternating-direction split assembles the single-direction parts
        with this restriction; the default assembles everything.

    Returns
    -------
    scipy.sparse.csr_matrix of shape (n, n), n = (M-1)^2, symmetric.
    """
    unknown = set(terms) - set(_ALL_TERMS)
    if unknown:
        raise ValueError(f"unknown assembly terms {sorted(unknown)}")
    M, h = grid.M, grid.h
    n = M - 1
    ii, jj = np.meshgrid(np.arange(1, M), np.arange(1, M), indexing="ij")
    x = ii * h
    y = jj * h
    lin = (ii - 1) * n + (jj - 1)

    _check_tensor(coeff, x, y)
    if weight is not None:
        _check_weight(weight, x, y)

    rows, cols, vals = [], [], []
    diag = np.zeros((n, n))

    def couple(di, dj, val):
        # keep only entries whose neighbour (i+di, j+dj) is interior;
        # couplings into the Dirichlet boundary are dropped
        ok = (ii + di >= 1) & (ii + di <= M - 1) & (jj + dj >= 1) & (jj + dj <= M - 1)
        rows.append(lin[ok])
        cols.append((lin + di * n + dj)[ok])
        vals.append(val[ok])

    inv_h2 = 1.0 / (h * h)
    if "xx" in terms:
        ae = _field_at(coeff.a11, x + 0.5 * h, y, weight)
        aw = _field_at(coeff.a11, x - 0.5 * h, y, weight)
        diag += (ae + aw) * inv_h2
        couple(1, 0, -ae * inv_h2)
        couple(-1, 0, -aw * inv_h2)
    if "yy" in terms:
        an = _field_at(coeff.a22, x, y + 0.5 * h, weight)
        as_ = _field_at(coeff.a22, x, y - 0.5 * h, weight)
        diag += (an + as_) * inv_h2
        couple(0, 1, -an * inv_h2)
        couple(0, -1, -as_ * inv_h2)
    if "mixed" in terms and coeff.has_mixed:
        ce = _field_at(coeff.a12, x + h, y, weight)
        cw = _field_at(coeff.a12, x - h, y, weight)
        cn = _field_at(coeff.a12, x, y + h, weight)
        cs = _field_at(coeff.a12, x, y - h, weight)
        quarter = 0.25 * inv_h2
        couple(1, 1, -(ce + cn) * quarter)
        couple(-1, -1, -(cw + cs) * quarter)
        couple(1, -1, (ce + cs) * quarter)
        couple(-1, 1, (cw + cn) * quarter)
    if c is not None:
        diag += _field_at(c, x, y, weight)

    rows.append(lin.ravel())
    cols.append(lin.ravel())
    vals.append(diag.ravel())
    A = sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(grid.n_interior, grid.n_interior),
    ).tocsr()
    A.eliminate_zeros()
    return A


def apply_operator(op, v):
    """Matrix-vector product op @ v with a shape check on v."""
    v = np.asarray(v, dtype=float)
    if v.shape != (op.shape[1],):
        raise ValueError(f"vector has shape {v.shape}, operator expects ({op.shape[1]},)")
    return op @ v
