"""Benchmark diffusion tensors and manufactured reaction-diffusion problems.

The parabolic model problem is

    u_t - div(a grad u) + c u = f   on (0, 1)^2 x (0, T],
    u = 0 on the boundary,          u(x, y, 0) = u0(x, y),

with a symmetric positive definite tensor a(x, y).  All benchmarks share
the exact solution

    u(x, y, t) = sin(2 pi t) sin(2 pi x) sin(2 pi y),

which vanishes on the boundary and at t = 0, and c = 0; the forcing f is
derived analytically from the product rule,

    f = u_t - (a11 u_x + a12 u_y)_x - (a12 u_x + a22 u_y)_y + c u,

so every tensor carries its first partial derivatives in closed form.

Five coefficient families are provided under the names "a1".."a5":
constant, smooth oscillatory, piecewise-defined (continuously
differentiable across the interface), anisotropic diagonal, and a full
tensor with constant off-diagonal entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = [
    "DiffusionTensor",
    "ManufacturedProblem",
    "COEFFICIENT_NAMES",
    "make_coefficient",
    "make_problem",
    "sample_on_grid",
]

TWO_PI = 2.0 * np.pi

COEFFICIENT_NAMES = ("a1", "a2", "a3", "a4", "a5")


@dataclass(frozen=True)
class DiffusionTensor:
    """Symmetric 2x2 coefficient field with analytic first partials.

    Every entry and partial is a callable (x, y) -> value broadcasting
    over numpy arrays.  has_mixed marks whether a12 is identically zero;
    splittings that cannot handle mixed-derivative terms key off it.
    """

    name: str
    a11: Callable
    a22: Callable
    a12: Callable
    da11_dx: Callable
    da11_dy: Callable
    da22_dx: Callable
    da22_dy: Callable
    da12_dx: Callable
    da12_dy: Callable
    has_mixed: bool


def _const(v: float) -> Callable:
    def f(x, y):
        return np.full(np.broadcast(x, y).shape, v)

    return f


_zero = _const(0.0)


def _osc(x, y):
    # 1 / (2 + cos(3 pi x) cos(2 pi y)): smooth, range [1/3, 1]
    return 1.0 / (2.0 + np.cos(3.0 * np.pi * x) * np.cos(2.0 * np.pi * y))


def _osc_dx(x, y):
    s = _osc(x, y)
    return 3.0 * np.pi * np.sin(3.0 * np.pi * x) * np.cos(2.0 * np.pi * y) * s * s


def _osc_dy(x, y):
    s = _osc(x, y)
    return 2.0 * np.pi * np.cos(3.0 * np.pi * x) * np.sin(2.0 * np.pi * y) * s * s


def _piecewise(x, y):
    # both branches and their x-derivatives agree at x = 1/2
    left = 1.0 + 0.5 * np.sin(5.0 * np.pi * x) + y**3
    right = 1.5 / (1.0 + (x - 0.5) ** 2) + y**3
    return np.where(x <= 0.5, left, right)


def _piecewise_dx(x, y):
    left = 2.5 * np.pi * np.cos(5.0 * np.pi * x)
    d = x - 0.5
    right = -3.0 * d / (1.0 + d * d) ** 2
    return np.where(x <= 0.5, left, right) + 0.0 * np.asarray(y)


def _piecewise_dy(x, y):
    return 3.0 * y**2 + 0.0 * np.asarray(x)


def make_coefficient(name: str) -> DiffusionTensor:
    """Build one of the named benchmark tensors "a1".."a5"."""
    if name == "a1":
        return DiffusionTensor(
            name=name,
            a11=_const(1.0), a22=_const(1.0), a12=_zero,
            da11_dx=_zero, da11_dy=_zero,
            da22_dx=_zero, da22_dy=_zero,
            da12_dx=_zero, da12_dy=_zero,
            has_mixed=False,
        )
    if name == "a2":
        return DiffusionTensor(
            name=name,
            a11=_osc, a22=_osc, a12=_zero,
            da11_dx=_osc_dx, da11_dy=_osc_dy,
            da22_dx=_osc_dx, da22_dy=_osc_dy,
            da12_dx=_zero, da12_dy=_zero,
            has_mixed=False,
        )
    if name == "a3":
        return DiffusionTensor(
            name=name,
            a11=_piecewise, a22=_piecewise, a12=_zero,
            da11_dx=_piecewise_dx, da11_dy=_piecewise_dy,
            da22_dx=_piecewise_dx, da22_dy=_piecewise_dy,
            da12_dx=_zero, da12_dy=_zero,
            has_mixed=False,
        )
    if name == "a4":
        return DiffusionTensor(
            name=name,
            a11=_osc, a22=_piecewise, a12=_zero,
            da11_dx=_osc_dx, da11_dy=_osc_dy,
            da22_dx=_piecewise_dx, da22_dy=_piecewise_dy,
            da12_dx=_zero, da12_dy=_zero,
            has_mixed=False,
        )
    if name == "a5":
        # off-diagonal 1/4 keeps the tensor uniformly positive definite:
        # a11 = a22 >= 1/3 and det >= 1/9 - 1/16 > 0
        return DiffusionTensor(
            name=name,
            a11=_osc, a22=_osc, a12=_const(0.25),
            da11_dx=_osc_dx, da11_dy=_osc_dy,
            da22_dx=_osc_dx, da22_dy=_osc_dy,
            da12_dx=_zero, da12_dy=_zero,
            has_mixed=True,
        )
    raise ValueError(f"unknown coefficient name {name!r}; expected one of {COEFFICIENT_NAMES}")


@dataclass(frozen=True)
class ManufacturedProblem:
    """A parabolic problem with known exact solution.

    Attributes
    ----------
    diffusion : DiffusionTensor
    c : callable or None
        Reaction coefficient; None means zero.
    u : callable (x, y, t)
        Exact solution.
    u0 : callable (x, y)
        Initial state u(., ., 0).
    forcing : callable (x, y, t)
        Right-hand side matching u exactly.
    elliptic : callable (x, y, t)
        Pointwise value of -div(a grad u) + c u for the exact solution;
        used by consistency tests.
    final_time : float
    """

    diffusion: DiffusionTensor
    c: Optional[Callable]
    u: Callable
    u0: Callable
    forcing: Callable
    elliptic: Callable
    final_time: float = 1.0
    name: str = ""


def make_problem(coeff="a1", final_time: float = 1.0) -> ManufacturedProblem:
    """Benchmark problem with u = sin(2 pi t) sin(2 pi x) sin(2 pi y), c = 0.

    coeff may be a tensor name ("a1".."a5") or a DiffusionTensor.
    """
    tensor = make_coefficient(coeff) if isinstance(coeff, str) else coeff

    def u(x, y, t):
        return np.sin(TWO_PI * t) * np.sin(TWO_PI * x) * np.sin(TWO_PI * y)

    def u0(x, y):
        return np.zeros(np.broadcast(x, y).shape)

    def elliptic(x, y, t):
        st = np.sin(TWO_PI * t)
        sx, cx = np.sin(TWO_PI * x), np.cos(TWO_PI * x)
        sy, cy = np.sin(TWO_PI * y), np.cos(TWO_PI * y)
        u_x = TWO_PI * st * cx * sy
        u_y = TWO_PI * st * sx * cy
        u_xx = -(TWO_PI**2) * st * sx * sy
        u_yy = u_xx
        u_xy = TWO_PI**2 * st * cx * cy
        second = (
            tensor.a11(x, y) * u_xx
            + 2.0 * tensor.a12(x, y) * u_xy
            + tensor.a22(x, y) * u_yy
        )
        first = (tensor.da11_dx(x, y) + tensor.da12_dy(x, y)) * u_x + (
            tensor.da12_dx(x, y) + tensor.da22_dy(x, y)
        ) * u_y
        return -(second + first)

    def forcing(x, y, t):
        u_t = TWO_PI * np.cos(TWO_PI * t) * np.sin(TWO_PI * x) * np.sin(TWO_PI * y)
        return u_t + elliptic(x, y, t)

    return ManufacturedProblem(
        diffusion=tensor,
        c=None,
        u=u,
        u0=u0,
        forcing=forcing,
        elliptic=elliptic,
        final_time=final_time,
        name=tensor.name,
    )


def sample_on_grid(field, grid, t=None):
    """Evaluate a field on the interior nodes, flattened in grid index order.

    field is called as field(X, Y) or field(X, Y, t) when t is given.
    """
    X, Y = grid.interior_coords()
    vals = field(X, Y) if t is None else field(X, Y, t)
    return np.array(np.broadcast_to(np.asarray(vals, dtype=float), X.shape)).ravel()
