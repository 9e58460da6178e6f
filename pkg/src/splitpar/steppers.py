"""Implicit time steppers for the semidiscrete problem U' + A U = F.

All schemes advance one step tau with a fixed factored implicit part.
The theta scheme treats the unsplit operator,

    (I + theta tau A) U+ = U - (1 - theta) tau A U + tau F,

with F evaluated as the theta-weighted combination
theta F(t+tau) + (1-theta) F(t); theta = 1 is backward Euler, theta = 1/2
the trapezoidal rule.  The splitting schemes replace the single solve by
one solve per part.  For two parts the classic theta = 1 and theta = 1/2
variants are

    (I + tau A1) V* = (I - tau A2) V + tau F,
    (I + tau A2) V+ = V* + tau A2 V,

and

    (I + tau/2 A1) V* = (I - tau/2 A1 - tau A2) V + tau F,
    (I + tau/2 A2) V+ = V* + tau/2 A2 V.

The general m-stage factored scheme reads

    (I + theta tau A1) W1 = (I - (1-theta) tau A1 - tau sum_{i>=2} A_i) W + tau F,
    (I + theta tau Ak) Wk = W(k-1) + theta tau Ak W,      k = 2..m,

and is algebraically the theta scheme perturbed by B (W+ - W) with the
splitting-error operator B of bh_apply.  The corrected variant cancels
the leading term of that perturbation by shifting the forcing,

    F_hat = F + B (Z - Z_prev),

which needs the two most recent states; the first step is taken with one
unsplit trapezoidal step.

run() drives any of these over [0, T], measures errors against the exact
solution of a manufactured problem, and reports the discrete norm

    max_{1 <= n <= N_T} h * || U^n - u(t_n) ||_2,

the maximum over all steps as well, and wall-clock time.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .linsolve import LinearSolver, factor
from .mesh import assemble_operator
from .operators import SplitOperators, bh_apply, build_adi_split, build_dd_split
from .problems import sample_on_grid

__all__ = [
    "METHODS",
    "StepperConfig",
    "RunReport",
    "theta_step",
    "douglas_rachford_step",
    "douglas_step",
    "dg_step",
    "dk_step",
    "run",
]

METHODS = ("cn", "be", "dr", "douglas", "dg_adi", "dk_adi", "dg_dd", "dk_dd")

# methods whose theta is fixed by definition
_FIXED_THETA = {"cn": 0.5, "be": 1.0, "dr": 1.0, "douglas": 0.5}


def theta_step(A, theta, tau, u, f, factorization=None):
    """One theta-scheme step for the unsplit operator A."""
    fact = factorization or factor(A, theta * tau)
    rhs = u - (1.0 - theta) * tau * (A @ u) + tau * f
    return fact.solve(rhs)


def _two_part(split):
    if split.m != 2:
        raise ValueError(f"this scheme splits into exactly two parts, got m={split.m}")
    return split.parts


def douglas_rachford_step(split, tau, v, f, factorizations=None):
    """One step of the two-part theta = 1 splitting scheme."""
    A1, A2 = _two_part(split)
    facts = factorizations or (factor(A1, tau), factor(A2, tau))
    a2v = A2 @ v
    v1 = facts[0].solve(v - tau * a2v + tau * f)
    return facts[1].solve(v1 + tau * a2v)


def douglas_step(split, tau, v, f, factorizations=None):
    """One step of the two-part theta = 1/2 splitting scheme."""
    A1, A2 = _two_part(split)
    half = 0.5 * tau
    facts = factorizations or (factor(A1, half), factor(A2, half))
    a2v = A2 @ v
    v1 = facts[0].solve(v - half * (A1 @ v) - tau * a2v + tau * f)
    return facts[1].solve(v1 + half * a2v)


def dg_step(split, theta, tau, w, f, factorizations=None):
    """One step of the m-stage factored scheme."""
    if not 0.0 < theta <= 1.0:
        raise ValueError(f"theta must lie in (0, 1], got {theta}")
    parts = split.parts
    facts = factorizations or tuple(factor(Ak, theta * tau) for Ak in parts)
    a1w = parts[0] @ w
    rest = split.full @ w - a1w  # sum_{i >= 2} A_i w, exact for m = 1
    stage = facts[0].solve(w - (1.0 - theta) * tau * a1w - tau * rest + tau * f)
    for k in range(1, len(parts)):
        stage = facts[k].solve(stage + theta * tau * (parts[k] @ w))
    return stage


def dk_step(split, theta, tau, z, z_prev, f, factorizations=None):
    """One corrected m-stage step; needs the previous state z_prev."""
    if z_prev is None:
        raise ValueError(
            "the corrected scheme needs the two most recent states; take one "
            "unsplit trapezoidal step first to produce them"
        )
    f_hat = f + bh_apply(split, theta, tau, z - z_prev)
    return dg_step(split, theta, tau, z, f_hat, factorizations)


@dataclass
class StepperConfig:
    """What to run: method name, step parameters, solver backend.

    theta defaults per method (1/2 for cn/douglas and the factored
    schemes, 1 for be/dr); tau defaults to 1/M; n_steps defaults to
    ceil(T / tau).  store_states keeps every state including the initial
    one, for trajectory comparisons.
    """

    method: str
    theta: Optional[float] = None
    tau: Optional[float] = None
    n_steps: Optional[int] = None
    solver: LinearSolver = field(default_factory=LinearSolver)
    store_states: bool = False

    def resolved_theta(self) -> float:
        fixed = _FIXED_THETA.get(self.method)
        if fixed is not None:
            if self.theta is not None and self.theta != fixed:
                raise ValueError(
                    f"method {self.method!r} has theta = {fixed} by definition, got {self.theta}"
                )
            return fixed
        theta = 0.5 if self.theta is None else self.theta
        if not 0.0 < theta <= 1.0:
            raise ValueError(f"theta must lie in (0, 1], got {theta}")
        return theta


@dataclass
class RunReport:
    """Outcome of one time integration against the exact solution."""

    method: str
    M: int
    coefficient: str
    theta: float
    tau: float
    n_steps: int
    xi: object = None
    q: Optional[int] = None
    step_errors: Optional[np.ndarray] = None
    error: float = math.nan
    error_all_steps: float = math.nan
    seconds: float = 0.0
    states: Optional[list] = None


def run(problem, grid, config: StepperConfig, decomposition=None) -> RunReport:
    """Integrate a manufactured problem and measure errors.

    decomposition is required by the domain-decomposition methods and
    ignored by the rest.  The reported error excludes the final time
    (the norm is a maximum over n = 1..N_T with N_T = n_steps - 1);
    error_all_steps includes it.
    """
    method = config.method
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    theta = config.resolved_theta()
    tau = config.tau if config.tau is not None else grid.h
    if not tau > 0:
        raise ValueError(f"time step must be positive, got {tau}")
    T = problem.final_time
    n_steps = config.n_steps if config.n_steps is not None else math.ceil(T / tau - 1e-9)
    if n_steps < 1:
        raise ValueError(f"need at least one step, got n_steps={n_steps}")

    t_start = time.perf_counter()

    split = None
    if method in ("cn", "be"):
        A = assemble_operator(grid, problem.diffusion, problem.c)
        fact = factor(A, theta * tau, config.solver)
    elif method in ("dr", "douglas", "dg_adi", "dk_adi"):
        split = build_adi_split(grid, problem.diffusion, problem.c)
    elif method in ("dg_dd", "dk_dd"):
        if decomposition is None:
            raise ValueError(f"method {method!r} needs a strip decomposition")
        split = build_dd_split(grid, problem.diffusion, decomposition, problem.c)

    if split is not None:
        if method == "dr":
            facts = tuple(factor(Ak, tau, config.solver) for Ak in split.parts)
        else:
            # douglas has theta = 1/2, the factored schemes shift by theta tau
            facts = tuple(factor(Ak, theta * tau, config.solver) for Ak in split.parts)
    corrected = method in ("dk_adi", "dk_dd")
    if corrected:
        cn_fact = factor(split.full, 0.5 * tau, config.solver)

    u = sample_on_grid(problem.u0, grid)
    f_prev = sample_on_grid(problem.forcing, grid, 0.0)
    states = [u.copy()] if config.store_states else None
    step_errors = np.empty(n_steps)
    z_prev = None
    h = grid.h

    for n in range(n_steps):
        t_next = (n + 1) * tau
        f_next = sample_on_grid(problem.forcing, grid, t_next)
        f_theta = theta * f_next + (1.0 - theta) * f_prev
        if method in ("cn", "be"):
            u_new = theta_step(A, theta, tau, u, f_theta, fact)
        elif method == "dr":
            u_new = douglas_rachford_step(split, tau, u, f_next, facts)
        elif method == "douglas":
            u_new = douglas_step(split, tau, u, f_theta, facts)
        elif method in ("dg_adi", "dg_dd"):
            u_new = dg_step(split, theta, tau, u, f_theta, facts)
        else:
            if n == 0:
                # startup: one unsplit trapezoidal step
                f_half = 0.5 * (f_next + f_prev)
                u_new = theta_step(split.full, 0.5, tau, u, f_half, cn_fact)
            else:
                u_new = dk_step(split, theta, tau, u, z_prev, f_theta, facts)
            z_prev = u
        exact = sample_on_grid(problem.u, grid, t_next)
        step_errors[n] = h * np.linalg.norm(u_new - exact)
        u = u_new
        f_prev = f_next
        if config.store_states:
            states.append(u.copy())

    seconds = time.perf_counter() - t_start
    interior = step_errors[:-1] if n_steps > 1 else step_errors
    return RunReport(
        method=method,
        M=grid.M,
        coefficient=getattr(problem, "name", "") or problem.diffusion.name,
        theta=theta,
        tau=tau,
        n_steps=n_steps,
        xi=decomposition.xi if decomposition is not None else None,
        q=decomposition.q if decomposition is not None else None,
        step_errors=step_errors,
        error=float(interior.max()),
        error_all_steps=float(step_errors.max()),
        seconds=seconds,
        states=states,
    )
