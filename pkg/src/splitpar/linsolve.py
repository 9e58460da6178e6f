"""Solvers for the shifted systems (I + shift * A) x = b.

Stage systems of the splitting schemes have the form I + shift * A where
A is symmetric and acts only on part of the grid: rows of A outside a
subdomain are identically zero, so the system is the identity there and
the unknowns decouple.  factor() partitions the unknowns by connected
components of A's sparsity graph, LU-factors each block once, and reuses
the factorization across all time steps; rows in no block pass the
right-hand side through unchanged.  For a decomposition into disjoint
strips this recovers the independent per-strip subsystems; strips whose
closures touch are merged into one block automatically, so the block
solve is always exactly equivalent to solving the full system.

The iterative backend runs conjugate gradients on the full shifted
system with a relative residual stopping rule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import cg as _cg
from scipy.sparse.linalg import splu

__all__ = ["LinearSolver", "SolverError", "Factorization", "factor", "solve"]


class SolverError(RuntimeError):
    """A linear solve failed; carries the residual when one is available."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class LinearSolver:
    """Backend selection: direct block LU (default) or conjugate gradients.

    tol is the relative residual bound for the iterative backend;
    maxiter defaults to 10 * N at solve time.
    """

    kind: str = "direct"
    tol: float = 1e-12
    maxiter: int | None = None

    def __post_init__(self):
        if self.kind not in ("direct", "cg"):
            raise ValueError(f"unknown solver kind {self.kind!r}; expected 'direct' or 'cg'")
        if not self.tol > 0:
            raise ValueError(f"solver tolerance must be positive, got {self.tol}")


class Factorization:
    """Reusable solver for (I + shift * A) with a fixed shift.

    Direct backend: one LU factorization per connected block of A's
    sparsity graph, identity elsewhere.  Iterative backend: conjugate
    gradients on the assembled shifted matrix.
    """

    def __init__(self, op, shift: float, solver: LinearSolver | None = None):
        if shift < 0:
            raise ValueError(f"shift must be nonnegative, got {shift}")
        self.op = sparse.csr_matrix(op)
        if self.op.shape[0] != self.op.shape[1]:
            raise ValueError(f"operator must be square, got shape {self.op.shape}")
        self.shift = float(shift)
        self.solver = solver or LinearSolver()
        self.n = self.op.shape[0]
        self._blocks = []
        self._shifted = None
        if self.shift == 0.0:
            return
        if self.solver.kind == "cg":
            self._shifted = (sparse.identity(self.n, format="csr") + self.shift * self.op).tocsr()
            return
        n_comp, labels = connected_components(self.op, directed=False)
        row_nnz = np.diff(self.op.indptr)
        comp_active = np.bincount(labels[row_nnz > 0], minlength=n_comp) > 0
        order = np.argsort(labels, kind="stable")
        bounds = np.searchsorted(labels[order], np.arange(n_comp + 1))
        for comp in np.flatnonzero(comp_active):
            idx = order[bounds[comp] : bounds[comp + 1]]
            block = (
                sparse.identity(idx.size, format="csr")
                + self.shift * self.op[idx][:, idx]
            ).tocsc()
            try:
                lu = splu(block)
            except RuntimeError as exc:
                raise SolverError(
                    f"direct factorization failed on a block of {idx.size} unknowns: {exc}"
                ) from exc
            self._blocks.append((idx, lu))

    @property
    def n_blocks(self) -> int:
        return len(self._blocks)

    def block_indices(self):
        """Index arrays of the factored blocks (direct backend)."""
        return [idx for idx, _ in self._blocks]

    def solve(self, rhs):
        """Solve (I + shift * A) x = rhs."""
        rhs = np.asarray(rhs, dtype=float)
        if rhs.shape != (self.n,):
            raise ValueError(f"rhs has shape {rhs.shape}, expected ({self.n},)")
        if self.shift == 0.0:
            return rhs.copy()
        if self.solver.kind == "cg":
            return self._solve_cg(rhs)
        x = rhs.copy()
        for idx, lu in self._blocks:
            x[idx] = lu.solve(rhs[idx])
        return x

    def _solve_cg(self, rhs):
        S = self._shifted
        maxiter = self.solver.maxiter or 10 * self.n
        x, info = _cg(S, rhs, rtol=self.solver.tol, atol=0.0, maxiter=maxiter)
        residual = np.linalg.norm(S @ x - rhs)
        if info != 0:
            scale = np.linalg.norm(rhs) or 1.0
            raise SolverError(
                f"conjugate gradients did not reach relative residual {self.solver.tol:g} "
                f"in {maxiter} iterations (got {residual / scale:.3g})",
                residual=residual,
            )
        return x


def factor(op, shift: float, solver: LinearSolver | None = None) -> Factorization:
    """Factor (I + shift * A) for repeated solves; see Factorization."""
    return Factorization(op, shift, solver)


def solve(factorization: Factorization, rhs):
    """Solve with a previously computed factorization."""
    return factorization.solve(rhs)
