"""Shifted-system solvers: block structure, residuals, failure modes.

The direct backend must recover the uncoupled per-strip subsystems of a
subdomain operator as separate LU blocks and still be exactly
equivalent to solving the full system.
"""

import numpy as np
import pytest
from scipy import sparse
from scipy.sparse.linalg import spsolve

from splitpar import (
    Factorization,
    Grid,
    LinearSolver,
    SolverError,
    StepperConfig,
    assemble_operator,
    build_dd_split,
    component_indices,
    factor,
    make_coefficient,
    make_problem,
    make_strip_decomposition,
    run,
    solve,
)


def one_by_one(value):
    return sparse.csr_matrix(np.array([[value]]))


def test_scalar_system_examples():
    fact = factor(one_by_one(4.0), 0.1)
    assert abs(fact.solve(np.array([1.4]))[0] - 1.0) <= 1e-14
    # power-of-two shift makes the example exact
    exact = factor(one_by_one(4.0), 0.25)
    assert exact.solve(np.array([2.0]))[0] == 1.0


def test_zero_shift_passes_the_right_hand_side_through(rng):
    A = assemble_operator(Grid(8), make_coefficient("a2"))
    fact = factor(A, 0.0)
    rhs = rng.normal(size=A.shape[0])
    out = fact.solve(rhs)
    assert np.array_equal(out, rhs)
    out[0] = 123.0  # must be a copy
    assert rhs[0] != 123.0


def test_zero_right_hand_side_gives_zero(rng):
    A = assemble_operator(Grid(8), make_coefficient("a2"))
    fact = factor(A, 0.05)
    assert np.all(fact.solve(np.zeros(A.shape[0])) == 0.0)


def test_iterative_and_direct_backends_agree(rng):
    B = rng.normal(size=(20, 20))
    A = sparse.csr_matrix(B @ B.T + 20.0 * np.eye(20))
    rhs = rng.normal(size=20)
    direct = factor(A, 0.3).solve(rhs)
    iterative = factor(A, 0.3, LinearSolver(kind="cg")).solve(rhs)
    assert np.abs(direct - iterative).max() <= 1e-10 * max(1.0, np.abs(direct).max())


def test_residual_of_the_direct_solve_is_at_rounding_level(rng):
    grid = Grid(40)
    A = assemble_operator(grid, make_coefficient("a2"))
    shift = 0.5 * grid.h
    fact = factor(A, shift)
    rhs = rng.normal(size=A.shape[0])
    x = fact.solve(rhs)
    residual = rhs - (x + shift * (A @ x))
    assert np.linalg.norm(residual) <= 1e-12 * np.linalg.norm(rhs)


def test_factorization_reuse_is_bitwise_stable(rng):
    A = assemble_operator(Grid(16), make_coefficient("a3"))
    fact = factor(A, 0.02)
    rhs1 = rng.normal(size=A.shape[0])
    rhs2 = rng.normal(size=A.shape[0])
    assert np.array_equal(fact.solve(rhs1), factor(A, 0.02).solve(rhs1))
    assert np.array_equal(fact.solve(rhs2), factor(A, 0.02).solve(rhs2))


def test_full_operator_factors_as_a_single_block():
    A = assemble_operator(Grid(8), make_coefficient("a1"))
    fact = factor(A, 0.1)
    assert fact.n_blocks == 1
    assert np.array_equal(fact.block_indices()[0], np.arange(A.shape[0]))


def test_disjoint_strips_factor_as_independent_blocks():
    grid = Grid(32)
    d = make_strip_decomposition(4, "1/16")
    split = build_dd_split(grid, make_coefficient("a2"), d)
    for k in range(2):
        fact = factor(split.parts[k], 0.5 * grid.h)
        assert fact.n_blocks == 4
        blocks = sorted(fact.block_indices(), key=lambda idx: idx[0])
        for l in range(4):
            assert np.array_equal(blocks[l], component_indices(d, grid, k, l))


def test_touching_strips_merge_into_one_block():
    # at the limiting overlap xi = 1/(2q) consecutive strips share a
    # node column, the sparsity graph connects, and one block covers
    # the whole closed subdomain
    grid = Grid(32)
    d = make_strip_decomposition(4, "1/8")
    split = build_dd_split(grid, make_coefficient("a2"), d)
    fact = factor(split.parts[0], 0.5 * grid.h)
    assert fact.n_blocks == 1
    assert np.array_equal(fact.block_indices()[0], np.arange(0, 30 * 31))


def test_block_solve_equals_full_sparse_solve(rng):
    grid = Grid(32)
    d = make_strip_decomposition(4, "1/16")
    split = build_dd_split(grid, make_coefficient("a5"), d)
    shift = 0.5 * grid.h
    A1 = split.parts[0]
    rhs = rng.normal(size=grid.n_interior)
    got = factor(A1, shift).solve(rhs)
    full = sparse.identity(grid.n_interior, format="csr") + shift * A1
    expect = spsolve(full.tocsc(), rhs)
    assert np.abs(got - expect).max() <= 1e-12 * max(1.0, np.abs(expect).max())


def test_iterative_backend_reports_non_convergence(rng):
    A = assemble_operator(Grid(40), make_coefficient("a2"))
    fact = factor(A, 0.5 / 40, LinearSolver(kind="cg", maxiter=2))
    with pytest.raises(SolverError, match="did not reach") as err:
        fact.solve(rng.normal(size=A.shape[0]))
    assert err.value.residual > 0.0


def test_singular_block_raises_a_solver_error():
    with pytest.raises(SolverError, match="block of 1 unknowns"):
        factor(one_by_one(-10.0), 0.1)


def test_configuration_validation(rng):
    with pytest.raises(ValueError, match="solver kind"):
        LinearSolver(kind="lu")
    with pytest.raises(ValueError, match="tolerance"):
        LinearSolver(tol=0.0)
    with pytest.raises(ValueError, match="nonnegative"):
        factor(one_by_one(4.0), -0.1)
    with pytest.raises(ValueError, match="square"):
        Factorization(sparse.csr_matrix(np.ones((2, 3))), 0.1)
    fact = factor(one_by_one(4.0), 0.1)
    with pytest.raises(ValueError, match="shape"):
        fact.solve(np.ones(2))


def test_iterative_backend_has_no_blocks():
    A = assemble_operator(Grid(8), make_coefficient("a1"))
    fact = factor(A, 0.1, LinearSolver(kind="cg"))
    assert fact.n_blocks == 0
    assert solve(fact, np.zeros(A.shape[0])).shape == (A.shape[0],)


def test_backends_agree_over_a_full_time_integration():
    problem = make_problem("a2")
    grid = Grid(40)
    d = make_strip_decomposition(4, "1/8")
    tight = LinearSolver(kind="cg", tol=1e-13)
    direct = run(problem, grid, StepperConfig(method="dg_dd", store_states=True), d)
    iterative = run(
        problem,
        grid,
        StepperConfig(method="dg_dd", solver=tight, store_states=True),
        d,
    )
    gap = max(
        np.abs(a - b).max() for a, b in zip(direct.states, iterative.states)
    )
    assert gap <= 1e-9
