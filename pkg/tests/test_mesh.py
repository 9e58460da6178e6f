"""Assembly tests against an independent dense-loop oracle and analytic operators."""

import numpy as np
import pytest

from splitpar.mesh import Grid, apply_operator, assemble_operator
from splitpar.problems import make_coefficient, make_problem

ALL_NAMES = ("a1", "a2", "a3", "a4", "a5")


def oracle_dense(M, coeff, c=None, weight=None):
    """Scalar-loop reference assembly of the same stencil, kept deliberately
    naive: flux differences with edge-midpoint coefficients, mixed terms on
    the diagonal 2h cross with node-centered coefficients."""
    h = 1.0 / M
    n = M - 1
    w = weight if weight is not None else (lambda x, y: 1.0)
    A = np.zeros((n * n, n * n))

    def idx(i, j):
        return (i - 1) * n + (j - 1)

    def inside(i, j):
        return 1 <= i <= n and 1 <= j <= n

    for i in range(1, M):
        for j in range(1, M):
            x, y = i * h, j * h
            r = idx(i, j)
            ae = float(coeff.a11(x + h / 2, y)) * float(w(x + h / 2, y))
            aw = float(coeff.a11(x - h / 2, y)) * float(w(x - h / 2, y))
            an = float(coeff.a22(x, y + h / 2)) * float(w(x, y + h / 2))
            as_ = float(coeff.a22(x, y - h / 2)) * float(w(x, y - h / 2))
            A[r, r] += (ae + aw + an + as_) / h**2
            if inside(i + 1, j):
                A[r, idx(i + 1, j)] -= ae / h**2
            if inside(i - 1, j):
                A[r, idx(i - 1, j)] -= aw / h**2
            if inside(i, j + 1):
                A[r, idx(i, j + 1)] -= an / h**2
            if inside(i, j - 1):
                A[r, idx(i, j - 1)] -= as_ / h**2
            if coeff.has_mixed:
                ce = float(coeff.a12(x + h, y)) * float(w(x + h, y))
                cw = float(coeff.a12(x - h, y)) * float(w(x - h, y))
                cn = float(coeff.a12(x, y + h)) * float(w(x, y + h))
                cs = float(coeff.a12(x, y - h)) * float(w(x, y - h))
                s = 1.0 / (4 * h**2)
                if inside(i + 1, j + 1):
                    A[r, idx(i + 1, j + 1)] -= (ce + cn) * s
                if inside(i - 1, j - 1):
                    A[r, idx(i - 1, j - 1)] -= (cw + cs) * s
                if inside(i + 1, j - 1):
                    A[r, idx(i + 1, j - 1)] += (ce + cs) * s
                if inside(i - 1, j + 1):
                    A[r, idx(i - 1, j + 1)] += (cw + cn) * s
            if c is not None:
                A[r, r] += float(c(x, y)) * float(w(x, y))
    return A


def test_grid_rejects_small_M():
    with pytest.raises(ValueError):
        Grid(3)


def test_grid_index_and_node():
    g = Grid(8)
    assert g.h == 0.125
    assert g.n_interior == 49
    assert g.index(1, 1) == 0
    assert g.index(1, 2) == 1
    assert g.index(2, 1) == 7
    assert g.node(2, 3) == (0.25, 0.375)
    with pytest.raises(ValueError):
        g.index(0, 1)
    with pytest.raises(ValueError):
        g.index(1, 8)


def test_constant_laplacian_entries_m4():
    # 5-point Laplacian at h = 1/4: diagonal 4/h^2 = 64, neighbours -16
    g = Grid(4)
    A = assemble_operator(g, make_coefficient("a1")).toarray()
    assert np.allclose(np.diag(A), 64.0)
    center = g.index(2, 2)
    for nb in (g.index(1, 2), g.index(3, 2), g.index(2, 1), g.index(2, 3)):
        assert A[center, nb] == pytest.approx(-16.0)
    assert A[center, g.index(1, 1)] == 0.0


@pytest.mark.parametrize("name", ALL_NAMES)
def test_matches_dense_oracle_m4(name):
    coeff = make_coefficient(name)
    A = assemble_operator(Grid(4), coeff).toarray()
    B = oracle_dense(4, coeff)
    assert np.max(np.abs(A - B)) <= 1e-12 * np.max(np.abs(B))


def test_matches_dense_oracle_with_weight_and_reaction():
    coeff = make_coefficient("a5")

    def weight(x, y):
        return 0.25 * (1.0 + np.sin(3.0 * np.asarray(x)) * np.cos(np.asarray(y)))

    def c(x, y):
        return 1.0 + np.asarray(x) * np.asarray(y)

    A = assemble_operator(Grid(5), coeff, c=c, weight=weight).toarray()
    B = oracle_dense(5, coeff, c=c, weight=weight)
    assert np.max(np.abs(A - B)) <= 1e-12 * np.max(np.abs(B))


def test_apply_constant_one_nonzero_residual_m4():
    # interior-ones vector: rows next to the boundary see the missing
    # neighbours, so the image is nonzero there
    coeff = make_coefficient("a1")
    g = Grid(4)
    A = assemble_operator(g, coeff)
    v = np.ones(g.n_interior)
    out = apply_operator(A, v)
    assert np.max(np.abs(out)) > 0
    assert np.allclose(out, oracle_dense(4, coeff) @ v)


def test_apply_zero_vector():
    g = Grid(4)
    A = assemble_operator(g, make_coefficient("a2"))
    assert np.all(apply_operator(A, np.zeros(g.n_interior)) == 0.0)


def test_apply_shape_mismatch():
    A = assemble_operator(Grid(4), make_coefficient("a1"))
    with pytest.raises(ValueError):
        apply_operator(A, np.ones(5))


def test_laplacian_consistency_ratio():
    # L sin(2 pi x) sin(2 pi y) = 8 pi^2 sin sin; halving h quarters the error
    coeff = make_coefficient("a1")
    errs = {}
    for M in (32, 64):
        g = Grid(M)
        X, Y = g.interior_coords()
        v = (np.sin(2 * np.pi * X) * np.sin(2 * np.pi * Y)).ravel()
        target = 8 * np.pi**2 * v
        A = assemble_operator(g, coeff)
        errs[M] = np.max(np.abs(A @ v - target))
    ratio = errs[32] / errs[64]
    assert 3.5 <= ratio <= 4.5


@pytest.mark.parametrize("name", ALL_NAMES)
def test_symmetry(name):
    A = assemble_operator(Grid(16), make_coefficient(name))
    d = A - A.T
    scale = np.max(np.abs(A.data))
    assert np.max(np.abs(d.data)) <= 1e-13 * scale if d.nnz else True


@pytest.mark.parametrize("name", ALL_NAMES)
def test_positive_definite(name):
    A = assemble_operator(Grid(16), make_coefficient(name)).toarray()
    smallest = np.linalg.eigvalsh(A)[0]
    assert smallest > 0


def _consistency_errors(name, Ms, exclude_interface):
    problem = make_problem(name)
    t = 0.25
    errs = {}
    for M in Ms:
        g = Grid(M)
        X, Y = g.interior_coords()
        v = problem.u(X, Y, t).ravel()
        target = problem.elliptic(X, Y, t).ravel()
        A = assemble_operator(g, problem.diffusion)
        r = np.abs(A @ v - target).reshape(M - 1, M - 1)
        if exclude_interface:
            x = np.arange(1, M) * g.h
            r = r[np.abs(x - 0.5) > 1.5 * g.h, :]
        errs[M] = r.max()
    return errs


@pytest.mark.parametrize("name", ALL_NAMES)
def test_consistency_order(name):
    # apply A_h to the sampled exact solution, compare with the analytic
    # elliptic term at a time where the t-factor is 1.  The x-derivative of
    # the piecewise coefficient has a kink at x = 0.5, so the interface
    # column (where pointwise consistency drops to first order) is excluded
    # for that tensor, as for its derivative checks.
    errs = _consistency_errors(name, (32, 64, 128), exclude_interface=(name == "a3"))
    order = np.log(errs[32] / errs[128]) / np.log(4.0)
    assert 1.8 <= order <= 2.2


def test_piecewise_interface_column_is_first_order():
    # the jump in the second x-derivative of the piecewise coefficient
    # costs one order exactly on the interface column; pin that down so a
    # silent change of stencil behaviour is caught
    errs = _consistency_errors("a3", (32, 64, 128), exclude_interface=False)
    order = np.log(errs[32] / errs[128]) / np.log(4.0)
    assert 0.8 <= order <= 1.2


def test_weight_additivity():
    coeff = make_coefficient("a4")

    def rho1(x, y):
        return 0.25 * (1.0 + np.sin(3.0 * np.asarray(x)) * np.cos(2.0 * np.asarray(y)))

    def rho2(x, y):
        return 1.0 - rho1(x, y)

    g = Grid(12)
    A1 = assemble_operator(g, coeff, weight=rho1)
    A2 = assemble_operator(g, coeff, weight=rho2)
    A = assemble_operator(g, coeff)
    d = (A1 + A2) - A
    scale = np.max(np.abs(A.data))
    assert (np.max(np.abs(d.data)) if d.nnz else 0.0) <= 1e-13 * scale


def test_zero_weight_gives_zero_matrix():
    A = assemble_operator(
        Grid(6), make_coefficient("a2"), weight=lambda x, y: np.zeros_like(np.asarray(x))
    )
    assert A.nnz == 0


def test_five_point_pattern_without_mixed():
    g = Grid(8)
    A = assemble_operator(g, make_coefficient("a2")).tolil()
    center = g.index(4, 4)
    assert len(A.rows[center]) == 5


def test_nine_point_pattern_with_mixed():
    g = Grid(8)
    A = assemble_operator(g, make_coefficient("a5")).tolil()
    center = g.index(4, 4)
    assert len(A.rows[center]) == 9


def test_rejects_non_spd_tensor():
    bad = make_coefficient("a1")
    bad = type(bad)(
        name="bad",
        a11=lambda x, y: -np.ones(np.broadcast(x, y).shape),
        a22=bad.a22,
        a12=bad.a12,
        da11_dx=bad.da11_dx,
        da11_dy=bad.da11_dy,
        da22_dx=bad.da22_dx,
        da22_dy=bad.da22_dy,
        da12_dx=bad.da12_dx,
        da12_dy=bad.da12_dy,
        has_mixed=False,
    )
    with pytest.raises(ValueError, match="positive definite"):
        assemble_operator(Grid(4), bad)


def test_rejects_out_of_range_weight():
    with pytest.raises(ValueError, match="weight"):
        assemble_operator(
            Grid(4),
            make_coefficient("a1"),
            weight=lambda x, y: 2.0 * np.ones(np.broadcast(x, y).shape),
        )


def test_rejects_unknown_terms():
    with pytest.raises(ValueError, match="terms"):
        assemble_operator(Grid(4), make_coefficient("a1"), terms=("zz",))
