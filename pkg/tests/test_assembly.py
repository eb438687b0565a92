import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import _cross, bilinear_shapes, linear_shapes, quad_matrix_oracle, tri_matrix_oracle
from stfem.assembly import (DirichletData, SlabOperator, assemble_slab, element_matrix_quad,
                            element_matrix_tri, spatial_mass_matrix, tau_supg)
from stfem.exceptions import AssemblyError, GeometryError
from stfem.mesh import build_slab
from stfem.params import ModelParams, RefinementLevels

coef = st.tuples(st.floats(0.0, 2.0), st.floats(0.0, 1.0)).filter(lambda p: p[0] + p[1] > 1e-3)
size = st.floats(1e-3, 1.0)


def test_tau_examples():
    p = ModelParams(1.0, 0.0)
    # only the transient scale for a = 0 pure diffusion at huge dx
    assert tau_supg(ModelParams(0, 1e-12), 1e6, 0.5) == pytest.approx(0.25)
    assert tau_supg(p, 0.25, 0.25) == pytest.approx(0.25 / (2 * np.sqrt(2)))
    assert tau_supg(p, 0.1, 1e-9) < 1e-9
    with pytest.raises(GeometryError):
        tau_supg(p, 0.0, 0.1)


@settings(max_examples=200, deadline=None, derandomize=True)
@given(c=coef, dx=size, dt=size)
def test_quad_matrix_matches_quadrature(c, dx, dt):
    p = ModelParams(*c)
    tau = tau_supg(p, dx, dt)
    ref = quad_matrix_oracle(p.a, p.k, dx, dt, tau)
    got = element_matrix_quad(p, dx, dt, tau)
    assert np.max(np.abs(got - ref)) <= 1e-12 * max(1.0, np.max(np.abs(ref)))


@settings(max_examples=200, deadline=None, derandomize=True)
@given(c=coef, pts=st.lists(st.floats(-1, 1), min_size=6, max_size=6))
def test_tri_matrix_matches_quadrature(c, pts):
    v = np.array(pts).reshape(3, 2)
    area2 = _cross(v[1] - v[0], v[2] - v[0])
    if abs(area2) < 1e-2:
        return
    if area2 < 0:
        v = v[[0, 2, 1]]
    p = ModelParams(*c)
    tau = 0.37
    ref = tri_matrix_oracle(p.a, p.k, v, tau)
    got = element_matrix_tri(p, v, tau)
    assert np.max(np.abs(got - ref)) <= 1e-13 * max(1.0, np.max(np.abs(ref)))


def test_degenerate_and_clockwise_triangles():
    p = ModelParams(1.0, 0.1)
    with pytest.raises(GeometryError):
        element_matrix_tri(p, [[0, 0], [1, 1], [2, 2]], 0.1)
    with pytest.raises(GeometryError):
        element_matrix_tri(p, [[0, 0], [0, 1], [1, 0]], 0.1)


@pytest.mark.parametrize("a, k", [(1.0, 0.0), (0.0, 0.1), (1.0, 0.01)])
def test_constants_in_kernel(a, k):
    p = ModelParams(a, k)
    tau = tau_supg(p, 0.2, 0.1)
    assert np.max(np.abs(element_matrix_quad(p, 0.2, 0.1, tau) @ np.ones(4))) < 1e-14
    tri = [[0, 0], [0.2, 0], [0.2, 0.1]]
    assert np.max(np.abs(element_matrix_tri(p, tri, tau) @ np.ones(3))) < 1e-13


@settings(max_examples=50, deadline=None, derandomize=True)
@given(c=coef, wc=st.lists(st.floats(-2, 2), min_size=3, max_size=3),
       uc=st.lists(st.floats(-2, 2), min_size=3, max_size=3))
def test_linear_fields_agree_between_quad_and_split(c, wc, uc):
    # affine fields are reproduced exactly by both bases, so the bilinear forms coincide
    p = ModelParams(*c)
    dx, dt, tau = 0.3, 0.2, 0.05
    corners = np.array([[0, 0], [dx, 0], [dx, dt], [0, dt]])
    w = wc[0] + wc[1] * corners[:, 0] + wc[2] * corners[:, 1]
    u = uc[0] + uc[1] * corners[:, 0] + uc[2] * corners[:, 1]
    quad = w @ element_matrix_quad(p, dx, dt, tau) @ u
    split = 0.0
    for tri in ([0, 1, 2], [0, 2, 3]):
        split += w[tri] @ element_matrix_tri(p, corners[tri], tau) @ u[tri]
    assert quad == pytest.approx(split, rel=1e-12, abs=1e-13)


def test_shape_oracles_partition_of_unity():
    n, nx, nt = bilinear_shapes(0.03, 0.07, 0.1, 0.2)
    assert n.sum() == pytest.approx(1.0) and abs(nx.sum()) < 1e-14 and abs(nt.sum()) < 1e-14
    n, nx, nt = linear_shapes([[0, 0], [1, 0], [0, 1]], [0.2, 0.3])
    assert n == pytest.approx([0.5, 0.2, 0.3])


@pytest.mark.parametrize("kind", ["pst", "sst"])
def test_system_dimensions(kind):
    lv = RefinementLevels(4, 4)
    p = ModelParams(1.0, 0.01)
    periodic = assemble_slab(build_slab(lv, 0, kind, True), p, np.zeros(8))
    assert periodic.matrix.shape == (16, 16)
    assert len(periodic.constrained) == 0
    dirichlet = assemble_slab(build_slab(lv, 0, kind, False), ModelParams(0, 0.1), np.zeros(9),
                              DirichletData(-1.0, -1.0))
    assert dirichlet.matrix.shape == (18, 18)
    assert len(dirichlet.constrained) == 4


@pytest.mark.parametrize("kind", ["pst", "sst"])
@pytest.mark.parametrize("periodic", [True, False])
def test_constant_patch(kind, periodic):
    # a constant state is reproduced exactly on one slab
    lv = RefinementLevels(5, 4)
    p = ModelParams(0.0, 0.1) if not periodic else ModelParams(1.0, 0.05)
    mesh = build_slab(lv, 0, kind, periodic)
    bc = None if periodic else DirichletData(2.5, 2.5)
    sys_ = assemble_slab(mesh, p, np.full(mesh.n_nodes_per_level, 2.5), bc)
    sol = np.linalg.solve(sys_.matrix.toarray(), sys_.rhs)
    assert np.max(np.abs(sol - 2.5)) < 1e-12


def test_conservation_of_column_sums():
    # with periodic folding, column sums of the element part vanish except for
    # the time-derivative flux; summing all rows of the full system yields
    # int u(t_u) dx = int u(t_l-) dx
    lv = RefinementLevels(5, 5)
    p = ModelParams(1.0, 0.01)
    for kind in ("pst", "sst"):
        op = SlabOperator(build_slab(lv, 0, kind, True), p)
        ones = np.ones(op.mesh.n_dofs)
        mass = spatial_mass_matrix(op.mesh) @ np.ones(op.mesh.n_ex)
        col = ones @ op.full_matrix.toarray()
        n = op.mesh.n_ex
        assert np.max(np.abs(col[:n])) < 1e-13
        assert np.max(np.abs(col[n:] - mass)) < 1e-13


def test_tau_zero_matches_unstabilized():
    lv = RefinementLevels(4, 5)
    p = ModelParams(1.0, 0.01)
    for kind in ("pst", "sst"):
        mesh = build_slab(lv, 0, kind, True)
        a = SlabOperator(mesh, p, stabilized=True, tau=0.0).matrix.toarray()
        b = SlabOperator(mesh, p, stabilized=False).matrix.toarray()
        assert np.array_equal(a, b)


def test_rhs_consistency_errors():
    lv = RefinementLevels(4, 4)
    p = ModelParams(0.0, 0.1)
    periodic = build_slab(lv, 0, "pst", True)
    bounded = build_slab(lv, 0, "pst", False)
    with pytest.raises(AssemblyError):
        assemble_slab(periodic, p, np.zeros(9))
    with pytest.raises(AssemblyError):
        assemble_slab(periodic, p, np.zeros(8), DirichletData(0, 0))
    with pytest.raises(AssemblyError):
        assemble_slab(bounded, p, np.zeros(9))


def test_matrix_independent_of_slab():
    lv = RefinementLevels(4, 4)
    p = ModelParams(1.0, 0.01)
    for kind in ("pst", "sst"):
        a = SlabOperator(build_slab(lv, 0, kind, True), p).matrix
        b = SlabOperator(build_slab(lv, 5, kind, True), p).matrix
        assert np.max(np.abs((a - b).toarray())) < 1e-13


def test_quad_reference_cases():
    from types import SimpleNamespace
    # no transport and no diffusion: only the mass-in-x times d/dt stencil remains
    bare = SimpleNamespace(a=0.0, k=0.0)
    got = element_matrix_quad(bare, 0.25, 0.125, 0.0, stabilized=False)
    assert np.max(np.abs(got - quad_matrix_oracle(0.0, 0.0, 0.25, 0.125, 0.0))) < 1e-13
    p = ModelParams(1.0, 0.1)
    tau = tau_supg(p, 0.25, 0.125)
    got = element_matrix_quad(p, 0.25, 0.125, tau)
    assert np.max(np.abs(got - quad_matrix_oracle(1.0, 0.1, 0.25, 0.125, tau))) < 1e-13
