import numpy as np
import pytest

from stfem.exceptions import ConfigurationError
from stfem.mesh import build_slab, diagonal_alignment
from stfem.params import ModelParams, RefinementLevels


def test_quad_slab_counts():
    # m = 5 gives 16 slabs of width 0.125
    mesh = build_slab(RefinementLevels(4, 5), 0, "pst", periodic=True)
    assert mesh.elements.shape == (8, 4)
    assert mesh.n_dofs == 16
    assert mesh.t_l == 0.0 and mesh.t_u == 0.125


def test_triangle_slab_counts():
    mesh = build_slab(RefinementLevels(4, 4), 0, "sst", periodic=True)
    assert mesh.elements.shape == (16, 3)
    assert mesh.n_dofs == 16


def test_dirichlet_slab_counts():
    mesh = build_slab(RefinementLevels(4, 4), 0, "pst", periodic=False)
    assert mesh.n_dofs == 18
    assert list(mesh.boundary_dofs()) == [0, 8, 9, 17]


def test_last_slab_times():
    mesh = build_slab(RefinementLevels(4, 5), 7, "sst", periodic=False)
    assert mesh.t_u == 1.0
    assert mesh.t_l == pytest.approx(0.875)
    assert build_slab(RefinementLevels(4, 4), 7, "pst", periodic=True).t_u == 2.0
    with pytest.raises(ConfigurationError):
        build_slab(RefinementLevels(4, 4), 8, "pst", periodic=True)


@pytest.mark.parametrize("kind", ["pst", "sst"])
@pytest.mark.parametrize("l, m", [(4, 4), (5, 7), (9, 3)])
def test_areas_and_orientation(kind, l, m):
    lv = RefinementLevels(l, m)
    mesh = build_slab(lv, 1, kind, periodic=False)
    areas = mesh.element_areas()
    assert np.all(areas > 0)
    assert abs(areas.sum() - 2.0 * lv.dt) < 1e-14


def test_split_preserves_nodes():
    lv = RefinementLevels(5, 5)
    quads = build_slab(lv, 2, "pst", periodic=True)
    tris = build_slab(lv, 2, "sst", periodic=True)
    assert set(quads.elements.ravel()) == set(tris.elements.ravel())
    for q, (t1, t2) in zip(quads.elements, tris.elements.reshape(-1, 2, 3)):
        assert set(t1) | set(t2) == set(q)
        # shared diagonal: lower-left and upper-right corners
        assert set(t1) & set(t2) == {q[0], q[2]}


def test_periodic_folding():
    mesh = build_slab(RefinementLevels(3, 3), 0, "pst", periodic=True)
    n = mesh.n_ex
    assert mesh.dof_map[n] == mesh.dof_map[0]
    assert mesh.dof_map[2 * n + 1] == mesh.dof_map[n + 1]


@pytest.mark.parametrize("l, m, a, expected", [(6, 6, 1.0, True), (6, 7, 1.0, False), (6, 6, 0.5, False)])
def test_diagonal_alignment(l, m, a, expected):
    assert diagonal_alignment(RefinementLevels(l, m), ModelParams(a, 0.0)) is expected
