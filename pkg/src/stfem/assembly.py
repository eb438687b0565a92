"""SUPG-stabilized, time-discontinuous Galerkin assembly on one slab.

Per slab the discrete problem is: find ``u`` such that for all test ``w``

    int_Q  w (u_t + a u_x) + k w_x u_x  dQ
  + sum_e tau int_Qe (w_t + a w_x)(u_t + a u_x) dQ
  + int_{Omega_l} w(t_l+) (u(t_l+) - u(t_l-)) dx  =  0.

The diffusion term is absent from the SUPG residual since second spatial
derivatives of (bi)linear elements vanish element-wise.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .exceptions import AssemblyError, GeometryError
from .mesh import SlabMesh
from .params import Discretization, ModelParams


def tau_supg(params: ModelParams, dx: float, dt: float) -> float:
    """Stabilization parameter combining transient, advective and diffusive scales.

    ``tau = ((2/dt)^2 + (2a/dx)^2 + 9 (4k/dx^2)^2) ** -0.5``
    """
    if dx <= 0 or dt <= 0:
        raise GeometryError(f"element sizes must be positive, got dx={dx}, dt={dt}")
    a, k = params.a, params.k
    return float(((2.0 / dt) ** 2 + (2.0 * a / dx) ** 2 + 9.0 * (4.0 * k / dx ** 2) ** 2) ** -0.5)


def _line_matrices(h):
    """Mass, first-derivative (int phi_i phi_j') and stiffness matrices of a linear 1D element."""
    mass = h / 6.0 * np.array([[2.0, 1.0], [1.0, 2.0]])
    deriv = 0.5 * np.array([[-1.0, 1.0], [-1.0, 1.0]])
    stiff = 1.0 / h * np.array([[1.0, -1.0], [-1.0, 1.0]])
    return mass, deriv, stiff


# tensor index (ix, it) -> counterclockwise local node: (0,0) (1,0) (1,1) (0,1)
_QUAD_ORDER = np.array([0, 2, 3, 1])


def _tensor(x_part, t_part):
    """4x4 quad matrix with entries ``x_part[ix, jx] * t_part[it, jt]``."""
    full = np.einsum("ac,bd->abcd", x_part, t_part).reshape(4, 4)
    return full[np.ix_(_QUAD_ORDER, _QUAD_ORDER)]


def element_matrix_quad(params: ModelParams, dx: float, dt: float, tau: float,
                        stabilized: bool = True) -> np.ndarray:
    """Exact element matrix of the bilinear element ``[0, dx] x [0, dt]``.

    Rows are test functions, columns trial functions, both in counterclockwise
    node order starting at ``(0, 0)``. With ``stabilized=False`` the SUPG part
    is skipped entirely.
    """
    if dx <= 0 or dt <= 0:
        raise GeometryError(f"element sizes must be positive, got dx={dx}, dt={dt}")
    a, k = params.a, params.k
    mx, cx, kx = _line_matrices(dx)
    mt, ct, kt = _line_matrices(dt)
    galerkin = _tensor(mx, ct) + a * _tensor(cx, mt) + k * _tensor(kx, mt)
    if not stabilized:
        return galerkin
    supg = (_tensor(mx, kt)
            + a * _tensor(cx, ct.T)
            + a * _tensor(cx.T, ct)
            + a * a * _tensor(kx, mt))
    return galerkin + tau * supg


def _tri_matrices(params, coords, tau, stabilized=True):
    """Batched exact element matrices for triangles ``coords`` of shape (n, 3, 2)."""
    coords = np.asarray(coords, dtype=float)
    e1 = coords[:, 1] - coords[:, 0]
    e2 = coords[:, 2] - coords[:, 0]
    det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    area = 0.5 * det
    scale = np.abs(coords).max(axis=(1, 2)) + 1.0
    if np.any(area <= 1e-14 * scale ** 2):
        raise GeometryError("degenerate or clockwise triangle")
    # gradients of the barycentric coordinates
    gx = np.stack([e1[:, 1] - e2[:, 1], e2[:, 1], -e1[:, 1]], axis=1) / det[:, None]
    gt = np.stack([e2[:, 0] - e1[:, 0], -e2[:, 0], e1[:, 0]], axis=1) / det[:, None]
    a, k = params.a, params.k
    stream = gt + a * gx
    galerkin = (area / 3.0)[:, None, None] * np.broadcast_to(stream[:, None, :], (len(area), 3, 3))
    galerkin = galerkin + k * area[:, None, None] * gx[:, :, None] * gx[:, None, :]
    if not stabilized:
        return galerkin
    supg = area[:, None, None] * stream[:, :, None] * stream[:, None, :]
    return galerkin + tau * supg


def element_matrix_tri(params: ModelParams, vertices, tau: float, stabilized: bool = True) -> np.ndarray:
    """Exact element matrix of a linear space-time triangle.

    ``vertices`` holds three counterclockwise ``(x, t)`` points.
    """
    vertices = np.asarray(vertices, dtype=float)
    if vertices.shape != (3, 2):
        raise GeometryError(f"expected 3 vertices of shape (3, 2), got {vertices.shape}")
    return _tri_matrices(params, vertices[None], tau, stabilized)[0]


def spatial_mass_matrix(mesh: SlabMesh) -> sp.csr_matrix:
    """Consistent mass matrix of the piecewise-linear trace on one time level."""
    n = mesh.n_nodes_per_level
    mass, _, _ = _line_matrices(mesh.dx)
    i = np.arange(mesh.n_ex)
    nodes = np.column_stack([i, i + 1])
    if mesh.periodic:
        nodes = nodes % mesh.n_ex
    rows = np.repeat(nodes, 2, axis=1).ravel()
    cols = np.tile(nodes, (1, 2)).ravel()
    data = np.tile(mass.ravel(), mesh.n_ex)
    return sp.coo_matrix((data, (rows, cols)), shape=(n, n)).tocsr()


@dataclass(frozen=True)
class DirichletData:
    """Strongly imposed boundary values on the lower and upper level of a slab."""

    lower: float
    upper: float


@dataclass(frozen=True, eq=False)
class SlabSystem:
    matrix: sp.csc_matrix
    rhs: np.ndarray
    mesh: SlabMesh
    constrained: np.ndarray


class SlabOperator:
    """Slab matrix after boundary elimination, plus the pieces needed to build right-hand sides.

    For constant coefficients on uniform slabs the matrix does not depend on
    the slab index, so one operator serves a whole time march.
    """

    def __init__(self, mesh: SlabMesh, params: ModelParams, stabilized: bool = True, tau=None):
        self.mesh = mesh
        self.params = params
        self.tau = tau_supg(params, mesh.dx, mesh.dt) if tau is None else float(tau)
        self.stabilized = stabilized
        n = mesh.n_dofs
        self.galerkin_full = self._element_part(stabilized)
        self.jump = spatial_mass_matrix(mesh)
        lower = mesh.lower_dofs()
        nl = len(lower)
        # lower-level mass matrix in the (lower, lower) block
        jump_full = sp.bmat([[self.jump, None], [None, sp.csr_matrix((n - nl, n - nl))]], format="csr")
        self.full_matrix = (self.galerkin_full + jump_full).tocsr()

        self.constrained = mesh.boundary_dofs()
        free = np.ones(n)
        free[self.constrained] = 0.0
        keep = sp.diags(free)
        fixed = sp.diags(1.0 - free)
        self.coupling = (keep @ self.full_matrix[:, self.constrained]).tocsr()
        self.matrix = (keep @ self.full_matrix @ keep + fixed).tocsc()
        self._lower = lower

    def _element_part(self, stabilized):
        mesh, params = self.mesh, self.params
        if mesh.kind is Discretization.PST:
            ke = element_matrix_quad(params, mesh.dx, mesh.dt, self.tau, stabilized)
            local = np.broadcast_to(ke, (len(mesh.elements), 4, 4))
        else:
            coords = mesh.node_coords[mesh.elements]
            local = _tri_matrices(params, coords, self.tau, stabilized)
        dofs = mesh.dof_map[mesh.elements]
        nloc = dofs.shape[1]
        rows = np.repeat(dofs, nloc, axis=1).ravel()
        cols = np.tile(dofs, (1, nloc)).ravel()
        n = mesh.n_dofs
        return sp.coo_matrix((np.asarray(local).ravel(), (rows, cols)), shape=(n, n)).tocsr()

    def rhs(self, previous_upper, bc: DirichletData | None = None) -> np.ndarray:
        """Right-hand side from the previous upper trace and, if not periodic, boundary data."""
        prev = np.asarray(getattr(previous_upper, "values", previous_upper), dtype=float)
        mesh = self.mesh
        if prev.shape != (mesh.n_nodes_per_level,):
            raise AssemblyError(
                f"previous trace has shape {prev.shape}, mesh expects ({mesh.n_nodes_per_level},)")
        if mesh.periodic and bc is not None:
            raise AssemblyError("periodic slab does not take Dirichlet data")
        if not mesh.periodic and bc is None:
            raise AssemblyError("non-periodic slab needs Dirichlet data")
        rhs = np.zeros(mesh.n_dofs)
        rhs[self._lower] = self.jump @ prev
        if bc is not None:
            g = np.array([bc.lower, bc.lower, bc.upper, bc.upper], dtype=float)
            rhs -= self.coupling @ g
            rhs[self.constrained] = g
        return rhs

    def system(self, previous_upper, bc: DirichletData | None = None) -> SlabSystem:
        return SlabSystem(self.matrix, self.rhs(previous_upper, bc), self.mesh, self.constrained)


def assemble_slab(mesh: SlabMesh, params: ModelParams, previous_upper,
                  bc: DirichletData | None = None, stabilized: bool = True, tau=None) -> SlabSystem:
    """Assemble the linear system of one slab.

    ``previous_upper`` holds the nodal values at ``t_l-`` (the initial data on
    the first slab). ``bc`` is ``None`` for periodic meshes and a
    :class:`DirichletData` otherwise.
    """
    return SlabOperator(mesh, params, stabilized, tau).system(previous_upper, bc)
