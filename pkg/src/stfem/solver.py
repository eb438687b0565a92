"""Slab-by-slab time marching."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg as spla

from .analytic import ExactSolution, dirichlet_bc, modified_dirichlet_lower
from .assembly import DirichletData, SlabOperator, SlabSystem
from .exceptions import DivergenceError, SolverError
from .mesh import build_slab
from .params import BCTreatment, RunConfig

RESIDUAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SolutionField:
    """Nodal values on one time level.

    For periodic fields ``values`` excludes the last node (it equals the
    first); ``x`` always matches ``values`` in length.
    """

    x: np.ndarray
    values: np.ndarray
    time: float
    periodic: bool

    def __post_init__(self):
        if len(self.x) != len(self.values):
            raise ValueError("x and values must have the same length")
        if not np.all(np.isfinite(self.values)):
            raise DivergenceError("solution contains non-finite values")

    @property
    def n_ex(self) -> int:
        return len(self.values) if self.periodic else len(self.values) - 1

    def nodes(self):
        """All ``n_ex + 1`` node positions and values, periodic copy appended."""
        if not self.periodic:
            return self.x, self.values
        dx = self.x[1] - self.x[0]
        return np.append(self.x, self.x[-1] + dx), np.append(self.values, self.values[0])

    def __call__(self, xq):
        """Piecewise-linear interpolant of the nodal values."""
        xn, un = self.nodes()
        return np.interp(xq, xn, un)


class FactorizedSlab:
    """A slab operator with its LU factorization, reusable across slabs."""

    def __init__(self, operator: SlabOperator):
        self.operator = operator
        try:
            self.lu = spla.splu(operator.matrix)
        except RuntimeError as exc:  # scipy raises RuntimeError on exact singularity
            raise SolverError(f"slab matrix is singular: {exc}") from exc

    def solve(self, rhs, slab_index=None):
        x = self.lu.solve(rhs)
        if not np.all(np.isfinite(x)):
            raise DivergenceError(f"non-finite values on slab {slab_index}", slab_index)
        return x


def solve_linear(system: SlabSystem) -> np.ndarray:
    """Direct sparse solve of one slab system, with a relative residual check."""
    matrix, rhs = system.matrix, np.asarray(system.rhs, dtype=float)
    try:
        lu = spla.splu(matrix.tocsc())
    except RuntimeError as exc:
        raise SolverError(f"pivot breakdown: {exc}") from exc
    x = lu.solve(rhs)
    _check_residual(matrix, x, rhs)
    return x


def _check_residual(matrix, x, rhs, slab_index=None):
    norm_b = np.linalg.norm(rhs)
    res = np.linalg.norm(matrix @ x - rhs)
    if not np.isfinite(res) or res > RESIDUAL_TOL * max(norm_b, np.finfo(float).tiny):
        raise SolverError(f"relative residual {res / max(norm_b, 1e-300):.3e} exceeds {RESIDUAL_TOL}",
                          slab_index)


def _initial_values(config: RunConfig, x, initial):
    if initial is None:
        return ExactSolution(config.problem, config.params).initial(x)
    if callable(initial):
        return np.asarray(initial(x), dtype=float) * np.ones_like(x)
    return np.full_like(x, float(initial))


def boundary_data(config: RunConfig, t_l: float, t_u: float) -> DirichletData | None:
    """Dirichlet values for a slab, or ``None`` for periodic problems."""
    if config.periodic:
        return None
    params = config.params
    upper = float(dirichlet_bc(params, t_u))
    if config.bc_treatment is BCTreatment.MODIFIED:
        lower = modified_dirichlet_lower(params, t_u, t_u - t_l)
    else:
        lower = float(dirichlet_bc(params, t_l))
    return DirichletData(lower, upper)


def march(config: RunConfig, initial=None, check_residual: bool = False,
          callback=None) -> SolutionField:
    """Solve all slabs up to the final time and return the last upper trace.

    ``initial`` overrides the problem's initial condition with a constant or a
    callable of ``x``. ``callback(slab_index, field)`` is invoked after every
    slab.
    """
    levels = config.levels
    mesh = build_slab(levels, 0, config.discretization, config.periodic)
    factorized = FactorizedSlab(SlabOperator(mesh, config.params, config.stabilized))
    operator = factorized.operator
    n = mesh.n_nodes_per_level
    x = mesh.x[:n]
    values = _initial_values(config, x, initial)
    upper = mesh.upper_dofs()
    dt = levels.dt
    for slab in range(levels.n_ts):
        t_l = slab * dt
        t_u = (slab + 1) * dt
        rhs = operator.rhs(values, boundary_data(config, t_l, t_u))
        sol = factorized.solve(rhs, slab)
        if check_residual:
            _check_residual(operator.matrix, sol, rhs, slab)
        values = sol[upper]
        if callback is not None:
            callback(slab, SolutionField(x, values.copy(), t_u, config.periodic))
    return SolutionField(x, values, levels.n_ts * dt, config.periodic)
