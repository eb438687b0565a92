"""Element mesh of a single space-time slab.

Lattice nodes are numbered with the spatial index running fastest and the
lower time level before the upper one, so node ``(i, level)`` has id
``level * (n_ex + 1) + i``. Degrees of freedom follow the same ordering; with
periodic identification the last spatial node of each level is folded onto
the first.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigurationError
from .params import DOMAIN, Discretization, ModelParams, RefinementLevels, _coerce


@dataclass(frozen=True, eq=False)
class SlabMesh:
    n_ex: int
    x: np.ndarray
    t_l: float
    t_u: float
    kind: Discretization
    elements: np.ndarray  # (n_elem, 4) quads or (n_elem, 3) triangles, counterclockwise
    dof_map: np.ndarray  # lattice node id -> dof index
    periodic: bool

    @property
    def dt(self) -> float:
        return self.t_u - self.t_l

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def n_nodes_per_level(self) -> int:
        """Solution values stored per time level."""
        return self.n_ex if self.periodic else self.n_ex + 1

    @property
    def n_dofs(self) -> int:
        return 2 * self.n_nodes_per_level

    @property
    def node_coords(self) -> np.ndarray:
        """(x, t) of every lattice node, shape ``(2 * (n_ex + 1), 2)``."""
        xs = np.concatenate([self.x, self.x])
        ts = np.repeat([self.t_l, self.t_u], self.n_ex + 1)
        return np.column_stack([xs, ts])

    def lower_dofs(self) -> np.ndarray:
        return np.arange(self.n_nodes_per_level)

    def upper_dofs(self) -> np.ndarray:
        return self.n_nodes_per_level + np.arange(self.n_nodes_per_level)

    def boundary_dofs(self) -> np.ndarray:
        """Dofs at x = -1 and x = 1 on both levels (empty when periodic)."""
        if self.periodic:
            return np.array([], dtype=int)
        n = self.n_nodes_per_level
        return np.array([0, n - 1, n, 2 * n - 1])

    def element_areas(self) -> np.ndarray:
        xy = self.node_coords[self.elements]
        x, t = xy[..., 0], xy[..., 1]
        # shoelace formula, positive for counterclockwise vertices
        return 0.5 * np.sum(x * np.roll(t, -1, axis=1) - np.roll(x, -1, axis=1) * t, axis=1)


def build_slab(levels: RefinementLevels, slab_index: int, kind, periodic: bool) -> SlabMesh:
    """Mesh of slab ``slab_index`` covering ``[slab_index * dt, (slab_index + 1) * dt]``."""
    kind = _coerce(Discretization, kind)
    if not 0 <= slab_index < levels.n_ts:
        raise ConfigurationError(f"slab index {slab_index} outside [0, {levels.n_ts})")
    n_ex = levels.n_ex
    x = np.linspace(DOMAIN[0], DOMAIN[1], n_ex + 1)
    t_l = slab_index * levels.dt
    t_u = t_l + levels.dt

    i = np.arange(n_ex)
    stride = n_ex + 1
    ll, lr, ur, ul = i, i + 1, stride + i + 1, stride + i
    if kind is Discretization.PST:
        elements = np.column_stack([ll, lr, ur, ul])
    else:
        # split along the diagonal (x_i, t_l) -> (x_{i+1}, t_u)
        lower = np.column_stack([ll, lr, ur])
        upper = np.column_stack([ll, ur, ul])
        elements = np.stack([lower, upper], axis=1).reshape(-1, 3)

    per_level = n_ex if periodic else n_ex + 1
    spatial = np.arange(n_ex + 1)
    if periodic:
        spatial = spatial % n_ex
    dof_map = np.concatenate([spatial, per_level + spatial])
    return SlabMesh(n_ex, x, t_l, t_u, kind, elements, dof_map, bool(periodic))


def diagonal_alignment(levels: RefinementLevels, params: ModelParams) -> bool:
    """Whether simplex diagonals follow the characteristics ``x - a t = const``."""
    return levels.dt == levels.dx and params.a == 1.0
