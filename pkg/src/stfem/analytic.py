"""Closed-form solutions and boundary data of the two model problems."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import ConfigurationError, DegenerateInputError
from .params import ModelParams, Problem, _coerce


def exact_ibvp1(params: ModelParams, x, t):
    """Periodic advection-diffusion solution ``cos(pi (x - a t)) exp(-k pi^2 t)``."""
    x = np.asarray(x, dtype=float)
    return np.cos(np.pi * (x - params.a * t)) * np.exp(-params.k * np.pi ** 2 * t)


def exact_ibvp2(params: ModelParams, x, t):
    """Heat-equation solution ``cos(pi x) exp(-k pi^2 t)`` with Dirichlet data."""
    if params.a != 0:
        raise ConfigurationError(f"ibvp2 requires a = 0, got a={params.a}")
    x = np.asarray(x, dtype=float)
    return np.cos(np.pi * x) * np.exp(-params.k * np.pi ** 2 * t)


def dirichlet_bc(params: ModelParams, t):
    """Boundary value ``b(t) = -exp(-k pi^2 t)`` at ``x = -1`` and ``x = 1``."""
    if np.any(np.asarray(t) < 0):
        raise ConfigurationError("boundary data is only defined for t >= 0")
    return -np.exp(-params.k * np.pi ** 2 * np.asarray(t, dtype=float))


def modified_dirichlet_lower(params: ModelParams, t_u: float, dt: float) -> float:
    """Lower-level boundary value of a slab ending at ``t_u``.

    Chosen so that the mean of the linear-in-time boundary trace equals the
    exact time average of ``b`` over the slab::

        (b(t_u) + value) / 2 == (1/dt) * integral of b over [t_u - dt, t_u]
    """
    if params.k <= 0:
        raise DegenerateInputError("modified boundary value needs k > 0; use the exact value for k = 0")
    if dt <= 0:
        raise DegenerateInputError(f"slab height must be positive, got {dt}")
    s = params.k * np.pi ** 2 * dt
    # 1 + 2 (1 - e^s) / s, written with expm1 to keep precision for small s
    factor = 1.0 - 2.0 * np.expm1(s) / s
    return float(factor * np.exp(-params.k * np.pi ** 2 * t_u))


@dataclass(frozen=True)
class ExactSolution:
    """Exact solution of one model problem, callable as ``u(x, t)``."""

    problem: Problem
    params: ModelParams

    def __post_init__(self):
        object.__setattr__(self, "problem", _coerce(Problem, self.problem))
        if self.problem is Problem.IBVP2 and self.params.a != 0:
            raise ConfigurationError(f"ibvp2 requires a = 0, got a={self.params.a}")

    @property
    def function(self) -> Callable:
        return exact_ibvp1 if self.problem is Problem.IBVP1 else exact_ibvp2

    def __call__(self, x, t):
        return self.function(self.params, x, t)

    def initial(self, x):
        return self(x, 0.0)

    def norm_at(self, t: float) -> float:
        """L2 norm of ``u(., t)`` on [-1, 1]; both problems give ``exp(-k pi^2 t)``."""
        return float(np.exp(-self.params.k * np.pi ** 2 * t))


def pde_residual(u: Callable, params: ModelParams, x, t, h: float = 1e-4):
    """Central-difference residual of ``u_t + a u_x - k u_xx``."""
    u_t = (u(x, t + h) - u(x, t - h)) / (2 * h)
    u_x = (u(x + h, t) - u(x - h, t)) / (2 * h)
    u_xx = (u(x + h, t) - 2 * u(x, t) + u(x - h, t)) / h ** 2
    return u_t + params.a * u_x - params.k * u_xx
