"""Final-time error measures."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analytic import ExactSolution
from .exceptions import MetricError
from .params import DOMAIN, DOMAIN_LENGTH, ModelParams, Problem

GAUSS_2 = np.array([-1.0, 1.0]) / np.sqrt(3.0)


@dataclass(frozen=True)
class ErrorPair:
    e: float  # relative L2 error
    E: float  # nodal error measure
    n_dof: int

    def __post_init__(self):
        if not (np.isfinite(self.e) and np.isfinite(self.E)) or self.e < 0 or self.E < 0:
            raise MetricError(f"error measures must be finite and nonnegative, got e={self.e}, E={self.E}")


def _check(field, exact: ExactSolution, params: ModelParams, n_ex: int):
    if exact.params != params:
        raise MetricError("exact solution was built for different parameters")
    if field.periodic != (exact.problem is Problem.IBVP1):
        raise MetricError(f"field periodicity does not match problem {exact.problem.value}")
    if field.n_ex != n_ex:
        raise MetricError(f"field has {field.n_ex} elements, expected {n_ex}")


def _prefactor(exact: ExactSolution, t):
    return 1.0 / exact.norm_at(t)


def l2_error(field, exact: ExactSolution, params: ModelParams, n_ex: int) -> float:
    """Relative L2 error at the field's time, two Gauss points per element.

    The discrete solution between nodes is the linear interpolant of the
    nodal values, which is the trace of both element families on the upper
    slab edge.
    """
    _check(field, exact, params, n_ex)
    dx = DOMAIN_LENGTH / n_ex
    xn, un = field.nodes()
    left = DOMAIN[0] + dx * np.arange(n_ex)
    xq = left[:, None] + 0.5 * dx * (1.0 + GAUSS_2[None, :])
    weights = 0.5 * (1.0 - GAUSS_2)  # weight of the left node in the linear interpolant
    uh = weights[None, :] * un[:-1, None] + (1.0 - weights[None, :]) * un[1:, None]
    diff = exact(xq, field.time) - uh
    return float(_prefactor(exact, field.time) * np.sqrt(0.5 * dx * np.sum(diff ** 2)))


def nodal_error(field, exact: ExactSolution, params: ModelParams, n_ex: int) -> float:
    """Nodal error over all nodes except the last one."""
    _check(field, exact, params, n_ex)
    dx = DOMAIN_LENGTH / n_ex
    xn, un = field.nodes()
    diff = exact(xn[:n_ex], field.time) - un[:n_ex]
    return float(_prefactor(exact, field.time) * np.sqrt(dx * np.sum(diff ** 2)))


def evaluate(field, exact: ExactSolution, params: ModelParams, n_ex: int, n_dof: int) -> ErrorPair:
    return ErrorPair(l2_error(field, exact, params, n_ex), nodal_error(field, exact, params, n_ex), n_dof)
