"""Model parameters, refinement bookkeeping and run configuration."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .exceptions import ConfigurationError

DOMAIN = (-1.0, 1.0)
DOMAIN_LENGTH = DOMAIN[1] - DOMAIN[0]
FINAL_TIME = 2.0
MIN_LEVEL, MAX_LEVEL = 1, 30


class Problem(str, Enum):
    IBVP1 = "ibvp1"  # periodic, advection-diffusion
    IBVP2 = "ibvp2"  # time-dependent Dirichlet, pure diffusion


class Discretization(str, Enum):
    PST = "pst"  # bilinear tensor-product slabs
    SST = "sst"  # linear simplices, diagonal split of each quad


class BCTreatment(str, Enum):
    EXACT = "exact"
    MODIFIED = "modified"


def _coerce(enum_cls, value):
    if isinstance(value, enum_cls):
        return value
    text = str(value).strip().lower().replace("d-", "").replace("-", "")
    for member in enum_cls:
        if text == member.value:
            return member
    choices = ", ".join(m.value for m in enum_cls)
    raise ConfigurationError(f"invalid {enum_cls.__name__} {value!r}; expected one of {choices}")


@dataclass(frozen=True)
class ModelParams:
    """Advection velocity ``a`` and diffusion coefficient ``k``."""

    a: float = 1.0
    k: float = 0.0

    def __post_init__(self):
        a, k = float(self.a), float(self.k)
        if not (math.isfinite(a) and math.isfinite(k)):
            raise ConfigurationError(f"parameters must be finite, got a={a}, k={k}")
        if a < 0 or k < 0:
            raise ConfigurationError(f"a and k must be nonnegative, got a={a}, k={k}")
        if a == 0 and k == 0:
            raise ConfigurationError("a and k must not both be zero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "k", k)

    @property
    def peclet(self) -> float:
        return peclet_label(self)


def peclet_label(params: ModelParams) -> float:
    """Display label of the Peclet number, ``a / (10 k)``.

    Zero for pure diffusion and ``inf`` for pure advection. The solver never
    uses this value.
    """
    if params.a == 0:
        return 0.0
    if params.k == 0:
        return math.inf
    return params.a / (10.0 * params.k)


def elements_for_level(level: int) -> int:
    """Number of subdivisions on refinement ``level``: ``2**(level - 1)``."""
    if isinstance(level, bool) or int(level) != level:
        raise ConfigurationError(f"refinement level must be an integer, got {level!r}")
    level = int(level)
    if not MIN_LEVEL <= level <= MAX_LEVEL:
        raise ConfigurationError(f"refinement level {level} outside [{MIN_LEVEL}, {MAX_LEVEL}]")
    return 2 ** (level - 1)


def n_dof(n_ts: int, n_ex: int) -> int:
    """Degrees-of-freedom count used as the cost measure of one simulation."""
    if n_ts < 1 or n_ex < 2:
        raise ConfigurationError(f"need n_ts >= 1 and n_ex >= 2, got n_ts={n_ts}, n_ex={n_ex}")
    return 2 * n_ts * (n_ex - 1)


@dataclass(frozen=True)
class RefinementLevels:
    """Spatial level ``l`` and temporal level ``m`` of one simulation."""

    l: int
    m: int
    t_final: float = FINAL_TIME

    def __post_init__(self):
        elements_for_level(self.l)
        elements_for_level(self.m)
        if not (self.t_final > 0 and math.isfinite(self.t_final)):
            raise ConfigurationError(f"t_final must be positive, got {self.t_final}")
        object.__setattr__(self, "l", int(self.l))
        object.__setattr__(self, "m", int(self.m))

    @property
    def n_ex(self) -> int:
        return elements_for_level(self.l)

    @property
    def n_ts(self) -> int:
        return elements_for_level(self.m)

    @property
    def dx(self) -> float:
        return DOMAIN_LENGTH / self.n_ex

    @property
    def dt(self) -> float:
        return self.t_final / self.n_ts

    @property
    def n_dof(self) -> int:
        return n_dof(self.n_ts, self.n_ex)


@dataclass(frozen=True)
class RunConfig:
    problem: Problem
    discretization: Discretization
    params: ModelParams
    levels: RefinementLevels
    bc_treatment: BCTreatment = BCTreatment.EXACT
    stabilized: bool = True

    def __post_init__(self):
        object.__setattr__(self, "problem", _coerce(Problem, self.problem))
        object.__setattr__(self, "discretization", _coerce(Discretization, self.discretization))
        object.__setattr__(self, "bc_treatment", _coerce(BCTreatment, self.bc_treatment))
        if not isinstance(self.params, ModelParams):
            raise ConfigurationError("params must be a ModelParams instance")
        if not isinstance(self.levels, RefinementLevels):
            raise ConfigurationError("levels must be a RefinementLevels instance")
        if self.bc_treatment is BCTreatment.MODIFIED and self.problem is not Problem.IBVP2:
            raise ConfigurationError("the modified boundary treatment only applies to ibvp2")
        if self.problem is Problem.IBVP2 and self.params.a != 0:
            raise ConfigurationError("ibvp2 is a pure diffusion problem; a must be 0")
        if self.bc_treatment is BCTreatment.MODIFIED and self.params.k == 0:
            raise ConfigurationError("the modified boundary treatment needs k > 0")

    @property
    def periodic(self) -> bool:
        return self.problem is Problem.IBVP1

    def with_levels(self, l: int, m: int) -> "RunConfig":
        levels = RefinementLevels(l, m, self.levels.t_final)
        return RunConfig(self.problem, self.discretization, self.params, levels,
                         self.bc_treatment, self.stabilized)


# parameter sets of the advection-diffusion sweep, from pure diffusion to pure advection
IBVP1_PARAMETER_SETS = (
    ModelParams(a=0.0, k=0.1),
    ModelParams(a=1.0, k=0.1),
    ModelParams(a=1.0, k=0.01),
    ModelParams(a=1.0, k=0.001),
    ModelParams(a=1.0, k=0.0001),
    ModelParams(a=1.0, k=0.0),
)
