"""Exception hierarchy shared by the solver and the study driver."""


class StfemError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(StfemError, ValueError):
    """Invalid parameters, levels or run configuration."""


class DegenerateInputError(StfemError, ValueError):
    """Input for which a formula is singular (e.g. zero diffusion in the modified BC)."""


class GeometryError(StfemError, ValueError):
    """Zero-area or wrongly oriented element."""


class AssemblyError(StfemError, ValueError):
    """Inconsistent data handed to slab assembly."""


class SolverError(StfemError, RuntimeError):
    """Linear solve failed on a given slab."""

    def __init__(self, message, slab_index=None):
        super().__init__(message)
        self.slab_index = slab_index


class DivergenceError(SolverError):
    """Non-finite values appeared during time marching."""


class MetricError(StfemError, ValueError):
    """Field and exact solution are incompatible."""


class ExtractionError(StfemError, KeyError):
    """A cell required by a convergence curve is missing from the surface."""

    def __init__(self, message, cell=None):
        super().__init__(message)
        self.cell = cell

    def __str__(self):
        return str(self.args[0])


class OrderUndefinedError(StfemError, ValueError):
    """Observed order cannot be fitted (zero or non-finite errors)."""
