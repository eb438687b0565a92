"""Convergence-study driver: refinement grid, error surfaces, curves and orders."""
from __future__ import annotations

import csv
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .analytic import ExactSolution
from .error_metrics import ErrorPair, evaluate
from .exceptions import ConfigurationError, ExtractionError, OrderUndefinedError, StfemError
from .params import MAX_LEVEL, RunConfig, n_dof as count_dofs, elements_for_level
from .solver import march

LEVEL_RANGE = range(4, 19)
SENTINEL = 1e-15
SURFACE_HEADER = ("l", "m", "e_lm", "E_lm", "ndof")
CURVE_KINDS = ("spatial", "temporal", "diagonal", "diagonal-offset-4", "two-thirds")
TWO_THIRDS_CELLS = ((5, 4), (8, 6), (11, 8), (14, 10), (17, 12))


def default_predicate(l: int, m: int) -> bool:
    """Skip the finest combinations; keeps every curve extracted from the full grid."""
    return l + m <= 30


def keep_all(l: int, m: int) -> bool:
    return True


def sum_predicate(limit: int) -> Callable[[int, int], bool]:
    def predicate(l, m):
        return l + m <= limit
    predicate.__name__ = f"sum_le_{limit}"
    return predicate


@dataclass(frozen=True)
class CellFailure:
    """A cell whose run raised; kept in the surface instead of aborting the grid."""

    message: str


def run_cell(config: RunConfig) -> ErrorPair:
    """March one configuration to the final time and measure both errors."""
    field_ = march(config)
    exact = ExactSolution(config.problem, config.params)
    return evaluate(field_, exact, config.params, config.levels.n_ex, config.levels.n_dof)


def _run_cell_safe(config):
    try:
        return run_cell(config)
    except (StfemError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return CellFailure(f"{type(exc).__name__}: {exc}")


@dataclass
class ErrorSurface:
    l_range: tuple
    m_range: tuple
    cells: dict = field(default_factory=dict)  # (l, m) -> ErrorPair | CellFailure
    template: RunConfig | None = None

    def kept(self):
        return sorted(self.cells)

    def omitted(self):
        return [(l, m) for l in self.l_range for m in self.m_range if (l, m) not in self.cells]

    def failures(self):
        return {c: v for c, v in sorted(self.cells.items()) if isinstance(v, CellFailure)}

    def pair(self, l: int, m: int) -> ErrorPair:
        value = self.cells.get((l, m))
        if value is None:
            raise ExtractionError(f"cell (l={l}, m={m}) is not part of the surface", (l, m))
        if isinstance(value, CellFailure):
            raise ExtractionError(f"cell (l={l}, m={m}) failed: {value.message}", (l, m))
        return value

    def to_csv(self, path, sentinel: bool = False):
        """Write ``l,m,e_lm,E_lm,ndof`` rows sorted by (l, m), atomically."""
        rows = []
        for l in self.l_range:
            for m in self.m_range:
                value = self.cells.get((l, m))
                nd = count_dofs(elements_for_level(m), elements_for_level(l))
                if value is None:
                    if sentinel:
                        rows.append((l, m, SENTINEL, SENTINEL, nd))
                elif isinstance(value, CellFailure):
                    rows.append((l, m, math.nan, math.nan, nd))
                else:
                    rows.append((l, m, value.e, value.E, value.n_dof))
        with atomic_writer(path) as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(SURFACE_HEADER)
            for l, m, e, E, nd in rows:
                writer.writerow([l, m, _fmt(e), _fmt(E), nd])

    @classmethod
    def from_csv(cls, path) -> "ErrorSurface":
        """Read a surface file; sentinel rows are treated as omitted cells."""
        cells = {}
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or tuple(h.strip() for h in header) != SURFACE_HEADER:
                raise ConfigurationError(f"{path}: expected header {','.join(SURFACE_HEADER)}")
            for row in reader:
                if not row:
                    continue
                l, m = int(row[0]), int(row[1])
                e, E, nd = float(row[2]), float(row[3]), int(row[4])
                if e == SENTINEL and E == SENTINEL:
                    continue
                if math.isnan(e) or math.isnan(E):
                    cells[(l, m)] = CellFailure("failed in the originating study")
                else:
                    cells[(l, m)] = ErrorPair(e, E, nd)
        if not cells:
            raise ConfigurationError(f"{path}: surface contains no cells")
        ls = [c[0] for c in cells]
        ms = [c[1] for c in cells]
        return cls(tuple(range(min(ls), max(ls) + 1)), tuple(range(min(ms), max(ms) + 1)), cells)


def _fmt(value):
    return "nan" if math.isnan(value) else format(value, ".17g")


class atomic_writer:
    """Context manager writing to a temporary file renamed over ``path`` on success."""

    def __init__(self, path):
        self.path = os.fspath(path)

    def __enter__(self):
        directory = os.path.dirname(os.path.abspath(self.path))
        os.makedirs(directory, exist_ok=True)
        fd, self.tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".csv")
        self.fh = os.fdopen(fd, "w", newline="")
        return self.fh

    def __exit__(self, exc_type, exc, tb):
        self.fh.close()
        if exc_type is None:
            os.replace(self.tmp, self.path)
        else:
            os.unlink(self.tmp)
        return False


def _check_range(name, values):
    values = tuple(int(v) for v in values)
    if not values:
        raise ConfigurationError(f"{name} is empty")
    if min(values) < 1 or max(values) > MAX_LEVEL:
        raise ConfigurationError(f"{name} {values[0]}..{values[-1]} outside [1, {MAX_LEVEL}]")
    return values


def run_grid(template: RunConfig, predicate=default_predicate, l_range=LEVEL_RANGE,
             m_range=LEVEL_RANGE, workers: int = 1) -> ErrorSurface:
    """Run every (l, m) cell kept by ``predicate``.

    Failures are stored per cell as :class:`CellFailure`. With ``workers > 1``
    cells run in separate processes; the result does not depend on the
    execution order.
    """
    l_range = _check_range("l_range", l_range)
    m_range = _check_range("m_range", m_range)
    cells = [(l, m) for l in l_range for m in m_range if predicate(l, m)]
    configs = [template.with_levels(l, m) for l, m in cells]
    if workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_cell_safe, configs))
    else:
        results = [_run_cell_safe(c) for c in configs]
    return ErrorSurface(l_range, m_range, dict(zip(cells, results)), template)


@dataclass(frozen=True)
class ConvergenceSeries:
    kind: str
    cells: tuple
    deltas: np.ndarray
    errors: np.ndarray

    def __len__(self):
        return len(self.deltas)

    def to_csv(self, path):
        with atomic_writer(path) as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(("delta", "error"))
            for d, e in zip(self.deltas, self.errors):
                writer.writerow((_fmt(d), _fmt(e)))


def curve_cells(kind: str, l_range, m_range, fixed=None):
    """(l, m) index set of a named curve, clipped to the surface ranges.

    ``spatial`` and ``temporal`` hold the other level at ``fixed``, which
    defaults to the finest level available.
    """
    l_set, m_set = set(l_range), set(m_range)
    if kind == "spatial":
        m = max(m_range) if fixed is None else fixed
        return [(l, m) for l in range(4, 13) if l in l_set]
    if kind == "temporal":
        l = max(l_range) if fixed is None else fixed
        return [(l, m) for m in range(4, 13) if m in m_set]
    if kind == "diagonal":
        return [(l, l) for l in range(4, 16) if l in l_set and l in m_set]
    if kind == "diagonal-offset-4":
        return [(l, l - 2) for l in range(7, 17) if l in l_set and l - 2 in m_set]
    if kind == "two-thirds":
        return [(l, m) for l, m in TWO_THIRDS_CELLS if l in l_set and m in m_set]
    raise ConfigurationError(f"unknown curve kind {kind!r}; expected one of {', '.join(CURVE_KINDS)}")


def extract_curve(surface: ErrorSurface, kind: str, fixed=None, measure: str = "e",
                  cells=None) -> ConvergenceSeries:
    """Extract a convergence line from ``surface``.

    ``measure`` selects the relative L2 error (``"e"``) or the nodal error
    (``"E"``). The abscissa is ``dx`` for the spatial curve and ``dt``
    otherwise.
    """
    if measure not in ("e", "E"):
        raise ConfigurationError(f"measure must be 'e' or 'E', got {measure!r}")
    if cells is None:
        cells = curve_cells(kind, surface.l_range, surface.m_range, fixed)
    elif kind not in CURVE_KINDS:
        raise ConfigurationError(f"unknown curve kind {kind!r}")
    if not cells:
        raise ExtractionError(f"curve {kind!r} has no cells within the surface ranges")
    t_final = surface.template.levels.t_final if surface.template is not None else 2.0
    deltas, errors = [], []
    for l, m in cells:
        pair = surface.pair(l, m)
        deltas.append(2.0 / elements_for_level(l) if kind == "spatial" else t_final / elements_for_level(m))
        errors.append(pair.e if measure == "e" else pair.E)
    return ConvergenceSeries(kind, tuple(cells), np.array(deltas), np.array(errors))


def _log_data(deltas, errors):
    deltas = np.asarray(deltas, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if np.any(~np.isfinite(errors)) or np.any(errors <= 0):
        raise OrderUndefinedError("errors must be finite and positive to fit an order")
    return np.log(deltas), np.log(errors)


def fit_order(deltas, errors) -> float:
    """Least-squares slope of log(error) against log(delta)."""
    if len(deltas) < 2:
        raise OrderUndefinedError("need at least two points to fit an order")
    x, y = _log_data(deltas, errors)
    x = x - x.mean()
    return float(np.dot(x, y - y.mean()) / np.dot(x, x))


def observed_order(series: ConvergenceSeries, window: int = 4) -> float:
    """Fitted order over the last ``window`` points of the series."""
    if window < 2:
        raise ConfigurationError(f"window must be at least 2, got {window}")
    if len(series) < window:
        raise ConfigurationError(f"series has {len(series)} points, window is {window}")
    return fit_order(series.deltas[-window:], series.errors[-window:])


def pairwise_orders(series: ConvergenceSeries) -> np.ndarray:
    """Order between consecutive points; ``log2`` of the error ratio for halved steps."""
    x, y = _log_data(series.deltas, series.errors)
    return np.diff(y) / np.diff(x)
