"""Space-time finite elements (tensor-product and simplex, time-discontinuous)
for the 1D advection-diffusion equation, with a convergence-study harness."""
from .analytic import ExactSolution, dirichlet_bc, exact_ibvp1, exact_ibvp2, modified_dirichlet_lower
from .assembly import (DirichletData, SlabOperator, SlabSystem, assemble_slab, element_matrix_quad,
                       element_matrix_tri, tau_supg)
from .error_metrics import ErrorPair, l2_error, nodal_error
from .mesh import SlabMesh, build_slab, diagonal_alignment
from .params import (IBVP1_PARAMETER_SETS, BCTreatment, Discretization, ModelParams, Problem,
                     RefinementLevels, RunConfig, elements_for_level, n_dof, peclet_label)
from .solver import SolutionField, march, solve_linear
from .study import (ConvergenceSeries, ErrorSurface, default_predicate, extract_curve, fit_order,
                    keep_all, observed_order, pairwise_orders, run_cell, run_grid)

__version__ = "0.1.0"
