"""Solve the periodic advection-diffusion problem once and look at the errors.

Run with ``python3 demos/01_single_run.py``.
"""
import numpy as np

from stfem import ExactSolution, ModelParams, RefinementLevels, RunConfig, march, run_cell

params = ModelParams(a=1.0, k=0.01)
config = RunConfig("ibvp1", "pst", params, RefinementLevels(l=7, m=7))

# march all slabs and compare the final trace with the decaying cosine wave
field = march(config)
x, uh = field.nodes()
u = ExactSolution("ibvp1", params)(x, field.time)
print(f"t = {field.time}, max nodal deviation = {np.max(np.abs(uh - u)):.3e}")

# the same run reduced to the two final-time error measures
pair = run_cell(config)
print(f"e = {pair.e:.4e}  E = {pair.E:.4e}  ndof = {pair.n_dof}")
