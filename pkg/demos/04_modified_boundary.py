"""Time-dependent Dirichlet data with and without the modified lower value.

On the heat problem with decaying boundary values, replacing the lower
boundary value of each slab by one that reproduces the slab mean of the
boundary data lowers the simplex error and lifts the quadrilateral
temporal order.
"""
from stfem import ModelParams, RefinementLevels, RunConfig, fit_order, run_cell

params = ModelParams(0.0, 0.1)
levels_m = range(3, 8)
for disc in ("pst", "sst"):
    for bc in ("exact", "modified"):
        errors = [run_cell(RunConfig("ibvp2", disc, params, RefinementLevels(12, m), bc)).e
                  for m in levels_m]
        dts = [2.0 / 2 ** (m - 1) for m in levels_m]
        print(f"{disc} {bc:8}  order in dt = {fit_order(dts[:3], errors[:3]):.2f}  "
              f"finest e = {errors[-1]:.3e}")
