"""Simplex slabs whose diagonals follow the characteristics of pure transport.

With a = 1, k = 0 and dt = dx each triangle diagonal lies on x - t = const,
and the nodal values are exact up to round-off. Breaking the alignment by
one temporal level brings back an ordinary discretization error.
"""
from stfem import ModelParams, RefinementLevels, RunConfig, run_cell
from stfem.mesh import diagonal_alignment

params = ModelParams(1.0, 0.0)
for l, m in [(6, 6), (8, 8), (8, 9)]:
    levels = RefinementLevels(l, m)
    pair = run_cell(RunConfig("ibvp1", "sst", params, levels))
    print(f"l={l} m={m} aligned={diagonal_alignment(levels, params)!s:5}  E = {pair.E:.3e}")
