"""Spatial and temporal convergence lines from a small error surface.

Quadrilateral slabs are second order in dx and, away from the spatial error
floor, third order in dt. The grid here is small enough to run in seconds,
so only the trends are visible.
"""
from stfem import (ModelParams, RefinementLevels, RunConfig, extract_curve, keep_all,
                   pairwise_orders, run_grid)

template = RunConfig("ibvp1", "pst", ModelParams(1.0, 0.001), RefinementLevels(4, 4))
surface = run_grid(template, keep_all, l_range=range(4, 11), m_range=range(4, 9))

for kind in ("spatial", "temporal"):
    series = extract_curve(surface, kind)
    print(kind, "cells:", series.cells)
    print("  errors:", " ".join(f"{e:.2e}" for e in series.errors))
    print("  pairwise orders:", " ".join(f"{o:.2f}" for o in pairwise_orders(series)))
