"""Recovering a spectral measure from Schur parameters.

The walk started at (0, R) sees the measure whose Schur parameters are the
power-law coins interleaved with zeros.  We recover its point mass at
theta = 0 and its density from radial limits of the Caratheodory function,
and compare with the closed form.
"""
import numpy as np

from qwalk import Interleaved, PowerLaw, PowerLawModel, SchurFunction, closed_forms, recover_measure

for r in (1.5, 3.0, 10.0):
    f = SchurFunction(Interleaved(PowerLaw(r)))
    m = recover_measure(f, n_grid=256)
    cf = closed_forms(PowerLawModel(r))
    err = np.abs(m.weight - cf.weight(m.theta)).max()
    print(f"r={r:5.1f}  mass at 0: {m.masses[0][1]:.10f} (exact {cf.mass:.10f})  "
          f"max weight error {err:.1e}  total mass {m.total_mass():.12f}")
