"""Simulation against the origin and front limit profiles.

For r = 3 and the start (1, 0) the origin keeps c0 = 0.1 of the mass with a
power-law profile and the front keeps c1 = 0.9 with a geometric profile.
Starting orthogonal to l removes the origin part entirely.
"""
from qwalk import PowerLaw, PowerLawModel, compare_profiles, limit_constants

model = PowerLawModel(3.0)
for name, phi in [("(1, 0)", (1.0, 0.0)), ("orthogonal to l", tuple(model.orthogonal_state().vector))]:
    c0, c1 = limit_constants(model, phi)
    cmp = compare_profiles(PowerLaw(3.0), phi, 2000, 40)
    print(f"start {name}: predicted c0={c0:.4f} c1={c1:.4f}; "
          f"simulated partial sums {cmp.c0_partial:.4f} {cmp.c1_partial:.4f}; "
          f"max site residual {cmp.max_residual:.1e}")
    for row in cmp.rows[:3] + cmp.rows[41:44]:
        print(f"   {row.region:6s} j={row.j}: sim {row.simulated:.6f} pred {row.predicted:.6f}")
