"""Where does a walker with power-law coins end up?

With gamma_j = 1/(3 + j) on the half line and the balanced start
(1/sqrt2, 1/sqrt2), after 200 steps almost all probability sits in two
places: a power-law bump at the origin and a sharp geometric peak at the
ballistic front.  This script prints the profile as a text histogram and
writes the table to two_peak_profile.csv for external plotting.
"""
from pathlib import Path

import numpy as np

from qwalk import PowerLaw, distribution, evolve

n = 200
phi = (1 / np.sqrt(2), 1 / np.sqrt(2))
mu = distribution(evolve(phi, n, "h1", PowerLaw(3.0)))

out = Path(__file__).with_suffix(".csv")
with out.open("w") as fh:
    fh.write("# walk=h1\n# coin=powerlaw:3\n# n=200\nj,prob\n")
    for j, p in zip(mu.sites, mu.values):
        fh.write(f"{j},{p!r}\n")

bins = np.array_split(np.arange(n + 1), 20)
peak = max(mu[j] for j in range(n + 1))
for b in bins:
    p = max(mu[int(j)] for j in b)
    print(f"j={b[0]:3d}..{b[-1]:3d} | " + "#" * int(60 * p / peak) + f" {p:.2e}")
print(f"mass in j<=10: {sum(mu[j] for j in range(11)):.4f}")
print(f"mass in j>=n-10: {sum(mu[j] for j in range(n - 10, n + 1)):.4f}")
print(f"table written to {out}")
