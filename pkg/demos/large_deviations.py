"""Exponential decay of the lag behind the front.

Started orthogonal to l, the walker stays within eps*n of the front except
with probability decaying like exp(n eps log tau^2).  These probabilities
fall far below double precision, so walks run in gmpy2 arithmetic and
tail sums are accumulated in the log domain.
"""
from qwalk import ld_estimate

for row in ld_estimate(3.0, [0.1, 0.2, 0.4, 0.6], (400, 800, 1600)):
    print(f"eps={row.eps:.1f}  fitted {row.slope:+.6f}  theory {row.theory:+.6f}  rel.err {row.rel_error:.1e}")
