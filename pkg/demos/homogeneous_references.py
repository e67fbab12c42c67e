"""Constant coins: ballistic spreading and geometric localization.

On the full line the rescaled position converges to an explicit density supported on (-rho, rho).
On the half line a fraction of the mass stays at the wall with geometric
decay in j.  Both serve as independent checks of the simulator.
"""
from qwalk import decay_fit, homogeneous_limits, weak_limit_tv

print(f"full line, gamma=1/2: TV distance at n=2000 = {weak_limit_tv(0.5, (1, 0), 'd', 2000):.4f}")
for kind in ("h1", "h2"):
    lim = homogeneous_limits(0.5, (1, 0), kind)
    base, nu2 = decay_fit(0.5, (1, 0), kind, 2000)
    print(f"{kind}: localized mass c={lim.c:.4f}; fitted decay base {base:.4f} vs nu^2 {nu2:.4f}")
