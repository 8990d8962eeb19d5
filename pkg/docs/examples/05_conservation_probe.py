"""
Example 5: The F + G Conservation Law

Sweeps F(t) + G(t) = pi/4 over the default grid, then recovers the
probability integral from F alone and compares it with direct quadrature.
"""

import math

from wallislab import gauss_truncated
from wallislab.ode_probe import probability_integral_via_F, sweep_conservation


def main():
    for report in sweep_conservation(1e-10):
        status = "ok" if report.within_tolerance else "VIOLATED"
        print(f"t={report.t:<22} F={report.F.value:.12f} G={report.G.value:.12f} "
              f"deviation={report.sum_deviation:.2e} {status}")

    for t in (0.5, 1.0, 2.0, math.inf):
        direct = gauss_truncated(t, 1e-12)
        via_f = probability_integral_via_F(t, 1e-12)
        print(f"t={t}: direct {direct.value:.14f}  via F {via_f.value:.14f}")


if __name__ == "__main__":
    main()
