"""
Example 2: Enclosures of pi

Compares the Wallis enclosure, the squared moment chain and Machin's
formula. Every interval provably contains pi.
"""

from wallislab import pi_enclosure
from wallislab.exact_core import render_interval
from wallislab.inequalities import pi_enclosure_moments, pi_enclosure_wallis


def main():
    for n in (1, 10, 100, 1000):
        wallis = pi_enclosure_wallis(n)
        moments = pi_enclosure_moments(n)
        print(f"n={n:>5}  wallis  {wallis.render(8)}  width {float(wallis.width):.3e}")
        print(f"         moments {moments.render(8)}  width {float(moments.width):.3e}")

    machin = pi_enclosure(50)
    print(f"machin, 50 digits: {render_interval(machin.interval, 51)}")


if __name__ == "__main__":
    main()
