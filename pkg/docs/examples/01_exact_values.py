"""
Example 1: Exact Values

Wallis products, Wallis integrals and Gaussian moments are exact. This
example prints a few of each together with their truncated decimals.
"""

from wallislab import (
    pi_enclosure,
    render_decimal,
    render_scalar,
    moment_integral,
    wallis_integral,
    wallis_product,
)
from wallislab.exact_core import scalar_to_decimal


def main():
    enc = pi_enclosure(30)

    print("Wallis products a_n")
    for n in (1, 2, 3, 10):
        a_n = wallis_product(n)
        print(f"  a_{n} = {a_n} = {render_decimal(a_n, 12)}")

    print("Wallis integrals I_n")
    for n in range(6):
        value = wallis_integral(n)
        print(f"  I_{n} = {render_scalar(value)} = {scalar_to_decimal(value, 12, enc)}")

    print("Gaussian moments E_n")
    for n in range(6):
        value = moment_integral(n)
        print(f"  E_{n} = {render_scalar(value)} = {scalar_to_decimal(value, 12, enc)}")


if __name__ == "__main__":
    main()
