"""
Example 3: Inequality Checks

Runs a handful of checks directly and then a whole suite, printing the
verdict counts.
"""

from wallislab.inequalities import (
    check_binomial_band,
    check_spivak_sandwich,
    check_stieltjes,
)
from wallislab.suites import run_suite, summarize


def main():
    for outcome in (check_stieltjes(25), check_binomial_band(25), check_spivak_sandwich(4, 1e-10)):
        print(f"{outcome.name:>16} n={outcome.n}: {outcome.verdict.value} ({outcome.grade.value})")

    # A tolerance this loose cannot separate the members of the sandwich
    loose = check_spivak_sandwich(4, 1.0)
    print(f"with tol=1.0: {loose.verdict.value}")

    records = run_suite("wallis", 30, jobs=2)
    for verdict, count in summarize(records).items():
        print(f"wallis suite {verdict.value}: {count}")


if __name__ == "__main__":
    main()
