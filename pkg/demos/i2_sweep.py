"""Asymptotic diagnostic for I2 over primes at fixed height."""

import argparse

from sympy import primerange

from regl4 import i2_pipeline as ip


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-prime", type=int, default=41)
    ap.add_argument("--T", type=float, default=1.0)
    args = ap.parse_args()
    print(f"{'N':>4} {'I2':>22} {'ratio':>8} {'leading':>8}")
    for N in primerange(5, args.max_prime + 1):
        sc = ip.I2Scenario.build(N, T=args.T)
        rep = ip.i2_asymptotic_report(sc)
        i2 = ip.i2_constant_term(sc).value
        print(f"{N:4d} {i2.real:22.15g} {rep['ratio']:8.3f} {rep['leading_ratio']:8.4f}")


if __name__ == "__main__":
    main()
