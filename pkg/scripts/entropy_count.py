"""Compare Σ_{k≤αn} C(n,k) with the entropy estimate 2^{nH(α) − ½ log n}."""

import argparse
from fractions import Fraction

from cfiforge.symanalysis import imbalance_count


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--alpha", type=Fraction, default=Fraction(1, 4))
    parser.add_argument("--ns", nargs="*", type=int, default=[10, 20, 40, 80, 160, 320])
    args = parser.parse_args()

    print(f"alpha = {args.alpha}")
    print("n     exact         estimate      ratio")
    for n in args.ns:
        r = imbalance_count(n, args.alpha)
        exact = str(r.exact) if r.exact < 10**12 else f"{r.exact:.6e}"
        print(f"{n:<5d} {exact:<13s} {r.estimate:<13.6g} {r.ratio:.4f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
