"""Sizes, invariance and (for small n) the exhaustive basis-pair index of Γ_n."""

import argparse

from cfiforge.genconstruct import counterexample_space


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("ns", nargs="*", type=int, default=[4, 8, 16, 32])
    args = parser.parse_args()

    print("n   coords  parts        dim  codim  |G|                 invariant  min-index  pairs")
    for n in args.ns:
        _, _, r = counterexample_space(n)
        shape = "x".join(str(len(p)) for p in r.parts)
        idx = "-" if r.min_index is None else str(r.min_index)
        print(f"{n:<3d} {r.size:<7d} {shape:<12s} {r.dim:<4d} {r.codim:<6d} {r.group_order:<19d} {str(r.invariant):<10s} {idx:<10s} {r.pairs_checked}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
