"""Support gap α(μ) = s(μ)/|sup_CFI(μ)| for parity sets over small base graphs.

s(μ) is the smallest atom set whose pointwise stabilizer in the full
automorphism group of the CFI structure fixes μ.
"""

import argparse
import itertools
from collections import Counter

from cfiforge.cfi import build_cfi
from cfiforge.graphs import graph_automorphisms, parse_base
from cfiforge.hfs import min_aut_support, parity_set, support_gap


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--bases", nargs="*", default=["hypercube:2", "cycle:5", "path:5", "complete:4"])
    args = parser.parse_args()

    for name in args.bases:
        g = parse_base(name)
        c = build_cfi(g)
        auts = graph_automorphisms(g)
        gaps: Counter = Counter()
        worst = 0
        for k in range(1, len(g.edges) + 1):
            for sub in itertools.combinations(g.edges, k):
                mu = parity_set(list(sub))[0]
                gaps[support_gap(mu, c, auts)] += 1
                worst = max(worst, min_aut_support(mu, c, auts).size - k)
        spread = ", ".join(f"{gap}: {count}" for gap, count in sorted(gaps.items()))
        print(f"{name:12s} |Aut(G)|={len(auts):<4d} gaps {{{spread}}}  max s(μ)-|sup|={worst}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
