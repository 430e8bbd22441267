"""Follow finite-D solutions toward their large-D limits and print deviations."""

import argparse
import sys
from fractions import Fraction

from anharmonic_qes.verifier import continuation


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dps", type=int, default=64)
    ap.add_argument("--exponents", default="4,5,6,7,8", help="D = 10^k for these k")
    args = ap.parse_args()

    grid = [10 ** int(k) for k in args.exponents.split(",")]
    ok = True
    for q, N, branch in ((1, 2, 1), (1, 2, -1), (1, 3, 2), (2, 2, 1), (2, 3, 2)):
        rep = continuation(q, N, (Fraction(1),) * (q + 1), branch, grid, args.dps)
        print(f"q={q} N={N} branch s1->{branch}: limit {rep.target}")
        for D, dev in zip(rep.D, rep.deviation):
            print(f"  D=1e{len(str(D)) - 1}  deviation {dev:.3e}")
        print(f"  monotone: {rep.monotone}")
        ok &= rep.monotone and not rep.truncated
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
