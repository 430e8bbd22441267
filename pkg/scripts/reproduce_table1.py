"""Render the q = 4 root table and compare it with the embedded transcription."""

import argparse
import sys

from anharmonic_qes import catalog
from anharmonic_qes.algebra import sturm_isolate
from anharmonic_qes.elimination import eliminant


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--Nmax", type=int, default=12)
    ap.add_argument("--check-up-to", type=int, default=4,
                    help="also match each column against eliminant roots for N up to this value")
    args = ap.parse_args()

    text = catalog.render_table1(args.Nmax)
    print(text, end="")
    ok = True
    if args.Nmax == 12:
        same = text == catalog.TABLE1
        print(f"transcription match: {same}")
        ok &= same
    for N in range(1, args.check_up_to + 1):
        ivs = sturm_isolate(eliminant(4, N).P)
        want = sorted(catalog.q4_values(N))
        hit = len(ivs) == len(want) and all(iv.contains(v) for iv, v in zip(ivs, want))
        print(f"N={N}: {len(want)} roots, eliminant agrees: {hit}")
        ok &= hit
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
