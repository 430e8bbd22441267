"""Eliminants at q = 4 with their z-forms, spurious factors and real roots."""

import argparse
import sys
import time

import mpmath

from anharmonic_qes.algebra import sturm_isolate
from anharmonic_qes.elimination import Budget, eliminant
from anharmonic_qes.errors import BudgetExceededError


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--Nmax", type=int, default=4)
    ap.add_argument("--stretch", action="store_true", help="include N = 5 (degree 70, tens of seconds)")
    ap.add_argument("--budget-degree", type=int, default=2000)
    ap.add_argument("--budget-terms", type=int, default=2_000_000)
    args = ap.parse_args()

    budget = Budget(args.budget_degree, args.budget_terms)
    Ns = list(range(1, args.Nmax + 1)) + ([5] if args.stretch and args.Nmax < 5 else [])
    for N in Ns:
        t0 = time.perf_counter()
        try:
            sec = eliminant(4, N, budget=budget)
        except BudgetExceededError as exc:
            print(f"N={N}: {exc} {exc.partial}")
            continue
        roots = [mpmath.nstr(iv.to_mpf(20), 12) for iv in sturm_isolate(sec.P)]
        print(f"N={N}  degree {sec.degree} (raw {sec.raw.degree})  {time.perf_counter() - t0:.2f} s")
        if sec.degree <= 20:
            print(f"  eliminant: {sec.text()}")
        print(f"  z-form: s^{sec.e} F(s^5), deg F = {sec.F.degree}")
        print(f"  removed: {sec.removed.to_text()}")
        print(f"  real roots: {', '.join(roots)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
