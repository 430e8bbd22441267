"""Closed-form multi-spectra for q = 1..5 and the q = 4 table.

All values are the s_1 (equivalently, for the real tuples, s_q) component
of the trap-system solutions.  q = 4 roots are carried as integer pairs
(P, Q) meaning (P +- sqrt(5) Q)/2.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .algebra import Surd
from .errors import NoTabulatedDataError


def spectrum_q1(N: int) -> list[Fraction]:
    """N-1, N-3, ..., -N+1."""
    _check_N(N)
    return [Fraction(N - 1 - 2 * i) for i in range(N)]


def spectrum_q2(N: int) -> list[Fraction]:
    """N+2-3j for j = 1..floor((N+1)/2); here s_1 = s_2."""
    _check_N(N)
    return [Fraction(N + 2 - 3 * j) for j in range(1, (N + 1) // 2 + 1)]


def spectrum_q3_s2(N: int) -> list[Fraction]:
    """The middle component s_2 at q = 3: N-1, N-5, N-9, ..."""
    _check_N(N)
    return [Fraction(N - 1 - 4 * i) for i in range((N + 1) // 2)]


# q = 3 solution matrices as printed, one column per tuple (rows s_1, s_2, s_3).
# The N = 5 matrix prints 9 in three places where every solution has 0; the
# printed tuples fail exact substitution, so the corrected matrix is served.
Q3_PRINTED = {
    3: ((-2, 0, 2, 0), (2, 2, 2, -2), (-2, 0, 2, 0)),
    4: ((-3, -1, 1, 3, -1, 1), (3, 3, 3, 3, -1, -1), (-3, -1, 1, 3, -1, 1)),
    5: (
        (-4, -2, 0, 2, 4, -2, 0, 2, 0),
        (4, 4, 4, 4, 4, 9, 9, 9, -4),
        (-4, -2, 0, 2, 4, -2, 0, 2, 0),
    ),
}

Q3_CORRECTED = {
    3: Q3_PRINTED[3],
    4: Q3_PRINTED[4],
    5: (
        (-4, -2, 0, 2, 4, -2, 0, 2, 0),
        (4, 4, 4, 4, 4, 0, 0, 0, -4),
        (-4, -2, 0, 2, 4, -2, 0, 2, 0),
    ),
}


def _columns(matrix) -> list[tuple[Fraction, ...]]:
    return [tuple(Fraction(row[c]) for row in matrix) for c in range(len(matrix[0]))]


def q3_full(N: int, printed: bool = False) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Full q = 3 tuples (s_1, s_2, s_3) for N = 3, 4, 5.

    ``printed=True`` returns the matrices exactly as published, including
    the misprinted N = 5 entries.
    """
    table = Q3_PRINTED if printed else Q3_CORRECTED
    if N not in table:
        raise NoTabulatedDataError("no tabulated data")
    return _columns(table[N])


@dataclass(frozen=True)
class SpectrumEntry:
    """q = 4 root pair (P +- sqrt(5) Q)/2 from the ladder indices (j, k)."""

    P: int
    Q: int
    j: int
    k: int

    @property
    def multiplicity(self) -> int:
        return 1 if self.Q == 0 else 2

    def values(self) -> list:
        """The real roots, largest first (Fractions when Q = 0)."""
        if self.Q == 0:
            return [Fraction(self.P, 2)]
        return [Surd.from_PQ(self.P, self.Q, 1), Surd.from_PQ(self.P, self.Q, -1)]

    def exact_text(self) -> str:
        if self.Q == 0:
            return str(Fraction(self.P, 2))
        rad = "sqrt(5)" if self.Q == 1 else f"{self.Q}*sqrt(5)"
        return f"({self.P} +- {rad})/2"

    def to_dict(self) -> dict:
        return {"P": self.P, "Q": self.Q, "j": self.j, "k": self.k}


def admissible(N: int, j: int, k: int) -> bool:
    return j >= 1 and k >= 1 and 2 * j + 4 * k <= N + 5


def spectrum_q4(N: int) -> list[SpectrumEntry]:
    """All (j, k) with 2j + 4k <= N + 5; P = 2N + 13 - 5j - 10k, Q = j - 1.

    Ordered by j, then k (each such ladder is decreasing in P).
    """
    _check_N(N)
    out = []
    j = 1
    while admissible(N, j, 1):
        k = 1
        while admissible(N, j, k):
            out.append(SpectrumEntry(2 * N + 13 - 5 * j - 10 * k, j - 1, j, k))
            k += 1
        j += 1
    return out


def q4_values(N: int) -> list:
    """Every real q = 4 root, surd pairs expanded, in decreasing order."""
    vals = [v for e in spectrum_q4(N) for v in e.values()]
    return sorted(vals, reverse=True)


def count_q4(N: int) -> int:
    """K(K+1)/2 with K = floor((N+1)/2); surd pairs count twice."""
    _check_N(N)
    K = (N + 1) // 2
    return K * (K + 1) // 2


def spectrum_q5(N: int) -> list[Fraction]:
    """N-1, N-2, ..., -N+1 (2N-1 values)."""
    _check_N(N)
    return [Fraction(N - 1 - i) for i in range(2 * N - 1)]


def _check_N(N: int) -> None:
    if N < 1:
        raise ValueError("N must be positive")


def spectrum(q: int, N: int) -> list:
    """Dispatcher: rationals for q != 4, SpectrumEntry list for q = 4."""
    gens = {1: spectrum_q1, 2: spectrum_q2, 3: spectrum_q3_s2, 4: spectrum_q4, 5: spectrum_q5}
    if q not in gens:
        raise ValueError("q must be in 1..5")
    return gens[q](N)


def predicted_s1(q: int, N: int) -> list | None:
    """Set of real s_1 values the closed forms predict, or None if unknown.

    q = 3 has no closed form for s_1; the tabulated tuples are used where
    they exist.
    """
    if q == 4:
        return q4_values(N)
    if q == 3:
        if N not in Q3_CORRECTED:
            return None
        return sorted({t[0] for t in q3_full(N)}, reverse=True)
    return spectrum(q, N)


# -- table 1 ---------------------------------------------------------------------

CELL = 4

# Hand transcription of the published q = 4 table for N = 1..12: entries are P,
# rows grouped by Q, last row the totals.
TABLE1 = """\
q = 4: columns of roots s4 = (P +- sqrt(5)*Q)/2, entries are P
N     |   1   2   3   4   5   6   7   8   9  10  11  12 | Q
------+-------------------------------------------------+---
      |   0   2   4   6   8  10  12  14  16  18  20  22 | 0
      |                  -2   0   2   4   6   8  10  12 | 0
      |                                  -4  -2   0   2 | 0
------+-------------------------------------------------+---
      |          -1   1   3   5   7   9  11  13  15  17 | 1
      |                          -3  -1   1   3   5   7 | 1
      |                                          -5  -3 | 1
------+-------------------------------------------------+---
      |                  -2   0   2   4   6   8  10  12 | 2
      |                                  -4  -2   0   2 | 2
------+-------------------------------------------------+---
      |                          -3  -1   1   3   5   7 | 3
      |                                          -5  -3 | 3
------+-------------------------------------------------+---
      |                                  -4  -2   0   2 | 4
------+-------------------------------------------------+---
      |                                          -5  -3 | 5
------+-------------------------------------------------+---
total |   1   1   3   3   6   6  10  10  15  15  21  21 |
"""


def render_table1(N_max: int = 12) -> str:
    """The q = 4 table for N = 1..N_max in the layout of :data:`TABLE1`."""
    if N_max < 1:
        raise ValueError("N_max must be positive")
    width = CELL * N_max
    rule = "-" * 6 + "+" + "-" * (width + 1) + "+---"
    lines = [
        "q = 4: columns of roots s4 = (P +- sqrt(5)*Q)/2, entries are P",
        "N     |" + "".join(f"{n:>{CELL}}" for n in range(1, N_max + 1)) + " | Q",
        rule,
    ]
    j = 1
    while admissible(N_max, j, 1):
        k = 1
        while admissible(N_max, j, k):
            cells = "".join(
                f"{2 * n + 13 - 5 * j - 10 * k:>{CELL}}" if admissible(n, j, k) else " " * CELL
                for n in range(1, N_max + 1)
            )
            lines.append("      |" + cells + f" | {j - 1}")
            k += 1
        lines.append(rule)
        j += 1
    lines.append("total |" + "".join(f"{count_q4(n):>{CELL}}" for n in range(1, N_max + 1)) + " |")
    return "\n".join(lines) + "\n"


# -- export ----------------------------------------------------------------------------

def _num(x) -> str:
    if isinstance(x, Surd):
        with mpmath.workdps(30):
            return mpmath.nstr(x.to_mpf(), 20)
    return str(x)


def to_json(q: int, N: int) -> str:
    if q == 4:
        doc = {"q": 4, "N": N, "entries": [e.to_dict() for e in spectrum_q4(N)]}
    else:
        doc = {"q": q, "N": N, "entries": [str(x) for x in spectrum(q, N)]}
    return json.dumps(doc, sort_keys=True)


def to_csv(q: int, N: int) -> str:
    """One root per line in decimal (q = 4 surd pairs expanded)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["q", "N", "root"])
    vals = q4_values(N) if q == 4 else spectrum(q, N)
    for v in vals:
        w.writerow([q, N, _num(v) if isinstance(v, Surd) else _decimal(v)])
    return buf.getvalue()


def _decimal(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    with mpmath.workdps(30):
        return mpmath.nstr(mpmath.mpf(x.numerator) / x.denominator, 20)
