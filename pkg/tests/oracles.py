"""Shared oracles for the test suite.

The oracles avoid the package's own elimination code: sympy builds the
trap system independently and a Fraction Bareiss determinant stands in for
the subresultant resultant.
"""

from __future__ import annotations

from fractions import Fraction


def bareiss_det(M):
    """Fraction-exact determinant by fraction-free elimination."""
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    if n == 0:
        return Fraction(1)
    sign, prev = 1, Fraction(1)
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def sylvester_det(a, b):
    """Resultant of two coefficient lists (low degree first) via the Sylvester matrix."""
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [0] * size
        for j, c in enumerate(reversed(a)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [0] * size
        for j, c in enumerate(reversed(b)):
            row[i + j] = c
        rows.append(row)
    return bareiss_det(rows)


def sympy_trap(q, N):
    """Independent sympy construction of the forward-substituted residuals."""
    import sympy as sp

    s = sp.symbols(f"s1:{q + 1}")

    def entry(n, j):
        if j == n + 1 and n <= N - 2:
            return n + 1
        k = n - j
        if 0 <= k <= q - 1:
            return s[k]
        if k == q:
            return N - 1 - j
        return 0

    p = [sp.Integer(1)]
    for n in range(N - 1):
        acc = sum(entry(n, j) * p[j] for j in range(n + 1))
        p.append(sp.expand(-acc / (n + 1)))
    F = [sp.expand(sum(entry(n, j) * p[j] for j in range(N))) for n in range(N - 1, N + q - 1)]
    return s, p, F


def sympy_eliminant(q, N, keep=0):
    """Squarefree generator of the elimination ideal in s_{keep+1} (lex Groebner basis)."""
    import sympy as sp

    s, _, F = sympy_trap(q, N)
    x = s[keep]
    order = [v for v in reversed(s) if v != x] + [x]
    G = sp.groebner(F, *order, order="lex")
    last = [g for g in G.exprs if g.free_symbols <= {x}][-1]
    poly = sp.Poly(last, x)
    sqf = sp.Poly(sp.quo(poly, sp.gcd(poly, poly.diff(x))), x)
    cs = [Fraction(int(c.p), int(c.q)) for c in reversed(sqf.all_coeffs())]
    return cs
