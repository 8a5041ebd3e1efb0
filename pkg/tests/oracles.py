"""Independent reference implementations used to cross-check the package.

None of these import the package's algorithms: determinants come from the Leibniz
sum, Pfaffians from perfect matchings, kernels and ranks from sympy, and Schubert
products from Giambelli's formula driven by a one-row Pieri rule.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from itertools import permutations

import sympy


def leibniz_det(rows) -> Fraction:
    n = len(rows)
    total = Fraction(0)
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        prod = Fraction(1)
        for i in range(n):
            prod *= rows[i][perm[i]]
            if prod == 0:
                break
        total += sign * prod
    return total


def _matchings(idx):
    if not idx:
        yield []
        return
    first, rest = idx[0], idx[1:]
    for k, partner in enumerate(rest):
        for m in _matchings(rest[:k] + rest[k + 1 :]):
            yield [(first, partner)] + m


def _matching_sign(m) -> int:
    seq = [v for pair in m for v in pair]
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def matching_pfaffian(rows) -> Fraction:
    n = len(rows)
    if n % 2:
        return Fraction(0)
    total = Fraction(0)
    for m in _matchings(list(range(n))):
        prod = Fraction(1)
        for i, j in m:
            prod *= rows[i][j]
        total += _matching_sign(m) * prod
    return total


def sympy_matrix(rows) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x for x in r] for r in rows])


def sympy_rank(rows) -> int:
    return sympy_matrix(rows).rank()


def sympy_nullity(rows) -> int:
    return len(sympy_matrix(rows).nullspace())


# ---------------------------------------------------------------------------
# Schubert calculus of G(1, N) via Giambelli


def _one_row_pieri(lam, k, N):
    """sigma_lam * sigma_k for two-row lam inside the (N-1) x 2 box."""
    a, b = lam
    out = {}
    for c in range(a, N):
        for d in range(b, a + 1):
            if c + d == a + b + k:
                out[(c, d)] = out.get((c, d), 0) + 1
    return out


def _mul_special(poly, k, N):
    res = defaultdict(int)
    if k < 0 or k > N - 1:
        return res
    for lam, c in poly.items():
        for mu, e in _one_row_pieri(lam, k, N).items():
            res[mu] += c * e
    return res


def giambelli(a: int, b: int, N: int) -> dict:
    """sigma_{a,b} as a class expanded from sigma_a sigma_b - sigma_{a+1} sigma_{b-1}."""
    one = {(0, 0): 1}
    first = _mul_special(_mul_special(one, a, N), b, N)
    second = _mul_special(_mul_special(one, a + 1, N), b - 1, N) if b >= 1 else {}
    res = defaultdict(int, first)
    for k, v in second.items():
        res[k] -= v
    return {k: v for k, v in res.items() if v}


def oracle_degree(s, t, N: int) -> int:
    """Coefficient of the point class in sigma_s * sigma_t, computed by Pieri descent."""
    poly = giambelli(*t, N)
    # multiply the expansion of sigma_t by sigma_s = sigma_a sigma_b - sigma_{a+1} sigma_{b-1}
    a, b = s
    res = defaultdict(int)
    for terms, sign in (((a, b), 1), ((a + 1, b - 1), -1)):
        if terms[1] < 0:
            continue
        prod = _mul_special(_mul_special(poly, terms[0], N), terms[1], N)
        for k, v in prod.items():
            res[k] += sign * v
    return res.get((N - 1, N - 1), 0)
