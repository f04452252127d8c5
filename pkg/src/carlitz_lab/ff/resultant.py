"""Resultants over k_s[theta] by the subresultant remainder sequence.

Convention: Res(f, g) = lc(f)^deg(g) * prod_{f(x)=0} g(x), the Sylvester
determinant with f's rows first.  For monic f and a constant c this gives
Res(f, c - theta) = f(c).
"""

from __future__ import annotations

from .kfield import KElem
from .thetapoly import ThetaPoly


def _strip(a: list[KElem]) -> list[KElem]:
    while a and a[-1].is_zero():
        a.pop()
    return a


def _prem(a: list[KElem], b: list[KElem]) -> list[KElem]:
    """Pseudo-remainder lc(b)^(da-db+1) * a mod b."""
    a = list(a)
    db = len(b) - 1
    lc = b[-1]
    steps = len(a) - len(b) + 1
    while len(a) - 1 >= db and a:
        c = a[-1]
        shift = len(a) - 1 - db
        a = [x * lc for x in a]
        for i, bi in enumerate(b):
            a[shift + i] = a[shift + i] - c * bi
        a.pop()
        a = _strip(a)
        steps -= 1
    if steps > 0:
        f = lc ** steps
        a = [x * f for x in a]
    return a


def resultant_lists(f: list[KElem], g: list[KElem], spec) -> KElem:
    """Subresultant algorithm on ascending coefficient lists over the field k."""
    A, B = _strip(list(f)), _strip(list(g))
    if not A or not B:
        return KElem.zero(spec)
    sign = 1
    if len(A) < len(B):
        if (len(A) - 1) % 2 and (len(B) - 1) % 2:
            sign = -1
        A, B = B, A
    if len(B) == 1:
        res = B[0] ** (len(A) - 1)
        return res if sign == 1 else -res
    g_ = h = KElem.one(spec)
    while True:
        dA, dB = len(A) - 1, len(B) - 1
        delta = dA - dB
        if dA % 2 and dB % 2:
            sign = -sign
        R = _prem(A, B)
        if not R:
            return KElem.zero(spec)
        A, B = B, [x / (g_ * h ** delta) for x in R]
        g_ = A[-1]
        h = g_ ** delta * h ** (1 - delta)
        if len(B) == 1:
            break
    dA = len(A) - 1
    res = h ** (1 - dA) * B[0] ** dA
    return res if sign == 1 else -res


def resultant(f: ThetaPoly, g: ThetaPoly) -> KElem:
    """Res_theta(f, g)."""
    if f.spec != g.spec:
        raise ValueError("field mismatch")
    if f.is_zero() and g.is_zero():
        raise ValueError("resultant of two zero polynomials")
    return resultant_lists(f.coeffs(), g.coeffs(), f.spec)


def sylvester_rows(f: list, g: list):
    """Sylvester matrix of ascending coefficient lists, f's rows first (top degree left)."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [None] * size
        for j, c in enumerate(reversed(f)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [None] * size
        for j, c in enumerate(reversed(g)):
            row[i + j] = c
        rows.append(row)
    return rows
