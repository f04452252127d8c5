"""Univariate polynomials over GF(p^e) as lists of integer codes.

Coefficients run from low to high degree; the zero polynomial is ``[]``.
These helpers carry the Euclidean algorithms (gcd, exact division) that
the dense engine does not do well, at the small degrees where they run.
"""

from __future__ import annotations

from .gf import GF


def strip(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def add(F: GF, a, b):
    n = max(len(a), len(b))
    out = [F.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]
    return strip(out)


def sub(F: GF, a, b):
    n = max(len(a), len(b))
    out = [F.sub(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]
    return strip(out)


def scale(F: GF, c: int, a):
    if c == 0:
        return []
    return strip([F.mul(c, x) for x in a])


def mul(F: GF, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    if F.e == 1:
        p = F.p
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return strip([c % p for c in out])
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return strip(out)


def divmod_(F: GF, a, b):
    """Quotient and remainder; ``b`` nonzero."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    inv = F.inv(b[-1])
    db = len(b) - 1
    q = [0] * max(0, len(a) - db)
    while len(a) - 1 >= db and a:
        c = F.mul(a[-1], inv)
        shift = len(a) - 1 - db
        q[shift] = c
        for i, bi in enumerate(b):
            if bi:
                a[shift + i] = F.sub(a[shift + i], F.mul(c, bi))
        a.pop()
        strip(a)
    return strip(q), a


def divexact(F: GF, a, b):
    q, r = divmod_(F, a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def monic(F: GF, a):
    if not a:
        return []
    return scale(F, F.inv(a[-1]), a)


def gcd(F: GF, a, b):
    """Monic gcd (``[]`` only when both inputs vanish)."""
    a, b = strip(list(a)), strip(list(b))
    while b:
        a, b = b, divmod_(F, a, b)[1]
    return monic(F, a)


def xgcd(F: GF, a, b):
    """(g, u, v) with u a + v b = g monic."""
    r0, r1 = strip(list(a)), strip(list(b))
    s0, s1, t0, t1 = [1], [], [], [1]
    while r1:
        q, r = divmod_(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, q, s1))
        t0, t1 = t1, sub(F, t0, mul(F, q, t1))
    if not r0:
        return [], [], []
    c = F.inv(r0[-1])
    return scale(F, c, r0), scale(F, c, s0), scale(F, c, t0)


def evaluate(F: GF, a, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def powmod(F: GF, a, k: int, m):
    result = [1]
    base = divmod_(F, a, m)[1]
    while k:
        if k & 1:
            result = divmod_(F, mul(F, result, base), m)[1]
        base = divmod_(F, mul(F, base, base), m)[1]
        k >>= 1
    return result
