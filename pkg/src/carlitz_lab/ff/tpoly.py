"""Gcd and exact division for polynomials in t1, t2 over GF(p^e).

Arrays follow the dense layout ``(e, d_1[, d_2])``.  Internally a
bivariate polynomial is a list indexed by the t2-degree whose entries
are univariate code lists in t1, and gcds use the primitive
pseudo-remainder sequence over F[t1].
"""

from __future__ import annotations

import numpy as np

from . import dense, upoly
from .gf import GF


# -- conversions ---------------------------------------------------------

def to_lists(F: GF, a: np.ndarray, s: int):
    c = dense.codes(F, a)
    if s == 0:
        return int(c)
    if s == 1:
        return upoly.strip([int(x) for x in c])
    out = [upoly.strip([int(x) for x in c[:, j]]) for j in range(c.shape[1])]
    while out and not out[-1]:
        out.pop()
    return out


def from_lists(F: GF, obj, s: int) -> np.ndarray:
    if s == 0:
        return dense.constant(F, obj, 0)
    if s == 1:
        return dense.from_codes(F, obj if obj else [0])
    d2 = max(1, len(obj))
    d1 = max([1] + [len(u) for u in obj])
    c = np.zeros((d1, d2), dtype=np.int64)
    for j, u in enumerate(obj):
        c[:len(u), j] = u
    return dense.from_codes(F, c)


# -- bivariate helpers (lists over t2 of univariate lists in t1) ------------

def _bstrip(a):
    while a and not a[-1]:
        a.pop()
    return a


def _bsub(F, a, b):
    n = max(len(a), len(b))
    return _bstrip([upoly.sub(F, a[i] if i < len(a) else [], b[i] if i < len(b) else [])
                    for i in range(n)])


def _bscale(F, u, a):
    return _bstrip([upoly.mul(F, u, x) for x in a])


def _bshift_mul(F, u, k, a):
    """u * t2^k * a."""
    return [[] for _ in range(k)] + [upoly.mul(F, u, x) for x in a]


def _bdiv_u(F, a, u):
    return [upoly.divexact(F, x, u) for x in a]


def _content(F, a):
    g = []
    for x in a:
        g = upoly.gcd(F, g, x)
        if len(g) == 1:
            break
    return g


def _prem(F, a, b):
    a = [list(x) for x in a]
    lb = b[-1]
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        la = a[-1]
        shift = len(a) - 1 - db
        a = _bsub(F, _bscale(F, lb, a), _bshift_mul(F, la, shift, b))
    return a


def _bgcd_primitive(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    while True:
        if len(b) == 1:
            return [[1]]
        r = _prem(F, a, b)
        if not r:
            return b
        if len(r) == 1:
            return [[1]]
        r = _bdiv_u(F, r, _content(F, r))
        a, b = b, r


def _bgcd(F, a, b):
    if not a:
        return b
    if not b:
        return a
    ca, cb = _content(F, a), _content(F, b)
    g = upoly.gcd(F, ca, cb)
    pa, pb = _bdiv_u(F, a, ca), _bdiv_u(F, b, cb)
    return _bscale(F, g, _bgcd_primitive(F, pa, pb))


def _bdivexact(F, a, b):
    a = [list(x) for x in a]
    db = len(b) - 1
    q = [[] for _ in range(max(0, len(a) - db))]
    while a and len(a) - 1 >= db:
        c = upoly.divexact(F, a[-1], b[-1])
        shift = len(a) - 1 - db
        q[shift] = c
        a = _bsub(F, a, _bshift_mul(F, c, shift, b))
    if a:
        raise ArithmeticError("inexact division")
    return _bstrip(q)


# -- public API on arrays -------------------------------------------------

def gcd(F: GF, a: np.ndarray, b: np.ndarray, s: int) -> np.ndarray:
    """Gcd normalised to graded-lex leading coefficient 1."""
    if s == 0:
        return dense.constant(F, 1, 0) if (a.any() or b.any()) else dense.constant(F, 0, 0)
    la, lb = to_lists(F, a, s), to_lists(F, b, s)
    g = upoly.gcd(F, la, lb) if s == 1 else _bgcd(F, la, lb)
    return normalize(F, from_lists(F, g, s), s)


def divexact(F: GF, a: np.ndarray, b: np.ndarray, s: int) -> np.ndarray:
    if s == 0:
        return dense.scale(F, F.inv(int(dense.codes(F, b))), a)
    la, lb = to_lists(F, a, s), to_lists(F, b, s)
    q = upoly.divexact(F, la, lb) if s == 1 else _bdivexact(F, la, lb)
    return dense.trim(from_lists(F, q, s))


def leading_index(a: np.ndarray, s: int):
    """Exponent of the graded-lex leading term (t1 < t2)."""
    if s == 0:
        return ()
    nz = np.argwhere(a.any(axis=0))
    if len(nz) == 0:
        return None
    if s == 1:
        return (int(nz[:, 0].max()),)
    tot = nz.sum(axis=1)
    cand = nz[tot == tot.max()]
    best = cand[np.argmax(cand[:, 1])]
    return (int(best[0]), int(best[1]))


def leading_code(F: GF, a: np.ndarray, s: int) -> int:
    idx = leading_index(a, s)
    if idx is None:
        return 0
    return F.code(a[(slice(None),) + idx])


def normalize(F: GF, a: np.ndarray, s: int) -> np.ndarray:
    c = leading_code(F, a, s)
    if c in (0, 1):
        return dense.trim(a)
    return dense.trim(dense.scale(F, F.inv(c), a))
