"""Roots of F_q-polynomials in finite extensions, and evaluation there."""

from __future__ import annotations

import functools
import math

import numpy as np

from .gf import GF, field


def _binom_table(p: int) -> np.ndarray:
    t = np.zeros((p, p), dtype=np.int64)
    for n in range(p):
        for k in range(n + 1):
            t[n, k] = math.comb(n, k) % p
    return t


def binom_vec(i: np.ndarray, j: int, p: int) -> np.ndarray:
    """C(i, j) mod p for a vector of nonnegative i (Lucas)."""
    table = _binom_table(p)
    out = np.ones_like(i)
    i = i.copy()
    while j or i.any():
        out = out * table[i % p, j % p] % p
        i //= p
        j //= p
    return out


@functools.lru_cache(maxsize=None)
def smallest_root(p: int, e: int, coeffs: tuple[int, ...], L: int) -> int:
    """Smallest code of a root in F_{p^(eL)} of a polynomial with F_{p^e} codes."""
    G = field(p, e * L)
    emb = G.embedding(e)
    xs = np.arange(G.order, dtype=np.int64)
    acc = np.full(G.order, emb[coeffs[-1]], dtype=np.int64)
    for c in reversed(coeffs[:-1]):
        acc = G.vadd(G.vmul(acc, xs), np.full(G.order, emb[c], dtype=np.int64))
    roots = np.nonzero(acc == 0)[0]
    if len(roots) == 0:
        raise ValueError("polynomial has no root in the requested extension")
    return int(roots[0])


def powers(G: GF, z: int, n: int) -> np.ndarray:
    """Codes of z^0 .. z^(n-1)."""
    if z == 0:
        out = np.zeros(n, dtype=np.int64)
        out[0] = 1
        return out
    lz = G.log(z)
    idx = (np.arange(n, dtype=np.int64) * lz) % (G.order - 1)
    return G.exp_table[idx]


def field_sum(G: GF, codes: np.ndarray, axis: int = 0) -> np.ndarray:
    """Sum of field elements along an axis."""
    if G.e == 1:
        return codes.sum(axis=axis) % G.p
    dig = G.to_digit_array(codes)
    return G.from_digit_array(dig.sum(axis=axis + 1) % G.p)


def hasse_eval(G: GF, coeff_codes: np.ndarray, z: int, j: int) -> np.ndarray:
    """(D_j f)(z) for f with G-codes ``coeff_codes`` along axis 0 (other axes batched)."""
    n = coeff_codes.shape[0]
    if n <= j:
        return np.zeros(coeff_codes.shape[1:], dtype=np.int64)
    idx = np.arange(j, n, dtype=np.int64)
    b = binom_vec(idx, j, G.p)
    pw = powers(G, z, n - j)
    w = G.vmul(b, pw)
    shape = (n - j,) + (1,) * (coeff_codes.ndim - 1)
    terms = G.vmul(coeff_codes[j:], w.reshape(shape))
    return field_sum(G, terms, axis=0)
