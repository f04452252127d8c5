"""Dense multivariate polynomial arrays over GF(p^e).

A polynomial in k variables is an int64 array of shape ``(e, d_1, ..., d_k)``.
Axis 0 holds base-p digits of the coefficient (see ``gf``); the remaining
axes index exponents.  Products are integer convolutions over every axis,
followed by folding the digit axis back through the field modulus.
"""

from __future__ import annotations

import numpy as np
from scipy import signal

from .gf import GF

# Below this many products the direct (exact, integer) convolution is used.
_DIRECT_LIMIT = 200_000
# Univariate operands with at most this many nonzero coefficients use
# shift-and-add; multivariate ones up to _SHIFT_LIMIT, then FFT.
_SPARSE_LIMIT = 12
_SHIFT_LIMIT = 48


def zeros(F: GF, *shape: int) -> np.ndarray:
    return np.zeros((F.e,) + tuple(max(1, d) for d in shape), dtype=np.int64)


def constant(F: GF, code: int, nvars: int) -> np.ndarray:
    out = np.zeros((F.e,) + (1,) * nvars, dtype=np.int64)
    out[(slice(None),) + (0,) * nvars] = F.digit_table[code]
    return out


def is_zero(a: np.ndarray) -> bool:
    return not a.any()


def trim(a: np.ndarray) -> np.ndarray:
    """Drop trailing all-zero slices along each exponent axis."""
    if a.ndim == 1:
        return a
    nz = np.nonzero(a)
    if len(nz[0]) == 0:
        return np.zeros((a.shape[0],) + (1,) * (a.ndim - 1), dtype=np.int64)
    sl = (slice(None),) + tuple(slice(0, int(idx.max()) + 1) for idx in nz[1:])
    return a[sl]


def pad(a: np.ndarray, shape) -> np.ndarray:
    """Zero-pad exponent axes up to ``shape`` (digit axis excluded)."""
    widths = [(0, 0)] + [(0, max(0, s - d)) for s, d in zip(shape, a.shape[1:])]
    if any(w[1] for w in widths):
        return np.pad(a, widths)
    return a


def add(F: GF, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    shape = tuple(max(x, y) for x, y in zip(a.shape[1:], b.shape[1:]))
    return (pad(a, shape) + pad(b, shape)) % F.p


def sub(F: GF, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    shape = tuple(max(x, y) for x, y in zip(a.shape[1:], b.shape[1:]))
    return (pad(a, shape) - pad(b, shape)) % F.p


def neg(F: GF, a: np.ndarray) -> np.ndarray:
    return (-a) % F.p


def _raw_conv(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact integer full convolution of two arrays of equal rank."""
    if a.ndim == 0:
        return np.asarray(int(a) * int(b), dtype=np.int64)
    if a.size < b.size:
        a, b = b, a
    nzb = np.count_nonzero(b)
    out_shape = tuple(x + y - 1 for x, y in zip(a.shape, b.shape))
    if nzb == 0:
        return np.zeros(out_shape, dtype=np.int64)
    if a.ndim == 1 and nzb <= _SPARSE_LIMIT:
        out = np.zeros(out_shape, dtype=np.int64)
        for idx in zip(*np.nonzero(b)):
            out[idx[0]:idx[0] + a.shape[0]] += int(b[idx]) * a
        return out
    if a.ndim == 1 and a.size * b.size <= 4 * _DIRECT_LIMIT:
        return np.convolve(a, b)
    if nzb <= _SHIFT_LIMIT:
        out = np.zeros(out_shape, dtype=np.int64)
        for idx in zip(*np.nonzero(b)):
            sl = tuple(slice(i, i + n) for i, n in zip(idx, a.shape))
            out[sl] += int(b[idx]) * a
        return out
    res = signal.fftconvolve(a.astype(np.float64), b.astype(np.float64))
    return np.rint(res).astype(np.int64)


def fold_digits(F: GF, c: np.ndarray) -> np.ndarray:
    """Reduce a digit axis of length 2e-1 to length e modulo the field modulus."""
    if F.e == 1:
        return c % F.p
    c = c % F.p
    n = c.shape[0]
    out = np.tensordot(F.reduction[:n].T, c, axes=(1, 0))
    return out % F.p


def mul(F: GF, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of two polynomial arrays (same number of variables)."""
    if F.e == 1:
        return _raw_conv(a[0], b[0])[None] % F.p
    return fold_digits(F, _raw_conv(a % F.p, b % F.p))


def scale(F: GF, code: int, a: np.ndarray) -> np.ndarray:
    """Multiply every coefficient by the field element ``code``."""
    if code == 0:
        return np.zeros_like(a)
    if F.e == 1:
        return a * code % F.p
    d = F.digit_table[code]
    out = np.zeros((2 * F.e - 1,) + a.shape[1:], dtype=np.int64)
    for i, di in enumerate(d):
        if di:
            out[i:i + F.e] += int(di) * a
    return fold_digits(F, out)


def codes(F: GF, a: np.ndarray) -> np.ndarray:
    """Coefficient codes (shape of the exponent axes)."""
    if F.e == 1:
        return a[0] % F.p
    return F.from_digit_array(a)


def from_codes(F: GF, c) -> np.ndarray:
    c = np.asarray(c, dtype=np.int64)
    if F.e == 1:
        return (c % F.p)[None].copy()
    return F.to_digit_array(c)


def batch_matmul(F: GF, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Matrix product of polynomial matrices.

    ``A`` has shape (m, k, e, *dims_a) and ``B`` shape (k, n, e, *dims_b);
    the exponent ranks must agree.  Uses one FFT per operand.
    """
    m, k = A.shape[:2]
    k2, n = B.shape[:2]
    if k != k2:
        raise ValueError("inner dimensions differ")
    if F.e == 1:
        A1 = A[:, :, 0]
        B1 = B[:, :, 0]
        poly_axes = tuple(range(2, A1.ndim))
        if not poly_axes:
            return (np.einsum("ij,jk->ik", A1 % F.p, B1 % F.p) % F.p)[:, :, None]
        out_shape = tuple(x + y - 1 for x, y in zip(A1.shape[2:], B1.shape[2:]))
        if not A1.any() or not B1.any():
            return np.zeros((m, n, 1) + out_shape, dtype=np.int64)
        fa = np.fft.rfftn(A1.astype(np.float64), s=out_shape, axes=poly_axes)
        fb = np.fft.rfftn(B1.astype(np.float64), s=out_shape, axes=poly_axes)
        prod = np.einsum("ij...,jk...->ik...", fa, fb)
        res = np.fft.irfftn(prod, s=out_shape, axes=poly_axes)
        return (np.rint(res).astype(np.int64) % F.p)[:, :, None]
    poly_axes = tuple(range(2, A.ndim))
    out_shape = tuple(x + y - 1 for x, y in zip(A.shape[2:], B.shape[2:]))
    fa = np.fft.rfftn(A.astype(np.float64), s=out_shape, axes=poly_axes)
    fb = np.fft.rfftn(B.astype(np.float64), s=out_shape, axes=poly_axes)
    prod = np.einsum("ij...,jk...->ik...", fa, fb)
    res = np.rint(np.fft.irfftn(prod, s=out_shape, axes=poly_axes)).astype(np.int64)
    res = res % F.p
    return np.moveaxis(fold_digits(F, np.moveaxis(res, 2, 0)), 0, 2)
