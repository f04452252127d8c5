"""Matrices over k = F(t1, ..., ts) as batched t-polynomial arrays.

A ``KMatrix`` holds an integer array of shape ``(rows, cols, e, *t_dims)``
and one common t-denominator of shape ``(e, *t_dims)``.  Products and the
characteristic polynomial work on whole arrays at once; the Berkowitz
recursion needs no division, so numerators stay polynomial throughout.
"""

from __future__ import annotations

import numpy as np

from . import dense, tpoly
from .kfield import FieldSpec, KElem, _is_one, one_array
from .laurent import _series_inverse
from .thetapoly import ThetaPoly


def trim_batch(a: np.ndarray, lead: int) -> np.ndarray:
    """Drop trailing zero slices on every axis after the first ``lead`` + 1."""
    axes = a.ndim - lead - 1
    if axes == 0:
        return a
    mask = a.reshape(a.shape[:lead + 1] + (-1,)).any(axis=tuple(range(lead + 1)))
    mask = mask.reshape(a.shape[lead + 1:])
    nz = np.nonzero(mask)
    if len(nz[0]) == 0:
        return a[(slice(None),) * (lead + 1) + (slice(0, 1),) * axes]
    return a[(slice(None),) * (lead + 1) + tuple(slice(0, int(i.max()) + 1) for i in nz)]


def pad_batch(a: np.ndarray, lead: int, shape) -> np.ndarray:
    widths = [(0, 0)] * (lead + 1) + [(0, max(0, s - d)) for s, d in zip(shape, a.shape[lead + 1:])]
    return np.pad(a, widths) if any(w[1] for w in widths) else a


def _stack(arrays, axis: int, lead: int):
    """Stack arrays after padding their t-axes to a common shape."""
    shape = tuple(max(a.shape[lead + 1 + i] for a in arrays)
                  for i in range(arrays[0].ndim - lead - 1))
    return np.stack([pad_batch(a, lead, shape) for a in arrays], axis=axis)


def _lcm(spec: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    F, s = spec.F, spec.s
    if _is_one(F, a):
        return b
    if _is_one(F, b):
        return a
    g = tpoly.gcd(F, a, b, s)
    return dense.mul(F, a, tpoly.divexact(F, b, g, s))


class KMatrix:
    """Immutable matrix over k."""

    __slots__ = ("spec", "num", "den")

    def __init__(self, spec: FieldSpec, num: np.ndarray, den: np.ndarray | None = None):
        if num.ndim != spec.s + 3:
            raise ValueError("numerator rank does not match the field")
        self.spec = spec
        self.num = trim_batch(num % spec.F.p, 2)
        self.den = one_array(spec) if den is None else dense.trim(den)

    @classmethod
    def from_kelems(cls, spec: FieldSpec, rows) -> "KMatrix":
        rows = [list(r) for r in rows]
        m = len(rows)
        c = len(rows[0]) if m else 0
        if m == 0 or c == 0:
            return cls(spec, np.zeros((m, c, spec.F.e) + (1,) * spec.s, dtype=np.int64))
        den = one_array(spec)
        for r in rows:
            for x in r:
                den = _lcm(spec, den, x.den)
        F, s = spec.F, spec.s
        entries = []
        for r in rows:
            for x in r:
                if _is_one(F, x.den) and _is_one(F, den):
                    entries.append(x.num)
                else:
                    entries.append(dense.mul(F, x.num, tpoly.divexact(F, den, x.den, s)))
        flat = _stack(entries, 0, 0)
        return cls(spec, flat.reshape((m, c) + flat.shape[1:]), den)

    @classmethod
    def identity(cls, spec: FieldSpec, m: int) -> "KMatrix":
        a = np.zeros((m, m, spec.F.e) + (1,) * spec.s, dtype=np.int64)
        for i in range(m):
            a[(i, i, 0) + (0,) * spec.s] = 1
        return cls(spec, a)

    @property
    def shape(self):
        return self.num.shape[:2]

    def is_polynomial(self) -> bool:
        return _is_one(self.spec.F, self.den)

    def __getitem__(self, ij) -> KElem:
        i, j = ij
        return KElem(self.spec, self.num[i, j], self.den)

    def rows(self):
        m, c = self.shape
        return [[self[i, j] for j in range(c)] for i in range(m)]

    def to_strings(self):
        return [[str(x) for x in r] for r in self.rows()]

    # -- arithmetic -------------------------------------------------------------

    def _common(self, other: "KMatrix"):
        if self.spec != other.spec:
            raise ValueError("field mismatch")
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        F, s = self.spec.F, self.spec.s
        den = _lcm(self.spec, self.den, other.den)

        def lift(M):
            if _is_one(F, M.den) and _is_one(F, den):
                return M.num
            return _scale_rows(F, M.num, tpoly.divexact(F, den, M.den, s))

        return lift(self), lift(other), den

    def __add__(self, other):
        a, b, den = self._common(other)
        shape = tuple(max(x, y) for x, y in zip(a.shape[3:], b.shape[3:]))
        return KMatrix(self.spec, pad_batch(a, 2, shape) + pad_batch(b, 2, shape), den)

    def __neg__(self):
        return KMatrix(self.spec, -self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other: "KMatrix") -> "KMatrix":
        F = self.spec.F
        num = dense.batch_matmul(F, self.num, other.num)
        den = self.den if _is_one(F, other.den) else (
            other.den if _is_one(F, self.den) else dense.mul(F, self.den, other.den))
        return KMatrix(self.spec, num, den)

    def __eq__(self, other):
        if not isinstance(other, KMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows() == other.rows()

    __hash__ = None

    # -- characteristic polynomial -----------------------------------------------

    def charpoly(self) -> ThetaPoly:
        """det(theta I - M) as a monic ThetaPoly (Berkowitz, division-free)."""
        spec = self.spec
        m = self.shape[0]
        if self.shape[0] != self.shape[1]:
            raise ValueError("charpoly of a non-square matrix")
        if m == 0:
            return ThetaPoly.one(spec)
        v = berkowitz(spec.F, self.num)              # (e, m+1, *t), high degree first
        coeffs = v[:, ::-1]
        if self.is_polynomial():
            return ThetaPoly(spec, coeffs)
        # chi_{A/c}(x) = c^(-m) chi_A(c x): coefficient of x^k picks up c^(k - m)
        F = spec.F
        cols = []
        pw = one_array(spec)
        powers = [pw]
        for _ in range(m):
            pw = dense.mul(F, pw, self.den)
            powers.append(pw)
        for k in range(m + 1):
            cols.append(dense.mul(F, coeffs[:, k], powers[k]))
        num = _stack(cols, 1, 0)
        return ThetaPoly(spec, num, powers[m])


def _scale_rows(F, a: np.ndarray, f: np.ndarray) -> np.ndarray:
    m, c = a.shape[:2]
    flat = [dense.mul(F, a[i, j], f) for i in range(m) for j in range(c)]
    out = _stack(flat, 0, 0)
    return out.reshape((m, c) + out.shape[1:])


def berkowitz(F, A: np.ndarray) -> np.ndarray:
    """Characteristic polynomial coefficients of a square polynomial matrix.

    ``A`` has shape (m, m, e, *t).  Returns (e, m+1, *t) with the leading
    coefficient 1 at index 0.
    """
    m = A.shape[0]
    lead = A.ndim - 3
    one = np.zeros((F.e,) + (1,) * lead, dtype=np.int64)
    one[(0,) + (0,) * lead] = 1
    v = _stack([one, dense.neg(F, A[0, 0])], 1, 0)
    for r in range(1, m):
        R = A[r:r + 1, :r]
        C = A[:r, r:r + 1]
        t = [one, dense.neg(F, A[r, r])]
        X = C
        for k in range(r):
            t.append(dense.neg(F, dense.trim(dense.batch_matmul(F, R, X)[0, 0])))
            if k < r - 1:
                X = trim_batch(dense.batch_matmul(F, A[:r, :r], X), 2)
        toeplitz = _stack(t, 1, 0)
        v = dense.trim(dense.mul(F, toeplitz, v)[:, :r + 2])
        if v.shape[1] < r + 2:
            v = np.pad(v, [(0, 0), (0, r + 2 - v.shape[1])] + [(0, 0)] * lead)
    return v


def det_unipotent_series(F, M: np.ndarray, N: int) -> np.ndarray:
    """det of a matrix over F[t][Z]/Z^N that is the identity mod Z.

    ``M`` has shape (m, m, e, N, *t).  Gaussian elimination: every pivot
    has constant term 1, hence is a unit of F[t][[Z]].
    """
    m = M.shape[0]
    lead = M.ndim - 4
    det = np.zeros((F.e, N) + (1,) * lead, dtype=np.int64)
    det[(0, 0) + (0,) * lead] = 1
    M = M.copy()
    for c in range(m):
        piv = M[c, c]
        if piv[(0, 0) + (0,) * lead] != 1 or piv[(slice(None), 0)].sum() != 1:
            raise ArithmeticError("pivot is not a unit")
        det = dense.mul(F, det, piv)[:, :N]
        if c == m - 1:
            break
        inv = _series_inverse(F, piv, N)[:, :N]
        col = dense.batch_matmul(F, M[c + 1:, c:c + 1], inv[None, None])[:, :, :, :N]
        upd = dense.batch_matmul(F, col, M[c:c + 1, c + 1:])
        upd = upd[:, :, :, :N]
        sub = M[c + 1:, c + 1:]
        shape = tuple(max(x, y) for x, y in zip(sub.shape[3:], upd.shape[3:]))
        M = pad_batch(M, 2, shape)
        M[c + 1:, c + 1:] = (pad_batch(sub, 2, shape) - pad_batch(upd, 2, shape)) % F.p
        M = trim_batch(M, 2)
        if M.shape[3] < N:
            M = pad_batch(M, 2, (N,) + M.shape[4:])
    return det
