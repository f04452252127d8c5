"""Truncated Laurent series in 1/theta over k = F(t1, ..., ts).

A series stores its highest theta-exponent ``top``, a numerator array of
shape ``(e, L, *t_dims)`` whose index i carries theta^(top - i), a common
t-denominator, and an absolute precision ``prec``: coefficients of
theta^(-j) are known for every j <= prec.  ``prec=None`` marks an exact
(finite) series.  Coefficients past the stored range are zero.

Precision propagation: a sum keeps min(N_a, N_b); a product gets
min(N_a + v(b), N_b + v(a)); an inverse gets N - 2 v.
"""

from __future__ import annotations

import numpy as np

from . import dense
from .kfield import INF, FieldSpec, KElem, _is_one, one_array
from .thetapoly import ThetaPoly, reduce_theta


class PrecisionError(ArithmeticError):
    """A requested coefficient lies beyond the known precision."""


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class LaurentSeries:
    """Element of K_{s,infty} = k_s((1/theta)) known to absolute precision."""

    __slots__ = ("spec", "top", "num", "den", "prec", "_key")

    def __init__(self, spec: FieldSpec, top, num: np.ndarray, prec, den=None,
                 *, reduced: bool = False):
        self.spec = spec
        F = spec.F
        if den is None:
            den = one_array(spec)
            reduced = True
        num = num % F.p
        # drop leading zero coefficients
        if num.shape[1]:
            nzrows = np.nonzero(num.reshape(num.shape[0], num.shape[1], -1).any(axis=(0, 2)))[0]
        else:
            nzrows = np.array([], dtype=np.int64)
        if len(nzrows) == 0 or top is None:
            self.top = None
            self.num = np.zeros((F.e, 0) + (1,) * spec.s, dtype=np.int64)
            self.den = one_array(spec)
            self.prec = prec
            self._key = None
            return
        first = int(nzrows[0])
        top = top - first
        num = num[:, first:int(nzrows[-1]) + 1]
        if prec is not None:
            keep = top + prec + 1
            if keep <= 0:
                self.top = None
                self.num = np.zeros((F.e, 0) + (1,) * spec.s, dtype=np.int64)
                self.den = one_array(spec)
                self.prec = prec
                self._key = None
                return
            num = num[:, :keep]
        if not reduced:
            num, den = reduce_theta(spec, num, den)
        else:
            num = dense.trim(num)
        self.top = top
        self.num = num
        self.den = den
        self.prec = prec
        self._key = None

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, spec: FieldSpec, prec=None) -> "LaurentSeries":
        return cls(spec, None, np.zeros((spec.F.e, 0) + (1,) * spec.s, dtype=np.int64), prec)

    @classmethod
    def from_theta(cls, f: ThetaPoly, prec=None) -> "LaurentSeries":
        if f.is_zero():
            return cls.zero(f.spec, prec)
        return cls(f.spec, f.degree, f.num[:, ::-1], prec, f.den, reduced=True)

    @classmethod
    def from_kelem(cls, c: KElem, prec=None) -> "LaurentSeries":
        return cls(c.spec, 0, c.num[:, None], prec, c.den, reduced=True)

    @classmethod
    def one(cls, spec: FieldSpec, prec=None) -> "LaurentSeries":
        return cls.from_kelem(KElem.one(spec), prec)

    @classmethod
    def monomial(cls, spec: FieldSpec, k: int, c: KElem | None = None, prec=None):
        c = c if c is not None else KElem.one(spec)
        return cls(spec, k, c.num[:, None], prec, c.den, reduced=True)

    @classmethod
    def from_terms(cls, spec: FieldSpec, terms, prec=None) -> "LaurentSeries":
        """From ``(degree, KElem)`` pairs."""
        out = cls.zero(spec, None)
        for d, c in terms:
            out = out + cls.monomial(spec, d, c)
        return out.truncate(prec) if prec is not None else out

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes."""
        return self.top is None

    def is_exact(self) -> bool:
        return self.prec is None

    def valuation(self):
        """v_infty: minus the top degree; +inf for a (known-)zero series."""
        return INF if self.top is None else -self.top

    def _valuation_bound(self):
        """Lower bound for v_infty used by the precision rules."""
        if self.top is not None:
            return -self.top
        return INF if self.prec is None else self.prec + 1

    @property
    def bottom(self):
        """Lowest stored exponent."""
        return None if self.top is None else self.top - self.num.shape[1] + 1

    def coeff(self, d: int) -> KElem:
        if self.prec is not None and d < -self.prec:
            raise PrecisionError(f"coefficient of T^{d} is beyond precision {self.prec}")
        if self.top is None:
            return KElem.zero(self.spec)
        i = self.top - d
        if 0 <= i < self.num.shape[1]:
            return KElem(self.spec, self.num[:, i], self.den)
        return KElem.zero(self.spec)

    def terms(self):
        """Nonzero ``(degree, KElem)`` pairs, descending degree."""
        if self.top is None:
            return []
        out = []
        for i in range(self.num.shape[1]):
            if self.num[:, i].any():
                out.append((self.top - i, KElem(self.spec, self.num[:, i], self.den)))
        return out

    def leading(self) -> KElem:
        if self.top is None:
            raise ValueError("zero series has no leading coefficient")
        return self.coeff(self.top)

    def is_monic(self) -> bool:
        return self.top is not None and self.leading().is_one()

    # -- alignment helpers ------------------------------------------------------

    def _aligned(self, top: int, length: int) -> np.ndarray:
        """Numerator placed on exponents top, top-1, ..., top-length+1."""
        out_shape = (self.spec.F.e, max(length, 0)) + self.num.shape[2:]
        out = np.zeros(out_shape, dtype=np.int64)
        if self.top is None or length <= 0:
            return out
        off = top - self.top
        lo = max(0, off)
        hi = min(length, off + self.num.shape[1])
        if hi > lo:
            out[:, lo:hi] = self.num[:, lo - off:hi - off]
        return out

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LaurentSeries):
            if other.spec != self.spec:
                raise ValueError("field mismatch")
            return other
        if isinstance(other, ThetaPoly):
            return LaurentSeries.from_theta(other)
        if isinstance(other, KElem):
            return LaurentSeries.from_kelem(other)
        if isinstance(other, (int, np.integer)):
            return LaurentSeries.from_kelem(KElem.from_int(self.spec, int(other)))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prec = _min_prec(self.prec, other.prec)
        if self.top is None and other.top is None:
            return LaurentSeries.zero(self.spec, prec)
        top = max(t for t in (self.top, other.top) if t is not None)
        low = min(b for b in (self.bottom, other.bottom) if b is not None)
        if prec is not None:
            low = max(low, -prec)
        length = top - low + 1
        if length <= 0:
            return LaurentSeries.zero(self.spec, prec)
        F = self.spec.F
        a, b = self._aligned(top, length), other._aligned(top, length)
        if _is_one(F, self.den) and _is_one(F, other.den):
            return LaurentSeries(self.spec, top, dense.add(F, a, b), prec)
        num = dense.add(F, dense.mul(F, a, other.den[:, None]), dense.mul(F, b, self.den[:, None]))
        return LaurentSeries(self.spec, top, num, prec, dense.mul(F, self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.spec, self.top, dense.neg(self.spec.F, self.num), self.prec,
                             self.den, reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        va, vb = self._valuation_bound(), other._valuation_bound()
        cands = []
        if self.prec is not None:
            cands.append(self.prec + vb)
        if other.prec is not None:
            cands.append(other.prec + va)
        prec = None
        if cands:
            prec = min(cands)
            if prec == INF:
                prec = max(c for c in (self.prec, other.prec) if c is not None)
            prec = int(prec)
        if self.top is None or other.top is None:
            return LaurentSeries.zero(self.spec, prec)
        top = self.top + other.top
        F = self.spec.F
        a, b = self.num, other.num
        if prec is not None:
            a = a[:, :max(1, top + prec + 1)]
            b = b[:, :max(1, top + prec + 1)]
        num = dense.mul(F, a, b)
        if _is_one(F, self.den) and _is_one(F, other.den):
            return LaurentSeries(self.spec, top, num, prec)
        return LaurentSeries(self.spec, top, num, prec, dense.mul(F, self.den, other.den))

    __rmul__ = __mul__

    def scale(self, c: KElem) -> "LaurentSeries":
        return self * LaurentSeries.from_kelem(c)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by theta^k (exact)."""
        prec = None if self.prec is None else self.prec - k
        if self.top is None:
            return LaurentSeries.zero(self.spec, prec)
        return LaurentSeries(self.spec, self.top + k, self.num, prec, self.den, reduced=True)

    def inverse(self, prec=None) -> "LaurentSeries":
        """1/self.  For exact input the target precision must be given."""
        if self.top is None:
            raise ZeroDivisionError("inverse of a zero series")
        if prec is None:
            if self.prec is None:
                raise ValueError("exact series: give the precision of the inverse")
            prec = self.prec + 2 * self.top
        spec, F = self.spec, self.spec.F
        R = prec - self.top   # need W_0 .. W_R
        if R < 0:
            return LaurentSeries.zero(spec, prec)
        num = self.num[:, :R + 1]
        n0 = num[:, 0]
        if all(d == 1 for d in n0.shape[1:]):
            c = F.inv(F.code(n0.reshape(-1)))
            bm = dense.scale(F, c, num)
            W = _series_inverse(F, bm, R + 1)
            out = dense.scale(F, c, dense.mul(F, W, self.den[:, None]))
            return LaurentSeries(spec, -self.top, out, prec, one_array(spec))
        # t-dependent leading coefficient: W_i carries the denominator n0^(i+1)
        W = [dense.constant(F, 1, spec.s)]
        m = [None]
        pw = dense.constant(F, 1, spec.s)
        for k in range(1, R + 1):
            nk = num[:, k] if k < num.shape[1] else np.zeros_like(n0)
            m.append(dense.mul(F, nk, pw))
            pw = dense.mul(F, pw, n0)
        for i in range(1, R + 1):
            acc = np.zeros((F.e,) + (1,) * spec.s, dtype=np.int64)
            for k in range(1, i + 1):
                if m[k].any():
                    acc = dense.sub(F, acc, dense.mul(F, m[k], W[i - k]))
            W.append(acc)
        powers = [dense.constant(F, 1, spec.s)]
        for _ in range(R + 1):
            powers.append(dense.mul(F, powers[-1], n0))
        cols = [dense.mul(F, dense.mul(F, self.den, W[i]), powers[R - i]) for i in range(R + 1)]
        shape = tuple(max(c.shape[j] for c in cols) for j in range(1, 1 + spec.s))
        out = np.stack([dense.pad(c, shape) for c in cols], axis=1)
        return LaurentSeries(spec, -self.top, out, prec, powers[R + 1])

    def __truediv__(self, other):
        return laurent_arith(self, self._coerce(other), "div")

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = LaurentSeries.one(self.spec)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def truncate(self, prec: int) -> "LaurentSeries":
        new = prec if self.prec is None else min(prec, self.prec)
        return LaurentSeries(self.spec, self.top, self.num, new, self.den, reduced=True) \
            if self.top is not None else LaurentSeries.zero(self.spec, new)

    def twist(self, k: int = 1, max_prec=None) -> "LaurentSeries":
        """tau^k: theta -> theta^(q^k); precision scales to q^k N (optionally capped)."""
        if k == 0:
            return self if max_prec is None else self.truncate(max_prec)
        Q = self.spec.q ** k
        prec = None if self.prec is None else self.prec * Q
        if max_prec is not None:
            prec = max_prec if prec is None else min(prec, max_prec)
        if self.top is None:
            return LaurentSeries.zero(self.spec, prec)
        top = self.top * Q
        n = self.num.shape[1]
        if prec is not None:
            n = min(n, (top + prec) // Q + 1)
        if n <= 0:
            return LaurentSeries.zero(self.spec, prec)
        out = np.zeros((self.num.shape[0], (n - 1) * Q + 1) + self.num.shape[2:], dtype=np.int64)
        out[:, ::Q] = self.num[:, :n]
        return LaurentSeries(self.spec, top, out, prec, self.den, reduced=True)

    def hyperderivative(self, j: int) -> "LaurentSeries":
        """D_j extended termwise: D_j(theta^k) = C(k, j) theta^(k-j) for all integers k."""
        from .thetapoly import binom_mod
        if j == 0:
            return self
        prec = None if self.prec is None else self.prec + j
        if self.top is None:
            return LaurentSeries.zero(self.spec, prec)
        p = self.spec.p
        n = self.num.shape[1]
        mult = np.array([binom_mod(self.top - i, j, p) for i in range(n)], dtype=np.int64)
        out = self.num * mult.reshape((1, n) + (1,) * self.spec.s) % p
        return LaurentSeries(self.spec, self.top - j, out, prec, self.den)

    def monicize(self):
        """(unit, monic) with the leading coefficient moved into ``unit``."""
        if self.top is None:
            raise ValueError("cannot monicize a zero series")
        u = self.leading()
        return u, self * LaurentSeries.from_kelem(u.inverse())

    def map_coeffs(self, fn) -> "LaurentSeries":
        """Apply a k-linear coefficient map given on KElem."""
        terms = [(d, fn(c)) for d, c in self.terms()]
        out = LaurentSeries.from_terms(self.spec, terms)
        return out.truncate(self.prec) if self.prec is not None else out

    # -- comparison ------------------------------------------------------------

    def agrees(self, other: "LaurentSeries", N: int) -> bool:
        """Coefficients of theta^d agree for all d >= -N (needs both precisions >= N)."""
        diff = (self - other)
        if diff.prec is not None and diff.prec < N:
            raise PrecisionError(f"compare at {N} with precision only {diff.prec}")
        return diff.top is None or diff.top < -N

    def key(self):
        if self._key is None:
            self._key = (self.top, self.prec, self.num.shape, self.num.tobytes(),
                         self.den.shape, self.den.tobytes())
        return self._key

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.spec == other.spec and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __str__(self):
        from .text import format_theta_terms
        body = format_theta_terms(self.spec, self.terms())
        if self.prec is None:
            return body
        return f"{body}+O(T^(-{self.prec + 1}))"

    def __repr__(self):
        return f"LaurentSeries({self})"

    # -- serialisation ----------------------------------------------------------

    def to_json(self) -> dict:
        return {"prec": self.prec,
                "terms": [{"deg": d, "coeff": str(c)} for d, c in self.terms()],
                "field": self.spec.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "LaurentSeries":
        from .text import parse_kelem
        fj = obj["field"]
        spec = FieldSpec(fj["p"], fj.get("e", 1), fj.get("s", 0), fj.get("m", 1))
        terms = [(int(t["deg"]), parse_kelem(spec, t["coeff"])) for t in obj["terms"]]
        out = cls.from_terms(spec, terms)
        prec = obj.get("prec")
        return out.truncate(prec) if prec is not None else out


def _series_inverse(F, b: np.ndarray, n: int) -> np.ndarray:
    """Power-series inverse (in the index variable) of ``b`` with b[0] = 1, length n."""
    W = np.zeros((F.e, 1) + b.shape[2:], dtype=np.int64)
    W[(0, 0) + (0,) * (b.ndim - 2)] = 1
    length = 1
    while length < n:
        length = min(2 * length, n)
        bw = dense.mul(F, b[:, :length], W)[:, :length]
        # W <- W * (2 - b W)
        corr = dense.neg(F, bw)
        corr[(slice(None), 0) + (0,) * (b.ndim - 2)] = (corr[(slice(None), 0) + (0,) * (b.ndim - 2)]
                                                     + dense.constant(F, 2 % F.p, 0)) % F.p
        W = dense.mul(F, W, corr)[:, :length]
    return W[:, :n]


def laurent_arith(a: LaurentSeries, b: LaurentSeries, op: str, prec=None) -> LaurentSeries:
    """add | sub | mul | div with the standard precision rules, optionally truncated."""
    if op == "add":
        out = a + b
    elif op == "sub":
        out = a - b
    elif op == "mul":
        out = a * b
    elif op == "div":
        if b.is_zero():
            raise ZeroDivisionError("division by a zero series")
        if prec is not None:
            va = a._valuation_bound()
            inv_prec = prec - (0 if va == INF else int(va))
            if b.prec is not None:
                inv_prec = min(inv_prec, b.prec + 2 * b.top)
            out = a * b.inverse(inv_prec)
        else:
            if b.prec is None and a.prec is None:
                raise ValueError("exact quotient: give a precision")
            if b.prec is None:
                va = a._valuation_bound()
                va = a.prec + 1 if va == INF else int(va)
                out = a * b.inverse(a.prec + b.top - va)
            else:
                out = a * b.inverse()
    else:
        raise ValueError(f"unknown operation {op!r}")
    if prec is not None:
        out = out.truncate(prec)
    return out
