"""Polynomials in theta over k = F(t1, ..., ts).

A ``ThetaPoly`` stores a numerator array of shape ``(e, n_theta, *t_dims)``
and a common t-denominator of shape ``(e, *t_dims)``.  The pair is kept
reduced: the denominator is graded-lex monic and shares no factor with
the content of the numerator.  Most polynomials met in practice have
denominator 1, and every operation has a fast path for that case.
"""

from __future__ import annotations

import numpy as np

from . import dense, tpoly
from .kfield import INF, FieldSpec, KElem, _is_one, one_array


def binom_mod(n: int, k: int, p: int) -> int:
    """Binomial coefficient C(n, k) mod p by Lucas, with C(-m, k) = (-1)^k C(m+k-1, k)."""
    if k < 0:
        return 0
    if n < 0:
        sign = -1 if k % 2 else 1
        return (sign * binom_mod(-n + k - 1, k, p)) % p
    if k > n:
        return 0
    out = 1
    while n or k:
        ni, ki = n % p, k % p
        if ki > ni:
            return 0
        c = 1
        for i in range(ki):
            c = c * (ni - i) // (i + 1)
        out = out * c % p
        n //= p
        k //= p
    return out


def _den_divexact(spec, a, g):
    """Divide each theta-coefficient of ``a`` exactly by the t-polynomial ``g``."""
    F, s = spec.F, spec.s
    cols = [tpoly.divexact(F, a[:, i], g, s) for i in range(a.shape[1])]
    shape = tuple(max(c.shape[j] for c in cols) for j in range(1, 1 + s))
    return np.stack([dense.pad(c, shape) for c in cols], axis=1)


def reduce_theta(spec: FieldSpec, num: np.ndarray, den: np.ndarray):
    F, s = spec.F, spec.s
    num = dense.trim(num)
    den = dense.trim(den)
    if not den.any():
        raise ZeroDivisionError("zero denominator")
    if not num.any():
        return num, one_array(spec)
    if _is_one(F, den):
        return num, den
    if s == 0:
        c = F.inv(F.code(den))
        return dense.scale(F, c, num), one_array(spec)
    g = den
    for i in range(num.shape[1]):
        col = num[:, i]
        if col.any():
            g = tpoly.gcd(F, g, dense.trim(col), s)
            if _is_one(F, g):
                break
    if not _is_one(F, g):
        num = _den_divexact(spec, num, g)
        den = tpoly.divexact(F, den, g, s)
    c = tpoly.leading_code(F, den, s)
    if c != 1:
        inv = F.inv(c)
        num, den = dense.scale(F, inv, num), dense.scale(F, inv, den)
    return dense.trim(num), dense.trim(den)


def _shift_theta(a: np.ndarray, k: int) -> np.ndarray:
    if k == 0:
        return a
    widths = [(0, 0), (k, 0)] + [(0, 0)] * (a.ndim - 2)
    return np.pad(a, widths)


def _with_theta_axis(c: np.ndarray) -> np.ndarray:
    return c[:, None]


class ThetaPoly:
    """Element of R_s = k_s[theta]."""

    __slots__ = ("spec", "num", "den", "_key")

    def __init__(self, spec: FieldSpec, num: np.ndarray, den: np.ndarray | None = None,
                 *, reduced: bool = False):
        self.spec = spec
        if num.ndim != spec.s + 2:
            raise ValueError("numerator rank does not match the field")
        if den is None:
            num = dense.trim(num)
            den = one_array(spec)
        elif not reduced:
            num, den = reduce_theta(spec, num, den)
        self.num = num
        self.den = den
        self._key = None

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, spec: FieldSpec) -> "ThetaPoly":
        return cls(spec, np.zeros((spec.F.e, 1) + (1,) * spec.s, dtype=np.int64))

    @classmethod
    def one(cls, spec: FieldSpec) -> "ThetaPoly":
        return cls.constant(spec, KElem.one(spec))

    @classmethod
    def theta(cls, spec: FieldSpec) -> "ThetaPoly":
        return cls.monomial(spec, 1)

    @classmethod
    def monomial(cls, spec: FieldSpec, k: int, c: KElem | None = None) -> "ThetaPoly":
        c = c if c is not None else KElem.one(spec)
        a = np.zeros((spec.F.e, k + 1) + c.num.shape[1:], dtype=np.int64)
        a[:, k] = c.num
        return cls(spec, a, c.den, reduced=True)

    @classmethod
    def constant(cls, spec: FieldSpec, c) -> "ThetaPoly":
        if not isinstance(c, KElem):
            c = KElem.from_int(spec, int(c))
        return cls(spec, c.num[:, None], c.den, reduced=True)

    @classmethod
    def from_coeffs(cls, spec: FieldSpec, coeffs) -> "ThetaPoly":
        """From a list of KElem or ints, ascending degree."""
        out = cls.zero(spec)
        for i, c in enumerate(coeffs):
            if not isinstance(c, KElem):
                c = KElem.from_int(spec, int(c))
            if not c.is_zero():
                out = out + cls.monomial(spec, i, c)
        return out

    @classmethod
    def from_codes(cls, spec: FieldSpec, codes, base: bool = True) -> "ThetaPoly":
        """From F_q codes (``base=True``, embedded into F) or F codes, ascending."""
        codes = list(codes) or [0]
        if base:
            emb = spec.embed
            codes = [emb[c] for c in codes]
        F = spec.F
        arr = dense.from_codes(F, codes)
        return cls(spec, arr.reshape((F.e, len(codes)) + (1,) * spec.s))

    # -- structure -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num.any()

    @property
    def degree(self) -> int:
        return -1 if self.is_zero() else self.num.shape[1] - 1

    def is_polynomial(self) -> bool:
        """True when the t-denominator is 1."""
        return _is_one(self.spec.F, self.den)

    def is_theta_free(self) -> bool:
        return self.num.shape[1] == 1

    def has_t(self) -> bool:
        return any(d > 1 for d in self.num.shape[2:]) or not self.is_polynomial()

    def coeff(self, i: int) -> KElem:
        if i < 0 or i >= self.num.shape[1]:
            return KElem.zero(self.spec)
        return KElem(self.spec, self.num[:, i], self.den)

    def coeffs(self) -> list[KElem]:
        return [self.coeff(i) for i in range(self.num.shape[1])]

    def leading(self) -> KElem:
        if self.is_zero():
            return KElem.zero(self.spec)
        return self.coeff(self.degree)

    def is_monic(self) -> bool:
        return not self.is_zero() and self.leading().is_one()

    def to_kelem(self) -> KElem:
        if self.degree > 0:
            raise ValueError(f"{self} is not constant in theta")
        return self.coeff(0)

    def base_codes(self) -> tuple[int, ...]:
        """Coefficients as F_q codes; raises if some coefficient is outside F_q."""
        if self.has_t():
            raise ValueError(f"{self} has t-dependent coefficients")
        F = self.spec.F
        codes = dense.codes(F, self.num.reshape(F.e, -1))
        inv = {c: i for i, c in enumerate(self.spec.embed)}
        try:
            return tuple(inv[int(c)] for c in codes)
        except KeyError:
            raise ValueError(f"{self} has coefficients outside F_q") from None

    def field_codes(self) -> tuple[int, ...]:
        """Coefficients as F codes (theta-free of t)."""
        if self.has_t():
            raise ValueError(f"{self} has t-dependent coefficients")
        F = self.spec.F
        return tuple(int(c) for c in dense.codes(F, self.num.reshape(F.e, -1)))

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, ThetaPoly):
            if other.spec != self.spec:
                raise ValueError("field mismatch")
            return other
        if isinstance(other, KElem):
            return ThetaPoly.constant(self.spec, other)
        if isinstance(other, (int, np.integer)):
            return ThetaPoly.constant(self.spec, int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        F = self.spec.F
        if self.is_polynomial() and other.is_polynomial():
            return ThetaPoly(self.spec, dense.add(F, self.num, other.num))
        num = dense.add(F, dense.mul(F, self.num, _with_theta_axis(other.den)),
                        dense.mul(F, other.num, _with_theta_axis(self.den)))
        return ThetaPoly(self.spec, num, dense.mul(F, self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return ThetaPoly(self.spec, dense.neg(self.spec.F, self.num), self.den, reduced=True)

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
        F = self.spec.F
        num = dense.mul(F, self.num, other.num)
        if self.is_polynomial() and other.is_polynomial():
            return ThetaPoly(self.spec, num)
        return ThetaPoly(self.spec, num, dense.mul(F, self.den, other.den))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = ThetaPoly.one(self.spec), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: KElem) -> "ThetaPoly":
        return self * c

    def divmod(self, other: "ThetaPoly"):
        """Euclidean division over k_s: self = q * other + r with deg r < deg other."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        spec, F = self.spec, self.spec.F
        if self.degree < other.degree:
            return ThetaPoly.zero(spec), self
        a, b = self.num, other.num
        db = b.shape[1] - 1
        lc = b[:, db]
        lc_const = all(d == 1 for d in lc.shape[1:])
        if lc_const:
            inv = F.inv(F.code(lc.reshape(-1) if F.e > 1 else lc.reshape(1)))
            q, r = _monic_divmod(spec, a, dense.scale(F, inv, b))
            q = dense.scale(F, inv, q)
            quo = ThetaPoly(spec, dense.mul(F, q, _with_theta_axis(other.den)),
                            self.den) if not (other.is_polynomial() and self.is_polynomial()) \
                else ThetaPoly(spec, q)
            rem = ThetaPoly(spec, r, self.den) if not self.is_polynomial() else ThetaPoly(spec, r)
            return quo, rem
        q, r, steps = _pseudo_divmod(spec, a, b)
        lck = dense.constant(F, 1, spec.s)
        for _ in range(steps):
            lck = dense.mul(F, lck, lc)
        den = dense.mul(F, lck, self.den)
        quo = ThetaPoly(spec, dense.mul(F, q, _with_theta_axis(other.den)), den)
        rem = ThetaPoly(spec, r, den)
        return quo, rem

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    # -- maps -------------------------------------------------------------

    def twist(self, k: int = 1) -> "ThetaPoly":
        """tau^k: theta -> theta^(q^k), coefficients fixed."""
        if k == 0 or self.degree <= 0:
            return self
        Q = self.spec.q ** k
        n = self.num.shape[1]
        out = np.zeros((self.num.shape[0], (n - 1) * Q + 1) + self.num.shape[2:], dtype=np.int64)
        out[:, ::Q] = self.num
        return ThetaPoly(self.spec, out, self.den, reduced=True)

    def hyperderivative(self, j: int) -> "ThetaPoly":
        """D_j(theta^k) = C(k, j) theta^(k-j)."""
        if j < 0:
            raise ValueError("hyperderivative order must be nonnegative")
        if j == 0:
            return self
        n = self.num.shape[1]
        if n <= j:
            return ThetaPoly.zero(self.spec)
        p = self.spec.p
        mult = np.array([binom_mod(k, j, p) for k in range(j, n)], dtype=np.int64)
        shape = (1, n - j) + (1,) * self.spec.s
        out = self.num[:, j:] * mult.reshape(shape) % p
        return ThetaPoly(self.spec, out, self.den)

    def evaluate(self, x) -> KElem:
        """Substitute theta = x for x in k (Horner)."""
        if not isinstance(x, KElem):
            x = KElem.from_int(self.spec, int(x))
        acc = KElem.zero(self.spec)
        for i in range(self.num.shape[1] - 1, -1, -1):
            acc = acc * x + self.coeff(i)
        return acc

    def compose(self, inner: "ThetaPoly") -> "ThetaPoly":
        acc = ThetaPoly.zero(self.spec)
        for i in range(self.num.shape[1] - 1, -1, -1):
            acc = acc * inner + self.coeff(i)
        return acc

    def frobenius_coeffs(self, k: int = 1) -> "ThetaPoly":
        """Raise every constant of F to the p^k-th power (t_i and theta fixed)."""
        F = self.spec.F
        def fr(a):
            c = dense.codes(F, a)
            return dense.from_codes(F, F.vpow(c, F.p ** k))
        return ThetaPoly(self.spec, fr(self.num), fr(self.den))

    def valuation(self):
        return INF if self.is_zero() else -self.degree

    def monicize(self):
        if self.is_zero():
            raise ValueError("cannot monicize zero")
        u = self.leading()
        return u, self * u.inverse()

    # -- comparison ----------------------------------------------------------

    def key(self):
        if self._key is None:
            self._key = (self.num.shape, self.num.tobytes(), self.den.shape, self.den.tobytes())
        return self._key

    def __eq__(self, other):
        if isinstance(other, (int, np.integer, KElem)):
            other = self._coerce(other)
        if not isinstance(other, ThetaPoly):
            return NotImplemented
        return self.spec == other.spec and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __str__(self):
        from .text import format_theta
        return format_theta(self)

    def __repr__(self):
        return f"ThetaPoly({self})"


def _monic_divmod(spec: FieldSpec, a: np.ndarray, b: np.ndarray):
    """Divide numerator arrays by ``b`` whose leading theta-coefficient is 1."""
    F = spec.F
    nb = b.shape[1]
    db = nb - 1
    na = a.shape[1]
    t_free = all(d == 1 for d in b.shape[2:])
    if t_free:
        bcodes = [int(c) for c in dense.codes(F, b.reshape(F.e, nb))]
        a = a.copy()
        q = np.zeros((F.e, na - db) + a.shape[2:], dtype=np.int64)
        nzb = [(k, c) for k, c in enumerate(bcodes[:db]) if c]
        for i in range(na - 1, db - 1, -1):
            c = a[:, i] % F.p
            if not c.any():
                continue
            q[:, i - db] = c
            a[:, i] = 0
            for k, bk in nzb:
                a[:, i - db + k] = (a[:, i - db + k] - dense.scale(F, bk, c)) % F.p
        return q, a[:, :max(db, 1)] % F.p
    q = np.zeros((F.e, na - db) + (1,) * spec.s, dtype=np.int64)
    for i in range(na - 1, db - 1, -1):
        if i >= a.shape[1]:
            continue
        c = a[:, i]
        if not c.any():
            continue
        c = dense.trim(c)
        qi = np.zeros((F.e, i - db + 1) + c.shape[1:], dtype=np.int64)
        qi[:, i - db] = c
        q = dense.add(F, q, qi)
        a = dense.sub(F, a, _shift_theta(dense.mul(F, _with_theta_axis(c), b), i - db))
    r = a[:, :max(db, 1)] if a.shape[1] > db else a
    return q, r


def _pseudo_divmod(spec: FieldSpec, a: np.ndarray, b: np.ndarray):
    """lc(b)^steps * a = q * b + r, computed without division."""
    F = spec.F
    db = b.shape[1] - 1
    lc = _with_theta_axis(b[:, db])
    q = np.zeros((F.e, 1) + (1,) * spec.s, dtype=np.int64)
    steps = 0
    a = dense.trim(a)
    while a.any() and a.shape[1] - 1 >= db:
        i = a.shape[1] - 1
        c = _with_theta_axis(dense.trim(a[:, i]))
        a = dense.sub(F, dense.mul(F, lc, a), _shift_theta(dense.mul(F, c, b), i - db))
        q = dense.add(F, dense.mul(F, lc, q), _shift_theta(c, i - db))
        a = dense.trim(a)
        steps += 1
    return q, a, steps
