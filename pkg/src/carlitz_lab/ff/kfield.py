"""Coefficient fields k = F(t1, ..., ts) and their elements.

``FieldSpec`` fixes the characteristic p, q = p^e, the number s of
t-indeterminates and an optional constant extension F = F_{q^m}.  A
``KElem`` is a reduced fraction of two t-polynomials over F.  Reduction
is by gcd, and the denominator is scaled so that its graded-lex leading
coefficient is 1, which makes equality syntactic.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import dense, tpoly
from .gf import GF, field, is_prime

INF = float("inf")


@dataclass(frozen=True)
class FieldSpec:
    """Parameters of the coefficient field k."""

    p: int
    e: int = 1
    s: int = 0
    m: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.e < 1 or self.m < 1:
            raise ValueError("extension degrees must be positive")
        if not 0 <= self.s <= 2:
            raise ValueError("at most two t-indeterminates are supported")
        if self.p ** (self.e * self.m) >= 2 ** 31:
            raise ValueError("field too large for machine-word codes")

    @property
    def q(self) -> int:
        return self.p ** self.e

    @property
    def F(self) -> GF:
        """The constant field F_{q^m} in which coefficients live."""
        return field(self.p, self.e * self.m)

    @property
    def base(self) -> GF:
        """F_q."""
        return field(self.p, self.e)

    @property
    def embed(self) -> tuple[int, ...]:
        """Codes of F_q inside F."""
        return self.F.embedding(self.e)

    def with_s(self, s: int) -> "FieldSpec":
        return FieldSpec(self.p, self.e, s, self.m)

    def with_m(self, m: int) -> "FieldSpec":
        return FieldSpec(self.p, self.e, self.s, m)

    def to_json(self) -> dict:
        out = {"p": self.p, "e": self.e, "s": self.s}
        if self.m != 1:
            out["m"] = self.m
        return out

    @staticmethod
    def for_q(q: int, s: int = 0, m: int = 1) -> "FieldSpec":
        for p in range(2, q + 1):
            if q % p == 0:
                e, r = 0, q
                while r % p == 0:
                    r //= p
                    e += 1
                if r != 1 or not is_prime(p):
                    break
                return FieldSpec(p, e, s, m)
        raise ValueError(f"q = {q} is not a prime power")


def _is_one(F: GF, a: np.ndarray) -> bool:
    return all(d == 1 for d in a.shape[1:]) and a.flat[0] == 1 and not a[1:].any()


def one_array(spec: FieldSpec) -> np.ndarray:
    return dense.constant(spec.F, 1, spec.s)


def reduce_fraction(spec: FieldSpec, num: np.ndarray, den: np.ndarray):
    """Canonical (num, den): coprime, den graded-lex monic."""
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
        c = F.inv(F.code(den[:, ]))
        return dense.scale(F, c, num), one_array(spec)
    g = tpoly.gcd(F, num, den, s)
    if not _is_one(F, g):
        num = tpoly.divexact(F, num, g, s)
        den = tpoly.divexact(F, den, g, s)
    c = tpoly.leading_code(F, den, s)
    if c != 1:
        inv = F.inv(c)
        num, den = dense.scale(F, inv, num), dense.scale(F, inv, den)
    return dense.trim(num), dense.trim(den)


class KElem:
    """An element of k = F(t1, ..., ts) in canonical fraction form."""

    __slots__ = ("spec", "num", "den", "_key")

    def __init__(self, spec: FieldSpec, num: np.ndarray, den: np.ndarray | None = None,
                 *, reduced: bool = False):
        self.spec = spec
        if den is None:
            den = one_array(spec)
            reduced = True
        if not reduced:
            num, den = reduce_fraction(spec, num, den)
        else:
            num = dense.trim(num)
        self.num = num
        self.den = den
        self._key = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, spec: FieldSpec) -> "KElem":
        return cls(spec, dense.constant(spec.F, 0, spec.s))

    @classmethod
    def one(cls, spec: FieldSpec) -> "KElem":
        return cls(spec, dense.constant(spec.F, 1, spec.s))

    @classmethod
    def from_code(cls, spec: FieldSpec, code: int) -> "KElem":
        """Element with the given code in F = F_{q^m}."""
        return cls(spec, dense.constant(spec.F, code, spec.s))

    @classmethod
    def from_int(cls, spec: FieldSpec, n: int) -> "KElem":
        return cls.from_code(spec, n % spec.p)

    @classmethod
    def t(cls, spec: FieldSpec, i: int) -> "KElem":
        """The indeterminate t_i (1-based)."""
        if not 1 <= i <= spec.s:
            raise ValueError(f"t{i} is not a variable of this field")
        shape = [1] * spec.s
        shape[i - 1] = 2
        a = np.zeros((spec.F.e,) + tuple(shape), dtype=np.int64)
        idx = [0] * spec.s
        idx[i - 1] = 1
        a[(0,) + tuple(idx)] = 1
        return cls(spec, a)

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num.any()

    def is_one(self) -> bool:
        return _is_one(self.spec.F, self.num) and self.is_polynomial()

    def is_polynomial(self) -> bool:
        return _is_one(self.spec.F, self.den)

    def is_constant(self) -> bool:
        """True when the element lies in F (no t-dependence)."""
        return all(d == 1 for d in self.num.shape[1:]) and self.is_polynomial()

    def code(self) -> int:
        """Code in F of a constant element."""
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.spec.F.code(self.num[(slice(None),) + (0,) * self.spec.s])

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "KElem":
        if isinstance(other, KElem):
            return other
        if isinstance(other, (int, np.integer)):
            return KElem.from_int(self.spec, int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        F = self.spec.F
        if self.is_polynomial() and other.is_polynomial():
            return KElem(self.spec, dense.add(F, self.num, other.num))
        num = dense.add(F, dense.mul(F, self.num, other.den), dense.mul(F, other.num, self.den))
        return KElem(self.spec, num, dense.mul(F, self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return KElem(self.spec, dense.neg(self.spec.F, self.num), self.den, reduced=True)

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
        if self.is_polynomial() and other.is_polynomial():
            return KElem(self.spec, dense.mul(F, self.num, other.num))
        return KElem(self.spec, dense.mul(F, self.num, other.num),
                     dense.mul(F, self.den, other.den))

    __rmul__ = __mul__

    def inverse(self) -> "KElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in k")
        return KElem(self.spec, self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero in k")
        F = self.spec.F
        return KElem(self.spec, dense.mul(F, self.num, other.den),
                     dense.mul(F, self.den, other.num))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = KElem.one(self.spec), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def frobenius(self, k: int = 1) -> "KElem":
        """Apply c -> c^(p^k) to constants and fix the t_i (Galois action on F)."""
        F = self.spec.F
        def fr(a):
            c = dense.codes(F, a)
            return dense.from_codes(F, F.vpow(c, F.p ** k))
        return KElem(self.spec, fr(self.num), fr(self.den))

    # -- comparison ----------------------------------------------------------

    def key(self):
        if self._key is None:
            self._key = (self.num.shape, self.num.tobytes(), self.den.shape, self.den.tobytes())
        return self._key

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = KElem.from_int(self.spec, int(other))
        if not isinstance(other, KElem):
            return NotImplemented
        return self.spec == other.spec and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def valuation(self):
        """Gauss valuation: 0 on nonzero elements of k, +inf on zero."""
        return INF if self.is_zero() else 0

    def __str__(self):
        from .text import format_kelem
        return format_kelem(self)

    def __repr__(self):
        return f"KElem({self})"


@functools.lru_cache(maxsize=None)
def spec_zero(spec: FieldSpec) -> KElem:
    return KElem.zero(spec)
