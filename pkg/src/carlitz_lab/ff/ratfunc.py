"""Rational functions in theta whose denominators factor over F_q.

Every denominator produced by the exponential and logarithm recursions
is a product of the polynomials theta^(q^i) - theta, i.e. of primes of
A = F_q[theta].  ``ThetaFrac`` keeps the denominator as a factored
mapping {prime: exponent}: sums take the lcm, twists multiply exponents
by q^k (a prime has F_q-coefficients, so tau(P) = P^q), and ``reduced``
cancels common primes using Hasse-derivative multiplicity tests at a root.
"""

from __future__ import annotations

import functools
import math

import numpy as np

from . import dense, roots
from .gf import field
from .kfield import INF, FieldSpec, KElem
from .laurent import LaurentSeries, _series_inverse, laurent_arith
from .primes import PrimePoly, factor, prime_codes
from .thetapoly import ThetaPoly


def _den_key(den: dict) -> tuple:
    return tuple(sorted(((P, e) for P, e in den.items() if e), key=lambda pe: pe[0].sort_key()))


@functools.lru_cache(maxsize=4096)
def _prime_poly(spec: FieldSpec, P: PrimePoly, e: int) -> ThetaPoly:
    return P.to_theta(spec) ** e


@functools.lru_cache(maxsize=1024)
def den_poly(spec: FieldSpec, den: tuple) -> ThetaPoly:
    out = ThetaPoly.one(spec)
    for P, e in den:
        out = out * _prime_poly(spec, P, e)
    return out


@functools.lru_cache(maxsize=None)
def d_factors(q: int, i: int) -> tuple:
    """theta^(q^i) - theta as {prime: 1}: all primes of degree dividing i."""
    out = []
    for d in range(1, i + 1):
        if i % d == 0:
            out.extend((PrimePoly.from_code(q, d, int(c)), 1) for c in prime_codes(q, d))
    return tuple(out)


def exact_div_tfree(F, num: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact quotient of a theta-array by a t-free monic polynomial array."""
    L, D = num.shape[1], b.shape[1] - 1
    if L <= D:
        return np.zeros((F.e, 1) + num.shape[2:], dtype=np.int64)
    n = L - D
    inv = _series_inverse(F, b[:, ::-1], n)
    qrev = dense.mul(F, num[:, ::-1][:, :n], inv)[:, :n]
    return qrev[:, ::-1]


class ThetaFrac:
    """num / prod P^e with num in k_s[theta] and P primes of A."""

    __slots__ = ("spec", "num", "den")

    def __init__(self, num: ThetaPoly, den=None):
        self.spec = num.spec
        self.num = num
        if den is None:
            den = ()
        elif isinstance(den, dict):
            den = _den_key(den)
        if num.is_zero():
            den = ()
        self.den = den

    @classmethod
    def zero(cls, spec: FieldSpec) -> "ThetaFrac":
        return cls(ThetaPoly.zero(spec))

    @classmethod
    def one(cls, spec: FieldSpec) -> "ThetaFrac":
        return cls(ThetaPoly.one(spec))

    @classmethod
    def coerce(cls, spec: FieldSpec, x) -> "ThetaFrac":
        if isinstance(x, ThetaFrac):
            return x
        if isinstance(x, ThetaPoly):
            return cls(x)
        if isinstance(x, KElem):
            return cls(ThetaPoly.constant(spec, x))
        if isinstance(x, (int, np.integer)):
            return cls(ThetaPoly.constant(spec, int(x)))
        raise TypeError(f"cannot coerce {type(x).__name__} to ThetaFrac")

    # -- structure -----------------------------------------------------------

    def den_dict(self) -> dict:
        return dict(self.den)

    def den_poly(self) -> ThetaPoly:
        return den_poly(self.spec, self.den)

    def den_degree(self) -> int:
        return sum(P.degree * e for P, e in self.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return not self.den

    def valuation(self):
        if self.is_zero():
            return INF
        return self.den_degree() - self.num.degree

    # -- arithmetic ------------------------------------------------------------

    def _lift(self, target: dict) -> ThetaPoly:
        extra = {P: target[P] - e for P, e in self.den}
        for P, e in target.items():
            if P not in extra:
                extra[P] = e
        return self.num * den_poly(self.spec, _den_key(extra))

    def __add__(self, other):
        other = ThetaFrac.coerce(self.spec, other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return ThetaFrac(self.num + other.num, self.den)
        target = dict(self.den)
        for P, e in other.den:
            target[P] = max(target.get(P, 0), e)
        return ThetaFrac(self._lift(target) + other._lift(target), target)

    __radd__ = __add__

    def __neg__(self):
        return ThetaFrac(-self.num, self.den)

    def __sub__(self, other):
        return self + (-ThetaFrac.coerce(self.spec, other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = ThetaFrac.coerce(self.spec, other)
        if self.is_zero() or other.is_zero():
            return ThetaFrac.zero(self.spec)
        den = dict(self.den)
        for P, e in other.den:
            den[P] = den.get(P, 0) + e
        return ThetaFrac(self.num * other.num, den)

    __rmul__ = __mul__

    def div_den(self, extra) -> "ThetaFrac":
        """Divide by prod P^e given as pairs or a dict."""
        den = dict(self.den)
        for P, e in (extra.items() if isinstance(extra, dict) else extra):
            den[P] = den.get(P, 0) + e
        return ThetaFrac(self.num, den)

    def twist(self, k: int = 1) -> "ThetaFrac":
        if k == 0:
            return self
        Q = self.spec.q ** k
        return ThetaFrac(self.num.twist(k), {P: e * Q for P, e in self.den})

    # -- normal form -------------------------------------------------------------

    def reduced(self) -> "ThetaFrac":
        """Cancel every prime of the denominator that divides the numerator."""
        if not self.den or self.is_zero():
            return self
        spec, F = self.spec, self.spec.F
        num = self.num
        codes = dense.codes(F, num.num)          # (L, *t)
        new_den = {}
        for P, e in self.den:
            L = P.degree * spec.m // math.gcd(P.degree, spec.m)
            G = field(spec.p, spec.e * L)
            z = G.embedding(spec.e * P.degree)[
                roots.smallest_root(spec.p, spec.e, P.coeffs, P.degree)]
            emb = np.asarray(G.embedding(spec.e * spec.m), dtype=np.int64)
            gc = emb[codes]
            mult = 0
            while mult < e and not roots.hasse_eval(G, gc, z, mult).any():
                mult += 1
            if mult:
                b = _prime_poly(spec, P, mult).num
                qn = exact_div_tfree(F, num.num, b)
                num = ThetaPoly(spec, dense.trim(qn), num.den, reduced=True)
                codes = dense.codes(F, num.num)
            if e - mult:
                new_den[P] = e - mult
        return ThetaFrac(num, new_den)

    # -- conversion ----------------------------------------------------------------

    def to_laurent(self, prec: int) -> LaurentSeries:
        """Expansion in 1/theta with absolute precision ``prec``."""
        a = LaurentSeries.from_theta(self.num)
        if not self.den:
            return a.truncate(prec)
        return laurent_arith(a, LaurentSeries.from_theta(self.den_poly()), "div", prec=prec)

    # -- comparison ----------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, np.integer, KElem, ThetaPoly)):
            other = ThetaFrac.coerce(self.spec, other)
        if not isinstance(other, ThetaFrac):
            return NotImplemented
        if self.spec != other.spec:
            return False
        if self.den == other.den:
            return self.num == other.num
        target = dict(self.den)
        for P, e in other.den:
            target[P] = max(target.get(P, 0), e)
        return self._lift(target) == other._lift(target)

    def __hash__(self):
        r = self.reduced()
        return hash((r.num.key(), r.den))

    def __str__(self):
        r = self.reduced()
        if not r.den:
            return str(r.num)
        return f"({r.num})/({r.den_poly()})"

    def __repr__(self):
        return f"ThetaFrac({self})"


def parse_frac(spec: FieldSpec, text: str) -> ThetaFrac:
    """Inverse of ``str``: ``poly`` or ``(poly)/(poly)`` with an F_q-rational denominator."""
    from .text import ParseError, parse_theta
    text = text.strip()
    depth, cut = 0, -1
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0 and text[i + 1:].lstrip().startswith("(") \
                and text[:i].rstrip().endswith(")") and text.startswith("("):
            cut = i
    if cut < 0:
        return ThetaFrac(parse_theta(spec, text))
    num = parse_theta(spec, text[:cut])
    den = parse_theta(spec, text[cut + 1:])
    try:
        codes = den.base_codes()
    except ValueError:
        raise ParseError("denominator must have F_q coefficients", text, cut + 1) from None
    if codes[-1] != 1:
        c = KElem.from_code(spec, spec.embed[codes[-1]])
        num = num * c.inverse()
        den = den * c.inverse()
        codes = den.base_codes()
    return ThetaFrac(num, {P: e for P, e in factor(spec.q, codes)})
