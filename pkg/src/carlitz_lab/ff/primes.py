"""Monic irreducible polynomials of A = F_q[theta].

A monic polynomial of degree d is identified with the integer
``sum(c_i * q^i for i < d)`` built from its lower coefficients (F_q codes).
Primes of one degree come from a sieve: every product P*b with
``deg P <= d/2`` is struck out.  Ordering is by (degree, that integer),
which is lexicographic order on coefficients read from the top.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import upoly
from .gf import field
from .kfield import FieldSpec

# Sieving degree d needs arrays of q^d entries; beyond this we refuse.
SIEVE_LIMIT = 1 << 24
# Rows of cofactor digits processed at once by the sieve.
_SIEVE_CHUNK = 1 << 17


class BudgetExceeded(RuntimeError):
    """The requested enumeration is beyond the desk-scale budget."""


def _field_of_q(q: int):
    spec = FieldSpec.for_q(q)
    return field(spec.p, spec.e)


@dataclass(frozen=True)
class PrimePoly:
    """A monic irreducible polynomial over F_q, coefficients low to high."""

    q: int
    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def code(self) -> int:
        return sum(c * self.q ** i for i, c in enumerate(self.coeffs[:-1]))

    def sort_key(self):
        return (self.degree, self.code)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def to_theta(self, spec: FieldSpec):
        from .thetapoly import ThetaPoly
        if spec.q != self.q:
            raise ValueError("prime and field have different q")
        return ThetaPoly.from_codes(spec, self.coeffs)

    def spec(self) -> FieldSpec:
        return FieldSpec.for_q(self.q)

    def __str__(self):
        return str(self.to_theta(self.spec()))

    def __repr__(self):
        return f"PrimePoly({self})"

    @classmethod
    def from_code(cls, q: int, d: int, code: int) -> "PrimePoly":
        return cls(q, tuple((code // q ** i) % q for i in range(d)) + (1,))


def _digits(q: int, n: int, width: int) -> np.ndarray:
    """Base-q digits of 0..n-1, shape (n, width), low digit first."""
    idx = np.arange(n, dtype=np.int64)
    out = np.empty((n, width), dtype=np.int64)
    for i in range(width):
        out[:, i] = idx % q
        idx //= q
    return out


def _digit_range(q: int, start: int, stop: int, width: int) -> np.ndarray:
    n = np.arange(start, stop, dtype=np.int64)
    return (n[:, None] // q ** np.arange(width, dtype=np.int64)) % q


@functools.lru_cache(maxsize=None)
def prime_codes(q: int, d: int) -> np.ndarray:
    """Sorted integer codes of the monic irreducibles of degree d (read-only array)."""
    if d < 1:
        return np.zeros(0, dtype=np.int64)
    if q ** d > SIEVE_LIMIT:
        raise BudgetExceeded(
            f"enumerating degree-{d} primes over F_{q} needs {q ** d} candidates "
            f"(limit {SIEVE_LIMIT})")
    if d == 1:
        out = np.arange(q, dtype=np.int64)
        out.setflags(write=False)
        return out
    F = _field_of_q(q)
    composite = np.zeros(q ** d, dtype=bool)
    for e in range(1, d // 2 + 1):
        m = d - e
        nb = q ** m
        if q == 2:
            b = np.arange(nb, dtype=np.int64) | (1 << m)
            for P in prime_codes(2, e):
                full = int(P) | (1 << e)
                acc = np.zeros(nb, dtype=np.int64)
                i = 0
                while full >> i:
                    if (full >> i) & 1:
                        acc ^= b << i
                    i += 1
                composite[acc ^ (1 << d)] = True
            continue
        weights = q ** np.arange(d, dtype=np.int64)
        small = [[(int(P) // q ** i) % q for i in range(e)] + [1] for P in prime_codes(q, e)]
        for start in range(0, nb, _SIEVE_CHUNK):
            stop = min(nb, start + _SIEVE_CHUNK)
            bd = np.concatenate([_digit_range(q, start, stop, m),
                                 np.ones((stop - start, 1), dtype=np.int64)], axis=1)
            for pc in small:
                acc = np.zeros((stop - start, d + 1), dtype=np.int64)
                for i, c in enumerate(pc):
                    if c == 0:
                        continue
                    if F.e == 1:
                        acc[:, i:i + m + 1] += c * bd
                    else:
                        acc[:, i:i + m + 1] = F.vadd(acc[:, i:i + m + 1], F.vmul(bd, c))
                if F.e == 1:
                    acc %= q
                composite[acc[:, :d] @ weights] = True
    out = np.nonzero(~composite)[0].astype(np.int64)
    out.setflags(write=False)
    return out


def enumerate_primes(q: int, max_deg: int) -> list[PrimePoly]:
    """All monic irreducibles of degree <= max_deg in (degree, lex) order."""
    if max_deg < 1:
        raise ValueError("max_deg must be at least 1")
    out = []
    for d in range(1, max_deg + 1):
        out.extend(PrimePoly.from_code(q, d, int(c)) for c in prime_codes(q, d))
    return out


def necklace_count(q: int, d: int) -> int:
    """(1/d) sum_{e | d} mu(e) q^(d/e)."""
    return sum(mobius_int(e) * q ** (d // e) for e in range(1, d + 1) if d % e == 0) // d


def mobius_int(n: int) -> int:
    out, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            out = -out
        k += 1
    return -out if n > 1 else out


# -- factorisation of monic polynomials over F_q (as code lists) --------------

def is_irreducible(q: int, coeffs) -> bool:
    """Rabin's irreducibility test on a monic F_q polynomial."""
    F = _field_of_q(q)
    f = upoly.strip(list(coeffs))
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    if upoly.sub(F, upoly.powmod(F, x, q ** n, f), x):
        return False
    k, r = n, 2
    primes = []
    while r * r <= k:
        if k % r == 0:
            primes.append(r)
            while k % r == 0:
                k //= r
        r += 1
    if k > 1:
        primes.append(k)
    for r in primes:
        y = upoly.sub(F, upoly.powmod(F, x, q ** (n // r), f), x)
        if len(upoly.gcd(F, f, y)) > 1:
            return False
    return True


def factor(q: int, coeffs) -> list[tuple[PrimePoly, int]]:
    """Factor a monic polynomial over F_q by trial division (desk-scale degrees)."""
    F = _field_of_q(q)
    f = upoly.strip(list(coeffs))
    if not f or f[-1] != 1:
        raise ValueError("factor expects a monic polynomial")
    out = []
    d = 1
    while len(f) - 1 >= 2 * d:
        for P in enumerate_primes_of_degree(q, d):
            e = 0
            while True:
                quo, rem = upoly.divmod_(F, f, list(P.coeffs))
                if rem:
                    break
                f, e = quo, e + 1
            if e:
                out.append((P, e))
        d += 1
    if len(f) > 1:
        out.append((PrimePoly(q, tuple(f)), 1))
    merged: dict[PrimePoly, int] = {}
    for P, e in out:
        merged[P] = merged.get(P, 0) + e
    return sorted(merged.items(), key=lambda pe: pe[0].sort_key())


def enumerate_primes_of_degree(q: int, d: int) -> list[PrimePoly]:
    return [PrimePoly.from_code(q, d, int(c)) for c in prime_codes(q, d)]


def is_squarefree(q: int, coeffs) -> bool:
    return all(e == 1 for _, e in factor(q, coeffs))


def mobius(q: int, coeffs) -> int:
    fac = factor(q, coeffs)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def monic_divisors(q: int, coeffs) -> list[tuple[int, ...]]:
    """All monic divisors, as coefficient tuples."""
    F = _field_of_q(q)
    divs = [[1]]
    for P, e in factor(q, coeffs):
        new = []
        for dv in divs:
            cur = dv
            new.append(cur)
            for _ in range(e):
                cur = upoly.mul(F, cur, list(P.coeffs))
                new.append(cur)
        divs = new
    return [tuple(d) for d in divs]
