"""Finite fields GF(p^e) with integer codes.

An element is an ``int`` in ``[0, p^e)``.  Its base-p digits are the
coordinates in the power basis ``1, x, ..., x^(e-1)`` of ``F_p[x]/(f)``,
where ``f`` is the Conway polynomial when it can be computed at desk
scale and otherwise the smallest irreducible polynomial (by code).

Scalar arithmetic runs through log/exp tables.  Array arithmetic
(numpy digit arrays) is provided for the dense polynomial engine.
"""

from __future__ import annotations

import functools
import itertools

import numpy as np

__all__ = ["GF", "conway_polynomial", "field", "is_prime"]

# Fields up to this order get full log/exp tables.
TABLE_LIMIT = 1 << 20
# Conway polynomials are searched for up to this field order.
CONWAY_LIMIT = 1 << 20
# Fields up to this order add codes through a lookup table.
ADD_TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out, k = [], 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


# -- plain list arithmetic in F_p[x]/(f), used only to find moduli --------

def _mulmod(a, b, f, p):
    n = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for i in range(n + 1):
                prod[k - n + i] = (prod[k - n + i] - c * f[i]) % p
    prod = prod[:n] + [0] * (n - len(prod))
    return prod


def _powmod(a, k, f, p):
    n = len(f) - 1
    result = [1] + [0] * (n - 1)
    base = list(a) + [0] * (n - len(a))
    while k:
        if k & 1:
            result = _mulmod(result, base, f, p)
        base = _mulmod(base, base, f, p)
        k >>= 1
    return result


def _x_has_full_order(f, p):
    """True when x generates (F_p[x]/f)^x, which forces f to be primitive."""
    n = len(f) - 1
    if f[0] == 0:
        return False
    order = p ** n - 1
    one = [1] + [0] * (n - 1)
    x = [0, 1] + [0] * (n - 2) if n > 1 else [(-f[0]) % p]
    if _powmod(x, order, f, p) != one:
        return False
    return all(_powmod(x, order // r, f, p) != one for r in _prime_factors(order))


def _evaluate_at(poly, y, f, p):
    """Evaluate ``poly`` (coefficient list) at ``y`` in F_p[x]/(f)."""
    n = len(f) - 1
    acc = [0] * n
    for c in reversed(poly):
        acc = _mulmod(acc, y, f, p)
        acc[0] = (acc[0] + c) % p
    return acc


@functools.lru_cache(maxsize=None)
def conway_polynomial(p: int, n: int) -> tuple[int, ...] | None:
    """Conway polynomial of degree ``n`` over F_p, low-to-high coefficients.

    Candidates are scanned in Conway's order: writing the polynomial as
    ``x^n - a_{n-1} x^{n-1} + a_{n-2} x^{n-2} - ...``, the tuple
    ``(a_{n-1}, ..., a_0)`` increases lexicographically.  Returns None
    above ``CONWAY_LIMIT``.
    """
    if p ** n > CONWAY_LIMIT:
        return None
    subs = [(d, conway_polynomial(p, d)) for d in range(1, n) if n % d == 0]
    if any(c is None for _, c in subs):
        return None
    for digits in itertools.product(range(p), repeat=n):
        f = [0] * (n + 1)
        f[n] = 1
        for pos, a in enumerate(digits):
            i = n - 1 - pos
            f[i] = (a if (n - i) % 2 == 0 else -a) % p
        if not _x_has_full_order(f, p):
            continue
        ok = True
        for d, cd in subs:
            k = (p ** n - 1) // (p ** d - 1)
            y = _powmod([0, 1] + [0] * (n - 2) if n > 1 else [(-f[0]) % p], k, f, p)
            if any(_evaluate_at(list(cd), y, f, p)):
                ok = False
                break
        if ok:
            return tuple(f)
    raise ArithmeticError(f"no Conway polynomial found for p={p}, n={n}")


def _is_irreducible(f, p):
    """Rabin's test: x^(p^n) = x mod f and gcd(x^(p^(n/r)) - x, f) = 1."""
    n = len(f) - 1
    if n == 1:
        return True
    x = [0, 1] + [0] * (n - 2)
    if _powmod(x, p ** n, f, p) != x:
        return False
    for r in _prime_factors(n):
        y = _powmod(x, p ** (n // r), f, p)
        if _list_gcd_degree(f, [(a - b) % p for a, b in zip(y, x)], p) > 0:
            return False
    return True


def _list_gcd_degree(a, b, p):
    a = _strip(list(a))
    b = _strip(list(b))
    while b:
        inv = pow(b[-1], p - 2, p)
        while len(a) >= len(b):
            c = a[-1] * inv % p
            shift = len(a) - len(b)
            for i, bi in enumerate(b):
                a[shift + i] = (a[shift + i] - c * bi) % p
            a = _strip(a)
        a, b = b, a
    return len(a) - 1


def _strip(a):
    while a and a[-1] == 0:
        a.pop()
    return a


@functools.lru_cache(maxsize=None)
def smallest_irreducible(p: int, n: int) -> tuple[int, ...]:
    """Monic irreducible of degree n whose lower coefficients have least code."""
    for code in range(p ** n):
        f = [(code // p ** i) % p for i in range(n)] + [1]
        if f[0] and _is_irreducible(f, p):
            return tuple(f)
    raise ArithmeticError("unreachable")


class GF:
    """The field GF(p^e) with elements encoded as integers."""

    def __init__(self, p: int, e: int = 1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if e < 1:
            raise ValueError("extension degree must be positive")
        self.p = p
        self.e = e
        self.order = p ** e
        if modulus is None:
            modulus = conway_polynomial(p, e) if e > 1 else (0, 1)
            self.conway = modulus is not None
            if modulus is None:
                modulus = smallest_irreducible(p, e)
        else:
            self.conway = False
        self.modulus = tuple(int(c) % p for c in modulus)
        if e == 1:
            self.modulus = (0, 1)
        # x^k mod f for k < 2e-1, as digit rows: reduces convolution output
        red = np.zeros((max(2 * e - 1, 1), e), dtype=np.int64)
        for k in range(2 * e - 1):
            row = [0] * e
            if k < e:
                row[k] = 1
            else:
                row = _powmod([0, 1] + [0] * (e - 2), k, list(self.modulus), p)
            red[k] = row
        self.reduction = red
        self._weights = np.array([p ** i for i in range(e)], dtype=np.int64)
        self._build_tables()

    # -- construction helpers ------------------------------------------

    def _build_tables(self):
        p, e, Q = self.p, self.e, self.order
        if Q > TABLE_LIMIT:
            raise ValueError(f"field of order {Q} exceeds the table limit")
        if e == 1:
            g = next(g for g in range(1, p) if p == 2 or all(
                pow(g, (p - 1) // r, p) != 1 for r in _prime_factors(p - 1)))
            exp = [1] * (Q - 1)
            for i in range(1, Q - 1):
                exp[i] = exp[i - 1] * g % p
        else:
            gen = self._find_generator()
            exp = [1] * (Q - 1)
            cur = [1] + [0] * (e - 1)
            f = list(self.modulus)
            for i in range(1, Q - 1):
                cur = _mulmod(cur, gen, f, p)
                exp[i] = self._code_of(cur)
        self._exp = exp + exp  # doubled, so log sums need no reduction
        log = [0] * Q
        for i, c in enumerate(exp):
            log[c] = i
        self._log = log
        self.exp_table = np.array(self._exp, dtype=np.int64)
        self.log_table = np.array(log, dtype=np.int64)
        self.digit_table = (np.arange(Q, dtype=np.int64)[:, None] // self._weights) % p

    def _find_generator(self):
        p, e = self.p, self.e
        f = list(self.modulus)
        order = p ** e - 1
        one = [1] + [0] * (e - 1)
        for code in range(1, self.order):
            g = [(code // p ** i) % p for i in range(e)]
            if all(_powmod(g, order // r, f, p) != one for r in _prime_factors(order)):
                return g
        raise ArithmeticError("no generator")

    def _code_of(self, digits):
        return sum(int(d) * self.p ** i for i, d in enumerate(digits))

    def __repr__(self):
        return f"GF({self.p}^{self.e})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.e, self.modulus) == (
            other.p, other.e, other.modulus)

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    # -- scalar arithmetic on codes ----------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self._code_of((self.digit_table[a] + self.digit_table[b]) % self.p)

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self._code_of((-self.digit_table[a]) % self.p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.e == 1:
            return a * b % self.p
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 1 if k == 0 else 0
        return self._exp[(self._log[a] * k) % (self.order - 1)]

    def frobenius(self, a: int, k: int = 1) -> int:
        """a^(p^k)."""
        return self.pow(a, self.p ** k)

    def log(self, a: int) -> int:
        if a == 0:
            raise ValueError("log of zero")
        return self._log[a]

    def exp(self, k: int) -> int:
        return self._exp[k % (self.order - 1)]

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime field."""
        return n % self.p

    def digits(self, a: int) -> np.ndarray:
        return self.digit_table[a]

    def code(self, digits) -> int:
        return int(np.dot(np.asarray(digits, dtype=np.int64) % self.p, self._weights))

    def elements(self):
        return range(self.order)

    # -- vectorised arithmetic on code arrays --------------------------

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return a * b % self.p
        out = self.exp_table[self.log_table[a] + self.log_table[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vpow(self, a: np.ndarray, k: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        out = self.exp_table[(self.log_table[a] * k) % (self.order - 1)]
        if k == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, out)

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (np.asarray(a) + np.asarray(b)) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.order <= ADD_TABLE_LIMIT:
            return self.add_table[a, b]
        d = (self.digit_table[a] + self.digit_table[b]) % self.p
        return d @ self._weights

    @functools.cached_property
    def add_table(self) -> np.ndarray:
        d = self.digit_table
        s = (d[:, None, :] + d[None, :, :]) % self.p
        return (s @ self._weights).astype(np.int64)

    def to_digit_array(self, codes: np.ndarray) -> np.ndarray:
        """Codes of shape S to digits of shape (e, *S)."""
        codes = np.asarray(codes, dtype=np.int64)
        return np.moveaxis(self.digit_table[codes], -1, 0)

    def from_digit_array(self, digits: np.ndarray) -> np.ndarray:
        """Digits of shape (e, *S) to codes of shape S."""
        return np.tensordot(self._weights, np.asarray(digits) % self.p, axes=(0, 0))

    # -- subfields ------------------------------------------------------

    @functools.lru_cache(maxsize=None)
    def embedding(self, d: int) -> tuple[int, ...]:
        """Codes of GF(p^d) mapped into this field (d must divide e).

        With compatible Conway polynomials on both sides, the generator of
        GF(p^d) goes to x^((p^e-1)/(p^d-1)); otherwise to the root of the
        subfield modulus with the smallest code.
        """
        if self.e % d:
            raise ValueError(f"GF({self.p}^{d}) is not a subfield of {self!r}")
        sub = field(self.p, d)
        if d == 1:
            return tuple(range(self.p))
        if d == self.e and sub.modulus == self.modulus:
            return tuple(range(self.order))
        if sub.conway and self.conway:
            root = self.exp((self.order - 1) // (sub.order - 1))
        else:
            root = next(r for r in range(self.order)
                        if self._eval_codes(sub.modulus, r) == 0)
        powers = [1]
        for _ in range(d - 1):
            powers.append(self.mul(powers[-1], root))
        out = []
        for c in range(sub.order):
            acc = 0
            for i, dig in enumerate(sub.digits(c)):
                if dig:
                    acc = self.add(acc, self.mul(int(dig), powers[i]))
            out.append(acc)
        return tuple(out)

    def _eval_codes(self, coeffs, r):
        acc = 0
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, r), c % self.p)
        return acc


@functools.lru_cache(maxsize=None)
def field(p: int, e: int = 1) -> GF:
    """Cached canonical GF(p^e)."""
    return GF(p, e)
