"""Carlitz cyclotomic fields, Gauss-Thakur sums and Goss abelian L-values.

For squarefree monic a = P_1 ... P_r the ring O_L = A[x]/(Phi_a) is built
from the Carlitz polynomials C_b(x).  Elements of F (x) O_L, with F the
constant field F_{q^m}, m = lcm(deg P_i), are digit arrays of shape
``(e, X, Theta)``: axis 1 carries powers of lambda_a = x, axis 2 powers of
theta.  tau acts as theta -> theta^q, x -> x^q and fixes F.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import lseries
from .anderson import e_alpha_module
from .ff import dense, upoly
from .ff.gf import field
from .ff.kfield import FieldSpec, KElem
from .ff.kmatrix import pad_batch, trim_batch
from .ff.laurent import LaurentSeries
from .ff.primes import BudgetExceeded, PrimePoly, factor
from .ff.roots import smallest_root
from .ff.thetapoly import ThetaPoly
from .fitting import e_mod_p, fitting_generator

# Largest #(A/a)^x handled.
DESK_LIMIT = 2000
# Largest field used for determinant evaluation points.
EVAL_FIELD_LIMIT = 1 << 20


def _a_codes(q: int, a) -> tuple[int, ...]:
    """F_q codes of a monic polynomial given as ThetaPoly, PrimePoly or code list."""
    if isinstance(a, ThetaPoly):
        if a.spec.q != q:
            raise ValueError("polynomial lives over a different F_q")
        codes = a.base_codes()
    elif isinstance(a, PrimePoly):
        codes = a.coeffs
    else:
        codes = tuple(int(c) for c in a)
    codes = tuple(upoly.strip(list(codes)))
    if not codes or codes[-1] != 1:
        raise ValueError("a must be a nonzero monic polynomial")
    return codes


# -- Carlitz polynomials --------------------------------------------------------------

def _theta_twist(q: int, row: np.ndarray) -> np.ndarray:
    """theta -> theta^q on a theta-polynomial (e, Theta)."""
    out = np.zeros((row.shape[0], (row.shape[1] - 1) * q + 1), dtype=np.int64)
    out[:, ::q] = row
    return out


def carlitz_coefficients(spec: FieldSpec, b) -> list[np.ndarray]:
    """[b]_k: the coefficient of x^(q^k) in C_b(x), as theta-polynomial arrays over F."""
    F = spec.F
    b = list(b)
    emb = spec.embed
    one = dense.from_codes(F, [1])
    cur = [one]                                  # C_theta^i(x), starting at x
    out = [dense.zeros(F, 1)]
    for i, bi in enumerate(b):
        if bi:
            scaled = [dense.scale(F, emb[bi], c) for c in cur]
            out = [dense.add(F, o, c) for o, c in itertools.zip_longest(
                out, scaled, fillvalue=dense.zeros(F, 1))]
        if i < len(b) - 1:
            # C_theta(f) = theta f + f^q, with f^q shifting k -> k+1 and twisting theta
            nxt = [np.pad(c, ((0, 0), (1, 0))) for c in cur] + [dense.zeros(F, 1)]
            for k, c in enumerate(cur):
                nxt[k + 1] = dense.add(F, nxt[k + 1], _theta_twist(spec.q, c))
            cur = nxt
    return [dense.trim(c) for c in out]


def carlitz_poly(spec: FieldSpec, b) -> np.ndarray:
    """C_b(x) as an (e, q^deg b + 1, Theta) array over F."""
    coeffs = carlitz_coefficients(spec, b)
    q = spec.q
    width = max(c.shape[1] for c in coeffs)
    out = np.zeros((spec.F.e, q ** (len(coeffs) - 1) + 1, width), dtype=np.int64)
    for k, c in enumerate(coeffs):
        out[:, q ** k, :c.shape[1]] = c
    return out


def _xdiv_exact(F, f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """f / g in F[theta][x] for g monic in x; the remainder must vanish."""
    D = g.shape[1] - 1
    X = f.shape[1] - 1
    if X < D:
        raise ArithmeticError("exact division failed")
    f = f.copy()
    quo = []
    for k in range(X, D - 1, -1):
        row = dense.trim(f[:, k]).copy()                 # a view would pin every old f
        quo.append(row)
        if not row.any():
            continue
        prod = dense.mul(F, row[:, None, :], g)          # (e, D+1, Theta')
        if prod.shape[2] > f.shape[2]:
            f = np.pad(f, ((0, 0), (0, 0), (0, prod.shape[2] - f.shape[2])))
        f[:, k - D:k + 1, :prod.shape[2]] -= prod
        f %= F.p
    if f[:, :D].any():
        raise ArithmeticError("exact division left a remainder")
    quo.reverse()
    width = max(r.shape[1] for r in quo)
    out = np.zeros((F.e, len(quo), width), dtype=np.int64)
    for i, r in enumerate(quo):
        out[:, i, :r.shape[1]] = r
    return dense.trim(out)


def _mul_all(F, arrays):
    out = None
    for a in arrays:
        out = a if out is None else dense.mul(F, out, a)
    return out


# -- the field ------------------------------------------------------------------------

class CycField:
    """The a-th Carlitz cyclotomic field with its constant field F = F_{q^m}.

    ``roots`` optionally overrides the codes (in F_{q^{d_i}}) of the chosen
    roots zeta_{P_i}; by default the smallest-code root is used.
    """

    def __init__(self, q: int, a, roots=None):
        self.base = FieldSpec.for_q(q)
        self.q = q
        self.a = _a_codes(q, a)
        facs = factor(q, self.a) if len(self.a) > 1 else []
        if any(e > 1 for _, e in facs):
            raise ValueError(f"{self.a_poly} is not squarefree")
        self.primes = [P for P, _ in facs]
        self.degrees = [P.degree for P in self.primes]
        self.order = math.prod(q ** d - 1 for d in self.degrees)
        if self.order > DESK_LIMIT:
            raise BudgetExceeded(f"#(A/a)^x = {self.order} exceeds the desk bound {DESK_LIMIT}")
        self.m = math.lcm(*self.degrees) if self.degrees else 1
        self.spec = self.base.with_m(self.m)
        self.F = self.spec.F
        p, e = self.base.F.p, self.base.F.e
        self.zeta = []
        self.zeta_local = []
        for i, P in enumerate(self.primes):
            d = P.degree
            r = smallest_root(p, e, P.coeffs, d) if roots is None else int(roots[i])
            G = field(p, e * d)
            if G._eval_codes([G.embedding(e)[c] for c in P.coeffs], r) != 0:
                raise ValueError(f"{r} is not a root of {P}")
            self.zeta_local.append(r)
            self.zeta.append(self.F.embedding(e * d)[r])
        self.phi = self._cyclotomic_poly()
        self.D = self.phi.shape[1] - 1
        self._powers = [self._unit_row(k) for k in range(self.D)]
        self._tables = {}

    @property
    def a_poly(self) -> ThetaPoly:
        return ThetaPoly.from_codes(self.base, self.a)

    def __repr__(self):
        return f"CycField(q={self.q}, a={self.a_poly})"

    # -- Phi_a ----------------------------------------------------------------------

    def _cyclotomic_poly(self) -> np.ndarray:
        # Phi_a has coefficients in A, so divide over F_q and embed once
        Fq = self.base.F
        num, den = [], []
        r = len(self.primes)
        for mask in range(1 << r):
            cof = [1]
            for i in range(r):
                if not mask >> i & 1:
                    cof = upoly.mul(Fq, cof, list(self.primes[i].coeffs))
            C = carlitz_poly(self.base, cof)
            (den if bin(mask).count("1") % 2 else num).append(C)
        phi = _xdiv_exact(Fq, _mul_all(Fq, num), _mul_all(Fq, den))
        emb = np.asarray(self.spec.embed, dtype=np.int64)
        return dense.from_codes(self.F, emb[dense.codes(Fq, phi)])

    def cyclotomic_poly(self) -> list[ThetaPoly]:
        """Coefficients of Phi_a in x (ascending) as polynomials in A."""
        return [ThetaPoly.from_codes(self.base, ThetaPoly(self.spec, self.phi[:, k].copy()).base_codes())
                for k in range(self.D + 1)]

    # -- reduction modulo Phi_a -------------------------------------------------------

    def _unit_row(self, k: int) -> np.ndarray:
        out = np.zeros((self.F.e, self.D, 1), dtype=np.int64)
        out[0, k, 0] = 1
        return out

    def _power(self, k: int) -> np.ndarray:
        """x^k mod Phi_a, extending the cached table as needed."""
        F, D = self.F, self.D
        while len(self._powers) <= k:
            prev = self._powers[-1]
            top = prev[:, D - 1]
            shifted = np.zeros((F.e, D, prev.shape[2]), dtype=np.int64)
            shifted[:, 1:] = prev[:, :D - 1]
            if top.any():
                prod = dense.mul(F, top[:, None, :], self.phi[:, :D])
                shifted = dense.sub(F, shifted, prod)
            self._powers.append(trim_batch(shifted, 1))
        return self._powers[k]

    def _reduction_table(self, X: int) -> np.ndarray:
        """x^k mod Phi_a for D <= k < X as an (X-D, D, e, W) polynomial matrix."""
        Tm = self._tables.get(X)
        if Tm is None:
            D = self.D
            self._power(X - 1)
            table = [self._powers[k] for k in range(D, X)]
            width = max(t.shape[2] for t in table)
            T = np.stack([pad_batch(t, 0, (D, width)) for t in table])     # (X-D, e, D, W)
            Tm = self._tables[X] = np.moveaxis(T, 2, 1)
        return Tm

    def reduce(self, f: np.ndarray) -> np.ndarray:
        """f mod Phi_a for an (e, X, Theta) array."""
        F, D = self.F, self.D
        X = f.shape[1]
        if X <= D:
            out = np.zeros((F.e, D, f.shape[2]), dtype=np.int64)
            out[:, :X] = f
            return trim_batch(out % F.p, 1)
        Tm = self._reduction_table(X)
        # high part as a 1 x (X-D) matrix of theta-polynomials times (X-D) x D
        hi = np.moveaxis(f[:, D:], 1, 0)[None]                          # (1, X-D, e, Th)
        red = dense.batch_matmul(F, hi, Tm)[0]                          # (D, e, W')
        red = np.moveaxis(red, 0, 1)
        low = f[:, :D]
        return trim_batch(dense.add(F, low, red), 1)

    def stack_mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Elementwise products of stacks (n, e, X, Theta), reduced modulo Phi_a."""
        F, D = self.F, self.D
        shape = tuple(x + y - 1 for x, y in zip(A.shape[1:], B.shape[1:]))
        fa = np.fft.rfftn(A.astype(np.float64), s=shape, axes=(1, 2, 3))
        fb = np.fft.rfftn(B.astype(np.float64), s=shape, axes=(1, 2, 3))
        prod = np.rint(np.fft.irfftn(fa * fb, s=shape, axes=(1, 2, 3))).astype(np.int64)
        prod = np.moveaxis(dense.fold_digits(F, np.moveaxis(prod, 1, 0)), 0, 1)
        X = prod.shape[2]
        if X <= D:
            return trim_batch(prod, 1)
        Tm = self._reduction_table(X)                                   # (X-D, D, e, W)
        hi = np.moveaxis(prod[:, :, D:], 2, 1)                          # (n, X-D, e, Th)
        red = np.moveaxis(dense.batch_matmul(F, hi.reshape((-1,) + hi.shape[1:]), Tm), 1, 2)
        low = prod[:, :, :D]
        width = max(low.shape[3], red.shape[3])
        out = (pad_batch(low, 1, (D, width)) + pad_batch(red, 1, (D, width))) % F.p
        return trim_batch(out, 1)

    def galois_apply_all(self, bs, z: "CycElem") -> list["CycElem"]:
        """sigma_b(z) for every b in ``bs``, by Horner in the images C_b(lambda_a)."""
        images = [self.galois_image(b).arr for b in bs]
        width = max(a.shape[2] for a in images)
        S = np.stack([pad_batch(a, 0, (self.D, width)) for a in images])
        coeffs = z.arr
        n = len(images)

        def const(i):
            row = coeffs[:, i:i + 1] if i < coeffs.shape[1] else np.zeros((self.F.e, 1, 1), np.int64)
            return np.broadcast_to(row, (n,) + row.shape)

        acc = np.array(const(self.D - 1))
        for i in range(self.D - 2, -1, -1):
            acc = self.stack_mul(acc, S)
            c = const(i)
            width = max(acc.shape[3], c.shape[3])
            acc = (pad_batch(acc, 1, (acc.shape[2], width)) +
                   pad_batch(np.array(c), 1, (acc.shape[2], width))) % self.F.p
        return [CycElem(self, trim_batch(a, 1)) for a in acc]

    def elem(self, arr: np.ndarray) -> "CycElem":
        return CycElem(self, self.reduce(np.asarray(arr, dtype=np.int64)))

    def zero(self) -> "CycElem":
        return CycElem(self, np.zeros((self.F.e, self.D, 1), dtype=np.int64))

    def one(self) -> "CycElem":
        return CycElem(self, self._unit_row(0))

    def lam(self) -> "CycElem":
        """lambda_a, the class of x."""
        arr = np.zeros((self.F.e, 2, 1), dtype=np.int64)
        arr[0, 1, 0] = 1
        return self.elem(arr)

    def constant(self, c) -> "CycElem":
        """An element of F[theta] (ThetaPoly, KElem or F code) inside F (x) O_L."""
        if isinstance(c, ThetaPoly):
            row = c.num
        elif isinstance(c, KElem):
            row = c.num.reshape(self.F.e, 1)
        else:
            row = dense.from_codes(self.F, [int(c)])
        return self.elem(row[:, None, :])

    def carlitz_action(self, b, z: "CycElem") -> "CycElem":
        """C_b(z) for b in A (F_q codes) and z in F (x) O_L."""
        coeffs = carlitz_coefficients(self.spec, list(b))
        out = self.zero()
        zk = z
        for k, c in enumerate(coeffs):
            if k:
                zk = zk ** self.q
            if c.any():
                out = out + zk * self.constant(ThetaPoly(self.spec, c))
        return out

    # -- (A/a)^x and characters ------------------------------------------------------

    def evaluate_at_zeta(self, i: int, b) -> int:
        """b(zeta_{P_i}) as a code of F."""
        F, emb = self.F, self.spec.embed
        acc = 0
        for c in reversed(list(b)):
            acc = F.add(F.mul(acc, self.zeta[i]), emb[c])
        return acc

    def reduce_mod_a(self, b) -> tuple[int, ...]:
        Fq = self.base.F
        b = upoly.strip([int(c) for c in b])
        _, r = upoly.divmod_(Fq, b, list(self.a)) if len(self.a) > 1 else (None, [])
        return tuple(r) + (0,) * (len(self.a) - 1 - len(r))

    def is_unit(self, b) -> bool:
        return all(self.evaluate_at_zeta(i, b) != 0 for i in range(len(self.primes)))

    @cached_property
    def group(self) -> list[tuple[int, ...]]:
        """Representatives of (A/a)^x: coefficient tuples of length deg a, by code."""
        d = len(self.a) - 1
        out = []
        for code in range(self.q ** d):
            b = tuple((code // self.q ** i) % self.q for i in range(d))
            if self.is_unit(b):
                out.append(b)
        if d == 0:
            out = [()]
        return out

    def group_mul(self, b, c) -> tuple[int, ...]:
        return self.reduce_mod_a(upoly.mul(self.base.F, list(b), list(c)))

    def characters(self) -> list["Character"]:
        ranges = [range(self.q ** d - 1) for d in self.degrees]
        return [Character(self, tuple(ex)) for ex in itertools.product(*ranges)]

    def character(self, label: str) -> "Character":
        parts = [int(x) for x in label.split(",")] if label.strip() else []
        if len(parts) != len(self.primes):
            raise ValueError(f"character {label!r} needs {len(self.primes)} exponents")
        for N, d in zip(parts, self.degrees):
            if not 0 <= N <= self.q ** d - 2:
                raise ValueError(f"exponent {N} outside 0..{self.q ** d - 2}")
        return Character(self, tuple(parts))

    # -- Galois action -----------------------------------------------------------------

    def galois_image(self, b) -> "CycElem":
        """sigma_b(lambda_a) = C_b(lambda_a) mod Phi_a."""
        b = self.reduce_mod_a(b)
        if not self.is_unit(b):
            raise ValueError("b is not coprime to a")
        return self.elem(carlitz_poly(self.spec, upoly.strip(list(b)) or [0]))

    # -- Gauss-Thakur sums ---------------------------------------------------------------

    def lambda_prime(self, i: int) -> "CycElem":
        """lambda_{P_i} = C_{a/P_i}(lambda_a)."""
        cof = upoly.divexact(self.base.F, list(self.a), list(self.primes[i].coeffs))
        return self.elem(carlitz_poly(self.spec, cof))

    @cached_property
    def basic_gauss_sums(self) -> list[list["CycElem"]]:
        """g(omega_{P_i}^{q^j}) for every prime i and 0 <= j < d_i."""
        F, q = self.F, self.q
        emb = np.asarray(self.spec.embed, dtype=np.int64)
        out = []
        for i, d in enumerate(self.degrees):
            lam = self.lambda_prime(i)
            T = [lam]
            for _ in range(1, d):
                prev = T[-1]
                T.append(prev * self.constant(ThetaPoly.theta(self.spec)) + prev ** q)
            # every nonzero delta of degree < d, with omega(delta) = delta(zeta)
            codes = np.arange(1, q ** d, dtype=np.int64)
            rows = lseries.coeff_rows(q, d, codes)
            rows_F = emb[rows]
            zeta = np.full(len(codes), self.zeta[i], dtype=np.int64)
            acc = np.zeros(len(codes), dtype=np.int64)
            for k in range(d - 1, -1, -1):
                acc = F.vadd(F.vmul(acc, zeta), rows_F[:, k])
            sums = []
            for j in range(d):
                w = F.vpow(acc, -(q ** j))
                g = self.zero()
                for k in range(d):
                    c = lseries._field_sum(F, F.vmul(w, rows_F[:, k]))
                    c = F.neg(int(c))
                    if c:
                        g = g + T[k].scale(c)
                sums.append(g)
            out.append(sums)
        return out

    # -- tau -----------------------------------------------------------------------------

    def tau(self, z: "CycElem") -> "CycElem":
        F, q, D = self.F, self.q, self.D
        self._power(q * (D - 1))
        rows = [_theta_twist(q, z.arr[:, i]) for i in range(D)]
        width = max(r.shape[1] for r in rows)
        hi = np.stack([np.pad(r, ((0, 0), (0, width - r.shape[1]))) for r in rows])[None]
        table = [self._powers[q * i] for i in range(D)]
        tw = max(t.shape[2] for t in table)
        Tm = np.moveaxis(np.stack([pad_batch(t, 0, (D, tw)) for t in table]), 2, 1)
        red = np.moveaxis(dense.batch_matmul(F, hi, Tm)[0], 0, 1)
        return CycElem(self, trim_batch(red % F.p, 1))


class CycElem:
    """An element of F (x) O_L, reduced modulo Phi_a."""

    __slots__ = ("field", "arr")

    def __init__(self, fld: CycField, arr: np.ndarray):
        self.field = fld
        self.arr = arr

    def _other(self, other) -> "CycElem":
        if isinstance(other, CycElem):
            if other.field is not self.field:
                raise ValueError("elements of different fields")
            return other
        return self.field.constant(other)

    def __add__(self, other):
        o = self._other(other)
        return CycElem(self.field, trim_batch(dense.add(self.field.F, self.arr, o.arr), 1))

    __radd__ = __add__

    def __neg__(self):
        return CycElem(self.field, dense.neg(self.field.F, self.arr))

    def __sub__(self, other):
        return self + (-self._other(other))

    def __mul__(self, other):
        o = self._other(other)
        return self.field.elem(dense.mul(self.field.F, self.arr, o.arr))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out, base = self.field.one(), self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def scale(self, code: int) -> "CycElem":
        return CycElem(self.field, dense.scale(self.field.F, code, self.arr))

    def tau(self) -> "CycElem":
        return self.field.tau(self)

    def is_zero(self) -> bool:
        return not self.arr.any()

    def __eq__(self, other):
        if not isinstance(other, CycElem):
            return NotImplemented
        return self.field is other.field and (self - other).is_zero()

    __hash__ = None

    def coefficients(self) -> list[ThetaPoly]:
        """Coefficients of 1, lambda, ..., lambda^(D-1) in F[theta]."""
        sp, n = self.field.spec, self.arr.shape[1]
        return [ThetaPoly(sp, self.arr[:, i].copy()) if i < n else ThetaPoly.zero(sp)
                for i in range(self.field.D)]

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coefficients()):
            if c.is_zero():
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}" if any(ch in cs for ch in "+-") else f"{cs}*{mono}")
        return "+".join(parts) if parts else "0"

    def __repr__(self):
        return f"CycElem({self})"


def cyclotomic_poly(q: int, a) -> list[ThetaPoly]:
    """Phi_a, ascending coefficients in x over A."""
    return CycField(q, a).cyclotomic_poly()


def galois_apply(F: CycField, b, z: CycElem) -> CycElem:
    """sigma_b(z): the ring map fixing A and F with lambda_a -> C_b(lambda_a)."""
    return F.galois_apply_all([b], z)[0]


def teichmuller(P, b) -> int:
    """b(zeta_P) in F_{q^d} for the smallest-code root zeta_P of P."""
    if not isinstance(P, PrimePoly):
        raise TypeError("teichmuller expects a PrimePoly")
    q = P.q
    Fq = FieldSpec.for_q(q).F
    d = P.degree
    G = field(Fq.p, Fq.e * d)
    emb = G.embedding(Fq.e)
    zeta = smallest_root(Fq.p, Fq.e, P.coeffs, d)
    acc = 0
    for c in reversed([int(x) for x in b]):
        acc = G.add(G.mul(acc, zeta), emb[c])
    if acc == 0:
        raise ValueError("b is divisible by P")
    return acc


# -- characters -------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Character:
    """chi = prod omega_{P_i}^{N_i}, with values in F."""

    field: CycField
    exps: tuple

    @property
    def label(self) -> str:
        return ",".join(str(N) for N in self.exps)

    def __str__(self):
        return self.label

    def __eq__(self, other):
        return isinstance(other, Character) and other.field is self.field and other.exps == self.exps

    def __hash__(self):
        return hash(self.exps)

    def is_trivial(self) -> bool:
        return not any(self.exps)

    def conductor(self) -> ThetaPoly:
        out = ThetaPoly.one(self.field.base)
        for P, N in zip(self.field.primes, self.exps):
            if N:
                out = out * P.to_theta(self.field.base)
        return out

    def digits(self) -> list[list[int]]:
        q = self.field.q
        return [[(N // q ** j) % q for j in range(d)]
                for N, d in zip(self.exps, self.field.degrees)]

    def inverse(self) -> "Character":
        return Character(self.field, tuple((-N) % (self.field.q ** d - 1)
                                           for N, d in zip(self.exps, self.field.degrees)))

    def __call__(self, b) -> int:
        """chi(sigma_b) as a code of F; 0 when b shares a factor with the conductor."""
        F = self.field.F
        out = 1
        for i, N in enumerate(self.exps):
            if N:
                out = F.mul(out, F.pow(self.field.evaluate_at_zeta(i, b), N))
        return out

    def alpha(self) -> ThetaPoly:
        """alpha(chi) = prod (zeta_i^(q^j) - theta)^(N_ij) over F."""
        fld = self.field
        F = fld.F
        out = ThetaPoly.one(fld.spec)
        theta = ThetaPoly.theta(fld.spec)
        for i, row in enumerate(self.digits()):
            for j, Nij in enumerate(row):
                if Nij:
                    z = ThetaPoly.from_codes(fld.spec, [F.pow(fld.zeta[i], fld.q ** j)], base=False)
                    out = out * (z - theta) ** Nij
        return out


def gauss_thakur(F: CycField, chi: Character) -> CycElem:
    """g(chi) = prod_{i,j} g(omega_{P_i}^{q^j})^{N_ij}."""
    out = F.one()
    for i, row in enumerate(chi.digits()):
        for j, Nij in enumerate(row):
            if Nij:
                out = out * F.basic_gauss_sums[i][j] ** Nij
    return out


def tau_equation_holds(F: CycField, chi: Character) -> bool:
    """tau(g(chi)) == alpha(chi) g(chi), with g(chi) nonzero."""
    g = gauss_thakur(F, chi)
    return not g.is_zero() and g.tau() == g * F.constant(chi.alpha())


# -- eta_a ---------------------------------------------------------------------------------

@dataclass(frozen=True)
class EtaReport:
    passed: bool
    det: str
    degree_bound: int
    points: int

    def to_json(self) -> dict:
        return {"pass": self.passed, "det": self.det, "degree_bound": self.degree_bound,
                "points": self.points}


def _batched_det(G, M: np.ndarray) -> np.ndarray:
    """Determinants of a stack (B, n, n) of matrices with codes in G."""
    M = M.copy()
    B, n, _ = M.shape
    det = np.ones(B, dtype=np.int64)
    idx = np.arange(B)
    minus = G.neg(1)
    for c in range(n):
        col = M[:, c:, c]
        nz = col != 0
        ok = nz.any(axis=1)
        det = np.where(ok, det, 0)
        off = np.where(ok, nz.argmax(axis=1), 0)
        rows = c + off
        swap = off > 0
        top = M[idx, c].copy()
        M[idx, c] = M[idx, rows]
        M[idx, rows] = top
        det = np.where(swap, G.vmul(det, np.full(B, minus, dtype=np.int64)), det)
        piv = np.where(ok, M[:, c, c], 1)
        det = G.vmul(det, np.where(ok, piv, 1))
        if c == n - 1:
            break
        factor = G.vmul(M[:, c + 1:, c], G.vpow(piv, -1)[:, None])
        upd = G.vmul(factor[:, :, None], M[:, c:c + 1, :])
        M[:, c + 1:, :] = G.vadd(M[:, c + 1:, :], G.vmul(upd, np.full_like(upd, minus)))
    return det


def eta_element(F: CycField) -> CycElem:
    out = F.zero()
    for chi in F.characters():
        out = out + gauss_thakur(F, chi)
    return out


def eta_generator_check(F: CycField) -> EtaReport:
    """Is {sigma(eta_a)} an A-basis of O_L?  Certified by evaluating the determinant.

    The matrix entries lie in F[theta]; their row-degree sum B bounds the degree
    of the determinant, so B + 1 values at distinct points decide whether it is
    a constant, and then whether that constant lies in F_q^x.
    """
    eta = eta_element(F)
    rows = [x.coefficients() for x in F.galois_apply_all(F.group, eta)]
    D = F.D
    B = sum(max((c.degree for c in r if not c.is_zero()), default=0) for r in rows)
    p, eF = F.F.p, F.F.e
    k = 1
    while p ** (eF * k) < B + 1:
        k += 1
    if p ** (eF * k) > EVAL_FIELD_LIMIT:
        raise BudgetExceeded("determinant certificate needs too large an evaluation field")
    G = field(p, eF * k)
    emb = np.asarray(G.embedding(eF), dtype=np.int64)
    width = B + 1
    codes = np.zeros((D, D, max(width, 1)), dtype=np.int64)
    for i, r in enumerate(rows):
        for j, c in enumerate(r):
            fc = c.field_codes()
            codes[i, j, :len(fc)] = fc
    codes = emb[codes]
    pts = np.arange(B + 1, dtype=np.int64)
    vals = np.zeros((B + 1, D, D), dtype=np.int64)
    for deg in range(codes.shape[2] - 1, -1, -1):
        vals = G.vadd(G.vmul(vals, pts[:, None, None]), np.broadcast_to(codes[:, :, deg], vals.shape))
    dets = _batched_det(G, vals)
    c = int(dets[0])
    constant = bool(np.all(dets == c))
    in_fq = constant and c != 0 and G.pow(c, F.q) == c
    if in_fq:
        inv = {v: u for u, v in enumerate(G.embedding(F.base.F.e))}
        det = str(KElem.from_code(F.base, inv[c]))
    elif constant:
        det = "0" if c == 0 else f"constant {c} outside F_q"
    else:
        det = "nonconstant"
    return EtaReport(in_fq, det, B, B + 1)


# -- Goss L-values ---------------------------------------------------------------------------

def goss_l_value(chi: Character, n: int, N: int) -> lseries.LValue:
    """prod over P not dividing f_chi of (1 - chi(sigma_P)/P^n)^(-1), truncated at N."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if N < 1:
        raise ValueError("N must be at least 1")
    fld = chi.field
    F = fld.F
    active = [(fld.zeta[i], N_i) for i, N_i in enumerate(chi.exps) if N_i]

    def values(rows):
        B, d = rows.shape
        out = np.ones(B, dtype=np.int64)
        for z, N_i in active:
            acc = np.ones(B, dtype=np.int64)
            zz = np.full(B, z, dtype=np.int64)
            for k in range(d - 1, -1, -1):
                acc = F.vadd(F.vmul(acc, zz), rows[:, k])
            out = F.vmul(out, F.vpow(acc, N_i))
        return out

    meta = {"a": str(fld.a_poly), "chi": chi.label, "conductor": str(chi.conductor())}
    return lseries.euler_from_values(fld.spec, values, n, N, meta)


class GroupRingElem:
    """An element of K_inf[Delta_a] (or F[theta][Delta_a]) by characters.

    ``components`` maps character labels to values (LaurentSeries or ThetaPoly);
    the coefficient of sigma_b is (1/#Delta) sum_chi x_chi chi^(-1)(sigma_b).
    """

    def __init__(self, fld: CycField, components: dict):
        self.field = fld
        self.components = dict(components)

    def _labels(self):
        return [chi.label for chi in self.field.characters()]

    def component(self, chi) -> object:
        label = chi.label if isinstance(chi, Character) else chi
        return self.components[label]

    def coefficients(self) -> dict:
        fld = self.field
        F = fld.F
        if fld.order % F.p == 0:
            raise ArithmeticError("#Delta is divisible by p")
        inv_order = F.inv(F.from_int(fld.order))
        out = {}
        chars = fld.characters()
        for b in fld.group:
            acc = None
            for chi in chars:
                c = F.mul(inv_order, F.inv(chi(b)))
                term = _scale(self.components[chi.label], KElem.from_code(fld.spec, c))
                acc = term if acc is None else acc + term
            out[b] = acc
        return out

    @classmethod
    def from_coefficients(cls, fld: CycField, coeffs: dict) -> "GroupRingElem":
        comps = {}
        for chi in fld.characters():
            acc = None
            for b, x in coeffs.items():
                term = _scale(x, KElem.from_code(fld.spec, chi(b)))
                acc = term if acc is None else acc + term
            comps[chi.label] = acc
        return cls(fld, comps)

    @classmethod
    def idempotent(cls, fld: CycField, chi: Character, prec=None) -> "GroupRingElem":
        """e_chi = (1/#Delta) sum_sigma chi^(-1)(sigma) sigma, from its coefficients."""
        F = fld.F
        inv_order = F.inv(F.from_int(fld.order))
        coeffs = {b: ThetaPoly.from_codes(fld.spec, [F.mul(inv_order, F.inv(chi(b)))], base=False)
                  for b in fld.group}
        return cls.from_coefficients(fld, coeffs)

    def translate(self, b) -> "GroupRingElem":
        """sigma_b times this element, computed on the coefficients."""
        fld = self.field
        coeffs = self.coefficients()
        return GroupRingElem.from_coefficients(
            fld, {fld.group_mul(b, c): x for c, x in coeffs.items()})

    def scale(self, c: int) -> "GroupRingElem":
        k = KElem.from_code(self.field.spec, c)
        return GroupRingElem(self.field, {lab: _scale(x, k) for lab, x in self.components.items()})

    def __eq__(self, other):
        if not isinstance(other, GroupRingElem):
            return NotImplemented
        return self.field is other.field and self.components == other.components

    __hash__ = None

    def to_json(self) -> dict:
        comps = []
        for lab in self._labels():
            x = self.components[lab]
            comps.append({"chi": lab, "value": x.to_json() if hasattr(x, "to_json") else str(x)})
        return {"components": comps}


def _scale(x, k: KElem):
    if isinstance(x, LaurentSeries):
        return x.scale(k)
    return x * ThetaPoly.constant(x.spec, k)


def equivariant_l(a, n: int, N: int, q: int | None = None, fld: CycField | None = None):
    """L(n, Delta_a) = sum_chi L(n, chi) e_chi, with the per-character LValues."""
    if fld is None:
        if q is None:
            raise ValueError("give q or a CycField")
        fld = CycField(q, a)
    if fld.order % fld.F.p == 0:
        raise ArithmeticError("#Delta is divisible by p")
    chars = fld.characters()
    values = lseries.pool_map(lambda chi: goss_l_value(chi, n, N), chars)
    elem = GroupRingElem(fld, {chi.label: v.value for chi, v in zip(chars, values)})
    return elem, dict(zip((chi.label for chi in chars), values))


def group_ring_fitting(fld: CycField, modules: dict) -> GroupRingElem:
    """Monic Fitting generator in every component; absent components are zero modules."""
    comps = {}
    for chi in fld.characters():
        M = modules.get(chi.label)
        comps[chi.label] = ThetaPoly.one(fld.spec) if M is None else fitting_generator(M)
    return GroupRingElem(fld, comps)


def tensor_residue_components(fld: CycField, P: PrimePoly, n: int) -> dict:
    """The e_chi-components E_{alpha(chi)}(A/P) of C^{(x)n}(O_L / P O_L), as FiniteModules."""
    out = {}
    for chi in fld.characters():
        out[chi.label] = e_mod_p(e_alpha_module(chi.alpha(), n), P)
    return out
