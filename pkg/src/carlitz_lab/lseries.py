"""Special L-values by Euler product and by Dirichlet summation.

Series are handled as raw arrays in x = 1/theta: index i of a
``(e, N+1, *t_dims)`` array is the coefficient of theta^(-i).

Euler route.  For E_alpha the local factor at P is P^n / (P^n - rho(P)),
which is 1 + rho/P^n + ... with valuation n deg P for the correction.
Primes with n deg P > N are dropped.  Primes with 2 n deg P > N only
contribute their linear term, so they are summed in one batched
product-free pass; the remaining small primes are multiplied in.

Summation route.  The block of all monic a of degree d is summed at once.
Writing a = theta^d (1 + u) and expanding rho(a) a^(-n) as a polynomial
in the lower coefficients c_i, a monomial survives the sum over F_q^d only
if every c_i occurs with exponent a positive multiple of q - 1.  As rho is
of degree deg(alpha) in the c_i, the block has valuation at least
n d + (q-1) d (d+1)/2 - deg(alpha) d; later blocks past N are exactly 0.
"""

from __future__ import annotations

import functools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .anderson import AndersonModule, e_alpha_module, pellarin_alpha
from .ff import dense
from .ff.gf import GF
from .ff.kfield import INF, FieldSpec, KElem
from .ff.laurent import LaurentSeries, PrecisionError
from .ff.primes import SIEVE_LIMIT, BudgetExceeded, enumerate_primes_of_degree, prime_codes
from .ff.resultant import resultant
from .ff.thetapoly import ThetaPoly
from .fitting import LatticeBasis, e_mod_p, fitting_generator, lattice_index, lie_mod_p

THREADS_ENV = "CARLITZ_LAB_THREADS"
# Largest block q^d enumerated by the summation route.
SUM_LIMIT = 1 << 22
# Primes handled one at a time through Fitting generators (general modules).
GENERAL_PRIME_LIMIT = 2000


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def pool_map(fn, items):
    """Ordered map, threaded when CARLITZ_LAB_THREADS > 1."""
    items = list(items)
    n = worker_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


# -- results -------------------------------------------------------------------

@dataclass(frozen=True)
class LValue:
    value: LaurentSeries
    meta: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {"value": self.value.to_json(), "meta": dict(self.meta)}


@dataclass(frozen=True)
class ClassFormulaReport:
    lhs: LValue
    index: LaurentSeries
    h: ThetaPoly
    residual: LaurentSeries
    valuation: float
    N: int

    @property
    def passed(self) -> bool:
        return self.valuation > self.N

    def to_json(self) -> dict:
        v = self.valuation
        return {"lhs": self.lhs.to_json(), "lattice_index": self.index.to_json(),
                "h": str(self.h), "residual": self.residual.to_json(),
                "residual_valuation": "inf" if v == INF else int(v),
                "N": self.N, "pass": self.passed}


# -- alpha with roots in k ---------------------------------------------------------

@dataclass(frozen=True)
class SplitAlpha:
    """alpha = c * prod (y_j - theta) with y_j a t_i or a constant of F."""

    spec: FieldSpec
    c: int                 # code in F
    roots: tuple           # ("t", i) or ("c", code)

    @property
    def degree(self) -> int:
        return len(self.roots)


def _poly_roots_in_field(G: GF, codes: list) -> int | None:
    xs = np.arange(G.order, dtype=np.int64)
    acc = np.full(G.order, codes[-1], dtype=np.int64)
    for c in reversed(codes[:-1]):
        acc = G.vadd(G.vmul(acc, xs), np.full(G.order, c, dtype=np.int64))
    hits = np.nonzero(acc == 0)[0]
    return int(hits[0]) if len(hits) else None


def split_alpha(alpha: ThetaPoly) -> SplitAlpha | None:
    """Factor alpha into linear factors with roots t_i or constants, if possible."""
    spec = alpha.spec
    if alpha.is_zero():
        raise ValueError("alpha must be nonzero")
    G = spec.F
    lead = alpha.leading()
    rest = alpha
    roots = []
    theta = ThetaPoly.theta(spec)
    for i in range(1, spec.s + 1):
        y = KElem.t(spec, i)
        while rest.degree > 0 and rest.evaluate(y).is_zero():
            rest = rest // (theta - ThetaPoly.constant(spec, y))
            roots.append(("t", i))
    if rest.has_t() or not rest.is_polynomial():
        return None
    codes = list(rest.field_codes())
    while len(codes) > 1:
        r = _poly_roots_in_field(G, codes)
        if r is None:
            return None
        # synthetic division by (x - r)
        out = [0] * (len(codes) - 1)
        carry = 0
        for k in range(len(codes) - 1, 0, -1):
            carry = G.add(codes[k], G.mul(carry, r))
            out[k - 1] = carry
        codes = out
        roots.append(("c", r))
    if not lead.is_constant():
        return None
    c = lead.code()
    if len(roots) % 2:
        c = G.neg(c)
    return SplitAlpha(spec, c, tuple(sorted(roots)))


# -- batched series kernels ---------------------------------------------------------

def coeff_rows(q: int, d: int, codes: np.ndarray) -> np.ndarray:
    """Lower coefficients c_0..c_{d-1} (F_q codes) of monic polynomials given by code."""
    codes = np.asarray(codes, dtype=np.int64)
    out = np.empty((len(codes), d), dtype=np.int64)
    r = codes.copy()
    for i in range(d):
        out[:, i] = r % q
        r //= q
    return out


def inverse_powers(G: GF, rows: np.ndarray, n: int, L: int) -> np.ndarray:
    """Coefficients of x^(n d + k), k < L, in a^(-n) for each row (codes in G)."""
    B, d = rows.shape
    if L <= 0:
        return np.zeros((B, 0), dtype=np.int64)
    # a^(-1) = x^d / (1 + sum_j c_{d-j} x^j)
    w = np.zeros((B, L), dtype=np.int64)
    w[:, 0] = 1
    for k in range(1, L):
        acc = np.zeros(B, dtype=np.int64)
        for j in range(1, min(k, d) + 1):
            acc = G.vadd(acc, G.vmul(rows[:, d - j], w[:, k - j]))
        w[:, k] = G.vmul(acc, np.full(B, G.neg(1), dtype=np.int64)) if G.p != 2 else acc
    out = w
    for _ in range(n - 1):
        nxt = np.zeros((B, L), dtype=np.int64)
        for k in range(L):
            acc = np.zeros(B, dtype=np.int64)
            for j in range(k + 1):
                acc = G.vadd(acc, G.vmul(out[:, j], w[:, k - j]))
            nxt[:, k] = acc
        out = nxt
    return out


def _poly_mul_axis(G: GF, R: np.ndarray, f: np.ndarray, axis: int) -> np.ndarray:
    """Batched product of R (B, *t) by univariate polynomials f (B, m) along a t-axis."""
    m = f.shape[1]
    shape = list(R.shape)
    shape[axis] += m - 1
    out = np.zeros(shape, dtype=np.int64)
    bshape = (R.shape[0],) + (1,) * (R.ndim - 1)
    for k in range(m):
        sl = [slice(None)] * R.ndim
        sl[axis] = slice(k, k + R.shape[axis])
        sl = tuple(sl)
        out[sl] = G.vadd(out[sl], G.vmul(R, f[:, k].reshape(bshape)))
    return out


def rho_batch(split: SplitAlpha, rows: np.ndarray) -> np.ndarray:
    """rho(a) = c^d prod_j a(y_j) for monic a given by coefficient rows (F codes)."""
    spec = split.spec
    G = spec.F
    B, d = rows.shape
    R = np.full((B,) + (1,) * spec.s, G.pow(split.c, d), dtype=np.int64)
    full = np.concatenate([rows, np.ones((B, 1), dtype=np.int64)], axis=1)
    for kind, y in split.roots:
        if kind == "t":
            R = _poly_mul_axis(G, R, full, y)
        else:
            acc = np.ones(B, dtype=np.int64)
            yy = np.full(B, y, dtype=np.int64)
            for i in range(d - 1, -1, -1):
                acc = G.vadd(G.vmul(acc, yy), rows[:, i])
            R = G.vmul(R, acc.reshape((B,) + (1,) * spec.s))
    return R


def weighted_sum(G: GF, W: np.ndarray, R: np.ndarray) -> np.ndarray:
    """sum_b W[b, k] R[b, ...] as codes of shape (L, *t)."""
    B, L = W.shape
    flat = R.reshape(B, -1)
    if G.e == 1 and B * (G.p - 1) ** 2 < 2 ** 52:
        out = np.rint(W.T.astype(np.float64) @ flat.astype(np.float64)).astype(np.int64) % G.p
    elif W.size and int(W.max()) < G.p and B * (G.p - 1) ** 2 < 2 ** 52:
        # prime-field weights act digitwise on the extension values
        dig = G.to_digit_array(flat).astype(np.float64)          # (e, B, M)
        acc = W.T.astype(np.float64) @ dig
        out = G.from_digit_array(np.rint(acc).astype(np.int64) % G.p)
    else:
        out = np.zeros((L, flat.shape[1]), dtype=np.int64)
        for k in range(L):
            prod = G.vmul(W[:, k:k + 1], flat)
            out[k] = _field_sum(G, prod)
    return out.reshape((L,) + R.shape[1:])


def _field_sum(G: GF, a: np.ndarray) -> np.ndarray:
    if G.e == 1:
        return a.sum(axis=0) % G.p
    dig = G.to_digit_array(a)
    return G.from_digit_array(dig.sum(axis=1) % G.p)


def _to_dense(spec: FieldSpec, codes: np.ndarray, shift: int, L: int) -> np.ndarray:
    """(L', *t) codes placed at x^shift inside an (e, L, *t) digit array."""
    F = spec.F
    out = np.zeros((F.e, L) + codes.shape[1:], dtype=np.int64)
    take = min(codes.shape[0], L - shift)
    if take > 0:
        out[:, shift:shift + take] = dense.from_codes(F, codes[:take])
    return out


def _one(spec: FieldSpec, L: int) -> np.ndarray:
    out = np.zeros((spec.F.e, L) + (1,) * spec.s, dtype=np.int64)
    out[(0, 0) + (0,) * spec.s] = 1
    return out


def _mul_trunc(spec, a, b, L):
    return dense.trim(dense.mul(spec.F, a, b)[:, :L]) if a.shape[1] and b.shape[1] else a


def _add(spec, a, b):
    return dense.add(spec.F, a, b)


def _series_value(spec: FieldSpec, arr: np.ndarray, N: int) -> LaurentSeries:
    return LaurentSeries(spec, 0, arr, N)


def _embed_rows(spec: FieldSpec, rows: np.ndarray) -> np.ndarray:
    if spec.m == 1:
        return rows
    return np.asarray(spec.embed, dtype=np.int64)[rows]


# -- Euler route --------------------------------------------------------------------

def euler_bound(n: int, N: int) -> int:
    """Largest prime degree whose factor differs from 1 modulo theta^-(N+1)."""
    return N // n


def _geometric_factor(spec: FieldSpec, w: np.ndarray, r: np.ndarray, v: int, K: int,
                      L: int) -> np.ndarray:
    """1/(1 - r x^v w) = sum_{k<=K} r^k x^(kv) w^k modulo x^L, as an (e, L, *t) array.

    ``w`` holds x-coefficients (t-free codes), ``r`` a t-polynomial (codes).
    """
    F = spec.F
    out = _one(spec, L)
    wk = dense.from_codes(F, w)                    # (e, L') in x
    rk = dense.from_codes(F, r)                    # (e, *t)
    wpow, rpow = wk, rk
    for k in range(1, K + 1):
        shift = k * v
        if shift >= L:
            break
        xs = wpow[:, :L - shift]
        term = np.einsum("ex,f...->efx...", xs, rpow)
        if F.e == 1:
            term = term[:, 0]
        else:
            term = dense.fold_digits(F, _diag_sum(term))
        block = np.zeros((F.e, L) + term.shape[2:], dtype=np.int64)
        block[:, shift:shift + term.shape[1]] = term
        out = dense.add(F, out, block)
        wpow = dense.mul(F, wpow, wk)[:, :L]
        rpow = dense.trim(dense.mul(F, rpow, rk))
    return out


def _diag_sum(term: np.ndarray) -> np.ndarray:
    """Collapse digit axes (e, e, ...) to (2e-1, ...) by summing along anti-diagonals."""
    e = term.shape[0]
    out = np.zeros((2 * e - 1,) + term.shape[2:], dtype=np.int64)
    for i in range(e):
        for j in range(e):
            out[i + j] += term[i, j]
    return out


@functools.lru_cache(maxsize=256)
def _prime_block(spec: FieldSpec, n: int, L: int, d: int):
    """Degree-d primes: codes, coefficient rows in F and the x-expansion of P^-n."""
    codes = prime_codes(spec.q, d)
    rows = _embed_rows(spec, coeff_rows(spec.q, d, codes))
    W = inverse_powers(spec.F, rows, n, L - n * d)
    for a in (codes, rows, W):
        a.setflags(write=False)
    return codes, rows, W


def _euler_degree(spec: FieldSpec, values, n: int, N: int, d: int) -> tuple:
    """('small', product array) or ('large', linear-term array) for degree d.

    ``values`` maps coefficient rows of the degree-d primes to the numerators
    r(P) of their factors P^n / (P^n - r(P)).
    """
    G = spec.F
    L = N + 1
    codes, rows, W = _prime_block(spec, n, L, d)
    R = values(rows)
    if 2 * n * d > N:
        return "large", _to_dense(spec, weighted_sum(G, W, R), n * d, L)
    prod = _one(spec, L)
    K = N // (n * d)
    for b in range(len(codes)):
        fac = _geometric_factor(spec, W[b], np.asarray(R[b]), n * d, K, L)
        prod = _mul_trunc(spec, prod, fac, L)
    return "small", prod


def _euler_alpha(alpha: ThetaPoly, n: int, N: int, meta: dict) -> LValue:
    split = split_alpha(alpha)
    if split is None:
        raise ValueError("closed-form Euler factors need alpha split over k")
    return euler_from_values(alpha.spec, lambda rows: rho_batch(split, rows), n, N, meta)


def euler_from_values(spec: FieldSpec, values, n: int, N: int, meta: dict) -> LValue:
    """prod over primes P of deg <= N/n of P^n / (P^n - r(P)), truncated at theta^-N."""
    L = N + 1
    D = euler_bound(n, N)
    if D >= 1 and spec.q ** D > SIEVE_LIMIT:
        raise BudgetExceeded(f"Euler product needs every prime of degree <= {D} over "
                             f"F_{spec.q}; {spec.q}^{D} candidates exceed the sieve limit")
    parts = pool_map(lambda d: _euler_degree(spec, values, n, N, d), range(1, D + 1))
    small = _one(spec, L)
    linear = _one(spec, L)
    for kind, arr in parts:
        if kind == "small":
            small = _mul_trunc(spec, small, arr, L)
        else:
            linear = _add(spec, linear, arr)
    value = _mul_trunc(spec, small, linear, L)
    meta = dict(meta, n=n, s=spec.s, q=spec.q, N=N, D=D, method="euler")
    return LValue(_series_value(spec, value, N), meta)


def euler_product(E: AndersonModule, N: int) -> LValue:
    """prod over primes of [Lie(E)(R_s/P)] / [E(R_s/P)], truncated at theta^-N."""
    if N < 1:
        raise ValueError("N must be at least 1")
    meta = {"module": E.describe()}
    if E.alpha is not None and split_alpha(E.alpha) is not None:
        return _euler_alpha(E.alpha, E.n, N, meta)
    return _euler_general(E, N, meta)


def _euler_general(E: AndersonModule, N: int, meta: dict) -> LValue:
    """Factors from Fitting generators; each is 1 mod theta^-(n deg P) by degree count."""
    spec = E.spec
    n = E.n
    D = euler_bound(n, N)
    count = sum(len(prime_codes(spec.q, d)) for d in range(1, D + 1))
    if count > GENERAL_PRIME_LIMIT:
        raise BudgetExceeded(f"{count} primes exceed the general-module limit")
    value = LaurentSeries.one(spec, N)
    for d in range(1, D + 1):
        for P in enumerate_primes_of_degree(spec.q, d):
            lie = fitting_generator(lie_mod_p(E, P))
            eg = fitting_generator(e_mod_p(E, P))
            fac = LaurentSeries.from_theta(lie) / LaurentSeries.from_theta(eg).truncate(N + 2 * n * d)
            value = (value * fac).truncate(N)
    meta = dict(meta, n=n, s=spec.s, q=spec.q, N=N, D=D, method="euler")
    return LValue(value.truncate(N), meta)


# -- summation route -------------------------------------------------------------------

def block_valuation_bound(q: int, n: int, e: int, d: int) -> int:
    """Lower bound for the valuation of the degree-d block of sum rho(a)/a^n."""
    if d == 0:
        return 0
    return n * d + (q - 1) * d * (d + 1) // 2 - e * d


def sum_degrees(q: int, n: int, e: int, N: int) -> list:
    """Degrees whose blocks can be nonzero modulo theta^-(N+1)."""
    return [d for d in range(0, N // n + 1) if block_valuation_bound(q, n, e, d) <= N]


def _rho_generic(alpha: ThetaPoly, rows: np.ndarray, q: int) -> np.ndarray:
    spec = alpha.spec
    G = spec.F
    out = []
    for r in rows:
        a = ThetaPoly.from_codes(spec, [int(x) for x in r] + [1], base=spec.m == 1)
        out.append(resultant(a, alpha))
    # pack KElem polynomials into a code array
    shape = tuple(max(x.num.shape[1 + i] for x in out) for i in range(spec.s))
    R = np.zeros((len(out),) + shape, dtype=np.int64)
    for b, x in enumerate(out):
        if not x.is_polynomial():
            raise ValueError("rho(a) must be a t-polynomial")
        c = dense.codes(G, x.num)
        R[(b,) + tuple(slice(0, k) for k in np.shape(c))] = c
    return R


def _sum_block(alpha: ThetaPoly, split, n: int, N: int, d: int) -> np.ndarray:
    spec = alpha.spec
    q, G = spec.q, spec.F
    L = N + 1
    if q ** d > SUM_LIMIT:
        raise BudgetExceeded(f"block of {q}^{d} monic polynomials exceeds the summation limit")
    codes = np.arange(q ** d, dtype=np.int64)
    rows = _embed_rows(spec, coeff_rows(q, d, codes))
    W = inverse_powers(G, rows, n, L - n * d)
    R = rho_batch(split, rows) if split is not None else _rho_generic(alpha, rows, q)
    return _to_dense(spec, weighted_sum(G, W, R), n * d, L)


def dirichlet_sum(alpha: ThetaPoly, n: int, N: int, meta: dict | None = None) -> LValue:
    """sum over monic a of rho_alpha(a) / a^n, truncated at theta^-N."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if N < 0:
        raise ValueError("N must be nonnegative")
    spec = alpha.spec
    split = split_alpha(alpha)
    degs = sum_degrees(spec.q, n, alpha.degree, N)
    blocks = pool_map(lambda d: _sum_block(alpha, split, n, N, d), degs)
    L = N + 1
    total = np.zeros((spec.F.e, L) + (1,) * spec.s, dtype=np.int64)
    for b in blocks:
        total = _add(spec, total, b)
    meta = dict(meta or {}, alpha=str(alpha), n=n, s=spec.s, q=spec.q, N=N,
                D=max(degs), method="sum")
    return LValue(_series_value(spec, total, N), meta)


def carlitz_zeta(n: int, N: int, q: int = 2) -> LValue:
    """zeta_A(n) = sum over monic a of 1/a^n."""
    spec = FieldSpec.for_q(q)
    return dirichlet_sum(ThetaPoly.one(spec), n, N, {"module": "C^n"})


def pellarin_value(s: int, n: int, N: int, q: int = 2) -> LValue:
    """sum over monic a of a(t_1)...a(t_s)/a^n."""
    if not 1 <= s <= 2:
        raise ValueError("s must be 1 or 2")
    spec = FieldSpec.for_q(q, s)
    return dirichlet_sum(pellarin_alpha(spec), n, N, {"module": "E_alpha"})


def pellarin_euler(s: int, n: int, N: int, q: int = 2) -> LValue:
    spec = FieldSpec.for_q(q, s)
    return euler_product(e_alpha_module(pellarin_alpha(spec), n), N)


# -- class formula -------------------------------------------------------------------

class LatticeError(ValueError):
    """A supplied lattice basis is degenerate at working precision."""


def lattice_preset(name: str, E: AndersonModule, N: int) -> LatticeBasis:
    """Known lattices: 'zeta1' = {zeta_A(1)} for the Carlitz module, 'canonical'."""
    spec = E.spec
    if name == "canonical":
        return LatticeBasis.canonical(spec, E.n)
    if name == "zeta1":
        if not (E.n == 1 and spec.s == 0 and E.alpha is not None and E.alpha == ThetaPoly.one(spec)):
            raise ValueError("preset zeta1 is the Carlitz lattice over A")
        z = carlitz_zeta(1, N, spec.q).value
        return LatticeBasis(((z,),))
    raise ValueError(f"unknown lattice preset {name!r}")


def class_formula_residual(E: AndersonModule, lattice: LatticeBasis, h_fitting: ThetaPoly,
                           N: int) -> ClassFormulaReport:
    """L(E) - [Lie : lattice] [H], with PASS iff the residual vanishes past theta^-N."""
    if lattice.n != E.n:
        raise ValueError("lattice dimension differs from the module")
    spec = E.spec
    lhs = euler_product(E, N)
    try:
        idx = lattice_index(LatticeBasis.canonical(spec, E.n), lattice, module=E, prec=N)
    except PrecisionError as exc:
        raise LatticeError(str(exc)) from None
    rhs = (idx * LaurentSeries.from_theta(h_fitting)).truncate(N)
    residual = (lhs.value - rhs).truncate(N)
    v = residual.valuation()
    return ClassFormulaReport(lhs, idx.truncate(N), h_fitting, residual, v, N)
