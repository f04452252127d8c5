"""Finite k[theta]-modules, their Fitting generators, rho and lattice indices.

A finite module is a k-vector space with a k-linear theta-action T; it is
k[theta]^m / (theta I - T), so its Fitting ideal is generated by the
characteristic polynomial of T.  On (R_s/P)^n the basis is theta^i e_j,
0 <= i < deg P, ordered by (i, j) lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .anderson import AndersonModule, LieVector, partial_action
from .ff import tpoly
from .ff.kfield import INF, FieldSpec, KElem
from .ff.kmatrix import KMatrix, _lcm, _scale_rows, det_unipotent_series, pad_batch
from .ff.laurent import LaurentSeries, PrecisionError, laurent_arith
from .ff.ops import monicize
from .ff.primes import PrimePoly, factor
from .ff.resultant import resultant
from .ff.text import parse_kelem
from .ff.thetapoly import ThetaPoly
from .twisted import SkewPoly, apply_mod


class InconsistencyError(ArithmeticError):
    """Two independent computations of the same quantity disagree."""


@dataclass(frozen=True, eq=False)
class FiniteModule:
    """A finite-dimensional k-space with the theta-action matrix ``T``."""

    T: KMatrix
    labels: tuple | None = None

    def __post_init__(self):
        if self.T.shape[0] != self.T.shape[1]:
            raise ValueError("theta-action must be square")
        if self.labels is not None and len(self.labels) != self.dim:
            raise ValueError("one label per basis vector")

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows, labels=None) -> "FiniteModule":
        rows = [[x if isinstance(x, KElem) else KElem.from_int(spec, x) for x in r] for r in rows]
        if not rows:
            return cls(KMatrix.identity(spec, 0), labels)
        return cls(KMatrix.from_kelems(spec, rows), tuple(labels) if labels else None)

    @property
    def spec(self) -> FieldSpec:
        return self.T.spec

    @property
    def dim(self) -> int:
        return self.T.shape[0]

    def matrix(self):
        return self.T.rows()

    def to_json(self) -> dict:
        return {"dim": self.dim, "theta_matrix": self.T.to_strings()}

    @classmethod
    def from_json(cls, spec: FieldSpec, obj: dict) -> "FiniteModule":
        rows = [[parse_kelem(spec, x) for x in r] for r in obj["theta_matrix"]]
        if len(rows) != obj["dim"]:
            raise ValueError("dim does not match the matrix")
        return cls.from_rows(spec, rows)

    def __eq__(self, other):
        return isinstance(other, FiniteModule) and self.T == other.T

    __hash__ = None


# -- residue modules (R_s/P)^n ------------------------------------------------

def _basis_labels(d: int, n: int):
    return tuple(f"T^{i} e{j + 1}" for i in range(d) for j in range(n))


def _residue_module(E: AndersonModule, P: PrimePoly, op: SkewPoly) -> FiniteModule:
    spec, n, d = E.spec, E.n, P.degree
    Pt = P.to_theta(spec)
    m = n * d
    zero = KElem.zero(spec)
    rows = [[zero] * m for _ in range(m)]
    theta_pows = [ThetaPoly.monomial(spec, i) for i in range(d)]
    for i in range(d):
        for j in range(n):
            v = [theta_pows[i] if l == j else ThetaPoly.zero(spec) for l in range(n)]
            image = apply_mod(op, v, Pt)
            col = i * n + j
            for l, r in enumerate(image):
                for i2 in range(min(d, r.degree + 1) if not r.is_zero() else 0):
                    c = r.coeff(i2)
                    if not c.is_zero():
                        rows[i2 * n + l][col] = c
    return FiniteModule(KMatrix.from_kelems(spec, rows), _basis_labels(d, n))


def lie_mod_p(E: AndersonModule, P: PrimePoly) -> FiniteModule:
    """Lie(E)(R_s/P): theta acts through d, i.e. by A_0."""
    return _residue_module(E, P, SkewPoly(E.spec, E.n, [E.A[0]]))


def e_mod_p(E: AndersonModule, P: PrimePoly) -> FiniteModule:
    """E(R_s/P): theta acts through phi_theta, with tau = Frobenius of A/P."""
    return _residue_module(E, P, E.phi_theta())


def fitting_generator(M: FiniteModule) -> ThetaPoly:
    """Monic generator of the Fitting ideal: det(theta I - T)."""
    return M.T.charpoly()


# -- Smith normal form over k[theta] ---------------------------------------------

def _krylov_rank(rows, v) -> int:
    """Rank of v, Tv, ..., T^(m-1) v over k."""
    m = len(rows)
    zero = KElem.zero(v[0].spec)
    vecs = [v]
    for _ in range(m - 1):
        w = vecs[-1]
        vecs.append([sum((rows[i][j] * w[j] for j in range(m)), zero) for i in range(m)])
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, m) if not vecs[i][c].is_zero()), None)
        if piv is None:
            continue
        vecs[r], vecs[piv] = vecs[piv], vecs[r]
        inv = vecs[r][c].inverse()
        for i in range(r + 1, m):
            if not vecs[i][c].is_zero():
                f = vecs[i][c] * inv
                vecs[i] = [a - f * b for a, b in zip(vecs[i], vecs[r])]
        r += 1
    return r


def is_cyclic(M: FiniteModule) -> bool:
    """True if some standard basis vector generates M over k[theta].

    Only a sufficient test: a cyclic module whose generators all avoid the
    standard basis is reported False and left to the Smith reduction.
    """
    m = M.dim
    if m == 0:
        return True
    rows = M.matrix()
    one, zero = KElem.one(M.spec), KElem.zero(M.spec)
    return any(_krylov_rank(rows, [one if i == j else zero for i in range(m)]) == m
               for j in range(m))


def invariant_factors(M: FiniteModule) -> list:
    """Nontrivial monic invariant factors of theta I - T, in divisibility order."""
    spec = M.spec
    m = M.dim
    if is_cyclic(M):
        # theta I - T is equivalent to diag(1, ..., 1, charpoly)
        return [fitting_generator(M)] if m else []
    theta = ThetaPoly.theta(spec)
    rows = M.matrix()
    A = [[(theta if i == j else ThetaPoly.zero(spec)) - ThetaPoly.constant(spec, rows[i][j])
          for j in range(m)] for i in range(m)]
    diag = []
    for c in range(m):
        diag.append(_smith_step(A, c))
    # diagonal entries divide one another after the reduction; normalize
    out = [monicize(x)[1] for x in diag if not x.is_zero() and x.degree > 0]
    return out


def _smith_step(A, c: int) -> ThetaPoly:
    """Clear row and column c below/right of the pivot; return the pivot."""
    m = len(A)
    while True:
        best = None
        for i in range(c, m):
            for j in range(c, m):
                if not A[i][j].is_zero() and (best is None or A[i][j].degree < best[0]):
                    best = (A[i][j].degree, i, j)
        if best is None:
            return A[c][c]
        _, i, j = best
        A[c], A[i] = A[i], A[c]
        for row in A:
            row[c], row[j] = row[j], row[c]
        piv = A[c][c]
        clean = True
        for i in range(c + 1, m):
            if not A[i][c].is_zero():
                q, r = A[i][c].divmod(piv)
                A[i] = [A[i][k] - q * A[c][k] for k in range(m)]
                clean = clean and r.is_zero()
        for j in range(c + 1, m):
            if not A[c][j].is_zero():
                q, r = A[c][j].divmod(piv)
                for row in A:
                    row[j] = row[j] - q * row[c]
                clean = clean and r.is_zero()
        if not clean:
            continue
        # the pivot must divide every remaining entry
        bad = next(((i, j) for i in range(c + 1, m) for j in range(c + 1, m)
                    if not (A[i][j] % piv).is_zero()), None)
        if bad is None:
            return piv
        i = bad[0]
        A[c] = [A[c][k] + A[i][k] for k in range(m)]


# -- rho ---------------------------------------------------------------------------

def _rho_product(alpha: ThetaPoly, Pt: ThetaPoly, d: int) -> KElem:
    acc = alpha % Pt
    for i in range(1, d):
        acc = (acc * (alpha.twist(i) % Pt)) % Pt
    if not acc.is_zero() and acc.degree > 0:
        raise InconsistencyError("Frobenius product is not a constant modulo P")
    return acc.coeff(0) if not acc.is_zero() else KElem.zero(alpha.spec)


def rho(alpha: ThetaPoly, P: PrimePoly) -> KElem:
    """alpha tau(alpha) ... tau^(d-1)(alpha) mod P, checked against Res(P, alpha)."""
    if alpha.is_zero():
        raise ValueError("alpha must be nonzero")
    spec = alpha.spec
    Pt = P.to_theta(spec)
    y = _rho_product(alpha, Pt, P.degree)
    r = resultant(Pt, alpha)
    if y != r:
        raise InconsistencyError(f"rho by product {y} differs from resultant {r}")
    return y


def rho_multiplicative(alpha: ThetaPoly, a: ThetaPoly) -> KElem:
    """prod rho(alpha, P_i)^e_i over the factorization a = prod P_i^e_i."""
    if a.is_zero() or not a.is_monic():
        raise ValueError("a must be monic")
    codes = a.base_codes()
    out = KElem.one(alpha.spec)
    for P, e in factor(alpha.spec.q, codes):
        out = out * rho(alpha, P) ** e
    return out


# -- the operator Theta -------------------------------------------------------------

@dataclass(frozen=True)
class ZSeries:
    """sum_{k < N} c_k Z^k modulo Z^N, coefficients in k."""

    coeffs: tuple
    N: int

    @classmethod
    def one(cls, spec: FieldSpec, N: int) -> "ZSeries":
        return cls(tuple(KElem.one(spec) if k == 0 else KElem.zero(spec) for k in range(N)), N)

    def __mul__(self, other: "ZSeries") -> "ZSeries":
        N = min(self.N, other.N)
        spec = self.coeffs[0].spec
        out = []
        for k in range(N):
            acc = KElem.zero(spec)
            for i in range(k + 1):
                acc = acc + self.coeffs[i] * other.coeffs[k - i]
            out.append(acc)
        return ZSeries(tuple(out), N)

    def is_one(self) -> bool:
        return self.coeffs[0].is_one() and all(c.is_zero() for c in self.coeffs[1:])

    def to_laurent(self) -> LaurentSeries:
        """Substitute Z = 1/theta."""
        spec = self.coeffs[0].spec
        return LaurentSeries.from_terms(spec, [(-k, c) for k, c in enumerate(self.coeffs)],
                                        prec=self.N - 1)

    def to_json(self) -> dict:
        return {"N": self.N, "coeffs": [str(c) for c in self.coeffs]}

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            mon = "" if k == 0 else ("Z" if k == 1 else f"Z^{k}")
            cs = str(c)
            if not mon:
                parts.append(cs)
            elif cs == "1":
                parts.append(mon)
            else:
                parts.append(f"({cs})*{mon}")
        head = "+".join(parts) if parts else "0"
        return f"{head}+O(Z^{self.N})"


def reversed_quotient(num: ThetaPoly, den: ThetaPoly, N: int) -> ZSeries:
    """num/den with theta = 1/Z, for monic polynomials of equal degree."""
    if num.degree != den.degree or not num.is_monic() or not den.is_monic():
        raise ValueError("expects monic polynomials of the same degree")
    spec = num.spec
    m = num.degree
    a = [num.coeff(m - k) if k <= m else KElem.zero(spec) for k in range(N)]
    b = [den.coeff(m - k) if k <= m else KElem.zero(spec) for k in range(N)]
    # power series division with b[0] = 1
    out = []
    for k in range(N):
        acc = a[k]
        for i in range(1, k + 1):
            acc = acc - b[i] * out[k - i]
        out.append(acc)
    return ZSeries(tuple(out), N)


def theta_operator_det(E: AndersonModule, P: PrimePoly, N: int) -> ZSeries:
    """det(1 + Theta) mod Z^N, Theta = sum_{k>=1} (d - phi) d^(k-1) Z^k on (R_s/P)^n."""
    if N < 1:
        raise ValueError("N must be at least 1")
    spec = E.spec
    F, s = spec.F, spec.s
    D = lie_mod_p(E, P).T
    Phi = e_mod_p(E, P).T
    m = D.shape[0]
    c = _lcm(spec, D.den, Phi.den)
    Dn = D.num if D.is_polynomial() and Phi.is_polynomial() else \
        _scale_rows(F, D.num, _quotient(spec, c, D.den))
    Pn = Phi.num if D.is_polynomial() and Phi.is_polynomial() else \
        _scale_rows(F, Phi.num, _quotient(spec, c, Phi.den))
    # With Z = c W every Theta_k Z^k = num_k W^k has polynomial entries.
    diff = KMatrix(spec, _pad_sub(F, Dn, Pn))
    Dk = KMatrix(spec, Dn)
    terms = []
    cur = diff
    for k in range(1, N):
        terms.append(cur.num)
        cur = cur @ Dk
    tshape = tuple(max([1] + [t.shape[3 + i] for t in terms]) for i in range(s))
    M = np.zeros((m, m, F.e, N) + tshape, dtype=np.int64)
    for i in range(m):
        M[(i, i, 0, 0) + (0,) * s] = 1
    for k, t in enumerate(terms, start=1):
        M[:, :, :, k][(slice(None),) * 3 + tuple(slice(0, x) for x in t.shape[3:])] += t
    M %= F.p
    if m == 0:
        return ZSeries.one(spec, N)
    det = det_unipotent_series(F, M, N)
    out = []
    cpow = KElem(spec, c) if s else KElem.one(spec)
    scale = KElem.one(spec)
    for k in range(N):
        out.append(KElem(spec, det[:, k]) / scale)
        scale = scale * cpow
    return ZSeries(tuple(out), N)


def _quotient(spec, c, d):
    return tpoly.divexact(spec.F, c, d, spec.s)


def _pad_sub(F, a, b):
    shape = tuple(max(x, y) for x, y in zip(a.shape[3:], b.shape[3:]))
    return (pad_batch(a, 2, shape) - pad_batch(b, 2, shape)) % F.p


# -- lattices --------------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeBasis:
    """n vectors of Lie(E)(K_inf) spanning an R_s-lattice."""

    vectors: tuple

    def __post_init__(self):
        vecs = tuple(v if isinstance(v, LieVector) else LieVector(v) for v in self.vectors)
        if not vecs:
            raise ValueError("empty basis")
        n = len(vecs[0])
        if len(vecs) != n or any(len(v) != n for v in vecs):
            raise ValueError("a basis has n vectors of length n")
        object.__setattr__(self, "vectors", vecs)

    @property
    def n(self) -> int:
        return len(self.vectors)

    @property
    def spec(self) -> FieldSpec:
        return self.vectors[0].spec

    @classmethod
    def canonical(cls, spec: FieldSpec, n: int) -> "LatticeBasis":
        one, zero = LaurentSeries.one(spec), LaurentSeries.zero(spec)
        return cls(tuple(LieVector([one if i == j else zero for i in range(n)])
                         for j in range(n)))

    def to_json(self) -> list:
        return [v.to_json() for v in self.vectors]


def d_coordinates(E: AndersonModule, v: LieVector, prec: int) -> LieVector:
    """x with sum_j d(x_j) e_j = v, by the nilpotent fixed-point iteration."""
    x = v
    for _ in range(E.n + 1):
        image = [LaurentSeries.zero(E.spec) for _ in range(E.n)]
        for j in range(E.n):
            M = partial_action(E, x[j])
            for i in range(E.n):
                image[i] = image[i] + M[i][j]
        x = LieVector([x[i] + (v[i] - image[i]) for i in range(E.n)])
        if all((v[i] - image[i]).truncate(prec).is_zero() for i in range(E.n)):
            return LieVector([c.truncate(prec) for c in x])
    raise ArithmeticError("coordinate iteration did not settle")


def _det(rows, prec):
    """Determinant of a square matrix of Laurent series by elimination."""
    n = len(rows)
    A = [list(r) for r in rows]
    spec = A[0][0].spec
    det = LaurentSeries.one(spec)
    sign = 1
    for c in range(n):
        best = None
        for i in range(c, n):
            x = A[i][c].truncate(prec)
            v = x.valuation()
            if v != INF and (best is None or v < best[0]):
                best = (v, i)
        if best is None:
            raise PrecisionError("singular change of basis at working precision")
        i = best[1]
        if i != c:
            A[c], A[i] = A[i], A[c]
            sign = -sign
        piv = A[c][c]
        det = det * piv
        inv = piv.inverse(prec) if piv.is_exact() else piv.inverse()
        for i in range(c + 1, n):
            f = A[i][c] * inv
            A[i] = [A[i][k] - f * A[c][k] for k in range(n)]
    return det if sign == 1 else -det


def lattice_index(B1: LatticeBasis, B2: LatticeBasis, module: AndersonModule | None = None,
                  prec: int | None = None):
    """[M1 : M2] = monicize(det sigma) with sigma(B1) = B2.

    Without ``module`` the K_inf-structure is coordinatewise; with it, and
    n > 1, vectors are first rewritten in d-coordinates of the canonical
    basis.
    """
    if B1.n != B2.n:
        raise ValueError("ambient dimensions differ")
    if prec is None:
        precs = [v.prec for v in B1.vectors + B2.vectors if v.prec is not None]
        prec = min(precs) if precs else 32
    v1, v2 = B1.vectors, B2.vectors
    if module is not None and module.n > 1:
        v1 = tuple(d_coordinates(module, v, prec) for v in v1)
        v2 = tuple(d_coordinates(module, v, prec) for v in v2)
    n = B1.n
    d1 = _det([[v1[j][i] for j in range(n)] for i in range(n)], prec)
    d2 = _det([[v2[j][i] for j in range(n)] for i in range(n)], prec)
    q = laurent_arith(d2, d1, "div", prec) if d1.is_exact() and d2.is_exact() else d2 / d1
    return monicize(q)[1]
