"""Skew polynomials M_n(k_s(theta)){tau} with tau * a = tau(a) * tau.

``FracMatrix`` holds matrices over the fraction field (entries are
``ThetaFrac``); tau acts entrywise.  ``SkewPoly`` is a finite sum
sum B_j tau^j, ``SkewSeries`` the same with an explicit truncation order:
coefficients of tau^j are known for j <= order and nothing beyond.
"""

from __future__ import annotations

from .ff.kfield import INF, FieldSpec, KElem
from .ff.laurent import LaurentSeries, PrecisionError
from .ff.ratfunc import ThetaFrac, parse_frac
from .ff.thetapoly import ThetaPoly


class TruncationError(IndexError):
    """Access to a skew-series coefficient beyond its truncation order."""


class FracMatrix:
    """A rectangular matrix with entries in k_s(theta)."""

    __slots__ = ("spec", "rows")

    def __init__(self, spec: FieldSpec, rows):
        self.spec = spec
        self.rows = tuple(tuple(ThetaFrac.coerce(spec, x) for x in row) for row in rows)
        if not self.rows or any(len(r) != len(self.rows[0]) for r in self.rows):
            raise ValueError("matrix rows must be nonempty and of equal length")

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0])

    @property
    def n(self) -> int:
        if self.shape[0] != self.shape[1]:
            raise ValueError("not a square matrix")
        return self.shape[0]

    @classmethod
    def zero(cls, spec: FieldSpec, n: int, m: int | None = None) -> "FracMatrix":
        z = ThetaFrac.zero(spec)
        return cls(spec, [[z] * (n if m is None else m) for _ in range(n)])

    @classmethod
    def identity(cls, spec: FieldSpec, n: int) -> "FracMatrix":
        return cls.scalar(spec, n, 1)

    @classmethod
    def scalar(cls, spec: FieldSpec, n: int, c) -> "FracMatrix":
        c = ThetaFrac.coerce(spec, c)
        z = ThetaFrac.zero(spec)
        return cls(spec, [[c if i == j else z for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.rows for x in row)

    def is_polynomial(self) -> bool:
        return all(x.is_polynomial() for row in self.rows for x in row)

    def _check(self, other):
        if not isinstance(other, FracMatrix):
            raise TypeError("expected a FracMatrix")
        if other.spec != self.spec:
            raise ValueError("field mismatch")

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return FracMatrix(self.spec, [[a + b for a, b in zip(r, s)]
                                      for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return FracMatrix(self.spec, [[-a for a in r] for r in self.rows])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, FracMatrix):
            self._check(other)
            m, k = self.shape
            k2, n = other.shape
            if k != k2:
                raise ValueError("shape mismatch")
            out = []
            for i in range(m):
                row = []
                for j in range(n):
                    acc = ThetaFrac.zero(self.spec)
                    for l in range(k):
                        a, b = self.rows[i][l], other.rows[l][j]
                        if not a.is_zero() and not b.is_zero():
                            acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return FracMatrix(self.spec, out)
        c = ThetaFrac.coerce(self.spec, other)
        return FracMatrix(self.spec, [[a * c for a in r] for r in self.rows])

    def __rmul__(self, other):
        c = ThetaFrac.coerce(self.spec, other)
        return FracMatrix(self.spec, [[c * a for a in r] for r in self.rows])

    def twist(self, k: int = 1) -> "FracMatrix":
        if k == 0:
            return self
        return FracMatrix(self.spec, [[a.twist(k) for a in r] for r in self.rows])

    def div_den(self, extra) -> "FracMatrix":
        return FracMatrix(self.spec, [[a.div_den(extra) for a in r] for r in self.rows])

    def reduced(self) -> "FracMatrix":
        return FracMatrix(self.spec, [[a.reduced() for a in r] for r in self.rows])

    def valuation(self):
        return min((a.valuation() for r in self.rows for a in r), default=INF)

    def column_valuations(self):
        m, n = self.shape
        return [min(self.rows[i][j].valuation() for i in range(m)) for j in range(n)]

    def row_valuations(self):
        return [min(a.valuation() for a in r) for r in self.rows]

    def to_laurent(self, prec: int):
        return [[a.to_laurent(prec) for a in r] for r in self.rows]

    def __eq__(self, other):
        if not isinstance(other, FracMatrix):
            return NotImplemented
        return self.spec == other.spec and self.shape == other.shape and all(
            a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    def __hash__(self):
        return hash(tuple(hash(a) for r in self.rows for a in r))

    def to_strings(self):
        return [[str(a) for a in r] for r in self.rows]

    @classmethod
    def from_strings(cls, spec: FieldSpec, rows) -> "FracMatrix":
        return cls(spec, [[parse_frac(spec, s) for s in r] for r in rows])

    def __str__(self):
        return "[" + ",".join("[" + ",".join(r) + "]" for r in self.to_strings()) + "]"

    def __repr__(self):
        return f"FracMatrix({self})"


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs


class SkewPoly:
    """sum_j B_j tau^j with n x n matrix coefficients."""

    __slots__ = ("spec", "n", "coeffs")

    def __init__(self, spec: FieldSpec, n: int, coeffs):
        if n < 1:
            raise ValueError("matrix dimension must be at least 1")
        coeffs = [c if isinstance(c, FracMatrix) else FracMatrix(spec, c) for c in coeffs]
        for c in coeffs:
            if c.shape != (n, n):
                raise ValueError(f"coefficient of shape {c.shape}, expected {(n, n)}")
        self.spec = spec
        self.n = n
        self.coeffs = tuple(_trim(coeffs))

    @property
    def degree(self) -> int:
        """tau-degree r (-1 for zero)."""
        return len(self.coeffs) - 1

    order = None

    def coeff(self, j: int) -> FracMatrix:
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return FracMatrix.zero(self.spec, self.n)

    @classmethod
    def identity(cls, spec: FieldSpec, n: int) -> "SkewPoly":
        return cls(spec, n, [FracMatrix.identity(spec, n)])

    @classmethod
    def tau(cls, spec: FieldSpec, n: int) -> "SkewPoly":
        return cls(spec, n, [FracMatrix.zero(spec, n), FracMatrix.identity(spec, n)])

    @classmethod
    def scalar(cls, spec: FieldSpec, n: int, c) -> "SkewPoly":
        return cls(spec, n, [FracMatrix.scalar(spec, n, c)])

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        return skew_add(self, other)

    def __sub__(self, other):
        return skew_add(self, -other)

    def __neg__(self):
        return SkewPoly(self.spec, self.n, [-c for c in self.coeffs])

    def __mul__(self, other):
        return skew_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, SkewPoly) or isinstance(other, SkewSeries):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}τ^{j}" for j, c in enumerate(self.coeffs) if not c.is_zero())

    def __repr__(self):
        return f"SkewPoly({self})"

    def to_json(self) -> dict:
        return {"n": self.n, "field": self.spec.to_json(),
                "terms": [{"tau_deg": j, "matrix": c.to_strings()}
                          for j, c in enumerate(self.coeffs) if not c.is_zero()]}

    @classmethod
    def from_json(cls, obj: dict) -> "SkewPoly":
        fj = obj["field"]
        spec = FieldSpec(fj["p"], fj.get("e", 1), fj.get("s", 0), fj.get("m", 1))
        n = obj["n"]
        terms = {t["tau_deg"]: FracMatrix.from_strings(spec, t["matrix"]) for t in obj["terms"]}
        r = max(terms, default=-1)
        return cls(spec, n, [terms.get(j, FracMatrix.zero(spec, n)) for j in range(r + 1)])


class SkewSeries(SkewPoly):
    """sum_{j <= order} B_j tau^j, a truncation of a skew power series."""

    __slots__ = ("order",)

    def __init__(self, spec: FieldSpec, n: int, coeffs, order: int):
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        coeffs = list(coeffs)[:order + 1]
        super().__init__(spec, n, coeffs)
        self.order = order

    def coeff(self, j: int) -> FracMatrix:
        if j > self.order:
            raise TruncationError(f"tau^{j} is beyond the truncation order {self.order}")
        return super().coeff(j)

    def __neg__(self):
        return SkewSeries(self.spec, self.n, [-c for c in self.coeffs], self.order)

    def __eq__(self, other):
        if not isinstance(other, SkewPoly):
            return NotImplemented
        order = self.order if other.order is None else min(self.order, other.order)
        return all(self.coeff(j) == other.coeff(j) for j in range(order + 1))

    def __hash__(self):
        return hash((self.coeffs, self.order))

    def __str__(self):
        return f"{SkewPoly.__str__(self)} + O(τ^{self.order + 1})"

    def truncate(self, order: int) -> "SkewSeries":
        return SkewSeries(self.spec, self.n, self.coeffs, min(order, self.order))


def _order(a, b):
    orders = [x.order for x in (a, b) if x.order is not None]
    return min(orders) if orders else None


def _build(spec, n, coeffs, order):
    if order is None:
        return SkewPoly(spec, n, coeffs)
    return SkewSeries(spec, n, coeffs, order)


def skew_add(a: SkewPoly, b: SkewPoly) -> SkewPoly:
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")
    order = _order(a, b)
    top = max(len(a.coeffs), len(b.coeffs))
    if order is not None:
        top = min(top, order + 1)
    coeffs = [SkewPoly.coeff(a, j) + SkewPoly.coeff(b, j) for j in range(top)]
    return _build(a.spec, a.n, coeffs, order)


def skew_mul(a: SkewPoly, b: SkewPoly) -> SkewPoly:
    """(A tau^i)(B tau^j) = A tau^i(B) tau^(i+j); series truncate at the smaller order."""
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")
    order = _order(a, b)
    top = len(a.coeffs) + len(b.coeffs) - 1
    if order is not None:
        top = min(top, order + 1)
    out = [FracMatrix.zero(a.spec, a.n) for _ in range(max(top, 0))]
    for i, A in enumerate(a.coeffs):
        if A.is_zero():
            continue
        for j, B in enumerate(b.coeffs):
            if i + j >= top:
                break
            if B.is_zero():
                continue
            out[i + j] = out[i + j] + A * B.twist(i)
    return _build(a.spec, a.n, out, order)


# -- actions -----------------------------------------------------------------

def _as_series(x, spec) -> LaurentSeries:
    if isinstance(x, LaurentSeries):
        return x
    if isinstance(x, ThetaPoly):
        return LaurentSeries.from_theta(x)
    if isinstance(x, KElem):
        return LaurentSeries.from_kelem(x)
    if isinstance(x, ThetaFrac):
        raise TypeError("give rational vector entries as Laurent series")
    return LaurentSeries.from_kelem(KElem.from_int(spec, int(x)))


def matrix_apply(M: FracMatrix, x, prec=None):
    """M x for a vector of Laurent series; entries of M are expanded as needed."""
    spec = M.spec
    m, n = M.shape
    if len(x) != n:
        raise ValueError(f"vector of length {len(x)}, expected {n}")
    out = []
    for i in range(m):
        acc = LaurentSeries.zero(spec)
        for j in range(n):
            a = M[i, j]
            if a.is_zero():
                continue
            xj = x[j]
            if a.is_polynomial():
                term = LaurentSeries.from_theta(a.num) * xj
            else:
                if prec is None and xj.prec is None:
                    raise ValueError("rational coefficient acting on an exact vector: give prec")
                vx = xj._valuation_bound()
                target = prec if prec is not None else xj.prec + a.valuation()
                need = target - (0 if vx == INF else int(vx))
                term = a.to_laurent(need) * xj
            acc = acc + term
        if prec is not None:
            acc = acc.truncate(prec)
        out.append(acc)
    return out


def skew_apply(f: SkewPoly, x, prec=None):
    """sum_j B_j tau^j(x) on a vector of Laurent series.

    With ``prec`` given, raises ``PrecisionError`` naming the minimum input
    precision when the result cannot be known to that precision.
    """
    spec = f.spec
    x = [_as_series(v, spec) for v in x]
    if len(x) != f.n:
        raise ValueError(f"vector of length {len(x)}, expected {f.n}")
    out = [LaurentSeries.zero(spec) for _ in range(f.n)]
    for j, B in enumerate(f.coeffs):
        if B.is_zero():
            continue
        tx = [v.twist(j) for v in x]
        part = matrix_apply(B, tx, prec)
        out = [a + b for a, b in zip(out, part)]
    if prec is not None:
        got = min((v.prec for v in out if v.prec is not None), default=None)
        if got is not None and got < prec:
            need = required_input_precision(f, x, prec)
            raise PrecisionError(f"result known only to precision {got}; "
                                 f"input precision must be at least {need}")
        out = [v.truncate(prec) for v in out]
    return out


def required_input_precision(f: SkewPoly, x, prec: int) -> int:
    """Smallest input precision N with every B_j tau^j(x) known to ``prec``."""
    need = 0
    for j, B in enumerate(f.coeffs):
        if B.is_zero():
            continue
        vB = B.valuation()
        Q = f.spec.q ** j
        # precision of B tau^j(x) is at least Q*N + v(B)
        need = max(need, -(-(prec - int(vB)) // Q))
    return need


def apply_mod(f: SkewPoly, v, P: ThetaPoly):
    """sum_j B_j tau^j(v) on a vector of residues modulo the prime P.

    tau acts on k_s[theta]/P by theta -> theta^q; coefficients must be
    polynomial (no denominators).
    """
    out = [ThetaPoly.zero(f.spec) for _ in range(f.n)]
    for j, B in enumerate(f.coeffs):
        if B.is_zero():
            continue
        if not B.is_polynomial():
            raise ValueError("residue action needs polynomial coefficients")
        tv = [(x.twist(j)) % P for x in v]
        for i in range(f.n):
            acc = out[i]
            for l in range(f.n):
                a = B[i, l]
                if not a.is_zero() and not tv[l].is_zero():
                    acc = acc + a.num * tv[l]
            out[i] = acc % P
    return out


def phi_extend(E, a) -> SkewPoly:
    """phi_a for a in k_s[theta]: substitute phi_theta and expand (Horner)."""
    spec, n = E.spec, E.n
    if isinstance(a, (int, KElem)):
        a = ThetaPoly.constant(spec, a)
    if a.spec != spec:
        raise ValueError("field mismatch")
    phi = E.phi_theta()
    acc = SkewPoly(spec, n, [])
    for c in reversed(a.coeffs()):
        acc = skew_mul(acc, phi) + SkewPoly.scalar(spec, n, c)
    return acc
