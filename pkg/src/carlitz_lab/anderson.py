"""Anderson modules phi_theta = sum_j A_j tau^j with (A_0 - theta I)^n = 0.

Includes the tensor powers C^{(x)n} and the twisted modules E_alpha
(A_0 = theta I + superdiagonal ones, A_1 = alpha in the lower-left
corner), the exponential and logarithm coefficient recursions, series
evaluation on vectors of Laurent series, the action d of k_s[theta] on
Lie(E) and the hyperdifferential operators.

The coefficient recursions are Sylvester equations
    X tau^j(A_0) - A_0 X = R.
With N = A_0 - theta I and D = theta^(q^j) - theta, the map
M(X) = X tau^j(N) - N X is nilpotent (M^(2n-1) = 0), so
    X = sum_{k=0}^{2n-2} (-1)^k M^k(R) / D^(k+1).
D factors as the product of all primes of degree dividing j.
"""

from __future__ import annotations

import threading

from .ff.kfield import INF, FieldSpec, KElem
from .ff.laurent import LaurentSeries, PrecisionError
from .ff.ratfunc import ThetaFrac, d_factors
from .ff.thetapoly import ThetaPoly
from .twisted import FracMatrix, SkewPoly, SkewSeries, matrix_apply

# Evaluation stops once two consecutive terms are beyond the precision,
# and gives up past this many coefficients.
COEFF_BUDGET = 64
# Logarithm coefficients inspected for the conservative convergence domain.
LOG_DOMAIN_TERMS = 5


class NilpotencyError(ValueError):
    """(A_0 - theta I)^n is not zero."""


class DomainError(ValueError):
    """A point lies outside the convergence domain of the logarithm."""

    def __init__(self, coordinate: int, valuation, required):
        super().__init__(f"coordinate {coordinate} has valuation {valuation}; "
                         f"convergence needs valuation > {required}")
        self.coordinate = coordinate
        self.valuation = valuation
        self.required = required


class ConvergenceError(ArithmeticError):
    """The tail bound was not reached within the coefficient budget."""


class LieVector(tuple):
    """A length-n vector of Laurent series over one field."""

    def __new__(cls, entries):
        entries = tuple(entries)
        if not entries:
            raise ValueError("empty vector")
        spec = entries[0].spec
        if any(not isinstance(x, LaurentSeries) or x.spec != spec for x in entries):
            raise ValueError("entries must be Laurent series over one field")
        return super().__new__(cls, entries)

    @property
    def spec(self) -> FieldSpec:
        return self[0].spec

    @property
    def prec(self):
        precs = [x.prec for x in self if x.prec is not None]
        return min(precs) if precs else None

    def valuation(self):
        return min(x.valuation() for x in self)

    def agrees(self, other, N: int) -> bool:
        return len(self) == len(other) and all(a.agrees(b, N) for a, b in zip(self, other))

    def to_json(self) -> list:
        return [x.to_json() for x in self]


def _as_matrix(spec, A) -> FracMatrix:
    if isinstance(A, FracMatrix):
        return A
    return FracMatrix(spec, A)


class AndersonModule:
    """phi_theta = sum_{j=0}^r A_j tau^j acting on n-dimensional vectors."""

    def __init__(self, spec: FieldSpec, A, kind: str = "general", alpha=None):
        if not A:
            raise ValueError("empty coefficient list")
        A = [_as_matrix(spec, a) for a in A]
        n = A[0].n
        for a in A:
            if a.shape != (n, n):
                raise ValueError("coefficients must be square of equal size")
            if not a.is_polynomial():
                raise ValueError("coefficients must lie in M_n(k_s[theta])")
        while len(A) > 1 and A[-1].is_zero():
            A.pop()
        self.spec = spec
        self.n = n
        self.A = tuple(A)
        self.r = len(A) - 1
        self.kind = kind
        self.alpha = alpha
        theta = ThetaFrac(ThetaPoly.theta(spec))
        self.N = A[0] - FracMatrix.scalar(spec, n, theta)
        P = self.N
        for _ in range(n - 1):
            P = P * self.N
        if not P.is_zero():
            raise NilpotencyError(f"(A_0 - theta I)^{n} = {P} is not zero")
        self._lock = threading.Lock()
        self._exp = [FracMatrix.identity(spec, n)]
        self._log = [FracMatrix.identity(spec, n)]
        self._npow = None

    def phi_theta(self) -> SkewPoly:
        return SkewPoly(self.spec, self.n, self.A)

    def describe(self) -> dict:
        out = {"module": {"C^n": "C^n", "E_alpha": "E_alpha"}.get(self.kind, "general"),
               "n": self.n}
        if self.alpha is not None:
            out["alpha"] = str(self.alpha)
        if self.kind == "general":
            out["A"] = [a.to_strings() for a in self.A]
        return out

    def __repr__(self):
        if self.kind == "C^n":
            return f"C^(x){self.n} over F_{self.spec.q}"
        if self.kind == "E_alpha":
            return f"E_({self.alpha}) of dimension {self.n} over F_{self.spec.q}"
        return f"AndersonModule(n={self.n}, r={self.r}, q={self.spec.q})"

    def nilpotent_powers(self):
        """[N^0, ..., N^(n-1)] for N = A_0 - theta I."""
        if self._npow is None:
            out = [FracMatrix.identity(self.spec, self.n)]
            for _ in range(self.n - 1):
                out.append(out[-1] * self.N)
            self._npow = out
        return self._npow

    # -- coefficient recursions -------------------------------------------------

    def _sylvester(self, j: int, R: FracMatrix) -> FracMatrix:
        """Solve X tau^j(A_0) - A_0 X = R."""
        spec, n = self.spec, self.n
        Nj = self.N.twist(j)
        D = d_factors(spec.q, j)
        X = FracMatrix.zero(spec, n)
        term = R
        for k in range(2 * n - 1):
            if term.is_zero():
                break
            piece = term.div_den([(P, k + 1) for P, _ in D])
            X = X + piece if k % 2 == 0 else X - piece
            term = term * Nj - self.N * term
        if not term.is_zero():
            raise ArithmeticError("internal error: Sylvester operator not nilpotent")
        return X.reduced()

    def exp_coeff(self, j: int) -> FracMatrix:
        with self._lock:
            while len(self._exp) <= j:
                m = len(self._exp)
                R = FracMatrix.zero(self.spec, self.n)
                for i in range(1, min(self.r, m) + 1):
                    R = R + self.A[i] * self._exp[m - i].twist(i)
                self._exp.append(self._sylvester(m, R))
            return self._exp[j]

    def log_coeff(self, j: int) -> FracMatrix:
        with self._lock:
            while len(self._log) <= j:
                m = len(self._log)
                S = FracMatrix.zero(self.spec, self.n)
                for i in range(1, min(self.r, m) + 1):
                    S = S + self._log[m - i] * self.A[i].twist(m - i)
                self._log.append(self._sylvester(m, -S))
            return self._log[j]


def new_anderson(A_list, spec: FieldSpec | None = None) -> AndersonModule:
    """Validate coefficient matrices A_0, .., A_r and build the module."""
    if not A_list:
        raise ValueError("empty coefficient list")
    if spec is None:
        first = A_list[0]
        spec = first.spec if isinstance(first, FracMatrix) else None
        if spec is None:
            raise ValueError("give the field for non-matrix input")
    return AndersonModule(spec, A_list)


def e_alpha_module(alpha, n: int, spec: FieldSpec | None = None) -> AndersonModule:
    """E_alpha: A_0 = theta I + (ones on the superdiagonal), A_1 = alpha E_{n,1}."""
    if isinstance(alpha, int):
        if spec is None:
            raise ValueError("give the field for an integer alpha")
        alpha = ThetaPoly.constant(spec, alpha)
    elif isinstance(alpha, KElem):
        alpha = ThetaPoly.constant(alpha.spec, alpha)
    spec = alpha.spec
    if alpha.is_zero():
        raise ValueError("alpha must be nonzero")
    if n < 1:
        raise ValueError("n must be at least 1")
    theta = ThetaPoly.theta(spec)
    zero, one = ThetaPoly.zero(spec), ThetaPoly.one(spec)
    A0 = [[theta if i == j else (one if j == i + 1 else zero) for j in range(n)]
          for i in range(n)]
    A1 = [[zero] * n for _ in range(n)]
    A1[n - 1][0] = alpha
    kind = "C^n" if alpha == one else "E_alpha"
    return AndersonModule(spec, [A0, A1], kind=kind, alpha=alpha)


def carlitz_tensor(spec: FieldSpec, n: int = 1) -> AndersonModule:
    """C^{(x)n}."""
    return e_alpha_module(ThetaPoly.one(spec), n)


def pellarin_alpha(spec: FieldSpec) -> ThetaPoly:
    """(t_1 - theta) ... (t_s - theta)."""
    out = ThetaPoly.one(spec)
    theta = ThetaPoly.theta(spec)
    for i in range(1, spec.s + 1):
        out = out * (ThetaPoly.constant(spec, KElem.t(spec, i)) - theta)
    return out


def exp_coefficients(E: AndersonModule, m: int) -> SkewSeries:
    """e_0, .., e_m as a skew series of order m."""
    if m < 0:
        raise ValueError("order must be nonnegative")
    return SkewSeries(E.spec, E.n, [E.exp_coeff(j) for j in range(m + 1)], m)


def log_coefficients(E: AndersonModule, m: int) -> SkewSeries:
    """P_0, .., P_m as a skew series of order m."""
    if m < 0:
        raise ValueError("order must be nonnegative")
    return SkewSeries(E.spec, E.n, [E.log_coeff(j) for j in range(m + 1)], m)


# -- evaluation ---------------------------------------------------------------

def _series_eval(E: AndersonModule, coeff, z, prec: int, column_bounds: bool):
    spec, q = E.spec, E.spec.q
    z = LieVector(z)
    if len(z) != E.n:
        raise ValueError(f"vector of length {len(z)}, expected {E.n}")
    if z.prec is not None and z.prec < prec:
        raise PrecisionError(f"input known to precision {z.prec}, need at least {prec}")
    vz = [x.valuation() for x in z]
    if all(v == INF for v in vz):
        return LieVector([LaurentSeries.zero(spec, prec) for _ in range(E.n)])
    out = [LaurentSeries.zero(spec) for _ in range(E.n)]
    beyond = 0
    for j in range(COEFF_BUDGET + 1):
        C = coeff(j)
        cols = C.column_valuations()
        Q = q ** j
        tail = min(c + Q * v for c, v in zip(cols, vz) if c != INF and v != INF) \
            if any(c != INF and v != INF for c, v in zip(cols, vz)) else INF
        if tail > prec:
            beyond += 1
            if beyond >= 2:
                return LieVector([x.truncate(prec) for x in out])
            continue
        beyond = 0
        tz = [x.twist(j, max_prec=prec - int(c) if c != INF else prec)
              for x, c in zip(z, cols)]
        part = matrix_apply(C, tz, prec)
        out = [a + b for a, b in zip(out, part)]
    raise ConvergenceError(f"tail bound not reached within {COEFF_BUDGET} coefficients")


def exp_eval(E: AndersonModule, z, prec: int) -> LieVector:
    """sum_j e_j tau^j(z) to absolute precision ``prec``."""
    return _series_eval(E, E.exp_coeff, z, prec, True)


def log_domain(E: AndersonModule) -> list:
    """Per-coordinate strict lower bounds on v_infty for log convergence."""
    n, q = E.n, E.spec.q
    if E.kind == "C^n":
        from fractions import Fraction
        return [Fraction(n - i) - Fraction(n * q, q - 1) for i in range(1, n + 1)]
    bounds = [None] * n
    for j in range(1, LOG_DOMAIN_TERMS + 1):
        cols = E.log_coeff(j).column_valuations()
        for i, c in enumerate(cols):
            if c == INF:
                continue
            b = -c / (q ** j - 1)
            bounds[i] = b if bounds[i] is None else max(bounds[i], b)
    return [(b if b is not None else -INF) + 1 for b in bounds]


def log_eval(E: AndersonModule, z, prec: int) -> LieVector:
    """sum_j P_j tau^j(z); rejects points outside the convergence domain."""
    z = LieVector(z)
    bounds = log_domain(E)
    for i, (x, b) in enumerate(zip(z, bounds), start=1):
        v = x.valuation()
        if v != INF and not v > b:
            raise DomainError(i, v, b)
    return _series_eval(E, E.log_coeff, z, prec, False)


# -- the action d on Lie(E) -----------------------------------------------------

def hyperderivative(j: int, f):
    """D_j(theta^k) = C(k, j) theta^(k-j), binomials mod p."""
    if j < 0:
        raise ValueError("order must be nonnegative")
    return f.hyperderivative(j)


def partial_action(E: AndersonModule, a):
    """d(a) = sum_{k<n} D_k(a) N^k for N = A_0 - theta I.

    Polynomials give a FracMatrix; Laurent series give a matrix (list of
    rows) of Laurent series.
    """
    pw = E.nilpotent_powers()
    n = E.n
    if isinstance(a, ThetaPoly):
        out = FracMatrix.zero(E.spec, n)
        for k in range(n):
            d = a.hyperderivative(k)
            if not d.is_zero():
                out = out + pw[k] * ThetaFrac(d)
        return out
    if isinstance(a, LaurentSeries):
        derivs = [a.hyperderivative(k) for k in range(n)]
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = LaurentSeries.zero(E.spec)
                for k in range(n):
                    c = pw[k][i, j]
                    if c.is_zero():
                        continue
                    if not c.is_polynomial():
                        raise ValueError("nilpotent part must be polynomial")
                    acc = acc + LaurentSeries.from_theta(c.num) * derivs[k]
                row.append(acc)
            rows.append(row)
        return rows
    raise TypeError("partial_action expects a ThetaPoly or LaurentSeries")


def lie_apply(M, z):
    """Apply a matrix of Laurent series (from ``partial_action``) to a vector."""
    n = len(z)
    return LieVector([sum((M[i][j] * z[j] for j in range(n)), LaurentSeries.zero(z[0].spec))
                      for i in range(n)])
