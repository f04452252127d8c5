"""Base arithmetic: F_q, k_s[theta], k_s((1/theta)), primes and resultants."""

import itertools
import math

import pytest
import sympy
from hypothesis import given, strategies as st

from carlitz_lab.ff import (INF, FieldSpec, KElem, LaurentSeries, ParseError,
                            ThetaPoly, enumerate_primes, frobenius_twist, gauss_valuation,
                            laurent_arith, monicize, resultant)
from carlitz_lab.ff.gf import conway_polynomial, field
from carlitz_lab.ff.primes import factor, is_irreducible, mobius, necklace_count
from carlitz_lab.ff.text import format_theta
from carlitz_lab.ff.thetapoly import binom_mod

from conftest import kel, poly, random_poly, series, spec

X = sympy.Symbol("x")


# -- finite fields ---------------------------------------------------------------

def _naive_mul(p, mod, a, b):
    """Schoolbook product of two digit vectors reduced by the monic modulus."""
    e = len(mod) - 1
    prod = [0] * (2 * e)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(2 * e - 1, e - 1, -1):
        c = prod[k]
        if c:
            for i in range(e + 1):
                prod[k - e + i] = (prod[k - e + i] - c * mod[i]) % p
    return prod[:e]


@pytest.mark.parametrize("p,e", [(2, 2), (2, 3), (3, 2), (5, 2), (2, 4)])
def test_gf_multiplication_matches_schoolbook(p, e):
    G = field(p, e)
    for a, b in itertools.product(range(G.order), repeat=2):
        want = _naive_mul(p, G.modulus, list(G.digits(a)), list(G.digits(b)))
        assert G.mul(a, b) == G.code(want)


@pytest.mark.parametrize("p,e", [(2, 3), (3, 2), (7, 1), (3, 3)])
def test_gf_inverse_and_frobenius(p, e):
    G = field(p, e)
    for a in range(1, G.order):
        assert G.mul(a, G.inv(a)) == 1
        assert G.frobenius(a) == G.pow(a, p)
    assert all(G.pow(a, G.order) == a for a in range(G.order))


@pytest.mark.parametrize("p,e,poly_", [
    (2, 2, (1, 1, 1)), (2, 3, (1, 1, 0, 1)), (3, 2, (2, 2, 1)), (3, 3, (1, 2, 0, 1)),
    (5, 2, (2, 4, 1)),
])
def test_conway_polynomials(p, e, poly_):
    assert tuple(conway_polynomial(p, e)) == poly_
    assert tuple(field(p, e).modulus) == poly_


@pytest.mark.parametrize("p,e", [(2, 2), (3, 2), (2, 3)])
def test_vectorized_ops_match_scalar(p, e):
    import numpy as np
    G = field(p, e)
    a = np.array([x for x in range(G.order) for _ in range(G.order)])
    b = np.array([y for _ in range(G.order) for y in range(G.order)])
    assert [int(v) for v in G.vmul(a, b)] == [G.mul(int(x), int(y)) for x, y in zip(a, b)]
    assert [int(v) for v in G.vadd(a, b)] == [G.add(int(x), int(y)) for x, y in zip(a, b)]


# -- field specs and coefficients ------------------------------------------------

def test_fieldspec_limits():
    with pytest.raises(ValueError):
        FieldSpec(2, 1, 3)
    with pytest.raises(ValueError):
        FieldSpec(4, 1, 0)
    assert FieldSpec.for_q(9).q == 9


def test_kelem_canonical_form():
    sp = spec(3, 2)
    a = kel(sp, "(t1^2-1)/(t1+1)")
    assert a == kel(sp, "t1-1")
    b = kel(sp, "(2*t1)/(2*t2+2)")
    assert b == kel(sp, "t1/(t2+1)")
    assert (a * a.inverse()).is_one()


# -- valuation and monic normalization -------------------------------------------

@pytest.mark.parametrize("q,s,text,want", [
    (2, 0, "T", -1),
    (3, 1, "(t1*T^2+1)/(t1+1)", -2),
    (3, 1, "t1+1", 0),
    (2, 0, "T^5+T", -5),
])
def test_gauss_valuation_examples(q, s, text, want):
    assert gauss_valuation(poly(spec(q, s), text)) == want


def test_gauss_valuation_zero_and_kelem():
    sp = spec(3, 1)
    assert gauss_valuation(ThetaPoly.zero(sp)) == INF
    assert gauss_valuation(KElem.zero(sp)) == INF
    assert gauss_valuation(kel(sp, "t1^2+2")) == 0
    x = series(sp, {-3: "t1", -7: "1"}, prec=10)
    assert gauss_valuation(x) == 3


def test_monicize_examples():
    sp3 = spec(3)
    u, f = monicize(poly(sp3, "2*T+1"))
    assert u == kel(sp3, "2") and f == poly(sp3, "T+2")
    u, f = monicize(poly(sp3, "T^3+T"))
    assert u.is_one() and f == poly(sp3, "T^3+T")
    sp = spec(3, 1)
    u, f = monicize(series(sp, {-3: "t1", -4: "t1^2"}, prec=10))
    assert u == kel(sp, "t1")
    assert f.agrees(series(sp, {-3: "1", -4: "t1"}), 10)
    with pytest.raises(ValueError):
        monicize(ThetaPoly.zero(sp))


@given(st.integers(0, 10**6))
def test_monicize_idempotent_and_valuation_multiplicative(seed):
    import random
    r = random.Random(seed)
    sp = spec(3)
    f = random_poly(r, sp, r.randrange(1, 6))
    g = random_poly(r, sp, r.randrange(1, 6))
    if f.is_zero() or g.is_zero():
        return
    u, m = monicize(f)
    assert monicize(m)[1] == m and monicize(m)[0].is_one()
    assert gauss_valuation(f * g) == gauss_valuation(f) + gauss_valuation(g)
    vs = gauss_valuation(f + g)
    lo = min(gauss_valuation(f), gauss_valuation(g))
    assert vs >= lo
    if gauss_valuation(f) != gauss_valuation(g):
        assert vs == lo


# -- theta-polynomial arithmetic against sympy ------------------------------------

def _to_sympy(f, p):
    return sympy.Poly([c.code() for c in reversed(f.coeffs())], X, modulus=p)


def _from_sympy(sp, g):
    cs = [int(c) % sp.p for c in reversed(g.all_coeffs())]
    return ThetaPoly.from_coeffs(sp, cs)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_ring_operations_match_sympy(q, rng):
    sp = spec(q)
    for _ in range(25):
        f = random_poly(rng, sp, rng.randrange(0, 7))
        g = random_poly(rng, sp, rng.randrange(1, 5), monic=True)
        F, G = _to_sympy(f, q), _to_sympy(g, q)
        assert f * g == _from_sympy(sp, F * G)
        assert f - g == _from_sympy(sp, F - G)
        qq, rr = f.divmod(g)
        Q, R = sympy.div(F, G)
        assert qq == _from_sympy(sp, Q) and rr == _from_sympy(sp, R)


def test_hyperderivative_examples():
    t2, t3 = poly(spec(2), "T"), poly(spec(3), "T")
    assert (t2 ** 2).hyperderivative(1).is_zero()
    assert (t3 ** 5).hyperderivative(2) == t3 ** 3
    f = poly(spec(3, 1), "t1*T^4+T+2")
    assert f.hyperderivative(0) == f


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_lucas_binomials(p):
    for n in range(60):
        for k in range(n + 1):
            assert binom_mod(n, k, p) == math.comb(n, k) % p


# -- primes ------------------------------------------------------------------------

def test_enumerate_primes_examples():
    assert [str(P) for P in enumerate_primes(2, 2)] == ["T", "T+1", "T^2+T+1"]
    assert [str(P) for P in enumerate_primes(3, 1)] == ["T", "T+1", "T+2"]
    deg3 = [str(P) for P in enumerate_primes(2, 3) if P.degree == 3]
    assert deg3 == ["T^3+T+1", "T^3+T^2+1"]


def _mobius_int(n):
    out, m = 1, n
    for d in range(2, n + 1):
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            out = -out
    return out


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_prime_counts_are_necklace_numbers(q, d):
    want = sum(_mobius_int(e) * q ** (d // e) for e in range(1, d + 1) if d % e == 0) // d
    got = [P for P in enumerate_primes(q, d) if P.degree == d]
    assert len(got) == want == necklace_count(q, d)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_primes_are_irreducible_by_sympy(q):
    primes = {P.coeffs for P in enumerate_primes(q, 3)}
    for d in (1, 2, 3):
        for tail in itertools.product(range(q), repeat=d):
            cs = tuple(tail) + (1,)
            irr = sympy.Poly(list(reversed(cs)), X, modulus=q).is_irreducible
            assert (cs in primes) == irr == is_irreducible(q, cs)


def test_factor_and_mobius():
    sp = spec(3)
    f = poly(sp, "T^2+1") ** 2 * poly(sp, "T+2")
    facs = factor(3, [c.code() for c in f.coeffs()])
    assert sorted((str(P), e) for P, e in facs) == [("T+2", 1), ("T^2+1", 2)]
    assert mobius(3, (0, 2, 1)) == 1
    assert mobius(3, [c.code() for c in f.coeffs()]) == 0


# -- resultants ----------------------------------------------------------------------

def test_resultant_examples():
    sp = spec(3, 1)
    assert resultant(poly(sp, "T^2+1"), poly(sp, "t1-T")) == kel(sp, "t1^2+1")
    assert resultant(poly(sp, "T^2+1"), ThetaPoly.one(sp)).is_one()
    sp2 = spec(2)
    assert resultant(poly(sp2, "T"), poly(sp2, "T+1")).is_one()


def _sylvester_det(f, g, q):
    """Determinant of the Sylvester matrix of two ascending coefficient lists."""
    m, n = len(f) - 1, len(g) - 1
    if m + n == 0:
        return 1
    rows = [[0] * i + f[::-1] + [0] * (n - 1 - i) for i in range(n)]
    rows += [[0] * i + g[::-1] + [0] * (m - 1 - i) for i in range(m)]
    return int(sympy.Matrix(rows).det()) % q


@pytest.mark.parametrize("q", [2, 3, 5])
def test_resultant_matches_sylvester_determinant(q, rng):
    sp = spec(q)
    for _ in range(20):
        f = random_poly(rng, sp, rng.randrange(1, 5), monic=True)
        g = random_poly(rng, sp, rng.randrange(1, 5))
        if g.is_zero():
            continue
        want = _sylvester_det([c.code() for c in f.coeffs()], [c.code() for c in g.coeffs()], q)
        assert resultant(f, g).code() == want


def test_resultant_multiplicative(rng):
    sp = spec(3, 1)
    t = poly(sp, "t1-T")
    for _ in range(10):
        f = random_poly(rng, sp, rng.randrange(1, 4), monic=True)
        g = random_poly(rng, sp, rng.randrange(1, 4), monic=True)
        h = random_poly(rng, sp, rng.randrange(1, 3)) + t
        assert resultant(f * g, h) == resultant(f, h) * resultant(g, h)
        assert resultant(f, g * h) == resultant(f, g) * resultant(f, h)


# -- Frobenius twist ----------------------------------------------------------------

def test_frobenius_twist_examples():
    sp2, sp3 = spec(2), spec(3, 2)
    assert frobenius_twist(poly(sp2, "T"), 1) == poly(sp2, "T^2")
    assert frobenius_twist(poly(sp3, "t1*T+t2"), 1) == poly(sp3, "t1*T^3+t2")
    x = series(sp2, {-1: "1", -2: "1"}, prec=5)
    y = frobenius_twist(x, 2)
    assert y.agrees(series(sp2, {-4: "1", -8: "1"}), 20)
    assert y.prec == 4 * 5


def test_frobenius_twist_composes(rng):
    sp = spec(3, 1)
    f = random_poly(rng, sp, 4) + poly(sp, "t1*T")
    for j, k in [(0, 1), (1, 1), (1, 2)]:
        assert frobenius_twist(frobenius_twist(f, j), k) == frobenius_twist(f, j + k)


# -- Laurent series ----------------------------------------------------------------

def test_laurent_examples():
    sp3, sp2 = spec(3), spec(2)
    a = series(sp3, {0: "1", -1: "1"}, prec=10)
    b = series(sp3, {0: "1", -1: "-1"}, prec=10)
    c = laurent_arith(a, b, "mul")
    assert c.agrees(series(sp3, {0: "1", -2: "-1"}), 10) and c.prec == 10
    inv = laurent_arith(LaurentSeries.one(sp2), series(sp2, {0: "1", -1: "1"}, prec=4), "div")
    assert inv.agrees(series(sp2, {0: "1", -1: "1", -2: "1", -3: "1", -4: "1"}), 4)
    P = LaurentSeries.from_theta(poly(sp2, "T"))
    Pm1 = LaurentSeries.from_theta(poly(sp2, "T+1"))
    qt = laurent_arith(P, Pm1, "div", 3)
    assert qt.agrees(series(sp2, {0: "1", -1: "1", -2: "1", -3: "1"}), 3)


def test_laurent_precision_rules():
    sp = spec(2)
    a = series(sp, {2: "1", 0: "1"}, prec=5)
    b = series(sp, {-1: "1"}, prec=8)
    assert (a + b).prec == 5
    # mul: min(Na + v(b), Nb + v(a)) = min(5 + 1, 8 - 2)
    assert (a * b).prec == 6
    with pytest.raises(ZeroDivisionError):
        laurent_arith(a, LaurentSeries.zero(sp), "div")
    # 1/b = T + O(T^-6); then min(5 - 1, 6 - 2)
    assert laurent_arith(a, b, "div").prec == 4


@given(st.integers(0, 10**6))
def test_laurent_inverse_roundtrip(seed):
    import random
    r = random.Random(seed)
    sp = spec(3)
    terms = {d: str(r.randrange(3)) for d in range(-8, 1)}
    terms[0] = str(r.randrange(1, 3))
    x = series(sp, terms, prec=12)
    assert (x * x.inverse()).agrees(LaurentSeries.one(sp), 12)


# -- text grammar ------------------------------------------------------------------

@pytest.mark.parametrize("q,s,text", [
    (2, 0, "T^3+T+1"), (3, 1, "T^3+t1*T+2"), (4, 0, "g2*T^2+g3"), (3, 2, "t1*t2*T+t2^2"),
])
def test_polynomial_text_roundtrip(q, s, text):
    sp = spec(q, s)
    f = poly(sp, text)
    assert format_theta(f) == text
    assert poly(sp, format_theta(f)) == f


def test_parse_errors_report_position():
    with pytest.raises(ParseError) as err:
        poly(spec(2), "T^2+*T")
    assert err.value.pos == 4
    with pytest.raises(ParseError):
        poly(spec(2, 1), "t2+T")


def test_laurent_json_roundtrip():
    sp = spec(3, 1)
    x = series(sp, {1: "t1", -2: "2", -5: "t1+1"}, prec=9)
    back = LaurentSeries.from_json(x.to_json())
    assert back == x and back.prec == 9
    assert [t["deg"] for t in x.to_json()["terms"]] == [1, -2, -5]
