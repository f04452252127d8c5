"""Skew polynomials with tau a = tau(a) tau, and their action on Laurent vectors."""

import pytest
from hypothesis import given, strategies as st

from carlitz_lab.anderson import carlitz_tensor
from carlitz_lab.ff import LaurentSeries, PrecisionError
from carlitz_lab.twisted import (FracMatrix, SkewPoly, SkewSeries, TruncationError, phi_extend,
                                 skew_apply, skew_mul)

from conftest import poly, random_poly, series, spec


def sk(sp, *mats):
    """Skew polynomial from coefficient matrices given as nested string lists."""
    n = len(mats[0])
    return SkewPoly(sp, n, [FracMatrix.from_strings(sp, m) for m in mats])


def test_tau_theta_commutation():
    sp = spec(3)
    tau = SkewPoly.tau(sp, 1)
    theta = sk(sp, [["T"]])
    assert tau * theta == sk(sp, [["0"]], [["T^3"]])


def test_product_twists_right_factor():
    sp = spec(2)
    A = sk(sp, [["0"]], [["T+1"]])
    B = sk(sp, [["0"]], [["T"]])
    assert A * B == sk(sp, [["0"]], [["0"]], [["T^3+T^2"]])


def test_carlitz_square():
    sp = spec(2)
    phi = sk(sp, [["T"]], [["1"]])
    assert skew_mul(phi, phi) == sk(sp, [["T^2"]], [["T^2+T"]], [["1"]])


def _random_skew(r, sp, n, deg):
    mats = []
    for _ in range(deg + 1):
        mats.append([[random_poly(r, sp, 2) for _ in range(n)] for _ in range(n)])
    return SkewPoly(sp, n, [FracMatrix(sp, m) for m in mats])


@given(st.integers(0, 10**6), st.integers(1, 3))
def test_ring_axioms(seed, n):
    import random
    r = random.Random(seed)
    sp = spec(3 if seed % 2 else 2)
    a, b, c = (_random_skew(r, sp, n, r.randrange(0, 3)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


def test_dimension_mismatch_rejected():
    sp = spec(2)
    with pytest.raises(ValueError):
        skew_mul(SkewPoly.identity(sp, 1), SkewPoly.identity(sp, 2))


def test_series_truncation():
    sp = spec(2)
    s = SkewSeries(sp, 1, [FracMatrix.identity(sp, 1)] * 5, 3)
    with pytest.raises(TruncationError):
        s.coeff(4)
    prod = skew_mul(s, SkewPoly.tau(sp, 1))
    assert prod.order == 3
    assert prod.coeff(0).is_zero() and not prod.coeff(3).is_zero()


def test_carlitz_action_on_series():
    sp = spec(2)
    C = carlitz_tensor(sp, 1)
    x = series(sp, {-1: "1", -3: "1"}, prec=10)
    got = skew_apply(C.phi_theta(), [x])[0]
    want = LaurentSeries.from_theta(poly(sp, "T")) * x + x * x
    assert got.agrees(want, 9)


def test_identity_and_tensor_square_action():
    sp = spec(3)
    x1 = series(sp, {0: "1", -2: "2"}, prec=8)
    x2 = series(sp, {-1: "1"}, prec=8)
    assert skew_apply(SkewPoly.identity(sp, 2), [x1, x2]) == [x1, x2]
    C2 = carlitz_tensor(sp, 2)
    y1, y2 = skew_apply(C2.phi_theta(), [x1, x2])
    T = LaurentSeries.from_theta(poly(sp, "T"))
    assert y1.agrees(T * x1 + x2, 7)
    assert y2.agrees(T * x2 + x1 ** 3, 7)


def test_apply_composes(rng):
    sp = spec(3)
    f = _random_skew(rng, sp, 2, 2)
    g = _random_skew(rng, sp, 2, 1)
    x = [series(sp, {-1: "1", -2: "2"}, prec=40), series(sp, {0: "2", -3: "1"}, prec=40)]
    lhs = skew_apply(skew_mul(f, g), x)
    rhs = skew_apply(f, skew_apply(g, x))
    for a, b in zip(lhs, rhs):
        assert a.agrees(b, min(a.prec, b.prec))


def test_apply_reports_required_precision():
    sp = spec(2)
    C = carlitz_tensor(sp, 1)
    x = series(sp, {0: "1"}, prec=3)
    with pytest.raises(PrecisionError, match="at least"):
        skew_apply(C.phi_theta(), [x], prec=10)


def test_phi_extend_examples():
    sp = spec(2)
    C = carlitz_tensor(sp, 1)
    assert phi_extend(C, poly(sp, "T")) == C.phi_theta()
    assert phi_extend(C, poly(sp, "1")) == SkewPoly.identity(sp, 1)
    assert phi_extend(C, poly(sp, "T^2+1")) == sk(sp, [["T^2+1"]], [["T^2+T"]], [["1"]])


@pytest.mark.parametrize("q,n", [(2, 1), (3, 1), (2, 2), (3, 2)])
def test_phi_is_a_ring_homomorphism(q, n):
    import itertools
    sp = spec(q)
    C = carlitz_tensor(sp, n)
    polys = [poly(sp, "1"), poly(sp, "T"), poly(sp, "T+1"), poly(sp, "T^2"), poly(sp, "T^2+T+1")]
    for a, b in itertools.product(polys, repeat=2):
        assert phi_extend(C, a * b) == phi_extend(C, a) * phi_extend(C, b)
        assert phi_extend(C, a + b) == phi_extend(C, a) + phi_extend(C, b)


def test_json_roundtrip():
    sp = spec(3, 1)
    f = sk(sp, [["T", "t1"], ["0", "1"]], [["0", "0"], ["T^2+t1", "0"]])
    assert SkewPoly.from_json(f.to_json()) == f
