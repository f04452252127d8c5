"""L-values by Euler product and by summation, and the class-formula harness."""

import itertools

import pytest

from carlitz_lab.anderson import carlitz_tensor, e_alpha_module, pellarin_alpha
from carlitz_lab.ff import KElem, LaurentSeries, ThetaPoly, enumerate_primes
from carlitz_lab.fitting import LatticeBasis, rho
from carlitz_lab.lseries import (LValue, block_valuation_bound, carlitz_zeta, class_formula_residual,
                                 dirichlet_sum, euler_bound, euler_product, lattice_preset,
                                 pellarin_euler, pellarin_value, sum_degrees)

from conftest import poly, spec


def monic_polys(sp, d):
    for tail in itertools.product(range(sp.q), repeat=d):
        yield ThetaPoly.from_codes(sp, list(tail) + [1])


def rho_naive(alpha, a):
    """rho(a) = Res(a, alpha) written as a product over the t-roots of alpha."""
    sp = a.spec
    out = KElem.one(sp)
    for i in range(1, sp.s + 1):
        out = out * a.evaluate(KElem.t(sp, i))
    return out


def block(alpha, n, d, prec):
    sp = alpha.spec
    acc = LaurentSeries.zero(sp)
    for a in monic_polys(sp, d):
        term = LaurentSeries.from_kelem(rho_naive(alpha, a)) * \
            LaurentSeries.from_theta(a ** n).inverse(prec)
        acc = acc + term
    return acc.truncate(prec)


def brute_sum(alpha, n, N):
    acc = LaurentSeries.zero(alpha.spec)
    for d in range(N // n + 1):
        acc = acc + block(alpha, n, d, N)
    return acc.truncate(N)


# -- summation route ------------------------------------------------------------------------

def test_degree_one_block_example():
    sp = spec(2)
    b = block(ThetaPoly.one(sp), 1, 1, 10)
    want = LaurentSeries.from_theta(poly(sp, "T^2+T")).inverse(10)
    assert b.agrees(want, 10)


@pytest.mark.parametrize("q,n,N", [(2, 1, 8), (2, 2, 10), (3, 1, 6), (3, 3, 9)])
def test_carlitz_zeta_matches_brute_force(q, n, N):
    sp = spec(q)
    got = carlitz_zeta(n, N, q)
    assert got.value.agrees(brute_sum(ThetaPoly.one(sp), n, N), N)
    assert got.value.coeff(0).is_one() and got.value.valuation() == 0


@pytest.mark.parametrize("q,s,n,N", [(2, 1, 1, 7), (3, 1, 1, 5), (2, 2, 2, 6), (3, 1, 2, 6)])
def test_pellarin_matches_brute_force(q, s, n, N):
    sp = spec(q, s)
    alpha = pellarin_alpha(sp)
    got = pellarin_value(s, n, N, q)
    assert got.value.agrees(brute_sum(alpha, n, N), N)


def test_trivial_alpha_is_zeta():
    sp = spec(3)
    assert dirichlet_sum(ThetaPoly.one(sp), 2, 12).value == carlitz_zeta(2, 12, 3).value


@pytest.mark.parametrize("q,n,s", [(2, 1, 0), (3, 1, 0), (2, 2, 1), (3, 1, 1), (2, 1, 2), (3, 2, 2)])
def test_block_valuation_bound(q, n, s):
    # the degree-d block cancels beyond the naive bound n d
    sp = spec(q, s)
    alpha = pellarin_alpha(sp) if s else ThetaPoly.one(sp)
    for d in range(1, 4 if q == 2 else 3):
        bound = block_valuation_bound(q, n, s, d)
        b = block(alpha, n, d, bound + 4)
        assert b.valuation() >= bound
    assert sum_degrees(q, n, s, 10) == [d for d in range(10 // n + 1)
                                       if block_valuation_bound(q, n, s, d) <= 10]


def test_truncation_is_monotone():
    a = carlitz_zeta(1, 8, 3).value
    b = carlitz_zeta(1, 14, 3).value
    assert a.agrees(b, 8) and a.prec == 8


def test_argument_checks():
    with pytest.raises(ValueError):
        carlitz_zeta(0, 5)
    with pytest.raises(ValueError):
        euler_product(carlitz_tensor(spec(2), 1), 0)
    with pytest.raises(ValueError):
        pellarin_value(3, 1, 5)


# -- Euler route ----------------------------------------------------------------------------

def test_euler_degree_bound():
    assert euler_bound(1, 20) == 20 and euler_bound(3, 20) == 6


def test_euler_factors_are_close_to_one():
    sp = spec(3, 1)
    alpha = pellarin_alpha(sp)
    for n in (1, 2):
        for P in enumerate_primes(3, 2):
            Pn = LaurentSeries.from_theta(P.to_theta(sp) ** n)
            r = LaurentSeries.from_kelem(rho(alpha, P))
            f = Pn * (Pn - r).inverse(20)
            assert (f - LaurentSeries.one(sp)).valuation() >= n * P.degree


@pytest.mark.parametrize("q,s,n,N", [(2, 0, 1, 6), (3, 0, 2, 10), (2, 1, 1, 10), (3, 1, 1, 8),
                                     (2, 2, 2, 10), (3, 2, 3, 12)])
def test_routes_agree(q, s, n, N):
    sp = spec(q, s)
    alpha = pellarin_alpha(sp) if s else ThetaPoly.one(sp)
    e = euler_product(e_alpha_module(alpha, n), N)
    d = dirichlet_sum(alpha, n, N)
    assert e.value.agrees(d.value, N)
    assert e.meta["method"] == "euler" and d.meta["method"] == "sum"


def test_pellarin_euler_example():
    assert pellarin_euler(1, 1, 8, 3).value.agrees(pellarin_value(1, 1, 8, 3).value, 8)


def test_general_module_route():
    # a module without alpha data takes the Fitting-generator route
    from carlitz_lab.anderson import new_anderson
    sp = spec(2)
    C = carlitz_tensor(sp, 2)
    G = new_anderson(list(C.A))
    assert G.alpha is None
    assert euler_product(G, 8).value.agrees(carlitz_zeta(2, 8, 2).value, 8)


def test_thread_count_does_not_change_results(monkeypatch):
    monkeypatch.setenv("CARLITZ_LAB_THREADS", "1")
    a = pellarin_euler(1, 2, 12, 3).to_json()
    b = pellarin_value(1, 2, 12, 3).to_json()
    monkeypatch.setenv("CARLITZ_LAB_THREADS", "4")
    assert pellarin_euler(1, 2, 12, 3).to_json() == a
    assert pellarin_value(1, 2, 12, 3).to_json() == b
    monkeypatch.setenv("CARLITZ_LAB_THREADS", "zero")
    with pytest.raises(ValueError):
        carlitz_zeta(1, 4)


# -- class formula ---------------------------------------------------------------------------

@pytest.mark.parametrize("q,N", [(2, 12), (3, 10)])
def test_class_formula_carlitz(q, N):
    sp = spec(q)
    C = carlitz_tensor(sp, 1)
    rep = class_formula_residual(C, lattice_preset("zeta1", C, N), ThetaPoly.one(sp), N)
    assert rep.passed
    assert rep.to_json()["pass"] is True


def test_class_formula_negative_controls():
    sp = spec(2)
    C = carlitz_tensor(sp, 1)
    rep = class_formula_residual(C, lattice_preset("canonical", C, 6), ThetaPoly.one(sp), 6)
    assert not rep.passed and rep.valuation <= 6
    rep = class_formula_residual(C, lattice_preset("zeta1", C, 8), poly(sp, "T"), 8)
    assert not rep.passed


def test_lattice_preset_errors():
    sp = spec(2)
    with pytest.raises(ValueError):
        lattice_preset("zeta1", carlitz_tensor(sp, 2), 6)
    with pytest.raises(ValueError):
        lattice_preset("nope", carlitz_tensor(sp, 1), 6)
    with pytest.raises(ValueError):
        class_formula_residual(carlitz_tensor(sp, 2), LatticeBasis.canonical(sp, 1),
                               ThetaPoly.one(sp), 6)


def test_lvalue_json():
    v = carlitz_zeta(1, 6, 2)
    obj = v.to_json()
    assert obj["meta"]["method"] == "sum" and obj["meta"]["N"] == 6
    assert LaurentSeries.from_json(obj["value"]) == v.value
    assert isinstance(v, LValue)
