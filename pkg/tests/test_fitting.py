"""Finite modules, Fitting generators, rho and the operator determinant."""

import pytest
import sympy

from carlitz_lab.anderson import carlitz_tensor, e_alpha_module, pellarin_alpha
from carlitz_lab.ff import KElem, LaurentSeries, ThetaPoly, enumerate_primes
from carlitz_lab.fitting import (FiniteModule, LatticeBasis, ZSeries, e_mod_p, fitting_generator,
                                 invariant_factors, lattice_index, lie_mod_p, reversed_quotient, rho,
                                 rho_multiplicative, theta_operator_det)
from carlitz_lab.lseries import carlitz_zeta

from conftest import kel, poly, random_poly, series, spec

Z = sympy.Symbol("Z")
X = sympy.Symbol("x")


def prime(q, text):
    return next(P for P in enumerate_primes(q, 4) if str(P) == text)


def int_matrix(M):
    return [[c.code() for c in row] for row in M.matrix()]


def sympy_charpoly(M, p, sp):
    """Characteristic polynomial of an F_p matrix by sympy, as a ThetaPoly."""
    if M.dim == 0:
        return ThetaPoly.one(sp)
    cp = sympy.Matrix(int_matrix(M)).charpoly(X).all_coeffs()
    return ThetaPoly.from_coeffs(sp, [int(c) % p for c in reversed(cp)])


def companion(sp, f):
    d = f.degree
    rows = [[KElem.zero(sp)] * d for _ in range(d)]
    for i in range(1, d):
        rows[i][i - 1] = KElem.one(sp)
    for i in range(d):
        rows[i][d - 1] = -f.coeff(i)
    return rows


# -- residue modules ----------------------------------------------------------------------

def test_lie_examples():
    sp2 = spec(2)
    C = carlitz_tensor(sp2, 1)
    assert fitting_generator(lie_mod_p(C, prime(2, "T"))) == poly(sp2, "T")
    C2 = carlitz_tensor(sp2, 2)
    assert fitting_generator(lie_mod_p(C2, prime(2, "T+1"))) == poly(sp2, "T+1") ** 2


@pytest.mark.parametrize("q", [2, 3])
def test_carlitz_residue_matrix_by_hand(q):
    # theta acts on A/P through x -> theta x + x^q; image of theta^i is theta^(i+1) + theta^(iq)
    sp = spec(q)
    C = carlitz_tensor(sp, 1)
    T = poly(sp, "T")
    for P in enumerate_primes(q, 3):
        Pt, d = P.to_theta(sp), P.degree
        cols = [((T ** (i + 1)) + T ** (i * q)) % Pt for i in range(d)]
        rows = [[cols[j].coeff(i) for j in range(d)] for i in range(d)]
        want = FiniteModule.from_rows(sp, rows)
        got = e_mod_p(C, P)
        assert got == want
        assert fitting_generator(got) == sympy_charpoly(want, q, sp) == Pt - 1


def test_fitting_generator_examples():
    sp3, sp2 = spec(3), spec(2)
    assert fitting_generator(FiniteModule.from_rows(sp3, [])) == ThetaPoly.one(sp3)
    f = poly(sp3, "T^2+1")
    assert fitting_generator(FiniteModule.from_rows(sp3, companion(sp3, f))) == f
    C = carlitz_tensor(sp2, 1)
    assert fitting_generator(e_mod_p(C, prime(2, "T^2+T+1"))) == poly(sp2, "T^2+T")


@pytest.mark.parametrize("q", [2, 3, 5])
def test_charpoly_matches_sympy(q, rng):
    sp = spec(q)
    for m in range(1, 8):
        rows = [[rng.randrange(q) for _ in range(m)] for _ in range(m)]
        M = FiniteModule.from_rows(sp, rows)
        assert fitting_generator(M) == sympy_charpoly(M, q, sp)


def test_fitting_multiplicative_on_extensions(rng):
    # block upper triangular T: W = first block is invariant
    sp = spec(3)
    for _ in range(10):
        a, b = rng.randrange(1, 5), rng.randrange(1, 5)
        m = a + b
        rows = [[rng.randrange(3) for _ in range(m)] for _ in range(m)]
        for i in range(a, m):
            for j in range(a):
                rows[i][j] = 0
        W = FiniteModule.from_rows(sp, [r[:a] for r in rows[:a]])
        Q = FiniteModule.from_rows(sp, [r[a:] for r in rows[a:]])
        M = FiniteModule.from_rows(sp, rows)
        assert fitting_generator(M) == fitting_generator(W) * fitting_generator(Q)


def test_invariant_factor_examples():
    sp = spec(2)
    T = poly(sp, "T")
    rows = companion(sp, T)
    diag = [[rows[0][0], KElem.zero(sp)], [KElem.zero(sp), rows[0][0]]]
    assert invariant_factors(FiniteModule.from_rows(sp, diag)) == [T, T]
    for n in (1, 2, 3):
        C = carlitz_tensor(sp, n)
        for P in enumerate_primes(2, 2):
            assert invariant_factors(lie_mod_p(C, P)) == [P.to_theta(sp) ** n]


@pytest.mark.parametrize("q", [2, 3])
def test_cyclic_shortcut_matches_smith(q, rng, monkeypatch):
    import carlitz_lab.fitting as fitting
    sp = spec(q)
    cases = []
    for _ in range(8):
        m = rng.randrange(1, 6)
        cases.append(FiniteModule.from_rows(sp, [[rng.randrange(q) for _ in range(m)]
                                                 for _ in range(m)]))
    fast = [invariant_factors(M) for M in cases]
    monkeypatch.setattr(fitting, "is_cyclic", lambda M: False)
    slow = [invariant_factors(M) for M in cases]
    assert fast == slow
    for M, fs in zip(cases, slow):
        prod = ThetaPoly.one(sp)
        for f in fs:
            prod = prod * f
        assert prod == fitting_generator(M)
        assert all((b % a).is_zero() for a, b in zip(fs, fs[1:]))


@pytest.mark.parametrize("q,s", [(2, 0), (3, 0), (2, 1), (3, 1)])
def test_e_alpha_cyclic(q, s):
    sp = spec(q, s)
    alpha = pellarin_alpha(sp) if s else poly(sp, "T+1")
    for n in (1, 2):
        E = e_alpha_module(alpha, n)
        for P in enumerate_primes(q, 2):
            Pt = P.to_theta(sp)
            r = rho(alpha, P)
            if r.is_zero():
                continue
            assert invariant_factors(e_mod_p(E, P)) == [Pt ** n - ThetaPoly.constant(sp, r)]


def test_invariant_factors_multiply_to_generator(rng):
    sp = spec(3)
    for _ in range(10):
        m = rng.randrange(1, 7)
        rows = [[rng.randrange(3) if rng.random() < 0.4 else 0 for _ in range(m)] for _ in range(m)]
        M = FiniteModule.from_rows(sp, rows)
        fs = invariant_factors(M)
        prod = ThetaPoly.one(sp)
        for f in fs:
            prod = prod * f
        assert prod == fitting_generator(M)
        assert all((b % a).is_zero() for a, b in zip(fs, fs[1:]))


def test_e_alpha_divisible_prime():
    sp = spec(3)
    alpha = poly(sp, "T^2+T")
    for n in (1, 2, 3):
        E = e_alpha_module(alpha, n)
        for text in ("T", "T+1"):
            P = prime(3, text)
            assert fitting_generator(e_mod_p(E, P)) == P.to_theta(sp) ** n


def test_pellarin_generator_example():
    sp = spec(3, 1)
    E = e_alpha_module(pellarin_alpha(sp), 1)
    want = poly(sp, "T^2+1") - poly(sp, "t1^2+1")
    assert fitting_generator(e_mod_p(E, prime(3, "T^2+1"))) == want


# -- rho ---------------------------------------------------------------------------------

def test_rho_examples():
    sp = spec(2)
    assert rho(ThetaPoly.one(sp), prime(2, "T^3+T+1")).is_one()
    assert rho(poly(sp, "T"), prime(2, "T^2+T+1")).is_one()
    sp3 = spec(3, 1)
    for P in enumerate_primes(3, 3):
        want = P.to_theta(sp3).evaluate(KElem.t(sp3, 1))
        assert rho(pellarin_alpha(sp3), P) == want


def test_rho_multiplicative_in_alpha(rng):
    sp = spec(3, 1)
    for _ in range(10):
        a = random_poly(rng, sp, 2) + poly(sp, "t1")
        b = random_poly(rng, sp, 2) + poly(sp, "t1*T")
        for P in enumerate_primes(3, 2):
            assert rho(a, P) * rho(b, P) == rho(a * b, P)


def test_rho_multiplicative_in_a():
    sp = spec(3, 2)
    alpha = pellarin_alpha(sp)
    assert rho_multiplicative(alpha, ThetaPoly.one(sp)).is_one()
    P = prime(3, "T^2+1")
    assert rho_multiplicative(alpha, P.to_theta(sp) ** 2) == rho(alpha, P) ** 2
    a = poly(sp, "T^3+2*T+1") * poly(sp, "T+2") ** 2
    t1, t2 = KElem.t(sp, 1), KElem.t(sp, 2)
    assert rho_multiplicative(alpha, a) == a.evaluate(t1) * a.evaluate(t2)


# -- the operator determinant -----------------------------------------------------------

def test_theta_det_small_examples():
    sp = spec(2)
    C = carlitz_tensor(sp, 1)
    d = theta_operator_det(C, prime(2, "T"), 2)
    assert d.coeffs == (KElem.one(sp), KElem.one(sp))
    assert theta_operator_det(carlitz_tensor(spec(3), 2), prime(3, "T+1"), 1).is_one()


def test_theta_det_matches_fitting_quotient_example():
    sp = spec(2)
    C2 = carlitz_tensor(sp, 2)
    P = prime(2, "T+1")
    L = fitting_generator(lie_mod_p(C2, P))
    G = fitting_generator(e_mod_p(C2, P))
    d = theta_operator_det(C2, P, 4)
    assert d == reversed_quotient(G, L, 4)


def _sympy_theta_det(E, P, N, p):
    D = sympy.Matrix(int_matrix(lie_mod_p(E, P)))
    Phi = sympy.Matrix(int_matrix(e_mod_p(E, P)))
    m = D.shape[0]
    Theta = sympy.zeros(m, m)
    Dk = sympy.eye(m)
    for k in range(1, N):
        Theta += (D - Phi) * Dk * Z ** k
        Dk = Dk * D
    det = sympy.Poly(sympy.expand((sympy.eye(m) + Theta).det(method="berkowitz")), Z)
    return [int(det.coeff_monomial(Z ** k)) % p for k in range(N)]


@pytest.mark.parametrize("q,n,text", [(2, 1, "T^2+T+1"), (2, 2, "T^2+T+1"), (3, 1, "T^2+1"),
                                      (3, 2, "T+2"), (2, 3, "T+1")])
def test_theta_det_matches_sympy_determinant(q, n, text):
    sp = spec(q)
    E = carlitz_tensor(sp, n)
    P = prime(q, text)
    N = 5
    got = theta_operator_det(E, P, N)
    assert [c.code() for c in got.coeffs] == _sympy_theta_det(E, P, N, q)


def test_zseries_laurent_substitution():
    sp = spec(3)
    z = ZSeries((KElem.one(sp), KElem.from_int(sp, 2), KElem.zero(sp)), 3)
    assert z.to_laurent().agrees(series(sp, {0: "1", -1: "2"}), 2)
    assert (z * ZSeries.one(sp, 3)) == z


# -- lattices ----------------------------------------------------------------------------

def test_lattice_index_examples():
    sp = spec(3)
    B = LatticeBasis.canonical(sp, 2)
    assert lattice_index(B, B, prec=10).agrees(LaurentSeries.one(sp), 10)
    two = LaurentSeries.from_kelem(kel(sp, "2"))
    B2 = LatticeBasis(tuple([x * two for x in v] for v in B.vectors))
    assert lattice_index(B, B2, prec=10).agrees(LaurentSeries.one(sp), 10)
    sp2 = spec(2)
    z = carlitz_zeta(1, 12, 2).value
    idx = lattice_index(LatticeBasis.canonical(sp2, 1), LatticeBasis(((z,),)), prec=12)
    assert idx.agrees(z, 12)


def test_lattice_index_cocycle():
    sp = spec(3)
    one, zero = LaurentSeries.one(sp), LaurentSeries.zero(sp)
    B1 = LatticeBasis.canonical(sp, 2)
    B2 = LatticeBasis(((series(sp, {1: "1", -1: "2"}, 20), series(sp, {0: "1"}, 20)),
                       (zero, series(sp, {-1: "1", -3: "1"}, 20))))
    B3 = LatticeBasis(((series(sp, {2: "2", 0: "1"}, 20), one),
                       (series(sp, {-2: "1"}, 20), series(sp, {0: "1", -4: "2"}, 20))))
    a = lattice_index(B1, B2, prec=12)
    b = lattice_index(B2, B3, prec=12)
    c = lattice_index(B1, B3, prec=12)
    from carlitz_lab.ff import monicize
    assert monicize(a * b)[1].agrees(c, 8)


def test_finite_module_json_roundtrip():
    sp = spec(3, 1)
    E = e_alpha_module(pellarin_alpha(sp), 2)
    M = e_mod_p(E, prime(3, "T^2+1"))
    assert FiniteModule.from_json(sp, M.to_json()) == M
    assert M.to_json()["dim"] == 4
