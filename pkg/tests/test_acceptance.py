"""Acceptance criteria, each run at its stated precision and time limit.

Every test prints one line ``CRITERION k: PASS|FAIL ...`` to the terminal,
also when output capture is on.
"""

import itertools
import math
import os
import random
import subprocess
import sys
import time

import pytest

from carlitz_lab.anderson import (carlitz_tensor, e_alpha_module, exp_coefficients, exp_eval,
                                  log_coefficients, log_domain, log_eval, partial_action,
                                  pellarin_alpha)
from carlitz_lab.cyclotomic import (CycField, GroupRingElem, equivariant_l, eta_generator_check,
                                    goss_l_value, tau_equation_holds)
from carlitz_lab.ff import FieldSpec, KElem, LaurentSeries, ThetaPoly, enumerate_primes, resultant
from carlitz_lab.ff import upoly
from carlitz_lab.ff.primes import BudgetExceeded
from carlitz_lab.fitting import (_rho_product, e_mod_p, fitting_generator, lie_mod_p,
                                 reversed_quotient, theta_operator_det)
from carlitz_lab.lseries import (carlitz_zeta, class_formula_residual, dirichlet_sum,
                                 euler_product, lattice_preset)
from carlitz_lab.twisted import SkewPoly


@pytest.fixture
def report(capsys):
    def emit(k, failures, elapsed, limit=None, detail=""):
        ok = not failures and (limit is None or elapsed < limit)
        timing = f"{elapsed:.1f}s" + (f" (limit {limit}s)" if limit else "")
        extra = f"; {detail}" if detail else ""
        bad = f"; failures: {'; '.join(failures[:4])}" if failures else ""
        with capsys.disabled():
            print(f"\nCRITERION {k}: {'PASS' if ok else 'FAIL'} [{timing}{extra}{bad}]")
        assert not failures, failures
        if limit is not None:
            assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
    return emit


def alpha_grid(q):
    """(label, alpha) for alpha in {1, theta, t - theta, (t1 - theta)(t2 - theta)}."""
    return [("1", ThetaPoly.one(FieldSpec.for_q(q))),
            ("T", ThetaPoly.theta(FieldSpec.for_q(q))),
            ("t1-T", pellarin_alpha(FieldSpec.for_q(q, 1))),
            ("(t1-T)(t2-T)", pellarin_alpha(FieldSpec.for_q(q, 2)))]


def grid_cells():
    for q in (2, 3):
        for label, alpha in alpha_grid(q):
            for n in (1, 2, 3):
                E = e_alpha_module(alpha, n)
                for P in enumerate_primes(q, 3):
                    yield q, label, alpha, n, E, P


# -- 1 -------------------------------------------------------------------------------------

def test_criterion_1_fitting_closed_forms(report):
    t0 = time.perf_counter()
    failures, cells = [], 0
    for q in (2, 3):
        sp = FieldSpec.for_q(q)
        C = carlitz_tensor(sp, 1)
        for P in enumerate_primes(q, 4):
            cells += 1
            if fitting_generator(e_mod_p(C, P)) != P.to_theta(sp) - ThetaPoly.one(sp):
                failures.append(f"Carlitz q={q} P={P}")
    for q, label, alpha, n, E, P in grid_cells():
        cells += 1
        sp = alpha.spec
        Pt = P.to_theta(sp)
        by_product = _rho_product(alpha, Pt, P.degree)
        by_resultant = resultant(Pt, alpha)
        if by_product != by_resultant:
            failures.append(f"rho q={q} alpha={label} P={P}")
        lie = fitting_generator(lie_mod_p(E, P))
        gen = fitting_generator(e_mod_p(E, P))
        if lie != Pt ** n:
            failures.append(f"Lie q={q} alpha={label} n={n} P={P}")
        if gen != Pt ** n - ThetaPoly.constant(sp, by_resultant):
            failures.append(f"E q={q} alpha={label} n={n} P={P}")
    report(1, failures, time.perf_counter() - t0, 30, f"{cells} cells")


# -- 2 -------------------------------------------------------------------------------------

def test_criterion_2_route_agreement(report):
    t0 = time.perf_counter()
    N = 20
    failures, passed = [], 0
    for q in (2, 3):
        for s in (0, 1, 2):
            sp = FieldSpec.for_q(q, s)
            alpha = pellarin_alpha(sp) if s else ThetaPoly.one(sp)
            for n in (1, 2, 3):
                summed = dirichlet_sum(alpha, n, N).value
                try:
                    prod = euler_product(e_alpha_module(alpha, n), N).value
                except BudgetExceeded as exc:
                    failures.append(f"q={q} s={s} n={n}: {exc}")
                    continue
                if prod.agrees(summed, N):
                    passed += 1
                else:
                    failures.append(f"q={q} s={s} n={n}: routes disagree")
    report(2, failures, time.perf_counter() - t0, 120, f"{passed}/18 cells agree mod T^(-21)")


# -- 3 -------------------------------------------------------------------------------------

def test_criterion_3_trace_formula(report):
    t0 = time.perf_counter()
    failures, cells = [], 0
    for q, label, alpha, n, E, P in grid_cells():
        lie = fitting_generator(lie_mod_p(E, P))
        gen = fitting_generator(e_mod_p(E, P))
        for N in range(1, 7):
            cells += 1
            if not (theta_operator_det(E, P, N) * reversed_quotient(lie, gen, N)).is_one():
                failures.append(f"q={q} alpha={label} n={n} P={P} N={N}")
    report(3, failures, time.perf_counter() - t0, 60, f"{cells} (cell, N) pairs")


# -- 4 -------------------------------------------------------------------------------------

def exp_modules(q):
    sp = FieldSpec.for_q(q)
    return [("C", carlitz_tensor(sp, 1)), ("C^2", carlitz_tensor(sp, 2)),
            ("C^3", carlitz_tensor(sp, 3)),
            ("E_(t-T)", e_alpha_module(pellarin_alpha(FieldSpec.for_q(q, 1)), 1))]


def random_in_domain(r, E, prec):
    out = []
    for b in log_domain(E):
        v = math.floor(b) + 1
        terms = [(-(v + k), KElem.from_int(E.spec, r.randrange(E.spec.q)))
                 for k in range(1, 6)]
        terms.append((-v, KElem.from_int(E.spec, r.randrange(1, E.spec.q))))
        out.append(LaurentSeries.from_terms(E.spec, terms, prec=prec))
    return out


def test_criterion_4_exponential_machinery(report):
    t0 = time.perf_counter()
    failures = []
    order = 6
    for q in (2, 3):
        for label, E in exp_modules(q):
            sp, n = E.spec, E.n
            e = exp_coefficients(E, order)
            lg = log_coefficients(E, order)
            if e * SkewPoly(sp, n, [E.A[0]]) != E.phi_theta() * e:
                failures.append(f"functional equation q={q} {label}")
            if e * lg != SkewPoly.identity(sp, n) or lg * e != SkewPoly.identity(sp, n):
                failures.append(f"inversion q={q} {label}")
    r = random.Random(int(os.environ.get("CARLITZ_LAB_SEED", "20240611")))
    mods = [(q, label, E) for q in (2, 3) for label, E in exp_modules(q)]
    prec = 12
    for i in range(50):
        q, label, E = mods[i % len(mods)]
        z = random_in_domain(r, E, prec + 30)
        w = exp_eval(E, log_eval(E, z, prec + 2), prec)
        if not all(a.agrees(b, prec) for a, b in zip(w, z)):
            failures.append(f"exp(log z) != z, vector {i}, q={q} {label}")
    report(4, failures, time.perf_counter() - t0, None,
           "tau-order 6 on 8 modules, 50 exp(log z) vectors at precision 12")


# -- 5 -------------------------------------------------------------------------------------

def test_criterion_5_class_formula(report):
    t0 = time.perf_counter()
    failures = []
    for q in (2, 3):
        sp = FieldSpec.for_q(q)
        C = carlitz_tensor(sp, 1)
        z = carlitz_zeta(1, 20, q).value
        if not exp_eval(C, [z], 16)[0].agrees(LaurentSeries.one(sp), 16):
            failures.append(f"exp_C(zeta(1)) != 1 mod T^(-16), q={q}")
        rep = class_formula_residual(C, lattice_preset("zeta1", C, 12), ThetaPoly.one(sp), 12)
        if not rep.passed:
            failures.append(f"class formula residual q={q}: valuation {rep.valuation}")
    report(5, failures, time.perf_counter() - t0, 30)


# -- 6 -------------------------------------------------------------------------------------

def random_poly(r, sp, deg):
    return ThetaPoly.from_codes(sp, [r.randrange(sp.q) for _ in range(deg + 1)])


def test_criterion_6_hyperdifferential(report):
    t0 = time.perf_counter()
    failures = []
    r = random.Random(int(os.environ.get("CARLITZ_LAB_SEED", "20240611")))
    for i in range(100):
        sp = FieldSpec.for_q(r.choice((2, 3)))
        f, g = random_poly(r, sp, r.randrange(9)), random_poly(r, sp, r.randrange(9))
        for j in range(6):
            rhs = ThetaPoly.zero(sp)
            for k in range(j + 1):
                rhs = rhs + f.hyperderivative(k) * g.hyperderivative(j - k)
            if (f * g).hyperderivative(j) != rhs:
                failures.append(f"Leibniz pair {i} order {j}")
    cells = 0
    for q in (2, 3):
        sp = FieldSpec.for_q(q)
        for n in (1, 2, 3):
            E = carlitz_tensor(sp, n)
            for P in enumerate_primes(q, 3):
                Pt = P.to_theta(sp)
                for m in range(1, n + 4):
                    cells += 1
                    M = partial_action(E, Pt ** m)
                    zero = all((M[i, j].num % Pt).is_zero() for i in range(n) for j in range(n))
                    if zero != (m >= n):
                        failures.append(f"q={q} n={n} P={P} m={m}")
    report(6, failures, time.perf_counter() - t0, None, f"100 pairs, {cells} (n, P, m) cases")


# -- 7 -------------------------------------------------------------------------------------

def small_moduli(q, bound=26):
    """Squarefree monic a != 1 with #(A/a)^x <= bound, as ascending code tuples."""
    Fq = FieldSpec.for_q(q).F
    primes = [P for P in enumerate_primes(q, 8) if q ** P.degree - 1 <= bound]
    out = []
    for r in range(1, len(primes) + 1):
        for S in itertools.combinations(primes, r):
            if math.prod(q ** P.degree - 1 for P in S) <= bound:
                a = [1]
                for P in S:
                    a = upoly.mul(Fq, a, list(P.coeffs))
                out.append(tuple(a))
    return out


def test_criterion_7_gauss_thakur_suite(report):
    t0 = time.perf_counter()
    failures, count = [], 0
    for q in (2, 3):
        zeta = carlitz_zeta(1, 10, q).value
        want = [(d, str(c)) for d, c in zeta.terms()]
        for a in small_moduli(q):
            count += 1
            F = CycField(q, a)
            name = str(F.a_poly)
            chars = F.characters()
            for chi in chars:
                if not tau_equation_holds(F, chi):
                    failures.append(f"tau equation q={q} a={name} chi={chi.label}")
            if not eta_generator_check(F).passed:
                failures.append(f"eta q={q} a={name}")
            triv = [chi for chi in chars if chi.is_trivial()][0]
            got = goss_l_value(triv, 1, 10).value
            if [(d, str(c)) for d, c in got.terms()] != want:
                failures.append(f"trivial Goss value q={q} a={name}")
            elem, _ = equivariant_l(a, 1, 10, fld=F)
            back = GroupRingElem.from_coefficients(F, elem.coefficients())
            for chi in chars:
                ref = euler_product(e_alpha_module(chi.alpha(), 1), 10).value
                if not back.component(chi).agrees(ref, 10):
                    failures.append(f"equivariant component q={q} a={name} chi={chi.label}")
    report(7, failures, time.perf_counter() - t0, 120, f"{count} moduli")


# -- 8 -------------------------------------------------------------------------------------

COMMANDS = [
    ["fitting", "--q", "3", "--module", "e-alpha", "--alpha", "(t1-T)*(t2-T)", "--n", "2",
     "--prime", "T^3+2*T+1"],
    ["fitting", "--q", "2", "--prime", "T^4+T+1"],
    ["zeta", "--q", "2", "--n", "1", "--prec", "20"],
    ["pellarin", "--q", "3", "--s", "2", "--n", "2", "--prec", "20"],
    ["zeta", "--q", "3", "--n", "1", "--prec", "20"],
    ["euler-check", "--q", "3", "--module", "tensor", "--n", "3", "--prime", "T^2+1", "--prec", "6"],
    ["exp-coeffs", "--q", "2", "--module", "pellarin", "--s", "1", "--order", "6"],
    ["exp-coeffs", "--q", "3", "--module", "tensor", "--n", "3", "--order", "6", "--kind", "log"],
    ["class-check", "--q", "3", "--prec", "12"],
    ["cyclotomic", "--q", "3", "--a", "T^2+T"],
    ["goss", "--q", "2", "--a", "T^3+T^2+T", "--prec", "10"],
]


def _cli(argv, threads):
    env = dict(os.environ, CARLITZ_LAB_THREADS=str(threads),
               PYTHONPATH=os.pathsep.join(p for p in sys.path if p))
    proc = subprocess.run([sys.executable, "-m", "carlitz_lab.cli", *argv], env=env,
                          capture_output=True)
    return proc.returncode, proc.stdout


def test_criterion_8_determinism(report):
    t0 = time.perf_counter()
    failures = []
    for argv in COMMANDS:
        runs = [_cli(argv, t) for t in (1, 4, 1, 4)]
        if any(r != runs[0] for r in runs[1:]):
            failures.append(" ".join(argv))
    report(8, failures, time.perf_counter() - t0, None,
           f"{len(COMMANDS)} commands x threads 1,4,1,4")
