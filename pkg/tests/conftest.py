import os
import random

import pytest
from hypothesis import HealthCheck, settings

from carlitz_lab.ff import FieldSpec, LaurentSeries, ThetaPoly, parse_kelem, parse_theta

settings.register_profile("carlitz", derandomize=True, deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("CARLITZ_LAB_HYPOTHESIS", "carlitz"))

SEED = int(os.environ.get("CARLITZ_LAB_SEED", "20240611"))


@pytest.fixture
def rng():
    return random.Random(SEED)


def spec(q, s=0):
    return FieldSpec.for_q(q, s)


def poly(sp, text):
    return parse_theta(sp, text)


def kel(sp, text):
    return parse_kelem(sp, text)


def series(sp, terms, prec=None):
    """Laurent series from {degree: coefficient text}."""
    return LaurentSeries.from_terms(sp, [(d, kel(sp, c)) for d, c in terms.items()], prec=prec)


def random_poly(r, sp, deg, monic=False):
    """Random theta-polynomial with F_q coefficients (as codes) of degree <= deg."""
    cs = [r.randrange(sp.q) for _ in range(deg + 1)]
    if monic:
        cs[-1] = 1
    return ThetaPoly.from_codes(sp, cs)
