"""Uniform entry points over KElem, ThetaPoly, ThetaFrac and LaurentSeries."""

from __future__ import annotations

from .kfield import INF, KElem
from .laurent import LaurentSeries
from .ratfunc import ThetaFrac
from .thetapoly import ThetaPoly


def gauss_valuation(f):
    """v_infty(f), with v_infty(theta) = -1 and +inf for zero."""
    if isinstance(f, (ThetaPoly, LaurentSeries, ThetaFrac, KElem)):
        return f.valuation()
    raise TypeError(f"no valuation on {type(f).__name__}")


def monicize(f):
    """(unit, monic_f) with unit * monic_f = f.

    Polynomials are normalized at their highest theta-power; Laurent series
    at their leading term theta^(-m).
    """
    if isinstance(f, (ThetaPoly, LaurentSeries)):
        return f.monicize()
    if isinstance(f, ThetaFrac):
        if f.is_zero():
            raise ValueError("cannot monicize zero")
        u, m = f.num.monicize()
        return u, ThetaFrac(m, f.den)
    raise TypeError(f"cannot monicize {type(f).__name__}")


def frobenius_twist(f, k: int = 1):
    """tau^k: theta -> theta^(q^k), coefficients in k fixed."""
    if k < 0:
        raise ValueError("twist exponent must be nonnegative")
    if isinstance(f, KElem):
        return f
    if isinstance(f, (ThetaPoly, LaurentSeries, ThetaFrac)):
        return f.twist(k)
    raise TypeError(f"cannot twist {type(f).__name__}")


__all__ = ["INF", "gauss_valuation", "monicize", "frobenius_twist"]
