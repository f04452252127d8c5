"""Exact arithmetic over F_q, k_s = F(t1, .., ts), k_s[theta] and k_s((1/theta))."""

from .gf import GF, field
from .kfield import INF, FieldSpec, KElem
from .laurent import LaurentSeries, PrecisionError, laurent_arith
from .ops import frobenius_twist, gauss_valuation, monicize
from .primes import BudgetExceeded, PrimePoly, enumerate_primes
from .ratfunc import ThetaFrac, parse_frac
from .resultant import resultant
from .text import ParseError, parse_kelem, parse_theta
from .thetapoly import ThetaPoly

__all__ = [
    "GF", "field", "INF", "FieldSpec", "KElem", "LaurentSeries", "PrecisionError",
    "laurent_arith", "frobenius_twist", "gauss_valuation", "monicize", "BudgetExceeded",
    "PrimePoly", "enumerate_primes", "ThetaFrac", "parse_frac", "resultant", "ParseError",
    "parse_kelem", "parse_theta", "ThetaPoly",
]
