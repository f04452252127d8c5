"""Exact arithmetic for Carlitz-type L-values of Anderson modules over F_q[theta]."""

from .anderson import (AndersonModule, LieVector, carlitz_tensor, e_alpha_module, exp_coefficients,
                       exp_eval, hyperderivative, log_coefficients, log_eval, new_anderson,
                       partial_action, pellarin_alpha)
from .cyclotomic import (CycField, GroupRingElem, eta_generator_check, equivariant_l, galois_apply,
                         gauss_thakur, goss_l_value, group_ring_fitting, teichmuller)
from .ff import FieldSpec, KElem, LaurentSeries, PrimePoly, ThetaPoly, enumerate_primes, resultant
from .fitting import (FiniteModule, LatticeBasis, e_mod_p, fitting_generator, invariant_factors,
                      lattice_index, lie_mod_p, rho, rho_multiplicative, theta_operator_det)
from .lseries import (LValue, carlitz_zeta, class_formula_residual, dirichlet_sum, euler_product,
                      pellarin_value)
from .twisted import SkewPoly, SkewSeries, phi_extend, skew_apply, skew_mul

__version__ = "0.1.0"

__all__ = [
    "AndersonModule", "carlitz_tensor", "carlitz_zeta", "class_formula_residual", "CycField",
    "dirichlet_sum", "e_alpha_module", "e_mod_p", "enumerate_primes", "equivariant_l",
    "eta_generator_check", "euler_product", "exp_coefficients", "exp_eval", "FieldSpec",
    "FiniteModule", "fitting_generator", "galois_apply", "gauss_thakur", "goss_l_value",
    "group_ring_fitting", "GroupRingElem", "hyperderivative", "invariant_factors", "KElem",
    "lattice_index", "LatticeBasis", "LaurentSeries", "lie_mod_p", "LieVector", "log_coefficients",
    "log_eval", "LValue", "new_anderson", "partial_action", "pellarin_alpha", "pellarin_value",
    "phi_extend", "PrimePoly", "resultant", "rho", "rho_multiplicative", "skew_apply", "skew_mul",
    "SkewPoly", "SkewSeries", "teichmuller", "theta_operator_det", "ThetaPoly",
]
