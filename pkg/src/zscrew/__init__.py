"""Screw function of the Riemann xi-function, computed from both sides.

The central object is the even continuous function Psi(t) with the
prime-side closed form (von Mangoldt sums + Hurwitz-Lerch terms) and the
zero-side series sum (1 - cos(gamma t))/gamma^2 over the nontrivial
zero ordinates.  Everything numerically checkable that hangs off it is
here: positivity scans, Weil explicit-formula identities, Li/moment
transforms and their Hankel-determinant criteria, and Nystrom spectra of
the associated integral operator.
"""

from .specfun import (SpecFunAccuracy, catalan, digamma, g_infty_smallt,
                      hurwitz_zeta_nonpos, lerch_phi2, trigamma)
from .mangoldt import (MangoldtTable, PsiEvalResult, PsiPrime,
                       build_table, chebyshev_weighted, asymptotic_ratio,
                       psi_prime_side, psi_prime_derivative,
                       psi_omega_prime_side, psi_omega_shift)
from .zerotable import (TailModel, ZeroTable, kernel_G, kernel_G_zero_sum,
                        li_from_zeros, load_zeros, psi_zero_side,
                        tail_sigma2, zero_power_sum)
from .weil import (ExplicitFormulaReport, TestFunction, chi_pairing_lhs,
                   chi_pairing_rhs, explicit_formula_lhs,
                   explicit_formula_rhs, triangle, weil_check)
from .moments import (HybridPsi, LiSequence, MomentSequence,
                      TransformMatrices, a_from_li, b_coeff, hankel_det,
                      li_from_moments, moment_mu, moment_sequence,
                      moments_from_li, transform_matrices)
from .operator import (OperatorDiscretization, SpectrumReport, discretize,
                       h_kernel, spectrum, zero_system_spectrum)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
