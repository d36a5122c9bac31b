"""Exact finite sections of Toeplitz-type operators on the symmetrized bidisc.

Submodules
----------
lattice
    Anti-symmetric basis indices and truncation windows.
symbols
    Symmetric Fourier symbols and polynomials in ``(s, p)``.
spaces
    The Hardy space of the symmetrized bidisc, its models and the Szego kernel.
operators
    Laurent, Toeplitz, Hankel and dual Toeplitz matrices, ``X``, ``F_n``, ``eta``.
analysis
    Certifiers returning :class:`~symtoep.analysis.CheckReport` objects.
cli
    Command-line front end.
"""

from .lattice import (AntiIndex, IndexWindow, co_hardy_window, full_window,
                      hardy_window, interior, safe_subwindow, shift)
from .symbols import (COBURN_SYMBOL, P_SYMBOL, S_SYMBOL, FourierSymbol, SPPoly,
                      conjugate, is_analytic, product, sp_to_fourier,
                      symbol_from_json, symbol_to_json)
from .operators import (OperatorMatrix, build_dual_toeplitz, build_Fn,
                        build_hankel, build_laurent, build_toeplitz, build_X,
                        build_X0, eta, operator_norm)
from .spaces import (GammaPoint, HardyElement, PointClass, classify_point,
                     sp_poly_to_hardy, szego_eval, szego_partial_sum)
from .analysis import (CheckReport, FinitePair, certify_gamma_isometry,
                       certify_gamma_unitary, check_analyticity_equivalences,
                       check_asymptotic_toeplitz, check_brown_halmos,
                       check_dual_toeplitz_bh, check_fundamental_operator,
                       compactness_profile, recover_symbol)

__version__ = "0.1.0"
