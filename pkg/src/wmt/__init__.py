"""Exact unramified Whittaker functions, their Mellin transforms, and the
factorization I(s) = L_pi(s) F_nu(s) over root-system data."""

from .laurent import GeneratorSet, LaurentPolynomial, RationalFunction
from .mellin import (SpectralParams, c_factor, coefficients, d_factor, f_nu, l_adjoint, l_pi,
                     l_trivial, mellin_symbolic, specialize_diagonal, verify_factorization,
                     wnu_monomial)
from .root_data import (RootDatum, WeylElement, WeylGroup, act_on_coroot, build_root_datum,
                        generate_weyl, negative_simple_set)

__version__ = "0.1.0"
