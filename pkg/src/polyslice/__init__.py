"""Numerical PS-functional calculus for paravector operators in Clifford algebras.

Clifford arithmetic, slice monogenic and poly slice monogenic functions with
their Cauchy kernels, S-resolvents and S-spectrum localization, and three
independent evaluations of F(T): two contour-quadrature formulations and a
direct series evaluation for polynomial data.
"""

from .calculus import calc, default_contour, ps_calc_I, ps_calc_II, s_functional_calc, series_oracle
from .clifford import Multivector, Paravector, SliceUnit, pv_conj, pv_decompose, pv_inverse
from .errors import (
    ClassConstraintError,
    ContourError,
    DimensionError,
    NoConvergence,
    OnSphereError,
    SingularError,
    SSpectrumHit,
    UnsupportedRepresentationError,
)
from .operators import CliffordOperator, ParavectorOperator, s_resolvent, s_spectrum_scan
from .poly_slice import PolySliceFunction, circledast, eval_poly_slice, pointwise_product
from .quadrature import ContourSpec, PeriodicQuadrature
from .slice_functions import IntrinsicElementary, SliceMonogenicPoly, eval_slice_poly, star_product

__version__ = "0.1.0"
