"""Error of the contour quadrature against node count, for the slice and poly Cauchy formulas.

The trapezoid rule on a circle converges geometrically for integrands analytic
in an annulus; the rate is set by how close the evaluation point's sphere comes
to the contour.  The table shows that rate for a few interior distances.
"""

import numpy as np

from polyslice.clifford import Multivector, Paravector, SliceUnit
from polyslice.errors import NoConvergence
from polyslice.poly_slice import eval_poly_slice, poly_cauchy_Pi
from polyslice.quadrature import ContourSpec, PeriodicQuadrature
from polyslice.sampling import random_poly_slice
from polyslice.slice_functions import eval_slice_poly, slice_cauchy_integral


def fixed_nodes(n_nodes: int) -> PeriodicQuadrature:
    # n0 = n_max allows a single rule of that size
    return PeriodicQuadrature(n0=n_nodes, n_max=n_nodes)


def single_rule(integral, *args) -> Multivector:
    """Value of one fixed-size rule; the adaptive driver reports it through NoConvergence."""
    try:
        return integral(*args)
    except NoConvergence as exc:
        return Multivector(args[0].n, exc.value)


def main():
    rng = np.random.default_rng(1)
    F = random_poly_slice(rng, "L", 3, 3, 4)
    f = F.components[0]
    j = SliceUnit.basis(2, 3)
    nodes = [16, 32, 64, 128, 256]
    print(f"{'|x|/r':>6s} " + " ".join(f"{n:>10d}" for n in nodes))
    for frac in (0.3, 0.6, 0.9):
        x = Paravector(3, [frac * 0.6, frac * 0.8, 0.0, 0.0])
        row_s, row_p = [], []
        for n_nodes in nodes:
            c = ContourSpec(j, 0.0, 1.0, fixed_nodes(n_nodes))
            row_s.append((single_rule(slice_cauchy_integral, f, c, x) - eval_slice_poly(f, x)).norm())
            row_p.append((single_rule(poly_cauchy_Pi, F, c, x) - eval_poly_slice(F, x)).norm())
        print(f"{frac:6.1f} " + " ".join(f"{e:10.2e}" for e in row_s) + "   slice")
        print(f"{'':6s} " + " ".join(f"{e:10.2e}" for e in row_p) + "   poly (Pi kernels)")


if __name__ == "__main__":
    main()
