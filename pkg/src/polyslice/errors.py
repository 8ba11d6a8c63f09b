"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operands live in Clifford algebras with different generator counts."""


class SingularError(ArithmeticError):
    """A paravector or operator that must be inverted is (numerically) singular."""


class OnSphereError(SingularError):
    """The Cauchy kernel was evaluated with s on the sphere [x]."""


class SSpectrumHit(SingularError):
    """A point used as a resolvent argument lies (numerically) in the S-spectrum."""


class ContourError(ValueError):
    """A point that must be enclosed by a contour is on or outside it."""


class InvalidBasisError(ValueError):
    """A basis completion is not a set of pairwise anticommuting imaginary units."""


class SideMismatchError(ValueError):
    """Left and right objects were mixed in an operation that requires one side."""


class ClassConstraintError(ValueError):
    """An operand does not belong to the function class an identity requires."""


class UnsupportedRepresentationError(TypeError):
    """The requested method needs polynomial data the function does not carry."""


class NoConvergence(RuntimeError):
    """Adaptive quadrature hit its node cap before meeting the tolerance.

    The best available value and its error estimate travel with the exception.
    """

    def __init__(self, value, estimate, nodes):
        super().__init__(
            f"quadrature did not converge with {nodes} nodes (error estimate {estimate:.3e})"
        )
        self.value = value
        self.estimate = estimate
        self.nodes = nodes
