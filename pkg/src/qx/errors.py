"""Exception types shared across the package."""


class QxError(Exception):
    """Base class for all package-specific errors."""


class ConvergenceError(QxError):
    """A truncated series or product failed to meet its tail tolerance."""


class RegimeError(QxError):
    """Operation requested in the wrong q regime (sub-unit vs super-unit)."""


class DomainError(QxError):
    """Arguments outside the mathematical domain of the operation."""


class PoleError(QxError):
    """Evaluation point is at (or too close to) a pole."""


class WindowError(QxError):
    """A lattice stencil stepped outside the stored window."""


class RangeError(QxError):
    """Antidifference/integral undefined for this exponent or range."""


class ParityError(QxError):
    """Operation requires definite parity and the input has none."""


class UnsupportedVariant(QxError):
    """Named variant/table entry not covered by the implementation."""


class ReductionFailure(QxError):
    """A word failed to reduce to normal form, or a relation that should
    reduce to zero did not."""


class UnknownGenerator(QxError):
    """A word references a generator the algebra does not declare."""


class ConstraintError(QxError):
    """Solution-family parameters violate the family's defining constraint."""


class GridMismatch(QxError):
    """Two lattice grids that must agree (same points, same order) do not."""


class RecursionError(QxError):
    """A marching recursion must divide by a bracket factor that vanishes
    at the declared root-of-unity modulus.

    Shadows the builtin name on purpose: import it from this module
    explicitly (``from qx.errors import RecursionError``) when catching.
    """
