"""Exception types shared across the package."""


class TorifanError(Exception):
    """Base class for all torifan errors."""


class ParseError(TorifanError):
    """Malformed input file or rational literal."""


class ValidationError(TorifanError):
    """Structurally invalid fan or divisor data."""


class NotSimplicial(ValidationError):
    """A maximal cone whose rays are linearly dependent."""


class NotSmooth(ValidationError):
    """A maximal cone whose rays do not form a lattice basis."""


class NotComplete(ValidationError):
    """A wall not shared by exactly two cones, or a disconnected fan."""


class NotNef(TorifanError):
    """Divisor fails wall-nonnegativity where nef is required."""


class NotAmple(TorifanError):
    """Divisor fails wall-positivity where ample is required."""


class NotBig(TorifanError):
    """Divisor whose section polytope is not full-dimensional."""


class UnboundedPolytope(TorifanError):
    """Feasible set has a recession direction.

    The offending direction is stored in ``direction``.
    """

    def __init__(self, direction, message="polytope is unbounded"):
        super().__init__(f"{message} (direction {tuple(direction)})")
        self.direction = tuple(direction)


class DegeneratePolytope(TorifanError):
    """Zero-volume polytope where positive volume is required."""


class ThresholdExceeded(TorifanError):
    """Truncation parameter outside the valid range."""


class EmptyGrid(TorifanError):
    """No ample sample on the requested sweep grid."""


class VerificationError(TorifanError):
    """An exact check asserted by the harness failed.

    Carries enough provenance to reproduce the failing sample.
    """

    def __init__(self, message, variety=None, sample=None):
        super().__init__(message)
        self.variety = variety
        self.sample = sample
