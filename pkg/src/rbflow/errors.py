"""Exception types shared across the package."""


class RBFlowError(Exception):
    """Base class for all package-specific errors."""


class GridError(RBFlowError):
    """Invalid radial grid construction or profile/grid mismatch."""


class GeometryError(RBFlowError):
    """Geometric data violates positivity (warp or lapse not positive)."""


class ParameterError(RBFlowError):
    """Soliton parameters outside the admissible range for an operation."""


class DomainEscapeError(RBFlowError):
    """A diffeomorphism trajectory left the computational window."""

    def __init__(self, message, escape_time=None, node=None):
        super().__init__(message)
        self.escape_time = escape_time
        self.node = node


class PositivityLossError(RBFlowError):
    """A flow step drove the lapse or squared warp non-positive."""

    def __init__(self, message, time=None, node=None):
        super().__init__(message)
        self.time = time
        self.node = node


class BlowupError(RBFlowError):
    """Scalar curvature exceeded the configured blow-up ceiling."""

    def __init__(self, message, time=None, sup_scal=None):
        super().__init__(message)
        self.time = time
        self.sup_scal = sup_scal


class ComparisonRegionEmptyError(RBFlowError):
    """No overlap between the trusted flow region and the oracle's valid range."""


class ConfigError(RBFlowError):
    """Invalid or incomplete job configuration."""
