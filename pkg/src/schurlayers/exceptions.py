"""Exception hierarchy shared across the package."""


class SchurLayersError(Exception):
    """Base class for all errors raised by schurlayers."""


class DimensionError(SchurLayersError, ValueError):
    """Shapes or sizes of inputs do not agree."""


class InvalidInputError(SchurLayersError, ValueError):
    """Input is outside the domain of an operation."""


class LayoutError(SchurLayersError, KeyError):
    """Coefficients reference irreducible slots that do not exist."""

    def __str__(self):
        # KeyError quotes its message by default
        return str(self.args[0]) if self.args else ""


class ResourceError(SchurLayersError, RuntimeError):
    """A computation would exceed its configured budget."""


class TransitivityError(SchurLayersError, ValueError):
    """A permutation group was required to act transitively but does not."""


class UnsupportedError(SchurLayersError, NotImplementedError):
    """The requested space has no implemented decomposition."""
