"""Exception types shared across the package."""


class TPFError(Exception):
    """Base class for all package errors."""


class InvalidPolygon(TPFError, ValueError):
    """Polygon has <3 vertices, zero area, or self-intersects."""


class ShapeMismatch(TPFError, ValueError):
    """Array shapes are incompatible for the requested operation."""


class LabelNotFound(TPFError, LookupError):
    """Requested region label does not exist."""


class NoValidInstances(TPFError, ValueError):
    """Every polygon rasterized to an empty mask."""


class EmptyMask(TPFError, ValueError):
    """Operation requires at least one foreground cell."""


class PointOutOfBounds(TPFError, IndexError):
    """A point coordinate falls outside the target grid."""


class InvalidMatrix(TPFError, ValueError):
    """Relation matrix is not symmetric binary with a unit diagonal."""


class InvalidAssignment(TPFError, IndexError):
    """Point-to-instance assignment index out of range."""


class NonFiniteLoss(TPFError, ArithmeticError):
    """A loss value became NaN or infinite."""

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration


class NonFiniteParams(TPFError, ArithmeticError):
    """Model parameters contain NaN or infinite values."""


class PlacementFailed(TPFError, RuntimeError):
    """Scene generator could not place instances under the gap constraint."""
