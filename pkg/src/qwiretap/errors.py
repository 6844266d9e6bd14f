"""Exception hierarchy shared across the package."""


class QWiretapError(Exception):
    """Base class for all package errors."""


class RegisterError(QWiretapError):
    """Unknown, duplicate, or mismatched register labels."""


class ShapeError(QWiretapError):
    """Matrix dimensions inconsistent with the declared registers."""


class ValidityError(QWiretapError):
    """Operator fails the constraints of its declared kind (state, unitary, ...)."""


class ParameterError(QWiretapError):
    """Out-of-range or malformed user parameter."""


class CapacityError(QWiretapError):
    """Requested computation exceeds the dense-matrix budget."""


class StructureError(QWiretapError):
    """Block or codebook structure inconsistent with its base sequence."""
