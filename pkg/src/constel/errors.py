"""Exception hierarchy shared across the package."""


class ConstelError(Exception):
    """Base class for all package errors."""


class GeometryError(ConstelError):
    pass


class RadiusNotPositive(GeometryError):
    pass


class CenterOnCircle(GeometryError):
    """Inversion center lies on the circle, so the image would be a line."""


class CenterOnLine(GeometryError):
    """Inversion center lies on the line, so the image would be a line."""


class NotTangent(GeometryError):
    pass


class DimensionMismatch(GeometryError):
    pass


class SearchError(ConstelError):
    pass


class BudgetExceeded(SearchError):
    pass


class TriesExhausted(SearchError):
    pass


class SurrogateFailed(SearchError):
    pass


class SearchFailed(SearchError):
    pass


class BuildError(ConstelError):
    pass


class ProviderFailed(BuildError):
    pass


class CollisionAfterRotation(BuildError):
    pass


class InversionCenterInvalid(BuildError):
    pass


class VerificationFailed(BuildError):
    """Raised when a constructed family fails its exact verification sweep.

    Carries the offending report so callers can surface a witness.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
