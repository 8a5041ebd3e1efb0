"""Exception hierarchy shared by the geometry modules."""


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class NotGeneralError(GeometryError):
    """The pencil fails the generality condition."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class IrrationalRootError(GeometryError):
    """A degenerate member of the pencil is not defined over the rationals."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class NotMemberError(GeometryError):
    """A line does not lie on the linear section."""

    def __init__(self, message, pairings=()):
        super().__init__(message)
        self.pairings = tuple(pairings)


class InvariantViolation(AssertionError):
    """A property that must hold for every input was contradicted.

    ``check`` names the violated check so that callers can report it.
    """

    def __init__(self, check, message=""):
        super().__init__(f"{check}: {message}" if message else check)
        self.check = check
