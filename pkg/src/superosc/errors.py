"""Exception hierarchy. The CLI reports the class name of any of these."""


class SuperoscError(Exception):
    """Base class for domain errors."""


class CapExceeded(SuperoscError):
    pass


class QuadratureFailure(SuperoscError):
    pass


class InvalidSpec(SuperoscError):
    pass


class NotUniform(SuperoscError):
    pass


class SingularMatrix(SuperoscError):
    pass


class ResidualNotMet(SuperoscError):
    pass


class UnknownBasis(SuperoscError):
    pass


class BandViolation(SuperoscError):
    pass


class StepTooLarge(SuperoscError):
    pass


class DegenerateStretch(SuperoscError):
    pass
