"""Exception types raised across the package."""


class LinefieldError(ValueError):
    pass


class DegenerateLine(LinefieldError):
    """A horizontal Hesse line has no x-intercept."""


class ParallelLines(LinefieldError):
    pass


class DegenerateTriangle(LinefieldError):
    pass


class UnknownCase(LinefieldError):
    pass


class BadEccentricity(LinefieldError):
    pass


class QuadratureFailure(ArithmeticError):
    pass


class BinMismatch(LinefieldError):
    pass


class SamplesNotRetained(LinefieldError):
    pass


class EmptySample(LinefieldError):
    pass


class SmallSample(LinefieldError):
    pass


class DegenerateBins(LinefieldError):
    pass


class DegenerateP(LinefieldError):
    pass
