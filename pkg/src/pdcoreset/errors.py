"""Exception hierarchy shared by all modules."""


class CoresetError(Exception):
    """Base class for every error raised by this package."""


class ZeroDirection(CoresetError, ValueError):
    """A projection direction is (numerically) the zero vector."""


class ZeroPoint(CoresetError, ValueError):
    """A point has no direction, so angles to it are undefined."""


class DegenerateOptimum(CoresetError, ValueError):
    """The optimum norm is not positive (origin on or inside the hull)."""


class OriginInsideHull(CoresetError):
    """The origin lies in conv(P); no positive polytope distance exists."""


class NotSeparable(OriginInsideHull):
    """No homogeneous separator with positive margin exists."""


class IterationLimit(CoresetError):
    """The solver ran out of iterations before certifying its target.

    The unconverged result is attached as ``result``.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class TooManyPoints(CoresetError, ValueError):
    """The brute-force oracle only handles tiny point sets."""


class WideAngle(CoresetError, ValueError):
    """Angular diameter exceeds pi/2."""


class BadTheta(CoresetError, ValueError):
    """Construction angle outside (0, pi/2]."""


class MalformedInstance(CoresetError, ValueError):
    """An adversarial instance is structurally inconsistent."""


class Mismatch(CoresetError, ValueError):
    """A result does not belong to the data it is checked against."""


class ParseError(CoresetError, ValueError):
    """Bad input file; carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
