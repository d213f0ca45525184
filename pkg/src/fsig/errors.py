"""Exception hierarchy shared by every fsig module."""


class FsigError(Exception):
    """Base class for all library errors."""


class RingError(FsigError, ValueError):
    pass


class NotPrime(RingError):
    def __init__(self, p):
        super().__init__(f"{p} is not prime")
        self.p = p


class DuplicateVariable(RingError):
    def __init__(self, name):
        super().__init__(f"variable {name!r} declared twice")
        self.name = name


class NonpositiveWeight(RingError):
    def __init__(self, name, weight):
        super().__init__(f"variable {name!r} has weight {weight}; weights must be >= 1")
        self.name = name
        self.weight = weight


class NegativeDimension(RingError):
    def __init__(self, nvars, nrels):
        super().__init__(f"{nrels} relations in {nvars} variables gives negative dimension")


class PolynomialSyntaxError(FsigError, ValueError):
    """Malformed polynomial text; ``position`` is a 0-based character offset."""

    def __init__(self, position, message):
        super().__init__(f"at position {position}: {message}")
        self.position = position
        self.message = message


class UnknownVariable(FsigError, ValueError):
    def __init__(self, name, position=None):
        where = "" if position is None else f" at position {position}"
        super().__init__(f"unknown variable {name!r}{where}")
        self.name = name
        self.position = position


class ExponentOverflow(FsigError, OverflowError):
    pass


class RingMismatch(FsigError, ValueError):
    pass


class NotHomogeneous(FsigError, ValueError):
    def __init__(self, degrees):
        self.degrees = frozenset(degrees)
        super().__init__(f"polynomial is not weighted-homogeneous; degrees {sorted(self.degrees)}")


class ZeroPolynomial(FsigError, ValueError):
    pass


class UnitPolynomial(FsigError, ValueError):
    pass


class InvalidDegrees(FsigError, ValueError):
    pass


class PoleOrderMismatch(FsigError, ValueError):
    def __init__(self, actual, expected):
        super().__init__(f"series has a pole of order {actual} at t=1, expected {expected}")
        self.actual = actual
        self.expected = expected


class NotPolynomial(FsigError, ValueError):
    pass


class BudgetExceeded(FsigError):
    def __init__(self, size, limit):
        super().__init__(f"basis of {size} monomials exceeds budget {limit}")
        self.size = size
        self.limit = limit


class UnsupportedCharacteristic(FsigError, ValueError):
    pass


class BadIndex(FsigError, ValueError):
    pass
