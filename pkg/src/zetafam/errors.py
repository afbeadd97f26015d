"""Exception hierarchy shared by all zetafam modules."""


class ZetafamError(Exception):
    """Base class for every error raised by this package."""


class NotPrime(ZetafamError, ValueError):
    pass


class EvenCharacteristic(ZetafamError, ValueError):
    pass


class ContextMismatch(ZetafamError, TypeError):
    pass


class DivisionByZero(ZetafamError, ZeroDivisionError):
    pass


class NoRoot(ZetafamError, ValueError):
    pass


class ZeroPolynomial(ZetafamError, ValueError):
    pass


class DegreeTooSmall(ZetafamError, ValueError):
    pass


class ParseError(ZetafamError, ValueError):
    def __init__(self, message, *, field=None, line=None):
        self.message = message
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class InvariantViolation(ZetafamError, ValueError):
    pass


class GateFailed(ZetafamError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"discriminant gate failed: {report.failure_reason}")


class CapExceeded(ZetafamError):
    def __init__(self, size, cap, what="enumeration"):
        self.size = size
        self.cap = cap
        super().__init__(f"{what} size {size} exceeds cap {cap}")


class NoChartApplies(ZetafamError, AssertionError):
    """Every addition chart vanished; the chart set failed to cover E x E."""


class FactorFound(ZetafamError):
    """A nontrivial factor of the working modulus appeared in Schoof's loop."""

    def __init__(self, factor):
        self.factor = factor
        super().__init__(f"nontrivial factor of degree {factor.degree} found")


class NonIntegralCoefficient(ZetafamError, ArithmeticError):
    pass


class WeilBoundViolated(ZetafamError, ValueError):
    pass


class InvalidDivisor(ZetafamError, ValueError):
    pass


class NoOrderFound(ZetafamError, ArithmeticError):
    pass


class UnsupportedSingularity(ZetafamError, ValueError):
    pass


class InconsistencyError(ZetafamError, AssertionError):
    """An internal cross-check between two independent routes disagreed."""
