"""Exception types raised by the library."""


class CsmaFugacityError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(CsmaFugacityError, ValueError):
    pass


class DimacsParseError(CsmaFugacityError, ValueError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class InfeasibleRates(CsmaFugacityError, ValueError):
    """Target rates violate a region's feasibility (e.g. a clique sum >= 1)."""

    def __init__(self, region, detail=""):
        self.region = tuple(region)
        self.detail = detail
        msg = "infeasible rates on region {" + ",".join(map(str, self.region)) + "}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class DegenerateDenominator(CsmaFugacityError, ArithmeticError):
    pass


class NoConvergence(CsmaFugacityError, RuntimeError):
    pass


class TooLarge(CsmaFugacityError, ValueError):
    def __init__(self, n, limit):
        self.n = n
        self.limit = limit
        super().__init__(f"graph with n={n} exceeds enumeration limit {limit}")


class MissingRatio(CsmaFugacityError, KeyError):
    def __init__(self, region, vertex):
        self.region = tuple(region)
        self.vertex = vertex
        super().__init__(f"no ratio for vertex {vertex} in region {self.region}")

    def __str__(self):
        return self.args[0]
