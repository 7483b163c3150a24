"""Exception types shared across the package."""


class PolyEvapError(Exception):
    """Base class for all errors raised by polyevap."""


class ContractViolation(PolyEvapError, ValueError):
    """An argument is outside the documented domain of an operation."""


class InfeasibleMomentsError(PolyEvapError, ValueError):
    """Half moments (or the far-field state producing them) admit no
    constrained Maxwellian.

    ``moment`` names the offending quantity (``"n1"``, ``"n2"``, ``"n5"`` or
    ``"upsilon"``) and ``value`` carries its value.
    """

    def __init__(self, message, moment=None, value=None):
        super().__init__(message)
        self.moment = moment
        self.value = value


class NumericalFailure(PolyEvapError, RuntimeError):
    """A numerical procedure (bracketing, quadrature, optimizer) did not converge."""


class UnsupportedStandaloneError(PolyEvapError, ValueError):
    """The standalone minimal flux is undefined at delta = 0 (log Gamma(0) diverges)."""


class CrossCheckError(PolyEvapError, ArithmeticError):
    def __init__(self, message, direct=None, recast=None):
        super().__init__(message)
        self.direct = direct
        self.recast = recast


class NoFeasiblePointError(PolyEvapError, ValueError):
    """A search region contains no state where the entropy bound is defined."""


class SearchBoundError(PolyEvapError, RuntimeError):
    pass
