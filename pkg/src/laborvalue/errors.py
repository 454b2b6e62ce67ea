"""Exception hierarchy shared by every module of the toolkit."""

from __future__ import annotations


class LaborValueError(Exception):
    """Base class for all domain errors raised by the toolkit."""


# -- shape / parsing ---------------------------------------------------------


class ParseError(LaborValueError, ValueError):
    pass


class NonSquareError(LaborValueError, ValueError):
    pass


class ShapeMismatchError(LaborValueError, ValueError):
    pass


class DimensionNot3Error(LaborValueError, ValueError):
    pass


# -- sign / domain -----------------------------------------------------------


class DomainError(LaborValueError, ValueError):
    pass


class NegativeEntryError(DomainError):
    pass


class NotStrictlyPositiveError(DomainError):
    pass


class NonPositivePriceError(DomainError):
    pass


class NonPositiveWageError(DomainError):
    pass


class NonPositiveReductionError(DomainError):
    pass


class NonPositiveInputError(DomainError):
    pass


class NormalizationViolatedError(DomainError):
    pass


# -- spectral ----------------------------------------------------------------


class NotConvergedError(LaborValueError, ArithmeticError):
    pass


class SpectralRadiusTooLargeError(LaborValueError, ArithmeticError):
    """``rho(M) >= 1 - 1e-9``: the series ``(I - M)^-1`` does not exist."""

    def __init__(self, message: str, radius: float | None = None) -> None:
        super().__init__(message)
        self.radius = radius


class RateBeyondTechnicalMaxError(SpectralRadiusTooLargeError):
    pass


class RateBeyondFeasibleMaxError(DomainError):
    pass


class ZeroCapitalStockError(DomainError):
    pass


class BadRateOrderError(DomainError):
    pass


class SurplusAbsentError(LaborValueError):
    pass


class EmptySliceError(LaborValueError):
    pass


# -- transformation ----------------------------------------------------------


class OutsideCompatibilityIntervalError(LaborValueError):
    def __init__(self, gamma: float, gamma_min: float, gamma_max: float) -> None:
        super().__init__(
            f"profit share gamma = {gamma:.6g} lies outside the compatibility "
            f"interval [{gamma_min:.6g}, {gamma_max:.6g}]; the second-equality "
            "hyperplane misses the value-feasible domain"
        )
        self.gamma = gamma
        self.gamma_min = gamma_min
        self.gamma_max = gamma_max


class ShareOutsideConeError(LaborValueError):
    def __init__(self, ratio: float, gamma_min: float, gamma_max: float) -> None:
        super().__init__(
            f"Pi*/P* = {ratio:.6g} is not strictly inside ({gamma_min:.6g}, "
            f"{gamma_max:.6g}); no strictly positive slack vector exists"
        )
        self.ratio = ratio
        self.gamma_min = gamma_min
        self.gamma_max = gamma_max


class DegenerateCollinearityError(LaborValueError):
    pass


class InfeasibleLPError(LaborValueError):
    pass
