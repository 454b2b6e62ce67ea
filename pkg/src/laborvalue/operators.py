"""Derived operators, the value and price systems, and the surplus-operator
identity ``(I - M0)^-1 S = S_hat``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .economy import EconomySpec, composite_inputs
from .errors import (
    DomainError,
    NonPositiveReductionError,
    NonPositiveWageError,
    RateBeyondTechnicalMaxError,
    ShapeMismatchError,
    SpectralRadiusTooLargeError,
    SurplusAbsentError,
)
from .spectral import RHO_MARGIN, dominant_eigenvalue, inverse_of_i_minus

Array = NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class OperatorSet:
    """Everything derived from an economy at zero profit.

    ``s`` maps final demand to embodied hours, ``m0 = s B`` is the
    dimensionless labor-reproduction matrix and ``s_hat`` the surplus
    operator.  ``s_hat`` is ``None`` when ``rho(a_hat) >= 1 - 1e-9``; the
    rest of the set stays usable for boundary diagnostics.
    """

    a_tilde: Array
    leontief_inv: Array
    s: Array
    m0: Array
    a_hat: Array
    s_hat: Array | None
    labor: Array
    rho_a_hat: float

    @property
    def n(self) -> int:
        return self.m0.shape[0]

    @property
    def has_surplus(self) -> bool:
        return self.s_hat is not None


@dataclass(frozen=True, eq=False)
class ValueSystem:
    c: Array
    v: Array
    sigma: Array


@dataclass(frozen=True, eq=False)
class PriceSystem:
    r: float
    w: Array
    p: Array


def _vector(value: ArrayLike, n: int, what: str) -> Array:
    v = np.asarray(value, dtype=float)
    if v.shape != (n,):
        raise ShapeMismatchError(f"{what} must have length {n}, got shape {v.shape}")
    return v


def build_operators(e: EconomySpec) -> OperatorSet:
    zero_cols = [j for j in range(e.n) if not (e.B[:, j] > 0).any()]
    if zero_cols:
        raise DomainError(
            f"consumption basket of sectors {zero_cols} is empty: every column of B "
            "needs a positive entry"
        )
    _, a_tilde = composite_inputs(e)
    try:
        leontief = inverse_of_i_minus(a_tilde)
    except SpectralRadiusTooLargeError as exc:
        raise SpectralRadiusTooLargeError(
            f"Hawkins-Simon violated: rho(A_tilde) = {exc.radius:.10g}", radius=exc.radius
        ) from None
    s = e.labor[:, np.newaxis] * leontief
    m0 = s @ e.B
    a_hat = a_tilde + e.B * e.labor[np.newaxis, :]
    rho_hat = dominant_eigenvalue(a_hat)
    s_hat = None
    if rho_hat < 1.0 - RHO_MARGIN:
        s_hat = e.labor[:, np.newaxis] * np.linalg.solve(np.eye(e.n) - a_hat, np.eye(e.n))
    for a in (a_tilde, leontief, s, m0, a_hat, s_hat):
        if a is not None:
            a.setflags(write=False)
    return OperatorSet(a_tilde, leontief, s, m0, a_hat, s_hat, e.labor, rho_hat)


def technical_inverse(e: EconomySpec, r: float) -> Array:
    """``(I - A_tilde - r K)^-1`` for ``0 <= r < r_A``."""
    if r < 0:
        raise DomainError(f"profit rate must be >= 0, got {r}")
    _, a_tilde = composite_inputs(e)
    try:
        return inverse_of_i_minus(a_tilde + r * e.K)
    except SpectralRadiusTooLargeError as exc:
        raise RateBeyondTechnicalMaxError(
            f"r = {r:.10g} is at or beyond the technical maximum: "
            f"rho(A_tilde + r K) = {exc.radius:.10g}",
            radius=exc.radius,
        ) from None


def parametric_reproduction(e: EconomySpec, r: float) -> Array:
    """``M(r) = L (I - A_tilde - r K)^-1 B``."""
    # Same product order as ``build_operators`` so that M(0) == M0 bit for bit.
    return (e.labor[:, np.newaxis] * technical_inverse(e, r)) @ e.B


def value_system(ops: OperatorSet, c: ArrayLike) -> ValueSystem:
    c = _vector(c, ops.n, "reduction vector c")
    if not (c > 0).all():
        raise NonPositiveReductionError("reduction coefficients must be strictly positive")
    return ValueSystem(c=c, v=c @ ops.s, sigma=c @ ops.m0)


def price_system(e: EconomySpec, w: ArrayLike, r: float) -> PriceSystem:
    w = _vector(w, e.n, "wage vector w")
    if not (w > 0).all():
        raise NonPositiveWageError("wages must be strictly positive")
    p = (w * e.labor) @ technical_inverse(e, r)
    return PriceSystem(r=r, w=w, p=p)


def price_residual(e: EconomySpec, prices: PriceSystem) -> float:
    """Relative residual of ``p = p A_tilde + w L + r p K``."""
    _, a_tilde = composite_inputs(e)
    p, w = prices.p, prices.w
    rhs = p @ a_tilde + w * e.labor + prices.r * (p @ e.K)
    return float(np.max(np.abs(p - rhs)) / np.max(np.abs(p)))


def verify_identity(ops: OperatorSet) -> float:
    """``max |(I - M0)^-1 S - S_hat|``; both sides computed independently."""
    if ops.s_hat is None:
        raise SurplusAbsentError(
            f"no physical surplus: rho(A_tilde + B L) = {ops.rho_a_hat:.10g}, S_hat is unavailable"
        )
    lhs = np.linalg.solve(np.eye(ops.n) - ops.m0, ops.s)
    return float(np.max(np.abs(lhs - ops.s_hat)))
