"""Profit-rate bounds and the price-wage domain.

``r_A`` solves ``rho(A_tilde + r K) = 1`` and ``r*`` solves
``rho(M(r)) = 1``; both maps are strictly increasing in ``r`` so plain
bisection is enough.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .economy import EconomySpec, composite_inputs
from .errors import (
    BadRateOrderError,
    DomainError,
    RateBeyondFeasibleMaxError,
    RateBeyondTechnicalMaxError,
    SpectralRadiusTooLargeError,
    SurplusAbsentError,
    ZeroCapitalStockError,
)
from .feasible import MembershipResult, membership
from .operators import build_operators, parametric_reproduction
from .spectral import RHO_MARGIN, dominant_eigenvalue, spectral_radius

Array = NDArray[np.float64]

RATE_TOL = 1e-12
MAX_BISECTIONS = 200


@dataclass(frozen=True)
class ProfitBounds:
    r_technical: float
    r_feasible: float

    @property
    def gap(self) -> float:
        return self.r_technical - self.r_feasible


def _bisect(f: Callable[[float], float], lo: float, hi: float) -> float:
    """Root of an increasing ``f(r) - 1`` on ``[lo, hi]`` with ``f(lo) < 1 <= f(hi)``.

    Returns the lower bracket end, so ``f`` at the result never exceeds 1.
    """
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if f(mid) < 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= RATE_TOL:
            break
    return lo


def max_technical_rate(e: EconomySpec) -> float:
    """``r_A`` with ``rho(A_tilde + r_A K) = 1``."""
    if not e.K.any():
        raise ZeroCapitalStockError("K is identically zero: the technical maximum profit rate is unbounded")
    _, a_tilde = composite_inputs(e)
    rho0 = dominant_eigenvalue(a_tilde)
    if rho0 >= 1.0 - RHO_MARGIN:
        raise SpectralRadiusTooLargeError(f"Hawkins-Simon violated: rho(A_tilde) = {rho0:.10g}", radius=rho0)

    def rho(r: float) -> float:
        return dominant_eigenvalue(a_tilde + r * e.K)

    lo, hi = 0.0, 1e-3
    while rho(hi) <= 1.0:
        lo, hi = hi, 2.0 * hi
    return _bisect(rho, lo, hi)


def _rho_parametric(e: EconomySpec, r: float) -> float:
    try:
        return dominant_eigenvalue(parametric_reproduction(e, r))
    except RateBeyondTechnicalMaxError:
        return float("inf")


def max_feasible_rate(e: EconomySpec, *, r_technical: float | None = None) -> float:
    """``r*`` with ``rho(M(r*)) = 1``; requires ``rho(M0) < 1``."""
    ops = build_operators(e)
    rho0 = dominant_eigenvalue(ops.m0)
    if rho0 >= 1.0 - RHO_MARGIN:
        raise SurplusAbsentError(f"no surplus: rho(M0) = {rho0:.10g} is not below 1")
    r_a = max_technical_rate(e) if r_technical is None else r_technical
    return _bisect(lambda r: _rho_parametric(e, r), 0.0, r_a - RATE_TOL)


def profit_bounds(e: EconomySpec) -> ProfitBounds:
    r_a = max_technical_rate(e)
    return ProfitBounds(r_technical=r_a, r_feasible=max_feasible_rate(e, r_technical=r_a))


@dataclass(frozen=True, eq=False)
class PriceWageDomain:
    """Relative wages ``w`` (``w_1 = 1``) with ``w^T (I - M(r)) >= 0``."""

    r: float
    halfspace_matrix: Array
    rho: float
    degenerate: bool
    w_star: Array

    @property
    def m(self) -> Array:
        return np.eye(self.halfspace_matrix.shape[0]) - self.halfspace_matrix

    def contains(self, w: ArrayLike) -> MembershipResult:
        return membership(self.halfspace_matrix, np.asarray(w, dtype=float))


def price_wage_domain(e: EconomySpec, r: float, *, r_star: float | None = None) -> PriceWageDomain:
    if r < 0:
        raise DomainError(f"profit rate must be >= 0, got {r}")
    r_star = max_feasible_rate(e) if r_star is None else r_star
    if r > r_star + RHO_MARGIN:
        raise RateBeyondFeasibleMaxError(
            f"r = {r:.10g} exceeds the maximum feasible profit rate r* = {r_star:.10g}"
        )
    m = parametric_reproduction(e, r)
    perron = spectral_radius(m)
    return PriceWageDomain(
        r=r,
        halfspace_matrix=np.eye(e.n) - m,
        rho=perron.radius,
        degenerate=abs(perron.radius - 1.0) <= RHO_MARGIN,
        w_star=np.array(perron.left_vector),
    )


def sample_price_members(d: PriceWageDomain, count: int, seed: int) -> Array:
    """Normalized members ``w^T = q^T (I - M(r))^-1`` for random ``q >= 0``.

    Every member has this form, so the sample covers the whole domain
    (boundary included, via sparse ``q``).  A degenerate domain only has
    ``w_star``.
    """
    n = d.halfspace_matrix.shape[0]
    if d.degenerate:
        return np.tile(d.w_star, (count, 1))
    rng = np.random.default_rng(seed)
    q = rng.exponential(size=(count, n)) * (rng.uniform(size=(count, n)) > 0.3)
    dead = ~(q > 0).any(axis=1)
    q[dead, rng.integers(0, n, dead.sum())] = 1.0
    w = np.linalg.solve(d.halfspace_matrix.T, q.T).T
    return w / w[:, :1]


def boundary_point(d: PriceWageDomain) -> Array:
    """Push ``w_star`` along the most-slack coordinate (``j >= 2``) until a
    reproduction constraint binds."""
    h = d.halfspace_matrix
    w = np.array(d.w_star)
    slacks = w @ h
    k = 1 + int(np.argmax(slacks[1:]))
    falling = h[k] < 0
    t = np.min(slacks[falling] / -h[k, falling])
    w[k] += t
    return w


@dataclass(frozen=True, eq=False)
class DualityReport:
    r1: float
    r2: float
    samples: int
    included: int
    witness: Array
    witness_slacks_r1: Array
    witness_slacks_r2: Array

    @property
    def inclusion_holds(self) -> bool:
        return self.included == self.samples

    @property
    def strict(self) -> bool:
        on_boundary = self.witness_slacks_r1.min() >= -1e-12
        return bool(on_boundary and self.witness_slacks_r2.min() < -1e-12)


def duality_probe(e: EconomySpec, r1: float, r2: float, samples: int, *, seed: int = 0) -> DualityReport:
    """Check ``Theta(r2) ⊂ Theta(r1)`` on samples and find a point of
    ``Theta(r1)``'s boundary that ``Theta(r2)`` excludes."""
    if not 0.0 <= r1 < r2:
        raise BadRateOrderError(f"need 0 <= r1 < r2, got r1 = {r1}, r2 = {r2}")
    r_star = max_feasible_rate(e)
    if r2 > r_star + RHO_MARGIN:
        raise BadRateOrderError(f"r2 = {r2:.10g} exceeds r* = {r_star:.10g}")
    d1 = price_wage_domain(e, r1, r_star=r_star)
    d2 = price_wage_domain(e, r2, r_star=r_star)
    members = sample_price_members(d2, samples, seed)
    included = sum(d1.contains(w).member for w in members)
    witness = boundary_point(d1)
    return DualityReport(
        r1=r1,
        r2=r2,
        samples=samples,
        included=int(included),
        witness=witness,
        witness_slacks_r1=witness @ d1.halfspace_matrix,
        witness_slacks_r2=witness @ d2.halfspace_matrix,
    )


def sweep(e: EconomySpec, points: int = 21, *, r_star: float | None = None) -> list[tuple[float, float, bool]]:
    """``(r, rho(M(r)), degenerate)`` on an even grid over ``[0, r*]``."""
    r_star = max_feasible_rate(e) if r_star is None else r_star
    rows = []
    for r in np.linspace(0.0, r_star, points):
        rho = dominant_eigenvalue(parametric_reproduction(e, float(r)))
        rows.append((float(r), rho, abs(rho - 1.0) <= RHO_MARGIN))
    return rows


def sweep_csv(rows: list[tuple[float, float, bool]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["r", "rho_Mr", "domain_degenerate"])
    for r, rho, degenerate in rows:
        writer.writerow([f"{r:.10g}", f"{rho:.10g}", str(degenerate).lower()])
    return buf.getvalue()
