"""Total value/surplus, the MELT, macro profit share, the second-equality
hyperplane, critical profit shares and the two transformation solvers.

Both solvers work in slack space ``q^T = c^T (I - M0)``.  There the
hyperplane becomes ``q^T S_hat (A_hat x - (1 - gamma) x) = 0`` and the
value-feasible domain becomes the nonnegative orthant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .economy import EconomySpec
from .errors import (
    DegenerateCollinearityError,
    DimensionNot3Error,
    DomainError,
    InfeasibleLPError,
    NonPositiveInputError,
    NonPositiveWageError,
    OutsideCompatibilityIntervalError,
    ShapeMismatchError,
    ShareOutsideConeError,
    SurplusAbsentError,
)
from .feasible import exploitation_rates
from .operators import OperatorSet, build_operators, technical_inverse

Array = NDArray[np.float64]


@dataclass(frozen=True)
class MacroAggregates:
    F: float
    S: float
    P: float
    Pi: float
    kappa: float
    gamma: float
    mu: float | None = None


@dataclass(frozen=True, eq=False)
class CompatibilityInterval:
    per_sector: Array
    gamma_min: float
    gamma_max: float

    def contains(self, gamma: float, *, strict: bool = False) -> bool:
        if strict:
            return self.gamma_min < gamma < self.gamma_max
        return self.gamma_min <= gamma <= self.gamma_max

    def to_dict(self) -> dict[str, Any]:
        return {
            "per_sector": self.per_sector.tolist(),
            "gamma_min": self.gamma_min,
            "gamma_max": self.gamma_max,
        }


@dataclass(frozen=True, eq=False)
class TransformSolution:
    c_star: Array
    q_star: Array
    aggregates: MacroAggregates
    residual_eq1: float
    residual_eq2: float
    mode: str
    exploitation_rates: Array

    def to_dict(self) -> dict[str, Any]:
        agg = self.aggregates
        out = {
            "c_star": self.c_star.tolist(),
            "kappa": agg.kappa,
            "gamma": agg.gamma,
            "F": agg.F,
            "S": agg.S,
            "P": agg.P,
            "Pi": agg.Pi,
            "residual_eq1": self.residual_eq1,
            "residual_eq2": self.residual_eq2,
            "mode": self.mode,
            "exploitation_rates": self.exploitation_rates.tolist(),
        }
        if agg.mu is not None:
            out["mu"] = agg.mu
        return out


def _positive(v: ArrayLike, n: int, what: str, error: type[Exception] = NonPositiveInputError) -> Array:
    v = np.asarray(v, dtype=float)
    if v.shape != (n,):
        raise ShapeMismatchError(f"{what} must have length {n}, got shape {v.shape}")
    if not (v > 0).all():
        raise error(f"{what} must be strictly positive")
    return v


def _require_surplus(ops: OperatorSet) -> Array:
    if ops.s_hat is None:
        raise SurplusAbsentError(
            f"no physical surplus: rho(A_tilde + B L) = {ops.rho_a_hat:.10g}, S_hat is unavailable"
        )
    return ops.s_hat


# -- aggregates --------------------------------------------------------------


def total_value(ops: OperatorSet, c: ArrayLike, x: ArrayLike) -> float:
    """``F(c) = c^T S x`` in hours."""
    c = _positive(c, ops.n, "c")
    x = _positive(x, ops.n, "x")
    return float(c @ ops.s @ x)


def total_surplus_forms(ops: OperatorSet, c: ArrayLike, x: ArrayLike) -> tuple[float, float]:
    """``c^T S (I - A_hat) x`` and ``c^T L x - c^T M0 L x``; equal in exact arithmetic."""
    c = _positive(c, ops.n, "c")
    x = _positive(x, ops.n, "x")
    net = x - ops.a_hat @ x
    lx = ops.labor * x
    return float(c @ ops.s @ net), float(c @ lx - c @ ops.m0 @ lx)


def total_surplus(ops: OperatorSet, c: ArrayLike, x: ArrayLike) -> float:
    return total_surplus_forms(ops, c, x)[0]


def relative_total_price(e: EconomySpec, w_rel: ArrayLike, r: float) -> float:
    """``P_rel(r) = w_rel^T L (I - A_tilde - r K)^-1 x``."""
    w_rel = _positive(w_rel, e.n, "w_rel", NonPositiveWageError)
    return float((w_rel * e.labor) @ technical_inverse(e, r) @ e.x)


def profit_share(e: EconomySpec, w_rel: ArrayLike, r: float) -> float:
    """Total profit over total price of production at rate ``r``.

    Always below 1: the price equation adds the positive wage bill to
    profits.
    """
    w_rel = _positive(w_rel, e.n, "w_rel", NonPositiveWageError)
    prices = (w_rel * e.labor) @ technical_inverse(e, r)
    return float(r * (prices @ e.K @ e.x) / (prices @ e.x))


def melt(F: float, P_rel: float) -> float:
    """Monetary expression of labor time, ``kappa = F / P_rel``."""
    if not (F > 0 and P_rel > 0):
        raise NonPositiveInputError(f"MELT needs F > 0 and P_rel > 0, got F = {F}, P_rel = {P_rel}")
    return F / P_rel


# -- hyperplane and compatibility interval -----------------------------------


def _check_share(gamma: float) -> None:
    if not 0.0 < gamma < 1.0:
        raise DomainError(f"profit share must lie in (0, 1), got {gamma}")


def hyperplane_normal(ops: OperatorSet, x: ArrayLike, gamma: float) -> Array:
    """``eta = S [(A_tilde + B L) x - (1 - gamma) x]``; with the first equality
    in force, the second holds iff ``c . eta = 0``."""
    _check_share(gamma)
    x = _positive(x, ops.n, "x")
    return ops.s @ (ops.a_hat @ x - (1.0 - gamma) * x)


def slack_space_normal(ops: OperatorSet, x: ArrayLike, gamma: float) -> Array:
    """The same hyperplane in slack coordinates: ``S_hat [A_hat x - (1 - gamma) x]``."""
    _check_share(gamma)
    s_hat = _require_surplus(ops)
    x = _positive(x, ops.n, "x")
    return s_hat @ (ops.a_hat @ x - (1.0 - gamma) * x)


def critical_shares(ops: OperatorSet, x: ArrayLike) -> CompatibilityInterval:
    """``gamma_i = 1 - [S_hat A_hat x]_i / [S_hat x]_i`` and their range."""
    s_hat = _require_surplus(ops)
    x = _positive(x, ops.n, "x")
    per_sector = 1.0 - (s_hat @ ops.a_hat @ x) / (s_hat @ x)
    return CompatibilityInterval(per_sector, float(per_sector.min()), float(per_sector.max()))


def cone_ratios(ops: OperatorSet, x: ArrayLike) -> Array:
    """``[L x]_i / [S_hat x]_i``: slopes of the rays generating the two-equality cone."""
    s_hat = _require_surplus(ops)
    x = _positive(x, ops.n, "x")
    return (ops.labor * x) / (s_hat @ x)


# -- max-min-slack selection -------------------------------------------------


def _max_min_slack(eta: Array, norm: Array, to_c: Callable[[Array], Array]) -> Array:
    """Maximise ``t`` subject to ``q >= t 1``, ``q . eta = 0``, ``q . norm = 1``.

    Writing ``q = t 1 + s`` with ``s >= 0`` leaves two equality rows, so a
    basic solution has ``t`` plus at most one ``s_k`` basic.  Enumerating
    those ``n`` vertices solves the LP exactly.  Ties go to the
    lexicographically smallest ``c``.
    """
    n = eta.size
    sum_eta, sum_norm = float(eta.sum()), float(norm.sum())
    tiny = 1e-14 * float(np.abs(eta).max() + np.abs(norm).max())
    candidates: list[Array] = []
    if abs(sum_eta) <= tiny * n:
        candidates.append(np.full(n, 1.0 / sum_norm))
    for k in range(n):
        det = sum_eta * norm[k] - eta[k] * sum_norm
        if abs(det) <= tiny * sum_norm:
            continue
        t, s = -eta[k] / det, sum_eta / det
        if s < 0:
            continue
        q = np.full(n, t)
        q[k] += s
        candidates.append(q)
    if not candidates:
        raise InfeasibleLPError("no basic feasible point: the hyperplane is degenerate")

    best = max(float(q.min()) for q in candidates)
    if best < -1e-12 * float(np.abs(candidates[0]).max()):
        raise InfeasibleLPError(
            f"best attainable minimum slack is {best:.3g} < 0: the hyperplane misses the domain"
        )
    ties = [q for q in candidates if q.min() >= best - 1e-12 * max(abs(best), 1e-300)]
    return min(ties, key=lambda q: tuple(to_c(q)))


def _slack_frame(ops: OperatorSet) -> tuple[Array, Array]:
    h = np.eye(ops.n) - ops.m0
    first_column = np.linalg.solve(h, np.eye(ops.n)[:, 0])
    return h, first_column


def intersect_hyperplane(ops: OperatorSet, x: ArrayLike, gamma: float) -> Array:
    """Max-min-slack point of ``{c_1 = 1, c . eta(gamma) = 0, c^T (I - M0) >= 0}``."""
    interval = critical_shares(ops, x)
    if not interval.contains(gamma):
        raise OutsideCompatibilityIntervalError(gamma, interval.gamma_min, interval.gamma_max)
    h, first_column = _slack_frame(ops)
    eta_q = slack_space_normal(ops, x, gamma)
    q = _max_min_slack(eta_q, first_column, lambda q: np.linalg.solve(h.T, q))
    c = np.linalg.solve(h.T, q)
    c[0] = 1.0
    return c


def hyperplane_segment(ops: OperatorSet, x: ArrayLike, gamma: float) -> Array:
    """For ``n = 3``: endpoints ``(c_2, c_3)`` of the hyperplane line inside
    the ``c_1 = 1`` slice, computed by clipping the line against each
    reproduction constraint."""
    if ops.n != 3:
        raise DimensionNot3Error(f"hyperplane_segment needs n = 3, got n = {ops.n}")
    eta = hyperplane_normal(ops, x, gamma)
    # eta_0 + eta_1 c2 + eta_2 c3 = 0 -> p(tau) = base + tau * direction
    normal = eta[1:]
    base = -eta[0] * normal / (normal @ normal)
    direction = np.array([-normal[1], normal[0]])
    h = np.eye(3) - ops.m0
    lo, hi = -np.inf, np.inf
    for j in range(3):
        alpha = h[0, j] + h[1:, j] @ base
        beta = h[1:, j] @ direction
        if beta > 0:
            lo = max(lo, -alpha / beta)
        elif beta < 0:
            hi = min(hi, -alpha / beta)
        elif alpha < 0:
            lo, hi = np.inf, -np.inf
    if not lo <= hi:
        raise InfeasibleLPError("the hyperplane line misses the slice polygon")
    return np.array([base + lo * direction, base + hi * direction])


# -- solvers -----------------------------------------------------------------


def evaluate(
    e: EconomySpec, c: ArrayLike, w_rel: ArrayLike, r: float, *, ops: OperatorSet | None = None
) -> TransformSolution:
    """Aggregates and both equality residuals for a given reduction vector
    once the MELT aligns total price with total value."""
    ops = ops if ops is not None else build_operators(e)
    c = _positive(c, e.n, "c")
    w_rel = _positive(w_rel, e.n, "w_rel", NonPositiveWageError)
    F = total_value(ops, c, e.x)
    S = total_surplus(ops, c, e.x)
    inverse = technical_inverse(e, r)
    p_rel = (w_rel * e.labor) @ inverse
    kappa = melt(F, float(p_rel @ e.x))
    p = kappa * p_rel
    P = float(p @ e.x)
    Pi = float(r * (p @ e.K @ e.x))
    return TransformSolution(
        c_star=c,
        q_star=c @ (np.eye(e.n) - ops.m0),
        aggregates=MacroAggregates(F=F, S=S, P=P, Pi=Pi, kappa=kappa, gamma=Pi / P),
        residual_eq1=abs(P - F),
        residual_eq2=abs(Pi - S),
        mode="relative",
        exploitation_rates=exploitation_rates(ops, c),
    )


def solve_relative(
    e: EconomySpec, w_rel: ArrayLike, r: float, *, ops: OperatorSet | None = None
) -> TransformSolution:
    """Reduction vector with ``c_1 = 1`` satisfying both macro equalities at
    profit rate ``r`` under relative wages ``w_rel``."""
    ops = ops if ops is not None else build_operators(e)
    _require_surplus(ops)
    gamma = profit_share(e, w_rel, r)
    c = intersect_hyperplane(ops, e.x, gamma)
    return evaluate(e, c, w_rel, r, ops=ops)


def solve_absolute(
    e: EconomySpec,
    P_star: float,
    Pi_star: float,
    *,
    reference: ArrayLike | None = None,
    ops: OperatorSet | None = None,
) -> TransformSolution:
    """Reduction vector without a MELT or ``c_1 = 1``: ``F(c) = P*`` and
    ``S(c) = Pi*`` directly.

    The point selected maximises the smallest slack per unit of ``c_1``
    (a linear-fractional program, linearised by scaling to ``c_1 = 1``).
    This is the rule the relative solver uses, so the two solutions are
    proportional.  ``reference`` is an optional relative solution used
    to record ``mu = P* / F(reference)``.
    """
    if not (P_star > 0 and Pi_star > 0):
        raise NonPositiveInputError(f"need P* > 0 and Pi* > 0, got {P_star}, {Pi_star}")
    ops = ops if ops is not None else build_operators(e)
    s_hat = _require_surplus(ops)
    interval = critical_shares(ops, e.x)
    if interval.gamma_max - interval.gamma_min <= 1e-12:
        raise DegenerateCollinearityError(
            "S_hat x and L x are collinear: the two equality hyperplanes are parallel"
        )
    ratio = Pi_star / P_star
    if not interval.contains(ratio, strict=True):
        raise ShareOutsideConeError(ratio, interval.gamma_min, interval.gamma_max)

    v_price = s_hat @ e.x
    v_profit = ops.labor * e.x
    h, first_column = _slack_frame(ops)
    q_unit = _max_min_slack(ratio * v_price - v_profit, first_column, lambda q: np.linalg.solve(h.T, q))
    q = q_unit * (P_star / float(q_unit @ v_price))
    c = np.linalg.solve(h.T, q)

    F = total_value(ops, c, e.x)
    S = total_surplus(ops, c, e.x)
    mu = None
    if reference is not None:
        mu = P_star / total_value(ops, reference, e.x)
    return TransformSolution(
        c_star=c,
        q_star=c @ h,
        aggregates=MacroAggregates(F=F, S=S, P=P_star, Pi=Pi_star, kappa=1.0, gamma=ratio, mu=mu),
        residual_eq1=abs(F - P_star),
        residual_eq2=abs(S - Pi_star),
        mode="absolute",
        exploitation_rates=exploitation_rates(ops, c),
    )


@dataclass(frozen=True)
class EqualityReport:
    F: float
    S: float
    P: float
    Pi: float
    abs_eq1: float
    abs_eq2: float

    @property
    def rel_eq1(self) -> float:
        return self.abs_eq1 / abs(self.F)

    @property
    def rel_eq2(self) -> float:
        return self.abs_eq2 / abs(self.S) if self.S else float("inf")


def verify_equalities(e: EconomySpec, sol: TransformSolution, w_rel: ArrayLike, r: float) -> EqualityReport:
    """Recompute every aggregate from scratch using the solution's ``c`` and
    ``kappa``."""
    ops = build_operators(e)
    w_rel = _positive(w_rel, e.n, "w_rel", NonPositiveWageError)
    F = total_value(ops, sol.c_star, e.x)
    S = total_surplus(ops, sol.c_star, e.x)
    p = sol.aggregates.kappa * (w_rel * e.labor) @ technical_inverse(e, r)
    P = float(p @ e.x)
    Pi = float(r * (p @ e.K @ e.x))
    return EqualityReport(F=F, S=S, P=P, Pi=Pi, abs_eq1=abs(P - F), abs_eq2=abs(Pi - S))
