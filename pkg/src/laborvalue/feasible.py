"""The value-feasible domain of reduction coefficients.

The domain is ``{c > 0 : c_1 = 1, c^T (I - M0) >= 0}``.  This module builds
it from an :class:`OperatorSet`, answers membership queries, computes
sectoral exploitation rates, diagnoses existence/degeneracy, and exports the
two-dimensional ``c_1 = 1`` slice for three-sector economies.
"""

from __future__ import annotations

import io
import csv
import itertools
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .economy import EconomySpec
from .errors import (
    DimensionNot3Error,
    EmptySliceError,
    NonPositiveReductionError,
    NormalizationViolatedError,
    NotStrictlyPositiveError,
    ShapeMismatchError,
)
from .operators import OperatorSet, build_operators
from .spectral import RHO_MARGIN, spectral_radius

Array = NDArray[np.float64]

SLACK_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class MembershipResult:
    member: bool
    strict: bool
    slacks: Array


@dataclass(frozen=True, eq=False)
class ValueFeasibleDomain:
    """Half-space form ``c^T H >= 0`` with ``H = I - M0`` plus the
    per-coordinate box implied by the diagonal of ``M0``."""

    halfspace_matrix: Array
    lower_bounds: Array
    upper_bounds: Array
    lambda_star: float
    y_star: Array
    e_star: float
    degenerate: bool

    @property
    def n(self) -> int:
        return self.halfspace_matrix.shape[0]

    @property
    def empty(self) -> bool:
        return self.lambda_star > 1.0 + RHO_MARGIN


def _as_positive(c: ArrayLike, n: int) -> Array:
    c = np.asarray(c, dtype=float)
    if c.shape != (n,):
        raise ShapeMismatchError(f"reduction vector must have length {n}, got shape {c.shape}")
    if not (c > 0).all():
        raise NonPositiveReductionError("reduction coefficients must be strictly positive")
    return c


def membership(halfspace: Array, c: Array) -> MembershipResult:
    slacks = c @ halfspace
    lowest = float(slacks.min())
    return MembershipResult(member=lowest >= -SLACK_TOL, strict=lowest > SLACK_TOL, slacks=slacks)


def box_bounds(m: Array) -> tuple[Array, Array]:
    """Per-coordinate bounds of the normalized domain of ``c^T (I - m) >= 0``.

    ``c_j >= m[0, j] / (1 - m[j, j])`` and ``c_j <= (1 - m[0, 0]) / m[j, 0]``
    for ``j >= 2``; the first coordinate is pinned to 1.
    """
    diag = np.diag(m)
    with np.errstate(divide="ignore", invalid="ignore"):
        lower = m[0, :] / (1.0 - diag)
        upper = (1.0 - m[0, 0]) / m[:, 0]
    lower[0] = upper[0] = 1.0
    return lower, upper


def build_value_domain(ops: OperatorSet) -> ValueFeasibleDomain:
    m0 = ops.m0
    if not (m0 > 0).all():
        raise NotStrictlyPositiveError(
            "M0 has zero entries; A_tilde must be irreducible for the domain to be well defined"
        )
    perron = spectral_radius(m0)
    lam = perron.radius
    lower, upper = box_bounds(m0)
    return ValueFeasibleDomain(
        halfspace_matrix=np.eye(ops.n) - m0,
        lower_bounds=lower,
        upper_bounds=upper,
        lambda_star=lam,
        y_star=np.array(perron.left_vector),
        e_star=(1.0 - lam) / lam,
        degenerate=abs(lam - 1.0) <= RHO_MARGIN,
    )


def contains(d: ValueFeasibleDomain, c: ArrayLike, *, normalized: bool = False) -> MembershipResult:
    c = _as_positive(c, d.n)
    if normalized and abs(c[0] - 1.0) > SLACK_TOL:
        raise NormalizationViolatedError(f"normalized mode needs c_1 = 1, got {c[0]!r}")
    return membership(d.halfspace_matrix, c)


def exploitation_rates(ops: OperatorSet, c: ArrayLike) -> Array:
    """``e_j = (c_j - (c^T M0)_j) / (c^T M0)_j``."""
    c = _as_positive(c, ops.n)
    sigma = c @ ops.m0
    return (c - sigma) / sigma


def sample_members(d: ValueFeasibleDomain, count: int, seed: int, *, max_draws: int = 10_000_000) -> Array:
    """Uniform rejection sample of normalized members, drawn in the bound box.

    Returns fewer than ``count`` rows only if ``max_draws`` is exhausted.
    """
    rng = np.random.default_rng(seed)
    out: list[Array] = []
    drawn = 0
    batch = max(256, 4 * count)
    while len(out) < count and drawn < max_draws:
        pts = rng.uniform(d.lower_bounds, d.upper_bounds, size=(batch, d.n))
        pts[:, 0] = 1.0
        ok = (pts @ d.halfspace_matrix).min(axis=1) >= -SLACK_TOL
        out.extend(pts[ok])
        drawn += batch
    return np.array(out[:count]).reshape(-1, d.n)


@dataclass(frozen=True, eq=False)
class ExistenceReport:
    """The three equivalent surplus conditions evaluated independently."""

    interior_nonempty: bool
    witness: Array
    witness_slacks: Array
    rho_m0: float
    reproduction: bool
    rho_extended: float
    surplus: bool
    boundary: bool
    singleton: Array | None

    @property
    def agree(self) -> bool:
        return self.interior_nonempty == self.reproduction == self.surplus

    def to_dict(self) -> dict:
        return {
            "interior_nonempty": self.interior_nonempty,
            "rho_m0": self.rho_m0,
            "reproduction": self.reproduction,
            "rho_extended": self.rho_extended,
            "surplus": self.surplus,
            "boundary": self.boundary,
            "agree": self.agree,
            "witness": self.witness.tolist(),
            "singleton": None if self.singleton is None else self.singleton.tolist(),
        }


def existence_diagnosis(e: EconomySpec, ops: OperatorSet | None = None) -> ExistenceReport:
    ops = ops if ops is not None else build_operators(e)
    perron = spectral_radius(ops.m0)
    y = np.array(perron.left_vector)
    slacks = y @ (np.eye(ops.n) - ops.m0)
    # Slack relative to the witness itself equals 1 - rho(M0) for the Perron point.
    relative = slacks / y
    interior = bool(relative.min() > RHO_MARGIN)
    rho_m0 = perron.radius
    boundary = abs(rho_m0 - 1.0) <= RHO_MARGIN
    return ExistenceReport(
        interior_nonempty=interior,
        witness=y,
        witness_slacks=slacks,
        rho_m0=rho_m0,
        reproduction=rho_m0 < 1.0 - RHO_MARGIN,
        rho_extended=ops.rho_a_hat,
        surplus=ops.rho_a_hat < 1.0 - RHO_MARGIN,
        boundary=boundary,
        singleton=y if boundary else None,
    )


def slice_2d(d: ValueFeasibleDomain) -> Array:
    """Vertices ``(c_2, c_3)`` of the ``c_1 = 1`` slice for ``n = 3``.

    Counter-clockwise and closed (first vertex repeated at the end).  A
    degenerate domain yields the single point ``(y*_2, y*_3)``.
    """
    if d.n != 3:
        raise DimensionNot3Error(f"slice_2d needs n = 3, got n = {d.n}")
    if d.empty:
        raise EmptySliceError(f"rho(M0) = {d.lambda_star:.10g} > 1: the value-feasible domain is empty")
    if d.degenerate:
        return d.y_star[np.newaxis, 1:].copy()

    h = d.halfspace_matrix
    # Half-planes a . (c2, c3) + b >= 0: the three reproduction constraints, then the box.
    planes = [(h[1:, j], h[0, j]) for j in range(3)]
    lo, hi = d.lower_bounds[1:], d.upper_bounds[1:]
    planes += [
        (np.array([1.0, 0.0]), -lo[0]), (np.array([-1.0, 0.0]), hi[0]),
        (np.array([0.0, 1.0]), -lo[1]), (np.array([0.0, -1.0]), hi[1]),
    ]
    normals = np.array([a for a, _ in planes])
    offsets = np.array([b for _, b in planes])
    scale = np.abs(normals).sum(axis=1) * max(1.0, float(np.abs(hi).max())) + np.abs(offsets)

    points: list[Array] = []
    for (a1, b1), (a2, b2) in itertools.combinations(planes, 2):
        mat = np.array([a1, a2])
        if abs(np.linalg.det(mat)) < 1e-14:
            continue
        p = np.linalg.solve(mat, [-b1, -b2])
        if (normals @ p + offsets >= -1e-12 * scale).all():
            if not any(np.abs(p - q).max() <= 1e-11 * max(1.0, np.abs(q).max()) for q in points):
                points.append(p)

    pts = np.array(points)
    centre = pts.mean(axis=0)
    order = np.argsort(np.arctan2(pts[:, 1] - centre[1], pts[:, 0] - centre[0]))
    pts = pts[order]
    return np.vstack([pts, pts[:1]])


def polygon_contains(vertices: Array, point: ArrayLike, *, strict: bool = True) -> bool:
    """Point-in-convex-polygon test for a closed counter-clockwise vertex list."""
    point = np.asarray(point, dtype=float)
    v = np.asarray(vertices, dtype=float)
    if len(v) < 4:
        return bool(not strict and len(v) >= 1 and np.allclose(v[0], point))
    edges = v[1:] - v[:-1]
    rel = point - v[:-1]
    cross = edges[:, 0] * rel[:, 1] - edges[:, 1] * rel[:, 0]
    return bool((cross > 0).all() if strict else (cross >= 0).all())


def slice_csv(vertices: Array) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["vertex", "c2", "c3"])
    for i, (c2, c3) in enumerate(vertices):
        writer.writerow([i, f"{c2:.10g}", f"{c3:.10g}"])
    return buf.getvalue()
