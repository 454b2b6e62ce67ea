"""Skilled-labor reduction coefficients, reproduction feasibility and the
value-price transformation for linear production economies."""

from .economy import (
    EconomySpec,
    ValidationReport,
    boundary_economy,
    load_reference_economy,
    load_economy,
    monetary_transform,
    random_economy,
    scale_consumption,
    validate,
)
from . import errors
from .errors import LaborValueError
from .feasible import (
    ExistenceReport,
    MembershipResult,
    ValueFeasibleDomain,
    build_value_domain,
    contains,
    existence_diagnosis,
    exploitation_rates,
    slice_2d,
)
from .operators import OperatorSet, build_operators, price_system, value_system, verify_identity
from .profit import (
    ProfitBounds,
    duality_probe,
    max_feasible_rate,
    max_technical_rate,
    price_wage_domain,
    profit_bounds,
    sweep,
)
from .spectral import SpectralResult, dominant_eigenvalue, spectral_radius
from .transform import (
    CompatibilityInterval,
    MacroAggregates,
    TransformSolution,
    critical_shares,
    hyperplane_normal,
    melt,
    profit_share,
    solve_absolute,
    solve_relative,
    total_surplus,
    total_value,
    verify_equalities,
)

__all__ = [
    "CompatibilityInterval",
    "EconomySpec",
    "ExistenceReport",
    "LaborValueError",
    "MacroAggregates",
    "MembershipResult",
    "OperatorSet",
    "ProfitBounds",
    "SpectralResult",
    "TransformSolution",
    "ValidationReport",
    "ValueFeasibleDomain",
    "boundary_economy",
    "build_operators",
    "build_value_domain",
    "contains",
    "critical_shares",
    "dominant_eigenvalue",
    "duality_probe",
    "errors",
    "existence_diagnosis",
    "exploitation_rates",
    "hyperplane_normal",
    "load_reference_economy",
    "load_economy",
    "max_feasible_rate",
    "max_technical_rate",
    "melt",
    "monetary_transform",
    "price_system",
    "price_wage_domain",
    "profit_bounds",
    "profit_share",
    "random_economy",
    "scale_consumption",
    "slice_2d",
    "solve_absolute",
    "solve_relative",
    "spectral_radius",
    "sweep",
    "total_surplus",
    "total_value",
    "validate",
    "value_system",
    "verify_equalities",
    "verify_identity",
]

__version__ = "0.1.0"
