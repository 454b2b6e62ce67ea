"""Physical input-output economy: data model, JSON ingestion, assumption
checks, composite inputs, monetary re-measurement and a random generator."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import IO, Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import (
    DomainError,
    NegativeEntryError,
    NonPositivePriceError,
    ParseError,
    ShapeMismatchError,
)
from .spectral import RHO_MARGIN, dominant_eigenvalue, is_irreducible

Array = NDArray[np.float64]

_KEYS = ("sectors", "A", "K", "delta", "labor", "B", "x")


def _frozen(a: Array) -> Array:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class EconomySpec:
    """A closed ``n``-sector economy without joint production.

    Matrices are row-major: ``A[i][j]`` is commodity ``i`` used per unit of
    commodity ``j``; column ``j`` of ``B`` is the hourly basket of a sector-``j``
    worker.  Hard errors (shape, sign, zero labor, ``delta`` outside ``(0, 1]``)
    are raised on construction.
    """

    names: tuple[str, ...]
    A: Array
    K: Array
    delta: Array
    labor: Array
    B: Array
    x: Array = field(repr=False)

    def __post_init__(self) -> None:
        n = len(self.names)
        if n < 1:
            raise ShapeMismatchError("economy needs at least one sector")
        for name in ("A", "K", "B"):
            a = np.asarray(getattr(self, name), dtype=float)
            if a.shape != (n, n):
                raise ShapeMismatchError(f"{name} must be {n}x{n}, got shape {a.shape}")
            object.__setattr__(self, name, _frozen(a))
        for name in ("delta", "labor", "x"):
            v = np.asarray(getattr(self, name), dtype=float)
            if v.shape != (n,):
                raise ShapeMismatchError(f"{name} must have length {n}, got shape {v.shape}")
            object.__setattr__(self, name, _frozen(v))
        object.__setattr__(self, "names", tuple(str(s) for s in self.names))

        for name in ("A", "K", "B", "delta", "labor", "x"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise DomainError(f"{name} contains non-finite numbers")
        for name in ("A", "K", "B"):
            a = getattr(self, name)
            if (a < 0).any():
                i, j = np.argwhere(a < 0)[0]
                raise NegativeEntryError(f"{name}[{i}][{j}] = {a[i, j]} is negative")
        if not ((self.delta > 0) & (self.delta <= 1)).all():
            raise DomainError(f"depreciation rates must lie in (0, 1], got {self.delta.tolist()}")
        if not (self.labor > 0).all():
            raise DomainError("every sector requires direct labor: labor coefficients must be > 0")
        if not (self.x > 0).all():
            raise DomainError("gross output x must be strictly positive")

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def L(self) -> Array:
        return np.diag(self.labor)

    def replace(self, **changes: Any) -> EconomySpec:
        fields = dict(
            names=self.names, A=self.A, K=self.K, delta=self.delta,
            labor=self.labor, B=self.B, x=self.x,
        )
        fields.update(changes)
        return EconomySpec(**fields)

    def to_dict(self) -> dict[str, Any]:
        return {
            "sectors": list(self.names),
            "A": self.A.tolist(),
            "K": self.K.tolist(),
            "delta": self.delta.tolist(),
            "labor": self.labor.tolist(),
            "B": self.B.tolist(),
            "x": self.x.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _grid(doc: dict, key: str, n: int) -> list:
    value = doc[key]
    if not isinstance(value, list) or len(value) != n or any(
        not isinstance(row, list) or len(row) != n for row in value
    ):
        raise ShapeMismatchError(f"{key} must be a {n}x{n} array of arrays")
    return value


def _vector(doc: dict, key: str, n: int) -> list:
    value = doc[key]
    if not isinstance(value, list) or len(value) != n or any(isinstance(v, list) for v in value):
        raise ShapeMismatchError(f"{key} must be an array of length {n}")
    return value


def load_economy(document: bytes | str | IO[Any]) -> EconomySpec:
    """Parse the economy JSON document (bytes, text or a readable stream)."""
    if hasattr(document, "read"):
        document = document.read()
    try:
        doc = json.loads(document)
    except (json.JSONDecodeError, UnicodeDecodeError, TypeError) as exc:
        raise ParseError(f"not a valid JSON document: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("economy document must be a JSON object")
    missing = [k for k in _KEYS if k not in doc]
    if missing:
        raise ParseError(f"economy document is missing keys: {', '.join(missing)}")

    names = doc["sectors"]
    if not isinstance(names, list) or not names:
        raise ShapeMismatchError("sectors must be a non-empty array of labels")
    n = len(names)
    raw = {k: _grid(doc, k, n) for k in ("A", "K", "B")}
    raw.update({k: _vector(doc, k, n) for k in ("delta", "labor", "x")})
    try:
        arrays = {k: np.array(v, dtype=float) for k, v in raw.items()}
    except (TypeError, ValueError) as exc:
        raise ParseError(f"non-numeric entry: {exc}") from None
    return EconomySpec(names=tuple(names), **arrays)


def load_reference_economy() -> EconomySpec:
    """The bundled three-sector example economy."""
    text = resources.files("laborvalue").joinpath("data/reference_economy.json").read_bytes()
    return load_economy(text)


def composite_inputs(e: EconomySpec) -> tuple[Array, Array]:
    """Depreciation matrix ``D = K diag(delta)`` and ``A_tilde = A + D``."""
    d = e.K * e.delta[np.newaxis, :]
    return d, e.A + d


def extended_matrix(e: EconomySpec) -> Array:
    """``A_tilde + B L``: material inputs plus workers' subsistence advance."""
    return composite_inputs(e)[1] + e.B * e.labor[np.newaxis, :]


def labor_reproduction(e: EconomySpec) -> Array:
    """``M0 = L (I - A_tilde)^-1 B`` by a direct solve."""
    _, a_tilde = composite_inputs(e)
    return e.labor[:, np.newaxis] * np.linalg.solve(np.eye(e.n) - a_tilde, e.B)


@dataclass(frozen=True)
class ValidationReport:
    hawkins_simon: bool
    rho_a_tilde: float
    irreducible: bool
    labor_positive: bool
    consumption_columns_ok: bool
    surplus: bool
    rho_extended: float
    reproduction: bool
    rho_m0: float | None
    messages: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return (
            self.hawkins_simon and self.irreducible and self.labor_positive
            and self.consumption_columns_ok
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "hawkins_simon": self.hawkins_simon,
            "rho_a_tilde": self.rho_a_tilde,
            "irreducible": self.irreducible,
            "labor_positive": self.labor_positive,
            "consumption_columns_ok": self.consumption_columns_ok,
            "surplus": self.surplus,
            "rho_extended": self.rho_extended,
            "reproduction": self.reproduction,
            "rho_m0": self.rho_m0,
            "messages": list(self.messages),
        }


def validate(e: EconomySpec) -> ValidationReport:
    """Check the technology and consumption assumptions and the surplus
    conditions; economic findings are reported, never raised."""
    messages: list[str] = []
    _, a_tilde = composite_inputs(e)

    rho_a = dominant_eigenvalue(a_tilde)
    hawkins_simon = rho_a < 1.0 - RHO_MARGIN
    if not hawkins_simon:
        messages.append(f"Hawkins-Simon violated: rho(A_tilde) = {rho_a:.10g}")

    irreducible = is_irreducible(a_tilde)
    if not irreducible:
        messages.append("A_tilde is reducible: some sectors have no direct or indirect linkage")
    if not is_irreducible(e.A):
        messages.append("note: A alone is reducible (only A_tilde is required to be irreducible)")

    labor_positive = bool((e.labor > 0).all())
    zero_cols = [j for j in range(e.n) if not (e.B[:, j] > 0).any()]
    consumption_ok = not zero_cols
    if zero_cols:
        messages.append(f"consumption matrix B has all-zero columns: {zero_cols}")

    rho_ext = dominant_eigenvalue(extended_matrix(e))
    surplus = rho_ext < 1.0 - RHO_MARGIN

    rho_m0: float | None = None
    reproduction = False
    if hawkins_simon:
        rho_m0 = dominant_eigenvalue(labor_reproduction(e))
        reproduction = rho_m0 < 1.0 - RHO_MARGIN
        if surplus != reproduction:
            messages.append(
                f"surplus test (rho = {rho_ext:.12g}) and reproduction test "
                f"(rho = {rho_m0:.12g}) disagree; the economy sits at the "
                "numerical tolerance of the zero-surplus boundary"
            )
    if not surplus:
        messages.append(f"no physical surplus: rho(A_tilde + B L) = {rho_ext:.10g}")

    return ValidationReport(
        hawkins_simon=hawkins_simon,
        rho_a_tilde=rho_a,
        irreducible=irreducible,
        labor_positive=labor_positive,
        consumption_columns_ok=consumption_ok,
        surplus=surplus,
        rho_extended=rho_ext,
        reproduction=reproduction,
        rho_m0=rho_m0,
        messages=tuple(messages),
    )


def monetary_transform(e: EconomySpec, p: ArrayLike) -> EconomySpec:
    """Re-measure every commodity in currency at prices ``p``.

    Flows become ``P A P^-1`` and ``P K P^-1``, labor ``L P^-1``, baskets
    ``P B`` and output ``P x``.  Depreciation rates are unit-free.
    """
    p = np.asarray(p, dtype=float)
    if p.shape != (e.n,):
        raise ShapeMismatchError(f"price vector must have length {e.n}")
    if not (p > 0).all():
        raise NonPositivePriceError("prices must be strictly positive")
    similar = p[:, np.newaxis] / p[np.newaxis, :]
    return e.replace(
        A=e.A * similar,
        K=e.K * similar,
        labor=e.labor / p,
        B=p[:, np.newaxis] * e.B,
        x=p * e.x,
    )


def scale_consumption(e: EconomySpec, factor: float) -> EconomySpec:
    """Same economy with every subsistence basket multiplied by ``factor``."""
    return e.replace(B=e.B * factor)


def boundary_economy(e: EconomySpec) -> EconomySpec:
    """Rescale ``B`` so that ``rho(M0) = 1`` exactly (``M0`` is linear in ``B``)."""
    return scale_consumption(e, 1.0 / dominant_eigenvalue(labor_reproduction(e)))


def random_economy(n: int, seed: int) -> EconomySpec:
    """Deterministic random economy with a physical surplus.

    Entries are uniform with some zeros; an ``eps = 1e-3`` Hamiltonian cycle
    keeps ``A`` irreducible.  ``A`` and ``K`` are scaled so ``rho(A_tilde)``
    lands in ``[0.3, 0.7]`` and ``B`` shrinks until ``rho(A_tilde + B L) <= 0.95``.
    """
    if n < 2:
        raise DomainError(f"random_economy needs n >= 2 sectors, got {n}")
    rng = np.random.default_rng(seed)

    a = rng.uniform(0.0, 1.0, (n, n)) * (rng.uniform(size=(n, n)) > 0.25)
    perm = rng.permutation(n)
    a[perm, np.roll(perm, -1)] += 1e-3
    k = rng.uniform(0.0, 1.0, (n, n)) * (rng.uniform(size=(n, n)) > 0.25)
    delta = rng.uniform(0.05, 0.3, n)
    labor = rng.uniform(0.2, 1.0, n)
    b = rng.uniform(0.0, 1.0, (n, n)) * (rng.uniform(size=(n, n)) > 0.4)
    empty = ~(b > 0).any(axis=0)
    b[rng.integers(0, n, empty.sum()), np.flatnonzero(empty)] = rng.uniform(0.1, 1.0, empty.sum())
    x = rng.uniform(10.0, 200.0, n)

    target = rng.uniform(0.3, 0.7)
    scale = target / dominant_eigenvalue(a + k * delta[np.newaxis, :])
    a *= scale
    k *= scale

    names = tuple(f"s{i + 1}" for i in range(n))
    e = EconomySpec(names, a, k, delta, labor, b, x)
    # Rescale B so the surplus spectrum starts somewhere in [0.5, 1.5], then shrink.
    e = scale_consumption(e, rng.uniform(0.5, 1.5) / max(dominant_eigenvalue(e.B * labor[np.newaxis, :]), 1e-3))
    while dominant_eigenvalue(extended_matrix(e)) > 0.95:
        e = scale_consumption(e, 0.9)
    return e
