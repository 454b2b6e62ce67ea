"""Nonnegative-matrix spectral kernel.

Dominant (Perron) eigenpairs by power iteration, strong-connectivity tests
and the inverse of ``I - M`` for matrices with spectral radius below one.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.sparse.csgraph import connected_components

from .errors import (
    DomainError,
    NegativeEntryError,
    NonSquareError,
    NotConvergedError,
    NotStrictlyPositiveError,
    SpectralRadiusTooLargeError,
)

#: ``rho < 1`` is enforced as ``rho < 1 - RHO_MARGIN`` everywhere in the toolkit.
RHO_MARGIN = 1e-9

DEFAULT_TOL = 1e-13
DEFAULT_MAX_ITER = 100_000
RESIDUAL_TOL = 1e-10

Array = NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class SpectralResult:
    """Dominant eigenpair of a nonnegative matrix.

    ``left_vector`` is scaled so its first component is 1 and
    ``right_vector`` so its components sum to 1.
    """

    radius: float
    left_vector: Array
    right_vector: Array
    iterations: int
    converged: bool


def as_square(m: ArrayLike) -> Array:
    """Coerce ``m`` to a finite float matrix of order >= 1 or raise."""
    try:
        a = np.array(m, dtype=float)
    except (TypeError, ValueError) as exc:
        raise NonSquareError(f"matrix grid is malformed: {exc}") from None
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise NonSquareError(f"expected an n x n grid, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix contains non-finite entries")
    return a


def _require_nonnegative(a: Array) -> None:
    if (a < 0).any():
        i, j = np.argwhere(a < 0)[0]
        raise NegativeEntryError(f"entry [{i}][{j}] = {a[i, j]} is negative")


def _reaches_all(adj: NDArray[np.bool_], start: int) -> bool:
    seen = np.zeros(adj.shape[0], dtype=bool)
    seen[start] = True
    queue = deque([start])
    while queue:
        i = queue.popleft()
        for j in np.flatnonzero(adj[i] & ~seen):
            seen[j] = True
            queue.append(int(j))
    return bool(seen.all())


def is_irreducible(m: ArrayLike) -> bool:
    """True iff the graph with an edge ``i -> j`` whenever ``m[i][j] > 0``
    is strongly connected."""
    adj = as_square(m) > 0
    return _reaches_all(adj, 0) and _reaches_all(adj.T, 0)


def _eigen_residual(a: Array, radius: float, y: Array) -> float:
    return float(np.max(np.abs(y @ a - radius * y)))


def _residual_ok(a: Array, radius: float, y: Array) -> bool:
    scale = max(1.0, radius * float(np.max(np.abs(y))))
    return _eigen_residual(a, radius, y) <= RESIDUAL_TOL * scale


def _irreducible_power(a: Array, tol: float, max_iter: int) -> tuple[float, Array, Array, int, bool]:
    n = a.shape[0]
    # A positive diagonal makes an irreducible matrix primitive; otherwise the
    # shift removes any periodicity without moving the Perron vectors.
    shift = 0.0 if np.trace(a) > 0 else float(a.sum(axis=1).mean())
    ms = a + shift * np.eye(n) if shift else a
    tol = max(tol, 16 * n * np.finfo(float).eps)

    y = np.full(n, 1.0 / n)
    x = np.full(n, 1.0 / n)
    converged = False
    k = 0
    for k in range(1, max_iter + 1):
        y_next = y @ ms
        x_next = ms @ x
        # Collatz-Wielandt: min/max componentwise ratios bracket the radius.
        ry = y_next / y
        rx = x_next / x
        y = y_next / y_next.max()
        x = x_next / x_next.max()
        top = max(ry.max(), rx.max())
        if ry.max() - ry.min() <= tol * top and rx.max() - rx.min() <= tol * top:
            converged = True
            break

    radius = float(y @ ms @ x / (y @ x)) - shift
    return max(radius, 0.0), y, x, k, converged


def _reducible_radius(a: Array, tol: float, max_iter: int) -> float:
    n_comp, labels = connected_components(a > 0, directed=True, connection="strong")
    best = 0.0
    for c in range(n_comp):
        idx = np.flatnonzero(labels == c)
        block = a[np.ix_(idx, idx)]
        if not block.any():
            continue
        if idx.size == 1:
            best = max(best, float(block[0, 0]))
        else:
            best = max(best, _irreducible_power(block, tol, max_iter)[0])
    return best


def _reducible_vectors(a: Array, radius: float, tol: float, max_iter: int) -> tuple[Array, Array, int, bool]:
    n = a.shape[0]
    ms = a + (radius + 1.0) * np.eye(n)
    y = np.ones(n)
    x = np.ones(n)
    converged = False
    k = 0
    for k in range(1, max_iter + 1):
        y_next = y @ ms
        x_next = ms @ x
        y_next /= y_next.max()
        x_next /= x_next.max()
        done = max(np.abs(y_next - y).max(), np.abs(x_next - x).max()) <= tol
        y, x = y_next, x_next
        if done:
            converged = True
            break
    return y, x, k, converged


def dominant_eigenvalue(m: ArrayLike, *, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> float:
    """Spectral radius only; valid for reducible matrices as well.

    For a reducible matrix the radius is the largest radius over the
    diagonal blocks of its strongly connected components.
    """
    a = as_square(m)
    _require_nonnegative(a)
    if not a.any():
        return 0.0
    if is_irreducible(a):
        radius, _, _, _, converged = _irreducible_power(a, tol, max_iter)
        if not converged:
            raise NotConvergedError(f"power iteration hit the {max_iter} iteration cap")
        return radius
    return _reducible_radius(a, tol, max_iter)


def spectral_radius(
    m: ArrayLike, *, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> SpectralResult:
    """Dominant eigenvalue and Perron vectors of a nonnegative matrix.

    Irreducible input converges on the Collatz-Wielandt bracket.  Reducible
    input gets its radius from the strongly connected components and
    best-effort nonnegative vectors, which may contain zeros; the left vector
    is then scaled by its first component only if that component is nonzero.

    Raises NotConvergedError when the iteration cap is reached and the
    eigen-residual is still above tolerance.
    """
    a = as_square(m)
    _require_nonnegative(a)
    n = a.shape[0]
    if not a.any():
        return SpectralResult(0.0, np.ones(n), np.full(n, 1.0 / n), 0, True)

    if is_irreducible(a):
        radius, y, x, iterations, converged = _irreducible_power(a, tol, max_iter)
    else:
        radius = _reducible_radius(a, tol, max_iter)
        y, x, iterations, converged = _reducible_vectors(a, radius, tol, max_iter)

    y = y / (y[0] if y[0] > 0 else y.max())
    x = x / x.sum()
    if not converged and not _residual_ok(a, radius, y):
        raise NotConvergedError(
            f"power iteration hit the {max_iter} iteration cap with eigen-residual "
            f"{_eigen_residual(a, radius, y):.3g}; the matrix is likely periodic or "
            "otherwise degenerate"
        )
    y.setflags(write=False)
    x.setflags(write=False)
    return SpectralResult(radius, y, x, iterations, converged)


def perron_left(m: ArrayLike, **kwargs) -> Array:
    """Left Perron vector of a strictly positive matrix, first component 1."""
    a = as_square(m)
    if not (a > 0).all():
        raise NotStrictlyPositiveError("perron_left requires every entry > 0")
    return spectral_radius(a, **kwargs).left_vector


def inverse_of_i_minus(m: ArrayLike) -> Array:
    """``(I - m)^-1`` by LU solve, for nonnegative ``m`` with ``rho(m) < 1 - 1e-9``."""
    a = as_square(m)
    _require_nonnegative(a)
    radius = dominant_eigenvalue(a)
    if radius >= 1.0 - RHO_MARGIN:
        raise SpectralRadiusTooLargeError(
            f"rho = {radius:.10g} is not below 1 - {RHO_MARGIN:g}; I - M is not "
            "invertible by a convergent series",
            radius=radius,
        )
    n = a.shape[0]
    eye = np.eye(n)
    return np.linalg.solve(eye - a, eye)
