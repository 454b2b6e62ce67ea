"""Acceptance gate: one PASS/FAIL line per criterion.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import functools
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE, REFERENCE_C  # noqa: E402
from laborvalue import (  # noqa: E402
    boundary_economy,
    build_operators,
    build_value_domain,
    contains,
    duality_probe,
    existence_diagnosis,
    exploitation_rates,
    load_reference_economy,
    max_feasible_rate,
    monetary_transform,
    profit_bounds,
    random_economy,
    solve_absolute,
    solve_relative,
    verify_equalities,
    verify_identity,
)
from laborvalue.errors import OutsideCompatibilityIntervalError  # noqa: E402
from laborvalue.operators import parametric_reproduction  # noqa: E402
from laborvalue.spectral import dominant_eigenvalue, perron_left  # noqa: E402
from laborvalue.transform import (  # noqa: E402
    critical_shares,
    hyperplane_normal,
    intersect_hyperplane,
    profit_share,
    total_surplus,
    total_value,
)


def criterion(number: int, title: str):
    def wrap(fn):
        @functools.wraps(fn)
        def test():
            try:
                fn()
            except AssertionError as exc:
                ACCEPTANCE.append((number, title, False, str(exc).splitlines()[0] if str(exc) else ""))
                print(f"FAIL  criterion {number:>2}: {title}")
                raise
            ACCEPTANCE.append((number, title, True, ""))
            print(f"PASS  criterion {number:>2}: {title}")

        return test

    return wrap


def check(failures: list[str], ok: bool, message: str) -> None:
    if not ok:
        failures.append(message)


def _random_surplus(count: int, seed: int):
    rng = np.random.default_rng(seed)
    return [random_economy(int(rng.integers(2, 9)), seed * 10_000 + i) for i in range(count)]


@criterion(1, "golden spectra, < 0.1 s")
def test_golden_spectra():
    start = time.perf_counter()
    e = load_reference_economy()
    ops = build_operators(e)
    radii = (dominant_eigenvalue(ops.a_tilde), dominant_eigenvalue(ops.m0), dominant_eigenvalue(ops.a_hat))
    elapsed = time.perf_counter() - start
    failures: list[str] = []
    for got, want, name in zip(radii, (0.5519, 0.7184, 0.8749), ("A_tilde", "M0", "A_hat")):
        check(failures, abs(got - want) <= 5e-5, f"rho({name}) = {got:.6f}, want {want} +- 5e-5")
    check(failures, elapsed < 0.1, f"took {elapsed:.3f} s")
    assert not failures, "; ".join(failures)


@criterion(2, "golden profit bounds")
def test_golden_profit_bounds():
    b = profit_bounds(load_reference_economy())
    failures: list[str] = []
    check(failures, abs(b.r_technical - 0.4477) <= 5e-4, f"r_A = {b.r_technical:.6f}")
    check(failures, abs(b.r_feasible - 0.1248) <= 5e-4, f"r* = {b.r_feasible:.6f}")
    check(failures, abs(b.gap - 0.3229) <= 1e-3, f"gap = {b.gap:.6f}")
    assert not failures, "; ".join(failures)


@criterion(3, "golden compatibility interval")
def test_golden_interval():
    e = load_reference_economy()
    iv = critical_shares(build_operators(e), e.x)
    assert abs(iv.gamma_min - 0.1069) <= 5e-4 and abs(iv.gamma_max - 0.1512) <= 5e-4, (
        f"interval = [{iv.gamma_min:.6f}, {iv.gamma_max:.6f}]"
    )


@criterion(4, "golden transformation verification at the reference c")
def test_golden_transformation():
    e = load_reference_economy()
    ops = build_operators(e)
    F = total_value(ops, REFERENCE_C, e.x)
    S = total_surplus(ops, REFERENCE_C, e.x)
    rates = exploitation_rates(ops, REFERENCE_C)
    member = contains(build_value_domain(ops), REFERENCE_C)
    eta = hyperplane_normal(ops, e.x, S / F)
    failures: list[str] = []
    check(failures, abs(F - 401.5912) <= 1e-3, f"F = {F:.6f}, want 401.5912 +- 1e-3")
    check(failures, abs(S - 47.0379) <= 1e-3, f"S = {S:.6f}, want 47.0379 +- 1e-3")
    check(
        failures,
        np.abs(rates - [0.0923, 0.5742, 0.3704]).max() <= 2e-4,
        f"exploitation rates = {np.round(100 * rates, 4).tolist()} %",
    )
    check(failures, member.member and member.strict, f"not a strict member, slacks {member.slacks}")
    check(
        failures,
        abs(REFERENCE_C @ eta) <= 1e-6 * np.abs(eta).sum() * REFERENCE_C.max(),
        f"|c . eta| = {abs(REFERENCE_C @ eta):.3g}",
    )
    assert not failures, "; ".join(failures)


@criterion(5, "two-equality closure inside the interval")
def test_two_equality_closure():
    e = load_reference_economy()
    ops = build_operators(e)
    iv = critical_shares(ops, e.x)
    failures: list[str] = []
    solved = 0
    for r in np.linspace(0.100, 0.124, 49):
        for w in (perron_left(parametric_reproduction(e, float(r))), np.ones(3)):
            if not iv.contains(profit_share(e, w, float(r))):
                continue
            sol = solve_relative(e, w, float(r), ops=ops)
            rep = verify_equalities(e, sol, w, float(r))
            solved += 1
            check(failures, rep.abs_eq1 <= 1e-8 * rep.F, f"r = {r:.4f}: |P - F| = {rep.abs_eq1:.3g}")
            check(failures, rep.abs_eq2 <= 1e-7, f"r = {r:.4f}: |Pi - S| = {rep.abs_eq2:.3g}")
    check(failures, solved >= 10, f"only {solved} rates inside the interval")
    assert not failures, "; ".join(failures[:3])


@criterion(6, "surplus-operator identity on 201 economies")
def test_identity_suite():
    worst = verify_identity(build_operators(load_reference_economy()))
    for e in _random_surplus(200, 6):
        worst = max(worst, verify_identity(build_operators(e)))
    assert worst <= 1e-9, f"max residual {worst:.3g}"


@criterion(7, "three existence conditions agree on 220 economies")
def test_existence_equivalence():
    bad: list[str] = []
    for i, e in enumerate(_random_surplus(200, 7)):
        rep = existence_diagnosis(e)
        if not (rep.agree and rep.interior_nonempty):
            bad.append(f"random #{i}")
    for i, e in enumerate(_random_surplus(20, 70)):
        b = boundary_economy(e)
        rep = existence_diagnosis(b)
        degenerate = build_value_domain(build_operators(b)).degenerate
        if not (rep.agree and rep.boundary and degenerate and not rep.reproduction):
            bad.append(f"boundary #{i}")
    assert not bad, f"disagreement on {bad[:5]}"


@criterion(8, "M0 invariant under monetary re-measurement")
def test_price_invariance():
    rng = np.random.default_rng(8)
    worst = 0.0
    for e in _random_surplus(20, 8):
        m0 = build_operators(e).m0
        for _ in range(100):
            p = np.exp(rng.uniform(-2.0, 2.0, e.n))
            worst = max(worst, float(np.abs(build_operators(monetary_transform(e, p)).m0 - m0).max()))
    assert worst <= 1e-12, f"max entry change {worst:.3g}"


@criterion(9, "price-wage domain contracts as r rises")
def test_duality_contraction():
    bad: list[str] = []
    for i, e in enumerate(_random_surplus(20, 9)):
        rep = duality_probe(e, 0.0, max_feasible_rate(e) / 2, 500, seed=i)
        if not rep.inclusion_holds:
            bad.append(f"#{i}: {rep.included}/500 included")
        if not rep.strict:
            bad.append(f"#{i}: no strictness witness")
    assert not bad, "; ".join(bad[:5])


@criterion(10, "absolute solution proportional to the relative one")
def test_absolute_proportionality():
    e = load_reference_economy()
    ops = build_operators(e)
    P_star = total_value(ops, REFERENCE_C, e.x)
    Pi_star = total_surplus(ops, REFERENCE_C, e.x)
    c_rel = intersect_hyperplane(ops, e.x, Pi_star / P_star)
    sol = solve_absolute(e, P_star, Pi_star, reference=c_rel, ops=ops)
    mu = P_star / total_value(ops, c_rel, e.x)
    gap = float(np.abs(sol.c_star - mu * c_rel).max())
    assert sol.aggregates.mu == mu and gap <= 1e-8, f"max |c_abs - mu c_rel| = {gap:.3g}"


@criterion(11, "below-interval profit share is rejected")
def test_out_of_interval_rejection():
    e = load_reference_economy()
    r = 0.1052
    for w in (perron_left(parametric_reproduction(e, r)), np.ones(3)):
        try:
            sol = solve_relative(e, w, r)
        except OutsideCompatibilityIntervalError as exc:
            assert exc.gamma < exc.gamma_min, str(exc)
        else:
            raise AssertionError(f"returned a solution {sol.c_star} at gamma = {sol.aggregates.gamma:.6f}")


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except AssertionError as exc:
                failed += 1
                print(f"      {exc}")
    raise SystemExit(1 if failed else 0)
