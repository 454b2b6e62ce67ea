from __future__ import annotations

import numpy as np
import pytest

from laborvalue.economy import boundary_economy, random_economy, scale_consumption
from laborvalue.errors import (
    DimensionNot3Error,
    EmptySliceError,
    NonPositiveReductionError,
    NormalizationViolatedError,
    NotStrictlyPositiveError,
)
from laborvalue.feasible import (
    box_bounds,
    build_value_domain,
    contains,
    existence_diagnosis,
    exploitation_rates,
    polygon_contains,
    sample_members,
    slice_2d,
    slice_csv,
)
from laborvalue.operators import build_operators

from conftest import REFERENCE_C
from oracles import left_perron_eig


@pytest.fixture(scope="module")
def domain(ops):
    return build_value_domain(ops)


class TestDomain:
    def test_experiment(self, domain):
        assert domain.lambda_star == pytest.approx(0.7184, abs=5e-5)
        assert not domain.degenerate and not domain.empty
        assert (domain.lower_bounds <= domain.upper_bounds).all()
        assert domain.lower_bounds[0] == domain.upper_bounds[0] == 1.0

    def test_perron_point_matches_oracle(self, ops, domain):
        lam, y = left_perron_eig(ops.m0)
        assert domain.lambda_star == pytest.approx(lam, rel=1e-12)
        np.testing.assert_allclose(domain.y_star, y, rtol=1e-10)
        assert domain.e_star == pytest.approx((1 - lam) / lam, rel=1e-10)

    def test_boundary_degenerate(self, econ):
        d = build_value_domain(build_operators(boundary_economy(econ)))
        assert d.degenerate and not d.empty

    def test_hand_bounds(self):
        lower, upper = box_bounds(np.array([[0.2, 0.1], [0.1, 0.2]]))
        assert lower[1] == pytest.approx(0.125)
        assert upper[1] == pytest.approx(8.0)

    def test_needs_positive_m0(self, ops):
        m0 = np.array(ops.m0)
        m0[0, 1] = 0.0
        with pytest.raises(NotStrictlyPositiveError):
            build_value_domain(type(ops)(**{**ops.__dict__, "m0": m0}))


class TestContains:
    def test_perron_point(self, domain):
        res = contains(domain, domain.y_star)
        assert res.member and res.strict
        np.testing.assert_allclose(res.slacks, (1 - domain.lambda_star) * domain.y_star, rtol=1e-10)

    def test_reference_solution(self, domain):
        res = contains(domain, REFERENCE_C, normalized=True)
        assert res.member and res.strict

    def test_outside(self, domain):
        assert not contains(domain, domain.upper_bounds * 2).member

    def test_nonpositive(self, domain):
        with pytest.raises(NonPositiveReductionError):
            contains(domain, [1.0, -1.0, 1.0])

    def test_normalization(self, domain):
        contains(domain, [2.0, 1.0, 1.0])
        with pytest.raises(NormalizationViolatedError):
            contains(domain, [2.0, 1.0, 1.0], normalized=True)


class TestExploitation:
    def test_perron_uniform(self, ops, domain):
        e = exploitation_rates(ops, domain.y_star)
        np.testing.assert_allclose(e, domain.e_star, atol=1e-10)

    def test_reference_rates(self, ops):
        np.testing.assert_allclose(exploitation_rates(ops, REFERENCE_C), [0.0923, 0.5742, 0.3704], atol=2e-4)

    def test_boundary_zero(self, econ):
        ops = build_operators(boundary_economy(econ))
        d = build_value_domain(ops)
        np.testing.assert_allclose(exploitation_rates(ops, d.y_star), 0.0, atol=1e-9)


class TestSampling:
    @pytest.mark.parametrize("seed", range(5))
    def test_bounds_enclose_members(self, seed):
        e = random_economy(3 + seed % 3, seed)
        d = build_value_domain(build_operators(e))
        pts = sample_members(d, 1000, seed)
        assert len(pts) == 1000
        assert (pts >= d.lower_bounds - 1e-12).all() and (pts <= d.upper_bounds + 1e-12).all()

    def test_convex(self, domain):
        pts = sample_members(domain, 40, 3)
        rng = np.random.default_rng(0)
        for a, b in zip(pts[::2], pts[1::2]):
            for lam in rng.uniform(size=10):
                assert contains(domain, lam * a + (1 - lam) * b).member

    def test_perron_point_unique_equalizer(self, ops, domain):
        pts = np.vstack([sample_members(domain, 1000, 7), domain.y_star])
        for c in pts:
            rates = exploitation_rates(ops, c)
            if rates.max() - rates.min() < 1e-9:
                assert np.abs(c / c[0] - domain.y_star).max() <= 1e-8

    def test_degenerate_members_collapse(self):
        for seed in range(5):
            ops = build_operators(boundary_economy(random_economy(3, seed)))
            d = build_value_domain(ops)
            pts = sample_members(d, 50, seed, max_draws=200_000)
            for c in pts:
                assert np.abs(c / c[0] - d.y_star).max() <= 1e-6
            assert contains(d, d.y_star).member


class TestExistence:
    def test_experiment(self, econ):
        rep = existence_diagnosis(econ)
        assert rep.interior_nonempty and rep.reproduction and rep.surplus and rep.agree
        assert rep.rho_m0 == pytest.approx(0.7184, abs=5e-5)
        assert rep.rho_extended == pytest.approx(0.8749, abs=5e-5)

    def test_boundary(self, econ):
        rep = existence_diagnosis(boundary_economy(econ))
        assert not rep.interior_nonempty and not rep.reproduction and not rep.surplus
        assert rep.boundary and rep.agree
        assert rep.rho_m0 == pytest.approx(1.0, abs=1e-9)
        assert rep.rho_extended >= 1.0 - 1e-9
        np.testing.assert_allclose(rep.singleton, rep.witness)

    def test_inflated(self, econ):
        rep = existence_diagnosis(scale_consumption(econ, 2.0))
        assert rep.rho_m0 > 1
        assert not (rep.interior_nonempty or rep.reproduction or rep.surplus)

    def test_serializes(self, econ):
        doc = existence_diagnosis(econ).to_dict()
        assert doc["agree"] is True and doc["singleton"] is None


class TestSlice:
    def test_contains_reference_point_and_perron(self, domain):
        poly = slice_2d(domain)
        assert np.array_equal(poly[0], poly[-1])
        assert polygon_contains(poly, REFERENCE_C[1:])
        assert polygon_contains(poly, domain.y_star[1:])

    def test_vertices_are_boundary_points(self, domain):
        for v in slice_2d(domain)[:-1]:
            res = contains(domain, np.r_[1.0, v])
            assert res.member and not res.strict

    def test_counter_clockwise(self, domain):
        p = slice_2d(domain)
        area = 0.5 * np.sum(p[:-1, 0] * p[1:, 1] - p[1:, 0] * p[:-1, 1])
        assert area > 0

    def test_degenerate_single_point(self, econ):
        d = build_value_domain(build_operators(boundary_economy(econ)))
        np.testing.assert_allclose(slice_2d(d), [d.y_star[1:]])

    def test_empty(self, econ):
        d = build_value_domain(build_operators(scale_consumption(econ, 2.0)))
        with pytest.raises(EmptySliceError):
            slice_2d(d)

    def test_wrong_dimension(self):
        d = build_value_domain(build_operators(random_economy(4, 0)))
        with pytest.raises(DimensionNot3Error):
            slice_2d(d)

    def test_csv(self, domain):
        text = slice_csv(slice_2d(domain))
        lines = text.splitlines()
        assert lines[0] == "vertex,c2,c3"
        assert lines[1].startswith("0,")
