"""Weighted quadrature grids, the measure, and weighted norms."""

import numpy as np
import pytest
from scipy.special import gamma

from dunkllab import (DomainTooSmallError, WeightedContext, ball_volume,
                      eta, product_z2, rank1, dihedral, volume_max,
                      weight_density, weighted_norm)
from dunkllab.measure import eta_directional, volume_max as vol_max
from dunkllab.errors import AccuracyError
from dunkllab.quadrature import (AxisRule, TensorGrid,
                                 boundary_shell_fraction, check_shell,
                                 integrate_checked)


class TestAxisRule:
    @pytest.mark.parametrize("k", [0.0, 0.5, 1.0, 2.5])
    @pytest.mark.parametrize("m", [0, 1, 2, 5])
    def test_integrates_weighted_even_monomials_exactly(self, k, m):
        # oracle: int_{-W}^{W} 2^k |x|^{2k} x^{2m} dx
        #       = 2^(k+1) W^(2k+2m+1) / (2k+2m+1)
        W = 3.0
        rule = AxisRule.build(k=k, half_width=W, n_half=40)
        approx = np.sum(rule.weights * rule.nodes ** (2 * m))
        exact = 2.0 ** (k + 1) * W ** (2 * k + 2 * m + 1) / (2 * k + 2 * m + 1)
        assert approx == pytest.approx(exact, rel=1e-12)

    def test_odd_monomials_integrate_to_zero(self):
        rule = AxisRule.build(k=1.0, half_width=2.0, n_half=30)
        assert np.sum(rule.weights * rule.nodes**3) == pytest.approx(0.0, abs=1e-13)

    def test_gaussian_against_closed_form(self):
        # int 2^k |x|^{2k} e^{-x^2/2} dx = 2^(2k+1/2) Gamma(k+1/2)
        for k in (0.0, 0.5, 1.0):
            rule = AxisRule.build(k=k, half_width=12.0, n_half=200)
            approx = np.sum(rule.weights * np.exp(-rule.nodes**2 / 2))
            exact = 2.0 ** (2 * k + 0.5) * gamma(k + 0.5)
            assert approx == pytest.approx(exact, rel=1e-12)


class TestTensorGrid:
    def test_two_dim_separable_integral(self):
        grid = TensorGrid.build(ks=[0.5, 1.0], half_widths=10.0, n_halves=80)
        vals = np.exp(-(grid.axis_nodes(0)[:, None] ** 2
                        + grid.axis_nodes(1)[None, :] ** 2) / 2)
        approx = grid.integrate(vals)
        exact = (2.0 ** (2 * 0.5 + 0.5) * gamma(1.0)
                 * 2.0 ** (2 * 1.0 + 0.5) * gamma(1.5))
        assert approx == pytest.approx(exact, rel=1e-11)

    def test_refined_grid_changes_node_count(self):
        grid = TensorGrid.build(ks=0.0, half_widths=5.0, n_halves=20)
        fine = grid.refined()
        assert fine.axes[0].n_half == 30

    def test_shell_fraction_flags_boundary_mass(self):
        grid = TensorGrid.build(ks=0.0, half_widths=5.0, n_halves=60)
        x = grid.points()[:, 0].reshape(grid.shape)
        concentrated = np.exp(-(x**2))
        boundary = np.exp(-((np.abs(x) - 5.0) ** 2))
        assert boundary_shell_fraction(grid, np.abs(concentrated)) < 1e-10
        assert boundary_shell_fraction(grid, np.abs(boundary)) > 0.1

    def test_check_shell_raises_for_unconfined_values(self):
        grid = TensorGrid.build(ks=0.0, half_widths=4.0, n_halves=50)
        with pytest.raises(DomainTooSmallError):
            check_shell(grid, np.ones(grid.shape))

    def test_integrate_checked_agrees_with_closed_form(self):
        grid = TensorGrid.build(ks=0.0, half_widths=10.0, n_halves=80)
        val = integrate_checked(grid, lambda p: np.exp(-p[:, 0] ** 2 / 2))
        assert val == pytest.approx(np.sqrt(2 * np.pi), rel=1e-12)

    def test_integrate_checked_flags_underresolved_integrand(self):
        grid = TensorGrid.build(ks=0.0, half_widths=4.0, n_halves=12)
        with pytest.raises(AccuracyError):
            integrate_checked(grid, lambda p: np.cos(60 * p[:, 0] ** 2)
                              * np.exp(-p[:, 0] ** 2))


class TestWeightDensity:
    def test_rank1_density_closed_form(self):
        sys1 = rank1(1.0)
        pts = np.array([[1.0], [2.0], [-0.5]])
        assert np.allclose(weight_density(sys1, pts), 2.0 * pts[:, 0] ** 2)

    def test_product_density_factorizes(self):
        sys2 = product_z2([0.5, 0.5])
        pts = np.array([[1.0, 2.0], [0.3, -0.7]])
        expect = 2.0 * np.abs(pts[:, 0] * pts[:, 1])
        assert np.allclose(weight_density(sys2, pts), expect)

    def test_density_group_invariance(self):
        from dunkllab import generate_group
        sys_d = dihedral(3, 0.8)
        group = generate_group(sys_d)
        x = np.array([[0.9, 0.4]])
        base = weight_density(sys_d, x)
        for mat in group.matrices:
            assert weight_density(sys_d, x @ mat.T) == pytest.approx(base)


class TestBallVolume:
    def test_rank1_ball_volumes_frozen(self):
        sys1 = rank1(1.0)
        assert ball_volume(sys1, np.array([0.0]), 1.0) == pytest.approx(4.0 / 3.0)
        assert ball_volume(sys1, np.array([0.0]), 2.0) == pytest.approx(32.0 / 3.0)

    def test_product_half_half_ball_volumes_frozen(self):
        sys2 = product_z2([0.5, 0.5])
        assert ball_volume(sys2, np.zeros(2), 1.0) == pytest.approx(1.0, rel=1e-9)
        assert ball_volume(sys2, np.zeros(2), 2.0) == pytest.approx(16.0, rel=1e-9)

    def test_off_center_ball_reduces_to_lebesgue_at_k_zero(self):
        sys0 = rank1(0.0)
        assert ball_volume(sys0, np.array([3.0]), 0.5) == pytest.approx(1.0)

    def test_volume_max_takes_larger_ball(self):
        sys1 = rank1(1.0)
        x, y = np.array([0.1]), np.array([2.0])
        vx = ball_volume(sys1, x, 1.0)
        vy = ball_volume(sys1, y, 1.0)
        assert vol_max(sys1, x, y, 1.0) == pytest.approx(max(vx, vy))

    def test_dihedral_ball_volume_scales_homogeneously(self):
        sys_d = dihedral(3, 0.5)
        v1 = ball_volume(sys_d, np.zeros(2), 1.0)
        v2 = ball_volume(sys_d, np.zeros(2), 2.0)
        assert v2 / v1 == pytest.approx(2.0 ** sys_d.homogeneous_dim, rel=1e-6)


class TestWeightedContext:
    def test_ck_matches_closed_form_rank1(self):
        for k in (0.0, 0.5, 1.0):
            ctx = WeightedContext(rank1(k))
            exact = 2.0 ** (2 * k + 0.5) * gamma(k + 0.5)
            assert ctx.c_k == pytest.approx(exact, rel=1e-10)

    def test_ck_factorizes_for_products(self):
        ctx = WeightedContext(product_z2([0.5, 1.0]))
        exact = (2.0 ** (2 * 0.5 + 0.5) * gamma(1.0)
                 * 2.0 ** (2 * 1.0 + 0.5) * gamma(1.5))
        assert ctx.c_k == pytest.approx(exact, rel=1e-9)

    def test_context_rejects_generic_system(self):
        # quadrature contexts need per-coordinate multiplicities; dihedral
        # weights are not tensor products, so only the density/volume/distance
        # operations support them
        from dunkllab import CapabilityError
        with pytest.raises(CapabilityError):
            WeightedContext(dihedral(3, 0.5))

    def test_with_grids_overrides(self):
        ctx = WeightedContext(rank1(0.0))
        wide = ctx.with_grids(box=20.0, n_half=300)
        assert wide.box == 20.0
        assert wide.grid.axes[0].n_half == 300
        assert wide.freq_box == ctx.freq_box


class TestWeightedNorm:
    def test_gaussian_l2_norm_classical(self):
        ctx = WeightedContext(rank1(0.0))
        from dunkllab import gaussian
        assert weighted_norm(ctx, gaussian(1), 0.0) == pytest.approx(
            np.pi ** 0.25, rel=1e-10)

    def test_eta_weighted_norm_exceeds_plain(self):
        ctx = WeightedContext(rank1(0.5))
        from dunkllab import gaussian
        plain = weighted_norm(ctx, gaussian(1), 0.0)
        weighted = weighted_norm(ctx, gaussian(1), 1.0)
        assert weighted > plain

    def test_norm_raises_for_unconfined_function(self):
        from dunkllab import CallableFunction
        ctx = WeightedContext(rank1(0.0))
        flat = CallableFunction(lambda p: np.ones(p.shape[0]))
        with pytest.raises(DomainTooSmallError):
            weighted_norm(ctx, flat, 0.0)


class TestEta:
    def test_eta_at_origin_is_e(self):
        pts = np.zeros((1, 2))
        assert eta(pts, 1.7) == pytest.approx(np.e)

    def test_eta_directional_matches_finite_difference(self):
        rng = np.random.default_rng(5)
        pts = rng.normal(size=(4, 2))
        zeta = np.array([0.6, -0.8])
        s = 0.9
        h = 1e-6
        fd = (eta(pts + h * zeta, s) - eta(pts - h * zeta, s)) / (2 * h)
        assert np.allclose(eta_directional(pts, s, zeta, 1), fd,
                           rtol=1e-7, atol=1e-7)

    def test_eta_second_directional_matches_finite_difference(self):
        rng = np.random.default_rng(6)
        pts = rng.normal(size=(4, 2))
        zeta = np.array([1.0, 0.5])
        s = 1.3
        h = 1e-4
        fd = (eta(pts + h * zeta, s) - 2 * eta(pts, s)
              + eta(pts - h * zeta, s)) / h**2
        assert np.allclose(eta_directional(pts, s, zeta, 2), fd,
                           rtol=1e-5, atol=1e-5)
