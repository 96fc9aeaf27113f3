"""Semigroup kernels: spec validation, evaluators, and structural identities."""

import numpy as np
import pytest

from dunkllab import (KernelSpec, SymbolError, WeightedContext, dunkl_translate,
                      evaluate_q, freq_box_for, gaussian, heat_kernel,
                      heat_kernel_two_point, kernel_identity_check, product_z2,
                      q_on_grid, rank1, translate_at_points, two_point_kernel)
from dunkllab.kernels import KERNEL_CHECK_KINDS


class TestKernelSpecValidation:
    def test_order_range(self):
        with pytest.raises(ValueError):
            KernelSpec(directions=((1.0,),), ell=4)

    def test_time_positive(self):
        with pytest.raises(ValueError):
            KernelSpec(directions=((1.0,),), ell=2, t=0.0)

    def test_eps_nonnegative(self):
        with pytest.raises(ValueError):
            KernelSpec(directions=((1.0,),), ell=2, eps=-0.1)

    def test_directions_must_span(self):
        with pytest.raises(SymbolError):
            KernelSpec(directions=((1.0, 0.0), (2.0, 0.0)), ell=2)

    def test_quadratic_symbol_positivity_guard(self):
        # for l = 1 the eps perturbation must stay below the smallest
        # eigenvalue of the direction Gram matrix
        with pytest.raises(SymbolError, match="symbol positivity violated"):
            KernelSpec(directions=((1.0, 0.0), (0.0, 1.0)), ell=1, eps=1.0)
        KernelSpec(directions=((1.0, 0.0), (0.0, 1.0)), ell=1, eps=0.99)

    def test_heat_constructor(self):
        spec = KernelSpec.heat(2, t=0.5)
        assert spec.ell == 1 and spec.eps == 0.0 and spec.t == 0.5
        assert np.allclose(spec.direction_arrays(), np.eye(2))

    def test_symbol_hand_computed(self):
        spec = KernelSpec(directions=((1.0, 0.0), (1.0, 1.0)), ell=2)
        xi = np.array([[1.0, 2.0]])
        # <(1,0),xi>^4 + <(1,1),xi>^4 = 1 + 81
        assert spec.symbol(xi)[0] == pytest.approx(82.0)
        pert = KernelSpec(directions=((1.0, 0.0), (1.0, 1.0)), ell=2, eps=0.1)
        assert pert.symbol(xi)[0] == pytest.approx(82.0 - 0.5)

    def test_min_direction_coefficient(self):
        heat2 = KernelSpec.heat(2)
        assert heat2.min_direction_coefficient() == pytest.approx(1.0, abs=1e-6)
        aniso = KernelSpec(directions=((1.0, 0.0), (1.0, 1.0)), ell=2)
        c = aniso.min_direction_coefficient()
        assert 0 < c < 1.0


class TestFrequencyBoxSizing:
    def test_heat_box_hits_target_level(self):
        spec = KernelSpec.heat(1, t=1.0)
        b = freq_box_for(spec, tol=1e-12)
        assert np.exp(-spec.symbol(np.array([[b]]))[0]) == pytest.approx(
            1e-12, rel=1e-6)

    def test_box_shrinks_with_time(self):
        spec_fast = KernelSpec.heat(1, t=4.0)
        spec_slow = KernelSpec.heat(1, t=0.25)
        assert freq_box_for(spec_fast) < freq_box_for(spec_slow)

    def test_eps_perturbation_enlarges_box(self):
        base = KernelSpec(directions=((1.0,),), ell=2)
        pert = KernelSpec(directions=((1.0,),), ell=2, eps=0.1)
        assert freq_box_for(pert) > freq_box_for(base)


class TestHeatOracle:
    """With the quadratic symbol the quadrature evaluator must reproduce the
    closed-form heat kernel."""

    @pytest.mark.parametrize("k", [0.0, 1.0])
    def test_rank1(self, k):
        ctx = WeightedContext(rank1(k))
        spec = KernelSpec.heat(1, t=1.0)
        pts = np.array([[0.0], [0.7], [-1.9], [3.5]])
        got = evaluate_q(ctx, spec, pts)
        expect = heat_kernel(ctx, pts, 1.0)
        assert np.max(np.abs(got - expect)) < 1e-10

    def test_two_dim_product(self):
        ctx = WeightedContext(product_z2([0.5, 0.5]))
        spec = KernelSpec.heat(2, t=1.0)
        pts = np.array([[0.0, 0.0], [0.6, -0.8], [1.5, 2.0]])
        got = evaluate_q(ctx, spec, pts)
        expect = heat_kernel(ctx, pts, 1.0)
        assert np.max(np.abs(got - expect)) < 1e-10

    def test_rescaled_small_time_against_closed_form(self):
        # t far below the direct window exercises the homogeneity rescale
        ctx = WeightedContext(rank1(0.5))
        spec = KernelSpec.heat(1, t=0.05)
        pts = np.array([[0.0], [0.2], [0.45]])
        got = evaluate_q(ctx, spec, pts)
        expect = heat_kernel(ctx, pts, 0.05)
        assert np.max(np.abs(got - expect) / expect) < 1e-9

    def test_rescaled_large_time_against_closed_form(self):
        ctx = WeightedContext(rank1(0.5))
        spec = KernelSpec.heat(1, t=9.0)
        pts = np.array([[0.0], [2.0], [5.0]])
        got = evaluate_q(ctx, spec, pts)
        expect = heat_kernel(ctx, pts, 9.0)
        assert np.max(np.abs(got - expect) / expect) < 1e-9


class TestGridEvaluator:
    def test_grid_matches_pointwise(self):
        ctx = WeightedContext(rank1(0.5))
        spec = KernelSpec(directions=((1.0,),), ell=2, t=1.0)
        sampled = q_on_grid(ctx, spec)
        direct = evaluate_q(ctx, spec, ctx.grid.points())
        assert np.max(np.abs(sampled.values.ravel() - direct)) < 1e-12

    def test_grid_rejects_out_of_window_time(self):
        ctx = WeightedContext(rank1(0.5))
        spec = KernelSpec(directions=((1.0,),), ell=2, t=10.0)
        with pytest.raises(ValueError):
            q_on_grid(ctx, spec)

    def test_quartic_kernel_has_unit_mass(self):
        # int q_t dw = exp(-t * symbol(0)) = 1; the order-2 kernel decays
        # slowly enough to need a wide spatial box
        spec = KernelSpec(directions=((1.0,),), ell=2, t=1.0)
        fbox = float(np.ceil(freq_box_for(spec) * 1.1))
        ctx = WeightedContext(rank1(0.5)).with_grids(
            box=48.0, n_half=600, freq_box=fbox, freq_n_half=200)
        mass = ctx.integrate(ctx.grid, q_on_grid(ctx, spec).values)
        assert mass == pytest.approx(1.0, abs=1e-7)


class TestTwoPointKernel:
    def test_heat_case_matches_bessel_closed_form(self):
        ctx = WeightedContext(rank1(1.0))
        spec = KernelSpec.heat(1, t=1.0)
        rng = np.random.default_rng(3)
        xs = rng.uniform(-2, 2, size=(8, 1))
        ys = rng.uniform(-2, 2, size=(8, 1))
        got = two_point_kernel(ctx, spec, xs, ys)
        expect = heat_kernel_two_point(ctx, xs, ys, 1.0)
        assert np.max(np.abs(got - expect)) < 1e-10

    def test_second_argument_zero_reduces_to_one_point(self):
        ctx = WeightedContext(rank1(0.5))
        spec = KernelSpec(directions=((1.0,),), ell=2, t=1.0)
        xs = np.array([[0.4], [1.3], [2.6]])
        got = two_point_kernel(ctx, spec, xs, np.zeros((3, 1)))
        expect = evaluate_q(ctx, spec, xs)
        assert np.max(np.abs(got - expect)) < 1e-12

    def test_symmetry_in_arguments(self):
        ctx = WeightedContext(product_z2([0.5, 0.5]))
        spec = KernelSpec(directions=((1.0, 0.0), (1.0, 1.0)), ell=2, t=1.0)
        x = np.array([0.8, -0.4])
        y = np.array([0.1, 1.2])
        assert two_point_kernel(ctx, spec, x, y) == pytest.approx(
            two_point_kernel(ctx, spec, y, x), rel=1e-10)

    def test_classical_two_point_heat_kernel(self):
        # at k = 0 the closed form collapses to the translation kernel
        ctx = WeightedContext(rank1(0.0))
        xs = np.array([[0.5], [1.0], [-0.7]])
        ys = np.array([[1.5], [-1.0], [0.3]])
        expect = ((4 * np.pi * 1.0) ** -0.5
                  * np.exp(-(xs - ys)[:, 0] ** 2 / 4.0))
        got = heat_kernel_two_point(ctx, xs, ys, 1.0)
        assert np.max(np.abs(got - expect)) < 1e-12


class TestTranslation:
    def test_translate_by_zero_is_identity(self):
        ctx = WeightedContext(rank1(1.0))
        f = gaussian(1)
        moved = dunkl_translate(ctx, f, [0.0])
        assert np.max(np.abs(moved.values - f.values_on(ctx.grid))) < 1e-11

    def test_translate_at_points_matches_grid(self):
        ctx = WeightedContext(rank1(0.5))
        f = gaussian(1)
        moved = dunkl_translate(ctx, f, [0.8])
        at_pts = translate_at_points(ctx, f, [0.8], ctx.grid.points())
        assert np.max(np.abs(at_pts - moved.values.ravel())) < 1e-11

    def test_classical_translation_shifts(self):
        # at k = 0 the frequency multiplier is e^{i xi x}, so the generalized
        # translation by x sends f to f(x + .)
        ctx = WeightedContext(rank1(0.0))
        f = gaussian(1)
        moved = dunkl_translate(ctx, f, [1.0])
        x = ctx.grid.points()[:, 0]
        assert np.max(np.abs(moved.values.ravel()
                             - np.exp(-(x + 1.0) ** 2 / 2))) < 1e-10


class TestIdentityChecks:
    @pytest.mark.parametrize("kind", KERNEL_CHECK_KINDS)
    def test_all_kinds_pass_on_default_heat_setup(self, kind):
        ctx = WeightedContext(rank1(0.5))
        report = kernel_identity_check(ctx, kind)
        assert report.passed, (kind, report.max_defect, report.tolerance)
        assert report.check.startswith("kernel-")
        assert report.max_defect <= report.tolerance

    def test_unknown_kind_lists_options(self):
        ctx = WeightedContext(rank1(0.5))
        with pytest.raises(ValueError, match="mass"):
            kernel_identity_check(ctx, "no-such-check")

    def test_semigroup_property_quartic_symbol(self):
        ctx = WeightedContext(rank1(0.0))
        report = kernel_identity_check(
            ctx, "semigroup",
            {"spec": {"directions": [[1.0]], "ell": 2, "t": 1.0}})
        assert report.passed

    def test_scaling_law_quartic_symbol(self):
        ctx = WeightedContext(rank1(1.0))
        report = kernel_identity_check(
            ctx, "scaling",
            {"spec": {"directions": [[1.0]], "ell": 2, "t": 1.0},
             "t_values": [0.5, 2.0]})
        assert report.passed
