"""Semigroup kernels q_t^(eps) and h_t, Dunkl translation, two-point kernels.

The generator symbol is sym(xi) = sum_j <zeta_j, xi>^{2l} - eps |xi|^2 and

    q_t^(eps)      = c_k^{-1} F^{-1}(exp(-t sym))
    h_t(x)         = c_k^{-1} (2t)^{-N_h/2} exp(-|x|^2/(4t))        (N_h homogeneous)
    q_t(x, y)      = tau_x q_t(-y)
                   = c_k^{-2} int E(i xi, x) E(-i xi, y) e^{-t sym(xi)} dw(xi)
    h_t(x, y)      = c_k^{-1} (2t)^{-N_h/2} e^{-(|x|^2+|y|^2)/(4t)}
                       E(x/sqrt(2t), y/sqrt(2t))                    (closed form)

Direct quadrature covers t in [0.25, 4]; outside, homogeneity rescales to
t = 1 first:  q_t^(eps)(x) = t^{-N_h/(2l)} q_1^(eps')(t^{-1/(2l)} x) with
eps' = eps t^{(l-1)/l}.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .dunkl_kernel import kernel_imag_parts, kernel_real_scaled
from .errors import AccuracyError, DomainTooSmallError, SymbolError
from .functions import GridSampled, PolyGauss, gaussian, monomial_gauss
from .measure import WeightedContext
from .operators import dunkl_laplacian
from .quadrature import TensorGrid
from .report import VerificationReport, grid_metadata
from .transform import (dunkl_convolve, dunkl_transform, inverse_at_points,
                        inverse_dunkl_transform)

T_DIRECT_MIN = 0.25
T_DIRECT_MAX = 4.0
#: symbol exponential must be below this on the frequency-box boundary shell.
SYMBOL_BOUNDARY_TOL = 1e-15
#: target for sizing frequency boxes from the symbol decay.
SYMBOL_SIZING_TOL = 1e-18
IMAG_RESIDUE_TOL = 1e-10


@dataclass(frozen=True)
class KernelSpec:
    """Directions zeta_j, order l, perturbation eps, time t of q_t^(eps)."""

    directions: tuple
    ell: int
    eps: float = 0.0
    t: float = 1.0

    def __post_init__(self):
        dirs = np.atleast_2d(np.asarray(self.directions, dtype=float))
        object.__setattr__(self, "directions", tuple(map(tuple, dirs)))
        if self.ell not in (1, 2, 3):
            raise ValueError("kernel order l must be 1, 2 or 3")
        if self.t <= 0:
            raise ValueError("time t must be positive")
        if self.eps < 0:
            raise ValueError("eps must be nonnegative")
        if np.min(np.linalg.norm(dirs, axis=1)) == 0.0:
            raise ValueError("directions must be nonzero")
        if np.linalg.matrix_rank(dirs) < dirs.shape[1]:
            raise SymbolError("directions must span the ambient space")
        if self.ell == 1:
            gram = sum(np.outer(z, z) for z in dirs)
            lam_min = float(np.linalg.eigvalsh(gram)[0])
            if self.eps >= lam_min:
                raise SymbolError(
                    f"symbol positivity violated: for l=1 need eps < "
                    f"lambda_min(sum zeta zeta^T) = {lam_min:.6g}; got eps={self.eps}")

    @classmethod
    def heat(cls, dim: int, t: float = 1.0) -> "KernelSpec":
        """Axis directions with l=1 and eps=0: symbol |xi|^2, kernel h_t."""
        return cls(directions=tuple(tuple(row) for row in np.eye(dim)),
                   ell=1, eps=0.0, t=t)

    @property
    def dim(self) -> int:
        return len(self.directions[0])

    def direction_arrays(self) -> list[np.ndarray]:
        return [np.asarray(z, dtype=float) for z in self.directions]

    def symbol(self, xi: np.ndarray) -> np.ndarray:
        xi = np.atleast_2d(np.asarray(xi, dtype=float))
        total = np.zeros(len(xi))
        for z in self.direction_arrays():
            total += (xi @ z) ** (2 * self.ell)
        if self.eps:
            total -= self.eps * np.sum(xi**2, axis=1)
        return total

    def min_direction_coefficient(self) -> float:
        """min over unit xi of sum_j <zeta_j, xi>^{2l} (without the eps term)."""
        if self.dim == 1:
            return float(sum(abs(z[0]) ** (2 * self.ell)
                             for z in self.direction_arrays()))
        if self.dim == 2:
            ang = np.linspace(0.0, np.pi, 4096, endpoint=False)
            u = np.stack([np.cos(ang), np.sin(ang)], axis=1)
            vals = np.zeros(len(u))
            for z in self.direction_arrays():
                vals += (u @ z) ** (2 * self.ell)
            return float(vals.min())
        raise NotImplementedError("symbol analysis implemented for dim <= 2")


def freq_box_for(spec: KernelSpec, tol: float = SYMBOL_SIZING_TOL) -> float:
    """Radius B with exp(-t sym) < tol outside the box |xi|_inf <= B."""
    level = np.log(1.0 / tol) / spec.t
    cmin = spec.min_direction_coefficient()
    if spec.ell == 1 and spec.eps > 0:
        # quadratic symbol with its eps-reduced smallest eigenvalue
        gram = sum(np.outer(z, z) for z in spec.direction_arrays())
        lam = float(np.linalg.eigvalsh(gram)[0]) - spec.eps
        return float(np.sqrt(level / lam))
    b = (level / cmin) ** (1.0 / (2 * spec.ell))
    for _ in range(8):
        b = ((level + spec.eps * b * b) / cmin) ** (1.0 / (2 * spec.ell))
    return float(b)


def _rescale_to_unit_time(spec: KernelSpec) -> tuple[KernelSpec, float, float]:
    """(unit-time spec, spatial scale, amplitude factor) of the homogeneity law."""
    t, ell = spec.t, spec.ell
    eps1 = spec.eps * t ** ((ell - 1.0) / ell)
    return (replace(spec, eps=eps1, t=1.0),
            t ** (-1.0 / (2.0 * ell)), t ** (-1.0 / (2.0 * ell)))


def _symbol_exp_on(spec: KernelSpec, grid: TensorGrid, t: float) -> np.ndarray:
    vals = np.exp(-t * spec.symbol(grid.points())).reshape(grid.shape)
    shell = grid.shell_mask()
    worst = float(np.max(vals[shell]))
    if worst > SYMBOL_BOUNDARY_TOL:
        need = freq_box_for(spec)
        raise DomainTooSmallError(
            f"symbol exponential is {worst:.3g} on the frequency-box shell; "
            f"enlarge the frequency box to about {need:.3g}")
    return vals


def _real_part_checked(values: np.ndarray, what: str) -> np.ndarray:
    values = np.asarray(values)
    scale = max(float(np.max(np.abs(values.real))), 1.0)
    residue = float(np.max(np.abs(values.imag)))
    if residue > IMAG_RESIDUE_TOL * scale:
        raise AccuracyError(
            f"{what} has imaginary residue {residue:.3g} (scale {scale:.3g})")
    return values.real


def evaluate_q(ctx: WeightedContext, spec: KernelSpec, x) -> float | np.ndarray:
    """q_t^(eps) at one point (shape (N,)) or a batch ((M, N))."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = np.atleast_2d(x)
    if not T_DIRECT_MIN <= spec.t <= T_DIRECT_MAX:
        unit, lam, _ = _rescale_to_unit_time(spec)
        amp = spec.t ** (-ctx.homogeneous_dim / (2.0 * spec.ell))
        out = amp * np.atleast_1d(evaluate_q(ctx, unit, pts * lam))
        return float(out[0]) if single else out
    sym = _symbol_exp_on(spec, ctx.freq_grid, spec.t)
    vals = inverse_at_points(ctx, sym, pts) / ctx.c_k
    out = _real_part_checked(vals, "q_t")
    return float(out[0]) if single else out


def q_on_grid(ctx: WeightedContext, spec: KernelSpec) -> GridSampled:
    """q_t^(eps) sampled on the spatial grid of the context."""
    if not T_DIRECT_MIN <= spec.t <= T_DIRECT_MAX:
        raise ValueError("grid sampling expects t in [0.25, 4]; rescale first")
    sym = _symbol_exp_on(spec, ctx.freq_grid, spec.t)
    back = inverse_dunkl_transform(ctx, sym)
    vals = _real_part_checked(back.values / ctx.c_k, "q_t on grid")
    return GridSampled(grid=ctx.grid, values=vals)


def heat_kernel(ctx: WeightedContext, x, t: float) -> float | np.ndarray:
    """h_t(x) = c_k^{-1} (2t)^{-N_h/2} exp(-|x|^2/(4t))."""
    if t <= 0:
        raise ValueError("time t must be positive")
    x = np.asarray(x, dtype=float)
    single = x.ndim <= 1
    pts = np.atleast_2d(x)
    amp = (2.0 * t) ** (-ctx.homogeneous_dim / 2.0) / ctx.c_k
    out = amp * np.exp(-np.sum(pts**2, axis=1) / (4.0 * t))
    return float(out[0]) if single else out


def heat_kernel_two_point(ctx: WeightedContext, x, y, t: float) -> float | np.ndarray:
    """Closed-form h_t(x, y), evaluated in exponentially scaled form."""
    if t <= 0:
        raise ValueError("time t must be positive")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    single = x.ndim == 1 and y.ndim == 1
    xs, ys = np.atleast_2d(x), np.atleast_2d(y)
    xs, ys = np.broadcast_arrays(xs, ys)
    ks = ctx.axis_ks
    amp = (2.0 * t) ** (-ctx.homogeneous_dim / 2.0) / ctx.c_k
    expo = -np.sum((np.abs(xs) - np.abs(ys)) ** 2, axis=1) / (4.0 * t)
    prod = np.ones(len(xs))
    for d in range(ctx.dim):
        prod *= kernel_real_scaled(xs[:, d] * ys[:, d] / (2.0 * t), ks[d])
    out = amp * np.exp(expo) * prod
    return float(out[0]) if single else out


def _kernel_at_point(ctx: WeightedContext, x: np.ndarray, grid: TensorGrid) -> np.ndarray:
    """E(i xi, x) on all nodes of a frequency grid, as a shaped array."""
    ks = ctx.axis_ks
    axis_vals = []
    for d in range(ctx.dim):
        re, im = kernel_imag_parts(grid.axis_nodes(d) * x[d], ks[d])
        axis_vals.append(re + 1j * im)
    if ctx.dim == 1:
        return axis_vals[0]
    return np.multiply.outer(axis_vals[0], axis_vals[1])


def dunkl_translate(ctx: WeightedContext, f, x) -> GridSampled:
    """tau_x f on the spatial grid: F^{-1}[E(i xi, x) F f(xi)]."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    tf = dunkl_transform(ctx, f)
    shifted = tf.values * _kernel_at_point(ctx, x, ctx.freq_grid)
    back = inverse_dunkl_transform(ctx, shifted)
    vals = _real_part_checked(back.values, "translated function")
    return GridSampled(grid=ctx.grid, values=vals)


def translate_at_points(ctx: WeightedContext, f, x, points) -> np.ndarray:
    """tau_x f evaluated at arbitrary points."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    tf = dunkl_transform(ctx, f)
    shifted = tf.values * _kernel_at_point(ctx, x, ctx.freq_grid)
    vals = inverse_at_points(ctx, shifted, points)
    return _real_part_checked(vals, "translated function")


def two_point_kernel(ctx: WeightedContext, spec: KernelSpec, x, y) -> float | np.ndarray:
    """q_t(x, y) = tau_x q_t(-y), by a single frequency-domain quadrature."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    single = x.ndim == 1 and y.ndim == 1
    xs, ys = np.atleast_2d(x), np.atleast_2d(y)
    xs, ys = np.broadcast_arrays(xs, ys)
    if not T_DIRECT_MIN <= spec.t <= T_DIRECT_MAX:
        unit, lam, _ = _rescale_to_unit_time(spec)
        amp = spec.t ** (-ctx.homogeneous_dim / (2.0 * spec.ell))
        out = amp * np.atleast_1d(two_point_kernel(ctx, unit, xs * lam, ys * lam))
        return float(out[0]) if single else out
    grid = ctx.freq_grid
    sym = _symbol_exp_on(spec, grid, spec.t)
    ks = ctx.axis_ks
    pair_axis = []
    for d in range(ctx.dim):
        ux = np.outer(xs[:, d], grid.axis_nodes(d))
        uy = np.outer(ys[:, d], grid.axis_nodes(d))
        rex, imx = kernel_imag_parts(ux, ks[d])
        rey, imy = kernel_imag_parts(uy, ks[d])
        pair_axis.append((rex + 1j * imx) * (rey - 1j * imy)
                         * grid.axes[d].weights[None, :])
    if ctx.dim == 1:
        acc = pair_axis[0] @ sym.reshape(-1)
    else:
        acc = np.einsum("ma,mb,ab->m", pair_axis[0], pair_axis[1], sym)
    out = _real_part_checked(acc / ctx.c_k**2, "two-point kernel")
    return float(out[0]) if single else out


# ---------------------------------------------------------------------------
# structural identity checks
# ---------------------------------------------------------------------------

KERNEL_CHECK_KINDS = ("mass", "symmetry", "positivity", "semigroup",
                      "scaling", "decomposition", "laplacian-consistency")


def _spec_from(params: dict, dim: int) -> KernelSpec:
    raw = params.get("spec")
    if isinstance(raw, KernelSpec):
        return raw
    if raw is None:
        return KernelSpec.heat(dim, t=float(params.get("t", 1.0)))
    return KernelSpec(directions=tuple(tuple(map(float, z))
                                       for z in raw["directions"]),
                      ell=int(raw.get("ell", 1)),
                      eps=float(raw.get("eps", 0.0)),
                      t=float(raw.get("t", 1.0)))


def _identity_context(ctx: WeightedContext, spec: KernelSpec,
                      params: dict, t_min: float) -> WeightedContext:
    """Context sized for convolution checks: the spatial box must contain the
    slowly decaying q of order l, the frequency box the symbol decay."""
    if spec.ell == 1 and not any(key in params for key in
                                 ("box", "n_half", "freq_box", "freq_n_half")):
        return ctx
    box = float(params.get("box", 12.0 if spec.ell == 1 else 48.0))
    n_half = int(params.get("n_half", ctx.grid.axes[0].n_half
                            if spec.ell == 1 else 600))
    fbox = float(params.get("freq_box",
                            np.ceil(freq_box_for(replace(spec, t=t_min)) * 1.1)))
    fn_half = int(params.get("freq_n_half", 200))
    return ctx.with_grids(box=box, n_half=n_half, freq_box=fbox,
                          freq_n_half=fn_half)


def _default_points(dim: int, radii=(0.0, 1.0, 3.0)) -> np.ndarray:
    pts = np.zeros((len(radii), dim))
    pts[:, 0] = radii
    return pts


def _check_mass(ctx: WeightedContext, params: dict) -> VerificationReport:
    t = float(params.get("t", 1.0))
    tol = float(params.get("tol", 1e-6))
    points = np.atleast_2d(np.asarray(
        params.get("points", _default_points(ctx.dim)), dtype=float))
    grid_pts = ctx.grid.points()
    masses = []
    for x in points:
        vals = heat_kernel_two_point(ctx, np.broadcast_to(x, grid_pts.shape),
                                     grid_pts, t)
        masses.append(float(ctx.integrate(ctx.grid, vals.reshape(ctx.grid.shape))))
    defect = max(abs(m - 1.0) for m in masses)
    return VerificationReport.from_defect(
        "kernel-mass", {"t": t, "points": points.tolist(), "tol": tol},
        defect, tol, fitted={"masses": masses}, grid=grid_metadata(ctx))


def _pair_sample(ctx: WeightedContext, n: int, radius: float) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(20240817)
    xs = rng.uniform(-radius, radius, size=(n, ctx.dim))
    ys = rng.uniform(-radius, radius, size=(n, ctx.dim))
    return xs, ys


def _check_symmetry(ctx: WeightedContext, params: dict) -> VerificationReport:
    spec = _spec_from(params, ctx.dim)
    tol = float(params.get("tol", 1e-8))
    n = int(params.get("n_pairs", 20))
    xs, ys = _pair_sample(ctx, n, radius=float(params.get("radius", 2.5)))
    qxy = np.atleast_1d(two_point_kernel(ctx, spec, xs, ys))
    qyx = np.atleast_1d(two_point_kernel(ctx, spec, ys, xs))
    scale = max(float(np.max(np.abs(qxy))), 1e-300)
    defect = float(np.max(np.abs(qxy - qyx))) / scale
    return VerificationReport.from_defect(
        "kernel-symmetry", {"spec": _spec_params(spec), "n_pairs": n, "tol": tol},
        defect, tol, fitted={"scale": scale}, grid=grid_metadata(ctx))


def _check_positivity(ctx: WeightedContext, params: dict) -> VerificationReport:
    t_set = [float(t) for t in params.get("t_set", (0.5, 1.0, 2.0))]
    n = int(params.get("n_pairs", 50))
    xs, ys = _pair_sample(ctx, n, radius=float(params.get("radius", 3.0)))
    min_val = np.inf
    for t in t_set:
        vals = np.atleast_1d(heat_kernel_two_point(ctx, xs, ys, t))
        min_val = min(min_val, float(np.min(vals)))
    defect = max(0.0, -min_val) if min_val > 0.0 else max(1e-300, -min_val)
    return VerificationReport.from_defect(
        "kernel-positivity", {"t_set": t_set, "n_pairs": n}, defect, 0.0,
        fitted={"min_value": min_val}, grid=grid_metadata(ctx))


def _check_semigroup(ctx: WeightedContext, params: dict) -> VerificationReport:
    spec = _spec_from(params, ctx.dim)
    tol = float(params.get("tol", 1e-7))
    cctx = _identity_context(ctx, spec, params, t_min=spec.t / 2.0)
    half = q_on_grid(cctx, replace(spec, t=spec.t / 2.0))
    conv = dunkl_convolve(cctx, half, half)
    direct = q_on_grid(cctx, spec)
    defect = float(np.max(np.abs(conv.values.real - direct.values)))
    return VerificationReport.from_defect(
        "kernel-semigroup", {"spec": _spec_params(spec), "tol": tol},
        defect, tol, fitted={"sup_q": float(np.max(np.abs(direct.values)))},
        grid=grid_metadata(cctx))


def _check_scaling(ctx: WeightedContext, params: dict) -> VerificationReport:
    spec = _spec_from(params, ctx.dim)
    tol = float(params.get("tol", 1e-7))
    t_values = [float(t) for t in params.get("t_values", (0.5, 2.0))]
    pts = _default_points(ctx.dim, radii=np.linspace(0.0, 2.0, 9))
    defect = 0.0
    for t in t_values:
        spec_t = replace(spec, t=t)
        lhs = np.atleast_1d(evaluate_q(ctx, spec_t, pts))
        unit, lam, _ = _rescale_to_unit_time(spec_t)
        amp = t ** (-ctx.homogeneous_dim / (2.0 * spec.ell))
        rhs = amp * np.atleast_1d(evaluate_q(ctx, unit, pts * lam))
        defect = max(defect, float(np.max(np.abs(lhs - rhs))))
    return VerificationReport.from_defect(
        "kernel-scaling", {"spec": _spec_params(spec), "t_values": t_values,
                           "tol": tol},
        defect, tol, grid=grid_metadata(ctx))


def _check_decomposition(ctx: WeightedContext, params: dict) -> VerificationReport:
    spec = _spec_from(params, ctx.dim)
    eps0 = float(params.get("eps0", 0.1))
    tol = float(params.get("tol", 1e-6))
    cctx = _identity_context(ctx, spec, params, t_min=eps0 / 2.0)
    q_eps = q_on_grid(cctx, replace(spec, eps=spec.eps + eps0))
    h_vals = heat_kernel(cctx, cctx.grid.points(), eps0 / 2.0)
    h_half = GridSampled(grid=cctx.grid, values=h_vals.reshape(cctx.grid.shape))
    step1 = dunkl_convolve(cctx, q_eps, h_half)
    step1 = GridSampled(grid=cctx.grid, values=step1.values.real)
    step2 = dunkl_convolve(cctx, step1, h_half)
    direct = q_on_grid(cctx, spec)
    defect = float(np.max(np.abs(step2.values.real - direct.values)))
    return VerificationReport.from_defect(
        "kernel-decomposition",
        {"spec": _spec_params(spec), "eps0": eps0, "tol": tol},
        defect, tol, fitted={"sup_q": float(np.max(np.abs(direct.values)))},
        grid=grid_metadata(cctx))


def _laplacian_battery(dim: int) -> list[PolyGauss]:
    if dim == 1:
        fams = [gaussian(1, 0.5), monomial_gauss([1], [0.5]),
                monomial_gauss([2], [0.4]), monomial_gauss([3], [0.6]),
                monomial_gauss([4], [0.5])]
    else:
        fams = [gaussian(dim, 0.5)]
        for d in range(dim):
            powers = [0] * dim
            powers[d] = 2
            fams.append(monomial_gauss(powers, [0.5] * dim))
        fams.append(monomial_gauss([1] * dim, [0.4] * dim))
    return fams


def _check_laplacian(ctx: WeightedContext, params: dict) -> VerificationReport:
    tol = float(params.get("tol", 1e-8))
    pts = _default_points(ctx.dim, radii=np.linspace(-3.0, 3.0, 13))
    if ctx.dim == 2:
        pts[:, 1] = 0.7 * pts[:, 0] + 0.3
    defect = 0.0
    for f in _laplacian_battery(ctx.dim):
        via_formula = dunkl_laplacian(ctx, f, method="formula")(pts)
        via_compose = dunkl_laplacian(ctx, f, method="compose")(pts)
        scale = max(float(np.max(np.abs(via_formula))), 1.0)
        defect = max(defect, float(np.max(np.abs(via_formula - via_compose))) / scale)
    return VerificationReport.from_defect(
        "kernel-laplacian-consistency", {"tol": tol}, defect, tol,
        grid=grid_metadata(ctx))


def _spec_params(spec: KernelSpec) -> dict:
    return {"directions": [list(z) for z in spec.directions],
            "ell": spec.ell, "eps": spec.eps, "t": spec.t}


_KIND_DISPATCH = {
    "mass": _check_mass,
    "symmetry": _check_symmetry,
    "positivity": _check_positivity,
    "semigroup": _check_semigroup,
    "scaling": _check_scaling,
    "decomposition": _check_decomposition,
    "laplacian-consistency": _check_laplacian,
}


def kernel_identity_check(ctx: WeightedContext, kind: str,
                          params: dict | None = None) -> VerificationReport:
    """Run one structural kernel identity check and report defect vs tolerance."""
    if kind not in _KIND_DISPATCH:
        raise ValueError(
            f"unknown kernel check kind {kind!r}; known: {KERNEL_CHECK_KINDS}")
    return _KIND_DISPATCH[kind](ctx, dict(params or {}))
