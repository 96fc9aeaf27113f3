"""Dunkl transform, inverse, Plancherel diagnostics, Dunkl convolution.

Forward:  F f(xi) = c_k^{-1} int E(-i xi, x) f(x) dw(x)
Inverse:  F^{-1} g(x) = c_k^{-1} int E(i xi, x) g(xi) dw(xi)

Both sides use the tensor quadrature grids of the WeightedContext.  For
product systems E factors per coordinate, so the transform is one matrix
product per axis; the per-axis kernel-value matrices are cached (they are
the dominant memory object) under a configurable byte cap.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from .dunkl_kernel import kernel_imag_parts
from .errors import AccuracyError, CapabilityError
from .functions import GridSampled
from .measure import WeightedContext
from .quadrature import TensorGrid, boundary_shell_fraction

DEFAULT_SHELL_TOL = 1e-10
ROUNDTRIP_TOL = 1e-6


class KernelMatrixCache:
    """Per-axis matrices E(i xi_a x_b), keyed by nodes and multiplicity."""

    def __init__(self, max_bytes: int = 256 * 2**20):
        self.max_bytes = max_bytes
        self._store: OrderedDict[bytes, np.ndarray] = OrderedDict()
        self._bytes = 0

    def matrix(self, xi_nodes: np.ndarray, x_nodes: np.ndarray, k: float) -> np.ndarray:
        key = (np.float64(k).tobytes() + xi_nodes.tobytes() + x_nodes.tobytes())
        hit = self._store.get(key)
        if hit is not None:
            self._store.move_to_end(key)
            return hit
        u = np.outer(xi_nodes, x_nodes)
        re, im = kernel_imag_parts(u, k)
        mat = re + 1j * im
        self._store[key] = mat
        self._bytes += mat.nbytes
        while self._bytes > self.max_bytes and len(self._store) > 1:
            _, old = self._store.popitem(last=False)
            self._bytes -= old.nbytes
        return mat


_CACHE = KernelMatrixCache()


def set_kernel_cache_limit(max_bytes: int):
    """Resize the process-wide kernel-matrix cache."""
    _CACHE.max_bytes = int(max_bytes)


@dataclass(frozen=True)
class SpectralFunction:
    """Frequency-side values on a tensor grid, tagged by how they arose."""

    grid: TensorGrid
    values: np.ndarray
    provenance: str = "symbol"  # "forward" (transform of a function) or "symbol"

    def __post_init__(self):
        v = np.asarray(self.values)
        object.__setattr__(self, "values", v.reshape(self.grid.shape))

    def values_on(self, grid: TensorGrid) -> np.ndarray:
        if grid.shape != self.grid.shape:
            raise ValueError("SpectralFunction is bound to its own grid")
        return self.values


def _require_product(ctx: WeightedContext):
    if not ctx.is_product:
        raise CapabilityError(
            "transforms are implemented for sign-flip product systems only")
    if ctx.dim > 2:
        raise CapabilityError("transforms are implemented for dim <= 2")


def _values_on(f, grid: TensorGrid) -> np.ndarray:
    if hasattr(f, "values_on"):
        return np.asarray(f.values_on(grid))
    return np.asarray(f(grid.points())).reshape(grid.shape)


def _axis_transform(ctx: WeightedContext, vals: np.ndarray,
                    src: TensorGrid, dst: TensorGrid, conjugate: bool) -> np.ndarray:
    """Apply the per-axis kernel matrices: dst_a <- sum_b E(+-i a b) w_b vals_b."""
    ks = ctx.axis_ks
    out = np.asarray(vals, dtype=complex)
    for d in range(ctx.dim):
        mat = _CACHE.matrix(dst.axis_nodes(d), src.axis_nodes(d), ks[d])
        if conjugate:
            mat = np.conj(mat)
        weighted = mat * src.axes[d].weights[None, :]
        out = np.moveaxis(np.tensordot(weighted, out, axes=([1], [d])), 0, d)
    return out / ctx.c_k


def dunkl_transform(ctx: WeightedContext, f, *, shell_tol: float = DEFAULT_SHELL_TOL,
                    check_accuracy: bool = False) -> SpectralFunction:
    """Forward transform onto the frequency grid of the context.

    The integrand must have decayed inside the spatial box: the outer 5%
    shell of |f| dw may carry at most ``shell_tol`` of its mass.  With
    ``check_accuracy`` the transform is recomputed on 1.5x-refined grids
    and compared (callable or PolyGauss inputs only).
    """
    _require_product(ctx)
    vals = _values_on(f, ctx.grid)
    frac = boundary_shell_fraction(ctx.grid, np.abs(vals))
    if frac > shell_tol:
        raise AccuracyError(
            f"boundary shell carries {frac:.3g} of |f| mass "
            f"(tolerance {shell_tol:.3g}); enlarge the spatial box")
    out = _axis_transform(ctx, vals, ctx.grid, ctx.freq_grid, conjugate=True)
    if check_accuracy:
        if isinstance(f, GridSampled):
            raise CapabilityError("accuracy check needs an off-grid evaluator")
        fine_vals = _values_on(f, ctx.grid_fine)
        fine = _axis_transform(ctx, fine_vals, ctx.grid_fine, ctx.freq_grid,
                               conjugate=True)
        err = np.max(np.abs(fine - out)) / max(np.max(np.abs(fine)), 1e-300)
        if err > 1e-8:
            raise AccuracyError(
                f"transform changes by {err:.3g} under grid refinement")
    return SpectralFunction(grid=ctx.freq_grid, values=out, provenance="forward")


def inverse_dunkl_transform(ctx: WeightedContext, g) -> GridSampled:
    """Inverse transform of frequency-side data onto the spatial grid.

    ``g`` may be a SpectralFunction, an array of values on the frequency
    grid, or a callable evaluated on it.
    """
    _require_product(ctx)
    if isinstance(g, SpectralFunction):
        vals = g.values_on(ctx.freq_grid)
    elif callable(g) and not isinstance(g, np.ndarray):
        vals = np.asarray(g(ctx.freq_grid.points())).reshape(ctx.freq_grid.shape)
    else:
        vals = np.asarray(g).reshape(ctx.freq_grid.shape)
    out = _axis_transform(ctx, vals, ctx.freq_grid, ctx.grid, conjugate=False)
    return GridSampled(grid=ctx.grid, values=out)


def inverse_at_points(ctx: WeightedContext, g, points: np.ndarray) -> np.ndarray:
    """Inverse transform evaluated at arbitrary spatial points."""
    _require_product(ctx)
    if isinstance(g, SpectralFunction):
        vals = g.values_on(ctx.freq_grid)
    elif callable(g) and not isinstance(g, np.ndarray):
        vals = np.asarray(g(ctx.freq_grid.points())).reshape(ctx.freq_grid.shape)
    else:
        vals = np.asarray(g).reshape(ctx.freq_grid.shape)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    ks = ctx.axis_ks
    factors = []
    for d in range(ctx.dim):
        u = np.outer(pts[:, d], ctx.freq_grid.axis_nodes(d))
        re, im = kernel_imag_parts(u, ks[d])
        factors.append((re + 1j * im) * ctx.freq_grid.axes[d].weights[None, :])
    if ctx.dim == 1:
        acc = factors[0] @ vals.reshape(-1)
    else:
        acc = np.einsum("ma,mb,ab->m", factors[0], factors[1], vals)
    return acc / ctx.c_k


def plancherel_defect(ctx: WeightedContext, f) -> float:
    """Relative defect |  ||f|| - ||Ff||  | / ||f|| in L^2(dw) on each side."""
    vals = _values_on(f, ctx.grid)
    norm_f = np.sqrt(float(ctx.integrate(ctx.grid, np.abs(vals) ** 2)))
    tf = dunkl_transform(ctx, f)
    norm_tf = np.sqrt(float(ctx.integrate(ctx.freq_grid, np.abs(tf.values) ** 2)))
    return abs(norm_f - norm_tf) / norm_f


def dunkl_convolve(ctx: WeightedContext, f, g) -> GridSampled:
    """Dunkl convolution f * g = c_k F^{-1}[(F f)(F g)] on the spatial grid."""
    tf = dunkl_transform(ctx, f)
    tg = dunkl_transform(ctx, g)
    product = SpectralFunction(grid=ctx.freq_grid,
                               values=tf.values * tg.values,
                               provenance="symbol")
    back = inverse_dunkl_transform(ctx, product)
    return GridSampled(grid=ctx.grid, values=ctx.c_k * back.values)
