"""Quadrature grids for the reflection-invariant weight |x|^{2k} per axis.

Each axis carries a rule on [-R, R] built from a Gauss-Jacobi rule on (0, R]
with the density 2^k |x|^{2k} folded into the weights, mirrored to the negative
half.  Splitting at the origin keeps the rule spectrally accurate for smooth
integrands times the (possibly kinked) density, and no node ever lands on a
reflection hyperplane.  For k = 0 the rule is plain Gauss-Legendre per half.

Every reported integral is recomputed on a 1.5x-refined grid and the pair must
agree to the declared tolerance (``integrate_checked``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from .errors import AccuracyError, DomainTooSmallError

REFINE_FACTOR = 1.5
SHELL_FRACTION = 0.05


@lru_cache(maxsize=256)
def _jacobi_cached(n_half: int, two_k: float):
    return roots_jacobi(n_half, 0.0, two_k)


@dataclass(frozen=True)
class AxisRule:
    """Nodes/weights on [-R, R] with the density 2^k |x|^{2k} folded in."""

    nodes: np.ndarray
    weights: np.ndarray
    k: float
    half_width: float
    n_half: int

    @classmethod
    def build(cls, k: float, half_width: float, n_half: int) -> "AxisRule":
        t, w = _jacobi_cached(n_half, 2.0 * k)
        x = half_width * (t + 1.0) / 2.0
        w = w * (half_width / 2.0) ** (2.0 * k + 1.0) * 2.0**k
        nodes = np.concatenate([-x[::-1], x])
        weights = np.concatenate([w[::-1], w])
        return cls(nodes=nodes, weights=weights, k=k, half_width=half_width, n_half=n_half)

    @property
    def size(self) -> int:
        return self.nodes.size


@dataclass(frozen=True)
class TensorGrid:
    """Tensor product of per-axis rules; weight of the full measure included."""

    axes: tuple[AxisRule, ...]

    @classmethod
    def build(cls, ks, half_widths, n_halves) -> "TensorGrid":
        ks = np.atleast_1d(np.asarray(ks, dtype=float))
        half_widths = np.broadcast_to(np.asarray(half_widths, dtype=float), ks.shape)
        n_halves = np.broadcast_to(np.asarray(n_halves, dtype=int), ks.shape)
        axes = tuple(
            AxisRule.build(k, hw, int(nh))
            for k, hw, nh in zip(ks, half_widths, n_halves)
        )
        return cls(axes=axes)

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(ax.size for ax in self.axes)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    def axis_nodes(self, d: int) -> np.ndarray:
        return self.axes[d].nodes

    def points(self) -> np.ndarray:
        """All grid points as an (size, dim) array (C order over axes)."""
        mesh = np.meshgrid(*[ax.nodes for ax in self.axes], indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def weight_tensor(self) -> np.ndarray:
        w = self.axes[0].weights
        for ax in self.axes[1:]:
            w = np.multiply.outer(w, ax.weights)
        return w

    def refined(self, factor: float = REFINE_FACTOR) -> "TensorGrid":
        axes = tuple(
            AxisRule.build(ax.k, ax.half_width, int(np.ceil(ax.n_half * factor)))
            for ax in self.axes
        )
        return TensorGrid(axes=axes)

    def integrate(self, values: np.ndarray) -> float | complex:
        """Integrate values sampled on the grid (tensor shape or flat)."""
        v = np.asarray(values).reshape(self.shape)
        w = self.weight_tensor()
        return np.sum(w * v)

    def evaluate(self, fn) -> np.ndarray:
        """Sample a callable fn(points[M, dim]) -> values on the grid."""
        vals = fn(self.points())
        return np.asarray(vals).reshape(self.shape)

    def shell_mask(self, fraction: float = SHELL_FRACTION) -> np.ndarray:
        """Boolean tensor marking the outer boundary shell (per-axis outer
        ``fraction`` of the half-width)."""
        masks = []
        for ax in self.axes:
            cut = ax.half_width * (1.0 - fraction)
            masks.append(np.abs(ax.nodes) > cut)
        m = masks[0]
        for mm in masks[1:]:
            m = np.logical_or.outer(m, mm)
        return m


def boundary_shell_fraction(grid: TensorGrid, values: np.ndarray,
                            fraction: float = SHELL_FRACTION) -> float:
    """|integrand| mass carried by the outer shell, relative to the total."""
    v = np.abs(np.asarray(values).reshape(grid.shape))
    w = grid.weight_tensor()
    total = float(np.sum(w * v))
    if total == 0.0:
        return 0.0
    shell = float(np.sum((w * v)[grid.shell_mask(fraction)]))
    return shell / total


def check_shell(grid: TensorGrid, values: np.ndarray, tol: float = 1e-10,
                what: str = "integrand") -> None:
    frac = boundary_shell_fraction(grid, values)
    if frac > tol:
        raise DomainTooSmallError(
            f"{what}: boundary shell carries {frac:.3e} of the mass "
            f"(> {tol:.1e}); enlarge the grid box"
        )


def integrate_checked(grid: TensorGrid, fn, tol: float = 1e-9,
                      what: str = "integral") -> float | complex:
    """Integrate fn on the grid and on the 1.5x-refined grid; the two values
    must agree to tol (relative to scale) or an AccuracyError is raised."""
    base = grid.integrate(grid.evaluate(fn))
    fine_grid = grid.refined()
    fine = fine_grid.integrate(fine_grid.evaluate(fn))
    scale = max(abs(base), abs(fine), 1e-300)
    if abs(base - fine) > tol * max(scale, 1.0):
        raise AccuracyError(
            f"{what}: refinement disagreement {abs(base - fine):.3e} "
            f"(values {base!r} vs {fine!r}); increase resolution"
        )
    return fine
