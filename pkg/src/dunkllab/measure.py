"""Weighted measure dw(x) = prod_{a in R} |<x,a>|^{k(a)} dx and friends.

Provides the weighted context (grids + normalization constant), ball volumes of
the weighted measure, the exponential weight eta(x,s) = exp(sqrt(1+s^2|x|^2))
with closed-form derivatives, and weighted norms.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
from scipy.special import roots_legendre

from .errors import AccuracyError, CapabilityError, DomainTooSmallError
from .quadrature import TensorGrid, boundary_shell_fraction, check_shell
from .root_systems import ReflectionGroup, RootSystemSpec, generate_group

DEFAULT_SHELL_TOL = 1e-10


def weight_density(system: RootSystemSpec, points: np.ndarray) -> np.ndarray:
    """prod over roots of |<x, a>|^{k(a)} at each point (pointwise measure density)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    vals = np.ones(pts.shape[0])
    for a, k in zip(system.roots, system.multiplicity):
        if k != 0.0:
            vals *= np.abs(pts @ a) ** k
    return vals


# ---------------------------------------------------------------------------
# ball volumes
# ---------------------------------------------------------------------------

def _axis_antiderivative(v, k: float):
    """Antiderivative of the per-axis density 2^k |u|^{2k}."""
    v = np.asarray(v, dtype=float)
    return 2.0**k * np.sign(v) * np.abs(v) ** (2.0 * k + 1.0) / (2.0 * k + 1.0)


def _ball_volume_product2(ks, center, r: float, n: int = 240) -> float:
    """w(B(center, r)) for a 2-axis product weight, reduced to one dimension.

    Integrates over u = x1 - r*cos(theta); the x2 chord integral is the exact
    antiderivative.  The theta integral is split where u crosses 0 so each
    panel is smooth up to an algebraic endpoint factor.
    """
    k1, k2 = ks
    x1, x2 = center

    def integrand(theta):
        u = x1 - r * np.cos(theta)
        h = r * np.sin(theta)
        chord = _axis_antiderivative(x2 + h, k2) - _axis_antiderivative(x2 - h, k2)
        return 2.0**k1 * np.abs(u) ** (2.0 * k1) * chord * r * np.sin(theta)

    cuts = [0.0, np.pi]
    if abs(x1) < r:
        cuts.append(float(np.arccos(np.clip(x1 / r, -1.0, 1.0))))
    cuts = sorted(cuts)
    t, w = roots_legendre(n)
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        theta = (b - a) / 2.0 * t + (a + b) / 2.0
        total += (b - a) / 2.0 * np.sum(w * integrand(theta))
    return float(total)


def _ball_volume_generic2(system: RootSystemSpec, center, r: float,
                          n_rad: int = 120, n_ang: int = 512) -> float:
    """Polar quadrature for a generic planar system (measured constants only)."""
    t, w = roots_legendre(n_rad)
    rho = r * (t + 1.0) / 2.0
    wr = w * r / 2.0
    theta = (np.arange(n_ang) + 0.5) * (2.0 * np.pi / n_ang)
    dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    pts = center[None, None, :] + rho[:, None, None] * dirs[None, :, :]
    dens = weight_density(system, pts.reshape(-1, 2)).reshape(n_rad, n_ang)
    ang = dens.sum(axis=1) * (2.0 * np.pi / n_ang)
    return float(np.sum(wr * rho * ang))


def ball_volume(system: RootSystemSpec, center, r: float) -> float:
    """Weighted volume w(B(center, r))."""
    center = np.atleast_1d(np.asarray(center, dtype=float))
    if r <= 0:
        raise ValueError("ball radius must be positive")
    if system.is_product():
        ks = system.axis_multiplicities()
        if system.dim == 1:
            lo, hi = center[0] - r, center[0] + r
            return float(_axis_antiderivative(hi, ks[0]) - _axis_antiderivative(lo, ks[0]))
        if system.dim == 2:
            return _ball_volume_product2(ks, center, r)
        raise CapabilityError("product ball volumes implemented for dim <= 2")
    if system.dim == 2:
        return _ball_volume_generic2(system, center, r)
    raise CapabilityError("generic ball volumes implemented for dim 2 only")


def volume_max(system: RootSystemSpec, x, y, t: float) -> float:
    """V(x, y, t) = max(w(B(x,t)), w(B(y,t))) — the two-point normalization."""
    return max(ball_volume(system, x, t), ball_volume(system, y, t))


def ball_volume_proxy(system: RootSystemSpec, center, r: float) -> float:
    """Comparability proxy r^dim * prod (|<x,a>| + r)^{k(a)}.

    w(B(x,r)) and this proxy stay within system-dependent constant factors of
    each other; the ratio is exercised by tests, not used in computations.
    """
    center = np.atleast_1d(np.asarray(center, dtype=float))
    val = float(r) ** system.dim
    for a, k in zip(system.roots, system.multiplicity):
        if k != 0.0:
            val *= (abs(float(center @ a)) + r * np.linalg.norm(a)) ** k
    return val


# ---------------------------------------------------------------------------
# the exponential weight eta and its derivatives
# ---------------------------------------------------------------------------

def _radial_derivs(rho: np.ndarray, s: float, order: int) -> list[np.ndarray]:
    """Derivatives in rho of F(rho) = exp(sqrt(1 + s^2 rho)), orders 0..order."""
    g = np.sqrt(1.0 + s * s * rho)
    E = np.exp(g)
    out = [E]
    if order >= 1:
        gp = s * s / (2.0 * g)
        out.append(gp * E)
    if order >= 2:
        gpp = -(s**4) / (4.0 * g**3)
        out.append((gpp + gp**2) * E)
    if order >= 3:
        gp3 = 3.0 * s**6 / (8.0 * g**5)
        out.append((gp3 + 3.0 * gp * gpp + gp**3) * E)
    if order >= 4:
        gp4 = -15.0 * s**8 / (16.0 * g**7)
        out.append((gp4 + 4.0 * gp * gp3 + 3.0 * gpp**2 + 6.0 * gp**2 * gpp + gp**4) * E)
    return out


def eta(points: np.ndarray, s: float) -> np.ndarray:
    """eta(x, s) = exp(sqrt(1 + s^2 |x|^2)); radial and reflection-invariant."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    rho = np.sum(pts**2, axis=1)
    return np.exp(np.sqrt(1.0 + s * s * rho))


def eta_directional(points: np.ndarray, s: float, zeta, order: int) -> np.ndarray:
    """Directional derivative (d/dt)^order eta(x + t*zeta, s) at t = 0.

    Closed form through order 4 via the chain rule on rho(t) = |x + t zeta|^2,
    whose only nonzero derivatives are rho' and rho''.
    """
    if not 1 <= order <= 4:
        raise ValueError("directional derivatives implemented for orders 1..4")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    zeta = np.asarray(zeta, dtype=float)
    rho = np.sum(pts**2, axis=1)
    rp = 2.0 * (pts @ zeta)
    rpp = 2.0 * float(zeta @ zeta)
    F = _radial_derivs(rho, s, order)
    if order == 1:
        return F[1] * rp
    if order == 2:
        return F[2] * rp**2 + F[1] * rpp
    if order == 3:
        return F[3] * rp**3 + 3.0 * F[2] * rp * rpp
    return F[4] * rp**4 + 6.0 * F[3] * rp**2 * rpp + 3.0 * F[2] * rpp**2


def eta_partial(points: np.ndarray, s: float, index: tuple[int, ...]) -> np.ndarray:
    """Mixed partial derivative of eta w.r.t. the coordinates in ``index``
    (e.g. (0, 0, 1) = twice in x_0, once in x_1).  Orders 1..4."""
    order = len(index)
    if not 1 <= order <= 4:
        raise ValueError("partial derivatives implemented for orders 1..4")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    rho = np.sum(pts**2, axis=1)
    F = _radial_derivs(rho, s, order)
    r1 = {d: 2.0 * pts[:, d] for d in set(index)}

    def rho2(a, b):
        return 2.0 if a == b else 0.0

    idx = list(index)
    if order == 1:
        (a,) = idx
        return F[1] * r1[a]
    if order == 2:
        a, b = idx
        return F[2] * r1[a] * r1[b] + F[1] * rho2(a, b)
    if order == 3:
        a, b, c = idx
        return (F[3] * r1[a] * r1[b] * r1[c]
                + F[2] * (rho2(a, b) * r1[c] + rho2(a, c) * r1[b] + rho2(b, c) * r1[a]))
    a, b, c, d = idx
    term4 = F[4] * r1[a] * r1[b] * r1[c] * r1[d]
    term3 = F[3] * (rho2(a, b) * r1[c] * r1[d] + rho2(a, c) * r1[b] * r1[d]
                    + rho2(a, d) * r1[b] * r1[c] + rho2(b, c) * r1[a] * r1[d]
                    + rho2(b, d) * r1[a] * r1[c] + rho2(c, d) * r1[a] * r1[b])
    term2 = F[2] * (rho2(a, b) * rho2(c, d) + rho2(a, c) * rho2(b, d)
                    + rho2(a, d) * rho2(b, c))
    return term4 + term3 + term2


def eta_radial_factor(points: np.ndarray, s: float) -> np.ndarray:
    """F'(|x|^2) for F(rho) = exp(sqrt(1+s^2 rho)).

    This is the whole content of the reflection-difference quotient of a first
    derivative of eta: for any root a and direction zeta,
    (d_zeta eta(x) - d_zeta eta(sigma_a x)) / <a, x> = 4 F'(|x|^2) <a,zeta>/|a|^2,
    because eta is radial.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    rho = np.sum(pts**2, axis=1)
    return _radial_derivs(rho, s, 1)[1]


# ---------------------------------------------------------------------------
# weighted context
# ---------------------------------------------------------------------------

@dataclass
class WeightedContext:
    """Root system + quadrature grids + cached normalization constant.

    The spatial grid covers [-box, box]^dim, the frequency grid
    [-freq_box, freq_box]^dim; both carry the weighted measure in their
    weights.  ``n_half`` is the node count per half-axis.
    """

    system: RootSystemSpec
    box: float = 12.0
    n_half: int | None = None
    freq_box: float = 13.0
    freq_n_half: int | None = None

    def __post_init__(self):
        if not self.system.is_product():
            raise CapabilityError(
                "weighted quadrature contexts need per-coordinate multiplicities "
                "(rank-1 or sign-change product systems); generic systems are "
                "supported for group, density, volume, and distance operations only"
            )
        if self.n_half is None:
            self.n_half = 200 if self.system.dim == 1 else 80
        if self.freq_n_half is None:
            self.freq_n_half = self.n_half
        self._cache: dict = {}

    @property
    def dim(self) -> int:
        return self.system.dim

    @property
    def homogeneous_dim(self) -> float:
        return self.system.homogeneous_dim

    @property
    def is_product(self) -> bool:
        return self.system.is_product()

    @cached_property
    def axis_ks(self) -> np.ndarray:
        if not self.is_product:
            raise CapabilityError("per-axis multiplicities need a product system")
        return self.system.axis_multiplicities()

    def _make_grid(self, box: float, n_half: int) -> TensorGrid:
        return TensorGrid.build(self.axis_ks, box, n_half)

    @cached_property
    def grid(self) -> TensorGrid:
        return self._make_grid(self.box, self.n_half)

    @cached_property
    def grid_fine(self) -> TensorGrid:
        return self.grid.refined()

    @cached_property
    def freq_grid(self) -> TensorGrid:
        return self._make_grid(self.freq_box, self.freq_n_half)

    @cached_property
    def freq_grid_fine(self) -> TensorGrid:
        return self.freq_grid.refined()

    @cached_property
    def group(self) -> ReflectionGroup:
        return generate_group(self.system)

    def integrate(self, grid: TensorGrid, values: np.ndarray) -> float | complex:
        return grid.integrate(values)

    @cached_property
    def c_k(self) -> float:
        """Gaussian mass integral c_k = ∫ exp(-|x|^2/2) dw(x), by quadrature,
        refinement-checked; cross-checked against (2 pi)^{dim/2} when k = 0."""
        def gauss(grid):
            pts = grid.points()
            vals = np.exp(-0.5 * np.sum(pts**2, axis=1))
            return self.integrate(grid, vals)

        base = gauss(self.grid)
        fine = gauss(self.grid_fine)
        if abs(base - fine) > 1e-9 * abs(fine):
            raise AccuracyError(
                f"normalization constant unstable under refinement: "
                f"{base:.12g} vs {fine:.12g}"
            )
        if np.all(self.system.multiplicity == 0.0):
            classical = (2.0 * np.pi) ** (self.dim / 2.0)
            if abs(fine - classical) > 1e-8 * classical:
                raise AccuracyError(
                    f"k=0 normalization {fine:.12g} disagrees with (2 pi)^(dim/2)"
                )
        return float(fine)

    def with_grids(self, box: float | None = None, n_half: int | None = None,
                   freq_box: float | None = None,
                   freq_n_half: int | None = None) -> "WeightedContext":
        """A context on the same system with different grid geometry."""
        return WeightedContext(
            system=self.system,
            box=self.box if box is None else box,
            n_half=self.n_half if n_half is None else n_half,
            freq_box=self.freq_box if freq_box is None else freq_box,
            freq_n_half=self.freq_n_half if freq_n_half is None else freq_n_half,
        )


def weighted_norm(ctx: WeightedContext, f, s: float,
                  shell_tol: float = DEFAULT_SHELL_TOL,
                  accuracy_tol: float = 1e-8) -> float:
    """L^2 norm of f against eta(., s) dw; s = 0 means plain L^2(dw).

    f may be a callable on point batches or an object with ``values_on(grid)``.
    The integrand must decay inside the box (boundary-shell check) and the
    value must be stable under grid refinement.
    """
    def norm_sq(grid: TensorGrid) -> float:
        if hasattr(f, "values_on"):
            vals = np.asarray(f.values_on(grid), dtype=float).reshape(grid.shape)
        else:
            vals = grid.evaluate(f)
        integrand = np.abs(vals) ** 2
        if s != 0.0:
            pts = grid.points()
            integrand = integrand * eta(pts, s).reshape(grid.shape)
        check_shell(grid, integrand, tol=shell_tol, what="weighted norm")
        return float(grid.integrate(integrand))

    base = norm_sq(ctx.grid)
    fine = norm_sq(ctx.grid_fine)
    if abs(base - fine) > accuracy_tol * max(abs(fine), 1.0):
        raise AccuracyError(
            f"weighted norm unstable under refinement: "
            f"{base:.12g} vs {fine:.12g}"
        )
    return float(np.sqrt(fine))
