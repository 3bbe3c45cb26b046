"""Sphere inversions and first-passage laws of isotropic stable processes
in dimension ``d >= 2`` relative to the unit sphere and the unit ball.

Surface integrals use the unit-mass measure ``sigma_1`` on ``S_{d-1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate
from scipy.special import betainc

from .errors import DomainError
from .specfun import beta, hyp2f1
from .stable_core import StableParams, free_potential_constant

__all__ = [
    "SphereSpec",
    "SurfaceGrid",
    "surface_grid",
    "invert_sphere",
    "sphere_hit_prob",
    "sphere_hit_density",
    "riesz_sphere_constant",
    "sphere_resolvent_density",
    "ball_passage_density",
    "never_enter_ball_prob",
    "ball_resolvent_density",
    "surface_quadrature",
    "ball_volume_integral",
    "sphere_area",
]


def sphere_area(d: int) -> float:
    """Surface area of the unit sphere in ``R^d``."""
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


@dataclass(frozen=True)
class SphereSpec:
    """Sphere ``S(b, r)`` with center ``b`` and radius ``r``."""

    center: np.ndarray
    radius: float

    def __post_init__(self) -> None:
        c = np.atleast_1d(np.asarray(self.center, dtype=float)).copy()
        c.setflags(write=False)
        object.__setattr__(self, "center", c)
        r = float(self.radius)
        if not (math.isfinite(r) and r > 0.0):
            raise DomainError("sphere radius must be positive")
        object.__setattr__(self, "radius", r)


@dataclass(frozen=True)
class SurfaceGrid:
    """Quadrature nodes on ``S_{d-1}`` with positive weights of unit total mass."""

    nodes: np.ndarray
    weights: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self) -> None:
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 2 or weights.shape != (nodes.shape[0],):
            raise DomainError("nodes must be (n, d) and weights (n,)")
        if np.any(weights <= 0.0):
            raise DomainError("weights must be positive")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise DomainError("weights must sum to 1")
        if np.max(np.abs(np.linalg.norm(nodes, axis=1) - 1.0)) > 1e-12:
            raise DomainError("nodes must be unit vectors")
        nodes = nodes.copy()
        weights = weights.copy()
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "dim", nodes.shape[1])


def surface_grid(d: int, n: Optional[int] = None, n_polar: Optional[int] = None) -> SurfaceGrid:
    """Default grid: uniform trapezoid on the circle (``d = 2``) or Gauss-Legendre
    in ``cos(theta)`` times uniform azimuth (``d = 3``)."""
    if d == 2:
        n = 2048 if n is None else int(n)
        phi = 2.0 * math.pi * np.arange(n) / n
        return SurfaceGrid(np.column_stack([np.cos(phi), np.sin(phi)]), np.full(n, 1.0 / n))
    if d == 3:
        n_phi = 128 if n is None else int(n)
        n_t = 64 if n_polar is None else int(n_polar)
        t, wt = np.polynomial.legendre.leggauss(n_t)
        phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
        ct, ph = np.meshgrid(t, phi, indexing="ij")
        st = np.sqrt(1.0 - ct ** 2)
        nodes = np.column_stack([(st * np.cos(ph)).ravel(), (st * np.sin(ph)).ravel(), ct.ravel()])
        w = np.repeat(wt / 2.0, n_phi) / n_phi
        return SurfaceGrid(nodes, w / w.sum())
    raise DomainError("surface grids are provided for d = 2 and d = 3 only")


# ---------------------------------------------------------------- inversions

def invert_sphere(x, s: SphereSpec, variant: str = "star") -> np.ndarray:
    """Inversion through ``S(b, r)``: ``b + r^2 (x-b)/|x-b|^2`` ("star") or its
    reflection about ``b`` ("diamond")."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != s.center.shape:
        raise DomainError("point and sphere center dimensions differ")
    diff = x - s.center
    n2 = float(diff @ diff)
    if n2 == 0.0:
        raise DomainError("inversion is singular at the sphere center")
    if variant == "star":
        return s.center + s.radius ** 2 * diff / n2
    if variant == "diamond":
        return s.center - s.radius ** 2 * diff / n2
    raise DomainError("variant must be 'star' or 'diamond'")


# ---------------------------------------------------------------- helpers

def _need_multi(p: StableParams, what: str) -> None:
    if p.dim < 2:
        raise DomainError(f"{what} requires dimension d >= 2")


def _point(p: StableParams, x, name: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.shape != (p.dim,):
        raise DomainError(f"{name} must be a vector of length {p.dim}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    return arr


def _hit_constant(p: StableParams) -> float:
    a, d = p.alpha, p.dim
    return (math.gamma((a + d) / 2.0 - 1.0) * math.gamma(a / 2.0)
            / (math.gamma(d / 2.0) * math.gamma(a - 1.0)))


def _q_radius(p: StableParams, r: float) -> float:
    """``P_x(hit S_{d-1})`` as a function of ``r = |x|``."""
    a, d = p.alpha, p.dim
    if a <= 1.0:
        return 0.0
    if r == 1.0:
        return 1.0
    args = ((d - a) / 2.0, 1.0 - a / 2.0, d / 2.0)
    if r < 1.0:
        return _hit_constant(p) * hyp2f1(*args, r * r)
    return _hit_constant(p) * r ** (a - d) * hyp2f1(*args, 1.0 / (r * r))


# ---------------------------------------------------------------- sphere hitting

def sphere_hit_prob(p: StableParams, x) -> float:
    """Probability of ever hitting the unit sphere from ``x``."""
    _need_multi(p, "sphere_hit_prob")
    r = float(np.linalg.norm(_point(p, x, "x")))
    if r == 1.0:
        raise DomainError("x lies on the sphere (probability trivially 1)")
    return _q_radius(p, r)


def sphere_hit_density(p: StableParams, x, y) -> float:
    """Density of the first hitting position on ``S_{d-1}`` w.r.t. ``sigma_1``."""
    _need_multi(p, "sphere_hit_density")
    if p.alpha <= 1.0:
        raise DomainError("the sphere is never hit when alpha <= 1")
    x, y = _point(p, x, "x"), _point(p, y, "y")
    r2 = float(x @ x)
    if r2 == 1.0:
        raise DomainError("x lies on the sphere")
    if abs(float(np.linalg.norm(y)) - 1.0) > 1e-12:
        raise DomainError("y must lie on the unit sphere")
    a, d = p.alpha, p.dim
    return _hit_constant(p) * abs(r2 - 1.0) ** (a - 1.0) / float(np.linalg.norm(x - y)) ** (a + d - 2.0)


def riesz_sphere_constant(p: StableParams) -> float:
    """``int_{S_{d-1}} |z - y|^(alpha-d) sigma_1(dz)`` for any ``|y| = 1``."""
    _need_multi(p, "riesz_sphere_constant")
    if not p.alpha > 1.0:
        raise DomainError("riesz_sphere_constant requires alpha in (1, 2)")
    return 1.0 / _hit_constant(p)


def sphere_resolvent_density(p: StableParams, x, y) -> float:
    """Potential density of the process killed on first hitting ``S_{d-1}``."""
    _need_multi(p, "sphere_resolvent_density")
    x, y = _point(p, x, "x"), _point(p, y, "y")
    nx, ny = float(np.linalg.norm(x)), float(np.linalg.norm(y))
    if nx == 1.0 or ny == 1.0:
        raise DomainError("x and y must lie off the unit sphere")
    dist = float(np.linalg.norm(x - y))
    if dist == 0.0:
        raise DomainError("resolvent is singular on the diagonal")
    kappa = free_potential_constant(p) * dist ** (p.alpha - p.dim)
    if p.alpha <= 1.0:
        return kappa
    if ny == 0.0:
        # |y| |x - y/|y|^2| -> 1 as y -> 0
        arg = 1.0 / dist
    else:
        arg = ny * float(np.linalg.norm(x - y / ny ** 2)) / dist
    q = 1.0 if abs(arg - 1.0) < 1e-15 else _q_radius(p, arg)
    return kappa * (1.0 - q)


# ---------------------------------------------------------------- ball entrance and exit

def ball_passage_density(p: StableParams, x, y):
    """Exit density from the ball (``|x| < 1 < |y|``) or entrance density into it
    (``|y| < 1 < |x|``).

    ``y`` may also be an ``(n, d)`` array of points, giving an array of densities.
    """
    _need_multi(p, "ball_passage_density")
    x = _point(p, x, "x")
    ys = np.asarray(y, dtype=float)
    batch = ys.ndim == 2
    if batch:
        if ys.shape[1] != p.dim:
            raise DomainError(f"y must have {p.dim} columns")
    else:
        ys = _point(p, y, "y")[None, :]
    rx2 = float(x @ x)
    ry2 = np.einsum("ij,ij->i", ys, ys)
    if not (np.all((rx2 < 1.0) & (ry2 > 1.0)) or np.all((rx2 > 1.0) & (ry2 < 1.0))):
        raise DomainError("x and y must lie strictly on opposite sides of the sphere")
    a, d = p.alpha, p.dim
    c = math.pi ** (-(d / 2.0 + 1.0)) * math.gamma(d / 2.0) * math.sin(math.pi * a / 2.0)
    out = (c * (abs(1.0 - rx2) / np.abs(1.0 - ry2)) ** (a / 2.0)
           * np.linalg.norm(ys - x, axis=1) ** (-d))
    return out if batch else float(out[0])


def never_enter_ball_prob(p: StableParams, x) -> float:
    """Probability that the unit ball is never entered from ``|x| > 1``.

    Equals the regularised incomplete beta ``I_{1-|x|^-2}(alpha/2, (d-alpha)/2)``.
    """
    _need_multi(p, "never_enter_ball_prob")
    r2 = float(np.sum(_point(p, x, "x") ** 2))
    if r2 <= 1.0:
        raise DomainError("never_enter_ball_prob requires |x| > 1")
    a, b = p.alpha / 2.0, (p.dim - p.alpha) / 2.0
    t = 1.0 - 1.0 / r2
    if t <= a / (a + b):
        return float(betainc(a, b, t))
    return 1.0 - float(betainc(b, a, 1.0 / r2))


def _zeta_integral(p: StableParams, zeta: float) -> float:
    """``int_0^zeta (u+1)^(-d/2) u^(alpha/2-1) du`` as an incomplete beta."""
    a, b = p.alpha / 2.0, (p.dim - p.alpha) / 2.0
    if zeta <= 0.0:
        return 0.0
    t, w = zeta / (1.0 + zeta), 1.0 / (1.0 + zeta)
    full = beta(a, b)
    if t <= a / (a + b):
        return float(betainc(a, b, t)) * full
    return (1.0 - float(betainc(b, a, w))) * full


def ball_resolvent_density(p: StableParams, x, y, region: str = "interior") -> float:
    """Potential density killed on leaving the ball (``interior``) or on entering
    it (``exterior``)."""
    _need_multi(p, "ball_resolvent_density")
    x, y = _point(p, x, "x"), _point(p, y, "y")
    rx2, ry2 = float(x @ x), float(y @ y)
    if region == "interior":
        if not (rx2 < 1.0 and ry2 < 1.0):
            raise DomainError("interior resolvent needs |x|, |y| < 1")
        num = (1.0 - rx2) * (1.0 - ry2)
    elif region == "exterior":
        if not (rx2 > 1.0 and ry2 > 1.0):
            raise DomainError("exterior resolvent needs |x|, |y| > 1")
        num = (rx2 - 1.0) * (ry2 - 1.0)
    else:
        raise DomainError("region must be 'interior' or 'exterior'")
    dist = float(np.linalg.norm(x - y))
    if dist == 0.0:
        raise DomainError("resolvent is singular on the diagonal")
    a, d = p.alpha, p.dim
    const = 2.0 ** (-a) * math.pi ** (-d / 2.0) * math.gamma(d / 2.0) / math.gamma(a / 2.0) ** 2
    return const * dist ** (a - d) * _zeta_integral(p, num / dist ** 2)


# ---------------------------------------------------------------- quadrature

def _frame(pole: np.ndarray) -> np.ndarray:
    """Orthogonal matrix whose first column is ``pole``."""
    d = pole.shape[0]
    m = np.eye(d)
    m[:, 0] = pole
    q, _ = np.linalg.qr(m)
    if q[:, 0] @ pole < 0:
        q = -q
    return q


def _singular_surface(d: int, f: Callable[[np.ndarray], np.ndarray], pole: np.ndarray,
                      power: float, n_phi: int) -> float:
    """``int |z - pole|^power f(z) sigma_1(dz)`` for smooth ``f``.

    The angle from the pole is integrated adaptively with an algebraic endpoint
    weight carrying the singularity; the azimuth (d = 3) by the trapezoid rule.
    """
    q = _frame(pole)
    if d == 2:
        two_pi = 2.0 * math.pi

        def g(phi: float) -> float:
            z = q @ np.array([math.cos(phi), math.sin(phi)])
            val = float(np.asarray(f(z[None, :]), dtype=float).ravel()[0])
            if not power:
                return val
            # chord = 2 sin(phi/2) = phi (2 pi - phi) * ratio, ratio smooth and positive
            den = phi * (two_pi - phi)
            ratio = 2.0 * math.sin(phi / 2.0) / den if den > 0.0 else 1.0 / two_pi
            return val * ratio ** power
        val, _ = integrate.quad(g, 0.0, two_pi, weight="alg", wvar=(power, power),
                                epsabs=1e-14, epsrel=1e-12, limit=400)
        return val / two_pi
    if d == 3:
        phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
        cph, sph = np.cos(phi), np.sin(phi)

        def g(theta: float) -> float:
            st, ct = math.sin(theta), math.cos(theta)
            local = np.column_stack([np.full(n_phi, ct), st * cph, st * sph])
            ring = float(np.asarray(f(local @ q.T), dtype=float).mean())
            if theta <= 0.0:
                return ring
            # |z - pole| = 2 sin(theta/2); the weight supplies theta^(power+1)
            return ring * (2.0 * math.sin(theta / 2.0) / theta) ** power * st / theta

        val, _ = integrate.quad(g, 0.0, math.pi, weight="alg", wvar=(power + 1.0, 0.0),
                                epsabs=1e-14, epsrel=1e-12, limit=400)
        return val / 2.0
    raise DomainError("singular surface quadrature is provided for d = 2 and d = 3 only")


def surface_quadrature(d: int, f: Callable[[np.ndarray], np.ndarray],
                       grid: Optional[SurfaceGrid] = None, *,
                       singular_at=None, singular_power: float = 0.0,
                       n_phi: int = 256) -> float:
    """Approximate ``int_{S_{d-1}} f dsigma_1``.

    ``f`` receives an ``(n, d)`` array of unit vectors and returns ``n`` values.
    Without ``singular_at`` the weighted sum over ``grid`` is returned.  With
    ``singular_at = y`` (a unit vector) the integral computed is
    ``int |z - y|^singular_power f(z) dsigma_1`` for smooth ``f``, by an
    adaptive scheme in the angle from ``y``.
    """
    d = int(d)
    if singular_at is not None:
        pole = np.asarray(singular_at, dtype=float)
        if pole.shape != (d,):
            raise DomainError("singular point has the wrong dimension")
        pole = pole / np.linalg.norm(pole)
        return _singular_surface(d, f, pole, float(singular_power), n_phi)
    if grid is None:
        grid = surface_grid(d)
    if grid.dim != d:
        raise DomainError(f"grid is for dimension {grid.dim}, not {d}")
    vals = np.asarray(f(grid.nodes), dtype=float).reshape(-1)
    if vals.shape[0] != grid.nodes.shape[0]:
        raise DomainError("integrand must return one value per node")
    return float(vals @ grid.weights)


def ball_volume_integral(d: int, f: Callable[[np.ndarray], np.ndarray], region: str,
                         grid: Optional[SurfaceGrid] = None,
                         boundary_power: float = 0.0, r_max: float = math.inf) -> float:
    """``int f(y) |1 - |y|^2|^boundary_power dy`` over the unit ball (``interior``)
    or its complement (``exterior``), in spherical shells.

    ``f`` must be smooth on the closed region and vectorised over ``(n, d)``
    arrays.  The boundary factor is applied analytically, its ``|1 - r|`` part
    through an algebraic quadrature weight.
    """
    if grid is None:
        grid = surface_grid(d)
    area = sphere_area(d)
    nodes, weights = grid.nodes, grid.weights
    bp = float(boundary_power)

    def shell(r: float) -> float:
        return area * r ** (d - 1) * float(np.asarray(f(r * nodes), dtype=float).reshape(-1) @ weights)

    def smooth(r: float) -> float:
        # shell value with the (1 + r)^bp half of the boundary factor
        return shell(r) * (1.0 + r) ** bp

    def full(r: float) -> float:
        return smooth(r) * abs(1.0 - r) ** bp

    opts = dict(epsabs=1e-13, epsrel=1e-11, limit=400)
    if region == "interior":
        inner, _ = integrate.quad(full, 0.0, 0.5, **opts)
        if bp:
            outer, _ = integrate.quad(smooth, 0.5, 1.0, weight="alg", wvar=(0.0, bp), **opts)
        else:
            outer, _ = integrate.quad(smooth, 0.5, 1.0, **opts)
        return inner + outer
    if region == "exterior":
        if bp:
            close, _ = integrate.quad(smooth, 1.0, 2.0, weight="alg", wvar=(bp, 0.0), **opts)
        else:
            close, _ = integrate.quad(smooth, 1.0, 2.0, **opts)
        if r_max <= 2.0:
            return close

        def tail(s: float) -> float:
            # r = 2/s maps (2, r_max) onto (2/r_max, 1)
            if s <= 0.0:
                return 0.0
            return full(2.0 / s) * 2.0 / (s * s)
        far, _ = integrate.quad(tail, 0.0 if r_max == math.inf else 2.0 / r_max, 1.0, **opts)
        return close + far
    raise DomainError("region must be 'interior' or 'exterior'")
