"""Closed-form fluctuation identities for a one-dimensional stable process on
and around the interval (-1, 1).

Every branch integral ``int_1^r (s+1)^(a-1) (s-1)^(b-1) ds`` (with
``a + b = alpha``) is mapped by ``u = (s-1)/(s+1)`` onto
``2^(alpha-1) int_0^U u^(b-1) (1-u)^(-alpha) du`` and evaluated with incomplete
beta functions; only ``alpha = 1`` needs a (regularised) quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate
from scipy.special import betainc

from .errors import DomainError
from .specfun import beta
from .stable_core import StableParams

__all__ = [
    "TripleLawPoint",
    "BOUNDARY_TOL",
    "exit_up_prob",
    "triple_law_density",
    "resolvent_interval",
    "resolvent_interval_diagonal",
    "hit_point_before_exit",
    "entrance_density",
    "avoid_interval_prob",
    "resolvent_exterior",
    "censored_potential_density",
    "two_point_hit_prob",
    "hit_before_prob",
    "resolvent_origin_killed",
    "branch_integral",
]

BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class TripleLawPoint:
    """Start ``x``, overshoot ``u``, undershoot ``v`` and ``y = 1 - running max``."""

    x: float
    u: float
    v: float
    y: float

    def __post_init__(self) -> None:
        x, u, v, y = self.x, self.u, self.v, self.y
        if not all(math.isfinite(t) for t in (x, u, v, y)):
            raise DomainError("triple-law point must be finite")
        if not (-1.0 < x < 1.0):
            raise DomainError("x must lie in (-1, 1)")
        if not u > 0.0:
            raise DomainError("overshoot u must be positive")
        if not (0.0 <= y <= 1.0 - x):
            raise DomainError("y must lie in [0, 1 - x]")
        if not (y <= v <= 2.0):
            raise DomainError("v must lie in [y, 2]")


# ---------------------------------------------------------------- helpers

def _need_1d(p: StableParams, what: str) -> None:
    if p.dim != 1:
        raise DomainError(f"{what} is only defined in dimension 1")


def _need_alpha_gt1(p: StableParams, what: str) -> None:
    if not p.alpha > 1.0:
        raise DomainError(f"{what} requires alpha in (1, 2); points are polar otherwise")


def _inside(x: float, name: str) -> float:
    x = float(x)
    if not math.isfinite(x) or abs(x) >= 1.0 - BOUNDARY_TOL:
        raise DomainError(f"{name}={x!r} must lie in (-1, 1) away from the boundary")
    return x


def _outside(x: float, name: str) -> float:
    x = float(x)
    if not math.isfinite(x) or abs(x) <= 1.0 + BOUNDARY_TOL:
        raise DomainError(f"{name}={x!r} must satisfy |{name}| > 1 away from the boundary")
    return x


def _lower_beta(a: float, b: float, x: float, w: float) -> float:
    """``int_0^x t^(a-1) (1-t)^(b-1) dt`` given ``x`` and ``w = 1 - x`` separately."""
    full = beta(a, b)
    if x <= a / (a + b):
        return float(betainc(a, b, x)) * full
    return (1.0 - float(betainc(b, a, w))) * full


def _reduced_integral(b: float, alpha: float, U: float, W: float) -> float:
    """``int_0^U u^(b-1) (1-u)^(-alpha) du`` with ``W = 1 - U`` supplied exactly."""
    if U <= 0.0:
        return 0.0
    if alpha < 1.0:
        return _lower_beta(b, 1.0 - alpha, U, W)
    if alpha > 1.0:
        # integrate by parts to move the exponent of (1-u) into (-1, 0)
        head = U ** b * W ** (1.0 - alpha) / (alpha - 1.0)
        return head + _lower_beta(b, 2.0 - alpha, U, W) * (alpha - 1.0 - b) / (alpha - 1.0)
    # alpha = 1: int u^(b-1)/(1-u) = -log W + int (u^(b-1) - 1)/(1-u); v = u^b tames u = 0
    inv_b = 1.0 / b

    def f(v: float) -> float:
        if v <= 0.0:
            return inv_b
        u = v ** inv_b
        if u >= 1.0:
            return inv_b * (1.0 - b)
        return inv_b * (1.0 - v ** (inv_b - 1.0)) / (1.0 - u)

    val, _ = integrate.quad(f, 0.0, U ** b, epsabs=1e-14, epsrel=1e-13, limit=200)
    return val - math.log(W)


def branch_integral(a: float, b: float, r: float) -> float:
    """``int_1^r (s+1)^(a-1) (s-1)^(b-1) ds`` for ``r > 1``, ``a, b > 0`` and ``a + b < 2``
    (the resolvents only need ``a + b = alpha``)."""
    if not (a > 0.0 and b > 0.0):
        raise DomainError("branch_integral requires positive exponents")
    if not a + b < 2.0:
        raise DomainError("branch_integral requires a + b < 2")
    r = float(r)
    if r == math.inf:
        raise DomainError("branch_integral diverges at r = infinity when a + b >= 1")
    if r <= 1.0:
        if r == 1.0:
            return 0.0
        raise DomainError("branch_integral requires r >= 1")
    alpha = a + b
    U = (r - 1.0) / (r + 1.0)
    W = 2.0 / (r + 1.0)
    return 2.0 ** (alpha - 1.0) * _reduced_integral(b, alpha, U, W)


def _branch_from_points(a: float, b: float, x: float, y: float) -> float:
    """Branch integral at ``r = |1 - xy| / |y - x|`` with ``U, W`` formed exactly."""
    one = 1.0 - x * y
    den = abs(y - x)
    # |1 - xy| - |y - x| factorises; the product form avoids cancellation
    if one >= 0.0:
        diff = (1.0 + x) * (1.0 - y) if y >= x else (1.0 - x) * (1.0 + y)
    else:
        diff = (x - 1.0) * (y + 1.0) if y >= x else (x + 1.0) * (y - 1.0)
    s = abs(one) + den
    U, W = diff / s, 2.0 * den / s
    alpha = a + b
    return 2.0 ** (alpha - 1.0) * _reduced_integral(b, alpha, U, W)


def _sin_pi(t: float) -> float:
    return math.sin(math.pi * t)


# ---------------------------------------------------------------- exit from (-1, 1)

def exit_up_prob(p: StableParams, x: float) -> float:
    """``P_x(tau_1^+ < tau_{-1}^-)``: regularised beta ``I_{(1+x)/2}(alpha rho_hat, alpha rho)``."""
    _need_1d(p, "exit_up_prob")
    x = float(x)
    if not math.isfinite(x) or abs(x) >= 1.0:
        raise DomainError("exit_up_prob requires |x| < 1")
    t = 0.5 * (1.0 + x)
    a, b = p.arho_hat, p.arho
    if a == b:
        # I_t(a, a) = (1 + sgn(x) I_{x^2}(1/2, a)) / 2, exact at the centre
        return 0.5 + math.copysign(0.5, x) * float(betainc(0.5, a, x * x))
    if t <= a / (a + b):
        return float(betainc(a, b, t))
    return 1.0 - float(betainc(b, a, 0.5 * (1.0 - x)))


def triple_law_density(p: StableParams, pt: TripleLawPoint) -> float:
    """Joint density of overshoot, undershoot and distance of the running maximum
    from level 1, on the event of exiting (-1, 1) upwards."""
    _need_1d(p, "triple_law_density")
    if not isinstance(pt, TripleLawPoint):
        raise DomainError("pt must be a TripleLawPoint")
    a, ar, arh = p.alpha, p.arho, p.arho_hat
    x, u, v, y = pt.x, pt.u, pt.v, pt.y
    if v == 2.0:
        return 0.0
    base = 1.0 - x - y
    gap = v - y
    if base <= 0.0 or gap <= 0.0:
        # boundary of the support: the integrable singularities sit here
        raise DomainError("density is singular on the boundary y = 1 - x or v = y")
    const = _sin_pi(ar) / math.pi * math.gamma(a + 1.0) / (math.gamma(ar) * math.gamma(arh))
    dens = ((1.0 + x) ** arh * base ** (ar - 1.0) * gap ** (arh - 1.0) * (2.0 - v) ** ar
            / ((2.0 - y) ** a * (u + v) ** (a + 1.0)))
    return const * dens


def resolvent_interval_diagonal(p: StableParams, y: float) -> float:
    """``u^(-1,1)(y, y)`` as the limit ``x -> y`` (finite only for ``alpha > 1``)."""
    _need_1d(p, "resolvent_interval_diagonal")
    y = _inside(y, "y")
    _need_alpha_gt1(p, "the diagonal of the interval resolvent")
    a = p.alpha
    return (2.0 ** (1.0 - a) * (1.0 - y * y) ** (a - 1.0)
            / ((a - 1.0) * math.gamma(p.arho) * math.gamma(p.arho_hat)))


def resolvent_interval(p: StableParams, x: float, y: float) -> float:
    """Density of the expected occupation of ``dy`` before leaving (-1, 1) from ``x``."""
    _need_1d(p, "resolvent_interval")
    x, y = _inside(x, "x"), _inside(y, "y")
    if x == y:
        if p.alpha <= 1.0:
            raise DomainError("interval resolvent is singular on the diagonal for alpha <= 1")
        return resolvent_interval_diagonal(p, y)
    a = p.alpha
    ex = (p.arho, p.arho_hat) if x <= y else (p.arho_hat, p.arho)
    j = _branch_from_points(ex[0], ex[1], x, y)
    return 2.0 ** (1.0 - a) * abs(y - x) ** (a - 1.0) * j / (math.gamma(p.arho) * math.gamma(p.arho_hat))


def hit_point_before_exit(p: StableParams, x: float, y: float) -> float:
    """``P_x(tau^{y} < tau_1^+ ^ tau_{-1}^-)`` for ``alpha in (1, 2)``."""
    _need_1d(p, "hit_point_before_exit")
    _need_alpha_gt1(p, "hit_point_before_exit")
    x, y = _inside(x, "x"), _inside(y, "y")
    if x == y:
        return 1.0
    a = p.alpha
    ex = (p.arho, p.arho_hat) if x <= y else (p.arho_hat, p.arho)
    j = _branch_from_points(ex[0], ex[1], x, y)
    val = (a - 1.0) * abs(y - x) ** (a - 1.0) * (1.0 - y * y) ** (1.0 - a) * j
    return min(val, 1.0)


# ---------------------------------------------------------------- entrance into (-1, 1)

def _entrance_right(p: StableParams, x: float, y: float) -> float:
    a, ar, arh = p.alpha, p.arho, p.arho_hat
    lead = (x - 1.0) ** arh * (1.0 + x) ** ar / (x - y)
    if a > 1.0:
        lead -= (a - 1.0) * branch_integral(ar, arh, x)
    return _sin_pi(arh) / math.pi * (1.0 + y) ** (-ar) * (1.0 - y) ** (-arh) * lead


def entrance_density(p: StableParams, x: float, y: float) -> float:
    """Density at ``y`` of the first position inside (-1, 1) for a start ``|x| > 1``.

    Defective (total mass ``1 - avoid_interval_prob``) when ``alpha <= 1``.
    """
    _need_1d(p, "entrance_density")
    x, y = _outside(x, "x"), _inside(y, "y")
    if x > 1.0:
        return _entrance_right(p, x, y)
    return _entrance_right(p.dual(), -x, -y)


def avoid_interval_prob(p: StableParams, x: float) -> float:
    """``P_x(never enter (-1, 1))`` for ``alpha in (0, 1)``."""
    _need_1d(p, "avoid_interval_prob")
    if p.alpha >= 1.0:
        raise DomainError("for alpha >= 1 the interval is entered almost surely")
    x = _outside(x, "x")
    q = p if x > 0 else p.dual()
    r = abs(x)
    U, W = (r - 1.0) / (r + 1.0), 2.0 / (r + 1.0)
    # regularised incomplete beta I_U(alpha rho_hat, 1 - alpha)
    a, b = q.arho_hat, 1.0 - q.alpha
    if U <= a / (a + b):
        return float(betainc(a, b, U))
    return 1.0 - float(betainc(b, a, W))


def _exterior_same_side(p: StableParams, x: float, y: float) -> float:
    """Case ``y > x > 1``."""
    a, ar, arh = p.alpha, p.arho, p.arho_hat
    val = abs(y - x) ** (a - 1.0) * _branch_from_points(ar, arh, x, y)
    if a > 1.0:
        val -= (a - 1.0) * branch_integral(ar, arh, x) * branch_integral(arh, ar, y)
    return 2.0 ** (1.0 - a) * val / (math.gamma(ar) * math.gamma(arh))


def _exterior_opposite(p: StableParams, x: float, y: float) -> float:
    """Case ``x > 1``, ``y < -1``."""
    a, ar, arh = p.alpha, p.arho, p.arho_hat
    val = abs(y - x) ** (a - 1.0) * _branch_from_points(ar, arh, x, y)
    if a > 1.0:
        val -= (a - 1.0) * branch_integral(ar, arh, x) * branch_integral(ar, arh, -y)
    pref = _sin_pi(arh) / _sin_pi(ar)
    return pref * 2.0 ** (1.0 - a) * val / (math.gamma(ar) * math.gamma(arh))


def resolvent_exterior(p: StableParams, x: float, y: float) -> float:
    """Density of the expected occupation of ``dy`` before entering (-1, 1)."""
    _need_1d(p, "resolvent_exterior")
    x, y = _outside(x, "x"), _outside(y, "y")
    if x == y:
        raise DomainError("exterior resolvent is singular on the diagonal")
    q = p
    if x < 0:
        q, x, y = p.dual(), -x, -y
    if y < 0:
        return _exterior_opposite(q, x, y)
    if y > x:
        return _exterior_same_side(q, x, y)
    return _exterior_same_side(q.dual(), y, x)


# ---------------------------------------------------------------- point hitting (alpha > 1)

_LN2 = math.log(2.0)


def _log1mexp(t: float) -> float:
    """``log(1 - e^{-t})`` for ``t > 0`` without cancellation at either end."""
    return math.log(-math.expm1(-t)) if t < _LN2 else math.log1p(-math.exp(-t))


def censored_potential_density(p: StableParams, x: float) -> float:
    """Potential density of the Levy process underlying the censored stable process."""
    _need_1d(p, "censored_potential_density")
    _need_alpha_gt1(p, "censored_potential_density")
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("x must be finite")
    a = p.alpha
    s, sh = _sin_pi(p.arho), _sin_pi(p.arho_hat)
    c = -math.gamma(1.0 - a) / math.pi
    if x > 0.0:
        return c * (s * -math.expm1((a - 1.0) * _log1mexp(x)) + sh * math.exp(-(a - 1.0) * x))
    if x < 0.0:
        m = -math.expm1((a - 1.0) * _log1mexp(-x))
        # m e^{-(a-1)x} in log space; m ~ (a-1) e^x once e^x underflows
        tail = math.exp(math.log(m) - (a - 1.0) * x) if m > 0.0 else (a - 1.0) * math.exp((2.0 - a) * x)
        return c * (s + sh * tail)
    return c * (s + sh)


def two_point_hit_prob(p: StableParams, x: float) -> float:
    """``P_x(tau^{1} < tau^{-1})`` for ``x > -1``, ``alpha in (1, 2)``."""
    _need_1d(p, "two_point_hit_prob")
    _need_alpha_gt1(p, "two_point_hit_prob")
    x = float(x)
    if not math.isfinite(x) or x <= -1.0:
        raise DomainError("two_point_hit_prob requires x > -1; reflect for x < -1")
    if x == 1.0:
        return 1.0
    a = p.alpha
    s, sh = _sin_pi(p.arho), _sin_pi(p.arho_hat)
    b = 2.0 ** (a - 1.0)
    mid = sh if x > 1.0 else s
    num = b * s - abs(x - 1.0) ** (a - 1.0) * mid + (x + 1.0) ** (a - 1.0) * sh
    return num / (b * (s + sh))


def hit_before_prob(p: StableParams, x: float, target: float, avoid: float) -> float:
    """``P_x(tau^{target} < tau^{avoid})`` for distinct points, via the two-point law."""
    _need_1d(p, "hit_before_prob")
    _need_alpha_gt1(p, "hit_before_prob")
    x, target, avoid = float(x), float(target), float(avoid)
    if target == avoid:
        raise DomainError("target and avoid must differ")
    if x == target:
        return 1.0
    if x == avoid:
        return 0.0
    # affine map sending avoid -> -1 and target -> 1
    mid, half = 0.5 * (target + avoid), 0.5 * (target - avoid)
    z = (x - mid) / half
    q = p if half > 0 else p.dual()
    if z > -1.0:
        return two_point_hit_prob(q, z)
    return 1.0 - two_point_hit_prob(q.dual(), -z)


def _s(p: StableParams, z: float) -> float:
    return _sin_pi(p.arho) if z >= 0.0 else _sin_pi(p.arho_hat)


def resolvent_origin_killed(p: StableParams, x: float, y: float) -> float:
    """Potential density of the process killed on first hitting the origin."""
    _need_1d(p, "resolvent_origin_killed")
    _need_alpha_gt1(p, "resolvent_origin_killed")
    x, y = float(x), float(y)
    if x == 0.0 or y == 0.0:
        raise DomainError("resolvent_origin_killed is singular at the origin")
    a = p.alpha
    e = a - 1.0
    val = abs(y) ** e * _s(p, y) + abs(x) ** e * _s(p, -x)
    if x != y:
        val -= abs(y - x) ** e * _s(p, y - x)
    return -math.gamma(1.0 - a) / math.pi * val
