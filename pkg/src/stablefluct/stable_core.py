"""Parameterisation, exponents, densities and ladder quantities of stable processes."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence, Union

import numpy as np
from scipy import integrate
from scipy.special import betainc

from .errors import DomainError, ParameterError

__all__ = [
    "StableParams",
    "Classification",
    "LadderQuantities",
    "validate_params",
    "char_exponent",
    "levy_density",
    "transition_density",
    "free_potential_density",
    "free_potential_constant",
    "classify",
    "overshoot_density",
    "overshoot_cdf",
    "ladder_quantities",
    "norm",
]

Vector = Union[float, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class StableParams:
    """Validated parameters of a strictly stable process.

    ``rho`` is the positivity parameter ``P(X_1 >= 0)``; ``dim`` the dimension.
    Construct through :func:`validate_params`.
    """

    alpha: float
    rho: float
    dim: int = 1

    @property
    def rho_hat(self) -> float:
        return 1.0 - self.rho

    @property
    def arho(self) -> float:
        return self.alpha * self.rho

    @property
    def arho_hat(self) -> float:
        return self.alpha * (1.0 - self.rho)

    def dual(self) -> "StableParams":
        """Parameters of ``-X`` (``rho`` and ``rho_hat`` interchanged)."""
        return StableParams(self.alpha, 1.0 - self.rho, self.dim)

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "rho": self.rho, "dim": self.dim}


@dataclass(frozen=True)
class Classification:
    transient: bool
    hits_points: bool
    point_recurrent: bool


class LadderQuantities(NamedTuple):
    exponent: Callable[[complex], complex]
    potential_density: float
    jump_density: float


def validate_params(alpha: float, rho: float = 0.5, dim: int = 1) -> StableParams:
    """Check admissibility and return a :class:`StableParams`."""
    try:
        alpha = float(alpha)
        rho = float(rho)
    except (TypeError, ValueError) as exc:
        raise ParameterError("alpha and rho must be real numbers") from exc
    if isinstance(dim, bool) or int(dim) != dim:
        raise ParameterError("dim must be a positive integer")
    dim = int(dim)
    if not (math.isfinite(alpha) and math.isfinite(rho)):
        raise ParameterError("alpha and rho must be finite")
    if dim < 1:
        raise ParameterError("dim must be a positive integer")
    if not (0.0 < alpha < 2.0):
        raise ParameterError(f"alpha must lie in (0, 2), got {alpha}")
    if not (0.0 < rho < 1.0):
        raise ParameterError(f"rho must lie in (0, 1), got {rho} (one-sided cases excluded)")
    if dim >= 2:
        if rho != 0.5:
            raise ParameterError("dimension >= 2 requires the isotropic case rho = 1/2")
    else:
        ar, arh = alpha * rho, alpha * (1.0 - rho)
        if not (0.0 < ar < 1.0 and 0.0 < arh < 1.0):
            raise ParameterError(
                f"alpha*rho={ar} and alpha*(1-rho)={arh} must both lie in (0, 1)")
    return StableParams(alpha, rho, dim)


def norm(x: Vector) -> float:
    """Euclidean norm of a scalar or vector."""
    return float(np.linalg.norm(np.atleast_1d(np.asarray(x, dtype=float))))


def _scalar_1d(p: StableParams, x: Vector, what: str) -> float:
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.size != 1:
        raise DomainError(f"{what}: expected a scalar in dimension 1")
    return float(arr[0])


def _vector(p: StableParams, x: Vector, what: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.shape != (p.dim,):
        raise DomainError(f"{what}: expected a vector of length {p.dim}")
    return arr


def char_exponent(p: StableParams, theta: Vector) -> complex:
    """Characteristic exponent ``Psi`` with ``E exp(i theta X_1) = exp(-Psi(theta))``."""
    if p.dim >= 2:
        return complex(norm(_vector(p, theta, "char_exponent")) ** p.alpha)
    th = _scalar_1d(p, theta, "char_exponent")
    if th == 0.0:
        return 0j
    phase = math.pi * p.alpha * (0.5 - p.rho)
    sgn = 1.0 if th > 0 else -1.0
    return abs(th) ** p.alpha * cmath.exp(1j * sgn * phase)


def levy_density(p: StableParams, x: Vector) -> float:
    """Density of the Levy measure with respect to Lebesgue measure."""
    a = p.alpha
    if p.dim == 1:
        xv = _scalar_1d(p, x, "levy_density")
        if xv == 0.0:
            raise DomainError("Levy density is singular at the origin")
        s = math.sin(math.pi * (p.arho if xv > 0 else p.arho_hat))
        return math.gamma(a + 1.0) / math.pi * s * abs(xv) ** (-a - 1.0)
    r = norm(_vector(p, x, "levy_density"))
    if r == 0.0:
        raise DomainError("Levy density is singular at the origin")
    d = p.dim
    c = 2.0 ** a * math.gamma((d + a) / 2.0) / (math.pi ** (d / 2.0) * abs(math.gamma(-a / 2.0)))
    return c * r ** (-a - d)


def transition_density(p: StableParams, t: float, x: float,
                       abs_tol: float = 1e-10) -> float:
    """Density of ``X_t`` at ``x`` by Fourier inversion (dimension 1 only)."""
    if p.dim != 1:
        raise DomainError("transition_density is only provided in dimension 1")
    if not t > 0:
        raise DomainError("t must be positive")
    a = p.alpha
    phase = math.pi * a * (0.5 - p.rho)
    cph, sph = math.cos(phase), math.sin(phase)
    x = float(x)

    # exp(-t z^a cos(phase)) < 1e-18 beyond this point
    upper = (42.0 / (t * cph)) ** (1.0 / a)
    opts = dict(epsabs=abs_tol * 1e-2, epsrel=1e-12, limit=400)
    if abs(x) * upper < 60.0:
        def integrand(z: float) -> float:
            za = t * z ** a
            return math.exp(-za * cph) * math.cos(z * x + za * sph)
        val, _ = integrate.quad(integrand, 0.0, upper, **opts)
        return val / math.pi

    # many oscillations: weighted (QAWO) quadrature on the cos/sin split
    def g_cos(z: float) -> float:
        za = t * z ** a
        return math.exp(-za * cph) * math.cos(za * sph)

    def g_sin(z: float) -> float:
        za = t * z ** a
        return math.exp(-za * cph) * math.sin(za * sph)

    w = abs(x)
    c_part, _ = integrate.quad(g_cos, 0.0, upper, weight="cos", wvar=w, **opts)
    s_part, _ = integrate.quad(g_sin, 0.0, upper, weight="sin", wvar=w, **opts)
    return (c_part - math.copysign(1.0, x) * s_part) / math.pi


def free_potential_constant(p: StableParams) -> float:
    """Constant of the Riesz kernel ``|y-x|^(alpha-d)`` in dimension ``d >= 2``."""
    a, d = p.alpha, p.dim
    return 2.0 ** (-a) * math.pi ** (-d / 2.0) * math.gamma((d - a) / 2.0) / math.gamma(a / 2.0)


def free_potential_density(p: StableParams, x: Vector, y: Vector) -> float:
    """Density of the occupation measure ``int_0^inf P_x(X_t in dy) dt``."""
    a = p.alpha
    if p.dim == 1:
        if a >= 1.0:
            raise DomainError("free potential is infinite: the process is recurrent for alpha >= 1")
        z = _scalar_1d(p, y, "y") - _scalar_1d(p, x, "x")
        if z == 0.0:
            raise DomainError("free potential is singular on the diagonal")
        s = math.sin(math.pi * (p.arho if z > 0 else p.arho_hat))
        return math.gamma(1.0 - a) * s * abs(z) ** (a - 1.0) / math.pi
    r = norm(_vector(p, y, "y") - _vector(p, x, "x"))
    if r == 0.0:
        raise DomainError("free potential is singular on the diagonal")
    return free_potential_constant(p) * r ** (a - p.dim)


def classify(p: StableParams) -> Classification:
    """Transience and point-hitting behaviour."""
    if p.dim >= 2:
        return Classification(transient=True, hits_points=False, point_recurrent=False)
    if p.alpha < 1.0:
        return Classification(transient=True, hits_points=False, point_recurrent=False)
    if p.alpha == 1.0:
        return Classification(transient=False, hits_points=False, point_recurrent=False)
    return Classification(transient=False, hits_points=True, point_recurrent=True)


def _need_1d(p: StableParams, what: str) -> None:
    if p.dim != 1:
        raise DomainError(f"{what} is only defined in dimension 1")


def overshoot_density(p: StableParams, a: float, u: float) -> float:
    """Density of ``X_{tau_a^+} - a`` at ``u`` for the process issued from 0.

    The ascending ladder height is a stable subordinator of index ``alpha*rho``,
    which fixes the exponent of the kernel.
    """
    _need_1d(p, "overshoot_density")
    if not (a > 0 and u > 0):
        raise DomainError("overshoot_density requires a > 0 and u > 0")
    ar = p.arho
    return math.sin(math.pi * ar) / math.pi * (u / a) ** (-ar) / (a + u)


def overshoot_cdf(p: StableParams, a: float, u: float) -> float:
    """Distribution function of the overshoot over level ``a``.

    With ``t = u / (a + u)`` the law is Beta(1 - alpha*rho, alpha*rho).
    """
    _need_1d(p, "overshoot_cdf")
    if not a > 0:
        raise DomainError("level must be positive")
    if u <= 0:
        return 0.0
    ar = p.arho
    return float(betainc(1.0 - ar, ar, u / (a + u)))


def ladder_quantities(p: StableParams, side: str, x: float) -> LadderQuantities:
    """Ladder-height exponent, potential density and jump density at ``x > 0``."""
    _need_1d(p, "ladder_quantities")
    if side not in ("up", "down"):
        raise DomainError("side must be 'up' or 'down'")
    if not x > 0:
        raise DomainError("x must be positive")
    beta_ = p.arho if side == "up" else p.arho_hat

    def exponent(lam: complex) -> complex:
        lam = complex(lam)
        if lam == 0:
            return 0j
        return cmath.exp(beta_ * cmath.log(lam))

    pot = x ** (beta_ - 1.0) / math.gamma(beta_)
    jump = beta_ / math.gamma(1.0 - beta_) * x ** (-1.0 - beta_)
    return LadderQuantities(exponent, pot, jump)
