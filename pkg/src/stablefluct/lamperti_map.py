"""Exponents of the Levy processes and Markov additive processes behind stable processes.

Conventions.  Scalar exponents ``Psi(z)`` satisfy ``E exp(i z xi_1) = exp(-Psi(z))``.
Matrix exponents follow the Markov additive convention in which ``Psi(0) = Q``
is the generator of the modulating chain and ``F(gamma) = Psi(-i gamma)``
satisfies ``E[exp(gamma xi_t); J_t = j] = exp(t F(gamma))_{ij}``.
States are ordered ``(+1, -1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence, Tuple

import numpy as np

from .errors import DomainError, StripError
from .specfun import gamma_ratio
from .stable_core import StableParams, Vector, norm

__all__ = [
    "ExponentKind",
    "MatrixExponent",
    "EigenData",
    "PathSample",
    "exponent_strip",
    "levy_exponent",
    "levy_exponent_factors",
    "lamperti_stable_jump_density",
    "map_exponent",
    "map_strip",
    "leading_eig",
    "esscher",
    "map_jump_kernel",
    "map_jump_constant",
    "lamperti_time_change",
    "h_transform_weight",
]

STRIP_MARGIN = 1e-9


class ExponentKind(str, Enum):
    KILLED_HALF_LINE = "killed_half_line"
    CENSORED = "censored"
    RADIAL = "radial"
    RADIAL_CONDITIONED = "radial_conditioned"


@dataclass(frozen=True)
class MatrixExponent:
    """A 2x2 matrix exponent evaluated at one frequency."""

    entries: np.ndarray
    domain_strip: Tuple[float, float]
    kind: str = "stable"
    params: StableParams | None = None
    z: complex = 0j
    gamma_shift: float = 0.0

    def __getitem__(self, ij):
        return self.entries[ij]


@dataclass(frozen=True)
class EigenData:
    chi: float
    v: Tuple[float, float]


@dataclass
class PathSample:
    """A discretised trajectory with optional stopping-event metadata."""

    times: np.ndarray
    values: np.ndarray
    event: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.times.ndim != 1 or self.values.shape[0] != self.times.shape[0]:
            raise DomainError("times and values must have matching length")


def _kind(kind) -> ExponentKind:
    try:
        return ExponentKind(kind)
    except ValueError as exc:
        raise DomainError(f"unknown exponent kind {kind!r}") from exc


def _check_kind_params(kind: ExponentKind, p: StableParams) -> None:
    if kind in (ExponentKind.KILLED_HALF_LINE, ExponentKind.CENSORED):
        if p.dim != 1:
            raise DomainError(f"{kind.value} exponent requires dimension 1")
    elif p.dim == 1 and p.rho != 0.5:
        raise DomainError(f"{kind.value} exponent in dimension 1 needs the symmetric case")


def exponent_strip(kind, p: StableParams) -> Tuple[float, float]:
    """Open interval of admissible ``Re(i z)``."""
    kind = _kind(kind)
    a, d = p.alpha, p.dim
    if kind is ExponentKind.KILLED_HALF_LINE:
        return (-1.0, a)
    if kind is ExponentKind.CENSORED:
        return (p.arho - 1.0, p.arho)
    if kind is ExponentKind.RADIAL:
        return (-float(d), a)
    return (-a, float(d))


def _check_strip(w: complex, strip: Tuple[float, float]) -> None:
    lo, hi = strip
    if not (lo + STRIP_MARGIN < w.real < hi - STRIP_MARGIN):
        raise StripError(f"Re(iz)={w.real} outside the strip ({lo}, {hi})")


def levy_exponent_factors(kind, p: StableParams, z: complex) -> Tuple[complex, complex]:
    """Wiener-Hopf type split of :func:`levy_exponent` into two factors."""
    kind = _kind(kind)
    _check_kind_params(kind, p)
    z = complex(z)
    w = 1j * z
    _check_strip(w, exponent_strip(kind, p))
    a, ar, arh, d = p.alpha, p.arho, p.arho_hat, p.dim
    if kind is ExponentKind.KILLED_HALF_LINE:
        up = gamma_ratio([a - w], [arh - w])
        down = gamma_ratio([1.0 + w], [1.0 - arh + w])
        return up, down
    if kind is ExponentKind.CENSORED:
        if a <= 1.0:
            up = gamma_ratio([ar - w], [-w])
            down = gamma_ratio([1.0 - ar + w], [1.0 - a + w])
        else:
            up = (a - 1.0 - w) * gamma_ratio([ar - w], [1.0 - w])
            down = w * gamma_ratio([1.0 - ar + w], [2.0 - a + w])
        return up, down
    if kind is ExponentKind.RADIAL:
        up = 2.0 ** a * gamma_ratio([(a - w) / 2.0], [-w / 2.0])
        down = gamma_ratio([(w + d) / 2.0], [(w + d - a) / 2.0])
        return up, down
    up = 2.0 ** a * gamma_ratio([(d - w) / 2.0], [-(w + a - d) / 2.0])
    down = gamma_ratio([(w + a) / 2.0], [w / 2.0])
    return up, down


def levy_exponent(kind, p: StableParams, z: complex) -> complex:
    """Characteristic exponent of the Levy process of the given kind."""
    kind = _kind(kind)
    _check_kind_params(kind, p)
    z = complex(z)
    w = 1j * z
    _check_strip(w, exponent_strip(kind, p))
    a, ar, arh, d = p.alpha, p.arho, p.arho_hat, p.dim
    if kind is ExponentKind.KILLED_HALF_LINE:
        return gamma_ratio([a - w, 1.0 + w], [arh - w, 1.0 - arh + w])
    if kind is ExponentKind.CENSORED:
        return gamma_ratio([ar - w, 1.0 - ar + w], [-w, 1.0 - a + w])
    if kind is ExponentKind.RADIAL:
        return 2.0 ** a * gamma_ratio([(a - w) / 2.0, (w + d) / 2.0],
                                      [-w / 2.0, (w + d - a) / 2.0])
    return 2.0 ** a * gamma_ratio([(d - w) / 2.0, (w + a) / 2.0],
                                  [-(w + a - d) / 2.0, w / 2.0])


def lamperti_stable_jump_density(p: StableParams, x: float) -> float:
    """Levy density of the killed half-line process at ``x > 0``."""
    if p.dim != 1:
        raise DomainError("requires dimension 1")
    if not x > 0:
        raise DomainError("x must be positive")
    a = p.alpha
    c = math.gamma(1.0 + a) / (math.gamma(p.arho) * math.gamma(1.0 - p.arho))
    # e^x (e^x - 1)^(-1-a) = e^{-a x} (1 - e^{-x})^(-1-a)
    return c * math.exp(-a * x) * (-math.expm1(-x)) ** (-1.0 - a)


def map_strip(kind: str, p: StableParams) -> Tuple[float, float]:
    """Open interval of ``Re(i z)`` on which :func:`map_exponent` is finite."""
    if kind == "stable":
        return (-1.0, p.alpha)
    if kind == "conditioned":
        return (-p.alpha, 1.0)
    raise DomainError(f"unknown matrix exponent kind {kind!r}")


def map_exponent(kind: str, p: StableParams, z: complex) -> MatrixExponent:
    """Matrix exponent of the Markov additive process of ``X`` or of its h-transform."""
    if p.dim != 1:
        raise DomainError("matrix exponents are defined for dimension 1")
    strip = map_strip(kind, p)
    z = complex(z)
    w = 1j * z
    _check_strip(w, strip)
    a, ar, arh = p.alpha, p.arho, p.arho_hat
    m = np.empty((2, 2), dtype=complex)
    if kind == "stable":
        num = [a - w, 1.0 + w]
        m[0, 0] = -gamma_ratio(num, [arh - w, 1.0 - arh + w])
        m[0, 1] = gamma_ratio(num, [arh, 1.0 - arh])
        m[1, 0] = gamma_ratio(num, [ar, 1.0 - ar])
        m[1, 1] = -gamma_ratio(num, [ar - w, 1.0 - ar + w])
    else:
        num = [1.0 - w, a + w]
        m[0, 0] = -gamma_ratio(num, [1.0 - ar - w, ar + w])
        m[0, 1] = gamma_ratio(num, [ar, 1.0 - ar])
        m[1, 0] = gamma_ratio(num, [arh, 1.0 - arh])
        m[1, 1] = -gamma_ratio(num, [1.0 - arh - w, arh + w])
    return MatrixExponent(m, strip, kind, p, z)


def _stationary(q: np.ndarray) -> np.ndarray:
    r12, r21 = float(np.real(q[0, 1])), float(np.real(q[1, 0]))
    if not (r12 > 0 and r21 > 0):
        raise DomainError("modulating chain must have positive switching rates")
    pi = np.array([r21, r12])
    return pi / pi.sum()


def _eig_from_real(f: np.ndarray, q: np.ndarray) -> EigenData:
    a11, a12, a21, a22 = f[0, 0], f[0, 1], f[1, 0], f[1, 1]
    tr = a11 + a22
    disc = (a11 - a22) ** 2 + 4.0 * a12 * a21
    if disc < 0:
        raise DomainError("matrix has no real eigenvalues")
    chi = 0.5 * (tr + math.sqrt(disc))
    # right eigenvector; pick the numerically better-conditioned row
    if abs(a12) >= abs(a21):
        v = np.array([a12, chi - a11])
    else:
        v = np.array([chi - a22, a21])
    if v[0] < 0:
        v = -v
    if not (v[0] > 0 and v[1] > 0):
        raise DomainError("Perron eigenvector is not strictly positive")
    pi = _stationary(q)
    v = v / float(pi @ v)
    return EigenData(float(chi), (float(v[0]), float(v[1])))


def leading_eig(m: MatrixExponent, q: np.ndarray | None = None) -> EigenData:
    """Leading eigenvalue and positive right eigenvector of a real matrix exponent.

    ``q`` is the generator used for the normalisation ``pi . v = 1``; by default
    it is the same kind of exponent evaluated at ``z = 0``.
    """
    e = np.asarray(m.entries)
    if np.max(np.abs(e.imag)) > 1e-12 * max(1.0, float(np.max(np.abs(e.real)))):
        raise DomainError("leading_eig requires a real matrix (evaluate at z = -i gamma)")
    f = e.real
    if q is None:
        if m.params is None or m.kind not in ("stable", "conditioned") or m.gamma_shift != 0.0:
            raise DomainError("pass the generator q for transformed exponents")
        q = map_exponent(m.kind, m.params, 0j).entries.real
    return _eig_from_real(f, np.asarray(q, dtype=float))


def esscher(m_fn: Callable[[complex], MatrixExponent], gamma: float, z: complex) -> MatrixExponent:
    """Esscher transform ``Delta_v^-1 Psi(z - i gamma) Delta_v - chi I``."""
    gamma = float(gamma)
    q = m_fn(0j)
    f = m_fn(-1j * gamma)
    e = np.asarray(f.entries)
    if np.max(np.abs(e.imag)) > 1e-12 * max(1.0, float(np.max(np.abs(e.real)))):
        raise DomainError("F(gamma) is not real")
    eig = _eig_from_real(e.real, np.asarray(q.entries).real)
    src = m_fn(complex(z) - 1j * gamma)
    v = np.array(eig.v)
    out = (src.entries * v[None, :]) / v[:, None] - eig.chi * np.eye(2)
    lo, hi = src.domain_strip
    return MatrixExponent(out, (lo - gamma, hi - gamma), f"esscher({src.kind})",
                          src.params, complex(z), src.gamma_shift + gamma)


def map_jump_constant(p: StableParams) -> float:
    """Constant of the jump kernel in skew-product coordinates ``(y, phi)``.

    The Cartesian Levy density constant times the area ``2 pi^(d/2) / Gamma(d/2)``
    of the unit sphere, because ``sigma_1`` carries unit mass.
    """
    a, d = p.alpha, p.dim
    cart = 2.0 ** a * math.gamma((d + a) / 2.0) / (math.pi ** (d / 2.0) * abs(math.gamma(-a / 2.0)))
    area = 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)
    return cart * area


def map_jump_kernel(p: StableParams, theta_from: Vector, y: float, phi_to: Vector) -> float:
    """Jump intensity of ``(xi, Theta)`` from ``(0, theta)`` to ``(y, phi)``.

    Density with respect to ``sigma_1(d phi) dy`` with ``sigma_1`` the normalised
    surface measure.
    """
    if p.dim < 2:
        raise DomainError("map_jump_kernel requires dimension >= 2")
    th = np.asarray(theta_from, dtype=float)
    ph = np.asarray(phi_to, dtype=float)
    if th.shape != (p.dim,) or ph.shape != (p.dim,):
        raise DomainError("direction vectors must have length dim")
    if abs(norm(th) - 1.0) > 1e-12 or abs(norm(ph) - 1.0) > 1e-12:
        raise DomainError("directions must be unit vectors")
    dist = norm(math.exp(y) * ph - th)
    if dist == 0.0:
        raise DomainError("kernel is singular at (y, phi) = (0, theta)")
    d = p.dim
    return map_jump_constant(p) * math.exp(y * d) / dist ** (p.alpha + d)


def lamperti_time_change(path: PathSample, alpha: float, direction: str) -> PathSample:
    """Change between Levy time and self-similar time along a log-scale path.

    ``forward`` maps Levy time ``s`` to ``I(s) = int_0^s exp(alpha xi_u) du`` by the
    trapezoid rule.  ``inverse`` applies the exact inverse of that discrete clock,
    so that the two directions compose to the identity on grid points.
    """
    t = np.asarray(path.times, dtype=float)
    xi = np.asarray(path.values, dtype=float)
    if xi.ndim != 1:
        raise DomainError("time change expects a scalar (log-radius) path")
    if t.size >= 2 and not np.all(np.diff(t) > 0):
        raise DomainError("time grid must be strictly increasing")
    if direction not in ("forward", "inverse"):
        raise DomainError("direction must be 'forward' or 'inverse'")
    e = np.exp(alpha * xi)
    mean = 0.5 * (e[1:] + e[:-1])
    dt = np.diff(t)
    inc = dt * mean if direction == "forward" else dt / mean
    new_t = np.empty_like(t)
    new_t[0] = t[0]
    new_t[1:] = t[0] + np.cumsum(inc)
    return PathSample(new_t, xi.copy(), dict(path.event))


def h_transform_weight(p: StableParams, x: Vector) -> float:
    """Harmonic weight of the process killed at the origin (``d = 1``) or of the
    Riesz kernel at the origin (``d >= 2``)."""
    a = p.alpha
    if p.dim == 1:
        xv = float(np.atleast_1d(np.asarray(x, dtype=float))[0])
        if xv == 0.0:
            raise DomainError("h is singular at the origin")
        s = math.sin(math.pi * (p.arho_hat if xv >= 0 else p.arho))
        return s * abs(xv) ** (a - 1.0)
    r = norm(x)
    if r == 0.0:
        raise DomainError("h is singular at the origin")
    return r ** (a - p.dim)
