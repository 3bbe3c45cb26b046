"""Verification checks: deterministic identities and Monte Carlo comparisons.

Every check returns :class:`~stablefluct.montecarlo.VerificationReport` objects.
The ``fast`` suite runs quadrature identities only; ``full`` adds the Monte
Carlo comparisons.  All randomness is derived from the suite seed, so a suite
run is reproducible byte for byte.
"""

from __future__ import annotations

import cmath
import math
from typing import Callable, List, Sequence

import numpy as np
from scipy import integrate, special

from . import fluct_ball as fb
from . import fluct_interval as fi
from . import lamperti_map as lm
from .errors import DomainError
from .montecarlo import (Estimate, SimConfig, VerificationReport, compare, compare_extrapolated,
                         estimate, simulate_event)
from .stable_core import (StableParams, char_exponent, free_potential_constant, ladder_quantities,
                          overshoot_cdf, overshoot_density, validate_params)

__all__ = [
    "identity_report",
    "sub_seed",
    "exterior_from_interior",
    "interval_entrance_cdf",
    "check_wiener_hopf",
    "check_factor_products",
    "check_overshoot_mass",
    "check_interval_basics",
    "check_triple_law_marginal",
    "check_censored_constant",
    "check_censored_laplace",
    "check_origin_killed_ratio",
    "check_map_structure",
    "check_sphere_suite",
    "check_ball_mass",
    "check_k_duality",
    "check_inversion_reconstruction",
    "mc_exit_up",
    "mc_mean_exit_time",
    "mc_overshoot",
    "mc_never_enter",
    "mc_ball_occupation",
    "mc_entrance_law",
    "fast_suite",
    "full_suite",
]


def identity_report(name: str, expected: float, got: float, rel_tol: float = 0.0,
                    abs_tol: float = 0.0) -> VerificationReport:
    """Report for a deterministic identity ``got == expected`` within tolerance."""
    expected, got = float(expected), float(got)
    gap = abs(got - expected)
    ok = bool(gap <= max(abs_tol, rel_tol * abs(expected)))
    rule = []
    if rel_tol:
        rule.append(f"rel {rel_tol:g}")
    if abs_tol:
        rule.append(f"abs {abs_tol:g}")
    return VerificationReport(name, expected, got, 0.0, None, ok,
                              "|closed_form - estimate| <= " + " or ".join(rule or ["0"]))


def _worst(name: str, pairs: Sequence[tuple], rel_tol: float = 0.0,
           abs_tol: float = 0.0) -> VerificationReport:
    """Collapse many (expected, got) pairs into the report of the worst one."""
    def excess(pair):
        e, g = pair
        return abs(g - e) / max(abs_tol, rel_tol * abs(e), 1e-300)
    e, g = max(pairs, key=excess)
    return identity_report(f"{name} [worst of {len(pairs)}]", e, g, rel_tol, abs_tol)


def _max_rel(name: str, pairs: Sequence[tuple], rel_tol: float) -> VerificationReport:
    """Largest relative error ``|got - expected| / |expected|`` over (expected, got) pairs."""
    worst = max(abs(complex(g) - complex(e)) / abs(complex(e)) for e, g in pairs)
    return identity_report(f"{name} [max relative error over {len(pairs)}]", 0.0, worst,
                           abs_tol=rel_tol)


def sub_seed(seed: int, index: int) -> int:
    """Independent 64-bit seed for check number ``index`` of a suite run."""
    ss = np.random.SeedSequence([int(seed), int(index)])
    return int(ss.generate_state(1, np.uint64)[0])


# ------------------------------------------------------- derived quantities

def exterior_from_interior(p: StableParams, x: float, y: float) -> float:
    """Exterior interval resolvent rebuilt from the interior one under ``x -> 1/x``.

    The inversion maps the process outside ``[-1, 1]`` to the Doob transform of
    the process inside by ``h(x) = s(x) |x|^(alpha-1)``; when points are hit the
    interior resolvent is first killed at the image of infinity, the origin.
    """
    if not (abs(x) > 1.0 and abs(y) > 1.0) or x == y:
        raise DomainError("need |x|, |y| > 1 and x != y")
    kx, ky = -1.0 / x, -1.0 / y
    h = lambda z: lm.h_transform_weight(p, z)
    inner = fi.resolvent_interval(p, kx, ky)
    if p.alpha > 1.0:
        inner -= fi.hit_point_before_exit(p, kx, 0.0) * fi.resolvent_interval(p, 0.0, ky)
    return abs(y) ** (2.0 * p.alpha - 2.0) * h(ky) / h(kx) * inner


def _alg_integral(f: Callable[[float], float], lo: float, hi: float, a: float, b: float) -> float:
    """``int_lo^hi f(t) (t-lo)^a (hi-t)^b dt`` with ``f`` smooth."""
    val, _ = integrate.quad(f, lo, hi, weight="alg", wvar=(a, b), epsabs=1e-13, epsrel=1e-11,
                            limit=200)
    return val


def interval_entrance_cdf(p: StableParams, x: float) -> Callable[[np.ndarray], np.ndarray]:
    """Distribution function on ``(-1, 1)`` of the entrance position from ``|x| > 1``.

    For ``alpha < 1`` the law is defective; the returned function is normalised
    by the probability of entering.
    """
    q, sgn = (p, 1.0) if x > 1 else (p.dual(), -1.0)
    lo_pow, hi_pow = -q.arho, -q.arho_hat
    cap = 1.0 - 1e-11

    def smooth(t: float) -> float:
        t = min(max(t, -cap), cap)
        return fi.entrance_density(p, x, sgn * t) * (1.0 + t) ** q.arho * (1.0 - t) ** q.arho_hat

    total = _alg_integral(smooth, -1.0, 1.0, lo_pow, hi_pow)

    def upto(t: float) -> float:
        # mass of positions below t in the reflected coordinate
        if t <= -1.0:
            return 0.0
        if t >= 1.0:
            return total
        g = lambda s: smooth(s) * (1.0 - s) ** hi_pow
        return _alg_integral(g, -1.0, t, lo_pow, 0.0)

    def cdf(ys: np.ndarray) -> np.ndarray:
        ys = np.atleast_1d(np.asarray(ys, dtype=float))
        if sgn > 0:
            out = [upto(v) for v in ys]
        else:
            out = [total - upto(-v) for v in ys]
        return np.asarray(out) / total

    return cdf


# ------------------------------------------------------ identity checks

def check_wiener_hopf(n_points: int = 100, seed: int = 0) -> List[VerificationReport]:
    """``kappa(-iz) kappa_hat(iz) = Psi(z)`` at random real ``z``."""
    rng = np.random.default_rng(seed)
    reports = []
    for alpha, rho in ((1.5, 0.5), (1.2, 0.6), (0.7, 0.3)):
        p = validate_params(alpha, rho)
        up = ladder_quantities(p, "up", 1.0).exponent
        down = ladder_quantities(p, "down", 1.0).exponent
        pairs = []
        for z in rng.uniform(0.05, 20.0, n_points) * rng.choice([-1.0, 1.0], n_points):
            pairs.append((char_exponent(p, z), up(-1j * z) * down(1j * z)))
        reports.append(_max_rel(f"wiener_hopf alpha={alpha} rho={rho}", pairs, 1e-10))
    return reports


def _strip_points(kind: str, p: StableParams, n: int, rng: np.random.Generator) -> list:
    lo, hi = lm.exponent_strip(kind, p)
    re = rng.uniform(lo + 1e-3 * (hi - lo), hi - 1e-3 * (hi - lo), n)
    im = rng.normal(0.0, 3.0, n)
    # Re(iz) = re  <=>  z = im - i re
    return [complex(b, -a) for a, b in zip(re, im)]


def check_factor_products(n_points: int = 100, seed: int = 1) -> List[VerificationReport]:
    """Products of the exponent factors reproduce the exponent, for every kind."""
    rng = np.random.default_rng(seed)
    cases = [("killed_half_line", validate_params(1.5, 0.6)),
             ("killed_half_line", validate_params(0.8, 0.4)),
             ("censored", validate_params(1.3, 0.55)),
             ("censored", validate_params(0.7, 0.4)),
             ("radial", validate_params(1.5, 0.5, 2)),
             ("radial", validate_params(0.9, 0.5, 3)),
             ("radial_conditioned", validate_params(1.5, 0.5, 3)),
             ("radial_conditioned", validate_params(1.2, 0.5, 2))]
    reports = []
    for kind, p in cases:
        pairs = []
        for z in _strip_points(kind, p, n_points, rng):
            a, b = lm.levy_exponent_factors(kind, p, z)
            pairs.append((lm.levy_exponent(kind, p, z), a * b))
        reports.append(_max_rel(f"factor_product {kind} alpha={p.alpha} rho={p.rho} d={p.dim}",
                                pairs, 1e-10))
    return reports


def check_overshoot_mass(p: StableParams) -> VerificationReport:
    """Overshoot density over level 1 integrates to one."""
    ar = p.arho
    f = lambda u: overshoot_density(p, 1.0, u)
    # (0, 1) with u^(-ar) in the weight; (1, inf) through u = 1/s with s^(ar-1) in the weight
    head = _alg_integral(lambda u: f(max(u, 1e-100)) * max(u, 1e-100) ** ar, 0.0, 1.0, -ar, 0.0)
    tail = _alg_integral(lambda s: f(1.0 / max(s, 1e-100)) * max(s, 1e-100) ** (-1.0 - ar),
                         0.0, 1.0, ar - 1.0, 0.0)
    return identity_report(f"overshoot mass alpha={p.alpha} rho={p.rho}", 1.0, head + tail,
                           abs_tol=1e-10)


def check_interval_basics() -> List[VerificationReport]:
    out = [identity_report("exit_up_prob(0) symmetric", 0.5,
                           fi.exit_up_prob(validate_params(1.5, 0.5), 0.0), abs_tol=0.0)]
    p = validate_params(1.5, 0.6)
    pairs = []
    for x, y in ((0.2, -0.5), (-0.7, 0.1), (0.6, 0.65), (0.0, -0.3)):
        pairs.append((fi.hit_point_before_exit(p, x, y),
                      fi.resolvent_interval(p, x, y) / fi.resolvent_interval(p, y, y)))
    out.append(_worst("point hit = resolvent ratio", pairs, rel_tol=1e-10))
    return out


def _jacobi_rule(n: int, lo: float, hi: float, p_lo: float, p_hi: float):
    """Nodes and weights for ``int_lo^hi f(t) (t - lo)^p_lo (hi - t)^p_hi dt``."""
    t, w = special.roots_jacobi(n, p_hi, p_lo)
    half = 0.5 * (hi - lo)
    return lo + half * (t + 1.0), w * half ** (1.0 + p_lo + p_hi)


def triple_law_mass(p: StableParams, x: float, n: int = 32) -> float:
    """Integral of the triple law over (u, v, y) with a tensor Gauss-Jacobi rule.

    Endpoint singularities sit in the Jacobi weights.  The rule still converges only
    like ``n^-2`` because of the fractional corrections at y = 0, so the result is
    the Richardson combination of ``n`` and ``n // 2`` nodes per direction.
    """
    return (4.0 * _triple_law_rule(p, x, n) - _triple_law_rule(p, x, n // 2)) / 3.0


def _triple_law_rule(p: StableParams, x: float, n: int) -> float:
    a, ar, arh = p.alpha, p.arho, p.arho_hat
    top = 1.0 - x
    # u = v s / (1 - s) turns (u + v)^(-alpha-1) du into v^(-alpha) (1 - s)^(alpha-1) ds
    s_nodes, s_w = _jacobi_rule(n, 0.0, 1.0, 0.0, a - 1.0)

    def over_u(y: float, v: float) -> float:
        total = 0.0
        for s, w in zip(s_nodes, s_w):
            u = v * s / (1.0 - s)
            total += w * v / (1.0 - s) ** (1.0 + a) * fi.triple_law_density(p, fi.TripleLawPoint(x, u, v, y))
        return total

    def over_v(y: float) -> float:
        # (v - y)^(arh - 1) near y, (2 - v)^ar near 2; the u direction adds v^(-alpha),
        # which peaks on the scale y, so the middle is split geometrically
        cut = min(2.0 * y, 0.5 * (y + 2.0))
        vs, ws = _jacobi_rule(n, y, cut, arh - 1.0, 0.0)
        total = sum(w * over_u(y, v) / (v - y) ** (arh - 1.0) for v, w in zip(vs, ws))
        edges = [cut]
        while edges[-1] < 1.0:
            edges.append(min(2.0 * edges[-1], 1.0))
        for lo, hi in zip(edges[:-1], edges[1:]):
            vs, ws = _jacobi_rule(n // 2, lo, hi, 0.0, 0.0)
            total += sum(w * over_u(y, v) for v, w in zip(vs, ws))
        vs, ws = _jacobi_rule(n, edges[-1], 2.0, 0.0, ar)
        total += sum(w * over_u(y, v) / (2.0 - v) ** ar for v, w in zip(vs, ws))
        return total

    # over_v(y) grows like y^(-arho) at 0; (top - y)^(arho - 1) at the other end
    ys, wy = _jacobi_rule(n, 0.0, top, -ar, ar - 1.0)
    return sum(w * over_v(y) * y ** ar / (top - y) ** (ar - 1.0) for y, w in zip(ys, wy))


def check_triple_law_marginal(p: StableParams, x: float, rel_tol: float = 1e-4) -> VerificationReport:
    """Total mass of the triple law against the upward exit probability."""
    return identity_report(f"triple law marginal alpha={p.alpha} rho={p.rho} x={x}",
                           fi.exit_up_prob(p, x), triple_law_mass(p, x), rel_tol=rel_tol)


def check_censored_constant(p: StableParams) -> VerificationReport:
    """Value at the origin against the constant with ``pi^2`` in the denominator."""
    shown = (-math.gamma(1.0 - p.alpha) * (math.sin(math.pi * p.arho) + math.sin(math.pi * p.arho_hat))
             / math.pi ** 2)
    return identity_report(f"censored potential at 0 vs displayed constant alpha={p.alpha} rho={p.rho}",
                           shown, fi.censored_potential_density(p, 0.0), rel_tol=1e-12)


_TINY = 1e-300


def check_censored_laplace(p: StableParams, n_points: int = 5) -> VerificationReport:
    """``int e^(z x) u(x) dx = 1 / Psi(-i z)`` for real ``z`` between the roots 0 and alpha - 1."""
    pairs = []
    u = lambda t: fi.censored_potential_density(p, t)
    a = p.alpha
    for frac in np.linspace(0.1, 0.9, n_points):
        z = frac * (a - 1.0)
        # w = e^{x} on the left and w = e^{-x} on the right; the weights carry the endpoint powers
        kw = dict(epsabs=1e-15, epsrel=1e-12, limit=400)
        left = (integrate.quad(lambda w: u(math.log(max(w, _TINY))), 0.0, 0.5, weight="alg", wvar=(z - 1.0, 0.0), **kw)[0]
                + integrate.quad(lambda w: w ** (z - 1.0) * u(math.log(w)), 0.5, 1.0, **kw)[0])
        right = (integrate.quad(lambda w: u(-math.log(max(w, _TINY))) * max(w, _TINY) ** (1.0 - a), 0.0, 0.5,
                                weight="alg", wvar=(a - 2.0 - z, 0.0), **kw)[0]
                 + integrate.quad(lambda w: w ** (-z - 1.0) * u(-math.log(w)), 0.5, 1.0, **kw)[0])
        psi = lm.levy_exponent("censored", p, -1j * z)
        pairs.append((1.0 / psi.real, left + right))
    return _worst(f"censored Laplace round trip alpha={p.alpha} rho={p.rho}", pairs, rel_tol=1e-6)


def check_origin_killed_ratio(p: StableParams, n_points: int = 20, seed: int = 2) -> VerificationReport:
    rng = np.random.default_rng(seed)
    pairs = []
    while len(pairs) < n_points:
        x, y = rng.uniform(-3.0, 3.0, 2)
        if min(abs(x), abs(y), abs(x - y)) < 1e-3:
            continue
        ratio = fi.resolvent_origin_killed(p, x, y) / fi.resolvent_origin_killed(p, y, y)
        pairs.append((fi.hit_before_prob(p, x, target=y, avoid=0.0), ratio))
    return _worst(f"origin-killed ratio = hitting probability alpha={p.alpha} rho={p.rho}",
                  pairs, rel_tol=1e-9)


def check_map_structure(p: StableParams) -> List[VerificationReport]:
    tag = f"alpha={p.alpha} rho={p.rho}"
    q = lm.map_exponent("stable", p, 0j).entries
    out = [identity_report(f"map row sums at 0 {tag}", 0.0,
                           float(np.max(np.abs(q.sum(axis=1)))), abs_tol=1e-12)]
    g = p.alpha - 1.0
    f = lm.map_exponent("stable", p, -1j * g).entries
    out.append(identity_report(f"map det at alpha-1 {tag}", 0.0, abs(np.linalg.det(f)), abs_tol=1e-10))
    fn = lambda z: lm.map_exponent("stable", p, z)
    pairs = []
    for z in (0.3 + 0j, -1.1 + 0.2j, 2.0 - 0.05j, 0.0 + 0j, 0.7 + 0.1j):
        e = lm.esscher(fn, g, z).entries
        c = lm.map_exponent("conditioned", p, z).entries
        pairs += list(zip(c.ravel(), e.ravel()))
    out.append(_max_rel(f"esscher at alpha-1 = conditioned {tag}", pairs, 1e-10))
    lo, hi = -1.0, g
    grid = np.linspace(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo), 21)
    chi = [lm.leading_eig(lm.map_exponent("stable", p, -1j * t)).chi for t in grid]
    second = np.diff(chi, 2)
    out.append(identity_report(f"chi convexity min second difference {tag}", 0.0,
                               float(min(0.0, second.min())), abs_tol=0.0))
    return out


def _point(d: int, r: float, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=d)
    return v * (r / np.linalg.norm(v))


def check_sphere_suite(d: int, alpha: float = 1.5, seed: int = 3) -> List[VerificationReport]:
    p = validate_params(alpha, 0.5, d)
    rng = np.random.default_rng(seed)
    tag = f"d={d} alpha={alpha}"
    out = []
    pole = np.zeros(d)
    pole[0] = 1.0
    # the quadrature supplies the factor |z - pole|^(alpha - d) itself
    riesz = fb.surface_quadrature(d, lambda z: np.ones(len(z)), singular_at=pole,
                                  singular_power=alpha - d)
    out.append(identity_report(f"riesz sphere constant quadrature {tag}", fb.riesz_sphere_constant(p),
                               riesz, rel_tol=1e-6))
    pairs = []
    for _ in range(10):
        y = _point(d, 1.0, rng)
        x = _point(d, rng.choice([0.5, 2.0]), rng)
        f = lambda z: np.array([fb.sphere_hit_density(p, x, zz) for zz in z])
        lhs = fb.surface_quadrature(d, f, singular_at=y, singular_power=alpha - d)
        pairs.append((float(np.linalg.norm(x - y) ** (alpha - d)), lhs))
    out.append(_worst(f"sphere fixed-point kernel equation {tag}", pairs, rel_tol=1e-6))
    pairs = []
    for r in (0.3, 0.5, 2.0, 4.0):
        x = _point(d, r, rng)
        f = lambda z: np.array([fb.sphere_hit_density(p, x, zz) for zz in z])
        pairs.append((fb.sphere_hit_prob(p, x), fb.surface_quadrature(d, f)))
    out.append(_worst(f"sphere hitting density mass {tag}", pairs, rel_tol=1e-6))
    x_in = _point(d, 0.5, rng)
    newton = fb.surface_quadrature(d, lambda z: (1.0 - x_in @ x_in) / np.linalg.norm(z - x_in, axis=1) ** d)
    out.append(identity_report(f"Newtonian Poisson kernel mass {tag}", 1.0, newton, abs_tol=1e-8))
    x_out = _point(d, 2.0, rng)
    ext = fb.surface_quadrature(d, lambda z: (x_out @ x_out - 1.0) / np.linalg.norm(z - x_out, axis=1) ** d)
    out.append(identity_report(f"exterior Brownian hitting identity {tag}", 2.0 ** (2 - d), ext,
                               abs_tol=1e-8))
    return out


def check_ball_mass(d: int, alpha: float) -> List[VerificationReport]:
    p = validate_params(alpha, 0.5, d)
    c = math.pi ** (-(d / 2.0 + 1.0)) * math.gamma(d / 2.0) * math.sin(math.pi * alpha / 2.0)
    tag = f"d={d} alpha={alpha}"

    def smooth(x: np.ndarray):
        # passage density without its |1 - |y|^2|^(-alpha/2) factor
        k = c * abs(1.0 - x @ x) ** (alpha / 2.0)
        return lambda y: k * np.linalg.norm(y - x, axis=1) ** (-d)

    x_in = np.zeros(d)
    x_in[0] = 0.5
    exit_mass = fb.ball_volume_integral(d, smooth(x_in), "exterior", boundary_power=-alpha / 2.0)
    x_out = np.zeros(d)
    x_out[0] = 2.0
    enter_mass = fb.ball_volume_integral(d, smooth(x_out), "interior", boundary_power=-alpha / 2.0)
    return [identity_report(f"ball exit mass {tag}", 1.0, exit_mass, abs_tol=1e-5),
            identity_report(f"ball entrance mass + never-enter {tag}", 1.0,
                            enter_mass + fb.never_enter_ball_prob(p, x_out), abs_tol=1e-5)]


def check_k_duality(d: int, alpha: float, n_pairs: int = 50, seed: int = 4) -> List[VerificationReport]:
    """Passage densities and ball resolvents under ``K x = x / |x|^2``."""
    p = validate_params(alpha, 0.5, d)
    rng = np.random.default_rng(seed)
    inv = lambda v: v / (v @ v)
    n = np.linalg.norm
    g_pairs, u_pairs = [], []
    for _ in range(n_pairs):
        x = _point(d, rng.uniform(1.05, 5.0), rng)
        z = _point(d, rng.uniform(0.05, 0.95), rng)
        rhs = n(x) ** (alpha - d) * n(z) ** (-alpha - d) * fb.ball_passage_density(p, inv(x), inv(z))
        g_pairs.append((rhs, fb.ball_passage_density(p, x, z)))
        y = _point(d, rng.uniform(1.05, 5.0), rng)
        rhs = (n(x) ** (alpha - d) / n(y) ** (alpha - d) * n(y) ** (2.0 * alpha - 2.0 * d)
               * fb.ball_resolvent_density(p, inv(x), inv(y), "interior"))
        u_pairs.append((rhs, fb.ball_resolvent_density(p, x, y, "exterior")))
    tag = f"d={d} alpha={alpha}"
    return [_worst(f"K-duality passage density {tag}", g_pairs, rel_tol=1e-10),
            _worst(f"K-duality ball resolvent {tag}", u_pairs, rel_tol=1e-10)]


def check_inversion_reconstruction(p: StableParams, n_points: int = 20, seed: int = 5) -> VerificationReport:
    rng = np.random.default_rng(seed)
    pairs = []
    while len(pairs) < n_points:
        x, y = rng.uniform(1.05, 6.0, 2) * rng.choice([-1.0, 1.0], 2)
        if abs(x - y) < 1e-3:
            continue
        pairs.append((fi.resolvent_exterior(p, x, y), exterior_from_interior(p, x, y)))
    return _worst(f"exterior resolvent via inversion alpha={p.alpha} rho={p.rho}", pairs, rel_tol=1e-8)


# ------------------------------------------------------ Monte Carlo checks

_INF = math.inf


def mc_exit_up(p: StableParams, x: float, n_paths: int, seed: int,
               dt: float = 1e-2) -> VerificationReport:
    cfg = SimConfig(dt, _INF, n_paths, seed, "interval_exit", {"x": x})
    rec = simulate_event(p, cfg)
    est = estimate(np.where(rec.kind == 1, (rec.after[:, 0] >= 1.0).astype(float), np.nan))
    return compare(f"MC upward exit alpha={p.alpha} rho={p.rho} x={x}", fi.exit_up_prob(p, x), est)


def mean_exit_time(p: StableParams, x: float) -> float:
    """``int u(x, y) dy`` over (-1, 1).

    The resolvent vanishes like ``(1+y)^(alpha rho)`` and ``(1-y)^(alpha rho_hat)``
    at the ends and, for ``alpha < 1``, blows up like ``|y-x|^(alpha-1)``; those
    powers go into algebraic quadrature weights.
    """
    diag = min(p.alpha - 1.0, 0.0)

    def piece(lo: float, hi: float, wa: float, wb: float) -> float:
        margin = 1e-11 * (hi - lo)

        def smooth(y: float) -> float:
            y = min(max(y, lo + margin), hi - margin)
            return fi.resolvent_interval(p, x, y) / ((y - lo) ** wa * (hi - y) ** wb)

        return _alg_integral(smooth, lo, hi, wa, wb)

    return piece(-1.0, x, p.arho, diag) + piece(x, 1.0, diag, p.arho_hat)


def mc_mean_exit_time(p: StableParams, x: float, n_paths: int, seed: int,
                      dt: float = 1e-2) -> VerificationReport:
    cfg = SimConfig(dt, _INF, n_paths, seed, "interval_exit", {"x": x})
    est = estimate(simulate_event(p, cfg))
    return compare(f"MC mean exit time = resolvent mass alpha={p.alpha} rho={p.rho} x={x}",
                   mean_exit_time(p, x), est)


def _overshoot_estimate(p: StableParams, dt: float, n_paths: int, seed: int) -> Estimate:
    cfg = SimConfig(dt, _INF, n_paths, seed, "interval_exit",
                    {"x": 0.0, "lower": -_INF, "upper": 1.0})
    rec = simulate_event(p, cfg)
    return estimate(np.where(rec.kind == 1, rec.after[:, 0] - 1.0, np.nan))


def mc_overshoot(p: StableParams, n_paths: int, seed: int, dt: float = 1e-2,
                 plain: bool = False) -> List[VerificationReport]:
    """Overshoot over level 1 against its distribution function.

    Two runs at ``2 dt`` and ``dt`` are combined by Richardson extrapolation; with
    ``plain=True`` the fine run is also tested on its own.
    """
    coarse = _overshoot_estimate(p, 2.0 * dt, n_paths, sub_seed(seed, 0))
    fine = _overshoot_estimate(p, dt, n_paths, sub_seed(seed, 1))
    cdf = lambda u: np.array([overshoot_cdf(p, 1.0, v) for v in np.atleast_1d(u)])
    tag = f"alpha={p.alpha} rho={p.rho}"
    out = [compare_extrapolated(f"MC overshoot law (dt-extrapolated) {tag}", cdf, coarse, fine)]
    if plain:
        out.append(compare(f"MC overshoot law at dt={dt:g} {tag}", cdf, fine))
    return out


def mc_never_enter(p: StableParams, x: Sequence[float], n_paths: int, seed: int,
                   dt: float = 1e-2, escape: float = 2000.0) -> VerificationReport:
    cfg = SimConfig(dt, _INF, n_paths, seed, "ball_entrance", {"x": list(x), "escape": escape})
    rec = simulate_event(p, cfg)
    est = estimate(np.where(rec.kind == 0, np.nan, (rec.kind == 2).astype(float)))
    return compare(f"MC never enter ball d={p.dim} alpha={p.alpha} |x|={np.linalg.norm(x):g}",
                   fb.never_enter_ball_prob(p, x), est)


def _disc_average(d: int, f: Callable[[np.ndarray], float], centre: np.ndarray, radius: float) -> float:
    """``int f`` over the ball of given centre and radius (d = 2 or 3)."""
    if d == 2:
        val, _ = integrate.dblquad(
            lambda r, th: r * f(centre + r * np.array([math.cos(th), math.sin(th)])),
            0.0, 2.0 * math.pi, 0.0, radius, epsabs=1e-14, epsrel=1e-9)
        return val
    grid = fb.surface_grid(d)
    shell = lambda r: fb.sphere_area(d) * r ** (d - 1) * sum(
        w * f(centre + r * v) for v, w in zip(grid.nodes, grid.weights))
    val, _ = integrate.quad(shell, 0.0, radius, epsabs=1e-14, epsrel=1e-9)
    return val


def mc_ball_occupation(p: StableParams, x: Sequence[float], y: Sequence[float], radius: float,
                       n_paths: int, seed: int, dt: float = 5e-3) -> VerificationReport:
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    cfg = SimConfig(dt, _INF, n_paths, seed, "occupation",
                    {"x": x, "target": y, "target_radius": radius, "kill": "exit"})
    est = estimate(simulate_event(p, cfg).occupation)
    closed = _disc_average(p.dim, lambda z: fb.ball_resolvent_density(p, x, z, "interior"), y, radius)
    return compare(f"MC ball resolvent occupation d={p.dim} alpha={p.alpha}", closed, est)


def mc_entrance_law(p: StableParams, x: float, n_paths: int, seed: int,
                    dt: float = 1e-2) -> VerificationReport:
    """Entrance position law for ``alpha > 1``, where every path enters.

    No escape radius: a cut at radius ``R`` would condition on entering first,
    which drops a fraction of order ``R^(1-alpha)``.  Adaptive steps keep the
    excursions cheap.
    """
    if p.alpha <= 1.0:
        raise DomainError("the entrance law is defective for alpha <= 1")

    def run(step: float, s: int) -> Estimate:
        cfg = SimConfig(step, _INF, n_paths, s, "interval_entrance", {"x": x, "escape": _INF})
        rec = simulate_event(p, cfg)
        return estimate(np.where(rec.kind == 1, rec.after[:, 0], np.nan))

    coarse = run(2.0 * dt, sub_seed(seed, 0))
    fine = run(dt, sub_seed(seed, 1))
    return compare_extrapolated(f"MC entrance position law alpha={p.alpha} rho={p.rho} x={x}",
                                interval_entrance_cdf(p, x), coarse, fine)


# ------------------------------------------------------------ suites

def fast_suite() -> List[VerificationReport]:
    """Quadrature and algebraic identities only."""
    out: List[VerificationReport] = []
    out += check_wiener_hopf(20)
    out += check_factor_products(20)
    out.append(check_overshoot_mass(validate_params(1.5, 0.5)))
    out += check_interval_basics()
    for ar in ((1.5, 0.6), (1.3, 0.55)):
        p = validate_params(*ar)
        out.append(check_censored_laplace(p, 3))
        out.append(check_origin_killed_ratio(p, 10))
    for ar in ((1.5, 0.5), (1.3, 0.6), (0.7, 0.5)):
        out += check_map_structure(validate_params(*ar))
    for d in (2, 3):
        out += check_sphere_suite(d)
        out += check_k_duality(d, 1.5, 10)
    out += check_ball_mass(2, 1.5)
    for ar in ((1.5, 0.6), (0.8, 0.4)):
        out.append(check_inversion_reconstruction(validate_params(*ar), 10))
    return out


def full_suite(seed: int, n_paths: int = 100_000) -> List[VerificationReport]:
    """The fast suite followed by Monte Carlo comparisons."""
    out = fast_suite()
    mc: List[Callable[[int], object]] = [
        lambda s: mc_exit_up(validate_params(1.5, 0.6), 0.3, n_paths, s),
        lambda s: mc_exit_up(validate_params(0.8, 0.4), -0.2, n_paths, s),
        lambda s: mc_mean_exit_time(validate_params(1.5, 0.5), 0.0, n_paths, s),
        lambda s: mc_overshoot(validate_params(1.5, 0.5), n_paths, s),
        lambda s: mc_never_enter(validate_params(1.0, 0.5, 2), [2.0, 0.0], n_paths, s),
        lambda s: mc_ball_occupation(validate_params(1.5, 0.5, 2), [0.2, 0.0], [0.5, 0.0], 0.05,
                                     n_paths, s),
        lambda s: mc_entrance_law(validate_params(1.3, 0.55), 2.0, n_paths, s),
    ]
    for i, check in enumerate(mc):
        res = check(sub_seed(seed, i))
        out += res if isinstance(res, list) else [res]
    return out
