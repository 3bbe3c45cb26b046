"""Path simulation of stable processes and empirical first-passage estimates.

Paths are random-walk skeletons built from exact stable increments.  Each path
draws its randomness from a Philox4x32-10 counter-based stream keyed by the
seed and indexed by (path, step, block), so results do not depend on how the
paths are split across threads.

Step sizes are distance adaptive: from a point at distance ``r`` from the
event set the step is ``dt * clip(r, min_scale, max_scale)**alpha``, which
makes the spatial resolution proportional to the distance from the boundary.
Setting ``adaptive=False`` gives the plain fixed-step skeleton.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, NamedTuple, Optional, Union

import warnings

import numba as nb
import numpy as np
from scipy import stats

from .errors import DomainError
from .stable_core import StableParams

__all__ = [
    "SCENARIOS",
    "SimConfig",
    "EventRecords",
    "EmpiricalDistribution",
    "Estimate",
    "VerificationReport",
    "philox4x32",
    "sample_increment",
    "simulate_event",
    "estimate",
    "compare",
    "ks_critical",
    "compare_extrapolated",
]

SCENARIOS = ("interval_exit", "interval_entrance", "ball_exit", "ball_entrance",
             "occupation", "point_hit_proxy")

# event kinds stored per path
CENSORED, EVENT, OTHER = 0, 1, 2

_MASK = np.uint64(0xFFFFFFFF)

# numba falls back to another threading layer when TBB is too old
warnings.filterwarnings("ignore", message="The TBB threading layer", category=nb.NumbaWarning)


# --------------------------------------------------------------------- RNG

@nb.njit(cache=True, inline="always")
def _philox(c0, c1, c2, c3, k0, k1):
    for _ in range(10):
        p0 = np.uint64(0xD2511F53) * c0
        p1 = np.uint64(0xCD9E8D57) * c2
        hi0 = p0 >> np.uint64(32)
        lo0 = p0 & _MASK
        hi1 = p1 >> np.uint64(32)
        lo1 = p1 & _MASK
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
        k0 = (k0 + np.uint64(0x9E3779B9)) & _MASK
        k1 = (k1 + np.uint64(0xBB67AE85)) & _MASK
    return c0, c1, c2, c3


def philox4x32(counter, key) -> tuple:
    """Philox4x32-10 block function on four 32-bit counter words and two key words."""
    c = [np.uint64(int(v) & 0xFFFFFFFF) for v in counter]
    k = [np.uint64(int(v) & 0xFFFFFFFF) for v in key]
    if len(c) != 4 or len(k) != 2:
        raise DomainError("philox4x32 takes 4 counter words and 2 key words")
    return tuple(int(v) for v in _philox(c[0], c[1], c[2], c[3], k[0], k[1]))


@nb.njit(cache=True, inline="always")
def _to_unit(a, b):
    # 53 random bits, strictly inside (0, 1)
    hi = np.float64(a >> np.uint64(5))
    lo = np.float64(b >> np.uint64(6))
    return (hi * 67108864.0 + lo + 0.5) * (1.0 / 9007199254740992.0)


@nb.njit(cache=True, inline="always")
def _uniforms(path, step, block, k0, k1):
    s = np.uint64(step)
    r0, r1, r2, r3 = _philox(s & _MASK, s >> np.uint64(32), np.uint64(path) & _MASK,
                             np.uint64(block), k0, k1)
    return _to_unit(r0, r1), _to_unit(r2, r3)


# ------------------------------------------------------------- increments

@nb.njit(cache=True, inline="always")
def _cms(alpha, skew, u1, u2):
    """Unit-time strictly stable variable with exponent |t|^a exp(-i a skew sgn t)."""
    u = math.pi * (u1 - 0.5)
    w = -math.log(u2)
    arg = alpha * (u + skew)
    log_mod = ((1.0 - alpha) * math.log(math.cos(u - arg) / w) - math.log(math.cos(u))) / alpha
    return math.sin(arg) * math.exp(log_mod)


@nb.njit(cache=True, inline="always")
def _gauss_pair(u1, u2):
    r = math.sqrt(-2.0 * math.log(u1))
    return r * math.cos(2.0 * math.pi * u2), r * math.sin(2.0 * math.pi * u2)


@nb.njit(cache=True)
def _increment(alpha, skew, dim, length, path, step, k0, k1, out):
    """Increment over a time step whose self-similar length scale is ``length``."""
    u1, u2 = _uniforms(path, step, 0, k0, k1)
    if dim == 1:
        out[0] = length * _cms(alpha, skew, u1, u2)
        return
    # isotropic: sqrt(2) times Brownian motion run by an (alpha/2)-stable subordinator
    s = _cms(0.5 * alpha, 0.5 * math.pi, u1, u2)
    scale = length * math.sqrt(2.0 * s)
    i = 0
    block = 1
    while i < dim:
        v1, v2 = _uniforms(path, step, block, k0, k1)
        g1, g2 = _gauss_pair(v1, v2)
        out[i] = scale * g1
        if i + 1 < dim:
            out[i + 1] = scale * g2
        i += 2
        block += 1


def _skew(p: StableParams) -> float:
    return math.pi * (p.rho - 0.5)


def sample_increment(p: StableParams, dt: float, rng: np.random.Generator,
                     size: Optional[int] = None) -> np.ndarray:
    """Exact increments of the process over a time step ``dt``.

    Returns shape ``(size,)`` in dimension 1 and ``(size, d)`` otherwise; a
    single draw (scalar or length-``d`` vector) when ``size`` is None.
    """
    if not dt > 0:
        raise DomainError("dt must be positive")
    n = 1 if size is None else int(size)
    a = p.alpha

    def cms(alpha: float, skew: float) -> np.ndarray:
        u = math.pi * (rng.random(n) - 0.5)
        w = rng.exponential(size=n)
        arg = alpha * (u + skew)
        return (np.sin(arg) / np.cos(u) ** (1.0 / alpha)
                * (np.cos(u - arg) / w) ** ((1.0 - alpha) / alpha))

    if p.dim == 1:
        out = dt ** (1.0 / a) * cms(a, _skew(p))
        return float(out[0]) if size is None else out
    s = cms(0.5 * a, 0.5 * math.pi) * dt ** (2.0 / a)
    out = np.sqrt(2.0 * s)[:, None] * rng.standard_normal((n, p.dim))
    return out[0] if size is None else out


# ------------------------------------------------------------- scenarios

_CODES = {name: i for i, name in enumerate(SCENARIOS)}
_AVOID_KINDS = {"none": 0, "point": 1, "interval": 2}
_KILL_KINDS = {"exit": 0, "annulus": 1, "none": 2}


@dataclass(frozen=True)
class SimConfig:
    """Simulation settings.

    ``scenario_params`` keys by scenario (vectors have length ``dim``):

    * ``interval_exit``: ``x``, ``lower`` (default -1, may be ``-inf``), ``upper`` (default 1)
    * ``interval_entrance``: ``x`` with ``|x| > 1``; ``escape`` radius
    * ``ball_exit``: ``x`` with ``|x| < 1``
    * ``ball_entrance``: ``x`` with ``|x| > 1``; ``escape`` radius
    * ``occupation``: ``x``, ``target`` centre, ``target_radius``, ``kill``
      (``exit`` of the unit interval/ball, ``annulus`` around the unit
      sphere, or ``none``), ``kill_eps``, ``escape``
    * ``point_hit_proxy``: ``x``, ``target``, ``target_radius``, ``avoid``
      (``none``, ``point`` or ``interval``), ``avoid_point``, ``avoid_radius``,
      ``escape``; in dimension >= 2 the target is the annulus
      ``||y| - 1| < target_radius``
    """

    dt: float
    horizon: float
    n_paths: int
    seed: int
    scenario: str
    scenario_params: Mapping[str, object] = field(default_factory=dict)
    adaptive: bool = True
    min_scale: float = 1e-6
    max_scale: float = math.inf
    max_steps: int = 10 ** 8

    def __post_init__(self) -> None:
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise DomainError("dt must be positive and finite")
        if not self.horizon > 0:
            raise DomainError("horizon must be positive")
        if int(self.n_paths) != self.n_paths or self.n_paths < 1:
            raise DomainError("n_paths must be a positive integer")
        if int(self.seed) != self.seed or not (0 <= self.seed < 2 ** 64):
            raise DomainError("seed must be an integer in [0, 2^64)")
        if self.scenario not in _CODES:
            raise DomainError(f"unknown scenario {self.scenario!r}")
        if not (0 < self.min_scale <= self.max_scale):
            raise DomainError("need 0 < min_scale <= max_scale")
        if self.max_steps < 1:
            raise DomainError("max_steps must be positive")


@dataclass(frozen=True)
class EventRecords:
    """Per-path outcome of :func:`simulate_event`.

    ``kind`` is 0 for censored paths (horizon or step budget reached), 1 for
    the scenario's event and 2 for the alternative outcome (escape beyond the
    escape radius, or hitting the avoided set first).  ``before``/``after``
    are skeleton positions straddling the event; ``occupation`` is the time
    spent in the target set (occupation scenario only).
    """

    scenario: str
    kind: np.ndarray
    time: np.ndarray
    steps: np.ndarray
    before: np.ndarray
    after: np.ndarray
    occupation: np.ndarray

    @property
    def n_paths(self) -> int:
        return int(self.kind.size)

    @property
    def censored(self) -> int:
        return int(np.count_nonzero(self.kind == CENSORED))


@nb.njit(cache=True)
def _dist(code, dim, x, lo, hi, tgt, tgt_r, avoid_kind, avoid_pt, avoid_r, kill_kind, kill_eps):
    """Distance from x to the set whose entry ends the path."""
    if dim == 1:
        r = abs(x[0])
    else:
        r = 0.0
        for i in range(dim):
            r += x[i] * x[i]
        r = math.sqrt(r)
    if code == 0:
        return min(x[0] - lo, hi - x[0])
    if code == 1 or code == 3:
        return r - 1.0
    if code == 2:
        return 1.0 - r
    if code == 4:
        if kill_kind == 0:
            d = 1.0 - r
        elif kill_kind == 1:
            d = abs(r - 1.0) - kill_eps
        else:
            d = math.inf
        # resolve the target set as well
        e = 0.0
        for i in range(dim):
            e += (x[i] - tgt[i]) ** 2
        return min(d, max(math.sqrt(e), tgt_r))
    # point_hit_proxy
    if dim == 1:
        d = abs(x[0] - tgt[0]) - tgt_r
    else:
        d = abs(r - 1.0) - tgt_r
    if avoid_kind == 1:
        e = 0.0
        for i in range(dim):
            e += (x[i] - avoid_pt[i]) ** 2
        d = min(d, math.sqrt(e) - avoid_r)
    elif avoid_kind == 2:
        d = min(d, 1.0 - r)
    return d


@nb.njit(cache=True)
def _in_target(dim, x, tgt, tgt_r):
    e = 0.0
    for i in range(dim):
        e += (x[i] - tgt[i]) ** 2
    return e < tgt_r * tgt_r


@nb.njit(cache=True, parallel=True)
def _simulate(code, alpha, skew, dim, dt, horizon, max_steps, adaptive, min_scale,
              max_scale, k0, k1, x0, lo, hi, escape, tgt, tgt_r, avoid_kind, avoid_pt,
              avoid_r, kill_kind, kill_eps, offset, kind, time, steps, before, after, occ):
    n = kind.size
    dt_len = dt ** (1.0 / alpha)
    for path in nb.prange(n):
        stream = offset + path
        x = x0.copy()
        dx = np.empty(dim)
        t = 0.0
        o = 0.0
        k = 0
        outcome = 0
        while True:
            dist = _dist(code, dim, x, lo, hi, tgt, tgt_r, avoid_kind, avoid_pt,
                         avoid_r, kill_kind, kill_eps)
            if adaptive:
                s = min(max(dist, min_scale), max_scale)
                h = dt * s ** alpha
                length = dt_len * s
            else:
                h = dt
                length = dt_len
            if t + h > horizon or k >= max_steps:
                break
            if code == 4 and _in_target(dim, x, tgt, tgt_r):
                o += h
            _increment(alpha, skew, dim, length, stream, k, k0, k1, dx)
            for i in range(dim):
                before[path, i] = x[i]
                x[i] += dx[i]
            t += h
            k += 1
            r = 0.0
            for i in range(dim):
                r += x[i] * x[i]
            r = math.sqrt(r)
            if code == 0:
                if x[0] <= lo or x[0] >= hi:
                    outcome = 1
            elif code == 1 or code == 3:
                if r < 1.0:
                    outcome = 1
                elif r > escape:
                    outcome = 2
            elif code == 2:
                if r >= 1.0:
                    outcome = 1
            elif code == 4:
                if kill_kind == 0:
                    if r >= 1.0:
                        outcome = 1
                elif kill_kind == 1:
                    if abs(r - 1.0) < kill_eps:
                        outcome = 1
                if outcome == 0 and r > escape:
                    outcome = 2
            else:
                if dim == 1:
                    hit = abs(x[0] - tgt[0]) < tgt_r
                else:
                    hit = abs(r - 1.0) < tgt_r
                if hit:
                    outcome = 1
                elif avoid_kind == 1:
                    e = 0.0
                    for i in range(dim):
                        e += (x[i] - avoid_pt[i]) ** 2
                    if e < avoid_r * avoid_r:
                        outcome = 2
                elif avoid_kind == 2 and r >= 1.0:
                    outcome = 2
                if outcome == 0 and r > escape:
                    outcome = 2
            if outcome != 0:
                break
        kind[path] = outcome
        time[path] = t
        steps[path] = k
        occ[path] = o
        for i in range(dim):
            after[path, i] = x[i]
        if k == 0:
            for i in range(dim):
                before[path, i] = x[i]


def _vec(v, dim: int, name: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(v, dtype=float)).copy()
    if arr.shape != (dim,):
        raise DomainError(f"{name} must have length {dim}")
    return arr


def simulate_event(p: StableParams, cfg: SimConfig,
                   path_range: Optional[tuple] = None) -> EventRecords:
    """Simulate ``cfg.n_paths`` skeleton paths and record the scenario event.

    ``path_range=(start, stop)`` simulates only that slice of path indices;
    concatenating slices reproduces the full run exactly.
    """
    sp = dict(cfg.scenario_params)
    d = p.dim
    code = _CODES[cfg.scenario]
    if cfg.scenario.startswith("interval") and d != 1:
        raise DomainError(f"{cfg.scenario} needs dimension 1")
    if cfg.scenario.startswith("ball") and d < 2:
        raise DomainError(f"{cfg.scenario} needs dimension >= 2")
    x0 = _vec(sp.get("x", np.zeros(d)), d, "x")
    r0 = float(np.linalg.norm(x0))
    lo = float(sp.get("lower", -1.0))
    hi = float(sp.get("upper", 1.0))
    escape = float(sp.get("escape", math.inf))
    tgt = _vec(sp.get("target", np.zeros(d)), d, "target")
    tgt_r = float(sp.get("target_radius", 0.0))
    avoid = str(sp.get("avoid", "none"))
    kill = str(sp.get("kill", "exit"))
    avoid_pt = _vec(sp.get("avoid_point", np.zeros(d)), d, "avoid_point")
    avoid_r = float(sp.get("avoid_radius", 0.0))
    kill_eps = float(sp.get("kill_eps", 0.0))
    if avoid not in _AVOID_KINDS or kill not in _KILL_KINDS:
        raise DomainError("unknown avoid/kill kind")

    if code == 0 and not (lo < x0[0] < hi):
        raise DomainError("interval_exit needs lower < x < upper")
    if code in (1, 3) and not r0 > 1.0:
        raise DomainError(f"{cfg.scenario} needs |x| > 1")
    if code == 2 and not r0 < 1.0:
        raise DomainError("ball_exit needs |x| < 1")
    if code == 4:
        if not tgt_r > 0:
            raise DomainError("occupation needs target_radius > 0")
        if kill == "exit" and not r0 < 1.0:
            raise DomainError("occupation with kill='exit' needs |x| < 1")
        if kill == "none" and not math.isfinite(escape) and math.isinf(cfg.horizon):
            raise DomainError("occupation with kill='none' needs a finite escape radius or horizon")
        if kill == "annulus" and not (kill_eps > 0 and abs(r0 - 1.0) > kill_eps):
            raise DomainError("occupation with kill='annulus' needs x outside the annulus")
    if code == 5:
        if not tgt_r > 0:
            raise DomainError("point_hit_proxy needs target_radius > 0")
        if avoid == "point" and not avoid_r > 0:
            raise DomainError("avoid='point' needs avoid_radius > 0")
        if avoid == "interval" and not r0 < 1.0:
            raise DomainError("avoid='interval' needs |x| < 1")

    start, stop = (0, cfg.n_paths) if path_range is None else map(int, path_range)
    if not (0 <= start < stop <= cfg.n_paths):
        raise DomainError("path_range must lie within [0, n_paths)")
    n = stop - start
    kind = np.zeros(n, dtype=np.int8)
    time = np.zeros(n)
    steps = np.zeros(n, dtype=np.int64)
    before = np.zeros((n, d))
    after = np.zeros((n, d))
    occ = np.zeros(n)
    seed = int(cfg.seed)
    k0, k1 = np.uint64(seed & 0xFFFFFFFF), np.uint64(seed >> 32)
    _simulate(code, p.alpha, _skew(p), d, cfg.dt, cfg.horizon, cfg.max_steps, cfg.adaptive,
              cfg.min_scale, cfg.max_scale, k0, k1, x0, lo, hi, escape, tgt, tgt_r,
              _AVOID_KINDS[avoid], avoid_pt, avoid_r, _KILL_KINDS[kill], kill_eps, start,
              kind, time, steps, before, after, occ)
    return EventRecords(cfg.scenario, kind, time, steps, before, after, occ)


# ------------------------------------------------------------- estimation

@dataclass(frozen=True)
class EmpiricalDistribution:
    """Sorted uncensored samples plus the number of censored paths."""

    samples: np.ndarray
    censored: int = 0

    def __post_init__(self) -> None:
        arr = np.asarray(self.samples, dtype=float)
        if arr.ndim != 1:
            raise DomainError("samples must be one-dimensional")
        if arr.size and np.any(np.diff(arr) < 0):
            raise DomainError("samples must be sorted")
        if self.censored < 0:
            raise DomainError("censored count must be non-negative")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @property
    def n(self) -> int:
        return int(self.samples.size)

    def cdf(self, x) -> np.ndarray:
        """Empirical distribution function of the uncensored samples."""
        return np.searchsorted(self.samples, np.asarray(x, dtype=float), side="right") / self.n


class Estimate(NamedTuple):
    distribution: EmpiricalDistribution
    mean: float
    std_err: float


def estimate(data: Union[EventRecords, np.ndarray], censored: int = 0) -> Estimate:
    """Empirical law, mean and plug-in standard error ``std/sqrt(n)``.

    An :class:`EventRecords` contributes the event times of its uncensored
    paths and reports the censored ones.  An array of per-path values is used
    as is (NaN entries count as censored).
    """
    if isinstance(data, EventRecords):
        keep = data.kind != CENSORED
        values = data.time[keep]
        censored = censored + data.censored
    else:
        values = np.asarray(data, dtype=float).reshape(-1)
        nan = np.isnan(values)
        censored = censored + int(np.count_nonzero(nan))
        values = values[~nan]
    if values.size == 0:
        raise DomainError("no uncensored records to estimate from")
    values = np.sort(values)
    mean = float(np.mean(values))
    se = float(np.std(values) / math.sqrt(values.size))
    return Estimate(EmpiricalDistribution(values, censored), mean, se)


# ------------------------------------------------------------- comparison

@dataclass(frozen=True)
class VerificationReport:
    name: str
    closed_form: float
    estimate: float
    std_err: float
    ks_stat: Optional[float]
    passed: bool
    tolerance_rule: str

    def as_dict(self) -> dict:
        return {"name": self.name, "closed_form": self.closed_form, "estimate": self.estimate,
                "std_err": self.std_err, "ks_stat": self.ks_stat, "pass": self.passed,
                "tolerance_rule": self.tolerance_rule}


def ks_critical(n: int, level: float = 0.01) -> float:
    """Critical value of the one-sample Kolmogorov-Smirnov statistic."""
    return float(stats.kstwo.isf(level, int(n)))


def compare(name: str, closed_form: Union[float, Callable[[np.ndarray], np.ndarray]],
            est: Estimate, level: float = 0.01) -> VerificationReport:
    """Check an estimate against a closed form.

    A scalar closed form passes when it lies within three standard errors of
    the estimate.  A callable is read as a distribution function and tested by
    a one-sample Kolmogorov-Smirnov test at ``level``.
    """
    if callable(closed_form):
        dist = est.distribution
        if dist.n == 0:
            raise DomainError("empty distribution")
        if dist.censored:
            raise DomainError("KS comparison needs an uncensored sample")
        res = stats.kstest(dist.samples, closed_form)
        crit = ks_critical(dist.n, level)
        ks = float(res.statistic)
        return VerificationReport(name, math.nan, est.mean, est.std_err, ks, ks <= crit,
                                  f"KS <= {crit:.6g} (level {level:g}, n={dist.n})")
    arr = np.asarray(closed_form, dtype=float)
    if arr.ndim != 0:
        raise DomainError("scalar comparison needs a scalar closed form")
    cf = float(arr)
    gap = abs(cf - est.mean)
    return VerificationReport(name, cf, est.mean, est.std_err, None,
                              bool(gap <= 3.0 * est.std_err), "|closed_form - estimate| <= 3 std_err")


def compare_extrapolated(name: str, cdf: Callable[[np.ndarray], np.ndarray],
                         coarse: Estimate, fine: Estimate, order: float = 1.0,
                         level: float = 0.01) -> VerificationReport:
    """KS test of a dt-halving Richardson extrapolation of two empirical laws.

    ``coarse`` and ``fine`` are independent samples simulated with steps ``2 dt``
    and ``dt``.  When the skeleton bias is ``C dt^order`` the combination
    ``F_ext = (2^order F_fine - F_coarse) / (2^order - 1)`` removes it.  Its
    fluctuation is a Brownian bridge scaled by
    ``sqrt(a^2 / n_fine + b^2 / n_coarse)`` with ``a``, ``b`` the two weights,
    which sets the critical value.
    """
    fc, ff = coarse.distribution, fine.distribution
    if fc.censored or ff.censored:
        raise DomainError("KS comparison needs uncensored samples")
    if fc.n == 0 or ff.n == 0:
        raise DomainError("empty distribution")
    r = 2.0 ** order
    wa, wb = r / (r - 1.0), 1.0 / (r - 1.0)
    pts = np.union1d(fc.samples, ff.samples)
    exact = np.asarray(cdf(pts), dtype=float)
    right = wa * ff.cdf(pts) - wb * fc.cdf(pts)
    # left limits at the jump points
    left = (wa * np.searchsorted(ff.samples, pts, side="left") / ff.n
            - wb * np.searchsorted(fc.samples, pts, side="left") / fc.n)
    ks = float(max(np.max(np.abs(right - exact)), np.max(np.abs(left - exact))))
    scale = math.sqrt(wa ** 2 / ff.n + wb ** 2 / fc.n)
    crit = float(stats.kstwobign.isf(level)) * scale
    est_mean = wa * fine.mean - wb * coarse.mean
    se = math.sqrt(wa ** 2 * fine.std_err ** 2 + wb ** 2 * coarse.std_err ** 2)
    return VerificationReport(name, math.nan, est_mean, se, ks, ks <= crit,
                              f"extrapolated KS <= {crit:.6g} (level {level:g}, order {order:g})")
