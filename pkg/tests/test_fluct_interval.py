import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from stablefluct import fluct_interval as fi
from stablefluct import stable_core as sc
from stablefluct import suites
from stablefluct.errors import DomainError

from strategies import admissible

inside = st.floats(-0.95, 0.95)


def test_exit_up_matches_oracle(oracle):
    for alpha, rho, x, val in oracle["exit_up_prob"]:
        assert fi.exit_up_prob(sc.validate_params(alpha, rho), x) == pytest.approx(val, rel=1e-13)


@pytest.mark.parametrize("alpha", [0.3, 1.0, 1.5, 1.99])
def test_exit_up_symmetric_start_is_exactly_half(alpha):
    assert fi.exit_up_prob(sc.validate_params(alpha, 0.5), 0.0) == 0.5


@given(admissible(), inside)
def test_exit_up_duality(p, x):
    # leaving upwards for X is leaving downwards for -X
    assert fi.exit_up_prob(p, x) + fi.exit_up_prob(p.dual(), -x) == pytest.approx(1.0, abs=1e-14)


@given(admissible())
def test_exit_up_monotone(p):
    vals = [fi.exit_up_prob(p, x) for x in np.linspace(-0.999, 0.999, 41)]
    assert np.all(np.diff(vals) > 0)
    assert 0.0 < vals[0] and vals[-1] < 1.0


def test_resolvent_matches_oracle(oracle):
    for alpha, rho, x, y, val in oracle["resolvent_interval"]:
        assert fi.resolvent_interval(sc.validate_params(alpha, rho), x, y) == pytest.approx(val, rel=1e-12)


@given(admissible(), inside, inside)
def test_resolvent_duality(p, x, y):
    if abs(x - y) < 1e-6:
        return
    u = fi.resolvent_interval(p, x, y)
    # spatial reflection and time reversal both pass to the dual process
    assert fi.resolvent_interval(p.dual(), -x, -y) == pytest.approx(u, rel=1e-12)
    assert fi.resolvent_interval(p.dual(), y, x) == pytest.approx(u, rel=1e-12)


@given(admissible(lo=1.1, hi=1.7), st.floats(-0.8, 0.8))
def test_resolvent_diagonal_limit(p, y):
    # the approach to the diagonal is Holder of order alpha - 1
    diag = fi.resolvent_interval_diagonal(p, y)
    gap = lambda h: diag - fi.resolvent_interval(p, y + h, y)
    assert gap(1e-10) > 0
    assert gap(1e-10) / gap(1e-10 / 16) == pytest.approx(16 ** (p.alpha - 1), rel=0.02)
    assert fi.resolvent_interval(p, y, y) == diag


def test_resolvent_diagonal_needs_alpha_above_one():
    p = sc.validate_params(0.8, 0.5)
    with pytest.raises(DomainError):
        fi.resolvent_interval(p, 0.1, 0.1)
    with pytest.raises(DomainError):
        fi.resolvent_interval(p, 1.0, 0.1)


@pytest.mark.parametrize("alpha, x", [(0.5, 0.0), (1.2, 0.4), (1.8, -0.7)])
def test_mean_exit_time_symmetric(alpha, x):
    p = sc.validate_params(alpha, 0.5)
    closed = (1 - x * x) ** (alpha / 2) / math.gamma(1 + alpha)
    assert suites.mean_exit_time(p, x) == pytest.approx(closed, rel=1e-9)


@given(admissible(above_one=True), inside, inside)
def test_point_hit_is_resolvent_ratio(p, x, y):
    if abs(x - y) < 1e-6:
        return
    ratio = fi.resolvent_interval(p, x, y) / fi.resolvent_interval_diagonal(p, y)
    assert fi.hit_point_before_exit(p, x, y) == pytest.approx(ratio, rel=1e-10)
    assert 0.0 < fi.hit_point_before_exit(p, x, y) < 1.0


@pytest.mark.parametrize("alpha, rho, x", [(1.5, 0.6, 0.3), (1.2, 0.5, 0.0), (0.8, 0.4, -0.2)])
def test_triple_law_total_mass(alpha, rho, x):
    p = sc.validate_params(alpha, rho)
    assert suites.triple_law_mass(p, x) == pytest.approx(fi.exit_up_prob(p, x), rel=1e-6)


def test_triple_law_support():
    p = sc.validate_params(1.5, 0.6)
    assert fi.triple_law_density(p, fi.TripleLawPoint(0.3, 0.2, 2.0, 0.4)) == 0.0
    with pytest.raises(DomainError):
        fi.triple_law_density(p, fi.TripleLawPoint(0.3, 0.2, 0.4, 0.4))


def _entrance_mass(p, x):
    q = p if x > 1 else p.dual()
    sgn = 1.0 if x > 1 else -1.0

    def smooth(t):
        t = min(max(t, -1 + 1e-11), 1 - 1e-11)
        return fi.entrance_density(p, x, sgn * t) * (1 + t) ** q.arho * (1 - t) ** q.arho_hat

    val, _ = integrate.quad(smooth, -1, 1, weight="alg", wvar=(-q.arho, -q.arho_hat),
                            epsabs=1e-13, epsrel=1e-11, limit=200)
    return val


@pytest.mark.parametrize("alpha, rho, x", [
    (1.5, 0.6, 2.0), (1.3, 0.55, -3.0), (0.8, 0.4, 1.5), (0.6, 0.5, -4.0),
])
def test_entrance_mass(alpha, rho, x):
    p = sc.validate_params(alpha, rho)
    missing = fi.avoid_interval_prob(p, x) if alpha < 1 else 0.0
    assert _entrance_mass(p, x) + missing == pytest.approx(1.0, abs=1e-9)


def test_avoid_interval_limits():
    p = sc.validate_params(0.7, 0.45)
    vals = [fi.avoid_interval_prob(p, x) for x in (1.0001, 1.5, 5.0, 1e4)]
    assert vals[0] < 0.05 and vals[-1] > 0.9
    assert np.all(np.diff(vals) > 0)
    with pytest.raises(DomainError):
        fi.avoid_interval_prob(sc.validate_params(1.5, 0.5), 2.0)


@pytest.mark.parametrize("alpha, rho", [(1.5, 0.6), (0.8, 0.4), (1.0, 0.5)])
def test_exterior_resolvent_from_inversion(alpha, rho):
    p = sc.validate_params(alpha, rho)
    for x, y in ((2.0, -3.0), (-1.5, 4.0), (1.2, 1.7), (-5.0, -1.1)):
        assert fi.resolvent_exterior(p, x, y) == pytest.approx(suites.exterior_from_interior(p, x, y), rel=1e-8)


@pytest.mark.parametrize("alpha, rho", [(1.5, 0.6), (1.3, 0.55), (1.8, 0.5)])
def test_censored_laplace_round_trip(alpha, rho):
    assert suites.check_censored_laplace(sc.validate_params(alpha, rho), 3).passed


@given(admissible(above_one=True), st.floats(-30.0, 30.0))
def test_censored_potential_positive(p, x):
    assert fi.censored_potential_density(p, x) > 0


@pytest.mark.parametrize("alpha, rho", [(1.5, 0.6), (1.3, 0.55), (1.7, 0.45)])
def test_origin_killed_ratio(alpha, rho):
    assert suites.check_origin_killed_ratio(sc.validate_params(alpha, rho), 20).passed


@given(admissible(above_one=True), st.floats(-0.99, 20.0), st.floats(0.1, 5.0), st.floats(-3.0, 3.0))
def test_two_point_law_invariances(p, x, c, shift):
    base = fi.two_point_hit_prob(p, x)
    assert fi.hit_before_prob(p, c * x + shift, c + shift, -c + shift) == pytest.approx(base, rel=1e-11, abs=1e-14)
    # hitting one point or the other first is exhaustive when points are hit
    assert fi.hit_before_prob(p, x, -1.0, 1.0) == pytest.approx(1.0 - base, abs=1e-12)


def test_two_point_boundary_values():
    p = sc.validate_params(1.5, 0.6)
    assert fi.two_point_hit_prob(p, 1.0) == 1.0
    assert fi.two_point_hit_prob(p, -0.99999) < 0.01
    with pytest.raises(DomainError):
        fi.two_point_hit_prob(sc.validate_params(0.8, 0.5), 0.0)


@given(st.floats(0.1, 1.9), st.floats(0.1, 1.9), st.floats(1.01, 30.0))
def test_branch_integral_by_quadrature(a, b, r):
    if a + b >= 2.0:
        with pytest.raises(DomainError):
            fi.branch_integral(a, b, r)
        return
    val, _ = integrate.quad(lambda s: (s + 1) ** (a - 1), 1, r, weight="alg", wvar=(b - 1, 0),
                            epsabs=1e-14, epsrel=1e-12)
    assert fi.branch_integral(a, b, r) == pytest.approx(val, rel=1e-9)


@pytest.mark.parametrize("x", [-700.0, -50.0, -20.0, -1e-8, 1e-300, 0.69, 0.7, 20.0, 50.0, 700.0])
def test_censored_potential_far_and_near_origin(x):
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 30
    p = sc.validate_params(1.95, 0.5)
    a = mpmath.mpf("1.95")
    c = -mpmath.gamma(1 - a) / mpmath.pi
    s = mpmath.sin(mpmath.pi * a / 2)
    t = mpmath.mpf(x)
    w = mpmath.exp(-abs(t))
    flat, decay = 1 - (1 - w) ** (a - 1), w ** (a - 1)
    exact = c * s * (flat + decay) if x > 0 else c * s * (1 + flat / decay)
    assert fi.censored_potential_density(p, x) == pytest.approx(float(exact), rel=1e-11)
