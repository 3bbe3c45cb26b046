import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from stablefluct import fluct_ball as fb
from stablefluct import stable_core as sc
from stablefluct import suites
from stablefluct.errors import DomainError


def iso(alpha, d):
    return sc.validate_params(alpha, 0.5, d)


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


vec3 = arrays(float, 3, elements=st.floats(-3.0, 3.0))


def test_riesz_constant_matches_oracle(oracle):
    for d, alpha, val in oracle["riesz_sphere_constant"]:
        assert fb.riesz_sphere_constant(iso(alpha, d)) == pytest.approx(val, rel=1e-12)


@pytest.mark.parametrize("d, alpha", [(2, 1.3), (2, 1.8), (3, 1.5), (3, 1.1)])
def test_riesz_constant_by_singular_quadrature(d, alpha):
    pole = unit(np.arange(1, d + 1))
    direct = fb.surface_quadrature(d, lambda z: np.ones(len(z)), singular_at=pole,
                                   singular_power=alpha - d)
    assert direct == pytest.approx(fb.riesz_sphere_constant(iso(alpha, d)), rel=1e-9)


def test_never_enter_matches_oracle(oracle):
    for d, alpha, r, val in oracle["never_enter_ball_prob"]:
        x = np.zeros(d)
        x[0] = r
        assert fb.never_enter_ball_prob(iso(alpha, d), x) == pytest.approx(val, rel=1e-12)


@pytest.mark.parametrize("d, alpha", [(2, 0.7), (2, 1.5), (3, 1.9)])
def test_never_enter_monotone_in_radius(d, alpha):
    p = iso(alpha, d)
    radii = np.geomspace(1.0001, 1e4, 40)
    vals = [fb.never_enter_ball_prob(p, np.r_[r, np.zeros(d - 1)]) for r in radii]
    assert np.all(np.diff(vals) > 0)
    assert 0.0 < vals[0] < 0.05 and vals[-1] > 0.99


@pytest.mark.parametrize("d, alpha, r", [(2, 1.5, 0.4), (2, 1.2, 2.5), (3, 1.6, 0.6), (3, 1.3, 3.0)])
def test_hit_density_integrates_to_hit_prob(d, alpha, r):
    p = iso(alpha, d)
    x = r * unit(np.ones(d))
    dens = lambda z: np.array([fb.sphere_hit_density(p, x, zi) for zi in z])
    mass = fb.surface_quadrature(d, dens, fb.surface_grid(d))
    assert mass == pytest.approx(fb.sphere_hit_prob(p, x), rel=1e-8)


@given(vec3, vec3)
def test_sphere_resolvent_is_symmetric(x, y):
    p = iso(1.5, 3)
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if min(abs(nx - 1), abs(ny - 1), np.linalg.norm(x - y)) < 1e-3:
        return
    assert fb.sphere_resolvent_density(p, x, y) == pytest.approx(fb.sphere_resolvent_density(p, y, x), rel=1e-9)


@given(arrays(float, 3, elements=st.floats(-0.57, 0.57)), arrays(float, 3, elements=st.floats(-0.57, 0.57)))
def test_ball_resolvent_symmetric_and_below_free(x, y):
    p = iso(1.3, 3)
    if np.linalg.norm(x - y) < 1e-3:
        return
    u = fb.ball_resolvent_density(p, x, y)
    assert u == pytest.approx(fb.ball_resolvent_density(p, y, x), rel=1e-10)
    free = sc.free_potential_constant(p) * np.linalg.norm(x - y) ** (p.alpha - 3)
    assert 0.0 < u < free


@given(vec3, st.floats(0.2, 4.0), st.sampled_from(["star", "diamond"]))
def test_inversion_is_an_involution(x, r, variant):
    s = fb.SphereSpec(np.array([0.3, -1.0, 0.5]), r)
    if np.linalg.norm(x - s.center) < 1e-3:
        return
    back = fb.invert_sphere(fb.invert_sphere(x, s, variant), s, variant)
    assert np.allclose(back, x, rtol=1e-9, atol=1e-9)


def test_inversion_fixes_the_sphere_and_diamond_reflects():
    s = fb.SphereSpec(np.array([1.0, 2.0]), 2.0)
    on = s.center + 2.0 * unit([3.0, -4.0])
    assert np.allclose(fb.invert_sphere(on, s), on)
    assert np.allclose(fb.invert_sphere(on, s, "diamond"), 2 * s.center - on)
    with pytest.raises(DomainError):
        fb.invert_sphere(s.center, s)
    with pytest.raises(DomainError):
        fb.invert_sphere(on, s, "spade")


@pytest.mark.parametrize("d", [2, 3])
def test_surface_grid_moments(d):
    g = fb.surface_grid(d)
    z = g.nodes
    assert g.weights.sum() == pytest.approx(1.0, abs=1e-14)
    assert np.allclose(g.weights @ z, 0.0, atol=1e-14)
    assert np.allclose(g.weights @ (z ** 2), 1.0 / d, atol=1e-13)
    # E[z_0^4] on S_{d-1} is 3 / (d (d + 2))
    assert g.weights @ z[:, 0] ** 4 == pytest.approx(3.0 / (d * (d + 2)), rel=1e-12)


def test_surface_grid_rejects_bad_input():
    with pytest.raises(DomainError):
        fb.surface_grid(4)
    with pytest.raises(DomainError):
        fb.SurfaceGrid(np.array([[1.0, 0.0], [0.0, 1.0]]), np.array([0.7, 0.7]))
    with pytest.raises(DomainError):
        fb.SurfaceGrid(np.array([[1.0, 0.1]]), np.array([1.0]))


@pytest.mark.parametrize("d, alpha", [(2, 1.5), (3, 0.8)])
def test_batched_passage_density_matches_scalar(d, alpha):
    p = iso(alpha, d)
    rng = np.random.default_rng(5)
    x = 0.3 * unit(rng.normal(size=d))
    ys = np.array([r * unit(rng.normal(size=d)) for r in rng.uniform(1.01, 6.0, 25)])
    batch = fb.ball_passage_density(p, x, ys)
    assert batch.shape == (25,)
    assert np.allclose(batch, [fb.ball_passage_density(p, x, y) for y in ys], rtol=1e-14, atol=0)


def test_passage_density_needs_opposite_sides():
    p = iso(1.5, 2)
    with pytest.raises(DomainError):
        fb.ball_passage_density(p, [0.1, 0.0], [0.5, 0.0])
    with pytest.raises(DomainError):
        fb.ball_passage_density(p, [0.1, 0.0], np.array([[2.0, 0.0], [0.5, 0.0]]))


@pytest.mark.parametrize("d", [2, 3])
def test_sphere_suite(d):
    reports = suites.check_sphere_suite(d)
    assert all(r.passed for r in reports), [r for r in reports if not r.passed]


@pytest.mark.parametrize("d, alpha", [(2, 1.5), (2, 0.6), (3, 0.8), (3, 1.9)])
def test_ball_passage_mass(d, alpha):
    reports = suites.check_ball_mass(d, alpha)
    assert all(r.passed for r in reports), [r for r in reports if not r.passed]


@pytest.mark.parametrize("d, alpha", [(2, 1.5), (3, 1.2), (3, 0.7)])
def test_inversion_duality_of_ball_laws(d, alpha):
    reports = suites.check_k_duality(d, alpha, 30)
    assert all(r.passed for r in reports), [r for r in reports if not r.passed]


def test_sphere_never_hit_for_alpha_at_most_one():
    p = iso(0.9, 2)
    assert fb.sphere_hit_prob(p, [0.2, 0.1]) == 0.0
    with pytest.raises(DomainError):
        fb.sphere_hit_density(p, [0.2, 0.1], [1.0, 0.0])
    with pytest.raises(DomainError):
        fb.riesz_sphere_constant(p)


def test_one_dimensional_params_rejected():
    with pytest.raises(DomainError):
        fb.never_enter_ball_prob(sc.validate_params(1.5, 0.5), [2.0])


def test_sphere_area():
    assert fb.sphere_area(2) == pytest.approx(2 * math.pi)
    assert fb.sphere_area(3) == pytest.approx(4 * math.pi)


@pytest.mark.parametrize("d, alpha, rx, ry", [(2, 1.5, 0.5, 2.5), (2, 1.3, 2.0, 0.4), (3, 1.6, 0.4, 0.7),
                                               (3, 1.2, 3.0, 1.8)])
def test_sphere_resolvent_last_exit_decomposition(d, alpha, rx, ry):
    # killed potential = free potential minus the part started from the hitting position
    p = iso(alpha, d)
    x = rx * unit(np.arange(1, d + 1))
    y = ry * unit(np.r_[-1.0, np.ones(d - 1)])
    kappa = sc.free_potential_constant(p)
    hit = lambda z: np.array([fb.sphere_hit_density(p, x, zi) for zi in z])
    after = fb.surface_quadrature(d, lambda z: hit(z) * kappa * np.linalg.norm(z - y, axis=1) ** (alpha - d))
    free = kappa * np.linalg.norm(x - y) ** (alpha - d)
    assert fb.sphere_resolvent_density(p, x, y) == pytest.approx(free - after, rel=1e-9)


@pytest.mark.parametrize("d, alpha, rx", [(2, 1.5, 0.5), (3, 1.4, 2.0)])
def test_sphere_resolvent_far_target(d, alpha, rx):
    # far away the killed potential is the free one thinned by the chance of hitting the sphere
    p = iso(alpha, d)
    x = rx * unit(np.ones(d))
    y = 1e6 * unit(np.r_[1.0, -2.0, 0.5][:d])
    free = sc.free_potential_constant(p) * np.linalg.norm(x - y) ** (alpha - d)
    ratio = fb.sphere_resolvent_density(p, x, y) / free
    assert ratio == pytest.approx(1.0 - fb.sphere_hit_prob(p, x), rel=1e-5)


@given(st.floats(0.05, 0.95), st.sampled_from([(2, 1.5), (3, 1.2), (3, 1.8)]))
def test_sphere_hit_prob_under_inversion(r, case):
    d, alpha = case
    p = iso(alpha, d)
    x = r * unit(np.arange(1, d + 1))
    assert fb.sphere_hit_prob(p, x) == pytest.approx(r ** (alpha - d) * fb.sphere_hit_prob(p, x / r ** 2),
                                                     rel=1e-10)
