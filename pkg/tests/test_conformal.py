from __future__ import annotations

import math

import numpy as np
import pytest

from hypmetrics.boundary_sup import s_metric
from hypmetrics.closed_forms import MetricKind, p_values, rho_values
from hypmetrics.conformal import (BallAutomorphism, CayleyBallToHalfspace, CayleyHalfspaceToBall, PlanarAnalytic,
                                  RadialStretch, apply_map, check_mobius_j_k_distortion, check_p_mobius_bounds,
                                  check_qr_holder_bound, check_s_mobius_bound, empirical_bilipschitz_constant,
                                  linear_dilatation, parse_map)
from hypmetrics.geom import Ball, DomainError, HalfSpace
from hypmetrics.sampling import rng_for, uniform_points

B2 = Ball(np.zeros(2), 1.0)


def test_apply_map_examples():
    ident = BallAutomorphism(np.zeros(2))
    assert np.allclose(apply_map(ident, [0.3, 0.4]), [0.3, 0.4], atol=1e-15)
    assert np.allclose(apply_map(RadialStretch(2.0), [0.25, 0]), [0.5, 0], atol=1e-15)
    sigma = BallAutomorphism(np.array([0.5, 0.0]))
    assert np.allclose(apply_map(sigma, [0.5, 0]), [0, 0], atol=1e-15)


def test_apply_map_rejects_outside_source():
    with pytest.raises(DomainError):
        apply_map(BallAutomorphism(np.zeros(2)), [1.0, 0.5])
    with pytest.raises(DomainError):
        apply_map(RadialStretch(2.0), [0.0, 0.0])
    with pytest.raises(DomainError):
        BallAutomorphism(np.array([1.0, 0.0]))
    with pytest.raises(DomainError):
        BallAutomorphism(np.zeros(2), np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(DomainError):
        RadialStretch(0.5)


@pytest.mark.parametrize("f", [BallAutomorphism.planar([0.3, -0.4], 0.7), BallAutomorphism(np.array([0.2, 0.1, -0.5])),
                               CayleyBallToHalfspace(2), CayleyBallToHalfspace(3), RadialStretch(2.0)],
                         ids=lambda f: f"{f.describe()}-{f.dim}")
def test_maps_are_bijections_onto_target(f):
    src = f.source()
    X = uniform_points(src, rng_for(0, "maps", f.describe()), 1000)
    FX = f.apply(X)
    assert f.target().contains(FX).all()
    assert np.max(np.abs(f.inverse(FX) - X)) <= 1e-12


def test_cayley_inverse_maps_halfspace_to_ball():
    g = CayleyHalfspaceToBall(2)
    X = uniform_points(HalfSpace(2), rng_for(0, "cayley-inv"), 1000)
    Y = g.apply(X)
    assert B2.contains(Y).all()
    assert np.max(np.abs(g.inverse(Y) - X) / np.maximum(1, np.abs(X))) <= 1e-11


def test_mobius_preserves_rho():
    sigma = BallAutomorphism.planar([0.5, 0.2], 1.1)
    rng = rng_for(1, "rho")
    X, Y = uniform_points(B2, rng, 1000), uniform_points(B2, rng, 1000)
    a = rho_values(B2, X, Y)
    b = rho_values(B2, sigma.apply(X), sigma.apply(Y))
    assert np.max(np.abs(a - b) / np.maximum(a, 1)) <= 1e-12
    c = CayleyBallToHalfspace(2)
    h = rho_values(HalfSpace(2), c.apply(X), c.apply(Y))
    assert np.max(np.abs(a - h) / np.maximum(a, 1)) <= 1e-11


def test_parse_map_forms():
    assert isinstance(parse_map("radial:K=3"), RadialStretch)
    assert parse_map("radial:K=3").K == 3.0
    m = parse_map("mobius:a=0.5,0;theta=0.3")
    assert np.allclose(m.a, [0.5, 0])
    assert parse_map("cayley").describe() == "cayley"
    assert parse_map("cayley-inv").describe() == "cayley-inv"
    assert isinstance(parse_map("square"), PlanarAnalytic)
    for bad in ("nope", "radial:K", "mobius:a=x,y"):
        with pytest.raises(DomainError):
            parse_map(bad)


@pytest.mark.parametrize("f,z", [(BallAutomorphism.planar([0.5, 0.0], 0.0), (0.2, 0.3)),
                                 (CayleyBallToHalfspace(2), (-0.4, 0.1)),
                                 (CayleyHalfspaceToBall(2), (0.3, 1.2)),
                                 (PlanarAnalytic("square"), (1.1, 0.2))], ids=lambda v: str(v))
def test_conformal_dilatation_is_one(f, z):
    est = linear_dilatation(f, z)
    assert est.H == pytest.approx(1.0, abs=0.02)
    assert est.converged
    assert all(q >= 1 for q in est.ratios)


def test_radial_stretch_dilatation():
    est = linear_dilatation(RadialStretch(2.0), [0.5, 0])
    assert est.H == pytest.approx(2.0, abs=0.1)
    with pytest.raises(DomainError):
        linear_dilatation(RadialStretch(2.0), [0.0, 0.0])
    with pytest.raises(DomainError):
        linear_dilatation(RadialStretch(2.0), [0.5, 0], radii=(0.6,))


def test_j_k_distortion_examples():
    r = check_mobius_j_k_distortion(CayleyBallToHalfspace(2), samples=1000, metrics=("j",))
    assert r.passed and r.samples == 1000
    r = check_mobius_j_k_distortion(BallAutomorphism(np.array([0.5, 0.0])), samples=300)
    assert r.passed
    # identity: j ratio exactly 1 on both sides
    X = uniform_points(B2, rng_for(2, "id"), 50)
    r = check_mobius_j_k_distortion(BallAutomorphism(np.zeros(2)), samples=(X, X[::-1]), metrics=("j",))
    assert r.passed
    with pytest.raises(DomainError):
        check_mobius_j_k_distortion(RadialStretch(2.0))


def test_s_mobius_examples():
    # in the disk s(0, (r,0)) = r/(2-r): the minimizer is z=(1,0)
    s = s_metric(B2, [0, 0], [0.5, 0]).value
    assert s == pytest.approx(1 / 3, abs=1e-9)
    assert 2 * s / (1 + s * s) == pytest.approx(0.6, abs=1e-9)
    r = check_s_mobius_bound(BallAutomorphism(np.zeros(2)), samples=([[0, 0]], [[0.5, 0]]))
    assert r.passed
    r = check_s_mobius_bound(BallAutomorphism(np.zeros(2)), samples=([[0.1, 0]], [[0.1, 0]]))
    assert r.passed
    assert check_s_mobius_bound(CayleyBallToHalfspace(2), samples=2000).passed


def test_p_mobius_part1_example_window():
    c = CayleyBallToHalfspace(2)
    X, Y = np.array([[0.0, 0.0]]), np.array([[0.5, 0.0]])
    p = p_values(B2, X, Y)[0]
    q = p_values(HalfSpace(2), c.apply(X), c.apply(Y))[0]
    # p_B(0, (r,0)) = r/(2-r) = 1/3, window [1/3, 0.6]; the image value is th(log 3 / 2) = 1/2
    assert p == pytest.approx(1 / 3, abs=1e-15)
    assert q == pytest.approx(0.5, abs=1e-12)
    assert p - 1e-12 <= q <= 2 * p / (1 + p * p) + 1e-12
    assert check_p_mobius_bounds(c, 1, samples=(X, Y)).passed
    assert check_p_mobius_bounds(c, 1, samples=(X, X)).passed


def test_p_mobius_parts_sampled():
    assert check_p_mobius_bounds(CayleyBallToHalfspace(2), 1, samples=10_000).passed
    assert check_p_mobius_bounds(BallAutomorphism(np.array([0.3, 0.2])), 2, samples=10_000).passed
    assert check_p_mobius_bounds(CayleyHalfspaceToBall(2), 3, samples=10_000).passed
    with pytest.raises(DomainError):
        check_p_mobius_bounds(CayleyBallToHalfspace(2), 2)
    with pytest.raises(ValueError):
        check_p_mobius_bounds(CayleyBallToHalfspace(2), 4)


def test_qr_holder_examples():
    # K=1: the bound collapses to the Möbius bound (factor lam^0 = 1)
    assert check_qr_holder_bound(RadialStretch(1.0), samples=500).passed
    f = RadialStretch(2.0)
    X, Y = np.array([[0.25, 0.0]]), np.array([[0.5, 0.0]])
    r = check_qr_holder_bound(f, samples=(X, Y))
    assert r.passed
    lhs = s_metric(B2, [0.5, 0], [math.sqrt(0.5), 0]).value
    s = s_metric(B2, X[0], Y[0]).value
    assert lhs <= 2 * math.sqrt(2 * s / (1 + s * s))
    assert check_qr_holder_bound(f, samples=2000).passed
    with pytest.raises(DomainError):
        check_qr_holder_bound(f, samples=(np.zeros((1, 2)), Y))


def test_bilipschitz_examples():
    sigma = BallAutomorphism(np.array([0.5, 0.0]))
    assert empirical_bilipschitz_constant(sigma, MetricKind.J, samples=10_000) <= 2 + 1e-6
    ident = BallAutomorphism(np.zeros(2))
    assert empirical_bilipschitz_constant(ident, MetricKind.J, samples=1000) == pytest.approx(1.0, abs=1e-12)
    X = uniform_points(B2, rng_for(3, "dup"), 5)
    with pytest.raises(DomainError):
        empirical_bilipschitz_constant(ident, MetricKind.J, samples=(X, X))


def test_radial_dilatation_below_bilipschitz_square():
    f = RadialStretch(2.0)
    L = empirical_bilipschitz_constant(f, MetricKind.S, samples=1000)
    rng = rng_for(4, "radial-z")
    for _ in range(20):
        z = rng.uniform(-0.6, 0.6, 2)
        if np.linalg.norm(z) < 0.05:
            continue
        assert linear_dilatation(f, z).H <= L * L + 0.05
