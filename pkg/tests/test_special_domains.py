from __future__ import annotations

import math

import numpy as np
import pytest

from hypmetrics.boundary_sup import v_values
from hypmetrics.closed_forms import p_values
from hypmetrics.geom import Ball, CutDisk, DomainError, HalfSpace, KochPolygon, Strip, unit_square
from hypmetrics.special_domains import (boundary_points, h_delta_check, nonlinearity_delta_estimate,
                                        strip_constant, strip_minimizer, strip_objective)


def test_strip_constant_examples():
    assert strip_constant() == pytest.approx(0.73707, abs=1e-4)
    assert strip_objective(0.5) == pytest.approx(math.asin(0.5) * math.sqrt(0.5) / 0.5, abs=1e-15)
    assert strip_objective(0.5) == pytest.approx(0.74048, abs=1e-5)
    assert strip_objective(1e-9) == pytest.approx(1.0, abs=1e-8)


def test_strip_constant_is_the_minimum():
    # an independent dense scan plus bounded scalar minimization
    from scipy.optimize import minimize_scalar
    t = np.linspace(1e-6, 1 - 1e-6, 200_001)
    dense = strip_objective(t).min()
    res = minimize_scalar(lambda u: float(strip_objective(u)), bounds=(1e-6, 1 - 1e-6), method="bounded",
                          options={"xatol": 1e-12})
    C = strip_constant()
    assert C <= dense + 1e-12
    assert C == pytest.approx(res.fun, abs=1e-10)
    assert strip_minimizer() == pytest.approx(res.x, abs=1e-5)
    assert C > 1 / math.sqrt(2)


def test_strip_pair_formulas():
    S = Strip()
    t = np.round(np.arange(1, 10) / 10, 12)
    X = np.column_stack([np.zeros(9), t])
    Y = np.column_stack([np.zeros(9), -t])
    v, _ = v_values(S, X, Y)
    assert np.max(np.abs(v - np.arcsin(t))) <= 1e-8
    p = p_values(S, X, Y)
    assert np.max(np.abs(p - t / np.sqrt(t * t + (1 - t) ** 2))) <= 1e-14


def _check_witness(G, w, delta):
    assert w.margin >= -1e-10
    assert w.w is not None
    c, z = np.array(w.w), np.array(w.z)
    # B(w, delta r) inside B(z, r) and off G
    assert np.linalg.norm(c - z) + delta * w.r <= w.r + 1e-10
    assert not G._inside(c[None])[0]
    assert G.distance(c[None])[0] >= delta * w.r - 1e-10


def test_h_delta_ball_passes():
    G = Ball(np.zeros(2), 1.0)
    res = h_delta_check(G, 0.45, 1000, seed=1)
    assert len(res) == 1000
    assert all(w.passed for w in res)
    for w in res[:100]:
        _check_witness(G, w, 0.45)


def test_h_delta_ball_fails_above_half():
    res = h_delta_check(Ball(np.zeros(2), 1.0), 0.55, 300, seed=2)
    assert any(not w.passed for w in res)


def test_h_delta_slit_disk_has_fail_witnesses():
    G = CutDisk.slit()
    res = h_delta_check(G, 0.1, 300, seed=3)
    fails = [w for w in res if not w.passed]
    assert fails
    # failures come from small balls centred on the slit
    assert any(abs(w.z[1]) < 1e-12 and 0 < w.z[0] < 1 and w.r < 0.5 for w in fails)


def test_h_delta_halfspace_small_delta():
    G = HalfSpace(2)
    res = h_delta_check(G, 0.01, 200, seed=4)
    assert all(w.passed for w in res)
    for w in res[:20]:
        _check_witness(G, w, 0.01)


def test_h_delta_deterministic_and_validated():
    G = Ball(np.zeros(2), 1.0)
    assert h_delta_check(G, 0.3, 20, seed=5) == h_delta_check(G, 0.3, 20, seed=5)
    with pytest.raises(ValueError):
        h_delta_check(G, 1.2, 5)


def test_boundary_points_spacing():
    P = unit_square()
    B = boundary_points(P, 0.01)
    assert np.max(P.distance(B)) <= 1e-12
    gaps = np.linalg.norm(np.diff(np.vstack([B, B[:1]]), axis=0), axis=1)
    assert gaps.max() <= 0.01 + 1e-12
    with pytest.raises(DomainError):
        boundary_points(Ball(np.zeros(2), 1.0), 0.1)


def test_nonlinearity_square_is_tiny():
    assert nonlinearity_delta_estimate(unit_square(), 2000, seed=0) < 1e-3


@pytest.mark.slow
def test_nonlinearity_koch_stable_in_depth():
    d5 = nonlinearity_delta_estimate(KochPolygon(5), 1000, seed=7)
    d6 = nonlinearity_delta_estimate(KochPolygon(6), 1000, seed=7)
    assert 0 < d6 < 1 and 0 < d5 < 1
    assert abs(d5 - d6) <= 0.1 * d6


def test_nonlinearity_rejects_non_planar_and_coarse():
    with pytest.raises(DomainError):
        nonlinearity_delta_estimate(Ball(np.zeros(3), 1.0), 10)
    with pytest.raises(DomainError):
        nonlinearity_delta_estimate(KochPolygon(3), 10, r_min_factor=0.01)
