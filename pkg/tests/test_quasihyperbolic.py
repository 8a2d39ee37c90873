from __future__ import annotations

import math

import numpy as np
import pytest

from hypmetrics.closed_forms import j_values, rho_values
from hypmetrics.geom import Ball, DomainError, HalfSpace, PuncturedSpace, Strip, unit_square
from hypmetrics.quasihyperbolic import (GeodesicGraphConfig, check_kz_lemma, k_exact_halfspace, k_numeric,
                                        k_numeric_levels, k_relax_batch, k_values)
from hypmetrics.sampling import rng_for, sample_pairs, uniform_points


def punctured_k(x, y):
    # known closed form in the punctured plane: sqrt(theta^2 + log^2(|x|/|y|)), theta <= pi
    th = math.acos(np.clip(x @ y / (np.linalg.norm(x) * np.linalg.norm(y)), -1, 1))
    return math.hypot(th, math.log(np.linalg.norm(x) / np.linalg.norm(y)))


def test_k_exact_halfspace_examples():
    assert k_exact_halfspace([0, 1], [0, math.e]).value == pytest.approx(1.0, abs=1e-14)
    assert k_exact_halfspace([0, 1], [1, 1]).value == pytest.approx(0.9624236501, abs=1e-10)
    r = k_exact_halfspace([2, 1], [2, 1])
    assert r.value == 0.0 and r.error_bound == 0.0


def test_k_numeric_examples():
    B = Ball(np.zeros(2), 1.0)
    r = k_numeric(B, [0, 0], [0.5, 0])
    assert r.value == pytest.approx(math.log(2), rel=1e-2)
    assert r.error_bound >= 0
    h = k_numeric(HalfSpace(2), [0, 1], [0, 3])
    assert h.value == pytest.approx(math.log(3), rel=1e-2)
    assert k_numeric(B, [0.1, 0.2], [0.1, 0.2]).value == 0.0


def test_k_numeric_punctured_plane_closed_form():
    P = PuncturedSpace(np.zeros(2))
    for x, y in [((1, 0), (0, 2)), ((1, 0), (-1, 0.2)), ((0.5, 0.5), (2, -1))]:
        x, y = np.array(x, float), np.array(y, float)
        assert k_numeric(P, x, y).value == pytest.approx(punctured_k(x, y), rel=1e-2)


def test_k_numeric_errors():
    B = Ball(np.zeros(2), 1.0)
    with pytest.raises(DomainError, match="increase resolution"):
        k_numeric(B, [0, 0], [0.999, 0], GeodesicGraphConfig(base_resolution=32))
    with pytest.raises(DomainError):
        k_numeric(B, [0, 0], [1.5, 0])
    with pytest.raises(ValueError):
        GeodesicGraphConfig(base_resolution=16)
    with pytest.raises(ValueError):
        GeodesicGraphConfig(refinement_levels=-1)
    with pytest.raises(ValueError):
        GeodesicGraphConfig(neighbor_stencil=4)


def test_graph_refinement_converges():
    B = Ball(np.zeros(2), 1.0)
    cfg = GeodesicGraphConfig(refinement_levels=3, relax_nodes=())
    for x, y in [((0, 0), (0.5, 0)), ((-0.4, 0.3), (0.6, -0.2)), ((0.1, 0.7), (0.7, 0.1))]:
        lv = k_numeric_levels(B, x, y, cfg)
        steps = np.abs(np.diff(lv))
        assert np.all(steps[1:] <= steps[:-1] + 1e-3)
        # graph paths are admissible curves, so they sit above the true k
        assert lv[-1] >= rho_values(B, np.array([x]), np.array([y]))[0] / 2 - 1e-12


def test_numeric_k_matches_exact_on_halfspace():
    # the relaxation solver applied to H^2 against the exact value, within its own error bound
    G = HalfSpace(2)
    X, Y = sample_pairs(G, 500, rng_for(2, "k-h2"))
    k, err = k_relax_batch(G, X, Y)
    exact = rho_values(G, X, Y)
    assert np.all(k >= exact - 1e-9)
    assert np.all(k - exact <= err + 1e-9)
    assert np.max(np.abs(k - exact) / np.maximum(exact, 1e-12)) < 1e-2


def test_batch_ball_against_closed_form():
    B = Ball(np.zeros(2), 1.0)
    X, Y = sample_pairs(B, 1000, rng_for(3, "k-ball"))
    k, err = k_values(B, X, Y)
    r = rho_values(B, X, Y)
    j = j_values(B, X, Y)
    assert np.all(r <= 2 * k + 2 * err + 1e-9)
    assert np.all(2 * (k - err) <= 2 * r + 1e-9)
    assert np.all(j <= k + err + 1e-9)
    assert np.max(k / np.maximum(j, 1e-300)) < 2.01


def test_batch_on_radial_pair_equals_log2():
    k, err = k_values(Ball(np.zeros(2), 1.0), np.array([[0.0, 0.0]]), np.array([[0.5, 0.0]]))
    assert abs(k[0] - math.log(2)) <= max(err[0], 1e-9)


@pytest.mark.parametrize("G", [Strip(), unit_square(), Ball(np.zeros(3), 1.0)], ids=lambda G: G.describe())
def test_jk_on_other_domains(G):
    X, Y = sample_pairs(G, 300, rng_for(4, G.describe(), "jk"))
    k, err = k_values(G, X, Y)
    assert np.all(j_values(G, X, Y) <= k + err + 1e-9)


def test_local_bound_k_le_j_over_one_minus_lambda():
    B = Ball(np.zeros(2), 1.0)
    rng = rng_for(5, "local")
    X = uniform_points(B, rng, 300)
    d = B.distance(X)
    for lam in (0.1, 0.5, 0.9):
        U = rng.normal(size=(300, 2))
        U *= (rng.uniform(0, 1, 300) ** 0.5 / np.linalg.norm(U, axis=1))[:, None]
        Y = X + lam * d[:, None] * U * (1 - 1e-9)
        k, err = k_values(B, X, Y)
        j = j_values(B, X, Y)
        assert np.all(j <= k + err + 1e-9)
        assert np.all(k - err <= j / (1 - lam) + 1e-9)


def _kz_pairs(G, z, lam, m, seed):
    rng = rng_for(seed, "kz")
    dz = float(G.distance(np.asarray(z, float)[None])[0])
    P = []
    for _ in range(m):
        u = rng.normal(size=(2, 2))
        u *= (lam * dz * rng.uniform(0, 0.999, 2) / np.linalg.norm(u, axis=1))[:, None]
        P.append((np.asarray(z) + u[0], np.asarray(z) + u[1]))
    return P


def test_kz_lemma_examples():
    r = check_kz_lemma(HalfSpace(2), [0, 2], 0.5, _kz_pairs(HalfSpace(2), [0, 2], 0.5, 100, 1))
    assert r.passed and r.samples == 100
    B = Ball(np.zeros(2), 1.0)
    r = check_kz_lemma(B, [0, 0], 0.5, _kz_pairs(B, [0, 0], 0.5, 100, 2))
    assert r.passed
    r = check_kz_lemma(B, [0, 0], 0.01, [((0.001, 0), (0.001, 0))])
    assert r.passed


def test_kz_lemma_rejects_outside_pairs():
    with pytest.raises(DomainError):
        check_kz_lemma(HalfSpace(2), [0, 2], 0.5, [((0, 2), (0, 3.5))])
    with pytest.raises(ValueError):
        check_kz_lemma(HalfSpace(2), [0, 2], 1.0, [])


def test_s_bounded_by_c_th_k():
    from hypmetrics.boundary_sup import s_values
    c = 1.0 / math.tanh(3.0 * math.log(1.5))
    for G in (Ball(np.zeros(2), 1.0), HalfSpace(2)):
        X, Y = sample_pairs(G, 500, rng_for(6, G.describe(), "cth"))
        s, es = s_values(G, X, Y)
        k, ek = k_values(G, X, Y)
        # s is biased low and k high; move each by its error bound against the inequality
        assert np.all(s + es <= c * np.tanh(3.0 * np.maximum(k - ek, 0)) + 1e-9)
