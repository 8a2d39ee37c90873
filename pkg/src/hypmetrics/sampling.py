"""Deterministic stratified sampling of point pairs in a domain."""

from __future__ import annotations

import zlib

import numpy as np

from .geom import Domain, DomainError

# (uniform, near-boundary x, both near-boundary, near-coincident, near-boundary and near-coincident)
STRATA = (0.4, 0.2, 0.1, 0.2, 0.1)


def rng_for(seed: int, *keys: str) -> np.random.Generator:
    """Generator keyed by a seed and any number of labels (case id, domain, ...)."""
    words = [int(seed) & 0xFFFFFFFF] + [zlib.crc32(k.encode()) for k in keys]
    return np.random.default_rng(np.random.SeedSequence(words))


def uniform_points(G: Domain, rng: np.random.Generator, m: int, max_rounds: int = 200) -> np.ndarray:
    """Uniform points in the domain's sampling window, rejected outside G."""
    lo, hi = G.window()
    if m <= 0:
        return np.zeros((0, G.dim))
    out = []
    need = m
    for _ in range(max_rounds):
        if need <= 0:
            break
        P = rng.uniform(lo, hi, size=(max(2 * need, 16), G.dim))
        P = P[G.contains(P)]
        out.append(P[:need])
        need -= len(out[-1])
    if need > 0:
        raise DomainError(f"could not sample interior points of {G.describe()}")
    return np.concatenate(out)[:m]


def near_boundary_points(G: Domain, rng: np.random.Generator, m: int) -> np.ndarray:
    """Points at distance ``scale * 10^U(-4,-2)`` from a boundary point, towards the interior."""
    scale = G.scale
    if m <= 0:
        return np.zeros((0, G.dim))
    out = []
    need = m
    for _ in range(200):
        if need <= 0:
            break
        U = uniform_points(G, rng, need)
        nb = G.nearest(U)
        v = U - nb
        n = np.linalg.norm(v, axis=1)
        t = scale * 10.0 ** rng.uniform(-4.0, -2.0, need)
        t = np.minimum(t, n)
        P = nb + v * (t / np.where(n > 0, n, 1.0))[:, None]
        P = P[G.contains(P)]
        out.append(P)
        need -= len(P)
    if need > 0:
        raise DomainError(f"could not sample near-boundary points of {G.describe()}")
    return np.concatenate(out)[:m]


def near_points(G: Domain, rng: np.random.Generator, X: np.ndarray) -> np.ndarray:
    """For each x a point at distance ``scale * 10^U(-5,-2)``, pulled in to ``0.9 d(x)`` if needed."""
    m, n = X.shape
    r = G.scale * 10.0 ** rng.uniform(-5.0, -2.0, m)
    V = rng.standard_normal((m, n))
    V /= np.linalg.norm(V, axis=1)[:, None]
    Y = X + r[:, None] * V
    bad = ~G.contains(Y)
    if bad.any():
        r2 = np.minimum(r[bad], 0.9 * G.distance(X[bad]))
        Y[bad] = X[bad] + r2[:, None] * V[bad]
    return Y


def sample_pairs(G: Domain, m: int, rng: np.random.Generator, strata=STRATA):
    """Stratified pairs: uniform, boundary-hugging and near-coincident draws, shuffled."""
    counts = np.floor(np.asarray(strata) * m).astype(int)
    counts[0] += m - counts.sum()
    u, nb1, nb2, nc, nbc = counts
    parts = []
    parts.append((uniform_points(G, rng, u), uniform_points(G, rng, u)))
    parts.append((near_boundary_points(G, rng, nb1), uniform_points(G, rng, nb1)))
    parts.append((near_boundary_points(G, rng, nb2), near_boundary_points(G, rng, nb2)))
    X = uniform_points(G, rng, nc)
    parts.append((X, near_points(G, rng, X)))
    X = near_boundary_points(G, rng, nbc)
    parts.append((X, near_points(G, rng, X)))
    X = np.concatenate([p[0] for p in parts])
    Y = np.concatenate([p[1] for p in parts])
    perm = rng.permutation(m)
    return X[perm], Y[perm]
