"""Boundary regularity estimators: the ball-in-complement condition, nonlinearity, and the strip constant."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import ConvexHull, QhullError, cKDTree

from .boundary_sup import golden_max
from .geom import Domain, DomainError, Polygon

__all__ = [
    "ConditionWitness",
    "h_delta_check",
    "nonlinearity_delta_estimate",
    "strip_objective",
    "strip_constant",
    "strip_minimizer",
    "boundary_points",
]


@dataclass(frozen=True)
class ConditionWitness:
    z: tuple
    r: float
    outcome: str
    w: tuple | None
    margin: float

    @property
    def passed(self) -> bool:
        return self.outcome == "pass"


def _directions(n: int, m: int) -> np.ndarray:
    if n == 2:
        a = 2 * np.pi * np.arange(m) / m
        return np.stack([np.cos(a), np.sin(a)], axis=1)
    # deterministic quasi-uniform directions on S^{n-1}
    V = np.random.default_rng(12345).standard_normal((m, n))
    return V / np.linalg.norm(V, axis=1)[:, None]


def _clearance(G: Domain, z, r, W):
    """Radius of the largest ball around each w inside ``B(z, r)`` and off the closure of G.

    Points in the closure of G get the negated distance to the boundary.
    """
    W = np.atleast_2d(W)
    d = G.distance(W)
    inside = G._inside(W) | (d == 0.0)
    room = r - np.linalg.norm(W - z, axis=1)
    return np.where(inside, -d, np.minimum(room, d))


def h_delta_check(G: Domain, delta: float, trials: int, seed: int = 0, r_cap: float = 10.0,
                  radii: int = 9, directions: int = 64) -> list[ConditionWitness]:
    """Search, for random boundary points z and radii r, a ball ``B(w, delta r)`` in ``B(z, r)`` off G.

    Radii are uniform in ``(0, d(G)/2)``, with ``d(G)`` replaced by ``r_cap``
    when infinite.  Candidates lie on rings ``0.1r .. 0.9r`` around z and the
    best one is polished by Nelder-Mead.  A trial passes when the clearance
    reaches ``delta r`` up to ``1e-10``.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    diam = G.diameter()
    rmax = 0.5 * (diam if math.isfinite(diam) else r_cap)
    dirs = _directions(G.dim, directions)
    rings = np.linspace(0.1, 0.9, radii)
    out = []
    for t in range(int(trials)):
        rng = np.random.default_rng([int(seed), t])
        z = G.boundary_sample(rng, 1)[0]
        r = float(rng.uniform(0.0, rmax))
        if r == 0.0:
            r = rmax * 1e-12
        cand = z + (r * rings[:, None, None] * dirs[None]).reshape(-1, G.dim)
        c = _clearance(G, z, r, cand)
        w = cand[int(np.argmax(c))]
        if c.max() < delta * r:
            # local expansion only when the rings found no witness
            res = minimize(lambda p: -_clearance(G, z, r, p)[0], w, method="Nelder-Mead",
                           options={"xatol": 1e-12 * r, "fatol": 1e-14 * r, "maxiter": 400,
                                    "initial_simplex": w + np.vstack([np.zeros(G.dim), 0.05 * r * np.eye(G.dim)])})
            if -res.fun > c.max():
                w = res.x
        best = float(_clearance(G, z, r, w)[0])
        margin = best - delta * r
        ok = margin >= -1e-10
        out.append(ConditionWitness(tuple(map(float, z)), r, "pass" if ok else "fail",
                                    tuple(map(float, w)) if best > 0 else None, margin))
    return out


def boundary_points(G: Domain, spacing: float) -> np.ndarray:
    """Boundary of a polygon sampled with at most ``spacing`` between neighbours."""
    if not isinstance(G, Polygon):
        raise DomainError("dense boundary sampling needs a polygonal domain")
    S = G.edges
    A, D = S[:, :2], S[:, 2:] - S[:, :2]
    L = np.linalg.norm(D, axis=1)
    k = np.maximum(1, np.ceil(L / spacing)).astype(int)
    rep = np.repeat(np.arange(len(S)), k)
    frac = np.concatenate([np.arange(m) / m for m in k])
    return A[rep] + frac[:, None] * D[rep]


def _min_width(P: np.ndarray) -> float:
    """Width of the thinnest strip containing the points (rotating over hull edges)."""
    try:
        hull = ConvexHull(P)
    except QhullError:
        return 0.0  # collinear points
    H = P[hull.vertices]
    E = np.roll(H, -1, axis=0) - H
    L = np.linalg.norm(E, axis=1)
    E = E[L > 0] / L[L > 0, None]
    Hs = H[L > 0]
    nrm = np.stack([-E[:, 1], E[:, 0]], axis=1)
    dist = np.abs(np.einsum("ejk,ek->ej", H[None, :, :] - Hs[:, None, :], nrm))
    return float(np.min(dist.max(axis=1)))


def nonlinearity_delta_estimate(G: Domain, trials: int, seed: int = 0, r_min_factor: float = 4.0,
                                return_trials: bool = False):
    """Empirical nonlinearity constant of a polygonal boundary (an ESTIMATE, not a proof).

    For random boundary points z and radii r (log-uniform from a few edge
    lengths up to the diameter) the boundary points in ``B(z, r)`` are fitted
    by the best line: half the width of their thinnest enclosing strip,
    divided by r, is the largest admissible delta for that (z, r).  The
    estimate is the minimum over trials.
    """
    if G.dim != 2:
        raise DomainError("nonlinearity estimate is planar")
    diam = G.diameter()
    # feature scale: the longest edge, but fine enough for coarse polygons too
    h = min(float(np.max(np.linalg.norm(G.edges[:, 2:] - G.edges[:, :2], axis=1))), diam / 256.0)
    pts = boundary_points(G, h / 4.0)
    tree = cKDTree(pts)
    r_min = r_min_factor * h
    rng = np.random.default_rng(int(seed))
    idx = rng.integers(0, len(pts), int(trials))
    logr = rng.uniform(math.log(r_min), math.log(diam), int(trials))
    vals = np.empty(int(trials))
    for t in range(int(trials)):
        z, r = pts[idx[t]], math.exp(logr[t])
        near = tree.query_ball_point(z, r)
        if len(near) < 8:
            raise DomainError("insufficient boundary resolution: fewer than 8 samples in B(z, r)")
        vals[t] = 0.5 * _min_width(pts[near]) / r
    est = float(vals.min()) if len(vals) else math.nan
    return (est, vals) if return_trials else est


def strip_objective(t):
    """``v/p`` for the symmetric strip pair at height t: ``arcsin(t) sqrt(t^2 + (1-t)^2) / t``."""
    t = np.asarray(t, dtype=float)
    return np.arcsin(t) * np.sqrt(t * t + (1.0 - t) ** 2) / t


def strip_constant(tol: float = 1e-10) -> float:
    """Infimum over t in (0, 1) of :func:`strip_objective`, by golden-section search."""
    iters = int(math.ceil(math.log(tol) / math.log((math.sqrt(5.0) - 1.0) / 2.0)))
    _, val, _ = golden_max(lambda t: -strip_objective(t), np.array([1e-12]), np.array([1.0 - 1e-12]), iters)
    return float(-val[0])


def strip_minimizer(tol: float = 1e-10) -> float:
    iters = int(math.ceil(math.log(tol) / math.log((math.sqrt(5.0) - 1.0) / 2.0)))
    t, _, _ = golden_max(lambda t: -strip_objective(t), np.array([1e-12]), np.array([1.0 - 1e-12]), iters)
    return float(t[0])
