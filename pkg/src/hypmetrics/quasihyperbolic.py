"""Quasihyperbolic distance k_G.

Exact on the half-space (where it coincides with the hyperbolic metric).
Elsewhere k is the weight of a shortest path on a grid graph with edge weights
``|u-v| (1/d(u) + 1/d(v)) / 2``, refined on tubes around the current path and
finally relaxed as a polyline.  Every numeric value is the length of an actual
path, so it is an upper estimate of k; ``error_bound`` is the change over the
last refinement step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra
from scipy.spatial import cKDTree

from .closed_forms import MetricKind, MetricValue, rho_halfspace
from .geom import Ball, Domain, DomainError, HalfSpace, PuncturedSpace, _rows, _segment_nearest, as_point
from .report import VerificationReport, assess

__all__ = [
    "GeodesicGraphConfig",
    "k_exact_halfspace",
    "k_numeric",
    "k_numeric_levels",
    "k_values",
    "k_relax_batch",
    "check_kz_lemma",
]

_STENCIL_8 = [(1, 0), (0, 1), (1, 1), (1, -1)]
_STENCIL_16 = _STENCIL_8 + [(1, 2), (2, 1), (1, -2), (2, -1)]
_GL_T, _GL_W = np.polynomial.legendre.leggauss(8)
_GL_T = 0.5 * (_GL_T + 1.0)
_GL_W = 0.5 * _GL_W


@dataclass(frozen=True)
class GeodesicGraphConfig:
    base_resolution: int = 128
    neighbor_stencil: int = 16
    refinement_levels: int = 2
    box_factor: float = 4.0
    relax_nodes: tuple = (32, 64)

    def __post_init__(self):
        if self.base_resolution < 32:
            raise ValueError("base_resolution must be >= 32")
        if self.refinement_levels < 0:
            raise ValueError("refinement_levels must be >= 0")
        if self.neighbor_stencil not in (8, 16):
            raise ValueError("neighbor_stencil must be 8 or 16")


def k_exact_halfspace(x, y) -> MetricValue:
    """k on the upper half-space; identical to the hyperbolic distance there."""
    r = rho_halfspace(x, y)
    return MetricValue(r.value, 0.0, MetricKind.K)


# ---------------------------------------------------------------------------
# planar reduction
# ---------------------------------------------------------------------------


def _to_plane(G: Domain, x, y):
    """Reduce a pair to a planar domain with the same k (by symmetry)."""
    if G.dim == 2:
        return G, x, y
    X2, Y2, _, _, _ = G.planar(x[None], y[None])
    if type(G) is Ball:
        return Ball(np.zeros(2), G.radius), X2[0], Y2[0]
    if isinstance(G, HalfSpace):
        return HalfSpace(2), X2[0], Y2[0]
    if isinstance(G, PuncturedSpace):
        return PuncturedSpace(np.zeros(2)), X2[0], Y2[0]
    raise DomainError(f"numeric k is planar only; no reduction for {G.describe()}")


# ---------------------------------------------------------------------------
# grid graph
# ---------------------------------------------------------------------------


def _weights(P, Q, dP, dQ):
    L = np.linalg.norm(P - Q, axis=1)
    ok = dP + dQ > L  # segment lies in the union of the two inner balls
    return L * 0.5 * (1.0 / dP + 1.0 / dQ), ok


def _shortest_path(G, nodes, d, shape, idx, x, y, h, stencil):
    nx, ny = shape
    rows, cols, vals = [], [], []
    for di, dj in stencil:
        a = idx[max(0, -di):nx - max(0, di), max(0, -dj):ny - max(0, dj)]
        b = idx[max(0, di):nx + min(0, di) or None, max(0, dj):ny + min(0, dj) or None]
        m = (a >= 0) & (b >= 0)
        a, b = a[m], b[m]
        w, ok = _weights(nodes[a], nodes[b], d[a], d[b])
        rows.append(a[ok]); cols.append(b[ok]); vals.append(w[ok])
    N = len(nodes)
    tree = cKDTree(nodes)
    dxy = G.distance(np.stack([x, y]))
    for k, (p, dp) in enumerate(zip((x, y), dxy)):
        near = np.asarray(tree.query_ball_point(p, 3.0 * h), dtype=int)
        if near.size == 0:
            raise DomainError("increase resolution: no grid node near an endpoint")
        w, ok = _weights(np.broadcast_to(p, (near.size, 2)), nodes[near], np.full(near.size, dp), d[near])
        rows.append(np.full(ok.sum(), N + k)); cols.append(near[ok]); vals.append(w[ok])
    r = np.concatenate(rows); c = np.concatenate(cols); v = np.concatenate(vals)
    A = coo_matrix((v, (r, c)), shape=(N + 2, N + 2)).tocsr()
    dist, pred = dijkstra(A, directed=False, indices=N, return_predecessors=True)
    if not np.isfinite(dist[N + 1]):
        raise DomainError("increase resolution: endpoints are not connected in the grid graph")
    allp = np.vstack([nodes, x, y])
    path = [N + 1]
    while path[-1] != N:
        path.append(pred[path[-1]])
    return float(dist[N + 1]), allp[path[::-1]]


def _grid(lo, hi, h):
    xs = np.arange(lo[0], hi[0] + 0.5 * h, h)
    ys = np.arange(lo[1], hi[1] + 0.5 * h, h)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    return np.stack([X.ravel(), Y.ravel()], axis=1), (len(xs), len(ys))


def _graph_level(G, x, y, lo, hi, h, stencil, tube=None):
    P, shape = _grid(lo, hi, h)
    keep = G._inside(P)
    if tube is not None:
        path, radius = tube
        segs = np.hstack([path[:-1], path[1:]])
        cand = np.flatnonzero(keep)
        keep[cand] = _segment_nearest(P[cand], segs)[0] < radius
    cand = np.flatnonzero(keep)
    d = G.distance(P[cand])
    good = d > math.sqrt(2.0) * h
    cand = cand[good]
    idx = np.full(P.shape[0], -1)
    idx[cand] = np.arange(cand.size)
    return _shortest_path(G, P[cand], d[good], shape, idx.reshape(shape), x, y, h, stencil)


def _working_box(G, x, y, factor):
    dx, dy = G.distance(np.stack([x, y]))
    half = 0.5 * factor * max(np.linalg.norm(x - y), dx, dy)
    mid = 0.5 * (x + y)
    lo, hi = mid - half, mid + half
    if G.bounded:
        wlo, whi = G.window()
        lo, hi = np.maximum(lo, wlo), np.minimum(hi, whi)
    return lo, hi


# ---------------------------------------------------------------------------
# polyline relaxation
# ---------------------------------------------------------------------------


def _path_objective(G, W, eps):
    """k-length of polylines ``W`` (C, N+1, 2) and its gradient; ``eps`` (C,) barrier scale."""
    C, M, _ = W.shape
    a, b = W[:, :-1], W[:, 1:]
    D = b - a
    L = np.linalg.norm(D, axis=2)
    Q = a[:, :, None, :] + _GL_T[None, None, :, None] * D[:, :, None, :]
    flat = Q.reshape(-1, 2)
    d, g = G.signed_distance_and_gradient(flat)
    d = d.reshape(C, M - 1, -1)
    g = g.reshape(C, M - 1, -1, 2)
    e = eps[:, None, None]
    safe = d >= e
    dd = np.where(safe, d, 1.0)
    f = np.where(safe, 1.0 / dd, 2.0 / e - d / (e * e))
    fp = np.where(safe, -1.0 / (dd * dd), -1.0 / (e * e))
    S = np.sum(_GL_W * f, axis=2)
    total = np.sum(L * S, axis=1)
    U = D / np.where(L > 0, L, 1.0)[..., None]
    gq = (L[..., None, None] * (_GL_W * fp)[..., None]) * g
    grad_a = -U * S[..., None] + np.sum(gq * (1.0 - _GL_T)[None, None, :, None], axis=2)
    grad_b = U * S[..., None] + np.sum(gq * _GL_T[None, None, :, None], axis=2)
    grad = np.zeros_like(W)
    grad[:, :-1] += grad_a
    grad[:, 1:] += grad_b
    return total, grad


def _relax(G, W, eps, maxiter=3000):
    C, M, _ = W.shape
    if M <= 2:
        return _path_objective(G, W, eps)[0], W
    ends = W[:, [0, -1]]

    def fun(z):
        V = np.concatenate([ends[:, :1], z.reshape(C, M - 2, 2), ends[:, 1:]], axis=1)
        t, g = _path_objective(G, V, eps)
        return float(t.sum()), g[:, 1:-1].ravel()

    res = minimize(fun, W[:, 1:-1].ravel(), jac=True, method="L-BFGS-B",
                   options={"maxiter": maxiter, "maxcor": 20, "ftol": 1e-15, "gtol": 1e-12})
    V = np.concatenate([ends[:, :1], res.x.reshape(C, M - 2, 2), ends[:, 1:]], axis=1)
    val = _path_objective(G, V, eps)[0]
    start = _path_objective(G, W, eps)[0]
    # never report worse than the starting path
    better = val <= start
    return np.where(better, val, start), np.where(better[:, None, None], V, W)


def _resample(G, W, n, samples=64):
    """Resample polylines to ``n`` segments spaced uniformly in k-length."""
    C, M, _ = W.shape
    t = np.linspace(0.0, 1.0, samples + 1)[1:-1]
    pts = [W[:, :1]]
    for i in range(M - 1):
        seg = W[:, i:i + 1] + t[None, :, None] * (W[:, i + 1:i + 2] - W[:, i:i + 1])
        pts += [seg, W[:, i + 1:i + 2]]
    P = np.concatenate(pts, axis=1)
    d = G.distance(P.reshape(-1, 2)).reshape(C, -1)
    f = 1.0 / np.maximum(d, 1e-300)
    L = np.linalg.norm(np.diff(P, axis=1), axis=2)
    cum = np.concatenate([np.zeros((C, 1)), np.cumsum(0.5 * L * (f[:, 1:] + f[:, :-1]), axis=1)], axis=1)
    out = np.empty((C, n + 1, 2))
    for c in range(C):
        target = np.linspace(0.0, cum[c, -1], n + 1)
        out[c, :, 0] = np.interp(target, cum[c], P[c, :, 0])
        out[c, :, 1] = np.interp(target, cum[c], P[c, :, 1])
    out[:, 0], out[:, -1] = W[:, 0], W[:, -1]
    return out


def _subdivide(W):
    mid = 0.5 * (W[:, 1:] + W[:, :-1])
    out = np.empty((W.shape[0], 2 * W.shape[1] - 1, 2))
    out[:, ::2] = W
    out[:, 1::2] = mid
    return out


def _relax_levels(G, W, nodes, eps):
    vals = []
    W = _resample(G, W, nodes[0])
    for i, n in enumerate(nodes):
        if i:
            while W.shape[1] - 1 < n:
                W = _subdivide(W)
        v, W = _relax(G, W, eps)
        vals.append(v)
    return vals, W


@np.errstate(over="ignore", invalid="ignore")
def _thomas(lo, di, up, rhs):
    """Batched tridiagonal solve; rows are independent systems. Returns (x, ok).

    Rows with a non-positive pivot are flagged in ``ok`` and may hold inf/nan.
    """
    C, n = di.shape
    c = np.zeros((C, n))
    d = np.zeros((C, n))
    ok = np.ones(C, dtype=bool)
    piv = di[:, 0]
    ok &= piv > 0
    piv = np.where(ok, piv, 1.0)
    c[:, 0] = up[:, 0] / piv
    d[:, 0] = rhs[:, 0] / piv
    for i in range(1, n):
        piv = di[:, i] - lo[:, i] * c[:, i - 1]
        ok &= piv > 0
        piv = np.where(piv > 0, piv, 1.0)
        c[:, i] = up[:, i] / piv if i < n - 1 else 0.0
        d[:, i] = (rhs[:, i] - lo[:, i] * d[:, i - 1]) / piv
    x = np.zeros((C, n))
    x[:, -1] = d[:, -1]
    for i in range(n - 2, -1, -1):
        x[:, i] = d[:, i] - c[:, i] * x[:, i + 1]
    return x, ok


class _NormalPaths:
    """Polylines whose interior nodes move only along fixed normals of a base curve.

    Each node couples to its neighbours only, so the Hessian of the k-length
    in the offsets is tridiagonal.
    """

    def __init__(self, G, base, normal, eps):
        self.G, self.base, self.normal, self.eps = G, base, normal, eps

    def subset(self, idx):
        return _NormalPaths(self.G, self.base[idx], self.normal[idx], self.eps[idx])

    def nodes(self, u):
        full = np.pad(u, ((0, 0), (1, 1)))
        return self.base + full[..., None] * self.normal

    def value_grad(self, u):
        # rejected trial steps may overflow; their non-finite values are discarded
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            val, g = _path_objective(self.G, self.nodes(u), self.eps)
        return val, np.einsum("cik,cik->ci", g[:, 1:-1], self.normal[:, 1:-1])


def _circle_arcs(X, Y, centre, m):
    """Arcs from X to Y on circles about ``centre`` (through both points), the short way round."""
    a = np.arctan2(X[:, 1] - centre[:, 1], X[:, 0] - centre[:, 0])
    b = np.arctan2(Y[:, 1] - centre[:, 1], Y[:, 0] - centre[:, 0])
    b = a + np.mod(b - a + np.pi, 2 * np.pi) - np.pi
    R = np.linalg.norm(X - centre, axis=1)
    t = a[:, None] + np.linspace(0.0, 1.0, m + 1)[None] * (b - a)[:, None]
    W = centre[:, None] + R[:, None, None] * np.stack([np.cos(t), np.sin(t)], axis=2)
    W[:, 0], W[:, -1] = X, Y
    return W


def _base_curves(G, X, Y, m=32):
    """Starting curves for the relaxation: hyperbolic geodesics on discs and half-planes, else chords.

    The hyperbolic geodesic leaves the boundary at a right angle, like the
    quasihyperbolic one, so the remaining normal offsets stay small.
    """
    t = np.linspace(0.0, 1.0, m + 1)[None, :, None]
    W = X[:, None] + t * (Y - X)[:, None]
    if isinstance(G, Ball):
        c0, R0 = G.center, G.radius
        x, y = (X - c0) / R0, (Y - c0) / R0
        # centre c of the orthogonal circle: x.c = (1+|x|^2)/2, y.c = (1+|y|^2)/2
        det = x[:, 0] * y[:, 1] - x[:, 1] * y[:, 0]
        rx, ry = 0.5 * (1 + np.sum(x * x, 1)), 0.5 * (1 + np.sum(y * y, 1))
        with np.errstate(divide="ignore", invalid="ignore"):
            c = np.stack([(rx * y[:, 1] - ry * x[:, 1]) / det, (ry * x[:, 0] - rx * y[:, 0]) / det], axis=1)
        R = np.linalg.norm(x - c, axis=1)
        arc = np.isfinite(R) & (R < 1e6 * np.maximum(np.linalg.norm(x - y, axis=1), 1e-300))
        if arc.any():
            W[arc] = c0 + R0 * _circle_arcs(x[arc], y[arc], c[arc], m)
    elif isinstance(G, HalfSpace):
        # semicircle centred on the boundary line through both points
        s0, s1, h0, h1 = X[:, 0], Y[:, 0], X[:, 1], Y[:, 1]
        ds = s1 - s0
        with np.errstate(divide="ignore", invalid="ignore"):
            sc = 0.5 * (s0 + s1) + 0.5 * (h1 * h1 - h0 * h0) / ds
        R = np.hypot(s0 - sc, h0)
        arc = np.isfinite(sc) & (R < 1e6 * np.maximum(np.abs(ds), 1e-300))
        if arc.any():
            centre = np.stack([sc[arc], np.zeros(arc.sum())], axis=1)
            W[arc] = _circle_arcs(X[arc], Y[arc], centre, m)
    return W


def _normals(W):
    T = np.zeros_like(W)
    T[:, 1:-1] = W[:, 2:] - W[:, :-2]
    T[:, 0] = W[:, 1] - W[:, 0]
    T[:, -1] = W[:, -1] - W[:, -2]
    n = np.linalg.norm(T, axis=2, keepdims=True)
    T = T / np.where(n > 0, n, 1.0)
    return np.stack([-T[..., 1], T[..., 0]], axis=2)


def _tridiag_hessian(paths, u, g):
    """Tridiagonal Hessian of the k-length in the offsets, by three colored gradient differences."""
    C, n = u.shape
    step = 1e-7 * np.maximum(np.abs(paths.eps), 1e-12)[:, None] * np.ones((1, n))
    lo = np.zeros((C, n)); di = np.zeros((C, n)); up = np.zeros((C, n))
    idx = np.arange(n)
    for col in range(3):
        own = (idx % 3) == col
        pert = np.where(own, step, 0.0)
        dg = paths.value_grad(u + pert)[1] - g
        di[:, own] = dg[:, own] / step[:, own]
        # node j couples to j-1 (lo) and j+1 (up)
        left = np.zeros(n, dtype=bool); left[1:] = own[:-1]
        lo[:, left] = dg[:, left] / step[:, np.flatnonzero(left) - 1]
        right = np.zeros(n, dtype=bool); right[:-1] = own[1:]
        up[:, right] = dg[:, right] / step[:, np.flatnonzero(right) + 1]
    off = 0.5 * (up[:, :-1] + lo[:, 1:])
    up[:, :-1] = off
    lo[:, 1:] = off
    return lo, di, up


def _newton_normal(paths: _NormalPaths, u, iters=60, tol=1e-15):
    """Damped Newton on the offsets; only pairs still improving are evaluated."""
    C, n = u.shape
    val, g = paths.value_grad(u)
    mu = np.full(C, 1e-6)
    act = np.arange(C)
    for _ in range(iters):
        if act.size == 0:
            break
        P = paths.subset(act)
        ua, ga, va, ma = u[act], g[act], val[act], mu[act]
        lo, di, up = _tridiag_hessian(P, ua, ga)
        scale = np.mean(np.abs(di), axis=1)
        improved = np.zeros(act.size, dtype=bool)
        done = np.zeros(act.size, dtype=bool)
        for _ in range(8):
            sub = np.flatnonzero(~improved)
            if sub.size == 0:
                break
            step, ok = _thomas(lo[sub], di[sub] + (ma[sub] * scale[sub])[:, None], up[sub], -ga[sub])
            trial = ua[sub] + step
            tv, tg = P.subset(sub).value_grad(trial)
            acc = ok & np.isfinite(tv) & (tv <= va[sub])
            hit = sub[acc]
            done[hit] = va[hit] - tv[acc] <= tol * np.maximum(tv[acc], 1.0)
            ua[hit], ga[hit], va[hit] = trial[acc], tg[acc], tv[acc]
            improved[hit] = True
            ma[sub] = np.where(acc, np.maximum(ma[sub] / 4.0, 1e-9), ma[sub] * 8.0)
        u[act], g[act], val[act], mu[act] = ua, ga, va, ma
        # pairs whose step never improved are converged within rounding
        act = act[improved & ~done]
    return val, u


def k_relax_batch(G: Domain, X, Y, nodes=(16, 32), chunk: int = 2048):
    """k on a convex planar domain for many pairs by Newton relaxation of a base curve.

    The base curve is the hyperbolic geodesic on discs and half-planes and
    the chord otherwise; it lies in G in all these cases.  Nodes start at
    uniform k-length spacing along it and move along its normals.  Returns
    ``(values, error_bounds)``: the change between the two node counts plus
    the change when each segment's quadrature is refined.
    """
    X, Y = _rows(X, 2), _rows(Y, 2)
    if G.dim != 2:
        raise DomainError("batched relaxation is planar")
    if not G.convex:
        raise DomainError("batched relaxation needs a convex domain")
    out = np.zeros(len(X))
    err = np.zeros(len(X))
    dx, dy = G.distance(X), G.distance(Y)
    for i in range(0, len(X), chunk):
        sl = slice(i, i + chunk)
        x, y = X[sl], Y[sl]
        eps = 0.1 * np.minimum(dx[sl], dy[sl])
        base = _resample(G, _base_curves(G, x, y), nodes[-1], samples=16)
        normal = _normals(base)
        vals = []
        u_prev = None
        for n in nodes:
            stride = nodes[-1] // n
            paths = _NormalPaths(G, base[:, ::stride], normal[:, ::stride], eps)
            if u_prev is None:
                u0 = np.zeros((len(x), n - 1))
            else:
                # prolong the coarse offsets by linear interpolation
                full = np.pad(u_prev, ((0, 0), (1, 1)))
                u0 = np.empty((len(x), n + 1))
                u0[:, ::2] = full
                u0[:, 1::2] = 0.5 * (full[:, 1:] + full[:, :-1])
                u0 = u0[:, 1:-1]
            v, u_prev = _newton_normal(paths, u0)
            vals.append(v)
        fine = _path_objective(G, _subdivide(paths.nodes(u_prev)), eps)[0]
        out[sl] = vals[-1]
        err[sl] = (np.abs(vals[-1] - vals[-2]) if len(vals) > 1 else 0.0) + np.abs(fine - vals[-1])
    same = np.all(X == Y, axis=1)
    return np.where(same, 0.0, out), np.where(same, 0.0, err)


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------


def k_numeric_levels(G: Domain, x, y, cfg: GeodesicGraphConfig | None = None) -> list[float]:
    """Estimates of k after each stage: graph levels, then relaxation levels."""
    cfg = cfg or GeodesicGraphConfig()
    x = as_point(x, G.dim)
    y = as_point(y, G.dim)
    if not G.contains(np.stack([x, y])).all():
        raise DomainError(f"points must lie in {G.describe()}")
    if np.array_equal(x, y):
        return [0.0]
    G2, x, y = _to_plane(G, x, y)
    lo, hi = _working_box(G2, x, y, cfg.box_factor)
    h = float(np.max(hi - lo)) / cfg.base_resolution
    dmin = float(np.min(G2.distance(np.stack([x, y]))))
    if dmin < 2.0 * math.sqrt(2.0) * h:
        raise DomainError(
            f"increase resolution: endpoint distance {dmin:.3g} is below two cell diagonals ({2 * math.sqrt(2) * h:.3g})")
    stencil = _STENCIL_16 if cfg.neighbor_stencil == 16 else _STENCIL_8
    val, path = _graph_level(G2, x, y, lo, hi, h, stencil)
    levels = [val]
    for _ in range(cfg.refinement_levels):
        radius = 3.0 * h
        h *= 0.5
        plo = np.maximum(path.min(axis=0) - radius, lo)
        phi = np.minimum(path.max(axis=0) + radius, hi)
        val, path = _graph_level(G2, x, y, plo, phi, h, stencil, tube=(path, radius))
        levels.append(val)
    if cfg.relax_nodes:
        vals, _ = _relax_levels(G2, path[None], cfg.relax_nodes, np.array([0.1 * dmin]))
        levels += [float(v[0]) for v in vals]
    return levels


def k_numeric(G: Domain, x, y, cfg: GeodesicGraphConfig | None = None) -> MetricValue:
    """Quasihyperbolic distance by grid shortest path plus relaxation (upper estimate)."""
    levels = k_numeric_levels(G, x, y, cfg)
    err = abs(levels[-1] - levels[-2]) if len(levels) > 1 else 0.0
    return MetricValue(float(levels[-1]), float(err), MetricKind.K)


def k_values(G: Domain, X, Y, cfg: GeodesicGraphConfig | None = None):
    """Batched k: exact on the half-space, relaxation on convex planar domains, graph otherwise."""
    X, Y = _rows(X, G.dim), _rows(Y, G.dim)
    if isinstance(G, HalfSpace):
        diff = X - Y
        u = np.sum(diff * diff, axis=1) / (2.0 * X[:, -1] * Y[:, -1])
        return np.log1p(u + np.sqrt(u * (u + 2.0))), np.zeros(len(X))
    if G.convex and G.dim == 2:
        return k_relax_batch(G, X, Y)
    if type(G) is Ball:
        X2, Y2, _, _, _ = G.planar(X, Y)
        return k_relax_batch(Ball(np.zeros(2), G.radius), X2, Y2)
    vals = [k_numeric(G, a, b, cfg) for a, b in zip(X, Y)]
    return np.array([v.value for v in vals]), np.array([v.error_bound for v in vals])


def check_kz_lemma(G: Domain, z, lam: float, pairs, cfg: GeodesicGraphConfig | None = None) -> VerificationReport:
    """Compare k in the ball ``B(z, d(z))`` with ``(1+lam)/(1-lam) k_G`` for pairs in ``B(z, lam d(z))``."""
    if not 0.0 < lam < 1.0:
        raise ValueError("lam must lie in (0, 1)")
    z = as_point(z, G.dim)
    dz = float(G.distance(z[None])[0])
    pairs = list(pairs)
    if not pairs:
        return VerificationReport("kz-lemma", G.describe(), 0, None, 0.0)
    X = np.array([as_point(p[0], G.dim) for p in pairs])
    Y = np.array([as_point(p[1], G.dim) for p in pairs])
    for A in (X, Y):
        if np.any(np.linalg.norm(A - z, axis=1) >= lam * dz):
            raise DomainError("pairs must lie in B(z, lam d(z))")
    kb, eb = k_values(Ball(z, dz), X, Y, cfg)
    kg, eg = k_values(G, X, Y, cfg)
    c = (1.0 + lam) / (1.0 - lam)
    # kb is an upper estimate; its error bound is the slack on the left
    return assess("kz-lemma", G.describe(), X, Y, kb, c * kg, eb + c * eg + 1e-9)
