"""Suprema over the boundary: the triangular ratio metric s and the visual angle metric v.

Boundaries are reduced to pieces in a 2-plane through the pair (see
:meth:`Domain.planar`).  Straight pieces are handled through their stationary
points, which are available in closed form: the reflection point for s and the
tangency points of circles through x and y for v.  Circular pieces are scanned
and the best local maxima are refined by golden-section search.  Values are
inner approximations; ``error_bound`` covers the final bracket and rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .closed_forms import MetricKind, MetricValue, s_halfspace_values
from .geom import Domain, DomainError, HalfSpace, _rows, as_point, boundary_param, truncation_radius

__all__ = [
    "SupSolverConfig",
    "golden_max",
    "s_metric",
    "v_metric",
    "s_values",
    "v_values",
    "sup_values",
    "s_oracle",
    "v_oracle",
]

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
EPS = np.finfo(float).eps
_ANCHOR_STEPS = np.array([-4.0, -2.0, -1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0, 2.0, 4.0])


@dataclass(frozen=True)
class SupSolverConfig:
    coarse_samples_per_segment: int = 256
    refinement: int = 80
    multistart_count: int = 8
    truncation_doubling_check: bool = False
    trunc_factor: float = 64.0
    prefer_closed_form: bool = True

    def __post_init__(self):
        if self.coarse_samples_per_segment < 16:
            raise ValueError("coarse_samples_per_segment must be >= 16")
        if self.refinement < 32:
            raise ValueError("refinement must be >= 32")
        if self.multistart_count < 1:
            raise ValueError("multistart_count must be >= 1")


DEFAULT_CONFIG = SupSolverConfig()


def golden_max(f, a, b, iters: int):
    """Vectorized golden-section maximization of ``f`` on brackets ``[a, b]``.

    Returns ``(t, value, err)`` where ``err`` bounds how far the bracket's
    maximum can exceed the returned value (difference to the worse bracket end).
    """
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        left = fc >= fd  # keep [a, d]
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        # surviving interior point
        keep_t = np.where(left, c, d)
        keep_f = np.where(left, fc, fd)
        new_t = np.where(left, b - INV_PHI * (b - a), a + INV_PHI * (b - a))
        new_f = f(new_t)
        c = np.where(left, new_t, keep_t)
        fc = np.where(left, new_f, keep_f)
        d = np.where(left, keep_t, new_t)
        fd = np.where(left, keep_f, new_f)
    take_c = fc >= fd
    t = np.where(take_c, c, d)
    fb = np.where(take_c, fc, fd)
    err = np.maximum(fb - np.minimum(f(a), f(b)), 0.0)
    return t, fb, err


# ---------------------------------------------------------------------------
# objectives
# ---------------------------------------------------------------------------


def _s_obj(xx, xy, yx, yy, zx, zy, dxy):
    g = np.hypot(xx - zx, xy - zy) + np.hypot(yx - zx, yy - zy)
    return np.divide(dxy, g, out=np.zeros(np.broadcast(dxy, g).shape), where=g > 0)


def _v_obj(xx, xy, yx, yy, zx, zy):
    ux, uy = xx - zx, xy - zy
    wx, wy = yx - zx, yy - zy
    return np.arctan2(np.abs(ux * wy - uy * wx), ux * wx + uy * wy)


# ---------------------------------------------------------------------------
# straight pieces
# ---------------------------------------------------------------------------


def _line_frame(X2, Y2, A, U):
    """Along/height coordinates of x, y relative to lines through ``A`` with unit ``U``.

    Shapes: X2, Y2 (P, 2); A, U broadcastable to (P, E, 2).
    """
    rx = X2[:, None, 0] - A[..., 0]
    ry = X2[:, None, 1] - A[..., 1]
    sx = Y2[:, None, 0] - A[..., 0]
    sy = Y2[:, None, 1] - A[..., 1]
    ax = rx * U[..., 0] + ry * U[..., 1]
    hx = U[..., 0] * ry - U[..., 1] * rx
    ay = sx * U[..., 0] + sy * U[..., 1]
    hy = U[..., 0] * sy - U[..., 1] * sx
    return ax, hx, ay, hy


def _crossing(ax, hx, ay, hy, L):
    """Where the open segment (x, y) crosses the piece ``[0, L]`` strictly."""
    opp = hx * hy < 0
    ahx, ahy = np.abs(hx), np.abs(hy)
    den = np.where(opp, ahx + ahy, 1.0)
    ac = ax + (ay - ax) * ahx / den
    return opp & (ac >= 0) & (ac <= L)


def _pieces_sv(X2, Y2, A, U, L, want_v: bool):
    """Exact sup of the s- and (optionally) v-objectives over straight pieces.

    Returns ``(s, v, cross)`` arrays of shape (P,).
    """
    ax, hx, ay, hy = _line_frame(X2, Y2, A, U)
    dxy = np.hypot(X2[:, 0] - Y2[:, 0], X2[:, 1] - Y2[:, 1])[:, None]
    ahx, ahy = np.abs(hx), np.abs(hy)
    den = ahx + ahy
    # reflection point minimizes |x - z| + |z - y| along the line
    a_star = np.where(den > 0, ax + (ay - ax) * ahx / np.where(den > 0, den, 1.0), ax)
    t = np.clip(a_star, 0.0, L)
    g = np.hypot(ax - t, hx) + np.hypot(ay - t, hy)
    s = np.max(np.divide(dxy, g, out=np.zeros_like(g), where=g > 0), axis=1)
    cross = np.any(_crossing(ax, hx, ay, hy, L), axis=1)
    if not want_v:
        return s, None, cross

    def ang(tt):
        ux, wx = ax - tt, ay - tt
        return np.arctan2(np.abs(ux * hy - hx * wx), ux * wx + hx * hy)

    v = np.maximum(ang(np.zeros_like(ax)), ang(np.broadcast_to(L, ax.shape)))
    same = hx * hy > 0
    sg = np.where(hx < 0, -1.0, 1.0)
    px, py = hx * sg, hy * sg
    am = 0.5 * (ax + ay)
    bx, by = ax - am, ay - am
    qa = py - px
    qb = -2.0 * (py * bx - px * by)
    qc = py * bx * bx - px * by * by + px * py * (px - py)
    disc = np.maximum(qb * qb - 4.0 * qa * qc, 0.0)
    q = -0.5 * (qb + np.where(qb >= 0, 1.0, -1.0) * np.sqrt(disc))
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = q / qa
        r2 = qc / q
    for r in (r1, r2):
        r = np.where(np.isfinite(r) & same, r + am, 0.0)
        v = np.maximum(v, ang(np.clip(r, 0.0, L)))
    v = np.max(v, axis=1)
    return s, v, cross


def _straight_sup(X2, Y2, bd, dx, dy, want_v, trunc_factor, chunk=1_500_000):
    P = len(X2)
    s = np.zeros(P)
    v = np.zeros(P) if want_v else None
    cross = np.zeros(P, dtype=bool)
    seg = bd.segments
    if len(seg):
        A = seg[:, :2]
        D = seg[:, 2:] - A
        L = np.hypot(D[:, 0], D[:, 1])
        keep = L > 0
        A, D, L = A[keep], D[keep], L[keep]
        U = D / L[:, None]
        step = max(1, chunk // max(len(A), 1))
        for i in range(0, P, step):
            sl = slice(i, i + step)
            si, vi, ci = _pieces_sv(X2[sl], Y2[sl], A[None], U[None], L[None], want_v)
            s[sl] = np.maximum(s[sl], si)
            cross[sl] |= ci
            if want_v:
                v[sl] = np.maximum(v[sl], vi)
    if len(bd.lines):
        R = truncation_radius(X2, Y2, dx, dy, trunc_factor)
        mid = 0.5 * (X2 + Y2)
        for line in bd.lines:
            p0, u = line[:2], line[2:]
            tm = (mid - p0) @ u
            A = (p0 + (tm - R)[:, None] * u)[:, None, :]
            U = np.broadcast_to(u, A.shape)
            L = (2.0 * R)[:, None]
            si, vi, ci = _pieces_sv(X2, Y2, A, U, L, want_v)
            s = np.maximum(s, si)
            cross |= ci
            if want_v:
                v = np.maximum(v, vi)
    return s, v, cross


# ---------------------------------------------------------------------------
# circular pieces
# ---------------------------------------------------------------------------


def _circle_sup(X2, Y2, circle, which, cfg):
    cx, cy, R = circle
    P = len(X2)
    xx, xy = X2[:, 0:1] - cx, X2[:, 1:2] - cy
    yx, yy = Y2[:, 0:1] - cx, Y2[:, 1:2] - cy
    dxy = np.hypot(xx - yx, xy - yy)

    def f(theta):
        zx, zy = R * np.cos(theta), R * np.sin(theta)
        if which == "s":
            return _s_obj(xx, xy, yx, yy, zx, zy, dxy)
        return _v_obj(xx, xy, yx, yy, zx, zy)

    M = cfg.coarse_samples_per_segment
    base = np.broadcast_to(np.linspace(0.0, 2 * np.pi, M, endpoint=False), (P, M))
    rx, ry = np.hypot(xx, xy), np.hypot(yx, yy)
    tx, ty = np.arctan2(xy, xx), np.arctan2(yy, yx)
    sx = np.maximum(np.abs(R - rx), 1e-300) / R
    sy = np.maximum(np.abs(R - ry), 1e-300) / R
    anchors = [tx + sx * _ANCHOR_STEPS, ty + sy * _ANCHOR_STEPS,
               np.arctan2(xy + yy, xx + yx), np.arctan2(xy + yy, xx + yx) + np.pi]
    theta = np.concatenate([base] + anchors, axis=1) % (2 * np.pi)
    theta.sort(axis=1)
    vals = f(theta)
    n = theta.shape[1]
    prev_v, next_v = np.roll(vals, 1, axis=1), np.roll(vals, -1, axis=1)
    is_max = (vals >= prev_v) & (vals >= next_v)
    k = min(cfg.multistart_count, n)
    score = np.where(is_max, vals, -np.inf)
    idx = np.argpartition(-score, k - 1, axis=1)[:, :k]
    rows = np.arange(P)[:, None]
    ti = theta[rows, idx]
    lo = theta[rows, (idx - 1) % n]
    hi = theta[rows, (idx + 1) % n]
    lo = np.where(lo > ti, lo - 2 * np.pi, lo)
    hi = np.where(hi < ti, hi + 2 * np.pi, hi)
    t_best, f_best, err = golden_max(f, lo, hi, cfg.refinement)
    f_best = np.where(np.isfinite(score[rows, idx]), f_best, -np.inf)
    j = np.argmax(f_best, axis=1)
    best = f_best[np.arange(P), j]
    e = err[np.arange(P), j]
    scan_best = vals.max(axis=1)
    use_scan = scan_best > best
    best = np.where(use_scan, scan_best, best)
    return best, np.where(use_scan, 0.0, e)


def _circle_crossing(X2, Y2, circle):
    cx, cy, R = circle
    c = np.array([cx, cy])
    D = Y2 - X2
    DD = np.sum(D * D, axis=1)
    t = np.clip(np.divide(np.sum((c - X2) * D, axis=1), DD, out=np.zeros(len(D)), where=DD > 0), 0, 1)
    near = X2 + t[:, None] * D
    inside_x = np.hypot(*(X2 - c).T) < R
    inside_y = np.hypot(*(Y2 - c).T) < R
    return (np.hypot(*(near - c).T) <= R) & ~(inside_x & inside_y) | (inside_x != inside_y)


# ---------------------------------------------------------------------------
# batched entry point
# ---------------------------------------------------------------------------


def sup_values(G: Domain, X, Y, cfg: SupSolverConfig | None = None, which: str = "s",
               check: bool = True):
    """Batched s or v over rows of ``X`` and ``Y``; returns ``(values, error_bounds)``."""
    cfg = cfg or DEFAULT_CONFIG
    X, Y = _rows(X, G.dim), _rows(Y, G.dim)
    if len(X) != len(Y):
        raise DomainError("X and Y must have the same number of rows")
    if check and not (G.contains(X).all() and G.contains(Y).all()):
        raise DomainError(f"points must lie in {G.describe()}")
    if which == "s" and cfg.prefer_closed_form and isinstance(G, HalfSpace):
        val = s_halfspace_values(X, Y)
        return val, 4 * EPS * val
    dx, dy = G.distance(X), G.distance(Y)
    X2, Y2, bd, _, _ = G.planar(X, Y)
    want_v = which == "v"
    P = len(X)
    best = np.zeros(P)
    err = np.zeros(P)
    cross = np.zeros(P, dtype=bool)
    if len(bd.segments) or len(bd.lines):
        s, v, c = _straight_sup(X2, Y2, bd, dx, dy, want_v, cfg.trunc_factor)
        best = v if want_v else s
        cross |= c
        if cfg.truncation_doubling_check and len(bd.lines):
            s2, v2, _ = _straight_sup(X2, Y2, bd, dx, dy, want_v, 2 * cfg.trunc_factor)
            err = np.maximum(err, np.abs((v2 if want_v else s2) - best))
            best = np.maximum(best, v2 if want_v else s2)
    for circle in bd.circles:
        cross |= _circle_crossing(X2, Y2, circle)
        b, e = _circle_sup(X2, Y2, circle, which, cfg)
        better = b > best
        best = np.where(better, b, best)
        err = np.where(better, e, err)
    for p in bd.points:
        zx, zy = p
        if want_v:
            b = _v_obj(X2[:, 0], X2[:, 1], Y2[:, 0], Y2[:, 1], zx, zy)
        else:
            dxy = np.hypot(X2[:, 0] - Y2[:, 0], X2[:, 1] - Y2[:, 1])
            b = _s_obj(X2[:, 0], X2[:, 1], Y2[:, 0], Y2[:, 1], zx, zy, dxy)
        best = np.maximum(best, b)
    top = math.pi if want_v else 1.0
    best = np.where(cross, top, np.minimum(best, top))
    err = np.where(cross, 0.0, err + 4 * EPS * best)
    same = np.all(X == Y, axis=1)
    best = np.where(same, 0.0, best)
    err = np.where(same, 0.0, err)
    return best, err


def s_values(G, X, Y, cfg=None, check=True):
    return sup_values(G, X, Y, cfg, "s", check)


def v_values(G, X, Y, cfg=None, check=True):
    return sup_values(G, X, Y, cfg, "v", check)


def _single(G, x, y, cfg, which, kind):
    x = as_point(x, G.dim)
    y = as_point(y, G.dim)
    val, err = sup_values(G, x[None], y[None], cfg, which)
    return MetricValue(float(val[0]), float(err[0]), kind)


def s_metric(G: Domain, x, y, cfg: SupSolverConfig | None = None) -> MetricValue:
    """Triangular ratio metric ``sup_z |x-y| / (|x-z| + |z-y|)`` over the boundary."""
    return _single(G, x, y, cfg, "s", MetricKind.S)


def v_metric(G: Domain, x, y, cfg: SupSolverConfig | None = None) -> MetricValue:
    """Visual angle metric: the largest angle at a boundary point subtended by x, y."""
    return _single(G, x, y, cfg, "v", MetricKind.V)


# ---------------------------------------------------------------------------
# brute-force oracles
# ---------------------------------------------------------------------------


def _oracle(G, x, y, grid, which, chunk=1_000_000):
    x = as_point(x, G.dim)
    y = as_point(y, G.dim)
    if np.array_equal(x, y):
        G.contains(np.stack([x, y]))
        return 0.0
    bp = boundary_param(G, (x, y))
    Z = bp.sample_plane(int(grid))
    (xx, xy), (yx, yy) = bp.x2, bp.y2
    dxy = math.hypot(xx - yx, xy - yy)
    best = 0.0
    for i in range(0, len(Z), chunk):
        zx, zy = Z[i:i + chunk, 0], Z[i:i + chunk, 1]
        if which == "s":
            f = _s_obj(xx, xy, yx, yy, zx, zy, dxy)
        else:
            f = _v_obj(xx, xy, yx, yy, zx, zy)
        best = max(best, float(np.max(f)))
    return best


def s_oracle(G: Domain, x, y, grid: int = 100_000) -> float:
    """Dense-scan lower bound for s over ``grid`` boundary points (no refinement)."""
    return _oracle(G, x, y, grid, "s")


def v_oracle(G: Domain, x, y, grid: int = 100_000) -> float:
    """Dense-scan lower bound for v over ``grid`` boundary points (no refinement)."""
    return _oracle(G, x, y, grid, "v")
