"""Points, angles and the canonical Euclidean domains.

Every domain knows its boundary distance, nearest boundary points, membership,
diameter, and how to present its boundary as 1-D pieces in a 2-plane that
contains a given pair of points.  Points are plain numpy arrays; batched
routines take ``(m, n)`` arrays of row vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import shapely

__all__ = [
    "DomainError",
    "Domain",
    "Ball",
    "BallComplement",
    "HalfSpace",
    "PuncturedSpace",
    "Strip",
    "Polygon",
    "ConvexPolygon",
    "KochPolygon",
    "CutDisk",
    "PlanarBoundary",
    "BoundaryParam",
    "as_point",
    "angle_at",
    "angles",
    "boundary_distance",
    "domain_diameter",
    "boundary_param",
    "koch_vertices",
    "parse_domain",
    "unit_square",
]


class DomainError(ValueError):
    """Raised for points outside a domain, dimension mismatches and bad domain specs."""


def as_point(x, dim: int | None = None) -> np.ndarray:
    p = np.asarray(x, dtype=float)
    if p.ndim != 1 or p.size < 2:
        raise DomainError(f"a point needs at least 2 coordinates, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise DomainError("point coordinates must be finite")
    if dim is not None and p.size != dim:
        raise DomainError(f"dimension mismatch: expected {dim} coordinates, got {p.size}")
    return p


def _rows(X, dim: int) -> np.ndarray:
    A = np.atleast_2d(np.asarray(X, dtype=float))
    if A.shape[-1] != dim:
        raise DomainError(f"dimension mismatch: expected {dim} coordinates, got {A.shape[-1]}")
    return A


def angles(U: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Angle between row vectors ``U`` and ``W`` (Kahan's half-angle form)."""
    nu = np.linalg.norm(U, axis=-1)[..., None]
    nw = np.linalg.norm(W, axis=-1)[..., None]
    a = np.linalg.norm(nw * U - nu * W, axis=-1)
    b = np.linalg.norm(nw * U + nu * W, axis=-1)
    return 2.0 * np.arctan2(a, b)


def angle_at(x, z, y) -> float:
    """The angle at ``z`` between the segments ``[x, z]`` and ``[y, z]``, in ``[0, pi]``."""
    x, z, y = as_point(x), as_point(z), as_point(y)
    if not (x.size == y.size == z.size):
        raise DomainError("dimension mismatch")
    if np.array_equal(z, x) or np.array_equal(z, y):
        raise DomainError("angle vertex coincides with an endpoint")
    return float(angles((x - z)[None], (y - z)[None])[0])


# ---------------------------------------------------------------------------
# boundary pieces
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PlanarBoundary:
    """Boundary of a planar section: full circles, segments, infinite lines, points.

    ``circles`` rows are ``(cx, cy, R)``; ``segments`` rows ``(ax, ay, bx, by)``;
    ``lines`` rows ``(px, py, ux, uy)`` with unit direction; ``points`` rows ``(x, y)``.
    """

    circles: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)))
    segments: np.ndarray = field(default_factory=lambda: np.zeros((0, 4)))
    lines: np.ndarray = field(default_factory=lambda: np.zeros((0, 4)))
    points: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))


@dataclass(frozen=True, eq=False)
class BoundaryParam:
    """Parametrized boundary pieces for one pair, in the coordinates of a 2-plane.

    ``origin + u * basis[0] + v * basis[1]`` lifts plane coordinates ``(u, v)``
    back to R^n.  Unbounded lines are already truncated into ``segments``.
    Arc rows are ``(cx, cy, R, t0, t1)`` over the angle interval ``[t0, t1]``.
    """

    origin: np.ndarray
    basis: np.ndarray
    x2: np.ndarray
    y2: np.ndarray
    arcs: np.ndarray
    segments: np.ndarray
    points: np.ndarray

    def lift(self, U) -> np.ndarray:
        U = np.atleast_2d(U)
        return self.origin + U[:, :1] * self.basis[0] + U[:, 1:2] * self.basis[1]

    @property
    def total_length(self) -> float:
        arcs = float(np.sum(self.arcs[:, 2] * (self.arcs[:, 4] - self.arcs[:, 3])))
        segs = float(np.sum(np.hypot(self.segments[:, 2] - self.segments[:, 0],
                                     self.segments[:, 3] - self.segments[:, 1])))
        return arcs + segs

    def sample_plane(self, m: int) -> np.ndarray:
        """``m`` boundary points (plane coordinates) spaced uniformly in arc length."""
        if m <= 0:
            return np.zeros((0, 2))
        if not len(self.arcs) and not len(self.segments):
            return np.repeat(self.points[:1], m, axis=0) if len(self.points) else np.zeros((0, 2))
        arc_len = self.arcs[:, 2] * (self.arcs[:, 4] - self.arcs[:, 3])
        seg_len = np.hypot(self.segments[:, 2] - self.segments[:, 0],
                           self.segments[:, 3] - self.segments[:, 1])
        lengths = np.concatenate([arc_len, seg_len])
        cum = np.concatenate([[0.0], np.cumsum(lengths)])
        total = cum[-1]
        s = (np.arange(m) + 0.5) * (total / m)
        idx = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(lengths) - 1)
        local = s - cum[idx]
        out = np.empty((m, 2))
        na = len(self.arcs)
        on_arc = idx < na
        if np.any(on_arc):
            a = self.arcs[idx[on_arc]]
            t = a[:, 3] + local[on_arc] / a[:, 2]
            out[on_arc, 0] = a[:, 0] + a[:, 2] * np.cos(t)
            out[on_arc, 1] = a[:, 1] + a[:, 2] * np.sin(t)
        if np.any(~on_arc):
            sg = self.segments[idx[~on_arc] - na]
            L = seg_len[idx[~on_arc] - na]
            f = np.divide(local[~on_arc], L, out=np.zeros_like(L), where=L > 0)
            out[~on_arc] = sg[:, :2] + f[:, None] * (sg[:, 2:] - sg[:, :2])
        if len(self.points):
            out = np.vstack([self.points, out])[:m]
        return out

    def sample(self, m: int) -> np.ndarray:
        return self.lift(self.sample_plane(m))


def truncation_radius(x2, y2, dx, dy, factor: float = 64.0):
    """Half-length kept of an unbounded boundary line, measured from the pair's midpoint."""
    return factor * (np.linalg.norm(np.asarray(y2) - np.asarray(x2), axis=-1) + dx + dy)


# ---------------------------------------------------------------------------
# domains
# ---------------------------------------------------------------------------


def _orthonormal_frames(V1: np.ndarray, V2: np.ndarray):
    """Per-row orthonormal (e1, e2) with e1 along V1 and V2 in span(e1, e2)."""
    m, n = V1.shape
    e1 = V1.copy()
    n1 = np.linalg.norm(e1, axis=1)
    bad = n1 < 1e-300
    e1[bad] = V2[bad]
    n1 = np.linalg.norm(e1, axis=1)
    bad = n1 < 1e-300
    e1[bad] = 0.0
    e1[bad, 0] = 1.0
    e1 /= np.linalg.norm(e1, axis=1)[:, None]
    e2 = V2 - np.sum(V2 * e1, axis=1)[:, None] * e1
    n2 = np.linalg.norm(e2, axis=1)
    bad = n2 <= 1e-12 * np.maximum(np.linalg.norm(V2, axis=1), 1e-300)
    if np.any(bad):
        # any unit vector orthogonal to e1
        k = np.argmin(np.abs(e1[bad]), axis=1)
        t = np.zeros((int(bad.sum()), n))
        t[np.arange(len(k)), k] = 1.0
        t -= np.sum(t * e1[bad], axis=1)[:, None] * e1[bad]
        e2[bad] = t
    e2 /= np.linalg.norm(e2, axis=1)[:, None]
    return e1, e2


class Domain:
    """Common interface of the canonical domains."""

    dim: int = 2
    convex: bool = False
    bounded: bool = False
    kind: str = "domain"

    # -- to be provided by variants ------------------------------------
    def distance(self, X) -> np.ndarray:
        """Unsigned Euclidean distance from each row of ``X`` to the boundary."""
        raise NotImplementedError

    def nearest(self, X) -> np.ndarray:
        """A nearest boundary point for each row of ``X``."""
        raise NotImplementedError

    def _inside(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def diameter(self) -> float:
        return math.inf

    def window(self) -> tuple[np.ndarray, np.ndarray]:
        """Box used for sampling interior points of the domain."""
        raise NotImplementedError

    def planar(self, X, Y):
        """Reduce pairs to a common 2-plane.

        Returns ``(X2, Y2, boundary, origin, basis)`` where ``boundary`` is a
        :class:`PlanarBoundary` shared by all rows.
        """
        raise NotImplementedError

    def boundary_sample(self, rng: np.random.Generator, m: int) -> np.ndarray:
        raise NotImplementedError

    def describe(self) -> str:
        return self.kind

    # -- shared ----------------------------------------------------------
    @property
    def scale(self) -> float:
        lo, hi = self.window()
        if self.bounded:
            return float(self.diameter())
        return float(np.min(hi - lo))

    def contains(self, X) -> np.ndarray:
        """Strict interior membership for each row of ``X``."""
        A = _rows(X, self.dim)
        return self._inside(A) & (self.distance(A) > 0.0)

    def distance_and_gradient(self, X):
        """Distance to the boundary and its gradient at interior points."""
        A = _rows(X, self.dim)
        nb = self.nearest(A)
        diff = A - nb
        d = np.linalg.norm(diff, axis=1)
        g = diff / np.where(d > 0, d, 1.0)[:, None]
        return d, g

    def signed_distance_and_gradient(self, X):
        """Distance to the boundary, negated outside the domain, and its gradient."""
        A = _rows(X, self.dim)
        d, g = self.distance_and_gradient(A)
        inside = self._inside(A)
        return np.where(inside, d, -d), np.where(inside[:, None], g, -g)

    def __str__(self) -> str:
        return self.describe()


@dataclass(frozen=True, eq=False)
class Ball(Domain):
    center: np.ndarray
    radius: float = 1.0

    kind = "ball"
    convex = True
    bounded = True

    def __post_init__(self):
        c = as_point(self.center)
        object.__setattr__(self, "center", c)
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise DomainError("ball radius must be positive")
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def dim(self) -> int:
        return self.center.size

    def distance(self, X):
        A = _rows(X, self.dim)
        return np.abs(self.radius - np.linalg.norm(A - self.center, axis=1))

    def nearest(self, X):
        A = _rows(X, self.dim)
        V = A - self.center
        r = np.linalg.norm(V, axis=1)
        V = np.where(r[:, None] > 0, V, np.eye(self.dim)[0])
        r = np.where(r > 0, r, 1.0)
        return self.center + self.radius * V / r[:, None]

    def _inside(self, A):
        return np.linalg.norm(A - self.center, axis=1) < self.radius

    def signed_distance_and_gradient(self, X):
        V = _rows(X, self.dim) - self.center
        r = np.sqrt(np.einsum("ij,ij->i", V, V))
        g = -V / np.where(r > 0, r, 1.0)[:, None]
        return self.radius - r, g

    def diameter(self):
        return 2.0 * self.radius

    def window(self):
        return self.center - self.radius, self.center + self.radius

    def planar(self, X, Y):
        X, Y = _rows(X, self.dim), _rows(Y, self.dim)
        bd = PlanarBoundary(circles=np.array([[0.0, 0.0, self.radius]]))
        return _radial_planar(self.center, X, Y, bd)

    def boundary_sample(self, rng, m):
        V = rng.standard_normal((m, self.dim))
        return self.center + self.radius * V / np.linalg.norm(V, axis=1)[:, None]

    def describe(self):
        return f"ball:c={_csv(self.center)};r={_num(self.radius)}"


@dataclass(frozen=True, eq=False)
class BallComplement(Ball):
    kind = "ballcomp"
    convex = False
    bounded = False

    def _inside(self, A):
        return np.linalg.norm(A - self.center, axis=1) > self.radius

    def signed_distance_and_gradient(self, X):
        d, g = Ball.signed_distance_and_gradient(self, X)
        return -d, -g

    def diameter(self):
        return math.inf

    def window(self):
        return self.center - 3 * self.radius, self.center + 3 * self.radius

    def describe(self):
        return f"ballcomp:c={_csv(self.center)};r={_num(self.radius)}"


def _radial_planar(center, X, Y, bd):
    """Plane through ``center``, x and y; the center maps to the plane origin."""
    m, n = X.shape
    if n == 2:
        origin = np.tile(center, (m, 1))
        basis = np.tile(np.eye(2)[:, None, :], (1, m, 1)).transpose(1, 0, 2)
        return X - center, Y - center, bd, origin, basis
    e1, e2 = _orthonormal_frames(X - center, Y - center)
    X2 = np.stack([np.sum((X - center) * e1, 1), np.sum((X - center) * e2, 1)], axis=1)
    Y2 = np.stack([np.sum((Y - center) * e1, 1), np.sum((Y - center) * e2, 1)], axis=1)
    return X2, Y2, bd, np.tile(center, (m, 1)), np.stack([e1, e2], axis=1)


@dataclass(frozen=True, eq=False)
class HalfSpace(Domain):
    """Upper half-space ``{x : x_n > 0}``."""

    n: int = 2
    kind = "halfspace"
    convex = True
    bounded = False

    def __post_init__(self):
        if int(self.n) < 2:
            raise DomainError("half-space dimension must be at least 2")
        object.__setattr__(self, "n", int(self.n))

    @property
    def dim(self):
        return self.n

    def distance(self, X):
        return np.abs(_rows(X, self.n)[:, -1])

    def nearest(self, X):
        A = _rows(X, self.n).copy()
        A[:, -1] = 0.0
        return A

    def _inside(self, A):
        return A[:, -1] > 0

    def window(self):
        lo = np.full(self.n, -1.0)
        lo[-1] = 0.0
        hi = np.full(self.n, 1.0)
        hi[-1] = 2.0
        return lo, hi

    def planar(self, X, Y):
        X, Y = _rows(X, self.n), _rows(Y, self.n)
        m = len(X)
        bd = PlanarBoundary(lines=np.array([[0.0, 0.0, 1.0, 0.0]]))
        if self.n == 2:
            origin = np.zeros((m, 2))
            basis = np.tile(np.eye(2)[None], (m, 1, 1))
            return X.copy(), Y.copy(), bd, origin, basis
        h = Y[:, :-1] - X[:, :-1]
        hn = np.linalg.norm(h, axis=1)
        e1 = np.zeros((m, self.n))
        ok = hn > 0
        e1[ok, :-1] = h[ok] / hn[ok, None]
        e1[~ok, 0] = 1.0
        e2 = np.zeros((m, self.n))
        e2[:, -1] = 1.0
        origin = X.copy()
        origin[:, -1] = 0.0
        X2 = np.stack([np.zeros(m), X[:, -1]], axis=1)
        Y2 = np.stack([hn, Y[:, -1]], axis=1)
        return X2, Y2, bd, origin, np.stack([e1, e2], axis=1)

    def boundary_sample(self, rng, m):
        lo, hi = self.window()
        Z = rng.uniform(lo, hi, size=(m, self.n))
        Z[:, -1] = 0.0
        return Z

    def describe(self):
        return f"halfspace:n={self.n}"


@dataclass(frozen=True, eq=False)
class PuncturedSpace(Domain):
    puncture: np.ndarray = None
    n: int = 2
    kind = "punctured"
    convex = False
    bounded = False

    def __post_init__(self):
        p = np.zeros(int(self.n)) if self.puncture is None else as_point(self.puncture)
        object.__setattr__(self, "puncture", p)
        object.__setattr__(self, "n", p.size)

    @property
    def dim(self):
        return self.n

    def distance(self, X):
        return np.linalg.norm(_rows(X, self.n) - self.puncture, axis=1)

    def nearest(self, X):
        return np.tile(self.puncture, (len(_rows(X, self.n)), 1))

    def _inside(self, A):
        return np.ones(len(A), dtype=bool)

    def window(self):
        return self.puncture - 2.0, self.puncture + 2.0

    def planar(self, X, Y):
        X, Y = _rows(X, self.n), _rows(Y, self.n)
        bd = PlanarBoundary(points=np.zeros((1, 2)))
        return _radial_planar(self.puncture, X, Y, bd)

    def boundary_sample(self, rng, m):
        return np.tile(self.puncture, (m, 1))

    def describe(self):
        return f"punctured:p={_csv(self.puncture)}"


class _PlanarIdentity:
    """Mixin for domains that already live in R^2."""

    dim = 2

    def planar(self, X, Y):
        X, Y = _rows(X, 2), _rows(Y, 2)
        m = len(X)
        return (X.copy(), Y.copy(), self._boundary(),
                np.zeros((m, 2)), np.tile(np.eye(2)[None], (m, 1, 1)))


@dataclass(frozen=True, eq=False)
class Strip(_PlanarIdentity, Domain):
    """The planar strip ``{(u, v) : |v| < 1}``."""

    kind = "strip"
    convex = True
    bounded = False

    def distance(self, X):
        v = _rows(X, 2)[:, 1]
        return np.minimum(np.abs(1.0 - v), np.abs(1.0 + v))

    def nearest(self, X):
        A = _rows(X, 2).copy()
        A[:, 1] = np.where(A[:, 1] >= 0, 1.0, -1.0)
        return A

    def _inside(self, A):
        return np.abs(A[:, 1]) < 1.0

    def window(self):
        return np.array([-3.0, -1.0]), np.array([3.0, 1.0])

    def _boundary(self):
        return PlanarBoundary(lines=np.array([[0.0, 1.0, 1.0, 0.0], [0.0, -1.0, 1.0, 0.0]]))

    def boundary_sample(self, rng, m):
        u = rng.uniform(-3.0, 3.0, m)
        return np.stack([u, np.where(rng.random(m) < 0.5, 1.0, -1.0)], axis=1)

    def describe(self):
        return "strip"


def _segment_nearest(P: np.ndarray, S: np.ndarray, chunk: int = 2_000_000):
    """Distance and nearest point from rows of P to the union of segments S (rows ax,ay,bx,by)."""
    m = len(P)
    A = S[:, :2]
    D = S[:, 2:] - A
    DD = np.einsum("ij,ij->i", D, D)
    DD = np.where(DD > 0, DD, 1.0)
    best = np.empty(m)
    near = np.empty((m, 2))
    step = max(1, chunk // max(len(S), 1))
    for i in range(0, m, step):
        Q = P[i:i + step]
        rx = Q[:, None, 0] - A[None, :, 0]
        ry = Q[:, None, 1] - A[None, :, 1]
        t = np.clip((rx * D[None, :, 0] + ry * D[None, :, 1]) / DD[None, :], 0.0, 1.0)
        ex = rx - t * D[None, :, 0]
        ey = ry - t * D[None, :, 1]
        d2 = ex * ex + ey * ey
        k = np.argmin(d2, axis=1)
        r = np.arange(len(Q))
        best[i:i + step] = np.sqrt(d2[r, k])
        near[i:i + step] = A[k] + t[r, k][:, None] * D[k]
    return best, near


@dataclass(frozen=True, eq=False)
class Polygon(_PlanarIdentity, Domain):
    """Simple planar polygon, stored counter-clockwise."""

    vertices: np.ndarray = None
    kind = "polygon"
    bounded = True

    def __post_init__(self):
        V = np.asarray(self.vertices, dtype=float)
        if V.ndim != 2 or V.shape[1] != 2 or len(V) < 3:
            raise DomainError("polygon needs at least 3 planar vertices")
        if np.allclose(V[0], V[-1]):
            V = V[:-1]
        area2 = np.sum(V[:, 0] * np.roll(V[:, 1], -1) - np.roll(V[:, 0], -1) * V[:, 1])
        if abs(area2) < 1e-14:
            raise DomainError("degenerate polygon")
        if area2 < 0:
            V = V[::-1].copy()
        shape = shapely.Polygon(V)
        if not shape.is_valid:
            raise DomainError("polygon is not simple")
        shapely.prepare(shape)
        object.__setattr__(self, "vertices", V)
        object.__setattr__(self, "_shape", shape)
        object.__setattr__(self, "_segs", np.hstack([V, np.roll(V, -1, axis=0)]))

    @property
    def convex(self) -> bool:
        return is_convex_ccw(self.vertices)

    @property
    def edges(self) -> np.ndarray:
        return self._segs

    def distance(self, X):
        return _segment_nearest(_rows(X, 2), self._segs)[0]

    def nearest(self, X):
        return _segment_nearest(_rows(X, 2), self._segs)[1]

    def distance_and_gradient(self, X):
        A = _rows(X, 2)
        d, nb = _segment_nearest(A, self._segs)
        return d, (A - nb) / np.where(d > 0, d, 1.0)[:, None]

    def contains(self, X):
        A = _rows(X, 2)
        inside = shapely.contains_xy(self._shape, A[:, 0], A[:, 1])
        if np.any(inside):
            inside[inside] = self.distance(A[inside]) > 0.0
        return inside

    def _inside(self, A):
        return shapely.contains_xy(self._shape, A[:, 0], A[:, 1])

    def diameter(self):
        from scipy.spatial import ConvexHull

        H = self.vertices[ConvexHull(self.vertices).vertices]
        diff = H[:, None, :] - H[None, :, :]
        return float(np.sqrt(np.max(np.sum(diff * diff, axis=-1))))

    def window(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def _boundary(self):
        return PlanarBoundary(segments=self._segs)

    def boundary_sample(self, rng, m):
        S = self._segs
        L = np.hypot(S[:, 2] - S[:, 0], S[:, 3] - S[:, 1])
        k = rng.choice(len(S), size=m, p=L / L.sum())
        t = rng.random(m)[:, None]
        return S[k, :2] + t * (S[k, 2:] - S[k, :2])

    def describe(self):
        return "polygon:" + ";".join(f"{_num(a)},{_num(b)}" for a, b in self.vertices)


ConvexPolygon = Polygon


def is_convex_ccw(V: np.ndarray) -> bool:
    """Strictly convex counter-clockwise vertex cycle (cross products all positive)."""
    e = np.roll(V, -1, axis=0) - V
    f = np.roll(e, -1, axis=0)
    return bool(np.all(e[:, 0] * f[:, 1] - e[:, 1] * f[:, 0] > 0))


def unit_square() -> Polygon:
    return Polygon(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))


def koch_vertices(depth: int) -> np.ndarray:
    """Vertices (counter-clockwise) of the Koch snowflake polygon of the given depth.

    Starts from the equilateral triangle inscribed in the unit circle; depth ``d``
    has ``3 * 4**d`` edges.
    """
    if depth < 0:
        raise DomainError("Koch depth must be non-negative")
    pts = np.exp(1j * (np.pi / 2 + 2 * np.pi * np.arange(3) / 3))
    rot = np.exp(-1j * np.pi / 3)
    for _ in range(depth):
        a = pts
        b = np.roll(pts, -1)
        d = (b - a) / 3.0
        s1 = a + d
        s2 = a + 2 * d
        tip = s1 + d * rot
        pts = np.stack([a, s1, tip, s2], axis=1).ravel()
    return np.stack([pts.real, pts.imag], axis=1)


@dataclass(frozen=True, eq=False)
class KochPolygon(Polygon):
    depth: int = 0
    kind = "koch"

    def __init__(self, depth: int = 0):
        object.__setattr__(self, "depth", int(depth))
        object.__setattr__(self, "vertices", koch_vertices(int(depth)))
        Polygon.__post_init__(self)

    @property
    def convex(self) -> bool:
        return self.depth == 0

    @property
    def edge_length(self) -> float:
        return math.sqrt(3.0) / 3.0 ** self.depth

    def describe(self):
        return f"koch:depth={self.depth}"


@dataclass(frozen=True, eq=False)
class CutDisk(_PlanarIdentity, Domain):
    """Planar disk with closed segments (possibly single points) removed.

    ``CutDisk.slit()`` is the unit disk minus ``[0, 1]``; ``CutDisk.punctured()``
    the unit disk minus the origin.
    """

    center: np.ndarray = None
    radius: float = 1.0
    cuts: np.ndarray = None
    label: str = "cutdisk"

    kind = "cutdisk"
    convex = False
    bounded = True

    def __post_init__(self):
        c = np.zeros(2) if self.center is None else as_point(self.center, 2)
        cuts = np.zeros((0, 4)) if self.cuts is None else np.atleast_2d(np.asarray(self.cuts, float))
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "cuts", cuts)
        object.__setattr__(self, "radius", float(self.radius))

    @classmethod
    def slit(cls) -> "CutDisk":
        return cls(np.zeros(2), 1.0, np.array([[0.0, 0.0, 1.0, 0.0]]), "slitdisk")

    @classmethod
    def punctured(cls) -> "CutDisk":
        return cls(np.zeros(2), 1.0, np.array([[0.0, 0.0, 0.0, 0.0]]), "punctureddisk")

    def _circle_part(self, A):
        V = A - self.center
        r = np.linalg.norm(V, axis=1)
        V = np.where(r[:, None] > 0, V, np.array([1.0, 0.0]))
        r = np.where(r > 0, r, 1.0)
        return self.center + self.radius * V / r[:, None]

    def distance(self, X):
        A = _rows(X, 2)
        dc = np.abs(self.radius - np.linalg.norm(A - self.center, axis=1))
        ds = _segment_nearest(A, self.cuts)[0]
        return np.minimum(dc, ds)

    def nearest(self, X):
        A = _rows(X, 2)
        nc = self._circle_part(A)
        dc = np.abs(self.radius - np.linalg.norm(A - self.center, axis=1))
        ds, ns = _segment_nearest(A, self.cuts)
        return np.where((ds < dc)[:, None], ns, nc)

    def _inside(self, A):
        return np.linalg.norm(A - self.center, axis=1) < self.radius

    def diameter(self):
        return 2.0 * self.radius

    def window(self):
        return self.center - self.radius, self.center + self.radius

    def _boundary(self):
        seg = self.cuts
        L = np.hypot(seg[:, 2] - seg[:, 0], seg[:, 3] - seg[:, 1])
        return PlanarBoundary(circles=np.array([[*self.center, self.radius]]),
                              segments=seg[L > 0], points=seg[L == 0, :2])

    def boundary_sample(self, rng, m):
        seg = self.cuts
        L = np.hypot(seg[:, 2] - seg[:, 0], seg[:, 3] - seg[:, 1])
        circ = 2 * np.pi * self.radius
        on_cut = rng.random(m) < L.sum() / (L.sum() + circ)
        out = np.empty((m, 2))
        t = rng.uniform(0, 2 * np.pi, m)
        out[:] = self.center + self.radius * np.stack([np.cos(t), np.sin(t)], axis=1)
        k = int(on_cut.sum())
        if k:
            j = rng.choice(len(seg), size=k, p=L / L.sum())
            u = rng.random(k)[:, None]
            out[on_cut] = seg[j, :2] + u * (seg[j, 2:] - seg[j, :2])
        return out

    def describe(self):
        return self.label


# ---------------------------------------------------------------------------
# spec-level operations
# ---------------------------------------------------------------------------


def _closure_check(G: Domain, A: np.ndarray, d: np.ndarray) -> None:
    tol = 1e-12 * max(1.0, G.scale)
    ok = G._inside(A) | (d <= tol)
    if not np.all(ok):
        raise DomainError(f"point outside the closure of {G.describe()}")


def boundary_distance(G: Domain, x) -> float:
    """Distance from ``x`` (in the closure of G) to the boundary of G."""
    p = as_point(x, G.dim)
    d = G.distance(p[None])
    _closure_check(G, p[None], d)
    return float(d[0])


def domain_diameter(G: Domain) -> float:
    return float(G.diameter())


def boundary_param(G: Domain, pair, trunc_factor: float = 64.0) -> BoundaryParam:
    """Boundary pieces of G in the 2-plane through the pair (lines truncated)."""
    x, y = as_point(pair[0], G.dim), as_point(pair[1], G.dim)
    if not G.contains(np.stack([x, y])).all():
        raise DomainError("pair must lie in the domain")
    X2, Y2, bd, origin, basis = G.planar(x[None], y[None])
    dx, dy = G.distance(np.stack([x, y]))
    segs = [bd.segments]
    if len(bd.lines):
        R = truncation_radius(X2[0], Y2[0], dx, dy, trunc_factor)
        mid = 0.5 * (X2[0] + Y2[0])
        P, U = bd.lines[:, :2], bd.lines[:, 2:]
        tm = np.sum((mid - P) * U, axis=1)
        A = P + (tm - R)[:, None] * U
        B = P + (tm + R)[:, None] * U
        segs.append(np.hstack([A, B]))
    arcs = np.array([[c[0], c[1], c[2], 0.0, 2 * np.pi] for c in bd.circles]).reshape(-1, 5)
    return BoundaryParam(origin=origin[0], basis=basis[0], x2=X2[0], y2=Y2[0], arcs=arcs,
                         segments=np.vstack(segs), points=bd.points)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------


def _num(v: float) -> str:
    return format(float(v), ".12g")


def _csv(v) -> str:
    return ",".join(_num(a) for a in np.asarray(v).ravel())


def _parse_csv(s: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in s.split(",")])
    except ValueError as exc:
        raise DomainError(f"bad coordinate list {s!r}") from exc


def _parse_params(body: str) -> dict[str, str]:
    out = {}
    for part in filter(None, body.split(";")):
        if "=" not in part:
            raise DomainError(f"expected key=value, got {part!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def parse_domain(text: str) -> Domain:
    """Parse the domain text format used by the command line.

    ``ball:c=0,0;r=1``, ``halfspace:n=2``, ``punctured:p=0,0``, ``strip``,
    ``polygon:@file.csv`` (or inline ``polygon:0,0;1,0;1,1``), ``koch:depth=4``,
    ``ballcomp:c=0,0;r=1``, ``slitdisk``, ``punctureddisk``.
    """
    kind, _, body = text.strip().partition(":")
    kind = kind.lower()
    try:
        if kind in ("ball", "ballcomp"):
            p = _parse_params(body)
            c = _parse_csv(p.get("c", "0,0"))
            r = float(p.get("r", "1"))
            return (Ball if kind == "ball" else BallComplement)(c, r)
        if kind == "halfspace":
            return HalfSpace(int(_parse_params(body).get("n", "2")))
        if kind == "punctured":
            return PuncturedSpace(_parse_csv(_parse_params(body).get("p", "0,0")))
        if kind == "strip":
            return Strip()
        if kind == "koch":
            return KochPolygon(int(_parse_params(body).get("depth", "0")))
        if kind == "polygon":
            if body.startswith("@"):
                rows = [ln.strip() for ln in Path(body[1:]).read_text().splitlines() if ln.strip()]
                V = np.array([_parse_csv(r) for r in rows])
            elif body in ("square", "unit-square"):
                return unit_square()
            else:
                V = np.array([_parse_csv(r) for r in body.split(";") if r])
            return Polygon(V)
        if kind == "slitdisk":
            return CutDisk.slit()
        if kind == "punctureddisk":
            return CutDisk.punctured()
    except (OSError, ValueError) as exc:
        raise DomainError(f"cannot parse domain {text!r}: {exc}") from exc
    raise DomainError(f"unknown domain kind {kind!r}")
