"""Closed-form metrics: hyperbolic rho on the half-space and ball, j, j*, p, and s on H^n.

Each public scalar function returns a :class:`MetricValue`; the ``*_values``
functions are the vectorized work-horses over ``(m, n)`` row arrays.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .geom import Ball, Domain, DomainError, HalfSpace, _rows, as_point

__all__ = [
    "MetricKind",
    "MetricValue",
    "arcch1p",
    "rho_halfspace",
    "rho_ball",
    "th_half_rho_ball",
    "rho",
    "rho_values",
    "rho_mobius_ball",
    "j_metric",
    "j_star",
    "p_function",
    "s_halfspace",
    "j_values",
    "jstar_values",
    "p_values",
]


class MetricKind(str, enum.Enum):
    RHO = "rho"
    J = "j"
    JSTAR = "jstar"
    K = "k"
    S = "s"
    V = "v"
    P = "p"


@dataclass(frozen=True)
class MetricValue:
    value: float
    error_bound: float = 0.0
    kind: MetricKind = MetricKind.RHO

    def __float__(self) -> float:
        return self.value


def arcch1p(u):
    """``arcch(1 + u)`` without cancellation for small ``u >= 0``."""
    u = np.asarray(u, dtype=float)
    return np.log1p(u + np.sqrt(u * (u + 2.0)))


def _pair(G_dim, x, y):
    return as_point(x, G_dim), as_point(y, G_dim)


# -- hyperbolic metric ---------------------------------------------------


def _rho_h(X, Y):
    if np.any(X[:, -1] <= 0) or np.any(Y[:, -1] <= 0):
        raise DomainError("points must have positive last coordinate")
    diff = X - Y
    u = np.sum(diff * diff, axis=1) / (2.0 * X[:, -1] * Y[:, -1])
    return arcch1p(u)


def _th_half_rho_b(X, Y):
    nx = np.sum(X * X, axis=1)
    ny = np.sum(Y * Y, axis=1)
    if np.any(nx >= 1) or np.any(ny >= 1):
        raise DomainError("points must lie in the open unit ball")
    dd = np.sum((X - Y) ** 2, axis=1)
    q = (1.0 - nx) * (1.0 - ny)
    return np.sqrt(dd) / np.sqrt(dd + q)


def _rho_b(X, Y):
    nx = np.sum(X * X, axis=1)
    ny = np.sum(Y * Y, axis=1)
    if np.any(nx >= 1) or np.any(ny >= 1):
        raise DomainError("points must lie in the open unit ball")
    d = np.linalg.norm(X - Y, axis=1)
    return 2.0 * np.arcsinh(d / (np.sqrt(1.0 - nx) * np.sqrt(1.0 - ny)))


def rho_halfspace(x, y) -> MetricValue:
    x = as_point(x)
    y = as_point(y, x.size)
    return MetricValue(float(_rho_h(x[None], y[None])[0]), 0.0, MetricKind.RHO)


def rho_ball(x, y) -> MetricValue:
    x = as_point(x)
    y = as_point(y, x.size)
    return MetricValue(float(_rho_b(x[None], y[None])[0]), 0.0, MetricKind.RHO)


def th_half_rho_ball(x, y) -> float:
    """``th(rho_B(x, y) / 2)`` from the direct quotient."""
    x = as_point(x)
    y = as_point(y, x.size)
    return float(_th_half_rho_b(x[None], y[None])[0])


def rho_values(G: Domain, X, Y) -> np.ndarray:
    """Hyperbolic distance in a ball (any center/radius) or in the upper half-space."""
    X, Y = _rows(X, G.dim), _rows(Y, G.dim)
    if isinstance(G, HalfSpace):
        return _rho_h(X, Y)
    if type(G) is Ball:
        return _rho_b((X - G.center) / G.radius, (Y - G.center) / G.radius)
    raise DomainError(f"hyperbolic metric not available on {G.describe()}")


def rho(G: Domain, x, y) -> MetricValue:
    x, y = _pair(G.dim, x, y)
    return MetricValue(float(rho_values(G, x[None], y[None])[0]), 0.0, MetricKind.RHO)


def rho_mobius_ball(h, x, y) -> MetricValue:
    """Hyperbolic distance in ``h(B^n)`` for a Möbius map ``h`` with an ``inverse`` method."""
    x = as_point(x)
    y = as_point(y, x.size)
    u = np.asarray(h.inverse(x[None]))
    w = np.asarray(h.inverse(y[None]))
    return MetricValue(float(_rho_b(u, w)[0]), 0.0, MetricKind.RHO)


# -- distance-ratio family -----------------------------------------------


def _dists(G: Domain, X, Y):
    X, Y = _rows(X, G.dim), _rows(Y, G.dim)
    dx, dy = G.distance(X), G.distance(Y)
    if np.any(dx <= 0) or np.any(dy <= 0):
        raise DomainError("points must not lie on the boundary")
    return X, Y, dx, dy


def j_values(G: Domain, X, Y) -> np.ndarray:
    X, Y, dx, dy = _dists(G, X, Y)
    return np.log1p(np.linalg.norm(X - Y, axis=1) / np.minimum(dx, dy))


def jstar_values(G: Domain, X, Y) -> np.ndarray:
    X, Y, dx, dy = _dists(G, X, Y)
    t = np.linalg.norm(X - Y, axis=1)
    return t / (t + 2.0 * np.minimum(dx, dy))


def p_values(G: Domain, X, Y) -> np.ndarray:
    X, Y, dx, dy = _dists(G, X, Y)
    t = np.linalg.norm(X - Y, axis=1)
    return t / np.sqrt(t * t + 4.0 * dx * dy)


def _check_in(G, x, y):
    if not G.contains(np.stack([x, y])).all():
        raise DomainError(f"points must lie in {G.describe()}")


def j_metric(G: Domain, x, y) -> MetricValue:
    x, y = _pair(G.dim, x, y)
    _check_in(G, x, y)
    return MetricValue(float(j_values(G, x, y)[0]), 0.0, MetricKind.J)


def j_star(G: Domain, x, y) -> MetricValue:
    x, y = _pair(G.dim, x, y)
    _check_in(G, x, y)
    return MetricValue(float(jstar_values(G, x, y)[0]), 0.0, MetricKind.JSTAR)


def p_function(G: Domain, x, y) -> MetricValue:
    x, y = _pair(G.dim, x, y)
    _check_in(G, x, y)
    return MetricValue(float(p_values(G, x, y)[0]), 0.0, MetricKind.P)


def s_halfspace(x, y) -> MetricValue:
    """Triangular ratio metric of the upper half-space, ``th(rho_H / 2)``."""
    x = as_point(x)
    y = as_point(y, x.size)
    r = _rho_h(x[None], y[None])[0]
    return MetricValue(float(np.tanh(r / 2.0)), 0.0, MetricKind.S)


def s_halfspace_values(X, Y) -> np.ndarray:
    # th(rho/2) = |x-y| / sqrt(|x-y|^2 + 4 x_n y_n); same number, no arcch round trip
    dd = np.sum((X - Y) ** 2, axis=1)
    return np.sqrt(dd) / np.sqrt(dd + 4.0 * X[:, -1] * Y[:, -1])
