"""Möbius maps of the ball and half-space, the radial stretch, and distortion checks.

Maps act on row arrays.  The checks sample pairs in the source domain, evaluate
both sides of each distortion bound and return a :class:`VerificationReport`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .boundary_sup import s_values
from .closed_forms import MetricKind, j_values, p_values, rho_values, s_halfspace_values
from .geom import Ball, CutDisk, Domain, DomainError, HalfSpace, _num, _rows, as_point
from .quasihyperbolic import k_values
from .report import VerificationReport, Witness, assess
from .sampling import rng_for, sample_pairs

__all__ = [
    "MapSpec",
    "BallAutomorphism",
    "CayleyBallToHalfspace",
    "CayleyHalfspaceToBall",
    "RadialStretch",
    "PlanarAnalytic",
    "apply_map",
    "parse_map",
    "DilatationEstimate",
    "linear_dilatation",
    "check_mobius_j_k_distortion",
    "check_s_mobius_bound",
    "check_p_mobius_bounds",
    "check_qr_holder_bound",
    "empirical_bilipschitz_constant",
    "merge_reports",
]

CLOSED_FORM_ERR = 1e-12
BASE_SLACK = 1e-9


class MapSpec:
    """A map between canonical domains; subclasses implement ``_apply``."""

    dim: int = 2
    K_dilatation: float = 1.0
    mobius: bool = True

    def source(self) -> Domain:
        raise NotImplementedError

    def target(self) -> Domain:
        raise NotImplementedError

    def _apply(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def inverse(self, X) -> np.ndarray:
        raise NotImplementedError(f"{self.describe()} has no inverse")

    def apply(self, X, check: bool = True) -> np.ndarray:
        X = _rows(X, self.dim)
        if check and not self.source().contains(X).all():
            raise DomainError(f"point outside the source domain of {self.describe()}")
        return self._apply(X)

    def describe(self) -> str:
        raise NotImplementedError


def _T(X, a):
    """Ball automorphism taking a to 0: ((1-|a|^2)(x-a) - |x-a|^2 a) / (1 - 2x.a + |x|^2|a|^2)."""
    aa = float(a @ a)
    D = X - a
    num = (1.0 - aa) * D - np.sum(D * D, axis=1)[:, None] * a
    den = 1.0 - 2.0 * (X @ a) + np.sum(X * X, axis=1) * aa
    return num / den[:, None]


@dataclass(frozen=True, eq=False)
class BallAutomorphism(MapSpec):
    a: np.ndarray
    rotation: np.ndarray | None = None

    def __post_init__(self):
        a = as_point(self.a)
        if a @ a >= 1.0:
            raise DomainError("automorphism parameter must lie in the open unit ball")
        R = np.eye(a.size) if self.rotation is None else np.asarray(self.rotation, dtype=float)
        if R.shape != (a.size, a.size) or not np.allclose(R @ R.T, np.eye(a.size), atol=1e-12):
            raise DomainError("rotation must be an orthogonal matrix")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "rotation", R)

    @classmethod
    def planar(cls, a, theta: float = 0.0) -> "BallAutomorphism":
        c, s = math.cos(theta), math.sin(theta)
        return cls(np.asarray(a, dtype=float), np.array([[c, -s], [s, c]]))

    @property
    def dim(self):
        return self.a.size

    def source(self):
        return Ball(np.zeros(self.dim), 1.0)

    target = source

    def _apply(self, X):
        return _T(X, self.a) @ self.rotation.T

    def inverse(self, X):
        return _T(_rows(X, self.dim) @ self.rotation, -self.a)

    def describe(self):
        if self.dim == 2:
            theta = math.atan2(self.rotation[1, 0], self.rotation[0, 0])
            return f"mobius:a={','.join(_num(v) for v in self.a)};theta={_num(theta)}"
        return f"mobius:a={','.join(_num(v) for v in self.a)}"


def _cayley(X):
    """Inversion in the sphere about -e_n of radius sqrt(2), then x_1 -> -x_1 (orientation)."""
    n = X.shape[1]
    E = np.zeros(n)
    E[-1] = 1.0
    V = X + E
    Y = -E + 2.0 * V / np.sum(V * V, axis=1)[:, None]
    Y[:, 0] = -Y[:, 0]
    return Y


@dataclass(frozen=True, eq=False)
class CayleyBallToHalfspace(MapSpec):
    n: int = 2

    @property
    def dim(self):
        return self.n

    def source(self):
        return Ball(np.zeros(self.n), 1.0)

    def target(self):
        return HalfSpace(self.n)

    def _apply(self, X):
        return _cayley(X)

    def inverse(self, X):
        return _cayley(_rows(X, self.n))

    def describe(self):
        return "cayley"


@dataclass(frozen=True, eq=False)
class CayleyHalfspaceToBall(CayleyBallToHalfspace):
    def source(self):
        return HalfSpace(self.n)

    def target(self):
        return Ball(np.zeros(self.n), 1.0)

    def describe(self):
        return "cayley-inv"


@dataclass(frozen=True, eq=False)
class RadialStretch(MapSpec):
    """``x -> |x|^(1/K - 1) x`` on the punctured unit disk; linear dilatation K off the origin."""

    K: float = 2.0
    n: int = 2
    mobius = False

    def __post_init__(self):
        if not self.K >= 1.0:
            raise DomainError("radial stretch needs K >= 1")

    @property
    def dim(self):
        return self.n

    @property
    def K_dilatation(self):
        return float(self.K)

    @property
    def alpha(self):
        return 1.0 / self.K

    def source(self):
        if self.n != 2:
            raise DomainError("radial stretch domain is planar here")
        return CutDisk.punctured()

    target = source

    def _apply(self, X):
        r = np.linalg.norm(X, axis=1)
        return X * (r ** (self.alpha - 1.0))[:, None]

    def inverse(self, X):
        X = _rows(X, self.n)
        r = np.linalg.norm(X, axis=1)
        return X * (r ** (self.K - 1.0))[:, None]

    def describe(self):
        return f"radial:K={_num(self.K)}"


@dataclass(frozen=True, eq=False)
class PlanarAnalytic(MapSpec):
    """Named analytic maps on small disks where they are injective; ``square`` is z -> z^2 on B((1,0), 1/2)."""

    tag: str = "square"
    mobius = False

    def __post_init__(self):
        if self.tag not in ("square",):
            raise DomainError(f"unknown analytic map {self.tag!r}")

    def source(self):
        return Ball(np.array([1.0, 0.0]), 0.5)

    def target(self):
        raise DomainError("image of the square map is not a canonical domain")

    def _apply(self, X):
        z = X[:, 0] + 1j * X[:, 1]
        w = z * z
        return np.stack([w.real, w.imag], axis=1)

    def inverse(self, X):
        X = _rows(X, 2)
        w = np.sqrt(X[:, 0] + 1j * X[:, 1])
        return np.stack([w.real, w.imag], axis=1)

    def describe(self):
        return self.tag


def apply_map(f: MapSpec, x) -> np.ndarray:
    """Image of a single point (or rows) under ``f``."""
    A = np.asarray(x, dtype=float)
    Y = f.apply(A)
    return Y[0] if A.ndim == 1 else Y


def parse_map(text: str) -> MapSpec:
    """``radial:K=2``, ``mobius:a=0.5,0;theta=0.3``, ``cayley``, ``cayley-inv`` or ``square``."""
    head, _, body = text.strip().partition(":")
    params = {}
    for part in filter(None, body.split(";")):
        k, eq, v = part.partition("=")
        if not eq:
            raise DomainError(f"malformed map parameter {part!r}")
        params[k.strip()] = v.strip()
    try:
        if head == "radial":
            return RadialStretch(float(params.get("K", 2.0)))
        if head == "mobius":
            a = np.array([float(t) for t in params.get("a", "0,0").split(",")])
            theta = float(params.get("theta", 0.0))
            if a.size == 2:
                return BallAutomorphism.planar(a, theta)
            return BallAutomorphism(a)
        if head == "cayley":
            return CayleyBallToHalfspace(int(params.get("n", 2)))
        if head == "cayley-inv":
            return CayleyHalfspaceToBall(int(params.get("n", 2)))
        if head == "square":
            return PlanarAnalytic("square")
    except ValueError as exc:
        raise DomainError(f"malformed map {text!r}: {exc}") from None
    raise DomainError(f"unknown map {text!r}")


# ---------------------------------------------------------------------------
# linear dilatation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DilatationEstimate:
    z: tuple
    radii: tuple
    ratios: tuple
    H: float
    converged: bool = True


def linear_dilatation(f: MapSpec, z, radii=(1e-2, 1e-3, 1e-4), directions: int = 720,
                      trend_tol: float = 1e-2) -> DilatationEstimate:
    """``max |f(z+re)-f(z)| / min |f(z+re)-f(z)|`` over directions e, per radius.

    H is the smallest-radius ratio.  ``converged`` is false when the last two
    ratios differ by more than ``trend_tol`` relative to the last one.
    """
    z = as_point(z, f.dim)
    radii = tuple(sorted((float(r) for r in radii), reverse=True))
    src = f.source()
    if not src.contains(z[None])[0]:
        raise DomainError("z must lie in the source domain")
    if radii[0] >= float(src.distance(z[None])[0]):
        raise DomainError("sphere S(z, r) leaves the source domain")
    if f.dim == 2:
        a = 2 * np.pi * np.arange(directions) / directions
        E = np.stack([np.cos(a), np.sin(a)], axis=1)
    else:
        E = np.random.default_rng(0).standard_normal((directions, f.dim))
        E /= np.linalg.norm(E, axis=1)[:, None]
    fz = f.apply(z[None])[0]
    ratios = []
    for r in radii:
        d = np.linalg.norm(f.apply(z + r * E) - fz, axis=1)
        ratios.append(float(d.max() / d.min()))
    conv = len(ratios) < 2 or abs(ratios[-1] - ratios[-2]) <= trend_tol * ratios[-1]
    return DilatationEstimate(tuple(map(float, z)), radii, tuple(ratios), max(ratios[-1], 1.0), conv)


# ---------------------------------------------------------------------------
# distortion checks
# ---------------------------------------------------------------------------


def merge_reports(case: str, domain: str, reports, seed=None) -> VerificationReport:
    """Combine several assertions over the same samples into one report."""
    reports = list(reports)
    worst = max(r.max_violation for r in reports)
    wit: list[Witness] = []
    for r in sorted(reports, key=lambda r: -r.max_violation):
        wit += r.witnesses
    samples = max(r.samples for r in reports)
    return VerificationReport(case, domain, samples, seed, worst, wit[:10])


def _pairs(G: Domain, samples, seed, label, exclude_origin: float = 0.0):
    if isinstance(samples, (int, np.integer)):
        X, Y = sample_pairs(G, int(samples), rng_for(seed, label, G.describe()))
        if exclude_origin > 0:
            # push samples out of the small disk around the origin along their ray
            for A in (X, Y):
                r = np.linalg.norm(A, axis=1)
                small = r < exclude_origin
                if small.any():
                    V = np.where(r[small, None] > 0, A[small] / np.where(r[small] > 0, r[small], 1.0)[:, None],
                                 np.eye(G.dim)[0])
                    A[small] = V * exclude_origin * (1.0 + r[small, None] / exclude_origin)
        return X, Y
    X, Y = samples
    return _rows(X, G.dim), _rows(Y, G.dim)


def _s_with_err(G: Domain, X, Y):
    if isinstance(G, HalfSpace):
        v = s_halfspace_values(X, Y)
        return v, np.full(len(v), CLOSED_FORM_ERR)
    return s_values(G, X, Y, check=False)


def _k_with_err(G: Domain, X, Y):
    return k_values(G, X, Y)


def check_mobius_j_k_distortion(f: MapSpec, G: Domain | None = None, samples=1000, seed: int = 42,
                                metrics=("j", "k")) -> VerificationReport:
    """``m_G/2 <= m_G'(f x, f y) <= 2 m_G`` for m in {j, k}, G' the image domain."""
    if not f.mobius:
        raise DomainError("distortion check needs a Möbius map")
    G = G or f.source()
    Gi = f.target()
    X, Y = _pairs(G, samples, seed, "mobius-jk")
    FX, FY = f.apply(X, check=False), f.apply(Y, check=False)
    reps = []
    for m in metrics:
        if m == "j":
            a, b = j_values(G, X, Y), j_values(Gi, FX, FY)
            ea = eb = np.full(len(X), CLOSED_FORM_ERR)
        elif m == "k":
            a, ea = _k_with_err(G, X, Y)
            b, eb = _k_with_err(Gi, FX, FY)
        else:
            raise ValueError(f"unsupported metric {m!r}")
        reps.append(assess(f"{m}-lower", G.describe(), X, Y, a / 2, b, ea / 2 + eb + BASE_SLACK, seed))
        reps.append(assess(f"{m}-upper", G.describe(), X, Y, b, 2 * a, eb + 2 * ea + BASE_SLACK, seed))
    return merge_reports("mobius-jk", f"{f.describe()} on {G.describe()}", reps, seed)


def _g(s):
    return 2.0 * s / (1.0 + s * s)


def check_s_mobius_bound(f: MapSpec, samples=1000, seed: int = 42) -> VerificationReport:
    """``s_G(f x, f y) <= 2 s / (1 + s^2)`` with ``s = s_B(x, y)``, G the ball or half-space."""
    if not f.mobius:
        raise DomainError("bound applies to Möbius maps")
    B = f.source()
    if not (type(B) is Ball):
        raise DomainError("source must be the unit ball")
    X, Y = _pairs(B, samples, seed, "s-mobius")
    FX, FY = f.apply(X, check=False), f.apply(Y, check=False)
    s, es = _s_with_err(B, X, Y)
    t, et = _s_with_err(f.target(), FX, FY)
    rhs = _g(s)
    erhs = np.abs(_g(np.minimum(s + es, 1.0)) - rhs)
    return assess("s-mobius", f"{f.describe()} on {B.describe()}", X, Y, t, rhs, et + erhs + BASE_SLACK, seed)


def _p_lower(p):
    return p / (1.0 + np.sqrt(np.maximum(1.0 - p * p, 0.0)))


def check_p_mobius_bounds(f: MapSpec, part: int, samples=1000, seed: int = 42) -> VerificationReport:
    """Two-sided bounds for ``p`` under Möbius maps between the ball and half-space.

    part 1: ball to half-space, ``p_B <= p_H(f x, f y) <= 2p_B/(1+p_B^2)``;
    part 2: ball to ball, ``p_B/(1+sqrt(1-p_B^2)) <= p_B(f x, f y) <= 2p_B/(1+p_B^2)``;
    part 3: half-space to ball, same window with ``p = p_H(x, y)``.
    """
    if not f.mobius:
        raise DomainError("bounds apply to Möbius maps")
    src, tgt = f.source(), f.target()
    kinds = {1: (Ball, HalfSpace), 2: (Ball, Ball), 3: (HalfSpace, Ball)}
    if part not in kinds:
        raise ValueError("part must be 1, 2 or 3")
    ks, kt = kinds[part]
    if not (isinstance(src, ks) and isinstance(tgt, kt)):
        raise DomainError(f"part {part} needs a map from {ks.__name__} to {kt.__name__}")
    X, Y = _pairs(src, samples, seed, f"p-mobius-{part}")
    FX, FY = f.apply(X, check=False), f.apply(Y, check=False)
    p = p_values(src, X, Y)
    q = p_values(tgt, FX, FY)
    lo = p if part == 1 else _p_lower(p)
    sl = 3 * CLOSED_FORM_ERR + BASE_SLACK
    reps = [assess(f"p-mobius-{part}-lower", src.describe(), X, Y, lo, q, sl, seed),
            assess(f"p-mobius-{part}-upper", src.describe(), X, Y, q, _g(p), sl, seed)]
    return merge_reports(f"p-mobius-{part}", f"{f.describe()} on {src.describe()}", reps, seed)


GROTZSCH_LAMBDA_2 = 4.0


def check_qr_holder_bound(f: RadialStretch, samples=1000, seed: int = 42, lam: float = GROTZSCH_LAMBDA_2,
                          min_radius: float = 1e-3) -> VerificationReport:
    """``s_B(f x, f y) <= lam^(1-a) (2s/(1+s^2))^a`` with ``a = 1/K`` and ``s = s_B(x, y)`` in the plane."""
    if not isinstance(f, RadialStretch) or f.dim != 2:
        raise DomainError("Hölder check is for the planar radial stretch")
    B = Ball(np.zeros(2), 1.0)
    X, Y = _pairs(B, samples, seed, "qr-holder", exclude_origin=min_radius)
    if np.any(np.linalg.norm(X, axis=1) == 0) or np.any(np.linalg.norm(Y, axis=1) == 0):
        raise DomainError("sample at the origin")
    FX, FY = f.apply(X, check=False), f.apply(Y, check=False)
    s, es = s_values(B, X, Y, check=False)
    t, et = s_values(B, FX, FY, check=False)
    a = f.alpha

    def rhs_of(v):
        return lam ** (1.0 - a) * _g(v) ** a

    rhs = rhs_of(s)
    erhs = np.abs(rhs_of(np.minimum(s + es, 1.0)) - rhs)
    return assess("qr-holder", f"{f.describe()} on {B.describe()}", X, Y, t, rhs, et + erhs + BASE_SLACK, seed)


def _metric_values(kind: MetricKind, G: Domain, X, Y):
    kind = MetricKind(kind)
    if kind is MetricKind.J:
        return j_values(G, X, Y)
    if kind is MetricKind.JSTAR:
        from .closed_forms import jstar_values

        return jstar_values(G, X, Y)
    if kind is MetricKind.P:
        return p_values(G, X, Y)
    if kind is MetricKind.RHO:
        return rho_values(G, X, Y)
    if kind is MetricKind.S:
        return s_values(G, X, Y, check=False)[0]
    if kind is MetricKind.K:
        return k_values(G, X, Y)[0]
    raise DomainError(f"metric {kind.value} not supported here")


def empirical_bilipschitz_constant(f: MapSpec, metric, G: Domain | None = None, samples=1000,
                                   seed: int = 42) -> float:
    """``max(m'(fx,fy)/m(x,y), m(x,y)/m'(fx,fy))`` over sampled pairs."""
    G = G or f.source()
    X, Y = _pairs(G, samples, seed, f"bilip-{MetricKind(metric).value}")
    if np.any(np.all(X == Y, axis=1)):
        raise DomainError("coincident pair in sample set")
    FX, FY = f.apply(X, check=False), f.apply(Y, check=False)
    a = _metric_values(metric, G, X, Y)
    b = _metric_values(metric, f.target(), FX, FY)
    return float(np.max(np.maximum(b / a, a / b)))
