"""Command-line front end: metric queries, verification runs, constants and estimators.

Exit codes: 0 success or all checks passed, 1 a verification failed, 2 usage error.
Human-readable output starts with ``#`` header lines echoing the effective settings.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from .boundary_sup import SupSolverConfig, s_metric, v_metric
from .closed_forms import MetricKind, j_metric, j_star, p_function, rho
from .conformal import linear_dilatation, parse_map
from .geom import DomainError, HalfSpace, _num, as_point, parse_domain
from .harness import SUITES, case_ids, emit_report, get_case, run_suite
from .quasihyperbolic import GeodesicGraphConfig, k_exact_halfspace, k_numeric
from .special_domains import h_delta_check, nonlinearity_delta_estimate, strip_constant, strip_minimizer

DEFAULT_SEED = 42


class UsageError(Exception):
    pass


def _point(text: str, dim: int, flag: str) -> np.ndarray:
    try:
        return as_point([float(t) for t in text.split(",")], dim)
    except (ValueError, DomainError) as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _domain(text: str, flag: str = "--domain"):
    try:
        return parse_domain(text)
    except DomainError as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _header(**kw):
    for k, v in kw.items():
        print(f"# {k}={v}")


def _cmd_dist(a) -> int:
    G = _domain(a.domain)
    x = _point(a.x, G.dim, "--x")
    y = _point(a.y, G.dim, "--y")
    kind = MetricKind(a.metric)
    _header(command="dist", domain=G.describe(), metric=kind.value, x=a.x, y=a.y)
    if kind is MetricKind.RHO:
        val = rho(G, x, y)
    elif kind is MetricKind.J:
        val = j_metric(G, x, y)
    elif kind is MetricKind.JSTAR:
        val = j_star(G, x, y)
    elif kind is MetricKind.P:
        val = p_function(G, x, y)
    elif kind in (MetricKind.S, MetricKind.V):
        cfg = SupSolverConfig()
        if a.grid is not None:
            cfg = replace(cfg, coarse_samples_per_segment=a.grid)
        if a.refine is not None:
            cfg = replace(cfg, refinement=a.refine)
        _header(grid=cfg.coarse_samples_per_segment, refine=cfg.refinement)
        val = (s_metric if kind is MetricKind.S else v_metric)(G, x, y, cfg)
    else:
        if isinstance(G, HalfSpace):
            val = k_exact_halfspace(x, y)
        else:
            cfg = GeodesicGraphConfig()
            if a.resolution is not None:
                cfg = replace(cfg, base_resolution=a.resolution)
            if a.refine is not None:
                cfg = replace(cfg, refinement_levels=a.refine)
            _header(resolution=cfg.base_resolution, refine=cfg.refinement_levels)
            val = k_numeric(G, x, y, cfg)
    print(_num(val.value))
    print(f"# error_bound={_num(val.error_bound)}")
    return 0


def _cmd_verify(a) -> int:
    if a.suite not in SUITES:
        try:
            get_case(a.suite)
        except KeyError:
            raise UsageError(f"--suite: unknown suite or case {a.suite!r}") from None
    _header(command="verify", suite=a.suite, samples=a.samples, seed=a.seed, threads=a.threads,
            format=a.format, out=a.out or "-")
    reports = run_suite(a.suite, a.samples, a.seed, threads=a.threads)
    if a.out:
        emit_report(reports, a.format, a.out)
    for r in reports:
        print(f"{r.verdict:4s} {r.case:28s} {r.domain:32s} n={r.samples} max_violation={_num(r.max_violation)}")
    failed = sum(not r.passed for r in reports)
    print(f"# reports={len(reports)} failed={failed}")
    return 1 if failed else 0


def _cmd_constant(a) -> int:
    if a.name != "strip-C":
        raise UsageError(f"name: unknown constant {a.name!r}")
    _header(command="constant", name=a.name, tol=a.tol)
    print(_num(strip_constant(a.tol)))
    print(f"# minimizer_t={_num(strip_minimizer(a.tol))}")
    return 0


def _cmd_dilatation(a) -> int:
    try:
        f = parse_map(a.map)
    except DomainError as exc:
        raise UsageError(f"--map: {exc}") from None
    z = _point(a.z, f.dim, "--z")
    try:
        radii = tuple(float(t) for t in a.radii.split(","))
    except ValueError:
        raise UsageError(f"--radii: bad list {a.radii!r}") from None
    _header(command="dilatation", map=f.describe(), z=a.z, radii=a.radii, directions=a.directions)
    est = linear_dilatation(f, z, radii, a.directions)
    for r, q in zip(est.radii, est.ratios):
        print(f"# r={_num(r)} ratio={_num(q)}")
    print(_num(est.H))
    if not est.converged:
        print("# warning: ratios not settled across radii")
    return 0


def _cmd_estimate_delta(a) -> int:
    G = _domain(a.domain)
    _header(command="estimate-delta", domain=G.describe(), trials=a.trials, seed=a.seed)
    print(_num(nonlinearity_delta_estimate(G, a.trials, a.seed)))
    return 0


def _cmd_check_hdelta(a) -> int:
    G = _domain(a.domain)
    if not 0.0 < a.delta < 1.0:
        raise UsageError("--delta: must lie in (0, 1)")
    _header(command="check-hdelta", domain=G.describe(), delta=a.delta, trials=a.trials, seed=a.seed)
    res = h_delta_check(G, a.delta, a.trials, a.seed)
    fails = [w for w in res if not w.passed]
    for w in fails[:10]:
        print(f"fail z={','.join(_num(c) for c in w.z)} r={_num(w.r)} margin={_num(w.margin)}")
    print(f"# trials={len(res)} failed={len(fails)}")
    return 1 if fails else 0


def build_parser() -> argparse.ArgumentParser:
    epilog = "registry cases:\n  " + "\n  ".join(case_ids())
    p = argparse.ArgumentParser(prog="hypmetrics", description=__doc__.splitlines()[0], epilog=epilog,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dist", help="one metric value for a pair")
    d.add_argument("--domain", required=True)
    d.add_argument("--metric", required=True, choices=[k.value for k in MetricKind])
    d.add_argument("--x", required=True)
    d.add_argument("--y", required=True)
    d.add_argument("--grid", type=int, help="coarse boundary samples per piece (s, v)")
    d.add_argument("--resolution", type=int, help="base grid resolution (k)")
    d.add_argument("--refine", type=int, help="golden-section iterations (s, v) or grid refinements (k)")

    v = sub.add_parser("verify", help="run a verification suite", epilog=epilog,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    v.add_argument("--suite", default="all", help=f"one of {', '.join(SUITES)} or a case id")
    v.add_argument("--samples", type=int, default=1000)
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--out")
    v.add_argument("--format", choices=["json", "csv"], default="json")
    v.add_argument("--threads", type=int, default=1)

    c = sub.add_parser("constant", help="computed constants")
    c.add_argument("name", help="strip-C")
    c.add_argument("--tol", type=float, default=1e-10)

    g = sub.add_parser("dilatation", help="linear dilatation of a map at a point")
    g.add_argument("--map", required=True)
    g.add_argument("--z", required=True)
    g.add_argument("--radii", default="1e-2,1e-3,1e-4")
    g.add_argument("--directions", type=int, default=720)

    e = sub.add_parser("estimate-delta", help="empirical nonlinearity constant of a polygon")
    e.add_argument("--domain", required=True)
    e.add_argument("--trials", type=int, default=2000)
    e.add_argument("--seed", type=int, default=DEFAULT_SEED)

    h = sub.add_parser("check-hdelta", help="search exterior balls of radius delta r")
    h.add_argument("--domain", required=True)
    h.add_argument("--delta", type=float, default=0.45)
    h.add_argument("--trials", type=int, default=1000)
    h.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return p


_COMMANDS = {
    "dist": _cmd_dist,
    "verify": _cmd_verify,
    "constant": _cmd_constant,
    "dilatation": _cmd_dilatation,
    "estimate-delta": _cmd_estimate_delta,
    "check-hdelta": _cmd_check_hdelta,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[a.command](a)
    except UsageError as exc:
        print(f"hypmetrics {a.command}: error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"hypmetrics {a.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
