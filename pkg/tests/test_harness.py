from __future__ import annotations

import csv
import io
import json
import math

import numpy as np
import pytest

from hypmetrics.boundary_sup import v_oracle, v_values
from hypmetrics.closed_forms import jstar_values
from hypmetrics.geom import Ball, DomainError, HalfSpace, KochPolygon, PuncturedSpace, Strip, unit_square
from hypmetrics.harness import (PairBatch, _evaluate, _sample, case_ids, emit_report, get_case, registry,
                                run_case, run_registry, run_suite, sharpness_suite, suite_domains)
from hypmetrics.report import VerificationReport, Witness, assess
from hypmetrics.sampling import rng_for, sample_pairs


def test_registry_shape():
    cases = registry()
    assert len(cases) >= 18
    assert len(set(case_ids())) == len(cases)
    for c in cases:
        assert c.anchor.strip()
        assert c.section in ("2", "3")
    with pytest.raises(KeyError):
        get_case("no-such-case")


def test_convex_cases_reject_punctured_space():
    P = PuncturedSpace(np.zeros(2))
    convex = [c for c in registry() if c.scope_label == "convex"]
    assert convex
    for c in convex:
        assert not c.in_scope(P)
        with pytest.raises(DomainError):
            run_case(c, P, 10)


def test_every_case_has_an_in_scope_suite_domain():
    doms = suite_domains()
    for c in registry():
        assert any(c.in_scope(G) for G in doms), c.id


def test_jstar_le_s_on_ball():
    r = run_case(get_case("jstar-le-s"), Ball(np.zeros(2), 1.0), 10_000, seed=42)
    assert r.passed and r.samples == 10_000 and r.max_violation <= 0


def test_s_le_2jstar_equality_at_antipodal_pair():
    P = PuncturedSpace(np.zeros(2))
    c = get_case("s-le-2jstar")
    batch = PairBatch(P, [[0.6, 0.8]], [[-0.6, -0.8]])
    a, ea = _evaluate(c.lhs, batch)
    b, eb = _evaluate(c.rhs, batch)
    assert a[0] == pytest.approx(1.0, abs=1e-12)
    assert b[0] == pytest.approx(1.0, abs=1e-12)
    assert a[0] <= b[0] + ea[0] + eb[0] + 1e-9


def test_degenerate_pair_gives_zero_sides():
    G = Ball(np.zeros(2), 1.0)
    batch = PairBatch(G, [[0.2, 0.3]], [[0.2, 0.3]])
    for cid in ("jstar-le-s", "s-le-2jstar", "jstar-le-p", "ball-chain-1"):
        c = get_case(cid)
        a, _ = _evaluate(c.lhs, batch)
        b, _ = _evaluate(c.rhs, batch)
        assert a[0] == pytest.approx(0.0, abs=1e-15) and b[0] == pytest.approx(0.0, abs=1e-15)


def test_assess_counts_nonfinite_as_failure():
    r = assess("x", "d", np.zeros((2, 2)), np.zeros((2, 2)), [0.0, np.nan], [1.0, 1.0], 0.0)
    assert not r.passed
    assert r.witnesses


def test_sharpness_suite_passes():
    reps = sharpness_suite()
    assert reps and all(r.passed for r in reps)
    names = {r.case for r in reps}
    assert {"sharp-a-s-t3", "sharp-b-p-r0.7", "sharp-d-strip-C", "sharp-e-s1-v"} <= names


@pytest.mark.parametrize("G", [Ball(np.zeros(2), 1.0), HalfSpace(2), Strip(), unit_square(),
                               PuncturedSpace(np.zeros(2)), KochPolygon(4)], ids=lambda G: G.describe())
def test_strata_fractions(G):
    X, Y = sample_pairs(G, 10_000, rng_for(42, G.describe(), "standard"))
    scale = G.scale
    near_bd = np.minimum(G.distance(X), G.distance(Y)) < 0.01 * scale
    near_co = np.linalg.norm(X - Y, axis=1) < 0.01 * scale
    assert near_bd.mean() >= 0.10
    assert near_co.mean() >= 0.10
    assert G.contains(X).all() and G.contains(Y).all()


def test_local_and_kz_samplers_respect_their_balls():
    G = Ball(np.zeros(2), 1.0)
    X, Y, _ = _sample(G, "local:0.5", 2000, 1)
    assert np.all(np.linalg.norm(Y - X, axis=1) < 0.5 * G.distance(X))
    X, Y, ex = _sample(G, "kz:0.5", 2000, 1)
    for A in (X, Y):
        assert np.all(np.linalg.norm(A - ex["z"], axis=1) < 0.5 * ex["dz"])


def test_sampling_is_deterministic():
    a = run_registry([get_case("jstar-le-p"), get_case("s-ge-sin-half-v")], 300, [7])
    b = run_registry([get_case("jstar-le-p"), get_case("s-ge-sin-half-v")], 300, [7], threads=2)
    assert emit_report(a) == emit_report(b)


def test_registry_small_run_all_pass():
    reps = run_suite("all", samples=300, seed=3)
    bad = [(r.case, r.domain, r.max_violation) for r in reps if not r.passed]
    assert not bad


def test_emit_report_empty_and_single(tmp_path):
    assert json.loads(emit_report([])) == []
    rows = list(csv.reader(io.StringIO(emit_report([], "csv"))))
    assert rows == [["case", "domain", "samples", "seed", "max_violation", "verdict", "witnesses"]]
    r = VerificationReport("c", "ball:c=0,0;r=1", 3, 42, 0.25,
                           [Witness((0.1, 0.2), (0.3, 0.4), 1.0, 0.75)])
    path = tmp_path / "r.json"
    text = emit_report([r], "json", path)
    assert path.read_text() == text
    (rec,) = json.loads(text)
    assert set(rec) == {"case", "domain", "samples", "seed", "max_violation", "witnesses", "verdict"}
    assert rec["verdict"] == "fail"
    assert rec["witnesses"][0] == {"x": [0.1, 0.2], "y": [0.3, 0.4], "lhs": 1.0, "rhs": 0.75}
    with pytest.raises(ValueError):
        emit_report([r], "xml")


def test_csv_and_json_agree_to_12_digits():
    reps = run_suite("sharpness") + run_registry([get_case("jstar-le-s")], 200, [1])
    reps.append(VerificationReport("w", "d", 1, 1, -1 / 3, [Witness((1 / 7, 2 / 3), (0.1, 0.2), math.pi, math.e)]))
    js = json.loads(emit_report(reps, "json"))
    rows = list(csv.DictReader(io.StringIO(emit_report(reps, "csv"))))
    assert len(js) == len(rows)
    for j, c in zip(js, rows):
        assert c["case"] == j["case"] and c["verdict"] == j["verdict"]
        assert float(c["max_violation"]) == j["max_violation"]
        if j["witnesses"]:
            parts = c["witnesses"].split(";")[0].split("|")
            w = j["witnesses"][0]
            assert [float(t) for t in parts[0].split()] == w["x"]
            assert float(parts[2]) == w["lhs"] and float(parts[3]) == w["rhs"]
    last = js[-1]
    assert last["max_violation"] == float(format(-1 / 3, ".12g"))


def test_hdelta_literal_form_fails_beyond_right_angle():
    # Near-boundary mirror pair in the unit disk: v exceeds pi/2 and the literal bound
    # sin v >= (delta/2) j* fails, while the bound on min(v, pi/2) holds.
    B = Ball(np.zeros(2), 1.0)
    a, eps = 0.1, 1e-3
    x = np.array([[math.cos(a), math.sin(a)]]) * (1 - eps)
    y = x * np.array([1.0, -1.0])
    v = v_values(B, x, y)[0][0]
    assert v == pytest.approx(v_oracle(B, x[0], y[0], 1_000_000), abs=1e-5)
    assert v > math.pi / 2
    js = jstar_values(B, x, y)[0]
    assert math.sin(v) < 0.225 * js - 1e-3
    assert math.sin(min(v, math.pi / 2)) >= 0.225 * js
    case = get_case("hdelta-sin-v")
    batch = PairBatch(B, x, y)
    lhs, el = _evaluate(case.lhs, batch)
    rhs, er = _evaluate(case.rhs, batch)
    assert lhs[0] <= rhs[0] + el[0] + er[0] + 1e-9
