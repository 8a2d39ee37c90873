from __future__ import annotations

import numpy as np
import pytest

from hypmetrics.geom import Ball, HalfSpace, KochPolygon, PuncturedSpace, Strip, unit_square


def all_domains():
    return [
        Ball(np.zeros(2), 1.0),
        Ball(np.array([0.5, -1.0]), 2.0),
        Ball(np.zeros(3), 1.0),
        HalfSpace(2),
        HalfSpace(3),
        Strip(),
        unit_square(),
        PuncturedSpace(np.zeros(2)),
        KochPolygon(3),
    ]


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
