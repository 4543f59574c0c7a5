"""Smoke test for the pyharmonia extension.

Build and install it first:

    pip install --no-build-isolation -e crates/py

then run ``python python/smoke_test.py`` (or under pytest).
"""

import json
import math
from pathlib import Path

import numpy as np

import pyharmonia as h

DATA = Path(__file__).resolve().parent.parent / "data"


def test_polynomial_roots():
    # (z - 1)^2 (z + 2i), expanded with numpy as an independent check
    coeffs = np.polynomial.polynomial.polyfromroots([1, 1, -2j])
    p = h.Polynomial(list(coeffs))
    assert p.degree == 3
    roots = sorted(p.roots(), key=lambda r: r[1])
    assert roots[0][1] == 1 and abs(roots[0][0] + 2j) < 1e-10
    assert roots[1][1] == 2 and abs(roots[1][0] - 1) < 1e-10
    assert abs(p(0.5) - np.polyval(coeffs[::-1], 0.5)) < 1e-12


def test_harmonic_graph():
    s = h.Surface.harmonic_graph(33)
    assert abs(s.qc_constant() - math.sqrt(5)) < 1e-9
    assert s.hopf() == [0, 0, 1]
    assert abs(s.curvature_induced(0) + 4) < 1e-9
    # the graph (u, v, u^2 - v^2): E = 1 + 4u^2, F = -4uv, G = 1 + 4v^2
    u, v = 0.3, -0.2
    e, f, g = s.metric(complex(u, v))
    assert np.allclose([e, f, g], [1 + 4 * u * u, -4 * u * v, 1 + 4 * v * v])
    x = s.position(complex(u, v))
    assert np.allclose(x, [u, v, u * u - v * v])


def test_enneper_from_config():
    s = h.Surface.from_json((DATA / "enneper.json").read_text())
    assert s.dimension == 3
    assert abs(s.qc_constant() - 1) < 1e-12
    z = 0.4 + 0.1j
    assert abs(s.curvature_klotz(z) + 4 / (1 + abs(z) ** 2) ** 4) < 1e-9
    again = h.Surface.from_json(s.to_json())
    assert again.hopf() == s.hopf()


def test_errors():
    try:
        h.Surface([[1], [1], []]).qc_constant()
    except h.DegenerateError:
        pass
    else:
        raise AssertionError("expected a degenerate surface")
    try:
        h.Hyperplane([0, 0])
    except h.HarmoniaError:
        pass
    else:
        raise AssertionError("expected a zero normal to be rejected")


def test_nochka_and_defects():
    planes = [h.Hyperplane(p["normal_c"]) for p in _planes("five_planes.json")]
    omega, theta = h.nochka_weights(planes, 2)
    assert np.allclose(omega, 1) and abs(theta - 1) < 1e-9
    assert h.check_nochka_weights(planes, omega, theta, 2) == [True] * 4
    bad = [0.5] + omega[1:]
    assert h.check_nochka_weights(planes, bad, theta, 2)[1] is False

    line = [h.Hyperplane(p["normal_c"]) for p in _planes("line_planes.json")]
    deltas, total, bound = h.defects([[1], [0, 1]], line)
    assert deltas == [1, 0, 0] and total == 1 and bound == 2


def test_geodesics():
    flat = h.Surface([[0.5], [-0.5j], []], resolution=129)
    assert abs(flat.distance_to_boundary(0) - 1) < 0.03
    graph = h.Surface.harmonic_graph(65)
    assert graph.distance_to_boundary(0, "klotz") > graph.distance_to_boundary(0)
    dirs = [[math.cos(2 * math.pi * i / 7), math.sin(2 * math.pi * i / 7), 0.1] for i in range(7)]
    c, c_gamma = graph.curvature_scan(dirs)
    assert 0 < c < math.inf and 0 < c_gamma < math.inf


def test_verify_subset():
    outcomes = h.verify("nochka", seed=42)
    assert [o[0] for o in outcomes] == [8]
    assert all(o[3] for o in outcomes), outcomes


def _planes(name):
    raw = json.loads((DATA / name).read_text())
    return [{"normal_c": [complex(*c) for c in p["normal"]]} for p in raw]


if __name__ == "__main__":
    tests = [(n, f) for n, f in sorted(globals().items()) if n.startswith("test_")]
    for name, f in tests:
        f()
        print(f"ok {name}")
    print(f"{len(tests)} passed")
