"""Shared fixtures: small hand-built metrics used across the test suite.

These are constructed directly from expression strings (independently of
the metric-file loader, which has its own tests) so that low-level
modules can be exercised before the I/O layer exists.
"""

import math

import numpy as np
import pytest

from curvlab.expressions import ZERO, parse_expr
from curvlab.geometry import MetricField, SymbolicTensor
from curvlab.newman_penrose import NullTetrad

PI = math.pi


def vector_field(m, strings):
    """Contravariant vector field from four component strings."""
    comp = np.array([parse_expr(s, m.chart, tuple(m.params)) for s in strings],
                    dtype=object)
    return SymbolicTensor(comp, ("u",))


def metric_from_strings(name, chart, diag_or_entries, params=None,
                        points=None, **kw):
    """Build a MetricField from {(i, j): "expr"} (upper triangle) or a
    4-element diagonal list of strings."""
    params = params or {}
    entries = {}
    if isinstance(diag_or_entries, (list, tuple)):
        for i, text in enumerate(diag_or_entries):
            entries[(i, i)] = text
    else:
        entries = dict(diag_or_entries)
    g = [[ZERO for _ in range(4)] for _ in range(4)]
    for (i, j), text in entries.items():
        g[i][j] = parse_expr(text, chart, params)
    return MetricField(name, chart, g, params=params, points=points, **kw)


@pytest.fixture(scope="session")
def minkowski():
    return metric_from_strings(
        "minkowski", ("t", "x", "y", "z"), ["1", "-1", "-1", "-1"],
        points={"origin": (0.0, 0.0, 0.0, 0.0),
                "p1": (1.0, 2.0, -0.5, 3.0)})


@pytest.fixture(scope="session")
def schwarzschild():
    return metric_from_strings(
        "schwarzschild", ("t", "r", "theta", "phi"),
        ["1 - 2*M/r", "-1/(1 - 2*M/r)", "-r^2", "-r^2*sin(theta)^2"],
        params={"M": 1.0},
        points={"p0": (0.0, 4.0, PI / 3, 0.0),
                "p1": (0.0, 3.0, 1.0, 2.0),
                "p2": (1.0, 5.0, 2.0, 1.0),
                "p3": (0.5, 6.0, 0.8, 0.3),
                "p4": (2.0, 8.0, 1.2, 4.0)})


@pytest.fixture(scope="session")
def nariai():
    # product of 2d de Sitter (unit curvature) with the unit round sphere
    return metric_from_strings(
        "nariai", ("t", "x", "theta", "phi"),
        ["1", "-cosh(t)^2", "-1", "-sin(theta)^2"],
        points={"p0": (0.3, 0.0, 1.0, 0.0),
                "p1": (0.0, 1.0, 0.7, 0.2),
                "p2": (-0.4, 0.5, 1.9, 3.0),
                "p3": (0.8, -1.0, 2.2, 1.5),
                "p4": (0.1, 0.2, 1.3, 5.0)})


@pytest.fixture(scope="session")
def ppwave():
    # plane-fronted wave, amplitude 2 x^2 (1 + u): curvature is quadratic
    # in x and linear in u, so second derivatives are non-trivial
    return metric_from_strings(
        "ppwave", ("u", "v", "x", "y"),
        {(0, 0): "2*x^2*(1 + u)", (0, 1): "1",
         (2, 2): "-1", (3, 3): "-1"},
        points={"p0": (0.5, 0.0, 1.0, 0.5),
                "p1": (0.0, 1.0, 0.8, -0.2),
                "p2": (1.5, -0.3, 1.2, 0.0),
                "p3": (-0.5, 0.0, 2.0, 1.0),
                "p4": (0.2, 0.4, -1.0, 0.6)})


@pytest.fixture(scope="session")
def ppwave_u2():
    # vacuum wave with amplitude (x^2 - y^2) u^2: curvature grows like u^2,
    # so its second u-derivative is a nonzero constant
    return metric_from_strings(
        "ppwave_u2", ("u", "v", "x", "y"),
        {(0, 0): "(x^2 - y^2)*u^2", (0, 1): "1",
         (2, 2): "-1", (3, 3): "-1"},
        points={"p0": (1.0, 0.0, 1.0, 0.5),
                "p1": (0.5, 0.0, 0.3, -0.8),
                "p2": (2.0, 1.0, -0.6, 0.4),
                "p3": (-1.0, 0.2, 0.9, 1.1),
                "p4": (1.5, -0.5, 1.3, 0.2)})


@pytest.fixture(scope="session")
def product2x2():
    # Lorentzian 2-factor (t, x) times Riemannian 2-factor (y, z), both
    # with non-constant curvature
    return metric_from_strings(
        "product2x2", ("t", "x", "y", "z"),
        ["1 + x^2", "-1", "-1", "-(2 + sin(y))^2"],
        points={"p0": (0.0, 0.5, 0.3, 0.0),
                "p1": (1.0, -0.7, 1.2, 2.0),
                "p2": (0.2, 1.5, -0.4, 1.0),
                "p3": (-0.6, 0.9, 2.5, 0.7),
                "p4": (0.4, 0.1, 0.9, -1.3)})


@pytest.fixture(scope="session")
def curved_metrics(schwarzschild, nariai, ppwave, product2x2):
    return [schwarzschild, nariai, ppwave, product2x2]


@pytest.fixture(scope="session")
def all_metrics(minkowski, curved_metrics):
    return [minkowski] + curved_metrics


@pytest.fixture(scope="session")
def metric_map(minkowski, schwarzschild, nariai, ppwave, ppwave_u2,
               product2x2):
    return {m.name: m for m in (minkowski, schwarzschild, nariai, ppwave,
                                ppwave_u2, product2x2)}


@pytest.fixture(scope="session")
def null_pairs(minkowski, schwarzschild, nariai, ppwave, product2x2):
    """Adapted (k, l) null pairs with k·l = 1 for each fixture metric."""
    return {
        "minkowski": (
            vector_field(minkowski, ["1/sqrt(2)", "1/sqrt(2)", "0", "0"]),
            vector_field(minkowski, ["1/sqrt(2)", "-1/sqrt(2)", "0", "0"])),
        "schwarzschild": (
            vector_field(schwarzschild, ["1/(1 - 2*M/r)", "1", "0", "0"]),
            vector_field(schwarzschild, ["1/2", "-(1 - 2*M/r)/2", "0", "0"])),
        "nariai": (
            vector_field(nariai, ["1/sqrt(2)", "1/(sqrt(2)*cosh(t))", "0", "0"]),
            vector_field(nariai, ["1/sqrt(2)", "-1/(sqrt(2)*cosh(t))", "0", "0"])),
        "ppwave": (
            vector_field(ppwave, ["0", "1", "0", "0"]),
            vector_field(ppwave, ["1", "-x^2*(1 + u)", "0", "0"])),
        "product2x2": (
            vector_field(product2x2,
                         ["1/(sqrt(2)*sqrt(1 + x^2))", "1/sqrt(2)", "0", "0"]),
            vector_field(product2x2,
                         ["1/(sqrt(2)*sqrt(1 + x^2))", "-1/sqrt(2)", "0", "0"])),
    }


def tetrad_from_strings(m, k, l, m_re, m_im):
    return NullTetrad(vector_field(m, k), vector_field(m, l),
                      vector_field(m, m_re), vector_field(m, m_im))


@pytest.fixture(scope="session")
def tetrads(minkowski, schwarzschild, nariai, ppwave, ppwave_u2, product2x2):
    """Full null tetrads (k, l, m) adapted to each fixture metric."""
    return {
        "minkowski": tetrad_from_strings(
            minkowski,
            ["1/sqrt(2)", "1/sqrt(2)", "0", "0"],
            ["1/sqrt(2)", "-1/sqrt(2)", "0", "0"],
            ["0", "0", "1/sqrt(2)", "0"],
            ["0", "0", "0", "1/sqrt(2)"]),
        "schwarzschild": tetrad_from_strings(
            schwarzschild,
            ["1/(1 - 2*M/r)", "1", "0", "0"],
            ["1/2", "-(1 - 2*M/r)/2", "0", "0"],
            ["0", "0", "1/(sqrt(2)*r)", "0"],
            ["0", "0", "0", "1/(sqrt(2)*r*sin(theta))"]),
        "nariai": tetrad_from_strings(
            nariai,
            ["1/sqrt(2)", "1/(sqrt(2)*cosh(t))", "0", "0"],
            ["1/sqrt(2)", "-1/(sqrt(2)*cosh(t))", "0", "0"],
            ["0", "0", "1/sqrt(2)", "0"],
            ["0", "0", "0", "1/(sqrt(2)*sin(theta))"]),
        "ppwave": tetrad_from_strings(
            ppwave,
            ["0", "1", "0", "0"],
            ["1", "-x^2*(1 + u)", "0", "0"],
            ["0", "0", "1/sqrt(2)", "0"],
            ["0", "0", "0", "1/sqrt(2)"]),
        "ppwave_u2": tetrad_from_strings(
            ppwave_u2,
            ["0", "1", "0", "0"],
            ["1", "-(x^2 - y^2)*u^2/2", "0", "0"],
            ["0", "0", "1/sqrt(2)", "0"],
            ["0", "0", "0", "1/sqrt(2)"]),
        "product2x2": tetrad_from_strings(
            product2x2,
            ["1/(sqrt(2)*sqrt(1 + x^2))", "1/sqrt(2)", "0", "0"],
            ["1/(sqrt(2)*sqrt(1 + x^2))", "-1/sqrt(2)", "0", "0"],
            ["0", "0", "1/sqrt(2)", "0"],
            ["0", "0", "0", "1/(sqrt(2)*(2 + sin(y)))"]),
    }
