import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbgrowth.constructions import complete_lobe, petersen_lobe, product_wreath, tree_of_lobes
from orbgrowth.growth import (
    GOLDEN_RATIO,
    SequenceView,
    Witness,
    average_subdegree,
    classify,
    classify_view,
    subexponential_witness,
    verify_growth_bounds,
)
from orbgrowth.lazy import expand
from orbgrowth.suborbits import subdegree_sequences, suborbit_partition


def view_of(graph, radius):
    table = expand(graph, radius)
    _, view = subdegree_sequences(suborbit_partition(graph, table), radius)
    return table, view


@pytest.fixture(scope="module")
def tri():
    return tree_of_lobes(2, complete_lobe(3))


@pytest.fixture(scope="module")
def prod(tri):
    return product_wreath(tri, 2)


# -- classify ------------------------------------------------------------


@pytest.mark.parametrize("base", [1.5, 2.0, 5.0])
def test_geometric_base(base):
    rep = classify([base**r for r in range(1, 13)])
    assert rep.cls == "exponential"
    assert abs(rep.base - base) <= 0.01 * base


@pytest.mark.parametrize("degree", [1, 2, 3])
def test_power_degree(degree):
    rep = classify([r**degree for r in range(1, 21)])
    assert rep.cls == "polynomial"
    assert abs(rep.degree - degree) <= 0.15


def test_constant_is_bounded():
    assert classify([7] * 10).cls == "bounded"


def test_nearly_constant_is_bounded():
    assert classify([10, 10.2, 9.9, 10.1, 10, 10.3, 10, 10.1]).cls == "bounded"


def test_exp_sqrt_is_neither():
    rep = classify([math.exp(2 * math.sqrt(r)) * (3 if r % 3 == 0 else 1) for r in range(1, 30)])
    assert rep.cls == "subexponential-nonpolynomial"
    assert rep.residuals["exponential"] >= 0.02
    assert rep.residuals["polynomial"] >= 0.02


def test_diagnostics_present():
    rep = classify([2**r for r in range(1, 11)])
    assert rep.window == (6, 10)
    assert set(rep.residuals) == {"exponential", "polynomial"}
    doc = json.loads(rep.to_json())
    assert doc["class"] == "exponential"
    assert doc["horizon"] == 10


@pytest.mark.parametrize("bad", [[1, 2, 3], [1, 2, 3, 4, 0, 6, 7, 8], [1, 2, -3, 4, 5, 6, 7, 8]])
def test_classify_errors(bad):
    with pytest.raises(ValueError):
        classify(bad)


@settings(max_examples=40, deadline=None)
@given(
    kind=st.sampled_from(["exp", "poly", "const"]),
    param=st.floats(min_value=1.3, max_value=4.0),
    scale=st.sampled_from([0.5, 3.0]),
)
def test_scale_invariance(kind, param, scale):
    r = np.arange(1, 15, dtype=float)
    seq = {"exp": param**r, "poly": r**param, "const": np.full_like(r, param)}[kind]
    a, b = classify(seq), classify(scale * seq)
    assert a.cls == b.cls
    if a.cls == "exponential":
        assert b.base == pytest.approx(a.base, rel=1e-9)
    if a.cls == "polynomial":
        assert b.degree == pytest.approx(a.degree, rel=1e-9)


# -- witness -------------------------------------------------------------


def test_product_lower_sequence(prod):
    _, view = view_of(prod, 10)
    rep = classify_view(view)
    assert rep.cls == "subexponential-nonpolynomial"
    w = rep.diagnostics["witness"]
    assert w["success"]


def test_witness_fails_for_triangles(tri):
    _, view = view_of(tri, 10)
    w = subexponential_witness(view)
    assert not w.quadratic
    assert classify_view(view).cls == "exponential"


def test_failed_witness_forces_closest_fit():
    seq = [math.exp(2 * math.sqrt(r)) * (3 if r % 3 == 0 else 1) for r in range(1, 30)]
    rep = classify(seq, witness=Witness([], [], [], False, False, False))
    assert rep.cls in ("exponential", "polynomial")
    assert rep.diagnostics["forced"]


# -- bounds --------------------------------------------------------------


def test_triangle_bounds(tri):
    table, view = view_of(tri, 10)
    assert view.upper == tuple(2 ** (r + 1) for r in range(1, 11))
    checks = {c.name: c for c in verify_growth_bounds(view, table.sizes()[1], True, m=2)}
    assert checks["upper_sequence"].passed
    assert checks["s1_vs_m1"].passed
    rate = checks["dt_rate"]
    assert rate.rhs == 2.0
    assert rate.lhs == pytest.approx(2.0, rel=1e-12)
    assert rate.passed


def test_dt_rate_needs_m(tri):
    table, view = view_of(tri, 4)
    with pytest.raises(ValueError):
        verify_growth_bounds(view, table.sizes()[1], True)


def test_petersen_bounds():
    g = tree_of_lobes(2, petersen_lobe())
    table, view = view_of(g, 8)
    checks = {c.name: c for c in verify_growth_bounds(view, 6, False, m=2, connectivity_one=True)}
    assert checks["upper_sequence"].passed
    assert checks["liminf_root"].passed
    assert checks["fibonacci_lower"].passed
    assert checks["fibonacci_lower"].lhs == 34


def test_golden_ratio_estimate():
    n10 = 89
    est = n10 ** (1 / 10)
    assert est == pytest.approx(1.566, abs=1e-3)
    assert est < GOLDEN_RATIO


def test_upper_bound_violation_detected():
    view = SequenceView((1, 50), (1, 50), (1, 1, 1), (0, 1, 2), (1, 1, 50), 2, "")
    checks = {c.name: c for c in verify_growth_bounds(view, 1, False)}
    assert not checks["upper_sequence"].passed


def test_no_superexponential_spheres(tri, prod):
    for g in (tri, prod, tree_of_lobes(2, petersen_lobe())):
        sizes = expand(g, 5).sizes()
        t1 = sizes[1]
        assert all(sizes[r] <= t1 * t1**r for r in range(1, 6))


# -- average subdegree ---------------------------------------------------


@pytest.mark.parametrize("which, tol", [("tri", 0.15), ("prod", 0.20)])
def test_average_subdegree_ratio(which, tol, tri, prod):
    g = {"tri": tri, "prod": prod}[which]
    table, view = view_of(g, 10)
    avg = average_subdegree(table.ball_sizes(), view.ball_counts)
    assert math.isnan(avg.ratios[0])
    assert abs(avg.ratios[10] - 2.0) <= tol * 2.0


def test_average_subdegree_constant():
    avg = average_subdegree([3] * 10, [3] * 10)
    assert avg.values == [1.0] * 10
    assert avg.report.cls == "bounded"


def test_average_subdegree_errors():
    with pytest.raises(ValueError):
        average_subdegree([1, 2], [1])
    with pytest.raises(ValueError):
        average_subdegree([1, 2], [0, 1])
