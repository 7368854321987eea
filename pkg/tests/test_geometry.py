import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from winding_gate.errors import (
    ContainmentError,
    DegenerateError,
    DomainError,
    EpsilonTooLarge,
    InputError,
    OverlapError,
)
from winding_gate.geometry import (
    NEGATIVE,
    POSITIVE,
    ContourFamily,
    annulus,
    build_domain,
    component_points,
    default_schedule,
    disc,
    exhausting_contours,
    interior_grid,
    sample_component,
)

DISC = {"outer": {"center": [0, 0], "radius": 1}, "holes": []}
ANNULUS = {"outer": {"center": [0, 0], "radius": 1}, "holes": [{"center": [0, 0], "radius": 0.3}]}


def test_build_disc_and_annulus():
    d = build_domain(DISC)
    assert d.n == 1 and d.holes == ()
    a = build_domain(json.dumps(ANNULUS))
    assert a.n == 2
    assert a.component(0).radius == 0.3
    assert a.component(1).radius == 1.0


def test_hole_leaving_outer_disc():
    doc = {"outer": {"center": [0, 0], "radius": 1}, "holes": [{"center": [0.5, 0], "radius": 0.6}]}
    with pytest.raises((OverlapError, ContainmentError)):
        build_domain(doc)


def test_touching_holes_overlap():
    doc = {"outer": {"center": [0, 0], "radius": 1},
            "holes": [{"center": [-0.2, 0], "radius": 0.2}, {"center": [0.2, 0], "radius": 0.2}]}
    with pytest.raises(OverlapError):
        build_domain(doc)


def test_degenerate_radius():
    with pytest.raises(DegenerateError):
        build_domain({"outer": {"center": [0, 0], "radius": 0}})
    with pytest.raises(DegenerateError):
        build_domain({"outer": {"center": [0, 0], "radius": 1}, "holes": [{"center": [0, 0], "radius": -1}]})


@pytest.mark.parametrize("doc", ["not json", "[]", '{"outer": {"center": [0], "radius": 1}}'])
def test_malformed_documents(doc):
    with pytest.raises(InputError):
        build_domain(doc)


def test_domain_errors_are_input_errors():
    assert issubclass(DomainError, InputError)


def test_build_is_deterministic():
    b = json.dumps(ANNULUS).encode()
    assert build_domain(b) == build_domain(b)
    assert hash(build_domain(b)) == hash(build_domain(b))


def test_exhausting_contours_disc():
    (c,) = exhausting_contours(disc(), 0.5)
    assert c.radius == 0.5 and c.orientation == POSITIVE


def test_exhausting_contours_annulus():
    inner, outer = exhausting_contours(annulus(0.3), 0.1)
    assert outer.radius == pytest.approx(0.9) and outer.orientation == POSITIVE
    assert inner.radius == pytest.approx(0.33) and inner.orientation == NEGATIVE


def test_epsilon_too_large():
    with pytest.raises(EpsilonTooLarge):
        exhausting_contours(annulus(0.3), 0.9)


def test_negative_orientation_runs_clockwise():
    inner, _ = exhausting_contours(annulus(0.3), 0.1)
    p = inner.points(np.array([0.0, 0.25]))
    assert p[1] == pytest.approx(-0.33j)


@given(st.floats(0.01, 0.5), st.floats(0.01, 0.99))
@settings(max_examples=50, deadline=None)
def test_contours_nest_towards_boundary(eps, shrink):
    dom = annulus(0.2)
    e2 = eps * shrink
    inner1, outer1 = exhausting_contours(dom, eps)
    inner2, outer2 = exhausting_contours(dom, e2)
    assert outer2.radius > outer1.radius
    assert inner2.radius < inner1.radius


def test_schedule_default():
    s = default_schedule()
    assert len(s) == 13 and s[0] == 0.2 and s[-1] == pytest.approx(0.2 / 4096)
    with pytest.raises(InputError):
        ContourFamily(disc(), (0.1, 0.2))


def test_sample_component_examples():
    pts = [p for p, _ in sample_component(disc(), 0, 4)]
    np.testing.assert_allclose(pts, [1, 1j, -1, -1j], atol=1e-15)
    hole = sample_component(annulus(0.3), 0, 4)
    np.testing.assert_allclose([p for p, _ in hole], [0.3, 0.3j, -0.3, -0.3j], atol=1e-15)
    assert all(i == 0 for _, i in hole)
    with pytest.raises(IndexError):
        sample_component(disc(), 1, 8)


@given(st.integers(8, 400), st.floats(0.05, 3.0))
@settings(max_examples=40, deadline=None)
def test_samples_lie_on_circle(count, radius):
    dom = disc(0.3 - 0.2j, radius)
    pts = component_points(dom, 0, count)
    assert np.abs(np.abs(pts - dom.outer.center) - radius).max() <= 1e-12 * radius


def test_interior_grid_respects_margin():
    dom = annulus(0.3)
    z = interior_grid(dom, 200, margin=0.05, seed=3)
    assert len(z) == 200
    assert dom.boundary_distance(z).min() > 0.05
    np.testing.assert_array_equal(z, interior_grid(dom, 200, margin=0.05, seed=3))
