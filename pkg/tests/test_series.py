import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from winding_gate.geometry import Circle, CircleDomain, interior_grid
from winding_gate.series import HoloSeries

DOM = CircleDomain(Circle(0.1 + 0.2j, 1.3), (Circle(-0.4 + 0.1j, 0.2), Circle(0.5 - 0.3j, 0.25)))


def _random_series(seed, N=8):
    rng = np.random.default_rng(seed)
    decay = 0.6 ** np.arange(N + 1)
    outer = (rng.normal(size=N + 1) + 1j * rng.normal(size=N + 1)) * decay
    holes = (rng.normal(size=(2, N)) + 1j * rng.normal(size=(2, N))) * decay[1:]
    return HoloSeries(DOM, outer, holes)


@given(st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_deflation_matches_pointwise_quotient(seed):
    s = _random_series(seed)
    p = interior_grid(DOM, 40, margin=0.05, seed=seed % 7)
    a = p[0]
    q = s.deflate(a)
    z = p[1:]
    np.testing.assert_allclose(q(z) * (z - a), s(z) - s(a), atol=1e-10)


def test_derivative_by_difference():
    s = _random_series(3)
    z = interior_grid(DOM, 20, margin=0.1, seed=1)
    h = 1e-5
    fd = (s(z + h) - s(z - h)) / (2 * h)
    np.testing.assert_allclose(s.derivative(z), fd, rtol=1e-6, atol=1e-6)


def test_arithmetic_and_terms():
    s = _random_series(1)
    t = _random_series(2)
    z = np.array([0.3 + 0.1j])
    assert (s + t)(z) == pytest.approx(s(z) + t(z))
    assert (s - 2 * t)(z) == pytest.approx(s(z) - 2 * t(z))
    assert (-s)(z) == pytest.approx(-s(z))
    assert s.with_constant(5).outer[0] == 5
    labels = s.terms()
    assert "1" in labels and "w0^1" in labels and "w1^-1" in labels
    raw = s.terms(raw=True)
    assert raw["(z-(0.1+0.2i))^1"] == pytest.approx(s.outer[1] / 1.3)
    assert set(s.to_dict()) == {"outer", "holes"}
