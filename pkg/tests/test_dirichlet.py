import numpy as np
import pytest

from oracles import annulus_fd
from winding_gate.boundary import BoundaryFunction
from winding_gate.dirichlet import (
    HarmonicField,
    SolverConfig,
    evaluate,
    extend_H,
    extend_HZ,
    field_csv_rows,
    fit_samples,
    harmonic_measure,
    solve_dirichlet,
    unknown_count,
)
from winding_gate.errors import IllConditioned, InsufficientSamples, OutsideDomain
from winding_gate.geometry import CircleDomain, Circle, annulus, component_points, disc, interior_grid

RHO = 0.3
TWO_HOLES = CircleDomain(Circle(0j, 1.0), (Circle(-0.4 + 0j, 0.15), Circle(0.4 + 0j, 0.15)))
OFF_CENTER = CircleDomain(Circle(0.2 + 0.1j, 1.5), (Circle(-0.3 + 0.5j, 0.3), Circle(0.7 - 0.4j, 0.25)))


def test_constant_data_on_disc():
    field = solve_dirichlet(disc(), lambda k, p: np.ones(len(p)))
    assert field.holo.outer[0] == pytest.approx(1)
    assert np.abs(field.holo.outer[1:]).max() < 1e-13
    assert field.anti.coefficient_norm() < 1e-13
    assert field.residual < 1e-13


def test_real_part_of_z_reproduced():
    field = extend_H(BoundaryFunction.from_expression("z/2 + conj(z)/2", disc()), disc())
    assert evaluate(field, 0.3) == pytest.approx(0.3, abs=1e-13)
    assert field.residual <= 1e-10


def test_measure_geometric_mean_value():
    w = harmonic_measure(annulus(RHO), 0)
    assert evaluate(w, np.sqrt(RHO)) == pytest.approx(0.5, abs=1e-12)
    assert evaluate(w, RHO + 1e-7) == pytest.approx(1, abs=1e-6)


def test_closed_form_agrees_with_finite_differences():
    # the closed form used as oracle is itself checked against an FD solve
    r, _, u = annulus_fd(RHO, lambda t: np.ones_like(t), lambda t: np.zeros_like(t))
    assert np.abs(u.real - np.log(r)[:, None] / np.log(RHO)).max() < 1e-4


def test_H_of_Zf_annulus_against_fd():
    dom = annulus(RHO)
    f = BoundaryFunction.from_expression("conj(z)", dom)
    field = extend_HZ(f, dom)
    r, theta, u = annulus_fd(RHO, lambda t: np.full(t.shape, RHO ** 2), lambda t: np.ones_like(t))
    pick = slice(5, -5, 7)
    z = r[pick, None] * np.exp(1j * theta[None, ::16])
    assert np.abs(evaluate(field, z) - u[pick, ::16]).max() < 1e-4
    closed = 1 + (RHO ** 2 - 1) / np.log(RHO) * np.log(0.6)
    assert evaluate(field, 0.6j) == pytest.approx(closed, abs=1e-10)
    assert field.values(RHO + 0j) == pytest.approx(0.09, abs=1e-10)


def test_nonradial_data_against_fd():
    dom = annulus(RHO)
    f = BoundaryFunction((
        _table_for(lambda t: np.cos(2 * t) + 0.5j * np.sin(t)),
        _table_for(lambda t: np.sin(3 * t)),
    ))
    field = extend_H(f, dom, SolverConfig(degree=32))
    r, theta, u = annulus_fd(RHO, lambda t: np.cos(2 * t) + 0.5j * np.sin(t), lambda t: np.sin(3 * t),
                             ns=161, nt=256)
    pick = slice(10, -10, 15)
    z = r[pick, None] * np.exp(1j * theta[None, ::32])
    # table interpolation error plus FD error both sit near 1e-4
    assert np.abs(evaluate(field, z) - u[pick, ::32]).max() < 5e-4


def _table_for(fn, count=4096):
    from winding_gate.boundary import SampleTable

    t = 2 * np.pi * np.arange(count) / count
    return SampleTable(tuple(t), tuple(fn(t)))


def test_disc_extensions():
    f = BoundaryFunction.from_expression("conj(z)", disc())
    assert evaluate(extend_HZ(f, disc()), 0.2 - 0.5j) == pytest.approx(1, abs=1e-12)
    g = BoundaryFunction.from_expression("z", disc())
    hz = extend_HZ(g, disc())
    assert abs(evaluate(hz, 0)) < 1e-13
    assert evaluate(hz, 0.5j) == pytest.approx(-0.25, abs=1e-12)


def test_evaluate_outside_domain():
    w = harmonic_measure(annulus(RHO), 0)
    with pytest.raises(OutsideDomain):
        evaluate(w, 0)
    with pytest.raises(OutsideDomain):
        evaluate(w, 1.0)
    c = HarmonicField.constant(disc(), 1.0)
    assert evaluate(c, 0.99) == 1


def test_measures_sum_to_one():
    p = interior_grid(TWO_HOLES, 200, margin=0.01, seed=2)
    outer = solve_dirichlet(TWO_HOLES, lambda k, z: np.full(len(z), 1.0 if k == 2 else 0.0)).real_part()
    total = outer + harmonic_measure(TWO_HOLES, 0) + harmonic_measure(TWO_HOLES, 1)
    assert np.abs(evaluate(total, p) - 1).max() < 1e-10


def test_two_hole_measure_boundary_values():
    w = harmonic_measure(TWO_HOLES, 0)
    on0 = w.values(component_points(TWO_HOLES, 0, 200, 0.37))
    on1 = w.values(component_points(TWO_HOLES, 1, 200, 0.37))
    assert np.abs(on0 - 1).max() < 1e-6
    assert np.abs(on1).max() < 1e-6
    with pytest.raises(IndexError):
        harmonic_measure(TWO_HOLES, 2)


def test_real_fields_are_real():
    w = harmonic_measure(OFF_CENTER, 1)
    p = interior_grid(OFF_CENTER, 300, margin=0.01, seed=4)
    v = evaluate(w, p)
    assert np.all(np.abs(v.imag) <= 1e-8 * (1 + np.abs(v)))


def test_maximum_principle():
    dom = OFF_CENTER
    f = BoundaryFunction.from_expression("conj(z)*z + z/2 + conj(z)/2", dom)
    field = extend_H(f, dom).real_part()
    data = np.concatenate([f.values(dom, k, component_points(dom, k, 2000)).real for k in range(dom.n)])
    tol = 10 * max(field.residual, 1e-12)
    v = evaluate(field, interior_grid(dom, 1000, margin=1e-3, seed=7)).real
    assert data.min() - tol <= v.min() and v.max() <= data.max() + tol


def test_exact_reproduction_of_basis_traces():
    dom = OFF_CENTER
    a = dom.holes[0].center
    text = f"(z - ({a.real}, {a.imag}))^-3 + conj(z)^2"
    field = extend_H(BoundaryFunction.from_expression(text, dom), dom)
    assert field.residual <= 1e-10


def test_mean_value_on_disc():
    f = BoundaryFunction.from_expression("conj(z)^3*z + (0.5, 1)*z^2 + 2 + conj(z)", disc(0.5 + 0.5j, 2.0))
    dom = disc(0.5 + 0.5j, 2.0)
    field = extend_H(f, dom)
    p = component_points(dom, 0, 4096)
    assert evaluate(field, 0.5 + 0.5j) == pytest.approx(np.mean(f.values(dom, 0, p)), abs=1e-8)


def test_insufficient_and_ill_conditioned():
    dom = annulus(RHO)
    cfg = SolverConfig(degree=8)
    M = unknown_count(dom, 8)
    few = [component_points(dom, k, 10) for k in range(2)]
    with pytest.raises(InsufficientSamples):
        fit_samples(dom, few, [np.zeros(10)] * 2, cfg)
    # many samples but only a handful of distinct points
    pts = [np.tile(component_points(dom, k, 5), 4 * M) for k in range(2)]
    with pytest.raises(IllConditioned):
        fit_samples(dom, pts, [np.zeros(len(p)) for p in pts], cfg)


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(degree=3)
    with pytest.raises(ValueError):
        SolverConfig(oversampling=1)


def test_field_dump_and_csv_rows():
    w = harmonic_measure(annulus(RHO), 0)
    d = w.to_dict()
    assert d["N"] == 24 and len(d["logs"]) == 1 and d["real"]
    rows = field_csv_rows(w, [0.5, 0.7j])
    assert rows[0][:2] == (0.5, 0.0) and len(rows[0]) == 4
