import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from winding_gate.boundary import (
    BoundaryFunction,
    Expression,
    RationalPair,
    SampleTable,
    canonical_extension,
    eval_boundary,
    load_boundary,
    load_table_csv,
)
from winding_gate.dirichlet import evaluate
from winding_gate.errors import DivisionByZero, ExpressionSyntaxError, InputError, OffBoundaryError
from winding_gate.expr import BinOp, Conj, Const, Neg, Pow, Var, parse_expression
from winding_gate.geometry import annulus, disc, interior_grid


def test_parse_examples():
    assert parse_expression("conj(z)")(1j) == -1j
    assert parse_expression("(z^2 + 1)/(z - 3)")(0) == pytest.approx(-1 / 3)
    assert parse_expression("2i*z + (1, -2)")(1) == pytest.approx(1)
    assert parse_expression("-z^2")(2) == -4
    assert parse_expression("z^-2")(2) == 0.25


@pytest.mark.parametrize("text, offset", [("z +", 3), ("z + * 2", 4), ("sin(z)", 0), ("z^1.5", 2), ("(z", 2)])
def test_syntax_error_offsets(text, offset):
    with pytest.raises(ExpressionSyntaxError) as err:
        parse_expression(text)
    assert err.value.offset == offset


def test_offset_counts_bytes():
    with pytest.raises(ExpressionSyntaxError) as err:
        parse_expression("z + é")
    assert err.value.offset == 4
    with pytest.raises(ExpressionSyntaxError) as err:
        parse_expression("é + ")
    assert err.value.offset == 0


def test_division_by_zero_at_evaluation_only():
    node = parse_expression("1/(z-1)")
    with pytest.raises(DivisionByZero):
        node(1.0)
    with pytest.raises(DivisionByZero):
        parse_expression("z^-1")(0)


_leaf = st.one_of(
    st.just(Var()),
    st.floats(0, 100, allow_nan=False).map(lambda x: Const(complex(x))),
    st.tuples(st.floats(-5, 5), st.floats(-5, 5)).map(lambda p: Const(complex(*p))),
)
_tree = st.recursive(
    _leaf,
    lambda kids: st.one_of(
        kids.map(Conj),
        kids.map(Neg),
        st.tuples(st.sampled_from("+-*/"), kids, kids).map(lambda t: BinOp(*t)),
        st.tuples(kids, st.integers(-3, 3)).map(lambda t: Pow(*t)),
    ),
    max_leaves=12,
)


@given(_tree)
@settings(max_examples=300, deadline=None)
def test_pretty_parse_round_trip(tree):
    text = tree.pretty()
    again = parse_expression(text).pretty()
    assert again == text
    assert parse_expression(again).pretty() == again


@given(_tree)
@settings(max_examples=100, deadline=None)
def test_reparsed_tree_evaluates_identically(tree):
    z = np.array([0.3 + 0.7j, -1.1 + 0.2j])
    try:
        ref = tree(z)
    except DivisionByZero:
        return
    with np.errstate(all="ignore"):
        got = parse_expression(tree.pretty())(z)
    np.testing.assert_array_equal(got, ref)


def test_eval_boundary_examples():
    f = BoundaryFunction.from_expression("z", disc())
    assert eval_boundary(f, np.exp(1j * np.pi / 2), 0, disc()) == pytest.approx(1j)
    table = BoundaryFunction((SampleTable((0.0, np.pi), (1.0, -1.0)),))
    assert abs(eval_boundary(table, 1j, 0, disc())) < 1e-15
    g = BoundaryFunction.from_expression("1/(z-1)", disc())
    with pytest.raises(DivisionByZero):
        eval_boundary(g, 1.0, 0, disc())
    with pytest.raises(OffBoundaryError):
        eval_boundary(f, 0.5, 0, disc())
    with pytest.raises(IndexError):
        eval_boundary(f, 1.0, 1, disc())


def test_table_wraps_periodically():
    t = SampleTable((0.5, 2.0, 4.0), (0.0, 1.0, 2.0))
    # between the last knot (4.0) and the first (0.5 + 2 pi)
    mid = (4.0 + 0.5 + 2 * np.pi) / 2
    assert t.at_angle(mid) == pytest.approx(1.0)
    assert t.at_angle(mid - 2 * np.pi) == pytest.approx(1.0)
    with pytest.raises(InputError):
        SampleTable((1.0, 0.5), (0, 0))


def test_expression_matches_ast_bitwise():
    dom = annulus(0.3)
    text = "conj(z)^2 + (0.3, -1.7)*z - 1/z"
    f = BoundaryFunction.from_expression(text, dom)
    node = parse_expression(text)
    for k in range(dom.n):
        circle = dom.component(k)
        p = circle.point(np.linspace(0, 6, 25))
        assert np.array_equal([eval_boundary(f, q, k, dom) for q in p], node(p))


def test_rational_pair():
    r = RationalPair((1, 2), (3, 0, 1))
    z = np.array([0.5j, 1.0])
    np.testing.assert_allclose(r.values(z), (1 + 2 * z) / (3 + z ** 2))
    with pytest.raises(DivisionByZero):
        RationalPair((1,), (-1, 1)).values(np.array([1.0]))


def test_load_boundary_documents(tmp_path):
    csv = tmp_path / "t.csv"
    csv.write_text("angle,re,im\n0,1,0\n3.141592653589793,-1,0\n", encoding="utf-8")
    doc = {"components": [
        {"kind": "expr", "expr": "conj(z)"},
        {"kind": "rational", "num": [[0, 0], [1, 0]], "den": [[1, 0]]},
        {"kind": "table", "csv": str(csv)},
    ]}
    f = load_boundary(doc)
    assert isinstance(f.components[0], Expression)
    assert load_table_csv(csv).values_ == (1, -1)
    for bad in ('{"components": 3}', "nope", {"components": [{"kind": "spline"}]}):
        with pytest.raises(InputError):
            load_boundary(bad)


def test_component_count_checked():
    with pytest.raises(InputError):
        BoundaryFunction.from_expression("z", disc()).check_domain(annulus(0.3))


def test_canonical_extension_examples():
    one = canonical_extension(BoundaryFunction.from_expression("1", annulus(0.3)), annulus(0.3))
    assert evaluate(one, 0.6) == pytest.approx(1, abs=1e-12)
    cz = canonical_extension(BoundaryFunction.from_expression("conj(z)", disc()), disc())
    assert abs(evaluate(cz, 0)) < 1e-12
    assert evaluate(cz, 0.3 + 0.4j) == pytest.approx(0.3 - 0.4j, abs=1e-12)
    z = canonical_extension(BoundaryFunction.from_expression("z", disc()), disc())
    assert evaluate(z, 0.5) == pytest.approx(0.5, abs=1e-12)


def test_extension_is_linear():
    dom = annulus(0.4)
    f = BoundaryFunction.from_expression("conj(z)^2 + z", dom)
    g = BoundaryFunction.from_expression("1/z - conj(z)", dom)
    alpha, beta = 0.7 - 0.2j, -1.3
    combo = BoundaryFunction.from_expression("(0.7, -0.2)*(conj(z)^2 + z) - 1.3*(1/z - conj(z))", dom)
    p = interior_grid(dom, 100, margin=0.02, seed=5)
    lhs = evaluate(canonical_extension(combo, dom), p)
    rhs = alpha * evaluate(canonical_extension(f, dom), p) + beta * evaluate(canonical_extension(g, dom), p)
    assert np.abs(lhs - rhs).max() <= 1e-8 * np.abs(rhs).max()
