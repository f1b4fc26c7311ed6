from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rtlcheck.errors import InvariantFormatError, UsageError
from rtlcheck.polycert.constraints import Constraint, FarkasCert, Polyhedron
from rtlcheck.polycert.farkas import (
    check_entailment,
    check_inclusion,
    combine,
    compose,
    fm_project,
    fm_project_all,
    grid_check,
)
from rtlcheck.polycert.polyio import (
    cert_from_json,
    certs_from_json,
    constraint_from_json,
    constraint_to_json,
    polyhedron_from_json,
    polyhedron_to_json,
    rational_from_json,
)


@pytest.fixture
def paper_poly():
    """x1 + x2 <= 1 and x1 - x2 <= 2"""
    return Polyhedron.of([Constraint.of({1: 1, 2: 1}, 1), Constraint.of({1: 1, 2: -1}, 2)])


def test_constraint_normal_form():
    c = Constraint.of({2: 0, 1: Fraction(1, 2), 3: "-2"}, "3/2")
    assert c.coeffs == ((1, Fraction(1, 2)), (3, Fraction(-2)))
    assert c.variables == {1, 3}
    assert c.coeff(2) == 0
    assert str(c) == "1/2*x1 - 2*x3 <= 3/2"
    assert str(Constraint.of({}, 0)) == "0 <= 0"
    assert str(Constraint.of({1: -1}, 0)) == "-x1 <= 0"


def test_constraint_arithmetic():
    c = Constraint.of({1: 1, 2: 1}, 1)
    d = Constraint.of({1: 1, 2: -1}, 2)
    assert c + d == Constraint.of({1: 2}, 3)
    assert c.scale(Fraction(1, 2)) == Constraint.of({1: "1/2", 2: "1/2"}, "1/2")
    assert c.satisfied_by({1: 0, 2: 1})
    assert not c.satisfied_by({1: 1, 2: 1})


@pytest.mark.parametrize("coeffs, bound", [({1: 0.5}, 1), ({0: 1}, 1), ({1: 1}, True)])
def test_constraint_rejects(coeffs, bound):
    with pytest.raises(UsageError):
        Constraint.of(coeffs, bound)


def test_cert():
    cert = FarkasCert.of({1: "1/2", 0: Fraction(1, 2), 3: 0})
    assert cert.lambdas == ((0, Fraction(1, 2)), (1, Fraction(1, 2)))
    assert str(cert) == "(0: 1/2, 1: 1/2)"
    with pytest.raises(UsageError, match="nonnegative"):
        FarkasCert.of({0: -1})
    with pytest.raises(UsageError):
        FarkasCert.of({-1: 1})


def test_entailment(paper_poly):
    c = Constraint.of({1: 1}, Fraction(3, 2))
    assert check_entailment(paper_poly, c, FarkasCert.of({0: "1/2", 1: "1/2"}))
    assert not check_entailment(paper_poly, c, FarkasCert.of({0: "1/2", 1: "1/3"}))
    # a weaker bound is entailed by the same combination
    assert check_entailment(paper_poly, Constraint.of({1: 1}, 2), FarkasCert.of({0: "1/2", 1: "1/2"}))
    assert not check_entailment(paper_poly, Constraint.of({1: 1}, 1), FarkasCert.of({0: "1/2", 1: "1/2"}))


def test_combine_out_of_range(paper_poly):
    with pytest.raises(UsageError, match="out of range"):
        combine(paper_poly, FarkasCert.of({2: 1}))


def test_inclusion_arity(paper_poly):
    q = Polyhedron.of([Constraint.of({1: 1}, Fraction(3, 2))])
    assert check_inclusion(paper_poly, q, [FarkasCert.of({0: "1/2", 1: "1/2"})])
    with pytest.raises(UsageError, match="1 certificates expected, got 0"):
        check_inclusion(paper_poly, q, [])


def test_fm_project(paper_poly):
    projected, certs = fm_project(paper_poly, 2)
    assert list(projected) == [Constraint.of({1: 1}, Fraction(3, 2))]
    assert certs == [FarkasCert.of({0: "1/2", 1: "1/2"})]
    assert check_inclusion(paper_poly, projected, certs)


def test_fm_project_keeps_unrelated_constraints(paper_poly):
    p = Polyhedron.of(list(paper_poly) + [Constraint.of({3: 1}, 4)])
    projected, certs = fm_project(p, 2)
    assert projected[0] == Constraint.of({3: 1}, 4)
    assert certs[0] == FarkasCert.unit(2)


def test_fm_project_all(paper_poly):
    p = Polyhedron.of(list(paper_poly) + [Constraint.of({1: -1}, 0)])
    projected, certs = fm_project_all(p, [2, 1])
    assert projected.variables == set()
    assert check_inclusion(p, projected, certs)


def test_compose():
    outer = FarkasCert.of({0: 2, 1: 1})
    inner = [FarkasCert.of({0: "1/2"}), FarkasCert.of({0: 1, 1: 3})]
    assert compose(outer, inner) == FarkasCert.of({0: 2, 1: 3})


def test_grid_check(paper_poly):
    projected, _ = fm_project(paper_poly, 2)
    assert grid_check(paper_poly, projected, (-4, 4))
    assert not grid_check(projected, paper_poly, {1: (-4, 4), 2: (-4, 4)})


def test_json(paper_poly, path_tests):
    c = Constraint.of({1: "-1/3"}, 2)
    assert constraint_to_json(c) == {"coeffs": {"x1": "-1/3"}, "bound": "2"}
    assert constraint_from_json(constraint_to_json(c)) == c
    assert polyhedron_from_json(polyhedron_to_json(paper_poly)) == paper_poly
    assert constraint_from_json({"coeffs": {"x2": 3}, "bound": -1}) == Constraint.of({2: 3}, -1)
    assert certs_from_json({"lambdas": {"0": "1"}}) == [FarkasCert.unit(0)]
    assert len(certs_from_json([{"lambdas": {}}, {"lambdas": {"1": 2}}])) == 2


@pytest.mark.parametrize("raw", [1.5, True, "1/0", "abc", None])
def test_bad_rationals(raw):
    with pytest.raises(InvariantFormatError):
        rational_from_json(raw)


@pytest.mark.parametrize(
    "raw",
    [
        {"lambdas": {"a": "1"}},
        {"lambdas": {"0": "-1"}},
        {"lambda": {}},
        [],
    ],
)
def test_bad_certs(raw):
    with pytest.raises(InvariantFormatError):
        cert_from_json(raw)


@pytest.mark.parametrize(
    "raw",
    [{"coeffs": {"y1": 1}, "bound": 0}, {"coeffs": [], "bound": 0}, {"bound": 0}],
)
def test_bad_constraints(raw):
    with pytest.raises(InvariantFormatError):
        constraint_from_json(raw)


coefficient = st.integers(min_value=-3, max_value=3)
constraints = st.builds(
    lambda a, b, c, bound: Constraint.of({1: a, 2: b, 3: c}, bound),
    coefficient,
    coefficient,
    coefficient,
    st.integers(min_value=-5, max_value=5),
)
polyhedra = st.lists(constraints, min_size=1, max_size=5).map(Polyhedron.of)


@given(polyhedra, st.sampled_from([1, 2, 3]))
def test_projection_certificates_check(p, v):
    projected, certs = fm_project(p, v)
    assert all(c.coeff(v) == 0 for c in projected)
    assert check_inclusion(p, projected, certs)
    assert grid_check(p, projected, (-2, 2))


@given(polyhedra)
def test_projection_of_several_variables(p):
    projected, certs = fm_project_all(p, [3, 1])
    assert projected.variables <= {2}
    assert check_inclusion(p, projected, certs)
