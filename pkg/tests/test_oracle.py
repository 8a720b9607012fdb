from __future__ import annotations

import math
from fractions import Fraction

import pytest

from hazet.arrangement import Arrangement
from hazet.catalogue import by_name, poset_by_name
from hazet.flagseries import analytic_zeta
from hazet.oracle import (
    brute_force_zeta,
    closed_form_value,
    column_reduce,
    integer_rows,
    reciprocity_numeric,
)


def test_integer_rows_are_primitive():
    arr = Arrangement.from_rows(2, [[0, Fraction(1, 2), Fraction(-3, 2)], [4, 2, 6]])
    rows, consts = integer_rows(arr)
    assert rows == [[1, -3], [1, 3]]
    assert consts == [0, 2]


def test_column_reduce_drops_unused_directions():
    rows = [[2, 4, 6], [1, 1, 1], [3, 5, 7]]
    reduced = column_reduce(rows)
    assert len(reduced[0]) == 2
    # unimodular column operations preserve the gcd of every row
    assert [math.gcd(*r) for r in reduced] == [math.gcd(*r) for r in rows]


def test_line_matches_the_known_integral():
    P = poset_by_name("A1")
    x = P.ground()[0]
    result = brute_force_zeta(by_name("A1"), 3, 4, {x: 1}, poset=P)
    assert result.value == Fraction(4921, 6561)
    assert result.error_bound == Fraction(1, 81)
    assert result.contains(Fraction(3, 4))


def test_no_exponents_gives_volume_one():
    result = brute_force_zeta(by_name("A2"), 3, 2, {})
    assert result.value == 1 and result.error_bound == 0


@pytest.mark.parametrize("name", ["A2", "bool2", "par:2"])
def test_oracle_brackets_the_closed_form(name):
    arr, P = by_name(name), poset_by_name(name)
    for i, x in enumerate(P.ground()):
        s = {y: (1 if y == x else i % 2) for y in P.ground()}
        result = brute_force_zeta(arr, 3, 3, s, poset=P)
        assert result.contains(closed_form_value(P, 3, s))


def test_closed_form_agrees_with_the_analytic_zeta():
    P = poset_by_name("B2")
    s = {x: 1 for x in P.ground()}
    assert closed_form_value(P, 5, s) == analytic_zeta(P, 5, s)


def test_oracle_input_errors():
    arr, P = by_name("shiA2"), poset_by_name("shiA2")
    x = P.ground()[0]
    with pytest.raises(ValueError):
        brute_force_zeta(arr, 2, 2, {x: 1}, poset=P)  # bad prime
    with pytest.raises(ValueError):
        brute_force_zeta(arr, 3, 2, {x: -1}, poset=P)
    with pytest.raises(ValueError):
        brute_force_zeta(arr, 3, 2, {x: Fraction(1, 2)}, poset=P)
    with pytest.raises(ValueError):
        brute_force_zeta(arr, 3, 0, {x: 1}, poset=P)


def test_class_cap_is_enforced():
    P = poset_by_name("bool3")
    s = {x: 1 for x in P.ground()}
    with pytest.raises(RuntimeError):
        brute_force_zeta(by_name("bool3"), 5, 4, s, poset=P, max_classes=100)


def test_json_report():
    P = poset_by_name("A1")
    data = brute_force_zeta(by_name("A1"), 3, 2, {P.ground()[0]: 2}, poset=P).to_json()
    assert data["prime"] == 3 and data["level"] == 2
    assert Fraction(data["value"]) > 0


@pytest.mark.parametrize("name, q", [("A2", 5), ("B2", 3), ("fano", 2), ("U:3,5", 7)])
def test_numeric_reciprocity(name, q):
    P = poset_by_name(name)
    s = {x: k % 3 for k, x in enumerate(P.ground())}
    assert reciprocity_numeric(P, q, s).holds


def test_numeric_reciprocity_needs_a_central_arrangement():
    with pytest.raises(ValueError):
        reciprocity_numeric(poset_by_name("par:2"), 3, {})
