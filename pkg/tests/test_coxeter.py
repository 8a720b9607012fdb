from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hazet.algebra import GeometricSeries, MultiPoly, make_monomial, series_equal
from hazet.coxeter import (
    atom_zeta_total_partitions,
    automorphism_count,
    bars,
    block,
    bracket_double_factorial,
    bracket_factorial,
    count_total_partitions,
    coxeter_poset,
    d_condition,
    d_restriction_poincare,
    enumerate_partitions,
    enumerate_total_partitions,
    eulerian,
    expected_poincare,
    igusa_unlabeled,
    in_standard_form,
    leq,
    partition_to_flat,
    plane_tree_count,
    plane_trees,
    probability_sums_check,
    rename_vars,
    restriction_failures,
    set_partitions,
    sign_identification,
    stirling2,
    stirling_flag_sum,
    total_partition_flags,
    tree_flag,
    tree_gp_factors,
    tree_poincare,
    typeA_reduction,
    unlabeled_trees,
)
from hazet.catalogue import poset_by_name
from hazet.flagseries import Q_INV, atom_specialization, fhp, igusa_specialization

EXAMPLE_B9 = (4, (2, (-5, -9)), (0, 1, 8, (3, -6, 7)))


def test_eulerian_and_stirling_numbers():
    assert eulerian(3).univariate_coeffs("T") == [1, 4, 1]
    assert eulerian(5).univariate_coeffs("T") == [1, 26, 66, 26, 1]
    assert eulerian(9).evaluate({"T": 1}) == math.factorial(9)
    assert [stirling2(5, k) for k in range(1, 6)] == [1, 15, 25, 10, 1]


def test_set_partitions_are_counted_by_bell_numbers():
    assert [sum(1 for _ in set_partitions(range(n))) for n in range(1, 7)] == [1, 2, 5, 15, 52, 203]


@pytest.mark.parametrize("kind, n, count", [("A", 2, 5), ("B", 2, 6), ("D", 2, 4), ("A", 3, 15), ("B", 3, 24), ("D", 3, 15)])
def test_typed_partition_counts(kind, n, count):
    assert sum(1 for _ in enumerate_partitions(kind, n)) == count


@pytest.mark.parametrize("kind, n", [("A", 3), ("B", 2), ("B", 3), ("D", 3)])
def test_partitions_are_the_intersection_poset(kind, n):
    P = coxeter_poset(kind, n)
    parts = list(enumerate_partitions(kind, n))
    flats = [partition_to_flat(p, P) for p in parts]
    assert sorted(flats) == list(range(len(P)))
    for a, fa in zip(parts, flats):
        for b, fb in zip(parts, flats):
            assert leq(a, b) == P.leq(fa, fb)


def test_blocks_of_the_example_tree():
    assert in_standard_form(EXAMPLE_B9)
    assert block("B", (2, (-5, -9))) == (2, -5, -9)
    assert block("B", (-5, -9)) == (5, 9)
    assert block("B", (0, 1, 8, (3, -6, 7))) == (0, 1, 3, 6, 7, 8)
    assert block("B", (3, -6, 7)) == (3, -6, 7)


def test_poincare_of_the_example_tree():
    expected = bracket_double_factorial(2) * bracket_double_factorial(3) * bracket_factorial(1) ** 2 * bracket_factorial(2)
    assert tree_poincare("B", EXAMPLE_B9) == expected


def test_example_tree_gp_factors():
    factors = tree_gp_factors("B", 9, EXAMPLE_B9)
    z_degrees = sorted(dict(m)[Q_INV] for m in factors)
    assert z_degrees == [1, 2, 2, 5]
    sizes = sorted(len(m) - 1 for m in factors)
    # the zero block {0,1,3,6,7,8} carries all 2 * C(5,2) + 5 hyperplanes of a copy of B5
    assert sizes == [1, 3, 3, 25]


@pytest.mark.parametrize("n, count", [(1, 1), (2, 4), (3, 26), (4, 236)])
def test_type_a_total_partition_counts(n, count):
    assert count_total_partitions("A", n) == count


@pytest.mark.parametrize("kind, n, count", [("B", 2, 5), ("D", 2, 3), ("B", 3, 47), ("D", 3, 32)])
def test_signed_total_partition_counts(kind, n, count):
    assert count_total_partitions(kind, n) == count


@pytest.mark.parametrize("kind, n", [("A", 3), ("B", 2), ("B", 3), ("D", 3)])
def test_tree_flags_are_the_total_partition_flags(kind, n):
    P = coxeter_poset(kind, n)
    from_trees = {tuple(tree_flag(kind, n, t, P)) for t in enumerate_total_partitions(kind, n)}
    from_flags = {tuple(partition_to_flat(p, P) for p in flag) for flag in total_partition_flags(kind, n)}
    assert from_trees == from_flags


@pytest.mark.parametrize("kind, n", [("A", 3), ("B", 3), ("D", 3), ("D", 4)])
def test_tree_poincare_is_the_flag_poincare(kind, n):
    P = coxeter_poset(kind, n)
    for tree in enumerate_total_partitions(kind, n):
        flag = [x for x in tree_flag(kind, n, tree, P) if x != P.bottom]
        assert tree_poincare(kind, tree).univariate_coeffs("Y") == P.flag_poincare_coeffs(flag)


def test_bars_and_d_condition():
    assert bars(((0, 1), 2), 2) == 1
    assert bars((0, (1, 2)), 2) == 2
    assert bars((0, 1, 2), 2) == 1
    assert d_condition((0, 1, 2))
    assert not d_condition(((0, 1), 2))


@pytest.mark.parametrize("kind, n", [("A", 1), ("A", 2), ("A", 3), ("B", 1), ("B", 2), ("D", 2), ("D", 3)])
def test_tree_formula_matches_flag_formula(kind, n):
    trees = atom_zeta_total_partitions(kind, n)
    flags = atom_specialization(fhp(coxeter_poset(kind, n)))
    assert series_equal(trees.series, flags)
    assert trees.odd_q_only == (kind != "A")


@pytest.mark.parametrize("kind", ["B", "D"])
def test_reduction_to_unbarred_trees(kind):
    reduced = typeA_reduction(kind, 2).series
    rename = sign_identification(kind, 2)
    full = rename_vars(atom_zeta_total_partitions(kind, 2).series, rename)
    via_flags = rename_vars(atom_specialization(fhp(coxeter_poset(kind, 2))), rename)
    assert series_equal(reduced, full)
    assert series_equal(reduced, via_flags)


def test_unlabeled_trees_of_four_leaves():
    shapes = unlabeled_trees(4)
    assert len(shapes) == 5
    assert sorted(automorphism_count(s) for s in shapes) == [2, 4, 6, 8, 24]
    # labelings of all shapes add up to the number of total partitions
    assert sum(math.factorial(4) // automorphism_count(s) for s in shapes) == 26


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_unlabeled_igusa_formula(n):
    assert series_equal(igusa_unlabeled(n), igusa_specialization(fhp(coxeter_poset("A", n))))


@pytest.mark.parametrize("leaves, generations", [(3, 1), (3, 2), (4, 2), (5, 3), (6, 4)])
def test_plane_tree_counts(leaves, generations):
    n = leaves - 1
    trees = list(plane_trees(leaves, generations))
    assert len(trees) == plane_tree_count(leaves, generations)
    assert len(trees) == math.factorial(generations) * stirling2(n, generations)


@pytest.mark.parametrize("n, k", [(2, 1), (2, 2), (3, 2), (4, 2), (4, 4), (5, 3)])
def test_probability_sums(n, k):
    result = probability_sums_check(n, k)
    assert result.holds, result


@pytest.mark.parametrize("kind, n", [("A", 3), ("B", 3), ("D", 4)])
def test_stirling_flag_sums(kind, n):
    for k in range(1, n + 1):
        assert stirling_flag_sum(kind, n, k) == math.factorial(k) * stirling2(n, k)


@pytest.mark.parametrize("kind, n", [("A", 4), ("B", 3), ("B", 4), ("D", 3), ("D", 4)])
def test_restrictions_to_hyperplanes(kind, n):
    assert restriction_failures(kind, n) == []
    assert poset_by_name(f"{kind}{n}").poincare_coeffs(0) == expected_poincare(kind, n)


def test_d_restriction_poincare():
    for n, m in [(3, 1), (3, 2), (4, 2)]:
        assert poset_by_name(f"Dres:{n},{m}").poincare_coeffs(0) == d_restriction_poincare(n, m)


@given(st.integers(1, 7), st.data())
@settings(max_examples=25, deadline=None)
def test_plane_tree_count_property(n, data):
    k = data.draw(st.integers(1, n))
    assert plane_tree_count(n + 1, k) == math.factorial(k) * stirling2(n, k)


def test_igusa_display_for_a3():
    # The A3 display, rebuilt from its five trees with Z = 1/q and t = q^-s.
    z = MultiPoly.var(Q_INV)
    one_z, one_2z, one_3z = 1 - z, 1 - z.scale(2), 1 - z.scale(3)

    def gp(z_power: int, t_power: int) -> tuple:
        return make_monomial({Q_INV: z_power, "t": t_power})

    a, b = gp(1, 1), gp(2, 3)
    inner = GeometricSeries(
        [
            (one_z * one_2z * one_3z, []),
            (one_z * one_z * one_2z * 6, [a]),
            (one_z * one_z * one_z * 3, [a, a]),
            (one_z * one_z * one_2z * 4, [b]),
            (one_z * one_z * one_z * 12, [a, b]),
        ]
    )
    display = inner * (GeometricSeries.gp({Q_INV: 3, "t": 6}) + 1)
    assert series_equal(display, igusa_unlabeled(3))
    assert series_equal(display, igusa_specialization(fhp(coxeter_poset("A", 3))))
