from __future__ import annotations

import pytest

from hazet.catalogue import (
    Family,
    FamilySpec,
    as_poset,
    by_name,
    construct,
    dihedral_poset,
    list_families,
    parse_name,
    poset_by_name,
    short_name,
)
from hazet.poset import IntersectionPoset


def test_family_listing():
    lines = list_families()
    assert len(lines) == 19
    assert "TypeD n≥2" in lines
    assert "Uniform n≤m" in lines


def test_braid_three():
    arr = by_name("A3")
    assert len(arr) == 6
    assert len(poset_by_name("A3")) == 15


def test_shi_a2_poset():
    P = poset_by_name("shiA2")
    assert P.rank_counts() == [1, 6, 6]
    assert not P.is_central


def test_dihedral_is_a_poset():
    P = by_name("I2:4")
    assert isinstance(P, IntersectionPoset)
    assert P.rank_counts() == [1, 4, 1]
    assert P.poincare_coeffs(0) == [1, 4, 3]
    assert dihedral_poset(7).poincare_coeffs(0) == [1, 7, 6]


@pytest.mark.parametrize(
    "name, hyperplanes",
    [("B3", 9), ("D4", 12), ("bool5", 5), ("U:3,5", 5), ("catA2", 9), ("res3", 7), ("twosum3", 9), ("F4", 24), ("G2", 6), ("Dres:4,2", 14), ("par:5", 5)],
)
def test_hyperplane_counts(name, hyperplanes):
    assert as_poset(by_name(name)).n_hyperplanes == hyperplanes


def test_names_roundtrip():
    for name in ("A3", "U:3,5", "shiA2", "Dres:4,2", "par:5", "I2:7", "fano"):
        assert short_name(parse_name(name)) == name


@pytest.mark.parametrize("name", ["D1", "U:5,3", "Dres:3,4", "shiD1", "I2:1", "twosum2", "nope", "A"])
def test_parameter_constraints(name):
    with pytest.raises(ValueError):
        construct(parse_name(name))


def test_uniform_matroid_ranks():
    P = poset_by_name("U:3,5")
    assert P.rank == 3
    # every pair of hyperplanes meets in its own line
    assert P.rank_counts() == [1, 5, 10, 1]


def test_spec_parameters():
    spec = FamilySpec(Family.DRestriction, (4, 2))
    assert str(spec) == "DRestriction(4, 2)"
