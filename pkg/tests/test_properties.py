"""Invariants checked on randomly generated small arrangements."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from hazet.arrangement import Arrangement
from hazet.catalogue import poset_by_name
from hazet.flagseries import (
    analytic_zeta,
    cfhp,
    hadamard_cfhp,
    random_subset_checks,
    reciprocity_check,
    sr_hilbert_check,
    stratified_zeta,
)
from hazet.oracle import brute_force_zeta, closed_form_value
from hazet.poset import build_poset, good_reduction_check, product_poset
from hazet.topzeta import epsilon_constant_term, pi_normalized, s_by_name, top_zeta_multivariate

SETTINGS = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])


@st.composite
def arrangements(draw, central: bool | None = None, dims=(2, 3)):
    dim = draw(st.sampled_from(dims))
    count = draw(st.integers(1, 5))
    rows = []
    for _ in range(count):
        coeffs = draw(st.lists(st.integers(-2, 2), min_size=dim, max_size=dim).filter(any))
        if central is True:
            const = 0
        elif central is False:
            const = draw(st.integers(-2, 2))
        else:
            const = draw(st.sampled_from([0, 0, 1, -1]))
        rows.append([const] + coeffs)
    arr = Arrangement.from_rows(dim, rows, dedup=True)
    return arr


def poincare(P) -> list[int]:
    return P.poincare_coeffs(0)


@given(arrangements())
@SETTINGS
def test_moebius_recursion(arr):
    P = build_poset(arr)
    for x in range(len(P)):
        for y in P.upper(x):
            assert sum(P.moebius(x, z) for z in P.interval(x, y)) == (1 if x == y else 0)


@given(arrangements(), st.data())
@SETTINGS
def test_deletion_restriction(arr, data):
    h = data.draw(st.integers(0, len(arr) - 1))
    whole = poincare(build_poset(arr))
    deleted = poincare(build_poset(arr.deletion(h))) if len(arr) > 1 else [1]
    restricted = [0] + poincare(build_poset(arr.restriction(h)))
    width = max(len(whole), len(deleted), len(restricted))
    pad = lambda c: c + [0] * (width - len(c))
    assert pad(whole) == [a + b for a, b in zip(pad(deleted), pad(restricted))]


@given(arrangements(central=True))
@SETTINGS
def test_central_poincare_vanishes_at_minus_one(arr):
    assert sum(c * (-1) ** k for k, c in enumerate(poincare(build_poset(arr)))) == 0


@given(arrangements())
@SETTINGS
def test_normalized_flag_polynomials_are_integral(arr):
    P = build_poset(arr)
    for flag in P.enumerate_flags():
        pi_normalized(P, flag)  # raises when a division by (1 + Y) is inexact


@given(arrangements(central=True))
@SETTINGS
def test_central_reciprocity_and_subsets(arr):
    P = build_poset(arr)
    assert reciprocity_check(P).holds
    assert all(random_subset_checks(P, count=5))


@given(arrangements())
@SETTINGS
def test_numerator_is_nonnegative(arr):
    N = cfhp(build_poset(arr)).numerator
    assert all(c >= 0 for c in N.terms.values())


@given(arrangements())
@SETTINGS
def test_stanley_reisner_slice(arr):
    assert sr_hilbert_check(build_poset(arr))


@given(arrangements(), st.integers(0, 2**32))
@SETTINGS
def test_stratified_and_flag_zeta_agree(arr, seed):
    P = build_poset(arr)
    rng = random.Random(seed)
    s = {x: rng.randint(0, 3) for x in P.ground()}
    assert analytic_zeta(P, 5, s) == stratified_zeta(P, 5, s)


@given(arrangements(), st.integers(0, 2**32))
@SETTINGS
def test_topological_zeta_is_the_constant_term(arr, seed):
    P = build_poset(arr)
    rng = random.Random(seed)
    s = {x: Fraction(rng.randint(1, 6), rng.randint(1, 3)) for x in P.ground()}
    assert top_zeta_multivariate(P).evaluate(s_by_name(P, s)) == epsilon_constant_term(P, s)


@given(arrangements(), st.sampled_from(["A1", "A2", "bool2"]))
@SETTINGS
def test_hadamard_product(arr, other):
    P, Q = build_poset(arr), poset_by_name(other)
    assert hadamard_cfhp(cfhp(P), cfhp(Q)).numerator == cfhp(product_poset(P, Q)).numerator


@given(arrangements(dims=(2,)), st.integers(0, 2**32))
@settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_oracle_brackets_the_closed_form(arr, seed):
    p = 5
    P = build_poset(arr)
    assume(good_reduction_check(arr, p))
    rng = random.Random(seed)
    s = {x: rng.randint(0, 2) for x in P.ground()}
    result = brute_force_zeta(arr, p, 3, s, poset=P)
    assert result.contains(closed_form_value(P, p, s))
