"""Brute-force evaluation of the analytic zeta integral by counting residue classes.

The integral of ``prod_x ||A_x||^{s_x}`` over ``Z_p^d`` is computed by
refining residue classes modulo ``p, p^2, ..., p^N``.  A class is settled as
soon as every flat with a positive exponent has a form that is nonzero on it,
because then every valuation that matters is known for the whole class.
Classes still unsettled at level ``N`` are charged to the error bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .arrangement import Arrangement
from .flagseries import g_values, weighted_flag_sum
from .algebra import PoleError
from .poset import IntersectionPoset, build_poset, good_reduction_check

DEFAULT_MAX_CLASSES = 10**7


@dataclass
class TruncatedIntegral:
    """Oracle estimate with a certified bound ``|exact - value| <= error_bound``."""

    value: Fraction
    error_bound: Fraction
    level: int
    prime: int
    exponents: dict[int, int] = field(default_factory=dict)
    settled_classes: int = 0
    capped_classes: int = 0

    def contains(self, exact: Fraction) -> bool:
        return abs(exact - self.value) <= self.error_bound

    def to_json(self) -> dict:
        return {
            "value": str(self.value),
            "error_bound": str(self.error_bound),
            "value_float": float(self.value),
            "level": self.level,
            "prime": self.prime,
            "exponents": {str(k): v for k, v in self.exponents.items()},
            "settled_classes": self.settled_classes,
            "capped_classes": self.capped_classes,
        }


def integer_rows(arr: Arrangement) -> tuple[list[list[int]], list[int]]:
    """Each form scaled to integer coefficients with no common factor."""
    if not arr.field.is_rational:
        raise ValueError("the counting oracle needs an arrangement over the rationals")
    mats, consts = [], []
    for form in arr.forms:
        entries = [Fraction(c) for c in form.coeffs] + [Fraction(form.constant)]
        den = math.lcm(*[e.denominator for e in entries])
        ints = [int(e * den) for e in entries]
        g = math.gcd(*ints)
        ints = [v // g for v in ints]
        mats.append(ints[:-1])
        consts.append(ints[-1])
    return mats, consts


def column_reduce(rows: list[list[int]]) -> list[list[int]]:
    """Unimodular column operations bringing the rows to a minimal set of columns.

    A unimodular change of variables preserves Haar measure on ``Z_p^d``, so
    dropping the resulting zero columns only removes directions along which
    the integrand is constant.
    """
    if not rows:
        return rows
    a = [r[:] for r in rows]
    d = len(a[0])
    pivot = 0
    for row in range(len(a)):
        if pivot == d:
            break
        while True:
            nz = [j for j in range(pivot, d) if a[row][j]]
            if len(nz) <= 1:
                break
            j_min = min(nz, key=lambda j: abs(a[row][j]))
            for j in nz:
                if j != j_min:
                    f = a[row][j] // a[row][j_min]
                    for r in a:
                        r[j] -= f * r[j_min]
        nz = [j for j in range(pivot, d) if a[row][j]]
        if not nz:
            continue
        j = nz[0]
        for r in a:
            r[pivot], r[j] = r[j], r[pivot]
        pivot += 1
    return [r[:pivot] for r in a]


def brute_force_zeta(
    arr: Arrangement,
    p: int,
    level: int,
    s: Mapping[int, int],
    poset: IntersectionPoset | None = None,
    max_classes: int = DEFAULT_MAX_CLASSES,
    check_prime: bool = True,
) -> TruncatedIntegral:
    """Estimate the integral to level ``level`` with a certified error bound.

    ``s`` maps poset elements (flats) to nonnegative integer exponents.
    ``max_classes`` caps the number of residue classes examined at a single
    refinement level.
    """
    P = poset or build_poset(arr)
    if any(v < 0 for v in s.values()):
        raise ValueError("the counting oracle only handles nonnegative exponents")
    if any(int(v) != v for v in s.values()):
        raise ValueError("the counting oracle only handles integer exponents")
    if level < 1:
        raise ValueError("level must be at least 1")
    if check_prime:
        try:
            good = good_reduction_check(arr, p)
        except ZeroDivisionError:
            good = False
        if not good:
            raise ValueError(f"{p} is a bad prime for this arrangement")

    active = {x: int(v) for x, v in s.items() if v and x != P.bottom}
    exponents = dict(active)
    if not active:
        return TruncatedIntegral(Fraction(1), Fraction(0), level, p, exponents, 1, 0)

    rows, consts = integer_rows(arr)
    used = sorted({i for x in active for i in P.atom_set(x)})
    local = {h: k for k, h in enumerate(used)}
    matrix = column_reduce([rows[h] for h in used])
    dim = len(matrix[0])
    A = np.array(matrix, dtype=np.int64).reshape(len(used), dim)
    c = np.array([consts[h] for h in used], dtype=np.int64)
    flats = list(active)
    members = [[local[h] for h in P.atom_set(x)] for x in flats]
    weights = np.array([active[x] for x in flats], dtype=np.int64)

    modulus = p**level
    settled: dict[tuple[int, int], int] = {}  # (level k, exponent e) -> count of classes
    capped: dict[int, int] = {}
    reps = np.zeros((1, dim), dtype=np.int64)
    digits = np.array(np.meshgrid(*[np.arange(p)] * dim, indexing="ij"), dtype=np.int64).reshape(dim, -1).T

    for k in range(level + 1):
        if len(reps) == 0:
            break
        pk = p**k
        values = (reps @ A.T + c) % modulus if dim else np.tile(c % modulus, (len(reps), 1))
        vals = _valuations(values, p, k)  # exact where < k, else k
        known = vals < k
        vx = np.empty((len(reps), len(flats)), dtype=np.int64)
        open_mask = np.zeros(len(reps), dtype=bool)
        for j, mem in enumerate(members):
            sub = vals[:, mem]
            vx[:, j] = sub.min(axis=1)
            open_mask |= ~known[:, mem].any(axis=1)
        exps = vx @ weights
        done = ~open_mask
        if k == level:
            # open classes are estimated with every unknown valuation set to N and charged to the bound
            for e, cnt in zip(*np.unique(exps, return_counts=True)):
                settled[(k, int(e))] = settled.get((k, int(e)), 0) + int(cnt)
            for e, cnt in zip(*np.unique(exps[open_mask], return_counts=True)):
                capped[int(e)] = capped.get(int(e), 0) + int(cnt)
            break
        for e, cnt in zip(*np.unique(exps[done], return_counts=True)):
            key = (k, int(e))
            settled[key] = settled.get(key, 0) + int(cnt)
        parents = reps[open_mask]
        if len(parents) * p**dim > max_classes:
            raise RuntimeError(
                f"refinement to level {k + 1} needs {len(parents) * p**dim} classes "
                f"(limit {max_classes}); lower the level"
            )
        reps = (parents[:, None, :] + pk * digits[None, :, :]).reshape(-1, dim)

    value = Fraction(0)
    for (k, e), cnt in settled.items():
        value += Fraction(cnt, p ** (k * dim + e))
    n_capped = sum(capped.values())
    error = Fraction(n_capped, p ** (level * dim))
    n_settled = sum(settled.values()) - n_capped
    return TruncatedIntegral(value, error, level, p, exponents, n_settled, n_capped)


def _valuations(values: np.ndarray, p: int, cap: int) -> np.ndarray:
    """p-adic valuation of each entry, capped at ``cap`` (zero counts as ``cap``)."""
    out = np.zeros(values.shape, dtype=np.int64)
    work = values.copy()
    alive = np.ones(values.shape, dtype=bool)
    for _ in range(cap):
        divisible = alive & (work % p == 0)
        out += divisible
        work = np.where(divisible, work // p, work)
        alive = divisible
    return out


def closed_form_value(P: IntersectionPoset, q: Fraction | int, s: Mapping[int, int | Fraction]) -> Fraction:
    """``fHP(-1/q, (q^-g_x / (1 - q^-g_x)))`` for any ``q`` other than 1, including ``q < 1``."""
    q = Fraction(q)
    weights = {}
    for x, g in g_values(P, s).items():
        if g.denominator != 1:
            raise ValueError("closed_form_value needs integer exponents")
        t = q ** (-int(g))
        if t == 1:
            raise PoleError(f"pole at flat {P.label(x)}")
        weights[x] = t / (1 - t)
    return weighted_flag_sum(P, -1 / q, weights)


@dataclass
class ReciprocityNumeric:
    q: Fraction
    exponents: dict[int, int]
    inverted: Fraction
    rescaled: Fraction

    @property
    def holds(self) -> bool:
        return self.inverted == self.rescaled

    def to_json(self) -> dict:
        return {
            "q": str(self.q),
            "exponents": {str(k): v for k, v in self.exponents.items()},
            "inverted": str(self.inverted),
            "rescaled": str(self.rescaled),
            "holds": self.holds,
        }


def reciprocity_numeric(P: IntersectionPoset, q: Fraction | int, s: Mapping[int, int]) -> ReciprocityNumeric:
    """Compare ``Z(s)|_{q -> 1/q}`` with ``q^(-sum s_x) Z(s)`` on the closed form.

    Every form is linear, so each flat contributes degree one.  Inverting
    ``q`` also inverts each ``q^(-s_x)``, which is what evaluating the closed
    form at ``1/q`` does.
    """
    if not P.is_central:
        raise ValueError("analytic self-reciprocity needs a central arrangement")
    q = Fraction(q)
    exps = {x: int(v) for x, v in s.items() if v}
    inverted = closed_form_value(P, 1 / q, exps)
    rescaled = q ** (-sum(exps.values())) * closed_form_value(P, q, exps)
    return ReciprocityNumeric(q, exps, inverted, rescaled)


__all__ = [
    "DEFAULT_MAX_CLASSES",
    "ReciprocityNumeric",
    "TruncatedIntegral",
    "brute_force_zeta",
    "closed_form_value",
    "column_reduce",
    "integer_rows",
    "reciprocity_numeric",
]
