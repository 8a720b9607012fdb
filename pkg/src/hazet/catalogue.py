"""Named arrangement families and the short names understood by the CLI."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product

from .arrangement import Arrangement, Field
from .poset import IntersectionPoset, build_poset, poset_from_atom_sets


class Family(Enum):
    TypeA = "TypeA"
    TypeB = "TypeB"
    TypeD = "TypeD"
    Boolean = "Boolean"
    Uniform = "Uniform"
    ShiA = "ShiA"
    ShiB = "ShiB"
    ShiD = "ShiD"
    CatalanA = "CatalanA"
    CatalanB = "CatalanB"
    CatalanD = "CatalanD"
    Resonance = "Resonance"
    TwoSum = "TwoSum"
    Fano = "Fano"
    F4 = "F4"
    G2 = "G2"
    DRestriction = "DRestriction"
    ParallelLines = "ParallelLines"
    I2m = "I2m"


CONSTRAINTS: dict[Family, str] = {
    Family.TypeA: "TypeA n≥1",
    Family.TypeB: "TypeB n≥1",
    Family.TypeD: "TypeD n≥2",
    Family.Boolean: "Boolean n≥1",
    Family.Uniform: "Uniform n≤m",
    Family.ShiA: "ShiA n≥1",
    Family.ShiB: "ShiB n≥1",
    Family.ShiD: "ShiD n≥2",
    Family.CatalanA: "CatalanA n≥1",
    Family.CatalanB: "CatalanB n≥1",
    Family.CatalanD: "CatalanD n≥2",
    Family.Resonance: "Resonance n≥1",
    Family.TwoSum: "TwoSum n≥3",
    Family.Fano: "Fano (no parameters, over F_2)",
    Family.F4: "F4 (no parameters)",
    Family.G2: "G2 (no parameters, poset only)",
    Family.DRestriction: "DRestriction n≥1, 0≤m≤n",
    Family.ParallelLines: "ParallelLines m≥1",
    Family.I2m: "I2m m≥2 (poset only)",
}


@dataclass(frozen=True)
class FamilySpec:
    family: Family
    params: tuple[int, ...] = ()

    def __str__(self) -> str:
        return f"{self.family.value}{self.params if self.params else ''}"


def list_families() -> list[str]:
    """One line per family with its parameter constraints."""
    return [CONSTRAINTS[f] for f in Family]


# -- form generators (rows are (constant, a_1, ..., a_d)) ----------------------


def _unit(d: int, *pairs: tuple[int, int]) -> list[int]:
    row = [0] * (d + 1)
    for idx, val in pairs:
        row[idx] += val
    return row


def _type_rows(kind: str, n: int) -> tuple[int, list[list[int]]]:
    """Linear forms of the Coxeter arrangements A_n, B_n and D_n."""
    if kind == "A":
        d = n + 1
        return d, [_unit(d, (i, 1), (j, -1)) for i, j in combinations(range(1, d + 1), 2)]
    d = n
    rows = []
    for i, j in combinations(range(1, d + 1), 2):
        rows.append(_unit(d, (i, 1), (j, -1)))
        rows.append(_unit(d, (i, 1), (j, 1)))
    if kind == "B":
        rows += [_unit(d, (k, 1)) for k in range(1, d + 1)]
    return d, rows


def _check(cond: bool, spec: FamilySpec) -> None:
    if not cond:
        raise ValueError(f"invalid parameters for {spec}: need {CONSTRAINTS[spec.family]}")


def _uniform_rows(n: int, m: int) -> list[list[int]]:
    rows = [[0] + [j**k for k in range(n)] for j in range(1, m + 1)]
    for subset in combinations(range(m), n):
        if _det([rows[i][1:] for i in subset]) == 0:
            raise ValueError(f"rows {subset} of U({n},{m}) are not in general position")
    return rows


def _det(mat: list[list[int]]) -> Fraction:
    a = [[Fraction(x) for x in r] for r in mat]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def construct(spec: FamilySpec) -> Arrangement | IntersectionPoset:
    """Arrangement (or poset, for families without rational coordinates)."""
    fam, params = spec.family, spec.params
    name = short_name(spec)
    if fam in (Family.Fano, Family.F4, Family.G2):
        _check(params == (), spec)
    elif fam in (Family.Uniform, Family.DRestriction):
        _check(len(params) == 2, spec)
    else:
        _check(len(params) == 1, spec)

    if fam in (Family.TypeA, Family.TypeB, Family.TypeD):
        n = params[0]
        kind = fam.value[-1]
        _check(n >= (2 if kind == "D" else 1), spec)
        d, rows = _type_rows(kind, n)
        return Arrangement.from_rows(d, rows, name=name)
    if fam is Family.Boolean:
        n = params[0]
        _check(n >= 1, spec)
        return Arrangement.from_rows(n, [_unit(n, (k, 1)) for k in range(1, n + 1)], name=name)
    if fam is Family.Uniform:
        n, m = params
        _check(1 <= n <= m, spec)
        return Arrangement.from_rows(n, _uniform_rows(n, m), name=name)
    if fam in (Family.ShiA, Family.ShiB, Family.ShiD, Family.CatalanA, Family.CatalanB, Family.CatalanD):
        n = params[0]
        kind = fam.value[-1]
        _check(n >= (2 if kind == "D" else 1), spec)
        d, base = _type_rows(kind, n)
        shifts = (0, -1) if fam.value.startswith("Shi") else (-1, 0, 1)
        rows = [[r[0] + e] + r[1:] for e in shifts for r in base]
        return Arrangement.from_rows(d, rows, name=name)
    if fam is Family.Resonance:
        n = params[0]
        _check(n >= 1, spec)
        rows = []
        for size in range(1, n + 1):
            for subset in combinations(range(1, n + 1), size):
                rows.append(_unit(n, *[(i, 1) for i in subset]))
        return Arrangement.from_rows(n, rows, name=name)
    if fam is Family.TwoSum:
        n = params[0]
        _check(n >= 3, spec)
        d, rows = _type_rows("A", n)
        for i, j, k, l in permutations(range(1, d + 1), 4):
            rows.append(_unit(d, (i, 1), (j, 1), (k, -1), (l, -1)))
        return Arrangement.from_rows(d, rows, name=name, dedup=True)
    if fam is Family.Fano:
        rows = [[0, *v] for v in product((0, 1), repeat=3) if any(v)]
        return Arrangement.from_rows(3, rows, Field(2), name=name)
    if fam is Family.F4:
        _, rows = _type_rows("B", 4)
        for signs in product((1, -1), repeat=3):
            rows.append([0, 1, *signs])
        return Arrangement.from_rows(4, rows, name=name)
    if fam is Family.DRestriction:
        n, m = params
        _check(n >= 1 and 0 <= m <= n, spec)
        d, rows = _type_rows("D", n)
        rows += [_unit(d, (k, 1)) for k in range(1, n - m + 1)]
        return Arrangement.from_rows(d, rows, name=name)
    if fam is Family.ParallelLines:
        m = params[0]
        _check(m >= 1, spec)
        return Arrangement.from_rows(2, [[-k, -1, 1] for k in range(m)], name=name)
    if fam in (Family.I2m, Family.G2):
        m = 6 if fam is Family.G2 else params[0]
        _check(m >= 2, spec)
        return dihedral_poset(m, name=name)
    raise ValueError(f"unknown family {fam}")


def dihedral_poset(m: int, name: str = "") -> IntersectionPoset:
    """``m`` lines through the origin of a plane: ``m`` atoms below one top."""
    elems = [(1, (i,)) for i in range(m)] + [(2, tuple(range(m)))]
    return poset_from_atom_sets(elems, m, name=name or f"I2:{m}", dim=2)


_PATTERNS = [
    (r"A(\d+)", Family.TypeA),
    (r"B(\d+)", Family.TypeB),
    (r"D(\d+)", Family.TypeD),
    (r"bool(\d+)", Family.Boolean),
    (r"U:(\d+),(\d+)", Family.Uniform),
    (r"shiA(\d+)", Family.ShiA),
    (r"shiB(\d+)", Family.ShiB),
    (r"shiD(\d+)", Family.ShiD),
    (r"catA(\d+)", Family.CatalanA),
    (r"catB(\d+)", Family.CatalanB),
    (r"catD(\d+)", Family.CatalanD),
    (r"res(\d+)", Family.Resonance),
    (r"twosum(\d+)", Family.TwoSum),
    (r"fano", Family.Fano),
    (r"F4", Family.F4),
    (r"G2", Family.G2),
    (r"I2:(\d+)", Family.I2m),
    (r"Dres:(\d+),(\d+)", Family.DRestriction),
    (r"par:(\d+)", Family.ParallelLines),
]

_PREFIX = {
    Family.TypeA: "A", Family.TypeB: "B", Family.TypeD: "D", Family.Boolean: "bool",
    Family.Uniform: "U:", Family.ShiA: "shiA", Family.ShiB: "shiB", Family.ShiD: "shiD",
    Family.CatalanA: "catA", Family.CatalanB: "catB", Family.CatalanD: "catD",
    Family.Resonance: "res", Family.TwoSum: "twosum", Family.Fano: "fano", Family.F4: "F4",
    Family.G2: "G2", Family.I2m: "I2:", Family.DRestriction: "Dres:", Family.ParallelLines: "par:",
}


def parse_name(name: str) -> FamilySpec:
    """Turn a short name such as ``U:3,5`` or ``shiA2`` into a spec."""
    for pattern, fam in _PATTERNS:
        match = re.fullmatch(pattern, name.strip())
        if match:
            return FamilySpec(fam, tuple(int(g) for g in match.groups()))
    raise ValueError(f"unknown family name {name!r}")


def short_name(spec: FamilySpec) -> str:
    return _PREFIX[spec.family] + ",".join(str(p) for p in spec.params)


def by_name(name: str) -> Arrangement | IntersectionPoset:
    return construct(parse_name(name))


@lru_cache(maxsize=64)
def poset_by_name(name: str) -> IntersectionPoset:
    """Cached intersection poset of a named family."""
    obj = by_name(name)
    return obj if isinstance(obj, IntersectionPoset) else build_poset(obj)


def as_poset(obj: Arrangement | IntersectionPoset) -> IntersectionPoset:
    return obj if isinstance(obj, IntersectionPoset) else build_poset(obj)
