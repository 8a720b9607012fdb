"""Regression of computed coarse numerators against the bundled reference tables."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .algebra import MultiPoly
from .catalogue import dihedral_poset, poset_by_name
from .flagseries import T, Y, cfhp

# Entries checked by default; together these take well under a minute.
DEFAULT = (
    "A1 A2 A3 A4 A5 B2 B3 B4 D4 D5 F4 G2 H2 Dres:3,2 Dres:3,1 Dres:4,1 Dres:4,2 Dres:4,3 "
    "shiA1 shiA2 shiA3 shiB2 shiB3 shiD4 catA1 catA2 catA3 catB2 catB3 catD4 "
    "U:3,4 U:4,5 U:4,7 U:4,8 U:5,6 U:6,7 res4 twosum3 twosum4"
).split()

# Larger entries with rough single-core runtimes (mostly poset construction).
SLOW = {
    "shiA4": "~10 s",
    "shiB4": "~1 min",
    "catA4": "~1 min",
    "catB4": "~10 min",
    "A6": "~30 s",
    "B5": "~30 s",
    "D6": "~2 min",
    "res5": "~1 min",
    "twosum5": "~10 min",
    "A7": "~15 min",
    "B6": "~15 min",
    "B7": "hours",
    "D7": "hours",
    "res6": "hours",
}

# Tables that cannot be reproduced here: irrational coordinates or too large.
UNSUPPORTED = ("E6", "E7", "H3", "H4")

# The dihedral family is symbolic in m; these values are checked.
DIHEDRAL_RANGE = range(2, 13)

ALIASES = {"H2": "I2:5"}


@lru_cache(maxsize=1)
def tables() -> dict[str, list]:
    text = resources.files("hazet").joinpath("data/golden_tables.json").read_text()
    return json.loads(text)


def table_poly(table: list[list[int]]) -> MultiPoly:
    terms = {}
    for j, row in enumerate(table):
        for k, c in enumerate(row):
            if c:
                terms[(k, j)] = c
    return MultiPoly((Y, T), terms)


def dihedral_expected(m: int) -> MultiPoly:
    """The symbolic dihedral table at a particular ``m``."""
    rows = tables()["I2:m"]
    table = [[int(eval(c, {"__builtins__": {}}, {"m": m})) for c in row] for row in rows]
    return table_poly(table)


@dataclass
class GoldenResult:
    name: str
    ok: bool
    seconds: float
    detail: str = ""


def check(name: str) -> GoldenResult:
    """Compare the computed numerator of ``name`` with its table entry."""
    start = time.perf_counter()
    if name in UNSUPPORTED:
        return GoldenResult(name, False, 0.0, "not reproducible here (see README)")
    if name == "I2:m":
        bad = [m for m in DIHEDRAL_RANGE if cfhp(dihedral_poset(m)).numerator != dihedral_expected(m)]
        detail = f"checked m = {DIHEDRAL_RANGE.start}..{DIHEDRAL_RANGE.stop - 1}"
        if bad:
            detail = f"mismatch for m in {bad}"
        return GoldenResult(name, not bad, time.perf_counter() - start, detail)
    expected = table_poly(tables()[name])
    got = cfhp(poset_by_name(ALIASES.get(name, name))).numerator
    ok = got == expected
    detail = "" if ok else f"computed {got} but table has {expected}"
    return GoldenResult(name, ok, time.perf_counter() - start, detail)


def select(which: str, include_slow: bool = False) -> list[str]:
    """Names for ``which`` in {``all``, ``default``, ``slow``} or a single entry."""
    if which == "default":
        return DEFAULT + ["I2:m"]
    if which == "slow":
        return list(SLOW)
    if which == "all":
        return DEFAULT + ["I2:m"] + (list(SLOW) if include_slow else [])
    if which in tables():
        return [which]
    raise ValueError(f"no table entry named {which!r}")
