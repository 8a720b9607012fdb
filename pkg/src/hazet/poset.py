"""Intersection posets of arrangements with Moebius data and Poincare polynomials."""

from __future__ import annotations

import json
from collections.abc import Iterator, Sequence

from .algebra import MultiPoly
from .arrangement import Arrangement, Field, rref

FULL_MU_LIMIT = 5000


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _reduces_to_zero(row: Sequence, basis: tuple[tuple, ...], field: Field) -> bool:
    v = list(row)
    p = field.p
    for b in basis:
        col = next(j for j, x in enumerate(b) if x)
        f = v[col]
        if f:
            if p is None:
                v = [a - f * c for a, c in zip(v, b)]
            else:
                v = [(a - f * c) % p for a, c in zip(v, b)]
    return not any(v)


class IntersectionPoset:
    """Finite poset of flats, ordered by reverse inclusion.

    Element ``i`` carries a rank, the bitmask of hyperplanes containing it and
    (for arrangements given by coordinates) the reduced row echelon form of
    its defining system.  Ids are sorted by rank, so increasing id order is a
    linear extension of the partial order.  Element ``0`` is the bottom.
    """

    def __init__(
        self,
        ranks: Sequence[int],
        atom_masks: Sequence[int],
        keys: Sequence[tuple] | None = None,
        covers: Sequence[Sequence[int]] | None = None,
        n_hyperplanes: int | None = None,
        dim: int | None = None,
        field: Field | None = None,
        name: str = "",
    ) -> None:
        self.ranks = list(ranks)
        self.atoms = list(atom_masks)
        self.keys = list(keys) if keys is not None else None
        self.dim = dim
        self.field = field
        self.name = name
        n = len(self.ranks)
        if n == 0 or self.ranks[0] != 0 or self.atoms[0] != 0:
            raise ValueError("element 0 must be the bottom with rank 0 and no atoms")
        if any(self.ranks[i] > self.ranks[i + 1] for i in range(n - 1)):
            raise ValueError("elements must be sorted by rank")
        self.n_hyperplanes = (
            n_hyperplanes if n_hyperplanes is not None else max(self.atoms).bit_length()
        )
        if covers is None:
            covers = self._covers_from_atoms()
        self.covers = [sorted(set(c)) for c in covers]
        self.up = [0] * n
        for x in range(n - 1, -1, -1):
            m = 1 << x
            for y in self.covers[x]:
                m |= self.up[y]
            self.up[x] = m
        self.down = [0] * n
        for x in range(n):
            for y in bits(self.up[x]):
                self.down[y] |= 1 << x
        self.rank = max(self.ranks)
        tops = [x for x in range(n) if self.up[x] == 1 << x]
        self.top = tops[0] if len(tops) == 1 and self.ranks[tops[0]] == self.rank else None
        self._mu_rows: dict[int, dict[int, int]] = {}
        if n <= FULL_MU_LIMIT:
            for x in range(n):
                self.mu_row(x)

    def _covers_from_atoms(self) -> list[list[int]]:
        n = len(self.ranks)
        covers: list[list[int]] = [[] for _ in range(n)]
        for x in range(n):
            for y in range(x + 1, n):
                if self.ranks[y] == self.ranks[x] + 1 and self.atoms[x] & ~self.atoms[y] == 0:
                    covers[x].append(y)
        return covers

    # -- basic queries ----------------------------------------------------
    def __len__(self) -> int:
        return len(self.ranks)

    @property
    def bottom(self) -> int:
        return 0

    @property
    def is_central(self) -> bool:
        return self.top is not None

    def leq(self, x: int, y: int) -> bool:
        return bool(self.up[x] >> y & 1)

    def upper(self, x: int) -> list[int]:
        return list(bits(self.up[x]))

    def interval(self, x: int, y: int) -> list[int]:
        return list(bits(self.up[x] & self.down[y]))

    def atom_set(self, x: int) -> tuple[int, ...]:
        return tuple(bits(self.atoms[x]))

    def rank_counts(self) -> list[int]:
        counts = [0] * (self.rank + 1)
        for r in self.ranks:
            counts[r] += 1
        return counts

    def elements_of_rank(self, r: int) -> list[int]:
        return [x for x, rk in enumerate(self.ranks) if rk == r]

    def atom_elements(self) -> list[int]:
        return self.elements_of_rank(1)

    def label(self, x: int) -> str:
        """Canonical name of an element: its rank and sorted hyperplane ids."""
        return f"{self.ranks[x]}:" + ",".join(str(i + 1) for i in self.atom_set(x))

    def ground(self, proper: bool = False) -> list[int]:
        """Elements of the flag ground set: all but the bottom, and also all
        but the top when ``proper`` is set (which needs a central poset)."""
        if proper:
            if not self.is_central:
                raise ValueError("the proper part needs a central arrangement")
            return [x for x in range(1, len(self)) if x != self.top]
        return list(range(1, len(self)))

    # -- Moebius function -------------------------------------------------
    def mu_row(self, x: int) -> dict[int, int]:
        """Nonzero values ``mu(x, y)`` for all ``y >= x``."""
        row = self._mu_rows.get(x)
        if row is not None:
            return row
        up = self.up[x]
        acc: dict[int, int] = {}
        row = {}
        for y in bits(up):
            m = 1 if y == x else -acc.get(y, 0)
            if m:
                row[y] = m
                for w in bits(self.up[y] & ~(1 << y)):
                    acc[w] = acc.get(w, 0) + m
        self._mu_rows[x] = row
        return row

    def moebius(self, x: int, y: int) -> int:
        if not self.leq(x, y):
            raise ValueError(f"elements {x} and {y} are not comparable as x <= y")
        return self.mu_row(x).get(y, 0)

    # -- Poincare polynomials ---------------------------------------------
    def poincare_coeffs(self, x: int = 0, y: int | None = None) -> list[int]:
        """Integer coefficients of the interval (or upper set) Poincare polynomial."""
        if y is not None and not self.leq(x, y):
            raise ValueError(f"[{x}, {y}] is not an interval")
        region = self.up[x] if y is None else self.up[x] & self.down[y]
        out = [0] * (self.rank - self.ranks[x] + 1)
        base = self.ranks[x]
        for z, m in self.mu_row(x).items():
            if region >> z & 1:
                k = self.ranks[z] - base
                out[k] += m if k % 2 == 0 else -m
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return out

    def poincare(self, interval: tuple[int, int] | None = None, var: str = "Y") -> MultiPoly:
        if interval is None:
            return MultiPoly.univariate(self.poincare_coeffs(0), var)
        return MultiPoly.univariate(self.poincare_coeffs(*interval), var)

    def char_poly(self, dim: int | None = None, var: str = "Y") -> MultiPoly:
        """``Y^d * pi(-1/Y)`` as a polynomial."""
        d = self.dim if dim is None else dim
        if d is None:
            raise ValueError("ambient dimension unknown")
        coeffs = self.poincare_coeffs(0)
        out = [0] * (d + 1)
        for k, c in enumerate(coeffs):
            out[d - k] += c if k % 2 == 0 else -c
        return MultiPoly.univariate(out, var)

    # -- flags --------------------------------------------------------------
    def is_flag(self, flag: Sequence[int]) -> bool:
        if any(x == 0 for x in flag):
            return False
        return all(a != b and self.leq(a, b) for a, b in zip(flag, flag[1:]))

    def flag_poincare_coeffs(self, flag: Sequence[int]) -> list[int]:
        if not self.is_flag(flag):
            raise ValueError(f"{list(flag)} is not a strict chain above the bottom")
        chain = [0] + list(flag)
        result = [1]
        for a, b in zip(chain, chain[1:]):
            result = poly_mul(result, self.poincare_coeffs(a, b))
        return poly_mul(result, self.poincare_coeffs(chain[-1]))

    def flag_poincare(self, flag: Sequence[int], var: str = "Y") -> MultiPoly:
        return MultiPoly.univariate(self.flag_poincare_coeffs(flag), var)

    def enumerate_flags(self, proper: bool = False, max_len: int | None = None) -> Iterator[tuple[int, ...]]:
        """Every strict chain in the ground set, by length then lexicographically."""
        ground = self.ground(proper)
        gmask = 0
        for x in ground:
            gmask |= 1 << x
        limit = self.rank if max_len is None else max_len
        level: list[tuple[int, ...]] = [()]
        length = 0
        while level:
            yield from level
            if length >= limit:
                return
            nxt = []
            for chain in level:
                above = gmask if not chain else self.up[chain[-1]] & ~(1 << chain[-1]) & gmask
                nxt.extend(chain + (y,) for y in bits(above))
            level = nxt
            length += 1

    def max_chain_count(self, proper: bool = False) -> int:
        """Number of maximal chains of the order complex on the ground set."""
        ground = self.ground(proper)
        gset = set(ground)
        count = {}
        for x in reversed(ground):
            nxt = [y for y in self.covers_in(x, gset)]
            count[x] = sum(count[y] for y in nxt) if nxt else 1
        starts = [x for x in ground if not any(z in gset and z != x for z in bits(self.down[x]))]
        return sum(count[x] for x in starts) if ground else 1

    def covers_in(self, x: int, subset: set[int]) -> list[int]:
        """Elements of ``subset`` covering ``x`` within ``subset``."""
        above = [y for y in bits(self.up[x]) if y != x and y in subset]
        return [y for y in above if not any(z != y and self.leq(z, y) for z in above)]

    # -- serialisation ------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "name": self.name,
            "rank": self.rank,
            "central": self.is_central,
            "elements": [
                {
                    "id": x,
                    "rank": self.ranks[x],
                    "atoms": [i + 1 for i in self.atom_set(x)],
                    "muFromBottom": self.mu_row(0).get(x, 0),
                }
                for x in range(len(self))
            ],
            "coveringPairs": [[x, y] for x in range(len(self)) for y in self.covers[x]],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<IntersectionPoset{label}: {len(self)} elements, rank {self.rank}>"


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def build_poset(arr: Arrangement) -> IntersectionPoset:
    """All nonempty intersections of hyperplanes of ``arr``.

    Flats are generated rank by rank: each flat of rank ``r`` is intersected
    with every hyperplane not already containing it, inconsistent systems are
    dropped and the rest deduplicated by their canonical echelon form.  A
    hyperplane that lies in a child flat already found from the same parent
    gives that same child, so it is skipped.
    """
    field = arr.field
    rows = [f.normalized_row() for f in arr.forms]
    d = arr.dim
    levels: list[list[tuple[tuple, int]]] = [[((), 0)]]
    index: dict[tuple, tuple[int, int]] = {(): (0, 0)}
    parent_links: list[tuple[tuple, tuple]] = []
    full = (1 << len(rows)) - 1
    while True:
        current = levels[-1]
        nxt: dict[tuple, int] = {}
        for key, mask in current:
            covered = mask
            for i in bits(full & ~mask):
                if covered >> i & 1:
                    continue
                new = rref(key + (rows[i],), field)
                if any(r[d] and not any(r[:d]) for r in new):
                    continue
                if new in nxt:
                    atoms = nxt[new]
                else:
                    atoms = 0
                    for j, rj in enumerate(rows):
                        if _reduces_to_zero(rj, new, field):
                            atoms |= 1 << j
                    nxt[new] = atoms
                covered |= atoms
                parent_links.append((key, new))
        if not nxt:
            break
        level = sorted(nxt.items())
        levels.append(level)
    keys, ranks, masks = [], [], []
    for r, level in enumerate(levels):
        for key, mask in level:
            if len(key) != r:
                raise AssertionError("rank and codimension disagree")
            index[key] = (len(keys), r)
            keys.append(key)
            ranks.append(r)
            masks.append(mask)
    covers: list[list[int]] = [[] for _ in keys]
    for a, b in parent_links:
        covers[index[a][0]].append(index[b][0])
    return IntersectionPoset(
        ranks, masks, keys, covers, n_hyperplanes=len(rows), dim=d, field=field, name=arr.name
    )


def poset_from_atom_sets(
    elements: Sequence[tuple[int, Sequence[int]]], n_hyperplanes: int, name: str = "", dim: int | None = None
) -> IntersectionPoset:
    """Build a poset directly from ``(rank, hyperplane ids)`` pairs.

    Used for families without rational coordinates; the bottom ``(0, ())``
    is added when missing.
    """
    items = {(r, tuple(sorted(a))) for r, a in elements}
    items.add((0, ()))
    ordered = sorted(items)
    masks = [sum(1 << i for i in a) for _, a in ordered]
    return IntersectionPoset(
        [r for r, _ in ordered], masks, n_hyperplanes=n_hyperplanes, name=name, dim=dim
    )


def product_poset(a: IntersectionPoset, b: IntersectionPoset) -> IntersectionPoset:
    """Cartesian product of two posets, hyperplanes of ``b`` shifted after ``a``."""
    shift = a.n_hyperplanes
    elems = []
    for x in range(len(a)):
        for y in range(len(b)):
            atoms = list(bits(a.atoms[x])) + [shift + i for i in bits(b.atoms[y])]
            elems.append((a.ranks[x] + b.ranks[y], atoms))
    dim = a.dim + b.dim if a.dim is not None and b.dim is not None else None
    return poset_from_atom_sets(elems, a.n_hyperplanes + b.n_hyperplanes, dim=dim)


def good_reduction_check(arr: Arrangement, p: int) -> bool:
    """Compare rank counts and the multiset of Moebius values mod ``p``.

    Raises :class:`ZeroDivisionError` when ``p`` divides a denominator.  A
    hyperplane that collapses or collides with another one mod ``p`` counts
    as bad reduction.
    """
    reduced = arr.reduce_mod(p)
    if getattr(reduced, "collisions", 0):
        return False
    over_q = build_poset(arr)
    over_p = build_poset(reduced)
    if over_q.rank_counts() != over_p.rank_counts():
        return False
    return _mu_multiset(over_q) == _mu_multiset(over_p)


def _mu_multiset(P: IntersectionPoset) -> list[int]:
    return sorted(v for x in range(len(P)) for v in P.mu_row(x).values())


def element_for_atoms(P: IntersectionPoset, hyperplanes: Sequence[int]) -> int:
    """The smallest flat containing all listed hyperplanes (their join)."""
    want = sum(1 << i for i in hyperplanes)
    best = None
    for x in range(len(P)):
        if P.atoms[x] & want == want and (best is None or P.ranks[x] < P.ranks[best]):
            best = x
    if best is None:
        raise ValueError(f"hyperplanes {list(hyperplanes)} have empty intersection")
    return best


__all__ = [
    "FULL_MU_LIMIT",
    "IntersectionPoset",
    "bits",
    "build_poset",
    "element_for_atoms",
    "good_reduction_check",
    "poly_mul",
    "poset_from_atom_sets",
    "product_poset",
]
