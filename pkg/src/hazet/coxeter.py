"""Combinatorics of the classical Coxeter arrangements of types A, B and D.

Set partitions with bars model the intersection posets, total partitions
are encoded as labeled rooted trees, and the tree data (Poincare factors and
geometric progressions) assemble into closed formulae for atom and Igusa
zeta functions.  Plane trees and Stirling numbers give the f-vector side.

Conventions
-----------
* Type ``A_n`` uses the labels ``1..n+1``; types ``B_n`` and ``D_n`` use
  ``0..n``.  A barred label is stored as a negative integer.
* A rooted tree is a nested tuple: a leaf is its (signed) integer label, a
  parent is the tuple of its children.  Children are kept in a canonical
  order (by smallest absolute leaf label), which is the order in which
  :func:`enumerate_total_partitions` emits trees.
* Hyperplane indices follow the row order of the catalogue arrangements, so
  ``t[i]`` variables line up with :func:`hazet.flagseries.atom_specialization`.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, permutations, product
from typing import Iterator, Sequence, Union

from .algebra import GeometricSeries, Monomial, MultiPoly, make_monomial, substitute
from .catalogue import _type_rows, poset_by_name
from .flagseries import Q_INV, T, Y, flag_length_sums, ground_mask, hyperplane_t
from .poset import IntersectionPoset, element_for_atoms

Tree = Union[int, tuple]
KINDS = ("A", "B", "D")


def _check_kind(kind: str, n: int) -> None:
    if kind not in KINDS:
        raise ValueError(f"unknown type {kind!r}; expected one of {KINDS}")
    if n < 1:
        raise ValueError("rank must be at least 1")
    if kind == "D" and n < 2:
        raise ValueError("type D needs rank at least 2 (D1 is A1)")


def labels(kind: str, n: int) -> tuple[int, ...]:
    return tuple(range(1, n + 2)) if kind == "A" else tuple(range(n + 1))


# -- Eulerian and Stirling numbers ---------------------------------------------


def eulerian(n: int) -> MultiPoly:
    """``E_n(T) = sum over permutations of [n] of T^(descents)``.

    Counts descents directly for ``n <= 8`` and uses the recurrence
    ``A(n,k) = (k+1) A(n-1,k) + (n-k) A(n-1,k-1)`` beyond that.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n <= 8:
        counts = [0] * max(n, 1)
        for perm in permutations(range(n)):
            counts[sum(a > b for a, b in zip(perm, perm[1:]))] += 1
        if n == 0:
            counts = [1]
        return MultiPoly.univariate(counts, T)
    row = [1]
    for m in range(2, n + 1):
        row = [
            (k + 1) * (row[k] if k < len(row) else 0) + (m - k) * (row[k - 1] if k >= 1 else 0)
            for k in range(m)
        ]
    return MultiPoly.univariate(row, T)


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind."""
    if n < 0 or k < 0:
        raise ValueError("arguments must be nonnegative")
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def set_partitions(items: Sequence[int]) -> Iterator[list[tuple[int, ...]]]:
    """All set partitions of ``items``; blocks keep the input order."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [(first,)] + part
        for i in range(len(part)):
            yield part[:i] + [(first,) + part[i]] + part[i + 1 :]


# -- typed set partitions -----------------------------------------------------


@dataclass(frozen=True)
class TypedSetPartition:
    """A set partition of type A, B or D.

    Blocks hold signed labels.  For B and D the block containing 0 (the zero
    block) is unbarred, and the smallest element of every other block is
    unbarred.  Blocks are sorted by their smallest absolute value.
    """

    kind: str
    n: int
    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def make(cls, kind: str, n: int, blocks: Sequence[Sequence[int]]) -> TypedSetPartition:
        normal = []
        for block in blocks:
            b = sorted(block, key=abs)
            if kind == "A" or 0 in b:
                b = [abs(x) for x in b]
            elif b[0] < 0:
                b = [-x for x in b]
            normal.append(tuple(b))
        normal.sort(key=lambda b: abs(b[0]))
        seen = sorted(abs(x) for b in normal for x in b)
        if seen != list(labels(kind, n)):
            raise ValueError(f"blocks {blocks} do not partition the labels of {kind}{n}")
        part = cls(kind, n, tuple(normal))
        if kind == "D" and len(part.zero_block) == 2:
            raise ValueError("a type D partition cannot have a zero block of size two")
        return part

    @property
    def zero_block(self) -> tuple[int, ...]:
        if self.kind == "A":
            return ()
        return next(b for b in self.blocks if 0 in b)

    @property
    def nonzero_blocks(self) -> list[tuple[int, ...]]:
        return [b for b in self.blocks if 0 not in b]

    def __str__(self) -> str:
        def lab(x: int) -> str:
            return f"~{-x}" if x < 0 else str(x)

        return "|".join("".join(lab(x) if len(b) < 10 else lab(x) + "," for x in b) for b in self.blocks)


def enumerate_partitions(kind: str, n: int) -> Iterator[TypedSetPartition]:
    """Every partition in the lattice of type ``kind`` and rank ``n``."""
    _check_kind(kind, n)
    for part in set_partitions(labels(kind, n)):
        if kind == "A":
            yield TypedSetPartition.make(kind, n, part)
            continue
        zero = next(b for b in part if 0 in b)
        if kind == "D" and len(zero) == 2:
            continue
        others = [b for b in part if 0 not in b]
        choices = [list(product((1, -1), repeat=len(b) - 1)) for b in others]
        for signs in product(*choices):
            blocks = [zero] + [(b[0],) + tuple(s * x for s, x in zip(sg, b[1:])) for b, sg in zip(others, signs)]
            yield TypedSetPartition.make(kind, n, blocks)


def leq(rho: TypedSetPartition, sigma: TypedSetPartition) -> bool:
    """``rho <= sigma``: every block of ``rho`` fits into a block of ``sigma``.

    A nonzero block may fit after barring (negating all its entries) or, once
    unbarred, inside the zero block of ``sigma``.
    """
    if (rho.kind, rho.n) != (sigma.kind, sigma.n):
        raise ValueError("partitions of different types are not comparable")
    zero = set(sigma.zero_block)
    nonzero = [set(b) for b in sigma.nonzero_blocks] if rho.kind != "A" else [set(b) for b in sigma.blocks]
    for block in rho.blocks:
        if rho.kind != "A" and 0 in block:
            if not set(block) <= zero:
                return False
            continue
        pos, neg = set(block), {-x for x in block}
        if any(pos <= b or neg <= b for b in nonzero):
            continue
        if rho.kind != "A" and {abs(x) for x in block} <= zero:
            continue
        return False
    return True


@lru_cache(maxsize=None)
def hyperplane_index(kind: str, n: int) -> dict[tuple[int, ...], int]:
    """Map from catalogue rows to hyperplane indices of ``X_n``."""
    _, rows = _type_rows(kind, n)
    return {tuple(r): i for i, r in enumerate(rows)}


def _dim(kind: str, n: int) -> int:
    return n + 1 if kind == "A" else n


def pair_hyperplane(kind: str, n: int, a: int, b: int) -> int:
    """Index of ``X_|a| - X_|b|`` (same bars) or ``X_|a| + X_|b|`` (different bars)."""
    i, j = sorted((abs(a), abs(b)))
    if i == j or i == 0:
        raise ValueError(f"no pair hyperplane for labels {a}, {b}")
    row = [0] * (_dim(kind, n) + 1)
    row[i] = 1
    row[j] = -1 if (a < 0) == (b < 0) else 1
    return hyperplane_index(kind, n)[tuple(row)]


def coordinate_hyperplane(kind: str, n: int, i: int) -> int:
    row = [0] * (_dim(kind, n) + 1)
    row[i] = 1
    return hyperplane_index(kind, n)[tuple(row)]


def block_hyperplanes(kind: str, n: int, block: Sequence[int]) -> list[int]:
    """Hyperplanes whose intersection is cut out by a single block.

    An ordinary block gives one hyperplane per pair; a zero block gives both
    ``X_i - X_j`` and ``X_i + X_j`` for each pair and, in type B, every
    coordinate hyperplane ``X_i``.
    """
    if kind != "A" and 0 in block:
        rest = sorted(x for x in block if x != 0)
        out = []
        for i, j in combinations(rest, 2):
            out += [pair_hyperplane(kind, n, i, j), pair_hyperplane(kind, n, i, -j)]
        if kind == "B":
            out += [coordinate_hyperplane(kind, n, i) for i in rest]
        return out
    return [pair_hyperplane(kind, n, a, b) for a, b in combinations(block, 2)]


def coxeter_poset(kind: str, n: int) -> IntersectionPoset:
    _check_kind(kind, n)
    return poset_by_name(f"{kind}{n}")


def partition_to_flat(part: TypedSetPartition, P: IntersectionPoset | None = None) -> int:
    """The flat of ``X_n`` cut out by all blocks of ``part``."""
    P = P or coxeter_poset(part.kind, part.n)
    hyps = [h for b in part.blocks for h in block_hyperplanes(part.kind, part.n, b)]
    return element_for_atoms(P, hyps)


# -- rooted trees -----------------------------------------------------------------


def is_leaf(node: Tree) -> bool:
    return isinstance(node, int)


def leaf_labels(node: Tree) -> list[int]:
    """The descendant leaf labels of ``node``."""
    if is_leaf(node):
        return [node]
    return [x for child in node for x in leaf_labels(child)]


def min_leaf(node: Tree) -> int:
    """The signed label with the smallest absolute value below ``node``."""
    return min(leaf_labels(node), key=abs)


def contains_zero(node: Tree) -> bool:
    return any(x == 0 for x in leaf_labels(node))


def canonical(node: Tree) -> Tree:
    if is_leaf(node):
        return node
    return tuple(sorted((canonical(c) for c in node), key=lambda c: abs(min_leaf(c))))


def parents(node: Tree, depth: int = 0) -> Iterator[tuple[tuple, int]]:
    """Every parent vertex with its generation, root first."""
    if is_leaf(node):
        return
    yield node, depth
    for child in node:
        yield from parents(child, depth + 1)


def is_unbranched(node: Tree) -> bool:
    return len(leaf_labels(node)) == 1


def zero_path(tree: Tree) -> list[tuple]:
    """Ancestors of the leaf labeled 0, from the root down."""
    path = []
    node = tree
    while not is_leaf(node):
        path.append(node)
        node = next(c for c in node if contains_zero(c))
    return path


def zero_branch_vertex(tree: Tree) -> tuple:
    """First ancestor of the 0 leaf having at least two children."""
    return next(v for v in reversed(zero_path(tree)) if len(v) >= 2)


def d_condition(tree: Tree) -> bool:
    """Type D labeling: an all-unbranched family below the 0 branch vertex has size at least 3."""
    v = zero_branch_vertex(tree)
    return not all(is_unbranched(c) for c in v) or len(v) >= 3


def in_standard_form(tree: Tree) -> bool:
    for u in zero_path(tree):
        for child in u:
            if min_leaf(child) < 0:
                return False
    return True


def block(kind: str, node: Tree) -> tuple[int, ...]:
    """The block attached to a vertex, as signed labels sorted by absolute value.

    Leaves give unbarred singletons.  In type A, and on the path to the 0 leaf,
    a parent takes the unbarred union of its children.  Elsewhere the child
    holding the smallest label keeps its block, and every other child block is
    barred exactly when its smallest leaf carries a different bar from the
    smallest leaf of the parent.
    """
    if is_leaf(node):
        return (abs(node),)
    kids = [block(kind, c) for c in node]
    if kind == "A" or contains_zero(node):
        return tuple(sorted({abs(x) for b in kids for x in b}))
    lead = min_leaf(node) < 0
    out: list[int] = []
    for child, b in zip(node, kids):
        flip = (min_leaf(child) < 0) != lead
        out.extend(-x for x in b) if flip else out.extend(b)
    return tuple(sorted(out, key=abs))


def _total_trees_a(items: tuple[int, ...]) -> list[Tree]:
    return list(_total_trees_cached(items))


@lru_cache(maxsize=None)
def _total_trees_cached(items: tuple[int, ...]) -> tuple[Tree, ...]:
    if len(items) == 1:
        return (items[0],)
    out = []
    for part in set_partitions(items):
        if len(part) < 2:
            continue
        for kids in product(*(_total_trees_cached(b) for b in part)):
            out.append(canonical(tuple(kids)))
    return tuple(sorted(out, key=_sort_key))


def _sort_key(tree: Tree) -> tuple:
    if is_leaf(tree):
        return (0, abs(tree), tree < 0)
    return (1, len(tree), tuple(_sort_key(c) for c in tree))


def _relabel(tree: Tree, mapping: dict[int, int]) -> Tree:
    if is_leaf(tree):
        return mapping.get(tree, tree)
    return tuple(_relabel(c, mapping) for c in tree)


def forced_unbarred(tree: Tree) -> set[int]:
    """Labels that standard form keeps unbarred: minima of children off the 0 path hanging from it."""
    out = set()
    for u in zero_path(tree):
        for child in u:
            if not contains_zero(child):
                out.add(abs(min_leaf(child)))
    return out


def bars(tree: Tree, n: int) -> int:
    """``2^n prod_{u on the 0 path} 2^(1 - c(u))``: barrings in standard form."""
    exp = n + sum(1 - len(u) for u in zero_path(tree))
    return 2**exp


def enumerate_total_partitions(kind: str, n: int) -> Iterator[Tree]:
    """Total partitions of type ``kind`` as standard-form trees, each exactly once.

    Every parent has at least two children.  Trees come out in a fixed
    canonical order: by the underlying unbarred tree, then by bar pattern.
    """
    _check_kind(kind, n)
    for tree in _total_trees_a(labels(kind, n)):
        if kind == "A":
            yield tree
            continue
        if kind == "D" and not d_condition(tree):
            continue
        free = [x for x in range(1, n + 1) if x not in forced_unbarred(tree)]
        for signs in product((1, -1), repeat=len(free)):
            yield _relabel(tree, {x: s * x for x, s in zip(free, signs)})


def count_total_partitions(kind: str, n: int) -> int:
    return sum(1 for _ in enumerate_total_partitions(kind, n))


def phi_trees(n: int) -> Iterator[Tree]:
    """Type A total partitions with ``n+1`` relabeled as 0."""
    for tree in _total_trees_a(labels("A", n)):
        yield canonical(_relabel(tree, {n + 1: 0}))


def total_partition_flags(kind: str, n: int) -> list[tuple[TypedSetPartition, ...]]:
    """Total partitions found directly as chains ``0 < P_1 < ... < P_h < 1`` of partitions.

    Consecutive inner partitions may share singleton blocks only.  This is an
    enumeration independent of the tree encoding, used to cross-check it.
    """
    _check_kind(kind, n)
    parts = list(enumerate_partitions(kind, n))
    bottom = max(parts, key=lambda p: len(p.blocks))
    top = next(p for p in parts if len(p.blocks) == 1)
    above = {p: [q for q in parts if q != p and leq(p, q)] for p in parts}
    out = []

    def extend(chain: list[TypedSetPartition]) -> None:
        last = chain[-1]
        for nxt in above[last]:
            if nxt == top:
                out.append(tuple(chain[1:]))
                continue
            if last != bottom and any(len(b) > 1 for b in set(last.blocks) & set(nxt.blocks)):
                continue
            extend(chain + [nxt])

    extend([bottom])
    return out


# -- tree data -------------------------------------------------------------------


def bracket(k: int) -> MultiPoly:
    """``[k] = 1 + kY``."""
    return MultiPoly.univariate([1, k], Y)


def bracket_factorial(k: int) -> MultiPoly:
    out = MultiPoly.constant(1)
    for i in range(1, k + 1):
        out = out * bracket(i)
    return out


def bracket_double_factorial(k: int) -> MultiPoly:
    out = MultiPoly.constant(1)
    for i in range(1, k + 1):
        out = out * bracket(2 * i - 1)
    return out


@dataclass
class TreeData:
    """Per-vertex numbers read off a tree."""

    children: list[int]
    unbranched: list[int]
    blocks: list[tuple[int, ...]]
    on_zero_path: list[bool]
    generation: list[int]
    branch_vertex: int | None  # position of the first branching ancestor of 0


def tree_data(kind: str, tree: Tree) -> TreeData:
    verts = list(parents(tree))
    path_ids = {id(v) for v in zero_path(tree)} if kind != "A" else set()
    branch = None
    if kind != "A":
        target = zero_branch_vertex(tree)
        branch = next(i for i, (v, _) in enumerate(verts) if v is target)
    return TreeData(
        children=[len(v) for v, _ in verts],
        unbranched=[sum(is_unbranched(c) for c in v) for v, _ in verts],
        blocks=[block(kind, v) for v, _ in verts],
        on_zero_path=[id(v) in path_ids for v, _ in verts],
        generation=[g for _, g in verts],
        branch_vertex=branch,
    )


def tree_poincare(kind: str, tree: Tree) -> MultiPoly:
    """The Poincare polynomial attached to a tree (a product over parents)."""
    data = tree_data(kind, tree)
    out = MultiPoly.constant(1)
    for c, zero in zip(data.children, data.on_zero_path):
        out = out * (bracket_double_factorial(c - 1) if zero else bracket_factorial(c - 1))
    if kind == "D":
        i = data.branch_vertex
        c, u = data.children[i], data.unbranched[i]
        # the zero path factor [c-1]!! contains [2c-3]; swap it for [2c-u-2]
        out = _divide_exact(out * bracket(2 * c - u - 2), bracket(2 * c - 3))
    return out


def _divide_exact(num: MultiPoly, linear: MultiPoly) -> MultiPoly:
    """Divide a polynomial in ``Y`` by ``1 + kY`` exactly."""
    a = [int(c) for c in num.univariate_coeffs(Y)]
    k = int(linear.univariate_coeffs(Y)[1]) if len(linear.univariate_coeffs(Y)) > 1 else 0
    if k == 0:
        return num
    out = []
    rem = a[:]
    for i in range(len(rem) - 1):
        out.append(rem[i])
        rem[i + 1] -= k * rem[i]
    if rem[-1] != 0:
        raise ArithmeticError(f"{num} is not divisible by {linear}")
    return MultiPoly.univariate(out or [0], Y)


def block_t_names(kind: str, n: int, blk: Sequence[int]) -> list[str]:
    return [hyperplane_t(h) for h in block_hyperplanes(kind, n, blk)]


def tree_gp_factors(kind: str, n: int, tree: Tree) -> tuple[Monomial, ...]:
    """Monomials ``Z^(|block|-1) prod t_J`` over the non-root parents."""
    data = tree_data(kind, tree)
    out = []
    for blk, gen in zip(data.blocks, data.generation):
        if gen == 0:
            continue
        powers = {Q_INV: len(blk) - 1}
        for name in block_t_names(kind, n, blk):
            powers[name] = powers.get(name, 0) + 1
        out.append(make_monomial(powers))
    return tuple(sorted(out))


def tree_gp_factor(kind: str, n: int, tree: Tree) -> GeometricSeries:
    return GeometricSeries([(1, tree_gp_factors(kind, n, tree))])


def all_hyperplane_monomial(kind: str, n: int) -> Monomial:
    powers = {Q_INV: n}
    for i in range(len(hyperplane_index(kind, n))):
        powers[hyperplane_t(i)] = 1
    return make_monomial(powers)


def _at_minus_z(p: MultiPoly) -> MultiPoly:
    return p.substitute({Y: -MultiPoly.var(Q_INV)})


@dataclass
class TreeFormula:
    """A zeta function assembled from trees.

    ``odd_q_only`` records that the formula is stated for residue fields of
    odd size (types B and D); evaluating at even ``q`` is allowed.
    """

    kind: str
    n: int
    series: GeometricSeries
    odd_q_only: bool
    trees: int


def _assemble(top: Monomial, weighted: list[tuple[MultiPoly, tuple[Monomial, ...]]]) -> GeometricSeries:
    terms = []
    for num, facs in weighted:
        terms.append((num, facs))
        terms.append((num, facs + (top,)))
    return GeometricSeries(terms)


def atom_zeta_total_partitions(kind: str, n: int) -> TreeFormula:
    """Atom zeta function of ``X_n`` as a sum over total partitions.

    ``1/(1 - Z^n prod_J t_J)`` times the sum over trees of the Poincare factor
    at ``-Z`` and the product of the tree's geometric progressions.
    """
    _check_kind(kind, n)
    weighted = []
    for tree in enumerate_total_partitions(kind, n):
        weighted.append((_at_minus_z(tree_poincare(kind, tree)), tree_gp_factors(kind, n, tree)))
    series = _assemble(all_hyperplane_monomial(kind, n), weighted)
    return TreeFormula(kind, n, series, kind != "A", len(weighted))


def sign_identification(kind: str, n: int) -> dict[str, str]:
    """Rename ``t`` of each ``X_i + X_j`` to ``t`` of ``X_i - X_j``."""
    out = {}
    for i, j in combinations(range(1, n + 1), 2):
        out[hyperplane_t(pair_hyperplane(kind, n, i, -j))] = hyperplane_t(pair_hyperplane(kind, n, i, j))
    return out


def rename_vars(series: GeometricSeries, mapping: dict[str, str]) -> GeometricSeries:
    image = {old: MultiPoly.var(new) for old, new in mapping.items()}
    out = substitute(series, image)
    return out if isinstance(out, GeometricSeries) else GeometricSeries.from_poly(out)


def typeA_reduction(kind: str, n: int) -> TreeFormula:
    """The B or D atom zeta function summed over unbarred type A trees only.

    Each tree is weighted by its number of barrings.  Bars change which of
    ``X_i - X_j`` and ``X_i + X_j`` label a factor, so this sum equals the
    full tree sum only after the variables of each such pair are identified
    (see :func:`sign_identification`); the result is stated in the
    identified variables.
    """
    if kind not in ("B", "D"):
        raise ValueError("the reduction to type A trees applies to types B and D")
    _check_kind(kind, n)
    weighted = []
    for tree in phi_trees(n):
        if kind == "D" and not d_condition(tree):
            continue
        pi = _at_minus_z(tree_poincare(kind, tree)).scale(bars(tree, n))
        weighted.append((pi, tree_gp_factors(kind, n, tree)))
    series = _assemble(all_hyperplane_monomial(kind, n), weighted)
    return TreeFormula(kind, n, rename_vars(series, sign_identification(kind, n)), True, len(weighted))


# -- flags from trees ----------------------------------------------------------------


def tree_flag(kind: str, n: int, tree: Tree, P: IntersectionPoset | None = None) -> list[int]:
    """The chain of flats given by the generations of a tree, bottom first.

    Generation ``g`` contributes the partition made of the blocks of its
    vertices together with the leaves of earlier generations; the first and
    last generations (top and bottom) are left out.
    """
    P = P or coxeter_poset(kind, n)
    levels: dict[int, list[tuple[int, ...]]] = {}
    depth = 0

    def walk(node: Tree, gen: int) -> None:
        nonlocal depth
        depth = max(depth, gen)
        levels.setdefault(gen, []).append((node, gen))  # type: ignore[arg-type]
        if not is_leaf(node):
            for c in node:
                walk(c, gen + 1)

    walk(tree, 0)
    flats = []
    for g in range(1, depth):
        blocks = []
        for h in range(0, g + 1):
            for node, _ in levels.get(h, []):
                if h == g or is_leaf(node):
                    blocks.append(block(kind, node))
        hyps = [x for b in blocks for x in block_hyperplanes(kind, n, b)]
        flats.append(element_for_atoms(P, hyps))
    return list(reversed(flats))


# -- unlabeled trees and Igusa's zeta function ----------------------------------------


Shape = tuple  # an unlabeled tree: the sorted tuple of child shapes; a leaf is ()


def _partitions_of(m: int, max_part: int | None = None) -> Iterator[list[int]]:
    max_part = m if max_part is None else max_part
    if m == 0:
        yield []
        return
    for first in range(min(m, max_part), 0, -1):
        for rest in _partitions_of(m - first, first):
            yield [first] + rest


@lru_cache(maxsize=None)
def unlabeled_trees(leaves: int) -> tuple[Shape, ...]:
    """Rooted trees with ``leaves`` leaves in which every parent has at least two children."""
    if leaves == 1:
        return ((),)
    out = set()
    for parts in _partitions_of(leaves):
        if len(parts) < 2:
            continue
        groups = Counter(parts)
        options = [
            list(combinations_with_replacement(unlabeled_trees(size), mult)) for size, mult in groups.items()
        ]
        for pick in product(*options):
            kids = tuple(sorted(s for chosen in pick for s in chosen))
            out.add(kids)
    return tuple(sorted(out, key=lambda s: (_shape_leaves(s), repr(s))))


def _shape_leaves(shape: Shape) -> int:
    return 1 if shape == () else sum(_shape_leaves(c) for c in shape)


def automorphism_count(shape: Shape) -> int:
    """Order of the root-fixing automorphism group: a product of wreath-product orders."""
    if shape == ():
        return 1
    out = 1
    for child, mult in Counter(shape).items():
        out *= math.factorial(mult) * automorphism_count(child) ** mult
    return out


def shape_poincare(shape: Shape) -> MultiPoly:
    out = MultiPoly.constant(1)
    stack = [shape]
    while stack:
        s = stack.pop()
        if s != ():
            out = out * bracket_factorial(len(s) - 1)
            stack.extend(s)
    return out


def shape_gp_factors(shape: Shape) -> tuple[Monomial, ...]:
    """``Z^(nb-1) t^(nb choose 2)`` for each non-root parent with ``nb`` leaves below."""
    out = []
    stack = list(shape)
    while stack:
        s = stack.pop()
        if s != ():
            nb = _shape_leaves(s)
            out.append(make_monomial({Q_INV: nb - 1, "t": math.comb(nb, 2)}))
            stack.extend(s)
    return tuple(sorted(out))


def igusa_unlabeled(n: int) -> GeometricSeries:
    """Igusa's zeta function of the braid arrangement ``A_n`` in ``Z = 1/q`` and ``t = q^-s``."""
    if n < 1:
        raise ValueError("rank must be at least 1")
    top = make_monomial({Q_INV: n, "t": math.comb(n + 1, 2)})
    weighted = []
    for shape in unlabeled_trees(n + 1):
        weight = math.factorial(n + 1) // automorphism_count(shape)
        weighted.append((_at_minus_z(shape_poincare(shape)).scale(weight), shape_gp_factors(shape)))
    return _assemble(top, weighted)


# -- plane trees, Stirling sums and probability sums ---------------------------------


PlaneTree = tuple[tuple[int, ...], ...]  # child counts per generation, left to right


def plane_trees(leaves: int, generations: int) -> Iterator[PlaneTree]:
    """Plane trees with all leaves in the last generation and every generation nontrivial.

    A tree is stored as the list of child-count vectors of generations
    ``0..k-1``; a generation is nontrivial when some count is at least 2, so
    generation sizes strictly increase.
    """

    def grow(level_size: int, remaining: int) -> Iterator[list[tuple[int, ...]]]:
        if remaining == 0:
            if level_size == leaves:
                yield []
            return
        # the next generation must be larger and leave room to keep growing
        max_next = leaves - (remaining - 1)
        for counts in _compositions_bounded(level_size, level_size + 1, max_next):
            for rest in grow(sum(counts), remaining - 1):
                yield [counts] + rest

    if generations < 1 or leaves < 2:
        return
    for levels in grow(1, generations):
        yield tuple(levels)


def _compositions_bounded(parts: int, low: int, high: int) -> Iterator[tuple[int, ...]]:
    """Compositions into ``parts`` positive parts with sum in ``[low, high]``."""

    def rec(k: int, budget: int) -> Iterator[tuple[int, ...]]:
        if k == 0:
            yield ()
            return
        for first in range(1, budget - (k - 1) + 1):
            for rest in rec(k - 1, budget - first):
                yield (first,) + rest

    for total in range(low, high + 1):
        for comp in rec(parts, total):
            if sum(comp) == total:
                yield comp


def plane_tree_count(leaves: int, generations: int) -> int:
    """``|PT(leaves, generations)|`` by direct generation."""
    if generations > leaves - 1:
        raise ValueError("a plane tree with nontrivial generations has fewer generations than leaves")
    return sum(1 for _ in plane_trees(leaves, generations))


@dataclass
class _ZeroLeafData:
    path_children: list[int]  # child counts of the ancestors of the 0 leaf
    branch_children: int
    branch_unbranched: int


def _zero_leaf_data(tree: PlaneTree, leaf: int) -> _ZeroLeafData:
    k = len(tree)
    # leaf counts per vertex, bottom up
    below = [None] * (k + 1)
    below[k] = [1] * sum(tree[-1])
    for g in range(k - 1, -1, -1):
        counts, pos, row = tree[g], 0, []
        for c in counts:
            row.append(sum(below[g + 1][pos : pos + c]))
            pos += c
        below[g] = row
    # walk up from the leaf
    path = []
    idx = leaf
    child_first = None
    for g in range(k - 1, -1, -1):
        counts = tree[g]
        start = 0
        for parent, c in enumerate(counts):
            if idx < start + c:
                break
            start += c
        path.append((g, parent, start, c))
        idx = parent
    path.reverse()  # root first
    for g, parent, start, c in reversed(path):
        if c >= 2:
            child_first = (g, start, c)
            break
    g, start, c = child_first
    unbranched = sum(1 for j in range(start, start + c) if below[g + 1][j] == 1)
    return _ZeroLeafData([c for _, _, _, c in path], c, unbranched)


@dataclass
class ProbabilitySums:
    """Both sides of the two probability identities for plane trees."""

    n: int
    k: int
    b_sum: Fraction
    b_expected: Fraction
    d_sum: Fraction | None
    d_expected: Fraction | None

    @property
    def holds(self) -> bool:
        ok = self.b_sum == self.b_expected
        return ok and (self.d_sum is None or self.d_sum == self.d_expected)


def probability_sums_check(n: int, k: int) -> ProbabilitySums:
    """Evaluate both sums over 0-labeled plane trees by enumeration.

    Each 0-labeled tree stands for ``2^n n!`` labeled trees (the remaining
    labels and their bars), so both sums are rescaled by that factor.  The B
    sum weighs every tree by ``prod_{u on the 0 path} 1/c(u)``; the D sum runs
    over trees passing the type D condition and adds the factor
    ``(2c - u - 1) / (2(c - 1))`` at the branch vertex of the 0 leaf.
    """
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    labelings = 2**n * math.factorial(n)
    b_total = Fraction(0)
    d_total = Fraction(0)
    trees = 0
    for tree in plane_trees(n + 1, k):
        trees += 1
        for leaf in range(n + 1):
            data = _zero_leaf_data(tree, leaf)
            prob = Fraction(1)
            for c in data.path_children:
                prob /= c
            b_total += prob
            c, u = data.branch_children, data.branch_unbranched
            if u < c or c >= 3:
                d_total += Fraction(2 * c - u - 1, 2 * (c - 1)) * prob
    size_b = trees * math.factorial(n + 1) * 2**n
    b_sum = b_total * labelings
    b_expected = Fraction(size_b, n + 1)
    if n < 2:
        return ProbabilitySums(n, k, b_sum, b_expected, None, None)
    d_expected = Fraction(2 ** (n - 1) * math.factorial(n) * math.factorial(k) * stirling2(n, k))
    return ProbabilitySums(n, k, b_sum, b_expected, d_total * labelings, d_expected)


def stirling_flag_sum(kind: str, n: int, k: int) -> Fraction:
    """``sum over flags F of length k-1 in the proper part of pi_F(1) / pi(1)``."""
    _check_kind(kind, n)
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    P = coxeter_poset(kind, n)
    sums = flag_length_sums(P, ground_mask(P, True))
    total = sum(sums[k - 1]) if k - 1 < len(sums) else 0
    return Fraction(total, sum(P.poincare_coeffs(0)))


# -- restrictions ---------------------------------------------------------------


def poincare_product(factors: Sequence[int]) -> list[int]:
    out = [1]
    for k in factors:
        out = [a + k * b for a, b in zip(out + [0], [0] + out)]
    return out


def expected_poincare(kind: str, n: int) -> list[int]:
    if kind == "A":
        return poincare_product(range(1, n + 1))
    if kind == "B":
        return poincare_product([2 * i - 1 for i in range(1, n + 1)])
    return poincare_product([n - 1] + [2 * i - 1 for i in range(1, n)])


def d_restriction_poincare(n: int, m: int) -> list[int]:
    """Poincare polynomial of ``D_n`` plus ``X_1..X_(n-m)``."""
    return poincare_product([2 * n - m - 1] + [2 * i - 1 for i in range(1, n)])


def restriction_failures(kind: str, n: int) -> list[int]:
    """Flats ``x`` whose upper interval does not have the predicted Poincare polynomial.

    Types A and B restrict to the same type of rank ``n - rk x``.  In type D
    the restriction is of type B when ``x`` lies in a coordinate hyperplane,
    and otherwise matches ``D_N`` with ``N - m`` coordinate hyperplanes added.
    """
    P = coxeter_poset(kind, n)
    coords = set()
    if kind == "D":
        coords = {x for x in range(len(P)) if _inside_coordinate_hyperplane(P, n, x)}
    bad = []
    for x in range(len(P)):
        got = P.poincare_coeffs(x)
        N = n - P.ranks[x]
        if N == 0:
            ok = got == [1]
        elif kind != "D" or x in coords:
            ok = got == expected_poincare("B" if kind == "D" else kind, N)
        else:
            ok = any(got == d_restriction_poincare(N, m) for m in range(N + 1))
        if not ok:
            bad.append(x)
    return bad


def _inside_coordinate_hyperplane(P: IntersectionPoset, n: int, x: int) -> bool:
    """Whether the flat lies in some ``X_k = 0``: both ``X_i - X_k`` and ``X_i + X_k`` contain it."""
    hyps = set(P.atom_set(x))
    for k in range(1, n + 1):
        for i in range(1, n + 1):
            if i != k and pair_hyperplane("D", n, i, k) in hyps and pair_hyperplane("D", n, i, -k) in hyps:
                return True
    return False


# -- numeric comparison ------------------------------------------------------------


def agree_at_random_points(a: GeometricSeries, b: GeometricSeries, points: int = 8, seed: int = 0) -> bool:
    """Compare two series at random rational points of ``(0, 1/2)``.

    Every factor monomial then lies strictly between 0 and 1, so no point is a
    pole.  Agreement at several random points is strong evidence of equality
    of rational functions when exact normalization is too expensive.
    """
    rng = random.Random(seed)
    names = sorted(set(a.varset) | set(b.varset))
    for _ in range(points):
        values = {v: Fraction(rng.randint(1, 97), 2 * 97 + rng.randint(1, 50)) for v in names}
        if substitute(a, values) != substitute(b, values):
            return False
    return True


__all__ = [
    "KINDS",
    "ProbabilitySums",
    "TreeData",
    "TreeFormula",
    "TypedSetPartition",
    "agree_at_random_points",
    "atom_zeta_total_partitions",
    "automorphism_count",
    "bars",
    "block",
    "block_hyperplanes",
    "bracket",
    "count_total_partitions",
    "coxeter_poset",
    "d_condition",
    "enumerate_partitions",
    "enumerate_total_partitions",
    "eulerian",
    "igusa_unlabeled",
    "in_standard_form",
    "leq",
    "pair_hyperplane",
    "partition_to_flat",
    "phi_trees",
    "plane_tree_count",
    "plane_trees",
    "probability_sums_check",
    "rename_vars",
    "restriction_failures",
    "set_partitions",
    "sign_identification",
    "stirling2",
    "stirling_flag_sum",
    "tree_data",
    "tree_flag",
    "tree_gp_factor",
    "tree_gp_factors",
    "total_partition_flags",
    "tree_poincare",
    "typeA_reduction",
    "unlabeled_trees",
]
