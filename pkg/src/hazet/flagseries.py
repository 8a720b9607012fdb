"""Flag Hilbert-Poincare series, their coarse numerators and specializations.

The fine series is a sum over chains of flats, one term per chain; the coarse
numerator is accumulated chain-length by chain-length without ever listing the
chains, which is what makes the larger catalogue entries tractable.
"""

from __future__ import annotations

import math
import random
import warnings
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .algebra import (
    GeometricSeries,
    Monomial,
    MultiPoly,
    PoleError,
    invert_vars,
    make_monomial,
    substitute,
)
from .arrangement import Arrangement
from .poset import IntersectionPoset, bits, good_reduction_check

Y = "Y"
T = "T"
Q_INV = "Z"  # stands for q^{-1} in specialized series


def t_name(P: IntersectionPoset, x: int) -> str:
    """Canonical variable name of a flat, e.g. ``T[1,2,3]`` for the flat on hyperplanes 1, 2, 3."""
    return "T[" + ",".join(str(i + 1) for i in P.atom_set(x)) + "]"


def s_name(P: IntersectionPoset, x: int) -> str:
    return "s[" + ",".join(str(i + 1) for i in P.atom_set(x)) + "]"


def hyperplane_t(i: int) -> str:
    """Name of the variable ``q^{-s_L}`` attached to hyperplane ``i`` (0-based)."""
    return f"t[{i + 1}]"


# -- integer polynomial helpers (coefficient lists, index = power of Y) ------------


def _padd(a: list[int], b: Sequence[int], scale: int = 1, shift: int = 0) -> list[int]:
    need = len(b) + shift
    if len(a) < need:
        a.extend([0] * (need - len(a)))
    for i, c in enumerate(b):
        if c:
            a[i + shift] += scale * c
    return a


def _pmul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _trim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _mask(elements) -> int:
    m = 0
    for x in elements:
        m |= 1 << x
    return m


def ground_mask(P: IntersectionPoset, proper: bool) -> int:
    return _mask(P.ground(proper))


def _upper_polys(P: IntersectionPoset) -> list[list[int]]:
    cache = getattr(P, "_upper_poly_cache", None)
    if cache is None:
        cache = [P.poincare_coeffs(x) for x in range(len(P))]
        P._upper_poly_cache = cache  # type: ignore[attr-defined]
    return cache


def flag_length_sums(P: IntersectionPoset, gmask: int) -> list[list[int]]:
    """``out[l]`` is the sum of ``pi_F(Y)`` over flags of length ``l`` inside ``gmask``.

    Uses ``V_{l+1}[x] = sum_{y<x} V_l[y] pi[y,x]`` where the interval
    polynomial is expanded through the Moebius rows, so no interval
    polynomial is ever formed: ``W[z] = sum_y V_l[y] mu(y,z) (-Y)^{rk z - rk y}``
    and then ``V_{l+1}[x] = sum_{z<=x} W[z] - V_l[x]``.
    """
    upper = _upper_polys(P)
    ranks = P.ranks
    level: dict[int, list[int]] = {0: [1]}
    out: list[list[int]] = []
    while level:
        total: list[int] = [0]
        for x, v in level.items():
            _padd(total, _pmul(v, upper[x]))
        out.append(_trim(total))
        pushed: dict[int, list[int]] = {}
        for y, v in level.items():
            ry = ranks[y]
            for z, m in P.mu_row(y).items():
                k = ranks[z] - ry
                w = pushed.setdefault(z, [0])
                _padd(w, v, m if k % 2 == 0 else -m, k)
        nxt: dict[int, list[int]] = {}
        for z, w in pushed.items():
            if not any(w):
                continue
            for x in bits(P.up[z] & gmask):
                _padd(nxt.setdefault(x, [0]), w)
        for x, v in level.items():
            if x in nxt:
                _padd(nxt[x], v, -1)
        level = {x: _trim(v) for x, v in nxt.items() if any(v)}
    return out


# -- fine series -----------------------------------------------------------------


@dataclass
class FlagSeries:
    """The fine flag series of a poset, one term per flag."""

    poset: IntersectionPoset
    series: GeometricSeries
    var_names: dict[int, str]
    proper_part: GeometricSeries | None = None

    @property
    def top_var(self) -> str | None:
        P = self.poset
        return self.var_names[P.top] if P.is_central and P.rank > 0 else None

    def factored(self) -> tuple[str, GeometricSeries]:
        """``(T_top, S)`` with ``fHP = S / (1 - T_top)`` for a central poset."""
        if self.proper_part is None or self.top_var is None:
            raise ValueError("only central posets of positive rank have a factored form")
        return self.top_var, self.proper_part

    def evaluate(self, values: Mapping[str, Fraction | int]) -> Fraction:
        out = substitute(self.series, values)
        if not isinstance(out, Fraction):
            raise ValueError("not every variable received a value")
        return out


def _interval_cache(P: IntersectionPoset):
    memo: dict[tuple[int, int], list[int]] = {}

    def interval(a: int, b: int) -> list[int]:
        key = (a, b)
        if key not in memo:
            memo[key] = P.poincare_coeffs(a, b)
        return memo[key]

    return interval


def flag_terms(P: IntersectionPoset, proper: bool = False):
    """Yield ``(flag, pi_F coefficient list)`` for every flag of the ground set."""
    interval = _interval_cache(P)
    upper = _upper_polys(P)
    prefix: dict[tuple[int, ...], list[int]] = {(): [1]}
    for flag in P.enumerate_flags(proper):
        if flag:
            head = prefix[flag[:-1]]
            below = flag[-2] if len(flag) > 1 else 0
            prefix[flag] = _pmul(head, interval(below, flag[-1]))
        last = flag[-1] if flag else 0
        yield flag, _trim(_pmul(prefix[flag], upper[last]))


def fhp(P: IntersectionPoset) -> FlagSeries:
    """Fine flag series ``sum_F pi_F(Y) prod_{x in F} gp(T_x)``."""
    names = {x: t_name(P, x) for x in P.ground()}
    terms = []
    for flag, coeffs in flag_terms(P):
        terms.append((MultiPoly.univariate(coeffs, Y), [make_monomial({names[x]: 1}) for x in flag]))
    proper_part = None
    if P.is_central and P.rank > 0:
        proper_part = GeometricSeries(
            (MultiPoly.univariate(c, Y), [make_monomial({names[x]: 1}) for x in flag])
            for flag, c in flag_terms(P, proper=True)
        )
    return FlagSeries(P, GeometricSeries(terms), names, proper_part)


# -- coarse series --------------------------------------------------------------


def _binom_row(k: int) -> list[int]:
    return [(-1) ** i * math.comb(k, i) for i in range(k + 1)]


@dataclass(frozen=True)
class CoarseSeries:
    """``cfHP(Y, T) = numerator / (1 - T)^rank``."""

    numerator: MultiPoly
    rank: int

    def coefficient_table(self) -> list[list[Fraction]]:
        """``table[j]`` lists the ``Y``-coefficients of the ``T^j`` part of the numerator."""
        if self.numerator.is_zero():
            return []
        by_t = self.numerator.coefficients(T)
        top = max(by_t)
        out = []
        for j in range(top + 1):
            part = by_t.get(j)
            out.append(part.univariate_coeffs(Y) if part is not None else [])
        return out

    def hat_coefficient(self, k: int) -> MultiPoly:
        """Coefficient of ``T^k`` in ``numerator / (1 - T)^(rank + 1)``."""
        e = self.rank + 1
        out = MultiPoly((Y,))
        for j, part in self.numerator.coefficients(T).items():
            if j <= k:
                out = out + part * math.comb(k - j + e - 1, e - 1)
        return out

    def evaluate(self, y: Fraction | int, t: Fraction | int) -> Fraction:
        t = Fraction(t)
        if t == 1 and self.rank:
            raise PoleError("coarse series evaluated at T = 1")
        return self.numerator.evaluate({Y: y, T: t}) / (1 - t) ** self.rank

    def at_y(self, y: Fraction | int) -> MultiPoly:
        return self.numerator.substitute({Y: y})

    def __str__(self) -> str:
        return format_numerator(self.numerator)


def format_numerator(N: MultiPoly, unicode: bool = False) -> str:
    """``T``-graded display such as ``1 + 3*Y + 2*Y^2 + (2 + 3*Y + Y^2)*T``."""
    from .algebra import format_poly

    if N.is_zero():
        return "0"
    chunks = []
    for j, part in N.coefficients(T).items():
        body = format_poly(part, unicode=unicode)
        if j == 0:
            chunks.append(body)
            continue
        tpow = "T" if j == 1 else ("T" + str(j).translate(str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")) if unicode else f"T^{j}")
        single = len(part.terms) == 1
        if single and part.is_constant():
            c = part.constant_value()
            body = tpow if c == 1 else f"{c}{'' if unicode else '*'}{tpow}"
        elif single:
            body = f"{body}{'' if unicode else '*'}{tpow}"
        else:
            body = f"({body}){'' if unicode else '*'}{tpow}"
        chunks.append(body)
    out = chunks[0]
    for c in chunks[1:]:
        if c.startswith("-"):
            out += (" - " if not unicode else "-") + c[1:]
        else:
            out += (" + " if not unicode else "+") + c
    return out


def format_numerator_latex(N: MultiPoly) -> str:
    """Appendix-style LaTeX: ``T``-graded blocks, ascending powers of ``Y``."""
    parts = []
    for j, part in N.coefficients(T).items():
        coeffs = part.univariate_coeffs(Y)
        terms = []
        for k, c in enumerate(coeffs):
            if not c:
                continue
            mag = abs(c)
            mono = "" if k == 0 else ("Y" if k == 1 else f"Y^{{{k}}}")
            body = (str(mag) if mag != 1 or not mono else "") + mono
            terms.append(("-" if c < 0 else "+", body))
        inner = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            inner += f" {sign} {body}"
        tpow = "" if j == 0 else ("T" if j == 1 else f"T^{{{j}}}")
        if j == 0:
            parts.append(inner)
        elif len(terms) == 1:
            parts.append((inner if inner != "1" else "") + tpow)
        else:
            parts.append(f"({inner}){tpow}")
    return " + ".join(parts)


def cfhp(P: IntersectionPoset) -> CoarseSeries:
    """Coarse numerator ``N(Y,T) = sum_l P_l T^l (1-T)^(m-l)``.

    For a central poset the flags run over the proper part and ``m = rank - 1``;
    otherwise over all flats above the bottom with ``m = rank``.
    """
    if P.rank == 0:
        return CoarseSeries(MultiPoly.constant(1, (Y, T)), 0)
    proper = P.is_central
    m = P.rank - 1 if proper else P.rank
    sums = flag_length_sums(P, ground_mask(P, proper))
    terms: dict[tuple[int, int], int] = {}
    for l, poly in enumerate(sums):
        if l > m:
            if any(poly):
                raise AssertionError("flag longer than the rank allows")
            continue
        row = _binom_row(m - l)
        for i, c in enumerate(poly):
            if not c:
                continue
            for j, b in enumerate(row):
                key = (i, l + j)
                terms[key] = terms.get(key, 0) + c * b
    return CoarseSeries(MultiPoly((Y, T), terms), P.rank)


def hadamard_cfhp(a: CoarseSeries, b: CoarseSeries, margin: int = 2) -> CoarseSeries:
    """Hadamard product in ``T`` of the series ``numerator / (1-T)^(rank+1)``.

    Coefficients are multiplied term by term up to a degree bound and the
    numerator recovered by multiplying by the known power of ``(1 - T)``;
    coefficients beyond the bound must vanish or reconstruction fails.
    """
    e = a.rank + b.rank + 1
    bound = e
    top = bound + margin
    coeffs = [a.hat_coefficient(k) * b.hat_coefficient(k) for k in range(top + 1)]
    row = _binom_row(e)
    numer = MultiPoly((Y, T))
    for k in range(top + 1):
        acc = MultiPoly((Y,))
        for j, c in enumerate(row):
            if j <= k:
                acc = acc + coeffs[k - j] * c
        if k > bound:
            if not acc.is_zero():
                raise ValueError(f"Hadamard reconstruction failed: nonzero coefficient at T^{k}")
            continue
        numer = numer + acc * MultiPoly.var(T, k)
    return CoarseSeries(numer.extend((Y, T)), a.rank + b.rank)


def eulerian_coarse(n: int, with_y: bool = False) -> CoarseSeries:
    """``E_n(T)/(1-T)^n``, optionally times ``(1+Y)^n`` (the Boolean arrangement)."""
    from .coxeter import eulerian

    num = eulerian(n).extend((Y, T))
    if with_y:
        num = num * (MultiPoly.univariate([1, 1], Y) ** n)
    return CoarseSeries(num.extend((Y, T)), n)


def sr_hilbert_check(P: IntersectionPoset) -> bool:
    """Check the ``Y = 0`` slice against the order complex of the whole poset.

    Asserts ``N(Y,0) = pi_A(Y)``, nonnegativity of ``N(0,T)``, and that
    ``N(0,T)`` is the h-vector of the chains of ``L(A)`` (bottom included),
    where the chain counts come from a separate direct count.
    """
    C = cfhp(P)
    N = C.numerator
    if N.substitute({T: 0}) != P.poincare(var=Y).extend((Y,)):
        return False
    slice0 = N.substitute({Y: 0})
    h = slice0.univariate_coeffs(T) if not slice0.is_zero() else []
    if any(c < 0 for c in h):
        return False
    # f[k] = number of chains of k elements in L(A)
    n = len(P)
    size = P.rank + 1
    ending = [[0] * (size + 1) for _ in range(n)]
    f = [0] * (size + 1)
    f[0] = 1
    for x in range(n):
        ending[x][1] = 1
        for y in bits(P.down[x] & ~(1 << x)):
            for k in range(1, size):
                ending[x][k + 1] += ending[y][k]
        for k in range(1, size + 1):
            f[k] += ending[x][k]
    expected = [Fraction(0)] * (size + 1)
    for k, fk in enumerate(f):
        for j, b in enumerate(_binom_row(size - k)):
            expected[k + j] += fk * b
    while len(expected) > 1 and expected[-1] == 0:
        expected.pop()
    while len(h) > 1 and h[-1] == 0:
        h.pop()
    return list(expected) == [Fraction(c) for c in (h or [0])]


# -- reciprocity ----------------------------------------------------------------


@dataclass
class ReciprocityReport:
    holds: bool
    lhs: GeometricSeries
    rhs: GeometricSeries
    witness: str = ""


def _first_difference(a: GeometricSeries, b: GeometricSeries) -> str:
    for key in sorted(set(a.terms) | set(b.terms)):
        x = a.terms.get(key)
        y = b.terms.get(key)
        if x is None or y is None or x != y:
            return f"factor set {key}: {x} vs {y}"
    return ""


def inverted_fhp(F: FlagSeries) -> GeometricSeries:
    """``fHP(Y^-1, T^-1)`` written with nonnegative powers of the ``T`` variables."""
    return invert_vars(F.series, {Y, *F.var_names.values()})


def reciprocity_check(P: IntersectionPoset, F: FlagSeries | None = None) -> ReciprocityReport:
    """Compare ``fHP(Y^-1, T^-1)`` with ``(-Y)^-rank T_top fHP(Y, T)``.

    Using ``fHP = (1 + gp(T_top)) S`` the right side is ``(-Y)^-rank gp(T_top) S``.
    Both sides are sums of products of ``gp`` of distinct variables with
    coefficients in ``Y``, so term-by-term comparison decides equality.
    """
    if not P.is_central:
        raise ValueError("reciprocity needs a central arrangement")
    F = F or fhp(P)
    r = P.rank
    lhs = inverted_fhp(F)
    if r == 0:
        rhs = F.series
    else:
        top, S = F.factored()
        scale = MultiPoly.monomial({Y: -r}, (-1) ** r)
        rhs = S * GeometricSeries.gp({top: 1}) * scale
    holds = lhs == rhs
    return ReciprocityReport(holds, lhs, rhs, "" if holds else _first_difference(lhs, rhs))


def noncentral_defect(F: FlagSeries) -> GeometricSeries:
    """``fHP(Y^-1, T^-1) + Y^-1 fHP(Y, T)``; for parallel lines this is ``1 + Y^-1``."""
    return inverted_fhp(F) + F.series * MultiPoly.monomial({Y: -1})


def subset_complement_check(P: IntersectionPoset, subset: Sequence[int]) -> tuple[bool, list[int], list[int]]:
    """Signed flag sums over ``S`` and over its complement in the proper part.

    Checks ``sum_{F in D(S)} (-1)^|F| pi_F(Y) = -(-Y)^rank sum_{F in D(S^c)} (-1)^|F| pi_F(1/Y)``
    and returns both sides as coefficient lists.
    """
    proper = set(P.ground(proper=True))
    S = set(subset)
    if not S <= proper:
        raise ValueError("subset must lie in the proper part")
    r = P.rank

    def signed(mask: int) -> list[int]:
        acc = [0]
        for l, poly in enumerate(flag_length_sums(P, mask)):
            _padd(acc, poly, -1 if l % 2 else 1)
        return acc

    lhs = _trim(signed(_mask(S)))
    inner = signed(_mask(proper - S))
    inner = inner + [0] * (r + 1 - len(inner))
    sign = -((-1) ** r)
    rhs = _trim([sign * c for c in reversed(inner[: r + 1])])
    if any(inner[r + 1 :]):
        return False, lhs, rhs
    return lhs == rhs, lhs, rhs


def random_subset_checks(P: IntersectionPoset, count: int = 20, seed: int = 0) -> list[bool]:
    rng = random.Random(seed)
    proper = P.ground(proper=True)
    results = []
    for _ in range(count):
        chosen = [x for x in proper if rng.random() < 0.5]
        results.append(subset_complement_check(P, chosen)[0])
    return results


# -- exponent maps and the analytic zeta function ----------------------------------


@dataclass
class ExponentMap:
    """Affine maps ``g`` (from ``s`` to exponents) and ``h`` (its inverse)."""

    poset: IntersectionPoset
    g: dict[int, MultiPoly] = field(default_factory=dict)
    h: dict[int, MultiPoly] = field(default_factory=dict)


def exponent_map(P: IntersectionPoset) -> ExponentMap:
    """Formal ``g_x(s) = codim x + sum_{y<=x} s_y`` and ``h_x(r) = sum_y (r_y - codim y) mu(y,x)``."""
    em = ExponentMap(P)
    for x in P.ground():
        g = MultiPoly.constant(P.ranks[x])
        h = MultiPoly()
        for y in bits(P.down[x]):
            if y == 0:
                continue
            g = g + MultiPoly.var(s_name(P, y))
            m = P.moebius(y, x)
            if m:
                r = MultiPoly.var(s_name(P, y).replace("s[", "r[", 1))
                h = h + (r - P.ranks[y]) * m
        em.g[x] = g
        em.h[x] = h
    return em


def g_values(P: IntersectionPoset, s: Mapping[int, Fraction | int]) -> dict[int, Fraction]:
    """Numeric ``g_x(s)``; flats missing from ``s`` get exponent 0."""
    out = {}
    for x in P.ground():
        total = Fraction(P.ranks[x])
        for y in bits(P.down[x]):
            if y:
                total += Fraction(s.get(y, 0))
        out[x] = total
    return out


def moebius_exponent_shift(P: IntersectionPoset, r: Mapping[int, Fraction | int]) -> dict[int, Fraction]:
    """Numeric ``h_x(r)``; composing with :func:`g_values` gives back ``r``."""
    out = {}
    for x in P.ground():
        total = Fraction(0)
        for y in bits(P.down[x]):
            if y:
                total += (Fraction(r.get(y, 0)) - P.ranks[y]) * P.moebius(y, x)
        out[x] = total
    return out


def weighted_flag_sum(P: IntersectionPoset, y: Fraction, weights: Mapping[int, Fraction], proper: bool = False) -> Fraction:
    """``sum_F pi_F(y) prod_{x in F} weights[x]`` by the same chain recursion as :func:`flag_length_sums`."""
    gmask = ground_mask(P, proper)
    upper = [sum(Fraction(c) * y**k for k, c in enumerate(p)) for p in _upper_polys(P)]
    ranks = P.ranks
    level: dict[int, Fraction] = {0: Fraction(1)}
    total = Fraction(0)
    powers = [(-y) ** k for k in range(P.rank + 1)]
    while level:
        total += sum(v * upper[x] for x, v in level.items())
        pushed: dict[int, Fraction] = {}
        for a, v in level.items():
            for z, m in P.mu_row(a).items():
                pushed[z] = pushed.get(z, 0) + v * m * powers[ranks[z] - ranks[a]]
        nxt: dict[int, Fraction] = {}
        for z, w in pushed.items():
            if w:
                for x in bits(P.up[z] & gmask):
                    nxt[x] = nxt.get(x, 0) + w
        for x, v in level.items():
            if x in nxt:
                nxt[x] -= v
        level = {x: v * weights[x] for x, v in nxt.items() if v and weights[x]}
    return total


def _exact_root(q: Fraction, d: int) -> Fraction | None:
    def iroot(n: int) -> int | None:
        r = round(n ** (1.0 / d))
        for c in (r - 1, r, r + 1):
            if c >= 0 and c**d == n:
                return c
        return None

    a, b = iroot(q.numerator), iroot(q.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % k for k in range(2, math.isqrt(n) + 1))


def analytic_zeta(
    P: IntersectionPoset,
    q: Fraction | int,
    s: Mapping[int, Fraction | int],
    arrangement: Arrangement | None = None,
) -> Fraction | GeometricSeries:
    """``fHP(-1/q, (q^{-g_x(s)}))`` evaluated exactly.

    ``s`` maps poset elements to exponents (missing entries are 0).  When some
    ``g_x`` is fractional and ``q`` is not a perfect power of the needed order,
    the value is returned as a series in the formal root ``u = q^(-1/D)``.
    """
    q = Fraction(q)
    if q <= 1:
        raise ValueError("q must exceed 1")
    if arrangement is not None and q.denominator == 1 and _is_prime(q.numerator):
        try:
            good = good_reduction_check(arrangement, q.numerator)
        except ZeroDivisionError:
            good = False
        if not good:
            warnings.warn(f"{q} is a bad prime for this arrangement", stacklevel=2)
    gx = g_values(P, s)
    D = math.lcm(*[v.denominator for v in gx.values()]) if gx else 1
    if D == 1:
        base = 1 / q
    else:
        root = _exact_root(q, D)
        if root is None:
            return _formal_root_zeta(P, gx, D)
        base = 1 / root
    weights = {}
    for x, g in gx.items():
        val = base ** int(g * D)
        if val == 1:
            raise PoleError(f"g = 0 at flat {P.label(x)}")
        weights[x] = val / (1 - val)
    return weighted_flag_sum(P, -1 / q, weights)


def _formal_root_zeta(P: IntersectionPoset, gx: Mapping[int, Fraction], D: int) -> GeometricSeries:
    F = fhp(P)
    mapping: dict[str, MultiPoly] = {Y: -MultiPoly.var("u", D)}
    for x, g in gx.items():
        mapping[F.var_names[x]] = MultiPoly.var("u", int(g * D))
    out = substitute(F.series, mapping)
    return out if isinstance(out, GeometricSeries) else GeometricSeries.from_poly(out)


def stratified_zeta(P: IntersectionPoset, q: Fraction | int, s: Mapping[int, Fraction | int]) -> Fraction:
    """The same zeta value through the stratification by residue flats.

    ``Z[x]`` is the zeta function of the localization at ``x`` (the interval
    ``[0, x]``) and satisfies
    ``Z[x] (1 - q^{-g_x}) = sum_{y<x} q^{-g_y} pi_{[y,x]}(-1/q) Z[y]``;
    the whole arrangement is ``sum_y q^{-g_y} pi_{[y, .]}(-1/q) Z[y]``.
    Integer exponents only.
    """
    q = Fraction(q)
    gx = g_values(P, s)
    gx[0] = Fraction(0)
    if any(v.denominator != 1 for v in gx.values()):
        raise ValueError("stratified evaluation needs integer exponents")
    y = -1 / q
    Z: dict[int, Fraction] = {0: Fraction(1)}
    factor = {x: q ** (-int(v)) for x, v in gx.items()}

    def interval_value(a: int, b: int | None) -> Fraction:
        coeffs = P.poincare_coeffs(a, b)
        return sum(Fraction(c) * y**k for k, c in enumerate(coeffs))

    for x in range(1, len(P)):
        acc = sum(factor[w] * interval_value(w, x) * Z[w] for w in bits(P.down[x] & ~(1 << x)))
        denom = 1 - factor[x]
        if denom == 0:
            raise PoleError(f"g = 0 at flat {P.label(x)}")
        Z[x] = acc / denom
    return sum(factor[w] * interval_value(w, None) * Z[w] for w in range(len(P)))


# -- specializations --------------------------------------------------------------


def _specialize(F: FlagSeries, image: Mapping[str, MultiPoly]) -> GeometricSeries:
    out = substitute(F.series, image)
    return out if isinstance(out, GeometricSeries) else GeometricSeries.from_poly(out)


def atom_specialization(F: FlagSeries) -> GeometricSeries:
    """Atom zeta function in ``Z = 1/q`` and ``t[L] = q^{-s_L}``.

    Only atoms carry an exponent, so ``T_x -> Z^{rk x} prod_{L <= x} t[L]``
    and ``Y -> -Z``.
    """
    P = F.poset
    image: dict[str, MultiPoly] = {Y: -MultiPoly.var(Q_INV)}
    for x, name in F.var_names.items():
        powers = {Q_INV: P.ranks[x]}
        for i in P.atom_set(x):
            powers[hyperplane_t(i)] = 1
        image[name] = MultiPoly.monomial(powers)
    return _specialize(F, image)


def igusa_specialization(F: FlagSeries) -> GeometricSeries:
    """Igusa zeta function of the product of the forms, in ``Z = 1/q`` and ``t = q^{-s}``."""
    P = F.poset
    image: dict[str, MultiPoly] = {Y: -MultiPoly.var(Q_INV)}
    for x, name in F.var_names.items():
        image[name] = MultiPoly.monomial({Q_INV: P.ranks[x], "t": len(P.atom_set(x))})
    return _specialize(F, image)


def motivic_specialization(F: FlagSeries) -> GeometricSeries:
    """``fHP(-Y^-1, (Y^{-rk x} T^{|A_x|}))`` as a series in ``Y`` and ``T``."""
    P = F.poset
    image: dict[str, MultiPoly] = {Y: MultiPoly.monomial({Y: -1}, -1)}
    for x, name in F.var_names.items():
        image[name] = MultiPoly.monomial({Y: -P.ranks[x], T: len(P.atom_set(x))})
    return _specialize(F, image)


def evaluate_specialized(series: GeometricSeries, q: Fraction | int, s: Mapping[str, Fraction | int]) -> Fraction:
    """Evaluate an atom or Igusa series at ``q`` and integer exponents ``s`` keyed by ``t`` names."""
    q = Fraction(q)
    values: dict[str, Fraction] = {Q_INV: 1 / q}
    for name in series.varset:
        if name != Q_INV:
            values[name] = q ** (-Fraction(s.get(name, 0)))
    out = substitute(series, values)
    return out if isinstance(out, Fraction) else Fraction(0)


def power_series_coefficients(
    series: GeometricSeries, var: str, order: int, values: Mapping[str, Fraction | int]
) -> list[Fraction]:
    """Expand in ``var`` up to ``var^order`` with every other variable numeric."""
    values = {k: Fraction(v) for k, v in values.items()}
    total = [Fraction(0)] * (order + 1)

    def split(m: Monomial) -> tuple[Fraction, int]:
        c = Fraction(1)
        b = 0
        for name, e in m:
            if name == var:
                b = e
            else:
                c *= values[name] ** e
        return c, b

    def mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
        out = [Fraction(0)] * (order + 1)
        for i, x in enumerate(a):
            if x:
                for j in range(order + 1 - i):
                    if b[j]:
                        out[i + j] += x * b[j]
        return out

    for key, num in series.terms.items():
        acc = [Fraction(0)] * (order + 1)
        for exp, c in num.terms.items():
            coeff = Fraction(c)
            power = 0
            for name, e in zip(num.vars, exp):
                if name == var:
                    power = e
                elif e:
                    coeff *= values[name] ** e
            if power < 0:
                raise ValueError(f"negative power of {var} in a numerator")
            if power <= order:
                acc[power] += coeff
        for m in key:
            c, b = split(m)
            factor = [Fraction(0)] * (order + 1)
            if b == 0:
                if c == 1:
                    raise PoleError("gp factor evaluated at 1")
                factor[0] = c / (1 - c)
            elif b < 0:
                raise ValueError(f"negative power of {var} in a gp factor")
            else:
                for j in range(1, order // b + 1):
                    factor[j * b] = c**j
            acc = mul(acc, factor)
        total = [x + y for x, y in zip(total, acc)]
    return total


# -- Boolean and weak-order series -------------------------------------------------


def _subset_name(J: Sequence[int]) -> str:
    return "T[" + ",".join(str(j) for j in sorted(J)) + "]"


def weak_order_zeta(n: int, coarse: bool = False) -> GeometricSeries:
    """Sum over chains of nonempty subsets of ``[n]`` of ``prod gp(T_J)``.

    With ``coarse`` every ``T_J`` becomes the single variable ``T``.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    subsets = [frozenset(c) for k in range(1, n + 1) for c in combinations(range(1, n + 1), k)]
    terms = []
    stack: list[tuple[frozenset[int] | None, list[str]]] = [(None, [])]
    while stack:
        last, chain = stack.pop()
        terms.append((1, [make_monomial({T if coarse else name: 1}) for name in chain]))
        for J in subsets:
            if last is None or (last < J):
                stack.append((J, chain + [_subset_name(J)]))
    return GeometricSeries(terms)


def ask_series(mu: Mapping[Sequence[int] | frozenset, int], n: int) -> GeometricSeries:
    """Ask zeta function of a hypergraph on ``[n]`` as a series in ``Z = 1/q`` and ``t = q^{-s}``.

    ``mu`` maps subsets of ``[n]`` (1-based, the empty set allowed) to
    hyperedge multiplicities.  Built from the Boolean arrangement on ``n+1``
    coordinates with ``T_J = Z^{a_J} t^{[n+1 in J]}`` and the factor
    ``1/(1 - Z)``.
    """
    mult = {frozenset(k): int(v) for k, v in mu.items()}
    m = sum(mult.values())
    last = n + 1
    wo = weak_order_zeta(n + 1)

    def exponent(J: frozenset[int]) -> tuple[int, int]:
        a = len(J)
        b = 0
        if last in J:
            b = 1
            a += m - mult.get(frozenset(), 0) - n - 1
            rest = J - {last}
            for k in range(1, len(rest) + 1):
                for I in combinations(sorted(rest), k):
                    a -= mult.get(frozenset(I), 0)
        return a, b

    image: dict[str, MultiPoly] = {}
    for k in range(1, n + 2):
        for J in combinations(range(1, n + 2), k):
            a, b = exponent(frozenset(J))
            image[_subset_name(J)] = MultiPoly.monomial({Q_INV: a, "t": b})
    boolean = substitute(wo, image)
    boolean = boolean if isinstance(boolean, GeometricSeries) else GeometricSeries.from_poly(boolean)
    one_minus_z = MultiPoly.univariate([1, -1], Q_INV)
    boolean = boolean * (one_minus_z ** (n + 1))
    return boolean * (GeometricSeries.from_poly(1) + GeometricSeries.gp({Q_INV: 1}))


def ask_coefficients(mu: Mapping, n: int, q: int, order: int) -> list[Fraction]:
    """Average kernel sizes over ``O/p^k`` for ``k = 0..order`` from the closed form."""
    return power_series_coefficients(ask_series(mu, n), "t", order, {Q_INV: Fraction(1, q)})


def ask_brute_force(mu: Mapping, n: int, p: int, k: int) -> Fraction:
    """Average of ``|{x in (Z/p^k)^n : x a = 0}|`` over support-constrained matrices ``a``."""
    from itertools import product as iproduct

    mod = p**k
    columns: list[frozenset[int]] = []
    for support, count in mu.items():
        columns += [frozenset(support)] * int(count)
    cells = [(i, j) for j, col in enumerate(columns) for i in sorted(col)]
    vectors = list(iproduct(range(mod), repeat=n))
    total = 0
    count = 0
    for entries in iproduct(range(mod), repeat=len(cells)):
        a = {cell: v for cell, v in zip(cells, entries)}
        kernel = 0
        for x in vectors:
            if all(
                sum(x[i - 1] * a[(i, j)] for i in sorted(col)) % mod == 0 for j, col in enumerate(columns)
            ):
                kernel += 1
        total += kernel
        count += 1
    return Fraction(total, count)


__all__ = [
    "CoarseSeries",
    "ExponentMap",
    "FlagSeries",
    "ReciprocityReport",
    "analytic_zeta",
    "ask_brute_force",
    "ask_coefficients",
    "ask_series",
    "atom_specialization",
    "cfhp",
    "exponent_map",
    "fhp",
    "flag_length_sums",
    "format_numerator",
    "format_numerator_latex",
    "g_values",
    "hadamard_cfhp",
    "igusa_specialization",
    "moebius_exponent_shift",
    "random_subset_checks",
    "noncentral_defect",
    "inverted_fhp",
    "power_series_coefficients",
    "evaluate_specialized",
    "t_name",
    "motivic_specialization",
    "reciprocity_check",
    "sr_hilbert_check",
    "stratified_zeta",
    "subset_complement_check",
    "weak_order_zeta",
    "weighted_flag_sum",
]
