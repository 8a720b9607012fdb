"""Topological zeta functions as sums of products of reciprocal linear forms."""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .flagseries import flag_terms, s_name
from .poset import IntersectionPoset, bits

# An affine form ``codim + sum of s-variables`` is stored as ``(codim, names)``.
Form = tuple[int, tuple[str, ...]]


def divide_by_one_plus_y(coeffs: Sequence[int], times: int) -> list[int]:
    """Exact quotient of an integer polynomial by ``(1 + Y)^times``.

    Raises :class:`ArithmeticError` when the division leaves a remainder.
    """
    out = list(coeffs)
    for _ in range(times):
        if not out or len(out) == 1 and out[0] == 0:
            return [0]
        quot = [0] * (len(out) - 1)
        rem = list(out)
        for k in range(len(out) - 1, 0, -1):
            quot[k - 1] = rem[k]
            rem[k - 1] -= rem[k]
            rem[k] = 0
        if rem[0] != 0:
            raise ArithmeticError(f"(1 + Y) does not divide {coeffs}")
        out = quot or [0]
    return out


def value_at_minus_one(coeffs: Sequence[int]) -> int:
    return sum(c if k % 2 == 0 else -c for k, c in enumerate(coeffs))


@dataclass(frozen=True)
class NormalizedFlagPoly:
    flag: tuple[int, ...]
    pi_circ: list[int]
    pi_bar: list[int] | None


def pi_normalized(P: IntersectionPoset, flag: Sequence[int]) -> NormalizedFlagPoly:
    """``pi_F/(1+Y)^|F|`` and, for flags of the proper part of a central poset, ``pi_F/(1+Y)^(|F|+1)``."""
    flag = tuple(flag)
    coeffs = P.flag_poincare_coeffs(flag) if flag else P.poincare_coeffs(0)
    circ = divide_by_one_plus_y(coeffs, len(flag))
    bar = None
    if P.is_central and P.rank > 0 and P.top not in flag:
        bar = divide_by_one_plus_y(coeffs, len(flag) + 1)
    return NormalizedFlagPoly(flag, circ, bar)


class LinearRationalSum:
    """``sum coeff / prod(form)`` with each form ``codim + sum s_y``."""

    def __init__(self, terms: Mapping[tuple[Form, ...], Fraction] | None = None) -> None:
        self.terms: dict[tuple[Form, ...], Fraction] = {}
        for key, c in (terms or {}).items():
            self.add(key, c)

    def add(self, forms: Sequence[Form], coeff: Fraction | int) -> None:
        key = tuple(sorted(forms))
        c = self.terms.get(key, Fraction(0)) + coeff
        if c:
            self.terms[key] = c
        else:
            self.terms.pop(key, None)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearRationalSum):
            return NotImplemented
        return self.terms == other.terms

    def scaled_by_form(self, form: Form) -> LinearRationalSum:
        """Multiply every term by ``1/form``."""
        return LinearRationalSum({key + (form,): c for key, c in self.terms.items()})

    def evaluate(self, s: Mapping[str, Fraction | int]) -> Fraction:
        total = Fraction(0)
        for key, c in self.terms.items():
            den = Fraction(1)
            for const, names in key:
                den *= const + sum(Fraction(s.get(n, 0)) for n in names)
            total += c / den
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key, c in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
            dens = "".join(f"/({form_str(f)})" for f in key)
            parts.append(f"{c}{dens}")
        return " + ".join(parts).replace("+ -", "- ")


    def latex(self) -> str:
        """Terms as ``\\frac{c}{(g_1)(g_2)}`` with ``s_{1,2}`` subscripts."""
        if not self.terms:
            return "0"
        parts = []
        for key, c in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if not key:
                body = _latex_fraction(mag)
            else:
                den = "".join(f"({form_latex(f)})" for f in key)
                num = str(mag.numerator)
                if mag.denominator != 1:
                    den = f"{mag.denominator}{den}"
                body = f"\\frac{{{num}}}{{{den}}}"
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def _latex_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"\\frac{{{c.numerator}}}{{{c.denominator}}}"


def _latex_var(name: str) -> str:
    # s[1,2] -> s_{1,2}
    head, _, rest = name.partition("[")
    return f"{head}_{{{rest.rstrip(']')}}}" if rest else name


def form_latex(form: Form) -> str:
    const, names = form
    return " + ".join([str(const)] + [_latex_var(n) for n in names])


def form_str(form: Form) -> str:
    const, names = form
    return " + ".join([str(const)] + list(names))


def g_form(P: IntersectionPoset, x: int) -> Form:
    names = tuple(sorted(s_name(P, y) for y in bits(P.down[x]) if y))
    return (P.ranks[x], names)


def top_zeta_multivariate(P: IntersectionPoset) -> LinearRationalSum:
    """``sum_F pi_circ_F(-1) prod_{x in F} 1/g_x`` over all flags above the bottom."""
    out = LinearRationalSum()
    forms = {x: g_form(P, x) for x in P.ground()}
    for flag, coeffs in flag_terms(P):
        c = value_at_minus_one(divide_by_one_plus_y(coeffs, len(flag)))
        if c:
            out.add([forms[x] for x in flag], c)
    return out


def top_zeta_central(P: IntersectionPoset) -> tuple[Form, LinearRationalSum]:
    """``(g_top, R)`` with the topological zeta function equal to ``R / g_top``.

    ``R`` sums ``pi_bar_F(-1) prod 1/g_x`` over flags of the proper part.
    """
    if not P.is_central or P.rank == 0:
        raise ValueError("needs a central poset of positive rank")
    inner = LinearRationalSum()
    forms = {x: g_form(P, x) for x in P.ground()}
    for flag, coeffs in flag_terms(P, proper=True):
        c = value_at_minus_one(divide_by_one_plus_y(coeffs, len(flag) + 1))
        if c:
            inner.add([forms[x] for x in flag], c)
    return forms[P.top], inner


# -- univariate specialization ------------------------------------------------------

Poly = list[Fraction]  # ascending coefficients in s


def _norm(p: Poly) -> Poly:
    p = [Fraction(c) for c in p]
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p or [Fraction(0)]


def poly_mul(a: Poly, b: Poly) -> Poly:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _norm(out)


def poly_add(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return _norm([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    a, b = _norm(a), _norm(b)
    if b == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    quot = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    for shift in range(len(a) - len(b), -1, -1):
        f = rem[shift + len(b) - 1] / b[-1]
        quot[shift] = f
        for i, c in enumerate(b):
            rem[i + shift] -= f * c
    return _norm(quot), _norm(rem[: len(b) - 1] or [Fraction(0)])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    a, b = _norm(a), _norm(b)
    while b != [0]:
        a, b = b, poly_divmod(a, b)[1]
    if a == [0]:
        return a
    lead = a[-1]
    return [c / lead for c in a]


@dataclass(frozen=True)
class UnivariateRational:
    """Reduced ``numerator/denominator`` in ``s`` with integer, content-free coefficients."""

    numerator: tuple[int, ...]
    denominator: tuple[int, ...]

    @classmethod
    def make(cls, num: Poly, den: Poly) -> UnivariateRational:
        g = poly_gcd(num, den)
        num = poly_divmod(num, g)[0]
        den = poly_divmod(den, g)[0]
        scale = math.lcm(*[c.denominator for c in num + den])
        num = [c * scale for c in num]
        den = [c * scale for c in den]
        content = math.gcd(*[int(c) for c in num + den if c]) or 1
        sign = -1 if den[-1] < 0 else 1
        return cls(
            tuple(int(c) // content * sign for c in _norm(num)),
            tuple(int(c) // content * sign for c in _norm(den)),
        )

    def __call__(self, s: Fraction | int) -> Fraction:
        s = Fraction(s)
        num = sum(c * s**k for k, c in enumerate(self.numerator))
        den = sum(c * s**k for k, c in enumerate(self.denominator))
        return Fraction(num) / den

    def __str__(self) -> str:
        return f"({poly_str(self.numerator)})/({poly_str(self.denominator)})"

    def latex(self) -> str:
        num = poly_str(self.numerator).replace("*", "")
        den = poly_str(self.denominator).replace("*", "")
        return f"\\frac{{{num}}}{{{den}}}"


def poly_str(coeffs: Sequence[int | Fraction], var: str = "s") -> str:
    parts = []
    for k, c in enumerate(coeffs):
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        mag = abs(c)
        body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def univariate_from_sum(P: IntersectionPoset, total: LinearRationalSum) -> UnivariateRational:
    """Specialize ``s_x -> s`` on atoms and ``0`` elsewhere, then reduce."""
    atom_names = {s_name(P, x) for x in P.atom_elements()}

    def linear(form: Form) -> Poly:
        const, names = form
        return [Fraction(const), Fraction(sum(1 for n in names if n in atom_names))]

    factors: dict[tuple[Fraction, Fraction], int] = {}
    for key in total.terms:
        counts: dict[tuple[Fraction, Fraction], int] = {}
        for f in key:
            lf = tuple(linear(f))
            counts[lf] = counts.get(lf, 0) + 1
        for lf, k in counts.items():
            factors[lf] = max(factors.get(lf, 0), k)
    den: Poly = [Fraction(1)]
    for lf, k in factors.items():
        for _ in range(k):
            den = poly_mul(den, list(lf))
    num: Poly = [Fraction(0)]
    for key, c in total.terms.items():
        counts = {}
        for f in key:
            lf = tuple(linear(f))
            counts[lf] = counts.get(lf, 0) + 1
        term: Poly = [Fraction(c)]
        for lf, k in factors.items():
            for _ in range(k - counts.get(lf, 0)):
                term = poly_mul(term, list(lf))
        num = poly_add(num, term)
    return UnivariateRational.make(num, den)


def top_zeta_univariate(P: IntersectionPoset) -> UnivariateRational:
    return univariate_from_sum(P, top_zeta_multivariate(P))


# -- independent check through the expansion at q = 1 --------------------------------


def _series_inverse(a: list[Fraction], order: int) -> list[Fraction]:
    inv = [Fraction(0)] * (order + 1)
    inv[0] = 1 / a[0]
    for n in range(1, order + 1):
        acc = sum(a[k] * inv[n - k] for k in range(1, min(n, len(a) - 1) + 1))
        inv[n] = -acc / a[0]
    return inv


def _series_mul(a: list[Fraction], b: list[Fraction], order: int) -> list[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for i, x in enumerate(a[: order + 1]):
        if x:
            for j in range(order + 1 - i):
                if j < len(b):
                    out[i + j] += x * b[j]
    return out


def _gen_binom(g: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= (g - i) / (i + 1)
    return out


def epsilon_constant_term(P: IntersectionPoset, s: Mapping[int, Fraction | int]) -> Fraction:
    """Constant term at ``q = 1 + eps`` of ``sum_F pi_F(-1/q) prod 1/(q^{g_x} - 1)``.

    Every factor is expanded as a Laurent series in ``eps`` with exact
    coefficients; no division by ``1 + Y`` is used.
    """
    from .flagseries import g_values

    gx = g_values(P, s)
    rank = P.rank
    order = rank + 1
    total = Fraction(0)
    # -1/q = -(1 + eps)^{-1} as a power series
    minus_inv_q = [Fraction((-1) ** (k + 1)) for k in range(order + rank + 2)]
    for flag, coeffs in flag_terms(P):
        width = order + len(flag)
        pi_series = [Fraction(0)] * (width + 1)
        power = [Fraction(1)] + [Fraction(0)] * width
        for k, c in enumerate(coeffs):
            if k:
                power = _series_mul(power, minus_inv_q, width)
            if c:
                pi_series = [a + c * b for a, b in zip(pi_series, power)]
        # each 1/(q^g - 1) = eps^{-1} * 1/(g + C(g,2) eps + ...)
        acc = pi_series
        for x in flag:
            g = gx[x]
            inner = [_gen_binom(g, k + 1) for k in range(width + 1)]
            acc = _series_mul(acc, _series_inverse(inner, width), width)
        shift = len(flag)
        if any(acc[k] for k in range(min(shift, len(acc)))):
            raise ArithmeticError("flag term has a pole at q = 1")
        total += acc[shift]
    return total


def s_by_name(P: IntersectionPoset, s: Mapping[int, Fraction | int]) -> dict[str, Fraction]:
    return {s_name(P, x): Fraction(v) for x, v in s.items()}


__all__ = [
    "LinearRationalSum",
    "NormalizedFlagPoly",
    "UnivariateRational",
    "divide_by_one_plus_y",
    "epsilon_constant_term",
    "form_latex",
    "g_form",
    "pi_normalized",
    "s_by_name",
    "top_zeta_central",
    "top_zeta_multivariate",
    "top_zeta_univariate",
    "univariate_from_sum",
    "value_at_minus_one",
]
