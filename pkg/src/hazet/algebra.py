"""Exact sparse polynomials and sums of geometric-progression products.

Everything here works over :class:`fractions.Fraction`.  Exponents may be
negative, so a :class:`MultiPoly` is really a Laurent polynomial; that is what
makes formal inversion of variables cheap.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from typing import Union

Exp = tuple[int, ...]
Scalar = Union[int, Fraction]


class PoleError(ZeroDivisionError):
    """Raised when a substitution sends a factor ``m/(1-m)`` to ``m = 1``."""


def _frac(value: Scalar | str) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


def _union_vars(a: Sequence[str], b: Sequence[str]) -> tuple[str, ...]:
    if tuple(a) == tuple(b):
        return tuple(a)
    seen = list(a)
    for name in b:
        if name not in seen:
            seen.append(name)
    return tuple(seen)


class MultiPoly:
    """Sparse Laurent polynomial with rational coefficients.

    ``vars`` fixes the meaning of each exponent slot.  Terms with a zero
    coefficient are never stored, and iteration follows lexicographic order
    of the exponent vectors.
    """

    __slots__ = ("vars", "terms")

    def __init__(
        self,
        vars: Sequence[str] = (),
        terms: Mapping[Exp, Scalar] | Iterable[tuple[Exp, Scalar]] | None = None,
    ) -> None:
        self.vars: tuple[str, ...] = tuple(vars)
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"repeated variable names in {self.vars}")
        store: dict[Exp, Fraction] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            width = len(self.vars)
            for exp, coeff in items:
                exp = tuple(int(e) for e in exp)
                if len(exp) != width:
                    raise ValueError(f"exponent {exp} does not match variables {self.vars}")
                c = store.get(exp, Fraction(0)) + _frac(coeff)
                if c:
                    store[exp] = c
                else:
                    store.pop(exp, None)
        self.terms: dict[Exp, Fraction] = dict(sorted(store.items()))

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, value: Scalar, vars: Sequence[str] = ()) -> MultiPoly:
        return cls(vars, {(0,) * len(vars): value})

    @classmethod
    def var(cls, name: str, power: int = 1) -> MultiPoly:
        return cls((name,), {(power,): 1})

    @classmethod
    def monomial(cls, powers: Mapping[str, int], coeff: Scalar = 1) -> MultiPoly:
        names = tuple(powers)
        return cls(names, {tuple(powers[n] for n in names): coeff})

    @classmethod
    def univariate(cls, coeffs: Sequence[Scalar], name: str = "Y") -> MultiPoly:
        """Build ``sum coeffs[k] * name**k``."""
        return cls((name,), {(k,): c for k, c in enumerate(coeffs) if c})

    # -- structure ----------------------------------------------------------
    def extend(self, vars: Sequence[str]) -> MultiPoly:
        """Re-express over ``vars``, which must contain every used variable."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        index = {name: i for i, name in enumerate(vars)}
        used = self.used_vars()
        missing = [v for v in used if v not in index]
        if missing:
            raise ValueError(f"variables {missing} missing from target {vars}")
        slots = [(index[name], i) for i, name in enumerate(self.vars) if name in index]
        out: dict[Exp, Fraction] = {}
        for exp, c in self.terms.items():
            new = [0] * len(vars)
            for j, i in slots:
                new[j] = exp[i]
            out[tuple(new)] = c
        return MultiPoly(vars, out)

    def used_vars(self) -> tuple[str, ...]:
        return tuple(
            name for i, name in enumerate(self.vars) if any(e[i] for e in self.terms)
        )

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self.terms.values()), Fraction(0))

    def as_monomial(self) -> tuple[Fraction, dict[str, int]] | None:
        """Return ``(coeff, powers)`` if this is a single term, else ``None``."""
        if len(self.terms) != 1:
            return None
        (exp, c), = self.terms.items()
        return c, {n: e for n, e in zip(self.vars, exp) if e}

    def degree(self, name: str) -> int:
        if name not in self.vars or not self.terms:
            return 0 if self.terms else -1
        i = self.vars.index(name)
        return max(e[i] for e in self.terms)

    def min_degree(self, name: str) -> int:
        if name not in self.vars or not self.terms:
            return 0
        i = self.vars.index(name)
        return min(e[i] for e in self.terms)

    def coefficients(self, name: str) -> dict[int, MultiPoly]:
        """Split by powers of ``name``; values live over the remaining variables."""
        if name not in self.vars:
            return {0: self} if self.terms else {}
        i = self.vars.index(name)
        rest = self.vars[:i] + self.vars[i + 1 :]
        buckets: dict[int, dict[Exp, Fraction]] = {}
        for exp, c in self.terms.items():
            buckets.setdefault(exp[i], {})[exp[:i] + exp[i + 1 :]] = c
        return {k: MultiPoly(rest, v) for k, v in sorted(buckets.items())}

    def univariate_coeffs(self, name: str = "Y") -> list[Fraction]:
        """Dense coefficient list of a polynomial in ``name`` alone."""
        extra = [v for v in self.used_vars() if v != name]
        if extra:
            raise ValueError(f"{self} involves {extra} besides {name}")
        if not self.terms:
            return []
        if self.min_degree(name) < 0:
            raise ValueError(f"{self} has negative powers of {name}")
        out = [Fraction(0)] * (self.degree(name) + 1)
        i = self.vars.index(name) if name in self.vars else None
        for exp, c in self.terms.items():
            out[exp[i] if i is not None else 0] += c
        return out

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other: object) -> MultiPoly | None:
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(other, self.vars)
        return None

    def __add__(self, other: object) -> MultiPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        vars = _union_vars(self.vars, o.vars)
        a, b = self.extend(vars), o.extend(vars)
        out = dict(a.terms)
        for exp, c in b.terms.items():
            out[exp] = out.get(exp, 0) + c
        return MultiPoly(vars, out)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: object) -> MultiPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> MultiPoly:
        return (-self) + other

    def __mul__(self, other: object) -> MultiPoly:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        vars = _union_vars(self.vars, o.vars)
        a, b = self.extend(vars), o.extend(vars)
        out: dict[Exp, Fraction] = {}
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return MultiPoly(vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> MultiPoly:
        if n < 0:
            mono = self.as_monomial()
            if mono is None:
                raise ValueError("only monomials have negative powers")
            c, powers = mono
            return MultiPoly.monomial({k: v * n for k, v in powers.items()}, c**n)
        result = MultiPoly.constant(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: Scalar) -> MultiPoly:
        c = _frac(c)
        return MultiPoly(self.vars, {e: v * c for e, v in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        vars = _union_vars(self.vars, o.vars)
        return self.extend(vars).terms == o.extend(vars).terms

    def __hash__(self) -> int:
        return hash(
            frozenset(
                (tuple((v, e) for v, e in zip(self.vars, exp) if e), c)
                for exp, c in self.terms.items()
            )
        )

    def divide_by_one_minus(self, mono: Mapping[str, int]) -> MultiPoly | None:
        """Exact quotient by ``1 - mono`` or ``None`` when it does not divide.

        ``mono`` must have nonnegative exponents and positive total degree.
        Division runs against a graded order in which ``-mono`` leads, and a
        single polynomial is its own Groebner basis, so a stuck leading term
        proves non-divisibility.
        """
        if any(e < 0 for e in mono.values()) or sum(mono.values()) <= 0:
            raise ValueError("need a nonconstant monomial with nonnegative exponents")
        vars = _union_vars(self.vars, tuple(mono))
        m = tuple(mono.get(v, 0) for v in vars)
        if any(e < 0 for exp in self.extend(vars).terms for e in exp):
            raise ValueError("trial division needs nonnegative exponents")
        rem = dict(self.extend(vars).terms)
        quot: dict[Exp, Fraction] = {}
        while rem:
            lead = max(rem, key=lambda e: (sum(e), e))
            c = rem[lead]
            q = tuple(a - b for a, b in zip(lead, m))
            if any(x < 0 for x in q):
                return None
            # (-c)*q*(1-m) = c*lead - c*q; subtracting it removes lead and adds c*q
            quot[q] = quot.get(q, 0) - c
            del rem[lead]
            rem[q] = rem.get(q, 0) + c
            if not rem[q]:
                del rem[q]
        return MultiPoly(vars, quot)

    # -- evaluation -------------------------------------------------------
    def substitute(self, mapping: Mapping[str, MultiPoly | Scalar]) -> MultiPoly:
        """Replace variables by polynomials or numbers.

        A negative power needs an invertible image, so the image of such a
        variable must be a nonzero number or a single term.
        """
        keep = tuple(v for v in self.vars if v not in mapping)
        images: list[MultiPoly] = []
        for v in self.vars:
            if v in mapping:
                img = mapping[v]
                images.append(img if isinstance(img, MultiPoly) else MultiPoly.constant(img))
            else:
                images.append(MultiPoly.var(v))
        cache: dict[tuple[int, int], MultiPoly] = {}

        def power(i: int, e: int) -> MultiPoly:
            key = (i, e)
            if key not in cache:
                img = images[i]
                if e < 0 and img.is_constant():
                    val = img.constant_value()
                    if val == 0:
                        raise ZeroDivisionError(f"{self.vars[i]} maps to 0 under a negative power")
                    cache[key] = MultiPoly.constant(val**e)
                else:
                    cache[key] = img**e
            return cache[key]

        total = MultiPoly(keep)
        for exp, c in self.terms.items():
            term = MultiPoly.constant(c, keep)
            for i, e in enumerate(exp):
                if e:
                    term = term * power(i, e)
            total = total + term
        return total

    def evaluate(self, mapping: Mapping[str, Scalar]) -> Fraction:
        """Numeric value; every used variable must be assigned."""
        total = Fraction(0)
        vals = [None if v not in mapping else _frac(mapping[v]) for v in self.vars]
        for exp, c in self.terms.items():
            t = c
            for val, e, name in zip(vals, exp, self.vars):
                if e:
                    if val is None:
                        raise KeyError(f"no value for {name}")
                    t *= val**e
            total += t
        return total

    def invert(self, names: Iterable[str]) -> MultiPoly:
        """Formally replace each listed variable ``v`` by ``1/v``."""
        flip = [v in set(names) for v in self.vars]
        return MultiPoly(
            self.vars,
            {tuple(-e if f else e for e, f in zip(exp, flip)): c for exp, c in self.terms.items()},
        )

    # -- presentation -----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": [{"coeff": _coeff_str(c), "exp": list(e)} for e, c in self.terms.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> MultiPoly:
        return cls(data["vars"], {tuple(t["exp"]): Fraction(t["coeff"]) for t in data["terms"]})

    def __repr__(self) -> str:
        return f"MultiPoly({self})"

    def __str__(self) -> str:
        return format_poly(self)


def _coeff_str(c: Fraction) -> str:
    sign = "-" if c < 0 else "+"
    return f"{sign}{abs(c.numerator)}/{c.denominator}"


_SUPERSCRIPT = str.maketrans("-0123456789", "⁻⁰¹²³⁴⁵⁶⁷⁸⁹")


def _mono_str(vars: Sequence[str], exp: Exp, unicode: bool) -> str:
    parts = []
    for name, e in zip(vars, exp):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(name + (str(e).translate(_SUPERSCRIPT) if unicode else f"^{e}"))
    return "*".join(parts) if not unicode else "".join(parts)


def format_poly(p: MultiPoly, unicode: bool = False, order: Sequence[str] | None = None) -> str:
    """Plain text such as ``1 + 3*Y - 2*Y^2``, with ascending degree order."""
    if not p.terms:
        return "0"
    vars = tuple(order) if order is not None else p.vars
    q = p.extend(_union_vars(vars, p.vars))
    items = sorted(q.terms.items(), key=lambda kv: (sum(kv[0]), tuple(reversed(kv[0]))))
    chunks = []
    for exp, c in items:
        mono = _mono_str(q.vars, exp, unicode)
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{mag}{'' if unicode else '*'}{mono}"
        else:
            body = str(mag)
        chunks.append(("-" if c < 0 else "+", body))
    sep = "" if unicode else " "
    out = ("-" if chunks[0][0] == "-" else "") + chunks[0][1]
    for sign, body in chunks[1:]:
        out += f"{sep}{sign}{sep}{body}"
    return out


Monomial = tuple[tuple[str, int], ...]


def make_monomial(powers: Mapping[str, int]) -> Monomial:
    """Canonical hashable monomial: sorted ``(name, exponent)`` pairs, zeros dropped."""
    return tuple(sorted((k, int(v)) for k, v in powers.items() if v))


def monomial_poly(m: Monomial) -> MultiPoly:
    return MultiPoly.monomial(dict(m)) if m else MultiPoly.constant(1)


class GeometricSeries:
    """Finite sum of ``numerator * prod gp(m)`` with ``gp(m) = m/(1-m)``.

    Terms are keyed by the sorted multiset of factor monomials, so adding two
    series automatically collects like factor products.  Numerators are
    :class:`MultiPoly` objects over whatever variables they need.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[MultiPoly | Scalar, Iterable[Monomial]]] = ()) -> None:
        store: dict[tuple[Monomial, ...], MultiPoly] = {}
        for num, factors in terms:
            key = tuple(sorted(factors))
            if any(not m for m in key):
                raise PoleError("gp(1) is a pole")
            num = num if isinstance(num, MultiPoly) else MultiPoly.constant(num)
            prev = store.get(key)
            store[key] = num if prev is None else prev + num
        self.terms: dict[tuple[Monomial, ...], MultiPoly] = {
            k: v for k, v in sorted(store.items()) if not v.is_zero()
        }

    @classmethod
    def from_poly(cls, p: MultiPoly | Scalar) -> GeometricSeries:
        return cls([(p, ())])

    @classmethod
    def gp(cls, m: Monomial | Mapping[str, int]) -> GeometricSeries:
        mono = m if isinstance(m, tuple) else make_monomial(m)
        return cls([(1, (mono,))])

    @property
    def varset(self) -> tuple[str, ...]:
        names: set[str] = set()
        for key, num in self.terms.items():
            names.update(num.used_vars())
            for m in key:
                names.update(v for v, _ in m)
        return tuple(sorted(names))

    def __add__(self, other: object) -> GeometricSeries:
        if isinstance(other, (MultiPoly, int, Fraction)):
            other = GeometricSeries.from_poly(other)
        if not isinstance(other, GeometricSeries):
            return NotImplemented
        return GeometricSeries(
            [(n, k) for k, n in self.terms.items()] + [(n, k) for k, n in other.terms.items()]
        )

    __radd__ = __add__

    def __neg__(self) -> GeometricSeries:
        return GeometricSeries([(-n, k) for k, n in self.terms.items()])

    def __sub__(self, other: object) -> GeometricSeries:
        if isinstance(other, (MultiPoly, int, Fraction)):
            other = GeometricSeries.from_poly(other)
        return self + (-other)

    def __mul__(self, other: object) -> GeometricSeries:
        if isinstance(other, (MultiPoly, int, Fraction)):
            return GeometricSeries([(n * other, k) for k, n in self.terms.items()])
        if not isinstance(other, GeometricSeries):
            return NotImplemented
        return GeometricSeries(
            [(na * nb, ka + kb) for ka, na in self.terms.items() for kb, nb in other.terms.items()]
        )

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    def same_terms(self, other: GeometricSeries) -> bool:
        """Equality of the collected term lists (a sufficient test for equality)."""
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[k] == other.terms[k] for k in self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (MultiPoly, int, Fraction)):
            other = GeometricSeries.from_poly(other)
        if not isinstance(other, GeometricSeries):
            return NotImplemented
        if self.same_terms(other):
            return True
        if _independent_factors(self) and _independent_factors(other):
            return False
        return series_equal(self, other)

    __hash__ = None  # type: ignore[assignment]

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        parts = []
        for key, num in self.terms.items():
            gps = "".join(f"*gp({format_poly(monomial_poly(m))})" for m in key)
            parts.append(f"({num}){gps}")
        return "GeometricSeries(" + (" + ".join(parts) or "0") + ")"

    def to_json(self) -> dict:
        vars = self.varset
        out = []
        for key, num in self.terms.items():
            num = num.extend(vars)
            factors = [[dict(m).get(v, 0) for v in vars] for m in key]
            for exp, c in num.terms.items():
                out.append({"coeff": _coeff_str(c), "exp": list(exp), "factors": factors})
        return {"vars": list(vars), "terms": out}

    @classmethod
    def from_json(cls, data: Mapping) -> GeometricSeries:
        vars = data["vars"]
        terms = []
        for t in data["terms"]:
            num = MultiPoly(vars, {tuple(t["exp"]): Fraction(t["coeff"])})
            factors = [make_monomial(dict(zip(vars, f))) for f in t["factors"]]
            terms.append((num, factors))
        return cls(terms)


def _independent_factors(s: GeometricSeries) -> bool:
    """True when every factor is ``gp(v)`` of a single variable ``v`` absent from numerators.

    The functions ``gp(v)`` of distinct variables are algebraically
    independent, so for such series the collected term lists are unique and
    :meth:`GeometricSeries.same_terms` decides equality on its own.
    """
    factor_vars: set[str] = set()
    for key in s.terms:
        for m in key:
            if len(m) != 1 or m[0][1] != 1:
                return False
            factor_vars.add(m[0][0])
    return all(not factor_vars.intersection(num.used_vars()) for num in s.terms.values())


def series_normalize(
    s: GeometricSeries, cancel: bool = False
) -> tuple[MultiPoly, list[Monomial]]:
    """Write ``s`` as ``numerator / prod(1 - m)``.

    The denominator multiset takes each factor monomial with the largest
    multiplicity seen in any single term.  No common factor is removed unless
    ``cancel`` is set, in which case each ``(1 - m)`` is trial-divided out of
    the numerator as long as the division is exact.
    """
    need: dict[Monomial, int] = {}
    for key in s.terms:
        counts: dict[Monomial, int] = {}
        for m in key:
            counts[m] = counts.get(m, 0) + 1
        for m, k in counts.items():
            need[m] = max(need.get(m, 0), k)
    denom = [m for m in sorted(need) for _ in range(need[m])]
    one_minus = {m: 1 - monomial_poly(m) for m in need}
    numerator = MultiPoly()
    for key, num in s.terms.items():
        counts = {}
        for m in key:
            counts[m] = counts.get(m, 0) + 1
        term = num
        for m in key:
            term = term * monomial_poly(m)
        for m, k in need.items():
            for _ in range(k - counts.get(m, 0)):
                term = term * one_minus[m]
        numerator = numerator + term
    if cancel:
        kept = []
        for m in denom:
            if all(e > 0 for _, e in m):
                q = numerator.divide_by_one_minus(dict(m))
                if q is not None:
                    numerator = q
                    continue
            kept.append(m)
        denom = kept
    return numerator, denom


def series_equal(a: GeometricSeries, b: GeometricSeries) -> bool:
    """Decide equality of two series as rational functions."""
    num, _ = series_normalize(a - b)
    return num.is_zero()


def _gp_value(c: Fraction) -> Fraction:
    if c == 1:
        raise PoleError("gp factor evaluated at 1")
    return c / (1 - c)


def substitute(
    obj: GeometricSeries | MultiPoly, mapping: Mapping[str, MultiPoly | Scalar]
) -> GeometricSeries | MultiPoly | Fraction:
    """Substitute variables, keeping gp-structure where images are monomials.

    A factor ``gp(m)`` whose image is a number ``c`` is replaced by
    ``c/(1-c)``; an image that is a single term with coefficient one stays a
    factor; an image equal to ``1`` raises :class:`PoleError`.  When nothing
    free remains the result is returned as a plain :class:`Fraction`.
    """
    if isinstance(obj, MultiPoly):
        out = obj.substitute(mapping)
        return out.constant_value() if out.is_constant() else out
    terms: list[tuple[MultiPoly, list[Monomial]]] = []
    cache: dict[Monomial, tuple[Fraction, Monomial]] = {}
    for key, num in obj.terms.items():
        new_num = num.substitute(mapping)
        factors: list[Monomial] = []
        for m in key:
            if m not in cache:
                image = monomial_poly(m).substitute(mapping)
                mono = image.as_monomial()
                if mono is None:
                    if image.is_zero():
                        mono = (Fraction(0), {})
                    else:
                        raise ValueError(f"image of gp({m}) is not a monomial: {image}")
                c, powers = mono
                if not powers:
                    cache[m] = (_gp_value(c), ())
                elif c == 1:
                    cache[m] = (Fraction(1), make_monomial(powers))
                else:
                    raise ValueError(f"image of gp({m}) has coefficient {c}; cannot keep structure")
            scale, mono_out = cache[m]
            if mono_out:
                factors.append(mono_out)
            else:
                new_num = new_num.scale(scale)
        terms.append((new_num, factors))
    result = GeometricSeries(terms)
    if all(not key for key in result.terms) and all(n.is_constant() for n in result.terms.values()):
        return sum((n.constant_value() for n in result.terms.values()), Fraction(0))
    return result


def invert_vars(obj: GeometricSeries | MultiPoly, names: Iterable[str]) -> GeometricSeries | MultiPoly:
    """Formally invert the listed variables.

    Each factor monomial is inverted; whenever the inverse has no positive
    exponent it is rewritten with ``gp(1/m) = -1 - gp(m)``, so monomials
    return to nonnegative exponents whenever all their variables are listed.
    """
    names = set(names)
    if isinstance(obj, MultiPoly):
        return obj.invert(names)
    collected: list[tuple[MultiPoly, list[Monomial]]] = []
    for key, num in obj.terms.items():
        partial = [(num.invert(names), [])]
        for m in key:
            flipped = make_monomial({v: (-e if v in names else e) for v, e in m})
            if all(e <= 0 for _, e in flipped):
                back = make_monomial({v: -e for v, e in flipped})
                partial = [(n * -1, fs) for n, fs in partial] + [(n * -1, fs + [back]) for n, fs in partial]
            else:
                partial = [(n, fs + [flipped]) for n, fs in partial]
        collected.extend(partial)
    return GeometricSeries(collected)


def dumps(obj: MultiPoly | GeometricSeries) -> str:
    return json.dumps(obj.to_json(), sort_keys=True)


def loads(text: str) -> MultiPoly | GeometricSeries:
    data = json.loads(text)
    if any("factors" in t for t in data["terms"]):
        return GeometricSeries.from_json(data)
    return MultiPoly.from_json(data)


# -- randomized identity testing --------------------------------------------------

IDENTITY_PRIME = 2**61 - 1


@dataclass
class IdentityTest:
    """Outcome of a modular identity test.

    ``holds`` is exact when False.  When True, the chance that the two
    series differ is at most ``failure_bound`` (Schwartz-Zippel).
    """

    holds: bool
    trials: int
    degree_bound: int
    failure_bound: Fraction


def _numerator_degree_bound(s: GeometricSeries) -> int:
    need: dict[Monomial, int] = {}
    top = 0
    for key, num in s.terms.items():
        counts: dict[Monomial, int] = {}
        for m in key:
            counts[m] = counts.get(m, 0) + 1
        for m, k in counts.items():
            need[m] = max(need.get(m, 0), k)
        for exp in num.terms:
            if any(e < 0 for e in exp):
                raise ValueError("identity testing needs polynomial numerators")
            top = max(top, sum(exp) + sum(e for m in key for _, e in m))
    return top + sum(k * sum(e for _, e in m) for m, k in need.items())


def _eval_mod(s: GeometricSeries, point: Mapping[str, int], prime: int) -> int | None:
    total = 0
    for key, num in s.terms.items():
        acc = 0
        for exp, c in num.terms.items():
            term = c.numerator * pow(c.denominator, -1, prime) % prime
            for name, e in zip(num.vars, exp):
                if e:
                    term = term * pow(point[name], e, prime) % prime
            acc = (acc + term) % prime
        for m in key:
            value = 1
            for name, e in m:
                value = value * pow(point[name], e, prime) % prime
            if value == 1:
                return None
            acc = acc * value % prime * pow(1 - value, -1, prime) % prime
        total = (total + acc) % prime
    return total


def modular_identity_test(
    a: GeometricSeries, b: GeometricSeries, trials: int = 4, seed: int = 0, prime: int = IDENTITY_PRIME
) -> IdentityTest:
    """Compare two series at random points modulo a large prime.

    The difference is ``N / prod(1 - m)`` with ``deg N`` bounded from the
    terms, so each trial wrongly reports agreement with probability at most
    ``deg N / prime``.  This decides equality of rational functions far
    beyond the reach of :func:`series_equal`.  A disagreement is a proof of
    inequality, provided no numerator coefficient has a denominator divisible
    by ``prime``.
    """
    diff = a - b
    degree = _numerator_degree_bound(diff)
    rng = random.Random(seed)
    names = diff.varset
    done = 0
    while done < trials:
        point = {v: rng.randrange(2, prime) for v in names}
        value = _eval_mod(diff, point, prime)
        if value is None:
            continue
        if value != 0:
            return IdentityTest(False, done + 1, degree, Fraction(0))
        done += 1
    return IdentityTest(True, trials, degree, Fraction(degree, prime) ** trials)
