"""Affine hyperplane arrangements over the rationals or a prime field."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path


@dataclass(frozen=True)
class Field:
    """The rationals (``p is None``) or the prime field of order ``p``."""

    p: int | None = None

    def __post_init__(self) -> None:
        if self.p is not None:
            if self.p < 2 or any(self.p % k == 0 for k in range(2, int(self.p**0.5) + 1)):
                raise ValueError(f"only prime fields are supported, got order {self.p}")

    @property
    def is_rational(self) -> bool:
        return self.p is None

    def coerce(self, value: int | Fraction | str) -> Fraction | int:
        v = Fraction(value)
        if self.p is None:
            return v
        if v.denominator % self.p == 0:
            raise ZeroDivisionError(f"{value} has a denominator divisible by {self.p}")
        return v.numerator * pow(v.denominator, -1, self.p) % self.p

    def inv(self, a):
        return 1 / a if self.p is None else pow(a, -1, self.p)

    def norm(self, a):
        return a if self.p is None else a % self.p

    def __str__(self) -> str:
        return "Q" if self.p is None else f"F {self.p}"


Q = Field()


def rref(rows: Iterable[Sequence], field: Field) -> tuple[tuple, ...]:
    """Reduced row echelon form with leading ones, zero rows dropped."""
    mat = [list(r) for r in rows]
    if not mat:
        return ()
    ncols = len(mat[0])
    pivot_row = 0
    p = field.p
    for col in range(ncols):
        pick = next((r for r in range(pivot_row, len(mat)) if mat[r][col]), None)
        if pick is None:
            continue
        mat[pivot_row], mat[pick] = mat[pick], mat[pivot_row]
        inv = field.inv(mat[pivot_row][col])
        lead = [field.norm(x * inv) for x in mat[pivot_row]]
        mat[pivot_row] = lead
        for r in range(len(mat)):
            if r != pivot_row and mat[r][col]:
                f = mat[r][col]
                row = mat[r]
                if p is None:
                    mat[r] = [a - f * b for a, b in zip(row, lead)]
                else:
                    mat[r] = [(a - f * b) % p for a, b in zip(row, lead)]
        pivot_row += 1
        if pivot_row == len(mat):
            break
    return tuple(tuple(r) for r in mat[:pivot_row])


@dataclass(frozen=True)
class LinearForm:
    """``constant + sum coeffs[j] * X_{j+1}`` with entries already in ``field``."""

    constant: Fraction | int
    coeffs: tuple
    field: Field = Q

    def __post_init__(self) -> None:
        if not any(self.coeffs):
            raise ValueError("a linear form needs a nonzero coefficient")

    @classmethod
    def make(cls, constant, coeffs: Sequence, field: Field = Q) -> LinearForm:
        return cls(field.coerce(constant), tuple(field.coerce(c) for c in coeffs), field)

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def row(self) -> tuple:
        """Augmented row ``(a_1, ..., a_d, c)``."""
        return self.coeffs + (self.constant,)

    def normalized_row(self) -> tuple:
        """The row scaled so the first nonzero coefficient is one."""
        return rref([self.row()], self.field)[0]

    def __call__(self, point: Sequence) -> Fraction | int:
        value = self.constant + sum(a * x for a, x in zip(self.coeffs, point))
        return self.field.norm(value)

    def __str__(self) -> str:
        return " ".join(str(v) for v in (self.constant,) + self.coeffs)


class Arrangement:
    """A list of pairwise distinct affine hyperplanes in ``field^dim``."""

    def __init__(self, dim: int, forms: Iterable[LinearForm], field: Field = Q, name: str = "") -> None:
        self.dim = dim
        self.field = field
        self.name = name
        self.forms: tuple[LinearForm, ...] = tuple(forms)
        seen: dict[tuple, int] = {}
        for i, form in enumerate(self.forms):
            if form.field != field:
                raise ValueError(f"form {i} lives over {form.field}, arrangement over {field}")
            if form.dim != dim:
                raise ValueError(f"form {i} has dimension {form.dim}, expected {dim}")
            key = form.normalized_row()
            if key in seen:
                raise ValueError(f"forms {seen[key]} and {i} define the same hyperplane")
            seen[key] = i

    @classmethod
    def from_rows(
        cls, dim: int, rows: Iterable[Sequence], field: Field = Q, name: str = "", dedup: bool = False
    ) -> Arrangement:
        """Rows are ``(constant, a_1, ..., a_d)``; ``dedup`` drops proportional repeats."""
        forms = []
        keys = set()
        for r in rows:
            form = LinearForm.make(r[0], r[1:], field)
            if dedup:
                key = form.normalized_row()
                if key in keys:
                    continue
                keys.add(key)
            forms.append(form)
        return cls(dim, forms, field, name)

    def __len__(self) -> int:
        return len(self.forms)

    def __iter__(self):
        return iter(self.forms)

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<Arrangement{label}: {len(self.forms)} hyperplanes in {self.field}^{self.dim}>"

    def deletion(self, index: int) -> Arrangement:
        return Arrangement(self.dim, self.forms[:index] + self.forms[index + 1 :], self.field)

    def restriction(self, index: int) -> Arrangement:
        """Arrangement induced on the hyperplane ``forms[index]``.

        Coordinates on the hyperplane are the free variables left after
        solving its equation for its first variable with nonzero coefficient.
        Forms that become constant (parallel or equal to the hyperplane) are
        discarded, and coincident traces are merged.
        """
        h = self.forms[index]
        row = h.normalized_row()
        pivot = next(j for j in range(self.dim) if row[j])
        free = [j for j in range(self.dim) if j != pivot]
        rows = []
        for i, form in enumerate(self.forms):
            if i == index:
                continue
            a = form.coeffs[pivot]
            # X_pivot = -(c_h + sum_{j != pivot} h_j X_j)
            new_const = self.field.norm(form.constant - a * row[-1])
            new_coeffs = [self.field.norm(form.coeffs[j] - a * row[j]) for j in free]
            if not any(new_coeffs):
                continue
            rows.append([new_const] + new_coeffs)
        return Arrangement.from_rows(len(free), rows, self.field, dedup=True)

    def reduce_mod(self, p: int) -> Arrangement:
        """Reduce a rational arrangement modulo ``p`` (no deduplication)."""
        if not self.field.is_rational:
            raise ValueError("only rational arrangements can be reduced")
        field = Field(p)
        forms = []
        for form in self.forms:
            for v in form.row():
                if Fraction(v).denominator % p == 0:
                    raise ZeroDivisionError(f"prime {p} divides a denominator in {form}")
            coeffs = tuple(field.coerce(c) for c in form.coeffs)
            forms.append((field.coerce(form.constant), coeffs))
        return _ReducedRows(self.dim, forms, field)

    def to_text(self) -> str:
        lines = [f"dim {self.dim}", f"field {self.field}"]
        lines += [str(f) for f in self.forms]
        return "\n".join(lines) + "\n"


class _ReducedRows(Arrangement):
    """Mod-p image of an arrangement; hyperplanes may collide or vanish."""

    def __init__(self, dim: int, rows: list[tuple], field: Field) -> None:
        self.dim = dim
        self.field = field
        self.name = ""
        self.raw_rows = rows
        forms, keys = [], set()
        for const, coeffs in rows:
            if not any(coeffs):
                continue
            form = LinearForm(const, coeffs, field)
            key = form.normalized_row()
            if key not in keys:
                keys.add(key)
                forms.append(form)
        self.forms = tuple(forms)
        self.collisions = len(rows) - len(forms)


def product(a: Arrangement, b: Arrangement) -> Arrangement:
    """Juxtapose two arrangements on complementary coordinate blocks."""
    if a.field != b.field:
        raise ValueError(f"field mismatch: {a.field} vs {b.field}")
    zero = a.field.coerce(0)
    forms = [LinearForm(f.constant, f.coeffs + (zero,) * b.dim, a.field) for f in a.forms]
    forms += [LinearForm(f.constant, (zero,) * a.dim + f.coeffs, a.field) for f in b.forms]
    return Arrangement(a.dim + b.dim, forms, a.field)


def parse_text(text: str) -> Arrangement:
    """Read the ``dim`` / ``field`` / one-form-per-line text format."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) < 2:
        raise ValueError("expected 'dim d' and 'field ...' header lines")
    head = lines[0].split()
    if head[0] != "dim" or len(head) != 2:
        raise ValueError(f"bad header line {lines[0]!r}")
    dim = int(head[1])
    spec = lines[1].split()
    if spec[0] != "field":
        raise ValueError(f"bad field line {lines[1]!r}")
    if spec[1:] == ["Q"]:
        field = Q
    elif len(spec) == 3 and spec[1] == "F":
        field = Field(int(spec[2]))
    else:
        raise ValueError(f"unsupported field {' '.join(spec[1:])!r}")
    rows = []
    for ln in lines[2:]:
        entries = [Fraction(tok) for tok in ln.split()]
        if len(entries) != dim + 1:
            raise ValueError(f"form {ln!r} should have {dim + 1} entries")
        rows.append(entries)
    return Arrangement.from_rows(dim, rows, field)


def read_arrangement(path: str | Path) -> Arrangement:
    return parse_text(Path(path).read_text())
