"""Exact affine forms, affine subspaces and Fraction linear algebra.

Coordinates are named; a form is stored as a coefficient tuple aligned
with the name tuple of its space plus a rational constant.  Subspaces
are kept in reduced row echelon form over a fixed coordinate order, so
two descriptions of the same locus compare equal and reduction of a
form modulo a subspace is canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[Fraction, ...]


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def vec(values: Iterable) -> Vec:
    return tuple(frac(v) for v in values)


def zero_vec(m: int) -> Vec:
    return (Fraction(0),) * m


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise ValueError("length mismatch")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def vadd(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u: Sequence[Fraction]) -> Vec:
    c = frac(c)
    return tuple(c * a for a in u)


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns nonzero rows and pivot columns.

    >>> out, piv = rref([[Fraction(2), Fraction(4)], [Fraction(1), Fraction(2)]])
    >>> out, piv
    ([[Fraction(1, 1), Fraction(2, 1)]], [0])
    """
    mat = [list(map(frac, r)) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        pv = mat[r][c]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def det(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant by fraction-free-ish Gaussian elimination.

    >>> det([[Fraction(1), Fraction(2)], [Fraction(3), Fraction(4)]])
    Fraction(-2, 1)
    """
    n = len(matrix)
    if any(len(r) != n for r in matrix):
        raise ValueError("square matrix required")
    mat = [list(map(frac, r)) for r in matrix]
    sign = Fraction(1)
    for c in range(n):
        pivot = None
        for i in range(c, n):
            if mat[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            mat[c], mat[pivot] = mat[pivot], mat[c]
            sign = -sign
        for i in range(c + 1, n):
            f = mat[i][c] / mat[c][c]
            mat[i] = [x - f * y for x, y in zip(mat[i], mat[c])]
    out = sign
    for c in range(n):
        out *= mat[c][c]
    return out


def solve(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Vec:
    """Unique solution of ``matrix @ x = rhs``; raises when not unique.

    >>> solve([[Fraction(2), Fraction(0)], [Fraction(0), Fraction(4)]],
    ...       [Fraction(1), Fraction(1)])
    (Fraction(1, 2), Fraction(1, 4))
    """
    n = len(matrix)
    if n == 0:
        if rhs:
            raise ValueError("shape mismatch")
        return ()
    ncols = len(matrix[0])
    aug = [list(map(frac, row)) + [frac(b)] for row, b in zip(matrix, rhs)]
    reduced, pivots = rref(aug)
    if ncols in pivots:
        raise ValueError("inconsistent system")
    if len(pivots) != ncols:
        raise ValueError("solution not unique")
    x = [Fraction(0)] * ncols
    for row, p in zip(reduced, pivots):
        x[p] = row[-1]
    return tuple(x)


@dataclass(frozen=True)
class AffineForm:
    """Exact affine functional ``sum coeffs[i] * names[i] + constant``.

    >>> f = AffineForm(("a", "b"), (Fraction(1), Fraction(-1)), Fraction(1, 2))
    >>> str(f)
    'a-b+1/2'
    >>> f.evaluate({"a": Fraction(1), "b": Fraction(2)})
    Fraction(-1, 2)
    """

    names: tuple[str, ...]
    coeffs: Vec
    constant: Fraction

    def __post_init__(self) -> None:
        if len(self.names) != len(self.coeffs):
            raise ValueError("coefficient count must match coordinate count")

    @classmethod
    def from_dict(cls, names: Sequence[str], terms: dict[str, object], constant=0) -> AffineForm:
        unknown = set(terms) - set(names)
        if unknown:
            raise ValueError("unknown coordinates: %s" % sorted(unknown))
        return cls(
            tuple(names),
            tuple(frac(terms.get(nm, 0)) for nm in names),
            frac(constant),
        )

    @classmethod
    def constant_form(cls, names: Sequence[str], constant) -> AffineForm:
        return cls(tuple(names), zero_vec(len(names)), frac(constant))

    def is_zero(self) -> bool:
        return self.constant == 0 and all(c == 0 for c in self.coeffs)

    def is_constant(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def linear(self) -> Vec:
        return self.coeffs

    def evaluate(self, point: dict[str, Fraction]) -> Fraction:
        return self.constant + sum(
            (c * frac(point[nm]) for nm, c in zip(self.names, self.coeffs) if c != 0),
            Fraction(0),
        )

    def __add__(self, other: AffineForm) -> AffineForm:
        self._check(other)
        return AffineForm(self.names, vadd(self.coeffs, other.coeffs), self.constant + other.constant)

    def __sub__(self, other: AffineForm) -> AffineForm:
        self._check(other)
        return AffineForm(self.names, vsub(self.coeffs, other.coeffs), self.constant - other.constant)

    def __neg__(self) -> AffineForm:
        return self.scale(-1)

    def scale(self, c) -> AffineForm:
        c = frac(c)
        return AffineForm(self.names, vscale(c, self.coeffs), c * self.constant)

    def shift(self, c) -> AffineForm:
        return AffineForm(self.names, self.coeffs, self.constant + frac(c))

    def _check(self, other: AffineForm) -> None:
        if self.names != other.names:
            raise ValueError("forms live on different coordinate spaces")

    def primitive(self) -> tuple[Fraction, AffineForm]:
        """Factor as ``scalar * primitive`` with coprime integer entries.

        The primitive part has positive leading coefficient (first
        nonzero among coordinates then constant).  Zero form maps to
        (0, zero form).

        >>> f = AffineForm(("a",), (Fraction(-3, 2),), Fraction(3, 4))
        >>> s, g = f.primitive()
        >>> s, g.coeffs, g.constant
        (Fraction(-3, 4), (Fraction(2, 1),), Fraction(-1, 1))
        """
        entries = list(self.coeffs) + [self.constant]
        nonzero = [e for e in entries if e != 0]
        if not nonzero:
            return Fraction(0), self
        denom_lcm = 1
        for e in nonzero:
            denom_lcm = denom_lcm * e.denominator // gcd(denom_lcm, e.denominator)
        ints = [e * denom_lcm for e in entries]
        g = 0
        for e in ints:
            g = gcd(g, int(e))
        lead = next(e for e in ints if e != 0)
        signed = g if lead > 0 else -g
        scalar = Fraction(signed, denom_lcm)
        prim = self.scale(1 / scalar)
        return scalar, prim

    def sort_key(self) -> tuple:
        return (self.coeffs, self.constant)

    def __str__(self) -> str:
        if all(c <= 0 for c in self.coeffs) and self.constant <= 0 and not self.is_zero():
            if any(c != 0 for c in self.coeffs):
                return "-(%s)" % (-self)._render()
        return self._render()

    def _render(self) -> str:
        parts: list[str] = []
        for nm, c in zip(self.names, self.coeffs):
            if c == 0:
                continue
            if c == 1:
                term = nm
            elif c == -1:
                term = "-" + nm
            else:
                term = "%s*%s" % (c, nm)
            if parts and not term.startswith("-"):
                parts.append("+" + term)
            else:
                parts.append(term)
        if self.constant != 0 or not parts:
            term = str(self.constant)
            if parts and not term.startswith("-"):
                parts.append("+" + term)
            else:
                parts.append(term)
        return "".join(parts)


def parse_form(names: Sequence[str], text: str) -> AffineForm:
    """Parse strings like ``"-(a+c+1/2)"`` or ``"a-b+3/2*c-1"``.

    >>> str(parse_form(("a", "b", "c"), "-(a+c+1/2)"))
    '-(a+c+1/2)'
    """
    s = text.replace(" ", "")
    if s.startswith("-(") and s.endswith(")"):
        return -parse_form(names, s[2:-1])
    terms: dict[str, Fraction] = {}
    constant = Fraction(0)
    token = ""
    chunks: list[str] = []
    for ch in s:
        if ch in "+-" and token and token[-1] not in "*/":
            chunks.append(token)
            token = ch
        else:
            token += ch
    if token:
        chunks.append(token)
    for chunk in chunks:
        if not chunk or chunk in "+-":
            raise ValueError("malformed form: %r" % text)
        sign = Fraction(1)
        if chunk[0] == "+":
            chunk = chunk[1:]
        elif chunk[0] == "-":
            sign = Fraction(-1)
            chunk = chunk[1:]
        if "*" in chunk:
            coeff_s, name = chunk.split("*", 1)
            coeff = Fraction(coeff_s)
        elif chunk[-1].isalpha() or chunk[-1] == "_" or chunk[-1].isdigit() and any(c.isalpha() for c in chunk):
            i = 0
            while i < len(chunk) and not (chunk[i].isalpha() or chunk[i] == "_"):
                i += 1
            coeff = Fraction(chunk[:i]) if i else Fraction(1)
            name = chunk[i:]
        else:
            constant += sign * Fraction(chunk)
            continue
        if name not in names:
            raise ValueError("unknown coordinate %r in %r" % (name, text))
        terms[name] = terms.get(name, Fraction(0)) + sign * coeff
    return AffineForm.from_dict(names, terms, constant)


@dataclass(frozen=True)
class AffineSubspace:
    """Common zero locus of affine forms, held in reduced echelon form.

    The rows are stored as AffineForms whose linear parts form an RREF
    basis of the constraint space; ``pivots`` are the bound coordinate
    indices.  Construction fails on inconsistent systems.

    >>> names = ("a", "b")
    >>> S = AffineSubspace.from_forms(names, [parse_form(names, "a+b-1")])
    >>> S.dim
    1
    >>> str(S.reduce(parse_form(names, "2*a+2*b")))
    '2'
    """

    names: tuple[str, ...]
    rows: tuple[AffineForm, ...]
    pivots: tuple[int, ...]

    @classmethod
    def full(cls, names: Sequence[str]) -> AffineSubspace:
        return cls(tuple(names), (), ())

    @classmethod
    def from_forms(cls, names: Sequence[str], forms: Iterable[AffineForm]) -> AffineSubspace:
        names = tuple(names)
        mat = []
        for f in forms:
            if f.names != names:
                raise ValueError("form on wrong space")
            mat.append(list(f.coeffs) + [f.constant])
        reduced, pivots = rref(mat)
        ncols = len(names)
        if ncols in pivots:
            raise ValueError("inconsistent constraints (empty locus)")
        rows = tuple(
            AffineForm(names, tuple(r[:ncols]), r[ncols]) for r in reduced
        )
        return cls(names, rows, tuple(pivots))

    @property
    def codim(self) -> int:
        return len(self.rows)

    @property
    def dim(self) -> int:
        return len(self.names) - len(self.rows)

    def free_indices(self) -> tuple[int, ...]:
        bound = set(self.pivots)
        return tuple(i for i in range(len(self.names)) if i not in bound)

    def reduce(self, f: AffineForm) -> AffineForm:
        """Canonical representative of ``f`` modulo the defining forms."""
        if f.names != self.names:
            raise ValueError("form on wrong space")
        coeffs = list(f.coeffs)
        constant = f.constant
        for row, p in zip(self.rows, self.pivots):
            c = coeffs[p]
            if c != 0:
                coeffs = [x - c * y for x, y in zip(coeffs, row.coeffs)]
                constant -= c * row.constant
        return AffineForm(self.names, tuple(coeffs), constant)

    def with_forms(self, forms: Iterable[AffineForm]) -> AffineSubspace:
        new_rows = [AffineForm(self.names, r.coeffs, r.constant) for r in self.rows]
        return AffineSubspace.from_forms(self.names, list(new_rows) + list(forms))

    def contains_point(self, point: dict[str, Fraction]) -> bool:
        return all(r.evaluate(point) == 0 for r in self.rows)

    def parametrize(self, free_values: dict[str, Fraction]) -> dict[str, Fraction]:
        """Full coordinate dict from values of the free coordinates."""
        point = {
            self.names[i]: frac(free_values[self.names[i]])
            for i in self.free_indices()
        }
        for row, p in zip(self.rows, self.pivots):
            val = -row.constant
            for i, c in enumerate(row.coeffs):
                if i != p and c != 0:
                    val -= c * point[self.names[i]]
            point[self.names[p]] = val
        return point

    def basis_point(self) -> dict[str, Fraction]:
        return self.parametrize({self.names[i]: Fraction(0) for i in self.free_indices()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AffineSubspace):
            return NotImplemented
        return (
            self.names == other.names
            and self.pivots == other.pivots
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.names, self.pivots, self.rows))
