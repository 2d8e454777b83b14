"""Exact meromorphic bookkeeping for products of L-factor atoms.

A formal meromorphic function is a rational prefactor times a multiset
of factor atoms, each an opaque one-variable function composed with an
affine form in named coordinates.  Atom kinds:

- ``global_rs``: a completed Rankin-Selberg L-factor attached to an
  unordered pair of cuspidal atoms.  If the pair is marked dual it has
  simple poles exactly where its argument equals 0 or 1; it is
  guaranteed zero-free where the argument is a rational constant > 1,
  and treated as generically nonvanishing elsewhere.  No zero locus is
  ever asserted.
- ``local_zeta``: the local zeta factor s -> (1 - q^{-s})^{-1}; simple
  pole where the argument vanishes identically, never zero.  The size q
  is not part of the atom; numeric evaluators carry it.
- ``epsilon_unit``: an opaque entire nonvanishing unit.
- ``residue_symbol``: the residue of a global factor at its pole point
  (0 or 1), or, with pair ``None``, the residue 1/log q of the local
  zeta factor at 0.  Regular and never vanishing.

The residue of f along an affine form L is (L * f) restricted to the
hyperplane {L = 0}, defined when f has at most a simple pole there.
Atom arguments are kept reduced modulo the constraint subspace, atoms
sorted and merged, so equal functions compare equal as data.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .affine import AffineForm, AffineSubspace, frac

KIND_GLOBAL = "global_rs"
KIND_LOCAL = "local_zeta"
KIND_EPSILON = "epsilon_unit"
KIND_RESIDUE = "residue_symbol"

_KIND_ORDER = {KIND_GLOBAL: 0, KIND_LOCAL: 1, KIND_EPSILON: 2, KIND_RESIDUE: 3}


@dataclass(frozen=True)
class FactorAtom:
    """One factor: an atom kind applied to an affine argument, to a power.

    ``exponent`` counts multiplicity, negative for denominators.  For
    ``global_rs`` the unordered pair id and its duality flag are baked
    in at construction time; ``point`` is the pole point of a residue
    symbol; ``tag`` labels epsilon units.
    """

    kind: str
    argument: AffineForm
    exponent: int
    pair: Optional[tuple] = None
    dual: bool = False
    point: Optional[Fraction] = None
    tag: str = ""

    def __post_init__(self) -> None:
        if self.kind not in _KIND_ORDER:
            raise ValueError("unknown atom kind %r" % self.kind)
        if self.kind == KIND_GLOBAL and self.pair is None:
            raise ValueError("global factor needs a pair id")
        if self.kind == KIND_RESIDUE:
            if self.pair is None:
                if self.point != 0:
                    raise ValueError("local residue symbol sits at 0")
            elif self.point not in (Fraction(0), Fraction(1)):
                raise ValueError("residue symbol point must be 0 or 1")

    def sort_key(self) -> tuple:
        pair_key = tuple(map(str, self.pair)) if self.pair is not None else ()
        point_key = (self.point is None, self.point or Fraction(0))
        return (
            _KIND_ORDER[self.kind],
            pair_key,
            point_key,
            self.tag,
            self.argument.sort_key(),
        )

    def merge_key(self) -> tuple:
        return (self.kind, self.pair, self.dual, self.point, self.tag,
                self.argument.coeffs, self.argument.constant)

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "argument": {
                "coeffs": [str(c) for c in self.argument.coeffs],
                "constant": str(self.argument.constant),
            },
            "exponent": self.exponent,
        }
        if self.pair is not None:
            out["pair"] = list(self.pair)
        if self.kind == KIND_GLOBAL:
            out["dual"] = self.dual
        if self.point is not None:
            out["point"] = str(self.point)
        if self.tag:
            out["tag"] = self.tag
        return out


def global_rs(names: Sequence[str], pair: Sequence, argument: AffineForm,
              dual: bool, exponent: int = 1) -> FactorAtom:
    """Completed Rankin-Selberg factor; the pair id is stored unordered."""
    canonical = tuple(sorted(pair, key=str))
    return FactorAtom(KIND_GLOBAL, argument, exponent, pair=canonical, dual=dual)


def local_zeta(names: Sequence[str], argument: AffineForm, exponent: int = 1) -> FactorAtom:
    return FactorAtom(KIND_LOCAL, argument, exponent)


def epsilon_unit(names: Sequence[str], tag: str = "epsilon", exponent: int = 1) -> FactorAtom:
    zero = AffineForm.constant_form(tuple(names), 0)
    return FactorAtom(KIND_EPSILON, zero, exponent, tag=tag)


def residue_symbol(names: Sequence[str], pair: Optional[Sequence],
                   point, exponent: int = 1) -> FactorAtom:
    canonical = tuple(sorted(pair, key=str)) if pair is not None else None
    point = frac(point)
    arg = AffineForm.constant_form(tuple(names), point)
    return FactorAtom(KIND_RESIDUE, arg, exponent, pair=canonical, point=point)


def _atom_from_json(names: tuple[str, ...], data: Mapping) -> FactorAtom:
    arg = AffineForm(
        names,
        tuple(Fraction(c) for c in data["argument"]["coeffs"]),
        Fraction(data["argument"]["constant"]),
    )
    pair = tuple(data["pair"]) if "pair" in data else None
    point = Fraction(data["point"]) if "point" in data else None
    return FactorAtom(
        data["kind"], arg, int(data["exponent"]),
        pair=pair, dual=bool(data.get("dual", False)),
        point=point, tag=data.get("tag", ""),
    )


@dataclass(frozen=True)
class FormalMero:
    """Rational prefactor times a canonically sorted multiset of atoms.

    ``space`` is the affine subspace the function lives on; arguments
    are stored reduced modulo its defining forms.  The zero function is
    prefactor 0 with no atoms.

    >>> names = ("a", "b", "c")
    >>> from .affine import parse_form
    >>> F = FormalMero.build(names, 1, [
    ...     global_rs(names, ("t", "t"), parse_form(names, "a+b+1/2"), True),
    ...     global_rs(names, ("t", "t"), parse_form(names, "a+c+1/2"), True),
    ...     global_rs(names, ("t", "t"), parse_form(names, "b-c+1"), True, exponent=-1),
    ... ])
    >>> len(F.atoms)
    3
    >>> sorted(a.exponent for a in (F * F).atoms)
    [-2, 2, 2]
    """

    names: tuple[str, ...]
    prefactor: Fraction
    atoms: tuple[FactorAtom, ...]
    space: AffineSubspace

    @classmethod
    def build(cls, names: Sequence[str], prefactor,
              atoms: Iterable[FactorAtom] = (),
              space: Optional[AffineSubspace] = None) -> FormalMero:
        names = tuple(names)
        if space is None:
            space = AffineSubspace.full(names)
        if space.names != names:
            raise ValueError("subspace on wrong coordinates")
        prefactor = frac(prefactor)
        merged: dict[tuple, FactorAtom] = {}
        if prefactor != 0:
            for atom in atoms:
                if atom.argument.names != names:
                    raise ValueError("atom argument on wrong coordinates")
                reduced = replace(atom, argument=space.reduce(atom.argument))
                key = reduced.merge_key()
                if key in merged:
                    total = merged[key].exponent + reduced.exponent
                    if total == 0:
                        del merged[key]
                    else:
                        merged[key] = replace(merged[key], exponent=total)
                else:
                    merged[key] = reduced
        ordered = tuple(sorted(merged.values(), key=FactorAtom.sort_key))
        return cls(names, prefactor, ordered, space)

    @classmethod
    def one(cls, names: Sequence[str], space: Optional[AffineSubspace] = None) -> FormalMero:
        return cls.build(names, 1, (), space)

    @classmethod
    def zero(cls, names: Sequence[str], space: Optional[AffineSubspace] = None) -> FormalMero:
        return cls.build(names, 0, (), space)

    def is_zero(self) -> bool:
        return self.prefactor == 0

    def scale(self, c) -> FormalMero:
        return FormalMero.build(self.names, self.prefactor * frac(c), self.atoms, self.space)

    def __mul__(self, other: FormalMero) -> FormalMero:
        if not isinstance(other, FormalMero):
            return NotImplemented
        if self.names != other.names or self.space != other.space:
            raise ValueError("factors live on different spaces")
        return FormalMero.build(
            self.names, self.prefactor * other.prefactor,
            self.atoms + other.atoms, self.space,
        )

    def inverted(self) -> FormalMero:
        """Reciprocal as formal data; prefactor must be nonzero."""
        if self.is_zero():
            raise ZeroDivisionError("inverting the zero function")
        flipped = [replace(a, argument=a.argument, exponent=-a.exponent) for a in self.atoms]
        return FormalMero.build(self.names, 1 / self.prefactor, flipped, self.space)

    def on_subspace(self, space: AffineSubspace) -> FormalMero:
        """Re-reduce on a finer subspace; caller checks pole orders."""
        return FormalMero.build(self.names, self.prefactor, self.atoms, space)

    def to_json(self) -> dict:
        return {
            "names": list(self.names),
            "prefactor": str(self.prefactor),
            "constraints": [
                {"coeffs": [str(c) for c in row.coeffs], "constant": str(row.constant)}
                for row in self.space.rows
            ],
            "atoms": [a.to_json() for a in self.atoms],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> FormalMero:
        names = tuple(data["names"])
        forms = [
            AffineForm(names, tuple(Fraction(c) for c in row["coeffs"]), Fraction(row["constant"]))
            for row in data["constraints"]
        ]
        space = AffineSubspace.from_forms(names, forms)
        atoms = [_atom_from_json(names, a) for a in data["atoms"]]
        return cls.build(names, Fraction(data["prefactor"]), atoms, space)


def _pole_point(atom: FactorAtom, space: AffineSubspace) -> Optional[Fraction]:
    """Pole point of the atom's base function along the whole subspace."""
    if atom.kind == KIND_GLOBAL and atom.dual:
        for s0 in (Fraction(0), Fraction(1)):
            if space.reduce(atom.argument.shift(-s0)).is_zero():
                return s0
    elif atom.kind == KIND_LOCAL:
        if space.reduce(atom.argument).is_zero():
            return Fraction(0)
    return None


def _as_hyperplane(F: FormalMero, target) -> AffineSubspace:
    if isinstance(target, AffineForm):
        H = F.space.with_forms([target])
    elif isinstance(target, AffineSubspace):
        H = target
        if H.names != F.names:
            raise ValueError("hyperplane on wrong coordinates")
        if any(not H.reduce(row).is_zero() for row in F.space.rows):
            raise ValueError("hyperplane not contained in the function's space")
    else:
        raise TypeError("expected an AffineForm or AffineSubspace")
    if H.codim != F.space.codim + 1:
        raise ValueError("not a hyperplane of the function's space")
    return H


def divisor_along(F: FormalMero, target) -> int:
    """Order of F along a hyperplane of its space; positive = pole.

    ``target`` is a codimension-one AffineSubspace of F's space, or an
    AffineForm cutting one out.  Counts exponents of atoms whose pole
    locus contains the hyperplane, minus exponents of atoms vanishing
    there; no current atom kind asserts a zero locus, and genericity
    judgments contribute zero by design.
    """
    H = _as_hyperplane(F, target)
    order = 0
    for atom in F.atoms:
        if _pole_point(atom, H) is not None:
            order += atom.exponent
    return order


def hyperplane_report(F: FormalMero, target) -> list[tuple[FactorAtom, str]]:
    """Per-atom three-valued judgment along a hyperplane.

    ``pole``: the hyperplane lies in the atom's pole locus.  ``zero_free``:
    containment excluded (unit kinds, local factors off their pole, global
    factors whose argument restricts to a rational constant > 1).
    ``generic``: nonvanishing expected but not asserted.
    """
    H = _as_hyperplane(F, target)
    out = []
    for atom in F.atoms:
        if atom.kind in (KIND_EPSILON, KIND_RESIDUE):
            out.append((atom, "zero_free"))
            continue
        if _pole_point(atom, H) is not None:
            out.append((atom, "pole"))
            continue
        if atom.kind == KIND_LOCAL:
            out.append((atom, "zero_free"))
            continue
        reduced = H.reduce(atom.argument)
        if reduced.is_constant() and reduced.constant > 1:
            out.append((atom, "zero_free"))
        else:
            out.append((atom, "generic"))
    return out


def _proportionality(f: AffineForm, g: AffineForm) -> Fraction:
    """The scalar c with f = c * g, for proportional nonzero forms."""
    entries = list(zip(list(f.coeffs) + [f.constant], list(g.coeffs) + [g.constant]))
    c = None
    for fv, gv in entries:
        if gv != 0:
            c = fv / gv
            break
    if c is None:
        raise ValueError("zero reference form")
    for fv, gv in entries:
        if fv != c * gv:
            raise ValueError("forms are not proportional")
    return c


def residue(F: FormalMero, lam: AffineForm) -> FormalMero:
    """(lam * F) restricted to {lam = 0} within F's space.

    Defined when F has at most a simple pole along the hyperplane.  A
    net order <= 0 gives the zero function on the hyperplane.  At order
    one, every atom whose pole locus contains the hyperplane turns into
    its residue symbol, and the prefactor picks up the ratio of the
    atom's shifted argument to lam, raised to minus the exponent.
    """
    if lam.names != F.names:
        raise ValueError("form on wrong coordinates")
    lam_red = F.space.reduce(lam)
    if lam_red.is_zero():
        raise ValueError("form vanishes on the space; no hyperplane")
    new_space = F.space.with_forms([lam])
    if new_space.codim != F.space.codim + 1:
        raise ValueError("form does not cut a hyperplane")
    if F.is_zero():
        return FormalMero.zero(F.names, new_space)
    poles = [(atom, _pole_point(atom, new_space)) for atom in F.atoms]
    order = sum(atom.exponent for atom, s0 in poles if s0 is not None)
    if order <= 0:
        return FormalMero.zero(F.names, new_space)
    if order >= 2:
        raise ValueError("pole of order %d along the hyperplane" % order)
    prefactor = F.prefactor
    new_atoms: list[FactorAtom] = []
    for atom, s0 in poles:
        if s0 is None:
            new_atoms.append(atom)
            continue
        shifted = F.space.reduce(atom.argument.shift(-s0))
        ratio = _proportionality(shifted, lam_red)
        prefactor *= ratio ** (-atom.exponent)
        pair = atom.pair if atom.kind == KIND_GLOBAL else None
        point = s0 if atom.kind == KIND_GLOBAL else Fraction(0)
        new_atoms.append(residue_symbol(F.names, pair, point, exponent=atom.exponent))
    return FormalMero.build(F.names, prefactor, new_atoms, new_space)


def iterated_residue(F: FormalMero, forms: Sequence[AffineForm],
                     order: Optional[Sequence[int]] = None) -> FormalMero:
    """Fold residues along the forms in the given order of indices.

    >>> F = FormalMero.one(("a",))
    >>> iterated_residue(F, []) == F
    True
    """
    if order is None:
        order = range(len(forms))
    order = tuple(order)
    if sorted(order) != list(range(len(forms))):
        raise ValueError("order must be a permutation of the form indices")
    out = F
    for idx in order:
        out = residue(out, forms[idx])
    return out


def commutation_check(F: FormalMero, forms: Sequence[AffineForm],
                      orders: Sequence[Sequence[int]]) -> FormalMero:
    """Iterated residue under several orders; raises unless all agree."""
    results = [iterated_residue(F, forms, order) for order in orders]
    first = results[0]
    for other in results[1:]:
        if other != first:
            raise ValueError("iterated residue depends on the order")
    return first


def evaluate_form(form: AffineForm, point: Mapping[str, complex]) -> complex:
    total = complex(form.constant)
    for nm, c in zip(form.names, form.coeffs):
        if c != 0:
            total += complex(c) * complex(point[nm])
    return total


def default_evaluators(q=None, digits: int = 30) -> dict[str, Callable]:
    """Numeric table: completed zeta for global factors built from the
    trivial character, its residues -1 at 0 and 1 at 1, and the local
    zeta factor of size q (with residue 1/log q).  Epsilon units have no
    default value.
    """
    import mpmath

    def xi(atom: FactorAtom, s: complex) -> complex:
        with mpmath.workdps(digits):
            z = mpmath.mpc(s)
            if abs(z) < 1e-12 or abs(z - 1) < 1e-12:
                raise ValueError("pole of the completed zeta factor hit")
            value = mpmath.power(mpmath.pi, -z / 2) * mpmath.gamma(z / 2) * mpmath.zeta(z)
            return complex(value)

    def res_symbol(atom: FactorAtom, s: complex) -> complex:
        if atom.pair is None:
            if q is None:
                raise ValueError("local residue symbol needs a q")
            import math
            return 1.0 / math.log(q)
        return 1.0 if atom.point == 1 else -1.0

    table: dict[str, Callable] = {KIND_GLOBAL: xi, KIND_RESIDUE: res_symbol}
    if q is not None:
        def zq(atom: FactorAtom, s: complex) -> complex:
            w = complex(q) ** (-s)
            if abs(1 - w) < 1e-15:
                raise ValueError("pole of the local zeta factor hit")
            return 1.0 / (1.0 - w)

        table[KIND_LOCAL] = zq
    return table


def evaluate_numeric(F: FormalMero, point: Mapping[str, complex],
                     evaluators: Optional[Mapping[str, Callable]] = None) -> complex:
    """Numeric value of F at a point of its space.

    >>> names = ("s",)
    >>> from .affine import parse_form
    >>> F = FormalMero.build(names, 1, [
    ...     global_rs(names, ("t", "t"), parse_form(names, "s"), True)])
    >>> round(abs(evaluate_numeric(F, {"s": 2.0})), 10)
    0.5235987756
    """
    if evaluators is None:
        evaluators = default_evaluators()
    for row in F.space.rows:
        if abs(evaluate_form(row, point)) > 1e-9:
            raise ValueError("point is off the constraint subspace")
    if F.is_zero():
        return 0j
    total = complex(F.prefactor)
    for atom in F.atoms:
        fn = evaluators.get(atom.kind)
        if fn is None:
            raise ValueError("no evaluator for atom kind %r" % atom.kind)
        s = evaluate_form(atom.argument, point)
        value = complex(fn(atom, s))
        if value == 0 and atom.exponent < 0:
            raise ValueError("evaluated atom vanishes in a denominator")
        total *= value ** atom.exponent
    return total
