"""Inducing pairs on GL(n) x GL(n+1) and their global residue calculus.

An inducing pair consists of two ordered families of Speh blocks.  A
family-1 block of rank ``r`` and multiplicity ``d`` enters the GL(n)
factor with all ``d`` copies and the GL(n+1) factor shortened to
``d - 1`` copies of the dual atom; family-2 blocks do the opposite.  A
single balance identity on the ranks forces the two ambient sizes to
differ by exactly one.

For such a pair the module builds:

* the refined coordinate layout, one coordinate per rank block, with
  the half-integral center profile of every group and the parametrized
  anti-diagonal subspace the two sides share;
* the singular affine forms of the pair and the two canonical residue
  schedules along them;
* the global kernel (cross-side completed factors over the same-side
  normalizers) and its iterated residues, checked to be independent of
  the order of the forms;
* the predicted non-vanishing quotient of completed factors, its
  evaluation at the origin, and the comparison of the residue output
  against it modulo functional-equation units;
* the Weyl elements and standard parabolic subgroups that organize the
  residue construction, with their containment and conjugation
  assertions.

All data are exact: coordinates are rational affine forms and the
meromorphic objects are formal products of factor atoms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Optional, Sequence

from .affine import AffineForm, AffineSubspace, frac
from .lfactors import AtomRegistry, CuspidalAtom, SCOPE_GLOBAL, SpehDatum
from .mero import (
    KIND_GLOBAL,
    FactorAtom,
    FormalMero,
    divisor_along,
    global_rs,
    residue,
    residue_symbol,
)
from .rsparabolic import RSParabolic, from_pair, is_subparabolic
from .weyl import (
    BlockParabolic,
    Composition,
    Perm,
    compose,
    conjugate,
    identity_perm,
    inverse,
    is_double_coset_rep,
    lift_block_permutation,
    relative_parabolics,
)

SIDE_SMALL = "n"
SIDE_BIG = "n+1"


def _dual_id(reg: AtomRegistry, id_: str) -> str:
    """Registered dual id, falling back to the atom itself."""
    return reg.dual_atom(id_).id if reg.has_dual(id_) else id_


@dataclass(frozen=True)
class InducingPair:
    """Two families of Speh blocks with balanced ranks.

    ``nu1`` and ``nu2`` are optional per-block rational centers, each
    of absolute value strictly less than one half; they default to
    zero and leave the singular geometry unchanged.

    >>> from .lfactors import standard_registry
    >>> reg = standard_registry()
    >>> pair = InducingPair((), (SpehDatum(reg.atom("one"), 2),))
    >>> pair.n, pair.n_plus_one, pair.k
    (1, 2, 0)
    """

    family1: tuple[SpehDatum, ...]
    family2: tuple[SpehDatum, ...]
    nu1: tuple[Fraction, ...] = ()
    nu2: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "family1", tuple(self.family1))
        object.__setattr__(self, "family2", tuple(self.family2))
        for fam, label in ((self.family1, 1), (self.family2, 2)):
            for pos, block in enumerate(fam):
                if block.d < 1:
                    raise ValueError(
                        "family %d entry %d: multiplicity must be at least 1"
                        % (label, pos + 1)
                    )
        scopes = {b.atom.scope for b in self.family1 + self.family2}
        if len(scopes) > 1:
            raise ValueError("atoms of one pair must share a scope")
        for attr, fam in (("nu1", self.family1), ("nu2", self.family2)):
            raw = getattr(self, attr)
            vals = tuple(frac(t) for t in raw) if raw else (Fraction(0),) * len(fam)
            if len(vals) != len(fam):
                raise ValueError(
                    "%s has %d entries for %d blocks" % (attr, len(vals), len(fam))
                )
            if any(abs(t) >= Fraction(1, 2) for t in vals):
                raise ValueError("block centers must lie in (-1/2, 1/2)")
            object.__setattr__(self, attr, vals)
        lhs = sum(b.atom.rank for b in self.family1)
        rhs = sum(b.atom.rank for b in self.family2) - 1
        if lhs != rhs:
            raise ValueError(
                "rank balance fails: family-1 ranks sum to %d but family-2 "
                "ranks sum to %d, not %d" % (lhs, rhs + 1, lhs + 1)
            )

    @property
    def m1(self) -> int:
        return len(self.family1)

    @property
    def m2(self) -> int:
        return len(self.family2)

    @property
    def k(self) -> int:
        return sum(b.atom.rank for b in self.family1)

    @property
    def n(self) -> int:
        return sum(b.size for b in self.family1) + sum(
            b.atom.rank * (b.d - 1) for b in self.family2
        )

    @property
    def n_plus_one(self) -> int:
        return sum(b.atom.rank * (b.d - 1) for b in self.family1) + sum(
            b.size for b in self.family2
        )

    @property
    def scope(self) -> str:
        blocks = self.family1 + self.family2
        return blocks[0].atom.scope if blocks else SCOPE_GLOBAL

    def is_tempered(self) -> bool:
        return all(b.d == 1 for b in self.family1 + self.family2)

    def is_twisted(self) -> bool:
        return any(t != 0 for t in self.nu1 + self.nu2)


def validate_pair(reg: AtomRegistry, family1: Sequence, family2: Sequence,
                  nu1: Sequence = (), nu2: Sequence = ()) -> InducingPair:
    """Build a pair from raw ``(rank, multiplicity, atom)`` triples.

    The declared rank of every entry must match the registered atom;
    the balance identity is enforced by the pair constructor.

    >>> from .lfactors import standard_registry
    >>> pair = validate_pair(standard_registry(), [], [(1, 2, "one")])
    >>> pair.n, pair.n_plus_one
    (1, 2)
    """
    def build(entries: Sequence, label: int) -> tuple[SpehDatum, ...]:
        out = []
        for pos, (r, d, atom) in enumerate(entries):
            atom = reg.atom(atom if isinstance(atom, str) else atom.id)
            if atom.rank != int(r):
                raise ValueError(
                    "family %d entry %d: declared rank %d but atom %r has "
                    "rank %d" % (label, pos + 1, int(r), atom.id, atom.rank)
                )
            out.append(SpehDatum(atom, int(d)))
        return tuple(out)

    return InducingPair(build(family1, 1), build(family2, 2),
                        tuple(nu1), tuple(nu2))


def pair_to_json(pair: InducingPair, registry_ref: Optional[str] = None) -> dict:
    """JSON payload with one ``{r, d, atom}`` record per block."""
    def fam(blocks: tuple[SpehDatum, ...], nus: tuple[Fraction, ...]) -> list:
        rows = []
        for block, nu in zip(blocks, nus):
            row = {"r": block.atom.rank, "d": block.d, "atom": block.atom.id}
            if nu != 0:
                row["nu"] = str(nu)
            rows.append(row)
        return rows

    return {
        "family1": fam(pair.family1, pair.nu1),
        "family2": fam(pair.family2, pair.nu2),
        "registry_ref": registry_ref,
    }


def pair_from_json(reg: AtomRegistry, data) -> InducingPair:
    """Inverse of :func:`pair_to_json`, revalidating against ``reg``."""
    if isinstance(data, str):
        data = json.loads(data)
    def fam(rows) -> tuple[list, list]:
        entries = [(int(r["r"]), int(r["d"]), r["atom"]) for r in rows]
        nus = [frac(r.get("nu", 0)) for r in rows]
        return entries, nus

    ent1, nu1 = fam(data["family1"])
    ent2, nu2 = fam(data["family2"])
    return validate_pair(reg, ent1, ent2, nu1, nu2)


@dataclass(frozen=True)
class PairSlot:
    """One rank block of the refined layout.

    ``form`` is the slot coordinate on the big name tuple, ``param``
    its value on the shared subspace in the small coordinates, and
    ``nu`` the component of the center profile at the slot.
    """

    side: str
    family: int
    index: int
    slot: int
    name: str
    atom: CuspidalAtom
    dualized: bool
    nu: Fraction
    form: AffineForm
    param: AffineForm


@dataclass(frozen=True)
class PairLayout:
    """Complete coordinate bookkeeping of a pair.

    Every coordinate lookup of the module goes through this one table:
    slots are listed per side in layout order, big names follow the
    slots, and ``param`` realizes each big coordinate on the small
    names of the shared subspace.
    """

    pair: InducingPair
    names: tuple[str, ...]
    small_names: tuple[str, ...]
    slots_n: tuple[PairSlot, ...]
    slots_n1: tuple[PairSlot, ...]

    def slots(self, side: str) -> tuple[PairSlot, ...]:
        if side == SIDE_SMALL:
            return self.slots_n
        if side == SIDE_BIG:
            return self.slots_n1
        raise ValueError("unknown side %r" % side)

    def coord(self, side: str, family: int, index: int, slot: int) -> AffineForm:
        for s in self.slots(side):
            if (s.family, s.index, s.slot) == (family, index, slot):
                return s.form
        raise KeyError((side, family, index, slot))

    def small_form(self, family: int, index: int) -> AffineForm:
        name = "z%d_%d" % (family, index)
        return AffineForm.from_dict(self.small_names, {name: 1})

    def param_map(self) -> dict[str, AffineForm]:
        return {s.name: s.param for s in self.slots_n + self.slots_n1}


def pair_layout(pair: InducingPair) -> PairLayout:
    """Refined slots of both sides in layout order.

    The GL(n) side lists the family-1 groups at full length and then
    the family-2 groups shortened by one; the GL(n+1) side does the
    opposite.  Coordinates are named per family, group and slot.

    >>> from .lfactors import standard_registry
    >>> reg = standard_registry()
    >>> lay = pair_layout(InducingPair((), (SpehDatum(reg.atom("one"), 2),)))
    >>> lay.names
    ('y1_1', 'v1_1', 'v1_2')
    >>> print(lay.slots_n[0].param)
    -(z2_1)
    """
    spec = []
    for fam_no, prefix_pairs, blocks, nus in (
        (1, (SIDE_SMALL, "x", SIDE_BIG, "u"), pair.family1, pair.nu1),
        (2, (SIDE_SMALL, "y", SIDE_BIG, "v"), pair.family2, pair.nu2),
    ):
        side_full = SIDE_SMALL if fam_no == 1 else SIDE_BIG
        for pos, (block, nu) in enumerate(zip(blocks, nus)):
            for side, prefix in (prefix_pairs[:2], prefix_pairs[2:]):
                count = block.d if side == side_full else block.d - 1
                dualized = side != side_full
                spec.append((side, fam_no, pos + 1, prefix, block, nu,
                             count, dualized))

    small_names = tuple(
        "z1_%d" % (i + 1) for i in range(pair.m1)
    ) + tuple("z2_%d" % (i + 1) for i in range(pair.m2))

    per_side: dict[str, list] = {SIDE_SMALL: [], SIDE_BIG: []}
    for side, fam_no, index, prefix, block, nu, count, dualized in spec:
        per_side[side].append((fam_no, index, prefix, block, nu, count, dualized))
    for side in per_side:
        per_side[side].sort(key=lambda row: (row[0], row[1]))

    names = []
    entries: dict[str, list] = {SIDE_SMALL: [], SIDE_BIG: []}
    for side in (SIDE_SMALL, SIDE_BIG):
        for fam_no, index, prefix, block, nu, count, dualized in per_side[side]:
            for j in range(1, count + 1):
                names.append("%s%d_%d" % (prefix, index, j))
                entries[side].append((fam_no, index, j, block, nu, count, dualized))
    names = tuple(names)

    def small(fam_no: int, index: int) -> AffineForm:
        return AffineForm.from_dict(small_names, {"z%d_%d" % (fam_no, index): 1})

    slots: dict[str, list[PairSlot]] = {SIDE_SMALL: [], SIDE_BIG: []}
    pos = 0
    for side in (SIDE_SMALL, SIDE_BIG):
        for fam_no, index, j, block, nu, count, dualized in entries[side]:
            name = names[pos]
            pos += 1
            center = Fraction(count - 2 * j + 1, 2)
            sign = -1 if dualized else 1
            param = small(fam_no, index).scale(sign).shift(sign * nu + center)
            slots[side].append(PairSlot(
                side=side, family=fam_no, index=index, slot=j, name=name,
                atom=block.atom, dualized=dualized, nu=-center,
                form=AffineForm.from_dict(names, {name: 1}), param=param,
            ))
    return PairLayout(pair, names, small_names,
                      tuple(slots[SIDE_SMALL]), tuple(slots[SIDE_BIG]))


def nu_pairings(pair: InducingPair) -> tuple[Fraction, ...]:
    """Pairings of the negated center profile on in-group simple roots.

    All values are 1, hence positive: the negated profile is dominant
    inside the inducing parabolic, which is what grounds the residue
    schedule.

    >>> from .lfactors import standard_registry
    >>> reg = standard_registry()
    >>> nu_pairings(InducingPair((), (SpehDatum(reg.atom("one"), 3),)))
    (Fraction(1, 1), Fraction(1, 1), Fraction(1, 1))
    """
    lay = pair_layout(pair)
    out = []
    for side in (SIDE_SMALL, SIDE_BIG):
        slots = lay.slots(side)
        for a, b in zip(slots, slots[1:]):
            if (a.family, a.index) != (b.family, b.index):
                continue
            out.append(frac(-a.nu) - frac(-b.nu))
    return tuple(out)


@dataclass(frozen=True)
class SingularForms:
    """The two lists of singular affine forms of a pair, with labels."""

    l_plus: tuple[AffineForm, ...]
    l_minus: tuple[AffineForm, ...]
    labels_plus: tuple[tuple[int, int, int], ...]
    labels_minus: tuple[tuple[int, int, int], ...]

    def forms(self) -> tuple[AffineForm, ...]:
        return self.l_plus + self.l_minus

    @property
    def count(self) -> int:
        return len(self.l_plus)


def singular_forms(pair: InducingPair) -> SingularForms:
    """Singular forms of the pair in label order.

    Each family-1 group of multiplicity ``d`` contributes ``d - 1``
    forms to both lists, pairing its GL(n) slots in reversed order
    against its GL(n+1) slots; family-2 groups pair in the mirrored
    pattern.  The linear parts of the union are checked independent.

    >>> from .lfactors import standard_registry
    >>> reg = standard_registry()
    >>> sf = singular_forms(InducingPair((), (SpehDatum(reg.atom("one"), 2),)))
    >>> [str(f) for f in sf.l_plus]
    ['-(y1_1+v1_2+1/2)']
    >>> [str(f) for f in sf.l_minus]
    ['y1_1+v1_1-1/2']
    """
    lay = pair_layout(pair)
    half = Fraction(1, 2)
    plus, minus, lab_plus, lab_minus = [], [], [], []
    for pos, block in enumerate(pair.family1):
        i, d = pos + 1, block.d
        for j in range(1, d):
            x_rev = lay.coord(SIDE_SMALL, 1, i, d - j + 1)
            x_low = lay.coord(SIDE_SMALL, 1, i, d - j)
            u = lay.coord(SIDE_BIG, 1, i, j)
            plus.append((x_rev + u).shift(half).scale(-1))
            minus.append((x_low + u).shift(-half))
            lab_plus.append((1, i, j))
            lab_minus.append((1, i, j))
    for pos, block in enumerate(pair.family2):
        i, d = pos + 1, block.d
        for j in range(1, d):
            y = lay.coord(SIDE_SMALL, 2, i, j)
            v_rev = lay.coord(SIDE_BIG, 2, i, d - j + 1)
            v_low = lay.coord(SIDE_BIG, 2, i, d - j)
            plus.append((y + v_rev).shift(half).scale(-1))
            minus.append((y + v_low).shift(-half))
            lab_plus.append((2, i, j))
            lab_minus.append((2, i, j))
    expected = sum(b.d - 1 for b in pair.family1 + pair.family2)
    if len(plus) != expected or len(minus) != expected:
        raise AssertionError("singular form count drifted from the layout")
    if expected:
        cut = AffineSubspace.from_forms(lay.names, plus + minus)
        if cut.codim != 2 * expected:
            raise AssertionError("singular forms are linearly dependent")
    return SingularForms(tuple(plus), tuple(minus),
                         tuple(lab_plus), tuple(lab_minus))


def _schedule(pair: InducingPair, f1_descending: bool) -> tuple[int, ...]:
    sf = singular_forms(pair)
    index = {label: i for i, label in enumerate(sf.labels_plus)}
    order = []
    for pos, block in enumerate(pair.family1):
        js = range(block.d - 1, 0, -1) if f1_descending else range(1, block.d)
        order.extend(index[(1, pos + 1, j)] for j in js)
    for pos, block in enumerate(pair.family2):
        js = range(1, block.d) if f1_descending else range(block.d - 1, 0, -1)
        order.extend(index[(2, pos + 1, j)] for j in js)
    order.extend(range(len(sf.l_plus), len(sf.l_plus) + len(sf.l_minus)))
    return tuple(order)


def first_order_schedule(pair: InducingPair) -> tuple[int, ...]:
    """Group-by-group schedule, family-1 slots taken top down."""
    return _schedule(pair, f1_descending=True)


def second_order_schedule(pair: InducingPair) -> tuple[int, ...]:
    """Group-by-group schedule, family-2 slots taken top down."""
    return _schedule(pair, f1_descending=False)


def parametrized_subspace(pair: InducingPair) -> AffineSubspace:
    """Image of the small coordinates under the layout parametrization."""
    lay = pair_layout(pair)
    refs: dict[tuple[int, int], PairSlot] = {}
    for slot in lay.slots_n + lay.slots_n1:
        if not slot.dualized and slot.slot == 1:
            refs[(slot.family, slot.index)] = slot
    eqs = []
    for slot in lay.slots_n + lay.slots_n1:
        ref = refs[(slot.family, slot.index)]
        if slot is ref:
            continue
        sign = -1 if slot.dualized else 1
        shift = sign * ref.param.constant - slot.param.constant
        eqs.append((slot.form + ref.form.scale(-sign)).shift(shift))
    return AffineSubspace.from_forms(lay.names, eqs)


def intersection_check(pair: InducingPair) -> AffineSubspace:
    """Common zero set of all singular forms, verified two ways.

    The subspace cut out by the forms must coincide with the
    parametrized image of the small coordinates, and on the zero set of
    the plus forms alone every minus form must agree with its two
    single-side difference expressions.

    >>> from .lfactors import standard_registry
    >>> reg = standard_registry()
    >>> pair = InducingPair((), (SpehDatum(reg.atom("one"), 2),))
    >>> space = intersection_check(pair)
    >>> space.dim, space.codim
    (1, 2)
    """
    lay = pair_layout(pair)
    sf = singular_forms(pair)
    cut = AffineSubspace.from_forms(lay.names, sf.forms())
    para = parametrized_subspace(pair)
    if cut != para:
        raise AssertionError(
            "singular forms do not cut out the parametrized subspace"
        )
    if cut.dim != pair.m1 + pair.m2:
        raise AssertionError("shared subspace has wrong dimension")
    hplus = AffineSubspace.from_forms(lay.names, sf.l_plus)
    for label, form in zip(sf.labels_minus, sf.l_minus):
        fam, i, j = label
        d = (pair.family1 if fam == 1 else pair.family2)[i - 1].d
        want = hplus.reduce(form)
        if fam == 1:
            full = lay.coord(SIDE_SMALL, 1, i, d - j) - lay.coord(SIDE_SMALL, 1, i, d - j + 1)
            short = (lay.coord(SIDE_BIG, 1, i, j) - lay.coord(SIDE_BIG, 1, i, j + 1)
                     if j <= d - 2 else None)
        else:
            full = lay.coord(SIDE_BIG, 2, i, d - j) - lay.coord(SIDE_BIG, 2, i, d - j + 1)
            short = (lay.coord(SIDE_SMALL, 2, i, j) - lay.coord(SIDE_SMALL, 2, i, j + 1)
                     if j <= d - 2 else None)
        if hplus.reduce(full.shift(-1)) != want:
            raise AssertionError("minus form %s breaks its full-side identity" % (label,))
        if short is not None and hplus.reduce(short.shift(-1)) != want:
            raise AssertionError("minus form %s breaks its short-side identity" % (label,))
    return cut


def _require_registered(reg: AtomRegistry, pair: InducingPair) -> None:
    for block in pair.family1 + pair.family2:
        if reg.atom(block.atom.id) != block.atom:
            raise ValueError("atom %r differs from its registered version"
                             % block.atom.id)


def global_kernel(reg: AtomRegistry, pair: InducingPair) -> FormalMero:
    """Cross-side completed factors over the same-side normalizers.

    Dualized slots carry the registered dual atom when one exists and
    fall back to the atom itself otherwise; duality flags always come
    from the registry, so unregistered duals make the cross factors
    pole-free.

    >>> from .lfactors import standard_registry
    >>> reg = standard_registry()
    >>> F = global_kernel(reg, InducingPair((), (SpehDatum(reg.atom("one"), 2),)))
    >>> len(F.atoms), F.atoms[0].exponent
    (3, -1)
    """
    if pair.scope != SCOPE_GLOBAL:
        raise ValueError("the global kernel needs global atoms")
    _require_registered(reg, pair)
    lay = pair_layout(pair)
    names = lay.names

    def eff(slot: PairSlot) -> str:
        return _dual_id(reg, slot.atom.id) if slot.dualized else slot.atom.id

    atoms = []
    for a in lay.slots_n:
        for b in lay.slots_n1:
            ids = (eff(a), eff(b))
            arg = (a.form + b.form).shift(Fraction(1, 2))
            atoms.append(global_rs(names, ids, arg, reg.are_dual(*ids)))
    for side in (lay.slots_n, lay.slots_n1):
        for a, b in combinations(side, 2):
            ids = (eff(a), _dual_id(reg, eff(b)))
            arg = (a.form - b.form).shift(1)
            atoms.append(global_rs(names, ids, arg, reg.are_dual(*ids),
                                   exponent=-1))
    return FormalMero.build(names, 1, atoms)


def _check_schedule(order: Sequence[int], count: int) -> tuple[int, ...]:
    order = tuple(int(i) for i in order)
    if sorted(order) != list(range(count)):
        raise ValueError("order must be a permutation of the %d form indices"
                         % count)
    return order


def _run_schedule(F: FormalMero, forms: Sequence[AffineForm],
                  order: Sequence[int]) -> tuple[FormalMero, list[dict]]:
    steps = []
    out = F
    for pos, idx in enumerate(order):
        form = forms[idx]
        net = divisor_along(out, form)
        steps.append({"form_index": idx, "form": str(form), "pole_order": net})
        try:
            out = residue(out, form)
        except ValueError as exc:
            raise ValueError(
                "residue step %d along %s: %s (net pole order %d)"
                % (pos + 1, form, exc, net)
            ) from exc
    return out, steps


def global_residue_pipeline(reg: AtomRegistry, pair: InducingPair,
                            order: Optional[Sequence[int]] = None,
                            extra_orders: Iterable[Sequence[int]] = ()) -> FormalMero:
    """Iterated residue of the global kernel along all singular forms.

    The two canonical schedules are always run, together with ``order``
    and any ``extra_orders``; all runs must agree exactly.  A step with
    nonpositive net pole order yields the zero function, which then
    propagates.  Nonzero results are checked against the predicted
    quotient modulo functional-equation units.

    >>> from .lfactors import standard_registry
    >>> reg = standard_registry()
    >>> pair = InducingPair((), (SpehDatum(reg.atom("one"), 2),))
    >>> out = global_residue_pipeline(reg, pair)
    >>> out.prefactor, len(out.atoms)
    (Fraction(-1, 1), 3)
    """
    sf = singular_forms(pair)
    forms = sf.forms()
    orders = [first_order_schedule(pair), second_order_schedule(pair)]
    if order is not None:
        orders.append(_check_schedule(order, len(forms)))
    for extra in extra_orders:
        orders.append(_check_schedule(extra, len(forms)))
    seen = []
    for cand in orders:
        if cand not in seen:
            seen.append(cand)
    F = global_kernel(reg, pair)
    results = [_run_schedule(F, forms, cand)[0] for cand in seen]
    for other in results[1:]:
        if other != results[0]:
            raise ValueError("iterated residue depends on the order")
    out = results[0]
    if not out.is_zero():
        _check_quotient_match(reg, pair, out)
    return out


def pipeline_report(reg: AtomRegistry, pair: InducingPair,
                    order: Optional[Sequence[int]] = None) -> dict:
    """Step-by-step pipeline record with per-step pole orders."""
    sf = singular_forms(pair)
    forms = sf.forms()
    schedule = (first_order_schedule(pair) if order is None
                else _check_schedule(order, len(forms)))
    result = global_residue_pipeline(reg, pair, order=schedule)
    _, steps = _run_schedule(global_kernel(reg, pair), forms, schedule)
    return {
        "pair": pair_to_json(pair),
        "forms": [str(f) for f in forms],
        "order": list(schedule),
        "steps": steps,
        "result": result.to_json(),
        "vanishes": result.is_zero(),
        "criterion": cl_star(reg, pair).verdict,
    }


def cl_quotient(reg: AtomRegistry, pair: InducingPair) -> FormalMero:
    """Predicted quotient of completed factors on the small coordinates.

    Cross-family factors at the half-sum of multiplicities offsets form
    the numerator; the same-family factors at the averaged offsets form
    the denominator.

    >>> from .lfactors import AtomRegistry, CuspidalAtom
    >>> reg = AtomRegistry([CuspidalAtom("s", 1, "global"),
    ...                     CuspidalAtom("c1", 1, "global"),
    ...                     CuspidalAtom("c2", 1, "global")],
    ...                    dual_pairs=[("s", "s"), ("c1", "c1"), ("c2", "c2")])
    >>> pair = InducingPair((SpehDatum(reg.atom("s"), 2),),
    ...                     (SpehDatum(reg.atom("c1"), 1), SpehDatum(reg.atom("c2"), 1)))
    >>> [str(a.argument) for a in cl_quotient(reg, pair).atoms]
    ['z2_1-z2_2+1', 'z1_1+z2_1+1', 'z1_1+z2_2+1']
    """
    _require_registered(reg, pair)
    lay = pair_layout(pair)
    small = lay.small_names
    atoms = []
    for i, b1 in enumerate(pair.family1):
        for j, b2 in enumerate(pair.family2):
            ids = (b1.atom.id, b2.atom.id)
            shift = Fraction(b1.d - b2.d + 1, 2) + pair.nu1[i] + pair.nu2[j]
            arg = (lay.small_form(1, i + 1) + lay.small_form(2, j + 1)).shift(shift)
            atoms.append(global_rs(small, ids, arg, reg.are_dual(*ids)))
    for fam_no, blocks, nus in ((1, pair.family1, pair.nu1),
                                (2, pair.family2, pair.nu2)):
        for (i, bi), (j, bj) in combinations(enumerate(blocks), 2):
            ids = (bi.atom.id, _dual_id(reg, bj.atom.id))
            shift = Fraction(bi.d + bj.d, 2) + nus[i] - nus[j]
            arg = (lay.small_form(fam_no, i + 1)
                   - lay.small_form(fam_no, j + 1)).shift(shift)
            if arg.is_zero():
                raise ValueError("denominator factor vanishes identically")
            atoms.append(global_rs(small, ids, arg, reg.are_dual(*ids),
                                   exponent=-1))
    return FormalMero.build(small, 1, atoms)


@dataclass(frozen=True)
class ClassifiedFactor:
    """One factor of the quotient at the origin with its judgment."""

    atom: FactorAtom
    role: str
    judgment: str


@dataclass(frozen=True)
class ClStarReport:
    """Origin value of the quotient and the non-vanishing verdict.

    ``verdict`` is ``"zero"`` when a denominator factor sits on a pole,
    ``"nonzero"`` when every factor is a pole (hence a residue) or lies
    in the zero-free range, and ``"indeterminate"`` when some factor
    sits at a central point that symbolic data cannot decide.
    """

    value: FormalMero
    factors: tuple[ClassifiedFactor, ...]
    verdict: str


def _judge(t: Fraction, dual: bool) -> str:
    if dual and t in (0, 1):
        return "pole"
    if (t < 0 or t > 1) if dual else (t <= 0 or t >= 1):
        return "zero_free"
    return "central"


def cl_star(reg: AtomRegistry, pair: InducingPair) -> ClStarReport:
    """Quotient at the origin with pole factors turned into residues.

    >>> from .lfactors import standard_registry
    >>> reg = standard_registry()
    >>> report = cl_star(reg, InducingPair((), (SpehDatum(reg.atom("one"), 2),)))
    >>> report.verdict, report.value == FormalMero.one(
    ...     report.value.names, report.value.space)
    ('nonzero', True)
    """
    _require_registered(reg, pair)
    lay = pair_layout(pair)
    small = lay.small_names
    origin = AffineSubspace.from_forms(
        small, [AffineForm.from_dict(small, {nm: 1}) for nm in small])
    factors = []
    atoms = []
    denominator_pole = False
    for i, b1 in enumerate(pair.family1):
        for j, b2 in enumerate(pair.family2):
            ids = (b1.atom.id, b2.atom.id)
            dual = reg.are_dual(*ids)
            t = Fraction(b1.d - b2.d + 1, 2) + pair.nu1[i] + pair.nu2[j]
            judgment = _judge(t, dual)
            if judgment == "pole":
                atom = residue_symbol(small, ids, t)
            else:
                atom = global_rs(small, ids,
                                 AffineForm.constant_form(small, t), dual)
            factors.append(ClassifiedFactor(atom, "numerator", judgment))
            atoms.append(atom)
    for fam_no, blocks, nus in ((1, pair.family1, pair.nu1),
                                (2, pair.family2, pair.nu2)):
        for (i, bi), (j, bj) in combinations(enumerate(blocks), 2):
            ids = (bi.atom.id, _dual_id(reg, bj.atom.id))
            dual = reg.are_dual(*ids)
            t = Fraction(bi.d + bj.d, 2) + nus[i] - nus[j]
            judgment = _judge(t, dual)
            atom = global_rs(small, ids, AffineForm.constant_form(small, t),
                             dual, exponent=-1)
            factors.append(ClassifiedFactor(atom, "denominator", judgment))
            if judgment == "pole":
                denominator_pole = True
            else:
                atoms.append(atom)
    if denominator_pole:
        verdict = "zero"
        value = FormalMero.zero(small, origin)
    else:
        central = any(f.judgment == "central" for f in factors)
        verdict = "indeterminate" if central else "nonzero"
        value = FormalMero.build(small, 1, atoms, origin)
    return ClStarReport(value, tuple(factors), verdict)


def criterion_multisets(reg: AtomRegistry, pair: InducingPair) -> tuple[tuple, tuple]:
    """Numerator and denominator factor multisets, stable under reordering.

    Every factor is keyed by its evaluation point, its atom ids closed
    under registered duality, and its judgment, with each same-family
    factor taken in a canonical order of its two blocks; permuting the
    blocks of either family leaves both multisets unchanged.
    """
    def closure(id_: str) -> tuple[str, ...]:
        return tuple(sorted({id_, _dual_id(reg, id_)}))

    num, den = [], []
    for i, b1 in enumerate(pair.family1):
        for j, b2 in enumerate(pair.family2):
            ids = (b1.atom.id, b2.atom.id)
            t = Fraction(b1.d - b2.d + 1, 2) + pair.nu1[i] + pair.nu2[j]
            num.append((t, tuple(sorted(closure(a) for a in ids)),
                        _judge(t, reg.are_dual(*ids))))
    for fam_no, blocks, nus in ((1, pair.family1, pair.nu1),
                                (2, pair.family2, pair.nu2)):
        entries = sorted(
            ((b.atom.id, b.d, nu) for b, nu in zip(blocks, nus)))
        for (id_a, d_a, nu_a), (id_b, d_b, nu_b) in combinations(entries, 2):
            ids = (id_a, _dual_id(reg, id_b))
            t = Fraction(d_a + d_b, 2) + nu_a - nu_b
            den.append((fam_no, t, tuple(sorted(closure(a) for a in ids)),
                        _judge(t, reg.are_dual(*ids))))
    return tuple(sorted(num)), tuple(sorted(den))


def _pullback_small(lay: PairLayout, F: FormalMero) -> FormalMero:
    param = lay.param_map()
    small = lay.small_names
    atoms = []
    for atom in F.atoms:
        if atom.kind != KIND_GLOBAL or atom.point is not None:
            continue
        arg = AffineForm.constant_form(small, atom.argument.constant)
        for name, c in zip(F.names, atom.argument.coeffs):
            if c != 0:
                arg = arg + param[name].scale(c)
        if arg.is_constant():
            continue
        atoms.append(global_rs(small, atom.pair, arg, atom.dual, atom.exponent))
    return FormalMero.build(small, 1, atoms)


def _fe_orient(reg: AtomRegistry, F: FormalMero) -> FormalMero:
    atoms = []
    for atom in F.atoms:
        if atom.kind != KIND_GLOBAL or atom.argument.is_constant():
            atoms.append(atom)
            continue
        mirror_arg = atom.argument.scale(-1).shift(1)
        mirror_ids = tuple(sorted((_dual_id(reg, a) for a in atom.pair), key=str))
        if (mirror_arg.sort_key(), mirror_ids) < (atom.argument.sort_key(), atom.pair):
            atoms.append(global_rs(F.names, mirror_ids, mirror_arg,
                                   reg.are_dual(*mirror_ids), atom.exponent))
        else:
            atoms.append(atom)
    return FormalMero.build(F.names, 1, atoms, F.space)


def _check_quotient_match(reg: AtomRegistry, pair: InducingPair,
                          result: FormalMero) -> None:
    lay = pair_layout(pair)
    got = _fe_orient(reg, _pullback_small(lay, result))
    filtered = [a for a in cl_quotient(reg, pair).atoms
                if not a.argument.is_constant()]
    want = _fe_orient(reg, FormalMero.build(lay.small_names, 1, filtered))
    if got != want:
        raise ValueError(
            "pipeline result %s does not match the predicted quotient %s"
            % (got, want)
        )


def _dot(comp: Composition, block_perm: Perm) -> Composition:
    inv = inverse(block_perm)
    return Composition(tuple(comp.parts[inv[j]] for j in range(len(inv))))


def _partial_sums(parts: Sequence[int]) -> list[int]:
    out = [0]
    for p in parts:
        out.append(out[-1] + p)
    return out


@dataclass(frozen=True)
class PairBlockMaps:
    """Slot-level permutations of the refined layout, one per side."""

    w1: tuple[Perm, Perm]
    w2: tuple[Perm, Perm]
    w_star: tuple[Perm, Perm]


def pair_block_maps(pair: InducingPair) -> PairBlockMaps:
    """The two corner-moving slot permutations and the group reversal.

    On the GL(n) side the first map moves the leading slot of every
    family-1 group to its family tail, the second moves the trailing
    slot; on the GL(n+1) side the roles of the families are exchanged
    and the trailing slot moves first.
    """
    d1s = [b.d for b in pair.family1]
    d2s = [b.d for b in pair.family2]
    h1 = _partial_sums([d - 1 for d in d1s])
    h2 = _partial_sums([d - 1 for d in d2s])
    D = h1[-1] + h2[-1]

    def n_side(tail_first: bool) -> Perm:
        img = []
        for i, d in enumerate(d1s):
            for k in range(1, d + 1):
                if tail_first and k == 1:
                    img.append(D + i)
                elif tail_first:
                    img.append(h1[i] + k - 2)
                elif k == d:
                    img.append(D + i)
                else:
                    img.append(h1[i] + k - 1)
        for i in range(len(d2s)):
            for j in range(d2s[i] - 1):
                img.append(h1[-1] + h2[i] + j)
        return tuple(img)

    def n1_side(tail_first: bool) -> Perm:
        img = []
        for i in range(len(d1s)):
            for j in range(d1s[i] - 1):
                img.append(h1[i] + j)
        for i, d in enumerate(d2s):
            for k in range(1, d + 1):
                if tail_first and k == 1:
                    img.append(D + i)
                elif tail_first:
                    img.append(h1[-1] + h2[i] + k - 2)
                elif k == d:
                    img.append(D + i)
                else:
                    img.append(h1[-1] + h2[i] + k - 1)
        return tuple(img)

    def reversal(group_sizes: list[int]) -> Perm:
        img = []
        start = 0
        for size in group_sizes:
            img.extend(start + size - 1 - t for t in range(size))
            start += size
        return tuple(img)

    w1 = (n_side(tail_first=True), n1_side(tail_first=False))
    w2 = (n_side(tail_first=False), n1_side(tail_first=True))
    w_star = (reversal(d1s + [d - 1 for d in d2s]),
              reversal([d - 1 for d in d1s] + d2s))
    return PairBlockMaps(w1, w2, w_star)


@dataclass(frozen=True)
class ResidueWeylData:
    """Weyl elements and parabolic subgroups of the residue construction.

    Permutations are ambient, given per side as ``(n, n+1)`` tuples;
    parabolic pairs are standard block parabolics per side, and the two
    matched pairs package a GL(n+1) composition with its corner slot.
    """

    p_pi: tuple[BlockParabolic, BlockParabolic]
    p: tuple[BlockParabolic, BlockParabolic]
    w1: tuple[Perm, Perm]
    w2: tuple[Perm, Perm]
    w_star: tuple[Perm, Perm]
    w_plus: tuple[Perm, Perm]
    q_pi: tuple[BlockParabolic, BlockParabolic]
    p_plus_pi: tuple[BlockParabolic, BlockParabolic]
    q_plus_pi: tuple[BlockParabolic, BlockParabolic]
    p_res: RSParabolic
    p_plus: RSParabolic


def residue_weyl_data(pair: InducingPair) -> ResidueWeylData:
    """All Weyl/parabolic data of the residue construction, validated.

    >>> from .lfactors import standard_registry
    >>> reg = standard_registry()
    >>> data = residue_weyl_data(InducingPair((), (SpehDatum(reg.atom("one"), 2),)))
    >>> data.p_res == data.p_plus, data.w_plus
    (True, ((0,), (0, 1)))
    """
    if pair.n < 1:
        raise ValueError("residue data needs a nonempty GL(n) factor")
    r1s = [b.atom.rank for b in pair.family1]
    r2s = [b.atom.rank for b in pair.family2]
    d1s = [b.d for b in pair.family1]
    d2s = [b.d for b in pair.family2]
    k = pair.k

    def flat(parts: Iterable[int]) -> tuple[int, ...]:
        return tuple(p for p in parts if p > 0)

    refined_n = Composition(flat(
        [r for r, d in zip(r1s, d1s) for _ in range(d)]
        + [r for r, d in zip(r2s, d2s) for _ in range(d - 1)]))
    refined_n1 = Composition(flat(
        [r for r, d in zip(r1s, d1s) for _ in range(d - 1)]
        + [r for r, d in zip(r2s, d2s) for _ in range(d)]))
    p_pi = (BlockParabolic.from_composition(refined_n),
            BlockParabolic.from_composition(refined_n1))

    comp_p_n = Composition(flat([r * d for r, d in zip(r1s, d1s)]
                                + [r * (d - 1) for r, d in zip(r2s, d2s)]))
    comp_p_n1 = Composition(flat([r * (d - 1) for r, d in zip(r1s, d1s)]
                                 + [r * d for r, d in zip(r2s, d2s)]))
    p = (BlockParabolic.from_composition(comp_p_n),
         BlockParabolic.from_composition(comp_p_n1))

    maps = pair_block_maps(pair)
    lift = lift_block_permutation
    w1 = (lift(refined_n, maps.w1[0]), lift(refined_n1, maps.w1[1]))
    w2 = (lift(refined_n, maps.w2[0]), lift(refined_n1, maps.w2[1]))
    w_star = (lift(refined_n, maps.w_star[0]), lift(refined_n1, maps.w_star[1]))
    w_plus = (w2[0], w1[1])

    heads1 = [r for r, d in zip(r1s, d1s) for _ in range(d - 1)]
    heads2 = [r for r, d in zip(r2s, d2s) for _ in range(d - 1)]
    q_n = Composition(flat(heads1 + heads2 + r1s))
    q_n1 = Composition(flat(heads1 + heads2 + r2s))
    if _dot(refined_n, maps.w1[0]) != q_n or _dot(refined_n1, maps.w2[1]) != q_n1:
        raise AssertionError("corner maps do not reorder the slots as stated")
    if (_dot(refined_n, compose(maps.w2[0], maps.w_star[0])) != q_n
            or _dot(refined_n1, compose(maps.w1[1], maps.w_star[1])) != q_n1):
        raise AssertionError("the two residue routes land on different slots")
    q_pi = (BlockParabolic.from_composition(q_n),
            BlockParabolic.from_composition(q_n1))
    routes = (
        (p_pi[0], q_pi[0], w1[0], compose(w2[0], w_star[0])),
        (p_pi[1], q_pi[1], compose(w1[1], w_star[1]), w2[1]),
    )
    for src, tgt, via_a, via_b in routes:
        parts_a = conjugate(via_a, src).levi_partition()
        parts_b = conjugate(via_b, src).levi_partition()
        if parts_a != parts_b or parts_a != tgt.levi_partition():
            raise AssertionError("the two residue routes conjugate differently")

    parts_res = flat(heads1 + heads2 + [k + 1])
    p_res = from_pair(parts_res, len(parts_res))
    if p_res.w_std != identity_perm(pair.n_plus_one):
        raise AssertionError("residue parabolic is not standard")
    if tuple(p_res.gl_parts.parts) != flat(heads1 + heads2 + [k]):
        raise AssertionError("residue parabolic has the wrong GL(n) side")
    if not BlockParabolic.from_composition(p_res.gl_parts).contains(q_pi[0]):
        raise AssertionError("residue parabolic misses the GL(n) target")
    if not BlockParabolic.from_composition(p_res.parts).contains(q_pi[1]):
        raise AssertionError("residue parabolic misses the GL(n+1) target")

    parts_plus = flat([r * (d - 1) for r, d in zip(r1s, d1s)]
                      + [r * (d - 1) for r, d in zip(r2s, d2s)] + [k + 1])
    p_plus = from_pair(parts_plus, len(parts_plus))
    if p_plus.w_std != identity_perm(pair.n_plus_one):
        raise AssertionError("corner-free parabolic is not standard")
    if not is_subparabolic(p_res, p_plus):
        raise AssertionError("residue parabolic exceeds the corner-free one")

    plus_pi_n = Composition(flat(
        [part for r, d in zip(r1s, d1s) for part in (r * (d - 1), r)]
        + [r * (d - 1) for r, d in zip(r2s, d2s)]))
    plus_pi_n1 = Composition(flat(
        [r * (d - 1) for r, d in zip(r1s, d1s)]
        + [part for r, d in zip(r2s, d2s) for part in (r * (d - 1), r)]))
    p_plus_pi = (BlockParabolic.from_composition(plus_pi_n),
                 BlockParabolic.from_composition(plus_pi_n1))
    for side in (0, 1):
        if not (p[side].contains(p_plus_pi[side])
                and p_plus_pi[side].contains(p_pi[side])):
            raise AssertionError("intermediate parabolic out of place")

    p_plus_sides = (BlockParabolic.from_composition(p_plus.gl_parts),
                    BlockParabolic.from_composition(p_plus.parts))
    for side in (0, 1):
        if not is_double_coset_rep(w_plus[side], p[side], p_plus_sides[side]):
            raise AssertionError("corner move is not a minimal representative")
        rel = relative_parabolics(w_plus[side], p[side], p_plus_sides[side])[0]
        if rel != p_plus_pi[side]:
            raise AssertionError("relative parabolic of the corner move drifted")

    def plus_block_perm(side: int) -> Perm:
        src: list[tuple[int, int]] = []
        if side == 0:
            for i, d in enumerate(d1s):
                if d > 1:
                    src.append((0, i))
                src.append((2, i))
            src.extend((1, i) for i, d in enumerate(d2s) if d > 1)
        else:
            src.extend((0, i) for i, d in enumerate(d1s) if d > 1)
            for i, d in enumerate(d2s):
                if d > 1:
                    src.append((1, i))
                src.append((2, i))
        ranked = sorted(src)
        return tuple(ranked.index(key) for key in src)

    q_plus_n = Composition(flat([r * (d - 1) for r, d in zip(r1s, d1s)]
                                + [r * (d - 1) for r, d in zip(r2s, d2s)] + r1s))
    q_plus_n1 = Composition(flat([r * (d - 1) for r, d in zip(r1s, d1s)]
                                 + [r * (d - 1) for r, d in zip(r2s, d2s)] + r2s))
    q_plus_pi = (BlockParabolic.from_composition(q_plus_n),
                 BlockParabolic.from_composition(q_plus_n1))
    for side, comp, expect in ((0, plus_pi_n, q_plus_n), (1, plus_pi_n1, q_plus_n1)):
        block_perm = plus_block_perm(side)
        if lift(comp, block_perm) != w_plus[side]:
            raise AssertionError("corner move disagrees with its block form")
        if _dot(comp, block_perm) != expect:
            raise AssertionError("corner move lands on the wrong blocks")
        got = conjugate(w_plus[side], p_plus_pi[side]).levi_partition()
        if got != q_plus_pi[side].levi_partition():
            raise AssertionError("corner move conjugates to the wrong subgroup")

    return ResidueWeylData(p_pi, p, w1, w2, w_star, w_plus, q_pi,
                           p_plus_pi, q_plus_pi, p_res, p_plus)


@dataclass(frozen=True)
class Sigma1Report:
    """Counts from the two inversion-set product identities."""

    bullet1_roots: int
    sigma1: int
    bullet2_roots: int
    sigma1_prime: int


def _canonical_product(space: AffineSubspace,
                       forms: Iterable[AffineForm]) -> tuple[Fraction, tuple]:
    scalar = Fraction(1)
    keys = []
    for form in forms:
        c, prim = space.reduce(form).primitive()
        if c == 0:
            raise ValueError("product factor vanishes on the subspace")
        scalar *= c
        keys.append((prim.coeffs, prim.constant))
    return scalar, tuple(sorted(keys))


def sigma1_products_check(pair: InducingPair) -> Sigma1Report:
    """Classify the inverted-root pairings and verify both products.

    Every pairing must be nonconstant on the plus hyperplane
    intersection and, on the full intersection, either nonconstant or a
    positive integer.  The constant-one pairings reproduce the minus
    forms up to the trailing family-1 factors, which the second
    identity recovers on its own.

    >>> from .lfactors import standard_registry
    >>> reg = standard_registry()
    >>> sigma1_products_check(InducingPair((), (SpehDatum(reg.atom("one"), 2),)))
    Sigma1Report(bullet1_roots=1, sigma1=1, bullet2_roots=0, sigma1_prime=0)
    """
    lay = pair_layout(pair)
    sf = singular_forms(pair)
    hplus = AffineSubspace.from_forms(lay.names, sf.l_plus)
    hboth = AffineSubspace.from_forms(lay.names, sf.forms())
    maps = pair_block_maps(pair)

    def classify(form: AffineForm) -> Optional[Fraction]:
        if hplus.reduce(form).is_constant():
            raise ValueError(
                "classification ambiguity: %s is constant on the plus "
                "intersection" % form
            )
        red = hboth.reduce(form)
        if not red.is_constant():
            return None
        c = red.constant
        if c <= 0 or c.denominator != 1:
            raise ValueError(
                "classification ambiguity: %s is constant %s on the full "
                "intersection" % (form, c)
            )
        return c

    def collect(side_perms: dict[str, Perm],
                transport: dict[str, Perm]) -> tuple[int, list[AffineForm]]:
        roots = 0
        ones = []
        for side in (SIDE_SMALL, SIDE_BIG):
            perm = side_perms[side]
            slots = lay.slots(side)
            move = transport.get(side)
            for a, b in combinations(range(len(slots)), 2):
                if perm[a] <= perm[b]:
                    continue
                roots += 1
                src_a, src_b = (a, b) if move is None else (move[a], move[b])
                form = slots[src_a].form - slots[src_b].form
                if classify(form) == 1:
                    ones.append(form)
        return roots, ones

    ident_n = identity_perm(len(lay.slots_n))
    b1_roots, sigma1 = collect(
        {SIDE_SMALL: ident_n, SIDE_BIG: maps.w_star[1]}, {})
    b2_roots, sigma1p = collect(
        {SIDE_SMALL: maps.w1[0], SIDE_BIG: maps.w1[1]},
        {SIDE_BIG: inverse(maps.w_star[1])})

    trailing = []
    for label, form in zip(sf.labels_minus, sf.l_minus):
        fam, i, j = label
        if fam == 1 and j == pair.family1[i - 1].d - 1:
            trailing.append(form)

    lhs = _canonical_product(hplus, [f.shift(-1) for f in sigma1] + trailing)
    rhs = _canonical_product(hplus, sf.l_minus)
    if lhs != rhs:
        raise ValueError("inversion product misses the minus forms")
    lhs2 = _canonical_product(hplus, [f.shift(-1) for f in sigma1p])
    rhs2 = _canonical_product(hplus, trailing)
    if lhs2 != rhs2:
        raise ValueError("transported inversion product misses the trailing forms")
    return Sigma1Report(b1_roots, len(sigma1), b2_roots, len(sigma1p))


def w_delta_elements(pair: InducingPair) -> list[tuple[Perm, Perm]]:
    """All family-preserving block permutation pairs of the pair."""
    return [(p1, p2)
            for p1 in permutations(range(pair.m1))
            for p2 in permutations(range(pair.m2))]


def w_delta_block_perm(pair: InducingPair, perm1: Perm, perm2: Perm) -> Perm:
    """The common two-sided block permutation on all pair blocks."""
    return tuple(perm1[i] for i in range(pair.m1)) + tuple(
        pair.m1 + perm2[j] for j in range(pair.m2))


def w_delta_permute(pair: InducingPair, perm1: Perm, perm2: Perm) -> InducingPair:
    """Pair with each family reordered by its block permutation."""
    def apply(blocks: tuple, nus: tuple, perm: Perm) -> tuple[tuple, tuple]:
        if sorted(perm) != list(range(len(blocks))):
            raise ValueError("block permutation degree mismatch")
        out_b = [None] * len(blocks)
        out_n = [None] * len(blocks)
        for i, dst in enumerate(perm):
            out_b[dst] = blocks[i]
            out_n[dst] = nus[i]
        return tuple(out_b), tuple(out_n)

    fam1, nu1 = apply(pair.family1, pair.nu1, tuple(perm1))
    fam2, nu2 = apply(pair.family2, pair.nu2, tuple(perm2))
    return InducingPair(fam1, fam2, nu1, nu2)
