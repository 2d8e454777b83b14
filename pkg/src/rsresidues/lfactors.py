"""Rankin-Selberg L-factor calculus over a registry of cuspidal atoms.

Representations enter as formal data: an opaque cuspidal (global) or
supercuspidal (local) atom from a registry, a Speh or generalized
Steinberg multiplicity, an optional rational determinant twist, and a
symbolic coordinate form.  The assemblers expand the classical product
rules for Rankin-Selberg factors of such data into
:class:`~rsresidues.mero.FormalMero` values: global factors stay opaque
completed-L atoms, local factors expand through supercuspidal match
sets into explicit local zeta atoms, and epsilon factors ride along as
tagged opaque units.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

from .affine import AffineForm, frac
from .mero import (
    KIND_EPSILON,
    KIND_LOCAL,
    FormalMero,
    epsilon_unit,
    global_rs,
    local_zeta,
)
from .weyl import (
    BlockParabolic,
    Composition,
    Perm,
    compose,
    inverse,
    is_double_coset_rep,
    lift_block_permutation,
    longest_element,
    relative_parabolics,
)

SCOPE_GLOBAL = "global"
SCOPE_LOCAL = "local"


@dataclass(frozen=True)
class CuspidalAtom:
    """Opaque cuspidal (global) or supercuspidal (local) building block.

    >>> CuspidalAtom("one", 1, "global").rank
    1
    """

    id: str
    rank: int
    scope: str

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("atom id must be a nonempty string")
        if self.rank < 1:
            raise ValueError("rank must be a positive integer: %r" % (self.rank,))
        if self.scope not in (SCOPE_GLOBAL, SCOPE_LOCAL):
            raise ValueError("scope must be global or local: %r" % (self.scope,))


@dataclass(frozen=True)
class TwistedAtom:
    """Atom tensored with the ``twist`` power of the determinant character."""

    atom: CuspidalAtom
    twist: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "twist", frac(self.twist))


@dataclass(frozen=True)
class SpehDatum:
    """A ``d``-fold Speh (global) or generalized Steinberg (local) block.

    ``d = 0`` stands for the trivial representation of the trivial
    group: every factor against it is the empty product.

    >>> SpehDatum(CuspidalAtom("one", 1, "global"), 3).size
    3
    """

    atom: CuspidalAtom
    d: int

    def __post_init__(self) -> None:
        if self.d < 0:
            raise ValueError("multiplicity must be nonnegative: %r" % (self.d,))

    @property
    def size(self) -> int:
        return self.atom.rank * self.d


class AtomRegistry:
    """Immutable table of atoms, dual pairs, and local match sets.

    ``dual_pairs`` is a symmetric relation designating, for atoms that
    have one, the atom realizing the contragredient.  ``match_sets``
    stores, per pair of local atoms, the finite set of rational twists
    ``t`` such that the first atom twisted by ``t`` is isomorphic to
    the contragredient of the second; this relation is symmetric in the
    two atoms and the table is completed accordingly.  Pairs missing
    from the table have empty match set.

    >>> reg = standard_registry()
    >>> sorted(reg.match_set("triv", "triv"))
    [Fraction(0, 1)]
    >>> reg.dual_atom("one").id
    'one'
    >>> reg.are_dual("one", "one")
    True
    """

    def __init__(
        self,
        atoms: Iterable[CuspidalAtom],
        dual_pairs: Iterable[Sequence[str]] = (),
        match_sets: Optional[Mapping[tuple[str, str], Iterable]] = None,
    ) -> None:
        table: dict[str, CuspidalAtom] = {}
        for atom in atoms:
            if atom.id in table:
                raise ValueError("atom id %r repeated" % atom.id)
            table[atom.id] = atom
        duals: dict[str, str] = {}
        for pair in dual_pairs:
            a, b = pair
            for id_ in (a, b):
                if id_ not in table:
                    raise ValueError("dual pair references unknown atom %r" % id_)
            if table[a].scope != table[b].scope or table[a].rank != table[b].rank:
                raise ValueError("dual atoms %r, %r must share scope and rank" % (a, b))
            for src, dst in ((a, b), (b, a)):
                if duals.setdefault(src, dst) != dst:
                    raise ValueError("atom %r assigned two distinct duals" % src)
        matches: dict[tuple[str, str], frozenset[Fraction]] = {}
        for key, values in (match_sets or {}).items():
            a, b = key
            for id_ in (a, b):
                if id_ not in table:
                    raise ValueError("match set references unknown atom %r" % id_)
                if table[id_].scope != SCOPE_LOCAL:
                    raise ValueError("match sets are for local atoms, got %r" % id_)
            if table[a].rank != table[b].rank:
                raise ValueError("matched atoms %r, %r must share rank" % (a, b))
            fixed = frozenset(frac(t) for t in values)
            for ordered in ((a, b), (b, a)):
                if matches.setdefault(ordered, fixed) != fixed:
                    raise ValueError("match set of %r inconsistent with its mirror" % (ordered,))
        self._atoms = table
        self._duals = duals
        self._matches = matches

    def atom(self, id_: str) -> CuspidalAtom:
        if id_ not in self._atoms:
            raise ValueError("unknown atom %r" % id_)
        return self._atoms[id_]

    def atom_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self._atoms))

    def has_dual(self, id_: str) -> bool:
        self.atom(id_)
        return id_ in self._duals

    def dual_atom(self, id_: str) -> CuspidalAtom:
        self.atom(id_)
        if id_ not in self._duals:
            raise ValueError("atom %r has no registered dual" % id_)
        return self._atoms[self._duals[id_]]

    def are_dual(self, id1: str, id2: str) -> bool:
        self.atom(id1)
        self.atom(id2)
        return self._duals.get(id1) == id2

    def dual_twisted(self, twisted: TwistedAtom) -> TwistedAtom:
        return TwistedAtom(self.dual_atom(twisted.atom.id), -twisted.twist)

    def match_set(self, id1: str, id2: str) -> frozenset[Fraction]:
        self.atom(id1)
        self.atom(id2)
        return self._matches.get((id1, id2), frozenset())

    def to_json(self) -> dict:
        pairs = sorted(
            {tuple(sorted((a, b))) for a, b in self._duals.items()}
        )
        match_rows = sorted(
            [a, b, sorted(str(t) for t in values)]
            for (a, b), values in self._matches.items()
            if a <= b
        )
        return {
            "atoms": [
                {"id": atom.id, "rank": atom.rank, "scope": atom.scope}
                for atom in sorted(self._atoms.values(), key=lambda x: x.id)
            ],
            "dual_pairs": [list(p) for p in pairs],
            "match_sets": [list(row) for row in match_rows],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> AtomRegistry:
        atoms = [
            CuspidalAtom(row["id"], int(row["rank"]), row["scope"])
            for row in data.get("atoms", ())
        ]
        duals = [tuple(p) for p in data.get("dual_pairs", ())]
        matches = {
            (row[0], row[1]): [Fraction(t) for t in row[2]]
            for row in data.get("match_sets", ())
        }
        return cls(atoms, duals, matches)


def standard_registry() -> AtomRegistry:
    """Registry holding the trivial character in both scopes.

    The global atom ``one`` is the trivial Hecke character of GL(1),
    self dual; the local atom ``triv`` is the trivial character of the
    units, self dual with self match set {0}.
    """
    one = CuspidalAtom("one", 1, SCOPE_GLOBAL)
    triv = CuspidalAtom("triv", 1, SCOPE_LOCAL)
    return AtomRegistry(
        [one, triv],
        dual_pairs=[("one", "one"), ("triv", "triv")],
        match_sets={("triv", "triv"): [Fraction(0)]},
    )


def _as_twisted(reg: AtomRegistry, item) -> TwistedAtom:
    if isinstance(item, TwistedAtom):
        reg.atom(item.atom.id)
        return item
    if isinstance(item, CuspidalAtom):
        reg.atom(item.id)
        return TwistedAtom(item)
    return TwistedAtom(reg.atom(item))


def supercuspidal_L_local(reg: AtomRegistry, pair: Sequence, s: AffineForm) -> FormalMero:
    """Local factor of two (possibly twisted) supercuspidal atoms.

    The factor expands through the registry match set, one local zeta
    atom per matching twist; an empty match set gives the constant 1.

    >>> from .affine import parse_form
    >>> reg = standard_registry()
    >>> F = supercuspidal_L_local(reg, ("triv", "triv"), parse_form(("s",), "s+1/2"))
    >>> [str(a.argument) for a in F.atoms]
    ['s+1/2']
    """
    t1, t2 = (_as_twisted(reg, item) for item in pair)
    for t in (t1, t2):
        if t.atom.scope != SCOPE_LOCAL:
            raise ValueError("scope mismatch: %r is not a local atom" % t.atom.id)
    shift = t1.twist + t2.twist
    atoms = [
        local_zeta(s.names, s.shift(shift - t))
        for t in sorted(reg.match_set(t1.atom.id, t2.atom.id))
    ]
    return FormalMero.build(s.names, 1, atoms)


def speh_rs_L(reg: AtomRegistry, t1: SpehDatum, t2: SpehDatum, s: AffineForm) -> FormalMero:
    """Global Rankin-Selberg factor of two Speh blocks.

    The factor is the double product over the two multiplicity ranges
    of the cuspidal factor shifted by ``(d - 2i + 1)/2 + (d' - 2j + 1)/2``;
    either multiplicity 0 gives the empty product.

    >>> from .affine import parse_form
    >>> reg = standard_registry()
    >>> one = SpehDatum(reg.atom("one"), 2)
    >>> F = speh_rs_L(reg, one, SpehDatum(reg.atom("one"), 1), parse_form(("s",), "s"))
    >>> [str(a.argument) for a in F.atoms]
    ['s-1/2', 's+1/2']
    """
    for t in (t1, t2):
        if t.atom.scope != SCOPE_GLOBAL:
            raise ValueError("scope mismatch: %r is not a global atom" % t.atom.id)
    pair = (t1.atom.id, t2.atom.id)
    dual = reg.are_dual(t1.atom.id, t2.atom.id)
    atoms = []
    for i in range(1, t1.d + 1):
        for j in range(1, t2.d + 1):
            shift = Fraction(t1.d - 2 * i + 1, 2) + Fraction(t2.d - 2 * j + 1, 2)
            atoms.append(global_rs(s.names, pair, s.shift(shift), dual))
    return FormalMero.build(s.names, 1, atoms)


def steinberg_rs_L_local(reg: AtomRegistry, d1: int, d2: int, pair: Sequence,
                         s: AffineForm) -> FormalMero:
    """Local factor of two generalized Steinberg blocks.

    Only ``min(d1, d2)`` supercuspidal factors survive, at arguments
    shifted by ``(dmax - 1)/2 + (dmin - 2i + 1)/2``.

    >>> from .affine import parse_form
    >>> reg = standard_registry()
    >>> F = steinberg_rs_L_local(reg, 2, 1, ("triv", "triv"), parse_form(("s",), "s"))
    >>> [str(a.argument) for a in F.atoms]
    ['s+1/2']
    """
    if d1 < 1 or d2 < 1:
        raise ValueError("Steinberg multiplicities must be positive: %r, %r" % (d1, d2))
    if d2 > d1:
        d1, d2 = d2, d1
    out = FormalMero.one(s.names)
    for i in range(1, d2 + 1):
        shift = Fraction(d1 - 1, 2) + Fraction(d2 - 2 * i + 1, 2)
        out = out * supercuspidal_L_local(reg, pair, s.shift(shift))
    return out


def rs_L(reg: AtomRegistry, b1: SpehDatum, b2: SpehDatum, s: AffineForm) -> FormalMero:
    """Factor of two blocks of a common scope, dispatching on it."""
    if b1.atom.scope != b2.atom.scope:
        raise ValueError(
            "scope mismatch: %s vs %s" % (b1.atom.scope, b2.atom.scope)
        )
    if b1.d == 0 or b2.d == 0:
        return FormalMero.one(s.names)
    if b1.atom.scope == SCOPE_GLOBAL:
        return speh_rs_L(reg, b1, b2, s)
    return steinberg_rs_L_local(reg, b1.d, b2.d, (b1.atom, b2.atom), s)


def dual_speh(reg: AtomRegistry, block: SpehDatum) -> SpehDatum:
    """Contragredient block: dual atom, same multiplicity."""
    return SpehDatum(reg.dual_atom(block.atom.id), block.d)


def induced_rs_L(reg: AtomRegistry, blocks1: Sequence[tuple[SpehDatum, object]],
                 blocks2: Sequence[tuple[SpehDatum, object]], s: AffineForm) -> FormalMero:
    """Factor of two induced families of twisted blocks.

    Each side is a sequence of ``(block, rational twist)``; the result
    is the double product of the constituent factors at the argument
    shifted by the two twists.
    """
    out = FormalMero.one(s.names)
    for b1, t1 in blocks1:
        for b2, t2 in blocks2:
            out = out * rs_L(reg, b1, b2, s.shift(frac(t1) + frac(t2)))
    return out


@dataclass(frozen=True)
class BlockLevi:
    """Ordered Levi blocks, each a block datum with a coordinate form.

    All blocks share one scope and all coordinates one name tuple;
    multiplicities are positive (trivial blocks do not occupy a slot).
    """

    blocks: tuple[SpehDatum, ...]
    coords: tuple[AffineForm, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple(self.blocks))
        object.__setattr__(self, "coords", tuple(self.coords))
        if not self.blocks:
            raise ValueError("at least one block required")
        if len(self.blocks) != len(self.coords):
            raise ValueError(
                "%d blocks but %d coordinates" % (len(self.blocks), len(self.coords))
            )
        if any(b.d < 1 for b in self.blocks):
            raise ValueError("Levi blocks must have positive multiplicity")
        scope = self.blocks[0].atom.scope
        if any(b.atom.scope != scope for b in self.blocks):
            raise ValueError("blocks of one Levi must share a scope")
        names = self.coords[0].names
        if any(f.names != names for f in self.coords):
            raise ValueError("coordinates live on different name tuples")

    @property
    def names(self) -> tuple[str, ...]:
        return self.coords[0].names

    @property
    def scope(self) -> str:
        return self.blocks[0].atom.scope

    def composition(self) -> Composition:
        return Composition(tuple(b.size for b in self.blocks))


def levi_b_normalizer(reg: AtomRegistry, levi: BlockLevi) -> FormalMero:
    """Product of L(1 + lam_i - lam_j, block_i x dual block_j), i < j."""
    out = FormalMero.one(levi.names)
    for i, j in combinations(range(len(levi.blocks)), 2):
        arg = (levi.coords[i] - levi.coords[j]).shift(1)
        out = out * rs_L(reg, levi.blocks[i], dual_speh(reg, levi.blocks[j]), arg)
    return out


def b_and_rs_normalizers(reg: AtomRegistry, side_small: BlockLevi,
                         side_big: BlockLevi) -> tuple[FormalMero, FormalMero]:
    """Same-side normalizer and the half-shifted cross-side product.

    The first return value multiplies L(1 + lam_i - lam_j, pi_i x dual
    pi_j) over ordered same-side pairs of both sides; the second
    multiplies L(1/2 + lam_i + mu_j, pi_i x pi'_j) over cross pairs.
    """
    if side_small.names != side_big.names:
        raise ValueError("the two sides live on different name tuples")
    b = levi_b_normalizer(reg, side_small) * levi_b_normalizer(reg, side_big)
    lhalf = FormalMero.one(side_small.names)
    for i, bi in enumerate(side_small.blocks):
        for j, bj in enumerate(side_big.blocks):
            arg = (side_small.coords[i] + side_big.coords[j]).shift(Fraction(1, 2))
            lhalf = lhalf * rs_L(reg, bi, bj, arg)
    return b, lhalf


def _eps_tag(b1: SpehDatum, b2: SpehDatum, s: AffineForm) -> str:
    return "eps(%s:%d x %s:%d; %s)" % (b1.atom.id, b1.d, b2.atom.id, b2.d, s)


def _eps_factor(names: Sequence[str], b1: SpehDatum, b2: SpehDatum,
                s: AffineForm) -> FormalMero:
    return FormalMero.build(names, 1, [epsilon_unit(names, tag=_eps_tag(b1, b2, s))])


def n_gamma_factors(reg: AtomRegistry, tau1: SpehDatum, tau2: SpehDatum,
                    s: AffineForm) -> tuple[FormalMero, FormalMero]:
    """Scalar and gamma factor of one ordered local block pair.

    The pair datum is ``tau1 x dual(tau2)``.  The scalar factor is
    L(s)/(L(1+s) eps); the gamma factor is eps L(1-s, dual data)/L(s),
    with the same tagged epsilon unit in both.

    >>> from .affine import parse_form
    >>> reg = standard_registry()
    >>> triv = SpehDatum(reg.atom("triv"), 1)
    >>> n, g = n_gamma_factors(reg, triv, triv, parse_form(("s",), "s"))
    >>> [(a.kind, str(a.argument), a.exponent) for a in g.atoms]
    [('local_zeta', '-s+1', 1), ('local_zeta', 's', -1), ('epsilon_unit', '0', 1)]
    """
    for t in (tau1, tau2):
        if t.atom.scope != SCOPE_LOCAL:
            raise ValueError("scope mismatch: %r is not a local atom" % t.atom.id)
    pair_second = dual_speh(reg, tau2)
    dual_first = dual_speh(reg, tau1)
    L_s = rs_L(reg, tau1, pair_second, s)
    L_s1 = rs_L(reg, tau1, pair_second, s.shift(1))
    L_dual = rs_L(reg, dual_first, tau2, (-s).shift(1))
    eps = _eps_factor(s.names, tau1, pair_second, s)
    n = L_s * (L_s1 * eps).inverted()
    gamma = eps * L_dual * L_s.inverted()
    return n, gamma


def _check_block_perm(levi: BlockLevi, w: Perm) -> None:
    if len(w) != len(levi.blocks) or sorted(w) != list(range(len(w))):
        raise ValueError("w must be a permutation of the %d blocks" % len(levi.blocks))


def _inverted_pairs(w: Perm) -> list[tuple[int, int]]:
    return [
        (i, j)
        for i in range(len(w))
        for j in range(i + 1, len(w))
        if w[i] > w[j]
    ]


def n_product(reg: AtomRegistry, levi: BlockLevi, w: Perm) -> FormalMero:
    """Product of scalar factors over the block pairs inverted by ``w``."""
    _check_block_perm(levi, w)
    out = FormalMero.one(levi.names)
    for i, j in _inverted_pairs(w):
        n, _ = n_gamma_factors(reg, levi.blocks[i], levi.blocks[j],
                               levi.coords[i] - levi.coords[j])
        out = out * n
    return out


def gamma_product(reg: AtomRegistry, levi: BlockLevi, w: Perm) -> FormalMero:
    """Product of gamma factors over the block pairs inverted by ``w``."""
    _check_block_perm(levi, w)
    out = FormalMero.one(levi.names)
    for i, j in _inverted_pairs(w):
        _, g = n_gamma_factors(reg, levi.blocks[i], levi.blocks[j],
                               levi.coords[i] - levi.coords[j])
        out = out * g
    return out


def refine_steinberg(levi: BlockLevi) -> tuple[BlockLevi, Composition]:
    """Split each Steinberg block into its supercuspidal constituents.

    A block ``(atom, d)`` at coordinate ``f`` becomes ``d`` blocks
    ``(atom, 1)`` at coordinates ``f + (d - 2k + 1)/2``.  The returned
    composition counts refined blocks per original block, ready for
    :func:`~rsresidues.weyl.lift_block_permutation`.
    """
    if levi.scope != SCOPE_LOCAL:
        raise ValueError("refinement applies to local block data")
    blocks: list[SpehDatum] = []
    coords: list[AffineForm] = []
    for block, coord in zip(levi.blocks, levi.coords):
        for k in range(1, block.d + 1):
            blocks.append(SpehDatum(block.atom, 1))
            coords.append(coord.shift(Fraction(block.d - 2 * k + 1, 2)))
    return BlockLevi(tuple(blocks), tuple(coords)), Composition(
        tuple(b.d for b in levi.blocks)
    )


def longest_weyl_rep(Q: BlockParabolic) -> Perm:
    """Ambient lift of the order-reversing permutation of the Q-blocks."""
    return lift_block_permutation(Q.composition(), longest_element(len(Q.blocks)))


def _validate_c_data(reg: AtomRegistry, levi: BlockLevi, P: BlockParabolic,
                     Q: BlockParabolic, w: Perm) -> BlockParabolic:
    if not (P.is_standard() and Q.is_standard()):
        raise ValueError("standard parabolics required")
    if P.ambient != Q.ambient:
        raise ValueError("ambient mismatch: %d vs %d" % (P.ambient, Q.ambient))
    if levi.scope != SCOPE_LOCAL:
        raise ValueError("local block data required")
    if levi.composition().parts != P.composition().parts:
        raise ValueError("block sizes do not match the source parabolic")
    if len(w) != P.ambient or sorted(w) != list(range(P.ambient)):
        raise ValueError("w must be a permutation of the ambient indices")
    if not is_double_coset_rep(w, P, Q):
        raise ValueError("w is not a minimal double coset representative")
    Pw, Qw = relative_parabolics(w, P, Q)
    if Pw.blocks != P.blocks:
        raise ValueError("w does not embed the source Levi into the target one")
    return Qw


def _source_block_order(P: BlockParabolic, w: Perm) -> Perm:
    firsts = [w[blk[0]] for blk in P.blocks]
    ranked = sorted(range(len(firsts)), key=firsts.__getitem__)
    out = [0] * len(firsts)
    for pos, i in enumerate(ranked):
        out[i] = pos
    return tuple(out)


def _group_reversal(groups: Sequence[int]) -> Perm:
    out = []
    for a, g in enumerate(groups):
        later = sum(1 for h in groups if h > g)
        before = sum(1 for b in range(a) if groups[b] == g)
        out.append(later + before)
    return tuple(out)


def c_coefficient(reg: AtomRegistry, levi: BlockLevi, P: BlockParabolic,
                  Q: BlockParabolic, w: Perm) -> FormalMero:
    """Jacquet coefficient of ``w`` from the three-factor assembly.

    The value is the scalar factor times the gamma factor of ``w`` on
    the source data, times the inverse gamma factor of the long
    element of the target parabolic on the transported dual data at
    the negated coordinates.
    """
    Qw = _validate_c_data(reg, levi, P, Q, w)
    block_w = _source_block_order(P, w)
    n = n_product(reg, levi, block_w)
    g = gamma_product(reg, levi, block_w)
    wi = inverse(w)
    src = [P.block_index(wi[blk[0]]) for blk in Qw.blocks]
    transported = BlockLevi(
        tuple(dual_speh(reg, levi.blocks[k]) for k in src),
        tuple(-levi.coords[k] for k in src),
    )
    groups = [Q.block_index(blk[0]) for blk in Qw.blocks]
    g_long = gamma_product(reg, transported, _group_reversal(groups))
    return n * g * g_long.inverted()


def c_coefficient_explicit(reg: AtomRegistry, levi: BlockLevi, P: BlockParabolic,
                           Q: BlockParabolic, w: Perm) -> FormalMero:
    """Jacquet coefficient of ``w`` from the normalizer-quotient assembly.

    The value is the inverse same-side normalizer, times the inverse
    scalar-factor product over pairs landing in one target block, times
    L/eps factors over all pairs oriented by the long target element.
    """
    _validate_c_data(reg, levi, P, Q, w)
    m = len(levi.blocks)
    b = levi_b_normalizer(reg, levi)
    target_block = [Q.block_index(w[blk[0]]) for blk in P.blocks]
    n_target = FormalMero.one(levi.names)
    for i, j in combinations(range(m), 2):
        if target_block[i] != target_block[j]:
            continue
        n, _ = n_gamma_factors(reg, levi.blocks[i], levi.blocks[j],
                               levi.coords[i] - levi.coords[j])
        n_target = n_target * n
    v = compose(longest_weyl_rep(Q), w)
    pos_v = [v[blk[0]] for blk in P.blocks]
    tail = FormalMero.one(levi.names)
    for i, j in combinations(range(m), 2):
        first, second = (i, j) if pos_v[i] < pos_v[j] else (j, i)
        arg = levi.coords[first] - levi.coords[second]
        second_dual = dual_speh(reg, levi.blocks[second])
        term = rs_L(reg, levi.blocks[first], second_dual, arg)
        eps = _eps_factor(levi.names, levi.blocks[first], second_dual, arg)
        tail = tail * term * eps.inverted()
    return b.inverted() * n_target.inverted() * tail


def unit_normal_form(F: FormalMero) -> FormalMero:
    """Comparison form modulo units.

    Epsilon atoms are dropped, each local zeta argument is flipped to
    the orientation with positive leading sign, and the prefactor is
    forgotten.  A local zeta at ``u`` differs from one at ``-u`` by a
    sign and a monomial in ``q**u``, both units, so the class modulo
    units survives; the value as a function does not.
    """
    atoms = []
    for atom in F.atoms:
        if atom.kind == KIND_EPSILON:
            continue
        if atom.kind == KIND_LOCAL:
            scalar, _ = atom.argument.primitive()
            if scalar < 0:
                atom = replace(atom, argument=-atom.argument)
        atoms.append(atom)
    prefactor = 0 if F.is_zero() else 1
    return FormalMero.build(F.names, prefactor, atoms, F.space)
