"""Exact arithmetic at a nonarchimedean place: lattice cone partitions,
rational evaluation of local zeta factors, and the unfolding support
analysis for matched parabolic subgroups.

The module has three layers.

* Cone partitions: the points of a unimodular pairing lattice with all
  distinguished pairings at least M are cut into finitely many disjoint
  cosets, each a base point plus a coordinate sublattice floored past a
  pointwise threshold.  This is the step that turns a sum over the cone
  into finitely many geometric series; the zeroed axes of every coset
  name the coarser matched parabolic whose split component the
  sublattice is.
* Rational evaluation: local zeta factors (1 - q^{-s})^{-1} evaluated
  exactly at points carrying rational values of q^{-s} per coordinate,
  plus the closed-form GL(1) x GL(2) unramified identity suite run in
  exact arithmetic.
* Support analysis: for a local inducing pair, a matched parabolic Q
  and an admissible Weyl pair w, the ratio of slot zeta factors over
  cross-side local L-factors is restricted along the singular forms of
  the pair in schedule order.  The survive/vanish verdict is compared
  with the predicted criterion: Q contained in the residual parabolic
  and w in the corner-window Weyl set composed with the schedule's
  corner move.  A factorization witness assembles the surviving terms
  of both schedules as operator words and checks that every word leads
  with the corner move.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Iterable, Mapping, Optional, Sequence

from .affine import AffineForm, frac
from .lfactors import AtomRegistry, SCOPE_LOCAL, SpehDatum, supercuspidal_L_local
from .mero import KIND_LOCAL, FactorAtom, FormalMero, local_zeta
from .pairs import (
    InducingPair,
    PairSlot,
    ResidueWeylData,
    SingularForms,
    first_order_schedule,
    pair_layout,
    residue_weyl_data,
    second_order_schedule,
    singular_forms,
)
from .rsparabolic import (
    RSParabolic,
    ZSpace,
    enumerate_rs,
    from_pair,
    is_subparabolic,
)
from .weyl import (
    BlockParabolic,
    Perm,
    compose,
    inverse,
    is_double_coset_rep,
)

ORDER_SMALL = "n"
ORDER_BIG = "n+1"
ORDERS = (ORDER_SMALL, ORDER_BIG)

VERDICT_SURVIVES = "survives"
VERDICT_VANISHES = "vanishes"

MODE_Q_POWER = "q_power"
MODE_PLAIN = "plain"


# ---------------------------------------------------------------------------
# Cone partitions of a pairing lattice


def _det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant by fraction-free forward elimination."""
    m = [[frac(v) for v in row] for row in rows]
    size = len(m)
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, size):
            factor = m[r][col] * inv
            if factor:
                m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    return det


@dataclass(frozen=True)
class LatticeSpec:
    """Free lattice presented by the pairing matrix of its covectors.

    ``pairings[i][j]`` is the value of the i-th distinguished covector
    on the j-th generator.  The matrix must be square, integral and
    unimodular, so that pairing tuples enumerate the lattice points
    exactly.  Specs derived from a matched parabolic use the coweight
    basis of its split component, whose pairing matrix is the identity;
    those specs remember the parabolic and can name the coarser one
    attached to any set of zeroed axes.

    >>> LatticeSpec.identity(2).pairings
    ((1, 0), (0, 1))
    """

    rank: int
    pairings: tuple[tuple[int, ...], ...]
    parent: Optional[RSParabolic] = None

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        if len(self.pairings) != self.rank or any(
            len(row) != self.rank for row in self.pairings
        ):
            raise ValueError("pairing matrix must be %d x %d" % (self.rank, self.rank))
        if any(not isinstance(v, int) or isinstance(v, bool)
               for row in self.pairings for v in row):
            raise ValueError("pairings must be integers")
        if abs(_det(self.pairings)) != 1:
            raise ValueError("pairing matrix must be unimodular")

    @classmethod
    def identity(cls, rank: int, parent: Optional[RSParabolic] = None) -> LatticeSpec:
        rows = tuple(
            tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank)
        )
        return cls(rank, rows, parent)

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[int]]) -> LatticeSpec:
        return cls(len(rows), tuple(tuple(row) for row in rows))

    @classmethod
    def from_rs_parabolic(cls, P: RSParabolic) -> LatticeSpec:
        """Coweight-basis spec of the split component of a matched pair.

        >>> LatticeSpec.from_rs_parabolic(from_pair((1, 1), 2)).rank
        1
        """
        return cls.identity(ZSpace(P).dim, P)

    def merged_parabolic(self, zero_axes: Iterable[int]) -> RSParabolic:
        """The coarser matched parabolic with the given axes collapsed.

        Axis ``a`` of the pairing lattice separates slots ``a`` and
        ``a + 1`` of the parent; zeroing it merges the two slots.

        >>> spec = LatticeSpec.from_rs_parabolic(from_pair((1, 1, 1), 3))
        >>> spec.merged_parabolic((1,)).parts.parts
        (1, 2)
        """
        if self.parent is None:
            raise ValueError("spec has no parabolic attached")
        axes = set(zero_axes)
        if not axes <= set(range(self.rank)):
            raise ValueError("axes outside range(%d)" % self.rank)
        parts: list[int] = []
        corner = 0
        for i, p in enumerate(self.parent.parts.parts):
            if i > 0 and (i - 1) in axes:
                parts[-1] += p
            else:
                parts.append(p)
            if i == self.parent.corner0:
                corner = len(parts)
        return from_pair(tuple(parts), corner)

    def to_json(self) -> dict:
        out: dict = {"rank": self.rank, "pairings": [list(r) for r in self.pairings]}
        if self.parent is not None:
            out["parabolic"] = self.parent.to_json()
        return out


@dataclass(frozen=True)
class LatticeCoset:
    """Base point plus a floored coordinate sublattice, in pairing
    coordinates.

    The zeroed axes are pinned to the base values; every free axis runs
    from the base value plus the floor upward.  Base values vanish on
    the free axes, so the base point is the canonical representative of
    the coset modulo its sublattice.
    """

    rank: int
    base: tuple[int, ...]
    zero_axes: tuple[int, ...]
    floor: int

    def __post_init__(self) -> None:
        if len(self.base) != self.rank:
            raise ValueError("base point has the wrong length")
        zs = set(self.zero_axes)
        if not zs <= set(range(self.rank)) or len(zs) != len(self.zero_axes):
            raise ValueError("zero axes must be distinct and in range")
        if any(self.base[j] != 0 for j in range(self.rank) if j not in zs):
            raise ValueError("base point must vanish on free axes")

    def contains(self, t: Sequence[int]) -> bool:
        if len(t) != self.rank:
            raise ValueError("point has the wrong length")
        zs = set(self.zero_axes)
        return all(
            t[i] == self.base[i] if i in zs else t[i] >= self.base[i] + self.floor
            for i in range(self.rank)
        )

    def to_json(self) -> dict:
        return {
            "base": list(self.base),
            "zero_axes": list(self.zero_axes),
            "floor": self.floor,
        }


def _threshold_at(thresholds, t: tuple[int, ...]) -> int:
    if isinstance(thresholds, Mapping):
        try:
            value = thresholds[t]
        except KeyError:
            raise ValueError("threshold undefined at %r" % (t,))
    elif callable(thresholds):
        value = thresholds(t)
    else:
        raise TypeError("thresholds must be a mapping or a callable")
    if value is None or not isinstance(value, int) or isinstance(value, bool):
        raise ValueError("threshold at %r is not an integer" % (t,))
    return value


def lattice_partition(spec: LatticeSpec, M: int,
                      thresholds) -> tuple[LatticeCoset, ...]:
    """Cut the cone of points with all pairings >= M into cosets.

    ``thresholds`` maps a lattice point (as a pairing tuple) to an
    integer; the emitted floor of every coset is at least the threshold
    of its base point.  One induction step pins each axis either below
    the base threshold (finitely many values) or floors it there, so
    the output is a disjoint cover.

    >>> cosets = lattice_partition(LatticeSpec.identity(1), 0, lambda t: 2)
    >>> [(c.base, c.zero_axes, c.floor) for c in cosets]
    [((0,), (), 2), ((0,), (0,), 2), ((1,), (0,), 2)]

    >>> lattice_partition(LatticeSpec.identity(0), 3, lambda t: 5)
    (LatticeCoset(rank=0, base=(), zero_axes=(), floor=5),)
    """
    if spec.rank > 4:
        raise ValueError("partition runs at desk scale (rank <= 4)")
    if not isinstance(M, int) or isinstance(M, bool):
        raise ValueError("the cone bound must be an integer")
    out: list[LatticeCoset] = []

    def emit(pinned: Mapping[int, int], floor: int) -> None:
        base = tuple(pinned.get(j, 0) for j in range(spec.rank))
        if floor < _threshold_at(thresholds, base):
            raise AssertionError("emitted floor below the base threshold")
        out.append(LatticeCoset(spec.rank, base, tuple(sorted(pinned)), floor))

    def rec(pinned: dict[int, int], lo: int) -> None:
        base = tuple(pinned.get(j, 0) for j in range(spec.rank))
        m0 = _threshold_at(thresholds, base)
        free = [j for j in range(spec.rank) if j not in pinned]
        if not free:
            emit(pinned, max(lo, m0))
            return
        if m0 <= lo:
            emit(pinned, lo)
            return
        for size in range(len(free) + 1):
            for axes in combinations(free, size):
                if not axes:
                    rec(dict(pinned), m0)
                    continue
                for values in product(range(lo, m0), repeat=len(axes)):
                    child = dict(pinned)
                    child.update(zip(axes, values))
                    rec(child, m0)

    rec({}, M)
    return tuple(out)


# ---------------------------------------------------------------------------
# Rational evaluation of local zeta factors


@dataclass(frozen=True)
class RationalFunctionPoint:
    """Exact evaluation point for products of local zeta factors.

    ``q`` is the residue cardinality; each coordinate carries a rational
    value tagged either as the value of ``q**(-s)`` (which must be
    positive) or of ``s`` itself.

    >>> pt = RationalFunctionPoint.at(3, plain={"s": 2})
    >>> pt.q_pow(AffineForm.from_dict(("s",), {"s": 1}))
    Fraction(1, 9)
    """

    q: Fraction
    coords: tuple[tuple[str, Fraction, str], ...]

    def __post_init__(self) -> None:
        if self.q <= 1:
            raise ValueError("q must exceed 1")
        seen = set()
        for name, value, mode in self.coords:
            if name in seen:
                raise ValueError("coordinate %r repeated" % name)
            seen.add(name)
            if mode not in (MODE_Q_POWER, MODE_PLAIN):
                raise ValueError("unknown coordinate mode %r" % mode)
            if mode == MODE_Q_POWER and value <= 0:
                raise ValueError("q-power values must be positive")

    @classmethod
    def at(cls, q, q_powers: Mapping = (), plain: Mapping = ()) -> RationalFunctionPoint:
        coords = [(name, frac(value), MODE_Q_POWER)
                  for name, value in dict(q_powers).items()]
        coords += [(name, frac(value), MODE_PLAIN)
                   for name, value in dict(plain).items()]
        coords.sort()
        return cls(frac(q), tuple(coords))

    def table(self) -> dict[str, tuple[Fraction, str]]:
        return {name: (value, mode) for name, value, mode in self.coords}

    def value(self, name: str) -> Fraction:
        try:
            return self.table()[name][0]
        except KeyError:
            raise ValueError("no value for coordinate %r" % name)

    def q_pow(self, form: AffineForm) -> Fraction:
        """Exact value of ``q**(-form)`` at the point.

        Coefficients of q-power coordinates become integer powers of
        the stored values; plain coordinates and the constant term
        accumulate into one integer exponent of q.
        """
        table = self.table()
        out = Fraction(1)
        exponent = form.constant
        for name, c in zip(form.names, form.coeffs):
            if c == 0:
                continue
            if name not in table:
                raise ValueError("no value for coordinate %r" % name)
            value, mode = table[name]
            if mode == MODE_PLAIN:
                exponent += c * value
            else:
                if c.denominator != 1:
                    raise ValueError("fractional power of a q-power coordinate")
                out *= value ** int(c)
        if exponent.denominator != 1:
            raise ValueError("q exponent %s is not an integer" % exponent)
        return out * self.q ** (-int(exponent))

    def to_json(self) -> dict:
        return {
            "q": str(self.q),
            "coords": [
                {"name": name, "value": str(value), "mode": mode}
                for name, value, mode in self.coords
            ],
        }


def zeta_q(arg: AffineForm) -> FormalMero:
    """The local zeta factor of the argument as a one-atom function.

    >>> F = zeta_q(AffineForm.from_dict(("s",), {"s": 1}))
    >>> len(F.atoms), F.atoms[0].exponent
    (1, 1)
    """
    return FormalMero.build(arg.names, 1, [local_zeta(arg.names, arg)])


def zeta_q_value(point: RationalFunctionPoint, arg: AffineForm) -> Fraction:
    """Exact value (1 - q**(-arg))**(-1) at the point.

    >>> pt = RationalFunctionPoint.at(2, plain={"s": 1})
    >>> zeta_q_value(pt, AffineForm.from_dict(("s",), {"s": 1}))
    Fraction(2, 1)
    """
    w = point.q_pow(arg)
    if w == 1:
        raise ValueError("pole of the local zeta factor hit")
    return 1 / (1 - w)


def evaluate_local(point: RationalFunctionPoint, F: FormalMero) -> Fraction:
    """Exact value of a pure product of local zeta atoms."""
    total = F.prefactor
    for atom in F.atoms:
        if atom.kind != KIND_LOCAL:
            raise ValueError("only local zeta atoms evaluate exactly")
        total *= zeta_q_value(point, atom.argument) ** atom.exponent
    return total


# ---------------------------------------------------------------------------
# The GL(1) x GL(2) unramified identity suite

_TAIL_LIMIT = Fraction(1, 10 ** 12)


def _geometric_tail_terms(N: int, t: Fraction) -> Fraction:
    """Exact value of sum_{k > N} (k + 1) t^k for 0 < t < 1."""
    return t ** (N + 1) * (Fraction(N + 2) / (1 - t) + t / (1 - t) ** 2)


def _truncation_order(r: Fraction) -> int:
    """Smallest doubling step whose geometric tail bound is below the
    reporting limit, for a contracting ratio r < 1."""
    N = 1
    while _geometric_tail_terms(N, r) >= _TAIL_LIMIT:
        N += max(1, N // 2)
        if N > 1 << 20:
            raise ValueError("truncation order ran away; ratio too close to 1")
    return N


def _point_values(point: RationalFunctionPoint, names: Sequence[str]) -> list[Fraction]:
    table = point.table()
    out = []
    for name in names:
        if name not in table:
            raise ValueError("point must carry a %r coordinate" % name)
        value, mode = table[name]
        if mode != MODE_Q_POWER:
            raise ValueError("coordinate %r must be a q-power value" % name)
        out.append(value)
    return out


@dataclass(frozen=True)
class Gl1Gl2IdentityReport:
    """Exact values from the three unramified identity checks."""

    q: Fraction
    x: Fraction
    y: Fraction
    u: Fraction
    n_terms: int
    partial: Fraction
    tail: Fraction
    closed: Fraction
    lhs: Fraction
    rhs: Fraction
    cleared_numerator: Fraction
    tail_bounded: Optional[bool]

    def to_json(self) -> dict:
        return {
            "q": str(self.q),
            "x": str(self.x),
            "y": str(self.y),
            "u": str(self.u),
            "n_terms": self.n_terms,
            "partial": str(self.partial),
            "tail": str(self.tail),
            "closed": str(self.closed),
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "cleared_numerator": str(self.cleared_numerator),
            "tail_bounded": self.tail_bounded,
        }


def unramified_gl1gl2_identity(point: RationalFunctionPoint) -> Gl1Gl2IdentityReport:
    """Run the three exact checks of the rank-one unramified expansion.

    The point carries q-power coordinates x, y, u.  The checks are the
    truncated series against its closed form through the exact tail,
    the two-term partial-fraction identity between zeta factors, and
    the vanishing of the cleared numerator of that identity.  Any
    failure raises AssertionError; the coefficients h_k of the series
    are the two-parameter complete homogeneous sums.

    >>> pt = RationalFunctionPoint.at(
    ...     2, q_powers={"x": Fraction(1, 3), "y": Fraction(1, 5), "u": Fraction(1, 7)})
    >>> unramified_gl1gl2_identity(pt).rhs
    Fraction(147, 136)
    """
    x, y, u = _point_values(point, ("x", "y", "u"))
    if x == y:
        raise ValueError("degenerate point (equal parameters)")
    if u * x == 1 or u * y == 1:
        raise ValueError("pole of the closed form hit")

    r = max(u * x, u * y)
    tail_bounded: Optional[bool] = None
    N = _truncation_order(r) if r < 1 else 24

    partial = Fraction(0)
    for k in range(N + 1):
        h_k = (x ** (k + 1) - y ** (k + 1)) / (x - y)
        partial += u ** k * h_k
    tail = (u ** (N + 1)
            * (x ** (N + 2) / (1 - u * x) - y ** (N + 2) / (1 - u * y))
            / (x - y))
    closed = 1 / ((1 - u * x) * (1 - u * y))
    if partial + tail != closed:
        raise AssertionError("series identity failed")
    if r < 1:
        tail_bounded = abs(tail) < _TAIL_LIMIT
        if not tail_bounded:
            raise AssertionError("geometric tail bound failed")

    names = ("u", "x", "y")

    def form(terms: Mapping[str, int]) -> AffineForm:
        return AffineForm.from_dict(names, terms)

    lhs = (zeta_q_value(point, form({"y": 1, "x": -1}))
           * zeta_q_value(point, form({"u": 1, "x": 1}))
           + zeta_q_value(point, form({"x": 1, "y": -1}))
           * zeta_q_value(point, form({"u": 1, "y": 1})))
    rhs = (zeta_q_value(point, form({"u": 1, "x": 1}))
           * zeta_q_value(point, form({"u": 1, "y": 1})))
    if lhs != rhs:
        raise AssertionError("partial-fraction identity failed")

    cleared = x * (1 - u * y) - y * (1 - u * x) - (x - y)
    if cleared != 0:
        raise AssertionError("cleared numerator is nonzero")

    return Gl1Gl2IdentityReport(
        q=point.q, x=x, y=y, u=u, n_terms=N + 1, partial=partial, tail=tail,
        closed=closed, lhs=lhs, rhs=rhs, cleared_numerator=cleared,
        tail_bounded=tail_bounded,
    )


@dataclass(frozen=True)
class EqualParameterReport:
    """Exact values of the equal-parameter continuation of the series."""

    q: Fraction
    x: Fraction
    u: Fraction
    n_terms: int
    partial: Fraction
    tail: Fraction
    closed: Fraction

    def to_json(self) -> dict:
        return {
            "q": str(self.q),
            "x": str(self.x),
            "u": str(self.u),
            "n_terms": self.n_terms,
            "partial": str(self.partial),
            "tail": str(self.tail),
            "closed": str(self.closed),
        }


def gl1gl2_equal_parameter_limit(point: RationalFunctionPoint) -> EqualParameterReport:
    """Continuation of the series identity onto the equal-parameter line.

    The coefficients degenerate to h_k = (k + 1) x^k and the closed form
    to the squared zeta value; the summed and closed expressions are
    compared exactly.  A ``y`` coordinate, if present, must equal ``x``.
    """
    x, u = _point_values(point, ("x", "u"))
    table = point.table()
    if "y" in table and table["y"][0] != x:
        raise ValueError("equal-parameter continuation needs y = x")
    t = u * x
    if t == 1:
        raise ValueError("pole of the closed form hit")
    N = _truncation_order(t) if t < 1 else 24
    partial = sum((Fraction(k + 1) * t ** k for k in range(N + 1)), Fraction(0))
    formula = (1 - Fraction(N + 2) * t ** (N + 1)
               + Fraction(N + 1) * t ** (N + 2)) / (1 - t) ** 2
    if partial != formula:
        raise AssertionError("partial-sum formula failed")
    tail = (Fraction(N + 2) * t ** (N + 1)
            - Fraction(N + 1) * t ** (N + 2)) / (1 - t) ** 2
    closed = 1 / (1 - t) ** 2
    if partial + tail != closed:
        raise AssertionError("equal-parameter series identity failed")
    return EqualParameterReport(q=point.q, x=x, u=u, n_terms=N + 1,
                                partial=partial, tail=tail, closed=closed)


# ---------------------------------------------------------------------------
# Support analysis of the local unfolding


def _lift(form: AffineForm, names: tuple[str, ...]) -> AffineForm:
    terms = {nm: c for nm, c in zip(form.names, form.coeffs) if c != 0}
    return AffineForm.from_dict(names, terms, form.constant)


def _effective_id(reg: AtomRegistry, slot: PairSlot) -> str:
    if slot.dualized and reg.has_dual(slot.atom.id):
        return reg.dual_atom(slot.atom.id).id
    return slot.atom.id


def _chi_terms(reg: AtomRegistry, id_: str) -> dict[str, int]:
    """Twist symbol of an atom: zero for self-dual atoms, one shared
    signed coordinate per dual pair, a free coordinate otherwise."""
    if reg.has_dual(id_):
        dual = reg.dual_atom(id_).id
        if dual == id_:
            return {}
        rep = min(id_, dual)
        return {"chi_" + rep: 1 if id_ == rep else -1}
    return {"chi_" + id_: 1}


def _interval_blocks(sizes: Sequence[int]) -> BlockParabolic:
    blocks = []
    start = 0
    for s in sizes:
        blocks.append(tuple(range(start, start + s)))
        start += s
    return BlockParabolic(start, tuple(blocks))


@dataclass(frozen=True)
class _SupportContext:
    """Once-per-pair data shared by every (Q, w) support query."""

    pair: InducingPair
    names: tuple[str, ...]
    slots: tuple[tuple[PairSlot, ...], tuple[PairSlot, ...]]
    p_pi: tuple[BlockParabolic, BlockParabolic]
    mu: tuple[tuple[AffineForm, ...], tuple[AffineForm, ...]]
    denominator: FormalMero
    sf: SingularForms
    forms: tuple[AffineForm, ...]
    rwd: ResidueWeylData


def _support_context(reg: AtomRegistry, pair: InducingPair) -> _SupportContext:
    if pair.scope != SCOPE_LOCAL:
        raise ValueError("support analysis needs local-scope atoms")
    rwd = residue_weyl_data(pair)
    lay = pair_layout(pair)
    slots = (lay.slots_n, lay.slots_n1)
    chi_names = sorted({
        name
        for side in slots
        for slot in side
        for name in _chi_terms(reg, _effective_id(reg, slot))
    })
    names = lay.names + tuple(chi_names)
    mu = tuple(
        tuple(
            _lift(slot.form, names)
            + AffineForm.from_dict(names, _chi_terms(reg, _effective_id(reg, slot)))
            for slot in side
        )
        for side in slots
    )
    den = FormalMero.one(names)
    for a in lay.slots_n:
        for b in lay.slots_n1:
            arg = _lift(a.form + b.form, names).shift(Fraction(1, 2))
            ids = (_effective_id(reg, a), _effective_id(reg, b))
            den = den * supercuspidal_L_local(reg, ids, arg).inverted()
    sf = singular_forms(pair)
    forms = tuple(_lift(f, names) for f in sf.forms())
    return _SupportContext(pair, names, slots, rwd.p_pi, mu, den, sf, forms, rwd)


def _gl_slot_map(Q: RSParabolic) -> tuple[int, ...]:
    """Slot index of every GL(n) position."""
    out = [0] * Q.n
    for i, block in enumerate(Q.gl_parts.intervals()):
        slot = i if Q.type_tag == 1 or i < Q.corner0 else i + 1
        for p in block:
            out[p] = slot
    return tuple(out)


def _np1_slot_map(Q: RSParabolic) -> tuple[int, ...]:
    """Slot index of every GL(n+1) position."""
    return tuple(Q.blocks_np1.block_index(p) for p in range(Q.n + 1))


def _zeta_arguments(ctx: _SupportContext, Q: RSParabolic,
                    w: tuple[Perm, Perm]) -> list[AffineForm]:
    """Coweight pairings of the moved slot coordinates plus the
    half-sum offset, one argument per free axis of Q."""
    zq = ZSpace(Q)
    slot_of = (_gl_slot_map(Q), _np1_slot_map(Q))
    args = []
    for a in range(zq.dim):
        cw = zq.coweights[a]
        total = AffineForm.constant_form(ctx.names, zq.pair(zq.rho_bar, cw))
        for side in (0, 1):
            wi = inverse(w[side])
            for p, slot in enumerate(slot_of[side]):
                if cw[slot] == 0:
                    continue
                mu = ctx.mu[side][ctx.p_pi[side].block_index(wi[p])]
                total = total + mu if cw[slot] > 0 else total - mu
        args.append(total)
    return args


def _f_q(ctx: _SupportContext, Q: RSParabolic, w: tuple[Perm, Perm]) -> FormalMero:
    atoms = [local_zeta(ctx.names, arg) for arg in _zeta_arguments(ctx, Q, w)]
    return FormalMero.build(ctx.names, 1, atoms) * ctx.denominator


def support_ratio(reg: AtomRegistry, pair: InducingPair, Q: RSParabolic,
                  w: tuple[Perm, Perm]) -> FormalMero:
    """The unrestricted ratio of slot zeta factors over cross-side
    local L-factors at (Q, w), on the twist-extended coordinates.

    >>> from .lfactors import standard_registry
    >>> reg = standard_registry()
    >>> pair = InducingPair((), (SpehDatum(reg.atom("triv"), 2),))
    >>> F = support_ratio(reg, pair, from_pair((1, 1), 2), ((0,), (1, 0)))
    >>> len(F.atoms), F.atoms[0].exponent
    (1, -1)
    """
    ctx = _support_context(reg, pair)
    _require_admissible(ctx, Q, w)
    return _f_q(ctx, Q, w)


def _is_perm(w: Perm, m: int) -> bool:
    return len(w) == m and sorted(w) == list(range(m))


def _maps_blocks_whole(w: Perm, blocks: Sequence[Sequence[int]],
                       target: BlockParabolic) -> bool:
    return all(
        len({target.block_index(w[p]) for p in blk}) == 1 for blk in blocks
    )


def _side_targets(Q: RSParabolic) -> tuple[BlockParabolic, BlockParabolic]:
    return (BlockParabolic.from_composition(Q.gl_parts), Q.blocks_np1)


def _admissible(ctx_p_pi, targets, w: tuple[Perm, Perm]) -> bool:
    for side in (0, 1):
        P = ctx_p_pi[side]
        if not _is_perm(w[side], P.ambient):
            return False
        if not is_double_coset_rep(w[side], P, targets[side]):
            return False
        if not _maps_blocks_whole(w[side], P.blocks, targets[side]):
            return False
    return True


def _require_admissible(ctx: _SupportContext, Q: RSParabolic,
                        w: tuple[Perm, Perm]) -> None:
    if Q.n != ctx.pair.n:
        raise ValueError("parabolic is for the wrong group")
    if not _admissible(ctx.p_pi, _side_targets(Q), w):
        raise ValueError("w is not an admissible minimal representative")


def support_domain(pair: InducingPair, Q: RSParabolic) -> list[tuple[Perm, Perm]]:
    """Admissible Weyl pairs at Q: minimal double-coset representatives
    for the refined slot blocks that keep every slot block whole.

    >>> from .lfactors import standard_registry
    >>> reg = standard_registry()
    >>> pair = InducingPair((), (SpehDatum(reg.atom("triv"), 2),))
    >>> [len(support_domain(pair, Q)) for Q in enumerate_rs(1)]
    [1, 2, 2]
    """
    if Q.n != pair.n:
        raise ValueError("parabolic is for the wrong group")
    lay = pair_layout(pair)
    p_pi = (
        _interval_blocks([s.atom.rank for s in lay.slots_n]),
        _interval_blocks([s.atom.rank for s in lay.slots_n1]),
    )
    targets = _side_targets(Q)
    sides = []
    for side in (0, 1):
        P = p_pi[side]
        sides.append([
            w for w in permutations(range(P.ambient))
            if is_double_coset_rep(w, P, targets[side])
            and _maps_blocks_whole(w, P.blocks, targets[side])
        ])
    return [(wn, wn1) for wn in sides[0] for wn1 in sides[1]]


def corner_moves(data: ResidueWeylData) -> dict[str, tuple[Perm, Perm]]:
    """The two corner-move Weyl pairs, one per residue schedule.

    Both conjugate the refined slot parabolic onto its reordered image
    inside the residual parabolic; they differ by which side carries
    the corner crossing.
    """
    return {
        ORDER_SMALL: (compose(data.w2[0], data.w_star[0]), data.w2[1]),
        ORDER_BIG: (data.w1[0], compose(data.w1[1], data.w_star[1])),
    }


def _window_blocks(blocks: BlockParabolic, start: int) -> tuple[tuple[int, ...], ...]:
    out = []
    for blk in blocks.blocks:
        inside = [p for p in blk if p >= start]
        if not inside:
            continue
        if len(inside) != len(blk):
            raise ValueError("a block straddles the corner window")
        out.append(tuple(p - start for p in inside))
    return tuple(out)


def _extend(u: Perm, start: int) -> Perm:
    return tuple(range(start)) + tuple(start + i for i in u)


def residual_weyl_set(pair: InducingPair, Q: RSParabolic, order: str,
                      data: Optional[ResidueWeylData] = None) -> list[tuple[Perm, Perm]]:
    """Predicted surviving Weyl pairs at Q for the given schedule.

    Empty unless Q sits inside the residual parabolic; otherwise every
    admissible corner-window representative, extended by the identity
    and composed with the schedule's corner move.

    >>> from .lfactors import standard_registry
    >>> reg = standard_registry()
    >>> pair = InducingPair((), (SpehDatum(reg.atom("triv"), 2),))
    >>> residual_weyl_set(pair, from_pair((1, 1), 2), "n+1")
    [((0,), (1, 0))]
    """
    if order not in ORDERS:
        raise ValueError("order must be one of %r" % (ORDERS,))
    if data is None:
        data = residue_weyl_data(pair)
    if Q.n != pair.n:
        raise ValueError("parabolic is for the wrong group")
    if not is_subparabolic(Q, data.p_res):
        return []
    n, k = pair.n, pair.k
    start = n - k
    move = corner_moves(data)[order]
    targets = _side_targets(Q)
    sides = []
    for side, width in ((0, k), (1, k + 1)):
        src = BlockParabolic(width, _window_blocks(data.q_pi[side], start))
        tgt = BlockParabolic(width, _window_blocks(targets[side], start))
        sides.append([
            u for u in permutations(range(width))
            if is_double_coset_rep(u, src, tgt)
            and _maps_blocks_whole(u, src.blocks, tgt)
        ])
    out = []
    for un, un1 in product(*sides):
        out.append((
            compose(_extend(un, start), move[0]),
            compose(_extend(un1, start), move[1]),
        ))
    return out


def _restrict_once(F: FormalMero, form: AffineForm) -> tuple[int, Optional[FormalMero]]:
    """One restriction step: the net pole order along the cut and the
    restricted function, or None when the function vanishes there.

    A positive net order means a pole survives the balancing zero of
    the denominator, which no coherent registry produces; it is an
    error rather than a verdict.
    """
    reduced = F.space.reduce(form)
    if reduced.is_constant():
        raise ValueError("cut form is constant on the current space")
    cut = F.space.with_forms([form])
    polar: list[FactorAtom] = []
    rest: list[FactorAtom] = []
    for atom in F.atoms:
        if atom.kind != KIND_LOCAL:
            raise ValueError("restriction handles local zeta atoms only")
        (polar if cut.reduce(atom.argument).is_zero() else rest).append(atom)
    net = sum(a.exponent for a in polar)
    if net > 0:
        raise ValueError("unbalanced pole of order %d along the cut" % net)
    if net < 0:
        return net, None
    prefactor = F.prefactor
    for atom in polar:
        ratio = _ratio(F.space.reduce(atom.argument), reduced)
        prefactor *= ratio ** (-atom.exponent)
    return 0, FormalMero.build(F.names, prefactor, rest, cut)


def _ratio(f: AffineForm, g: AffineForm) -> Fraction:
    """The scalar c with f = c * g, for proportional nonzero forms."""
    entries = list(zip(f.coeffs + (f.constant,), g.coeffs + (g.constant,)))
    c = next((fv / gv for fv, gv in entries if gv != 0), None)
    if c is None:
        raise ValueError("zero reference form")
    if any(fv != c * gv for fv, gv in entries):
        raise ValueError("forms are not proportional")
    return c


def _schedule_forms(ctx: _SupportContext, order: str) -> tuple[list[AffineForm], list[AffineForm]]:
    schedule = (first_order_schedule(ctx.pair) if order == ORDER_BIG
                else second_order_schedule(ctx.pair))
    plus = [ctx.forms[i] for i in schedule[:ctx.sf.count]]
    minus = [ctx.forms[i] for i in schedule[ctx.sf.count:]]
    return plus, minus


@dataclass(frozen=True)
class SupportReport:
    """Verdict of one restriction run against its prediction."""

    order: str
    parabolic: RSParabolic
    w: tuple[Perm, Perm]
    verdict: str
    predicted: str
    matches: bool
    step_orders: tuple[int, ...]
    center_regular: Optional[bool]
    center_vanishes: Optional[bool]
    restricted: FormalMero

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "parabolic": self.parabolic.to_json(),
            "w": [[i + 1 for i in side] for side in self.w],
            "verdict": self.verdict,
            "predicted": self.predicted,
            "matches": self.matches,
            "step_orders": list(self.step_orders),
            "center_regular": self.center_regular,
            "center_vanishes": self.center_vanishes,
            "restricted": self.restricted.to_json(),
        }


def _f_q_support(ctx: _SupportContext, Q: RSParabolic, w: tuple[Perm, Perm],
                 order: str) -> SupportReport:
    _require_admissible(ctx, Q, w)
    plus, minus = _schedule_forms(ctx, order)
    cur = _f_q(ctx, Q, w)
    steps: list[int] = []
    verdict = VERDICT_SURVIVES
    for form in plus:
        net, nxt = _restrict_once(cur, form)
        steps.append(net)
        if nxt is None:
            verdict = VERDICT_VANISHES
            cur = FormalMero.zero(ctx.names, cur.space.with_forms([form]))
            break
        cur = nxt
    predicted = (VERDICT_SURVIVES
                 if w in residual_weyl_set(ctx.pair, Q, order, data=ctx.rwd)
                 else VERDICT_VANISHES)
    center_regular: Optional[bool] = None
    center_vanishes: Optional[bool] = None
    if verdict == VERDICT_SURVIVES:
        center = cur.space.with_forms(minus)
        at_center = [a for a in cur.atoms if center.reduce(a.argument).is_zero()]
        center_regular = all(a.exponent < 0 for a in at_center)
        center_vanishes = any(a.exponent < 0 for a in at_center)
    return SupportReport(
        order=order, parabolic=Q, w=w, verdict=verdict, predicted=predicted,
        matches=verdict == predicted, step_orders=tuple(steps),
        center_regular=center_regular, center_vanishes=center_vanishes,
        restricted=cur,
    )


def f_q_support(reg: AtomRegistry, pair: InducingPair, Q: RSParabolic,
                w: tuple[Perm, Perm], order: str) -> SupportReport:
    """Restrict the support ratio at (Q, w) along the schedule's plus
    forms and compare the verdict with the predicted criterion.

    The report carries the per-step net pole orders, the restricted
    function (zero when the verdict is a vanish), and for survivors
    whether any remaining factor poles or vanishes on the center cut.

    >>> from .lfactors import standard_registry
    >>> reg = standard_registry()
    >>> pair = InducingPair((), (SpehDatum(reg.atom("triv"), 2),))
    >>> rep = f_q_support(reg, pair, from_pair((1, 1), 2), ((0,), (1, 0)), "n+1")
    >>> rep.verdict, rep.predicted, rep.step_orders
    ('survives', 'survives', (0,))
    """
    if order not in ORDERS:
        raise ValueError("order must be one of %r" % (ORDERS,))
    return _f_q_support(_support_context(reg, pair), Q, w, order)


def support_census(reg: AtomRegistry, pair: InducingPair,
                   order: str) -> list[SupportReport]:
    """Reports for every matched parabolic and admissible Weyl pair."""
    if order not in ORDERS:
        raise ValueError("order must be one of %r" % (ORDERS,))
    ctx = _support_context(reg, pair)
    out = []
    for Q in enumerate_rs(pair.n):
        for w in support_domain(pair, Q):
            out.append(_f_q_support(ctx, Q, w, order))
    return out


# ---------------------------------------------------------------------------
# Factorization witness


def _perm_label(w: tuple[Perm, Perm]) -> str:
    return "|".join(
        ",".join(str(i + 1) for i in side) if side else "-" for side in w
    )


def _parabolic_key(Q: RSParabolic) -> tuple:
    return (tuple(Q.parts.parts), Q.corner, Q.w_std)


@dataclass(frozen=True)
class WitnessTerm:
    """One surviving term of the unfolding, as an operator word.

    The word lists the applied-first operator on the left: the corner
    move, the relative corner-window move, then the restricted ratio,
    the coefficient factor and the opaque Whittaker value.
    """

    order: str
    parabolic: RSParabolic
    w: tuple[Perm, Perm]
    relative: tuple[Perm, Perm]
    word: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "parabolic": self.parabolic.to_json(),
            "w": [[i + 1 for i in side] for side in self.w],
            "relative": [[i + 1 for i in side] for side in self.relative],
            "word": list(self.word),
        }


@dataclass(frozen=True)
class WitnessReport:
    """Surviving unfolding terms of both schedules.

    ``cross_order_match`` records that the two schedules survive on the
    same set of (parabolic, relative move) keys, so the corner move is
    the only part of the Weyl data the schedule chooses.
    """

    terms: tuple[WitnessTerm, ...]
    cross_order_match: bool

    def to_json(self) -> dict:
        return {
            "terms": [t.to_json() for t in self.terms],
            "cross_order_match": self.cross_order_match,
        }


def local_factorization_witness(reg: AtomRegistry, pair: InducingPair) -> WitnessReport:
    """Assemble the surviving unfolding terms for both schedules and
    check each term's word leads with the schedule's corner move.

    A surviving term whose Weyl pair does not factor through the corner
    move raises, since it would break the claimed factorization.

    >>> from .lfactors import standard_registry
    >>> reg = standard_registry()
    >>> pair = InducingPair((), (SpehDatum(reg.atom("triv"), 2),))
    >>> report = local_factorization_witness(reg, pair)
    >>> len(report.terms), report.cross_order_match
    (2, True)
    """
    if pair.n > 2:
        raise ValueError("witness runs at desk scale (n <= 2)")
    ctx = _support_context(reg, pair)
    moves = corner_moves(ctx.rwd)
    start = pair.n - pair.k
    terms: list[WitnessTerm] = []
    keys: dict[str, set] = {order: set() for order in ORDERS}
    for order in ORDERS:
        move = moves[order]
        inv = (inverse(move[0]), inverse(move[1]))
        for Q in enumerate_rs(pair.n):
            for w in support_domain(pair, Q):
                rep = _f_q_support(ctx, Q, w, order)
                if rep.verdict != VERDICT_SURVIVES:
                    continue
                rel = (compose(w[0], inv[0]), compose(w[1], inv[1]))
                if any(rel[side][i] != i for side in (0, 1)
                       for i in range(start)):
                    raise ValueError("a surviving term lacks the corner-move prefix")
                word = (
                    "N[%s]" % _perm_label(move),
                    "window[%s]" % _perm_label(rel),
                    "Rest[%s;%s]" % (",".join(map(str, Q.parts.parts)), Q.corner),
                    "G[%s]" % _perm_label(w),
                    "whittaker",
                )
                terms.append(WitnessTerm(order, Q, w, rel, word))
                keys[order].add((_parabolic_key(Q), rel))
    return WitnessReport(
        terms=tuple(terms),
        cross_order_match=keys[ORDER_SMALL] == keys[ORDER_BIG],
    )
