"""Block-parabolic and Weyl double-coset combinatorics for GL_m.

Permutations are image tuples on ``range(m)``: ``w[i]`` is the image of
``i``.  Composition is ``(u * v)(i) = u(v(i))``.  All indices in this
module are 0-based; the CLI layer converts to 1-based on the wire.

A parabolic subgroup is encoded by its ordered block partition.  The
root space ``(i, j)``, ``i != j``, belongs to the parabolic iff the
block of ``i`` comes no later than the block of ``j``.  Standard
parabolics are those whose blocks are consecutive intervals in order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Iterator, Sequence

Perm = tuple[int, ...]


def identity_perm(m: int) -> Perm:
    """Identity permutation on ``range(m)``.

    >>> identity_perm(3)
    (0, 1, 2)
    """
    return tuple(range(m))


def compose(u: Perm, v: Perm) -> Perm:
    """Composite ``u * v`` acting as ``i -> u[v[i]]``.

    >>> compose((1, 2, 0), (0, 2, 1))
    (1, 0, 2)
    """
    if len(u) != len(v):
        raise ValueError("degree mismatch: %d vs %d" % (len(u), len(v)))
    return tuple(u[v[i]] for i in range(len(v)))


def inverse(w: Perm) -> Perm:
    """Inverse permutation.

    >>> inverse((2, 0, 1))
    (1, 2, 0)
    """
    inv = [0] * len(w)
    for i, j in enumerate(w):
        inv[j] = i
    return tuple(inv)


def inversions(w: Perm) -> int:
    """Coxeter length, the number of inverted pairs.

    >>> inversions((2, 1, 0))
    3
    """
    return sum(
        1 for i in range(len(w)) for j in range(i + 1, len(w)) if w[i] > w[j]
    )


def longest_element(m: int) -> Perm:
    """Order-reversing permutation, the longest element of S_m.

    >>> longest_element(4)
    (3, 2, 1, 0)
    """
    return tuple(range(m - 1, -1, -1))


@dataclass(frozen=True)
class Composition:
    """Ordered tuple of positive integers with ambient their sum.

    >>> Composition((2, 1)).ambient
    3
    >>> Composition((2, 1)).intervals()
    ((0, 1), (2,))
    """

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.parts or any(p < 1 for p in self.parts):
            raise ValueError("parts must be positive integers: %r" % (self.parts,))

    @property
    def ambient(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def starts(self) -> tuple[int, ...]:
        out = []
        acc = 0
        for p in self.parts:
            out.append(acc)
            acc += p
        return tuple(out)

    def intervals(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(range(s, s + p)) for s, p in zip(self.starts(), self.parts)
        )

    def block_of(self, i: int) -> int:
        """Index of the part containing ambient position ``i``.

        >>> Composition((2, 3)).block_of(4)
        1
        """
        acc = 0
        for k, p in enumerate(self.parts):
            acc += p
            if i < acc:
                return k
        raise ValueError("position %d outside ambient %d" % (i, self.ambient))

    def refines(self, other: Composition) -> bool:
        """True when ``other`` is obtained by merging consecutive parts.

        >>> Composition((1, 1, 2)).refines(Composition((2, 2)))
        True
        >>> Composition((2, 2)).refines(Composition((1, 3)))
        False
        """
        if self.ambient != other.ambient:
            return False
        cuts = set(self.starts())
        return all(s in cuts for s in other.starts())


@dataclass(frozen=True)
class BlockParabolic:
    """Parabolic of GL_m given by an ordered partition of ``range(m)``.

    Blocks are stored as sorted tuples; their list order is the block
    order.  The subgroup is recovered through :meth:`contains_root`.

    >>> B = BlockParabolic.from_composition(Composition((1, 2)))
    >>> B.blocks
    ((0,), (1, 2))
    >>> B.contains_root(0, 2), B.contains_root(2, 0)
    (True, False)
    """

    ambient: int
    blocks: tuple[tuple[int, ...], ...]
    _index: dict[int, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        seen: dict[int, int] = {}
        for k, blk in enumerate(self.blocks):
            if not blk or tuple(sorted(blk)) != blk:
                raise ValueError("blocks must be nonempty sorted tuples")
            for i in blk:
                if i in seen:
                    raise ValueError("index %d repeated across blocks" % i)
                seen[i] = k
        if sorted(seen) != list(range(self.ambient)):
            raise ValueError("blocks must partition range(%d)" % self.ambient)
        object.__setattr__(self, "_index", seen)

    @classmethod
    def from_composition(cls, comp: Composition) -> BlockParabolic:
        return cls(comp.ambient, comp.intervals())

    @classmethod
    def full(cls, m: int) -> BlockParabolic:
        return cls(m, (tuple(range(m)),))

    @classmethod
    def borel(cls, m: int) -> BlockParabolic:
        return cls(m, tuple((i,) for i in range(m)))

    def block_index(self, i: int) -> int:
        return self._index[i]

    def contains_root(self, i: int, j: int) -> bool:
        """Whether the root space at position ``(i, j)`` lies in the group."""
        if i == j:
            raise ValueError("root spaces are off-diagonal")
        return self._index[i] <= self._index[j]

    def root_set(self) -> frozenset[tuple[int, int]]:
        m = self.ambient
        return frozenset(
            (i, j)
            for i in range(m)
            for j in range(m)
            if i != j and self._index[i] <= self._index[j]
        )

    def is_standard(self) -> bool:
        stop = 0
        for blk in self.blocks:
            if blk != tuple(range(stop, stop + len(blk))):
                return False
            stop += len(blk)
        return True

    def composition(self) -> Composition:
        """Block sizes in block order (the defining tuple when standard)."""
        return Composition(tuple(len(b) for b in self.blocks))

    def contains(self, other: BlockParabolic) -> bool:
        """Containment ``other <= self`` of the parabolic subgroups."""
        if self.ambient != other.ambient:
            raise ValueError("ambient mismatch")
        return other.root_set() <= self.root_set()

    def levi_partition(self) -> frozenset[tuple[int, ...]]:
        """Blocks as an unordered partition (the Levi subgroup data)."""
        return frozenset(self.blocks)


def conjugate(w: Perm, P: BlockParabolic) -> BlockParabolic:
    """Image parabolic ``w.P`` with blocks ``w(B)`` in the order of ``P``.

    >>> P = BlockParabolic.from_composition(Composition((1, 2)))
    >>> conjugate((2, 0, 1), P).blocks
    ((2,), (0, 1))
    """
    if len(w) != P.ambient:
        raise ValueError("degree %d does not match ambient %d" % (len(w), P.ambient))
    return BlockParabolic(
        P.ambient, tuple(tuple(sorted(w[i] for i in blk)) for blk in P.blocks)
    )


def is_double_coset_rep(w: Perm, P: BlockParabolic, Q: BlockParabolic) -> bool:
    """Minimality test: ``w`` increasing on P-blocks, inverse on Q-blocks."""
    wi = inverse(w)
    return all(
        all(w[b[k]] < w[b[k + 1]] for k in range(len(b) - 1)) for b in P.blocks
    ) and all(
        all(wi[b[k]] < wi[b[k + 1]] for k in range(len(b) - 1)) for b in Q.blocks
    )


def _margin_tables(rows: Sequence[int], cols: Sequence[int]) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All nonnegative integer matrices with the given margins."""
    if not rows:
        if all(c == 0 for c in cols):
            yield ()
        return
    r0, rest = rows[0], rows[1:]

    def fill(j: int, remaining: int, row: list[int]) -> Iterator[tuple[int, ...]]:
        if j == len(cols):
            if remaining == 0:
                yield tuple(row)
            return
        hi = min(remaining, cols[j])
        for v in range(hi + 1):
            row.append(v)
            yield from fill(j + 1, remaining - v, row)
            row.pop()

    for first in fill(0, r0, []):
        reduced = [c - v for c, v in zip(cols, first)]
        for tail in _margin_tables(rest, reduced):
            yield (first,) + tail


def _rep_from_table(
    P: BlockParabolic, Q: BlockParabolic, table: Sequence[Sequence[int]]
) -> Perm:
    """The unique minimal representative with block-intersection counts ``table``."""
    offsets = [0] * len(Q.blocks)
    img = [0] * P.ambient
    for a, blk in enumerate(P.blocks):
        pos = 0
        for b, qblk in enumerate(Q.blocks):
            k = table[a][b]
            for t in range(k):
                img[blk[pos + t]] = qblk[offsets[b] + t]
            offsets[b] += k
            pos += k
    return tuple(img)


def double_coset_reps(P: BlockParabolic, Q: BlockParabolic) -> list[Perm]:
    """Minimal representatives of the (Q, P) double cosets in S_m.

    These are the ``w`` increasing on each block of ``P`` with inverse
    increasing on each block of ``Q``, one per double coset, listed in
    lexicographic order of image tuples.

    >>> B2 = BlockParabolic.borel(2)
    >>> double_coset_reps(B2, B2)
    [(0, 1), (1, 0)]
    >>> P = BlockParabolic.from_composition(Composition((2, 1)))
    >>> Q = BlockParabolic.from_composition(Composition((1, 2)))
    >>> double_coset_reps(P, Q)
    [(0, 1, 2), (1, 2, 0)]
    """
    if P.ambient != Q.ambient:
        raise ValueError("ambient mismatch")
    if not (P.is_standard() and Q.is_standard()):
        raise ValueError("double cosets require standard parabolics")
    rows = [len(b) for b in P.blocks]
    cols = [len(b) for b in Q.blocks]
    reps = [_rep_from_table(P, Q, t) for t in _margin_tables(rows, cols)]
    reps.sort()
    return reps


def relative_parabolics(
    w: Perm, P: BlockParabolic, Q: BlockParabolic
) -> tuple[BlockParabolic, BlockParabolic]:
    """Intersection parabolics ``(P_w, Q_w)`` attached to a representative.

    ``P_w`` has blocks ``B & w^-1(B')`` ordered by (P-block, Q-block);
    ``Q_w`` has blocks ``B' & w(B)`` ordered by (Q-block, P-block).

    >>> P = BlockParabolic.from_composition(Composition((2, 1)))
    >>> Q = BlockParabolic.from_composition(Composition((1, 2)))
    >>> Pw, Qw = relative_parabolics((0, 1, 2), P, Q)
    >>> Pw.blocks
    ((0,), (1,), (2,))
    """
    if not is_double_coset_rep(w, P, Q):
        raise ValueError("w is not a minimal double coset representative")
    wi = inverse(w)
    pw = []
    for blk in P.blocks:
        for qblk in Q.blocks:
            piece = tuple(i for i in blk if w[i] in set(qblk))
            if piece:
                pw.append(piece)
    qw = []
    for qblk in Q.blocks:
        for blk in P.blocks:
            src = set(blk)
            piece = tuple(j for j in qblk if wi[j] in src)
            if piece:
                qw.append(piece)
    return (
        BlockParabolic(P.ambient, tuple(pw)),
        BlockParabolic(Q.ambient, tuple(qw)),
    )


def w_set(P: BlockParabolic, Q: BlockParabolic) -> list[Perm]:
    """Representatives ``w`` whose source intersection parabolic is all of P.

    >>> P = BlockParabolic.borel(2)
    >>> len(w_set(P, P)), len(w_set(P, BlockParabolic.full(2)))
    (2, 1)
    """
    out = []
    for w in double_coset_reps(P, Q):
        pw, _ = relative_parabolics(w, P, Q)
        if pw.blocks == P.blocks:
            out.append(w)
    return out


def decompose_coset(
    w2: Perm, P: BlockParabolic, Q: BlockParabolic, R: BlockParabolic
) -> tuple[Perm, Perm]:
    """Unique factorization ``w2 = w1 * w`` through an intermediate parabolic.

    Requires standard ``Q <= R`` and ``w2`` minimal for ``(Q, P)``.  The
    factor ``w`` is minimal for ``(R, P)`` and ``w1`` permutes within the
    R-blocks, minimal there for ``(Q, R_w)``.

    >>> P = BlockParabolic.borel(3)
    >>> Q = BlockParabolic.from_composition(Composition((1, 2)))
    >>> decompose_coset((1, 2, 0), P, Q, Q)
    ((0, 1, 2), (1, 2, 0))
    """
    if not (Q.is_standard() and R.is_standard() and R.contains(Q)):
        raise ValueError("need standard Q contained in R")
    if not is_double_coset_rep(w2, P, Q):
        raise ValueError("w2 is not a minimal (Q, P) representative")
    table = [
        [sum(1 for i in blk if w2[i] in set(rblk)) for rblk in R.blocks]
        for blk in P.blocks
    ]
    w = _rep_from_table(P, R, table)
    w1 = compose(w2, inverse(w))
    for rblk in R.blocks:
        if tuple(sorted(w1[j] for j in rblk)) != rblk:
            raise AssertionError("factor does not preserve R-blocks")
    _, rw = relative_parabolics(w, P, R)
    if not is_double_coset_rep(w1, rw, Q):
        raise AssertionError("Levi factor is not minimal for (Q, R_w)")
    return w1, w


def longest_in_W(P: BlockParabolic, refinement: Sequence[Sequence[int]]) -> Perm:
    """Cell-reversing involution inside each block of ``P``.

    ``refinement[k]`` lists the cell sizes subdividing block ``k``.  The
    result maps the j-th cell of a block onto the mirror cell, keeping
    the internal order of each cell; with equal cell sizes within every
    block this is an involution.

    >>> P = BlockParabolic.full(4)
    >>> longest_in_W(P, [(2, 2)])
    (2, 3, 0, 1)
    >>> longest_in_W(P, [(4,)])
    (0, 1, 2, 3)
    """
    if len(refinement) != len(P.blocks):
        raise ValueError("one cell list per block required")
    img = [0] * P.ambient
    for blk, sizes in zip(P.blocks, refinement):
        if sum(sizes) != len(blk):
            raise ValueError("cells %r do not subdivide block of size %d" % (tuple(sizes), len(blk)))
        cells = []
        pos = 0
        for s in sizes:
            cells.append(blk[pos : pos + s])
            pos += s
        target = [i for cell in reversed(cells) for i in cell]
        for src, dst in zip(blk, target):
            img[src] = dst
    return tuple(img)


def lift_block_permutation(comp: Composition, block_perm: Perm) -> Perm:
    """Element-level lift of a permutation of the parts of ``comp``.

    Part ``i`` moves to slot ``block_perm[i]``; entries travel with
    their part, keeping internal order.  The lift is increasing on the
    blocks of ``comp`` by construction.

    >>> lift_block_permutation(Composition((1, 2)), (1, 0))
    (2, 0, 1)
    """
    if len(block_perm) != len(comp.parts):
        raise ValueError("block permutation degree mismatch")
    inv = inverse(block_perm)
    tgt_parts = tuple(comp.parts[inv[j]] for j in range(len(inv)))
    tgt_starts = Composition(tgt_parts).starts()
    img = [0] * comp.ambient
    for i, (start, size) in enumerate(zip(comp.starts(), comp.parts)):
        dst = tgt_starts[block_perm[i]]
        for t in range(size):
            img[start + t] = dst + t
    return tuple(img)


def all_standard_compositions(m: int) -> list[Composition]:
    """Every composition of ``m``, ordered by refinement-friendly lex.

    >>> [c.parts for c in all_standard_compositions(3)]
    [(1, 1, 1), (1, 2), (2, 1), (3,)]
    """
    out: list[Composition] = []

    def rec(remaining: int, acc: list[int]) -> None:
        if remaining == 0:
            out.append(Composition(tuple(acc)))
            return
        for p in range(1, remaining + 1):
            acc.append(p)
            rec(remaining - p, acc)
            acc.pop()

    rec(m, [])
    return out
