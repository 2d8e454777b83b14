"""Matched parabolic pairs in GL(n) x GL(n+1) and their split components.

A matched pair consists of a standard parabolic subgroup of GL(n) and a
semi-standard parabolic subgroup of GL(n+1) cutting out that same
subgroup on the embedded GL(n).  Pairs are classified by a composition
of n+1 together with a distinguished slot, the corner: conjugating the
standard parabolic of the composition by an explicit cycle moves the
extra basis index into the corner block.  On the GL(n) side the corner
block either shrinks by one (type 1, corner part >= 2) or disappears
(type 2, corner part == 1).

The shared split component z_P of a pair is coordinatized by slot
traces: a vector assigns to every slot the trace H_i of its block, the
corner slot being pinned to zero.  In these coordinates the slot unit
vectors are orthogonal with squared length 1/n_i for the invariant
inner product, and the reference volume gives each unit cell of the
slot lattice volume one.  Roots, coweights, coroots, the half-sum
covector and lattice covolumes are exact rationals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from .affine import Vec, det, frac, solve, vec, zero_vec
from .weyl import (
    BlockParabolic,
    Composition,
    Perm,
    all_standard_compositions,
    compose,
    conjugate,
    identity_perm,
    inverse,
)


def _as_composition(parts) -> Composition:
    if isinstance(parts, Composition):
        return parts
    return Composition(tuple(parts))


def classify_pair(parts, corner: int) -> tuple[int, Composition]:
    """Type tag and GL(n)-side composition of a classification datum.

    ``corner`` is the 1-based slot index.  A corner part of size at
    least two shrinks by one on the GL(n) side (type 1); a corner part
    of size one disappears (type 2).

    >>> classify_pair((1, 2), 2)
    (1, Composition(parts=(1, 1)))
    >>> classify_pair((1, 2), 1)
    (2, Composition(parts=(2,)))
    """
    parts = _as_composition(parts)
    if not 1 <= corner <= len(parts):
        raise ValueError("corner %d outside slots 1..%d" % (corner, len(parts)))
    lst = list(parts.parts)
    if lst[corner - 1] >= 2:
        lst[corner - 1] -= 1
        return 1, Composition(tuple(lst))
    del lst[corner - 1]
    if not lst:
        raise ValueError("corner deletion leaves GL(0); need ambient n >= 1")
    return 2, Composition(tuple(lst))


def _cycle_candidates(np1: int, pos0: int) -> tuple[Perm, ...]:
    """The two orientations of the cycle on positions ``pos0 .. np1-1``."""
    fwd = list(range(np1))
    for p in range(pos0, np1 - 1):
        fwd[p] = p + 1
    fwd[np1 - 1] = pos0
    first = tuple(fwd)
    second = inverse(first)
    return (first,) if first == second else (first, second)


def drop_last_index(bp: BlockParabolic) -> BlockParabolic:
    """Restriction to GL(m-1): delete the last index, drop emptied blocks.

    >>> bp = BlockParabolic(3, ((2,), (0, 1)))
    >>> drop_last_index(bp).blocks
    ((0, 1),)
    """
    last = bp.ambient - 1
    blocks = tuple(
        tuple(i for i in blk if i != last) for blk in bp.blocks
    )
    return BlockParabolic(last, tuple(b for b in blocks if b))


@dataclass(frozen=True)
class RSParabolic:
    """Matched parabolic pair, stored through its classification datum.

    ``parts`` is the composition of n+1, ``corner`` the 1-based slot of
    the distinguished block, ``gl_parts`` the induced composition of n,
    ``w_std`` the validated conjugating permutation (0-based images) and
    ``blocks_np1`` the resulting semi-standard GL(n+1) member.
    """

    n: int
    parts: Composition
    corner: int
    type_tag: int
    gl_parts: Composition
    w_std: Perm
    blocks_np1: BlockParabolic

    def __post_init__(self) -> None:
        tag, derived = classify_pair(self.parts, self.corner)
        if self.parts.ambient != self.n + 1 or tag != self.type_tag:
            raise ValueError("inconsistent classification datum")
        if derived != self.gl_parts:
            raise ValueError("GL(n) composition does not match the corner rule")
        std = BlockParabolic.from_composition(self.parts)
        if conjugate(self.w_std, std) != self.blocks_np1:
            raise ValueError("stored blocks do not match the conjugator")
        if drop_last_index(self.blocks_np1) != BlockParabolic.from_composition(
            self.gl_parts
        ):
            raise ValueError("pair is not matched: GL(n) cut differs")

    @property
    def corner0(self) -> int:
        """0-based corner slot index."""
        return self.corner - 1

    @property
    def num_slots(self) -> int:
        return len(self.parts)

    def corner_window(self) -> tuple[int, int]:
        """Half-open 0-based index range of the corner slot.

        >>> from_pair((1, 2), 2).corner_window()
        (1, 3)
        """
        start = self.parts.starts()[self.corner0]
        return start, start + self.parts.parts[self.corner0]

    def is_full(self) -> bool:
        return len(self.parts) == 1

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p_h": list(self.gl_parts.parts),
            "p_std_np1": list(self.parts.parts),
            "i_0": self.corner,
            "type_tag": self.type_tag,
            "w_std": [i + 1 for i in self.w_std],
        }


def from_pair(parts, corner: int, gl_parts=None) -> RSParabolic:
    """Build the matched pair of a classification datum, with validation.

    The conjugating cycle is fixed by checking the matching property,
    not by trusting either orientation of the cycle notation.

    >>> P = from_pair((1, 2), 2)
    >>> P.w_std, P.blocks_np1.blocks
    ((0, 1, 2), ((0,), (1, 2)))
    >>> Q = from_pair((1, 2), 1)
    >>> Q.w_std, Q.blocks_np1.blocks
    ((2, 0, 1), ((2,), (0, 1)))
    """
    parts = _as_composition(parts)
    np1 = parts.ambient
    if np1 < 2:
        raise ValueError("need n >= 1, got ambient %d" % np1)
    tag, derived = classify_pair(parts, corner)
    if gl_parts is not None and _as_composition(gl_parts) != derived:
        raise ValueError(
            "GL(n) composition %r does not arise from slot %d of %r"
            % (tuple(_as_composition(gl_parts).parts), corner, parts.parts)
        )
    pos0 = sum(parts.parts[: corner]) - 1
    std = BlockParabolic.from_composition(parts)
    target = BlockParabolic.from_composition(derived)
    winners = []
    for w in _cycle_candidates(np1, pos0):
        blocks = conjugate(w, std)
        if drop_last_index(blocks) == target:
            winners.append((w, blocks))
    if len({blocks for _, blocks in winners}) != 1:
        raise AssertionError(
            "cycle validation did not single out one parabolic for %r slot %d"
            % (parts.parts, corner)
        )
    w_std, blocks = winners[0]
    return RSParabolic(np1 - 1, parts, corner, tag, derived, w_std, blocks)


def from_json(data) -> RSParabolic:
    """Inverse of :meth:`RSParabolic.to_json`, revalidating everything."""
    if isinstance(data, str):
        data = json.loads(data)
    P = from_pair(
        Composition(tuple(data["p_std_np1"])),
        int(data["i_0"]),
        Composition(tuple(data["p_h"])),
    )
    if P.n != int(data["n"]) or P.type_tag != int(data["type_tag"]):
        raise ValueError("serialized pair is inconsistent")
    wire = [i + 1 for i in P.w_std]
    if list(data.get("w_std", wire)) != wire:
        raise ValueError("serialized conjugator does not validate")
    return P


def census_size(n: int) -> int:
    """Number of matched pairs for GL(n) x GL(n+1).

    >>> [census_size(n) for n in (1, 2, 6)]
    [3, 8, 256]
    """
    return sum(m * comb(n, m - 1) for m in range(1, n + 2))


def enumerate_rs(n: int) -> list[RSParabolic]:
    """All matched pairs, ordered by (slot count, composition, corner).

    >>> len(enumerate_rs(1))
    3
    """
    if n < 1:
        raise ValueError("need n >= 1")
    comps = sorted(all_standard_compositions(n + 1), key=lambda c: (len(c), c.parts))
    out = []
    for c in comps:
        for corner in range(1, len(c) + 1):
            out.append(from_pair(c, corner))
    return out


@dataclass(frozen=True)
class LeviData:
    """Levi block sizes: slots before the corner, the two corner ranks,
    slots after the corner."""

    before: tuple[int, ...]
    corner_n: int
    corner_np1: int
    after: tuple[int, ...]


def levi_decomposition(P: RSParabolic) -> LeviData:
    """Block ranks of the Levi factor, split around the corner.

    >>> levi_decomposition(from_pair((1, 2), 2))
    LeviData(before=(1,), corner_n=1, corner_np1=2, after=())
    """
    parts = P.parts.parts
    c = P.corner0
    return LeviData(parts[:c], parts[c] - 1, parts[c], parts[c + 1 :])


def is_subparabolic(P: RSParabolic, Q: RSParabolic) -> bool:
    """Containment P <= Q of matched pairs, tested on both factors."""
    if P.n != Q.n:
        raise ValueError("rank mismatch")
    gl_P = BlockParabolic.from_composition(P.gl_parts)
    gl_Q = BlockParabolic.from_composition(Q.gl_parts)
    return gl_Q.contains(gl_P) and Q.blocks_np1.contains(P.blocks_np1)


def slot_assignment(P: RSParabolic, Q: RSParabolic) -> tuple[int, ...]:
    """For refining ``parts``, the Q-slot containing each P-slot."""
    if not P.parts.refines(Q.parts):
        raise ValueError("compositions do not refine")
    starts = P.parts.starts()
    return tuple(Q.parts.block_of(s) for s in starts)


def relative_restrict(
    P: RSParabolic, Q: RSParabolic
) -> tuple[tuple[Composition, ...], Optional[RSParabolic]]:
    """Split a subpair P <= Q into per-slot data of the Levi of Q.

    Returns one composition per non-corner slot of Q (the shape of P
    inside that block) and the matched pair induced on the corner block
    of Q, or None when that block is trivial (corner part one).  The
    conjugators compose: the corner conjugator embedded at the standard
    corner window, followed by the conjugator of Q, gives the
    conjugator of P.

    >>> P = from_pair((1, 1, 1), 2)
    >>> Q = from_pair((1, 2), 2)
    >>> bold, cal = relative_restrict(P, Q)
    >>> [c.parts for c in bold], cal.parts.parts, cal.corner
    ([(1,)], (1, 1), 1)
    """
    if not is_subparabolic(P, Q):
        raise ValueError("pairs are not nested")
    owner = slot_assignment(P, Q)
    groups: list[list[int]] = [[] for _ in range(len(Q.parts))]
    for i, j in enumerate(owner):
        groups[j].append(P.parts.parts[i])
    if owner[P.corner0] != Q.corner0:
        raise AssertionError("nested pairs must share the corner window")
    bold = tuple(
        Composition(tuple(groups[j]))
        for j in range(len(Q.parts))
        if j != Q.corner0
    )
    start, stop = Q.corner_window()
    width = stop - start
    if width == 1:
        if P.w_std != Q.w_std:
            raise AssertionError("trivial corner window must leave the conjugator")
        return bold, None
    rel_corner = 1 + P.corner0 - owner.index(Q.corner0)
    cal = from_pair(Composition(tuple(groups[Q.corner0])), rel_corner)
    emb = list(identity_perm(P.n + 1))
    for j, img in enumerate(cal.w_std):
        emb[start + j] = start + img
    if compose(Q.w_std, tuple(emb)) != P.w_std:
        raise AssertionError("corner conjugator does not factor")
    return bold, cal


def relative_adjacencies(P: RSParabolic, Q: RSParabolic) -> tuple[int, ...]:
    """P-slot adjacencies lying inside a single Q-slot.

    These index the simple roots of z_P relative to z_Q.
    """
    owner = slot_assignment(P, Q)
    return tuple(
        i for i in range(len(P.parts) - 1) if owner[i] == owner[i + 1]
    )


def intermediate_parabolics(P: RSParabolic, Q: RSParabolic) -> list[RSParabolic]:
    """All matched pairs R with P <= R <= Q, one per adjacency subset.

    The list is ordered by the bitmask of merged adjacencies, so it
    starts with P and ends with Q.
    """
    if not is_subparabolic(P, Q):
        raise ValueError("pairs are not nested")
    adj = relative_adjacencies(P, Q)
    out = []
    for mask in range(1 << len(adj)):
        merged = {adj[k] for k in range(len(adj)) if mask >> k & 1}
        parts: list[int] = []
        corner = 0
        for i, p in enumerate(P.parts.parts):
            if i > 0 and (i - 1) in merged:
                parts[-1] += p
            else:
                parts.append(p)
            if i == P.corner0:
                corner = len(parts)
        out.append(from_pair(Composition(tuple(parts)), corner))
    return out


def embed_z(P: RSParabolic, Q: RSParabolic, K: Sequence) -> Vec:
    """Trace coordinates on z_P of a vector of z_Q, for P <= Q.

    Within a non-corner Q-slot of total size N the trace splits among
    the P-slots proportionally to their sizes; the corner window gets
    zeros.
    """
    owner = slot_assignment(P, Q)
    K = vec(K)
    if len(K) != len(Q.parts):
        raise ValueError("coordinate length mismatch")
    out = []
    for i, j in enumerate(owner):
        if j == Q.corner0:
            out.append(Fraction(0))
        else:
            out.append(K[j] * P.parts.parts[i] / Q.parts.parts[j])
    return tuple(out)


def project_z(P: RSParabolic, Q: RSParabolic, H: Sequence) -> Vec:
    """Orthogonal projection z_P -> z_Q in trace coordinates, P <= Q.

    Traces add along merged slots; the corner slot of Q is pinned to
    zero.
    """
    owner = slot_assignment(P, Q)
    H = vec(H)
    if len(H) != len(P.parts):
        raise ValueError("coordinate length mismatch")
    out = [Fraction(0)] * len(Q.parts)
    for i, j in enumerate(owner):
        if j != Q.corner0:
            out[j] += H[i]
    return tuple(out)


class ZSpace:
    """Root and lattice data of the split component of a matched pair.

    Vectors and covectors are tuples indexed by all slots, the corner
    entry being zero by convention.  ``roots[a]`` pairs the slots a and
    a+1; coweights and coroots are the dual families, and every pairing
    is checked at construction.
    """

    def __init__(self, parent: RSParabolic):
        self.parent = parent
        m = len(parent.parts)
        c = parent.corner0
        sizes = parent.parts.parts
        self.num_slots = m
        self.corner0 = c
        self.sizes = sizes
        self.dim = m - 1
        roots = []
        coweights = []
        coroots = []
        for a in range(m - 1):
            cov = [Fraction(0)] * m
            if a != c:
                cov[a] = Fraction(1, sizes[a])
            if a + 1 != c:
                cov[a + 1] = -Fraction(1, sizes[a + 1])
            roots.append(tuple(cov))
            wt = [Fraction(0)] * m
            if a < c:
                for j in range(a + 1):
                    wt[j] = Fraction(sizes[j])
            else:
                for j in range(a + 1, m):
                    wt[j] = -Fraction(sizes[j])
            coweights.append(tuple(wt))
            co = [Fraction(0)] * m
            if a != c:
                co[a] = Fraction(1)
            if a + 1 != c:
                co[a + 1] = -Fraction(1)
            coroots.append(tuple(co))
        self.roots = tuple(roots)
        self.coweights = tuple(coweights)
        self.coroots = tuple(coroots)
        rho = [Fraction(0)] * m
        for i in range(m):
            if i < c:
                rho[i] = Fraction(1, 2)
            elif i > c:
                rho[i] = -Fraction(1, 2)
        self.rho_bar = tuple(rho)
        vol = Fraction(1)
        for i in range(m):
            if i != c:
                vol *= sizes[i]
        self.vol_coweights = vol
        for a in range(m - 1):
            for b in range(m - 1):
                want = Fraction(1 if a == b else 0)
                if self.pair(self.roots[a], self.coweights[b]) != want:
                    raise AssertionError("root/coweight pairing failed")
                if self.inner(self.coweights[a], self.coroots[b]) != want:
                    raise AssertionError("coweight/coroot pairing failed")

    def pair(self, cov: Sequence, v: Sequence) -> Fraction:
        """Covector applied to a vector, both in slot coordinates."""
        return sum((frac(a) * frac(b) for a, b in zip(cov, v)), Fraction(0))

    def inner(self, u: Sequence, v: Sequence) -> Fraction:
        """Invariant inner product: slot units have squared length 1/n_i."""
        return sum(
            (frac(a) * frac(b) / self.sizes[i] for i, (a, b) in enumerate(zip(u, v))),
            Fraction(0),
        )

    def slot_values(self, H: Sequence) -> Vec:
        """Per-slot diagonal values H_i / n_i, zero at the corner."""
        H = vec(H)
        return tuple(
            H[i] / self.sizes[i] if i != self.corner0 else Fraction(0)
            for i in range(self.num_slots)
        )

    def chamber_contains(self, H: Sequence, strict: bool = True) -> bool:
        """Whether the slot values decrease through zero at the corner."""
        H = vec(H)
        if H[self.corner0] != 0:
            return False
        vals = self.slot_values(H)
        for a in range(self.num_slots - 1):
            if vals[a] < vals[a + 1]:
                return False
            if strict and vals[a] == vals[a + 1]:
                return False
        return True

    def coweight_coordinates(self, H: Sequence) -> Vec:
        """Coefficients of H in the coweight basis."""
        H = vec(H)
        idx = [i for i in range(self.num_slots) if i != self.corner0]
        matrix = [[self.coweights[a][i] for a in range(self.dim)] for i in idx]
        rhs = [H[i] for i in idx]
        return solve(matrix, rhs)

    def project_ambient(self, x: Sequence) -> Vec:
        """Trace coordinates of the orthogonal projection of a GL(n) diagonal.

        Entries are summed over each GL(n) block; the corner slot is
        pinned to zero, which for type 1 discards the corner block sum.
        """
        x = vec(x)
        if len(x) != self.parent.n:
            raise ValueError("expected %d entries" % self.parent.n)
        out = [Fraction(0)] * self.num_slots
        for i, block in enumerate(self.parent.gl_parts.intervals()):
            slot = i if self.parent.type_tag == 1 or i < self.corner0 else i + 1
            if slot != self.corner0:
                out[slot] = sum((x[p] for p in block), Fraction(0))
        return tuple(out)

    def to_ambient(self, H: Sequence) -> tuple[Vec, Vec]:
        """Diagonal realizations in GL(n) and GL(n+1) entry coordinates.

        The corner slot value is zero, so the type 1 corner block of
        GL(n) is filled with zeros without special casing.
        """
        vals = self.slot_values(H)
        x: list[Fraction] = []
        for i, size in enumerate(self.parent.gl_parts.parts):
            slot = i if self.parent.type_tag == 1 or i < self.corner0 else i + 1
            x.extend([vals[slot]] * size)
        return tuple(x), tuple(x) + (Fraction(0),)


class RelativeZData:
    """Relative root and lattice data of a nested pair P <= Q.

    Roots restrict from z_P; coweights are solved inside the orthogonal
    complement of z_Q; coroots are slot differences, orthogonal to z_Q
    already.  The covolume uses the reference volume of z_P over that
    of z_Q.
    """

    def __init__(self, P: RSParabolic, Q: RSParabolic):
        if not is_subparabolic(P, Q):
            raise ValueError("pairs are not nested")
        self.P = P
        self.Q = Q
        space = ZSpace(P)
        self.space = space
        adj = relative_adjacencies(P, Q)
        self.adjacencies = adj
        self.dim = len(adj)
        self.eps = -1 if self.dim % 2 else 1
        self.roots = tuple(space.roots[a] for a in adj)
        self.coroots = tuple(space.coroots[a] for a in adj)
        m = space.num_slots
        idx = [i for i in range(m) if i != space.corner0]
        units = []
        for j in range(len(Q.parts)):
            if j == Q.corner0:
                continue
            K = [Fraction(0)] * len(Q.parts)
            K[j] = Fraction(1)
            units.append(embed_z(P, Q, K))
        self.z_q_basis = tuple(units)
        rows = []
        for a in adj:
            rows.append([space.roots[a][i] for i in idx])
        for u in units:
            rows.append([u[i] / space.sizes[i] for i in idx])
        coweights = []
        for k in range(self.dim):
            rhs = [Fraction(1 if t == k else 0) for t in range(len(rows))]
            sol = solve(rows, rhs)
            wt = [Fraction(0)] * m
            for col, i in enumerate(idx):
                wt[i] = sol[col]
            coweights.append(tuple(wt))
        self.coweights = tuple(coweights)
        cols = list(self.coweights) + list(units)
        if cols:
            matrix = [[col[i] for col in cols] for i in idx]
            self.vol_coweights = abs(det(matrix))
        else:
            self.vol_coweights = Fraction(1)
        for a, alpha in enumerate(self.roots):
            for b, wt in enumerate(self.coweights):
                want = Fraction(1 if a == b else 0)
                if space.pair(alpha, wt) != want:
                    raise AssertionError("relative root/coweight pairing failed")
        for a, wt in enumerate(self.coweights):
            for b, co in enumerate(self.coroots):
                want = Fraction(1 if a == b else 0)
                if space.inner(wt, co) != want:
                    raise AssertionError("relative coweight/coroot pairing failed")
            for u in units:
                if space.inner(wt, u) != 0:
                    raise AssertionError("relative coweight not orthogonal to z_Q")

    def component(self, H: Sequence) -> Vec:
        """Orthogonal projection of a z_P vector onto the complement of z_Q."""
        H = vec(H)
        K = project_z(self.P, self.Q, H)
        return tuple(a - b for a, b in zip(H, embed_z(self.P, self.Q, K)))

    def coroot_coordinates(self, H: Sequence) -> Vec:
        """Coefficients of the relative component of H in the coroot basis."""
        comp = self.component(H)
        if self.dim == 0:
            if any(c != 0 for c in comp):
                raise AssertionError("nonzero component in a rank-zero space")
            return ()
        m = self.space.num_slots
        idx = [i for i in range(m) if i != self.space.corner0]
        matrix = [[self.coroots[a][i] for a in range(self.dim)] for i in idx]
        rhs = [comp[i] for i in idx]
        return solve(matrix, rhs)
