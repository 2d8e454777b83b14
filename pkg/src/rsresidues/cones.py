"""Cone indicators on split components and their exact Fourier transforms.

For a nested pair P <= Q of matched parabolic pairs, the relative space
carries two simplicial cones: the span of the coweights (cut out by the
relative roots) and the span of the coroots.  This module evaluates
their indicator functions tau and tau_hat, the alternating compactly
supported combination Gamma, the normalized products theta and
theta_hat of linear forms, and the Fourier transforms of the cone and
of Gamma.  All structure constants are exact rationals; complex numbers
enter only when a transform is evaluated at a numeric point.

Vectors of the ambient diagonal torus of GL(n) are length-n sequences;
vectors of a split component are slot-trace tuples with the corner
pinned to zero, as in :mod:`rsresidues.rsparabolic`.  Polynomials on a
split component are dictionaries mapping slot-exponent tuples to
coefficients.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .affine import det, frac, vec
from .rsparabolic import (
    RSParabolic,
    RelativeZData,
    ZSpace,
    embed_z,
    intermediate_parabolics,
    project_z,
)

Poly = dict[tuple[int, ...], object]


def _dot(u: Sequence, v: Sequence) -> object:
    if len(u) != len(v):
        raise ValueError("length mismatch")
    return sum(a * b for a, b in zip(u, v))


class ExpPoly:
    """Finite sum of polynomial-times-exponential terms.

    ``terms`` maps an exponent covector (tuple, one entry per slot of
    the underlying split component) to a polynomial in the same slot
    coordinates.  The representation is canonical: zero polynomials are
    dropped and equal exponents merged, so the decomposition is the
    unique one and the purely polynomial part is the term at zero.
    """

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.terms: dict[tuple, Poly] = {}

    def add(self, exponent: Sequence, poly: Mapping) -> None:
        key = tuple(Fraction(0) if e == 0 else e for e in exponent)
        if len(key) != self.nvars:
            raise ValueError("exponent length mismatch")
        slot = self.terms.setdefault(key, {})
        for mono, coeff in poly.items():
            if len(mono) != self.nvars:
                raise ValueError("monomial length mismatch")
            new = slot.get(mono, 0) + coeff
            if new == 0:
                slot.pop(mono, None)
            else:
                slot[mono] = new
        if not slot:
            del self.terms[key]

    def polynomial_part(self) -> Poly:
        return dict(self.terms.get((Fraction(0),) * self.nvars, {}))

    def evaluate(self, point: Sequence) -> complex:
        point = tuple(point)
        total = 0j
        for exponent, poly in self.terms.items():
            value = 0j
            for mono, coeff in poly.items():
                term = complex(coeff)
                for x, k in zip(point, mono):
                    term *= complex(x) ** k
                value += term
            total += value * cmath.exp(complex(_dot(exponent, point)))
        return total

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExpPoly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __repr__(self) -> str:
        return "ExpPoly(%d, %r)" % (self.nvars, self.terms)

    def to_json(self) -> list:
        out = []
        for exponent in sorted(self.terms, key=str):
            poly = self.terms[exponent]
            out.append(
                {
                    "exponent": [str(e) for e in exponent],
                    "polynomial": [
                        {"monomial": list(m), "coeff": str(c)}
                        for m, c in sorted(poly.items())
                    ],
                }
            )
        return out


class ConeTransform:
    """Sum of rational multiples of products of inverse coweight pairings.

    A term with exponent vector ``e`` stands for the function
    ``coeff * prod_a pairing(lambda, coweight_a) ** -e_a``.  Closed
    under differentiation in lambda, which is how polynomial weights
    enter the cone transform.
    """

    def __init__(self, cone: "ConePair", terms: Optional[dict] = None):
        self.cone = cone
        self.terms: dict[tuple[int, ...], Fraction] = dict(terms or {})

    def differentiate(self, slot: int) -> "ConeTransform":
        out: dict[tuple[int, ...], Fraction] = {}
        for expo, coeff in self.terms.items():
            for a, wt in enumerate(self.cone.coweights):
                if wt[slot] == 0:
                    continue
                new = list(expo)
                new[a] += 1
                key = tuple(new)
                value = out.get(key, Fraction(0)) + coeff * (-expo[a]) * wt[slot]
                if value == 0:
                    out.pop(key, None)
                else:
                    out[key] = value
        return ConeTransform(self.cone, out)

    def evaluate(self, lam: Sequence) -> object:
        pairings = [_dot(lam, wt) for wt in self.cone.coweights]
        total = 0
        for expo, coeff in self.terms.items():
            term = coeff
            for L, e in zip(pairings, expo):
                if e == 0:
                    continue
                if L == 0:
                    raise ValueError("lambda lies on a vanishing coweight pairing")
                term = term / L ** e
            total = total + term
        return total

    def to_json(self) -> list:
        return [
            {"exponents": list(e), "coeff": str(c)}
            for e, c in sorted(self.terms.items())
        ]


class ConePair:
    """Relative cone data of a nested pair P <= Q, with cached chain."""

    def __init__(self, P: RSParabolic, Q: RSParabolic):
        self.P = P
        self.Q = Q
        rel = RelativeZData(P, Q)
        self.rel = rel
        self.space = rel.space
        self.eps = rel.eps
        self.dim = rel.dim
        self.coweights = rel.coweights
        self.coroots = rel.coroots
        self.vol_coweights = rel.vol_coweights
        self.vol_coroots = self._basis_volume(rel.coroots)
        self._chain: Optional[tuple] = None

    def _basis_volume(self, vectors: Sequence) -> Fraction:
        space = self.space
        idx = [i for i in range(space.num_slots) if i != space.corner0]
        cols = list(vectors) + list(self.rel.z_q_basis)
        if not cols:
            return Fraction(1)
        matrix = [[col[i] for col in cols] for i in idx]
        return abs(det(matrix))

    def chain(self) -> tuple:
        """Intermediate pairs R with their two relative data blocks."""
        if self._chain is None:
            out = []
            for R in intermediate_parabolics(self.P, self.Q):
                out.append((R, RelativeZData(self.P, R), RelativeZData(R, self.Q)))
            self._chain = tuple(out)
        return self._chain

    def restrict_covector(self, R: RSParabolic, lam: Sequence) -> tuple:
        """Pull a z_P covector back to slot coordinates of z_R, P <= R."""
        out = []
        for j in range(len(R.parts)):
            unit = [Fraction(0)] * len(R.parts)
            unit[j] = Fraction(1)
            out.append(_dot(lam, embed_z(self.P, R, unit)))
        return tuple(out)


def theta_hat(cp: ConePair, lam: Sequence) -> object:
    """Normalized product of coweight pairings, exact for rational input."""
    total = frac(1) / cp.vol_coweights
    for wt in cp.coweights:
        total = total * _dot(lam, wt)
    return total


def theta(cp: ConePair, lam: Sequence) -> object:
    """Normalized product of coroot pairings."""
    total = frac(1) / cp.vol_coroots
    for co in cp.coroots:
        total = total * _dot(lam, co)
    return total


def _tau_from_rel(rel: RelativeZData, H_slots: Sequence) -> bool:
    return all(rel.space.pair(alpha, H_slots) >= 0 for alpha in rel.roots)


def _tau_hat_from_rel(
    cp: ConePair, R: RSParabolic, rel_RQ: RelativeZData, X_slots: Sequence
) -> bool:
    K = project_z(cp.P, R, X_slots)
    coords = rel_RQ.coroot_coordinates(K)
    return all(c >= 0 for c in coords)


def tau_indicator(cp: ConePair, H_ambient: Sequence) -> int:
    """Indicator of the coweight cone: relative root pairings nonnegative."""
    H = cp.space.project_ambient(vec(H_ambient))
    return 1 if _tau_from_rel(cp.rel, H) else 0


def tau_hat_indicator(cp: ConePair, H_ambient: Sequence) -> int:
    """Indicator of the coroot cone, applied to the relative component."""
    H = cp.space.project_ambient(vec(H_ambient))
    coords = cp.rel.coroot_coordinates(H)
    return 1 if all(c >= 0 for c in coords) else 0


def gamma_indicator(cp: ConePair, H_ambient: Sequence, T_ambient: Sequence) -> int:
    """Alternating sum over the chain: tau at H times tau_hat at H - T."""
    H = cp.space.project_ambient(vec(H_ambient))
    T = cp.space.project_ambient(vec(T_ambient))
    X = tuple(h - t for h, t in zip(H, T))
    total = 0
    for R, rel_PR, rel_RQ in cp.chain():
        if not _tau_from_rel(rel_PR, H):
            continue
        if _tau_hat_from_rel(cp, R, rel_RQ, X):
            total += rel_RQ.eps
    return total


def ft_cone_symbolic(cp: ConePair, q: Optional[Mapping] = None) -> ConeTransform:
    """Cone transform with polynomial weight as an exact symbolic sum.

    ``q`` maps slot-exponent monomials to rational coefficients; the
    default is the constant 1.  Each slot variable H_i turns into a
    derivative of the weightless transform along lambda_i.
    """
    base = ConeTransform(
        cp, {(1,) * cp.dim: cp.eps * cp.vol_coweights}
    )
    if q is None:
        q = {(0,) * len(cp.P.parts): Fraction(1)}
    result = ConeTransform(cp, {})
    for mono, coeff in q.items():
        term = base
        for slot, power in enumerate(mono):
            for _ in range(power):
                term = term.differentiate(slot)
        for expo, c in term.terms.items():
            value = result.terms.get(expo, Fraction(0)) + frac(coeff) * c
            if value == 0:
                result.terms.pop(expo, None)
            else:
                result.terms[expo] = value
    return result


def ft_cone(cp: ConePair, q: Optional[Mapping], lam: Sequence) -> object:
    """Fourier transform of the weighted coweight-cone indicator at lambda.

    For weight one this is eps over theta_hat; polynomial weights are
    realized by differentiating that kernel, which is the meromorphic
    continuation of the defining integral.
    """
    return ft_cone_symbolic(cp, q).evaluate(lam)


def gamma_exponent_map(cp: ConePair, R: RSParabolic) -> tuple:
    """Linear map on slot coordinates sending T to its z_R^Q component."""
    m = len(cp.P.parts)
    columns = []
    for i in range(m):
        unit = [Fraction(0)] * m
        unit[i] = Fraction(1)
        K_R = project_z(cp.P, R, unit)
        K_Q = project_z(cp.P, cp.Q, unit)
        col = tuple(
            a - b
            for a, b in zip(embed_z(cp.P, R, K_R), embed_z(cp.P, cp.Q, K_Q))
        )
        columns.append(col)
    return tuple(columns)


def ft_gamma_exp_poly(cp: ConePair, lam: Sequence) -> ExpPoly:
    """Transform of Gamma as an exponential polynomial in T (slot coords).

    The term attached to an intermediate pair R carries the exponent
    covector T -> pairing(lambda, T_R^Q) and the constant coefficient
    eps_P^R / (theta_hat_P^R(lambda) theta_R^Q(lambda)).  The purely
    polynomial part is the R = Q term, the weightless cone transform.
    """
    m = len(cp.P.parts)
    out = ExpPoly(m)
    for R, rel_PR, _ in cp.chain():
        th_hat = theta_hat(ConePair(cp.P, R), lam)
        lam_R = cp.restrict_covector(R, lam)
        th = theta(ConePair(R, cp.Q), lam_R)
        if th_hat == 0 or th == 0:
            raise ValueError("lambda is not in general position")
        columns = gamma_exponent_map(cp, R)
        exponent = tuple(_dot(lam, col) for col in columns)
        out.add(exponent, {(0,) * m: rel_PR.eps / (th_hat * th)})
    return out


def ft_gamma(cp: ConePair, T_ambient: Sequence, lam: Sequence) -> complex:
    """Numeric value of the Gamma transform at a concrete truncation T."""
    T = cp.space.project_ambient(vec(T_ambient))
    return ft_gamma_exp_poly(cp, lam).evaluate(T)
