"""Exact block-parabolic combinatorics, truncation cones and formal
residue calculus for Rankin-Selberg periods on GL(n) x GL(n+1).

Everything is exact: permutations and block partitions for the Weyl
side, ``fractions.Fraction`` linear algebra for coordinate geometry,
and a symbolic factor calculus for L-function products.  Floating
point enters only through the optional numeric evaluators.
"""

from __future__ import annotations

__version__ = "0.1.0"
