"""Combinatorial Floer theory of twisted sections over a moment polytope.

Generators are refined lattice points of Q (boundary included exactly when
l1 < l2), triangles are decided by an ordering gate plus an exact membership
rule for the affine target point, and the graded algebra of a polytope is
assembled with all structure constants 0 or 1.  Everything here is exact
rational arithmetic; nothing is ever rounded.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lattice import Polytope, interior_lattice_points, lattice_points, vec

log = logging.getLogger(__name__)


class DegenerateTriple(ValueError):
    """Triangle data with l1 = l3 has no affine target."""


class AssociativityViolation(RuntimeError):
    """Exhaustive associativity audit failed; indicates an implementation bug."""


# ---------------------------------------------------------------------------
# sections and generators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwistedSection:
    """The section with covector field u -> -2*pi*j*u, kept symbolic."""

    twist: int

    def covector_field(self) -> str:
        return f"u -> -2*pi*{self.twist}*u"

    def twisted(self, k: int) -> "TwistedSection":
        return TwistedSection(self.twist + k)

    @property
    def is_zero_section(self) -> bool:
        return self.twist == 0


@dataclass(frozen=True)
class FloerGenerator:
    l1: int
    l2: int
    point: tuple[Fraction, ...]
    homological_degree: int

    @property
    def n(self) -> int:
        return len(self.point)

    @property
    def cohomological_degree(self) -> int:
        return self.n - self.homological_degree


@dataclass(frozen=True)
class FloerGroup:
    l1: int
    l2: int
    polytope: Polytope
    basis: tuple[FloerGenerator, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def floer_group(Q: Polytope, l1: int, l2: int) -> FloerGroup:
    """Generators between the twisted sections L(l1), L(l2).

    l1 < l2: all points of Q cap (1/(l2-l1))Z^n, boundary included, in
    homological degree n.  l1 > l2: strictly interior points of the
    (1/(l1-l2))-lattice, degree 0.  l1 = l2: the single canonical generator,
    degree n.
    """
    n = Q.n
    zero = (0,) * n
    if Q.degenerate or Q.dim < n or not Q.contains_strictly(zero):
        warnings.warn(
            "polytope is not full-dimensional with the origin interior; "
            "twisted-section geometry degenerates",
            stacklevel=2,
        )
    if l1 < l2:
        pts = lattice_points(Q, l2 - l1)
        hom = n
    elif l1 > l2:
        pts = interior_lattice_points(Q, l1 - l2)
        hom = 0
    else:
        pts = [tuple(Fraction(0) for _ in range(n))]
        hom = n
    basis = tuple(FloerGenerator(l1, l2, p, hom) for p in sorted(pts))
    return FloerGroup(l1, l2, Q, basis)


# ---------------------------------------------------------------------------
# triangles and the cup product
# ---------------------------------------------------------------------------

def triangle_target(l1: int, l2: int, l3: int, p: Sequence, q: Sequence):
    """r = ((l2-l1)p + (l3-l2)q) / (l3-l1), exactly."""
    if l1 == l3:
        raise DegenerateTriple(f"l1 = l3 = {l1} leaves no affine target")
    pp, qq = vec(p), vec(q)
    a, b = Fraction(l2 - l1), Fraction(l3 - l2)
    return tuple((a * x + b * y) / (l3 - l1) for x, y in zip(pp, qq))


def _ordering_admits_triangle(l1: int, l2: int, l3: int) -> bool:
    return (l1 < l2 and (l3 < l1 < l2 or l1 < l2 < l3)) or (l2 < l1 and l2 < l3 < l1)


def _in_generator_set(Q: Polytope, l1: int, l3: int, r) -> bool:
    """Membership respecting the boundary rule of the (l1, l3) group."""
    k = abs(l3 - l1)
    if any((x * k).denominator != 1 for x in r):
        return False
    if l1 < l3:
        return Q.contains(r)
    return Q.contains_strictly(r)


def triangle_exists(l1: int, l2: int, l3: int, p, q, Q: Polytope) -> bool:
    """Ordering gate first; then the target must lie in the (l1,l3) basis set."""
    if l1 == l3:
        raise DegenerateTriple(f"l1 = l3 = {l1} leaves no affine target")
    if not _ordering_admits_triangle(l1, l2, l3):
        return False
    r = triangle_target(l1, l2, l3, p, q)
    return _in_generator_set(Q, l1, l3, r)


def _flag_boundary_unit(Q: Polytope, l1: int, l2: int, l3: int, point) -> None:
    if Q.contains(point) and not Q.contains_strictly(point):
        log.info(
            "unit product with repeated twists (%d,%d,%d) at boundary point %s; "
            "resolved by the boundary membership rule",
            l1, l2, l3, tuple(str(x) for x in point),
        )


def cup_product(x: FloerGenerator, y: FloerGenerator, Q: Polytope):
    """Product of composable generators; None encodes the zero element.

    Distinct twists: the generator at the triangle target when the triangle
    exists.  A repeated twist on either side is the identity action of the
    canonical generator.  All coefficients are +1 in this basis.
    """
    if x.l2 != y.l1:
        raise ValueError(f"generators not composable: {x.l2} vs {y.l1}")
    l1, l2, l3 = x.l1, x.l2, y.l2
    if l1 == l2:
        _flag_boundary_unit(Q, l1, l2, l3, y.point)
        return y
    if l2 == l3:
        _flag_boundary_unit(Q, l1, l2, l3, x.point)
        return x
    if l1 == l3:
        return None  # the ordering gate can never admit a cyclic triple
    if not triangle_exists(l1, l2, l3, x.point, y.point, Q):
        return None
    r = triangle_target(l1, l2, l3, x.point, y.point)
    hom = x.n if l1 < l3 else 0
    return FloerGenerator(l1, l3, r, hom)


# ---------------------------------------------------------------------------
# the graded algebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GradedAlgebra:
    polytope: Polytope
    J: int
    pieces: tuple[FloerGroup, ...]  # index j = twist, 0..J
    # products[(j, k)][(p_idx, q_idx)] = r_idx in piece j+k
    products: dict

    def dimension(self, j: int) -> int:
        return self.pieces[j].dimension

    def structure_constant(self, j: int, p_idx: int, k: int, q_idx: int) -> tuple[int, int]:
        """(target twist, target index); the constant itself is always 1."""
        return j + k, self.products[(j, k)][(p_idx, q_idx)]

    def json_tables(self) -> dict:
        out = {}
        for (j, k), table in sorted(self.products.items()):
            out[f"{j},{k}"] = [
                [p, q, r] for (p, q), r in sorted(table.items())
            ]
        return out

    def json_basis(self) -> dict:
        return {
            str(j): [[_frac_str(x) for x in g.point] for g in piece.basis]
            for j, piece in enumerate(self.pieces)
        }


def _frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def assemble_algebra(Q: Polytope, J: int) -> GradedAlgebra:
    """Pieces HF0(L, L(j)) for 0 <= j <= J with all ladder products.

    Every product (0,j,j+k) with j+k <= J is tabulated through cup_product;
    associativity of the resulting tables is verified exhaustively (exact
    arithmetic) before the algebra is returned.
    """
    if J < 1:
        raise ValueError("need at least one positive twist")
    pieces = tuple(floer_group(Q, 0, j) for j in range(J + 1))
    index = [
        {g.point: i for i, g in enumerate(piece.basis)} for piece in pieces
    ]
    products: dict = {}
    for j in range(J + 1):
        for k in range(J + 1 - j):
            table = {}
            for pi, x in enumerate(pieces[j].basis):
                for qi, y in enumerate(pieces[k].basis):
                    # reinterpret y as the equivariant generator of (j, j+k)
                    y_shift = FloerGenerator(j, j + k, y.point, y.homological_degree)
                    z = cup_product(x, y_shift, Q)
                    if z is None:  # impossible: (j*p + k*q)/(j+k) is convex
                        raise RuntimeError("ladder product vanished")
                    table[(pi, qi)] = index[j + k][z.point]
            products[(j, k)] = table

    for a in range(J + 1):
        for b in range(J + 1 - a):
            for c in range(J + 1 - a - b):
                tab_ab, tab_bc = products[(a, b)], products[(b, c)]
                tab_ab_c, tab_a_bc = products[(a + b, c)], products[(a, b + c)]
                for pi in range(pieces[a].dimension):
                    for qi in range(pieces[b].dimension):
                        left = tab_ab[(pi, qi)]
                        for zi in range(pieces[c].dimension):
                            if tab_ab_c[(left, zi)] != tab_a_bc[(pi, tab_bc[(qi, zi)])]:
                                raise AssociativityViolation(
                                    f"associativity fails on twists ({a},{b},{c}) "
                                    f"at indices ({pi},{qi},{zi})"
                                )
    return GradedAlgebra(Q, J, pieces, products)


# ---------------------------------------------------------------------------
# duality
# ---------------------------------------------------------------------------

def serre_dual_dimension(Q: Polytope, j: int) -> int:
    """dim HF^n(L, L(j)) for j < 0: interior points of the |j|-refinement."""
    if j >= 0:
        raise ValueError("Serre-dual dimensions are defined for negative twists")
    return len(interior_lattice_points(Q, -j))


def dual_action_table(alg: GradedAlgebra, l: int, m: int):
    """Action of the twist-l piece on the dual of the twist-m piece.

    Encoded as the transpose of the tabulated (l, m-l) product: each entry
    (p, q, r) becomes (p, r, q), read as x_p . x_r^dual = x_q^dual.  The
    duality formula is backed for m > l (the composite twist stays
    negative); m = l is the pairing itself and is flagged for audit.
    """
    if m < l:
        raise ValueError("no tabulated positive counterpart to transpose")
    if m == l:
        log.warning(
            "dualized product with l = m = %d is the pairing configuration, "
            "outside the verified dualization range; returning the formal transpose",
            l,
        )
    table = alg.products[(l, m - l)]
    return sorted((p, r, q) for (p, q), r in table.items())
