"""Exact lattice geometry: fans, support functions, polytopes, point counts.

Everything in this module is exact: coordinates are `fractions.Fraction`,
normals are primitive integer vectors, and no floating point is used
anywhere.  Dimensions up to 3 are supported where an algorithm needs a
dimension bound (hull, fan completeness); counting and membership are
dimension-agnostic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from math import ceil, floor, gcd
from typing import Iterable, Sequence


class MalformedFan(ValueError):
    """Fan data fails basic validation (ray shapes, cone sizes, indices)."""


class NotConvex(ValueError):
    """A support function is not convex across some pair of adjacent cones."""


class Unbounded(ValueError):
    """The requested polytope is unbounded (fan support too small)."""


class LowerDimensional(ValueError):
    """Operation needs a full-dimensional polytope but got a degenerate one."""


Vec = tuple[Fraction, ...]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def vec(xs: Iterable) -> Vec:
    return tuple(_frac(x) for x in xs)


def dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((_frac(x) * _frac(y) for x, y in zip(a, b)), Fraction(0))


# ---------------------------------------------------------------------------
# small exact linear algebra (Gaussian elimination over Q)
# ---------------------------------------------------------------------------

def mat_det(rows: Sequence[Sequence]) -> Fraction:
    """Determinant of a small square matrix, exact."""
    m = [list(map(_frac, r)) for r in rows]
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("determinant needs a square matrix")
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


def mat_rank(rows: Sequence[Sequence]) -> int:
    m = [list(map(_frac, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = 1 / m[row][col]
        for r in range(len(m)):
            if r != row and m[r][col] != 0:
                f = m[r][col] * inv
                for c in range(ncols):
                    m[r][c] -= f * m[row][c]
        row += 1
        rank += 1
        if row == len(m):
            break
    return rank


def solve_square(rows: Sequence[Sequence], rhs: Sequence) -> Vec | None:
    """Solve M x = rhs exactly; None if M is singular."""
    n = len(rows)
    m = [list(map(_frac, rows[i])) + [_frac(rhs[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        for c in range(col, n + 1):
            m[col][c] *= inv
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                for c in range(col, n + 1):
                    m[r][c] -= f * m[col][c]
    return tuple(m[r][n] for r in range(n))


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vec]:
    """Basis of {x : M x = 0} over Q (possibly empty)."""
    m = [list(map(_frac, r)) for r in rows]
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = 1 / m[row][col]
        for r in range(len(m)):
            if r != row and m[r][col] != 0:
                f = m[r][col] * inv
                for c in range(ncols):
                    m[r][c] -= f * m[row][c]
        pivots.append(col)
        row += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        x = [Fraction(0)] * ncols
        x[fcol] = Fraction(1)
        for r, pcol in enumerate(pivots):
            x[pcol] = -m[r][fcol] / m[r][pcol]
        basis.append(tuple(x))
    return basis


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to a primitive integer vector.

    The sign is normalized so the first nonzero entry is positive only when
    the caller asks for it via `primitive_signed`; here the direction is kept.
    """
    fr = [_frac(x) for x in v]
    if all(x == 0 for x in fr):
        raise ValueError("zero vector has no primitive representative")
    denom = 1
    for x in fr:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(x // g for x in ints)


def primitive_signed(v: Sequence) -> tuple[int, ...]:
    """Primitive vector with lexicographically positive sign convention."""
    p = primitive(v)
    lead = next(x for x in p if x != 0)
    return p if lead > 0 else tuple(-x for x in p)


def affine_dim(points: Sequence[Sequence]) -> int:
    pts = [vec(p) for p in points]
    if not pts:
        return -1
    p0 = pts[0]
    diffs = [tuple(a - b for a, b in zip(p, p0)) for p in pts[1:]]
    return mat_rank(diffs)


# ---------------------------------------------------------------------------
# polytopes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Polytope:
    """Bounded rational polytope carried in both V- and H-representation.

    halfspaces are pairs (normal, bound) with the convention
    <normal, y> <= bound; normals are primitive integer vectors.  A
    lower-dimensional polytope (dim < n) keeps its affine hull as pairs of
    opposite inequalities and sets `degenerate`.
    """

    n: int
    vertices: tuple[Vec, ...]
    halfspaces: tuple[tuple[tuple[int, ...], Fraction], ...]
    dim: int
    degenerate: bool = field(default=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))

    # -- membership ---------------------------------------------------
    def contains(self, point: Sequence) -> bool:
        p = vec(point)
        return all(dot(a, p) <= b for a, b in self.halfspaces)

    def contains_strictly(self, point: Sequence) -> bool:
        """Interior membership (in the ambient sense; degenerate => False)."""
        if self.degenerate:
            return False
        p = vec(point)
        return all(dot(a, p) < b for a, b in self.halfspaces)

    @property
    def contains_origin(self) -> bool:
        return all(b >= 0 for _, b in self.halfspaces)

    def same_set(self, other: "Polytope") -> bool:
        """Geometric equality (same vertex set), ignoring H-rep presentation."""
        return self.n == other.n and self.vertices == other.vertices

    # -- transforms ---------------------------------------------------
    def dilate(self, k) -> "Polytope":
        k = _frac(k)
        if k <= 0:
            raise ValueError("dilation factor must be positive")
        return Polytope(
            self.n,
            tuple(tuple(k * x for x in v) for v in self.vertices),
            tuple((a, k * b) for a, b in self.halfspaces),
            self.dim,
            self.degenerate,
        )

    def translate(self, w: Sequence) -> "Polytope":
        t = vec(w)
        return Polytope(
            self.n,
            tuple(tuple(x + y for x, y in zip(v, t)) for v in self.vertices),
            tuple((a, b + dot(a, t)) for a, b in self.halfspaces),
            self.dim,
            self.degenerate,
        )

    def bounding_box(self) -> list[tuple[Fraction, Fraction]]:
        return [
            (min(v[i] for v in self.vertices), max(v[i] for v in self.vertices))
            for i in range(self.n)
        ]

    @staticmethod
    def from_halfspaces(normals: Sequence[Sequence], bounds: Sequence) -> "Polytope":
        """Build the polytope {y : <a_i, y> <= b_i}; exact vertex enumeration.

        Raises Unbounded if the recession cone is nontrivial and ValueError
        if the region is empty.
        """
        n = len(normals[0])
        rows = [vec(a) for a in normals]
        bs = [_frac(b) for b in bounds]
        if _recession_nontrivial(rows, n):
            raise Unbounded("halfspace intersection has a nontrivial recession cone")
        verts: set[Vec] = set()
        for idx in itertools.combinations(range(len(rows)), n):
            sol = solve_square([rows[i] for i in idx], [bs[i] for i in idx])
            if sol is None:
                continue
            if all(dot(a, sol) <= b for a, b in zip(rows, bs)):
                verts.add(sol)
        if not verts:
            raise ValueError("halfspace intersection is empty")
        hs = _canonical_halfspaces(rows, bs)
        d = affine_dim(sorted(verts))
        return Polytope(n, tuple(sorted(verts)), hs, d, degenerate=d < n)


def _canonical_halfspaces(rows, bs):
    out = set()
    for a, b in zip(rows, bs):
        if all(x == 0 for x in a):
            continue
        p = primitive(a)
        scale = _frac(p[next(i for i, x in enumerate(p) if x != 0)]) / a[
            next(i for i, x in enumerate(a) if x != 0)
        ]
        out.add((p, b * scale))
    return tuple(sorted(out))


def _recession_nontrivial(rows: list[Vec], n: int) -> bool:
    """Is there d != 0 with <a_i, d> <= 0 for all i?  Exact, n <= 3."""
    if n == 1:
        for s in (Fraction(1), Fraction(-1)):
            if all(a[0] * s <= 0 for a in rows):
                return True
        return False
    if len(rows) < n:
        return True
    # candidate extreme ray directions come from (n-1)-subsets of normals
    cands: list[Vec] = []
    for idx in itertools.combinations(range(len(rows)), n - 1):
        for d in nullspace([rows[i] for i in idx], n):
            cands.append(d)
            cands.append(tuple(-x for x in d))
    for d in cands:
        if any(x != 0 for x in d) and all(dot(a, d) <= 0 for a in rows):
            return True
    return False


def hull(points: Sequence[Sequence]) -> Polytope:
    """Exact convex hull for n <= 3.

    Lower-dimensional input is not an error: the result keeps its affine
    hull as equality pairs in the H-representation and is flagged via
    `degenerate` (vertices are still the true extreme points).
    """
    pts = sorted(set(vec(p) for p in points))
    if not pts:
        raise ValueError("hull of an empty point set")
    n = len(pts[0])
    if n > 3:
        raise ValueError("hull is only supported for n <= 3")
    d = affine_dim(pts)
    if d == 0:
        hs = []
        p = pts[0]
        for i in range(n):
            e = tuple(1 if j == i else 0 for j in range(n))
            hs.append((e, p[i]))
            hs.append((tuple(-x for x in e), -p[i]))
        return Polytope(n, (p,), tuple(sorted(hs)), 0, degenerate=n > 0)
    if d < n:
        return _hull_degenerate(pts, n, d)
    return _hull_fulldim(pts, n)


def _hull_fulldim(pts: list[Vec], n: int) -> Polytope:
    facets: set[tuple[tuple[int, ...], Fraction]] = set()
    for idx in itertools.combinations(range(len(pts)), n):
        base = pts[idx[0]]
        diffs = [tuple(a - b for a, b in zip(pts[i], base)) for i in idx[1:]]
        ns = nullspace(diffs, n)
        if len(ns) != 1:
            continue  # affinely dependent subset
        a = ns[0]
        b = dot(a, base)
        vals = [dot(a, p) - b for p in pts]
        if all(v <= 0 for v in vals):
            facets.add((primitive(a), b * _prim_scale(a)))
        elif all(v >= 0 for v in vals):
            na = tuple(-x for x in a)
            facets.add((primitive(na), -b * _prim_scale(na)))
    verts = []
    for p in pts:
        tight = [a for a, b in facets if dot(a, p) == b]
        if mat_rank(tight) == n:
            verts.append(p)
    return Polytope(n, tuple(verts), tuple(sorted(facets)), n, degenerate=False)


def _prim_scale(a: Vec) -> Fraction:
    """Factor s with primitive(a) == s * a (s > 0)."""
    p = primitive(a)
    i = next(i for i, x in enumerate(p) if x != 0)
    return _frac(p[i]) / _frac(a[i])


def _hull_degenerate(pts: list[Vec], n: int, d: int) -> Polytope:
    """Hull of points spanning a d < n dimensional affine subspace."""
    p0 = pts[0]
    diffs = [tuple(a - b for a, b in zip(p, p0)) for p in pts[1:]]
    # pick d independent direction rows
    basis: list[Vec] = []
    for df in diffs:
        if mat_rank(basis + [df]) > len(basis):
            basis.append(df)
        if len(basis) == d:
            break
    # coordinates within the affine hull: choose d columns where basis is invertible
    for cols in itertools.combinations(range(n), d):
        sq = [[row[c] for c in cols] for row in basis]
        if mat_det(sq) != 0:
            break
    else:  # pragma: no cover - cannot happen if rank is d
        raise ValueError("no invertible coordinate projection found")

    def coords(p: Vec) -> Vec:
        rhs = [p[c] - p0[c] for c in cols]
        lam = solve_square([[basis[j][c] for j in range(d)] for c in cols], rhs)
        assert lam is not None
        return lam

    inner = hull([coords(p) for p in pts]) if d > 0 else None
    assert inner is not None
    lift = {coords(p): p for p in pts}
    verts = tuple(lift[v] for v in inner.vertices)

    hs: list[tuple[tuple[int, ...], Fraction]] = []
    # affine-hull equalities: normals orthogonal to every direction
    for a in nullspace(basis, n):
        pa = primitive(a)
        b = dot(pa, p0)
        hs.append((pa, b))
        hs.append((tuple(-x for x in pa), -b))
    # facet inequalities pulled back through the coordinate chart:
    # inner facet <c, lam> <= b  with  lam = Minv (p - p0)|cols
    minv_rows = _inverse([[basis[j][c] for j in range(d)] for c in cols])
    for c_in, b_in in inner.halfspaces:
        # covector on ambient space: A_k = sum_j c_j * Minv[j][?]  via selected cols
        amb = [Fraction(0)] * n
        for j in range(d):
            coef = sum(_frac(c_in[i]) * minv_rows[i][j] for i in range(d))
            amb[cols[j]] += coef
        a_t = tuple(amb)
        if all(x == 0 for x in a_t):
            continue
        bb = _frac(b_in) + dot(a_t, p0)
        hs.append((primitive(a_t), bb * _prim_scale(a_t)))
    return Polytope(n, verts, tuple(sorted(set(hs))), d, degenerate=True)


def _inverse(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(rows)
    out = []
    for j in range(n):
        rhs = [Fraction(1) if i == j else Fraction(0) for i in range(n)]
        col = solve_square(rows, rhs)
        assert col is not None
        out.append(list(col))
    # out holds columns; transpose into row-major inverse
    return [[out[j][i] for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# lattice point enumeration
# ---------------------------------------------------------------------------

def lattice_points(poly: Polytope, d: int = 1) -> list[Vec]:
    """Points of poly in the (1/d)-refined lattice, in lexicographic order.

    d=1 gives ordinary lattice points.  The scan is a bounding-box sweep
    with exact membership tests, so the order is deterministic.
    """
    if d < 1:
        raise ValueError("refinement d must be a positive integer")
    box = poly.bounding_box()
    ranges = [range(ceil(lo * d), floor(hi * d) + 1) for lo, hi in box]
    out: list[Vec] = []
    dd = Fraction(d)
    for tup in itertools.product(*ranges):
        # integer comparison <a, k> <= d*b avoids building Fractions in the hot loop
        ok = True
        for a, b in poly.halfspaces:
            s = sum(ai * ki for ai, ki in zip(a, tup))
            if s > b * d:
                ok = False
                break
        if ok:
            out.append(tuple(Fraction(k) / dd for k in tup))
    return out


def interior_lattice_points(poly: Polytope, d: int = 1) -> list[Vec]:
    """Strictly interior points of the (1/d)-lattice; needs full dimension."""
    if poly.degenerate or poly.dim < poly.n:
        raise LowerDimensional("interior of a lower-dimensional polytope is empty")
    if d < 1:
        raise ValueError("refinement d must be a positive integer")
    box = poly.bounding_box()
    ranges = [range(ceil(lo * d), floor(hi * d) + 1) for lo, hi in box]
    out: list[Vec] = []
    dd = Fraction(d)
    for tup in itertools.product(*ranges):
        ok = True
        for a, b in poly.halfspaces:
            s = sum(ai * ki for ai, ki in zip(a, tup))
            if s >= b * d:
                ok = False
                break
        if ok:
            out.append(tuple(Fraction(k) / dd for k in tup))
    return out


# ---------------------------------------------------------------------------
# fans and support functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Fan:
    """Rational fan given by primitive rays and maximal cones (ray indices)."""

    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        cones = tuple(tuple(sorted(int(i) for i in c)) for c in self.max_cones)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", cones)
        if not rays:
            raise MalformedFan("fan needs at least one ray")
        n = len(rays[0])
        if any(len(r) != n for r in rays):
            raise MalformedFan("rays have inconsistent dimensions")
        for r in rays:
            if all(x == 0 for x in r):
                raise MalformedFan("zero vector is not a valid ray")
            g = 0
            for x in r:
                g = gcd(g, abs(x))
            if g != 1:
                raise MalformedFan(f"ray {r} is not primitive")
        if len(set(rays)) != len(rays):
            raise MalformedFan("duplicate rays")
        for c in cones:
            if len(set(c)) != len(c):
                raise MalformedFan(f"cone {c} repeats a ray index")
            if any(i < 0 or i >= len(rays) for i in c):
                raise MalformedFan(f"cone {c} references a missing ray")
        if not cones:
            raise MalformedFan("fan needs at least one maximal cone")

    @property
    def n(self) -> int:
        return len(self.rays[0])

    def cone_matrix(self, cone: Sequence[int]) -> list[tuple[int, ...]]:
        return [self.rays[i] for i in cone]

    def is_complete(self) -> bool:
        """Does the fan support cover all of R^n?  Exact test for n <= 3.

        n=1: both half-lines present.  n=2: the maximal cones must be
        exactly the consecutive pairs of the cyclically ordered rays.
        n=3: every ridge (shared ray pair spanning a 2-plane boundary of a
        cone) must be shared by exactly two maximal cones.
        """
        n = self.n
        if n == 1:
            dirs = {1 if r[0] > 0 else -1 for r in self.rays}
            used = {self.rays[c[0]][0] > 0 for c in self.max_cones}
            return dirs == {1, -1} and len(used) == 2
        if n == 2:
            order = sorted(
                range(len(self.rays)),
                key=cmp_to_key(lambda i, j: _ray_cmp(self.rays[i], self.rays[j])),
            )
            expected = set()
            k = len(order)
            for j in range(k):
                a, b = order[j], order[(j + 1) % k]
                expected.add(tuple(sorted((a, b))))
            have = {tuple(sorted(c)) for c in self.max_cones}
            if have != expected:
                return False
            # each consecutive cone must be salient (angle < pi), i.e. det != 0
            for a, b in have:
                if mat_det([self.rays[a], self.rays[b]]) == 0:
                    return False
            return True
        if n == 3:
            from collections import Counter

            ridges: Counter = Counter()
            for c in self.max_cones:
                if len(c) != 3:
                    return False
                for pair in itertools.combinations(c, 2):
                    ridges[tuple(sorted(pair))] += 1
            return bool(ridges) and all(v == 2 for v in ridges.values())
        raise ValueError("completeness test implemented for n <= 3 only")


def _ray_cmp(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    """Exact counterclockwise comparison of 2d integer directions (no trig).

    Angle zero is the positive x-axis; ties cannot occur between distinct
    primitive rays.
    """
    ha = 0 if (a[1] > 0 or (a[1] == 0 and a[0] > 0)) else 1
    hb = 0 if (b[1] > 0 or (b[1] == 0 and b[0] > 0)) else 1
    if ha != hb:
        return ha - hb
    cross = a[0] * b[1] - a[1] * b[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def is_smooth(fan: Fan) -> bool:
    """Every maximal cone is unimodular (ray matrix determinant +-1)."""
    n = fan.n
    for c in fan.max_cones:
        if len(c) != n:
            raise MalformedFan(f"maximal cone {c} does not have {n} rays")
        d = mat_det(fan.cone_matrix(c))
        if d not in (1, -1):
            return False
    return True


def support_convexity(fan: Fan, phi: Sequence) -> tuple[str, tuple[int, int] | None]:
    """Classify the piecewise-linear support function determined by phi.

    Returns ("strict", None), ("weak", witness) or ("nonconvex", witness)
    where witness names (cone index, other cone index) for the first pair
    violating strictness / convexity.
    """
    if len(phi) != len(fan.rays):
        raise MalformedFan("phi must assign one value per ray")
    vals = [_frac(p) for p in phi]
    grads = []
    for c in fan.max_cones:
        m = solve_square(fan.cone_matrix(c), [vals[i] for i in c])
        if m is None:
            raise MalformedFan(f"cone {c} is degenerate (rays do not span)")
        grads.append(m)
    kind = "strict"
    witness = None
    for ci, (c, m) in enumerate(zip(fan.max_cones, grads)):
        for ri, ray in enumerate(fan.rays):
            if ri in c:
                continue
            val = dot(m, ray)
            other = next(cj for cj, cc in enumerate(fan.max_cones) if ri in cc)
            if val > vals[ri]:
                return "nonconvex", (ci, other)
            if val == vals[ri] and kind == "strict":
                # the graph is flat across this wall: convex but not strictly
                kind = "weak"
                witness = (ci, other)
    return kind, witness


def polytope_from_bundle(fan: Fan, phi: Sequence) -> Polytope:
    """Moment polytope {y : <v_i, y> <= phi(v_i)} of a support function.

    Raises Unbounded when the fan is not complete and NotConvex when phi is
    not even weakly convex.  A weakly-(but not strictly-)convex phi gives a
    degenerate polytope, which is returned flagged rather than rejected.
    """
    if not fan.is_complete():
        raise Unbounded("fan is not complete; moment polytope would be unbounded")
    kind, witness = support_convexity(fan, phi)
    if kind == "nonconvex":
        raise NotConvex(
            f"support function not convex across cone pair {witness[0]} and {witness[1]}"
        )
    vals = [_frac(p) for p in phi]
    return Polytope.from_halfspaces(list(fan.rays), vals)
