"""Height functions, coherent subdivisions, and the tropical complex.

The combinatorial half of this module (lower-hull subdivision, Legendre
transform, faces and complement components of the tropical hypersurface) is
exact over Q: facet coplanarity is decided by rational elimination and no
epsilon ever enters.  The quantitative half (distortion constants, the
patchworking scale, Hausdorff distances between point clouds and the
complex) is numerical by nature and uses floats; no combinatorial decision
depends on a float.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .lattice import (
    Fan,
    NotConvex,
    Polytope,
    Vec,
    affine_dim,
    dot,
    mat_det,
    mat_rank,
    primitive,
    solve_square,
    support_convexity,
    vec,
)


class DegenerateSupport(ValueError):
    """The support points do not affinely span R^n."""


class NotTriangulation(ValueError):
    """An operation requiring simplicial cells met a bigger cell."""


class InvalidEps(ValueError):
    """Scale selection called with a non-positive (or senseless) epsilon."""


class EmptyWindow(ValueError):
    """Hausdorff comparison window contains no data on one side."""


# ---------------------------------------------------------------------------
# height functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HeightFunction:
    """Finite support A in Z^n with a rational height nu per point."""

    points: tuple[tuple[int, ...], ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        pts = tuple(tuple(int(x) for x in p) for p in self.points)
        vals = tuple(Fraction(v) for v in self.values)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)
        if len(pts) != len(vals):
            raise ValueError("one height per support point, please")
        if len(set(pts)) != len(pts):
            raise ValueError("support points must be distinct")
        if not pts:
            raise ValueError("empty support")

    @property
    def n(self) -> int:
        return len(self.points[0])

    @classmethod
    def from_bundle(cls, fan: Fan, phi: Sequence) -> "HeightFunction":
        """A = {0} union rays, nu(0) = 0, nu(v_i) = phi(v_i)."""
        zero = (0,) * fan.n
        return cls((zero,) + fan.rays, (Fraction(0),) + tuple(Fraction(p) for p in phi))

    def zero_index(self) -> int | None:
        zero = (0,) * self.n
        return self.points.index(zero) if zero in self.points else None


# ---------------------------------------------------------------------------
# regular subdivisions (exact lower hull)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cell:
    """Full-dimensional lower-hull cell: tie set plus its supporting affine
    function g(x) = <gradient, x> + offset (equal to nu on the tie set,
    strictly below everywhere else)."""

    indices: tuple[int, ...]
    gradient: Vec
    offset: Fraction


@dataclass(frozen=True)
class CoherentSubdivision:
    height: HeightFunction
    cells: tuple[Cell, ...]
    is_triangulation: bool
    is_maximal: bool

    def adjacent_cell_pairs(self) -> list[tuple[int, int]]:
        n = self.height.n
        out = []
        for i, j in itertools.combinations(range(len(self.cells)), 2):
            common = sorted(set(self.cells[i].indices) & set(self.cells[j].indices))
            if common and affine_dim([self.height.points[k] for k in common]) == n - 1:
                out.append((i, j))
        return out

    def edges(self) -> set[frozenset]:
        """1-faces of the subdivision as index pairs (triangulations only)."""
        if not self.is_triangulation:
            raise NotTriangulation("edge enumeration is defined here for triangulations")
        out: set[frozenset] = set()
        for c in self.cells:
            out.update(frozenset(p) for p in itertools.combinations(c.indices, 2))
        return out


def regular_subdivision(h: HeightFunction) -> CoherentSubdivision:
    """Lower-hull subdivision of the lifted points {(alpha, nu(alpha))}.

    A candidate affine function is accepted when it interpolates n+1
    affinely independent lifted points and is nowhere above the lift; the
    cell is its full tie set, so ties stay as bigger (non-simplicial) cells.
    """
    n = h.n
    A = h.points
    nu = h.values
    if affine_dim(A) < n:
        raise DegenerateSupport("support points do not span R^n affinely")
    found: dict[frozenset, tuple[Vec, Fraction]] = {}
    for S in itertools.combinations(range(len(A)), n + 1):
        rows = [list(A[i]) + [1] for i in S]
        sol = solve_square(rows, [nu[i] for i in S])
        if sol is None:
            continue
        m, c = sol[:n], sol[n]
        vals = [dot(m, A[i]) + c for i in range(len(A))]
        if any(vals[i] > nu[i] for i in range(len(A))):
            continue
        tie = frozenset(i for i in range(len(A)) if vals[i] == nu[i])
        if affine_dim([A[i] for i in tie]) == n:
            found[tie] = (tuple(m), c)
    cells = tuple(
        Cell(tuple(sorted(tie)), grad, off)
        for tie, (grad, off) in sorted(found.items(), key=lambda kv: tuple(sorted(kv[0])))
    )
    is_tri = all(len(c.indices) == n + 1 for c in cells)
    is_max = is_tri and all(_unimodular(c, A, n) for c in cells)
    return CoherentSubdivision(h, cells, is_tri, is_max)


def _unimodular(cell: Cell, A, n: int) -> bool:
    anchor = A[cell.indices[0]]
    M = [
        [A[i][k] - anchor[k] for i in cell.indices[1:]]
        for k in range(n)
    ]
    return abs(mat_det(M)) == 1


def check_bundle_subdivision(fan: Fan, phi: Sequence) -> bool:
    """Do the full cells at the origin match conv({0} union cone rays)?

    Only cells containing the origin are compared; cells away from 0 are
    free to differ.  Raises NotConvex for a genuinely non-convex phi.
    """
    kind, witness = support_convexity(fan, phi)
    if kind == "nonconvex":
        raise NotConvex(
            f"support function not convex across cone pair {witness[0]} and {witness[1]}"
        )
    h = HeightFunction.from_bundle(fan, phi)
    subd = regular_subdivision(h)
    zero = 0  # from_bundle puts the origin first
    at_zero = {
        frozenset(c.indices) - {zero} for c in subd.cells if zero in c.indices
    }
    cones = {frozenset(i + 1 for i in c) for c in fan.max_cones}  # ray i -> A index i+1
    return at_zero == cones


# ---------------------------------------------------------------------------
# Legendre transform
# ---------------------------------------------------------------------------

def legendre_value(h: HeightFunction, u: Sequence) -> tuple[Fraction, tuple[tuple[int, ...], ...]]:
    """L_nu(u) = max(<alpha,u> - nu(alpha)) with its full tie set, exactly."""
    uu = vec(u)
    best: Fraction | None = None
    arg: list[tuple[int, ...]] = []
    for p, v in zip(h.points, h.values):
        val = dot(p, uu) - v
        if best is None or val > best:
            best, arg = val, [p]
        elif val == best:
            arg.append(p)
    assert best is not None
    return best, tuple(sorted(arg))


# ---------------------------------------------------------------------------
# the tropical complex
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TropicalFace:
    """Face of the tropical hypersurface, exact H-description.

    dim is the face's own dimension k; the face is dual to the
    (n-k)-dimensional subdivision face spanned by dual_indices.  Points u on
    the face satisfy every listed equality <a,u> = r and inequality
    <a,u> <= r.
    """

    dim: int
    dual_indices: tuple[int, ...]
    equalities: tuple[tuple[tuple[int, ...], Fraction], ...]
    inequalities: tuple[tuple[tuple[int, ...], Fraction], ...]


@dataclass(frozen=True)
class Component:
    """Closure of a unique-maximizer region C_alpha, as an exact H-rep."""

    index: int
    point: tuple[int, ...]
    normals: tuple[tuple[int, ...], ...]
    bounds: tuple[Fraction, ...]
    active: bool  # does alpha lie on the lower hull (touch some cell)?

    def contains(self, u: Sequence, strict: bool = False) -> bool:
        uu = vec(u)
        if strict:
            return all(dot(a, uu) < b for a, b in zip(self.normals, self.bounds))
        return all(dot(a, uu) <= b for a, b in zip(self.normals, self.bounds))


class TropicalComplex:
    """Tropical hypersurface Pi of a height function, with its duality data."""

    def __init__(self, height: HeightFunction):
        self.height = height
        self.subdivision = regular_subdivision(height)
        n = height.n
        A = height.points
        nu = height.values

        # subdivision faces (saturated tie sets), all dimensions
        face_dims: dict[frozenset, int] = {}
        for cell in self.subdivision.cells:
            face_dims[frozenset(cell.indices)] = n
            for f in _cell_proper_faces(cell.indices, A):
                face_dims[f] = affine_dim([A[i] for i in f])

        faces = []
        for S, m in face_dims.items():
            if m < 1:
                continue  # dual would be a full-dimensional component, not a face
            idx = tuple(sorted(S))
            base = idx[0]
            eqs = []
            for other in idx[1:]:
                diff = tuple(A[other][k] - A[base][k] for k in range(n))
                rhs = nu[other] - nu[base]
                eqs.append(_scaled_row(diff, rhs))
            ineqs = []
            for g in range(len(A)):
                if g in S:
                    continue
                diff = tuple(A[g][k] - A[base][k] for k in range(n))
                rhs = nu[g] - nu[base]
                ineqs.append(_scaled_row(diff, rhs))
            faces.append(
                TropicalFace(n - m, idx, tuple(sorted(set(eqs))), tuple(sorted(set(ineqs))))
            )
        faces.sort(key=lambda f: (f.dim, f.dual_indices))
        self.faces: tuple[TropicalFace, ...] = tuple(faces)

        active = set()
        for cell in self.subdivision.cells:
            active.update(cell.indices)
        comps = []
        for i in range(len(A)):
            normals, bounds = [], []
            for j in range(len(A)):
                if j == i:
                    continue
                diff = tuple(A[j][k] - A[i][k] for k in range(n))
                rhs = nu[j] - nu[i]
                normals_j, rhs_j = _scaled_row(diff, rhs)
                normals.append(normals_j)
                bounds.append(rhs_j)
            comps.append(Component(i, A[i], tuple(normals), tuple(bounds), i in active))
        self.components: tuple[Component, ...] = tuple(comps)

    @property
    def n(self) -> int:
        return self.height.n

    def vertices(self) -> list[tuple[Vec, tuple[int, ...]]]:
        """0-faces of Pi with their dual full cells."""
        out = []
        for f in self.faces:
            if f.dim == 0:
                geo = face_geometry(f, self.n)
                assert geo[0] == "point"
                out.append((geo[1], f.dual_indices))
        return out

    def adjacent_component_pairs(self) -> list[tuple[int, int]]:
        """Pairs (i, j) whose components share a facet of Pi."""
        out = set()
        for f in self.faces:
            if f.dim == self.n - 1 and len(f.dual_indices) == 2:
                out.add(tuple(sorted(f.dual_indices)))
        return sorted(out)

    def moment_polytope(self) -> Polytope | None:
        """The bounded component of the origin, as an exact polytope."""
        zi = self.height.zero_index()
        if zi is None:
            return None
        comp = self.components[zi]
        return Polytope.from_halfspaces(list(comp.normals), list(comp.bounds))

    def legendre(self, u: Sequence):
        return legendre_value(self.height, u)


def tropical_complex(h: HeightFunction) -> TropicalComplex:
    return TropicalComplex(h)


def _scaled_row(normal: tuple, rhs: Fraction) -> tuple[tuple[int, ...], Fraction]:
    """Scale <normal, u> (=/<=) rhs so the normal is primitive integer."""
    if all(x == 0 for x in normal):
        raise ValueError("repeated support point produced a zero row")
    p = primitive(normal)
    i = next(k for k, x in enumerate(p) if x != 0)
    s = Fraction(p[i], normal[i])
    return p, rhs * s


def _cell_proper_faces(indices: Sequence[int], A) -> set[frozenset]:
    """All proper faces (every dimension) of conv(A[i] for i in indices).

    Tie sets are saturated: a face carries every support point lying on it.
    """
    from .lattice import hull

    out: set[frozenset] = set()
    stack = [tuple(indices)]
    seen: set[frozenset] = set()
    while stack:
        cur = stack.pop()
        pts = [A[i] for i in cur]
        d = affine_dim(pts)
        if d <= 0:
            continue
        hl = hull(pts)
        for a, b in hl.halfspaces:
            tight = frozenset(i for i in cur if dot(a, A[i]) == b)
            if not tight or tight in seen:
                continue
            if affine_dim([A[i] for i in tight]) == d - 1:
                seen.add(tight)
                out.add(tight)
                stack.append(tuple(sorted(tight)))
    return out


def face_geometry(face: TropicalFace, n: int):
    """Exact geometric realization of a face (n <= 2).

    Returns ("point", p), ("segment", p, q), ("ray", p, direction) or
    ("line", p, direction); None if the face is empty (does not occur for
    faces produced by TropicalComplex).
    """
    if face.dim == 0:
        rows, rhs = [], []
        for a, r in face.equalities:
            if mat_rank(rows + [list(a)]) > len(rows):
                rows.append(list(a))
                rhs.append(r)
            if len(rows) == n:
                break
        sol = solve_square(rows, rhs)
        assert sol is not None
        return ("point", sol)
    if n != 2 or face.dim != 1:
        raise ValueError("geometric realization implemented for n <= 2")
    a, r = face.equalities[0]
    den = Fraction(a[0] * a[0] + a[1] * a[1])
    p0 = (Fraction(a[0]) * r / den, Fraction(a[1]) * r / den)
    d = (Fraction(-a[1]), Fraction(a[0]))
    tlo: Fraction | None = None
    thi: Fraction | None = None
    for g, rr in face.inequalities:
        s = dot(g, d)
        v = rr - dot(g, p0)
        if s == 0:
            if v < 0:
                return None
            continue
        t = v / s
        if s > 0:
            thi = t if thi is None else min(thi, t)
        else:
            tlo = t if tlo is None else max(tlo, t)
    if tlo is not None and thi is not None:
        if tlo > thi:
            return None
        p = tuple(p0[k] + tlo * d[k] for k in range(2))
        q = tuple(p0[k] + thi * d[k] for k in range(2))
        return ("segment", p, q)
    if tlo is None and thi is None:
        return ("line", p0, d)
    if thi is not None:
        base = tuple(p0[k] + thi * d[k] for k in range(2))
        return ("ray", base, tuple(-x for x in d))
    base = tuple(p0[k] + tlo * d[k] for k in range(2))
    return ("ray", base, d)


# ---------------------------------------------------------------------------
# quantitative constants (floats from here on)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TropicalConstants:
    N: int
    rho: float
    c_est: float
    card_A: int
    diameter: float


def project_onto_halfspaces(x0, normals, bounds, iters: int = 50, tol: float = 1e-10):
    """Dykstra's cyclic projection onto an intersection of halfspaces.

    normals: (m, n) array; bounds: (m,) array; returns the projected point.
    Unlike plain alternating projection, Dykstra's correction terms make the
    limit the actual nearest point of the intersection.
    """
    x = np.array(x0, dtype=float)
    nrm = np.asarray(normals, dtype=float)
    bnd = np.asarray(bounds, dtype=float)
    m = len(nrm)
    corr = np.zeros((m, x.size))
    nn = np.einsum("ij,ij->i", nrm, nrm)
    for _ in range(iters):
        shift = 0.0
        for i in range(m):
            y = x + corr[i]
            viol = (nrm[i] @ y - bnd[i]) / nn[i]
            xnew = y - max(viol, 0.0) * nrm[i]
            corr[i] = y - xnew
            shift = max(shift, float(np.max(np.abs(xnew - x))))
            x = xnew
        if shift < tol:
            break
    return x


def tropical_constants(h: HeightFunction, samples: int = 256, seed: int = 0) -> TropicalConstants:
    """Norm bound N, distortion bound rho, and the sampled separation c_est.

    N is the maximum l1 norm over subdivision edge differences and over the
    support points themselves.  rho bounds the length distortion of the
    affine chart of each simplex (max of the two operator norms).  c_est is
    half the smallest sampled ratio d(p, H(alpha,beta)) / d(p, C_alpha)
    over points p in C_beta at offset eps' = 1e-3 * diameter from C_alpha;
    halving keeps the estimate on the safe side of the sampling error.
    """
    subd = regular_subdivision(h)
    if not subd.is_triangulation:
        raise NotTriangulation("constants are defined for triangulated supports")
    A = h.points
    n = h.n
    N = 0
    for e in subd.edges():
        i, j = tuple(e)
        N = max(N, sum(abs(A[i][k] - A[j][k]) for k in range(n)))

    # distortion of the best affine chart per simplex: anchoring at a
    # different vertex changes the edge matrix, so take the anchor whose
    # chart distorts least (this keeps rho translation-invariant)
    rho = 1.0
    for cell in subd.cells:
        pts = [A[i] for i in cell.indices]
        best = math.inf
        for anchor in pts:
            others = [p for p in pts if p != anchor]
            M = np.array([[float(p[k] - anchor[k]) for p in others] for k in range(n)])
            s = np.linalg.svd(M, compute_uv=False)
            best = min(best, max(float(s[0]), float(1.0 / s[-1])))
        rho = max(rho, best)

    cx = TropicalComplex(h)
    verts = [np.array([float(x) for x in v], dtype=float) for v, _ in cx.vertices()]
    if len(verts) >= 2:
        diam = max(
            float(np.linalg.norm(a - b)) for a, b in itertools.combinations(verts, 2)
        )
    else:
        diam = 0.0
    if diam < 1e-9:
        diam = 1.0
    center = np.mean(verts, axis=0) if verts else np.zeros(n)

    rng = np.random.default_rng(seed)
    eps_off = 1e-3 * diam
    ratios: list[float] = []
    for ia, ib in cx.adjacent_component_pairs():
        for a_idx, b_idx in ((ia, ib), (ib, ia)):
            ca, cb = cx.components[a_idx], cx.components[b_idx]
            na = np.array([[float(x) for x in row] for row in ca.normals])
            ba = np.array([float(b) for b in ca.bounds])
            nb = np.array([[float(x) for x in row] for row in cb.normals])
            bb = np.array([float(b) for b in cb.bounds])
            hvec = np.array(
                [float(ca.point[k] - cb.point[k]) for k in range(n)], dtype=float
            )
            hrhs = float(Fraction(h.values[a_idx]) - Fraction(h.values[b_idx]))
            hnorm = float(np.linalg.norm(hvec))
            got = 0
            attempts = 0
            while got < samples and attempts < samples * 60:
                attempts += 1
                x = center + rng.uniform(-1.5 * diam, 1.5 * diam, size=n)
                if np.any(nb @ x - bb > 1e-12):
                    continue  # not in C_beta
                q = project_onto_halfspaces(x, na, ba)
                d_alpha = float(np.linalg.norm(x - q))
                if d_alpha < 1e-9:
                    continue
                p = q + (x - q) * (eps_off / d_alpha)
                if np.any(nb @ p - bb > 1e-9):
                    continue  # left C_beta while stepping toward C_alpha
                d_h = abs(float(hvec @ p) - hrhs) / hnorm
                ratios.append(d_h / eps_off)
                got += 1
    c_est = 0.5 * min(ratios) if ratios else 0.5
    return TropicalConstants(N, rho, c_est, len(A), diam)


def choose_scale(k: TropicalConstants, eps: float) -> float:
    """Smallest t with both decay inequalities satisfied, by bisection on log t.

    The two conditions (with L = log t, c = c_est):
        (e-2)  exp(-c*eps*L) / (eps*L)  <  1 / (40*|A|*rho)
        (e-3)  exp(-c*eps*L)            <  1 / (5*|A|^2*rho*N)
    Both sides are monotone in L, so the feasible set is a half-line; the
    returned t is verified against both inequalities before returning.
    """
    if not (eps > 0) or not math.isfinite(eps):
        raise InvalidEps(f"eps must be positive and finite, got {eps}")
    if k.c_est <= 0:
        raise InvalidEps("separation constant must be positive")
    bound2 = 1.0 / (40.0 * k.card_A * k.rho)
    bound3 = 1.0 / (5.0 * k.card_A**2 * k.rho * k.N)

    def ok(L: float) -> bool:
        e = math.exp(-k.c_est * eps * L)
        return e / (eps * L) < bound2 and e < bound3

    hi = 1.0
    while not ok(hi):
        hi *= 2.0
        if hi > 1e9:
            raise InvalidEps("no feasible scale below exp(1e9); eps too small")
    lo = hi / 2.0
    if ok(lo):
        while ok(lo) and lo > 1e-9:
            hi = lo
            lo /= 2.0
    while (hi - lo) > 1e-6 * hi:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    hi *= 1.0 + 1e-9  # stay strictly feasible through the exp/log round trip
    if hi > 709.0:
        raise InvalidEps("required scale exceeds double precision; eps too small")
    t = math.exp(hi)
    assert ok(math.log(t))
    return t


# ---------------------------------------------------------------------------
# Hausdorff distance between a point cloud and the complex (n = 2)
# ---------------------------------------------------------------------------

def _clip_segment_to_box(p, q, window):
    """Liang-Barsky clipping; returns (p', q') or None."""
    x0, x1, y0, y1 = window
    d = (q[0] - p[0], q[1] - p[1])
    t0, t1 = 0.0, 1.0
    for lo, hi, pp, dd in ((x0, x1, p[0], d[0]), (y0, y1, p[1], d[1])):
        if dd == 0.0:
            if pp < lo or pp > hi:
                return None
            continue
        ta, tb = (lo - pp) / dd, (hi - pp) / dd
        if ta > tb:
            ta, tb = tb, ta
        t0, t1 = max(t0, ta), min(t1, tb)
        if t0 > t1:
            return None
    return (
        (p[0] + t0 * d[0], p[1] + t0 * d[1]),
        (p[0] + t1 * d[0], p[1] + t1 * d[1]),
    )


def complex_segments(cx: TropicalComplex, window, ray_reach: float = 0.0):
    """Float segments realizing Pi inside the window (n = 2 only).

    Rays are truncated far outside the window before clipping, so the
    clipped picture is exact as far as the window can see.
    """
    if cx.n != 2:
        raise ValueError("segment realization needs n = 2")
    x0, x1, y0, y1 = window
    reach = max(abs(x0), abs(x1), abs(y0), abs(y1), ray_reach) * 4.0 + 10.0
    segs = []
    for f in cx.faces:
        if f.dim != 1:
            continue
        geo = face_geometry(f, 2)
        if geo is None:
            continue
        kind = geo[0]
        if kind == "segment":
            p = (float(geo[1][0]), float(geo[1][1]))
            q = (float(geo[2][0]), float(geo[2][1]))
        elif kind == "ray":
            b, d = geo[1], geo[2]
            dn = math.hypot(float(d[0]), float(d[1]))
            p = (float(b[0]), float(b[1]))
            q = (p[0] + reach * float(d[0]) / dn, p[1] + reach * float(d[1]) / dn)
        else:  # line
            b, d = geo[1], geo[2]
            dn = math.hypot(float(d[0]), float(d[1]))
            p = (float(b[0]) - reach * float(d[0]) / dn, float(b[1]) - reach * float(d[1]) / dn)
            q = (float(b[0]) + reach * float(d[0]) / dn, float(b[1]) + reach * float(d[1]) / dn)
        clipped = _clip_segment_to_box(p, q, window)
        if clipped is not None:
            segs.append(clipped)
    return segs


def hausdorff_distance(cloud, cx: TropicalComplex, window, resolution: int = 2000) -> float:
    """Symmetric Hausdorff distance between cloud points and Pi in a window.

    Both directions are computed: sup over cloud points of the distance to
    Pi (exact point-segment distances) and sup over a dense sample of Pi of
    the distance to the cloud (nearest neighbour via a KD-tree).
    """
    from scipy.spatial import cKDTree

    x0, x1, y0, y1 = window
    pts = np.asarray(cloud, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("cloud must be an (N, 2) array")
    mask = (pts[:, 0] >= x0) & (pts[:, 0] <= x1) & (pts[:, 1] >= y0) & (pts[:, 1] <= y1)
    pts = pts[mask]
    if len(pts) == 0:
        raise EmptyWindow("no cloud points inside the window")
    segs = complex_segments(cx, window)
    if not segs:
        raise EmptyWindow("tropical complex does not meet the window")

    # cloud -> Pi
    best = np.full(len(pts), np.inf)
    for p, q in segs:
        pv = np.array(p)
        dv = np.array(q) - pv
        denom = float(dv @ dv)
        if denom == 0.0:
            d = np.linalg.norm(pts - pv, axis=1)
        else:
            t = np.clip(((pts - pv) @ dv) / denom, 0.0, 1.0)
            proj = pv + t[:, None] * dv
            d = np.linalg.norm(pts - proj, axis=1)
        best = np.minimum(best, d)
    d_cloud = float(np.max(best))

    # Pi -> cloud
    diag = math.hypot(x1 - x0, y1 - y0)
    step = diag / max(resolution, 1)
    samples = []
    for p, q in segs:
        length = math.hypot(q[0] - p[0], q[1] - p[1])
        k = max(int(length / step) + 1, 2)
        ts = np.linspace(0.0, 1.0, k)
        samples.append(np.outer(1 - ts, p) + np.outer(ts, q))
    sam = np.vstack(samples)
    tree = cKDTree(pts)
    d_pi = float(np.max(tree.query(sam)[0]))
    return max(d_cloud, d_pi)
