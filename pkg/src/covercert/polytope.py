"""Exact rational polytope geometry.

A :class:`Polytope` is a bounded, full-dimensional convex body carried in
both representations:

* vertices: the minimal list of extreme points (rational n-vectors),
* halfspaces: the irredundant facet inequalities ``<a, x> <= b``.

Either representation may be supplied; the other is derived on demand and
cached.  All conversions are exact.  Vertex enumeration is done by solving
every n-subset of facet equations (basic-solution enumeration); facets are
recovered from vertices through the polar body.  This is quadratic-ish in the
face counts but exact and entirely adequate at desk scale (n <= ~6).

Volumes are computed by the classic cone-over-facets triangulation from the
lexicographically smallest vertex, recursing on facets after an exact
coordinate-drop chart.

A small floating-point side path (:class:`FloatPolytope`,
:func:`general_section`) supports sections with non-coordinate subspaces,
whose frames are irrational; it is the only inexact code here and everything
it produces is flagged as such.
"""

from __future__ import annotations

import json
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np
from gmpy2 import mpq

from .errors import (
    DimensionTooLarge,
    EmptyPolytope,
    EmptySection,
    FullDimRequired,
    IllConditionedBasis,
    MissingRepresentation,
    UnboundedPolytope,
    ZeroNotInterior,
)
from .linprog import LPStatus, solve_lp
from .rationals import dot, factorial, rat, rat_str, vec

#: conversions refuse to run above this dimension unless overridden
DEFAULT_DIMENSION_CAP = 10


# ---------------------------------------------------------------------------
# exact linear algebra helpers


def _solve_square(rows, rhs):
    """Solve the square rational system, or return None if singular."""
    n = len(rhs)
    M = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        prow = M[col]
        inv = 1 / prow[col]
        M[col] = prow = [v * inv for v in prow]
        for i in range(n):
            if i != col and M[i][col] != 0:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], prow)]
    return tuple(M[i][n] for i in range(n))


def _rank(vectors) -> int:
    rows = [list(v) for v in vectors]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        inv = 1 / prow[col]
        prow = rows[rank] = [v * inv for v in prow]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def _det(rows) -> mpq:
    n = len(rows)
    M = [list(r) for r in rows]
    det = mpq(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col] != 0), None)
        if piv is None:
            return mpq(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        inv = 1 / M[col][col]
        prow = [v * inv for v in M[col]]
        for i in range(col + 1, n):
            if M[i][col] != 0:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], prow)]
    return det


def _normalize_halfspace(a, b):
    """Scale (a, b) by a positive rational so entries are coprime integers."""
    from gmpy2 import gcd, mpz

    dens = [x.denominator for x in a] + [b.denominator]
    L = mpz(1)
    for d in dens:
        L = L * d // gcd(L, d)
    ai = [x * L for x in a]
    bi = b * L
    g = mpz(0)
    for x in ai:
        g = gcd(g, x.numerator)
    g = gcd(g, bi.numerator)
    if g > 1:
        ai = [x / g for x in ai]
        bi = bi / g
    return tuple(ai), bi


# ---------------------------------------------------------------------------
# representation conversion primitives


def _enum_vertices(halfspaces, dim):
    """All vertices of {x : <a,x> <= b} by basic-solution enumeration.

    Assumes the region is bounded (callers check via LP first).
    """
    m = len(halfspaces)
    if m < dim:
        return ()
    A = [hs[0] for hs in halfspaces]
    b = [hs[1] for hs in halfspaces]
    seen = set()
    out = []
    for combo in combinations(range(m), dim):
        x = _solve_square([A[i] for i in combo], [b[i] for i in combo])
        if x is None or x in seen:
            continue
        if all(dot(A[i], x) <= b[i] for i in range(m)):
            seen.add(x)
            out.append(x)
    out.sort()
    return tuple(out)


def _facets_from_points(points, dim):
    """Irredundant facet list of conv(points) for a full-dimensional hull.

    Works through the polar body anchored at the vertex centroid, so the
    input may contain non-extreme points (they only add redundant polar
    constraints).
    """
    k = len(points)
    c = tuple(sum(p[j] for p in points) / k for j in range(dim))
    shifted = [tuple(p[j] - c[j] for j in range(dim)) for p in points]
    polar_hs = [(w, mpq(1)) for w in shifted]
    polar_verts = _enum_vertices(polar_hs, dim)
    facets = []
    for y in polar_verts:
        # <y, x - c> <= 1  ->  <y, x> <= 1 + <y, c>
        facets.append(_normalize_halfspace(vec(y), 1 + dot(y, c)))
    facets.sort()
    return tuple(facets)


def _extreme_points(points, facets, dim):
    """Filter `points` down to the vertices of their hull, given its facets."""
    out = []
    for p in points:
        tight = [a for a, b in facets if dot(a, p) == b]
        if len(tight) >= dim and _rank(tight) == dim:
            out.append(tuple(p))
    out.sort()
    return tuple(out)


# ---------------------------------------------------------------------------
# triangulation volume


def _triangulate(points, dim):
    """Triangulate conv(points) (full-dim, points = hull vertices).

    Returns simplices as (dim+1)-tuples of indices into `points`.  The
    recursion cones from the lexicographically smallest vertex over every
    facet avoiding it; facets are triangulated in an exact coordinate-drop
    chart, which is an affine isomorphism on the facet hyperplane and hence
    preserves the hull combinatorics.
    """
    npts = len(points)
    if dim == 1:
        imin = min(range(npts), key=lambda i: points[i])
        imax = max(range(npts), key=lambda i: points[i])
        return [(imin, imax)]
    if npts == dim + 1:
        return [tuple(range(npts))]
    facets = _facets_from_points(points, dim)
    apex = min(range(npts), key=lambda i: points[i])
    simplices = []
    for a, b in facets:
        if dot(a, points[apex]) == b:
            continue
        tight = [i for i in range(npts) if dot(a, points[i]) == b]
        drop = next(j for j in range(dim) if a[j] != 0)
        proj = [
            tuple(points[i][j] for j in range(dim) if j != drop) for i in tight
        ]
        for sub in _triangulate(proj, dim - 1):
            simplices.append((apex,) + tuple(tight[k] for k in sub))
    return simplices


def _simplex_volume(points, simplex, dim):
    base = points[simplex[0]]
    rows = [
        [points[i][j] - base[j] for j in range(dim)] for i in simplex[1:]
    ]
    return abs(_det(rows)) / factorial(dim)


# ---------------------------------------------------------------------------


class Polytope:
    """Bounded full-dimensional rational polytope with dual representations."""

    __slots__ = ("dim", "_vertices", "_halfspaces", "_volume")

    def __init__(self, dim, vertices=None, halfspaces=None):
        if vertices is None and halfspaces is None:
            raise MissingRepresentation("need vertices or halfspaces")
        self.dim = dim
        self._vertices = vertices
        self._halfspaces = halfspaces
        self._volume = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_vertices(cls, points: Iterable[Sequence]) -> "Polytope":
        pts = sorted(set(vec(p) for p in points))
        if not pts:
            raise EmptyPolytope("no vertices given")
        dim = len(pts[0])
        if any(len(p) != dim for p in pts):
            raise ValueError("inconsistent vertex dimensions")
        base = pts[0]
        if _rank([tuple(p[j] - base[j] for j in range(dim)) for p in pts[1:]]) < dim:
            raise FullDimRequired(
                f"vertex set spans an affine subspace of dimension < {dim}"
            )
        facets = _facets_from_points(pts, dim)
        verts = _extreme_points(pts, facets, dim)
        return cls(dim, vertices=verts, halfspaces=facets)

    @classmethod
    def from_halfspaces(
        cls,
        halfspaces: Iterable,
        dim: int,
        *,
        cap: int = DEFAULT_DIMENSION_CAP,
        _trusted_bounded: bool = False,
    ) -> "Polytope":
        hs = []
        for a, b in halfspaces:
            hs.append((vec(a), rat(b)))
        if dim > cap:
            raise DimensionTooLarge(f"dim {dim} exceeds cap {cap}")
        if not _trusted_bounded:
            _check_bounded_feasible(hs, dim)
        verts = _enum_vertices(hs, dim)
        if not verts:
            raise EmptyPolytope("halfspace region has no vertices")
        base = verts[0]
        if _rank([tuple(v[j] - base[j] for j in range(dim)) for v in verts[1:]]) < dim:
            raise FullDimRequired("halfspace region is not full-dimensional")
        # Every facet appears (up to positive scaling) among the inputs; an
        # input is a facet iff its tight vertex set is (dim-1)-dimensional.
        facets = set()
        for a, b in hs:
            tight = [v for v in verts if dot(a, v) == b]
            if not tight:
                continue
            t0 = tight[0]
            diffs = [tuple(v[j] - t0[j] for j in range(dim)) for v in tight[1:]]
            if len(tight) >= dim and _rank(diffs) == dim - 1:
                facets.add(_normalize_halfspace(a, b))
        facets = tuple(sorted(facets))
        return cls(dim, vertices=verts, halfspaces=facets)

    # -- representations ---------------------------------------------------

    @property
    def vertices(self):
        if self._vertices is None:
            raise MissingRepresentation("vertices not materialized; use convert()")
        return self._vertices

    @property
    def halfspaces(self):
        if self._halfspaces is None:
            raise MissingRepresentation("halfspaces not materialized; use convert()")
        return self._halfspaces

    def convert(self, *, cap: int = DEFAULT_DIMENSION_CAP) -> "Polytope":
        """Materialize both representations (idempotent)."""
        if self.dim > cap:
            raise DimensionTooLarge(f"dim {self.dim} exceeds cap {cap}")
        if self._vertices is not None and self._halfspaces is not None:
            return self
        if self._vertices is not None:
            p = Polytope.from_vertices(self._vertices)
        else:
            p = Polytope.from_halfspaces(self._halfspaces, self.dim, cap=cap)
        self._vertices = p._vertices
        self._halfspaces = p._halfspaces
        return self

    # -- predicates --------------------------------------------------------

    def contains(self, point) -> bool:
        y = vec(point)
        self.convert()
        return all(dot(a, y) <= b for a, b in self._halfspaces)

    def has_zero_interior(self) -> bool:
        """True iff 0 is in the (strict) interior, i.e. every offset > 0."""
        self.convert()
        return all(b > 0 for _, b in self._halfspaces)

    def support(self, u) -> mpq:
        """Support function h(u) = max <u, v> over vertices."""
        self.convert()
        return max(dot(u, v) for v in self._vertices)

    # -- metric operations -------------------------------------------------

    def volume(self) -> mpq:
        if self._volume is None:
            self.convert()
            pts = self._vertices
            total = mpq(0)
            for simplex in _triangulate(pts, self.dim):
                total += _simplex_volume(pts, simplex, self.dim)
            self._volume = total
        return self._volume

    def minkowski_functional(self, y) -> mpq:
        """||y||_K = min{t > 0 : y in tK}; requires 0 interior."""
        if not self.has_zero_interior():
            raise ZeroNotInterior("Minkowski functional needs 0 in int(K)")
        y = vec(y)
        best = mpq(0)
        for a, b in self._halfspaces:
            r = dot(a, y) / b
            if r > best:
                best = r
        return best

    def coordinate_section(self, indices: Sequence[int]) -> "Polytope":
        """Section with span{e_j : j in indices}, in the |indices| coordinates.

        indices are 0-based here; the CLI layer translates from 1-based.
        Raises EmptySection when the section has empty interior in the
        subspace (callers that only need a volume treat that as 0).
        """
        self.convert()
        idx = sorted(set(indices))
        d = len(idx)
        sub = []
        for a, b in self._halfspaces:
            ar = tuple(a[j] for j in idx)
            if all(x == 0 for x in ar):
                if b < 0:
                    raise EmptySection("section infeasible")
                continue
            sub.append((ar, b))
        try:
            # A section of a bounded body is bounded; skip the LP check.
            return Polytope.from_halfspaces(sub, d, _trusted_bounded=True)
        except (EmptyPolytope, FullDimRequired, UnboundedPolytope) as e:
            raise EmptySection(str(e)) from e

    def section_volume(self, indices: Sequence[int]) -> mpq:
        """|K ∩ F_sigma|, with degenerate sections reported as 0."""
        idx = sorted(set(indices))
        if len(idx) == self.dim:
            return self.volume()
        try:
            return self.coordinate_section(idx).volume()
        except EmptySection:
            return mpq(0)

    def coordinate_projection(self, indices: Sequence[int]) -> "Polytope":
        """Orthogonal projection onto span{e_j : j in indices} (0-based)."""
        self.convert()
        idx = sorted(set(indices))
        if len(idx) == self.dim:
            return self
        pts = [tuple(v[j] for j in idx) for v in self._vertices]
        return Polytope.from_vertices(pts)

    def projection_volume(self, indices: Sequence[int]) -> mpq:
        return self.coordinate_projection(indices).volume()

    # -- affine images (test and certificate plumbing) ----------------------

    def translate(self, t) -> "Polytope":
        t = vec(t)
        self.convert()
        return Polytope.from_vertices(
            [tuple(v[j] + t[j] for j in range(self.dim)) for v in self._vertices]
        )

    def linear_image(self, matrix) -> "Polytope":
        """Image under an invertible rational matrix (rows of `matrix`)."""
        M = [vec(row) for row in matrix]
        self.convert()
        return Polytope.from_vertices(
            [tuple(dot(row, v) for row in M) for v in self._vertices]
        )

    def permute_coordinates(self, perm: Sequence[int]) -> "Polytope":
        """Relabel coordinates: new coordinate i reads old coordinate perm[i]."""
        self.convert()
        return Polytope.from_vertices(
            [tuple(v[perm[i]] for i in range(self.dim)) for v in self._vertices]
        )

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        self.convert()
        return {
            "dim": self.dim,
            "vertices": [[rat_str(x) for x in v] for v in self._vertices],
            "halfspaces": [
                {"a": [rat_str(x) for x in a], "b": rat_str(b)}
                for a, b in self._halfspaces
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "Polytope":
        verts = data.get("vertices")
        hs = data.get("halfspaces")
        if verts is None and hs is None:
            raise MissingRepresentation("polytope JSON needs vertices or halfspaces")
        dim = data.get("dim")
        if verts is not None:
            p = cls.from_vertices([vec(v) for v in verts])
        else:
            parsed = [(vec(h["a"]), rat(h["b"])) for h in hs]
            if dim is None:
                dim = len(parsed[0][0])
            p = cls.from_halfspaces(parsed, dim)
        if dim is not None and p.dim != dim:
            raise ValueError(f"declared dim {dim} != actual dim {p.dim}")
        if verts is not None and hs is not None:
            parsed = [(vec(h["a"]), rat(h["b"])) for h in hs]
            given = {_normalize_halfspace(a, b) for a, b in parsed}
            derived = set(p.halfspaces)
            for a, b in given:
                if any(dot(a, v) > b for v in p.vertices):
                    raise ValueError("vertices violate a declared halfspace")
            if not derived <= given:
                raise ValueError("declared halfspaces miss a facet of the hull")
        return p

    @classmethod
    def from_json(cls, text: str) -> "Polytope":
        return cls.from_dict(json.loads(text))

    def __eq__(self, other):
        if not isinstance(other, Polytope):
            return NotImplemented
        self.convert()
        other.convert()
        return self.dim == other.dim and self._vertices == other._vertices

    def __hash__(self):
        self.convert()
        return hash((self.dim, self._vertices))

    def __repr__(self):
        nv = len(self._vertices) if self._vertices is not None else "?"
        nh = len(self._halfspaces) if self._halfspaces is not None else "?"
        return f"Polytope(dim={self.dim}, vertices={nv}, facets={nh})"


def _check_bounded_feasible(hs, dim):
    A = [h[0] for h in hs]
    b = [h[1] for h in hs]
    for j in range(dim):
        for sign in (1, -1):
            c = [mpq(0)] * dim
            c[j] = mpq(sign)
            res = solve_lp(c, A_ub=A, b_ub=b, maximize=True)
            if res.status is LPStatus.INFEASIBLE:
                raise EmptyPolytope("halfspace region is empty")
            if res.status is LPStatus.UNBOUNDED:
                raise UnboundedPolytope(f"region unbounded in direction {sign}*e{j}")


# ---------------------------------------------------------------------------
# floating-point path for non-coordinate subspaces


class FloatPolytope:
    """Halfspace-only float polytope; every result it feeds is inexact."""

    exact = False

    def __init__(self, A: np.ndarray, b: np.ndarray):
        self.A = np.asarray(A, dtype=float)
        self.b = np.asarray(b, dtype=float)
        self.dim = self.A.shape[1]

    def volume(self) -> float:
        from scipy.optimize import linprog as _lp
        from scipy.spatial import ConvexHull, HalfspaceIntersection

        A, b, d = self.A, self.b, self.dim
        if d == 1:
            ub = np.min(b[A[:, 0] > 1e-14] / A[A[:, 0] > 1e-14, 0])
            lb = np.max(b[A[:, 0] < -1e-14] / A[A[:, 0] < -1e-14, 0])
            return max(0.0, ub - lb)
        # Chebyshev center for a strictly interior point.
        norms = np.linalg.norm(A, axis=1)
        res = _lp(
            c=np.r_[np.zeros(d), -1.0],
            A_ub=np.c_[A, norms],
            b_ub=b,
            bounds=[(None, None)] * d + [(0, None)],
            method="highs",
        )
        if not res.success or res.x[-1] <= 1e-12:
            return 0.0
        center = res.x[:d]
        hsi = HalfspaceIntersection(np.c_[A, -b], center)
        return float(ConvexHull(hsi.intersections).volume)


def general_section(
    p: Polytope, basis: np.ndarray, *, ortho_tol: float = 1e-12
) -> FloatPolytope:
    """Float section {y : basis^T y in P} for an orthonormal row basis.

    The rows of `basis` (shape d x n) must be orthonormal within `ortho_tol`.
    """
    B = np.asarray(basis, dtype=float)
    if B.ndim != 2 or B.shape[1] != p.dim:
        raise IllConditionedBasis("basis must be d x n")
    G = B @ B.T
    if not np.allclose(G, np.eye(B.shape[0]), atol=max(ortho_tol, 1e-12) * 10):
        raise IllConditionedBasis("basis rows are not orthonormal")
    p.convert()
    A = np.array([[float(x) for x in a] for a, _ in p.halfspaces])
    b = np.array([float(bb) for _, bb in p.halfspaces])
    An = A @ B.T
    keep = np.linalg.norm(An, axis=1) > 1e-13
    return FloatPolytope(An[keep], b[keep])
