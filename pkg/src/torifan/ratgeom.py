"""Exact rational convex geometry.

A polytope is an intersection of rational halfspaces
``{m : <m, normal> >= -offset}`` in Q^n.  Everything here runs on
:class:`fractions.Fraction` and Python integers; no floating point enters any
predicate or measure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations
from math import factorial, gcd, lcm

from torifan.errors import DegeneratePolytope, UnboundedPolytope

Point = tuple  # tuple[Fraction, ...]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class HalfSpace:
    """The set ``{m : <m, normal> >= -offset}``."""

    normal: tuple
    offset: Fraction

    def __post_init__(self):
        normal = tuple(_frac(c) for c in self.normal)
        if not any(normal):
            raise ValueError("halfspace normal must be nonzero")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", _frac(self.offset))

    def value_at(self, point) -> Fraction:
        """Slack ``<point, normal> + offset``; nonnegative inside."""
        return sum(a * x for a, x in zip(self.normal, point)) + self.offset


class Polytope:
    """Immutable H-representation with write-once caches.

    Vertex enumeration and triangulation results are cached on the instance;
    the cached assignments are idempotent, so concurrent recomputation is
    harmless.
    """

    def __init__(self, ambient_dim, halfspaces):
        if ambient_dim < 1:
            raise ValueError("ambient dimension must be at least 1")
        halfspaces = tuple(halfspaces)
        for h in halfspaces:
            if len(h.normal) != ambient_dim:
                raise ValueError("halfspace dimension mismatch")
        self.ambient_dim = ambient_dim
        self.halfspaces = halfspaces
        self._int_rows = None
        self._vertices = None
        self._volume = None
        self._barycenter = None

    def __repr__(self):
        return f"Polytope(dim={self.ambient_dim}, facets<={len(self.halfspaces)})"

    def integer_rows(self):
        """Halfspaces as primitive integer rows ``(a, b)`` with <a,x>+b >= 0."""
        if self._int_rows is None:
            rows = []
            for h in self.halfspaces:
                scale = lcm(*(c.denominator for c in h.normal), h.offset.denominator)
                a = tuple(int(c * scale) for c in h.normal)
                b = int(h.offset * scale)
                g = gcd(*a, b)
                if g > 1:
                    a = tuple(c // g for c in a)
                    b //= g
                rows.append((a, b))
            self._int_rows = tuple(rows)
        return self._int_rows


# ---------------------------------------------------------------------------
# exact linear algebra on small matrices


def det(rows) -> Fraction:
    """Determinant by fraction-free style Gaussian elimination."""
    n = len(rows)
    m = [[_frac(x) for x in row] for row in rows]
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        p = m[col][col]
        result *= p
        for r in range(col + 1, n):
            f = m[r][col] / p
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return sign * result


def solve_square(rows, rhs):
    """Solve an n x n rational system exactly; None when singular."""
    n = len(rows)
    m = [[_frac(x) for x in row] + [_frac(rhs[i])] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        p = m[col][col]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col] / p
                for c in range(col, n + 1):
                    m[r][c] -= f * m[col][c]
    return tuple(m[i][n] / m[i][i] for i in range(n))


def matrix_rank(rows) -> int:
    m = [[_frac(x) for x in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col] / p
                for c in range(col, ncols):
                    m[r][c] -= f * m[rank][c]
        rank += 1
        if rank == len(m):
            break
    return rank


def nullspace(rows, ncols):
    """Basis of the rational nullspace of a matrix given as rows."""
    m = [[_frac(x) for x in row] for row in rows]
    pivots = {}
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        m[rank] = [x / p for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        pivots[col] = rank
        rank += 1
    basis = []
    for col in range(ncols):
        if col in pivots:
            continue
        vec = [Fraction(0)] * ncols
        vec[col] = Fraction(1)
        for pcol, prow in pivots.items():
            vec[pcol] = -m[prow][col]
        basis.append(tuple(vec))
    return basis


def affine_rank(points) -> int:
    """Dimension of the affine span of a point set."""
    pts = list(points)
    if len(pts) <= 1:
        return 0
    base = pts[0]
    return matrix_rank([[x - b for x, b in zip(p, base)] for p in pts[1:]])


# ---------------------------------------------------------------------------
# vertex enumeration


def _candidate_vertices(rows, n):
    """Feasible intersections of n facet hyperplanes, deduplicated."""
    found = set()
    for subset in combinations(rows, n):
        point = solve_square([r[0] for r in subset], [-r[1] for r in subset])
        if point is None:
            continue
        if all(sum(a * x for a, x in zip(row[0], point)) + row[1] >= 0 for row in rows):
            found.add(point)
    return found


def _recession_ray(rows, n):
    """A ray of the recession cone {Ax >= 0}, or None when the cone is {0}.

    Assumes the cone is pointed (A has full column rank): any nonzero ray
    cone contains an extreme ray, and extreme rays are tight on n-1
    independent rows.
    """
    a_rows = [r[0] for r in rows]
    for subset in combinations(a_rows, n - 1):
        basis = nullspace(subset, n)
        if len(basis) != 1:
            continue
        d = basis[0]
        if all(sum(a * x for a, x in zip(row, d)) >= 0 for row in a_rows):
            return d
        neg = tuple(-x for x in d)
        if all(sum(a * x for a, x in zip(row, neg)) >= 0 for row in a_rows):
            return neg
    return None


def _feasible(rows, n) -> bool:
    """Exact feasibility of {<a_i, x> + b_i >= 0}.

    Columns outside a maximal independent set contribute nothing new to the
    range of A, so feasibility can be decided on the pivot columns alone,
    where the recession cone is pointed and candidate scanning is complete.
    """
    a_rows = [r[0] for r in rows]
    m = [[_frac(x) for x in row] for row in a_rows]
    pivot_cols = []
    rank = 0
    for col in range(n):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col] / p
                for c in range(n):
                    m[r][c] -= f * m[rank][c]
        pivot_cols.append(col)
        rank += 1
    if rank == 0:
        return all(r[1] >= 0 for r in rows)
    reduced = [(tuple(row[0][c] for c in pivot_cols), row[1]) for row in rows]
    return bool(_candidate_vertices(reduced, rank))


def enumerate_vertices(poly: Polytope):
    """All vertices of a bounded polytope, sorted lexicographically.

    Raises :class:`UnboundedPolytope` when the feasible set is unbounded;
    returns an empty tuple when it is empty.
    """
    if poly._vertices is None:
        poly._vertices = tuple(_enumerate(poly))
    return poly._vertices


def _enumerate(poly):
    n = poly.ambient_dim
    rows = poly.integer_rows()
    lines = nullspace([r[0] for r in rows], n)
    if lines:
        if _feasible(rows, n):
            raise UnboundedPolytope(lines[0])
        return ()
    candidates = _candidate_vertices(rows, n)
    if not candidates:
        # pointed recession cone: a nonempty set would have a vertex
        return ()
    ray = _recession_ray(rows, n)
    if ray is not None:
        raise UnboundedPolytope(ray)
    return tuple(sorted(candidates))


def contains(poly: Polytope, point) -> bool:
    """Exact membership test."""
    if len(point) != poly.ambient_dim:
        raise ValueError("point dimension mismatch")
    pt = tuple(_frac(x) for x in point)
    return all(h.value_at(pt) >= 0 for h in poly.halfspaces)


def is_full_dimensional(poly: Polytope) -> bool:
    return affine_rank(enumerate_vertices(poly)) == poly.ambient_dim


def polytopes_equal(p: Polytope, q: Polytope) -> bool:
    """Set equality via mutual vertex containment."""
    if p.ambient_dim != q.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return all(contains(q, v) for v in enumerate_vertices(p)) and all(
        contains(p, v) for v in enumerate_vertices(q)
    )


# ---------------------------------------------------------------------------
# triangulation, volume, barycenter


def _ccw_order(points):
    """Vertices of a polygon in counterclockwise order around their mean."""
    k = len(points)
    cx = sum(p[0] for p in points) / k
    cy = sum(p[1] for p in points) / k

    def half(p):
        dx, dy = p[0] - cx, p[1] - cy
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    def compare(p, q):
        hp, hq = half(p), half(q)
        if hp != hq:
            return hp - hq
        cross = (p[0] - cx) * (q[1] - cy) - (q[0] - cx) * (p[1] - cy)
        if cross > 0:
            return -1
        if cross < 0:
            return 1
        return 0

    return sorted(points, key=cmp_to_key(compare))


def _facet_substitution(rows, facet_row, n):
    """Substitute the equality of ``facet_row`` and drop one coordinate.

    Returns ``(sub_rows, lift)`` where ``sub_rows`` describe the facet in
    R^(n-1) and ``lift`` maps facet points back to R^n.
    """
    a, b = facet_row
    k = next(i for i, c in enumerate(a) if c != 0)
    keep = [i for i in range(n) if i != k]
    ak = Fraction(a[k])

    def lift(y):
        xk = (-b - sum(a[j] * y[i] for i, j in enumerate(keep))) / ak
        full = list(y[:])
        full.insert(k, xk)
        return tuple(full)

    sub_rows = []
    for c, d in rows:
        if (c, d) == (a, b):
            continue
        factor = Fraction(c[k], a[k])
        new_c = tuple(Fraction(c[j]) - factor * a[j] for j in keep)
        new_d = Fraction(d) - factor * b
        if not any(new_c):
            continue  # parallel to the facet plane; redundant or the facet itself
        sub_rows.append((new_c, new_d))
    return sub_rows, lift


def _rows_to_polytope(rows, dim):
    hs = [HalfSpace(tuple(_frac(c) for c in a), _frac(b)) for a, b in rows]
    return Polytope(dim, hs)


def facet_rows(poly: Polytope):
    """Deduplicated integer rows that support facets of a full-dim polytope."""
    verts = enumerate_vertices(poly)
    n = poly.ambient_dim
    seen = set()
    facets = []
    for a, b in poly.integer_rows():
        if (a, b) in seen:
            continue
        seen.add((a, b))
        tight = [v for v in verts if sum(c * x for c, x in zip(a, v)) + b == 0]
        if affine_rank(tight) == n - 1:
            facets.append((a, b))
    return facets


def facet_halfspaces(poly: Polytope):
    """The facet-supporting constraints as HalfSpace values."""
    return tuple(
        HalfSpace(tuple(_frac(c) for c in a), _frac(b))
        for a, b in facet_rows(poly)
    )


def fan_triangulation(poly: Polytope, base=None):
    """Triangulate a full-dimensional polytope by coning from one vertex.

    Returns a list of simplices, each a tuple of ambient_dim + 1 vertices.
    The result is empty when the polytope is not full-dimensional.
    """
    verts = enumerate_vertices(poly)
    n = poly.ambient_dim
    if affine_rank(verts) < n:
        return []
    if base is None:
        base = verts[0]
    else:
        base = tuple(_frac(x) for x in base)
        if base not in verts:
            raise ValueError("base point is not a vertex")
    if n == 1:
        return [(verts[0], verts[-1])]
    if n == 2:
        cycle = _ccw_order(verts)
        i = cycle.index(base)
        cycle = cycle[i:] + cycle[:i]
        return [(base, cycle[j], cycle[j + 1]) for j in range(1, len(cycle) - 1)]
    simplices = []
    for facet in facet_rows(poly):
        a, b = facet
        if sum(c * x for c, x in zip(a, base)) + b == 0:
            continue  # base lies on this facet; it contributes no cone
        sub_rows, lift = _facet_substitution(list(poly.integer_rows()), facet, n)
        sub_poly = _rows_to_polytope(sub_rows, n - 1)
        for simplex in fan_triangulation(sub_poly):
            simplices.append((base,) + tuple(lift(v) for v in simplex))
    return simplices


def simplex_volume(simplex) -> Fraction:
    n = len(simplex) - 1
    base = simplex[0]
    rows = [[x - b for x, b in zip(v, base)] for v in simplex[1:]]
    return abs(det(rows)) / factorial(n)


def volume(poly: Polytope) -> Fraction:
    """Lebesgue measure; zero for empty or lower-dimensional sets."""
    if poly._volume is None:
        poly._volume = sum(
            (simplex_volume(s) for s in fan_triangulation(poly)), Fraction(0)
        )
    return poly._volume


def barycenter(poly: Polytope):
    """Volume-weighted centroid; requires positive volume."""
    if poly._barycenter is None:
        simplices = fan_triangulation(poly)
        total = Fraction(0)
        acc = [Fraction(0)] * poly.ambient_dim
        for s in simplices:
            v = simplex_volume(s)
            if v == 0:
                continue
            total += v
            k = len(s)
            for i in range(poly.ambient_dim):
                acc[i] += v * sum(p[i] for p in s) / k
        if total == 0:
            raise DegeneratePolytope("barycenter of a zero-volume polytope")
        poly._barycenter = tuple(c / total for c in acc)
    return poly._barycenter


# ---------------------------------------------------------------------------
# polytope constructors


def slice_polytope(poly: Polytope, axis: int, value) -> Polytope:
    """Intersect with {x_axis = value} and drop that coordinate."""
    n = poly.ambient_dim
    if n < 2:
        raise ValueError("slicing needs ambient dimension at least 2")
    if not 0 <= axis < n:
        raise ValueError("axis out of range")
    value = _frac(value)
    keep = [i for i in range(n) if i != axis]
    hs = []
    infeasible = False
    for h in poly.halfspaces:
        new_normal = tuple(h.normal[i] for i in keep)
        new_offset = h.offset + h.normal[axis] * value
        if not any(new_normal):
            if new_offset < 0:
                infeasible = True
            continue
        hs.append(HalfSpace(new_normal, new_offset))
    if infeasible or not hs:
        # constant constraint violated (or no constraints left): empty slice
        e1 = (Fraction(1),) + (Fraction(0),) * (n - 2)
        neg = tuple(-c for c in e1)
        hs = [HalfSpace(e1, Fraction(-1)), HalfSpace(neg, Fraction(0))]
    return Polytope(n - 1, hs)


def truncate(poly: Polytope, axis: int, lo=None, hi=None) -> Polytope:
    """Intersect with the slab {lo <= x_axis <= hi}; None leaves a side open."""
    n = poly.ambient_dim
    if not 0 <= axis < n:
        raise ValueError("axis out of range")
    if lo is not None and hi is not None and _frac(lo) > _frac(hi):
        raise ValueError("truncation needs lo <= hi")
    unit = [Fraction(0)] * n
    unit[axis] = Fraction(1)
    hs = list(poly.halfspaces)
    if lo is not None:
        hs.append(HalfSpace(tuple(unit), -_frac(lo)))
    if hi is not None:
        hs.append(HalfSpace(tuple(-c for c in unit), _frac(hi)))
    return Polytope(n, hs)


def translate(poly: Polytope, vector) -> Polytope:
    """Shift the polytope by a rational vector."""
    if len(vector) != poly.ambient_dim:
        raise ValueError("vector dimension mismatch")
    v = tuple(_frac(x) for x in vector)
    hs = [
        HalfSpace(h.normal, h.offset - sum(a * x for a, x in zip(h.normal, v)))
        for h in poly.halfspaces
    ]
    return Polytope(poly.ambient_dim, hs)
