"""Newton-Okounkov bodies for torus-invariant flags.

For a flag of invariant subvarieties picked inside one maximal cone, the
valuation vector of a section is an affine unimodular image of its lattice
point: pair with the ordered rays of the cone and shift by the divisor
coefficients.  The body is that image of the section polytope, so it lives in
the nonnegative orthant and has the same volume.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from torifan import ratgeom, ratpoly
from torifan.errors import ThresholdExceeded, ValidationError
from torifan.ratgeom import HalfSpace, Polytope
from torifan.toric import TDivisor, ToricVariety, _int_matrix_inverse, require_big


@dataclass(frozen=True)
class FlagSpec:
    """Complete flag of invariant subvarieties at one fixed point.

    ``ray_order`` lists the cone's ray indices; the divisor of the first ray
    is the top flag element, and the flag point is the fixed point of the
    whole cone.
    """

    variety: ToricVariety
    cone_index: int
    ray_order: tuple

    def __post_init__(self):
        cone = self.variety.max_cones[self.cone_index]
        order = tuple(int(i) for i in self.ray_order)
        if sorted(order) != sorted(cone):
            raise ValidationError(
                f"flag order {order} is not a permutation of cone {cone}"
            )
        object.__setattr__(self, "ray_order", order)


def default_flag(variety: ToricVariety, cone_index: int) -> FlagSpec:
    return FlagSpec(variety, cone_index, variety.max_cones[cone_index])


class OkounkovBody:
    """Valuation image of a section polytope; exact H-representation."""

    def __init__(self, divisor, flag, polytope: Polytope):
        self.divisor = divisor
        self.flag = flag
        self.polytope = polytope
        for v in ratgeom.enumerate_vertices(polytope):
            assert all(c >= 0 for c in v), "body must lie in the orthant"

    @classmethod
    def from_polytope(cls, polytope: Polytope) -> "OkounkovBody":
        """Wrap a bare orthant polytope for slice and cone analysis."""
        return cls(None, None, polytope)

    @property
    def dim(self):
        return self.polytope.ambient_dim

    def vertices(self):
        return ratgeom.enumerate_vertices(self.polytope)

    def volume(self) -> Fraction:
        return ratgeom.volume(self.polytope)

    def contains_origin(self) -> bool:
        return ratgeom.contains(self.polytope, (Fraction(0),) * self.dim)

    def max_first_coordinate(self) -> Fraction:
        return max(v[0] for v in self.vertices())


def okounkov_body(divisor: TDivisor, flag: FlagSpec) -> OkounkovBody:
    """Image of the section polytope under the flag's valuation coordinates."""
    if divisor.variety is not flag.variety:
        raise ValidationError("flag and divisor live on different varieties")
    require_big(divisor)
    variety = divisor.variety
    n = variety.dim
    rows = [variety.rays[i] for i in flag.ray_order]
    shift = [Fraction(divisor.coeffs[i]) for i in flag.ray_order]
    inv = _int_matrix_inverse(rows)  # inverse of the matrix with those rows
    halfspaces = []
    for ray, a in zip(variety.rays, divisor.coeffs):
        # <u, m> >= -a becomes <M^-T u, nu> >= -a + <M^-T u, shift>
        normal = tuple(
            sum(inv[j][i] * ray[j] for j in range(n)) for i in range(n)
        )
        offset = Fraction(a) - sum(
            Fraction(c) * s for c, s in zip(normal, shift)
        )
        halfspaces.append(HalfSpace(tuple(Fraction(c) for c in normal), offset))
    return OkounkovBody(divisor, flag, Polytope(n, halfspaces))


def pseff_threshold(divisor: TDivisor, flag: FlagSpec) -> Fraction:
    """Largest t with divisor - t*D_top still big: the body's nu_1 reach."""
    require_big(divisor)
    top = flag.ray_order[0]
    ray = divisor.variety.rays[top]
    verts = ratgeom.enumerate_vertices(divisor.section_polytope())
    reach = max(sum(c * u for c, u in zip(v, ray)) for v in verts)
    return Fraction(divisor.coeffs[top]) + reach


def translation_identity_check(divisor: TDivisor, flag: FlagSpec, t) -> bool:
    """Truncating the body at nu_1 >= t equals the body of D - t*D_top + t e_1."""
    t = Fraction(t)
    tau = pseff_threshold(divisor, flag)
    if not 0 <= t < tau:
        raise ThresholdExceeded(f"need 0 <= t < {tau}, got {t}")
    body = okounkov_body(divisor, flag)
    truncated = ratgeom.truncate(body.polytope, 0, lo=t)
    top = flag.ray_order[0]
    coeffs = list(divisor.coeffs)
    coeffs[top] -= t
    shifted_body = okounkov_body(TDivisor(divisor.variety, coeffs), flag)
    vector = (t,) + (Fraction(0),) * (body.dim - 1)
    translated = ratgeom.translate(shifted_body.polytope, vector)
    return ratgeom.polytopes_equal(truncated, translated)


def nef_by_origin(divisor: TDivisor) -> bool:
    """Nef test through origin membership at every fixed point's body."""
    require_big(divisor)
    variety = divisor.variety
    for cone_index in variety.fixed_points():
        body = okounkov_body(divisor, default_flag(variety, cone_index))
        if not body.contains_origin():
            return False
    return True


# ---------------------------------------------------------------------------
# slice profiles and concavity


@dataclass(frozen=True)
class SliceProfile:
    """r -> (n-1)-volume of the nu_1 = r slice, piecewise polynomial.

    Piece i is the polynomial on [breakpoints[i], breakpoints[i+1]].
    """

    dim: int  # ambient dimension n of the body
    breakpoints: tuple
    pieces: tuple

    @property
    def support(self):
        return (self.breakpoints[0], self.breakpoints[-1])

    def value(self, r) -> Fraction:
        r = Fraction(r)
        if not self.pieces or r < self.breakpoints[0] or r > self.breakpoints[-1]:
            return Fraction(0)
        for i in range(len(self.pieces)):
            if r <= self.breakpoints[i + 1]:
                return ratpoly.evaluate(self.pieces[i], r)
        raise AssertionError("unreachable")

    def integral(self) -> Fraction:
        return sum(
            (
                ratpoly.integrate(p, self.breakpoints[i], self.breakpoints[i + 1])
                for i, p in enumerate(self.pieces)
            ),
            Fraction(0),
        )

    def integral_to(self, x) -> Fraction:
        """Integral of the profile from the support start up to x."""
        x = Fraction(x)
        total = Fraction(0)
        for i, p in enumerate(self.pieces):
            lo, hi = self.breakpoints[i], self.breakpoints[i + 1]
            if x <= lo:
                break
            total += ratpoly.integrate(p, lo, min(hi, x))
        return total


def slice_profile(body: OkounkovBody) -> SliceProfile:
    """Exact slice areas: degree <= n-1 between vertex levels, interpolated."""
    n = body.dim
    verts = body.vertices()
    levels = sorted({v[0] for v in verts})
    if n == 1:
        return SliceProfile(
            dim=1,
            breakpoints=(levels[0], levels[-1]),
            pieces=((Fraction(1),),),
        )

    def area_at(r):
        return ratgeom.volume(ratgeom.slice_polytope(body.polytope, 0, r))

    if len(levels) == 1:
        # degenerate body inside one hyperplane; zero slice area
        return SliceProfile(dim=n, breakpoints=(levels[0], levels[0]), pieces=())
    pieces = []
    for i in range(len(levels) - 1):
        lo, hi = levels[i], levels[i + 1]
        nodes = [lo + (hi - lo) * Fraction(j, n - 1) for j in range(n)]
        pieces.append(ratpoly.interpolate([(r, area_at(r)) for r in nodes]))
    return SliceProfile(dim=n, breakpoints=tuple(levels), pieces=tuple(pieces))


def bm_concavity_check(profile: SliceProfile, samples_per_piece: int = 200) -> bool:
    """Whether A(r)^(1/(n-1)) is concave on the support.

    Exact sign analysis of h = (2-n) A'^2 + (n-1) A A''(the sign of the
    transform's second derivative where A > 0) at piece endpoints and at
    ``samples_per_piece`` rational points per piece, plus continuity,
    positivity and junction-slope checks.  n = 1 bodies have constant slice
    profile and pass trivially.
    """
    if profile.dim == 1:
        return True
    n = profile.dim
    pieces = list(profile.pieces)
    points = list(profile.breakpoints)
    # trim zero pieces at both ends: they only shrink the support
    while pieces and ratpoly.is_zero(pieces[0]):
        pieces.pop(0)
        points.pop(0)
    while pieces and ratpoly.is_zero(pieces[-1]):
        pieces.pop()
        points.pop()
    if not pieces:
        return True
    # interior zero pieces would split the support: not concave
    if any(ratpoly.is_zero(p) for p in pieces):
        return False
    for i, p in enumerate(pieces):
        if not ratpoly.nonnegative_on(p, points[i], points[i + 1]):
            return False  # a signed area is no slice profile
    # continuity and positivity across interior breakpoints
    for i in range(len(pieces) - 1):
        x = points[i + 1]
        left = ratpoly.evaluate(pieces[i], x)
        right = ratpoly.evaluate(pieces[i + 1], x)
        if left != right:
            return False
        if left == 0:
            return False  # interior zero between positive stretches
    # interior roots of a piece dent the support
    for i, p in enumerate(pieces):
        lo, hi = points[i], points[i + 1]
        if lo == hi or ratpoly.is_zero(p):
            continue
        q = ratpoly._strip_root(
            ratpoly._strip_root(ratpoly.squarefree(p), lo), hi
        )
        if ratpoly.count_roots(q, lo, hi) > 0:
            return False
    # per-piece sign of the transformed second derivative
    for i, p in enumerate(pieces):
        lo, hi = points[i], points[i + 1]
        dp = ratpoly.derivative(p)
        ddp = ratpoly.derivative(dp)
        h = ratpoly.add(
            ratpoly.scale(ratpoly.multiply(dp, dp), 2 - n),
            ratpoly.scale(ratpoly.multiply(p, ddp), n - 1),
        )
        steps = samples_per_piece + 1
        for j in range(steps + 1):
            x = lo + (hi - lo) * Fraction(j, steps)
            if ratpoly.evaluate(h, x) > 0:
                return False
    # junction slopes: the density may only flatten going right
    return all(_slope_drop_ok(pieces, points, i) for i in range(len(pieces) - 1))


def _slope_drop_ok(pieces, points, i):
    x = points[i + 1]
    left = ratpoly.evaluate(ratpoly.derivative(pieces[i]), x)
    right = ratpoly.evaluate(ratpoly.derivative(pieces[i + 1]), x)
    return left >= right


def cone_structure_check(body: OkounkovBody, a) -> bool:
    """Is the truncation to nu_1 <= a the cone over the nu_1 = a slice.

    The cone {lambda v : lambda in [0,1], v in slice} is cut out by
    homogenizing every body halfspace against the slice level.
    """
    a = Fraction(a)
    if a <= 0:
        raise ValueError("cone check needs a positive level")
    n = body.dim
    truncated = ratgeom.truncate(body.polytope, 0, lo=0, hi=a)
    cone_halfspaces = []
    e1 = (Fraction(1),) + (Fraction(0),) * (n - 1)
    cone_halfspaces.append(HalfSpace(e1, Fraction(0)))
    cone_halfspaces.append(HalfSpace(tuple(-c for c in e1), a))
    for h in body.polytope.halfspaces:
        normal = tuple(
            a * c + (h.offset if i == 0 else 0) for i, c in enumerate(h.normal)
        )
        if not any(normal):
            continue  # constraint degenerates to 0 >= 0
        cone_halfspaces.append(HalfSpace(normal, Fraction(0)))
    cone = Polytope(n, cone_halfspaces)
    return ratgeom.polytopes_equal(truncated, cone)


def segment_membership_check(body: OkounkovBody, a) -> bool:
    """Does the body contain the segment from the origin to a*e_1."""
    a = Fraction(a)
    zero = (Fraction(0),) * (body.dim - 1)
    return all(
        ratgeom.contains(body.polytope, (x,) + zero)
        for x in (Fraction(0), a / 2, a)
    )
