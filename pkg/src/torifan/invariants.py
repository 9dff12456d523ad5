"""Exact invariants of polarized smooth toric Fano varieties.

Everything reduces to rational convex geometry on the section polytope:

* the Seshadri constant is a minimum of wall ratios,
* the expected vanishing order along a ray divisor is a barycenter pairing,
* the stability threshold delta is the reciprocal of the largest expected
  vanishing order over the rays,
* blow-up volume profiles are piecewise polynomials recovered exactly by
  interpolation between the critical values of a linear functional.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from torifan import ratgeom, ratpoly
from torifan.errors import DegeneratePolytope, NotBig, VerificationError
from torifan.toric import (
    Blowup,
    TDivisor,
    ToricVariety,
    blowup_at_fixed_point,
    exceptional,
    pullback,
    require_ample,
    require_big,
    require_nef,
)


def seshadri_constant(divisor: TDivisor) -> Fraction:
    """sup{mu : -K - mu*D nef}: least wall ratio (-K.C)/(D.C)."""
    require_ample(divisor)
    variety = divisor.variety
    antik = variety.anticanonical()
    best = None
    for wall in variety.walls:
        d_val = variety.wall_value(wall, divisor.coeffs)
        if d_val <= 0:
            continue  # cannot happen for ample divisors
        ratio = variety.wall_value(wall, antik.coeffs) / d_val
        if best is None or ratio < best:
            best = ratio
    assert best is not None
    return best


def expected_vanishing_order(divisor: TDivisor, ray_index: int) -> Fraction:
    """Volume-normalized integral of vol(D - x*D_ray): <barycenter, u> + a."""
    require_big(divisor)
    variety = divisor.variety
    if not 0 <= ray_index < variety.n_rays:
        raise ValueError(f"no ray with index {ray_index}")
    center = ratgeom.barycenter(divisor.section_polytope())
    ray = variety.rays[ray_index]
    return sum(c * u for c, u in zip(center, ray)) + divisor.coeffs[ray_index]


def delta_toric(divisor: TDivisor):
    """Stability threshold and its witness ray.

    Over the torus-invariant prime divisors the log discrepancy is 1, so the
    threshold is 1 / max expected vanishing order; ties go to the smallest
    ray index.
    """
    require_big(divisor)
    variety = divisor.variety
    center = ratgeom.barycenter(divisor.section_polytope())
    best = None
    witness = None
    for i, ray in enumerate(variety.rays):
        s = sum(c * u for c, u in zip(center, ray)) + divisor.coeffs[i]
        if best is None or s > best:
            best = s
            witness = i
    assert best is not None and best > 0
    return 1 / best, witness


def greatest_ricci_lower_bound(divisor: TDivisor) -> Fraction:
    """min of the Seshadri constant and the stability threshold."""
    eps = seshadri_constant(divisor)
    delta, _ = delta_toric(divisor)
    return min(eps, delta)


def delta_volume_bound_check(divisor: TDivisor) -> bool:
    """Exact check of delta^n * vol <= (n+1)^n."""
    n = divisor.variety.dim
    delta, _ = delta_toric(divisor)
    return delta**n * divisor.vol() <= Fraction(n + 1) ** n


@dataclass(frozen=True)
class InvariantReport:
    """Exact invariants of one polarized variety."""

    variety: str
    dim: int
    coeffs: tuple
    vol: Fraction
    eps: Fraction
    delta: Fraction
    delta_witness_ray: int
    beta: Fraction
    score: Fraction
    bound: Fraction
    is_extremal: bool


def score(divisor: TDivisor) -> InvariantReport:
    """beta^n * vol together with everything that went into it."""
    require_ample(divisor)
    variety = divisor.variety
    n = variety.dim
    vol = divisor.vol()
    eps = seshadri_constant(divisor)
    delta, witness = delta_toric(divisor)
    beta = min(eps, delta)
    value = beta**n * vol
    bound = Fraction(n + 1) ** n
    return InvariantReport(
        variety=variety.name,
        dim=n,
        coeffs=divisor.coeffs,
        vol=vol,
        eps=eps,
        delta=delta,
        delta_witness_ray=witness,
        beta=beta,
        score=value,
        bound=bound,
        is_extremal=value == bound,
    )


# ---------------------------------------------------------------------------
# volume profiles


@dataclass(frozen=True)
class VolumeProfile:
    """x -> vol(pullback - x*E) as an exact piecewise polynomial on [0, end].

    ``breakpoints`` has one more entry than ``pieces``; piece i is valid on
    [breakpoints[i], breakpoints[i+1]].  Coefficients are Fractions, lowest
    degree first.
    """

    dim: int
    total: Fraction
    breakpoints: tuple
    pieces: tuple

    @property
    def domain_end(self):
        return self.breakpoints[-1]

    def value(self, x) -> Fraction:
        x = Fraction(x)
        if x < 0:
            raise ValueError("profiles live on x >= 0")
        if x >= self.domain_end:
            return Fraction(0)
        for i in range(len(self.pieces)):
            if x <= self.breakpoints[i + 1]:
                return ratpoly.evaluate(self.pieces[i], x)
        raise AssertionError("unreachable")

    def integral(self) -> Fraction:
        return sum(
            ratpoly.integrate(p, self.breakpoints[i], self.breakpoints[i + 1])
            for i, p in enumerate(self.pieces)
        )

    def lower_bound_poly(self):
        """vol - x^n, the Fujita comparison curve."""
        coeffs = [Fraction(0)] * (self.dim + 1)
        coeffs[0] = self.total
        coeffs[self.dim] = Fraction(-1)
        return tuple(coeffs)

    def margin(self, x) -> Fraction:
        x = Fraction(x)
        return self.value(x) - (self.total - x**self.dim)

    def equality_flags(self):
        """Per piece: does it coincide with vol - x^n identically."""
        bound = self.lower_bound_poly()
        return tuple(ratpoly.equal(p, bound) for p in self.pieces)

    def inequality_certificate(self) -> bool:
        """Symbolic proof that value >= vol - x^n holds on every piece."""
        bound = self.lower_bound_poly()
        for i, p in enumerate(self.pieces):
            diff = ratpoly.subtract(p, bound)
            if not ratpoly.nonnegative_on(
                diff, self.breakpoints[i], self.breakpoints[i + 1]
            ):
                return False
        return True

    def monotone_certificate(self) -> bool:
        """Symbolic proof that the profile never increases."""
        for i, p in enumerate(self.pieces):
            neg_slope = tuple(-c for c in ratpoly.derivative(p))
            if not ratpoly.nonnegative_on(
                neg_slope, self.breakpoints[i], self.breakpoints[i + 1]
            ):
                return False
        return True

    def continuity_check(self) -> bool:
        for i in range(len(self.pieces) - 1):
            x = self.breakpoints[i + 1]
            if ratpoly.evaluate(self.pieces[i], x) != ratpoly.evaluate(
                self.pieces[i + 1], x
            ):
                return False
        return True


def _halfspace_drop_profile(polytope, normal, level, dim) -> VolumeProfile:
    """Exact profile of x -> n! vol(P intersect {<m, normal> >= x - level}).

    The volume of a polytope cut by a moving halfspace is polynomial in x of
    degree <= n between consecutive critical values of the linear functional,
    so interpolation at n+1 rational nodes per interval recovers each piece
    exactly.
    """
    verts = ratgeom.enumerate_vertices(polytope)
    if ratgeom.affine_rank(verts) < dim:
        raise NotBig("profile needs a full-dimensional section polytope")
    total = factorial(dim) * ratgeom.volume(polytope)
    values = sorted({sum(c * u for c, u in zip(v, normal)) for v in verts})
    end = level + values[-1]
    cuts = sorted({Fraction(0), end} | {level + v for v in values if 0 < level + v < end})

    def vol_at(x):
        cut = ratgeom.Polytope(
            polytope.ambient_dim,
            polytope.halfspaces
            + (ratgeom.HalfSpace(tuple(Fraction(c) for c in normal), level - x),),
        )
        return factorial(dim) * ratgeom.volume(cut)

    pieces = []
    for i in range(len(cuts) - 1):
        lo, hi = cuts[i], cuts[i + 1]
        nodes = [lo + (hi - lo) * Fraction(j, dim) for j in range(dim + 1)]
        pieces.append(ratpoly.interpolate([(x, vol_at(x)) for x in nodes]))
    profile = VolumeProfile(
        dim=dim, total=total, breakpoints=tuple(cuts), pieces=tuple(pieces)
    )
    assert profile.value(0) == total
    assert profile.continuity_check()
    return profile


def fujita_profile(variety: ToricVariety, cone_index: int, divisor: TDivisor):
    """Volume profile of the pullback minus x times the exceptional divisor.

    Returns ``(profile, blowup)``.  The divisor must be nef and big.
    """
    require_nef(divisor)
    require_big(divisor)
    bl = blowup_at_fixed_point(variety, cone_index)
    cone = variety.max_cones[cone_index]
    a_e = sum(divisor.coeffs[i] for i in cone)
    profile = _halfspace_drop_profile(
        divisor.section_polytope(), bl.e_ray, a_e, variety.dim
    )
    return profile, bl


def vanishing_order_profile(divisor: TDivisor, ray_index: int) -> VolumeProfile:
    """Profile of x -> vol(D - x * D_ray) on the variety itself."""
    require_big(divisor)
    variety = divisor.variety
    return _halfspace_drop_profile(
        divisor.section_polytope(),
        variety.rays[ray_index],
        divisor.coeffs[ray_index],
        variety.dim,
    )


def seshadri_at_point(variety: ToricVariety, cone_index: int, divisor: TDivisor):
    """Seshadri constant at the fixed point: sup{x : pullback - x*E nef}.

    Returns ``(value, blowup)``.
    """
    require_ample(divisor)
    bl = blowup_at_fixed_point(variety, cone_index)
    pulled = pullback(divisor, bl)
    exc = exceptional(bl)
    best = None
    for wall in bl.result.walls:
        e_val = bl.result.wall_value(wall, exc.coeffs)
        if e_val <= 0:
            continue
        ratio = bl.result.wall_value(wall, pulled.coeffs) / e_val
        if best is None or ratio < best:
            best = ratio
    assert best is not None
    return best, bl


# ---------------------------------------------------------------------------
# the inequality chain at a blown-up point


def _int_nth_root(k: int, n: int) -> int:
    """Floor of the n-th root of a nonnegative integer, Newton iteration."""
    if k < 2:
        return k
    x = 1 << ((k.bit_length() + n - 1) // n)
    while True:
        y = ((n - 1) * x + k // x ** (n - 1)) // n
        if y >= x:
            return x
        x = y


def _nth_root_exact(x: Fraction, n: int):
    """Exact n-th root of a positive rational, or None."""
    p = _int_nth_root(x.numerator, n)
    q = _int_nth_root(x.denominator, n)
    if p**n == x.numerator and q**n == x.denominator:
        return Fraction(p, q)
    return None


@dataclass(frozen=True)
class ChainReport:
    """The comparison n >= beta*S(E) >= n*beta*vol^(1/n)/(n+1), exactly.

    ``root`` is the exact vol^(1/n) when rational, else None; the final
    comparison is still exact because it only needs n-th powers.
    """

    dim: int
    vol: Fraction
    beta: Fraction
    s_exceptional: Fraction
    log_discrepancy: Fraction
    first_holds: bool
    second_holds: bool
    all_tight: bool
    root: object

    def final_value_squared_comparison(self):
        """(n*beta*vol^(1/n)/(n+1))^n <= n^n restated without roots."""
        n = self.dim
        lhs = (Fraction(n) * self.beta / (n + 1)) ** n * self.vol
        return lhs, Fraction(n) ** n


def chain_report(profile: VolumeProfile, beta: Fraction) -> ChainReport:
    """Exact evaluation of the vanishing-order chain for one blow-up."""
    n = profile.dim
    vol = profile.total
    s_exc = profile.integral() / vol
    log_disc = Fraction(n)
    first = log_disc >= beta * s_exc
    # beta*S >= n*beta*vol^(1/n)/(n+1), i.e. ((n+1)S/n)^n >= vol
    second = (Fraction(n + 1) * s_exc / n) ** n >= vol
    if not (first and second):
        raise VerificationError(
            "vanishing-order chain failed", sample=(str(beta), str(s_exc))
        )
    root = _nth_root_exact(vol, n)
    tight = (
        log_disc == beta * s_exc
        and (Fraction(n + 1) * s_exc / n) ** n == vol
    )
    return ChainReport(
        dim=n,
        vol=vol,
        beta=beta,
        s_exceptional=s_exc,
        log_discrepancy=log_disc,
        first_holds=first,
        second_holds=second,
        all_tight=tight,
        root=root,
    )
