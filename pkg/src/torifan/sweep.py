"""Ample-cone sweeps: score every grid class against the (n+1)^n bound.

The sweep evaluates beta^n * Vol on integer coefficient vectors in
{1..resolution}^(#rays), deduplicated projectively (gcd 1) since the score
is scale invariant.  Per variety everything shape-dependent is precomputed
once into a skeleton of integer tables:

  - wall rows: D.C_w as an integer functional of the coefficients,
  - vertex maps: the cone vertex m_sigma as an integer matrix times the
    cone's coefficients,
  - a pulling triangulation of the section polytope, stored as tuples of
    cone indices.  Built from the face lattice alone (facet recursion with
    lowest-index pivots), so the same tuples triangulate P_D for every
    ample D.

Two interchangeable engines consume the skeleton: a compiled one for
surfaces and threefolds (torifan._sweepcore, built from Cython) and a pure
Python one for any dimension.  TORIFAN_SWEEP_ENGINE=pure|cython|auto
overrides the default choice.  The compiled engine is only used when
precomputed magnitude bounds show its 128-bit intermediates cannot
overflow; otherwise the pure engine runs.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

from torifan import _sweep_pure, invariants
from torifan.errors import EmptyGrid, ValidationError, VerificationError
from torifan.toric import ToricVariety, _int_matrix_inverse

ENGINE_ENV = "TORIFAN_SWEEP_ENGINE"


def _pulling_triangulation(variety: ToricVariety):
    """Triangulate the dual polytope combinatorially, as cone-index tuples.

    Faces of P_D correspond to cones of the fan (a face spanned by rays S
    has the vertices m_sigma with S inside sigma).  Pulling from the
    lowest-index vertex cone depends only on this lattice, so the output is
    one triangulation valid for all ample D.
    """
    cones = [frozenset(c) for c in variety.max_cones]
    n = variety.dim
    memo = {}

    def pull(face):
        if face in memo:
            return memo[face]
        holders = [j for j, cn in enumerate(cones) if face <= cn]
        if len(face) == n:
            out = [(holders[0],)]
        else:
            pivot = holders[0]
            spanned = set()
            for j in holders:
                spanned.update(cones[j])
            out = []
            for rho in sorted(spanned - face):
                if rho in cones[pivot]:
                    continue  # the pivot vertex lies on that facet
                out.extend(
                    (pivot,) + s for s in pull(face | frozenset((rho,)))
                )
        memo[face] = out
        return out

    return tuple(pull(frozenset()))


def build_skeleton(variety: ToricVariety) -> dict:
    """Integer tables driving the per-sample arithmetic."""
    n = variety.dim
    r = variety.n_rays
    wall_rows = []
    wall_k = []
    for wall in variety.walls:
        row = [0] * r
        row[wall.opp_a] += 1
        row[wall.opp_b] += 1
        for i, b in zip(wall.rays, wall.relation):
            row[i] += b
        wall_rows.append(tuple(row))
        wall_k.append(sum(row))
    cone_matrices = []
    for cone in variety.max_cones:
        rows = [variety.rays[i] for i in cone]
        inv = _int_matrix_inverse(rows)
        cone_matrices.append(tuple(tuple(-x for x in row) for row in inv))
    return {
        "dim": n,
        "rays": variety.rays,
        "walls": tuple(wall_rows),
        "wall_k": tuple(wall_k),
        "cone_indices": variety.max_cones,
        "cone_matrices": tuple(cone_matrices),
        "simplices": _pulling_triangulation(variety),
    }


def _compiled_module():
    try:
        from torifan import _sweepcore
    except ImportError:
        return None
    return _sweepcore


def _compiled_bounds_ok(skel, resolution):
    """All 128-bit intermediates of the compiled engine stay below 2^126."""
    n = skel["dim"]
    r = len(skel["rays"])
    res = resolution
    mc = max(
        sum(abs(x) for x in row) * res
        for mat in skel["cone_matrices"]
        for row in mat
    )
    umax = max(abs(x) for ray in skel["rays"] for x in ray)
    smax = max(
        sum(abs(w) for w in row) * res for row in skel["walls"]
    )
    kmax = max(abs(k) for k in skel["wall_k"]) or 1
    # volume is monotone in every coefficient, so the all-res corner bounds it
    vol_bound = _volume_of_sample(skel, (res,) * r)
    t_bound = (n + 1) * vol_bound * (mc * n * umax + res)
    beta_num = max(kmax, (n + 1) * vol_bound)
    beta_den = max(smax, t_bound, 1)
    limit = 1 << 126
    products = [
        6 * (2 * mc) ** 3,
        kmax * max(t_bound, smax),
        (n + 1) * vol_bound * smax,
        vol_bound ** (n + 1),
        t_bound**n,
        beta_num**n * vol_bound,
        (n + 1) ** n * beta_den**n,
    ]
    return all(p < limit for p in products)


def _volume_of_sample(skel, coeffs):
    n = skel["dim"]
    verts = []
    for idx, mat in zip(skel["cone_indices"], skel["cone_matrices"]):
        cs = [coeffs[i] for i in idx]
        verts.append(
            tuple(sum(row[j] * cs[j] for j in range(n)) for row in mat)
        )
    total = 0
    for simplex in skel["simplices"]:
        base = verts[simplex[0]]
        rows = [[verts[s][i] - base[i] for i in range(n)] for s in simplex[1:]]
        total += _sweep_pure._abs_det(rows)
    return total


def select_engine(skel, resolution, engine=None):
    choice = engine or os.environ.get(ENGINE_ENV, "auto")
    if choice not in ("auto", "cython", "pure"):
        raise ValidationError(f"unknown sweep engine {choice!r}")
    if choice == "pure":
        return "pure"
    core = _compiled_module()
    usable = (
        core is not None
        and skel["dim"] in (2, 3)
        and _compiled_bounds_ok(skel, resolution)
    )
    if usable:
        return "cython"
    if choice == "cython":
        raise ValidationError(
            "compiled sweep engine unavailable or unsafe for this input"
        )
    return "pure"


@dataclass(frozen=True)
class SweepResult:
    variety_name: str
    dim: int
    resolution: int
    engine: str
    candidates: int  # projectively deduplicated grid vectors
    ample_samples: int
    extremal_samples: int  # samples meeting the bound exactly
    max_score: Fraction
    argmax_coeffs: tuple
    gap: Fraction
    bound: int
    sample_reports: tuple  # InvariantReport per collected sample, in grid order
    sample_reports_complete: bool


def sweep_ample_cone(
    variety: ToricVariety,
    resolution: int,
    collect_cap: int = 512,
    engine: str | None = None,
) -> SweepResult:
    """Exact score sweep; raises EmptyGrid when no sample is ample."""
    if resolution < 1:
        raise ValidationError("resolution must be at least 1")
    skel = build_skeleton(variety)
    chosen = select_engine(skel, resolution, engine)
    if chosen == "cython":
        raw = _compiled_module().run_sweep(skel, resolution, collect_cap)
    else:
        raw = _sweep_pure.run_sweep(skel, resolution, collect_cap)
    if raw.ample == 0:
        raise EmptyGrid(
            f"no ample sample in {{1..{resolution}}}^{variety.n_rays}"
        )
    check = invariants.score(variety.divisor(raw.argmax))
    if check.score != raw.best:
        raise VerificationError(
            "sweep engine disagrees with the direct invariant computation",
            variety=variety.name,
            sample=raw.argmax,
        )
    bound = (variety.dim + 1) ** variety.dim
    reports = tuple(
        invariants.score(variety.divisor(c)) for c in raw.collected
    )
    return SweepResult(
        variety_name=variety.name,
        dim=variety.dim,
        resolution=resolution,
        engine=chosen,
        candidates=raw.candidates,
        ample_samples=raw.ample,
        extremal_samples=raw.extremal,
        max_score=raw.best,
        argmax_coeffs=raw.argmax,
        gap=Fraction(bound) - raw.best,
        bound=bound,
        sample_reports=reports,
        sample_reports_complete=raw.collect_complete,
    )
