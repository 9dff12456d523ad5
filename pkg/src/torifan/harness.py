"""Catalog-wide commands: theorem verification, gap, blow-up and body reports.

Every verdict here is decided on exact rationals; decimal columns are
display only.  Reports render to CSV or JSON deterministically: fixed row
order, fixed key order, "p/q" rationals, no timestamps.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from torifan import invariants, jsonio
from torifan.catalog import projective_space
from torifan.errors import ValidationError, VerificationError
from torifan.invariants import chain_report, fujita_profile
from torifan.okounkov import (
    bm_concavity_check,
    default_flag,
    okounkov_body,
    pseff_threshold,
    slice_profile,
    translation_identity_check,
)
from torifan.sweep import sweep_ample_cone
from torifan.toric import TDivisor, ToricVariety, fans_isomorphic, require_ample

_fmt = jsonio.format_rational
_dec = jsonio.decimal_string


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# theorem verification and gap reports


@dataclass(frozen=True)
class VerifyReport:
    resolution: int
    results: tuple  # SweepResult per entry, catalog order
    projective: tuple  # matching is-P^n flags

    def csv_text(self) -> str:
        rows = [
            (
                res.variety_name,
                res.dim,
                _fmt(res.max_score),
                _dec(res.max_score),
                _fmt(res.gap),
            )
            for res in self.results
        ]
        return render_csv(
            ("variety", "n", "max_score", "max_score_decimal", "gap"), rows
        )

    def json_dict(self) -> dict:
        return {
            "resolution": self.resolution,
            "entries": [
                {
                    "variety": res.variety_name,
                    "n": res.dim,
                    "engine": res.engine,
                    "candidates": res.candidates,
                    "ample_samples": res.ample_samples,
                    "extremal_samples": res.extremal_samples,
                    "max_score": _fmt(res.max_score),
                    "max_score_decimal": _dec(res.max_score),
                    "argmax": list(res.argmax_coeffs),
                    "gap": _fmt(res.gap),
                    "bound": res.bound,
                    "is_projective_space": pn,
                }
                for res, pn in zip(self.results, self.projective)
            ],
        }


def verify_theorem(catalog, resolution: int, engine=None) -> VerifyReport:
    """Sweep every entry; the bound must be met exactly on P^n alone.

    The per-sample inequalities are enforced inside the sweep engines; a
    violation surfaces as VerificationError with the offending coefficient
    vector.
    """
    results = []
    projective = []
    for variety in catalog:
        res = sweep_ample_cone(variety, resolution, collect_cap=0, engine=engine)
        is_pn = fans_isomorphic(variety, projective_space(variety.dim))
        if is_pn and res.gap != 0:
            raise VerificationError(
                "projective space must attain the bound exactly",
                variety=variety.name,
                sample=res.argmax_coeffs,
            )
        if not is_pn and res.gap <= 0:
            raise VerificationError(
                "only projective space may attain the bound",
                variety=variety.name,
                sample=res.argmax_coeffs,
            )
        results.append(res)
        projective.append(is_pn)
    return VerifyReport(
        resolution=resolution, results=tuple(results), projective=tuple(projective)
    )


@dataclass(frozen=True)
class GapReport:
    resolution: int
    note: str
    rows: tuple  # (dim, epsilon, achieving variety), sorted by dim
    detail: tuple  # (name, dim, max_score, gap, is_projective_space)

    def csv_text(self) -> str:
        rows = [
            (dim, _fmt(eps), _dec(eps), name) for dim, eps, name in self.rows
        ]
        return render_csv(
            ("dimension", "epsilon_toric", "epsilon_decimal", "achieved_by"),
            rows,
        )

    def json_dict(self) -> dict:
        return {
            "resolution": self.resolution,
            "note": self.note,
            "epsilon_toric": [
                {
                    "dimension": dim,
                    "epsilon": _fmt(eps),
                    "epsilon_decimal": _dec(eps),
                    "achieved_by": name,
                }
                for dim, eps, name in self.rows
            ],
            "entries": [
                {
                    "variety": name,
                    "n": dim,
                    "max_score": _fmt(ms),
                    "gap": _fmt(gap),
                    "is_projective_space": pn,
                }
                for name, dim, ms, gap, pn in self.detail
            ],
        }


def gap_report(catalog, resolution: int, dimension=None, engine=None) -> GapReport:
    """Empirical volume-gap margin: smallest gap among non-P^n entries."""
    entries = [
        v for v in catalog if dimension is None or v.dim == dimension
    ]
    detail = []
    best = {}
    for variety in entries:
        res = sweep_ample_cone(variety, resolution, collect_cap=0, engine=engine)
        is_pn = fans_isomorphic(variety, projective_space(variety.dim))
        detail.append(
            (variety.name, variety.dim, res.max_score, res.gap, is_pn)
        )
        if is_pn:
            continue
        held = best.get(variety.dim)
        if held is None or res.gap < held[0]:
            best[variety.dim] = (res.gap, variety.name)
    if not best:
        raise ValidationError(
            "gap report needs at least one entry besides projective space"
        )
    rows = tuple(
        (dim, best[dim][0], best[dim][1]) for dim in sorted(best)
    )
    note = (
        "empirical exploration over the toric catalog at resolution "
        f"{resolution}; a lower-bound witness, not a proof"
    )
    return GapReport(
        resolution=resolution, note=note, rows=rows, detail=tuple(detail)
    )


# ---------------------------------------------------------------------------
# blow-up profile report


@dataclass(frozen=True)
class BlowupReport:
    variety_name: str
    cone_index: int
    exceptional_ray: tuple
    dim: int
    vol: Fraction
    domain_end: Fraction
    breakpoints: tuple
    rows: tuple  # (x, profile value, vol - x^n, margin)
    margin_certified: bool
    monotone_certified: bool
    chain: object

    def csv_text(self) -> str:
        rows = [
            (_fmt(x), _fmt(v), _fmt(lb), _fmt(m)) for x, v, lb, m in self.rows
        ]
        return render_csv(("x", "volume", "lower_bound", "margin"), rows)

    def json_dict(self) -> dict:
        chain = self.chain
        final_lhs, final_rhs = chain.final_value_squared_comparison()
        return {
            "variety": self.variety_name,
            "cone_index": self.cone_index,
            "exceptional_ray": list(self.exceptional_ray),
            "n": self.dim,
            "vol": _fmt(self.vol),
            "domain_end": _fmt(self.domain_end),
            "breakpoints": [_fmt(b) for b in self.breakpoints],
            "margin_certified_nonnegative": self.margin_certified,
            "profile_certified_monotone": self.monotone_certified,
            "chain": {
                "log_discrepancy": _fmt(chain.log_discrepancy),
                "beta": _fmt(chain.beta),
                "s_exceptional": _fmt(chain.s_exceptional),
                "beta_times_s": _fmt(chain.beta * chain.s_exceptional),
                "first_holds": chain.first_holds,
                "second_holds": chain.second_holds,
                "all_tight": chain.all_tight,
                "vol_nth_root": None if chain.root is None else _fmt(chain.root),
                "final_comparison_nth_power": [
                    _fmt(final_lhs),
                    _fmt(final_rhs),
                ],
            },
            "rows": [
                {
                    "x": _fmt(x),
                    "volume": _fmt(v),
                    "lower_bound": _fmt(lb),
                    "margin": _fmt(m),
                }
                for x, v, lb, m in self.rows
            ],
        }


def _sample_points(lo, hi, breakpoints, samples):
    points = set(breakpoints)
    points.add(lo)
    points.add(hi)
    span = hi - lo
    for j in range(samples + 1):
        points.add(lo + span * Fraction(j, samples))
    return sorted(points)


def blowup_command(
    variety: ToricVariety,
    cone_index: int,
    divisor: TDivisor,
    samples: int = 100,
) -> BlowupReport:
    """Fujita profile at a fixed point plus the vanishing-order chain."""
    require_ample(divisor)
    profile, bl = fujita_profile(variety, cone_index, divisor)
    margin_ok = profile.inequality_certificate()
    if not margin_ok:
        raise VerificationError(
            "volume profile dips below vol - x^n",
            variety=variety.name,
            sample=cone_index,
        )
    beta = invariants.greatest_ricci_lower_bound(divisor)
    chain = chain_report(profile, beta)
    xs = _sample_points(
        Fraction(0), profile.domain_end, profile.breakpoints, samples
    )
    rows = []
    for x in xs:
        value = profile.value(x)
        lower = profile.total - x**profile.dim
        rows.append((x, value, lower, value - lower))
    return BlowupReport(
        variety_name=variety.name,
        cone_index=cone_index,
        exceptional_ray=bl.e_ray,
        dim=profile.dim,
        vol=profile.total,
        domain_end=profile.domain_end,
        breakpoints=profile.breakpoints,
        rows=tuple(rows),
        margin_certified=margin_ok,
        monotone_certified=profile.monotone_certificate(),
        chain=chain,
    )


# ---------------------------------------------------------------------------
# Okounkov body report


@dataclass(frozen=True)
class OkounkovReport:
    variety_name: str
    cone_index: int
    ray_order: tuple
    vertices: tuple
    body_volume: Fraction
    divisor_volume: Fraction
    pseff: Fraction
    translation_results: tuple  # (t, verdict) pairs
    support: tuple
    concave: bool
    slice_rows: tuple  # (r, A(r))

    def csv_text(self) -> str:
        rows = [(_fmt(r), _fmt(a)) for r, a in self.slice_rows]
        return render_csv(("r", "slice_area"), rows)

    def json_dict(self) -> dict:
        return {
            "variety": self.variety_name,
            "cone_index": self.cone_index,
            "ray_order": list(self.ray_order),
            "vertices": [[_fmt(c) for c in v] for v in self.vertices],
            "body_volume": _fmt(self.body_volume),
            "divisor_volume": _fmt(self.divisor_volume),
            "volume_identity": "ok",
            "pseff_threshold": _fmt(self.pseff),
            "translation_checks": [
                {"t": _fmt(t), "verdict": "OK" if ok else "FAILED"}
                for t, ok in self.translation_results
            ],
            "support": [_fmt(self.support[0]), _fmt(self.support[1])],
            "bm_concave": self.concave,
            "slice_samples": [
                {"r": _fmt(r), "area": _fmt(a)} for r, a in self.slice_rows
            ],
        }


def okounkov_command(
    variety: ToricVariety,
    divisor: TDivisor,
    flag=None,
    translations=(),
    samples: int = 32,
) -> OkounkovReport:
    """Drive the body end to end: vertices, identities, slices, concavity."""
    if flag is None:
        flag = default_flag(variety, 0)
    body = okounkov_body(divisor, flag)
    n = variety.dim
    body_volume = body.volume()
    if factorial(n) * body_volume != divisor.vol():
        raise VerificationError(
            "body volume does not match the divisor volume",
            variety=variety.name,
            sample=flag.ray_order,
        )
    checks = []
    for t in translations:
        ok = translation_identity_check(divisor, flag, t)
        if not ok:
            raise VerificationError(
                "translation identity failed",
                variety=variety.name,
                sample=str(t),
            )
        checks.append((Fraction(t), ok))
    profile = slice_profile(body)
    lo, hi = profile.support
    slice_rows = tuple(
        (r, profile.value(r))
        for r in _sample_points(lo, hi, profile.breakpoints, samples)
    )
    return OkounkovReport(
        variety_name=variety.name,
        cone_index=flag.cone_index,
        ray_order=flag.ray_order,
        vertices=body.vertices(),
        body_volume=body_volume,
        divisor_volume=divisor.vol(),
        pseff=pseff_threshold(divisor, flag),
        translation_results=tuple(checks),
        support=profile.support,
        concave=bm_concavity_check(profile),
        slice_rows=slice_rows,
    )
