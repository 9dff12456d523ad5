"""Exact agreement between the pure and compiled sweep engines."""

import pytest

from torifan import _sweep_pure, catalog, sweep

core = sweep._compiled_module()

pytestmark = pytest.mark.skipif(
    core is None, reason="compiled sweep engine not built"
)


def both_engines(variety, resolution, collect_cap=100):
    skel = sweep.build_skeleton(variety)
    assert sweep._compiled_bounds_ok(skel, resolution)
    pure = _sweep_pure.run_sweep(skel, resolution, collect_cap)
    fast = core.run_sweep(skel, resolution, collect_cap)
    return pure, fast


def assert_raw_equal(pure, fast):
    assert pure.candidates == fast.candidates
    assert pure.ample == fast.ample
    assert pure.extremal == fast.extremal
    assert pure.best == fast.best
    assert isinstance(fast.best, type(pure.best))
    assert pure.argmax == fast.argmax
    assert pure.collected == fast.collected
    assert pure.collect_complete == fast.collect_complete


def test_engines_agree_on_surfaces():
    for v in catalog.surface_catalog():
        pure, fast = both_engines(v, 5)
        assert pure.ample > 0
        assert_raw_equal(pure, fast)


def test_engines_agree_on_threefolds():
    for v in (catalog.projective_space(3), catalog.p1_power(3)):
        pure, fast = both_engines(v, 2)
        assert_raw_equal(pure, fast)


def test_engines_agree_with_full_collection():
    v = catalog.hirzebruch_one()
    pure, fast = both_engines(v, 4, collect_cap=10**6)
    assert pure.collect_complete and fast.collect_complete
    assert pure.collected == fast.collected
    assert len(pure.collected) == pure.ample


def test_compiled_engine_declines_oversized_input():
    skel = sweep.build_skeleton(catalog.del_pezzo_6())
    # products in the compiled kernel would overflow 128-bit integers here
    assert not sweep._compiled_bounds_ok(skel, 10**7)
    assert sweep.select_engine(skel, 10**7) == "pure"
    assert sweep.select_engine(skel, 16) == "cython"


def test_sweep_result_engine_label_matches_agreement():
    v = catalog.projective_space(2)
    fast = sweep.sweep_ample_cone(v, 6, engine="cython")
    pure = sweep.sweep_ample_cone(v, 6, engine="pure")
    assert fast.engine == "cython" and pure.engine == "pure"
    assert fast.max_score == pure.max_score
    assert fast.argmax_coeffs == pure.argmax_coeffs
    assert fast.candidates == pure.candidates
    assert fast.ample_samples == pure.ample_samples
    assert [r.coeffs for r in fast.sample_reports] == [
        r.coeffs for r in pure.sample_reports
    ]
