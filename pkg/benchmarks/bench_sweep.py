"""Time the pure-Python sweep engine against the compiled one.

Runs the same ample-cone sweep through both engines, checks they agree,
and prints one row per (variety, resolution) with the speedup.

    python3 benchmarks/bench_sweep.py --resolutions 4 8 12 --repeat 3
"""

import argparse
import time

from torifan import catalog, sweep


def run_once(variety, resolution, engine):
    skel = sweep.build_skeleton(variety)
    t0 = time.perf_counter()
    if engine == "cython":
        raw = sweep._compiled_module().run_sweep(skel, resolution, 0)
    else:
        from torifan import _sweep_pure

        raw = _sweep_pure.run_sweep(skel, resolution, 0)
    return time.perf_counter() - t0, raw


def best_of(variety, resolution, engine, repeat):
    times = []
    raw = None
    for _ in range(repeat):
        elapsed, raw = run_once(variety, resolution, engine)
        times.append(elapsed)
    return min(times), raw


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--resolutions", type=int, nargs="+", default=[4, 8, 12]
    )
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument(
        "--varieties",
        nargs="+",
        default=None,
        help="catalog names; defaults to every surface plus P3",
    )
    args = parser.parse_args(argv)

    entries = {v.name: v for v in catalog.bundled_catalog()}
    if args.varieties:
        chosen = [entries[name] for name in args.varieties]
    else:
        chosen = catalog.surface_catalog() + [entries["P3"]]

    compiled = sweep._compiled_module() is not None
    if not compiled:
        print("compiled engine not built; timing the pure engine only")

    header = f"{'variety':<10} {'res':>4} {'pure (s)':>10}"
    if compiled:
        header += f" {'cython (s)':>11} {'speedup':>8}"
    print(header)
    for variety in chosen:
        for resolution in args.resolutions:
            t_pure, raw_pure = best_of(
                variety, resolution, "pure", args.repeat
            )
            line = f"{variety.name:<10} {resolution:>4} {t_pure:>10.4f}"
            if compiled:
                skel = sweep.build_skeleton(variety)
                if not sweep._compiled_bounds_ok(skel, resolution):
                    line += f" {'n/a':>11} {'':>8}"
                    print(line)
                    continue
                t_cy, raw_cy = best_of(
                    variety, resolution, "cython", args.repeat
                )
                if (raw_pure.best, raw_pure.argmax, raw_pure.ample) != (
                    raw_cy.best,
                    raw_cy.argmax,
                    raw_cy.ample,
                ):
                    raise SystemExit(
                        f"engines disagree on {variety.name} "
                        f"at resolution {resolution}"
                    )
                line += f" {t_cy:>11.4f} {t_pure / t_cy:>7.1f}x"
            print(line)


if __name__ == "__main__":
    main()
