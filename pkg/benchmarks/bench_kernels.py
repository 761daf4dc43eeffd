"""Compiled vs NumPy kernels on the full-size study problem.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times ``radiate`` (the fixed-dish PO sum over the default quadrature, for
one direction and for a 301-direction cut) and ``anneal`` (100k SA steps on
a 3-null system), and checks that both backends agree.
"""

import argparse
import math
import time

import numpy as np

from risnull import kernels
from risnull.fields import FarFieldTarget, assemble_system, dish_quadrature, default_spacing
from risnull.geometry import SPEED_OF_LIGHT, DishGeometry, build_rim_layout


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    found = kernels.backends()
    if "compiled" not in found:
        print("compiled kernels not built; only the NumPy backend is available")
    freq = 1.5e9
    wavelength = SPEED_OF_LIGHT / freq
    beta = 2 * math.pi / wavelength
    geom = DishGeometry.from_rim(18.0, 0.5, focal_length=7.4)
    layout = build_rim_layout(geom, wavelength)
    quad = dish_quadrature(geom, default_spacing(beta))

    rng = np.random.default_rng(0)
    pts = np.ascontiguousarray(quad.points)
    cur = np.ascontiguousarray(rng.normal(size=pts.shape) + 1j * rng.normal(size=pts.shape))
    psi = np.radians(np.linspace(0, 3, 301))
    dirs = np.ascontiguousarray(np.stack([np.sin(psi), np.zeros_like(psi), np.cos(psi)], axis=1))

    sys_ = assemble_system([FarFieldTarget.from_degrees(a, 0.0, freq) for a in (1.85, 2.05, 2.25)],
                           0.01, layout, geom)
    n_steps = 100_000
    M = 4
    const = np.exp(2j * np.pi * np.arange(M) / M)
    columns = np.ascontiguousarray(sys_.A.T)
    moves = rng.integers(0, columns.shape[0], n_steps).astype(np.int64)
    offsets = rng.integers(1, M, n_steps).astype(np.int64)
    uniforms = rng.random(n_steps)
    res0 = np.ascontiguousarray(sys_.A @ np.ones(sys_.n_elements) - sys_.y)
    t0 = float(np.vdot(res0, res0).real) / 10

    def anneal(mod):
        res, lev, trace = res0.copy(), np.zeros(columns.shape[0], np.int64), np.empty(n_steps)
        mod.anneal(columns, res, lev, const, moves, offsets, uniforms, t0, 0.999, trace)
        return trace

    print(f"quadrature points: {len(pts)}, rim elements: {layout.n_elements}, repeat: {args.repeat}")
    print(f"{'kernel':<28}{'backend':<10}{'seconds':>10}{'speedup':>10}")
    cases = [
        ("radiate, 1 direction", lambda m: m.radiate(pts, cur, dirs[:1], beta)),
        ("radiate, 301 directions", lambda m: m.radiate(pts, cur, dirs, beta)),
        (f"anneal, {n_steps} steps", anneal),
    ]
    for name, fn in cases:
        ref_t, ref_out = best_of(lambda: fn(found["python"]), args.repeat)
        print(f"{name:<28}{'python':<10}{ref_t:>10.4f}{'1.0':>10}")
        if "compiled" in found:
            t, out = best_of(lambda: fn(found["compiled"]), args.repeat)
            err = float(np.max(np.abs(out - ref_out)) / np.max(np.abs(ref_out)))
            print(f"{'':<28}{'compiled':<10}{t:>10.4f}{ref_t / t:>10.1f}   max rel diff {err:.1e}")


if __name__ == "__main__":
    main()
