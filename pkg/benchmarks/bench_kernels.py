"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

The first numba call of each kernel is excluded (JIT compile / cache load).
Results of both backends are compared before timing.
"""
import argparse
import timeit

import numpy as np

from etcs import _kernels
from etcs.gluing import units


def cases():
    rng = np.random.default_rng(0)
    taus_re = rng.uniform(-0.5, 0.5, 20_000)
    taus_im = rng.uniform(0.87, 3.0, 20_000)
    pairs = np.array([(p, s) for p in range(-200, 201) for s in range(-200, 201) if (p - s) % 8 == 0])
    return {
        "gluing_scan(5,3,bound=20)": lambda b: _kernels.gluing_scan(5, 3, units(5), units(3), 20, backend=b),
        "eta_qseries(20k taus, 40 terms)": lambda b: _kernels.eta_qseries(taus_re, taus_im, 40, backend=b),
        "eq8_scan(20k pairs, |ind|<=2000)": lambda b: _kernels.eq8_scan(pairs[:, 0], pairs[:, 1], 2000, backend=b),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = _kernels.available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'kernel':36s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, fn in cases().items():
        results = {b: fn(b) for b in backends}  # also warms up the JIT
        ref = results["numpy"]
        for b, r in results.items():
            if not np.allclose(r, ref, rtol=1e-12, atol=1e-12):
                raise SystemExit(f"{name}: {b} disagrees with numpy")
        times = {b: min(timeit.repeat(lambda: fn(b), number=1, repeat=args.repeat)) for b in backends}
        row = f"{name:36s}" + "".join(f"{times[b] * 1e3:10.2f}ms" for b in backends)
        if "numba" in times:
            row += f"{times['numpy'] / times['numba']:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
