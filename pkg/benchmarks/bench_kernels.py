"""Compare the compiled and numpy monomial kernels.

Times the degree-19 moment sweep over the quadrature nodes of the 600-cell
cycle (plus the 120-cell points) and the evaluation of the degree-12 H4
invariant, once per backend, and checks that the two backends agree.

    python3 benchmarks/bench_kernels.py --repeats 5
"""
import argparse
import time

import numpy as np

from sphdesigns import _pykernels, quad
from sphdesigns.cycles import euler_cycle
from sphdesigns.invariants import p12_H4
from sphdesigns.polytope import build_polytope

try:
    from sphdesigns import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--degree", type=int, default=19, help="sweep degree")
    ap.add_argument("--points", type=int, default=200_000, help="evaluation points for p12")
    args = ap.parse_args()

    cyc = euler_cycle(build_polytope("600-cell"))
    nodes, w = cyc.nodes(args.degree + quad.EXTRA_NODES)
    pts = np.concatenate([nodes, build_polytope("120-cell").vertices])
    wts = np.concatenate([w / w.sum() * 0.5, np.full(600, 0.5 / 600)])
    ex, _ = quad.monomials_up_to(4, args.degree)
    x = np.random.default_rng(0).standard_normal((args.points, 4))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    pex, pco = p12_H4().packed()

    backends = [("numpy", _pykernels)]
    if _ckernels is not None:
        backends.append(("cython", _ckernels))
    else:
        print("compiled extension not available; timing numpy only")

    print(f"moment sweep: {len(ex)} monomials x {len(pts)} nodes; p12 eval: {len(pex)} terms x {len(x)} points")
    print(f"{'backend':8s} {'sweep [s]':>10s} {'eval [s]':>10s}")
    results = {}
    for label, mod in backends:
        ts, mom = best_of(lambda: mod.monomial_moments(pts, wts, ex), args.repeats)
        te, val = best_of(lambda: mod.poly_eval(x, pex, pco), args.repeats)
        results[label] = (ts, te, mom, val)
        print(f"{label:8s} {ts:10.3f} {te:10.3f}")
    if len(results) == 2:
        a, b = results["numpy"], results["cython"]
        print(f"speedup: sweep {a[0] / b[0]:.2f}x, eval {a[1] / b[1]:.2f}x")
        print(f"max |diff|: moments {np.max(np.abs(a[2] - b[2])):.1e}, values {np.max(np.abs(a[3] - b[3])):.1e}")


if __name__ == "__main__":
    main()
