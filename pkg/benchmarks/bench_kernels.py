"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--sizes 20 40]

Prints the best-of-``repeat`` time per call for each kernel and the speedup of
the compiled core. Both backends are checked for agreement first.
"""

import argparse
import sys
import timeit

import numpy as np

from resonator_metrology import _kernels
from resonator_metrology.bosonic_model import ModelConfig, joint_state
from resonator_metrology.estimation import probe_with_derivatives
from resonator_metrology.tensor_core import eigh


def cases(n):
    cfg = ModelConfig(g=0.04, temperature=0.2, b_ext=0.04, n_a=n, n_b=n)
    joint = joint_state(cfg).matrix
    rho, dt, db = probe_with_derivatives(cfg)
    spec = eigh(rho.matrix)
    v = spec.eigenvectors
    d1 = v.conj().T @ dt @ v
    d2 = v.conj().T @ db @ v
    q = spec.eigenvalues
    axis = np.linspace(-5, 5, 201)
    return {
        "partial_trace": lambda k: k.partial_trace(joint, n, n, True),
        "spectral_fisher": lambda k: k.spectral_fisher(q, d1, d2, 1e-12),
        "sld_eigenbasis": lambda k: k.sld_eigenbasis(q, d1, 1e-12),
        "wigner_201x201": lambda k: k.wigner(rho.matrix, axis, axis),
    }


def best(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sizes", type=int, nargs="+", default=[20, 40])
    args = ap.parse_args(argv)

    py, cy = _kernels.python_backend, _kernels.compiled_backend
    if cy is None:
        print("compiled backend not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1

    print(f"{'kernel':<18}{'n':>4}{'python [ms]':>14}{'cython [ms]':>14}{'speedup':>10}{'max |diff|':>12}")
    for n in args.sizes:
        for name, call in cases(n).items():
            a, b = call(py), call(cy)
            diff = float(np.max(np.abs(np.subtract(a, b))))
            tp = best(lambda: call(py), args.repeat)
            tc = best(lambda: call(cy), args.repeat)
            print(f"{name:<18}{n:>4}{tp * 1e3:>14.3f}{tc * 1e3:>14.3f}{tp / tc:>10.2f}{diff:>12.1e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
