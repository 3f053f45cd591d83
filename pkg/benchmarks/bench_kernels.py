"""Compare the compiled and pure-Python RK4 ramp kernels.

Usage: python3 benchmarks/bench_kernels.py [--steps 20000] [--repeat 3]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from jcryd import ModelParams
from jcryd._kernels import compiled_rk4_affine, python_rk4_affine
from jcryd.hamiltonians import affine_driven


def problem(n_atoms: int):
    p = ModelParams(n_atoms, 1.0)
    aff = affine_driven(p)
    a = aff.at(1.0, 1.0, 0.05)
    b = aff.d_delta_r - aff.d_omega_r
    psi = np.zeros(p.dim, dtype=complex)
    psi[0] = 1.0
    return psi, a, b


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=20000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    h = 1e-4
    print(f"{'N':>3} {'dim':>4} {'python ms':>10} {'compiled ms':>12} {'speedup':>8} {'max diff':>9}")
    for n_atoms in (1, 2, 4, 8):
        psi, a, b = problem(n_atoms)
        t_py = min(timeit.repeat(lambda: python_rk4_affine(psi, a, b, 0.0, h, args.steps),
                                 number=1, repeat=args.repeat))
        if compiled_rk4_affine is None:
            print(f"{n_atoms:>3} {psi.size:>4} {1e3 * t_py:>10.1f} {'n/a':>12}")
            continue
        t_c = min(timeit.repeat(lambda: compiled_rk4_affine(psi, a, b, 0.0, h, args.steps),
                                number=1, repeat=args.repeat))
        diff = np.max(np.abs(python_rk4_affine(psi, a, b, 0.0, h, args.steps)
                             - compiled_rk4_affine(psi, a, b, 0.0, h, args.steps)))
        print(f"{n_atoms:>3} {psi.size:>4} {1e3 * t_py:>10.1f} {1e3 * t_c:>12.2f} "
              f"{t_py / t_c:>7.1f}x {diff:>9.1e}")


if __name__ == "__main__":
    main()
