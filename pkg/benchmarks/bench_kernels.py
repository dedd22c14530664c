"""Compare the compiled and numpy kernels.

Per-kernel timings on a random density matrix, then one end-to-end dense
experiment run in a subprocess under each backend (``QEC713_PURE`` picks
the implementation at import time).

    python benchmarks/bench_kernels.py --qubits 10 --repeat 20
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from qec713 import _kernels_py

try:
    from qec713 import _kernels as _compiled
except ImportError:
    _compiled = None

END_TO_END = (
    "import time; from qec713.steane import run_experiment; from qec713.densmat import StatePrep; "
    "from qec713.noise import PauliProbs; from qec713 import kernels; t=time.perf_counter(); "
    "run_experiment('{key}', StatePrep(0.3, 0.2), PauliProbs(1e-3, 1e-3, 1e-3)); "
    "print(kernels.BACKEND, time.perf_counter()-t)"
)


def random_density(n: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    d = 1 << n
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m = a @ a.conj().T
    return m / np.trace(m)


def kernel_calls(impl, n: int):
    h = 1 / np.sqrt(2)
    mid = n // 2
    return {
        "apply_1q": lambda m: impl.apply_1q(m, mid, h, h, h, -h),
        "apply_cnot": lambda m: impl.apply_cnot(m, n - 1, 0),
        "pauli_channel": lambda m: impl.pauli_channel(m, mid, 1e-3, 2e-3, 3e-3),
        "project_parity": lambda m: impl.project_parity(m, 0b1011, 0),
    }


def bench_kernels(n: int, repeat: int) -> None:
    impls = {"numpy": _kernels_py}
    if _compiled is not None:
        impls["cython"] = _compiled
    base = random_density(n)
    results = {}
    for name, impl in impls.items():
        for kernel, call in kernel_calls(impl, n).items():
            m = base.copy()
            t = min(timeit.repeat(lambda: call(m), number=1, repeat=repeat))
            results[(kernel, name)] = t
    print(f"kernels on a {n}-qubit density matrix (best of {repeat}, ms)")
    print(f"{'kernel':<16}{'numpy':>10}{'cython':>10}{'speedup':>10}")
    for kernel in ("apply_1q", "apply_cnot", "pauli_channel", "project_parity"):
        py = results[(kernel, "numpy")] * 1e3
        cy = results.get((kernel, "cython"))
        if cy is None:
            print(f"{kernel:<16}{py:>10.3f}{'-':>10}{'-':>10}")
        else:
            print(f"{kernel:<16}{py:>10.3f}{cy * 1e3:>10.3f}{py / (cy * 1e3):>9.1f}x")


def bench_end_to_end(key: str) -> None:
    print(f"\nend to end: {key} at p = 1e-3")
    for pure in ("1", "0"):
        env = dict(os.environ, QEC713_PURE=pure)
        out = subprocess.run([sys.executable, "-c", END_TO_END.format(key=key)], env=env, capture_output=True, text=True, check=True)
        backend, seconds = out.stdout.split()
        print(f"  {backend:<8}{float(seconds):8.2f} s")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qubits", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--experiment", default="noisy-qec", help="experiment for the end-to-end run; empty to skip")
    args = ap.parse_args()
    if _compiled is None:
        print("compiled kernels not built; only the numpy fallback is timed")
    bench_kernels(args.qubits, args.repeat)
    if args.experiment:
        bench_end_to_end(args.experiment)


if __name__ == "__main__":
    main()
