"""Compare the numba and numpy row-reduction kernels.

    python benchmarks/bench_kernels.py [--sizes 200 400 800] [--repeat 3]

Both kernels receive identical random matrices; the script checks that the
ranks and reduced forms agree before reporting timings.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from koszul_lab import _kernels as K
from koszul_lab.field import get_field


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def bench_prime(n: int, p: int, repeat: int, rng) -> tuple[float, float]:
    A = rng.integers(0, p, size=(n, n + n // 2), dtype=np.int64)
    A[n // 2 :] = (A[: n - n // 2] * 3) % p  # force rank deficiency
    a1, a2 = A.copy(), A.copy()
    r1, _ = K._rref_prime_nb(a1, np.int64(p), True)
    r2, _ = K.rref_prime_np(a2, p, True)
    assert r1 == r2 and np.array_equal(a1, a2)
    t_nb = _time(lambda: K._rref_prime_nb(A.copy(), np.int64(p), True), repeat)
    t_np = _time(lambda: K.rref_prime_np(A.copy(), p, True), repeat)
    return t_nb, t_np


def bench_log(n: int, p: int, m: int, repeat: int, rng) -> tuple[float, float]:
    F = get_field(p, m)
    A = F.random(rng, (n, n + n // 2))
    L = F._log[A]
    args = (np.int64(F.q - 1), np.int64(F.half), F._zech)
    l1, l2 = L.copy(), L.copy()
    r1, _ = K._rref_log_nb(l1, *args, True)
    r2, _ = K.rref_log_np(l2, F.q - 1, F.half, F._zech, True)
    assert r1 == r2 and np.array_equal(l1, l2)
    t_nb = _time(lambda: K._rref_log_nb(L.copy(), *args, True), repeat)
    t_np = _time(lambda: K.rref_log_np(L.copy(), F.q - 1, F.half, F._zech, True), repeat)
    return t_nb, t_np


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 200, 400])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--p", type=int, default=101)
    args = ap.parse_args()
    if K.numba is None:
        raise SystemExit("numba is not installed")
    rng = np.random.default_rng(0)
    bench_prime(8, args.p, 1, rng)  # compile
    bench_log(8, args.p, 2, 1, rng)
    print(f"{'kernel':<14}{'rows':>6}{'numba s':>12}{'numpy s':>12}{'speedup':>10}")
    for n in args.sizes:
        for name, fn in (("rref F_p", lambda: bench_prime(n, args.p, args.repeat, rng)),
                         ("rref F_p^2", lambda: bench_log(n, args.p, 2, args.repeat, rng))):
            t_nb, t_np = fn()
            print(f"{name:<14}{n:>6}{t_nb:>12.4f}{t_np:>12.4f}{t_np / t_nb:>10.1f}")


if __name__ == "__main__":
    main()
