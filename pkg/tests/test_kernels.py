import os
import subprocess
import sys

import numpy as np
import pytest

from koszul_lab import _kernels as K
from koszul_lab.field import get_field

needs_numba = pytest.mark.skipif(K.numba is None, reason="numba not installed")


@needs_numba
@pytest.mark.parametrize("full", [True, False])
def test_prime_kernels_agree(full):
    rng = np.random.default_rng(0)
    for p in (7, 101, 1048573):
        A = rng.integers(0, p, size=(30, 45), dtype=np.int64)
        A[20:] = A[:10]
        a, b = A.copy(), A.copy()
        ra, pa = K._rref_prime_nb(a, np.int64(p), full)
        rb, pb = K.rref_prime_np(b, p, full)
        assert ra == rb == 20
        assert np.array_equal(pa, pb) and np.array_equal(a, b)


@needs_numba
@pytest.mark.parametrize("full", [True, False])
def test_log_kernels_agree(full):
    F = get_field(7, 3)
    rng = np.random.default_rng(1)
    L = F._log[F.random(rng, (25, 40))]
    args = (F.q - 1, F.half, F._zech)
    a, b = L.copy(), L.copy()
    ra, pa = K._rref_log_nb(a, np.int64(args[0]), np.int64(args[1]), args[2], full)
    rb, pb = K.rref_log_np(b, *args, full)
    assert ra == rb and np.array_equal(pa, pb) and np.array_equal(a, b)


@needs_numba
def test_log_matmul_agree():
    F = get_field(5, 2)
    rng = np.random.default_rng(2)
    A = F._log[F.random(rng, (6, 9))]
    B = F._log[F.random(rng, (9, 4))]
    assert np.array_equal(K._matmul_log_nb(A, B, np.int64(F.q - 1), F._zech), K.matmul_log_np(A, B, F.q - 1, F._zech))


def test_environment_flag_selects_numpy_backend():
    env = dict(os.environ, KOSZUL_LAB_BACKEND="numpy")
    out = subprocess.run(
        [sys.executable, "-c", "from koszul_lab import _kernels; print(_kernels.backend_name())"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numpy"


def test_numpy_backend_gives_same_betti_row():
    code = (
        "from koszul_lab import models, get_field, GradedRing, betti_table;"
        "m = models.gen_canonical(6, 'grass', get_field(101), 3);"
        "print(betti_table(GradedRing(m), range(4), (1,)).row(1))"
    )
    rows = []
    for backend in ("numpy", "numba"):
        env = dict(os.environ, KOSZUL_LAB_BACKEND=backend)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        rows.append(out.stdout.strip())
    assert rows[0] == rows[1] == "[0, 6, 5, 0]"
