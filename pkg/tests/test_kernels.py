import os
import subprocess
import sys

import numpy as np
import pytest

from mvnerve import _kernels_py, kernels

from oracles import dense_rank

compiled = pytest.importorskip("mvnerve._kernels", reason="compiled kernels not built")


@pytest.mark.parametrize("p", [2, 3, 7, 101])
def test_compiled_matches_python(p):
    rng = np.random.default_rng(p)
    for shape in [(0, 0), (1, 5), (5, 1), (6, 6), (8, 13), (20, 9)]:
        a = rng.integers(0, p, size=shape, dtype=np.int64)
        b = a.copy()
        piv_c = compiled.rref_mod_p(a, p)
        piv_py = _kernels_py.rref_mod_p(b, p)
        assert list(piv_c) == list(piv_py)
        assert np.array_equal(a, b)
        assert len(piv_c) == dense_rank(b.tolist(), p)


def test_rref_shape_properties():
    p = 5
    a = np.array([[2, 4, 1], [1, 2, 3], [3, 1, 0]], dtype=np.int64)
    pivots = kernels.rref_mod_p(a, p)
    for i, c in enumerate(pivots):
        assert a[i, c] == 1
        assert all(a[k, c] == 0 for k in range(a.shape[0]) if k != i)


def test_large_prime_uses_python():
    p = 2**61 - 1
    a = np.array([[3, 5], [6, 10]], dtype=np.int64)
    assert kernels.rref_mod_p(a, p) == [0]


def test_pure_python_env_switch():
    code = "import mvnerve.kernels as k; print(k.BACKEND)"
    env = dict(os.environ, MVNERVE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    env.pop("MVNERVE_PURE_PYTHON")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "cython"
