import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fsig import _pykernels

kernels = pytest.importorskip("fsig._kernels")


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 40), st.integers(0, 40), st.sampled_from([2, 3, 7, 65521, 2147483629]),
       st.floats(0.0, 1.0), st.integers(0, 2**32 - 1))
def test_compiled_matches_fallback(r, c, p, density, seed):
    rng = np.random.default_rng(seed)
    arr = (rng.integers(0, p, (r, c)) * (rng.random((r, c)) < density)).astype(np.int64)
    a1, a2, a3, a4 = (arr.copy() for _ in range(4))
    assert kernels.rank_dense(a1, p) == _pykernels.rank_dense(a2, p)
    piv1 = list(kernels.rref_dense(a3, p))
    piv2 = list(_pykernels.rref_dense(a4, p))
    assert piv1 == piv2
    assert np.array_equal(a3, a4)


def test_env_forces_fallback():
    env = dict(os.environ, FSIG_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import fsig; print(fsig.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
