import itertools
import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zigzag_power import ALL_KINDS, catalog, compute, cumulative_probabilities, kernels, make_cell_probabilities
from zigzag_power.statistics import batch_statistics


def test_selected_backend_is_reported():
    assert kernels.BACKEND in ("python", "cython")
    if kernels.compiled_backend is not None and os.environ.get("ZIGZAG_POWER_PURE_PYTHON") != "1":
        assert kernels.BACKEND == "cython"


def test_env_var_forces_fallback():
    code = "from zigzag_power import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, ZIGZAG_POWER_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_statistics_matrix_matches_reference(backend, zigzag_null):
    rng = np.random.default_rng(11)
    counts = rng.multinomial(20, zigzag_null.array, size=50).astype(np.int64)
    out = backend.statistics_matrix(counts, zigzag_null.array, cumulative_probabilities(zigzag_null), 20)
    for row, c in zip(np.asarray(out), counts):
        expected = [compute(kind, c, zigzag_null) for kind in ALL_KINDS]
        np.testing.assert_allclose(row, expected, rtol=1e-12, atol=1e-12)


def test_undefined_entries_are_nan(backend):
    null = make_cell_probabilities((0.5, 0.0, 0.5))
    h = cumulative_probabilities(null)
    out = np.asarray(backend.statistics_matrix(np.array([[1, 0, 1]], dtype=np.int64), null.array, h, 2))
    assert np.isnan(out[0, 0]) and np.isnan(out[0, 4])
    assert np.all(np.isfinite(out[0, [1, 2, 3, 5]]))
    empty = np.asarray(backend.statistics_matrix(np.zeros((1, 3), dtype=np.int64), np.full(3, 1 / 3), np.array([1 / 3, 2 / 3, 1.0]), 0))
    assert np.all(np.isnan(empty[0, 2:5]))


@pytest.mark.skipif(kernels.compiled_backend is None, reason="compiled kernels not built")
@settings(max_examples=50, deadline=None)
@given(st.integers(2, 15), st.integers(0, 80), st.integers(0, 2**32 - 1))
def test_backends_agree_bit_for_bit(k, n, seed):
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(k))
    p[-1] = 1.0 - p[:-1].sum()
    if p[-1] <= 0:
        return
    counts = rng.multinomial(n, p, size=64).astype(np.int64)
    h = np.cumsum(p) / p.sum()
    a = kernels.python_backend.statistics_matrix(counts, p, h, n)
    b = np.asarray(kernels.compiled_backend.statistics_matrix(counts, p, h, n))
    np.testing.assert_array_equal(a, b)


@pytest.mark.parametrize("n, k", [(0, 1), (0, 4), (1, 1), (4, 2), (5, 3), (6, 4), (3, 7), (12, 5)])
def test_compositions(backend, n, k):
    out = np.asarray(backend.compositions(n, k))
    assert out.shape == (math.comb(n + k - 1, k - 1), k)
    assert np.all(out.sum(axis=1) == n) and np.all(out >= 0)
    expected = sorted(c for c in itertools.product(range(n + 1), repeat=k) if sum(c) == n)
    assert [tuple(r) for r in out] == expected


@pytest.mark.skipif(kernels.compiled_backend is None, reason="compiled kernels not built")
def test_batch_statistics_backend_independent():
    null = catalog("zigzag-null").resolved
    counts = np.random.default_rng(5).multinomial(50, catalog("bimodal").resolved.array, size=2000)
    a = batch_statistics(counts, null, backend=kernels.python_backend)
    b = batch_statistics(counts, null, backend=kernels.compiled_backend)
    np.testing.assert_array_equal(a, b)
