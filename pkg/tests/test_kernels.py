"""Compiled and pure-Python kernels against the reference implementations."""
import subprocess
import sys

import numpy as np
import pytest

from fringesort import _pykernels, kernels
from fringesort.core import InputSequence, SampleParams
from fringesort.fringe_tree import FringeTree
from fringesort.harness import ExperimentConfig, run_experiment
from fringesort.inputgen import SplitMix64, trial_seed
from fringesort.quicksort import quicksort_k

try:
    from fringesort import _ckernels
except ImportError:  # compiled extension not built
    _ckernels = None

BACKENDS = [pytest.param(_pykernels, id="python")]
BACKENDS.append(pytest.param(_ckernels, id="cython", marks=pytest.mark.skipif(
    _ckernels is None, reason="compiled extension not built")))


def _random_inputs(count, seed):
    rng = SplitMix64(seed)
    for i in range(count):
        k = (1, 3, 5, 7)[rng.bounded(4)]
        u = 1 + rng.bounded(12)
        n = 1 + rng.bounded(150)
        vals = np.array([1 + rng.bounded(u) for _ in range(n)], dtype=np.int64)
        yield k, vals


@pytest.mark.parametrize("backend", BACKENDS)
def test_quicksort_counts_match_reference(backend):
    for k, vals in _random_inputs(400, 1):
        out = quicksort_k(InputSequence(tuple(vals.tolist())), SampleParams(k), record_events=False)
        led = out.ledger
        part, med, isort, steps, h = backend.quicksort_counts(vals, k)
        assert (part, med, isort, steps) == (led.partition_cmps, led.median_cmps,
                                            led.insertionsort_cmps, led.steps)
        tree = FringeTree.build(InputSequence(tuple(vals.tolist())), SampleParams(k), record_events=False)
        assert h == tree.height()


@pytest.mark.parametrize("backend", BACKENDS)
def test_fringe_counts_match_reference(backend):
    for k, vals in _random_inputs(400, 2):
        tree = FringeTree.build(InputSequence(tuple(vals.tolist())), SampleParams(k), record_events=False)
        part, med, inner, h = backend.fringe_counts(vals, k)
        assert (part, med, inner, h) == (tree.ledger.partition_cmps, tree.ledger.median_cmps,
                                         tree.inner_count, tree.height())


@pytest.mark.parametrize("backend", BACKENDS)
def test_kernels_on_edge_inputs(backend):
    for vals in ([1], [4] * 50, list(range(1, 300)), list(range(300, 0, -1))):
        arr = np.array(vals, dtype=np.int64)
        for k in (1, 3):
            ref = FringeTree.build(InputSequence(tuple(vals)), SampleParams(k), record_events=False)
            assert backend.fringe_counts(arr, k)[3] == ref.height()
            assert backend.quicksort_counts(arr, k)[3] == ref.ledger.steps


@pytest.mark.parametrize("backend", BACKENDS)
def test_inverse_cdf(backend):
    cdf = np.cumsum([0.1, 0.2, 0.3, 0.4])
    cdf[-1] = 1.0
    us = np.array([0.0, 0.05, 0.1, 0.1000001, 0.3, 0.6, 0.99, 1.0 - 2**-53])
    expected = np.minimum(np.searchsorted(cdf, us, side="left"), 3) + 1
    assert backend.inverse_cdf(cdf, us).tolist() == expected.tolist()


def test_inverse_cdf_backends_agree():
    if _ckernels is None:
        pytest.skip("compiled extension not built")
    rng = SplitMix64(trial_seed(3, 0))
    for u in (1, 2, 7, 100, 5000):
        w = rng.random_block(u) + 0.01
        cdf = np.cumsum(w / w.sum())
        cdf[-1] = 1.0
        us = rng.random_block(20000)
        assert np.array_equal(_ckernels.inverse_cdf(cdf, us), _pykernels.inverse_cdf(cdf, us))


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")
    if _ckernels is not None:
        assert kernels.BACKEND == "cython"


_FALLBACK_SCRIPT = """
import sys
sys.modules["fringesort._ckernels"] = None  # makes the import fail
from fringesort import kernels
from fringesort.harness import ExperimentConfig, run_experiment
assert kernels.BACKEND == "python", kernels.BACKEND
sys.stdout.write(run_experiment(ExperimentConfig("cost", u=5, k=3, n=3000, trials=4, seed=9)).to_json())
"""


def test_fallback_selected_and_identical():
    out = subprocess.run([sys.executable, "-c", _FALLBACK_SCRIPT], capture_output=True, text=True, check=True)
    here = run_experiment(ExperimentConfig("cost", u=5, k=3, n=3000, trials=4, seed=9)).to_json()
    assert out.stdout == here
