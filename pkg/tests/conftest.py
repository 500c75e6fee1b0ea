import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_instance(rng, max_n=64, max_dims=10, max_window=20):
    """One random (q, c, window) soundness instance: random walk or iid noise,
    occasionally degenerate (shifted / duplicated-point / constant shapes that
    stress near-tight bound configurations)."""
    n = int(rng.integers(2, max_n + 1))
    dims = int(rng.integers(1, max_dims + 1))
    window = int(rng.integers(0, max_window + 1))
    kind = rng.random()
    if kind < 0.45:
        q = np.cumsum(rng.normal(0, 1, (n, dims)), axis=0)
        c = np.cumsum(rng.normal(0, 1, (n, dims)), axis=0)
    elif kind < 0.8:
        q = rng.normal(0, 1, (n, dims))
        c = rng.normal(0, 1, (n, dims))
    elif kind < 0.9:
        # near-copy: candidate is the query shifted and lightly perturbed
        q = np.cumsum(rng.normal(0, 1, (n, dims)), axis=0)
        c = q + rng.normal(0, 1e-3, (n, dims))
        c = np.roll(c, int(rng.integers(0, 3)), axis=0)
    else:
        # plateaus: runs of identical points (exercises zero steps and ties)
        q = np.repeat(rng.normal(0, 1, (max(1, n // 3), dims)), 3, axis=0)[:n]
        c = np.repeat(rng.normal(0, 1, (max(1, n // 3), dims)), 3, axis=0)[:n]
        if len(q) < n:
            q = np.vstack([q, q[-1:].repeat(n - len(q), 0)])
            c = np.vstack([c, c[-1:].repeat(n - len(c), 0)])
    return q, c, window
