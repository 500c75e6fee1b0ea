"""Sakoe-Chiba banded dependent multivariate DTW with early abandoning."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import InvalidInputError, as_series

_INF = float("inf")


@dataclass(frozen=True)
class DtwResult:
    """Banded DTW outcome.

    If `abandoned` is false, `distance` is the exact band-constrained DTW
    distance.  If true, the computation either stopped at a row whose entire
    frontier exceeded the abandon threshold (then `distance` is that row's
    minimum, a lower bound of the true distance) or ran to completion with a
    final value above the threshold.  Either way `distance > abandon_above`.

    `cells` counts evaluated DP cells, the work unit used for deterministic
    cost accounting.
    """

    distance: float
    abandoned: bool = False
    cells: int = 0


def cost_band(qa: np.ndarray, ca: np.ndarray, w: int) -> np.ndarray:
    """Local cost band: entry (i, k) is d(q_i, c_{i-w+k}) for k in [0, 2w],
    +inf where the column index falls outside [0, n-1]."""
    n = qa.shape[0]
    j = np.arange(n)[:, None] + np.arange(-w, w + 1)[None, :]
    valid = (j >= 0) & (j < n)
    diff = qa[:, None, :] - ca[np.clip(j, 0, n - 1)]
    band = np.sqrt((diff * diff).sum(axis=-1))
    band[~valid] = _INF
    return band


def dtw_banded(q, c, window: int, abandon_above: float | None = None) -> DtwResult:
    """Band-constrained DTW distance between two equal-shape series.

    The warping path runs from cell (0, 0) to (n-1, n-1) moving right, up, or
    diagonally, restricted to |i - j| <= min(window, n-1).  Cell costs are
    Euclidean point distances and the distance is their plain sum along the
    cheapest path.

    With `abandon_above` set, the DP stops as soon as every entry of a row
    frontier exceeds it (any full path must pass through every row).
    """
    qa = as_series(q)
    ca = as_series(c)
    if qa.shape != ca.shape:
        raise InvalidInputError(f"shape mismatch: {qa.shape} vs {ca.shape}")
    if window < 0:
        raise InvalidInputError("window must be >= 0")
    n = qa.shape[0]
    w = min(int(window), n - 1)
    width = 2 * w + 1
    band = cost_band(qa, ca, w).tolist()
    threshold = _INF if abandon_above is None else float(abandon_above)

    inf_row = [_INF] * width
    prev = inf_row[:]
    cur = inf_row[:]
    cells = 0
    for i in range(n):
        row = band[i]
        lo = 0 if i < w else i - w
        hi = n - 1 if i + w >= n else i + w
        cur[:] = inf_row
        k = lo - i + w
        row_min = _INF
        for j in range(lo, hi + 1):
            if i == 0 and j == 0:
                v = row[k]
            else:
                best = _INF
                if i > 0:
                    if k + 1 < width:
                        best = prev[k + 1]  # (i-1, j)
                    if j > 0 and prev[k] < best:
                        best = prev[k]  # (i-1, j-1)
                if k > 0 and cur[k - 1] < best:
                    best = cur[k - 1]  # (i, j-1)
                v = row[k] + best
            cur[k] = v
            if v < row_min:
                row_min = v
            k += 1
        cells += hi - lo + 1
        if row_min > threshold:
            return DtwResult(row_min, True, cells)
        prev, cur = cur, prev

    final = prev[w]  # column j = n-1 sits at offset w in the last row
    return DtwResult(final, final > threshold, cells)
