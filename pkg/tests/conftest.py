"""Shared test oracles: naive, loop-based transcriptions kept independent of
the library's vectorized paths."""

import math

import numpy as np
import pytest

from spacefill.core import Domain, RngState


def brute_nn_distances(points):
    """O(N^2) nearest-neighbor oracle, plain loops."""
    n = len(points)
    out = []
    for i in range(n):
        best = math.inf
        for j in range(n):
            if i == j:
                continue
            d = math.sqrt(sum((points[i][k] - points[j][k]) ** 2 for k in range(len(points[i]))))
            best = min(best, d)
        out.append(best)
    return out


def brute_min_pair(points):
    """O(N^2) closest-pair oracle with lowest-(i, j) tie-break."""
    n = len(points)
    best = (None, None, math.inf)
    for i in range(n):
        for j in range(i + 1, n):
            d = math.sqrt(sum((points[i][k] - points[j][k]) ** 2 for k in range(len(points[i]))))
            if d < best[2]:
                best = (i, j, d)
    return best


def brute_phi_p(points, p=50):
    """Direct power-sum transcription (no log-space tricks)."""
    n = len(points)
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            d = math.sqrt(sum((points[i][k] - points[j][k]) ** 2 for k in range(len(points[i]))))
            total += (1.0 / d) ** p
    return total ** (1.0 / p)


def brute_cl2(points):
    """Direct three-term transcription of the centered L2 discrepancy."""
    x = np.asarray(points)
    n, d = x.shape
    term1 = (13.0 / 12.0) ** d
    term2 = 0.0
    for i in range(n):
        prod = 1.0
        for k in range(d):
            a = abs(x[i, k] - 0.5)
            prod *= 1.0 + 0.5 * (a - a * a)
        term2 += prod
    term2 *= 2.0 / n
    term3 = 0.0
    for i in range(n):
        for j in range(n):
            prod = 1.0
            for k in range(d):
                ai = abs(x[i, k] - 0.5)
                aj = abs(x[j, k] - 0.5)
                prod *= 1.0 + 0.5 * (ai + aj - abs(x[i, k] - x[j, k]))
            term3 += prod
    term3 /= n * n
    return math.sqrt(term1 - term2 + term3)


def assert_latin(points, n=None):
    """Independent Latin-property check: the i-th sorted value per dimension
    must sit in bin [i/N, (i+1)/N), the last bin closed at 1."""
    pts = np.asarray(points)
    n = n or len(pts)
    assert len(pts) == n
    for j in range(pts.shape[1]):
        vals = np.sort(pts[:, j])
        for i, v in enumerate(vals):
            lo = i / n
            hi = (i + 1) / n
            ok = lo <= v < hi or (i == n - 1 and v == 1.0)
            assert ok, f"dim {j}: sorted value {v} at rank {i} outside [{lo}, {hi})"


@pytest.fixture
def unit2():
    return Domain.unit(2)


@pytest.fixture
def rng():
    return RngState(42)
