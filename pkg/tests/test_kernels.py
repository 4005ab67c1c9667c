"""Backend equivalence: the compiled kernels must match the reference ones."""

import numpy as np
import pytest

from ldbkit import _kernels
from ldbkit._kernels import _ref

try:
    from ldbkit._kernels import _fast
except ImportError:
    _fast = None

needs_compiled = pytest.mark.skipif(_fast is None,
                                    reason="compiled kernels not built")


def random_cube_inputs(rng, m, k):
    pts = rng.uniform(-1.0, 1.0, size=(m, k))
    # sprinkle exact boundary values so the closed/open logic is exercised
    pts[rng.random(pts.shape) < 0.05] = 1.0
    pts[rng.random(pts.shape) < 0.05] = 0.0
    alive = (rng.random(m) < 0.8).astype(np.uint8)
    lo = np.array([-1.0, 0.0, -0.5, 0.75][:k])
    hi = np.array([0.0, 1.0, 0.0, 1.0][:k])
    closed = np.array([0, 1, 0, 1][:k], dtype=np.uint8)
    return np.ascontiguousarray(pts), alive, lo, hi, closed


@needs_compiled
def test_backend_selected():
    assert _kernels.HAVE_COMPILED
    assert _kernels.BACKEND in ("compiled", "python")


@needs_compiled
def test_wpt_level_bit_identical():
    rng = np.random.default_rng(0)
    from ldbkit.wavelets import build_filter
    for taps in (6, 18):
        q = build_filter("coiflet", taps)
        for nb in (4, 8, 32, 256):
            x = np.ascontiguousarray(rng.standard_normal((5, nb)))
            a = _ref.wpt_level(x, q.low_pass, q.high_pass)
            b = _fast.wpt_level(x, q.low_pass, q.high_pass)
            assert np.array_equal(a[0], np.asarray(b[0]))
            assert np.array_equal(a[1], np.asarray(b[1]))


@needs_compiled
def test_cube_mask_bit_identical():
    rng = np.random.default_rng(1)
    for k in (1, 2, 3, 4):
        pts, alive, lo, hi, closed = random_cube_inputs(rng, 200, k)
        a = _ref.cube_mask(pts, alive, lo, hi, closed)
        b = np.asarray(_fast.cube_mask(pts, alive, lo, hi, closed))
        assert np.array_equal(a, b)


@needs_compiled
def test_split_counts_bit_identical():
    rng = np.random.default_rng(2)
    for k in (1, 2, 3):
        pts_a, alive_a, lo, hi, closed = random_cube_inputs(rng, 150, k)
        pts_b, alive_b, _, _, _ = random_cube_inputs(rng, 90, k)
        a = _ref.split_counts(pts_a, alive_a, pts_b, alive_b, lo, hi, closed)
        b = _fast.split_counts(pts_a, alive_a, pts_b, alive_b, lo, hi, closed)
        assert np.array_equal(a[0], np.asarray(b[0]))
        assert np.array_equal(a[1], np.asarray(b[1]))


def test_cube_mask_against_loop_oracle():
    rng = np.random.default_rng(3)
    pts, alive, lo, hi, closed = random_cube_inputs(rng, 120, 3)
    got = _kernels.cube_mask(pts, alive, lo, hi, closed)
    for r in range(120):
        inside = bool(alive[r])
        for a in range(3):
            v = pts[r, a]
            if closed[a]:
                inside &= lo[a] <= v <= hi[a]
            else:
                inside &= lo[a] <= v < hi[a]
        assert bool(got[r]) == inside


def test_split_counts_against_bincount_oracle():
    rng = np.random.default_rng(4)
    k = 3
    pts, alive, lo, hi, closed = random_cube_inputs(rng, 300, k)
    counts, _ = _kernels.split_counts(pts, alive, pts[:0], alive[:0], lo, hi, closed)
    mid = 0.5 * (lo + hi)
    expected = np.zeros(1 << k, dtype=np.int64)
    inside = _kernels.cube_mask(pts, alive, lo, hi, closed).astype(bool)
    for r in np.flatnonzero(inside):
        bucket = 0
        for a in range(k):
            bucket |= int(pts[r, a] >= mid[a]) << a
        expected[bucket] += 1
    assert np.array_equal(counts, expected)
    assert counts.sum() == inside.sum()


def test_dead_points_never_counted():
    pts = np.zeros((4, 1))
    alive = np.array([1, 0, 1, 0], dtype=np.uint8)
    lo, hi = np.array([-1.0]), np.array([1.0])
    closed = np.array([1], dtype=np.uint8)
    assert _kernels.cube_mask(pts, alive, lo, hi, closed).sum() == 2


def test_env_override_python(monkeypatch):
    # the selector honours LDBKIT_KERNELS at import time
    import importlib
    import ldbkit._kernels as pkg
    monkeypatch.setenv("LDBKIT_KERNELS", "python")
    mod = importlib.reload(pkg)
    try:
        assert mod.BACKEND == "python"
    finally:
        monkeypatch.delenv("LDBKIT_KERNELS")
        importlib.reload(pkg)
