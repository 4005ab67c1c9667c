"""Pure-numpy reference kernels.

These are the fallback implementations of the hot loops; ``_fast.pyx``
mirrors them operation-for-operation (same tap order, same accumulation
order) so that both backends produce bit-identical results.
"""

import numpy as np

BACKEND = "python"


def wpt_level(x, lo, hi):
    """One periodized convolve-then-decimate step applied row-wise.

    x is (rows, nb) with nb even; returns (low, high), each (rows, nb//2):
        low[r, t]  = sum_i lo[i] * x[r, (2t + i) % nb]
        high[r, t] = sum_i hi[i] * x[r, (2t + i) % nb]
    """
    rows, nb = x.shape
    half = nb // 2
    out_lo = np.zeros((rows, half), dtype=np.float64)
    out_hi = np.zeros((rows, half), dtype=np.float64)
    base = np.arange(0, nb, 2)
    for i in range(len(lo)):
        col = x[:, (base + i) % nb]
        out_lo += lo[i] * col
        out_hi += hi[i] * col
    return out_lo, out_hi


def _inside(pts, alive, lo, hi, hi_closed):
    k = lo.shape[0]
    mask = alive.astype(bool)
    for a in range(k):
        c = pts[:, a]
        upper = (c <= hi[a]) if hi_closed[a] else (c < hi[a])
        mask &= (c >= lo[a]) & upper
    return mask

def cube_mask(pts, alive, lo, hi, hi_closed):
    """uint8 mask of alive points whose first k coordinates lie in the cube."""
    return _inside(pts, alive, lo, hi, hi_closed).astype(np.uint8)


def split_counts(pts_a, alive_a, pts_b, alive_b, lo, hi, hi_closed):
    """Per-child point counts for the 2^k equal subdivisions of a cube.

    Child c covers, on axis a, the lower half when bit a of c is 0 and the
    upper half otherwise; a point belongs to the upper half iff its
    coordinate >= the axis midpoint (consistent with half-open cubes).
    Returns (counts_a, counts_b), each an int64 vector of length 2^k.
    """
    k = lo.shape[0]
    mid = 0.5 * (lo + hi)
    out = []
    for pts, alive in ((pts_a, alive_a), (pts_b, alive_b)):
        mask = _inside(pts, alive, lo, hi, hi_closed)
        bucket = np.zeros(pts.shape[0], dtype=np.int64)
        for a in range(k):
            bucket |= (pts[:, a] >= mid[a]).astype(np.int64) << a
        out.append(np.bincount(bucket[mask], minlength=1 << k))
    return out[0], out[1]
