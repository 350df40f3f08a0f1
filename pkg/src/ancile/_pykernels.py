"""Pure numpy implementations of the hot kernels.

Used when the compiled ``_kernels`` extension is unavailable or when
``ANCILE_BACKEND=python`` is set. Signatures and results match the extension.
"""
import numpy as np

KS, CVM, AD = 0, 1, 2

_BLOCK = 256


def edf_rows(u, kind):
    """EDF statistic for every row of a row-sorted probability matrix."""
    u = np.asarray(u, dtype=np.float64)
    n = u.shape[1]
    i = np.arange(1, n + 1, dtype=np.float64)
    if kind == KS:
        d_plus = np.max(i / n - u, axis=1)
        d_minus = np.max(u - (i - 1) / n, axis=1)
        return np.maximum(d_plus, d_minus)
    if kind == CVM:
        return np.sum((u - (2 * i - 1) / (2 * n)) ** 2, axis=1) + 1.0 / (12 * n)
    if kind == AD:
        terms = (2 * i - 1) * (np.log(u) + np.log1p(-u[:, ::-1]))
        return -n - terms.sum(axis=1) / n
    raise ValueError(f"unknown EDF kind {kind}")


def _dist_block(x, lo, hi):
    diff = x[lo:hi, None, :] - x[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def dcov_sums(x, y):
    """Sums for the three-term energy form.

    Returns ``(sum a*b, sum a, sum b, sum_k rowsum_a[k] * rowsum_b[k])`` over
    all ordered index pairs, where a and b are the pairwise distance matrices.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    m = x.shape[0]
    s_ab = s_a = s_b = s_rr = 0.0
    for lo in range(0, m, _BLOCK):
        hi = min(lo + _BLOCK, m)
        a = _dist_block(x, lo, hi)
        b = _dist_block(y, lo, hi)
        ra = a.sum(axis=1)
        rb = b.sum(axis=1)
        s_ab += float(np.sum(a * b))
        s_a += float(ra.sum())
        s_b += float(rb.sum())
        s_rr += float(ra @ rb)
    return s_ab, s_a, s_b, s_rr


def _row_means(x):
    m = x.shape[0]
    out = np.empty(m)
    for lo in range(0, m, _BLOCK):
        hi = min(lo + _BLOCK, m)
        out[lo:hi] = _dist_block(x, lo, hi).mean(axis=1)
    return out


def dcov_centered(x, y):
    """Sums of A*B, A*A, B*B over double-centered distance matrices."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    m = x.shape[0]
    ma = _row_means(x)
    mb = _row_means(y)
    ga = ma.mean()
    gb = mb.mean()
    s_ab = s_aa = s_bb = 0.0
    for lo in range(0, m, _BLOCK):
        hi = min(lo + _BLOCK, m)
        A = _dist_block(x, lo, hi) - ma[lo:hi, None] - ma[None, :] + ga
        B = _dist_block(y, lo, hi) - mb[lo:hi, None] - mb[None, :] + gb
        s_ab += float(np.sum(A * B))
        s_aa += float(np.sum(A * A))
        s_bb += float(np.sum(B * B))
    return s_ab, s_aa, s_bb
