"""Pure numpy implementations of the hot kernels.

Loops run over the (few) cells and vectorise over replicates, accumulating in
the same order as the compiled kernels so both backends agree bit for bit on
ordinary inputs.
"""

import numpy as np

NAME = "python"


def statistics_matrix(counts, probs, cum, n):
    """All six statistics for each row of ``counts``.

    Columns: Pearson chi-square, discrete KS, ordinal CvM, ordinal Watson,
    ordinal AD, nominal KS. Entries are NaN where a statistic is undefined
    (zero null cell for chi-square/AD, empty sample for the N^-1 statistics).
    """
    counts = np.asarray(counts)
    r, k = counts.shape
    p = np.asarray(probs, dtype=np.float64)
    h = np.asarray(cum, dtype=np.float64)
    out = np.zeros((r, 6))
    chi, ks, cvm, wat, ad, nks = (out[:, j] for j in range(6))
    z = np.zeros((r, k))
    acc = np.zeros(r)
    bad_chi = False
    for i in range(k):
        e = n * p[i]
        d = counts[:, i] - e
        if e > 0.0:
            chi += d * d / e
        if p[i] <= 0.0:
            bad_chi = True
        nks += np.abs(d)
        acc = acc + d
        z[:, i] = acc
        np.maximum(ks, np.abs(acc), out=ks)
    nks *= 0.5
    z_bar = np.zeros(r)
    for i in range(k):
        z_bar += z[:, i] * p[i]
    for i in range(k):
        zi = z[:, i]
        cvm += zi * zi * p[i]
        dz = zi - z_bar
        wat += dz * dz * p[i]
        if i < k - 1:
            ad += zi * zi * p[i] / (h[i] * (1.0 - h[i]))
    if n > 0:
        cvm /= n
        wat /= n
        ad /= n
    else:
        cvm[:] = wat[:] = ad[:] = np.nan
    if bad_chi:
        chi[:] = ad[:] = np.nan
    return out


def compositions(n, k):
    """Every vector of ``k`` non-negative integers summing to ``n``, in lexicographic order."""
    if k == 1:
        return np.array([[n]], dtype=np.int64)
    blocks = []
    for first in range(n + 1):
        rest = compositions(n - first, k - 1)
        head = np.full((rest.shape[0], 1), first, dtype=np.int64)
        blocks.append(np.hstack([head, rest]))
    return np.vstack(blocks)
