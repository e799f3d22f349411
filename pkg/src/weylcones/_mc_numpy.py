"""Pure numpy fallback for the Monte-Carlo cone-indicator kernel."""

from __future__ import annotations

import numpy as np

BACKEND = "numpy"


def gamma_indicator_sum(samples, mats_a, mats_b, shifts_b, signs):
    """Sum over samples of  sum_P sign_P * [A_P h > 0] * [B_P h > shift_P].

    samples: (N, dim) float64; mats_a/mats_b: per-parabolic row stacks of
    pairing vectors (possibly empty); shifts_b: per-parabolic vectors of
    pairing values against the offset X.  Returns (total, nonzero_count).
    """
    n = samples.shape[0]
    total = np.zeros(n, dtype=np.int64)
    for a, b, shift, sign in zip(mats_a, mats_b, shifts_b, signs):
        ok = np.ones(n, dtype=bool)
        if a.size:
            ok &= (samples @ a.T > 0.0).all(axis=1)
        if b.size:
            ok &= (samples @ b.T > shift).all(axis=1)
        if sign > 0:
            total[ok] += 1
        else:
            total[ok] -= 1
    return int(total.sum()), int(np.count_nonzero(total))
