"""Monte-Carlo integration of the compactly supported cone combinations.

The indicator sum Gamma'_Q(., X) is evaluated on millions of float samples;
that inner loop is the one hot spot of the package, so it is served by a
compiled kernel (weylcones._mckernel, built from Cython) when available and
by a vectorised numpy fallback otherwise.  Both backends perform the same
comparisons, so results are bit-identical for a fixed seed.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np

from . import linalg as la
from .errors import ConsistencyError
from .rootdata import RootDatum, StdParabolic

try:  # pragma: no cover - exercised when the extension is built
    from . import _mckernel as _kernel
except ImportError:  # pragma: no cover
    from . import _mc_numpy as _kernel

BACKEND = _kernel.BACKEND


def _gamma_tables(rd: RootDatum, q: StdParabolic, x_vec: la.Vec):
    """Per-parabolic float pairing tables for Gamma'_Q(., X)."""
    gram = np.array([[float(v) for v in row] for row in rd.gram])
    mats_a, mats_b, shifts, signs = [], [], [], []
    for p in rd.parabolics_between(q, rd.group):
        roots = rd.pair(q, p).roots
        coweights = rd.pair(p, rd.group).coweights
        a = np.array([[float(v) for v in r] for r in roots], dtype=float).reshape(len(roots), rd.dim)
        b = np.array([[float(v) for v in w] for w in coweights], dtype=float).reshape(
            len(coweights), rd.dim
        )
        a = a @ gram
        b = b @ gram
        shift = np.array(
            [float(rd.pairing(w, x_vec)) for w in coweights], dtype=float
        ).reshape(len(coweights))
        mats_a.append(np.ascontiguousarray(a))
        mats_b.append(np.ascontiguousarray(b))
        shifts.append(np.ascontiguousarray(shift))
        signs.append(p.epsilon)
    return mats_a, mats_b, shifts, signs


def integrate_gamma_prime(
    rd: RootDatum,
    q: StdParabolic,
    x_vec: la.Vec,
    samples: int = 1_000_000,
    seed: int = 0,
    margin: float = 0.06,
) -> dict:
    """Monte-Carlo estimate of  integral of Gamma'_Q(H, X) over a_Q^G.

    H is sampled in coroot coordinates H = sum s_i coroot_i over the box
    0 - m_i <= s_i <= w_i(X) + m_i, which contains the support when X lies in
    the closed positive chamber; a surrounding shell is sampled as well and
    must evaluate to zero everywhere, so a support violation cannot silently
    bias the estimate.
    """
    pair = rd.pair(q, rd.group)
    dim = pair.dim
    if dim == 0:
        return {"estimate": 1.0, "samples": 0, "hits": 0, "backend": BACKEND}
    coroots = np.array([[float(v) for v in c] for c in pair.coroots])
    weights_x = [float(rd.pairing(w, x_vec)) for w in pair.weights]
    lo = np.array([-margin * (1.0 + abs(t)) for t in weights_x])
    hi = np.array([t + margin * (1.0 + abs(t)) for t in weights_x])
    jacobian = math.sqrt(abs(float(la.gram_det(pair.coroots, rd.gram))))
    box_volume = float(np.prod(hi - lo)) * jacobian

    mats_a, mats_b, shifts, signs = _gamma_tables(rd, q, x_vec)
    rng = np.random.default_rng(seed)

    s = rng.uniform(lo, hi, size=(samples, dim))
    h = s @ coroots
    total, _hits = _kernel.gamma_indicator_sum(h, mats_a, mats_b, shifts, signs)
    estimate = box_volume * total / samples

    shell_n = max(10_000, samples // 100)
    scale = rng.uniform(1.0, 1.5, size=(shell_n, 1))
    side = rng.integers(0, 2, size=(shell_n, 1)).astype(float) * 2.0 - 1.0
    mid = (lo + hi) / 2.0
    half = (hi - lo) / 2.0
    shell = mid + side * scale * half * rng.uniform(1.0, 1.2, size=(shell_n, dim))
    outside = np.abs(shell - mid) > half
    shell = shell[outside.any(axis=1)]
    if len(shell):
        h_shell = shell @ coroots
        _tot, nonzero = _kernel.gamma_indicator_sum(h_shell, mats_a, mats_b, shifts, signs)
        if nonzero:
            raise ConsistencyError(
                "Gamma' does not vanish outside the sampling box; estimate would be biased"
            )
    return {"estimate": estimate, "samples": samples, "hits": _hits, "backend": BACKEND}


def sample_chamber_vector(rd: RootDatum, q: StdParabolic, rng: random.Random, lo: int = 1, hi: int = 6) -> la.Vec:
    """Random rational X in the open positive chamber of a_Q^G."""
    pair = rd.pair(q, rd.group)
    x = tuple(Fraction(0) for _ in range(rd.dim))
    for cw in pair.coweights:
        x = la.vadd(x, la.vscale(Fraction(rng.randint(lo, hi), rng.randint(1, 2)), cw))
    return x
