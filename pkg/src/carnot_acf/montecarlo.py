"""Rejection Monte-Carlo estimates of solid integrals, used as an oracle.

Samples are drawn uniformly in a box containing D(0,r) and rejected outside
the gauge ball.  Integrands with a negative singular exponent are stratified
over dyadic shells r·2^{-k-1} ≤ N < r·2^{-k}; shell k is sampled in the box
of the ball of radius r·2^{-k}, which keeps the per-shell variance bounded.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError
from .gauge import norm_values
from .groups import CarnotGroup, box_half_widths
from .quadrature import Integrand, QuadEstimate

CHUNK = 1 << 18
MIN_SHELL_SAMPLES = 2000
SHELL_TAIL = 1e-12


def _box_mean(group, f, rng, radius, lo_norm, n):
    """Sum and sum of squares of f·1{lo ≤ N < radius} over n box samples."""
    half = np.array([w * radius ** d for w, d in zip(box_half_widths(group), group.dilation_weights)])
    s1 = s2 = 0.0
    accepted = 0
    left = n
    while left > 0:
        k = min(CHUNK, left)
        pts = rng.uniform(-1.0, 1.0, size=(k, group.N)) * half
        nrm = norm_values(group, pts)
        mask = (nrm < radius) & (nrm >= lo_norm) & (nrm > 0)
        vals = np.zeros(k)
        if mask.any():
            vals[mask] = np.asarray(f(pts[mask]), dtype=float)
        s1 += float(np.sum(vals))
        s2 += float(np.sum(vals * vals))
        accepted += int(mask.sum())
        left -= k
    volume = float(np.prod(2 * half))
    mean = s1 / n
    var = max(s2 / n - mean * mean, 0.0)
    return volume * mean, volume * np.sqrt(var / max(n - 1, 1)), accepted


def mc_rejection_solid(group: CarnotGroup, f: Integrand, r: float, samples: int,
                       seed: int) -> QuadEstimate:
    """Unbiased estimate of ∫_{D(0,r)} f dV with its standard error.

    Reproducible for a fixed seed.  ``converged`` is False when nothing was
    accepted.
    """
    if not r > 0:
        raise InvalidArgumentError(f"radius must be positive, got {r!r}")
    if samples < 2:
        raise InvalidArgumentError("need at least two samples")
    rng = np.random.default_rng(seed)
    alpha = f.singular_exponent
    if alpha >= 0:
        value, err, accepted = _box_mean(group, f, rng, r, 0.0, samples)
        return QuadEstimate(value, err, samples, f"mc-rejection(n={samples},seed={seed})",
                            accepted > 0, {"accepted": accepted})

    beta = group.Q + alpha
    if beta <= 0:
        raise InvalidArgumentError(f"singular exponent {alpha} not integrable in Q = {group.Q}")
    # shell k carries mass ∝ 2^{-kβ}; stop once the rest is negligible
    n_shells = int(np.ceil(np.log2(1.0 / SHELL_TAIL) / beta))
    share = 2.0 ** (-beta * np.arange(n_shells))
    share /= share.sum()
    counts = np.maximum(MIN_SHELL_SAMPLES, np.floor(share * samples)).astype(int)
    total = var = 0.0
    accepted = 0
    last = 0.0
    for k, n in enumerate(counts):
        outer = r * 2.0 ** (-k)
        value, err, acc = _box_mean(group, f, rng, outer, outer / 2, int(n))
        total += value
        var += err * err
        accepted += acc
        last = value
    # mass left inside the innermost ball, by the homogeneity ratio of the shells
    tail = abs(last) / (2.0 ** beta - 1.0)
    return QuadEstimate(total, float(np.sqrt(var) + tail), int(counts.sum()),
                        f"mc-rejection-shells(n={int(counts.sum())},shells={n_shells},seed={seed})",
                        accepted > 0, {"accepted": accepted, "tail_bound": tail})
