"""Seeded random channel instances.

All randomized suites draw from numpy's PCG64 bit generator, whose output
stream is fixed across platforms for a given seed.

Weak instances: per user ``SNR_dB ~ U[0, 40]`` and ``INR_dB ~ U[-10, SNR_dB]``.
Strong instances: ``SNR_dB ~ U[0, 40]`` and ``INR_dB ~ U[SNR_dB, SNR_dB + 30]``.
Very strong instances scale ``(1 + SNR_{i-1}) SNR_i`` up by ``U[0, 10]`` dB.
"""

from __future__ import annotations

import numpy as np

from .channel import ChannelInstance, db_to_linear, make_channel


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_weak_channel(rng: np.random.Generator, k: int) -> ChannelInstance:
    snr_db = rng.uniform(0.0, 40.0, size=k)
    inr_db = rng.uniform(-10.0, snr_db)
    return make_channel(k, db_to_linear(snr_db), db_to_linear(np.minimum(inr_db, snr_db)))


def random_strong_channel(rng: np.random.Generator, k: int) -> ChannelInstance:
    snr_db = rng.uniform(0.0, 40.0, size=k)
    inr_db = rng.uniform(snr_db, snr_db + 30.0)
    snr = db_to_linear(snr_db)
    return make_channel(k, snr, np.maximum(db_to_linear(inr_db), snr))


def random_very_strong_channel(rng: np.random.Generator, k: int) -> ChannelInstance:
    snr = db_to_linear(rng.uniform(0.0, 40.0, size=k))
    floor = (1.0 + np.roll(snr, 1)) * snr
    inr = floor * db_to_linear(rng.uniform(0.0, 10.0, size=k))
    return make_channel(k, snr, np.maximum(inr, floor))


def sample_region_points(sys, rng: np.random.Generator, n: int) -> np.ndarray:
    """Points of a region that contains the origin, biased toward its boundary.

    Rays from the origin along random nonnegative directions (some with
    zeroed coordinates, to reach the faces on the axes) are cut where they
    leave the region; half the points sit exactly on the exit point and the
    rest are pulled back by at most 10%.
    """
    A, b = sys.A, sys.b
    if np.any(b < 0):
        raise ValueError("region must contain the origin")
    k = sys.dim
    pts = np.empty((n, k))
    for idx in range(n):
        u = np.abs(rng.standard_normal(k))
        if rng.random() < 0.3:
            u[rng.random(k) < 0.5] = 0.0
            if not u.any():
                u[rng.integers(k)] = 1.0
        proj = A @ u
        hit = proj > 1e-15
        t = np.min(b[hit] / proj[hit]) if hit.any() else 0.0
        scale = 1.0 if rng.random() < 0.5 else rng.uniform(0.9, 1.0)
        pts[idx] = scale * t * u
    return pts
