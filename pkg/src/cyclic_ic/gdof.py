"""Symmetric channels and generalized degrees of freedom of the symmetric capacity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .channel import ChannelInstance, Regime, classify_regime, etw_split, hk_params, make_channel, outer_params
from .polyhedra import symmetric_max
from .regions import RegimeError, achievable_region, outer_region, strong_region


@dataclass(frozen=True)
class GdofPoint:
    alpha: float
    snr: float
    dsym_lower: float
    dsym_upper: float
    dsym_formula: float


def symmetric_channel(k: int, snr: float, alpha: float) -> ChannelInstance:
    """Every user gets ``SNR = snr`` and ``INR = snr ** alpha``."""
    if snr <= 1:
        raise ValueError(f"snr must exceed 1 for log2(snr) normalization, got {snr}")
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    return make_channel(k, [snr] * k, [snr ** alpha] * k)


def dsym_formula(alpha: float) -> float:
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if alpha < 1:
        return min(max(alpha, 1 - alpha), 1 - alpha / 2)
    return min(alpha / 2, 1.0)


def dsym_numeric(k: int, alpha: float, snr: float) -> tuple[float, float]:
    """Lower/upper estimates of the normalized symmetric rate at finite SNR.

    Weak side: HK region under the ETW split against the outer bound.
    Strong side: the known capacity region, so both values coincide.
    """
    ch = symmetric_channel(k, snr, alpha)
    scale = np.log2(snr)
    regime = classify_regime(ch)
    if regime in (Regime.STRONG, Regime.VERY_STRONG):
        value = symmetric_max(strong_region(ch), k) / scale
        return value, value
    if regime is not Regime.WEAK:
        raise RegimeError(f"symmetric channel unexpectedly in regime {regime.value}")
    lower = symmetric_max(achievable_region(hk_params(ch, etw_split(ch)), k), k) / scale
    upper = symmetric_max(outer_region(outer_params(ch), k), k) / scale
    return lower, upper


def gdof_sweep(k: int, alphas: Iterable[float], snr: float) -> list[GdofPoint]:
    alphas = list(alphas)
    if not alphas:
        raise ValueError("empty alpha grid")
    points = []
    for alpha in alphas:
        lo, hi = dsym_numeric(k, alpha, snr)
        points.append(GdofPoint(float(alpha), float(snr), lo, hi, dsym_formula(alpha)))
    return points
