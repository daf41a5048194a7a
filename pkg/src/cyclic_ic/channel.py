"""Channel parameterization for the K-user cyclic Gaussian interference channel.

Transmitter ``i`` reaches its own receiver with ``snr[i]`` and leaks into
receiver ``i - 1`` (mod K) with ``inr[i]``.  Everything is linear scale and
all rates are in bits per channel use.  Internal indices are 0-based; user
labels exposed to the outside world are 1-based.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class ChannelError(ValueError):
    """Base class for invalid channel or split parameters."""


class TooFewUsersError(ChannelError):
    pass


class LengthMismatchError(ChannelError):
    pass


class NonPositiveSNRError(ChannelError):
    pass


class NegativeINRError(ChannelError):
    pass


class SplitError(ChannelError):
    """Power split inconsistent with its channel."""


class Regime(str, enum.Enum):
    WEAK = "Weak"
    STRONG = "Strong"
    VERY_STRONG = "VeryStrong"
    MIXED = "Mixed"


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ChannelInstance:
    """Validated per-user SNR/INR of a cyclic channel.  Build with :func:`make_channel`."""

    snr: np.ndarray
    inr: np.ndarray

    @property
    def k(self) -> int:
        return len(self.snr)

    def __eq__(self, other):
        if not isinstance(other, ChannelInstance):
            return NotImplemented
        return np.array_equal(self.snr, other.snr) and np.array_equal(self.inr, other.inr)

    def __hash__(self):
        return hash((self.snr.tobytes(), self.inr.tobytes()))

    def __repr__(self):
        return f"ChannelInstance(k={self.k}, snr={self.snr.tolist()}, inr={self.inr.tolist()})"


def make_channel(k: int, snr: Sequence[float], inr: Sequence[float]) -> ChannelInstance:
    if int(k) != k or k < 2:
        raise TooFewUsersError(f"need at least 2 users, got k={k}")
    k = int(k)
    if len(snr) != k or len(inr) != k:
        raise LengthMismatchError(
            f"expected {k} SNR and INR values, got {len(snr)} and {len(inr)}"
        )
    snr_arr = np.asarray(snr, dtype=float)
    inr_arr = np.asarray(inr, dtype=float)
    if not np.all(np.isfinite(snr_arr)) or np.any(snr_arr <= 0):
        raise NonPositiveSNRError(f"SNR values must be finite and > 0: {snr_arr.tolist()}")
    if not np.all(np.isfinite(inr_arr)) or np.any(inr_arr < 0):
        raise NegativeINRError(f"INR values must be finite and >= 0: {inr_arr.tolist()}")
    return ChannelInstance(_frozen(snr_arr), _frozen(inr_arr))


def db_to_linear(x_db):
    return np.power(10.0, np.asarray(x_db, dtype=float) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(np.asarray(x, dtype=float))


def classify_regime(ch: ChannelInstance) -> Regime:
    """Label the interference regime.

    Checks run in the order VeryStrong, Strong, Weak so that equality cases
    get the stronger label.
    """
    snr, inr = ch.snr, ch.inr
    snr_prev = np.roll(snr, 1)  # SNR_{i-1}
    if np.all(inr >= (1.0 + snr_prev) * snr):
        return Regime.VERY_STRONG
    if np.all(inr >= snr):
        return Regime.STRONG
    if np.all(inr <= snr):
        return Regime.WEAK
    return Regime.MIXED


@dataclass(frozen=True, eq=False)
class PowerSplit:
    """Private-message INR of each transmitter at the receiver it interferes with."""

    inr_private: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, PowerSplit):
            return NotImplemented
        return np.array_equal(self.inr_private, other.inr_private)

    def __hash__(self):
        return hash(self.inr_private.tobytes())

    def __repr__(self):
        return f"PowerSplit(inr_private={self.inr_private.tolist()})"


def make_split(ch: ChannelInstance, inr_private: Sequence[float]) -> PowerSplit:
    split = PowerSplit(_frozen(inr_private))
    check_split(ch, split)
    return split


def check_split(ch: ChannelInstance, split: PowerSplit) -> None:
    p = split.inr_private
    if p.shape != (ch.k,):
        raise SplitError(f"split has {p.size} entries, channel has {ch.k} users")
    if np.any(p < 0) or np.any(p > ch.inr):
        raise SplitError(f"private INR must lie in [0, INR_i]: {p.tolist()} vs {ch.inr.tolist()}")


def etw_split(ch: ChannelInstance) -> PowerSplit:
    """Private INR at the victim receiver set to ``min(INR_i, 1)``."""
    return PowerSplit(_frozen(np.minimum(ch.inr, 1.0)))


def private_only_split(ch: ChannelInstance) -> PowerSplit:
    return PowerSplit(_frozen(ch.inr))


def private_snr(ch: ChannelInstance, split: PowerSplit) -> np.ndarray:
    """SNR of each user's private part at its own receiver.

    A user with no interference link keeps all of its power private.
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = np.where(ch.inr > 0, split.inr_private / np.where(ch.inr > 0, ch.inr, 1.0), 1.0)
    return ch.snr * frac


def _cyclic_tail_sum(values: np.ndarray, i: int) -> float:
    """Sum of ``values[j]`` over ``j`` not in ``{i, i-1}`` (mod K)."""
    k = len(values)
    skip = {i % k, (i - 1) % k}
    return sum(float(values[j]) for j in range(k) if j not in skip)


@dataclass(frozen=True, eq=False)
class HkParams:
    """Per-user mutual-information terms of the Han-Kobayashi region (bits).

    ``a``: private rate given both common messages; ``d``: own message given
    the interferer's common part; ``e``: own private plus interferer common
    given own common; ``g``: own message plus interferer common.  ``r`` is
    the sum-rate bound ``a[i-1] + g[i] + sum of e over the remaining users``.
    """

    a: np.ndarray
    d: np.ndarray
    e: np.ndarray
    g: np.ndarray
    r: np.ndarray

    @property
    def k(self) -> int:
        return len(self.a)


def make_hk_params(a, d, e, g) -> HkParams:
    a, d, e, g = (np.asarray(v, dtype=float) for v in (a, d, e, g))
    if not (a.shape == d.shape == e.shape == g.shape) or a.ndim != 1:
        raise ChannelError("a, d, e, g must be 1-D sequences of equal length")
    k = len(a)
    r = [float(a[(i - 1) % k]) + float(g[i]) + _cyclic_tail_sum(e, i) for i in range(k)]
    return HkParams(_frozen(a), _frozen(d), _frozen(e), _frozen(g), _frozen(r))


def hk_params(ch: ChannelInstance, split: PowerSplit) -> HkParams:
    """Evaluate the HK terms for Gaussian inputs with a fixed time-sharing variable.

    Receiver ``i`` treats the private part of transmitter ``i+1`` as noise,
    so its effective noise floor is ``1 + inr_private[i+1]``.
    """
    check_split(ch, split)
    snr, inr = ch.snr, ch.inr
    snr_p = private_snr(ch, split)
    inr_next = np.roll(inr, -1)  # INR_{i+1}
    floor = 1.0 + np.roll(split.inr_private, -1)
    a = np.log2((floor + snr_p) / floor)
    d = np.log2((floor + snr) / floor)
    e = np.log2((1.0 + inr_next + snr_p) / floor)
    g = np.log2((1.0 + inr_next + snr) / floor)
    return make_hk_params(a, d, e, g)


def etw_closed_form(ch: ChannelInstance) -> HkParams:
    """HK terms in the closed form used for the two-bit argument.

    The constant 1 bit subtracted from every term assumes a noise-plus-private
    floor of exactly 2, which is tight when every INR is at least 1 and
    pessimistic otherwise.  For sub-unity INR some terms can be negative.
    """
    snr, inr = ch.snr, ch.inr
    with np.errstate(divide="ignore"):
        snr_p = np.where(inr > 0, np.minimum(snr, snr / np.where(inr > 0, inr, 1.0)), snr)
    inr_next = np.roll(inr, -1)
    a = np.log2(2.0 + snr_p) - 1.0
    d = np.log2(2.0 + snr) - 1.0
    e = np.log2(1.0 + inr_next + snr_p) - 1.0
    g = np.log2(1.0 + inr_next + snr) - 1.0
    return make_hk_params(a, d, e, g)


@dataclass(frozen=True, eq=False)
class OuterParams:
    """Terms of the weak-regime outer bound (bits)."""

    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    lam: np.ndarray
    mu: np.ndarray
    rho: np.ndarray

    @property
    def k(self) -> int:
        return len(self.alpha)


def outer_params(ch: ChannelInstance) -> OuterParams:
    snr, inr = ch.snr, ch.inr
    inr_next = np.roll(inr, -1)
    alpha = np.log2(1.0 + inr_next + snr / (1.0 + inr))
    beta = np.log2((1.0 + snr) / (1.0 + inr))
    gamma = np.log2(1.0 + inr_next + snr)
    lam = np.log2(1.0 + snr)
    mu = np.log2(1.0 + inr)
    k = ch.k
    rho = [float(beta[(i - 1) % k]) + float(gamma[i]) + _cyclic_tail_sum(alpha, i) for i in range(k)]
    return OuterParams(*(_frozen(v) for v in (alpha, beta, gamma, lam, mu, rho)))


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    user: int  # 1-based
    value: float
    bound: float
    relation: str  # "<=" or "=="
    passed: bool


USEFUL_BOUNDS = (
    ("lambda-d", 1.0, "<="),
    ("lambda-(a+e_prev)", 2.0, "<="),
    ("beta-a", 1.0, "<="),
    ("alpha-e", 1.0, "<="),
    ("gamma-g", 1.0, "=="),
    ("mu-e_prev", 1.0, "<="),
)


def useful_inequalities(
    ch: ChannelInstance, hk: HkParams, ob: OuterParams, tol: float = 1e-12
) -> list[InequalityCheck]:
    """Per-user differences between outer-bound and achievable terms.

    Out-of-regime inputs are evaluated and reported like any other.  The
    ``gamma-g`` entry passes only when the difference is 1 to within ``tol``,
    which holds for :func:`etw_closed_form`; the general split form gives
    ``log2(1 + min(INR_{i+1}, 1))`` there.
    """
    if hk.k != ch.k or ob.k != ch.k:
        raise ChannelError("parameter dimensions do not match the channel")
    e_prev = np.roll(hk.e, 1)
    values = (
        ob.lam - hk.d,
        ob.lam - (hk.a + e_prev),
        ob.beta - hk.a,
        ob.alpha - hk.e,
        ob.gamma - hk.g,
        ob.mu - e_prev,
    )
    report = []
    for i in range(ch.k):
        for (name, bound, rel), vals in zip(USEFUL_BOUNDS, values):
            v = float(vals[i])
            ok = abs(v - bound) <= tol if rel == "==" else v <= bound + tol
            report.append(InequalityCheck(name, i + 1, v, bound, rel, ok))
    return report
