"""Rayleigh channel sampling and link budgets for the uplink model.

One sensor talks to an N_b-antenna base station, directly and via an
IRS with N programmable elements, while an N_e-antenna eavesdropper
listens.  All five channel blocks are i.i.d. unit-variance circularly
symmetric complex normal.
"""

from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 2.99792458e8  # m/s


@dataclass(frozen=True)
class Dimensions:
    """Antenna/element counts: IRS elements, BS antennas, Eve antennas."""

    n_irs: int
    n_bs: int
    n_eve: int

    def __post_init__(self):
        if self.n_irs < 0:
            raise ValueError("n_irs must be >= 0")
        if self.n_bs < 1 or self.n_eve < 1:
            raise ValueError("n_bs and n_eve must be >= 1")


@dataclass(frozen=True)
class ChannelSet:
    """One realization of the five channel blocks for one sensor.

    l: direct sensor->BS link, shape (n_bs,)
    A: IRS->BS, shape (n_bs, n_irs)
    h: sensor->IRS, shape (n_irs,)
    g: sensor->Eve, shape (n_eve,)
    Z: IRS->Eve, shape (n_eve, n_irs)
    """

    l: np.ndarray
    A: np.ndarray
    h: np.ndarray
    g: np.ndarray
    Z: np.ndarray


@dataclass(frozen=True)
class LinkBudget:
    """Scalar link parameters: path losses, powers, noise floors, bandwidth."""

    alpha: float = 1.0        # legitimate path loss (amplitude)
    alpha_e: float = 1.0      # eavesdropper path loss (amplitude)
    power_w: float = 1.0      # transmit power, W
    noise_w: float = 1.0      # BS noise power, W
    noise_e_w: float = 1.0    # Eve noise power, W
    bandwidth_hz: float = 1.0

    def __post_init__(self):
        if self.alpha < 0 or self.alpha_e < 0:
            raise ValueError("path losses must be nonnegative")
        for name in ("power_w", "noise_w", "noise_e_w", "bandwidth_hz"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def snr(self) -> float:
        """Legitimate pre-gain SNR, alpha^2 P / sigma^2."""
        return self.alpha**2 * self.power_w / self.noise_w

    @property
    def snr_e(self) -> float:
        """Eavesdropper pre-gain SNR, alpha_e^2 P / sigma_e^2."""
        return self.alpha_e**2 * self.power_w / self.noise_e_w


def path_loss(d: float, f_c: float) -> float:
    """Free-space amplitude path loss c / (2 pi f_c d).

    Strictly decreasing in both distance and carrier frequency.
    """
    if d <= 0 or f_c <= 0:
        raise ValueError("distance and carrier frequency must be positive")
    return SPEED_OF_LIGHT / (2.0 * np.pi * f_c * d)


def dbm_to_watts(p_dbm: float) -> float:
    """Convert dBm to Watts."""
    return 10.0 ** (p_dbm / 10.0) / 1000.0


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """CN(0,1) samples: (x + iy)/sqrt(2) with x, y standard normal."""
    x = rng.standard_normal(shape)
    y = rng.standard_normal(shape)
    return (x + 1j * y) / np.sqrt(2.0)


def sample_channel_set(rng: np.random.Generator, dims: Dimensions) -> ChannelSet:
    """Draw one full set of Rayleigh channel blocks.

    Draw order is fixed (l, A, h, g, Z) so a given generator state
    always yields a bit-identical ChannelSet.
    """
    l = complex_normal(rng, dims.n_bs)
    A = complex_normal(rng, (dims.n_bs, dims.n_irs))
    h = complex_normal(rng, dims.n_irs)
    g = complex_normal(rng, dims.n_eve)
    Z = complex_normal(rng, (dims.n_eve, dims.n_irs))
    return ChannelSet(l=l, A=A, h=h, g=g, Z=Z)
