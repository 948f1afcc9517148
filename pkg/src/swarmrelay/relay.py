"""Amplify-and-forward gain policy for the UAV swarm.

All UAVs apply one common amplitude gain. The gain is capped both by the
hardware maximum and by the transmit power budget of the most strongly
illuminated UAV, so that no individual budget is ever exceeded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .channel import ChannelMatrix
from .scenario import Scenario


class GainRegime(Enum):
    """Which constraint pins the common relay gain."""

    POWER_LIMITED = "power-limited"
    GAIN_LIMITED = "gain-limited"


@dataclass(frozen=True)
class GainPolicyResult:
    """Common relay gain and the bookkeeping behind it.

    Attributes:
        alpha_u: common amplitude gain, <= the hardware maximum
        regime: GAIN_LIMITED iff alpha_u equals the hardware maximum
        per_uav_tx_power_w: resulting transmit power of each UAV
        gain_matrix: diagonal amplification matrix alpha_u * I
    """

    alpha_u: float
    regime: GainRegime
    per_uav_tx_power_w: np.ndarray
    gain_matrix: np.ndarray


def equal_gain(
    h1: ChannelMatrix, scenario: Scenario, include_noise_in_power: bool = False
) -> GainPolicyResult:
    """Choose the common amplitude gain under the power and gain caps.

    The power received by UAV i is p_i = P_T * sum_j |[H1]_ij|^2, plus the
    relay input noise power when include_noise_in_power is set. The gain is
    alpha_u = min(alpha_max, sqrt(budget / max_i p_i)) so the worst-case
    UAV exactly meets its budget in the power-limited regime.

    The noise term defaults off: the analytic placement roots substitute
    alpha_u^2 = budget / (P_T |h1|^2), which ignores noise pickup, and the
    power levels here make the correction negligible anyway.

    Raises:
        ValueError: if the received power is zero at every UAV.
    """
    n_uavs = h1.n_rx
    received_power = scenario.tx_power_w * np.sum(np.abs(h1.entries) ** 2, axis=1)
    if include_noise_in_power:
        received_power = received_power + scenario.relay_noise_power_w
    peak = float(np.max(received_power))
    if peak <= 0.0:
        raise ValueError("zero received power at every UAV; gain is undefined")

    budget = scenario.budget_per_uav_w(n_uavs)
    alpha_max = scenario.relay_max_gain_amplitude
    alpha_power = math.sqrt(budget / peak)
    if alpha_power >= alpha_max:
        alpha_u, regime = alpha_max, GainRegime.GAIN_LIMITED
    else:
        alpha_u, regime = alpha_power, GainRegime.POWER_LIMITED

    return GainPolicyResult(
        alpha_u=alpha_u,
        regime=regime,
        per_uav_tx_power_w=alpha_u**2 * received_power,
        gain_matrix=alpha_u * np.eye(n_uavs, dtype=complex),
    )


def region_boundary(scenario: Scenario) -> float:
    """Relay-transmitter distance where the binding constraint switches.

    For a single relay on the link axis, the power cap binds for distances
    below R1* and the gain cap beyond it. R1* solves
    alpha_max^2 * P_T * (wavelength / (4*pi*R1))^2 = budget, i.e.

        R1* = sqrt(P_T) * alpha_max * wavelength / (4*pi*sqrt(budget))

    clamped to at most the link distance.
    """
    budget = scenario.budget_per_uav_w(1)
    r1_star = (
        scenario.tx_amplitude
        * scenario.relay_max_gain_amplitude
        * scenario.wavelength_m
        / (4.0 * math.pi * math.sqrt(budget))
    )
    return min(r1_star, scenario.link_distance_m)
