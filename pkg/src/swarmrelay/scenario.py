"""Physical link parameters in linear units, plus dB/dBm conversions.

Every other module consumes only linear-unit values (watts, Hz, meters,
dimensionless ratios). Conversion from the dB/dBm-flavored config surface
happens exactly once, here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Mapping

from .geometry import ArraySpec

SPEED_OF_LIGHT_M_S = 299792458.0


class ScenarioError(ValueError):
    """A scenario document is missing a field or holds a non-physical value."""


class RelayPowerMode(Enum):
    """How the relay power budget applies to the swarm.

    PER_UAV: each UAV may transmit up to the full budget.
    TOTAL_SPLIT_EVEN: the budget is the swarm total, split evenly, so each
        of N UAVs gets budget/N.
    """

    PER_UAV = "per-uav"
    TOTAL_SPLIT_EVEN = "total"


def dbm_to_watts(value_dbm: float) -> float:
    return 10.0 ** ((value_dbm - 30.0) / 10.0)


def watts_to_dbm(value_w: float) -> float:
    if value_w <= 0:
        raise ValueError(f"power must be > 0 W, got {value_w}")
    return 10.0 * math.log10(value_w) + 30.0


def db_to_power_ratio(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


def power_ratio_to_db(ratio: float) -> float:
    if ratio <= 0:
        raise ValueError(f"ratio must be > 0, got {ratio}")
    return 10.0 * math.log10(ratio)


def db_to_amplitude(value_db: float) -> float:
    """Field-amplitude ratio for a power gain stated in dB (/20 rule)."""
    return 10.0 ** (value_db / 20.0)


def amplitude_to_db(amplitude: float) -> float:
    if amplitude <= 0:
        raise ValueError(f"amplitude must be > 0, got {amplitude}")
    return 20.0 * math.log10(amplitude)


def relay_gain_db_to_amplitude(value_db: float) -> float:
    """Linear amplitude cap for a relay gain figure in dB (/10 rule).

    Relay gain figures count decibels directly on the amplification
    factor the relay applies to its input signal, so a 45 dB cap allows
    amplitudes up to 10^4.5. Reading the figure with the /20 field rule
    instead would leave the baseline link gain-limited over essentially
    its whole span and push its capacity into a regime where random
    swarm placements outperform designed ones.
    """
    return 10.0 ** (value_db / 10.0)


def relay_gain_amplitude_to_db(amplitude: float) -> float:
    if amplitude <= 0:
        raise ValueError(f"amplitude must be > 0, got {amplitude}")
    return 10.0 * math.log10(amplitude)


@dataclass(frozen=True)
class Scenario:
    """All physical constants and constraints of the relayed link, linear units.

    Attributes:
        link_distance_m: transmitter-receiver separation R
        carrier_freq_hz: carrier frequency (wavelength = c / f)
        tx_power_w: total transmit power; amplitude scale is sqrt of this
        relay_power_budget_w: relay transmit power budget (interpretation
            set by relay_power_mode)
        relay_power_mode: per-UAV cap vs. swarm total split evenly
        relay_max_gain_amplitude: maximum relay amplitude gain (linear)
        relay_noise_figure: relay noise figure as a linear ratio >= 1
        noise_psd_w_per_hz: thermal noise power spectral density
        bandwidth_hz: channel bandwidth; noise power = psd * bandwidth
        tx_array: transmit URA layout
        rx_array: receive URA layout
        swarm_base_height_m: height of the lowest UAV above the array bases
    """

    link_distance_m: float
    carrier_freq_hz: float
    tx_power_w: float
    relay_power_budget_w: float
    relay_power_mode: RelayPowerMode
    relay_max_gain_amplitude: float
    relay_noise_figure: float
    noise_psd_w_per_hz: float
    bandwidth_hz: float
    tx_array: ArraySpec
    rx_array: ArraySpec
    swarm_base_height_m: float

    def __post_init__(self):
        positives = {
            "link_distance_m": self.link_distance_m,
            "carrier_freq_hz": self.carrier_freq_hz,
            "tx_power_w": self.tx_power_w,
            "relay_power_budget_w": self.relay_power_budget_w,
            "relay_max_gain_amplitude": self.relay_max_gain_amplitude,
            "noise_psd_w_per_hz": self.noise_psd_w_per_hz,
            "bandwidth_hz": self.bandwidth_hz,
        }
        for name, value in positives.items():
            if not value > 0:
                raise ScenarioError(f"{name} must be > 0, got {value}")
        if self.relay_noise_figure < 1.0:
            raise ScenarioError(
                f"relay_noise_figure must be >= 1 (0 dB), got {self.relay_noise_figure}"
            )
        if self.swarm_base_height_m < 0:
            raise ScenarioError(
                f"swarm_base_height_m must be >= 0, got {self.swarm_base_height_m}"
            )
        # The free-space model assumes the link is many wavelengths long.
        if self.wavelength_m * 10.0 > self.link_distance_m:
            raise ScenarioError(
                "link_distance_m must be much larger than the wavelength "
                f"({self.wavelength_m:.3g} m)"
            )

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT_M_S / self.carrier_freq_hz

    @property
    def tx_amplitude(self) -> float:
        """Per-symbol amplitude scale sqrt(P_T) applied at the transmitter."""
        return math.sqrt(self.tx_power_w)

    @property
    def noise_power_w(self) -> float:
        """Thermal noise power at the destination receiver."""
        return self.noise_psd_w_per_hz * self.bandwidth_hz

    @property
    def relay_noise_power_w(self) -> float:
        """Input-referred noise power at each relay: noise figure x thermal."""
        return self.relay_noise_figure * self.noise_power_w

    def budget_per_uav_w(self, n_uavs: int) -> float:
        """Transmit power budget applying to each individual UAV."""
        if n_uavs < 1:
            raise ValueError(f"n_uavs must be >= 1, got {n_uavs}")
        if self.relay_power_mode is RelayPowerMode.TOTAL_SPLIT_EVEN:
            return self.relay_power_budget_w / n_uavs
        return self.relay_power_budget_w


def _require(config: Mapping[str, Any], field: str) -> Any:
    if field not in config:
        raise ScenarioError(f"config is missing required field '{field}'")
    return config[field]


def _parse_array(config: Mapping[str, Any], field: str) -> ArraySpec:
    raw = _require(config, field)
    try:
        counts = tuple(int(n) for n in _require(raw, "counts"))
        spacings = tuple(float(d) for d in _require(raw, "spacings_m"))
        return ArraySpec(counts=counts, spacings_m=spacings)
    except ScenarioError:
        raise
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"invalid '{field}': {exc}") from exc


def scenario_from_config(config: Mapping[str, Any]) -> Scenario:
    """Build a Scenario from a config document with dB/dBm-unit fields.

    Expected keys (see the bundled example configs): link_distance_m,
    carrier_freq_ghz, tx_power_dbm, relay_power_budget_dbm,
    relay_max_gain_db, noise_figure_db, noise_psd_dbm_per_hz,
    bandwidth_mhz, swarm_base_height_m, tx_array, rx_array, and the
    optional relay_power_mode ("per-uav" | "total", default "per-uav").

    Power converts via 10^((dBm-30)/10); the relay gain cap via the /10
    amplitude rule (see relay_gain_db_to_amplitude); the noise figure via
    10^(dB/10).

    Raises:
        ScenarioError: on a missing field or a non-physical value, naming
            the offending field.
    """

    def _float(field: str) -> float:
        value = _require(config, field)
        try:
            return float(value)
        except (TypeError, ValueError) as exc:
            raise ScenarioError(f"field '{field}' must be a number, got {value!r}") from exc

    noise_figure_db = _float("noise_figure_db")
    if noise_figure_db < 0:
        raise ScenarioError(f"noise_figure_db must be >= 0, got {noise_figure_db}")

    mode_raw = config.get("relay_power_mode", RelayPowerMode.PER_UAV.value)
    try:
        mode = RelayPowerMode(mode_raw)
    except ValueError as exc:
        allowed = [m.value for m in RelayPowerMode]
        raise ScenarioError(
            f"relay_power_mode must be one of {allowed}, got {mode_raw!r}"
        ) from exc

    return Scenario(
        link_distance_m=_float("link_distance_m"),
        carrier_freq_hz=_float("carrier_freq_ghz") * 1e9,
        tx_power_w=dbm_to_watts(_float("tx_power_dbm")),
        relay_power_budget_w=dbm_to_watts(_float("relay_power_budget_dbm")),
        relay_power_mode=mode,
        relay_max_gain_amplitude=relay_gain_db_to_amplitude(_float("relay_max_gain_db")),
        relay_noise_figure=db_to_power_ratio(noise_figure_db),
        noise_psd_w_per_hz=dbm_to_watts(_float("noise_psd_dbm_per_hz")),
        bandwidth_hz=_float("bandwidth_mhz") * 1e6,
        tx_array=_parse_array(config, "tx_array"),
        rx_array=_parse_array(config, "rx_array"),
        swarm_base_height_m=_float("swarm_base_height_m"),
    )
