"""Capacity modeling and placement optimization for UAV swarms acting as
amplify-and-forward MIMO relays over line-of-sight links."""

from .capacity import (
    CapacityNumericalError,
    CapacityReport,
    FarFieldConvention,
    bound_far_field,
    bound_singular,
    bound_trace,
    capacity_end_to_end,
    capacity_single_uav_gain_limited,
    capacity_single_uav_power_limited,
    capacity_via_effective,
    effective_channel,
    evaluate_placement,
    noise_covariance,
    single_relay_link,
    swarm_link_capacity,
)
from .channel import (
    ChannelMatrix,
    FarFieldFactor,
    dump_entries_csv,
    far_field_factor,
    icn,
    los_channel,
    singular_values,
)
from .geometry import ArraySpec, Placement, build_ura, canonical_frame, centered_ura
from .montecarlo import McStats, derive_sample_seed, mc_at_r1, mc_sweep, sample_placement
from .placement import (
    CandidateEval,
    Hop,
    PlacementSolution,
    SpacingSample,
    optimize_single,
    root_const_gain,
    root_max_power,
    single_antenna_proxy,
    spacing_candidates,
    spacing_sweep,
    two_step_search,
)
from .relay import GainPolicyResult, GainRegime, equal_gain, region_boundary
from .scenario import (
    RelayPowerMode,
    Scenario,
    ScenarioError,
    amplitude_to_db,
    db_to_amplitude,
    db_to_power_ratio,
    dbm_to_watts,
    power_ratio_to_db,
    relay_gain_amplitude_to_db,
    relay_gain_db_to_amplitude,
    scenario_from_config,
    watts_to_dbm,
)

__version__ = "0.1.0"

__all__ = [
    "ArraySpec",
    "CandidateEval",
    "CapacityNumericalError",
    "CapacityReport",
    "ChannelMatrix",
    "FarFieldConvention",
    "FarFieldFactor",
    "GainPolicyResult",
    "GainRegime",
    "Hop",
    "McStats",
    "Placement",
    "PlacementSolution",
    "RelayPowerMode",
    "Scenario",
    "ScenarioError",
    "SpacingSample",
    "amplitude_to_db",
    "bound_far_field",
    "bound_singular",
    "bound_trace",
    "build_ura",
    "canonical_frame",
    "capacity_end_to_end",
    "capacity_single_uav_gain_limited",
    "capacity_single_uav_power_limited",
    "capacity_via_effective",
    "centered_ura",
    "db_to_amplitude",
    "db_to_power_ratio",
    "dbm_to_watts",
    "derive_sample_seed",
    "dump_entries_csv",
    "effective_channel",
    "equal_gain",
    "evaluate_placement",
    "far_field_factor",
    "icn",
    "los_channel",
    "mc_at_r1",
    "mc_sweep",
    "noise_covariance",
    "optimize_single",
    "power_ratio_to_db",
    "region_boundary",
    "relay_gain_amplitude_to_db",
    "relay_gain_db_to_amplitude",
    "root_const_gain",
    "root_max_power",
    "sample_placement",
    "scenario_from_config",
    "single_antenna_proxy",
    "single_relay_link",
    "singular_values",
    "spacing_candidates",
    "spacing_sweep",
    "swarm_link_capacity",
    "two_step_search",
    "watts_to_dbm",
    "__version__",
]
