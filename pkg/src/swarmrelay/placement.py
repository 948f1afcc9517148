"""Relay placement optimization.

Single relay: the capacity over the swarm-to-transmitter distance R1 has
closed-form stationary points in each constraint regime, so the optimum is
found by evaluating the exact capacity at those roots, at the regime
boundary, and at the search-window endpoints.

Swarm: a two-step search. First pick R1 with the single-relay machinery
(the far-field swarm capacity has the same shape in R1), then sweep the
swarm URA spacing between the two per-hop orthogonalizing spacings and
keep the best exact capacity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .capacity import (
    FarFieldConvention,
    bound_singular,
    evaluate_placement,
    single_relay_link,
    swarm_link_capacity,
)
from .channel import los_channel
from .channel import icn as channel_icn
from .geometry import ArraySpec, build_ura, canonical_frame, centered_ura
from .relay import GainRegime, region_boundary
from .scenario import Scenario

_VERTICAL = ((0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
_DEFAULT_EDGE_MARGIN_M = 10.0


class Hop(Enum):
    """Which hop an orthogonal-spacing condition refers to."""

    FIRST = "tx-to-swarm"
    SECOND = "swarm-to-rx"


@dataclass(frozen=True)
class CandidateEval:
    """One evaluated candidate: an R1 value or a spacing pair."""

    value: float | tuple[float, float]
    capacity_bits_per_use: float
    regime: GainRegime


@dataclass(frozen=True)
class SpacingSample:
    """One point of a spacing sweep with per-hop orthogonality diagnostics."""

    spacing_m: float
    capacity_bits_per_use: float
    icn_h1: float
    icn_h2: float


@dataclass(frozen=True)
class PlacementSolution:
    """Best placement found, with the full candidate trail.

    Attributes:
        r1_m: swarm (or relay) distance from the transmitter
        swarm_spec: layout of the returned swarm; a (1, 1) array marks a
            single relay on the link axis
        capacity_bits_per_use: exact capacity at the returned placement
        candidates_evaluated: every candidate probed, in evaluation order
        bound_gap: singular-value bound minus capacity at the returned
            placement
    """

    r1_m: float
    swarm_spec: ArraySpec
    capacity_bits_per_use: float
    candidates_evaluated: tuple[CandidateEval, ...]
    bound_gap: float


def single_antenna_proxy(scenario: Scenario) -> Scenario:
    """Collapse both terminal arrays to one element, keeping all powers."""
    return replace(
        scenario,
        tx_array=ArraySpec(counts=(1, 1), spacings_m=scenario.tx_array.spacings_m),
        rx_array=ArraySpec(counts=(1, 1), spacings_m=scenario.rx_array.spacings_m),
    )


def root_const_gain(scenario: Scenario) -> list[float]:
    """Stationary points of the gain-limited single-relay capacity.

    Both sign variants of R1 = (1/4)(3R +/- sqrt(R^2 - L^2 a_max^2 f_u / (2 pi^2)))
    are returned in ascending order, filtered to the open interval (0, R).
    A negative discriminant (very high gain or noise figure) leaves no
    stationary point and an empty list.
    """
    r_total = scenario.link_distance_m
    discriminant = r_total**2 - (
        scenario.wavelength_m**2
        * scenario.relay_max_gain_amplitude**2
        * scenario.relay_noise_figure
        / (2.0 * math.pi**2)
    )
    if discriminant < 0.0:
        return []
    offset = math.sqrt(discriminant)
    roots = [(3.0 * r_total - offset) / 4.0, (3.0 * r_total + offset) / 4.0]
    return [r1 for r1 in roots if 0.0 < r1 < r_total]


def root_max_power(scenario: Scenario) -> float:
    """Stationary point of the power-limited single-relay capacity.

    R1 = P_T R / (B f_u + P_T) with B the relay power budget; always lies
    in (0, R). Larger relay noise figures or budgets pull the optimum
    toward the transmitter.
    """
    p_t = scenario.tx_power_w
    budget = scenario.budget_per_uav_w(1)
    return (
        p_t
        * scenario.link_distance_m
        / (budget * scenario.relay_noise_figure + p_t)
    )


def optimize_single(
    scenario: Scenario,
    r1_min: float = _DEFAULT_EDGE_MARGIN_M,
    r1_max: float | None = None,
) -> PlacementSolution:
    """Optimal single-relay distance over [r1_min, r1_max].

    Candidates are the analytic roots that fall inside their own constraint
    regime, the regime boundary, and the window endpoints; each is scored
    with the exact capacity pipeline and the maximum wins (ties go to the
    smaller R1). The default 10 m margin keeps the relay away from the
    terminals, where the free-space LOS model stops being meaningful.

    Requires single-antenna terminals; collapse an array scenario first
    with single_antenna_proxy.
    """
    if scenario.tx_array.n_elements != 1 or scenario.rx_array.n_elements != 1:
        raise ValueError(
            "optimize_single requires single-antenna terminals; "
            "use single_antenna_proxy(scenario) first"
        )
    r_total = scenario.link_distance_m
    if r1_max is None:
        r1_max = r_total - _DEFAULT_EDGE_MARGIN_M
    if not 0.0 < r1_min < r1_max < r_total:
        raise ValueError(
            f"empty feasible range: need 0 < r1_min < r1_max < {r_total}, "
            f"got [{r1_min}, {r1_max}]"
        )

    boundary = region_boundary(scenario)
    candidates: list[float] = [r1_min, r1_max]
    if r1_min < boundary < r1_max:
        candidates.append(boundary)
    power_root = root_max_power(scenario)
    if r1_min <= power_root <= min(boundary, r1_max):
        candidates.append(power_root)
    for root in root_const_gain(scenario):
        if max(boundary, r1_min) <= root <= r1_max:
            candidates.append(root)
    candidates = sorted(set(candidates))

    evaluated: list[CandidateEval] = []
    best: CandidateEval | None = None
    for r1 in candidates:
        cap, gain = single_relay_link(scenario, r1)
        entry = CandidateEval(value=r1, capacity_bits_per_use=cap, regime=gain.regime)
        evaluated.append(entry)
        if best is None or cap > best.capacity_bits_per_use:
            best = entry

    best_r1 = float(best.value)
    gap = _single_relay_bound_gap(scenario, best_r1, best.capacity_bits_per_use)
    spec = ArraySpec(
        counts=(1, 1),
        spacings_m=(1.0, 1.0),
        reference_point_m=(best_r1, 0.0, 0.0),
        orientation=_VERTICAL,
    )
    return PlacementSolution(
        r1_m=best_r1,
        swarm_spec=spec,
        capacity_bits_per_use=best.capacity_bits_per_use,
        candidates_evaluated=tuple(evaluated),
        bound_gap=gap,
    )


def _single_relay_bound_gap(scenario: Scenario, r1_m: float, cap: float) -> float:
    lam = scenario.wavelength_m
    relay_point = np.array([[r1_m, 0.0, 0.0]])
    h1 = los_channel(np.zeros((1, 3)), relay_point, lam)
    h2 = los_channel(relay_point, np.array([[scenario.link_distance_m, 0.0, 0.0]]), lam)
    _, gain = single_relay_link(scenario, r1_m)
    bound = bound_singular(
        h1,
        h2,
        scenario.tx_amplitude,
        gain.alpha_u,
        scenario.noise_power_w,
        scenario.relay_noise_figure * gain.alpha_u**2,
    )
    return bound - cap


def spacing_candidates(
    hop: Hop,
    scenario: Scenario,
    r1_m: float,
    dim: int,
    max_order: int,
    n_uav_dim: int = 2,
) -> list[float]:
    """Swarm URA spacings that orthogonalize one hop along one dimension.

    For parallel broadside arrays a hop's channel columns become orthogonal
    when the spacing product matches wavelength x hop distance times
    (order + 1/max(counts)); solving for the swarm spacing at integer
    orders 0..max_order gives the candidate list (ascending).

    Args:
        hop: which hop's condition to solve
        scenario: supplies the terminal array spec and wavelength
        r1_m: swarm distance from the transmitter
        dim: array dimension, 0 or 1
        max_order: largest integer order to include
        n_uav_dim: swarm element count along this dimension
    """
    if dim not in (0, 1):
        raise ValueError(f"dim must be 0 or 1, got {dim}")
    if max_order < 0:
        raise ValueError(f"max_order must be >= 0, got {max_order}")
    if n_uav_dim < 1:
        raise ValueError(f"n_uav_dim must be >= 1, got {n_uav_dim}")
    if hop is Hop.FIRST:
        terminal = scenario.tx_array
        hop_distance = r1_m
    else:
        terminal = scenario.rx_array
        hop_distance = scenario.link_distance_m - r1_m
    if hop_distance <= 0:
        raise ValueError(f"hop distance must be > 0, got {hop_distance}")
    counterpart_spacing = terminal.spacings_m[dim]
    largest_count = max(terminal.counts[dim], n_uav_dim)
    lam = scenario.wavelength_m
    return [
        lam * hop_distance * (order + 1.0 / largest_count) / counterpart_spacing
        for order in range(max_order + 1)
    ]


def _swarm_spec_at(
    n_uavs: tuple[int, int], spacings: tuple[float, float], swarm_reference: np.ndarray
) -> ArraySpec:
    return centered_ura(n_uavs, spacings, swarm_reference, orientation=_VERTICAL)


def _dimension_sweep_grid(
    scenario: Scenario,
    r1_m: float,
    dim: int,
    n_uav_dim: int,
    sweep_points: int,
    max_order: int,
) -> np.ndarray:
    """Spacing sweep values for one swarm dimension.

    Sweeps the interval between the order-0 orthogonalizing spacings of
    the two hops, plus the interval of the order pair whose spacings come
    closest to each other (where one spacing can nearly satisfy both
    hops at once). Candidates that would push a centered swarm below
    ground are dropped when a grounded alternative exists.
    """
    first = spacing_candidates(Hop.FIRST, scenario, r1_m, dim, max_order, n_uav_dim)
    second = spacing_candidates(Hop.SECOND, scenario, r1_m, dim, max_order, n_uav_dim)
    if n_uav_dim > 1:
        clearance = 2.0 * scenario.swarm_base_height_m / (n_uav_dim - 1)
        first_ok = [d for d in first if d <= clearance]
        second_ok = [d for d in second if d <= clearance]
        if first_ok and second_ok:
            first, second = first_ok, second_ok

    intervals = {tuple(sorted((first[0], second[0])))}
    closest = min(
        ((a, b) for a in first for b in second), key=lambda pair: abs(pair[0] - pair[1])
    )
    intervals.add(tuple(sorted(closest)))
    values = np.concatenate(
        [np.linspace(lo, hi, sweep_points) for lo, hi in sorted(intervals)]
    )
    return np.unique(values)


def two_step_search(
    scenario: Scenario,
    n_uavs: tuple[int, int] = (2, 2),
    sweep_points: int = 25,
    r1_m: float | None = None,
    convention: FarFieldConvention = FarFieldConvention.PRODUCT,
    max_order: int = 8,
) -> PlacementSolution:
    """Swarm placement search: pick R1, then sweep the swarm URA spacing.

    Step 1 (skipped when r1_m is given): optimize R1 with the single-relay
    machinery on a single-antenna proxy carrying the same powers, budget,
    gain cap and noise figure. Step 2: per dimension, compute per-hop
    orthogonalizing spacings and sweep `sweep_points` evenly spaced values
    across the interval between the order-0 pair and across the interval
    of the closest pair up to max_order (Cartesian product across
    dimensions); score each swarm with the exact capacity and keep the
    best. Ties go to the smaller spacing, keeping the swarm compact.

    The order-0 interval alone misses distances where the two hop
    conditions sit far apart while some higher-order pair nearly
    coincides; scanning the closest pair as well keeps the searched
    placement ahead of random placement at every distance.

    A degenerate 1x1 swarm with free R1 on a single-antenna link reduces
    exactly to optimize_single.
    """
    if sweep_points < 2:
        raise ValueError(f"sweep_points must be >= 2, got {sweep_points}")
    n_uavs = (int(n_uavs[0]), int(n_uavs[1]))
    if min(n_uavs) < 1:
        raise ValueError(f"n_uavs entries must be >= 1, got {n_uavs}")

    single_terminals = (
        scenario.tx_array.n_elements == 1 and scenario.rx_array.n_elements == 1
    )
    if n_uavs == (1, 1) and r1_m is None and single_terminals:
        return optimize_single(scenario)

    if r1_m is None:
        r1_m = optimize_single(single_antenna_proxy(scenario)).r1_m

    grids = [
        _dimension_sweep_grid(scenario, r1_m, dim, n_uavs[dim], sweep_points, max_order)
        for dim in (0, 1)
    ]

    tx_points, rx_points, swarm_reference = canonical_frame(scenario, r1_m)
    evaluated: list[CandidateEval] = []
    best: CandidateEval | None = None
    best_spec: ArraySpec | None = None
    for d0 in grids[0]:
        for d1 in grids[1]:
            spec = _swarm_spec_at(n_uavs, (float(d0), float(d1)), swarm_reference)
            cap, gain = swarm_link_capacity(
                scenario, tx_points, rx_points, build_ura(spec)
            )
            entry = CandidateEval(
                value=(float(d0), float(d1)),
                capacity_bits_per_use=cap,
                regime=gain.regime,
            )
            evaluated.append(entry)
            if best is None or cap > best.capacity_bits_per_use:
                best, best_spec = entry, spec

    report = evaluate_placement(scenario, build_ura(best_spec), r1_m, convention)
    return PlacementSolution(
        r1_m=r1_m,
        swarm_spec=best_spec,
        capacity_bits_per_use=best.capacity_bits_per_use,
        candidates_evaluated=tuple(evaluated),
        bound_gap=report.bound_singular - best.capacity_bits_per_use,
    )


def spacing_sweep(
    scenario: Scenario,
    r1_m: float,
    spacing_range: tuple[float, float],
    points: int,
    n_uavs: tuple[int, int] = (2, 2),
) -> list[SpacingSample]:
    """Capacity and per-hop orthogonality across square-swarm spacings.

    The swarm keeps the same spacing in both dimensions; each sweep point
    reports the exact capacity and the inverse condition number of each
    hop, which peaks at 1 where that hop's orthogonality condition holds.
    """
    lo, hi = float(spacing_range[0]), float(spacing_range[1])
    if not lo > 0:
        raise ValueError(f"spacing range must start above 0, got {lo}")
    if not hi > lo:
        raise ValueError(f"spacing range must be widening, got ({lo}, {hi})")
    if points < 2:
        raise ValueError(f"points must be >= 2, got {points}")

    tx_points, rx_points, swarm_reference = canonical_frame(scenario, r1_m)
    lam = scenario.wavelength_m
    samples: list[SpacingSample] = []
    for spacing in np.linspace(lo, hi, points):
        spec = _swarm_spec_at(n_uavs, (float(spacing), float(spacing)), swarm_reference)
        positions = build_ura(spec)
        h1 = los_channel(tx_points, positions, lam)
        h2 = los_channel(positions, rx_points, lam)
        cap, _ = swarm_link_capacity(scenario, tx_points, rx_points, positions)
        samples.append(
            SpacingSample(
                spacing_m=float(spacing),
                capacity_bits_per_use=cap,
                icn_h1=channel_icn(h1),
                icn_h2=channel_icn(h2),
            )
        )
    return samples
