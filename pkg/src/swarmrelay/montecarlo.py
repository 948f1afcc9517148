"""Random-placement capacity baseline.

Samples UAV positions uniformly inside a vertical square at a fixed swarm
distance and reports capacity statistics per distance. Per-sample seeds
derive from (master seed, distance index, sample index) through a
splittable counter scheme, so results are bit-identical across runs,
evaluation orders, and worker counts.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .capacity import swarm_link_capacity
from .geometry import canonical_frame
from .scenario import Scenario


@dataclass(frozen=True)
class McStats:
    """Capacity statistics over random placements at one swarm distance.

    Percentiles use the nearest-rank rule: the ceil(q*n)-th order
    statistic of the sorted sample.
    """

    r1_m: float
    mean: float
    p5: float
    p95: float
    max: float
    n_samples: int
    seed: int


def derive_sample_seed(master_seed: int, r1_index: int, sample_index: int) -> int:
    """64-bit per-sample seed from the master seed and both loop indices."""
    sequence = np.random.SeedSequence(
        entropy=int(master_seed), spawn_key=(int(r1_index), int(sample_index))
    )
    return int(sequence.generate_state(1, np.uint64)[0])


def sample_placement(
    r1_m: float,
    square_width_m: float,
    base_height_m: float,
    n_uavs: int,
    sample_seed: int,
) -> np.ndarray:
    """Draw UAV positions uniformly over a vertical square at x = R1.

    The square spans y in [-W/2, W/2] and z in [base, base + W]. The same
    seed always yields the same positions.

    Returns:
        array of shape (n_uavs, 3)
    """
    if not square_width_m > 0:
        raise ValueError(f"square_width_m must be > 0, got {square_width_m}")
    if n_uavs < 1:
        raise ValueError(f"n_uavs must be >= 1, got {n_uavs}")
    rng = np.random.default_rng(np.uint64(sample_seed))
    y = rng.uniform(-square_width_m / 2.0, square_width_m / 2.0, size=n_uavs)
    z = rng.uniform(base_height_m, base_height_m + square_width_m, size=n_uavs)
    positions = np.column_stack([np.full(n_uavs, float(r1_m)), y, z])
    return positions


def _percentile_nearest_rank(sorted_values: np.ndarray, q: float) -> float:
    rank = max(1, math.ceil(q * sorted_values.size))
    return float(sorted_values[rank - 1])


def mc_at_r1(
    scenario: Scenario,
    r1_m: float,
    n_samples: int,
    square_width_m: float,
    master_seed: int,
    r1_index: int = 0,
    n_uavs: int = 4,
    max_workers: int = 1,
) -> McStats:
    """Capacity statistics over random swarm placements at one distance.

    Each sample gets its own derived seed, so the statistics do not depend
    on evaluation order; max_workers > 1 parallelizes sample evaluation
    with results reduced by sample index.
    """
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    tx_points, rx_points, _ = canonical_frame(scenario, r1_m)
    base_height = scenario.swarm_base_height_m

    def one_sample(sample_index: int) -> float:
        seed = derive_sample_seed(master_seed, r1_index, sample_index)
        positions = sample_placement(r1_m, square_width_m, base_height, n_uavs, seed)
        cap, _ = swarm_link_capacity(scenario, tx_points, rx_points, positions)
        return cap

    capacities = np.empty(n_samples)
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            for i, cap in enumerate(pool.map(one_sample, range(n_samples))):
                capacities[i] = cap
    else:
        for i in range(n_samples):
            capacities[i] = one_sample(i)

    ordered = np.sort(capacities)
    return McStats(
        r1_m=float(r1_m),
        mean=float(np.mean(capacities)),
        p5=_percentile_nearest_rank(ordered, 0.05),
        p95=_percentile_nearest_rank(ordered, 0.95),
        max=float(ordered[-1]),
        n_samples=n_samples,
        seed=int(master_seed),
    )


def mc_sweep(
    scenario: Scenario,
    r1_list_m: Sequence[float],
    n_samples: int,
    square_width_m: float,
    master_seed: int,
    n_uavs: int = 4,
    max_workers: int = 1,
) -> list[McStats]:
    """mc_at_r1 across a list of swarm distances (index feeds the seeds)."""
    if len(r1_list_m) == 0:
        raise ValueError("r1_list_m must not be empty")
    return [
        mc_at_r1(
            scenario,
            r1_m,
            n_samples,
            square_width_m,
            master_seed,
            r1_index=index,
            n_uavs=n_uavs,
            max_workers=max_workers,
        )
        for index, r1_m in enumerate(r1_list_m)
    ]
