"""3D antenna geometry: uniform rectangular arrays and swarm layouts.

The canonical frame used throughout puts the link along the x axis and
height along z: the transmit array sits in the x=0 plane, the receive
array in the x=R plane, and the swarm in an intermediate vertical plane
x=R1. All panels span the y-z plane and are centered on one common link
axis at the swarm base height, i.e. they are parallel broadside panels.
Broadside centering is what makes the per-dimension orthogonal-spacing
conditions hold; off-axis panel offsets skew the effective hop distance
and visibly degrade the achievable orthogonality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .scenario import Scenario

_ORTHONORMALITY_TOL = 1e-12


def _as_vec3(value, name: str) -> tuple[float, float, float]:
    vec = tuple(float(v) for v in value)
    if len(vec) != 3:
        raise ValueError(f"{name} must be a 3-vector, got length {len(vec)}")
    return vec


@dataclass(frozen=True)
class ArraySpec:
    """Uniform rectangular array layout.

    Elements lie on a regular 2D grid: ``reference_point_m + i*d0*u0 + j*d1*u1``
    for ``i in [0, n0)``, ``j in [0, n1)``, where ``(u0, u1)`` is the
    orthonormal orientation pair spanning the array plane.

    Attributes:
        counts: elements per dimension (n0, n1), each >= 1
        spacings_m: inter-element spacing per dimension (d0, d1), each > 0
        reference_point_m: position of element (0, 0)
        orientation: orthonormal pair of 3-vectors spanning the array plane
    """

    counts: tuple[int, int]
    spacings_m: tuple[float, float]
    reference_point_m: tuple[float, float, float] = (0.0, 0.0, 0.0)
    orientation: tuple[tuple[float, float, float], tuple[float, float, float]] = (
        (0.0, 1.0, 0.0),
        (0.0, 0.0, 1.0),
    )

    def __post_init__(self):
        counts = tuple(int(n) for n in self.counts)
        spacings = tuple(float(d) for d in self.spacings_m)
        if len(counts) != 2 or len(spacings) != 2:
            raise ValueError("counts and spacings_m must both have two entries")
        if any(n < 1 for n in counts):
            raise ValueError(f"counts must be >= 1, got {counts}")
        if any(d <= 0 for d in spacings):
            raise ValueError(f"spacings_m must be > 0, got {spacings}")
        u0 = np.array(_as_vec3(self.orientation[0], "orientation[0]"))
        u1 = np.array(_as_vec3(self.orientation[1], "orientation[1]"))
        if abs(np.linalg.norm(u0) - 1.0) > _ORTHONORMALITY_TOL:
            raise ValueError("orientation[0] must be unit length")
        if abs(np.linalg.norm(u1) - 1.0) > _ORTHONORMALITY_TOL:
            raise ValueError("orientation[1] must be unit length")
        if abs(np.dot(u0, u1)) > _ORTHONORMALITY_TOL:
            raise ValueError("orientation vectors must be orthogonal")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "spacings_m", spacings)
        object.__setattr__(
            self, "reference_point_m", _as_vec3(self.reference_point_m, "reference_point_m")
        )
        object.__setattr__(self, "orientation", (tuple(u0), tuple(u1)))

    @property
    def n_elements(self) -> int:
        return self.counts[0] * self.counts[1]


@dataclass(frozen=True)
class Placement:
    """A concrete swarm layout: one 3D position per UAV at distance R1.

    Attributes:
        positions_m: array of shape (n_uavs, 3)
        hop1_distance_m: distance R1 of the swarm plane from the transmitter
    """

    positions_m: np.ndarray
    hop1_distance_m: float

    def __post_init__(self):
        positions = np.atleast_2d(np.asarray(self.positions_m, dtype=float))
        if positions.ndim != 2 or positions.shape[1] != 3:
            raise ValueError(f"positions_m must have shape (n, 3), got {positions.shape}")
        if np.any(positions[:, 2] < 0):
            raise ValueError("UAV heights must be >= 0")
        if not self.hop1_distance_m > 0:
            raise ValueError(f"hop1_distance_m must be > 0, got {self.hop1_distance_m}")
        positions.setflags(write=False)
        object.__setattr__(self, "positions_m", positions)

    @property
    def n_uavs(self) -> int:
        return self.positions_m.shape[0]


def build_ura(spec: ArraySpec) -> np.ndarray:
    """Generate element positions for a uniform rectangular array.

    Returns an array of shape (n0*n1, 3) in row-major order with the
    second dimension index varying fastest. The ordering is fixed so that
    channel-matrix row/column indexing is reproducible.
    """
    n0, n1 = spec.counts
    d0, d1 = spec.spacings_m
    ref = np.array(spec.reference_point_m)
    u0 = np.array(spec.orientation[0])
    u1 = np.array(spec.orientation[1])
    i = np.repeat(np.arange(n0), n1)
    j = np.tile(np.arange(n1), n0)
    return ref + np.outer(i * d0, u0) + np.outer(j * d1, u1)


def centered_ura(
    counts: tuple[int, int],
    spacings_m: tuple[float, float],
    center_m,
    orientation: tuple = ((0.0, 1.0, 0.0), (0.0, 0.0, 1.0)),
) -> ArraySpec:
    """ArraySpec whose element grid is centered on the given point."""
    n0, n1 = int(counts[0]), int(counts[1])
    d0, d1 = float(spacings_m[0]), float(spacings_m[1])
    u0 = np.array(orientation[0], dtype=float)
    u1 = np.array(orientation[1], dtype=float)
    reference = (
        np.asarray(center_m, dtype=float)
        - (n0 - 1) * d0 / 2.0 * u0
        - (n1 - 1) * d1 / 2.0 * u1
    )
    return ArraySpec(
        counts=(n0, n1),
        spacings_m=(d0, d1),
        reference_point_m=tuple(reference),
        orientation=orientation,
    )


def canonical_frame(
    scenario: "Scenario", hop1_distance_m: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Resolve terminal antenna positions and the swarm reference point.

    All panels are centered on the common link axis, which runs parallel
    to x at the swarm base height: the transmit array around
    (0, 0, h), the receive array around (R, 0, h), and the swarm around
    the returned reference (R1, 0, h). Keeping the panel centers on one
    axis is what lets the orthogonal-spacing conditions reach their
    ideal: a lateral or vertical center offset tilts the effective hop
    geometry and caps the achievable orthogonality well below 1.

    Args:
        scenario: physical scenario (supplies R, array specs, swarm height)
        hop1_distance_m: swarm distance R1 from the transmitter, 0 < R1 < R

    Returns:
        (tx_positions, rx_positions, swarm_reference_point)
    """
    r_total = scenario.link_distance_m
    if not 0.0 < hop1_distance_m < r_total:
        raise ValueError(
            f"hop1_distance_m must lie in (0, {r_total}), got {hop1_distance_m}"
        )
    height = scenario.swarm_base_height_m
    tx = centered_ura(
        scenario.tx_array.counts, scenario.tx_array.spacings_m, (0.0, 0.0, height)
    )
    rx = centered_ura(
        scenario.rx_array.counts, scenario.rx_array.spacings_m, (r_total, 0.0, height)
    )
    swarm_reference = np.array([hop1_distance_m, 0.0, height])
    return build_ura(tx), build_ura(rx), swarm_reference
