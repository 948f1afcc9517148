"""Line-of-sight channel synthesis and diagnostics.

Each channel entry couples one receive element to one transmit element
over free space: magnitude wavelength/(4*pi*d) and phase 2*pi*d/wavelength
for the exact 3D separation d of the pair. No fading, element patterns,
or multipath: isotropic elements in pure LOS.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChannelMatrix:
    """Complex channel for one hop: rows are receive-side elements.

    Attributes:
        entries: complex matrix of shape (n_rx, n_tx)
        wavelength_m: carrier wavelength the entries were generated at
    """

    entries: np.ndarray
    wavelength_m: float

    def __post_init__(self):
        entries = np.atleast_2d(np.asarray(self.entries, dtype=complex))
        if entries.size == 0:
            raise ValueError("channel matrix must be non-empty")
        if not self.wavelength_m > 0:
            raise ValueError(f"wavelength_m must be > 0, got {self.wavelength_m}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def n_rx(self) -> int:
        return self.entries.shape[0]

    @property
    def n_tx(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class FarFieldFactor:
    """Split of a channel into a nominal-distance scale and a normalized part.

    Attributes:
        scale: wavelength/(4*pi*nominal_distance), the nominal entry magnitude
        normalized: entries divided by scale (unit magnitude in the far field)
        max_magnitude_deviation: max |abs(normalized) - 1| over all entries
    """

    scale: float
    normalized: np.ndarray
    max_magnitude_deviation: float


def pairwise_distances(tx_points: np.ndarray, rx_points: np.ndarray) -> np.ndarray:
    """Exact Euclidean distances, shape (n_rx, n_tx)."""
    tx = np.atleast_2d(np.asarray(tx_points, dtype=float))
    rx = np.atleast_2d(np.asarray(rx_points, dtype=float))
    diff = rx[:, None, :] - tx[None, :, :]
    return np.linalg.norm(diff, axis=2)


def los_channel(tx_points, rx_points, wavelength_m: float) -> ChannelMatrix:
    """Synthesize the LOS channel between two point sets.

    Entry (i, j) couples receive point i with transmit point j:
    (wavelength / (4*pi*d_ij)) * exp(+1j * 2*pi * d_ij / wavelength),
    with d_ij the exact 3D distance. Distances use full Euclidean norms,
    no planar or paraxial approximation.

    Raises:
        ValueError: if any pair of points coincides (d = 0) or the
            wavelength is not positive.
    """
    if not wavelength_m > 0:
        raise ValueError(f"wavelength_m must be > 0, got {wavelength_m}")
    distances = pairwise_distances(tx_points, rx_points)
    if np.any(distances <= 0.0):
        raise ValueError("coincident transmit/receive points (zero distance)")
    magnitude = wavelength_m / (4.0 * np.pi * distances)
    phase = 2.0 * np.pi * distances / wavelength_m
    return ChannelMatrix(entries=magnitude * np.exp(1j * phase), wavelength_m=wavelength_m)


def singular_values(h: ChannelMatrix) -> np.ndarray:
    """Singular values of the channel entries in non-increasing order."""
    return np.linalg.svd(h.entries, compute_uv=False)


def icn(h: ChannelMatrix) -> float:
    """Inverse condition number: smallest over largest singular value.

    Equals 1 exactly when the matrix has orthogonal columns (or rows) of
    equal norm, and 0 when rank deficient.

    Raises:
        ValueError: for an all-zero matrix.
    """
    s = singular_values(h)
    if s[0] == 0.0:
        raise ValueError("ICN undefined for an all-zero matrix")
    return float(s[-1] / s[0])


def far_field_factor(h: ChannelMatrix, nominal_distance_m: float) -> FarFieldFactor:
    """Factor out the nominal free-space magnitude at a reference distance.

    In the far field all entry magnitudes are close to
    wavelength/(4*pi*nominal_distance); the reported deviation quantifies
    how far the geometry is from that regime.
    """
    if not nominal_distance_m > 0:
        raise ValueError(f"nominal_distance_m must be > 0, got {nominal_distance_m}")
    scale = h.wavelength_m / (4.0 * np.pi * nominal_distance_m)
    normalized = h.entries / scale
    deviation = float(np.max(np.abs(np.abs(normalized) - 1.0)))
    return FarFieldFactor(scale=scale, normalized=normalized, max_magnitude_deviation=deviation)


def dump_entries_csv(h: ChannelMatrix, path) -> None:
    """Write the entries as CSV, one matrix row per line.

    Columns alternate real and imaginary parts in row-major order, printed
    with 17 significant digits so they round-trip exactly.
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in h.entries:
            flat = []
            for value in row:
                flat.append(f"{value.real:.17g}")
                flat.append(f"{value.imag:.17g}")
            writer.writerow(flat)
