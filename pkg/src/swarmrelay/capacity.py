"""End-to-end relay capacity, upper bounds, and single-relay closed forms.

The exact capacity of the two-hop amplify-and-forward link is

    C = log2 det(I + P_T * H1^H D^H H2^H S^-1 H2 D H1)

with D the diagonal gain matrix and S the destination noise covariance
S = sigma_u^2 * H2 D D^H H2^H + sigma_r^2 * I. With a common gain a_u the
same capacity is reached by the whitened composite channel

    Ht = (c * H2 H2^H + I)^(-1/2) H2 H1,   c = f_u * a_u^2,

driven with per-symbol power P_T * a_u^2 over noise sigma^2, which is the
form the upper bounds are stated on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .channel import ChannelMatrix, icn as channel_icn
from .geometry import canonical_frame
from .relay import GainPolicyResult, GainRegime, equal_gain
from .scenario import Scenario

_LN2 = math.log(2.0)


class CapacityNumericalError(ArithmeticError):
    """A capacity evaluation produced a non-finite or invalid result."""


class FarFieldConvention(Enum):
    """Normalization of the second hop's squared singular value in the
    closed-form far-field bound.

    PRODUCT: n_uavs * n_rx (the Gram-product reading of orthogonality).
    COLUMN_NORM: n_rx (squared column norm of a unit-magnitude matrix).

    Both are carried because the closed form does not pin the choice; the
    cross-validation tests record which one tracks the singular-value
    bound more closely.
    """

    PRODUCT = "product"
    COLUMN_NORM = "column-norm"


@dataclass(frozen=True)
class CapacityReport:
    """Capacity plus bound values and diagnostics for one placement.

    Attributes:
        capacity_bits_per_use: exact end-to-end capacity
        alpha_u: common relay gain used throughout
        regime: constraint that pinned the gain
        bound_trace: trace-based upper bound on the capacity
        bound_singular: singular-value upper bound
        bound_far_field: closed-form far-field bound, None when no nominal
            hop distance was available
        icn_h1: inverse condition number of the first hop
        icn_h2: inverse condition number of the second hop
        k_min: rank ceiling min(n_tx, n_rx, n_uavs)
    """

    capacity_bits_per_use: float
    alpha_u: float
    regime: GainRegime
    bound_trace: float
    bound_singular: float
    bound_far_field: float | None
    icn_h1: float
    icn_h2: float
    k_min: int


def _hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def _logdet2_hermitian_pd(m: np.ndarray) -> float:
    """log2 det of a Hermitian positive-definite matrix via Cholesky.

    Summing log-diagonals of the factor avoids overflow at high SNR.
    """
    try:
        lower = np.linalg.cholesky(_hermitize(m))
    except np.linalg.LinAlgError as exc:
        raise CapacityNumericalError(
            f"matrix of shape {m.shape} is not positive definite: {exc}"
        ) from exc
    return float(2.0 * np.sum(np.log2(np.real(np.diag(lower)))))


def noise_covariance(
    h2: ChannelMatrix, gain_matrix: np.ndarray, sigma_u2: float, sigma_r2: float
) -> np.ndarray:
    """Destination noise covariance: relay noise forwarded through H2 D,
    plus the receiver's own thermal noise.

    Returns a Hermitian positive-definite (n_rx, n_rx) matrix; sigma_r2 > 0
    keeps it invertible even when the gain matrix is zero.
    """
    forwarded = h2.entries @ np.asarray(gain_matrix, dtype=complex)
    cov = sigma_u2 * (forwarded @ forwarded.conj().T)
    cov = cov + sigma_r2 * np.eye(h2.n_rx)
    return _hermitize(cov)


def capacity_end_to_end(
    h1: ChannelMatrix,
    h2: ChannelMatrix,
    gain_matrix: np.ndarray,
    tx_amplitude: float,
    sigma_u2: float,
    sigma_r2: float,
) -> float:
    """Exact mutual information of the two-hop link in bits per channel use.

    Computes log2 det(I + P_T A^H S^-1 A) with A = H2 D H1 and S the noise
    covariance, through a Cholesky factorization of the Hermitian
    positive-definite argument.

    Raises:
        CapacityNumericalError: on a non-finite result.
    """
    d = np.asarray(gain_matrix, dtype=complex)
    composite = h2.entries @ d @ h1.entries
    cov = noise_covariance(h2, d, sigma_u2, sigma_r2)
    whitened = np.linalg.solve(cov, composite)
    gram = np.eye(h1.n_tx) + tx_amplitude**2 * (composite.conj().T @ whitened)
    capacity = _logdet2_hermitian_pd(gram)
    if not math.isfinite(capacity):
        raise CapacityNumericalError(
            f"non-finite capacity for shapes h1={h1.entries.shape}, "
            f"h2={h2.entries.shape}, tx_amplitude={tx_amplitude}"
        )
    return max(capacity, 0.0)


def effective_channel(
    h1: ChannelMatrix, h2: ChannelMatrix, relay_noise_factor: float
) -> np.ndarray:
    """Noise-whitened composite channel (c H2 H2^H + I)^(-1/2) H2 H1.

    The factor c folds the relay noise into the second hop. Passing
    c = f_u * alpha_u^2 makes the point-to-point capacity of the returned
    matrix (at per-symbol power P_T * alpha_u^2 over noise sigma^2) equal
    the exact relay capacity with common gain alpha_u.
    """
    if relay_noise_factor < 0:
        raise ValueError(f"relay_noise_factor must be >= 0, got {relay_noise_factor}")
    gram = _hermitize(relay_noise_factor * (h2.entries @ h2.entries.conj().T))
    eigvals, eigvecs = np.linalg.eigh(gram + np.eye(h2.n_rx))
    inv_sqrt = (eigvecs / np.sqrt(eigvals)) @ eigvecs.conj().T
    return inv_sqrt @ h2.entries @ h1.entries


def capacity_via_effective(
    h1: ChannelMatrix,
    h2: ChannelMatrix,
    tx_amplitude: float,
    alpha_u: float,
    sigma2: float,
    noise_figure: float,
) -> float:
    """Capacity through the whitened-composite route.

    Equals capacity_end_to_end with gain alpha_u * I, relay noise
    noise_figure * sigma2 and receiver noise sigma2; kept separate so the
    two routes can check each other.
    """
    h_tilde = effective_channel(h1, h2, noise_figure * alpha_u**2)
    snr_scale = (tx_amplitude * alpha_u) ** 2 / sigma2
    gram = np.eye(h_tilde.shape[1]) + snr_scale * (h_tilde.conj().T @ h_tilde)
    return max(_logdet2_hermitian_pd(gram), 0.0)


def bound_trace(
    h_tilde: np.ndarray, tx_amplitude: float, alpha_u: float, sigma2: float, n_uavs: int
) -> float:
    """Trace upper bound on the whitened-channel capacity.

    C <= K log2(1 + P_T a_u^2 / (sigma^2 K) * ||Ht||_F^2) with
    K = min(n_tx, n_rx, n_uavs). Tight when Ht has orthogonal columns of
    equal norm.
    """
    h_tilde = np.atleast_2d(np.asarray(h_tilde))
    k = min(h_tilde.shape[0], h_tilde.shape[1], n_uavs)
    total = float(np.sum(np.abs(h_tilde) ** 2))
    snr = (tx_amplitude * alpha_u) ** 2 / (sigma2 * k) * total
    return k * math.log1p(snr) / _LN2


def bound_singular(
    h1: ChannelMatrix,
    h2: ChannelMatrix,
    tx_amplitude: float,
    alpha_u: float,
    sigma2: float,
    relay_noise_factor: float,
) -> float:
    """Per-hop singular-value upper bound on the relay capacity.

    C <= K log2(1 + P_T a_u^2/(sigma^2 K) * sum_i s1_i^2 s2_i^2 / (1 + c s2_i^2))
    where s1/s2 are the K largest singular values of each hop paired in
    non-increasing order (the pairing that maximizes the sum), and c is the
    relay noise factor used for the whitening. Tight when both hops have
    orthogonal columns.
    """
    if relay_noise_factor < 0:
        raise ValueError(f"relay_noise_factor must be >= 0, got {relay_noise_factor}")
    n_uavs = h1.n_rx
    k = min(h1.n_tx, h2.n_rx, n_uavs)
    s1 = np.linalg.svd(h1.entries, compute_uv=False)[:k]
    s2 = np.linalg.svd(h2.entries, compute_uv=False)[:k]
    total = float(np.sum(s1**2 * s2**2 / (1.0 + relay_noise_factor * s2**2)))
    snr = (tx_amplitude * alpha_u) ** 2 / (sigma2 * k) * total
    return k * math.log1p(snr) / _LN2


def bound_far_field(
    scenario: Scenario,
    hop1_distance_m: float,
    n_uavs: int,
    alpha_u: float,
    convention: FarFieldConvention = FarFieldConvention.PRODUCT,
) -> float:
    """Closed-form far-field capacity bound at a given swarm distance.

    Assumes both hops are orthogonalized and every entry of a hop shares
    one nominal magnitude (swarm aperture small against both hop
    distances). With p1 = max(n_tx, n_uavs), p2 = max(n_uavs, n_rx):

        C <= K log2(1 + P_T a_u^2 L^4 p1^2 p2^2 /
                    (s2 R1^2 (f_u L^2 a_u^2 (4pi)^2 + q2 (4pi)^4 (R-R1)^2)))

    where L is the wavelength, s2 the noise power, and q2 the normalized
    second-hop squared singular value selected by `convention`. The
    single-antenna case reduces to the gain-limited closed form exactly.
    """
    r_total = scenario.link_distance_m
    if not 0.0 < hop1_distance_m < r_total:
        raise ValueError(
            f"hop1_distance_m must lie in (0, {r_total}), got {hop1_distance_m}"
        )
    n_tx = scenario.tx_array.n_elements
    n_rx = scenario.rx_array.n_elements
    k = min(n_tx, n_rx, n_uavs)
    phi1 = max(n_tx, n_uavs)
    phi2 = max(n_uavs, n_rx)
    if convention is FarFieldConvention.PRODUCT:
        psi2_sq = float(n_uavs * n_rx)
    else:
        psi2_sq = float(n_rx)

    lam = scenario.wavelength_m
    four_pi = 4.0 * math.pi
    numerator = scenario.tx_power_w * alpha_u**2 * lam**4 * phi1**2 * phi2**2
    denominator = (
        scenario.noise_power_w
        * hop1_distance_m**2
        * (
            scenario.relay_noise_figure * lam**2 * alpha_u**2 * four_pi**2
            + psi2_sq * four_pi**4 * (r_total - hop1_distance_m) ** 2
        )
    )
    return k * math.log1p(numerator / denominator) / _LN2


def _check_single_relay_range(scenario: Scenario, hop1_distance_m: float) -> None:
    if not 0.0 < hop1_distance_m < scenario.link_distance_m:
        raise ValueError(
            f"hop1_distance_m must lie in (0, {scenario.link_distance_m}), "
            f"got {hop1_distance_m}"
        )


def capacity_single_uav_gain_limited(scenario: Scenario, hop1_distance_m: float) -> float:
    """Single-relay capacity with the gain cap binding (alpha_u = alpha_max).

    C = log2(1 + P_T a_max^2 L^4 /
             (s2 R1^2 (f_u L^2 a_max^2 (4pi)^2 + (4pi)^4 (R-R1)^2)))
    """
    _check_single_relay_range(scenario, hop1_distance_m)
    lam = scenario.wavelength_m
    four_pi = 4.0 * math.pi
    alpha_u = scenario.relay_max_gain_amplitude
    numerator = scenario.tx_power_w * alpha_u**2 * lam**4
    denominator = (
        scenario.noise_power_w
        * hop1_distance_m**2
        * (
            scenario.relay_noise_figure * lam**2 * alpha_u**2 * four_pi**2
            + four_pi**4 * (scenario.link_distance_m - hop1_distance_m) ** 2
        )
    )
    return math.log1p(numerator / denominator) / _LN2


def capacity_single_uav_power_limited(scenario: Scenario, hop1_distance_m: float) -> float:
    """Single-relay capacity with the power budget binding.

    Substituting alpha_u^2 = budget / (P_T |h1|^2) gives

        C = log2(1 + B P_T L^2 /
                 ((4pi)^2 (B f_u s2 R1^2 + P_T s2 (R-R1)^2)))

    with B the relay power budget.
    """
    _check_single_relay_range(scenario, hop1_distance_m)
    lam = scenario.wavelength_m
    four_pi = 4.0 * math.pi
    budget = scenario.budget_per_uav_w(1)
    sigma2 = scenario.noise_power_w
    numerator = budget * scenario.tx_power_w * lam**2
    denominator = four_pi**2 * (
        budget * scenario.relay_noise_figure * sigma2 * hop1_distance_m**2
        + scenario.tx_power_w * sigma2 * (scenario.link_distance_m - hop1_distance_m) ** 2
    )
    return math.log1p(numerator / denominator) / _LN2


def single_relay_link(
    scenario: Scenario, hop1_distance_m: float, include_noise_in_power: bool = False
) -> tuple[float, GainPolicyResult]:
    """Exact capacity of one relay sitting on the transmitter-receiver axis.

    The relay is placed collinearly so its hop distances are exactly R1 and
    R - R1, matching the premise of the closed forms and of the
    constraint-region boundary.

    Returns:
        (capacity_bits_per_use, gain policy applied)
    """
    from .channel import los_channel

    _check_single_relay_range(scenario, hop1_distance_m)
    lam = scenario.wavelength_m
    tx_point = np.zeros((1, 3))
    relay_point = np.array([[hop1_distance_m, 0.0, 0.0]])
    rx_point = np.array([[scenario.link_distance_m, 0.0, 0.0]])
    h1 = los_channel(tx_point, relay_point, lam)
    h2 = los_channel(relay_point, rx_point, lam)
    gain = equal_gain(h1, scenario, include_noise_in_power)
    cap = capacity_end_to_end(
        h1,
        h2,
        gain.gain_matrix,
        scenario.tx_amplitude,
        scenario.relay_noise_power_w,
        scenario.noise_power_w,
    )
    return cap, gain


def swarm_link_capacity(
    scenario: Scenario,
    tx_points: np.ndarray,
    rx_points: np.ndarray,
    swarm_positions_m: np.ndarray,
    include_noise_in_power: bool = False,
) -> tuple[float, GainPolicyResult]:
    """Exact capacity of one swarm placement between fixed terminal points.

    Lighter companion of evaluate_placement for sweeps and sampling loops
    where the terminal positions are reused across many placements and the
    bounds are not needed.

    Returns:
        (capacity_bits_per_use, gain policy applied)
    """
    from .channel import los_channel

    positions = np.atleast_2d(np.asarray(swarm_positions_m, dtype=float))
    lam = scenario.wavelength_m
    h1 = los_channel(tx_points, positions, lam)
    h2 = los_channel(positions, rx_points, lam)
    gain = equal_gain(h1, scenario, include_noise_in_power)
    cap = capacity_end_to_end(
        h1,
        h2,
        gain.gain_matrix,
        scenario.tx_amplitude,
        scenario.relay_noise_power_w,
        scenario.noise_power_w,
    )
    return cap, gain


def evaluate_placement(
    scenario: Scenario,
    swarm_positions_m: np.ndarray,
    hop1_distance_m: float,
    convention: FarFieldConvention = FarFieldConvention.PRODUCT,
    include_noise_in_power: bool = False,
) -> CapacityReport:
    """Run the full capacity pipeline for one concrete swarm placement.

    Builds both hop channels from the canonical frame, applies the
    equal-gain policy, and assembles the exact capacity together with the
    trace, singular-value and far-field bounds (all bounds evaluated at
    the same gain as the capacity, so dominance holds numerically).
    """
    from .channel import los_channel

    tx_points, rx_points, _ = canonical_frame(scenario, hop1_distance_m)
    positions = np.atleast_2d(np.asarray(swarm_positions_m, dtype=float))
    lam = scenario.wavelength_m
    h1 = los_channel(tx_points, positions, lam)
    h2 = los_channel(positions, rx_points, lam)

    gain = equal_gain(h1, scenario, include_noise_in_power)
    cap = capacity_end_to_end(
        h1,
        h2,
        gain.gain_matrix,
        scenario.tx_amplitude,
        scenario.relay_noise_power_w,
        scenario.noise_power_w,
    )

    n_uavs = positions.shape[0]
    relay_noise_factor = scenario.relay_noise_figure * gain.alpha_u**2
    h_tilde = effective_channel(h1, h2, relay_noise_factor)
    sigma2 = scenario.noise_power_w
    return CapacityReport(
        capacity_bits_per_use=cap,
        alpha_u=gain.alpha_u,
        regime=gain.regime,
        bound_trace=bound_trace(h_tilde, scenario.tx_amplitude, gain.alpha_u, sigma2, n_uavs),
        bound_singular=bound_singular(
            h1, h2, scenario.tx_amplitude, gain.alpha_u, sigma2, relay_noise_factor
        ),
        bound_far_field=bound_far_field(
            scenario, hop1_distance_m, n_uavs, gain.alpha_u, convention
        ),
        icn_h1=channel_icn(h1),
        icn_h2=channel_icn(h2),
        k_min=min(scenario.tx_array.n_elements, scenario.rx_array.n_elements, n_uavs),
    )
