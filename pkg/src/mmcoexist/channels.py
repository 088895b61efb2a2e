"""Channel synthesis: the radar scene, clustered radio links and radar/radio coupling.

All randomness comes through an explicit ``numpy.random.Generator``; the
functions never touch global state, so a trial is reproducible from its seed.
Channels are small-scale only. Large-scale gains and transmit powers are
carried by SNR terms elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import ArrayGeometry, steering_vector
from .errors import InvalidArgumentError

SPEED_OF_LIGHT = 299_792_458.0

CHANNEL_KINDS = ("radar", "communication", "interference-tx", "interference-rx")


@dataclass(frozen=True)
class PointTargetSet:
    """Point reflectors seen by the radar.

    ``gains``, ``delays``, ``aods`` and ``aoas`` are 1-D arrays with one entry
    per target; delays are round-trip seconds, angles radians from broadside.
    """

    gains: np.ndarray
    delays: np.ndarray
    aods: np.ndarray
    aoas: np.ndarray
    carrier_freq: float

    def __post_init__(self):
        n = len(self.gains)
        if not (len(self.delays) == len(self.aods) == len(self.aoas) == n):
            raise InvalidArgumentError("target attribute arrays differ in length")
        if np.any(np.asarray(self.delays) < 0):
            raise InvalidArgumentError("target delays must be non-negative")
        for name in ("aods", "aoas"):
            a = np.asarray(getattr(self, name))
            if np.any(np.abs(a) > np.pi / 2):
                raise InvalidArgumentError(f"target {name} must lie in [-pi/2, pi/2]")

    def __len__(self):
        return len(self.gains)

    @property
    def phased_gains(self) -> np.ndarray:
        """Per-target complex gain including the carrier phase of the delay."""
        return self.gains * np.exp(-2j * np.pi * self.carrier_freq * self.delays)

    def without(self, index: int) -> "PointTargetSet":
        """Copy of the scene with target ``index`` silenced (zero gain)."""
        gains = np.array(self.gains, dtype=complex)
        gains[index] = 0.0
        return PointTargetSet(gains, self.delays, self.aods, self.aoas, self.carrier_freq)


@dataclass(frozen=True)
class ClusterSpec:
    """Drawn parameters of one clustered channel realization.

    ``gains``, ``aoas`` and ``aods`` have shape (num_clusters, rays_per_cluster).
    """

    gains: np.ndarray
    aoas: np.ndarray
    aods: np.ndarray

    def __post_init__(self):
        if self.gains.ndim != 2 or self.gains.shape[0] < 1 or self.gains.shape[1] < 1:
            raise InvalidArgumentError("cluster spec needs at least one cluster and one ray")
        if not (self.gains.shape == self.aoas.shape == self.aods.shape):
            raise InvalidArgumentError("cluster spec arrays differ in shape")

    @property
    def num_clusters(self) -> int:
        return self.gains.shape[0]

    @property
    def rays_per_cluster(self) -> int:
        return self.gains.shape[1]


@dataclass(frozen=True)
class ChannelMatrix:
    entries: np.ndarray
    kind: str

    def __post_init__(self):
        if self.kind not in CHANNEL_KINDS:
            raise InvalidArgumentError(f"unknown channel kind {self.kind!r}")
        if self.entries.ndim != 2:
            raise InvalidArgumentError("channel entries must be a 2-D matrix")
        if not np.all(np.isfinite(self.entries)):
            raise InvalidArgumentError("channel entries must be finite")

    @property
    def shape(self):
        return self.entries.shape


def complex_normal(rng: np.random.Generator, size) -> np.ndarray:
    """Circularly symmetric complex normal samples with unit variance."""
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2)


def sample_radar_scene(rng, num_targets, max_range, carrier_freq) -> PointTargetSet:
    """Draw a monostatic scene of targets uniform in azimuth and range."""
    if num_targets < 0:
        raise InvalidArgumentError("num_targets must be >= 0")
    if not max_range > 0:
        raise InvalidArgumentError("max_range must be > 0")
    angles = rng.uniform(-np.pi / 2, np.pi / 2, num_targets)
    # 1 - U(0,1) lies in (0, 1], so ranges never collapse onto the radar
    ranges = max_range * (1.0 - rng.random(num_targets))
    gains = complex_normal(rng, num_targets)
    delays = 2.0 * ranges / SPEED_OF_LIGHT
    return PointTargetSet(gains=gains, delays=delays, aods=angles, aoas=angles.copy(),
                          carrier_freq=carrier_freq)


def _scene_matrix(scene: PointTargetSet, rx: ArrayGeometry, tx: ArrayGeometry, normalize: bool) -> np.ndarray:
    if len(scene) == 0:
        return np.zeros((rx.num_elements, tx.num_elements), dtype=complex)
    a_r = steering_vector(rx, scene.aoas)
    a_t = steering_vector(tx, scene.aods)
    h = (a_r * scene.phased_gains) @ a_t.conj().T
    if normalize:
        # unit average power per entry; the reflected power level lives in SNR_rr
        h /= np.sqrt(len(scene))
    return h


def synth_point_target_channel(scene: PointTargetSet, rx: ArrayGeometry, tx: ArrayGeometry,
                               normalize: bool = True) -> ChannelMatrix:
    """Radar channel as a sum of rank-one target reflections.

    ``sum_p g_p exp(-j 2 pi fc tau_p) a_rx(aoa_p) a_tx(aod_p)^H``. With
    ``normalize`` (the default) the sum is divided by sqrt(num_targets) so that
    E||H||_F^2 = Nr*Nt, matching the clustered links; pass False for the raw sum.
    """
    return ChannelMatrix(_scene_matrix(scene, rx, tx, normalize), "radar")


def draw_cluster_spec(rng, cluster_range=(1, 6), ray_range=(1, 10), angle_spread=np.deg2rad(5.0)) -> ClusterSpec:
    """Draw cluster count, ray count, ray gains and ray angles.

    Cluster centers are uniform over [-pi/2, pi/2]; each ray is offset from
    its cluster center by a Laplacian draw with scale ``angle_spread``.
    """
    lo_c, hi_c = cluster_range
    lo_r, hi_r = ray_range
    if not (1 <= lo_c <= hi_c and 1 <= lo_r <= hi_r):
        raise InvalidArgumentError(f"invalid cluster/ray ranges {cluster_range}, {ray_range}")
    if angle_spread < 0:
        raise InvalidArgumentError("angle_spread must be >= 0")
    n_clust = int(rng.integers(lo_c, hi_c + 1))
    n_rays = int(rng.integers(lo_r, hi_r + 1))
    shape = (n_clust, n_rays)
    aoa_centers = rng.uniform(-np.pi / 2, np.pi / 2, (n_clust, 1))
    aod_centers = rng.uniform(-np.pi / 2, np.pi / 2, (n_clust, 1))
    aoas = aoa_centers + rng.laplace(0.0, angle_spread, shape) if angle_spread > 0 else np.repeat(aoa_centers, n_rays, 1)
    aods = aod_centers + rng.laplace(0.0, angle_spread, shape) if angle_spread > 0 else np.repeat(aod_centers, n_rays, 1)
    gains = complex_normal(rng, shape)
    return ClusterSpec(gains=gains, aoas=aoas, aods=aods)


def clustered_channel_from_spec(spec: ClusterSpec, rx: ArrayGeometry, tx: ArrayGeometry) -> ChannelMatrix:
    nt, nr = tx.num_elements, rx.num_elements
    scale = np.sqrt(nt * nr / (spec.num_clusters * spec.rays_per_cluster))
    # unit-norm responses here, otherwise the array gain is counted twice
    a_r = steering_vector(rx, spec.aoas.ravel()) / np.sqrt(nr)
    a_t = steering_vector(tx, spec.aods.ravel()) / np.sqrt(nt)
    h = scale * (a_r * spec.gains.ravel()) @ a_t.conj().T
    return ChannelMatrix(h, "communication")


def synth_clustered_channel(rng, rx: ArrayGeometry, tx: ArrayGeometry, cluster_range=(1, 6),
                            ray_range=(1, 10), angle_spread=np.deg2rad(5.0)) -> ChannelMatrix:
    """Saleh-Valenzuela style ray/cluster channel with E||H||_F^2 = Nt*Nr."""
    spec = draw_cluster_spec(rng, cluster_range, ray_range, angle_spread)
    return clustered_channel_from_spec(spec, rx, tx)


def synth_interference_channels(scene: PointTargetSet, radio_tx: ArrayGeometry, radio_rx: ArrayGeometry,
                                radar_tx: ArrayGeometry, radar_rx: ArrayGeometry, normalize: bool = True):
    """Coupling channels between the colocated radio and radar through the scene.

    Returns ``(h_ir, h_ri)``: radio transmitter into the radar receiver
    (radar_rx x radio_tx) and radar transmitter into the radio receiver
    (radio_rx x radar_tx). Both reuse the scene's gains and angles and the
    same scaling as :func:`synth_point_target_channel`.
    """
    h_ir = ChannelMatrix(_scene_matrix(scene, radar_rx, radio_tx, normalize), "interference-tx")
    h_ri = ChannelMatrix(_scene_matrix(scene, radio_rx, radar_tx, normalize), "interference-rx")
    return h_ir, h_ri


def matrix_to_json(matrix, kind=None) -> dict:
    """Row-major dump with interleaved real/imaginary parts."""
    m = np.asarray(matrix, dtype=complex)
    flat = np.empty(2 * m.size)
    flat[0::2] = m.real.ravel()
    flat[1::2] = m.imag.ravel()
    out = {"shape": list(m.shape), "data": flat.tolist()}
    if kind is not None:
        out["kind"] = kind
    return out


def matrix_from_json(obj: dict) -> np.ndarray:
    flat = np.asarray(obj["data"], dtype=float)
    return (flat[0::2] + 1j * flat[1::2]).reshape(obj["shape"])
