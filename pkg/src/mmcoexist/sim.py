"""Seeded Monte Carlo harness for the transmit and receive slots at the radio.

Each trial draws a fresh radar scene and two clustered radio links, trains
RF beams, then evaluates:

* transmit slot (radio i -> radio j while the radar listens): SVD combiner at
  j, RZF precoder at i; spectral efficiency of i->j and the radar SIR;
* receive slot (radio k -> radio i while the radar transmits): SVD precoder
  at k, LMMSE combiner at i; spectral efficiency of k->i under radar
  interference.

Baselines use pure SVD designs on the same draws with the radar absent.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .arrays import ArrayGeometry, dft_codebook
from .beamforming import (
    beamtrain,
    effective_channels,
    lmmse_combiner,
    normalize_precoder,
    rzf_precoder,
    svd_combiner,
    svd_precoder,
    validate_dof,
)
from .channels import (
    sample_radar_scene,
    synth_clustered_channel,
    synth_interference_channels,
    synth_point_target_channel,
)
from .errors import ConfigError, TrialError
from .metrics import InterferenceTerm, TrialResult, cdf_on_grid, sir_radar, spectral_efficiency

log = logging.getLogger(__name__)

DEFAULT_SNR_GRID_DB = (-40.0, -30.0, -20.0, -10.0, 0.0, 10.0)


def db2lin(x):
    return 10.0 ** (np.asarray(x, dtype=float) / 10.0)


@dataclass(frozen=True)
class ScenarioConfig:
    """Full parameterization of a coexistence experiment.

    Radios i, j and k share ``nt_radio``/``nr_radio`` antennas. Radio i has
    ``rf_chains_i_tx``/``rf_chains_i_rx`` RF chains, radio j receives with
    ``rf_chains_j`` and radio k transmits with ``rf_chains_k``. The
    interference SNRs default to ``snr_rr_db`` when left as None.
    """

    nt_radio: int = 32
    nr_radio: int = 32
    nt_radar: int = 3
    nr_radar: int = 4
    rf_chains_i_tx: int = 8
    rf_chains_i_rx: int = 8
    rf_chains_j: int = 2
    rf_chains_k: int = 2
    ns: int = 2
    num_targets: int = 600
    max_range: float = 100.0
    carrier_freq: float = 60e9
    snr_rr_db: float = 40.0
    snr_ir_db: float | None = None
    snr_ri_db: float | None = None
    snr_link_grid_db: tuple = DEFAULT_SNR_GRID_DB
    trials_per_point: int = 250
    base_seed: int = 0
    cluster_range: tuple = (1, 6)
    ray_range: tuple = (1, 10)
    angle_spread_deg: float = 5.0
    element_spacing: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "snr_link_grid_db", tuple(float(x) for x in self.snr_link_grid_db))
        object.__setattr__(self, "cluster_range", tuple(int(x) for x in self.cluster_range))
        object.__setattr__(self, "ray_range", tuple(int(x) for x in self.ray_range))
        self.validate()

    def validate(self):
        positive = ("nt_radio", "nr_radio", "nt_radar", "nr_radar", "rf_chains_i_tx", "rf_chains_i_rx",
                    "rf_chains_j", "rf_chains_k", "trials_per_point")
        for name in positive:
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        if int(self.ns) != self.ns or self.ns < 1:
            raise ConfigError(f"ns must be a positive integer, got {self.ns!r}")
        if self.num_targets < 0:
            raise ConfigError(f"num_targets must be >= 0, got {self.num_targets}")
        for name in ("max_range", "carrier_freq", "element_spacing"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be > 0, got {getattr(self, name)!r}")
        if self.angle_spread_deg < 0:
            raise ConfigError(f"angle_spread_deg must be >= 0, got {self.angle_spread_deg}")
        if not self.snr_link_grid_db:
            raise ConfigError("snr_link_grid_db must not be empty")
        for name, (lo, hi) in (("cluster_range", self.cluster_range), ("ray_range", self.ray_range)):
            if not 1 <= lo <= hi:
                raise ConfigError(f"{name} must satisfy 1 <= low <= high, got {[lo, hi]}")
        for name in ("rf_chains_i_tx", "rf_chains_i_rx", "rf_chains_j", "rf_chains_k"):
            if getattr(self, name) > (self.nt_radio if name in ("rf_chains_i_tx", "rf_chains_k") else self.nr_radio):
                raise ConfigError(f"{name} exceeds the number of antennas it feeds")
        links = {"i->j": min(self.rf_chains_i_tx, self.rf_chains_j),
                 "k->i": min(self.rf_chains_k, self.rf_chains_i_rx)}
        for link, bound in links.items():
            if self.ns > bound:
                raise ConfigError(f"ns={self.ns} exceeds the RF chains on link {link} (bound {bound})")

    @property
    def snr_ir(self) -> float:
        return float(db2lin(self.snr_rr_db if self.snr_ir_db is None else self.snr_ir_db))

    @property
    def snr_ri(self) -> float:
        return float(db2lin(self.snr_rr_db if self.snr_ri_db is None else self.snr_ri_db))

    def geometries(self) -> dict:
        d = self.element_spacing
        return {
            "radio_tx": ArrayGeometry(self.nt_radio, d),
            "radio_rx": ArrayGeometry(self.nr_radio, d),
            "radar_tx": ArrayGeometry(self.nt_radar, d),
            "radar_rx": ArrayGeometry(self.nr_radar, d),
        }

    def to_dict(self) -> dict:
        out = asdict(self)
        for key in ("snr_link_grid_db", "cluster_range", "ray_range"):
            out[key] = list(out[key])
        return out


def derive_trial_seed(base_seed: int, point: int, trial: int) -> int:
    """64-bit seed for one (SNR point, trial) cell, independent of execution order."""
    ss = np.random.SeedSequence(entropy=int(base_seed), spawn_key=(int(point), int(trial)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def draw_trial(config: ScenarioConfig, seed: int) -> dict:
    """Draw the scene and all channels of one trial and train the RF beams.

    Draw order is fixed: scene, then H_ij, then H_ki.
    """
    rng = np.random.default_rng(seed)
    g = config.geometries()
    spread = np.deg2rad(config.angle_spread_deg)
    scene = sample_radar_scene(rng, config.num_targets, config.max_range, config.carrier_freq)
    h_ij = synth_clustered_channel(rng, g["radio_rx"], g["radio_tx"], config.cluster_range, config.ray_range, spread)
    h_ki = synth_clustered_channel(rng, g["radio_rx"], g["radio_tx"], config.cluster_range, config.ray_range, spread)
    h_rr = synth_point_target_channel(scene, g["radar_rx"], g["radar_tx"])
    h_ir, h_ri = synth_interference_channels(scene, g["radio_tx"], g["radio_rx"], g["radar_tx"], g["radar_rx"])

    cb_tx = dft_codebook(g["radio_tx"])
    cb_rx = dft_codebook(g["radio_rx"])
    link_ij = beamtrain(h_ij, cb_tx, cb_rx, config.rf_chains_i_tx, config.rf_chains_j)
    link_ki = beamtrain(h_ki, cb_tx, cb_rx, config.rf_chains_k, config.rf_chains_i_rx)
    return {
        "scene": scene,
        "h_rr": h_rr, "h_ij": h_ij, "h_ki": h_ki, "h_ir": h_ir, "h_ri": h_ri,
        "f_rf_i": link_ij.rf_precoder, "w_rf_j": link_ij.rf_combiner,
        "f_rf_k": link_ki.rf_precoder, "w_rf_i": link_ki.rf_combiner,
    }


def radar_precoder(config: ScenarioConfig, trial_index: int) -> np.ndarray:
    """Single active radar transmit antenna, cycling with the trial index."""
    p = np.zeros((config.nt_radar, 1), dtype=complex)
    p[trial_index % config.nt_radar, 0] = 1.0
    return p


def run_trial(config: ScenarioConfig, snr_db: float, seed: int, trial_index: int = 0,
              point_index: int = 0) -> TrialResult:
    """One Monte Carlo trial at desired-link SNR ``snr_db`` (SNR_ij = SNR_ki)."""
    try:
        draws = draw_trial(config, seed)
        result = evaluate_trial(config, draws, snr_db, trial_index)
    except Exception as exc:
        raise TrialError(seed, exc) from exc
    result.seed = int(seed)
    result.point_index = point_index
    return result


def evaluate_trial(config: ScenarioConfig, draws: dict, snr_db: float, trial_index: int = 0) -> TrialResult:
    """Baseband design and metrics for already drawn channels and RF beams."""
    d = draws
    ns = config.ns
    snr = float(db2lin(snr_db))
    snr_ir, snr_ri = config.snr_ir, config.snr_ri
    eff = effective_channels(d["h_ij"], d["h_ki"], d["h_ir"], d["h_ri"],
                             d["f_rf_i"], d["w_rf_j"], d["f_rf_k"], d["w_rf_i"])
    f_rf_i = d["f_rf_i"]
    # unit-modulus RF combiners amplify the antenna noise too
    noise_j = d["w_rf_j"].conj().T @ d["w_rf_j"]
    noise_i = d["w_rf_i"].conj().T @ d["w_rf_i"]

    # transmit slot: i -> j, radar receiving
    w_bb_j = svd_combiner(eff.h_eff_ij, ns)
    f_bb_i = normalize_precoder(f_rf_i, rzf_precoder(eff.h_eff_ij, w_bb_j, eff.h_eff_ir, snr, snr_ir, ns))
    r_ij = spectral_efficiency(eff.h_eff_ij, f_bb_i, w_bb_j, snr, ns, noise_cov=noise_j)
    sir = sir_radar(d["h_ir"], f_rf_i, f_bb_i, ns)

    f_bb_i_svd = normalize_precoder(f_rf_i, svd_precoder(eff.h_eff_ij, ns))
    base_r_ij = spectral_efficiency(eff.h_eff_ij, f_bb_i_svd, w_bb_j, snr, ns, noise_cov=noise_j)
    sir_base = sir_radar(d["h_ir"], f_rf_i, f_bb_i_svd, ns)

    # receive slot: k -> i, radar transmitting
    f_bb_k = normalize_precoder(d["f_rf_k"], svd_precoder(eff.h_eff_ki, ns))
    w_bb_i = lmmse_combiner(eff.h_eff_ki, f_bb_k, eff.h_eff_ri, snr, snr_ri, ns)
    radar = InterferenceTerm(eff.h_eff_ri, snr_ri, radar_precoder(config, trial_index), np.eye(1))
    r_ki = spectral_efficiency(eff.h_eff_ki, f_bb_k, w_bb_i, snr, ns, [radar], noise_cov=noise_i)
    base_r_ki = spectral_efficiency(eff.h_eff_ki, f_bb_k, svd_combiner(eff.h_eff_ki, ns), snr, ns,
                                    noise_cov=noise_i)

    return TrialResult(
        r_ij=r_ij, r_ki=r_ki, sir_rr_db=sir,
        baseline_r_ij=base_r_ij, baseline_r_ki=base_r_ki, sir_baseline_db=sir_base,
        seed=-1, snr_point=float(snr_db), trial_index=trial_index,
        dof_warnings=[str(w) for w in validate_dof(config)],
    )


def _run_cell(args):
    config, point, trial = args
    seed = derive_trial_seed(config.base_seed, point, trial)
    return run_trial(config, config.snr_link_grid_db[point], seed, trial, point)


@dataclass
class SweepResult:
    config: ScenarioConfig
    trials: list = field(default_factory=list)  # one list of TrialResult per SNR point

    def rates_table(self) -> list:
        """Rows of (snr_db, mean_r_ij, mean_r_ki, mean_sum, baseline_sum)."""
        rows = []
        for snr_db, point in zip(self.config.snr_link_grid_db, self.trials):
            r_ij = np.mean([t.r_ij for t in point])
            r_ki = np.mean([t.r_ki for t in point])
            base = np.mean([t.baseline_sum_rate for t in point])
            rows.append((snr_db, float(r_ij), float(r_ki), float(np.mean([t.sum_rate for t in point])), float(base)))
        return rows

    def all_trials(self) -> list:
        return [t for point in self.trials for t in point]

    def sir_samples(self, with_design=True) -> np.ndarray:
        key = "sir_rr_db" if with_design else "sir_baseline_db"
        return np.array([getattr(t, key) for t in self.all_trials()])

    def sir_cdf_table(self) -> list:
        """Both SIR CDFs evaluated on the merged, sorted set of sample values."""
        with_d = self.sir_samples(True)
        without = self.sir_samples(False)
        grid = np.unique(np.concatenate([with_d, without]))
        cdf_w = cdf_on_grid(with_d, grid)
        cdf_wo = cdf_on_grid(without, grid)
        return [(float(x), float(a), float(b)) for x, a, b in zip(grid, cdf_w, cdf_wo)]


def run_sweep(config: ScenarioConfig, workers: int = 1) -> SweepResult:
    """Run ``trials_per_point`` trials at every grid SNR.

    Trials are independent and seeded per (point, trial) cell, so the result
    does not depend on ``workers`` or on execution order.
    """
    for w in validate_dof(config):
        log.warning("%s", w)
    cells = [(config, p, t) for p in range(len(config.snr_link_grid_db)) for t in range(config.trials_per_point)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(_run_cell, cells, chunksize=max(1, len(cells) // (8 * workers))))
    else:
        flat = [_run_cell(c) for c in cells]
    n = config.trials_per_point
    grouped = [flat[p * n:(p + 1) * n] for p in range(len(config.snr_link_grid_db))]
    return SweepResult(config=config, trials=grouped)
