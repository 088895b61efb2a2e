"""Link spectral efficiency, radar SIR and empirical CDFs.

Noise is normalized to unit power at the baseband input (sigma^2 = 1), so
linear SNR values multiply the small-scale channels directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateCombinerError, InvalidArgumentError

SIR_CAP_DB = 300.0
_SIR_FLOOR = 1e-30


@dataclass(frozen=True)
class InterferenceTerm:
    """An interferer seen through ``h_int`` with precoder ``p_int`` and symbol covariance ``symbol_cov``."""

    h_int: np.ndarray
    snr_int: float
    p_int: np.ndarray
    symbol_cov: np.ndarray

    def covariance(self) -> np.ndarray:
        g = np.atleast_2d(self.h_int) @ np.atleast_2d(self.p_int)
        return self.snr_int * g @ np.atleast_2d(self.symbol_cov) @ g.conj().T


@dataclass
class TrialResult:
    r_ij: float
    r_ki: float
    sir_rr_db: float
    baseline_r_ij: float
    baseline_r_ki: float
    sir_baseline_db: float
    seed: int
    snr_point: float
    point_index: int = 0
    trial_index: int = 0
    dof_warnings: list = field(default_factory=list)

    @property
    def sum_rate(self):
        return self.r_ij + self.r_ki

    @property
    def baseline_sum_rate(self):
        return self.baseline_r_ij + self.baseline_r_ki


def spectral_efficiency(h_eff, f_bb, w_bb, snr_link, ns, interference=(), noise_cov=None) -> float:
    """Gaussian-signaling rate in bits/s/Hz after baseband combining.

    ``log2 det(I + Q^-1 (snr/ns) T T^H)`` with ``T = W^H H F`` and
    ``Q = W^H (N + sum of interference covariances) W``. The noise covariance
    ``N`` at the combiner input defaults to the identity; pass ``W_RF^H W_RF``
    to account for the gain of an unnormalized RF combiner. Combiner columns
    that are linearly dependent (for example an all-zero column on a rank
    deficient link) carry no extra information and are dropped.
    """
    if not snr_link > 0:
        raise InvalidArgumentError("snr_link must be > 0")
    h = np.atleast_2d(h_eff)
    f = np.atleast_2d(f_bb)
    w = np.atleast_2d(w_bb)
    if h.shape[1] != f.shape[0] or h.shape[0] != w.shape[0]:
        raise InvalidArgumentError(f"inconsistent shapes: H {h.shape}, F {f.shape}, W {w.shape}")
    cov = np.eye(h.shape[0], dtype=complex) if noise_cov is None else np.array(noise_cov, dtype=complex)
    if cov.shape != (h.shape[0], h.shape[0]):
        raise InvalidArgumentError(f"noise covariance must be {h.shape[0]}x{h.shape[0]}")
    for term in interference:
        cov = cov + term.covariance()
    basis = _column_space(w)
    q = basis.conj().T @ cov @ basis
    t = basis.conj().T @ h @ f
    sig = (snr_link / ns) * (t @ t.conj().T)
    _, logdet_q = np.linalg.slogdet(q)
    _, logdet_total = np.linalg.slogdet(q + sig)
    return max(float((logdet_total - logdet_q) / np.log(2)), 0.0)


def _column_space(w: np.ndarray) -> np.ndarray:
    # The rate only depends on span(W): any invertible mixing of combiner
    # columns cancels between the signal and noise terms.
    norms = np.linalg.norm(w, axis=0)
    live = norms > 0
    if not np.any(live):
        raise DegenerateCombinerError("combiner is all-zero; nothing is received")
    u, s, _ = np.linalg.svd(w[:, live] / norms[live], full_matrices=False)
    return u[:, s > 1e-12 * s[0]]


def interference_power(h_ir, f_rf, f_bb, ns) -> float:
    """``tr{H F_RF F_BB R_s F_BB^H F_RF^H H^H}`` with ``R_s = I / ns``."""
    h = h_ir.entries if hasattr(h_ir, "entries") else np.atleast_2d(h_ir)
    g = h @ np.atleast_2d(f_rf) @ np.atleast_2d(f_bb)
    return float(np.sum(np.abs(g) ** 2) / ns)


def sir_radar(h_ir, f_rf, f_bb, ns) -> float:
    """Radar SIR in dB; inverse of the interference power, capped at 300 dB."""
    p = interference_power(h_ir, f_rf, f_bb, ns)
    if p < _SIR_FLOOR:
        return SIR_CAP_DB
    return min(-10.0 * np.log10(p), SIR_CAP_DB)


def empirical_cdf(samples):
    """Step-function CDF: the k-th smallest sample gets probability k/n."""
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    if x.size == 0:
        raise InvalidArgumentError("empirical_cdf needs at least one sample")
    n = x.size
    return [(float(v), (k + 1) / n) for k, v in enumerate(x)]


def cdf_on_grid(samples, grid) -> np.ndarray:
    """Fraction of ``samples`` at or below each grid value."""
    x = np.sort(np.asarray(samples, dtype=float))
    return np.searchsorted(x, np.asarray(grid, dtype=float), side="right") / x.size
