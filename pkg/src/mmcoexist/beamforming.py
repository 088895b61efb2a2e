"""Hybrid beamforming at the radio colocated with the radar.

The RF stage is fixed by codebook beamtraining. The baseband stage then
works on the reduced effective channels: an SVD combiner/precoder at the
far-end radios, a regularized zero-forcing precoder that keeps transmit
energy out of the radar receiver, and an LMMSE combiner that rejects the
radar's transmission.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .arrays import Codebook
from .errors import DegenerateStreamError, InvalidArgumentError


class RankDeficientWarning(UserWarning):
    """More streams were requested than the channel has nonzero singular values."""


class DegenerateChannelWarning(UserWarning):
    """Beamtraining saw an all-zero channel; the beam choice is arbitrary."""


@dataclass
class BeamformerSet:
    rf_precoder: np.ndarray
    bb_precoder: np.ndarray
    rf_combiner: np.ndarray
    bb_combiner: np.ndarray


@dataclass
class EffectiveChannels:
    h_eff_ij: np.ndarray  # Nrf_rx(j) x Nrf_tx(i)
    h_eff_ki: np.ndarray  # Nrf_rx(i) x Nrf_tx(k)
    h_eff_ir: np.ndarray  # Nr(radar) x Nrf_tx(i)
    h_eff_ri: np.ndarray  # Nrf_rx(i) x Nt(radar)


@dataclass
class TrainedBeams:
    """Outcome of a beam sweep over one link.

    ``rf_precoder`` and ``rf_combiner`` hold the chosen codebook beams as
    columns, rescaled to unit-modulus entries. ``pairs`` lists the accepted
    (rx, tx) codebook index pairs in selection order.
    """

    rf_precoder: np.ndarray
    rf_combiner: np.ndarray
    tx_indices: list
    rx_indices: list
    pairs: list = field(default_factory=list)
    degenerate: bool = False

    def __iter__(self):
        return iter((self.rf_precoder, self.rf_combiner))


@dataclass(frozen=True)
class DofWarning:
    side: str  # "transmit" or "receive"
    rf_chains: int
    required: int

    def __str__(self):
        return (f"{self.side} side: {self.rf_chains} RF chains < {self.required} needed "
                "to fully null the radar")


def _as_matrix(x) -> np.ndarray:
    if hasattr(x, "entries"):
        x = x.entries
    return np.atleast_2d(np.asarray(x, dtype=complex))


def _check_snr(*snrs):
    for s in snrs:
        if not np.isfinite(s):
            raise InvalidArgumentError(f"SNR must be finite, got {s}")


def beamtrain(channel, tx_codebook: Codebook, rx_codebook: Codebook, num_tx_beams: int,
              num_rx_beams: int) -> TrainedBeams:
    """Pick RF beams by exhaustive codebook sweep.

    Every (rx, tx) beam pair is scored by ``|w^H H f|^2``. Pairs are visited in
    decreasing power (ties go to the lower rx index, then lower tx index).
    While both sides still need beams a pair is accepted only if both of its
    beams are new. Once one side is full, a pair is accepted if it reuses an
    already chosen beam on the full side and brings a new beam on the other.
    """
    h = _as_matrix(channel)
    if num_tx_beams > tx_codebook.size or num_rx_beams > rx_codebook.size:
        raise InvalidArgumentError("more beams requested than the codebook holds")
    if num_tx_beams < 1 or num_rx_beams < 1:
        raise InvalidArgumentError("at least one beam per side is required")
    if h.shape != (rx_codebook.num_elements, tx_codebook.num_elements):
        raise InvalidArgumentError(f"channel shape {h.shape} does not match the codebooks")

    power = np.abs(rx_codebook.beams.conj().T @ h @ tx_codebook.beams) ** 2
    degenerate = not np.any(power > 0)
    if degenerate:
        warnings.warn("all-zero channel in beamtraining", DegenerateChannelWarning, stacklevel=2)
    n_tx = tx_codebook.size
    order = np.argsort(-power.ravel(), kind="stable")

    tx_sel, rx_sel, pairs = [], [], []
    tx_set, rx_set = set(), set()
    for flat in order:
        if len(tx_sel) == num_tx_beams and len(rx_sel) == num_rx_beams:
            break
        r, t = divmod(int(flat), n_tx)
        tx_full = len(tx_sel) == num_tx_beams
        rx_full = len(rx_sel) == num_rx_beams
        if tx_full:
            ok = t in tx_set and r not in rx_set
        elif rx_full:
            ok = r in rx_set and t not in tx_set
        else:
            ok = r not in rx_set and t not in tx_set
        if not ok:
            continue
        pairs.append((r, t))
        if t not in tx_set:
            tx_set.add(t)
            tx_sel.append(t)
        if r not in rx_set:
            rx_set.add(r)
            rx_sel.append(r)

    f_rf = tx_codebook.beams[:, tx_sel] * np.sqrt(tx_codebook.num_elements)
    w_rf = rx_codebook.beams[:, rx_sel] * np.sqrt(rx_codebook.num_elements)
    return TrainedBeams(f_rf, w_rf, tx_sel, rx_sel, pairs, degenerate)


def effective_channels(h_ij, h_ki, h_ir, h_ri, f_rf_i, w_rf_j, f_rf_k, w_rf_i) -> EffectiveChannels:
    """Reduce the raw channels to what the baseband stages see."""
    h_ij, h_ki, h_ir, h_ri = map(_as_matrix, (h_ij, h_ki, h_ir, h_ri))
    f_rf_i, w_rf_j, f_rf_k, w_rf_i = map(_as_matrix, (f_rf_i, w_rf_j, f_rf_k, w_rf_i))
    checks = [
        ("W_RF(j)^H H_ij", w_rf_j.shape[0], h_ij.shape[0]),
        ("H_ij F_RF(i)", h_ij.shape[1], f_rf_i.shape[0]),
        ("W_RF(i)^H H_ki", w_rf_i.shape[0], h_ki.shape[0]),
        ("H_ki F_RF(k)", h_ki.shape[1], f_rf_k.shape[0]),
        ("H_ir F_RF(i)", h_ir.shape[1], f_rf_i.shape[0]),
        ("W_RF(i)^H H_ri", w_rf_i.shape[0], h_ri.shape[0]),
    ]
    for name, a, b in checks:
        if a != b:
            raise InvalidArgumentError(f"dimension mismatch in {name}: {a} vs {b}")
    return EffectiveChannels(
        h_eff_ij=w_rf_j.conj().T @ h_ij @ f_rf_i,
        h_eff_ki=w_rf_i.conj().T @ h_ki @ f_rf_k,
        h_eff_ir=h_ir @ f_rf_i,
        h_eff_ri=w_rf_i.conj().T @ h_ri,
    )


def _fix_phase(vectors: np.ndarray) -> np.ndarray:
    # largest-magnitude entry of each column made real positive
    idx = np.argmax(np.abs(vectors), axis=0)
    pivot = vectors[idx, np.arange(vectors.shape[1])]
    phase = np.where(np.abs(pivot) > 0, pivot / np.where(pivot == 0, 1, np.abs(pivot)), 1)
    return vectors / phase


def _top_singular(h_eff, ns, side):
    h = _as_matrix(h_eff)
    if ns < 0 or ns > min(h.shape):
        raise InvalidArgumentError(f"Ns={ns} exceeds min{h.shape}")
    u, s, vh = np.linalg.svd(h)
    tol = max(h.shape) * np.finfo(float).eps * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > tol))
    if ns > rank:
        warnings.warn(f"Ns={ns} exceeds channel rank {rank}; padding with null directions",
                      RankDeficientWarning, stacklevel=3)
    vecs = u[:, :ns] if side == "left" else vh.conj().T[:, :ns]
    return _fix_phase(vecs)


def svd_combiner(h_eff, ns: int) -> np.ndarray:
    """Left singular vectors of the ``ns`` strongest modes."""
    return _top_singular(h_eff, ns, "left")


def svd_precoder(h_eff, ns: int) -> np.ndarray:
    """Right singular vectors of the ``ns`` strongest modes."""
    return _top_singular(h_eff, ns, "right")


def rzf_precoder(h_eff_ij, w_bb_j, h_eff_ir, snr_ij, snr_ir, ns) -> np.ndarray:
    """Regularized zero-forcing baseband precoder at the radio's transmitter.

    Solves ``(A^H W W^H A + (snr_ir/snr_ij) B^H B + (ns/snr_ij) I) X = A^H W``
    with ``A`` the desired effective channel and ``B`` the effective channel
    into the radar, and keeps the first ``ns`` columns. The output is not yet
    power-normalized; pass it through :func:`normalize_precoder`.
    """
    _check_snr(snr_ij, snr_ir)
    if not snr_ij > 0:
        raise InvalidArgumentError("snr_ij must be > 0")
    a, w, b = _as_matrix(h_eff_ij), _as_matrix(w_bb_j), _as_matrix(h_eff_ir)
    if w.shape[1] < ns:
        raise InvalidArgumentError("combiner has fewer than Ns columns")
    aw = a.conj().T @ w
    m = aw @ aw.conj().T + (snr_ir / snr_ij) * (b.conj().T @ b) + (ns / snr_ij) * np.eye(a.shape[1])
    return np.linalg.solve(m, aw)[:, :ns]


def lmmse_combiner(h_eff_ki, f_bb_k, h_eff_ri, snr_ki, snr_ri, ns) -> np.ndarray:
    """LMMSE baseband combiner at the radio's receiver, rejecting the radar.

    Solves ``(A F F^H A^H + (snr_ri/snr_ki) C C^H + (ns/snr_ki) I) W = A F``
    with ``A`` the desired effective channel, ``F`` the far-end baseband
    precoder and ``C`` the effective channel from the radar.
    """
    _check_snr(snr_ki, snr_ri)
    if not snr_ki > 0:
        raise InvalidArgumentError("snr_ki must be > 0")
    a, f, c = _as_matrix(h_eff_ki), _as_matrix(f_bb_k), _as_matrix(h_eff_ri)
    if f.shape[1] < ns:
        raise InvalidArgumentError("precoder has fewer than Ns columns")
    af = a @ f
    m = af @ af.conj().T + (snr_ri / snr_ki) * (c @ c.conj().T) + (ns / snr_ki) * np.eye(a.shape[0])
    return np.linalg.solve(m, af)[:, :ns]


def normalize_precoder(f_rf, f_bb) -> np.ndarray:
    """Scale each baseband column so the composite stream ``F_RF F_BB[:, l]`` has unit norm."""
    f_rf, f_bb = _as_matrix(f_rf), _as_matrix(f_bb)
    norms = np.linalg.norm(f_rf @ f_bb, axis=0)
    for stream, nrm in enumerate(norms):
        if not nrm > 0:
            raise DegenerateStreamError(stream)
    return f_bb / norms


def null_space_precoder(h_eff_ir, f_bb) -> np.ndarray:
    """Project baseband precoder columns onto the null space of ``h_eff_ir``.

    Reference design for complete nulling; needs more RF chains than the
    rank of the interference channel.
    """
    b = _as_matrix(h_eff_ir)
    _, s, vh = np.linalg.svd(b)
    rank = int(np.sum(s > max(b.shape) * np.finfo(float).eps * (s[0] if s.size else 0.0)))
    null = vh[rank:].conj().T
    return null @ (null.conj().T @ _as_matrix(f_bb))


def validate_dof(config) -> list:
    """Check the radio has enough RF chains to null the radar on both sides.

    ``config`` needs ``rf_chains_i_tx``, ``rf_chains_i_rx``, ``nt_radar``, ``nr_radar`` and
    ``ns`` attributes.
    """
    ns = config.ns
    if ns <= 0:
        return []
    out = []
    if config.rf_chains_i_tx < config.nr_radar + ns:
        out.append(DofWarning("transmit", config.rf_chains_i_tx, config.nr_radar + ns))
    if config.rf_chains_i_rx < config.nt_radar + ns:
        out.append(DofWarning("receive", config.rf_chains_i_rx, config.nt_radar + ns))
    return out
