import json

import numpy as np
import pytest
from scipy import stats

from mmcoexist import (
    ArrayGeometry,
    PointTargetSet,
    sample_radar_scene,
    synth_clustered_channel,
    synth_interference_channels,
    synth_point_target_channel,
)
from mmcoexist.channels import (
    SPEED_OF_LIGHT,
    ChannelMatrix,
    ClusterSpec,
    clustered_channel_from_spec,
    matrix_from_json,
    matrix_to_json,
)
from mmcoexist.errors import InvalidArgumentError


def scene_of(gains, angles, delays=None, fc=60e9):
    gains = np.asarray(gains, dtype=complex)
    angles = np.asarray(angles, dtype=float)
    delays = np.zeros(len(gains)) if delays is None else np.asarray(delays, dtype=float)
    return PointTargetSet(gains, delays, angles, angles.copy(), fc)


def test_empty_scene():
    s = sample_radar_scene(np.random.default_rng(0), 0, 100.0, 60e9)
    assert len(s) == 0
    h = synth_point_target_channel(s, ArrayGeometry(4), ArrayGeometry(3))
    assert h.shape == (4, 3) and not np.any(h.entries)


def test_round_trip_delay():
    assert abs(2 * 100.0 / SPEED_OF_LIGHT - 6.671e-7) < 1e-10


def test_scene_ranges_and_monostatic_angles(rng):
    s = sample_radar_scene(rng, 2000, 100.0, 60e9)
    ranges = s.delays * SPEED_OF_LIGHT / 2
    assert np.all(ranges > 0) and np.all(ranges <= 100.0 + 1e-9)
    np.testing.assert_array_equal(s.aods, s.aoas)
    assert np.all(np.abs(s.aoas) <= np.pi / 2)


def test_scene_angles_uniform_ks():
    n = 600
    crit = stats.kstwo.ppf(0.99, n)
    for seed in range(10):
        s = sample_radar_scene(np.random.default_rng(seed), n, 100.0, 60e9)
        d = stats.kstest(s.aoas, stats.uniform(loc=-np.pi / 2, scale=np.pi).cdf).statistic
        assert d < crit


def test_scene_gains_standard_complex_normal():
    s = sample_radar_scene(np.random.default_rng(3), 50_000, 100.0, 60e9)
    assert abs(np.mean(np.abs(s.gains) ** 2) - 1) < 0.03
    assert abs(np.mean(s.gains)) < 0.02


def test_scene_invariants():
    with pytest.raises(InvalidArgumentError):
        scene_of([1], [0.1], delays=[-1.0])
    with pytest.raises(InvalidArgumentError):
        scene_of([1], [2.0])


def test_single_broadside_target_all_ones():
    h = synth_point_target_channel(scene_of([1], [0.0]), ArrayGeometry(4), ArrayGeometry(3))
    np.testing.assert_allclose(h.entries, np.ones((4, 3)))
    assert h.kind == "radar"


def test_opposite_gains_cancel():
    h = synth_point_target_channel(scene_of([1, -1], [0.4, 0.4]), ArrayGeometry(4), ArrayGeometry(4))
    assert np.max(np.abs(h.entries)) < 1e-15


def test_point_target_matches_direct_sum(rng):
    # raw (unnormalized) sum evaluated target by target
    g_rx, g_tx = ArrayGeometry(5), ArrayGeometry(3)
    s = sample_radar_scene(rng, 7, 100.0, 60e9)
    expected = np.zeros((5, 3), dtype=complex)
    n_rx, n_tx = np.arange(5), np.arange(3)
    for p in range(7):
        ar = np.exp(1j * np.pi * n_rx * np.sin(s.aoas[p]))
        at = np.exp(1j * np.pi * n_tx * np.sin(s.aods[p]))
        expected += s.gains[p] * np.exp(-2j * np.pi * s.carrier_freq * s.delays[p]) * np.outer(ar, at.conj())
    raw = synth_point_target_channel(s, g_rx, g_tx, normalize=False).entries
    np.testing.assert_allclose(raw, expected, atol=1e-12)
    scaled = synth_point_target_channel(s, g_rx, g_tx).entries
    np.testing.assert_allclose(scaled, expected / np.sqrt(7), atol=1e-12)


@pytest.mark.parametrize("n_p", [1, 2, 3])
def test_point_target_rank_bound(rng, n_p):
    s = scene_of(rng.standard_normal(n_p) + 1j, rng.uniform(-1.2, 1.2, n_p))
    h = synth_point_target_channel(s, ArrayGeometry(4), ArrayGeometry(4)).entries
    sv = np.linalg.svd(h, compute_uv=False)
    assert np.sum(sv > 1e-10 * sv[0]) <= min(n_p, 4)
    if n_p == 2:
        assert sv[2] < 1e-10 * sv[0]


def test_clustered_single_ray_norm_and_rank():
    spec = ClusterSpec(np.ones((1, 1), complex), np.array([[0.3]]), np.array([[-0.8]]))
    h = clustered_channel_from_spec(spec, ArrayGeometry(16), ArrayGeometry(8)).entries
    assert abs(np.linalg.norm(h) ** 2 - 128) < 1e-9
    sv = np.linalg.svd(h, compute_uv=False)
    assert sv[1] < 1e-10 * sv[0]


def test_clustered_single_ray_draw_is_rank_one(rng):
    h = synth_clustered_channel(rng, ArrayGeometry(32), ArrayGeometry(32), (1, 1), (1, 1)).entries
    sv = np.linalg.svd(h, compute_uv=False)
    assert sv[1] < 1e-10 * sv[0]


def test_clustered_normalization_monte_carlo():
    rng = np.random.default_rng(11)
    g = ArrayGeometry(32)
    norms = [np.linalg.norm(synth_clustered_channel(rng, g, g).entries) ** 2 for _ in range(10_000)]
    assert abs(np.mean(norms) / 1024 - 1) < 0.02


def test_clustered_rejects_bad_ranges(rng):
    with pytest.raises(InvalidArgumentError):
        synth_clustered_channel(rng, ArrayGeometry(4), ArrayGeometry(4), (0, 3), (1, 2))
    with pytest.raises(InvalidArgumentError):
        synth_clustered_channel(rng, ArrayGeometry(4), ArrayGeometry(4), (1, 3), (4, 2))


def test_interference_channels_broadside_and_shapes():
    s = scene_of([1], [0.0])
    radio, radar_tx, radar_rx = ArrayGeometry(32), ArrayGeometry(3), ArrayGeometry(4)
    h_ir, h_ri = synth_interference_channels(s, radio, radio, radar_tx, radar_rx)
    np.testing.assert_allclose(h_ir.entries, np.ones((4, 32)))
    assert h_ir.shape == (4, 32) and h_ri.shape == (32, 3)
    assert (h_ir.kind, h_ri.kind) == ("interference-tx", "interference-rx")


def test_interference_channels_empty_scene():
    s = scene_of([], [])
    h_ir, h_ri = synth_interference_channels(s, ArrayGeometry(32), ArrayGeometry(32), ArrayGeometry(3),
                                             ArrayGeometry(4))
    assert not np.any(h_ir.entries) and not np.any(h_ri.entries)
    assert h_ir.shape == (4, 32) and h_ri.shape == (32, 3)


def test_shared_scene_coupling(rng):
    s = sample_radar_scene(rng, 5, 100.0, 60e9)
    radio, rtx, rrx = ArrayGeometry(8), ArrayGeometry(3), ArrayGeometry(4)
    p = 2
    before = [synth_point_target_channel(s, rrx, rtx).entries, *(c.entries for c in
              synth_interference_channels(s, radio, radio, rtx, rrx))]
    s2 = s.without(p)
    after = [synth_point_target_channel(s2, rrx, rtx).entries, *(c.entries for c in
             synth_interference_channels(s2, radio, radio, rtx, rrx))]
    g = s.phased_gains[p] / np.sqrt(len(s))
    ang = s.aoas[p]
    from mmcoexist import steering_vector
    pairs = [(rrx, rtx), (rrx, radio), (radio, rtx)]
    for (rx, tx), b, a in zip(pairs, before, after):
        term = g * np.outer(steering_vector(rx, ang), steering_vector(tx, ang).conj())
        np.testing.assert_allclose(b - a, term, atol=1e-12)


def test_determinism():
    def draw(seed):
        r = np.random.default_rng(seed)
        s = sample_radar_scene(r, 30, 100.0, 60e9)
        return synth_clustered_channel(r, ArrayGeometry(8), ArrayGeometry(8)).entries, s.gains
    a, b = draw(5), draw(5)
    assert a[0].tobytes() == b[0].tobytes() and a[1].tobytes() == b[1].tobytes()


def test_channel_matrix_rejects_non_finite():
    with pytest.raises(InvalidArgumentError):
        ChannelMatrix(np.array([[np.nan]]), "radar")
    with pytest.raises(InvalidArgumentError):
        ChannelMatrix(np.zeros((2, 2)), "bogus")


def test_json_layout_round_trip(rng):
    m = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    obj = json.loads(json.dumps(matrix_to_json(m, "radar")))
    assert obj["shape"] == [3, 2] and obj["kind"] == "radar"
    assert obj["data"][:4] == [m[0, 0].real, m[0, 0].imag, m[0, 1].real, m[0, 1].imag]
    np.testing.assert_array_equal(matrix_from_json(obj), m)
