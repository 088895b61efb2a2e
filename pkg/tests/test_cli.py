import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from mmcoexist import ScenarioConfig
from mmcoexist.channels import matrix_from_json
from mmcoexist.cli import main
from mmcoexist.config import CONFIG_KEYS, config_to_mapping, parse_config
from mmcoexist.errors import ConfigError
from mmcoexist.report import fmt

FAST = "trials: 2\nnum_targets: 40\nsnr_link_grid_db: [-10, 10]\n"


def write(tmp_path, text, name="cfg.yaml"):
    p = tmp_path / name
    p.write_text(text)
    return p


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_empty_file_gives_defaults(tmp_path):
    assert parse_config(write(tmp_path, "")) == ScenarioConfig()


def test_ns_above_link_chains(tmp_path):
    with pytest.raises(ConfigError, match="ns"):
        parse_config(write(tmp_path, "ns: 3\nrf_chains_j: 2\n"))


def test_trials_key(tmp_path):
    cfg = parse_config(write(tmp_path, "trials: 10\n"))
    assert cfg.trials_per_point == 10
    assert cfg == ScenarioConfig(trials_per_point=10)


def test_unknown_key_named(tmp_path):
    with pytest.raises(ConfigError, match="bogus"):
        parse_config(write(tmp_path, "bogus: 1\n"))


def test_bad_schema_and_shape(tmp_path):
    with pytest.raises(ConfigError, match="schema"):
        parse_config(write(tmp_path, "schema: other/v9\n"))
    with pytest.raises(ConfigError):
        parse_config(write(tmp_path, "- 1\n- 2\n"))
    with pytest.raises(ConfigError):
        parse_config(tmp_path / "missing.yaml")


def test_mapping_round_trip(tmp_path):
    cfg = ScenarioConfig(trials_per_point=7, snr_ri_db=20.0)
    m = config_to_mapping(cfg)
    assert set(m) - {"schema"} == set(CONFIG_KEYS)
    assert parse_config(write(tmp_path, json.dumps(m))) == cfg


def test_cli_unknown_key_exit_2(tmp_path, capsys):
    assert main(["validate", "--config", str(write(tmp_path, "nope: 2\n"))]) == 2
    assert "nope" in capsys.readouterr().err


def test_validate_command(tmp_path, capsys):
    assert main(["validate"]) == 0
    assert "config ok (0 warnings)" in capsys.readouterr().out
    assert main(["validate", "--config", str(write(tmp_path, "rf_chains_i_tx: 5\n"))]) == 0
    assert "warning" in capsys.readouterr().out


def test_sweep_outputs(tmp_path):
    out = tmp_path / "run"
    assert main(["sweep", "--config", str(write(tmp_path, FAST)), "--out", str(out)]) == 0
    rates = read_csv(out / "rates.csv")
    assert rates[0] == ["snr_db", "mean_r_ij", "mean_r_ki", "mean_sum", "baseline_sum"]
    assert len(rates) == 3
    assert read_csv(out / "sir_cdf.csv")[0] == ["sir_db", "cdf_with_design", "cdf_without_design"]
    assert len(read_csv(out / "trials.csv")) == 1 + 4
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["schema"] == "mmcoexist/manifest/v1"
    assert manifest["config"]["trials"] == 2
    assert set(manifest["outputs"].values()) == {"rates.csv", "sir_cdf.csv", "trials.csv"}


def test_one_trial_one_point(tmp_path):
    cfg = write(tmp_path, "trials: 1\nsnr_link_grid_db: [0]\nnum_targets: 10\n")
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    assert len(read_csv(tmp_path / "o" / "trials.csv")) == 2


def test_default_grid_has_six_rows(tmp_path):
    assert main(["sweep", "--trials", "1", "--out", str(tmp_path / "o")]) == 0
    assert len(read_csv(tmp_path / "o" / "rates.csv")) == 1 + 6


def test_reruns_byte_identical(tmp_path):
    cfg = str(write(tmp_path, FAST))
    for name in ("a", "b"):
        assert main(["sweep", "--config", cfg, "--seed", "5", "--out", str(tmp_path / name)]) == 0
    for f in ("rates.csv", "sir_cdf.csv", "trials.csv"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_manifest_rerun_reproduces(tmp_path):
    assert main(["sweep", "--config", str(write(tmp_path, FAST)), "--seed", "9", "--out", str(tmp_path / "a")]) == 0
    manifest = tmp_path / "a" / "manifest.json"
    assert main(["sweep", "--config", str(manifest), "--out", str(tmp_path / "b")]) == 0
    for f in ("rates.csv", "sir_cdf.csv", "trials.csv"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_unwritable_out_exit_3(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["sweep", "--config", str(write(tmp_path, FAST)), "--out", str(blocker / "sub")]) == 3
    assert "error" in capsys.readouterr().err


def test_csv_round_trip_17_digits(tmp_path):
    assert main(["sweep", "--config", str(write(tmp_path, FAST)), "--out", str(tmp_path / "o")]) == 0
    rows = read_csv(tmp_path / "o" / "trials.csv")[1:]
    for row in rows:
        for cell in row[3:]:
            assert fmt(float(cell)) == cell
    for x in (0.1, 1 / 3, 1e-300, 2.0 ** 0.5, -7.25e17):
        assert float(fmt(x)) == x


def test_plot_flag_writes_figures(tmp_path):
    out = tmp_path / "o"
    assert main(["sweep", "--config", str(write(tmp_path, FAST)), "--out", str(out), "--plot"]) == 0
    for name in ("rates.png", "sir_cdf.png"):
        assert (out / name).read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_dump_channels(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["dump-channels", "--seed", "0", "--out", str(a)]) == 0
    assert main(["dump-channels", "--seed", "0", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    d = json.loads(a.read_text())
    assert d["matrices"]["H_ri"]["shape"] == [32, 3]
    assert d["matrices"]["H_ir"]["shape"] == [4, 32]
    assert d["matrices"]["H_rr"]["shape"] == [4, 3]
    assert d["rf_beamformers"]["F_RF_i"]["shape"] == [32, 8]
    f = matrix_from_json(d["rf_beamformers"]["W_RF_j"])
    np.testing.assert_allclose(np.abs(f), 1.0, atol=1e-12)


def test_dump_channels_no_targets(tmp_path):
    out = tmp_path / "c.json"
    assert main(["dump-channels", "--config", str(write(tmp_path, "num_targets: 0\n")), "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    for name, shape in (("H_rr", [4, 3]), ("H_ir", [4, 32]), ("H_ri", [32, 3])):
        assert d["matrices"][name]["shape"] == shape
        assert not np.any(matrix_from_json(d["matrices"][name]))
    assert np.any(matrix_from_json(d["matrices"]["H_ij"]))


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "mmcoexist", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and "mmcoexist" in r.stdout


def test_unsigned_exponent_and_explicit_nulls(tmp_path):
    cfg = parse_config(write(tmp_path, "carrier_freq: 6.0e10\nsnr_ir_db: null\nmax_range: 50\n"))
    assert cfg.carrier_freq == 6e10 and cfg.snr_ir_db is None and cfg.max_range == 50.0


@pytest.mark.parametrize("text, key", [
    ("trials: ten\n", "trials"),
    ("ns: 2.5\n", "ns"),
    ("max_range: far\n", "max_range"),
    ("snr_link_grid_db: 5\n", "snr_link_grid_db"),
])
def test_wrong_types_name_the_key(tmp_path, text, key):
    with pytest.raises(ConfigError, match=key):
        parse_config(write(tmp_path, text))
