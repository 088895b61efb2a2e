"""Figure-data CSVs and optional matplotlib renderings of a sweep."""

from __future__ import annotations

import csv
from pathlib import Path

RATES_COLUMNS = ("snr_db", "mean_r_ij", "mean_r_ki", "mean_sum", "baseline_sum")
SIR_CDF_COLUMNS = ("sir_db", "cdf_with_design", "cdf_without_design")
TRIALS_COLUMNS = ("point_index", "trial_index", "seed", "snr_db", "r_ij", "r_ki", "baseline_r_ij",
                  "baseline_r_ki", "sir_rr_db", "sir_baseline_db")


def fmt(x) -> str:
    """17 significant digits; parses back to the identical float."""
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def write_csv(path, columns, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def write_sweep_csvs(sweep, out_dir) -> dict:
    out_dir = Path(out_dir)
    paths = {
        "rates": out_dir / "rates.csv",
        "sir_cdf": out_dir / "sir_cdf.csv",
        "trials": out_dir / "trials.csv",
    }
    write_csv(paths["rates"], RATES_COLUMNS, sweep.rates_table())
    write_csv(paths["sir_cdf"], SIR_CDF_COLUMNS, sweep.sir_cdf_table())
    rows = [(t.point_index, t.trial_index, t.seed, t.snr_point, t.r_ij, t.r_ki, t.baseline_r_ij,
             t.baseline_r_ki, t.sir_rr_db, t.sir_baseline_db) for t in sweep.all_trials()]
    write_csv(paths["trials"], TRIALS_COLUMNS, rows)
    return paths


def _figure(width=5.0, height=3.8):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(width, height))
    ax.grid(True, alpha=0.3)
    return fig, ax


def _save(fig, path):
    import matplotlib.pyplot as plt

    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)


def plot_rates(rows, path):
    """Per-link and sum spectral efficiency against desired-link SNR."""
    snr = [r[0] for r in rows]
    fig, ax = _figure()
    ax.plot(snr, [r[1] for r in rows], "r--o", label=r"$R_{ij}$ (design)", markersize=4)
    ax.plot(snr, [r[2] for r in rows], "r:s", label=r"$R_{ki}$ (design)", markersize=4)
    ax.plot(snr, [r[3] for r in rows], "r-", label="sum (design)")
    ax.plot(snr, [r[4] for r in rows], "k-", label="sum (no radar)")
    ax.set_xlabel(r"$\mathrm{SNR}_{ij} = \mathrm{SNR}_{ki}$ (dB)")
    ax.set_ylabel("spectral efficiency (bps/Hz)")
    ax.legend(loc="upper left", fontsize="small")
    _save(fig, path)


def plot_sir_cdf(rows, path):
    """Radar SIR CDFs with and without the interference-aware design."""
    x = [r[0] for r in rows]
    fig, ax = _figure()
    ax.step(x, [r[1] for r in rows], "r-", where="post", label="with design")
    ax.step(x, [r[2] for r in rows], "k-", where="post", label="without design")
    ax.set_xlabel(r"$\mathrm{SIR}_{rr}$ (dB)")
    ax.set_ylabel("CDF")
    ax.set_ylim(0, 1.02)
    ax.legend(loc="lower right", fontsize="small")
    _save(fig, path)


def write_sweep_figures(sweep, out_dir) -> dict:
    out_dir = Path(out_dir)
    paths = {"rates_fig": out_dir / "rates.png", "sir_cdf_fig": out_dir / "sir_cdf.png"}
    plot_rates(sweep.rates_table(), paths["rates_fig"])
    plot_sir_cdf(sweep.sir_cdf_table(), paths["sir_cdf_fig"])
    return paths
