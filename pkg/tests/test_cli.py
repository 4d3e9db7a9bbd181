"""End-to-end command behavior: outputs, exit codes, caching, figures."""

import csv
import json
import os

import pytest

from goldbach_lab.cli import main
from goldbach_lab.partitions import load_partition_table


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# count
# ---------------------------------------------------------------------------

def test_count_small_summary(capsys):
    code, out, _ = run(capsys, "count", "--n", "5")
    assert code == 0
    rows = list(csv.reader(out.splitlines()))
    assert rows[0] == ["n", "total", "q_min", "q_max", "zero_count"]
    assert rows[1] == ["5", "4", "1", "2", "0"]


def test_count_n3(capsys):
    code, out, _ = run(capsys, "count", "--n", "3", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc == {"n": 3, "total": 1, "q_min": 1, "q_max": 1, "zero_count": 0}


def test_count_out_file_matches_stdout(capsys, tmp_path):
    code, out, _ = run(capsys, "count", "--n", "100")
    path = tmp_path / "summary.csv"
    code2, out2, _ = run(capsys, "count", "--n", "100", "--out", str(path))
    assert code == code2 == 0
    assert out2 == ""
    assert path.read_text() == out


def test_count_writes_and_reuses_cache(capsys, tmp_path):
    cache = tmp_path / "q.bin"
    code, out, _ = run(capsys, "count", "--n", "500", "--table-cache", str(cache))
    assert code == 0
    assert cache.exists()
    table = load_partition_table(str(cache))
    assert table.n == 500
    # second run must read the cache and emit a byte-identical report
    code2, out2, _ = run(capsys, "count", "--n", "500", "--table-cache", str(cache))
    assert code2 == 0
    assert out2 == out


def test_count_cache_n_mismatch_is_io_error(capsys, tmp_path):
    cache = tmp_path / "q.bin"
    assert run(capsys, "count", "--n", "500", "--table-cache", str(cache))[0] == 0
    code, _, err = run(capsys, "count", "--n", "600", "--table-cache", str(cache))
    assert code == 3
    assert "n=500" in err


def test_count_corrupt_cache_is_io_error(capsys, tmp_path):
    cache = tmp_path / "q.bin"
    assert run(capsys, "count", "--n", "500", "--table-cache", str(cache))[0] == 0
    blob = bytearray(cache.read_bytes())
    blob[30] ^= 0x01
    cache.write_bytes(bytes(blob))
    code, _, err = run(capsys, "count", "--n", "500", "--table-cache", str(cache))
    assert code == 3


def test_count_unwritable_out_is_io_error(capsys, tmp_path):
    missing_dir = tmp_path / "no-such-dir" / "x.csv"
    code, _, err = run(capsys, "count", "--n", "5", "--out", str(missing_dir))
    assert code == 3
    assert not missing_dir.exists()


def test_count_figures(capsys, tmp_path):
    figs = tmp_path / "figs"
    code, _, _ = run(capsys, "count", "--n", "200", "--figures", str(figs))
    assert code == 0
    assert (figs / "partition_scatter_n200.png").stat().st_size > 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def test_verify_passes_and_reports(capsys):
    code, out, _ = run(capsys, "verify", "--n", "1000", "--lambda-grid", "0.1,1,10")
    assert code == 0
    rows = list(csv.reader(out.splitlines()))
    assert rows[0] == ["n", "identity", "lambda", "lhs", "rhs",
                       "abs_residual", "rel_residual"]
    assert len(rows) == 7  # two identities, three arguments each
    assert all(float(r[6]) < 1e-10 for r in rows[1:])


def test_verify_rows_match_to_twelve_digits(capsys):
    code, out, _ = run(capsys, "verify", "--n", "5", "--lambda-grid", "1",
                       "--format", "json")
    assert code == 0
    for row in json.loads(out):
        assert row["lhs"] == pytest.approx(row["rhs"], rel=1e-12)


def test_verify_rejects_tiny_n(capsys):
    code, _, err = run(capsys, "verify", "--n", "2")
    assert code == 2
    assert "--n" in err


def test_verify_rejects_bad_grid(capsys):
    assert run(capsys, "verify", "--n", "100", "--lambda-grid", "1,oops")[0] == 2
    assert run(capsys, "verify", "--n", "100", "--lambda-grid", "-1,1")[0] == 2
    assert run(capsys, "verify", "--n", "100", "--lambda-grid", "2,1")[0] == 2


def test_verify_figures(capsys, tmp_path):
    figs = tmp_path / "figs"
    code, _, _ = run(capsys, "verify", "--n", "100", "--figures", str(figs))
    assert code == 0
    assert (figs / "identity_residuals_n100.png").stat().st_size > 0


# ---------------------------------------------------------------------------
# converge
# ---------------------------------------------------------------------------

def test_converge_report_and_artifacts(capsys, tmp_path):
    out_file = tmp_path / "conv.csv"
    plot_dir = tmp_path / "plot"
    figs_dir = tmp_path / "figs"
    code, _, _ = run(
        capsys, "converge", "--n-list", "200,400",
        "--out", str(out_file), "--plot-data", str(plot_dir),
        "--figures", str(figs_dir),
    )
    assert code == 0
    rows = list(csv.reader(out_file.read_text().splitlines()))
    assert rows[0][:3] == ["n", "ks_zn_vs_uniform", "ks_gn_vs_maxunif"]
    assert [r[0] for r in rows[1:]] == ["200", "400"]
    for n in (200, 400):
        for stem in (f"cdf_Zn_n{n}", f"cdf_Gn_over_n_n{n}"):
            data = (plot_dir / f"{stem}.csv").read_text().splitlines()
            assert data[0] == "x,f_n,limit"
            assert len(data) > 2
            assert (figs_dir / f"{stem}.png").stat().st_size > 0
    assert (figs_dir / "convergence_trends.png").exists()
    assert (figs_dir / "ratio_trends.png").exists()


def test_converge_json(capsys):
    code, out, _ = run(capsys, "converge", "--n-list", "100,200",
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert [d["n"] for d in doc] == [100, 200]
    assert {"ks_zn_vs_uniform", "total_ratio", "e_zn"} <= set(doc[0])


def test_converge_needs_two_entries(capsys, tmp_path):
    out_file = tmp_path / "conv.csv"
    code, _, err = run(capsys, "converge", "--n-list", "100",
                       "--out", str(out_file))
    assert code == 2
    assert not out_file.exists()


def test_converge_rejects_unordered_list(capsys):
    assert run(capsys, "converge", "--n-list", "400,200")[0] == 2
    assert run(capsys, "converge", "--n-list", "200,abc")[0] == 2


# ---------------------------------------------------------------------------
# sample
# ---------------------------------------------------------------------------

def test_sample_deterministic(capsys):
    args = ("sample", "--n", "5", "--dist", "Gn", "--count", "10", "--seed", "7")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    lines = out1.splitlines()
    assert lines[0] == "value"
    assert set(lines[1:]) <= {"6.0", "8.0", "10.0"}


def test_sample_frequency(capsys):
    code, out, _ = run(capsys, "sample", "--n", "5", "--dist", "Gn",
                       "--count", "100000", "--seed", "1", "--format", "json")
    assert code == 0
    values = json.loads(out)
    freq = sum(1 for v in values if v == 10.0) / len(values)
    assert abs(freq - 0.5) < 0.01


def test_sample_unknown_distribution(capsys):
    code, _, err = run(capsys, "sample", "--n", "5", "--dist", "Qq", "--count", "3")
    assert code == 2
    assert "Qq" in err


def test_sample_negative_count(capsys):
    assert run(capsys, "sample", "--n", "5", "--dist", "Gn", "--count", "-1")[0] == 2


# ---------------------------------------------------------------------------
# shared plumbing
# ---------------------------------------------------------------------------

def test_unknown_flag_is_usage_error(capsys):
    assert main(["count", "--n", "5", "--frobnicate"]) == 2


def test_missing_subcommand_is_usage_error(capsys):
    assert main([]) == 2


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0


def test_workers_flag_does_not_change_output(capsys):
    _, out1, _ = run(capsys, "count", "--n", "400", "--workers", "1")
    _, out4, _ = run(capsys, "count", "--n", "400", "--workers", "4")
    assert out1 == out4


def test_workers_env_default(capsys, monkeypatch):
    monkeypatch.setenv("GOLDBACH_LAB_WORKERS", "3")
    code, out, _ = run(capsys, "count", "--n", "400")
    assert code == 0
    _, reference, _ = run(capsys, "count", "--n", "400", "--workers", "1")
    assert out == reference


def test_workers_env_invalid(capsys, monkeypatch):
    monkeypatch.setenv("GOLDBACH_LAB_WORKERS", "many")
    assert run(capsys, "count", "--n", "400")[0] == 2


def test_workers_zero_rejected(capsys):
    assert run(capsys, "count", "--n", "400", "--workers", "0")[0] == 2


def test_segment_size_does_not_change_output(capsys):
    _, out_a, _ = run(capsys, "count", "--n", "400", "--segment-size", "512")
    _, out_b, _ = run(capsys, "count", "--n", "400")
    assert out_a == out_b
