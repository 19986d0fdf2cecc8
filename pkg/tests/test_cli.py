import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from conftest import bsc_eavesdropper
from macwt.channel_io import save_channel
from macwt.cli import main
from macwt.probability import InputDistribution, sample_channel, sample_input


@pytest.fixture
def one_user_channel(tmp_path):
    path = tmp_path / "bsc.json"
    save_channel(bsc_eavesdropper(0.3), path, InputDistribution.uniform([2]))
    return path


@pytest.fixture
def two_user_channel(tmp_path, rng):
    path = tmp_path / "two.json"
    save_channel(sample_channel(rng, (2, 2), 3, 3), path, sample_input(rng, (2, 2)))
    return path


def test_region_single_mask(tmp_path, one_user_channel):
    out = tmp_path / "out"
    code = main(
        ["region", "--channel", str(one_user_channel), "--kprime", "1", "--out", str(out)]
    )
    assert code == 0
    doc = json.loads((out / "region_k1.json").read_text())
    assert doc["kind"] == "theorem3"
    assert doc["secrecy_set"] == [1]
    assert (out / "region_k1.txt").read_text().count("<=") >= 2
    cond = json.loads((out / "cond1_k1.json").read_text())
    assert cond["holds"] is True
    assert json.loads((out / "mi_cache_k1.json").read_text())
    manifest = json.loads((out / "run.json").read_text())
    assert manifest["subcommand"] == "region"
    assert "region_k1.json" in manifest["outputs"]


def test_region_all_masks(tmp_path, two_user_channel):
    out = tmp_path / "regions"
    code = main(["region", "--channel", str(two_user_channel), "--out", str(out)])
    assert code == 0
    for mask in range(4):
        assert (out / f"region_k{mask}.json").exists()


def test_region_bad_pmf_exits_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(
        json.dumps(
            {
                "K": 1,
                "input_sizes": [2],
                "y_size": 2,
                "z_size": 2,
                "pmf": [
                    [[0.5, 0.5], [0.0, 0.0]],
                    [[0.3, 0.3], [0.3, 0.3]],
                ],
            }
        )
    )
    code = main(["region", "--channel", str(path), "--out", str(tmp_path / "o")])
    assert code == 2
    assert "input (1,)" in capsys.readouterr().err


def test_verify_lemma1_k1(tmp_path, capsys):
    out = tmp_path / "v"
    code = main(
        ["verify-lemma1", "--k", "1", "--trials", "2", "--seed", "7", "--out", str(out)]
    )
    assert code == 0
    assert "PASS" in capsys.readouterr().out
    report = json.loads((out / "lemma1_report.json").read_text())
    assert report["all_pass"] is True
    assert len(report["trials"]) == 2


def test_verify_lemma1_k2_prints_row_counts(tmp_path, capsys):
    code = main(["verify-lemma1", "--k", "2", "--trials", "2", "--seed", "3"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.count("equal=True") == 2
    assert "inner=" in out and "outer=" in out


def test_verify_lemma1_rejects_k4():
    with pytest.raises(SystemExit) as err:
        main(["verify-lemma1", "--k", "4"])
    assert err.value.code == 2


def test_adder_outputs(tmp_path):
    out = tmp_path / "adder"
    code = main(
        [
            "adder",
            "--q1", "0.5",
            "--q2", "0.75",
            "--delta", "0.05",
            "--out", str(out),
        ]
    )
    assert code == 0
    with open(out / "sweep.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["alpha", "beta", "a1", "b", "c1", "a2", "c2"]
    assert len(rows) == 1 + 21 * 21
    sep = json.loads((out / "separation.json").read_text())
    assert set(sep) == {"v0", "w", "t"}
    assert (out / "hull_old.csv").exists()
    assert (out / "hull_new1.csv").exists()
    assert (out / "hulls.png").exists()
    for name in ("a1", "b", "c1", "a2", "c2"):
        assert (out / f"surface_{name}.png").exists()


def test_adder_coarse_grid_well_formed(tmp_path, capsys):
    # a 3x3 grid misses the narrow high-secrecy ridge, so the new hull does
    # not poke out of the old one: reproduction fails (exit 1) but the sweep
    # and hull files must still be complete and well-formed
    out = tmp_path / "coarse"
    code = main(["adder", "--delta", "0.5", "--out", str(out), "--no-figures"])
    assert code == 1
    assert "not strictly nested" in capsys.readouterr().err
    with open(out / "sweep.csv") as fh:
        assert len(list(csv.reader(fh))) == 10
    assert (out / "hull_old.csv").exists()
    assert (out / "hull_new1.csv").exists()
    assert json.loads((out / "run.json").read_text())["subcommand"] == "adder"


def test_adder_rejects_bad_delta(tmp_path, capsys):
    code = main(["adder", "--delta", "0.7", "--out", str(tmp_path / "x")])
    assert code == 2
    assert "delta" in capsys.readouterr().err


def test_resolve_outputs(tmp_path, one_user_channel):
    out = tmp_path / "resolve"
    code = main(
        [
            "resolve",
            "--channel", str(one_user_channel),
            "--kprime", "1",
            "--q", "0.5",
            "--blocklengths", "2,4",
            "--trials", "10",
            "--seed", "3",
            "--out", str(out),
        ]
    )
    assert code == 0
    with open(out / "tv_decay.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["n", "mean_tv", "trials", "condition_holds"]
    assert [r[0] for r in rows[1:]] == ["2", "4"]
    assert all(r[3] == "True" for r in rows[1:])
    with open(out / "leakage.csv") as fh:
        leak_rows = list(csv.reader(fh))
    assert leak_rows[0][:2] == ["n", "leakage_bits"]
    assert any(c.startswith("realized_") for c in leak_rows[0])
    assert (out / "tv_decay.png").exists()
    manifest = json.loads((out / "run.json").read_text())
    assert manifest["parameters"]["seed"] == 3


def test_resolve_low_rate_condition_false(tmp_path, one_user_channel):
    out = tmp_path / "low"
    code = main(
        [
            "resolve",
            "--channel", str(one_user_channel),
            "--q", "0.05",
            "--blocklengths", "2",
            "--trials", "5",
            "--out", str(out),
            "--no-figures",
        ]
    )
    assert code == 0
    with open(out / "tv_decay.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[1][3] == "False"


def test_resolve_rejects_nonzero_rate_outside_set(tmp_path, two_user_channel, capsys):
    code = main(
        [
            "resolve",
            "--channel", str(two_user_channel),
            "--kprime", "1",
            "--q", "0.5,0.5",
            "--out", str(tmp_path / "x"),
        ]
    )
    assert code == 2
    assert "outside the secrecy set" in capsys.readouterr().err


def test_determinism_same_seed(tmp_path, one_user_channel):
    outs = []
    for name in ("r1", "r2"):
        out = tmp_path / name
        main(
            [
                "resolve",
                "--channel", str(one_user_channel),
                "--q", "0.5",
                "--blocklengths", "2,4",
                "--trials", "15",
                "--seed", "9",
                "--out", str(out),
                "--no-figures",
            ]
        )
        outs.append((out / "tv_decay.csv").read_text())
    assert outs[0] == outs[1]


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "macwt.cli", "--help"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "region" in proc.stdout
