import json
import math

import numpy as np
import pytest

from sdof_lab.cli import main


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def scalar_channel(tmp_path):
    return write_json(tmp_path / "ch.json",
                      {"K": 1, "P": 10.0, "H": [[[1.0]]], "He": [[[0.5]]]})


@pytest.fixture
def gains_file(tmp_path):
    return write_json(tmp_path / "gains.json", [[math.sqrt(2), 1.0], [1.0, 1.0]])


def test_capacity_subcommand(scalar_channel, tmp_path, capsys):
    out = tmp_path / "cap.json"
    assert main(["--out", str(out), "capacity", "--channel", scalar_channel]) == 0
    doc = json.loads(out.read_text())
    assert doc["degraded"] and doc["converged"]
    assert doc["value_bits"] == pytest.approx(0.5 * math.log2(11 / 3.5), abs=1e-6)
    assert doc["Q_star"][0][0][0] == pytest.approx(10.0, abs=1e-3)


def test_capacity_to_stdout(scalar_channel, capsys):
    assert main(["capacity", "--channel", scalar_channel]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert "value_bits" in doc


def test_align_subcommand(tmp_path, capsys):
    rng = np.random.default_rng(0)
    ch = {"K": 2, "P": 1.0,
          "H": [rng.standard_normal((2, 2)).tolist() for _ in range(2)],
          "He": [rng.standard_normal((2, 2)).tolist() for _ in range(2)]}
    path = write_json(tmp_path / "ch.json", ch)
    assert main(["align", "--channel", path]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["r"] == 1 and doc["eta"] == 1 and doc["sdof_upper_bound"] == 2
    assert len(doc["F"]) == 2


def test_ria_sim_csv(gains_file, tmp_path):
    out = tmp_path / "ria.csv"
    rc = main(["--seed", "3", "--out", str(out), "ria-sim",
               "--gains-file", gains_file, "--ptilde-grid", "1e3:1e5:3",
               "--trials", "2000"])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "ptilde,Q,A,d_min,pe_hat,pe_ci_lo,pe_ci_hi,rate_lb_bits"
    assert len(lines) == 4


def test_ria_sim_json_format(gains_file, capsys):
    rc = main(["--format", "json", "ria-sim", "--gains-file", gains_file,
               "--ptilde-grid", "1e3:1e4:2", "--trials", "500"])
    assert rc == 0
    rows = json.loads(capsys.readouterr().out)
    assert len(rows) == 2 and "pe_hat" in rows[0]


def test_ria_sim_k_mismatch(gains_file, capsys):
    rc = main(["ria-sim", "--K", "3", "--gains-file", gains_file,
               "--ptilde-grid", "1e3:1e4:2", "--trials", "100"])
    assert rc == 2


def test_ria_sim_determinism_across_jobs(gains_file, tmp_path):
    outs = []
    for jobs, name in ((1, "a.csv"), (4, "b.csv")):
        out = tmp_path / name
        main(["--seed", "17", "--out", str(out), "ria-sim",
              "--gains-file", gains_file, "--ptilde-grid", "1e3:1e6:4",
              "--trials", "8192", "--jobs", str(jobs)])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_multilayer_sim(tmp_path):
    out = tmp_path / "ml.csv"
    rc = main(["--seed", "5", "--out", str(out), "multilayer-sim",
               "--n", "2", "--m", "3", "--ptilde-grid", "1e3:1e6:3",
               "--trials", "2000"])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("ptilde,a,W,L,A,dmin")
    assert len(lines) == 4


def test_region_subcommand(tmp_path, capsys):
    ch = np.zeros((2, 2, 2, 1))
    for x1 in range(2):
        for x2 in range(2):
            ch[x1, x2, x1 ^ x2, 0] = 1.0
    model = {"pu": [[0.5, 0.5], [0.5, 0.5]],
             "px_given_u": [np.eye(2).tolist(), np.eye(2).tolist()],
             "channel": ch.tolist()}
    path = write_json(tmp_path / "model.json", model)
    assert main(["region", "--model", path]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["sum_bound"] == pytest.approx(1.0, abs=1e-12)
    assert doc["subset_rates"]["0,1"] == pytest.approx(1.0, abs=1e-12)


def test_equivocation_subcommand(tmp_path, capsys):
    cb = {"n": 1, "users": [{"sequences": [[0], [1], [2], [3]],
                             "bin_of": [0, 0, 1, 1], "num_bins": 2}]}
    # eavesdropper sees only the parity of the transmitted symbol
    eve = {"inputs": [[0], [1], [2], [3]],
           "pmf": [[1.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.0, 1.0]]}
    rc = main(["equivocation",
               "--codebook", write_json(tmp_path / "cb.json", cb),
               "--eve-channel", write_json(tmp_path / "eve.json", eve)])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["delta"] == pytest.approx(1.0, abs=1e-12)
    assert doc["h_w_given_z_bits"] == pytest.approx(1.0, abs=1e-12)


def test_sweep_subcommand(tmp_path):
    cfg = {"scheme": "multilayer", "params": {"n": 2, "m": 3},
           "grid": [1e3, 1e5, 3], "trials": 1000, "seed": 2}
    out = tmp_path / "sweep.csv"
    rc = main(["--out", str(out), "sweep",
               "--config", write_json(tmp_path / "cfg.json", cfg)])
    assert rc == 0
    assert out.exists() and (tmp_path / "sweep.csv.gp").exists()


def test_missing_file_exits_2(capsys):
    assert main(["capacity", "--channel", "/nonexistent.json"]) == 2
    assert "error" in capsys.readouterr().err


def test_malformed_channel_exits_2(tmp_path, capsys):
    path = write_json(tmp_path / "bad.json", {"K": 1, "P": 1.0})
    assert main(["capacity", "--channel", path]) == 2


def test_bad_grid_exits_2(gains_file, capsys):
    rc = main(["ria-sim", "--gains-file", gains_file,
               "--ptilde-grid", "0.1:10:3", "--trials", "100"])
    assert rc == 2
