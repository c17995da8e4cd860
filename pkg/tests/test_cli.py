import math

import numpy as np
import pytest

from cyclewalk import cli, optics


def run_cli(args):
    return cli.main(args)


def test_walk_csv_revival_rows(tmp_path, capsys):
    out = tmp_path / "walk.csv"
    assert run_cli(["walk", "--k", "5", "--steps", "120", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    header = [line for line in lines if line.startswith("#")]
    assert any("k=5" in line for line in header)
    rows = [line.split(",") for line in lines if not line.startswith("#")][1:]
    assert rows[0] == ["0", "1"]
    by_t = {int(r[0]): float(r[1]) for r in rows}
    assert by_t[60] == pytest.approx(1.0, abs=1e-9)
    assert by_t[120] == pytest.approx(1.0, abs=1e-9)
    assert len(rows) == 121


def test_walk_zero_steps(tmp_path):
    out = tmp_path / "walk0.csv"
    assert run_cli(["walk", "--k", "5", "--steps", "0", "--out", str(out)]) == 0
    rows = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert rows == ["t,p_initial", "0,1"]


def test_walk_output_reproducible(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run_cli(["walk", "--k", "3", "--steps", "16", "--out", str(a)])
    run_cli(["walk", "--k", "3", "--steps", "16", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_table1_values(tmp_path):
    out = tmp_path / "table.csv"
    assert run_cli(["table1", "--out", str(out)]) == 0
    rows = [l.split(",") for l in out.read_text().splitlines() if not l.startswith("#")][1:]
    table = {int(r[0]): r for r in rows}
    assert int(table[5][2]) == 60
    assert float(table[5][3]) == pytest.approx(0.186441, abs=1e-5)
    assert float(table[5][4]) == pytest.approx(0.358934, abs=1e-5)
    assert float(table[4][3]) == pytest.approx(0.210526, abs=1e-5)
    assert float(table[4][4]) == pytest.approx(1.175981, abs=1e-5)
    # byte-stable across runs
    out2 = tmp_path / "table2.csv"
    run_cli(["table1", "--out", str(out2)])
    assert out.read_bytes() == out2.read_bytes()


def test_noise_sweep_columns(tmp_path):
    out = tmp_path / "sweep.csv"
    assert run_cli(["noise-sweep", "--k", "5", "--noise", "amplitude_damping",
                    "--gamma", "0,0.0007", "--steps", "60", "--out", str(out)]) == 0
    rows = [l.split(",") for l in out.read_text().splitlines() if not l.startswith("#")][1:]
    by_key = {(float(r[1]), int(r[0])): (float(r[2]), float(r[3])) for r in rows}
    assert by_key[(0.0, 60)][0] == pytest.approx(1.0, abs=1e-9)
    assert abs(by_key[(0.0007, 60)][0] - 0.97) <= 0.01
    # gamma=0 column equals the pure walk
    walk_out = tmp_path / "walk.csv"
    run_cli(["walk", "--k", "5", "--steps", "60", "--out", str(walk_out)])
    walk_rows = [l.split(",") for l in walk_out.read_text().splitlines() if not l.startswith("#")][1:]
    for t_str, p_str in walk_rows:
        assert by_key[(0.0, int(t_str))][0] == pytest.approx(float(p_str), abs=1e-9)


def test_noise_sweep_depolarizing_information_dies(tmp_path):
    out = tmp_path / "dep.csv"
    assert run_cli(["noise-sweep", "--k", "5", "--noise", "depolarizing",
                    "--gamma", "0.5", "--steps", "60", "--out", str(out)]) == 0
    rows = [l.split(",") for l in out.read_text().splitlines() if not l.startswith("#")][1:]
    final = [r for r in rows if r[0] == "60"][0]
    assert float(final[3]) < 0.05


def test_joint_matrix_normalization(tmp_path):
    out = tmp_path / "joint.csv"
    assert run_cli(["joint", "--k", "5", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    rows = [l.split(",") for l in lines if not l.startswith("#")]
    data = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
    assert data.shape == (5, 59)
    assert data.sum() == pytest.approx(1.0, abs=1e-10)
    assert np.allclose(data.sum(axis=0), 1 / 59, atol=1e-10)
    meta = {l.split("=")[0][2:]: l.split("=", 1)[1] for l in lines if l.startswith("#")}
    assert float(meta["p_ell_min"]) == pytest.approx(0.186441, abs=1e-5)


def test_protocol_roundtrip_and_determinism(tmp_path, capsys):
    out = tmp_path / "transcript.txt"
    code = run_cli(["protocol", "--k", "5", "--n", "40", "--seed", "11",
                    "--message", "ok", "--out", str(out)])
    assert code == 0
    assert "exact=True" in capsys.readouterr().out
    text1 = out.read_text()
    run_cli(["protocol", "--k", "5", "--n", "40", "--seed", "11",
             "--message", "ok", "--out", str(out)])
    assert out.read_text() == text1
    assert any(line.startswith("security-verdict") for line in text1.splitlines())


def test_protocol_message_capacity_error(capsys):
    assert run_cli(["protocol", "--k", "5", "--n", "8",
                    "--message", "much too long"]) == 1


def test_protocol_with_eve_detects(tmp_path, capsys):
    code = run_cli(["protocol", "--k", "3", "--n", "8", "--seed", "1",
                    "--eve", "intercept_resend_all", "--message", "",
                    "--out", str(tmp_path / "t.txt")])
    assert code == 0


def test_attack_report_file(tmp_path, capsys):
    out = tmp_path / "attack.txt"
    code = run_cli(["attack", "--k", "3", "--n", "400", "--x", "60",
                    "--trials", "5000", "--seed", "2", "--out", str(out)])
    assert code == 0
    text = out.read_text()
    assert "# decrypt-log10-probability=" in text
    assert "dummy-hits\t20\t" in text
    assert "detection rate:" in capsys.readouterr().out


def test_attack_x_zero(tmp_path):
    out = tmp_path / "attack0.txt"
    assert run_cli(["attack", "--k", "3", "--n", "40", "--x", "0",
                    "--trials", "1000", "--seed", "2", "--out", str(out)]) == 0
    assert "detection-rate\t0\t" in out.read_text()


def test_verify_optics_canonical_pass(tmp_path, capsys):
    layout = tmp_path / "five.layout"
    layout.write_text(optics.canonical_layout_text(5))
    assert run_cli(["verify-optics", "--k", "5", "--layout", str(layout)]) == 0
    assert "PASS" in capsys.readouterr().out


def test_verify_optics_empty_identity(tmp_path, capsys):
    layout = tmp_path / "empty.layout"
    layout.write_text("# nothing\n")
    assert run_cli(["verify-optics", "--k", "5", "--layout", str(layout),
                    "--target", "identity"]) == 0
    assert run_cli(["verify-optics", "--k", "5", "--layout", str(layout)]) == 2


def test_verify_optics_corrupted_fails(tmp_path, capsys):
    text = optics.canonical_layout_text(5).replace("sorter_bank", "sorter_bank")
    layout = tmp_path / "bad.layout"
    layout.write_text(text.replace("spp m=-1 beam=odd", "spp m=1 beam=odd"))
    assert run_cli(["verify-optics", "--k", "5", "--layout", str(layout)]) == 2
    assert "FAIL" in capsys.readouterr().out


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as info:
        cli.build_parser().parse_args(["bogus-subcommand"])
    assert info.value.code == 1


def test_config_file_defaults(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("k=3\nsteps=8\n")
    out = tmp_path / "walk.csv"
    assert run_cli(["--config", str(cfg), "walk", "--out", str(out)]) == 0
    rows = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert len(rows) == 10  # header + t=0..8
    # flag overrides config
    assert run_cli(["--config", str(cfg), "walk", "--steps", "2", "--out", str(out)]) == 0
    rows = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert len(rows) == 4
