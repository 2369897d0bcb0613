"""Command-line surface: configs, outputs, exit codes, determinism."""

import json

from oddsphere.cli import main


def run(args):
    return main([str(a) for a in args])


def test_space_info(capsys):
    assert run(["space-info", "--dims", "3"]) == 0
    out = capsys.readouterr().out
    payload = json.loads(out)
    assert payload["p0"] == "22/3" and payload["s"] == "3"
    assert payload["schema"] == 1


def test_space_info_rejects_even_dimension(capsys):
    assert run(["space-info", "--dims", "4"]) == 2
    assert "odd" in capsys.readouterr().err


def test_kernel_command_t0_is_real(tmp_path, capsys):
    base = tmp_path / "field"
    assert run(["kernel", "--dims", "3", "--n", 16, "--t", "0", "--out", base]) == 0
    lines = (tmp_path / "field.csv").read_text().splitlines()
    assert lines[0] == "factor,theta,re,im"
    assert all(float(line.split(",")[3]) == 0.0 for line in lines[1:])
    header = json.loads((tmp_path / "field.json").read_text())
    assert header["schema"] == 1 and header["N"] == 16


def test_kernel_command_product_and_period_time(tmp_path):
    base = tmp_path / "field2"
    assert run(
        ["kernel", "--dims", "3,5", "--n", 8, "--t", "T/3", "--out", base]
    ) == 0
    lines = (tmp_path / "field2.csv").read_text().splitlines()
    factors = {line.split(",")[0] for line in lines[1:]}
    assert factors == {"0", "1"}


def test_kernel_malformed_betas(tmp_path, capsys):
    assert run(["kernel", "--dims", "3", "--betas", "1,", "--out", tmp_path / "x"]) == 2
    assert "malformed" in capsys.readouterr().err


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("dims = 3\nbetas = 1\n")
    assert run(["space-info", "--config", cfg, "--dims", "5"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["dims"] == [5]  # flag wins over file


def test_unknown_config_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("dims = 3\nbogus = 1\n")
    assert run(["space-info", "--config", cfg]) == 2
    assert "bogus" in capsys.readouterr().err


def test_config_parse_error_reports_line(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("dims = 3\nnot a line\n")
    assert run(["space-info", "--config", cfg]) == 2
    assert "line 2" in capsys.readouterr().err


def test_arcs_command_geometry(tmp_path):
    base = tmp_path / "arcs"
    assert run(["arcs", "--q", 3, "--n", 10, "--out", base]) == 0
    payload = json.loads((tmp_path / "arcs.json").read_text())
    assert payload["schema"] == 1
    halfwidths = [entry["halfwidth"] for entry in payload["arcs"]]
    assert halfwidths == ["1/10", "1/30", "1/20", "1/30"]
    assert payload["arcs"][0]["center"] == "0"


def test_arcs_command_rejects_q_at_or_above_N(capsys):
    assert run(["arcs", "--q", 10, "--n", 10]) == 2
    assert "below N" in capsys.readouterr().err


def test_scan_decay_exit_codes_and_determinism(tmp_path):
    base = tmp_path / "scan"
    args = [
        "scan", "--dims", "3", "--mode", "decay", "--p", 4,
        "--nlist", "8,16,32", "--arcs", "0/1,1/2", "--out", base,
    ]
    assert run(args) == 0
    first = (tmp_path / "scan.csv").read_bytes()
    payload = json.loads((tmp_path / "scan.json").read_text())
    assert payload["verdict"] == "pass" and payload["mode"] == "decay"
    assert run(args) == 0
    assert (tmp_path / "scan.csv").read_bytes() == first


def test_scan_modes_validate(tmp_path, capsys):
    assert run(["scan", "--dims", "3", "--mode", "bogus"]) == 2
    assert "mode" in capsys.readouterr().err
    # nu beyond lam-1 on the 5-sphere
    assert run(
        ["scan", "--dims", "5", "--mode", "kappa", "--nu", 2,
         "--nlist", "8,16,32", "--arcs", "0/1", "--out", tmp_path / "k"]
    ) == 2
    assert "nu" in capsys.readouterr().err
    assert run(["scan", "--dims", "3", "--mode", "decay"]) == 2  # missing p


def test_scan_threshold_passes_at_the_floor(tmp_path):
    base = tmp_path / "floor"
    code = run(
        ["scan", "--dims", "3", "--mode", "threshold", "--p", 3,
         "--nlist", "16,32,64,128", "--arcs", "0/1,1/2,1/3", "--out", base]
    )
    payload = json.loads((tmp_path / "floor.json").read_text())
    assert code == 0 and payload["verdict"] == "pass"


def test_scan_threshold_failing_exit_code(tmp_path):
    # p far below the away-region floor: verdict fail -> exit 1
    base = tmp_path / "thresh"
    code = run(
        ["scan", "--dims", "3", "--mode", "threshold", "--p", 1.2,
         "--nlist", "16,32,64,128", "--arcs", "0/1,1/2", "--out", base]
    )
    payload = json.loads((tmp_path / "thresh.json").read_text())
    assert code == (0 if payload["verdict"] == "pass" else 1)
    assert payload["verdict"] == "fail"
    assert code == 1


def test_scan_strichartz_small(tmp_path):
    base = tmp_path / "str"
    code = run(
        ["scan", "--dims", "3", "--mode", "strichartz", "--p", 8,
         "--nlist", "8,16,32", "--trials", 2, "--seed", 7,
         "--time-samples", 16, "--out", base]
    )
    payload = json.loads((tmp_path / "str.json").read_text())
    assert payload["mode"] == "strichartz"
    assert code == (0 if payload["verdict"] == "pass" else 1)


def test_kernel_defaults_to_cwd_named_file(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run(["kernel", "--dims", "3", "--n", 8]) == 0
    assert (tmp_path / "kernel_field.csv").exists()
