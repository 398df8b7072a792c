import json

import pytest

from blochtorus import validate_report
from blochtorus.cli import cli_main

SOLVE_GOLDEN = """\
lambda1 = 3.1415926535897931
lambda2 = 0
n = 1
a = 0
b = 0
c = 1 + 0i
kappa = 1
k1 = 0 + 0i
h1 = 1 + 0i
k2 = 0.5 + 0i
h2 = -0.5 + 0i
A1 = 1 + 0i
B1 = -1 + 0i
A2 = 1 + 0i
B2 = 1 + 0i
p_squared = 0 + 0i
potential_mismatch = 0.25 + 0i
flags = none
"""


def test_no_subcommand_is_usage_error(capsys):
    assert cli_main([]) == 1
    capsys.readouterr()


def test_unknown_flag_is_usage_error(capsys):
    assert cli_main(["solve", "--bogus"]) == 1
    capsys.readouterr()


def test_help_and_version(capsys):
    assert cli_main(["--help"]) == 0
    assert cli_main(["--version"]) == 0
    out = capsys.readouterr().out
    assert "blochtorus" in out


def test_solve_golden_text(capsys):
    assert cli_main(["solve"]) == 0
    assert capsys.readouterr().out == SOLVE_GOLDEN


def test_solve_rejects_bad_lattice(capsys):
    assert cli_main(["solve", "--lambda1", "0"]) == 1
    assert "lambda1" in capsys.readouterr().err


def test_solve_json_format(capsys):
    assert cli_main(["solve", "--format", "json", "--a", "0.3"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["wave_vectors"]["k1"]["re"] == 0.3


def test_audit_stdout_is_valid_json(capsys):
    rc = cli_main(
        ["audit", "--lambda1", "3.14159", "--n", "2", "--a", "0.3", "--b", "0.1"]
    )
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    validate_report(data)
    assert data["header"]["parameters"]["n"] == 2


def test_audit_file_output_is_deterministic(tmp_path):
    first = tmp_path / "a1.json"
    second = tmp_path / "a2.json"
    assert cli_main(["audit", "--out", str(first)]) == 0
    assert cli_main(["audit", "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    validate_report(json.loads(first.read_text()))


def test_audit_exits_zero_with_failing_checks(tmp_path, capsys):
    # failing verdicts are the report's content, not a tool error
    assert cli_main(["audit"]) == 0
    data = json.loads(capsys.readouterr().out)
    verdicts = {c["check_id"]: c["verdict"] for c in data["checks"]}
    assert verdicts["potential_mismatch"] == "fail"


def test_audit_check_tol_flag(capsys):
    rc = cli_main(["audit", "--check-tol", "potential_mismatch=1.0"])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    entry = next(
        c for c in data["checks"] if c["check_id"] == "potential_mismatch"
    )
    assert entry["verdict"] == "pass"
    assert cli_main(["audit", "--check-tol", "nonsense=1.0"]) == 1
    capsys.readouterr()


def test_mesh_obj_counts_and_determinism(tmp_path):
    out1 = tmp_path / "m1.obj"
    out2 = tmp_path / "m2.obj"
    argv = ["mesh", "--grid", "16x16", "--project", "123"]
    assert cli_main(argv + ["--out", str(out1)]) == 0
    assert cli_main(argv + ["--out", str(out2)]) == 0
    blob = out1.read_bytes()
    assert blob == out2.read_bytes()
    lines = blob.decode().splitlines()
    assert sum(1 for l in lines if l.startswith("v ")) == 256
    assert sum(1 for l in lines if l.startswith("f ")) == 256


def test_mesh_rejects_foreign_format(capsys):
    assert cli_main(["mesh", "--format", "json"]) == 1
    assert "format" in capsys.readouterr().err


def test_mesh_overflow_exit_code(capsys):
    assert cli_main(["mesh", "--a", "1000000"]) == 2
    assert "numeric error" in capsys.readouterr().err


def test_sample_row_count(capsys):
    assert cli_main(["sample"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 65
    assert lines[0].startswith("i,j,")


def test_sample_offset_free_flag(capsys):
    assert cli_main(["sample", "--grid", "2x2", "--offset-free"]) == 0
    first = capsys.readouterr().out.splitlines()[1]
    assert first == "0,0,0,0,2,0,0,2,2,2,4,ok"


def test_sample_svg_requires_out(capsys):
    assert cli_main(["sample", "--format", "svg"]) == 1
    capsys.readouterr()


def test_scan_one_dimensional_minus_branch(capsys):
    rc = cli_main(["scan", "--a-range", "-1:1:3", "--reality-branch", "minus"])
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "a,b,re_p_squared,im_p_squared,abs_im"
    assert len(lines) == 4
    assert all(line.split(",")[4] == "0" for line in lines[1:])


def test_scan_two_dimensional_grid(capsys):
    rc = cli_main(
        [
            "scan",
            "--lambda2",
            "1",
            "--a-range",
            "-1:1:5",
            "--b-range",
            "-1:1:7",
        ]
    )
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 1 + 5 * 7


def test_scan_svg_needs_grid_and_out(tmp_path, capsys):
    assert cli_main(["scan", "--format", "svg"]) == 1
    capsys.readouterr()
    out = tmp_path / "scan.svg"
    rc = cli_main(
        [
            "scan",
            "--lambda2",
            "1",
            "--a-range",
            "-1:1:9",
            "--b-range",
            "-1:1:9",
            "--format",
            "svg",
            "--out",
            str(out),
        ]
    )
    assert rc == 0
    assert out.stat().st_size > 0


def test_dehn_nontrivial_twist(capsys):
    rc = cli_main(["dehn", "--lambda2", "1", "--twist", "2x1"])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert data["twist"] == {"p": 2, "q": 1}
    assert data["transformed_parameters"]["lambda1"] == pytest.approx(
        2.0 * 3.141592653589793
    )
    assert data["invariance"]["max_printed"] == pytest.approx(
        0.2626651479552922, rel=1e-12
    )
    assert data["invariance"]["trivial_case_holds"] is True


def test_dehn_trivial_twist(capsys):
    rc = cli_main(["dehn", "--twist", "1x1"])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert data["invariance"]["max_printed"] == 0.0
    assert data["invariance"]["max_direct"] == 0.0


def test_dehn_requires_twist(capsys):
    assert cli_main(["dehn"]) == 1
    capsys.readouterr()


def test_bad_twist_and_grid_strings(capsys):
    assert cli_main(["dehn", "--twist", "2x"]) == 1
    assert cli_main(["mesh", "--grid", "0x4"]) == 1
    assert cli_main(["scan", "--a-range", "nope"]) == 1
    capsys.readouterr()


def test_config_file_cli_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\n\na = 0.25\nstrict_print = true\n")
    assert cli_main(["solve", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert "a = 0.25" in out
    assert "strict_print_exponent" in out
    # explicit flags beat config values
    assert (
        cli_main(["solve", "--config", str(cfg), "--a", "0.4", "--no-strict-print"])
        == 0
    )
    out = capsys.readouterr().out
    assert "a = 0.4" in out
    assert "flags = none" in out


def test_config_files_do_not_nest(tmp_path, capsys):
    inner = tmp_path / "inner.cfg"
    inner.write_text("a = 1.0\n")
    outer = tmp_path / "outer.cfg"
    outer.write_text(f"config = {inner}\n")
    assert cli_main(["solve", "--config", str(outer)]) == 1
    capsys.readouterr()


def test_unreadable_output_path(capsys):
    assert cli_main(["solve", "--out", "/nonexistent-dir/x.txt"]) == 2
    capsys.readouterr()
