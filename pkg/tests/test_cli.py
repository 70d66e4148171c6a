import subprocess
import sys

import pytest

from rdiffsys.cli import main, run_command

from conftest import DATA


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def machine(out: str) -> dict:
    _, _, tail = out.partition("[machine]\n")
    lines = [l for l in tail.splitlines() if l]
    return dict(l.split(" = ", 1) for l in lines)


def machine_keys(out: str) -> list:
    _, _, tail = out.partition("[machine]\n")
    return [l.split(" = ", 1)[0] for l in tail.splitlines() if l]


def test_check_jacobian(capsys):
    code, out = run(capsys, "check", DATA / "rlinear_diagonal.sys")
    assert code == 0
    assert machine(out)["jacobian"] == "true"
    code, out = run(capsys, "check", DATA / "rlinear_jordan.sys")
    assert code == 0 and machine(out)["jacobian"] == "true"


def test_check_failures(capsys):
    code, out = run(capsys, "check", DATA / "total_first.sys")
    assert code == 1
    assert machine(out)["frobenius"] == "false"
    code, out = run(capsys, "check", DATA / "pde_first.sys")
    assert code == 1
    assert machine(out)["jacobian"] == "false"


def test_verify_multiplier(capsys):
    code, out = run(capsys, "verify", DATA / "total_multiplier.sys")
    assert code == 0
    m = machine(out)
    assert m["ok"] == "true" and m["expr"] == "w1^(-1)"


def test_verify_failure_exit(capsys):
    code, out = run(capsys, "verify", DATA / "total_first.sys", "--candidate", "G")
    assert code == 1
    assert machine(out)["ok"] == "false"
    code, out = run(capsys, "verify", DATA / "total_first.sys", "--candidate", "F")
    assert code == 0


def test_wronskian_report(capsys):
    code, out = run(capsys, "wronskian-report", DATA / "total_partial.sys")
    assert code == 0
    m = machine(out)
    assert m["wronskian.1.w2"] == "w1^3 - w1*~w2^2"
    assert m["wronskian.2.~z1"] == "-w1*w2*~w2^2 - w1*~w2^3 - w2*~w2^3 - ~w2^4"
    for name in ("pde_partial.sys", "pde_first.sys", "pde_multiplier.sys"):
        code, out = run(capsys, "wronskian-report", DATA / name)
        assert all(v == "0" for k, v in machine(out).items() if k.startswith("wronskian."))


def test_series_command(capsys):
    code, out = run(capsys, "series", DATA / "series_exp.sys", "--order", "4")
    assert code == 0
    m = machine(out)
    assert m["coef.w1.4,0"] == "1/24"
    assert m["residual_degree"] == "4"


def test_spectral_command(capsys):
    code, out = run(capsys, "synthesize", "spectral", DATA / "rlinear_diagonal.sys")
    assert code == 0
    m = machine(out)
    assert m["count"] == "2"
    code, out = run(capsys, "synthesize", "spectral", DATA / "rlinear_jordan.sys")
    m = machine(out)
    assert code == 0 and m["count"] == "2"
    assert m["chain.1.length"] == "4"


def test_pfaffian_command(capsys):
    code, out = run(capsys, "synthesize", "pfaffian", DATA / "total_first.sys")
    assert code == 0
    assert machine(out)["polynomial.1"] == "1/2*z1*~w1 + 1/2*~w2^2"
    code, out = run(capsys, "synthesize", "pfaffian", DATA / "pde_multiplier.sys")
    assert code == 0 and machine(out)["result.1"] == "~z2^(-1)"


def test_input_errors_exit_2(capsys, tmp_path):
    code, _ = run(capsys, "check", tmp_path / "missing.sys")
    assert code == 2
    bad = tmp_path / "bad.sys"
    bad.write_text("kind = total;\nm = 1 $;\n")
    code, out = run(capsys, "check", bad)
    assert code == 2


def test_capability_error_exit_3(capsys, tmp_path):
    f = tmp_path / "irrational.sys"
    f.write_text("kind = rlinear; m = 1; n = 1; A[1][1] = (0, 1); A[1][2] = (2, 0);\n")
    code, _ = run(capsys, "synthesize", "spectral", f)
    assert code == 3


def test_hints_file(capsys, tmp_path):
    h = tmp_path / "order.hints"
    h.write_text("hint order = 2;\n")
    code, out = run(capsys, "series", DATA / "series_exp.sys", "--hints", h)
    assert machine(out)["order"] == "2"


def test_machine_section_sorted_and_deterministic(capsys):
    outs = []
    for _ in range(2):
        _, out = run(capsys, "synthesize", "spectral", DATA / "rlinear_jordan.sys")
        outs.append(out.partition("[machine]\n")[2])
        keys = machine_keys(out)
        assert keys == sorted(keys)
    assert outs[0] == outs[1]


def test_run_command_report():
    rep = run_command("check", DATA / "rlinear_diagonal.sys", None)
    assert rep.ok and rep.exit_code == 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "rdiffsys", "check", str(DATA / "rlinear_diagonal.sys")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "jacobian = true" in proc.stdout
