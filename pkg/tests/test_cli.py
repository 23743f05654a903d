import subprocess
import sys

import pytest

from aisemiring.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_catalog_show(capsys):
    code, out, _ = run(capsys, "catalog", "show", "S_(4,435)")
    assert code == 0
    assert "mul:\n1 2 1 1\n2 2 2 2\n1 2 1 3\n1 2 3 4\n" in out
    assert "# provenance table1" in out


def test_catalog_list(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    lines = out.splitlines()
    assert code == 0
    assert sum("provenance='table1'" in l for l in lines) == 93
    assert any("name=S_57 " in l for l in lines)


def test_catalog_unknown(capsys):
    code, _, err = run(capsys, "catalog", "show", "bogus")
    assert code == 2 and "unknown-name" in err


def test_check(capsys):
    assert run(capsys, "check", "S_(4,471)", "x1 ≈ x1 + x2*x3*x4")[:2] == (0, "holds\n")
    assert run(capsys, "check", "S_(4,471)", "x ≈ x")[0] == 0
    code, out, _ = run(capsys, "check", "S_(4,471)", "x ≈ x+y*z")
    assert code == 1 and out.startswith("fails x=")


def test_check_errors(capsys):
    assert run(capsys, "check", "S_(4,471)", "x ≈ x +")[0] == 3
    assert run(capsys, "check", "S_(4,471)", "x1 ≈ x1 + x2x3x4x5", "--budget", "10")[0] == 4
    assert run(capsys, "check", "nope", "x ≈ x")[0] == 2


def test_check_file(tmp_path, capsys):
    f = tmp_path / "a.alg"
    f.write_text("order 1\nadd:\n1\nmul:\n1\n")
    assert run(capsys, "check", str(f), "x ≈ x + y")[0] == 0
    f.write_text("order 2\nadd:\n1\n")
    assert run(capsys, "check", str(f), "x ≈ x")[0] == 3


def test_validate(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", "S_(4,388)", "S_57")
    assert code == 0 and out.count("status=valid") == 2
    bad = tmp_path / "bad.alg"
    bad.write_text("order 2\nadd:\n1 1\n1 2\nmul:\n1 2\n1 1\n")
    code, out, _ = run(capsys, "validate", str(bad))
    assert code == 1 and "status=invalid" in out


def test_enumerate(capsys, tmp_path):
    assert run(capsys, "enumerate", "--order", "2")[:2] == (0, "count 6\n")
    assert run(capsys, "enumerate", "--order", "4")[0] == 4
    code, out, _ = run(capsys, "enumerate", "--order", "3", "--emit", str(tmp_path / "o3"))
    assert code == 0 and len(list((tmp_path / "o3").glob("*.alg"))) == 61


def test_enumerate_reduct(capsys, tmp_path):
    f = tmp_path / "d.alg"
    f.write_text("order 4\nadd:\n1 1 1 1\n1 2 3 4\n1 3 3 1\n1 4 1 4\nmul:\n" + "1 1 1 1\n" * 4)
    assert run(capsys, "enumerate", "--reduct", str(f))[:2] == (0, "count 93\n")


def test_embed(capsys):
    code, out, _ = run(capsys, "embed", "S_(4,475)", "S_(4,440)^2")
    assert code == 0 and out.startswith("embedding map=")
    assert run(capsys, "embed", "S_(4,424)", "S_(4,388)^2")[0] == 1


def test_quotient(capsys):
    code, out, _ = run(capsys, "quotient", "S_(4,424)", "{{1,3},{2},{4}}")
    assert code == 0 and "# isomorphic-to S_57" in out
    assert run(capsys, "quotient", "S_(4,424)", "{{1,2},{3},{4}}")[0] == 1
    code, out, _ = run(capsys, "quotient", "S_(4,424)")
    assert "blocks={{1,3},{2},{4}}" in out


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "S_(4,390)")
    assert code == 0 and "S_57" in out and "S_60" in out
    assert run(capsys, "decompose", "S_(4,390)", "S_57", "S_60")[0] == 0


def test_oracle_test(capsys):
    code, out, _ = run(capsys, "oracle-test", "s41", "--vars", "2", "--length", "2", "--summands", "2")
    assert code == 0 and out.startswith("equivalence: exact (")


def test_verify_claim_file(capsys, catalog):
    path = catalog.data_dir / "claims" / "S_4_471.basis"
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0 and out.count("verdict=holds") == 3


def test_verify_malformed(capsys, tmp_path):
    f = tmp_path / "bad.basis"
    f.write_text("algebra S_(4,471)\nstatus fb\nxy ≈\n")
    assert run(capsys, "verify", str(f))[0] == 3


def test_verify_failing_claim(capsys, tmp_path):
    f = tmp_path / "wrong.basis"
    f.write_text("algebra S_(4,471)\nstatus fb\nx ≈ x + y\n")
    assert run(capsys, "verify", str(f))[0] == 5


def test_report(capsys):
    code, out, _ = run(capsys, "report")
    assert code == 0
    assert out.splitlines()[-1].startswith("summary rows=93 finitely_based=92 nonfinitely_based=1")


def test_line_records_are_reproducible(capsys):
    first = run(capsys, "quotient", "S_(4,401)")[1]
    second = run(capsys, "quotient", "S_(4,401)")[1]
    assert first == second


def test_data_env(monkeypatch, tmp_path, capsys, catalog):
    import shutil

    shutil.copytree(catalog.data_dir, tmp_path / "d")
    (tmp_path / "d" / "recipes.manifest").write_text("")
    code, out, _ = run(capsys, "--data", str(tmp_path / "d"), "catalog", "list")
    assert code == 0 and len(out.splitlines()) == 93


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "aisemiring", "enumerate", "--order", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "count 1\n"


def test_verify_by_name(capsys):
    code, out, _ = run(capsys, "verify", "S_(4,428)")
    assert code == 5 and "status=fail-as-printed" in out
    assert run(capsys, "verify", "S_(4,414)")[0] == 0


def test_missing_claim_file(capsys):
    code, _, err = run(capsys, "verify", "does-not-exist.basis")
    assert code == 2 and "missing-file" in err
