import json
import subprocess
import sys

import pytest

from fdapprox.cli import main


def run(tmp_path, *argv):
    return main(list(argv) + ["--out", str(tmp_path)])


def _tree(path):
    return {p.relative_to(path).as_posix(): p.read_bytes() for p in sorted(path.rglob("*")) if p.is_file()}


def test_scheme_build_verify(tmp_path, capsys):
    assert run(tmp_path, "scheme", "build", "-K", "2", "--n", "3", "--r", "0,0,0") == 0
    assert "m = [1, 3, 9]" in capsys.readouterr().out
    assert main(["scheme", "verify", str(tmp_path / "scheme.json"), "--out", str(tmp_path)]) == 0


def test_scheme_verify_rejects(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(tmp_path, "scheme", "verify", str(bad)) == 2
    assert run(tmp_path, "scheme", "verify", str(tmp_path / "missing.json")) == 2
    assert run(tmp_path, "scheme", "build", "-K", "2", "--r", "0,1,0") == 2


def test_corrupted_scheme_fails(tmp_path):
    assert run(tmp_path, "scheme", "build", "-K", "2") == 0
    data = json.loads((tmp_path / "scheme.json").read_text())
    data["levels"][1][0] = [0, 1, 5]
    path = tmp_path / "corrupt.json"
    path.write_text(json.dumps(data))
    assert run(tmp_path, "scheme", "verify", str(path)) == 1


def test_family_and_cap(tmp_path):
    assert run(tmp_path, "family", "build") == 0
    assert (tmp_path / "family.json").is_file()
    assert len(list((tmp_path / "conditions").glob("F_*.json"))) == 27 + 9 + 3 + 1
    assert run(tmp_path / "cap", "family", "build", "--partition", "1,1,1", "--width-cap", "8") == 3


def test_family_byte_identical(tmp_path):
    assert run(tmp_path / "a", "family", "build") == 0
    assert run(tmp_path / "b", "family", "build") == 0
    assert _tree(tmp_path / "a") == _tree(tmp_path / "b")


def test_verify_suites(tmp_path):
    assert run(tmp_path, "verify", "onehalf") == 0
    assert run(tmp_path, "verify", "stampfli", "--trials", "50", "--seed", "7") == 0
    assert run(tmp_path, "verify", "irr", "--trials", "20") == 0
    assert run(tmp_path, "verify", "main") == 0
    rep = json.loads((tmp_path / "main.json").read_text())
    assert rep["pass"] is True
    assert run(tmp_path, "verify", "dichotomy", "--format", "csv") == 0
    assert (tmp_path / "dichotomy-norms.csv").read_text().startswith(",")
    assert run(tmp_path, "verify", "nonsense") == 2


def test_verify_from_family_dump(tmp_path):
    assert run(tmp_path, "family", "build") == 0
    assert run(tmp_path, "verify", "main", "--family", str(tmp_path / "family.json")) == 0


def test_irr_input_file(tmp_path):
    e11 = {"0": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]}
    flip = {"0": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]}
    path = tmp_path / "ops.json"
    path.write_text(json.dumps([e11, flip]))
    assert run(tmp_path, "verify", "irr", "--input", str(path)) == 0
    rep = json.loads((tmp_path / "irr.json").read_text())
    fam = next(f for f in rep["findings"] if f["kind"] == "family")
    assert fam["value"]["irredundant"] is True
    path.write_text('[{"0": 5}]')
    assert run(tmp_path, "verify", "irr", "--input", str(path)) == 2


def test_stampfli_deterministic(tmp_path):
    run(tmp_path / "a", "verify", "stampfli", "--trials", "30", "--seed", "5")
    run(tmp_path / "b", "verify", "stampfli", "--trials", "30", "--seed", "5")
    assert _tree(tmp_path / "a") == _tree(tmp_path / "b")


def test_dump_commands(tmp_path):
    assert run(tmp_path, "dump", "condition", "--F", "0,1,2") == 0
    assert (tmp_path / "F_0-1-2.json").is_file()
    assert run(tmp_path, "dump", "condition", "--F", "0,1,5") == 2
    assert run(tmp_path, "dump", "window", "--columns", "0,1,2", "--width", "2") == 0
    assert json.loads((tmp_path / "window.json").read_text())["columns"] == [0, 1, 2]


def test_out_env(tmp_path, monkeypatch):
    monkeypatch.setenv("FDAPPROX_OUT", str(tmp_path / "env"))
    assert main(["verify", "onehalf"]) == 0
    assert (tmp_path / "env" / "onehalf.json").is_file()


def test_module_entry(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "fdapprox", "verify", "onehalf", "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "onehalf: pass" in proc.stdout


def test_usage_error_exit():
    with pytest.raises(SystemExit) as exc:
        main(["scheme"])
    assert exc.value.code == 2
