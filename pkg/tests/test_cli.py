import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from gengeo.cli import run

from cli_cases import CASES

GOLDEN = Path(__file__).parent / "golden"


def invoke(argv, stdin=None, monkeypatch=None):
    out = io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(argv, out)
    return code, out.getvalue()


def strip_timing(doc):
    doc = dict(doc)
    doc.pop("timing", None)
    return doc


def golden_doc(name):
    argv, _ = CASES[name]
    code, text = invoke(argv + ["--json"])
    return code, strip_timing(json.loads(text))


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    code, doc = golden_doc(name)
    path = GOLDEN / f"{name}.json"
    if os.environ.get("GENGEO_REGEN_GOLDEN"):
        path.write_text(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8")
    assert code == CASES[name][1]
    assert doc == json.loads(path.read_text(encoding="utf-8"))
    assert doc["schema"] == 1
    assert doc["verdict"] == {0: "accept", 1: "reject", 2: "error"}[code]


def test_json_is_deterministic():
    argv = CASES["su_flat_cy"][0] + ["--json"]
    a, b = invoke(argv)[1], invoke(argv)[1]
    assert strip_timing(json.loads(a)) == strip_timing(json.loads(b))
    assert "timing" in json.loads(a)


def test_spec_examples():
    code, doc = golden_doc("classify_e_iomega")
    assert code == 0 and doc["kind"] == "generalised Calabi-Yau" and doc["data"]["type"] == 0
    code, doc = golden_doc("su_flat_cy")
    assert doc["data"]["c"] == "1" and doc["data"]["lambda"] == "2"
    code, doc = golden_doc("verify_tables_kahler")
    for name, ids in doc["data"].items():
        assert set(ids.values()) == {"pass"}, name


def test_text_output(capsys):
    code, text = invoke(["pair", "--dim", "2", "1", "dx1^dx2"])
    assert code == 0
    assert text.splitlines()[0] == "Mukai pairing: accept"
    assert "value = -1" in text


def test_stdin_and_file_arguments(tmp_path, monkeypatch):
    code, text = invoke(["classify", "--dim", "2", "-"], stdin="exp(i*dx1^dx2)\n", monkeypatch=monkeypatch)
    assert code == 0
    f = tmp_path / "rho.txt"
    f.write_text("dx1\n")
    code, _ = invoke(["classify", "--dim", "2", f"@{f}"])
    assert code == 1


def test_error_paths(capsys):
    code, text = invoke(["pair", "dx1^^dx2", "1"])
    assert code == 2 and text == ""
    assert "syntax error at column 5" in capsys.readouterr().err
    assert invoke(["nijenhuis"])[0] == 2
    assert invoke(["kahler", "--J", "0,-1;1,0"])[0] == 2
    assert invoke(["interpolate", "--t", "abc", "dx1^dx2"])[0] == 2
    assert invoke(["classify", "@/nonexistent/file"])[0] == 2
    assert invoke(["no-such-command"])[0] == 2
    assert invoke(["su", "dx1", "dx1"])[0] == 2


def test_error_json_shape():
    code, text = invoke(["pair", "dx1^^dx2", "1", "--json"])
    doc = json.loads(text)
    assert code == 2 and doc["verdict"] == "error" and doc["error"].startswith("syntax error at column 5")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gengeo", "classify", "--dim", "2", "dx1"], capture_output=True, text=True
    )
    assert proc.returncode == 1
    assert proc.stdout.startswith("generalised Calabi-Yau: reject")
