import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from affine_ncp import cli


def run_cli(args, capsys):
    code = cli.main(args)
    return code, capsys.readouterr()


def test_morse_a2(capsys):
    code, out = run_cli(["A~2[2,1]", "morse", "--window", "-4..6"], capsys)
    assert code == 0
    rep = json.loads(out.out)
    m = rep["tasks"]["morse"]
    assert rep["schema"] == 1 and rep["window"] == [-4, 6]
    assert m["pair_count"] == 10 and m["critical_fvector"] == [1, 9, 9] and m["acyclic"] is True
    assert ["[w]", "[a1|bc0]"] in m["pairs"]


def test_census_c3(capsys):
    code, out = run_cli(["C~3", "interval", "--census"], capsys)
    c = json.loads(out.out)["tasks"]["interval"]["census"]
    assert code == 0
    assert c["translations"] == 3 and c["by_length"]["3"] == 6 and c["by_length"]["4"] == 1
    assert c["types"]["3"] == {"A~1 x A1": 3, "C~2": 3}


def test_parse_errors(capsys):
    assert run_cli(["X~9", "info"], capsys)[0] == 2
    assert run_cli(["A~2", "info", "--window", "5..1"], capsys)[0] == 2
    assert run_cli(["A~2", "info", "--window", "x"], capsys)[0] == 2
    assert run_cli(["C~3", "render"], capsys)[0] == 2
    with pytest.raises(SystemExit) as e:
        cli.main(["A~2", "bogus"])
    assert e.value.code == 2


def test_failure_exit_and_witness(capsys, monkeypatch):
    def broken(sys_, cfg):
        return {"checks": {"always": False}, "counterexample": {"cell": "[x]"}}
    monkeypatch.setitem(cli.RUNNERS, "info", broken)
    code, out = run_cli(["A~2", "info"], capsys)
    rep = json.loads(out.out)
    assert code == 1 and rep["ok"] is False and rep["tasks"]["info"]["counterexample"] == {"cell": "[x]"}


def test_reports_deterministic(tmp_path):
    outs = []
    for seed in ("1", "2"):
        p = tmp_path / f"r{seed}.json"
        subprocess.run([sys.executable, "-m", "affine_ncp.cli", "G~2", "info", "complex", "morse", "shell",
                        "--out", str(p)], check=True, env={"PYTHONHASHSEED": seed, "PATH": ""})
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_table_format(capsys):
    code, out = run_cli(["C~2", "complex", "--format", "table"], capsys)
    assert code == 0
    assert "xprime_fvector" in out.out and out.out.strip().endswith("ok true")


def _svg(path):
    root = ET.parse(path).getroot()
    ns = "{http://www.w3.org/2000/svg}"
    return root, ns


def test_render_a2_orbit_colors(tmp_path, capsys):
    p = tmp_path / "a2.svg"
    assert run_cli(["A~2[2,1]", "render", "--svg", str(p)], capsys)[0] == 0
    root, ns = _svg(p)
    colors = {c.get("fill") for c in root.iter(ns + "circle")}
    assert len(colors) == 3


def test_render_g2(tmp_path, capsys):
    p = tmp_path / "g2.svg"
    assert run_cli(["G~2", "render", "--svg", str(p)], capsys)[0] == 0
    root, ns = _svg(p)
    assert any(l.get("stroke-dasharray") for l in root.iter(ns + "line"))
    assert len(list(root.iter(ns + "polygon"))) == 12  # window -6..6
    assert len({c.get("fill") for c in root.iter(ns + "circle")}) == 3


def test_render_c3_section(tmp_path, capsys):
    p = tmp_path / "c3.svg"
    assert run_cli(["C~3", "render", "--section", "0", "--svg", str(p)], capsys)[0] == 0
    root, ns = _svg(p)
    thick = [l for l in root.iter(ns + "line") if l.get("stroke-width") == "3"]
    assert len(thick) == 6


def test_iso_json():
    from affine_ncp.coxeter import build
    s = build("A~2[2,1]")
    d = cli.iso_json(s.w)
    assert len(d["matrix"]) == 3 and all(isinstance(x, str) for row in d["matrix"] for x in row)
    assert all("/" in x or x.lstrip("-").isdigit() for x in d["translation"])
