from __future__ import annotations

import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from subregfrob import reference as ref
from subregfrob.cli import main
from subregfrob.exact import QElem
from subregfrob.serialize import EMITTABLE, decode, dumps, emit, to_document


def rehome(x: QElem, ring) -> QElem:
    return QElem(ring, x.a, x.b, x.k)


@pytest.mark.parametrize("name", EMITTABLE)
def test_json_round_trip(state, name):
    text = emit(name, state, "json")
    assert emit(name, state, "json") == text
    doc = json.loads(text)
    assert doc["object"] == name and doc["algebra"] == "d4"
    assert doc == to_document(name, state)
    obj = decode(doc)
    assert dumps(to_document(name, state)) == dumps(doc)
    if name == "basis":
        assert all(obj["vectors"][l] == state.mb[l] for l in state.mb.labels)
    elif name == "gram-matrix":
        assert obj["matrix"] == ref.GRAM and obj["rho"] == 1
    elif name == "slodowy-chart":
        assert obj["t_of_z"] == state.chart.t_of_z and obj["t0"] == state.chart.t0
    elif name == "transverse":
        assert obj["t"]["F"] == state.ts_t.F and obj["z"]["Gamma"] == state.ts_z.G
    elif name == "reduced-n":
        ring = state.red.hyper.ring
        assert (obj["ring"].p1, obj["ring"].p0) == (ring.p1, ring.p0)
        assert [[rehome(x, ring) for x in r] for r in obj["g"]] == state.red.g
    else:
        ring = state.potential.ring
        assert (obj["ring"].p1, obj["ring"].p0) == (ring.p1, ring.p0)
        assert rehome(obj["F"], ring) == state.potential.F
        assert obj["charge"] == Fraction(1, 2)


@pytest.mark.parametrize("fmt", ["text", "latex"])
def test_human_formats(state, fmt):
    out = emit("potential", state, fmt)
    assert out == emit("potential", state, fmt)
    if fmt == "latex":
        assert out.startswith("\\begin{align*}") and "s_{1}" in out
    else:
        assert "F = " in out and "Z^2" in out


def test_emit_rejects_unknown(state):
    with pytest.raises(KeyError):
        emit("monodromy", state)
    with pytest.raises(ValueError):
        emit("potential", state, "yaml")


def cli(cache_dir, *argv):
    return main([*argv, "--cache-dir", str(cache_dir)])


def test_pipeline_run_is_reproducible(cache_dir, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["pipeline", "run", "--cache-dir", str(cache_dir), "--no-timings", "--out", str(a)]) == 0
    assert main(["pipeline", "run", "--cache-dir", str(cache_dir), "--no-timings", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert "runtime" not in rep and not any("runtime" in s for s in rep["stages"])
    assert all(s["status"] == "passed" for s in rep["stages"])


def test_pipeline_timings_reported(cache_dir, tmp_path):
    out = tmp_path / "r.json"
    assert main(["pipeline", "run", "--cache-dir", str(cache_dir), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert all("seconds" in s["runtime"] for s in rep["stages"])


@pytest.mark.parametrize("target", ["opposite-cartan", "w-algebra", "pencil", "wdvv"])
def test_verify_targets(cache_dir, capsys, target):
    assert cli(cache_dir, "verify", target) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "[PASSED]" in out


def test_verify_published_potential(cache_dir, capsys):
    assert cli(cache_dir, "verify", "wdvv", "--potential", "paper") == 0
    out = capsys.readouterr().out
    assert "published potential: 256/256" in out
    assert "matching branch: Z" in out


def test_emit_to_file(cache_dir, tmp_path):
    out = tmp_path / "gram.tex"
    assert cli(cache_dir, "emit", "--object", "gram-matrix", "--format", "latex", "--out", str(out)) == 0
    assert "A(y_1, y_4, y_2, y_3)" in out.read_text()


@pytest.mark.parametrize("argv", [
    ["emit", "--object", "bogus"],
    ["pipeline", "run", "--algebra", "e6"],
    ["verify", "curvature"],
    ["emit", "--object", "potential", "--format", "pdf"],
    [],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2
    capsys.readouterr()


def test_module_entry_point_and_cache_env(tmp_path):
    env = dict(os.environ, SF_CACHE_DIR=str(tmp_path / "c"))
    res = subprocess.run([sys.executable, "-m", "subregfrob", "verify", "w-algebra"],
                         env=env, capture_output=True, text=True, timeout=600)
    assert res.returncode == 0, res.stderr
    assert any((tmp_path / "c").iterdir())
    res = subprocess.run([sys.executable, "-m", "subregfrob", "emit", "--object", "nope"],
                         env=env, capture_output=True, text=True, timeout=60)
    assert res.returncode == 2 and "valid objects" in res.stderr
