import io
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from grt.cli import run
from grt.graph import catalog, serialize_graph
from grt.realization import Realization, skeleton, spectral_realization
from _cases import ACCEPTANCE_COMMANDS


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv, "--format", "json")
    assert code == 0, err
    return json.loads(out)


# -- documented examples


def test_spectrum_csv():
    code, out, _ = call("spectrum", "--catalog", "dodecahedron", "--format", "csv")
    assert code == 0
    rows = out.strip().splitlines()
    assert rows[0] == "theta,multiplicity"
    assert len(rows[1:]) == 6
    got = [(float(a), int(b)) for a, b in (r.split(",") for r in rows[1:])]
    s5 = np.sqrt(5)
    for (value, mult), (ev, em) in zip(got, [(3, 1), (s5, 3), (1, 5), (0, 4), (-2, 4), (-s5, 3)]):
        assert abs(value - ev) <= 1e-8 and mult == em


def test_realize_obj():
    code, out, _ = call("realize", "--catalog", "dodecahedron", "--index", "2", "--format", "obj")
    assert code == 0
    lines = out.splitlines()
    assert sum(ln.startswith("v ") for ln in lines) == 20
    assert sum(ln.startswith("l ") for ln in lines) == 30


def test_realize_obj_projection_note():
    code, out, err = call("realize", "--catalog", "dodecahedron", "--index", "3", "--format", "obj")
    assert code == 0 and "d=5" in err
    assert all(len(ln.split()) == 4 for ln in out.splitlines() if ln.startswith("v "))


def test_svg_dimension_too_low():
    code, out, err = call("realize", "--catalog", "petersen", "--index", "1", "--format", "svg")
    assert code == 2 and out == ""
    assert "dimension too low" in err


def test_svg_ok():
    code, out, _ = call("export", "--construction", "hexagonal_prism", "--format", "svg")
    assert code == 0 and out.startswith("<svg")


def test_realize_json_round_trip(tmp_path):
    data = call_json("realize", "--catalog", "petersen", "--index", "2")
    r = spectral_realization(catalog("petersen"), 2)
    assert data["theta"] == pytest.approx(1.0)
    assert np.allclose(data["matrix"], r.matrix, atol=1e-12)
    path = tmp_path / "r.json"
    path.write_text(json.dumps(data))
    back = call_json("check", "--realization", str(path))
    assert back["spectral"] == pytest.approx(1.0)
    assert back["symmetric"] is True


def test_check_and_rigidity_reports():
    d = call_json("check", "--skeleton", "cell24")
    assert d["balanced"] == pytest.approx(4.0) and d["irreducible"] is True
    d = call_json("rigidity", "--skeleton", "cell24")
    assert d["verdict"] == "rigid_certified" and d["rule"] == "b"
    d = call_json("rigidity", "--skeleton", "rhombic_dodecahedron", "--scales", "1,1.5")
    assert d["verdict"] == "flexible_certified" and d["rule"] == "d"


def test_metrics_modes():
    d = call_json("metrics", "--catalog", "dodecahedron", "--theta", "2.2360679774997896")
    assert d["circumradius_at_unit_edge"] == pytest.approx(1.401258, abs=1e-5)
    assert d["dihedral_angle_deg"] == pytest.approx(138.1896, abs=1e-3)
    assert call_json("metrics", "--deg", "8", "--rel-length", "1") == {"theta": 4.0}
    d = call_json("metrics", "--skeleton", "cell24")
    assert d["relative_length"] == pytest.approx(1.0)
    code, _, err = call("metrics", "--deg", "8")
    assert code == 2


def test_cosine_and_array():
    d = call_json("cosine", "--skeleton", "cuboctahedron")
    assert d["obstruction"]["feasible"] is False
    d = call_json("intersection-array", "--catalog", "petersen", "--theta", "1")
    assert d["symbol"] == "{3,2;1,1}"
    assert d["recurrence"]["1"] == pytest.approx([1, 1 / 3, -1 / 3])
    code, _, err = call("intersection-array", "--catalog", "truncated_tetrahedron")
    assert code == 2


def test_orbitals_and_transitivity():
    d = call_json("orbitals", "--catalog", "petersen")
    assert d["num_classes"] == 3 and d["matches_adjacency_eigenspaces"] is True
    d = call_json("transitivity", "--catalog", "cell24")
    assert d == {"vertex": True, "edge": True, "arc": True, "distance": False}
    d = call_json("aut", "--catalog", "petersen")
    assert d["order"] == 120


def test_catalog_list():
    d = call_json("catalog", "list")
    assert "torus" in d and d["complete_multipartite"]["params"] == "list"


def test_criteria_only():
    d = call_json("rigidity", "--catalog", "complete_bipartite", "--params", "4,4", "--criteria-d", "2")
    assert d["balanced_forced"] is True and d["rigid_forced"] is False


# -- inputs, outputs and exit codes


@pytest.mark.parametrize("fmt,suffix", [("graph6", ".g6"), ("edge_list", ".txt"), ("json", ".json")])
def test_input_formats(tmp_path, fmt, suffix):
    g = catalog("petersen")
    data = serialize_graph(g, fmt)
    path = tmp_path / ("g" + suffix)
    path.write_bytes(data if isinstance(data, bytes) else data.encode())
    expected = call("spectrum", "--catalog", "petersen")[1]
    assert call("spectrum", "--input", str(path))[1] == expected
    odd = tmp_path / "g.dat"
    odd.write_bytes(path.read_bytes())
    assert call("spectrum", "--input", str(odd), "--input-format", fmt)[1] == expected
    assert call("spectrum", "--input", str(odd))[0] == 2


def test_parse_errors(tmp_path):
    bad = tmp_path / "bad.g6"
    bad.write_bytes(b"A`\n")
    assert call("spectrum", "--input", str(bad))[0] == 3
    assert call("spectrum", "--input", str(tmp_path / "missing.g6"))[0] == 3
    assert call("spectrum", "--catalog", "petersen", "--bogus")[0] == 3
    assert call("bogus")[0] == 3
    assert call("spectrum", "--catalog", "petersen", "--tol", "-1")[0] == 3
    broken = tmp_path / "r.json"
    broken.write_text("{not json")
    assert call("check", "--realization", str(broken))[0] == 3


def test_precondition_errors():
    assert call("spectrum", "--catalog", "nosuch")[0] == 2
    assert call("spectrum", "--catalog", "cycle")[0] == 2
    assert call("realize", "--catalog", "petersen", "--index", "9")[0] == 2
    assert call("check", "--catalog", "petersen")[0] == 2
    assert call("spectrum")[0] == 2
    code, _, err = call("metrics", "--construction", "rectangle_c4")
    assert code == 2 and "error:" in err


def test_out_file(tmp_path):
    path = tmp_path / "spec.json"
    code, out, _ = call("spectrum", "--catalog", "petersen", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())


def test_group_file(tmp_path):
    from grt.constructions import c4_diagonal_reflections, rhombus_c4
    rpath, gpath = tmp_path / "r.json", tmp_path / "g.json"
    rpath.write_text(rhombus_c4().to_json())
    gpath.write_text(c4_diagonal_reflections().to_json())
    d = call_json("check", "--realization", str(rpath), "--group", str(gpath))
    assert d["symmetric"] is True and d["irreducible"] is False and d["group_order"] == 4
    d = call_json("check", "--realization", str(rpath))
    assert d["symmetric"] is False and d["irreducible"] is None


def test_seed_sources(monkeypatch):
    argv = ("orbitals", "--catalog", "petersen", "--format", "json")
    monkeypatch.delenv("GRT_SEED", raising=False)
    assert json.loads(call(*argv)[1])["seed"] == 0
    monkeypatch.setenv("GRT_SEED", "7")
    assert json.loads(call(*argv)[1])["seed"] == 7
    assert json.loads(call(*argv, "--seed", "3")[1])["seed"] == 3
    monkeypatch.setenv("GRT_SEED", "x")
    assert call(*argv)[0] == 2


def test_export_formats():
    r = skeleton("cuboctahedron")
    d = call_json("export", "--skeleton", "cuboctahedron")
    assert np.allclose(d["matrix"], r.matrix)
    code, out, _ = call("export", "--skeleton", "cuboctahedron", "--format", "csv")
    assert np.allclose(np.loadtxt(io.StringIO(out), delimiter=","), r.matrix)
    assert Realization.from_json(json.dumps(d)).d == 3


# -- determinism


DETERMINISM = [argv for k in range(1, 8) for argv in ACCEPTANCE_COMMANDS[k]]


@pytest.mark.parametrize("argv", DETERMINISM, ids=lambda a: " ".join(a[:3]))
def test_repeated_runs_identical(argv):
    first = call(*argv)
    assert first[0] == 0, first[2]
    for _ in range(9):
        assert call(*argv) == first


@pytest.mark.parametrize("argv", [ACCEPTANCE_COMMANDS[5][1], ACCEPTANCE_COMMANDS[6][0]],
                         ids=lambda a: " ".join(a[:3]))
def test_identical_across_processes(argv):
    outputs = set()
    for hashseed in ("0", "1", "12345"):
        env = dict(os.environ, PYTHONHASHSEED=hashseed)
        env.pop("GRT_SEED", None)
        proc = subprocess.run([sys.executable, "-m", "grt", *argv], capture_output=True, env=env, check=True)
        outputs.add(proc.stdout)
    assert len(outputs) == 1
    assert outputs.pop() == call(*argv)[1].encode()
