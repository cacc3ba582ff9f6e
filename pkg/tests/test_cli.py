import csv
import io
import json
from importlib import resources

import numpy as np
import pytest

from fraczero import cli
from fraczero.root_solver import RootSet

DATA = resources.files("fraczero") / "data"


def data_path(name):
    return str(DATA / name)


def run(capsys, *argv):
    try:
        code = cli.main(list(argv))
    except SystemExit as exc:  # argparse rejects the command line
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def test_track_fig1_csv(capsys):
    code, out, _ = run(capsys, "track", "--poly", data_path("cubic_fig1.json"))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert set(rows[0]) == {"path_id", "alpha", "re", "im", "event"}
    arrivals = sorted(float(r["alpha"]) for r in rows if r["event"] == "origin")
    assert arrivals == [1.0, 2.0, 3.0]


def test_track_is_deterministic(capsys, tmp_path):
    args = ["track", "--poly", data_path("cubic_fig3.json"), "--step", "0.0625"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, *args, "--out", str(a), "--svg", str(tmp_path / "a.svg"))[0] == 0
    assert run(capsys, *args, "--out", str(b), "--svg", str(tmp_path / "b.svg"))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()
    assert (tmp_path / "a.svg").read_bytes().startswith(b"<svg")


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--poly", data_path("cubic_fig1.json"))
    assert code == 0
    rows = json.loads(out)
    assert sorted(r["terminal_integer"] for r in rows) == [1, 2, 3]


def test_deriv_json(capsys):
    code, out, _ = run(capsys, "deriv", "--poly", data_path("cubic_fig5.json"),
                       "--alpha", "0.5", "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["prefactor_exponent"] == -0.5
    assert len(obj["coeffs"]) == 4
    code, out, _ = run(capsys, "deriv", "--poly", data_path("cubic_fig5.json"),
                       "--alpha", "3.5", "--kind", "caputo", "--json")
    assert json.loads(out)["zero"] is True
    code, out, _ = run(capsys, "deriv", "--poly", data_path("cubic_fig5.json"), "--alpha", "1")
    assert code == 0 and out.startswith("D^1.0 p")


def test_roots_verify(capsys):
    code, out, _ = run(capsys, "roots", "--poly", data_path("cubic_fig3.json"), "--verify")
    assert code == 0
    obj = json.loads(out)
    got = sorted(complex(*z).real for z in obj["roots"])
    assert got == pytest.approx([2, 3, 4])
    assert obj["oracle_max_pairing_distance"] < 1e-8


def test_mahler_and_report(capsys):
    code, out, _ = run(capsys, "mahler", "--poly", data_path("cubic_fig5.json"), "--alpha", "1.5")
    assert code == 0 and json.loads(out)["measure"] == pytest.approx(1.0)
    code, out, _ = run(capsys, "mahler", "--poly", data_path("cubic_fig5.json"),
                       "--alpha", "1.5", "--report")
    obj = json.loads(out)
    assert {b["name"] for b in obj["bounds"]} == {"length", "height", "euclid"}


def test_bounds_sweep_columns(capsys, tmp_path):
    out_csv = tmp_path / "s.csv"
    code, _, _ = run(capsys, "bounds-sweep", "--poly", data_path("cubic_fig5.json"),
                     "--alpha-min", "0", "--alpha-max", "3", "--steps", "7",
                     "--out", str(out_csv), "--svg", str(tmp_path / "s.svg"))
    assert code == 0
    rows = list(csv.DictReader(out_csv.open()))
    assert list(rows[0]) == ["alpha", "measure", "bound_name", "bound_value", "satisfied"]
    assert {r["satisfied"] for r in rows} <= {"true", "false", ""}
    assert sorted({float(r["alpha"]) for r in rows}) == pytest.approx(np.linspace(0, 3, 7))


def test_closed_form(capsys):
    code, out, _ = run(capsys, "closed-form", "--poly", data_path("quadratic_fig4.json"),
                       "--alpha", "0.5")
    assert code == 0
    z1, z2 = (complex(*z) for z in json.loads(out)["roots"])
    assert z1 == pytest.approx(-0.75 - 2.25j) and z2 == pytest.approx(-0.75 - 2.25j)
    code, _, err = run(capsys, "closed-form", "--poly", data_path("cubic_fig1.json"),
                       "--alpha", "0.5")
    assert code == 1 and "no closed form" in err


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "track")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "track", "--poly", str(tmp_path / "missing.json"))[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "roots", "--poly", str(bad))[0] == 1
    assert run(capsys, "track", "--poly", data_path("cubic_fig1.json"),
               "--alpha-min", "2", "--alpha-max", "1")[0] == 1
    assert run(capsys, "mahler", "--poly", data_path("cubic_fig1.json"), "--alpha", "4.5",
               "--kind", "caputo")[0] == 1


def test_numerical_failure_exit_code(capsys, monkeypatch):
    def stuck(p, warn=True):
        return RootSet(np.zeros(p.degree, dtype=complex), np.ones(p.degree), False)

    monkeypatch.setattr(cli, "solve_all", stuck)
    code, _, err = run(capsys, "roots", "--poly", data_path("cubic_fig1.json"))
    assert code == 2 and "numerical failure" in err


def test_threads_env(monkeypatch):
    monkeypatch.setenv("FRACZERO_THREADS", "3")
    assert cli._threads() == 3
    monkeypatch.setenv("FRACZERO_THREADS", "lots")
    with pytest.raises(cli.UsageError):
        cli._threads()


def test_figures(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("FRACZERO_THREADS", "2")
    code, out, _ = run(capsys, "figures", "--out-dir", str(tmp_path))
    assert code == 0
    written = out.split()
    assert len(written) == 32
    assert (tmp_path / "fig4_paths.svg").exists()
    assert (tmp_path / "fig8_caputo.csv").exists()


def test_write_atomic(tmp_path):
    target = tmp_path / "x.txt"
    cli.write_atomic(target, "one")
    cli.write_atomic(target, b"two")
    assert target.read_text() == "two"
    assert [p.name for p in tmp_path.iterdir()] == ["x.txt"]
