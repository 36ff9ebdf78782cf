import csv
import io
import json

import pytest

from superqrt import __version__
from superqrt.cli import EXIT_INCONCLUSIVE, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_iterate_exact_output(capsys):
    code, out, _ = run(capsys, "iterate", "0,0,2,0", "--h", "1", "--n", "2")
    assert code == EXIT_OK
    assert "1 | 2, 0, -4, 0 | -4 | 8 | 0, 0" in out


def test_iterate_reports_pole(capsys):
    code, rep = run_json(capsys, "iterate", "0,0,1,0", "--h", "1/2")
    assert code == EXIT_OK
    assert rep["result"]["pole"] == {"step": 1, "coordinate": "x2"}


def test_report_envelope(capsys):
    code, rep = run_json(capsys, "iterate", "1/2,1/3,1/5,1/7", "--seed", "11", "--n", "3")
    assert code == EXIT_OK
    assert rep["version"] == __version__ and rep["seed"] == 11
    assert rep["status"] == "ok" and rep["wall_clock_seconds"] >= 0
    assert all("provenance" in c and "claim" in c for c in rep["checks"])
    # rationals are rendered exactly
    assert rep["result"]["orbit"][0]["x0"] == "1/2"


def test_csv_table(capsys):
    code, out, _ = run(capsys, "degrees", "--n", "2", "--csv", "--trials", "2")
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][:5] == ["n", "a", "b", "c", "d"]
    assert rows[2][:5] == ["1", "0", "1", "1", "3"]


def test_psi_degrees(capsys):
    code, rep = run_json(capsys, "psi-degrees", "--n", "6", "--trials", "2")
    assert code == EXIT_OK
    assert rep["result"]["degrees"] == [1, 3, 5, 9, 15, 23, 33]


def test_growth_tabulated(capsys):
    code, rep = run_json(capsys, "growth", "--tabulated")
    assert code == EXIT_OK
    assert rep["result"]["growth"] == "polynomial degree 2"
    assert rep["result"]["max_unit_circle_block"] == 3


def test_picard_matrix_tabulated(capsys):
    code, rep = run_json(capsys, "picard-matrix", "--tabulated")
    assert code == EXIT_OK
    assert set(rep["result"]["provenance"].values()) == {"tabulated"}


def test_track_singularity(capsys):
    code, rep = run_json(capsys, "track-singularity", "seq8", "--trials", "2")
    assert code == EXIT_OK
    assert {t["classification"] for t in rep["result"]["traces"]} == {"cyclic"}


def test_multiplicities_named(capsys):
    code, rep = run_json(capsys, "multiplicities", "x2-1")
    assert code == EXIT_OK
    assert rep["result"]["proper_class"] == "Hb-E1-E6-E11"


def test_multiplicities_expression(capsys):
    code, rep = run_json(capsys, "multiplicities", "x0 + 3*x1 - 5", "--bidegree", "1,0")
    assert code == EXIT_OK and rep["checks"] == []
    assert rep["result"]["multiplicities"] == [0] * 17


def test_verify_invariants(capsys):
    code, out, _ = run(capsys, "verify", "invariants")
    assert code == EXIT_OK and out.count("[PASS]") == 3


def test_mismatch_exit_code(capsys, monkeypatch):
    from superqrt import tower

    monkeypatch.setitem(tower.TABULATED_MULTIPLICITIES, "z1", (0,) * 17)
    code, out, _ = run(capsys, "multiplicities", "z1")
    assert code == EXIT_MISMATCH and "[FAIL]" in out


def test_inconclusive_exit_code(capsys, monkeypatch):
    from superqrt import degrees

    def boom(*a, **k):
        raise degrees.ResampleExhaustedError("no usable line")

    monkeypatch.setattr(degrees, "phi_bidegrees", boom)
    code, _, err = run(capsys, "degrees", "--n", "2")
    assert code == EXIT_INCONCLUSIVE and "inconclusive" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["iterate", "1,2,3"],
        ["iterate", "0,0,0,0", "--h", "1/0"],
        ["track-singularity", "seq9"],
        ["track-singularity", "seq5", "--ambient", "P3"],
        ["find-invariants", "Hc"],
        ["multiplicities", "x0 +"],
        ["verify", "everything"],
        ["no-such-command"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_bad_config_is_usage_error(capsys, tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{"bogus": 1}')
    assert run(capsys, "iterate", "0,0,2,0", "--config", str(p))[0] == EXIT_USAGE


def test_config_file_supplies_defaults(capsys, tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{"h": "1", "n_max": 1, "seed": 5}')
    code, rep = run_json(capsys, "iterate", "0,0,2,0", "--config", str(p))
    assert code == EXIT_OK and rep["seed"] == 5
    assert len(rep["result"]["orbit"]) == 2 and rep["result"]["orbit"][0]["I1"] == "-4"
