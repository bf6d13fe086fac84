import csv
import json
from importlib import resources

import jsonschema
import pytest

from attitude_ic.cli import attitude_histogram, main, top_share

from helpers import NONSUB, STAR, TRIANGLE

SCHEMA = json.loads(resources.files("attitude_ic").joinpath("report.schema.json").read_text())


def write(path, pairs, p=None):
    path.write_text("".join(f"{a} {b}" + (f" {p}" if p is not None else "") + "\n"
                            for a, b in pairs))
    return str(path)


@pytest.fixture
def tri(tmp_path):
    return write(tmp_path / "tri.txt", TRIANGLE)


@pytest.fixture
def fig1(tmp_path):
    return write(tmp_path / "fig1.txt", TRIANGLE + STAR)


@pytest.fixture
def nonsub_file(tmp_path):
    return write(tmp_path / "nonsub.txt", NONSUB)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    report = json.loads(out.out) if code == 0 and out.out else None
    if report is not None:
        jsonschema.validate(report, SCHEMA)
    return code, report, out.err


def test_simulate_triangle(capsys, tri):
    code, r, _ = run(capsys, "simulate", "--graph", tri, "--weights", "1", "--seeds", "a",
                     "--trials", 100, "--threads", 1)
    assert code == 0
    res = r["results"]
    assert res["mean_att"] == 7 and res["mean_inf"] == 3
    assert res["mean_ratio"] == pytest.approx(7 / 3)
    assert r["params"]["seed"] == 0 and r["graph"]["m"] == 6


def test_simulate_empty_seeds(capsys, tri):
    code, r, _ = run(capsys, "simulate", "--graph", tri, "--trials", 5)
    assert code == 0 and r["results"]["mean_att"] == 0 and r["results"]["seeds"] == []


def test_simulate_single_trial_null_stderr(capsys, tri):
    code, r, _ = run(capsys, "simulate", "--graph", tri, "--seeds", "a", "--trials", 1)
    assert code == 0 and r["results"]["stderr_att"] is None


def test_unknown_label(capsys, tri):
    code, _, err = run(capsys, "simulate", "--graph", tri, "--seeds", "nope")
    assert code == 2 and "nope" in err


def test_seeds_file(capsys, tmp_path, nonsub_file):
    f = tmp_path / "seeds.txt"
    f.write_text("s t\n# comment\nv\n")
    code, r, _ = run(capsys, "exact", "--graph", nonsub_file, "--weights", "1",
                     "--seeds-file", f)
    assert code == 0 and r["results"]["sigma_act"] == 2


def test_exact_examples(capsys, tmp_path, nonsub_file):
    code, r, _ = run(capsys, "exact", "--graph", nonsub_file, "--weights", "1",
                     "--seeds", "s", "t", "v")
    assert r["results"]["sigma_act"] == 2
    star = write(tmp_path / "star.txt", STAR)
    code, r, _ = run(capsys, "exact", "--graph", star, "--weights", "1", "--seeds", "d")
    assert r["results"]["sigma_att"] == 5
    chain = write(tmp_path / "chain.txt", [("a", "b"), ("b", "c")])
    code, r, _ = run(capsys, "exact", "--graph", chain, "--weights", "0.5", "--seeds", "a")
    assert r["results"]["sigma_att"] == pytest.approx(1.75)


def test_exact_best_seed(capsys, fig1):
    code, r, _ = run(capsys, "exact", "--graph", fig1, "--weights", "1", "--k", 1,
                     "--objective", "influence")
    assert code == 0 and r["results"]["seeds"] == ["d"] and r["results"]["best_value"] == 5


def test_exact_size_guard(capsys, tmp_path):
    big = write(tmp_path / "big.txt", [(f"n{i}", f"n{i + 1}") for i in range(25)])
    code, _, err = run(capsys, "exact", "--graph", big, "--seeds", "n0")
    assert code == 3 and "m <=" in err


def test_maximize_attitude(capsys, fig1):
    code, r, _ = run(capsys, "maximize", "--graph", fig1, "--weights", "1", "--k", 1,
                     "--eps", 0.1, "--delta", 0.05, "--threads", 1)
    assert code == 0
    assert r["results"]["seeds"][0] in {"a", "b", "c"}
    assert r["results"]["estimate"] == pytest.approx(7, rel=0.1)
    assert r["samples"]["beta"] > 0


def test_maximize_influence(capsys, fig1):
    code, r, _ = run(capsys, "maximize", "--graph", fig1, "--weights", "1", "--k", 1,
                     "--objective", "influence")
    assert code == 0 and r["results"]["seeds"] == ["d"]


def test_maximize_actionable(capsys, nonsub_file):
    code, r, _ = run(capsys, "maximize", "--graph", nonsub_file, "--weights", "1", "--k", 1,
                     "--objective", "actionable", "--a", 2)
    assert code == 0 and r["results"]["seeds"] == ["s"]
    assert r["results"]["delta_bound"] == 2


@pytest.mark.parametrize("k", [0, 99])
def test_maximize_bad_k(capsys, tri, k):
    code, _, err = run(capsys, "maximize", "--graph", tri, "--k", k)
    assert code == 2 and "--k" in err


def test_maximize_bad_eps(capsys, tri):
    code, _, _ = run(capsys, "maximize", "--graph", tri, "--k", 1, "--eps", 1.5)
    assert code == 2


def test_estimate_commands(capsys, tri):
    for obj, want in [("attitude", 7), ("influence", 3), ("actionable", 4)]:
        code, r, _ = run(capsys, "estimate", "--graph", tri, "--weights", "1", "--seeds", "a",
                         "--objective", obj, "--a", 1)
        assert code == 0 and r["results"]["estimate"] == want


def test_stats_triangle(capsys, tmp_path, tri):
    out_csv = tmp_path / "hist.csv"
    code, r, _ = run(capsys, "stats", "--graph", tri, "--weights", "1", "--seeds", "a",
                     "--trials", 10, "--csv", out_csv)
    assert code == 0
    rows = list(csv.reader(out_csv.open()))
    assert rows[0] == ["attitude", "mean_count", "mean_contribution"]
    assert len(rows) == 22 and rows[-1][0] == "more"
    by_value = {row[0]: float(row[2]) for row in rows[1:]}
    assert by_value["2"] == 4 and by_value["3"] == 3 and by_value["1"] == 0


def test_stats_star(capsys, tmp_path):
    star = write(tmp_path / "star.txt", STAR)
    code, r, _ = run(capsys, "stats", "--graph", star, "--weights", "1", "--seeds", "d",
                     "--trials", 3, "--bins", 5)
    hist = r["results"]["histogram"]
    assert len(hist) == 6 and hist[0]["mean_contribution"] == 5


def test_histogram_overflow_and_top_share():
    import numpy as np
    hist = np.array([0, 4, 2, 0, 1, 1])  # values 1..5, pooled over 2 trials
    rows = attitude_histogram(hist, 2, 3)
    assert rows[-1] == ("more", 1.0, 4.5)
    # top 25% of 8 nodes = 2 nodes with attitudes 5 and 4 out of total 17
    assert top_share(hist, 0.25) == pytest.approx(9 / 17)
    assert top_share(np.zeros(3, int), 0.5) == 0.0


def test_sweep(capsys, tmp_path, fig1):
    out_csv = tmp_path / "sweep.csv"
    code, r, _ = run(capsys, "sweep", "--graph", fig1, "--k", 1, "--schemes", "0.1,indeg",
                     "--csv", out_csv, "--eps", 0.3)
    assert code == 0
    rows = list(csv.reader(out_csv.open()))
    assert rows[0] == ["scheme", "estimate", "elapsed_s"]
    assert [row[0] for row in rows[1:]] == ["const:0.1", "indeg"]


def test_sweep_empty(capsys, fig1):
    code, _, _ = run(capsys, "sweep", "--graph", fig1, "--k", 1, "--schemes", "")
    assert code == 2


def test_out_file_and_idmap(capsys, tmp_path, tri):
    out, ids = tmp_path / "r.json", tmp_path / "ids.tsv"
    code, _, _ = run(capsys, "exact", "--graph", tri, "--seeds", "a", "--out", out,
                     "--idmap", ids)
    assert code == 0
    jsonschema.validate(json.loads(out.read_text()), SCHEMA)
    assert ids.read_text().splitlines()[0] == "a\t0"


def test_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "exact", "--graph", tmp_path / "nope.txt")
    assert code == 2


def test_malformed_file(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("a b\nc\n")
    code, _, err = run(capsys, "exact", "--graph", bad)
    assert code == 2 and ":2:" in err


def test_docs_schema_matches_package():
    from pathlib import Path
    docs = Path(__file__).resolve().parents[1] / "docs" / "report.schema.json"
    assert json.loads(docs.read_text()) == SCHEMA
