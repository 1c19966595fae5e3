import csv
import io
import json

import pytest

from cliquechrom import cli
from cliquechrom.coloring import is_valid_clique_coloring, parse_coloring
from cliquechrom.graph_core import parse_edge_list
from cliquechrom.harness import (
    CSV_HEADER,
    LEMMAS,
    SweepConfig,
    default_sweep_config,
    probe_conjecture,
    run_sweep,
    verify_lemma,
    write_csv,
)


def body(text):
    return text.split("\n", 1)[1]


def test_config_validation():
    with pytest.raises(ValueError):
        SweepConfig(n=[30], p=[0.2], algorithms=[])
    with pytest.raises(ValueError):
        SweepConfig(n=[], p=[0.2], algorithms=["greedy"])
    with pytest.raises(ValueError):
        SweepConfig(n=[30], p=[0.2], x=[0.5], algorithms=["greedy"])
    with pytest.raises(ValueError):
        SweepConfig(n=[30], p=[0.2], algorithms=["magic"])
    with pytest.raises(ValueError):
        SweepConfig(n=[30], p=[0.2], algorithms=["greedy"], trials=0)
    with pytest.raises(ValueError):
        SweepConfig.from_dict({"n": [30], "p": [0.2], "algorithms": ["greedy"], "bogus": 1})


def test_config_json_round_trip():
    cfg = default_sweep_config()
    again = SweepConfig.from_json(cfg.to_json())
    assert again == cfg
    assert len(cfg.points()) == 18


def test_small_sweep_example():
    cfg = SweepConfig(n=[30], p=[0.2], algorithms=["exact", "greedy", "dominating"], trials=5, seed=3)
    rows = run_sweep(cfg)
    assert len(rows) == 15
    assert all(r.valid and r.error == "" for r in rows)
    for t in range(5):
        chunk = rows[3 * t:3 * t + 3]
        exact = [r for r in chunk if r.algorithm == "exact"][0]
        assert all(exact.palette <= r.palette for r in chunk)
        assert len({r.seed for r in chunk}) == 1
    assert all(r.ratio > 0 for r in rows)


def test_exact_added_for_small_n():
    rows = run_sweep(SweepConfig(n=[20], p=[0.3], algorithms=["greedy"], seed=1))
    assert [r.algorithm for r in rows] == ["exact", "greedy"]


def test_mid_p_dropped_outside_window():
    rows = run_sweep(SweepConfig(n=[200], x=[0.6], algorithms=["greedy", "mid_p"], seed=1))
    assert [r.algorithm for r in rows] == ["greedy"]


def test_csv_format_and_determinism():
    cfg = SweepConfig(n=[40, 120], x=[0.4, 0.5], algorithms=["greedy", "dominating", "low_p"],
                      trials=2, seed=9)
    a, b = io.StringIO(), io.StringIO()
    run_sweep(cfg, out=a)
    run_sweep(cfg, out=b)
    assert a.getvalue().startswith("# cliquechrom sweep seed=9 generated=")
    assert body(a.getvalue()) == body(b.getvalue())
    table = list(csv.reader(io.StringIO(body(a.getvalue()))))
    assert tuple(table[0]) == CSV_HEADER
    assert all(len(row) == len(CSV_HEADER) for row in table)
    assert all(row[CSV_HEADER.index("runtime_ms")] == "" for row in table[1:])


def test_parallel_matches_serial_small():
    cfg = SweepConfig(n=[100], x=[0.4, 0.5], algorithms=["greedy", "low_p"], trials=3, seed=2)
    serial = write_csv(run_sweep(cfg), io.StringIO(), cfg)
    cfg.workers = 3
    parallel = write_csv(run_sweep(cfg), io.StringIO(), cfg)
    assert body(serial) == body(parallel)


def test_verify_lemma_unknown():
    with pytest.raises(ValueError):
        verify_lemma("no-such-lemma")
    assert "crux" in LEMMAS


def test_verify_lemma_quick_runs():
    rep = verify_lemma("crux", {"graphs": 10}, seed=1)
    assert rep.passed and rep.failures == 0 and rep.checked > 0
    rep = verify_lemma("xs-dominates", {"n": 5, "random": 200, "x": [1]}, seed=1)
    assert rep.passed and rep.failures == 0
    rep = verify_lemma("xs-expectation", {"trials": 300}, seed=2)
    assert rep.passed
    assert set(rep.as_dict()) >= {"name", "checked", "failures", "passed"}


def test_probe_conjecture():
    with pytest.raises(ValueError):
        probe_conjecture(1000, [])
    rows = probe_conjecture(1000, [0.05], seed=1)
    assert len(rows) == 1
    assert rows[0]["ratio_scale"] > 0


def test_cli_gen_and_color(tmp_path, capsys):
    g = tmp_path / "g.txt"
    assert cli.main(["gen", "--n", "40", "--p", "0.2", "--seed", "3", "--out", str(g)]) == 0
    G = parse_edge_list(g.read_text())
    assert G.n == 40
    out = tmp_path / "c.txt"
    for algo in ("greedy", "dominating", "low_p", "exact"):
        assert cli.main(["color", "--in", str(g), "--p", "0.2", "--algo", algo, "--out", str(out)]) == 0
        assert is_valid_clique_coloring(G, parse_coloring(out.read_text())).valid


def test_cli_coupled_mid_p(tmp_path):
    lo, hi = tmp_path / "lo.txt", tmp_path / "hi.txt"
    assert cli.main(["gen", "--n", "3000", "--p", "0.045", "--coupled", "--out", str(lo),
                     "--out-high", str(hi)]) == 0
    out = tmp_path / "c.txt"
    assert cli.main(["color", "--in", str(lo), "--high", str(hi), "--p", "0.045",
                     "--algo", "mid_p", "--out", str(out)]) == 0
    G = parse_edge_list(lo.read_text())
    assert is_valid_clique_coloring(G, parse_coloring(out.read_text())).valid


def test_cli_predict_stats_verify(capsys):
    assert cli.main(["predict", "--n", "1e6", "--p", "0.001"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["regime"] == "chromatic"
    assert cli.main(["stats", "--n", "200", "--p", "0.05", "--s", "20", "--trials", "2", "--sets", "2"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 5
    assert cli.main(["verify", "crux", "--param", "graphs=5"]) == 0


def test_cli_sweep_and_probe(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": [30], "p": [0.2], "algorithms": ["greedy"], "trials": 2}))
    out = tmp_path / "rows.csv"
    assert cli.main(["sweep", str(cfg), "--out", str(out)]) == 0
    assert len(out.read_text().strip().splitlines()) == 2 + 4
    assert cli.main(["probe-conjecture", "--n", "500", "--p", "0.1"]) == 0


def test_cli_errors(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": [30], "p": [0.2], "algorithms": []}))
    assert cli.main(["sweep", str(cfg)]) == 2
    assert "error" in capsys.readouterr().err
