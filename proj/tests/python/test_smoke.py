import json
import os
import subprocess

import pytest

import stochmatch as sm


def small_spec(**kw):
    spec = sm.default_spec()
    spec["graph"]["generator"] = "er:8:12:1:10"
    spec["sparsifier"]["epsilon"] = "19/20"
    spec["sparsifier"]["N_q"] = 200
    spec["sparsifier"]["N_opt"] = 200
    spec["sparsifier"]["R_override"] = 4
    spec["T_eval"] = 50
    spec.update(kw)
    return spec


def test_version():
    assert sm.__version__ == "0.1.0"


def test_graph_round_trip():
    g = sm.parse_graph("3 2\n0 1 1.5\n1 2 2\n")
    assert (g.n, g.m) == (3, 2)
    assert g.weight(0) == 1.5
    assert g.edges()[1] == (1, 2, 2 * g.denominator)
    h = sm.parse_graph(g.to_text())
    assert h.edges() == g.edges()


def test_bad_graph_text():
    with pytest.raises(sm.ParseError):
        sm.parse_graph("2 1\n0 1 -1\n")


def test_mwm_path():
    g = sm.Graph(4, [(0, 1, 1), (1, 2, 3), (2, 3, 1)], denominator=1)
    edges, weight = sm.mwm(g)
    assert edges == [1] and weight == 3.0
    edges, weight = sm.mwm(g, [0, 2])
    assert edges == [0, 2] and weight == 2.0


def test_generate_is_deterministic():
    a = sm.generate_graph("er:10:15:1:5", seed=3)
    b = sm.generate_graph("er:10:15:1:5", seed=3)
    assert a.edges() == b.edges() and a.m == 15


def test_sparsify_report():
    r = sm.sparsify(small_spec())
    assert r["command"] == "sparsify"
    t = r["trials"][0]
    assert t["Q_size"] <= t["m"]
    assert r["config"]["sparsifier"]["epsilon"] == "19/20"


def test_audit_passes_hard_criteria():
    r = sm.audit(small_spec(trials=2))
    hard = [c for c in r["criteria"] if c["hard"]]
    assert hard and all(c["passed"] for c in hard)


def test_ratio_sweep_points():
    r = sm.ratio_sweep(small_spec(R_values=[1, 8]))
    assert [p["R"] for p in r["sweep"]] == [1, 8]
    assert all(p["dominated"] for p in r["sweep"])


def test_unknown_key_rejected():
    with pytest.raises(sm.ParseError):
        sm.audit(small_spec(bogus=1))


def test_matches_cli(tmp_path):
    cli = os.environ.get("STOCHMATCH_CLI")
    if not cli:
        pytest.skip("CLI path not provided")
    spec = small_spec(trials=1)
    cfg = tmp_path / "spec.json"
    cfg.write_text(json.dumps(spec))
    out = subprocess.run([cli, "audit", "--config", str(cfg), "--no-timestamps"],
                         capture_output=True, text=True, check=True).stdout
    assert json.loads(out)["trials"] == sm.audit(spec)["trials"]
