import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qnet.cli import main
from qnet.dynamics import Coin, MergeSplit, ParticleStep, StateSwap, Toggle
from qnet.formats import (ParseError, RunConfig, format_graph, format_name, operator_from_json,
                          operator_to_json, parse_graph, parse_name, parse_operator, parse_restriction,
                          parse_universe, state_from_json, state_to_json)
from qnet.graphs import enumerate_universe
from qnet.hilbert import IDENTITY, OperatorMatrix, Product, ket
from qnet.names import Join, Leaf

U = enumerate_universe()
graphs = st.sampled_from(U.graphs)

PAIR = ["check", "trace-trace", "--zeta", "zeta(v=1)", "--chi", "disk(zeta(v=1),r=1,oriented=false)"]


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# parsing ---------------------------------------------------------------------------

def test_parse_name_examples():
    assert parse_name("(2|4)") == Join(Leaf(2), Leaf(4))
    assert parse_name("(2|4).l") == Leaf(2)
    assert parse_name("∸3.lr") == Leaf(-3, "lr")
    assert format_name(parse_name("(3.l|3.r)")) == "3"


@given(graphs)
def test_graph_roundtrip(g):
    assert parse_graph(format_graph(g)) == g


def test_graph_text_is_sorted():
    assert format_graph(parse_graph("{b.2, a.1}")) == "{a.1, b.2}"


@pytest.mark.parametrize("text, line, column", [
    ("(2|", 1, 4),
    ("(2 4)", 1, 4),
    ("2.x", 1, 3),
])
def test_name_parse_errors(text, line, column):
    with pytest.raises(ParseError) as e:
        parse_name(text)
    assert (e.value.line, e.value.column) == (line, column)
    assert e.value.expected


def test_parse_error_on_second_line():
    with pytest.raises(ParseError) as e:
        parse_graph("{a.1,\n b.?}")
    assert e.value.line == 2 and e.value.column == 4


def test_graph_parse_rejects_overlap():
    with pytest.raises(ValueError):
        parse_graph("{a.2, b.2.l}")


def test_parse_operator_products():
    op = parse_operator("Hq(phi=pi/3)*M*C(theta=pi/5)")
    assert isinstance(op, Product)
    hq, m, c = op.ops
    assert isinstance(hq, MergeSplit) and abs(hq.phi - np.pi / 3) < 1e-15
    assert isinstance(m, ParticleStep)
    assert isinstance(c, Coin) and abs(c.theta - np.pi / 5) < 1e-15
    assert parse_operator("I") is IDENTITY
    assert isinstance(parse_operator("tau"), Toggle)
    sw = parse_operator("Swap(1, 3)")
    assert isinstance(sw, StateSwap) and (sw.a, sw.b) == (1, 3)
    assert abs(parse_operator("C(0.5)").theta - 0.5) < 1e-15


@pytest.mark.parametrize("text", ["Q", "C", "C(phi=1)", "C(theta=__import__)", "M*"])
def test_parse_operator_errors(text):
    with pytest.raises(ParseError):
        parse_operator(text)


def test_parse_universe():
    assert len(parse_universe("keys=2,depth=1,sigma=2,maxnodes=2")) == 257
    assert len(parse_universe("chain=3")) == 125
    assert len(parse_universe("chain=2,ancilla=1")) == 81
    with pytest.raises(ParseError):
        parse_universe("chain=3,colour=red")


@pytest.mark.parametrize("text", ["zeta(v=1)", "disk(zeta(v=(1|-2)),r=2,oriented=true)", "full", "empty",
                                  "union(pointwise(state=0),namewise(S={1, 2.l}))", "not(ancilla(b=0))"])
def test_restriction_literals(text):
    r = parse_restriction(text)
    assert parse_restriction(str(r)) == r


def test_restriction_parse_error():
    with pytest.raises(ParseError) as e:
        parse_restriction("disk(zeta(v=1),r=)")
    assert e.value.column > 1


def test_json_roundtrips():
    g, h = U[3], U[9]
    psi = ket(g) * (0.5 + 0.25j) + ket(h) * -1
    assert state_from_json(state_to_json(psi)).close_to(psi, 0)
    a = OperatorMatrix({(g, h): 1j, (h, h): 0.5})
    assert operator_from_json(operator_to_json(a)).close_to(a, 0)


def test_config_roundtrip(tmp_path):
    cfg = RunConfig(universe="chain=2", laws=["L2"], seed=7, np_only=True)
    p = tmp_path / "c.json"
    p.write_text(json.dumps(cfg.to_json()))
    assert RunConfig.load(str(p)) == cfg
    with pytest.raises(ValueError):
        RunConfig.from_json({"bogus": 1})


# CLI ---------------------------------------------------------------------------

def test_check_law_passes(capsys):
    code, out, _ = run(capsys, ["check", "L2"])
    assert code == 0
    rep = json.loads(out)["reports"][0]
    assert rep["status"] == "PASS" and rep["satisfied"] > 0


def test_trace_pair_witness(capsys):
    code, out, _ = run(capsys, PAIR)
    assert code == 1
    rep = json.loads(out)["reports"][0]
    assert rep["comprehension"] == "FAIL"
    w = rep["witness"]
    assert w["max_entry_difference"] > 0.1
    assert len(w["rho"]["support"]) == 2


def test_trace_pair_np_only(capsys):
    code, out, _ = run(capsys, PAIR + ["--np-only"])
    assert code == 0
    assert json.loads(out)["reports"][0]["status"] == "PASS"


def test_checker_commands(capsys):
    code, out, _ = run(capsys, ["check", "unitary", "--universe", "chain=3", "--op", "M"])
    assert code == 0
    code, out, _ = run(capsys, ["check", "causal", "--universe", "chain=3", "--op", "I", "--np-only",
                                "--chi", "disk(zeta(v=(1|-2)),r=2,oriented=false)",
                                "--zeta", "disk(zeta(v=(1|-2)),r=1,oriented=false)"])
    assert code == 0
    code, out, _ = run(capsys, ["check", "causal", "--universe", "chain=3", "--op", "I",
                                "--chi", "disk(zeta(v=(1|-2)),r=2,oriented=false)",
                                "--zeta", "disk(zeta(v=(1|-2)),r=1,oriented=false)"])
    assert code == 1
    assert json.loads(out)["checks"][0]["witness"]["G"]


def test_evolve(capsys):
    code, out, _ = run(capsys, ["evolve", "--op", "M", "--init", "[R,e,e]", "--steps", "2"])
    assert code == 0
    traj = json.loads(out)["trajectory"]
    assert len(traj) == 3
    assert all(abs(t["norm"] - 1) < 1e-12 for t in traj)
    last = state_from_json(traj[-1])
    assert last.close_to(ket(parse_graph("{e.(1|-2), e.(2|-3), R.(3|-4)}")))


def test_evolve_support_escape(capsys):
    code, _, err = run(capsys, ["evolve", "--op", "M", "--init", "[R,e,e]", "--universe", "chain=2"])
    assert code == 4 and "SupportEscape" in err


def test_decompose(capsys):
    code, out, _ = run(capsys, ["decompose", "--op", "C(theta=pi/5)", "--chain", "2", "--ancilla"])
    assert code == 0
    d = json.loads(out)
    assert d["residual"] <= 1e-9 and "timings" not in d
    code, _, err = run(capsys, ["decompose", "--op", "Swap(1,3)", "--chain", "3", "--ancilla"])
    assert code == 4 and "PreconditionFailed" in err
    code, _, _ = run(capsys, ["decompose", "--op", "I", "--chain", "2", "--no-ancilla"])
    assert code == 0


def test_edges_and_normalize(capsys):
    code, out, _ = run(capsys, ["edges", "{white.((3.l|8.rl)|-2), black.(2|4)}"])
    assert code == 0
    assert json.loads(out)["edges"] == [["((3.l|8.rl)|-2)", "(2|4)"]]
    code, out, _ = run(capsys, ["normalize", "((3.l|8.rl)|-2).r", "(3.l|3.r)"])
    assert code == 0 and out.split() == ["-2", "3"]


@pytest.mark.parametrize("argv", [[], ["check", "nonsense"], ["frobnicate"], ["normalize", "(2|"],
                                  ["decompose", "--op", "I"], ["check", "L2", "--universe", "colour=1"]])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, argv)
    assert code == 2


def test_parse_error_reports_position(capsys):
    code, _, err = run(capsys, ["normalize", "(2|"])
    d = json.loads(err)
    assert d["error"] == "ParseError" and d["line"] == 1 and d["column"] == 4 and d["expected"]


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("QNET_SEED", "41")
    code, out, _ = run(capsys, ["check", "L2", "--seed", "3"])
    assert code == 0 and json.loads(out)["seed"] == 41
    monkeypatch.setenv("QNET_SEED", "x")
    code, _, _ = run(capsys, ["check", "L2"])
    assert code == 2


def test_replay_is_byte_identical(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("QNET_SEED", raising=False)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["check", "traceout", "--samples", "10", "--seed", "5"]
    assert run(capsys, argv + ["--out", str(a)])[0] == 0
    assert run(capsys, argv + ["--out", str(b)])[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_saved_config_replays(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("QNET_SEED", raising=False)
    cfg = tmp_path / "cfg.json"
    first, second = tmp_path / "1.json", tmp_path / "2.json"
    assert run(capsys, ["check", "L3", "--seed", "9", "--out", str(first), "--save-config", str(cfg)])[0] == 0
    saved = json.loads(cfg.read_text())
    assert saved["seed"] == 9 and saved["laws"] == ["L3"]
    assert run(capsys, ["check", "--config", str(cfg), "--out", str(second)])[0] == 0
    assert first.read_bytes() == second.read_bytes()


def test_config_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"bogus": 1}')
    assert run(capsys, ["check", "--config", str(bad)])[0] == 2
    assert run(capsys, ["check", "--config", str(tmp_path / "missing.json")])[0] == 2
