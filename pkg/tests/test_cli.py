import io
import json
import subprocess
import sys

import pytest

from idealforge.cli import run
from idealforge.poset import parse_poset
from idealforge.topology import example_topology, format_topology, parse_topology

M_SLICE = {"7": 4, "19": 6, "29": 7, "32": 5, "35": 7}


def call(capsys, monkeypatch, argv, stdin=""):
    monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_construct_singles_105(capsys, monkeypatch):
    code, out, _ = call(capsys, monkeypatch, ["construct", "105", "--strategy", "singles"])
    assert code == 0
    assert out.startswith("poset 9\n")
    assert "# j = 105\n" in out
    assert parse_poset(out).n == 9


def test_construct_count_round_trip(capsys, monkeypatch):
    for k in [2, 3, 71, 105, 5550, 65535, 2**64 - 59]:
        _, text, _ = call(capsys, monkeypatch, ["construct", str(k)])
        code, out, _ = call(capsys, monkeypatch, ["count", "-"], text)
        assert code == 0 and out.strip() == str(k)


@pytest.mark.parametrize("method", ["brute", "elim", "antichain"])
def test_count_two_chain(capsys, monkeypatch, method):
    code, out, _ = call(capsys, monkeypatch, ["count", "-", "--method", method], "poset 2\n0 < 1\n")
    assert code == 0 and out == "3\n"


def test_construct_trace_and_dot(capsys, monkeypatch, tmp_path):
    dot = tmp_path / "p.dot"
    code, out, _ = call(capsys, monkeypatch, ["construct", "5550", "--strategy", "doubles",
                                              "--trace", "--dot", str(dot)])
    assert code == 0
    assert "# step" in out and "# strategy = doubles" in out
    assert dot.read_text().startswith("digraph P5550 {")


def test_construct_min_nbhd(capsys, monkeypatch):
    code, out, _ = call(capsys, monkeypatch, ["construct", "19", "--min-nbhd", "2"])
    assert code == 0
    t = parse_topology(out)
    assert min(u.bit_count() for u in t.min_open) >= 2


def test_search_json(capsys, monkeypatch):
    code, out, _ = call(capsys, monkeypatch, ["search", "--max-n", "7", "--json", "-"])
    data = json.loads(out)
    assert code == 0 and data["certified_to"] == 7
    assert {k: data["m"][k] for k in M_SLICE} == M_SLICE
    assert data["f"]["7"] == 47


def test_search_text_and_guard(capsys, monkeypatch):
    code, out, _ = call(capsys, monkeypatch, ["search", "--max-n", "5"])
    assert code == 0 and "f(n): 1:3, 2:5, 3:7, 4:11, 5:19" in out
    code, _, err = call(capsys, monkeypatch, ["search", "--max-n", "10"])
    assert code == 1 and "--extended" in err


def test_sequences(capsys, monkeypatch):
    code, out, _ = call(capsys, monkeypatch, ["sequences", "--limit", "100", "--json"])
    rows = json.loads(out)
    assert code == 0
    assert [r["k"] for r in rows if r["m"] != r["a"]] == [71]
    code, out, _ = call(capsys, monkeypatch, ["sequences", "--limit", "30", "--max-n", "7"])
    assert code == 0 and "m!=a" not in out


def test_verify(capsys, monkeypatch):
    code, out, _ = call(capsys, monkeypatch, ["verify", "--seed", "5"])
    assert code == 0
    assert out.strip().endswith("5/5 checks passed (seed 5)")


def test_collapse(capsys, monkeypatch):
    code, out, _ = call(capsys, monkeypatch, ["collapse", "-"], format_topology(example_topology()))
    assert code == 0
    assert out.startswith("top 7\n")
    assert "# classes = 0 1 2 3 4 5 6 6" in out


@pytest.mark.parametrize("argv", [[], ["bogus"], ["construct"], ["construct", "x"],
                                  ["construct", "5", "--strategy", "nope"], ["search", "--max-n", "11"],
                                  ["count", "-", "--method", "magic"], ["construct", "5", "--min-nbhd", "0"]])
def test_usage_errors_exit_2(capsys, monkeypatch, argv):
    code, _, err = call(capsys, monkeypatch, argv)
    assert code == 2 and "usage" in err


@pytest.mark.parametrize("argv,stdin", [(["construct", "0"], ""), (["construct", "20", "--strategy", "pattern"], ""),
                                        (["count", "-"], "poset 2\n0 < 1\n1 < 0\n"),
                                        (["count", "/nonexistent/file"], ""),
                                        (["collapse", "-"], "top 1\n0 : 1\n"),
                                        (["sequences", "--limit", "20000"], "")])
def test_domain_errors_exit_1(capsys, monkeypatch, argv, stdin):
    code, _, err = call(capsys, monkeypatch, argv, stdin)
    assert code == 1 and err.startswith("error:")


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "idealforge", "construct", "65535"],
                         capture_output=True, text=True, check=True).stdout
    assert "# j = 65535" in out and int(out.split()[1]) <= 19
