from __future__ import annotations

import json
import math
import subprocess
import sys

import pytest

from eulerweft import corpus
from eulerweft.cli import main, parse_text_output

ROOT = corpus._root()


def fx(name: str) -> str:
    return str(ROOT / corpus.FIXTURES[name])


def run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv) -> dict:
    code, out, _ = run(capsys, *argv, "--output", "json")
    assert code == 0
    return json.loads(out)


def test_ising_all_agrees(capsys):
    data = run_json(capsys, "ising", "all", fx("k3-ferro"))
    assert set(data["Z"]) == {"direct", "vdw", "qwgt"}
    assert data["max_relative_deviation"] < 1e-9
    assert data["Z"]["direct"] == pytest.approx(2 * math.e ** 3 + 6 / math.e)


def test_circuit_show_lists_h31_gates(capsys):
    data = run_json(capsys, "circuit", "show", fx("h-sec31"), "--lambda", "0.75", "--form", "paper")
    assert [g["pauli_string"] for g in data["gates"]] == ["Z⊗X⊗Y", "Z⊗Z⊗Y", "Y⊗Z⊗Z"]
    assert [g["index"] for g in data["gates"]] == [1, 2, 3]
    assert data["gates"][0]["angle"] == pytest.approx(2 * math.asin(0.8))


def test_from_circuit_gives_printed_incidence(capsys):
    data = run_json(capsys, "graph", "from-circuit", fx("h-sec41"))
    assert data["incidence"] == corpus.printed_incidence().to_lists()
    code, text, _ = run(capsys, "graph", "from-circuit", fx("h-sec41"))
    assert code == 0 and "1 1 1 1 0 0" in text


@pytest.mark.parametrize("argv", [
    ["ising", "all", "k3-frustrated"],
    ["eval", "e", "bowtie", "--lambda", "0.5"],
    ["eval", "eprime", "h-sec41", "--lambda", "0.5"],
    ["sim", "amplitude", "h-sec31", "--lambda", "0.5"],
    ["sim", "expansion", "h-sec31", "--lambda", "0.5", "--form", "paper"],
    ["sim", "hadamard", "h-sec31", "--lambda", "0.5", "--seed", "9"],
    ["sim", "decision", "h-sec31", "--lambda", "0.5", "--decision-qubit", "2"],
    ["circuit", "validate", "h-sec41", "--graph-restricted"],
    ["graph", "euler-check", "h-sec31", "--exhaustive"],
    ["graph", "euler-search", "c4", "--strategy", "linear"],
    ["circuit", "angle", "--lambda", "1.3333333333333333"],
])
def test_json_round_trips_through_text(capsys, argv):
    argv = [fx(a) if a in corpus.FIXTURES else a for a in argv]
    code, text, _ = run(capsys, *argv)
    assert code == 0
    data = run_json(capsys, *argv)
    assert parse_text_output(text) == data


def test_seeded_output_is_byte_identical(capsys):
    argv = ["sim", "hadamard", fx("h-sec31"), "--lambda", "0.5", "--seed", "4", "--output", "json"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    argv[6] = "5"
    _, c, _ = run(capsys, *argv)
    assert json.loads(c)["seed"] == 5 and json.loads(c)["p0"] == json.loads(a)["p0"]


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "sim", "amplitude", fx("h-sec31"))[0] == 1  # missing --lambda
    assert run(capsys, "circuit", "show", str(tmp_path / "missing.h"))[0] == 2
    bad = tmp_path / "bad.h"
    bad.write_text("3 1\n1\n1\n0\n")  # odd row count
    assert run(capsys, "circuit", "validate", str(bad))[0] == 2
    even = tmp_path / "even.h"
    even.write_text("2 1\n0\n1\n")  # a lone X: even Y-count
    code, out, _ = run(capsys, "circuit", "validate", str(even))
    assert code == 2 and "even Y-count" in out
    assert run(capsys, "sim", "amplitude", fx("h-sec31"), "--lambda", "-1")[0] == 2
    assert run(capsys, "graph", "euler-search", fx("q3"), "--budget", "50")[0] == 3
    code, _, err = run(capsys, "eval", "e", fx("q3"), "--cap", "2")
    assert code == 3 and "override" in err
    assert run(capsys, "eval", "e", fx("q3"), "--cap", "2", "--cap-override")[0] == 0


def test_graph_to_circuit_and_back(capsys, tmp_path):
    code, text, _ = run(capsys, "graph", "to-circuit", fx("triangle"), "--y", "1,2,3")
    assert code == 0
    h = tmp_path / "k3.h"
    h.write_text(text)
    assert run_json(capsys, "graph", "euler-check", str(h))["euler_condition"] is True
    data = run_json(capsys, "graph", "from-circuit", str(h))
    assert data["edges"] == [[1, 2], [2, 3], [1, 3]]


def test_eval_qwgt_and_multi(capsys, tmp_path):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    a.write_text("1 3\n1 1 0\n")
    b.write_text("3 3\n0 0 0\n1 0 0\n0 0 1\n")
    data = run_json(capsys, "eval", "qwgt", str(a), str(b), "--x", "0.5")
    # kernel {000, 110, 001, 111}; signs +, -, -, +
    assert data["coeffs"] == [1, -1, -1, 1]
    assert data["value_at"]["value"] == pytest.approx(1 - 0.5 - 0.25 + 0.125)
    data = run_json(capsys, "eval", "multi", fx("triangle"), "--weights", "0.5,0.5,2")
    assert data["value"] == pytest.approx(1.5)


def test_corpus_commands(capsys, tmp_path):
    data = run_json(capsys, "corpus", "list")
    assert "h-sec41.incidence" in data["fixtures"]["h-sec41"]
    data = run_json(capsys, "corpus", "show", "triangle")
    assert data["expected"]["E"] == [1, 0, 0, 1]
    code, text, _ = run(capsys, "corpus", "show", "h-sec31")
    assert code == 0 and text.startswith("# qubits=3")
    data = run_json(capsys, "corpus", "export", "all", str(tmp_path))
    assert len(data["written"]) == 2 * len(corpus.FIXTURES) + 1


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "eulerweft.cli", "circuit", "angle", "--lambda", "1",
                          "--output", "json"], capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["theta"] == pytest.approx(math.pi / 2)
