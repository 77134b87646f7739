"""Bundled example fixtures and their expected outputs.

Each fixture is one input file (graph, H-matrix, Ising instance or rotation)
plus ``<name>.expected.json``.  :func:`regenerate` recomputes every expected
file from the library so the test suite can diff the shipped copies.
"""

from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path
from typing import Any

from ..circuit import parse_circuit, validate
from ..enumerators import eulerian_genfunc, signed_genfunc
from ..gf2 import parse_matrix
from ..graphs import (count_euler_lifts, euler_condition_poly, graph_from_circuit,
                      incidence_matrix, parse_graph)
from ..ising import max_relative_deviation, parse_instance, partition_all
from ..pauli import PauliWord

FIXTURES: dict[str, str] = {
    "triangle": "triangle.graph",
    "c4": "c4.graph",
    "bowtie": "bowtie.graph",
    "q3": "q3.graph",
    "h-sec31": "h-sec31.h",
    "h-sec41": "h-sec41.h",
    "k3-ferro": "k3-ferro.ising",
    "k3-frustrated": "k3-frustrated.ising",
    "sign-flip": "sign-flip.rot",
}


def _kind(name: str) -> str:
    return FIXTURES[name].rsplit(".", 1)[1]


def _root():
    return resources.files(__name__)


def names() -> list[str]:
    return sorted(FIXTURES)


def read_text(name: str) -> str:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(names())}")
    return (_root() / FIXTURES[name]).read_text()


def files(name: str) -> list[str]:
    """File names making up a fixture (input first)."""
    out = [FIXTURES[name]]
    if name == "h-sec41":
        out.append("h-sec41.incidence")
    out.append(f"{name}.expected.json")
    return out


def parse_rotation(text: str) -> tuple[PauliWord, float]:
    for line in text.splitlines():
        s = line.split("#", 1)[0].strip()
        if s:
            word, theta = s.split()
            return PauliWord.from_string(word), float(theta)
    raise ValueError("empty rotation file")


def load(name: str):
    """Parse a fixture into its library object."""
    text = read_text(name)
    kind = _kind(name)
    if kind == "graph":
        return parse_graph(text)[0]
    if kind == "h":
        return parse_circuit(text)
    if kind == "ising":
        return parse_instance(text)
    return parse_rotation(text)


def printed_incidence(name: str = "h-sec41"):
    return parse_matrix((_root() / f"{name}.incidence").read_text())[0]


def _round(x: float) -> float:
    return float(f"{x:.12g}")


def expected_output(name: str) -> dict[str, Any]:
    obj = load(name)
    kind = _kind(name)
    if kind == "graph":
        return {
            "vertices": obj.vertex_count,
            "edges": obj.edge_count,
            "E": list(eulerian_genfunc(obj).trimmed()),
            "euler_lifts": count_euler_lifts(obj),
        }
    if kind == "h":
        rep = validate(obj, graph_restricted=True)
        return {
            "words": [str(w) for w in obj.words],
            "valid": rep.valid,
            "graph_restricted": rep.graph_restricted,
            "incidence": incidence_matrix(graph_from_circuit(obj)).to_lists(),
            "euler_condition": euler_condition_poly(obj),
            "Eprime": list(signed_genfunc(obj).coeffs),
        }
    if kind == "ising":
        values = partition_all(obj)
        return {
            "Z": {k: _round(v) for k, v in sorted(values.items())},
            "max_relative_deviation_below_1e-9": max_relative_deviation(values.values()) < 1e-9,
        }
    word, theta = obj
    # exp(-i theta/2 P) on a diagonal word: phase exp(-i theta/2 (-1)^{z.v}) per basis state
    diag = []
    for v in range(1 << word.n):
        sign = -1 if bin(word.z & _reverse(v, word.n)).count("1") % 2 else 1
        ang = -sign * theta / 2
        diag.append([_round(math.cos(ang)), _round(math.sin(ang))])
    return {"word": str(word), "theta": theta, "diagonal": diag}


def _reverse(v: int, n: int) -> int:
    """Basis index (qubit 0 = MSB) to qubit mask (qubit 0 = bit 0)."""
    return int(format(v, f"0{n}b")[::-1], 2) if n else 0


def dumps(payload: dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def expected(name: str) -> dict[str, Any]:
    return json.loads((_root() / f"{name}.expected.json").read_text())


def regenerate(directory: str | Path) -> list[Path]:
    """Write every ``<name>.expected.json`` into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name in names():
        path = directory / f"{name}.expected.json"
        path.write_text(dumps(expected_output(name)))
        out.append(path)
    return out


def export(name: str, directory: str | Path) -> list[Path]:
    """Copy a fixture's files into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for fname in files(name):
        path = directory / fname
        path.write_text((_root() / fname).read_text())
        out.append(path)
    return out


__all__ = ["FIXTURES", "names", "load", "read_text", "files", "expected", "expected_output",
           "regenerate", "export", "printed_incidence", "parse_rotation"]
