from __future__ import annotations

import json

import pytest

from eulerweft import corpus
from eulerweft.gf2 import BitMatrix


def test_shipped_expected_files_are_current(tmp_path):
    for path in corpus.regenerate(tmp_path):
        name = path.name.removesuffix(".expected.json")
        assert json.loads(path.read_text()) == corpus.expected(name), name


def test_triangle_fixture():
    assert corpus.files("triangle") == ["triangle.graph", "triangle.expected.json"]
    assert corpus.expected("triangle")["E"] == [1, 0, 0, 1]


def test_printed_matrices():
    h31 = corpus.load("h-sec31").h
    assert h31 == BitMatrix.from_rows([[1, 1, 1], [0, 0, 1], [0, 1, 1], [1, 0, 0], [1, 1, 1], [1, 1, 0]])
    h41 = corpus.load("h-sec41").h
    assert h41.shape == (8, 6)
    assert corpus.printed_incidence() == BitMatrix.from_rows(
        [[1, 0, 0, 1, 0, 0], [0, 1, 0, 0, 1, 0], [0, 0, 1, 0, 1, 1], [1, 1, 1, 1, 0, 0]])


def test_cube_fixture_has_only_even_eulerian_subgraphs():
    coeffs = corpus.expected("q3")["E"]
    assert all(c == 0 for c in coeffs[1::2])
    assert corpus.expected("q3")["euler_lifts"] == 0


def test_unknown_fixture():
    with pytest.raises(KeyError):
        corpus.load("nope")
