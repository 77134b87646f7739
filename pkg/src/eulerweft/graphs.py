"""Hypergraphs, incidence matrices, and the circuit <-> graph correspondence.

A graph edge is a 2-vertex set, a loop a 1-vertex set (a single 1 in its
incidence column, so a bare loop is never Eulerian), a hyperedge anything
larger.  Lifting a graph to a circuit puts the incidence structure into the X
bits of H and chooses the free Z bits: which incident vertex carries the Y of
each gate, and which non-incident qubits carry an extra Z.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .circuit import CircuitMatrix, ch_matrix, require_valid
from .errors import BudgetExhausted, FormatError, InvalidChoice, LengthMismatch
from .gf2 import (DEFAULT_CAP, BitMatrix, BitVector, check_cap, gray_walk, kernel_basis,
                  parity, rank, solve)
from .pauli import PauliWord

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Hypergraph:
    vertex_count: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        edges = []
        for e in self.edges:
            e = tuple(sorted(e))
            if not e:
                raise ValueError("empty edge")
            if len(set(e)) != len(e):
                raise ValueError(f"edge {e} repeats a vertex; write a loop as a single vertex")
            if e[0] < 0 or e[-1] >= self.vertex_count:
                raise ValueError(f"edge {e} outside 0..{self.vertex_count - 1}")
            edges.append(e)
        object.__setattr__(self, "edges", tuple(edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def is_graph(self) -> bool:
        """True when every edge is an ordinary edge or a loop."""
        return all(len(e) <= 2 for e in self.edges)

    def drop_isolated(self) -> "Hypergraph":
        used = sorted({v for e in self.edges for v in e})
        relabel = {v: i for i, v in enumerate(used)}
        return Hypergraph(len(used), tuple(tuple(relabel[v] for v in e) for e in self.edges))

    # small named graphs

    @classmethod
    def cycle(cls, n: int) -> "Hypergraph":
        return cls(n, tuple((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def complete(cls, n: int) -> "Hypergraph":
        return cls(n, tuple(itertools.combinations(range(n), 2)))

    @classmethod
    def path(cls, n: int) -> "Hypergraph":
        return cls(n, tuple((i, i + 1) for i in range(n - 1)))

    @classmethod
    def cube(cls, d: int = 3) -> "Hypergraph":
        edges = [(v, v | (1 << b)) for v in range(1 << d) for b in range(d) if not (v >> b) & 1]
        return cls(1 << d, tuple(edges))


def incidence_matrix(g: Hypergraph) -> BitMatrix:
    rows = [0] * g.vertex_count
    for k, e in enumerate(g.edges):
        for v in e:
            rows[v] |= 1 << k
    return BitMatrix.from_int_rows(rows, g.edge_count)


def graph_from_circuit(c: CircuitMatrix, keep_isolated: bool = False) -> Hypergraph:
    """Read the incidence structure off the X bits of H (the nonzero rows of CH)."""
    require_valid(c)
    edges = []
    for w in c.words:
        edges.append(tuple(i for i in range(c.n) if (w.x >> i) & 1))
    g = Hypergraph(c.n, tuple(edges))
    return g if keep_isolated else g.drop_isolated()


@dataclass(frozen=True)
class LiftChoice:
    """Free bits of a lift: per column, the Y-carrying vertices and extra Z vertices."""

    y_sets: tuple[tuple[int, ...], ...]
    z_masks: tuple[tuple[int, ...], ...] = ()

    @classmethod
    def from_positions(cls, y_positions: Sequence[int],
                       z_masks: Sequence[Sequence[int]] | None = None) -> "LiftChoice":
        zs = tuple(tuple(z) for z in z_masks) if z_masks is not None else ()
        return cls(tuple((y,) for y in y_positions), zs)

    def z_for(self, k: int) -> tuple[int, ...]:
        return self.z_masks[k] if self.z_masks else ()


def y_options(edge: Sequence[int]) -> list[tuple[int, ...]]:
    """Odd-size subsets of an edge, singletons first, lexicographic within a size."""
    return [s for r in range(1, len(edge) + 1, 2) for s in itertools.combinations(edge, r)]


def default_choice(g: Hypergraph) -> LiftChoice:
    return LiftChoice(tuple((e[0],) for e in g.edges))


def _mask(vs: Sequence[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def lift_to_circuit(g: Hypergraph, choice: LiftChoice) -> CircuitMatrix:
    if len(choice.y_sets) != g.edge_count:
        raise InvalidChoice(f"{len(choice.y_sets)} Y placements for {g.edge_count} edges")
    if choice.z_masks and len(choice.z_masks) != g.edge_count:
        raise InvalidChoice(f"{len(choice.z_masks)} Z masks for {g.edge_count} edges")
    words = []
    for k, e in enumerate(g.edges):
        ys = choice.y_sets[k]
        zs = choice.z_for(k)
        if not set(ys) <= set(e):
            raise InvalidChoice(f"column {k}: Y vertices {ys} not all incident to edge {e}")
        if len(set(ys)) % 2 == 0:
            raise InvalidChoice(f"column {k}: even number of Y vertices {ys}")
        if set(zs) & set(e):
            raise InvalidChoice(f"column {k}: Z mask {zs} meets edge {e}")
        if any(not 0 <= v < g.vertex_count for v in zs):
            raise InvalidChoice(f"column {k}: Z mask {zs} out of range")
        words.append(PauliWord(g.vertex_count, _mask(ys) | _mask(zs), _mask(e)))
    return CircuitMatrix.from_words(words, g.vertex_count)


# quadratic phase h_a = a^T L a with L the strictly lower part of H^T C H

@dataclass(frozen=True)
class PhaseForm:
    lower: BitMatrix
    diag: BitVector
    rows: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.lower.row_ints()))

    @property
    def N(self) -> int:
        return self.lower.rows

    def symmetric_rows(self) -> list[int]:
        """Rows of L + L^T (zero diagonal)."""
        return symmetrize(self.rows)


def symmetrize(rows: Sequence[int]) -> list[int]:
    """Rows of Q + Q^T."""
    sym = list(rows)
    for j, row in enumerate(rows):
        k = 0
        while row:
            if row & 1:
                sym[k] ^= 1 << j
            row >>= 1
            k += 1
    return sym


def _lower_rows(zs: Sequence[int], xs: Sequence[int]) -> list[int]:
    rows = []
    for j, zj in enumerate(zs):
        row = 0
        for k in range(j):
            if parity(zj & xs[k]):
                row |= 1 << k
        rows.append(row)
    return rows


def phase_form(c: CircuitMatrix) -> PhaseForm:
    words = c.words
    zs = [w.z for w in words]
    xs = [w.x for w in words]
    lower = BitMatrix.from_int_rows(_lower_rows(zs, xs), c.N)
    diag = BitVector.from_bits(parity(z & x) for z, x in zip(zs, xs))
    return PhaseForm(lower, diag)


def quadratic_value(rows: Sequence[int], a: int) -> int:
    """``a^T Q a`` over GF(2) for Q given by its rows."""
    h = 0
    j = 0
    bits = a
    while bits:
        if bits & 1:
            h ^= parity(rows[j] & a)
        bits >>= 1
        j += 1
    return h


def quad_phase(pf: PhaseForm, a: BitVector | int) -> int:
    if isinstance(a, BitVector):
        if a.length != pf.N:
            raise LengthMismatch(f"vector of length {a.length} for {pf.N} gates")
        a = a.bits
    return quadratic_value(pf.rows, a)


def sym_times(sym_rows: Sequence[int], v: int) -> int:
    out = 0
    for r, row in enumerate(sym_rows):
        if parity(row & v):
            out |= 1 << r
    return out


def form_vanishes_on_span(rows: Sequence[int], basis: Sequence[int]) -> bool:
    """True iff ``a^T Q a = 0`` for every a in span(basis).

    q(a + b) = q(a) + q(b) + a^T (Q + Q^T) b, so it suffices to check q on the
    basis and the polar form on basis pairs.
    """
    for v in basis:
        if quadratic_value(rows, v):
            return False
    images = [sym_times(symmetrize(rows), v) for v in basis]
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if parity(basis[i] & images[j]):
                return False
    return True


def euler_condition_poly(c: CircuitMatrix) -> bool:
    """Does h_a vanish on all of ker(CH)?  Polynomial time."""
    require_valid(c)
    kb = kernel_basis(ch_matrix(c))
    return form_vanishes_on_span(phase_form(c).rows, kb.ints())


def euler_condition_exhaustive(c: CircuitMatrix, cap: int | None = DEFAULT_CAP) -> bool:
    """Same question answered by scanning every kernel element."""
    require_valid(c)
    kb = kernel_basis(ch_matrix(c))
    check_cap(kb.free_count, cap)
    rows = phase_form(c).rows
    return all(quadratic_value(rows, a) == 0 for _, a in gray_walk(kb.ints()))


# search over lifts

def _z_options(nonincident: Sequence[int], z_cap: int) -> list[tuple[int, ...]]:
    return [s for r in range(0, min(z_cap, len(nonincident)) + 1)
            for s in itertools.combinations(nonincident, r)]


def _exhaustive_choices(g: Hypergraph, z_cap: int) -> Iterator[LiftChoice]:
    y_opts = [y_options(e) for e in g.edges]
    empty = tuple(() for _ in g.edges)
    for ys in itertools.product(*y_opts):
        yield LiftChoice(ys, empty)
    if z_cap <= 0:
        return
    z_opts = [_z_options([v for v in range(g.vertex_count) if v not in e], z_cap) for e in g.edges]
    for zs in itertools.product(*z_opts):
        if not any(zs):
            continue
        for ys in itertools.product(*y_opts):
            yield LiftChoice(ys, zs)


def _random_choices(g: Hypergraph, rng: np.random.Generator) -> Iterator[LiftChoice]:
    y_opts = [y_options(e) for e in g.edges]
    others = [[v for v in range(g.vertex_count) if v not in e] for e in g.edges]
    while True:
        ys = tuple(opts[rng.integers(len(opts))] for opts in y_opts)
        zs = tuple(tuple(v for v in pool if rng.random() < 0.5) for pool in others)
        yield LiftChoice(ys, zs)


def euler_lift_system(g: Hypergraph) -> tuple[BitMatrix, int]:
    """The Euler condition over all lifts of ``g`` as a GF(2) system ``M z = rhs``.

    Unknown ``z[j*n + v]`` is the Z bit of column j on qubit v.  Every entry
    of L is ``z_j . x_k`` with the X bits fixed by the graph, so h on a basis
    vector and the polar form on basis pairs are linear in z.  The odd-Y rule
    on each edge is the affine row ``sum over v in e of z[j*n + v] = 1``.
    """
    n, N = g.vertex_count, g.edge_count
    xs = [_mask(e) for e in g.edges]
    basis = kernel_basis(incidence_matrix(g)).ints()

    def prefix_x(v: int) -> list[int]:
        # out[j] = XOR of x_k over k < j with k in v
        out, acc = [], 0
        for j in range(N):
            out.append(acc)
            if (v >> j) & 1:
                acc ^= xs[j]
        return out

    def spread(coeffs: list[int]) -> int:
        row = 0
        for j, c in enumerate(coeffs):
            row |= c << (j * n)
        return row

    prefixes = [prefix_x(v) for v in basis]
    rows, rhs = [], []
    for j, e in enumerate(g.edges):
        rows.append(_mask(e) << (j * n))
        rhs.append(1)
    for i, v in enumerate(basis):
        rows.append(spread([prefixes[i][j] if (v >> j) & 1 else 0 for j in range(N)]))
        rhs.append(0)
    for i in range(len(basis)):
        for l in range(i + 1, len(basis)):
            u, v = basis[i], basis[l]
            coeffs = [(prefixes[l][j] if (u >> j) & 1 else 0) ^ (prefixes[i][j] if (v >> j) & 1 else 0)
                      for j in range(N)]
            rows.append(spread(coeffs))
            rhs.append(0)
    target = 0
    for r, b in enumerate(rhs):
        target |= b << r
    return BitMatrix.from_int_rows(rows, n * N), target


def _choice_from_z(g: Hypergraph, z: int) -> LiftChoice:
    n = g.vertex_count
    ys, zs = [], []
    for j, e in enumerate(g.edges):
        col = (z >> (j * n)) & ((1 << n) - 1)
        ys.append(tuple(v for v in e if (col >> v) & 1))
        zs.append(tuple(v for v in range(n) if (col >> v) & 1 and v not in e))
    return LiftChoice(tuple(ys), tuple(zs))


def count_euler_lifts(g: Hypergraph) -> int:
    """Number of lifts (Y placements and Z masks together) satisfying the Euler condition."""
    m, rhs = euler_lift_system(g)
    if solve(m, rhs) is None:
        return 0
    return 1 << (m.cols - rank(m))


def find_euler_circuit(g: Hypergraph, strategy: str = "exhaustive", budget: int | None = None,
                       seed: int | None = None, z_cap: int = 2) -> CircuitMatrix | None:
    """Search lifts of ``g`` for one satisfying the Euler condition.

    ``exhaustive`` tries every Y placement with no Z decorations, then every
    combination of Z masks of size <= ``z_cap``; it returns None only when
    that space is exhausted.  ``randomized`` draws uniform lifts (Z masks
    unrestricted).  Running out of ``budget`` trials raises BudgetExhausted
    in both modes.  ``linear`` decides the whole lift space at once by
    solving :func:`euler_lift_system`; it ignores budget and z_cap.
    """
    if strategy not in ("exhaustive", "randomized", "linear"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "linear":
        m, rhs = euler_lift_system(g)
        z = solve(m, rhs)
        return None if z is None else lift_to_circuit(g, _choice_from_z(g, z))
    if strategy == "randomized" and budget is None:
        raise ValueError("randomized search needs a budget")
    xs = [_mask(e) for e in g.edges]
    basis = kernel_basis(incidence_matrix(g)).ints()
    if strategy == "exhaustive":
        choices = _exhaustive_choices(g, z_cap)
    else:
        choices = _random_choices(g, np.random.default_rng(seed))
    trials = 0
    for choice in choices:
        if budget is not None and trials >= budget:
            raise BudgetExhausted(f"no Euler lift in {trials} trials")
        trials += 1
        zs = [_mask(ys) | _mask(choice.z_for(k)) for k, ys in enumerate(choice.y_sets)]
        if not basis or form_vanishes_on_span(_lower_rows(zs, xs), basis):
            log.debug("Euler lift found after %d trials", trials)
            return lift_to_circuit(g, choice)
    log.debug("search space exhausted after %d trials", trials)
    return None


# text format: "v <count>", then one edge per line as 1-based vertex indices

def format_graph(g: Hypergraph) -> str:
    lines = [f"v {g.vertex_count}"]
    lines += [" ".join(str(v + 1) for v in e) for e in g.edges]
    return "\n".join(lines) + "\n"


def parse_graph(text: str, extra_keys: Sequence[str] = ()) -> tuple[Hypergraph, dict[str, list[str]]]:
    """Parse a graph file.  Lines starting with one of ``extra_keys`` are returned unparsed."""
    count = None
    edges = []
    extras: dict[str, list[str]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.split("#", 1)[0].strip()
        if not s:
            continue
        toks = s.split()
        if toks[0] == "v":
            if count is not None or len(toks) != 2:
                raise FormatError(f"line {lineno}: expected a single 'v <count>' line")
            count = int(toks[1])
            continue
        if toks[0] in extra_keys:
            extras[toks[0]] = toks[1:]
            continue
        if count is None:
            raise FormatError(f"line {lineno}: edge before the 'v <count>' line")
        try:
            edge = tuple(int(t) - 1 for t in toks)
        except ValueError as exc:
            raise FormatError(f"line {lineno}: bad edge {s!r}") from exc
        edges.append(edge)
    if count is None:
        raise FormatError("missing 'v <count>' line")
    try:
        return Hypergraph(count, tuple(edges)), extras
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def read_graph(path) -> Hypergraph:
    with open(path) as fh:
        return parse_graph(fh.read())[0]


__all__ = [
    "Hypergraph", "LiftChoice", "PhaseForm", "incidence_matrix", "graph_from_circuit",
    "lift_to_circuit", "phase_form", "quad_phase", "euler_condition_poly",
    "euler_condition_exhaustive", "find_euler_circuit", "format_graph", "parse_graph",
    "read_graph", "default_choice", "y_options", "euler_lift_system", "count_euler_lifts",
]
