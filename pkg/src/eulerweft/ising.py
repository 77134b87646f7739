"""Ising instances and three independent partition-function evaluators.

``partition_direct`` sums Boltzmann weights over every spin configuration,
``partition_vdw`` uses the high-temperature (van der Waerden) expansion over
Eulerian subgraphs, and ``partition_qwgt`` evaluates the same sum as a
quadratically signed weight enumerator with the bond signs on the diagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .enumerators import QwgtInstance, multivariate_genfunc, qwgt
from .errors import CapExceeded, DimensionMismatch, FormatError, NonUniformCoupling
from .gf2 import DEFAULT_CAP, BitMatrix, BitVector
from .graphs import Hypergraph, format_graph, incidence_matrix, parse_graph

MAX_SPINS = 24
_CHUNK = 1 << 16


@dataclass(frozen=True)
class IsingInstance:
    """Spins on the vertices of a loop-free multigraph.

    ``J`` is a single coupling magnitude or one magnitude per edge; bit ``e``
    of ``w`` makes edge ``e`` antiferromagnetic (J_e -> -J_e).
    """

    graph: Hypergraph
    J: Union[float, tuple[float, ...]]
    w: BitVector
    beta: float

    def __post_init__(self):
        if any(len(e) != 2 for e in self.graph.edges):
            raise ValueError("Ising instances need ordinary edges (no loops or hyperedges)")
        if isinstance(self.J, (list, tuple)):
            object.__setattr__(self, "J", tuple(float(j) for j in self.J))
            if len(self.J) != self.graph.edge_count:
                raise DimensionMismatch(f"{len(self.J)} couplings for {self.graph.edge_count} edges")
            if any(j <= 0 for j in self.J):
                raise ValueError("coupling magnitudes must be positive")
        elif not self.J > 0:
            raise ValueError("coupling magnitude must be positive")
        if self.w.length != self.graph.edge_count:
            raise DimensionMismatch(f"{self.w.length} sign bits for {self.graph.edge_count} edges")
        if not self.beta > 0:
            raise ValueError("inverse temperature must be positive")

    @classmethod
    def ferromagnet(cls, graph: Hypergraph, J: float = 1.0, beta: float = 1.0) -> "IsingInstance":
        return cls(graph, J, BitVector(graph.edge_count), beta)

    @property
    def magnitudes(self) -> tuple[float, ...]:
        if isinstance(self.J, tuple):
            return self.J
        return (float(self.J),) * self.graph.edge_count

    @property
    def couplings(self) -> np.ndarray:
        """Signed J_e = (-1)^{w_e} |J_e|."""
        signs = 1 - 2 * np.array(self.w.to_list(), dtype=float)
        return signs * np.array(self.magnitudes)

    @property
    def uniform(self) -> bool:
        return len(set(self.magnitudes)) <= 1


def energy(inst: IsingInstance, sigma: Sequence[int]) -> float:
    """H(sigma) = - sum_e J_e sigma_i sigma_j."""
    sigma = list(sigma)
    if len(sigma) != inst.graph.vertex_count:
        raise DimensionMismatch(f"{len(sigma)} spins for {inst.graph.vertex_count} vertices")
    if any(s not in (1, -1) for s in sigma):
        raise ValueError("spins must be +1 or -1")
    return -math.fsum(J * sigma[i] * sigma[j] for J, (i, j) in zip(inst.couplings, inst.graph.edges))


def partition_direct(inst: IsingInstance) -> float:
    nv = inst.graph.vertex_count
    if nv > MAX_SPINS:
        raise CapExceeded("spin count", nv, MAX_SPINS)
    couplings = inst.couplings
    ei = np.array([e[0] for e in inst.graph.edges], dtype=np.int64)
    ej = np.array([e[1] for e in inst.graph.edges], dtype=np.int64)
    parts = []
    for lo in range(0, 1 << nv, _CHUNK):
        idx = np.arange(lo, min(lo + _CHUNK, 1 << nv), dtype=np.int64)
        # spin of vertex v is +1 when bit v of the index is 0
        spins = 1 - 2 * ((idx[:, None] >> np.arange(nv)) & 1)
        h = -(spins[:, ei] * spins[:, ej]) @ couplings if len(ei) else np.zeros(len(idx))
        parts.append(np.exp(-inst.beta * h))
    return math.fsum(np.concatenate(parts))


def partition_vdw(inst: IsingInstance, cap: int | None = DEFAULT_CAP) -> float:
    """2^|V| prod_e cosh(beta J_e) * sum over Eulerian a of prod_{e in a} tanh(beta J_e)."""
    bj = inst.beta * inst.couplings
    prefactor = 2.0 ** inst.graph.vertex_count * math.prod(np.cosh(bj))
    return float(prefactor * multivariate_genfunc(inst.graph, np.tanh(bj).tolist(), cap))


def partition_qwgt(inst: IsingInstance, cap: int | None = DEFAULT_CAP) -> float:
    """2^|V| (1 - lambda^2)^(-|E|/2) S(A, dg(w), lambda, 1) with lambda = tanh(beta J)."""
    if not inst.uniform:
        raise NonUniformCoupling("the enumerator form needs a single coupling magnitude")
    m = inst.graph.edge_count
    lam = math.tanh(inst.beta * inst.magnitudes[0]) if m else 0.0
    diag = BitMatrix.from_int_rows([inst.w[e] << e for e in range(m)], m)
    s = qwgt(QwgtInstance(incidence_matrix(inst.graph), diag, lam, 1.0), cap)
    return 2.0 ** inst.graph.vertex_count / (1.0 - lam * lam) ** (m / 2) * s


def partition_all(inst: IsingInstance, cap: int | None = DEFAULT_CAP) -> dict[str, float]:
    out = {"direct": partition_direct(inst), "vdw": partition_vdw(inst, cap)}
    if inst.uniform:
        out["qwgt"] = partition_qwgt(inst, cap)
    return out


def max_relative_deviation(values: Sequence[float]) -> float:
    values = list(values)
    worst = 0.0
    for i, a in enumerate(values):
        for b in values[i + 1:]:
            worst = max(worst, abs(a - b) / max(abs(a), abs(b)))
    return worst


# instance file: graph format plus "J", "beta", "w" lines

def parse_instance(text: str) -> IsingInstance:
    graph, extras = parse_graph(text, extra_keys=("J", "beta", "w"))
    try:
        jvals = [float(t) for t in extras.get("J", ["1"])]
        beta = float(extras.get("beta", ["1"])[0])
    except ValueError as exc:
        raise FormatError(f"bad numeric value: {exc}") from exc
    wtoks = extras.get("w")
    w = BitVector.from_string("".join(wtoks)) if wtoks else BitVector(graph.edge_count)
    J = jvals[0] if len(jvals) == 1 else tuple(jvals)
    try:
        return IsingInstance(graph, J, w, beta)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def format_instance(inst: IsingInstance) -> str:
    J = inst.J if not isinstance(inst.J, tuple) else " ".join(repr(j) for j in inst.J)
    return format_graph(inst.graph) + f"J {J}\nbeta {inst.beta!r}\nw {inst.w}\n"


def read_instance(path) -> IsingInstance:
    with open(path) as fh:
        return parse_instance(fh.read())
