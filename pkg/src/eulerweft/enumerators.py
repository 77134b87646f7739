"""Exact kernel sums: QWGTs, the Eulerian generating function and its signed variant.

Everything reduces to one scan: walk a GF(2) subspace in Gray-code order,
keeping the Hamming weight and a quadratic phase ``a^T Q a`` up to date one
basis flip at a time, and tally ``(-1)^phase`` by weight.  Coefficients are
Python ints, so they stay exact at any size.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from numbers import Number
from typing import Sequence

import numpy as np

from .circuit import CircuitMatrix, ch_matrix, require_valid
from .errors import LengthMismatch
from .gf2 import (DEFAULT_CAP, WORD_BITS, BitMatrix, check_cap, gray_value, kernel_array,
                  kernel_basis)
from .graphs import (Hypergraph, incidence_matrix, phase_form, quadratic_value, sym_times,
                     symmetrize)

# below this many kernel elements a process pool costs more than it saves
PARALLEL_MIN_FREE = 16


@dataclass(frozen=True)
class SignedPolynomial:
    """Integer polynomial ``sum_d coeffs[d] x^d``."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        for d in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[d]:
                return d
        return -1

    def trimmed(self) -> tuple[int, ...]:
        return self.coeffs[: self.degree + 1]

    def __call__(self, x: Number) -> Number:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def evaluate_xy(self, x: Number, y: Number) -> Number:
        """``sum_d c_d x^d y^(n-d)`` with n the top index of ``coeffs``."""
        n = len(self.coeffs) - 1
        return sum(c * x ** d * y ** (n - d) for d, c in enumerate(self.coeffs) if c)

    def abs_sum(self) -> int:
        return sum(abs(c) for c in self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SignedPolynomial):
            return self.trimmed() == other.trimmed()
        if isinstance(other, (list, tuple)):
            return self.trimmed() == SignedPolynomial(tuple(other)).trimmed()
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.trimmed())

    def __str__(self) -> str:
        terms = []
        for d, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if d == 0 else ("x" if d == 1 else f"x^{d}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}{mono}")
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return head + "".join(f" {s} {b}" for s, b in terms[1:])


def _scan(basis: Sequence[int], rows: Sequence[int], length: int, start: int, stop: int) -> list[int]:
    qvals = [quadratic_value(rows, v) for v in basis]
    sym = symmetrize(rows)
    images = [sym_times(sym, v) for v in basis]

    counts = [0] * (length + 1)
    a = gray_value(basis, start)
    h = quadratic_value(rows, a)
    counts[a.bit_count()] += -1 if h else 1
    for i in range(start + 1, stop):
        j = (i & -i).bit_length() - 1
        h ^= qvals[j] ^ ((a & images[j]).bit_count() & 1)
        a ^= basis[j]
        counts[a.bit_count()] += -1 if h else 1
    return counts


def _scan_args(args):
    return _scan(*args)


def signed_weight_counts(basis: Sequence[int], rows: Sequence[int] | None, length: int,
                         workers: int = 1) -> list[int]:
    """``c[d] = sum over a in span(basis) with |a| = d of (-1)^{a^T Q a}``.

    ``rows`` are the rows of Q as bitsets (None for the zero form).  With
    ``workers > 1`` the Gray index range is split across processes; each
    chunk re-derives its starting vector and phase from scratch.
    """
    if rows is None:
        rows = [0] * length
    if len(rows) != length:
        raise LengthMismatch(f"{len(rows)} form rows for ambient dimension {length}")
    basis = list(basis)
    rows = list(rows)
    total = 1 << len(basis)
    if workers <= 1 or len(basis) < PARALLEL_MIN_FREE:
        return _scan(basis, rows, length, 0, total)
    chunks = workers * 4
    step = -(-total // chunks)
    jobs = [(basis, rows, length, lo, min(lo + step, total)) for lo in range(0, total, step)]
    counts = [0] * (length + 1)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_scan_args, jobs):
            counts = [c + p for c, p in zip(counts, part)]
    return counts


def default_workers() -> int:
    env = os.environ.get("EULERWEFT_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class QwgtInstance:
    a: BitMatrix
    b: BitMatrix
    x: float = 1.0
    y: float = 1.0

    def __post_init__(self):
        n = self.a.cols
        if self.b.shape != (n, n):
            raise LengthMismatch(f"B is {self.b.shape}, expected {n}x{n} to match A's {n} columns")


def qwgt_table(inst: QwgtInstance, cap: int | None = DEFAULT_CAP, workers: int = 1) -> SignedPolynomial:
    """Coefficient of ``x^d y^(n-d)`` in S(A, B, x, y), indexed by d."""
    kb = kernel_basis(inst.a)
    check_cap(kb.free_count, cap)
    n = inst.a.cols
    return SignedPolynomial(tuple(signed_weight_counts(kb.ints(), inst.b.row_ints(), n, workers)))


def qwgt(inst: QwgtInstance, cap: int | None = DEFAULT_CAP, workers: int = 1) -> float:
    """S(A, B, x, y) = sum over Ab = 0 of (-1)^{b^T B b} x^|b| y^(n-|b|)."""
    return qwgt_table(inst, cap, workers).evaluate_xy(inst.x, inst.y)


def eulerian_genfunc(g: Hypergraph, cap: int | None = DEFAULT_CAP, workers: int = 1) -> SignedPolynomial:
    """Number of Eulerian edge subsets of each size."""
    kb = kernel_basis(incidence_matrix(g))
    check_cap(kb.free_count, cap, "cycle-space dimension")
    return SignedPolynomial(tuple(signed_weight_counts(kb.ints(), None, g.edge_count, workers)))


def signed_genfunc(c: CircuitMatrix, cap: int | None = DEFAULT_CAP, workers: int = 1) -> SignedPolynomial:
    """Signed Eulerian counts: sum over ker(CH) of (-1)^{h_a} x^|a|."""
    require_valid(c)
    kb = kernel_basis(ch_matrix(c))
    check_cap(kb.free_count, cap)
    return SignedPolynomial(tuple(signed_weight_counts(kb.ints(), phase_form(c).rows, c.N, workers)))


def multivariate_genfunc(g: Hypergraph, weights: Sequence[float], cap: int | None = DEFAULT_CAP) -> float:
    """Sum over Eulerian subsets of the product of their edge weights."""
    if len(weights) != g.edge_count:
        raise LengthMismatch(f"{len(weights)} weights for {g.edge_count} edges")
    kb = kernel_basis(incidence_matrix(g))
    check_cap(kb.free_count, cap, "cycle-space dimension")
    if g.edge_count <= WORD_BITS:
        elems = kernel_array(kb, cap=None)
        prod = np.ones(elems.shape[0])
        for e, w in enumerate(weights):
            bit = ((elems >> np.uint64(e)) & np.uint64(1)).astype(bool)
            prod[bit] *= w
        return float(math.fsum(prod))
    total = []
    for i in range(1 << kb.free_count):
        a = gray_value(kb.ints(), i)
        p = 1.0
        e = 0
        while a:
            if a & 1:
                p *= weights[e]
            a >>= 1
            e += 1
        total.append(p)
    return math.fsum(total)


__all__ = [
    "SignedPolynomial", "QwgtInstance", "qwgt", "qwgt_table", "eulerian_genfunc",
    "signed_genfunc", "multivariate_genfunc", "signed_weight_counts",
]
