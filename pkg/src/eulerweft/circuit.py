"""H-matrix circuits: one column per gate, one row pair per qubit.

Column ``k`` is gate ``G_k`` and is applied ``k``-th, so the realized operator
is ``U = G_{N-1} ... G_1 G_0``.  Each gate is ``(alpha + s_k beta W_k) / gamma``
with ``W_k`` the real signed word of column ``k`` and ``s_k = +-1``.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from typing import Sequence, Union

from .errors import FormatError, InvalidCircuit, NonPositiveLambda
from .gf2 import BitMatrix, BitVector, format_matrix, parse_matrix
from .pauli import PauliWord, y_count


@dataclass(frozen=True)
class CircuitMatrix:
    n: int
    h: BitMatrix

    def __post_init__(self):
        if self.h.rows != 2 * self.n:
            raise ValueError(f"H has {self.h.rows} rows, expected 2n = {2 * self.n}")

    @classmethod
    def from_words(cls, words: Sequence[Union[PauliWord, str]], n: int | None = None) -> "CircuitMatrix":
        words = [PauliWord.from_string(w) if isinstance(w, str) else w for w in words]
        if n is None:
            if not words:
                raise ValueError("qubit count needed for an empty circuit")
            n = words[0].n
        if any(w.n != n for w in words):
            raise ValueError("all words must act on the same number of qubits")
        return cls(n, BitMatrix.from_columns([w.to_bits().bits for w in words], 2 * n))

    @property
    def N(self) -> int:
        return self.h.cols

    @property
    def words(self) -> tuple[PauliWord, ...]:
        return tuple(PauliWord.from_bits(BitVector(2 * self.n, col)) for col in self.h.column_ints())

    def __str__(self) -> str:
        return " ".join(str(w) for w in self.words)


class GateForm(enum.Enum):
    PAPER_ANSATZ = "paper"   # (lambda I + W) / sqrt(1 + lambda^2)
    EDGE_WEIGHT = "edge"     # (I + lambda W) / sqrt(1 + lambda^2)


@dataclass(frozen=True)
class GateSpec:
    alpha: float
    beta: float
    signs: tuple[int, ...] = ()

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("alpha and beta cannot both vanish")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("gate signs must be +1 or -1")

    @classmethod
    def from_lambda(cls, lam: float, form: GateForm = GateForm.EDGE_WEIGHT,
                    signs: Sequence[int] = ()) -> "GateSpec":
        if not lam > 0:
            raise NonPositiveLambda(f"lambda must be positive, got {lam}")
        if form is GateForm.PAPER_ANSATZ:
            return cls(lam, 1.0, tuple(signs))
        return cls(1.0, lam, tuple(signs))

    @property
    def gamma(self) -> float:
        return math.hypot(self.alpha, self.beta)

    def sign(self, k: int) -> int:
        return self.signs[k] if self.signs else 1

    def full_signs(self, N: int) -> tuple[int, ...]:
        if self.signs and len(self.signs) != N:
            raise ValueError(f"{len(self.signs)} gate signs for {N} gates")
        return self.signs or (1,) * N


@dataclass
class ValidationReport:
    n: int
    N: int
    problems: list[tuple[int, str]] = field(default_factory=list)
    restricted_problems: list[tuple[int, str]] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.problems

    @property
    def graph_restricted(self) -> bool:
        return self.valid and not self.restricted_problems

    def as_dict(self) -> dict:
        return {
            "qubits": self.n,
            "gates": self.N,
            "valid": self.valid,
            "graph_restricted": self.graph_restricted,
            "problems": [{"column": k, "reason": r} for k, r in self.problems],
            "restricted_problems": [{"column": k, "reason": r} for k, r in self.restricted_problems],
        }


def validate(c: CircuitMatrix, graph_restricted: bool = False) -> ValidationReport:
    """Check every column has an odd Y count; optionally the graph restriction too.

    The graph restriction (exactly one Y and at most one X per column) is
    always evaluated and reported in ``restricted_problems``; with
    ``graph_restricted=True`` its violations also make the circuit invalid.
    """
    report = ValidationReport(c.n, c.N)
    for k, w in enumerate(c.words):
        ys = y_count(w)
        xs = (w.x & ~w.z).bit_count()
        if ys % 2 == 0:
            report.problems.append((k, "even Y-count"))
        if ys > 1:
            report.restricted_problems.append((k, ">1 Y"))
        if xs > 1:
            report.restricted_problems.append((k, ">1 X"))
    if graph_restricted:
        report.problems.extend(p for p in report.restricted_problems if p not in report.problems)
    return report


def require_valid(c: CircuitMatrix) -> None:
    report = validate(c)
    if not report.valid:
        cols = ", ".join(f"{k} ({r})" for k, r in report.problems)
        raise InvalidCircuit(f"invalid columns: {cols}")


def column_pauli(c: CircuitMatrix, k: int) -> PauliWord:
    if not 0 <= k < c.N:
        raise IndexError(f"column {k} out of range for {c.N} gates")
    return PauliWord.from_bits(BitVector(2 * c.n, c.h.column_int(k)))


def ch_matrix(c: CircuitMatrix) -> BitMatrix:
    """``C H``: row ``2i`` takes row ``2i+1`` of H (the X bits), odd rows vanish."""
    rows = c.h.row_ints()
    out = [0] * (2 * c.n)
    for i in range(c.n):
        out[2 * i] = rows[2 * i + 1]
    return BitMatrix.from_int_rows(out, c.N)


def gate_angle(lam: float, form: GateForm = GateForm.PAPER_ANSATZ) -> float:
    """Rotation angle theta with cos(theta/2), sin(theta/2) equal to the gate's I and W parts."""
    if not lam > 0:
        raise NonPositiveLambda(f"lambda must be positive, got {lam}")
    r = lam / math.sqrt(1.0 + lam * lam)
    if form is GateForm.PAPER_ANSATZ:
        return 2.0 * math.acos(r)
    return 2.0 * math.asin(r)


def adjoint(c: CircuitMatrix, g: GateSpec) -> tuple[CircuitMatrix, GateSpec]:
    """Inverse circuit: columns reversed, every gate sign flipped.

    For an odd-Y word ``W^T = -W``, so ``G^T = (alpha - s beta W) / gamma``.
    """
    signs = g.full_signs(c.N)
    cols = c.h.column_ints()[::-1]
    h = BitMatrix.from_columns(cols, 2 * c.n)
    return CircuitMatrix(c.n, h), GateSpec(g.alpha, g.beta, tuple(-s for s in reversed(signs)))


# simulator-level gate sequence

@dataclass(frozen=True)
class SigmaTildeGate:
    word: PauliWord
    alpha: float
    beta: float
    sign: int = 1

    @property
    def n(self) -> int:
        return self.word.n


@dataclass(frozen=True)
class PauliRotation:
    """``exp(-i theta/2 sigma_b)`` for an arbitrary word."""

    word: PauliWord
    theta: float

    @property
    def n(self) -> int:
        return self.word.n


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int


GateOp = Union[SigmaTildeGate, PauliRotation, CNOT]


def to_gate_ops(c: CircuitMatrix, g: GateSpec) -> list[SigmaTildeGate]:
    signs = g.full_signs(c.N)
    return [SigmaTildeGate(w, g.alpha, g.beta, s) for w, s in zip(c.words, signs)]


def inverse_op(op: GateOp) -> GateOp:
    if isinstance(op, SigmaTildeGate):
        if y_count(op.word) % 2 == 0:
            raise InvalidCircuit(f"cannot invert {op.word}: even Y-count word is not antisymmetric")
        return SigmaTildeGate(op.word, op.alpha, op.beta, -op.sign)
    if isinstance(op, PauliRotation):
        return PauliRotation(op.word, -op.theta)
    return op


def inverse_ops(ops: Sequence[GateOp]) -> list[GateOp]:
    return [inverse_op(op) for op in reversed(ops)]


def _widen(op: GateOp, n: int) -> GateOp:
    if isinstance(op, SigmaTildeGate):
        return SigmaTildeGate(op.word.extend(n), op.alpha, op.beta, op.sign)
    if isinstance(op, PauliRotation):
        return PauliRotation(op.word.extend(n), op.theta)
    return op


def decision_wrap(ops: Sequence[GateOp], n: int, decision_qubit: int = 0) -> list[GateOp]:
    """U, then CNOT(decision qubit -> ancilla), then U^dagger.  The ancilla is qubit ``n``."""
    if not 0 <= decision_qubit < n:
        raise IndexError(f"decision qubit {decision_qubit} out of range for {n} qubits")
    body = [_widen(op, n + 1) for op in ops]
    return body + [CNOT(decision_qubit, n)] + inverse_ops(body)


# text format: gf2 matrix with a "# qubits=n gates=N" header

_HEADER = re.compile(r"qubits\s*=\s*(\d+)\s+gates\s*=\s*(\d+)")


def format_circuit(c: CircuitMatrix) -> str:
    return format_matrix(c.h, header=f"qubits={c.n} gates={c.N}")


def parse_circuit(text: str) -> CircuitMatrix:
    h, comments = parse_matrix(text)
    if h.rows % 2:
        raise FormatError(f"H must have an even number of rows, got {h.rows}")
    n = h.rows // 2
    for line in comments:
        m = _HEADER.search(line)
        if m:
            qn, gn = int(m.group(1)), int(m.group(2))
            if (qn, gn) != (n, h.cols):
                raise FormatError(f"header says qubits={qn} gates={gn}, matrix is {h.rows}x{h.cols}")
    return CircuitMatrix(n, h)


def read_circuit(path) -> CircuitMatrix:
    with open(path) as fh:
        return parse_circuit(fh.read())
