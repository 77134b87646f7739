"""Dense statevector simulation of signed-Pauli circuits.

Circuits made only of :class:`SigmaTildeGate` stay real (every gate is a real
orthogonal matrix), so the real path runs on float64.  Pauli rotations pull
the state into complex128.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence, Union

import numpy as np

from .circuit import (CNOT, CircuitMatrix, GateOp, GateSpec, PauliRotation, SigmaTildeGate,
                      ch_matrix, require_valid, to_gate_ops)
from .errors import CapExceeded, DimensionMismatch, InvalidTolerance
from .gf2 import DEFAULT_CAP, check_cap, kernel_basis
from .graphs import phase_form
from .enumerators import signed_weight_counts
from .pauli import apply_sigma_tilde, num_qubits, y_count

MAX_QUBITS = 24


def zero_state(n: int, dtype=np.float64) -> np.ndarray:
    if n > MAX_QUBITS:
        raise CapExceeded("qubit count", n, MAX_QUBITS)
    psi = np.zeros(1 << n, dtype=dtype)
    psi[0] = 1
    return psi


def _bit(n: int, q: int) -> np.ndarray:
    """Value of qubit ``q`` in every basis index (qubit 0 = MSB)."""
    return (np.arange(1 << n) >> (n - 1 - q)) & 1


def apply(state: np.ndarray, op: GateOp) -> np.ndarray:
    """Apply one gate and return the new state."""
    n = num_qubits(state)
    if isinstance(op, SigmaTildeGate):
        if op.n != n:
            raise DimensionMismatch(f"{op.n}-qubit gate on {n} qubits")
        g = math.hypot(op.alpha, op.beta)
        return (op.alpha * state + op.sign * op.beta * apply_sigma_tilde(op.word, state)) / g
    if isinstance(op, PauliRotation):
        if op.n != n:
            raise DimensionMismatch(f"{op.n}-qubit gate on {n} qubits")
        # sigma_b = i^{|b|_Y} * (real signed word)
        phase = 1j ** (y_count(op.word) % 4)
        sw = apply_sigma_tilde(op.word, state)
        return math.cos(op.theta / 2) * state - 1j * math.sin(op.theta / 2) * phase * sw
    if isinstance(op, CNOT):
        if not (0 <= op.control < n and 0 <= op.target < n) or op.control == op.target:
            raise DimensionMismatch(f"CNOT({op.control}, {op.target}) on {n} qubits")
        idx = np.arange(1 << n)
        flip = _bit(n, op.control) << (n - 1 - op.target)
        return state[idx ^ flip]
    raise TypeError(f"unknown gate {op!r}")


def apply_controlled(state: np.ndarray, op: GateOp, control: int) -> np.ndarray:
    """Apply ``op`` only on the subspace where qubit ``control`` is 1."""
    n = num_qubits(state)
    on = _bit(n, control).astype(bool)
    out = apply(state, op)
    return np.where(on, out, state)


def hadamard(state: np.ndarray, q: int) -> np.ndarray:
    n = num_qubits(state)
    mask = 1 << (n - 1 - q)
    idx = np.arange(1 << n)
    partner = state[idx ^ mask]
    one = (idx & mask).astype(bool)
    return np.where(one, partner - state, state + partner) / math.sqrt(2)


def phase_sdg(state: np.ndarray, q: int) -> np.ndarray:
    n = num_qubits(state)
    return np.where(_bit(n, q).astype(bool), -1j * state, state)


def run(ops: Sequence[GateOp], n: int, state: np.ndarray | None = None) -> np.ndarray:
    if state is None:
        complex_needed = any(isinstance(op, PauliRotation) for op in ops)
        state = zero_state(n, np.complex128 if complex_needed else np.float64)
    for op in ops:
        state = apply(state, op)
    return state


def widen_ops(ops: Sequence[GateOp], n: int) -> list[GateOp]:
    out = []
    for op in ops:
        if isinstance(op, SigmaTildeGate):
            op = SigmaTildeGate(op.word.extend(n), op.alpha, op.beta, op.sign)
        elif isinstance(op, PauliRotation):
            op = PauliRotation(op.word.extend(n), op.theta)
        out.append(op)
    return out


def amplitude_zero(c: CircuitMatrix, g: GateSpec) -> float:
    """``<0...0|U|0...0>`` by direct simulation (real path)."""
    if c.n > MAX_QUBITS:
        raise CapExceeded("qubit count", c.n, MAX_QUBITS)
    return float(run(to_gate_ops(c, g), c.n)[0])


def amplitude_via_expansion(c: CircuitMatrix, g: GateSpec, cap: int | None = DEFAULT_CAP,
                            workers: int = 1) -> float:
    """``<0...0|U|0...0>`` from the kernel sum.

    Expanding the product, a subset ``a`` of gates contributing their word
    picks up ``(-1)^{h_a}``, the product of their signs, ``beta^|a|`` and
    ``alpha^(N-|a|)``; only subsets in ker(CH) survive the vacuum projection.
    Gate signs enter as a diagonal (linear) term of the quadratic form.
    """
    require_valid(c)
    kb = kernel_basis(ch_matrix(c))
    check_cap(kb.free_count, cap)
    rows = list(phase_form(c).rows)
    for k, s in enumerate(g.full_signs(c.N)):
        if s < 0:
            rows[k] |= 1 << k
    counts = signed_weight_counts(kb.ints(), rows, c.N, workers)
    total = math.fsum(cnt * g.beta ** d * g.alpha ** (c.N - d) for d, cnt in enumerate(counts) if cnt)
    return total / g.gamma ** c.N


def as_rotation(op: SigmaTildeGate) -> PauliRotation:
    """The same gate written as ``exp(-i theta/2 sigma_b)``; needs an odd Y count."""
    y = y_count(op.word)
    if y % 2 == 0:
        raise ValueError("only odd-Y words are rotations")
    # W = (-i)^y sigma = -i sigma for y = 1 mod 4, +i sigma for y = 3 mod 4
    eps = 1 if y % 4 == 1 else -1
    return PauliRotation(op.word, 2.0 * math.atan2(op.sign * eps * op.beta, op.alpha))


# Hadamard test

@dataclass(frozen=True)
class EstimateResult:
    estimate: float
    epsilon: float
    delta: float
    samples: int
    seed: int | None
    p0: float
    part: str = "real"
    scale: float = 1.0

    def as_dict(self) -> dict:
        return asdict(self)


def hoeffding_samples(epsilon: float, delta: float) -> int:
    """Shots so a +-1 mean lands within epsilon with probability >= 1 - delta."""
    if not (0 < epsilon < 1 and 0 < delta < 1):
        raise InvalidTolerance(f"epsilon and delta must lie in (0, 1), got {epsilon}, {delta}")
    return math.ceil(math.log(2 / delta) / (2 * (epsilon / 2) ** 2))


def hadamard_p0(ops: Sequence[GateOp], n: int, part: str = "real") -> float:
    """Exact probability of reading 0 on the ancilla of the Hadamard-test circuit.

    The ancilla is qubit ``n``; controlled-U acts on qubits ``0..n-1``.
    """
    body = widen_ops(ops, n + 1)
    state = zero_state(n + 1, np.complex128)
    state = hadamard(state, n)
    for op in body:
        state = apply_controlled(state, op, n)
    if part == "imag":
        state = phase_sdg(state, n)
    elif part != "real":
        raise ValueError(f"part must be 'real' or 'imag', got {part!r}")
    state = hadamard(state, n)
    anc0 = ~_bit(n + 1, n).astype(bool)
    return float(np.sum(np.abs(state[anc0]) ** 2))


def hadamard_test(target: Union[CircuitMatrix, Sequence[GateOp]], g: GateSpec | None = None, *,
                  n: int | None = None, epsilon: float = 0.05, delta: float = 0.05,
                  seed: int | None = None, part: str = "real") -> EstimateResult:
    """Estimate ``Re`` (or ``Im``) of ``<0...0|U|0...0>`` by sampling the ancilla.

    Shots are drawn from the exactly simulated ancilla distribution.  The
    returned ``scale`` is gamma^N for a CircuitMatrix target, the factor that
    turns the amplitude into the unnormalized kernel sum.
    """
    samples = hoeffding_samples(epsilon, delta)
    if isinstance(target, CircuitMatrix):
        if g is None:
            raise ValueError("a GateSpec is needed to realize a CircuitMatrix")
        ops = to_gate_ops(target, g)
        n = target.n
        scale = g.gamma ** target.N
    else:
        if n is None:
            raise ValueError("n is required for a raw gate sequence")
        ops = list(target)
        scale = 1.0
    p0 = min(1.0, max(0.0, hadamard_p0(ops, n, part)))
    rng = np.random.default_rng(seed)
    zeros = int(rng.binomial(samples, p0))
    estimate = (2 * zeros - samples) / samples
    return EstimateResult(estimate, epsilon, delta, samples, seed, p0, part, scale)


# decision wrapper execution

@dataclass(frozen=True)
class DecisionResult:
    p0: float
    p1: float
    residual: float

    def as_dict(self) -> dict:
        return asdict(self)


def run_decision(wrapped: Sequence[GateOp], n_total: int) -> DecisionResult:
    """Run a decision-wrapped sequence; the ancilla is the last qubit.

    ``residual`` is the probability of ending anywhere other than
    ``|0...0>`` on the work qubits.
    """
    state = run(wrapped, n_total)
    probs = np.abs(state) ** 2
    anc = _bit(n_total, n_total - 1).astype(bool)
    p1 = float(probs[anc].sum())
    p0 = float(probs[~anc].sum())
    residual = max(0.0, 1.0 - float(probs[0] + probs[1]))
    return DecisionResult(p0, p1, residual)


def decision_marginal(ops: Sequence[GateOp], n: int, qubit: int) -> tuple[float, float]:
    """Distribution of one qubit in ``U|0...0>``."""
    probs = np.abs(run(ops, n)) ** 2
    one = _bit(n, qubit).astype(bool)
    return float(probs[~one].sum()), float(probs[one].sum())


__all__ = [
    "apply", "apply_controlled", "run", "zero_state", "amplitude_zero", "amplitude_via_expansion",
    "as_rotation", "hadamard_test", "hoeffding_samples", "hadamard_p0", "EstimateResult",
    "run_decision", "DecisionResult", "decision_marginal",
]
