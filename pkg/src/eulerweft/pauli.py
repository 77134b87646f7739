"""Two-bit Pauli encoding and the real signed Pauli words.

Qubit ``i`` (0-based) occupies bits ``2i`` and ``2i+1`` of a length-``2n``
vector.  The pair reads ``00=I, 01=X, 11=Y, 10=Z``: the first bit is the Z
part and the second bit the X part.

The real word attached to ``b`` is ``(-i)^{|b|_Y} sigma_b``.  Per qubit that is
``X^x Z^z`` (``XZ = -iY``), so on a computational basis state it acts as

    |v>  ->  (-1)^{z.v} |v xor x>

which is how states are updated here: a mask XOR plus a sign, never a matrix.
Basis index convention: qubit 0 is the most significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, FormatError, LengthMismatch
from .gf2 import BitVector, parity

_LETTERS = {(0, 0): "I", (0, 1): "X", (1, 1): "Y", (1, 0): "Z"}
_PAIRS = {v: k for k, v in _LETTERS.items()}


@dataclass(frozen=True)
class PauliWord:
    """An n-qubit Pauli word held as two qubit-indexed masks."""

    n: int
    z: int = 0
    x: int = 0

    def __post_init__(self):
        if self.n < 0 or self.z >> self.n or self.x >> self.n or self.z < 0 or self.x < 0:
            raise ValueError(f"masks do not fit {self.n} qubits")

    @classmethod
    def from_string(cls, text: str) -> "PauliWord":
        text = text.replace("⊗", "").replace(" ", "").upper()
        z = x = 0
        for i, ch in enumerate(text):
            if ch not in _PAIRS:
                raise FormatError(f"bad Pauli letter {ch!r} in {text!r}")
            zb, xb = _PAIRS[ch]
            z |= zb << i
            x |= xb << i
        return cls(len(text), z, x)

    @classmethod
    def from_bits(cls, b: BitVector) -> "PauliWord":
        if b.length % 2:
            raise LengthMismatch("Pauli bit vectors have even length")
        n = b.length // 2
        z = x = 0
        for i in range(n):
            z |= b[2 * i] << i
            x |= b[2 * i + 1] << i
        return cls(n, z, x)

    def to_bits(self) -> BitVector:
        bits = 0
        for i in range(self.n):
            bits |= ((self.z >> i) & 1) << (2 * i)
            bits |= ((self.x >> i) & 1) << (2 * i + 1)
        return BitVector(2 * self.n, bits)

    def letter(self, i: int) -> str:
        return _LETTERS[((self.z >> i) & 1, (self.x >> i) & 1)]

    def __str__(self) -> str:
        return "".join(self.letter(i) for i in range(self.n))

    def tensor_str(self) -> str:
        return "⊗".join(str(self))

    def __mul__(self, other: "PauliWord") -> tuple[int, "PauliWord"]:
        return tilde_product_sign(self, other)

    def extend(self, n: int) -> "PauliWord":
        """Pad with identities up to ``n`` qubits."""
        if n < self.n:
            raise ValueError("cannot shrink a word")
        return PauliWord(n, self.z, self.x)

    @property
    def is_diagonal(self) -> bool:
        return self.x == 0

    @property
    def weight(self) -> int:
        return (self.z | self.x).bit_count()


def identity(n: int) -> PauliWord:
    return PauliWord(n)


def y_count(p: PauliWord) -> int:
    return (p.z & p.x).bit_count()


def c_apply(b: BitVector) -> BitVector:
    """Blockwise ``[[0,1],[0,0]] b``: pair i becomes (second bit, 0)."""
    out = 0
    for i in range(b.length // 2):
        out |= b[2 * i + 1] << (2 * i)
    return BitVector(b.length, out)


def c_form(p1: PauliWord, p2: PauliWord) -> int:
    """``b1^T C b2`` over GF(2)."""
    return parity(p1.z & p2.x)


def tilde_product_sign(p1: PauliWord, p2: PauliWord) -> tuple[int, PauliWord]:
    """Multiply two real words: returns ``(sign, p1 xor p2)``."""
    if p1.n != p2.n:
        raise LengthMismatch(f"{p1.n}-qubit word times {p2.n}-qubit word")
    sign = -1 if c_form(p1, p2) else 1
    return sign, PauliWord(p1.n, p1.z ^ p2.z, p1.x ^ p2.x)


def zero_expectation(p: PauliWord) -> int:
    """``<0...0| word |0...0>``: 1 for I/Z-only words, else 0."""
    return 1 if p.x == 0 else 0


def qubit_mask_to_index(mask: int, n: int) -> int:
    """Map a qubit-indexed mask to a basis-index mask (qubit 0 = MSB)."""
    out = 0
    for i in range(n):
        if (mask >> i) & 1:
            out |= 1 << (n - 1 - i)
    return out


@lru_cache(maxsize=64)
def _arange(n: int) -> np.ndarray:
    a = np.arange(1 << n, dtype=np.int64)
    a.setflags(write=False)
    return a


def signs_for(zmask_index: int, n: int) -> np.ndarray:
    """``(-1)^{popcount(v & zmask)}`` for every basis index v."""
    idx = _arange(n)
    par = np.bitwise_count(idx & zmask_index) & 1
    return 1 - 2 * par.astype(np.int8)


def num_qubits(state: np.ndarray) -> int:
    dim = state.shape[0]
    n = dim.bit_length() - 1
    if state.ndim != 1 or dim != 1 << n:
        raise DimensionMismatch(f"state of shape {state.shape} is not a qubit register")
    return n


def apply_sigma_tilde(p: PauliWord, state: np.ndarray) -> np.ndarray:
    """Return ``word . state`` for the real signed word ``p``."""
    state = np.asarray(state)
    n = num_qubits(state)
    if n != p.n:
        raise DimensionMismatch(f"{p.n}-qubit word on a {n}-qubit state")
    xi = qubit_mask_to_index(p.x, n)
    zi = qubit_mask_to_index(p.z, n)
    src = _arange(n) ^ xi
    # out[u] = sign(u ^ x) * state[u ^ x]
    return signs_for(zi, n)[src] * state[src]
