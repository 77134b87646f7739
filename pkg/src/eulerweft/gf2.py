"""Bit-packed GF(2) linear algebra.

Matrices are stored row-major in 64-bit words (column ``c`` lives in word
``c // 64``, bit ``c % 64``).  Row reduction XORs whole packed rows at once.
Vectors are Python ints used as bitsets, bit ``i`` being coordinate ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import CapExceeded, FormatError, LengthMismatch

WORD_BITS = 64
DEFAULT_CAP = 30

_ONE = np.uint64(1)
_FULL = (1 << WORD_BITS) - 1


def _n_words(cols: int) -> int:
    return max(1, -(-cols // WORD_BITS))


def parity(x: int) -> int:
    return x.bit_count() & 1


@dataclass(frozen=True)
class BitVector:
    """Fixed-length vector over GF(2)."""

    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("negative length")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError(f"bits {self.bits:#x} do not fit in length {self.length}")

    @classmethod
    def from_bits(cls, values: Iterable[int]) -> "BitVector":
        values = list(values)
        bits = 0
        for i, v in enumerate(values):
            if v not in (0, 1):
                raise ValueError(f"entry {v!r} is not 0/1")
            bits |= int(v) << i
        return cls(len(values), bits)

    @classmethod
    def from_string(cls, text: str) -> "BitVector":
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise FormatError(f"not a bit string: {text!r}")
        return cls.from_bits(int(ch) for ch in text)

    @classmethod
    def unit(cls, length: int, index: int) -> "BitVector":
        return cls(length, 1 << index)

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __len__(self) -> int:
        return self.length

    def __iter__(self) -> Iterator[int]:
        return iter(self.to_list())

    def __xor__(self, other: "BitVector") -> "BitVector":
        self._check(other)
        return BitVector(self.length, self.bits ^ other.bits)

    def _check(self, other: "BitVector") -> None:
        if other.length != self.length:
            raise LengthMismatch(f"lengths {self.length} and {other.length} differ")

    def dot(self, other: "BitVector") -> int:
        self._check(other)
        return parity(self.bits & other.bits)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def to_list(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.length)]

    def __str__(self) -> str:
        return "".join(str(b) for b in self.to_list())


class BitMatrix:
    """Dense GF(2) matrix with bit-packed rows.  Immutable."""

    __slots__ = ("rows", "cols", "_words")

    def __init__(self, rows: int, cols: int, words: np.ndarray | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative shape")
        nw = _n_words(cols)
        if words is None:
            words = np.zeros((rows, nw), dtype=np.uint64)
        else:
            words = np.array(words, dtype=np.uint64).reshape(rows, nw)
            tail = cols % WORD_BITS
            if tail:
                words[:, -1] &= np.uint64((1 << tail) - 1)
            elif cols == 0:
                words[:] = 0
        words.setflags(write=False)
        self.rows = rows
        self.cols = cols
        self._words = words

    # construction

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_int_rows([1 << i for i in range(n)], n)

    @classmethod
    def from_int_rows(cls, rows: Sequence[int], cols: int) -> "BitMatrix":
        nw = _n_words(cols)
        words = np.zeros((len(rows), nw), dtype=np.uint64)
        for r, value in enumerate(rows):
            if value < 0 or value >> cols:
                raise ValueError(f"row {r} has bits beyond column {cols}")
            for w in range(nw):
                words[r, w] = (value >> (WORD_BITS * w)) & _FULL
        return cls(len(rows), cols, words)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "BitMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        ints = []
        for r in rows:
            if len(r) != cols:
                raise LengthMismatch(f"row of length {len(r)} in a {cols}-column matrix")
            ints.append(BitVector.from_bits(r).bits)
        return cls.from_int_rows(ints, cols)

    @classmethod
    def from_array(cls, arr) -> "BitMatrix":
        arr = np.asarray(arr)
        if arr.ndim != 2:
            raise ValueError("expected a 2-d array")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("entries must be 0/1")
        return cls.from_rows(arr.astype(int).tolist(), arr.shape[1])

    @classmethod
    def from_columns(cls, columns: Sequence[int], rows: int) -> "BitMatrix":
        """Build from column bitsets (bit ``r`` of ``columns[c]`` is entry (r, c))."""
        ints = [0] * rows
        for c, col in enumerate(columns):
            if col < 0 or col >> rows:
                raise ValueError(f"column {c} has bits beyond row {rows}")
            r = 0
            while col:
                if col & 1:
                    ints[r] |= 1 << c
                col >>= 1
                r += 1
        return cls.from_int_rows(ints, len(columns))

    # access

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def words(self) -> np.ndarray:
        return self._words

    def __getitem__(self, idx: tuple[int, int]) -> int:
        r, c = idx
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(idx)
        w, b = divmod(c, WORD_BITS)
        return int((self._words[r, w] >> np.uint64(b)) & _ONE)

    def row_int(self, r: int) -> int:
        value = 0
        for w, word in enumerate(self._words[r]):
            value |= int(word) << (WORD_BITS * w)
        return value

    def row_ints(self) -> list[int]:
        return [self.row_int(r) for r in range(self.rows)]

    def column_int(self, c: int) -> int:
        w, b = divmod(c, WORD_BITS)
        bits = (self._words[:, w] >> np.uint64(b)) & _ONE
        value = 0
        for r in np.flatnonzero(bits):
            value |= 1 << int(r)
        return value

    def column_ints(self) -> list[int]:
        return [self.column_int(c) for c in range(self.cols)]

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for c in range(self.cols):
            w, b = divmod(c, WORD_BITS)
            out[:, c] = (self._words[:, w] >> np.uint64(b)) & _ONE
        return out

    def to_lists(self) -> list[list[int]]:
        return self.to_array().astype(int).tolist()

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_int_rows(self.column_ints(), self.rows)

    @property
    def T(self) -> "BitMatrix":
        return self.transpose()

    def mul_vec(self, v: int | BitVector) -> int:
        """Return ``M v`` as a row-indexed bitset."""
        if isinstance(v, BitVector):
            if v.length != self.cols:
                raise LengthMismatch(f"vector length {v.length} vs {self.cols} columns")
            v = v.bits
        out = 0
        for r, row in enumerate(self.row_ints()):
            if parity(row & v):
                out |= 1 << r
        return out

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if not isinstance(other, BitMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise LengthMismatch(f"cannot multiply {self.shape} by {other.shape}")
        orows = other.row_ints()
        out = []
        for row in self.row_ints():
            acc = 0
            j = 0
            while row:
                if row & 1:
                    acc ^= orows[j]
                row >>= 1
                j += 1
            out.append(acc)
        return BitMatrix.from_int_rows(out, other.cols)

    def is_zero(self) -> bool:
        return not self._words.any()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self._words, other._words)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._words.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"

    def __str__(self) -> str:
        return format_matrix(self)


def rank_and_rref(m: BitMatrix) -> tuple[int, BitMatrix, tuple[int, ...]]:
    """Reduced row-echelon form over GF(2).

    Returns ``(rank, rref, pivots)``; rows past ``rank`` in ``rref`` are zero.
    """
    work = m.words.copy()
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        w, b = divmod(c, WORD_BITS)
        shift = np.uint64(b)
        hits = np.flatnonzero((work[r:, w] >> shift) & _ONE)
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            work[[r, p]] = work[[p, r]]
        mask = ((work[:, w] >> shift) & _ONE).astype(bool)
        mask[r] = False
        work[mask] ^= work[r]
        pivots.append(c)
        r += 1
    return r, BitMatrix(m.rows, m.cols, work), tuple(pivots)


def solve(m: BitMatrix, rhs: int) -> int | None:
    """One solution of ``M x = rhs`` (free variables set to 0), or None."""
    rows = m.row_ints()
    aug = BitMatrix.from_int_rows([r | (((rhs >> i) & 1) << m.cols) for i, r in enumerate(rows)],
                                  m.cols + 1)
    r, rref, pivots = rank_and_rref(aug)
    if pivots and pivots[-1] == m.cols:
        return None
    x = 0
    for i, p in enumerate(pivots):
        if rref[i, m.cols]:
            x |= 1 << p
    return x


def rank(m: BitMatrix) -> int:
    return rank_and_rref(m)[0]


@dataclass(frozen=True)
class KernelBasis:
    ambient_dim: int
    basis: tuple[BitVector, ...]

    @property
    def free_count(self) -> int:
        return len(self.basis)

    def ints(self) -> list[int]:
        return [v.bits for v in self.basis]

    def contains(self, m: BitMatrix, v: BitVector) -> bool:
        return m.mul_vec(v) == 0


def kernel_basis(m: BitMatrix) -> KernelBasis:
    """Basis of ``{v : M v = 0}``, one vector per free column."""
    _, rref, pivots = rank_and_rref(m)
    rows = rref.row_ints()
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = 1 << f
        for i, p in enumerate(pivots):
            if (rows[i] >> f) & 1:
                v |= 1 << p
        basis.append(BitVector(m.cols, v))
    return KernelBasis(m.cols, tuple(basis))


def check_cap(size: int, cap: int | None, what: str = "kernel dimension") -> None:
    """Raise :class:`CapExceeded` if ``size > cap``; ``cap=None`` disables the check."""
    if cap is not None and size > cap:
        raise CapExceeded(what, size, cap)


def gray_code(i: int) -> int:
    return i ^ (i >> 1)


def gray_value(vectors: Sequence[int], index: int) -> int:
    """XOR of the vectors selected by the Gray code of ``index``."""
    g = gray_code(index)
    acc = 0
    j = 0
    while g:
        if g & 1:
            acc ^= vectors[j]
        g >>= 1
        j += 1
    return acc


def gray_walk(vectors: Sequence[int], start: int = 0, stop: int | None = None
              ) -> Iterator[tuple[int, int]]:
    """Walk span(vectors) in Gray-code order.

    Yields ``(flipped, value)`` for Gray indices ``start <= i < stop``;
    ``flipped`` is the index of the vector toggled to reach ``value`` from
    the previous one, or -1 for the first value of the range.
    """
    total = 1 << len(vectors)
    stop = total if stop is None else min(stop, total)
    if start >= stop:
        return
    value = gray_value(vectors, start)
    yield -1, value
    for i in range(start + 1, stop):
        j = (i & -i).bit_length() - 1
        value ^= vectors[j]
        yield j, value


def enumerate_kernel(kb: KernelBasis, visit: Callable[[BitVector], object],
                     cap: int | None = DEFAULT_CAP) -> None:
    """Visit every kernel element once, zero first, in Gray-code order."""
    check_cap(kb.free_count, cap)
    n = kb.ambient_dim
    for _, value in gray_walk(kb.ints()):
        visit(BitVector(n, value))


def kernel_array(kb: KernelBasis, cap: int | None = DEFAULT_CAP) -> np.ndarray:
    """All kernel elements as a uint64 array, in Gray-code order.

    Only for ambient dimension <= 64.
    """
    check_cap(kb.free_count, cap)
    if kb.ambient_dim > WORD_BITS:
        raise ValueError("kernel_array needs ambient dimension <= 64")
    idx = np.arange(1 << kb.free_count, dtype=np.uint64)
    gray = idx ^ (idx >> _ONE)
    out = np.zeros_like(gray)
    for j, v in enumerate(kb.ints()):
        sel = ((gray >> np.uint64(j)) & _ONE).astype(bool)
        out[sel] ^= np.uint64(v)
    return out


# text format: "rows cols" then one line of space-separated bits per row

def format_matrix(m: BitMatrix, header: str | None = None) -> str:
    lines = []
    if header:
        lines.append(f"# {header}")
    lines.append(f"{m.rows} {m.cols}")
    for row in m.to_lists():
        lines.append(" ".join(str(b) for b in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> tuple[BitMatrix, list[str]]:
    """Parse the text matrix format.  Returns the matrix and any ``#`` comment lines."""
    comments = []
    body = []
    for line in text.splitlines():
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            comments.append(s[1:].strip())
            continue
        body.append(s)
    if not body:
        raise FormatError("empty matrix file")
    try:
        rows, cols = (int(t) for t in body[0].split())
    except ValueError as exc:
        raise FormatError(f"bad header line {body[0]!r}; expected 'rows cols'") from exc
    if len(body) - 1 != rows:
        raise FormatError(f"header says {rows} rows, found {len(body) - 1}")
    data = []
    for i, line in enumerate(body[1:], start=1):
        toks = line.split()
        if len(toks) != cols or any(t not in ("0", "1") for t in toks):
            raise FormatError(f"row {i}: expected {cols} entries of 0/1, got {line!r}")
        data.append([int(t) for t in toks])
    return BitMatrix.from_rows(data, cols), comments


def read_matrix(path) -> BitMatrix:
    with open(path) as fh:
        return parse_matrix(fh.read())[0]
