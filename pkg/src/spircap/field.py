"""Prime-field arithmetic and exact linear algebra over GF(q).

Matrices are stored as integer numpy arrays reduced mod ``q``.  ``int64`` is
used while every dot product provably fits; larger moduli fall back to
Python-int object arrays.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from sympy import isprime, nextprime

from .errors import DivisionByZero, FieldError, FieldMismatch, SingularMatrix

_INT64_SAFE_Q = 1 << 24


class PrimeField:
    """The field of integers modulo a prime ``q``."""

    def __init__(self, q: int):
        q = int(q)
        if q < 2 or not isprime(q):
            raise FieldError(f"field modulus {q} is not prime")
        self.q = q

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            self._check(value.field)
            return value
        return FieldElement(int(value) % self.q, self)

    @cached_property
    def dtype(self):
        return np.int64 if self.q <= _INT64_SAFE_Q else object

    def _check(self, other: "PrimeField"):
        if other != self:
            raise FieldMismatch(f"cannot mix {self} and {other}")

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(v, self) for v in range(self.q)]

    def inv_int(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in {self}")
        return pow(a, -1, self.q)

    # matrix constructors
    def matrix(self, rows) -> "FieldMatrix":
        if isinstance(rows, FieldMatrix):
            self._check(rows.field)
            return rows
        data = np.array(rows, dtype=object)
        if data.ndim == 1:
            data = data.reshape(1, -1)
        if data.ndim != 2:
            raise FieldError("matrix data must be two-dimensional")
        data = np.vectorize(lambda v: int(v) % self.q, otypes=[object])(data) if data.size else data
        return FieldMatrix(self, data.astype(self.dtype))

    def vector(self, values: Iterable) -> "FieldMatrix":
        """Row vector (1 x n)."""
        return self.matrix([list(values)])

    def zeros(self, rows: int, cols: int) -> "FieldMatrix":
        return FieldMatrix(self, np.zeros((rows, cols), dtype=self.dtype))

    def identity(self, n: int) -> "FieldMatrix":
        return FieldMatrix(self, np.eye(n, dtype=np.int64).astype(self.dtype))

    def random_matrix(self, rows: int, cols: int, rng: np.random.Generator) -> "FieldMatrix":
        """Uniform matrix drawn from a caller-owned generator."""
        data = rng.integers(0, self.q, size=(rows, cols), dtype=np.int64)
        return FieldMatrix(self, data.astype(self.dtype))


class FieldElement:
    __slots__ = ("value", "field")

    def __init__(self, value: int, field: PrimeField):
        self.value = value % field.q
        self.field = field

    def __repr__(self):
        return f"{self.value} (mod {self.field.q})"

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            self.field._check(other.field)
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.field.q
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.q))

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.value + o, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.value - o, self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(o - self.value, self.field)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.value * o, self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.field)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field.inv_int(self.value), self.field)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value * self.field.inv_int(o), self.field)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(o * self.field.inv_int(self.value), self.field)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(pow(self.value, e, self.field.q), self.field)


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


class FieldMatrix:
    """Dense matrix over a prime field."""

    __slots__ = ("field", "data")

    def __init__(self, field: PrimeField, data: np.ndarray):
        if data.ndim != 2:
            raise FieldError("FieldMatrix needs a 2-d array")
        self.field = field
        self.data = data

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def __repr__(self):
        return f"FieldMatrix({self.field}, {self.tolist()})"

    def tolist(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.data]

    def flat(self) -> list[int]:
        return [int(v) for v in self.data.ravel()]

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.tolist() == other.tolist()

    __hash__ = None

    def _wrap(self, data) -> "FieldMatrix":
        return FieldMatrix(self.field, np.mod(data, self.field.q).astype(self.field.dtype))

    def _other(self, other: "FieldMatrix") -> np.ndarray:
        if not isinstance(other, FieldMatrix):
            raise TypeError("expected a FieldMatrix")
        self.field._check(other.field)
        return other.data

    def __add__(self, other):
        return self._wrap(self.data + self._other(other))

    def __sub__(self, other):
        return self._wrap(self.data - self._other(other))

    def __neg__(self):
        return self._wrap(-self.data)

    def __matmul__(self, other):
        o = self._other(other)
        if self.cols != o.shape[0]:
            raise FieldError(f"shape mismatch {self.shape} @ {o.shape}")
        return self._wrap(self.data @ o)

    def scale(self, c) -> "FieldMatrix":
        return self._wrap(self.data * int(c))

    def __getitem__(self, idx):
        out = self.data[idx]
        if np.ndim(out) == 0:
            return FieldElement(int(out), self.field)
        if np.ndim(out) == 1:
            as_column = isinstance(idx, tuple) and isinstance(idx[1], (int, np.integer))
            out = out.reshape(-1, 1) if as_column else out.reshape(1, -1)
        return FieldMatrix(self.field, out)

    @property
    def T(self) -> "FieldMatrix":
        return FieldMatrix(self.field, self.data.T.copy())

    def columns(self, idx: Sequence[int]) -> "FieldMatrix":
        return FieldMatrix(self.field, self.data[:, list(idx)].reshape(self.rows, len(idx)))

    def rank(self) -> int:
        return rank(self)

    def inverse(self) -> "FieldMatrix":
        return invert(self)

    def is_zero(self) -> bool:
        return not np.any(self.data)


def hstack(blocks: Sequence[FieldMatrix]) -> FieldMatrix:
    f = blocks[0].field
    for b in blocks:
        f._check(b.field)
    return FieldMatrix(f, np.hstack([b.data for b in blocks]))


def vstack(blocks: Sequence[FieldMatrix]) -> FieldMatrix:
    f = blocks[0].field
    for b in blocks:
        f._check(b.field)
    return FieldMatrix(f, np.vstack([b.data for b in blocks]))


def _row_reduce(m: FieldMatrix) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form and pivot columns by Gauss-Jordan elimination."""
    q = m.field.q
    a = m.data.copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, q)) % q
        factors = a[:, c].copy()
        factors[r] = 0
        a = (a - np.outer(factors, a[r])) % q
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: FieldMatrix) -> int:
    if m.data.size == 0:
        return 0
    return len(_row_reduce(m)[1])


def invert(m: FieldMatrix) -> FieldMatrix:
    n = m.rows
    if m.cols != n:
        raise SingularMatrix(f"cannot invert non-square {m.shape} matrix")
    aug = hstack([m, m.field.identity(n)])
    red, pivots = _row_reduce(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular")
    return FieldMatrix(m.field, red[:, n:].astype(m.field.dtype))


def solve(m: FieldMatrix, rhs: FieldMatrix) -> FieldMatrix:
    """Solve ``m @ x = rhs`` for square nonsingular ``m``."""
    n = m.rows
    if m.cols != n:
        raise SingularMatrix(f"cannot solve with non-square {m.shape} matrix")
    if rhs.rows != n:
        raise FieldError(f"right-hand side has {rhs.rows} rows, expected {n}")
    red, pivots = _row_reduce(hstack([m, rhs]))
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular")
    return FieldMatrix(m.field, red[:, n:].astype(m.field.dtype))


def choose_field(l_bar: int) -> PrimeField:
    """Smallest prime field with at least ``l_bar`` elements."""
    if l_bar < 1:
        raise ValueError("l_bar must be positive")
    return PrimeField(nextprime(max(l_bar, 2) - 1))
