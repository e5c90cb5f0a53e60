"""Dense exact linear algebra over a prime field F_p, p an odd prime.

Every higher-level object in this package (complexes, structural chain
maps, sheaf functors) reduces to the handful of matrix operations in this
module.  All arithmetic is exact: entries live in {0, .., p-1} and every
operation reduces mod p.  There are no tolerances anywhere.

Matrices act on column vectors; ``compose(g, f)`` is the product
``g.a @ f.a``.  Direct sums over index pairs are always assembled in a
fixed order (ascending first index), which makes every map in the package
bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_SMALL_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def check_odd_prime(p: int) -> int:
    """Validate p as an odd prime modulus (2 must be invertible)."""
    if p < 3 or p % 2 == 0:
        raise ValueError(f"modulus must be an odd prime, got {p}")
    k = 3
    while k * k <= p:
        if p % k == 0:
            raise ValueError(f"modulus must be an odd prime, got {p}")
        k += 2
    return p


@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix over F_p.

    ``a`` is an int64 numpy array with entries already reduced mod p.
    """

    rows: int
    cols: int
    p: int
    a: np.ndarray = field(repr=False, compare=False)

    @staticmethod
    def make(data, p: int) -> "Matrix":
        arr = np.asarray(data, dtype=np.int64) % p
        if arr.ndim != 2:
            arr = arr.reshape((arr.shape[0], -1)) if arr.size else arr.reshape((0, 0))
        arr.setflags(write=False)
        return Matrix(arr.shape[0], arr.shape[1], p, arr)

    @staticmethod
    def zeros(rows: int, cols: int, p: int) -> "Matrix":
        arr = np.zeros((rows, cols), dtype=np.int64)
        arr.setflags(write=False)
        return Matrix(rows, cols, p, arr)

    @staticmethod
    def identity(n: int, p: int) -> "Matrix":
        arr = np.eye(n, dtype=np.int64)
        arr.setflags(write=False)
        return Matrix(n, n, p, arr)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.p == other.p
            and self.rows == other.rows
            and self.cols == other.cols
            and bool(np.array_equal(self.a, other.a))
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.p, self.a.tobytes()))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.p != other.p:
            raise ValueError("matrices over different fields")
        if self.cols != other.rows:
            raise ValueError(
                f"incomposable shapes {self.rows}x{self.cols} @ {other.rows}x{other.cols}"
            )
        return Matrix.make(self.a @ other.a, self.p)

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols, self.p) != (other.rows, other.cols, other.p):
            raise ValueError("shape/field mismatch in matrix sum")
        return Matrix.make(self.a + other.a, self.p)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols, self.p) != (other.rows, other.cols, other.p):
            raise ValueError("shape/field mismatch in matrix difference")
        return Matrix.make(self.a - other.a, self.p)

    def __neg__(self) -> "Matrix":
        return Matrix.make(-self.a, self.p)

    def scale(self, c: int) -> "Matrix":
        return Matrix.make(self.a * (c % self.p), self.p)

    @property
    def T(self) -> "Matrix":
        return Matrix.make(self.a.T, self.p)

    def is_zero(self) -> bool:
        return not self.a.any()

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": self.a.tolist()}

    @staticmethod
    def from_json(obj: dict, p: int) -> "Matrix":
        m = Matrix.make(np.array(obj["entries"], dtype=np.int64).reshape(obj["rows"], obj["cols"]), p)
        return m


def kronecker(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; block (r, s) of the result is a[r, s] * b."""
    if a.p != b.p:
        raise ValueError("matrices over different fields")
    return Matrix.make(np.kron(a.a, b.a), a.p)


def block_direct_sum(parts) -> Matrix:
    """Block-diagonal assembly in the given order; () gives the 0x0 matrix.

    All parts must share one modulus.
    """
    parts = list(parts)
    if not parts:
        raise ValueError("block_direct_sum of no parts needs a modulus; use zeros")
    p = parts[0].p
    rows = sum(m.rows for m in parts)
    cols = sum(m.cols for m in parts)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for m in parts:
        if m.p != p:
            raise ValueError("mixed moduli in direct sum")
        out[r : r + m.rows, c : c + m.cols] = m.a
        r += m.rows
        c += m.cols
    return Matrix.make(out, p)


def hstack(parts) -> Matrix:
    parts = list(parts)
    p = parts[0].p
    rows = parts[0].rows
    if any(m.rows != rows or m.p != p for m in parts):
        raise ValueError("hstack shape/field mismatch")
    return Matrix.make(np.hstack([m.a for m in parts]) if parts else np.zeros((rows, 0)), p)


def vstack(parts) -> Matrix:
    parts = list(parts)
    p = parts[0].p
    cols = parts[0].cols
    if any(m.cols != cols or m.p != p for m in parts):
        raise ValueError("vstack shape/field mismatch")
    return Matrix.make(np.vstack([m.a for m in parts]), p)


def _row_reduce(arr: np.ndarray, p: int):
    """Gauss-Jordan over F_p.  Returns (rref array, pivot column list)."""
    m = arr % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        others = np.nonzero(m[:, c])[0]
        for j in others:
            if j != r:
                m[j] = (m[j] - m[j, c] * m[r]) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix) -> int:
    _, piv = _row_reduce(a.a.copy(), a.p)
    return len(piv)


def is_invertible(a: Matrix) -> bool:
    """True iff a is square of full rank over F_p (0x0 counts as invertible)."""
    return a.rows == a.cols and rank(a) == a.rows


def inverse(a: Matrix) -> Matrix:
    if a.rows != a.cols:
        raise ValueError("inverse of a non-square matrix")
    n = a.rows
    aug = np.hstack([a.a, np.eye(n, dtype=np.int64)])
    red, piv = _row_reduce(aug, a.p)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return Matrix.make(red[:, n:], a.p)


def kernel_basis(a: Matrix) -> Matrix:
    """Columns form a basis of {v : a v = 0}."""
    red, piv = _row_reduce(a.a.copy(), a.p)
    free = [c for c in range(a.cols) if c not in piv]
    basis = np.zeros((a.cols, len(free)), dtype=np.int64)
    for k, c in enumerate(free):
        basis[c, k] = 1
        for r, pc in enumerate(piv):
            basis[pc, k] = (-red[r, c]) % a.p
    return Matrix.make(basis, a.p)


def vec_cm(a: Matrix) -> np.ndarray:
    """Column-major flattening: vec of a (b x a) matrix stacks its columns."""
    return a.a.T.reshape(-1)


def unvec_cm(v: np.ndarray, rows: int, cols: int, p: int) -> Matrix:
    return Matrix.make(np.asarray(v, dtype=np.int64).reshape(cols, rows).T, p)
