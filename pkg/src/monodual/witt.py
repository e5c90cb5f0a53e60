"""Brute-force Witt theory of F_p: the desk-scale oracle for transfer and
product of symmetric forms.

A Witt class is held as an anisotropic representative Gram matrix,
obtained by exhaustively hunting isotropic vectors and splitting off
hyperbolic planes (2 is invertible, so the splitting is elementary).
Classes are compared by the invariant pair (anisotropic dimension,
discriminant square class), which separates all classes over F_p; the
invariant comparison is itself validated against exhaustive congruence
testing in the test suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .flinalg import Matrix, is_invertible, kernel_basis


def is_square(a: int, p: int) -> bool:
    a %= p
    if a == 0:
        return True
    return pow(a, (p - 1) // 2, p) == 1


def _isotropic_vector(g: Matrix):
    """A nonzero v with v^T g v = 0, by exhaustive search (None if none)."""
    n, p = g.rows, g.p
    if n == 0:
        return None
    for vec in itertools.product(range(p), repeat=n):
        if not any(vec):
            continue
        v = np.array(vec, dtype=np.int64)
        if int(v @ g.a @ v) % p == 0:
            return v
    return None


def _split_hyperbolic(g: Matrix, v: np.ndarray) -> Matrix:
    """Remove the hyperbolic plane spanned by the isotropic v; returns the
    Gram matrix of its orthogonal complement."""
    p = g.p
    gv = (g.a @ v) % p
    w = None
    for k in range(g.rows):
        basis = np.zeros(g.rows, dtype=np.int64)
        basis[k] = 1
        if int(gv @ basis) % p:
            w = basis
            break
    if w is None:
        raise ValueError("degenerate form passed to hyperbolic splitting")
    w = (w * pow(int(gv @ w) % p, -1, p)) % p
    # make w isotropic inside the plane: w -> w - (w^T g w)/2 * v
    wgw = int(w @ g.a @ w) % p
    w = (w - (wgw * pow(2, -1, p)) % p * v) % p
    rows = np.vstack([(g.a @ v) % p, (g.a @ w) % p])
    comp = kernel_basis(Matrix.make(rows, p))
    return Matrix.make(comp.a.T @ g.a @ comp.a, p)


@dataclass(frozen=True)
class WittClass:
    """Anisotropic representative (possibly 0x0) plus its invariants."""

    representative: Matrix

    @property
    def p(self) -> int:
        return self.representative.p

    @property
    def anisotropic_dim(self) -> int:
        return self.representative.rows

    @property
    def disc(self) -> int:
        """Discriminant square class: 1 (square), the fixed nonsquare, or
        0 for the zero class."""
        n = self.representative.rows
        if n == 0:
            return 0
        d = _int_det(self.representative)
        return 1 if is_square(d, self.p) else -1

    def __eq__(self, other) -> bool:
        if not isinstance(other, WittClass):
            return NotImplemented
        return (
            self.p == other.p
            and self.anisotropic_dim == other.anisotropic_dim
            and self.disc == other.disc
        )

    def __hash__(self):
        return hash((self.p, self.anisotropic_dim, self.disc))

    def is_zero(self) -> bool:
        return self.anisotropic_dim == 0


def _int_det(g: Matrix) -> int:
    """Exact determinant mod p by fraction-free expansion on small sizes."""
    n, p = g.rows, g.p
    a = [[int(x) for x in row] for row in g.a]
    if n == 0:
        return 1
    # Gaussian elimination mod p tracking the determinant
    det = 1
    m = [row[:] for row in a]
    for c in range(n):
        piv = None
        for r in range(c, n):
            if m[r][c] % p:
                piv = r
                break
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = (det * m[c][c]) % p
        inv = pow(m[c][c], -1, p)
        for r in range(c + 1, n):
            f = (m[r][c] * inv) % p
            for k in range(c, n):
                m[r][k] = (m[r][k] - f * m[c][k]) % p
    return det % p


def witt_reduce(g: Matrix) -> WittClass:
    """Split off hyperbolic planes until anisotropic."""
    if g.rows != g.cols:
        raise ValueError("Gram matrix must be square")
    if (g - g.T).a.any():
        raise ValueError("Gram matrix must be symmetric")
    if not is_invertible(g):
        raise ValueError("degenerate form")
    while True:
        v = _isotropic_vector(g)
        if v is None:
            return WittClass(g)
        g = _split_hyperbolic(g, v)


def witt_add(a: WittClass, b: WittClass) -> WittClass:
    from .flinalg import block_direct_sum

    if a.p != b.p:
        raise ValueError("classes over different fields")
    if a.anisotropic_dim == 0:
        return b
    if b.anisotropic_dim == 0:
        return a
    return witt_reduce(block_direct_sum([a.representative, b.representative]))


def zero_class(p: int) -> WittClass:
    return WittClass(Matrix.zeros(0, 0, p))


def diagonal_form(entries, p: int) -> Matrix:
    return Matrix.make(np.diag(np.array(entries, dtype=np.int64) % p), p)


def witt_classify(p: int, maxdim: int = 4) -> dict:
    """All classes reachable from diagonal forms of dim <= maxdim, with the
    group table and element orders."""
    classes = [zero_class(p)]
    for dim in range(1, maxdim + 1):
        for entries in itertools.product(range(1, p), repeat=dim):
            c = witt_reduce(diagonal_form(entries, p))
            if c not in classes:
                classes.append(c)
    table = {}
    for i, a in enumerate(classes):
        for j, b in enumerate(classes):
            table[(i, j)] = classes.index(witt_add(a, b))
    orders = []
    for i, c in enumerate(classes):
        acc = c
        n = 1
        while not acc.is_zero():
            acc = witt_add(acc, c)
            n += 1
            if n > 2 * len(classes) + 2:
                raise RuntimeError("order computation runaway")
        orders.append(n)
    return {
        "p": p,
        "classes": classes,
        "order": len(classes),
        "element_orders": orders,
        "exponent": max(orders),
        "table": table,
    }


def class_of_form(form) -> WittClass:
    """Witt class of a degree-0 nondegenerate symmetric form on a point."""
    from .duality import gram_of_degree0_form

    return witt_reduce(gram_of_degree0_form(form))


def transfer_witt(ctx, f, grams) -> WittClass:
    """Push degree-0 stalk forms along f : X -> pt combinatorially: the
    orthogonal sum of the Gram matrices, reduced."""
    from .flinalg import block_direct_sum

    if len(f.target) != 1:
        raise ValueError("transfer_witt expects a map to the point")
    parts = [grams[x] for x in f.source]
    if not parts:
        return zero_class(ctx.p)
    return witt_reduce(block_direct_sum(parts))


def transfer_witt_categorical(ctx, f, grams) -> WittClass:
    """The same transfer through the duality-preserving push-forward; used
    to cross-check the combinatorial route."""
    from .complexes import ChainMap, Complex
    from .duality import Duality, SymmetricForm, dp_pushforward, transfer_form, gram_of_degree0_form
    from .sites import SheafComplex, SheafMap, SixFunctors, Site, unit_sheaf

    F = SixFunctors(ctx, f)
    a = SheafComplex.make(f.source, [Complex.point(ctx.p, 0, grams[x].rows) for x in f.source])
    d = Duality(F.sx, F.shriek.obj(unit_sheaf(ctx, f.target)))
    da = d.obj(a)
    psi = SheafMap.make(a, da, [
        ChainMap.make(s, t, {0: grams[x]} if grams[x].rows else {}, 0)
        for x, s, t in zip(f.source, a.stalks, da.stalks)
    ])
    form = SymmetricForm(d, a, psi)
    out = transfer_form(dp_pushforward(ctx, f, unit_sheaf(ctx, f.target)), form)
    return witt_reduce(gram_of_degree0_form(out))


def product_witt(a: WittClass, b: WittClass) -> WittClass:
    """Product of classes through the Kronecker product of representatives."""
    from .flinalg import kronecker

    if a.is_zero() or b.is_zero():
        return zero_class(a.p)
    return witt_reduce(kronecker(a.representative, b.representative))
