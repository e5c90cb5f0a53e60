"""Bounded chain complexes over F_p and exact chain maps between them.

Conventions (used consistently package-wide):

* homological grading, the differential lowers degree: d_i : A_i -> A_{i-1};
* a complex stores its degree range [min_degree, min_degree+len(dims)-1],
  trimmed so the extreme dimensions are nonzero (the zero complex is
  canonically empty with min_degree 0);
* suspension is a strict index shift: (TA)_n = A_{n-1} with each
  differential multiplied by the suspension sign (default -1), so
  T T^{-1} = T^{-1} T = Id on the nose;
* a chain map of degree n has components f_i : A_i -> B_{i+n}; degree-0
  maps commute strictly with the differentials, and every structural map
  produced elsewhere in the package is certified at construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .flinalg import Matrix, block_direct_sum, check_odd_prime, kernel_basis


class ChainMapError(ValueError):
    """Raised when a claimed chain map fails its commutation certificate."""


def _trim(min_degree: int, dims: tuple, diffs: tuple):
    lo, hi = 0, len(dims)
    while lo < hi and dims[lo] == 0:
        lo += 1
    while hi > lo and dims[hi - 1] == 0:
        hi -= 1
    if lo == hi:
        return 0, (), ()
    return min_degree + lo, dims[lo:hi], diffs[lo : hi - 1]


@dataclass(frozen=True)
class Complex:
    """Bounded complex; diffs[k] is d_{min_degree+k+1} : A_{k+1} -> A_k."""

    p: int
    min_degree: int
    dims: tuple
    diffs: tuple

    @staticmethod
    def make(p: int, min_degree: int, dims, diffs) -> "Complex":
        check_odd_prime(p)
        dims = tuple(int(d) for d in dims)
        diffs = tuple(diffs)
        if len(diffs) != max(len(dims) - 1, 0):
            raise ValueError("need exactly len(dims)-1 differentials")
        for k, m in enumerate(diffs):
            if (m.rows, m.cols) != (dims[k], dims[k + 1]):
                raise ValueError(
                    f"differential {k} has shape {m.rows}x{m.cols}, expected {dims[k]}x{dims[k+1]}"
                )
            if m.p != p:
                raise ValueError("differential over wrong field")
        m0, d0, f0 = _trim(min_degree, dims, diffs)
        return Complex(p, m0, d0, f0)

    @staticmethod
    def empty(p: int) -> "Complex":
        return Complex.make(p, 0, (), ())

    @staticmethod
    def point(p: int, degree: int = 0, dim: int = 1) -> "Complex":
        """A complex concentrated in one degree with zero differential."""
        return Complex.make(p, degree, (dim,), ())

    @staticmethod
    def unit(p: int) -> "Complex":
        return Complex.point(p, 0, 1)

    @property
    def max_degree(self) -> int:
        return self.min_degree + len(self.dims) - 1

    def degrees(self):
        return range(self.min_degree, self.min_degree + len(self.dims))

    def dim(self, i: int) -> int:
        k = i - self.min_degree
        if 0 <= k < len(self.dims):
            return self.dims[k]
        return 0

    def diff(self, i: int) -> Matrix:
        """The differential d_i : A_i -> A_{i-1} (zero-shaped out of range)."""
        k = i - self.min_degree - 1
        if 0 <= k < len(self.diffs):
            return self.diffs[k]
        return Matrix.zeros(self.dim(i - 1), self.dim(i), self.p)

    def total_dim(self) -> int:
        return sum(self.dims)

    def is_empty(self) -> bool:
        return not self.dims

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "min_degree": self.min_degree,
            "dims": list(self.dims),
            "diffs": [m.to_json() for m in self.diffs],
        }

    @staticmethod
    def from_json(obj: dict) -> "Complex":
        p = obj["p"]
        return Complex.make(
            p, obj["min_degree"], obj["dims"], [Matrix.from_json(m, p) for m in obj["diffs"]]
        )


def validate(a: Complex) -> bool:
    """True iff all shapes are consistent and d_i d_{i+1} = 0 everywhere."""
    for k, m in enumerate(a.diffs):
        if (m.rows, m.cols) != (a.dims[k], a.dims[k + 1]):
            return False
    for i in a.degrees():
        if not (a.diff(i) @ a.diff(i + 1)).is_zero():
            return False
    return True


def suspend(a: Complex, t_sign=None) -> Complex:
    """(TA)_n = A_{n-1}; the differential at old degree i is scaled by the
    suspension sign evaluated at i (constant -1 by default)."""
    scale = (lambda i: -1) if t_sign is None else (lambda i: t_sign.eval(i))
    dims = a.dims
    diffs = tuple(
        m.scale(scale(a.min_degree + k + 1)) for k, m in enumerate(a.diffs)
    )
    return Complex.make(a.p, a.min_degree + 1, dims, diffs)


def desuspend(a: Complex, t_sign=None) -> Complex:
    """Strict inverse of suspend: suspend(desuspend(a)) == a."""
    scale = (lambda i: -1) if t_sign is None else (lambda i: t_sign.eval(i))
    diffs = tuple(
        m.scale(scale(a.min_degree + k)) for k, m in enumerate(a.diffs)
    )
    return Complex.make(a.p, a.min_degree - 1, a.dims, diffs)


def shift(a: Complex, n: int, t_sign=None) -> Complex:
    out = a
    for _ in range(abs(n)):
        out = suspend(out, t_sign) if n > 0 else desuspend(out, t_sign)
    return out


def direct_sum(parts, p=None) -> Complex:
    """Degreewise direct sum in the given order of parts."""
    parts = list(parts)
    if not parts:
        if p is None:
            raise ValueError("direct_sum of no parts needs an explicit modulus")
        return Complex.empty(p)
    p = parts[0].p
    if any(c.p != p for c in parts):
        raise ValueError("mixed moduli in direct sum")
    nonempty = [c for c in parts if not c.is_empty()]
    if not nonempty:
        return Complex.empty(p)
    lo = min(c.min_degree for c in nonempty)
    hi = max(c.max_degree for c in nonempty)
    dims = tuple(sum(c.dim(i) for c in parts) for i in range(lo, hi + 1))
    # block_direct_sum keeps each part's slot even when the part has
    # dimension 0 in one of the two degrees, so offsets line up degreewise.
    diffs = tuple(
        block_direct_sum([c.diff(i) for c in parts]) for i in range(lo + 1, hi + 1)
    )
    return Complex.make(p, lo, dims, diffs)


@dataclass(frozen=True)
class ChainMap:
    """Degreewise map f_i : A_i -> B_{i+degree}, stored sparsely by degree."""

    source: Complex
    target: Complex
    degree: int
    components: tuple = field(default=())  # ((i, Matrix), ...) sorted by i

    @staticmethod
    def make(source: Complex, target: Complex, components: dict, degree: int = 0,
             chain_sign=1) -> "ChainMap":
        """Build and (unless chain_sign is None) certify the commutation
        d^B f = chain_sign * f d^A degreewise."""
        if source.p != target.p:
            raise ValueError("chain map between complexes over different fields")
        comp = {}
        for i, m in components.items():
            want = (target.dim(i + degree), source.dim(i))
            if (m.rows, m.cols) != want:
                raise ChainMapError(
                    f"component at degree {i} has shape {m.rows}x{m.cols}, expected {want}"
                )
            if m.rows and m.cols and not m.is_zero():
                comp[i] = m
            elif m.rows and m.cols:
                comp[i] = m
        f = ChainMap(source, target, degree, tuple(sorted(comp.items())))
        if chain_sign is not None:
            f._certify(chain_sign)
        return f

    def _certify(self, sign: int):
        n = self.degree
        for i in range(self.source.min_degree, self.source.max_degree + 2):
            lhs = self.target.diff(i + n) @ self.component(i)
            rhs = (self.component(i - 1) @ self.source.diff(i)).scale(sign)
            if lhs != rhs:
                raise ChainMapError(
                    f"not a chain map of sign {sign} at degree {i}"
                )

    @staticmethod
    def identity(a: Complex) -> "ChainMap":
        return ChainMap.make(
            a, a, {i: Matrix.identity(a.dim(i), a.p) for i in a.degrees()}, 0
        )

    @staticmethod
    def zero(a: Complex, b: Complex, degree: int = 0) -> "ChainMap":
        return ChainMap.make(a, b, {}, degree)

    def component(self, i: int) -> Matrix:
        for j, m in self.components:
            if j == i:
                return m
        return Matrix.zeros(self.target.dim(i + self.degree), self.source.dim(i), self.source.p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        if (self.source, self.target, self.degree) != (other.source, other.target, other.degree):
            return False
        for i in self.source.degrees():
            if self.component(i) != other.component(i):
                return False
        return True

    def __hash__(self):
        return hash((self.source, self.target, self.degree, self.components))

    def scale(self, c: int) -> "ChainMap":
        return ChainMap(
            self.source, self.target, self.degree,
            tuple((i, m.scale(c)) for i, m in self.components),
        )

    def __add__(self, other: "ChainMap") -> "ChainMap":
        if (self.source, self.target, self.degree) != (other.source, other.target, other.degree):
            raise ValueError("sum of maps with different endpoints")
        out = {}
        for i in self.source.degrees():
            out[i] = self.component(i) + other.component(i)
        return ChainMap.make(self.source, self.target, out, self.degree, chain_sign=None)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return self + other.scale(-1)

    def is_zero(self) -> bool:
        return all(m.is_zero() for _, m in self.components)

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "degree": self.degree,
            "components": {str(i): m.to_json() for i, m in self.components},
        }

    @staticmethod
    def from_json(obj: dict) -> "ChainMap":
        src = Complex.from_json(obj["source"])
        tgt = Complex.from_json(obj["target"])
        comps = {
            int(i): Matrix.from_json(m, src.p) for i, m in obj["components"].items()
        }
        return ChainMap.make(src, tgt, comps, obj["degree"], chain_sign=None)


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    """g after f; degrees add.  Endpoints must match structurally."""
    if f.target != g.source:
        raise ValueError("incomposable")
    out = {}
    for i in f.source.degrees():
        out[i] = g.component(i + f.degree) @ f.component(i)
    return ChainMap.make(f.source, g.target, out, f.degree + g.degree, chain_sign=None)


def compose_all(*maps: ChainMap) -> ChainMap:
    """Compose left to right: compose_all(f, g, h) = h o g o f."""
    out = maps[0]
    for m in maps[1:]:
        out = compose(m, out)
    return out


def is_isomorphism(f: ChainMap) -> bool:
    from .flinalg import is_invertible

    if f.degree != 0:
        return False
    return all(
        f.source.dim(i) == f.target.dim(i) and is_invertible(f.component(i))
        for i in set(f.source.degrees()) | set(f.target.degrees())
    )


def invert(f: ChainMap) -> ChainMap:
    from .flinalg import inverse

    if not is_isomorphism(f):
        raise ValueError("chain map is not invertible")
    comps = {i: inverse(f.component(i)) for i in f.source.degrees()}
    return ChainMap.make(f.target, f.source, comps, 0, chain_sign=None)


def chain_map_space(a: Complex, b: Complex) -> list:
    """Basis of the space of degree-0 chain maps a -> b.

    Solves d^b f - f d^a = 0 over all degreewise matrices; the unknown
    vector stacks vec(f_i) column-major, degrees ascending.
    """
    import numpy as np

    p = a.p
    slots = [(i, b.dim(i), a.dim(i)) for i in a.degrees() if a.dim(i) and b.dim(i)]
    offs = {}
    total = 0
    for i, r, c in slots:
        offs[i] = total
        total += r * c
    if total == 0:
        return []
    rows = []
    for i in range(a.min_degree, a.max_degree + 2):
        # equation in hom(A_i, B_{i-1}): d^b_i f_i - f_{i-1} d^a_i = 0
        r_t, c_t = b.dim(i - 1), a.dim(i)
        if r_t == 0 or c_t == 0:
            continue
        block = np.zeros((r_t * c_t, total), dtype=np.int64)
        if a.dim(i) and b.dim(i) and i in offs:
            # vec(d f_i) = (I_{A_i} (x) d^b_i) vec(f_i)
            k = np.kron(np.eye(a.dim(i), dtype=np.int64), b.diff(i).a)
            block[:, offs[i] : offs[i] + a.dim(i) * b.dim(i)] += k
        if a.dim(i - 1) and b.dim(i - 1) and (i - 1) in offs:
            # vec(f_{i-1} d^a_i) = (d^a_i^T (x) I_{B_{i-1}}) vec(f_{i-1})
            k = np.kron(a.diff(i).a.T, np.eye(b.dim(i - 1), dtype=np.int64))
            block[:, offs[i - 1] : offs[i - 1] + a.dim(i - 1) * b.dim(i - 1)] -= k
        rows.append(block % p)
    if rows:
        system = Matrix.make(np.vstack(rows), p)
        basis = kernel_basis(system)
    else:
        basis = Matrix.identity(total, p)
    out = []
    for k in range(basis.cols):
        comps = {}
        v = basis.a[:, k]
        for i, r, c in slots:
            seg = v[offs[i] : offs[i] + r * c]
            comps[i] = Matrix.make(seg.reshape(c, r).T, p)
        out.append(ChainMap.make(a, b, comps, 0))
    return out


def random_complex(seed, max_len: int = 3, max_dim: int = 3, p: int = 3,
                   degree_span: int = 2) -> Complex:
    """Deterministic random bounded complex.

    Direct sum of elementary pieces: one-term summands with zero
    differential and two-term discs [F_p --1--> F_p].  Valid by
    construction; dims per degree stay <= max_dim.
    """
    if max_len < 1 or max_dim < 0:
        raise ValueError("max_len >= 1 and max_dim >= 0 required")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    lo = rng.randint(-degree_span, degree_span)
    length = rng.randint(1, max_len)
    hi = lo + length - 1
    dims = {i: 0 for i in range(lo, hi + 1)}
    pieces = []
    for _ in range(rng.randint(0, 2 * max_dim * length)):
        if length >= 2 and rng.random() < 0.5:
            d = rng.randint(lo, hi - 1)
            if dims[d] < max_dim and dims[d + 1] < max_dim:
                dims[d] += 1
                dims[d + 1] += 1
                pieces.append(("disc", d))
        else:
            d = rng.randint(lo, hi)
            if dims[d] < max_dim:
                dims[d] += 1
                pieces.append(("simple", d))
    import numpy as np

    mats = {
        i: np.zeros((dims[i], dims[i + 1]), dtype=np.int64) for i in range(lo, hi)
    }
    filled = {i: 0 for i in range(lo, hi + 1)}
    for kind, d in pieces:
        if kind == "disc":
            r, c = filled[d], filled[d + 1]
            mats[d][r, c] = 1
            filled[d] += 1
            filled[d + 1] += 1
        else:
            filled[d] += 1
    diffs = [Matrix.make(mats[i], p) for i in range(lo, hi)]
    return Complex.make(p, lo, [dims[i] for i in range(lo, hi + 1)], diffs)


def random_chain_map(rng: random.Random, a: Complex, b: Complex) -> ChainMap:
    """Random degree-0 chain map drawn from the solution space of the
    commutation system (never by rejection)."""
    basis = chain_map_space(a, b)
    out = ChainMap.zero(a, b)
    for f in basis:
        c = rng.randrange(a.p)
        if c:
            out = out + f.scale(c)
    return ChainMap.make(a, b, {i: out.component(i) for i in a.degrees()}, 0)
