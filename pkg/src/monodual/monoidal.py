"""Closed symmetric monoidal structure on bounded complexes over F_p.

Graded pieces:

    (A (x) B)_n = sum over i+j=n of A_i (x) B_j      (blocks by ascending i)
    [A, B]_n    = prod over j-i=n of hom(A_i, B_j)   (blocks by ascending i)

A hom block hom(A_i, B_j) is the space of dim(B_j) x dim(A_i) matrices
flattened column-major.  All structural transformations (associator,
unitors, symmetry, the four suspension comparison maps, evaluation and
coevaluation, the bidual map, the duality product map) are built from an
injected sign assignment and certified as chain maps at construction, so
a corrupted sign fails loudly at the construction site.

The module also provides the generic mate combinator: given two
adjunctions and a natural family a : J2 H' -> H J1, its mate
b : H' K1 -> K2 H is the unit/counit composite, unique such that the two
exchange squares commute.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .complexes import ChainMap, ChainMapError, Complex, compose, suspend, desuspend, validate
from .flinalg import Matrix
from .signs import default_assignment, validate_assignment


@dataclass(frozen=True)
class StructuralContext:
    """Field modulus plus the sign assignment every construction reads."""

    p: int = 3
    signs: dict = field(default_factory=default_assignment)
    certify: bool = True

    def __post_init__(self):
        validate_assignment(self.signs)

    def sign(self, name: str, *indices: int) -> int:
        return self.signs[name].eval(*indices)

    @property
    def unit(self) -> Complex:
        return Complex.unit(self.p)

    def suspend(self, a: Complex) -> Complex:
        return suspend(a, self.signs["T"])

    def desuspend(self, a: Complex) -> Complex:
        return desuspend(a, self.signs["T"])


# ---------------------------------------------------------------------------
# block layouts

def tensor_blocks(a: Complex, b: Complex, n: int):
    """Blocks of (A (x) B)_n: [(i, j, dimA_i, dimB_j)], ascending i, no empties."""
    out = []
    for i in a.degrees():
        j = n - i
        if a.dim(i) and b.dim(j):
            out.append((i, j, a.dim(i), b.dim(j)))
    return out


def hom_blocks(a: Complex, b: Complex, n: int):
    """Blocks of [A, B]_n: [(i, j, dimB_j, dimA_i)] with j = i + n, ascending i."""
    out = []
    for i in a.degrees():
        j = i + n
        if a.dim(i) and b.dim(j):
            out.append((i, j, b.dim(j), a.dim(i)))
    return out


def _offsets(blocks):
    offs = {}
    t = 0
    for blk in blocks:
        key = blk[:2]
        size = blk[2] * blk[3]
        offs[key] = (t, size)
        t += size
    return offs, t


# ---------------------------------------------------------------------------
# tensor product and internal hom

def tensor_obj(ctx: StructuralContext, a: Complex, b: Complex) -> Complex:
    p = ctx.p
    if a.is_empty() or b.is_empty():
        return Complex.empty(p)
    lo, hi = a.min_degree + b.min_degree, a.max_degree + b.max_degree
    layouts = {n: tensor_blocks(a, b, n) for n in range(lo, hi + 1)}
    dims = [sum(ai * bj for _, _, ai, bj in layouts[n]) for n in range(lo, hi + 1)]
    diffs = []
    for n in range(lo + 1, hi + 1):
        src, _ = _offsets(layouts[n])
        tgt, tsize = _offsets(layouts[n - 1])
        m = np.zeros((tsize, sum(ai * bj for _, _, ai, bj in layouts[n])), dtype=np.int64)
        for i, j, ai, bj in layouts[n]:
            c0, w = src[(i, j)]
            if (i - 1, j) in tgt:
                r0, _ = tgt[(i - 1, j)]
                blk = np.kron(a.diff(i).a, np.eye(bj, dtype=np.int64))
                m[r0 : r0 + blk.shape[0], c0 : c0 + w] = blk * ctx.sign("tens1", i, j)
            if (i, j - 1) in tgt:
                r0, _ = tgt[(i, j - 1)]
                blk = np.kron(np.eye(ai, dtype=np.int64), b.diff(j).a)
                m[r0 : r0 + blk.shape[0], c0 : c0 + w] = blk * ctx.sign("tens2", i, j)
        diffs.append(Matrix.make(m, p))
    out = Complex.make(p, lo, dims, diffs)
    if ctx.certify and not validate(out):
        raise ChainMapError("tensor differential does not square to zero")
    return out


def hom_obj(ctx: StructuralContext, a: Complex, b: Complex) -> Complex:
    p = ctx.p
    if a.is_empty() or b.is_empty():
        return Complex.empty(p)
    lo, hi = b.min_degree - a.max_degree, b.max_degree - a.min_degree
    layouts = {n: hom_blocks(a, b, n) for n in range(lo, hi + 1)}
    dims = [sum(bj * ai for _, _, bj, ai in layouts[n]) for n in range(lo, hi + 1)]
    diffs = []
    for n in range(lo + 1, hi + 1):
        src, ssize = _offsets(layouts[n])
        tgt, tsize = _offsets(layouts[n - 1])
        m = np.zeros((tsize, ssize), dtype=np.int64)
        for i, j, bj, ai in layouts[n]:
            c0, w = src[(i, j)]
            if (i + 1, j) in tgt:
                # precompose with d^A_{i+1}: vec(phi d) = (d^T (x) I) vec(phi)
                r0, _ = tgt[(i + 1, j)]
                blk = np.kron(a.diff(i + 1).a.T, np.eye(bj, dtype=np.int64))
                m[r0 : r0 + blk.shape[0], c0 : c0 + w] = blk * ctx.sign("hom1", i, j)
            if (i, j - 1) in tgt:
                # postcompose with d^B_j: vec(d phi) = (I (x) d) vec(phi)
                r0, _ = tgt[(i, j - 1)]
                blk = np.kron(np.eye(ai, dtype=np.int64), b.diff(j).a)
                m[r0 : r0 + blk.shape[0], c0 : c0 + w] = blk * ctx.sign("hom2", i, j)
        diffs.append(Matrix.make(m, p))
    out = Complex.make(p, lo, dims, diffs)
    if ctx.certify and not validate(out):
        raise ChainMapError("hom differential does not square to zero")
    return out


def tensor_map(ctx: StructuralContext, f: ChainMap, g: ChainMap, certify=True) -> ChainMap:
    """f (x) g for degree-0 maps; block (i, j) acts by kron(f_i, g_j)."""
    if f.degree or g.degree:
        raise ValueError("tensor_map is defined for degree-0 maps")
    src = tensor_obj(ctx, f.source, g.source)
    tgt = tensor_obj(ctx, f.target, g.target)
    comps = {}
    for n in src.degrees():
        sblk = tensor_blocks(f.source, g.source, n)
        tblk = tensor_blocks(f.target, g.target, n)
        soff, ssz = _offsets(sblk)
        toff, tsz = _offsets(tblk)
        m = np.zeros((tsz, ssz), dtype=np.int64)
        for i, j, ai, bj in sblk:
            if (i, j) in toff:
                c0, _ = soff[(i, j)]
                r0, _ = toff[(i, j)]
                blk = np.kron(f.component(i).a, g.component(j).a)
                m[r0 : r0 + blk.shape[0], c0 : c0 + blk.shape[1]] = blk
        comps[n] = Matrix.make(m, ctx.p)
    return ChainMap.make(src, tgt, comps, 0, chain_sign=1 if (ctx.certify and certify) else None)


def hom_map(ctx: StructuralContext, u: ChainMap, v: ChainMap, certify=True) -> ChainMap:
    """[u, v] : [A, B] -> [A', B'] for u : A' -> A, v : B -> B' (degree 0);
    a hom block sends phi to v phi u."""
    if u.degree or v.degree:
        raise ValueError("hom_map is defined for degree-0 maps")
    a, ap = u.target, u.source
    b, bp = v.source, v.target
    src = hom_obj(ctx, a, b)
    tgt = hom_obj(ctx, ap, bp)
    comps = {}
    for n in src.degrees():
        sblk = hom_blocks(a, b, n)
        tblk = hom_blocks(ap, bp, n)
        soff, ssz = _offsets(sblk)
        toff, tsz = _offsets(tblk)
        m = np.zeros((tsz, ssz), dtype=np.int64)
        for i, j, bj, ai in sblk:
            if (i, j) in toff:
                c0, _ = soff[(i, j)]
                r0, _ = toff[(i, j)]
                blk = np.kron(u.component(i).a.T, v.component(j).a)
                m[r0 : r0 + blk.shape[0], c0 : c0 + blk.shape[1]] = blk
        comps[n] = Matrix.make(m, ctx.p)
    return ChainMap.make(src, tgt, comps, 0, chain_sign=1 if (ctx.certify and certify) else None)


# ---------------------------------------------------------------------------
# permutation-with-sign builders

def _keyed(blocks):
    """Normalize 4-tuple (i, j, d1, d2) block lists to ((i, j), d1, d2)."""
    return [((i, j), d1, d2) for i, j, d1, d2 in blocks]


def _offsets3(blocks):
    offs = {}
    t = 0
    for key, d1, d2 in blocks:
        offs[key] = (t, d1 * d2)
        t += d1 * d2
    return offs, t


def _build(ctx, src, tgt, src_layouts, tgt_layouts, rule):
    """Assemble a degree-0 chain map src -> tgt from per-block rules.

    Layout callables give, per degree n, lists of (key, d1, d2) blocks in
    storage order.  rule(n, block) -> (tgt_key, sign, content ndarray or
    None for identity content).
    """
    comps = {}
    for n in src.degrees():
        sblk = src_layouts(n)
        tblk = tgt_layouts(n)
        soff, ssz = _offsets3(sblk)
        toff, tsz = _offsets3(tblk)
        m = np.zeros((tsz, ssz), dtype=np.int64)
        for blk in sblk:
            key, d1, d2 = blk
            tkey, sgn, content = rule(n, blk)
            if tkey not in toff:
                if d1 * d2:
                    raise ChainMapError(f"target block {tkey} missing at degree {n}")
                continue
            c0, _ = soff[key]
            r0, _ = toff[tkey]
            if content is None:
                content = np.eye(d1 * d2, dtype=np.int64)
            m[r0 : r0 + content.shape[0], c0 : c0 + content.shape[1]] = content * sgn
        comps[n] = Matrix.make(m, ctx.p)
    return ChainMap.make(src, tgt, comps, 0, chain_sign=1 if ctx.certify else None)


def _commutation(a_dim: int, b_dim: int) -> np.ndarray:
    """Permutation matrix sending e_r (x) f_s to f_s (x) e_r."""
    m = np.zeros((a_dim * b_dim, a_dim * b_dim), dtype=np.int64)
    for r in range(a_dim):
        for s in range(b_dim):
            m[s * a_dim + r, r * b_dim + s] = 1
    return m


# ---------------------------------------------------------------------------
# structural transformations

def associator(ctx, a, b, c) -> ChainMap:
    """(A (x) B) (x) C -> A (x) (B (x) C), a signed permutation of the
    triple basis.

    The nested factor sits in the major Kronecker slot on the source side
    but the minor slot on the target side, so the permutation is computed
    on enumerated basis labels rather than on block offsets.
    """
    ab = tensor_obj(ctx, a, b)
    bc = tensor_obj(ctx, b, c)
    src = tensor_obj(ctx, ab, c)
    tgt = tensor_obj(ctx, a, bc)

    def src_labels(n):
        # ((AB)_m (x) C_k) indexes u*ck + gamma with u running over the
        # (i, j) blocks of (AB)_m, so the triple loop is (i,j),a,b,g.
        for m, k, _, ck in tensor_blocks(ab, c, n):
            for i, j, ai, bj in tensor_blocks(a, b, m):
                for al in range(ai):
                    for be in range(bj):
                        for ga in range(ck):
                            yield (i, al, j, be, k, ga)

    def tgt_labels(n):
        # (A_i (x) (BC)_l) indexes alpha*D + v with v over (j, k) blocks.
        for i, l, ai, _ in tensor_blocks(a, bc, n):
            for al in range(ai):
                for j, k, bj, ck in tensor_blocks(b, c, l):
                    for be in range(bj):
                        for ga in range(ck):
                            yield (i, al, j, be, k, ga)

    comps = {}
    for n in src.degrees():
        slab = list(src_labels(n))
        tpos = {lab: t for t, lab in enumerate(tgt_labels(n))}
        m = np.zeros((tgt.dim(n), src.dim(n)), dtype=np.int64)
        for s, lab in enumerate(slab):
            i, _, j, _, k, _ = lab
            m[tpos[lab], s] = ctx.sign("assoc", i, j, k)
        comps[n] = Matrix.make(m, ctx.p)
    return ChainMap.make(src, tgt, comps, 0, chain_sign=1 if ctx.certify else None)


def associator_inv(ctx, a, b, c) -> ChainMap:
    from .complexes import invert

    return invert(associator(ctx, a, b, c))


def left_unitor(ctx, b) -> ChainMap:
    """1 (x) B -> B; the single block per degree is kron(1, x) = x."""
    src = tensor_obj(ctx, ctx.unit, b)
    return ChainMap.make(
        src, b, {i: Matrix.identity(b.dim(i), ctx.p) for i in b.degrees()}, 0,
        chain_sign=1 if ctx.certify else None,
    )


def right_unitor(ctx, b) -> ChainMap:
    src = tensor_obj(ctx, b, ctx.unit)
    return ChainMap.make(
        src, b, {i: Matrix.identity(b.dim(i), ctx.p) for i in b.degrees()}, 0,
        chain_sign=1 if ctx.certify else None,
    )


def symmetry(ctx, a, b) -> ChainMap:
    """c_{A,B} : A (x) B -> B (x) A with block sign from the symmetry symbol."""
    src = tensor_obj(ctx, a, b)
    tgt = tensor_obj(ctx, b, a)

    def rule(n, blk):
        (i, j), ai, bj = blk
        return (j, i), ctx.sign("sym", i, j), _commutation(ai, bj)

    return _build(ctx, src, tgt, lambda n: _keyed(tensor_blocks(a, b, n)),
                  lambda n: _keyed(tensor_blocks(b, a, n)), rule)


def tp1(ctx, a, b) -> ChainMap:
    """TA (x) B -> T(A (x) B); block A_i (x) B_j carries the tp1 sign."""
    ta = ctx.suspend(a)
    src = tensor_obj(ctx, ta, b)
    tgt = ctx.suspend(tensor_obj(ctx, a, b))

    def tgt_blocks(n):
        # T(A (x) B)_n = (A (x) B)_{n-1}, keyed like the source (TA-degree, j)
        return [((i + 1, j), ai, bj) for i, j, ai, bj in tensor_blocks(a, b, n - 1)]

    def rule(n, blk):
        m, j = blk[0]
        return (m, j), ctx.sign("tp1", m - 1, j), None

    return _build(ctx, src, tgt, lambda n: _keyed(tensor_blocks(ta, b, n)), tgt_blocks, rule)


def tp2(ctx, a, b) -> ChainMap:
    """A (x) TB -> T(A (x) B)."""
    tb = ctx.suspend(b)
    src = tensor_obj(ctx, a, tb)
    tgt = ctx.suspend(tensor_obj(ctx, a, b))

    def tgt_blocks(n):
        return [((i, j + 1), ai, bj) for i, j, ai, bj in tensor_blocks(a, b, n - 1)]

    def rule(n, blk):
        i, m = blk[0]
        return (i, m), ctx.sign("tp2", i, m - 1), None

    return _build(ctx, src, tgt, lambda n: _keyed(tensor_blocks(a, tb, n)), tgt_blocks, rule)


def th1(ctx, a, b) -> ChainMap:
    """[T^{-1}A, B] -> T[A, B]; block hom(A_i, B_j) carries the th1 sign."""
    da = ctx.desuspend(a)
    src = hom_obj(ctx, da, b)
    tgt = ctx.suspend(hom_obj(ctx, a, b))

    def tgt_blocks(n):
        # T[A,B]_n = [A,B]_{n-1}: blocks (i, j) with j - i = n - 1, keyed by
        # the source indexing (i - 1, j) of [T^{-1}A, B]
        return [((i - 1, j), bj, ai) for i, j, bj, ai in hom_blocks(a, b, n - 1)]

    def rule(n, blk):
        ip, j = blk[0]
        return (ip, j), ctx.sign("th1", ip + 1, j), None

    return _build(ctx, src, tgt, lambda n: _keyed(hom_blocks(da, b, n)), tgt_blocks, rule)


def th2(ctx, a, b) -> ChainMap:
    """[A, TB] -> T[A, B]."""
    tb = ctx.suspend(b)
    src = hom_obj(ctx, a, tb)
    tgt = ctx.suspend(hom_obj(ctx, a, b))

    def tgt_blocks(n):
        return [((i, j + 1), bj, ai) for i, j, bj, ai in hom_blocks(a, b, n - 1)]

    def rule(n, blk):
        i, jp = blk[0]
        return (i, jp), ctx.sign("th2", i, jp - 1), None

    return _build(ctx, src, tgt, lambda n: _keyed(hom_blocks(a, tb, n)), tgt_blocks, rule)


def ath(ctx, u: ChainMap, a, b, c) -> ChainMap:
    """Adjunction on hom-sets: from u : A (x) B -> C to A -> [B, C].

    Entrywise partial transpose with the adjunction sign per (i, j) block.
    """
    src_t = tensor_obj(ctx, a, b)
    if u.source != src_t or u.degree != 0:
        raise ValueError("ath expects a degree-0 map out of the tensor product")
    hom_bc = hom_obj(ctx, b, c)
    comps = {}
    for i in a.degrees():
        ai = a.dim(i)
        tblk = hom_blocks(b, c, i)
        toff, tsz = _offsets(tblk)
        m = np.zeros((tsz, ai), dtype=np.int64)
        if ai:
            for j, l, cl, bj in tblk:
                # source block A_i (x) B_j inside (A (x) B)_{i+j}
                soff, _ = _offsets(tensor_blocks(a, b, i + j))
                if (i, j) not in soff:
                    continue
                c0, w = soff[(i, j)]
                ub = u.component(i + j).a[:, c0 : c0 + w]
                if ub.shape[0] == 0:
                    continue
                u3 = ub.reshape(cl, ai, bj)
                v3 = u3.transpose(2, 0, 1).reshape(bj * cl, ai)
                r0, _ = toff[(j, l)]
                m[r0 : r0 + bj * cl, :] = v3 * ctx.sign("ath", i, j)
        comps[i] = Matrix.make(m, ctx.p)
    return ChainMap.make(a, hom_bc, comps, 0, chain_sign=1 if ctx.certify else None)


def ath_inv(ctx, v: ChainMap, a, b, c) -> ChainMap:
    """Inverse adjunction: from v : A -> [B, C] to A (x) B -> C."""
    hom_bc = hom_obj(ctx, b, c)
    if v.source != a or v.target != hom_bc or v.degree != 0:
        raise ValueError("ath_inv expects a degree-0 map into the internal hom")
    src_t = tensor_obj(ctx, a, b)
    comps = {}
    for n in src_t.degrees():
        sblk = tensor_blocks(a, b, n)
        soff, ssz = _offsets(sblk)
        m = np.zeros((c.dim(n), ssz), dtype=np.int64)
        for i, j, ai, bj in sblk:
            cl = c.dim(n)
            if not cl:
                continue
            hoff, _ = _offsets(hom_blocks(b, c, i))
            if (j, n) not in hoff:
                continue
            r0, w = hoff[(j, n)]
            vb = v.component(i).a[r0 : r0 + w, :]  # (bj*cl) x ai
            v3 = vb.reshape(bj, cl, ai)
            u3 = v3.transpose(1, 2, 0).reshape(cl, ai * bj)
            c0, _ = soff[(i, j)]
            m[:, c0 : c0 + ai * bj] = u3 * ctx.sign("ath", i, j)
        comps[n] = Matrix.make(m, ctx.p)
    return ChainMap.make(src_t, c, comps, 0, chain_sign=1 if ctx.certify else None)


def ev_l(ctx, a, k) -> ChainMap:
    """[A, K] (x) A -> K, the counit of (- (x) A, [A, -])."""
    h = hom_obj(ctx, a, k)
    return ath_inv(ctx, ChainMap.identity(h), h, a, k)


def coev_l(ctx, a, k) -> ChainMap:
    """K -> [A, K (x) A], the unit of (- (x) A, [A, -])."""
    ka = tensor_obj(ctx, k, a)
    return ath(ctx, ChainMap.identity(ka), k, a, ka)


def ev_r(ctx, a, k) -> ChainMap:
    """A (x) [A, K] -> K, via the symmetry."""
    return compose(ev_l(ctx, a, k), symmetry(ctx, a, hom_obj(ctx, a, k)))


def coev_r(ctx, a, k) -> ChainMap:
    """K -> [A, A (x) K], via the symmetry."""
    return compose(hom_map(ctx, ChainMap.identity(a), symmetry(ctx, k, a)), coev_l(ctx, a, k))


def bid(ctx, a, k) -> ChainMap:
    """The double-dual map A -> [[A, K], K], adjoint of the right evaluation."""
    return ath(ctx, ev_r(ctx, a, k), a, hom_obj(ctx, a, k), k)


def exch(ctx, a, b, c, d) -> ChainMap:
    """(A(x)B)(x)(C(x)D) -> (A(x)C)(x)(B(x)D) as the standard associator and
    symmetry composite (no independent sign choices)."""
    idm = ChainMap.identity
    cd = tensor_obj(ctx, c, d)
    s1 = associator(ctx, a, b, cd)
    s2 = tensor_map(ctx, idm(a), associator_inv(ctx, b, c, d))
    s3 = tensor_map(ctx, idm(a), tensor_map(ctx, symmetry(ctx, b, c), idm(d)))
    s4 = tensor_map(ctx, idm(a), associator(ctx, c, b, d))
    bd = tensor_obj(ctx, b, d)
    s5 = associator_inv(ctx, a, c, bd)
    return compose(s5, compose(s4, compose(s3, compose(s2, s1))))


def dd(ctx, a, b, k, m) -> ChainMap:
    """[A,K] (x) [B,M] -> [A (x) B, K (x) M]: coevaluate, exchange, evaluate."""
    ha, hb = hom_obj(ctx, a, k), hom_obj(ctx, b, m)
    ab = tensor_obj(ctx, a, b)
    s1 = coev_l(ctx, ab, tensor_obj(ctx, ha, hb))
    s2 = hom_map(ctx, ChainMap.identity(ab), exch(ctx, ha, hb, a, b))
    s3 = hom_map(ctx, ChainMap.identity(ab),
                 tensor_map(ctx, ev_l(ctx, a, k), ev_l(ctx, b, m)))
    return compose(s3, compose(s2, s1))


# ---------------------------------------------------------------------------
# adjunction plumbing and the mate construction

@dataclass(frozen=True)
class Functor:
    obj: object
    map: object
    name: str = ""


@dataclass(frozen=True)
class Adjunction:
    """(left, right) with unit X -> R L X and counit L R Y -> Y."""

    left: Functor
    right: Functor
    unit: object
    counit: object
    name: str = ""


def identity_functor() -> Functor:
    return Functor(obj=lambda x: x, map=lambda f: f, name="Id")


def compose_functors(g: Functor, f: Functor) -> Functor:
    return Functor(obj=lambda x: g.obj(f.obj(x)), map=lambda u: g.map(f.map(u)),
                   name=f"{g.name}{f.name}")


def tensor_hom_adjunction(ctx: StructuralContext, b: Complex) -> Adjunction:
    """(- (x) B, [B, -]) with left evaluation/coevaluation as counit/unit."""
    left = Functor(
        obj=lambda x: tensor_obj(ctx, x, b),
        map=lambda u: tensor_map(ctx, u, ChainMap.identity(b)),
        name="-(x)B",
    )
    right = Functor(
        obj=lambda y: hom_obj(ctx, b, y),
        map=lambda v: hom_map(ctx, ChainMap.identity(b), v),
        name="[B,-]",
    )
    return Adjunction(left, right, unit=lambda x: coev_l(ctx, b, x),
                      counit=lambda y: ev_l(ctx, b, y), name="tensor-hom")


def mate(a_family, adj1: Adjunction, adj2: Adjunction, h: Functor, hp: Functor,
         comp=compose):
    """The mate of a : J2 H' -> H J1 across two adjunctions.

    Returns the family b : H' K1 -> K2 H given on an object X by

        unit_2 at H'K1X ; K2(a at K1X) ; K2 H (counit_1 at X).

    ``comp`` is the composition of the ambient category (chain maps by
    default; sheaf maps pass their own).
    """

    def b(x):
        k1x = adj1.right.obj(x)
        step1 = adj2.unit(hp.obj(k1x))
        step2 = adj2.right.map(a_family(k1x))
        step3 = adj2.right.map(h.map(adj1.counit(x)))
        return comp(step3, comp(step2, step1))

    return b


def mate_square_h(a_family, b_family, adj1, adj2, h, hp, x):
    """Both sides of the first exchange square at X (must agree for mates)."""
    k1x = adj1.right.obj(x)
    top = compose(adj2.counit(h.obj(x)), adj2.left.map(b_family(x)))
    bottom = compose(h.map(adj1.counit(x)), a_family(k1x))
    return top, bottom


def mate_square_hp(a_family, b_family, adj1, adj2, h, hp, x):
    """Both sides of the second exchange square at X."""
    right = compose(b_family(adj1.left.obj(x)), hp.map(adj1.unit(x)))
    left = compose(adj2.right.map(a_family(x)), adj2.unit(hp.obj(x)))
    return right, left


# ---------------------------------------------------------------------------
# evaluation/coevaluation suspension diagrams

def diag_ev_sides(ctx: StructuralContext, idx: int, a: Complex, k: Complex):
    """The two composites of the numbered evaluation/coevaluation squares
    (4..11) relating ev/coev to the suspension comparison maps."""
    from .complexes import invert

    idm = ChainMap.identity
    T, Tinv = ctx.suspend, ctx.desuspend
    hak = hom_obj(ctx, a, k)
    if idx == 4:
        # T(ev) o tp1 o (th2 (x) id) = ev at TK
        lhs = compose(tp1(ctx, hak, a), tensor_map(ctx, th2(ctx, a, k), idm(a)))
        lhs = compose(t_map(ctx, ev_l(ctx, a, k)), lhs)
        return lhs, ev_l(ctx, a, T(k))
    if idx == 5:
        lhs = compose(tp2(ctx, a, hak), tensor_map(ctx, idm(a), th2(ctx, a, k)))
        lhs = compose(t_map(ctx, ev_r(ctx, a, k)), lhs)
        return lhs, ev_r(ctx, a, T(k))
    if idx == 6:
        ka = tensor_obj(ctx, k, a)
        lhs = compose(hom_map(ctx, idm(a), tp1(ctx, k, a)), coev_l(ctx, a, T(k)))
        rhs = compose(invert(th2(ctx, a, ka)), t_map(ctx, coev_l(ctx, a, k)))
        return lhs, rhs
    if idx == 7:
        ak = tensor_obj(ctx, a, k)
        lhs = compose(hom_map(ctx, idm(a), tp2(ctx, a, k)), coev_r(ctx, a, T(k)))
        rhs = compose(invert(th2(ctx, a, ak)), t_map(ctx, coev_r(ctx, a, k)))
        return lhs, rhs
    if idx == 8:
        # ev o "tp1^{-1}" o tp2 = ev at TA o (T^{-1}th1 (x) id)
        ta = T(a)
        lhs = compose(invert(tp1(ctx, Tinv(hak), a)), tp2(ctx, Tinv(hak), a))
        lhs = compose(ev_l(ctx, a, k), lhs)
        rhs = compose(ev_l(ctx, ta, k),
                      tensor_map(ctx, tinv_map(ctx, th1(ctx, ta, k)), idm(ta)))
        return lhs, rhs
    if idx == 9:
        ta = T(a)
        lhs = compose(invert(tp2(ctx, a, Tinv(hak))), tp1(ctx, a, Tinv(hak)))
        lhs = compose(ev_r(ctx, a, k), lhs)
        rhs = compose(ev_r(ctx, ta, k),
                      tensor_map(ctx, idm(ta), tinv_map(ctx, th1(ctx, ta, k))))
        return lhs, rhs
    if idx == 10:
        ta = T(a)
        kta = tensor_obj(ctx, k, ta)
        ka = tensor_obj(ctx, k, a)
        lhs = compose(tinv_map(ctx, invert(th1(ctx, ta, kta))), coev_l(ctx, ta, k))
        rhs = compose(tinv_map(ctx, invert(th2(ctx, a, ka))), coev_l(ctx, a, k))
        rhs = compose(tinv_map(ctx, hom_map(ctx, idm(a), invert(tp2(ctx, k, a)))), rhs)
        return lhs, rhs
    if idx == 11:
        ta = T(a)
        tak = tensor_obj(ctx, ta, k)
        ak = tensor_obj(ctx, a, k)
        lhs = compose(tinv_map(ctx, invert(th1(ctx, ta, tak))), coev_r(ctx, ta, k))
        rhs = compose(tinv_map(ctx, invert(th2(ctx, a, ak))), coev_r(ctx, a, k))
        rhs = compose(tinv_map(ctx, hom_map(ctx, idm(a), invert(tp1(ctx, a, k)))), rhs)
        return lhs, rhs
    raise KeyError(f"no evaluation square numbered {idx}")


def diag_ev_check(ctx: StructuralContext, idx: int, a: Complex, k: Complex) -> bool:
    lhs, rhs = diag_ev_sides(ctx, idx, a, k)
    return lhs == rhs


def t_map(ctx: StructuralContext, f: ChainMap) -> ChainMap:
    """Apply the strict suspension to a degree-0 chain map (same matrices,
    shifted degrees)."""
    src, tgt = ctx.suspend(f.source), ctx.suspend(f.target)
    comps = {i + 1: f.component(i) for i in f.source.degrees()}
    return ChainMap.make(src, tgt, comps, 0, chain_sign=None)


def tinv_map(ctx: StructuralContext, f: ChainMap) -> ChainMap:
    src, tgt = ctx.desuspend(f.source), ctx.desuspend(f.target)
    comps = {i - 1: f.component(i) for i in f.source.degrees()}
    return ChainMap.make(src, tgt, comps, 0, chain_sign=None)


# ---------------------------------------------------------------------------
# registry of structural transforms by name

def structural(ctx: StructuralContext, name: str, *args):
    """Build a named structural transformation; raises on unknown names."""
    from .complexes import invert

    table = {
        "assoc": associator,
        "assoc_inv": associator_inv,
        "unit_l": lambda c, b: left_unitor(c, b),
        "unit_l_inv": lambda c, b: invert(left_unitor(c, b)),
        "unit_r": lambda c, b: right_unitor(c, b),
        "unit_r_inv": lambda c, b: invert(right_unitor(c, b)),
        "sym": symmetry,
        "tp1": tp1,
        "tp1_inv": lambda c, a, b: invert(tp1(c, a, b)),
        "tp2": tp2,
        "tp2_inv": lambda c, a, b: invert(tp2(c, a, b)),
        "th1": th1,
        "th1_inv": lambda c, a, b: invert(th1(c, a, b)),
        "th2": th2,
        "th2_inv": lambda c, a, b: invert(th2(c, a, b)),
        "ev_l": ev_l,
        "coev_l": coev_l,
        "ev_r": ev_r,
        "coev_r": coev_r,
        "bid": bid,
        "dd": dd,
        "exch": exch,
        "ath": ath,
        "ath_inv": ath_inv,
    }
    if name not in table:
        raise KeyError(f"no such transform: {name}")
    return table[name](ctx, *args)
