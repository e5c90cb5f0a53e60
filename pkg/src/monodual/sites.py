"""Complexes of sheaves on finite sets and the three functors f*, f_*, f^!.

A sheaf complex on a finite set X is just one bounded complex per point.
For a set map f : X -> Y:

* f*  takes the stalk at f(x)                      (pullback);
* f_* takes the direct sum over the fiber, ordered by source labels
      (pushforward, right adjoint to f*);
* f^! agrees with f* on objects but is the *right* adjoint of f_*: its
      unit is the fiber inclusion and its counit the fiber summation.

This is the smallest model in which the projection morphism and cartesian
base change are genuinely invertible, so every derived transformation
(fh, fg, ff, q, qh, rr, sh', sp, xi, eps, gam, the pseudofunctor
structure maps and the relative-object cocycle) can be built as its
defining composite and compared exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from . import monoidal as mon
from .complexes import ChainMap, Complex, compose as ccompose, direct_sum, validate
from .flinalg import Matrix, block_direct_sum
from .monoidal import Adjunction, Functor, StructuralContext


class AssumptionError(ValueError):
    """A transform needed an isomorphism assumption that fails here."""


# ---------------------------------------------------------------------------
# finite sets and maps

@dataclass(frozen=True)
class FiniteMap:
    source: tuple
    target: tuple
    mapping: tuple  # pairs (x, f(x)) in source order

    @staticmethod
    def make(source, target, mapping: dict) -> "FiniteMap":
        source = tuple(source)
        target = tuple(target)
        if set(mapping) != set(source):
            raise ValueError("mapping must be total on the source")
        for x, y in mapping.items():
            if y not in target:
                raise ValueError(f"image {y!r} is not in the target")
        return FiniteMap(source, target, tuple((x, mapping[x]) for x in source))

    @staticmethod
    def identity(labels) -> "FiniteMap":
        labels = tuple(labels)
        return FiniteMap.make(labels, labels, {x: x for x in labels})

    def __call__(self, x):
        for a, b in self.mapping:
            if a == x:
                return b
        raise KeyError(x)

    def fiber(self, y) -> tuple:
        return tuple(x for x, b in self.mapping if b == y)

    def is_identity(self) -> bool:
        return self.source == self.target and all(a == b for a, b in self.mapping)

    def to_json(self) -> dict:
        return {
            "source": list(self.source),
            "target": list(self.target),
            "map": {x: y for x, y in self.mapping},
        }

    @staticmethod
    def from_json(obj: dict) -> "FiniteMap":
        return FiniteMap.make(obj["source"], obj["target"], obj["map"])


def compose_maps(g: FiniteMap, f: FiniteMap) -> FiniteMap:
    if f.target != g.source:
        raise ValueError("incomposable finite maps")
    return FiniteMap.make(f.source, g.target, {x: g(f(x)) for x in f.source})


@dataclass(frozen=True)
class CommSquare:
    """V --gbar--> Y, V --fbar--> X, Y --f--> Z, X --g--> Z with
    f gbar = g fbar; cartesian iff V is canonically the fiber product."""

    f: FiniteMap
    g: FiniteMap
    fbar: FiniteMap
    gbar: FiniteMap

    def __post_init__(self):
        if self.f.target != self.g.target or self.fbar.source != self.gbar.source:
            raise ValueError("square corners do not line up")
        if self.gbar.target != self.f.source or self.fbar.target != self.g.source:
            raise ValueError("square corners do not line up")
        for v in self.fbar.source:
            if self.f(self.gbar(v)) != self.g(self.fbar(v)):
                raise ValueError("square does not commute")

    @property
    def cartesian(self) -> bool:
        pairs = [(self.fbar(v), self.gbar(v)) for v in self.fbar.source]
        want = {
            (x, y)
            for x in self.g.source
            for y in self.f.source
            if self.g(x) == self.f(y)
        }
        return len(pairs) == len(set(pairs)) == len(want) and set(pairs) == want


def fiber_product_square(g: FiniteMap, f: FiniteMap) -> CommSquare:
    """The cartesian square over g : X -> Z and f : Y -> Z with
    V = {(x, y) : g x = f y}, labeled 'x&y'."""
    if g.target != f.target:
        raise ValueError("maps must share a target")
    pairs = [(x, y) for x in g.source for y in f.source if g(x) == f(y)]
    labels = tuple(f"{x}&{y}" for x, y in pairs)
    fbar = FiniteMap.make(labels, g.source, {f"{x}&{y}": x for x, y in pairs})
    gbar = FiniteMap.make(labels, f.source, {f"{x}&{y}": y for x, y in pairs})
    return CommSquare(f=f, g=g, fbar=fbar, gbar=gbar)


# ---------------------------------------------------------------------------
# sheaf complexes and maps

@dataclass(frozen=True)
class SheafComplex:
    base: tuple
    stalks: tuple  # Complex per base label, aligned

    @staticmethod
    def make(base, stalks) -> "SheafComplex":
        base = tuple(base)
        stalks = tuple(stalks)
        if len(base) != len(stalks):
            raise ValueError("one stalk per base point required")
        ps = {c.p for c in stalks}
        if len(ps) > 1:
            raise ValueError("stalks over different fields")
        return SheafComplex(base, stalks)

    def stalk(self, x) -> Complex:
        return self.stalks[self.base.index(x)]

    @property
    def p(self) -> int:
        return self.stalks[0].p if self.stalks else 3

    def to_json(self) -> dict:
        return {
            "base": list(self.base),
            "stalks": {x: c.to_json() for x, c in zip(self.base, self.stalks)},
        }

    @staticmethod
    def from_json(obj: dict) -> "SheafComplex":
        base = tuple(obj["base"])
        return SheafComplex.make(base, [Complex.from_json(obj["stalks"][x]) for x in base])


def unit_sheaf(ctx: StructuralContext, base) -> SheafComplex:
    return SheafComplex.make(base, [ctx.unit for _ in base])


@dataclass(frozen=True)
class SheafMap:
    source: SheafComplex
    target: SheafComplex
    maps: tuple  # ChainMap per base label

    @staticmethod
    def make(source, target, maps) -> "SheafMap":
        maps = tuple(maps)
        if source.base != target.base or len(maps) != len(source.base):
            raise ValueError("sheaf map needs aligned bases")
        for m, s, t in zip(maps, source.stalks, target.stalks):
            if m.source != s or m.target != t:
                raise ValueError("stalk map endpoints disagree with the sheaves")
        degs = {m.degree for m in maps}
        if len(degs) > 1:
            raise ValueError("stalk maps of mixed degree")
        return SheafMap(source, target, maps)

    @staticmethod
    def identity(a: SheafComplex) -> "SheafMap":
        return SheafMap.make(a, a, [ChainMap.identity(c) for c in a.stalks])

    def at(self, x) -> ChainMap:
        return self.maps[self.source.base.index(x)]

    @property
    def degree(self) -> int:
        return self.maps[0].degree if self.maps else 0

    def scale(self, c: int) -> "SheafMap":
        return SheafMap(self.source, self.target, tuple(m.scale(c) for m in self.maps))

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "maps": {x: m.to_json() for x, m in zip(self.source.base, self.maps)},
        }


def scompose(g: SheafMap, f: SheafMap) -> SheafMap:
    if f.target != g.source:
        raise ValueError("incomposable sheaf maps")
    return SheafMap.make(f.source, g.target,
                         [ccompose(gm, fm) for gm, fm in zip(g.maps, f.maps)])


def scompose_all(*maps: SheafMap) -> SheafMap:
    out = maps[0]
    for m in maps[1:]:
        out = scompose(m, out)
    return out


def sheaf_is_iso(f: SheafMap) -> bool:
    from .complexes import is_isomorphism

    return all(is_isomorphism(m) for m in f.maps)


def sheaf_invert(f: SheafMap, what: str = "map") -> SheafMap:
    from .complexes import invert

    if not sheaf_is_iso(f):
        raise AssumptionError(f"assumption violated: {what}")
    return SheafMap.make(f.target, f.source, [invert(m) for m in f.maps])


def identity_between(a: SheafComplex, b: SheafComplex) -> SheafMap:
    """Identity components between structurally equal sheaf complexes."""
    if a != b:
        raise ValueError("objects are not structurally equal")
    return SheafMap.make(a, b, [ChainMap.identity(c) for c in a.stalks])


# ---------------------------------------------------------------------------
# the stalkwise monoidal structure

class Site:
    """The monoidal structure of one fiber category, applied stalkwise."""

    def __init__(self, ctx: StructuralContext, base):
        self.ctx = ctx
        self.base = tuple(base)

    def _lift_obj(self, build, *objs):
        return SheafComplex.make(
            self.base, [build(*(o.stalk(x) for o in objs)) for x in self.base]
        )

    def _lift_map(self, build, *objs):
        maps = [build(*(o.stalk(x) for o in objs)) for x in self.base]
        return maps

    @property
    def unit(self) -> SheafComplex:
        return unit_sheaf(self.ctx, self.base)

    def tensor(self, a, b) -> SheafComplex:
        return self._lift_obj(lambda x, y: mon.tensor_obj(self.ctx, x, y), a, b)

    def hom(self, a, b) -> SheafComplex:
        return self._lift_obj(lambda x, y: mon.hom_obj(self.ctx, x, y), a, b)

    def tmap(self, u: SheafMap, v: SheafMap) -> SheafMap:
        return SheafMap.make(
            self.tensor(u.source, v.source), self.tensor(u.target, v.target),
            [mon.tensor_map(self.ctx, a, b) for a, b in zip(u.maps, v.maps)],
        )

    def hmap(self, u: SheafMap, v: SheafMap) -> SheafMap:
        return SheafMap.make(
            self.hom(u.target, v.source), self.hom(u.source, v.target),
            [mon.hom_map(self.ctx, a, b) for a, b in zip(u.maps, v.maps)],
        )

    def _structural(self, build, src, tgt, *objs):
        return SheafMap.make(src, tgt, self._lift_map(build, *objs))

    def ev_l(self, a, k) -> SheafMap:
        return self._structural(lambda x, y: mon.ev_l(self.ctx, x, y),
                                self.tensor(self.hom(a, k), a), k, a, k)

    def coev_l(self, a, k) -> SheafMap:
        return self._structural(lambda x, y: mon.coev_l(self.ctx, x, y),
                                k, self.hom(a, self.tensor(k, a)), a, k)

    def ev_r(self, a, k) -> SheafMap:
        return self._structural(lambda x, y: mon.ev_r(self.ctx, x, y),
                                self.tensor(a, self.hom(a, k)), k, a, k)

    def coev_r(self, a, k) -> SheafMap:
        return self._structural(lambda x, y: mon.coev_r(self.ctx, x, y),
                                k, self.hom(a, self.tensor(a, k)), a, k)

    def bid(self, a, k) -> SheafMap:
        return self._structural(lambda x, y: mon.bid(self.ctx, x, y),
                                a, self.hom(self.hom(a, k), k), a, k)

    def sym(self, a, b) -> SheafMap:
        return self._structural(lambda x, y: mon.symmetry(self.ctx, x, y),
                                self.tensor(a, b), self.tensor(b, a), a, b)

    def assoc(self, a, b, c) -> SheafMap:
        return self._structural(lambda x, y, z: mon.associator(self.ctx, x, y, z),
                                self.tensor(self.tensor(a, b), c),
                                self.tensor(a, self.tensor(b, c)), a, b, c)

    def assoc_inv(self, a, b, c) -> SheafMap:
        return sheaf_invert(self.assoc(a, b, c))

    def unit_l(self, a) -> SheafMap:
        return self._structural(lambda x: mon.left_unitor(self.ctx, x),
                                self.tensor(self.unit, a), a, a)

    def unit_r(self, a) -> SheafMap:
        return self._structural(lambda x: mon.right_unitor(self.ctx, x),
                                self.tensor(a, self.unit), a, a)

    def exch(self, a, b, c, d) -> SheafMap:
        return self._structural(lambda w, x, y, z: mon.exch(self.ctx, w, x, y, z),
                                self.tensor(self.tensor(a, b), self.tensor(c, d)),
                                self.tensor(self.tensor(a, c), self.tensor(b, d)),
                                a, b, c, d)

    def dd(self, a, b, k, m) -> SheafMap:
        return self._structural(lambda w, x, y, z: mon.dd(self.ctx, w, x, y, z),
                                self.tensor(self.hom(a, k), self.hom(b, m)),
                                self.hom(self.tensor(a, b), self.tensor(k, m)),
                                a, b, k, m)

    def identity(self, a) -> SheafMap:
        return SheafMap.identity(a)

    def tensor_hom_adjunction(self, b: SheafComplex) -> Adjunction:
        left = Functor(obj=lambda x: self.tensor(x, b),
                       map=lambda u: self.tmap(u, SheafMap.identity(b)))
        right = Functor(obj=lambda y: self.hom(b, y),
                        map=lambda v: self.hmap(SheafMap.identity(b), v))
        return Adjunction(left, right, unit=lambda x: self.coev_l(b, x),
                          counit=lambda y: self.ev_l(b, y), name="tensor-hom")


# ---------------------------------------------------------------------------
# fiber bookkeeping matrices

def _inclusion(dims, k, p) -> Matrix:
    """Column block embedding part k into the direct sum of parts."""
    total = sum(dims)
    m = np.zeros((total, dims[k]), dtype=np.int64)
    off = sum(dims[:k])
    m[off : off + dims[k], :] = np.eye(dims[k], dtype=np.int64)
    return Matrix.make(m, p)


def _projection(dims, k, p) -> Matrix:
    return _inclusion(dims, k, p).T


class SixFunctors:
    """The three functors of a fixed finite map plus every derived transform."""

    def __init__(self, ctx: StructuralContext, f: FiniteMap):
        self.ctx = ctx
        self.f = f
        self.sx = Site(ctx, f.source)  # the source fiber categories
        self.sy = Site(ctx, f.target)

        self.star = Functor(
            obj=self.pull_obj, map=self.pull_map, name=f"({f.mapping})*")
        self.lower = Functor(
            obj=self.push_obj, map=self.push_map, name="lower")
        self.shriek = Functor(
            obj=self.pull_obj, map=self.pull_map, name="shriek")

        self.adj_star = Adjunction(self.star, self.lower,
                                   unit=self.unit_star, counit=self.counit_star,
                                   name="(f*, f_*)")
        self.adj_shriek = Adjunction(self.lower, self.shriek,
                                     unit=self.unit_shriek, counit=self.counit_shriek,
                                     name="(f_*, f^!)")

    # functors ---------------------------------------------------------------
    def pull_obj(self, b: SheafComplex) -> SheafComplex:
        if b.base != self.f.target:
            raise ValueError("base mismatch for pullback")
        return SheafComplex.make(self.f.source, [b.stalk(self.f(x)) for x in self.f.source])

    def pull_map(self, v: SheafMap) -> SheafMap:
        return SheafMap.make(self.pull_obj(v.source), self.pull_obj(v.target),
                             [v.at(self.f(x)) for x in self.f.source])

    def push_obj(self, a: SheafComplex) -> SheafComplex:
        if a.base != self.f.source:
            raise ValueError("base mismatch for pushforward")
        return SheafComplex.make(
            self.f.target,
            [direct_sum([a.stalk(x) for x in self.f.fiber(y)], p=self.ctx.p)
             for y in self.f.target],
        )

    def push_map(self, u: SheafMap) -> SheafMap:
        src, tgt = self.push_obj(u.source), self.push_obj(u.target)
        maps = []
        for yi, y in enumerate(self.f.target):
            fiber = self.f.fiber(y)
            parts = [u.at(x) for x in fiber]
            s, t = src.stalks[yi], tgt.stalks[yi]
            comps = {}
            for i in s.degrees():
                blocks = [m.component(i) for m in parts]
                comps[i] = (block_direct_sum(blocks) if blocks
                            else Matrix.zeros(t.dim(i), s.dim(i), self.ctx.p))
            maps.append(ChainMap.make(s, t, comps, u.degree, chain_sign=None))
        return SheafMap.make(src, tgt, maps)

    # adjunction units and counits -------------------------------------------
    def unit_star(self, b: SheafComplex) -> SheafMap:
        """B -> f_* f* B, the fiberwise diagonal."""
        tgt = self.push_obj(self.pull_obj(b))
        maps = []
        for yi, y in enumerate(self.f.target):
            fiber = self.f.fiber(y)
            s = b.stalks[yi]
            t = tgt.stalks[yi]
            comps = {
                i: Matrix.make(np.tile(np.eye(s.dim(i), dtype=np.int64), (len(fiber), 1)), self.ctx.p)
                if fiber else Matrix.zeros(0, s.dim(i), self.ctx.p)
                for i in s.degrees()
            }
            maps.append(ChainMap.make(s, t, comps, 0, chain_sign=None))
        return SheafMap.make(b, tgt, maps)

    def counit_star(self, a: SheafComplex) -> SheafMap:
        """f* f_* A -> A, projection onto the fiber component."""
        src = self.pull_obj(self.push_obj(a))
        maps = []
        for xi, x in enumerate(self.f.source):
            fiber = self.f.fiber(self.f(x))
            k = fiber.index(x)
            s, t = src.stalks[xi], a.stalks[xi]
            comps = {
                i: _projection([a.stalk(xp).dim(i) for xp in fiber], k, self.ctx.p)
                for i in s.degrees()
            }
            maps.append(ChainMap.make(s, t, comps, 0, chain_sign=None))
        return SheafMap.make(src, a, maps)

    def unit_shriek(self, a: SheafComplex) -> SheafMap:
        """A -> f^! f_* A, inclusion of the fiber component."""
        tgt = self.pull_obj(self.push_obj(a))
        maps = []
        for xi, x in enumerate(self.f.source):
            fiber = self.f.fiber(self.f(x))
            k = fiber.index(x)
            s, t = a.stalks[xi], tgt.stalks[xi]
            comps = {
                i: _inclusion([a.stalk(xp).dim(i) for xp in fiber], k, self.ctx.p)
                for i in s.degrees()
            }
            maps.append(ChainMap.make(s, t, comps, 0, chain_sign=None))
        return SheafMap.make(a, tgt, maps)

    def counit_shriek(self, b: SheafComplex) -> SheafMap:
        """f_* f^! B -> B, the fiberwise summation."""
        src = self.push_obj(self.pull_obj(b))
        maps = []
        for yi, y in enumerate(self.f.target):
            fiber = self.f.fiber(y)
            s, t = src.stalks[yi], b.stalks[yi]
            comps = {
                i: Matrix.make(np.tile(np.eye(t.dim(i), dtype=np.int64), (1, len(fiber))), self.ctx.p)
                if fiber else Matrix.zeros(t.dim(i), 0, self.ctx.p)
                for i in s.degrees()
            }
            maps.append(ChainMap.make(s, t, comps, 0, chain_sign=None))
        return SheafMap.make(src, b, maps)

    # monoidal structure of the pullback ---------------------------------------
    def fp(self, a, b) -> SheafMap:
        """f*A (x) f*B -> f*(A (x) B): the stalkwise identity reindexing."""
        src = self.sx.tensor(self.pull_obj(a), self.pull_obj(b))
        tgt = self.pull_obj(self.sy.tensor(a, b))
        return identity_between(src, tgt)

    def fp_inv(self, a, b) -> SheafMap:
        m = self.fp(a, b)
        return SheafMap.make(m.target, m.source, m.maps)

    def fu(self) -> SheafMap:
        """f*(1_Y) -> 1_X, an equality in this model."""
        return identity_between(self.pull_obj(self.sy.unit), self.sx.unit)

    # derived transformations ---------------------------------------------------
    def fh(self, a, b) -> SheafMap:
        """f*[A, B] -> [f*A, f*B]: coevaluate, multiply, evaluate."""
        fa = self.pull_obj(a)
        fab = self.pull_obj(self.sy.hom(a, b))
        s1 = self.sx.coev_l(fa, fab)
        s2 = self.sx.hmap(SheafMap.identity(fa), self.fp(self.sy.hom(a, b), a))
        s3 = self.sx.hmap(SheafMap.identity(fa), self.pull_map(self.sy.ev_l(a, b)))
        return scompose_all(s1, s2, s3)

    def fg(self, a, b) -> SheafMap:
        """f_*A (x) f_*B -> f_*(A (x) B)."""
        pa, pb = self.push_obj(a), self.push_obj(b)
        s1 = self.unit_star(self.sy.tensor(pa, pb))
        s2 = self.push_map(self.fp_inv(pa, pb))
        s3 = self.push_map(self.sx.tmap(self.counit_star(a), self.counit_star(b)))
        return scompose_all(s1, s2, s3)

    def ff(self, a, b) -> SheafMap:
        """f_*[A, B] -> [f_*A, f_*B]."""
        pa = self.push_obj(a)
        pab = self.push_obj(self.sx.hom(a, b))
        s1 = self.sy.coev_l(pa, pab)
        s2 = self.sy.hmap(SheafMap.identity(pa), self.fg(self.sx.hom(a, b), a))
        s3 = self.sy.hmap(SheafMap.identity(pa), self.push_map(self.sx.ev_l(a, b)))
        return scompose_all(s1, s2, s3)

    def q(self, a, b) -> SheafMap:
        """f_*A (x) B -> f_*(A (x) f*B), the projection morphism."""
        pa = self.push_obj(a)
        s1 = self.unit_star(self.sy.tensor(pa, b))
        s2 = self.push_map(self.fp_inv(pa, b))
        s3 = self.push_map(self.sx.tmap(self.counit_star(a),
                                        SheafMap.identity(self.pull_obj(b))))
        return scompose_all(s1, s2, s3)

    def q_inv(self, a, b) -> SheafMap:
        return sheaf_invert(self.q(a, b), "q")

    def qh(self, a, b) -> SheafMap:
        """[A, f_*B] -> f_*[f*A, B]."""
        pb = self.push_obj(b)
        s1 = self.unit_star(self.sy.hom(a, pb))
        s2 = self.push_map(self.fh(a, pb))
        s3 = self.push_map(self.sx.hmap(SheafMap.identity(self.pull_obj(a)),
                                        self.counit_star(b)))
        return scompose_all(s1, s2, s3)

    def qh_inv(self, a, b) -> SheafMap:
        """f_*[f*A, B] -> [A, f_*B] via the projection morphism."""
        fa = self.pull_obj(a)
        h = self.sx.hom(fa, b)
        ph = self.push_obj(h)
        s1 = self.sy.coev_l(a, ph)
        s2 = self.sy.hmap(SheafMap.identity(a), self.q(h, a))
        s3 = self.sy.hmap(SheafMap.identity(a),
                          self.push_map(self.sx.ev_l(fa, b)))
        return scompose_all(s1, s2, s3)

    def rr(self, a, k) -> SheafMap:
        """f_*[A, f^!K] -> [f_*A, K], the push-forward structure map."""
        fk = self.shriek.obj(k)
        s1 = self.ff(a, fk)
        s2 = self.sy.hmap(SheafMap.identity(self.push_obj(a)), self.counit_shriek(k))
        return scompose_all(s1, s2)

    def sh_prime(self, a, b) -> SheafMap:
        """[f*A, f^!B] -> f^![A, B]."""
        fa, fb = self.pull_obj(a), self.shriek.obj(b)
        h = self.sx.hom(fa, fb)
        s1 = self.unit_shriek(h)
        s2 = self.pull_map(self.qh_inv(a, fb))
        s3 = self.pull_map(self.sy.hmap(SheafMap.identity(a), self.counit_shriek(b)))
        return scompose_all(s1, s2, s3)

    def sh(self, a, b) -> SheafMap:
        return sheaf_invert(self.sh_prime(a, b), "q")

    def sp(self, a, b) -> SheafMap:
        """f^!A (x) f*B -> f^!(A (x) B); needs the projection morphism
        invertible (true in this model, verified per instance)."""
        fa = self.shriek.obj(a)
        fb = self.pull_obj(b)
        s1 = self.unit_shriek(self.sx.tensor(fa, fb))
        s2 = self.pull_map(self.q_inv(fa, b))
        s3 = self.pull_map(self.sy.tmap(self.counit_shriek(a), SheafMap.identity(b)))
        return scompose_all(s1, s2, s3)

    def sp_via_sh(self, a, b) -> SheafMap:
        """The equivalent coevaluate/sh/evaluate route to sp."""
        fa, fb = self.shriek.obj(a), self.pull_obj(b)
        ab = self.sy.tensor(a, b)
        s1 = self.sx.tmap(self.pull_map(self.sy.coev_l(b, a)), SheafMap.identity(fb))
        s2 = self.sx.tmap(self.sh(b, ab), SheafMap.identity(fb))
        s3 = self.sx.ev_l(fb, self.shriek.obj(ab))
        return scompose_all(s1, s2, s3)

    def omega_prime(self) -> SheafComplex:
        """The relative object f^!(1_Y) (the unit sheaf in this model)."""
        return self.shriek.obj(self.sy.unit)


# ---------------------------------------------------------------------------
# pseudofunctor structure maps

def ea(ctx, g: FiniteMap, f: FiniteMap, b: SheafComplex) -> SheafMap:
    """f* g* B -> (gf)* B, stalkwise the identity."""
    F, G, GF = SixFunctors(ctx, f), SixFunctors(ctx, g), SixFunctors(ctx, compose_maps(g, f))
    return identity_between(F.pull_obj(G.pull_obj(b)), GF.pull_obj(b))


def eb(ctx, g: FiniteMap, f: FiniteMap, a: SheafComplex) -> SheafMap:
    """(gf)_* A -> g_* f_* A, the fiber regrouping permutation."""
    F, G, GF = SixFunctors(ctx, f), SixFunctors(ctx, g), SixFunctors(ctx, compose_maps(g, f))
    src = GF.push_obj(a)
    tgt = G.push_obj(F.push_obj(a))
    maps = []
    for zi, z in enumerate(g.target):
        src_order = GF.f.fiber(z)
        tgt_order = [x for y in g.fiber(z) for x in f.fiber(y)]
        s, t = src.stalks[zi], tgt.stalks[zi]
        comps = {}
        for i in s.degrees():
            dims_src = [a.stalk(x).dim(i) for x in src_order]
            dims_tgt = [a.stalk(x).dim(i) for x in tgt_order]
            m = np.zeros((sum(dims_tgt), sum(dims_src)), dtype=np.int64)
            for k, x in enumerate(tgt_order):
                ks = src_order.index(x)
                r0 = sum(dims_tgt[:k])
                c0 = sum(dims_src[:ks])
                d = dims_tgt[k]
                m[r0 : r0 + d, c0 : c0 + d] = np.eye(d, dtype=np.int64)
            comps[i] = Matrix.make(m, ctx.p)
        maps.append(ChainMap.make(s, t, comps, 0, chain_sign=None))
    return SheafMap.make(src, tgt, maps)


def ec(ctx, g: FiniteMap, f: FiniteMap, b: SheafComplex) -> SheafMap:
    """f^! g^! B -> (gf)^! B, stalkwise the identity."""
    return ea(ctx, g, f, b)


def i_prime(ctx, g: FiniteMap, f: FiniteMap) -> SheafMap:
    """The relative-object multiplication w'_f (x) f*(w'_g) -> w'_{gf}."""
    F, G = SixFunctors(ctx, f), SixFunctors(ctx, g)
    wg = G.omega_prime()
    s1 = F.sp(F.sy.unit, wg)
    s2 = F.pull_map(F.sy.unit_l(wg))
    s3 = ec(ctx, g, f, G.sy.unit)
    return scompose_all(s1, s2, s3)


# ---------------------------------------------------------------------------
# base change

def xi(ctx, sq: CommSquare, b: SheafComplex) -> SheafMap:
    """gbar* f* B -> fbar* g* B, the composite of the two pseudofunctor
    identifications (an identity stalkwise)."""
    GB, FB = SixFunctors(ctx, sq.gbar), SixFunctors(ctx, sq.fbar)
    F, G = SixFunctors(ctx, sq.f), SixFunctors(ctx, sq.g)
    return identity_between(GB.pull_obj(F.pull_obj(b)), FB.pull_obj(G.pull_obj(b)))


def eps_family(ctx, sq: CommSquare):
    """The base-change map f* g_* -> gbar_* fbar* as the mate of xi."""
    F, G = SixFunctors(ctx, sq.f), SixFunctors(ctx, sq.g)
    FB, GB = SixFunctors(ctx, sq.fbar), SixFunctors(ctx, sq.gbar)
    return mon.mate(
        lambda b: xi(ctx, sq, b),
        G.adj_star, GB.adj_star, FB.star, F.star, comp=scompose,
    )


def gam_family(ctx, sq: CommSquare):
    """fbar* g^! -> gbar^! f*, the mate of the inverse base-change map.

    Each evaluation inverts eps on the object it needs; failure raises
    AssumptionError('assumption violated: eps')."""
    F, G = SixFunctors(ctx, sq.f), SixFunctors(ctx, sq.g)
    FB, GB = SixFunctors(ctx, sq.fbar), SixFunctors(ctx, sq.gbar)
    eps = eps_family(ctx, sq)
    return mon.mate(
        lambda b: sheaf_invert(eps(b), "eps"),
        G.adj_shriek, GB.adj_shriek, F.star, FB.star, comp=scompose,
    )


def base_change(ctx, sq: CommSquare, b: SheafComplex, k: SheafComplex | None = None) -> dict:
    """Evaluate eps at b (over the far source of g) and gam at k (over the
    shared target; defaults to g_* b).  gam absent is a value, not an
    error: it is omitted whenever the required inverse of eps does not
    exist on the instance."""
    eps = eps_family(ctx, sq)(b)
    out = {"eps": eps, "gam": None}
    if k is None:
        k = SixFunctors(ctx, sq.g).push_obj(b)
    try:
        out["gam"] = gam_family(ctx, sq)(k)
    except AssumptionError:
        pass
    return out


# ---------------------------------------------------------------------------
# generators for the harness

def random_finite_map(rng: random.Random, max_size: int = 3, tag: str = "") -> FiniteMap:
    nx = rng.randint(1, max_size)
    ny = rng.randint(1, max_size)
    xs = tuple(f"x{tag}{i}" for i in range(nx))
    ys = tuple(f"y{tag}{i}" for i in range(ny))
    return FiniteMap.make(xs, ys, {x: ys[rng.randrange(ny)] for x in xs})


def random_sheaf(rng: random.Random, base, max_len=2, max_dim=2, p=3) -> SheafComplex:
    from .complexes import random_complex

    return SheafComplex.make(
        base, [random_complex(rng.randrange(10**9), max_len, max_dim, p) for _ in base]
    )


def random_sheaf_map(rng: random.Random, a: SheafComplex, b: SheafComplex) -> SheafMap:
    from .complexes import random_chain_map

    return SheafMap.make(a, b, [random_chain_map(rng, s, t) for s, t in zip(a.stalks, b.stalks)])


def noncartesian_counterexample(ctx):
    """V empty over X = Y = Z = pt: eps is f*g_* B -> 0, not invertible
    for any nonzero B."""
    pt = ("*",)
    idm = FiniteMap.identity(pt)
    empty = FiniteMap.make((), pt, {})
    return CommSquare(f=idm, g=idm, fbar=empty, gbar=empty)


def transform(ctx, name: str, *args):
    """Registry of the derived transformations by name.

    Unary transforms take (f, objects...); the base-change family takes a
    CommSquare.  Unknown names raise KeyError.
    """
    unary = {
        "fp": lambda f, a, b: SixFunctors(ctx, f).fp(a, b),
        "fp_inv": lambda f, a, b: SixFunctors(ctx, f).fp_inv(a, b),
        "fh": lambda f, a, b: SixFunctors(ctx, f).fh(a, b),
        "fg": lambda f, a, b: SixFunctors(ctx, f).fg(a, b),
        "ff": lambda f, a, b: SixFunctors(ctx, f).ff(a, b),
        "q": lambda f, a, b: SixFunctors(ctx, f).q(a, b),
        "q_inv": lambda f, a, b: SixFunctors(ctx, f).q_inv(a, b),
        "qh": lambda f, a, b: SixFunctors(ctx, f).qh(a, b),
        "qh_inv": lambda f, a, b: SixFunctors(ctx, f).qh_inv(a, b),
        "rr": lambda f, a, k: SixFunctors(ctx, f).rr(a, k),
        "sh_prime": lambda f, a, b: SixFunctors(ctx, f).sh_prime(a, b),
        "sh": lambda f, a, b: SixFunctors(ctx, f).sh(a, b),
        "sp": lambda f, a, b: SixFunctors(ctx, f).sp(a, b),
        "sp_via_sh": lambda f, a, b: SixFunctors(ctx, f).sp_via_sh(a, b),
        "dd": lambda base, a, b, k, m: Site(ctx, base).dd(a, b, k, m),
        "ea": lambda g, f, b: ea(ctx, g, f, b),
        "eb": lambda g, f, a: eb(ctx, g, f, a),
        "ec": lambda g, f, b: ec(ctx, g, f, b),
        "i_prime": lambda g, f: i_prime(ctx, g, f),
        "xi": lambda sq, b: xi(ctx, sq, b),
        "eps": lambda sq, b: eps_family(ctx, sq)(b),
        "gam": lambda sq, k: gam_family(ctx, sq)(k),
    }
    if name not in unary:
        raise KeyError(f"no such transform: {name}")
    return unary[name](*args)
