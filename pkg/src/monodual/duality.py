"""Categories with duality over the sheaf model, duality-preserving
functors, their composition and morphisms, and transfer of symmetric
forms.

A duality is the pair (D_K = [-, K], bid) on one fiber site; pairs of
dualities act componentwise on the product category (objects and maps are
2-tuples), which is exactly what the tensor-product functor consumes.

Everything is checked, never assumed: diagram P certifies a functor as
duality-preserving, diagram M certifies a natural transformation between
two of them, and both checks are exact matrix comparisons on explicit
instances.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import monoidal as mon
from .monoidal import Functor, StructuralContext
from .sites import (
    SheafComplex,
    SheafMap,
    SixFunctors,
    Site,
    scompose,
    sheaf_is_iso,
)


class Duality:
    """The duality D_K = [-, K] with its double-dual family on one site."""

    def __init__(self, site: Site, k: SheafComplex):
        self.site = site
        self.k = k

    def obj(self, a):
        return self.site.hom(a, self.k)

    def map(self, u: SheafMap) -> SheafMap:
        """Contravariant action: u : A -> B gives D(u) : D(B) -> D(A)."""
        return self.site.hmap(u, SheafMap.identity(self.k))

    def bid(self, a) -> SheafMap:
        return self.site.bid(a, self.k)

    def check_eq1(self, a) -> bool:
        """D(bid_A) o bid_{DA} = id_{DA}."""
        da = self.obj(a)
        lhs = scompose(self.map(self.bid(a)), self.bid(da))
        return lhs == SheafMap.identity(da)

    def is_dualizing(self, a) -> bool:
        """bid invertible at a (strongness is checked, never assumed)."""
        return sheaf_is_iso(self.bid(a))

    def compose(self, g, f):
        return scompose(g, f)

    def identity(self, a):
        return SheafMap.identity(a)


class ProductDuality:
    """Componentwise duality on a product of two sites."""

    def __init__(self, d1, d2):
        self.d1, self.d2 = d1, d2

    def obj(self, pair):
        return (self.d1.obj(pair[0]), self.d2.obj(pair[1]))

    def map(self, pair):
        return (self.d1.map(pair[0]), self.d2.map(pair[1]))

    def bid(self, pair):
        return (self.d1.bid(pair[0]), self.d2.bid(pair[1]))

    def check_eq1(self, pair) -> bool:
        return self.d1.check_eq1(pair[0]) and self.d2.check_eq1(pair[1])

    def is_dualizing(self, pair) -> bool:
        return self.d1.is_dualizing(pair[0]) and self.d2.is_dualizing(pair[1])

    def compose(self, g, f):
        return (scompose(g[0], f[0]), scompose(g[1], f[1]))

    def identity(self, pair):
        return (SheafMap.identity(pair[0]), SheafMap.identity(pair[1]))


def make_duality(ctx: StructuralContext, base, k: SheafComplex) -> Duality:
    return Duality(Site(ctx, base), k)


@dataclass
class DPFunctor:
    """A functor together with its duality comparison family phi, where
    phi(A) : F(D1 A) -> D2(F A)."""

    functor: Functor
    source: object  # Duality or ProductDuality
    target: object
    phi: object     # callable A -> map in the target category
    name: str = ""


def check_dp(dp: DPFunctor, a) -> bool:
    """Diagram P at a: phi(D1 A) o F(bid1 A)  ==  D2(phi A) o bid2(F A)."""
    d1, d2, f = dp.source, dp.target, dp.functor
    lhs = scompose(dp.phi(d1.obj(a)), f.map(d1.bid(a)))
    rhs = scompose(d2.map(dp.phi(a)), d2.bid(f.obj(a)))
    return lhs == rhs


def check_dp_morphism(rho, dp_f: DPFunctor, dp_g: DPFunctor, a) -> bool:
    """Diagram M at a for rho : F -> G between duality-preserving functors:
    phi(A) == D2(rho A) o psi(A) o rho(D1 A)."""
    d1, d2 = dp_f.source, dp_f.target
    lhs = dp_f.phi(a)
    rhs = scompose(d2.map(rho(a)), scompose(dp_g.phi(a), rho(d1.obj(a))))
    return lhs == rhs


def compose_dp(dp2: DPFunctor, dp1: DPFunctor) -> DPFunctor:
    """<F', f'> o <F, f> = <F'F, f'F o F'f>."""

    def phi(a):
        return scompose(dp2.phi(dp1.functor.obj(a)), dp2.functor.map(dp1.phi(a)))

    return DPFunctor(
        functor=mon.compose_functors(dp2.functor, dp1.functor),
        source=dp1.source, target=dp2.target, phi=phi,
        name=f"{dp2.name}o{dp1.name}",
    )


def identity_dp(duality) -> DPFunctor:
    return DPFunctor(
        functor=Functor(obj=lambda a: a, map=lambda u: u, name="Id"),
        source=duality, target=duality,
        phi=lambda a: duality.identity(duality.obj(a)),
        name="Id",
    )


def i_iota(site: Site, iota: SheafMap, k=None, m=None) -> DPFunctor:
    """The identity functor with structure [-, iota] from D_K to D_M for
    a map iota : K -> M."""
    k = iota.source if k is None else k
    m = iota.target if m is None else m
    dk, dm = Duality(site, k), Duality(site, m)
    return DPFunctor(
        functor=Functor(obj=lambda a: a, map=lambda u: u, name="Id"),
        source=dk, target=dm,
        phi=lambda a: site.hmap(SheafMap.identity(a), iota),
        name="I_iota",
    )


# ---------------------------------------------------------------------------
# the concrete duality-preserving functors of the six-functor model

def dp_pullback(ctx, f, k: SheafComplex) -> DPFunctor:
    """<f*, fh_K> from (C_Y, D_K) to (C_X, D_{f*K})."""
    F = SixFunctors(ctx, f)
    return DPFunctor(
        functor=F.star,
        source=Duality(F.sy, k), target=Duality(F.sx, F.pull_obj(k)),
        phi=lambda a: F.fh(a, k),
        name="<f*,fh>",
    )


def dp_pushforward(ctx, f, k: SheafComplex) -> DPFunctor:
    """<f_*, rr_K> from (C_X, D_{f^!K}) to (C_Y, D_K)."""
    F = SixFunctors(ctx, f)
    return DPFunctor(
        functor=F.lower,
        source=Duality(F.sx, F.shriek.obj(k)), target=Duality(F.sy, k),
        phi=lambda a: F.rr(a, k),
        name="<f_*,rr>",
    )


def dp_tensor(site: Site, k: SheafComplex, m: SheafComplex) -> DPFunctor:
    """<(x), dd_{K,M}> from the product duality D_K x D_M to D_{K(x)M}."""
    functor = Functor(obj=lambda pr: site.tensor(*pr),
                      map=lambda pm: site.tmap(*pm), name="(x)")
    return DPFunctor(
        functor=functor,
        source=ProductDuality(Duality(site, k), Duality(site, m)),
        target=Duality(site, site.tensor(k, m)),
        phi=lambda pr: site.dd(pr[0], pr[1], k, m),
        name="<(x),dd>",
    )


def pair_dp(dp1: DPFunctor, dp2: DPFunctor) -> DPFunctor:
    """F1 x F2 on the product categories, with the pair comparison maps."""
    functor = Functor(
        obj=lambda pr: (dp1.functor.obj(pr[0]), dp2.functor.obj(pr[1])),
        map=lambda pm: (dp1.functor.map(pm[0]), dp2.functor.map(pm[1])),
        name="x",
    )
    return DPFunctor(
        functor=functor,
        source=ProductDuality(dp1.source, dp2.source),
        target=ProductDuality(dp1.target, dp2.target),
        phi=lambda pr: (dp1.phi(pr[0]), dp2.phi(pr[1])),
        name=f"{dp1.name}x{dp2.name}",
    )


# ---------------------------------------------------------------------------
# symmetric forms and transfer

@dataclass
class SymmetricForm:
    """A form psi : A -> D(A); symmetric when D(psi) o bid_A = psi."""

    duality: object
    a: object
    psi: object  # map (or pair of maps) in the relevant category

    def is_symmetric(self) -> bool:
        d = self.duality
        if isinstance(d, ProductDuality):
            back = d.map(self.psi)
            w = d.bid(self.a)
            return (scompose(back[0], w[0]), scompose(back[1], w[1])) == self.psi
        return scompose(d.map(self.psi), d.bid(self.a)) == self.psi

    def is_nondegenerate(self) -> bool:
        d = self.duality
        if isinstance(d, ProductDuality):
            return sheaf_is_iso(self.psi[0]) and sheaf_is_iso(self.psi[1])
        return sheaf_is_iso(self.psi)


def transfer_form(dp: DPFunctor, form: SymmetricForm, check: bool = True) -> SymmetricForm:
    """Push a symmetric form along a duality-preserving functor:
    psi goes to phi_A o F(psi)."""
    if check and not form.is_symmetric():
        raise ValueError("transfer_form needs a symmetric input form")
    a = form.a
    psi2 = scompose(dp.phi(a), dp.functor.map(form.psi))
    out = SymmetricForm(dp.target, dp.functor.obj(a), psi2)
    if check and not out.is_symmetric():
        raise ValueError("transferred form lost symmetry (diagram P violated?)")
    return out


def gram_of_degree0_form(form: SymmetricForm):
    """The Gram matrix of a degree-0 form on a one-point base whose object
    is concentrated in degree 0 (the hom coordinates are the dual basis,
    so the form's single component is its Gram matrix)."""
    psi = form.psi
    if len(psi.source.base) != 1:
        raise ValueError("gram extraction expects a one-point base")
    return psi.maps[0].component(0)


def form_from_gram(ctx, gram, base=("*",)) -> SymmetricForm:
    """Degree-0 form on the one-point base with the given Gram matrix."""
    from .complexes import ChainMap, Complex

    site = Site(ctx, base)
    a = SheafComplex.make(base, [Complex.point(ctx.p, 0, gram.rows) for _ in base])
    d = Duality(site, site.unit)
    da = d.obj(a)
    psi = SheafMap.make(a, da, [ChainMap.make(c, dc, {0: gram}, 0)
                                for c, dc in zip(a.stalks, da.stalks)])
    return SymmetricForm(d, a, psi)


def random_symmetric_form(rng: random.Random, duality: Duality, a: SheafComplex,
                          require_nondegenerate: bool = False,
                          attempts: int = 40) -> SymmetricForm:
    """psi = u + D(u) o bid for a random chain map u : A -> D(A); always
    symmetric, optionally resampled until nondegenerate."""
    from .sites import random_sheaf_map

    d = duality
    da = d.obj(a)
    for _ in range(attempts):
        u = random_sheaf_map(rng, a, da)
        psi = _add(scompose(d.map(u), d.bid(a)), u)
        form = SymmetricForm(d, a, psi)
        if not require_nondegenerate or form.is_nondegenerate():
            return form
    raise ValueError("could not sample a nondegenerate symmetric form")


def _add(f: SheafMap, g: SheafMap) -> SheafMap:
    return SheafMap.make(f.source, f.target, [a + b for a, b in zip(f.maps, g.maps)])
