"""Indexed categories: pseudofunctor data over a base category.

Conventions, for f: A → B and g: B → C in the base:

* ``reindex(f)`` is a functor L(B) → L(A);
* the unitor component η^A_X: X → L(id_A)(X);
* the compositor component μ^{f,g}_Z: L(f)(L(g)(Z)) → L(g∘f)(Z).

Leaving the unitor or compositor unset means strict: components are
identities (validation then checks that reindexing is functorial on the nose).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import SizeExceeded
from .fincat import (Category, FinCat, FinFunctor, ValidationReport, _lookup, ident, tabulate,
                     validate_category, validate_functor)


SECTIONS_BOUND = 10_000


class IndexedCat:
    def __init__(self, base: Category, fibres, reindex, unitors=None, compositors=None, name=""):
        self.base = base
        self._fibres = fibres
        self._reindex = reindex
        self.unitors = unitors
        self.compositors = compositors
        self.name = name
        self._fcache = {}
        self._rcache = {}

    @property
    def strict(self) -> bool:
        return self.unitors is None and self.compositors is None

    def fibre(self, a) -> Category:
        c = self._fcache.get(a)
        if c is None:
            c = self._fcache[a] = _lookup(self._fibres, a)
        return c

    def reindex(self, f) -> FinFunctor:
        r = self._rcache.get(f)
        if r is None:
            r = self._rcache[f] = _lookup(self._reindex, f)
        return r

    def re(self, f, x):
        """L(f) applied to an object."""
        return self.reindex(f).ob(x)

    def remor(self, f, u):
        return self.reindex(f).mor(u)

    def eta(self, a, x):
        if self.unitors is None:
            return self.fibre(a).identity(x)
        return _lookup(_lookup(self.unitors, a), x)

    def mu(self, f, g, z):
        if self.compositors is None:
            return self.fibre(self.base.dom(f)).identity(self.re(f, self.re(g, z)))
        return _lookup(_lookup(self.compositors, (f, g)), z)

    def composable_pairs(self):
        B = self.base
        mors = list(B.morphisms())
        for f in mors:
            for g in mors:
                if B.cod(f) == B.dom(g):
                    yield f, g

    def materialize(self) -> dict:
        """Every component as plain data; equality of indexed categories is equality of this."""
        B = self.base
        out = {"fibres": {}, "reindex": {}, "unitor": {}, "compositor": {}}
        for a in B.objects:
            out["fibres"][a] = self.fibre(a)
            out["unitor"][a] = {x: self.eta(a, x) for x in self.fibre(a).objects}
        for f in B.morphisms():
            out["reindex"][f] = self.reindex(f).materialize()
        for f, g in self.composable_pairs():
            out["compositor"][(f, g)] = {z: self.mu(f, g, z)
                                         for z in self.fibre(B.cod(g)).objects}
        return out

    def __eq__(self, other):
        return isinstance(other, IndexedCat) and self.base == other.base \
            and self.materialize() == other.materialize()

    __hash__ = object.__hash__


def strict_indexed(base, fibres, reindex, name="") -> IndexedCat:
    return IndexedCat(base, fibres, reindex, name=name)


def validate_indexed(L: IndexedCat, check_fibres=True) -> ValidationReport:
    rep = ValidationReport(f"indexed category {L.name}".strip())
    B = L.base
    if isinstance(B, FinCat):
        rep.extend(validate_category(B), "base: ")
    if check_fibres:
        for a in B.objects:
            rep.extend(validate_category(L.fibre(a)), f"fibre {a}: ")
    if rep.violations:
        return rep
    for f in B.morphisms():
        F = L.reindex(f)
        a, b = B.dom(f), B.cod(f)
        if F.source is not L.fibre(b) and F.source != L.fibre(b):
            rep.add("reindex-type", f"L({f}) has the wrong source", f)
            continue
        if F.target is not L.fibre(a) and F.target != L.fibre(a):
            rep.add("reindex-type", f"L({f}) has the wrong target", f)
            continue
        rep.extend(validate_functor(F), f"L({f}): ")
    if rep.violations:
        return rep
    # unitors
    for a in B.objects:
        La, ida = L.fibre(a), B.identity(a)
        R = L.reindex(ida)
        for x in La.objects:
            e = L.eta(a, x)
            try:
                ok = La.dom(e) == x and La.cod(e) == R.ob(x)
            except (KeyError, TypeError, IndexError):
                ok = False
            if not ok:
                rep.add("unitor-type", f"η^{a} at {x} has the wrong type", a, x)
            elif not La.is_iso(e):
                rep.add("unitor-iso", f"η^{a} at {x} is not invertible", a, x)
        if rep.violations:
            continue
        for u in La.morphisms():
            x, y = La.dom(u), La.cod(u)
            rep.checked += 1
            if La.compose(R.mor(u), L.eta(a, x)) != La.compose(L.eta(a, y), u):
                rep.add("unitor-naturality", f"η^{a} not natural at {u}", a, u)
    # compositors
    for f, g in L.composable_pairs():
        a = B.dom(f)
        La, Lc = L.fibre(a), L.fibre(B.cod(g))
        gf = B.compose(g, f)
        for z in Lc.objects:
            m = L.mu(f, g, z)
            try:
                ok = La.dom(m) == L.re(f, L.re(g, z)) and La.cod(m) == L.re(gf, z)
            except (KeyError, TypeError, IndexError):
                ok = False
            if not ok:
                rep.add("compositor-type", f"μ^({f},{g}) at {z} has the wrong type", f, g, z)
            elif not La.is_iso(m):
                rep.add("compositor-iso", f"μ^({f},{g}) at {z} is not invertible", f, g, z)
        if rep.violations:
            continue
        for w in Lc.morphisms():
            z, z2 = Lc.dom(w), Lc.cod(w)
            rep.checked += 1
            lhs = La.compose(L.remor(gf, w), L.mu(f, g, z))
            rhs = La.compose(L.mu(f, g, z2), L.remor(f, L.remor(g, w)))
            if lhs != rhs:
                rep.add("compositor-naturality", f"μ^({f},{g}) not natural at {w}", f, g, w)
    if rep.violations:
        return rep
    # unitor coherence, for every f: A → B
    for f in B.morphisms():
        a, b = B.dom(f), B.cod(f)
        La = L.fibre(a)
        ida, idb = B.identity(a), B.identity(b)
        for y in L.fibre(b).objects:
            fy = L.re(f, y)
            rep.checked += 2
            if La.compose(L.mu(ida, f, y), L.eta(a, fy)) != La.identity(fy):
                rep.add("unitor-coherence", f"μ^(id,{f})∘η ≠ id at {y}", f, y)
            if La.compose(L.mu(f, idb, y), L.remor(f, L.eta(b, y))) != La.identity(fy):
                rep.add("unitor-coherence", f"μ^({f},id)∘L({f})(η) ≠ id at {y}", f, y)
    # compositor coherence, for every composable triple f, g, h
    mors = list(B.morphisms())
    out = {}
    for m in mors:
        out.setdefault(B.dom(m), []).append(m)
    for f in mors:
        La = L.fibre(B.dom(f))
        for g in out.get(B.cod(f), []):
            gf = B.compose(g, f)
            for h in out.get(B.cod(g), []):
                hg = B.compose(h, g)
                for w in L.fibre(B.cod(h)).objects:
                    rep.checked += 1
                    lhs = La.compose(L.mu(f, hg, w), L.remor(f, L.mu(g, h, w)))
                    rhs = La.compose(L.mu(gf, h, w), L.mu(f, g, L.re(h, w)))
                    if lhs != rhs:
                        rep.add("compositor-coherence",
                                f"associativity of μ fails for ({f},{g},{h}) at {w}", f, g, h, w)
    return rep


def restrict(L: IndexedCat, F: FinFunctor) -> IndexedCat:
    """L ∘ F^op: precompose fibres and reindexings with F."""
    uni = None if L.unitors is None else (lambda d: (lambda x: L.eta(F.ob(d), x)))
    comp = None if L.compositors is None else \
        (lambda kl: (lambda z: L.mu(F.mor(kl[0]), F.mor(kl[1]), z)))
    return IndexedCat(F.source, lambda d: L.fibre(F.ob(d)), lambda k: L.reindex(F.mor(k)),
                      uni, comp, name=L.name)


# ---------------------------------------------------------------- sections

@dataclass(frozen=True)
class SectionObj:
    values: tuple  # ((A, X_A), ...) in base object order
    xi: tuple      # ((f, ξ_f), ...) in base morphism order
    _v: dict = field(default=None, compare=False, hash=False, repr=False)
    _x: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_v", dict(self.values))
        object.__setattr__(self, "_x", dict(self.xi))

    def at(self, a):
        return self._v[a]

    def comp(self, f):
        return self._x[f]


@dataclass(frozen=True)
class SectionMor:
    dom: SectionObj
    cod: SectionObj
    comps: tuple  # ((A, α_A), ...)
    _c: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_c", dict(self.comps))

    def at(self, a):
        return self._c[a]


def make_section(L: IndexedCat, values: dict, xi: dict) -> SectionObj:
    """Section from fibre objects and ξ on non-identity morphisms (identities filled with η)."""
    B = L.base
    full = dict(xi)
    for a in B.objects:
        full.setdefault(B.identity(a), L.eta(a, values[a]))
    return SectionObj(tuple((a, values[a]) for a in B.objects),
                      tuple((f, full[f]) for f in B.morphisms()))


def section_report(L: IndexedCat, s: SectionObj) -> ValidationReport:
    rep = ValidationReport("section")
    B = L.base
    for f in B.morphisms():
        a, b = B.dom(f), B.cod(f)
        La = L.fibre(a)
        x = s.comp(f)
        if La.dom(x) != s.at(a) or La.cod(x) != L.re(f, s.at(b)):
            rep.add("xi-type", f"ξ_{f} has the wrong type", f)
    if rep.violations:
        return rep
    for a in B.objects:
        if s.comp(B.identity(a)) != L.eta(a, s.at(a)):
            rep.add("xi-identity", f"ξ_id ≠ η at {a}", a)
    for f, g in L.composable_pairs():
        La = L.fibre(B.dom(f))
        c = B.cod(g)
        rhs = La.compose_all(L.mu(f, g, s.at(c)), L.remor(f, s.comp(g)), s.comp(f))
        rep.checked += 1
        if s.comp(B.compose(g, f)) != rhs:
            rep.add("xi-composite", f"ξ equation fails for ({f},{g})", f, g)
    return rep


class Sections(Category):
    """The category of sections of L, enumerated exhaustively."""

    def __init__(self, L: IndexedCat, bound: int = SECTIONS_BOUND):
        self.L = L
        self.name = "sections"
        self.bound = bound
        self.objects = tuple(_enumerate_sections(L, bound))
        self._homs = {}

    def hom(self, s, t):
        h = self._homs.get((s, t))
        if h is None:
            h = self._homs[(s, t)] = tuple(_enumerate_section_maps(self.L, s, t))
        return h

    def dom(self, m):
        return m.dom

    def cod(self, m):
        return m.cod

    def compose(self, g, f):
        B, L = self.L.base, self.L
        return SectionMor(f.dom, g.cod, tuple((a, L.fibre(a).compose(g.at(a), f.at(a)))
                                              for a in B.objects))

    def identity(self, s):
        return SectionMor(s, s, tuple((a, self.L.fibre(a).identity(s.at(a)))
                                      for a in self.L.base.objects))

    def has_object(self, s):
        return s in set(self.objects)


def _enumerate_sections(L: IndexedCat, bound):
    B = L.base
    bobj = list(B.objects)
    mors = list(B.morphisms())
    ids = {B.identity(a) for a in bobj}
    pos = {a: i for i, a in enumerate(bobj)}
    # morphisms become assignable once both endpoints are assigned
    stage = [[] for _ in bobj]
    for f in mors:
        stage[max(pos[B.dom(f)], pos[B.cod(f)])].append(f)
    order = []
    for i in range(len(bobj)):
        order.extend(f for f in stage[i] if f not in ids)
    rank = {f: i for i, f in enumerate(order)}
    triples = [[] for _ in order]
    for f, g in L.composable_pairs():
        gf = B.compose(g, f)
        involved = [m for m in (f, g, gf) if m not in ids]
        if not involved:
            continue
        triples[max(rank[m] for m in involved)].append((f, g, gf))
    per_obj = [[rank[f] for f in stage[i] if f not in ids] for i in range(len(bobj))]
    out = []
    values, xi = {}, {}

    def check(k):
        for f, g, gf in triples[k]:
            a, c = B.dom(f), B.cod(g)
            La = L.fibre(a)
            rhs = La.compose_all(L.mu(f, g, values[c]), L.remor(f, xi[g]), xi[f])
            if xi[gf] != rhs:
                return False
        return True

    def assign_mors(i, ks, j):
        if j == len(ks):
            yield from assign_obj(i + 1)
            return
        k = ks[j]
        f = order[k]
        a, b = B.dom(f), B.cod(f)
        for u in L.fibre(a).hom(values[a], L.re(f, values[b])):
            xi[f] = u
            if check(k):
                yield from assign_mors(i, ks, j + 1)
        xi.pop(f, None)

    def assign_obj(i):
        if i == len(bobj):
            yield make_section(L, values, xi)
            return
        a = bobj[i]
        for x in L.fibre(a).objects:
            values[a] = x
            xi[B.identity(a)] = L.eta(a, x)
            yield from assign_mors(i, per_obj[i], 0)
        values.pop(a, None)

    for s in assign_obj(0):
        out.append(s)
        if len(out) > bound:
            raise SizeExceeded("sections category", len(out), bound)
    return out


def _enumerate_section_maps(L: IndexedCat, s: SectionObj, t: SectionObj):
    B = L.base
    bobj = list(B.objects)
    pos = {a: i for i, a in enumerate(bobj)}
    checks = [[] for _ in bobj]
    for f in B.morphisms():
        checks[max(pos[B.dom(f)], pos[B.cod(f)])].append(f)
    comps = {}

    def go(i):
        if i == len(bobj):
            yield SectionMor(s, t, tuple((a, comps[a]) for a in bobj))
            return
        a = bobj[i]
        La = L.fibre(a)
        for u in La.hom(s.at(a), t.at(a)):
            comps[a] = u
            ok = True
            for f in checks[i]:
                d, c = B.dom(f), B.cod(f)
                Ld = L.fibre(d)
                if Ld.compose(L.remor(f, comps[c]), s.comp(f)) != Ld.compose(t.comp(f), comps[d]):
                    ok = False
                    break
            if ok:
                yield from go(i + 1)
        comps.pop(a, None)

    yield from go(0)


def sections(L: IndexedCat, bound: int = SECTIONS_BOUND) -> Sections:
    return Sections(L, bound)


def sections_category(L: IndexedCat, bound: int = SECTIONS_BOUND) -> FinCat:
    return tabulate(sections(L, bound), name="sections")


def reindex_section(L: IndexedCat, J1: FinFunctor, legs: dict, apex, J2: SectionObj) -> FinFunctor:
    """The functor E → L(apex), E ↦ L(λ_E)(J₂ E), for a cone λ over J₁."""
    E = J1.source
    target = L.fibre(apex)

    def mor(e):
        a, b = E.dom(e), E.cod(e)
        lam = legs[a]
        return target.compose(L.mu(lam, J1.mor(e), J2.at(b)), L.remor(lam, J2.comp(e)))

    return FinFunctor(E, target, {x: L.re(legs[x], J2.at(x)) for x in E.objects},
                      {e: mor(e) for e in E.morphisms()}, name="reindexed section")


# ---------------------------------------------------------------- fixtures

def finset_base(n: int) -> FinCat:
    """Tabulated skeleton of finite sets 0..n; labels carry the functions."""
    from .concrete import FinSetCat
    return tabulate(FinSetCat(n), name=f"FinSet{n}")


def _fn(base: FinCat, f):
    return base.mor_label[f] if base.mor_label else f


def power_fibre(D: FinCat, s: int) -> FinCat:
    from .concrete import PowerCategory
    return tabulate(PowerCategory(D, s), name=f"{D.name}^{s}")


def fam_indexed(D: FinCat, base: FinCat) -> IndexedCat:
    """Families of D-objects over a tabulated finite-set base: L(S) = D^S."""
    size = {a: base.obj_label.get(a, a) for a in base.objects}
    fibres = {a: power_fibre(D, size[a]) for a in base.objects}

    def reindex(f):
        fn = _fn(base, f)
        src, tgt = fibres[base.cod(f)], fibres[base.dom(f)]
        ob = lambda y: ident(tuple(src.obj_label[y][i] for i in fn.img))
        mo = lambda u: ident(tuple(src.mor_label[u][i] for i in fn.img))
        return FinFunctor(src, tgt, {y: ob(y) for y in src.objects},
                          {u: mo(u) for u in src.morphisms()}, name=f"reindex {f}")

    return IndexedCat(base, fibres, reindex, name=f"Fam({D.name})")


def representable_indexed(C: FinCat, c) -> IndexedCat:
    """C(−, c) with discrete fibres on the hom-sets."""
    from .fincat import make_category
    fibres = {a: make_category(C.hom(a, c), name=f"{a}->{c}") for a in C.objects}

    def reindex(f):
        src, tgt = fibres[C.cod(f)], fibres[C.dom(f)]
        om = {y: C.compose(y, f) for y in src.objects}
        return FinFunctor(src, tgt, om, {src.identity(y): tgt.identity(om[y]) for y in src.objects},
                          name=f"reindex {f}")

    return IndexedCat(C, fibres, reindex, name=f"{C.name}(-,{c})")


def constant_indexed(base: FinCat, D: FinCat) -> IndexedCat:
    """Every fibre D and every reindexing the identity."""
    from .fincat import identity_functor
    idf = identity_functor(D)
    return IndexedCat(base, lambda a: D, lambda f: idf, name=f"const({D.name})")


def pseudoify(L: IndexedCat, twist) -> IndexedCat:
    """Replace L(f)(Y) by an isomorphic object, giving non-identity η and μ.

    ``twist(f, y)`` returns ``(y2, theta)`` with theta: L(f)(y) → y2 an iso
    in the domain fibre, or None to keep the strict value.
    """
    B = L.base

    def th(f, y):
        t = twist(f, y)
        if t is None:
            x = L.re(f, y)
            return x, L.fibre(B.dom(f)).identity(x)
        return t

    def reindex(f):
        F = L.reindex(f)
        A = L.fibre(B.dom(f))

        def mor(u):
            y, y2 = F.source.dom(u), F.source.cod(u)
            return A.compose_all(th(f, y2)[1], F.mor(u), A.inverse(th(f, y)[1]))

        return FinFunctor(F.source, F.target, lambda y: th(f, y)[0], mor, name=f"reindex {f}")

    def eta(a):
        A = L.fibre(a)
        return lambda x: A.compose(th(B.identity(a), x)[1], L.eta(a, x))

    def mu(fg):
        f, g = fg
        A = L.fibre(B.dom(f))
        gf = B.compose(g, f)

        def comp(z):
            gz2 = th(g, z)[0]
            return A.compose_all(th(gf, z)[1], L.mu(f, g, z),
                                 L.remor(f, L.fibre(B.dom(g)).inverse(th(g, z)[1])),
                                 A.inverse(th(f, gz2)[1]))
        return comp

    return IndexedCat(B, L.fibre, reindex, eta, mu, name=f"pseudo({L.name})")
