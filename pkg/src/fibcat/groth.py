"""The Grothendieck construction and fibrations.

Objects of the total category are pairs (A, X) with X in the fibre over A.
A morphism (A, X) → (B, Y) is a pair (f, u) with f: A → B and
u: X → L(f)(Y) in the fibre over A; composition is

    (g, v) ∘ (f, u) = (g∘f, μ^{f,g}_Z ∘ L(f)(v) ∘ u).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import CategoryError, NotFound
from .fincat import (Category, FinCat, FinFunctor, ValidationReport, arrow_category, tabulate,
                     validate_functor)
from .indexed import IndexedCat
from .search import find_left_adjoint


class GMor(NamedTuple):
    src: tuple
    tgt: tuple
    base: object
    fibre: object


class GrothendieckCategory(Category):
    """Σ_C L computed on demand from the indexed data."""

    def __init__(self, L: IndexedCat):
        self.L = L
        self.name = f"Σ {L.name}".strip()
        B = L.base
        self.objects = tuple((a, x) for a in B.objects for x in L.fibre(a).objects)
        self._homs = {}

    def has_object(self, o):
        return isinstance(o, tuple) and len(o) == 2 and self.L.base.has_object(o[0]) \
            and self.L.fibre(o[0]).has_object(o[1])

    def hom(self, s, t):
        h = self._homs.get((s, t))
        if h is None:
            L = self.L
            (a, x), (b, y) = s, t
            fa = L.fibre(a)
            h = self._homs[(s, t)] = tuple(
                GMor(s, t, f, u) for f in L.base.hom(a, b) for u in fa.hom(x, L.re(f, y)))
        return h

    def dom(self, m):
        return m.src

    def cod(self, m):
        return m.tgt

    def compose(self, g, f):
        L = self.L
        fa = L.fibre(f.src[0])
        if L.compositors is None:
            u = fa.compose(L.remor(f.base, g.fibre), f.fibre)
        else:
            u = fa.compose_all(L.mu(f.base, g.base, g.tgt[1]), L.remor(f.base, g.fibre), f.fibre)
        return GMor(f.src, g.tgt, L.base.compose(g.base, f.base), u)

    def identity(self, o):
        a, x = o
        return GMor(o, o, self.L.base.identity(a), self.L.eta(a, x))


def hom_count_formula(L: IndexedCat, s, t) -> int:
    """Σ_f |L(A)(X, L(f)(Y))|."""
    (a, x), (b, y) = s, t
    return sum(len(L.fibre(a).hom(x, L.re(f, y))) for f in L.base.hom(a, b))


class GrothCat:
    """Total category, projection and canonical cleavage of an indexed category."""

    def __init__(self, L: IndexedCat, bound: int = 500_000):
        self.source = L
        self.lazy = GrothendieckCategory(L)
        self.total = tabulate(self.lazy, bound=bound, name=f"Σ {L.name}".strip())
        self._oid = {v: k for k, v in self.total.obj_label.items()}
        self._mid = {v: k for k, v in self.total.mor_label.items()}
        T = self.total
        self.projection = FinFunctor(
            T, L.base, {o: T.obj_label[o][0] for o in T.objects},
            {m: T.mor_label[m].base for m in T.morphisms()}, name="projection")

    def obj(self, a, x) -> str:
        return self._oid[(a, x)]

    def mor(self, gm: GMor) -> str:
        return self._mid[gm]

    def label(self, m):
        """Structured value of a total object or morphism id."""
        return self.total.obj_label.get(m) or self.total.mor_label[m]

    def canonical_cleavage(self) -> "Cleavage":
        L, B = self.source, self.source.base
        lifts = {}
        for f in B.morphisms():
            for y in L.fibre(B.cod(f)).objects:
                lifts[(f, self.obj(B.cod(f), y))] = self.mor(canonical_lift(self, f, (B.cod(f), y)))
        return Cleavage(self.projection, lifts)


def grothendieck(L: IndexedCat, bound: int = 500_000) -> GrothCat:
    return GrothCat(L, bound)


def canonical_lift(G: GrothCat, f, target) -> GMor:
    """(f, id): (A, L(f)(Y)) → (B, Y)."""
    L = G.source
    b, y = target
    a = L.base.dom(f)
    fy = L.re(f, y)
    return GMor((a, fy), (b, y), f, L.fibre(a).identity(fy))


# ---------------------------------------------------------------- fibrations

@dataclass
class Cleavage:
    functor: FinFunctor
    lifts: dict  # (base morphism, total object over its codomain) -> total morphism

    def lift(self, f, e):
        return self.lifts[(f, e)]


@dataclass
class Failure:
    morphism: object
    target: object
    reason: str = "no cartesian lift"

    def __bool__(self):
        return False


def is_cartesian(P: FinFunctor, e) -> bool:
    """Exhaustive check of the cartesian universal property of e."""
    E, B = P.source, P.target
    d, t = E.dom(e), E.cod(e)
    f = P.mor(e)
    pd = P.ob(d)
    for d2 in E.objects:
        # count factorizations m: d2 → d keyed by (P m, e∘m)
        counts = {}
        for m in E.hom(d2, d):
            k = (P.mor(m), E.compose(e, m))
            counts[k] = counts.get(k, 0) + 1
        hs = B.hom(P.ob(d2), pd)
        for e2 in E.hom(d2, t):
            g = P.mor(e2)
            for h in hs:
                if B.compose(f, h) == g and counts.get((h, e2), 0) != 1:
                    return False
    return True


def _objects_over(P: FinFunctor):
    over = {b: [] for b in P.target.objects}
    for x in P.source.objects:
        over[P.ob(x)].append(x)
    return over


def verify_fibration(P: FinFunctor, prefer: Cleavage | None = None):
    """A cleavage of P with verified cartesian lifts, or the first Failure.

    A preferred cleavage (e.g. the canonical one) is checked and used when
    valid; otherwise the smallest cartesian lift in enumeration order is taken.
    """
    E, B = P.source, P.target
    if prefer is not None and all(P.mor(m) == f and E.cod(m) == t and is_cartesian(P, m)
                                  for (f, t), m in prefer.lifts.items()):
        return prefer
    over = _objects_over(P)
    lifts = {}
    for f in B.morphisms():
        a = B.dom(f)
        for t in over[B.cod(f)]:
            cands = [m for d in over[a] for m in E.hom(d, t) if P.mor(m) == f]
            if isinstance(E, FinCat):
                cands.sort()
            chosen = next((m for m in cands if is_cartesian(P, m)), None)
            if chosen is None:
                return Failure(f, t)
            lifts[(f, t)] = chosen
    return Cleavage(P, lifts)


class _Fibre(Category):
    def __init__(self, P, b, objs):
        self.P, self.b = P, b
        self.objects = tuple(objs)
        self._idb = P.target.identity(b)
        self.name = f"fibre over {b}"

    def hom(self, x, y):
        return tuple(m for m in self.P.source.hom(x, y) if self.P.mor(m) == self._idb)

    def dom(self, m):
        return self.P.source.dom(m)

    def cod(self, m):
        return self.P.source.cod(m)

    def compose(self, g, f):
        return self.P.source.compose(g, f)

    def identity(self, x):
        return self.P.source.identity(x)


def fibre_of(P: FinFunctor, b, objects=None) -> Category:
    """The strict fibre of P over b (a FinCat with the same ids when E is tabulated)."""
    objs = objects if objects is not None else [x for x in P.source.objects if P.ob(x) == b]
    fib = _Fibre(P, b, objs)
    E = P.source
    if not isinstance(E, FinCat):
        return fib
    mors = [(m, E.dom(m), E.cod(m)) for x in objs for y in objs for m in fib.hom(x, y)]
    ms = {m for m, _, _ in mors}
    table = {(g, f): E.compose(g, f) for g, gd, _ in mors for f, _, fc in mors if fc == gd}
    out = FinCat(objs, mors, {x: E.identity(x) for x in objs}, table, name=fib.name)
    out.obj_label = {x: E.obj_label[x] for x in objs if x in E.obj_label}
    out.mor_label = {m: E.mor_label[m] for m in ms if m in E.mor_label}
    return out


def _unique_over(P, src, tgt, over_id, post, target):
    """The unique m: src → tgt over over_id with post∘m = target."""
    E = P.source
    found = [m for m in E.hom(src, tgt) if P.mor(m) == over_id and E.compose(post, m) == target]
    if len(found) != 1:
        raise CategoryError(f"expected a unique factorization, found {len(found)}",
                            source=src, target=tgt, count=len(found))
    return found[0]


def indexed_from_fibration(P: FinFunctor, cl: Cleavage) -> IndexedCat:
    """Fibres of P, reindexing via the chosen lifts, η and μ by unique factorization."""
    E, B = P.source, P.target
    over = _objects_over(P)
    fibres = {b: fibre_of(P, b, over[b]) for b in B.objects}

    def pull(f, t):
        return E.dom(cl.lift(f, t))

    def reindex(f):
        a, b = B.dom(f), B.cod(f)
        ida = B.identity(a)

        def mor(u):
            t, t2 = E.dom(u), E.cod(u)
            return _unique_over(P, pull(f, t), pull(f, t2), ida, cl.lift(f, t2),
                                E.compose(u, cl.lift(f, t)))

        src = fibres[b]
        return FinFunctor(src, fibres[a], {t: pull(f, t) for t in src.objects},
                          {u: mor(u) for u in src.morphisms()}, name=f"reindex {f}")

    def eta(a):
        ida = B.identity(a)
        return lambda x: _unique_over(P, x, pull(ida, x), ida, cl.lift(ida, x), E.identity(x))

    def mu(fg):
        f, g = fg
        gf = B.compose(g, f)
        ida = B.identity(B.dom(f))

        def comp(z):
            gz = pull(g, z)
            return _unique_over(P, pull(f, gz), pull(gf, z), ida, cl.lift(gf, z),
                                E.compose(cl.lift(g, z), cl.lift(f, gz)))
        return comp

    if split_check(cl):
        # split cleavage: η and μ are identities, so the result is strict
        return IndexedCat(B, fibres, reindex, name="from fibration")
    return IndexedCat(B, fibres, reindex, eta, mu, name="from fibration")


def split_check(cl: Cleavage) -> bool:
    P = cl.functor
    E, B = P.source, P.target
    for (f, t), m in cl.lifts.items():
        if B.is_identity(f) and m != E.identity(t):
            return False
    for (g, t), m in cl.lifts.items():
        d = E.dom(m)
        for (f, t2), m2 in cl.lifts.items():
            if t2 == d and E.compose(m, m2) != cl.lift(B.compose(g, f), t):
                return False
    return True


@dataclass
class FibrewiseIso:
    functors: dict  # base object -> FinFunctor L(A) → fibre of the round trip
    report: ValidationReport = field(default_factory=lambda: ValidationReport("fibrewise iso"))

    @property
    def ok(self):
        return self.report.ok


def fibrewise_iso(L: IndexedCat, G: GrothCat, M: IndexedCat) -> FibrewiseIso:
    """Check X ↦ (A, X), u ↦ (id, η∘u) is an isomorphism L(A) ≅ M(A) over every A,
    commuting with reindexing on objects."""
    B = L.base
    rep = ValidationReport("fibrewise isomorphism")
    functors = {}
    for a in B.objects:
        La, Ma = L.fibre(a), M.fibre(a)
        ida = B.identity(a)
        om = {x: G.obj(a, x) for x in La.objects}
        mm = {u: G.mor(GMor((a, La.dom(u)), (a, La.cod(u)), ida,
                            La.compose(L.eta(a, La.cod(u)), u))) for u in La.morphisms()}
        F = FinFunctor(La, Ma, om, mm, name=f"compare {a}")
        functors[a] = F
        rep.extend(validate_functor(F), f"over {a}: ")
        if sorted(om.values()) != sorted(Ma.objects):
            rep.add("not-bijective-objects", f"object map over {a} is not a bijection", a)
        for x in La.objects:
            for y in La.objects:
                img = sorted(mm[u] for u in La.hom(x, y))
                if img != sorted(Ma.hom(om[x], om[y])) or len(set(img)) != len(img):
                    rep.add("not-bijective-homs", f"hom map over {a} not bijective at ({x},{y})",
                            a, x, y)
    for f in B.morphisms():
        a, b = B.dom(f), B.cod(f)
        for y in L.fibre(b).objects:
            rep.checked += 1
            if functors[a].ob(L.re(f, y)) != M.re(f, functors[b].ob(y)):
                rep.add("reindex-mismatch", f"reindexing along {f} differs at {y}", f, y)
    return FibrewiseIso(functors, rep)


@dataclass
class BifibrationReport:
    witnesses: dict
    failing: object = None

    @property
    def ok(self):
        return self.failing is None


def bifibration_check(L: IndexedCat) -> BifibrationReport:
    """Left adjoints for every reindexing functor, or the first base morphism without one."""
    out = {}
    for f in L.base.morphisms():
        try:
            out[f] = find_left_adjoint(L.reindex(f))
        except NotFound:
            return BifibrationReport(out, f)
    return BifibrationReport(out)


def domain_fibration(C: FinCat) -> FinFunctor:
    """The domain functor on the arrow category of C."""
    return arrow_category(C)[1]


def codomain_functor(C: FinCat) -> FinFunctor:
    return arrow_category(C)[2]
