"""Finite categories, functors and natural transformations.

Two kinds of category share the :class:`Category` interface:

* :class:`FinCat` is fully tabulated, with string ids and an explicit
  composition table.  Enumeration order is the lexicographic order of ids.
* concrete categories (see :mod:`fibcat.concrete`) compute hom-sets and
  composites on demand from structured morphism values.  Their ``objects``
  tuple is the enumeration universe; hom-sets are available beyond it.
"""
from __future__ import annotations

import dataclasses
import itertools
import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping

from .errors import SizeExceeded


def _plain(x):
    if isinstance(x, (tuple, list)):
        return [_plain(v) for v in x]
    if isinstance(x, frozenset):
        return sorted(_plain(v) for v in x)
    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        return [_plain(getattr(x, f.name)) for f in dataclasses.fields(x)
                if not f.name.startswith("_")]
    return x


def ident(x) -> str:
    """Canonical string id for a structured value."""
    if isinstance(x, str):
        return x
    return json.dumps(_plain(x), separators=(",", ":"))


def pack(*parts) -> str:
    return ident(tuple(ident(p) for p in parts))


# ---------------------------------------------------------------- reports

@dataclass
class Violation:
    code: str
    message: str
    witness: tuple = ()

    def __str__(self):
        return f"[{self.code}] {self.message}"


@dataclass
class ValidationReport:
    subject: str
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def add(self, code, message, *witness):
        self.violations.append(Violation(code, message, tuple(witness)))

    def extend(self, other: "ValidationReport", prefix=""):
        for v in other.violations:
            self.violations.append(Violation(v.code, prefix + v.message, v.witness))
        self.checked += other.checked

    def codes(self):
        return [v.code for v in self.violations]

    def first(self):
        return self.violations[0] if self.violations else None

    def summary(self) -> str:
        if self.ok:
            return f"{self.subject}: valid ({self.checked} checks)"
        head = f"{self.subject}: {len(self.violations)} violation(s)"
        return "\n".join([head] + ["  " + str(v) for v in self.violations[:10]])


# ---------------------------------------------------------------- categories

def _lookup(m, key):
    return m(key) if callable(m) else m[key]


class Category:
    """Interface shared by tabulated and concrete categories."""

    name = ""
    objects: tuple = ()

    def hom(self, a, b) -> tuple:
        raise NotImplementedError

    def dom(self, f):
        raise NotImplementedError

    def cod(self, f):
        raise NotImplementedError

    def compose(self, g, f):
        raise NotImplementedError

    def identity(self, a):
        raise NotImplementedError

    def has_object(self, a) -> bool:
        return a in self.objects

    def morphisms(self):
        for a in self.objects:
            for b in self.objects:
                yield from self.hom(a, b)

    def compose_all(self, *fs):
        """compose_all(h, g, f) = h∘g∘f."""
        r = fs[-1]
        for g in reversed(fs[:-1]):
            r = self.compose(g, r)
        return r

    def inverse(self, f):
        a, b = self.dom(f), self.cod(f)
        ia, ib = self.identity(a), self.identity(b)
        for g in self.hom(b, a):
            if self.compose(g, f) == ia and self.compose(f, g) == ib:
                return g
        return None

    def is_iso(self, f) -> bool:
        return self.inverse(f) is not None

    def is_identity(self, f) -> bool:
        return f == self.identity(self.dom(f))


class FinCat(Category):
    """A fully tabulated finite category with string ids."""

    def __init__(self, objects, morphisms, identity, compose, name=""):
        self.name = name
        self.objects = tuple(sorted(objects))
        self.morphism_records = tuple(sorted((m, d, c) for m, d, c in morphisms))
        self.identity_map = dict(identity)
        self.compose_table = dict(compose)
        self._ends = {m: (d, c) for m, d, c in self.morphism_records}
        hom = defaultdict(list)
        for m, d, c in self.morphism_records:
            hom[(d, c)].append(m)
        self._hom = {k: tuple(v) for k, v in hom.items()}
        self._objset = frozenset(self.objects)
        # labels map ids back to structured values when tabulated from elsewhere
        self.obj_label: dict = {}
        self.mor_label: dict = {}
        self._op = None

    def __repr__(self):
        return f"FinCat({self.name or '?'}: {len(self.objects)} objects, {len(self.morphism_records)} morphisms)"

    def __eq__(self, other):
        return (isinstance(other, FinCat) and self.objects == other.objects
                and self.morphism_records == other.morphism_records
                and self.identity_map == other.identity_map
                and self.compose_table == other.compose_table)

    def __hash__(self):
        return hash((self.objects, self.morphism_records))

    def hom(self, a, b):
        return self._hom.get((a, b), ())

    def dom(self, f):
        return self._ends[f][0]

    def cod(self, f):
        return self._ends[f][1]

    def compose(self, g, f):
        return self.compose_table[(g, f)]

    def identity(self, a):
        return self.identity_map[a]

    def has_object(self, a):
        return a in self._objset

    def morphisms(self):
        return (m for m, _, _ in self.morphism_records)

    @property
    def morphism_ids(self):
        return tuple(m for m, _, _ in self.morphism_records)

    def opposite(self) -> "FinCat":
        if self._op is None:
            o = FinCat(self.objects, [(m, c, d) for m, d, c in self.morphism_records],
                       self.identity_map,
                       {(f, g): h for (g, f), h in self.compose_table.items()},
                       name=f"{self.name}^op" if self.name else "")
            o.obj_label, o.mor_label = self.obj_label, self.mor_label
            o._op = self
            self._op = o
        return self._op


def opposite(c: FinCat) -> FinCat:
    return c.opposite()


def make_category(objects, arrows=(), composites=None, name="") -> FinCat:
    """Build a FinCat from objects, non-identity arrows and their composites.

    Identities are named ``id_X`` and composites with identities are filled in.
    Composites of non-identity arrows come from ``composites`` keyed (g, f).
    """
    objects = list(objects)
    ids = {x: f"id_{x}" for x in objects}
    arrows = list(arrows)
    records = [(ids[x], x, x) for x in objects] + arrows
    table = {}
    for x in objects:
        table[(ids[x], ids[x])] = ids[x]
    for m, d, c in arrows:
        if d in ids:
            table[(m, ids[d])] = m
        if c in ids:
            table[(ids[c], m)] = m
    table.update(composites or {})
    return FinCat(objects, records, ids, table, name=name)


def poset_category(elements, leq, name="") -> FinCat:
    """Thin category of a preorder; ``leq`` is any generating relation."""
    elements = [str(e) for e in elements]
    rel = {(a, a) for a in elements} | {(str(a), str(b)) for a, b in leq}
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in list(itertools.product(rel, rel)):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    mid = {(a, b): f"{a}<={b}" for a, b in rel}
    records = [(mid[p], p[0], p[1]) for p in rel]
    table = {}
    for (a, b) in rel:
        for (c, d) in rel:
            if b == c:
                table[(mid[(c, d)], mid[(a, b)])] = mid[(a, d)]
    return FinCat(elements, records, {a: mid[(a, a)] for a in elements}, table, name=name)


# ---------------------------------------------------------------- shapes

def terminal_category() -> FinCat:
    return make_category(["*"], name="1")


def discrete(n: int) -> FinCat:
    return make_category([str(i) for i in range(n)], name=f"discrete({n})")


def walking_arrow() -> FinCat:
    return make_category(["0", "1"], [("a", "0", "1")], name="walking_arrow")


def parallel_pair() -> FinCat:
    return make_category(["0", "1"], [("r", "0", "1"), ("s", "0", "1")], name="parallel_pair")


def span() -> FinCat:
    return make_category(["a", "b", "o"], [("p", "o", "a"), ("q", "o", "b")], name="span")


def cospan() -> FinCat:
    return make_category(["a", "b", "t"], [("p", "a", "t"), ("q", "b", "t")], name="cospan")


def shape(name: str, n: int | None = None) -> FinCat:
    if name == "discrete":
        return discrete(n or 0)
    table = {"parallel_pair": parallel_pair, "span": span, "cospan": cospan,
             "walking_arrow": walking_arrow, "terminal": terminal_category}
    if name not in table:
        raise ValueError(f"unknown shape {name!r}")
    return table[name]()


# ---------------------------------------------------------------- functors

class FinFunctor:
    """A functor given by object and morphism maps (mappings or callables)."""

    def __init__(self, source: Category, target: Category, obj_map, mor_map, name=""):
        self.source = source
        self.target = target
        self.obj_map = obj_map
        self.mor_map = mor_map
        self.name = name

    def ob(self, x):
        return _lookup(self.obj_map, x)

    def mor(self, f):
        return _lookup(self.mor_map, f)

    def materialize(self):
        return ({x: self.ob(x) for x in self.source.objects},
                {f: self.mor(f) for f in self.source.morphisms()})

    def __eq__(self, other):
        return (isinstance(other, FinFunctor) and self.source == other.source
                and self.target == other.target and self.materialize() == other.materialize())

    __hash__ = object.__hash__

    def then(self, other: "FinFunctor") -> "FinFunctor":
        """other ∘ self."""
        return FinFunctor(self.source, other.target,
                          lambda x: other.ob(self.ob(x)), lambda f: other.mor(self.mor(f)))

    def op(self) -> "FinFunctor":
        return FinFunctor(op(self.source), op(self.target), self.obj_map, self.mor_map)

    def frozen(self) -> "FinFunctor":
        o, m = self.materialize()
        return FinFunctor(self.source, self.target, o, m, self.name)


def identity_functor(c: Category) -> FinFunctor:
    return FinFunctor(c, c, lambda x: x, lambda f: f, name="id")


def constant_functor(source: Category, target: Category, x) -> FinFunctor:
    idx = target.identity(x)
    return FinFunctor(source, target, lambda _: x, lambda _: idx, name=f"const({x})")


class FinNatTrans:
    """A natural transformation source ⇒ target between parallel functors."""

    def __init__(self, source: FinFunctor, target: FinFunctor, components):
        self.source = source
        self.target = target
        self.components = components

    def at(self, x):
        return _lookup(self.components, x)

    def materialize(self):
        return {x: self.at(x) for x in self.source.source.objects}


def op(c: Category) -> Category:
    if isinstance(c, FinCat):
        return c.opposite()
    from .concrete import OppositeCategory
    if isinstance(c, OppositeCategory):
        return c.base
    return OppositeCategory(c)


# ---------------------------------------------------------------- validation

def validate_category(c: Category, name=None) -> ValidationReport:
    rep = ValidationReport(name or f"category {c.name}".strip())
    tabulated = isinstance(c, FinCat)
    if tabulated:
        seen = set()
        for m, d, cc in c.morphism_records:
            if m in seen:
                rep.add("duplicate-morphism", f"morphism {m} listed twice", m)
            seen.add(m)
            for end in (d, cc):
                if not c.has_object(end):
                    rep.add("dangling-object", f"morphism {m} cites absent object {end}", m, end)
        for (g, f), h in c.compose_table.items():
            if g not in c._ends or f not in c._ends:
                rep.add("compose-undefined", f"composition cell ({g},{f}) cites absent morphism", g, f)
            elif c.cod(f) != c.dom(g):
                rep.add("compose-not-composable", f"cell ({g},{f}) defined but not composable", g, f)
    for x in c.objects:
        try:
            i = c.identity(x)
        except KeyError:
            rep.add("identity-missing", f"object {x} has no identity", x)
            continue
        if tabulated and i not in c._ends:
            rep.add("identity-missing", f"identity {i} of {x} is not a morphism", x)
            continue
        if c.dom(i) != x or c.cod(i) != x:
            rep.add("identity-type", f"identity of {x} has wrong type", x, i)
    if rep.violations:
        return rep
    mors = list(c.morphisms())
    out = defaultdict(list)
    for f in mors:
        out[c.dom(f)].append(f)

    def comp(g, f):
        try:
            h = c.compose(g, f)
        except KeyError:
            rep.add("compose-missing", f"composite ({g},{f}) missing", g, f)
            return None
        if tabulated and h not in c._ends:
            rep.add("compose-type", f"composite ({g},{f}) = {h} is not a morphism", g, f, h)
            return None
        if c.dom(h) != c.dom(f) or c.cod(h) != c.cod(g):
            rep.add("compose-type", f"composite ({g},{f}) = {h} has wrong type", g, f, h)
            return None
        return h

    table = {}
    for f in mors:
        for g in out[c.cod(f)]:
            table[(g, f)] = comp(g, f)
    for f in mors:
        if table.get((c.identity(c.cod(f)), f)) != f:
            rep.add("left-identity", f"id∘{f} ≠ {f}", f)
        if table.get((f, c.identity(c.dom(f)))) != f:
            rep.add("right-identity", f"{f}∘id ≠ {f}", f)
    for f in mors:
        for g in out[c.cod(f)]:
            gf = table[(g, f)]
            if gf is None:
                continue
            for h in out[c.cod(g)]:
                hg = table[(h, g)]
                rep.checked += 1
                if hg is None:
                    continue
                if table.get((h, gf)) != table.get((hg, f)):
                    rep.add("associativity", f"({h}∘{g})∘{f} ≠ {h}∘({g}∘{f})", h, g, f)
    return rep


def validate_functor(F: FinFunctor, name=None) -> ValidationReport:
    rep = ValidationReport(name or f"functor {F.name}".strip())
    S, T = F.source, F.target
    for x in S.objects:
        try:
            y = F.ob(x)
        except (KeyError, TypeError):
            rep.add("object-unmapped", f"object {x} has no image", x)
            continue
        if not T.has_object(y):
            rep.add("object-image", f"image of {x} is not an object of the target", x, y)
    if rep.violations:
        return rep
    mors = list(S.morphisms())
    img = {}
    for f in mors:
        try:
            u = F.mor(f)
        except (KeyError, TypeError):
            rep.add("morphism-unmapped", f"morphism {f} has no image", f)
            continue
        img[f] = u
        try:
            ok = T.dom(u) == F.ob(S.dom(f)) and T.cod(u) == F.ob(S.cod(f))
        except (KeyError, TypeError, IndexError):
            ok = False
        if not ok:
            rep.add("morphism-type", f"image of {f} has wrong dom/cod", f, u)
    if rep.violations:
        return rep
    for x in S.objects:
        if img[S.identity(x)] != T.identity(F.ob(x)):
            rep.add("identity", f"identity of {x} not preserved", x)
    out = defaultdict(list)
    for f in mors:
        out[S.dom(f)].append(f)
    for f in mors:
        for g in out[S.cod(f)]:
            rep.checked += 1
            if img[S.compose(g, f)] != T.compose(img[g], img[f]):
                rep.add("composition", f"F({g}∘{f}) ≠ F({g})∘F({f})", g, f)
    return rep


def validate_nat_trans(a: FinNatTrans, name=None) -> ValidationReport:
    rep = ValidationReport(name or "natural transformation")
    F, G = a.source, a.target
    S, T = F.source, F.target
    for x in S.objects:
        try:
            c = a.at(x)
            ok = T.dom(c) == F.ob(x) and T.cod(c) == G.ob(x)
        except (KeyError, TypeError, IndexError):
            ok = False
        if not ok:
            rep.add("component-type", f"component at {x} has wrong type", x)
    if rep.violations:
        return rep
    for f in S.morphisms():
        x, y = S.dom(f), S.cod(f)
        rep.checked += 1
        if T.compose(G.mor(f), a.at(x)) != T.compose(a.at(y), F.mor(f)):
            rep.add("naturality", f"naturality square at {f} fails", f)
    return rep


def is_groupoid(c: Category) -> bool:
    return all(c.is_iso(f) for f in c.morphisms())


# ---------------------------------------------------------------- constructions

def tabulate(c: Category, objects=None, bound: int = 500_000, name=None) -> FinCat:
    """Tabulate a concrete category over the given objects (default: all)."""
    objs = list(c.objects if objects is None else objects)
    oid = {x: ident(x) for x in objs}
    homs = {(a, b): list(c.hom(a, b)) for a in objs for b in objs}
    cells = sum(len(homs[(a, b)]) * len(homs[(b, d)]) for a in objs for b in objs for d in objs)
    if cells > bound:
        raise SizeExceeded("composition table", cells, bound)
    mid = {}
    records = []
    for (a, b), hs in homs.items():
        for f in hs:
            k = ident(f)
            mid[f] = k
            records.append((k, oid[a], oid[b]))
    table = {}
    for (a, b), fs in homs.items():
        for d in objs:
            for g in homs[(b, d)]:
                for f in fs:
                    table[(mid[g], mid[f])] = mid[c.compose(g, f)]
    out = FinCat(oid.values(), records, {oid[x]: mid[c.identity(x)] for x in objs}, table,
                 name=name or c.name)
    out.obj_label = {v: k for k, v in oid.items()}
    out.mor_label = {v: k for k, v in mid.items()}
    return out


def product_category(c: FinCat, d: FinCat) -> FinCat:
    objs = [pack(a, b) for a in c.objects for b in d.objects]
    records = [(pack(f, g), pack(fd, gd), pack(fc, gc))
               for f, fd, fc in c.morphism_records for g, gd, gc in d.morphism_records]
    ids = {pack(a, b): pack(c.identity(a), d.identity(b)) for a in c.objects for b in d.objects}
    table = {(pack(g1, g2), pack(f1, f2)): pack(h1, h2)
             for (g1, f1), h1 in c.compose_table.items()
             for (g2, f2), h2 in d.compose_table.items()}
    out = FinCat(objs, records, ids, table, name=f"{c.name}×{d.name}")
    out.obj_label = {pack(a, b): (a, b) for a in c.objects for b in d.objects}
    return out


def product_projections(c: FinCat, d: FinCat, cd: FinCat):
    p1 = FinFunctor(cd, c, lambda x: json.loads(x)[0], lambda f: json.loads(f)[0])
    p2 = FinFunctor(cd, d, lambda x: json.loads(x)[1], lambda f: json.loads(f)[1])
    return p1, p2


def comma_category(F: FinFunctor, G: FinFunctor):
    """(F ↓ G): objects (a, b, α: F a → G b), morphisms commuting squares."""
    A, B, C = F.source, G.source, F.target
    objs = {}
    for a in A.objects:
        for b in B.objects:
            for al in C.hom(F.ob(a), G.ob(b)):
                objs[ident((ident(a), ident(b), ident(al)))] = (a, b, al)
    records, table, ids, mors = [], {}, {}, {}
    for o1, (a, b, al) in objs.items():
        for o2, (a2, b2, al2) in objs.items():
            for h in A.hom(a, a2):
                for k in B.hom(b, b2):
                    if C.compose(G.mor(k), al) == C.compose(al2, F.mor(h)):
                        m = ident((ident(h), ident(k), o1, o2))
                        records.append((m, o1, o2))
                        mors[m] = (h, k, o1, o2)
    for o, (a, b, al) in objs.items():
        ids[o] = ident((ident(A.identity(a)), ident(B.identity(b)), o, o))
    by_key = {(h, k, o1, o2): m for m, (h, k, o1, o2) in mors.items()}
    for m1, (h, k, o1, o2) in mors.items():
        for m2, (h2, k2, p1, p2) in mors.items():
            if p1 == o2:
                table[(m2, m1)] = by_key[(A.compose(h2, h), B.compose(k2, k), o1, p2)]
    cat = FinCat(objs, records, ids, table, name="comma")
    cat.obj_label = objs
    cat.mor_label = mors
    pa = FinFunctor(cat, A, {o: v[0] for o, v in objs.items()}, {m: v[0] for m, v in mors.items()})
    pb = FinFunctor(cat, B, {o: v[1] for o, v in objs.items()}, {m: v[1] for m, v in mors.items()})
    return cat, pa, pb


def arrow_category(c: Category):
    """Category of arrows and commuting squares, with domain and codomain functors."""
    arrows = list(c.morphisms())
    aid = {m: ident(m) for m in arrows}
    records, mors = [], {}
    for m in arrows:
        for n in arrows:
            for u in c.hom(c.dom(m), c.dom(n)):
                for v in c.hom(c.cod(m), c.cod(n)):
                    if c.compose(v, m) == c.compose(n, u):
                        k = ident((ident(u), ident(v), aid[m], aid[n]))
                        records.append((k, aid[m], aid[n]))
                        mors[k] = (u, v, m, n)
    by_key = {v: k for k, v in mors.items()}
    table = {}
    for k1, (u, v, m, n) in mors.items():
        for k2, (u2, v2, n2, p) in mors.items():
            if n2 == n:
                table[(k2, k1)] = by_key[(c.compose(u2, u), c.compose(v2, v), m, p)]
    ids = {aid[m]: by_key[(c.identity(c.dom(m)), c.identity(c.cod(m)), m, m)] for m in arrows}
    cat = FinCat(aid.values(), records, ids, table, name=f"arrows({c.name})")
    cat.obj_label = {v: k for k, v in aid.items()}
    cat.mor_label = mors
    dom = FinFunctor(cat, c, {aid[m]: c.dom(m) for m in arrows}, {k: v[0] for k, v in mors.items()})
    cod = FinFunctor(cat, c, {aid[m]: c.cod(m) for m in arrows}, {k: v[1] for k, v in mors.items()})
    return cat, dom, cod


def enumerate_functors(E: FinCat, C: Category) -> Iterable[FinFunctor]:
    """All functors E → C, in lexicographic order of assignments."""
    eobj = list(E.objects)
    gens = [f for f in E.morphisms() if f not in set(E.identity_map.values())]
    for objs in itertools.product(C.objects, repeat=len(eobj)):
        om = dict(zip(eobj, objs))
        choices = [C.hom(om[E.dom(f)], om[E.cod(f)]) for f in gens]
        for pick in itertools.product(*choices):
            mm = dict(zip(gens, pick))
            for x in eobj:
                mm[E.identity(x)] = C.identity(om[x])
            F = FinFunctor(E, C, om, mm)
            if all(mm[E.compose(g, f)] == C.compose(mm[g], mm[f])
                   for (g, f) in E.compose_table):
                yield F


def find_isomorphism(c: Category, d: Category) -> FinFunctor | None:
    """Exhaustive search for an isomorphism of categories c → d."""
    co, do = list(c.objects), list(d.objects)
    if len(co) != len(do):
        return None
    csig = {a: sorted(len(c.hom(a, b)) for b in co) for a in co}
    dsig = {a: sorted(len(d.hom(a, b)) for b in do) for a in do}
    cmors = list(c.morphisms())
    if len(cmors) != len(list(d.morphisms())):
        return None

    def objects(i, om, used):
        if i == len(co):
            yield dict(om)
            return
        a = co[i]
        for b in do:
            if b in used or csig[a] != dsig[b]:
                continue
            if any(len(c.hom(a, x)) != len(d.hom(b, om[x])) or len(c.hom(x, a)) != len(d.hom(om[x], b))
                   for x in co[:i]) or len(c.hom(a, a)) != len(d.hom(b, b)):
                continue
            om[a] = b
            used.add(b)
            yield from objects(i + 1, om, used)
            used.discard(b)
            del om[a]

    for om in objects(0, {}, set()):
        mm = {c.identity(x): d.identity(om[x]) for x in co}
        rest = [f for f in cmors if f not in mm]
        if _assign_morphisms(c, d, om, mm, rest, 0, set(mm.values())):
            return FinFunctor(c, d, om, dict(mm), name="iso")
    return None


def _assign_morphisms(c, d, om, mm, rest, i, used):
    if i == len(rest):
        return all(c.cod(q) != c.dom(p) or d.compose(mm[p], mm[q]) == mm[c.compose(p, q)]
                   for p in mm for q in mm)
    f = rest[i]
    for g in d.hom(om[c.dom(f)], om[c.cod(f)]):
        if g in used:
            continue
        mm[f] = g
        used.add(g)
        ok = True
        for (x, y) in list(mm.items()):
            for p, q in ((f, x), (x, f)):
                if c.cod(q) == c.dom(p):
                    r = c.compose(p, q)
                    if r in mm and d.compose(mm[p], mm[q]) != mm[r]:
                        ok = False
                        break
            if not ok:
                break
        if ok and _assign_morphisms(c, d, om, mm, rest, i + 1, used):
            return True
        used.discard(g)
        del mm[f]
    return False
