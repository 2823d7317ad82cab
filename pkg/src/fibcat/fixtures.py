"""Named fixtures, seeded random indexed categories and the mutation corpus."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Callable

from .concrete import FinSetCat, PSetCat
from .fincat import (FinCat, FinFunctor, FinNatTrans, discrete, enumerate_functors, ident,
                     identity_functor, make_category, parallel_pair, poset_category,
                     product_category, span, cospan, terminal_category, validate_category,
                     validate_functor, validate_nat_trans, walking_arrow)
from .indexed import (IndexedCat, fam_indexed, finset_base, make_section, pseudoify,
                      representable_indexed, restrict, section_report, sections,
                      validate_indexed)

FIBRE_LIMIT = (4, 8)   # objects, morphisms
BASE_LIMIT = (4, 8)


def indiscrete2() -> FinCat:
    return make_category(["0", "1"], [("u", "0", "1"), ("v", "1", "0")],
                         {("v", "u"): "id_0", ("u", "v"): "id_1"}, name="I2")


def z2() -> FinCat:
    return make_category(["*"], [("t", "*", "*")], {("t", "t"): "id_*"}, name="Z2")


def chain3() -> FinCat:
    return poset_category(["0", "1", "2"], [("0", "1"), ("1", "2")], name="chain3")


def small_pool():
    """Categories within the fibre size limits."""
    return [terminal_category(), discrete(1), discrete(2), walking_arrow(), parallel_pair(),
            span(), cospan(), indiscrete2(), z2(), chain3()]


def _size(c: FinCat):
    return len(c.objects), len(c.morphism_records)


def _within(c, limit):
    n, m = _size(c)
    return n <= limit[0] and m <= limit[1]


# ---------------------------------------------------------------- named fixtures

def fam_arrow() -> IndexedCat:
    """Fam(walking arrow) over finite sets {0, 1}."""
    return fam_indexed(walking_arrow(), finset_base(1))


def fam_arrow_wide() -> IndexedCat:
    """Fam(walking arrow) over {0, 1, 2}: extensive on discrete shapes, only
    left Kan extensive on parallel pairs (the fibres have coequalizers)."""
    return fam_indexed(walking_arrow(), finset_base(2))


def fam_discrete() -> IndexedCat:
    """Fam(discrete 2) over finite sets {0, 1, 2}; a groupoid-fibred example."""
    return fam_indexed(discrete(2), finset_base(2))


def representable_two() -> IndexedCat:
    """FinSet(−, 2) with discrete fibres."""
    return representable_indexed(finset_base(2), "2")


def twin_fixture(D: FinCat, n: int = 1, flip=lambda f: True):
    """(strict, pseudo) pair: Fam(D × I2) and a copy whose reindexing swaps twins.

    The pseudo copy has non-identity unitors and compositors; the two are
    equivalent, so every limit and colimit must agree."""
    I2 = indiscrete2()
    D2 = product_category(D, I2)
    L2 = fam_indexed(D2, finset_base(n))

    def twist(f, y):
        if not flip(f):
            return None
        F = L2.fibre(L2.base.dom(f))
        x = L2.re(f, y)
        lab = F.obj_label[x]
        new = tuple(ident((json.loads(c)[0], "1" if json.loads(c)[1] == "0" else "0"))
                    for c in lab)
        comps = [next(h for h in D2.hom(c, nw) if D2.is_iso(h)) for c, nw in zip(lab, new)]
        return ident(new), ident(tuple(comps))

    return L2, pseudoify(L2, twist)


def named_indexed() -> dict:
    return {
        "fam_arrow": fam_arrow,
        "fam_arrow_wide": fam_arrow_wide,
        "fam_discrete": fam_discrete,
        "representable_two": representable_two,
        "twin_pseudo": lambda: twin_fixture(discrete(1))[1],
    }


# ---------------------------------------------------------------- random fixtures

def random_forest_poset(rng: random.Random, n: int) -> FinCat:
    """A poset whose Hasse diagram is a forest (child ≤ parent)."""
    parent = {}
    for i in range(1, n):
        if rng.random() < 0.7:
            parent[str(i)] = str(rng.randrange(i))
    c = poset_category([str(i) for i in range(n)], list(parent.items()), name=f"forest{n}")
    c.parent = parent
    return c


def _path_up(parent, a, b):
    path = [a]
    while path[-1] != b:
        path.append(parent[path[-1]])
    return path


def random_forest_indexed(rng: random.Random, pool=None) -> IndexedCat:
    """Strict indexed category over a forest poset with random reindexing functors."""
    pool = pool or small_pool()
    while True:
        base = random_forest_poset(rng, rng.randint(1, 4))
        if _within(base, BASE_LIMIT):
            break
    fibres = {a: rng.choice(pool) for a in base.objects}
    step = {}
    for child, par in base.parent.items():
        funs = list(enumerate_functors(fibres[par], fibres[child]))
        if not funs:
            fibres[child] = fibres[par]
            funs = [identity_functor(fibres[par])]
        step[child] = rng.choice(funs).frozen()
    reindex = {}
    for f, a, b in base.morphism_records:
        if a == b:
            reindex[f] = identity_functor(fibres[a]).frozen()
            continue
        path = _path_up(base.parent, a, b)
        F = step[path[-2]]
        for c in reversed(path[:-2]):
            F = F.then(step[c])
        reindex[f] = F.frozen()
    return IndexedCat(base, fibres, reindex, name="random forest")


def random_indexed(seed: int) -> IndexedCat:
    """Deterministic fixture for a seed: forest-indexed, Fam-style, representable or pseudo."""
    rng = random.Random(seed)
    kind = seed % 4
    if kind == 0:
        L = random_forest_indexed(rng)
    elif kind == 1:
        D = rng.choice([terminal_category(), discrete(1), walking_arrow(), z2(), indiscrete2(),
                        parallel_pair(), chain3()])
        L = fam_indexed(D, finset_base(1))
    elif kind == 2:
        while True:
            C = random_forest_poset(rng, rng.randint(2, 4))
            if _within(C, BASE_LIMIT):
                break
        L = representable_indexed(C, rng.choice(C.objects))
    else:
        L = twin_fixture(rng.choice([discrete(1), terminal_category()]), 1)[1]
    L.name = f"{L.name} [seed {seed}]"
    return L


def random_diagrams(L: IndexedCat, shp: FinCat, rng: random.Random, limit: int = 3):
    """Up to ``limit`` diagrams of the given shape: base functor plus a section."""
    from .fibcolim import DiagramPair
    out = []
    funs = list(enumerate_functors(shp, L.base))
    rng.shuffle(funs)
    for J1 in funs:
        R = restrict(L, J1)
        try:
            secs = list(sections(R, bound=2000).objects)
        except Exception:
            continue
        if not secs:
            continue
        out.append(DiagramPair(shp, J1, rng.choice(secs)))
        if len(out) >= limit:
            break
    return out


# ---------------------------------------------------------------- mutation corpus

@dataclass
class Mutant:
    name: str
    validator: str
    run: Callable          # () -> ValidationReport
    expected: str          # violation code that must be reported


def _mutate_table(c: FinCat, key, value, name="mutant") -> FinCat:
    table = dict(c.compose_table)
    table[key] = value
    return FinCat(c.objects, c.morphism_records, c.identity_map, table, name=name)


def z3() -> FinCat:
    return make_category(["*"], [("g", "*", "*"), ("h", "*", "*")],
                         {("g", "g"): "h", ("g", "h"): "id_*", ("h", "g"): "id_*", ("h", "h"): "g"},
                         name="Z3")


def _z2_monoidal(assoc="id", lunit="id", runit="id", tensor_mor=None):
    """Z2 as a one-object monoidal category; structure maps are constants."""
    from .monoidal import MonoidalData
    C = z2()
    xor = lambda f, g: "id_*" if f == g else "t"
    return MonoidalData(C, "*", lambda a, b: "*", tensor_mor or xor,
                        lambda a, b, c: "t" if assoc == "t" else "id_*",
                        lambda a: "t" if lunit == "t" else "id_*",
                        lambda a: "t" if runit == "t" else "id_*", "Z2")


def _broken_section():
    L = fam_arrow()
    B = L.base
    for s in sections(L).objects:
        for f in B.morphisms():
            A = L.fibre(B.dom(f))
            for alt in A.morphisms():
                if alt != s.comp(f) and A.cod(alt) != A.cod(s.comp(f)):
                    xi = tuple((k, alt if k == f else v) for k, v in s.xi)
                    return section_report(L, type(s)(s.values, xi))
    raise AssertionError("no mutable section")


def _twisted(kind):
    L2, P = twin_fixture(discrete(1))
    B = P.base
    if kind == "unitor":
        return validate_indexed(IndexedCat(B, P.fibre, P.reindex,
                                           lambda a: (lambda x: P.fibre(a).identity(x)),
                                           P.compositors))
    if kind == "compositor":
        def mu(fg):
            f, g = fg
            A = P.fibre(B.dom(f))
            return lambda z: A.identity(P.re(f, P.re(g, z)))
        return validate_indexed(IndexedCat(B, P.fibre, P.reindex, P.unitors, mu))
    wrong = lambda f: L2.reindex(B.identity(B.cod(f)))
    return validate_indexed(IndexedCat(B, L2.fibre, wrong))


def mutants() -> list:
    """Corrupted inputs, each expected to be rejected with a specific violation code."""
    from dataclasses import replace
    from .dialectica import FinSetOp
    from .monoidal import (cartesian_finset, cocartesian, cocartesian_cotractable, pset_tractable,
                           validate_monoidal, validate_tractable)
    out = []
    M = Mutant

    # category axioms
    c3, wa, zz = chain3(), walking_arrow(), z2()
    bad_monoid = make_category(["*"], [("t", "*", "*"), ("s", "*", "*")],
                               {("t", "t"): "s", ("s", "s"): "id_*", ("t", "s"): "id_*",
                                ("s", "t"): "id_*"})
    out += [
        M("composite with the wrong type", "category",
          lambda: validate_category(_mutate_table(c3, ("1<=2", "0<=1"), "0<=1")), "compose-type"),
        M("non-associative monoid table", "category",
          lambda: validate_category(bad_monoid), "associativity"),
        M("identity not neutral on the right", "category",
          lambda: validate_category(_mutate_table(zz, ("t", "id_*"), "id_*")), "right-identity"),
        M("missing composite", "category",
          lambda: validate_category(FinCat(wa.objects, wa.morphism_records, wa.identity_map,
                                           {k: v for k, v in wa.compose_table.items()
                                            if k != ("id_1", "a")})), "compose-missing"),
    ]

    # functor laws
    pp = parallel_pair()
    out += [
        M("arrow sent to a morphism of the wrong type", "functor",
          lambda: validate_functor(FinFunctor(wa, wa, {"0": "0", "1": "1"},
                                              {"a": "id_0", "id_0": "id_0", "id_1": "id_1"})),
          "morphism-type"),
        M("identity not preserved", "functor",
          lambda: validate_functor(FinFunctor(zz, zz, {"*": "*"}, {"t": "t", "id_*": "t"})),
          "identity"),
        M("composition not preserved", "functor",
          lambda: validate_functor(FinFunctor(zz, z3(), {"*": "*"}, {"t": "g", "id_*": "id_*"})),
          "composition"),
        M("object without an image", "functor",
          lambda: validate_functor(FinFunctor(pp, wa, {"0": "0"},
                                              {"r": "a", "s": "a", "id_0": "id_0", "id_1": "id_1"})),
          "object-unmapped"),
    ]

    # natural transformations
    swap = FinFunctor(pp, pp, {"0": "0", "1": "1"},
                      {"r": "s", "s": "r", "id_0": "id_0", "id_1": "id_1"})
    out += [
        M("identity components between different functors", "nat_trans",
          lambda: validate_nat_trans(FinNatTrans(identity_functor(pp), swap,
                                                 {"0": "id_0", "1": "id_1"})), "naturality"),
        M("component of the wrong type", "nat_trans",
          lambda: validate_nat_trans(FinNatTrans(identity_functor(pp), swap,
                                                 {"0": "r", "1": "id_1"})), "component-type"),
    ]

    # indexed categories and sections
    out += [
        M("pseudo fixture with identity unitors", "indexed", lambda: _twisted("unitor"),
          "unitor-type"),
        M("pseudo fixture with identity compositors", "indexed", lambda: _twisted("compositor"),
          "compositor-type"),
        M("reindexing functor with the wrong target", "indexed", lambda: _twisted("reindex"),
          "reindex-type"),
        M("section with a corrupted transition map", "section", _broken_section, "xi-type"),
    ]

    # monoidal coherence
    C = FinSetCat(2)
    m = cartesian_finset(C)
    out += [
        M("associator that is coherent with the triangle but not the pentagon", "monoidal",
          lambda: validate_monoidal(_z2_monoidal(assoc="t", lunit="t")), "pentagon"),
        M("left unitor breaking the triangle", "monoidal",
          lambda: validate_monoidal(_z2_monoidal(lunit="t")), "triangle"),
        M("tensor on morphisms breaking interchange", "monoidal",
          lambda: validate_monoidal(_z2_monoidal(
              tensor_mor=lambda f, g: "t" if (f, g) == ("t", "id_*") else "id_*")),
          "tensor-composition"),
        M("left unitor that is not invertible", "monoidal",
          lambda: validate_monoidal(replace(m, lunit=lambda a: C.fn(a, a, (0,) * a)
                                            if a == 2 else m.lunit(a))), "left-unitor"),
    ]

    # tractability
    P = PSetCat(2)
    t = pset_tractable(P)

    def phi_bad(A, B, Cc, g):
        f, r = t.phi(A, B, Cc, g)
        if (A, B, Cc) == (1, 1, 1) and r.img == (0,):
            return f, r._replace(img=(None,))
        return f, r

    def dial_bad():
        D = FinSetOp(2)
        _, data = cocartesian_cotractable(D)
        from .monoidal import strict_monoidal, opposite_monoidal
        dm = strict_monoidal(D, 1, lambda a, b: a * b, D.coproduct_map)
        bad = replace(data, dbar=lambda A, B, f: B)
        return validate_tractable(opposite_monoidal(dm), bad, tuple(D.objects))

    out += [
        M("Φ merging two maps", "tractable",
          lambda: validate_tractable(cocartesian(P), replace(t, phi=phi_bad)), "bijection"),
        M("∂̄ off by one", "tractable",
          lambda: validate_tractable(cocartesian(P), replace(
              t, dbar=lambda A, B, f: t.dbar(A, B, f) + (1 if (A, B) == (2, 1) else 0))),
          "cardinality"),
        M("Dialectica ∂̄ returning the wrong object", "tractable", dial_bad, "cardinality"),
    ]
    return out


# ---------------------------------------------------------------- document corpus

def corpus() -> dict:
    """Relative path -> Document for the shipped fixture files (valid inputs only)."""
    from .catio import (Document, FORMAT_VERSION, category_body, from_object, id_renaming,
                        simplify_ids)
    from .monoidal import chain, m3
    docs = {}
    for c in (walking_arrow(), parallel_pair(), span(), cospan(), chain3(), z2(), indiscrete2()):
        docs[f"categories/{c.name.lower()}.doc"] = from_object(c)
    wa, c3 = walking_arrow(), chain3()
    F = FinFunctor(wa, c3, {"0": "0", "1": "2"}, {"id_0": "0<=0", "id_1": "2<=2", "a": "0<=2"},
                   name="endpoints")
    docs["categories/endpoints.functor.doc"] = from_object(F)
    G = FinFunctor(wa, c3, {"0": "1", "1": "2"}, {"id_0": "1<=1", "id_1": "2<=2", "a": "1<=2"},
                   name="upper")
    docs["categories/endpoints_to_upper.nat.doc"] = from_object(
        FinNatTrans(F, G, {"0": "0<=1", "1": "2<=2"}), name="shift")
    for name, fx in named_indexed().items():
        L = fx()
        raw = from_object(L)
        ren = id_renaming(raw)
        docs[f"indexed/{name}.doc"] = simplify_ids(raw, ren)
        for shp in (discrete(2), parallel_pair()):
            ds = random_diagrams(L, shp, random.Random(0), 1)
            if ds:
                tag = "pair" if shp.name == "parallel_pair" else "discrete2"
                docs[f"diagrams/{name}.{tag}.doc"] = simplify_ids(
                    from_object(ds[0], name=f"{name} {tag}"), ren)

    def param(kind, **body):
        b = {"name": "", "bound": None, "lattice": None, **body}
        if kind == "instance":
            b.setdefault("size", None)
        return Document(FORMAT_VERSION, kind, b)

    lat2 = category_body(chain(2))
    docs["monoidal/cartesian_finset.doc"] = param("monoidal", construction="cartesian_finset", bound=2)
    docs["monoidal/cocartesian_pset.doc"] = param("monoidal", construction="cocartesian_pset", bound=2)
    docs["monoidal/m3_join.doc"] = param("monoidal", construction="lattice_join", name="M3",
                                         lattice=category_body(m3()))
    docs["monoidal/chain2_meet.doc"] = param("monoidal", construction="lattice_meet", lattice=lat2)
    for c, n in (("cartesian_finset", 2), ("cocartesian_finset", 2), ("cocartesian_pset", 2),
                 ("cocartesian_f2lin", 2), ("pset_coproducts", 3), ("extensive_finset", 3)):
        docs[f"tractable/{c}.doc"] = param("tractable", construction=c, bound=n)
    docs["tractable/closed_chain2.doc"] = param("tractable", construction="closed_lattice",
                                                lattice=lat2)
    docs["tractable/boolean_square_coproducts.doc"] = param(
        "tractable", construction="lattice_coproducts", lattice=category_body(_boolean_square()))
    docs["instances/dialpf.doc"] = param("instance", flavor="dial", bound=2)
    docs["instances/biproduct.doc"] = param("instance", flavor="biproduct", bound=2, size=1)
    docs["instances/extensive.doc"] = param("instance", flavor="extensive", bound=2, size=2)
    docs["instances/pset.doc"] = param("instance", flavor="pset", bound=2, size=2)
    docs["instances/closed_chain2.doc"] = param("instance", flavor="closed", bound=2, lattice=lat2)
    return docs


def negative_corpus() -> dict:
    """Documents that parse but must be rejected by their validator or command."""
    from .catio import Document, FORMAT_VERSION, category_body, from_object
    from .monoidal import m3
    docs = {}
    c3 = chain3()
    docs["negative/wrong_composite.doc"] = from_object(_mutate_table(c3, ("1<=2", "0<=1"), "0<=1",
                                                                     "chain3 mutant"))
    docs["negative/m3_coproducts.doc"] = Document(FORMAT_VERSION, "tractable", {
        "name": "M3", "construction": "lattice_coproducts", "bound": None,
        "lattice": category_body(m3())})
    return docs


def _boolean_square():
    from .monoidal import boolean_square
    return boolean_square()
