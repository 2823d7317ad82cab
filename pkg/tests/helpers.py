"""Independent brute-force oracles and hypothesis strategies shared by the tests.

Nothing here calls into the code under test beyond the plain FinCat
constructor, so the oracles stay independent of the searches they check.
"""
import itertools

from hypothesis import strategies as st

from fibcat.fincat import FinCat, poset_category


def compose_fns(g, f):
    return tuple(g[i] for i in f)


def transformation_monoid(gens, n):
    """One-object category of the functions on range(n) generated by gens."""
    ident = tuple(range(n))
    elems = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                c = compose_fns(g, a)
                if c not in elems:
                    elems.add(c)
                    new.append(c)
        frontier = new
    name = {e: "m" + "".join(map(str, e)) for e in elems}
    recs = [(name[e], "*", "*") for e in elems]
    table = {(name[g], name[f]): name[compose_fns(g, f)] for g in elems for f in elems}
    return FinCat(["*"], recs, {"*": name[ident]}, table, name="monoid")


def full_finset(n):
    """The full subcategory of finite sets {0..k-1}, k <= n, written out by hand."""
    objs = [str(k) for k in range(n + 1)]
    recs, mors = [], {}
    for a in range(n + 1):
        for b in range(n + 1):
            for img in itertools.product(range(b), repeat=a):
                m = f"{a}>{b}:{''.join(map(str, img))}"
                recs.append((m, str(a), str(b)))
                mors[m] = (a, b, img)
    table = {}
    for g, (b, c, gi) in mors.items():
        for f, (a, b2, fi) in mors.items():
            if b2 == b:
                table[(g, f)] = f"{a}>{c}:{''.join(str(gi[i]) for i in fi)}"
    ids = {str(a): f"{a}>{a}:{''.join(map(str, range(a)))}" for a in range(n + 1)}
    return FinCat(objs, recs, ids, table, name=f"finset{n}")


def naive_axioms(c):
    """Every violated axiom, by direct triple loops over the table."""
    bad = []
    ends = {m: (d, t) for m, d, t in c.morphism_records}
    for (g, f), h in c.compose_table.items():
        if ends[f][1] != ends[g][0] or ends[h] != (ends[f][0], ends[g][1]):
            bad.append(("type", g, f))
    for f, (d, t) in ends.items():
        if (f, c.identity_map[d]) in c.compose_table and c.compose_table[(f, c.identity_map[d])] != f:
            bad.append(("rid", f))
        if c.compose_table.get((c.identity_map[t], f), f) != f:
            bad.append(("lid", f))
    for h, g, f in itertools.product(ends, repeat=3):
        if ends[f][1] == ends[g][0] and ends[g][1] == ends[h][0]:
            try:
                if c.compose_table[(h, c.compose_table[(g, f)])] != \
                        c.compose_table[(c.compose_table[(h, g)], f)]:
                    bad.append(("assoc", h, g, f))
            except KeyError:
                bad.append(("missing", h, g, f))
    return bad


@st.composite
def preorders(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=6))
    return poset_category(range(n), pairs, name="preorder")


@st.composite
def monoids(draw, max_size=6):
    n = draw(st.integers(1, 3))
    gens = draw(st.lists(st.tuples(*[st.integers(0, n - 1)] * n), min_size=0, max_size=2))
    m = transformation_monoid(gens, n)
    if len(m.morphism_ids) > max_size:
        m = transformation_monoid(gens[:1], n)
    return m


small_categories = st.one_of(preorders(), monoids())
tiny_categories = st.one_of(preorders(max_n=3), monoids(max_size=4))


def functors(E, C):
    """Every functor E -> C between tabulated categories, by naive assignment."""
    eobj, cobj = list(E.objects), list(C.objects)
    ids = set(E.identity_map.values())
    emor = [f for f in E.morphism_ids if f not in ids]
    for objs in itertools.product(cobj, repeat=len(eobj)):
        om = dict(zip(eobj, objs))
        choices = [C.hom(om[E.dom(f)], om[E.cod(f)]) for f in emor]
        for pick in itertools.product(*choices):
            mm = dict(zip(emor, pick))
            mm.update({E.identity(x): C.identity(om[x]) for x in eobj})
            if all(mm[h] == C.compose(mm[g], mm[f]) for (g, f), h in E.compose_table.items()):
                yield om, mm


def left_adjoint_exists(G_ob, G_mor, D, C):
    """Search every F: C -> D and unit for the hom-bijection D(Fc, d) = C(c, Gd)."""
    for om, mm in functors(C, D):
        units = [C.hom(c, G_ob(om[c])) for c in C.objects]
        for eta in itertools.product(*units):
            eta = dict(zip(C.objects, eta))
            natural = all(C.compose(G_mor(mm[k]), eta[C.dom(k)]) == C.compose(eta[C.cod(k)], k)
                          for k in C.morphism_ids)
            if not natural:
                continue
            if all(len({C.compose(G_mor(h), eta[c]) for h in D.hom(om[c], d)})
                   == len(D.hom(om[c], d)) == len(C.hom(c, G_ob(d)))
                   for c in C.objects for d in D.objects):
                return True
    return False
