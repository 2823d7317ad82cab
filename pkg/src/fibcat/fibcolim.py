"""Fibred limits and colimits in a Grothendieck construction.

A diagram in Σ_C L splits into a base diagram J₁ and a section J₂ of L∘J₁^op.
Limits: take the base limit (L, λ), reindex J₂ along λ into the apex fibre,
take the fibre limit and check every L(u) preserves it.  Colimits: take the
base colimit (L, λ) and a left adjoint of the comparison functor
L(λ): L(L) → sections, evaluated at J₂.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (CategoryError, NoBaseColimit, NoBaseLimit, NoFibreCoequalizer,
                     NoFibreLimit, NoLeftAdjoint, NotFound, NotPreserved, SizeExceeded)
from .fincat import (Category, FinCat, FinFunctor, enumerate_functors, is_groupoid,
                     parallel_pair)
from .groth import GMor, GrothCat, grothendieck
from .indexed import (IndexedCat, SectionMor, SectionObj, Sections, make_section,
                      reindex_section, restrict, section_report)
from .search import (Cone, find_colimit, find_left_adjoint, find_limit, initial_under,
                     is_limit_cone, mediating)


@dataclass
class DiagramPair:
    shape: FinCat
    J1: FinFunctor
    J2: SectionObj

    def restricted(self, L: IndexedCat) -> IndexedCat:
        return restrict(L, self.J1)


def diagram_from_total(G: GrothCat, J: FinFunctor) -> DiagramPair:
    """Split a diagram in the total category into (J₁, J₂)."""
    E = J.source
    T = G.total
    lab = T.obj_label
    J1 = FinFunctor(E, G.source.base, {e: lab[J.ob(e)][0] for e in E.objects},
                    {m: T.mor_label[J.mor(m)].base for m in E.morphisms()})
    J2 = SectionObj(tuple((e, lab[J.ob(e)][1]) for e in E.objects),
                    tuple((m, T.mor_label[J.mor(m)].fibre) for m in E.morphisms()))
    return DiagramPair(E, J1, J2)


def total_diagram(G: GrothCat, D: DiagramPair) -> FinFunctor:
    E, J1, J2 = D.shape, D.J1, D.J2
    om = {e: G.obj(J1.ob(e), J2.at(e)) for e in E.objects}
    mm = {}
    for m in E.morphisms():
        a, b = E.dom(m), E.cod(m)
        mm[m] = G.mor(GMor((J1.ob(a), J2.at(a)), (J1.ob(b), J2.at(b)), J1.mor(m), J2.comp(m)))
    return FinFunctor(E, G.total, om, mm, name="diagram")


def make_diagram(L: IndexedCat, shape: FinCat, J1: FinFunctor, values: dict, xi: dict) -> DiagramPair:
    """Diagram from fibre objects and ξ on the non-identity shape morphisms (validated)."""
    R = restrict(L, J1)
    s = make_section(R, values, xi)
    rep = section_report(R, s)
    if not rep.ok:
        raise CategoryError("not a section: " + rep.summary())
    return DiagramPair(shape, J1, s)


@dataclass
class FibredResult:
    apex: tuple  # (base object, fibre object)
    legs: dict   # shape object -> GMor
    base_cone: Cone
    fibre_witness: object  # fibre limit cone, or the reflection for colimits
    cocone: bool = False
    adjoint: str = ""  # colimits: "global" or "pointwise"
    notes: list = field(default_factory=list)


# ---------------------------------------------------------------- limits

def fibred_limit(L: IndexedCat, D: DiagramPair) -> FibredResult:
    B = L.base
    try:
        bc = find_limit(D.J1)
    except NotFound as e:
        raise NoBaseLimit("base diagram has no limit", obstruction=e.obstruction) from None
    apex, legs = bc.apex, bc.legs
    K = reindex_section(L, D.J1, legs, apex, D.J2)
    try:
        fc = find_limit(K)
    except NotFound as e:
        raise NoFibreLimit(f"reindexed diagram has no limit in the fibre over {apex}",
                           apex=apex, obstruction=e.obstruction) from None
    X = fc.apex
    for c in B.objects:
        for u in B.hom(c, apex):
            Lu = L.reindex(u)
            ok, wit = is_limit_cone(K.then(Lu), Lu.ob(X), {e: Lu.mor(fc.legs[e]) for e in fc.legs})
            if not ok:
                raise NotPreserved(f"reindexing along {u} does not preserve the fibre limit",
                                   morphism=u, witness=wit)
    tl = {e: GMor((apex, X), (D.J1.ob(e), D.J2.at(e)), legs[e], fc.legs[e])
          for e in D.shape.objects}
    return FibredResult((apex, X), tl, bc, fc)


# ---------------------------------------------------------------- colimits

def comparison_functor(L: IndexedCat, J1: FinFunctor, apex, legs: dict, S: Sections) -> FinFunctor:
    """L(λ): L(apex) → sections, C ↦ (E ↦ L(λ_E)(C)) with ξ from inverse compositors."""
    R = S.L
    E, B = J1.source, L.base
    Lap = L.fibre(apex)

    def ob(c):
        vals = {e: L.re(legs[e], c) for e in E.objects}
        xi = {}
        for m in E.morphisms():
            a, b = E.dom(m), E.cod(m)
            Fa = L.fibre(J1.ob(a))
            xi[m] = Fa.inverse(L.mu(J1.mor(m), legs[b], c))
        return SectionObj(tuple((e, vals[e]) for e in E.objects),
                          tuple((m, xi[m]) for m in E.morphisms()))

    def mor(w):
        return SectionMor(ob(Lap.dom(w)), ob(Lap.cod(w)),
                          tuple((e, L.remor(legs[e], w)) for e in E.objects))

    return FinFunctor(Lap, S, ob, mor, name="comparison")


def fibred_colimit(L: IndexedCat, D: DiagramPair, global_adjoint: bool = True,
                   bound: int = 10_000) -> FibredResult:
    try:
        bc = find_colimit(D.J1)
    except NotFound as e:
        raise NoBaseColimit("base diagram has no colimit", obstruction=e.obstruction) from None
    apex, legs = bc.apex, bc.legs
    R = restrict(L, D.J1)
    S = Sections(R, bound)
    Cmp = comparison_functor(L, D.J1, apex, legs, S)
    try:
        refl = initial_under(Cmp, D.J2)
    except NotFound as e:
        raise NoLeftAdjoint("the comparison functor has no reflection of the diagram's section",
                            at=D.J2, obstruction=e.obstruction) from None
    mode, notes = "pointwise", []
    if global_adjoint:
        try:
            find_left_adjoint(Cmp)
            mode = "global"
        except NotFound as e:
            notes.append(f"no global left adjoint: reflection missing at {e.witness.get('at')}")
    X = refl.obj
    unit = refl.unit
    tl = {e: GMor((D.J1.ob(e), D.J2.at(e)), (apex, X), legs[e], unit.at(e))
          for e in D.shape.objects}
    return FibredResult((apex, X), tl, bc, refl,
                        cocone=True, adjoint=mode, notes=notes)


# ---------------------------------------------------------------- oracle comparison

@dataclass
class OracleComparison:
    oracle: Cone
    iso: str          # total morphism comparing formula apex and oracle apex
    over_base: object  # its image in the base


def compare_with_oracle(G: GrothCat, D: DiagramPair, res: FibredResult) -> OracleComparison:
    """Cross-check a formula result against the exhaustive search on the total category."""
    J = total_diagram(G, D)
    T = G.total
    legs = {e: G.mor(m) for e, m in res.legs.items()}
    apex = G.obj(*res.apex)
    oc = find_colimit(J) if res.cocone else find_limit(J)
    m = mediating(J, oc, apex, legs)
    if not T.is_iso(m):
        raise CategoryError("formula and oracle apexes are not isomorphic", mediating=m)
    return OracleComparison(oc, m, G.projection.mor(m))


# ---------------------------------------------------------------- coequalizers

@dataclass
class MatePair:
    alpha_hat: object
    beta_hat: object


@dataclass
class CoequalizerResult:
    apex: tuple
    q: object
    mates: MatePair
    e: object        # L_!(q)B → C*
    eta0: object     # A → L(λ₀)(C*)
    eta1: object     # B → L(q)(C*)
    legs: dict       # "0"/"1" -> GMor


def coequalizer_via_mates(L: IndexedCat, D: DiagramPair) -> CoequalizerResult:
    """Coequalizer of (f, α), (g, β): (X, A) ⇉ (Y, B) via the mates α̂, β̂."""
    B = L.base
    J1 = D.J1
    f, g = J1.mor("r"), J1.mor("s")
    alpha, beta = D.J2.comp("r"), D.J2.comp("s")
    x, y = J1.ob("0"), J1.ob("1")
    a, bobj = D.J2.at("0"), D.J2.at("1")
    Fx = L.fibre(x)
    pp = D.shape
    try:
        bc = find_colimit(J1)
    except NotFound as e:
        raise NoBaseColimit("base pair has no coequalizer", obstruction=e.obstruction) from None
    Q, q = bc.apex, bc.legs["1"]
    lam0 = bc.legs["0"]
    adj = {}
    for name, h in (("lambda0", lam0), ("q", q)):
        try:
            adj[name] = find_left_adjoint(L.reindex(h))
        except NotFound as e:
            raise NoLeftAdjoint(f"reindexing along {h} has no left adjoint", morphism=h,
                                at=e.witness.get("at")) from None
    wq, w0 = adj["q"], adj["lambda0"]
    FQ = L.fibre(Q)
    qB = wq.left.ob(bobj)
    etaq = wq.unit.at(bobj)

    def mate(h, u):
        comp = Fx.compose_all(L.mu(h, q, qB), L.remor(h, etaq), u)
        # transpose along L_!(λ₀) ⊣ L(λ₀): ε ∘ L_!(comp)
        return FQ.compose(w0.counit.at(qB), w0.left.mor(comp))

    ah, bh = mate(f, alpha), mate(g, beta)
    la = w0.left.ob(a)
    pair = FinFunctor(pp, FQ, {"0": la, "1": qB},
                      {"r": ah, "s": bh, pp.identity("0"): FQ.identity(la),
                       pp.identity("1"): FQ.identity(qB)})
    try:
        cq = find_colimit(pair)
    except NotFound as e:
        raise NoFibreCoequalizer(f"mates have no coequalizer in the fibre over {Q}",
                                 obstruction=e.obstruction) from None
    cstar, e = cq.apex, cq.legs["1"]
    eta1 = L.fibre(y).compose(L.remor(q, e), etaq)
    eta0 = Fx.compose_all(L.remor(lam0, e), L.mu(f, q, qB), L.remor(f, etaq), alpha)
    legs = {"0": GMor((x, a), (Q, cstar), lam0, eta0), "1": GMor((y, bobj), (Q, cstar), q, eta1)}
    return CoequalizerResult((Q, cstar), q, MatePair(ah, bh), e, eta0, eta1, legs)


def parallel_diagram(L: IndexedCat, f, alpha, g, beta, b) -> DiagramPair:
    """The pair (f, α), (g, β): (X, A) ⇉ (Y, b) as a diagram over the parallel pair."""
    B = L.base
    x, y = B.dom(f), B.cod(f)
    pp = parallel_pair()
    J1 = FinFunctor(pp, B, {"0": x, "1": y},
                    {"r": f, "s": g, "id_0": B.identity(x), "id_1": B.identity(y)})
    return make_diagram(L, pp, J1, {"0": L.fibre(x).dom(alpha), "1": b}, {"r": alpha, "s": beta})


def compare_coequalizers(G: GrothCat, D: DiagramPair, via_mates: CoequalizerResult,
                         res: FibredResult):
    """Total morphism from the fibred colimit to the mate-route cocone; must be an iso."""
    J = total_diagram(G, D)
    cone = Cone(G.obj(*res.apex), {e: G.mor(m) for e, m in res.legs.items()}, J, cocone=True)
    m = mediating(J, cone, G.obj(*via_mates.apex), {e: G.mor(v) for e, v in via_mates.legs.items()})
    if not G.total.is_iso(m):
        raise CategoryError("mate route and fibred colimit disagree", mediating=m)
    return m


# ---------------------------------------------------------------- extensivity

EXTENSIVE, LEFT_KAN, NEITHER = "Extensive", "LeftKan", "Neither"
_RANK = {EXTENSIVE: 2, LEFT_KAN: 1, NEITHER: 0}


def is_equivalence(F: FinFunctor) -> tuple:
    """(True, None) or (False, reason): full, faithful and essentially surjective."""
    S, T = F.source, F.target
    for x in S.objects:
        for y in S.objects:
            img = [F.mor(u) for u in S.hom(x, y)]
            if len(set(img)) != len(img):
                return False, {"reason": "not faithful", "at": (x, y)}
            if len(img) != len(T.hom(F.ob(x), F.ob(y))):
                return False, {"reason": "not full", "at": (x, y)}
    images = [F.ob(x) for x in S.objects]
    for t in T.objects:
        if not any(T.hom(t, i) and any(T.is_iso(m) for m in T.hom(t, i)) for i in images):
            return False, {"reason": "not essentially surjective", "at": t}
    return True, None


@dataclass
class ExtensivityVerdict:
    verdict: str
    diagrams: list  # (J1, verdict, detail)
    witness: object = None
    skipped: int = 0
    note: str = "verdict relative to the supplied generator diagrams"


def check_extensive(L: IndexedCat, shape: FinCat, generators=None, bound: int = 10_000) -> ExtensivityVerdict:
    gens = list(generators) if generators is not None else list(enumerate_functors(shape, L.base))
    rows, skipped = [], 0
    worst, witness = EXTENSIVE, None
    for J1 in gens:
        try:
            bc = find_colimit(J1)
        except NotFound:
            skipped += 1
            continue
        S = Sections(restrict(L, J1), bound)
        Cmp = comparison_functor(L, J1, bc.apex, bc.legs, S)
        ok, why = is_equivalence(Cmp)
        if ok:
            v, detail = EXTENSIVE, None
        else:
            try:
                find_left_adjoint(Cmp)
                v, detail = LEFT_KAN, why
            except NotFound as e:
                v, detail = NEITHER, {"equivalence": why, "adjoint": e.witness.get("at")}
        rows.append((J1, v, detail))
        if _RANK[v] < _RANK[worst]:
            worst, witness = v, (J1.materialize(), detail)
    return ExtensivityVerdict(worst, rows, witness, skipped)


def groupoid_check(c: Category) -> bool:
    return is_groupoid(c)


# ---------------------------------------------------------------- formula versus oracle

AGREE, BOTH_FAIL, NOT_FIBRED, ORACLE_ONLY_FAILS, MISMATCH = (
    "agree", "both-fail", "not-fibred", "oracle-only-fails", "mismatch")

_STAGES = {NoBaseLimit.code: 0, NoBaseColimit.code: 0, NoFibreLimit.code: 1,
           NoLeftAdjoint.code: 1, NotPreserved.code: 2}


@dataclass
class OracleVerdict:
    """Outcome of running the formula and the exhaustive search on one diagram.

    ``status`` is one of agree, both-fail (the formula's error names the first
    stage the base search confirms), not-fibred (the total category has a
    (co)limit the projection does not preserve), oracle-only-fails or mismatch;
    the last two are genuine disagreements."""
    status: str
    result: FibredResult | None = None
    error: CategoryError | None = None
    comparison: OracleComparison | None = None
    consistent: bool = True
    detail: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status in (AGREE, BOTH_FAIL, NOT_FIBRED) and self.consistent


def classify_against_oracle(L: IndexedCat, D: DiagramPair, limit: bool = True,
                            G: GrothCat | None = None) -> OracleVerdict:
    G = G or grothendieck(L)
    try:
        res, err = (fibred_limit(L, D) if limit else fibred_colimit(L, D)), None
    except (NoBaseLimit, NoBaseColimit, NoFibreLimit, NoLeftAdjoint, NotPreserved) as e:
        res, err = None, e
    search = find_limit if limit else find_colimit
    try:
        oracle = search(total_diagram(G, D))
    except NotFound as e:
        oracle = None
        odetail = {"obstruction": e.obstruction}
    if res is not None and oracle is not None:
        try:
            return OracleVerdict(AGREE, res, comparison=compare_with_oracle(G, D, res))
        except CategoryError as e:
            return OracleVerdict(MISMATCH, res, e, consistent=False, detail=e.witness)
    if res is not None:
        return OracleVerdict(ORACLE_ONLY_FAILS, res, consistent=False, detail=odetail)
    # which stage fails according to the base search alone
    try:
        search(D.J1)
        base_ok = True
    except NotFound:
        base_ok = False
    stage = _STAGES.get(err.code)
    consistent = (stage == 0) == (not base_ok)
    if oracle is not None:
        return OracleVerdict(NOT_FIBRED, error=err, consistent=consistent,
                             detail={"code": err.code, "base_has_limit": base_ok})
    return OracleVerdict(BOTH_FAIL, error=err, consistent=consistent,
                         detail={"code": err.code, "base_has_limit": base_ok, **odetail})
