"""Brute-force universal-property searches over finite data.

Limits are found by enumerating every cone and testing terminality, which
works for any finite shape and yields factorization counts for diagnostics.
Ties go to the smallest apex, then the smallest leg tuple, in enumeration
order.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import CategoryError, NotFound
from .fincat import (Category, FinCat, FinFunctor, FinNatTrans, ValidationReport,
                     identity_functor, op)


@dataclass
class Cone:
    apex: object
    legs: dict  # shape object -> morphism (apex → J E for cones, J E → apex for cocones)
    diagram: FinFunctor
    cocone: bool = False

    def leg(self, e):
        return self.legs[e]


def _shape_gens(E: Category):
    ids = {E.identity(x) for x in E.objects}
    return [f for f in E.morphisms() if f not in ids]


def cones_at(J: FinFunctor, apex) -> list:
    """All leg tuples (ordered by shape objects) of cones over J with the given apex."""
    E, C = J.source, J.target
    eobj = list(E.objects)
    pos = {x: i for i, x in enumerate(eobj)}
    gens = _shape_gens(E)
    checks = [[] for _ in eobj]
    for f in gens:
        i, j = pos[E.dom(f)], pos[E.cod(f)]
        checks[max(i, j)].append((i, j, J.mor(f)))
    homs = [C.hom(apex, J.ob(x)) for x in eobj]
    out = []

    def go(i, legs):
        if i == len(eobj):
            out.append(tuple(legs))
            return
        for leg in homs[i]:
            legs.append(leg)
            if all(C.compose(jf, legs[a]) == legs[b] for a, b, jf in checks[i]):
                go(i + 1, legs)
            legs.pop()

    go(0, [])
    return out


def _factorizations(C, eobj, apex_to, legs_to, apex_from, legs_from, limit=2):
    found = []
    for m in C.hom(apex_from, apex_to):
        if all(C.compose(legs_to[k], m) == legs_from[k] for k in range(len(eobj))):
            found.append(m)
            if len(found) >= limit:
                break
    return found


def find_limit(J: FinFunctor) -> Cone:
    """Terminal cone over J, or NotFound carrying the obstruction."""
    E, C = J.source, J.target
    eobj = list(E.objects)
    allcones = {a: cones_at(J, a) for a in C.objects}
    obstruction = []
    for a in C.objects:
        mine = allcones[a]
        if not mine:
            continue
        # a limit apex represents cones: |C(x, a)| = #cones at x
        bad = next((x for x in C.objects if len(C.hom(x, a)) != len(allcones[x])), None)
        if bad is not None:
            obstruction.append({"apex": a, "reason": "hom-count", "object": bad,
                                "homs": len(C.hom(bad, a)), "cones": len(allcones[bad])})
            continue
        for legs in mine:
            failure = None
            for x in C.objects:
                for other in allcones[x]:
                    n = len(_factorizations(C, eobj, a, legs, x, other))
                    if n != 1:
                        failure = {"apex": a, "legs": list(legs), "cone_apex": x,
                                   "cone_legs": list(other), "factorizations": n}
                        break
                if failure:
                    break
            if failure is None:
                return Cone(a, dict(zip(eobj, legs)), J)
            obstruction.append(failure)
    if not any(allcones.values()):
        obstruction.append({"reason": "no cones"})
    raise NotFound("no limiting cone", obstruction=obstruction[:20])


def find_colimit(J: FinFunctor) -> Cone:
    c = find_limit(J.op())
    return Cone(c.apex, c.legs, J, cocone=True)


def is_limit_cone(J: FinFunctor, apex, legs: dict) -> tuple:
    """(True, None) if the given cone is terminal, else (False, witness)."""
    E, C = J.source, J.target
    eobj = list(E.objects)
    lt = tuple(legs[e] for e in eobj)
    if lt not in set(cones_at(J, apex)):
        return False, {"reason": "not a cone"}
    for x in C.objects:
        for other in cones_at(J, x):
            n = len(_factorizations(C, eobj, apex, lt, x, other))
            if n != 1:
                return False, {"cone_apex": x, "cone_legs": list(other), "factorizations": n}
    return True, None


def is_colimit_cocone(J: FinFunctor, apex, legs: dict) -> tuple:
    return is_limit_cone(J.op(), apex, legs)


def mediating(J: FinFunctor, limit: Cone, apex, legs: dict):
    """The unique morphism from a cone into a limiting cone (or out of a colimit)."""
    C = J.target
    eobj = list(J.source.objects)
    if limit.cocone:
        Cop = op(C)
        found = _factorizations(Cop, eobj, limit.apex, [limit.legs[e] for e in eobj],
                                apex, [legs[e] for e in eobj])
    else:
        found = _factorizations(C, eobj, limit.apex, [limit.legs[e] for e in eobj],
                                apex, [legs[e] for e in eobj])
    if len(found) != 1:
        raise NotFound("no unique mediating morphism", obstruction=[len(found)])
    return found[0]


def find_initial(c: Category):
    """Initial object and its witnesses {x: unique morphism}."""
    obstruction = []
    for a in c.objects:
        bad = next((x for x in c.objects if len(c.hom(a, x)) != 1), None)
        if bad is None:
            return a, {x: c.hom(a, x)[0] for x in c.objects}
        obstruction.append({"candidate": a, "object": bad, "morphisms": len(c.hom(a, bad))})
    raise NotFound("no initial object", obstruction=obstruction)


def find_terminal(c: Category):
    obstruction = []
    for a in c.objects:
        bad = next((x for x in c.objects if len(c.hom(x, a)) != 1), None)
        if bad is None:
            return a, {x: c.hom(x, a)[0] for x in c.objects}
        obstruction.append({"candidate": a, "object": bad, "morphisms": len(c.hom(bad, a))})
    raise NotFound("no terminal object", obstruction=obstruction)


# ---------------------------------------------------------------- adjoints

@dataclass
class AdjunctionWitness:
    left: FinFunctor
    right: FinFunctor
    unit: FinNatTrans
    counit: FinNatTrans

    def triangle_report(self) -> ValidationReport:
        rep = ValidationReport("adjunction triangles")
        F, G = self.left, self.right
        C, D = F.source, F.target
        for c in C.objects:
            rep.checked += 1
            if D.compose(self.counit.at(F.ob(c)), F.mor(self.unit.at(c))) != D.identity(F.ob(c)):
                rep.add("triangle-left", f"εF∘Fη ≠ id at {c}", c)
        for d in D.objects:
            rep.checked += 1
            if C.compose(G.mor(self.counit.at(d)), self.unit.at(G.ob(d))) != C.identity(G.ob(d)):
                rep.add("triangle-right", f"Gε∘ηG ≠ id at {d}", d)
        return rep


@dataclass
class Reflection:
    """Initial object (d, η) of (c ↓ G) with its transpose table."""
    obj: object
    unit: object
    transpose: dict  # (d', u: c → G d') -> unique h: obj → d'


def initial_under(G: FinFunctor, c, objects=None) -> Reflection:
    """Initial object of the comma category (c ↓ G), searched exhaustively."""
    D, C = G.source, G.target
    dobj = list(D.objects if objects is None else objects)
    need = {d: C.hom(c, G.ob(d)) for d in dobj}
    obstruction = []
    for d in dobj:
        if any(len(D.hom(d, d2)) != len(need[d2]) for d2 in dobj):
            continue
        for eta in need[d]:
            table = {}
            ok = True
            for d2 in dobj:
                for h in D.hom(d, d2):
                    u = C.compose(G.mor(h), eta)
                    if (d2, u) in table:
                        ok = False
                        break
                    table[(d2, u)] = h
                if not ok:
                    break
            if ok:
                return Reflection(d, eta, table)
            obstruction.append({"object": d, "unit": eta})
    raise NotFound(f"comma category under {c} has no initial object", obstruction=obstruction[:10],
                   at=c)


def find_left_adjoint(G: FinFunctor) -> AdjunctionWitness:
    D, C = G.source, G.target
    refl = {}
    for c in C.objects:
        try:
            refl[c] = initial_under(G, c)
        except NotFound as e:
            raise NotFound(f"no left adjoint: (c ↓ G) has no initial object at {c}",
                           obstruction=e.obstruction, at=c) from None
    Fob = {c: r.obj for c, r in refl.items()}
    Fmor = {}
    for k in C.morphisms():
        c, c2 = C.dom(k), C.cod(k)
        Fmor[k] = refl[c].transpose[(Fob[c2], C.compose(refl[c2].unit, k))]
    F = FinFunctor(C, D, Fob, Fmor, name="left adjoint")
    GF = F.then(G)
    FG = G.then(F)
    unit = FinNatTrans(identity_functor(C), GF, {c: r.unit for c, r in refl.items()})
    counit = {}
    for d in D.objects:
        gd = G.ob(d)
        counit[d] = refl[gd].transpose[(d, C.identity(gd))]
    w = AdjunctionWitness(F, G, unit, FinNatTrans(FG, identity_functor(D), counit))
    rep = w.triangle_report()
    if not rep.ok:
        raise CategoryError("triangle identities failed: " + rep.summary())
    return w


def find_right_adjoint(F: FinFunctor) -> AdjunctionWitness:
    """Right adjoint of F, via the left adjoint of F^op."""
    w = find_left_adjoint(F.op())
    H = w.left
    C, D = F.source, F.target
    R = FinFunctor(D, C, H.obj_map, H.mor_map, name="right adjoint")
    unit = FinNatTrans(identity_functor(C), F.then(R), w.counit.components)
    counit = FinNatTrans(R.then(F), identity_functor(D), w.unit.components)
    out = AdjunctionWitness(F, R, unit, counit)
    rep = out.triangle_report()
    if not rep.ok:
        raise CategoryError("triangle identities failed: " + rep.summary())
    return out


def check_bijection_natural(index, lhs, rhs, phi, actions=(), name="natural bijection") -> ValidationReport:
    """Check each phi(i, -): lhs(i) → rhs(i) is a bijection and natural.

    ``actions`` yields (i, j, act_lhs, act_rhs, label); naturality means
    phi(j, act_lhs(x)) == act_rhs(phi(i, x)) for every x in lhs(i).
    """
    rep = ValidationReport(name)
    cache = {}
    for i in index:
        L, R = list(lhs(i)), list(rhs(i))
        rset = set(R)
        imgs = {}
        if len(L) != len(R):
            rep.add("size-mismatch", f"component {i}: |lhs| = {len(L)} ≠ |rhs| = {len(R)}", i)
        for x in L:
            y = phi(i, x)
            rep.checked += 1
            if y not in rset:
                rep.add("out-of-range", f"component {i} sends {x} outside rhs", i, x)
                break
            if y in imgs:
                rep.add("not-injective", f"component {i} identifies {imgs[y]} and {x}", i, x)
                break
            imgs[y] = x
        cache[i] = L
    for act in actions:
        i, j, al, ar = act[:4]
        label = act[4] if len(act) > 4 else ""
        L = cache[i] if i in cache else list(lhs(i))
        for x in L:
            rep.checked += 1
            if phi(j, al(x)) != ar(phi(i, x)):
                rep.add("naturality", f"square {label or (i, j)} fails at {x}", i, j, x)
                break
    return rep
