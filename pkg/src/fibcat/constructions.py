"""Built-in constructions named by monoidal, tractable and instance documents."""
from __future__ import annotations

from dataclasses import dataclass

from .concrete import F2LinCat, FinSetCat, PSetCat
from .errors import InvalidInput
from .monoidal import (MonoidalData, TractableData, cartesian_finset, cartesian_tractable,
                       cocartesian, cocartesian_cotractable, cotractable_from_closed,
                       lattice_ops, poset_closure, poset_coproduct_tractable, poset_monoidal,
                       pset_tractable, tractable_coproducts_extensive)

_CONCRETE = {"finset": FinSetCat, "pset": PSetCat, "f2lin": F2LinCat}


@dataclass
class TractableSpec:
    name: str
    monoidal: MonoidalData     # the structure the data is validated on
    data: TractableData
    terminal: object = None    # of the carrier, when the forced-T check applies
    cotractable: bool = False
    lattice: object = None


def _lattice(body):
    if body.get("lattice") is None:
        raise InvalidInput("this construction needs a lattice block")
    from .catio import category_from_body
    return category_from_body(body["lattice"])


def build_monoidal(body) -> MonoidalData:
    c, n = body["construction"], body.get("bound") or 2
    if c == "cartesian_finset":
        return cartesian_finset(FinSetCat(n))
    if c.startswith("cocartesian_"):
        return cocartesian(_CONCRETE[c.split("_", 1)[1]](n))
    return poset_monoidal(_lattice(body), "meet" if c == "lattice_meet" else "join")


def build_tractable(body) -> TractableSpec:
    c, n = body["construction"], body.get("bound") or 2
    if c == "cartesian_finset":
        C = FinSetCat(n)
        m = cartesian_finset(C)
        return TractableSpec(c, m, cartesian_tractable(m, lambda b, d: C.product(b, d)[1:]), 1)
    if c.startswith("cocartesian_"):
        m, t = cocartesian_cotractable(_CONCRETE[c.split("_", 1)[1]](n))
        return TractableSpec(c, m, t, 0, cotractable=True)
    if c == "pset_coproducts":
        P = PSetCat(n)
        return TractableSpec(c, cocartesian(P), pset_tractable(P), 0)
    if c == "extensive_finset":
        F = FinSetCat(n)
        return TractableSpec(c, cocartesian(F), tractable_coproducts_extensive(F), 1)
    x = _lattice(body)
    _, _, bot, top = lattice_ops(x)
    if c == "closed_lattice":
        m = poset_monoidal(x, "meet")
        mo, t = cotractable_from_closed(m, poset_closure(x, m))
        return TractableSpec(c, mo, t, bot, cotractable=True, lattice=x)
    m, t = poset_coproduct_tractable(x)
    return TractableSpec(c, m, t, top, lattice=x)


def build_instance(body):
    from .dialectica import build_dial_pf, build_fam_instance
    fl, n = body["flavor"], body.get("bound") or 2
    size = body.get("size")
    if fl == "dial":
        return build_dial_pf(n)
    if fl == "closed":
        return build_fam_instance(_lattice(body), "closed", bound=n)
    cat = {"biproduct": F2LinCat, "extensive": FinSetCat, "pset": PSetCat}[fl]
    default = {"biproduct": 1, "extensive": 2, "pset": 2}[fl]
    return build_fam_instance(cat(default if size is None else size), fl, bound=n)


def build(kind, body):
    if kind == "monoidal":
        return build_monoidal(body)
    if kind == "tractable":
        return build_tractable(body)
    if kind == "instance":
        return build_instance(body)
    raise InvalidInput(f"no construction for kind {kind!r}")
