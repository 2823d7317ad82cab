"""The Dialectica category of finite sets is closed; so are some of its Fam cousins."""
# %%
from fibcat.concrete import F2LinCat, FinSetCat
from fibcat.dialectica import (build_dial_pf, build_fam_instance, dial_obj, dialectica_hom,
                               fam_objects, fibredness_check, verify_closure)
from fibcat.monoidal import chain

dial = build_dial_pf(2)
X = Y = dial_obj(2, 2)
asm = dialectica_hom(dial, X, Y)
print("internal hom:", asm.obj[0], "points, fibres of size", set(asm.obj[1]))
print("maps from the unit:", len(dial.total.hom(dial_obj(1, 1), asm.obj)),
      " maps X -> Y:", len(dial.total.hom(X, Y)))

# %%
r = verify_closure(dial, dial_obj(1, 2), dial_obj(2, 1), dial_obj(2, 2))
print("hom(X⊗W, Y) vs hom(W, X⊸Y):", r.lhs, r.rhs, r.ok)

# %%
for flavour, D in (("closed", chain(2)), ("biproduct", F2LinCat(1)), ("extensive", FinSetCat(2))):
    inst = build_fam_instance(D, flavour)
    rep = fibredness_check(inst)
    print(flavour, "fibred:", rep.ok, "" if rep.ok else rep.violations[0].message)
