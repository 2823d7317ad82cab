"""Families of finite sets, their total category, and the trip back."""
# %%
from fibcat.fixtures import fam_arrow_wide, twin_fixture
from fibcat.fincat import discrete, validate_category
from fibcat.groth import (grothendieck, indexed_from_fibration, fibrewise_iso, split_check,
                          verify_fibration, is_cartesian)

L = fam_arrow_wide()
G = grothendieck(L)
T = G.total
print("base objects:", len(L.base.objects), " total objects:", len(T.objects),
      " total morphisms:", len(T.morphism_ids))
print("total category valid:", validate_category(T).ok)

# %%
# every chosen lift is cartesian, so the projection is a fibration
cl = verify_fibration(G.projection)
print("cartesian lifts:", all(is_cartesian(G.projection, m) for m in cl.lifts.values()))

# %%
# fibration -> indexed category; a split cleavage comes back strict
M = indexed_from_fibration(G.projection, G.canonical_cleavage())
print("split:", split_check(G.canonical_cleavage()), " strict:", M.strict)
print("fibrewise iso to the input:", fibrewise_iso(L, G, M).ok)

# %%
# a pseudo-functorial input keeps its non-identity compositors
strict, pseudo = twin_fixture(discrete(1))
Gp = grothendieck(pseudo)
print("pseudo input split:", split_check(Gp.canonical_cleavage()))
