"""Tractable monoidal structures: which ones admit complements, and which do not."""
# %%
import itertools

from fibcat.concrete import FinSetCat, PSetCat
from fibcat.errors import NotTractable
from fibcat.monoidal import (cocartesian, m3, chain, poset_tractability, pset_tractable,
                             tractable_coproducts_extensive, validate_tractable)

P = PSetCat(2)
print("pointed-style partial maps:", validate_tractable(cocartesian(P), pset_tractable(P)).ok)
F = FinSetCat(2)
print("extensive coproducts:", validate_tractable(cocartesian(F),
                                                  tractable_coproducts_extensive(F)).ok)

# %%
# partial maps 2 -> 1+1 against the decomposition through the complement
maps = lambda a, b: list(itertools.product([None, *range(b)], repeat=a))
lhs = len(maps(2, 2))
rhs = sum(len(maps(sum(y is None for y in f), 1)) for f in maps(2, 1))
print(lhs, "=", rhs)

# %%
print("chain(2) tractable:", poset_tractability(chain(2)) is not None)
try:
    poset_tractability(m3())
except NotTractable as e:
    print("M3 refused:", e.witness["distributivity"])
