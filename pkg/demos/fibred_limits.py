"""Fibred limits and colimits checked against brute-force search in the total category."""
# %%
import random
from collections import Counter

from fibcat.fibcolim import (check_extensive, classify_against_oracle, coequalizer_via_mates,
                             parallel_diagram, compare_coequalizers, fibred_colimit)
from fibcat.fincat import discrete, parallel_pair
from fibcat.fixtures import fam_arrow_wide, random_diagrams, random_indexed, representable_two
from fibcat.groth import grothendieck

tally = Counter()
for seed in range(8):
    L = random_indexed(seed)
    G = grothendieck(L)
    rng = random.Random(seed)
    for shape in (discrete(0), discrete(2), parallel_pair()):
        for D in random_diagrams(L, shape, rng, limit=2):
            for limit in (True, False):
                tally[classify_against_oracle(L, D, limit, G).status] += 1
print(dict(tally))

# %%
# coequalizers through mates of the reindexing adjunction
L = fam_arrow_wide()
B = L.base
two = next(o for o in B.objects if B.obj_label[o] == 2)
idf = B.identity(two)
swap = next(m for m in B.hom(two, two) if B.mor_label[m].img == (1, 0))
F2 = L.fibre(two)
b = F2.objects[0]
a = L.re(idf, b)
D = parallel_diagram(L, idf, F2.identity(a), swap, F2.hom(a, L.re(swap, b))[0], b)
r = coequalizer_via_mates(L, D)
print("coequalizer of id and swap lives over a set of size", B.obj_label[r.apex[0]])
print("iso to the fibred colimit:", compare_coequalizers(grothendieck(L), D, r,
                                                         fibred_colimit(L, D)) is not None)

# %%
for name, L in (("families", fam_arrow_wide()), ("representables", representable_two())):
    print(name, "on parallel pairs:", check_extensive(L, parallel_pair()).verdict)
