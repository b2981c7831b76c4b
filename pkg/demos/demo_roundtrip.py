"""Towers and trees are the same data, morphisms and tree maps nearly so.

tower_of_tree(tree_of_tower(x)) == x holds on the nose.  For morphisms the
round trip passes through a schedule: the induced map records where each
level's coherence witness kicks in, and extraction reads the witness table
back off the map.  Equality only holds up to levelwise equivalence, which is
the point.
"""

from towertree import (
    extract_morphism,
    gen_random_tower,
    induce_tree_map,
    morphisms_equivalent,
    random_morphism,
    tower_of_tree,
    tree_of_tower,
)

tower = gen_random_tower(42, depth=6, max_level_size=4)
back = tower_of_tree(tree_of_tower(tower))
print("tower -> tree -> tower exact:", back == tower)

src = gen_random_tower(29, depth=6, max_level_size=4)
tgt = gen_random_tower(129, depth=5, max_level_size=4)
m = random_morphism(29, src, tgt)
print("morphism phi:", m.phi)

fmap = induce_tree_map(m)
print("schedule breakpoints:", fmap.schedule.breakpoints)

recovered = extract_morphism(fmap)
print("extracted phi: ", recovered.phi)
verdict = morphisms_equivalent(recovered, m)
print("round trip verdict:", verdict.verdict)
print("witness levels:", verdict.witnesses)
