"""End spaces carry an exact ultrametric; rational spaces discretize into one.

Distances between maximal branches are e^{-t} where t is the last level the
branches agree, kept as the integer exponent so comparisons stay exact.  An
arbitrary rational ultrametric snaps onto that grid with every pairwise ratio
pinned inside (1/e, 1].
"""

from fractions import Fraction

from towertree import (
    bilipschitz_bounds,
    end_space_of,
    gen_random_tower,
    rational_space,
    simplicialize,
    tree_of_tower,
    tree_of_ultrametric,
    verify_ultrametric,
)

tower = gen_random_tower(12, depth=5, max_level_size=5, surjectivity_bias=1.0)
space = end_space_of(tree_of_tower(tower))
print("ends:", len(space.points))
for x, y, k in list(space.pairs())[:5]:
    print(f"  d({x}, {y}) = e^-{k}")
print("ultrametric verified:", verify_ultrametric(space).valid)

# exact grid roundtrip: the dendrogram of the end space has the same ends
dendro, _ = tree_of_ultrametric(space)
print("dendrogram roundtrip exact:", end_space_of(dendro) == space)

rat = rational_space(
    ["a", "b", "c"],
    {("a", "b"): Fraction(3, 10), ("a", "c"): Fraction(3, 10), ("b", "c"): Fraction(1, 9)},
)
tree, corr = simplicialize(rat)
for row in corr.rows:
    print(f"  {row.x},{row.y}: {row.original} -> e^-{row.new_exponent} (certified={row.certified})")
lo, hi = bilipschitz_bounds(corr)
print(f"distortion band: {lo:.6f} .. {hi:.6f}  (must sit in (1/e, 1])")
