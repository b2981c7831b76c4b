"""Group towers: threads, translation isometries, and when a morphism inverts.

The 2-adic tower Z/2 <- Z/4 <- Z/8 has eight threads and left translation by
any thread is an isometry of the whole limit, checked exhaustively.  A level
morphism is an isomorphism up to the tower relation when images stabilize
both ways (conditions on kernels and images); the surjective-core inclusion
always inverts on towers whose images stabilize.
"""

from towertree import (
    GroupTower,
    TableGroup,
    TableHom,
    as_tower_morphism,
    check_condition_E,
    check_condition_M,
    check_translation_isometry,
    compose_morphisms,
    core_iso_construction,
    identity_morphism,
    limit_threads,
    ml_projection_check,
    morphisms_equivalent,
)

z8 = GroupTower(
    [TableGroup.cyclic(2), TableGroup.cyclic(4), TableGroup.cyclic(8)],
    [
        TableHom({str(i): str(i % 2) for i in range(4)}),
        TableHom({str(i): str(i % 4) for i in range(8)}),
    ],
)
threads = limit_threads(z8)
print("threads of Z/2 <- Z/4 <- Z/8:", len(threads))
iso = check_translation_isometry(z8)
print("translation isometry:", iso.valid, f"({iso.checked} products checked)")

red = GroupTower([TableGroup.cyclic(4)] * 3,
                 [TableHom({str(i): str(i) for i in range(4)})] * 2)
tgt = GroupTower([TableGroup.cyclic(2)] * 3,
                 [TableHom({"0": "0", "1": "1"})] * 2)
from towertree import GroupLevelMorphism
reduction = GroupLevelMorphism(red, tgt, [TableHom({str(i): str(i % 2) for i in range(4)})] * 3)
print()
print("constant Z/4 -> constant Z/2 reduction:")
print("  kernel condition violated at level:", check_condition_M(reduction).violation)
print("  image condition witnesses:", check_condition_E(reduction).witnesses)

drop = GroupTower(
    [TableGroup.cyclic(2)] * 3,
    [TableHom({"0": "0", "1": "0"}), TableHom({"0": "0", "1": "1"})],
)
print()
print("drop tower image stabilization:", ml_projection_check(drop))
ci = core_iso_construction(drop)
print("core level orders:", [len(g.elements) for g in ci.core.levels])
inc = as_tower_morphism(ci.inclusion)
round_full = compose_morphisms(inc, ci.inverse)
round_core = compose_morphisms(ci.inverse, inc)
print("inclusion then inverse ~ id:",
      morphisms_equivalent(round_full, identity_morphism(round_full.source)).verdict)
print("inverse then inclusion ~ id:",
      morphisms_equivalent(round_core, identity_morphism(round_core.source)).verdict)
