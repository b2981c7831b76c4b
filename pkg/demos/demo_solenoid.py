"""Dyadic solenoid at desk scale.

Windowed integer levels with doubling bonds: every level surjects onto a
strictly smaller image, so images never stabilize and the analysis certifies
the failure with a divisibility chain.  The tree keeps exactly one infinite
branch, the zero branch, and the limit has a single thread.
"""

from towertree import (
    build_report,
    gen_solenoid,
    limit_threads,
    max_geodesic_subtree,
    render_text,
    tree_of_tower,
    windowed_solenoid_tower,
)

tower = windowed_solenoid_tower([2], 1024, 11)
print("level sizes:", [len(tower.level(n)) for n in range(1, 12)])

report = build_report(tower)
print()
print(render_text(report))

chain = report.ml["witness"]["chain"]
print()
print("divisibility witness (element at level n1 extends one step, not two):")
for n1, alpha, fails_at in chain[:4]:
    print(f"  level {n1}: {alpha} reaches level {fails_at - 1}, not {fails_at}")
print(f"  ... {len(chain)} links total")

branches = max_geodesic_subtree(tree_of_tower(tower))
ids = {v[1] for v in branches.vertices if v[0] > 0}
print()
print("infinite-branch vertex ids:", ids)

group, _ = gen_solenoid([2], 1024, 11)
threads = limit_threads(group)
print("limit threads:", len(threads), "entries:", set(threads[0].entries))
