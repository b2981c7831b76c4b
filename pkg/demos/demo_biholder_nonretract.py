"""Two boundary-of-the-theory computations.

First, a certified table showing end-space metrics of the same tower pair can
fail to be bi-Hölder equivalent: for points at distance 1/2^(k+1) the
comparison d' <= C d^l eventually fails for every C and l in (0,1), and each
n_k in the table is the least integer making e^-n < (d/k)^k, certified by
interval arithmetic rather than floats.

Second, a tree whose core is not a retract: branch points approach a missing
end, distances shrink to 0, and the candidate point is not in the core.
"""

from towertree import gen_biholder, gen_example_nonretract

table = gen_biholder(16)
print("k   d=1/2^(k+1)   n_k  certified")
for row in table.rows[:6]:
    print(f"{row.k:<4}{str(row.distance):<14}{row.n:<5}{row.certified}")

print()
print("first violating k for d' <= C d^l:")
for c, l, k in table.violations:
    where = f"k = {k}" if k is not None else f"none up to {table.k_max}"
    print(f"  C={c:<4} l={l}: {where}")

print()
rep = gen_example_nonretract(count=8)
print("distances to branch points:", [str(d) for d in rep.distances])
print("infimum:", rep.infimum)
print("limit point in core:", rep.point_in_core)
