"""Schedules, induced maps, extraction, properness, and homotopy checks."""

from fractions import Fraction

import pytest

from conftest import constant_tower

from towertree import (
    EQUIVALENT,
    ROOT,
    DepthExhausted,
    NotLevelMorphism,
    NotProper,
    Tower,
    TowerMorphism,
    TreeMap,
    TreePoint,
    XiSchedule,
    check_nonexpansive,
    compose_morphisms,
    compose_tree_maps,
    extract_morphism,
    gen_random_tower,
    homotopy_properness,
    identity_morphism,
    identity_tree_map,
    induce_tree_map,
    morphisms_equivalent,
    point_of,
    properness_witness,
    random_morphism,
    retraction_map,
    simplicial_of_level,
    surjective_core,
    tree_of_tower,
    xi_schedule,
)


def shift_map(depth, shift):
    """Hand-built map on the one-branch tree: radius r goes to r - shift."""
    tree = tree_of_tower(constant_tower(depth))
    images = {ROOT: point_of(ROOT)}
    for n in range(1, depth + 1):
        r = max(n - shift, 0)
        images[(n, "x0")] = point_of((r, "x0")) if r else point_of(ROOT)
    breakpoints = tuple(range(shift + 1, depth + 1))
    sched = XiSchedule(breakpoints, max(depth, breakpoints[-1] + 1), depth)
    return TreeMap(tree, tree, images, schedule=sched)


def test_xi_schedule_identity_on_constant_tower():
    m = identity_morphism(constant_tower(6))
    sched = xi_schedule(m)
    assert sched.breakpoints == (2, 3, 4, 5, 6)
    assert sched.virtual_top == 7
    assert [sched.breakpoint_after(n) for n in range(1, 5)] == [3, 4, 5, 6]


def test_induced_identity_shifts_by_two():
    """The induced map of an identity morphism sends F(t) to F(t-2)."""
    m = identity_morphism(constant_tower(6))
    f = induce_tree_map(m)
    for n in range(1, 7):
        img = f.image_of_vertex((n, "x0"))
        assert img.radius == max(n - 2, 0)
    assert f.image_of_vertex((1, "x0")) == point_of(ROOT)


def test_schedule_breakpoints_strictly_increase():
    for seed in range(30):
        src = gen_random_tower(seed, depth=2 + seed % 7, max_level_size=5)
        tgt = gen_random_tower(seed + 500, depth=2 + (seed + 3) % 7, max_level_size=5)
        m = random_morphism(seed, src, tgt)
        sched = xi_schedule(m)
        assert all(a < b for a, b in zip(sched.breakpoints, sched.breakpoints[1:]))
        assert sched.virtual_top > sched.breakpoints[-1]


def test_witness_bounded_by_next_breakpoint():
    # m(n) <= t_{n+1} for every induced map
    for seed in range(30):
        src = gen_random_tower(seed, depth=2 + seed % 7, max_level_size=5)
        tgt = gen_random_tower(seed + 900, depth=2 + (seed + 2) % 7, max_level_size=5)
        m = random_morphism(seed, src, tgt)
        f = induce_tree_map(m)
        prop = properness_witness(f)
        for n in range(1, prop.total_upto + 1):
            assert prop.table[n - 1] <= f.schedule.breakpoint_after(n)


def test_nonexpansive_all_induced_maps():
    for seed in range(25):
        src = gen_random_tower(seed, depth=2 + seed % 6, max_level_size=5)
        tgt = gen_random_tower(seed + 300, depth=2 + (seed + 1) % 6, max_level_size=5)
        f = induce_tree_map(random_morphism(seed, src, tgt))
        assert check_nonexpansive(f).valid


def test_nonexpansive_violation_on_stretched_edge():
    src = tree_of_tower(Tower([["a"], ["b"]], [{"b": "a"}]))
    tgt = tree_of_tower(constant_tower(3))
    bad = TreeMap(src, tgt, {
        ROOT: point_of(ROOT),
        (1, "a"): point_of((3, "x0")),
        (2, "b"): point_of((3, "x0")),
    })
    verdict = check_nonexpansive(bad)
    assert not verdict.valid
    assert verdict.violation == (ROOT, (1, "a"))


def test_properness_shift_by_two_table():
    m = identity_morphism(constant_tower(6))
    prop = properness_witness(induce_tree_map(m))
    assert prop.table == (3, 4, 5, 6)
    assert prop.total_upto == 4
    # the last level cannot be certified inside the window
    assert prop.failure_level == 5


def test_properness_identity_map():
    tree = tree_of_tower(constant_tower(5, size=2))
    prop = properness_witness(identity_tree_map(tree))
    assert prop.table == (1, 2, 3, 4, 5)
    assert prop.failure_level is None


def test_properness_fails_for_root_constant_map():
    tree = tree_of_tower(constant_tower(5))
    squash = TreeMap(tree, tree, {v: point_of(ROOT) for v in tree.vertices})
    prop = properness_witness(squash)
    assert prop.failure_level == 1
    assert prop.total_upto == 0
    with pytest.raises(NotProper):
        extract_morphism(squash)


def test_homotopy_with_self_matches_own_witness():
    for seed in (1, 4, 9):
        src = gen_random_tower(seed, depth=3 + seed % 5, max_level_size=4)
        tgt = gen_random_tower(seed + 70, depth=3 + (seed + 1) % 5, max_level_size=4)
        f = induce_tree_map(random_morphism(seed, src, tgt))
        prop = properness_witness(f)
        hp = homotopy_properness(f, f)
        assert hp.table == prop.table[: hp.total_upto]
        assert hp.failure_level is None or hp.failure_level > hp.horizon


def test_two_schedules_of_one_morphism_are_homotopic():
    """Minimal greedy schedule vs a hand-delayed one: same class."""
    m = identity_morphism(constant_tower(6))
    minimal = induce_tree_map(m)      # shift by 2
    delayed = shift_map(6, 3)         # valid schedule starting at t_1 = 4
    hp = homotopy_properness(minimal, delayed)
    assert hp.failure_level is None or hp.failure_level > hp.horizon
    assert hp.total_upto >= 1


def test_compose_identity_laws(two_branch_tower):
    tree = tree_of_tower(two_branch_tower)
    f = retraction_map(tree).map
    left = compose_tree_maps(identity_tree_map(f.target), f)
    right = compose_tree_maps(f, identity_tree_map(tree))
    assert left == f
    assert right == f


def test_shift_composed_with_shift_is_shift_by_four():
    s2 = shift_map(10, 2)
    s4 = compose_tree_maps(s2, s2)
    assert s4.image_of_vertex((10, "x0")).radius == 6
    assert s4.image_of_vertex((4, "x0")).radius == 0
    deep = TreePoint((6, "x0"), Fraction(1, 2))     # radius 11/2
    assert s4.image_of_point(deep).radius == Fraction(3, 2)


def test_extract_identity_tree_map(two_branch_tower):
    tree = tree_of_tower(two_branch_tower)
    m = extract_morphism(identity_tree_map(tree))
    assert morphisms_equivalent(m, identity_morphism(two_branch_tower)).verdict == EQUIVALENT


def test_extract_retraction_lands_on_core(two_branch_tower):
    r = retraction_map(tree_of_tower(two_branch_tower))
    m = extract_morphism(r.map)
    assert m.target == surjective_core(two_branch_tower)
    assert m.phi == (1, 3, 3)
    assert m.components == ({"a": "a"}, {"c1": "b1"}, {"c1": "c1"})


def test_extract_induce_roundtrip_on_seeds():
    exercised = 0
    for seed in range(30):
        src = gen_random_tower(seed, depth=2 + seed % 7, max_level_size=5)
        tgt = gen_random_tower(seed + 1300, depth=2 + (seed + 4) % 7, max_level_size=5)
        m = random_morphism(seed, src, tgt)
        f = induce_tree_map(m)
        try:
            back = extract_morphism(f)
        except NotProper:
            continue        # schedule ate the whole depth, nothing to compare
        assert morphisms_equivalent(back, m).verdict == EQUIVALENT
        exercised += 1
    assert exercised >= 15


def test_simplicial_of_level_identity(two_branch_tower):
    tree = tree_of_tower(two_branch_tower)
    f = simplicial_of_level(identity_morphism(two_branch_tower))
    assert f.vertex_images == identity_tree_map(tree).vertex_images


def test_simplicial_of_level_fold_preserves_radius():
    pair = Tower([["b1", "b2"]] * 4, [{"b1": "b1", "b2": "b2"}] * 3)
    single = constant_tower(4)
    fold = TowerMorphism(
        pair, single, [1, 2, 3, 4],
        [{"b1": "x0", "b2": "x0"}] * 4,
    )
    f = simplicial_of_level(fold)
    for v in f.source.vertices:
        if v == ROOT:
            continue
        assert f.image_of_vertex(v).radius == v[0]
    assert check_nonexpansive(f).valid
    hp = homotopy_properness(f, induce_tree_map(fold))
    assert hp.failure_level is None or hp.failure_level > hp.horizon


def test_simplicial_of_level_rejects_shifted_morphism(two_branch_tower):
    t = two_branch_tower
    shifted = TowerMorphism(t, t, [1, 3], [{"a": "a"}, {"c1": "b1"}])
    with pytest.raises(NotLevelMorphism):
        simplicial_of_level(shifted)


def test_composition_law_up_to_homotopy():
    # xi(g o f) and xi(g) o xi(f) agree up to proper homotopy
    checked = 0
    for seed in range(24):
        x = gen_random_tower(seed, depth=3 + seed % 5, max_level_size=4)
        y = gen_random_tower(seed + 40, depth=3 + (seed + 2) % 5, max_level_size=4)
        z = gen_random_tower(seed + 80, depth=3 + (seed + 4) % 5, max_level_size=4)
        f = random_morphism(seed, x, y)
        h = random_morphism(seed + 1, y, z)
        try:
            comp = compose_morphisms(h, f)
        except DepthExhausted:
            continue
        lhs = induce_tree_map(comp)
        rhs = compose_tree_maps(induce_tree_map(h), induce_tree_map(f))
        hp = homotopy_properness(lhs, rhs)
        assert hp.failure_level is None or hp.failure_level > hp.horizon
        checked += 1
    assert checked >= 10
