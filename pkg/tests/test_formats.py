"""Text formats: towers, morphisms, distance matrices, group towers."""

import json
from fractions import Fraction

import pytest

from towertree import (
    GRID,
    RATIONAL,
    ParseError,
    ScaleHom,
    TableGroup,
    TableHom,
    GroupTower,
    WindowedZ,
    emit_distance_matrix,
    emit_group_tower,
    emit_morphism,
    emit_tower,
    gen_random_grid_space,
    gen_random_group_tower,
    gen_random_rational_space,
    gen_random_tower,
    gen_solenoid,
    grid_space,
    parse_distance_matrix,
    parse_group_tower,
    parse_morphism,
    parse_tower,
    random_morphism,
    rational_space,
    windowed_solenoid_tower,
)


def test_tower_roundtrip_extensional(two_branch_tower):
    text = emit_tower(two_branch_tower)
    data = json.loads(text)
    assert data["depth"] == 3
    assert parse_tower(text) == two_branch_tower
    for seed in range(12):
        t = gen_random_tower(seed, depth=2 + seed % 6, max_level_size=5)
        assert parse_tower(emit_tower(t)) == t


def test_tower_roundtrip_generator_form():
    t = windowed_solenoid_tower([2, 3], 50, 4)
    text = emit_tower(t)
    data = json.loads(text)
    assert data["generator"] == "solenoid"
    back = parse_tower(text)
    assert back == t
    assert back.oracle is not None


def test_parse_tower_bad_json_has_position():
    with pytest.raises(ParseError) as err:
        parse_tower("{\n  \"depth\": 2,,\n}")
    assert err.value.line == 2


def test_parse_tower_semantic_errors():
    with pytest.raises(ParseError):
        parse_tower(json.dumps({"depth": 2, "levels": [["a"]], "bonds": []}))
    with pytest.raises(ParseError):
        parse_tower(json.dumps({"levels": [["a"]]}))
    with pytest.raises(ParseError):
        parse_tower(json.dumps({"depth": 1, "levels": [["a", "a"]], "bonds": []}))
    with pytest.raises(ParseError):
        parse_tower(json.dumps({"generator": "unknown", "primes": [2], "window": 4, "depth": 2}))


def test_morphism_roundtrip(two_branch_tower):
    t = two_branch_tower
    from towertree import TowerMorphism
    m = TowerMorphism(t, t, [1, 3], [{"a": "a"}, {"c1": "b1"}])
    text = emit_morphism(m)
    assert parse_morphism(text, t, t) == m
    for seed in range(8):
        src = gen_random_tower(seed, depth=3 + seed % 5, max_level_size=4)
        tgt = gen_random_tower(seed + 55, depth=3 + (seed + 1) % 5, max_level_size=4)
        mm = random_morphism(seed, src, tgt)
        assert parse_morphism(emit_morphism(mm), src, tgt) == mm


def test_parse_morphism_rejects_mismatched_tables(two_branch_tower):
    t = two_branch_tower
    text = json.dumps({"phi": [1], "components": [{"zzz": "a"}]})
    with pytest.raises(ParseError):
        parse_morphism(text, t, t)


def test_matrix_roundtrip_grid():
    sp = grid_space(["p1", "p2", "p10"], {
        ("p1", "p2"): 2, ("p1", "p10"): 0, ("p2", "p10"): 0,
    })
    text = emit_distance_matrix(sp)
    lines = text.strip().split("\n")
    assert lines[0].split() == ["p1", "p2", "p10"]
    assert parse_distance_matrix(text) == sp
    for seed in range(10):
        rnd = gen_random_grid_space(seed, max_points=20)
        assert parse_distance_matrix(emit_distance_matrix(rnd)) == rnd


def test_matrix_roundtrip_rational():
    sp = rational_space(["a", "b"], {("a", "b"): Fraction(3, 10)})
    text = emit_distance_matrix(sp)
    assert "3/10" in text
    assert parse_distance_matrix(text) == sp
    for seed in range(10):
        rnd = gen_random_rational_space(seed, max_points=12)
        if len(rnd.points) < 2:
            continue
        assert parse_distance_matrix(emit_distance_matrix(rnd)) == rnd


def test_matrix_grid_entries_use_exponent_notation():
    sp = grid_space(["a", "b"], {("a", "b"): 3})
    assert "e-3" in emit_distance_matrix(sp)


def test_singleton_matrix_parses_as_grid():
    sp = grid_space(["only"], {})
    text = emit_distance_matrix(sp)
    back = parse_distance_matrix(text)
    assert back == sp
    assert back.mode == GRID


def test_matrix_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError):
        parse_distance_matrix("a b\n0 e-1\ne-1 1\n")     # diagonal not zero
    with pytest.raises(ParseError):
        parse_distance_matrix("a b\n0 e-1 e-2\ne-1 0\n") # ragged row
    with pytest.raises(ParseError):
        parse_distance_matrix("a b\n0 e-1\n1/2 0\n")     # asymmetric
    with pytest.raises(ParseError):
        parse_distance_matrix("a b\n0 1/2\ne-1 0\n")     # mixed modes
    with pytest.raises(ParseError):
        parse_distance_matrix("")


def test_group_tower_roundtrip_descriptors():
    g, _ = gen_solenoid([2], 64, 3)
    text = emit_group_tower(g)
    assert "windowZ:" in text and "scale:" in text
    assert parse_group_tower(text) == g

    z8 = GroupTower(
        [TableGroup.cyclic(2), TableGroup.cyclic(4)],
        [TableHom({str(i): str(i % 2) for i in range(4)})],
    )
    text2 = emit_group_tower(z8)
    assert "cyclic:" in text2
    assert parse_group_tower(text2) == z8


def test_group_tower_roundtrip_explicit_table():
    # the Klein four-group forces the explicit table path
    elems = ["e", "a", "b", "c"]
    table = {}
    for x in elems:
        for y in elems:
            if x == "e":
                table[(x, y)] = y
            elif y == "e":
                table[(x, y)] = x
            elif x == y:
                table[(x, y)] = "e"
            else:
                table[(x, y)] = next(z for z in "abc" if z not in (x, y))
    klein = TableGroup(elems, table)
    g = GroupTower([TableGroup.cyclic(2), klein],
                   [TableHom({"e": "0", "a": "1", "b": "1", "c": "0"})])
    text = emit_group_tower(g)
    assert parse_group_tower(text) == g


def test_group_tower_random_roundtrip():
    for seed in range(8):
        g = gen_random_group_tower(seed, depth=3)
        assert parse_group_tower(emit_group_tower(g)) == g


def test_parse_group_tower_rejects_bad_descriptor():
    with pytest.raises(ParseError):
        parse_group_tower(json.dumps({"levels": ["cyclic:x"], "bonds": []}))
    with pytest.raises(ParseError):
        parse_group_tower(json.dumps({"levels": ["cyclic:2", "cyclic:4"], "bonds": ["scale:2"]}))
