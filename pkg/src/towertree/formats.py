"""Text formats for the desk artifacts.

Towers and morphisms travel as JSON; distance matrices as a square text
block with exact entries ("p/q" rationals, "e-k" exponents).  Everything
round-trips: parse(emit(x)) == x.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .ends import GRID, RATIONAL, UltrametricSpace, _pair_key, grid_space, rational_space
from .errors import ParseError, TowerTreeError
from .groups import GroupTower, ScaleHom, TableGroup, TableHom, WindowedZ
from .towers import Tower, TowerMorphism, windowed_solenoid_tower


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno, column=e.colno) from None


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ParseError(message)


# ---------------------------------------------------------------------------
# Towers


def parse_tower(text: str) -> Tower:
    """Accepts the explicit form {depth, levels, bonds} and the generator
    form {generator: "solenoid", primes, window, depth}."""
    data = _load_json(text)
    _require(isinstance(data, dict), "tower file must hold a JSON object")
    if "generator" in data:
        _require(data["generator"] == "solenoid", f"unknown generator {data['generator']!r}")
        for key in ("primes", "window", "depth"):
            _require(key in data, f"solenoid generator needs {key!r}")
        primes = data["primes"]
        _require(
            isinstance(primes, list) and primes and all(isinstance(p, int) for p in primes),
            "primes must be a nonempty list of integers",
        )
        _require(isinstance(data["window"], int), "window must be an integer")
        _require(isinstance(data["depth"], int), "depth must be an integer")
        try:
            return windowed_solenoid_tower(primes, data["window"], data["depth"])
        except TowerTreeError as e:
            raise ParseError(str(e)) from None
    for key in ("depth", "levels", "bonds"):
        _require(key in data, f"tower object needs {key!r}")
    levels, bonds = data["levels"], data["bonds"]
    _require(isinstance(levels, list), "levels must be a list of lists")
    _require(isinstance(bonds, list), "bonds must be a list of objects")
    _require(data["depth"] == len(levels), "depth does not match the level count")
    _require(len(bonds) == max(len(levels) - 1, 0), "bond count must be depth - 1")
    for i, level in enumerate(levels, start=1):
        _require(
            isinstance(level, list) and all(isinstance(x, str) for x in level),
            f"level {i} must be a list of strings",
        )
    for i, bond in enumerate(bonds, start=1):
        _require(
            isinstance(bond, dict)
            and all(isinstance(k, str) and isinstance(v, str) for k, v in bond.items()),
            f"bond {i} must map strings to strings",
        )
    try:
        return Tower(levels, bonds)
    except TowerTreeError as e:
        raise ParseError(str(e)) from None


def emit_tower(t: Tower) -> str:
    if t.oracle is not None:
        data = {
            "generator": "solenoid",
            "primes": list(t.oracle.primes),
            "window": t.oracle.window,
            "depth": t.depth,
        }
    else:
        data = {
            "depth": t.depth,
            "levels": [list(level) for level in t.levels],
            "bonds": [dict(bond) for bond in t.bonds],
        }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Morphisms (towers supplied out of band; the file stores phi + components)


def parse_morphism(text: str, source: Tower, target: Tower) -> TowerMorphism:
    data = _load_json(text)
    _require(isinstance(data, dict), "morphism file must hold a JSON object")
    for key in ("phi", "components"):
        _require(key in data, f"morphism object needs {key!r}")
    phi, comps = data["phi"], data["components"]
    _require(
        isinstance(phi, list) and all(isinstance(n, int) for n in phi),
        "phi must be a list of integers",
    )
    _require(
        isinstance(comps, list) and all(isinstance(c, dict) for c in comps),
        "components must be a list of objects",
    )
    _require(len(phi) == len(comps), "phi and components must have equal length")
    try:
        return TowerMorphism(source, target, phi, comps)
    except TowerTreeError as e:
        raise ParseError(str(e)) from None


def emit_morphism(m: TowerMorphism) -> str:
    data = {
        "phi": [m.phi_at(n) for n in range(1, m.defined_upto + 1)],
        "components": [dict(m.component(n)) for n in range(1, m.defined_upto + 1)],
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Distance matrices


def _emit_entry(value, mode: str) -> str:
    if mode == GRID:
        return f"e-{value}"
    return str(Fraction(value))


def emit_distance_matrix(space: UltrametricSpace) -> str:
    for p in space.points:
        if any(ch.isspace() for ch in p):
            raise ParseError(f"point id {p!r} cannot carry whitespace in matrix form")
    lines = [" ".join(space.points)]
    for x in space.points:
        row = []
        for y in space.points:
            if x == y:
                row.append("0")
            else:
                row.append(_emit_entry(space.table[_pair_key(x, y)], space.mode))
        lines.append(" ".join(row))
    return "\n".join(lines) + "\n"


def _parse_entry(token: str, lineno: int) -> tuple[str, int | Fraction]:
    if token.startswith("e-"):
        tail = token[2:]
        if not tail.isdigit():
            raise ParseError(f"bad exponent entry {token!r}", line=lineno)
        return GRID, int(tail)
    try:
        return RATIONAL, Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad distance entry {token!r}", line=lineno) from None


def parse_distance_matrix(text: str) -> UltrametricSpace:
    rows = [
        (i, line.split()) for i, line in enumerate(text.splitlines(), start=1) if line.strip()
    ]
    _require(bool(rows), "matrix text is empty")
    header_line, points = rows[0]
    _require(len(set(points)) == len(points), "duplicate ids in matrix header")
    body = rows[1:]
    if len(body) != len(points):
        raise ParseError(
            f"expected {len(points)} rows after the header, found {len(body)}", line=header_line
        )
    entries: dict[tuple[str, str], int | Fraction] = {}
    modes = set()
    for (lineno, tokens), x in zip(body, points):
        if len(tokens) != len(points):
            raise ParseError(f"row has {len(tokens)} entries, expected {len(points)}", line=lineno)
        for token, y in zip(tokens, points):
            if x == y:
                if token != "0":
                    raise ParseError(f"diagonal entry must be 0, found {token!r}", line=lineno)
                continue
            mode, value = _parse_entry(token, lineno)
            modes.add(mode)
            entries[(x, y)] = value
    if len(points) < 2:
        # a singleton matrix has no off-diagonal entry to reveal its mode
        return grid_space(points, {})
    if len(modes) != 1:
        raise ParseError("matrix mixes exponent and rational entries")
    mode = modes.pop()
    try:
        if mode == GRID:
            return grid_space(points, entries)
        return rational_space(points, entries)
    except TowerTreeError as e:
        raise ParseError(str(e)) from None


# ---------------------------------------------------------------------------
# Group towers


def _emit_group(g: TableGroup | WindowedZ):
    if isinstance(g, WindowedZ):
        return f"windowZ:{g.bound}"
    cyclic = _cyclic_order(g)
    if cyclic is not None:
        return f"cyclic:{cyclic}"
    return {
        "elements": list(g.elements),
        "table": {a: {b: g.op(a, b) for b in g.elements} for a in g.elements},
    }


def _cyclic_order(g: TableGroup) -> int | None:
    m = len(g.elements)
    if tuple(str(i) for i in range(m)) != g.elements:
        return None
    for a in g.elements:
        for b in g.elements:
            if g.op(a, b) != str((int(a) + int(b)) % m):
                return None
    return m


def emit_group_tower(g: GroupTower) -> str:
    bonds = []
    for bond in g.bonds:
        if isinstance(bond, ScaleHom):
            bonds.append(f"scale:{bond.k}")
        else:
            bonds.append(dict(bond.mapping))
    data = {"levels": [_emit_group(level) for level in g.levels], "bonds": bonds}
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _parse_group(item, position: int) -> TableGroup | WindowedZ:
    if isinstance(item, str):
        kind, _, arg = item.partition(":")
        _require(arg.isdigit(), f"level {position}: bad descriptor {item!r}")
        try:
            if kind == "cyclic":
                return TableGroup.cyclic(int(arg))
            if kind == "windowZ":
                return WindowedZ(int(arg))
        except TowerTreeError as e:
            raise ParseError(f"level {position}: {e}") from None
        raise ParseError(f"level {position}: unknown kind {kind!r}")
    _require(isinstance(item, dict), f"level {position} must be a descriptor or an object")
    for key in ("elements", "table"):
        _require(key in item, f"level {position} needs {key!r}")
    table = {}
    for a, row in item["table"].items():
        _require(isinstance(row, dict), f"level {position}: table rows must be objects")
        for b, c in row.items():
            table[(a, b)] = c
    try:
        return TableGroup(item["elements"], table)
    except TowerTreeError as e:
        raise ParseError(f"level {position}: {e}") from None


def parse_group_tower(text: str) -> GroupTower:
    data = _load_json(text)
    _require(isinstance(data, dict), "group tower file must hold a JSON object")
    for key in ("levels", "bonds"):
        _require(key in data, f"group tower object needs {key!r}")
    _require(isinstance(data["levels"], list), "levels must be a list")
    _require(isinstance(data["bonds"], list), "bonds must be a list")
    levels = [_parse_group(item, i) for i, item in enumerate(data["levels"], start=1)]
    bonds = []
    for i, item in enumerate(data["bonds"], start=1):
        if isinstance(item, str):
            kind, _, arg = item.partition(":")
            _require(kind == "scale" and arg.isdigit(), f"bond {i}: bad descriptor {item!r}")
            bonds.append(ScaleHom(int(arg)))
        else:
            _require(isinstance(item, dict), f"bond {i} must be a descriptor or an object")
            bonds.append(TableHom(item))
    try:
        return GroupTower(levels, bonds)
    except TowerTreeError as e:
        raise ParseError(str(e)) from None
