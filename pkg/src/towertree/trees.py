"""Rooted simplicial trees with unit edges, built from towers and back.

Vertices are (level, id) pairs with the root at level 0.  Points interior
to edges carry an exact rational offset, so every distance, meet, and
geodesic computed here is an exact Fraction.

Geodesic completeness at truncation means "extendable to the deepest
level".  Trees built from generator towers additionally carry the oracle's
verdict: core_hint lists the vertices that extend forever, and
fringe_unbounded records that the untruncated tree grows arbitrarily long
finite branches (which no finite window can show).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import EmptyCore, IndexOutOfRange, ValidationError, VertexNotFound
from .towers import Tower, natural_key

Vertex = tuple[int, str]

ROOT: Vertex = (0, "root")


def _vertex_sort_key(v: Vertex):
    return (v[0], natural_key(v[1]))


class RootedTree:
    """A finite rooted tree given by its parent map.

    parent maps every non-root vertex to a vertex one level up; the root
    (0, "root") is implicit.  Instances are immutable; equality compares
    the parent map and the oracle annotations.
    """

    __slots__ = ("parent", "children", "levels", "depth", "core_hint", "fringe_unbounded")

    def __init__(
        self,
        parent: Mapping[Vertex, Vertex],
        core_hint: frozenset[Vertex] | None = None,
        fringe_unbounded: bool = False,
    ):
        children: dict[Vertex, list[Vertex]] = {ROOT: []}
        levels: dict[int, list[Vertex]] = {0: [ROOT]}
        for v, p in parent.items():
            lv, _ = v
            if lv < 1:
                raise ValidationError(f"vertex {v} below level 1 cannot have a parent entry")
            if p != ROOT and p not in parent:
                raise ValidationError(f"parent {p} of {v} is not a vertex")
            if p[0] != lv - 1:
                raise ValidationError(f"parent of {v} must sit at level {lv - 1}, got {p}")
            levels.setdefault(lv, []).append(v)
            children.setdefault(v, [])
            children.setdefault(p, []).append(v)
        for lv, vs in levels.items():
            ids = [x for _, x in vs]
            if len(set(ids)) != len(ids):
                raise ValidationError(f"duplicate vertex ids at level {lv}")
        depth = max(levels)
        if set(levels) != set(range(depth + 1)):
            raise ValidationError("levels must be contiguous from the root down")
        if core_hint is not None:
            stray = set(core_hint) - set(parent)
            if stray:
                raise ValidationError(f"core hint names unknown vertices: {sorted(stray)}")
        self.parent = dict(parent)
        self.children = {v: tuple(sorted(cs, key=_vertex_sort_key)) for v, cs in children.items()}
        self.levels = {lv: tuple(sorted(vs, key=_vertex_sort_key)) for lv, vs in levels.items()}
        self.depth = depth
        self.core_hint = core_hint
        self.fringe_unbounded = fringe_unbounded

    @property
    def vertices(self) -> tuple[Vertex, ...]:
        out: list[Vertex] = []
        for lv in range(self.depth + 1):
            out.extend(self.levels[lv])
        return tuple(out)

    def has_vertex(self, v: Vertex) -> bool:
        return v == ROOT or v in self.parent

    def parent_of(self, v: Vertex) -> Vertex:
        if v == ROOT:
            raise VertexNotFound("the root has no parent")
        try:
            return self.parent[v]
        except KeyError:
            raise VertexNotFound(f"{v} is not a vertex of this tree") from None

    def children_of(self, v: Vertex) -> tuple[Vertex, ...]:
        try:
            return self.children[v]
        except KeyError:
            raise VertexNotFound(f"{v} is not a vertex of this tree") from None

    def chain(self, v: Vertex) -> tuple[Vertex, ...]:
        """Root-to-v vertex path; chain(v)[i] sits at level i."""
        if not self.has_vertex(v):
            raise VertexNotFound(f"{v} is not a vertex of this tree")
        out = [v]
        while out[-1] != ROOT:
            out.append(self.parent[out[-1]])
        return tuple(reversed(out))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RootedTree)
            and self.parent == other.parent
            and self.core_hint == other.core_hint
            and self.fringe_unbounded == other.fringe_unbounded
        )

    def __hash__(self):
        return hash((tuple(sorted(self.parent.items())), self.core_hint, self.fringe_unbounded))

    def __repr__(self) -> str:
        return f"RootedTree(depth={self.depth}, vertices={len(self.parent) + 1})"


@dataclass(frozen=True)
class TreePoint:
    """A point of the geometric tree: offset in (0,1] down the edge into base.

    Offset 1 is the vertex base itself; the root is (ROOT, 1).  Points
    interior to an edge keep base = the deeper endpoint, so every point has
    exactly one representation.
    """

    base: Vertex
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "offset", Fraction(self.offset))
        if not 0 < self.offset <= 1:
            raise ValidationError(f"offset must lie in (0, 1], got {self.offset}")
        if self.base == ROOT and self.offset != 1:
            raise ValidationError("the root carries no edge below it")

    @property
    def radius(self) -> Fraction:
        return Fraction(self.base[0] - 1) + self.offset

    @property
    def is_vertex(self) -> bool:
        return self.offset == 1


def point_of(v: Vertex) -> TreePoint:
    return TreePoint(v, Fraction(1))


@dataclass(frozen=True)
class Branch:
    """A maximal root-based vertex path; complete iff it reaches full depth."""

    vertices: tuple[Vertex, ...]
    complete: bool
    tree: "RootedTree" = dataclass_field(compare=False, repr=False, default=None)

    @property
    def leaf(self) -> Vertex:
        return self.vertices[-1]

    def at(self, n: int) -> Vertex:
        if not 0 <= n < len(self.vertices):
            raise IndexOutOfRange(f"branch has no vertex at radius {n}")
        return self.vertices[n]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1


def tree_of_tower(tower: Tower) -> RootedTree:
    """Vertices (n, x) for x in X_n; parents follow the bonds; root below X_1."""
    parent: dict[Vertex, Vertex] = {}
    for x in tower.level(1):
        parent[(1, x)] = ROOT
    for n in range(1, tower.depth):
        bond = tower.bond(n)
        for x in tower.level(n + 1):
            parent[(n + 1, x)] = (n, bond[x])
    core_hint = None
    fringe = False
    if tower.oracle is not None:
        core_hint = frozenset(
            (n, x)
            for n in range(1, tower.depth + 1)
            for x in tower.level(n)
            if tower.oracle.is_forever_extendable(int(x))
        )
        fringe = not tower.oracle.ml_holds()
    return RootedTree(parent, core_hint=core_hint, fringe_unbounded=fringe)


def tower_of_tree(tree: RootedTree) -> Tower:
    """Levels are the spheres, bonds the parent map; inverse of tree_of_tower."""
    if tree.depth < 1:
        raise ValidationError("a tower needs at least one level of vertices")
    levels = [[x for _, x in tree.levels[n]] for n in range(1, tree.depth + 1)]
    bonds = []
    for n in range(1, tree.depth):
        bonds.append({x: tree.parent[(n + 1, x)][1] for _, x in tree.levels[n + 1]})
    return Tower(levels, bonds)


def sphere(tree: RootedTree, n: int) -> tuple[Vertex, ...]:
    if not 0 <= n <= tree.depth:
        raise IndexOutOfRange(f"sphere index {n} not in 0..{tree.depth}")
    return tree.levels[n]


def subtree_at(tree: RootedTree, c: Vertex) -> frozenset[Vertex]:
    """All descendants of c, including c itself."""
    if not tree.has_vertex(c):
        raise VertexNotFound(f"{c} is not a vertex of this tree")
    out = set()
    stack = [c]
    while stack:
        v = stack.pop()
        out.add(v)
        stack.extend(tree.children_of(v))
    return frozenset(out)


def _complete_vertices(tree: RootedTree) -> set[Vertex]:
    if tree.core_hint is not None:
        return set(tree.core_hint)
    complete: set[Vertex] = set(tree.levels.get(tree.depth, ()))
    complete.discard(ROOT)
    for lv in range(tree.depth - 1, 0, -1):
        for v in tree.levels[lv]:
            if any(c in complete for c in tree.children_of(v)):
                complete.add(v)
    return complete


def max_geodesic_subtree(tree: RootedTree) -> RootedTree:
    """The maximal subtree in which every vertex extends to full depth.

    With an oracle hint the genuine forever-extendable core is used instead
    of the depth-D proxy.
    """
    keep = _complete_vertices(tree)
    parent = {v: p for v, p in tree.parent.items() if v in keep}
    return RootedTree(parent)


def is_geodesically_complete(tree: RootedTree) -> bool:
    """Every vertex short of full depth has a child."""
    return all(
        tree.children_of(v)
        for lv in range(0, tree.depth)
        for v in tree.levels[lv]
    )


def branches(tree: RootedTree) -> tuple[Branch, ...]:
    """All maximal root-based paths, deterministically ordered by leaf."""
    out = []
    leaves = [v for v in tree.vertices if not tree.children_of(v)]
    for leaf in sorted(leaves, key=_vertex_sort_key):
        out.append(Branch(vertices=tree.chain(leaf), complete=leaf[0] == tree.depth, tree=tree))
    return tuple(out)


# ---------------------------------------------------------------------------
# Metric geometry


def _checked_point(tree: RootedTree, p: TreePoint) -> TreePoint:
    if not tree.has_vertex(p.base):
        raise VertexNotFound(f"{p.base} is not a vertex of this tree")
    return p


def meet_point(tree: RootedTree, x: TreePoint, y: TreePoint) -> TreePoint:
    """Deepest common point of the root segments [root, x] and [root, y]."""
    _checked_point(tree, x)
    _checked_point(tree, y)
    cx, cy = tree.chain(x.base), tree.chain(y.base)
    shared = 0
    for a, b in zip(cx, cy):
        if a != b:
            break
        shared += 1
    if shared == len(cx) and shared == len(cy):
        # same base edge: the shallower offset wins
        return x if x.offset <= y.offset else y
    if shared == len(cx):
        # x's base lies on y's root path, so x itself is the meet
        return x
    if shared == len(cy):
        return y
    return point_of(cx[shared - 1])


def geodesic_data(tree: RootedTree, x: TreePoint, y: TreePoint) -> tuple[TreePoint, Fraction]:
    """(meet, distance); distance = radius(x) + radius(y) - 2 radius(meet)."""
    meet = meet_point(tree, x, y)
    dist = x.radius + y.radius - 2 * meet.radius
    return meet, dist


def distance(tree: RootedTree, x: TreePoint, y: TreePoint) -> Fraction:
    return geodesic_data(tree, x, y)[1]


def ancestor_point_at(tree: RootedTree, x: TreePoint, r: Fraction) -> TreePoint:
    """The point at radius r on the segment [root, x]; needs 0 <= r <= radius(x)."""
    r = Fraction(r)
    if not 0 <= r <= x.radius:
        raise IndexOutOfRange(f"radius {r} outside [0, {x.radius}]")
    if r == 0:
        return point_of(ROOT)
    chain = tree.chain(x.base)
    whole, part = divmod(r, 1)
    whole = int(whole)
    if part == 0:
        return point_of(chain[whole])
    return TreePoint(chain[whole + 1], part)


def geodesic_point(tree: RootedTree, x: TreePoint, y: TreePoint, s: Fraction) -> TreePoint:
    """The point at arc length s from x along the geodesic [x, y]."""
    s = Fraction(s)
    meet, dist = geodesic_data(tree, x, y)
    if not 0 <= s <= dist:
        raise IndexOutOfRange(f"arc length {s} outside [0, {dist}]")
    down = x.radius - meet.radius
    if s <= down:
        return ancestor_point_at(tree, x, x.radius - s)
    return ancestor_point_at(tree, y, meet.radius + (s - down))


# ---------------------------------------------------------------------------
# DOT export


def dot_of_tree(tree: RootedTree, core: Iterable[Vertex] | None = None) -> str:
    """Graphviz text; vertex labels "level:id", core vertices bold, pruned dashed.

    Vertices of the maximal geodesically complete subtree are the core when
    none is supplied explicitly.
    """
    core_set = set(core) if core is not None else set(max_geodesic_subtree(tree).parent) | {ROOT}
    lines = ["digraph tower_tree {", "  rankdir=TB;", '  node [shape=ellipse];']
    for v in tree.vertices:
        label = f"{v[0]}:{v[1]}"
        style = "bold" if v in core_set or v == ROOT else "dashed"
        lines.append(f'  "{label}" [style={style}];')
    for v in tree.vertices:
        if v == ROOT:
            continue
        p = tree.parent[v]
        lines.append(f'  "{p[0]}:{p[1]}" -> "{v[0]}:{v[1]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
