"""Rooted tree maps: the two functors between towers and trees.

A TreeMap stores vertex images only; each edge maps linearly onto the
geodesic between its endpoint images, so evaluation anywhere is exact.
That representation covers every map constructed here (induced maps,
simplicial level maps, retractions) because their breakpoints always land
on vertices.

Properness is witnessed by a table n -> m(n), minimal with the closed
reading: every point at radius >= m(n) has image radius >= n, checked on
vertices and on edge meets.  Verdicts at truncation are closed-world and
say so; trees flagged fringe_unbounded get the oracle's failure instead of
the window's optimism.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import (
    DepthExhausted,
    EmptyCore,
    NotLevelMorphism,
    NotProper,
    SourceTargetMismatch,
    ValidationError,
)
from .towers import TowerMorphism, is_level_morphism
from .trees import (
    ROOT,
    RootedTree,
    TreePoint,
    Vertex,
    ancestor_point_at,
    distance,
    geodesic_point,
    max_geodesic_subtree,
    meet_point,
    point_of,
    tower_of_tree,
    tree_of_tower,
)

_FAR = Fraction(1 << 62)  # larger than any radius we can meet


@dataclass(frozen=True)
class XiSchedule:
    """Greedy minimal breakpoints t_1 < t_2 < ... for the induced map.

    t_k is the least radius at which the first k+1 components cohere, so
    each t_k is certified by the stored coherence witness of the morphism.
    virtual_top closes the last segment at truncation.
    """

    breakpoints: tuple[int, ...]
    virtual_top: int
    source_depth: int

    def breakpoint_after(self, n: int) -> int:
        """t_{n+1} with the terminal segment closed by virtual_top."""
        if n < len(self.breakpoints):
            return self.breakpoints[n]
        if n == len(self.breakpoints):
            return self.virtual_top
        raise ValidationError(f"schedule has no segment {n}")


@dataclass(frozen=True)
class PropernessReport:
    """Minimal witness table m(n) for n = 1..total_upto.

    failure_level is the first target radius with no witness within the
    source depth (closed-world), None when the table is total.  margins
    measure how far below the source depth each witness sits.
    """

    table: tuple[int, ...]
    total_upto: int
    failure_level: int | None
    source_depth: int
    target_depth: int
    oracle_override: bool = False

    @property
    def margins(self) -> tuple[int, ...]:
        return tuple(self.source_depth - m for m in self.table)

    @property
    def total(self) -> bool:
        return self.failure_level is None

    def __bool__(self) -> bool:
        return self.total


@dataclass(frozen=True)
class HomotopyReport:
    """Shortest-path homotopy properness between two maps.

    The table bounds the homotopy track: every point at radius >= m(n)
    keeps its whole track at radius >= n.  The verdict only quantifies up
    to horizon = min of the two maps' own properness horizons.
    """

    table: tuple[int, ...]
    total_upto: int
    failure_level: int | None
    horizon: int

    @property
    def proper(self) -> bool:
        return self.failure_level is None or self.failure_level > self.horizon

    def __bool__(self) -> bool:
        return self.proper


class TreeMap:
    """A rooted map determined by vertex images and linear edges."""

    __slots__ = ("source", "target", "vertex_images", "schedule")

    def __init__(
        self,
        source: RootedTree,
        target: RootedTree,
        vertex_images: Mapping[Vertex, TreePoint],
        schedule: XiSchedule | None = None,
    ):
        if set(vertex_images) != set(source.vertices):
            raise ValidationError("vertex images must cover the source vertex set exactly")
        if vertex_images[ROOT] != point_of(ROOT):
            raise ValidationError("a rooted map must send root to root")
        for v, img in vertex_images.items():
            if not target.has_vertex(img.base):
                raise ValidationError(f"image of {v} is based at {img.base}, not a target vertex")
        self.source = source
        self.target = target
        self.vertex_images = dict(vertex_images)
        self.schedule = schedule

    def image_of_vertex(self, v: Vertex) -> TreePoint:
        return self.vertex_images[v]

    def image_of_point(self, p: TreePoint) -> TreePoint:
        """Evaluate the map at any point; edges map linearly onto geodesics."""
        if p.is_vertex:
            return self.vertex_images[p.base]
        a = self.vertex_images[self.source.parent_of(p.base)]
        b = self.vertex_images[p.base]
        span = distance(self.target, a, b)
        return geodesic_point(self.target, a, b, p.offset * span)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TreeMap)
            and self.source == other.source
            and self.target == other.target
            and self.vertex_images == other.vertex_images
        )

    def __hash__(self):
        return hash((self.source, self.target, tuple(sorted(self.vertex_images.items()))))

    def __repr__(self) -> str:
        return f"TreeMap({self.source!r} -> {self.target!r})"


@dataclass(frozen=True)
class NonexpansiveVerdict:
    valid: bool
    violation: tuple[Vertex, Vertex] | None = None

    def __bool__(self) -> bool:
        return self.valid


@dataclass(frozen=True)
class Retraction:
    """The nearest-point retraction onto the maximal complete subtree."""

    map: TreeMap
    properness: PropernessReport


def identity_tree_map(tree: RootedTree) -> TreeMap:
    return TreeMap(tree, tree, {v: point_of(v) for v in tree.vertices})


def check_nonexpansive(f: TreeMap) -> NonexpansiveVerdict:
    """Each unit edge must map onto a geodesic of length <= 1."""
    for child in f.source.vertices:
        if child == ROOT:
            continue
        parent = f.source.parent_of(child)
        if distance(f.target, f.vertex_images[parent], f.vertex_images[child]) > 1:
            return NonexpansiveVerdict(valid=False, violation=(parent, child))
    return NonexpansiveVerdict(valid=True)


def _meet_radius(tree: RootedTree, a: TreePoint, b: TreePoint) -> Fraction:
    return meet_point(tree, a, b).radius


def _witness_table(
    source: RootedTree,
    target_depth: int,
    vertex_quantity: Mapping[Vertex, Fraction],
    edge_quantity: Mapping[Vertex, Fraction],
) -> tuple[tuple[int, ...], int | None]:
    """Minimal m(n) with min over {vertices at radius >= m, edges with
    parent radius >= m} of the given quantities >= n; None entry stops the
    table at the first failing n."""
    depth = source.depth
    # suffix minima per level; suffix[m] covers everything at radius >= m
    suffix = [_FAR] * (depth + 2)
    for lv in range(depth, -1, -1):
        lo = suffix[lv + 1]
        for v in source.levels[lv]:
            q = vertex_quantity[v]
            if q < lo:
                lo = q
        for v in source.levels.get(lv + 1, ()):
            q = edge_quantity[v]  # edge keyed by its child; parent sits at lv
            if q < lo:
                lo = q
        suffix[lv] = lo
    table: list[int] = []
    m = 0
    for n in range(1, target_depth + 1):
        while m <= depth and suffix[m] < n:
            m += 1
        if m > depth:
            return tuple(table), n
        table.append(m)
    return tuple(table), None


def properness_witness(f: TreeMap) -> PropernessReport:
    """Minimal metric-properness witness, closed-world at truncation."""
    vq = {v: f.vertex_images[v].radius for v in f.source.vertices}
    eq = {}
    for v in f.source.vertices:
        if v == ROOT:
            continue
        p = f.source.parent_of(v)
        eq[v] = _meet_radius(f.target, f.vertex_images[p], f.vertex_images[v])
    table, failure = _witness_table(f.source, f.target.depth, vq, eq)
    return PropernessReport(
        table=table,
        total_upto=len(table),
        failure_level=failure,
        source_depth=f.source.depth,
        target_depth=f.target.depth,
    )


def homotopy_properness(f: TreeMap, g: TreeMap) -> HomotopyReport:
    """Shortest-path homotopy properness via the meet-radius criterion.

    The track of x stays at radius >= meet(f(x), g(x)); on edge interiors
    that meet is bounded below by the meets of the four endpoint images.
    """
    if f.source != g.source or f.target != g.target:
        raise SourceTargetMismatch("homotopy needs maps with shared source and target")
    track = {
        v: _meet_radius(f.target, f.vertex_images[v], g.vertex_images[v])
        for v in f.source.vertices
    }
    eq = {}
    for v in f.source.vertices:
        if v == ROOT:
            continue
        p = f.source.parent_of(v)
        eq[v] = min(
            track[p],
            track[v],
            _meet_radius(f.target, f.vertex_images[p], f.vertex_images[v]),
            _meet_radius(g.target, g.vertex_images[p], g.vertex_images[v]),
        )
    table, failure = _witness_table(f.source, f.target.depth, track, eq)
    horizon = min(properness_witness(f).total_upto, properness_witness(g).total_upto)
    return HomotopyReport(
        table=table,
        total_upto=len(table),
        failure_level=failure,
        horizon=horizon,
    )


def compose_tree_maps(g: TreeMap, f: TreeMap) -> TreeMap:
    """g after f; edges re-linearized between the composed vertex images."""
    if f.target != g.source:
        raise SourceTargetMismatch("middle trees of the composition differ")
    images = {v: g.image_of_point(p) for v, p in f.vertex_images.items()}
    return TreeMap(f.source, g.target, images)


# ---------------------------------------------------------------------------
# The functor xi: tower morphisms to tree maps


def xi_schedule(m: TowerMorphism) -> XiSchedule:
    """Greedy minimal breakpoints; t_k = max(t_{k-1}+1, witness_k)."""
    depth = m.source.depth
    if m.defined_upto == 1:
        breakpoints = [m.phi_at(1)]
    else:
        breakpoints = []
        for w in m.witnesses:
            cand = w if not breakpoints else max(breakpoints[-1] + 1, w)
            if cand > depth:
                break
            breakpoints.append(cand)
    if not breakpoints:
        raise DepthExhausted("no breakpoint fits within the source depth")
    return XiSchedule(
        breakpoints=tuple(breakpoints),
        virtual_top=max(breakpoints[-1] + 1, depth),
        source_depth=depth,
    )


def induce_tree_map(m: TowerMorphism) -> TreeMap:
    """The induced rooted map: radius t_1 and below collapses to the root,
    the segment [t_k, t_{k+1}] stretches linearly onto [k-1, k] along the
    image branch."""
    src_tree = tree_of_tower(m.source)
    tgt_tree = tree_of_tower(m.target)
    sched = xi_schedule(m)
    t = sched.breakpoints
    seg_count = len(t)
    images: dict[Vertex, TreePoint] = {ROOT: point_of(ROOT)}
    for v in src_tree.vertices:
        if v == ROOT:
            continue
        r = v[0]
        if r <= t[0]:
            images[v] = point_of(ROOT)
            continue
        k = max(i + 1 for i in range(seg_count) if t[i] <= r)
        hi = t[k] if k < seg_count else sched.virtual_top
        rho = Fraction(k - 1) + Fraction(r - t[k - 1], hi - t[k - 1])
        chain = src_tree.chain(v)
        j = int(rho) if rho == int(rho) else int(rho) + 1
        if j == 0:
            images[v] = point_of(ROOT)
            continue
        anc_id = chain[m.phi_at(j)][1]
        y_j: Vertex = (j, m.component(j)[anc_id])
        offset = rho - (j - 1)
        images[v] = point_of(y_j) if offset == 1 else TreePoint(y_j, offset)
    return TreeMap(src_tree, tgt_tree, images, schedule=sched)


# ---------------------------------------------------------------------------
# The functor eta: tree maps to tower morphisms


def extract_morphism(f: TreeMap) -> TowerMorphism:
    """Phi(n) = witness m(n); f_n(c) = the level-n ancestor of f(c).

    Well-defined because f(T_c) is connected and stays at radius >= n for
    every c at radius m(n).
    """
    rep = properness_witness(f)
    if rep.total_upto == 0:
        raise NotProper("no properness witness at any level within depth")
    src_tower = tower_of_tree(f.source)
    tgt_tower = tower_of_tree(f.target)
    comps = []
    for n in range(1, rep.total_upto + 1):
        mn = rep.table[n - 1]
        comp = {}
        for c in f.source.levels[mn]:
            anc = ancestor_point_at(f.target, f.vertex_images[c], Fraction(n))
            comp[c[1]] = anc.base[1]
        comps.append(comp)
    return TowerMorphism(src_tower, tgt_tower, list(rep.table), comps)


def simplicial_of_level(m: TowerMorphism) -> TreeMap:
    """Level morphisms induce the radius-preserving simplicial map."""
    if not is_level_morphism(m):
        raise NotLevelMorphism("needs Phi = id and strictly commuting squares")
    if m.defined_upto < m.source.depth:
        raise NotLevelMorphism(
            f"components stop at {m.defined_upto} but the source has depth {m.source.depth}"
        )
    src_tree = tree_of_tower(m.source)
    tgt_tree = tree_of_tower(m.target)
    images: dict[Vertex, TreePoint] = {ROOT: point_of(ROOT)}
    for v in src_tree.vertices:
        if v != ROOT:
            images[v] = point_of((v[0], m.component(v[0])[v[1]]))
    return TreeMap(src_tree, tgt_tree, images)


# ---------------------------------------------------------------------------
# Retraction onto the maximal geodesically complete subtree


def retraction_map(tree: RootedTree) -> Retraction:
    """Nearest-point retraction: each vertex drops to its deepest complete
    ancestor.  Trees whose oracle grows unbounded finite branches get the
    failure the window cannot exhibit."""
    core = max_geodesic_subtree(tree)
    if core.depth == 0:
        raise EmptyCore("no complete branch to retract onto")
    in_core = set(core.parent) | {ROOT}
    images: dict[Vertex, TreePoint] = {}
    for v in tree.vertices:
        w = v
        while w not in in_core:
            w = tree.parent_of(w)
        images[v] = point_of(w)
    rmap = TreeMap(tree, core, images)
    rep = properness_witness(rmap)
    if tree.fringe_unbounded:
        rep = PropernessReport(
            table=(),
            total_upto=0,
            failure_level=1,
            source_depth=rep.source_depth,
            target_depth=rep.target_depth,
            oracle_override=True,
        )
    return Retraction(map=rmap, properness=rep)
