"""Towers of groups at desk scale.

Finite groups are multiplication tables (orders <= 64 in practice, plus a
cyclic constructor); windowed infinite cyclic levels stay symbolic and
never materialize a table.  Bonds are table homomorphisms, checked
exhaustively, or symbolic scalings z -> k z, checked arithmetically.

The inverse limit is enumerated as threads; its ultrametric reuses the
end-space agreement depth.  Conditions (M) and (E) are closed-world at the
truncation depth, like every other verdict in this package.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from typing import Mapping, Sequence

from .ends import AgreementDepth
from .errors import (
    DifferentTowers,
    ElementNotInLevel,
    IndexOutOfRange,
    NotLevelMorphism,
    NotML,
    ValidationError,
    WindowOverflow,
)
from .towers import (
    HOLDS,
    SolenoidOracle,
    Tower,
    TowerMorphism,
    compose_bonding,
    ml_verdict,
    natural_key,
)


class TableGroup:
    """A finite group given by its multiplication table."""

    __slots__ = ("elements", "op_table", "unit", "inverse_table")

    def __init__(self, elements: Sequence[str], op_table: Mapping[tuple[str, str], str]):
        elems = tuple(sorted(elements, key=natural_key))
        if not elems or len(set(elems)) != len(elems):
            raise ValidationError("group elements must be a nonempty set of distinct ids")
        eset = set(elems)
        for a in elems:
            for b in elems:
                c = op_table.get((a, b))
                if c not in eset:
                    raise ValidationError(f"table not closed at ({a}, {b})")
        for a in elems:
            for b in elems:
                for c in elems:
                    if op_table[(op_table[(a, b)], c)] != op_table[(a, op_table[(b, c)])]:
                        raise ValidationError(f"associativity fails at ({a}, {b}, {c})")
        unit = None
        for e in elems:
            if all(op_table[(e, a)] == a and op_table[(a, e)] == a for a in elems):
                unit = e
                break
        if unit is None:
            raise ValidationError("no two-sided unit")
        inverse = {}
        for a in elems:
            inv = [b for b in elems if op_table[(a, b)] == unit and op_table[(b, a)] == unit]
            if not inv:
                raise ValidationError(f"{a} has no inverse")
            inverse[a] = inv[0]
        self.elements = elems
        self.op_table = {k: op_table[k] for k in sorted(op_table)}
        self.unit = unit
        self.inverse_table = inverse

    @classmethod
    def cyclic(cls, m: int) -> "TableGroup":
        if m < 1:
            raise ValidationError("cyclic order must be >= 1")
        elems = [str(i) for i in range(m)]
        table = {(a, b): str((int(a) + int(b)) % m) for a in elems for b in elems}
        return cls(elems, table)

    def restricted(self, subset) -> "TableGroup":
        """The subgroup on a closed subset (closure is validated)."""
        sub = sorted(set(subset), key=natural_key)
        stray = set(sub) - set(self.elements)
        if stray:
            raise ElementNotInLevel(f"not group elements: {sorted(stray)}")
        table = {}
        for a in sub:
            for b in sub:
                c = self.op_table[(a, b)]
                if c not in set(sub):
                    raise ValidationError(f"subset not closed: {a}*{b} = {c}")
                table[(a, b)] = c
        return TableGroup(sub, table)

    def op(self, a: str, b: str) -> str:
        try:
            return self.op_table[(a, b)]
        except KeyError:
            raise ElementNotInLevel(f"({a}, {b}) not in this group") from None

    def inv(self, a: str) -> str:
        try:
            return self.inverse_table[a]
        except KeyError:
            raise ElementNotInLevel(f"{a} not in this group") from None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TableGroup)
            and self.elements == other.elements
            and self.op_table == other.op_table
        )

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self) -> str:
        return f"TableGroup(order={len(self.elements)})"


@dataclass(frozen=True)
class WindowedZ:
    """The integers in [-bound, bound], a symbolic window onto Z.

    Addition outside the window raises WindowOverflow; this is the honest
    desk-scale face of an infinite level, not a finite group.
    """

    bound: int

    def __post_init__(self):
        if self.bound < 0:
            raise ValidationError("window bound must be >= 0")

    @property
    def elements(self) -> tuple[str, ...]:
        return tuple(str(z) for z in range(-self.bound, self.bound + 1))

    @property
    def unit(self) -> str:
        return "0"

    def op(self, a: str, b: str) -> str:
        z = self._int(a) + self._int(b)
        if abs(z) > self.bound:
            raise WindowOverflow(f"{a} + {b} leaves the window [-{self.bound}, {self.bound}]")
        return str(z)

    def inv(self, a: str) -> str:
        return str(-self._int(a))

    def _int(self, a: str) -> int:
        z = int(a)
        if abs(z) > self.bound:
            raise ElementNotInLevel(f"{a} outside the window [-{self.bound}, {self.bound}]")
        return z

    def __repr__(self) -> str:
        return f"WindowedZ(bound={self.bound})"


@dataclass(frozen=True)
class TableHom:
    """A homomorphism given elementwise."""

    mapping: Mapping[str, str] = dataclass_field(hash=False)

    def apply(self, x: str) -> str:
        try:
            return self.mapping[x]
        except KeyError:
            raise ElementNotInLevel(f"{x} not in the domain of this homomorphism") from None

    def __post_init__(self):
        object.__setattr__(self, "mapping", dict(self.mapping))

    def __eq__(self, other) -> bool:
        return isinstance(other, TableHom) and self.mapping == other.mapping

    def __hash__(self):
        return hash(tuple(sorted(self.mapping.items())))


@dataclass(frozen=True)
class ScaleHom:
    """z -> k z between windowed levels; the homomorphism law is identical
    in the symbols, so only totality needs an arithmetic check."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError("scale factor must be >= 1")

    def apply(self, x: str) -> str:
        return str(self.k * int(x))


GroupBond = TableHom | ScaleHom
Group = TableGroup | WindowedZ


def _check_bond(src: Group, dst: Group, bond: GroupBond, position: int) -> None:
    if isinstance(bond, ScaleHom):
        if not isinstance(src, WindowedZ) or not isinstance(dst, WindowedZ):
            raise ValidationError(f"bond {position}: scalings need windowed levels on both sides")
        if bond.k * src.bound > dst.bound:
            raise ValidationError(
                f"bond {position}: scaling by {bond.k} leaves the target window"
            )
        return
    elems = src.elements
    dst_set = set(dst.elements)
    if set(bond.mapping) != set(elems):
        raise ValidationError(f"bond {position} is not total on its source level")
    if not set(bond.mapping.values()) <= dst_set:
        raise ValidationError(f"bond {position} leaves its target level")
    if bond.apply(src.unit) != dst.unit:
        raise ValidationError(f"bond {position} does not preserve the unit")
    for a in elems:
        for b in elems:
            try:
                lhs = bond.apply(src.op(a, b))
            except WindowOverflow:
                continue  # the sum does not exist at this window; nothing to check
            if lhs != dst.op(bond.apply(a), bond.apply(b)):
                raise ValidationError(f"bond {position} is not a homomorphism at ({a}, {b})")


class GroupTower:
    """An inverse sequence of groups with homomorphism bonds."""

    __slots__ = ("levels", "bonds")

    def __init__(self, levels: Sequence[Group], bonds: Sequence[GroupBond]):
        if not levels:
            raise ValidationError("a group tower needs at least one level")
        if len(bonds) != len(levels) - 1:
            raise ValidationError(
                f"need {len(levels) - 1} bonds for {len(levels)} levels, got {len(bonds)}"
            )
        for n, bond in enumerate(bonds, start=1):
            _check_bond(levels[n], levels[n - 1], bond, n)
        self.levels = tuple(levels)
        self.bonds = tuple(bonds)

    @property
    def depth(self) -> int:
        return len(self.levels)

    def level(self, n: int) -> Group:
        if not 1 <= n <= self.depth:
            raise IndexOutOfRange(f"level {n} not in 1..{self.depth}")
        return self.levels[n - 1]

    def bond(self, n: int) -> GroupBond:
        if not 1 <= n <= self.depth - 1:
            raise IndexOutOfRange(f"bond {n} not in 1..{self.depth - 1}")
        return self.bonds[n - 1]

    def bond_down(self, n: int, m: int, x: str) -> str:
        """Apply the composite bond from level m down to level n."""
        if not 1 <= n <= m <= self.depth:
            raise IndexOutOfRange(f"need 1 <= n <= m <= {self.depth}")
        for k in range(m - 1, n - 1, -1):
            x = self.bonds[k - 1].apply(x)
        return x

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupTower)
            and self.levels == other.levels
            and self.bonds == other.bonds
        )

    def __hash__(self):
        return hash((self.levels, self.bonds))

    def __repr__(self) -> str:
        sizes = "x".join(str(len(g.elements)) for g in self.levels)
        return f"GroupTower(depth={self.depth}, orders={sizes})"


def _minimal_period(factors: tuple[int, ...]) -> tuple[int, ...]:
    for d in range(1, len(factors) + 1):
        if all(factors[i] == factors[i % d] for i in range(len(factors))):
            return factors[:d]
    return factors


def underlying_tower(g: GroupTower) -> Tower:
    """Forget the group structure; windowed scaling towers keep their
    divisibility oracle so ML verdicts stay exact.

    The oracle extends the observed scale factors cyclically by their
    shortest period, and is attached only when every window bound agrees
    with what that pattern dictates."""
    levels = [grp.elements for grp in g.levels]
    bonds = []
    for n in range(1, g.depth):
        bond = g.bond(n)
        bonds.append({x: bond.apply(x) for x in g.level(n + 1).elements})
    oracle = None
    if all(isinstance(grp, WindowedZ) for grp in g.levels) and all(
        isinstance(b, ScaleHom) for b in g.bonds
    ):
        factors = _minimal_period(tuple(b.k for b in g.bonds) or (1,))
        candidate = SolenoidOracle(primes=factors, window=g.level(1).bound)
        if all(g.level(n).bound == candidate.level_bound(n) for n in range(1, g.depth + 1)):
            oracle = candidate
    return Tower(levels, bonds, oracle=oracle)


# ---------------------------------------------------------------------------
# Threads (the inverse limit)


@dataclass(frozen=True)
class Thread:
    """A coherent sequence through all levels: p_n(g_{n+1}) = g_n."""

    entries: tuple[str, ...]
    tower: GroupTower = dataclass_field(compare=False, repr=False, default=None)

    def at(self, n: int) -> str:
        if not 1 <= n <= len(self.entries):
            raise IndexOutOfRange(f"thread has no entry at level {n}")
        return self.entries[n - 1]


def limit_threads(g: GroupTower) -> tuple[Thread, ...]:
    """All threads.  A table thread is determined by its deepest entry; a
    windowed scaling tower consults its oracle instead, because only
    forever-divisible entries survive the untruncated tower."""
    if all(isinstance(grp, WindowedZ) for grp in g.levels) and all(
        isinstance(b, ScaleHom) for b in g.bonds
    ):
        factors = [b.k for b in g.bonds]
        if any(k > 1 for k in factors):
            zero = Thread(entries=tuple("0" for _ in range(g.depth)), tower=g)
            return (zero,)
        top = g.level(g.depth)
        return tuple(
            Thread(entries=tuple(z for _ in range(g.depth)), tower=g) for z in top.elements
        )
    threads = []
    for x in g.level(g.depth).elements:
        entries = tuple(g.bond_down(n, g.depth, x) for n in range(1, g.depth + 1))
        threads.append(Thread(entries=entries, tower=g))
    return tuple(sorted(threads, key=lambda t: tuple(natural_key(e) for e in t.entries)))


def thread_distance(a: Thread, b: Thread) -> AgreementDepth:
    if a.tower is not None and b.tower is not None and a.tower != b.tower:
        raise DifferentTowers("threads belong to different towers")
    if a.entries == b.entries:
        return AgreementDepth(None)
    t0 = 0
    for x, y in zip(a.entries, b.entries):
        if x != y:
            break
        t0 += 1
    return AgreementDepth(t0)


def thread_product(g: GroupTower, a: Thread, b: Thread) -> Thread:
    entries = tuple(g.level(n).op(a.at(n), b.at(n)) for n in range(1, g.depth + 1))
    return Thread(entries=entries, tower=g)


def thread_inverse(g: GroupTower, a: Thread) -> Thread:
    entries = tuple(g.level(n).inv(a.at(n)) for n in range(1, g.depth + 1))
    return Thread(entries=entries, tower=g)


@dataclass(frozen=True)
class IsometryVerdict:
    valid: bool
    violation: tuple[Thread, Thread, Thread] | None = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.valid


def check_translation_isometry(g: GroupTower) -> IsometryVerdict:
    """d(ka, kb) = d(a, b) and d(a^-1, b^-1) = d(a, b), exhaustively."""
    threads = limit_threads(g)
    inverses = {t.entries: thread_inverse(g, t) for t in threads}
    checked = 0
    for a in threads:
        for b in threads:
            base = thread_distance(a, b)
            if thread_distance(inverses[a.entries], inverses[b.entries]) != base:
                return IsometryVerdict(valid=False, violation=(a, a, b), checked=checked)
            for k in threads:
                checked += 1
                if thread_distance(thread_product(g, k, a), thread_product(g, k, b)) != base:
                    return IsometryVerdict(valid=False, violation=(k, a, b), checked=checked)
    return IsometryVerdict(valid=True, checked=checked)


# ---------------------------------------------------------------------------
# Level morphisms of group towers


class GroupLevelMorphism:
    """A strictly level-preserving morphism: homs f_n with q_n f_{n+1} = f_n p_n."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: GroupTower, target: GroupTower, components: Sequence[GroupBond]):
        if not components:
            raise ValidationError("a level morphism needs at least one component")
        if len(components) > min(source.depth, target.depth):
            raise ValidationError("more components than levels")
        for n, f in enumerate(components, start=1):
            _check_bond(source.level(n), target.level(n), f, n)
        for n in range(1, len(components)):
            f_n, f_n1 = components[n - 1], components[n]
            p_n, q_n = source.bond(n), target.bond(n)
            for x in source.level(n + 1).elements:
                if f_n.apply(p_n.apply(x)) != q_n.apply(f_n1.apply(x)):
                    raise NotLevelMorphism(f"square {n} does not commute at {x}")
        self.source = source
        self.target = target
        self.components = tuple(components)

    @property
    def defined_upto(self) -> int:
        return len(self.components)

    def component(self, n: int) -> GroupBond:
        if not 1 <= n <= self.defined_upto:
            raise IndexOutOfRange(f"component {n} not in 1..{self.defined_upto}")
        return self.components[n - 1]


def identity_group_morphism(g: GroupTower) -> GroupLevelMorphism:
    comps = [TableHom({x: x for x in g.level(n).elements}) for n in range(1, g.depth + 1)]
    return GroupLevelMorphism(g, g, comps)


def _kernel(src: Group, hom: GroupBond, unit: str) -> frozenset[str]:
    return frozenset(x for x in src.elements if hom.apply(x) == unit)


def _image(src: Group, hom: GroupBond) -> frozenset[str]:
    return frozenset(hom.apply(x) for x in src.elements)


@dataclass(frozen=True)
class ConditionReport:
    """Per-level witnesses for a kernel/image containment condition.

    witnesses[i] = (n, m): the least m that works for level n; a closed
    world violation stops the table."""

    kind: str  # "M" or "E"
    witnesses: tuple[tuple[int, int], ...]
    violation: int | None = None

    @property
    def holds(self) -> bool:
        return self.violation is None

    def __bool__(self) -> bool:
        return self.holds


def check_condition_M(m: GroupLevelMorphism) -> ConditionReport:
    """(M): for each n some m >= n has Ker(f_m) contained in Ker(p_{nm})."""
    horizon = m.defined_upto
    witnesses = []
    for n in range(1, horizon + 1):
        found = None
        for mm in range(n, horizon + 1):
            ker_f = _kernel(m.source.level(mm), m.component(mm), m.target.level(mm).unit)
            ker_p = frozenset(
                x for x in m.source.level(mm).elements
                if m.source.bond_down(n, mm, x) == m.source.level(n).unit
            )
            if ker_f <= ker_p:
                found = mm
                break
        if found is None:
            return ConditionReport(kind="M", witnesses=tuple(witnesses), violation=n)
        witnesses.append((n, found))
    return ConditionReport(kind="M", witnesses=tuple(witnesses))


def check_condition_E(m: GroupLevelMorphism) -> ConditionReport:
    """(E): for each n some m >= n has Im(q_{nm}) contained in Im(f_n)."""
    horizon = m.defined_upto
    witnesses = []
    for n in range(1, horizon + 1):
        im_f = _image(m.source.level(n), m.component(n))
        found = None
        for mm in range(n, m.target.depth + 1):
            im_q = frozenset(
                m.target.bond_down(n, mm, x) for x in m.target.level(mm).elements
            )
            if im_q <= im_f:
                found = mm
                break
        if found is None:
            return ConditionReport(kind="E", witnesses=tuple(witnesses), violation=n)
        witnesses.append((n, found))
    return ConditionReport(kind="E", witnesses=tuple(witnesses))


@dataclass(frozen=True)
class IsoVerdict:
    is_iso: bool
    condition_m: ConditionReport
    condition_e: ConditionReport

    def __bool__(self) -> bool:
        return self.is_iso


def is_group_tower_iso(m: GroupLevelMorphism) -> IsoVerdict:
    """Mono and epi together: (M) and (E)."""
    cm = check_condition_M(m)
    ce = check_condition_E(m)
    return IsoVerdict(is_iso=cm.holds and ce.holds, condition_m=cm, condition_e=ce)


# ---------------------------------------------------------------------------
# The ML projection lemma and the core isomorphism


def ml_projection_check(g: GroupTower) -> tuple[tuple[int, int], ...]:
    """For each n the least m with p_{nm}(G_m) = pi_n(lim G), requiring an
    ML verdict of Holds first."""
    report = ml_verdict(underlying_tower(g))
    if report.verdict != HOLDS:
        raise NotML(f"ml verdict is {report.verdict}, projection lemma needs holds")
    threads = limit_threads(g)
    out = []
    for n in range(1, g.depth + 1):
        pi_n = frozenset(t.at(n) for t in threads)
        found = None
        for m in range(n, g.depth + 1):
            image = frozenset(g.bond_down(n, m, x) for x in g.level(m).elements)
            if image == pi_n:
                found = m
                break
        if found is None:
            raise NotML(f"no projection witness at level {n} within depth")
        out.append((n, found))
    return tuple(out)


@dataclass(frozen=True)
class CoreIso:
    """The surjective-image core with the two morphisms that exhibit the
    isomorphism: a level inclusion and an index-shifting inverse."""

    core: GroupTower
    inclusion: GroupLevelMorphism
    inverse: TowerMorphism  # on underlying towers; phi(n) = projection witness


def core_iso_construction(g: GroupTower) -> CoreIso:
    projections = ml_projection_check(g)
    threads = limit_threads(g)
    core_levels: list[Group] = []
    for n in range(1, g.depth + 1):
        pi_n = sorted({t.at(n) for t in threads}, key=natural_key)
        grp = g.level(n)
        if isinstance(grp, WindowedZ):
            # ML holds, so all factors are 1 and the projection is everything
            core_levels.append(grp)
        else:
            core_levels.append(grp.restricted(pi_n))
    core_bonds: list[GroupBond] = []
    for n in range(1, g.depth):
        bond = g.bond(n)
        if isinstance(bond, ScaleHom):
            core_bonds.append(bond)
        else:
            core_bonds.append(
                TableHom({x: bond.apply(x) for x in core_levels[n].elements})
            )
    core = GroupTower(core_levels, core_bonds)
    inclusion = GroupLevelMorphism(
        core, g, [TableHom({x: x for x in core.level(n).elements}) for n in range(1, g.depth + 1)]
    )
    source_under = underlying_tower(g)
    core_under = underlying_tower(core)
    phi = [m for _, m in projections]
    comps = []
    for n in range(1, g.depth + 1):
        m = phi[n - 1]
        comps.append({x: g.bond_down(n, m, x) for x in g.level(m).elements})
    inverse = TowerMorphism(source_under, core_under, phi, comps)
    return CoreIso(core=core, inclusion=inclusion, inverse=inverse)


def as_tower_morphism(m: GroupLevelMorphism) -> TowerMorphism:
    """Forget the group structure of a level morphism."""
    src = underlying_tower(m.source)
    tgt = underlying_tower(m.target)
    comps = [
        {x: m.component(n).apply(x) for x in m.source.level(n).elements}
        for n in range(1, m.defined_upto + 1)
    ]
    return TowerMorphism(src, tgt, list(range(1, m.defined_upto + 1)), comps)
