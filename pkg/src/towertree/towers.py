"""Inverse sequences of finite sets and the morphism calculus between them.

A tower is a finite chain  X_1 <- X_2 <- ... <- X_D  of nonempty finite
sets joined by total bonding maps p_n : X_{n+1} -> X_n.  Element ids are
opaque strings, unique within their level.

Two flavors exist.  Extensional towers are plain tables.  Generator towers
are windowed-integer towers (bonds z -> p*z) that additionally carry an
exact divisibility oracle, so extendability questions can be answered for
any target level, including levels beyond the truncation depth.  Verdicts
that depend on data beyond depth D stay three-valued: Holds needs an
observed repeat with margin, Fails needs an oracle certificate, everything
else is inconclusive at this depth.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    DepthExhausted,
    ElementNotInLevel,
    IndexOutOfRange,
    SourceTargetMismatch,
    UnsupportedMode,
    ValidationError,
)

EXTENSIONAL = "extensional"
GENERATOR = "generator"

HOLDS = "holds"
FAILS = "fails"
INCONCLUSIVE = "inconclusive_at_depth"

EQUIVALENT = "equivalent"
NOT_EQUIVALENT = "not_equivalent_closed_world"
EQUIV_INCONCLUSIVE = "inconclusive"


def natural_key(s: str):
    """Sort key that orders integer-looking ids numerically, others naturally.

    Signed integer ids (windowed levels) sort by value; mixed ids sort by
    alternating text and digit runs, so p2 comes before p10.
    """
    try:
        return ((0, int(s), ""),)
    except ValueError:
        pass
    return tuple(
        (0, int(part), "") if part.isdigit() else (1, 0, part)
        for part in re.split(r"(\d+)", s)
        if part
    )


@dataclass(frozen=True)
class SolenoidOracle:
    """Exact oracle for windowed-integer towers with bonds z -> p_n * z.

    The prime list is used cyclically, so the oracle speaks about the full
    infinite tower: answers never depend on the finite window.
    """

    primes: tuple[int, ...]
    window: int

    def __post_init__(self):
        if not self.primes or any(p < 1 for p in self.primes):
            raise ValidationError("multipliers must be integers >= 1")
        if self.window < 0:
            raise ValidationError("window bound must be >= 0")

    def multiplier(self, n: int) -> int:
        """Multiplier of the bond X_{n+1} -> X_n."""
        return self.primes[(n - 1) % len(self.primes)]

    def step_product(self, n0: int, n1: int) -> int:
        """Product of multipliers along the composite bond X_{n1} -> X_{n0}."""
        prod = 1
        for n in range(n0, n1):
            prod *= self.multiplier(n)
        return prod

    def level_bound(self, n: int) -> int:
        """Window bound of level n: integers z with |z| <= level_bound(n)."""
        return self.window // self.step_product(1, n)

    def is_extendable(self, n0: int, alpha: int, n1: int) -> bool:
        """Does some beta at level n1 map onto alpha (divisibility test)?"""
        return alpha % self.step_product(n0, n1) == 0

    def is_forever_extendable(self, alpha: int) -> bool:
        """True when alpha extends to every level of the infinite tower."""
        if all(p == 1 for p in self.primes):
            return True
        return alpha == 0

    def ml_holds(self) -> bool:
        """ML for the infinite tower: fails as soon as one multiplier exceeds 1."""
        return all(p == 1 for p in self.primes)

    def defeat(self, n0: int, n1: int) -> tuple[int, int]:
        """An element of X_{n0} extendable to n1 but not to the returned level.

        Returns (alpha, fails_at).  Exists whenever some multiplier > 1.
        """
        s = n1
        while self.multiplier(s) == 1:
            s += 1
        return self.step_product(n0, s), s + 1


@dataclass(frozen=True)
class LevelStabilization:
    """Observed image-chain data for one level: s = min m with
    p_{n m}(X_m) equal to the image from depth, margin = depth - s."""

    level: int
    stabilization: int
    margin: int


@dataclass(frozen=True)
class MLFailure:
    """Oracle certificate: at `level`, each candidate n1 in `chain` is
    defeated by an element extendable to n1 but not to `fails_at`."""

    level: int
    chain: tuple[tuple[int, int, int], ...]  # (n1, alpha, fails_at)


@dataclass(frozen=True)
class MLReport:
    verdict: str
    per_level: tuple[LevelStabilization, ...]
    witness: MLFailure | None = None

    def margin_at(self, level: int) -> int | None:
        for row in self.per_level:
            if row.level == level:
                return row.margin
        return None


class Tower:
    """A truncated inverse sequence of finite sets.

    levels[n-1] is X_n (sorted tuple of ids); bonds[n-1] maps X_{n+1} into
    X_n.  Instances are treated as immutable; equality is structural and
    includes the oracle for generator towers.
    """

    __slots__ = ("levels", "bonds", "oracle")

    def __init__(
        self,
        levels: Sequence[Iterable[str]],
        bonds: Sequence[Mapping[str, str]],
        oracle: SolenoidOracle | None = None,
    ):
        if not levels:
            raise ValidationError("a tower needs at least one level")
        norm_levels = []
        for n, level in enumerate(levels, start=1):
            ids = tuple(sorted(level, key=natural_key))
            if not ids:
                raise ValidationError(f"level {n} is empty")
            if len(set(ids)) != len(ids):
                raise ValidationError(f"level {n} has duplicate ids")
            norm_levels.append(ids)
        if len(bonds) != max(len(norm_levels) - 1, 0):
            raise ValidationError(
                f"need {max(len(norm_levels) - 1, 0)} bonds for {len(norm_levels)} levels, got {len(bonds)}"
            )
        norm_bonds = []
        for n, bond in enumerate(bonds, start=1):
            src, dst = set(norm_levels[n]), set(norm_levels[n - 1])
            if set(bond) != src:
                raise ValidationError(f"bond {n} is not total on level {n + 1}")
            stray = set(bond.values()) - dst
            if stray:
                raise ValidationError(f"bond {n} leaves level {n}: {sorted(stray)}")
            norm_bonds.append({x: bond[x] for x in sorted(bond, key=natural_key)})
        self.levels = tuple(norm_levels)
        self.bonds = tuple(norm_bonds)
        self.oracle = oracle

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def flavor(self) -> str:
        return GENERATOR if self.oracle is not None else EXTENSIONAL

    def level(self, n: int) -> tuple[str, ...]:
        if not 1 <= n <= self.depth:
            raise IndexOutOfRange(f"level {n} not in 1..{self.depth}")
        return self.levels[n - 1]

    def bond(self, n: int) -> dict[str, str]:
        """The bond X_{n+1} -> X_n."""
        if not 1 <= n <= self.depth - 1:
            raise IndexOutOfRange(f"bond {n} not in 1..{self.depth - 1}")
        return self.bonds[n - 1]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Tower)
            and self.levels == other.levels
            and self.bonds == other.bonds
            and self.oracle == other.oracle
        )

    def __hash__(self):
        return hash((self.levels, tuple(tuple(b.items()) for b in self.bonds), self.oracle))

    def __repr__(self) -> str:
        sizes = "x".join(str(len(lv)) for lv in self.levels)
        return f"Tower(depth={self.depth}, sizes={sizes}, flavor={self.flavor})"


@dataclass(frozen=True)
class BondComposite:
    """The composite bond p_{n m} : X_m -> X_n."""

    from_level: int
    to_level: int
    mapping: dict[str, str] = field(compare=True)


def windowed_solenoid_tower(primes: Sequence[int], window: int, depth: int) -> Tower:
    """Materialize the windowed-integer tower with bonds z -> p_n * z.

    Level n holds the integers whose composite image at level 1 stays in
    [-window, window]; that shrinking window is exactly what keeps every
    bond total into its target level.
    """
    if depth < 1:
        raise ValidationError("depth must be >= 1")
    oracle = SolenoidOracle(tuple(int(p) for p in primes), int(window))
    levels = []
    for n in range(1, depth + 1):
        b = oracle.level_bound(n)
        levels.append([str(z) for z in range(-b, b + 1)])
    bonds = []
    for n in range(1, depth):
        p = oracle.multiplier(n)
        bonds.append({z: str(int(z) * p) for z in levels[n]})
    return Tower(levels, bonds, oracle=oracle)


def compose_bonding(tower: Tower, n: int, m: int) -> BondComposite:
    """p_{n m} : X_m -> X_n, the identity when n == m."""
    if not 1 <= n <= m <= tower.depth:
        raise IndexOutOfRange(f"need 1 <= n <= m <= depth, got n={n}, m={m}, depth={tower.depth}")
    mapping = {x: x for x in tower.level(m)}
    for k in range(m - 1, n - 1, -1):
        bond = tower.bond(k)
        mapping = {x: bond[y] for x, y in mapping.items()}
    return BondComposite(from_level=m, to_level=n, mapping=mapping)


def is_extendable(tower: Tower, n0: int, alpha: str, n1: int) -> bool:
    """Does alpha in X_{n0} lie in the image of X_{n1}?

    Extensional towers answer by exhaustive preimage search and require
    n1 <= depth.  Generator towers answer by divisibility for any n1 >= n0.
    """
    if not 1 <= n0 <= tower.depth:
        raise IndexOutOfRange(f"level {n0} not in 1..{tower.depth}")
    if alpha not in tower.level(n0):
        raise ElementNotInLevel(f"{alpha!r} is not in level {n0}")
    if n1 < n0:
        raise IndexOutOfRange(f"target level {n1} is below {n0}")
    if tower.oracle is not None:
        return tower.oracle.is_extendable(n0, int(alpha), n1)
    if n1 > tower.depth:
        raise IndexOutOfRange(f"level {n1} beyond depth {tower.depth} needs a generator oracle")
    return alpha in set(compose_bonding(tower, n0, n1).mapping.values())


def _image_chain(tower: Tower, n0: int) -> list[set[str]]:
    """Images p_{n0 m}(X_m) for m = n0..depth."""
    return [
        set(compose_bonding(tower, n0, m).mapping.values())
        for m in range(n0, tower.depth + 1)
    ]


def ml_verdict(tower: Tower) -> MLReport:
    """Mittag-Leffler behavior of the tower, three-valued at truncation.

    Levels n0 = 1..depth-1 are checked.  Holds needs the image chain at
    every checked level to repeat its eventual value at least one step
    before depth (margin >= 1).  Fails is issued only on an oracle
    certificate from a generator tower.
    """
    depth = tower.depth
    per_level = []
    all_margins_ok = True
    for n0 in range(1, depth):
        chain = _image_chain(tower, n0)
        eventual = chain[-1]
        s = n0 + min(i for i, img in enumerate(chain) if img == eventual)
        margin = depth - s
        per_level.append(LevelStabilization(level=n0, stabilization=s, margin=margin))
        if margin < 1:
            all_margins_ok = False
    per_level = tuple(per_level)

    if tower.oracle is not None and not tower.oracle.ml_holds():
        chain_rows = []
        for n1 in range(2, depth + 1):
            alpha, fails_at = tower.oracle.defeat(1, n1)
            chain_rows.append((n1, alpha, fails_at))
        witness = MLFailure(level=1, chain=tuple(chain_rows))
        return MLReport(verdict=FAILS, per_level=per_level, witness=witness)
    if all_margins_ok:
        return MLReport(verdict=HOLDS, per_level=per_level)
    return MLReport(verdict=INCONCLUSIVE, per_level=per_level)


def surjective_core(tower: Tower) -> Tower:
    """Replace each level by the eventual image p_{n D}(X_D), restrict bonds.

    All bonds of the result are surjective; the operation is idempotent.
    """
    if tower.oracle is not None:
        raise UnsupportedMode("surjective_core works on extensional towers")
    depth = tower.depth
    new_levels = []
    for n in range(1, depth + 1):
        image = set(compose_bonding(tower, n, depth).mapping.values())
        new_levels.append(sorted(image, key=natural_key))
    new_bonds = []
    for n in range(1, depth):
        bond = tower.bond(n)
        new_bonds.append({x: bond[x] for x in new_levels[n]})
    return Tower(new_levels, new_bonds)


# ---------------------------------------------------------------------------
# Morphisms


class TowerMorphism:
    """A morphism of truncated inverse sequences.

    Data: an index function Phi (normalized to be nondecreasing by
    composing components with bonds) and components f_n : X_{Phi(n)} -> Y_n
    for n = 1..defined_upto, with a stored coherence witness for every
    consecutive pair: some m >= Phi(n), Phi(n+1) within depth where
    f_n . p_{Phi(n) m}  ==  q_n . f_{n+1} . p_{Phi(n+1) m}.
    """

    __slots__ = ("source", "target", "phi", "components", "witnesses")

    def __init__(
        self,
        source: Tower,
        target: Tower,
        phi: Sequence[int],
        components: Sequence[Mapping[str, str]],
        trim_incoherent: bool = False,
    ):
        if len(phi) != len(components) or not components:
            raise ValidationError("phi and components must have equal positive length")
        if len(components) > target.depth:
            raise ValidationError("more components than target levels")
        # normalize Phi to be nondecreasing by precomposing with bonds
        norm_phi: list[int] = []
        norm_comps: list[dict[str, str]] = []
        for i, (p, comp) in enumerate(zip(phi, components)):
            if not 1 <= p <= source.depth:
                raise ValidationError(f"phi({i + 1}) = {p} outside 1..{source.depth}")
            q = max(p, norm_phi[-1]) if norm_phi else p
            lifted = dict(comp)
            if set(lifted) != set(source.level(p)):
                raise ValidationError(f"component {i + 1} is not total on source level {p}")
            stray = set(lifted.values()) - set(target.level(i + 1))
            if stray:
                raise ValidationError(f"component {i + 1} leaves target level {i + 1}: {sorted(stray)}")
            if q != p:
                step = compose_bonding(source, p, q).mapping
                lifted = {x: lifted[step[x]] for x in source.level(q)}
            norm_phi.append(q)
            norm_comps.append({x: lifted[x] for x in sorted(lifted, key=natural_key)})

        witnesses = []
        keep = len(norm_comps)
        for n in range(1, len(norm_comps)):
            w = _coherence_witness(source, target, norm_phi, norm_comps, n)
            if w is None:
                if trim_incoherent:
                    keep = n
                    break
                raise ValidationError(f"no coherence witness within depth for levels {n}, {n + 1}")
            witnesses.append(w)
        self.source = source
        self.target = target
        self.phi = tuple(norm_phi[:keep])
        self.components = tuple(norm_comps[:keep])
        self.witnesses = tuple(witnesses[: keep - 1])

    @property
    def defined_upto(self) -> int:
        return len(self.components)

    def phi_at(self, n: int) -> int:
        if not 1 <= n <= self.defined_upto:
            raise IndexOutOfRange(f"morphism level {n} not in 1..{self.defined_upto}")
        return self.phi[n - 1]

    def component(self, n: int) -> dict[str, str]:
        if not 1 <= n <= self.defined_upto:
            raise IndexOutOfRange(f"morphism level {n} not in 1..{self.defined_upto}")
        return self.components[n - 1]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TowerMorphism)
            and self.source == other.source
            and self.target == other.target
            and self.phi == other.phi
            and self.components == other.components
        )

    def __hash__(self):
        return hash((self.source, self.target, self.phi))

    def __repr__(self) -> str:
        return f"TowerMorphism(phi={self.phi}, defined_upto={self.defined_upto})"


def _coherence_witness(
    source: Tower,
    target: Tower,
    phi: Sequence[int],
    comps: Sequence[Mapping[str, str]],
    n: int,
) -> int | None:
    """Least m with f_n . p_{Phi(n) m} == q_n . f_{n+1} . p_{Phi(n+1) m}, or None."""
    qn = target.bond(n)
    lo = max(phi[n - 1], phi[n])
    for m in range(lo, source.depth + 1):
        down_n = compose_bonding(source, phi[n - 1], m).mapping
        down_n1 = compose_bonding(source, phi[n], m).mapping
        if all(comps[n - 1][down_n[x]] == qn[comps[n][down_n1[x]]] for x in source.level(m)):
            return m
    return None


def identity_morphism(tower: Tower) -> TowerMorphism:
    phi = range(1, tower.depth + 1)
    comps = [{x: x for x in tower.level(n)} for n in phi]
    return TowerMorphism(tower, tower, list(phi), comps)


def compose_morphisms(g: TowerMorphism, f: TowerMorphism) -> TowerMorphism:
    """g after f: components h_n = g_n . f_{Psi(n)}, index map Phi_f . Phi_g.

    Truncation can cut the composite short; the longest coherent prefix is
    kept and DepthExhausted raised when not even h_1 can be formed.
    """
    if f.target != g.source:
        raise SourceTargetMismatch("middle towers of the composition differ")
    phi = []
    comps = []
    for n in range(1, g.defined_upto + 1):
        psi_n = g.phi_at(n)
        if psi_n > f.defined_upto:
            break
        phi.append(f.phi_at(psi_n))
        g_n, f_psi = g.component(n), f.component(psi_n)
        comps.append({x: g_n[f_psi[x]] for x in f.source.level(f.phi_at(psi_n))})
    if not comps:
        raise DepthExhausted("composite has no level within depth")
    return TowerMorphism(f.source, g.target, phi, comps, trim_incoherent=True)


@dataclass(frozen=True)
class EquivalenceVerdict:
    """Outcome of the witness search for f ~ g.

    Equivalent carries one witness per checked level.  Inconclusive means
    witnesses were missing only at the last checked level (data too thin at
    the horizon).  NotEquivalentClosedWorld means some earlier level fails
    even at m = depth, i.e. reading the truncation as the whole tower.
    """

    verdict: str
    witnesses: tuple[int, ...] = ()
    failing_levels: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.verdict == EQUIVALENT


def morphisms_equivalent(f: TowerMorphism, g: TowerMorphism) -> EquivalenceVerdict:
    """Search, per level, for m with f_n . p_{Phi(n) m} == g_n . p_{Psi(n) m}."""
    if f.source != g.source or f.target != g.target:
        raise SourceTargetMismatch("morphisms do not share source and target")
    source = f.source
    horizon = min(f.defined_upto, g.defined_upto)
    witnesses: list[int | None] = []
    for n in range(1, horizon + 1):
        lo = max(f.phi_at(n), g.phi_at(n))
        found = None
        for m in range(lo, source.depth + 1):
            down_f = compose_bonding(source, f.phi_at(n), m).mapping
            down_g = compose_bonding(source, g.phi_at(n), m).mapping
            fn, gn = f.component(n), g.component(n)
            if all(fn[down_f[x]] == gn[down_g[x]] for x in source.level(m)):
                found = m
                break
        witnesses.append(found)
    failing = tuple(n for n, w in enumerate(witnesses, start=1) if w is None)
    if not failing:
        return EquivalenceVerdict(EQUIVALENT, witnesses=tuple(witnesses))
    if failing == (horizon,):
        return EquivalenceVerdict(EQUIV_INCONCLUSIVE, failing_levels=failing)
    return EquivalenceVerdict(NOT_EQUIVALENT, failing_levels=failing)


@dataclass(frozen=True)
class Levelization:
    """A morphism rewritten as a strictly level-preserving one on a
    reindexed source, with the comparison isomorphisms."""

    source_reindexed: "Tower"
    target_reindexed: "Tower"
    iso_in: "TowerMorphism"
    iso_out: "TowerMorphism"
    level: "TowerMorphism"


def levelize_morphism(f: TowerMorphism) -> Levelization:
    """Reindex the source along coherence witnesses so f becomes level.

    X'_k = X_{n_k} with n_1 = Phi(1) and n_{k+1} = max(n_k + 1, witness_k);
    f'_k = f_k . p_{Phi(k) n_k} then satisfies strict squares.  A level
    morphism is returned unchanged up to those identities.
    """
    source, target = f.source, f.target
    indices = [f.phi_at(1)]
    for k in range(1, f.defined_upto):
        nxt = max(indices[-1] + 1, f.witnesses[k - 1])
        if nxt > source.depth:
            break
        indices.append(nxt)
    k_max = len(indices)
    new_levels = [source.level(n) for n in indices]
    new_bonds = [compose_bonding(source, indices[k], indices[k + 1]).mapping for k in range(k_max - 1)]
    reindexed = Tower(new_levels, new_bonds)

    level_comps = []
    for k in range(1, k_max + 1):
        down = compose_bonding(source, f.phi_at(k), indices[k - 1]).mapping
        fk = f.component(k)
        level_comps.append({x: fk[down[x]] for x in reindexed.level(k)})
    level = TowerMorphism(reindexed, target, list(range(1, k_max + 1)), level_comps)

    iso_in = TowerMorphism(
        source,
        reindexed,
        indices,
        [{x: x for x in reindexed.level(k)} for k in range(1, k_max + 1)],
    )
    iso_out = identity_morphism(target)
    return Levelization(
        source_reindexed=reindexed,
        target_reindexed=target,
        iso_in=iso_in,
        iso_out=iso_out,
        level=level,
    )


def is_level_morphism(f: TowerMorphism) -> bool:
    """Phi == id on its range and all squares commute strictly."""
    if any(f.phi_at(n) != n for n in range(1, f.defined_upto + 1)):
        return False
    for n in range(1, f.defined_upto):
        pn = f.source.bond(n)
        qn = f.target.bond(n)
        fn, fn1 = f.component(n), f.component(n + 1)
        if any(fn[pn[x]] != qn[fn1[x]] for x in f.source.level(n + 1)):
            return False
    return True
