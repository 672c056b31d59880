"""Directed groups of rooted-tree automorphisms and validated group specs.

A saturated directed group Γ(S, HF) is described by:

1. A bounded, eventually periodic valency sequence d_0, d_1, ... (ValencySeq)
2. A rooted group S_{d_l} acting on the children of every level-l vertex
3. A finite directed group H fixing the spine 0^∞ (three models below)
4. A finite boundary group F labelling the spine
5. An optional relative-saturation sequence c_l (CSeq), 1 <= c_l <= d_l - 1

Directed elements are never materialized as infinite portraits. An element
is a tuple of finite components; the model maps a component to its level
entry, the wreath coordinates at the spine vertex of level l:

    h = (h', s_1, ..., s_{d_l - 1}) ρ      ρ fixes child 0

with h' the continuation of h at level l + 1 and s_u the rooted section at
child u. Only the first c_l sections may be nontrivial.

Models:
    diagonal  One copy of the rooted group per distinct next-level valency,
              acting diagonally on all c_l section positions.
    mother    One full level group per level type (d_l, d_{l+1}, c_l): any
              c_l sections, plus root permutations when c_l = d_l - 1.
    portrait  The finite group generated by explicitly listed periodic
              portraits (for example D∞'s h = (h, s)).

Architecture Note:
    All three models share one encoding: components are indexed by keys,
    and key_of(l) says which component drives level l. Multiplication is
    componentwise because the level entry of a product only depends on the
    level entries of the factors. This keeps H finite and hashable, which is
    what the word problem and the exact convolution rely on.

See Also:
    - words.py for alternate words and the rewriting process
    - config.py for the JSON schema feeding build_group
"""

from __future__ import annotations

import itertools
import logging
import math
from abc import ABC, abstractmethod
from collections import deque
from collections.abc import Hashable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any, Generic, Protocol, TypeVar

import numpy as np

from . import perms
from .config import validate_config
from .const import (
    CONF_C_SEQ,
    CONF_F_GROUP,
    CONF_GENERATORS,
    CONF_H_MODEL,
    CONF_KIND,
    CONF_NAME,
    CONF_PATTERN,
    CONF_PREFIX,
    CONF_ROOT,
    CONF_ROOTED_GROUPS,
    CONF_SATURATED,
    CONF_SECTIONS,
    CONF_SIZE,
    CONF_STRUCTURE,
    CONF_VALENCY,
    DEFAULT_ENUMERATION_CAP,
    MAX_VALENCY,
    MIN_VALENCY,
    ROOTED_SYMMETRIC,
    SATURATION_ENUMERATION_CAP,
    FStructure,
    HModelKind,
)
from .exceptions import InvalidRayError, InvalidVertexError, SpecValidationError
from .finite_groups import FElem, FGroup, RootedGroup
from .perms import Perm

_LOGGER = logging.getLogger(__name__)

T = TypeVar("T")

# A directed element: one finite component per model key
DirectedElem = tuple[Hashable, ...]
# A directed-times-boundary letter (h, f)
HFElem = tuple[DirectedElem, FElem]


# ============================================================================
# LEVEL SEQUENCES
# ============================================================================


@dataclass(frozen=True)
class PeriodicSeq(Generic[T]):
    """An eventually periodic sequence: prefix, then pattern repeated forever.

    Attributes:
        prefix: Values at levels 0..len(prefix)-1
        pattern: Repeating block, non-empty
    """

    prefix: tuple[T, ...]
    pattern: tuple[T, ...]

    def __post_init__(self) -> None:
        if not self.pattern:
            raise SpecValidationError("Periodic sequence needs a non-empty pattern")

    @property
    def start(self) -> int:
        return len(self.prefix)

    @property
    def period(self) -> int:
        return len(self.pattern)

    def at(self, level: int) -> T:
        if level < 0:
            raise ValueError(f"Level must be >= 0, got {level}")
        if level < self.start:
            return self.prefix[level]
        return self.pattern[(level - self.start) % self.period]

    def values(self, count: int) -> tuple[T, ...]:
        return tuple(self.at(i) for i in range(count))

    def distinct(self) -> tuple[T, ...]:
        seen: dict[T, None] = {}
        for v in self.prefix + self.pattern:
            seen.setdefault(v, None)
        return tuple(seen)

    def shift(self, level: int) -> PeriodicSeq[T]:
        """Drop the first ``level`` values."""
        if level < self.start:
            return type(self)(self.prefix[level:], self.pattern)
        r = (level - self.start) % self.period
        return type(self)((), self.pattern[r:] + self.pattern[:r])

    def normalized(self) -> PeriodicSeq[T]:
        """Reduce the pattern to its primitive root and absorb the prefix tail."""
        pattern = self.pattern
        for r in range(1, len(pattern) + 1):
            if len(pattern) % r == 0 and pattern[:r] * (len(pattern) // r) == pattern:
                pattern = pattern[:r]
                break
        prefix = self.prefix
        while prefix and prefix[-1] == pattern[-1]:
            prefix = prefix[:-1]
            pattern = (pattern[-1],) + pattern[:-1]
        return type(self)(prefix, pattern)


@dataclass(frozen=True)
class ValencySeq(PeriodicSeq[int]):
    """Bounded valency sequence d_l."""

    def __post_init__(self) -> None:
        super().__post_init__()
        for d in self.prefix + self.pattern:
            if not MIN_VALENCY <= d <= MAX_VALENCY:
                raise SpecValidationError(
                    f"Valency {d} outside [{MIN_VALENCY}, {MAX_VALENCY}]"
                )

    @property
    def d_min(self) -> int:
        return min(self.prefix + self.pattern)

    @property
    def d_max(self) -> int:
        return max(self.prefix + self.pattern)

    @classmethod
    def constant(cls, d: int) -> ValencySeq:
        return cls((), (d,))


@dataclass(frozen=True)
class CSeq(PeriodicSeq[int]):
    """Relative saturation sequence c_l, 1 <= c_l <= d_l - 1."""

    @classmethod
    def full(cls, valency: ValencySeq) -> CSeq:
        """The basic case c_l = d_l - 1."""
        return cls(
            tuple(d - 1 for d in valency.prefix), tuple(d - 1 for d in valency.pattern)
        )


@dataclass(frozen=True)
class LevelClasses:
    """Level l and level l' behave identically when their classes agree."""

    start: int
    period: int

    @classmethod
    def combine(cls, seqs: Sequence[PeriodicSeq[Any]]) -> LevelClasses:
        start = max(s.start for s in seqs)
        period = math.lcm(*(s.period for s in seqs))
        return cls(start, period)

    def of(self, level: int) -> int:
        if level < self.start:
            return level
        return self.start + (level - self.start) % self.period

    @property
    def count(self) -> int:
        return self.start + self.period


# ============================================================================
# LEVEL ENTRIES
# ============================================================================


@dataclass(frozen=True, order=True)
class LevelEntry:
    """Wreath coordinates of a directed element at one spine vertex.

    Attributes:
        sections: Rooted sections at children 1..d-1 (perms of degree d_{l+1})
        root: Root permutation of degree d_l, fixing child 0
    """

    sections: tuple[Perm, ...]
    root: Perm

    @classmethod
    def identity(cls, d: int, d_next: int) -> LevelEntry:
        ident = perms.identity(d_next)
        return cls(tuple(ident for _ in range(d - 1)), perms.identity(d))

    def mul(self, other: LevelEntry) -> LevelEntry:
        """Product self·other: sections g_u f_{ρ_g(u)}, root ρ_g ρ_f."""
        sections = tuple(
            perms.compose(sec, other.sections[self.root[u + 1] - 1])
            for u, sec in enumerate(self.sections)
        )
        return LevelEntry(sections, perms.compose(self.root, other.root))

    def inverse(self) -> LevelEntry:
        root_inv = perms.inverse(self.root)
        sections = tuple(
            perms.inverse(self.sections[root_inv[u + 1] - 1])
            for u in range(len(self.sections))
        )
        return LevelEntry(sections, root_inv)

    def is_identity(self) -> bool:
        return perms.is_identity(self.root) and all(
            perms.is_identity(s) for s in self.sections
        )

    def sections_trivial(self) -> bool:
        return all(perms.is_identity(s) for s in self.sections)


# ============================================================================
# DIRECTED GROUP MODELS
# ============================================================================


class DirectedGroup(ABC):
    """Finite directed group H, encoded as tuples of components.

    Subclasses decide the keys, what a component is and how it maps to a
    level entry. Everything else (products, restriction to H_l, extension
    by one level, enumeration) is shared.
    """

    kind: HModelKind

    def __init__(
        self,
        valency: ValencySeq,
        c_seq: CSeq,
        rooted: Mapping[int, RootedGroup],
        classes: LevelClasses,
    ) -> None:
        self.valency = valency
        self.c_seq = c_seq
        self.rooted = dict(rooted)
        self.classes = classes
        self.keys: tuple[Hashable, ...] = tuple(
            dict.fromkeys(self.key_of(r) for r in range(classes.count))
        )
        self._key_pos = {k: i for i, k in enumerate(self.keys)}
        self._used: dict[int, frozenset[int]] = {}
        self._entry_cache: dict[tuple[int, Hashable], LevelEntry] = {}
        self._identity = tuple(self.comp_identity(k) for k in self.keys)

    # --- per-model hooks -------------------------------------------------

    @abstractmethod
    def key_of(self, level: int) -> Hashable:
        """Key of the component that drives level ``level``."""

    @abstractmethod
    def comp_identity(self, key: Hashable) -> Hashable: ...

    @abstractmethod
    def comp_mul(self, key: Hashable, a: Any, b: Any) -> Hashable: ...

    @abstractmethod
    def comp_inv(self, key: Hashable, a: Any) -> Hashable: ...

    @abstractmethod
    def comp_entry(self, key: Hashable, comp: Any, level: int) -> LevelEntry:
        """Level entry of a component at a level with this key."""

    @abstractmethod
    def comp_from_entry(
        self, key: Hashable, entry: LevelEntry, level: int
    ) -> Hashable | None:
        """Inverse of comp_entry, or None when no component has that entry."""

    @abstractmethod
    def elements(self) -> tuple[DirectedElem, ...]:
        """All elements of H."""

    @property
    @abstractmethod
    def order(self) -> int: ...

    @abstractmethod
    def random(self, rng: np.random.Generator) -> DirectedElem:
        """Uniform element of H."""

    # --- shared machinery -----------------------------------------------

    def key_index(self, level: int) -> int:
        return self._key_pos[self.key_of(self.classes.of(level))]

    def identity(self) -> DirectedElem:
        return self._identity

    def mul(self, a: DirectedElem, b: DirectedElem) -> DirectedElem:
        return tuple(self.comp_mul(k, x, y) for k, x, y in zip(self.keys, a, b))

    def inv(self, a: DirectedElem) -> DirectedElem:
        return tuple(self.comp_inv(k, x) for k, x in zip(self.keys, a))

    def entry(self, h: DirectedElem, level: int) -> LevelEntry:
        cls_ = self.classes.of(level)
        i = self.key_index(level)
        cache_key = (cls_, h[i])
        cached = self._entry_cache.get(cache_key)
        if cached is None:
            cached = self.comp_entry(self.keys[i], h[i], cls_)
            self._entry_cache[cache_key] = cached
        return cached

    def used_from(self, level: int) -> frozenset[int]:
        """Component indices that drive some level >= ``level``."""
        cls_ = self.classes.of(level)
        used = self._used.get(cls_)
        if used is None:
            stop = max(level, self.classes.start) + self.classes.period
            used = frozenset(self.key_index(j) for j in range(level, stop))
            self._used[cls_] = used
        return used

    def restrict(self, h: DirectedElem, level: int) -> DirectedElem:
        """Canonical representative of the action of h below 0^level."""
        used = self.used_from(level)
        return tuple(
            x if i in used else self._identity[i] for i, x in enumerate(h)
        )

    def is_rooted_at(self, h: DirectedElem, level: int) -> bool:
        """True when h acts below 0^level as its root permutation only."""
        return self.entry(h, level).sections_trivial() and (
            self.restrict(h, level + 1) == self.restrict(self._identity, level + 1)
        )

    def contains_restricted(self, h: DirectedElem, level: int) -> bool:
        """Membership of a restricted element in H_level."""
        return True

    def extend(
        self, h_child: DirectedElem, level: int, entry: LevelEntry
    ) -> DirectedElem | None:
        """Find h in H_level with continuation h_child and the given entry.

        Args:
            h_child: Restricted element of H_{level+1}
            level: Level of the new spine vertex
            entry: Required level entry of h at ``level``

        Returns:
            The restricted element, or None when H_level has no such element
        """
        i = self.key_index(level)
        key = self.keys[i]
        if i in self.used_from(level + 1):
            comp = h_child[i]
        else:
            found = self.comp_from_entry(key, entry, self.classes.of(level))
            if found is None:
                return None
            comp = found
        if self.comp_entry(key, comp, self.classes.of(level)) != entry:
            return None
        h = h_child[:i] + (comp,) + h_child[i + 1 :]
        if not self.contains_restricted(h, level):
            return None
        return h

    def from_rooted(self, root: Perm, level: int) -> DirectedElem | None:
        """The element of H_level acting as the rooted permutation ``root``."""
        d = self.valency.at(level)
        d_next = self.valency.at(level + 1)
        entry = LevelEntry(LevelEntry.identity(d, d_next).sections, root)
        return self.extend(self.restrict(self._identity, level + 1), level, entry)

    def _level_shapes(self, level: int) -> tuple[int, int, int]:
        return self.valency.at(level), self.valency.at(level + 1), self.c_seq.at(level)


class DiagonalGroup(DirectedGroup):
    """Product of rooted groups over next-level valencies, diagonal on sections."""

    kind = HModelKind.DIAGONAL

    def key_of(self, level: int) -> Hashable:
        return self.valency.at(level + 1)

    def comp_identity(self, key: Any) -> Hashable:
        return perms.identity(key)

    def comp_mul(self, key: Hashable, a: Any, b: Any) -> Hashable:
        return perms.compose(a, b)

    def comp_inv(self, key: Hashable, a: Any) -> Hashable:
        return perms.inverse(a)

    def comp_entry(self, key: Hashable, comp: Any, level: int) -> LevelEntry:
        d, d_next, c = self._level_shapes(level)
        ident = perms.identity(d_next)
        sections = tuple(comp if u < c else ident for u in range(d - 1))
        return LevelEntry(sections, perms.identity(d))

    def comp_from_entry(
        self, key: Any, entry: LevelEntry, level: int
    ) -> Hashable | None:
        comp = entry.sections[0]
        if not self.rooted[key].contains(comp):
            return None
        return comp

    @property
    def order(self) -> int:
        return math.prod(self.rooted[k].order for k in self.keys)  # type: ignore[index]

    def elements(self) -> tuple[DirectedElem, ...]:
        pools = [self.rooted[k].elements() for k in self.keys]  # type: ignore[index]
        return tuple(itertools.product(*pools))

    def random(self, rng: np.random.Generator) -> DirectedElem:
        return tuple(self.rooted[k].random(rng) for k in self.keys)  # type: ignore[index]


class MotherGroup(DirectedGroup):
    """Largest directed group for the valency and c sequences.

    One independent level group per level type (d_l, d_{l+1}, c_l). A
    component is the level entry itself. Root permutations are allowed only
    when every section position is in use (c_l = d_l - 1).
    """

    kind = HModelKind.MOTHER

    def key_of(self, level: int) -> Hashable:
        return self._level_shapes(level)

    def comp_identity(self, key: Any) -> Hashable:
        d, d_next, _ = key
        return LevelEntry.identity(d, d_next)

    def comp_mul(self, key: Hashable, a: Any, b: Any) -> Hashable:
        return a.mul(b)

    def comp_inv(self, key: Hashable, a: Any) -> Hashable:
        return a.inverse()

    def comp_entry(self, key: Hashable, comp: Any, level: int) -> LevelEntry:
        return comp  # type: ignore[no-any-return]

    def _roots(self, key: Any) -> tuple[Perm, ...]:
        d, _, c = key
        if c == d - 1:
            return self.rooted[d].stabilizer_of_zero()
        return (perms.identity(d),)

    def comp_from_entry(
        self, key: Any, entry: LevelEntry, level: int
    ) -> Hashable | None:
        d, d_next, c = key
        if len(entry.sections) != d - 1:
            return None
        for u, sec in enumerate(entry.sections):
            if u >= c and not perms.is_identity(sec):
                return None
            if not self.rooted[d_next].contains(sec):
                return None
        if entry.root[0] != 0:
            return None
        if c < d - 1 and not perms.is_identity(entry.root):
            return None
        if not self.rooted[d].contains(entry.root):
            return None
        return entry

    def _comp_order(self, key: Any) -> int:
        d, d_next, c = key
        roots = math.factorial(d - 1) if self.rooted[d].full else len(self._roots(key))
        if c < d - 1:
            roots = 1
        return int(self.rooted[d_next].order ** c * roots)

    @property
    def order(self) -> int:
        return math.prod(self._comp_order(k) for k in self.keys)

    def _comp_elements(self, key: Any) -> list[LevelEntry]:
        d, d_next, c = key
        ident = perms.identity(d_next)
        pools = [self.rooted[d_next].elements()] * c
        out = []
        for secs in itertools.product(*pools):
            full = tuple(secs) + tuple(ident for _ in range(d - 1 - c))
            for root in self._roots(key):
                out.append(LevelEntry(full, root))
        return out

    def elements(self) -> tuple[DirectedElem, ...]:
        if self.order > DEFAULT_ENUMERATION_CAP:
            raise SpecValidationError(
                f"Mother group of order {self.order} is above the enumeration "
                f"cap {DEFAULT_ENUMERATION_CAP}"
            )
        return tuple(
            itertools.product(*(self._comp_elements(k) for k in self.keys))
        )

    def random(self, rng: np.random.Generator) -> DirectedElem:
        comps: list[Hashable] = []
        for key in self.keys:
            d, d_next, c = key  # type: ignore[misc]
            ident = perms.identity(d_next)
            secs = tuple(
                self.rooted[d_next].random(rng) if u < c else ident
                for u in range(d - 1)
            )
            if c < d - 1:
                root = perms.identity(d)
            elif self.rooted[d].full:
                root = (0,) + tuple(int(x) + 1 for x in rng.permutation(d - 1))
            else:
                roots = self._roots(key)
                root = roots[int(rng.integers(len(roots)))]
            comps.append(LevelEntry(secs, root))
        return tuple(comps)


class PortraitGroup(DirectedGroup):
    """Group generated by explicit periodic portraits.

    A component is the level entry at one level class, so a generator is
    just its sequence of entries read at the class representatives. The
    closure is enumerated once, breadth first from the identity.
    """

    kind = HModelKind.PORTRAIT

    def __init__(
        self,
        valency: ValencySeq,
        c_seq: CSeq,
        rooted: Mapping[int, RootedGroup],
        classes: LevelClasses,
        generators: Sequence[PeriodicSeq[LevelEntry]],
    ) -> None:
        super().__init__(valency, c_seq, rooted, classes)
        self.generator_seqs = tuple(generators)
        self.generators = tuple(
            tuple(g.at(r) for r in range(classes.count)) for g in generators
        )
        self._closure = self._enumerate()
        self._closure_set = frozenset(self._closure)
        self._restricted: dict[int, frozenset[DirectedElem]] = {}

    def key_of(self, level: int) -> Hashable:
        return self.classes.of(level)

    def comp_identity(self, key: Any) -> Hashable:
        d, d_next, _ = self._level_shapes(key)
        return LevelEntry.identity(d, d_next)

    def comp_mul(self, key: Hashable, a: Any, b: Any) -> Hashable:
        return a.mul(b)

    def comp_inv(self, key: Hashable, a: Any) -> Hashable:
        return a.inverse()

    def comp_entry(self, key: Hashable, comp: Any, level: int) -> LevelEntry:
        return comp  # type: ignore[no-any-return]

    def comp_from_entry(
        self, key: Hashable, entry: LevelEntry, level: int
    ) -> Hashable | None:
        return entry

    def _enumerate(self) -> tuple[DirectedElem, ...]:
        start = self.identity()
        seen = {start: None}
        queue: deque[DirectedElem] = deque([start])
        while queue:
            x = queue.popleft()
            for g in self.generators:
                y = self.mul(x, g)
                if y not in seen:
                    if len(seen) >= DEFAULT_ENUMERATION_CAP:
                        raise SpecValidationError(
                            "Portrait generators span more than "
                            f"{DEFAULT_ENUMERATION_CAP} elements"
                        )
                    seen[y] = None
                    queue.append(y)
        return tuple(seen)

    @property
    def order(self) -> int:
        return len(self._closure)

    def elements(self) -> tuple[DirectedElem, ...]:
        return self._closure

    def random(self, rng: np.random.Generator) -> DirectedElem:
        return self._closure[int(rng.integers(len(self._closure)))]

    def contains_restricted(self, h: DirectedElem, level: int) -> bool:
        cls_ = self.classes.of(level)
        allowed = self._restricted.get(cls_)
        if allowed is None:
            allowed = frozenset(self.restrict(g, level) for g in self._closure)
            self._restricted[cls_] = allowed
        return h in allowed


# ============================================================================
# GROUP SPEC
# ============================================================================


@dataclass(frozen=True)
class Expansion:
    """Wreath coordinates of a directed element at one level."""

    child: DirectedElem
    rooted: tuple[Perm, ...]
    root: Perm


@dataclass(frozen=True, eq=False)
class GroupSpec:
    """Validated description of a saturated directed group Γ(S, HF).

    Attributes:
        name: Label used in reports
        valency: Valency sequence d_l
        c_seq: Relative saturation sequence c_l
        rooted: Rooted group per degree
        h: Directed group model
        f: Boundary group
        saturated: Whether saturation was requested (and verified)
        classes: Level classes shared by every periodic ingredient
    """

    name: str
    valency: ValencySeq
    c_seq: CSeq
    rooted: Mapping[int, RootedGroup]
    h: DirectedGroup
    f: FGroup
    saturated: bool
    classes: LevelClasses
    config: Mapping[str, Any] = field(default_factory=dict)

    def d(self, level: int) -> int:
        return self.valency.at(level)

    def c(self, level: int) -> int:
        return self.c_seq.at(level)

    def rooted_at(self, level: int) -> RootedGroup:
        return self.rooted[self.valency.at(level)]

    def level_class(self, level: int) -> int:
        return self.classes.of(level)

    def entry(self, h: DirectedElem, level: int) -> LevelEntry:
        return self.h.entry(h, level)

    # --- HF letters ---------------------------------------------------

    def hf_identity(self) -> HFElem:
        return (self.h.identity(), self.f.identity)

    def hf_mul(self, a: HFElem, b: HFElem) -> HFElem:
        return (self.h.mul(a[0], b[0]), self.f.mul(a[1], b[1]))

    def hf_inv(self, a: HFElem) -> HFElem:
        return (self.h.inv(a[0]), self.f.inv(a[1]))

    def hf_is_identity(self, a: HFElem) -> bool:
        return a[0] == self.h.identity() and self.f.is_identity(a[1])

    def hf_elements(self) -> tuple[HFElem, ...]:
        return tuple(itertools.product(self.h.elements(), self.f.elements()))

    def hf_random(self, rng: np.random.Generator) -> HFElem:
        return (self.h.random(rng), self.f.random(rng))

    def s_random(self, level: int, rng: np.random.Generator) -> Perm:
        return self.rooted_at(level).random(rng)

    # --- derived specs --------------------------------------------------

    def shift(self, level: int) -> GroupSpec:
        """The spec of Γ_level = Γ(S_{d_level}, H_level F)."""
        generators: tuple[PeriodicSeq[LevelEntry], ...] = ()
        if isinstance(self.h, PortraitGroup):
            generators = tuple(g.shift(level) for g in self.h.generator_seqs)
        return _assemble(
            name=f"{self.name}@{level}",
            valency=self.valency.shift(level),
            c_seq=self.c_seq.shift(level),
            rooted=self.rooted,
            kind=self.h.kind,
            generators=generators,
            f=self.f,
            saturated=self.saturated,
            config=self.config,
        )

    def fingerprint(self, depth: int) -> tuple[tuple[LevelEntry, ...], ...]:
        """Sorted truncated portraits of H on the first ``depth`` levels."""
        rows = {
            tuple(self.h.entry(g, level) for level in range(depth))
            for g in self.h.elements()
        }
        return tuple(sorted(rows))

    def saturation_failures(self) -> list[str]:
        """Section projections that miss part of the rooted group.

        Exhaustive when |H| is small enough; the diagonal and mother models
        are surjective by construction beyond that.
        """
        if self.h.order > SATURATION_ENUMERATION_CAP:
            if isinstance(self.h, (DiagonalGroup, MotherGroup)):
                return []
            return [f"H of order {self.h.order} too large to verify saturation"]
        elements = self.h.elements()
        failures = []
        for level in range(self.classes.count):
            target = self.rooted_at(level + 1)
            for u in range(self.c(level)):
                image = {self.h.entry(g, level).sections[u] for g in elements}
                if len(image) != target.order:
                    failures.append(
                        f"level {level} position {u + 1}: projection hits "
                        f"{len(image)} of {target.order} elements"
                    )
        return failures

    def describe(self) -> dict[str, Any]:
        """Short summary for the validate command."""
        return {
            "name": self.name,
            "valency_prefix": list(self.valency.prefix),
            "valency_pattern": list(self.valency.pattern),
            "c_prefix": list(self.c_seq.prefix),
            "c_pattern": list(self.c_seq.pattern),
            "h_model": str(self.h.kind),
            "h_order": self.h.order,
            "f_structure": str(self.f.structure),
            "f_order": self.f.order,
            "saturated": self.saturated,
            "level_classes": [self.classes.start, self.classes.period],
        }


def _assemble(
    name: str,
    valency: ValencySeq,
    c_seq: CSeq,
    rooted: Mapping[int, RootedGroup],
    kind: HModelKind,
    generators: Sequence[PeriodicSeq[LevelEntry]],
    f: FGroup,
    saturated: bool,
    config: Mapping[str, Any],
) -> GroupSpec:
    valency = ValencySeq(valency.prefix, valency.pattern).normalized()  # type: ignore[assignment]
    c_seq = CSeq(c_seq.prefix, c_seq.pattern).normalized()  # type: ignore[assignment]
    seqs: list[PeriodicSeq[Any]] = [valency, c_seq, *generators]
    classes = LevelClasses.combine(seqs)
    # one extra class so that d_{l+1} is covered for every representative
    for level in range(classes.count + 1):
        d = valency.at(level)
        c = c_seq.at(level)
        if not 1 <= c <= d - 1:
            raise SpecValidationError(
                f"c at level {level} is {c}, outside [1, {d - 1}]"
            )
    rooted = dict(rooted)
    for d in valency.distinct():
        rooted.setdefault(d, RootedGroup.symmetric(d))
    h: DirectedGroup
    if kind is HModelKind.DIAGONAL:
        h = DiagonalGroup(valency, c_seq, rooted, classes)
    elif kind is HModelKind.MOTHER:
        h = MotherGroup(valency, c_seq, rooted, classes)
    else:
        _validate_portraits(generators, valency, c_seq, rooted, classes)
        h = PortraitGroup(valency, c_seq, rooted, classes, generators)
    return GroupSpec(
        name=name,
        valency=valency,
        c_seq=c_seq,
        rooted=rooted,
        h=h,
        f=f,
        saturated=saturated,
        classes=classes,
        config=config,
    )


def _validate_portraits(
    generators: Sequence[PeriodicSeq[LevelEntry]],
    valency: ValencySeq,
    c_seq: CSeq,
    rooted: Mapping[int, RootedGroup],
    classes: LevelClasses,
) -> None:
    if not generators:
        raise SpecValidationError("Portrait model needs at least one generator")
    for gi, gen in enumerate(generators):
        for level in range(classes.count):
            entry = gen.at(level)
            d, d_next, c = valency.at(level), valency.at(level + 1), c_seq.at(level)
            where = f"generator {gi} level {level}"
            if len(entry.sections) != d - 1 or not perms.is_perm(entry.root, d):
                raise SpecValidationError(f"{where}: entry shape does not match d={d}")
            if entry.root[0] != 0:
                raise SpecValidationError(f"{where}: root must fix child 0")
            for u, sec in enumerate(entry.sections):
                if not rooted[d_next].contains(sec):
                    raise SpecValidationError(
                        f"{where}: section {u + 1} is not in the rooted group "
                        f"of degree {d_next}"
                    )
                if u >= c and not perms.is_identity(sec):
                    raise SpecValidationError(
                        f"{where}: section {u + 1} must be trivial since c={c}"
                    )


# ============================================================================
# CONFIG -> SPEC
# ============================================================================


def _parse_entry(raw: Mapping[str, Any], d: int, d_next: int) -> LevelEntry:
    sections = [tuple(s) for s in raw.get(CONF_SECTIONS, [])]
    if len(sections) > d - 1:
        raise SpecValidationError(
            f"Level entry has {len(sections)} sections but d={d} allows {d - 1}"
        )
    for sec in sections:
        if not perms.is_perm(sec, d_next):
            raise SpecValidationError(
                f"Section {list(sec)} is not a permutation of degree {d_next}"
            )
    sections += [perms.identity(d_next)] * (d - 1 - len(sections))
    root = tuple(raw.get(CONF_ROOT, range(d)))
    return LevelEntry(tuple(sections), root)


def _parse_portrait(
    raw: Mapping[str, Any], valency: ValencySeq
) -> PeriodicSeq[LevelEntry]:
    prefix_raw = raw.get(CONF_PREFIX, [])
    pattern_raw = raw[CONF_PATTERN]
    start = len(prefix_raw)
    prefix = tuple(
        _parse_entry(e, valency.at(i), valency.at(i + 1))
        for i, e in enumerate(prefix_raw)
    )
    # pattern entries must agree with the valency at every repetition
    period = math.lcm(len(pattern_raw), valency.period)
    reps = max(start, valency.start) - start + period
    pattern_levels = [
        _parse_entry(
            pattern_raw[j % len(pattern_raw)],
            valency.at(start + j),
            valency.at(start + j + 1),
        )
        for j in range(reps)
    ]
    pattern = tuple(pattern_levels[-period:])
    prefix = prefix + tuple(pattern_levels[: reps - period])
    return PeriodicSeq(prefix, pattern).normalized()


def _parse_rooted(raw: Mapping[str, Any]) -> dict[int, RootedGroup]:
    rooted: dict[int, RootedGroup] = {}
    for key, value in raw.items():
        degree = int(key)
        if value == ROOTED_SYMMETRIC:
            rooted[degree] = RootedGroup.symmetric(degree)
        else:
            rooted[degree] = RootedGroup.from_generators(
                degree, [tuple(g) for g in value]
            )
    return rooted


def build_group(config: Mapping[str, Any]) -> GroupSpec:
    """Build and validate a GroupSpec from a config record.

    Args:
        config: Raw config mapping; validated against the schema first

    Returns:
        The validated spec

    Raises:
        ConfigValidationError: If the record does not match the schema
        SpecValidationError: If the described group is invalid, including a
            non-surjective section projection when saturated is requested
    """
    cfg = validate_config(config)
    val_raw = cfg[CONF_VALENCY]
    valency = ValencySeq(
        tuple(val_raw.get(CONF_PREFIX, [])), tuple(val_raw[CONF_PATTERN])
    )
    c_raw = cfg.get(CONF_C_SEQ)
    c_seq = (
        CSeq(tuple(c_raw.get(CONF_PREFIX, [])), tuple(c_raw[CONF_PATTERN]))
        if c_raw
        else CSeq.full(valency)
    )
    rooted = _parse_rooted(cfg.get(CONF_ROOTED_GROUPS, {}))
    for d in valency.distinct():
        rooted.setdefault(d, RootedGroup.symmetric(d))
    h_raw = cfg[CONF_H_MODEL]
    kind = HModelKind(h_raw[CONF_KIND])
    generators = tuple(
        _parse_portrait(g, valency) for g in h_raw.get(CONF_GENERATORS, [])
    )
    f_raw = cfg[CONF_F_GROUP]
    f = FGroup(FStructure(f_raw[CONF_STRUCTURE]), f_raw[CONF_SIZE])
    saturated = bool(cfg.get(CONF_SATURATED, True))
    spec = _assemble(
        name=cfg.get(CONF_NAME, "group"),
        valency=valency,
        c_seq=c_seq,
        rooted=rooted,
        kind=kind,
        generators=generators,
        f=f,
        saturated=saturated,
        config=cfg,
    )
    failures = spec.saturation_failures()
    if failures and saturated:
        raise SpecValidationError(
            f"Group '{spec.name}' is not saturated: " + "; ".join(failures)
        )
    if failures:
        _LOGGER.info("Group %s is not saturated: %s", spec.name, failures)
    _LOGGER.debug(
        "Built group %s: kind=%s |H|=%s |F|=%s classes=%s",
        spec.name,
        kind,
        spec.h.order,
        f.order,
        spec.classes,
    )
    return spec


def expand_directed(spec: GroupSpec, h: DirectedElem, level: int) -> Expansion:
    """Wreath coordinates (child, sections, root) of h at ``level``."""
    entry = spec.entry(h, level)
    return Expansion(spec.h.restrict(h, level + 1), entry.sections, entry.root)


# ============================================================================
# ACTIONS ON VERTICES AND RAYS
# ============================================================================


class WordLike(Protocol):
    """Anything with alternate-word fields (see words.AlternateWord)."""

    @property
    def level(self) -> int: ...

    @property
    def s(self) -> tuple[Perm, ...]: ...

    @property
    def k(self) -> tuple[HFElem, ...]: ...


def iter_letters(word: WordLike) -> Iterator[tuple[str, Any]]:
    """Yield ("S", perm) and ("K", (h, f)) letters in word order."""
    for j, hf in enumerate(word.k):
        yield "S", word.s[j]
        yield "K", hf
    yield "S", word.s[-1]


def _apply_directed(
    spec: GroupSpec, h: DirectedElem, level: int, point: list[int], grow: bool
) -> None:
    j = 0
    while j < len(point):
        t = point[j]
        entry = spec.entry(h, level + j)
        point[j] = entry.root[t]
        if t != 0:
            if j + 1 >= len(point):
                if not grow:
                    return
                point.append(0)
            point[j + 1] = entry.sections[t - 1][point[j + 1]]
            return
        j += 1


def _check_path(
    spec: GroupSpec, level: int, path: Sequence[int], exc: type[Exception]
) -> None:
    for j, t in enumerate(path):
        d = spec.d(level + j)
        if not 0 <= t < d:
            raise exc(f"Letter {t} at depth {j} outside 0..{d - 1}")


def act_vertex(
    spec: GroupSpec, word: WordLike, vertex: Sequence[int]
) -> tuple[int, ...]:
    """Image of a vertex (path from the level-``word.level`` root).

    Raises:
        InvalidVertexError: If a letter exceeds the valency of its level
    """
    _check_path(spec, word.level, vertex, InvalidVertexError)
    point = list(vertex)
    if not point:
        return ()
    for tag, letter in iter_letters(word):
        if tag == "S":
            point[0] = letter[point[0]]
        else:
            _apply_directed(spec, letter[0], word.level, point, grow=False)
    return tuple(point)


def strip_ray(ray: Sequence[int]) -> tuple[int, ...]:
    """Canonical prefix of u·0^∞: trailing zeros removed."""
    end = len(ray)
    while end and ray[end - 1] == 0:
        end -= 1
    return tuple(ray[:end])


def step_ray(
    spec: GroupSpec, level: int, tag: str, letter: Any, point: tuple[int, ...]
) -> tuple[tuple[int, ...], FElem | None]:
    """Move a stripped ray by one letter of a level-``level`` word.

    Returns the new stripped ray and, for a directed letter met on the
    spine, its boundary component; otherwise None.
    """
    if tag == "S":
        head = point[0] if point else 0
        return strip_ray((letter[head],) + point[1:]), None
    h, f = letter
    if not point:
        return point, f
    moved = list(point)
    _apply_directed(spec, h, level, moved, grow=True)
    return strip_ray(moved), None


def act_ray(
    spec: GroupSpec, word: WordLike, ray: Sequence[int]
) -> tuple[tuple[int, ...], FElem]:
    """Image of the ray u·0^∞ and the boundary label collected on the way.

    The label is the ordered product of the f of every directed letter met
    while the moving point sits on the spine.

    Raises:
        InvalidRayError: If a prefix letter exceeds the valency of its level
    """
    _check_path(spec, word.level, ray, InvalidRayError)
    point = strip_ray(ray)
    label = spec.f.identity
    for tag, letter in iter_letters(word):
        point, f = step_ray(spec, word.level, tag, letter, point)
        if f is not None:
            label = spec.f.mul(label, f)
    return point, label
