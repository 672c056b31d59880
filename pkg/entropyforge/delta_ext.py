"""Extended-valency groups Δ(S', H'F') built over a saturated Γ(S, HF).

Level l of the extended tree has e_l = d_l + d'_l children. The first d_l
carry Γ; the remaining d'_l form a block on which every generator acts
through a root component:

    s' = s ⊔ s''           s'' ∈ S''_l
    h'f' = (h'_1, σ'_2, ..., σ'_{d_l}, 1, ..., 1) (hf)''

so the block group ⟨S''_l, H''_l F''_l⟩ is a quotient of the free product
S_l * (H_l × F). Three block modes are supported:

    free       d'_l infinite. Root components stay symbolic as reduced
               free-product words and are never turned into permutations.
    truncated  A finite quotient that agrees with the free product up to an
               agreement radius. Words within the radius get exact answers;
               longer ones raise QuotientRadiusError.
    regular    d'_l = |S_l| + |H_l F|: right regular representations of S_l
               and of H_l × F on disjoint point sets, so the block group is
               S_l × H_l F and h'' commutes with f''.

Δ words use the alphabet of Γ (S' ≅ S, H'F' ≅ HF); priming is a matter of
interpretation, which makes quotient_to_gamma the identity on letters.

Architecture Note:
    Rewriting a Δ word yields the same child words as rewrite_step on the
    base word plus a root component (σ, tail). is_trivial_delta walks the
    rewriting tree and tests the root component of every vertex it visits,
    so it only touches blocks at levels the recursion reaches for the given
    word length. schedule_scales places blocks just beyond that depth.

See Also:
    entropyforge.words: rewrite_step, is_trivial and the state budget
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable

from . import logtools, perms
from .const import (
    CONF_DEGREE,
    CONF_LEVEL,
    CONF_MODE,
    CONF_RADIUS,
    DEFAULT_SEED,
    DEFAULT_STATE_BUDGET,
    BlockMode,
    ScaleMode,
)
from .exceptions import (
    MissingQuotientError,
    QuotientRadiusError,
    ScheduleError,
    SpecValidationError,
)
from .group_model import DirectedElem, GroupSpec, HFElem
from .perms import Perm
from .walker import sample_words
from .words import (
    AlternateWord,
    DirectedLetter,
    StateBudget,
    is_trivial,
    is_trivial_short,
    rewrite_step,
)

_LOGGER = logging.getLogger(__name__)

FreeLetter = tuple[str, Any]  # ("S", perm) or ("K", (h, f))


# ============================================================================
# FREE PRODUCT S_l * H_l F
# ============================================================================


def _restricted_hf(spec: GroupSpec, hf: HFElem, level: int) -> HFElem:
    return (spec.h.restrict(hf[0], level), hf[1])


def _letter_is_one(spec: GroupSpec, letter: FreeLetter) -> bool:
    tag, value = letter
    if tag == "S":
        return perms.is_identity(value)
    return spec.hf_is_identity(value)


def _letter_mul(spec: GroupSpec, tag: str, a: Any, b: Any) -> Any:
    if tag == "S":
        return perms.compose(a, b)
    return spec.hf_mul(a, b)


@dataclass(frozen=True)
class FreeProductWord:
    """Reduced word of S_l * H_l F.

    Letters alternate between the two factors and none is an identity.
    """

    level: int
    letters: tuple[FreeLetter, ...] = ()

    @property
    def length(self) -> int:
        return len(self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    @classmethod
    def reduce(
        cls, spec: GroupSpec, level: int, letters: Iterable[FreeLetter]
    ) -> FreeProductWord:
        """Normal form of a letter sequence; any bracketing gives the same result."""
        stack: list[FreeLetter] = []
        for letter in letters:
            if _letter_is_one(spec, letter):
                continue
            tag, value = letter
            if stack and stack[-1][0] == tag:
                merged = (tag, _letter_mul(spec, tag, stack.pop()[1], value))
                if not _letter_is_one(spec, merged):
                    stack.append(merged)
            else:
                stack.append(letter)
        return cls(level, tuple(stack))

    def mul(self, spec: GroupSpec, other: FreeProductWord) -> FreeProductWord:
        return FreeProductWord.reduce(spec, self.level, self.letters + other.letters)

    def inverse(self, spec: GroupSpec) -> FreeProductWord:
        inv = tuple(
            (tag, perms.inverse(v) if tag == "S" else spec.hf_inv(v))
            for tag, v in reversed(self.letters)
        )
        return FreeProductWord(self.level, inv)


def free_letters(spec: GroupSpec, word: AlternateWord) -> list[FreeLetter]:
    """The letters of ``word`` as letters of S_l * H_l F, unreduced."""
    out: list[FreeLetter] = []
    for j, hf in enumerate(word.k):
        out.append(("S", word.s[j]))
        out.append(("K", _restricted_hf(spec, hf, word.level)))
    out.append(("S", word.s[-1]))
    return out


def free_image(spec: GroupSpec, word: AlternateWord) -> FreeProductWord:
    """Image of ``word`` in the free product S_l * H_l F."""
    return FreeProductWord.reduce(spec, word.level, free_letters(spec, word))


def letter_count(word: AlternateWord) -> int:
    """Generators of S ⊔ HF spelled by ``word``: every k-letter, non-identity s."""
    return word.length + sum(1 for s in word.s if not perms.is_identity(s))


# ============================================================================
# BLOCKS AND SPECS
# ============================================================================


@dataclass(frozen=True)
class Block:
    """Root-component group attached to one level.

    Attributes:
        level: Level l of the extended tree
        mode: free, truncated or regular
        radius: Agreement radius of a truncated block (letters)
        degree: Requested d'_l of a regular block; extra points stay fixed
    """

    level: int
    mode: BlockMode
    radius: int | None = None
    degree: int | None = None

    def __post_init__(self) -> None:
        if self.mode is BlockMode.TRUNCATED and self.radius is None:
            raise MissingQuotientError(
                f"Truncated block at level {self.level} needs an agreement radius"
            )

    @classmethod
    def from_config(cls, raw: Mapping[str, Any]) -> Block:
        return cls(
            level=raw[CONF_LEVEL],
            mode=BlockMode(raw[CONF_MODE]),
            radius=raw.get(CONF_RADIUS),
            degree=raw.get(CONF_DEGREE),
        )


@dataclass(frozen=True)
class DeltaSpec:
    """Γ plus the blocks of Δ. Levels without a block have d'_l = 0.

    Attributes:
        base: The saturated group Γ(S, HF)
        blocks: Level -> block
        radii: Scale radii the blocks were scheduled for, if any
        mode: Quantity the schedule targets, if any
    """

    base: GroupSpec
    blocks: Mapping[int, Block] = field(default_factory=dict)
    radii: tuple[int, ...] = ()
    mode: ScaleMode | None = None

    @classmethod
    def from_config(
        cls, base: GroupSpec, raw_blocks: Sequence[Mapping[str, Any]]
    ) -> DeltaSpec:
        """Blocks from the ``delta`` list of a group config.

        Raises:
            SpecValidationError: If two blocks share a level
        """
        blocks: dict[int, Block] = {}
        for raw in raw_blocks:
            block = Block.from_config(raw)
            if block.level in blocks:
                raise SpecValidationError(f"Two delta blocks at level {block.level}")
            blocks[block.level] = block
        return cls(base, blocks)

    def block(self, level: int) -> Block | None:
        return self.blocks.get(level)

    def d_prime(self, level: int) -> int | None:
        """d'_l, or None for an infinite (symbolic) block."""
        block = self.blocks.get(level)
        if block is None:
            return 0
        if block.mode is BlockMode.REGULAR:
            return self.portraits[level].d_prime
        return None

    def without(self, level: int) -> DeltaSpec:
        blocks = {lv: b for lv, b in self.blocks.items() if lv != level}
        return DeltaSpec(self.base, blocks, self.radii, self.mode)

    @cached_property
    def portraits(self) -> dict[int, BlockPortrait]:
        return build_delta(self)

    def describe(self) -> dict[str, Any]:
        """Block metadata recorded next to every Δ output."""
        return {
            "base": self.base.name,
            "radii": list(self.radii),
            "mode": None if self.mode is None else str(self.mode),
            "blocks": [
                {
                    "level": b.level,
                    "mode": str(b.mode),
                    "radius": b.radius,
                    "d_prime": self.d_prime(b.level),
                    "embedding": (
                        "right-regular"
                        if b.mode is BlockMode.REGULAR
                        else "symbolic"
                    ),
                }
                for b in sorted(self.blocks.values(), key=lambda b: b.level)
            ],
        }


# ============================================================================
# GENERATOR PORTRAITS
# ============================================================================


def regular_representation(
    elements: Sequence[Any], mul: Callable[[Any, Any], Any], offset: int = 0
) -> dict[Any, Perm]:
    """Right regular action x -> x g on ``elements``, shifted by ``offset``."""
    index = {x: i for i, x in enumerate(elements)}
    return {
        g: tuple(offset + index[mul(x, g)] for x in elements) for g in elements
    }


def is_embedding(
    elements: Sequence[Any], mul: Callable[[Any, Any], Any], images: Mapping[Any, Perm]
) -> bool:
    """Multiplication-table check that g -> images[g] is an injective homomorphism."""
    if len(set(images[g] for g in elements)) != len(elements):
        return False
    return all(
        images[mul(a, b)] == perms.compose(images[a], images[b])
        for a in elements
        for b in elements
    )


def _pad(p: Perm, start: int, size: int) -> Perm:
    """Extend a permutation of start..start+len(p)-1 to 0..size-1."""
    out = list(range(size))
    for i, image in enumerate(p):
        out[start + i] = image
    return tuple(out)


def hf_elements_at(spec: GroupSpec, level: int) -> tuple[HFElem, ...]:
    """H_l × F with H_l the restrictions of H below 0^l."""
    h_level = dict.fromkeys(spec.h.restrict(h, level) for h in spec.h.elements())
    return tuple((h, f) for h in h_level for f in spec.f.elements())


@dataclass(frozen=True)
class BlockPortrait:
    """Generator portraits at one block level.

    Attributes:
        level: Block level l
        d: d_l
        d_prime: d'_l, or None when the block stays symbolic
        s_images: s -> s'' on the block points (regular blocks only)
        hf_images: (h, f) -> (hf)'' on the block points (regular blocks only)
    """

    level: int
    d: int
    d_prime: int | None
    s_images: Mapping[Perm, Perm] = field(default_factory=dict)
    hf_images: Mapping[HFElem, Perm] = field(default_factory=dict)

    def s_prime(self, s: Perm) -> Perm:
        """s' on all e_l points: s on the first d_l, s'' on the block."""
        if self.d_prime is None:
            raise MissingQuotientError(
                f"Block at level {self.level} is symbolic; s' has no permutation"
            )
        block = self.s_images[s]
        return tuple(s) + tuple(self.d + x for x in block)

    def evaluate(self, spec: GroupSpec, letters: Iterable[FreeLetter]) -> Perm:
        """Block permutation of a root-component tail."""
        assert self.d_prime is not None
        out = perms.identity(self.d_prime)
        for tag, value in letters:
            image = self.s_images[value] if tag == "S" else self.hf_images[value]
            out = perms.compose(out, image)
        return out


def _regular_portrait(spec: GroupSpec, block: Block) -> BlockPortrait:
    level = block.level
    s_elems = spec.rooted_at(level).elements()
    hf_elems = hf_elements_at(spec, level)
    natural = len(s_elems) + len(hf_elems)
    size = natural if block.degree is None else block.degree
    if size < natural:
        raise SpecValidationError(
            f"Block at level {level}: d' = {size} is smaller than the regular "
            f"embedding degree {natural}"
        )
    s_reg = regular_representation(s_elems, perms.compose)
    hf_reg = regular_representation(hf_elems, spec.hf_mul, offset=len(s_elems))
    if not is_embedding(s_elems, perms.compose, s_reg):
        raise SpecValidationError(f"s -> s'' is not an embedding at level {level}")
    if not is_embedding(hf_elems, spec.hf_mul, hf_reg):
        raise SpecValidationError(
            f"hf -> (hf)'' is not an embedding at level {level}"
        )
    return BlockPortrait(
        level=level,
        d=spec.d(level),
        d_prime=size,
        s_images={s: _pad(p, 0, size) for s, p in s_reg.items()},
        hf_images={k: _pad(p, len(s_elems), size) for k, p in hf_reg.items()},
    )


def _h_f_commute(spec: GroupSpec, portrait: BlockPortrait) -> bool:
    """h'' and f'' commute on the block for every h and f."""
    one_h = spec.h.restrict(spec.h.identity(), portrait.level)
    for k in portrait.hf_images:
        h_only = portrait.hf_images[(k[0], spec.f.identity)]
        f_only = portrait.hf_images[(one_h, k[1])]
        if perms.compose(h_only, f_only) != perms.compose(f_only, h_only):
            return False
    return True


def build_delta(dspec: DeltaSpec) -> dict[int, BlockPortrait]:
    """Generator portraits of Δ at every block level.

    Levels without a block are absent: there s' = s and h'f' = hf, so a spec
    without blocks is Γ itself.

    Raises:
        SpecValidationError: If a regular block is given too few points
    """
    spec = dspec.base
    if not spec.saturated:
        _LOGGER.warning("Building Δ over %s, which is not marked saturated", spec.name)
    out: dict[int, BlockPortrait] = {}
    for level, block in sorted(dspec.blocks.items()):
        if block.mode is BlockMode.REGULAR:
            portrait = _regular_portrait(spec, block)
            assert _h_f_commute(spec, portrait)
        else:
            portrait = BlockPortrait(level, spec.d(level), None)
        out[level] = portrait
        _LOGGER.debug(
            "Δ block level=%s mode=%s d'=%s", level, block.mode, portrait.d_prime
        )
    return out


# ============================================================================
# REWRITING AND THE WORD PROBLEM
# ============================================================================


@dataclass(frozen=True)
class DeltaRootComponent:
    """Root permutation of a Δ word: σ on the first d_l points, a tail on the block.

    Attributes:
        sigma: Root permutation of the base word
        tail: Reduced image in the free product; empty when the level has no block
        block_perm: Block permutation for regular blocks, otherwise None
    """

    sigma: Perm
    tail: FreeProductWord
    block_perm: Perm | None = None

    def tail_is_identity(self) -> bool:
        if self.block_perm is not None:
            return perms.is_identity(self.block_perm)
        return self.tail.is_identity()

    def is_identity(self) -> bool:
        return perms.is_identity(self.sigma) and self.tail_is_identity()


def root_tail(
    dspec: DeltaSpec, word: AlternateWord
) -> tuple[FreeProductWord, Perm | None]:
    """Block part of the root component of ``word``.

    Raises:
        QuotientRadiusError: If a truncated block is asked beyond its radius
    """
    level = word.level
    block = dspec.block(level)
    if block is None:
        return FreeProductWord(level), None
    if block.mode is BlockMode.TRUNCATED:
        assert block.radius is not None
        count = letter_count(word)
        if count > block.radius:
            raise QuotientRadiusError(level, block.radius, count)
    tail = free_image(dspec.base, word)
    if block.mode is BlockMode.REGULAR:
        return tail, dspec.portraits[level].evaluate(dspec.base, tail.letters)
    return tail, None


@dataclass(frozen=True)
class DeltaRewrite:
    """One rewriting step in Δ.

    Attributes:
        children: Child words on the first d_l children, equal to the Γ ones
        root: Root component (σ, tail)
    """

    children: tuple[AlternateWord, ...]
    root: DeltaRootComponent


def rewrite_delta(dspec: DeltaSpec, word: AlternateWord) -> DeltaRewrite:
    """Decompose a Δ word into Γ-identical child words and a root component.

    The block children d_l..e_l-1 carry trivial words and are not listed.
    """
    step = rewrite_step(dspec.base, word)
    tail, block_perm = root_tail(dspec, word)
    return DeltaRewrite(step.children, DeltaRootComponent(step.root, tail, block_perm))


def is_trivial_delta(
    dspec: DeltaSpec,
    word: AlternateWord,
    budget: int = DEFAULT_STATE_BUDGET,
) -> bool:
    """Decide w = 1 in Δ by localisation.

    At each visited vertex the block part of the root component is tested
    first; words of length <= 1 are then decided as in Γ, longer ones need a
    trivial root permutation and trivial children.

    Raises:
        QuotientRadiusError: If a truncated block is asked beyond its radius
        WordProblemBudgetError: If more than ``budget`` states are visited
    """
    memo: dict[tuple[Any, ...], bool] = {}
    return _trivial_delta(dspec, word, memo, StateBudget(budget, word.length))


def _trivial_delta(
    dspec: DeltaSpec,
    word: AlternateWord,
    memo: dict[tuple[Any, ...], bool],
    budget: StateBudget,
) -> bool:
    key = (word.level, word.s, word.k)
    cached = memo.get(key)
    if cached is not None:
        return cached
    budget.tick()
    tail, block_perm = root_tail(dspec, word)
    if block_perm is not None:
        result = perms.is_identity(block_perm)
    else:
        result = tail.is_identity()
    if result:
        if word.length <= 1:
            result = is_trivial_short(dspec.base, word)
        else:
            step = rewrite_step(dspec.base, word)
            result = perms.is_identity(step.root) and all(
                _trivial_delta(dspec, child, memo, budget) for child in step.children
            )
    memo[key] = result
    return result


def localisation_depth(n: int) -> int:
    """Deepest level the rewriting recursion can visit for a word of length n."""
    depth = 0
    m = n
    while m >= 2:
        m = (m + 1) // 2
        depth += 1
    return depth


# ============================================================================
# QUOTIENT AND LIFTING
# ============================================================================


def quotient_to_gamma(dspec: DeltaSpec, word: AlternateWord) -> AlternateWord:
    """Image of a Δ word in Γ: the same letters, read without primes.

    Raises:
        SpecValidationError: If a letter lies outside S or HF
    """
    spec = dspec.base
    rooted = spec.rooted_at(word.level)
    for s in word.s:
        if not rooted.contains(s):
            raise SpecValidationError(
                f"{s} is not in the rooted group of level {word.level}"
            )
    return word


class _Lifter:
    """Conjugation recipe producing level-j letters with a prescribed spine child."""

    def __init__(self, spec: GroupSpec) -> None:
        self.spec = spec
        self._candidates: dict[int, list[DirectedElem]] = {}

    def candidates(self, level: int) -> list[DirectedElem]:
        found = self._candidates.get(level)
        if found is None:
            restricted = dict.fromkeys(
                self.spec.h.restrict(h, level) for h in self.spec.h.elements()
            )
            found = [
                h
                for h in restricted
                if perms.is_identity(self.spec.entry(h, level).root)
            ]
            self._candidates[level] = found
        return found

    def rooted(self, x: Perm, level: int) -> AlternateWord:
        """s h s^-1 at ``level`` whose spine child is the rooted letter x."""
        spec = self.spec
        c = spec.c(level)
        one_f = spec.f.identity
        for h in self.candidates(level):
            sections = spec.entry(h, level).sections
            for u in range(1, c + 1):
                if sections[u - 1] != x:
                    continue
                s = next(p for p in spec.rooted_at(level).elements() if p[0] == u)
                return AlternateWord(level, (s, perms.inverse(s)), ((h, one_f),))
        raise SpecValidationError(
            f"No element of H at level {level} has section {x}; "
            "lifting needs a saturated group"
        )

    def directed(self, hf: HFElem, level: int) -> AlternateWord:
        """A letter at ``level`` whose spine child is the directed letter hf."""
        spec = self.spec
        h1, f = hf
        ident = perms.identity(spec.d(level))
        for h in self.candidates(level):
            if spec.h.restrict(h, level + 1) == h1:
                return AlternateWord(level, (ident, ident), ((h, f),))
        raise SpecValidationError(
            f"No element of H at level {level} continues as {h1}; "
            "lifting needs a saturated group"
        )


def lift(spec: GroupSpec, word: AlternateWord) -> AlternateWord:
    """A word one level up whose spine child equals ``word``, with trivial root.

    Every letter x of the input becomes a length-one word y with spine child
    x and trivial root permutation, so the product has spine child equal to
    the input. The result has length at most 2n + 1.

    Raises:
        ValueError: If ``word`` lives at level 0
        SpecValidationError: If H lacks the sections the recipe needs
    """
    if word.level == 0:
        raise ValueError("Level-0 words have no parent level to lift to")
    level = word.level - 1
    lifter = _Lifter(spec)
    out = AlternateWord.empty(spec, level)
    for letter in word.letters():
        if isinstance(letter, DirectedLetter):
            out = out.then(lifter.directed(letter.hf, level))
        elif not perms.is_identity(letter.perm):
            out = out.then(lifter.rooted(letter.perm, level))
    return out


def lift_from_level1(spec: GroupSpec, word: AlternateWord) -> AlternateWord:
    if word.level != 1:
        raise ValueError(f"Expected a level-1 word, got level {word.level}")
    return lift(spec, word)


def lift_to_root(spec: GroupSpec, word: AlternateWord) -> AlternateWord:
    """Apply lift until the word lives at level 0; its 0^l vertex word is ``word``."""
    while word.level > 0:
        word = lift(spec, word)
    return word


def witness(spec: GroupSpec, level: int) -> AlternateWord:
    """A level-0 word trivial in Γ whose vertex word at 0^level is [f, t f t^-1].

    f is a non-identity boundary letter and t a rooted permutation moving 0,
    so the two factors act at different boundary points in Γ but do not
    commute in S_l * H_l F. Any free or truncated block at ``level``
    therefore sees a non-trivial root component.

    The conjugator is t lifted ``level`` times, of length at most 2^level - 1,
    so the witness has length at most 2^(level + 2).

    Raises:
        SpecValidationError: If F is trivial
    """
    f_elem = next((f for f in spec.f.elements() if not spec.f.is_identity(f)), None)
    if f_elem is None:
        raise SpecValidationError("A witness needs a non-trivial boundary group F")
    t = next(p for p in spec.rooted_at(level).elements() if p[0] != 0)
    g = lift_to_root(spec, AlternateWord(level, (t,), ()))
    ident = perms.identity(spec.d(0))
    f_word = AlternateWord(0, (ident, ident), ((spec.h.identity(), f_elem),))
    conj = g.then(f_word).then(g.inverse(spec))
    return f_word.then(conj).then(f_word.inverse(spec)).then(conj.inverse(spec))


# ============================================================================
# SCALE SCHEDULING AND SIMULATION
# ============================================================================


def block_level(radius: int) -> int:
    """First level never visited on words of length <= 2R + 1."""
    return localisation_depth(2 * radius + 1) + 1


def schedule_scales(
    spec: GroupSpec, radii: Sequence[int], mode: ScaleMode = ScaleMode.ENTROPY
) -> DeltaSpec:
    """Δ whose balls of radius R_i match Γ and whose next scale sees a free block.

    Block i sits at block_level(R_i). It is a truncated quotient with
    agreement radius 2 R_{i+1} + 1, and the last block is free.

    Raises:
        ScheduleError: If the radii are not increasing or two blocks collide
    """
    radii = tuple(radii)
    if any(r < 1 for r in radii):
        raise ScheduleError(f"Radii must be >= 1, got {list(radii)}")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ScheduleError(f"Radii must be strictly increasing, got {list(radii)}")
    levels = [block_level(r) for r in radii]
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ScheduleError(
            f"Radii {list(radii)} are too dense: block levels {levels} overlap"
        )
    blocks: dict[int, Block] = {}
    for i, level in enumerate(levels):
        if i + 1 < len(radii):
            radius = 2 * radii[i + 1] + 1
            blocks[level] = Block(level, BlockMode.TRUNCATED, radius=radius)
        else:
            blocks[level] = Block(level, BlockMode.FREE)
    _LOGGER.debug("Scheduled Δ over %s: radii=%s levels=%s", spec.name, radii, levels)
    return DeltaSpec(spec, blocks, radii, mode)


def regime(dspec: DeltaSpec, n: int) -> str:
    """"low" when no block is reachable from words of length n, else "high@l"."""
    reach = localisation_depth(n)
    reachable = [lv for lv in dspec.blocks if lv <= reach]
    if not reachable:
        return "low"
    return f"high@{min(reachable)}"


@dataclass(frozen=True)
class DeltaReturns:
    """Return counts of the same sampled words read in Γ and in Δ.

    Attributes:
        n: Walk length
        samples: Sampled words
        gamma_returns: Samples trivial in Γ
        delta_returns: Samples trivial in Δ
        censored: Samples a truncated block could not decide
        regime: low or high@level, see regime()
    """

    n: int
    samples: int
    gamma_returns: int
    delta_returns: int
    censored: int
    regime: str

    @property
    def gamma_freq(self) -> float:
        return self.gamma_returns / self.samples

    @property
    def delta_freq(self) -> float:
        return self.delta_returns / self.samples


def delta_returns(
    dspec: DeltaSpec, n: int, samples: int, seed: int = DEFAULT_SEED
) -> DeltaReturns:
    """Empirical P(Y_n = 1) in Γ and Δ on one set of sampled words.

    Every Δ-trivial word is Γ-trivial, so delta_returns <= gamma_returns.
    The Δ frequency is a heuristic estimate without an exact counterpart.
    """
    gamma = delta = censored = 0
    for word in sample_words(dspec.base, n, samples, seed):
        g = is_trivial(dspec.base, word)
        gamma += g
        if not g:
            continue
        try:
            delta += is_trivial_delta(dspec, word)
        except QuotientRadiusError:
            censored += 1
    if censored:
        _LOGGER.warning(
            "%s of %s Δ samples at n=%s exceeded a truncated block radius",
            censored,
            samples,
            n,
        )
    logtools.count("delta_samples", samples)
    return DeltaReturns(n, samples, gamma, delta, censored, regime(dspec, n))
