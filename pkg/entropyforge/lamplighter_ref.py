"""Reference lamplighter F ≀ D∞ and its comparison with the extended D∞F.

D∞ = ⟨s, h | s² = h² = 1⟩ is coded by the integer t = w(0), where s and h act
on Z as the reflections z ↦ 1 - z and z ↦ -1 - z and a word composes in
written order. The Cayley graph for {s, h} is then the line: right
multiplication by a generator moves t to t ± 1. Positive codes are the
reduced words starting with s (s = 1, sh = 2, shs = 3), negative codes the
ones starting with h.

The walk alternates steps r_i = h_i s_i h'_i (each factor uniform on {1, g})
with a uniform f_i ∈ F:

    X̃_n = r_1 f_1 r_2 f_2 ... r_n f_n  in F ≀ D∞
    Z_n  = the same letters in the extended group D∞F

LampElement keeps the lamps keyed by the walker position X_i at which f_i
was switched on. The lamp function with the action d.Φ(x) = Φ(xd) is
Φ(y) = lamps[y⁻¹].

Architecture Note:
    Z_n is evaluated with the rewriting machinery of entropyforge.words on a
    D∞ GroupSpec, so the covering identity compares two independent
    computations. The drift estimator runs the walk vectorized over a chunk
    of samples with numpy and never builds Z_n.

See Also:
    entropyforge.walker: the sampler and norm oracle for general Γ
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy import stats

from . import logtools
from .const import (
    CONF_F_GROUP,
    CONF_GENERATORS,
    CONF_H_MODEL,
    CONF_KIND,
    CONF_NAME,
    CONF_PATTERN,
    CONF_SECTIONS,
    CONF_SIZE,
    CONF_STRUCTURE,
    CONF_VALENCY,
    DEFAULT_BALL_BUDGET,
    DEFAULT_SEED,
    SAMPLES_PER_CHUNK,
)
from .exceptions import BallBudgetError, NonAbelianBoundaryError, SpecValidationError
from .finite_groups import FElem, FGroup
from .group_model import DirectedElem, GroupSpec, act_ray, build_group
from .words import (
    AlternateWord,
    DirectedLetter,
    Letter,
    RootedLetter,
    boundary_function,
    canonical_alternate,
    canonical_key,
    is_trivial,
)

_LOGGER = logging.getLogger(__name__)

SWAP = (1, 0)
IDENT = (0, 1)
S_CODE = 1
H_CODE = -1

# ============================================================================
# D∞ ARITHMETIC
# ============================================================================


def dinf_flip(t: int) -> int:
    """+1 for translations (even codes), -1 for reflections (odd codes)."""
    return 1 if t % 2 == 0 else -1


def dinf_mul(a: int, b: int) -> int:
    return dinf_flip(a) * b + a


def dinf_inv(t: int) -> int:
    return -t if t % 2 == 0 else t


def dinf_step(t: int, letter: str) -> int:
    """t·s or t·h: one edge along the Cayley line."""
    return dinf_mul(t, S_CODE if letter == "s" else H_CODE)


def dinf_letters(t: int) -> list[str]:
    """Reduced word of the element with code t."""
    first, second = ("s", "h") if t > 0 else ("h", "s")
    return [first if i % 2 == 0 else second for i in range(abs(t))]


def covering_map(t: int) -> int:
    """Half-line index of 0^∞·w: c(w) = c(hw), injective on words starting with s."""
    return t if t >= 0 else -1 - t


def build_dinf(f_structure: str = "cyclic", f_size: int = 2) -> GroupSpec:
    """The D∞F spec: binary tree, s the root swap, h = (h, s)."""
    return build_group(
        {
            CONF_NAME: "dinf",
            CONF_VALENCY: {CONF_PATTERN: [2]},
            CONF_H_MODEL: {
                CONF_KIND: "portrait",
                CONF_GENERATORS: [{CONF_PATTERN: [{CONF_SECTIONS: [[1, 0]]}]}],
            },
            CONF_F_GROUP: {CONF_STRUCTURE: f_structure, CONF_SIZE: f_size},
        }
    )


def dinf_generator(spec: GroupSpec) -> DirectedElem:
    """The directed generator h of a D∞ spec.

    Raises:
        SpecValidationError: If the spec is not a binary group with |H| = 2
    """
    if spec.d(0) != 2 or spec.valency.d_max != 2 or spec.h.order != 2:
        raise SpecValidationError(
            f"Group '{spec.name}' is not D∞: needs valency 2 and |H| = 2"
        )
    return next(h for h in spec.h.elements() if h != spec.h.identity())


def dinf_word(spec: GroupSpec, t: int) -> AlternateWord:
    """The reduced word of code t as an alternate word of the D∞ spec."""
    h = dinf_generator(spec)
    letters: list[Letter] = [
        RootedLetter(SWAP) if x == "s" else DirectedLetter((h, spec.f.identity))
        for x in dinf_letters(t)
    ]
    return canonical_alternate(spec, letters)


class SchreierHalfLine:
    """Orbit of the spine 0^∞ under D∞, numbered along the path.

    Point k is 0^∞·w for the reduced word w of code k, so index(ray) inverts
    the covering map.
    """

    def __init__(self, spec: GroupSpec) -> None:
        self.spec = spec
        h = dinf_generator(spec)
        self._moves = {
            "s": AlternateWord(0, (SWAP,), ()),
            "h": AlternateWord(0, (IDENT, IDENT), ((h, spec.f.identity),)),
        }
        self._rays: list[tuple[int, ...]] = [()]
        self._index: dict[tuple[int, ...], int] = {(): 0}

    def move(self, ray: Sequence[int], letter: str) -> tuple[int, ...]:
        return act_ray(self.spec, self._moves[letter], ray)[0]

    def ray(self, k: int) -> tuple[int, ...]:
        while len(self._rays) <= k:
            last = len(self._rays) - 1
            nxt = self.move(self._rays[-1], "s" if last % 2 == 0 else "h")
            if nxt in self._index:
                raise SpecValidationError(
                    f"Spine orbit closes at point {len(self._rays)}; "
                    "not a half-line"
                )
            self._index[nxt] = len(self._rays)
            self._rays.append(nxt)
        return self._rays[k]

    def index(self, ray: Sequence[int], limit: int) -> int | None:
        """Index of ``ray`` among the first ``limit`` points, or None."""
        self.ray(limit)
        return self._index.get(tuple(ray))

    def path_failures(self, points: int) -> list[int]:
        """Points whose s and h neighbours are not their path neighbours."""
        self.ray(points + 1)
        failures = []
        for k in range(points):
            ray = self._rays[k]
            seen = {self._index.get(self.move(ray, x)) for x in ("s", "h")}
            expected = {1, 0} if k == 0 else {k - 1, k + 1}
            if seen != expected:
                failures.append(k)
        return failures


# ============================================================================
# LAMPLIGHTER ELEMENTS AND NORMS
# ============================================================================


@dataclass(frozen=True)
class LampElement:
    """An element of F ≀ D∞.

    Attributes:
        lamps: (walker position, lamp value) pairs, sorted, values non-trivial
        position: Code of the base element X_n
    """

    lamps: tuple[tuple[int, FElem], ...]
    position: int

    @classmethod
    def from_mapping(
        cls, f_group: FGroup, lamps: Mapping[int, FElem], position: int
    ) -> LampElement:
        lit = tuple(
            sorted((x, f) for x, f in lamps.items() if not f_group.is_identity(f))
        )
        return cls(lit, position)

    def is_identity(self) -> bool:
        return not self.lamps and self.position == 0

    def lamp_function(self) -> dict[int, FElem]:
        """Φ(y) = lamps[y⁻¹], the lamp function of the semidirect product."""
        return {dinf_inv(x): f for x, f in self.lamps}


def tour_length(lit: Iterable[int], end: int) -> int:
    """Shortest path on Z from 0 through every lit position to ``end``."""
    points = list(lit)
    low = min(points + [0, end])
    high = max(points + [0, end])
    left_first = -low + (high - low) + (high - end)
    right_first = high + (high - low) + (end - low)
    return min(left_first, right_first)


def lamp_norm(element: LampElement) -> int:
    """Word norm over {s, h} ∪ F∖{1}: one switch per lit lamp plus the tour."""
    positions = [x for x, _ in element.lamps]
    return len(positions) + tour_length(positions, element.position)


def bfs_lamp_norms(f_group: FGroup, radius: int) -> dict[LampElement, int]:
    """All elements of norm <= ``radius`` by breadth-first search.

    Right multiplication by s or h moves the walker, by f ∈ F∖{1} multiplies
    the lamp under it.
    """
    switches = [f for f in f_group.elements() if not f_group.is_identity(f)]
    start = LampElement((), 0)
    norms = {start: 0}
    queue = deque([start])
    while queue:
        elem = queue.popleft()
        r = norms[elem]
        if r == radius:
            continue
        lamps = dict(elem.lamps)
        neighbours = [
            LampElement(elem.lamps, dinf_step(elem.position, x)) for x in ("s", "h")
        ]
        for f in switches:
            moved = dict(lamps)
            moved[elem.position] = f_group.mul(
                lamps.get(elem.position, f_group.identity), f
            )
            neighbours.append(LampElement.from_mapping(f_group, moved, elem.position))
        for nxt in neighbours:
            if nxt not in norms:
                norms[nxt] = r + 1
                queue.append(nxt)
    return norms


# ============================================================================
# THE PAIRED WALK
# ============================================================================


@dataclass(frozen=True)
class LampStep:
    """One sampled pair (X̃_n, Z_n).

    Attributes:
        cover: X̃_n in F ≀ D∞
        extended: Z_n as an alternate word of the D∞F spec
    """

    cover: LampElement
    extended: AlternateWord


def _require_abelian(spec: GroupSpec) -> None:
    if not spec.f.is_abelian:
        raise NonAbelianBoundaryError(
            f"The covering identity needs an abelian F; got {spec.f.structure} "
            f"of size {spec.f.size}"
        )


def lamp_walk(spec: GroupSpec, n: int, rng: np.random.Generator) -> LampStep:
    """Sample X̃_n and Z_n from the same letters.

    Raises:
        NonAbelianBoundaryError: If F is not abelian
    """
    _require_abelian(spec)
    h = dinf_generator(spec)
    one_f = spec.f.identity
    f_elems = spec.f.elements()
    position = 0
    lamps: dict[int, FElem] = {}
    letters: list[Letter] = []
    for _ in range(n):
        h1, s1, h2 = (bool(b) for b in rng.integers(2, size=3))
        f = f_elems[int(rng.integers(len(f_elems)))]
        for name, on in (("h", h1), ("s", s1), ("h", h2)):
            if on:
                position = dinf_step(position, name)
        lamps[position] = spec.f.mul(lamps.get(position, one_f), f)
        if h1:
            letters.append(DirectedLetter((h, one_f)))
        if s1:
            letters.append(RootedLetter(SWAP))
        # adjacent directed letters merge into one HF factor
        letters.append(DirectedLetter((h if h2 else spec.h.identity(), f)))
    word = canonical_alternate(spec, letters)
    return LampStep(LampElement.from_mapping(spec.f, lamps, position), word)


def covering_mismatches(
    spec: GroupSpec, step: LampStep, half_line: SchreierHalfLine
) -> list[int | None]:
    """Half-line points where φ_n(x) differs from the sum of Φ_n over c⁻¹(x).

    None stands for a boundary point of φ_n that is not on the explored part
    of the half-line.
    """
    f_group = spec.f
    expected: dict[int, FElem] = {}
    for y, f in step.cover.lamp_function().items():
        x = covering_map(y)
        expected[x] = f_group.mul(expected.get(x, f_group.identity), f)
    expected = {x: f for x, f in expected.items() if not f_group.is_identity(f)}
    limit = max([abs(y) + 1 for y, _ in step.cover.lamps] + [1])
    actual: dict[int, FElem] = {}
    unplaced: list[int | None] = []
    for ray, f in boundary_function(spec, step.extended).items():
        index = half_line.index(ray, limit)
        if index is None:
            unplaced.append(None)
        else:
            actual[index] = f
    points = sorted(set(expected) | set(actual))
    mismatches: list[int | None] = [
        x for x in points if expected.get(x) != actual.get(x)
    ]
    return mismatches + unplaced


@dataclass(frozen=True)
class LampReport:
    """Paired return frequencies and the covering check at one n.

    Attributes:
        n: Walk length
        samples: Sampled trajectories
        mean_norm_cover: Mean of ||X̃_n||
        return_freq_cover: Frequency of X̃_n = 1
        return_freq_extended: Frequency of Z_n = 1
        covering_violations: Samples where the covering identity failed
        lift_violations: Samples with X̃_n = 1 but Z_n ≠ 1
    """

    n: int
    samples: int
    mean_norm_cover: float
    return_freq_cover: float
    return_freq_extended: float
    covering_violations: int
    lift_violations: int


def _chunk_rngs(samples: int, seed: int) -> Iterable[tuple[int, np.random.Generator]]:
    chunks = -(-samples // SAMPLES_PER_CHUNK)
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(chunks)):
        count = min(SAMPLES_PER_CHUNK, samples - i * SAMPLES_PER_CHUNK)
        yield count, np.random.default_rng(child)


def lamp_returns(
    spec: GroupSpec, n: int, samples: int, seed: int = DEFAULT_SEED
) -> LampReport:
    """Sample paired trajectories and check the covering identity on each.

    Raises:
        NonAbelianBoundaryError: If F is not abelian
    """
    half_line = SchreierHalfLine(spec)
    norms = []
    cover_returns = extended_returns = violations = lift_violations = 0
    for count, rng in _chunk_rngs(samples, seed):
        for _ in range(count):
            step = lamp_walk(spec, n, rng)
            norms.append(lamp_norm(step.cover))
            cover_trivial = step.cover.is_identity()
            extended_trivial = is_trivial(spec, step.extended)
            cover_returns += cover_trivial
            extended_returns += extended_trivial
            lift_violations += cover_trivial and not extended_trivial
            violations += bool(covering_mismatches(spec, step, half_line))
    if violations or lift_violations:
        _LOGGER.warning(
            "Lamplighter n=%s: %s covering and %s lift violations",
            n,
            violations,
            lift_violations,
        )
    logtools.count("lamp_samples", samples)
    return LampReport(
        n=n,
        samples=samples,
        mean_norm_cover=float(np.mean(norms)),
        return_freq_cover=cover_returns / samples,
        return_freq_extended=extended_returns / samples,
        covering_violations=violations,
        lift_violations=lift_violations,
    )


# ============================================================================
# NORM COMPARISON
# ============================================================================


def extended_norms(
    spec: GroupSpec, radius: int, budget: int = DEFAULT_BALL_BUDGET
) -> dict[str, int]:
    """Ball of D∞F over {s, h} ∪ F∖{1}, keyed by canonical-key digest.

    Raises:
        BallBudgetError: If the ball holds more than ``budget`` elements
    """
    h = dinf_generator(spec)
    one_h = spec.h.identity()
    gens = [
        AlternateWord(0, (SWAP,), ()),
        AlternateWord(0, (IDENT, IDENT), ((h, spec.f.identity),)),
    ] + [
        AlternateWord(0, (IDENT, IDENT), ((one_h, f),))
        for f in spec.f.elements()
        if not spec.f.is_identity(f)
    ]
    memo: dict[tuple[Any, ...], Any] = {}
    start = AlternateWord.empty(spec)
    norms = {canonical_key(spec, start, memo=memo).digest: 0}
    frontier = [start]
    for r in range(1, radius + 1):
        nxt = []
        for word in frontier:
            for g in gens:
                w = word.then(g)
                digest = canonical_key(spec, w, memo=memo).digest
                if digest in norms:
                    continue
                norms[digest] = r
                nxt.append(w)
        if len(norms) > budget:
            raise BallBudgetError(
                f"Ball of radius {r} exceeds {budget} elements", budget=budget, n=r
            )
        frontier = nxt
    return norms


@dataclass(frozen=True)
class NormComparison:
    """Both inequality directions between ||X̃_n|| and ||Z_n|| on paired samples.

    Attributes:
        n: Walk length
        samples: Sampled trajectories
        cover_le_extended: Samples with ||X̃_n|| <= ||Z_n||
        extended_le_cover: Samples with ||Z_n|| <= ||X̃_n||
        censored: Samples with Z_n outside the explored ball
    """

    n: int
    samples: int
    cover_le_extended: int
    extended_le_cover: int
    censored: int


def norm_comparison(
    spec: GroupSpec, n: int, samples: int, radius: int, seed: int = DEFAULT_SEED
) -> NormComparison:
    """Compare the norm of X̃_n with the norm of its image Z_n."""
    ball = extended_norms(spec, radius)
    le = ge = censored = 0
    for count, rng in _chunk_rngs(samples, seed):
        for _ in range(count):
            step = lamp_walk(spec, n, rng)
            z = ball.get(canonical_key(spec, step.extended).digest)
            if z is None:
                censored += 1
                continue
            x = lamp_norm(step.cover)
            le += x <= z
            ge += z <= x
    return NormComparison(n, samples, le, ge, censored)


# ============================================================================
# DRIFT
# ============================================================================


def _walk_chunk(
    table: np.ndarray, n: int, count: int, rng: np.random.Generator
) -> np.ndarray:
    """Norms of ``count`` independent X̃_n, vectorized over the samples.

    ``table`` is the multiplication table of F on element indices; index 0
    is the identity.
    """
    width = 6 * n + 1
    lamps = np.zeros((count, width), dtype=np.int16)
    rows = np.arange(count)
    position = np.zeros(count, dtype=np.int64)
    for _ in range(n):
        bits = rng.integers(2, size=(3, count))
        f = rng.integers(table.shape[0], size=count)
        for letter, on in zip((H_CODE, S_CODE, H_CODE), bits):
            even = position % 2 == 0
            delta = np.where(even, letter, -letter)
            position += np.where(on == 1, delta, 0)
        cell = position + 3 * n
        lamps[rows, cell] = table[lamps[rows, cell], f]
    norms = np.empty(count, dtype=np.int64)
    for i in range(count):
        lit = np.flatnonzero(lamps[i]) - 3 * n
        norms[i] = len(lit) + tour_length(lit.tolist(), int(position[i]))
    return norms


def _f_table(f_group: FGroup) -> np.ndarray:
    elems = list(f_group.elements())
    elems.remove(f_group.identity)
    elems.insert(0, f_group.identity)
    index = {f: i for i, f in enumerate(elems)}
    return np.array(
        [[index[f_group.mul(a, b)] for b in elems] for a in elems], dtype=np.int16
    )


@dataclass(frozen=True)
class LampDrift:
    """Mean norms of X̃_n over a grid of n and their log-log slope."""

    ns: tuple[int, ...]
    mean_norms: tuple[float, ...]
    slope: float
    stderr: float


def lamp_drift(
    f_group: FGroup, ns: Sequence[int], samples: int, seed: int = DEFAULT_SEED
) -> LampDrift:
    """E||X̃_n|| for each n and the regression slope of its logarithm on log n.

    Raises:
        NonAbelianBoundaryError: If F is not abelian
        ValueError: If fewer than two lengths are given
    """
    if not f_group.is_abelian:
        raise NonAbelianBoundaryError("Lamp drift needs an abelian F")
    if len(ns) < 2:
        raise ValueError("A drift slope needs at least two lengths")
    table = _f_table(f_group)
    means = []
    for j, n in enumerate(ns):
        parts = [
            _walk_chunk(table, n, count, rng)
            for count, rng in _chunk_rngs(samples, seed + j)
        ]
        means.append(float(np.concatenate(parts).mean()))
        _LOGGER.debug("lamp drift n=%s mean=%.3f", n, means[-1])
    fit = stats.linregress(np.log(ns), np.log(means))
    return LampDrift(tuple(ns), tuple(means), float(fit.slope), float(fit.stderr))
