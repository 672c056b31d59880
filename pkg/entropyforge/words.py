"""Alternate words and the wreath rewriting process.

An alternate word at level l is s_1 k_1 s_2 ... k_n s_{n+1} with s_i rooted
permutations of degree d_l and k_i = (h_i, f_i) directed-times-boundary
letters. Identity letters are kept: 1_S and 1_HF are distinct word letters,
and the length n counts k-letters, identities included.

Rewriting sends a word to its d_l child words at level l + 1 and a root
permutation, following g(ty) = σ(t) g_t(y):

    σ_j = s_1 ρ(k_1) s_2 ... ρ(k_{j-1}) s_j
    child t receives k_j (restricted to level l + 1)  when σ_j(t) = 0
    child t receives section u of k_j                when σ_j(t) = u <= c_l

Consecutive letters of one kind merge, so every parent k-letter feeds
exactly one child k-letter. Iterating until every word has length <= 1
gives the minimal tree; its length-1 leaves are the active leaves.

Decision procedures:
    is_trivial     Memoized recursion on (level class, word). Length strictly
                   decreases for words of length >= 2 and length <= 1 words
                   are decided from the finite group H, so no cycles occur.
    canonical_key  Maximally contracted portrait. Leaves are R(σ) (rooted),
                   K(h, f) (directed with boundary label); inner nodes are
                   N(σ, children). R is preferred over K, so equal elements
                   get equal keys.

Architecture Note:
    Words are immutable tuples and all procedures are pure functions of
    (spec, word). Memo tables are per call unless the caller passes one in,
    which gives identical answers either way.
"""

from __future__ import annotations

import hashlib
import itertools
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any, Union

import numpy as np

from . import perms
from .const import DEFAULT_STATE_BUDGET
from .exceptions import WordProblemBudgetError
from .finite_groups import FElem
from .group_model import (
    GroupSpec,
    HFElem,
    LevelEntry,
    act_ray,
    act_vertex,
    iter_letters,
    step_ray,
    strip_ray,
)
from .perms import Perm

_LOGGER = logging.getLogger(__name__)

Vertex = tuple[int, ...]
Ray = tuple[int, ...]
# Canonical keys: ("R", σ) | ("K", h, f) | ("N", σ, children)
Key = tuple[Any, ...]


@dataclass(frozen=True)
class RootedLetter:
    """A generator from S."""

    perm: Perm


@dataclass(frozen=True)
class DirectedLetter:
    """A generator from HF."""

    hf: HFElem


Letter = Union[RootedLetter, DirectedLetter]


@dataclass(frozen=True)
class AlternateWord:
    """s_1 k_1 s_2 ... k_n s_{n+1} at a given level.

    Attributes:
        level: Level l of the group Γ_l the word lives in
        s: Rooted factors s_1..s_{n+1}
        k: Directed-times-boundary factors k_1..k_n
    """

    level: int
    s: tuple[Perm, ...]
    k: tuple[HFElem, ...]

    def __post_init__(self) -> None:
        if len(self.s) != len(self.k) + 1:
            raise ValueError(
                f"Alternate word needs n+1 rooted factors for n={len(self.k)}, "
                f"got {len(self.s)}"
            )

    @property
    def length(self) -> int:
        return len(self.k)

    @classmethod
    def empty(cls, spec: GroupSpec, level: int = 0) -> AlternateWord:
        return cls(level, (perms.identity(spec.d(level)),), ())

    def letters(self) -> list[Letter]:
        out: list[Letter] = []
        for j, hf in enumerate(self.k):
            out.append(RootedLetter(self.s[j]))
            out.append(DirectedLetter(hf))
        out.append(RootedLetter(self.s[-1]))
        return out

    def inverse(self, spec: GroupSpec) -> AlternateWord:
        return AlternateWord(
            self.level,
            tuple(perms.inverse(s) for s in reversed(self.s)),
            tuple(spec.hf_inv(k) for k in reversed(self.k)),
        )

    def then(self, other: AlternateWord) -> AlternateWord:
        """Concatenation, merging the two rooted factors that meet."""
        middle = perms.compose(self.s[-1], other.s[0])
        return AlternateWord(
            self.level, self.s[:-1] + (middle,) + other.s[1:], self.k + other.k
        )

    def prefix(self, j: int) -> AlternateWord:
        """g_j = s_1 k_1 ... s_j, for 1 <= j <= n + 1."""
        return AlternateWord(self.level, self.s[:j], self.k[: j - 1])

    def strip_boundary(self, spec: GroupSpec) -> AlternateWord:
        """The same word with every f_i replaced by 1_F."""
        one = spec.f.identity
        return AlternateWord(self.level, self.s, tuple((h, one) for h, _ in self.k))


# ============================================================================
# MERGING
# ============================================================================


def _merge_runs(
    spec: GroupSpec, level: int, tokens: Iterable[tuple[str, Any, int]]
) -> tuple[AlternateWord, tuple[tuple[int, ...], ...]]:
    """Merge S/K tokens into an alternate word; track K-token sources.

    Tokens are (tag, value, source); source is -1 for S tokens.
    """
    runs: list[list[Any]] = []
    for tag, value, src in tokens:
        if runs and runs[-1][0] == tag:
            run = runs[-1]
            if tag == "S":
                run[1] = perms.compose(run[1], value)
            else:
                run[1] = spec.hf_mul(run[1], value)
                run[2].append(src)
        else:
            runs.append([tag, value, [src] if tag == "K" else []])
    ident = perms.identity(spec.d(level))
    s_out: list[Perm] = []
    k_out: list[HFElem] = []
    sources: list[tuple[int, ...]] = []
    if not runs or runs[0][0] == "K":
        s_out.append(ident)
    for tag, value, srcs in runs:
        if tag == "S":
            s_out.append(value)
        else:
            k_out.append(value)
            sources.append(tuple(srcs))
    if runs and runs[-1][0] == "K":
        s_out.append(ident)
    return AlternateWord(level, tuple(s_out), tuple(k_out)), tuple(sources)


def canonical_alternate(
    spec: GroupSpec, letters: Sequence[Letter], level: int = 0
) -> AlternateWord:
    """Canonical alternate form: merge runs, pad the ends with 1_S.

    Identity letters survive as factors, so s·k·k⁻¹·s' has length 1.
    """
    tokens = (
        ("S", x.perm, -1) if isinstance(x, RootedLetter) else ("K", x.hf, i)
        for i, x in enumerate(letters)
    )
    word, _ = _merge_runs(spec, level, tokens)
    return word


# ============================================================================
# REWRITING
# ============================================================================


@dataclass(frozen=True)
class RewriteResult:
    """One rewriting step.

    Attributes:
        children: Child words, one per child t of the root
        root: Root permutation s_1 ρ(k_1) s_2 ... s_{n+1}
        sources: Per child, per child k-factor, the parent factor indices
    """

    children: tuple[AlternateWord, ...]
    root: Perm
    sources: tuple[tuple[tuple[int, ...], ...], ...]


def rewrite_step(spec: GroupSpec, word: AlternateWord) -> RewriteResult:
    """Decompose a word into child words and a root permutation."""
    level = word.level
    d = spec.d(level)
    c = spec.c(level)
    child_level = level + 1
    tokens: list[list[tuple[str, Any, int]]] = [[] for _ in range(d)]
    sigma = word.s[0]
    for j, (h, f) in enumerate(word.k):
        entry = spec.entry(h, level)
        child_hf = (spec.h.restrict(h, child_level), f)
        for t in range(d):
            u = sigma[t]
            if u == 0:
                tokens[t].append(("K", child_hf, j))
            elif u <= c:
                tokens[t].append(("S", entry.sections[u - 1], -1))
        sigma = perms.compose(perms.compose(sigma, entry.root), word.s[j + 1])
    children = []
    sources = []
    for t in range(d):
        child, srcs = _merge_runs(spec, child_level, tokens[t])
        children.append(child)
        sources.append(srcs)
    n = word.length
    assert sum(ch.length for ch in children) <= n
    assert all(2 * ch.length <= n + 1 for ch in children)
    return RewriteResult(tuple(children), sigma, tuple(sources))


@dataclass
class WordTree:
    """Rewritten words at every vertex of the minimal tree.

    Attributes:
        level: Level of the root word
        words: Vertex path -> rewritten word
        roots: Internal vertex -> root permutation
        sources: Non-root vertex -> parent factor indices per k-factor
    """

    level: int
    words: dict[Vertex, AlternateWord] = field(default_factory=dict)
    roots: dict[Vertex, Perm] = field(default_factory=dict)
    sources: dict[Vertex, tuple[tuple[int, ...], ...]] = field(default_factory=dict)

    @property
    def depth(self) -> int:
        return max(len(v) for v in self.words)

    def leaves(self) -> list[Vertex]:
        return [v for v in self.words if v not in self.roots]

    def active_leaves(self) -> list[Vertex]:
        return [v for v in self.leaves() if self.words[v].length == 1]

    def level_lengths(self, depth: int) -> int:
        """Sum of word lengths over vertices at one depth."""
        return sum(w.length for v, w in self.words.items() if len(v) == depth)


def rewrite_full(spec: GroupSpec, word: AlternateWord) -> WordTree:
    """Iterate rewriting until every leaf word has length <= 1."""
    tree = WordTree(level=word.level)
    tree.words[()] = word
    stack: list[Vertex] = [()]
    while stack:
        v = stack.pop()
        w = tree.words[v]
        if w.length <= 1:
            continue
        result = rewrite_step(spec, w)
        tree.roots[v] = result.root
        for t, child in enumerate(result.children):
            u = v + (t,)
            tree.words[u] = child
            tree.sources[u] = result.sources[t]
            stack.append(u)
    return tree


@dataclass(frozen=True)
class MinimalTree:
    """Minimal regular subtree with its leaf classification.

    Attributes:
        internal: Internal vertex -> root permutation σ_u
        active: Leaves whose word has length 1
        inactive: Leaves whose word has length 0
    """

    internal: dict[Vertex, Perm]
    active: tuple[Vertex, ...]
    inactive: tuple[Vertex, ...]

    @property
    def depth(self) -> int:
        return max((len(v) for v in self.active + self.inactive), default=0)


def minimal_tree(spec: GroupSpec, word: AlternateWord) -> MinimalTree:
    tree = rewrite_full(spec, word)
    leaves = sorted(tree.leaves())
    return MinimalTree(
        internal=dict(sorted(tree.roots.items())),
        active=tuple(v for v in leaves if tree.words[v].length == 1),
        inactive=tuple(v for v in leaves if tree.words[v].length == 0),
    )


def activity(spec: GroupSpec, word: AlternateWord) -> int:
    """Number of active leaves a(w)."""
    return len(rewrite_full(spec, word).active_leaves())


def _active_point(v: Vertex, leaf: AlternateWord) -> Ray:
    return strip_ray(v + (perms.inverse(leaf.s[0])[0],))


def _boundary_points(tree: WordTree) -> set[Ray]:
    return {_active_point(v, tree.words[v]) for v in tree.active_leaves()}


def active_boundary(spec: GroupSpec, word: AlternateWord) -> set[Ray]:
    """Boundary points v·s_1^{-1}(0)·0^∞ of the active leaves."""
    return _boundary_points(rewrite_full(spec, word))


def orbit_members(spec: GroupSpec, word: AlternateWord) -> dict[Ray, list[int]]:
    """Map each point 0^∞·g_j^{-1} to the factor indices j - 1 that land on it.

    g_j = s_1 k_1 ... s_j and g_j^{-1} = s_j^{-1} k_{j-1}^{-1} ... s_1^{-1}
    shares its tail with every shorter prefix, so one sweep from j = n down
    to 1 moves all started points together. A start that lands on a live
    point joins it, so the live map never holds more points than the orbit.
    """
    level = word.level
    live: dict[Ray, list[int]] = {}
    for j in range(word.length, 0, -1):
        live.setdefault((), []).append(j - 1)
        moves: list[tuple[str, Any]] = [("S", perms.inverse(word.s[j - 1]))]
        if j > 1:
            moves.append(("K", spec.hf_inv(word.k[j - 2])))
        for tag, letter in moves:
            moved: dict[Ray, list[int]] = {}
            for point, members in live.items():
                image = step_ray(spec, level, tag, letter, point)[0]
                other = moved.get(image)
                if other is None:
                    moved[image] = members
                elif len(other) >= len(members):
                    other.extend(members)
                else:
                    members.extend(other)
                    moved[image] = members
            live = moved
    return live


def inverted_orbit(spec: GroupSpec, word: AlternateWord) -> set[Ray]:
    """Points 0^∞·g_j^{-1} with g_j = s_1 k_1 ... s_j, for j = 1..n."""
    return set(orbit_members(spec, word))


def orbit_labels(spec: GroupSpec, word: AlternateWord) -> dict[Ray, FElem]:
    """Boundary label at every orbit point: the ordered product of the f_j
    of the factors k_j met while the moving point sits on the spine."""
    out = {}
    for point, members in orbit_members(spec, word).items():
        label = spec.f.identity
        for j in sorted(members):
            label = spec.f.mul(label, word.k[j][1])
        out[point] = label
    return out


def inverted_orbit_naive(spec: GroupSpec, word: AlternateWord) -> set[Ray]:
    """Same set, one full inverse prefix per point."""
    points = set()
    for j in range(1, word.length + 1):
        point, _ = act_ray(spec, word.prefix(j).inverse(spec), ())
        points.add(point)
    return points


# ============================================================================
# ASCENDANCE FOREST AND BOUNDARY
# ============================================================================

ForestNode = tuple[Vertex, int]


@dataclass(frozen=True)
class AscendanceForest:
    """k-factors of all rewritten words, each linked to the factor it feeds.

    Attributes:
        nodes: (vertex, factor index) for every k-factor in the tree
        edges: (parent node, child node) pairs
        component: Node -> index of its component
        roots: Leaf factors, one per component, in component order
    """

    nodes: tuple[ForestNode, ...]
    edges: tuple[tuple[ForestNode, ForestNode], ...]
    component: dict[ForestNode, int]
    roots: tuple[ForestNode, ...]

    @property
    def component_count(self) -> int:
        return len(self.roots)

    def is_forest(self) -> bool:
        """Each node feeds at most one node and edges go one level down."""
        targets: dict[ForestNode, ForestNode] = {}
        for a, b in self.edges:
            if a in targets or len(b[0]) != len(a[0]) + 1:
                return False
            targets[a] = b
        return len(self.nodes) - len(self.edges) == self.component_count

    def members(self, index: int) -> list[ForestNode]:
        return sorted(n for n, c in self.component.items() if c == index)


def ascendance_forest(spec: GroupSpec, word: AlternateWord) -> AscendanceForest:
    return _forest_of(rewrite_full(spec, word))


def _forest_of(tree: WordTree) -> AscendanceForest:
    nodes = sorted(
        (v, i) for v, w in tree.words.items() for i in range(w.length)
    )
    feeds: dict[ForestNode, ForestNode] = {}
    for u, srcs in tree.sources.items():
        parent = u[:-1]
        for i, parent_idxs in enumerate(srcs):
            for j in parent_idxs:
                feeds[(parent, j)] = (u, i)
    roots = tuple(sorted(n for n in nodes if n not in feeds))
    root_index = {r: i for i, r in enumerate(roots)}
    component: dict[ForestNode, int] = {}
    for node in nodes:
        cur = node
        while cur in feeds:
            cur = feeds[cur]
        component[node] = root_index[cur]
    edges = tuple(sorted(feeds.items()))
    return AscendanceForest(tuple(nodes), edges, component, roots)


def boundary_function(spec: GroupSpec, word: AlternateWord) -> dict[Ray, FElem]:
    """Nontrivial boundary labels {active point -> f}.

    The label of an active leaf is the ordered product of the f_j of the
    top-level factors in its forest component; merging builds exactly that
    product on the way down.
    """
    tree = rewrite_full(spec, word)
    out: dict[Ray, FElem] = {}
    for v in tree.active_leaves():
        leaf = tree.words[v]
        f = leaf.k[0][1]
        if not spec.f.is_identity(f):
            out[_active_point(v, leaf)] = f
    return out


@dataclass(frozen=True)
class ActivityReport:
    """Four independent counts of a(w); they agree on every valid word."""

    leaves: int
    boundary_points: int
    components: int
    inverted_orbit: int

    @property
    def consistent(self) -> bool:
        return (
            self.leaves
            == self.boundary_points
            == self.components
            == self.inverted_orbit
        )


def activity_report(spec: GroupSpec, word: AlternateWord) -> ActivityReport:
    tree = rewrite_full(spec, word)
    report = ActivityReport(
        leaves=len(tree.active_leaves()),
        boundary_points=len(_boundary_points(tree)),
        components=_forest_of(tree).component_count,
        inverted_orbit=len(inverted_orbit(spec, word)),
    )
    if not report.consistent:
        _LOGGER.warning("Activity counts disagree: %s", report)
    return report


# ============================================================================
# DECISION PROCEDURES
# ============================================================================


class StateBudget:
    """Counts visited states of a decision procedure and enforces a cap."""

    def __init__(self, limit: int, n: int) -> None:
        self.limit = limit
        self.n = n
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise WordProblemBudgetError(
                f"Word problem for n={self.n} needs more than {self.limit} states",
                budget=self.limit,
                n=self.n,
            )


def _memo_key(spec: GroupSpec, word: AlternateWord) -> tuple[Any, ...]:
    return (spec.level_class(word.level), word.s, word.k)


def is_trivial_short(spec: GroupSpec, word: AlternateWord) -> bool:
    """Triviality of a word of length <= 1, read off the finite group H."""
    if word.length == 0:
        return perms.is_identity(word.s[0])
    h, f = word.k[0]
    root = spec.entry(h, word.level).root
    return (
        spec.f.is_identity(f)
        and spec.h.is_rooted_at(h, word.level)
        and perms.is_identity(perms.compose(perms.compose(word.s[0], root), word.s[1]))
    )


def is_trivial(
    spec: GroupSpec,
    word: AlternateWord,
    budget: int = DEFAULT_STATE_BUDGET,
    memo: dict[tuple[Any, ...], bool] | None = None,
) -> bool:
    """Decide whether a word represents the identity of Γ(S, HF).

    Raises:
        WordProblemBudgetError: If more than ``budget`` states are visited
    """
    states = {} if memo is None else memo
    return _trivial(spec, word, states, StateBudget(budget, word.length))


def _trivial(
    spec: GroupSpec,
    word: AlternateWord,
    memo: dict[tuple[Any, ...], bool],
    budget: StateBudget,
) -> bool:
    key = _memo_key(spec, word)
    cached = memo.get(key)
    if cached is not None:
        return cached
    budget.tick()
    if word.length <= 1:
        result = is_trivial_short(spec, word)
    else:
        step = rewrite_step(spec, word)
        result = perms.is_identity(step.root) and all(
            _trivial(spec, child, memo, budget) for child in step.children
        )
    memo[key] = result
    return result


@dataclass(frozen=True)
class CanonicalForm:
    """Equality-decidable normal form of a group element.

    Attributes:
        key: Contracted portrait ("R", σ) | ("K", h, f) | ("N", σ, children)
        boundary: Sorted (ray, f) pairs of the K-leaves with f != 1
    """

    key: Key
    boundary: tuple[tuple[Ray, FElem], ...]

    @property
    def digest(self) -> str:
        return hashlib.sha256(repr(self.key).encode("utf-8")).hexdigest()[:16]

    @property
    def node_count(self) -> int:
        return _count_nodes(self.key)

    def is_identity(self) -> bool:
        return self.key[0] == "R" and perms.is_identity(self.key[1])


def _count_nodes(key: Key) -> int:
    if key[0] == "N":
        return 1 + sum(_count_nodes(c) for c in key[2])
    return 1


def _contract(
    spec: GroupSpec, level: int, sigma: Perm, children: tuple[Key, ...]
) -> Key:
    ident_next = perms.identity(spec.d(level + 1))
    if all(c[0] == "R" and c[1] == ident_next for c in children):
        return ("R", sigma)
    if sigma[0] == 0 and all(c[0] == "R" for c in children[1:]):
        head = children[0]
        h_child = None
        f = spec.f.identity
        if head[0] == "K":
            h_child, f = head[1], head[2]
        elif head[0] == "R":
            h_child = spec.h.from_rooted(head[1], level + 1)
        if h_child is not None:
            entry = LevelEntry(tuple(c[1] for c in children[1:]), sigma)
            h = spec.h.extend(h_child, level, entry)
            if h is not None:
                return ("K", h, f)
    return ("N", sigma, children)


def _key(
    spec: GroupSpec,
    word: AlternateWord,
    memo: dict[tuple[Any, ...], Key],
    budget: StateBudget,
) -> Key:
    mk = _memo_key(spec, word)
    cached = memo.get(mk)
    if cached is not None:
        return cached
    budget.tick()
    level = word.level
    if word.length == 0:
        key: Key = ("R", word.s[0])
    elif (
        word.length == 1
        and perms.is_identity(word.s[0])
        and perms.is_identity(word.s[1])
    ):
        h, f = word.k[0]
        if spec.f.is_identity(f) and spec.h.is_rooted_at(h, level):
            key = ("R", spec.entry(h, level).root)
        else:
            key = ("K", spec.h.restrict(h, level), f)
    else:
        step = rewrite_step(spec, word)
        children = tuple(_key(spec, ch, memo, budget) for ch in step.children)
        key = _contract(spec, level, step.root, children)
    memo[mk] = key
    return key


def _boundary_of_key(
    key: Key, path: Vertex, out: list[tuple[Ray, FElem]], spec: GroupSpec
) -> None:
    if key[0] == "K":
        if not spec.f.is_identity(key[2]):
            out.append((strip_ray(path), key[2]))
    elif key[0] == "N":
        for t, child in enumerate(key[2]):
            _boundary_of_key(child, path + (t,), out, spec)


def canonical_key(
    spec: GroupSpec,
    word: AlternateWord,
    budget: int = DEFAULT_STATE_BUDGET,
    memo: dict[tuple[Any, ...], Key] | None = None,
) -> CanonicalForm:
    """Canonical form of the element represented by ``word``.

    Raises:
        WordProblemBudgetError: If more than ``budget`` states are visited
    """
    states = {} if memo is None else memo
    key = _key(spec, word, states, StateBudget(budget, word.length))
    boundary: list[tuple[Ray, FElem]] = []
    _boundary_of_key(key, (), boundary, spec)
    return CanonicalForm(key, tuple(sorted(boundary, key=lambda item: item[0])))


# ============================================================================
# TRUNCATED-ACTION ORACLE AND DUMPS
# ============================================================================


def oracle_depth(spec: GroupSpec, n: int) -> int:
    """Depth at which the truncated action separates words of length n."""
    return math.ceil(math.log2(2 * n + 1)) + spec.classes.count + 2


def _letter_map(
    spec: GroupSpec, word: AlternateWord, depth: int
) -> np.ndarray:
    """Image index of every depth-``depth`` vertex under a one-letter word."""
    ranges = [range(spec.d(word.level + i)) for i in range(depth)]
    shape = tuple(len(r) for r in ranges)
    images = [act_vertex(spec, word, v) for v in itertools.product(*ranges)]
    if not images or not images[0]:
        return np.zeros(len(images), dtype=np.int64)
    return np.ravel_multi_index(tuple(np.array(images).T), shape)


def truncated_signature(
    spec: GroupSpec,
    word: AlternateWord,
    depth: int,
    letter_maps: dict[Any, np.ndarray] | None = None,
) -> tuple[bytes, tuple[tuple[Ray, FElem], ...]]:
    """Brute-force action of ``word`` cut at ``depth``.

    The first part lists the image of every depth-``depth`` vertex, composed
    from one vertex map per letter. The second lists the nontrivial boundary
    labels at rays u·0^∞ with |u| <= depth: u·g_j sits on the spine exactly
    when u = 0^∞·g_j^{-1}, so the labels are read off the inverted orbit.

    Args:
        letter_maps: Cache of per-letter vertex maps, shared between calls
            with the same spec, level and depth
    """
    maps = {} if letter_maps is None else letter_maps
    ident_s = perms.identity(spec.d(word.level))
    images = np.arange(math.prod(spec.d(word.level + i) for i in range(depth)))
    for tag, letter in iter_letters(word):
        key = (word.level, depth, tag, letter)
        table = maps.get(key)
        if table is None:
            if tag == "S":
                single = AlternateWord(word.level, (letter,), ())
            else:
                single = AlternateWord(word.level, (ident_s, ident_s), (letter,))
            table = _letter_map(spec, single, depth)
            maps[key] = table
        images = table[images]
    labels = tuple(
        sorted(
            (u, f)
            for u, f in orbit_labels(spec, word).items()
            if len(u) <= depth and not spec.f.is_identity(f)
        )
    )
    return images.tobytes(), labels


def _jsonable(value: Any) -> Any:
    if isinstance(value, LevelEntry):
        return {"sections": _jsonable(value.sections), "root": list(value.root)}
    if isinstance(value, (tuple, list)):
        return [_jsonable(v) for v in value]
    return value


def word_to_json(word: AlternateWord) -> dict[str, Any]:
    return {
        "level": word.level,
        "length": word.length,
        "s": [list(s) for s in word.s],
        "k": [{"h": _jsonable(h), "f": _jsonable(f)} for h, f in word.k],
    }


def dump_word_tree(tree: WordTree) -> dict[str, Any]:
    """JSON-ready dump of a WordTree (schema in docs/wordtree_dump.md)."""
    return {
        "level": tree.level,
        "depth": tree.depth,
        "vertices": [
            {
                "path": list(v),
                "word": word_to_json(w),
                "root": list(tree.roots[v]) if v in tree.roots else None,
                "sources": [list(s) for s in tree.sources.get(v, ())],
            }
            for v, w in sorted(tree.words.items())
        ],
    }


def dump_minimal_tree(tree: MinimalTree) -> dict[str, Any]:
    return {
        "depth": tree.depth,
        "internal": [
            {"path": list(v), "perm": list(p)} for v, p in tree.internal.items()
        ],
        "active": [list(v) for v in tree.active],
        "inactive": [list(v) for v in tree.inactive],
    }


def dump_canonical(form: CanonicalForm) -> dict[str, Any]:
    return {
        "digest": form.digest,
        "nodes": form.node_count,
        "key": _jsonable(form.key),
        "boundary": [{"ray": list(r), "f": _jsonable(f)} for r, f in form.boundary],
    }
