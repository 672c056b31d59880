"""Level-batched rewriting on integer-coded letters.

The Monte Carlo estimators only need a few numbers per sampled word: the
activity, the support of the boundary function, the root child lengths and
whether some shallow vertex has an unusually short child. This module gets
them without building AlternateWord objects or source maps.

Letters are coded as small integers: rooted permutations by their position
in a compose-closed set per degree, directed elements by their position in
the set of all restrictions of H, boundary elements by their position in F.
All words at one tree depth share a level, so a rewriting step is a handful
of numpy gathers over every word of the batch at once:

    σ_j            segmented prefix products of s_1, ρ(k_1)s_2, ...
    child tokens   σ_j(t) == 0 gives K(restricted h, f); 1..c_l gives a section
    merging        segmented products over runs of equal token kind

Architecture Note:
    A kernel is built once per spec and process. Specs whose H, F or rooted
    groups are too large to tabulate get None from :meth:`RewriteKernel.build`
    and the estimators fall back to :func:`entropyforge.words.rewrite_full`.
    Both paths return the same numbers for the same word.

See Also:
    entropyforge.words: the reference rewriting on AlternateWord
    entropyforge.walker: the estimators that call :meth:`RewriteKernel.metrics`
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from . import perms
from .const import KERNEL_BATCH_LETTERS, KERNEL_TABLE_CAP
from .exceptions import SpecValidationError
from .finite_groups import FElem
from .group_model import DirectedElem, GroupSpec
from .perms import Perm
from .words import AlternateWord

_LOGGER = logging.getLogger(__name__)

_INDEX = np.int32


# ============================================================================
# CODED TABLES
# ============================================================================


@dataclass(frozen=True)
class _PermTable:
    """A compose-closed set of permutations of one degree."""

    index: dict[Perm, int]
    compose: np.ndarray  # compose[a, b] = index of perms.compose(a, b)
    apply: np.ndarray  # apply[a, t] = a[t]
    identity: int


@dataclass(frozen=True)
class _LevelTable:
    """Entries of every coded directed element at one level class."""

    root: np.ndarray  # perm index (degree d_l)
    sections: np.ndarray  # shape (|H|, c_l), perm index (degree d_{l+1})
    child: np.ndarray  # directed index of the restriction to level l + 1


def _segmented_scan(
    values: np.ndarray, starts: np.ndarray, table: np.ndarray
) -> np.ndarray:
    """Inclusive prefix products table[prev, cur] inside each segment.

    ``starts[i]`` is the position where the segment holding i begins.
    """
    out = values.copy()
    if len(out) == 0:
        return out
    pos = np.arange(len(out))
    longest = int((pos - starts).max()) + 1
    shift = 1
    while shift < longest:
        src = pos - shift
        ok = src >= starts
        new = out.copy()
        new[ok] = table[out[src[ok]], out[ok]]
        out = new
        shift *= 2
    return out


def _segment_starts(ids: np.ndarray) -> np.ndarray:
    """Start position of the run of equal ``ids`` holding each position."""
    if len(ids) == 0:
        return np.zeros(0, dtype=np.int64)
    head = np.empty(len(ids), dtype=bool)
    head[0] = True
    head[1:] = ids[1:] != ids[:-1]
    return np.maximum.accumulate(np.where(head, np.arange(len(ids)), 0))


def _closure(seeds: Sequence[Perm], cap: int) -> list[Perm] | None:
    found: dict[Perm, None] = dict.fromkeys(seeds)
    if len(found) > cap:
        return None
    queue = list(found)
    while queue:
        a = queue.pop()
        for b in list(found):
            for c in (perms.compose(a, b), perms.compose(b, a)):
                if c not in found:
                    if len(found) >= cap:
                        return None
                    found[c] = None
                    queue.append(c)
    return sorted(found)


def _perm_table(elems: list[Perm]) -> _PermTable:
    index = {p: i for i, p in enumerate(elems)}
    size = len(elems)
    compose = np.empty((size, size), dtype=_INDEX)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            compose[i, j] = index[perms.compose(a, b)]
    apply = np.array(elems, dtype=_INDEX)
    degree = len(elems[0])
    return _PermTable(index, compose, apply, index[perms.identity(degree)])


# ============================================================================
# KERNEL
# ============================================================================


@dataclass(frozen=True)
class KernelMetrics:
    """Per-word results of :meth:`RewriteKernel.metrics`, in input order."""

    activity: np.ndarray
    support: np.ndarray
    small_activity: np.ndarray
    child_lengths: tuple[tuple[int, ...], ...]


@dataclass
class _Batch:
    """Words of one depth. K letters of word w sit at koff[w]:koff[w+1]."""

    sample: np.ndarray
    koff: np.ndarray
    s: np.ndarray
    h: np.ndarray
    f: np.ndarray

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.koff)


class RewriteKernel:
    """Coded rewriting for one spec; see the module docstring."""

    def __init__(
        self,
        spec: GroupSpec,
        h_elems: Sequence[DirectedElem],
        f_elems: Sequence[FElem],
        perm_tables: dict[int, _PermTable],
        levels: dict[int, _LevelTable],
    ) -> None:
        self.spec = spec
        self._h_index = {h: i for i, h in enumerate(h_elems)}
        self._f_index = {f: i for i, f in enumerate(f_elems)}
        self._f_identity = self._f_index[spec.f.identity]
        self._perms = perm_tables
        self._levels = levels
        self._h_mul = np.full((len(h_elems), len(h_elems)), -1, dtype=_INDEX)
        for i, a in enumerate(h_elems):
            for j, b in enumerate(h_elems):
                self._h_mul[i, j] = self._h_index.get(spec.h.mul(a, b), -1)
        self._f_mul = np.array(
            [[self._f_index[spec.f.mul(a, b)] for b in f_elems] for a in f_elems],
            dtype=_INDEX,
        )

    @classmethod
    def build(cls, spec: GroupSpec) -> RewriteKernel | None:
        """Tabulate the spec, or None when a table would exceed the cap."""
        cap = KERNEL_TABLE_CAP
        if spec.h.order > cap or spec.f.order > cap:
            _LOGGER.debug("No coded kernel for %s: H or F above %s", spec.name, cap)
            return None
        try:
            h_elems = list(spec.h.elements())
            seeds = {
                d: list(spec.rooted[d].elements()) for d in spec.valency.distinct()
            }
        except SpecValidationError as err:
            _LOGGER.debug("No coded kernel for %s: %s", spec.name, err)
            return None

        # every restriction of H, so that child letters stay coded
        known = dict.fromkeys(h_elems)
        queue = list(h_elems)
        while queue:
            h = queue.pop()
            for level in range(spec.classes.count + 1):
                r = spec.h.restrict(h, level)
                if r not in known:
                    if len(known) >= cap:
                        return None
                    known[r] = None
                    queue.append(r)
        h_elems = list(known)

        for level in range(spec.classes.count):
            for h in h_elems:
                entry = spec.entry(h, level)
                seeds.setdefault(spec.d(level), []).append(entry.root)
                seeds.setdefault(spec.d(level + 1), []).extend(entry.sections)
        perm_tables: dict[int, _PermTable] = {}
        for degree, pool in seeds.items():
            elems = _closure(pool, cap)
            if elems is None:
                _LOGGER.debug(
                    "No coded kernel for %s: degree %s closure above %s",
                    spec.name,
                    degree,
                    cap,
                )
                return None
            perm_tables[degree] = _perm_table(elems)

        h_index = {h: i for i, h in enumerate(h_elems)}
        levels: dict[int, _LevelTable] = {}
        for level in range(spec.classes.count):
            here = perm_tables[spec.d(level)].index
            below = perm_tables[spec.d(level + 1)].index
            c = spec.c(level)
            root = np.empty(len(h_elems), dtype=_INDEX)
            sections = np.empty((len(h_elems), c), dtype=_INDEX)
            child = np.empty(len(h_elems), dtype=_INDEX)
            for i, h in enumerate(h_elems):
                entry = spec.entry(h, level)
                root[i] = here[entry.root]
                sections[i] = [below[p] for p in entry.sections[:c]]
                child[i] = h_index[spec.h.restrict(h, level + 1)]
            levels[level] = _LevelTable(root, sections, child)

        f_elems = list(spec.f.elements())
        _LOGGER.debug(
            "Coded kernel for %s: |H| = %s, |F| = %s, perm sets %s",
            spec.name,
            len(h_elems),
            len(f_elems),
            {d: len(t.index) for d, t in perm_tables.items()},
        )
        return cls(spec, h_elems, f_elems, perm_tables, levels)

    # --- coding ---------------------------------------------------------

    def _encode(self, words: Sequence[AlternateWord], first: int) -> _Batch:
        s_index = self._perms[self.spec.d(words[0].level)].index
        lengths = [w.length for w in words]
        koff = np.zeros(len(words) + 1, dtype=np.int64)
        koff[1:] = np.cumsum(lengths)
        s = [s_index[x] for w in words for x in w.s]
        h = [self._h_index[hf[0]] for w in words for hf in w.k]
        f = [self._f_index[hf[1]] for w in words for hf in w.k]
        return _Batch(
            sample=np.arange(first, first + len(words)),
            koff=koff,
            s=np.array(s, dtype=_INDEX),
            h=np.array(h, dtype=_INDEX),
            f=np.array(f, dtype=_INDEX),
        )

    # --- one rewriting step --------------------------------------------

    def _step(self, batch: _Batch, level: int) -> _Batch:
        """Rewrite every word of ``batch`` into its d_l children."""
        spec = self.spec
        d = spec.d(level)
        c = spec.c(level)
        here = self._perms[d]
        below = self._perms[spec.d(level + 1)]
        table = self._levels[spec.classes.of(level)]
        words = len(batch.koff) - 1
        lengths = batch.lengths
        k_word = np.repeat(np.arange(words), lengths)
        n_k = len(k_word)

        # e_0 = s_1, e_j = ρ(k_j) s_{j+1}; σ_j is the product of e_0..e_{j-1}
        soff = batch.koff[:-1] + np.arange(words)
        is_first = np.zeros(len(batch.s), dtype=bool)
        is_first[soff] = True
        e = batch.s.copy()
        e[~is_first] = here.compose[table.root[batch.h], batch.s[~is_first]]
        s_word = np.repeat(np.arange(words), lengths + 1)
        prefix = _segmented_scan(e, soff[s_word], here.compose)
        sigma = prefix[np.arange(n_k) + k_word]

        # tokens ordered by (word, child, position)
        u = here.apply[sigma]  # (n_k, d)
        kind = np.where(u == 0, 1, np.where(u <= c, 0, -1))
        child_id = k_word[:, None] * d + np.arange(d)[None, :]
        flat_kind = kind.ravel()
        keep = np.flatnonzero(flat_kind >= 0)
        order = keep[np.argsort(child_id.ravel()[keep], kind="stable")]
        tok_kind = flat_kind[order]
        tok_child = child_id.ravel()[order]
        tok_letter = order // d
        tok_u = u.ravel()[order]

        # a run is a maximal block of one kind inside one child
        run_key = tok_child * 2 + tok_kind
        run_head = np.ones(len(order), dtype=bool)
        run_head[1:] = run_key[1:] != run_key[:-1]
        run_id = np.cumsum(run_head) - 1
        run_tail = np.ones(len(order), dtype=bool)
        run_tail[:-1] = run_head[1:]

        s_tok = tok_kind == 0
        s_vals = table.sections[
            batch.h[tok_letter[s_tok]], np.maximum(tok_u[s_tok] - 1, 0)
        ]
        s_runs = _segmented_scan(s_vals, _segment_starts(run_id[s_tok]), below.compose)
        k_tok = ~s_tok
        k_letters = tok_letter[k_tok]
        k_starts = _segment_starts(run_id[k_tok])
        h_runs = _segmented_scan(
            table.child[batch.h[k_letters]], k_starts, self._h_mul
        )
        f_runs = _segmented_scan(batch.f[k_letters], k_starts, self._f_mul)

        tails_s = run_tail[s_tok]
        tails_k = run_tail[k_tok]
        s_child = tok_child[s_tok][tails_s]
        k_child = tok_child[k_tok][tails_k]
        n_children = words * d
        child_len = np.bincount(k_child, minlength=n_children)
        child_koff = np.zeros(n_children + 1, dtype=np.int64)
        child_koff[1:] = np.cumsum(child_len)
        child_soff = child_koff[:-1] + np.arange(n_children)

        # an S run after m K runs of its child fills slot m; other slots are 1_S
        is_k_run = np.zeros(run_id[-1] + 1 if len(run_id) else 0, dtype=np.int64)
        is_k_run[run_id[k_tok][tails_k]] = 1
        k_before = np.cumsum(is_k_run) - is_k_run
        s_run_ids = run_id[s_tok][tails_s]
        slot = k_before[s_run_ids] - child_koff[s_child]
        new_s = np.full(len(child_koff) - 1 + child_koff[-1], below.identity, _INDEX)
        new_s[child_soff[s_child] + slot] = s_runs[tails_s]

        return _Batch(
            sample=np.repeat(batch.sample, d),
            koff=child_koff,
            s=new_s,
            h=h_runs[tails_k].astype(_INDEX),
            f=f_runs[tails_k].astype(_INDEX),
        )

    @staticmethod
    def _select(batch: _Batch, mask: np.ndarray) -> _Batch:
        lengths = batch.lengths
        koff = np.zeros(int(mask.sum()) + 1, dtype=np.int64)
        koff[1:] = np.cumsum(lengths[mask])
        return _Batch(
            sample=batch.sample[mask],
            koff=koff,
            s=batch.s[np.repeat(mask, lengths + 1)],
            h=batch.h[np.repeat(mask, lengths)],
            f=batch.f[np.repeat(mask, lengths)],
        )

    # --- public ---------------------------------------------------------

    def metrics(
        self,
        words: Sequence[AlternateWord],
        depth: int,
        theta: float,
        p_at: Callable[[int], float],
    ) -> KernelMetrics:
        """Activity, support, small-activity flag and root child lengths.

        Args:
            words: Words of one common level
            depth: Deepest vertex depth checked for a short child
            theta: Slack below the mean contraction p_l
            p_at: Mean contraction p_l of level l
        """
        count = len(words)
        activity = np.zeros(count, dtype=np.int64)
        support = np.zeros(count, dtype=np.int64)
        small = np.zeros(count, dtype=bool)
        child_lengths: list[tuple[int, ...]] = [()] * count
        start = 0
        while start < count:
            stop = start + 1
            letters = words[start].length
            while stop < count:
                letters += words[stop].length
                if letters > KERNEL_BATCH_LETTERS:
                    break
                stop += 1
            batch = self._encode(words[start:stop], start)
            self._run(
                batch,
                words[start].level,
                (depth, theta, p_at),
                (activity, support, small, child_lengths),
            )
            start = stop
        return KernelMetrics(activity, support, small, tuple(child_lengths))

    def _run(
        self,
        batch: _Batch,
        root_level: int,
        tail: tuple[int, float, Callable[[int], float]],
        out: tuple[np.ndarray, np.ndarray, np.ndarray, list[tuple[int, ...]]],
    ) -> None:
        depth, theta, p_at = tail
        activity, support, small, child_lengths = out
        vertex_depth = 0
        while len(batch.sample):
            level = root_level + vertex_depth
            lengths = batch.lengths
            leaf = lengths <= 1
            single = np.flatnonzero(lengths == 1)
            np.add.at(activity, batch.sample[single], 1)
            marked = batch.f[batch.koff[single]] != self._f_identity
            np.add.at(support, batch.sample[single[marked]], 1)
            if leaf.all():
                return
            batch = self._select(batch, ~leaf)
            d = self.spec.d(level)
            children = self._step(batch, level)
            child_len = children.lengths.reshape(-1, d)
            if vertex_depth == 0:
                for sample, row in zip(batch.sample, child_len):
                    child_lengths[int(sample)] = tuple(int(x) for x in row)
            if vertex_depth <= depth:
                bound = (p_at(level) - theta) * batch.lengths.astype(float)
                short = (child_len < bound[:, None]).any(axis=1)
                small[batch.sample[short]] = True
            batch = children
            vertex_depth += 1
