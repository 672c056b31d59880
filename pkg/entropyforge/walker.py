"""Random alternate words, Monte Carlo estimators and exact small-n laws.

The random alternate word Y_n = s_1 k_1 s_2 ... k_n s_{n+1} has independent
uniform factors: s_i on the rooted group S of level 0, k_i on HF.

Estimators (Monte Carlo):
    simulate                 Activity, support of φ_n, E[(1/#F)^a], the
                             child-length histogram and the small-activity
                             vertex counter in one pass.
    child_length_distribution Sampled law of the child lengths m_t against
                             the exact run-count law and Binomial(n, p).
    plugin_entropy           Plug-in entropy over sampled canonical keys.
                             Biased downwards; reported, never asserted on.

Exact (small n):
    exact_distributions      Convolution of the step measure on canonical
                             keys with Fraction weights.
    expected_phi_trivial_exact
                             E[(1/#F)^a(Y_n)] by enumerating stripped words.
    norm_oracle              Word norms over S·HF·S by breadth-first search.

Architecture Note:
    Sampling is split into chunks of SAMPLES_PER_CHUNK samples. Chunk i owns
    the i-th child of SeedSequence(seed), and results are merged in chunk
    order, so every statistic is bit-identical for any worker count. Workers
    are a multiprocessing.Pool that receives the spec once per process.
    Per-word metrics come from the coded kernel in entropyforge.kernel when
    the spec is small enough to tabulate, and from words.rewrite_full
    otherwise; both give the same rows.

See Also:
    entropyforge.words: rewriting, activity and canonical keys
    entropyforge.kernel: level-batched rewriting behind :func:`simulate`
    entropyforge.exponents: β(n), β'(n) and l(n) used by the reports
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from multiprocessing import Pool
from typing import Any

import numpy as np
from scipy import stats
from scipy.special import logsumexp

from . import logtools, perms
from .config import worker_count
from .const import (
    DEFAULT_BALL_BUDGET,
    DEFAULT_KEY_BUDGET,
    DEFAULT_SEED,
    DEFAULT_STATE_BUDGET,
    MIN_SAMPLES,
    PHI_TRIVIAL_LOG_THRESHOLD,
    SAMPLES_PER_CHUNK,
    TAIL_THETA,
)
from .exceptions import (
    BallBudgetError,
    DistributionBudgetError,
    ThresholdError,
)
from .exponents import ExponentProfile, beta_of_n, beta_prime, l_of_n
from .group_model import GroupSpec
from .kernel import RewriteKernel
from .words import (
    AlternateWord,
    CanonicalForm,
    Key,
    WordTree,
    canonical_key,
    rewrite_full,
    rewrite_step,
)

_LOGGER = logging.getLogger(__name__)


def sample_word(spec: GroupSpec, n: int, rng: np.random.Generator) -> AlternateWord:
    """Draw Y_n: n + 1 uniform rooted factors interleaved with n uniform HF."""
    s = []
    k = []
    for _ in range(n):
        s.append(spec.s_random(0, rng))
        k.append(spec.hf_random(rng))
    s.append(spec.s_random(0, rng))
    return AlternateWord(0, tuple(s), tuple(k))


def child_length_p(spec: GroupSpec, level: int = 0) -> Fraction:
    """Mean contraction p'_l = c_l / ((c_l + 1) d_l) of the child lengths."""
    c = spec.c(level)
    return Fraction(c, (c + 1) * spec.d(level))


# ============================================================================
# CHUNKED FAN-OUT
# ============================================================================


@dataclass(frozen=True)
class _Task:
    kind: str
    n: int
    count: int
    seed: np.random.SeedSequence
    depth: int = 0
    theta: float = TAIL_THETA


_WORKER_SPEC: GroupSpec | None = None


def _init_worker(spec: GroupSpec) -> None:
    global _WORKER_SPEC
    _WORKER_SPEC = spec


def _pool_task(task: _Task) -> Any:
    assert _WORKER_SPEC is not None
    return _run_chunk(_WORKER_SPEC, task)


def _tasks(kind: str, n: int, samples: int, seed: int, **extra: Any) -> list[_Task]:
    chunks = math.ceil(samples / SAMPLES_PER_CHUNK)
    children = np.random.SeedSequence(seed).spawn(chunks)
    return [
        _Task(
            kind,
            n,
            min(SAMPLES_PER_CHUNK, samples - i * SAMPLES_PER_CHUNK),
            child,
            **extra,
        )
        for i, child in enumerate(children)
    ]


def sample_words(
    spec: GroupSpec, n: int, samples: int, seed: int = DEFAULT_SEED
) -> Iterator[AlternateWord]:
    """The words the chunked estimators see for (n, samples, seed), in order."""
    for task in _tasks("words", n, samples, seed):
        rng = np.random.default_rng(task.seed)
        for _ in range(task.count):
            yield sample_word(spec, n, rng)


def _fan_out(spec: GroupSpec, tasks: list[_Task], workers: int) -> list[Any]:
    if workers <= 1 or len(tasks) <= 1:
        return [_run_chunk(spec, t) for t in tasks]
    with Pool(
        processes=min(workers, len(tasks)),
        initializer=_init_worker,
        initargs=(spec,),
    ) as pool:
        return pool.map(_pool_task, tasks)


def _run_chunk(spec: GroupSpec, task: _Task) -> Any:
    rng = np.random.default_rng(task.seed)
    words = (sample_word(spec, task.n, rng) for _ in range(task.count))
    if task.kind == "metrics":
        kernel = _kernel_for(spec)
        if kernel is None:
            return [_metrics(spec, w, task.depth, task.theta) for w in words]
        return _coded_metrics(spec, kernel, list(words), task.depth, task.theta)
    if task.kind == "child":
        return [
            tuple(ch.length for ch in rewrite_step(spec, w).children) for w in words
        ]
    if task.kind == "digest":
        return [canonical_key(spec, w).digest for w in words]
    raise ValueError(f"Unknown task kind {task.kind!r}")


_KERNELS: dict[int, tuple[GroupSpec, RewriteKernel | None]] = {}


def _kernel_for(spec: GroupSpec) -> RewriteKernel | None:
    cached = _KERNELS.get(id(spec))
    if cached is None or cached[0] is not spec:
        if len(_KERNELS) >= 8:
            _KERNELS.clear()
        cached = (spec, RewriteKernel.build(spec))
        _KERNELS[id(spec)] = cached
    return cached[1]


def _resolve_workers(workers: int | None) -> int:
    if workers is not None:
        return workers
    return worker_count()


# ============================================================================
# MONTE CARLO ESTIMATORS
# ============================================================================


@dataclass(frozen=True)
class _SampleMetrics:
    activity: int
    support: int
    small_activity: bool
    child_lengths: tuple[int, ...]


def _small_activity(spec: GroupSpec, tree: WordTree, depth: int, theta: float) -> bool:
    """Some vertex |v| <= depth has a child shorter than (p_|v| - θ) m_v."""
    for v in tree.roots:
        if len(v) > depth:
            continue
        m_v = tree.words[v].length
        bound = (float(child_length_p(spec, tree.level + len(v))) - theta) * m_v
        for t in range(spec.d(tree.level + len(v))):
            if tree.words[v + (t,)].length < bound:
                return True
    return False


def _metrics(
    spec: GroupSpec, word: AlternateWord, depth: int, theta: float
) -> _SampleMetrics:
    tree = rewrite_full(spec, word)
    active = tree.active_leaves()
    support = sum(
        1 for v in active if not spec.f.is_identity(tree.words[v].k[0][1])
    )
    children: tuple[int, ...] = ()
    if () in tree.roots:
        children = tuple(
            tree.words[(t,)].length for t in range(spec.d(tree.level))
        )
    return _SampleMetrics(
        activity=len(active),
        support=support,
        small_activity=_small_activity(spec, tree, depth, theta),
        child_lengths=children,
    )


def _coded_metrics(
    spec: GroupSpec,
    kernel: RewriteKernel,
    words: list[AlternateWord],
    depth: int,
    theta: float,
) -> list[_SampleMetrics]:
    out = kernel.metrics(
        words, depth, theta, lambda level: float(child_length_p(spec, level))
    )
    return [
        _SampleMetrics(
            activity=int(out.activity[i]),
            support=int(out.support[i]),
            small_activity=bool(out.small_activity[i]),
            child_lengths=out.child_lengths[i],
        )
        for i in range(len(words))
    ]


@dataclass(frozen=True)
class WalkStats:
    """Monte Carlo summary of Y_n.

    Attributes:
        n: Walk length
        samples: Number of sampled words
        mean_activity: Mean of a(Y_n)
        se_activity: Standard error of mean_activity
        mean_support: Mean of #supp(φ_n)
        se_support: Standard error of mean_support
        phi_trivial: Mean of (1/#F)^a(Y_n), an estimate of P(φ_n = id)
        se_phi_trivial: Standard error of phi_trivial
        log_phi_trivial: log of phi_trivial computed with logsumexp
        child_lengths: Histogram of root child lengths, pooled over children
        small_activity: Samples with a small-activity vertex above l(n)
    """

    n: int
    samples: int
    mean_activity: float
    se_activity: float
    mean_support: float
    se_support: float
    phi_trivial: float
    se_phi_trivial: float
    log_phi_trivial: float
    child_lengths: dict[int, int] = field(default_factory=dict)
    small_activity: int = 0


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    mean = float(values.mean())
    if len(values) < 2:
        return mean, math.nan
    return mean, float(values.std(ddof=1) / math.sqrt(len(values)))


def _vertex_depth(spec: GroupSpec, n: int) -> int:
    try:
        return l_of_n(ExponentProfile.from_spec(spec), n)
    except ThresholdError:
        return 0


def simulate(
    spec: GroupSpec,
    n: int,
    samples: int,
    seed: int = DEFAULT_SEED,
    workers: int | None = None,
    theta: float = TAIL_THETA,
) -> WalkStats:
    """Sample Y_n ``samples`` times and summarize activity and support.

    Raises:
        ValueError: If fewer than MIN_SAMPLES samples are requested
    """
    if samples < MIN_SAMPLES:
        raise ValueError(f"Need at least {MIN_SAMPLES} samples, got {samples}")
    depth = _vertex_depth(spec, n)
    tasks = _tasks("metrics", n, samples, seed, depth=depth, theta=theta)
    chunks = _fan_out(spec, tasks, _resolve_workers(workers))
    rows: list[_SampleMetrics] = [row for chunk in chunks for row in chunk]
    activity = np.array([r.activity for r in rows], dtype=float)
    support = np.array([r.support for r in rows], dtype=float)
    log_weights = activity * -math.log(spec.f.order)
    phi = np.exp(log_weights)
    histogram: Counter[int] = Counter()
    for r in rows:
        histogram.update(r.child_lengths)
    mean_a, se_a = _mean_se(activity)
    mean_s, se_s = _mean_se(support)
    mean_phi, se_phi = _mean_se(phi)
    log_phi = float(logsumexp(log_weights) - math.log(len(rows)))
    if spec.f.order > 1 and mean_phi < PHI_TRIVIAL_LOG_THRESHOLD:
        _LOGGER.warning(
            "P(φ_%s = id) estimate is %.3g; use log_phi_trivial=%.4f, "
            "the plain mean has high relative variance",
            n,
            mean_phi,
            log_phi,
        )
    result = WalkStats(
        n=n,
        samples=len(rows),
        mean_activity=mean_a,
        se_activity=se_a,
        mean_support=mean_s,
        se_support=se_s,
        phi_trivial=mean_phi,
        se_phi_trivial=se_phi,
        log_phi_trivial=log_phi,
        child_lengths=dict(sorted(histogram.items())),
        small_activity=sum(r.small_activity for r in rows),
    )
    logtools.count("walk_samples", len(rows))
    _LOGGER.debug("simulate(%s, n=%s): %s", spec.name, n, result)
    return result


def estimate_activity(
    spec: GroupSpec, n: int, samples: int, seed: int = DEFAULT_SEED
) -> WalkStats:
    """One pass of :func:`simulate`; activity, support and P(φ_n = id) share it."""
    return simulate(spec, n, samples, seed)


estimate_support = estimate_activity
estimate_phi_trivial = estimate_activity


@dataclass(frozen=True)
class PluginEntropy:
    """Plug-in entropy of sampled canonical keys, in nats.

    Underestimates H(Y_n) whenever the support is not well covered.
    """

    value: float
    samples: int
    distinct: int


def plugin_entropy(
    spec: GroupSpec,
    n: int,
    samples: int,
    seed: int = DEFAULT_SEED,
    workers: int | None = None,
) -> PluginEntropy:
    chunks = _fan_out(
        spec, _tasks("digest", n, samples, seed), _resolve_workers(workers)
    )
    counts = Counter(d for chunk in chunks for d in chunk)
    freq = np.array(list(counts.values()), dtype=float) / samples
    value = float(stats.entropy(freq))
    if len(counts) > samples / 2:
        _LOGGER.warning(
            "Plug-in entropy at n=%s saw %s distinct keys in %s samples; "
            "the estimate is strongly biased",
            n,
            len(counts),
            samples,
        )
    return PluginEntropy(value, samples, len(counts))


# ============================================================================
# CHILD LENGTH LAW
# ============================================================================


def run_count_law(d: int, c: int, n: int) -> np.ndarray:
    """Exact law of a child length m_t after one rewriting step.

    Each k-factor hands child t a spine token with probability 1/d, a section
    token with probability c/d and nothing otherwise; m_t counts maximal runs
    of spine tokens not separated by a section token.
    """
    p_k = 1 / d
    p_s = c / d
    p_none = 1 - p_k - p_s
    # law[state][m]: state 0 = last token was not a spine token
    law = np.zeros((2, n + 1))
    law[0, 0] = 1.0
    for _ in range(n):
        nxt = np.zeros_like(law)
        nxt[0] += (p_s + p_none) * law[0] + p_s * law[1]
        nxt[1] += p_none * law[1] + p_k * law[1]
        nxt[1, 1:] += p_k * law[0, :-1]
        law = nxt
    return law.sum(axis=0)


def tail_probability(law: np.ndarray, p: float, theta: float) -> float:
    """P(|m/n - p| > θ) under ``law`` on 0..n."""
    n = len(law) - 1
    m = np.arange(n + 1)
    return float(law[np.abs(m / n - p) > theta].sum())


def tail_exponent(
    d: int, c: int, ns: Sequence[int], theta: float = TAIL_THETA
) -> float:
    """Slope of log P(|m/n - p| > θ) against n; negative when the tail decays."""
    p = c / ((c + 1) * d)
    xs, ys = [], []
    for n in ns:
        tail = tail_probability(run_count_law(d, c, n), p, theta)
        if tail > 0:
            xs.append(n)
            ys.append(math.log(tail))
    if len(xs) < 2:
        return -math.inf
    return float(stats.linregress(xs, ys).slope)


def total_variation(a: np.ndarray, b: np.ndarray) -> float:
    return 0.5 * float(np.abs(a - b).sum())


@dataclass(frozen=True)
class ChildLengthReport:
    """Sampled child-length law against the exact and binomial laws.

    Attributes:
        n: Parent word length
        p: Mean contraction p'_0
        samples: Sampled parent words (each contributes d_0 child lengths)
        empirical: Normalized histogram on 0..n
        exact: Run-count law on 0..n
        binomial: Binomial(n, p) on 0..n
        tv_exact: Total variation to the run-count law
        tv_binomial: Total variation to the binomial law
        tail: P(|m/n - p| > θ) under the exact law
    """

    n: int
    p: Fraction
    samples: int
    empirical: np.ndarray
    exact: np.ndarray
    binomial: np.ndarray
    tv_exact: float
    tv_binomial: float
    tail: float


def child_length_distribution(
    spec: GroupSpec,
    n: int,
    samples: int,
    seed: int = DEFAULT_SEED,
    workers: int | None = None,
    theta: float = TAIL_THETA,
) -> ChildLengthReport:
    if n < 1:
        raise ValueError(f"Child lengths need n >= 1, got {n}")
    chunks = _fan_out(
        spec, _tasks("child", n, samples, seed), _resolve_workers(workers)
    )
    counts = np.zeros(n + 1)
    for chunk in chunks:
        for lengths in chunk:
            for m in lengths:
                counts[m] += 1
    empirical = counts / counts.sum()
    p = child_length_p(spec)
    exact = run_count_law(spec.d(0), spec.c(0), n)
    binomial = stats.binom.pmf(np.arange(n + 1), n, float(p))
    report = ChildLengthReport(
        n=n,
        p=p,
        samples=samples,
        empirical=empirical,
        exact=exact,
        binomial=binomial,
        tv_exact=total_variation(empirical, exact),
        tv_binomial=total_variation(empirical, binomial),
        tail=tail_probability(exact, float(p), theta),
    )
    _LOGGER.debug(
        "child lengths n=%s: TV exact %.4f, binomial %.4f",
        n,
        report.tv_exact,
        report.tv_binomial,
    )
    return report


def _all_words(spec: GroupSpec, n: int, strip: bool = False) -> Iterator[AlternateWord]:
    rooted = spec.rooted_at(0).elements()
    if strip:
        letters = tuple((h, spec.f.identity) for h in spec.h.elements())
    else:
        letters = spec.hf_elements()
    for s in itertools.product(rooted, repeat=n + 1):
        for k in itertools.product(letters, repeat=n):
            yield AlternateWord(0, s, k)


def conditional_uniformity_failures(
    spec: GroupSpec, n: int, child: int = 0
) -> list[int]:
    """Child lengths m whose conditioned child words are not uniform.

    Enumerates every word of length n. Given m_t = m, the k-factors and the
    interior rooted factors s_2..s_m of child t must be uniform on
    HF^m x S^(m-1); the outer rooted factors absorb the word ends.
    """
    seen: dict[int, Counter[tuple[Any, ...]]] = {}
    for word in _all_words(spec, n):
        ch = rewrite_step(spec, word).children[child]
        seen.setdefault(ch.length, Counter())[(ch.s[1:-1], ch.k)] += 1
    failures = []
    s_order = spec.rooted_at(1).order
    hf_order = spec.h.order * spec.f.order
    for m, counts in sorted(seen.items()):
        if m == 0:
            continue
        cells = s_order ** (m - 1) * hf_order**m
        if len(counts) != cells or len(set(counts.values())) != 1:
            failures.append(m)
    return failures


# ============================================================================
# EXACT DISTRIBUTIONS
# ============================================================================


@dataclass
class ExactDistribution:
    """Law of Y_n on canonical keys with exact probabilities.

    Attributes:
        n: Walk length
        probs: Key -> probability
        forms: Key -> canonical form (boundary labels included)
        reps: Key -> a word reaching that element
    """

    n: int
    probs: dict[Key, Fraction]
    forms: dict[Key, CanonicalForm]
    reps: dict[Key, AlternateWord]

    @property
    def support_size(self) -> int:
        return len(self.probs)

    def total(self) -> Fraction:
        return sum(self.probs.values(), Fraction(0))


def entropy_exact(dist: ExactDistribution) -> float:
    """Shannon entropy in nats."""
    return -sum(float(p) * math.log(p) for p in dist.probs.values() if p)


def return_prob_exact(spec: GroupSpec, dist: ExactDistribution) -> Fraction:
    identity = canonical_key(spec, AlternateWord.empty(spec)).key
    return dist.probs.get(identity, Fraction(0))


def phi_trivial_exact(dist: ExactDistribution) -> Fraction:
    """P(φ_n = id): mass of keys without boundary labels."""
    return sum(
        (p for key, p in dist.probs.items() if not dist.forms[key].boundary),
        Fraction(0),
    )


def expected_support_exact(dist: ExactDistribution) -> Fraction:
    """E #supp(φ_n)."""
    return sum(
        (p * len(dist.forms[key].boundary) for key, p in dist.probs.items()),
        Fraction(0),
    )


def exact_distributions(
    spec: GroupSpec,
    n_max: int,
    budget: int = DEFAULT_KEY_BUDGET,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> Iterator[ExactDistribution]:
    """Yield the laws of Y_0, Y_1, ..., Y_{n_max}.

    Raises:
        DistributionBudgetError: If a law has more than ``budget`` keys
    """
    memo: dict[tuple[Any, ...], Key] = {}
    rooted = spec.rooted_at(0).elements()
    ident = perms.identity(spec.d(0))
    weight = Fraction(1, len(rooted))
    probs: dict[Key, Fraction] = {}
    forms: dict[Key, CanonicalForm] = {}
    reps: dict[Key, AlternateWord] = {}
    for s in rooted:
        word = AlternateWord(0, (s,), ())
        form = canonical_key(spec, word, state_budget, memo)
        probs[form.key] = probs.get(form.key, Fraction(0)) + weight
        forms.setdefault(form.key, form)
        reps.setdefault(form.key, word)
    yield ExactDistribution(0, probs, forms, reps)
    steps = [
        AlternateWord(0, (ident, s), (k,)) for k in spec.hf_elements() for s in rooted
    ]
    step_weight = Fraction(1, len(steps))
    for n in range(1, n_max + 1):
        new_probs: dict[Key, Fraction] = {}
        new_forms: dict[Key, CanonicalForm] = {}
        new_reps: dict[Key, AlternateWord] = {}
        for key, p in probs.items():
            rep = reps[key]
            q = p * step_weight
            for step in steps:
                word = rep.then(step)
                form = canonical_key(spec, word, state_budget, memo)
                if form.key in new_probs:
                    new_probs[form.key] += q
                    continue
                new_probs[form.key] = q
                new_forms[form.key] = form
                new_reps[form.key] = word
                if len(new_probs) > budget:
                    raise DistributionBudgetError(
                        f"Law of Y_{n} exceeds {budget} keys", budget=budget, n=n
                    )
        probs, forms, reps = new_probs, new_forms, new_reps
        _LOGGER.debug("exact law n=%s: %s keys", n, len(probs))
        logtools.count("exact_keys", len(probs))
        yield ExactDistribution(n, probs, forms, reps)


def exact_distribution(
    spec: GroupSpec, n: int, budget: int = DEFAULT_KEY_BUDGET
) -> ExactDistribution:
    dist = None
    for dist in exact_distributions(spec, n, budget):
        pass
    assert dist is not None
    return dist


def expected_phi_trivial_exact(
    spec: GroupSpec, n: int, budget: int = DEFAULT_KEY_BUDGET
) -> Fraction:
    """E[(1/#F)^a(Y_n)] over all words with trivial boundary letters.

    Activity does not depend on the f_i, so stripped words carry the whole
    expectation.

    Raises:
        DistributionBudgetError: If there are more than ``budget`` words
    """
    words = spec.rooted_at(0).order ** (n + 1) * spec.h.order**n
    if words > budget:
        raise DistributionBudgetError(
            f"{words} stripped words of length {n} exceed {budget}",
            budget=budget,
            n=n,
        )
    by_activity: Counter[int] = Counter()
    for word in _all_words(spec, n, strip=True):
        by_activity[len(rewrite_full(spec, word).active_leaves())] += 1
    f_inv = Fraction(1, spec.f.order)
    return sum(
        (Fraction(count, words) * f_inv**a for a, count in by_activity.items()),
        Fraction(0),
    )


# ============================================================================
# NORMS AND DRIFT
# ============================================================================


@dataclass(frozen=True)
class NormOracle:
    """Exact norms over the generating set S·HF·S within a radius.

    Attributes:
        radius: Largest norm explored
        norms: Canonical-key digest -> norm
        generators: Distinct non-identity generators
    """

    radius: int
    norms: dict[str, int]
    generators: int

    def norm(self, spec: GroupSpec, word: AlternateWord) -> int | None:
        """Norm of ``word``, or None when it lies outside the ball."""
        return self.norms.get(canonical_key(spec, word).digest)


def _generator_words(spec: GroupSpec) -> list[AlternateWord]:
    rooted = spec.rooted_at(0).elements()
    return [
        AlternateWord(0, (s1, s2), (k,))
        for s1 in rooted
        for k in spec.hf_elements()
        for s2 in rooted
    ]


def norm_oracle(
    spec: GroupSpec, radius: int, budget: int = DEFAULT_BALL_BUDGET
) -> NormOracle:
    """Breadth-first ball of ``radius`` around the identity.

    Raises:
        BallBudgetError: If the ball holds more than ``budget`` elements
    """
    memo: dict[tuple[Any, ...], Key] = {}
    gens = _generator_words(spec)
    start = AlternateWord.empty(spec)
    norms = {canonical_key(spec, start, memo=memo).digest: 0}
    frontier = [start]
    generator_digests: set[str] = set()
    for r in range(1, radius + 1):
        nxt = []
        for word in frontier:
            for g in gens:
                w = word.then(g)
                digest = canonical_key(spec, w, memo=memo).digest
                if r == 1 and norms.get(digest) != 0:
                    generator_digests.add(digest)
                if digest in norms:
                    continue
                norms[digest] = r
                nxt.append(w)
                if len(norms) > budget:
                    raise BallBudgetError(
                        f"Ball of radius {r} exceeds {budget} elements",
                        budget=budget,
                        n=r,
                    )
        frontier = nxt
        _LOGGER.debug("norm ball radius %s: %s elements", r, len(norms))
    if radius == 0:
        for g in gens:
            digest = canonical_key(spec, g, memo=memo).digest
            if digest not in norms:
                generator_digests.add(digest)
    return NormOracle(radius, norms, len(generator_digests))


@dataclass(frozen=True)
class DriftReport:
    """Sampled drift with the entropy sandwich evaluated at the same n.

    Attributes:
        n: Walk length
        samples: Sampled words
        censored: Samples whose norm exceeds the oracle radius
        mean_norm: Mean norm over uncensored samples
        se_norm: Standard error of mean_norm
        entropy: Exact H(Y_n) in nats
        lower: (H - log(n + 2)) / log(#generators)
        upper: 2 sqrt(n (H + log n))
    """

    n: int
    samples: int
    censored: int
    mean_norm: float
    se_norm: float
    entropy: float
    lower: float
    upper: float


def drift_bounds(
    spec: GroupSpec,
    n: int,
    samples: int,
    radius: int,
    seed: int = DEFAULT_SEED,
    workers: int | None = None,
    oracle: NormOracle | None = None,
) -> DriftReport:
    oracle = oracle or norm_oracle(spec, radius)
    chunks = _fan_out(
        spec, _tasks("digest", n, samples, seed), _resolve_workers(workers)
    )
    values = []
    censored = 0
    for digest in (d for chunk in chunks for d in chunk):
        norm = oracle.norms.get(digest)
        if norm is None:
            censored += 1
        else:
            values.append(norm)
    if censored:
        _LOGGER.warning(
            "%s of %s samples at n=%s left the ball of radius %s",
            censored,
            samples,
            n,
            oracle.radius,
        )
    mean, se = math.nan, math.nan
    if values:
        mean, se = _mean_se(np.array(values, dtype=float))
    entropy = entropy_exact(exact_distribution(spec, n))
    steps = max(n, 1)
    lower = (entropy - math.log(n + 2)) / math.log(max(oracle.generators, 2))
    upper = 2 * math.sqrt(steps * (entropy + math.log(steps)))
    return DriftReport(n, samples, censored, mean, se, entropy, lower, upper)


def return_diagnostics(
    spec: GroupSpec, n: int, p_return: Fraction
) -> dict[str, float]:
    """log(-log P(Y_n = 1)) next to β(n) log n and β'(n) log n."""
    profile = ExponentProfile.from_spec(spec)
    out = {"log_neg_log_return": math.nan, "beta_log_n": math.nan}
    out["beta_prime_log_n"] = math.nan
    if 0 < p_return < 1:
        out["log_neg_log_return"] = math.log(-math.log(p_return))
    if n >= 2:
        out["beta_log_n"] = float(beta_of_n(profile, n)) * math.log(n)
        try:
            out["beta_prime_log_n"] = float(beta_prime(profile, n)) * math.log(n)
        except ThresholdError:
            pass
    return out
