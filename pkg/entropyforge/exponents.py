"""Exponent sequences, limit constants and valency-sequence designers.

For a valency profile (d_l, c_l) the contraction factor of level l is

    p_l = c_l / ((c_l + 1) d_l)        (p_l = (d_l - 1)/d_l² when c_l = d_l - 1)

and the entropy exponent sequence is

    k(n) = min{k : p_0 ... p_k n <= 1}
    β(n) = log(d_0 ... d_{k(n)}) / log n

All thresholds are decided with integer products: p_0 ... p_k n <= 1 is
n·Πc_i <= Π(c_i + 1)d_i. The auxiliary exponent β'(n) uses the threshold
factors d_l/p_l instead: l(n) = max{l : Π(c_i + 1)d_i²/c_i <= n}.

Designers:
    design_constant       Periodic d/D mix whose β(n) tends to a target.
    OscillatingDesign     Lazy d-blocks and D-blocks whose β(n) swings
                          between a lower and an upper target.
    approximate_function  Greedy sequence with n^{β(n)} within a factor
                          D/d of a given growth function.

Architecture Note:
    β values are LogRatio objects: the exact integer arguments of both logs
    plus a float view. Comparisons that decide a threshold never use the
    float view; reports do.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .const import (
    DEFAULT_N0,
    MAX_VALENCY,
    MIN_VALENCY,
    OSCILLATING_LEVELS,
    TARGET_DENOMINATOR_LIMIT,
)
from .exceptions import (
    InadmissibleTargetError,
    PreconditionError,
    SpecValidationError,
    TableError,
    ThresholdError,
)
from .group_model import CSeq, GroupSpec, ValencySeq

_LOGGER = logging.getLogger(__name__)

# Relative slack for float callbacks in approximate_function
_PRECONDITION_EPS = 1e-12
# Targets closer than this to a limit β_d are approached, not crossed
_EXACT_MARGIN = 1e-3


@dataclass(frozen=True)
class LogRatio:
    """log(numerator) / log(denominator) with exact integer arguments."""

    numerator: int
    denominator: int

    def __float__(self) -> float:
        return math.log(self.numerator) / math.log(self.denominator)

    @property
    def value(self) -> float:
        return float(self)

    def equals(self, q: Fraction) -> bool:
        """Exact test of log(a)/log(b) == q via a^den == b^num (q >= 0)."""
        q = Fraction(q)
        return self.numerator**q.denominator == self.denominator**q.numerator


# ============================================================================
# PROFILES
# ============================================================================


@dataclass(frozen=True)
class _LevelProducts:
    prod_d: int  # d_0 ... d_k
    num: int  # Π(c_i + 1) d_i, so that N_k = num / den = 1/(p_0 ... p_k)
    den: int  # Π c_i
    aux_num: int  # Π(c_i + 1) d_i²
    aux_den: int  # Π c_i


@dataclass(frozen=True)
class ExponentProfile:
    """Valency and relative-saturation sequences with cached level products.

    Attributes:
        valency: Valency sequence d_l
        c_seq: Relative saturation c_l (defaults to d_l - 1)
    """

    valency: ValencySeq
    c_seq: CSeq
    _cache: list[_LevelProducts] = field(
        default_factory=list, compare=False, repr=False
    )

    @classmethod
    def from_valency(
        cls, valency: ValencySeq, c_seq: CSeq | None = None
    ) -> ExponentProfile:
        return cls(valency, c_seq if c_seq is not None else CSeq.full(valency))

    @classmethod
    def from_spec(cls, spec: GroupSpec) -> ExponentProfile:
        return cls(spec.valency, spec.c_seq)

    @classmethod
    def constant(cls, d: int, c: int | None = None) -> ExponentProfile:
        valency = ValencySeq.constant(d)
        return cls(valency, CSeq((), (d - 1 if c is None else c,)))

    def d(self, level: int) -> int:
        return self.valency.at(level)

    def c(self, level: int) -> int:
        return self.c_seq.at(level)

    def p(self, level: int) -> Fraction:
        c = self.c(level)
        return Fraction(c, (c + 1) * self.d(level))

    def level_types(self) -> list[tuple[int, int]]:
        """Distinct (d, c) pairs over one full prefix and period."""
        count = max(self.valency.start, self.c_seq.start) + math.lcm(
            self.valency.period, self.c_seq.period
        )
        return sorted({(self.d(i), self.c(i)) for i in range(count)})

    def products(self, k: int) -> _LevelProducts:
        while len(self._cache) <= k:
            i = len(self._cache)
            d, c = self.d(i), self.c(i)
            if self._cache:
                prev = self._cache[-1]
            else:
                prev = _LevelProducts(1, 1, 1, 1, 1)
            self._cache.append(
                _LevelProducts(
                    prod_d=prev.prod_d * d,
                    num=prev.num * (c + 1) * d,
                    den=prev.den * c,
                    aux_num=prev.aux_num * (c + 1) * d * d,
                    aux_den=prev.aux_den * c,
                )
            )
        return self._cache[k]

    def threshold_floor(self, k: int) -> int:
        """floor(N_k): the largest n with k(n) <= k."""
        prod = self.products(k)
        return prod.num // prod.den


# ============================================================================
# EXPONENT SEQUENCES
# ============================================================================


def k_of_n(profile: ExponentProfile, n: int) -> int:
    """Minimal k with p_0 ... p_k n <= 1 (integer comparison)."""
    if n < 2:
        raise ThresholdError(f"k(n) needs n >= 2, got {n}")
    k = 0
    while True:
        prod = profile.products(k)
        if n * prod.den <= prod.num:
            return k
        k += 1


def beta_of_n(profile: ExponentProfile, n: int) -> LogRatio:
    """β(n) = log(d_0 ... d_{k(n)}) / log n."""
    return LogRatio(profile.products(k_of_n(profile, n)).prod_d, n)


def h_of_n(profile: ExponentProfile, n: int) -> int:
    """h(n) = d_0 ... d_{k(n)}, which equals n^{β(n)}."""
    return profile.products(k_of_n(profile, n)).prod_d


def l_of_n(profile: ExponentProfile, n: int) -> int:
    """Maximal l with Π_{i<=l} (c_i + 1)d_i²/c_i <= n.

    Raises:
        ThresholdError: If n is below the first threshold
    """
    first = profile.products(0)
    if first.aux_num > n * first.aux_den:
        raise ThresholdError(
            f"n={n} is below the first auxiliary threshold "
            f"{first.aux_num}/{first.aux_den}"
        )
    level = 0
    while True:
        nxt = profile.products(level + 1)
        if nxt.aux_num > n * nxt.aux_den:
            return level
        level += 1


def beta_prime(profile: ExponentProfile, n: int) -> LogRatio:
    """β'(n) = log(d_0 ... d_{l(n)}) / log n."""
    return LogRatio(profile.products(l_of_n(profile, n)).prod_d, n)


def _check_theta(profile: ExponentProfile, theta: Fraction) -> None:
    for d, c in profile.level_types():
        p = Fraction(c, (c + 1) * d)
        if not 0 < p + theta < 1:
            raise InadmissibleTargetError(
                f"theta={theta} moves p={p} (d={d}, c={c}) outside (0, 1)"
            )


def k_theta(
    profile: ExponentProfile, n: int, theta: Fraction | float, n0: int = DEFAULT_N0
) -> int:
    """Minimal k with (p_0 + θ) ... (p_k + θ) n <= N0, in exact rationals."""
    theta = Fraction(theta).limit_denominator(10**9)
    _check_theta(profile, theta)
    prod = Fraction(n)
    k = 0
    while True:
        prod *= profile.p(k) + theta
        if prod <= n0:
            return k
        k += 1


def beta_theta(
    profile: ExponentProfile, n: int, theta: Fraction | float, n0: int = DEFAULT_N0
) -> LogRatio:
    """Perturbed exponent β^θ(n) = log(d_0 ... d_{k^θ(n)}) / log n."""
    return LogRatio(profile.products(k_theta(profile, n, theta, n0)).prod_d, n)


def epsilon_theta(
    d: int, c: int, theta: float, n: int, n0: int = DEFAULT_N0
) -> float:
    """Bound on |β(n) - β^θ(n)| for the constant profile (d, c).

    |k - k^θ| <= |log n / |log p| - (log n - log N0) / |log(p + θ)|| + 1,
    scaled by log d / log n.
    """
    p = c / ((c + 1) * d)
    log_p = abs(math.log(p))
    log_pt = abs(math.log(p + theta))
    log_n = math.log(n)
    spread = log_n * abs(math.log(p / (p + theta))) / (log_p * log_pt)
    return math.log(d) / log_n * (spread + math.log(n0) / log_pt + 1)


# ============================================================================
# LIMIT CONSTANTS
# ============================================================================


def _check_dc(d: int, c: int) -> None:
    if d < 2 or not 1 <= c <= d - 1:
        raise SpecValidationError(f"Need d >= 2 and 1 <= c <= d-1, got d={d}, c={c}")


def beta_dc(d: int, c: int) -> float:
    """Limit of β(n) for the constant profile (d, c)."""
    _check_dc(d, c)
    return 1 / (1 + math.log((c + 1) / c) / math.log(d))


def beta_prime_dc(d: int, c: int) -> float:
    """Limit of β'(n) for the constant profile (d, c)."""
    _check_dc(d, c)
    return 1 / (2 + math.log((c + 1) / c) / math.log(d))


def beta_const(d: int) -> float:
    """β_d = 1 / (2 - log(d-1)/log d)."""
    _check_dc(d, d - 1)
    return 1 / (2 - math.log(d - 1) / math.log(d))


def beta_prime_const(d: int) -> float:
    """β'_d = 1 / (3 - log(d-1)/log d)."""
    _check_dc(d, d - 1)
    return 1 / (3 - math.log(d - 1) / math.log(d))


# ============================================================================
# INTERVALS, SANDWICH AND EXTREMES
# ============================================================================


def intervals(
    profile: ExponentProfile, lo: int, hi: int
) -> Iterator[tuple[int, int, int]]:
    """Yield (k, left, right): the maximal ranges of n in [lo, hi] with k(n) = k.

    β(n) = log h / log n is decreasing on each range, so its maximum sits at
    ``left`` and its minimum at ``right``.
    """
    lo = max(lo, 2)
    k = k_of_n(profile, lo)
    left = lo
    while left <= hi:
        right = min(hi, profile.threshold_floor(k))
        if right >= left:
            yield k, left, right
        left = max(left, profile.threshold_floor(k) + 1)
        k += 1


@dataclass(frozen=True)
class SandwichReport:
    """β_min <= β(n) <= β_max + C/log n over a range of n.

    Attributes:
        beta_min: Smallest level-type limit β_{d,c}
        beta_max: Largest level-type limit β_{d,c}
        constant: Measured C = max (β(n) - β_max) log n (at least 0)
        lower_holds: Whether β(n) >= β_min everywhere in the range
        bound: The a priori bound log(d_max) for C
    """

    beta_min: float
    beta_max: float
    constant: float
    lower_holds: bool
    bound: float

    @property
    def holds(self) -> bool:
        return self.lower_holds and self.constant <= self.bound + 1e-9


def sandwich(profile: ExponentProfile, n_max: int, n_min: int = 16) -> SandwichReport:
    types = profile.level_types()
    limits = [beta_dc(d, c) for d, c in types]
    beta_min, beta_max = min(limits), max(limits)
    constant = 0.0
    lower_holds = True
    for _, left, right in intervals(profile, n_min, n_max):
        if float(beta_of_n(profile, right)) < beta_min - 1e-12:
            lower_holds = False
        top = float(beta_of_n(profile, left))
        constant = max(constant, (top - beta_max) * math.log(left))
    bound = math.log(max(d for d, _ in types))
    report = SandwichReport(beta_min, beta_max, constant, lower_holds, bound)
    _LOGGER.debug("Sandwich up to %s: %s", n_max, report)
    return report


@dataclass(frozen=True)
class BetaExtremes:
    """Extreme values of β(n) over [lo, hi] and where they are reached."""

    min_beta: float
    argmin: int
    max_beta: float
    argmax: int


def beta_extremes(profile: ExponentProfile, lo: int, hi: int) -> BetaExtremes:
    best_min = (math.inf, lo)
    best_max = (-math.inf, lo)
    for _, left, right in intervals(profile, lo, hi):
        low = float(beta_of_n(profile, right))
        high = float(beta_of_n(profile, left))
        if low < best_min[0]:
            best_min = (low, right)
        if high > best_max[0]:
            best_max = (high, left)
    return BetaExtremes(best_min[0], best_min[1], best_max[0], best_max[1])


def band_constants(
    profile: ExponentProfile, alpha: float, beta: float, lo: int, hi: int
) -> tuple[float, float]:
    """Measured (C_low, C_high) with α - C_low/log n <= β(n) <= β + C_high/log n."""
    c_low = 0.0
    c_high = 0.0
    for _, left, right in intervals(profile, lo, hi):
        c_low = max(c_low, (alpha - float(beta_of_n(profile, right))) * math.log(right))
        c_high = max(c_high, (float(beta_of_n(profile, left)) - beta) * math.log(left))
    return c_low, c_high


def profile_table(profile: ExponentProfile, lo: int, hi: int) -> list[tuple[int, int]]:
    """(n, h(n)) at the thresholds n = floor(N_k) inside [lo, hi].

    These are the points where β(n) is locally smallest; sampling only them
    keeps the swings between consecutive extremes free of the jump that
    h(n) makes right after each threshold.
    """
    return [
        (right, profile.products(k).prod_d)
        for k, _, right in intervals(profile, lo, hi)
        if right == profile.threshold_floor(k)
    ]


# ============================================================================
# DESIGNERS
# ============================================================================


def _target(value: float | Fraction) -> Fraction:
    return Fraction(value).limit_denominator(TARGET_DENOMINATOR_LIMIT)


@dataclass(frozen=True)
class DesignTarget:
    """Lower and upper entropy exponents with the two valencies used.

    Raises:
        InadmissibleTargetError: Unless 2 <= d < D <= 16 and
            β_d <= α <= β <= β_D
    """

    alpha: Fraction
    beta: Fraction
    d: int
    D: int

    def __post_init__(self) -> None:
        if not MIN_VALENCY <= self.d < self.D <= MAX_VALENCY:
            raise InadmissibleTargetError(
                f"Need 2 <= d < D <= 16, got d={self.d}, D={self.D}"
            )
        lo, hi = beta_const(self.d), beta_const(self.D)
        slack = 1 / TARGET_DENOMINATOR_LIMIT**2
        if not lo - slack <= self.alpha <= self.beta <= hi + slack:
            raise InadmissibleTargetError(
                f"Targets ({float(self.alpha)}, {float(self.beta)}) outside "
                f"[β_{self.d}, β_{self.D}] = [{lo:.6f}, {hi:.6f}]"
            )

    @classmethod
    def of(cls, alpha: float, beta: float, d: int, D: int) -> DesignTarget:
        return cls(_target(alpha), _target(beta), d, D)


def design_lambda(beta: float, d: int, D: int) -> float:
    """Frequency λ of valency d whose d/D mix has entropy exponent β."""
    DesignTarget.of(beta, beta, d, D)
    log_p = math.log((d - 1) / d**2)
    log_P = math.log((D - 1) / D**2)
    lam = (math.log(D) + beta * log_P) / (
        math.log(D) - math.log(d) + beta * (log_P - log_p)
    )
    return min(1.0, max(0.0, lam))


def design_constant(beta: float, d: int, D: int) -> ValencySeq:
    """Periodic sequence with β(n) -> β.

    Level i has valency d when floor(λ(i+1)) > floor(λi), else D, with λ
    replaced by its best rational approximation of bounded denominator.
    The period is then rotated so that log H_k stays closest to β times
    the midpoint of log N_{k-1} and log N_k over one full period; the
    unrotated pattern puts a run of D at the start and keeps β(n) above
    the target over long stretches.
    """
    lam = Fraction(design_lambda(beta, d, D)).limit_denominator(
        TARGET_DENOMINATOR_LIMIT
    )
    period = lam.denominator
    pattern = np.array(
        [
            d if math.floor(lam * (i + 1)) > math.floor(lam * i) else D
            for i in range(period)
        ]
    )
    rotation = _best_rotation(pattern, beta)
    _LOGGER.debug(
        "design_constant(%s, %s, %s): λ=%s rotation=%d", beta, d, D, lam, rotation
    )
    rotated = tuple(int(v) for v in np.roll(pattern, -rotation))
    return ValencySeq((), rotated).normalized()  # type: ignore[return-value]


def _best_rotation(pattern: np.ndarray, beta: float) -> int:
    """Smallest start offset minimising the worst log discrepancy."""
    period = len(pattern)
    log_h = np.log(pattern.astype(float))
    log_n = np.log(pattern.astype(float) ** 2 / (pattern - 1))
    windows = np.lib.stride_tricks.sliding_window_view
    h = np.cumsum(windows(np.concatenate([log_h, log_h[:-1]]), period), axis=1)
    n = np.cumsum(windows(np.concatenate([log_n, log_n[:-1]]), period), axis=1)
    prev = np.hstack([np.zeros((period, 1)), n[:, :-1]])
    disc = np.abs(h - beta * (prev + n) / 2).max(axis=1)
    return int(np.argmin(disc))


@dataclass(frozen=True)
class Block:
    """A maximal run of one valency in an oscillating design."""

    value: int
    start: int
    length: int


def _compare_exponent(
    log_h: float, log_n: float, h: int, num: int, den: int, q: Fraction
) -> int:
    """Sign of log h / log(num/den) - q, exact when the float view is close."""
    diff = log_h - float(q) * log_n
    if abs(diff) > 1e-9 * max(1.0, abs(log_h)):
        return 1 if diff > 0 else -1
    lhs = h**q.denominator * den**q.numerator
    rhs = num**q.numerator
    return (lhs > rhs) - (lhs < rhs)


class OscillatingDesign:
    """Lazy valency sequence alternating d-blocks and D-blocks.

    The sequence starts with d and keeps a valency until β at the current
    threshold crosses the phase target: a d-block ends at the first level
    with β <= α, a D-block at the first with β >= β. Targets within 1e-3
    of a limit β_d or β_D can only be approached, so those phases aim at
    α + (β - α)/(r + 2) (or β - (β - α)/(r + 2)) for the r-th phase.

    Attributes:
        target: Validated design target
        blocks: Completed blocks, in order, filled while iterating
        switches: Levels at which a new block starts
    """

    def __init__(self, target: DesignTarget) -> None:
        self.target = target
        self.blocks: list[Block] = []
        self.switches: list[int] = []
        self._low_exact = float(target.alpha) > beta_const(target.d) + _EXACT_MARGIN
        self._high_exact = float(target.beta) < beta_const(target.D) - _EXACT_MARGIN

    def _phase_target(self, falling: bool, phase: int) -> Fraction:
        t = self.target
        gap = (t.beta - t.alpha) / (phase + 2)
        if falling:
            return t.alpha if self._low_exact else t.alpha + gap
        return t.beta if self._high_exact else t.beta - gap

    def __iter__(self) -> Iterator[int]:
        self.blocks.clear()
        self.switches.clear()
        t = self.target
        h, num, den = 1, 1, 1
        log_h = log_n = 0.0
        falling = True
        phase = 0
        block_start = 0
        level = 0
        while True:
            v = t.d if falling else t.D
            h *= v
            num *= v * v
            den *= v - 1
            log_h += math.log(v)
            log_n += math.log(v * v / (v - 1))
            yield v
            level += 1
            sign = _compare_exponent(
                log_h, log_n, h, num, den, self._phase_target(falling, phase)
            )
            if (falling and sign <= 0) or (not falling and sign >= 0):
                self.blocks.append(Block(v, block_start, level - block_start))
                self.switches.append(level)
                block_start = level
                falling = not falling
                phase += 1

    def take(self, levels: int) -> list[int]:
        out = []
        for v in self:
            out.append(v)
            if len(out) >= levels:
                break
        return out

    def valency(self, levels: int = OSCILLATING_LEVELS) -> ValencySeq:
        """Materialize ``levels`` levels followed by a constant-d tail."""
        return ValencySeq(tuple(self.take(levels)), (self.target.d,))


def design_oscillating(target: DesignTarget) -> OscillatingDesign:
    return OscillatingDesign(target)


@dataclass(frozen=True)
class Certificate:
    """Ratios h(x_k)/g(x_k) seen at the greedy checkpoints.

    Attributes:
        min_ratio: Smallest ratio
        max_ratio: Largest ratio
        constant: D/d; the sandwich is 1/C <= ratio <= C
        checkpoints: Number of checkpoints visited
    """

    min_ratio: float
    max_ratio: float
    constant: float
    checkpoints: int

    @property
    def holds(self) -> bool:
        eps = 1e-9
        return (
            self.min_ratio >= 1 / self.constant - eps
            and self.max_ratio <= self.constant + eps
        )


def approximate_function(
    g: Callable[[float], float], d: int, D: int, x_max: float
) -> tuple[ValencySeq, Certificate]:
    """Greedy sequence with h(x) = d_0 ... d_k tracking g at x_k = 1/(p_0 ... p_k).

    Each step picks d when h(x_k) >= g(x_k), otherwise D.

    Raises:
        PreconditionError: If d·g(x) <= g(d²x/(d-1)) or
            g(D²x/(D-1)) <= D·g(x) fails at a checkpoint
    """
    if not 2 <= d < D:
        raise InadmissibleTargetError(f"Need 2 <= d < D, got d={d}, D={D}")
    step_d = d * d / (d - 1)
    step_D = D * D / (D - 1)
    chosen: list[int] = []
    x = 1.0
    h = 1.0
    ratios: list[float] = []
    while x <= x_max:
        gx = g(x)
        if d * gx > g(step_d * x) * (1 + _PRECONDITION_EPS):
            raise PreconditionError(
                f"Lower growth condition fails at x={x:g}", witness=x, condition="lower"
            )
        if g(step_D * x) > D * gx * (1 + _PRECONDITION_EPS):
            raise PreconditionError(
                f"Upper growth condition fails at x={x:g}", witness=x, condition="upper"
            )
        if chosen:
            ratios.append(h / gx)
        v = d if h >= gx else D
        chosen.append(v)
        h *= v
        x *= v * v / (v - 1)
    certificate = Certificate(
        min(ratios, default=1.0), max(ratios, default=1.0), D / d, len(ratios)
    )
    _LOGGER.debug("approximate_function: %s levels, %s", len(chosen), certificate)
    return ValencySeq(tuple(chosen), (d,)), certificate


# ============================================================================
# PSEUDO-PERIOD EXPONENTS
# ============================================================================


@dataclass(frozen=True)
class PseudoPeriodReport:
    """Empirical pseudo-period exponents with their closed-form references.

    Attributes:
        u_est: Largest log m / log n from a point with H <= n^α to the next
            point with H >= m^β (None when no such pair exists)
        l_est: Same from H >= n^β to the next H <= m^α
        u_ref: (α - 1)/(β - 1)
        l_lower: β/α
        l_upper: (β - 1/2)/(α - 1/2), infinite at α = 1/2
        low_points: Table points from n0 on with H <= n^α
        high_points: Table points from n0 on with H >= n^β

    A constant-d run keeps log H - log n / 2 fixed and every D level
    raises it by log(D - 1)/2, so at α = 1/2 no point after the first
    D level is low and both estimates stay None on any window.
    """

    u_est: float | None
    l_est: float | None
    u_ref: float
    l_lower: float
    l_upper: float
    low_points: int = 0
    high_points: int = 0


def u_reference(alpha: float, beta: float) -> float:
    return (alpha - 1) / (beta - 1)


def _swing(
    logs: Sequence[tuple[float, float]],
    start: Callable[[float, float], bool],
    stop: Callable[[float, float], bool],
    first: int,
) -> float | None:
    next_stop: list[int | None] = [None] * (len(logs) + 1)
    for i in range(len(logs) - 1, -1, -1):
        next_stop[i] = i if stop(*logs[i]) else next_stop[i + 1]
    best: float | None = None
    for i in range(first, len(logs)):
        if not start(*logs[i]):
            continue
        j = next_stop[i + 1]
        if j is None:
            continue
        ratio = logs[j][0] / logs[i][0]
        best = ratio if best is None else max(best, ratio)
    return best


def pseudo_period_exponents(
    table: Sequence[tuple[int, int]], alpha: float, beta: float, n0: int = 1
) -> PseudoPeriodReport:
    """Estimate the pseudo-period exponents of a sampled H from ``table``.

    Args:
        table: (n, H(n)) pairs with strictly increasing n >= 2
        alpha: Lower exponent
        beta: Upper exponent
        n0: Only start points n >= n0 count

    Raises:
        TableError: If the table is empty or n is not strictly increasing
    """
    if not table:
        raise TableError("Pseudo-period table is empty")
    for (a, _), (b, _) in zip(table, table[1:]):
        if b <= a:
            raise TableError(f"Table arguments not increasing at n={a}, next {b}")
    if table[0][0] < 2:
        raise TableError("Table arguments must be >= 2")
    logs = [(math.log(n), math.log(h)) for n, h in table]
    first = next((i for i, (n, _) in enumerate(table) if n >= n0), len(table))
    eps = 1e-12

    def low(log_n: float, log_h: float) -> bool:
        return log_h <= alpha * log_n + eps

    def high(log_n: float, log_h: float) -> bool:
        return log_h >= beta * log_n - eps

    l_upper = math.inf if alpha == 0.5 else (beta - 0.5) / (alpha - 0.5)
    report = PseudoPeriodReport(
        u_est=_swing(logs, low, high, first),
        l_est=_swing(logs, high, low, first),
        u_ref=u_reference(alpha, beta),
        l_lower=beta / alpha,
        l_upper=l_upper,
        low_points=sum(low(*p) for p in logs[first:]),
        high_points=sum(high(*p) for p in logs[first:]),
    )
    if report.u_est is None or report.l_est is None:
        _LOGGER.debug(
            "No full swing between n^%s and n^%s on [%s, %s]: %d low, %d high",
            alpha,
            beta,
            table[first][0] if first < len(table) else None,
            table[-1][0],
            report.low_points,
            report.high_points,
        )
    return report
