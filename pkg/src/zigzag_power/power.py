"""Monte Carlo power estimation with interpolation between achievable levels.

A discrete statistic only attains finitely many significance levels, so the
target ``alpha`` is usually bracketed by two achievable levels
``alpha1 <= alpha < alpha2`` at cutoffs ``x1 >= x2``. Power at ``alpha`` is the
linear interpolation of the alternative's rejection rates at the two cutoffs.
Rejection is always ``T >= cutoff``.

Random streams are counter based: the draws for a block of replicates are a
pure function of ``(seed, role, distribution key, N, block index)``, so results
do not depend on how work is scheduled.
"""

from __future__ import annotations

import logging
import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import gammaln, xlogy

from . import kernels
from .distributions import CellProbabilities, as_cell_probabilities
from .errors import (
    DegenerateBracket,
    DimensionMismatch,
    EmptyDistribution,
    GofError,
    InvalidParameter,
    OutcomeSpaceTooLarge,
)
from .statistics import (
    ALL_KINDS,
    ObservedCounts,
    StatisticKind,
    batch_statistics,
    check_applicable,
    parse_kinds,
)

log = logging.getLogger(__name__)

DEFAULT_REPLICATES = 10_000
DEFAULT_ALPHA = 0.01
DEFAULT_SAMPLE_SIZES = (10, 20, 30, 50, 100, 200)
DEFAULT_SEED = 8675309
DEFAULT_ORACLE_CAP = 2_000_000

# Replicates are drawn in fixed-size blocks, one independent stream per block.
BLOCK_SIZE = 1000
EXACT_HIT_TOLERANCE = 1e-12

ROLE_NULL = 0
ROLE_ALTERNATIVE = 1


def distribution_key(label: str) -> int:
    """Stable stream key for a distribution label (independent of list position)."""
    return zlib.crc32(label.encode("utf-8"))


@dataclass(frozen=True)
class SampleStream:
    """Reproducible source of multinomial samples for one (role, distribution)."""

    seed: int
    role: int = ROLE_NULL
    key: int = 0

    def generator(self, n: int, block: int) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.role, self.key, n, block))
        return np.random.Generator(np.random.PCG64(ss))

    def counts(self, cp, n: int, r: int) -> np.ndarray:
        """``(r, k)`` matrix of multinomial counts.

        Row ``i`` depends only on the stream identity, ``n`` and ``i``;
        asking for more replicates extends the matrix without changing
        earlier rows.
        """
        p = _probability_vector(cp)
        blocks = []
        for b, start in enumerate(range(0, r, BLOCK_SIZE)):
            size = min(BLOCK_SIZE, r - start)
            blocks.append(self.generator(n, b).multinomial(n, p, size=size))
        if not blocks:
            return np.zeros((0, p.size), dtype=np.int64)
        return np.ascontiguousarray(np.vstack(blocks), dtype=np.int64)


def _probability_vector(cp) -> np.ndarray:
    if isinstance(cp, CellProbabilities):
        return cp.array
    return np.asarray(cp, dtype=np.float64)


def multinomial_sample(cp, n: int, stream: np.random.Generator) -> ObservedCounts:
    """One multinomial sample of size ``n``.

    Sampling uses numpy's ``Generator.multinomial`` (sequential conditional
    binomial splits), which fixes bit-level reproducibility for a given stream.
    """
    if n < 0:
        raise InvalidParameter(f"sample size must be non-negative, got {n}")
    p = _probability_vector(cp)
    return ObservedCounts(tuple(int(c) for c in stream.multinomial(n, p)))


# --- tail functions ------------------------------------------------------------


@dataclass(frozen=True)
class EmpiricalDistribution:
    values: np.ndarray = field(compare=False)
    r: int

    @classmethod
    def from_values(cls, values) -> EmpiricalDistribution:
        v = np.sort(np.asarray(values, dtype=np.float64))
        v.setflags(write=False)
        return cls(v, int(v.size))

    def tail_probability(self, t: float) -> float:
        if self.r == 0:
            raise EmptyDistribution("tail probability of an empty distribution")
        return (self.r - int(np.searchsorted(self.values, t, side="left"))) / self.r

    def levels(self) -> tuple[np.ndarray, np.ndarray]:
        """Distinct values (ascending) and ``P(T >= value)`` at each."""
        if self.r == 0:
            raise EmptyDistribution("empty distribution has no atoms")
        atoms, first = np.unique(self.values, return_index=True)
        return atoms, (self.r - first) / self.r

    @property
    def maximum(self) -> float:
        if self.r == 0:
            raise EmptyDistribution("empty distribution has no maximum")
        return float(self.values[-1])


@dataclass(frozen=True)
class ExactDistribution:
    """Finite distribution given by atoms (ascending) and their probabilities."""

    atoms: np.ndarray = field(compare=False)
    masses: np.ndarray = field(compare=False)

    def __post_init__(self):
        tails = np.cumsum(self.masses[::-1])[::-1]
        object.__setattr__(self, "_tails", tails)

    def tail_probability(self, t: float) -> float:
        if self.atoms.size == 0:
            raise EmptyDistribution("tail probability of an empty distribution")
        j = int(np.searchsorted(self.atoms, t, side="left"))
        return float(self._tails[j]) if j < self.atoms.size else 0.0

    def levels(self) -> tuple[np.ndarray, np.ndarray]:
        if self.atoms.size == 0:
            raise EmptyDistribution("empty distribution has no atoms")
        return self.atoms, self._tails

    @property
    def maximum(self) -> float:
        return float(self.atoms[-1])


def tail_probability(dist, t: float) -> float:
    """``P(T >= t)`` under ``dist``."""
    return dist.tail_probability(t)


# --- bracketing and interpolation --------------------------------------------------


@dataclass(frozen=True)
class CriticalBracket:
    x1: float
    alpha1: float
    x2: float
    alpha2: float
    exact_hit: bool
    # x1 sits just above the largest null value, so rejecting means strictly exceeding it
    x1_is_sentinel: bool = False


def bracket_critical_values(null_dist, alpha: float) -> CriticalBracket:
    """Achievable levels immediately at-or-below and above ``alpha``.

    Candidate cutoffs are the distinct null values plus a sentinel just above
    the maximum (level 0). If some achievable level equals ``alpha`` the
    bracket collapses onto it.
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidParameter(f"alpha must lie in (0, 1), got {alpha}")
    atoms, levels = null_dist.levels()
    cutoffs = np.append(atoms, np.nextafter(atoms[-1], np.inf))
    levels = np.append(levels, 0.0)
    hit = np.flatnonzero(np.abs(levels - alpha) <= EXACT_HIT_TOLERANCE)
    if hit.size:
        j = int(hit[0])
        x = float(cutoffs[j])
        return CriticalBracket(x, alpha, x, alpha, True, j == atoms.size)
    # levels are strictly decreasing; levels[0] = P(T >= min) = 1 > alpha
    j = int(np.argmax(levels <= alpha))
    return CriticalBracket(
        x1=float(cutoffs[j]),
        alpha1=float(levels[j]),
        x2=float(cutoffs[j - 1]),
        alpha2=float(levels[j - 1]),
        exact_hit=False,
        x1_is_sentinel=j == atoms.size,
    )


@dataclass(frozen=True)
class PowerEstimate:
    power: float
    sensitivity: float
    power_at_x1: float
    power_at_x2: float
    bracket: CriticalBracket


def interpolated_power(bracket: CriticalBracket, alpha: float, alt_dist) -> PowerEstimate:
    p1 = alt_dist.tail_probability(bracket.x1)
    p2 = alt_dist.tail_probability(bracket.x2)
    if bracket.exact_hit:
        power = p1
    else:
        width = bracket.alpha2 - bracket.alpha1
        if width <= 0.0:
            raise DegenerateBracket(f"alpha1 = alpha2 = {bracket.alpha1} without an exact hit")
        power = ((alpha - bracket.alpha1) * p2 + (bracket.alpha2 - alpha) * p1) / width
        power = min(max(power, min(p1, p2)), max(p1, p2))
    return PowerEstimate(power, 1.0 - power, p1, p2, bracket)


# --- simulation ------------------------------------------------------------------------


def simulate_statistics(kinds, sampling, null, n: int, r: int, stream: SampleStream) -> np.ndarray:
    """``(r, len(kinds))`` matrix of statistics on ``r`` samples drawn from ``sampling``."""
    sampling = as_cell_probabilities(sampling)
    null = as_cell_probabilities(null)
    if sampling.k != null.k:
        raise DimensionMismatch(f"sampling distribution has {sampling.k} cells, null has {null.k}")
    if r < 1:
        raise InvalidParameter(f"need at least one replicate, got {r}")
    return batch_statistics(stream.counts(sampling, n, r), null, kinds)


def simulate_distribution(kind, sampling, null, n: int, r: int, stream: SampleStream) -> EmpiricalDistribution:
    """Empirical distribution of ``kind`` over ``r`` samples from ``sampling``.

    With ``sampling`` equal to ``null`` this is the simulated null distribution.
    """
    values = simulate_statistics([kind], sampling, null, n, r, stream)[:, 0]
    return EmpiricalDistribution.from_values(values)


def monte_carlo_power(
    kind,
    null,
    alt,
    n: int,
    alpha: float,
    replicates: int = DEFAULT_REPLICATES,
    seed: int = DEFAULT_SEED,
) -> PowerEstimate:
    """Simulated interpolated power for a single (statistic, alternative, N)."""
    null = as_cell_probabilities(null)
    alt = as_cell_probabilities(alt)
    null_dist = simulate_distribution(kind, null, null, n, replicates, SampleStream(seed, ROLE_NULL, 0))
    alt_stream = SampleStream(seed, ROLE_ALTERNATIVE, distribution_key(alt.label or "alternative"))
    alt_dist = simulate_distribution(kind, alt, null, n, replicates, alt_stream)
    return interpolated_power(bracket_critical_values(null_dist, alpha), alpha, alt_dist)


def _is_int(value) -> bool:
    return isinstance(value, (int, np.integer)) and not isinstance(value, (bool, np.bool_))


@dataclass(frozen=True)
class SimulationPlan:
    replicates: int = DEFAULT_REPLICATES
    alpha: float = DEFAULT_ALPHA
    sample_sizes: tuple[int, ...] = DEFAULT_SAMPLE_SIZES
    seed: int = DEFAULT_SEED
    statistics: tuple[StatisticKind, ...] = ALL_KINDS

    def __post_init__(self):
        if not _is_int(self.replicates) or self.replicates < 100:
            raise InvalidParameter(f"replicates must be an integer >= 100, got {self.replicates!r}")
        if isinstance(self.alpha, bool) or not isinstance(self.alpha, (int, float)) or not 0.0 < self.alpha < 1.0:
            raise InvalidParameter(f"alpha must lie in (0, 1), got {self.alpha!r}")
        sizes = tuple(self.sample_sizes)
        if not sizes:
            raise InvalidParameter("at least one sample size is required")
        for n in sizes:
            if not _is_int(n) or n < 1:
                raise InvalidParameter(f"sample sizes must be integers >= 1, got {n!r}")
        if len(set(sizes)) != len(sizes):
            raise InvalidParameter(f"sample sizes must not repeat: {sizes}")
        if not _is_int(self.seed) or not 0 <= self.seed < 2**64:
            raise InvalidParameter(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        object.__setattr__(self, "replicates", int(self.replicates))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "sample_sizes", tuple(int(n) for n in sizes))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "statistics", parse_kinds(self.statistics))


@dataclass(frozen=True)
class StudyRecord:
    alternative: str
    statistic: StatisticKind
    sample_size: int
    estimate: PowerEstimate | None
    seed: int
    replicates: int
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.estimate is None


@dataclass(frozen=True)
class StudyResult:
    plan: SimulationPlan
    null_label: str
    alternatives: tuple[str, ...]
    records: tuple[StudyRecord, ...]

    def __post_init__(self):
        index = {(r.alternative, r.statistic, r.sample_size): r for r in self.records}
        object.__setattr__(self, "_index", index)

    def get(self, alternative: str, statistic, sample_size: int) -> StudyRecord:
        return self._index[(alternative, StatisticKind.parse(statistic), sample_size)]

    def power(self, alternative: str, statistic, sample_size: int) -> float:
        est = self.get(alternative, statistic, sample_size).estimate
        return math.nan if est is None else est.power

    @property
    def failures(self) -> list[StudyRecord]:
        return [r for r in self.records if r.failed]


def run_study(
    plan: SimulationPlan,
    null: CellProbabilities,
    alternatives: Sequence[CellProbabilities],
    workers: int = 1,
) -> StudyResult:
    """Interpolated power for every (alternative, statistic, N) in the plan.

    Per N, one null sample set is drawn and every statistic is evaluated on
    it; each alternative gets its own sample set, likewise shared by all
    statistics. Sample sets are independent of each other and of ``workers``.
    A statistic that cannot be evaluated marks its cells as failed instead of
    aborting the study.
    """
    null = as_cell_probabilities(null)
    labels = [alt.label for alt in alternatives]
    if any(not label for label in labels) or len(set(labels)) != len(labels):
        raise InvalidParameter(f"alternatives need distinct non-empty labels, got {labels}")
    for alt in alternatives:
        if alt.k != null.k:
            raise DimensionMismatch(f"alternative {alt.label!r} has {alt.k} cells, null has {null.k}")

    usable: dict[int, tuple[StatisticKind, ...]] = {}
    problems: dict[tuple[StatisticKind, int], str] = {}
    for n in plan.sample_sizes:
        ok = []
        for kind in plan.statistics:
            try:
                check_applicable(kind, null, n)
            except GofError as exc:
                problems[(kind, n)] = f"{type(exc).__name__}: {exc}"
            else:
                ok.append(kind)
        usable[n] = tuple(ok)

    tasks = []
    for n in plan.sample_sizes:
        if not usable[n]:
            continue
        tasks.append((None, null, n, SampleStream(plan.seed, ROLE_NULL, 0)))
        for alt in alternatives:
            stream = SampleStream(plan.seed, ROLE_ALTERNATIVE, distribution_key(alt.label))
            tasks.append((alt.label, alt, n, stream))

    def evaluate(task):
        _, sampling, n, stream = task
        return simulate_statistics(usable[n], sampling, null, n, plan.replicates, stream)

    log.info("simulating %d sample sets of %d replicates", len(tasks), plan.replicates)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            matrices = list(pool.map(evaluate, tasks))
    else:
        matrices = [evaluate(t) for t in tasks]

    null_values: dict[int, np.ndarray] = {}
    alt_values: dict[tuple[str, int], np.ndarray] = {}
    for (label, _, n, _), values in zip(tasks, matrices):
        if label is None:
            null_values[n] = values
        else:
            alt_values[(label, n)] = values

    brackets: dict[tuple[StatisticKind, int], CriticalBracket] = {}
    for n, values in null_values.items():
        for j, kind in enumerate(usable[n]):
            dist = EmpiricalDistribution.from_values(values[:, j])
            brackets[(kind, n)] = bracket_critical_values(dist, plan.alpha)

    records = []
    for label in labels:
        for kind in plan.statistics:
            for n in plan.sample_sizes:
                estimate, error = None, problems.get((kind, n))
                if error is None:
                    column = usable[n].index(kind)
                    alt_dist = EmpiricalDistribution.from_values(alt_values[(label, n)][:, column])
                    try:
                        estimate = interpolated_power(brackets[(kind, n)], plan.alpha, alt_dist)
                    except GofError as exc:
                        error = f"{type(exc).__name__}: {exc}"
                if error is not None:
                    log.warning("cell (%s, %s, %d) failed: %s", label, kind.value, n, error)
                records.append(StudyRecord(label, kind, n, estimate, plan.seed, plan.replicates, error))
    return StudyResult(plan, null.label, tuple(labels), tuple(records))


# --- exact enumeration oracle ----------------------------------------------------------


def outcome_space_size(n: int, k: int) -> int:
    """Number of multinomial outcomes (compositions of ``n`` into ``k`` cells)."""
    return math.comb(n + k - 1, k - 1)


def exact_distribution(kind, sampling, null, n: int, cap: int = DEFAULT_ORACLE_CAP) -> ExactDistribution:
    """Exact distribution of ``kind`` when samples of size ``n`` come from ``sampling``.

    Outcomes that are impossible under ``sampling`` are dropped, so for
    ``sampling = null`` the atoms are exactly the attainable null values.
    """
    sampling = as_cell_probabilities(sampling)
    null = as_cell_probabilities(null)
    if sampling.k != null.k:
        raise DimensionMismatch(f"sampling distribution has {sampling.k} cells, null has {null.k}")
    if n < 0:
        raise InvalidParameter(f"sample size must be non-negative, got {n}")
    size = outcome_space_size(n, null.k)
    if size > cap:
        raise OutcomeSpaceTooLarge(size, cap)
    outcomes = np.ascontiguousarray(kernels.backend.compositions(n, null.k), dtype=np.int64)
    values = batch_statistics(outcomes, null, [kind])[:, 0]
    log_mass = gammaln(n + 1) - gammaln(outcomes + 1).sum(axis=1) + xlogy(outcomes, sampling.array).sum(axis=1)
    mass = np.exp(log_mass)
    keep = mass > 0.0
    atoms, inverse = np.unique(values[keep], return_inverse=True)
    masses = np.bincount(inverse, weights=mass[keep], minlength=atoms.size)
    return ExactDistribution(atoms, masses)


def exact_power_oracle(
    kind,
    null,
    alt,
    n: int,
    alpha: float,
    cap: int = DEFAULT_ORACLE_CAP,
) -> PowerEstimate:
    """Exact interpolated power by full enumeration of the outcome space.

    Applies the same bracketing and interpolation rules as the simulation, but
    to exact multinomial tail probabilities.
    """
    null_dist = exact_distribution(kind, null, null, n, cap)
    alt_dist = exact_distribution(kind, alt, null, n, cap)
    return interpolated_power(bracket_critical_values(null_dist, alpha), alpha, alt_dist)
