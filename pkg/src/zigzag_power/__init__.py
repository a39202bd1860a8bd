"""Discrete goodness-of-fit statistics and Monte Carlo power studies.

Six statistics for ordered or nominal categories (Pearson chi-square, discrete
and nominal Kolmogorov-Smirnov, ordinal Cramer-von Mises, Watson and
Anderson-Darling) tested against fully specified nulls, with simulated power
interpolated between achievable significance levels.
"""

__version__ = "0.1.0"

from .distributions import (
    ALTERNATIVE_NAMES,
    CATALOG_NAMES,
    BetaBinomialParams,
    CatalogEntry,
    CellProbabilities,
    ZigzagReport,
    beta_binomial,
    catalog,
    classify_zigzag,
    cumulative_probabilities,
    expected_frequencies,
    make_cell_probabilities,
    uniform,
)
from .kernels import BACKEND
from .power import (
    CriticalBracket,
    EmpiricalDistribution,
    ExactDistribution,
    PowerEstimate,
    SampleStream,
    SimulationPlan,
    StudyResult,
    bracket_critical_values,
    exact_power_oracle,
    interpolated_power,
    monte_carlo_power,
    multinomial_sample,
    run_study,
    simulate_distribution,
    tail_probability,
)
from .statistics import (
    ALL_KINDS,
    DeviationProfile,
    ObservedCounts,
    StatisticKind,
    compute,
    deviation_profile,
    discrete_ks,
    nominal_ks,
    ordinal_ad,
    ordinal_cvm,
    ordinal_watson,
    pearson_chi_square,
)
