"""The six discrete goodness-of-fit statistics.

All statistics compare observed counts ``O_i`` with expected counts
``E_i = N p_i`` under a fully specified null. The ordinal ones are built
from the cumulative deviations ``Z_i = sum_{j<=i} (O_j - E_j)``.

The single-observation functions here are straightforward numpy
implementations; :func:`batch_statistics` evaluates many samples at once
through the kernel backend and is what the simulation engine uses.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .distributions import CellProbabilities, as_cell_probabilities, cumulative_probabilities
from .errors import (
    DimensionMismatch,
    EmptySample,
    InteriorDegenerateH,
    InvalidParameter,
    ZeroExpectedCell,
)

# Statistic values are rounded to this many decimals in batch evaluation so that
# mathematically equal values computed along different float paths form one atom.
TIE_DECIMALS = 9


class StatisticKind(str, enum.Enum):
    PEARSON_CHI_SQUARE = "pearson-chi-square"
    DISCRETE_KS = "discrete-ks"
    ORDINAL_CVM = "ordinal-cvm"
    ORDINAL_WATSON = "ordinal-watson"
    ORDINAL_AD = "ordinal-ad"
    NOMINAL_KS = "nominal-ks"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, token) -> StatisticKind:
        if isinstance(token, cls):
            return token
        try:
            return cls(str(token).strip().lower())
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise InvalidParameter(f"unknown statistic {token!r}; expected one of {valid}") from None


ALL_KINDS: tuple[StatisticKind, ...] = tuple(StatisticKind)
# Column order of the kernel output matrix.
KERNEL_ORDER = {kind: i for i, kind in enumerate(ALL_KINDS)}


@dataclass(frozen=True)
class ObservedCounts:
    counts: tuple[int, ...]

    def __post_init__(self):
        values = []
        for c in self.counts:
            if isinstance(c, (bool, np.bool_)) or int(c) != c or c < 0:
                raise InvalidParameter(f"counts must be non-negative integers, got {c!r}")
            values.append(int(c))
        object.__setattr__(self, "counts", tuple(values))

    @property
    def n(self) -> int:
        return sum(self.counts)

    @property
    def k(self) -> int:
        return len(self.counts)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=np.float64)


def as_observed_counts(obs) -> ObservedCounts:
    return obs if isinstance(obs, ObservedCounts) else ObservedCounts(tuple(obs))


@dataclass(frozen=True)
class DeviationProfile:
    z: np.ndarray = field(compare=False)
    z_bar: float


def _prepare(obs, null) -> tuple[np.ndarray, np.ndarray, int, CellProbabilities]:
    obs = as_observed_counts(obs)
    null = as_cell_probabilities(null)
    if obs.k != null.k:
        raise DimensionMismatch(f"{obs.k} observed cells against a {null.k}-cell null")
    return obs.array, null.array, obs.n, null


def _require_positive_cells(p: np.ndarray, name: str) -> None:
    zero = np.flatnonzero(p == 0.0)
    if zero.size:
        raise ZeroExpectedCell(f"{name} needs every null cell positive; cell {zero[0] + 1} has probability 0")


def _require_sample(n: int, name: str) -> None:
    if n <= 0:
        raise EmptySample(f"{name} is undefined for an empty sample")


def deviation_profile(obs, null) -> DeviationProfile:
    o, p, n, _ = _prepare(obs, null)
    z = np.cumsum(o - n * p)
    return DeviationProfile(z, float(np.dot(z, p)))


def pearson_chi_square(obs, null) -> float:
    o, p, n, _ = _prepare(obs, null)
    _require_positive_cells(p, "Pearson chi-square")
    e = n * p
    if n == 0:
        return 0.0
    return float(np.sum((o - e) ** 2 / e))


def discrete_ks(obs, null) -> float:
    """``max_i |Z_i|``."""
    z = deviation_profile(obs, null).z
    return float(np.max(np.abs(z)))


def ordinal_cvm(obs, null) -> float:
    o, p, n, _ = _prepare(obs, null)
    _require_sample(n, "ordinal Cramer-von Mises")
    z = np.cumsum(o - n * p)
    return float(np.sum(z**2 * p) / n)


def ordinal_watson(obs, null) -> float:
    o, p, n, _ = _prepare(obs, null)
    _require_sample(n, "ordinal Watson")
    z = np.cumsum(o - n * p)
    z_bar = np.dot(z, p)
    return float(np.sum((z - z_bar) ** 2 * p) / n)


def ordinal_ad(obs, null) -> float:
    """Anderson-Darling analogue weighted by ``1 / (H_i (1 - H_i))``.

    ``H_i`` is the cumulative null probability. The last cell, where both
    ``Z_k`` and ``1 - H_k`` vanish, contributes nothing.
    """
    o, p, n, null = _prepare(obs, null)
    _require_sample(n, "ordinal Anderson-Darling")
    _require_positive_cells(p, "ordinal Anderson-Darling")
    h = cumulative_probabilities(null)[:-1]
    if np.any((h <= 0.0) | (h >= 1.0)):
        raise InteriorDegenerateH("cumulative null probability reaches 0 or 1 before the last cell")
    z = np.cumsum(o - n * p)[:-1]
    return float(np.sum(z**2 * p[:-1] / (h * (1.0 - h))) / n)


def nominal_ks(obs, null) -> float:
    """``(1/2) sum_i |O_i - E_i|``."""
    o, p, n, _ = _prepare(obs, null)
    return float(0.5 * np.sum(np.abs(o - n * p)))


_DISPATCH = {
    StatisticKind.PEARSON_CHI_SQUARE: pearson_chi_square,
    StatisticKind.DISCRETE_KS: discrete_ks,
    StatisticKind.ORDINAL_CVM: ordinal_cvm,
    StatisticKind.ORDINAL_WATSON: ordinal_watson,
    StatisticKind.ORDINAL_AD: ordinal_ad,
    StatisticKind.NOMINAL_KS: nominal_ks,
}


def compute(kind, obs, null) -> float:
    return _DISPATCH[StatisticKind.parse(kind)](obs, null)


def compute_all(obs, null) -> dict[StatisticKind, float]:
    return {kind: compute(kind, obs, null) for kind in ALL_KINDS}


def check_applicable(kind, null, n: int) -> None:
    """Raise the error ``kind`` would raise for any sample of size ``n`` from ``null``."""
    kind = StatisticKind.parse(kind)
    p = as_cell_probabilities(null).array
    if kind in (StatisticKind.ORDINAL_CVM, StatisticKind.ORDINAL_WATSON, StatisticKind.ORDINAL_AD):
        _require_sample(n, kind.value)
    if kind in (StatisticKind.PEARSON_CHI_SQUARE, StatisticKind.ORDINAL_AD):
        _require_positive_cells(p, kind.value)


def batch_statistics(
    counts: np.ndarray,
    null,
    kinds: Iterable | None = None,
    backend=None,
) -> np.ndarray:
    """Evaluate statistics for every row of an ``(R, k)`` count matrix.

    All rows must share the same total ``N``. Returns an ``(R, len(kinds))``
    float64 matrix with values rounded to :data:`TIE_DECIMALS` decimals.
    """
    null = as_cell_probabilities(null)
    kinds = ALL_KINDS if kinds is None else tuple(StatisticKind.parse(k) for k in kinds)
    counts = np.ascontiguousarray(counts, dtype=np.int64)
    if counts.ndim != 2 or counts.shape[1] != null.k:
        raise DimensionMismatch(f"count matrix of shape {counts.shape} against a {null.k}-cell null")
    n = int(counts[0].sum()) if counts.shape[0] else 0
    for kind in kinds:
        check_applicable(kind, null, n)
    backend = backend or kernels.backend
    h = cumulative_probabilities(null)
    full = backend.statistics_matrix(counts, np.ascontiguousarray(null.array), h, n)
    cols = [KERNEL_ORDER[kind] for kind in kinds]
    return np.round(np.asarray(full)[:, cols], TIE_DECIMALS)


def parse_kinds(tokens: Sequence | None) -> tuple[StatisticKind, ...]:
    if tokens is None:
        return ALL_KINDS
    kinds = tuple(StatisticKind.parse(t) for t in tokens)
    if not kinds:
        raise InvalidParameter("at least one statistic must be selected")
    if len(set(kinds)) != len(kinds):
        raise InvalidParameter("statistics must not repeat")
    # canonical order regardless of how they were listed
    return tuple(k for k in ALL_KINDS if k in kinds)
