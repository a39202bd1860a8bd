"""Fully specified discrete distributions: validation, zig-zag classification,
the Beta-Binomial trend family and the catalog of nulls/alternatives."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    InvalidParameter,
    NegativeOrOversizedProbability,
    NonpositiveShape,
    SumNotOne,
    TooFewCategories,
    UnknownCatalogName,
)

SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class CellProbabilities:
    """A validated vector of ``k >= 2`` cell probabilities summing to one."""

    probs: tuple[float, ...]
    label: str = ""
    _array: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        values = tuple(float(v) for v in self.probs)
        if len(values) < 2:
            raise TooFewCategories(f"need at least 2 cells, got {len(values)}")
        for i, v in enumerate(values, start=1):
            if not 0.0 <= v <= 1.0:
                raise NegativeOrOversizedProbability(f"cell {i} has probability {v!r}, outside [0, 1]")
        total = math.fsum(values)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise SumNotOne(total)
        arr = np.array(values, dtype=np.float64)
        arr.setflags(write=False)
        object.__setattr__(self, "probs", values)
        object.__setattr__(self, "_array", arr)

    @property
    def k(self) -> int:
        return len(self.probs)

    @property
    def array(self) -> np.ndarray:
        """Read-only float64 view of the probabilities."""
        return self._array

    def __len__(self) -> int:
        return len(self.probs)

    def with_label(self, label: str) -> CellProbabilities:
        return CellProbabilities(self.probs, label)


def make_cell_probabilities(values: Sequence[float], label: str = "") -> CellProbabilities:
    """Validate ``values`` and wrap them.

    Raises
    ------
    TooFewCategories
        Fewer than two values.
    NegativeOrOversizedProbability
        A value outside ``[0, 1]`` (NaN included).
    SumNotOne
        ``|sum - 1| > 1e-9``; the offending sum is on ``exc.total``.
    """
    return CellProbabilities(tuple(values), label)


def uniform(k: int, label: str | None = None) -> CellProbabilities:
    if k < 2:
        raise TooFewCategories(f"need at least 2 cells, got {k}")
    return CellProbabilities((1.0 / k,) * k, label if label is not None else f"uniform:{k}")


def as_cell_probabilities(cp) -> CellProbabilities:
    if isinstance(cp, CellProbabilities):
        return cp
    return make_cell_probabilities(cp)


# --- zig-zag classification -------------------------------------------------

RISING_START = "rising-start"
FALLING_START = "falling-start"
NO_PATTERN = "none"


@dataclass(frozen=True)
class ZigzagReport:
    """Outcome of :func:`classify_zigzag`.

    ``first_violation`` is the 1-based index ``i`` of the first adjacent pair
    ``(p_i, p_{i+1})`` at which strict alternation breaks.
    """

    is_zigzag: bool
    pattern: str
    first_violation: int | None = None


def classify_zigzag(cp) -> ZigzagReport:
    # Only the order of adjacent cells matters, so raw unnormalised sequences are accepted too.
    p = cp.probs if isinstance(cp, CellProbabilities) else tuple(float(v) for v in cp)
    if len(p) < 2:
        raise TooFewCategories(f"need at least 2 cells, got {len(p)}")
    expected = None
    for i in range(len(p) - 1):
        step = (p[i + 1] > p[i]) - (p[i + 1] < p[i])
        if step == 0 or (expected is not None and step != expected):
            return ZigzagReport(False, NO_PATTERN, i + 1)
        expected = -step
    start = RISING_START if p[1] > p[0] else FALLING_START
    return ZigzagReport(True, start, None)


# --- Beta-Binomial trend family ---------------------------------------------


@dataclass(frozen=True)
class BetaBinomialParams:
    a: float
    b: float
    k: int

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise NonpositiveShape(f"shape parameters must be positive, got a={self.a!r}, b={self.b!r}")
        if self.k < 2:
            raise TooFewCategories(f"need at least 2 cells, got {self.k}")

    def probabilities(self) -> CellProbabilities:
        return beta_binomial(self.a, self.b, self.k)


def beta_binomial(a: float, b: float, k: int, label: str | None = None) -> CellProbabilities:
    """Beta-Binomial cell probabilities ``BB(a, b)`` over ``k`` ordered cells.

    Cell ``i`` (1-based) carries the Beta-Binomial mass of ``i - 1`` successes
    in ``k - 1`` trials. Evaluated as a sum of log-gamma terms so large ``k``
    does not overflow.
    """
    BetaBinomialParams(a, b, k)
    lg = math.lgamma
    const = lg(k) + lg(a + b) - lg(a + b + k - 1) - lg(a) - lg(b)
    probs = []
    for i in range(1, k + 1):
        log_p = const - lg(i) - lg(k - i + 1) + lg(a + i - 1) + lg(k + b - i)
        probs.append(math.exp(log_p))
    return CellProbabilities(tuple(probs), label if label is not None else f"bb({a:g},{b:g},{k})")


# --- catalog -----------------------------------------------------------------

CATALOG_NAMES = (
    "zigzag-null",
    "decreasing",
    "increasing",
    "unimodal",
    "bimodal",
    "leptokurtic",
    "platykurtic",
    "bathtub",
)
ALTERNATIVE_NAMES = CATALOG_NAMES[1:]

_RAW_ROWS = {
    "zigzag-null": (0.20, 0.05, 0.10, 0.05, 0.10, 0.02, 0.20, 0.10, 0.08, 0.10),
    "decreasing": (0.32, 0.13, 0.10, 0.08, 0.07, 0.07, 0.06, 0.06, 0.05, 0.05),
    "increasing": (0.03, 0.04, 0.05, 0.06, 0.10, 0.11, 0.12, 0.14, 0.16, 0.19),
    "unimodal": (0.06, 0.09, 0.17, 0.17, 0.12, 0.12, 0.12, 0.17, 0.09, 0.06),
    "bimodal": (0.05, 0.11, 0.17, 0.11, 0.06, 0.06, 0.11, 0.17, 0.11, 0.05),
    "leptokurtic": (0.05, 0.05, 0.05, 0.05, 0.30, 0.30, 0.05, 0.05, 0.05, 0.05),
    "platykurtic": (0.04, 0.11, 0.11, 0.12, 0.12, 0.12, 0.12, 0.11, 0.11, 0.04),
    "bathtub": (0.11, 0.10, 0.10, 0.01, 0.09, 0.09, 0.10, 0.10, 0.10, 0.11),
}

_REGENERATED = {"unimodal": (1.5, 1.5), "bathtub": (0.9, 0.9)}
_RENORMALISED = ("decreasing",)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    raw: tuple[float, ...]
    resolved: CellProbabilities
    provenance_note: str


def catalog(name: str) -> CatalogEntry:
    """Look up a catalog distribution by its lowercase token.

    ``raw`` is the printed row verbatim; ``resolved`` is what simulations use.
    Rows whose printed values do not sum to one are corrected and the
    correction is described in ``provenance_note``.
    """
    try:
        raw = _RAW_ROWS[name]
    except (KeyError, TypeError):
        raise UnknownCatalogName(
            f"unknown catalog distribution {name!r}; expected one of {', '.join(CATALOG_NAMES)}"
        ) from None
    total = math.fsum(raw)
    if name in _REGENERATED:
        a, b = _REGENERATED[name]
        resolved = beta_binomial(a, b, len(raw), label=name)
        note = (
            f"printed row sums to {total:.2f}; regenerated from the Beta-Binomial "
            f"family BB({a:g}, {b:g}) over {len(raw)} cells"
        )
    elif name in _RENORMALISED:
        resolved = CellProbabilities(tuple(v / total for v in raw), name)
        note = f"printed row sums to {total:.2f}; renormalised proportionally to sum to 1"
    else:
        resolved = CellProbabilities(raw, name)
        note = "as printed"
    return CatalogEntry(name, raw, resolved, note)


def catalog_entries() -> list[CatalogEntry]:
    return [catalog(name) for name in CATALOG_NAMES]


def expected_frequencies(cp, n: float) -> np.ndarray:
    """``E_i = n * p_i``."""
    if n < 0:
        raise InvalidParameter(f"sample size must be non-negative, got {n}")
    return n * as_cell_probabilities(cp).array


def cumulative_probabilities(cp) -> np.ndarray:
    """Cumulative null probabilities ``H_i``; the last entry is exactly 1."""
    p = as_cell_probabilities(cp).array
    h = np.cumsum(p)
    return h / h[-1]
