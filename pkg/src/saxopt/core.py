"""Symbolic time-series representation primitives.

Pipeline: z-normalize -> piecewise aggregate approximation (PAA) ->
discretize against a breakpoint set -> compare words with a lookup-table
distance.  Breakpoints are arbitrary strictly increasing cut points; the
classic equiprobable-Gaussian cuts are one particular choice.

All functions are pure and all value types are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm


def _as_float_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d sequence, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """A finite real-valued observation sequence with an optional class label."""

    values: np.ndarray
    label: int | None = None

    def __post_init__(self):
        arr = _as_float_array(self.values)
        if arr.size < 1:
            raise ValueError("time series must contain at least one value")
        if not np.all(np.isfinite(arr)):
            raise ValueError("time series values must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class PAAVector:
    """Segment means of a series, plus the original length for distance scaling."""

    means: np.ndarray
    source_length: int

    def __post_init__(self):
        arr = _as_float_array(self.means)
        if not 1 <= arr.size <= self.source_length:
            raise ValueError(
                f"segment count {arr.size} outside [1, {self.source_length}]"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "means", arr)

    def __len__(self) -> int:
        return self.means.size


@dataclass(frozen=True)
class BreakpointSet:
    """Strictly increasing cut points splitting the real line into regions.

    ``alpha_size - 1`` cuts induce ``alpha_size`` symbol regions.
    """

    cuts: np.ndarray

    def __post_init__(self):
        arr = _as_float_array(self.cuts)
        if arr.size < 1:
            raise ValueError("need at least one cut point (alphabet size >= 2)")
        if not np.all(np.isfinite(arr)):
            raise ValueError("cut points must be finite")
        if not np.all(np.diff(arr) > 0):
            raise ValueError("cut points must be strictly increasing")
        arr.setflags(write=False)
        object.__setattr__(self, "cuts", arr)

    @property
    def alphabet_size(self) -> int:
        return self.cuts.size + 1

    def __len__(self) -> int:
        return self.cuts.size


@dataclass(frozen=True)
class SymbolicWord:
    """Discretized series: one symbol index per segment."""

    symbols: np.ndarray
    source_length: int

    def __post_init__(self):
        arr = np.asarray(self.symbols, dtype=np.int64)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("symbolic word must be a nonempty 1-d index sequence")
        if arr.min() < 0:
            raise ValueError("symbol indices must be nonnegative")
        arr.setflags(write=False)
        object.__setattr__(self, "symbols", arr)

    def __len__(self) -> int:
        return self.symbols.size


@dataclass(frozen=True)
class DistTable:
    """Symmetric symbol-pair distance lookup table.

    Adjacent or equal symbols are at distance zero; otherwise the distance is
    the gap between the cut regions, ``cuts[max(r,c)-1] - cuts[min(r,c)]``.
    """

    cells: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.cells, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("distance table must be square")
        arr.setflags(write=False)
        object.__setattr__(self, "cells", arr)

    @property
    def alphabet_size(self) -> int:
        return self.cells.shape[0]


def znormalize(series: TimeSeries) -> TimeSeries:
    """Shift and scale to mean 0 and population standard deviation 1.

    A constant series (zero deviation) maps to the all-zero series so that
    downstream discretization stays total.
    """
    values = series.values
    if np.ptp(values) == 0.0:
        return TimeSeries(np.zeros_like(values), series.label)
    centered = values - values.mean()
    # second centering pass: one rounding-error refinement so even
    # ill-conditioned inputs (tiny spread on a large offset) come out with
    # a mean at machine precision
    centered -= centered.mean()
    # pre-scale so squaring in std() can neither underflow nor overflow
    scale = float(np.max(np.abs(centered)))
    if scale == 0.0:
        return TimeSeries(np.zeros_like(values), series.label)
    scaled = centered / scale
    return TimeSeries(scaled / scaled.std(), series.label)


def paa(series: TimeSeries, segments: int) -> PAAVector:
    """Reduce a length-n series to `segments` means over equal-width frames.

    Frames have exact width n/segments.  When the boundary falls inside an
    observation, that observation contributes to both neighbouring frames in
    proportion to the overlap (fractional-frame weighting).  This keeps every
    frame's total weight at exactly n/segments, which is what preserves the
    lower-bounding guarantee of the lookup-table distance for every segment
    count, not just divisors of n.
    """
    n = len(series)
    if not 1 <= segments <= n:
        raise ValueError(f"segment count {segments} outside [1, {n}]")
    values = series.values
    if n % segments == 0:
        means = values.reshape(segments, n // segments).mean(axis=1)
        return PAAVector(means, n)

    # Work on the integer grid scaled by `segments`: observation j spans
    # [j*segments, (j+1)*segments), frame i spans [i*n, (i+1)*n).
    csum = np.concatenate(([0.0], np.cumsum(values)))

    def integral(pos: int) -> float:
        j, rem = divmod(pos, segments)
        total = csum[j]
        if rem:
            total += (rem / segments) * values[j]
        return total

    bounds = [integral(i * n) for i in range(segments + 1)]
    means = np.diff(bounds) * (segments / n)
    return PAAVector(means, n)


def gaussian_breakpoints(alphabet_size: int) -> BreakpointSet:
    """Cut points giving equal probability mass under the standard normal.

    ``cuts[i]`` is the (i+1)/alpha quantile of N(0, 1).
    """
    if alphabet_size < 2:
        raise ValueError("alphabet size must be at least 2")
    quantiles = np.arange(1, alphabet_size) / alphabet_size
    return BreakpointSet(norm.ppf(quantiles))


def discretize(paa_vector: PAAVector, cuts: BreakpointSet) -> SymbolicWord:
    """Map each segment mean to the index of the region it falls in.

    A mean exactly equal to a cut point takes the region above it, so the
    mapping is total and deterministic.
    """
    symbols = np.searchsorted(cuts.cuts, paa_vector.means, side="right")
    return SymbolicWord(symbols, paa_vector.source_length)


def build_dist_table(cuts: BreakpointSet) -> DistTable:
    """Build the symbol-pair lookup table for a breakpoint set.

    The construction applies unchanged to optimized (non-Gaussian) cuts.
    """
    alpha = cuts.alphabet_size
    c = cuts.cuts
    cells = np.zeros((alpha, alpha))
    for r in range(alpha):
        for col in range(r + 2, alpha):
            cells[r, col] = cells[col, r] = c[col - 1] - c[r]
    return DistTable(cells)


def _check_comparable(a: SymbolicWord, b: SymbolicWord) -> None:
    if len(a) != len(b):
        raise ValueError(f"word lengths differ: {len(a)} vs {len(b)}")
    if a.source_length != b.source_length:
        raise ValueError(
            f"source lengths differ: {a.source_length} vs {b.source_length}"
        )


def mindist(a: SymbolicWord, b: SymbolicWord, table: DistTable) -> float:
    """Lookup-table distance sqrt(n/N) * sqrt(sum_i dist(a_i, b_i)^2).

    Lower-bounds the Euclidean distance of the underlying z-normalized series
    for any valid breakpoint set.
    """
    _check_comparable(a, b)
    d = table.cells[a.symbols, b.symbols]
    return float(np.sqrt(a.source_length / len(a)) * np.sqrt(np.sum(d * d)))


def weighted_mindist(
    a: SymbolicWord, b: SymbolicWord, table: DistTable, weights
) -> float:
    """Lookup-table distance with per-segment weights on the squared terms.

    Reduces exactly to :func:`mindist` at unit weights and scales by sqrt(c)
    when all weights are multiplied by c > 0, so nearest-neighbour decisions
    are invariant to the overall weight scale.
    """
    _check_comparable(a, b)
    w = _as_float_array(weights)
    if w.size != len(a):
        raise ValueError(f"weight count {w.size} != word length {len(a)}")
    if np.any(w <= 0):
        raise ValueError("weights must be strictly positive")
    d = table.cells[a.symbols, b.symbols]
    return float(np.sqrt(a.source_length / len(a)) * np.sqrt(np.sum(w * d * d)))
