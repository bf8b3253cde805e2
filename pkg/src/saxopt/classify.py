"""1-NN classification over symbolic words.

Leave-one-out error doubles as the optimizer's training fitness; holdout
error is the evaluation metric for learned parameters on a test split.
Distance ties are broken by the lowest candidate index so results never
depend on evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    BreakpointSet,
    DistTable,
    SymbolicWord,
    TimeSeries,
    paa,
    znormalize,
)


@dataclass(frozen=True)
class Dataset:
    """Labeled series of one common length."""

    series: tuple[TimeSeries, ...]
    name: str = ""

    def __post_init__(self):
        series = tuple(self.series)
        if not series:
            raise ValueError("dataset must contain at least one series")
        n = len(series[0])
        for i, s in enumerate(series):
            if len(s) != n:
                raise ValueError(
                    f"series {i} has length {len(s)}, expected {n} ({self.name!r})"
                )
            if s.label is None:
                raise ValueError(f"series {i} has no label ({self.name!r})")
        object.__setattr__(self, "series", series)

    @property
    def length(self) -> int:
        return len(self.series[0])

    @property
    def size(self) -> int:
        return len(self.series)

    @property
    def labels(self) -> np.ndarray:
        return np.array([s.label for s in self.series], dtype=np.int64)


@dataclass(frozen=True)
class RepresentationParams:
    """Everything needed to encode and compare series: cuts plus weights."""

    alphabet_size: int
    segments: int
    cuts: BreakpointSet
    weights: np.ndarray

    def __post_init__(self):
        if self.cuts.alphabet_size != self.alphabet_size:
            raise ValueError(
                f"{len(self.cuts)} cuts do not match alphabet size {self.alphabet_size}"
            )
        w = np.asarray(self.weights, dtype=np.float64)
        if w.size != self.segments:
            raise ValueError(f"{w.size} weights for {self.segments} segments")
        if np.any(w <= 0):
            raise ValueError("weights must be strictly positive")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)


def paa_matrix(data: Dataset, segments: int) -> np.ndarray:
    """Z-normalize and PAA-reduce every series; rows follow dataset order."""
    if segments > data.length:
        raise ValueError(
            f"segment count {segments} exceeds series length {data.length}"
        )
    return np.vstack(
        [paa(znormalize(s), segments).means for s in data.series]
    )


def encode_dataset(data: Dataset, params: RepresentationParams) -> list[SymbolicWord]:
    """Normalize, reduce, and discretize every series, preserving order."""
    means = paa_matrix(data, params.segments)
    symbols = np.searchsorted(params.cuts.cuts, means, side="right")
    return [SymbolicWord(row, data.length) for row in symbols]


def word_matrix(words: list[SymbolicWord]) -> tuple[np.ndarray, int]:
    """Stack words into a (count, segments) index matrix; checks uniformity."""
    if not words:
        raise ValueError("no words to stack")
    n = words[0].source_length
    width = len(words[0])
    for i, w in enumerate(words):
        if len(w) != width or w.source_length != n:
            raise ValueError(f"word {i} has inconsistent shape")
    return np.vstack([w.symbols for w in words]), n


def _pairwise_sq(
    rows: np.ndarray,
    cols: np.ndarray,
    sq_cells: np.ndarray,
    weights: np.ndarray,
) -> np.ndarray:
    """Weighted squared lookup distances between two word matrices.

    The sqrt(n/N) scale is omitted: it is common to every pair and cannot
    change a nearest-neighbour decision.
    """
    out = np.zeros((rows.shape[0], cols.shape[0]))
    for s in range(rows.shape[1]):
        out += weights[s] * sq_cells[rows[:, s][:, None], cols[None, :, s]]
    return out


def nearest_neighbors_sq(dist_sq: np.ndarray) -> np.ndarray:
    """Argmin per row; `argmin` returns the first minimum, i.e. lowest index."""
    return np.argmin(dist_sq, axis=1)


def loo_error(
    words: list[SymbolicWord],
    labels,
    table: DistTable,
    weights,
) -> float:
    """Leave-one-out 1-NN error: misses / total, in [0, 1].

    Each word is labeled by its nearest neighbour among all the others under
    the weighted lookup-table distance.
    """
    if len(words) < 2:
        raise ValueError("leave-one-out needs at least 2 words")
    matrix, _ = word_matrix(words)
    y = np.asarray(labels, dtype=np.int64)
    if y.size != matrix.shape[0]:
        raise ValueError(f"{y.size} labels for {matrix.shape[0]} words")
    w = np.asarray(weights, dtype=np.float64)
    if w.size != matrix.shape[1]:
        raise ValueError(f"{w.size} weights for {matrix.shape[1]} segments")
    sq = table.cells * table.cells
    dist_sq = _pairwise_sq(matrix, matrix, sq, w)
    np.fill_diagonal(dist_sq, np.inf)
    predicted = y[nearest_neighbors_sq(dist_sq)]
    return float(np.count_nonzero(predicted != y)) / y.size


def holdout_error(
    train_words: list[SymbolicWord],
    train_labels,
    test_words: list[SymbolicWord],
    test_labels,
    table: DistTable,
    weights,
) -> float:
    """1-NN error of test words against the training words as references."""
    if not train_words:
        raise ValueError("holdout evaluation needs a nonempty training set")
    if not test_words:
        raise ValueError("holdout evaluation needs a nonempty test set")
    train_matrix, n_train = word_matrix(train_words)
    test_matrix, n_test = word_matrix(test_words)
    if train_matrix.shape[1] != test_matrix.shape[1] or n_train != n_test:
        raise ValueError("train and test words have inconsistent shapes")
    y_train = np.asarray(train_labels, dtype=np.int64)
    y_test = np.asarray(test_labels, dtype=np.int64)
    if y_train.size != train_matrix.shape[0]:
        raise ValueError(f"{y_train.size} labels for {train_matrix.shape[0]} words")
    if y_test.size != test_matrix.shape[0]:
        raise ValueError(f"{y_test.size} labels for {test_matrix.shape[0]} words")
    w = np.asarray(weights, dtype=np.float64)
    sq = table.cells * table.cells
    dist_sq = _pairwise_sq(test_matrix, train_matrix, sq, w)
    predicted = y_train[nearest_neighbors_sq(dist_sq)]
    return float(np.count_nonzero(predicted != y_test)) / y_test.size
