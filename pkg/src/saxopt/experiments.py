"""Training protocols and the train/test comparison harness.

Two ways to fit a representation with a fixed evaluation budget:

* one-step: a single evolution run over the concatenated genome
  ``[cuts | weights]`` for the full generation budget;
* two-step: evolve cuts alone at unit weights for half the budget, freeze
  the best cuts, then evolve weights alone for the other half.

Both use leave-one-out 1-NN error on the training set as fitness, so equal
generation budgets mean equal optimization cost.  The comparison harness
runs both plus the unoptimized Gaussian-cut baseline over several seeds and
reports train error, test error, and the overfitting gap per cell.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .classify import (
    Dataset,
    RepresentationParams,
    encode_dataset,
    holdout_error,
    loo_error,
    nearest_neighbors_sq,
    _pairwise_sq,
    paa_matrix,
)
from .core import BreakpointSet, build_dist_table, gaussian_breakpoints
from .de import DEConfig, FitnessFunction, evolve, repair_increasing

METHOD_BASELINE = "gaussian_sax"
METHOD_ONE_STEP = "one_step"
METHOD_TWO_STEP = "two_step"
METHODS = (METHOD_BASELINE, METHOD_ONE_STEP, METHOD_TWO_STEP)

EVALUATION_MODES = ("holdout", "loo")


@dataclass(frozen=True)
class ExperimentConfig:
    """Full harness configuration.

    The one-step generation budget must equal the sum of the two-step
    budgets; that is the equal-cost contract the comparison rests on.
    `max_generations`, when set, caps the one-step budget and re-splits the
    two-step budget into halves of the same total, preserving the contract.
    `segments` of None selects length // 8 per dataset, floored at 2.
    """

    datasets: tuple[str, ...] = ()
    data_root: str | None = None
    alphabets: tuple[int, ...] = (3, 10, 20)
    segments: int | None = None
    popsize: int = 12
    f: float = 0.9
    cr: float = 0.5
    one_step_generations: int = 100
    two_step_generations: tuple[int, int] = (50, 50)
    seeds: tuple[int, ...] = (1, 2, 3, 4, 5)
    mode: str = "holdout"
    breakpoint_bounds: tuple[float, float] = (-3.0, 3.0)
    weight_bounds: tuple[float, float] = (0.01, 2.0)
    max_generations: int | None = None

    def __post_init__(self):
        if self.one_step_generations != sum(self.two_step_generations):
            raise ValueError(
                "one-step generations must equal the sum of the two-step "
                f"budgets ({self.one_step_generations} != "
                f"{sum(self.two_step_generations)})"
            )
        if self.mode not in EVALUATION_MODES:
            raise ValueError(f"mode must be one of {EVALUATION_MODES}")
        if any(a < 2 for a in self.alphabets):
            raise ValueError("alphabet sizes must be at least 2")
        if self.max_generations is not None and self.max_generations < 2:
            raise ValueError("max_generations must be at least 2")
        if not self.seeds:
            raise ValueError("need at least one seed")

    def budgets(self) -> tuple[int, tuple[int, int]]:
        """Effective (one-step, (step1, step2)) generation budgets."""
        one = self.one_step_generations
        two = self.two_step_generations
        if self.max_generations is not None and self.max_generations < one:
            one = self.max_generations
            two = (one - one // 2, one // 2)
        return one, two

    def segments_for(self, length: int) -> int:
        if self.segments is not None:
            if not 1 <= self.segments <= length:
                raise ValueError(
                    f"segment count {self.segments} outside [1, {length}]"
                )
            return self.segments
        return min(length, max(2, length // 8))


@dataclass(frozen=True)
class FitResult:
    """Outcome of one training run."""

    params: RepresentationParams
    train_error: float
    trace: list[float] = field(repr=False)
    evaluations: int = 0
    init_evaluations: int = 0


class _EncodedTrain:
    """Per-dataset precomputation shared by every fitness evaluation."""

    def __init__(self, train: Dataset, segments: int):
        self.means = paa_matrix(train, segments)
        self.labels = train.labels
        self.segments = segments
        self.size = train.size
        if self.size < 2:
            raise ValueError("training fitness needs at least 2 series")

    def words(self, cuts: np.ndarray) -> np.ndarray:
        return np.searchsorted(cuts, self.means, side="right")

    def loo(self, cuts: np.ndarray, weights: np.ndarray) -> float:
        sq = _sq_table(cuts)
        words = self.words(cuts)
        dist_sq = _pairwise_sq(words, words, sq, weights)
        np.fill_diagonal(dist_sq, np.inf)
        predicted = self.labels[nearest_neighbors_sq(dist_sq)]
        return float(np.count_nonzero(predicted != self.labels)) / self.size


def _sq_table(cuts: np.ndarray) -> np.ndarray:
    alpha = cuts.size + 1
    cells = np.zeros((alpha, alpha))
    for r in range(alpha):
        for c in range(r + 2, alpha):
            gap = cuts[c - 1] - cuts[r]
            cells[r, c] = cells[c, r] = gap
    return cells * cells


class JointFitness(FitnessFunction):
    """Genome ``[cuts | weights]``; leave-one-out train error."""

    def __init__(self, encoded: _EncodedTrain, alphabet_size: int,
                 breakpoint_bounds: tuple[float, float]):
        self.encoded = encoded
        self.n_cuts = alphabet_size - 1
        self.dimension = self.n_cuts + encoded.segments
        self.breakpoint_bounds = breakpoint_bounds

    def repair(self, genome: np.ndarray) -> np.ndarray:
        lo, hi = self.breakpoint_bounds
        out = genome.copy()
        out[: self.n_cuts] = repair_increasing(genome[: self.n_cuts], lo, hi)
        return out

    def evaluate(self, genome: np.ndarray) -> float:
        return self.encoded.loo(genome[: self.n_cuts], genome[self.n_cuts :])


class CutsFitness(FitnessFunction):
    """Genome = cuts only, evaluated at fixed (default unit) weights."""

    def __init__(self, encoded: _EncodedTrain, alphabet_size: int,
                 breakpoint_bounds: tuple[float, float],
                 weights: np.ndarray | None = None):
        self.encoded = encoded
        self.dimension = alphabet_size - 1
        self.breakpoint_bounds = breakpoint_bounds
        self.weights = (
            np.ones(encoded.segments) if weights is None else np.asarray(weights)
        )

    def repair(self, genome: np.ndarray) -> np.ndarray:
        lo, hi = self.breakpoint_bounds
        return repair_increasing(genome, lo, hi)

    def evaluate(self, genome: np.ndarray) -> float:
        return self.encoded.loo(genome, self.weights)


class WeightsFitness(FitnessFunction):
    """Genome = weights only, cuts frozen.

    With the words fixed, the per-segment squared lookup distances are
    precomputed once; each evaluation is a weighted sum over segments.
    """

    def __init__(self, encoded: _EncodedTrain, cuts: np.ndarray):
        self.labels = encoded.labels
        self.size = encoded.size
        self.dimension = encoded.segments
        words = encoded.words(cuts)
        sq = _sq_table(cuts)
        self.per_segment = np.stack(
            [sq[words[:, s][:, None], words[None, :, s]]
             for s in range(encoded.segments)]
        )

    def evaluate(self, genome: np.ndarray) -> float:
        dist_sq = np.tensordot(genome, self.per_segment, axes=1)
        np.fill_diagonal(dist_sq, np.inf)
        predicted = self.labels[nearest_neighbors_sq(dist_sq)]
        return float(np.count_nonzero(predicted != self.labels)) / self.size


def _gene_bounds(
    cfg: ExperimentConfig, n_cuts: int, n_weights: int
) -> tuple[tuple[float, float], ...]:
    return tuple([cfg.breakpoint_bounds] * n_cuts + [cfg.weight_bounds] * n_weights)


def run_one_step(
    train: Dataset, cfg: ExperimentConfig, alphabet_size: int, seed: int
) -> FitResult:
    """Jointly evolve cuts and weights for the full generation budget."""
    segments = cfg.segments_for(train.length)
    encoded = _EncodedTrain(train, segments)
    fitness = JointFitness(encoded, alphabet_size, cfg.breakpoint_bounds)
    generations, _ = cfg.budgets()
    de_cfg = DEConfig(
        popsize=cfg.popsize,
        f=cfg.f,
        cr=cfg.cr,
        generations=generations,
        seed=seed,
        bounds=_gene_bounds(cfg, alphabet_size - 1, segments),
    )
    result = evolve(de_cfg, fitness)
    genome = result.best.genome
    params = RepresentationParams(
        alphabet_size=alphabet_size,
        segments=segments,
        cuts=BreakpointSet(genome[: alphabet_size - 1]),
        weights=genome[alphabet_size - 1 :],
    )
    return FitResult(
        params,
        result.best.fitness,
        result.history,
        result.evaluations,
        result.init_evaluations,
    )


def run_two_step(
    train: Dataset, cfg: ExperimentConfig, alphabet_size: int, seed: int
) -> FitResult:
    """Evolve cuts at unit weights, then weights at the frozen best cuts.

    The unit-weight vector is injected into the second population, so the
    final train error can never exceed the first step's result.
    """
    segments = cfg.segments_for(train.length)
    encoded = _EncodedTrain(train, segments)
    _, (gens_cuts, gens_weights) = cfg.budgets()

    cuts_cfg = DEConfig(
        popsize=cfg.popsize,
        f=cfg.f,
        cr=cfg.cr,
        generations=gens_cuts,
        seed=seed,
        bounds=_gene_bounds(cfg, alphabet_size - 1, 0),
    )
    step1 = evolve(cuts_cfg, CutsFitness(encoded, alphabet_size, cfg.breakpoint_bounds))
    best_cuts = step1.best.genome

    weights_cfg = DEConfig(
        popsize=cfg.popsize,
        f=cfg.f,
        cr=cfg.cr,
        generations=gens_weights,
        seed=seed + 1,
        bounds=_gene_bounds(cfg, 0, segments),
    )
    step2 = evolve(
        weights_cfg,
        WeightsFitness(encoded, best_cuts),
        seed_genomes=[np.ones(segments)],
    )
    params = RepresentationParams(
        alphabet_size=alphabet_size,
        segments=segments,
        cuts=BreakpointSet(best_cuts),
        weights=step2.best.genome,
    )
    return FitResult(
        params,
        step2.best.fitness,
        step1.history + step2.history,
        step1.evaluations + step2.evaluations,
        step1.init_evaluations + step2.init_evaluations,
    )


def baseline_params(alphabet_size: int, segments: int) -> RepresentationParams:
    """Equiprobable Gaussian cuts and unit weights: the unoptimized reference."""
    return RepresentationParams(
        alphabet_size=alphabet_size,
        segments=segments,
        cuts=gaussian_breakpoints(alphabet_size),
        weights=np.ones(segments),
    )


def train_error_of(train: Dataset, params: RepresentationParams) -> float:
    words = encode_dataset(train, params)
    return loo_error(words, train.labels, build_dist_table(params.cuts), params.weights)


def evaluate_params(
    train: Dataset, test: Dataset, params: RepresentationParams, mode: str
) -> float:
    """Test-set error of learned parameters.

    `holdout` labels each test series by its nearest training series, the
    standard archive protocol; `loo` runs leave-one-out inside the test set,
    the literal reading of the evaluation description.
    """
    if mode not in EVALUATION_MODES:
        raise ValueError(f"mode must be one of {EVALUATION_MODES}")
    table = build_dist_table(params.cuts)
    test_words = encode_dataset(test, params)
    if mode == "loo":
        return loo_error(test_words, test.labels, table, params.weights)
    train_words = encode_dataset(train, params)
    return holdout_error(
        train_words, train.labels, test_words, test.labels, table, params.weights
    )


def run_baseline_sax(
    train: Dataset, test: Dataset, cfg: ExperimentConfig, alphabet_size: int
) -> tuple[float, float]:
    """Train and test error of plain Gaussian-cut encoding; seed-free."""
    segments = cfg.segments_for(train.length)
    params = baseline_params(alphabet_size, segments)
    return (
        train_error_of(train, params),
        evaluate_params(train, test, params, cfg.mode),
    )


@dataclass(frozen=True)
class ReportRow:
    """One (dataset, alphabet, method, seed) cell of the comparison."""

    dataset: str
    alpha: int
    method: str
    seed: int
    train_error: float
    test_error: float
    evaluations: int
    cuts: tuple[float, ...] = ()
    weights: tuple[float, ...] = ()
    trace: tuple[float, ...] = field(default=(), repr=False)

    @property
    def gap(self) -> float:
        return self.test_error - self.train_error


@dataclass(frozen=True)
class ExperimentReport:
    """All cells plus per-(dataset, alphabet, method) seed aggregates."""

    rows: tuple[ReportRow, ...]
    mode: str

    def aggregates(self) -> list[dict]:
        groups: dict[tuple[str, int, str], list[ReportRow]] = {}
        for row in self.rows:
            groups.setdefault((row.dataset, row.alpha, row.method), []).append(row)
        out = []
        for (dataset, alpha, method), rows in sorted(groups.items()):
            train = [r.train_error for r in rows]
            test = [r.test_error for r in rows]
            gaps = [r.gap for r in rows]
            out.append(
                {
                    "dataset": dataset,
                    "alpha": alpha,
                    "method": method,
                    "seeds": len(rows),
                    "mean_train_error": sum(train) / len(train),
                    "min_train_error": min(train),
                    "max_train_error": max(train),
                    "mean_test_error": sum(test) / len(test),
                    "min_test_error": min(test),
                    "max_test_error": max(test),
                    "mean_gap": sum(gaps) / len(gaps),
                }
            )
        return out

    def overfitting_summary(self) -> dict:
        """Mean overfitting gap per method, across the whole suite.

        The expectation (informational, never a hard failure: single-run
        stochastic optimizers vary) is that the method with the lower
        training error overfits more, i.e. one-step's mean gap is at least
        two-step's.
        """
        per_method: dict[str, list[float]] = {}
        for row in self.rows:
            per_method.setdefault(row.method, []).append(row.gap)
        means = {
            method: sum(gaps) / len(gaps) for method, gaps in per_method.items()
        }
        summary = {"mean_gap_by_method": means}
        if METHOD_ONE_STEP in means and METHOD_TWO_STEP in means:
            summary["one_step_gap_minus_two_step_gap"] = (
                means[METHOD_ONE_STEP] - means[METHOD_TWO_STEP]
            )
            summary["one_step_overfits_at_least_as_much"] = (
                means[METHOD_ONE_STEP] >= means[METHOD_TWO_STEP]
            )
        return summary


def run_comparison(cfg: ExperimentConfig, splits) -> ExperimentReport:
    """Run baseline, one-step, and two-step on every (dataset, alpha, seed).

    `splits` maps dataset name -> (train, test) Dataset pair; loading from
    disk is the caller's concern (see saxopt.data.DatasetRegistry).
    Baseline rows repeat identical values across seeds, making the report
    shape uniform: |datasets| x |alphabets| x |seeds| x 3 methods.
    """
    rows: list[ReportRow] = []
    for name in cfg.datasets:
        train, test = splits[name]
        for alpha in cfg.alphabets:
            base_train, base_test = run_baseline_sax(train, test, cfg, alpha)
            for seed in cfg.seeds:
                rows.append(
                    ReportRow(
                        dataset=name,
                        alpha=alpha,
                        method=METHOD_BASELINE,
                        seed=seed,
                        train_error=base_train,
                        test_error=base_test,
                        evaluations=0,
                    )
                )
                for method, runner in (
                    (METHOD_ONE_STEP, run_one_step),
                    (METHOD_TWO_STEP, run_two_step),
                ):
                    fit = runner(train, cfg, alpha, seed)
                    rows.append(
                        ReportRow(
                            dataset=name,
                            alpha=alpha,
                            method=method,
                            seed=seed,
                            train_error=fit.train_error,
                            test_error=evaluate_params(
                                train, test, fit.params, cfg.mode
                            ),
                            evaluations=fit.evaluations,
                            cuts=tuple(float(c) for c in fit.params.cuts.cuts),
                            weights=tuple(float(w) for w in fit.params.weights),
                            trace=tuple(fit.trace),
                        )
                    )
    return ExperimentReport(tuple(rows), cfg.mode)


# ---------------------------------------------------------------------------
# Report rendering.  Floats are formatted with repr (shortest round-trip),
# so identical runs produce byte-identical files.

CSV_COLUMNS = (
    "dataset",
    "alpha",
    "method",
    "seed",
    "train_error",
    "test_error",
    "gap",
    "evaluations",
)


def report_csv(report: ExperimentReport) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for r in report.rows:
        lines.append(
            ",".join(
                (
                    r.dataset,
                    str(r.alpha),
                    r.method,
                    str(r.seed),
                    repr(r.train_error),
                    repr(r.test_error),
                    repr(r.gap),
                    str(r.evaluations),
                )
            )
        )
    return "\n".join(lines) + "\n"


def report_json(report: ExperimentReport) -> str:
    payload = {
        "mode": report.mode,
        "rows": [
            {
                "dataset": r.dataset,
                "alpha": r.alpha,
                "method": r.method,
                "seed": r.seed,
                "train_error": r.train_error,
                "test_error": r.test_error,
                "gap": r.gap,
                "evaluations": r.evaluations,
                "cuts": list(r.cuts),
                "weights": list(r.weights),
                "trace": list(r.trace),
            }
            for r in report.rows
        ],
        "aggregates": report.aggregates(),
        "overfitting": report.overfitting_summary(),
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def plot_data_csv(report: ExperimentReport, dataset: str) -> str:
    """Grouped-bar data: mean test error per (alphabet, method)."""
    lines = ["alpha,method,mean_test_error"]
    for agg in report.aggregates():
        if agg["dataset"] == dataset:
            lines.append(
                f"{agg['alpha']},{agg['method']},{repr(agg['mean_test_error'])}"
            )
    return "\n".join(lines) + "\n"


_BAR_COLORS = {
    METHOD_BASELINE: "#9e9e9e",
    METHOD_ONE_STEP: "#1f77b4",
    METHOD_TWO_STEP: "#d62728",
}


def plot_svg(report: ExperimentReport, dataset: str) -> str:
    """Standalone grouped-bar chart of mean test error by alphabet size."""
    aggs = [a for a in report.aggregates() if a["dataset"] == dataset]
    alphas = sorted({a["alpha"] for a in aggs})
    values = {(a["alpha"], a["method"]): a["mean_test_error"] for a in aggs}

    width, height = 640, 400
    left, right, top, bottom = 60, 20, 40, 60
    plot_w = width - left - right
    plot_h = height - top - bottom
    y_max = max(0.05, max(values.values(), default=0.0)) * 1.1

    group_w = plot_w / max(1, len(alphas))
    bar_w = group_w / (len(METHODS) + 1)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{dataset}: test error '
        f"({report.mode})</text>",
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" '
        'stroke="black"/>',
        f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" '
        f'y2="{top + plot_h}" stroke="black"/>',
    ]
    for tick in range(5):
        frac = tick / 4
        y = top + plot_h * (1 - frac)
        parts.append(
            f'<line x1="{left - 4}" y1="{y:.1f}" x2="{left}" y2="{y:.1f}" '
            'stroke="black"/>'
        )
        parts.append(
            f'<text x="{left - 8}" y="{y + 4:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{frac * y_max:.3f}</text>'
        )
    for gi, alpha in enumerate(alphas):
        gx = left + gi * group_w
        for mi, method in enumerate(METHODS):
            value = values.get((alpha, method), 0.0)
            bar_h = plot_h * (value / y_max)
            x = gx + bar_w * (mi + 0.5)
            y = top + plot_h - bar_h
            parts.append(
                f'<rect x="{x:.1f}" y="{y:.1f}" width="{bar_w:.1f}" '
                f'height="{bar_h:.1f}" fill="{_BAR_COLORS[method]}">'
                f"<title>{method} alpha={alpha}: {value:.4f}</title></rect>"
            )
        parts.append(
            f'<text x="{gx + group_w / 2:.1f}" y="{top + plot_h + 18}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="12">'
            f"alpha={alpha}</text>"
        )
    for mi, method in enumerate(METHODS):
        lx = left + mi * 150
        ly = height - 22
        parts.append(
            f'<rect x="{lx}" y="{ly - 10}" width="12" height="12" '
            f'fill="{_BAR_COLORS[method]}"/>'
        )
        parts.append(
            f'<text x="{lx + 18}" y="{ly}" font-family="sans-serif" '
            f'font-size="12">{method}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_report(report: ExperimentReport, out_dir) -> dict[str, str]:
    """Write report.csv, report.json, and plots/<dataset>.{csv,svg}.

    Returns the relative path -> content mapping that was written.
    """
    from pathlib import Path

    out = Path(out_dir)
    (out / "plots").mkdir(parents=True, exist_ok=True)
    artifacts = {
        "report.csv": report_csv(report),
        "report.json": report_json(report),
    }
    for dataset in sorted({r.dataset for r in report.rows}):
        artifacts[f"plots/{dataset}.csv"] = plot_data_csv(report, dataset)
        artifacts[f"plots/{dataset}.svg"] = plot_svg(report, dataset)
    for rel, content in artifacts.items():
        (out / rel).write_text(content)
    return artifacts
