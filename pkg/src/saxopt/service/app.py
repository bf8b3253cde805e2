"""HTTP service wrapping the library.

Every endpoint is a pure request -> response job; dataset paths in requests
are resolved on the service host.  The CLI drives this app in-process by
default, so "service-local" and "client-local" coincide unless a remote
server is configured.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import __version__
from ..core import (
    BreakpointSet,
    TimeSeries,
    discretize,
    gaussian_breakpoints,
    paa,
    znormalize,
)
from ..data import (
    DatasetRegistry,
    format_ucr,
    generate_synthetic,
    parse_ucr,
)
from ..experiments import (
    ExperimentConfig,
    run_baseline_sax,
    run_comparison,
    run_one_step,
    run_two_step,
    report_csv,
    report_json,
    plot_data_csv,
    plot_svg,
)
from .schemas import (
    BaselineRequest,
    BaselineResponse,
    CompareRequest,
    CompareResponse,
    CompareRow,
    EncodeRequest,
    EncodeResponse,
    HealthResponse,
    OptimizeRequest,
    OptimizeResponse,
    SynthRequest,
    SynthResponse,
)

_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789+/"


def _letters(symbols) -> str:
    return "".join(_LETTERS[s] for s in symbols)


def create_app() -> FastAPI:
    app = FastAPI(title="saxopt", version=__version__)

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", version=__version__)

    @app.post("/encode", response_model=EncodeResponse)
    def encode(request: EncodeRequest):
        with _domain_errors():
            series = znormalize(TimeSeries(np.array(request.values), label=None))
            reduced = paa(series, request.segments)
            cuts = (
                BreakpointSet(np.array(request.cuts))
                if request.cuts is not None
                else gaussian_breakpoints(request.alpha)
            )
            if cuts.alphabet_size != request.alpha:
                raise ValueError(
                    f"{len(cuts)} cuts do not match alphabet size {request.alpha}"
                )
            word = discretize(reduced, cuts)
            return EncodeResponse(
                symbols=word.symbols.tolist(),
                letters=_letters(word.symbols),
                cuts=cuts.cuts.tolist(),
                paa_means=reduced.means.tolist(),
                source_length=word.source_length,
            )

    @app.post("/optimize", response_model=OptimizeResponse)
    def optimize(request: OptimizeRequest):
        with _domain_errors():
            train = parse_ucr(request.train_path)
            gens = request.de.generations
            cfg = ExperimentConfig(
                segments=request.segments,
                popsize=request.de.popsize,
                f=request.de.f,
                cr=request.de.cr,
                one_step_generations=gens,
                two_step_generations=(gens - gens // 2, gens // 2),
                seeds=(request.seed,),
                breakpoint_bounds=request.breakpoint_bounds,
                weight_bounds=request.weight_bounds,
            )
            if request.method == "one_step":
                fit = run_one_step(train, cfg, request.alpha, request.seed)
            elif request.method == "two_step":
                fit = run_two_step(train, cfg, request.alpha, request.seed)
            else:
                raise ValueError(
                    f"unknown method {request.method!r}; use one_step or two_step"
                )
            return OptimizeResponse(
                dataset=train.name,
                method=request.method,
                alpha=request.alpha,
                segments=fit.params.segments,
                seed=request.seed,
                cuts=fit.params.cuts.cuts.tolist(),
                weights=fit.params.weights.tolist(),
                train_error=fit.train_error,
                evaluations=fit.evaluations,
                init_evaluations=fit.init_evaluations,
                trace=list(fit.trace),
            )

    @app.post("/baseline", response_model=BaselineResponse)
    def baseline(request: BaselineRequest):
        with _domain_errors():
            train = parse_ucr(request.train_path)
            test = parse_ucr(request.test_path)
            cfg = ExperimentConfig(segments=request.segments, mode=request.mode)
            train_error, test_error = run_baseline_sax(train, test, cfg, request.alpha)
            return BaselineResponse(
                dataset=train.name,
                alpha=request.alpha,
                segments=cfg.segments_for(train.length),
                mode=request.mode,
                train_error=train_error,
                test_error=test_error,
            )

    @app.post("/compare", response_model=CompareResponse)
    def compare(request: CompareRequest):
        with _domain_errors():
            registry = DatasetRegistry(request.data_root)
            if request.manifest:
                registry.load_manifest(request.manifest)
            splits = {name: registry.load(name) for name in request.datasets}
            cfg = ExperimentConfig(
                datasets=tuple(request.datasets),
                data_root=request.data_root,
                alphabets=tuple(request.alphabets),
                segments=request.segments,
                popsize=request.popsize,
                f=request.f,
                cr=request.cr,
                one_step_generations=request.one_step_generations,
                two_step_generations=tuple(request.two_step_generations),
                seeds=tuple(request.seeds),
                mode=request.mode,
                breakpoint_bounds=request.breakpoint_bounds,
                weight_bounds=request.weight_bounds,
                max_generations=request.max_generations,
            )
            report = run_comparison(cfg, splits)
            artifacts = {
                "report.csv": report_csv(report),
                "report.json": report_json(report),
            }
            for dataset in sorted({r.dataset for r in report.rows}):
                artifacts[f"plots/{dataset}.csv"] = plot_data_csv(report, dataset)
                artifacts[f"plots/{dataset}.svg"] = plot_svg(report, dataset)
            return CompareResponse(
                mode=report.mode,
                rows=[
                    CompareRow(
                        dataset=r.dataset,
                        alpha=r.alpha,
                        method=r.method,
                        seed=r.seed,
                        train_error=r.train_error,
                        test_error=r.test_error,
                        gap=r.gap,
                        evaluations=r.evaluations,
                    )
                    for r in report.rows
                ],
                aggregates=report.aggregates(),
                overfitting=report.overfitting_summary(),
                artifacts=artifacts,
            )

    @app.post("/synth", response_model=SynthResponse)
    def synth(request: SynthRequest):
        with _domain_errors():
            train = generate_synthetic(
                request.generator,
                request.train_count,
                request.length,
                request.noise,
                request.seed,
                classes=request.classes,
                name=request.name,
            )
            test = generate_synthetic(
                request.generator,
                request.test_count,
                request.length,
                request.noise,
                request.seed + 1,
                classes=request.classes,
                name=request.name,
            )
            return SynthResponse(
                name=request.name,
                train_text=format_ucr(train),
                test_text=format_ucr(test),
            )

    return app


class _domain_errors:
    """Translate library errors into HTTP error responses."""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is None:
            return False
        if isinstance(exc, FileNotFoundError):
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        if isinstance(exc, (ValueError, KeyError)):
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return False


app = create_app()
