"""Request/response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str
    version: str


class EncodeRequest(BaseModel):
    values: list[float] = Field(min_length=1)
    alpha: int = Field(ge=2, le=64)
    segments: int = Field(ge=1)
    cuts: list[float] | None = None  # default: Gaussian cuts for alpha


class EncodeResponse(BaseModel):
    symbols: list[int]
    letters: str
    cuts: list[float]
    paa_means: list[float]
    source_length: int


class DEParams(BaseModel):
    popsize: int = 12
    f: float = 0.9
    cr: float = 0.5
    generations: int = 100  # one-step total; two-step splits it in half


class OptimizeRequest(BaseModel):
    train_path: str
    method: str  # "one_step" | "two_step"
    alpha: int = Field(ge=2)
    segments: int | None = None
    seed: int = 1
    de: DEParams = DEParams()
    breakpoint_bounds: tuple[float, float] = (-3.0, 3.0)
    weight_bounds: tuple[float, float] = (0.01, 2.0)


class OptimizeResponse(BaseModel):
    dataset: str
    method: str
    alpha: int
    segments: int
    seed: int
    cuts: list[float]
    weights: list[float]
    train_error: float
    evaluations: int
    init_evaluations: int
    trace: list[float]


class BaselineRequest(BaseModel):
    train_path: str
    test_path: str
    alpha: int = Field(ge=2)
    segments: int | None = None
    mode: str = "holdout"


class BaselineResponse(BaseModel):
    dataset: str
    alpha: int
    segments: int
    mode: str
    train_error: float
    test_error: float


class CompareRequest(BaseModel):
    """Mirror of the experiment configuration, plus dataset resolution."""

    data_root: str
    datasets: list[str] = Field(min_length=1)
    manifest: str | None = None
    alphabets: list[int] = [3, 10, 20]
    segments: int | None = None
    popsize: int = 12
    f: float = 0.9
    cr: float = 0.5
    one_step_generations: int = 100
    two_step_generations: tuple[int, int] = (50, 50)
    seeds: list[int] = [1, 2, 3, 4, 5]
    mode: str = "holdout"
    breakpoint_bounds: tuple[float, float] = (-3.0, 3.0)
    weight_bounds: tuple[float, float] = (0.01, 2.0)
    max_generations: int | None = None


class CompareRow(BaseModel):
    dataset: str
    alpha: int
    method: str
    seed: int
    train_error: float
    test_error: float
    gap: float
    evaluations: int


class CompareResponse(BaseModel):
    mode: str
    rows: list[CompareRow]
    aggregates: list[dict]
    overfitting: dict
    artifacts: dict[str, str]  # relative path -> file content


class SynthRequest(BaseModel):
    generator: str = "control_chart"
    train_count: int = Field(default=60, ge=2)
    test_count: int = Field(default=60, ge=2)
    length: int = Field(default=60, ge=4)
    noise: float = 0.5
    seed: int = 0
    classes: int | None = None
    name: str = "synthetic"


class SynthResponse(BaseModel):
    name: str
    train_text: str
    test_text: str
