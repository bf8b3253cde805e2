"""Dataset ingestion: archive flat files, a name registry, and synthetic data.

The flat format is one series per line, class label first, values after,
either comma- or whitespace-delimited (archive versions differ).  Labels are
integers; numeric-but-non-integral labels such as ``1.0000000e+00`` are
rounded with a warning.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .classify import Dataset
from .core import TimeSeries

# Names pre-registered in every registry; train/test files are resolved
# lazily so a registry can be created before the user drops the data in.
DEFAULT_DATASET_NAMES = (
    "DiatomSizeReduction",
    "FaceFour",
    "MoteStrain",
    "SonyAIBORobotSurfaceII",
    "synthetic_control",
    "TwoLeadECG",
)

_SPLIT_SUFFIXES = ("", ".txt", ".tsv", ".csv")


class DatasetFormatError(ValueError):
    """A flat-file row that cannot be parsed; carries file/line/column."""

    def __init__(self, message: str, source: str, line: int, column: int | None = None):
        location = f"{source}:{line}"
        if column is not None:
            location += f":{column}"
        super().__init__(f"{location}: {message}")
        self.source = source
        self.line = line
        self.column = column


def _parse_label(field: str, source: str, line: int) -> int:
    try:
        raw = float(field)
    except ValueError:
        raise DatasetFormatError(
            f"label {field!r} is not numeric", source, line, column=1
        ) from None
    label = int(round(raw))
    if abs(raw - label) > 1e-9:
        warnings.warn(
            f"{source}:{line}: non-integer label {field!r} rounded to {label}",
            stacklevel=3,
        )
    return label


def parse_ucr_text(text: str, source: str = "<string>", name: str = "") -> Dataset:
    """Parse flat-format content; line numbers are 1-based and preserved."""
    series: list[TimeSeries] = []
    expected: int | None = None
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line:
            continue
        fields = line.split(",") if "," in line else line.split()
        fields = [f for f in (field.strip() for field in fields) if f]
        if len(fields) < 2:
            raise DatasetFormatError(
                "row needs a label and at least one value", source, lineno
            )
        label = _parse_label(fields[0], source, lineno)
        values = np.empty(len(fields) - 1)
        for col, field in enumerate(fields[1:], start=2):
            try:
                values[col - 2] = float(field)
            except ValueError:
                raise DatasetFormatError(
                    f"value {field!r} is not numeric", source, lineno, column=col
                ) from None
        if expected is None:
            expected = values.size
        elif values.size != expected:
            raise DatasetFormatError(
                f"row has {values.size} values, expected {expected}", source, lineno
            )
        series.append(TimeSeries(values, label))
    if not series:
        raise DatasetFormatError("no data rows", source, line=1)
    return Dataset(tuple(series), name=name or Path(source).stem)


def parse_ucr(path) -> Dataset:
    """Load one flat file as a labeled dataset."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"dataset file not found: {path}")
    return parse_ucr_text(path.read_text(), source=str(path), name=path.stem)


def format_ucr(dataset: Dataset) -> str:
    """Render a dataset to flat comma-delimited text.

    Values use repr (shortest round-trip), so parse(format(d)) restores the
    exact floats.
    """
    lines = [
        ",".join([str(s.label)] + [repr(float(v)) for v in s.values])
        for s in dataset.series
    ]
    return "\n".join(lines) + "\n"


def write_ucr(dataset: Dataset, path) -> None:
    Path(path).write_text(format_ucr(dataset))


@dataclass
class DatasetRegistry:
    """Resolves dataset names to train/test files under a root directory.

    Layouts tried per name: ``<root>/<name>/<name>_TRAIN`` and
    ``<root>/<name>_TRAIN`` with optional .txt/.tsv/.csv suffixes.  Explicit
    paths from :meth:`register` or a manifest win over convention.
    """

    root: Path
    entries: dict[str, tuple[Path, Path]]

    def __init__(self, root, names=DEFAULT_DATASET_NAMES):
        self.root = Path(root)
        self.entries = {}
        self.names = list(names)

    def register(self, name: str, train_path, test_path) -> None:
        if name not in self.names:
            self.names.append(name)
        self.entries[name] = (Path(train_path), Path(test_path))

    def load_manifest(self, manifest_path) -> None:
        """Read a JSON manifest ``{name: {"train": path, "test": path}}``."""
        import json

        manifest_path = Path(manifest_path)
        if not manifest_path.exists():
            raise FileNotFoundError(f"manifest not found: {manifest_path}")
        payload = json.loads(manifest_path.read_text())
        for name, paths in payload.items():
            self.register(
                name,
                self.root / paths["train"],
                self.root / paths["test"],
            )

    def _find_split(self, name: str, split: str) -> Path:
        stems = (self.root / name / f"{name}_{split}", self.root / f"{name}_{split}")
        for stem in stems:
            for suffix in _SPLIT_SUFFIXES:
                candidate = stem.with_name(stem.name + suffix)
                if candidate.exists():
                    return candidate
        raise FileNotFoundError(
            f"no {split} file for dataset {name!r}: tried "
            + ", ".join(str(s) + "[.txt|.tsv|.csv]" for s in stems)
        )

    def resolve(self, name: str) -> tuple[Path, Path]:
        """Train/test paths for a name; raises naming the missing file.

        Explicit registrations win; any other name is resolved by the
        layout convention, so datasets dropped under the root (e.g. from
        the synthetic generator) are usable without a manifest.
        """
        if name in self.entries:
            train, test = self.entries[name]
            for p in (train, test):
                if not p.exists():
                    raise FileNotFoundError(f"dataset file not found: {p}")
            return train, test
        return self._find_split(name, "TRAIN"), self._find_split(name, "TEST")

    def load(self, name: str) -> tuple[Dataset, Dataset]:
        train_path, test_path = self.resolve(name)
        train = parse_ucr(train_path)
        test = parse_ucr(test_path)
        return (
            Dataset(train.series, name=name),
            Dataset(test.series, name=name),
        )


# ---------------------------------------------------------------------------
# Synthetic data

GENERATORS = ("sine", "trend", "step", "control_chart")


def _base_shape(generator: str, cls: int, t: np.ndarray) -> np.ndarray:
    n = t.size
    if generator == "sine":
        return np.sin(2 * np.pi * (cls + 1) * t / n)
    if generator == "trend":
        slope = (cls + 1) * (1.0 if cls % 2 == 0 else -1.0)
        return slope * (t / n)
    if generator == "step":
        # class-specific step height keeps any class count separable
        return np.where(t >= n // 2, 1.0 + cls, 0.0)
    raise ValueError(f"unknown generator {generator!r}; choose from {GENERATORS}")


def _control_chart(cls: int, t: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """The six classic control-chart patterns around a zero baseline."""
    n = t.size
    if cls == 0:  # in-control noise only
        return np.zeros(n)
    if cls == 1:  # cyclic
        amplitude = rng.uniform(1.0, 2.5)
        period = rng.uniform(n / 6, n / 3)
        phase = rng.uniform(0, 2 * np.pi)
        return amplitude * np.sin(2 * np.pi * t / period + phase)
    if cls == 2:  # increasing trend
        return rng.uniform(1.5, 3.0) * (t / n)
    if cls == 3:  # decreasing trend
        return -rng.uniform(1.5, 3.0) * (t / n)
    shift_at = rng.integers(n // 4, 3 * n // 4)
    magnitude = rng.uniform(1.5, 3.0)
    sign = 1.0 if cls == 4 else -1.0  # upward / downward shift
    return sign * magnitude * (t >= shift_at)


def generate_synthetic(
    generator: str = "control_chart",
    count: int = 60,
    length: int = 60,
    noise: float = 0.5,
    seed: int = 0,
    classes: int | None = None,
    name: str = "",
) -> Dataset:
    """Deterministic labeled dataset from parameterized shape families.

    Series i belongs to class ``i % classes``.  For the simple families
    (sine/trend/step) the class shape is fixed, so at zero noise every
    class collapses to identical copies and the set is separable by
    construction.  ``control_chart`` draws per-series pattern parameters the
    way the classic 6-class control-chart generator does.
    """
    if count < 2:
        raise ValueError("need at least 2 series")
    if length < 4:
        raise ValueError("series length must be at least 4")
    if generator not in GENERATORS:
        raise ValueError(f"unknown generator {generator!r}; choose from {GENERATORS}")
    n_classes = 6 if generator == "control_chart" else (classes or 2)
    if generator == "control_chart" and classes not in (None, 6):
        raise ValueError("control_chart always has 6 classes")
    rng = np.random.default_rng(seed)
    t = np.arange(length, dtype=np.float64)
    series = []
    for i in range(count):
        cls = i % n_classes
        if generator == "control_chart":
            base = _control_chart(cls, t, rng)
        else:
            base = _base_shape(generator, cls, t)
        values = base + noise * rng.standard_normal(length)
        series.append(TimeSeries(values, label=cls))
    return Dataset(
        tuple(series), name=name or f"{generator}-{count}x{length}-seed{seed}"
    )


def control_chart_standin(
    train_count: int = 60, test_count: int = 60, length: int = 60,
    noise: float = 0.6, seed: int = 2024,
) -> tuple[Dataset, Dataset]:
    """Bundled desk-scale stand-in for the 6-class control-chart archive set."""
    train = generate_synthetic(
        "control_chart", train_count, length, noise, seed, name="control_chart_standin"
    )
    test = generate_synthetic(
        "control_chart", test_count, length, noise, seed + 1,
        name="control_chart_standin",
    )
    return train, test
