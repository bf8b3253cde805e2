"""Command-line client for the saxopt service.

Subcommands map one-to-one onto service endpoints.  Without ``--server``
the app runs in-process, so no daemon is needed; with ``--server URL`` the
same requests go to a remote instance (dataset paths are then resolved on
the server host).

Exit codes: 0 success, 1 usage error, 2 data/runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx

USAGE_EXIT = 1
DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; the harness contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


class CliError(Exception):
    """Data or runtime failure; message goes to stderr, exit code 2."""


def _csv_list(text: str, convert):
    return [convert(part.strip()) for part in text.split(",") if part.strip()]


def _pair(text: str, convert) -> tuple:
    parts = _csv_list(text, convert)
    if len(parts) != 2:
        raise CliError(f"expected two comma-separated values, got {text!r}")
    return tuple(parts)


def make_client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=None)
    import warnings

    with warnings.catch_warnings():
        # starlette's in-process client warns about the httpx major version;
        # harmless here and it would pollute every CLI run's stderr
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app())


def _call(client: httpx.Client, path: str, payload: dict) -> dict:
    try:
        response = client.post(path, json=payload)
    except httpx.HTTPError as exc:
        raise CliError(f"request to {path} failed: {exc}") from exc
    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise CliError(f"{path} returned {response.status_code}: {detail}")
    return response.json()


def _write_artifacts(out_dir: Path, artifacts: dict[str, str]) -> None:
    for rel, content in artifacts.items():
        target = out_dir / rel
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(content)


# ---------------------------------------------------------------------------
# Subcommand handlers


def _cmd_encode(args, client) -> int:
    if args.values:
        values = _csv_list(args.values, float)
    elif args.input:
        path = Path(args.input)
        if not path.exists():
            raise CliError(f"input file not found: {path}")
        from .data import parse_ucr

        data = parse_ucr(path)
        if not 0 <= args.index < data.size:
            raise CliError(f"row index {args.index} outside [0, {data.size - 1}]")
        values = data.series[args.index].values.tolist()
    else:
        raise CliError("provide --values or --input")
    payload = {
        "values": values,
        "alpha": args.alpha,
        "segments": args.segments,
    }
    if args.cuts:
        payload["cuts"] = _csv_list(args.cuts, float)
    result = _call(client, "/encode", payload)
    print("symbols:", " ".join(str(s) for s in result["symbols"]))
    print("letters:", result["letters"])
    print("cuts:", " ".join(repr(c) for c in result["cuts"]))
    return 0


def _cmd_optimize(args, client) -> int:
    payload = {
        "train_path": args.train,
        "method": args.method.replace("-", "_"),
        "alpha": args.alpha,
        "segments": args.segments,
        "seed": args.seed,
        "de": {
            "popsize": args.popsize,
            "f": args.f,
            "cr": args.cr,
            "generations": args.generations,
        },
        "breakpoint_bounds": _pair(args.breakpoint_bounds, float),
        "weight_bounds": _pair(args.weight_bounds, float),
    }
    result = _call(client, "/optimize", payload)
    print(
        f"{result['dataset']} {result['method']} alpha={result['alpha']} "
        f"segments={result['segments']} seed={result['seed']}"
    )
    print("train_error:", repr(result["train_error"]))
    print("evaluations:", result["evaluations"])
    print("cuts:", " ".join(repr(c) for c in result["cuts"]))
    print("weights:", " ".join(repr(w) for w in result["weights"]))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "params.json").write_text(
            json.dumps(result, indent=2, sort_keys=True) + "\n"
        )
    return 0


def _cmd_baseline(args, client) -> int:
    payload = {
        "train_path": args.train,
        "test_path": args.test,
        "alpha": args.alpha,
        "segments": args.segments,
        "mode": args.mode,
    }
    result = _call(client, "/baseline", payload)
    print(
        f"{result['dataset']} gaussian_sax alpha={result['alpha']} "
        f"segments={result['segments']} mode={result['mode']}"
    )
    print("train_error:", repr(result["train_error"]))
    print("test_error:", repr(result["test_error"]))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "baseline.json").write_text(
            json.dumps(result, indent=2, sort_keys=True) + "\n"
        )
    return 0


# compare config file: one `key = value` per line, # comments, lists
# comma-separated.  Keys match the /compare request fields.
_CONFIG_PARSERS = {
    "data_root": str,
    "manifest": str,
    "datasets": lambda v: _csv_list(v, str),
    "alphabets": lambda v: _csv_list(v, int),
    "segments": int,
    "popsize": int,
    "f": float,
    "cr": float,
    "one_step_generations": int,
    "two_step_generations": lambda v: _pair(v, int),
    "seeds": lambda v: _csv_list(v, int),
    "mode": str,
    "breakpoint_bounds": lambda v: _pair(v, float),
    "weight_bounds": lambda v: _pair(v, float),
    "max_generations": int,
}


def read_config(path) -> dict:
    path = Path(path)
    if not path.exists():
        raise CliError(f"config file not found: {path}")
    payload = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_PARSERS:
            raise CliError(
                f"{path}:{lineno}: unknown config key {key!r}; known keys: "
                + ", ".join(sorted(_CONFIG_PARSERS))
            )
        try:
            payload[key] = _CONFIG_PARSERS[key](value.strip())
        except (ValueError, CliError) as exc:
            raise CliError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return payload


def _cmd_compare(args, client) -> int:
    payload = read_config(args.config) if args.config else {}
    overrides = {
        "data_root": args.data_root,
        "manifest": args.manifest,
        "datasets": _csv_list(args.datasets, str) if args.datasets else None,
        "alphabets": _csv_list(args.alphabets, int) if args.alphabets else None,
        "segments": args.segments,
        "popsize": args.popsize,
        "f": args.f,
        "cr": args.cr,
        "one_step_generations": args.one_step_generations,
        "two_step_generations": (
            _pair(args.two_step_generations, int)
            if args.two_step_generations
            else None
        ),
        "seeds": _csv_list(args.seeds, int) if args.seeds else None,
        "mode": args.mode,
        "breakpoint_bounds": (
            _pair(args.breakpoint_bounds, float) if args.breakpoint_bounds else None
        ),
        "weight_bounds": (
            _pair(args.weight_bounds, float) if args.weight_bounds else None
        ),
        "max_generations": args.max_generations,
    }
    payload.update({k: v for k, v in overrides.items() if v is not None})
    if "data_root" not in payload:
        raise CliError("data_root is required (config key or --data-root)")
    if "datasets" not in payload:
        raise CliError("datasets is required (config key or --datasets)")

    result = _call(client, "/compare", payload)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_artifacts(out, result["artifacts"])
    for agg in result["aggregates"]:
        print(
            f"{agg['dataset']} alpha={agg['alpha']} {agg['method']}: "
            f"train={agg['mean_train_error']:.4f} "
            f"test={agg['mean_test_error']:.4f} gap={agg['mean_gap']:+.4f}"
        )
    overfit = result["overfitting"]
    if "one_step_gap_minus_two_step_gap" in overfit:
        delta = overfit["one_step_gap_minus_two_step_gap"]
        print(f"mean overfitting gap, one-step minus two-step: {delta:+.4f}")
    print(f"report written to {out / 'report.csv'}")
    return 0


def _cmd_synth(args, client) -> int:
    payload = {
        "generator": args.generator,
        "train_count": args.train_count,
        "test_count": args.test_count,
        "length": args.length,
        "noise": args.noise,
        "seed": args.seed,
        "classes": args.classes,
        "name": args.name,
    }
    result = _call(client, "/synth", payload)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    train_path = out / f"{result['name']}_TRAIN.txt"
    test_path = out / f"{result['name']}_TEST.txt"
    train_path.write_text(result["train_text"])
    test_path.write_text(result["test_text"])
    print(f"wrote {train_path}")
    print(f"wrote {test_path}")
    return 0


def _cmd_serve(args, _client) -> int:
    import uvicorn

    uvicorn.run("saxopt.service:app", host=args.host, port=args.port)
    return 0


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> _Parser:
    parser = _Parser(prog="saxopt", description=__doc__)
    parser.add_argument(
        "--server",
        default=None,
        help="base URL of a running service; default runs the app in-process",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("encode", help="discretize one series into a symbolic word")
    p.add_argument("--values", help="comma-separated series values")
    p.add_argument("--input", help="flat dataset file to read a series from")
    p.add_argument("--index", type=int, default=0, help="row in --input (default 0)")
    p.add_argument("--alpha", type=int, required=True, help="alphabet size")
    p.add_argument("--segments", type=int, required=True, help="PAA segment count")
    p.add_argument("--cuts", help="comma-separated cut points (default: Gaussian)")
    p.set_defaults(handler=_cmd_encode)

    p = sub.add_parser("optimize", help="fit cuts and weights on one training file")
    p.add_argument("--train", required=True, help="training dataset file")
    p.add_argument(
        "--method",
        required=True,
        choices=["one-step", "two-step", "one_step", "two_step"],
        help="joint optimization, or cuts first then weights",
    )
    p.add_argument("--alpha", type=int, required=True, help="alphabet size")
    p.add_argument("--segments", type=int, help="PAA segments (default length//8)")
    p.add_argument("--seed", type=int, required=True, help="run seed")
    p.add_argument("--popsize", type=int, default=12)
    p.add_argument("--f", type=float, default=0.9, help="mutation factor")
    p.add_argument("--cr", type=float, default=0.5, help="crossover constant")
    p.add_argument(
        "--generations", type=int, default=100, help="total generation budget"
    )
    p.add_argument("--breakpoint-bounds", default="-3,3")
    p.add_argument("--weight-bounds", default="0.01,2")
    p.add_argument("--out", help="directory for params.json")
    p.set_defaults(handler=_cmd_optimize)

    p = sub.add_parser("baseline", help="Gaussian-cut encoding, no optimization")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--alpha", type=int, required=True, help="alphabet size")
    p.add_argument("--segments", type=int, help="PAA segments (default length//8)")
    p.add_argument(
        "--mode",
        choices=["holdout", "loo"],
        default="holdout",
        help="test protocol: nearest train series, or leave-one-out in test",
    )
    p.add_argument("--out", help="directory for baseline.json")
    p.set_defaults(handler=_cmd_baseline)

    p = sub.add_parser("compare", help="full train/test comparison report")
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--data-root", help="dataset root directory")
    p.add_argument("--manifest", help="JSON manifest of dataset paths")
    p.add_argument("--datasets", help="comma-separated dataset names")
    p.add_argument("--alphabets", help="comma-separated alphabet sizes")
    p.add_argument("--segments", type=int, help="PAA segments (default length//8)")
    p.add_argument("--popsize", type=int)
    p.add_argument("--f", type=float)
    p.add_argument("--cr", type=float)
    p.add_argument("--one-step-generations", type=int)
    p.add_argument("--two-step-generations", help="two comma-separated budgets")
    p.add_argument("--seeds", help="comma-separated run seeds")
    p.add_argument("--mode", choices=["holdout", "loo"], help="test protocol")
    p.add_argument("--breakpoint-bounds")
    p.add_argument("--weight-bounds")
    p.add_argument("--max-generations", type=int, help="early-stop budget override")
    p.add_argument("--out", required=True, help="report output directory")
    p.set_defaults(handler=_cmd_compare)

    p = sub.add_parser("synth", help="emit synthetic flat-format dataset files")
    p.add_argument(
        "--generator",
        default="control_chart",
        choices=["sine", "trend", "step", "control_chart"],
    )
    p.add_argument("--train-count", type=int, default=60)
    p.add_argument("--test-count", type=int, default=60)
    p.add_argument("--length", type=int, default=60)
    p.add_argument("--noise", type=float, default=0.5)
    p.add_argument("--seed", type=int, required=True, help="generator seed")
    p.add_argument("--classes", type=int, help="class count (simple families only)")
    p.add_argument("--name", default="synthetic", help="dataset name prefix")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(handler=_cmd_synth)

    p = sub.add_parser("serve", help="run the HTTP service with uvicorn")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(handler=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "serve":
            return args.handler(args, None)
        with make_client(args.server) as client:
            return args.handler(args, client)
    except CliError as exc:
        print(f"saxopt: error: {exc}", file=sys.stderr)
        return DATA_EXIT


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
