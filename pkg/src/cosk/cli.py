"""Batch command line: spectra, classification verdicts and verification suites.

Exit codes: 0 success, 1 suite failure, 2 parse/usage error, 3 symmetry
defect above tolerance, 4 classification not applicable to the input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

from .bochner import classify_einstein
from .models import MODEL_NAMES, build_model
from .operators import build_second_kind, spectrum
from .tensors import CurvatureTensor, SymmetryDefectError, TensorFormatError, load_tensor
from .verify import DEFAULT_DIMS, input_checks, run_suite

EXIT_OK = 0
EXIT_SUITE_FAILURE = 1
EXIT_PARSE_ERROR = 2
EXIT_SYMMETRY_DEFECT = 3
EXIT_NOT_APPLICABLE = 4


@dataclass
class RunConfig:
    command: str
    model: str | None = None
    input: str | None = None
    n: int = 4
    seed: int = 0
    trials: int = 100
    tol: float = 1e-10
    theta: float | None = None
    alpha: float = 2.0
    epsilon: float = 0.05
    out: str | None = None
    format: str = "json"
    dims: tuple[int, ...] = DEFAULT_DIMS
    restarts: int = 20

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.input is None and self.model is not None and self.model not in MODEL_NAMES:
            raise ValueError(f"unknown model {self.model!r}")


def _default_seed() -> int:
    try:
        return int(os.environ.get("COSK_SEED", "0"))
    except ValueError:
        return 0


def _add_tensor_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", choices=MODEL_NAMES, help="built-in curvature model")
    parser.add_argument("--input", help="tensor component file (JSON)")
    parser.add_argument("--n", type=int, default=4, help="dimension for built-in models")
    parser.add_argument("--epsilon", type=float, default=0.05,
                        help="perturbation size for the near_sphere model")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None,
                        help="random seed (default: COSK_SEED or 0)")
    parser.add_argument("--tol", type=float, default=1e-10, help="symmetry tolerance")
    parser.add_argument("--out", help="write the report to this path instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cosk",
        description="Spectra, cone verdicts and verification suites for the "
                    "curvature operator of the second kind.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="eigenvalues of the second-kind operator")
    _add_tensor_source(sp)
    _add_common(sp)

    cl = sub.add_parser("classify", help="rigidity verdict for an Einstein tensor")
    _add_tensor_source(cl)
    _add_common(cl)
    cl.add_argument("--theta", type=float, default=None,
                    help="override the dimensional threshold constant")
    cl.add_argument("--alpha", type=float, default=2.0,
                    help="partial-sum length of the cone condition")

    vf = sub.add_parser("verify", help="run the named verification suites")
    vf.add_argument("--input", help="verify a tensor component file instead")
    vf.add_argument("--n", type=int, action="append", dest="dims",
                    help="dimension to include (repeatable; default 4 5 8 9 10)")
    vf.add_argument("--trials", type=int, default=100, help="random instances per check")
    vf.add_argument("--restarts", type=int, default=20, help="descent oracle restarts")
    _add_common(vf)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    seed = args.seed if args.seed is not None else _default_seed()
    cfg = RunConfig(command=args.command, seed=seed, tol=args.tol,
                    out=args.out, format=args.format)
    cfg.input = getattr(args, "input", None)
    cfg.model = getattr(args, "model", None)
    cfg.n = getattr(args, "n", 4) if args.command != "verify" else 4
    cfg.epsilon = getattr(args, "epsilon", 0.05)
    cfg.theta = getattr(args, "theta", None)
    cfg.alpha = getattr(args, "alpha", 2.0)
    cfg.trials = getattr(args, "trials", 100)
    cfg.restarts = getattr(args, "restarts", 20)
    dims = getattr(args, "dims", None)
    cfg.dims = tuple(dims) if dims else DEFAULT_DIMS
    if args.command != "verify" and cfg.input is None and cfg.model is None:
        raise ValueError("one of --model or --input is required")
    return cfg


def _resolve_tensor(config: RunConfig) -> CurvatureTensor:
    if config.input is not None:
        try:
            return load_tensor(config.input, tol=config.tol)
        except FileNotFoundError as exc:
            raise TensorFormatError(f"cannot read {config.input}: {exc}") from exc
    return build_model(config.model, config.n, seed=config.seed, epsilon=config.epsilon)


def _flatten(doc, prefix="") -> list[tuple[str, object]]:
    rows: list[tuple[str, object]] = []
    if isinstance(doc, dict):
        for key in sorted(doc):
            rows.extend(_flatten(doc[key], f"{prefix}{key}."))
    elif isinstance(doc, list):
        for i, item in enumerate(doc):
            rows.extend(_flatten(item, f"{prefix}{i}."))
    else:
        rows.append((prefix[:-1], doc))
    return rows


def _render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    for key, value in _flatten(doc):
        writer.writerow([key, value])
    return buf.getvalue()


def _emit(doc: dict, config: RunConfig) -> None:
    text = _render(doc, config.format)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_spectrum(config: RunConfig) -> int:
    tensor = _resolve_tensor(config)
    spec = spectrum(build_second_kind(tensor))
    _emit(spec.to_dict(), config)
    return EXIT_OK


def cmd_classify(config: RunConfig) -> int:
    tensor = _resolve_tensor(config)
    verdict, report = classify_einstein(tensor, theta=config.theta, alpha=config.alpha)
    doc = {"n": tensor.n, "verdict": verdict.to_dict(), "report": report.to_dict()}
    _emit(doc, config)
    if verdict.kind == "not_applicable":
        print(f"not applicable: {verdict.details}", file=sys.stderr)
        return EXIT_NOT_APPLICABLE
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    if config.input is not None:
        tensor = _resolve_tensor(config)
        results = input_checks(tensor, tol=config.tol)
        echo = {"command": "verify", "input_n": tensor.n, "seed": config.seed}
    else:
        results = run_suite(dims=config.dims, trials=config.trials, seed=config.seed,
                            restarts=config.restarts)
        echo = {
            "command": "verify",
            "dims": list(config.dims),
            "trials": config.trials,
            "seed": config.seed,
            "restarts": config.restarts,
        }
    doc = {"config": echo, "checks": [r.to_dict() for r in results],
           "passed": all(r.passed for r in results)}
    _emit(doc, config)
    failing = [r for r in results if not r.passed]
    if failing:
        print(f"FAIL {failing[0].name}: defect {failing[0].defect:.3e}", file=sys.stderr)
        return EXIT_SUITE_FAILURE
    return EXIT_OK


COMMANDS = {"spectrum": cmd_spectrum, "classify": cmd_classify, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        return COMMANDS[config.command](config)
    except SymmetryDefectError as exc:
        print(f"symmetry defect: {exc}", file=sys.stderr)
        return EXIT_SYMMETRY_DEFECT
    except (TensorFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE_ERROR


if __name__ == "__main__":
    sys.exit(main())
