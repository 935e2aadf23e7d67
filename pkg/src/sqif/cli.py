"""Command line entry points and JSON report documents.

Reports serialize every big integer as a decimal string so documents survive
JSON parsers that would round large numbers through float64. Serialization
is insertion-ordered and wall time lives in its own "timing" object, so two
runs with the same config and seed produce byte-identical documents once
"timing" is dropped.
"""

from __future__ import annotations

import argparse
import gzip
import json
import os
import secrets
import sys
import tempfile
from pathlib import Path

from .pipeline import (
    DEFAULT_SEED,
    ConfigError,
    IterationTrace,
    PipelineConfig,
    RunReport,
    ScreeningError,
    factor,
)
from .relations import SrPair
from .reproduction import format_comparison, rows_for_tier, run_rows

__all__ = [
    "SCHEMA_VERSION",
    "build_document",
    "main",
    "parse_document",
    "read_document",
    "write_document",
]

SCHEMA_VERSION = 1
_GZIP_THRESHOLD_BYTES = 10 * 1024 * 1024


# --------------------------------------------------------------------------
# document (de)serialization


def _config_doc(config: PipelineConfig) -> dict:
    return {
        "n": str(config.n),
        "lattice_parameter": config.lattice_parameter,
        "precision": config.precision,
        "smoothness_bound": config.smoothness_bound,
        "slack": config.slack,
        "method": config.method,
        "samples": config.samples,
        "qaoa_depth": config.qaoa_depth,
        "shots": config.shots,
        "opt_budget": config.opt_budget,
        "lll_delta": config.lll_delta,
        "max_iterations": config.max_iterations,
        "dimension": config.dimension,
        "seed": config.seed,
        "workers": config.workers,
    }


def _config_from_doc(doc: dict) -> PipelineConfig:
    return PipelineConfig(
        n=int(doc["n"]),
        lattice_parameter=doc["lattice_parameter"],
        precision=doc["precision"],
        smoothness_bound=doc["smoothness_bound"],
        slack=doc["slack"],
        method=doc["method"],
        samples=doc["samples"],
        qaoa_depth=doc["qaoa_depth"],
        shots=doc["shots"],
        opt_budget=doc["opt_budget"],
        lll_delta=doc["lll_delta"],
        max_iterations=doc["max_iterations"],
        dimension=doc["dimension"],
        seed=doc["seed"],
        workers=doc["workers"],
    )


def _report_doc(report: RunReport) -> dict:
    return {
        "n": str(report.n),
        "bits": report.bits,
        "dimension": report.dimension,
        "method": report.method,
        "iterations": report.iterations,
        "sr_pairs": report.sr_pairs,
        "required_sr_pairs": report.required_sr_pairs,
        "outcome": report.outcome,
        "factors": [str(f) for f in report.factors],
        "seed": report.seed,
    }


def _pair_doc(pair: SrPair) -> dict:
    return {
        "u": str(pair.u),
        "v": str(pair.v),
        "residual_sign": pair.residual_sign,
        "u_exponents": list(pair.u_exponents),
        "residual_exponents": list(pair.residual_exponents),
    }


def _pair_from_doc(doc: dict) -> SrPair:
    return SrPair(
        u=int(doc["u"]),
        v=int(doc["v"]),
        residual_sign=doc["residual_sign"],
        u_exponents=tuple(doc["u_exponents"]),
        residual_exponents=tuple(doc["residual_exponents"]),
    )


def build_document(
    config: PipelineConfig, report: RunReport, pairs: list[SrPair]
) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "config": _config_doc(config),
        "report": _report_doc(report),
        "timing": {"wall_seconds": report.wall_seconds},
        "trace": [
            {
                "iteration": t.iteration,
                "babai_distance": t.babai_distance,
                "new_pairs": t.new_pairs,
                "total_pairs": t.total_pairs,
            }
            for t in report.trace
        ],
        "sr_pairs": [_pair_doc(p) for p in pairs],
    }


def parse_document(doc: dict) -> tuple[PipelineConfig, RunReport, list[SrPair]]:
    """Inverse of build_document; round-trips every field losslessly."""
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported document schema {doc.get('schema_version')!r}")
    config = _config_from_doc(doc["config"])
    r = doc["report"]
    trace = tuple(
        IterationTrace(
            iteration=t["iteration"],
            babai_distance=t["babai_distance"],
            new_pairs=t["new_pairs"],
            total_pairs=t["total_pairs"],
        )
        for t in doc["trace"]
    )
    report = RunReport(
        n=int(r["n"]),
        bits=r["bits"],
        dimension=r["dimension"],
        method=r["method"],
        iterations=r["iterations"],
        sr_pairs=r["sr_pairs"],
        required_sr_pairs=r["required_sr_pairs"],
        outcome=r["outcome"],
        factors=tuple(int(f) for f in r["factors"]),
        wall_seconds=doc["timing"]["wall_seconds"],
        seed=r["seed"],
        trace=trace,
    )
    pairs = [_pair_from_doc(p) for p in doc["sr_pairs"]]
    return config, report, pairs


def dumps_document(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def write_document(doc: dict, path: str | Path) -> Path:
    """Write JSON (gzip when the name ends in .gz or the body tops 10 MB)."""
    path = Path(path)
    body = dumps_document(doc).encode()
    if path.suffix != ".gz" and len(body) > _GZIP_THRESHOLD_BYTES:
        path = path.with_name(path.name + ".gz")
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix == ".gz":
        # fixed mtime keeps gzip output deterministic
        path.write_bytes(gzip.compress(body, mtime=0))
    else:
        path.write_bytes(body)
    return path


def read_document(path: str | Path) -> dict:
    raw = Path(path).read_bytes()
    if raw[:2] == b"\x1f\x8b":
        raw = gzip.decompress(raw)
    return json.loads(raw.decode())


# --------------------------------------------------------------------------
# resumable ledger persistence


def _write_ledger(path: Path, n: int, pairs: list[SrPair]) -> None:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "n": str(n),
        "sr_pairs": [_pair_doc(p) for p in pairs],
    }
    fd, tmp = tempfile.mkstemp(dir=str(path.parent) or ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(dumps_document(doc))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_ledger(path: Path, n: int) -> list[SrPair]:
    doc = read_document(path)
    if int(doc["n"]) != n:
        raise ConfigError(f"ledger file {path} was recorded for n={doc['n']}")
    return [_pair_from_doc(p) for p in doc["sr_pairs"]]


# --------------------------------------------------------------------------
# argument parsing


def _seed_value(text: str) -> int:
    if text == "random":
        return secrets.randbits(32)
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("seed must be an integer or 'random'")
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be >= 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sqif",
        description="Factor integers via prime-lattice CVP reduction with "
        "Ising-cube refinement.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("factor", help="run the pipeline on one integer")
    p.add_argument("--n", type=int, required=True, help="integer to factor")
    p.add_argument("--lattice-parameter", type=int, default=1)
    p.add_argument("--precision", type=int, default=4, help="log scaling 10^c")
    p.add_argument(
        "--smoothness-bound", type=int, default=None, help="default: 2 m^2"
    )
    p.add_argument("--slack", type=int, default=2)
    p.add_argument(
        "--method", choices=["brute-force", "qaoa"], default="brute-force"
    )
    p.add_argument(
        "--samples", type=int, default=None,
        help="brute-force states kept per iteration (default 2^min(15, m))",
    )
    p.add_argument("--qaoa-depth", type=int, default=2)
    p.add_argument(
        "--shots", type=int, default=None,
        help="QAOA measurements per iteration (default 2^min(15, m))",
    )
    p.add_argument("--opt-budget", type=int, default=500)
    p.add_argument("--lll-delta", type=float, default=0.99)
    p.add_argument("--max-iterations", type=int, default=1000)
    p.add_argument(
        "--dimension", type=int, default=None,
        help="override the derived lattice dimension m",
    )
    p.add_argument(
        "--seed", type=_seed_value, default=DEFAULT_SEED,
        help="integer seed, or 'random' for a fresh one",
    )
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", type=Path, default=None, help="report JSON path")
    p.add_argument(
        "--ledger-file", type=Path, default=None,
        help="SR-pair checkpoint; loaded if present, rewritten as pairs arrive",
    )
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=_cmd_factor)

    p = sub.add_parser("reproduce-table", help="re-run the published table rows")
    p.add_argument("--tier", choices=["quick", "full"], default="quick")
    p.add_argument("--out-dir", type=Path, default=Path("reproduction"))
    p.add_argument("--seed", type=_seed_value, default=DEFAULT_SEED)
    p.set_defaults(func=_cmd_reproduce)

    return parser


# --------------------------------------------------------------------------
# commands


def _cmd_factor(args: argparse.Namespace) -> int:
    config = PipelineConfig(
        n=args.n,
        lattice_parameter=args.lattice_parameter,
        precision=args.precision,
        smoothness_bound=args.smoothness_bound,
        slack=args.slack,
        method=args.method,
        samples=args.samples,
        qaoa_depth=args.qaoa_depth,
        shots=args.shots,
        opt_budget=args.opt_budget,
        lll_delta=args.lll_delta,
        max_iterations=args.max_iterations,
        dimension=args.dimension,
        seed=args.seed,
        workers=args.workers,
    )
    resume: list[SrPair] = []
    if args.ledger_file is not None and args.ledger_file.exists():
        resume = _load_ledger(args.ledger_file, config.n)
        print(
            f"resuming with {len(resume)} SR pairs from {args.ledger_file}",
            file=sys.stderr,
        )

    final_pairs: list[SrPair] = list(resume)

    def observe(pairs: list[SrPair]) -> None:
        final_pairs[:] = pairs
        if args.ledger_file is not None:
            _write_ledger(args.ledger_file, config.n, pairs)

    progress = None
    if args.verbose:

        def progress(t: IterationTrace) -> None:
            print(
                f"iter {t.iteration}: babai distance {t.babai_distance:.3f}, "
                f"+{t.new_pairs} pairs, {t.total_pairs} total",
                file=sys.stderr,
            )

    report = factor(
        config, resume_pairs=resume, progress=progress, ledger_observer=observe
    )
    doc = build_document(config, report, final_pairs)
    if args.out is not None:
        path = write_document(doc, args.out)
        print(f"report written to {path}", file=sys.stderr)
    else:
        sys.stdout.write(dumps_document(doc))
    summary = (
        f"n={report.n} ({report.bits} bits) m={report.dimension} "
        f"method={report.method}: {report.outcome} after {report.iterations} "
        f"iterations, {report.sr_pairs}/{report.required_sr_pairs} pairs"
    )
    if report.factors:
        summary += ", factors " + " * ".join(str(f) for f in report.factors)
    print(summary, file=sys.stderr)
    return 0 if report.outcome == "success" else 1


def _cmd_reproduce(args: argparse.Namespace) -> int:
    rows = rows_for_tier(args.tier)
    out_dir: Path = args.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)

    def run_one(config: PipelineConfig) -> RunReport:
        pairs_box: list[list[SrPair]] = [[]]

        def observe(pairs: list[SrPair]) -> None:
            pairs_box[0] = pairs

        report = factor(config, ledger_observer=observe)
        name = (
            f"row_{report.bits}bit_l{config.lattice_parameter}_{config.method}.json"
        )
        write_document(
            build_document(config, report, pairs_box[0]), out_dir / name
        )
        return report

    results = run_rows(rows, seed=args.seed, run_one=run_one)
    summary = {
        "schema_version": SCHEMA_VERSION,
        "tier": args.tier,
        "seed": args.seed,
        "rows": results,
    }
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    print(format_comparison(results))
    print(f"row reports in {out_dir}", file=sys.stderr)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScreeningError as exc:
        if exc.trivial_factor is not None:
            print(
                f"screening: {exc.reason} (trivial factor {exc.trivial_factor})",
                file=sys.stderr,
            )
        else:
            print(f"screening: {exc.reason}", file=sys.stderr)
        return 2
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
