"""Command-line surface: analyze, generate, ingest and selftest"""
import argparse
import hashlib
import json
import logging
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Sequence, Tuple

from src import errors
from src.cli.generator import generate, parse_range
from src.cli.manifest import dump_manifest, ingest_manifest, load_manifest, to_graph_data
from src.cli.models import ReportEnvelope
from src.cli.selftest import run_selftest
from src.config import VERSION, AnalysisSettings
from src.decision.analyzer import get_analyzer
from src.decision.models import AnalysisReport

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2

REPORT_SUFFIX = ".report.json"


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )


def write_atomic(path: Path, text: str) -> None:
    """Write through a temporary file in the target directory, then rename"""
    path.parent.mkdir(parents=True, exist_ok=True)
    handle = tempfile.NamedTemporaryFile(
        "w", dir=path.parent, prefix=f".{path.name}.", suffix=".tmp", delete=False,
        encoding="utf-8",
    )
    try:
        with handle:
            handle.write(text)
        os.replace(handle.name, path)
    except BaseException:
        Path(handle.name).unlink(missing_ok=True)
        raise


def emit_error(error: errors.FiberForgeError) -> int:
    print(json.dumps(error.to_dict(), indent=2))
    return EXIT_INPUT


def summarize(name: str, report: AnalysisReport) -> str:
    counts = report.inertia
    cert = report.certificate.strictness if report.certificate else "none"
    return (
        f"{name}: NPC={'yes' if report.verdict_npc else 'no'} "
        f"VF={'yes' if report.verdict_vf else 'no'} "
        f"inertia=(+{counts.n_plus}, 0:{counts.n_zero}, -{counts.n_minus}) "
        f"supersingular={'yes' if report.supersingular else 'no'} certificate={cert}"
    )


def analyze_file(path: Path, settings: AnalysisSettings) -> ReportEnvelope:
    """Parse, reduce and decide one manifest file"""
    started = time.perf_counter()
    manifest, raw = load_manifest(path)
    report = get_analyzer(settings).decide(to_graph_data(manifest))
    return ReportEnvelope(
        input_digest=hashlib.sha256(raw).hexdigest(),
        tool_version=VERSION,
        report=report,
        elapsed_ms=(time.perf_counter() - started) * 1000.0,
    )


def _analyze_to(path: Path, output: Path, settings: AnalysisSettings) -> Tuple[str, Optional[dict], Optional[str]]:
    """Batch worker: (file name, error payload, summary line)"""
    try:
        envelope = analyze_file(path, settings)
    except errors.FiberForgeError as e:
        return path.name, e.to_dict(), None
    write_atomic(output, envelope.model_dump_json(indent=2) + "\n")
    return path.name, None, summarize(path.name, envelope.report)


def default_output(path: Path) -> Path:
    return path.with_name(path.stem + REPORT_SUFFIX)


def cmd_analyze(args: argparse.Namespace) -> int:
    settings = AnalysisSettings(certify=args.certify, max_iters=args.max_iters)
    source = Path(args.input)
    if source.is_dir():
        return _analyze_batch(source, Path(args.output) if args.output else source, settings, args.jobs)

    logger.info(f"Analyzing {source}")
    try:
        envelope = analyze_file(source, settings)
    except errors.FiberForgeError as e:
        logger.error(f"Input error {e.code}: {e.message}")
        return emit_error(e)
    output = Path(args.output) if args.output else default_output(source)
    write_atomic(output, envelope.model_dump_json(indent=2) + "\n")
    print(summarize(source.name, envelope.report))
    for note in envelope.report.notes:
        print(f"  - {note}")
    print(f"report written to {output}")
    return EXIT_OK


def _analyze_batch(
    source: Path, destination: Path, settings: AnalysisSettings, jobs: Optional[int]
) -> int:
    inputs = sorted(
        p for p in source.glob("*.json") if not p.name.endswith(REPORT_SUFFIX)
    )
    logger.info(f"Batch analysis of {len(inputs)} manifests in {source}")
    failed = 0
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [
            pool.submit(_analyze_to, p, destination / (p.stem + REPORT_SUFFIX), settings)
            for p in inputs
        ]
        for future in futures:
            name, error, line = future.result()
            if error is not None:
                failed += 1
                print(json.dumps({"file": name, **error}))
            else:
                print(line)
    print(f"{len(inputs) - failed}/{len(inputs)} manifests analyzed")
    return EXIT_INPUT if failed else EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    try:
        manifest = generate(
            args.vertices,
            args.edges,
            args.seed,
            charge_range=parse_range(args.charge_range),
            b_range=parse_range(args.b_range, integral=True),
            charge_denominator=args.charge_denominator,
            gluing=args.gluing,
        )
    except errors.FiberForgeError as e:
        return emit_error(e)
    text = dump_manifest(manifest)
    if args.output:
        write_atomic(Path(args.output), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_ingest(args: argparse.Namespace) -> int:
    try:
        manifest, _ = load_manifest(Path(args.input))
        reduced = ingest_manifest(manifest)
    except errors.FiberForgeError as e:
        return emit_error(e)
    write_atomic(Path(args.output), reduced)
    logger.info(f"Reduced {args.input} to {args.output}")
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    failures = run_selftest(args.breadth)
    for failure in failures:
        print(f"FAIL [{failure.suite}] {failure.message}")
        if failure.replay:
            print(failure.replay)
    print(f"selftest breadth {args.breadth}: {len(failures)} failure(s)")
    return EXIT_FAILURE if failures else EXIT_OK


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text} is not a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fiberforge",
        description="Decide NPC metrics and virtual fibration of graph manifolds",
    )
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", help="analyze a manifest or a directory of manifests")
    analyze.add_argument("--input", required=True, help="manifest file or directory")
    analyze.add_argument("--output", help="report file, or directory in batch mode")
    analyze.add_argument("--certify", action="store_true",
                         help="attach certificates and boundary classes")
    analyze.add_argument("--max-iters", type=positive_int, default=200,
                         help="budget of the certificate search")
    analyze.add_argument("--jobs", type=positive_int, default=None, help="worker processes in batch mode")
    analyze.set_defaults(handler=cmd_analyze)

    gen = commands.add_parser("generate", help="generate a seeded random manifest")
    gen.add_argument("--vertices", type=int, required=True)
    gen.add_argument("--edges", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--charge-range", default="-2..2", help="LO..HI, rational bounds")
    gen.add_argument("--charge-denominator", type=positive_int, default=1,
                     help="charges lie on the grid with this denominator")
    gen.add_argument("--b-range", default="1..3", help="LO..HI, positive integers")
    gen.add_argument("--gluing", action="store_true", help="emit gluing matrices")
    gen.add_argument("--output", help="manifest path (stdout when omitted)")
    gen.set_defaults(handler=cmd_generate)

    ingest = commands.add_parser("ingest", help="reduce a gluing-form manifest")
    ingest.add_argument("--input", required=True)
    ingest.add_argument("--output", required=True)
    ingest.set_defaults(handler=cmd_ingest)

    selftest = commands.add_parser("selftest", help="run the oracle suites")
    selftest.add_argument("--breadth", type=int, default=1)
    selftest.set_defaults(handler=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except errors.FiberForgeError as e:
        return emit_error(e)
    except Exception as e:
        logger.error(f"Unexpected failure in {args.command}: {str(e)}", exc_info=True)
        print(json.dumps({"error": {"code": "INTERNAL_ERROR", "message": str(e), "details": []}}))
        return EXIT_FAILURE


if __name__ == "__main__":
    raise SystemExit(main())
