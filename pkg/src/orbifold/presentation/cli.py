import argparse
import json
import sys
from collections.abc import Sequence

from src.config import E8_NODES, OrbifoldKind, PipelineConfig
from src.orbifold.adapters.config_loader import ConfigLoader
from src.orbifold.adapters.json_report_store import JsonReportStore
from src.orbifold.domain.models import (
    AcceptanceReport,
    BuildOptions,
    BuildRequest,
    FlatModelReport,
    OrbifoldReport,
)
from src.orbifold.presentation.text_report import (
    render_acceptance,
    render_catalog,
    render_flat,
    render_orbifold,
)
from src.orbifold.service import OrbifoldService
from src.shared.errors import OrbifoldError
from src.shared.telemetry import Telemetry

EXIT_OK, EXIT_FAILED, EXIT_ERROR = 0, 1, 2

_telemetry = Telemetry("CLI")


def parse_keep(value: str) -> list[int]:
    """'1,3,4' -> [1, 3, 4]; 'none' or '' -> []; 'all' -> every node."""
    text = value.strip().lower()
    if text in ("", "none"):
        return []
    if text == "all":
        return list(E8_NODES)
    try:
        return [int(part) for part in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected a comma list of node indices, got {value!r}") from e


def _kind(value: str) -> OrbifoldKind:
    try:
        return OrbifoldKind.from_number(int(value))
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="k3-orbifold", description="G2-orbifolds from K3 surfaces with ADE singularities")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--save", metavar="NAME", help=f"also write the report to {PipelineConfig.REPORT_DIR}/NAME.json")

    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", parents=[common], help="construct one orbifold")
    build.add_argument("--kind", type=_kind)
    build.add_argument("--keep1", type=parse_keep, default=[])
    build.add_argument("--keep2", type=parse_keep, default=[])
    build.add_argument("--config", help="JSON build request; overrides --kind/--keep1/--keep2")
    build.add_argument("--no-crosscheck", action="store_true")
    build.add_argument(
        "--flat-comparison",
        action="store_true",
        help="compare each A_(n-1) component with the flat model C^2 / Z_n x T^3",
    )

    cat = sub.add_parser("catalog", parents=[common], help="one orbifold per connected E8 subdiagram")
    cat.add_argument("--kind", type=_kind, required=True)

    flat = sub.add_parser("flat", parents=[common], help="flat model (C^2/Z_n) x T^3")
    flat.add_argument("--kind", type=_kind, required=True)
    flat.add_argument("--n", type=int, required=True)

    sub.add_parser("verify-all", parents=[common], help="run the acceptance suite")
    return parser


def _request(args: argparse.Namespace) -> BuildRequest:
    if args.config:
        return ConfigLoader().load(args.config)
    if args.kind is None:
        raise OrbifoldError("build needs --kind or --config")
    try:
        return BuildRequest(
            kind=args.kind.number,
            keep1=args.keep1,
            keep2=args.keep2,
            options=BuildOptions(
                crosscheck=not args.no_crosscheck,
                flat_comparison=args.flat_comparison,
            ),
        )
    except ValueError as e:
        raise OrbifoldError(str(e)) from e


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    report: OrbifoldReport | FlatModelReport | AcceptanceReport
    Telemetry.start_trace()
    service = OrbifoldService(JsonReportStore(PipelineConfig.REPORT_DIR) if args.save else None)
    try:
        if args.command == "build":
            report = service.build(_request(args))
            text = render_orbifold(report)
            status = EXIT_OK if report.valid else EXIT_FAILED
        elif args.command == "catalog":
            reports, completeness = service.catalog(args.kind)
            if args.format == "json":
                payload = {
                    "reports": [r.model_dump(mode="json") for r in reports],
                    "completeness": completeness.model_dump(mode="json"),
                }
                print(json.dumps(payload, indent=2))
            else:
                print(render_catalog(reports, completeness))
            if args.save:
                for i, entry in enumerate(reports):
                    service.save(f"{args.save}-{i:02d}", entry)
            ok = completeness.passed and all(r.valid for r in reports)
            return EXIT_OK if ok else EXIT_FAILED
        elif args.command == "flat":
            report = service.flat(args.kind, args.n)
            text = render_flat(report)
            status = EXIT_OK if report.valid else EXIT_FAILED
        else:
            report = service.verify_all()
            text = render_acceptance(report)
            status = EXIT_OK if report.passed else EXIT_FAILED
        print(report.model_dump_json(indent=2) if args.format == "json" else text)
        if args.save:
            service.save(args.save, report)
        return status
    except OrbifoldError as e:
        _telemetry.log_error("cli_failed", e, command=args.command, witness=str(e.witness))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())
