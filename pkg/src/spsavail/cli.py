"""Command-line entry point: ``spsavail analyze|compare|simulate|validate``.

Data goes to files under ``--out`` (default ``$SPSAVAIL_OUT_DIR``) or to
standard output; diagnostics always go to standard error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from . import report
from .chains import chains_by_subsystem
from .config import load_architecture, parse_catalog, with_catalog
from .errors import SpsError
from .kpi import BASIS_GRAPH, BASIS_OVERRIDE, evaluate
from .model import Subsystem, validate_topology
from .montecarlo import SimConfig, simulate_architecture
from .presets import load_preset

log = logging.getLogger("spsavail")

OUT_DIR_ENV = "SPSAVAIL_OUT_DIR"


@dataclass
class RunRequest:
    inputs: list  # ("preset", name) or ("topology", path)
    catalogs: list = field(default_factory=list)
    mode: str = "analytic"
    basis: Optional[str] = None
    customers: Optional[tuple] = None
    format: str = "markdown"
    out: Optional[Path] = None
    sim: Optional[SimConfig] = None
    workers: int = 1
    dump_chains: bool = False
    plot: bool = True


class _InputAction(argparse.Action):
    """Collect --preset and --topology in command-line order."""

    def __call__(self, parser, namespace, values, option_string=None):
        items = getattr(namespace, "inputs", None) or []
        kind = "preset" if option_string == "--preset" else "topology"
        for v in values.split(",") if kind == "preset" else [values]:
            items.append((kind, v.strip()))
        namespace.inputs = items


def _customers(text):
    try:
        return tuple(Subsystem.parse(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _add_common(p, sim_defaults=True):
    p.add_argument("--preset", action=_InputAction, dest="inputs", metavar="NAME",
                   help="packaged architecture A, B or C (repeatable, comma-separated)")
    p.add_argument("--topology", action=_InputAction, dest="inputs", metavar="PATH",
                   help="topology YAML file (repeatable)")
    p.add_argument("--catalog", action="append", default=[], metavar="PATH",
                   help="catalog YAML, matched in order with --topology")
    p.add_argument("--customers", type=_customers, default=None,
                   help="comma-separated SAIDI customer subsystems")
    p.add_argument("--basis", choices=[BASIS_OVERRIDE, BASIS_GRAPH, "both"], default=None,
                   help="chain parameters: tabulated overrides, graph-derived, or both")
    p.add_argument("--format", choices=list(report.FORMAT_SUFFIX), default="markdown")
    p.add_argument("--out", type=Path, default=None, help=f"output directory (default ${OUT_DIR_ENV})")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--years", type=float, default=1.0e4, help="simulated horizon per replication")
    p.add_argument("--reps", type=int, default=30, help="replications")
    p.add_argument("--confidence", type=float, default=0.95)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spsavail", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="KPI report for one or more architectures")
    _add_common(p)
    p.add_argument("--mode", choices=["analytic", "montecarlo", "both"], default="analytic")
    p.add_argument("--dump-chains", action="store_true", help="also emit the derived chains")

    p = sub.add_parser("compare", help="side-by-side KPIs plus normalised plot data")
    _add_common(p)
    p.add_argument("--no-plot", action="store_true", help="skip rendering the bar chart")

    p = sub.add_parser("simulate", help="Monte Carlo check of subsystem downtimes")
    _add_common(p)

    p = sub.add_parser("validate", help="check topology files")
    _add_common(p)
    return parser


def _request(args) -> RunRequest:
    out = args.out
    if out is None and os.environ.get(OUT_DIR_ENV):
        out = Path(os.environ[OUT_DIR_ENV])
    sim = SimConfig(args.years, args.reps, args.seed, args.confidence)
    return RunRequest(
        inputs=list(args.inputs or []),
        catalogs=list(args.catalog),
        mode=getattr(args, "mode", "analytic"),
        basis=args.basis,
        customers=args.customers,
        format=args.format,
        out=out,
        sim=sim,
        workers=args.workers,
        dump_chains=getattr(args, "dump_chains", False),
        plot=not getattr(args, "no_plot", False),
    )


def resolve_inputs(req: RunRequest) -> list:
    """Load every requested architecture; raises on bad or invalid configs."""
    archs = []
    catalogs = iter(req.catalogs)
    for kind, value in req.inputs:
        if kind == "preset":
            arch = load_preset(value).architecture
        else:
            arch = load_architecture(value)
            cat = next(catalogs, None)
            if cat is not None:
                arch = with_catalog(arch, parse_catalog(Path(cat).read_text(), source=cat))
        violations = validate_topology(arch.topology)
        if violations:
            raise InvalidTopology(arch.name, violations)
        if req.customers:
            arch = replace(arch, customers=req.customers)
        archs.append(arch)
    return archs


class InvalidTopology(SpsError):
    def __init__(self, name, violations):
        self.violations = violations
        super().__init__(f"topology {name!r} failed validation:\n{violations.format()}")


def _bases(arch, basis):
    if basis == "both":
        return [BASIS_OVERRIDE, BASIS_GRAPH] if arch.chain_overrides else [BASIS_GRAPH]
    if basis is None:
        return [BASIS_OVERRIDE if arch.chain_overrides else BASIS_GRAPH]
    return [basis]


def _reports(archs, basis):
    jobs = [(a, b) for a in archs for b in _bases(a, basis)]
    with ThreadPoolExecutor() as pool:
        return list(pool.map(lambda job: evaluate(*job), jobs))


def _emit(req, name, text, stream=None):
    if req.out is not None:
        path = report.write_atomic(req.out / name, text)
        log.info("wrote %s", path)
    else:
        (stream or sys.stdout).write(text)


def cmd_analyze(req: RunRequest) -> int:
    archs = resolve_inputs(req)
    if not archs:
        raise UsageError("analyze needs at least one --preset or --topology")
    suffix = report.FORMAT_SUFFIX[req.format]
    if req.mode in ("analytic", "both"):
        reports = _reports(archs, req.basis)
        _emit(req, "kpi_report" + suffix, report.render_kpis(reports, req.format))
        if req.out is not None and req.format == "csv":
            _emit(req, "subsystems.csv", report.subsystem_csv(reports))
    if req.dump_chains:
        rows = []
        for a in archs:
            rows += report.chains_rows(a.name, chains_by_subsystem(a.topology))
        if req.out is None and req.mode in ("analytic", "both"):
            sys.stdout.write("\n")
        _emit(req, "chains" + suffix, report.render_chains(rows, req.format))
    if req.mode in ("montecarlo", "both"):
        _simulate(req, archs)
    return 0


def cmd_compare(req: RunRequest) -> int:
    archs = resolve_inputs(req)
    if len(archs) < 2:
        raise UsageError("compare needs at least two inputs")
    reports = _reports(archs, req.basis)
    suffix = report.FORMAT_SUFFIX[req.format]
    if req.out is None:
        sys.stdout.write(report.render_kpis(reports, req.format))
        sys.stdout.write("\n")
        sys.stdout.write(report.normalized_csv(reports))
        return 0
    _emit(req, "comparison" + suffix, report.render_kpis(reports, req.format))
    _emit(req, "kpi_normalized.csv", report.normalized_csv(reports))
    if req.plot:
        path = report.render_barplot(reports, req.out / "kpi_barplot.png")
        log.info("wrote %s", path)
    return 0


def _simulate(req, archs):
    jobs = [(a, b) for a in archs for b in _bases(a, req.basis)]
    results = [simulate_architecture(a, req.sim, b, req.workers) for a, b in jobs]
    table = report.simulation_table(results)
    if req.out is not None:
        _emit(req, "simulation.json", report.simulation_json(results))
        sys.stdout.write(table)
    else:
        sys.stdout.write(report.simulation_json(results))
        sys.stderr.write(table)
    return results


def cmd_simulate(req: RunRequest) -> int:
    archs = resolve_inputs(req)
    if not archs:
        raise UsageError("simulate needs at least one --preset or --topology")
    _simulate(req, archs)
    return 0


def cmd_validate(req: RunRequest) -> int:
    archs = resolve_inputs(req)
    for a in archs:
        print(f"{a.name}: ok")
    return 0


class UsageError(SpsError):
    pass


COMMANDS = {"analyze": cmd_analyze, "compare": cmd_compare, "simulate": cmd_simulate,
            "validate": cmd_validate}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        req = _request(args)
        return COMMANDS[args.command](req)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"spsavail: error: {exc}", file=sys.stderr)
        return 2
    except (SpsError, ValueError, OSError) as exc:
        print(f"spsavail: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
