"""Surface subcommands: rigidity, type and verify."""

import argparse

from surfrig.commands.common import (
    EXIT_NEGATIVE,
    EXIT_OK,
    emit,
    load_placement,
    load_surface,
    summary,
)
from surfrig.config import Settings
from surfrig.services.graphs import load_graph
from surfrig.services.rigidity import RigidityService
from surfrig.services.verification import EXPECTATIONS, VerifyService, passes


def cmd_rigidity(args: argparse.Namespace, settings: Settings) -> int:
    """Analyze a graph on a surface; exit 0 iff the expectation holds."""
    graph = load_graph(args.graph)
    surface = load_surface(args.surface)
    service = RigidityService(settings)
    if args.placement:
        placement = load_placement(args.placement)
        if args.float:
            placement = [tuple(float(c) for c in p) for p in placement]
        report = service.analyze_placement(graph, surface, placement, args.k)
    else:
        report = service.analyze(
            graph,
            surface,
            trials=args.trials,
            seed=args.seed,
            k=args.k,
            use_float=args.float,
        )
    emit(report, args.out)
    verdict = "isostatic" if report.isostatic else (
        "independent" if report.independent else "dependent"
    )
    summary(
        f"{surface.name}: {verdict}, rank {report.rank}/{report.rows} "
        f"({report.strength.value}, {report.trials} trials)"
    )
    ok = passes(report, True, args.expect)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_type(args: argparse.Namespace, settings: Settings) -> int:
    """Estimate a surface type; exit 1 if it contradicts the declared one."""
    surface = load_surface(args.surface)
    estimate = RigidityService(settings).compute_type(
        surface, trials=args.trials, seed=args.seed
    )
    emit(estimate, args.out)
    summary(f"{estimate.surface}: type {estimate.k}")
    declared = surface.declared_type
    if declared is not None and declared != estimate.k:
        summary(f"Declared type {declared} differs from the estimate")
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    """Run a verify batch; exit 0 iff every trial passes."""
    result = VerifyService(settings).run(
        n_max=args.n,
        k=args.k,
        trials=args.trials,
        surface_spec=args.surface,
        expect=args.expect,
        seed=args.seed,
        workers=args.workers,
    )
    emit(result, args.out)
    summary(
        f"{result.passed}/{result.trials} passed ({args.expect} on "
        f"{result.surface})"
    )
    return EXIT_OK if result.failed == 0 else EXIT_NEGATIVE


def register(subparsers: argparse._SubParsersAction) -> None:
    """Add the surface subcommands to the top-level parser."""
    rig = subparsers.add_parser(
        "rigidity", help="Analyze a graph on a surface"
    )
    rig.add_argument("graph", help="Graph JSON file")
    rig.add_argument("--surface", required=True)
    rig.add_argument("--k", type=int, help="Override the surface type")
    rig.add_argument("--trials", type=int)
    rig.add_argument("--seed", type=int)
    rig.add_argument(
        "--placement", help="JSON list of points instead of sampling"
    )
    rig.add_argument(
        "--float", action="store_true", help="Force floating ranks"
    )
    rig.add_argument("--expect", choices=EXPECTATIONS, default="isostatic")
    rig.add_argument("--out")
    rig.set_defaults(handler=cmd_rigidity)

    typ = subparsers.add_parser("type", help="Estimate a surface type")
    typ.add_argument("--surface", required=True)
    typ.add_argument("--trials", type=int)
    typ.add_argument("--seed", type=int)
    typ.add_argument("--out")
    typ.set_defaults(handler=cmd_type)

    ver = subparsers.add_parser(
        "verify", help="Generate, reduce and analyze random tight graphs"
    )
    ver.add_argument("--n", type=int, required=True)
    ver.add_argument("--k", type=int, default=1)
    ver.add_argument("--trials", type=int, required=True)
    ver.add_argument("--surface", required=True)
    ver.add_argument("--seed", type=int)
    ver.add_argument("--expect", choices=EXPECTATIONS, default="isostatic")
    ver.add_argument("--workers", type=int)
    ver.add_argument("--out")
    ver.set_defaults(handler=cmd_verify)
