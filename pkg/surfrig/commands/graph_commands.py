"""Graph subcommands: check, reduce and generate."""

import argparse

from surfrig.commands.common import (
    EXIT_NEGATIVE,
    EXIT_OK,
    emit,
    summary,
)
from surfrig.config import Settings
from surfrig.exceptions import NotTightError
from surfrig.models.schemas import GeneratedGraph
from surfrig.services.graphs import (
    is_sparse,
    is_sparse_bruteforce,
    load_graph,
)
from surfrig.services.reducer import generate, reduce, replay


def cmd_check(args: argparse.Namespace, settings: Settings) -> int:
    """Print the sparsity verdict; exit 0 iff the graph is tight."""
    graph = load_graph(args.graph)
    test = is_sparse_bruteforce if args.bruteforce else is_sparse
    verdict = test(graph, args.k)
    emit(verdict, args.out)
    state = "tight" if verdict.tight else (
        "sparse" if verdict.sparse else "not sparse"
    )
    summary(f"(2,{args.k}): {state} (n={graph.n}, m={graph.num_edges})")
    return EXIT_OK if verdict.tight else EXIT_NEGATIVE


def cmd_reduce(args: argparse.Namespace, settings: Settings) -> int:
    """Write the reduction certificate; exit 1 for non-tight input."""
    graph = load_graph(args.graph)
    try:
        certificate = reduce(graph, args.k)
    except NotTightError as e:
        summary(str(e))
        return EXIT_NEGATIVE
    if args.replay_check and replay(certificate) != graph:
        summary("Replay does not reproduce the input graph")
        return EXIT_NEGATIVE
    emit(certificate, args.out)
    summary(
        f"Reduced to {certificate.base.value} in "
        f"{len(certificate.steps)} steps"
    )
    return EXIT_OK


def cmd_generate(args: argparse.Namespace, settings: Settings) -> int:
    """Write a random tight graph with its certificate."""
    seed = settings.seed if args.seed is None else args.seed
    graph, certificate = generate(args.n, args.k, seed)
    emit(
        GeneratedGraph(
            k=args.k, seed=seed, graph=graph, certificate=certificate
        ),
        args.out,
    )
    summary(
        f"Generated (2,{args.k})-tight graph, n={graph.n}, "
        f"m={graph.num_edges}, {len(certificate.steps)} steps"
    )
    return EXIT_OK


def register(subparsers: argparse._SubParsersAction) -> None:
    """Add the graph subcommands to the top-level parser."""
    check = subparsers.add_parser("check", help="Test (2,k)-sparsity")
    check.add_argument("graph", help="Graph JSON file")
    check.add_argument("--k", type=int, required=True)
    check.add_argument(
        "--bruteforce",
        action="store_true",
        help="Enumerate subgraphs instead of playing the pebble game",
    )
    check.add_argument("--out")
    check.set_defaults(handler=cmd_check)

    red = subparsers.add_parser(
        "reduce", help="Reduce a tight graph to its base graph"
    )
    red.add_argument("graph", help="Graph JSON file")
    red.add_argument("--k", type=int, default=1)
    red.add_argument("--out")
    red.add_argument(
        "--replay-check",
        action="store_true",
        help="Replay the certificate and compare with the input",
    )
    red.set_defaults(handler=cmd_reduce)

    gen = subparsers.add_parser(
        "generate", help="Generate a random tight graph"
    )
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--k", type=int, default=1)
    gen.add_argument("--seed", type=int)
    gen.add_argument("--out")
    gen.set_defaults(handler=cmd_generate)
