"""Command-line entry point: generate, fit, bootstrap, detect communities and render networks.

Exit codes: 0 success, 1 usage error, 2 data error (unreadable files,
invalid networks or models).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np
import pandas as pd

from src.kebab_module_loader import load_module

_config = load_module("src.config-loader")
_net = load_module("src.model.network-schemas")
_io = load_module("src.model.model-io")
_nsm_gen = load_module("src.generator.nsm-generator")
_presets = load_module("src.generator.preset-specs")
_fitter = load_module("src.estimator.network-fitter")
_boot = load_module("src.bootstrap.network-bootstrap")
_measure = load_module("src.community.measure-l")
_greedy = load_module("src.community.greedy-communities")
_spectral = load_module("src.community.spectral-communities")
_embedding = load_module("src.community.normalized-embedding")
_render = load_module("src.cli.heatmap-renderer")

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    """Bad command-line arguments."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


# ── Helpers ───────────────────────────────────────────────────


def _load_network(path: str, sparse: bool = False):
    net = _io.read_network_csv(path, sparse=sparse)
    problems = _net.validate(net)
    if problems:
        first = problems[0]
        raise ValueError(f"{path}: invalid network ({len(problems)} violations), first: {first.kind} {first.message}")
    return net


def _load_labels(path: str | None, n: int):
    if path is None:
        return _net.CommunityAssignment.single(n)
    assignment = _io.read_labels(path)
    if assignment.n != n:
        raise ValueError(f"{path}: {assignment.n} labels for a {n}-node network")
    return assignment


# ── Subcommands ───────────────────────────────────────────────


def _cmd_generate(args) -> int:
    if (args.spec is None) == (args.preset is None):
        raise UsageError("generate needs exactly one of --spec or --preset")
    if args.spec:
        spec = _io.read_generator_spec(args.spec)
    else:
        spec = _presets.planted_sociability_spec(sigma_within=args.sigma, sigma_between=args.sigma)
    net, psi = _nsm_gen.generate(spec, seed=args.seed)
    _io.write_network_csv(net, args.out)
    if args.labels_out:
        _io.write_labels(spec.assignment, args.labels_out)
    if args.psi_out:
        pd.DataFrame({"psi": psi}).to_csv(args.psi_out, header=False, index=False, float_format="%.17g")
    logger.info("Wrote %d-node network to %s", net.n, args.out)
    return EXIT_OK


def _cmd_fit(args) -> int:
    net = _load_network(args.net, sparse=args.sparse)
    assignment = _load_labels(args.labels, net.n)
    options = _fitter.FitOptions(
        mode=_fitter.FitMode(args.mode),
        screen=args.screen,
        seed=args.seed,
        replicates=args.replicates,
    )
    model = _fitter.fit_network(net, assignment, options)
    _io.write_model(model, args.out)
    if args.estimate_out:
        _io.write_network_csv(_fitter.estimated_network(model), args.estimate_out)
    if args.summary_out:
        _fitter.summarize_fit(model).to_csv(args.summary_out, index=False)
    logger.info("Wrote fitted model (%d pairs) to %s", len(model.pairs), args.out)
    return EXIT_OK


def _cmd_bootstrap(args) -> int:
    if args.count < 1:
        raise UsageError(f"--count must be positive, got {args.count}")
    model = _io.read_fitted_model(args.model)
    for k, replicate in enumerate(_boot.bootstrap_replicates(model, args.seed, args.count), start=1):
        _io.write_network_csv(replicate, f"{args.out_prefix}_{k}.csv")
    logger.info("Wrote %d replicates with prefix %s", args.count, args.out_prefix)
    return EXIT_OK


def _cmd_communities(args) -> int:
    net = _load_network(args.net, sparse=args.sparse)
    if args.method == "greedy":
        assignment = _greedy.greedy_communities(net)
    elif args.method == "spectral":
        assignment = _spectral.spectral_communities(net, args.replicates, args.seed)
    elif args.method == "embedding":
        assignment = _embedding.embedding_communities(net, args.replicates, args.seed)
    else:
        found = [_greedy.greedy_communities(net), _spectral.spectral_communities(net, args.replicates, args.seed)]
        scores = [_measure.measure_l(net, a).value for a in found]
        assignment = found[int(np.argmax(scores))]
        logger.info("Greedy L=%.6g, spectral L=%.6g", *scores)
    _io.write_labels(assignment, args.out)
    logger.info("Wrote %d communities to %s", assignment.k, args.out)
    return EXIT_OK


def _cmd_render(args) -> int:
    net = _load_network(args.net)
    assignment = _load_labels(args.labels, net.n)
    fmt = args.format or (Path(args.out).suffix.lstrip(".").lower() or "pgm")
    _render.render_network(net, args.out, assignment, args.sort, fmt, args.scale)
    return EXIT_OK


# ── Parser ────────────────────────────────────────────────────


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="socnet", description="Sociability models for dense weighted networks")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", help="draw a network from an H-Normal NSM spec")
    gen.add_argument("--spec", help="GeneratorSpec JSON")
    gen.add_argument("--preset", choices=["planted"], help="built-in 4 x 37 planted network")
    gen.add_argument("--sigma", type=float, default=0.0, help="noise level for --preset")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.add_argument("--labels-out")
    gen.add_argument("--psi-out")
    gen.set_defaults(handler=_cmd_generate)

    fit = sub.add_parser("fit", help="fit pair models to a network with known communities")
    fit.add_argument("--net", required=True)
    fit.add_argument("--labels")
    fit.add_argument("--mode", choices=[m.value for m in _fitter.FitMode], default=_fitter.FitMode.NSM.value)
    fit.add_argument("--screen", action="store_true", help="run the spurious-structure screen")
    fit.add_argument("--replicates", type=int, default=_fitter.FitOptions.replicates)
    fit.add_argument("--sparse", action="store_true", help="treat off-diagonal zeros as missing edges")
    fit.add_argument("--seed", type=int, default=0)
    fit.add_argument("--out", required=True)
    fit.add_argument("--estimate-out")
    fit.add_argument("--summary-out")
    fit.set_defaults(handler=_cmd_fit)

    boot = sub.add_parser("bootstrap", help="draw replicate networks from a fitted model")
    boot.add_argument("--model", required=True)
    boot.add_argument("--seed", type=int, default=0)
    boot.add_argument("--count", type=int, default=1)
    boot.add_argument("--out-prefix", required=True)
    boot.set_defaults(handler=_cmd_bootstrap)

    comm = sub.add_parser("communities", help="detect communities by maximizing L")
    comm.add_argument("--net", required=True)
    comm.add_argument("--method", choices=["greedy", "spectral", "embedding", "both"], default="both")
    comm.add_argument("--replicates", type=int, default=_spectral.DEFAULT_REPLICATES)
    comm.add_argument("--sparse", action="store_true")
    comm.add_argument("--seed", type=int, default=0)
    comm.add_argument("--out", required=True)
    comm.set_defaults(handler=_cmd_communities)

    ren = sub.add_parser("render", help="write a community-ordered heatmap")
    ren.add_argument("--net", required=True)
    ren.add_argument("--labels")
    ren.add_argument("--sort", choices=["degree", "none"], default="degree")
    ren.add_argument("--format", choices=["pgm", "ppm", "html"])
    ren.add_argument("--scale", type=int, default=1)
    ren.add_argument("--out", required=True)
    ren.set_defaults(handler=_cmd_render)
    return parser


def run(argv: list[str] | None = None) -> int:
    """Parse ``argv`` and run one subcommand; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"socnet: error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else _config.log_level(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"socnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        logger.error("%s failed: %s", args.command, exc)
        print(f"socnet: {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run(sys.argv[1:]))
