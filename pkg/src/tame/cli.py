"""Command-line entry point: ``tame align | eval | generate | sweep-beta``."""

from __future__ import annotations

import argparse
import hashlib
import logging
import platform
import resource
import sys
import time
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .errors import InputError, NumericalError, TameError
from .graph import enumerate_triangles, read_graph
from .matching import format_matching, parse_matching
from .metrics import evaluate, parse_truth
from .pipeline import align
from .similarity import read_similarity
from .solver import BETA_GRID, profile_config, select_beta
from .synthgen import GenConfig, generate, summarize, write_pair

log = logging.getLogger("tame")

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _existing(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"no such file: {path}")
    return p


def _write_manifest(out: Path, args: argparse.Namespace, inputs: dict, outputs: list[str],
                    started: float, extra: dict | None = None):
    lines = ["[config]"]
    for key in sorted(vars(args)):
        if key == "func":
            continue
        lines.append(f"{key}: {getattr(args, key)}")
    lines.append("[inputs]")
    for name, path in inputs.items():
        if path is not None:
            lines.append(f"{name}: {path} sha256={_digest(path)}")
    lines.append("[versions]")
    lines.append(f"tame: {__version__}")
    lines.append(f"python: {platform.python_version()}")
    lines.append(f"numpy: {np.__version__}")
    lines.append(f"scipy: {scipy.__version__}")
    lines.append("[results]")
    for name in outputs:
        lines.append(f"{name}: sha256={_digest(out / name)}")
    for key, value in (extra or {}).items():
        lines.append(f"{key}: {value}")
    lines.append("[run]")
    lines.append(f"wallclock_seconds: {time.perf_counter() - started:.3f}")
    # ru_maxrss is KiB on Linux
    lines.append(f"peak_rss_kib: {resource.getrusage(resource.RUSAGE_SELF).ru_maxrss}")
    (out / "manifest.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")


def _solver_config(args, beta=None):
    return profile_config(args.profile, constrained=args.constrained,
                          beta=args.beta if beta is None else beta,
                          max_iters=args.max_iters, matcher=args.matcher)


def _run_align(args, out: Path, beta=None):
    gA = read_graph(_existing(args.graph_a))
    gB = read_graph(_existing(args.graph_b))
    w = read_similarity(_existing(args.sim), gA, gB)
    truth = parse_truth(_existing(args.truth).read_text(encoding="utf-8"), gA, gB) if args.truth else None
    cfg = _solver_config(args, beta)
    started = time.perf_counter()
    result = align(gA, gB, w, cfg, post_rounds=args.post_rounds, b_topo=args.b_topo,
                   b_seq=args.b_seq, truth=truth, threads=args.threads)
    out.mkdir(parents=True, exist_ok=True)
    (out / "alignment.tsv").write_text(format_matching(result.matching, gA, gB, result.X), encoding="utf-8")
    (out / "metrics.txt").write_text(result.report.to_text(), encoding="utf-8")
    (out / "trace.tsv").write_text(result.trace.to_tsv(), encoding="utf-8")
    inputs = {"graph_a": args.graph_a, "graph_b": args.graph_b, "sim": args.sim, "truth": args.truth}
    _write_manifest(out, args, inputs, ["alignment.tsv", "metrics.txt", "trace.tsv"], started,
                    {"resolved_beta": cfg.beta, "resolved_max_iters": cfg.max_iters})
    return result


def cmd_align(args) -> int:
    result = _run_align(args, Path(args.out))
    r = result.report
    print(f"matched {r.matched_pairs} pairs, conserved triangles {r.conserved_triangles}, "
          f"tgs3 {r.tgs3:.4f}, gs3 {r.gs3:.4f}")
    return EXIT_OK


def cmd_sweep_beta(args) -> int:
    out = Path(args.out)
    betas = args.betas if args.betas else list(BETA_GRID)
    scores = {}
    rows = []
    for beta in betas:
        sub = out / f"beta_{beta:g}"
        try:
            result = _run_align(args, sub, beta=beta)
            scores[beta] = result.report.conserved_triangles
            rows.append(f"{beta:g}\t{scores[beta]}\t{result.report.tgs3:.12g}")
        except NumericalError as exc:
            scores[beta] = None
            rows.append(f"{beta:g}\t\t\t# {exc}")
    winner = select_beta(scores)
    out.mkdir(parents=True, exist_ok=True)
    text = "beta\tconserved_triangles\ttgs3\n" + "\n".join(rows) + f"\n# best_beta\t{winner:g}\n"
    (out / "sweep.tsv").write_text(text, encoding="utf-8")
    print(text, end="")
    return EXIT_OK


def cmd_eval(args) -> int:
    gA = read_graph(_existing(args.graph_a))
    gB = read_graph(_existing(args.graph_b))
    m = parse_matching(_existing(args.alignment).read_text(encoding="utf-8"), gA, gB)
    truth = parse_truth(_existing(args.truth).read_text(encoding="utf-8"), gA, gB) if args.truth else None
    report = evaluate(m, gA, gB, enumerate_triangles(gA), enumerate_triangles(gB), truth)
    text = report.to_text()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    print(text, end="")
    return EXIT_OK


def cmd_generate(args) -> int:
    cfg = GenConfig(ancestor_size=args.ancestor_size, size_a=args.size_a, size_b=args.size_b,
                    dup_prob=args.dup_prob, edge_keep_prob=args.edge_keep_prob,
                    complement_prob=args.complement_prob,
                    noise_pairs_per_node=args.noise_pairs_per_node, seed=args.seed)
    pair = generate(cfg)
    paths = write_pair(pair, args.out)
    for side, (n, m, t) in summarize(pair).items():
        print(f"{side}: nodes={n} edges={m} triangles={t}")
    for name, path in paths.items():
        print(f"{name}: {path}")
    return EXIT_OK


def _add_align_flags(p):
    p.add_argument("--graph-a", required=True)
    p.add_argument("--graph-b", required=True)
    p.add_argument("--sim", required=True)
    p.add_argument("--truth", help="optional ground-truth pairs; adds F-NC to the report")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--profile", choices=("default", "paper"), default="default")
    p.add_argument("--beta", type=float, help="shift (profile decides when omitted)")
    p.add_argument("--max-iters", type=int)
    p.add_argument("--constrained", action="store_true", help="run cTAME")
    p.add_argument("--post-rounds", type=int, default=3)
    p.add_argument("--b-topo", type=int, default=200)
    p.add_argument("--b-seq", type=int, default=50)
    p.add_argument("--matcher", choices=("hungarian", "greedy"), default="hungarian")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tame", description="Triangle-conserving network alignment.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("align", help="align two graphs")
    _add_align_flags(p)
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("sweep-beta", help="align over a grid of shifts and pick the best")
    _add_align_flags(p)
    p.add_argument("--betas", type=float, nargs="+")
    p.set_defaults(func=cmd_sweep_beta)

    p = sub.add_parser("eval", help="score an existing alignment")
    p.add_argument("--graph-a", required=True)
    p.add_argument("--graph-b", required=True)
    p.add_argument("--alignment", required=True)
    p.add_argument("--truth")
    p.add_argument("--out", help="write the report here as well")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("generate", help="emit a synthetic network pair")
    d = GenConfig()
    p.add_argument("--out", required=True)
    p.add_argument("--ancestor-size", type=int, default=d.ancestor_size)
    p.add_argument("--size-a", type=int, default=d.size_a)
    p.add_argument("--size-b", type=int, default=d.size_b)
    p.add_argument("--dup-prob", type=float, default=d.dup_prob)
    p.add_argument("--edge-keep-prob", type=float, default=d.edge_keep_prob)
    p.add_argument("--complement-prob", type=float, default=d.complement_prob)
    p.add_argument("--noise-pairs-per-node", type=float, default=d.noise_pairs_per_node)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (TameError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
