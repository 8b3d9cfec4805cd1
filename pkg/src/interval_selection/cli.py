"""Command line entry point: ``interval-select {run,gen,verify,eval}``.

Exit status is 0 on success, 1 when a check finds a violation and 2 for
usage errors or unreadable input.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Sequence

from . import adversary
from .core import is_proper, offline_optimum
from .general import GeneralState
from .harness import ALGORITHMS, BASES, Config, ConfigError, evaluate, summarise
from .multipass import run_passes
from .online import online_init
from .proper import ProperViolation, ZoneTable, finalize_proper
from .streamio import (
    ParseError,
    emit_secret,
    emit_stream,
    iter_stream,
    parse_secret,
    parse_stream,
)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

KINDS = ("stack", "unit-gadget", "tree-gadget", "uniform", "nested", "proper-shifted", "unit")
_FAMILY = {"uniform": "uniform-general", "nested": "nested", "proper-shifted": "proper-shifted", "unit": "unit"}


class _FileStream:
    """Re-iterable view of a stream file, parsed lazily on every pass."""

    def __init__(self, path: str):
        self.path = path

    def __iter__(self):
        with open(self.path, encoding="utf-8") as fh:
            yield from iter_stream(fh)


def _open_stream(path: str):
    if path == "-":
        return parse_stream(sys.stdin.read())
    return _FileStream(path)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _config(args) -> Config:
    return Config(
        algorithm=args.alg,
        passes=args.passes,
        seed=args.seed,
        check_invariants=args.check_invariants,
        base=args.base,
    )


def cmd_run(args) -> int:
    config = _config(args)
    config.validate()
    stream = _open_stream(args.input)
    if args.stats or config.check_invariants:
        # statistics need the offline optimum, hence the whole stream
        stats = evaluate(stream, config)
        if args.stats:
            _write(args.stats, stats.to_record() + "\n")
        for v in stats.violations:
            print(f"violation: {v}", file=sys.stderr)
    else:
        stats = None
    selection = _select(stream, config)
    _write(args.output, emit_stream(selection))
    return EXIT_VIOLATION if stats is not None and stats.invariant_violations else EXIT_OK


def _select(stream, config: Config):
    """Run the algorithm in one streaming pass per pass, keeping no history."""
    if config.algorithm == "general":
        state = GeneralState()
        for iv in stream:
            state.process(iv)
        return offline_optimum(state.actual)
    if config.algorithm == "proper":
        table = ZoneTable()
        for iv in stream:
            table.process(iv)
        return finalize_proper(table)
    if config.algorithm == "online":
        state = online_init(0 if config.seed is None else config.seed)
        for iv in stream:
            state.arrive(iv)
        return sorted(state.solution(), key=lambda iv: iv.lo.rank)
    if config.algorithm == "multipass":
        mode = config.base
        if mode == "auto":
            mode = "proper" if is_proper(stream) else "general"
        return run_passes(stream, config.passes or 1, mode).selection()
    return offline_optimum(stream)


def cmd_eval(args) -> int:
    config = _config(args)
    config.validate()
    if args.trials:
        if args.input:
            raise ConfigError("--trials generates its own streams; drop --input")
        family = _FAMILY.get(args.kind or "uniform")
        if family is None:
            raise ConfigError("--trials needs a random --kind")
        base_seed = args.gen_seed or 0
        records = []
        for t in range(args.trials):
            stream = adversary.gen_random(args.count, family, base_seed + t, args.openness)
            records.append(evaluate(stream, config))
        text = "".join(r.to_record() + "\n" for r in records)
        summary = summarise(records)
        worst = summary["worst_ratio"]
        worst = "-" if worst is None else f"{worst.numerator}/{worst.denominator}"
        text += (
            f"summary runs={summary['runs']} worst_ratio={worst} "
            f"empty_outputs={summary['empty_outputs']} "
            f"invariant_violations={summary['invariant_violations']} "
            f"diagnostics={summary['diagnostics']}\n"
        )
        bad = summary["invariant_violations"]
    else:
        if not args.input:
            raise ConfigError("eval needs --input or --trials")
        stats = evaluate(_open_stream(args.input), config)
        for v in stats.violations:
            print(f"violation: {v}", file=sys.stderr)
        text = stats.to_record() + "\n"
        bad = stats.invariant_violations
    _write(args.stats, text)
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_gen(args) -> int:
    secret = None
    if args.kind == "stack":
        pi = _parse_pi(args.pi, args.n)
        spec = adversary.StackSpec(args.n, pi, Fraction(args.x), Fraction(args.y))
        stream = adversary.make_stack(spec)
    elif args.kind == "unit-gadget":
        stream, secret = adversary.gen_unit_gadget(args.blocks, args.n, args.seed)
    elif args.kind == "tree-gadget":
        stream, secret = adversary.gen_tree_gadget(args.depth, args.n, args.seed, inset=not args.no_inset)
    else:
        stream = adversary.gen_random(args.count, _FAMILY[args.kind], args.seed, args.openness)
    _write(args.output, emit_stream(stream))
    if args.secret:
        if secret is None:
            raise ConfigError(f"--kind {args.kind} has no secret")
        _write(args.secret, emit_secret(secret))
    return EXIT_OK


def _parse_pi(text: str | None, n: int) -> tuple[int, ...]:
    if text is None:
        return tuple(range(1, n + 1))
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise ConfigError(f"--pi expects comma-separated integers, got {text!r}") from None


def cmd_verify(args) -> int:
    with open(args.secret, encoding="utf-8") as fh:
        secret = parse_secret(fh.read())
    stream = list(_open_stream(args.input))
    report = adversary.verify_gadget(stream, secret)
    for v in report:
        print(f"violation: {v}")
    if not report:
        print(f"ok intervals={len(stream)} phases={secret.phases}")
    return EXIT_VIOLATION if report else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="interval-select", description="Streaming interval selection toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def algorithm_flags(p):
        p.add_argument("--alg", choices=ALGORITHMS, default="general")
        p.add_argument("--passes", type=int, help="number of passes (multipass only)")
        p.add_argument("--seed", type=int, help="colour seed (online only)")
        p.add_argument("--base", choices=BASES, default="auto", help="first-pass algorithm (multipass only)")
        p.add_argument("--check-invariants", action="store_true")
        p.add_argument("--stats", metavar="FILE", help="write the stats record here ('-' for stdout)")

    run = sub.add_parser("run", help="select intervals from a stream file")
    algorithm_flags(run)
    run.add_argument("--input", required=True, metavar="FILE")
    run.add_argument("--output", metavar="FILE")
    run.set_defaults(func=cmd_run)

    ev = sub.add_parser("eval", help="print a stats record for one stream or many random trials")
    algorithm_flags(ev)
    ev.add_argument("--input", metavar="FILE")
    ev.add_argument("--trials", type=int, default=0)
    ev.add_argument("--kind", choices=tuple(_FAMILY), help="random family for --trials")
    ev.add_argument("--count", type=int, default=50)
    ev.add_argument("--gen-seed", type=int, help="seed of the first trial stream")
    ev.add_argument("--openness", choices=(*adversary.OPENNESS, "mixed"))
    ev.set_defaults(func=cmd_eval)

    gen = sub.add_parser("gen", help="generate a stream")
    gen.add_argument("--kind", choices=KINDS, required=True)
    gen.add_argument("--n", type=int, default=4, help="stack size")
    gen.add_argument("--blocks", type=int, default=1)
    gen.add_argument("--depth", type=int, default=1)
    gen.add_argument("--count", type=int, default=50)
    gen.add_argument("--seed", type=int)
    gen.add_argument("--pi", help="stack permutation, e.g. 2,1,3")
    gen.add_argument("--x", default="0")
    gen.add_argument("--y", default="1")
    gen.add_argument("--openness", choices=(*adversary.OPENNESS, "mixed"))
    gen.add_argument("--no-inset", action="store_true", help="tree gadget: deploy children on the raw segments")
    gen.add_argument("--output", metavar="FILE")
    gen.add_argument("--secret", metavar="FILE")
    gen.set_defaults(func=cmd_gen)

    ver = sub.add_parser("verify", help="check a gadget stream against its secret")
    ver.add_argument("--input", required=True, metavar="FILE")
    ver.add_argument("--secret", required=True, metavar="FILE")
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ConfigError, ProperViolation, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
