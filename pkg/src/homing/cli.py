"""Command-line entry point.

Exit codes: 0 success, 1 reject / disagreement / undetermined, 2 invalid
input data, 3 resource budget exceeded, 64 usage error.  Errors go to stderr
as ``error: <code>: <message>``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import analysis, codec, counters, gallery
from .linalg import Vector
from .machine import (
    DEFAULT_MAX_CONFIGS,
    HVA,
    BudgetExceeded,
    MachineFormatError,
    UnknownSymbol,
    dumps_machine,
    format_word,
    load_machine,
    parse_word,
    run,
    trace,
)

EXIT_OK = 0
EXIT_NO = 1
EXIT_DATA = 2
EXIT_BUDGET = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class CliError(Exception):
    def __init__(self, code: str, message: str, status: int = EXIT_DATA, details: Sequence[str] = ()):
        super().__init__(message)
        self.code = code
        self.status = status
        self.details = list(details)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def run_file_or_gallery(ref: str) -> HVA:
    """Resolve ``gallery:NAME`` from the built-in gallery, anything else as a file path."""
    if ref.startswith("gallery:"):
        name = ref.split(":", 1)[1]
        try:
            return gallery.gallery_get(name).machine
        except KeyError:
            raise CliError("unknown-machine", f"no gallery entry named {name!r}") from None
    try:
        return load_machine(ref)
    except OSError as exc:
        raise CliError("io", f"cannot read {ref}: {exc.strerror or exc}") from None
    except MachineFormatError as exc:
        raise CliError("invalid-machine", str(exc), details=exc.violations) from None


def _word(machine: HVA, text: str, mode: str) -> tuple[str, ...]:
    csv = mode == "csv" or (mode == "auto" and any(len(s) != 1 for s in machine.alphabet))
    return parse_word(text, csv=csv)


def _oracle(name: str):
    try:
        return gallery.gallery_get(name).reference
    except KeyError:
        raise CliError("unknown-oracle", f"no reference predicate named {name!r}") from None


def _report(result: analysis.CheckResult, out) -> int:
    print(result.summary(), file=out)
    return EXIT_OK if result.passed else EXIT_NO


# -- subcommands -----------------------------------------------------------


def cmd_run(args, out) -> int:
    machine = run_file_or_gallery(args.machine)
    result = run(machine, _word(machine, args.word, args.symbols), max_configs=args.max_configs)
    print("accept" if result.accepted else "reject", file=out)
    if args.stats:
        print(
            f"steps={result.steps} max_configs={result.max_configs} max_entry={result.max_entry}",
            file=out,
        )
    return EXIT_OK if result.accepted else EXIT_NO


def cmd_trace(args, out) -> int:
    machine = run_file_or_gallery(args.machine)
    word = _word(machine, args.word, args.symbols)
    for n, configs in enumerate(trace(machine, word, max_configs=args.max_configs)):
        shown = sorted(configs, key=lambda c: (c.state, c.vector.entries))
        prefix = format_word(word[:n])
        print(f"{n} {prefix}: " + (" | ".join(str(c) for c in shown) or "(dead)"), file=out)
    return EXIT_OK


def cmd_enum(args, out) -> int:
    machine = run_file_or_gallery(args.machine)
    for w in analysis.enumerate_language(machine, args.maxlen, args.max_configs, args.jobs):
        print(format_word(w), file=out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    machine = run_file_or_gallery(args.machine)
    oracle = args.oracle
    if oracle is None:
        if not args.machine.startswith("gallery:"):
            raise UsageError("verify: --oracle is required for machine files")
        oracle = args.machine.split(":", 1)[1]
    reference = _oracle(oracle)
    return _report(
        analysis.cross_check(machine, reference, args.maxlen, args.max_configs, args.jobs), out
    )


def cmd_equiv(args, out) -> int:
    a = run_file_or_gallery(args.first)
    b = run_file_or_gallery(args.second)
    try:
        result = analysis.equivalence(a, b, args.maxlen, args.max_configs, args.jobs)
    except ValueError as exc:
        raise CliError("invalid-input", str(exc)) from None
    return _report(result, out)


def _gsb_tokens(text: str, k: int) -> list:
    if not text:
        return []
    if "," in text or text.startswith("a_"):
        return [t.strip() for t in text.split(",") if t.strip()]
    if not text.isdigit():
        raise CliError("invalid-input", f"expected digits 1..{k} or a_j names, got {text!r}")
    return [int(ch) for ch in text]


def cmd_encode(args, out) -> int:
    text = "" if args.string in ("", "ε") else args.string
    try:
        if args.k == 2 and set(text) <= {"0", "1"}:
            v = codec.sb_encode(text)
        else:
            v = codec.gsb_encode(_gsb_tokens(text, args.k), args.k)
    except ValueError as exc:
        raise CliError("invalid-input", str(exc)) from None
    print(v, file=out)
    return EXIT_OK


def cmd_decode(args, out) -> int:
    try:
        v = Vector(args.vector.split())
    except ValueError as exc:
        raise CliError("invalid-input", str(exc)) from None
    try:
        if args.k == 2:
            print(codec.sb_decode(v) or "ε", file=out)
        else:
            print(format_word(codec.gsb_decode(v, args.k)), file=out)
    except codec.InvalidEncoding as exc:
        raise CliError("invalid-encoding", str(exc)) from None
    except ValueError as exc:
        raise CliError("invalid-input", str(exc)) from None
    return EXIT_OK


def cmd_compile_counter(args, out) -> int:
    try:
        cm = counters.load_counter_machine(args.file)
    except OSError as exc:
        raise CliError("io", f"cannot read {args.file}: {exc.strerror or exc}") from None
    except MachineFormatError as exc:
        raise CliError("invalid-machine", str(exc), details=exc.violations) from None
    try:
        hva = counters.compile_blind(cm) if cm.blind else counters.compile_one_counter(cm)
    except counters.CompileError as exc:
        raise CliError("not-compilable", str(exc)) from None
    print(dumps_machine(hva), file=out)
    return EXIT_OK


def cmd_gallery(args, out) -> int:
    if args.action == "list":
        for e in gallery.gallery_all():
            m = e.machine
            kind = ("D" if m.deterministic else "N") + ("B" if m.blind else "") + f"HVA({m.dimension})"
            print(f"{e.name}\t{kind}\t{e.notes}", file=out)
        return EXIT_OK
    if args.name is None:
        raise UsageError(f"gallery {args.action}: NAME is required")
    try:
        entry = gallery.gallery_get(args.name)
    except KeyError:
        raise CliError("unknown-machine", f"no gallery entry named {args.name!r}") from None
    if args.action == "export":
        print(dumps_machine(entry.machine), file=out)
        return EXIT_OK
    return _report(
        analysis.cross_check(entry.machine, entry.reference, args.maxlen, args.max_configs, args.jobs),
        out,
    )


def cmd_bound(args, out) -> int:
    try:
        print(f"entry_bound {analysis.entry_bound(args.m, args.k, args.n)}", file=out)
        print(f"config_bound {analysis.config_count_bound(args.s, args.m, args.k, args.n)}", file=out)
    except ValueError as exc:
        raise CliError("invalid-input", str(exc)) from None
    return EXIT_OK


def cmd_audit(args, out) -> int:
    machine = run_file_or_gallery(args.machine)
    try:
        report = analysis.growth_audit(machine, args.maxlen)
    except analysis.BoundViolation as exc:
        raise CliError("bound-violation", str(exc), status=EXIT_NO) from None
    for line in report.lines():
        print(line, file=out)
    return EXIT_OK


def cmd_unary_dfa(args, out) -> int:
    machine = run_file_or_gallery(args.machine)
    try:
        result = analysis.unary_dfa_extract(machine, args.budget)
    except ValueError as exc:
        raise CliError("invalid-input", str(exc)) from None
    if isinstance(result, analysis.Undetermined):
        print(f"undetermined: {result.reason}", file=out)
        return EXIT_NO
    text = result.to_text()
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text, file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hva", description="Homing vector automata toolkit.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def machine_cmd(name, func, help, word=False):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("machine", help="machine file or gallery:NAME")
        if word:
            sp.add_argument("word", help="input word ('' or ε for the empty word)")
            sp.add_argument("--symbols", choices=("auto", "chars", "csv"), default="auto")
        sp.add_argument("--max-configs", type=int, default=DEFAULT_MAX_CONFIGS)
        sp.set_defaults(func=func)
        return sp

    sp = machine_cmd("run", cmd_run, "run a machine on one word", word=True)
    sp.add_argument("--stats", action="store_true")
    machine_cmd("trace", cmd_trace, "print configuration sets after each prefix", word=True)

    for name, func, help in (
        ("enum", cmd_enum, "list accepted words up to --maxlen"),
        ("verify", cmd_verify, "compare a machine with a gallery oracle"),
    ):
        sp = machine_cmd(name, func, help)
        sp.add_argument("--maxlen", type=int, required=True)
        sp.add_argument("--jobs", type=int, default=1)
        if name == "verify":
            sp.add_argument("--oracle", help="gallery entry whose predicate to use (default: the gallery machine's own)")

    sp = sub.add_parser("equiv", help="compare two machines on all words up to --maxlen")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--maxlen", type=int, required=True)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--max-configs", type=int, default=DEFAULT_MAX_CONFIGS)
    sp.set_defaults(func=cmd_equiv)

    sp = sub.add_parser("encode", help="Stern-Brocot encode a string")
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("string")
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("decode", help="decode a Stern-Brocot vector")
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("vector", help='whitespace-separated entries, e.g. "5 2"')
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("compile-counter", help="compile a counter machine file into an HVA")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_compile_counter)

    sp = sub.add_parser("gallery", help="list, export or verify gallery machines")
    sp.add_argument("action", choices=("list", "export", "verify"))
    sp.add_argument("name", nargs="?")
    sp.add_argument("--maxlen", type=int, default=10)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--max-configs", type=int, default=DEFAULT_MAX_CONFIGS)
    sp.set_defaults(func=cmd_gallery)

    sp = sub.add_parser("bound", help="entry and configuration-count bounds")
    for flag in ("--s", "--m", "--k", "--n"):
        sp.add_argument(flag, type=int, required=True)
    sp.set_defaults(func=cmd_bound)

    sp = machine_cmd("audit", cmd_audit, "check observed entry growth against the bound")
    sp.add_argument("--maxlen", type=int, required=True)

    sp = machine_cmd("unary-dfa", cmd_unary_dfa, "extract a DFA from a unary deterministic machine")
    sp.add_argument("--budget", type=int, required=True)
    sp.add_argument("-o", "--output")
    return p


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: usage: {exc}", file=err)
        print(parser.format_usage().rstrip(), file=err)
        return EXIT_USAGE
    except CliError as exc:
        print(f"error: {exc.code}: {exc}", file=err)
        for line in exc.details:
            print(f"  {line}", file=err)
        return exc.status
    except BudgetExceeded as exc:
        print(f"error: budget: {exc}", file=err)
        return EXIT_BUDGET
    except UnknownSymbol as exc:
        print(f"error: invalid-input: {exc}", file=err)
        return EXIT_DATA


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
