"""``monadlaw`` command-line front end.

Exit status: 0 when every verdict matches its expectation, 1 when some
verdict does not (or an explained counterexample no longer reproduces),
2 on a configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from . import __version__, finite
from .dsl import prims
from .dsl.syntax import LawSyntaxError, parse_law
from .dsl.typecheck import LawCheckError, typecheck_law
from .engine import (
    Budget,
    check_entry,
    counterexample_digits,
    describe_instance,
    dumps,
    load_reports,
    report_document,
    run_suite,
    suite_ok,
)
from .plotting import verdict, write_report_dir
from .registry import ENV_VAR, RegistryError, UnknownName, load_registry
from .stack import MUTANTS, StackSyntaxError, parse_stack

EXIT_OK, EXIT_UNEXPECTED, EXIT_CONFIG = 0, 1, 2

GRAMMAR = """\
Stacks (outermost layer first):
  stack  := layer ("." layer)* "." "Id"
          | "ReaderBase(r=" INT "," stack ")"
  layer  := "ExceptT(e=" INT ")" | "ReaderT(r=" INT ")"
          | "WriterT(" MONOID ")" | "StateT(s=" INT ")"
  MONOID := Trivial | Z2 | Z3 | T2
  e.g.   StateT(s=2).ExceptT(e=2).Id
         ReaderBase(r=2, WriterT(Z2).Id)

Law files:
  @cite "where the law comes from"
  @expect holds | refuted | report-only
  @types X=1, X'=1
  law NAME: forall x: TYPE, y: TYPE . EXPR == EXPR

  @stacks "STACK", "STACK"
  @effect exception | reader | writer | state
  suite NAME { LAW, LAW }

Types:  Unit, E, R, W, S (the designated effect parameter), X, Y, ... (size 2
        unless set with @types or --type), A + B, A * B, A -> B, M A, N A, J A,
        F(P, A), End W
Terms:  \\x. e   f x   f ∘ g   m >>= k   m >> n   (a, b)   *   (e : TYPE)
"""


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    stack: Optional[str] = None
    suites: list = field(default_factory=list)
    laws: list = field(default_factory=list)
    types: dict = field(default_factory=dict)
    budget: Budget = field(default_factory=Budget)
    output: str = "text"
    laws_dirs: list = field(default_factory=list)
    workers: int = 1
    mutant: Optional[str] = None
    report_dir: Optional[str] = None


def _type_assignment(text: str):
    name, sep, n = text.partition("=")
    name = name.strip()
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected NAME=N, got {text!r}")
    try:
        value = int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cardinality must be an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"cardinality must be >= 1: {text!r}")
    return name, value


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="monadlaw", description="Check algebraic laws of monad transformer stacks on finite models.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--laws-dir", action="append", default=[], metavar="PATH",
                        help=f"extra directory (or file) of .law files; default from ${ENV_VAR}")

    c = sub.add_parser("check", help="check laws")
    c.add_argument("--stack", help="stack to check on (default: the suite's own stacks)")
    c.add_argument("--suite", action="append", default=[], help="suite name (repeatable)")
    c.add_argument("--law", action="append", default=[], help="law name (repeatable)")
    c.add_argument("--type", action="append", default=[], type=_type_assignment, metavar="X=N",
                   help="cardinality of a type variable")
    c.add_argument("--budget", type=_positive, default=10**6, metavar="N",
                   help="largest instance count checked exhaustively (default 10^6)")
    c.add_argument("--sample", type=_positive, default=10**5, metavar="N",
                   help="sample size above the budget (default 10^5)")
    c.add_argument("--seed", type=_seed, default=0, metavar="N")
    c.add_argument("--json", action="store_true", help="emit the JSON report document")
    c.add_argument("--workers", type=_positive, default=1, metavar="N",
                   help="processes for exhaustive runs (default 1)")
    c.add_argument("--single-threaded", action="store_true", help="force one process")
    c.add_argument("--mutant", choices=MUTANTS, help="check against a deliberately broken semantics")
    c.add_argument("--report-dir", metavar="DIR",
                   help="also write report.json, summary.csv and summary.png here")
    common(c)

    l = sub.add_parser("list", help="list suites, laws, monoids, primitives or the grammar")
    l.add_argument("what", choices=("suites", "laws", "monoids", "grammar", "primitives"))
    l.add_argument("--suite", action="append", default=[])
    common(l)

    e = sub.add_parser("explain", help="re-verify the counterexamples of a JSON report")
    e.add_argument("report", help="path to a report document")
    common(e)
    return p


def config_from_args(ns) -> RunConfig:
    cfg = RunConfig(command=ns.command, laws_dirs=list(getattr(ns, "laws_dir", [])))
    if ns.command == "check":
        cfg.stack = ns.stack
        cfg.suites = ns.suite
        cfg.laws = ns.law
        cfg.types = dict(ns.type)
        cfg.budget = Budget(max_instances=ns.budget, seed=ns.seed, sample_size=ns.sample)
        cfg.output = "json" if ns.json else "text"
        cfg.workers = 1 if ns.single_threaded else ns.workers
        cfg.mutant = ns.mutant
        cfg.report_dir = ns.report_dir
    elif ns.command == "list":
        cfg.suites = ns.suite
    return cfg


# ---------------------------------------------------------------- check


def _line(r) -> str:
    inst = f"{r.instances_checked}" if r.mode != "none" else "-"
    return f"{verdict(r):<18} {r.law:<24} {r.stack:<32} {r.mode:<10} {inst:>8}"


def _render_cex(cex: dict, indent="    ") -> list:
    out = []
    for name, v in cex["binders"].items():
        out.append(f"{indent}{name} = {v}")
    if cex.get("input") is not None:
        out.append(f"{indent}at input {cex['input']}")
    out.append(f"{indent}lhs = {cex['lhs']}")
    out.append(f"{indent}rhs = {cex['rhs']}")
    return out


def _gather(cfg: RunConfig, reg):
    """Reports plus whether a configuration problem was seen."""
    if cfg.stack is not None:
        parse_stack(cfg.stack)
    reports = []
    config_problem = False
    suites = [reg.suite(s).name for s in cfg.suites]
    laws = [reg.lookup(n) for n in cfg.laws]
    if not suites and not laws:
        suites = reg.suite_names()
    for s in suites:
        reports += run_suite(s, cfg.stack, cfg.budget, reg, cfg.types, cfg.mutant, cfg.workers)
    for entry in laws:
        owner = reg.suite(entry.suite) if entry.suite else None
        stacks = [cfg.stack] if cfg.stack else list(owner.stacks if owner else ())
        if not stacks:
            raise ConfigError(f"law {entry.name} belongs to no suite; pass --stack")
        for st in stacks:
            r = check_entry(entry, st, cfg.budget, cfg.types, owner.effect if owner else None,
                            cfg.mutant, cfg.workers)
            if r.mode == "none":
                config_problem = True
            reports.append(r)
    return reports, config_problem


def cmd_check(cfg: RunConfig, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    t0 = time.perf_counter()
    reg = load_registry(cfg.laws_dirs)
    reports, config_problem = _gather(cfg, reg)
    meta = {
        "version": __version__,
        "elapsed_seconds": round(time.perf_counter() - t0, 3),
        "workers": cfg.workers,
    }
    doc = report_document(reports, meta)
    text = dumps(doc)
    if cfg.output == "json":
        print(text, file=out)
    else:
        for r in reports:
            print(_line(r), file=out)
            if r.counterexample:
                out.write("\n".join(_render_cex(r.counterexample)) + "\n")
            if r.status == "skipped":
                print(f"    skipped: {r.message}", file=out)
            elif r.message:
                print(f"    {r.message}", file=out)
        counts = doc["comparable"]["summary"]["outcomes"]
        print("summary: " + ", ".join(f"{k}={v}" for k, v in counts.items()), file=out)
    if cfg.report_dir:
        for path in write_report_dir(text, reports, cfg.report_dir):
            print(f"wrote {path}", file=err)
    if config_problem:
        for r in reports:
            if r.mode == "none" and r.status == "error":
                print(f"monadlaw: error: {r.law} on {r.stack}: {r.message}", file=err)
        return EXIT_CONFIG
    return EXIT_OK if suite_ok(reports) else EXIT_UNEXPECTED


# ---------------------------------------------------------------- list


def cmd_list(cfg: RunConfig, what: str, out=None) -> int:
    out = out or sys.stdout
    if what == "grammar":
        out.write(GRAMMAR)
        return EXIT_OK
    if what == "monoids":
        for m in finite.BUILTIN_MONOIDS.values():
            rows = "; ".join(
                " ".join(str(m.table[i][j]) for j in range(m.size)) for i in range(m.size)
            )
            print(f"{m.name:<8} size {m.size}  unit {m.unit_index}  table [{rows}]", file=out)
        return EXIT_OK
    if what == "primitives":
        print(prims.describe(), file=out)
        return EXIT_OK
    reg = load_registry(cfg.laws_dirs)
    if what == "suites":
        for name, n, stacks in reg.list_suites():
            print(f"{name:<22} {n:>3} laws  {', '.join(stacks)}", file=out)
        return EXIT_OK
    entries = []
    if cfg.suites:
        for s in cfg.suites:
            entries += reg.laws_in(s)
    else:
        entries = reg.all_laws()
    for e in entries:
        tag = "" if e.expectation == "holds" else f" [{e.expectation}]"
        print(f"{e.name:<24} {e.citation}{tag}", file=out)
    return EXIT_OK


# ---------------------------------------------------------------- explain


def cmd_explain(path: str, laws_dirs=(), out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        reports = load_reports(doc)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read report {path}: {exc}") from None
    reg = load_registry(laws_dirs)
    status = EXIT_OK
    for r in reports:
        print(_line(r), file=out)
        if not r.counterexample:
            continue
        try:
            try:
                law = reg.lookup(r.law).law
            except UnknownName:
                law = parse_law(r.source)
            t = typecheck_law(law, r.stack, r.types, effect=r.effect)
            digits = counterexample_digits(t, r.counterexample)
            fresh = describe_instance(t, digits)
        except (LawSyntaxError, LawCheckError, StackSyntaxError, KeyError, ValueError) as exc:
            print(f"    WARNING: cannot re-evaluate counterexample: {exc}", file=out)
            status = EXIT_UNEXPECTED
            continue
        out.write("\n".join(_render_cex(fresh)) + "\n")
        if r.mutant:
            print(f"    (report produced with mutant {r.mutant}; re-verified on the unmodified semantics)",
                  file=out)
        if fresh["lhs"] != fresh["rhs"]:
            print("    re-verification OK: sides still differ", file=out)
        else:
            print("    WARNING: counterexample no longer reproduces", file=out)
            print(f"WARNING: {r.law} on {r.stack}: counterexample no longer reproduces", file=err)
            status = EXIT_UNEXPECTED
    return status


# ---------------------------------------------------------------- entry point


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors, --help, --version
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    try:
        cfg = config_from_args(ns)
        if ns.command == "check":
            return cmd_check(cfg)
        if ns.command == "list":
            return cmd_list(cfg, ns.what)
        return cmd_explain(ns.report, cfg.laws_dirs)
    except StackSyntaxError as exc:
        print(f"monadlaw: stack error: {exc}", file=sys.stderr)
        if exc.text is not None:
            print(f"  {exc.text}\n  {' ' * exc.pos}^", file=sys.stderr)
    except (UnknownName, RegistryError, LawSyntaxError, ConfigError, ValueError) as exc:
        print(f"monadlaw: error: {exc}", file=sys.stderr)
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
