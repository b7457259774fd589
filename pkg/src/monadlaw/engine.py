"""Instantiate a typed law over its finite domains and compare both sides.

The instance space of a law is the mixed-radix product of its binder
domains, in declaration order, followed by the input domain when the law
equates two functions.  Index 0 is the canonical-first instance.

Sampling draws indices from that space with SplitMix64 in counter mode:
draw ``j`` of a run with seed ``s`` uses the 64-bit words
``mix64(s + GAMMA * (c + 1))`` for consecutive counters ``c``, and a draw
below ``n`` rejects words past the largest multiple of ``n`` (several words
are concatenated when ``n`` exceeds 2**64).  Runs are therefore identical on
every platform and Python version.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from . import finite
from .dsl.syntax import parse_law, print_law
from .dsl.typecheck import LawCheckError, TypedLaw, typecheck_law
from .finite import INT64_MAX, render
from .registry import LawEntry, Registry, default_registry
from .stack import StackSyntaxError, parse_stack

FORMAT_VERSION = 1
OVER_BUDGET = INT64_MAX  # plan_instances saturates here

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Counter-based SplitMix64 stream."""

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self.counter = 0

    def next64(self) -> int:
        self.counter += 1
        return mix64((self.seed + GAMMA * self.counter) & MASK64)

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        if n == 1:
            return 0
        words = (n.bit_length() + 63) // 64
        span = 1 << (64 * words)
        limit = span - span % n
        while True:
            x = 0
            for _ in range(words):
                x = (x << 64) | self.next64()
            if x < limit:
                return x % n


@dataclass(frozen=True)
class Budget:
    max_instances: int = 10**6
    seed: int = 0
    sample_size: int = 10**5

    def __post_init__(self):
        if self.max_instances < 1 or self.sample_size < 1:
            raise ValueError("budget counts must be positive")
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class CheckReport:
    law: str
    stack: str
    types: dict
    expectation: str
    mode: str  # exhaustive | sampled | none
    planned: int
    instances_checked: int
    status: str  # pass | fail | error | skipped
    seed: int
    failing_instances: int = 0
    counterexample: Optional[dict] = None
    message: str = ""
    source: str = ""
    mutant: Optional[str] = None
    effect: Optional[str] = None

    @property
    def outcome(self) -> str:
        """expected | unexpected | report | skipped."""
        if self.status == "skipped":
            return "skipped"
        if self.status == "error":
            return "unexpected"
        if self.expectation == "report-only":
            return "report"
        want = "pass" if self.expectation == "holds" else "fail"
        return "expected" if self.status == want else "unexpected"

    def to_dict(self) -> dict:
        return {
            "law": self.law,
            "stack": self.stack,
            "effect": self.effect,
            "types": dict(sorted(self.types.items())),
            "expectation": self.expectation,
            "mode": self.mode,
            "planned": self.planned,
            "instances_checked": self.instances_checked,
            "status": self.status,
            "outcome": self.outcome,
            "failing_instances": self.failing_instances,
            "seed": self.seed,
            "mutant": self.mutant,
            "counterexample": self.counterexample,
            "message": self.message,
            "source": self.source,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CheckReport":
        return cls(
            law=d["law"],
            stack=d["stack"],
            types=dict(d.get("types", {})),
            expectation=d.get("expectation", "holds"),
            mode=d["mode"],
            planned=d["planned"],
            instances_checked=d["instances_checked"],
            status=d["status"],
            seed=d.get("seed", 0),
            failing_instances=d.get("failing_instances", 0),
            counterexample=d.get("counterexample"),
            message=d.get("message", ""),
            source=d.get("source", ""),
            mutant=d.get("mutant"),
            effect=d.get("effect"),
        )


# ---------------------------------------------------------------- planning


def plan_instances(t: TypedLaw) -> int:
    """Product of the quantifier domain sizes, saturating at OVER_BUDGET."""
    n = t.instance_count()
    return min(n, OVER_BUDGET)


def _radices(t: TypedLaw) -> list:
    return [a.size for a in t.axes]


def decode(t: TypedLaw, index: int) -> list:
    digits = []
    for r in reversed(_radices(t)):
        index, d = divmod(index, r)
        digits.append(d)
    return digits[::-1]


def encode(t: TypedLaw, digits) -> int:
    i = 0
    for r, d in zip(_radices(t), digits):
        i = i * r + d
    return i


# ---------------------------------------------------------------- evaluation


class _Evaluator:
    """Evaluates a typed law instance by instance, caching per-binder work."""

    CACHE_LIMIT = 1 << 12

    def __init__(self, t: TypedLaw):
        self.t = t
        m = t.model
        self.binders = t.binders
        self.ambient = t.ambient
        self._rt_cache = [dict() for _ in t.binders]
        self._to_rt = [m.to_runtime(b.ty) or (lambda x: x) for b in t.binders]
        if t.ambient is not None:
            self.arg_rt = m.to_runtime(t.ambient.ty) or (lambda x: x)
            self.res_data = m.to_data(t.result_ty) or (lambda x: x)
            self._args = {}
        else:
            self.law_data = m.to_data(t.law_ty) or (lambda x: x)
        self._sides = {}

    def binder_value(self, i: int, d: int):
        return self.binders[i].value(d)

    def env(self, digits) -> tuple:
        out = []
        for i, d in enumerate(digits):
            cache = self._rt_cache[i]
            v = cache.get(d)
            if v is None:
                v = self._to_rt[i](self.binders[i].value(d))
                if len(cache) < self.CACHE_LIMIT:
                    cache[d] = v
            out.append(v)
        return tuple(out)

    def sides(self, bdigits: tuple):
        hit = self._sides.get(bdigits)
        if hit is None:
            env = self.env(bdigits)
            hit = (self.t.lhs(env), self.t.rhs(env))
            self._sides = {bdigits: hit}  # keep only the latest valuation
        return hit

    def arg(self, d: int):
        a = self._args.get(d)
        if a is None:
            v = self.ambient.value(d)
            a = (v, self.arg_rt(v))
            if len(self._args) < self.CACHE_LIMIT:
                self._args[d] = a
        return a

    def values(self, digits):
        """(lhs, rhs) data values of one instance."""
        nb = len(self.binders)
        l, r = self.sides(tuple(digits[:nb]))
        if self.ambient is None:
            return self.law_data(l), self.law_data(r)
        _, x = self.arg(digits[nb])
        return self.res_data(l(x)), self.res_data(r(x))

    def fails(self, digits) -> bool:
        l, r = self.values(digits)
        return l != r


def _scan_exhaustive(t: TypedLaw, lo: int, hi: int):
    """Check binder valuations lo..hi-1 (mixed-radix over binders only).

    Returns (instances, failures, first failing instance index or None).
    """
    ev = _Evaluator(t)
    radices = [b.size for b in t.binders]
    n_in = t.ambient.size if t.ambient is not None else 1
    count = 0
    failures = 0
    first = None
    if t.ambient is not None:
        args = [ev.arg(j)[1] for j in range(n_in)]
        res = ev.res_data
    for b_index in range(lo, hi):
        digits = []
        rest = b_index
        for r in reversed(radices):
            rest, d = divmod(rest, r)
            digits.append(d)
        digits.reverse()
        env = ev.env(digits)
        lf, rf = t.lhs(env), t.rhs(env)
        if t.ambient is None:
            count += 1
            if ev.law_data(lf) != ev.law_data(rf):
                failures += 1
                if first is None:
                    first = b_index
            continue
        for j, x in enumerate(args):
            if res(lf(x)) != res(rf(x)):
                failures += 1
                if first is None:
                    first = b_index * n_in + j
        count += n_in
    return count, failures, first


def _binder_space(t: TypedLaw) -> int:
    n = 1
    for b in t.binders:
        n *= b.size
    return n


# worker processes rebuild the typed law from its source


def _worker_scan(args):
    source, stack_text, types, effect, mutant, lo, hi = args
    law = parse_law(source)
    t = typecheck_law(law, stack_text, types, effect=effect, mutant=mutant)
    return _scan_exhaustive(t, lo, hi)


def _exhaustive(t: TypedLaw, workers: int):
    space = _binder_space(t)
    if workers <= 1 or space < 2 * workers:
        return _scan_exhaustive(t, 0, space)
    step = -(-space // (workers * 4))
    chunks = [(lo, min(lo + step, space)) for lo in range(0, space, step)]
    spec = t.stack.spec
    base = (print_law(t.law), spec.text(), dict(t.model.types), t.model.effect, t.stack.mutant)
    total = failures = 0
    first = None
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for count, fails, f in pool.map(_worker_scan, [base + c for c in chunks]):
            total += count
            failures += fails
            if f is not None and (first is None or f < first):
                first = f
    return total, failures, first


def _sampled(t: TypedLaw, budget: Budget):
    ev = _Evaluator(t)
    rng = SplitMix64(budget.seed)
    plan = t.instance_count()
    failures = 0
    first = None
    for _ in range(budget.sample_size):
        idx = rng.below(plan)
        if ev.fails(decode(t, idx)):
            failures += 1
            if first is None:
                first = idx
    return budget.sample_size, failures, first


# ---------------------------------------------------------------- shrinking


def _candidates(current: int) -> list:
    small = list(range(min(current, 64)))
    halves = []
    c = current >> 1
    while c >= 64:
        halves.append(c)
        c >>= 1
    return sorted(set(small + halves))


def shrink_counterexample(t: TypedLaw, digits) -> list:
    """Greedily move each position to the earliest index that still fails."""
    ev = _Evaluator(t)
    cur = list(digits)
    if not ev.fails(cur):
        raise ValueError("not a counterexample")
    changed = True
    while changed:
        changed = False
        for pos in range(len(cur)):
            for cand in _candidates(cur[pos]):
                trial = cur[:pos] + [cand] + cur[pos + 1 :]
                if ev.fails(trial):
                    cur = trial
                    changed = True
                    break
    return cur


def describe_instance(t: TypedLaw, digits) -> dict:
    ev = _Evaluator(t)
    nb = len(t.binders)
    lhs, rhs = ev.values(digits)
    out = {
        "index": str(encode(t, digits)),
        "binders": {b.name: render(b.value(d)) for b, d in zip(t.binders, digits)},
        "input": render(t.ambient.value(digits[nb])) if t.ambient is not None else None,
        "lhs": render(lhs),
        "rhs": render(rhs),
    }
    return out


def counterexample_digits(t: TypedLaw, cex: dict) -> list:
    """Digits of a serialised counterexample, re-ranked against t."""
    digits = []
    for b in t.binders:
        digits.append(b.index(finite.parse_value(cex["binders"][b.name])))
    if t.ambient is not None:
        digits.append(t.ambient.index(finite.parse_value(cex["input"])))
    return digits


def reproduces(t: TypedLaw, cex: dict) -> bool:
    return _Evaluator(t).fails(counterexample_digits(t, cex))


# ---------------------------------------------------------------- checking


def _types_of(t: TypedLaw) -> dict:
    return {k: v for k, v in sorted(t.model.types.items())}


def check_law(t: TypedLaw, budget: Budget = Budget(), workers: int = 1) -> CheckReport:
    plan = plan_instances(t)
    exhaustive = t.instance_count() <= budget.max_instances
    report = CheckReport(
        law=t.name,
        stack=t.stack.spec.text(),
        types=_types_of(t),
        expectation=t.law.expect,
        mode="exhaustive" if exhaustive else "sampled",
        planned=plan,
        instances_checked=0,
        status="pass",
        seed=budget.seed,
        source=print_law(t.law, pragmas=False),
        mutant=t.stack.mutant,
        effect=t.model.effect,
    )
    try:
        if exhaustive:
            count, failures, first = _exhaustive(t, workers)
        else:
            count, failures, first = _sampled(t, budget)
        report.instances_checked = count
        report.failing_instances = failures
        if first is not None:
            digits = shrink_counterexample(t, decode(t, first))
            cex = describe_instance(t, digits)
            cex["found_at"] = str(first)
            if not reproduces(t, cex):
                raise AssertionError("counterexample does not re-verify")
            report.counterexample = cex
            report.status = "fail"
    except Exception as exc:  # evaluation bug, never a law failure
        report.status = "error"
        report.message = f"{type(exc).__name__}: {exc}"
    return report


def error_report(name: str, stack: str, expectation: str, message: str, budget: Budget,
                 status: str = "error", types=None, mutant=None) -> CheckReport:
    return CheckReport(
        law=name,
        stack=stack,
        types=dict(types or {}),
        expectation=expectation,
        mode="none",
        planned=0,
        instances_checked=0,
        status=status,
        seed=budget.seed,
        message=message,
        mutant=mutant,
    )


def check_entry(entry: LawEntry, stack: str, budget: Budget = Budget(), types=None,
                effect=None, mutant=None, workers: int = 1) -> CheckReport:
    """Typecheck then check; a typing failure becomes status=error."""
    try:
        t = typecheck_law(entry.law, stack, types, effect=effect, mutant=mutant)
    except LawCheckError as exc:
        return error_report(entry.name, _stack_text(stack), entry.expectation, str(exc), budget,
                            types=types, mutant=mutant)
    return check_law(t, budget, workers)


def _stack_text(stack) -> str:
    try:
        return parse_stack(stack).text() if isinstance(stack, str) else stack.text()
    except StackSyntaxError:
        return str(stack)


class UnknownSuite(KeyError):
    pass


def run_suite(suite: str, stack: Optional[str] = None, budget: Budget = Budget(),
              registry: Optional[Registry] = None, types=None, mutant=None,
              workers: int = 1) -> list:
    """One report per law; laws needing primitives the stack lacks are skipped."""
    reg = registry or default_registry()
    s = reg.suite(suite)
    stacks = [stack] if stack is not None else list(s.stacks)
    reports = []
    for st in stacks:
        for entry in reg.laws_in(suite):
            try:
                t = typecheck_law(entry.law, st, types, effect=s.effect, mutant=mutant)
            except LawCheckError as exc:
                reports.append(
                    error_report(entry.name, _stack_text(st), entry.expectation, str(exc),
                                 budget, status="skipped", types=types, mutant=mutant)
                )
                continue
            reports.append(check_law(t, budget, workers))
    return reports


def suite_ok(reports) -> bool:
    return all(r.outcome != "unexpected" for r in reports)


# ---------------------------------------------------------------- serialisation


def report_document(reports, meta: Optional[dict] = None) -> dict:
    counts = {}
    for r in reports:
        counts[r.outcome] = counts.get(r.outcome, 0) + 1
    return {
        "comparable": {
            "format": FORMAT_VERSION,
            "reports": [r.to_dict() for r in reports],
            "summary": {
                "laws": len(reports),
                "outcomes": dict(sorted(counts.items())),
                "ok": suite_ok(reports),
            },
        },
        "meta": dict(meta or {}),
    }


def comparable_json(doc: dict) -> str:
    return json.dumps(doc["comparable"], indent=2, sort_keys=False, ensure_ascii=False)


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False)


def load_reports(doc: dict) -> list:
    try:
        items = doc["comparable"]["reports"]
    except (KeyError, TypeError):
        raise ValueError("not a report document (missing comparable.reports)") from None
    return [CheckReport.from_dict(d) for d in items]


def default_workers() -> int:
    return max(1, min(os.cpu_count() or 1, 8))
