"""The shipped law inventory, loaded from ``*.law`` files.

Extra law files can be added from directories named by ``MONADLAW_LAWS_DIR``
(``os.pathsep``-separated) or passed explicitly.
"""
from __future__ import annotations

import difflib
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Optional

from .dsl.syntax import LawExpr, SuiteDecl, parse_law_file, print_law

LAWS_DIR = Path(__file__).parent / "laws"
ENV_VAR = "MONADLAW_LAWS_DIR"

SUITE_ORDER = (
    "monad-core",
    "exception-bind",
    "exception-catch",
    "exception-joint",
    "reader-core",
    "reader-consequences",
    "reader-ask",
    "writer-mixmap",
    "writer-coherence",
    "writer-twostory",
    "writer-steele",
    "writer-corollaries",
    "state-core",
    "state-derived",
)


class RegistryError(ValueError):
    pass


class UnknownName(KeyError):
    def __init__(self, kind: str, name: str, suggestions):
        self.kind = kind
        self.name = name
        self.suggestions = list(suggestions)
        hint = f"; did you mean {', '.join(self.suggestions)}?" if self.suggestions else ""
        super().__init__(f"unknown {kind} {name!r}{hint}")

    def __str__(self):
        return self.args[0]


@dataclass(frozen=True)
class LawEntry:
    name: str
    suite: Optional[str]
    law: LawExpr
    origin: str

    @property
    def source(self) -> str:
        return print_law(self.law)

    @property
    def citation(self) -> str:
        return self.law.cite

    @property
    def expectation(self) -> str:
        return self.law.expect


@dataclass(frozen=True)
class Suite:
    name: str
    laws: tuple
    stacks: tuple
    effect: Optional[str]


class Registry:
    def __init__(self, files: Iterable[Path]):
        self.entries: dict = {}
        self.suites: dict = {}
        pending = []
        for path in files:
            text = Path(path).read_text(encoding="utf-8")
            parsed = parse_law_file(text, str(path))
            for law in parsed.laws:
                if law.name in self.entries or law.name in {l.name for l, _ in pending}:
                    raise RegistryError(f"{path}: duplicate law name {law.name}")
                pending.append((law, str(path)))
            for s in parsed.suites:
                if s.name in self.suites:
                    raise RegistryError(f"{path}: duplicate suite name {s.name}")
                self.suites[s.name] = Suite(s.name, s.laws, s.stacks, s.effect)
        owner = {}
        for s in self.suites.values():
            for name in s.laws:
                owner.setdefault(name, s.name)
        known = {l.name for l, _ in pending}
        for s in self.suites.values():
            for name in s.laws:
                if name not in known:
                    raise RegistryError(f"suite {s.name} lists unknown law {name}")
        for law, origin in pending:
            self.entries[law.name] = LawEntry(law.name, owner.get(law.name), law, origin)

    # -- queries

    def lookup(self, name: str) -> LawEntry:
        try:
            return self.entries[name]
        except KeyError:
            raise UnknownName("law", name, self._near(name, self.entries)) from None

    def suite(self, name: str) -> Suite:
        try:
            return self.suites[name]
        except KeyError:
            raise UnknownName("suite", name, self._near(name, self.suites)) from None

    def suite_names(self) -> list:
        shipped = [s for s in SUITE_ORDER if s in self.suites]
        return shipped + sorted(s for s in self.suites if s not in SUITE_ORDER)

    def list_suites(self) -> list:
        """(name, law count, default stacks) in a fixed order."""
        return [
            (n, len(self.suites[n].laws), list(self.suites[n].stacks)) for n in self.suite_names()
        ]

    def laws_in(self, suite: str) -> list:
        return [self.entries[n] for n in self.suite(suite).laws]

    def all_laws(self) -> list:
        return list(self.entries.values())

    @staticmethod
    def _near(name, pool):
        matches = difflib.get_close_matches(name, list(pool), n=3, cutoff=0.5)
        if not matches:
            low = name.lower()
            matches = [p for p in pool if low in p.lower()][:3]
        return matches


def law_files(extra_dirs: Iterable = ()) -> list:
    dirs = [LAWS_DIR]
    env = os.environ.get(ENV_VAR)
    if env:
        dirs += [Path(d) for d in env.split(os.pathsep) if d]
    dirs += [Path(d) for d in extra_dirs]
    files = []
    for d in dirs:
        if d.is_file():
            files.append(d)
        elif d.is_dir():
            files.extend(sorted(d.glob("*.law")))
        else:
            raise RegistryError(f"law directory not found: {d}")
    return files


def load_registry(extra_dirs: Iterable = ()) -> Registry:
    return Registry(law_files(extra_dirs))


@lru_cache(maxsize=8)
def _cached(env: Optional[str], extra: tuple) -> Registry:
    return load_registry(extra)


def default_registry(extra_dirs: Iterable = ()) -> Registry:
    return _cached(os.environ.get(ENV_VAR), tuple(str(d) for d in extra_dirs))


def registry_lookup(name: str) -> LawEntry:
    return default_registry().lookup(name)


def list_suites() -> list:
    return default_registry().list_suites()
