"""Semantic types of law expressions and their unification."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional


class LawTypeError(TypeError):
    pass


class Ty:
    __slots__ = ()


@dataclass(frozen=True, eq=True)
class TCon(Ty):
    """Unit, Enum(n), Sum, Prod, Fn, F(p, a) or N(a)."""

    name: str
    args: tuple = ()
    size: int = 0  # for Enum only

    def __hash__(self):
        # types are dict keys on hot paths; hash the tree once
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.name, self.args, self.size))
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self):
        return show(self)


class TMeta(Ty):
    __slots__ = ("id", "ref")
    _ids = itertools.count()

    def __init__(self):
        self.id = next(TMeta._ids)
        self.ref: Optional[Ty] = None

    def __repr__(self):
        return f"?{self.id}"

    __str__ = __repr__


UNIT_T = TCon("Unit")


def enum_t(n: int) -> TCon:
    return TCon("Enum", (), n)


# Interned so that types rebuilt inside primitives at run time are the same
# objects, which keeps the converter caches keyed on them cheap.
@lru_cache(maxsize=1 << 14)
def _con(name, args):
    return TCon(name, args)


def fn(*tys) -> Ty:
    out = tys[-1]
    for t in reversed(tys[:-1]):
        out = _con("Fn", (t, out))
    return out


def sum_t(a, b):
    return _con("Sum", (a, b))


def prod(a, b):
    return _con("Prod", (a, b))


def f_t(p, a):
    return _con("F", (p, a))


def n_t(a):
    return _con("N", (a,))


def prune(t: Ty) -> Ty:
    while isinstance(t, TMeta) and t.ref is not None:
        t = t.ref
    return t


def zonk(t: Ty) -> Ty:
    t = prune(t)
    if isinstance(t, TCon) and t.args:
        return TCon(t.name, tuple(zonk(a) for a in t.args), t.size)
    return t


def metas(t: Ty, out=None) -> list:
    out = [] if out is None else out
    t = prune(t)
    if isinstance(t, TMeta):
        if t not in out:
            out.append(t)
    else:
        for a in t.args:
            metas(a, out)
    return out


def f_param_metas(t: Ty, out=None) -> list:
    """Metas standing in the parameter slot of some F(p, a)."""
    out = [] if out is None else out
    t = prune(t)
    if isinstance(t, TCon):
        if t.name == "F":
            p = prune(t.args[0])
            if isinstance(p, TMeta) and p not in out:
                out.append(p)
        for a in t.args:
            f_param_metas(a, out)
    return out


def _occurs(m: TMeta, t: Ty) -> bool:
    t = prune(t)
    if t is m:
        return True
    return isinstance(t, TCon) and any(_occurs(m, a) for a in t.args)


def unify(a: Ty, b: Ty) -> None:
    a, b = prune(a), prune(b)
    if a is b:
        return
    if isinstance(a, TMeta):
        if _occurs(a, b):
            raise LawTypeError(f"infinite type {a} ~ {show(b)}")
        a.ref = b
        return
    if isinstance(b, TMeta):
        unify(b, a)
        return
    if a.name != b.name or a.size != b.size or len(a.args) != len(b.args):
        raise LawTypeError(f"cannot match {show(a)} with {show(b)}")
    for x, y in zip(a.args, b.args):
        unify(x, y)


def show(t: Ty, prec: int = 0) -> str:
    t = prune(t)
    if isinstance(t, TMeta):
        return repr(t)
    name = t.name
    if name == "Unit":
        return "Unit"
    if name == "Enum":
        return f"Enum{t.size}"
    if name == "Fn":
        s = f"{show(t.args[0], 1)} -> {show(t.args[1], 0)}"
        return f"({s})" if prec > 0 else s
    if name == "Sum":
        s = f"{show(t.args[0], 1)} + {show(t.args[1], 2)}"
        return f"({s})" if prec > 1 else s
    if name == "Prod":
        s = f"{show(t.args[0], 2)} * {show(t.args[1], 3)}"
        return f"({s})" if prec > 2 else s
    if name == "F":
        return f"F({show(t.args[0])}, {show(t.args[1])})"
    if name == "N":
        s = f"N {show(t.args[0], 4)}"
        return f"({s})" if prec > 3 else s
    return name
