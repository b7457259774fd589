"""Binding of semantic types to a concrete stack.

Runtime convention: a value whose semantic type is a function is a Python
callable over runtime values; every other value is a finite ``Value``, with
nested functions stored as ``Table``.  ``to_data``/``to_runtime`` convert
between the two views at a given type.
"""
from __future__ import annotations

from typing import Callable, Optional

from .. import finite
from ..finite import FinType, Table, enumerate_values, indexer
from ..stack import EffectUnavailable, Stack
from .types import UNIT_T, LawTypeError, TCon, Ty, enum_t, show

DEFAULT_CARDINALITY = 2
# type names bound to the designated effect's parameter
EFFECT_TYPE_NAMES = {"E": "exception", "R": "reader", "W": "writer", "S": "state"}


def fintype_to_ty(t: FinType) -> Ty:
    if isinstance(t, finite.Unit):
        return UNIT_T
    if isinstance(t, finite.Enum):
        return enum_t(t.n)
    if isinstance(t, finite.Sum):
        return TCon("Sum", (fintype_to_ty(t.left), fintype_to_ty(t.right)))
    if isinstance(t, finite.Prod):
        return TCon("Prod", (fintype_to_ty(t.first), fintype_to_ty(t.second)))
    return TCon("Fn", (fintype_to_ty(t.dom), fintype_to_ty(t.cod)))


class Model:
    """A stack plus a type-variable assignment."""

    def __init__(self, stack: Stack, types: Optional[dict] = None):
        self.stack = stack
        self.types = dict(types or {})
        self.effect = stack.effect
        p = stack.spec.param()
        self.param = fintype_to_ty(p) if p is not None else UNIT_T
        self._fin = {}
        self._data = {}
        self._rt = {}
        self._stacks = {}

    # -- type names

    def named(self, name: str) -> Ty:
        if name == "Unit":
            return UNIT_T
        effect = EFFECT_TYPE_NAMES.get(name)
        if effect is not None and name not in self.types:
            if self.effect != effect:
                raise LawTypeError(f"type {name} needs a designated {effect} layer")
            return self.param
        n = self.types.get(name, DEFAULT_CARDINALITY)
        # a one-element type variable is the unit type itself
        return UNIT_T if n == 1 else enum_t(n)

    # -- realization

    def stack_at(self, p: Ty) -> Stack:
        if self.effect is None:
            return self.stack
        try:
            return self._stacks[p]
        except KeyError:
            try:
                s = self.stack.with_param(self.realize(p))
            except TypeError as exc:
                raise LawTypeError(str(exc)) from None
            self._stacks[p] = s
            return s

    def realize(self, t: Ty) -> FinType:
        try:
            return self._fin[t]
        except KeyError:
            pass
        name = t.name if isinstance(t, TCon) else None
        if name is None:
            raise LawTypeError(f"unresolved type {t}")
        if name == "Unit":
            out = finite.UNIT
        elif name == "Enum":
            out = finite.Enum(t.size)
        elif name == "Sum":
            out = finite.Sum(self.realize(t.args[0]), self.realize(t.args[1]))
        elif name == "Prod":
            out = finite.Prod(self.realize(t.args[0]), self.realize(t.args[1]))
        elif name == "Fn":
            out = finite.Fn(self.realize(t.args[0]), self.realize(t.args[1]))
        elif name == "F":
            out = self.stack_at(t.args[0]).carrier(self.realize(t.args[1]))
        elif name == "N":
            try:
                plain = self.stack.plain
            except EffectUnavailable as exc:
                raise LawTypeError(f"N {show(t.args[0])}: {exc}") from None
            out = plain.carrier(self.realize(t.args[0]))
        else:
            raise LawTypeError(f"unknown type constructor {name}")
        self._fin[t] = out
        return out

    # -- runtime conversions

    def to_data(self, t: Ty) -> Optional[Callable]:
        """Converter runtime -> Value at type t, or None when it is the identity."""
        try:
            return self._data[t]
        except KeyError:
            pass
        out = None
        if t.name == "Fn":
            dom, cod = t.args
            args = enumerate_values(self.realize(dom))
            arg_rt = self.to_runtime(dom)
            if arg_rt is not None:
                args = [arg_rt(a) for a in args]
            res = self.to_data(cod)
            if res is None:
                def out(f, args=args):
                    return Table([f(a) for a in args])
            else:
                def out(f, args=args, res=res):
                    return Table([res(f(a)) for a in args])
        self._data[t] = out
        return out

    def to_runtime(self, t: Ty) -> Optional[Callable]:
        """Converter Value -> runtime at type t, or None when it is the identity."""
        try:
            return self._rt[t]
        except KeyError:
            pass
        out = None
        if t.name == "Fn":
            dom, cod = t.args
            rank = indexer(self.realize(dom))
            arg = self.to_data(dom)
            res = self.to_runtime(cod)
            if arg is None and res is None:
                def out(table):
                    entries = table.entries
                    return lambda x: entries[rank(x)]
            elif res is None:
                def out(table):
                    entries = table.entries
                    return lambda x: entries[rank(arg(x))]
            elif arg is None:
                def out(table):
                    entries = table.entries
                    return lambda x: res(entries[rank(x)])
            else:
                def out(table):
                    entries = table.entries
                    return lambda x: res(entries[rank(arg(x))])
        self._rt[t] = out
        return out

    def adapter(self, dom: Ty, cod: Ty) -> Callable:
        """Resolve once: runtime function -> Value -> Value callable."""
        a = self.to_runtime(dom)
        r = self.to_data(cod)
        if a is None and r is None:
            return lambda f: f
        if a is None:
            return lambda f: lambda v: r(f(v))
        if r is None:
            return lambda f: lambda v: f(a(v))
        return lambda f: lambda v: r(f(a(v)))

    def adapt(self, f: Callable, dom: Ty, cod: Ty) -> Callable:
        """A runtime function as a Value -> Value callable."""
        return self.adapter(dom, cod)(f)

    def data(self, t: Ty, x):
        conv = self.to_data(t)
        return x if conv is None else conv(x)

    def runtime(self, t: Ty, v):
        conv = self.to_runtime(t)
        return v if conv is None else conv(v)
