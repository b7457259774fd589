"""Transformer stacks over the identity monad, interpreted on finite carriers.

A stack is written outermost layer first, e.g. ``StateT(s=2).ExceptT(e=2).Id``.
Values of ``M x`` are plain :mod:`monadlaw.finite` values laid out exactly as
the transformer newtypes would unfold them over ``Identity``.

Functions passed into the operations here (continuations ``k``, handlers,
maps) are Python callables from values to values.

Effect operations are implemented at the layer that owns the effect and
lifted through every other layer with the usual transformer liftings:
pointwise through ``ReaderT``/``StateT``, inside the result cell through
``WriterT``/``ExceptT``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Optional

from . import finite
from .finite import (
    Enum,
    FinType,
    Fn,
    InL,
    InR,
    MonoidSpec,
    Pair,
    Prod,
    Star,
    Sum,
    Table,
    enumerate_values,
    indexer,
)

EFFECTS = ("exception", "reader", "writer", "state")
KIND_EFFECT = {"ExceptT": "exception", "ReaderT": "reader", "WriterT": "writer", "StateT": "state"}

MUTANTS = ("writer-bind-drop", "put-ignore", "catch-never")


class StackSyntaxError(ValueError):
    def __init__(self, text: str, pos: int, message: str):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos} in {text!r}")


class EffectUnavailable(LookupError):
    pass


# ---------------------------------------------------------------- specs


@dataclass(frozen=True)
class LayerSpec:
    kind: str  # ExceptT | ReaderT | WriterT | StateT
    param: object  # FinType, or MonoidSpec for WriterT
    base: bool = False  # the ReaderBase layer

    @property
    def effect(self) -> str:
        return KIND_EFFECT[self.kind]

    def param_type(self) -> FinType:
        if self.kind == "WriterT":
            return self.param.carrier
        return self.param

    def text(self) -> str:
        p = self.param
        size = p.n if isinstance(p, Enum) else None
        if self.kind == "WriterT":
            return f"WriterT({p.name})"
        key = {"ExceptT": "e", "ReaderT": "r", "StateT": "s"}[self.kind]
        return f"{self.kind}({key}={size if size is not None else p})"


@dataclass(frozen=True)
class StackSpec:
    """Layers outermost first; a ``base`` ReaderT marks the ReaderBase model."""

    layers: tuple = ()
    designated: Optional[tuple] = None  # (effect, layer index)

    @property
    def reader_base(self) -> Optional[int]:
        for i, layer in enumerate(self.layers):
            if layer.base:
                return i
        return None

    def text(self) -> str:
        base = self.reader_base
        if base is None:
            return ".".join([l.text() for l in self.layers] + ["Id"])
        outer = [l.text() for l in self.layers[:base]]
        inner = StackSpec(self.layers[base + 1 :]).text()
        env = self.layers[base].param
        size = env.n if isinstance(env, Enum) else env
        return ".".join(outer + [f"ReaderBase(r={size}, {inner})"])

    __str__ = text

    def effects(self) -> set:
        return {l.effect for l in self.layers}

    def designate(self, effect: str, index: Optional[int] = None) -> "StackSpec":
        """Select which layer's operations a law targets.

        Defaults to the innermost layer of the matching kind; for the reader
        effect the ReaderBase layer wins when present.
        """
        if effect not in EFFECTS:
            raise ValueError(f"unknown effect {effect!r}")
        if index is None:
            if effect == "reader" and self.reader_base is not None:
                index = self.reader_base
            else:
                matches = [i for i, l in enumerate(self.layers) if l.effect == effect]
                if not matches:
                    raise EffectUnavailable(f"no {effect} layer in {self.text()}")
                index = matches[-1]
        if not 0 <= index < len(self.layers) or self.layers[index].effect != effect:
            raise EffectUnavailable(f"layer {index} of {self.text()} is not a {effect} layer")
        return replace(self, designated=(effect, index))

    @property
    def effect(self) -> Optional[str]:
        return self.designated[0] if self.designated else None

    def param(self) -> Optional[FinType]:
        if not self.designated:
            return None
        return self.layers[self.designated[1]].param_type()

    def with_param(self, p: FinType) -> "StackSpec":
        """Same stack with the designated layer's parameter type replaced.

        Only the exception and reader parameters may vary; the writer monoid
        and the state type are fixed.
        """
        if not self.designated:
            raise EffectUnavailable("no designated effect")
        effect, i = self.designated
        layer = self.layers[i]
        if layer.param_type() == p:
            return self
        if effect in ("writer", "state"):
            raise TypeError(f"the {effect} parameter is fixed at {layer.param_type()}, not {p}")
        layers = list(self.layers)
        layers[i] = replace(layer, param=p)
        return replace(self, layers=tuple(layers))

    def without_reader_base(self) -> "StackSpec":
        """The plain monad N of a ReaderBase model: the base layer peeled off."""
        base = self.reader_base
        if base is None:
            raise EffectUnavailable("apply/abstr need a ReaderBase model")
        return StackSpec(self.layers[:base] + self.layers[base + 1 :])


_LAYER_RE = re.compile(
    r"\s*(?:(ExceptT)\(\s*e\s*=\s*(\d+)\s*\)|(ReaderT)\(\s*r\s*=\s*(\d+)\s*\)"
    r"|(WriterT)\(\s*(\w+)\s*\)|(StateT)\(\s*s\s*=\s*(\d+)\s*\))"
)
_BASE_RE = re.compile(r"\s*ReaderBase\(\s*r\s*=\s*(\d+)\s*,")
_ID_RE = re.compile(r"\s*Id\b")


def parse_stack(text: str) -> StackSpec:
    """Parse the stack grammar; layers read left to right, outermost first.

    ``stack := (layer ".")* base``, ``base := "Id" | "ReaderBase(r=N, stack)"``.
    """
    layers, pos = _parse_stack(text, 0)
    rest = text[pos:].strip()
    if rest:
        raise StackSyntaxError(text, pos, f"unexpected trailing input {rest!r}")
    return StackSpec(tuple(layers))


def _parse_stack(text: str, pos: int):
    layers = []
    while True:
        m = _ID_RE.match(text, pos)
        if m:
            return layers, m.end()
        m = _BASE_RE.match(text, pos)
        if m:
            env = int(m.group(1))
            if env < 1:
                raise StackSyntaxError(text, m.start(1), "cardinality must be >= 1")
            inner, pos = _parse_stack(text, m.end())
            close = re.compile(r"\s*\)").match(text, pos)
            if not close:
                raise StackSyntaxError(text, pos, "expected ')' closing ReaderBase")
            return layers + [LayerSpec("ReaderT", Enum(env), base=True)] + inner, close.end()
        m = _LAYER_RE.match(text, pos)
        if not m:
            raise StackSyntaxError(
                text, pos, "expected a layer (ExceptT(e=N), ReaderT(r=N), WriterT(M), StateT(s=N)), Id or ReaderBase"
            )
        g = m.groups()
        if g[0]:
            layer = LayerSpec("ExceptT", _size(text, m.start(2), g[1]))
        elif g[2]:
            layer = LayerSpec("ReaderT", _size(text, m.start(4), g[3]))
        elif g[4]:
            try:
                layer = LayerSpec("WriterT", finite.monoid(g[5]))
            except KeyError as exc:
                raise StackSyntaxError(text, m.start(6), str(exc.args[0])) from None
        else:
            layer = LayerSpec("StateT", _size(text, m.start(8), g[7]))
        layers.append(layer)
        pos = m.end()
        dot = re.compile(r"\s*\.").match(text, pos)
        if not dot:
            raise StackSyntaxError(text, pos, "expected '.' after layer")
        pos = dot.end()


def _size(text, pos, digits):
    n = int(digits)
    if n < 1:
        raise StackSyntaxError(text, pos, "cardinality must be >= 1")
    return Enum(n)


# ---------------------------------------------------------------- semantics


class Identity:
    owner = False

    def carrier(self, x: FinType) -> FinType:
        return x

    def unit(self, a):
        return a

    def bind(self, t, k):
        return k(t)

    def fmap(self, f, t):
        return f(t)

    def __getattr__(self, name):
        # effect operations that reached the base without meeting an owner
        if name.startswith("_"):
            raise AttributeError(name)
        raise EffectUnavailable(f"operation {name!r} has no owning layer in this stack")


class _Layer:
    def __init__(self, spec: LayerSpec, inner, owner: bool, mutant: Optional[str]):
        self.spec = spec
        self.inner = inner
        self.owner = owner
        self.mutant = mutant

    # Effect operations: own implementation at the owner, lifted elsewhere.

    def raise_(self, e):
        return self._own_raise(e) if self.owner else self.lift(self.inner.raise_(e))

    def reader(self, f):
        return self._own_reader(f) if self.owner else self.lift(self.inner.reader(f))

    def ask(self):
        return self._own_ask() if self.owner else self.lift(self.inner.ask())

    def writer(self, p):
        return self._own_writer(p) if self.owner else self.lift(self.inner.writer(p))

    def get(self):
        return self._own_get() if self.owner else self.lift(self.inner.get())

    def put(self, s):
        return self._own_put(s) if self.owner else self.lift(self.inner.put(s))

    def state(self, f):
        return self._own_state(f) if self.owner else self.lift(self.inner.state(f))

    def catch(self, h, t):
        return self._own_catch(h, t) if self.owner else self._lift_catch(h, t)

    def errmap(self, h, t):
        return self._own_errmap(h, t) if self.owner else self._lift_map("errmap", t, h)

    def local(self, h, t, src_env):
        return self._own_local(h, t, src_env) if self.owner else self._lift_map("local", t, h, src_env)

    def logmap(self, h, t):
        return self._own_logmap(h, t) if self.owner else self._lift_map("logmap", t, h)

    def listen(self, t):
        return self._own_listen(t) if self.owner else self._lift_listen(t)

    def pass_(self, t, idw):
        return self._own_pass(t) if self.owner else self._lift_pass(t, idw)

    def apply(self, t):
        return self._own_apply(t) if self.owner else self._lift_apply(t)

    def abstr(self, f):
        return self._own_abstr(f) if self.owner else self._lift_abstr(f)

    def __getattr__(self, name):
        if name.startswith("_own_"):
            raise EffectUnavailable(f"{self.spec.kind} does not own {name[5:]!r}")
        raise AttributeError(name)


class _CellLayer(_Layer):
    """ExceptT and WriterT: the outer carrier is the inner one at a bigger type,
    so computation-mapping operations pass straight through."""

    def _lift_catch(self, h, t):
        return self.inner.catch(h, t)

    def _lift_map(self, name, t, h, *extra):
        return getattr(self.inner, name)(h, t, *extra)

    def _lift_apply(self, t):
        return self.inner.apply(t)

    def _lift_abstr(self, f):
        return self.inner.abstr(f)


class _TableLayer(_Layer):
    """ReaderT and StateT: the outer carrier is a table; lift pointwise."""

    def _lift_catch(self, h, t):
        inner = self.inner
        return Table(
            [inner.catch(lambda e, i=i: h(e).entries[i], sub)
            for i, sub in enumerate(t.entries)]
        )

    def _lift_map(self, name, t, h, *extra):
        op = getattr(self.inner, name)
        return Table([op(h, sub, *extra) for sub in t.entries])

    def _lift_apply(self, t):
        inner = self.inner
        subs = [inner.apply(sub) for sub in t.entries]
        return lambda r: Table([s(r) for s in subs])

    def _lift_abstr(self, f):
        inner = self.inner
        return Table(
            [inner.abstr(lambda r, i=i: f(r).entries[i]) for i in range(self.size)]
        )


class ExceptTLayer(_CellLayer):
    def carrier(self, x):
        return self.inner.carrier(Sum(self.spec.param, x))

    def unit(self, a):
        return self.inner.unit(InR(a))

    def bind(self, t, k):
        inner_unit = self.inner.unit
        return self.inner.bind(t, lambda v: k(v.value) if type(v) is InR else inner_unit(v))

    def fmap(self, f, t):
        return self.inner.fmap(lambda v: InR(f(v.value)) if type(v) is InR else v, t)

    def lift(self, m):
        return self.inner.fmap(InR, m)

    def _own_raise(self, e):
        return self.inner.unit(InL(e))

    def _own_catch(self, h, t):
        if self.mutant == "catch-never":
            return t
        inner_unit = self.inner.unit
        return self.inner.bind(t, lambda v: h(v.value) if type(v) is InL else inner_unit(v))

    def _own_errmap(self, h, t):
        return self.inner.fmap(lambda v: InL(h(v.value)) if type(v) is InL else v, t)

    def _lift_listen(self, t):
        def redistribute(p):
            v = p.first
            return InR(Pair(v.value, p.second)) if type(v) is InR else v

        return self.inner.fmap(redistribute, self.inner.listen(t))

    def _lift_pass(self, t, idw):
        def split(v):
            if type(v) is InR:
                return Pair(InR(v.value.first), v.value.second)
            return Pair(v, idw)

        return self.inner.pass_(self.inner.fmap(split, t), idw)


class WriterTLayer(_CellLayer):
    def __init__(self, spec, inner, owner, mutant):
        super().__init__(spec, inner, owner, mutant)
        self.monoid: MonoidSpec = spec.param
        self.one = self.monoid.unit

    def carrier(self, x):
        return self.inner.carrier(Prod(x, self.monoid.carrier))

    def unit(self, a):
        return self.inner.unit(Pair(a, self.one))

    def bind(self, t, k):
        inner = self.inner
        mult = self.monoid.mult
        if self.mutant == "writer-bind-drop":
            return inner.bind(
                t, lambda p: inner.fmap(lambda q: Pair(q.first, p.second), k(p.first))
            )
        return inner.bind(
            t,
            lambda p: inner.fmap(lambda q: Pair(q.first, mult(p.second, q.second)), k(p.first)),
        )

    def fmap(self, f, t):
        return self.inner.fmap(lambda p: Pair(f(p.first), p.second), t)

    def lift(self, m):
        one = self.one
        return self.inner.fmap(lambda a: Pair(a, one), m)

    def _own_writer(self, p):
        return self.inner.unit(p)

    def _own_listen(self, t):
        return self.inner.fmap(lambda p: Pair(p, p.second), t)

    def _own_pass(self, t):
        return self.inner.fmap(
            lambda p: Pair(p.first.first, p.first.second.entries[p.second.index]), t
        )

    def _own_logmap(self, h, t):
        return self.inner.fmap(lambda p: Pair(p.first, h(p.second)), t)

    def _lift_listen(self, t):
        # inner cell ((a, w2), w) -> ((a, w), w2)
        return self.inner.fmap(
            lambda p: Pair(Pair(p.first.first, p.second), p.first.second),
            self.inner.listen(t),
        )

    def _lift_pass(self, t, idw):
        # ((a, f), w2) -> ((a, w2), f)
        return self.inner.pass_(
            self.inner.fmap(
                lambda p: Pair(Pair(p.first.first, p.second), p.first.second), t
            ),
            idw,
        )


class ReaderTLayer(_TableLayer):
    def __init__(self, spec, inner, owner, mutant):
        super().__init__(spec, inner, owner, mutant)
        self.env = spec.param
        self.size = self.env.cardinality
        self.envs = enumerate_values(self.env)

    def carrier(self, x):
        return Fn(self.env, self.inner.carrier(x))

    def unit(self, a):
        return Table((self.inner.unit(a),) * self.size)

    def bind(self, t, k):
        inner = self.inner
        return Table(
            [inner.bind(sub, lambda a, i=i: k(a).entries[i]) for i, sub in enumerate(t.entries)]
        )

    def fmap(self, f, t):
        inner = self.inner
        return Table([inner.fmap(f, sub) for sub in t.entries])

    def lift(self, m):
        return Table((m,) * self.size)

    def _own_reader(self, f):
        u = self.inner.unit
        return Table([u(f(r)) for r in self.envs])

    def _own_ask(self):
        u = self.inner.unit
        return Table([u(r) for r in self.envs])

    def _own_local(self, h, t, src_env):
        rank = indexer(src_env)
        entries = t.entries
        return Table([entries[rank(h(r))] for r in self.envs])

    def _own_apply(self, t):
        if not self.spec.base:
            raise EffectUnavailable("apply/abstr need a ReaderBase model")
        rank = indexer(self.env)
        entries = t.entries
        return lambda r: entries[rank(r)]

    def _own_abstr(self, f):
        if not self.spec.base:
            raise EffectUnavailable("apply/abstr need a ReaderBase model")
        return Table([f(r) for r in self.envs])

    def _lift_listen(self, t):
        return Table([self.inner.listen(sub) for sub in t.entries])

    def _lift_pass(self, t, idw):
        return Table([self.inner.pass_(sub, idw) for sub in t.entries])


class StateTLayer(_TableLayer):
    def __init__(self, spec, inner, owner, mutant):
        super().__init__(spec, inner, owner, mutant)
        self.stype = spec.param
        self.size = self.stype.cardinality
        self.states = enumerate_values(self.stype)
        self.rank = indexer(self.stype)

    def carrier(self, x):
        return Fn(self.stype, self.inner.carrier(Prod(x, self.stype)))

    def unit(self, a):
        u = self.inner.unit
        return Table([u(Pair(a, s)) for s in self.states])

    def bind(self, t, k):
        inner = self.inner
        rank = self.rank
        return Table(
            [inner.bind(sub, lambda p: k(p.first).entries[rank(p.second)]) for sub in t.entries]
        )

    def fmap(self, f, t):
        inner = self.inner
        return Table([inner.fmap(lambda p: Pair(f(p.first), p.second), sub) for sub in t.entries])

    def lift(self, m):
        fmap = self.inner.fmap
        return Table([fmap(lambda a, s=s: Pair(a, s), m) for s in self.states])

    def _own_get(self):
        u = self.inner.unit
        return Table([u(Pair(s, s)) for s in self.states])

    def _own_put(self, s0):
        u = self.inner.unit
        if self.mutant == "put-ignore":
            return Table([u(Pair(Star, s)) for s in self.states])
        return Table((u(Pair(Star, s0)),) * self.size)

    def _own_state(self, f):
        u = self.inner.unit
        return Table([u(f(s)) for s in self.states])

    def _lift_listen(self, t):
        inner = self.inner
        # ((a, s'), w) -> ((a, w), s')
        reshape = lambda p: Pair(Pair(p.first.first, p.second), p.first.second)
        return Table([inner.fmap(reshape, inner.listen(sub)) for sub in t.entries])

    def _lift_pass(self, t, idw):
        inner = self.inner
        # ((a, f), s') -> ((a, s'), f)
        reshape = lambda p: Pair(Pair(p.first.first, p.second), p.first.second)
        return Table([inner.pass_(inner.fmap(reshape, sub), idw) for sub in t.entries])


_LAYER_CLASSES = {
    "ExceptT": ExceptTLayer,
    "ReaderT": ReaderTLayer,
    "WriterT": WriterTLayer,
    "StateT": StateTLayer,
}


_MEMO_LIMIT = 1 << 14


def _memo(method):
    """Cache an operation whose only argument is a value (effect ops are pure)."""
    name = method.__name__

    def wrapper(self, a):
        cache = self._memo.get(name)
        if cache is None:
            cache = self._memo[name] = {}
        try:
            return cache[a]
        except KeyError:
            pass
        except TypeError:  # unhashable argument
            return method(self, a)
        out = method(self, a)
        if len(cache) < _MEMO_LIMIT:
            cache[a] = out
        return out

    wrapper.__name__ = name
    wrapper.__doc__ = method.__doc__
    return wrapper


class Stack:
    """The monad denoted by a StackSpec, with its designated effect's operations."""

    def __init__(self, spec: StackSpec, mutant: Optional[str] = None):
        if mutant is not None and mutant not in MUTANTS:
            raise ValueError(f"unknown mutant {mutant!r}; known: {', '.join(MUTANTS)}")
        self.spec = spec
        self.mutant = mutant
        owner = spec.designated[1] if spec.designated else None
        monad = Identity()
        for i in range(len(spec.layers) - 1, -1, -1):
            layer = spec.layers[i]
            monad = _LAYER_CLASSES[layer.kind](layer, monad, i == owner, mutant)
        self.top = monad
        self.effect = spec.effect
        if self.effect == "writer":
            m = spec.layers[owner].param
            self.monoid = m
            self._idw = Table([finite.elem(i) for i in range(m.size)])
        self._variants = {}
        self._memo = {}

    def __repr__(self):
        return f"Stack({self.spec.text()!r})"

    # -- monad

    def carrier(self, x: FinType) -> FinType:
        return self.top.carrier(x)

    @_memo
    def unit(self, a):
        return self.top.unit(a)

    def bind(self, k: Callable, t):
        return self.top.bind(t, k)

    def fmap(self, f: Callable, t):
        return self.top.fmap(f, t)

    def then(self, t, u):
        return self.top.bind(t, lambda _: u)

    def with_param(self, p: FinType) -> "Stack":
        spec = self.spec.with_param(p)
        if spec is self.spec:
            return self
        try:
            return self._variants[spec]
        except KeyError:
            stack = self._variants[spec] = Stack(spec, self.mutant)
            return stack

    @cached_property
    def plain(self) -> "Stack":
        """N, the monad of apply/abstr results for a ReaderBase model."""
        return Stack(self.spec.without_reader_base(), self.mutant)

    def _need(self, effect):
        if self.effect != effect:
            raise EffectUnavailable(
                f"no designated {effect} layer in {self.spec.text()}"
                + (f" (designated: {self.effect})" if self.effect else "")
            )

    # -- exceptions

    @_memo
    def raise_(self, e):
        self._need("exception")
        return self.top.raise_(e)

    def catch(self, h, t):
        self._need("exception")
        return self.top.catch(h, t)

    def errmap(self, h, t):
        self._need("exception")
        return self.top.errmap(h, t)

    @_memo
    def exc_rho(self, v):
        """raise on InL, unit on InR."""
        self._need("exception")
        return self.top.raise_(v.value) if type(v) is InL else self.top.unit(v.value)

    def handle(self, k, t):
        """Joint handle: bind k . catch rho . bimap (inr . inl) inr."""
        self._need("exception")
        top = self.top
        widened = top.errmap(lambda e: InR(InL(e)), top.fmap(InR, t))
        caught = top.catch(self.exc_rho, widened)
        return top.bind(caught, k)

    def exc_mixmap(self, g, t):
        return self.handle(lambda v: self.exc_rho(g(v)), t)

    @_memo
    def fusel(self, t):
        return self.exc_mixmap(lambda v: v.value if type(v) is InR else v, t)

    @_memo
    def fuser(self, t):
        return self.exc_mixmap(lambda v: v.value if type(v) is InL else v, t)

    # -- reader

    def reader(self, f):
        self._need("reader")
        return self.top.reader(f)

    def ask(self):
        self._need("reader")
        return self.top.ask()

    def local(self, h, t, src_env: FinType):
        """Run t (built over environment src_env) in environments h(r) for r in this stack's env."""
        self._need("reader")
        return self.top.local(h, t, src_env)

    def apply(self, t):
        self._need("reader")
        if self.spec.reader_base is None:
            raise EffectUnavailable("apply/abstr need a ReaderBase model")
        return self.top.apply(t)

    def abstr(self, f):
        self._need("reader")
        if self.spec.reader_base is None:
            raise EffectUnavailable("apply/abstr need a ReaderBase model")
        return self.top.abstr(f)

    # -- writer

    @_memo
    def writer(self, p):
        self._need("writer")
        return self.top.writer(p)

    @_memo
    def tell(self, w):
        return self.writer(Pair(Star, w))

    @_memo
    def listen(self, t):
        self._need("writer")
        return self.top.listen(t)

    def pass_(self, t):
        self._need("writer")
        return self.top.pass_(t, self._idw)

    def logmap(self, h, t):
        self._need("writer")
        return self.top.logmap(h, t)

    def wrt_mixmap(self, g, t):
        """pass . fmap (bimap id const . g) . listen"""
        self._need("writer")
        n = self.monoid.size

        def reshape(p):
            q = g(p)
            return Pair(q.first, Table((q.second,) * n))

        return self.pass_(self.fmap(reshape, self.listen(t)))

    @_memo
    def shift(self, t):
        one = self.monoid.unit
        return self.wrt_mixmap(lambda p: Pair(p, one), t)

    @_memo
    def fuse(self, t):
        mult = self.monoid.mult
        return self.wrt_mixmap(lambda q: Pair(q.first.first, mult(q.second, q.first.second)), t)

    def hdl(self, k, t):
        return self.top.bind(self.shift(t), k)

    def pbnd(self, k, p):
        return self.top.bind(self.writer(p), k)

    # -- state

    def get(self):
        self._need("state")
        return self.top.get()

    @_memo
    def put(self, s):
        self._need("state")
        return self.top.put(s)

    def state(self, f):
        self._need("state")
        return self.top.state(f)

    def modify(self, f):
        return self.state(lambda s: Pair(Star, f(s)))


def build(text_or_spec, effect: Optional[str] = None, index: Optional[int] = None,
          mutant: Optional[str] = None) -> Stack:
    spec = parse_stack(text_or_spec) if isinstance(text_or_spec, str) else text_or_spec
    if effect is not None:
        spec = spec.designate(effect, index)
    return Stack(spec, mutant)
