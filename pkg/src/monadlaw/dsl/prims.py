"""Primitive names of the law language: type schemes and runtime meanings.

Each primitive is registered per effect (``None`` = available on every
stack).  A scheme builds a fresh instance of the primitive's type and the
named type pieces it is built from; the implementation receives the model
and those pieces, fully resolved, and returns the runtime value.
"""
from __future__ import annotations

from typing import Callable, Dict, Optional

from ..finite import InL, InR, Pair, Star
from .types import TMeta, UNIT_T, f_t, fn, n_t, prod, sum_t

GENERIC = None

# name -> {effect: (scheme, impl)}
PRIMITIVES: Dict[str, Dict[Optional[str], tuple]] = {}


def prim(names, effects=(GENERIC,)):
    names = names.split() if isinstance(names, str) else names

    def deco(pair):
        for name in names:
            slot = PRIMITIVES.setdefault(name, {})
            for e in effects:
                slot[e] = pair
        return pair

    return deco


def _metas(*names):
    return {n: TMeta() for n in names}


def J(effect, p, a):
    """The underlying monad of an effect at parameter p."""
    if effect == "exception":
        return sum_t(p, a)
    if effect == "reader":
        return fn(p, a)
    if effect == "writer":
        return prod(a, p)
    return fn(p, prod(a, p))


def effects_of(name: str) -> tuple:
    slot = PRIMITIVES.get(name, {})
    return tuple(e for e in slot if e is not GENERIC)


def lookup(name: str, effect: Optional[str]):
    slot = PRIMITIVES.get(name)
    if slot is None:
        return None
    if effect in slot:
        return slot[effect]
    return slot.get(GENERIC)


# ------------------------------------------------------------ data combinators

def _identity(m, v):
    return lambda x: x


prim("id")((lambda ctx: _with(_metas("a"), lambda v: fn(v["a"], v["a"])), _identity))


def _with(v, build):
    return build(v), v


prim("const")((
    lambda ctx: _with(_metas("a", "b"), lambda v: fn(v["a"], v["b"], v["a"])),
    lambda m, v: lambda x: lambda _y: x,
))


def _fst(m, v):
    r = m.to_runtime(v["a"])
    return (lambda p: p.first) if r is None else (lambda p: r(p.first))


def _snd(m, v):
    r = m.to_runtime(v["b"])
    return (lambda p: p.second) if r is None else (lambda p: r(p.second))


prim("fst")((lambda ctx: _with(_metas("a", "b"), lambda v: fn(prod(v["a"], v["b"]), v["a"])), _fst))
prim("snd")((lambda ctx: _with(_metas("a", "b"), lambda v: fn(prod(v["a"], v["b"]), v["b"])), _snd))


def _inl(m, v):
    d = m.to_data(v["a"])
    return InL if d is None else (lambda x: InL(d(x)))


def _inr(m, v):
    d = m.to_data(v["b"])
    return InR if d is None else (lambda x: InR(d(x)))


prim("inl")((lambda ctx: _with(_metas("a", "b"), lambda v: fn(v["a"], sum_t(v["a"], v["b"]))), _inl))
prim("inr")((lambda ctx: _with(_metas("a", "b"), lambda v: fn(v["b"], sum_t(v["a"], v["b"]))), _inr))


def _either(m, v):
    ra, rb = m.to_runtime(v["a"]), m.to_runtime(v["b"])
    ra = ra or (lambda x: x)
    rb = rb or (lambda x: x)
    return lambda f: lambda g: lambda s: f(ra(s.value)) if type(s) is InL else g(rb(s.value))


prim("either")((
    lambda ctx: _with(
        _metas("a", "b", "c"),
        lambda v: fn(fn(v["a"], v["c"]), fn(v["b"], v["c"]), sum_t(v["a"], v["b"]), v["c"]),
    ),
    _either,
))


def _data(m, t):
    return m.to_data(t) or (lambda x: x)


def _rt(m, t):
    return m.to_runtime(t) or (lambda x: x)


def _split(m, v):
    da, db = _data(m, v["a"]), _data(m, v["b"])
    return lambda f: lambda g: lambda x: Pair(da(f(x)), db(g(x)))


prim("split")((
    lambda ctx: _with(
        _metas("a", "b", "c"),
        lambda v: fn(fn(v["c"], v["a"]), fn(v["c"], v["b"]), v["c"], prod(v["a"], v["b"])),
    ),
    _split,
))


def _cross(m, v):
    ra, rb = _rt(m, v["a"]), _rt(m, v["b"])
    dc, dd = _data(m, v["c"]), _data(m, v["d"])
    return lambda f: lambda g: lambda p: Pair(dc(f(ra(p.first))), dd(g(rb(p.second))))


prim("cross")((
    lambda ctx: _with(
        _metas("a", "b", "c", "d"),
        lambda v: fn(
            fn(v["a"], v["c"]), fn(v["b"], v["d"]), prod(v["a"], v["b"]), prod(v["c"], v["d"])
        ),
    ),
    _cross,
))


def _plus(m, v):
    ra, rb = _rt(m, v["a"]), _rt(m, v["b"])
    dc, dd = _data(m, v["c"]), _data(m, v["d"])
    return lambda f: lambda g: lambda s: (
        InL(dc(f(ra(s.value)))) if type(s) is InL else InR(dd(g(rb(s.value))))
    )


prim("plus")((
    lambda ctx: _with(
        _metas("a", "b", "c", "d"),
        lambda v: fn(
            fn(v["a"], v["c"]), fn(v["b"], v["d"]), sum_t(v["a"], v["b"]), sum_t(v["c"], v["d"])
        ),
    ),
    _plus,
))


# ------------------------------------------------------------ monad


def _unit(m, v):
    s = m.stack_at(v["p"])
    d = m.to_data(v["a"])
    return s.unit if d is None else (lambda x: s.unit(d(x)))


prim("unit return")((
    lambda ctx: _with(_metas("a", "p"), lambda v: fn(v["a"], f_t(v["p"], v["a"]))),
    _unit,
))


def _bind(m, v):
    s = m.stack_at(v["p"])
    adapt = m.adapter(v["a"], f_t(v["p"], v["b"]))

    def bind(k):
        kk = adapt(k)
        return lambda t: s.bind(kk, t)

    return bind


prim("bind")((
    lambda ctx: _with(
        _metas("a", "b", "p"),
        lambda v: fn(fn(v["a"], f_t(v["p"], v["b"])), f_t(v["p"], v["a"]), f_t(v["p"], v["b"])),
    ),
    _bind,
))


def _fmap(m, v):
    s = m.stack_at(v["p"])

    adapt = m.adapter(v["a"], v["b"])

    def fmap(f):
        ff = adapt(f)
        return lambda t: s.fmap(ff, t)

    return fmap


prim("fmap")((
    lambda ctx: _with(
        _metas("a", "b", "p"),
        lambda v: fn(fn(v["a"], v["b"]), f_t(v["p"], v["a"]), f_t(v["p"], v["b"])),
    ),
    _fmap,
))


# ------------------------------------------------------------ underlying monad J

def _j_scheme(kind):
    def scheme(ctx):
        e = ctx.effect
        fixed = e in ("writer", "state")
        v = _metas("a", "b") if fixed else _metas("a", "b", "p")
        if fixed:
            v["p"] = ctx.param
        p = v["p"]
        ja, jb = J(e, p, v["a"]), J(e, p, v["b"])
        if kind == "eta":
            return fn(v["a"], ja), v
        if kind == "mu":
            return fn(J(e, p, ja), ja), v
        if kind == "jmap":
            return fn(fn(v["a"], v["b"]), ja, jb), v
        return fn(fn(v["a"], jb), ja, jb), v

    return scheme


def _j_impl(kind):
    def impl(m, v):
        e = m.effect
        a, b = v["a"], v["b"]
        da, db, ra = _data(m, a), _data(m, b), _rt(m, a)
        if e == "exception":
            if kind == "eta":
                return lambda x: InR(da(x))
            if kind == "mu":
                return lambda s: s.value if type(s) is InR else s
            if kind == "jmap":
                return lambda f: lambda s: InR(db(f(ra(s.value)))) if type(s) is InR else s
            return lambda f: lambda s: f(ra(s.value)) if type(s) is InR else s
        if e == "reader":
            if kind == "eta":
                return lambda x: lambda _r: x
            if kind == "mu":
                return lambda g: lambda r: g(r)(r)
            if kind == "jmap":
                return lambda f: lambda g: lambda r: f(g(r))
            return lambda f: lambda g: lambda r: f(g(r))(r)
        if e == "writer":
            mon = m.stack.monoid
            one, mult = mon.unit, mon.mult
            if kind == "eta":
                return lambda x: Pair(da(x), one)
            if kind == "mu":
                return lambda q: Pair(q.first.first, mult(q.second, q.first.second))
            if kind == "jmap":
                return lambda f: lambda p: Pair(db(f(ra(p.first))), p.second)

            def jbind(f):
                def go(p):
                    q = f(ra(p.first))
                    return Pair(q.first, mult(p.second, q.second))
                return go

            return jbind
        # state
        if kind == "eta":
            return lambda x: (lambda dx: lambda st: Pair(dx, st))(da(x))
        if kind == "mu":
            rja = _rt(m, J(e, v["p"], a))

            def mu(g):
                def go(st):
                    p = g(st)
                    return rja(p.first)(p.second)
                return go

            return mu
        if kind == "jmap":
            def jmap(f):
                def lift(g):
                    def go(st):
                        p = g(st)
                        return Pair(db(f(ra(p.first))), p.second)
                    return go
                return lift
            return jmap

        def jbind(f):
            def lift(g):
                def go(st):
                    p = g(st)
                    return f(ra(p.first))(p.second)
                return go
            return lift

        return jbind

    return impl


for _kind in ("eta", "mu", "jmap", "jbind"):
    prim(_kind, ("exception", "reader", "writer", "state"))((_j_scheme(_kind), _j_impl(_kind)))


# ------------------------------------------------------------ exceptions

EXC = ("exception",)


def _raise(m, v):
    s = m.stack_at(v["p"])
    d = _data(m, v["p"])
    return lambda e: s.raise_(d(e))


prim("raise", EXC)((
    lambda ctx: _with(_metas("a", "p"), lambda v: fn(v["p"], f_t(v["p"], v["a"]))),
    _raise,
))


def _catch(m, v):
    s = m.stack_at(v["q"])

    def catch(h):
        hh = m.adapt(h, v["p"], f_t(v["q"], v["a"]))
        return lambda t: s.catch(hh, t)

    return catch


prim("catch", EXC)((
    lambda ctx: _with(
        _metas("a", "p", "q"),
        lambda v: fn(fn(v["p"], f_t(v["q"], v["a"])), f_t(v["p"], v["a"]), f_t(v["q"], v["a"])),
    ),
    _catch,
))


def _errmap(m, v):
    s = m.stack_at(v["q"])

    def errmap(h):
        hh = m.adapt(h, v["p"], v["q"])
        return lambda t: s.errmap(hh, t)

    return errmap


prim("errmap", EXC)((
    lambda ctx: _with(
        _metas("a", "p", "q"),
        lambda v: fn(fn(v["p"], v["q"]), f_t(v["p"], v["a"]), f_t(v["q"], v["a"])),
    ),
    _errmap,
))


def _exc_bimap(m, v):
    s = m.stack_at(v["q"])

    def bimap(h):
        hh = m.adapt(h, v["p"], v["q"])

        def with_f(f):
            ff = m.adapt(f, v["a"], v["b"])
            return lambda t: s.errmap(hh, s.fmap(ff, t))

        return with_f

    return bimap


prim("bimap", EXC)((
    lambda ctx: _with(
        _metas("a", "b", "p", "q"),
        lambda v: fn(
            fn(v["p"], v["q"]), fn(v["a"], v["b"]), f_t(v["p"], v["a"]), f_t(v["q"], v["b"])
        ),
    ),
    _exc_bimap,
))


prim("rho", EXC)((
    lambda ctx: _with(
        _metas("a", "p"), lambda v: fn(sum_t(v["p"], v["a"]), f_t(v["p"], v["a"]))
    ),
    lambda m, v: m.stack_at(v["p"]).exc_rho,
))


def _exc_handle(m, v):
    s = m.stack_at(v["q"])

    def handle(k):
        kk = m.adapt(k, sum_t(v["p"], v["a"]), f_t(v["q"], v["b"]))
        return lambda t: s.handle(kk, t)

    return handle


prim("handle hdl", EXC)((
    lambda ctx: _with(
        _metas("a", "b", "p", "q"),
        lambda v: fn(
            fn(sum_t(v["p"], v["a"]), f_t(v["q"], v["b"])),
            f_t(v["p"], v["a"]),
            f_t(v["q"], v["b"]),
        ),
    ),
    _exc_handle,
))


def _exc_mixmap(m, v):
    s = m.stack_at(v["q"])

    def mixmap(g):
        gg = m.adapt(g, sum_t(v["p"], v["a"]), sum_t(v["q"], v["b"]))
        return lambda t: s.exc_mixmap(gg, t)

    return mixmap


prim("mixmap", EXC)((
    lambda ctx: _with(
        _metas("a", "b", "p", "q"),
        lambda v: fn(
            fn(sum_t(v["p"], v["a"]), sum_t(v["q"], v["b"])),
            f_t(v["p"], v["a"]),
            f_t(v["q"], v["b"]),
        ),
    ),
    _exc_mixmap,
))

prim("fusel", EXC)((
    lambda ctx: _with(
        _metas("a", "p"),
        lambda v: fn(f_t(v["p"], sum_t(v["p"], v["a"])), f_t(v["p"], v["a"])),
    ),
    lambda m, v: m.stack_at(v["p"]).fusel,
))

prim("fuser", EXC)((
    lambda ctx: _with(
        _metas("a", "p"),
        lambda v: fn(f_t(sum_t(v["p"], v["a"]), v["a"]), f_t(v["p"], v["a"])),
    ),
    lambda m, v: m.stack_at(v["p"]).fuser,
))


# ------------------------------------------------------------ reader

RDR = ("reader",)


def _reader(m, v):
    s = m.stack_at(v["p"])
    return lambda f: s.reader(m.adapt(f, v["p"], v["a"]))


prim("rho reader", RDR)((
    lambda ctx: _with(_metas("a", "p"), lambda v: fn(fn(v["p"], v["a"]), f_t(v["p"], v["a"]))),
    _reader,
))


prim("ask", RDR)((
    lambda ctx: _with(_metas("p"), lambda v: f_t(v["p"], v["p"])),
    lambda m, v: m.stack_at(v["p"]).ask(),
))


def _local(m, v):
    s = m.stack_at(v["q"])
    src = m.realize(v["p"])

    def local(h):
        hh = m.adapt(h, v["q"], v["p"])
        return lambda t: s.local(hh, t, src)

    return local


prim("local", RDR)((
    lambda ctx: _with(
        _metas("a", "p", "q"),
        lambda v: fn(fn(v["q"], v["p"]), f_t(v["p"], v["a"]), f_t(v["q"], v["a"])),
    ),
    _local,
))


def _rdr_bimap(m, v):
    sq = m.stack_at(v["q"])
    sp = m.stack_at(v["p"])
    src = m.realize(v["p"])

    def bimap(h):
        hh = m.adapt(h, v["q"], v["p"])

        def with_f(f):
            ff = m.adapt(f, v["a"], v["b"])
            return lambda t: sq.local(hh, sp.fmap(ff, t), src)

        return with_f

    return bimap


prim("bimap", RDR)((
    lambda ctx: _with(
        _metas("a", "b", "p", "q"),
        lambda v: fn(
            fn(v["q"], v["p"]), fn(v["a"], v["b"]), f_t(v["p"], v["a"]), f_t(v["q"], v["b"])
        ),
    ),
    _rdr_bimap,
))


def _apply(m, v):
    s = m.stack_at(v["p"])
    d = m.to_data(v["p"])
    if d is None:
        return s.apply
    return lambda t: (lambda g: lambda r: g(d(r)))(s.apply(t))


prim("apply", RDR)((
    lambda ctx: _with(
        _metas("a", "p"), lambda v: fn(f_t(v["p"], v["a"]), v["p"], n_t(v["a"]))
    ),
    _apply,
))


def _abstr(m, v):
    s = m.stack_at(v["p"])
    return lambda f: s.abstr(m.adapt(f, v["p"], n_t(v["a"])))


prim("abstr", RDR)((
    lambda ctx: _with(
        _metas("a", "p"), lambda v: fn(fn(v["p"], n_t(v["a"])), f_t(v["p"], v["a"]))
    ),
    _abstr,
))


def _nunit(m, v):
    s = m.stack.plain
    d = _data(m, v["a"])
    return lambda x: s.unit(d(x))


def _nbind(m, v):
    s = m.stack.plain

    def bind(k):
        kk = m.adapt(k, v["a"], n_t(v["b"]))
        return lambda t: s.bind(kk, t)

    return bind


def _nfmap(m, v):
    s = m.stack.plain

    adapt = m.adapter(v["a"], v["b"])

    def fmap(f):
        ff = adapt(f)
        return lambda t: s.fmap(ff, t)

    return fmap


prim("nunit", RDR)((lambda ctx: _with(_metas("a"), lambda v: fn(v["a"], n_t(v["a"]))), _nunit))
prim("nbind", RDR)((
    lambda ctx: _with(
        _metas("a", "b"), lambda v: fn(fn(v["a"], n_t(v["b"])), n_t(v["a"]), n_t(v["b"]))
    ),
    _nbind,
))
prim("nfmap", RDR)((
    lambda ctx: _with(
        _metas("a", "b"), lambda v: fn(fn(v["a"], v["b"]), n_t(v["a"]), n_t(v["b"]))
    ),
    _nfmap,
))


# ------------------------------------------------------------ writer

WRT = ("writer",)


def _fixed(ctx, *names):
    v = _metas(*names)
    v["p"] = ctx.param
    return v


def _w(scheme):
    return lambda ctx: (lambda v: (scheme(v), v))(_fixed(ctx, "a", "b"))


prim("rho writer writerEmbed", WRT)((
    _w(lambda v: fn(prod(v["a"], v["p"]), f_t(v["p"], v["a"]))),
    lambda m, v: m.stack.writer,
))
prim("tell", WRT)((
    _w(lambda v: fn(v["p"], f_t(v["p"], UNIT_T))),
    lambda m, v: m.stack.tell,
))
prim("listen", WRT)((
    _w(lambda v: fn(f_t(v["p"], v["a"]), f_t(v["p"], prod(v["a"], v["p"])))),
    lambda m, v: m.stack.listen,
))
prim("pass", WRT)((
    _w(lambda v: fn(f_t(v["p"], prod(v["a"], fn(v["p"], v["p"]))), f_t(v["p"], v["a"]))),
    lambda m, v: m.stack.pass_,
))
prim("shift", WRT)((
    _w(lambda v: fn(f_t(v["p"], v["a"]), f_t(v["p"], prod(v["a"], v["p"])))),
    lambda m, v: m.stack.shift,
))
prim("fuse", WRT)((
    _w(lambda v: fn(f_t(v["p"], prod(v["a"], v["p"])), f_t(v["p"], v["a"]))),
    lambda m, v: m.stack.fuse,
))


def _wrt_mixmap(m, v):
    s, w = m.stack, v["p"]

    adapt = m.adapter(prod(v["a"], w), prod(v["b"], w))

    def mixmap(g):
        gg = adapt(g)
        return lambda t: s.wrt_mixmap(gg, t)

    return mixmap


prim("mixmap", WRT)((
    _w(lambda v: fn(
        fn(prod(v["a"], v["p"]), prod(v["b"], v["p"])), f_t(v["p"], v["a"]), f_t(v["p"], v["b"])
    )),
    _wrt_mixmap,
))


def _wrt_hdl(m, v):
    s, w = m.stack, v["p"]

    adapt = m.adapter(prod(v["a"], w), f_t(w, v["b"]))

    def hdl(k):
        kk = adapt(k)
        return lambda t: s.hdl(kk, t)

    return hdl


prim("hdl handle", WRT)((
    _w(lambda v: fn(
        fn(prod(v["a"], v["p"]), f_t(v["p"], v["b"])), f_t(v["p"], v["a"]), f_t(v["p"], v["b"])
    )),
    _wrt_hdl,
))


def _pbnd(m, v):
    s, w = m.stack, v["p"]

    adapt = m.adapter(v["a"], f_t(w, v["b"]))

    def pbnd(k):
        kk = adapt(k)
        return lambda p: s.pbnd(kk, p)

    return pbnd


prim("pbnd", WRT)((
    _w(lambda v: fn(
        fn(v["a"], f_t(v["p"], v["b"])), prod(v["a"], v["p"]), f_t(v["p"], v["b"])
    )),
    _pbnd,
))


def _logmap(m, v):
    s, w = m.stack, v["p"]

    adapt = m.adapter(w, w)

    def logmap(h):
        hh = adapt(h)
        return lambda t: s.logmap(hh, t)

    return logmap


prim("logmap", WRT)((
    _w(lambda v: fn(fn(v["p"], v["p"]), f_t(v["p"], v["a"]), f_t(v["p"], v["a"]))),
    _logmap,
))


def _wrt_bimap(m, v):
    s, w = m.stack, v["p"]

    def bimap(h):
        hh = m.adapt(h, w, w)

        def with_f(f):
            ff = m.adapt(f, v["a"], v["b"])
            return lambda t: s.logmap(hh, s.fmap(ff, t))

        return with_f

    return bimap


prim("bimap", WRT)((
    _w(lambda v: fn(
        fn(v["p"], v["p"]), fn(v["a"], v["b"]), f_t(v["p"], v["a"]), f_t(v["p"], v["b"])
    )),
    _wrt_bimap,
))
prim("one", WRT)((_w(lambda v: v["p"]), lambda m, v: m.stack.monoid.unit))


def _mult(m, v):
    mult = m.stack.monoid.mult
    return lambda a: lambda b: mult(a, b)


prim("mult", WRT)((_w(lambda v: fn(v["p"], v["p"], v["p"])), _mult))


# ------------------------------------------------------------ state

STT = ("state",)

prim("get", STT)((_w(lambda v: f_t(v["p"], v["p"])), lambda m, v: m.stack.get()))
prim("put", STT)((_w(lambda v: fn(v["p"], f_t(v["p"], UNIT_T))), lambda m, v: m.stack.put))


def _state(m, v):
    s = m.stack
    return lambda f: s.state(m.adapt(f, v["p"], prod(v["a"], v["p"])))


prim("state rho", STT)((
    _w(lambda v: fn(fn(v["p"], prod(v["a"], v["p"])), f_t(v["p"], v["a"]))),
    _state,
))


def _modify(m, v):
    s = m.stack
    return lambda f: s.modify(m.adapt(f, v["p"], v["p"]))


prim("modify", STT)((_w(lambda v: fn(fn(v["p"], v["p"]), f_t(v["p"], UNIT_T))), _modify))


def describe() -> str:
    """One line per primitive: name and the effects providing it."""
    lines = []
    for name in sorted(PRIMITIVES):
        effects = [e or "any" for e in PRIMITIVES[name]]
        lines.append(f"{name}: {', '.join(effects)}")
    return "\n".join(lines)
