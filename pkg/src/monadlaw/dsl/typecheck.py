"""Type inference for law expressions and compilation to closures."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .. import finite
from ..finite import DomainTooLarge, Pair, Star, monoid_endomorphisms
from ..stack import EffectUnavailable, Stack, build
from . import prims
from .model import EFFECT_TYPE_NAMES, Model
from .syntax import (
    Annot,
    App,
    BindE,
    Compose,
    Lam,
    LawExpr,
    PairE,
    StarE,
    ThenE,
    TyApp,
    TyName,
    Var,
    print_expr,
    print_type,
)
from .types import (
    LawTypeError,
    TCon,
    TMeta,
    Ty,
    UNIT_T,
    f_param_metas,
    f_t,
    fn,
    metas,
    n_t,
    prod,
    prune,
    show,
    unify,
    zonk,
)


class LawCheckError(LawTypeError):
    """A law that cannot be typed, or cannot be bound to the given stack."""


# ---------------------------------------------------------------- typed tree


class _Node:
    __slots__ = ("kind", "ty", "kids", "info", "src")

    def __init__(self, kind, ty, kids=(), info=None, src=None):
        self.kind = kind
        self.ty = ty
        self.kids = kids
        self.info = info
        self.src = src

    def walk(self):
        yield self
        for k in self.kids:
            yield from k.walk()


@dataclass
class Binder:
    name: str
    ty: Ty
    fintype: finite.FinType
    size: int
    endo: bool = False
    domain: Optional[tuple] = None  # explicit domain (monoid endomorphisms)

    def value(self, i: int):
        if self.domain is not None:
            return self.domain[i]
        return finite.value_at(self.fintype, i)

    def index(self, v) -> int:
        if self.domain is not None:
            return self.domain.index(v)
        return finite.index_of(self.fintype, v)


@dataclass
class TypedLaw:
    law: LawExpr
    model: Model
    binders: list
    law_ty: Ty
    ambient: Optional[Binder]  # argument of a function-typed law
    result_ty: Ty
    lhs: Callable = field(repr=False)
    rhs: Callable = field(repr=False)

    @property
    def stack(self) -> Stack:
        return self.model.stack

    @property
    def name(self) -> str:
        return self.law.name

    @property
    def axes(self) -> list:
        """Quantified positions in canonical order: binders, then the input."""
        return self.binders + ([self.ambient] if self.ambient is not None else [])

    def instance_count(self) -> int:
        n = 1
        for b in self.axes:
            n *= b.size
        return n

    # -- evaluation

    def runtime_env(self, binder_values) -> tuple:
        m = self.model
        return tuple(m.runtime(b.ty, v) for b, v in zip(self.binders, binder_values))

    def side_fn(self, side: str, env: tuple):
        code = self.lhs if side == "lhs" else self.rhs
        return code(env)

    def eval_at(self, side: str, env: tuple, arg=None):
        """Value of one side under a runtime env, at an input if the law is a function."""
        f = self.side_fn(side, env)
        m = self.model
        if self.ambient is None:
            return m.data(self.law_ty, f)
        return m.data(self.result_ty, f(m.runtime(self.ambient.ty, arg)))


def eval_side(t: TypedLaw, side: str, env) -> finite.Value:
    """Evaluate lhs or rhs under a binder valuation (dict or sequence of Values).

    Function-valued sides are materialised as tables over their domain.
    """
    if side not in ("lhs", "rhs"):
        raise ValueError("side must be 'lhs' or 'rhs'")
    if isinstance(env, dict):
        missing = [b.name for b in t.binders if b.name not in env]
        if missing:
            raise KeyError(f"no value for binder(s) {', '.join(missing)}")
        values = [env[b.name] for b in t.binders]
    else:
        values = list(env)
        if len(values) != len(t.binders):
            raise ValueError(f"expected {len(t.binders)} binder values, got {len(values)}")
    for b, v in zip(t.binders, values):
        if not finite.check_value(v, b.fintype):
            raise finite.ValueTypeError(f"{finite.render(v)} is not a value of {b.fintype}")
    renv = t.runtime_env(values)
    return t.model.data(t.law_ty, t.side_fn(side, renv))


# ---------------------------------------------------------------- inference


class _Infer:
    def __init__(self, model: Model):
        self.model = model

    def resolve(self, t) -> Ty:
        if isinstance(t, TyName):
            return self.model.named(t.name)
        con, args = t.con, t.args
        m = self.model
        if con in ("Sum", "Prod", "Fn"):
            return TCon(con, tuple(self.resolve(a) for a in args))
        if con == "M":
            return f_t(m.param, self.resolve(args[0]))
        if con == "F":
            return f_t(self.resolve(args[0]), self.resolve(args[1]))
        if con == "N":
            return n_t(self.resolve(args[0]))
        if con == "End":
            a = self.resolve(args[0])
            return fn(a, a)
        if con == "J":
            if m.effect is None:
                raise LawCheckError("type J needs a designated effect")
            if len(args) == 2:
                p, a = self.resolve(args[0]), self.resolve(args[1])
                if m.effect in ("writer", "state") and p != m.param:
                    raise LawCheckError(f"the {m.effect} parameter is fixed at {show(m.param)}")
            else:
                p, a = m.param, self.resolve(args[0])
            return prims.J(m.effect, p, a)
        raise LawCheckError(f"unknown type constructor {con}")

    def _unify(self, a, b, e):
        try:
            unify(a, b)
        except LawTypeError as exc:
            raise LawCheckError(f"type error in `{print_expr(e)}`: {exc}") from None

    def infer(self, e, scope: list) -> _Node:
        if isinstance(e, Var):
            for depth in range(len(scope) - 1, -1, -1):
                name, ty = scope[depth]
                if name == e.name:
                    return _Node("var", ty, info=depth, src=e)
            return self.primitive(e)
        if isinstance(e, StarE):
            return _Node("star", UNIT_T, src=e)
        if isinstance(e, Lam):
            pt = self.resolve(e.ptype) if e.ptype is not None else TMeta()
            body = self.infer(e.body, scope + [(e.param, pt)])
            return _Node("lam", fn(pt, body.ty), (body,), info=pt, src=e)
        if isinstance(e, App):
            f = self.infer(e.fn, scope)
            a = self.infer(e.arg, scope)
            r = TMeta()
            self._unify(f.ty, fn(a.ty, r), e)
            return _Node("app", r, (f, a), src=e)
        if isinstance(e, Compose):
            l = self.infer(e.left, scope)
            r = self.infer(e.right, scope)
            a, b, c = TMeta(), TMeta(), TMeta()
            self._unify(r.ty, fn(a, b), e)
            self._unify(l.ty, fn(b, c), e)
            return _Node("compose", fn(a, c), (l, r), info=a, src=e)
        if isinstance(e, (BindE, ThenE)):
            m = self.infer(e.m, scope)
            k = self.infer(e.k if isinstance(e, BindE) else e.n, scope)
            p, a, b = TMeta(), TMeta(), TMeta()
            self._unify(m.ty, f_t(p, a), e)
            if isinstance(e, BindE):
                self._unify(k.ty, fn(a, f_t(p, b)), e)
                return _Node("bind", f_t(p, b), (m, k), info=(p, a, b), src=e)
            self._unify(k.ty, f_t(p, b), e)
            return _Node("then", f_t(p, b), (m, k), info=(p, a, b), src=e)
        if isinstance(e, PairE):
            a = self.infer(e.first, scope)
            b = self.infer(e.second, scope)
            return _Node("pair", prod(a.ty, b.ty), (a, b), src=e)
        if isinstance(e, Annot):
            inner = self.infer(e.expr, scope)
            self._unify(inner.ty, self.resolve(e.type), e)
            return inner
        raise LawCheckError(f"not an expression: {e!r}")

    def primitive(self, e: Var) -> _Node:
        m = self.model
        entry = prims.lookup(e.name, m.effect)
        if entry is None:
            if e.name in prims.PRIMITIVES:
                raise LawCheckError(
                    f"primitive {e.name} unavailable on {m.stack.spec.text()}"
                    + (f" (designated effect: {m.effect})" if m.effect else " (no designated effect)")
                )
            raise LawCheckError(f"unbound variable `{e.name}`")
        scheme, impl = entry
        ty, pieces = scheme(m)
        return _Node("prim", ty, info=(e.name, impl, pieces), src=e)


def free_names(law: LawExpr) -> list:
    """Names a law uses without binding them, in order of first use."""
    names = []

    def free(e, bound):
        if isinstance(e, Var):
            if e.name not in bound and e.name not in names:
                names.append(e.name)
        elif isinstance(e, Lam):
            free(e.body, bound | {e.param})
        elif isinstance(e, App):
            free(e.fn, bound)
            free(e.arg, bound)
        elif isinstance(e, Compose):
            free(e.left, bound)
            free(e.right, bound)
        elif isinstance(e, BindE):
            free(e.m, bound)
            free(e.k, bound)
        elif isinstance(e, ThenE):
            free(e.m, bound)
            free(e.n, bound)
        elif isinstance(e, PairE):
            free(e.first, bound)
            free(e.second, bound)
        elif isinstance(e, Annot):
            free(e.expr, bound)

    bound = {b for b, _ in law.binders}
    free(law.lhs, bound)
    free(law.rhs, bound)
    return names


def _type_names(law: LawExpr) -> set:
    out = set()

    def walk(t):
        if isinstance(t, TyName):
            out.add(t.name)
        else:
            for a in t.args:
                walk(a)

    for _, t in law.binders:
        walk(t)
    return out


def infer_effect(law: LawExpr) -> Optional[str]:
    """The effect whose primitives a law uses, if it is determined."""
    candidates = None
    for n in free_names(law):
        slot = prims.PRIMITIVES.get(n)
        if slot is None or prims.GENERIC in slot:
            continue
        effs = set(prims.effects_of(n))
        candidates = effs if candidates is None else candidates & effs
    used = _type_names(law)
    for n, eff in EFFECT_TYPE_NAMES.items():
        if n in used and n not in dict(law.types):
            candidates = {eff} if candidates is None else candidates & {eff}
    if not candidates:
        return None
    return sorted(candidates)[0]


# ---------------------------------------------------------------- compile


def _compile(node: _Node, model: Model) -> Callable:
    k = node.kind
    if k == "var":
        i = node.info
        return lambda env: env[i]
    if k == "star":
        return lambda env: Star
    if k == "prim":
        name, impl, pieces = node.info
        try:
            # pieces that do not occur in the type are irrelevant; pin them to Unit
            resolved = {n: zonk(t) for n, t in pieces.items()}
            resolved = {n: (UNIT_T if metas(t) else t) for n, t in resolved.items()}
            value = impl(model, resolved)
        except EffectUnavailable as exc:
            raise LawCheckError(f"primitive {name} unavailable: {exc}") from None
        return lambda env: value
    if k == "lam":
        body = _compile(node.kids[0], model)
        return lambda env: lambda x: body(env + (x,))
    if k == "app":
        f = _compile(node.kids[0], model)
        a = _compile(node.kids[1], model)
        return lambda env: f(env)(a(env))
    if k == "compose":
        l = _compile(node.kids[0], model)
        r = _compile(node.kids[1], model)

        def compose(env):
            lf, rf = l(env), r(env)
            return lambda x: lf(rf(x))

        return compose
    if k in ("bind", "then"):
        p, a, b = (zonk(t) for t in node.info)
        stack = model.stack_at(p)
        mc = _compile(node.kids[0], model)
        kc = _compile(node.kids[1], model)
        if k == "then":
            return lambda env: stack.then(mc(env), kc(env))
        adapt = model.adapter(a, f_t(p, b))
        return lambda env: stack.bind(adapt(kc(env)), mc(env))
    if k == "pair":
        a, b = node.kids
        da = model.to_data(zonk(a.ty)) or (lambda x: x)
        db = model.to_data(zonk(b.ty)) or (lambda x: x)
        ac, bc = _compile(a, model), _compile(b, model)
        return lambda env: Pair(da(ac(env)), db(bc(env)))
    raise LawCheckError(f"cannot compile node {k}")


# ---------------------------------------------------------------- entry point


def bind_stack(law: LawExpr, stack, effect: Optional[str] = None, mutant=None) -> Stack:
    """Build the stack a law runs on, designating the effect its primitives need."""
    effect = effect or infer_effect(law)
    if isinstance(stack, Stack):
        if effect is None or stack.effect == effect:
            return stack
        spec = stack.spec
        mutant = mutant or stack.mutant
    else:
        spec = stack
    try:
        return build(spec, effect=effect, mutant=mutant)
    except EffectUnavailable as exc:
        needy = [n for n in free_names(law) if effect in prims.effects_of(n)
                 and prims.GENERIC not in prims.PRIMITIVES[n]]
        what = f"primitive {needy[0]} unavailable" if needy else f"law {law.name} needs a {effect} layer"
        raise LawCheckError(f"{what}: {exc}") from None


def typecheck_law(law: LawExpr, stack, types: Optional[dict] = None,
                  effect: Optional[str] = None, mutant: Optional[str] = None) -> TypedLaw:
    """Type a law against a stack (text, StackSpec or Stack).

    ``types`` maps type variables to cardinalities; the law's own ``@types``
    entries are used where ``types`` says nothing.
    """
    st = bind_stack(law, stack, effect, mutant)
    assignment = dict(law.types)
    assignment.update(types or {})
    for k in types or {}:
        if k in EFFECT_TYPE_NAMES:
            raise LawCheckError(f"{k} is fixed by the stack; change the stack instead of --type {k}")
    for k, v in assignment.items():
        if v < 1:
            raise LawCheckError(f"cardinality of {k} must be >= 1")
    model = Model(st, assignment)
    inf = _Infer(model)

    scope = []
    binders_raw = []
    try:
        for name, tast in law.binders:
            endo = isinstance(tast, TyApp) and tast.con == "End"
            ty = inf.resolve(tast)
            binders_raw.append((name, ty, endo, tast))
            scope.append((name, ty))
        lhs = inf.infer(law.lhs, scope)
        rhs = inf.infer(law.rhs, scope)
    except LawTypeError as exc:
        raise LawCheckError(f"law {law.name}: {exc}") from None
    try:
        unify(lhs.ty, rhs.ty)
    except LawTypeError as exc:
        raise LawCheckError(
            f"law {law.name}: sides differ: {show(zonk(lhs.ty))} vs {show(zonk(rhs.ty))} ({exc})"
        ) from None

    nodes = list(lhs.walk()) + list(rhs.walk())
    for n in nodes:
        for mt in f_param_metas(n.ty):
            if prune(mt) is mt:
                mt.ref = model.param
    for n in nodes:
        left = metas(n.ty)
        if left:
            raise LawCheckError(
                f"law {law.name}: ambiguous type {show(n.ty)} for `{print_expr(n.src)}`; "
                "add an annotation"
            )

    law_ty = zonk(lhs.ty)
    binders = []
    try:
        for name, ty, endo, tast in binders_raw:
            if endo:
                a = ty.args[0]
                if model.effect != "writer" or a != model.param:
                    raise LawCheckError(f"End is only defined for the writer monoid, not {print_type(tast)}")
                dom = monoid_endomorphisms(model.stack.monoid)
                binders.append(Binder(name, ty, model.realize(ty), len(dom), True, dom))
            else:
                ft = model.realize(ty)
                binders.append(Binder(name, ty, ft, finite.size(ft)))
        ambient = None
        result_ty = law_ty
        if law_ty.name == "Fn":
            dom, result_ty = law_ty.args
            ft = model.realize(dom)
            ambient = Binder("input", dom, ft, finite.size(ft))
        model.realize(result_ty)
        for n in nodes:
            n.ty = zonk(n.ty)
            model.realize(n.ty)
        lhs_code = _compile(lhs, model)
        rhs_code = _compile(rhs, model)
    except LawTypeError as exc:
        raise LawCheckError(f"law {law.name}: {exc}") from None
    except (EffectUnavailable, DomainTooLarge) as exc:
        raise LawCheckError(f"law {law.name}: {exc}") from None
    return TypedLaw(law, model, binders, law_ty, ambient, result_ty, lhs_code, rhs_code)
