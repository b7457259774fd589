"""Abstract syntax, parser and printer for law files.

A law file holds items of the form::

    # comment
    @expect refuted
    @types X=1, X'=1
    law Steele-UnitR: forall h: J X -> M X' . pbnd (h ∘ eta) == h

    @stacks "WriterT(Z2).Id", "WriterT(T2).Id"
    @effect writer
    suite writer-steele { Steele-UnitL, Steele-Assoc, Steele-UnitR }

Expressions: variables, ``\\x. e`` (or ``λx. e``, optionally ``\\x: T. e``),
application by juxtaposition, ``f ∘ g``, ``m >>= k``, ``m >> n``, pairs
``(a, b)``, ``*`` for the unit value and annotations ``(e : T)``.

Types: ``X``, ``Unit``, ``A + B``, ``A * B`` (or ``×``), ``A -> B`` (or
``→``), ``M A``, ``N A``, ``J A``, ``J(P, A)``, ``F(P, A)`` and ``End A``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional


class LawSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int, source: str = "<law>"):
        self.line = line
        self.column = column
        self.source = source
        super().__init__(f"{source}:{line}:{column}: {message}")


# ---------------------------------------------------------------- AST


@dataclass(frozen=True)
class TyName:
    name: str


@dataclass(frozen=True)
class TyApp:
    con: str  # Sum | Prod | Fn | M | N | J | F | End
    args: tuple


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class StarE:
    pass


@dataclass(frozen=True)
class Lam:
    param: str
    body: object
    ptype: Optional[object] = None


@dataclass(frozen=True)
class App:
    fn: object
    arg: object


@dataclass(frozen=True)
class Compose:
    left: object
    right: object


@dataclass(frozen=True)
class BindE:
    m: object
    k: object


@dataclass(frozen=True)
class ThenE:
    m: object
    n: object


@dataclass(frozen=True)
class PairE:
    first: object
    second: object


@dataclass(frozen=True)
class Annot:
    expr: object
    type: object


@dataclass(frozen=True)
class LawExpr:
    name: str
    binders: tuple  # ((name, type), ...)
    lhs: object
    rhs: object
    expect: str = "holds"
    cite: str = ""
    types: tuple = ()  # ((typevar, cardinality), ...)
    line: int = 0

    def structure(self):
        """The parts that printing and re-parsing must preserve."""
        return (self.name, self.binders, self.lhs, self.rhs)


@dataclass(frozen=True)
class SuiteDecl:
    name: str
    laws: tuple
    stacks: tuple = ()
    effect: Optional[str] = None
    cite: str = ""


@dataclass
class LawFile:
    laws: list = field(default_factory=list)
    suites: list = field(default_factory=list)
    source: str = "<law>"


# ---------------------------------------------------------------- lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<string>"[^"\n]*")
  | (?P<op>==|>>=|>>|->|→|∘|\\|λ|∀|×|[()\[\]{},:.+*@=])
  | (?P<number>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z0-9_]+)*['′]*)
    """,
    re.VERBOSE,
)

EXPECTATIONS = ("holds", "refuted", "report-only")


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int


def _normalise(text: str) -> str:
    return {"→": "->", "λ": "\\", "∀": "forall", "×": "*"}.get(text, text)


class _Lexer:
    def __init__(self, text: str, source: str):
        self.text = text
        self.source = source
        self.pos = 0
        self.line = 1
        self.line_start = 0

    def error(self, message, pos=None):
        pos = self.pos if pos is None else pos
        return LawSyntaxError(message, self.line, pos - self.line_start + 1, self.source)

    def tokens(self):
        out = []
        text = self.text
        while self.pos < len(text):
            m = _TOKEN_RE.match(text, self.pos)
            if not m:
                raise self.error(f"unexpected character {text[self.pos]!r}")
            kind = m.lastgroup
            if kind == "nl":
                out.append(Tok("nl", "\n", self.line, self.pos - self.line_start + 1))
                self.line += 1
                self.line_start = m.end()
            elif kind not in ("ws", "comment"):
                tok_text = m.group()
                if kind == "op":
                    tok_text = _normalise(tok_text)
                if kind == "ident":
                    tok_text = tok_text.replace("′", "'")
                out.append(Tok(kind, tok_text, self.line, self.pos - self.line_start + 1))
            self.pos = m.end()
        out.append(Tok("eof", "", self.line, self.pos - self.line_start + 1))
        return out


# ---------------------------------------------------------------- parser

_TYPE_CONS1 = ("M", "N", "J", "End")


class _Parser:
    def __init__(self, text: str, source: str = "<law>"):
        self.text = text
        self.source = source
        self.lexer = _Lexer(text, source)
        self.toks = [t for t in self.lexer.tokens() if t.kind != "nl"]
        self.i = 0

    # -- helpers

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def peek(self, n=1) -> Tok:
        return self.toks[min(self.i + n, len(self.toks) - 1)]

    def error(self, message, tok=None):
        tok = tok or self.tok
        return LawSyntaxError(message, tok.line, tok.col, self.source)

    def at(self, text, kind=None):
        t = self.tok
        return t.text == text and (kind is None or t.kind == kind) and t.kind != "string"

    def accept(self, text):
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text, what=None):
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {what or repr(text)}, found {found!r}")
        tok = self.tok
        self.i += 1
        return tok

    def ident(self, what="identifier"):
        t = self.tok
        if t.kind != "ident":
            raise self.error(f"expected {what}, found {t.text or 'end of input'!r}")
        self.i += 1
        return t.text

    def name(self, what="name"):
        """A law or suite name; these may contain '-'."""
        return self.ident(what)

    # -- file level

    def law_file(self) -> LawFile:
        out = LawFile(source=self.source)
        pragmas = {}
        while self.tok.kind != "eof":
            if self.at("@"):
                tok = self.tok
                self.i += 1
                key = self.ident("pragma name")
                pragmas[key] = (self.pragma_value(key), tok)
            elif self.at("law", "ident"):
                out.laws.append(self.law(pragmas))
                pragmas = {}
            elif self.at("suite", "ident"):
                out.suites.append(self.suite(pragmas))
                pragmas = {}
            else:
                raise self.error(f"expected 'law', 'suite' or '@pragma', found {self.tok.text!r}")
        return out

    def pragma_value(self, key):
        if key == "expect":
            t = self.tok
            word = self.name("expectation")
            if word not in EXPECTATIONS:
                raise self.error(f"unknown expectation {word!r}", t)
            return word
        if key == "cite":
            return self.string()
        if key == "types":
            items = []
            while True:
                var = self.ident("type variable")
                self.expect("=")
                t = self.tok
                if t.kind != "number":
                    raise self.error("expected cardinality")
                self.i += 1
                if int(t.text) < 1:
                    raise self.error("cardinality must be >= 1", t)
                items.append((var, int(t.text)))
                if not self.accept(","):
                    return tuple(items)
        if key == "stacks":
            items = [self.string()]
            while self.accept(","):
                items.append(self.string())
            return tuple(items)
        if key == "effect":
            return self.ident("effect")
        raise self.error(f"unknown pragma @{key}")

    def string(self):
        t = self.tok
        if t.kind != "string":
            raise self.error(f"expected a string, found {t.text!r}")
        self.i += 1
        return t.text[1:-1]

    def suite(self, pragmas) -> SuiteDecl:
        self.expect("suite")
        name = self.name("suite name")
        self.expect("{")
        laws = []
        if not self.at("}"):
            laws.append(self.name("law name"))
            while self.accept(","):
                laws.append(self.name("law name"))
        self.expect("}", "'}' or ','")
        for key in pragmas:
            if key not in ("stacks", "effect", "cite"):
                raise self.error(f"@{key} does not apply to a suite", pragmas[key][1])
        return SuiteDecl(
            name,
            tuple(laws),
            pragmas.get("stacks", ((),))[0],
            pragmas.get("effect", (None,))[0],
            pragmas.get("cite", ("",))[0],
        )

    def law(self, pragmas) -> LawExpr:
        line = self.tok.line
        self.expect("law")
        name = self.name("law name")
        self.expect(":")
        binders = self.binders()
        lhs = self.expr()
        self.expect("==", "'=='")
        rhs = self.expr()
        for key in pragmas:
            if key not in ("expect", "cite", "types"):
                raise self.error(f"@{key} does not apply to a law", pragmas[key][1])
        return LawExpr(
            name,
            binders,
            lhs,
            rhs,
            expect=pragmas.get("expect", ("holds",))[0],
            cite=pragmas.get("cite", ("",))[0],
            types=pragmas.get("types", ((),))[0],
            line=line,
        )

    def binders(self):
        self.expect("forall", "'forall'")
        out = []
        if self.accept("."):
            return ()
        while True:
            var = self.ident("binder name")
            self.expect(":", "':' after binder name")
            if self.at(".") or self.at(",") or self.tok.kind == "eof":
                raise self.error(f"missing type for binder {var!r}")
            out.append((var, self.type()))
            if self.accept("."):
                return tuple(out)
            self.expect(",", "',' or '.'")

    # -- types

    def type(self):
        left = self.sum_type()
        if self.accept("->"):
            return TyApp("Fn", (left, self.type()))
        return left

    def sum_type(self):
        left = self.prod_type()
        while self.accept("+"):
            left = TyApp("Sum", (left, self.prod_type()))
        return left

    def prod_type(self):
        left = self.app_type()
        while self.accept("*"):
            left = TyApp("Prod", (left, self.app_type()))
        return left

    def app_type(self):
        t = self.tok
        if t.kind == "ident" and t.text == "F":
            self.i += 1
            self.expect("(")
            p = self.type()
            self.expect(",")
            a = self.type()
            self.expect(")")
            return TyApp("F", (p, a))
        if t.kind == "ident" and t.text in _TYPE_CONS1:
            self.i += 1
            if t.text == "J" and self.at("(") and self._is_pair_type():
                self.expect("(")
                p = self.type()
                self.expect(",")
                a = self.type()
                self.expect(")")
                return TyApp("J", (p, a))
            return TyApp(t.text, (self.atom_type(),))
        return self.atom_type()

    def _is_pair_type(self):
        depth = 0
        j = self.i
        while j < len(self.toks):
            text = self.toks[j].text
            if text == "(":
                depth += 1
            elif text == ")":
                depth -= 1
                if depth == 0:
                    return False
            elif text == "," and depth == 1:
                return True
            j += 1
        return False

    def atom_type(self):
        if self.accept("("):
            if self.accept(")"):
                return TyName("Unit")
            t = self.type()
            self.expect(")")
            return t
        t = self.tok
        if t.kind == "ident" and t.text == "F":
            return self.app_type()  # F(P, A) delimits itself
        if t.kind != "ident" or t.text in _TYPE_CONS1:
            raise self.error(f"expected a type, found {t.text or 'end of input'!r}")
        self.i += 1
        return TyName(t.text)

    # -- expressions

    def expr(self):
        if self.at("\\"):
            return self.lam()
        left = self.compose()
        while self.at(">>=") or self.at(">>"):
            op = self.tok.text
            self.i += 1
            right = self.lam() if self.at("\\") else self.compose()
            left = BindE(left, right) if op == ">>=" else ThenE(left, right)
        return left

    def lam(self):
        self.expect("\\")
        param = self.ident("lambda parameter")
        ptype = None
        if self.accept(":"):
            ptype = self.type()
        self.expect(".", "'.' after lambda parameter")
        return Lam(param, self.expr(), ptype)

    def compose(self):
        left = self.app()
        if self.accept("∘"):
            return Compose(left, self.compose())
        return left

    def _starts_atom(self):
        t = self.tok
        if t.kind == "ident":
            return t.text not in ("law", "suite", "forall")
        return t.kind == "op" and t.text in ("(", "*")

    def app(self):
        if not self._starts_atom():
            found = self.tok.text or "end of input"
            raise self.error(f"expected an expression, found {found!r}")
        fn = self.atom()
        while self._starts_atom() or self.at("\\"):
            if self.at("\\"):
                fn = App(fn, self.lam())
                break
            fn = App(fn, self.atom())
        return fn

    def atom(self):
        t = self.tok
        if t.kind == "ident":
            self.i += 1
            return Var(t.text)
        if self.accept("*"):
            return StarE()
        self.expect("(")
        if self.accept(")"):
            return StarE()
        e = self.expr()
        if self.accept(","):
            second = self.expr()
            self.expect(")")
            return PairE(e, second)
        if self.accept(":"):
            ty = self.type()
            self.expect(")")
            return Annot(e, ty)
        self.expect(")", "')'")
        return e


def parse_law_file(text: str, source: str = "<law>") -> LawFile:
    return _Parser(text, source).law_file()


def parse_law(text: str, source: str = "<law>") -> LawExpr:
    """Parse a single law item (pragmas allowed)."""
    f = parse_law_file(text, source)
    if len(f.laws) != 1 or f.suites:
        raise LawSyntaxError("expected exactly one law", 1, 1, source)
    return f.laws[0]


def parse_expr(text: str):
    p = _Parser(text)
    e = p.expr()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    return e


def parse_type(text: str):
    p = _Parser(text)
    t = p.type()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    return t


# ---------------------------------------------------------------- printer


def print_type(t, prec=0) -> str:
    # prec: 0 arrow, 1 sum, 2 product, 3 application argument
    if isinstance(t, TyName):
        return t.name
    con, args = t.con, t.args
    if con == "Fn":
        s = f"{print_type(args[0], 1)} -> {print_type(args[1], 0)}"
        return f"({s})" if prec > 0 else s
    if con == "Sum":
        s = f"{print_type(args[0], 1)} + {print_type(args[1], 2)}"
        return f"({s})" if prec > 1 else s
    if con == "Prod":
        s = f"{print_type(args[0], 2)} * {print_type(args[1], 3)}"
        return f"({s})" if prec > 2 else s
    if con in ("F",) or (con == "J" and len(args) == 2):
        return f"{con}({print_type(args[0])}, {print_type(args[1])})"
    s = f"{con} {print_type(args[0], 4)}"
    return f"({s})" if prec > 3 else s


def print_expr(e, prec=0) -> str:
    # prec: 0 top (lambda ok), 1 bind operand, 2 compose operand, 3 app fn, 4 atom
    if isinstance(e, Var):
        return e.name
    if isinstance(e, StarE):
        return "*"
    if isinstance(e, PairE):
        return f"({print_expr(e.first)}, {print_expr(e.second)})"
    if isinstance(e, Annot):
        return f"({print_expr(e.expr)} : {print_type(e.type)})"
    if isinstance(e, Lam):
        head = f"\\{e.param}" + (f": {print_type(e.ptype)}" if e.ptype is not None else "")
        s = f"{head}. {print_expr(e.body)}"
        return f"({s})" if prec > 0 else s
    if isinstance(e, (BindE, ThenE)):
        op = ">>=" if isinstance(e, BindE) else ">>"
        right = e.k if isinstance(e, BindE) else e.n
        left = e.m
        s = f"{print_expr(left, 1)} {op} {print_expr(right, 2)}"
        return f"({s})" if prec > 0 else s
    if isinstance(e, Compose):
        s = f"{print_expr(e.left, 3)} ∘ {print_expr(e.right, 2)}"
        return f"({s})" if prec > 2 else s
    if isinstance(e, App):
        s = f"{print_expr(e.fn, 3)} {print_expr(e.arg, 4)}"
        return f"({s})" if prec > 3 else s
    raise TypeError(f"not an expression: {e!r}")


def print_law(law: LawExpr, pragmas: bool = True) -> str:
    lines = []
    if pragmas:
        if law.expect != "holds":
            lines.append(f"@expect {law.expect}")
        if law.cite:
            lines.append(f'@cite "{law.cite}"')
        if law.types:
            lines.append("@types " + ", ".join(f"{v}={n}" for v, n in law.types))
    binders = ", ".join(f"{v}: {print_type(t)}" for v, t in law.binders)
    head = f"law {law.name}: forall {binders} ." if binders else f"law {law.name}: forall ."
    lines.append(f"{head} {print_expr(law.lhs)} == {print_expr(law.rhs)}")
    return "\n".join(lines)
