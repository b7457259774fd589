"""Finite types, their values, canonical enumeration, and finite monoids.

Every type here has finitely many inhabitants and functions are stored
extensionally as lookup tables, so equality of any two values is decidable.

Canonical orders (relied on by counterexample reports):

* ``Unit``: ``[Star]``
* ``Enum(n)``: ascending index
* ``Sum(l, r)``: every ``InL`` in the order of ``l``, then every ``InR``
* ``Prod(a, b)``: lexicographic, first component most significant
* ``Fn(d, c)``: tables in lexicographic order of their entries, the entry
  for the first domain value being most significant
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from operator import attrgetter
from typing import Callable, Iterator, Sequence

INT64_MAX = 2**63 - 1


class DomainTooLarge(ValueError):
    def __init__(self, ty: "FinType", size: int | None = None):
        self.type = ty
        self.size = size
        super().__init__(f"domain too large: {ty}")


# ---------------------------------------------------------------- types


class FinType:
    __slots__ = ()

    @property
    def cardinality(self) -> int:
        return cardinality(self)


@dataclass(frozen=True, slots=True)
class Unit(FinType):
    def __str__(self):
        return "Unit"


@dataclass(frozen=True, slots=True)
class Enum(FinType):
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("Enum cardinality must be >= 1")

    def __str__(self):
        return f"Enum{self.n}"


@dataclass(frozen=True, slots=True)
class Sum(FinType):
    left: FinType
    right: FinType

    def __str__(self):
        return f"({self.left} + {self.right})"


@dataclass(frozen=True, slots=True)
class Prod(FinType):
    first: FinType
    second: FinType

    def __str__(self):
        return f"({self.first} * {self.second})"


@dataclass(frozen=True, slots=True)
class Fn(FinType):
    dom: FinType
    cod: FinType

    def __str__(self):
        return f"({self.dom} -> {self.cod})"


UNIT = Unit()


def _checked(ty: FinType, n: int) -> int:
    if n > INT64_MAX:
        raise DomainTooLarge(ty, n)
    return n


@lru_cache(maxsize=None)
def size(ty: FinType) -> int:
    """Exact number of inhabitants, unbounded (for unranking huge domains)."""
    if isinstance(ty, Unit):
        return 1
    if isinstance(ty, Enum):
        return ty.n
    if isinstance(ty, Sum):
        return size(ty.left) + size(ty.right)
    if isinstance(ty, Prod):
        return size(ty.first) * size(ty.second)
    if isinstance(ty, Fn):
        return size(ty.cod) ** size(ty.dom)
    raise TypeError(f"not a FinType: {ty!r}")


@lru_cache(maxsize=None)
def cardinality(ty: FinType) -> int:
    """Number of inhabitants; raises DomainTooLarge past signed 64 bits."""
    if isinstance(ty, Unit):
        return 1
    if isinstance(ty, Enum):
        return ty.n
    if isinstance(ty, Sum):
        return _checked(ty, cardinality(ty.left) + cardinality(ty.right))
    if isinstance(ty, Prod):
        return _checked(ty, cardinality(ty.first) * cardinality(ty.second))
    if isinstance(ty, Fn):
        d = cardinality(ty.dom)
        c = cardinality(ty.cod)
        # cheap bound before materialising a huge power
        if c > 1 and d * (c.bit_length() - 1) > 64:
            raise DomainTooLarge(ty)
        return _checked(ty, c**d)
    raise TypeError(f"not a FinType: {ty!r}")


# ---------------------------------------------------------------- values


class Value:
    __slots__ = ()


class _StarType(Value):
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Star"

    def __reduce__(self):
        return (_StarType, ())


Star = _StarType()


class Elem(Value):
    __slots__ = ("index",)

    def __init__(self, index: int):
        self.index = index

    def __eq__(self, other):
        return type(other) is Elem and other.index == self.index

    def __hash__(self):
        return hash(("E", self.index))

    def __repr__(self):
        return f"Elem {self.index}"

    def __reduce__(self):
        return (Elem, (self.index,))


class InL(Value):
    __slots__ = ("value",)

    def __init__(self, value: Value):
        self.value = value

    def __eq__(self, other):
        return type(other) is InL and other.value == self.value

    def __hash__(self):
        return hash(("L", self.value))

    def __repr__(self):
        return f"InL({self.value!r})"

    def __reduce__(self):
        return (InL, (self.value,))


class InR(Value):
    __slots__ = ("value",)

    def __init__(self, value: Value):
        self.value = value

    def __eq__(self, other):
        return type(other) is InR and other.value == self.value

    def __hash__(self):
        return hash(("R", self.value))

    def __repr__(self):
        return f"InR({self.value!r})"

    def __reduce__(self):
        return (InR, (self.value,))


class Pair(Value):
    __slots__ = ("first", "second")

    def __init__(self, first: Value, second: Value):
        self.first = first
        self.second = second

    def __eq__(self, other):
        return (
            type(other) is Pair
            and other.first == self.first
            and other.second == self.second
        )

    def __hash__(self):
        return hash(("P", self.first, self.second))

    def __repr__(self):
        return f"Pair({self.first!r}, {self.second!r})"

    def __reduce__(self):
        return (Pair, (self.first, self.second))


class Table(Value):
    """A total function, entries ordered by the canonical domain enumeration."""

    __slots__ = ("entries", "_hash")

    def __init__(self, entries):
        self.entries = entries if type(entries) is tuple else tuple(entries)

    def __eq__(self, other):
        return type(other) is Table and other.entries == self.entries

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = self._hash = hash(("T", self.entries))
            return h

    def __repr__(self):
        return "Table[" + ", ".join(render(v) for v in self.entries) + "]"

    def __len__(self):
        return len(self.entries)

    def __reduce__(self):
        return (Table, (self.entries,))


# Cached singletons for the common small Elem values.
_ELEMS = [Elem(i) for i in range(256)]


def elem(i: int) -> Elem:
    return _ELEMS[i] if i < 256 else Elem(i)


def render(v: Value) -> str:
    """Canonical value notation: Star, Elem i, InL(..), InR(..), Pair(..), Table[..]."""
    if v is Star:
        return "Star"
    if type(v) is Elem:
        return f"Elem {v.index}"
    if type(v) is InL:
        return f"InL({render(v.value)})"
    if type(v) is InR:
        return f"InR({render(v.value)})"
    if type(v) is Pair:
        return f"Pair({render(v.first)}, {render(v.second)})"
    if type(v) is Table:
        return "Table[" + ", ".join(render(e) for e in v.entries) + "]"
    raise TypeError(f"not a Value: {v!r}")


def parse_value(text: str) -> Value:
    """Inverse of render."""
    pos = 0

    def skip():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def expect(tok):
        nonlocal pos
        skip()
        if not text.startswith(tok, pos):
            raise ValueError(f"expected {tok!r} at {pos} in {text!r}")
        pos += len(tok)

    def value():
        nonlocal pos
        skip()
        for head in ("Star", "Elem", "InL", "InR", "Pair", "Table"):
            if text.startswith(head, pos):
                pos += len(head)
                break
        else:
            raise ValueError(f"bad value at {pos} in {text!r}")
        if head == "Star":
            return Star
        if head == "Elem":
            skip()
            start = pos
            while pos < len(text) and text[pos].isdigit():
                pos += 1
            return elem(int(text[start:pos]))
        if head in ("InL", "InR"):
            expect("(")
            inner = value()
            expect(")")
            return InL(inner) if head == "InL" else InR(inner)
        if head == "Pair":
            expect("(")
            a = value()
            expect(",")
            b = value()
            expect(")")
            return Pair(a, b)
        expect("[")
        entries = []
        skip()
        if text.startswith("]", pos):
            pos += 1
            return Table(entries)
        while True:
            entries.append(value())
            skip()
            if text.startswith("]", pos):
                pos += 1
                return Table(entries)
            expect(",")

    result = value()
    skip()
    if pos != len(text):
        raise ValueError(f"trailing input at {pos} in {text!r}")
    return result


def check_value(v: Value, ty: FinType) -> bool:
    """True iff v is well-typed at ty."""
    if isinstance(ty, Unit):
        return v is Star
    if isinstance(ty, Enum):
        return type(v) is Elem and 0 <= v.index < ty.n
    if isinstance(ty, Sum):
        if type(v) is InL:
            return check_value(v.value, ty.left)
        return type(v) is InR and check_value(v.value, ty.right)
    if isinstance(ty, Prod):
        return (
            type(v) is Pair
            and check_value(v.first, ty.first)
            and check_value(v.second, ty.second)
        )
    if isinstance(ty, Fn):
        return (
            type(v) is Table
            and len(v.entries) == cardinality(ty.dom)
            and all(check_value(e, ty.cod) for e in v.entries)
        )
    return False


class ValueTypeError(TypeError):
    pass


def value_eq(a: Value, b: Value, ty: FinType | None = None) -> bool:
    if ty is not None and not (check_value(a, ty) and check_value(b, ty)):
        raise ValueTypeError(f"value_eq on values not typed at {ty}")
    return a == b


# ---------------------------------------------------------------- enumeration


@lru_cache(maxsize=4096)
def _enumerate_cached(ty: FinType) -> tuple:
    return tuple(_generate(ty))


def _generate(ty: FinType) -> Iterator[Value]:
    if isinstance(ty, Unit):
        yield Star
    elif isinstance(ty, Enum):
        yield from (elem(i) for i in range(ty.n))
    elif isinstance(ty, Sum):
        yield from (InL(v) for v in enumerate_values(ty.left))
        yield from (InR(v) for v in enumerate_values(ty.right))
    elif isinstance(ty, Prod):
        seconds = enumerate_values(ty.second)
        for a in enumerate_values(ty.first):
            for b in seconds:
                yield Pair(a, b)
    elif isinstance(ty, Fn):
        n = cardinality(ty.dom)
        cod = enumerate_values(ty.cod)
        for entries in itertools.product(cod, repeat=n):
            yield Table(entries)
    else:
        raise TypeError(f"not a FinType: {ty!r}")


CACHE_LIMIT = 1 << 16


def enumerate_values(ty: FinType) -> Sequence[Value]:
    """All inhabitants of ty in canonical order."""
    n = cardinality(ty)
    if n <= CACHE_LIMIT:
        return _enumerate_cached(ty)
    return _LazyValues(ty, n)


class _LazyValues(Sequence):
    """Index-addressable view of a large domain; values built on demand."""

    def __init__(self, ty, n):
        self._ty = ty
        self._n = n

    def __len__(self):
        return self._n

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(self._n))]
        if i < 0:
            i += self._n
        if not 0 <= i < self._n:
            raise IndexError(i)
        return value_at(self._ty, i)

    def __iter__(self):
        return _generate(self._ty)


def enumerate_functions(dom: FinType, cod: FinType) -> Sequence[Value]:
    return enumerate_values(Fn(dom, cod))


def value_at(ty: FinType, i: int) -> Value:
    """The i-th value of ty in canonical order (unranking)."""
    return unranker(ty)(i)


UNRANK_TABLE_LIMIT = 1 << 12


@lru_cache(maxsize=None)
def unranker(ty: FinType) -> Callable[[int], Value]:
    """Compiled unranking function for ty: canonical index -> value."""
    if isinstance(ty, Unit):
        return lambda i: Star
    if isinstance(ty, Enum):
        return elem
    if size(ty) <= UNRANK_TABLE_LIMIT:
        return _enumerate_cached(ty).__getitem__
    if isinstance(ty, Sum):
        nl = size(ty.left)
        left, right = unranker(ty.left), unranker(ty.right)
        return lambda i: InL(left(i)) if i < nl else InR(right(i - nl))
    if isinstance(ty, Prod):
        ns = size(ty.second)
        first, second = unranker(ty.first), unranker(ty.second)

        def pair(i):
            q, r = divmod(i, ns)
            return Pair(first(q), second(r))

        return pair
    if isinstance(ty, Fn):
        n = size(ty.dom)
        c = size(ty.cod)
        cod = unranker(ty.cod)

        def table(i):
            out = [None] * n
            for j in range(n - 1, -1, -1):
                i, d = divmod(i, c)
                out[j] = cod(d)
            return Table(out)

        return table
    raise TypeError(f"not a FinType: {ty!r}")


@lru_cache(maxsize=None)
def indexer(ty: FinType) -> Callable[[Value], int]:
    """Compiled ranking function for ty: value -> canonical index."""
    if isinstance(ty, Unit):
        return lambda v: 0
    if isinstance(ty, Enum):
        return attrgetter("index")
    if isinstance(ty, Sum):
        left, right = indexer(ty.left), indexer(ty.right)
        nl = cardinality(ty.left)
        return lambda v: left(v.value) if type(v) is InL else nl + right(v.value)
    if isinstance(ty, Prod):
        first, second = indexer(ty.first), indexer(ty.second)
        ns = cardinality(ty.second)
        return lambda v: first(v.first) * ns + second(v.second)
    if isinstance(ty, Fn):
        cod = indexer(ty.cod)
        c = cardinality(ty.cod)

        def rank(v):
            i = 0
            for e in v.entries:
                i = i * c + cod(e)
            return i

        return rank
    raise TypeError(f"not a FinType: {ty!r}")


def index_of(ty: FinType, v: Value) -> int:
    return indexer(ty)(v)


def table_of(dom: FinType, f: Callable[[Value], Value]) -> Table:
    return Table(f(a) for a in enumerate_values(dom))


def table_fn(dom: FinType, table: Table) -> Callable[[Value], Value]:
    """A callable view of a table over dom."""
    entries = table.entries
    if isinstance(dom, Enum):
        return lambda a: entries[a.index]
    rank = indexer(dom)
    return lambda a: entries[rank(a)]


# ---------------------------------------------------------------- monoids


class MonoidError(ValueError):
    pass


@dataclass(frozen=True)
class MonoidSpec:
    """A finite monoid over Enum(n); ``table[a][b]`` is the index of a*b."""

    name: str
    size: int
    unit_index: int
    table: tuple

    def __post_init__(self):
        n = self.size
        if n < 1:
            raise MonoidError(f"{self.name}: empty carrier")
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise MonoidError(f"{self.name}: multiplication table is not {n}x{n}")
        if not 0 <= self.unit_index < n:
            raise MonoidError(f"{self.name}: unit out of range")
        t = self.table
        for row in t:
            for c in row:
                if not 0 <= c < n:
                    raise MonoidError(f"{self.name}: product out of range")
        u = self.unit_index
        for a in range(n):
            if t[u][a] != a or t[a][u] != a:
                raise MonoidError(f"{self.name}: unit law fails at {a}")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if t[t[a][b]][c] != t[a][t[b][c]]:
                        raise MonoidError(
                            f"{self.name}: not associative at ({a}, {b}, {c})"
                        )
        # value-level caches; object.__setattr__ because the dataclass is frozen
        elems = tuple(elem(i) for i in range(n))
        object.__setattr__(self, "_elems", elems)
        object.__setattr__(
            self, "_mult", tuple(tuple(elems[c] for c in row) for row in t)
        )

    @property
    def carrier(self) -> Enum:
        return Enum(self.size)

    @property
    def unit(self) -> Elem:
        return self._elems[self.unit_index]

    def mult(self, a: Elem, b: Elem) -> Elem:
        return self._mult[a.index][b.index]

    def is_commutative(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.size) for b in range(self.size))


def _cyclic(name, n):
    return MonoidSpec(name, n, 0, tuple(tuple((a + b) % n for b in range(n)) for a in range(n)))


def _t2():
    # self-maps of {0, 1} as tables (f0, f1), in canonical Fn(Enum2, Enum2) order:
    # 0 = const0, 1 = identity, 2 = swap, 3 = const1.  a*b = a after b.
    maps = [(0, 0), (0, 1), (1, 0), (1, 1)]
    idx = {m: i for i, m in enumerate(maps)}

    def compose(f, g):
        return idx[(f[g[0]], f[g[1]])]

    return MonoidSpec("T2", 4, 1, tuple(tuple(compose(f, g) for g in maps) for f in maps))


TRIVIAL = MonoidSpec("Trivial", 1, 0, ((0,),))
Z2 = _cyclic("Z2", 2)
Z3 = _cyclic("Z3", 3)
T2 = _t2()

BUILTIN_MONOIDS = {m.name: m for m in (TRIVIAL, Z2, Z3, T2)}


def monoid(name: str) -> MonoidSpec:
    try:
        return BUILTIN_MONOIDS[name]
    except KeyError:
        raise KeyError(
            f"unknown monoid {name!r}; built-ins: {', '.join(BUILTIN_MONOIDS)}"
        ) from None


@lru_cache(maxsize=None)
def monoid_endomorphisms(m: MonoidSpec) -> tuple:
    """Tables h over the carrier with h(1) = 1 and h(a*b) = h(a)*h(b)."""
    t = m.table
    n = m.size
    out = []
    for table in enumerate_functions(m.carrier, m.carrier):
        h = [e.index for e in table.entries]
        if h[m.unit_index] != m.unit_index:
            continue
        if all(h[t[a][b]] == t[h[a]][h[b]] for a in range(n) for b in range(n)):
            out.append(table)
    return tuple(out)
