import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monadlaw import finite
from monadlaw.finite import (
    T2,
    TRIVIAL,
    UNIT,
    Z2,
    Z3,
    DomainTooLarge,
    Elem,
    Enum,
    Fn,
    InL,
    InR,
    MonoidError,
    MonoidSpec,
    Pair,
    Prod,
    Star,
    Sum,
    Table,
    cardinality,
    check_value,
    enumerate_values,
    index_of,
    monoid_endomorphisms,
    parse_value,
    render,
    value_at,
    value_eq,
)

E2 = Enum(2)


def e(*xs):
    return [Elem(x) for x in xs]


# ---------------------------------------------------------------- types


def types(max_leaves=4):
    base = st.one_of(st.just(UNIT), st.integers(1, 3).map(Enum))
    return st.recursive(
        base,
        lambda sub: st.one_of(
            st.builds(Sum, sub, sub),
            st.builds(Prod, sub, sub),
            st.builds(Fn, base, base),
        ),
        max_leaves=max_leaves,
    ).filter(lambda t: finite.size(t) <= 512)


def test_cardinality_rules():
    assert cardinality(UNIT) == 1
    assert cardinality(Enum(5)) == 5
    assert cardinality(Sum(E2, Enum(3))) == 5
    assert cardinality(Prod(E2, Enum(3))) == 6
    assert cardinality(Fn(Enum(3), E2)) == 8
    assert cardinality(Fn(E2, Enum(3))) == 9


def test_cardinality_overflow_is_checked():
    big = Fn(Enum(64), Enum(4))  # 4^64 = 2^128
    with pytest.raises(DomainTooLarge):
        cardinality(big)
    assert finite.size(big) == 4**64


def test_enum_needs_positive_size():
    with pytest.raises(ValueError):
        Enum(0)


# ---------------------------------------------------------------- enumeration


def test_enumerate_small_examples():
    assert list(enumerate_values(UNIT)) == [Star]
    assert list(enumerate_values(E2)) == e(0, 1)
    tables = list(enumerate_values(Fn(E2, E2)))
    assert tables == [Table(e(0, 0)), Table(e(0, 1)), Table(e(1, 0)), Table(e(1, 1))]


def test_function_space_examples():
    assert len(finite.enumerate_functions(UNIT, Enum(3))) == 3
    assert list(finite.enumerate_functions(E2, UNIT)) == [Table([Star, Star])]
    fs = list(finite.enumerate_functions(E2, E2))
    assert Table(e(0, 1)) in fs and Table(e(1, 0)) in fs


def test_function_enumeration_matches_brute_force():
    # oracle: every assignment of codomain values to the domain, in lexicographic order
    dom, cod = Enum(3), Sum(UNIT, E2)
    cods = list(enumerate_values(cod))
    oracle = [Table(c) for c in itertools.product(cods, repeat=3)]
    assert list(enumerate_values(Fn(dom, cod))) == oracle


@settings(max_examples=80, deadline=None)
@given(types())
def test_enumeration_is_complete_distinct_and_well_typed(ty):
    vals = list(enumerate_values(ty))
    assert len(vals) == cardinality(ty)
    assert len(set(vals)) == len(vals)
    assert all(check_value(v, ty) for v in vals)


@settings(max_examples=80, deadline=None)
@given(types(), st.data())
def test_rank_unrank_round_trip(ty, data):
    i = data.draw(st.integers(0, cardinality(ty) - 1))
    v = value_at(ty, i)
    assert index_of(ty, v) == i
    assert enumerate_values(ty)[i] == v


def test_unrank_beyond_int64():
    ty = Fn(Enum(40), Enum(4))  # 2^80 values
    n = finite.size(ty)
    for i in (0, 1, n // 3, n - 1):
        assert index_of(ty, value_at(ty, i)) == i


# ---------------------------------------------------------------- values


def test_render_parse_round_trip_examples():
    v = Pair(InL(Elem(1)), Table([Star, InR(Pair(Star, Elem(0)))]))
    text = render(v)
    assert text == "Pair(InL(Elem 1), Table[Star, InR(Pair(Star, Elem 0))])"
    assert parse_value(text) == v


@settings(max_examples=60, deadline=None)
@given(types(), st.data())
def test_render_parse_round_trip(ty, data):
    v = value_at(ty, data.draw(st.integers(0, cardinality(ty) - 1)))
    assert parse_value(render(v)) == v


def test_check_value_rejects_wrong_shapes():
    assert check_value(Table(e(0, 1)), Fn(E2, E2))
    assert not check_value(Table(e(0)), Fn(E2, E2))
    assert not check_value(Elem(2), E2)
    assert not check_value(InL(Star), Prod(UNIT, UNIT))


def test_equality_examples():
    assert value_eq(Star, Star)
    assert not value_eq(Table(e(0, 1)), Table(e(1, 0)), Fn(E2, E2))
    p = Pair(Elem(0), InR(Star))
    assert value_eq(p, p)


def test_value_eq_type_checks_when_given_a_type():
    with pytest.raises(finite.ValueTypeError):
        value_eq(Elem(3), Elem(3), E2)


# ---------------------------------------------------------------- monoids


@pytest.mark.parametrize("m", [TRIVIAL, Z2, Z3, T2], ids=lambda m: m.name)
def test_builtin_monoid_laws(m):
    c = m.carrier
    for a, b, d in itertools.product(enumerate_values(c), repeat=3):
        assert m.mult(m.mult(a, b), d) == m.mult(a, m.mult(b, d))
    for a in enumerate_values(c):
        assert m.mult(m.unit, a) == a == m.mult(a, m.unit)


def test_t2_is_not_commutative():
    pairs = itertools.product(enumerate_values(T2.carrier), repeat=2)
    assert any(T2.mult(a, b) != T2.mult(b, a) for a, b in pairs)


def test_bad_monoid_is_rejected():
    with pytest.raises(MonoidError):  # (1*1)*2 = 2 but 1*(1*2) = 1
        MonoidSpec("bad", 3, 0, ((0, 1, 2), (1, 0, 0), (2, 0, 0)))
    with pytest.raises(MonoidError):  # no unit
        MonoidSpec("bad", 2, 0, ((1, 1), (1, 1)))


def endo_oracle(m):
    """Brute force: all self-maps of the carrier preserving unit and product."""
    els = list(enumerate_values(m.carrier))
    out = []
    for images in itertools.product(els, repeat=len(els)):
        f = dict(zip(els, images))
        if f[m.unit] != m.unit:
            continue
        if all(f[m.mult(a, b)] == m.mult(f[a], f[b]) for a in els for b in els):
            out.append(Table(images))
    return out


def test_endomorphism_examples():
    assert list(monoid_endomorphisms(TRIVIAL)) == [Table(e(0))]
    assert set(monoid_endomorphisms(Z2)) == {Table(e(0, 1)), Table(e(0, 0))}
    assert Table(e(0, 1, 2, 3)) in set(monoid_endomorphisms(T2))


@pytest.mark.parametrize("m", [TRIVIAL, Z2, Z3, T2], ids=lambda m: m.name)
def test_endomorphisms_match_oracle(m):
    assert list(monoid_endomorphisms(m)) == endo_oracle(m)
