import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monadlaw.finite import (
    UNIT,
    Elem,
    Enum,
    Fn,
    InL,
    InR,
    Pair,
    Star,
    Sum,
    Table,
    enumerate_values,
    table_fn,
)
from monadlaw.stack import (
    EffectUnavailable,
    StackSyntaxError,
    build,
    parse_stack,
)

E2 = Enum(2)
e0, e1 = Elem(0), Elem(1)
ident = lambda v: v  # noqa: E731


def swap(v):
    return Elem(1 - v.index)


# ---------------------------------------------------------------- grammar


@pytest.mark.parametrize(
    "text",
    [
        "Id",
        "ExceptT(e=2).Id",
        "StateT(s=3).WriterT(T2).ReaderT(r=2).ExceptT(e=1).Id",
        "ReaderBase(r=2, Id)",
        "ReaderBase(r=2, WriterT(Z2).Id)",
    ],
)
def test_stack_text_round_trips(text):
    assert parse_stack(text).text() == text
    assert parse_stack(parse_stack(text).text()) == parse_stack(text)


@pytest.mark.parametrize(
    "text,pos",
    [("bogus", 0), ("ExceptT(e=2)", 12), ("WriterT(Q9).Id", 8), ("StateT(s=0).Id", 9)],
)
def test_stack_grammar_errors_carry_a_position(text, pos):
    with pytest.raises(StackSyntaxError) as info:
        parse_stack(text)
    assert info.value.pos == pos


def test_designation_defaults_to_innermost_layer():
    spec = parse_stack("ExceptT(e=2).StateT(s=2).ExceptT(e=3).Id").designate("exception")
    assert spec.designated == ("exception", 2)


def test_missing_effect_is_reported():
    with pytest.raises(EffectUnavailable):
        parse_stack("ExceptT(e=2).Id").designate("state")


# ---------------------------------------------------------------- monad structure


def test_unit_examples():
    assert build("Id").unit(e1) == e1
    assert build("WriterT(Z2).Id").unit(e1) == Pair(e1, e0)
    assert build("StateT(s=2).Id").unit(e0) == Table([Pair(e0, e0), Pair(e0, e1)])


def test_bind_examples():
    assert build("Id").bind(swap, e0) == e1
    m = build("ExceptT(e=2).Id")
    for k in (lambda a: InR(a), lambda a: InL(e0)):
        assert m.bind(k, InL(e1)) == InL(e1)
    w = build("WriterT(Z2).Id")
    assert w.bind(lambda a: Pair(Elem(1), e1), Pair(e0, e1)) == Pair(e1, e0)


def test_fmap_examples():
    x = build("ExceptT(e=2).Id")
    assert x.fmap(swap, InL(e0)) == InL(e0)
    w = build("WriterT(Z2).Id")
    assert w.fmap(swap, Pair(e0, e1)) == Pair(e1, e1)


STACKS = [
    "Id",
    "ExceptT(e=2).Id",
    "WriterT(T2).Id",
    "StateT(s=2).Id",
    "ReaderT(r=2).Id",
    "ReaderBase(r=2, Id)",
    "StateT(s=2).ExceptT(e=2).Id",
    "ExceptT(e=2).StateT(s=2).Id",
    "WriterT(Z2).ReaderT(r=2).Id",
]


def all_maps(dom, cod):
    return [table_fn(dom, t) for t in enumerate_values(Fn(dom, cod))]


@pytest.mark.parametrize("text", STACKS)
def test_monad_laws_exhaustively(text):
    m = build(text)
    x = E2
    mx = m.carrier(x)
    ts = list(enumerate_values(mx))
    ks = all_maps(x, mx) if len(ts) <= 16 else all_maps(x, mx)[:: max(1, len(ts) ** 2 // 200)]
    for t in ts:
        assert m.bind(m.unit, t) == t
        assert m.fmap(ident, t) == t
    for k in ks:
        for a in enumerate_values(x):
            assert m.bind(k, m.unit(a)) == k(a)
    for k, k2 in itertools.islice(itertools.product(ks, repeat=2), 400):
        for t in ts[:64]:
            assert m.bind(k2, m.bind(k, t)) == m.bind(lambda a: m.bind(k2, k(a)), t)


# ---------------------------------------------------------------- exceptions


def test_raise_examples():
    assert build("ExceptT(e=2).Id", "exception").raise_(e0) == InL(e0)
    assert build("WriterT(Z2).ExceptT(e=2).Id", "exception").raise_(e1) == InL(e1)
    assert build("ReaderT(r=2).ExceptT(e=2).Id", "exception").raise_(e1) == Table([InL(e1), InL(e1)])


def test_catch_examples():
    m = build("ExceptT(e=2).Id", "exception")
    h = lambda err: InR(swap(err))  # noqa: E731
    assert m.catch(h, InR(e0)) == InR(e0)
    assert m.catch(h, InL(e1)) == InR(e0)


def test_catch_lifts_through_reader():
    outer = build("ReaderT(r=2).ExceptT(e=2).Id", "exception")
    inner = build("ExceptT(e=2).Id", "exception")
    h = lambda err: Table([InR(err), InL(swap(err))])  # noqa: E731
    for t in enumerate_values(outer.carrier(E2)):
        got = outer.catch(h, t)
        for r in range(2):
            want = inner.catch(lambda err: h(err).entries[r], t.entries[r])
            assert got.entries[r] == want


def test_handle_on_plain_exceptions_is_application():
    m = build("ExceptT(e=2).Id", "exception")
    for k in all_maps(Sum(E2, E2), m.carrier(E2)):
        for t in enumerate_values(m.carrier(E2)):
            assert m.handle(k, t) == k(t)
    rho = m.exc_rho
    for t in enumerate_values(m.carrier(E2)):
        assert m.handle(rho, t) == t


def test_fusel_example():
    m = build("ExceptT(e=2).Id", "exception")
    assert m.fusel(InR(InL(e1))) == InL(e1)
    assert m.fusel(InR(InR(e0))) == InR(e0)
    assert m.exc_mixmap(ident, InL(e0)) == InL(e0)


# ---------------------------------------------------------------- reader


def test_reader_rho_examples():
    assert build("ReaderBase(r=2, Id)", "reader").reader(ident) == Table([e0, e1])
    assert build("ExceptT(e=2).ReaderT(r=2).Id", "reader").reader(ident) == Table([InR(e0), InR(e1)])
    m = build("StateT(s=2).ReaderT(r=2).Id", "reader")
    got = m.reader(swap)
    # carrier s -> r -> (x, s): rho f = \s r. (f r, s)
    want = Table([Table([Pair(swap(r), s) for r in (e0, e1)]) for s in (e0, e1)])
    assert got == want


def test_ask_examples():
    assert build("ReaderBase(r=2, Id)", "reader").ask() == Table([e0, e1])
    assert build("ExceptT(e=2).ReaderT(r=2).Id", "reader").ask() == Table([InR(e0), InR(e1)])


def test_local_examples():
    m = build("ReaderBase(r=2, Id)", "reader")
    t = Table([e1, e0])
    assert m.local(ident, t, E2) == t
    assert m.local(lambda r: e0, t, E2) == Table([e1, e1])
    assert m.local(swap, m.unit(e1), E2) == m.unit(e1)


def test_apply_abstr_round_trip_on_state_extension():
    m = build("ReaderBase(r=2, StateT(s=2).Id)", "reader")
    for t in enumerate_values(m.carrier(UNIT)):
        assert m.abstr(m.apply(t)) == t


def test_apply_needs_reader_base():
    with pytest.raises(EffectUnavailable):
        build("ReaderT(r=2).Id", "reader").apply(Table([e0, e1]))


# ---------------------------------------------------------------- writer


def test_writer_examples():
    w = build("WriterT(Z2).Id", "writer")
    assert w.writer(Pair(e0, e1)) == Pair(e0, e1)
    assert w.tell(e1) == Pair(Star, e1)
    # carrier e + x*w: the exception layer wraps the writer cell
    assert build("WriterT(Z2).ExceptT(e=2).Id", "writer").writer(Pair(e1, e1)) == InR(Pair(e1, e1))
    # carrier (e + x)*w
    assert build("ExceptT(e=2).WriterT(Z2).Id", "writer").writer(Pair(e1, e1)) == Pair(InR(e1), e1)


def test_listen_pass_examples():
    w = build("WriterT(Z2).Id", "writer")
    assert w.listen(Pair(e0, e1)) == Pair(Pair(e0, e1), e1)
    assert w.listen(w.unit(e1)) == w.unit(Pair(e1, e0))
    assert w.pass_(Pair(Pair(e1, Table([e1, e1])), e0)) == Pair(e1, e1)
    for t in enumerate_values(w.carrier(E2)):
        assert w.pass_(w.fmap(lambda a: Pair(a, Table([e0, e1])), t)) == t


def test_shift_fuse_examples():
    w = build("WriterT(Z2).Id", "writer")
    assert w.shift(Pair(e0, e1)) == Pair(Pair(e0, e1), e0)
    assert w.fuse(Pair(Pair(e0, e1), e1)) == Pair(e0, e0)
    for t in enumerate_values(w.carrier(E2)):
        assert w.fuse(w.shift(t)) == t


def test_pseudobind_example():
    w = build("WriterT(Z2).Id", "writer")
    assert w.pbnd(lambda a: Pair(e1, e1), Pair(e0, e1)) == Pair(e1, e0)


def test_logmap_examples():
    w = build("WriterT(Z2).Id", "writer")
    assert w.logmap(lambda v: e0, Pair(e1, e1)) == Pair(e1, e0)
    assert w.logmap(ident, Pair(e1, e1)) == Pair(e1, e1)


def test_t2_log_order_is_earlier_on_the_left():
    w = build("WriterT(T2).Id", "writer")
    m = w.monoid
    for a, b in itertools.product(enumerate_values(m.carrier), repeat=2):
        got = w.then(w.tell(a), w.tell(b))
        assert got == Pair(Star, m.mult(a, b))


# ---------------------------------------------------------------- state


def test_state_examples():
    s = build("StateT(s=2).Id", "state")
    assert s.get() == Table([Pair(e0, e0), Pair(e1, e1)])
    assert s.put(e1) == Table([Pair(Star, e1), Pair(Star, e1)])
    assert s.state(lambda v: Pair(v, swap(v))) == Table([Pair(e0, e1), Pair(e1, e0)])


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(["StateT(s=2).Id", "ExceptT(e=2).StateT(s=3).Id", "StateT(s=3).WriterT(Z2).Id"]),
       st.data())
def test_put_put_and_put_get(text, data):
    m = build(text, "state")
    n = m.spec.layers[m.spec.designated[1]].param.n
    s1 = Elem(data.draw(st.integers(0, n - 1)))
    s2 = Elem(data.draw(st.integers(0, n - 1)))
    assert m.then(m.put(s1), m.put(s2)) == m.put(s2)
    assert m.then(m.put(s1), m.get()) == m.then(m.put(s1), m.unit(s1))


# ---------------------------------------------------------------- mutants


def test_mutants_change_semantics():
    assert build("WriterT(Z2).Id", "writer", mutant="writer-bind-drop").bind(
        lambda a: Pair(a, e1), Pair(e0, e0)
    ) == Pair(e0, e0)
    assert build("StateT(s=2).Id", "state", mutant="put-ignore").put(e1) != build("StateT(s=2).Id", "state").put(e1)
    assert build("ExceptT(e=2).Id", "exception", mutant="catch-never").catch(lambda err: InR(err), InL(e1)) == InL(e1)


def test_unknown_mutant():
    with pytest.raises(ValueError):
        build("Id", mutant="nope")
