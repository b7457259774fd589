import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monadlaw.dsl.syntax import (
    Annot,
    App,
    BindE,
    Compose,
    Lam,
    LawSyntaxError,
    PairE,
    StarE,
    ThenE,
    TyApp,
    TyName,
    Var,
    parse_expr,
    parse_law,
    parse_law_file,
    parse_type,
    print_expr,
    print_law,
    print_type,
)
from monadlaw.dsl.typecheck import LawCheckError, eval_side, infer_effect, typecheck_law
from monadlaw.finite import Elem, Pair, Star, Table, enumerate_values
from monadlaw.registry import default_registry

e0, e1 = Elem(0), Elem(1)


# ---------------------------------------------------------------- parsing


def test_parse_law_without_binders():
    law = parse_law("law Fuse-Shift: forall . fuse ∘ shift == id")
    assert law.name == "Fuse-Shift"
    assert law.binders == ()
    assert law.lhs == Compose(Var("fuse"), Var("shift"))
    assert law.rhs == Var("id")


def test_parse_law_with_binders():
    law = parse_law("law Put-Put: forall s:S, s2:S . put(s) >> put(s2) == put(s2)")
    assert [b for b, _ in law.binders] == ["s", "s2"]
    assert law.lhs == ThenE(App(Var("put"), Var("s")), App(Var("put"), Var("s2")))


def test_ascii_and_unicode_spellings_agree():
    a = parse_law("law A: forall k: X -> M X . \\x. k x >>= unit == k")
    b = parse_law("law A: ∀ k: X → M X . λx. k x >>= unit == k")
    assert a.structure() == b.structure()


def test_dangling_binder_is_a_syntax_error():
    with pytest.raises(LawSyntaxError) as info:
        parse_law("law Bad: forall s:")
    assert info.value.line == 1
    assert info.value.column >= len("law Bad: forall s")
    assert "binder 's'" in str(info.value)


@pytest.mark.parametrize(
    "text",
    [
        "law: forall . id == id",
        "law X forall . id == id",
        "law X: forall . id",
        "law X: forall . (id == id",
        "law X: forall x: M . x == x",
        "@expect maybe\nlaw X: forall . id == id",
    ],
)
def test_malformed_laws_are_rejected(text):
    with pytest.raises(LawSyntaxError):
        parse_law_file(text)


def test_precedence():
    assert parse_expr("f ∘ g ∘ h") == Compose(Var("f"), Compose(Var("g"), Var("h")))
    assert parse_expr("m >>= k >>= j") == BindE(BindE(Var("m"), Var("k")), Var("j"))
    assert parse_expr("f x y") == App(App(Var("f"), Var("x")), Var("y"))
    assert parse_expr("m >>= \\x. k x >> n") == BindE(
        Var("m"), Lam("x", ThenE(App(Var("k"), Var("x")), Var("n")))
    )
    assert parse_expr("(a, *)") == PairE(Var("a"), StarE())


def test_type_syntax():
    assert parse_type("X -> Y -> Z") == TyApp("Fn", (TyName("X"), TyApp("Fn", (TyName("Y"), TyName("Z")))))
    assert parse_type("M (X * W)") == TyApp("M", (TyApp("Prod", (TyName("X"), TyName("W"))),))
    for text in ("X + Y * Z", "(X + Y) * Z", "F(E, M X)", "M F(E, X)", "End W", "J X -> N (R -> X)"):
        assert parse_type(print_type(parse_type(text))) == parse_type(text)


# ---------------------------------------------------------------- round trips

NAMES = ["f", "g", "k", "x", "y'", "unit", "put", "fuse"]
TYPES = st.recursive(
    st.sampled_from([TyName(n) for n in ("X", "Y", "S", "W", "Unit")]),
    lambda sub: st.one_of(
        st.builds(lambda a, b: TyApp("Fn", (a, b)), sub, sub),
        st.builds(lambda a, b: TyApp("Prod", (a, b)), sub, sub),
        st.builds(lambda a, b: TyApp("Sum", (a, b)), sub, sub),
        st.builds(lambda a: TyApp("M", (a,)), sub),
        st.builds(lambda a, b: TyApp("F", (a, b)), sub, sub),
    ),
    max_leaves=5,
)
EXPRS = st.recursive(
    st.one_of(st.sampled_from(NAMES).map(Var), st.just(StarE())),
    lambda sub: st.one_of(
        st.builds(App, sub, sub),
        st.builds(Compose, sub, sub),
        st.builds(BindE, sub, sub),
        st.builds(ThenE, sub, sub),
        st.builds(PairE, sub, sub),
        st.builds(Lam, st.sampled_from(["a", "b"]), sub, st.one_of(st.none(), TYPES)),
        st.builds(Annot, sub, TYPES),
    ),
    max_leaves=12,
)


@settings(max_examples=300, deadline=None)
@given(EXPRS)
def test_print_parse_round_trip_expressions(e):
    assert parse_expr(print_expr(e)) == e


@settings(max_examples=100, deadline=None)
@given(TYPES)
def test_print_parse_round_trip_types(t):
    assert parse_type(print_type(t)) == t


def test_every_registry_law_round_trips():
    for entry in default_registry().all_laws():
        again = parse_law(print_law(entry.law))
        assert again.structure() == entry.law.structure(), entry.name
        assert again.expect == entry.law.expect
        assert again.types == entry.law.types


# ---------------------------------------------------------------- typing


def law(name):
    return default_registry().lookup(name).law


def test_fuse_shift_instance_count():
    t = typecheck_law(law("Fuse-Shift"), "WriterT(Z2).Id")
    assert t.instance_count() == 4  # |Enum2 x Z2|


def test_app_rdr_instance_count():
    t = typecheck_law(law("App-Rdr"), "ReaderBase(r=2, Id)")
    assert t.instance_count() == 4  # |R -> X| = 2^2


def test_put_put_instance_count():
    t = typecheck_law(law("Put-Put"), "StateT(s=2).Id")
    assert t.instance_count() == 4
    assert [b.size for b in t.binders] == [2, 2]


def test_unavailable_primitive():
    with pytest.raises(LawCheckError, match="primitive put unavailable"):
        typecheck_law(law("Put-Put"), "ExceptT(e=2).Id")


def test_type_errors_are_reported():
    bad = parse_law("law Bad: forall s: S . put s == get")
    with pytest.raises(LawCheckError):
        typecheck_law(bad, "StateT(s=2).Id")
    unbound = parse_law("law Bad: forall . frobnicate == id")
    with pytest.raises(LawCheckError, match="frobnicate"):
        typecheck_law(unbound, "StateT(s=2).Id")


def test_type_overrides_change_domains():
    t = typecheck_law(law("Monad-UnitR"), "ExceptT(e=2).Id", {"X": 3})
    assert t.instance_count() == 5  # |E + X| = 2 + 3


def test_effect_inference():
    assert infer_effect(law("Put-Put")) == "state"
    assert infer_effect(law("Fuse-Shift")) == "writer"
    assert infer_effect(law("Monad-UnitL")) is None


def test_every_registry_law_types_on_its_default_stacks():
    reg = default_registry()
    for name in reg.suite_names():
        s = reg.suite(name)
        for entry in reg.laws_in(name):
            for stack in s.stacks:
                typecheck_law(entry.law, stack, effect=s.effect)


# ---------------------------------------------------------------- evaluation


def test_put_put_lhs_value():
    t = typecheck_law(law("Put-Put"), "StateT(s=2).Id")
    assert eval_side(t, "lhs", {"s": e0, "s2": e1}) == Table([Pair(Star, e1), Pair(Star, e1)])


def test_get_put_rhs_value():
    t = typecheck_law(law("Get-Put"), "StateT(s=2).Id")
    assert eval_side(t, "rhs", []) == Table([Pair(Star, e0), Pair(Star, e1)])
    assert eval_side(t, "lhs", []) == eval_side(t, "rhs", [])


def test_function_sides_are_tables():
    t = typecheck_law(law("Fuse-Shift"), "WriterT(Z2).Id")
    lhs = eval_side(t, "lhs", [])
    assert isinstance(lhs, Table) and len(lhs) == 4
    assert lhs == eval_side(t, "rhs", [])


def test_binder_values_are_type_checked():
    t = typecheck_law(law("Put-Put"), "StateT(s=2).Id")
    with pytest.raises(TypeError):
        eval_side(t, "lhs", {"s": Elem(5), "s2": e0})


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_syntactically_equal_sides_evaluate_equal(data):
    src = data.draw(st.sampled_from([
        "law R: forall t: M X, k: X -> M Y . t >>= k == t >>= k",
        "law R: forall s: S . put s >> get == put s >> get",
        "law R: forall h: X -> X . fmap h == fmap h",
    ]))
    stack = data.draw(st.sampled_from(["StateT(s=2).Id", "StateT(s=2).ExceptT(e=2).Id"]))
    t = typecheck_law(parse_law(src), stack, effect="state")
    env = [b.value(data.draw(st.integers(0, b.size - 1))) for b in t.binders]
    assert eval_side(t, "lhs", env) == eval_side(t, "rhs", env)


def test_monad_unit_law_by_hand_on_writer():
    t = typecheck_law(law("Monad-UnitR"), "WriterT(T2).Id")
    assert not t.binders
    inputs = list(enumerate_values(t.ambient.fintype))
    assert len(inputs) == 8  # Enum2 x T2
    assert eval_side(t, "lhs", []) == Table(inputs)
