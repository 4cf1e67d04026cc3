"""Fixture terms, random argument/observer generation, the curated suite."""

import random

import pytest

from gamiso.fixtures import (BRANCH_SWAP_TYPE, HOTEL_DST_TYPE, HOTEL_SRC_TYPE,
                             branch_swap_term, context_battery, fixture_suite,
                             gen_argument, hotel_terms, observers, round_trip,
                             typecheck_fixture)
from gamiso.interp import observational_test
from gamiso.syntax import (TypingContext, Var, parse_term, parse_type,
                           typecheck)

from conftest import rand_type


# ------------------------------------------------------------ fixture terms

def test_branch_swap_term_type():
    t = typecheck_fixture(branch_swap_term(), {"f": BRANCH_SWAP_TYPE},
                          BRANCH_SWAP_TYPE, "l2")
    assert t == parse_type(BRANCH_SWAP_TYPE)


def test_hotel_terms_types():
    m1, m2 = hotel_terms()
    typecheck_fixture(m1, {"f": HOTEL_SRC_TYPE}, HOTEL_DST_TYPE, "lnat")
    typecheck_fixture(m2, {"f": HOTEL_DST_TYPE}, HOTEL_SRC_TYPE, "lnat")


def test_typecheck_fixture_rejects_wrong_expectation():
    with pytest.raises(TypeError):
        typecheck_fixture(parse_term("skip"), {}, "bool", "l2")


def test_round_trip_shape():
    dst = parse_type("bool")
    lhs, rhs = round_trip(Var("x"), Var("y"), dst, "x", "y")
    assert rhs == Var("x")
    ctx = TypingContext({"x": parse_type("bool")})
    assert typecheck(ctx, lhs) == parse_type("bool")


def test_round_trip_avoids_binder_collision():
    dst = parse_type("bool")
    lhs, _ = round_trip(Var("y"), Var("y"), dst, "y", "y")
    ctx = TypingContext({"y": parse_type("bool")})
    assert typecheck(ctx, lhs) == parse_type("bool")


# ----------------------------------------------------- random term generation

@pytest.mark.parametrize("lang", ["l2", "lnat"])
def test_generated_arguments_are_closed_and_well_typed(lang):
    rng = random.Random(21)
    ctx = TypingContext(lang=lang)
    for _ in range(120):
        t = rand_type(rng, 7, lang)
        arg = gen_argument(t, rng, lang=lang)
        assert typecheck(ctx, arg) == t


@pytest.mark.parametrize("lang", ["l2", "lnat"])
def test_observers_build_unit_typed_closing_contexts(lang):
    rng = random.Random(22)
    unit = parse_type("unit")
    for _ in range(80):
        t = rand_type(rng, 6, lang)
        for obs in observers(t, rng, lang=lang):
            ctx = TypingContext(lang=lang).bind("hole", t)
            assert typecheck(ctx, obs(Var("hole"))) == unit


def test_battery_contexts_typecheck_when_plugged():
    rng = random.Random(23)
    t = parse_type(BRANCH_SWAP_TYPE)
    ctxs = context_battery(t, rng, 6, free=("f", t))
    m = branch_swap_term()
    ctx = TypingContext(lang="l2")
    for c in ctxs:
        assert typecheck(ctx, c.build(m)) == parse_type("unit")


# ------------------------------------------------------- battery sensitivity

def test_battery_distinguishes_ground_values():
    rng = random.Random(24)
    ctxs = context_battery(parse_type("bool"), rng, 10)
    w = observational_test(parse_term("true"), parse_term("false"), ctxs)
    assert w is not None


def test_battery_distinguishes_swap_from_identity():
    rng = random.Random(25)
    t = parse_type(BRANCH_SWAP_TYPE)
    swap_of_f = parse_term(
        "fun g: bool -> unit -> f (fun b: bool -> "
        "g (if b then false else true))")
    ident_of_f = parse_term("fun g: bool -> unit -> f g")
    ctxs = context_battery(t, rng, 25, free=("f", t))
    w = observational_test(swap_of_f, ident_of_f, ctxs)
    assert w is not None


def test_battery_accepts_equal_terms():
    rng = random.Random(26)
    t = parse_type(BRANCH_SWAP_TYPE)
    m = branch_swap_term()
    ctxs = context_battery(t, rng, 10, free=("f", t))
    assert observational_test(m, m, ctxs) is None


def test_branch_swap_round_trips_against_the_identity():
    rng = random.Random(27)
    t = parse_type(BRANCH_SWAP_TYPE)
    m = branch_swap_term()
    n = branch_swap_term()          # the swap is its own inverse
    n = parse_term(  # rename its free var to y for the round-trip shape
        "new r := true in fun g: bool -> unit -> "
        "y (fun b: bool -> if !r then (r := false; g b) "
        "else g (if b then false else true))")
    lhs, rhs = round_trip(m, n, t, "f", "y")
    ctxs = context_battery(t, rng, 12, free=("f", t))
    assert observational_test(lhs, rhs, ctxs) is None


# ------------------------------------------------------------- curated suite

def test_fixture_suite_all_pass():
    rows = fixture_suite(bound=8)
    assert len(rows) == 7
    for name, ok, detail in rows:
        assert ok, (name, detail)
