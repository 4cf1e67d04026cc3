"""Small-step evaluator: values, effects, evaluation order, failure modes."""

import pytest

from gamiso.interp import converges, evaluate
from gamiso.syntax import BoolLit, NatLit, parse_term, term_to_str


def run(src, fuel=100_000, lang="l2"):
    return evaluate(parse_term(src), fuel=fuel, lang=lang)


def value_of(src, fuel=100_000, lang="l2"):
    r = run(src, fuel, lang)
    assert r.status == "value", (r.status, r.message)
    return term_to_str(r.value)


# ------------------------------------------------------------------ values

@pytest.mark.parametrize("src, want", [
    ("skip", "skip"),
    ("true", "true"),
    ("if false then true else false", "false"),
    ("fst <true, skip>", "true"),
    ("snd <true, skip>", "skip"),
    ("(fun x: bool -> if x then false else true) true", "false"),
    ("let <a, b> = <true, skip> in a", "true"),
])
def test_pure_values(src, want):
    assert value_of(src) == want


def test_lambda_bodies_are_not_evaluated():
    from gamiso.syntax import Lam
    r = run("fun u: unit -> bot[unit]")
    assert r.status == "value" and isinstance(r.value, Lam)


def test_store_write_read():
    assert value_of("new r := true in (r := false; !r)") == "false"


def test_uninitialized_cell_can_be_written_first():
    assert value_of("new r: bool in (r := true; !r)") == "true"


def test_reading_uninitialized_cell_is_stuck():
    r = run("new r: bool in !r")
    assert r.status == "stuck"
    assert "uninitialized" in r.message


def test_store_survives_in_result():
    r = run("new r := true in r := false")
    assert r.status == "value"
    assert r.store == {0: BoolLit(False)}


# --------------------------------------------------------- evaluation order

def test_pairs_evaluate_left_to_right():
    # the right component sees the left component's write
    assert value_of("new a := true in <a := false, !a>") == "<skip, false>"


def test_application_evaluates_function_before_argument():
    src = """
    new a := true in
    (if !a then (fun x: bool -> x) else bot[bool -> bool]) (a := false; !a)
    """
    assert value_of(src) == "false"


def test_assignment_evaluates_target_before_value():
    # the target cell is chosen before the value's write lands
    src = ("new a := true in new b := true in "
           "((if !a then a else b) := (a := false; false)); <!a, !b>")
    assert value_of(src) == "<false, true>"


# ---------------------------------------------------------------- bad variables

def test_mkvar_routes_reads_and_writes_through_methods():
    src = """
    new c := true in
    let v = mkvar (fun b: bool -> c := b) (fun u: unit -> !c) in
    v := false; !v
    """
    assert value_of(src) == "false"


def test_mkvar_read_can_ignore_writes():
    src = """
    let v = mkvar (fun b: bool -> skip) (fun u: unit -> true) in
    v := false; !v
    """
    assert value_of(src) == "true"


# ------------------------------------------------------------------ looping

def test_while_loop_terminates_on_condition():
    src = "new r := true in (while !r do r := false); !r"
    assert value_of(src) == "false"


@pytest.mark.parametrize("src", [
    "while true do skip",
    "bot[unit]",
    "Y (fun f: unit -> unit -> fun u: unit -> f u) skip",
])
def test_divergence_reports_fuel_exhaustion(src):
    r = run(src, fuel=2_000)
    assert r.status == "diverged"


def test_fuel_is_the_only_limit():
    # same loop, enough fuel: converges
    src = "new r := true in (while !r do r := false)"
    assert run(src, fuel=60).status == "diverged"
    assert run(src, fuel=150).status == "value"
    assert run("while true do skip", fuel=10_000).status == "diverged"


def test_converges_helper():
    assert converges(parse_term("skip"))
    assert not converges(parse_term("bot[unit]"), fuel=500)


# ------------------------------------------------------------------- lnat

@pytest.mark.parametrize("src, want", [
    ("1 + 2 * 3", "7"),
    ("(1 + 2) * 3", "9"),
    ("3 - 5", "0"),           # subtraction truncates at zero
    ("10 - 3 - 4", "3"),
    ("4 = 4", "true"),
    ("4 = 5", "false"),
    ("div 17 5", "<3, 2>"),
    ("let <q, r> = div 9 3 in q + r", "3"),
])
def test_arithmetic(src, want):
    assert value_of(src, lang="lnat") == want


def test_division_by_zero_is_stuck():
    r = run("div 1 0", lang="lnat")
    assert r.status == "stuck"
    assert "zero" in r.message


def test_recursion_via_y():
    src = """
    Y (fun f: nat -> nat -> fun n: nat ->
         if n = 0 then 1 else n * f (n - 1)) 5
    """
    assert value_of(src, lang="lnat") == "120"


def test_while_accumulator():
    src = """
    new i := 5 in new acc := 0 in
    (while (if !i = 0 then false else true) do
       (acc := !acc + !i; i := !i - 1));
    !acc
    """
    assert value_of(src, lang="lnat") == "15"


def test_step_count_is_reported():
    r = run("skip")
    assert r.steps >= 0
    r2 = run("(fun x: bool -> x) true")
    assert r2.steps > r.steps


def test_nat_literals_are_values():
    r = run("42", lang="lnat")
    assert r.value == NatLit(42)
