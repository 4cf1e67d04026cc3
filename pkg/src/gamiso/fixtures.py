"""Term-level fixtures and the observational context battery.

Two reference programs ship with the library:

  * `branch_swap_term` — the store-backed involution on
    ``(bool -> unit) -> unit``: it forwards its argument's callback but
    negates the boolean on every call after the first, using a one-shot
    flag cell.  Its round-trip with itself is observationally the
    identity, while the term itself is not.

  * `hotel_terms` — the mutually inverse coercions between
    ``(nat -> unit) -> (nat -> unit) -> unit`` and
    ``(nat -> unit) -> (unit -> unit) -> unit`` in nat mode.  Each fresh
    ``unit -> unit`` argument on one side absorbs index 0 of a fresh
    ``nat -> unit`` copy on the other, the remaining indices re-enumerated
    by round count; a cell of type ``var[nat -> ...]`` keeps the arguments
    of earlier rounds addressable by round number.

The battery builds closing contexts for a hole of a given type: the hole
(or the value bound to its one free variable) is probed by type-directed
observers, with arguments that may diverge at chosen inputs, count calls
through a private cell, or trip after a while — enough to catch coercions
that drop, duplicate or reorder calls.  Convergence is the only observable.
"""

import random

from .interp import ContextTemplate, observational_test
from .syntax import (App, Assign, BoolLit, Bot, Deref, Fst, If, Lam, Let,
                     NatLit, NewIn, Pair, Prim, Seq, Snd, TArrow, TBool,
                     TNat, TProd, TRef, TUnit, TermExpr, TypeExpr,
                     TypingContext, Var, parse_term, parse_type, subst,
                     typecheck, SKIP, TRUE, FALSE)

UNIT = TUnit()
BOOL = TBool()
NAT = TNat()


# ------------------------------------------------------------ fixture terms

BRANCH_SWAP_SRC = """
new r := true in
fun g: bool -> unit ->
  f (fun b: bool ->
       if !r then (r := false; g b) else g (if b then false else true))
"""

BRANCH_SWAP_TYPE = "(bool -> unit) -> unit"


def branch_swap_term() -> TermExpr:
    """The involution on (bool -> unit) -> unit, free in f of that type."""
    return parse_term(BRANCH_SWAP_SRC)


HOTEL_LTR_SRC = """
new count := 0 in
new func := (fun n: nat -> bot[unit -> unit]) in
fun g: nat -> unit ->
  let x = f (fun n: nat -> g (n * (!count + 1))) in
  fun h: unit -> unit ->
    count := !count + 1;
    let c = !count in
    func := (let fprev = !func in
             fun n: nat -> if n = !count then h else fprev n);
    x (fun n: nat ->
         if n = 0 then !func c skip
         else g ((n - 1) * (!count + 1) + c))
"""

HOTEL_RTL_SRC = """
new count := 0 in
new func := (fun n: nat -> bot[nat -> unit]) in
fun g: nat -> unit ->
  let x = f (fun n: nat ->
               let <q, r> = div n (!count + 1) in
               if r = 0 then g q else !func r (q + 1)) in
  fun h: nat -> unit ->
    count := !count + 1;
    func := (let fprev = !func in
             fun n: nat -> if n = !count then h else fprev n);
    let c = !count in
    x (fun u: unit -> !func c 0)
"""

HOTEL_SRC_TYPE = "(nat -> unit) -> (nat -> unit) -> unit"
HOTEL_DST_TYPE = "(nat -> unit) -> (unit -> unit) -> unit"


def hotel_terms() -> tuple[TermExpr, TermExpr]:
    """The two coercions, each free in f: ltr maps the all-nat type to the
    mixed one, rtl maps it back."""
    return parse_term(HOTEL_LTR_SRC), parse_term(HOTEL_RTL_SRC)


def round_trip(m: TermExpr, n: TermExpr, dst: TypeExpr, var: str = "x",
               nvar: str = "y") -> tuple[TermExpr, TermExpr]:
    """The pair compared by a coercion round-trip test: (fun y -> N)(M)
    against plain `var`, both free in `var` of the source type.  m is free
    in `var`, n in `nvar`; a closing battery decides the rest."""
    bind = "y" if var != "y" else "y0"
    body = n if nvar == bind else subst(n, nvar, Var(bind))
    return App(Lam(bind, dst, body), m), Var(var)


def typecheck_fixture(m: TermExpr, free: dict[str, str],
                      expected: str, lang: str) -> TypeExpr:
    """Type a fixture term under its free-variable context and check the
    result against the expected concrete type."""
    ctx = TypingContext({x: parse_type(t) for x, t in free.items()},
                        lang=lang)
    got = typecheck(ctx, m)
    want = parse_type(expected)
    if got != want:
        raise TypeError(f"fixture has type {got}, wanted {want}")
    return got


# ------------------------------------------------------- argument generation

def gen_argument(t: TypeExpr, rng: random.Random, depth: int = 0,
                 lang: str = "l2") -> TermExpr:
    """A closed term evaluating to a value of type t.

    Ground types draw small literals; pairs recurse; references are
    fresh-written cells; arrows draw from constant, input-trapped and
    call-counting shapes so that a probed function can tell apart how often
    and with which values it is called."""
    if isinstance(t, TUnit):
        return SKIP
    if isinstance(t, TBool):
        return BoolLit(rng.random() < 0.5)
    if isinstance(t, TNat):
        return NatLit(rng.randrange(8))
    if isinstance(t, TProd):
        return Pair(gen_argument(t.left, rng, depth, lang),
                    gen_argument(t.right, rng, depth, lang))
    if isinstance(t, TRef):
        cell = "c%d" % rng.randrange(10_000)
        return NewIn(cell, t.payload,
                     gen_argument(t.payload, rng, depth, lang), Var(cell))
    if isinstance(t, TArrow):
        x = "a%d" % depth
        body_src, body_tgt = t.dom, t.cod
        styles = ["const", "trap", "count"] if depth < 3 else ["const"]
        if depth < 3 and _has_probe(body_src):
            styles += ["use", "use"]
        style = rng.choice(styles)
        if style == "use":
            # call the (function- or cell-typed) parameter and observe it
            o = rng.choice(observers(body_src, rng, depth=depth + 1,
                                     lang=lang))
            return Lam(x, body_src,
                       Seq(o(Var(x)),
                           gen_argument(body_tgt, rng, depth + 1, lang)))
        if style == "const":
            return Lam(x, body_src,
                       gen_argument(body_tgt, rng, depth + 1, lang))
        if style == "trap":
            # diverge when the input matches a chosen trigger
            trig = _trigger(body_src, Var(x), rng)
            return Lam(x, body_src,
                       If(trig, Bot(body_tgt),
                          gen_argument(body_tgt, rng, depth + 1, lang)))
        cell = "k%d" % depth
        result = gen_argument(body_tgt, rng, depth + 1, lang)
        if lang == "lnat":
            # diverge at the limit-th call, whatever the input
            limit = rng.randrange(1, 4)
            body = If(Prim("=", Deref(Var(cell)), NatLit(limit)),
                      Bot(body_tgt),
                      Seq(Assign(Var(cell), Prim("+", Deref(Var(cell)),
                                                 NatLit(1))),
                          result))
            return NewIn(cell, None, NatLit(0), Lam(x, body_src, body))
        # one-shot: the second call diverges
        body = If(Deref(Var(cell)),
                  Seq(Assign(Var(cell), FALSE), result),
                  Bot(body_tgt))
        return NewIn(cell, None, TRUE, Lam(x, body_src, body))
    raise TypeError(f"cannot generate a value of {t}")


def _has_probe(t: TypeExpr) -> bool:
    """Whether a value of type t can be exercised (called or written)."""
    if isinstance(t, (TArrow, TRef)):
        return True
    if isinstance(t, TProd):
        return _has_probe(t.left) or _has_probe(t.right)
    return False


def _trigger(t: TypeExpr, probe: TermExpr, rng: random.Random) -> TermExpr:
    """A boolean term over `probe` of type t that is sometimes true."""
    if isinstance(t, TBool):
        return probe if rng.random() < 0.5 else If(probe, FALSE, TRUE)
    if isinstance(t, TNat):
        return Prim("=", probe, NatLit(rng.randrange(4)))
    if isinstance(t, TProd):
        side, ty = ((Fst(probe), t.left) if rng.random() < 0.5
                    else (Snd(probe), t.right))
        return _trigger(ty, side, rng)
    return FALSE  # unit, arrows, refs: no decidable trigger


# ------------------------------------------------------------- observers

def observers(t: TypeExpr, rng: random.Random, fanout: int = 2,
              depth: int = 0, lang: str = "l2") -> list:
    """Term-with-hole functions: each maps a term of type t to a unit-typed
    term whose convergence reflects part of the value's behaviour."""
    if depth > 4:
        return [lambda m: Let("deep", m, SKIP)]
    if isinstance(t, TUnit):
        return [lambda m: m]
    if isinstance(t, TBool):
        return [lambda m: If(m, SKIP, Bot(UNIT)),
                lambda m: If(m, Bot(UNIT), SKIP)]
    if isinstance(t, TNat):
        ks = rng.sample(range(8), 3)
        return [(lambda k: lambda m: If(Prim("=", m, NatLit(k)), SKIP,
                                        Bot(UNIT)))(k) for k in ks]
    if isinstance(t, TProd):
        ls = observers(t.left, rng, fanout, depth + 1, lang)
        rs = observers(t.right, rng, fanout, depth + 1, lang)
        out = [(lambda o: lambda m: o(Fst(m)))(o) for o in ls]
        out += [(lambda o: lambda m: o(Snd(m)))(o) for o in rs]
        return out
    if isinstance(t, TRef):
        val = gen_argument(t.payload, rng, depth + 1, lang)
        inner = observers(t.payload, rng, fanout, depth + 1, lang)
        return [(lambda o, v: lambda m: Let(
            "r", m, Seq(Assign(Var("r"), v), o(Deref(Var("r"))))))(o, val)
            for o in inner[:fanout]]
    if isinstance(t, TArrow):
        out = []
        res = observers(t.cod, rng, fanout, depth + 1, lang)
        for _ in range(fanout):
            arg = gen_argument(t.dom, rng, depth + 1, lang)
            o = rng.choice(res)
            out.append((lambda a, o: lambda m: o(App(m, a)))(arg, o))
        # call twice through a let, observing both results in order
        arg1 = gen_argument(t.dom, rng, depth + 1, lang)
        arg2 = gen_argument(t.dom, rng, depth + 1, lang)
        o1, o2 = rng.choice(res), rng.choice(res)
        out.append((lambda a1, a2, p, q: lambda m: Let(
            "p", m, Seq(p(App(Var("p"), a1)), q(App(Var("p"), a2)))))(
                arg1, arg2, o1, o2))
        return out
    raise TypeError(f"no observers for {t}")


def context_battery(hole_type: TypeExpr, rng: random.Random,
                    count: int = 20, free: tuple[str, TypeExpr] | None = None,
                    lang: str = "l2") -> list[ContextTemplate]:
    """Closing contexts for terms of hole_type, optionally binding one free
    variable to freshly generated arguments (capture intended)."""
    out = []
    for k in range(count):
        obs = rng.choice(observers(hole_type, rng, lang=lang))
        if free is None:
            out.append(ContextTemplate(f"probe-{k}", obs))
        else:
            name, ft = free
            arg = gen_argument(ft, rng, lang=lang)

            def build(m, obs=obs, arg=arg, name=name, ft=ft):
                return App(Lam(name, ft, obs(m)), arg)

            out.append(ContextTemplate(f"bind-{name}-{k}", build))
    return out


# --------------------------------------------------------- curated suite

def fixture_suite(rng: random.Random | None = None, fuel: int = 100_000,
                  bound: int = 8) -> list[tuple[str, bool, str]]:
    """The curated checks behind the `fixtures` CLI command: each entry is
    (name, passed, detail)."""
    from .arena import interpret_type
    from .isotheory import iso_decide, synthesize_coercions
    from .strategy import (compose, copycat, equals_up_to, involution_arena,
                           involution_i, prop4_strategies)
    rng = rng or random.Random(2025)
    rows = []

    def check(name, fn):
        try:
            ok, detail = fn()
        except Exception as e:  # a fixture failure must not kill the table
            ok, detail = False, f"{type(e).__name__}: {e}"
        rows.append((name, ok, detail))

    def eq_theory():
        pairs = [("bool * A -> B", "(A -> B) * (A -> B)"),
                 ("A * bool -> B", "(A -> B) * (A -> B)"),
                 ("unit * A", "A"),
                 ("A * (B * C)", "(A * B) * C"),
                 ("A * B", "B * A"),
                 ("var[A]", "(A -> unit) * (unit -> A)")]
        inst = {"A": "bool -> unit", "B": "bool", "C": "unit"}
        bad = []
        for l, r in pairs:
            for v, c in inst.items():
                l, r = l.replace(v, f"({c})"), r.replace(v, f"({c})")
            if not iso_decide(parse_type(l), parse_type(r)):
                bad.append(f"{l} vs {r}")
        return not bad, bad and "; ".join(bad) or f"{len(pairs)} equations"

    def swap_term():
        m = branch_swap_term()
        typecheck_fixture(m, {"f": BRANCH_SWAP_TYPE}, BRANCH_SWAP_TYPE, "l2")
        src = parse_type(BRANCH_SWAP_TYPE)
        rt, x = round_trip(m, m, src, "f", "f")
        ctxs = context_battery(src, rng, 10, ("f", src))
        w = observational_test(rt, x, ctxs, fuel)
        return w is None, w.name if w else "10 contexts"

    def swap_game():
        i = involution_i()
        ii = compose(i, i, bound)
        same = equals_up_to(ii, copycat(i.dom), bound)
        diff = not equals_up_to(i, copycat(i.dom), bound)
        return same and diff, f"i;i = copycat, i /= copycat at bound {bound}"

    def arena_match():
        fam = interpret_type(parse_type(BRANCH_SWAP_TYPE))
        if len(fam) != 1:
            return False, f"family of size {len(fam)}"
        a = fam[0]
        (q,) = a.initials
        top = sorted(a.enabled(q))
        kinds = sorted(a.kind[m] for m in top)
        branch_ok = all(
            sorted(a.kind[x] for x in a.enabled(m)) == ["A"]
            for m in top if a.kind[m] == "Q")
        b = involution_arena()
        same = (a.owner == b.owner and a.kind == b.kind
                and a.initials == b.initials and a.enabling == b.enabling)
        ok = kinds == ["A", "Q", "Q"] and branch_ok and same
        return ok, "one root, two branch calls, answers below"

    def hotel_bounded():
        lt, rt_ = prop4_strategies(nat_bound=4, length_bound=bound)

        def ok_move(m):
            core = m[1]
            return len(core) == 1 or not isinstance(core[1], int) \
                or core[1] <= 4
        c1 = compose(lt, rt_, bound, o_filter=ok_move)
        good = equals_up_to(c1, copycat(lt.dom), bound, o_filter=ok_move)
        return good, f"ltr;rtl = copycat at bound {bound}, nat<=4"

    def hotel_terms_check():
        m1, m2 = hotel_terms()
        typecheck_fixture(m1, {"f": HOTEL_SRC_TYPE}, HOTEL_DST_TYPE, "lnat")
        typecheck_fixture(m2, {"f": HOTEL_DST_TYPE}, HOTEL_SRC_TYPE, "lnat")
        src, dst = parse_type(HOTEL_SRC_TYPE), parse_type(HOTEL_DST_TYPE)
        rt, x = round_trip(m1, m2, dst, "f", "f")
        ctxs = context_battery(src, rng, 8, ("f", src), lang="lnat")
        w = observational_test(rt, x, ctxs, fuel * 10, lang="lnat")
        return w is None, w.name if w else "8 contexts"

    def coercion_samples():
        pairs = [("bool * unit", "bool"),
                 ("bool -> bool", "(unit->bool) * (unit->bool)")]
        for a, b in pairs:
            ta, tb = parse_type(a), parse_type(b)
            mn = synthesize_coercions(ta, tb)
            if mn is None:
                return False, f"no coercion {a} ~ {b}"
            rt, x = round_trip(mn[0], mn[1], tb)
            ctxs = context_battery(ta, rng, 8, ("x", ta))
            w = observational_test(rt, x, ctxs, fuel)
            if w is not None:
                return False, f"{a} ~ {b}: {w.name}"
        return True, f"{len(pairs)} round-trips"

    check("theory: structural equations", eq_theory)
    check("branch-swap term round-trip", swap_term)
    check("branch-swap strategy involutive", swap_game)
    check("interpreted arena matches fixture", arena_match)
    check("hotel strategies compose to copycat", hotel_bounded)
    check("hotel terms typecheck + round-trip", hotel_terms_check)
    check("synthesized coercions round-trip", coercion_samples)
    return rows
