"""Call-by-value evaluator with a store.

Evaluation is left-to-right in every construct (so store effects thread in
source order). Implemented as an explicit-stack machine over the core
calculus — substitution-based, one fuel unit per transition — so divergent
terms burn fuel instead of the Python stack.

Reference cells: `new[T]` allocates a fresh, uninitialized location; reading
an unwritten location is stuck. Assignment and dereference also accept bad
variables: `mkvar W R := V` runs W V, `!(mkvar W R)` runs R skip.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .syntax import (
    App, Assign, BoolLit, Bot, Deref, DivMod, Fst, If, Lam, Let, LetPair, Loc,
    MkVar, NatLit, NewIn, NewRef, Pair, Prim, Seq, Skip, Snd, TermExpr,
    TypeExpr, TypingContext, Var, While, YComb, desugar, is_core, subst,
    typecheck, SKIP,
)


def is_value(m: TermExpr) -> bool:
    match m:
        case Skip() | BoolLit(_) | NatLit(_) | Lam(_, _, _) | Loc(_):
            return True
        case Pair(a, b) | MkVar(a, b):
            return is_value(a) and is_value(b)
        case _:
            return False


@dataclass
class EvalResult:
    """Outcome of a bounded evaluation.

    status is 'value' (with value and final store), 'diverged' (fuel ran out),
    or 'stuck' (no rule applies; message says why).
    """

    status: str
    value: TermExpr | None = None
    store: dict[int, TermExpr] = field(default_factory=dict)
    loc_types: dict[int, TypeExpr] = field(default_factory=dict)
    message: str = ""
    steps: int = 0

    def __bool__(self) -> bool:
        return self.status == "value"


class _Stuck(Exception):
    pass


def evaluate(m: TermExpr, fuel: int = 100_000,
             store: dict[int, TermExpr] | None = None,
             loc_types: dict[int, TypeExpr] | None = None,
             lang: str = "l2") -> EvalResult:
    """Evaluate a closed term, spending at most `fuel` machine steps."""
    if not is_core(m):
        m = desugar(m, TypingContext(lang=lang))
    store = dict(store) if store else {}
    loc_types = dict(loc_types) if loc_types else {}
    next_loc = max(loc_types, default=-1) + 1

    frames: list[tuple] = []
    term: TermExpr = m
    value: TermExpr | None = None  # set when going "up"
    steps = 0

    def stuck(msg: str) -> EvalResult:
        return EvalResult("stuck", store=store, loc_types=loc_types,
                          message=msg, steps=steps)

    while True:
        if steps >= fuel:
            return EvalResult("diverged", store=store, loc_types=loc_types, steps=steps)
        steps += 1

        if value is None:
            # going down into `term`
            if is_value(term):
                value = term
                continue
            match term:
                case Var(x):
                    return stuck(f"free variable {x} at runtime")
                case App(f, a):
                    frames.append(("appfn", a))
                    term = f
                case Pair(a, b):
                    frames.append(("pairl", b))
                    term = a
                case Fst(b):
                    frames.append(("fst",))
                    term = b
                case Snd(b):
                    frames.append(("snd",))
                    term = b
                case If(c, a, b):
                    frames.append(("if", a, b))
                    term = c
                case NewRef(t):
                    loc_types[next_loc] = t
                    value = Loc(next_loc)
                    next_loc += 1
                case Assign(l, r):
                    frames.append(("assign1", r))
                    term = l
                case Deref(r):
                    frames.append(("deref",))
                    term = r
                case MkVar(w, r):
                    frames.append(("mkvar1", r))
                    term = w
                case Prim(op, a, b):
                    frames.append(("prim1", op, b))
                    term = a
                case DivMod(a, b):
                    frames.append(("div1", b))
                    term = a
                case Seq(_, _) | Let(_, _, _) | LetPair(_, _, _, _) | NewIn(_, _, _, _) \
                        | While(_, _) | YComb(_) | Bot(_):
                    return stuck(f"surface form reached the machine: {type(term).__name__}")
                case _:
                    return stuck(f"no rule for {term!r}")
            continue

        # going up with `value`
        if not frames:
            return EvalResult("value", value=value, store=store,
                              loc_types=loc_types, steps=steps)
        frame = frames.pop()
        match frame:
            case ("appfn", arg):
                frames.append(("apparg", value))
                term, value = arg, None
            case ("apparg", fn):
                if not isinstance(fn, Lam):
                    return stuck(f"applying a non-function: {fn}")
                term, value = subst(fn.body, fn.name, value), None
            case ("pairl", right):
                frames.append(("pairr", value))
                term, value = right, None
            case ("pairr", left):
                value = Pair(left, value)
            case ("fst",):
                if not isinstance(value, Pair):
                    return stuck(f"fst of a non-pair: {value}")
                value = value.left
            case ("snd",):
                if not isinstance(value, Pair):
                    return stuck(f"snd of a non-pair: {value}")
                value = value.right
            case ("if", a, b):
                if not isinstance(value, BoolLit):
                    return stuck(f"if on a non-boolean: {value}")
                term, value = (a if value.value else b), None
            case ("assign1", rhs):
                frames.append(("assign2", value))
                term, value = rhs, None
            case ("assign2", target):
                match target:
                    case Loc(i):
                        store[i] = value
                        value = SKIP
                    case MkVar(w, _):
                        term, value = App(w, value), None
                    case _:
                        return stuck(f"assignment to a non-reference: {target}")
            case ("deref",):
                match value:
                    case Loc(i):
                        if i not in store:
                            return stuck(f"read of uninitialized location #{i}")
                        value = store[i]
                    case MkVar(_, r):
                        term, value = App(r, SKIP), None
                    case _:
                        return stuck(f"dereference of a non-reference: {value}")
            case ("mkvar1", read):
                frames.append(("mkvar2", value))
                term, value = read, None
            case ("mkvar2", write):
                value = MkVar(write, value)
            case ("prim1", op, right):
                frames.append(("prim2", op, value))
                term, value = right, None
            case ("prim2", op, left):
                if not (isinstance(left, NatLit) and isinstance(value, NatLit)):
                    return stuck(f"{op} on non-numerals: {left}, {value}")
                a, b = left.value, value.value
                match op:
                    case "+":
                        value = NatLit(a + b)
                    case "-":
                        value = NatLit(max(0, a - b))  # monus
                    case "*":
                        value = NatLit(a * b)
                    case "=":
                        value = BoolLit(a == b)
                    case _:
                        return stuck(f"unknown primitive {op}")
            case ("div1", den):
                frames.append(("div2", value))
                term, value = den, None
            case ("div2", num):
                if not (isinstance(num, NatLit) and isinstance(value, NatLit)):
                    return stuck(f"div on non-numerals: {num}, {value}")
                if value.value == 0:
                    return stuck("division by zero")
                q, r = divmod(num.value, value.value)
                value = Pair(NatLit(q), NatLit(r))


def converges(m: TermExpr, fuel: int = 100_000, lang: str = "l2") -> bool:
    return evaluate(m, fuel, lang=lang).status == "value"


# -------------------------------------------------------- observational tests

@dataclass(frozen=True)
class ContextTemplate:
    """A closing context: `build` plugs a term into the hole (binders in the
    template may capture the term's free variables, as contexts do)."""

    name: str
    build: object  # Callable[[TermExpr], TermExpr]

    def __call__(self, m: TermExpr) -> TermExpr:
        return self.build(m)


def observational_test(m: TermExpr, n: TermExpr, contexts, fuel: int = 100_000,
                       lang: str = "l2") -> ContextTemplate | None:
    """Run both terms under each context, comparing convergence only.

    Returns the first context under which exactly one of the two plugged
    terms converges within the fuel, or None when no context distinguishes
    them. A sound refuter of observational equivalence, never a proof.
    Ill-typed plugged contexts are rejected with a TypeCheckError."""
    for c in contexts:
        cm, cn = c.build(m), c.build(n)
        ctx = TypingContext(lang=lang)
        typecheck(ctx, cm)
        typecheck(ctx, cn)
        if converges(cm, fuel, lang) != converges(cn, fuel, lang):
            return c
    return None
