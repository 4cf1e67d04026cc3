"""Types, terms, parser, printer, typechecker and desugarer for the reference language.

Two language modes share one AST:

  l2    unit, bool, products, arrows, higher-order references (var[A])
  lnat  l2 plus nat: numerals, + - * (monus), div (returns a <quotient, remainder>
        pair), = on naturals, and let bindings in the surface syntax

Concrete syntax, loosest to tightest:

  ';'  sequencing (right associative; first component must have type unit)
  open forms: fun x: T -> M | let x = M in N | let <x, y> = M in N
              | new x := M in N | new x: T in N | if M then N1 else N2
              | while M do N
  ':=' assignment (right operand may be an open form)
  '='  nat equality
  '+' '-' then '*'
  application (left associative)
  prefix items: !M, fst M, snd M, mkvar M N, div M N, Y M  (bind one item each)
  atoms: x, skip, true, false, numerals, <M, N>, new[T], bot[T], (M)

Bodies of fun/let/new-in extend through ';'; if/while branches stop at ';'
(parenthesize sequenced branches). Types: '*' binds tighter than '->', '->' is
right associative, 'var[T]' and parens are atoms. Location literals are runtime
values only; the parser rejects them.
"""

from __future__ import annotations

from dataclasses import dataclass, field


# ---------------------------------------------------------------- types

class TypeExpr:
    """Base class for type expressions."""

    __slots__ = ()

    def __str__(self) -> str:
        return type_to_str(self)


@dataclass(frozen=True, slots=True)
class TUnit(TypeExpr):
    pass


@dataclass(frozen=True, slots=True)
class TBool(TypeExpr):
    pass


@dataclass(frozen=True, slots=True)
class TNat(TypeExpr):
    pass


@dataclass(frozen=True, slots=True)
class TProd(TypeExpr):
    left: TypeExpr
    right: TypeExpr


@dataclass(frozen=True, slots=True)
class TArrow(TypeExpr):
    dom: TypeExpr
    cod: TypeExpr


@dataclass(frozen=True, slots=True)
class TRef(TypeExpr):
    """var[A]: an assignable reference holding values of type A."""

    payload: TypeExpr


UNIT = TUnit()
BOOL = TBool()
NAT = TNat()


def type_size(t: TypeExpr) -> int:
    """Number of AST nodes; unit and bool count 1, var adds 1."""
    match t:
        case TUnit() | TBool() | TNat():
            return 1
        case TRef(a):
            return 1 + type_size(a)
        case TProd(a, b) | TArrow(a, b):
            return 1 + type_size(a) + type_size(b)
    raise TypeError(f"not a type: {t!r}")


# ---------------------------------------------------------------- terms

class TermExpr:
    __slots__ = ()

    def __str__(self) -> str:
        return term_to_str(self)


@dataclass(frozen=True, slots=True)
class Var(TermExpr):
    name: str


@dataclass(frozen=True, slots=True)
class Lam(TermExpr):
    name: str
    ty: TypeExpr
    body: TermExpr


@dataclass(frozen=True, slots=True)
class App(TermExpr):
    fn: TermExpr
    arg: TermExpr


@dataclass(frozen=True, slots=True)
class Pair(TermExpr):
    left: TermExpr
    right: TermExpr


@dataclass(frozen=True, slots=True)
class Fst(TermExpr):
    body: TermExpr


@dataclass(frozen=True, slots=True)
class Snd(TermExpr):
    body: TermExpr


@dataclass(frozen=True, slots=True)
class Skip(TermExpr):
    pass


@dataclass(frozen=True, slots=True)
class BoolLit(TermExpr):
    value: bool


@dataclass(frozen=True, slots=True)
class If(TermExpr):
    cond: TermExpr
    then: TermExpr
    els: TermExpr


@dataclass(frozen=True, slots=True)
class NewRef(TermExpr):
    """new[T]: allocate a fresh reference cell for payload type T."""

    ty: TypeExpr


@dataclass(frozen=True, slots=True)
class Assign(TermExpr):
    ref: TermExpr
    value: TermExpr


@dataclass(frozen=True, slots=True)
class Deref(TermExpr):
    ref: TermExpr


@dataclass(frozen=True, slots=True)
class MkVar(TermExpr):
    """mkvar W R: a bad variable with write method W : A -> unit, read R : unit -> A."""

    write: TermExpr
    read: TermExpr


@dataclass(frozen=True, slots=True)
class Loc(TermExpr):
    """Runtime store location. Never produced by the parser."""

    index: int


@dataclass(frozen=True, slots=True)
class NatLit(TermExpr):
    value: int


@dataclass(frozen=True, slots=True)
class Prim(TermExpr):
    """Binary nat primitive: '+', '-', '*', '='."""

    op: str
    left: TermExpr
    right: TermExpr


@dataclass(frozen=True, slots=True)
class DivMod(TermExpr):
    """div M N: <quotient, remainder> of M by N."""

    num: TermExpr
    den: TermExpr


# ------- surface forms removed by desugar

@dataclass(frozen=True, slots=True)
class Seq(TermExpr):
    first: TermExpr
    second: TermExpr


@dataclass(frozen=True, slots=True)
class Let(TermExpr):
    name: str
    rhs: TermExpr
    body: TermExpr


@dataclass(frozen=True, slots=True)
class LetPair(TermExpr):
    name1: str
    name2: str
    rhs: TermExpr
    body: TermExpr


@dataclass(frozen=True, slots=True)
class NewIn(TermExpr):
    """new x: T in N, or new x := M in N (payload type inferred from M)."""

    name: str
    ty: TypeExpr | None
    init: TermExpr | None
    body: TermExpr


@dataclass(frozen=True, slots=True)
class While(TermExpr):
    cond: TermExpr
    body: TermExpr


@dataclass(frozen=True, slots=True)
class YComb(TermExpr):
    """Y M: fixed point of M : (A -> B) -> (A -> B), built from a reference."""

    body: TermExpr


@dataclass(frozen=True, slots=True)
class Bot(TermExpr):
    """bot[T]: the diverging term at type T."""

    ty: TypeExpr


SKIP = Skip()
TRUE = BoolLit(True)
FALSE = BoolLit(False)


# ---------------------------------------------------------------- tokenizer

_KEYWORDS = {
    "fun", "let", "in", "if", "then", "else", "new", "mkvar", "fst", "snd",
    "skip", "true", "false", "unit", "bool", "nat", "var", "while", "do",
    "div", "bot", "Y",
}

_SYMBOLS = ("->", ":=", "(", ")", "[", "]", "<", ">", ",", ";", ":",
            "!", "*", "+", "-", "=", "#")


class ParseError(ValueError):
    pass


def _tokenize(src: str) -> list[tuple[str, str]]:
    toks: list[tuple[str, str]] = []
    i, n = 0, len(src)
    while i < n:
        c = src[i]
        if c.isspace():
            i += 1
            continue
        if c == "#" and i + 1 < n and src[i + 1].isdigit():
            raise ParseError("location literals (#k) are runtime values, not source syntax")
        if c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] in "_'"):
                j += 1
            word = src[i:j]
            toks.append(("kw" if word in _KEYWORDS else "ident", word))
            i = j
            continue
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            toks.append(("num", src[i:j]))
            i = j
            continue
        for sym in _SYMBOLS:
            if src.startswith(sym, i):
                toks.append(("sym", sym))
                i += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {c!r} at offset {i}")
    toks.append(("eof", ""))
    return toks


# ---------------------------------------------------------------- parser

class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.pos = 0

    def peek(self, ahead: int = 0) -> tuple[str, str]:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> tuple[str, str]:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind: str, text: str | None = None) -> str:
        k, v = self.next()
        if k != kind or (text is not None and v != text):
            want = text if text is not None else kind
            raise ParseError(f"expected {want!r}, got {v!r}")
        return v

    def at(self, kind: str, text: str) -> bool:
        k, v = self.peek()
        return k == kind and v == text

    def eat(self, kind: str, text: str) -> bool:
        if self.at(kind, text):
            self.next()
            return True
        return False

    # ---- types

    def type_(self) -> TypeExpr:
        # In `fun x: T -> M` the binder's type ends at the first '->' whose
        # right side is not a type, so arrow types parse greedily and rewind.
        left = self.type_prod()
        if self.at("sym", "->"):
            save = self.pos
            self.next()
            try:
                return TArrow(left, self.type_())
            except ParseError:
                self.pos = save
        return left

    def type_prod(self) -> TypeExpr:
        left = self.type_atom()
        while self.eat("sym", "*"):
            left = TProd(left, self.type_atom())
        return left

    def type_atom(self) -> TypeExpr:
        k, v = self.next()
        if k == "kw" and v == "unit":
            return UNIT
        if k == "kw" and v == "bool":
            return BOOL
        if k == "kw" and v == "nat":
            return NAT
        if k == "kw" and v == "var":
            self.expect("sym", "[")
            t = self.type_()
            self.expect("sym", "]")
            return TRef(t)
        if k == "sym" and v == "(":
            t = self.type_()
            self.expect("sym", ")")
            return t
        raise ParseError(f"expected a type, got {v!r}")

    # ---- terms

    def term(self) -> TermExpr:
        return self.seq()

    def seq(self) -> TermExpr:
        t = self.open_()
        if self.eat("sym", ";"):
            return Seq(t, self.seq())
        return t

    def open_(self) -> TermExpr:
        k, v = self.peek()
        if k == "kw" and v == "fun":
            self.next()
            name = self.expect("ident")
            self.expect("sym", ":")
            ty = self.type_()
            self.expect("sym", "->")
            return Lam(name, ty, self.seq())
        if k == "kw" and v == "let":
            self.next()
            if self.eat("sym", "<"):
                n1 = self.expect("ident")
                self.expect("sym", ",")
                n2 = self.expect("ident")
                self.expect("sym", ">")
                self.expect("sym", "=")
                rhs = self.open_()
                self.expect("kw", "in")
                return LetPair(n1, n2, rhs, self.seq())
            name = self.expect("ident")
            self.expect("sym", "=")
            rhs = self.open_()
            self.expect("kw", "in")
            return Let(name, rhs, self.seq())
        if k == "kw" and v == "new" and self.peek(1)[0] == "ident":
            self.next()
            name = self.expect("ident")
            ty = None
            init = None
            if self.eat("sym", ":"):
                ty = self.type_()
            if self.eat("sym", ":="):
                init = self.open_()
            if ty is None and init is None:
                raise ParseError("new binder needs a type annotation or an initializer")
            self.expect("kw", "in")
            return NewIn(name, ty, init, self.seq())
        if k == "kw" and v == "if":
            self.next()
            cond = self.open_()
            self.expect("kw", "then")
            then = self.open_()
            self.expect("kw", "else")
            return If(cond, then, self.open_())
        if k == "kw" and v == "while":
            self.next()
            cond = self.open_()
            self.expect("kw", "do")
            return While(cond, self.open_())
        return self.assign()

    def assign(self) -> TermExpr:
        left = self.cmp()
        if self.eat("sym", ":="):
            return Assign(left, self.open_())
        return left

    def cmp(self) -> TermExpr:
        left = self.add()
        if self.eat("sym", "="):
            return Prim("=", left, self.add())
        return left

    def add(self) -> TermExpr:
        left = self.mul()
        while True:
            if self.eat("sym", "+"):
                left = Prim("+", left, self.mul())
            elif self.eat("sym", "-"):
                left = Prim("-", left, self.mul())
            else:
                return left

    def mul(self) -> TermExpr:
        left = self.app()
        while self.eat("sym", "*"):
            left = Prim("*", left, self.app())
        return left

    def _starts_item(self) -> bool:
        k, v = self.peek()
        if k in ("ident", "num"):
            return True
        if k == "sym" and v in ("(", "<", "!"):
            return True
        if k == "kw":
            if v in ("fst", "snd", "mkvar", "div", "Y", "bot", "skip", "true", "false"):
                return True
            if v == "new" and self.peek(1) == ("sym", "["):
                return True
        return False

    def app(self) -> TermExpr:
        t = self.item()
        while self._starts_item():
            t = App(t, self.item())
        return t

    def item(self) -> TermExpr:
        k, v = self.peek()
        if k == "sym" and v == "!":
            self.next()
            return Deref(self.item())
        if k == "kw" and v == "fst":
            self.next()
            return Fst(self.item())
        if k == "kw" and v == "snd":
            self.next()
            return Snd(self.item())
        if k == "kw" and v == "mkvar":
            self.next()
            w = self.item()
            return MkVar(w, self.item())
        if k == "kw" and v == "div":
            self.next()
            num = self.item()
            return DivMod(num, self.item())
        if k == "kw" and v == "Y":
            self.next()
            return YComb(self.item())
        return self.atom()

    def atom(self) -> TermExpr:
        k, v = self.next()
        if k == "ident":
            return Var(v)
        if k == "num":
            return NatLit(int(v))
        if k == "kw" and v == "skip":
            return SKIP
        if k == "kw" and v == "true":
            return TRUE
        if k == "kw" and v == "false":
            return FALSE
        if k == "kw" and v in ("new", "bot"):
            self.expect("sym", "[")
            ty = self.type_()
            self.expect("sym", "]")
            return NewRef(ty) if v == "new" else Bot(ty)
        if k == "sym" and v == "(":
            t = self.term()
            self.expect("sym", ")")
            return t
        if k == "sym" and v == "<":
            left = self.term()
            self.expect("sym", ",")
            right = self.term()
            self.expect("sym", ">")
            return Pair(left, right)
        raise ParseError(f"expected a term, got {v!r}")


def parse_term(src: str) -> TermExpr:
    p = _Parser(src)
    t = p.term()
    p.expect("eof")
    return t


def parse_type(src: str) -> TypeExpr:
    p = _Parser(src)
    t = p.type_()
    p.expect("eof")
    return t


# ---------------------------------------------------------------- printer

def type_to_str(t: TypeExpr, prec: int = 0) -> str:
    # prec 0: arrow position, 1: product operand, 2: atom
    match t:
        case TUnit():
            return "unit"
        case TBool():
            return "bool"
        case TNat():
            return "nat"
        case TRef(a):
            return f"var[{type_to_str(a, 0)}]"
        case TArrow(a, b):
            s = f"{type_to_str(a, 1)} -> {type_to_str(b, 0)}"
            return f"({s})" if prec > 0 else s
        case TProd(a, b):
            s = f"{type_to_str(a, 1)} * {type_to_str(b, 2)}"
            return f"({s})" if prec > 1 else s
    raise TypeError(f"not a type: {t!r}")


def _wrap(s: str, level: int, prec: int) -> str:
    return f"({s})" if level < prec else s


def term_to_str(m: TermExpr, prec: int = 0) -> str:
    """Render with minimal parentheses; parse_term(term_to_str(m)) == m."""
    match m:
        case Var(x):
            return x
        case NatLit(n):
            return str(n)
        case Skip():
            return "skip"
        case BoolLit(b):
            return "true" if b else "false"
        case Loc(i):
            return f"#{i}"
        case NewRef(t):
            return f"new[{type_to_str(t)}]"
        case Bot(t):
            return f"bot[{type_to_str(t)}]"
        case Pair(a, b):
            return f"<{term_to_str(a, 0)}, {term_to_str(b, 0)}>"
        case Seq(a, b):
            return _wrap(f"{term_to_str(a, 1)}; {term_to_str(b, 0)}", 0, prec)
        case Lam(x, t, b):
            return _wrap(f"fun {x}: {type_to_str(t)} -> {term_to_str(b, 0)}", 1, prec)
        case Let(x, r, b):
            return _wrap(f"let {x} = {term_to_str(r, 1)} in {term_to_str(b, 0)}", 1, prec)
        case LetPair(x, y, r, b):
            return _wrap(f"let <{x}, {y}> = {term_to_str(r, 1)} in {term_to_str(b, 0)}", 1, prec)
        case NewIn(x, t, i, b):
            s = f"new {x}"
            if t is not None:
                s += f": {type_to_str(t)}"
            if i is not None:
                s += f" := {term_to_str(i, 1)}"
            return _wrap(f"{s} in {term_to_str(b, 0)}", 1, prec)
        case If(c, a, b):
            s = f"if {term_to_str(c, 1)} then {term_to_str(a, 1)} else {term_to_str(b, 1)}"
            return _wrap(s, 1, prec)
        case While(c, b):
            return _wrap(f"while {term_to_str(c, 1)} do {term_to_str(b, 1)}", 1, prec)
        case Assign(l, r):
            return _wrap(f"{term_to_str(l, 3)} := {term_to_str(r, 1)}", 2, prec)
        case Prim("=", a, b):
            return _wrap(f"{term_to_str(a, 4)} = {term_to_str(b, 4)}", 3, prec)
        case Prim(("+" | "-") as op, a, b):
            return _wrap(f"{term_to_str(a, 4)} {op} {term_to_str(b, 5)}", 4, prec)
        case Prim("*", a, b):
            return _wrap(f"{term_to_str(a, 5)} * {term_to_str(b, 6)}", 5, prec)
        case App(f, a):
            return _wrap(f"{term_to_str(f, 6)} {term_to_str(a, 7)}", 6, prec)
        case Deref(r):
            return _wrap(f"!{term_to_str(r, 7)}", 7, prec)
        case Fst(b):
            return _wrap(f"fst {term_to_str(b, 7)}", 7, prec)
        case Snd(b):
            return _wrap(f"snd {term_to_str(b, 7)}", 7, prec)
        case MkVar(w, r):
            return _wrap(f"mkvar {term_to_str(w, 7)} {term_to_str(r, 7)}", 7, prec)
        case DivMod(a, b):
            return _wrap(f"div {term_to_str(a, 7)} {term_to_str(b, 7)}", 7, prec)
        case YComb(b):
            return _wrap(f"Y {term_to_str(b, 7)}", 7, prec)
    raise TypeError(f"not a term: {m!r}")


# ---------------------------------------------------------------- free vars and substitution

def free_vars(m: TermExpr) -> frozenset[str]:
    # Substitution plugs one value object into every occurrence of the
    # variable, so evaluated terms are DAGs; memoising on node identity keeps
    # this linear in distinct subterms instead of exponential in sharing depth.
    memo: dict[int, frozenset[str]] = {}

    def go(t: TermExpr) -> frozenset[str]:
        got = memo.get(id(t))
        if got is not None:
            return got
        out: frozenset[str]
        match t:
            case Var(x):
                out = frozenset((x,))
            case Lam(x, _, b):
                out = go(b) - {x}
            case Let(x, r, b):
                out = go(r) | (go(b) - {x})
            case LetPair(x, y, r, b):
                out = go(r) | (go(b) - {x, y})
            case NewIn(x, _, i, b):
                out = go(b) - {x}
                if i is not None:
                    out |= go(i)
            case _:
                out = frozenset()
                for sub in _subterms(t):
                    out |= go(sub)
        memo[id(t)] = out
        return out

    return go(m)


def _subterms(m: TermExpr) -> tuple[TermExpr, ...]:
    match m:
        case App(a, b) | Pair(a, b) | Assign(a, b) | MkVar(a, b) | Seq(a, b) \
                | DivMod(a, b) | Prim(_, a, b) | While(a, b):
            return (a, b)
        case Fst(a) | Snd(a) | Deref(a) | YComb(a):
            return (a,)
        case If(c, a, b):
            return (c, a, b)
        case _:
            return ()


_FRESH = [0]


def fresh_name(base: str = "x") -> str:
    _FRESH[0] += 1
    return f"{base}_{_FRESH[0]}"


def subst(m: TermExpr, name: str, value: TermExpr) -> TermExpr:
    """Capture-avoiding substitution of value for the free variable name in m."""
    fv_value = free_vars(value)
    # Identity memo: shared subterms rewrite once and stay shared (see free_vars).
    memo: dict[int, TermExpr] = {}

    def go(t: TermExpr) -> TermExpr:
        got = memo.get(id(t))
        if got is not None:
            return got
        out = _go(t)
        memo[id(t)] = out
        return out

    def _go(t: TermExpr) -> TermExpr:
        match t:
            case Var(x):
                return value if x == name else t
            case Lam(x, ty, b):
                if x == name:
                    return t
                if x in fv_value:
                    x2 = fresh_name(x)
                    b = subst(b, x, Var(x2))
                    return Lam(x2, ty, go(b))
                return Lam(x, ty, go(b))
            case Let(x, r, b):
                r2 = go(r)
                if x == name:
                    return Let(x, r2, b)
                if x in fv_value:
                    x2 = fresh_name(x)
                    b = subst(b, x, Var(x2))
                    return Let(x2, r2, go(b))
                return Let(x, r2, go(b))
            case LetPair(x, y, r, b):
                r2 = go(r)
                if name in (x, y):
                    return LetPair(x, y, r2, b)
                if x in fv_value or y in fv_value:
                    x2, y2 = fresh_name(x), fresh_name(y)
                    b = subst(subst(b, x, Var(x2)), y, Var(y2))
                    return LetPair(x2, y2, r2, go(b))
                return LetPair(x, y, r2, go(b))
            case NewIn(x, ty, i, b):
                i2 = go(i) if i is not None else None
                if x == name:
                    return NewIn(x, ty, i2, b)
                if x in fv_value:
                    x2 = fresh_name(x)
                    b = subst(b, x, Var(x2))
                    return NewIn(x2, ty, i2, go(b))
                return NewIn(x, ty, i2, go(b))
            case App(f, a):
                return App(go(f), go(a))
            case Pair(a, b):
                return Pair(go(a), go(b))
            case Fst(b):
                return Fst(go(b))
            case Snd(b):
                return Snd(go(b))
            case If(c, a, b):
                return If(go(c), go(a), go(b))
            case Assign(l, r):
                return Assign(go(l), go(r))
            case Deref(r):
                return Deref(go(r))
            case MkVar(w, r):
                return MkVar(go(w), go(r))
            case Prim(op, a, b):
                return Prim(op, go(a), go(b))
            case DivMod(a, b):
                return DivMod(go(a), go(b))
            case Seq(a, b):
                return Seq(go(a), go(b))
            case While(c, b):
                return While(go(c), go(b))
            case YComb(b):
                return YComb(go(b))
            case _:
                return t

    return go(m)


# ---------------------------------------------------------------- typechecker

class TypeCheckError(TypeError):
    pass


@dataclass
class TypingContext:
    """Variable bindings plus store location types (locations appear at runtime only)."""

    vars: dict[str, TypeExpr] = field(default_factory=dict)
    locs: dict[int, TypeExpr] = field(default_factory=dict)
    lang: str = "l2"

    def bind(self, name: str, ty: TypeExpr) -> "TypingContext":
        v = dict(self.vars)
        v[name] = ty
        return TypingContext(v, self.locs, self.lang)


def _expect_ty(got: TypeExpr, want: TypeExpr, where: str) -> None:
    if got != want:
        raise TypeCheckError(f"{where}: expected {want}, got {got}")


def _check_mode(ctx: TypingContext, what: str) -> None:
    if ctx.lang != "lnat":
        raise TypeCheckError(f"{what} requires lang=lnat")


def _scan_type_mode(ctx: TypingContext, t: TypeExpr) -> None:
    match t:
        case TNat():
            _check_mode(ctx, "type nat")
        case TRef(a):
            _scan_type_mode(ctx, a)
        case TProd(a, b) | TArrow(a, b):
            _scan_type_mode(ctx, a)
            _scan_type_mode(ctx, b)
        case _:
            pass


def typecheck(ctx: TypingContext, m: TermExpr) -> TypeExpr:
    """Synthesize the type of m, or raise TypeCheckError."""
    match m:
        case Var(x):
            if x not in ctx.vars:
                raise TypeCheckError(f"unbound variable {x}")
            return ctx.vars[x]
        case Loc(i):
            if i not in ctx.locs:
                raise TypeCheckError(f"unknown location #{i}")
            return TRef(ctx.locs[i])
        case Skip():
            return UNIT
        case BoolLit(_):
            return BOOL
        case NatLit(_):
            _check_mode(ctx, "numeral")
            return NAT
        case Lam(x, t, b):
            _scan_type_mode(ctx, t)
            return TArrow(t, typecheck(ctx.bind(x, t), b))
        case App(f, a):
            tf = typecheck(ctx, f)
            if not isinstance(tf, TArrow):
                raise TypeCheckError(f"applying a non-function of type {tf}")
            _expect_ty(typecheck(ctx, a), tf.dom, "application argument")
            return tf.cod
        case Pair(a, b):
            return TProd(typecheck(ctx, a), typecheck(ctx, b))
        case Fst(b):
            t = typecheck(ctx, b)
            if not isinstance(t, TProd):
                raise TypeCheckError(f"fst of non-product type {t}")
            return t.left
        case Snd(b):
            t = typecheck(ctx, b)
            if not isinstance(t, TProd):
                raise TypeCheckError(f"snd of non-product type {t}")
            return t.right
        case If(c, a, b):
            _expect_ty(typecheck(ctx, c), BOOL, "if condition")
            ta = typecheck(ctx, a)
            _expect_ty(typecheck(ctx, b), ta, "else branch")
            return ta
        case NewRef(t):
            _scan_type_mode(ctx, t)
            return TRef(t)
        case Assign(l, r):
            tl = typecheck(ctx, l)
            if not isinstance(tl, TRef):
                raise TypeCheckError(f"assignment to non-reference type {tl}")
            _expect_ty(typecheck(ctx, r), tl.payload, "assigned value")
            return UNIT
        case Deref(r):
            t = typecheck(ctx, r)
            if not isinstance(t, TRef):
                raise TypeCheckError(f"dereference of non-reference type {t}")
            return t.payload
        case MkVar(w, r):
            tw = typecheck(ctx, w)
            tr = typecheck(ctx, r)
            if not (isinstance(tw, TArrow) and tw.cod == UNIT):
                raise TypeCheckError(f"mkvar write method has type {tw}, want A -> unit")
            a = tw.dom
            if tr != TArrow(UNIT, a):
                raise TypeCheckError(f"mkvar read method has type {tr}, want unit -> {a}")
            return TRef(a)
        case Prim(op, a, b):
            _check_mode(ctx, f"primitive {op}")
            _expect_ty(typecheck(ctx, a), NAT, f"left of {op}")
            _expect_ty(typecheck(ctx, b), NAT, f"right of {op}")
            return BOOL if op == "=" else NAT
        case DivMod(a, b):
            _check_mode(ctx, "div")
            _expect_ty(typecheck(ctx, a), NAT, "div numerator")
            _expect_ty(typecheck(ctx, b), NAT, "div denominator")
            return TProd(NAT, NAT)
        case Seq(a, b):
            _expect_ty(typecheck(ctx, a), UNIT, "left of ';'")
            return typecheck(ctx, b)
        case Let(x, r, b):
            return typecheck(ctx.bind(x, typecheck(ctx, r)), b)
        case LetPair(x, y, r, b):
            t = typecheck(ctx, r)
            if not isinstance(t, TProd):
                raise TypeCheckError(f"let-pair of non-product type {t}")
            return typecheck(ctx.bind(x, t.left).bind(y, t.right), b)
        case NewIn(x, t, i, b):
            if i is not None:
                ti = typecheck(ctx, i)
                if t is not None and t != ti:
                    raise TypeCheckError(f"new {x}: initializer has type {ti}, annotation says {t}")
                t = ti
            assert t is not None
            _scan_type_mode(ctx, t)
            return typecheck(ctx.bind(x, TRef(t)), b)
        case While(c, b):
            _expect_ty(typecheck(ctx, c), BOOL, "while condition")
            _expect_ty(typecheck(ctx, b), UNIT, "while body")
            return UNIT
        case YComb(b):
            t = typecheck(ctx, b)
            match t:
                case TArrow(TArrow(a1, b1), TArrow(a2, b2)) if a1 == a2 and b1 == b2:
                    return TArrow(a1, b1)
            raise TypeCheckError(f"Y needs an argument of type (A -> B) -> (A -> B), got {t}")
        case Bot(t):
            _scan_type_mode(ctx, t)
            return t
    raise TypeCheckError(f"cannot type {m!r}")


# ---------------------------------------------------------------- desugar

def desugar(m: TermExpr, ctx: TypingContext | None = None) -> TermExpr:
    """Expand ';', let, new-in, while, Y and bot into the core calculus.

    The input must typecheck (let and initialized new binders need the type of
    their right-hand side, so desugaring runs the checker on subterms).
    """
    if ctx is None:
        ctx = TypingContext()

    def go(t: TermExpr, c: TypingContext) -> TermExpr:
        match t:
            case Seq(a, b):
                d = fresh_name("_seq")
                return App(Lam(d, UNIT, go(b, c)), go(a, c))
            case Let(x, r, b):
                tr = typecheck(c, r)
                return App(Lam(x, tr, go(b, c.bind(x, tr))), go(r, c))
            case LetPair(x, y, r, b):
                tr = typecheck(c, r)
                assert isinstance(tr, TProd)
                p = fresh_name("_p")
                b2 = subst(subst(b, x, Fst(Var(p))), y, Snd(Var(p)))
                return App(Lam(p, tr, go(b2, c.bind(p, tr))), go(r, c))
            case NewIn(x, ty, init, b):
                a = typecheck(c, init) if init is not None else ty
                assert a is not None
                c2 = c.bind(x, TRef(a))
                body = go(b, c2)
                if init is not None:
                    d = fresh_name("_init")
                    body = App(Lam(d, UNIT, body), Assign(Var(x), go(init, c)))
                return App(Lam(x, TRef(a), body), NewRef(a))
            case While(cond, body):
                w, d = fresh_name("_loop"), fresh_name("_d")
                loop = Lam(w, TArrow(UNIT, UNIT),
                           Lam(d, UNIT,
                               If(cond, Seq(body, App(Var(w), SKIP)), SKIP)))
                return go(App(YComb(loop), SKIP), c)
            case YComb(b):
                tb = typecheck(c, b)
                assert isinstance(tb, TArrow) and isinstance(tb.dom, TArrow)
                ab = tb.dom
                f, y, arg = fresh_name("_f"), fresh_name("_y"), fresh_name("_a")
                inner = NewIn(y, ab, None,
                              Seq(Assign(Var(y),
                                         Lam(arg, ab.dom,
                                             App(App(Var(f), Deref(Var(y))), Var(arg)))),
                                  Deref(Var(y))))
                return go(App(Lam(f, tb, inner), b), c)
            case Bot(ty):
                z, u = fresh_name("_z"), fresh_name("_u")
                ft = TArrow(UNIT, ty)
                body = Seq(Assign(Var(z), Lam(u, UNIT, App(Deref(Var(z)), Var(u)))),
                           App(Deref(Var(z)), SKIP))
                return go(App(Lam(z, TRef(ft), body), NewRef(ft)), c)
            case Lam(x, ty, b):
                return Lam(x, ty, go(b, c.bind(x, ty)))
            case App(f, a):
                return App(go(f, c), go(a, c))
            case Pair(a, b):
                return Pair(go(a, c), go(b, c))
            case Fst(b):
                return Fst(go(b, c))
            case Snd(b):
                return Snd(go(b, c))
            case If(cc, a, b):
                return If(go(cc, c), go(a, c), go(b, c))
            case Assign(l, r):
                return Assign(go(l, c), go(r, c))
            case Deref(r):
                return Deref(go(r, c))
            case MkVar(w, r):
                return MkVar(go(w, c), go(r, c))
            case Prim(op, a, b):
                return Prim(op, go(a, c), go(b, c))
            case DivMod(a, b):
                return DivMod(go(a, c), go(b, c))
            case _:
                return t

    return go(m, ctx)


def is_core(m: TermExpr) -> bool:
    """True if m contains no surface-only forms."""
    match m:
        case Seq(_, _) | Let(_, _, _) | LetPair(_, _, _, _) | NewIn(_, _, _, _) \
                | While(_, _) | YComb(_) | Bot(_):
            return False
        case Lam(_, _, b) | Fst(b) | Snd(b) | Deref(b):
            return is_core(b)
        case App(a, b) | Pair(a, b) | Assign(a, b) | MkVar(a, b) | Prim(_, a, b) | DivMod(a, b):
            return is_core(a) and is_core(b)
        case If(c, a, b):
            return is_core(c) and is_core(a) and is_core(b)
        case _:
            return True
