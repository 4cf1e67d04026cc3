"""Equational theory of type isomorphisms, decided via normal forms.

The axioms: products commute and reassociate, unit is a product identity,
a bool argument splits a function into a pair
    (bool * A -> B)  ~  (A -> B) * (A -> B)
and a reference cell is a write/read method pair
    var[A]  ~  (A -> unit) * (unit -> A).

Every type is isomorphic to a normal form

    S ::= bool^n * T        T ::= unit | U1 * ... * Uk        U ::= T -> S

with the U factors in a canonical order; two types are isomorphic iff their
normal forms are equal. `normalize` computes the form, `iso_decide` compares,
and `synthesize_coercions` replays the normalization as a pair of mutually
inverse coercion terms (open terms: x free in the forward direction, y in the
backward one).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache

from .syntax import (
    App, Assign, BOOL, Deref, FALSE, Fst, If, Lam, MkVar, Pair, SKIP,
    Snd, TArrow, TBool, TermExpr, TNat, TProd, TRef, TRUE, TUnit, TypeExpr,
    UNIT, Var, subst,
)


# ---------------------------------------------------------------- normal forms

@dataclass(frozen=True, slots=True)
class UFactor:
    """One factor T -> S of a normal form's product part."""

    arg: tuple["UFactor", ...]     # the T part: a sorted product of UFactors
    res: "NormalForm"


@dataclass(frozen=True, slots=True)
class NormalForm:
    """bool^bools * (product of factors); factors are kept sorted."""

    bools: int
    factors: tuple[UFactor, ...]


def _key_u(u: UFactor) -> tuple:
    return (tuple(_key_u(v) for v in u.arg), _key_s(u.res))


def _key_s(s: NormalForm) -> tuple:
    return (s.bools, tuple(_key_u(u) for u in s.factors))


def _sorted_factors(factors: tuple[UFactor, ...]) -> tuple[UFactor, ...]:
    return tuple(sorted(factors, key=_key_u))


def normalize(t: TypeExpr) -> NormalForm:
    match t:
        case TUnit():
            return NormalForm(0, ())
        case TBool():
            return NormalForm(1, ())
        case TProd(a, b):
            sa, sb = normalize(a), normalize(b)
            return NormalForm(sa.bools + sb.bools,
                              _sorted_factors(sa.factors + sb.factors))
        case TRef(a):
            return normalize(TProd(TArrow(a, UNIT), TArrow(UNIT, a)))
        case TArrow(a, b):
            sa, sb = normalize(a), normalize(b)
            u = UFactor(sa.factors, sb)
            return NormalForm(0, _sorted_factors((u,) * (2 ** sa.bools)))
        case TNat():
            raise ValueError("nat has no normal form in this theory")
    raise TypeError(f"not a type: {t!r}")


def _nest(items: list[TypeExpr]) -> TypeExpr:
    if not items:
        return UNIT
    if len(items) == 1:
        return items[0]
    return TProd(items[0], _nest(items[1:]))


def _reify_t(factors: tuple[UFactor, ...]) -> TypeExpr:
    return _nest([_reify_u(u) for u in factors])


def _reify_u(u: UFactor) -> TypeExpr:
    return TArrow(_reify_t(u.arg), nf_type(u.res))


def nf_type(s: NormalForm) -> TypeExpr:
    """The normal form as an actual type: bools first, right-nested products."""
    return _nest([BOOL] * s.bools + [_reify_u(u) for u in s.factors])


def iso_decide(a: TypeExpr, b: TypeExpr) -> bool:
    return normalize(a) == normalize(b)


# ---------------------------------------------------------------- coercions
#
# A coercion for A ~ B is a pair of open terms: x : A |- m : B and
# y : B |- n : A, mutually inverse up to observational equivalence. Every
# constructor below keeps terms pure at top level (all effects sit under a
# lambda or inside a mkvar method), so one coercion can feed another without
# duplicating or reordering effects. Composition binds the intermediate
# result with a beta redex rather than substituting, which keeps witness
# terms linear in the length of the rewrite chain.

@dataclass(frozen=True, slots=True)
class Coercion:
    src: TypeExpr
    dst: TypeExpr
    m: TermExpr   # x : src |- m : dst
    n: TermExpr   # y : dst |- n : src


X = Var("x")
Y = Var("y")


def _id(t: TypeExpr) -> Coercion:
    return Coercion(t, t, X, Y)


def _is_id(c: Coercion) -> bool:
    return c.m == X and c.n == Y


def _compose(c1: Coercion, c2: Coercion) -> Coercion:
    """c1 : A ~ B and c2 : B ~ C give A ~ C."""
    if c1.dst != c2.src:
        raise ValueError(f"cannot compose through {c1.dst} vs {c2.src}")
    if _is_id(c1):
        return Coercion(c1.src, c2.dst, c2.m, c2.n)
    if _is_id(c2):
        return Coercion(c1.src, c2.dst, c1.m, c1.n)
    return Coercion(c1.src, c2.dst,
                    App(Lam("x", c1.dst, c2.m), c1.m),
                    App(Lam("y", c1.dst, c1.n), c2.n))


def _sym(c: Coercion) -> Coercion:
    return Coercion(c.dst, c.src, subst(c.n, "y", X), subst(c.m, "x", Y))


def _prod_left(c: Coercion, other: TypeExpr) -> Coercion:
    """A ~ B gives A * other ~ B * other."""
    if _is_id(c):
        return _id(TProd(c.src, other))
    return Coercion(TProd(c.src, other), TProd(c.dst, other),
                    Pair(subst(c.m, "x", Fst(X)), Snd(X)),
                    Pair(subst(c.n, "y", Fst(Y)), Snd(Y)))


def _prod_right(c: Coercion, other: TypeExpr) -> Coercion:
    if _is_id(c):
        return _id(TProd(other, c.src))
    return Coercion(TProd(other, c.src), TProd(other, c.dst),
                    Pair(Fst(X), subst(c.m, "x", Snd(X))),
                    Pair(Fst(Y), subst(c.n, "y", Snd(Y))))


def _arrow_cod(c: Coercion, dom: TypeExpr) -> Coercion:
    """A ~ B gives (dom -> A) ~ (dom -> B).

    The call result is let-bound before the body coercion runs: substituting
    the application itself would re-run the callee from every occurrence of
    the subject, once per method invocation when c puts them under a lambda
    or mkvar."""
    if _is_id(c):
        return _id(TArrow(dom, c.src))
    return Coercion(TArrow(dom, c.src), TArrow(dom, c.dst),
                    Lam("a", dom, App(Lam("x", c.src, c.m),
                                      App(X, Var("a")))),
                    Lam("a", dom, App(Lam("y", c.dst, c.n),
                                      App(Y, Var("a")))))


def _arrow_dom(c: Coercion, cod: TypeExpr) -> Coercion:
    """c : A ~ B gives (A -> cod) ~ (B -> cod); contravariant, so each
    direction uses the other half of c."""
    if _is_id(c):
        return _id(TArrow(c.src, cod))
    return Coercion(TArrow(c.src, cod), TArrow(c.dst, cod),
                    Lam("v", c.dst, App(X, subst(c.n, "y", Var("v")))),
                    Lam("v", c.src, App(Y, subst(c.m, "x", Var("v")))))


def _ref_split(a: TypeExpr) -> Coercion:
    """var[A] ~ (A -> unit) * (unit -> A)."""
    return Coercion(
        TRef(a), TProd(TArrow(a, UNIT), TArrow(UNIT, a)),
        Pair(Lam("v", a, Assign(X, Var("v"))), Lam("d", UNIT, Deref(X))),
        MkVar(Fst(Y), Snd(Y)))


def _bool_split(a: TypeExpr, b: TypeExpr) -> Coercion:
    """(bool * A -> B) ~ (A -> B) * (A -> B); first component is the true case."""
    ab = TArrow(a, b)
    m = Pair(Lam("a", a, App(X, Pair(TRUE, Var("a")))),
             Lam("a", a, App(X, Pair(FALSE, Var("a")))))
    n = Lam("p", TProd(BOOL, a),
            If(Fst(Var("p")),
               App(Fst(Y), Snd(Var("p"))),
               App(Snd(Y), Snd(Var("p")))))
    return Coercion(TArrow(TProd(BOOL, a), b), TProd(ab, ab), m, n)


def _flatten(t: TypeExpr) -> list[tuple[tuple[str, ...], TypeExpr]]:
    """Non-product, non-unit leaves of a product tree, with projection paths."""
    match t:
        case TUnit():
            return []
        case TProd(a, b):
            return ([(("fst",) + p, leaf) for p, leaf in _flatten(a)]
                    + [(("snd",) + p, leaf) for p, leaf in _flatten(b)])
        case _:
            return [((), t)]


def _type_key(t: TypeExpr) -> tuple:
    match t:
        case TUnit():
            return (0,)
        case TBool():
            return (1,)
        case TNat():
            return (2,)
        case TProd(a, b):
            return (3, _type_key(a), _type_key(b))
        case TArrow(a, b):
            return (4, _type_key(a), _type_key(b))
        case TRef(a):
            return (5, _type_key(a))
    raise TypeError(f"not a type: {t!r}")


def _project(base: TermExpr, path: tuple[str, ...]) -> TermExpr:
    for step in path:
        base = Fst(base) if step == "fst" else Snd(base)
    return base


def _rebuild(t: TypeExpr, base: TermExpr, here: tuple[str, ...],
             source: dict) -> TermExpr:
    match t:
        case TUnit():
            return SKIP
        case TProd(a, b):
            return Pair(_rebuild(a, base, here + ("fst",), source),
                        _rebuild(b, base, here + ("snd",), source))
        case _:
            return _project(base, source[here])


def _shuffle(p: TypeExpr, q: TypeExpr) -> Coercion:
    """Coercion between two product trees with the same multiset of leaves
    (handles commutativity, reassociation and unit laws in one step)."""
    if p == q:
        return _id(p)
    fp = sorted(_flatten(p), key=lambda e: _type_key(e[1]))
    fq = sorted(_flatten(q), key=lambda e: _type_key(e[1]))
    if [k for _, k in fp] != [k for _, k in fq]:
        raise ValueError(f"product leaves differ: {p} vs {q}")
    q_to_p = {qp: pp for (pp, _), (qp, _) in zip(fp, fq)}
    p_to_q = {pp: qp for qp, pp in q_to_p.items()}
    return Coercion(p, q, _rebuild(q, X, (), q_to_p), _rebuild(p, Y, (), p_to_q))


def _norm_trace(t: TypeExpr) -> tuple[NormalForm, Coercion]:
    """Normalize and collect a coercion t ~ nf_type(normalize(t))."""
    match t:
        case TUnit() | TBool():
            return normalize(t), _id(t)
        case TProd(a, b):
            sa, ca = _norm_trace(a)
            sb, cb = _norm_trace(b)
            s = normalize(t)
            c = _compose(_prod_left(ca, b), _prod_right(cb, nf_type(sa)))
            c = _compose(c, _shuffle(TProd(nf_type(sa), nf_type(sb)), nf_type(s)))
            return s, c
        case TRef(a):
            split = TProd(TArrow(a, UNIT), TArrow(UNIT, a))
            s, c = _norm_trace(split)
            return s, _compose(_ref_split(a), c)
        case TArrow(a, b):
            sa, ca = _norm_trace(a)
            sb, cb = _norm_trace(b)
            nfa = nf_type(sa)
            c = _compose(_arrow_dom(ca, b), _arrow_cod(cb, nfa))
            # peel the bool part of the domain, doubling the function each time
            csplit, tree = _split_bools(sa.bools, sa.factors, nf_type(sb))
            c = _compose(c, csplit)
            s = normalize(t)
            return s, _compose(c, _shuffle(tree, nf_type(s)))
    raise TypeError(f"cannot normalize {t!r}")


def _split_bools(n: int, tfactors: tuple[UFactor, ...],
                 nfb: TypeExpr) -> tuple[Coercion, TypeExpr]:
    """From nf_type(NormalForm(n, tfactors)) -> nfb to a balanced product of
    2^n copies of (T -> nfb); returns the coercion and the resulting type."""
    dom = nf_type(NormalForm(n, tfactors))
    if n == 0:
        return _id(TArrow(dom, nfb)), TArrow(dom, nfb)
    rest = nf_type(NormalForm(n - 1, tfactors))
    c = _arrow_dom(_shuffle(dom, TProd(BOOL, rest)), nfb)
    c = _compose(c, _bool_split(rest, nfb))
    crec, half = _split_bools(n - 1, tfactors, nfb)
    c = _compose(c, _prod_left(crec, TArrow(rest, nfb)))
    c = _compose(c, _prod_right(crec, half))
    return c, TProd(half, half)


def synthesize_coercions(a: TypeExpr, b: TypeExpr) -> tuple[TermExpr, TermExpr] | None:
    """Mutually inverse coercion terms (x : a |- M : b, y : b |- N : a), or
    None if the types are not isomorphic in the theory."""
    sa, ca = _norm_trace(a)
    sb, cb = _norm_trace(b)
    if sa != sb:
        return None
    c = _compose(ca, _sym(cb))
    return c.m, c.n


# ---------------------------------------------------------------- enumeration

@cache
def _types_of_size(k: int) -> tuple[TypeExpr, ...]:
    if k < 1:
        return ()
    if k == 1:
        return (UNIT, BOOL)
    out: list[TypeExpr] = [TRef(t) for t in _types_of_size(k - 1)]
    for i in range(1, k - 1):
        for left in _types_of_size(i):
            for right in _types_of_size(k - 1 - i):
                out.append(TProd(left, right))
                out.append(TArrow(left, right))
    return tuple(out)


def enumerate_types(max_size: int) -> list[TypeExpr]:
    """All types of syntactic size at most max_size, smallest first."""
    out: list[TypeExpr] = []
    for k in range(1, max_size + 1):
        out.extend(_types_of_size(k))
    return out
