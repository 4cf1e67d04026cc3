"""Command-line front end.

Every subcommand is a thin wrapper over the library: parsing and type
checking (`parse`, `typecheck`), evaluation (`eval`), the equational theory
on types (`nf`, `iso`, `coerce`), the game model (`arena`, `arena-iso`,
`play-check`, `compose`, `check-iso`, `extract`), and the curated example
suite (`fixtures`).

Exit codes follow one convention throughout: 0 for success or a positive
verdict, 1 for a negative verdict (not isomorphic, diverged, illegal play,
a failing fixture), 2 for errors (bad usage, parse or type errors, malformed
input).  All machine-readable output goes through --json and carries a
"format" field naming its schema; ordering inside JSON documents is
deterministic so outputs diff cleanly across runs.

Strategy-valued subcommands (`compose`, `check-iso`, `extract`) name their
strategies with small specs:

    copycat:TYPE[:i]    copycat on component i of the arena family of TYPE
    cell:TYPE           the reference cell playing over var[TYPE]
    involution          the order-sensitive branch-swapping strategy
    hotel-ltr[:N]       the index-shuffling pair on the two countable
    hotel-rtl[:N]       arenas, with number answers truncated at N
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields, is_dataclass

from .arena import (ArenaError, arena_to_dot, arena_to_json, family_iso_decide,
                    interpret_type, move_id)
from .extract import ExtractError, extract_path_iso
from .interp import evaluate
from .isotheory import iso_decide, nf_type, normalize, synthesize_coercions
from .plays import (is_alternating, is_justified, is_legal, is_pre_zigzag,
                    is_well_bracketed, is_zigzag, play_from_json)
from .strategy import (StrategyError, cell, compose, copycat, equals_up_to,
                       involution_i, prop4_strategies, strategy_to_json)
from .syntax import (ParseError, TypeCheckError, TypingContext, parse_term,
                     parse_type, term_to_str, type_to_str, typecheck)

# ------------------------------------------------------------------ helpers


class CliError(Exception):
    """A user-facing error: message to stderr, exit status 2."""


def _ast_json(node):
    """Generic AST encoder: dataclass -> {"node": name, fields...}."""
    if is_dataclass(node) and not isinstance(node, type):
        doc = {"node": type(node).__name__}
        for f in fields(node):
            doc[f.name] = _ast_json(getattr(node, f.name))
        return doc
    if isinstance(node, (list, tuple)):
        return [_ast_json(x) for x in node]
    return node


def _emit(doc) -> None:
    print(json.dumps(doc, indent=2))


def _parse_type(src: str):
    try:
        return parse_type(src)
    except ParseError as e:
        raise CliError(f"type syntax: {e}") from e


def _parse_term(src: str):
    try:
        return parse_term(src)
    except ParseError as e:
        raise CliError(f"term syntax: {e}") from e


def _context(args) -> TypingContext:
    ctx = TypingContext(lang=args.lang)
    for spec in getattr(args, "var", None) or []:
        name, eq, ty = spec.partition("=")
        if not eq or not name:
            raise CliError(f"--var expects NAME=TYPE, got {spec!r}")
        ctx = ctx.bind(name.strip(), _parse_type(ty))
    return ctx


def _component(fam, index: int, what: str):
    if not 0 <= index < len(fam):
        raise CliError(f"{what}: component {index} out of range "
                       f"(family has {len(fam)})")
    return fam[index]


def _strategy(spec: str, args):
    """Build a named strategy from a `name[:param...]` spec.

    Returns (strategy, nat_cap): nat_cap bounds the number moves the
    strategy is meant to be compared on (the arenas of the hotel pair are
    truncated wider than that so translated indices stay in range, and the
    padding moves are not part of the claim)."""
    head, _, rest = spec.partition(":")
    if head == "copycat":
        src, _, idx = rest.rpartition(":")
        if src and idx.isdigit():
            ty, i = src, int(idx)
        else:
            ty, i = rest, 0
        if not ty:
            raise CliError("copycat needs a type: copycat:TYPE[:i]")
        fam = interpret_type(_parse_type(ty))
        return copycat(_component(fam, i, spec)), None
    if head == "cell":
        if not rest:
            raise CliError("cell needs a type: cell:TYPE")
        return cell(interpret_type(_parse_type(rest))), None
    if head == "involution":
        return involution_i(), None
    if head in ("hotel-ltr", "hotel-rtl"):
        nat = int(rest) if rest else 4
        ltr, rtl = prop4_strategies(nat_bound=nat, length_bound=args.bound)
        return (ltr if head == "hotel-ltr" else rtl), nat
    raise CliError(f"unknown strategy {spec!r} (see --help for the registry)")


def _nat_filter(*caps):
    """O-move filter keeping number components within the tightest cap."""
    live = [c for c in caps if c is not None]
    if not live:
        return None
    cap = min(live)

    def ok(m):
        core = m[1]
        return len(core) == 1 or not isinstance(core[1], int) \
            or core[1] <= cap
    return ok


# -------------------------------------------------------------- subcommands


def cmd_parse(args) -> int:
    m = _parse_term(args.term)
    if args.json:
        _emit({"format": "term/1", "pretty": term_to_str(m),
               "ast": _ast_json(m)})
    else:
        print(term_to_str(m))
    return 0


def cmd_typecheck(args) -> int:
    m = _parse_term(args.term)
    try:
        t = typecheck(_context(args), m)
    except TypeCheckError as e:
        print(f"ill-typed: {e}", file=sys.stderr)
        return 1
    if args.json:
        _emit({"format": "type/1", "type": type_to_str(t),
               "ast": _ast_json(t)})
    else:
        print(type_to_str(t))
    return 0


def cmd_eval(args) -> int:
    m = _parse_term(args.term)
    typecheck(_context(args), m)  # evaluation is for well-typed terms only
    r = evaluate(m, fuel=args.fuel, lang=args.lang)
    if args.json:
        _emit({"format": "eval/1", "status": r.status,
               "value": term_to_str(r.value) if r.value is not None else None,
               "steps": r.steps, "message": r.message,
               "store": {str(loc): term_to_str(v)
                         for loc, v in sorted(r.store.items())}})
    elif r.status == "value":
        print(term_to_str(r.value))
    else:
        print(f"{r.status}: {r.message}" if r.message else r.status)
    return 0 if r.status == "value" else 1


def cmd_nf(args) -> int:
    t = nf_type(normalize(_parse_type(args.type)))
    if args.json:
        _emit({"format": "type/1", "type": type_to_str(t),
               "ast": _ast_json(t)})
    else:
        print(type_to_str(t))
    return 0


def cmd_iso(args) -> int:
    ok = iso_decide(_parse_type(args.left), _parse_type(args.right))
    if args.json:
        _emit({"format": "decision/1", "route": "theory", "isomorphic": ok})
    else:
        print("isomorphic" if ok else "not isomorphic")
    return 0 if ok else 1


def cmd_coerce(args) -> int:
    a, b = _parse_type(args.left), _parse_type(args.right)
    pair = synthesize_coercions(a, b)
    if pair is None:
        if args.json:
            _emit({"format": "coercions/1", "isomorphic": False})
        else:
            print("not isomorphic", file=sys.stderr)
        return 1
    fwd, bwd = pair
    if args.json:
        _emit({"format": "coercions/1", "isomorphic": True,
               "forward": term_to_str(fwd), "backward": term_to_str(bwd)})
    else:
        print(f"forward  (x : {type_to_str(a)}):  {term_to_str(fwd)}")
        print(f"backward (y : {type_to_str(b)}):  {term_to_str(bwd)}")
    return 0


def cmd_arena(args) -> int:
    fam = interpret_type(_parse_type(args.type))
    if args.dot:
        print("\n".join(arena_to_dot(a) for a in fam))
    elif args.json:
        _emit({"format": "arena-family/1",
               "components": [json.loads(arena_to_json(a)) for a in fam]})
    else:
        print(f"family of {len(fam)} component(s)")
        for i, a in enumerate(fam):
            qs = sum(1 for k in a.kind.values() if k == "Q")
            print(f"  [{i}] {len(a.owner)} moves "
                  f"({qs} questions), {len(a.initials)} initial")
    return 0


def cmd_arena_iso(args) -> int:
    fa = interpret_type(_parse_type(args.left))
    fb = interpret_type(_parse_type(args.right))
    res = family_iso_decide(fa, fb)
    if res is None:
        if args.json:
            _emit({"format": "family-iso/1", "isomorphic": False})
        else:
            print("not isomorphic")
        return 1
    bij, wits = res
    if args.json:
        _emit({"format": "family-iso/1", "isomorphic": True,
               "bijection": [list(p) for p in sorted(bij)],
               "witnesses": {str(i): wits[i].to_json(args.depth)
                             for i, _ in sorted(bij)}})
    else:
        print("isomorphic")
        for i, j in sorted(bij):
            w = wits[i]
            mapped = ", ".join(f"{move_id(x)} -> {move_id(y)}"
                               for x, y in w.pairs)
            print(f"  component {i} ~ {j}: {mapped or 'empty'}")
    return 0


def cmd_play_check(args) -> int:
    fam = interpret_type(_parse_type(args.type))
    a = _component(fam, args.component, "play-check")
    text = sys.stdin.read() if args.file in (None, "-") \
        else open(args.file, encoding="utf-8").read()
    try:
        s = play_from_json(text, a)
    except (json.JSONDecodeError, KeyError, TypeError, ArenaError) as e:
        raise CliError(f"bad play: {e}") from e
    checks = {"justified": is_justified(a, s),
              "alternating": is_alternating(a, s),
              "well-bracketed": is_well_bracketed(a, s),
              "legal": is_legal(a, s),
              "pre-zigzag": is_pre_zigzag(s),
              "zigzag": is_zigzag(s)}
    if args.json:
        _emit({"format": "play-check/1", "length": len(s), **checks})
    else:
        for name, ok in checks.items():
            print(f"{name:<14} {'yes' if ok else 'no'}")
    return 0 if checks["legal"] else 1


def cmd_compose(args) -> int:
    sigma, cap1 = _strategy(args.sigma, args)
    tau, cap2 = _strategy(args.tau, args)
    st = compose(sigma, tau, args.bound, o_filter=_nat_filter(cap1, cap2))
    if args.json:
        print(strategy_to_json(st, args.bound))
    else:
        n = len(st.materialize(args.bound).plays)
        print(f"{st.name}: {n} plays up to length {args.bound}")
    return 0


def cmd_check_iso(args) -> int:
    sigma, cap1 = _strategy(args.sigma, args)
    tau, cap2 = _strategy(args.tau, args)
    flt = _nat_filter(cap1, cap2)
    st = compose(sigma, tau, args.bound, o_filter=flt)
    ts = compose(tau, sigma, args.bound, o_filter=flt)
    fwd = equals_up_to(st, copycat(sigma.dom), args.bound, o_filter=flt)
    bwd = equals_up_to(ts, copycat(tau.dom), args.bound, o_filter=flt)
    if args.json:
        _emit({"format": "strategy-iso/1", "bound": args.bound,
               "forward_copycat": fwd, "backward_copycat": bwd,
               "isomorphism": fwd and bwd})
    else:
        print(f"{args.sigma} ; {args.tau} = copycat: {'yes' if fwd else 'no'}")
        print(f"{args.tau} ; {args.sigma} = copycat: {'yes' if bwd else 'no'}")
    return 0 if fwd and bwd else 1


def cmd_extract(args) -> int:
    sigma, _cap = _strategy(args.sigma, args)
    try:
        pi = extract_path_iso(sigma, depth=args.depth)
    except ExtractError as e:
        if args.json:
            _emit({"format": "pathiso/1", "error": str(e)})
        else:
            print(f"no path isomorphism: {e}", file=sys.stderr)
        return 1
    if args.json:
        _emit(pi.to_json(args.depth))
    else:
        for x, y in pi.pairs:
            print(f"{move_id(x)} -> {move_id(y)}")
    return 0


def cmd_fixtures(args) -> int:
    from .fixtures import fixture_suite
    rows = fixture_suite(fuel=args.fuel, bound=args.bound)
    if args.json:
        _emit({"format": "fixtures/1",
               "results": [{"name": n, "passed": ok, "detail": d}
                           for n, ok, d in rows],
               "all_passed": all(ok for _, ok, _ in rows)})
    else:
        width = max(len(n) for n, _, _ in rows)
        for name, ok, detail in rows:
            tail = f"  ({detail})" if detail else ""
            print(f"{'PASS' if ok else 'FAIL'}  {name:<{width}}{tail}")
    return 0 if all(ok for _, ok, _ in rows) else 1


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lang", choices=("l2", "lnat"), default="l2",
                        help="language mode (default l2; lnat adds numbers)")
    common.add_argument("--fuel", type=int, default=100_000,
                        help="evaluation step budget (default 100000)")
    common.add_argument("--bound", type=int, default=8,
                        help="play length bound for strategy operations")
    common.add_argument("--depth", type=int, default=0,
                        help="witness depth for isomorphism output")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true",
                     help="machine-readable output")
    fmt.add_argument("--dot", action="store_true",
                     help="graphviz output (arena only)")

    p = argparse.ArgumentParser(
        prog="gamiso",
        description="Decide, witness, and verify type isomorphisms for a "
                    "higher-order language with references, both through the "
                    "equational theory and through its game model.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_, **kw):
        sp = sub.add_parser(name, parents=[common], help=help_,
                            description=help_, **kw)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("parse", cmd_parse, "parse a term and print it back")
    sp.add_argument("term")

    sp = add("typecheck", cmd_typecheck, "synthesize the type of a term")
    sp.add_argument("term")
    sp.add_argument("--var", action="append", metavar="NAME=TYPE",
                    help="free-variable binding (repeatable)")

    sp = add("eval", cmd_eval, "run a term; exit 0 value, 1 diverged/stuck")
    sp.add_argument("term")
    sp.add_argument("--var", action="append", metavar="NAME=TYPE",
                    help=argparse.SUPPRESS)

    sp = add("nf", cmd_nf, "print the normal form of a type")
    sp.add_argument("type")

    sp = add("iso", cmd_iso, "decide isomorphism via the equational theory")
    sp.add_argument("left")
    sp.add_argument("right")

    sp = add("coerce", cmd_coerce, "print mutually inverse coercion terms")
    sp.add_argument("left")
    sp.add_argument("right")

    sp = add("arena", cmd_arena, "interpret a type as an arena family")
    sp.add_argument("type")

    sp = add("arena-iso", cmd_arena_iso,
             "decide isomorphism via the game model, with witnesses")
    sp.add_argument("left")
    sp.add_argument("right")

    sp = add("play-check", cmd_play_check,
             "check a play (JSON from FILE or stdin) against a type's arena")
    sp.add_argument("type")
    sp.add_argument("file", nargs="?",
                    help="play JSON file ('-' or omitted: stdin)")
    sp.add_argument("--component", type=int, default=0,
                    help="arena family component (default 0)")

    sp = add("compose", cmd_compose, "compose two named strategies")
    sp.add_argument("sigma")
    sp.add_argument("tau")

    sp = add("check-iso", cmd_check_iso,
             "check two named strategies compose to copycat both ways")
    sp.add_argument("sigma")
    sp.add_argument("tau")

    sp = add("extract", cmd_extract,
             "extract the path isomorphism of a named strategy")
    sp.add_argument("sigma")

    sp = add("fixtures", cmd_fixtures,
             "run the curated example suite and print a pass/fail table")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ParseError, TypeCheckError, ArenaError, StrategyError,
            ExtractError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
