"""Arenas: move structures interpreting types, and their isomorphism theory.

An arena is a set of moves labeled Opponent/Player and Question/Answer, a set
of initial moves (always O-questions), and an enabling relation that
alternates O/P. Types denote finite *families* of arenas: one arena per value
shape, e.g. unit is one empty arena and bool is two.

Constructors: product (disjoint union, tags ('p', i, m)), arrow (domain
flips polarity and hangs off the codomain's initials; tags ('L', m) /
('R', m)), and lifted sum (a fresh initial question, one fresh answer per
component, component initials hang off their answer; tags ('q',), ('inj', i),
('s', i, m)). Component moves of a lifted sum keep their polarity — flipping
them would break enabling alternation, since the fresh answers are P-moves.

Two arenas are path-isomorphic when their trees of enabling paths match,
preserving Q/A labels. This is decided by partition refinement with multiset
child keys; witnesses are depth-k tree isomorphisms (KIso) materialized on
demand.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .syntax import TArrow, TBool, TNat, TProd, TRef, TUnit, TypeExpr

Move = tuple


def move_key(m: Move) -> tuple:
    """Total order on structured move tags (mixed ints/strings/tuples)."""
    out = []
    for e in m:
        if isinstance(e, tuple):
            out.append((2, move_key(e)))
        elif isinstance(e, int):
            out.append((0, e))
        else:
            out.append((1, e))
    return tuple(out)


def move_id(m: Move) -> str:
    """Flat dotted identifier: ('p', 1, ('s', 0, ('q',))) -> 'p1.s0.q'."""
    parts: list[str] = []
    t: Move | None = m
    while t is not None:
        if len(t) == 1:
            parts.append(str(t[0]))
            t = None
        elif isinstance(t[1], int):
            parts.append(f"{t[0]}{t[1]}")
            t = t[2] if len(t) > 2 else None
        else:
            parts.append(str(t[0]))
            t = t[1]
    return ".".join(parts)


class ArenaError(ValueError):
    pass


@dataclass(eq=False)
class Arena:
    """Finite arena. owner: move -> 'O'|'P'; kind: move -> 'Q'|'A'."""

    owner: dict[Move, str]
    kind: dict[Move, str]
    initials: frozenset[Move]
    enabling: dict[Move, tuple[Move, ...]]  # enabler -> enabled moves, sorted

    @property
    def moves(self) -> frozenset[Move]:
        return frozenset(self.owner)

    def enabled(self, m: Move) -> tuple[Move, ...]:
        return self.enabling.get(m, ())

    def sorted_initials(self) -> tuple[Move, ...]:
        return tuple(sorted(self.initials, key=move_key))

    def __repr__(self) -> str:
        return f"<Arena {len(self.owner)} moves, {len(self.initials)} initial>"


def make_arena(owner: dict, kind: dict, initials: Iterable[Move],
               enabling: dict[Move, Iterable[Move]]) -> Arena:
    a = Arena(dict(owner), dict(kind), frozenset(initials),
              {m: tuple(sorted(es, key=move_key)) for m, es in enabling.items() if es})
    validate_arena(a)
    return a


def validate_arena(a: Arena) -> None:
    """Raise ArenaError unless a satisfies the arena conditions."""
    enabled_somewhere = set()
    for m in a.initials:
        if m not in a.owner:
            raise ArenaError(f"initial {m} is not a move")
        if (a.owner[m], a.kind[m]) != ("O", "Q"):
            raise ArenaError(f"initial {m} is not an O-question")
    for src, targets in a.enabling.items():
        if src not in a.owner:
            raise ArenaError(f"enabler {src} is not a move")
        for t in targets:
            if t not in a.owner:
                raise ArenaError(f"enabled {t} is not a move")
            if a.owner[src] == a.owner[t]:
                raise ArenaError(f"enabling does not alternate: {src} -> {t}")
            if a.kind[t] == "A" and a.kind[src] != "Q":
                raise ArenaError(f"answer {t} enabled by non-question {src}")
            enabled_somewhere.add(t)
    for m in a.owner:
        if m not in a.initials and m not in enabled_somewhere:
            raise ArenaError(f"move {m} is neither initial nor enabled")
        if a.kind[m] == "Q" and not any(a.kind[x] == "A" for x in a.enabled(m)):
            raise ArenaError(f"question {m} has no answer (arena not complete)")


def reachable_moves(a: Arena) -> frozenset[Move]:
    seen: set[Move] = set()
    frontier = list(a.initials)
    while frontier:
        m = frontier.pop()
        if m in seen:
            continue
        seen.add(m)
        frontier.extend(a.enabled(m))
    return frozenset(seen)


def arity(a: Arena, m: Move) -> int:
    if m not in a.owner:
        raise ArenaError(f"unknown move {m}")
    return len(a.enabled(m))


# ---------------------------------------------------------------- constructors

def empty_arena() -> Arena:
    return Arena({}, {}, frozenset(), {})


def _retag(a: Arena, wrap: Callable[[Move], Move], flip: bool) -> Arena:
    flipped = {"O": "P", "P": "O"}
    owner = {wrap(m): (flipped[o] if flip else o) for m, o in a.owner.items()}
    kind = {wrap(m): k for m, k in a.kind.items()}
    initials = frozenset(wrap(m) for m in a.initials)
    enabling = {wrap(m): tuple(wrap(x) for x in es) for m, es in a.enabling.items()}
    return Arena(owner, kind, initials, enabling)


def product_many(arenas: list[Arena]) -> Arena:
    """Disjoint union; a singleton product is the component itself."""
    if len(arenas) == 1:
        return arenas[0]
    owner: dict[Move, str] = {}
    kind: dict[Move, str] = {}
    initials: set[Move] = set()
    enabling: dict[Move, tuple[Move, ...]] = {}
    for i, a in enumerate(arenas):
        part = _retag(a, lambda m, i=i: ("p", i, m), flip=False)
        owner.update(part.owner)
        kind.update(part.kind)
        initials |= part.initials
        enabling.update(part.enabling)
    out = Arena(owner, kind, frozenset(initials), enabling)
    validate_arena(out)
    return out


def product(a: Arena, b: Arena) -> Arena:
    return product_many([a, b])


def arrow(a: Arena, b: Arena) -> Arena:
    """a => b: a's moves flip polarity and its initials are enabled by every
    initial of b; b keeps its structure and provides the initials."""
    dom = _retag(a, lambda m: ("L", m), flip=True)
    cod = _retag(b, lambda m: ("R", m), flip=False)
    owner = dom.owner | cod.owner
    kind = dom.kind | cod.kind
    enabling = dict(dom.enabling)
    enabling.update(cod.enabling)
    dom_initials = tuple(sorted(dom.initials, key=move_key))
    for i in cod.initials:
        enabling[i] = tuple(sorted(enabling.get(i, ()) + dom_initials, key=move_key))
    out = Arena(owner, kind, cod.initials, enabling)
    validate_arena(out)
    return out


def lifted_sum(family: list[Arena]) -> Arena:
    """Fresh initial question ('q',); answer ('inj', i) per component; the
    component hangs off its answer with polarity kept."""
    q: Move = ("q",)
    owner: dict[Move, str] = {q: "O"}
    kind: dict[Move, str] = {q: "Q"}
    enabling: dict[Move, tuple[Move, ...]] = {}
    answers: list[Move] = []
    for i, a in enumerate(family):
        inj: Move = ("inj", i)
        owner[inj] = "P"
        kind[inj] = "A"
        answers.append(inj)
        part = _retag(a, lambda m, i=i: ("s", i, m), flip=False)
        owner.update(part.owner)
        kind.update(part.kind)
        enabling.update(part.enabling)
        if part.initials:
            enabling[inj] = tuple(sorted(part.initials, key=move_key))
    enabling[q] = tuple(answers)
    out = Arena(owner, kind, frozenset((q,)), enabling)
    validate_arena(out)
    return out


def t_one() -> Arena:
    """The lifted empty family of one component: q |- a."""
    return lifted_sum([empty_arena()])


def rename_moves(a: Arena, pi: dict[Move, Move]) -> Arena:
    if set(pi) != set(a.owner) or len(set(pi.values())) != len(pi):
        raise ArenaError("renaming must be a total bijection on moves")
    out = _retag(a, lambda m: pi[m], flip=False)
    validate_arena(out)
    return out


# ---------------------------------------------------------------- type families

ArenaFamily = list[Arena]


def interpret_type(t: TypeExpr) -> ArenaFamily:
    """The family of arenas denoted by an L2 type. One family component per
    value shape; index order is deterministic (documented per case)."""
    match t:
        case TUnit():
            return [empty_arena()]
        case TBool():
            return [empty_arena(), empty_arena()]
        case TProd(l, r):
            # row-major: left index varies slowest
            return [product(a, b) for a in interpret_type(l) for b in interpret_type(r)]
        case TArrow(l, r):
            fam_l = interpret_type(l)
            tb = lifted_sum(interpret_type(r))
            return [product_many([arrow(a, tb) for a in fam_l])]
        case TRef(p):
            fam = interpret_type(p)
            writes = product_many([arrow(a, t_one()) for a in fam])
            return [product(writes, lifted_sum(fam))]
        case TNat():
            raise ArenaError("nat types denote infinite families; not interpretable")
    raise ArenaError(f"not a type: {t!r}")


# ---------------------------------------------------------------- lazy arenas

@dataclass(eq=False)
class LazyArena:
    """Arena given by generators; children streams may be countably infinite.
    Move equality is by identifier. Lookups are memoized; construct in one
    thread, read freely afterwards."""

    initials_fn: Callable[[], Iterable[Move]]
    label_fn: Callable[[Move], tuple[str, str]]   # move -> (op, qa)
    children_fn: Callable[[Move], Iterable[Move]]
    _labels: dict[Move, tuple[str, str]] = field(default_factory=dict, repr=False)

    @property
    def initials(self) -> frozenset[Move]:
        return frozenset(self.initials_fn())

    def _label(self, m: Move) -> tuple[str, str]:
        if m not in self._labels:
            self._labels[m] = self.label_fn(m)
        return self._labels[m]

    def owner(self, m: Move) -> str:
        return self._label(m)[0]

    def kind(self, m: Move) -> str:
        return self._label(m)[1]

    def enabled(self, m: Move) -> Iterator[Move]:
        return iter(self.children_fn(m))

    def explore(self, width: int | None = None, depth: int | None = None) -> Arena:
        """Materialize a finite truncation: at most `width` children per move,
        at most `depth` levels below the initials."""
        owner: dict[Move, str] = {}
        kind: dict[Move, str] = {}
        enabling: dict[Move, tuple[Move, ...]] = {}
        inits = tuple(sorted(self.initials, key=move_key))
        frontier: list[tuple[Move, int]] = [(m, 0) for m in inits]
        seen: set[Move] = set()
        while frontier:
            m, d = frontier.pop()
            if m in seen:
                continue
            seen.add(m)
            op, qa = self._label(m)
            owner[m], kind[m] = op, qa
            if depth is not None and d >= depth:
                continue
            kids = self.enabled(m)
            if width is not None:
                kids = itertools.islice(kids, width)
            kids = tuple(kids)
            if kids:
                enabling[m] = tuple(sorted(kids, key=move_key))
                frontier.extend((k, d + 1) for k in kids)
        out = Arena(owner, kind, frozenset(inits), enabling)
        validate_arena(out)
        return out


def _prop4_lazy(inner_fan: int | None) -> LazyArena:
    """Shared shape of the two hotel arenas: an outer call offering a fan of
    nat -> unit copies, whose returned function can be called repeatedly,
    each call offering an inner fan (countable if inner_fan is None, else
    that many copies)."""
    q0, ret, q1, a1 = ("q0",), ("ret",), ("q1",), ("a1",)

    def initials():
        return (q0,)

    def label(m: Move) -> tuple[str, str]:
        match m[0]:
            case "q0":
                return ("O", "Q")
            case "ret":
                return ("P", "A")
            case "qL":
                return ("P", "Q")
            case "aL":
                return ("O", "A")
            case "q1":
                return ("O", "Q")
            case "a1":
                return ("P", "A")
            case "qR":
                return ("P", "Q")
            case "aR":
                return ("O", "A")
        raise ArenaError(f"unknown move {m}")

    def children(m: Move) -> Iterable[Move]:
        match m[0]:
            case "q0":
                return itertools.chain([ret], (("qL", n) for n in itertools.count()))
            case "ret":
                return (q1,)
            case "q1":
                inner = (("qR", n) for n in itertools.count()) if inner_fan is None \
                    else (("qR", n) for n in range(inner_fan))
                return itertools.chain([a1], inner)
            case "qL":
                return (("aL", m[1]),)
            case "qR":
                return (("aR", m[1]),)
            case _:
                return ()

    return LazyArena(initials, label, children)


def prop4_arenas() -> tuple[LazyArena, LazyArena]:
    """The two hotel arenas: calls of type (nat->unit)->(nat->unit)->unit on
    the left and (nat->unit)->(unit->unit)->unit on the right. Isomorphic as
    infinitely-branching arenas despite the types not being equated by the
    syntactic theory."""
    return _prop4_lazy(None), _prop4_lazy(1)


def prop4_truncated(nat_bound: int) -> tuple[Arena, Arena]:
    """Finite truncations with nat indices < nat_bound in the outer fans."""
    left, right = prop4_arenas()
    return (left.explore(width=nat_bound + 1),
            right.explore(width=nat_bound + 1))


# ---------------------------------------------------------------- k-isomorphisms

@dataclass(frozen=True)
class KIso:
    """Depth-k tree isomorphism below a pair of moves: a QA-preserving
    bijection on enabled moves plus a (k-1)-witness per pair. Depth 0 is the
    empty witness between any two moves."""

    depth: int
    pairs: tuple[tuple[Move, Move], ...]
    subs: dict[Move, "KIso"] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "subs", dict(self.subs))

    def __eq__(self, other):
        if not isinstance(other, KIso):
            return NotImplemented
        return (self.depth == other.depth and set(self.pairs) == set(other.pairs)
                and all(self.subs[m] == other.subs[m] for m, _ in self.pairs)) \
            if self.depth > 0 else other.depth == 0

    def __hash__(self):
        return hash((self.depth, frozenset(self.pairs)))

    def apply(self, m: Move) -> Move:
        for a, b in self.pairs:
            if a == m:
                return b
        raise KeyError(m)

    def sub(self, m: Move) -> "KIso":
        return self.subs[m]

    def truncate(self, k: int) -> "KIso":
        if k <= 0:
            return KIso(0, ())
        if k >= self.depth:
            return self
        return KIso(k, self.pairs, {m: s.truncate(k - 1) for m, s in self.subs.items()})

    def inverse(self) -> "KIso":
        if self.depth == 0:
            return self
        return KIso(self.depth, tuple((b, a) for a, b in self.pairs),
                    {b: self.subs[a].inverse() for a, b in self.pairs})

    def compose(self, other: "KIso") -> "KIso":
        """self from a to b, other from b to c, equal depths."""
        k = min(self.depth, other.depth)
        if k == 0:
            return KIso(0, ())
        pairs = tuple((a, other.apply(b)) for a, b in self.pairs)
        subs = {a: self.subs[a].compose(other.subs[b]) for a, b in self.pairs}
        return KIso(k, pairs, subs)

    def to_json(self):
        if self.depth == 0:
            return {"depth": 0}
        return {"depth": self.depth,
                "pairs": [{"from": move_id(a), "to": move_id(b),
                           "below": self.subs[a].to_json()}
                          for a, b in sorted(self.pairs, key=lambda p: move_key(p[0]))]}


def kiso_valid(a: Arena, m: Move, b: Arena, n: Move, w: KIso) -> bool:
    """Check w is a well-formed depth-w.depth witness from m to n."""
    if w.depth == 0:
        return True
    ea, eb = a.enabled(m), b.enabled(n)
    if sorted(x for x, _ in w.pairs) != sorted(ea) or \
            sorted(y for _, y in w.pairs) != sorted(eb):
        return False
    for x, y in w.pairs:
        if a.kind[x] != b.kind[y]:
            return False
        if not kiso_valid(a, x, b, y, w.subs[x]):
            return False
    return True


def _level_classes(a: Arena, b: Arena, k: int) -> list[dict[tuple[str, Move], int]]:
    """Equivalence classes of depth-j tree isomorphism, j = 0..k, over the
    tagged union of both arenas' moves. Any two moves are 0-isomorphic, so
    the move's own label never enters — only the children's QA labels and
    classes do."""
    moves = [("A", m) for m in a.owner] + [("B", m) for m in b.owner]

    def kids(tm):
        side, m = tm
        ar = a if side == "A" else b
        return [(side, x) for x in ar.enabled(m)]

    def qa(tm):
        side, m = tm
        return (a if side == "A" else b).kind[m]

    levels = [{tm: 0 for tm in moves}]
    for _ in range(k):
        prev = levels[-1]
        keys = {tm: tuple(sorted(Counter((qa(c), prev[c]) for c in kids(tm)).items()))
                for tm in moves}
        canon: dict = {}
        cur = {}
        for tm in sorted(moves, key=lambda tm: move_key(tm[1])):
            cur[tm] = canon.setdefault(keys[tm], len(canon))
        levels.append(cur)
    return levels


def _build_kiso(a: Arena, b: Arena, m: Move, n: Move, k: int,
                level: Callable[[int], dict]) -> KIso:
    """Witness below an equivalent pair; level(j) gives the depth-j classes.
    Children are grouped by (QA label, class) so the pairing preserves QA
    even at depth 1, where all classes coincide."""
    if k == 0:
        return KIso(0, ())
    cls = level(k - 1)
    grp_a: dict[tuple, list[Move]] = {}
    for x in a.enabled(m):
        grp_a.setdefault((a.kind[x], cls[("A", x)]), []).append(x)
    grp_b: dict[tuple, list[Move]] = {}
    for y in b.enabled(n):
        grp_b.setdefault((b.kind[y], cls[("B", y)]), []).append(y)
    pairs = []
    subs = {}
    for c, xs in grp_a.items():
        ys = grp_b[c]
        for x, y in zip(sorted(xs, key=move_key), sorted(ys, key=move_key)):
            pairs.append((x, y))
            subs[x] = _build_kiso(a, b, x, y, k - 1, level)
    return KIso(k, tuple(pairs), subs)


def k_iso(a: Arena, m: Move, b: Arena, n: Move, k: int) -> KIso | None:
    """Depth-k witness from m to n, or None. Any pair is 0-isomorphic."""
    if m not in a.owner or n not in b.owner:
        raise ArenaError("moves must belong to the respective arenas")
    if k == 0:
        return KIso(0, ())
    levels = _level_classes(a, b, k)
    if levels[k][("A", m)] != levels[k][("B", n)]:
        return None
    return _build_kiso(a, b, m, n, k, lambda j: levels[j])


# ---------------------------------------------------------------- path isomorphism

@dataclass(eq=False)
class PathIso:
    """Bijection on initial moves plus arbitrarily deep tree witnesses below
    each pair, materialized on demand from a coherent family."""

    pairs: tuple[tuple[Move, Move], ...]
    builder: Callable[[Move, Move, int], KIso]

    def apply_initial(self, m: Move) -> Move:
        for x, y in self.pairs:
            if x == m:
                return y
        raise KeyError(m)

    def kiso_at(self, initial_a: Move, depth: int) -> KIso:
        return self.builder(initial_a, self.apply_initial(initial_a), depth)

    def map_path(self, path: list[Move]) -> list[Move]:
        """Image of an enabling path (starting at an initial move)."""
        if not path:
            return []
        out = [self.apply_initial(path[0])]
        if len(path) > 1:
            w = self.kiso_at(path[0], len(path) - 1)
            for m in path[1:]:
                out.append(w.apply(m))
                w = w.sub(m)
        return out

    def to_json(self, depth: int = 0):
        return {"format": "pathiso/1",
                "initials": [{"from": move_id(x), "to": move_id(y),
                              **({"below": self.kiso_at(x, depth).to_json()}
                                 if depth else {})}
                             for x, y in sorted(self.pairs, key=lambda p: move_key(p[0]))]}


def _fixpoint_classes(a: Arena, b: Arena) -> tuple[dict, list[dict]]:
    """Run refinement to a fixpoint over reachable moves; return final classes
    and the per-level history (for depth-bounded witnesses)."""
    ra, rb = reachable_moves(a), reachable_moves(b)
    moves = [("A", m) for m in sorted(ra, key=move_key)] \
        + [("B", m) for m in sorted(rb, key=move_key)]

    def kids(tm):
        side, m = tm
        ar = a if side == "A" else b
        return [(side, x) for x in ar.enabled(m)]

    def qa(tm):
        side, m = tm
        return (a if side == "A" else b).kind[tm[1]]

    canon0: dict = {}
    cur = {}
    for tm in moves:
        cur[tm] = canon0.setdefault(qa(tm), len(canon0))
    history = [cur]
    while True:
        prev = history[-1]
        keys = {tm: (prev[tm], tuple(sorted(Counter(prev[c] for c in kids(tm)).items())))
                for tm in moves}
        canon: dict = {}
        nxt = {}
        for tm in moves:
            nxt[tm] = canon.setdefault(keys[tm], len(canon))
        if len(canon) == len(set(prev.values())):
            return prev, history
        history.append(nxt)


def path_iso_decide(a: Arena, b: Arena) -> PathIso | None:
    """Decide path isomorphism of two finite arenas and produce a witness.

    Refinement key: (previous class, multiset of child classes). Since the
    initial partition separates Q from A and the fixpoint refines until the
    class multisets of children agree, matching children class-by-class under
    a fixed order yields depth-k witnesses for every k."""
    cls, _ = _fixpoint_classes(a, b)
    ia = Counter(cls[("A", m)] for m in a.initials)
    ib = Counter(cls[("B", m)] for m in b.initials)
    if ia != ib:
        return None

    grp_a: dict[int, list[Move]] = {}
    for m in sorted(a.initials, key=move_key):
        grp_a.setdefault(cls[("A", m)], []).append(m)
    grp_b: dict[int, list[Move]] = {}
    for m in sorted(b.initials, key=move_key):
        grp_b.setdefault(cls[("B", m)], []).append(m)
    pairs = []
    for c, xs in grp_a.items():
        pairs.extend(zip(xs, grp_b[c]))
    pairs.sort(key=lambda p: move_key(p[0]))

    def build(m: Move, n: Move, depth: int) -> KIso:
        # the fixpoint classes are stable, so one level dict serves all depths
        if depth == 0:
            return KIso(0, ())
        grpa: dict[int, list[Move]] = {}
        for x in a.enabled(m):
            grpa.setdefault(cls[("A", x)], []).append(x)
        grpb: dict[int, list[Move]] = {}
        for y in b.enabled(n):
            grpb.setdefault(cls[("B", y)], []).append(y)
        ps = []
        subs = {}
        for c, xs in grpa.items():
            ys = grpb[c]
            for x, y in zip(sorted(xs, key=move_key), sorted(ys, key=move_key)):
                ps.append((x, y))
                subs[x] = build(x, y, depth - 1)
        return KIso(depth, tuple(ps), subs)

    return PathIso(tuple(pairs), build)


def family_iso_decide(fa: ArenaFamily, fb: ArenaFamily) \
        -> tuple[list[tuple[int, int]], dict[int, PathIso]] | None:
    """Match family components up to path isomorphism; an index bijection
    plus one PathIso per matched pair, or None."""
    if len(fa) != len(fb):
        return None
    witnesses: dict[int, PathIso] = {}
    used: set[int] = set()
    bijection: list[tuple[int, int]] = []
    for i, a in enumerate(fa):
        for j, b in enumerate(fb):
            if j in used:
                continue
            w = path_iso_decide(a, b)
            if w is not None:
                bijection.append((i, j))
                witnesses[i] = w
                used.add(j)
                break
        else:
            return None
    return bijection, witnesses


# ---------------------------------------------------------------- export

def arena_to_json(a: Arena) -> str:
    ms = sorted(a.owner, key=move_key)
    doc = {
        "format": "arena/1",
        "moves": [{"id": move_id(m), "op": a.owner[m], "qa": a.kind[m]} for m in ms],
        "initials": [move_id(m) for m in sorted(a.initials, key=move_key)],
        "enabling": [[move_id(m), move_id(x)]
                     for m in ms for x in a.enabled(m)],
    }
    return json.dumps(doc, indent=2)


def arena_to_dot(a: Arena) -> str:
    lines = ["digraph arena {"]
    for m in sorted(a.owner, key=move_key):
        shape = "doublecircle" if m in a.initials else "ellipse"
        label = f"{move_id(m)}\\n{a.owner[m]}{a.kind[m]}"
        lines.append(f'  "{move_id(m)}" [label="{label}", shape={shape}];')
    for m in sorted(a.owner, key=move_key):
        for x in a.enabled(m):
            lines.append(f'  "{move_id(m)}" -> "{move_id(x)}";')
    lines.append("}")
    return "\n".join(lines)
