"""Strategies on arenas and their algebra.

A strategy is backed either by an oracle (a stateless function from O-ending
legal plays to an optional (move, justifier) response) or by an explicit set
of even-length plays. Oracles are materialized breadth-first up to a length
bound; every materialization is validated move-by-move, so a buggy oracle
fails loudly rather than producing illegal plays.

Composition builds interaction sequences over the three components, lets the
two strategies answer their odd-parity projections, enumerates external
O-moves when both projections are even, and records the hidden middle-free
plays. The named strategies at the bottom (copycat, the storage cell, the
copy-then-swap involution, the hotel pair) are all oracles that re-derive
their state from the play, so they are safe to call concurrently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

from .arena import (Arena, ArenaError, arrow, interpret_type, lifted_sum,
                    move_id, move_key, product, product_many,
                    prop4_truncated, t_one)
from .plays import (Play, current_thread_positions, is_complete, is_legal,
                    legal_extension_entries, p_view, p_view_positions,
                    play_to_json, dual_play, restrict)
from .syntax import parse_type


class StrategyError(Exception):
    pass


def _mate(j: int) -> int:
    """Partner position under the adjacent (O at even, P at odd) pairing."""
    return j - 1 if j % 2 else j + 1


@dataclass
class Strategy:
    """Game arena plus either an oracle or an explicit play set.

    dom/cod are the two sides when the arena is an arrow composite; compose
    and the isomorphism checks need them.
    """
    arena: Arena
    oracle: Callable[[Play], tuple | None] | None = None
    plays: frozenset | None = None
    dom: Arena | None = None
    cod: Arena | None = None
    name: str = ""
    _resp_index: dict = field(default_factory=dict, repr=False)

    def respond(self, s: Play):
        """Response to an O-ending play, or None if the strategy is silent."""
        if self.oracle is not None:
            return self.oracle(s)
        if not self._resp_index and self.plays:
            for p in self.plays:
                if p:
                    prev = self._resp_index.setdefault(p[:-1], p[-1])
                    if prev != p[-1]:
                        raise StrategyError(
                            f"non-deterministic play set at {p[:-1]}")
        return self._resp_index.get(s)

    def materialize(self, bound: int, o_filter=None) -> "Strategy":
        """All plays of length <= bound as an explicit strategy."""
        if self.plays is not None and self.oracle is None:
            kept = frozenset(p for p in self.plays if len(p) <= bound
                             and (o_filter is None
                                  or all(o_filter(m) for m, _ in p)))
            return Strategy(self.arena, plays=kept, dom=self.dom,
                            cod=self.cod, name=self.name)
        plays = {()}
        frontier = [()]
        while frontier:
            nxt = []
            for p in frontier:
                if len(p) + 2 > bound:
                    continue
                for m, ptr in legal_extension_entries(self.arena, p, "O"):
                    if o_filter is not None and not o_filter(m):
                        continue
                    o = p + ((m, ptr),)
                    r = self.respond(o)
                    if r is None:
                        continue
                    q = o + (r,)
                    if not is_legal(self.arena, q):
                        raise StrategyError(
                            f"oracle {self.name or '?'} produced an illegal "
                            f"response {r} after {[move_id(x) for x, _ in o]}")
                    if q not in plays:
                        plays.add(q)
                        nxt.append(q)
            frontier = nxt
        return Strategy(self.arena, plays=frozenset(plays), dom=self.dom,
                        cod=self.cod, name=self.name)


def is_strategy(s: Strategy) -> bool:
    """Nonempty, even-length legal plays, prefix-closed, deterministic."""
    if s.plays is None:
        raise StrategyError("is_strategy needs an explicit strategy")
    if () not in s.plays:
        return False
    seen: dict = {}
    for p in s.plays:
        if len(p) % 2 or not is_legal(s.arena, p):
            return False
        if p and p[:-2] not in s.plays:
            return False
        if p:
            prev = seen.setdefault(p[:-1], p[-1])
            if prev != p[-1]:
                return False
    return True


# ------------------------------------------------------------ classification

def is_single_threaded(s: Strategy) -> bool:
    """Each response points inside the current thread of its prefix."""
    for p in s.plays:
        if not p:
            continue
        _, ptr = p[-1]
        if ptr is None:
            return False  # P never opens a thread
        if ptr not in current_thread_positions(p[:-1]):
            return False
    return True


def is_visible(s: Strategy) -> bool:
    """Each response points inside the P-view of its prefix."""
    for p in s.plays:
        if not p:
            continue
        _, ptr = p[-1]
        if ptr is None or ptr not in p_view_positions(s.arena, p[:-1]):
            return False
    return True


def is_innocent(s: Strategy) -> bool:
    """Visible, and the response depends only on the P-view."""
    if not is_visible(s):
        return False
    by_view: dict = {}
    for p in s.plays:
        if not p:
            continue
        positions = p_view_positions(s.arena, p[:-1])
        key = p_view(s.arena, p[:-1])
        m, ptr = p[-1]
        val = (m, positions.index(ptr))
        prev = by_view.setdefault(key, val)
        if prev != val:
            return False
    return True


# ------------------------------------------------------------ comparisons

def equals_up_to(s1: Strategy, s2: Strategy, bound: int,
                 o_filter=None) -> bool:
    m1 = s1.materialize(bound, o_filter)
    m2 = s2.materialize(bound, o_filter)
    return m1.plays == m2.plays


def comp_preorder(s1: Strategy, s2: Strategy, bound: int) -> bool:
    """Complete plays of s1 within the bound are all plays of s2."""
    m1 = s1.materialize(bound)
    m2 = s2.materialize(bound)
    for p in m1.plays:
        if is_complete(s1.arena, p) and p not in m2.plays:
            return False
    return True


def dual_strategy(s: Strategy, bound: int) -> Strategy:
    """Duals of the plays: the inverse of an isomorphism half (even plays
    of an iso are pre-zig-zag, so every dual exists)."""
    m = s.materialize(bound)
    return Strategy(arrow(s.cod, s.dom),
                    plays=frozenset(dual_play(p) for p in m.plays),
                    dom=s.cod, cod=s.dom, name=f"dual({s.name})")


# ------------------------------------------------------------ composition

def _project(u: tuple, comps: tuple, tag_of: dict, chase: bool = False):
    """Restrict an interaction to two components, as an arrow play.

    With chase=True (hiding), a pointer into the hidden middle component is
    followed one step to the outer initial that justifies it.
    """
    keep = [i for i, ((c, _), _) in enumerate(u) if c in comps]
    index = {p: i for i, p in enumerate(keep)}
    out = []
    for p in keep:
        (c, m), ptr = u[p]
        if ptr is not None and ptr not in index and chase:
            ptr = u[ptr][1]  # middle initial -> its outer justifier
        if ptr is None or ptr not in index:
            out.append(((tag_of[c], m), None))
        else:
            out.append(((tag_of[c], m), index[ptr]))
    return tuple(out), keep


def compose(sigma: Strategy, tau: Strategy, length_bound: int,
            o_filter=None, interaction_cap: int | None = None) -> Strategy:
    """sigma ; tau by bounded-exhaustive interaction and hiding.

    Enumerates every interaction whose hidden play has length at most
    length_bound; external O-moves may be restricted with o_filter.
    """
    if sigma.dom is None or tau.cod is None:
        raise StrategyError("compose needs arrow strategies with dom/cod")
    if set(sigma.cod.owner) != set(tau.dom.owner):
        raise StrategyError("middle arenas do not match")
    a, c = sigma.dom, tau.cod
    game = arrow(a, c)
    cap = interaction_cap if interaction_cap is not None \
        else 4 * length_bound + 16
    cap_hits = 0
    plays: set = set()

    ab_tags = {"A": "L", "B": "R"}
    bc_tags = {"B": "L", "C": "R"}
    ac_tags = {"A": "L", "C": "R"}

    stack: list[tuple] = [()]
    seen: set = {()}
    while stack:
        u = stack.pop()
        n_ab = sum(1 for (cc, _), _ in u if cc in ("A", "B"))
        n_bc = sum(1 for (cc, _), _ in u if cc in ("B", "C"))
        if n_ab % 2 or n_bc % 2:
            if len(u) >= cap:
                cap_hits += 1
                continue
            if n_ab % 2:
                play, keep = _project(u, ("A", "B"), ab_tags)
                r = sigma.respond(play)
                comp_of = {"L": "A", "R": "B"}
            else:
                play, keep = _project(u, ("B", "C"), bc_tags)
                r = tau.respond(play)
                comp_of = {"L": "B", "R": "C"}
            if r is None:
                continue
            (tag, m), ptr = r
            uptr = keep[ptr] if ptr is not None else None
            u2 = u + (((comp_of[tag], m), uptr),)
            if _interaction_ok(u2, a, sigma, tau, ab_tags, bc_tags):
                if u2 not in seen:
                    seen.add(u2)
                    stack.append(u2)
            continue
        hidden, keep_ac = _project(u, ("A", "C"), ac_tags, chase=True)
        if not is_legal(game, hidden):
            raise StrategyError("interaction hid to an illegal play")
        plays.add(hidden)
        if len(hidden) + 2 > length_bound or len(u) >= cap:
            if len(u) >= cap and len(hidden) + 2 <= length_bound:
                cap_hits += 1
            continue
        for m, ptr in legal_extension_entries(game, hidden, "O"):
            if o_filter is not None and not o_filter(m):
                continue
            tag, core = m
            if tag == "R":
                uptr = keep_ac[ptr] if ptr is not None else None
                exts = [((("C", core), uptr),)]
            else:
                t = keep_ac[ptr]
                if u[t][0][0] == "C":
                    # domain initial: needs a middle initial chasing to t
                    exts = [((("A", core), b),)
                            for b, ((cc, bm), bptr) in enumerate(u)
                            if cc == "B" and bptr == t
                            and bm in sigma.cod.initials]
                else:
                    exts = [((("A", core), t),)]
            for ext in exts:
                u2 = u + ext
                if _interaction_ok(u2, a, sigma, tau, ab_tags, bc_tags):
                    if u2 not in seen:
                        seen.add(u2)
                        stack.append(u2)

    out = Strategy(game, plays=frozenset(plays), dom=a, cod=c,
                   name=f"({sigma.name};{tau.name})")
    out.interaction_cap_hits = cap_hits
    return out


def _interaction_ok(u, a, sigma, tau, ab_tags, bc_tags) -> bool:
    comp = u[-1][0][0]
    if comp in ("A", "B"):
        play, _ = _project(u, ("A", "B"), ab_tags)
        if not is_legal(sigma.arena, play):
            return False
    if comp in ("B", "C"):
        play, _ = _project(u, ("B", "C"), bc_tags)
        if not is_legal(tau.arena, play):
            return False
    return True


# ------------------------------------------------------------ copycat

def copycat(a: Arena) -> Strategy:
    """The identity strategy on a => a: mirror the last O-move."""
    def oracle(s: Play):
        (tag, core), j = s[-1]
        twin = ("L" if tag == "R" else "R", core)
        if j is None:
            return (twin, len(s) - 1)
        return (twin, _mate(j))
    return Strategy(arrow(a, a), oracle=oracle, dom=a, cod=a, name="copycat")


# ------------------------------------------------------------ storage cell

def cell_arena(fam: list[Arena]) -> Arena:
    """Lifted product of the write methods (one arrow per value shape) and
    the lifted sum that serves reads."""
    write = product_many([arrow(ai, t_one()) for ai in fam])
    read = lifted_sum(list(fam))
    return lifted_sum([product(write, read)])


def cell(fam: list[Arena]) -> Strategy:
    """The storage cell: writes return immediately, each read answers with
    the latest write's shape, payloads copycat between a read and its write.
    A read with no preceding write gets no response.
    """
    many = len(fam) > 1
    arena = cell_arena(fam)

    def wshape(m):
        """Index i if m is the call question of write component i."""
        if m[0] != "s":
            return None
        inner = m[2]
        if inner[:2] != ("p", 0):
            return None
        w = inner[2]
        if many:
            if w[0] != "p":
                return None
            i, aw = w[1], w[2]
        else:
            i, aw = 0, w
        return i if aw == ("R", ("q",)) else None

    def wrap_write(i, aw):
        w = ("p", i, aw) if many else aw
        return ("s", 0, ("p", 0, w))

    def write_payload(m):
        """(i, a-move) if m sits in the argument of write component i."""
        if m[0] != "s" or m[2][:2] != ("p", 0):
            return None
        w = m[2][2]
        i, aw = (w[1], w[2]) if many else (0, w)
        return (i, aw[1]) if aw[0] == "L" else None

    def read_payload(m):
        if m[0] != "s" or m[2][:2] != ("p", 1):
            return None
        r = m[2][2]
        return (r[1], r[2]) if r[0] == "s" else None

    def latest_write(s, thread, before):
        ws = [q for q in thread if q < before and wshape(s[q][0]) is not None]
        return ws[-1] if ws else None

    def oracle(s: Play):
        p = len(s) - 1
        m, j = s[-1]
        if m == ("q",):
            return (("inj", 0), p)
        i = wshape(m)
        if i is not None:
            return (wrap_write(i, ("R", ("inj", 0))), p)
        thread = current_thread_positions(s)
        if m == ("s", 0, ("p", 1, ("q",))):
            w = latest_write(s, thread, p)
            if w is None:
                return None
            return (("s", 0, ("p", 1, ("inj", wshape(s[w][0])))), p)
        rp = read_payload(m)
        if rp is not None:
            i, am = rp
            if am in fam[i].initials:
                # fresh payload question: open the linked write's argument
                read_pos = j - 1  # the read request P answered at j
                w = latest_write(s, thread, read_pos)
                return (wrap_write(i, ("L", am)), w)
            return (wrap_write(i, ("L", am)), _mate(j))
        wp = write_payload(m)
        if wp is not None:
            i, am = wp
            return (("s", 0, ("p", 1, ("s", i, am))), _mate(j))
        return None

    return Strategy(arena, oracle=oracle, name="cell")


# ------------------------------------------------------------ involution

def involution_arena() -> Arena:
    return interpret_type(parse_type("(bool -> unit) -> unit"))[0]


def involution_i() -> Strategy:
    """Copy-then-swap on the two branch questions: the first branch call in
    a thread is copied, every later one goes to the other branch."""
    a3 = involution_arena()
    game = arrow(a3, a3)
    c1 = ("L", ("p", 0, ("R", ("q",))))  # branch question cores inside a3
    c2 = ("L", ("p", 1, ("R", ("q",))))
    swap = {c1: c2, c2: c1}

    def answer_of(core):
        ans = [x for x in a3.enabled(core) if a3.kind[x] == "A"]
        return ans[0]

    def oracle(s: Play):
        p = len(s) - 1
        (tag, core), j = s[-1]
        if j is None:
            return (("L", core), p)
        if a3.kind[core] == "A":
            tq = _mate(j)
            ttag, tcore = s[tq][0]
            return ((ttag, answer_of(tcore)), tq)
        # O-question: a branch call on the domain side
        thread = current_thread_positions(s)
        seen = sum(1 for t in thread
                   if t < p and s[t][0] in (("L", c1), ("L", c2)))
        target = core if seen == 0 else swap[core]
        return (("R", target), _mate(j))
    return Strategy(game, oracle=oracle, dom=a3, cod=a3, name="involution")


# ------------------------------------------------------------ hotel pair

def default_hotel_bijection(n: int, j: int, m: int):
    """Between n+1 countable fans and one countable fan plus n singles."""
    if j >= 1 and m == 0:
        return ("h", j)
    if j == 0:
        return ("g", m * (n + 1))
    return ("g", (m - 1) * (n + 1) + j)


def default_hotel_inverse(n: int, kind: str, v: int):
    if kind == "h":
        return (v, 0)
    d, r = divmod(v, n + 1)
    return (0, d) if r == 0 else (r, d + 1)


def shifted_hotel_bijection(n: int, j: int, m: int):
    """A second family: the default composed with a transposition."""
    kind, v = default_hotel_bijection(n, j, m)
    if kind == "g" and v in (0, n + 1):
        v = (n + 1) - v
    return (kind, v)


def shifted_hotel_inverse(n: int, kind: str, v: int):
    if kind == "g" and v in (0, n + 1):
        v = (n + 1) - v
    return default_hotel_inverse(n, kind, v)


def _hotel_oracle(forward, inverse, ltr: bool):
    """One side of the hotel pair; ltr maps (fan, index) calls forward,
    the other side maps them back through the inverse."""
    Q0, RET, Q1 = ("q0",), ("ret",), ("q1",)

    def unique_answer(core):
        if core[0] == "qL":
            return ("aL", core[1])
        if core[0] == "qR":
            return ("aR", core[1])
        return {"q0": RET, "q1": ("a1",)}[core[0]]

    def oracle(s: Play):
        p = len(s) - 1
        (tag, core), j = s[-1]
        if j is None:
            return (("L", core), p)
        if core[0] in ("ret", "a1", "aL", "aR"):
            tq = _mate(j)
            ttag, tcore = s[tq][0]
            return ((ttag, unique_answer(tcore)), tq)
        if core == Q1:
            return (("L", core), _mate(j))
        # a call on the domain side
        thread = current_thread_positions(s)
        n = sum(1 for t in thread if t < p and s[t][0] == ("R", Q1))
        if ltr:
            if core[0] == "qL":
                fan, m = 0, core[1]
            else:
                fan = sum(1 for t in thread
                          if t <= j and s[t][0] == ("L", Q1))
                m = core[1]
            kind, v = forward(n, fan, m)
        else:
            if core[0] == "qL":
                kind, v = "g", core[1]
            else:
                kind = "h"
                v = sum(1 for t in thread if t <= j and s[t][0] == ("L", Q1))
            fan, m = inverse(n, kind, v)
            kind, v = ("g", m) if fan == 0 else ("fan", (fan, m))
        if kind == "g":
            return (("R", ("qL", v)), thread[0])
        if kind == "h":
            k = v
            q1s = [t for t in thread if s[t][0] == ("R", Q1)]
            return (("R", ("qR", 0)), q1s[k - 1])
        k, m = v
        q1s = [t for t in thread if s[t][0] == ("R", Q1)]
        return (("R", ("qR", m)), q1s[k - 1])

    return oracle


def prop4_strategies(bijections=None, nat_bound: int = 7,
                     length_bound: int = 12) -> tuple[Strategy, Strategy]:
    """The mutually inverse hotel pair on the two countable arenas,
    truncated wide enough that every translated index stays in range."""
    if bijections is None:
        forward, inverse = default_hotel_bijection, default_hotel_inverse
    else:
        forward, inverse = bijections
    n_max = length_bound // 4 + 1
    mid = 0
    for n in range(n_max + 1):
        for j in range(n + 1):
            for m in range(nat_bound + 1):
                kind, v = forward(n, j, m)
                if kind == "g":
                    mid = max(mid, v)
    mid = max(mid, nat_bound)
    left, right = prop4_truncated(mid)
    ltr = Strategy(arrow(left, right),
                   oracle=_hotel_oracle(forward, inverse, ltr=True),
                   dom=left, cod=right, name="hotel-ltr")
    rtl = Strategy(arrow(right, left),
                   oracle=_hotel_oracle(forward, inverse, ltr=False),
                   dom=right, cod=left, name="hotel-rtl")
    return ltr, rtl


# ------------------------------------------------------------ serialization

def strategy_to_json(s: Strategy, bound: int | None = None) -> str:
    if s.plays is None:
        if bound is None:
            raise StrategyError("materialization bound required")
        s = s.materialize(bound)
    plays = sorted(s.plays, key=lambda p: (len(p),
                                           [move_key(m) for m, _ in p]))
    return json.dumps(
        {"format": "strategy/1",
         "arena_moves": sorted(move_id(m) for m in s.arena.owner),
         "plays": [[{"move": move_id(m), "justifier": ptr} for m, ptr in p]
                   for p in plays]}, indent=2)
