"""Justified sequences over an arena and the structure on them.

A play is a tuple of entries (move, justifier) where justifier is the index
of an earlier entry whose move enables this one, or None for initial moves.
Equality of plays includes pointers. Legality = justified + alternating +
well-bracketed; pre-legal drops alternation (but keeps bracketing).

Plays over an arrow arena (moves tagged ('L', m) / ('R', m)) support
restriction to either side, the zig-zag conditions, and dual plays.

P-views and threads are returned both as position lists into the original
play and as re-encoded sequences; a pointer whose target was cut from the
subsequence is encoded as the string "cut" (views of non-visible plays have
such pointers; threads never do).
"""

from __future__ import annotations

import json

from .arena import Arena, ArenaError, arity, move_id, move_key

Entry = tuple  # (move, int | None | "cut")
Play = tuple   # tuple of entries

EMPTY: Play = ()


def extend(s: Play, move, ptr) -> Play:
    return s + ((move, ptr),)


# ---------------------------------------------------------------- predicates

def is_justified(a: Arena, s: Play) -> bool:
    for i, (m, ptr) in enumerate(s):
        if m not in a.owner:
            return False
        if ptr is None:
            if m not in a.initials:
                return False
        else:
            if not isinstance(ptr, int) or not 0 <= ptr < i:
                return False
            if m not in a.enabled(s[ptr][0]):
                return False
    return True


def is_alternating(a: Arena, s: Play) -> bool:
    owners = [a.owner[m] for m, _ in s]
    if owners and owners[0] != "O":
        return False
    return all(owners[i] != owners[i + 1] for i in range(len(owners) - 1))


def is_well_bracketed(a: Arena, s: Play) -> bool:
    """Each answer must point to the pending question (LIFO discipline)."""
    pending: list[int] = []
    for i, (m, ptr) in enumerate(s):
        if a.kind[m] == "A":
            if not pending or ptr != pending[-1]:
                return False
            pending.pop()
        else:
            pending.append(i)
    return True


def is_legal(a: Arena, s: Play) -> bool:
    return is_justified(a, s) and is_alternating(a, s) and is_well_bracketed(a, s)


def is_pre_legal(a: Arena, s: Play) -> bool:
    """Justified and well-bracketed, alternation not required."""
    return is_justified(a, s) and is_well_bracketed(a, s)


def is_thread(s: Play) -> bool:
    """At most one initial entry, and it comes first."""
    return all((ptr is None) == (i == 0) for i, (_, ptr) in enumerate(s))


def is_complete(a: Arena, s: Play) -> bool:
    """Every question has been answered."""
    pending = 0
    for m, _ in s:
        pending += 1 if a.kind[m] == "Q" else -1
    return pending == 0 and is_well_bracketed(a, s)


# ---------------------------------------------------------------- prefixes

def ip(s: Play) -> Play:
    """Immediate prefix."""
    return s[:-1]


def jp(s: Play) -> Play:
    """Prefix ending at the justifier of the last move; empty for initials."""
    if not s:
        raise ValueError("jp of the empty play")
    ptr = s[-1][1]
    return EMPTY if ptr is None else s[:ptr + 1]


# ---------------------------------------------------------------- views and threads

def _encode(s: Play, positions: list[int]) -> Play:
    """Subsequence at the given (sorted) positions, pointers re-indexed;
    pointers to cut positions become "cut" (None stays None)."""
    index = {p: i for i, p in enumerate(positions)}
    out = []
    for p in positions:
        m, ptr = s[p]
        if ptr is None:
            out.append((m, None))
        else:
            out.append((m, index.get(ptr, "cut")))
    return tuple(out)


def p_view_positions(a: Arena, s: Play) -> list[int]:
    """Positions of the P-view: walk back, P-moves step, O-moves jump to
    their justifier, initial O-moves stop."""
    if not s:
        return []
    positions = []
    i = len(s) - 1
    while i >= 0:
        positions.append(i)
        m, ptr = s[i]
        if a.owner[m] == "O":
            if ptr is None or ptr == "cut":
                break
            i = ptr
        else:
            i -= 1
    positions.reverse()
    return positions


def p_view(a: Arena, s: Play) -> Play:
    return _encode(s, p_view_positions(a, s))


def justification_root(s: Play, i: int) -> int:
    """Position of the initial move hereditarily justifying entry i."""
    while True:
        ptr = s[i][1]
        if ptr is None:
            return i
        i = ptr


def current_thread_positions(s: Play) -> list[int]:
    if not s:
        raise ValueError("current thread of the empty play")
    root = justification_root(s, len(s) - 1)
    return [i for i in range(len(s)) if justification_root(s, i) == root]


def current_thread(a: Arena, s: Play) -> Play:
    return _encode(s, current_thread_positions(s))


def threads(s: Play) -> list[Play]:
    """All threads of s, in order of their initial moves."""
    by_root: dict[int, list[int]] = {}
    for i in range(len(s)):
        by_root.setdefault(justification_root(s, i), []).append(i)
    return [_encode(s, ps) for _, ps in sorted(by_root.items())]


# ---------------------------------------------------------------- arrow plays

def side_of(move) -> str:
    if move[0] == "L":
        return "A"
    if move[0] == "R":
        return "B"
    raise ArenaError(f"move {move} is not tagged for an arrow arena")


def untag(move):
    return move[1]


def swap_tag(move):
    return ("R" if move[0] == "L" else "L", move[1])


def restrict(s: Play, part: str) -> Play:
    """Restriction of an arrow play to one side ('A'/'L' or 'B'/'R'),
    untagging moves and reassigning pointers; a pointer crossing to the
    other side (a domain initial's) is dropped, making the move initial."""
    if part in ("A", "L"):
        want = "A"
    elif part in ("B", "R"):
        want = "B"
    else:
        raise ValueError(f"unknown part {part!r}")
    positions = [i for i, (m, _) in enumerate(s) if side_of(m) == want]
    index = {p: i for i, p in enumerate(positions)}
    out = []
    for p in positions:
        m, ptr = s[p]
        if ptr is None or ptr not in index:
            out.append((untag(m), None))
        else:
            out.append((untag(m), index[ptr]))
    return tuple(out)


def pointer_vector(s: Play) -> list:
    return [ptr for _, ptr in s]


def is_pre_zigzag(s: Play) -> bool:
    """Every P-move (odd position) lands on the other side than the O-move
    just before it, and a P-move in the domain immediately follows an
    initial O-move of the codomain iff it is justified by it."""
    for i, (m, ptr) in enumerate(s):
        if i % 2 == 0:
            continue
        prev_m, prev_ptr = s[i - 1]
        if side_of(m) == side_of(prev_m):
            return False
        if side_of(m) == "A":
            prev_initial = side_of(prev_m) == "B" and prev_ptr is None
            if prev_initial != (ptr == i - 1):
                return False
            # a domain move justified by any codomain initial must follow it
            if ptr is not None and isinstance(ptr, int) \
                    and side_of(s[ptr][0]) == "B" and ptr != i - 1:
                return False
    return True


def is_zigzag(s: Play) -> bool:
    """Pre-zig-zag with identical pointer vectors on both restrictions
    (compared on the common prefix for odd-length plays)."""
    if not is_pre_zigzag(s):
        return False
    va = pointer_vector(restrict(s, "A"))
    vb = pointer_vector(restrict(s, "B"))
    n = min(len(va), len(vb))
    return va[:n] == vb[:n] and abs(len(va) - len(vb)) <= 1


def dual_play(s: Play) -> Play:
    """The companion play on the reversed arrow: swap the two moves of each
    (O, P) pair and the component tags. The domain initial of a pair becomes
    initial; its codomain initial partner now points to it."""
    if len(s) % 2 != 0:
        raise ValueError("dual play needs an even-length play")
    if not is_pre_zigzag(s):
        raise ValueError("dual play needs a pre-zig-zag play")

    def pi(p: int) -> int:
        return p + 1 if p % 2 == 0 else p - 1

    out = []
    for j in range(0, len(s), 2):
        o_m, o_ptr = s[j]
        p_m, p_ptr = s[j + 1]
        # P-move first: an A-initial (pointing at its partner) becomes initial
        if side_of(p_m) == "A" and p_ptr == j:
            out.append((swap_tag(p_m), None))
        else:
            out.append((swap_tag(p_m), pi(p_ptr)))
        # O-move second: a B-initial now points across at its partner
        if o_ptr is None:
            out.append((swap_tag(o_m), j))
        else:
            out.append((swap_tag(o_m), pi(o_ptr)))
    return tuple(out)


# ---------------------------------------------------------------- counting

def q_count(a: Arena, s: Play) -> int:
    """Sum of arities of the moves of s = number of justified one-move
    extensions (bracketing and alternation not enforced)."""
    return sum(arity(a, m) for m, _ in s)


def extensions(a: Arena, s: Play) -> list[Play]:
    """All one-move justified extensions of a nonempty thread: pick an entry,
    pick a move it enables."""
    out = []
    for i, (m, _) in enumerate(s):
        for x in a.enabled(m):
            out.append(extend(s, x, i))
    return out


def legal_extension_entries(a: Arena, s: Play, owner: str | None = None) \
        -> list[tuple]:
    """All (move, ptr) making s one move longer and still legal, sorted."""
    cands: list[tuple] = []
    last_owner = a.owner[s[-1][0]] if s else None
    want = "O" if last_owner in (None, "P") else "P"
    if owner is not None and owner != want:
        return []
    if want == "O":
        cands.extend((m, None) for m in a.initials)
    for i, (m, _) in enumerate(s):
        for x in a.enabled(m):
            if a.owner[x] == want:
                cands.append((x, i))
    out = []
    for m, ptr in cands:
        if a.kind[m] == "A":
            # answers must address the pending question
            pending = _pending_question(a, s)
            if pending is None or ptr != pending:
                continue
        out.append((m, ptr))
    out.sort(key=lambda e: (move_key(e[0]), -1 if e[1] is None else e[1]))
    return out


def _pending_question(a: Arena, s: Play) -> int | None:
    pending: list[int] = []
    for i, (m, _) in enumerate(s):
        if a.kind[m] == "A":
            pending.pop()
        else:
            pending.append(i)
    return pending[-1] if pending else None


# ---------------------------------------------------------------- serialization

def play_to_json(s: Play) -> str:
    return json.dumps({"format": "play/1",
                       "entries": [{"move": move_id(m), "justifier": ptr}
                                   for m, ptr in s]}, indent=2)


def play_from_json(text: str, a: Arena) -> Play:
    doc = json.loads(text)
    by_id = {move_id(m): m for m in a.owner}
    entries = doc["entries"] if isinstance(doc, dict) else doc
    out = []
    for e in entries:
        mid = e["move"]
        if mid not in by_id:
            raise ArenaError(f"unknown move id {mid!r}")
        out.append((by_id[mid], e.get("justifier")))
    return tuple(out)
