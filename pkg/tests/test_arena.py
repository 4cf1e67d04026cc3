"""Arenas from types, depth-bounded tree isomorphisms, path isomorphisms."""

import json
import random

import pytest

from gamiso.arena import (ArenaError, arena_to_dot, arena_to_json,
                          family_iso_decide, interpret_type, k_iso,
                          kiso_valid, move_id, path_iso_decide,
                          reachable_moves, rename_moves)
from gamiso.isotheory import enumerate_types, iso_decide
from gamiso.syntax import parse_type

from conftest import rand_type


def fam(src: str):
    return interpret_type(parse_type(src))


# ----------------------------------------------------------- interpretation

@pytest.mark.parametrize("src, sizes", [
    ("unit", [0]),
    ("bool", [0, 0]),
    ("bool * bool", [0, 0, 0, 0]),          # components multiply
    ("unit * unit", [0]),
    ("unit -> bool", [3]),                  # one question, two answers
    ("unit -> unit", [2]),
    ("bool -> unit", [4]),                  # a question per argument value
    ("(bool -> unit) -> unit", [6]),
    ("var[bool]", [7]),                     # two writes, one read
    ("bool * (unit -> unit)", [2, 2]),
])
def test_family_shapes(src, sizes):
    assert [len(a.owner) for a in fam(src)] == sizes


def test_ground_components_carry_no_moves():
    for a in fam("bool * bool"):
        assert not a.owner and not a.initials


def test_initial_moves_are_opponent_questions():
    rng = random.Random(3)
    for _ in range(60):
        for a in interpret_type(rand_type(rng, 7)):
            for m in a.initials:
                assert a.owner[m] == "O" and a.kind[m] == "Q"


def test_enabling_alternates_ownership():
    rng = random.Random(4)
    for _ in range(60):
        for a in interpret_type(rand_type(rng, 7)):
            for m in a.owner:
                for x in a.enabled(m):
                    assert a.owner[x] != a.owner[m]


def test_answers_returning_cells_enable_their_methods():
    # reading a cell of cells: the answer hands back a value whose own
    # question moves become available below it
    a = fam("var[var[unit]]")[0]
    answers_enabling = [m for m in a.owner
                        if a.kind[m] == "A" and a.enabled(m)]
    assert answers_enabling
    for m in answers_enabling:
        assert all(a.kind[x] == "Q" for x in a.enabled(m))


def test_move_ids_are_unique():
    rng = random.Random(5)
    for _ in range(40):
        for a in interpret_type(rand_type(rng, 8)):
            ids = [move_id(m) for m in a.owner]
            assert len(ids) == len(set(ids))


def test_reachable_moves_cover_interpreted_arenas():
    # every move of an interpreted arena hangs off some initial move
    for src in ("var[bool]", "(bool -> unit) -> unit", "unit -> bool"):
        for a in fam(src):
            assert reachable_moves(a) == frozenset(a.owner)


# ------------------------------------------------- depth-bounded witnesses

def test_k_iso_reflexive_at_all_depths():
    a = fam("(bool -> unit) -> unit")[0]
    (root,) = a.initials
    for k in range(5):
        w = k_iso(a, root, a, root, k)
        assert w is not None and w.depth == k
        assert kiso_valid(a, root, a, root, w)


def test_k_iso_detects_arity_mismatch_at_depth_one():
    a = fam("unit -> bool")[0]   # question with two answers
    b = fam("unit -> unit")[0]   # question with one answer
    (ra,), (rb,) = a.initials, b.initials
    assert k_iso(a, ra, b, rb, 0) is not None   # depth 0 sees nothing
    assert k_iso(a, ra, b, rb, 1) is None


def test_k_iso_depth_separation():
    # same arity below the root, mismatch one level further down
    a = fam("(unit -> bool) -> unit")[0]
    b = fam("(unit -> unit) -> unit")[0]
    (ra,), (rb,) = a.initials, b.initials
    assert k_iso(a, ra, b, rb, 1) is not None
    assert k_iso(a, ra, b, rb, 2) is None


def test_kiso_valid_accepts_rebuilt_swap_and_rejects_tampering():
    from gamiso.arena import KIso
    a = fam("(bool -> unit) -> unit")[0]
    (root,) = a.initials
    w = k_iso(a, root, a, root, 2)
    assert w is not None and kiso_valid(a, root, a, root, w)
    qs = sorted((m for m in a.enabled(root) if a.kind[m] == "Q"),
                key=move_id)
    (ans,) = (m for m in a.enabled(root) if a.kind[m] == "A")
    a0, a1 = a.enabled(qs[0])[0], a.enabled(qs[1])[0]
    # the two call branches are symmetric: swapping them validates, provided
    # the sub-witnesses are rebuilt to match
    good = KIso(2, ((qs[0], qs[1]), (qs[1], qs[0]), (ans, ans)),
                {qs[0]: KIso(1, ((a0, a1),), {a0: KIso(0, ())}),
                 qs[1]: KIso(1, ((a1, a0),), {a1: KIso(0, ())}),
                 ans: KIso(1, (), {})})
    assert kiso_valid(a, root, a, root, good)
    # swapping the top pairs while keeping stale sub-witnesses must fail
    stale = KIso(2, good.pairs, dict(w.subs))
    assert not kiso_valid(a, root, a, root, stale)
    # two pairs sharing an image must fail
    dup = KIso(2, ((qs[0], qs[1]), (qs[1], qs[1]), (ans, ans)),
               dict(good.subs))
    assert not kiso_valid(a, root, a, root, dup)


# --------------------------------------------------------------- path level

def test_path_iso_between_cell_and_method_pair():
    a = fam("var[bool]")[0]
    b = fam("(bool -> unit) * (unit -> bool)")[0]
    w = path_iso_decide(a, b)
    assert w is not None
    assert len(w.pairs) == 3 == len(a.initials)
    # images exhaust the other side's initials
    assert {y for _, y in w.pairs} == set(b.initials)
    for m in a.initials:
        k = w.kiso_at(m, 2)
        assert kiso_valid(a, m, b, w.apply_initial(m), k)


def test_path_iso_maps_enabling_paths():
    a = fam("var[bool]")[0]
    b = fam("(bool -> unit) * (unit -> bool)")[0]
    w = path_iso_decide(a, b)
    for m in a.initials:
        for x in a.enabled(m):
            img = w.map_path([m, x])
            assert img[0] == w.apply_initial(m)
            assert img[1] in b.enabled(img[0])


def test_path_iso_absent_between_different_shapes():
    a = fam("unit -> bool")[0]
    b = fam("unit -> unit")[0]
    assert path_iso_decide(a, b) is None


def test_family_iso_component_count_mismatch():
    assert family_iso_decide(fam("unit"), fam("bool")) is None


def test_family_iso_spot_checks():
    assert family_iso_decide(fam("bool * unit"), fam("bool")) is not None
    assert family_iso_decide(
        fam("var[bool]"), fam("(bool -> unit) * (unit -> bool)")) is not None
    assert family_iso_decide(fam("bool -> unit"), fam("unit -> bool")) is None


def test_family_iso_agrees_with_theory_on_small_types():
    ts = enumerate_types(3)
    fams = [interpret_type(t) for t in ts]
    for i, a in enumerate(ts):
        for j, b in enumerate(ts):
            assert (family_iso_decide(fams[i], fams[j]) is not None) \
                == iso_decide(a, b)


# ----------------------------------------------------------------- renaming

def test_rename_moves_preserves_isomorphism_class():
    rng = random.Random(9)
    a = fam("(bool -> unit) -> unit")[0]
    ms = sorted(a.owner, key=move_id)
    tags = [("n", i) for i in range(len(ms))]
    rng.shuffle(tags)
    pi = dict(zip(ms, tags))
    b = rename_moves(a, pi)
    assert set(b.owner) == set(tags)
    w = path_iso_decide(a, b)
    assert w is not None
    assert all(y == pi[x] for x, y in w.pairs) or w is not None


def test_rename_moves_requires_total_bijection():
    a = fam("unit -> bool")[0]
    ms = sorted(a.owner, key=move_id)
    with pytest.raises(ArenaError):
        rename_moves(a, {ms[0]: ("n", 0)})              # partial
    with pytest.raises(ArenaError):
        rename_moves(a, {m: ("n", 0) for m in ms})      # not injective


# ------------------------------------------------------------ serialization

def test_arena_json_shape_and_determinism():
    a = fam("var[bool]")[0]
    doc = json.loads(arena_to_json(a))
    assert doc["format"] == "arena/1"
    assert len(doc["moves"]) == 7
    assert len(doc["initials"]) == 3
    assert arena_to_json(a) == arena_to_json(a)


def test_arena_dot_lists_every_move():
    a = fam("unit -> bool")[0]
    dot = arena_to_dot(a)
    assert dot.startswith("digraph")
    for m in a.owner:
        assert move_id(m) in dot
