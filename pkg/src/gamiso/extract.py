"""From game isomorphisms to path isomorphisms.

An isomorphism between two games is a pair of strategies composing to the
copycats.  This module turns one half of such a pair into progressively more
static data:

  * a *thread translator* (`SeqMorphism`): a map on single-initial justified
    sequences of the two arenas, computed move by move by driving the
    strategy (`strategy_to_seq_morphism`), and conversely turned back into a
    strategy (`seq_morphism_to_strategy`);
  * a *path translator* (`PathMorphism`): its restriction to paths — threads
    in which every move points to the previous one (`restrict_to_paths`) —
    and the pointwise extension of a path translator back to all threads
    (`extend_path_morphism`);
  * a bare tree isomorphism between the two arenas (`extract_path_iso`),
    assembled from finite-depth witnesses (`extract_k_iso`) produced by a
    slicing construction on one-move extensions (`build_slicing_graph`,
    `slice_iso`).

Thread translators induced by isomorphism strategies are total on justified
threads whether or not these alternate or are well-bracketed; the slicing
construction depends on that totality, because the one-move extensions it
slices are unconstrained: any earlier move may be the justifier.

Slicing finite bijections is not functorial — composing two sliced
bijections need not give the sliced composite — and
`find_nonfunctorial_witness` searches small instances for a counterexample.
"""

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Callable

from .arena import (Arena, KIso, PathIso, arrow, move_id, move_key,
                    rename_moves)
from .plays import Play, current_thread_positions, jp, restrict
from .strategy import Strategy


class ExtractError(Exception):
    pass


# ------------------------------------------------------------- thread maps

@dataclass
class SeqMorphism:
    """A map on justified threads, one output move per input move.

    `fn` sends a thread of `src` to a thread of `tgt` of the same length and
    must be prefix-compatible (the image of a prefix is the prefix of the
    image).  `inverse_fn`, when present, is a two-sided inverse.
    """

    src: Arena
    tgt: Arena
    fn: Callable[[Play], Play]
    inverse_fn: Callable[[Play], Play] | None = None
    name: str = ""
    _kiso_memo: dict = field(default_factory=dict, repr=False)
    _graph_memo: dict = field(default_factory=dict, repr=False)

    def __call__(self, t: Play) -> Play:
        return self.fn(t)

    def inverse(self) -> "SeqMorphism":
        if self.inverse_fn is None:
            raise ExtractError(f"{self.name or 'thread map'} has no inverse")
        return SeqMorphism(self.tgt, self.src, self.inverse_fn, self.fn,
                           name=f"inverse({self.name})")


def check_seq_morphism(phi: SeqMorphism, samples) -> None:
    """Check length preservation and prefix compatibility on sample threads,
    and that the inverse (if any) really inverts.  Raises on failure."""
    for t in samples:
        img = phi(t)
        if len(img) != len(t):
            raise ExtractError(f"image of a {len(t)}-move thread "
                               f"has {len(img)} moves")
        for k in range(len(t) + 1):
            if phi(t[:k]) != img[:k]:
                raise ExtractError("thread map is not prefix-compatible")
        if phi.inverse_fn is not None and phi.inverse_fn(img) != t:
            raise ExtractError("inverse does not invert the thread map")


def is_justified_morphism(phi: SeqMorphism, samples) -> bool:
    """Whether the map commutes with taking the justifier prefix, on every
    nonempty prefix of the sample threads."""
    for t in samples:
        img = phi(t)
        for k in range(1, len(t) + 1):
            if phi(jp(t[:k])) != jp(img[:k]):
                return False
    return True


# -------------------------------------------- strategies to thread maps

class _Lifter:
    """Rebuild, thread by thread, the unique play of an isomorphism strategy
    lying over a given thread of one side.

    Moves of the thread owned by the opponent *of the game* are played
    directly and the strategy answers with their image on the other side.
    Moves owned by the strategy must be elicited: every justified
    opposite-side probe is tried, and exactly one must make the strategy
    answer with the wanted move and pointer.  The probes are not filtered by
    alternation of the thread or by bracketing, so the lift is total on
    justified threads whenever the strategy behaves as an isomorphism half.
    """

    def __init__(self, sigma: Strategy, tag: str):
        if sigma.dom is None or sigma.cod is None:
            raise ExtractError("lifting needs a strategy between two games")
        self.sigma = sigma
        self.tag = tag
        self.other = "R" if tag == "L" else "L"
        self.game = sigma.arena
        self.cache: dict = {(): ((), ())}

    def _probes(self, u: Play) -> list[tuple]:
        """Opposite-side game-O one-move extensions of u, justified but not
        bracket-checked."""
        out = []
        # initial probes exist only on the right-hand side of the arrow
        if self.other == "R":
            for b in self.sigma.cod.initials:
                out.append((("R", b), None))
        for p, (mv, _) in enumerate(u):
            if mv[0] != self.other:
                continue
            for x in self.game.enabled(mv):
                if self.game.owner[x] == "O":
                    out.append((x, p))
        return out

    def lift(self, t: Play) -> tuple[Play, tuple]:
        """The game play over t and the game position of each thread move."""
        if t in self.cache:
            return self.cache[t]
        u, posmap = self.lift(t[:-1])
        m, ptr = t[-1]
        gm = (self.tag, m)
        if gm not in self.game.owner:
            raise ExtractError(f"{move_id(gm)} is not a move of the game")
        want_ptr = None if ptr is None else posmap[ptr]
        if self.game.owner[gm] == "O":
            if ptr is None and self.tag == "L":
                raise ExtractError("a domain initial is never a game O-move")
            u1 = u + ((gm, want_ptr),)
            r = self.sigma.respond(u1)
            if r is None:
                raise ExtractError(
                    f"{self.sigma.name or 'strategy'} is silent after "
                    f"{[move_id(x) for x, _ in u1]}: not a total "
                    f"isomorphism half")
            if r[0][0] != self.other:
                raise ExtractError(
                    f"{self.sigma.name or 'strategy'} answered on the same "
                    f"side as the probe: not an isomorphism half")
            out = u1 + (r,), posmap + (len(u),)
        else:
            hits = []
            for probe in self._probes(u):
                u1 = u + (probe,)
                r = self.sigma.respond(u1)
                if r is None:
                    continue
                expect = len(u) if ptr is None else want_ptr
                if r == (gm, expect):
                    hits.append(u1 + (r,))
            if not hits:
                raise ExtractError(
                    f"no probe makes {self.sigma.name or 'the strategy'} "
                    f"play {move_id(gm)} here: not a surjective "
                    f"isomorphism half")
            if len(hits) > 1:
                raise ExtractError(
                    f"{len(hits)} probes make "
                    f"{self.sigma.name or 'the strategy'} play "
                    f"{move_id(gm)} here: ambiguous lift")
            out = hits[0], posmap + (len(u) + 1,)
        self.cache[t] = out
        return out

    def image(self, t: Play) -> Play:
        u, _ = self.lift(t)
        return restrict(u, self.other)


def strategy_to_seq_morphism(sigma: Strategy) -> SeqMorphism:
    """The thread translator of an isomorphism half: the image of a thread of
    the domain is the codomain side of the unique strategy play over it, and
    the inverse translates codomain threads the same way.

    Totality, and uniqueness of every lift, are validated as threads are
    translated; a strategy that is not an isomorphism half fails loudly on
    the offending thread."""
    fwd = _Lifter(sigma, "L")
    bwd = _Lifter(sigma, "R")
    return SeqMorphism(sigma.dom, sigma.cod, fwd.image, bwd.image,
                       name=f"threads({sigma.name or '?'})")


def seq_morphism_to_strategy(phi: SeqMorphism) -> Strategy:
    """The strategy that plays a thread translator: each opponent move on one
    side is answered by the move its thread gains on the other side.

    Per game thread, the translator keeps the two side restrictions in
    bijection: an opponent codomain move is answered through the inverse, an
    opponent domain move through the map itself."""
    if phi.inverse_fn is None:
        raise ExtractError("only an invertible thread map plays a strategy")
    game = arrow(phi.src, phi.tgt)

    def oracle(u: Play):
        tps = current_thread_positions(u)
        local = {p: i for i, p in enumerate(tps)}
        thread = [(u[p][0], None if u[p][1] is None else local[u[p][1]])
                  for p in tps]
        sides = {"L": [], "R": []}
        for i, (mv, _) in enumerate(thread):
            sides[mv[0]].append(i)
        index = {"L": {t: i for i, t in enumerate(sides["L"])},
                 "R": {t: i for i, t in enumerate(sides["R"])}}

        def sub(tag):
            out = []
            for t in sides[tag]:
                mv, p = thread[t]
                if p is None or thread[p][0][0] != tag:
                    out.append((mv[1], None))
                else:
                    out.append((mv[1], index[tag][p]))
            return tuple(out)

        tag = thread[-1][0][0]
        if tag == "R":
            pre = phi.inverse_fn(sub("R"))
        else:
            pre = phi.fn(sub("L"))
        if len(pre) != len(sides["L" if tag == "R" else "R"]) + 1:
            raise ExtractError("thread map did not extend by one move")
        m, p = pre[-1]
        out_tag = "L" if tag == "R" else "R"
        if p is not None:
            gptr = tps[sides[out_tag][p]]
        elif out_tag == "L":
            gptr = tps[0]
        else:
            raise ExtractError("a proponent codomain move cannot be initial")
        return ((out_tag, m), gptr)

    return Strategy(game, oracle=oracle, dom=phi.src, cod=phi.tgt,
                    name=f"play({phi.name or '?'})")


# ------------------------------------------------------------- path maps

MovePath = tuple


def thread_of_path(path: MovePath) -> Play:
    """The thread in which every move points to the previous one."""
    return tuple((m, None if i == 0 else i - 1) for i, m in enumerate(path))


def path_of_thread(t: Play) -> MovePath:
    for i, (_, ptr) in enumerate(t):
        if ptr != (None if i == 0 else i - 1):
            raise ExtractError("thread is not a path")
    return tuple(m for m, _ in t)


@dataclass
class PathMorphism:
    """A length-preserving, prefix-compatible map on paths."""

    src: Arena
    tgt: Arena
    fn: Callable[[MovePath], MovePath]
    inverse_fn: Callable[[MovePath], MovePath] | None = None
    name: str = ""

    def __call__(self, path: MovePath) -> MovePath:
        return self.fn(path)


def restrict_to_paths(phi: SeqMorphism) -> PathMorphism:
    """The path translator of a thread translator.  The image of a path is
    again a path whenever the map commutes with justifier prefixes, which
    the translators of isomorphism strategies do; a non-path image raises."""

    def on_paths(f):
        def fn(path):
            return path_of_thread(f(thread_of_path(path)))
        return fn

    return PathMorphism(phi.src, phi.tgt, on_paths(phi.fn),
                        None if phi.inverse_fn is None
                        else on_paths(phi.inverse_fn),
                        name=f"paths({phi.name or '?'})")


def _enabling_path(t: Play, i: int) -> MovePath:
    chain = []
    j: int | None = i
    while j is not None:
        chain.append(t[j][0])
        j = t[j][1]
    return tuple(reversed(chain))


def extend_path_morphism(h: PathMorphism) -> SeqMorphism:
    """The pointwise extension of a path translator to all justified threads:
    each move is replaced by the last move of the image of its enabling path,
    keeping the pointer."""

    def on_threads(f):
        def fn(t):
            return tuple((f(_enabling_path(t, i))[-1], ptr)
                         for i, (_, ptr) in enumerate(t))
        return fn

    return SeqMorphism(h.src, h.tgt, on_threads(h.fn),
                       None if h.inverse_fn is None
                       else on_threads(h.inverse_fn),
                       name=f"pointwise({h.name or '?'})")


def path_morphism_from_iso(a: Arena, b: Arena, pi: PathIso) -> PathMorphism:
    """A tree isomorphism read as an (invertible) path translator."""

    def fwd(path):
        return tuple(pi.map_path(list(path)))

    def bwd(path):
        if not path:
            return ()
        inv_pairs = {y: x for x, y in pi.pairs}
        out = [inv_pairs[path[0]]]
        if len(path) > 1:
            w = pi.builder(out[0], path[0], len(path) - 1).inverse()
            for m in path[1:]:
                out.append(w.apply(m))
                w = w.sub(m)
        return tuple(out)

    return PathMorphism(a, b, fwd, bwd, name="tree-iso")


# ----------------------------------------------------------------- slicing

def slice_iso(f: dict, g: dict) -> dict:
    """Slice one finite bijection by another.

    f maps E onto F; g maps a subset E' of E onto a subset F' of F (g need
    not agree with f anywhere).  The returned bijection takes E without E'
    onto F without F' by chasing: follow f, and while the value still lies
    in F', pull it back through g and follow f again.  Each chase leaves F'
    within |g| + 1 steps."""
    if len(set(f.values())) != len(f):
        raise ExtractError("first argument is not injective")
    if len(set(g.values())) != len(g):
        raise ExtractError("second argument is not injective")
    if not set(g) <= set(f):
        raise ExtractError("sliced domain is not part of the full domain")
    if not set(g.values()) <= set(f.values()):
        raise ExtractError("sliced image is not part of the full image")
    ginv = {v: k for k, v in g.items()}
    out = {}
    for x in f:
        if x in g:
            continue
        y = f[x]
        steps = 0
        while y in ginv:
            y = f[ginv[y]]
            steps += 1
            if steps > len(g) + 1:
                raise ExtractError("slicing chase did not terminate")
        out[x] = y
    return out


def find_nonfunctorial_witness(max_size: int = 4) -> dict | None:
    """Search for two composable slicing instances where slicing the
    composite differs from composing the slices.

    Instances range over bijections f of {0..n-1} with sliced parts g from a
    subset E' onto a subset F', n up to max_size.  Returns the first witness
    found: the four bijections and the two differing slicings."""
    for n in range(2, max_size + 1):
        base = tuple(range(n))
        perms = [dict(zip(base, p)) for p in permutations(base)]
        for m in range(1, n):
            subs = list(combinations(base, m))
            # all bijections between every pair of m-subsets
            parts = [dict(zip(dom, perm))
                     for dom in subs for img in subs
                     for perm in permutations(img)]
            for f in perms:
                for g in parts:
                    for f2 in perms:
                        for g2 in parts:
                            if set(g.values()) != set(g2):
                                continue
                            fc = {x: f2[f[x]] for x in f}
                            gc = {x: g2[g[x]] for x in g}
                            lhs = slice_iso(fc, gc)
                            s1 = slice_iso(f, g)
                            s2 = slice_iso(f2, g2)
                            rhs = {x: s2[s1[x]] for x in s1}
                            if lhs != rhs:
                                return {"size": n, "f": f, "g": g,
                                        "f2": f2, "g2": g2,
                                        "sliced_composite": lhs,
                                        "composed_slices": rhs}
    return None


# --------------------------------------------- slicing graphs on threads

def _extension_entries(a: Arena, s: Play) -> list[tuple]:
    """All one-move justified extensions of a thread, as (move, ptr) entries:
    a justifier among the moves of s plus a move it enables.  The empty
    thread extends by the initial moves."""
    if not s:
        return [(m, None) for m in sorted(a.initials, key=move_key)]
    out = [(x, i) for i, (m, _) in enumerate(s)
           for x in sorted(a.enabled(m), key=move_key)]
    return out


@dataclass
class SlicingGraph:
    """The slicing instance induced by a thread translator at one extension.

    Vertices are the one-move extensions of sa (old ones and those enabled
    by the new move a) on the source side, and of its image on the target
    side.  Source vertices step forward through the translator; old target
    vertices step back through its inverse.  The only sinks are the
    extensions enabled by the image move b, and chasing from the extensions
    enabled by a reaches them — that pairing is the arity-level bijection
    the finite-depth witnesses are built from."""

    s: Play
    sa: Play
    e_s: tuple
    j_a: tuple
    f_s: tuple
    j_b: tuple
    edges: dict
    labels: dict

    def chase(self, entry: tuple) -> tuple[list, tuple]:
        """Follow the out-edges from a source extension until a sink; return
        the edge labels passed and the sink's entry."""
        v = ("E", entry)
        labels = []
        seen = {v}
        while v in self.edges:
            labels.append(self.labels[v])
            v = self.edges[v]
            if v in seen:
                raise ExtractError("slicing graph has a cycle")
            seen.add(v)
        if v[0] != "F" or v[1] not in self.j_b:
            raise ExtractError("chase ended outside the new image moves")
        return labels, v[1]


def build_slicing_graph(phi: SeqMorphism, s: Play, sa: Play) -> SlicingGraph:
    if sa[:-1] != s:
        raise ExtractError("second thread must extend the first by one move")
    if phi.inverse_fn is None:
        raise ExtractError("slicing needs an invertible thread map")
    if sa in phi._graph_memo:
        return phi._graph_memo[sa]
    t = phi(s)
    ta = phi(sa)
    e_all = _extension_entries(phi.src, sa)
    f_all = _extension_entries(phi.tgt, ta)
    new = len(sa) - 1
    j_a = tuple(e for e in e_all if e[1] == new)
    e_s = tuple(e for e in e_all if e[1] != new)
    j_b = tuple(e for e in f_all if e[1] == new)
    f_s = tuple(e for e in f_all if e[1] != new)
    edges = {}
    labels = {}
    fwd_img = set()
    for x in e_all:
        y = phi(sa + (x,))[-1]
        if y not in f_all or y in fwd_img:
            raise ExtractError("translator is not a bijection on extensions")
        fwd_img.add(y)
        edges[("E", x)] = ("F", y)
        labels[("E", x)] = ("ext", x)
    if len(fwd_img) != len(f_all):
        raise ExtractError("translator is not onto the image extensions")
    for y in f_s:
        x = phi.inverse_fn(t + (y,))[-1]
        if x not in e_s:
            raise ExtractError("inverse left the old extensions")
        edges[("F", y)] = ("E", x)
        labels[("F", y)] = ("inv", x)
    graph = SlicingGraph(s, sa, e_s, j_a, f_s, j_b, edges, labels)
    for entry in j_a:
        graph.chase(entry)
    phi._graph_memo[sa] = graph
    return graph


def extract_k_iso(phi: SeqMorphism, s: Play, sa: Play, k: int) -> KIso:
    """The depth-k tree isomorphism below the last move of sa and the last
    move of its image.

    Depth k pairs each move enabled by the new source move with the sink its
    chase reaches, and witnesses the pair by composing the depth-(k-1)
    isomorphisms labeling the chase: forward edges contribute the witness of
    that extension of sa, backward edges the inverse of the witness of the
    corresponding extension of s.  Results are cached on the translator, so
    deeper witnesses reuse shallower runs."""
    if not sa:
        raise ExtractError("the empty thread has no last move")
    key = (sa, k)
    if key in phi._kiso_memo:
        return phi._kiso_memo[key]
    if k <= 0:
        return KIso(0, ())
    graph = build_slicing_graph(phi, s, sa)
    pairs = []
    subs = {}
    for entry in graph.j_a:
        labels, sink = graph.chase(entry)
        w = None
        for kind, x in labels:
            if kind == "ext":
                lbl = extract_k_iso(phi, sa, sa + (x,), k - 1)
            else:
                lbl = extract_k_iso(phi, s, s + (x,), k - 1).inverse()
            w = lbl if w is None else w.compose(lbl)
        pairs.append((entry[0], sink[0]))
        subs[entry[0]] = w
    if sorted(move_key(b) for _, b in pairs) \
            != sorted(move_key(e[0]) for e in graph.j_b):
        raise ExtractError("chases do not pair the new moves bijectively")
    out = KIso(k, tuple(pairs), subs)
    phi._kiso_memo[key] = out
    return out


# ------------------------------------------------------------ whole games

def extract_path_iso(sigma: Strategy, depth: int = 0) -> PathIso:
    """The tree isomorphism of arenas underlying an isomorphism strategy.

    The initial bijection comes from the two-move plays: each codomain
    initial is answered by a distinct domain initial.  Below an initial
    pair, witnesses of any depth come from the slicing construction on the
    strategy's thread translator; the ones up to `depth` are computed now,
    the rest on demand."""
    phi = strategy_to_seq_morphism(sigma)
    fwd = {}
    for b in sorted(sigma.cod.initials, key=move_key):
        r = sigma.respond(((("R", b), None),))
        if r is None:
            raise ExtractError(f"silent on initial {move_id(b)}: "
                               f"not an isomorphism half")
        (tag, a), ptr = r
        if tag != "L" or ptr != 0:
            raise ExtractError("the answer to an initial move must be "
                               "a domain initial pointing at it")
        if a in fwd:
            raise ExtractError(f"domain initial {move_id(a)} answers two "
                               f"codomain initials")
        fwd[a] = b
    if set(fwd) != set(sigma.dom.initials):
        raise ExtractError("initial bijection does not cover the domain")
    pairs = tuple(sorted(fwd.items(), key=lambda p: move_key(p[0])))

    def build(a, b, k):
        w = extract_k_iso(phi, (), ((a, None),), k)
        return w

    out = PathIso(pairs, build)
    for a, b in pairs:
        build(a, b, depth)
    return out


# ---------------------------------------------------------------- renaming

def rename_strategy(sigma: Strategy, pi_dom: dict, pi_cod: dict) -> Strategy:
    """The conjugate of a strategy under move renamings of its two games."""
    dom2 = rename_moves(sigma.dom, pi_dom)
    cod2 = rename_moves(sigma.cod, pi_cod)
    inv = {"L": {v: k for k, v in pi_dom.items()},
           "R": {v: k for k, v in pi_cod.items()}}
    fwd = {"L": pi_dom, "R": pi_cod}

    def back_entry(e):
        (tag, m), ptr = e
        return ((tag, inv[tag][m]), ptr)

    def oracle(u: Play):
        r = sigma.respond(tuple(back_entry(e) for e in u))
        if r is None:
            return None
        (tag, m), ptr = r
        return ((tag, fwd[tag][m]), ptr)

    return Strategy(arrow(dom2, cod2), oracle=oracle, dom=dom2, cod=cod2,
                    name=f"renamed({sigma.name or '?'})")


def kiso_rename(w: KIso, pi_a: dict, pi_b: dict) -> KIso:
    """Transport a depth-k witness along move renamings of both arenas."""
    if w.depth == 0:
        return w
    return KIso(w.depth,
                tuple((pi_a[x], pi_b[y]) for x, y in w.pairs),
                {pi_a[x]: kiso_rename(w.subs[x], pi_a, pi_b)
                 for x, _ in w.pairs})
