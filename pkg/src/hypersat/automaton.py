"""Symbolic automata for LTL bodies over indexed atoms.

Bodies in negation normal form are compiled to nondeterministic Buchi
automata with a tableau (expand/next-step) construction; generalized
acceptance from until-style obligations is removed with a round-robin
counter.  Bodies in the U/F-free fragment additionally compile to
nondeterministic safety automata whose single absorbing bad state is the
tableau's contradiction node.

Edge labels are cubes: partial assignments over the atom alphabet.  A cube
stands for every full letter consistent with it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from . import formula as F

AtomId = tuple  # (ap, var)


class AutomatonError(Exception):
    pass


class NotSyntacticallySafeError(AutomatonError):
    pass


class EmptyLoopError(AutomatonError):
    pass


@dataclass(frozen=True)
class Cube:
    """Partial assignment: positive and negative atom literals."""

    positives: frozenset
    negatives: frozenset

    def __post_init__(self):
        if self.positives & self.negatives:
            raise AutomatonError("contradictory cube")

    def matches(self, letter) -> bool:
        """Does a full letter (set of atom ids) fall inside this cube?"""
        return self.positives <= letter and not (self.negatives & letter)

    def atoms(self) -> frozenset:
        return self.positives | self.negatives

    def key(self):
        return (tuple(sorted(self.positives)), tuple(sorted(self.negatives)))


EMPTY_CUBE = Cube(frozenset(), frozenset())


@dataclass(frozen=True)
class Buchi:
    accepting: frozenset


@dataclass(frozen=True)
class Safety:
    bad: frozenset


@dataclass(frozen=True)
class SymbolicAutomaton:
    """States are 0..n-1; edges carry cube labels; immutable once built."""

    num_states: int
    initial: frozenset
    edges: tuple  # of (src, Cube, dst)
    acceptance: object  # Buchi | Safety
    atoms: frozenset
    state_labels: tuple = field(default=(), compare=False)

    @property
    def states(self) -> range:
        return range(self.num_states)

    def edges_from(self, state: int):
        return [e for e in self.edges if e[0] == state]

    def dump(self) -> str:
        """Plain-text debug listing (not a stability contract)."""
        kind = "Buchi" if isinstance(self.acceptance, Buchi) else "Safety"
        marked = (self.acceptance.accepting if isinstance(self.acceptance, Buchi)
                  else self.acceptance.bad)
        lines = [f"{kind} automaton: {self.num_states} states,"
                 f" initial {sorted(self.initial)},"
                 f" {'accepting' if kind == 'Buchi' else 'bad'} {sorted(marked)}"]
        for src, cube, dst in self.edges:
            pos = " ".join(f"+{a}_{v}" for a, v in sorted(cube.positives))
            neg = " ".join(f"-{a}_{v}" for a, v in sorted(cube.negatives))
            label = " ".join(x for x in (pos, neg) if x) or "<any>"
            lines.append(f"  {src} --[{label}]--> {dst}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Tableau covers
# ---------------------------------------------------------------------------

_key_cache: dict = {}


def _key(node: F.LtlBody) -> str:
    k = _key_cache.get(node)
    if k is None:
        k = F.pretty_body(node)
        _key_cache[node] = k
    return k


@dataclass(frozen=True)
class _Cover:
    pos: frozenset
    neg: frozenset
    nxt: frozenset
    postponed: frozenset  # until-like subformulas delayed on this step


def _covers(obligations: frozenset) -> tuple:
    """All one-step expansions of an obligation set.

    Each cover gives the literal cube that must hold now, the obligations
    shifted to the next step, and which until/eventually obligations chose
    their delaying branch.
    """
    results: dict = {}

    def run(pending, pos, neg, nxt, postponed, done):
        while pending:
            node = pending.pop()
            if node in done:
                continue
            done = done | {node}
            if isinstance(node, F.TrueConst):
                continue
            if isinstance(node, F.FalseConst):
                return
            if isinstance(node, F.Atom):
                atom = (node.ap, node.var)
                if atom in neg:
                    return
                pos = pos | {atom}
                continue
            if isinstance(node, F.Not):
                if not isinstance(node.arg, F.Atom):
                    raise AutomatonError("tableau input must be in NNF")
                atom = (node.arg.ap, node.arg.var)
                if atom in pos:
                    return
                neg = neg | {atom}
                continue
            if isinstance(node, F.And):
                pending = pending + sorted({node.left, node.right},
                                           key=_key, reverse=True)
                continue
            if isinstance(node, F.Next):
                if not isinstance(node.arg, F.TrueConst):
                    nxt = nxt | {node.arg}
                continue
            if isinstance(node, F.Globally):
                pending = pending + [node.arg]
                nxt = nxt | {node}
                continue
            if isinstance(node, F.Or):
                for branch in sorted({node.left, node.right}, key=_key):
                    run(pending + [branch], pos, neg, nxt, postponed, done)
                return
            if isinstance(node, F.Until):
                run(pending + [node.right], pos, neg, nxt, postponed, done)
                run(pending + [node.left], pos, neg, nxt | {node},
                    postponed | {node}, done)
                return
            if isinstance(node, F.Eventually):
                run(pending + [node.arg], pos, neg, nxt, postponed, done)
                run(pending, pos, neg, nxt | {node}, postponed | {node}, done)
                return
            if isinstance(node, F.WeakUntil):
                run(pending + [node.right], pos, neg, nxt, postponed, done)
                run(pending + [node.left], pos, neg, nxt | {node}, postponed,
                    done)
                return
            if isinstance(node, F.Release):
                run(pending + sorted({node.left, node.right}, key=_key),
                    pos, neg, nxt, postponed, done)
                run(pending + [node.right], pos, neg, nxt | {node}, postponed,
                    done)
                return
            raise AutomatonError(f"unsupported node in tableau: {node!r}")
        cover = _Cover(frozenset(pos), frozenset(neg), frozenset(nxt),
                       frozenset(postponed))
        results.setdefault((cover.pos, cover.neg, cover.nxt, cover.postponed),
                           cover)

    run(sorted(obligations, key=_key, reverse=True), frozenset(), frozenset(),
        frozenset(), frozenset(), frozenset())
    return _prune_subsumed(list(results.values()))


def _prune_subsumed(covers: list) -> tuple:
    """Drop covers strictly dominated by a weaker one.

    A cover with fewer literal constraints, fewer next obligations, and
    fewer postponements allows every continuation the stronger one does.
    """
    kept = []
    for c in sorted(covers, key=lambda c: (len(c.pos) + len(c.neg),
                                           len(c.nxt), len(c.postponed),
                                           _cover_key(c))):
        if not any(k.pos <= c.pos and k.neg <= c.neg and k.nxt <= c.nxt
                   and k.postponed <= c.postponed for k in kept):
            kept.append(c)
    return tuple(kept)


def _cover_key(c: _Cover):
    return (tuple(sorted(c.pos)), tuple(sorted(c.neg)),
            tuple(sorted(_key(n) for n in c.nxt)),
            tuple(sorted(_key(n) for n in c.postponed)))


def _initial_obligations(body: F.LtlBody) -> frozenset:
    return frozenset() if isinstance(body, F.TrueConst) else frozenset({body})


def _liveness_subformulas(body: F.LtlBody) -> list:
    seen = []
    stack = [body]
    visited = set()
    while stack:
        node = stack.pop()
        if node in visited:
            continue
        visited.add(node)
        if isinstance(node, (F.Until, F.Eventually)):
            seen.append(node)
        if isinstance(node, (F.Not, F.Next, F.Eventually, F.Globally)):
            stack.append(node.arg)
        elif isinstance(node, (F.And, F.Or, F.Until, F.WeakUntil, F.Release)):
            stack.append(node.left)
            stack.append(node.right)
    return sorted(seen, key=_key)


# ---------------------------------------------------------------------------
# NBA construction
# ---------------------------------------------------------------------------

def ltl_to_nba(body: F.LtlBody, atoms: frozenset) -> SymbolicAutomaton:
    """Tableau construction for an NNF body, degeneralized to one Buchi set.

    atoms must cover every atom of the body; it fixes the automaton's
    alphabet support.
    """
    if not F.atoms_of(body) <= frozenset(atoms):
        raise AutomatonError("atom set does not cover the body")
    liveness = _liveness_subformulas(body)
    m = len(liveness)
    live_index = {u: i for i, u in enumerate(liveness)}

    covers_of = lru_cache(maxsize=None)(_covers)
    init_core = _initial_obligations(body)

    # state = (obligations, counter); counter m is the accepting flag state
    start = (init_core, 0)
    index = {start: 0}
    order = [start]
    edges = []
    frontier = [start]
    while frontier:
        state = frontier.pop(0)
        src = index[state]
        obls, counter = state
        base = 0 if counter == m else counter
        for cover in covers_of(obls):
            if m:
                delayed = {live_index[u] for u in cover.postponed}
                j = base
                while j < m and j not in delayed:
                    j += 1
                new_counter = m if j == m else j
            else:
                new_counter = 0
            target = (cover.nxt, new_counter)
            if target not in index:
                index[target] = len(order)
                order.append(target)
                frontier.append(target)
            edges.append((src, Cube(cover.pos, cover.neg), index[target]))

    if m:
        accepting = frozenset(i for i, (_, c) in enumerate(order) if c == m)
    else:
        accepting = frozenset(range(len(order)))
    labels = tuple(f"{{{', '.join(sorted(_key(o) for o in obls))}}}@{c}"
                   for obls, c in order)
    return SymbolicAutomaton(
        num_states=len(order),
        initial=frozenset({0}),
        edges=tuple(edges),
        acceptance=Buchi(accepting),
        atoms=frozenset(atoms),
        state_labels=labels,
    )


# ---------------------------------------------------------------------------
# Safety fragment
# ---------------------------------------------------------------------------

_SAFE_BINARY = (F.And, F.Or, F.WeakUntil, F.Release)


def is_syntactically_safe(body: F.LtlBody) -> bool:
    """Sound syntactic check: NNF without until/eventually.

    True guarantees the body denotes a safety property; False only means
    the check could not establish it.
    """
    if isinstance(body, (F.Atom, F.TrueConst, F.FalseConst)):
        return True
    if isinstance(body, F.Not):
        return isinstance(body.arg, F.Atom)
    if isinstance(body, (F.Next, F.Globally)):
        return is_syntactically_safe(body.arg)
    if isinstance(body, _SAFE_BINARY):
        return is_syntactically_safe(body.left) and is_syntactically_safe(body.right)
    return False


def to_safety_automaton(body: F.LtlBody, atoms: frozenset) -> SymbolicAutomaton:
    """Safety automaton for a body in the safe NNF fragment.

    Every run of the tableau restricted to this fragment is accepting, so
    the automaton is the tableau plus a single absorbing bad state that
    absorbs all letters not matched by any outgoing cover.
    """
    if not is_syntactically_safe(body):
        raise NotSyntacticallySafeError(F.pretty_body(body))
    if not F.atoms_of(body) <= frozenset(atoms):
        raise AutomatonError("atom set does not cover the body")

    covers_of = lru_cache(maxsize=None)(_covers)
    init_core = _initial_obligations(body)

    if not covers_of(init_core):
        # contradiction right away: the initial state is the bad state
        return SymbolicAutomaton(
            num_states=1,
            initial=frozenset({0}),
            edges=((0, EMPTY_CUBE, 0),),
            acceptance=Safety(frozenset({0})),
            atoms=frozenset(atoms),
            state_labels=("<bad>",),
        )

    index = {init_core: 0}
    order = [init_core]
    edges = []
    bad_needed = False
    BAD = -1  # patched to the real index afterwards
    frontier = [init_core]
    while frontier:
        obls = frontier.pop(0)
        src = index[obls]
        state_covers = covers_of(obls)
        for cover in state_covers:
            if covers_of(cover.nxt):
                if cover.nxt not in index:
                    index[cover.nxt] = len(order)
                    order.append(cover.nxt)
                    frontier.append(cover.nxt)
                dst = index[cover.nxt]
            else:
                dst = BAD
                bad_needed = True
            edges.append((src, Cube(cover.pos, cover.neg), dst))
        for cube in _uncovered_cubes([Cube(c.pos, c.neg) for c in state_covers]):
            edges.append((src, cube, BAD))
            bad_needed = True

    if bad_needed:
        bad = len(order)
        edges.append((bad, EMPTY_CUBE, bad))
        edges = [(s, c, bad if d == BAD else d) for s, c, d in edges]
        num, bad_set = bad + 1, frozenset({bad})
    else:
        num, bad_set = len(order), frozenset()
    labels = tuple(f"{{{', '.join(sorted(_key(o) for o in obls))}}}"
                   for obls in order) + (("<bad>",) if bad_needed else ())
    return SymbolicAutomaton(
        num_states=num,
        initial=frozenset({0}),
        edges=tuple(edges),
        acceptance=Safety(bad_set),
        atoms=frozenset(atoms),
        state_labels=labels,
    )


def _uncovered_cubes(cubes: list) -> list:
    """Cubes covering the complement of a union of cubes (Shannon split)."""
    if not cubes:
        return [EMPTY_CUBE]
    if any(not c.atoms() for c in cubes):
        return []
    counts: dict = {}
    for c in cubes:
        for a in c.atoms():
            counts[a] = counts.get(a, 0) + 1
    atom = max(sorted(counts), key=lambda a: counts[a])

    def restrict(value: bool) -> list:
        out = []
        for c in cubes:
            if value and atom in c.negatives:
                continue
            if not value and atom in c.positives:
                continue
            out.append(Cube(c.positives - {atom}, c.negatives - {atom}))
        return out

    result = []
    for cube in _uncovered_cubes(restrict(True)):
        result.append(Cube(cube.positives | {atom}, cube.negatives))
    for cube in _uncovered_cubes(restrict(False)):
        result.append(Cube(cube.positives, cube.negatives | {atom}))
    return result


def expand_cubes(aut: SymbolicAutomaton) -> SymbolicAutomaton:
    """Expand every cube label into the full letters it stands for.

    Exponential in the number of unmentioned atoms; only meant for
    conformance testing against letter-exact transition relations.
    """
    all_atoms = sorted(aut.atoms)
    edges = []
    for src, cube, dst in aut.edges:
        free = [a for a in all_atoms if a not in cube.atoms()]
        for bits in range(1 << len(free)):
            pos = set(cube.positives)
            neg = set(cube.negatives)
            for i, a in enumerate(free):
                (pos if bits >> i & 1 else neg).add(a)
            edges.append((src, Cube(frozenset(pos), frozenset(neg)), dst))
    return SymbolicAutomaton(
        num_states=aut.num_states,
        initial=aut.initial,
        edges=tuple(edges),
        acceptance=aut.acceptance,
        atoms=aut.atoms,
        state_labels=aut.state_labels,
    )


# ---------------------------------------------------------------------------
# Lasso acceptance
# ---------------------------------------------------------------------------

def accepts_lasso(aut: SymbolicAutomaton, stem, loop) -> bool:
    """Does the automaton accept the word stem . loop^omega?

    Letters are sets of atom ids (full assignments over aut.atoms).  For
    Buchi acceptance we search the automaton/position product for a
    reachable accepting cycle inside the repeated part; for safety we track
    the reachable non-bad state set for |stem| + |loop|*|Q| steps, which by
    a pigeonhole argument decides the existence of an infinite run.
    """
    stem = [frozenset(x) for x in stem]
    loop = [frozenset(x) for x in loop]
    if not loop:
        raise EmptyLoopError("lasso loop must be nonempty")
    if not aut.initial:
        return False
    n_pos = len(stem) + len(loop)
    word = stem + loop

    succs: dict = {}
    for src, cube, dst in aut.edges:
        succs.setdefault(src, []).append((cube, dst))

    def letter(p: int):
        return word[p]

    def advance(p: int) -> int:
        return p + 1 if p + 1 < n_pos else len(stem)

    if isinstance(aut.acceptance, Safety):
        bad = aut.acceptance.bad
        current = set(aut.initial) - bad
        p = 0
        for _ in range(len(stem) + len(loop) * aut.num_states):
            if not current:
                return False
            sigma = letter(p)
            current = {dst for q in current for cube, dst in succs.get(q, ())
                       if dst not in bad and cube.matches(sigma)}
            p = advance(p)
        return bool(current)

    accepting = aut.acceptance.accepting
    # reachable product nodes
    start = {(q, 0) for q in aut.initial}
    reached = set(start)
    frontier = list(start)
    while frontier:
        q, p = frontier.pop()
        sigma = letter(p)
        np_ = advance(p)
        for cube, dst in succs.get(q, ()):
            if cube.matches(sigma) and (dst, np_) not in reached:
                reached.add((dst, np_))
                frontier.append((dst, np_))

    loop_nodes = {(q, p) for q, p in reached if p >= len(stem)}
    for node in loop_nodes:
        if node[0] not in accepting:
            continue
        # is the node on a cycle of the product restricted to the loop part?
        frontier = [node]
        seen = set()
        while frontier:
            q, p = frontier.pop()
            sigma = letter(p)
            np_ = advance(p)
            for cube, dst in succs.get(q, ()):
                if not cube.matches(sigma):
                    continue
                if (dst, np_) == node:
                    return True
                if (dst, np_) not in seen:
                    seen.add((dst, np_))
                    frontier.append((dst, np_))
    return False
