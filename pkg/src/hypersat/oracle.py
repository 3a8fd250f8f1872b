"""Ground-truth HyperLTL semantics over finite sets of lasso traces.

Quantifiers range over the trace set; the body is evaluated on the combined
lasso assignment after aligning all chosen traces to a common stem length
(the maximum) and a common loop length (the least common multiple), which
is exact for ultimately periodic words.  On top of the evaluator sits a
bounded explicit-model finder that enumerates candidate trace sets in
canonical order (fewest true bits first) and reports the first model.

The model finder is an oracle for the SAT direction only: NoModelUpTo means
nothing beyond "no model within these bounds".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from . import formula as F
from . import kernel

POSITION_CAP = 1 << 20
_POOL_CAP = 2_000_000
_MEMO_CAP = 2_000_000


class OracleError(Exception):
    pass


class EmptyTraceSetError(OracleError):
    pass


class BoundsExceededError(OracleError):
    """Requested bounds would exceed the position/enumeration caps."""


@dataclass(frozen=True)
class LassoTrace:
    """Ultimately periodic trace stem . loop^omega over sets of AP names."""

    stem: tuple
    loop: tuple

    def __post_init__(self):
        if len(self.loop) < 1:
            raise OracleError("lasso loop must be nonempty")

    def at(self, i: int) -> frozenset:
        if i < len(self.stem):
            return self.stem[i]
        return self.loop[(i - len(self.stem)) % len(self.loop)]

    def bits(self) -> int:
        return sum(len(p) for p in self.stem) + sum(len(p) for p in self.loop)

    def key(self):
        return (self.bits(), len(self.stem) + len(self.loop), len(self.stem),
                tuple(tuple(sorted(p)) for p in self.stem),
                tuple(tuple(sorted(p)) for p in self.loop))

    def canonical(self) -> "LassoTrace":
        """Smallest representation of the same infinite word."""
        loop = list(self.loop)
        for period in range(1, len(loop)):
            if len(loop) % period == 0 and loop == loop[:period] * (len(loop) // period):
                loop = loop[:period]
                break
        stem = list(self.stem)
        while stem and stem[-1] == loop[-1]:
            stem.pop()
            loop = [loop[-1]] + loop[:-1]
        return LassoTrace(tuple(stem), tuple(loop))


@dataclass(frozen=True)
class LassoTraceSet:
    traces: tuple
    ap_universe: frozenset

    def __post_init__(self):
        assert len(set(self.traces)) == len(self.traces)


@dataclass(frozen=True)
class Found:
    model: LassoTraceSet


@dataclass(frozen=True)
class NoModelUpTo:
    max_traces: int
    max_stem: int
    max_loop: int


def _lcm_all(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v)
    return out


class Evaluator:
    """Evaluates one formula's body over trace assignments, with memoization.

    Shared across candidate sets during model search: the body value of an
    assignment depends only on the assigned traces, not on the rest of the
    candidate set.
    """

    def __init__(self, phi: F.HyperFormula):
        self.phi = phi
        self.aps = sorted({ap for ap, _ in F.atoms_of(phi.body)})
        atom_order = [(ap, var) for var in phi.variables for ap in self.aps]
        self.prog = kernel.compile_body(phi.body, atom_order)
        self._memo: dict = {}
        self._cols: dict = {}

    def _trace_matrix(self, trace: LassoTrace, stem_len: int, loop_len: int):
        key = (trace, stem_len, loop_len)
        mat = self._cols.get(key)
        if mat is None:
            n = stem_len + loop_len
            mat = np.zeros((n, len(self.aps)), dtype=np.uint8)
            for i in range(n):
                letter = trace.at(i)
                for j, ap in enumerate(self.aps):
                    if ap in letter:
                        mat[i, j] = 1
            self._cols[key] = mat
        return mat

    def body_value(self, assignment: tuple) -> bool:
        hit = self._memo.get(assignment)
        if hit is not None:
            return hit
        stem_len = max((len(t.stem) for t in assignment), default=0)
        loop_len = _lcm_all(len(t.loop) for t in assignment)
        if stem_len + 2 * loop_len > POSITION_CAP:
            raise BoundsExceededError(
                f"aligned word needs {stem_len} + 2*{loop_len} positions")
        if assignment:
            word = np.hstack([self._trace_matrix(t, stem_len, loop_len)
                              for t in assignment])
        else:
            word = np.zeros((1, 0), dtype=np.uint8)
            stem_len, loop_len = 0, 1
        value = kernel.eval_compiled(self.prog, np.ascontiguousarray(word),
                                     stem_len, loop_len)
        if len(self._memo) > _MEMO_CAP:
            self._memo.clear()
        self._memo[assignment] = value
        return value

    def satisfies(self, traces: tuple) -> bool:
        prefix = self.phi.prefix

        def rec(k: int, chosen: tuple) -> bool:
            if k == len(prefix):
                return self.body_value(chosen)
            if prefix[k][0] is F.Quantifier.FORALL:
                return all(rec(k + 1, chosen + (t,)) for t in traces)
            return any(rec(k + 1, chosen + (t,)) for t in traces)

        return rec(0, ())


def eval_hyperltl(phi: F.HyperFormula, model: LassoTraceSet) -> bool:
    """Does the trace set satisfy the formula?  Exact, no approximation."""
    if not model.traces:
        raise EmptyTraceSetError("model candidates must be nonempty")
    return Evaluator(phi).satisfies(model.traces)


# ---------------------------------------------------------------------------
# Bounded model finding
# ---------------------------------------------------------------------------

def _trace_pool(aps, max_stem: int, max_loop: int):
    """All canonical lasso traces within the bounds, cheapest first."""
    letters = [frozenset(c) for r in range(len(aps) + 1)
               for c in combinations(aps, r)]
    letters.sort(key=lambda s: (len(s), tuple(sorted(s))))
    pool = {}
    count = 0
    for stem_len in range(max_stem + 1):
        for loop_len in range(1, max_loop + 1):
            count += len(letters) ** (stem_len + loop_len)
            if count > _POOL_CAP:
                raise BoundsExceededError(
                    "trace enumeration exceeds the candidate cap; "
                    "reduce max_stem/max_loop or the AP count")
            for content in product(letters, repeat=stem_len + loop_len):
                trace = LassoTrace(content[:stem_len], content[stem_len:])
                canon = trace.canonical()
                pool.setdefault(canon.key(), canon)
    return [pool[k] for k in sorted(pool)]


def bounded_find_model(phi: F.HyperFormula, max_traces: int, max_stem: int,
                       max_loop: int):
    """Search for a model with at most the given trace count and lasso sizes.

    Candidate sets are tried by ascending total bit count, so the first hit
    is a minimal, readable witness.  Returns Found(model) or NoModelUpTo;
    the latter says nothing about satisfiability beyond the bounds.
    """
    if max_traces < 1 or max_loop < 1 or max_stem < 0:
        raise ValueError("bounds must satisfy max_traces, max_loop >= 1, max_stem >= 0")
    worst_loop = 1
    for v in range(2, max_loop + 1):
        worst_loop = math.lcm(worst_loop, v)
        if max_stem + 2 * worst_loop > POSITION_CAP:
            raise BoundsExceededError("position cap exceeded by the loop bound")

    aps = sorted({ap for ap, _ in F.atoms_of(phi.body)})
    pool = _trace_pool(aps, max_stem, max_loop)
    evaluator = Evaluator(phi)

    candidates = []
    for k in range(1, min(max_traces, len(pool)) + 1):
        for combo in combinations(range(len(pool)), k):
            weight = sum(pool[i].bits() for i in combo)
            candidates.append((weight, combo))
            if len(candidates) > _POOL_CAP:
                raise BoundsExceededError(
                    "candidate-set enumeration exceeds the cap; "
                    "reduce max_traces or the lasso bounds")
    candidates.sort(key=lambda wc: (wc[0], len(wc[1]), wc[1]))

    universe = frozenset(aps)
    for _, combo in candidates:
        traces = tuple(pool[i] for i in combo)
        if evaluator.satisfies(traces):
            model = LassoTraceSet(traces, universe)
            assert eval_hyperltl(phi, model), "model finder self-check failed"
            return Found(model)
    return NoModelUpTo(max_traces, max_stem, max_loop)


def format_witness(model: LassoTraceSet) -> str:
    """Render a model as one `trace k: stem | loop` line per trace."""
    lines = []
    for k, trace in enumerate(model.traces):
        stem = " ".join(_fmt_letter(p) for p in trace.stem)
        loop = " ".join(_fmt_letter(p) for p in trace.loop)
        lines.append(f"trace {k}: {stem + ' ' if stem else ''}| {loop}")
    return "\n".join(lines)


def _fmt_letter(letter) -> str:
    return "{" + ",".join(sorted(letter)) + "}"
