"""Pure-Python fallback for the lasso evaluation kernel.

Implements the same contract as the compiled extension; see kernel.py for
the algorithm.  Works on plain lists for speed.
"""

from __future__ import annotations

OP_ATOM = 0
OP_TRUE = 1
OP_FALSE = 2
OP_NOT = 3
OP_AND = 4
OP_OR = 5
OP_IMPLIES = 6
OP_IFF = 7
OP_NEXT = 8
OP_UNTIL = 9
OP_RELEASE = 10
OP_WUNTIL = 11
OP_EVENTUALLY = 12
OP_GLOBALLY = 13


def eval_program(ops, arg1, arg2, word, stem_len, loop_len):
    n_nodes = len(ops)
    n_pos = stem_len + loop_len
    rows = word.tolist() if hasattr(word, "tolist") else [list(r) for r in word]
    vals: list[list[int]] = [None] * n_nodes  # type: ignore[list-item]

    for n in range(n_nodes):
        op = ops[n]
        a = arg1[n]
        b = arg2[n]
        if op == OP_ATOM:
            row = [rows[p][a] for p in range(n_pos)]
        elif op == OP_TRUE:
            row = [1] * n_pos
        elif op == OP_FALSE:
            row = [0] * n_pos
        elif op == OP_NOT:
            c = vals[a]
            row = [1 - c[p] for p in range(n_pos)]
        elif op == OP_AND:
            l, r = vals[a], vals[b]
            row = [l[p] & r[p] for p in range(n_pos)]
        elif op == OP_OR:
            l, r = vals[a], vals[b]
            row = [l[p] | r[p] for p in range(n_pos)]
        elif op == OP_IMPLIES:
            l, r = vals[a], vals[b]
            row = [(1 - l[p]) | r[p] for p in range(n_pos)]
        elif op == OP_IFF:
            l, r = vals[a], vals[b]
            row = [1 if l[p] == r[p] else 0 for p in range(n_pos)]
        elif op == OP_NEXT:
            c = vals[a]
            row = [c[p + 1] if p + 1 < n_pos else c[stem_len]
                   for p in range(n_pos)]
        else:
            row = _fixpoint(op, vals, a, b, n_pos, stem_len)
        vals[n] = row

    return vals[n_nodes - 1][0]


def _fixpoint(op, vals, a, b, n_pos, stem_len):
    if op == OP_UNTIL:
        c1, c2 = vals[a], vals[b]
        row = c2[:]
        step = lambda p, s: c2[p] | (c1[p] & row[s])
    elif op == OP_RELEASE:
        c1, c2 = vals[a], vals[b]
        row = c2[:]
        step = lambda p, s: c2[p] & (c1[p] | row[s])
    elif op == OP_WUNTIL:
        c1, c2 = vals[a], vals[b]
        row = [c1[p] | c2[p] for p in range(n_pos)]
        step = lambda p, s: c2[p] | (c1[p] & row[s])
    elif op == OP_EVENTUALLY:
        c = vals[a]
        row = c[:]
        step = lambda p, s: c[p] | row[s]
    elif op == OP_GLOBALLY:
        c = vals[a]
        row = c[:]
        step = lambda p, s: c[p] & row[s]
    else:
        raise ValueError(f"bad opcode {op}")

    # two backward sweeps over the loop, then one over the stem
    for _ in range(2):
        for p in range(n_pos - 1, stem_len - 1, -1):
            s = p + 1 if p + 1 < n_pos else stem_len
            row[p] = step(p, s)
    for p in range(stem_len - 1, -1, -1):
        row[p] = step(p, p + 1)
    return row
