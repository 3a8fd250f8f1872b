# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled lasso evaluation kernel; mirrors _ltlkernel_py.eval_program."""

import numpy as np

cdef enum:
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


def eval_program(int[::1] ops, int[::1] arg1, int[::1] arg2,
                 unsigned char[:, ::1] word, int stem_len, int loop_len):
    cdef int n_nodes = ops.shape[0]
    cdef int n_pos = stem_len + loop_len
    vals_arr = np.empty((n_nodes, n_pos), dtype=np.uint8)
    cdef unsigned char[:, ::1] vals = vals_arr
    cdef int n, p, s, a, b, op, sweep
    cdef unsigned char v

    for n in range(n_nodes):
        op = ops[n]
        a = arg1[n]
        b = arg2[n]
        if op == OP_ATOM:
            for p in range(n_pos):
                vals[n, p] = word[p, a]
        elif op == OP_TRUE:
            for p in range(n_pos):
                vals[n, p] = 1
        elif op == OP_FALSE:
            for p in range(n_pos):
                vals[n, p] = 0
        elif op == OP_NOT:
            for p in range(n_pos):
                vals[n, p] = 1 - vals[a, p]
        elif op == OP_AND:
            for p in range(n_pos):
                vals[n, p] = vals[a, p] & vals[b, p]
        elif op == OP_OR:
            for p in range(n_pos):
                vals[n, p] = vals[a, p] | vals[b, p]
        elif op == OP_IMPLIES:
            for p in range(n_pos):
                vals[n, p] = (1 - vals[a, p]) | vals[b, p]
        elif op == OP_IFF:
            for p in range(n_pos):
                vals[n, p] = 1 if vals[a, p] == vals[b, p] else 0
        elif op == OP_NEXT:
            for p in range(n_pos):
                s = p + 1 if p + 1 < n_pos else stem_len
                vals[n, p] = vals[a, s]
        else:
            # fixpoint operators: init, two loop sweeps, one stem pass
            if op == OP_UNTIL or op == OP_RELEASE:
                for p in range(n_pos):
                    vals[n, p] = vals[b, p]
            elif op == OP_EVENTUALLY or op == OP_GLOBALLY:
                for p in range(n_pos):
                    vals[n, p] = vals[a, p]
            else:  # OP_WUNTIL
                for p in range(n_pos):
                    vals[n, p] = vals[a, p] | vals[b, p]
            for sweep in range(2):
                for p in range(n_pos - 1, stem_len - 1, -1):
                    s = p + 1 if p + 1 < n_pos else stem_len
                    vals[n, p] = _step(op, vals, a, b, n, p, s)
            for p in range(stem_len - 1, -1, -1):
                vals[n, p] = _step(op, vals, a, b, n, p, p + 1)

    return vals[n_nodes - 1, 0]


cdef inline unsigned char _step(int op, unsigned char[:, ::1] vals,
                                int a, int b, int n, int p, int s) nogil:
    if op == OP_UNTIL or op == OP_WUNTIL:
        return vals[b, p] | (vals[a, p] & vals[n, s])
    if op == OP_RELEASE:
        return vals[b, p] & (vals[a, p] | vals[n, s])
    if op == OP_EVENTUALLY:
        return vals[a, p] | vals[n, s]
    # OP_GLOBALLY
    return vals[a, p] & vals[n, s]
