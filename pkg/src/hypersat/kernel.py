"""Fast evaluation of LTL bodies over ultimately periodic words.

A body is compiled once into a flat postorder program (opcode plus child
indices per node); the program is then evaluated against a word given as a
(positions x atoms) 0/1 matrix describing ``stem . loop^omega``.  Until-like
operators are solved exactly with two backward sweeps over the loop
positions followed by one backward pass over the stem.

Evaluation is the hot loop of the bounded model finder, so the inner loop
lives in a compiled extension (``_ltlkernel``) when available, with a
pure-Python fallback (``_ltlkernel_py``) selected at import time.  Set
``HYPERSAT_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import formula as F

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

_UNARY = {F.Not: OP_NOT, F.Next: OP_NEXT, F.Eventually: OP_EVENTUALLY,
          F.Globally: OP_GLOBALLY}
_BINARY = {F.And: OP_AND, F.Or: OP_OR, F.Implies: OP_IMPLIES, F.Iff: OP_IFF,
           F.Until: OP_UNTIL, F.Release: OP_RELEASE, F.WeakUntil: OP_WUNTIL}


if os.environ.get("HYPERSAT_PURE"):
    from . import _ltlkernel_py as _impl
    BACKEND = "python"
else:
    try:
        from . import _ltlkernel as _impl  # type: ignore[attr-defined]
        BACKEND = "compiled"
    except ImportError:
        from . import _ltlkernel_py as _impl
        BACKEND = "python"


@dataclass(frozen=True)
class CompiledBody:
    ops: np.ndarray
    arg1: np.ndarray
    arg2: np.ndarray
    atom_index: dict
    n_atoms: int


def compile_body(body: F.LtlBody, atom_order) -> CompiledBody:
    """Flatten a body into a postorder program.

    atom_order fixes the word-column layout: column i holds the truth values
    of atom_order[i].  Shared subterms are emitted once.
    """
    index = {atom: i for i, atom in enumerate(atom_order)}
    ops: list[int] = []
    arg1: list[int] = []
    arg2: list[int] = []
    memo: dict[F.LtlBody, int] = {}

    def emit(op: int, a: int, b: int) -> int:
        ops.append(op)
        arg1.append(a)
        arg2.append(b)
        return len(ops) - 1

    def walk(node: F.LtlBody) -> int:
        hit = memo.get(node)
        if hit is not None:
            return hit
        if isinstance(node, F.Atom):
            idx = emit(OP_ATOM, index[(node.ap, node.var)], -1)
        elif isinstance(node, F.TrueConst):
            idx = emit(OP_TRUE, -1, -1)
        elif isinstance(node, F.FalseConst):
            idx = emit(OP_FALSE, -1, -1)
        elif type(node) in _UNARY:
            child = walk(node.arg)
            idx = emit(_UNARY[type(node)], child, -1)
        elif type(node) in _BINARY:
            left = walk(node.left)
            right = walk(node.right)
            idx = emit(_BINARY[type(node)], left, right)
        else:
            raise TypeError(f"not an LTL body node: {node!r}")
        memo[node] = idx
        return idx

    walk(body)
    return CompiledBody(
        ops=np.asarray(ops, dtype=np.intc),
        arg1=np.asarray(arg1, dtype=np.intc),
        arg2=np.asarray(arg2, dtype=np.intc),
        atom_index=index,
        n_atoms=len(index),
    )


def eval_compiled(prog: CompiledBody, word: np.ndarray, stem_len: int,
                  loop_len: int) -> bool:
    """Truth value of the compiled body at position 0 of stem . loop^omega.

    word must be a C-contiguous uint8 array of shape (stem+loop, n_atoms).
    """
    if loop_len < 1:
        raise ValueError("loop must be nonempty")
    return bool(_impl.eval_program(prog.ops, prog.arg1, prog.arg2,
                                   word, stem_len, loop_len))


def word_from_letters(letters, atom_order) -> np.ndarray:
    """Build a word matrix from letters given as sets of atom ids."""
    word = np.zeros((len(letters), len(atom_order)), dtype=np.uint8)
    for p, letter in enumerate(letters):
        for i, atom in enumerate(atom_order):
            if atom in letter:
                word[p, i] = 1
    return word


def eval_body_on_lasso(body: F.LtlBody, stem, loop, atom_order=None) -> bool:
    """Evaluate an LTL body on a lasso word of atom-id letters.

    Convenience wrapper used by tests and by out-of-hot-path callers;
    compiles the body on every call.
    """
    if atom_order is None:
        atom_order = sorted(F.atoms_of(body))
    prog = compile_body(body, atom_order)
    word = word_from_letters(list(stem) + list(loop), atom_order)
    return eval_compiled(prog, word, len(stem), len(loop))
