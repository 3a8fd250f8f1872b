"""Serialize encoded problems to SMT-LIB 2 or TPTP TFF text.

Emission is a pure function of the problem: declaration order follows the
signature, and layout decisions depend only on the rendered text, so
identical problems produce identical bytes.

SMT-LIB: uninterpreted sorts are declared with arity 0, predicates as
Bool-valued functions; integer-time problems use the builtin Int sort under
the UFLIA logic.  TPTP: typed first-order form with one axiom block; the
expected solver answers are the SZS statuses Satisfiable/Unsatisfiable.
TPTP requires functors to start with a lowercase letter and variables with
an uppercase one, so the first character of every symbol is lowercased and
the first character of every bound variable is uppercased (injective for
the generated name scheme, which never relies on case alone).
"""

from __future__ import annotations

from enum import Enum

from . import fol
from .encoder import EncodedProblem, EncodingKind


class OutputFormat(Enum):
    SMTLIB2 = "smtlib"
    TPTP_TFF = "tptp"


FILE_EXTENSIONS = {OutputFormat.SMTLIB2: ".smt2", OutputFormat.TPTP_TFF: ".p"}

_WIDTH = 96


def emit(problem: EncodedProblem, fmt: OutputFormat) -> str:
    if fmt is OutputFormat.SMTLIB2:
        return emit_smtlib(problem)
    return emit_tptp(problem)


# ---------------------------------------------------------------------------
# SMT-LIB 2
# ---------------------------------------------------------------------------

def emit_smtlib(problem: EncodedProblem) -> str:
    sig = problem.signature
    lines = []
    logic = "UFLIA" if problem.kind is EncodingKind.LIA else "UF"
    lines.append(f"(set-logic {logic})")
    for sort in sig.sorts:
        if not sort.builtin_int:
            lines.append(f"(declare-sort {sort.name} 0)")
    for fn in sig.functions:
        args = " ".join(fn.arg_sorts)
        lines.append(f"(declare-fun {fn.name} ({args}) {fn.result_sort})")
    for pred in sig.predicates:
        args = " ".join(pred.arg_sorts)
        lines.append(f"(declare-fun {pred.name} ({args}) Bool)")
    lines.append(_render(_smt_formula(problem.formula), prefix="(assert ",
                         suffix=")"))
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


def _smt_term(t: fol.Term):
    if isinstance(t, fol.Var):
        return t.name
    if isinstance(t, fol.FunApp):
        if not t.args:
            return t.name
        return [t.name, *(_smt_term(a) for a in t.args)]
    if isinstance(t, fol.IntConst):
        return str(t.value) if t.value >= 0 else ["-", str(-t.value)]
    if isinstance(t, fol.IntAdd):
        return ["+", _smt_term(t.arg), str(t.offset)]
    raise fol.FolError(f"cannot emit term {t!r}")


def _smt_formula(f: fol.FolFormula):
    if isinstance(f, fol.PredApp):
        if not f.args:
            return f.name
        return [f.name, *(_smt_term(a) for a in f.args)]
    if isinstance(f, fol.Not):
        return ["not", _smt_formula(f.arg)]
    if isinstance(f, fol.And):
        if not f.args:
            return "true"
        if len(f.args) == 1:
            return _smt_formula(f.args[0])
        return ["and", *(_smt_formula(g) for g in f.args)]
    if isinstance(f, fol.Or):
        if not f.args:
            return "false"
        if len(f.args) == 1:
            return _smt_formula(f.args[0])
        return ["or", *(_smt_formula(g) for g in f.args)]
    if isinstance(f, fol.Implies):
        return ["=>", _smt_formula(f.left), _smt_formula(f.right)]
    if isinstance(f, (fol.Forall, fol.Exists)):
        head = "forall" if isinstance(f, fol.Forall) else "exists"
        return [head, [[f.var, f.sort]], _smt_formula(f.body)]
    if isinstance(f, fol.IntLess):
        return ["<", _smt_term(f.left), _smt_term(f.right)]
    if isinstance(f, fol.IntEq):
        return ["=", _smt_term(f.left), _smt_term(f.right)]
    raise fol.FolError(f"cannot emit formula {f!r}")


def _render(node, prefix="", suffix="", indent=0) -> str:
    """Render a nested-list s-expression, breaking long forms over lines."""
    flat = _flat(node)
    if indent + len(prefix) + len(flat) + len(suffix) <= _WIDTH:
        return " " * indent + prefix + flat + suffix
    head, *rest = node
    pad = " " * indent
    out = [pad + prefix + "(" + (_flat(head) if isinstance(head, list) else head)]
    for child in rest:
        if isinstance(child, list):
            out.append(_render(child, indent=indent + 2))
        else:
            out.append(" " * (indent + 2) + child)
    out[-1] += ")" + suffix
    return "\n".join(out)


def _flat(node) -> str:
    if isinstance(node, str):
        return node
    return "(" + " ".join(_flat(c) for c in node) + ")"


# ---------------------------------------------------------------------------
# TPTP TFF
# ---------------------------------------------------------------------------

def _tptp_symbol(name: str) -> str:
    if name == fol.INT_SORT:
        return "$int"
    return name[0].lower() + name[1:]


def _tptp_var(name: str) -> str:
    return name[0].upper() + name[1:]


def emit_tptp(problem: EncodedProblem) -> str:
    sig = problem.signature
    lines = []
    for sort in sig.sorts:
        if not sort.builtin_int:
            s = _tptp_symbol(sort.name)
            lines.append(f"tff({s}_type, type, {s}: $tType).")
    for fn in sig.functions:
        lines.append(_tptp_decl(fn.name, fn.arg_sorts, fn.result_sort))
    for pred in sig.predicates:
        lines.append(_tptp_decl(pred.name, pred.arg_sorts, "$o"))
    body = _tptp_formula(problem.formula, indent=1)
    lines.append(f"tff(problem, axiom,\n{body}).")
    return "\n".join(lines) + "\n"


def _tptp_decl(name: str, arg_sorts, result: str) -> str:
    s = _tptp_symbol(name)
    args = [_tptp_symbol(a) for a in arg_sorts]
    result = _tptp_symbol(result) if result not in ("$o",) else result
    if not args:
        typ = result
    elif len(args) == 1:
        typ = f"{args[0]} > {result}"
    else:
        typ = "(" + " * ".join(args) + f") > {result}"
    return f"tff({s}_decl, type, {s}: {typ})."


def _tptp_term(t: fol.Term) -> str:
    if isinstance(t, fol.Var):
        return _tptp_var(t.name)
    if isinstance(t, fol.FunApp):
        name = _tptp_symbol(t.name)
        if not t.args:
            return name
        return name + "(" + ", ".join(_tptp_term(a) for a in t.args) + ")"
    if isinstance(t, fol.IntConst):
        return str(t.value)
    if isinstance(t, fol.IntAdd):
        return f"$sum({_tptp_term(t.arg)}, {t.offset})"
    raise fol.FolError(f"cannot emit term {t!r}")


def _tptp_formula(f: fol.FolFormula, indent: int) -> str:
    pad = "  " * indent
    if isinstance(f, fol.PredApp):
        name = _tptp_symbol(f.name)
        if not f.args:
            return pad + name
        return pad + name + "(" + ", ".join(_tptp_term(a) for a in f.args) + ")"
    if isinstance(f, fol.Not):
        inner = _tptp_formula(f.arg, indent).lstrip()
        return pad + "~ " + inner
    if isinstance(f, (fol.And, fol.Or)):
        if not f.args:
            return pad + ("$true" if isinstance(f, fol.And) else "$false")
        if len(f.args) == 1:
            return _tptp_formula(f.args[0], indent)
        op = "&" if isinstance(f, fol.And) else "|"
        parts = [_tptp_formula(g, indent + 1) for g in f.args]
        flat = " ".join(p.strip() for p in parts)
        if len(flat) + len(pad) + 2 * len(parts) <= _WIDTH:
            return pad + "(" + f" {op} ".join(p.strip() for p in parts) + ")"
        sep = f"\n{pad}{op} "
        return pad + "( " + sep.join(p.lstrip() for p in parts) + " )"
    if isinstance(f, fol.Implies):
        left = _tptp_formula(f.left, indent + 1)
        right = _tptp_formula(f.right, indent + 1)
        flat = f"({left.strip()} => {right.strip()})"
        if len(flat) + len(pad) <= _WIDTH:
            return pad + flat
        return pad + "(" + left.lstrip() + f"\n{pad} => " + right.lstrip() + ")"
    if isinstance(f, (fol.Forall, fol.Exists)):
        quant = "!" if isinstance(f, fol.Forall) else "?"
        head = f"{quant}[{_tptp_var(f.var)}: {_tptp_symbol(f.sort)}]:"
        body = _tptp_formula(f.body, indent + 1)
        flat = f"{head} {body.strip()}"
        if len(flat) + len(pad) <= _WIDTH:
            return pad + flat
        return pad + head + "\n" + body
    if isinstance(f, fol.IntLess):
        return pad + f"$less({_tptp_term(f.left)}, {_tptp_term(f.right)})"
    if isinstance(f, fol.IntEq):
        return pad + f"({_tptp_term(f.left)} = {_tptp_term(f.right)})"
    raise fol.FolError(f"cannot emit formula {f!r}")
