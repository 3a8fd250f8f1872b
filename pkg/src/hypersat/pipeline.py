"""Formula-to-problem pipeline shared by the CLI and the benchmark harness."""

from __future__ import annotations

from . import formula as F
from .automaton import (Safety, SymbolicAutomaton, expand_cubes,
                        is_syntactically_safe, ltl_to_nba,
                        to_safety_automaton)
from .encoder import (EncodedProblem, EncodingKind, encode_func, encode_lia,
                      encode_pred)


def choose_encoding(phi: F.HyperFormula, requested: str,
                    assume_safe: bool = False) -> EncodingKind:
    """Resolve an encoding name; 'auto' picks func for safe bodies, else lia."""
    if requested != "auto":
        return EncodingKind(requested)
    nnf = F.to_nnf(phi.body)
    if assume_safe or is_syntactically_safe(nnf):
        return EncodingKind.FUNC_SAFETY
    return EncodingKind.LIA


def body_automaton(phi: F.HyperFormula, kind: EncodingKind,
                   assume_safe: bool = False,
                   explicit_alphabet: bool = False) -> SymbolicAutomaton:
    nnf = F.to_nnf(phi.body)
    atoms = F.atoms_of(nnf)
    if kind in (EncodingKind.FUNC_SAFETY, EncodingKind.PRED_SAFETY):
        if is_syntactically_safe(nnf):
            aut = to_safety_automaton(nnf, atoms)
        elif assume_safe:
            # user-asserted safety: reuse the Buchi tableau and treat every
            # infinite run as accepting (unsound if the body is not safe)
            nba = ltl_to_nba(nnf, atoms)
            aut = SymbolicAutomaton(
                num_states=nba.num_states, initial=nba.initial,
                edges=nba.edges, acceptance=Safety(frozenset()),
                atoms=nba.atoms, state_labels=nba.state_labels)
        else:
            aut = to_safety_automaton(nnf, atoms)  # raises NotSyntacticallySafe
    else:
        aut = ltl_to_nba(nnf, atoms)
    if explicit_alphabet:
        aut = expand_cubes(aut)
    return aut


def build_problem(phi: F.HyperFormula, kind: EncodingKind,
                  assume_safe: bool = False,
                  explicit_alphabet: bool = False) -> EncodedProblem:
    aut = body_automaton(phi, kind, assume_safe, explicit_alphabet)
    if kind is EncodingKind.FUNC_SAFETY:
        return encode_func(phi, aut)
    if kind is EncodingKind.PRED_SAFETY:
        return encode_pred(phi, aut)
    return encode_lia(phi, aut)
