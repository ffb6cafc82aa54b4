"""Implicational minimal logic: formulas, Kripke models, natural deduction,
bounded normal-proof search and a Gentzen-style sequent prover."""
from .formula import (Atom, Formula, Imp, ParseError, atoms, chi, imp, parse, phi, recognize,
                      shift_substitution, size, substitute, to_text, xi)
from .kripke import KripkeModel, find_countermodel, random_model, satisfies, valid_in
from .nd import (Assume, Elim, Intro, Mode, Peirce, ProofError, assumption_census, check, dag_stats,
                 is_normal, relabel, substitute_proof)
from .constructions import build_peirce_proof, build_phi_classical, build_phi_proof, build_sigma
from .nd_search import SearchBudget, min_assumption_count, search_normal
from .sequent import Sequent, Variant, check_sequent_proof, extract_countermodel, prove

__version__ = "0.1.0"
