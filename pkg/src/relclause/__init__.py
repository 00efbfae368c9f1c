"""Tensor-based compositional semantics for subject, object and possessive
relative clauses."""
from __future__ import annotations

from .evaluation import EvalReport, run_evaluation
from .functor import (ClauseSpec, OwnershipMap, Pattern, compose_obj_rel,
                      compose_poss_obj, compose_poss_subj, compose_subj_rel)
from .pregroup import (Lexicon, PregroupType, ReductionPlan, check_grammatical,
                       parse_type, reduce_greedy, search_reduction)
from .store import VectorStore
from .tensor import ContractionNetwork, Space, Spider, Tensor, contract_network, cosine
from .truth import RelationalModel, eval_poss_obj_truth, eval_poss_subj_truth

__version__ = '0.1.0'

__all__ = [
    'ClauseSpec', 'ContractionNetwork', 'EvalReport', 'Lexicon', 'OwnershipMap',
    'Pattern', 'PregroupType', 'ReductionPlan', 'RelationalModel', 'Space',
    'Spider', 'Tensor', 'VectorStore', 'check_grammatical', 'compose_obj_rel',
    'compose_poss_obj', 'compose_poss_subj', 'compose_subj_rel',
    'contract_network', 'cosine', 'eval_poss_obj_truth', 'eval_poss_subj_truth',
    'parse_type', 'reduce_greedy', 'run_evaluation', 'search_reduction',
]
