"""From pregroup derivations to tensor contractions.

Words become network fragments whose open ports line up with the atoms of
their pregroup type; a reduction plan then wires the fragments together
(:func:`sentence_network`).  Relative pronouns are built from spiders and,
for ``whose``, the ownership box, exactly as unnormalised diagrams with
caps, so their rank-4/5 tensors are never formed.

The closed-form composers below are the yanked normal forms of those
diagrams and are what the rest of the package calls at run time.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .pregroup import PregroupType, ReductionPlan, parse_type, reduce_greedy
from .tensor import (ContractionNetwork, NetworkBuilder, Space, Spider, Tensor,
                     contract_network)

__all__ = [
    'Pattern', 'PRONOUN_TYPES', 'OwnershipMap', 'ClauseSpec', 'interpret_type',
    'collapse_verb', 'compose_subj_rel', 'compose_obj_rel', 'compose_poss_subj',
    'compose_poss_obj', 'build_pronoun_network', 'word_fragment',
    'sentence_network', 'clause_network', 'evaluate_clause_network',
    'verify_decomposition', 'compose_lambek_whose', 'FunctorError',
]


class FunctorError(ValueError):
    pass


class Pattern(enum.Enum):
    SUBJ_REL = 'SUBJ_REL'
    OBJ_REL = 'OBJ_REL'
    POSS_SUBJ = 'POSS_SUBJ'
    POSS_OBJ = 'POSS_OBJ'

    @property
    def possessive(self) -> bool:
        return self in (Pattern.POSS_SUBJ, Pattern.POSS_OBJ)

    @property
    def pronoun_tag(self) -> str:
        return _PATTERN_TAG[self]


_PATTERN_TAG = {
    Pattern.SUBJ_REL: 'rel-subj',
    Pattern.OBJ_REL: 'rel-obj',
    Pattern.POSS_SUBJ: 'rel-poss-subj',
    Pattern.POSS_OBJ: 'rel-poss-obj',
}

PRONOUN_TYPES = {
    'rel-subj': parse_type('n^r n s^l n'),
    'rel-obj': parse_type('n^r n n^ll s^l'),
    'rel-poss-subj': parse_type('n^r n s^l n n^l'),
    'rel-poss-obj': parse_type('n^r n n^ll s^l n^l'),
}
NOUN_TYPE = parse_type('n')
TRANSITIVE_TYPE = parse_type('n^r s n^l')
INTRANSITIVE_TYPE = parse_type('n^r s')


def interpret_type(t: PregroupType, registry: dict[str, Space]
                   ) -> tuple[Space, ...]:
    """Map each atom to its space; adjoints are forgotten."""
    try:
        return tuple(registry[a.base] for a in t)
    except KeyError as exc:
        raise FunctorError(f'no space registered for base {exc.args[0]!r}') from None


@dataclass(frozen=True)
class OwnershipMap:
    """Linear map on N sending possessed items to their owners.

    ``matrix[owner, possessed]``; apply with ``matrix @ x``.
    """
    matrix: np.ndarray
    mode: str = 'learned'

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise FunctorError(f'ownership map must be square, got {m.shape}')
        if self.mode not in ('identity', 'learned'):
            raise FunctorError(f'unknown ownership mode {self.mode!r}')
        if self.mode == 'identity' and not np.array_equal(m, np.eye(len(m))):
            raise FunctorError('identity mode requires the identity matrix')
        object.__setattr__(self, 'matrix', m)

    @classmethod
    def identity(cls, dim: int) -> OwnershipMap:
        return cls(np.eye(dim), 'identity')

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, x) -> np.ndarray:
        return self.matrix @ np.asarray(x, dtype=float)


def _as_ownership(own, dim: int) -> OwnershipMap:
    if own is None:
        return OwnershipMap.identity(dim)
    if isinstance(own, OwnershipMap):
        return own
    return OwnershipMap(np.asarray(own, dtype=float))


def collapse_verb(verb) -> np.ndarray:
    """Discard the sentence leg of an N x S x N verb (or N x S intransitive)."""
    v = np.asarray(verb, dtype=float)
    if v.ndim == 3:
        return v.sum(axis=1)
    return v


def _check(vectors: Sequence[np.ndarray], verb: np.ndarray):
    dim = vectors[0].shape[0]
    for v in vectors:
        if v.ndim != 1 or v.shape[0] != dim:
            raise FunctorError(f'filler vectors must share one dimension; '
                               f'got {[x.shape for x in vectors]}')
    if verb.shape not in ((dim, dim), (dim,)):
        raise FunctorError(f'verb of shape {verb.shape} does not fit N={dim}')


def _verb_applied_right(verb: np.ndarray, obj) -> np.ndarray:
    # subject-side meaning of "verb obj"; intransitive verbs have no object
    if verb.ndim == 1:
        if obj is not None:
            raise FunctorError('intransitive verb given an object')
        return verb
    if obj is None:
        raise FunctorError('transitive verb needs an object')
    return verb @ np.asarray(obj, dtype=float)


def _verb_applied_left(verb: np.ndarray, sbj) -> np.ndarray:
    if verb.ndim != 2:
        raise FunctorError('object clauses need a transitive verb')
    return np.asarray(sbj, dtype=float) @ verb


def compose_subj_rel(head, obj, verb) -> np.ndarray:
    """``head (that verb obj)``: head * (verb @ obj)."""
    head = np.asarray(head, dtype=float)
    verb = collapse_verb(verb)
    vecs = [head] + ([np.asarray(obj, float)] if obj is not None else [])
    _check(vecs, verb)
    return head * _verb_applied_right(verb, obj)


def compose_obj_rel(head, sbj, verb) -> np.ndarray:
    head, sbj = np.asarray(head, float), np.asarray(sbj, float)
    verb = collapse_verb(verb)
    _check([head, sbj], verb)
    return head * _verb_applied_left(verb, sbj)


def compose_poss_subj(poss, sbj, obj, verb, ownership=None) -> np.ndarray:
    """Possessor whose Subject Verb Object.

    ``poss * own(sbj * (verb @ obj))``; pass ``obj=None`` with an
    intransitive verb vector.
    """
    poss, sbj = np.asarray(poss, float), np.asarray(sbj, float)
    verb = collapse_verb(verb)
    vecs = [poss, sbj] + ([np.asarray(obj, float)] if obj is not None else [])
    _check(vecs, verb)
    own = _as_ownership(ownership, poss.shape[0])
    return poss * own(sbj * _verb_applied_right(verb, obj))


def compose_poss_obj(poss, sbj, obj, verb, ownership=None) -> np.ndarray:
    """Possessor whose Object Subject Verb: ``poss * own(obj * (sbj @ verb))``."""
    poss, sbj, obj = (np.asarray(x, float) for x in (poss, sbj, obj))
    verb = collapse_verb(verb)
    _check([poss, sbj, obj], verb)
    own = _as_ownership(ownership, poss.shape[0])
    return poss * own(obj * _verb_applied_left(verb, sbj))


@dataclass(frozen=True)
class ClauseSpec:
    """One relative clause.

    ``head`` is the modified noun: the possessor for ``whose`` clauses,
    otherwise the noun the relative pronoun stands for.  Unused roles are
    ``None``.
    """
    pattern: Pattern
    head: np.ndarray
    verb: np.ndarray
    sbj: np.ndarray | None = None
    obj: np.ndarray | None = None
    ownership: OwnershipMap | None = None

    def compose(self) -> np.ndarray:
        p = self.pattern
        if p is Pattern.SUBJ_REL:
            return compose_subj_rel(self.head, self.obj, self.verb)
        if p is Pattern.OBJ_REL:
            return compose_obj_rel(self.head, self.sbj, self.verb)
        if p is Pattern.POSS_SUBJ:
            return compose_poss_subj(self.head, self.sbj, self.obj, self.verb,
                                     self.ownership)
        return compose_poss_obj(self.head, self.sbj, self.obj, self.verb,
                                self.ownership)


# -- network fragments -----------------------------------------------------

def build_pronoun_network(tag: str, n_space: Space, s_space: Space,
                          ownership: OwnershipMap | np.ndarray | None = None
                          ) -> ContractionNetwork:
    """Unnormalised pronoun diagram with open ports in pregroup-type order.

    ``whose`` is three caps followed by the ownership box on the third wire
    and then merge, sentence unit, cup and copy::

        (1 . mu . zeta_S . eps . Delta) o (1 1 . 's . 1 1 1) o (eta eta eta)

    The object variant routes the copy's two outputs to the ``n^ll`` and
    ``n^l`` ports with the sentence unit between them.
    """
    b = NetworkBuilder()
    if tag in ('rel-subj', 'rel-obj'):
        cap1 = b.add(Spider(n_space, 0, 2))
        cap2 = b.add(Spider(n_space, 0, 2))
        mu = b.add(Spider(n_space, 2, 1))
        zeta = b.add(Spider(s_space, 0, 1))
        b.connect((cap1, 1), (mu, 0))
        b.connect((cap2, 0), (mu, 1))
        if tag == 'rel-subj':
            outs = [(cap1, 0), (mu, 2), (zeta, 0), (cap2, 1)]
        else:
            outs = [(cap1, 0), (mu, 2), (cap2, 1), (zeta, 0)]
        return b.build(outs)

    if tag not in ('rel-poss-subj', 'rel-poss-obj'):
        raise FunctorError(f'unknown pronoun tag {tag!r}')
    own = _as_ownership(ownership, n_space.dim)
    if own.dim != n_space.dim:
        raise FunctorError('ownership map does not match N')
    caps = [b.add(Spider(n_space, 0, 2)) for _ in range(3)]
    box = b.add(Tensor((n_space, n_space), own.matrix))   # (owner, possessed)
    mu = b.add(Spider(n_space, 2, 1))
    zeta = b.add(Spider(s_space, 0, 1))
    cup = b.add(Spider(n_space, 2, 0))
    delta = b.add(Spider(n_space, 1, 2))
    w = [(caps[0], 0), (caps[0], 1), (caps[1], 0),
         (caps[1], 1), (caps[2], 0), (caps[2], 1)]
    b.connect(w[2], (box, 1))
    b.connect(w[1], (mu, 0))
    b.connect((box, 0), (mu, 1))
    b.connect(w[3], (cup, 0))
    b.connect(w[4], (cup, 1))
    b.connect(w[5], (delta, 0))
    if tag == 'rel-poss-subj':
        outs = [w[0], (mu, 2), (zeta, 0), (delta, 1), (delta, 2)]
    else:
        outs = [w[0], (mu, 2), (delta, 1), (zeta, 0), (delta, 2)]
    return b.build(outs)


def word_fragment(data, legs: Sequence[Space]) -> ContractionNetwork:
    b = NetworkBuilder()
    node = b.add(Tensor(tuple(legs), data))
    return b.build([(node, k) for k in range(len(legs))])


def sentence_network(fragments: Sequence[ContractionNetwork],
                     types: Sequence[PregroupType],
                     plan: ReductionPlan | None = None) -> ContractionNetwork:
    """Wire word fragments along the cups of a reduction plan.

    Each fragment's open ports must align with the atoms of its type.  The
    greedy plan is used when none is given; residual atoms become outputs.
    """
    if len(fragments) != len(types):
        raise FunctorError('one type per fragment required')
    full = PregroupType.concat(types)
    if plan is None:
        plan, _ = reduce_greedy(full)
    plan.validate(full)
    b = NetworkBuilder()
    ports = []
    for frag, t in zip(fragments, types):
        if len(frag.outputs) != len(t):
            raise FunctorError(f'fragment with {len(frag.outputs)} ports '
                               f'cannot carry type {t}')
        ports.extend(b.add_network(frag))
    for i, j in plan.links:
        b.connect(ports[i], ports[j])
    return b.build([ports[r] for r in plan.residual])


def _verb_tensor(verb, n_space: Space) -> tuple[np.ndarray, Space]:
    """Verb as a tensor carrying an explicit sentence leg.

    Matrix verbs and intransitive vectors get a one-dimensional sentence
    space, on which the pronoun's sentence unit is the identity.
    """
    v = np.asarray(verb, dtype=float)
    if v.ndim == 3:
        return v, Space('S', v.shape[1])
    if v.ndim == 2:
        return v[:, None, :], Space('S', 1)
    if v.ndim == 1:
        return v[:, None], Space('S', 1)
    raise FunctorError(f'unsupported verb shape {v.shape}')


def clause_network(spec: ClauseSpec) -> ContractionNetwork:
    """Full unnormalised diagram of a clause, pronoun caps included."""
    head = np.asarray(spec.head, float)
    n = Space('N', head.shape[0])
    verb, s = _verb_tensor(spec.verb, n)
    intransitive = verb.ndim == 2
    noun = lambda x: word_fragment(np.asarray(x, float), [n])
    verb_frag = word_fragment(verb, [n, s] if intransitive else [n, s, n])
    verb_type = INTRANSITIVE_TYPE if intransitive else TRANSITIVE_TYPE
    tag = spec.pattern.pronoun_tag
    pron = build_pronoun_network(tag, n, s, spec.ownership)
    p = spec.pattern
    if p is Pattern.SUBJ_REL:
        words = [noun(head), pron, verb_frag]
        types = [NOUN_TYPE, PRONOUN_TYPES[tag], verb_type]
        if not intransitive:
            words.append(noun(spec.obj))
            types.append(NOUN_TYPE)
    elif p is Pattern.OBJ_REL:
        words = [noun(head), pron, noun(spec.sbj), verb_frag]
        types = [NOUN_TYPE, PRONOUN_TYPES[tag], NOUN_TYPE, verb_type]
    elif p is Pattern.POSS_SUBJ:
        words = [noun(head), pron, noun(spec.sbj), verb_frag]
        types = [NOUN_TYPE, PRONOUN_TYPES[tag], NOUN_TYPE, verb_type]
        if not intransitive:
            words.append(noun(spec.obj))
            types.append(NOUN_TYPE)
    else:
        words = [noun(head), pron, noun(spec.obj), noun(spec.sbj), verb_frag]
        types = [NOUN_TYPE, PRONOUN_TYPES[tag], NOUN_TYPE, NOUN_TYPE, verb_type]
    return sentence_network(words, types)


def evaluate_clause_network(spec: ClauseSpec, **kwargs) -> np.ndarray:
    return np.array(contract_network(clause_network(spec), **kwargs).data)


# "Possessor that has Subject that Verb Object": the inner clause attaches
# to the object slot of `has`, not to the possessor
_THAT_HAS_LINKS = {
    Pattern.POSS_SUBJ: ((0, 1), (3, 6), (4, 5), (7, 10), (8, 9), (11, 14),
                        (12, 13), (15, 16)),
    Pattern.POSS_OBJ: ((0, 1), (3, 6), (4, 5), (7, 10), (8, 9), (11, 16),
                       (12, 15), (13, 14)),
}


def that_has_network(spec: ClauseSpec, has) -> ContractionNetwork:
    """Network for the ``that ... has ... that`` paraphrase of a whose-clause."""
    if not spec.pattern.possessive:
        raise FunctorError('decomposition applies to possessive clauses only')
    head = np.asarray(spec.head, float)
    n = Space('N', head.shape[0])
    has_t, s_has = _verb_tensor(has, n)
    verb_t, s_verb = _verb_tensor(spec.verb, n)
    if has_t.ndim != 3 or verb_t.ndim != 3:
        raise FunctorError('has and verb must be transitive')
    noun = lambda x: word_fragment(np.asarray(x, float), [n])
    that1 = build_pronoun_network('rel-subj', n, s_has)
    has_frag = word_fragment(has_t, [n, s_has, n])
    verb_frag = word_fragment(verb_t, [n, s_verb, n])
    if spec.pattern is Pattern.POSS_SUBJ:
        that2 = build_pronoun_network('rel-subj', n, s_verb)
        words = [noun(head), that1, has_frag, noun(spec.sbj), that2,
                 verb_frag, noun(spec.obj)]
        types = [NOUN_TYPE, PRONOUN_TYPES['rel-subj'], TRANSITIVE_TYPE,
                 NOUN_TYPE, PRONOUN_TYPES['rel-subj'], TRANSITIVE_TYPE,
                 NOUN_TYPE]
    else:
        that2 = build_pronoun_network('rel-obj', n, s_verb)
        words = [noun(head), that1, has_frag, noun(spec.obj), that2,
                 noun(spec.sbj), verb_frag]
        types = [NOUN_TYPE, PRONOUN_TYPES['rel-subj'], TRANSITIVE_TYPE,
                 NOUN_TYPE, PRONOUN_TYPES['rel-obj'], NOUN_TYPE,
                 TRANSITIVE_TYPE]
    plan = ReductionPlan(_THAT_HAS_LINKS[spec.pattern], (2,))
    return sentence_network(words, types, plan)


def verify_decomposition(spec: ClauseSpec, has
                         ) -> tuple[np.ndarray, np.ndarray, float]:
    """Compare the ``that has ... that`` network with the whose normal form.

    The ownership map of the normal form is ``has`` with its sentence leg
    discarded; ``spec.ownership`` is ignored.
    """
    lhs = np.array(contract_network(that_has_network(spec, has)).data)
    own = OwnershipMap(collapse_verb(has))
    if spec.pattern is Pattern.POSS_SUBJ:
        rhs = compose_poss_subj(spec.head, spec.sbj, spec.obj, spec.verb, own)
    else:
        rhs = compose_poss_obj(spec.head, spec.sbj, spec.obj, spec.verb, own)
    return lhs, rhs, float(np.max(np.abs(lhs - rhs)))


def compose_lambek_whose(poss, possessed, verb, other, pattern: Pattern,
                         ownership=None) -> np.ndarray:
    """Evaluate a whose-clause with ``whose X`` typed as a single word.

    ``whose X`` reduces to the type of the plain relative pronoun
    (``n^r n s^l n`` or ``n^r n n^ll s^l``).  ``other`` is the object for
    subject clauses and the subject for object clauses.
    """
    if not pattern.possessive:
        raise FunctorError('pattern must be possessive')
    poss = np.asarray(poss, float)
    n = Space('N', poss.shape[0])
    verb_t, s = _verb_tensor(verb, n)
    if verb_t.ndim != 3:
        raise FunctorError('compose_lambek_whose needs a transitive verb')
    tag = pattern.pronoun_tag
    noun = lambda x: word_fragment(np.asarray(x, float), [n])
    pron = build_pronoun_network(tag, n, s, ownership)
    pron_type = PRONOUN_TYPES[tag]
    compound_plan, compound_type = reduce_greedy(pron_type @ NOUN_TYPE)
    expected = 'n^r n s^l n' if pattern is Pattern.POSS_SUBJ else 'n^r n n^ll s^l'
    if compound_type != parse_type(expected):
        raise FunctorError(f'whose compound reduced to {compound_type}')
    compound = sentence_network([pron, noun(possessed)],
                                [pron_type, NOUN_TYPE], compound_plan)
    verb_frag = word_fragment(verb_t, [n, s, n])
    if pattern is Pattern.POSS_SUBJ:
        words = [noun(poss), compound, verb_frag, noun(other)]
        types = [NOUN_TYPE, compound_type, TRANSITIVE_TYPE, NOUN_TYPE]
    else:
        words = [noun(poss), compound, noun(other), verb_frag]
        types = [NOUN_TYPE, compound_type, NOUN_TYPE, TRANSITIVE_TYPE]
    net = sentence_network(words, types)
    return np.array(contract_network(net).data)
