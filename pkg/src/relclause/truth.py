"""Truth-theoretic models: N spanned by individuals, one-dimensional S.

Common nouns are sums of basis vectors, verbs are weighted relations
``sum alpha_ij e_i (x) e_j`` and the ownership map sends a possessed item to
the sum of its owners.

Model files are sectioned text::

    [universe]
    n1 n2 n3
    [noun authors] n2 n3
    [verb entertain]
    n1 n2 0.5
    [ownership]
    n2 n1

Verb and ownership lines are ``left right [weight]`` (weight defaults to 1).
Individuals may be named by label or by 1-based position.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .functor import OwnershipMap, compose_poss_obj, compose_poss_subj

__all__ = ['RelationalModel', 'ModelError', 'noun_vector', 'verb_matrix',
           'ownership_map', 'eval_poss_subj_truth', 'eval_poss_obj_truth']


class ModelError(ValueError):
    pass


Weighted = dict[tuple[int, int], float]


@dataclass
class RelationalModel:
    universe: list[str]
    nouns: dict[str, frozenset[int]] = field(default_factory=dict)
    verbs: dict[str, Weighted] = field(default_factory=dict)
    ownership: Weighted = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.universe)) != len(self.universe):
            raise ModelError('duplicate individual in universe')
        size = len(self.universe)
        for name, members in self.nouns.items():
            if any(not 0 <= i < size for i in members):
                raise ModelError(f'noun {name!r} leaves the universe')
        for name, rel in list(self.verbs.items()) + [('ownership', self.ownership)]:
            for (i, j), a in rel.items():
                if not (0 <= i < size and 0 <= j < size):
                    raise ModelError(f'{name}: pair ({i}, {j}) leaves the universe')
                if not 0 <= a <= 1:
                    raise ModelError(f'{name}: weight {a} outside [0, 1]')

    @property
    def size(self) -> int:
        return len(self.universe)

    def index(self, name: str) -> int:
        if name in self.universe:
            return self.universe.index(name)
        if name.isdigit() and 1 <= int(name) <= self.size:
            return int(name) - 1
        raise ModelError(f'unknown individual {name!r}')

    def noun(self, name: str) -> frozenset[int]:
        """Members of a common noun; an individual's name is a singleton."""
        if name in self.nouns:
            return self.nouns[name]
        if name in self.universe:
            return frozenset({self.universe.index(name)})
        raise ModelError(f'undeclared noun {name!r}')

    def verb(self, name: str) -> Weighted:
        try:
            return self.verbs[name]
        except KeyError:
            raise ModelError(f'undeclared verb {name!r}') from None

    def boolean(self) -> RelationalModel:
        """The 0/1 lift: every nonzero weight becomes 1."""
        lift = lambda rel: {p: 1.0 for p, a in rel.items() if a != 0}
        return RelationalModel(list(self.universe), dict(self.nouns),
                               {k: lift(v) for k, v in self.verbs.items()},
                               lift(self.ownership))

    @classmethod
    def parse(cls, lines: Iterable[str]) -> RelationalModel:
        universe: list[str] = []
        sections: list[tuple[str, str, list[list[str]]]] = []
        for lineno, raw in enumerate(lines, 1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            if line.startswith('['):
                close = line.find(']')
                if close < 0:
                    raise ModelError(f'line {lineno}: unterminated section')
                kind, _, name = line[1:close].strip().partition(' ')
                if kind not in ('universe', 'noun', 'verb', 'ownership'):
                    raise ModelError(f'line {lineno}: unknown section {kind!r}')
                sections.append((kind, name.strip(), []))
                line = line[close + 1:].strip()
                if not line:
                    continue
            if not sections:
                raise ModelError(f'line {lineno}: content before any section')
            sections[-1][2].append(line.split())

        for kind, _, rows in sections:
            if kind == 'universe':
                universe.extend(tok for row in rows for tok in row)
        model = cls(universe)

        def pairs(rows, label):
            rel: Weighted = {}
            for row in rows:
                if len(row) not in (2, 3):
                    raise ModelError(f'{label}: expected "left right [weight]"')
                w = float(Fraction(row[2])) if len(row) == 3 else 1.0
                key = (model.index(row[0]), model.index(row[1]))
                rel[key] = rel.get(key, 0.0) + w
            return rel

        nouns, verbs, own = {}, {}, {}
        for kind, name, rows in sections:
            if kind == 'noun':
                nouns[name] = frozenset(model.index(t) for row in rows for t in row)
            elif kind == 'verb':
                verbs[name] = pairs(rows, f'verb {name}')
            elif kind == 'ownership':
                own.update(pairs(rows, 'ownership'))
        return cls(universe, nouns, verbs, own)

    @classmethod
    def load(cls, path) -> RelationalModel:
        with open(path, encoding='utf-8') as fh:
            return cls.parse(fh)


def noun_vector(model: RelationalModel, name: str) -> np.ndarray:
    v = np.zeros(model.size)
    v[sorted(model.noun(name))] = 1.0
    return v


def _relation_matrix(rel: Weighted, size: int) -> np.ndarray:
    m = np.zeros((size, size))
    for (i, j), a in rel.items():
        m[i, j] = a
    return m


def verb_matrix(model: RelationalModel, name: str) -> np.ndarray:
    """``sum alpha_ij e_i (x) e_j`` as a matrix (subject rows)."""
    return _relation_matrix(model.verb(name), model.size)


def ownership_map(model: RelationalModel) -> OwnershipMap:
    """Matrix ``sum e_owner (x) e_possessed``, applied as ``M @ x``."""
    return OwnershipMap(_relation_matrix(model.ownership, model.size))


def _closed_form(model, possessor, owned_role, other_role, verb, subject_side,
                 boolean):
    # sum over owned item k, partner l: own(h, k) * alpha(k, l)   (subject side)
    # or own(h, k) * alpha(l, k)                                   (object side)
    P = model.noun(possessor)
    K = model.noun(owned_role)
    L = model.noun(other_role)
    rel = model.verb(verb)
    out = np.zeros(model.size)
    for (owner, owned), w_own in model.ownership.items():
        if owner not in P or owned not in K:
            continue
        for (i, j), alpha in rel.items():
            k, l = (i, j) if subject_side else (j, i)
            if k == owned and l in L:
                out[owner] += w_own * alpha
    if boolean:
        out = (out != 0).astype(float)
    return out


def eval_poss_subj_truth(model: RelationalModel, possessor: str, subject: str,
                         verb: str, obj: str, *, boolean: bool = False
                         ) -> np.ndarray:
    """Truth vector of "possessor whose subject verb object".

    Sums ``own(h, k) * alpha(k, l)`` over owned subjects ``k`` and objects
    ``l``.  ``boolean=True`` evaluates in the 0/1 semiring instead, so a
    possessor with several witnesses still gets 1.
    """
    return _closed_form(model, possessor, subject, obj, verb, True, boolean)


def eval_poss_obj_truth(model: RelationalModel, possessor: str, subject: str,
                        verb: str, obj: str, *, boolean: bool = False
                        ) -> np.ndarray:
    """Truth vector of "possessor whose object subject verb"."""
    return _closed_form(model, possessor, obj, subject, verb, False, boolean)


def compose_in_model(model: RelationalModel, possessor, subject, verb, obj,
                     object_clause: bool = False) -> np.ndarray:
    """Generic composer on the model's tensors (cross-check for the closed form)."""
    args = (noun_vector(model, possessor), noun_vector(model, subject),
            noun_vector(model, obj), verb_matrix(model, verb),
            ownership_map(model))
    return compose_poss_obj(*args) if object_clause else compose_poss_subj(*args)
