"""Set-theoretic semantics of relative clauses over a finite universe.

Subsets of the universe are Python ints used as bitsets (bit i set means
individual i is a member); a binary relation keeps one successor and one
predecessor bitset per individual.  Everything is exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .truth import RelationalModel

__all__ = ['bits', 'members', 'Relation', 'SetModel', 'relational_image',
           'inverse_image', 'poss_subj_intersection', 'poss_obj_intersection',
           'that_has_intersection', 'subj_rel_set', 'obj_rel_set', 'embed',
           'embed_relation', 'mu_member', 'is_member', 'mu_intersection']


def bits(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def members(mask: int) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class Relation:
    size: int
    forward: tuple[int, ...]    # forward[i]: bitset of j with (i, j) in R
    backward: tuple[int, ...]   # backward[j]: bitset of i with (i, j) in R

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]], size: int) -> Relation:
        fwd, bwd = [0] * size, [0] * size
        for i, j in pairs:
            if not (0 <= i < size and 0 <= j < size):
                raise ValueError(f'pair ({i}, {j}) outside universe of {size}')
            fwd[i] |= 1 << j
            bwd[j] |= 1 << i
        return cls(size, tuple(fwd), tuple(bwd))

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, row in enumerate(self.forward) for j in members(row)]


def relational_image(rel: Relation, subset: int) -> int:
    """``R[T]``: everything related to some member of T."""
    out = 0
    for i in members(subset):
        out |= rel.forward[i]
    return out


def inverse_image(rel: Relation, subset: int) -> int:
    out = 0
    for j in members(subset):
        out |= rel.backward[j]
    return out


@dataclass(frozen=True)
class SetModel:
    universe: tuple[str, ...]
    unary: dict[str, int]
    binary: dict[str, Relation]
    has: Relation

    @classmethod
    def from_relational(cls, model: RelationalModel) -> SetModel:
        """Shadow of a weighted model: nonzero weight means membership."""
        n = model.size
        rel = lambda w: Relation.from_pairs((p for p, a in w.items() if a != 0), n)
        unary = {name: bits(s) for name, s in model.nouns.items()}
        for i, name in enumerate(model.universe):
            unary.setdefault(name, 1 << i)
        return cls(tuple(model.universe), unary,
                   {k: rel(v) for k, v in model.verbs.items()},
                   rel(model.ownership))

    @property
    def size(self) -> int:
        return len(self.universe)

    def noun(self, name: str) -> int:
        try:
            return self.unary[name]
        except KeyError:
            raise KeyError(f'undeclared predicate {name!r}') from None

    def verb(self, name: str) -> Relation:
        try:
            return self.binary[name]
        except KeyError:
            raise KeyError(f'undeclared relation {name!r}') from None


def subj_rel_set(head: int, verb: Relation, obj: int) -> int:
    """``head that verb obj`` = head ∩ verb⁻¹[obj]."""
    return head & inverse_image(verb, obj)


def obj_rel_set(head: int, sbj: int, verb: Relation) -> int:
    """``head that sbj verb`` = head ∩ verb[sbj]."""
    return head & relational_image(verb, sbj)


def poss_subj_intersection(model: SetModel, possessor: str, subject: str,
                           verb: str, obj: str) -> int:
    modified = inverse_image(model.verb(verb), model.noun(obj)) & model.noun(subject)
    return model.noun(possessor) & inverse_image(model.has, modified)


def poss_obj_intersection(model: SetModel, possessor: str, subject: str,
                          verb: str, obj: str) -> int:
    modified = relational_image(model.verb(verb), model.noun(subject)) & model.noun(obj)
    return model.noun(possessor) & inverse_image(model.has, modified)


def that_has_intersection(model: SetModel, possessor: str, subject: str,
                          verb: str, obj: str, object_clause: bool = False) -> int:
    """Same clause read as "possessor that has (X that ...)".

    Built by nesting the plain relative-clause sets, with ``has`` as the
    outer verb.
    """
    v = model.verb(verb)
    if object_clause:
        inner = obj_rel_set(model.noun(obj), model.noun(subject), v)
    else:
        inner = subj_rel_set(model.noun(subject), v, model.noun(obj))
    return subj_rel_set(model.noun(possessor), model.has, inner)


def embed(mask: int, size: int) -> np.ndarray:
    """0/1 sum vector of a subset."""
    v = np.zeros(size)
    idx = members(mask)
    if idx and idx[-1] >= size:
        raise ValueError('subset leaves the universe')
    v[idx] = 1.0
    return v


def embed_relation(rel: Relation) -> np.ndarray:
    m = np.zeros((rel.size, rel.size))
    for i, j in rel.pairs():
        m[i, j] = 1.0
    return m


def mu_member(t: np.ndarray, subset_vec: np.ndarray) -> np.ndarray:
    return np.asarray(t, float) * np.asarray(subset_vec, float)


def is_member(t: np.ndarray, subset_vec: np.ndarray) -> bool:
    """t is in T when merging the basis vector with T gives it back."""
    t = np.asarray(t, float)
    return bool(t.any()) and np.array_equal(mu_member(t, subset_vec), t)


def mu_intersection(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.asarray(a, float) * np.asarray(b, float)
