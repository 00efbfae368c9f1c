"""Pregroup types and contraction-only reductions.

An atomic type is a base symbol with an integer adjoint order: ``n^l`` has
order -1, ``n^r`` order +1, ``n^{ll}`` order -2 and so on.  A cup may join
``a^(z)`` at position i with ``a^(z+1)`` at a later position j, so both
``n n^r`` and ``n^l n`` cancel.

Reductions are computed with a stack scan (:func:`reduce_greedy`).  Because
contraction is not confluent (``n^l n n^r`` reduces to either ``n^r`` or
``n^l``), :func:`iter_reductions` enumerates every planar reduction and
:func:`search_reduction` returns the first one hitting a target.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

__all__ = [
    'DEFAULT_ALPHABET', 'AtomicType', 'PregroupType', 'ReductionPlan',
    'PregroupError', 'LexEntry', 'Lexicon', 'parse_type', 'reduce_greedy',
    'iter_reductions', 'search_reduction', 'check_grammatical',
]

DEFAULT_ALPHABET = frozenset({'n', 's'})

SEMANTIC_TAGS = frozenset({
    'vector', 'matrix-verb', 'cube-verb', 'intrans-verb', 'rel-subj',
    'rel-obj', 'rel-poss-subj', 'rel-poss-obj', 'has-predicate',
})

_TOKEN = re.compile(r'^(?P<base>[A-Za-z][A-Za-z0-9_]*)'
                    r'(?:\^(?:\{(?P<braced>[lr]+)\}|(?P<plain>[lr]+)))?$')


class PregroupError(ValueError):
    """Raised for malformed type notation or lexicon problems."""


@dataclass(frozen=True, order=True)
class AtomicType:
    base: str
    order: int = 0

    def adjoint(self, side: str) -> AtomicType:
        return AtomicType(self.base, self.order + (1 if side == 'r' else -1))

    def cancels_with(self, right: AtomicType) -> bool:
        """True when ``self right`` forms a cup (left order z, right z+1)."""
        return self.base == right.base and right.order == self.order + 1

    def __str__(self) -> str:
        if self.order == 0:
            return self.base
        suffix = ('r' if self.order > 0 else 'l') * abs(self.order)
        return f'{self.base}^{suffix}'


@dataclass(frozen=True)
class PregroupType:
    atoms: tuple[AtomicType, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'atoms', tuple(self.atoms))

    @classmethod
    def unit(cls) -> PregroupType:
        return cls(())

    def __matmul__(self, other: PregroupType) -> PregroupType:
        return PregroupType(self.atoms + other.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self) -> Iterator[AtomicType]:
        return iter(self.atoms)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return PregroupType(self.atoms[item])
        return self.atoms[item]

    def __str__(self) -> str:
        return ' '.join(str(a) for a in self.atoms)

    @staticmethod
    def concat(types: Iterable[PregroupType]) -> PregroupType:
        atoms: list[AtomicType] = []
        for t in types:
            atoms.extend(t.atoms)
        return PregroupType(tuple(atoms))


def parse_type(text: str, alphabet: Iterable[str] | None = DEFAULT_ALPHABET
               ) -> PregroupType:
    """Parse whitespace-separated atoms such as ``"n^r n s^l n n^{ll}"``.

    ``alphabet=None`` accepts any base symbol.
    """
    allowed = None if alphabet is None else frozenset(alphabet)
    atoms = []
    for token in text.split():
        m = _TOKEN.match(token)
        if m is None:
            raise PregroupError(f'malformed type token {token!r}')
        base = m['base']
        if allowed is not None and base not in allowed:
            raise PregroupError(f'unknown base symbol {base!r} in {token!r}')
        suffix = m['braced'] or m['plain'] or ''
        if suffix and len(set(suffix)) != 1:
            raise PregroupError(f'mixed adjoint suffix in {token!r}')
        sign = 1 if suffix.startswith('r') else -1
        atoms.append(AtomicType(base, sign * len(suffix)))
    return PregroupType(tuple(atoms))


@dataclass(frozen=True)
class ReductionPlan:
    """Cups as index pairs ``(i, j)`` with ``i < j`` plus surviving indices."""
    links: tuple[tuple[int, int], ...]
    residual: tuple[int, ...]
    size: int = field(default=-1, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'links', tuple(sorted(map(tuple, self.links))))
        object.__setattr__(self, 'residual', tuple(sorted(self.residual)))
        if self.size < 0:
            object.__setattr__(
                self, 'size', 2 * len(self.links) + len(self.residual))

    def residual_type(self, t: PregroupType) -> PregroupType:
        return PregroupType(tuple(t.atoms[i] for i in self.residual))

    def is_planar(self) -> bool:
        for (i, j) in self.links:
            for (k, l) in self.links:
                if i < k < j < l:
                    return False
        return True

    def validate(self, t: PregroupType) -> None:
        """Raise if the plan is not a well-formed reduction of ``t``."""
        seen = [i for link in self.links for i in link] + list(self.residual)
        if sorted(seen) != list(range(len(t))):
            raise PregroupError('links and residual must partition positions')
        for i, j in self.links:
            if not i < j or not t[i].cancels_with(t[j]):
                raise PregroupError(f'invalid cup ({i}, {j}) on {t}')
        if not self.is_planar():
            raise PregroupError('crossing cups')
        for r in self.residual:
            if any(i < r < j for i, j in self.links):
                raise PregroupError(f'residual wire {r} trapped under a cup')


def reduce_greedy(t: PregroupType) -> tuple[ReductionPlan, PregroupType]:
    stack: list[int] = []
    links = []
    for j, atom in enumerate(t.atoms):
        if stack and t.atoms[stack[-1]].cancels_with(atom):
            links.append((stack.pop(), j))
        else:
            stack.append(j)
    plan = ReductionPlan(tuple(links), tuple(stack), len(t))
    return plan, plan.residual_type(t)


def iter_reductions(t: PregroupType, target: PregroupType | None = None
                    ) -> Iterator[ReductionPlan]:
    """Yield every planar contraction plan, optionally only those whose
    residual equals ``target``.

    At each position the scan either cups the incoming atom with the top
    of the stack or pushes it; every planar plan without trapped residual
    wires arises from exactly one such choice sequence.  Cupping is tried
    first, so the greedy plan (when it qualifies) comes out first.
    """
    atoms = t.atoms
    n = len(atoms)
    goal = None if target is None else target.atoms

    def feasible(j: int, depth: int) -> bool:
        if goal is None:
            return True
        # every remaining atom can shrink the stack by at most one
        return depth - (n - j) <= len(goal) <= depth + (n - j)

    def walk(j: int, stack: tuple[int, ...], links: tuple) -> Iterator:
        if not feasible(j, len(stack)):
            return
        if j == n:
            if goal is None or tuple(atoms[i] for i in stack) == goal:
                yield ReductionPlan(links, stack, n)
            return
        if stack and atoms[stack[-1]].cancels_with(atoms[j]):
            yield from walk(j + 1, stack[:-1], links + ((stack[-1], j),))
        yield from walk(j + 1, stack + (j,), links)

    yield from walk(0, (), ())


def search_reduction(t: PregroupType, target: PregroupType
                     ) -> ReductionPlan | None:
    return next(iter_reductions(t, target), None)


@dataclass(frozen=True)
class LexEntry:
    type: PregroupType
    tag: str = 'vector'


class Lexicon:
    """Word to (pregroup type, semantic tag) table.

    File format: ``word<TAB>type<TAB>tag`` per line; ``#`` starts a comment.
    """

    def __init__(self, entries: dict[str, LexEntry] | None = None):
        self._entries = dict(entries or {})

    def __contains__(self, word: str) -> bool:
        return word in self._entries

    def __getitem__(self, word: str) -> LexEntry:
        try:
            return self._entries[word]
        except KeyError:
            raise PregroupError(f'word {word!r} missing from lexicon') from None

    def __iter__(self):
        return iter(self._entries)

    def add(self, word: str, type_: PregroupType | str,
            tag: str = 'vector') -> None:
        if isinstance(type_, str):
            type_ = parse_type(type_)
        if tag not in SEMANTIC_TAGS:
            raise PregroupError(f'unknown semantic tag {tag!r}')
        self._entries[word] = LexEntry(type_, tag)

    def types(self, words: Sequence[str]) -> list[PregroupType]:
        return [self[w].type for w in words]

    @classmethod
    def from_lines(cls, lines: Iterable[str],
                   alphabet: Iterable[str] | None = DEFAULT_ALPHABET
                   ) -> Lexicon:
        lex = cls()
        for lineno, raw in enumerate(lines, 1):
            line = raw.rstrip('\n')
            if not line.strip() or line.lstrip().startswith('#'):
                continue
            parts = line.split('\t')
            if len(parts) not in (2, 3):
                raise PregroupError(f'line {lineno}: expected 2 or 3 '
                                    f'tab-separated fields, got {len(parts)}')
            tag = parts[2].strip() if len(parts) == 3 else 'vector'
            lex.add(parts[0].strip(), parse_type(parts[1], alphabet), tag)
        return lex

    @classmethod
    def load(cls, path: str | Path, **kwargs) -> Lexicon:
        with open(path, encoding='utf-8') as fh:
            return cls.from_lines(fh, **kwargs)


def check_grammatical(words: Sequence[str], lexicon: Lexicon,
                      target: PregroupType | str
                      ) -> tuple[bool, ReductionPlan]:
    """Check that ``words`` reduce to ``target``.

    The greedy plan is tried first and the exhaustive search is the
    fallback.  On failure the greedy plan is returned alongside ``False``.
    """
    if isinstance(target, str):
        target = parse_type(target)
    t = PregroupType.concat(lexicon.types(words))
    plan, residual = reduce_greedy(t)
    if residual == target:
        return True, plan
    found = search_reduction(t, target)
    if found is not None:
        return True, found
    return False, plan
