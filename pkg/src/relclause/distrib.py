"""Corpus statistics, ratio-weighted context vectors, verb matrices and
the learned ownership map.

Input corpora are already lemmatised: one sentence per line, tokens
separated by whitespace.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .functor import OwnershipMap

log = logging.getLogger(__name__)

__all__ = ['CooccurrenceStats', 'build_cooccurrence', 'context_vector',
           'context_vectors', 'build_verb_matrix', 'build_verb_tensors',
           'build_ownership_map', 'read_corpus', 'read_triples', 'read_pairs',
           'write_stats', 'read_stats']


@dataclass(frozen=True, eq=False)
class CooccurrenceStats:
    vocabulary: tuple[str, ...]
    basis: tuple[str, ...]
    counts: np.ndarray      # int64, vocabulary x basis

    def __post_init__(self):
        c = np.asarray(self.counts, dtype=np.int64)
        if c.shape != (len(self.vocabulary), len(self.basis)):
            raise ValueError(f'counts shape {c.shape} does not match '
                             f'{len(self.vocabulary)} x {len(self.basis)}')
        if (c < 0).any():
            raise ValueError('counts must be nonnegative')
        c.setflags(write=False)
        object.__setattr__(self, 'counts', c)
        object.__setattr__(self, '_row',
                           {w: i for i, w in enumerate(self.vocabulary)})

    @property
    def word_totals(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def basis_totals(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    @property
    def grand_total(self) -> int:
        return int(self.counts.sum())

    def count(self, word: str, context: str) -> int:
        return int(self.counts[self.row(word), self.basis.index(context)])

    def row(self, word: str) -> int:
        try:
            return self._row[word]
        except KeyError:
            raise KeyError(f'word {word!r} not seen in corpus') from None

    def merge(self, other: CooccurrenceStats) -> CooccurrenceStats:
        """Exact sum of counts from two shards over the same basis."""
        if self.basis != other.basis:
            raise ValueError('shards must share a basis')
        vocab = tuple(sorted(set(self.vocabulary) | set(other.vocabulary)))
        counts = np.zeros((len(vocab), len(self.basis)), dtype=np.int64)
        index = {w: i for i, w in enumerate(vocab)}
        for stats in (self, other):
            rows = [index[w] for w in stats.vocabulary]
            np.add.at(counts, rows, stats.counts)
        return CooccurrenceStats(vocab, self.basis, counts)


def write_stats(path, stats: CooccurrenceStats) -> None:
    """Dense count table: header ``#cooc`` then the basis, one row per word."""
    with open(path, 'w', encoding='utf-8', newline='\n') as fh:
        fh.write('#cooc\t' + '\t'.join(stats.basis) + '\n')
        for word, row in zip(stats.vocabulary, stats.counts):
            fh.write(word + '\t' + '\t'.join(str(int(c)) for c in row) + '\n')


def read_stats(path) -> CooccurrenceStats:
    with open(path, encoding='utf-8') as fh:
        head = fh.readline().rstrip('\n').split('\t')
        if head[0] != '#cooc':
            raise ValueError(f'{path}: missing #cooc header')
        vocab, rows = [], []
        for lineno, line in enumerate(fh, 2):
            parts = line.rstrip('\n').split('\t')
            if len(parts) != len(head):
                raise ValueError(f'{path}:{lineno}: expected {len(head)} fields')
            vocab.append(parts[0])
            rows.append([int(x) for x in parts[1:]])
    counts = np.array(rows, dtype=np.int64).reshape(len(vocab), len(head) - 1)
    return CooccurrenceStats(tuple(vocab), tuple(head[1:]), counts)


def read_corpus(lines: Iterable[str]) -> list[list[str]]:
    return [line.split() for line in lines if line.strip()]


def select_basis(sentences: Sequence[Sequence[str]], size: int) -> tuple[str, ...]:
    """Top-``size`` lemmas by frequency, ties broken alphabetically."""
    freq = Counter(tok for s in sentences for tok in s)
    if size > len(freq):
        raise ValueError(f'basis size {size} exceeds vocabulary of {len(freq)}')
    ranked = sorted(freq.items(), key=lambda kv: (-kv[1], kv[0]))
    return tuple(w for w, _ in ranked[:size])


def build_cooccurrence(sentences: Sequence[Sequence[str]], window: int = 5,
                       basis_size: int | None = None,
                       basis: Sequence[str] | None = None,
                       cross_sentences: bool = False) -> CooccurrenceStats:
    """Count basis words within ``window`` positions either side of each token.

    Windows stop at sentence boundaries unless ``cross_sentences`` is set.
    Give either ``basis_size`` (top-K by frequency) or an explicit ``basis``.
    """
    sentences = [list(s) for s in sentences]
    if not any(sentences):
        raise ValueError('corpus is empty')
    if window < 1:
        raise ValueError('window must be positive')
    if cross_sentences:
        sentences = [[tok for s in sentences for tok in s]]
    if basis is None:
        if basis_size is None:
            raise ValueError('need basis_size or basis')
        basis = select_basis(sentences, basis_size)
    basis = tuple(basis)
    col = {b: i for i, b in enumerate(basis)}
    vocab = tuple(sorted({tok for s in sentences for tok in s}))
    row = {w: i for i, w in enumerate(vocab)}
    counts = np.zeros((len(vocab), len(basis)), dtype=np.int64)
    for sent in sentences:
        for i, word in enumerate(sent):
            r = row[word]
            for j in range(max(0, i - window), min(len(sent), i + window + 1)):
                if j != i and sent[j] in col:
                    counts[r, col[sent[j]]] += 1
    return CooccurrenceStats(vocab, basis, counts)


def context_vector(stats: CooccurrenceStats, word: str) -> np.ndarray:
    """Coordinate b is P(b | word) / P(b); zero where undefined."""
    r = stats.row(word)
    num = float(stats.grand_total) * stats.counts[r].astype(float)
    den = float(stats.word_totals[r]) * stats.basis_totals.astype(float)
    out = np.zeros(len(stats.basis))
    np.divide(num, den, out=out, where=den > 0)
    return out


def context_vectors(stats: CooccurrenceStats,
                    words: Iterable[str] | None = None) -> dict[str, np.ndarray]:
    words = stats.vocabulary if words is None else words
    return {w: context_vector(stats, w) for w in words}


def read_triples(lines: Iterable[str]) -> list[tuple[str, str, str, int]]:
    """``subject<TAB>verb<TAB>object<TAB>count``; object ``-`` for intransitives."""
    out = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip() or line.startswith('#'):
            continue
        parts = line.rstrip('\n').split('\t')
        if len(parts) != 4:
            raise ValueError(f'triples line {lineno}: expected 4 fields')
        count = int(parts[3])
        if count < 1:
            raise ValueError(f'triples line {lineno}: count must be >= 1')
        out.append((parts[0], parts[1], parts[2], count))
    return out


def read_pairs(lines: Iterable[str]) -> list[tuple[str, str, int]]:
    """``owner<TAB>possessed<TAB>count``."""
    out = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip() or line.startswith('#'):
            continue
        parts = line.rstrip('\n').split('\t')
        if len(parts) != 3:
            raise ValueError(f'pairs line {lineno}: expected 3 fields')
        count = int(parts[2])
        if count < 1:
            raise ValueError(f'pairs line {lineno}: count must be >= 1')
        out.append((parts[0], parts[1], count))
    return out


def build_verb_matrix(triples, vectors: Mapping[str, np.ndarray],
                      verb: str | None = None) -> np.ndarray:
    """Count-weighted sum of ``outer(subject, object)`` over the triples.

    ``triples`` holds ``(subject, verb, object, count)``; when ``verb`` is
    given, only matching triples count.
    """
    total = None
    for s, v, o, c in triples:
        if verb is not None and v != verb:
            continue
        term = c * np.outer(vectors[s], vectors[o])
        total = term if total is None else total + term
    if total is None:
        raise ValueError(f'no triples for verb {verb!r}')
    return total


def build_verb_tensors(triples, vectors: Mapping[str, np.ndarray]
                       ) -> tuple[dict[str, np.ndarray], dict[str, np.ndarray]]:
    """Matrices for transitive uses and subject sums for intransitive ones.

    Triples mentioning a lemma without a vector are skipped with a warning.
    """
    trans: dict[str, np.ndarray] = {}
    intrans: dict[str, np.ndarray] = {}
    for s, v, o, c in triples:
        missing = [w for w in (s, o) if w != '-' and w not in vectors]
        if missing:
            log.warning('skipping triple (%s, %s, %s): no vector for %s',
                        s, v, o, ', '.join(missing))
            continue
        if o == '-':
            intrans[v] = intrans.get(v, 0) + c * vectors[s]
        else:
            trans[v] = trans.get(v, 0) + c * np.outer(vectors[s], vectors[o])
    return trans, intrans


def build_ownership_map(pairs, vectors: Mapping[str, np.ndarray] | None,
                        mode: str = 'identity', dim: int | None = None
                        ) -> OwnershipMap:
    """Identity, or ``sum count * outer(owner, possessed / |possessed|)``.

    The learned map sends a unit possessed vector to the sum of its owners.
    """
    if mode == 'identity':
        if dim is None:
            dim = len(next(iter(vectors.values())))
        return OwnershipMap.identity(dim)
    if mode != 'learned':
        raise ValueError(f'unknown ownership mode {mode!r}')
    pairs = list(pairs)
    if not pairs:
        raise ValueError('learned ownership map needs at least one pair')
    total = None
    for owner, possessed, count in pairs:
        p = np.asarray(vectors[possessed], float)
        norm = np.linalg.norm(p)
        p = p / norm if norm > 0 else p
        term = count * np.outer(vectors[owner], p)
        total = term if total is None else total + term
    return OwnershipMap(total, 'learned')
