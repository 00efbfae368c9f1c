"""TSV persistence for vectors and matrices.

Every file starts with a header line ``#tensor-store<TAB>v1<TAB>rank=R<TAB>dim=D``.
Rank-1 rows are ``label v1 ... vD``; rank-2 rows are sparse triplets
``label i j value`` (zero entries omitted).  Floats are written with
``repr`` so a save/load cycle is exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

FORMAT = 'tensor-store'
VERSION = 'v1'

VECTORS = 'vectors.tsv'
VERBS = 'verbs.tsv'
INTRANSITIVE = 'intransitive.tsv'
OWNERSHIP = 'ownership.tsv'
OWNERSHIP_LABEL = "'s"


class StoreError(ValueError):
    pass


def _header(rank: int, dim: int) -> str:
    return f'#{FORMAT}\t{VERSION}\trank={rank}\tdim={dim}\n'


def _parse_header(line: str, path) -> tuple[int, int]:
    parts = line.rstrip('\n').split('\t')
    if len(parts) != 4 or parts[0] != '#' + FORMAT:
        raise StoreError(f'{path}: missing tensor-store header')
    if parts[1] != VERSION:
        raise StoreError(f'{path}: unsupported version {parts[1]!r}')
    try:
        rank = int(parts[2].removeprefix('rank='))
        dim = int(parts[3].removeprefix('dim='))
    except ValueError:
        raise StoreError(f'{path}: malformed header {line!r}') from None
    return rank, dim


def write_vectors(path, vectors: Mapping[str, np.ndarray], dim: int) -> None:
    with open(path, 'w', encoding='utf-8', newline='\n') as fh:
        fh.write(_header(1, dim))
        for label in sorted(vectors):
            v = np.asarray(vectors[label], dtype=float)
            if v.shape != (dim,):
                raise StoreError(f'vector {label!r} has shape {v.shape}')
            fh.write(label + '\t' + '\t'.join(repr(float(x)) for x in v) + '\n')


def read_vectors(path) -> tuple[dict[str, np.ndarray], int]:
    with open(path, encoding='utf-8') as fh:
        rank, dim = _parse_header(fh.readline(), path)
        if rank != 1:
            raise StoreError(f'{path}: expected rank 1, found {rank}')
        out = {}
        for lineno, line in enumerate(fh, 2):
            if not line.strip():
                continue
            parts = line.rstrip('\n').split('\t')
            if len(parts) != dim + 1:
                raise StoreError(f'{path}:{lineno}: expected {dim} values')
            out[parts[0]] = np.array([float(x) for x in parts[1:]])
    return out, dim


def write_matrices(path, matrices: Mapping[str, np.ndarray], dim: int) -> None:
    with open(path, 'w', encoding='utf-8', newline='\n') as fh:
        fh.write(_header(2, dim))
        for label in sorted(matrices):
            m = np.asarray(matrices[label], dtype=float)
            if m.shape != (dim, dim):
                raise StoreError(f'matrix {label!r} has shape {m.shape}')
            rows, cols = np.nonzero(m)
            if len(rows) == 0:
                # keep empty matrices visible on reload
                fh.write(f'{label}\t0\t0\t0.0\n')
            for i, j in zip(rows, cols):
                fh.write(f'{label}\t{i}\t{j}\t{float(m[i, j])!r}\n')


def read_matrices(path) -> tuple[dict[str, np.ndarray], int]:
    with open(path, encoding='utf-8') as fh:
        rank, dim = _parse_header(fh.readline(), path)
        if rank != 2:
            raise StoreError(f'{path}: expected rank 2, found {rank}')
        out: dict[str, np.ndarray] = {}
        for lineno, line in enumerate(fh, 2):
            if not line.strip():
                continue
            parts = line.rstrip('\n').split('\t')
            if len(parts) != 4:
                raise StoreError(f'{path}:{lineno}: expected label i j value')
            m = out.setdefault(parts[0], np.zeros((dim, dim)))
            m[int(parts[1]), int(parts[2])] = float(parts[3])
    return out, dim


@dataclass
class VectorStore:
    """Noun/context vectors, verb tensors and an optional ownership map."""
    dim: int
    vectors: dict[str, np.ndarray] = field(default_factory=dict)
    verbs: dict[str, np.ndarray] = field(default_factory=dict)
    intransitive: dict[str, np.ndarray] = field(default_factory=dict)
    ownership: np.ndarray | None = None

    def vector(self, word: str) -> np.ndarray:
        try:
            return self.vectors[word]
        except KeyError:
            raise KeyError(f'no vector for {word!r}') from None

    def verb(self, word: str) -> np.ndarray:
        if word in self.verbs:
            return self.verbs[word]
        if word in self.intransitive:
            return self.intransitive[word]
        raise KeyError(f'no verb tensor for {word!r}')

    def save(self, directory) -> None:
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        write_vectors(d / VECTORS, self.vectors, self.dim)
        if self.verbs:
            write_matrices(d / VERBS, self.verbs, self.dim)
        if self.intransitive:
            write_vectors(d / INTRANSITIVE, self.intransitive, self.dim)
        if self.ownership is not None:
            write_matrices(d / OWNERSHIP, {OWNERSHIP_LABEL: self.ownership},
                           self.dim)

    @classmethod
    def load(cls, directory) -> VectorStore:
        d = Path(directory)
        vectors, dim = read_vectors(d / VECTORS)
        store = cls(dim, vectors)
        for name, reader, attr in ((VERBS, read_matrices, 'verbs'),
                                   (INTRANSITIVE, read_vectors, 'intransitive')):
            if (d / name).exists():
                data, other = reader(d / name)
                if other != dim:
                    raise StoreError(f'{name}: dim {other} != {dim}')
                setattr(store, attr, data)
        if (d / OWNERSHIP).exists():
            mats, other = read_matrices(d / OWNERSHIP)
            if other != dim or OWNERSHIP_LABEL not in mats:
                raise StoreError(f'{OWNERSHIP}: malformed ownership map')
            store.ownership = mats[OWNERSHIP_LABEL]
        return store
