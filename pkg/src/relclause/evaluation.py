"""Term/description classification with cosine ranking.

Each dataset row pairs a term (``football``) with a relative-clause
description (``game that boy like``).  Every term is ranked against every
description, and every description against every term; ties in cosine are
broken by the lexicographic order of the row's term.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Sequence

import numpy as np

from .functor import (INTRANSITIVE_TYPE, NOUN_TYPE, PRONOUN_TYPES,
                      TRANSITIVE_TYPE, ClauseSpec, OwnershipMap, Pattern)
from .pregroup import Lexicon, check_grammatical
from .store import VectorStore
from .tensor import cosine

log = logging.getLogger(__name__)

MODELS = ('frob-id', 'frob-learned', 'mult-with-pron', 'mult-without-pron',
          'add', 'head-noun')
SPLITS = ('all', 'poss', 'nonposs')
DEFAULT_PRONOUN = {Pattern.SUBJ_REL: 'that', Pattern.OBJ_REL: 'that',
                   Pattern.POSS_SUBJ: 'whose', Pattern.POSS_OBJ: 'whose'}


@dataclass(frozen=True)
class DatasetRow:
    term: str
    pattern: Pattern
    poss: str | None
    sbj: str | None
    verb: str
    obj: str | None
    pronoun: str = ''

    @property
    def head(self) -> str:
        """The noun the clause modifies."""
        if self.pattern is Pattern.SUBJ_REL:
            return self.sbj
        if self.pattern is Pattern.OBJ_REL:
            return self.obj
        return self.poss

    @property
    def pron(self) -> str:
        return self.pronoun or DEFAULT_PRONOUN[self.pattern]

    @property
    def description(self) -> str:
        p = self.pattern
        if p is Pattern.SUBJ_REL:
            words = [self.sbj, self.pron, self.verb, self.obj]
        elif p is Pattern.OBJ_REL:
            words = [self.obj, self.pron, self.sbj, self.verb]
        elif p is Pattern.POSS_SUBJ:
            words = [self.poss, self.pron, self.sbj, self.verb, self.obj]
        else:
            words = [self.poss, self.pron, self.obj, self.sbj, self.verb]
        return ' '.join(w for w in words if w)

    def content_words(self) -> list[str]:
        return [w for w in (self.poss, self.sbj, self.verb, self.obj) if w]

    def lemmas(self) -> list[str]:
        return [self.term] + self.content_words()


def parse_dataset(lines: Iterable[str]) -> list[DatasetRow]:
    """Rows ``term pattern poss sbj verb obj [pronoun]``, ``-`` for unused roles."""
    rows = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip() or line.startswith('#'):
            continue
        parts = line.rstrip('\n').split('\t')
        if len(parts) not in (6, 7):
            raise ValueError(f'dataset line {lineno}: expected 6 or 7 fields')
        opt = lambda x: None if x in ('-', '') else x
        try:
            pattern = Pattern(parts[1])
        except ValueError:
            raise ValueError(f'dataset line {lineno}: unknown pattern '
                             f'{parts[1]!r}') from None
        row = DatasetRow(parts[0], pattern, opt(parts[2]), opt(parts[3]),
                         parts[4], opt(parts[5]),
                         parts[6] if len(parts) == 7 else '')
        if row.head is None:
            raise ValueError(f'dataset line {lineno}: pattern {pattern.value} '
                             'is missing its head noun')
        rows.append(row)
    return rows


def load_dataset(path) -> list[DatasetRow]:
    with open(path, encoding='utf-8') as fh:
        return parse_dataset(fh)


def paper_dataset() -> list[DatasetRow]:
    """The 16 hand-written term/description pairs shipped with the package."""
    text = resources.files('relclause.data').joinpath('terms.tsv').read_text('utf-8')
    return parse_dataset(text.splitlines())


def split_rows(rows: Sequence[DatasetRow], split: str) -> list[DatasetRow]:
    if split == 'all':
        return list(rows)
    if split == 'poss':
        return [r for r in rows if r.pattern.possessive]
    if split == 'nonposs':
        return [r for r in rows if not r.pattern.possessive]
    raise ValueError(f'unknown split {split!r}')


_LAYOUTS = (
    (Pattern.SUBJ_REL, ('verb', 'obj')),
    (Pattern.SUBJ_REL, ('verb',)),
    (Pattern.OBJ_REL, ('sbj', 'verb')),
    (Pattern.POSS_SUBJ, ('sbj', 'verb', 'obj')),
    (Pattern.POSS_SUBJ, ('sbj', 'verb')),
    (Pattern.POSS_OBJ, ('obj', 'sbj', 'verb')),
)


def parse_description(term: str, text: str, transitive: Iterable[str]
                      ) -> DatasetRow:
    """Read ``head pronoun ...`` into a row by type-checking each pattern.

    The second word is the pronoun; possessive layouts are only tried for
    ``whose`` and plain ones for any other pronoun.  A verb in
    ``transitive`` takes the transitive type, any other verb the
    intransitive one.  Layouts are tried in order and the first whose types
    reduce to ``n`` wins.
    """
    words = text.split()
    transitive = set(transitive)
    if len(words) < 3:
        raise ValueError(f'cannot read {text!r} as a relative clause')
    head, pron, rest = words[0], words[1], words[2:]
    for pattern, layout in _LAYOUTS:
        if len(layout) != len(rest) or pattern.possessive != (pron == 'whose'):
            continue
        roles = dict(zip(layout, rest))
        verb = roles['verb']
        if ('obj' in roles or pattern is Pattern.OBJ_REL) != (verb in transitive):
            continue
        # positional keys so a repeated word can take two types
        lex = Lexicon()
        lex.add('0', NOUN_TYPE)
        lex.add('1', PRONOUN_TYPES[pattern.pronoun_tag], pattern.pronoun_tag)
        for i, role in enumerate(layout, 2):
            if role != 'verb':
                lex.add(str(i), NOUN_TYPE)
            elif verb in transitive:
                lex.add(str(i), TRANSITIVE_TYPE, 'matrix-verb')
            else:
                lex.add(str(i), INTRANSITIVE_TYPE, 'intrans-verb')
        ok, _ = check_grammatical([str(i) for i in range(len(words))], lex,
                                  NOUN_TYPE)
        if not ok:
            continue
        if pattern.possessive:
            return DatasetRow(term, pattern, head, roles.get('sbj'), verb,
                              roles.get('obj'), pron)
        if pattern is Pattern.SUBJ_REL:
            return DatasetRow(term, pattern, None, head, verb, roles.get('obj'), pron)
        return DatasetRow(term, pattern, None, roles['sbj'], verb, head, pron)
    raise ValueError(f'no relative-clause reading of {text!r}')


def describe(row: DatasetRow, store: VectorStore, model: str) -> np.ndarray:
    """Vector for the description of ``row`` under ``model``."""
    vec = store.vector
    if model == 'head-noun':
        return vec(row.head)
    if model in ('mult-with-pron', 'mult-without-pron', 'add'):
        words = row.content_words()
        if model == 'mult-with-pron':
            words = words + [row.pron]
        vs = [vec(w) for w in words]
        if model == 'add':
            return np.sum(vs, axis=0)
        return np.prod(vs, axis=0)
    if model == 'frob-id':
        own = OwnershipMap.identity(store.dim)
    elif model == 'frob-learned':
        if store.ownership is None:
            raise KeyError('store has no learned ownership map')
        own = OwnershipMap(store.ownership)
    else:
        raise ValueError(f'unknown model {model!r}')
    opt = lambda w: None if w is None else vec(w)
    spec = ClauseSpec(row.pattern, vec(row.head), store.verb(row.verb),
                      sbj=opt(row.sbj) if row.pattern is not Pattern.SUBJ_REL else None,
                      obj=opt(row.obj) if row.pattern is not Pattern.OBJ_REL else None,
                      ownership=own)
    return spec.compose()


@dataclass(frozen=True)
class RowResult:
    term: str
    description: str
    cosine: float
    rank_t2d: int
    rank_d2t: int
    ranking: tuple[tuple[str, float], ...]   # (row term, cosine), best first


@dataclass
class EvalReport:
    model: str
    split: str
    rows: list[RowResult] = field(default_factory=list)
    skipped: list[tuple[str, str]] = field(default_factory=list)

    def _mean(self, values) -> float:
        values = list(values)
        return float(np.mean(values)) if values else 0.0

    @property
    def mrr(self) -> float:
        """Mean reciprocal rank of each term's own description."""
        return self._mean(1.0 / r.rank_t2d for r in self.rows)

    @property
    def accuracy(self) -> float:
        """Fraction of terms whose own description ranks first (P@1)."""
        return self._mean(r.rank_t2d == 1 for r in self.rows)

    @property
    def mrr_d2t(self) -> float:
        return self._mean(1.0 / r.rank_d2t for r in self.rows)

    @property
    def accuracy_d2t(self) -> float:
        return self._mean(r.rank_d2t == 1 for r in self.rows)

    def to_tsv(self) -> str:
        out = [f'#report\tmodel={self.model}\tsplit={self.split}\t'
               f'n={len(self.rows)}\tskipped={len(self.skipped)}',
               'term\tdescription\tcosine\trank_t2d\trank_d2t\tbest_match']
        for r in self.rows:
            out.append(f'{r.term}\t{r.description}\t{r.cosine:.6f}\t'
                       f'{r.rank_t2d}\t{r.rank_d2t}\t{r.ranking[0][0]}')
        for term, reason in self.skipped:
            out.append(f'#skipped\t{term}\t{reason}')
        out.append(f'#summary\tmrr_t2d={self.mrr:.6f}\tp1_t2d={self.accuracy:.6f}'
                   f'\tmrr_d2t={self.mrr_d2t:.6f}\tp1_d2t={self.accuracy_d2t:.6f}')
        return '\n'.join(out) + '\n'

    def to_table(self) -> str:
        width = max([len(r.description) for r in self.rows] + [11])
        tw = max([len(r.term) for r in self.rows] + [4])
        lines = [f'model: {self.model}   split: {self.split}   '
                 f'items: {len(self.rows)}',
                 f'{"term":<{tw}}  {"description":<{width}}  cosine  '
                 f'rank(t->d)  rank(d->t)']
        for r in self.rows:
            lines.append(f'{r.term:<{tw}}  {r.description:<{width}}  '
                         f'{r.cosine:6.3f}  {r.rank_t2d:>10}  {r.rank_d2t:>10}')
        lines.append(f'MRR (term->description): {self.mrr:.3f}   '
                     f'P@1: {self.accuracy:.3f}')
        lines.append(f'MRR (description->term): {self.mrr_d2t:.3f}   '
                     f'P@1: {self.accuracy_d2t:.3f}')
        for term, reason in self.skipped:
            lines.append(f'skipped {term}: {reason}')
        return '\n'.join(lines) + '\n'


def _rank(scores: np.ndarray, keys: Sequence[str], own: int) -> tuple[int, list[int]]:
    order = sorted(range(len(keys)), key=lambda k: (-scores[k], keys[k]))
    return order.index(own) + 1, order


def run_evaluation(rows: Sequence[DatasetRow], store: VectorStore,
                   model: str = 'frob-id', split: str = 'all') -> EvalReport:
    if model not in MODELS:
        raise ValueError(f'unknown model {model!r}; choose from {MODELS}')
    report = EvalReport(model, split)
    kept, terms, descs = [], [], []
    for row in split_rows(rows, split):
        try:
            t = store.vector(row.term)
            d = describe(row, store, model)
        except KeyError as exc:
            reason = str(exc.args[0]) if exc.args else 'unresolvable lemma'
            log.warning('skipping %s: %s', row.term, reason)
            report.skipped.append((row.term, reason))
            continue
        kept.append(row)
        terms.append(t)
        descs.append(d)
    keys = [r.term for r in kept]
    if not kept:
        return report
    sims = np.array([[cosine(t, d) for d in descs] for t in terms])
    for i, row in enumerate(kept):
        rank_t2d, order = _rank(sims[i], keys, i)
        rank_d2t, _ = _rank(sims[:, i], keys, i)
        report.rows.append(RowResult(
            row.term, row.description, float(sims[i, i]), rank_t2d, rank_d2t,
            tuple((keys[k], float(sims[i, k])) for k in order)))
    return report
