"""Command line entry point: ``relclause <command> ...``."""
from __future__ import annotations

import argparse
import logging
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import checks
from .distrib import (build_cooccurrence, build_ownership_map, build_verb_tensors,
                      context_vectors, read_corpus, read_pairs, read_stats,
                      read_triples, write_stats)
from .evaluation import (MODELS, SPLITS, DatasetRow, describe, load_dataset,
                         paper_dataset, parse_description, run_evaluation)
from .functor import Pattern
from .predicate import SetModel, embed, poss_obj_intersection, poss_subj_intersection
from .store import VectorStore
from .tensor import cosine
from .truth import (RelationalModel, compose_in_model, eval_poss_obj_truth,
                    eval_poss_subj_truth)

log = logging.getLogger('relclause')


def _lines(path):
    with open(path, encoding='utf-8') as fh:
        return fh.readlines()


def _load_store(directory) -> VectorStore:
    d = Path(directory)
    if (d / 'vectors.tsv').exists():
        return VectorStore.load(d)
    raise SystemExit(f'error: no vectors.tsv in {d}; run "relclause vectors" first')


def cmd_ingest(args) -> int:
    sentences = read_corpus(_lines(args.corpus))
    vocab = len({tok for sent in sentences for tok in sent})
    size = args.basis_size
    if size > vocab:
        log.warning('basis size %d exceeds vocabulary; using all %d lemmas',
                    size, vocab)
        size = vocab
    stats = build_cooccurrence(sentences, window=args.window, basis_size=size,
                               cross_sentences=args.cross_sentences)
    write_stats(args.out, stats)
    print(f'{len(stats.vocabulary)} words x {len(stats.basis)} basis -> {args.out}')
    return 0


def cmd_vectors(args) -> int:
    stats = read_stats(args.stats)
    words = args.words.split(',') if args.words else None
    vectors = context_vectors(stats, words)
    store = VectorStore(len(stats.basis), vectors)
    store.save(args.store)
    print(f'{len(vectors)} vectors (dim {store.dim}) -> {args.store}')
    return 0


def cmd_verbs(args) -> int:
    store = _load_store(args.store)
    trans, intrans = build_verb_tensors(read_triples(_lines(args.triples)),
                                        store.vectors)
    store.verbs.update(trans)
    store.intransitive.update(intrans)
    store.save(args.store)
    print(f'{len(trans)} transitive, {len(intrans)} intransitive verbs -> {args.store}')
    return 0


def cmd_ownership(args) -> int:
    store = _load_store(args.store)
    pairs = read_pairs(_lines(args.pairs)) if args.pairs else []
    own = build_ownership_map(pairs, store.vectors, args.mode, store.dim)
    store.ownership = own.matrix
    store.save(args.store)
    print(f'{args.mode} ownership map (dim {store.dim}) -> {args.store}')
    return 0


def _clause_row(items: list[str]) -> tuple[DatasetRow, str | None]:
    fields = {}
    for item in items:
        key, sep, value = item.partition('=')
        if not sep:
            raise SystemExit(f'error: expected key=value, got {item!r}')
        fields[key.strip().lower()] = value.strip()
    try:
        pattern = Pattern(fields.pop('pattern', '').upper())
    except ValueError:
        raise SystemExit('error: pattern must be one of '
                         + ', '.join(p.value for p in Pattern)) from None
    ownership = fields.pop('ownership', None)
    if ownership not in (None, 'identity', 'learned'):
        raise SystemExit('error: ownership must be identity or learned')
    known = {'poss', 'sbj', 'verb', 'obj', 'pronoun'}
    if set(fields) - known:
        raise SystemExit(f'error: unknown keys {sorted(set(fields) - known)}')
    if 'verb' not in fields:
        raise SystemExit('error: verb=... is required')
    row = DatasetRow('-', pattern, fields.get('poss'), fields.get('sbj'),
                     fields['verb'], fields.get('obj'), fields.get('pronoun', ''))
    if row.head is None:
        raise SystemExit(f'error: {pattern.value} needs its head noun')
    return row, ownership


def cmd_compose(args) -> int:
    store = _load_store(args.store)
    row, ownership = _clause_row(args.clause)
    model = args.model
    if ownership is not None:
        model = 'frob-id' if ownership == 'identity' else 'frob-learned'
    vec = describe(row, store, model)
    print('#' + row.description)
    print('\t'.join(repr(float(x)) for x in vec))
    return 0


def cmd_similarity(args) -> int:
    store = _load_store(args.store)
    row = parse_description(args.term, args.description, store.verbs)
    value = cosine(store.vector(args.term), describe(row, store, args.model))
    print(f'{value:.6f}')
    return 0


def cmd_evaluate(args) -> int:
    store = _load_store(args.store)
    rows = load_dataset(args.dataset) if args.dataset else paper_dataset()
    report = run_evaluation(rows, store, args.model, args.split)
    if args.out:
        Path(args.out).write_text(report.to_tsv(), encoding='utf-8')
    sys.stdout.write(report.to_table())
    return 0


def cmd_check(args) -> int:
    results = checks.run_all(args.seed, args.trials)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f'{len(results) - failed}/{len(results)} checks passed')
    return 1 if failed else 0


def _builtin_model() -> RelationalModel:
    text = resources.files('relclause.data').joinpath('authors.model').read_text('utf-8')
    return RelationalModel.parse(text.splitlines())


def cmd_model_eval(args) -> int:
    model = RelationalModel.load(args.model) if args.model else _builtin_model()
    pattern = Pattern(args.pattern.upper())
    if not pattern.possessive:
        raise SystemExit('error: model-eval handles POSS_SUBJ and POSS_OBJ')
    obj_clause = pattern is Pattern.POSS_OBJ
    clause = (model, args.poss, args.sbj, args.verb, args.obj)
    ev = eval_poss_obj_truth if obj_clause else eval_poss_subj_truth
    vec = ev(*clause, boolean=args.boolean)
    terms = [f'{vec[i]:g}*{name}' for i, name in enumerate(model.universe) if vec[i]]
    print(' + '.join(terms) if terms else '0')

    ok = True
    generic = compose_in_model(*clause, object_clause=obj_clause)
    if not args.boolean and not np.allclose(generic, vec, atol=1e-12, rtol=0):
        print('FAIL  closed form disagrees with the generic composer')
        ok = False
    sets = SetModel.from_relational(model)
    inter = poss_obj_intersection if obj_clause else poss_subj_intersection
    mask = inter(sets, args.poss, args.sbj, args.verb, args.obj)
    if not np.array_equal(embed(mask, model.size), ev(*clause, boolean=True)):
        print('FAIL  boolean truth vector disagrees with the set intersection')
        ok = False
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog='relclause',
                                description='Compositional relative-clause semantics.')
    p.add_argument('-v', '--verbose', action='store_true')
    sub = p.add_subparsers(dest='command', required=True)

    s = sub.add_parser('ingest', help='count co-occurrences in a lemmatised corpus')
    s.add_argument('--corpus', required=True)
    s.add_argument('--out', required=True)
    s.add_argument('--window', type=int, default=5)
    s.add_argument('--basis-size', type=int, default=2000)
    s.add_argument('--cross-sentences', action='store_true')
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser('vectors', help='context vectors from co-occurrence counts')
    s.add_argument('--stats', required=True)
    s.add_argument('--store', required=True)
    s.add_argument('--words', help='comma-separated subset (default: all)')
    s.set_defaults(func=cmd_vectors)

    s = sub.add_parser('verbs', help='verb tensors from subject/verb/object triples')
    s.add_argument('--triples', required=True)
    s.add_argument('--store', required=True)
    s.set_defaults(func=cmd_verbs)

    s = sub.add_parser('ownership', help="build the 's ownership map")
    s.add_argument('--store', required=True)
    s.add_argument('--pairs')
    s.add_argument('--mode', choices=('identity', 'learned'), default='identity')
    s.set_defaults(func=cmd_ownership)

    s = sub.add_parser('compose', help='compose one clause, print its vector')
    s.add_argument('clause', nargs='+', help='pattern=... verb=... sbj=... ...')
    s.add_argument('--store', required=True)
    s.add_argument('--model', choices=MODELS, default='frob-id')
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser('similarity', help='cosine of a term and a description')
    s.add_argument('term')
    s.add_argument('description')
    s.add_argument('--store', required=True)
    s.add_argument('--model', choices=MODELS, default='frob-id')
    s.set_defaults(func=cmd_similarity)

    s = sub.add_parser('evaluate', help='term/description classification')
    s.add_argument('--model', choices=MODELS, default='frob-id')
    s.add_argument('--dataset', help='TSV dataset (default: the bundled 16 rows)')
    s.add_argument('--store', required=True)
    s.add_argument('--split', choices=SPLITS, default='all')
    s.add_argument('--out', help='write the TSV report here')
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser('check', help='randomised equivalence checks')
    s.add_argument('suite', choices=('equivalence',))
    s.add_argument('--seed', type=int, default=0)
    s.add_argument('--trials', type=int, default=100)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser('model-eval', help='truth vector of a whose-clause in a model')
    s.add_argument('--model', help='model file (default: the bundled authors model)')
    s.add_argument('--pattern', default='POSS_SUBJ')
    s.add_argument('--poss', default='authors')
    s.add_argument('--sbj', default='books')
    s.add_argument('--verb', default='entertain')
    s.add_argument('--obj', default='John')
    s.add_argument('--boolean', action='store_true')
    s.set_defaults(func=cmd_model_eval)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        return args.func(args)
    except (KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f'error: {msg}', file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())
