from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from oracles import all_planar_plans
from relclause.pregroup import (AtomicType, Lexicon, PregroupError, PregroupType,
                                ReductionPlan, check_grammatical, iter_reductions,
                                parse_type, reduce_greedy, search_reduction)

n, s = AtomicType('n'), AtomicType('s')
nr, nl, nll = AtomicType('n', 1), AtomicType('n', -1), AtomicType('n', -2)
sl = AtomicType('s', -1)

atoms = st.builds(AtomicType, st.sampled_from(['n', 's']), st.integers(-2, 2))
types = st.lists(atoms, max_size=8).map(lambda xs: PregroupType(tuple(xs)))


def T(*xs):
    return PregroupType(tuple(xs))


def test_parse_possessive_subject_type():
    assert parse_type('n^r n s^l n n^l') == T(nr, n, sl, n, nl)


def test_parse_possessive_object_type():
    assert parse_type('n^r n n^{ll} s^l n^l') == T(nr, n, nll, sl, nl)


def test_parse_empty_is_unit():
    assert parse_type('') == PregroupType.unit()
    assert len(parse_type('   ')) == 0


@pytest.mark.parametrize('bad', ['x', 'n^q', 'n^lr', 'n^', '^l'])
def test_parse_rejects(bad):
    with pytest.raises(PregroupError):
        parse_type(bad)


def test_parse_open_alphabet():
    assert parse_type('pp^r', alphabet=None) == T(AtomicType('pp', 1))


@given(types)
def test_print_parse_roundtrip(t):
    assert parse_type(str(t)) == t


@given(types, types, types)
def test_concat_associative_with_unit(a, b, c):
    assert (a @ b) @ c == a @ (b @ c)
    assert a @ PregroupType.unit() == a == PregroupType.unit() @ a


def test_greedy_men_like_cats():
    plan, res = reduce_greedy(T(n, nr, s, nl, n))
    assert set(plan.links) == {(0, 1), (3, 4)}
    assert res == T(s)


def test_greedy_irreducible():
    plan, res = reduce_greedy(T(n, nl))
    assert plan.links == () and res == T(n, nl)


def test_greedy_subject_possessive_clause():
    t = parse_type('n n^r n s^l n n^l n n^r s n^l n')
    plan, res = reduce_greedy(t)
    assert len(t) == 11
    assert res == T(n)
    plan.validate(t)


def test_search_non_confluent():
    t = T(nl, n, nr)
    assert search_reduction(t, T(nr)).links == ((0, 1),)
    assert search_reduction(t, T(nl)).links == ((1, 2),)
    assert search_reduction(T(s), T(n)) is None


def test_plan_validation_errors():
    t = T(n, nr, n, nr)
    with pytest.raises(PregroupError):
        ReductionPlan(((0, 3),), (1, 2)).validate(t)       # invalid cup / trapped
    with pytest.raises(PregroupError):
        ReductionPlan(((0, 1),), (2,)).validate(t)         # missing position
    crossing = T(n, n, nr, nr)
    assert not ReductionPlan(((0, 2), (1, 3)), ()).is_planar()
    with pytest.raises(PregroupError):
        ReductionPlan(((0, 2), (1, 3)), ()).validate(crossing)


@settings(max_examples=200)
@given(types)
def test_greedy_plan_sound(t):
    plan, res = reduce_greedy(t)
    plan.validate(t)
    kept = [a for i, a in enumerate(t) if i not in {p for l in plan.links for p in l}]
    assert PregroupType(tuple(kept)) == res


@settings(max_examples=150, deadline=None)
@given(st.lists(atoms, max_size=10).map(lambda xs: PregroupType(tuple(xs))))
def test_iter_reductions_matches_oracle(t):
    expected = {(links, res) for links, res in all_planar_plans(t.atoms)}
    got = {(frozenset(p.links), p.residual) for p in iter_reductions(t)}
    assert got == expected


@settings(max_examples=150, deadline=None)
@given(types, types)
def test_search_complete_against_oracle(t, target):
    oracle = [res for _, res in all_planar_plans(t.atoms)
              if tuple(t[i] for i in res) == target.atoms]
    found = search_reduction(t, target)
    assert (found is not None) == bool(oracle)
    if found is not None:
        found.validate(t)
        assert found.residual_type(t) == target


@given(types)
def test_greedy_success_implies_search(t):
    _, res = reduce_greedy(t)
    found = search_reduction(t, res)
    assert found is not None and len(found.residual) == len(res)


def _lexicon():
    return Lexicon.from_lines([
        '# word\ttype\ttag',
        'red\tn n^l',
        'car\tn',
        'men\tn',
        'cats\tn',
        'sneeze\tn^r s\tintrans-verb',
        'like\tn^r s n^l\tmatrix-verb',
        'author\tn',
        'book\tn',
        'John\tn',
        'whose\tn^r n s^l n n^l\trel-poss-subj',
        'entertained\tn^r s n^l\tmatrix-verb',
    ])


@pytest.mark.parametrize('words,target', [
    (['red', 'car'], 'n'),
    (['men', 'sneeze'], 's'),
    (['men', 'like', 'cats'], 's'),
    (['author', 'whose', 'book', 'entertained', 'John'], 'n'),
])
def test_check_grammatical(words, target):
    ok, plan = check_grammatical(words, _lexicon(), target)
    assert ok
    plan.validate(PregroupType.concat(_lexicon().types(words)))


def test_check_grammatical_rejects_and_missing_word():
    ok, _ = check_grammatical(['car', 'red'], _lexicon(), 'n')
    assert not ok
    with pytest.raises(PregroupError):
        check_grammatical(['blue', 'car'], _lexicon(), 'n')


def test_check_grammatical_uses_search_fallback():
    lex = Lexicon()
    lex.add('a', 'n^l')
    lex.add('b', 'n')
    lex.add('c', 'n^r')
    ok, plan = check_grammatical(['a', 'b', 'c'], lex, 'n^l')
    assert ok and plan.links == ((1, 2),)


def test_lexicon_errors():
    with pytest.raises(PregroupError):
        Lexicon.from_lines(['only-one-field'])
    with pytest.raises(PregroupError):
        Lexicon().add('x', 'n', 'no-such-tag')
