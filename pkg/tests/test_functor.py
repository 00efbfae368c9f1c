from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_force_contract
from relclause.functor import (PRONOUN_TYPES, ClauseSpec, FunctorError, OwnershipMap,
                               Pattern, build_pronoun_network, clause_network,
                               collapse_verb, compose_lambek_whose, compose_obj_rel,
                               compose_poss_obj, compose_poss_subj, compose_subj_rel,
                               evaluate_clause_network, interpret_type,
                               sentence_network, that_has_network,
                               verify_decomposition, word_fragment)
from relclause.pregroup import PregroupType, parse_type
from relclause.tensor import Space, contract_network


def loop_poss_subj(poss, sbj, obj, verb, M):
    # out[h] = poss[h] * sum_k M[h,k] sbj[k] sum_j V[k,j] obj[j]
    d = len(poss)
    out = np.zeros(d)
    for h in range(d):
        for k in range(d):
            for j in range(d):
                out[h] += poss[h] * M[h, k] * sbj[k] * verb[k, j] * obj[j]
    return out


def loop_poss_obj(poss, sbj, obj, verb, M):
    d = len(poss)
    out = np.zeros(d)
    for h in range(d):
        for k in range(d):
            for i in range(d):
                out[h] += poss[h] * M[h, k] * obj[k] * sbj[i] * verb[i, k]
    return out


def test_interpret_type():
    reg = {'n': Space('N', 3), 's': Space('S', 2)}
    N, S = reg['n'], reg['s']
    assert interpret_type(parse_type('n^r s n^l'), reg) == (N, S, N)
    assert interpret_type(parse_type('n^r n s^l n n^l'), reg) == (N, N, S, N, N)
    assert interpret_type(PregroupType.unit(), reg) == ()


def test_hand_examples():
    men, dog, cats = np.array([1., 2]), np.array([1., 1]), np.array([3., 4])
    bite = np.eye(2)
    assert np.array_equal(compose_poss_subj(men, dog, cats, bite), [3., 8.])
    # symmetric verb: object-side variant agrees
    assert np.array_equal(compose_poss_obj(men, cats, dog, bite), [3., 8.])
    game, boys, like = np.array([1., 1]), np.array([1., 0]), np.diag([2., 3])
    assert np.array_equal(compose_obj_rel(game, boys, like), [2., 0.])
    e1, e2 = np.eye(2)
    assert np.array_equal(compose_subj_rel(e1, e1, np.eye(2)), e1)
    assert np.array_equal(compose_subj_rel(e1, e2, np.eye(2)), [0., 0.])


def test_poss_obj_row_vector_times_verb():
    # "men whose dogs cats bite": cats enters as a row vector times B
    men, dogs, cats = np.array([1., 2]), np.array([1., 1]), np.array([3., 4])
    B = np.array([[1., 2], [0., 1]])
    assert np.array_equal(compose_poss_obj(men, cats, dogs, B), men * dogs * (cats @ B))
    assert np.array_equal(compose_poss_obj(men, cats, dogs, B), [3., 20.])


def test_ones_reduce_to_verb_application():
    rng = np.random.default_rng(1)
    V, o = rng.normal(size=(3, 3)), rng.normal(size=3)
    ones = np.ones(3)
    assert np.allclose(compose_poss_subj(ones, ones, o, V), V @ o)


@settings(max_examples=40)
@given(st.integers(0, 2 ** 31), st.integers(1, 4))
def test_composers_match_index_loops(seed, d):
    rng = np.random.default_rng(seed)
    p, sb, ob = rng.normal(size=(3, d))
    V, M = rng.normal(size=(d, d)), rng.normal(size=(d, d))
    assert np.allclose(compose_poss_subj(p, sb, ob, V, M), loop_poss_subj(p, sb, ob, V, M))
    assert np.allclose(compose_poss_obj(p, sb, ob, V, M), loop_poss_obj(p, sb, ob, V, M))


@settings(max_examples=40)
@given(st.integers(0, 2 ** 31), st.integers(1, 4), st.integers(1, 3))
def test_cube_collapse_matches_matrix(seed, d, ds):
    rng = np.random.default_rng(seed)
    p, sb, ob = rng.normal(size=(3, d))
    cube = rng.normal(size=(d, ds, d))
    mat = collapse_verb(cube)
    assert np.allclose(compose_poss_subj(p, sb, ob, cube), compose_poss_subj(p, sb, ob, mat))
    assert np.allclose(compose_poss_obj(p, sb, ob, cube), compose_poss_obj(p, sb, ob, mat))
    assert np.allclose(compose_subj_rel(p, ob, cube), compose_subj_rel(p, ob, mat))


@settings(max_examples=40)
@given(st.integers(0, 2 ** 31), st.sampled_from(list(Pattern)),
       st.floats(0.1, 10), st.sampled_from(['head', 'sbj', 'obj']))
def test_scale_equivariance_and_cosine_invariance(seed, pattern, lam, role):
    from relclause.tensor import cosine
    rng = np.random.default_rng(seed)
    base = dict(head=rng.normal(size=3), verb=rng.normal(size=(3, 3)),
                sbj=rng.normal(size=3), obj=rng.normal(size=3))
    if role == 'sbj' and pattern is Pattern.SUBJ_REL:
        role = 'head'
    if role == 'obj' and pattern is Pattern.OBJ_REL:
        role = 'head'
    scaled = dict(base, **{role: lam * base[role]})
    a = ClauseSpec(pattern, **base).compose()
    b = ClauseSpec(pattern, **scaled).compose()
    assert np.allclose(b, lam * a)
    term = rng.normal(size=3)
    assert cosine(term, a) == pytest.approx(cosine(term, b), abs=1e-9)


def test_shape_errors():
    with pytest.raises(FunctorError):
        compose_poss_subj(np.ones(2), np.ones(3), np.ones(2), np.eye(2))
    with pytest.raises(FunctorError):
        compose_poss_subj(np.ones(2), np.ones(2), None, np.eye(2))
    with pytest.raises(FunctorError):
        compose_poss_subj(np.ones(2), np.ones(2), np.ones(2), np.ones(2))
    with pytest.raises(FunctorError):
        OwnershipMap(np.ones((2, 3)))
    with pytest.raises(FunctorError):
        OwnershipMap(np.ones((2, 2)), 'identity')


def test_intransitive_possessive_subject():
    poss, sbj, die = np.array([1., 2]), np.array([3., 1]), np.array([0.5, 2])
    M = np.array([[0., 1], [1, 0]])
    expect = poss * (M @ (sbj * die))
    assert np.allclose(compose_poss_subj(poss, sbj, None, die, M), expect)
    spec = ClauseSpec(Pattern.POSS_SUBJ, poss, die, sbj=sbj, ownership=OwnershipMap(M))
    assert np.allclose(evaluate_clause_network(spec), expect)


def _dense_pronoun(tag, dn, ds, M):
    # closed forms of the pronoun diagrams after yanking
    T = np.zeros((dn, dn, ds, dn) if tag in ('rel-subj', 'rel-obj') else
                 (dn, dn, ds, dn, dn))
    for a in range(dn):
        for c in range(dn):
            for s in range(ds):
                if tag in ('rel-subj', 'rel-obj'):
                    T[a, a, s, a] = 1.0
                else:
                    T[a, a, s, c, c] = M[a, c]
    if tag == 'rel-obj':
        T = T.transpose(0, 1, 3, 2)
    if tag == 'rel-poss-obj':
        T = T.transpose(0, 1, 3, 2, 4)
    return T


@pytest.mark.parametrize('tag', sorted(PRONOUN_TYPES))
def test_pronoun_networks_against_brute_force(tag):
    dn, ds = 2, 2
    M = np.array([[0.5, 2.0], [-1.0, 3.0]])
    net = build_pronoun_network(tag, Space('N', dn), Space('S', ds), M)
    assert len(net.outputs) == len(PRONOUN_TYPES[tag])
    brute = brute_force_contract(net)
    ours = contract_network(net).data
    assert np.allclose(ours, brute)
    assert np.allclose(contract_network(net, fuse=False).data, brute)
    assert np.allclose(brute, _dense_pronoun(tag, dn, ds, M))


def test_unknown_pronoun_tag():
    with pytest.raises(FunctorError):
        build_pronoun_network('rel-what', Space('N', 2), Space('S', 1))


@pytest.mark.parametrize('pattern', list(Pattern))
def test_clause_network_matches_brute_force_and_composer(pattern):
    rng = np.random.default_rng(3)
    spec = ClauseSpec(pattern, rng.normal(size=2), rng.normal(size=(2, 2, 2)),
                      rng.normal(size=2), rng.normal(size=2),
                      OwnershipMap(rng.normal(size=(2, 2))))
    net = clause_network(spec)
    brute = brute_force_contract(net)
    assert np.allclose(contract_network(net).data, brute, atol=1e-12)
    assert np.allclose(spec.compose(), brute, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 31), st.sampled_from(list(Pattern)),
       st.integers(1, 4), st.integers(1, 3))
def test_normal_form_equivalence(seed, pattern, dn, ds):
    rng = np.random.default_rng(seed)
    spec = ClauseSpec(pattern, rng.normal(size=dn), rng.normal(size=(dn, ds, dn)),
                      rng.normal(size=dn), rng.normal(size=dn),
                      OwnershipMap(rng.normal(size=(dn, dn))))
    assert np.max(np.abs(evaluate_clause_network(spec) - spec.compose())) <= 1e-10
    assert np.max(np.abs(evaluate_clause_network(spec, fuse=False)
                         - spec.compose())) <= 1e-10


def test_basis_sanity_against_composer():
    d = 3
    rng = np.random.default_rng(5)
    V, M = rng.normal(size=(d, d)), rng.normal(size=(d, d))
    for i in range(d):
        for k in range(d):
            for j in range(d):
                e = np.eye(d)
                spec = ClauseSpec(Pattern.POSS_SUBJ, e[i], V, e[k], e[j], OwnershipMap(M))
                assert np.allclose(evaluate_clause_network(spec),
                                   compose_poss_subj(e[i], e[k], e[j], V, M))


# frozen: verify_decomposition on seeded instances (both sides were also
# brute-forced with the index-loop oracle when these were recorded)
@pytest.mark.parametrize('pattern,dn,ds', [(Pattern.POSS_SUBJ, 3, 2),
                                           (Pattern.POSS_OBJ, 2, 2),
                                           (Pattern.POSS_OBJ, 3, 1)])
def test_verify_decomposition(pattern, dn, ds):
    rng = np.random.default_rng(11)
    spec = ClauseSpec(pattern, rng.normal(size=dn), rng.normal(size=(dn, ds, dn)),
                      rng.normal(size=dn), rng.normal(size=dn))
    has = rng.normal(size=(dn, ds, dn))
    lhs, rhs, diff = verify_decomposition(spec, has)
    loop = loop_poss_subj if pattern is Pattern.POSS_SUBJ else loop_poss_obj
    oracle = loop(spec.head, spec.sbj, spec.obj, collapse_verb(spec.verb),
                  has.sum(axis=1))
    assert diff <= 1e-10
    assert np.allclose(lhs, oracle) and np.allclose(rhs, oracle)
    if dn == 2:
        assert np.allclose(brute_force_contract(that_has_network(spec, has)), oracle)


def test_decomposition_with_trivial_has():
    rng = np.random.default_rng(2)
    spec = ClauseSpec(Pattern.POSS_SUBJ, *rng.normal(size=(1, 3)), rng.normal(size=(3, 3)),
                      rng.normal(size=3), rng.normal(size=3))
    lhs, _, _ = verify_decomposition(spec, np.eye(3))
    assert np.allclose(lhs, spec.compose())


def test_decomposition_rejects_nonpossessive():
    spec = ClauseSpec(Pattern.SUBJ_REL, np.ones(2), np.eye(2), obj=np.ones(2))
    with pytest.raises(FunctorError):
        verify_decomposition(spec, np.eye(2))


@pytest.mark.parametrize('seed', [0, 1, 2])
def test_lambek_whose_compound(seed):
    rng = np.random.default_rng(seed)
    d = 3
    poss, possessed, other = rng.normal(size=(3, d))
    verb, M = rng.normal(size=(d, 2, d)), OwnershipMap(rng.normal(size=(d, d)))
    got = compose_lambek_whose(poss, possessed, verb, other, Pattern.POSS_SUBJ, M)
    assert np.allclose(got, compose_poss_subj(poss, possessed, other, verb, M))
    got = compose_lambek_whose(poss, possessed, verb, other, Pattern.POSS_OBJ, M)
    assert np.allclose(got, compose_poss_obj(poss, other, possessed, verb, M))


def test_sentence_network_errors():
    n = Space('N', 2)
    frag = word_fragment(np.ones(2), [n])
    with pytest.raises(FunctorError):
        sentence_network([frag], [parse_type('n'), parse_type('n')])
    with pytest.raises(FunctorError):
        sentence_network([frag], [parse_type('n n^r')])
