"""Randomised equivalence checks run by ``relclause check equivalence``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .functor import (ClauseSpec, OwnershipMap, Pattern, evaluate_clause_network,
                      verify_decomposition)
from .predicate import (SetModel, embed, poss_obj_intersection,
                        poss_subj_intersection, that_has_intersection)
from .tensor import NetworkBuilder, Space, Spider, contract_network
from .truth import RelationalModel, eval_poss_obj_truth, eval_poss_subj_truth

ROLES = ('poss', 'sbj', 'obj')


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f'{"PASS" if self.passed else "FAIL"}  {self.name}: {self.detail}'


def random_clause(rng: np.random.Generator, pattern: Pattern, max_n: int = 4,
                  max_s: int = 3, ownership: bool = True) -> ClauseSpec:
    dn = int(rng.integers(1, max_n + 1))
    ds = int(rng.integers(1, max_s + 1))
    own = OwnershipMap(rng.normal(size=(dn, dn))) if ownership else None
    return ClauseSpec(pattern, rng.normal(size=dn), rng.normal(size=(dn, ds, dn)),
                      rng.normal(size=dn), rng.normal(size=dn), own)


def random_relational_model(rng: np.random.Generator, size: int,
                            density: float = 0.4, weighted: bool = False
                            ) -> RelationalModel:
    """Universe ``u0..``, nouns ``poss/sbj/obj``, verb ``verb``, random ownership."""
    universe = [f'u{i}' for i in range(size)]
    nouns = {r: frozenset(np.flatnonzero(rng.random(size) < density).tolist())
             for r in ROLES}

    def relation():
        rel = {}
        for i in range(size):
            for j in range(size):
                if rng.random() < density:
                    rel[(i, j)] = float(rng.random()) if weighted else 1.0
        return rel

    return RelationalModel(universe, nouns, {'verb': relation()}, relation())


def frobenius_composites(dim: int) -> list[np.ndarray]:
    """Materialised (mu x 1)(1 x Delta), Delta mu and (1 x mu)(Delta x 1)."""
    V = Space('V', dim)
    out = []
    b = NetworkBuilder()
    mu, de = b.add(Spider(V, 2, 1)), b.add(Spider(V, 1, 2))
    b.connect((de, 1), (mu, 1))
    out.append(b.build([(mu, 0), (de, 0), (mu, 2), (de, 2)]))
    b = NetworkBuilder()
    mu, de = b.add(Spider(V, 2, 1)), b.add(Spider(V, 1, 2))
    b.connect((mu, 2), (de, 0))
    out.append(b.build([(mu, 0), (mu, 1), (de, 1), (de, 2)]))
    b = NetworkBuilder()
    de, mu = b.add(Spider(V, 1, 2)), b.add(Spider(V, 2, 1))
    b.connect((de, 2), (mu, 0))
    out.append(b.build([(de, 0), (mu, 1), (de, 1), (mu, 2)]))
    return [np.array(contract_network(n, fuse=False).data) for n in out]


def yanking_network(dim: int):
    """(cup x 1) o (1 x cap) with the input wire first and output second."""
    V = Space('V', dim)
    b = NetworkBuilder()
    wire = b.add(Spider(V, 1, 1))
    cap = b.add(Spider(V, 0, 2))
    cup = b.add(Spider(V, 2, 0))
    b.connect((wire, 1), (cup, 0))
    b.connect((cap, 0), (cup, 1))
    return b.build([(wire, 0), (cap, 1)])


def check_propositions(rng, trials: int) -> list[CheckResult]:
    results = []
    for pattern in (Pattern.POSS_SUBJ, Pattern.POSS_OBJ):
        worst = 0.0
        for _ in range(trials):
            spec = random_clause(rng, pattern, ownership=False)
            dn = spec.head.shape[0]
            has = rng.normal(size=(dn, int(rng.integers(1, 4)), dn))
            worst = max(worst, verify_decomposition(spec, has)[2])
        results.append(CheckResult(
            f'that-has decomposition ({pattern.value})', worst <= 1e-10,
            f'max |lhs - rhs| = {worst:.3e} over {trials} instances'))
    return results


def check_normal_forms(rng, trials: int) -> list[CheckResult]:
    results = []
    for pattern in Pattern:
        worst = 0.0
        for _ in range(trials):
            spec = random_clause(rng, pattern)
            diff = np.abs(evaluate_clause_network(spec) - spec.compose())
            worst = max(worst, float(diff.max()))
        results.append(CheckResult(
            f'full diagram = normal form ({pattern.value})', worst <= 1e-10,
            f'max diff {worst:.3e} over {trials} instances'))
    return results


def check_set_equivalence(rng, trials: int, max_size: int = 6) -> list[CheckResult]:
    bad = {'subject': 0, 'object': 0, 'decomposition': 0}
    for _ in range(trials):
        model = random_relational_model(rng, int(rng.integers(1, max_size + 1)))
        sets = SetModel.from_relational(model)
        args = (model, 'poss', 'sbj', 'verb', 'obj')
        for key, inter, ev, obj_clause in (
                ('subject', poss_subj_intersection, eval_poss_subj_truth, False),
                ('object', poss_obj_intersection, eval_poss_obj_truth, True)):
            mask = inter(sets, 'poss', 'sbj', 'verb', 'obj')
            vec = embed(mask, model.size)
            real = ev(*args)
            if not (np.array_equal(vec, ev(*args, boolean=True))
                    and np.array_equal(vec, (real != 0).astype(float))):
                bad[key] += 1
            if that_has_intersection(sets, 'poss', 'sbj', 'verb', 'obj',
                                     obj_clause) != mask:
                bad['decomposition'] += 1
    return [CheckResult(f'set semantics = 0/1 truth vectors ({k})', n == 0,
                        f'{n} mismatches in {trials} random models')
            for k, n in bad.items()]


def check_frobenius(max_dim: int = 6) -> CheckResult:
    worst = 0.0
    for d in range(1, max_dim + 1):
        a, b, c = frobenius_composites(d)
        worst = max(worst, float(np.abs(a - b).max()), float(np.abs(b - c).max()))
    return CheckResult('Frobenius condition', worst <= 1e-12,
                       f'dims 1..{max_dim}, max diff {worst:.1e}')


def check_yanking(max_dim: int = 8) -> CheckResult:
    worst = 0.0
    for d in range(1, max_dim + 1):
        t = contract_network(yanking_network(d), fuse=False).data
        worst = max(worst, float(np.abs(t - np.eye(d)).max()))
    return CheckResult('yanking', worst <= 1e-12,
                       f'dims 1..{max_dim}, max diff {worst:.1e}')


def run_all(seed: int = 0, trials: int = 100) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    return (check_propositions(rng, trials) + check_normal_forms(rng, trials)
            + check_set_equivalence(rng, trials)
            + [check_frobenius(), check_yanking()])
