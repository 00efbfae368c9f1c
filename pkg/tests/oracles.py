"""Slow reference implementations used only by the tests."""
from __future__ import annotations

import itertools

import numpy as np

from relclause.tensor import Spider


def dense_spider(s: Spider) -> np.ndarray:
    d, k = s.space.dim, s.rank
    out = np.zeros((d,) * k)
    for i in range(d):
        out[(i,) * k] = 1.0
    return out


def brute_force_contract(net) -> np.ndarray:
    """Sum over every index assignment; one variable per edge or open port."""
    var_of, dims = {}, []
    for a, b in net.edges:
        var_of[a] = var_of[b] = len(dims)
        dims.append(net.space(a).dim)
    out_vars = []
    for p in net.outputs:
        var_of[p] = len(dims)
        out_vars.append(len(dims))
        dims.append(net.space(p).dim)
    grids = np.indices(dims) if dims else np.zeros((0,))
    total = np.ones(tuple(dims))
    for i, node in enumerate(net.nodes):
        data = dense_spider(node) if isinstance(node, Spider) else np.asarray(node.data)
        idx = tuple(grids[var_of[(i, k)]] for k in range(len(node.legs)))
        total = total * data[idx]
    closed = tuple(v for v in range(len(dims)) if v not in out_vars)
    return total.sum(axis=closed) if closed else total


def frobenius_morphisms(d: int) -> list[np.ndarray]:
    """The three composites as d^2 x d^2 matrices built with Kronecker products."""
    eye = np.eye(d)
    delta = np.zeros((d * d, d))
    for i in range(d):
        delta[i * d + i, i] = 1.0
    mu = delta.T
    return [np.kron(mu, eye) @ np.kron(eye, delta),
            delta @ mu,
            np.kron(eye, mu) @ np.kron(delta, eye)]


def all_planar_plans(atoms) -> list[tuple[frozenset, tuple]]:
    """Every non-crossing partial matching of valid cups with no residual
    atom underneath a cup, returned as (links, residual)."""
    n = len(atoms)
    out = []

    def rec(i, used, links):
        if i == n:
            linked = {p for l in links for p in l}
            residual = tuple(k for k in range(n) if k not in linked)
            for (a, b) in links:
                if any(a < r < b for r in residual):
                    return
                for (c, e) in links:
                    if a < c < b < e:
                        return
            out.append((frozenset(links), residual))
            return
        if i in used:
            rec(i + 1, used, links)
            return
        rec(i + 1, used, links)
        for j in range(i + 1, n):
            if j not in used and atoms[i].base == atoms[j].base \
                    and atoms[j].order == atoms[i].order + 1:
                rec(i + 1, used | {i, j}, links + [(i, j)])

    rec(0, frozenset(), [])
    return out


def cooccurrence_by_hand(sentences, window, basis):
    counts = {}
    for s in sentences:
        for i, w in enumerate(s):
            for j, c in enumerate(s):
                if i != j and abs(i - j) <= window and c in basis:
                    counts[(w, c)] = counts.get((w, c), 0) + 1
    return counts


def reciprocal_ranks(sims, keys):
    """Per-row rank of the diagonal entry, ties resolved by key."""
    ranks = []
    for i, row in enumerate(sims):
        better = sum(1 for k, s in enumerate(row)
                     if s > row[i] or (s == row[i] and keys[k] < keys[i]))
        ranks.append(better + 1)
    return ranks
