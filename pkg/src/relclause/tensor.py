"""Dense tensors, spiders and contraction networks over real spaces.

Every structural map (identity, cup, cap, copy, merge, unit, counit) is a
:class:`Spider`: the generalised diagonal on one space with ``m`` inputs and
``n`` outputs.  Connected spiders fuse, so :func:`contract_network` never
builds their dense form; it gives every leg of a fused spider component the
same einsum label instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

__all__ = [
    'Space', 'Tensor', 'Spider', 'ContractionNetwork', 'NetworkBuilder',
    'TensorError', 'BudgetExceeded', 'epsilon', 'eta', 'frob_delta',
    'frob_mu', 'frob_iota', 'frob_zeta', 'materialize_spider',
    'contract_network', 'cosine', 'DEFAULT_BUDGET',
]

DEFAULT_BUDGET = 10 ** 6


class TensorError(ValueError):
    pass


class BudgetExceeded(TensorError):
    pass


@dataclass(frozen=True)
class Space:
    name: str
    dim: int

    def __post_init__(self):
        if int(self.dim) < 1:
            raise TensorError(f'space {self.name} must have dim >= 1')

    def __str__(self) -> str:
        return f'{self.name}({self.dim})'


@dataclass(frozen=True, eq=False)
class Tensor:
    """Immutable dense array whose axes are labelled by spaces."""
    legs: tuple[Space, ...]
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        legs = tuple(self.legs)
        data = np.array(self.data, dtype=np.float64)
        shape = tuple(s.dim for s in legs)
        if data.size != math.prod(shape):
            raise TensorError(f'data of size {data.size} does not fit legs '
                              f'{[str(s) for s in legs]}')
        data = data.reshape(shape)
        if not np.all(np.isfinite(data)):
            raise TensorError('tensor entries must be finite')
        data.setflags(write=False)
        object.__setattr__(self, 'legs', legs)
        object.__setattr__(self, 'data', data)

    @property
    def rank(self) -> int:
        return len(self.legs)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype)

    def allclose(self, other: Tensor, atol: float = 1e-10) -> bool:
        return (self.legs == other.legs
                and np.allclose(self.data, other.data, rtol=0, atol=atol))


@dataclass(frozen=True)
class Spider:
    """Generalised diagonal: legs ``0..m-1`` are inputs, ``m..m+n-1`` outputs."""
    space: Space
    inputs: int
    outputs: int

    def __post_init__(self):
        if self.inputs < 0 or self.outputs < 0 or self.inputs + self.outputs < 1:
            raise TensorError('a spider needs at least one leg')

    @property
    def legs(self) -> tuple[Space, ...]:
        return (self.space,) * (self.inputs + self.outputs)

    @property
    def rank(self) -> int:
        return self.inputs + self.outputs


Node = Union[Tensor, Spider]
Port = tuple[int, int]


def _space_of(x) -> Space | None:
    if isinstance(x, Tensor):
        if x.rank != 1:
            raise TensorError(f'expected a rank-1 tensor, got rank {x.rank}')
        return x.legs[0]
    return None


def _vector(x) -> np.ndarray:
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise TensorError(f'expected a vector, got shape {v.shape}')
    return v


def _pair(v, w) -> tuple[np.ndarray, np.ndarray]:
    sv, sw = _space_of(v), _space_of(w)
    if sv is not None and sw is not None and sv != sw:
        raise TensorError(f'space mismatch: {sv} vs {sw}')
    a, b = _vector(v), _vector(w)
    if a.shape != b.shape:
        raise TensorError(f'dimension mismatch: {a.shape} vs {b.shape}')
    return a, b


def epsilon(v, w) -> float:
    """Cup on two vectors: their inner product."""
    a, b = _pair(v, w)
    return float(a @ b)


def eta(k: float, space: Space | int) -> np.ndarray:
    """Cap scaled by ``k``: ``k`` times the identity on the space."""
    dim = space.dim if isinstance(space, Space) else int(space)
    return k * np.eye(dim)


def frob_delta(v) -> np.ndarray:
    return np.diag(_vector(v))


def frob_mu(v, w) -> np.ndarray:
    a, b = _pair(v, w)
    return a * b


def frob_iota(v) -> float:
    return float(_vector(v).sum())


def frob_zeta(k: float, space: Space | int) -> np.ndarray:
    dim = space.dim if isinstance(space, Space) else int(space)
    return np.full(dim, float(k))


def cosine(v, w) -> float:
    """Cosine similarity; 0 when either vector is zero."""
    a, b = _pair(v, w)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 0.0
    return float(np.clip(a @ b / (na * nb), -1.0, 1.0))


def materialize_spider(s: Spider, budget: int = DEFAULT_BUDGET) -> Tensor:
    d, k = s.space.dim, s.rank
    size = d ** k
    if size > budget:
        raise BudgetExceeded(f'spider {s} would have {size} entries '
                             f'(budget {budget})')
    data = np.zeros((d,) * k)
    idx = np.arange(d)
    data[(idx,) * k] = 1.0
    return Tensor(s.legs, data)


@dataclass(frozen=True)
class ContractionNetwork:
    """Nodes wired port to port; ``outputs`` lists the open ports in order.

    A port is ``(node index, leg index)``.  Each port belongs to exactly one
    edge or appears once in ``outputs``; edge endpoints share a space.
    """
    nodes: tuple[Node, ...]
    edges: tuple[tuple[Port, Port], ...]
    outputs: tuple[Port, ...]

    def __post_init__(self):
        object.__setattr__(self, 'nodes', tuple(self.nodes))
        object.__setattr__(self, 'edges',
                           tuple((tuple(a), tuple(b)) for a, b in self.edges))
        object.__setattr__(self, 'outputs', tuple(tuple(p) for p in self.outputs))
        self.validate()

    def space(self, port: Port) -> Space:
        node, leg = port
        return self.nodes[node].legs[leg]

    def validate(self) -> None:
        all_ports = {(i, k) for i, node in enumerate(self.nodes)
                     for k in range(len(node.legs))}
        used: set[Port] = set()

        def claim(p):
            if p not in all_ports:
                raise TensorError(f'port {p} does not exist')
            if p in used:
                raise TensorError(f'port {p} used more than once')
            used.add(p)

        for a, b in self.edges:
            claim(a)
            claim(b)
            if self.space(a) != self.space(b):
                raise TensorError(f'edge {a}-{b} joins {self.space(a)} '
                                  f'and {self.space(b)}')
        for p in self.outputs:
            claim(p)
        if used != all_ports:
            raise TensorError(f'dangling ports {sorted(all_ports - used)}')

    @property
    def output_legs(self) -> tuple[Space, ...]:
        return tuple(self.space(p) for p in self.outputs)


class NetworkBuilder:
    """Mutable helper for assembling a :class:`ContractionNetwork`.

    Ports that are neither connected nor explicitly exposed become outputs
    in node/leg order when ``outputs`` is not given to :meth:`build`.
    """

    def __init__(self):
        self.nodes: list[Node] = []
        self.edges: list[tuple[Port, Port]] = []

    def add(self, node: Node) -> int:
        self.nodes.append(node)
        return len(self.nodes) - 1

    def add_network(self, net: ContractionNetwork) -> list[Port]:
        """Copy ``net`` in and return its open ports, renumbered."""
        offset = len(self.nodes)
        self.nodes.extend(net.nodes)
        self.edges.extend(((a[0] + offset, a[1]), (b[0] + offset, b[1]))
                          for a, b in net.edges)
        return [(n + offset, k) for n, k in net.outputs]

    def connect(self, a: Port, b: Port) -> None:
        self.edges.append((a, b))

    def open_ports(self) -> list[Port]:
        used = {p for e in self.edges for p in e}
        return [(i, k) for i, node in enumerate(self.nodes)
                for k in range(len(node.legs)) if (i, k) not in used]

    def build(self, outputs: Sequence[Port] | None = None) -> ContractionNetwork:
        if outputs is None:
            outputs = self.open_ports()
        return ContractionNetwork(tuple(self.nodes), tuple(self.edges),
                                  tuple(outputs))


def _einsum(*args):
    """``np.einsum`` in sublist form with labels compacted to ``0..k``."""
    arrays, subs = list(args[0:-1:2]), [list(x) for x in args[1:-1:2]]
    out = list(args[-1])
    mapping: dict[int, int] = {}
    for lab in [lab for s in subs for lab in s] + out:
        mapping.setdefault(lab, len(mapping))
    call = []
    for a, s in zip(arrays, subs):
        call += [a, [mapping[lab] for lab in s]]
    return np.einsum(*call, [mapping[lab] for lab in out])


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def contract_network(net: ContractionNetwork, order: Sequence[int] | None = None,
                     fuse: bool = True, budget: int = DEFAULT_BUDGET) -> Tensor:
    """Evaluate ``net`` to a tensor over its output ports.

    With ``fuse=True`` spiders are never materialised: each connected
    spider component becomes a shared index.  ``fuse=False`` materialises
    every spider and contracts edge by edge, which is the slow reference
    path.  ``order`` is a permutation of the tensor operands (tensors, plus
    materialised spiders when not fusing) fixing the pairwise contraction
    sequence; the default is node order.
    """
    nodes = list(net.nodes)
    if not fuse:
        nodes = [materialize_spider(n, budget) if isinstance(n, Spider) else n
                 for n in nodes]

    uf = _UnionFind()
    for i, node in enumerate(nodes):
        for k in range(len(node.legs)):
            uf.find((i, k))
        if isinstance(node, Spider):
            for k in range(1, node.rank):
                uf.union((i, 0), (i, k))
    for a, b in net.edges:
        uf.union(a, b)

    labels: dict = {}

    def label(port):
        return labels.setdefault(uf.find(port), len(labels))

    label_dim: dict[int, int] = {}
    operands: list[tuple[np.ndarray, list[int]]] = []
    for i, node in enumerate(nodes):
        subs = [label((i, k)) for k in range(len(node.legs))]
        for lab, sp in zip(subs, node.legs):
            label_dim[lab] = sp.dim
        if isinstance(node, Tensor):
            operands.append((node.data, subs))

    out_labels = [label(p) for p in net.outputs]
    tensor_labels = {lab for _, subs in operands for lab in subs}
    # closed spider components with no tensor attached contribute their dimension
    scalar = 1.0
    for lab, dim in label_dim.items():
        if lab not in tensor_labels and lab not in out_labels:
            scalar *= dim

    if order is None:
        order = range(len(operands))
    order = list(order)
    if sorted(order) != list(range(len(operands))):
        raise TensorError(f'order must permute {len(operands)} operands')

    unique_out = list(dict.fromkeys(out_labels))
    kept_out = [lab for lab in unique_out if lab in tensor_labels]

    acc = np.array(1.0)
    acc_labels: list[int] = []
    for pos, idx in enumerate(order):
        data, subs = operands[idx]
        later = {lab for j in order[pos + 1:] for lab in operands[j][1]}
        keep = [lab for lab in dict.fromkeys(acc_labels + subs)
                if lab in later or lab in kept_out]
        acc = _einsum(acc, acc_labels, data, subs, keep)
        acc_labels = keep
        if not np.all(np.isfinite(acc)):
            raise TensorError('non-finite intermediate during contraction')
    if acc_labels != kept_out:
        acc = _einsum(acc, acc_labels, kept_out)
    acc = acc * scalar

    # broadcast over output labels that no tensor touches (bare spiders)
    for lab in unique_out:
        if lab not in tensor_labels:
            acc = np.multiply.outer(acc, np.ones(label_dim[lab]))
    present = kept_out + [lab for lab in unique_out if lab not in tensor_labels]
    acc = _einsum(acc, present, unique_out) if present != unique_out else acc

    # expand repeated output labels onto the diagonal
    if len(unique_out) != len(out_labels):
        shape = [label_dim[lab] for lab in out_labels]
        result = np.zeros(shape)
        grids = np.indices([label_dim[lab] for lab in unique_out])
        index = tuple(grids[unique_out.index(lab)] for lab in out_labels)
        result[index] = acc
        acc = result
    return Tensor(net.output_legs, acc)
