"""Partition functions of structure tensors on trivalent diagrams.

The closed value on a 0-legged diagram is the sum over edge colorings of
the product, over vertices, of the tensor read along the vertex's cyclic
order; every vertexless loop contributes a factor of the dimension.  The
open variant on a k-legged diagram keeps the leg edges uncolored and
returns the rank-k tensor indexed in leg-label order.

Evaluation contracts the diagram as a tensor network: loop edges are
self-traces of one tensor copy, then tensor pairs are merged greedily,
always picking the pair whose intermediate has the fewest open indices
(ties broken by lowest edge id).  `brute_force_oracle` is the literal
sum over all colorings and is kept deliberately independent of the
planner so the two can check each other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import algebras
from .algebras import RATIONAL, StructureTensor, max_abs
from .diagrams import (
    FixedDiagram,
    _component_items,
    _extract_component,
    _leg_label_map,
    _pack_single,
    glue,
    require_no_legs,
)
from .errors import LegCountMismatch, TableMiss, TooLarge


@dataclass
class DenseTensor:
    """Dense rank-k tensor over one scalar backend, axes in leg-label order."""

    dim: int
    rank: int
    entries: np.ndarray
    backend: str

    def item(self):
        v = self.entries[()] if self.rank == 0 else self.entries.item()
        return v if self.backend == RATIONAL else complex(v)

    def max_abs(self):
        return max_abs(self.entries)

    def bilinear_dot(self, other: "DenseTensor"):
        """Non-conjugated entrywise dot (the pairing both sides of the
        gluing identity use)."""
        if self.rank != other.rank:
            raise LegCountMismatch(f"rank {self.rank} vs {other.rank}")
        s = (self.entries * other.entries).sum()
        return s if self.backend == RATIONAL else complex(s)


def _edge_ids(g: FixedDiagram):
    """dart -> edge id, edges numbered in .edges() order."""
    eid = [-1] * g.num_darts
    for i, (a, b) in enumerate(g.edges()):
        eid[a] = eid[b] = i
    return eid


def _self_trace(tensor, axes):
    """Contract any label occurring twice within one node."""
    while True:
        dup = None
        for i, lab in enumerate(axes):
            j = axes.index(lab)
            if j != i:
                dup = (j, i)
                break
        if dup is None:
            return tensor, axes
        i, j = dup
        tensor = np.trace(tensor, axis1=i, axis2=j)
        axes = [lab for t, lab in enumerate(axes) if t not in (i, j)]


def _build_nodes(c: StructureTensor, g: FixedDiagram):
    eid = _edge_ids(g)
    lab = _leg_label_map(g)

    def axis_label(dart):
        p = g.partner[dart]
        if lab[p]:
            return ("leg", lab[p])
        return ("e", eid[dart])

    nodes = []
    for tri in g.vertices:
        tensor, axes = _self_trace(c.entries, [axis_label(x) for x in tri])
        nodes.append((tensor, axes))
    for a, b in g.edges():
        if lab[a] and lab[b]:
            nodes.append((algebras.eye_array(c.dim, c.backend),
                          [("leg", lab[a]), ("leg", lab[b])]))
    return nodes


def _contract_network(c: StructureTensor, g: FixedDiagram, order=None):
    """Contract all internal edges; returns (tensor, axis labels)."""
    nodes = _build_nodes(c, g)
    while True:
        holders = {}
        for i, (_, axes) in enumerate(nodes):
            for labl in axes:
                if labl[0] == "e":
                    holders.setdefault(labl, []).append(i)
        pairs = {}
        for labl, hs in holders.items():
            if len(hs) == 2:
                key = (hs[0], hs[1])
                pairs.setdefault(key, []).append(labl)
        if not pairs:
            break
        if order is not None:
            i, j = order.choice(sorted(pairs))
        else:
            def cost(key):
                i, j = key
                shared = len(pairs[key])
                open_count = len(nodes[i][1]) + len(nodes[j][1]) - 2 * shared
                return (open_count, min(labl[1] for labl in pairs[key]))
            i, j = min(pairs, key=cost)
        shared = pairs[(i, j)]
        ti, ax_i = nodes[i]
        tj, ax_j = nodes[j]
        pos_i = [ax_i.index(s) for s in shared]
        pos_j = [ax_j.index(s) for s in shared]
        merged = np.tensordot(ti, tj, axes=(pos_i, pos_j))
        new_axes = [a for a in ax_i if a not in shared] + \
                   [a for a in ax_j if a not in shared]
        keep = [nodes[t] for t in range(len(nodes)) if t not in (i, j)]
        keep.append((merged, new_axes))
        nodes = keep

    out = np.array(algebras.one(c.backend),
                   dtype=object if c.backend == RATIONAL else complex)
    out_axes = []
    for tensor, axes in nodes:
        out = np.tensordot(out, tensor, axes=0)
        out_axes.extend(axes)
    return out, out_axes


def partition_function(c: StructureTensor, g: FixedDiagram, order=None):
    """Closed evaluation on a 0-legged diagram."""
    require_no_legs(g)
    tensor, axes = _contract_network(c, g, order=order)
    assert not axes
    val = tensor[()]
    if g.loop_count:
        val = val * c.dim ** g.loop_count
    return val if c.backend == RATIONAL else complex(val)


def open_partition_function(c: StructureTensor, g: FixedDiagram,
                            order=None) -> DenseTensor:
    """Open evaluation on a k-legged diagram: a rank-k tensor, axes by leg label."""
    tensor, axes = _contract_network(c, g, order=order)
    k = g.num_legs
    want = [("leg", i) for i in range(1, k + 1)]
    if sorted(axes) != sorted(want):
        raise AssertionError(f"unexpected open axes {axes}")
    if k:
        tensor = np.transpose(tensor, [axes.index(w) for w in want])
    if g.loop_count:
        tensor = tensor * (c.dim ** g.loop_count)
    return DenseTensor(c.dim, k, tensor, c.backend)


def brute_force_oracle(c: StructureTensor, g: FixedDiagram, guard=10 ** 7):
    """Literal sum over all n^|E| edge colorings; exact transcription."""
    require_no_legs(g)
    edges = g.edges()
    n = c.dim
    if n ** len(edges) > guard:
        raise TooLarge(f"{n}^{len(edges)} colorings exceed the guard")
    eid = _edge_ids(g)
    ent = c.entries
    total = algebras.zero(c.backend)
    for psi in itertools.product(range(n), repeat=len(edges)):
        term = algebras.one(c.backend)
        for a, b, d in g.vertices:
            term = term * ent[psi[eid[a]], psi[eid[b]], psi[eid[d]]]
        total += term
    return total * n ** g.loop_count


def open_brute_force(c: StructureTensor, g: FixedDiagram, guard=10 ** 7) -> DenseTensor:
    """Coloring-sum oracle for the open evaluation."""
    edges = g.edges()
    n = c.dim
    if n ** len(edges) > guard:
        raise TooLarge(f"{n}^{len(edges)} colorings exceed the guard")
    eid = _edge_ids(g)
    lab = _leg_label_map(g)
    leg_edge = [eid[dart] for dart in g.legs]
    ent = c.entries
    k = g.num_legs
    out = algebras.zeros_array((n,) * k, c.backend)
    for psi in itertools.product(range(n), repeat=len(edges)):
        term = algebras.one(c.backend)
        for a, b, d in g.vertices:
            term = term * ent[psi[eid[a]], psi[eid[b]], psi[eid[d]]]
        idx = tuple(psi[e] for e in leg_edge)
        out[idx] += term
    if g.loop_count:
        out = out * (n ** g.loop_count)
    return DenseTensor(n, k, out, c.backend)


def pairing_identity_check(c: StructureTensor, g: FixedDiagram, h: FixedDiagram):
    """|<open(g), open(h)> - closed(g glued with h)| with the bilinear dot."""
    if g.num_legs != h.num_legs:
        raise LegCountMismatch(f"{g.num_legs} vs {h.num_legs} legs")
    lhs = open_partition_function(c, g).bilinear_dot(open_partition_function(c, h))
    rhs = partition_function(c, glue(g, h))
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# weight systems
# ---------------------------------------------------------------------------

class TensorBacked:
    """Weight system f = partition function of a fixed structure tensor.

    Values are multiplicative over components; component values are
    memoized by canonical code, which matters a lot in the permutation
    sums where the same small graphs recur thousands of times.
    """

    def __init__(self, tensor: StructureTensor):
        self.tensor = tensor
        self.backend = tensor.backend
        self.loop_value = (Fraction(tensor.dim) if tensor.backend == RATIONAL
                           else complex(tensor.dim))
        self._memo = {}

    def evaluate(self, g: FixedDiagram):
        require_no_legs(g)
        val = algebras.one(self.backend)
        for code, darts in _component_items(g):
            v = self._memo.get(code)
            if v is None:
                v = partition_function(self.tensor, _extract_component(g, darts))
                self._memo[code] = v
            val = val * v
        if g.loop_count:
            val = val * self.loop_value ** g.loop_count
        return val


class TableBacked:
    """Weight system given by a table canonical-code -> value plus the loop value."""

    def __init__(self, loop_value, table, backend=RATIONAL):
        self.backend = backend
        self.loop_value = algebras.as_scalar(loop_value, backend)
        self.table = dict(table)

    def evaluate(self, g: FixedDiagram):
        require_no_legs(g)
        val = algebras.one(self.backend)
        for code, _ in _component_items(g):
            key = _pack_single(code)
            if key not in self.table:
                raise TableMiss(key)
            val = val * algebras.as_scalar(self.table[key], self.backend)
        if g.loop_count:
            val = val * self.loop_value ** g.loop_count
        return val


def evaluate(f, x):
    """Apply a weight system to a diagram or, linearly, to a formal sum.

    Formal sums are lists of (coefficient, diagram) pairs; the empty
    diagram evaluates to 1 by multiplicativity.
    """
    if isinstance(x, FixedDiagram):
        return f.evaluate(x)
    total = algebras.zero(f.backend)
    for coeff, d in x:
        v = f.evaluate(d)
        if coeff != 1:
            v = v * algebras.as_scalar(coeff, f.backend)
        total = total + v
    return total
