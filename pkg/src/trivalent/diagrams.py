"""Trivalent diagrams with labeled legs, stored as combinatorial maps.

A diagram consists of half-edges ("darts"), trivalent vertices given as
ordered triples of darts (the triple is read cyclically, so triples equal
up to rotation are the same vertex datum), a sequence of legs labeled
1..k, a fixed-point-free pairing of the darts into edges, and a count of
isolated vertexless loops.

Darts are normalized to 0..m-1 internally; the public constructor accepts
arbitrary hashable ids and remembers them for error messages.  All
diagrams are immutable after construction, so they are safe to share.

Isomorphism here always means: leg labels fixed pointwise, every vertex's
cyclic order preserved (no reversals).  Reversing a vertex is a separate
operation (`flip_vertex`) because it carries a sign in every application
of these diagrams.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    BadIndex,
    BadLegRange,
    DanglingHalfEdge,
    DuplicateLegLabel,
    HasLegs,
    InvalidDiagram,
    LegCountMismatch,
    LoopEdge,
    NotAPermutation,
    NotAThreeGraph,
    PairingNotInvolution,
)


class FixedDiagram:
    __slots__ = ("vertices", "legs", "partner", "loop_count",
                 "names", "_leg_labels", "_raw_edges", "_code")

    def __init__(self, vertices=(), legs=(), edges=(), loop_count=0, check=True):
        """Build a diagram from user-facing data.

        `vertices`: iterable of triples of half-edge ids.
        `legs`: mapping {label: id} or a sequence (position i = label i+1).
        `edges`: iterable of id pairs; together they must form a
        fixed-point-free involution covering every half-edge.
        """
        if isinstance(legs, dict):
            leg_items = sorted(((int(l), h) for l, h in legs.items()), key=lambda t: t[0])
        else:
            leg_items = [(i + 1, h) for i, h in enumerate(legs)]
        ids: list = []
        index: dict = {}

        def intern(h):
            j = index.get(h)
            if j is None:
                j = index[h] = len(ids)
                ids.append(h)
            return j

        vtx = tuple(tuple(intern(h) for h in tri) for tri in vertices)
        leg_norm = tuple((lab, intern(h)) for lab, h in leg_items)
        edge_norm = tuple((intern(a), intern(b)) for a, b in edges)

        self.vertices = vtx
        self.names = tuple(ids)
        self._leg_labels = tuple(lab for lab, _ in leg_norm)
        self.legs = tuple(d for _, d in leg_norm)
        self._raw_edges = edge_norm
        self.loop_count = int(loop_count)
        self._code = None

        # lenient pairing build; validate() reports conflicts properly
        partner = [-1] * len(ids)
        for a, b in edge_norm:
            partner[a] = b
            partner[b] = a
        self.partner = tuple(partner)
        if check:
            validate(self)

    @classmethod
    def _raw(cls, vertices, legs, partner, loop_count):
        """Fast path for internally built, already-valid diagrams (int darts)."""
        d = cls.__new__(cls)
        d.vertices = vertices
        d.legs = legs
        d.partner = partner
        d.loop_count = loop_count
        d.names = None
        d._leg_labels = tuple(range(1, len(legs) + 1))
        d._raw_edges = None
        d._code = None
        return d

    @property
    def num_darts(self):
        return len(self.partner)

    @property
    def num_vertices(self):
        return len(self.vertices)

    @property
    def num_legs(self):
        return len(self.legs)

    def edges(self):
        """Edges as dart pairs (a, b) with a < b, sorted by a."""
        return [(a, b) for a, b in enumerate(self.partner) if a < b]

    def _name(self, dart):
        return self.names[dart] if self.names is not None else dart

    def __repr__(self):
        return (f"FixedDiagram(vertices={self.num_vertices}, legs={self.num_legs}, "
                f"edges={self.num_darts // 2}, loops={self.loop_count})")


def validate(d: FixedDiagram) -> None:
    """Check all structural invariants; raises a typed error naming the offender."""
    m = d.num_darts
    count = [0] * m
    for tri in d.vertices:
        if len(tri) != 3:
            raise InvalidDiagram(f"vertex {tri!r} does not have exactly 3 slots")
        for x in tri:
            count[x] += 1
    for x in d.legs:
        count[x] += 1
    for x in range(m):
        if count[x] != 1:
            raise DanglingHalfEdge(d._name(x))

    seen = {}
    if d._raw_edges is not None:
        for a, b in d._raw_edges:
            if a == b:
                raise PairingNotInvolution(d._name(a), "paired with itself")
            for x in (a, b):
                if x in seen:
                    raise PairingNotInvolution(d._name(x), "appears in two edges")
                seen[x] = True
    else:
        for a, b in enumerate(d.partner):
            if b == a:
                raise PairingNotInvolution(d._name(a), "paired with itself")
            if not (0 <= b < m) or d.partner[b] != a:
                raise PairingNotInvolution(d._name(a), "not an involution")
            seen[a] = True
    for x in range(m):
        if x not in seen:
            raise PairingNotInvolution(d._name(x), "not covered by any edge")

    k = len(d._leg_labels)
    used = set()
    for lab in d._leg_labels:
        if lab in used:
            raise DuplicateLegLabel(lab)
        used.add(lab)
    for lab in d._leg_labels:
        if not 1 <= lab <= k:
            raise BadLegRange(lab, k)
    if d.loop_count < 0:
        raise InvalidDiagram("negative loop count")


# ---------------------------------------------------------------------------
# basic operations
# ---------------------------------------------------------------------------

def flip_vertex(d: FixedDiagram, v: int) -> FixedDiagram:
    """Reverse the cyclic order at vertex `v` (0-based); everything else kept."""
    if not 0 <= v < d.num_vertices:
        raise BadIndex(f"vertex index {v} out of range")
    vertices = tuple(tuple(reversed(tri)) if i == v else tri
                     for i, tri in enumerate(d.vertices))
    return FixedDiagram._raw(vertices, d.legs, d.partner, d.loop_count)


def glue(g: FixedDiagram, h: FixedDiagram) -> FixedDiagram:
    """Identify equally labeled legs of g and h and join their incident edges.

    Chains of edges whose ends are all legs are spliced through; a chain
    that closes up entirely on leg-edges becomes one vertexless loop.
    """
    k = g.num_legs
    if h.num_legs != k:
        raise LegCountMismatch(f"{k} legs vs {h.num_legs} legs")
    mg = g.num_darts
    total = mg + h.num_darts
    tau = list(g.partner) + [p + mg for p in h.partner]
    sigma = [0] * total
    is_leg = bytearray(total)
    for a, b0 in zip(g.legs, h.legs):
        b = b0 + mg
        sigma[a] = b
        sigma[b] = a
        is_leg[a] = is_leg[b] = 1

    newid = [-1] * total
    new_vertices = []
    c = 0
    for tri in g.vertices:
        t = []
        for dart in tri:
            newid[dart] = c
            t.append(c)
            c += 1
        new_vertices.append(tuple(t))
    for tri in h.vertices:
        t = []
        for dart in tri:
            newid[dart + mg] = c
            t.append(c)
            c += 1
        new_vertices.append(tuple(t))

    partner = [-1] * c
    used = bytearray(total)
    for old in range(total):
        nd = newid[old]
        if nd < 0 or partner[nd] >= 0:
            continue
        y = tau[old]
        while is_leg[y]:
            used[y] = 1
            z = sigma[y]
            used[z] = 1
            y = tau[z]
        partner[nd] = newid[y]
        partner[newid[y]] = nd

    loops = 0
    for dart in range(total):
        if is_leg[dart] and not used[dart]:
            cur = dart
            while not used[cur]:
                used[cur] = 1
                z = sigma[cur]
                used[z] = 1
                cur = tau[z]
            loops += 1

    return FixedDiagram._raw(tuple(new_vertices), (), tuple(partner),
                             g.loop_count + h.loop_count + loops)


def disjoint_union(g: FixedDiagram, h: FixedDiagram) -> FixedDiagram:
    """Disjoint union; legs of h are relabeled to k_g+1 .. k_g+k_h."""
    mg = g.num_darts
    vertices = g.vertices + tuple(tuple(x + mg for x in tri) for tri in h.vertices)
    legs = g.legs + tuple(x + mg for x in h.legs)
    partner = g.partner + tuple(p + mg for p in h.partner)
    return FixedDiagram._raw(vertices, legs, partner, g.loop_count + h.loop_count)


def permutation_diagram(pi) -> FixedDiagram:
    """The 2k-legged diagram of k disjoint edges, edge i joining legs i and k+pi(i).

    `pi` is a sequence of the images pi(1), ..., pi(k) (1-based).
    """
    pi = [int(x) for x in pi]
    k = len(pi)
    if sorted(pi) != list(range(1, k + 1)):
        raise NotAPermutation(f"{pi} is not a permutation of 1..{k}")
    partner = [0] * (2 * k)
    legs = [0] * (2 * k)
    for i in range(k):
        a, b = i, k + i
        partner[a] = b
        partner[b] = a
        legs[i] = a
        legs[k + pi[i] - 1] = b
    return FixedDiagram._raw((), tuple(legs), tuple(partner), 0)


def identity_pairing(k: int) -> FixedDiagram:
    return permutation_diagram(range(1, k + 1))


def is_three_graph(d: FixedDiagram) -> bool:
    """Connected cubic diagram with no legs; the single vertexless loop qualifies."""
    if d.num_legs:
        return False
    if d.num_vertices == 0:
        return d.loop_count == 1 and d.num_darts == 0
    return d.loop_count == 0 and len(_components_darts(d)) == 1


def edge_connected_sum(g: FixedDiagram, e: int, h: FixedDiagram, e2: int,
                       swap: bool = False) -> FixedDiagram:
    """Cross-join edge `e` of g with edge `e2` of h (indices into .edges()).

    With edges (x,y) and (x',y'), the default joins x-x' and y-y'; `swap`
    selects the other crossing x-y', y-x'.
    """
    for d in (g, h):
        if not is_three_graph(d):
            raise NotAThreeGraph(repr(d))
    ge, he = g.edges(), h.edges()
    if not 0 <= e < len(ge):
        raise BadIndex(f"edge index {e} out of range")
    if not 0 <= e2 < len(he):
        raise BadIndex(f"edge index {e2} out of range")
    vert_of_g = _vertex_of(g)
    vert_of_h = _vertex_of(h)
    x, y = ge[e]
    if vert_of_g[x] == vert_of_g[y]:
        raise LoopEdge(f"edge {e} of first diagram is a loop")
    x2, y2 = he[e2]
    if vert_of_h[x2] == vert_of_h[y2]:
        raise LoopEdge(f"edge {e2} of second diagram is a loop")

    mg = g.num_darts
    partner = list(g.partner) + [p + mg for p in h.partner]
    x2 += mg
    y2 += mg
    if swap:
        x2, y2 = y2, x2
    partner[x] = x2
    partner[x2] = x
    partner[y] = y2
    partner[y2] = y
    vertices = g.vertices + tuple(tuple(t + mg for t in tri) for tri in h.vertices)
    return FixedDiagram._raw(vertices, (), tuple(partner), 0)


# ---------------------------------------------------------------------------
# canonical form
# ---------------------------------------------------------------------------

def _vertex_of(d):
    vof = [-1] * d.num_darts
    for i, tri in enumerate(d.vertices):
        for x in tri:
            vof[x] = i
    return vof


def _rho_map(d):
    """Next dart at the same vertex, following the cyclic order; -1 on legs."""
    rho = [-1] * d.num_darts
    for a, b, c in d.vertices:
        rho[a] = b
        rho[b] = c
        rho[c] = a
    return rho


def _leg_label_map(d):
    lab = [0] * d.num_darts
    for i, dart in enumerate(d.legs):
        lab[dart] = i + 1
    return lab


def _components_darts(d):
    """Connected components as sorted dart lists, ordered by smallest dart."""
    m = d.num_darts
    rho = _rho_map(d)
    seen = bytearray(m)
    comps = []
    for start in range(m):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = 1
        comp = []
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in (rho[x], d.partner[x]):
                if y >= 0 and not seen[y]:
                    seen[y] = 1
                    stack.append(y)
        comp.sort()
        comps.append(comp)
    return comps


def _bfs_code(root, rho, partner, lab):
    """Traversal code from a root dart; complete invariant for rooted maps."""
    num = {root: 0}
    order = [root]
    seq = []
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        r = rho[x]
        nr = num.get(r)
        if nr is None:
            nr = num[r] = len(order)
            order.append(r)
        p = partner[x]
        if r < 0 or p < 0:
            raise InvalidDiagram(f"dart {x} has no vertex successor or partner")
        lb = lab[p]
        if lb:
            seq.append(nr)
            seq.append(-lb)
        else:
            np_ = num.get(p)
            if np_ is None:
                np_ = num[p] = len(order)
                order.append(p)
            seq.append(nr)
            seq.append(np_)
    return tuple(seq)


def _component_code(darts, rho, partner, lab):
    leg_labels = sorted(lab[x] for x in darts if lab[x])
    vertex_darts = [x for x in darts if not lab[x]]
    if not vertex_darts:
        # a single edge joining two legs
        return ("edge", leg_labels[0], leg_labels[1])
    if leg_labels:
        anchor = next(x for x in darts if lab[x] == leg_labels[0])
        return ("map",) + _bfs_code(partner[anchor], rho, partner, lab)
    return ("map",) + min(_bfs_code(r, rho, partner, lab) for r in vertex_darts)


def _component_items(d):
    """(code, darts) per component, using the same codes as canonical_form."""
    rho = _rho_map(d)
    lab = _leg_label_map(d)
    return [(_component_code(c, rho, d.partner, lab), c)
            for c in _components_darts(d)]


def canonical_form(d: FixedDiagram) -> bytes:
    """Canonical code; equal iff diagrams are leg- and rotation-preserving isomorphic."""
    if d._code is None:
        try:
            codes = tuple(sorted(code for code, _ in _component_items(d)))
        except (IndexError, TypeError) as exc:  # partial pairing etc.
            raise InvalidDiagram(str(exc)) from exc
        d._code = repr((codes, d.loop_count)).encode()
    return d._code


def are_isomorphic(a: FixedDiagram, b: FixedDiagram) -> bool:
    return canonical_form(a) == canonical_form(b)


def _pack_single(code, loop_count=0) -> bytes:
    """Canonical bytes of a one-component diagram with the given component code."""
    return repr(((code,), loop_count)).encode()


def _extract_component(d, darts):
    """Build the standalone diagram on one component's darts (legs relabeled 1..j)."""
    newid = {x: i for i, x in enumerate(darts)}
    dset = set(darts)
    vertices = tuple(tuple(newid[x] for x in tri)
                     for tri in d.vertices if tri[0] in dset)
    lab = _leg_label_map(d)
    legs = tuple(newid[x] for x in sorted((x for x in darts if lab[x]),
                                          key=lambda x: lab[x]))
    partner = [0] * len(darts)
    for x in darts:
        partner[newid[x]] = newid[d.partner[x]]
    return FixedDiagram._raw(vertices, legs, tuple(partner), 0)


def components(d: FixedDiagram):
    """Standalone connected components; each vertexless loop is its own component.

    Legs of a component are relabeled 1..j in ascending order of original labels.
    """
    out = [_extract_component(d, c) for c in _components_darts(d)]
    for _ in range(d.loop_count):
        out.append(vertexless_loop())
    return out


# ---------------------------------------------------------------------------
# builtin diagrams
# ---------------------------------------------------------------------------

def empty_diagram() -> FixedDiagram:
    return FixedDiagram._raw((), (), (), 0)


def vertexless_loop() -> FixedDiagram:
    return FixedDiagram._raw((), (), (), 1)


def tripod(a: int, b: int, c: int) -> FixedDiagram:
    """One vertex whose cyclic order visits legs a, b, c (a permutation of 1,2,3)."""
    if sorted((a, b, c)) != [1, 2, 3]:
        raise NotAPermutation(f"({a},{b},{c}) is not a permutation of 1,2,3")
    partner = [0] * 6
    for slot, lab in enumerate((a, b, c)):
        partner[slot] = 2 + lab
        partner[2 + lab] = slot
    return FixedDiagram._raw(((0, 1, 2),), (3, 4, 5), tuple(partner), 0)


def theta() -> FixedDiagram:
    """Two vertices joined by a triple edge, rotations (e1,e2,e3) and (e1,e3,e2)."""
    # u darts 0,1,2 ; v darts 3,4,5 ; edges 0-3, 1-5, 2-4
    partner = (3, 5, 4, 0, 2, 1)
    return FixedDiagram._raw(((0, 1, 2), (3, 4, 5)), (), partner, 0)


def k4() -> FixedDiagram:
    """K4 with its planar rotation system."""
    # v1:(a12,a13,a14) v2:(a21,a24,a23) v3:(a31,a32,a34) v4:(a41,a43,a42)
    vertices = ((0, 1, 2), (3, 4, 5), (6, 7, 8), (9, 10, 11))
    partner = [0] * 12
    for a, b in ((0, 3), (1, 6), (2, 9), (4, 11), (5, 7), (8, 10)):
        partner[a] = b
        partner[b] = a
    return FixedDiagram._raw(vertices, (), tuple(partner), 0)


def tri_star(k: int) -> FixedDiagram:
    """k disjoint tripods; vertex i carries legs 3i-2, 3i-1, 3i in order."""
    vertices = []
    legs = [0] * (3 * k)
    partner = [0] * (6 * k)
    for i in range(k):
        base = 6 * i
        vertices.append((base, base + 1, base + 2))
        for j in range(3):
            partner[base + j] = base + 3 + j
            partner[base + 3 + j] = base + j
            legs[3 * i + j] = base + 3 + j
    return FixedDiagram._raw(tuple(vertices), tuple(legs), tuple(partner), 0)


def as_element():
    """Formal sum whose open evaluation vanishes exactly on antisymmetric tensors."""
    return [(1, tripod(1, 2, 3)), (1, tripod(1, 3, 2))]


def _two_vertex(legs_u, legs_v):
    """4-legged diagram u:(leg lu1, leg lu2, s), v:(s, leg lv1, leg lv2)."""
    # u darts 0,1,2 ; v darts 3,4,5 ; internal edge 2-3 ; leg darts 6..9
    partner = [0] * 10
    partner[2] = 3
    partner[3] = 2
    legs = [0] * 4
    for slot, lab in zip((0, 1), legs_u):
        partner[slot] = 5 + lab
        partner[5 + lab] = slot
        legs[lab - 1] = 5 + lab
    for slot, lab in zip((4, 5), legs_v):
        partner[slot] = 5 + lab
        partner[5 + lab] = slot
        legs[lab - 1] = 5 + lab
    return FixedDiagram._raw(((0, 1, 2), (3, 4, 5)), tuple(legs), tuple(partner), 0)


def ihx_element():
    """Formal sum matching the three-term quadratic (Jacobi) relation."""
    d1 = _two_vertex((1, 2), (3, 4))
    d2 = _two_vertex((3, 1), (2, 4))
    d3 = _two_vertex((2, 3), (1, 4))
    return [(1, d1), (1, d2), (1, d3)]


# ---------------------------------------------------------------------------
# corpora and JSON
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiagramCorpus:
    """Deduplicated diagrams with a fixed leg count, in canonical-code order."""

    legs: int
    items: tuple
    codes: tuple

    @classmethod
    def from_diagrams(cls, legs, diagrams):
        by_code = {}
        for d in diagrams:
            if d.num_legs != legs:
                raise LegCountMismatch(f"expected {legs} legs, got {d.num_legs}")
            by_code.setdefault(canonical_form(d), d)
        codes = sorted(by_code)
        return cls(legs, tuple(by_code[c] for c in codes), tuple(codes))

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def head(self, n):
        """Stable prefix, useful to cap quadratic sweeps."""
        return DiagramCorpus(self.legs, self.items[:n], self.codes[:n])


def to_json_dict(d: FixedDiagram) -> dict:
    name = [f"h{i}" for i in range(d.num_darts)]
    return {
        "legs": d.num_legs,
        "loop_count": d.loop_count,
        "vertices": [[name[x] for x in tri] for tri in d.vertices],
        "legs_map": {str(i + 1): name[x] for i, x in enumerate(d.legs)},
        "edges": [[name[a], name[b]] for a, b in d.edges()],
    }


def from_json_dict(obj) -> FixedDiagram:
    legs = {int(lab): h for lab, h in obj.get("legs_map", {}).items()}
    d = FixedDiagram(vertices=obj.get("vertices", ()),
                     legs=legs,
                     edges=obj.get("edges", ()),
                     loop_count=obj.get("loop_count", 0))
    if d.num_legs != int(obj.get("legs", d.num_legs)):
        raise BadLegRange(obj.get("legs"), d.num_legs)
    return d


def require_no_legs(d: FixedDiagram):
    if d.num_legs:
        raise HasLegs(f"diagram has {d.num_legs} legs")
