"""Vertex labellings, the T-Cartier condition and primitive fibral divisors.

Everything here works on the combinatorial shadow of a divisor: the integer
it induces on each vertex of the dual graph after pulling back along a trait.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Mapping

from .errors import (
    DegenerateTrait,
    GraphNotConnected,
    NoZeroVertex,
    NotAligned,
    NotCartier,
    NotTCartier,
    UnknownGenerator,
    UnknownVertex,
    ZeroThicknessEdge,
)
from .graph import Edge, LabelledGraph, block_vertices, blocks, connected_components, is_aligned
from .intlinalg import solve_integer
from .monoid import Label, proportional

__all__ = [
    "TraitSpec",
    "ThicknessGraph",
    "CartierVerdict",
    "CartierPart",
    "PrimitiveDivisorDescriptor",
    "ObstructionCertificate",
    "is_T_cartier",
    "power_edges",
    "components_after_deleting",
    "decompose_cartier",
    "is_pre_achievable",
    "extend_vertex_labelling",
    "induced_labelling",
    "obstruction_witness",
]

VertexLabelling = dict[str, int]


@dataclass(frozen=True)
class TraitSpec:
    """Order of vanishing of each generator along a trait T -> S."""

    orders: Mapping[str, int]

    def __post_init__(self):
        fixed = {}
        for g, k in dict(self.orders).items():
            if not isinstance(k, int) or isinstance(k, bool) or k < 0:
                raise ValueError(f"trait order for {g!r} must be a nonnegative int, got {k!r}")
            fixed[g] = k
        object.__setattr__(self, "orders", fixed)

    def order(self, label: Label) -> int:
        total = 0
        for g, e in label.items:
            if g not in self.orders:
                raise UnknownGenerator(f"trait does not assign an order to {g!r}")
            total += e * self.orders[g]
        return total

    def zero_set(self) -> frozenset[str]:
        return frozenset(g for g, k in self.orders.items() if k == 0)

    def restrict(self, generators: Iterable[str]) -> "TraitSpec":
        keep = set(generators)
        return TraitSpec({g: k for g, k in self.orders.items() if g in keep})

    def to_json(self) -> dict[str, int]:
        return dict(sorted(self.orders.items()))


@dataclass(frozen=True)
class ThicknessGraph:
    graph: LabelledGraph
    thickness: Mapping[str, int]

    def __post_init__(self):
        th = dict(self.thickness)
        if set(th) != set(self.graph.edge_ids):
            raise ValueError("thickness must be given for exactly the graph's edges")
        for eid, n in th.items():
            if not isinstance(n, int) or n < 1:
                raise ValueError(f"thickness of {eid!r} must be a positive int, got {n!r}")
        object.__setattr__(self, "thickness", th)

    @classmethod
    def from_trait(cls, G: LabelledGraph, T: TraitSpec) -> "ThicknessGraph":
        th = {e.id: T.order(e.label) for e in G.edges}
        zero = tuple(sorted(eid for eid, n in th.items() if n == 0))
        if zero:
            raise ZeroThicknessEdge(f"edges {list(zero)} have order 0 along the trait; specialise first", zero)
        return cls(G, th)


def _check_total(G: LabelledGraph, m: Mapping[str, int]) -> None:
    missing = set(G.vertices) - set(m)
    if missing:
        raise UnknownVertex(f"labelling misses vertices {sorted(missing)}")
    extra = set(m) - set(G.vertices)
    if extra:
        raise UnknownVertex(f"labelling mentions unknown vertices {sorted(extra)}")


@dataclass(frozen=True)
class CartierVerdict:
    ok: bool
    edge: str | None = None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"cartier": self.ok, "edge": self.edge}


def is_T_cartier(TG: ThicknessGraph, m: Mapping[str, int]) -> CartierVerdict:
    _check_total(TG.graph, m)
    for e in TG.graph.edges:
        a, b = e.ends
        if (m[a] - m[b]) % TG.thickness[e.id]:
            return CartierVerdict(False, e.id)
    return CartierVerdict(True)


def _is_power_of(a: Label, b: Label) -> bool:
    # a == b**k for some k >= 1
    if a.support != b.support:
        return False
    ea, eb = a.exponents, b.exponents
    k = None
    for g, x in ea.items():
        q, rem = divmod(x, eb[g])
        if rem or (k is not None and q != k):
            return False
        k = q
    return True


def power_edges(G: LabelledGraph, a: Label) -> frozenset[str]:
    """E(a): edges whose label b has a equal to a positive power of b."""
    if a.is_unit():
        raise ValueError("a must be a non-identity label")
    return frozenset(e.id for e in G.edges if _is_power_of(a, e.label))


def components_after_deleting(G: LabelledGraph, a: Label) -> list[tuple[str, ...]]:
    return connected_components(G, power_edges(G, a))


@dataclass(frozen=True)
class CartierPart:
    labelling: dict[str, int]
    B: frozenset[str]

    def to_json(self) -> dict:
        return {"labelling": dict(sorted(self.labelling.items())), "B": sorted(self.B)}


def is_pre_achievable(G: LabelledGraph, f: Mapping[str, int], B: Iterable[str]) -> bool:
    """Every edge of B carries the same label class and f is locally constant off B."""
    ids = set(B)
    labels = [e.label for e in G.edges if e.id in ids]
    if labels and any(proportional(labels[0], lab) is None for lab in labels[1:]):
        return False
    return all(f[e.ends[0]] == f[e.ends[1]] for e in G.edges if e.id not in ids)


def _attachment(G: LabelledGraph, H: set[str]) -> dict[str, str]:
    """For each vertex, the vertex of H through which it is reached (multi-source BFS)."""
    adj = G.adjacency()
    att = {v: v for v in H}
    queue = deque(sorted(H))
    while queue:
        v = queue.popleft()
        for _, w in adj[v]:
            if w not in att:
                att[w] = att[v]
                queue.append(w)
    return att


def _block_order(G: LabelledGraph, root: int = 0) -> list[frozenset[str]]:
    """Blocks in breadth-first order over the block-cut tree, starting at ``root``."""
    bl = blocks(G)
    if not bl:
        return []
    verts = [block_vertices(G, b) for b in bl]
    order = [root]
    remaining = set(range(len(bl))) - {root}
    frontier = deque([root])
    while frontier:
        i = frontier.popleft()
        for j in sorted(remaining):
            if verts[j] & verts[i]:
                order.append(j)
                remaining.discard(j)
                frontier.append(j)
    return [bl[i] for i in order]


def _check_constant_on_circuits(G: LabelledGraph) -> None:
    verdict = is_aligned(G)
    if not verdict:
        raise NotAligned(
            f"labels {verdict.labels[0]} and {verdict.labels[1]} on edges {verdict.edges} share a circuit but are unrelated",
            verdict,
        )


def decompose_cartier(TG: ThicknessGraph, f: Mapping[str, int], root: int | None = None) -> list[CartierPart]:
    """Split a Cartier function into pre-achievable Cartier pieces, one per block.

    Blocks are attached one at a time so that each new block meets the union
    of the earlier ones in a single vertex; the piece for the new block is f
    minus the running sum there, extended constantly through attaching vertices.
    """
    G = TG.graph
    _check_total(G, f)
    if not G.is_connected():
        raise GraphNotConnected("decompose_cartier needs a connected graph")
    _check_constant_on_circuits(G)
    verdict = is_T_cartier(TG, f)
    if not verdict:
        raise NotCartier(f"f is not divisible by the thickness across edge {verdict.edge!r}", verdict.edge)
    if all(v == 0 for v in f.values()):
        return []
    ordered = _block_order(G, root or 0) if G.edges else []
    if not ordered:
        return [CartierPart(dict(f), frozenset())]
    parts: list[CartierPart] = []
    running = {v: 0 for v in G.vertices}
    H: set[str] = set()
    for blk in ordered:
        H |= block_vertices(G, blk)
        att = _attachment(G, H)
        piece = {v: f[att[v]] - running[att[v]] for v in G.vertices}
        for v in G.vertices:
            running[v] += piece[v]
        if any(piece.values()):
            part = CartierPart(piece, frozenset(blk))
            if not is_pre_achievable(G, piece, part.B) or not is_T_cartier(TG, piece):
                raise AssertionError("internal error: decomposition piece failed its own checks")
            parts.append(part)
    if running != dict(f):
        raise AssertionError("internal error: decomposition does not sum to f")
    return parts


@dataclass(frozen=True)
class PrimitiveDivisorDescriptor:
    """div(a; H) with an integer multiplicity."""

    a: Label
    H: frozenset[str]
    coeff: int

    def __post_init__(self):
        if self.coeff == 0:
            raise ValueError("descriptor coefficient must be nonzero")
        if self.a.is_unit():
            raise ValueError("descriptor base label must be non-identity")

    def induced(self, T: TraitSpec, vertices: Iterable[str]) -> dict[str, int]:
        w = self.coeff * T.order(self.a)
        return {v: (w if v in self.H else 0) for v in vertices}

    def to_json(self) -> dict:
        return {"a": self.a.to_json(), "H": sorted(self.H), "coeff": self.coeff}


def induced_labelling(
    descriptors: Iterable[PrimitiveDivisorDescriptor], T: TraitSpec, vertices: Iterable[str]
) -> dict[str, int]:
    vs = list(vertices)
    total = {v: 0 for v in vs}
    for d in descriptors:
        for v, x in d.induced(T, vs).items():
            total[v] += x
    return total


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _subgraph(G: LabelledGraph, verts: Iterable[str]) -> LabelledGraph:
    vs = set(verts)
    return LabelledGraph(
        tuple(v for v in G.vertices if v in vs),
        tuple(e for e in G.edges if e.ends[0] in vs),
        G.generators,
    )


def _extend_part(
    G: LabelledGraph, T: TraitSpec, part: CartierPart, zero: str
) -> list[PrimitiveDivisorDescriptor]:
    labels = [e.label for e in G.edges if e.id in part.B]
    p, _ = labels[0].primitive()
    ks = [lab.primitive()[1] for lab in labels]
    L = 1
    for k in ks:
        L = L * k // gcd(L, k)
    rho = T.order(p)
    vs = list(G.vertices)
    candidates: list[tuple[Label, frozenset[str]]] = []
    for j in _divisors(L):
        a = p ** j
        # the part vanishes at ``zero``, so components through it are never needed
        for comp in components_after_deleting(G, a):
            if zero not in comp:
                candidates.append((a, frozenset(comp)))
    cols = [[(T.order(a) if v in H else 0) for (a, H) in candidates] for v in vs]
    target = [part.labelling[v] for v in vs]
    x = solve_integer(cols, target, len(candidates))
    if x is None or rho <= 0:
        raise AssertionError("internal error: no integral combination of primitive divisors found")
    return [PrimitiveDivisorDescriptor(a, H, c) for (a, H), c in zip(candidates, x) if c]


def extend_vertex_labelling(
    G: LabelledGraph, T: TraitSpec, m: Mapping[str, int]
) -> list[PrimitiveDivisorDescriptor]:
    """Write a T-Cartier vertex labelling as a sum of primitive fibral divisors.

    Each connected component is decomposed block by block (rooted at a block
    through its least zero vertex) and each block piece is then expressed as
    an integer combination of div(p^j; H) for the primitive label p of the block.
    """
    _check_total(G, m)
    _check_constant_on_circuits(G)
    bad = [e for e in G.edges if T.order(e.label) == 0]
    if bad:
        raise DegenerateTrait(f"trait has order 0 on the label of edge {bad[0].id!r}")
    TG = ThicknessGraph.from_trait(G, T)
    verdict = is_T_cartier(TG, m)
    if not verdict:
        raise NotTCartier(f"m is not divisible by the thickness across edge {verdict.edge!r}", verdict.edge)
    out: dict[tuple[Label, frozenset[str]], int] = {}
    for comp in connected_components(G):
        zeros = sorted(v for v in comp if m[v] == 0)
        if not zeros:
            raise NoZeroVertex(f"m does not vanish anywhere on the component containing {comp[0]!r}")
        if all(m[v] == 0 for v in comp):
            continue
        sub = _subgraph(G, comp)
        sub_TG = ThicknessGraph(sub, {e.id: TG.thickness[e.id] for e in sub.edges})
        root = next(i for i, b in enumerate(blocks(sub)) if zeros[0] in block_vertices(sub, b))
        for part in decompose_cartier(sub_TG, {v: m[v] for v in comp}, root):
            for d in _extend_part(sub, T, part, zeros[0]):
                key = (d.a, d.H)
                out[key] = out.get(key, 0) + d.coeff
    result = [
        PrimitiveDivisorDescriptor(a, H, c)
        for (a, H), c in sorted(out.items(), key=lambda kv: (kv[0][0], sorted(kv[0][1])))
        if c
    ]
    if induced_labelling(result, T, G.vertices) != dict(m):
        raise AssertionError("internal error: descriptors do not reconstruct m")
    return result


@dataclass(frozen=True)
class ObstructionCertificate:
    """Why no fibral Cartier divisor can restrict to the circuit's vertex labelling."""

    circuit: tuple[str, ...]
    edges: tuple[str, str]
    labels: tuple[Label, Label]
    d: int
    forced: tuple[Label, Label]

    @property
    def identity_holds(self) -> bool:
        return self.forced[0] == self.forced[1]

    def to_json(self) -> dict:
        return {
            "circuit": list(self.circuit),
            "edges": list(self.edges),
            "labels": [lab.to_json() for lab in self.labels],
            "d": self.d,
            "forced_identity": [side.to_json() for side in self.forced],
            "identity_holds": self.identity_holds,
        }


def _path_avoiding(G: LabelledGraph, block: frozenset[str], src: str, dst: str, avoid: str) -> list[str]:
    """Edge ids of a shortest src-dst path inside ``block`` that never visits ``avoid``."""
    adj: dict[str, list[tuple[str, str]]] = {}
    for e in sorted((G.edge(eid) for eid in block), key=lambda e: e.id):
        a, b = e.ends
        if avoid in (a, b) or a == b:
            continue
        adj.setdefault(a, []).append((e.id, b))
        adj.setdefault(b, []).append((e.id, a))
    prev: dict[str, tuple[str, str] | None] = {src: None}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        if v == dst:
            break
        for eid, w in adj.get(v, []):
            if w not in prev:
                prev[w] = (eid, v)
                queue.append(w)
    if dst not in prev:
        raise AssertionError("internal error: block is not 2-connected")
    path = []
    v = dst
    while prev[v] is not None:
        eid, u = prev[v]
        path.append(eid)
        v = u
    return path[::-1]


def obstruction_witness(G: LabelledGraph, T: TraitSpec) -> ObstructionCertificate | None:
    verdict = is_aligned(G)
    if verdict:
        return None
    block = blocks(G)[verdict.block]
    es = sorted((G.edge(eid) for eid in block), key=lambda e: e.id)
    pair: tuple[Edge, Edge, str] | None = None
    for i, e0 in enumerate(es):
        for e1 in es[i + 1:]:
            shared = sorted(set(e0.ends) & set(e1.ends))
            if shared and proportional(e0.label, e1.label) is None:
                pair = (e0, e1, shared[0])
                break
        if pair:
            break
    if pair is None:
        raise AssertionError("internal error: non-aligned block without adjacent unrelated edges")
    e0, e1, c = pair
    x, y = e0.other(c), e1.other(c)
    circuit = [e0.id, e1.id]
    if x != y:
        circuit += _path_avoiding(G, block, y, x, c)
    for eid in circuit:
        for g in G.edge(eid).label.support:
            if T.orders.get(g, 0) == 0:
                raise DegenerateTrait(f"trait gives generator {g!r} order 0 on the obstructing circuit")
    a0, a1 = e0.label, e1.label
    o0, o1 = T.order(a0), T.order(a1)
    cert = ObstructionCertificate(tuple(circuit), (e0.id, e1.id), (a0, a1), o0 * o1, (a0 ** o1, a1 ** o0))
    if cert.identity_holds:
        raise AssertionError("internal error: forced identity holds for unrelated labels")
    return cert
