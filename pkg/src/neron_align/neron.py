"""Component groups of Néron models of jacobians along a trait.

Over a trait the pulled-back curve has a regular model whose special fibre has
dual graph equal to the original graph with each edge e subdivided into n(e)
unit edges. The component group is the critical group of that graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Mapping

from .divisors import ThicknessGraph, TraitSpec
from .errors import GraphNotConnected, UnknownVertex
from .graph import LabelledGraph, connected_components, specialise
from .intlinalg import matvec, smith

__all__ = [
    "SubdividedGraph",
    "ComponentGroup",
    "subdivide",
    "laplacian",
    "component_group",
    "component_group_of",
    "section_order",
    "specialised_component_group",
    "blowup_family_orders",
    "family_orders",
    "contraction_map",
]


@dataclass(frozen=True)
class SubdividedGraph:
    """Unit-edge multigraph; ``vertices[:n_original]`` are the original vertices."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    n_original: int


def subdivide(TG: ThicknessGraph) -> SubdividedGraph:
    G = TG.graph
    taken = set(G.vertices)
    vertices = list(G.vertices)
    edges: list[tuple[str, str]] = []
    for e in G.edges:
        n = TG.thickness[e.id]
        chain = [e.ends[0]]
        for k in range(1, n):
            name = f"{e.id}~{k}"
            while name in taken:
                name += "'"
            taken.add(name)
            vertices.append(name)
            chain.append(name)
        chain.append(e.ends[1])
        edges.extend(zip(chain, chain[1:]))
    return SubdividedGraph(tuple(vertices), tuple(edges), len(G.vertices))


def laplacian(S: SubdividedGraph) -> list[list[int]]:
    idx = {v: i for i, v in enumerate(S.vertices)}
    n = len(S.vertices)
    L = [[0] * n for _ in range(n)]
    for a, b in S.edges:
        if a == b:
            continue
        i, j = idx[a], idx[b]
        L[i][i] += 1
        L[j][j] += 1
        L[i][j] -= 1
        L[j][i] -= 1
    return L


@dataclass(frozen=True)
class ComponentGroup:
    """Z^{V-1} / (reduced Laplacian), with the change of basis that diagonalises it."""

    invariant_factors: tuple[int, ...]
    vertices: tuple[str, ...]
    base: str
    _S: tuple[tuple[int, ...], ...]
    _diagonal: tuple[int, ...]

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def coordinates(self, divisor: Mapping[str, int]) -> tuple[int, ...]:
        """Image of a degree-zero vertex divisor, one residue per nontrivial factor."""
        if sum(divisor.values()) != 0:
            raise ValueError("divisor must have degree zero")
        for v in divisor:
            if v not in self.vertices and v != self.base:
                raise UnknownVertex(f"unknown vertex {v!r}")
        x = [divisor.get(v, 0) for v in self.vertices]
        y = matvec(self._S, x)
        out = []
        for yi, d in zip(y, self._diagonal):
            d = abs(d)
            if d > 1:
                out.append(yi % d)
        return tuple(out)

    def element_order(self, divisor: Mapping[str, int]) -> int:
        order = 1
        for c, d in zip(self.coordinates(divisor), self.invariant_factors):
            k = d // gcd(d, c)
            order = order * k // gcd(order, k)
        return order

    def to_json(self) -> dict:
        return {"invariant_factors": list(self.invariant_factors), "order": self.order}


def component_group_of(S: SubdividedGraph, base: str | None = None) -> ComponentGroup:
    if base is None:
        base = min(S.vertices)
    L = laplacian(S)
    keep = [i for i, v in enumerate(S.vertices) if v != base]
    L_red = [[L[i][j] for j in keep] for i in keep]
    sf = smith(L_red, len(keep))
    if any(d == 0 for d in sf.diagonal):
        raise GraphNotConnected("component group needs a connected graph")
    factors = tuple(abs(d) for d in sf.diagonal if abs(d) > 1)
    return ComponentGroup(factors, tuple(S.vertices[i] for i in keep), base, sf.S, sf.diagonal)


def component_group(G: LabelledGraph, T: TraitSpec, base: str | None = None) -> ComponentGroup:
    if not G.is_connected():
        raise GraphNotConnected("component group needs a connected graph")
    return component_group_of(subdivide(ThicknessGraph.from_trait(G, T)), base)


def section_order(G: LabelledGraph, T: TraitSpec, p: str, q: str) -> int:
    for v in (p, q):
        if v not in G.vertices:
            raise UnknownVertex(f"unknown vertex {v!r}")
    if p == q:
        return 1
    return component_group(G, T).element_order({p: 1, q: -1})


def specialised_component_group(G: LabelledGraph, T: TraitSpec) -> tuple[ComponentGroup, LabelledGraph]:
    """Contract the edges that become smooth along T, then compute the group."""
    zero = T.zero_set() & G.generators
    H = specialise(G, zero)
    return component_group(H, T.restrict(H.generators)), H


def blowup_family_orders(
    G: LabelledGraph,
    fixed_gen: str,
    growing_gen: str,
    i_max: int,
    section: tuple[str, str] | None = None,
    others: int = 1,
) -> list[int]:
    """Section orders along traits with ord(fixed_gen) = 1 and ord(growing_gen) = i, i = 1..i_max.

    Generators other than the two named ones get order ``others``. If the two
    names coincide the growing order wins.
    """
    if i_max < 1:
        raise ValueError("i_max must be at least 1")
    for g in (fixed_gen, growing_gen):
        if g not in G.generators:
            raise ValueError(f"generator {g!r} is not declared on the graph")
    if section is None:
        vs = sorted(G.vertices)
        section = (vs[0], vs[1]) if len(vs) > 1 else (vs[0], vs[0])
    orders = []
    for i in range(1, i_max + 1):
        ords = {g: others for g in G.generators}
        ords[fixed_gen] = 1
        ords[growing_gen] = i
        orders.append(section_order(G, TraitSpec(ords), *section))
    return orders


def contraction_map(G: LabelledGraph, invert: Iterable[str]) -> dict[str, str]:
    """Where each vertex of G lands in specialise(G, invert)."""
    inv = set(invert)
    keep = [e.id for e in G.edges if not e.label.without(inv).is_unit()]
    out = {}
    for comp in connected_components(G, skip=keep):
        rep = min(comp)
        for v in comp:
            out[v] = rep
    return out


def family_orders(
    G: LabelledGraph,
    T: TraitSpec,
    growing_gen: str,
    i_max: int,
    section: tuple[str, str] | None = None,
) -> list[int]:
    """Section orders along T with the order of ``growing_gen`` replaced by i = 1..i_max.

    Edges whose label has order 0 are contracted first.
    """
    if i_max < 1:
        raise ValueError("i_max must be at least 1")
    if growing_gen not in G.generators:
        raise ValueError(f"generator {growing_gen!r} is not declared on the graph")
    if section is None:
        vs = sorted(G.vertices)
        section = (vs[0], vs[1]) if len(vs) > 1 else (vs[0], vs[0])
    for v in section:
        if v not in G.vertices:
            raise UnknownVertex(f"unknown vertex {v!r}")
    orders = []
    for i in range(1, i_max + 1):
        Ti = TraitSpec({**T.orders, growing_gen: i})
        zero = Ti.zero_set() & G.generators
        H = specialise(G, zero)
        where = contraction_map(G, zero)
        orders.append(section_order(H, Ti.restrict(H.generators), where[section[0]], where[section[1]]))
    return orders


def vertex_divisor(vertices: Iterable[str], p: str, q: str) -> dict[str, int]:
    d = {v: 0 for v in vertices}
    d[p] += 1
    d[q] -= 1
    return d
