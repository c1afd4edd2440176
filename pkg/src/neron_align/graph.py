"""Edge-labelled multigraphs and the alignment conditions on them."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import InvalidGraph, UnitLabel, UnknownGenerator
from .monoid import Label, label_mul, proportional

__all__ = [
    "Edge",
    "LabelledGraph",
    "GeneratorMap",
    "AlignmentVerdict",
    "blocks",
    "block_vertices",
    "is_aligned",
    "regularise",
    "is_strictly_aligned",
    "pullback",
    "specialise",
    "connected_components",
]


@dataclass(frozen=True)
class Edge:
    id: str
    ends: tuple[str, str]
    label: Label

    @property
    def is_loop(self) -> bool:
        return self.ends[0] == self.ends[1]

    def other(self, v: str) -> str:
        a, b = self.ends
        if v == a:
            return b
        if v == b:
            return a
        raise KeyError(v)


@dataclass(frozen=True)
class LabelledGraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    generators: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidGraph("vertex ids must be unique")
        seen: set[str] = set()
        vset = set(self.vertices)
        for e in self.edges:
            if e.id in seen:
                raise InvalidGraph(f"duplicate edge id {e.id!r}")
            seen.add(e.id)
            for v in e.ends:
                if v not in vset:
                    raise InvalidGraph(f"edge {e.id!r} ends at unknown vertex {v!r}")
            if e.label.is_unit():
                raise UnitLabel(f"edge {e.id!r} has the identity label")
            extra = e.label.support - self.generators
            if extra:
                raise UnknownGenerator(f"edge {e.id!r} uses undeclared generators {sorted(extra)}")

    @classmethod
    def build(
        cls,
        vertices: Iterable[str],
        edges: Iterable[tuple[str, tuple[str, str] | Sequence[str], Label | Mapping[str, int]]],
        generators: Iterable[str] | None = None,
    ) -> "LabelledGraph":
        es = []
        for eid, ends, label in edges:
            if not isinstance(label, Label):
                label = Label.of(label)
            es.append(Edge(str(eid), (str(ends[0]), str(ends[1])), label))
        if generators is None:
            gens = frozenset().union(*(e.label.support for e in es)) if es else frozenset()
        else:
            gens = frozenset(generators)
        return cls(tuple(str(v) for v in vertices), tuple(es), gens)

    def edge(self, eid: str) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise KeyError(eid)

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    def adjacency(self, skip: Iterable[str] = ()) -> dict[str, list[tuple[str, str]]]:
        drop = set(skip)
        adj: dict[str, list[tuple[str, str]]] = {v: [] for v in self.vertices}
        for e in self.edges:
            if e.id in drop:
                continue
            a, b = e.ends
            adj[a].append((e.id, b))
            if a != b:
                adj[b].append((e.id, a))
        return adj

    def is_connected(self) -> bool:
        return len(connected_components(self)) <= 1

    def to_json(self) -> dict:
        return {
            "generators": sorted(self.generators),
            "vertices": list(self.vertices),
            "edges": [
                {"id": e.id, "ends": list(e.ends), "label": e.label.to_json()} for e in self.edges
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "LabelledGraph":
        return cls.build(
            data["vertices"],
            [(e["id"], tuple(e["ends"]), Label.of(e["label"])) for e in data["edges"]],
            data.get("generators"),
        )


def connected_components(G: LabelledGraph, skip: Iterable[str] = ()) -> list[tuple[str, ...]]:
    """Vertex sets of the components of G minus the edges in ``skip``, canonically ordered."""
    adj = G.adjacency(skip)
    seen: set[str] = set()
    comps = []
    for root in sorted(G.vertices):
        if root in seen:
            continue
        seen.add(root)
        stack, comp = [root], []
        while stack:
            v = stack.pop()
            comp.append(v)
            for _, w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(tuple(sorted(comp)))
    return sorted(comps)


def blocks(G: LabelledGraph) -> list[frozenset[str]]:
    """Partition of the edges into maximal 2-vertex-connected pieces.

    Bridges and loops come out as singleton blocks. Blocks are sorted by their
    sorted edge-id tuples so that "the first block" is well defined.
    """
    found: list[frozenset[str]] = [frozenset({e.id}) for e in G.edges if e.is_loop]
    loops = {e.id for e in G.edges if e.is_loop}
    adj = G.adjacency(loops)
    disc: dict[str, int] = {}
    low: dict[str, int] = {}
    clock = 0
    for root in sorted(G.vertices):
        if root in disc:
            continue
        disc[root] = low[root] = clock
        clock += 1
        edge_stack: list[str] = []
        frames = [(root, None, iter(adj[root]))]
        while frames:
            u, parent_edge, it = frames[-1]
            advanced = False
            for eid, w in it:
                if eid == parent_edge:
                    continue
                if w not in disc:
                    disc[w] = low[w] = clock
                    clock += 1
                    edge_stack.append(eid)
                    frames.append((w, eid, iter(adj[w])))
                    advanced = True
                    break
                if disc[w] < disc[u]:
                    edge_stack.append(eid)
                    low[u] = min(low[u], disc[w])
            if advanced:
                continue
            frames.pop()
            if frames:
                p = frames[-1][0]
                low[p] = min(low[p], low[u])
                if low[u] >= disc[p]:
                    comp = set()
                    while True:
                        eid = edge_stack.pop()
                        comp.add(eid)
                        if eid == parent_edge:
                            break
                    found.append(frozenset(comp))
    return sorted(found, key=lambda b: sorted(b))


def block_vertices(G: LabelledGraph, block: Iterable[str]) -> frozenset[str]:
    ids = set(block)
    return frozenset(v for e in G.edges if e.id in ids for v in e.ends)


@dataclass(frozen=True)
class AlignmentVerdict:
    aligned: bool
    block: int | None = None
    edges: tuple[str, str] | None = None
    labels: tuple[Label, Label] | None = None

    def __bool__(self) -> bool:
        return self.aligned

    def to_json(self) -> dict:
        out: dict = {"aligned": self.aligned}
        if not self.aligned:
            out["witness"] = {
                "block": self.block,
                "edges": list(self.edges),
                "labels": [lab.to_json() for lab in self.labels],
            }
        return out


def is_aligned(G: LabelledGraph) -> AlignmentVerdict:
    """Aligned iff labels are pairwise proportional inside every block with two or more edges.

    In a 2-vertex-connected graph any two edges share a circuit, so checking
    blocks is the same as checking circuits. Proportionality is an equivalence
    relation, which is why comparing against one reference edge suffices.
    """
    by_id = {e.id: e for e in G.edges}
    for idx, blk in enumerate(blocks(G)):
        if len(blk) < 2:
            continue
        ids = sorted(blk)
        ref = by_id[ids[0]]
        for eid in ids[1:]:
            other = by_id[eid]
            if proportional(ref.label, other.label) is None:
                return AlignmentVerdict(False, idx, (ref.id, other.id), (ref.label, other.label))
    return AlignmentVerdict(True)


def _fresh(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def regularise(G: LabelledGraph, order: Mapping[str, Sequence[str]] | None = None) -> LabelledGraph:
    """Replace every label of degree d >= 2 by a chain of d single-generator edges.

    The chain runs from ``ends[0]`` to ``ends[1]``. Without ``order`` the
    generators are sorted with repeats kept together; ``order`` may supply any
    rearrangement of that multiset per edge id.
    """
    order = order or {}
    vnames = set(G.vertices)
    enames = set(G.edge_ids)
    vertices = list(G.vertices)
    edges: list[Edge] = []
    for e in G.edges:
        if e.label.degree == 1:
            edges.append(e)
            continue
        canonical = [g for g, k in e.label.items for _ in range(k)]
        seq = list(order.get(e.id, canonical))
        if Counter(seq) != Counter(canonical):
            raise ValueError(f"chain order for edge {e.id!r} is not a rearrangement of {canonical}")
        d = len(seq)
        chain = [e.ends[0]]
        for k in range(1, d):
            v = _fresh(f"{e.id}#v{k}", vnames)
            vertices.append(v)
            chain.append(v)
        chain.append(e.ends[1])
        for k, g in enumerate(seq):
            eid = _fresh(f"{e.id}#{k}", enames)
            edges.append(Edge(eid, (chain[k], chain[k + 1]), Label.gen(g)))
    return LabelledGraph(tuple(vertices), tuple(edges), G.generators)


def is_strictly_aligned(G: LabelledGraph) -> AlignmentVerdict:
    return is_aligned(regularise(G))


@dataclass(frozen=True)
class GeneratorMap:
    """Monoid homomorphism M(G1) -> M(G2), given on generators."""

    images: Mapping[str, Label]

    def __post_init__(self):
        fixed = {}
        for g, img in dict(self.images).items():
            if not isinstance(img, Label):
                img = Label.of(img)
            if img.is_unit():
                raise UnitLabel(f"generator {g!r} maps to the identity; use specialise() to invert generators")
            fixed[g] = img
        object.__setattr__(self, "images", fixed)

    @classmethod
    def identity(cls, generators: Iterable[str]) -> "GeneratorMap":
        return cls({g: Label.gen(g) for g in generators})

    def __call__(self, label: Label) -> Label:
        out = Label()
        for g, k in label.items:
            try:
                img = self.images[g]
            except KeyError:
                raise UnknownGenerator(f"generator {g!r} is not in the domain of the map") from None
            out = label_mul(out, img ** k)
        return out

    @property
    def targets(self) -> frozenset[str]:
        return frozenset().union(*(img.support for img in self.images.values())) if self.images else frozenset()


def pullback(G: LabelledGraph, f: GeneratorMap | Mapping[str, Label]) -> LabelledGraph:
    if not isinstance(f, GeneratorMap):
        f = GeneratorMap(f)
    missing = set().union(*(e.label.support for e in G.edges)) - set(f.images) if G.edges else set()
    if missing:
        raise UnknownGenerator(f"generators {sorted(missing)} are not in the domain of the map")
    edges = tuple(Edge(e.id, e.ends, f(e.label)) for e in G.edges)
    gens = frozenset().union(*(e.label.support for e in edges)) if edges else frozenset()
    return LabelledGraph(G.vertices, edges, gens | f.targets)


def specialise(G: LabelledGraph, invert: Iterable[str]) -> LabelledGraph:
    """Make the given generators units: strip them from labels and contract edges that become units."""
    inv = set(invert)
    parent = {v: v for v in G.vertices}

    def find(v: str) -> str:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    survivors = []
    for e in G.edges:
        lab = e.label.without(inv)
        if lab.is_unit():
            a, b = find(e.ends[0]), find(e.ends[1])
            if a != b:
                lo, hi = sorted((a, b))
                parent[hi] = lo
        else:
            survivors.append((e, lab))
    reps = [v for v in G.vertices if find(v) == v]
    edges = tuple(Edge(e.id, (find(e.ends[0]), find(e.ends[1])), lab) for e, lab in survivors)
    return LabelledGraph(tuple(reps), edges, G.generators - inv)
