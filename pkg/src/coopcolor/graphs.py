"""Graph families, edge-colored multigraphs and the translations between them.

Vertices are dense nonnegative integers. Member graphs of a family and edge
colors are indexed from 1, so a cooperative coloring maps each vertex to the
index of the member graph whose independent set it joins.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

Edge = tuple[int, int]
ColoredEdge = tuple[int, int, int]


_CACHED = frozenset({"adjacency", "memberships", "color_adjacency"})


class _Picklable:
    """Pickle support for frozen dataclasses holding read-only mappings and caches."""

    def __getstate__(self):
        return {k: dict(v) if isinstance(v, MappingProxyType) else v
                for k, v in self.__dict__.items() if k not in _CACHED}

    def __setstate__(self, state):
        for k, v in state.items():
            object.__setattr__(self, k, MappingProxyType(v) if isinstance(v, dict) else v)


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph(_Picklable):
    vertices: frozenset[int]
    edges: frozenset[Edge]

    def __post_init__(self):
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if u > v:
                raise ValueError(f"edge {(u, v)} not normalized; use Graph.build")
            if u not in self.vertices or v not in self.vertices:
                raise ValueError(f"edge {(u, v)} leaves the vertex set")

    @classmethod
    def build(cls, vertices: Iterable[int], edges: Iterable[Sequence[int]] = ()) -> "Graph":
        """Normalize endpoints and collapse duplicate edges."""
        return cls(frozenset(vertices), frozenset(_norm(u, v) for u, v in edges))

    @cached_property
    def adjacency(self) -> Mapping[int, frozenset[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return MappingProxyType({v: frozenset(n) for v, n in adj.items()})

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def induced(self, keep: Iterable[int]) -> "Graph":
        keep = frozenset(keep) & self.vertices
        return Graph(keep, frozenset(e for e in self.edges if e[0] in keep and e[1] in keep))

    def components(self) -> list[frozenset[int]]:
        seen: set[int] = set()
        comps = []
        for s in sorted(self.vertices):
            if s in seen:
                continue
            comp = {s}
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self.adjacency[x]:
                    if y not in comp:
                        comp.add(y)
                        queue.append(y)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def is_independent(self, s: Iterable[int]) -> bool:
        s = set(s)
        return not any(self.adjacency[v] & s for v in s if v in self.vertices)


def max_degree(g: Graph) -> int:
    return max((len(n) for n in g.adjacency.values()), default=0)


def is_star_forest(g: Graph) -> bool:
    """True iff ``g`` is acyclic and each component has at most one vertex of degree >= 2."""
    for comp in g.components():
        n_edges = sum(len(g.adjacency[v]) for v in comp) // 2
        if n_edges != len(comp) - 1:
            return False
        if sum(1 for v in comp if len(g.adjacency[v]) >= 2) > 1:
            return False
    return True


@dataclass(frozen=True)
class GraphFamily(_Picklable):
    """Member graphs G_1..G_k over a universal vertex set.

    In common mode every member spans ``universal_vertices``; otherwise the
    family is a list-coloring instance and each vertex may only join the
    members that contain it.
    """

    universal_vertices: frozenset[int]
    members: tuple[Graph, ...]
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        if not self.members:
            raise ValueError("a family needs at least one member")
        union = frozenset().union(*(g.vertices for g in self.members))
        if not union <= self.universal_vertices:
            raise ValueError("member vertices outside the universal vertex set")
        if union != self.universal_vertices:
            raise ValueError("universal vertex set must be the union of member vertex sets")
        if self.names is not None and len(self.names) != len(self.members):
            raise ValueError("one name per member required")

    @classmethod
    def common(cls, vertices: Iterable[int], edge_lists: Sequence[Iterable[Sequence[int]]],
               names: Sequence[str] | None = None) -> "GraphFamily":
        vertices = frozenset(vertices)
        members = tuple(Graph.build(vertices, edges) for edges in edge_lists)
        return cls(vertices, members, tuple(names) if names is not None else None)

    @property
    def k(self) -> int:
        return len(self.members)

    @property
    def is_common(self) -> bool:
        return all(g.vertices == self.universal_vertices for g in self.members)

    def member(self, i: int) -> Graph:
        """Member graph with 1-based index ``i``."""
        return self.members[i - 1]

    def member_name(self, i: int) -> str:
        return self.names[i - 1] if self.names is not None else f"G{i}"

    @cached_property
    def memberships(self) -> Mapping[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {v: [] for v in self.universal_vertices}
        for i, g in enumerate(self.members, start=1):
            for v in g.vertices:
                out[v].append(i)
        return MappingProxyType({v: tuple(ix) for v, ix in out.items()})

    def max_degree(self) -> int:
        return max(max_degree(g) for g in self.members)

    def restrict(self, keep: Iterable[int]) -> "GraphFamily":
        """Family induced on ``keep``; members left empty stay as empty graphs."""
        keep = frozenset(keep)
        return GraphFamily(keep & self.universal_vertices,
                           tuple(g.induced(keep) for g in self.members), self.names)


@dataclass(frozen=True, eq=False)
class CooperativeColoring(_Picklable):
    """Vertex -> member index. ``classes()`` recovers R_1..R_k."""

    assignment: Mapping[int, int]

    def __post_init__(self):
        object.__setattr__(self, "assignment", MappingProxyType(dict(self.assignment)))

    def __eq__(self, other):
        if not isinstance(other, CooperativeColoring):
            return NotImplemented
        return dict(self.assignment) == dict(other.assignment)

    def __hash__(self):
        return hash(frozenset(self.assignment.items()))

    def __getitem__(self, v: int) -> int:
        return self.assignment[v]

    def classes(self) -> dict[int, set[int]]:
        out: dict[int, set[int]] = defaultdict(set)
        for v, i in self.assignment.items():
            out[i].add(v)
        return dict(out)


def cooperative_violations(family: GraphFamily, coloring: CooperativeColoring) -> list[str]:
    """Diagnostics explaining why ``coloring`` is not a cooperative (list) coloring."""
    problems = []
    asg = coloring.assignment
    for v in sorted(family.universal_vertices):
        if v not in asg:
            problems.append(f"vertex {v} is unassigned")
            continue
        i = asg[v]
        if not isinstance(i, int) or not 1 <= i <= family.k:
            problems.append(f"vertex {v} has out-of-range index {i!r}")
        elif v not in family.member(i).vertices:
            problems.append(f"vertex {v} assigned to G{i} which does not contain it")
    for v in asg:
        if v not in family.universal_vertices:
            problems.append(f"assignment mentions unknown vertex {v}")
    for i, g in enumerate(family.members, start=1):
        for u, v in sorted(g.edges):
            if asg.get(u) == i and asg.get(v) == i:
                problems.append(f"edge {u}-{v} of G{i} lies inside R_{i}")
    return problems


def verify_cooperative(family: GraphFamily, coloring: CooperativeColoring) -> bool:
    return not cooperative_violations(family, coloring)


@dataclass(frozen=True)
class EdgeColoredMultigraph(_Picklable):
    """Multigraph with colored edges ``(u, v, color)``, ``u < v``.

    Parallel edges are allowed with distinct colors only. ``palettes``
    optionally restricts the colors each vertex may take (list mode).
    """

    vertices: frozenset[int]
    colored_edges: tuple[ColoredEdge, ...]
    palette_size: int
    palettes: Mapping[int, frozenset[int]] | None = field(default=None, hash=False)

    def __post_init__(self):
        for u, v, c in self.colored_edges:
            if u >= v:
                raise ValueError(f"edge {(u, v)} not normalized; use EdgeColoredMultigraph.build")
            if u not in self.vertices or v not in self.vertices:
                raise ValueError(f"edge {(u, v)} leaves the vertex set")
            if not 1 <= c <= self.palette_size:
                raise ValueError(f"edge color {c} outside palette 1..{self.palette_size}")
        if self.palettes is not None:
            object.__setattr__(self, "palettes", MappingProxyType(
                {v: frozenset(p) for v, p in self.palettes.items()}))

    @classmethod
    def build(cls, vertices: Iterable[int], colored_edges: Iterable[Sequence[int]],
              palette_size: int, palettes: Mapping[int, Iterable[int]] | None = None
              ) -> "EdgeColoredMultigraph":
        edges = sorted({(*_norm(u, v), c) for u, v, c in colored_edges})
        pal = None if palettes is None else {v: frozenset(p) for v, p in palettes.items()}
        return cls(frozenset(vertices), tuple(edges), palette_size, pal)

    def palette_of(self, v: int) -> frozenset[int]:
        if self.palettes is not None:
            return self.palettes[v]
        return frozenset(range(1, self.palette_size + 1))

    @cached_property
    def color_adjacency(self) -> Mapping[int, Mapping[int, tuple[int, ...]]]:
        """v -> color -> neighbors joined to v by an edge of that color."""
        adj: dict[int, dict[int, list[int]]] = {v: defaultdict(list) for v in self.vertices}
        for u, v, c in self.colored_edges:
            adj[u][c].append(v)
            adj[v][c].append(u)
        return MappingProxyType({v: MappingProxyType({c: tuple(n) for c, n in d.items()})
                                 for v, d in adj.items()})

    def color_class(self, c: int) -> Graph:
        return Graph(self.vertices, frozenset((u, v) for u, v, col in self.colored_edges if col == c))

    def max_mono_degree(self) -> int:
        return max((len(n) for d in self.color_adjacency.values() for n in d.values()), default=0)

    def induced(self, keep: Iterable[int]) -> "EdgeColoredMultigraph":
        keep = frozenset(keep) & self.vertices
        pal = None if self.palettes is None else {v: self.palettes[v] for v in keep}
        return EdgeColoredMultigraph(
            keep, tuple(e for e in self.colored_edges if e[0] in keep and e[1] in keep),
            self.palette_size, pal)

    def without_vertex(self, v: int) -> "EdgeColoredMultigraph":
        return self.induced(self.vertices - {v})

    def with_palette_size(self, palette_size: int) -> "EdgeColoredMultigraph":
        return EdgeColoredMultigraph(self.vertices, self.colored_edges, palette_size, self.palettes)


def adapted_violations(m: EdgeColoredMultigraph, sigma: CooperativeColoring) -> list[str]:
    problems = []
    asg = sigma.assignment
    for v in sorted(m.vertices):
        if v not in asg:
            problems.append(f"vertex {v} is unassigned")
        elif asg[v] not in m.palette_of(v):
            problems.append(f"vertex {v} colored {asg[v]!r} outside its palette")
    for u, v, c in m.colored_edges:
        if asg.get(u) == c and asg.get(v) == c:
            problems.append(f"edge {u}-{v} of color {c} has both endpoints colored {c}")
    return problems


def verify_adapted(m: EdgeColoredMultigraph, sigma: CooperativeColoring) -> bool:
    """True iff no edge e = uv has color(e) == sigma(u) == sigma(v)."""
    return not adapted_violations(m, sigma)


def family_to_adapted(family: GraphFamily) -> EdgeColoredMultigraph:
    edges = [(u, v, i) for i, g in enumerate(family.members, start=1) for u, v in g.edges]
    palettes = None
    if not family.is_common:
        palettes = {v: frozenset(ix) for v, ix in family.memberships.items()}
    return EdgeColoredMultigraph.build(family.universal_vertices, edges, family.k, palettes)


def adapted_to_family(m: EdgeColoredMultigraph, palette_size: int) -> GraphFamily:
    """Member i holds the color-i edges. Without per-vertex palettes every member spans V."""
    if any(c > palette_size or c < 1 for _, _, c in m.colored_edges):
        raise ValueError(f"edge colors exceed palette size {palette_size}")
    by_color: dict[int, list[Edge]] = defaultdict(list)
    for u, v, c in m.colored_edges:
        by_color[c].append((u, v))
    members = []
    for i in range(1, palette_size + 1):
        if m.palettes is None:
            verts = m.vertices
        else:
            verts = frozenset(v for v in m.vertices if i in m.palettes[v])
        members.append(Graph.build(verts, by_color.get(i, ())))
    return GraphFamily(m.vertices, tuple(members))


@dataclass(frozen=True)
class PartitionedGraph(_Picklable):
    """Graph H with blocks; ``origin[x]`` is the (vertex, member index) pair behind x."""

    graph: Graph
    blocks: Mapping[int, frozenset[int]] = field(hash=False)
    origin: Mapping[int, tuple[int, int]] = field(hash=False)

    def __post_init__(self):
        seen: set[int] = set()
        for b in self.blocks.values():
            if not b:
                raise ValueError("empty block")
            if b & seen:
                raise ValueError("blocks overlap")
            seen |= b
        if seen != self.graph.vertices:
            raise ValueError("blocks must cover the vertex set")

    def independent_transversals(self) -> Iterator[dict[int, int]]:
        """Brute-force enumeration; yields block key -> chosen vertex of H."""
        keys = sorted(self.blocks)
        for choice in product(*(sorted(self.blocks[k]) for k in keys)):
            if self.graph.is_independent(choice):
                yield dict(zip(keys, choice))


def family_to_transversal(family: GraphFamily) -> PartitionedGraph:
    """Vertices (v, i) for each membership of v; (u,i)(v,i) for each uv in G_i; block {v} x [k]."""
    pairs = sorted((v, i) for v, ix in family.memberships.items() for i in ix)
    ident = {p: n for n, p in enumerate(pairs)}
    edges = [(ident[(u, i)], ident[(v, i)])
             for i, g in enumerate(family.members, start=1) for u, v in g.edges]
    blocks: dict[int, set[int]] = defaultdict(set)
    for (v, i), x in ident.items():
        blocks[v].add(x)
    return PartitionedGraph(
        Graph.build(range(len(pairs)), edges),
        MappingProxyType({v: frozenset(b) for v, b in blocks.items()}),
        MappingProxyType({x: p for p, x in ident.items()}),
    )


def transversal_to_coloring(h: PartitionedGraph, transversal: Mapping[int, int]) -> CooperativeColoring:
    return CooperativeColoring({v: h.origin[x][1] for v, x in transversal.items()})


def all_cooperative_colorings(family: GraphFamily) -> Iterator[CooperativeColoring]:
    """Every valid cooperative coloring, by enumerating all membership choices."""
    verts = sorted(family.universal_vertices)
    for choice in product(*(family.memberships[v] for v in verts)):
        c = CooperativeColoring(dict(zip(verts, choice)))
        if verify_cooperative(family, c):
            yield c
