"""Vertex splits (A, B) where each A-vertex has few neighbors in B.

Three splitters: leaves/centers of a star forest, a degree threshold for
graphs without a q-ary tree of height h, and root parts of an elimination
forest of a quotient graph.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .exhaustive import RootedForest, closure, is_subgraph, treedepth_exact
from .graphs import Graph, is_star_forest


class SplitError(ValueError):
    pass


@dataclass(frozen=True)
class Split:
    A: frozenset[int]
    B: frozenset[int]
    neighbor_bound: int

    @classmethod
    def verified(cls, g: Graph, A: Iterable[int], B: Iterable[int], neighbor_bound: int) -> "Split":
        s = cls(frozenset(A), frozenset(B), neighbor_bound)
        problems = split_violations(g, s)
        if problems:
            raise SplitError("; ".join(problems))
        return s

    def b_neighbor_counts(self, g: Graph) -> dict[int, int]:
        return {v: len(g.adjacency[v] & self.B) for v in self.A}


def split_violations(g: Graph, s: Split) -> list[str]:
    problems = []
    if s.A & s.B:
        problems.append("A and B overlap")
    if s.A | s.B != g.vertices:
        problems.append("A and B do not cover the vertex set")
    for v in sorted(s.A & g.vertices):
        cnt = len(g.adjacency[v] & s.B)
        if cnt > s.neighbor_bound:
            problems.append(f"A-vertex {v} has {cnt} > {s.neighbor_bound} neighbors in B")
    return problems


def star_centers(g: Graph) -> frozenset[int]:
    """Center of each non-trivial star; the lower id for a K_2 component."""
    centers = set()
    for comp in g.components():
        if len(comp) == 1:
            continue
        if len(comp) == 2:
            centers.add(min(comp))
        else:
            centers.add(max(comp, key=lambda v: (len(g.adjacency[v]), -v)))
    return frozenset(centers)


def star_split(g: Graph) -> Split:
    """B = star centers, A = leaves and isolated vertices; every A-vertex sees at most one center."""
    if not is_star_forest(g):
        raise SplitError("star_split needs a star forest")
    B = star_centers(g)
    return Split.verified(g, g.vertices - B, B, 1)


def threshold_split(g: Graph, q: int, h: int) -> Split:
    """A = vertices of degree < 2*q**h, B = the rest."""
    if q < 2 or h < 1:
        raise ValueError("threshold_split needs q >= 2 and h >= 1")
    k = 2 * q ** h
    A = {v for v in g.vertices if g.degree(v) < k}
    return Split.verified(g, A, g.vertices - A, k - 1)


def _check_parts(g: Graph, parts: Sequence[Iterable[int]]) -> list[frozenset[int]]:
    parts = [frozenset(p) for p in parts]
    seen: set[int] = set()
    for p in parts:
        if not p:
            raise SplitError("empty part")
        if p & seen:
            raise SplitError("parts overlap")
        seen |= p
    if seen != g.vertices:
        raise SplitError("parts do not cover the vertex set")
    return parts


def quotient(g: Graph, parts: Sequence[Iterable[int]]) -> Graph:
    """Contract each part to a vertex (indexed by position) and drop loops and parallel edges."""
    parts = _check_parts(g, parts)
    where = {v: i for i, p in enumerate(parts) for v in p}
    return Graph.build(range(len(parts)),
                       {(where[u], where[v]) for u, v in g.edges if where[u] != where[v]})


@dataclass(frozen=True)
class QuotientInstance:
    base: Graph
    parts: tuple[frozenset[int], ...]
    quotient: Graph
    elimination_forest: RootedForest = field(hash=False)

    def __post_init__(self):
        if quotient(self.base, self.parts) != self.quotient:
            raise SplitError("quotient does not match the parts")
        if self.elimination_forest.vertices != self.quotient.vertices:
            raise SplitError("elimination forest must cover the quotient's vertices")
        if not is_subgraph(self.quotient, closure(self.elimination_forest)):
            raise SplitError("quotient is not contained in the forest closure")

    @property
    def max_part_size(self) -> int:
        return max(len(p) for p in self.parts)

    @property
    def height(self) -> int:
        return self.elimination_forest.height()


def build_quotient_instance(g: Graph, parts: Sequence[Iterable[int]], h_cap: int,
                            forest: RootedForest | None = None) -> QuotientInstance:
    """Quotient plus a minimum-height elimination forest (per component, via exact treedepth).

    Rejects when some component has treedepth above ``h_cap``. A caller
    supplied ``forest`` skips the exact search and is only checked.
    """
    parts = tuple(_check_parts(g, parts))
    qg = quotient(g, parts)
    if forest is None:
        parent: dict[int, int | None] = {}
        for comp in qg.components():
            depth, f = treedepth_exact(qg.induced(comp))
            if depth > h_cap:
                raise SplitError(f"quotient component has treedepth {depth} > {h_cap}")
            parent.update(f.parent)
        forest = RootedForest(parent)
    elif forest.height() > h_cap - 1:
        raise SplitError(f"supplied forest has height {forest.height()} > {h_cap - 1}")
    return QuotientInstance(g, parts, qg, forest)


def quotient_split(qi: QuotientInstance) -> tuple[Split, RootedForest]:
    """B = union of the root parts, A = the rest.

    Returns the split and the elimination forest left on the A-side parts
    (roots deleted), whose height is one less than before.
    """
    f = qi.elimination_forest
    roots = f.roots()
    B = frozenset().union(*(qi.parts[r] for r in roots))
    split = Split.verified(qi.base, qi.base.vertices - B, B, qi.max_part_size)
    return split, f.without_roots()
