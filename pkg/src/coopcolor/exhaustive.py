"""Exact searches: adapted/cooperative coloring with UNSAT certification,
q-ary tree subgraph search, exact treedepth and forest closures.

Unsat is only ever reported after the search space is exhausted. A budget
that fires produces Unknown.
"""
from __future__ import annotations

import hashlib
import random
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import combinations, product
from types import MappingProxyType
from typing import Any, Iterable, Mapping, Sequence

from .graphs import (_Picklable, CooperativeColoring, EdgeColoredMultigraph, Graph, GraphFamily,
                     family_to_adapted, verify_adapted, verify_cooperative)

ORDER_POLICY = "mrv/lowest-id/ascending-color/forward-check"
QARY_NODE_CAP = 63
TREEDEPTH_CAP = 14


class Status(str, Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Budget:
    nodes: int | None = None
    seconds: float | None = None


@dataclass
class SearchOutcome:
    status: Status
    witness: Any = None
    stats: dict[str, Any] = field(default_factory=dict)
    detail: Any = field(default=None, repr=False)

    def __post_init__(self):
        if self.status is Status.SAT and self.witness is None:
            raise ValueError("Sat outcome without a witness")

    @property
    def is_sat(self) -> bool:
        return self.status is Status.SAT


class _BudgetExceeded(Exception):
    pass


class _Clock:
    def __init__(self, budget: Budget | None):
        self.budget = budget or Budget()
        self.start = time.perf_counter()
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        b = self.budget
        if b.nodes is not None and self.nodes > b.nodes:
            raise _BudgetExceeded
        if b.seconds is not None and self.nodes % 1024 == 0 and self.elapsed() > b.seconds:
            raise _BudgetExceeded

    def elapsed(self) -> float:
        return time.perf_counter() - self.start


def multigraph_fingerprint(m: EdgeColoredMultigraph, palette: Iterable[int], order: str = ORDER_POLICY) -> str:
    h = hashlib.sha256()
    h.update(order.encode())
    h.update(repr(sorted(palette)).encode())
    h.update(repr(sorted(m.vertices)).encode())
    h.update(repr(m.colored_edges).encode())
    if m.palettes is not None:
        h.update(repr(sorted((v, sorted(p)) for v, p in m.palettes.items())).encode())
    return h.hexdigest()


def solve_adapted_exact(m: EdgeColoredMultigraph, palette: Iterable[int], budget: Budget | None = None,
                        tie_break: Mapping[int, int] | None = None) -> SearchOutcome:
    """Backtracking search for an adapted coloring with forward checking.

    Assigning color c to u removes c from every unassigned neighbor joined to
    u by a color-c edge. Variables are picked by minimum remaining values with
    ties broken by vertex id (or by ``tie_break`` rank), values in ascending
    order. Per-vertex palettes on ``m`` intersect ``palette``.
    """
    palette = frozenset(palette)
    if not palette:
        raise ValueError("palette must be nonempty")
    clock = _Clock(budget)
    verts = sorted(m.vertices)
    rank = {v: (tie_break[v] if tie_break is not None else v) for v in verts}
    verts.sort(key=rank.__getitem__)
    pal_mask = sum(1 << c for c in palette)
    domain = {}
    for v in verts:
        dom = pal_mask
        if m.palettes is not None:
            dom &= sum(1 << c for c in m.palettes[v])
        domain[v] = dom
    cadj = m.color_adjacency
    assigned: dict[int, int] = {}
    trail: list[tuple[int, int]] = []
    stats = {"nodes": 0, "propagations": 0, "backtracks": 0}

    def outcome(status, witness=None):
        stats["nodes"] = clock.nodes
        stats["wall_time"] = clock.elapsed()
        stats["budget_nodes"] = clock.budget.nodes
        stats["budget_seconds"] = clock.budget.seconds
        stats["order"] = ORDER_POLICY if tie_break is None else ORDER_POLICY + "/custom-ties"
        return SearchOutcome(status, witness, stats)

    def pick() -> int | None:
        best, best_size = None, None
        for v in verts:
            if v in assigned:
                continue
            size = domain[v].bit_count()
            if best is None or size < best_size:
                best, best_size = v, size
                if size <= 1:
                    break
        return best

    def undo(mark: int):
        while len(trail) > mark:
            v, bit = trail.pop()
            domain[v] |= bit

    def assign(u: int, c: int) -> bool:
        assigned[u] = c
        bit = 1 << c
        ok = True
        for w in cadj[u].get(c, ()):
            if w in assigned or not domain[w] & bit:
                continue
            domain[w] &= ~bit
            trail.append((w, bit))
            stats["propagations"] += 1
            if not domain[w]:
                ok = False
        return ok

    if any(domain[v] == 0 for v in verts):
        return outcome(Status.UNSAT)
    first = pick()
    if first is None:
        return outcome(Status.SAT, CooperativeColoring({}))
    # frames: [vertex, untried value mask, trail mark]
    stack = [[first, domain[first], 0]]
    try:
        while stack:
            frame = stack[-1]
            v, remaining, mark = frame
            undo(mark)
            assigned.pop(v, None)
            if not remaining:
                stack.pop()
                stats["backtracks"] += 1
                continue
            low = remaining & -remaining
            frame[1] = remaining & ~low
            clock.tick()
            if not assign(v, low.bit_length() - 1):
                continue
            nxt = pick()
            if nxt is None:
                sigma = CooperativeColoring(dict(assigned))
                if not verify_adapted(m.with_palette_size(max(m.palette_size, max(palette))), sigma):
                    raise AssertionError("exact search produced an invalid witness")
                return outcome(Status.SAT, sigma)
            stack.append([nxt, domain[nxt], len(trail)])
    except _BudgetExceeded:
        return outcome(Status.UNKNOWN)
    return outcome(Status.UNSAT)


def _portfolio_worker(args):
    m, palette, budget, seed = args
    tie_break = None
    if seed:
        order = sorted(m.vertices)
        random.Random(seed).shuffle(order)
        tie_break = {v: r for r, v in enumerate(order)}
    out = solve_adapted_exact(m, palette, budget, tie_break)
    out.stats["portfolio_seed"] = seed
    return out


def solve_adapted_portfolio(m: EdgeColoredMultigraph, palette: Iterable[int], budget: Budget | None = None,
                            workers: int = 2) -> SearchOutcome:
    """Run differently tie-broken searches in parallel; return the first definitive one.

    Member 0 uses the canonical order; the others shuffle tie-breaking by seed.
    """
    palette = tuple(palette)
    jobs = [(m, palette, budget, seed) for seed in range(workers)]
    if workers <= 1:
        return _portfolio_worker(jobs[0])
    fallback = None
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_portfolio_worker, j) for j in jobs]
        for fut in as_completed(futures):
            out = fut.result()
            if out.status is not Status.UNKNOWN:
                for f in futures:
                    f.cancel()
                return out
            fallback = out
    return fallback


def solve_cooperative_exact(family: GraphFamily, budget: Budget | None = None) -> SearchOutcome:
    """Exact search on the adapted view with per-vertex palettes = memberships."""
    m = family_to_adapted(family)
    palettes = {v: frozenset(ix) for v, ix in family.memberships.items()}
    m = EdgeColoredMultigraph(m.vertices, m.colored_edges, m.palette_size, palettes)
    out = solve_adapted_exact(m, range(1, family.k + 1), budget)
    if out.is_sat and not verify_cooperative(family, out.witness):
        raise AssertionError("exact search produced an invalid cooperative coloring")
    return out


def brute_force_adapted(m: EdgeColoredMultigraph, palette: Iterable[int]) -> list[CooperativeColoring]:
    """All adapted colorings by plain enumeration (test oracle, tiny inputs only)."""
    palette = sorted(palette)
    verts = sorted(m.vertices)
    doms = [sorted(set(palette) & m.palettes[v]) if m.palettes is not None else palette
            for v in verts]
    wide = m.with_palette_size(max(m.palette_size, max(palette)))
    out = []
    for choice in product(*doms):
        s = CooperativeColoring(dict(zip(verts, choice)))
        if verify_adapted(wide, s):
            out.append(s)
    return out


# ---------------------------------------------------------------------------
# q-ary trees

@dataclass(frozen=True)
class TreeEmbedding:
    q: int
    h: int
    mapping: tuple[int, ...]

    @staticmethod
    def pattern_size(q: int, h: int) -> int:
        return h + 1 if q == 1 else (q ** (h + 1) - 1) // (q - 1)

    @staticmethod
    def parent_of(q: int, node: int) -> int | None:
        """Pattern nodes are numbered breadth first; node 0 is the root."""
        return None if node == 0 else (node - 1) // q

    def is_valid_in(self, g: Graph) -> bool:
        n = self.pattern_size(self.q, self.h)
        if len(self.mapping) != n or len(set(self.mapping)) != n:
            return False
        return all(self.mapping[self.parent_of(self.q, x)] in g.adjacency[self.mapping[x]]
                   for x in range(1, n))


def find_qary_tree(g: Graph, q: int, h: int, budget: Budget | None = None,
                   node_cap: int = QARY_NODE_CAP) -> SearchOutcome:
    """Search for a q-ary tree of height h as a (not necessarily induced) subgraph.

    Pattern nodes are filled breadth first; each internal node picks its q
    child images as an ascending combination of unused neighbors.
    """
    if q < 1 or h < 1:
        raise ValueError("q and h must be >= 1")
    size = TreeEmbedding.pattern_size(q, h)
    if size > node_cap:
        raise ValueError(f"pattern has {size} nodes, above the cap {node_cap}")
    clock = _Clock(budget)
    n_internal = (size - q ** h) if q > 1 else h
    adj = g.adjacency

    def need(node: int) -> int:
        # neighbors required by the image of a pattern node
        if node >= n_internal:
            return 1
        return q if node == 0 else q + 1

    mapping = [-1] * size
    used: set[int] = set()

    def extend(parent: int) -> bool:
        if parent == n_internal:
            return True
        first = parent * q + 1
        host = mapping[parent]
        cands = sorted(w for w in adj[host] if w not in used and len(adj[w]) >= need(first))
        for combo in combinations(cands, q):
            clock.tick()
            for j, w in enumerate(combo):
                mapping[first + j] = w
            used.update(combo)
            if extend(parent + 1):
                return True
            used.difference_update(combo)
        return False

    stats: dict[str, Any] = {"q": q, "h": h, "pattern_nodes": size}
    try:
        for root in sorted(g.vertices):
            if len(adj[root]) < need(0):
                continue
            clock.tick()
            mapping[0] = root
            used.add(root)
            if extend(0):
                stats.update(nodes=clock.nodes, wall_time=clock.elapsed())
                emb = TreeEmbedding(q, h, tuple(mapping))
                if not emb.is_valid_in(g):
                    raise AssertionError("invalid tree embedding")
                return SearchOutcome(Status.SAT, emb, stats)
            used.discard(root)
    except _BudgetExceeded:
        stats.update(nodes=clock.nodes, wall_time=clock.elapsed())
        return SearchOutcome(Status.UNKNOWN, None, stats)
    stats.update(nodes=clock.nodes, wall_time=clock.elapsed())
    return SearchOutcome(Status.UNSAT, None, stats)


def complete_qary_tree(q: int, h: int) -> Graph:
    n = TreeEmbedding.pattern_size(q, h)
    return Graph.build(range(n), ((x, (x - 1) // q) for x in range(1, n)))


# ---------------------------------------------------------------------------
# rooted forests, closure, treedepth

@dataclass(frozen=True, eq=False)
class RootedForest(_Picklable):
    """Rooted forest given by parent pointers; roots map to None."""

    parent: Mapping[int, int | None]

    def __post_init__(self):
        object.__setattr__(self, "parent", MappingProxyType(dict(self.parent)))
        for v in self.parent:
            seen = {v}
            x = self.parent[v]
            while x is not None:
                if x not in self.parent:
                    raise ValueError(f"parent {x} of a vertex is not in the forest")
                if x in seen:
                    raise ValueError("parent pointers contain a cycle")
                seen.add(x)
                x = self.parent[x]

    def __eq__(self, other):
        return isinstance(other, RootedForest) and dict(self.parent) == dict(other.parent)

    def __hash__(self):
        return hash(frozenset(self.parent.items()))

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.parent)

    def roots(self) -> list[int]:
        return sorted(v for v, p in self.parent.items() if p is None)

    def children(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {v: [] for v in self.parent}
        for v, p in self.parent.items():
            if p is not None:
                out[p].append(v)
        return {v: sorted(c) for v, c in out.items()}

    def depth(self, v: int) -> int:
        d = 0
        while self.parent[v] is not None:
            v = self.parent[v]
            d += 1
        return d

    def ancestors(self, v: int) -> list[int]:
        out = []
        while self.parent[v] is not None:
            v = self.parent[v]
            out.append(v)
        return out

    def root_of(self, v: int) -> int:
        while self.parent[v] is not None:
            v = self.parent[v]
        return v

    def height(self) -> int:
        """Largest root distance; -1 for the empty forest."""
        return max((self.depth(v) for v in self.parent), default=-1)

    def without_roots(self) -> "RootedForest":
        """Delete the roots; their children become the new roots."""
        return RootedForest({v: (None if self.parent[p] is None else p)
                             for v, p in self.parent.items() if p is not None})


def closure(f: RootedForest) -> Graph:
    """Graph joining every ancestor-descendant pair of ``f``."""
    return Graph.build(f.vertices, ((v, a) for v in f.parent for a in f.ancestors(v)))


def is_subgraph(g: Graph, host: Graph) -> bool:
    return g.vertices <= host.vertices and g.edges <= host.edges


def treedepth_exact(g: Graph, cap: int = TREEDEPTH_CAP) -> tuple[int, RootedForest]:
    """Minimum h with ``g`` inside the closure of a rooted forest of height h-1.

    Exponential recursion memoized over vertex subsets: a connected graph
    costs 1 + min over v of the rest, a disconnected one the max over its
    components.
    """
    if len(g.vertices) > cap:
        raise ValueError(f"{len(g.vertices)} vertices exceed the treedepth cap {cap}")
    verts = sorted(g.vertices)
    if not verts:
        return 0, RootedForest({})
    idx = {v: i for i, v in enumerate(verts)}
    nb = [0] * len(verts)
    for u, v in g.edges:
        nb[idx[u]] |= 1 << idx[v]
        nb[idx[v]] |= 1 << idx[u]

    def comps(mask: int) -> list[int]:
        out = []
        while mask:
            seed = mask & -mask
            comp = frontier = seed
            while frontier:
                nxt = 0
                m = frontier
                while m:
                    b = m & -m
                    nxt |= nb[b.bit_length() - 1]
                    m ^= b
                frontier = nxt & mask & ~comp
                comp |= frontier
            out.append(comp)
            mask &= ~comp
        return out

    @lru_cache(maxsize=None)
    def td_connected(mask: int) -> tuple[int, int]:
        """(treedepth, best root bit) of a connected vertex subset."""
        if mask & (mask - 1) == 0:
            return 1, mask
        best, best_root = None, 0
        m = mask
        while m:
            b = m & -m
            m ^= b
            rest = mask & ~b
            d = 1 + max(td_connected(c)[0] for c in comps(rest))
            if best is None or d < best:
                best, best_root = d, b
        return best, best_root

    parent: dict[int, int | None] = {}

    def build(mask: int, par: int | None):
        for c in comps(mask):
            _, root = td_connected(c)
            r = verts[root.bit_length() - 1]
            parent[r] = par
            build(c & ~root, r)

    full = (1 << len(verts)) - 1
    depth = max(td_connected(c)[0] for c in comps(full))
    build(full, None)
    forest = RootedForest(parent)
    if forest.height() != depth - 1 or not is_subgraph(g, closure(forest)):
        raise AssertionError("treedepth witness failed verification")
    return depth, forest


def treedepth_brute(g: Graph) -> int:
    """Plain recursion without memo or witness; independent oracle for tests."""
    if not g.vertices:
        return 0
    comps = g.components()
    if len(comps) > 1:
        return max(treedepth_brute(g.induced(c)) for c in comps)
    if len(g.vertices) == 1:
        return 1
    return 1 + min(treedepth_brute(g.induced(g.vertices - {v})) for v in g.vertices)
