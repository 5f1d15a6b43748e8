"""Randomized cooperative-coloring solvers and random instance generators.

``lll_solve`` is Moser-Tardos resampling over the bad events "both endpoints
of a color-i edge joined R_i". ``star_partition_solve`` runs the two-phase
inventory procedure on star forests (centers first, then leaves from their
available colors) and resamples center inventories around each vertex left
without a color. ``partition_solve_generic`` is the same pipeline with a
pluggable splitter and sub-solvers.

Every Sat outcome carries a witness that passed ``verify_cooperative``.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Mapping

from .decomposition import Split, SplitError, split_violations, star_split
from .exhaustive import SearchOutcome, Status
from .graphs import CooperativeColoring, Graph, GraphFamily, is_star_forest, verify_cooperative


@dataclass(frozen=True)
class SolverParams:
    epsilon: float = 0.5
    inventory_size: int = 1
    resample_cap: int = 10 ** 6
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.epsilon <= 1:
            raise ValueError("epsilon must lie in (0, 1]")
        if self.inventory_size < 1 or self.resample_cap < 1:
            raise ValueError("inventory_size and resample_cap must be positive")


@dataclass(frozen=True)
class LLLCheck:
    p: float
    D: int
    satisfied: bool

    def as_dict(self) -> dict:
        return {"p": self.p, "D": self.D, "satisfied": self.satisfied}


def lll_condition(p: float, D: int) -> LLLCheck:
    """Symmetric local lemma condition e*p*(D+1) <= 1.

    Compared as p*(D+1) <= 1/e in exact rational arithmetic on the floats,
    so the boundary p = 1/(2e), D = 1 is accepted.
    """
    if not 0 <= p <= 1 or D < 0:
        raise ValueError("need 0 <= p <= 1 and D >= 0")
    ok = Fraction(p) * (D + 1) <= Fraction(1 / math.e)
    return LLLCheck(p, D, ok)


def _finish(family: GraphFamily, sigma: dict[int, int], stats: dict, t0: float,
            detail=None) -> SearchOutcome:
    stats["wall_time"] = time.perf_counter() - t0
    col = CooperativeColoring(sigma)
    if not verify_cooperative(family, col):
        raise AssertionError("solver produced an invalid cooperative coloring")
    return SearchOutcome(Status.SAT, col, stats, detail)


def _unknown(stats: dict, t0: float, detail=None) -> SearchOutcome:
    stats["wall_time"] = time.perf_counter() - t0
    return SearchOutcome(Status.UNKNOWN, None, stats, detail)


def _require_memberships(family: GraphFamily):
    for v, ix in family.memberships.items():
        if not ix:
            raise ValueError(f"vertex {v} belongs to no member graph")


def instance_lll_check(family: GraphFamily) -> LLLCheck:
    """Condition for the resampling events of ``lll_solve``: p = 1/l_min^2, D = 2*l_max*d_max."""
    sizes = [len(ix) for ix in family.memberships.values()]
    if not sizes:
        return lll_condition(0, 0)
    return lll_condition(1 / min(sizes) ** 2, 2 * max(sizes) * family.max_degree())


def lll_solve(family: GraphFamily, params: SolverParams = SolverParams()) -> SearchOutcome:
    _require_memberships(family)
    t0 = time.perf_counter()
    rng = random.Random(params.seed)
    mem = family.memberships
    adj = [g.adjacency for g in family.members]
    sigma = {v: rng.choice(mem[v]) for v in sorted(family.universal_vertices)}

    def bad_at(x: int):
        c = sigma[x]
        for w in adj[c - 1][x]:
            if sigma[w] == c:
                yield (x, w, c) if x < w else (w, x, c)

    violated = set()
    for v in sigma:
        violated.update(bad_at(v))
    stats = {"solver": "lll", "resamples": 0, "lll": instance_lll_check(family).as_dict()}
    while violated:
        if stats["resamples"] >= params.resample_cap:
            return _unknown(stats, t0)
        u, v, _ = min(violated)
        for x in (u, v):
            violated.difference_update(list(bad_at(x)))
        for x in (u, v):
            sigma[x] = rng.choice(mem[x])
        for x in (u, v):
            violated.update(bad_at(x))
        stats["resamples"] += 1
    return _finish(family, sigma, stats, t0)


def greedy_solve(family: GraphFamily, params: SolverParams | None = None) -> SearchOutcome:
    """Vertex-id order, lowest member index not already used by a neighbor in that member."""
    _require_memberships(family)
    t0 = time.perf_counter()
    sigma: dict[int, int] = {}
    for v in sorted(family.universal_vertices):
        for i in family.memberships[v]:
            if all(sigma.get(w) != i for w in family.member(i).adjacency[v]):
                sigma[v] = i
                break
        else:
            return _unknown({"solver": "greedy", "stuck_at": v}, t0)
    return _finish(family, sigma, {"solver": "greedy"}, t0)


def lowest_index_solve(family: GraphFamily, params: SolverParams | None = None) -> SearchOutcome:
    """Give every vertex its lowest membership; enough when all members are edgeless."""
    t0 = time.perf_counter()
    sigma = {v: ix[0] for v, ix in family.memberships.items() if ix}
    if len(sigma) != len(family.universal_vertices) or not verify_cooperative(family, CooperativeColoring(sigma)):
        return _unknown({"solver": "lowest-index"}, t0)
    return _finish(family, sigma, {"solver": "lowest-index"}, t0)


@dataclass
class PartitionState:
    """Bookkeeping of one partition-procedure run.

    ``inventories[u]`` is C_u for each heavy vertex u in U, ``phase1`` the
    colors those vertices took, ``available[v]`` the colors still free at
    each other vertex after the last scan.
    """

    splits: tuple[Split, ...]
    U: frozenset[int]
    inventories: dict[int, tuple[int, ...]] = field(default_factory=dict)
    phase1: dict[int, int] = field(default_factory=dict)
    available: dict[int, tuple[int, ...]] = field(default_factory=dict)
    b_memberships: Mapping[int, tuple[int, ...]] = field(default_factory=dict)


def _split_memberships(family: GraphFamily, splits):
    a_mem: dict[int, list[int]] = {v: [] for v in family.universal_vertices}
    b_mem: dict[int, list[int]] = {v: [] for v in family.universal_vertices}
    for i, s in enumerate(splits, start=1):
        for v in s.A:
            a_mem[v].append(i)
        for v in s.B:
            b_mem[v].append(i)
    return ({v: tuple(sorted(x)) for v, x in a_mem.items()},
            {v: tuple(sorted(x)) for v, x in b_mem.items()})


def _heavy(family: GraphFamily, b_mem, epsilon: float, a_size: int) -> frozenset[int]:
    mem = family.memberships
    return frozenset(v for v in family.universal_vertices
                     if len(b_mem[v]) > epsilon * (len(mem[v]) - a_size))


def star_partition_solve(family: GraphFamily, params: SolverParams = SolverParams()) -> SearchOutcome:
    """Two-phase inventory procedure on a family of star forests.

    Heavy vertices (more than epsilon*(l_v - 1) center memberships) take a
    random center color. Every other vertex takes its lowest leaf color whose
    center did not take that color; a vertex with none left triggers a
    resample of the heavy centers next to it. Inventories have size one.
    """
    t0 = time.perf_counter()
    for i, g in enumerate(family.members, start=1):
        if not is_star_forest(g):
            raise ValueError(f"member {i} is not a star forest")
    mem = family.memberships
    for v, ix in mem.items():
        if len(ix) < 2:
            raise ValueError(f"vertex {v} has {len(ix)} memberships; the star procedure needs >= 2")
    rng = random.Random(params.seed)
    splits = tuple(star_split(g) for g in family.members)
    a_mem, b_mem = _split_memberships(family, splits)
    U = _heavy(family, b_mem, params.epsilon, 1)
    state = PartitionState(splits, U, b_memberships=b_mem)

    # center[j][v]: the center adjacent to leaf v in member j (if that center is heavy)
    center: list[dict[int, int]] = []
    for g, s in zip(family.members, splits):
        c = {}
        for v in s.A:
            nb = g.adjacency[v] & s.B
            if nb:
                (u,) = nb
                if u in U:
                    c[v] = u
        center.append(c)
    leaves_of: dict[int, set[int]] = {u: set() for u in U}
    for c in center:
        for v, u in c.items():
            if v not in U:
                leaves_of[u].add(v)

    def draw(u: int):
        inv = tuple(rng.sample(b_mem[u], 1))
        state.inventories[u] = inv
        state.phase1[u] = inv[0]

    for u in sorted(U):
        draw(u)

    def scan(v: int) -> tuple[int, ...]:
        out = []
        for j in a_mem[v]:
            u = center[j - 1].get(v)
            if u is None or state.phase1[u] != j:
                out.append(j)
        return tuple(out)

    rest = sorted(family.universal_vertices - U)
    bad = set()
    for v in rest:
        state.available[v] = scan(v)
        if not state.available[v]:
            bad.add(v)
    stats = {"solver": "star-partition", "heavy": len(U), "resamples": 0,
             "center_resamples": 0, "epsilon": params.epsilon}
    while bad:
        v = min(bad)
        blockers = sorted({center[j - 1][v] for j in a_mem[v] if v in center[j - 1]})
        if not blockers:
            stats["stuck_at"] = v
            return _unknown(stats, t0, state)
        if stats["resamples"] >= params.resample_cap:
            return _unknown(stats, t0, state)
        affected = set()
        for u in blockers:
            draw(u)
            affected |= leaves_of[u]
        stats["resamples"] += 1
        stats["center_resamples"] += len(blockers)
        for w in affected:
            state.available[w] = scan(w)
            if state.available[w]:
                bad.discard(w)
            else:
                bad.add(w)
    sigma = dict(state.phase1)
    for v in rest:
        sigma[v] = state.available[v][0]
    return _finish(family, sigma, stats, t0, state)


SubSolver = Callable[[GraphFamily, SolverParams], SearchOutcome]
Splitter = Callable[[Graph], Split]


def _sub_family(family: GraphFamily, lists: Mapping[int, tuple[int, ...]]) -> GraphFamily:
    """Members restricted to the vertices listing them."""
    verts: list[set[int]] = [set() for _ in family.members]
    for v, ix in lists.items():
        for i in ix:
            verts[i - 1].add(v)
    members = tuple(g.induced(vs) for g, vs in zip(family.members, verts))
    return GraphFamily(frozenset(lists), members, family.names)


def partition_solve_generic(family: GraphFamily, splitter: Splitter,
                            sub_solver_A: SubSolver | None = None,
                            sub_solver_B: SubSolver | None = None,
                            params: SolverParams = SolverParams(),
                            a_list_size: int = 1) -> SearchOutcome:
    """Inventory procedure with a pluggable splitter and sub-solvers.

    Each member is split into (A_i, B_i). Heavy vertices (more than
    epsilon*(l_v - a_list_size) B-memberships) draw an inventory C_u of
    ``params.inventory_size`` B-colors and ``sub_solver_B`` colors them from
    their inventories. A color j stays available at a light vertex v in A_j
    unless a heavy G_j-neighbor took j. A light vertex with fewer than
    ``a_list_size`` available colors makes the heavy neighbors next to it
    resample; otherwise ``sub_solver_A`` colors the light vertices from their
    available colors. Sub-solvers default to ``lll_solve``.
    """
    t0 = time.perf_counter()
    _require_memberships(family)
    sub_solver_A = sub_solver_A or lll_solve
    sub_solver_B = sub_solver_B or lll_solve
    splits = []
    for i, g in enumerate(family.members, start=1):
        s = splitter(g)
        problems = split_violations(g, s)
        if problems:
            raise SplitError(f"splitter broke its contract on member {i}: " + "; ".join(problems))
        splits.append(s)
    splits = tuple(splits)
    rng = random.Random(params.seed)
    sub_rng = random.Random(f"{params.seed}/sub-solvers")
    a_mem, b_mem = _split_memberships(family, splits)
    U = _heavy(family, b_mem, params.epsilon, a_list_size)
    state = PartitionState(splits, U, b_memberships=b_mem)
    stats = {"solver": "partition", "heavy": len(U), "resamples": 0, "center_resamples": 0,
             "sub_failures": 0, "epsilon": params.epsilon}

    def sub_params():
        return replace(params, seed=sub_rng.getrandbits(63))

    rest = sorted(family.universal_vertices - U)
    if not U:
        out = sub_solver_A(_sub_family(family, a_mem), sub_params())
        if not out.is_sat:
            return _unknown(stats, t0, state)
        state.available = dict(a_mem)
        return _finish(family, dict(out.witness.assignment), stats, t0, state)

    def draw(u: int):
        size = min(params.inventory_size, len(b_mem[u]))
        state.inventories[u] = tuple(sorted(rng.sample(b_mem[u], size)))

    # heavy neighbors of each light vertex through members where it is an A-vertex
    heavy_nb: dict[int, list[tuple[int, int]]] = {}
    for v in rest:
        pairs = []
        for j in a_mem[v]:
            for u in family.member(j).adjacency[v] & splits[j - 1].B & U:
                pairs.append((j, u))
        heavy_nb[v] = pairs

    for u in sorted(U):
        draw(u)
    while True:
        out_b = sub_solver_B(_sub_family(family, state.inventories), sub_params())
        if not out_b.is_sat:
            stats["sub_failures"] += 1
            if stats["resamples"] >= params.resample_cap:
                return _unknown(stats, t0, state)
            for u in sorted(U):
                draw(u)
            stats["resamples"] += 1
            stats["center_resamples"] += len(U)
            continue
        state.phase1 = dict(out_b.witness.assignment)
        bad = []
        for v in rest:
            taken = {j for j, u in heavy_nb[v] if state.phase1[u] == j}
            state.available[v] = tuple(j for j in a_mem[v] if j not in taken)
            if len(state.available[v]) < a_list_size:
                bad.append(v)
        if bad:
            v = bad[0]
            blockers = sorted({u for _, u in heavy_nb[v]})
            if not blockers:
                stats["stuck_at"] = v
                return _unknown(stats, t0, state)
            if stats["resamples"] >= params.resample_cap:
                return _unknown(stats, t0, state)
            for u in blockers:
                draw(u)
            stats["resamples"] += 1
            stats["center_resamples"] += len(blockers)
            continue
        out_a = sub_solver_A(_sub_family(family, {v: state.available[v] for v in rest}), sub_params())
        if not out_a.is_sat:
            stats["sub_failures"] += 1
            if stats["resamples"] >= params.resample_cap:
                return _unknown(stats, t0, state)
            for u in sorted(U):
                draw(u)
            stats["resamples"] += 1
            stats["center_resamples"] += len(U)
            continue
        sigma = dict(state.phase1)
        sigma.update(out_a.witness.assignment)
        return _finish(family, sigma, stats, t0, state)


# ---------------------------------------------------------------------------
# generators

def sample_random_star_family(n: int, k: int, d: int, seed: int) -> GraphFamily:
    """k random star forests on vertices 0..n-1 with max degree <= d.

    Each forest walks a random permutation: the next unused vertex becomes a
    center and takes a uniform 1..d number of the following unused vertices
    as leaves.
    """
    if min(n, k, d) < 1:
        raise ValueError("n, k, d must be >= 1")
    rng = random.Random(seed)
    edge_lists = []
    for _ in range(k):
        perm = list(range(n))
        rng.shuffle(perm)
        edges = []
        pos = 0
        while pos < n:
            c = perm[pos]
            pos += 1
            size = rng.randint(1, d)
            edges.extend((c, x) for x in perm[pos:pos + size])
            pos += size
        edge_lists.append(edges)
    return GraphFamily.common(range(n), edge_lists)


def sample_random_family(n: int, k: int, p: float, seed: int, list_mode: bool = False) -> GraphFamily:
    """k Erdos-Renyi graphs G(n, p); in list mode each member keeps a random vertex subset."""
    rng = random.Random(seed)
    universe = range(n)
    members = []
    for _ in range(k):
        verts = [v for v in universe if not list_mode or rng.random() < 0.7]
        edges = [(u, v) for a, u in enumerate(verts) for v in verts[a + 1:] if rng.random() < p]
        members.append(Graph.build(verts, edges))
    if list_mode:
        # every vertex must belong to some member
        covered = frozenset().union(*(g.vertices for g in members))
        for v in universe:
            if v not in covered:
                i = rng.randrange(k)
                g = members[i]
                members[i] = Graph(g.vertices | {v}, g.edges)
    return GraphFamily(frozenset(universe), tuple(members))


def sample_random_double_star_family(n: int, k: int, d: int, seed: int) -> GraphFamily:
    """Forests of double stars (two adjacent centers with leaves), max degree <= d.

    Double stars contain no binary tree of height 2, yet their centers reach
    high degree, so degree-threshold splits have a nonempty B side.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    rng = random.Random(seed)
    edge_lists = []
    for _ in range(k):
        perm = list(range(n))
        rng.shuffle(perm)
        edges = []
        pos = 0
        while pos < n:
            a = perm[pos]
            pos += 1
            if pos < n and rng.random() < 0.7:
                b = perm[pos]
                pos += 1
                edges.append((a, b))
                for c in (a, b):
                    size = rng.randint(0, d - 1)
                    edges.extend((c, x) for x in perm[pos:pos + size])
                    pos += size
            else:
                size = rng.randint(1, d)
                edges.extend((a, x) for x in perm[pos:pos + size])
                pos += size
        edge_lists.append(edges)
    return GraphFamily.common(range(n), edge_lists)


SOLVERS: dict[str, Callable[..., SearchOutcome]] = {
    "greedy": greedy_solve,
    "lll": lll_solve,
    "star-partition": star_partition_solve,
}
