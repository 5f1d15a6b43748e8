"""Recursive edge-colored graphs (G_t, phi_t) with no adapted coloring from {1..t}.

G_1 is a K_2 with its edge colored 1. G_t is built from t disjoint copies
H_1..H_t of G_{t-1}, where H_i is recolored by ``shift(i, .)``, plus an apex
joined to every vertex of H_i by an edge of color i. Each color class is a
star forest and no color is left for the apex, so the color classes form a
family of t star forests with no cooperative coloring.

Vertex numbering is canonical: copy H_i occupies ids (i-1)*V_{t-1} ..
i*V_{t-1}-1 in the numbering of G_{t-1}, and the apex comes last.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .graphs import EdgeColoredMultigraph, GraphFamily, adapted_to_family

DEFAULT_CAP = 8
STATS_LIMIT = 5000


@dataclass(frozen=True)
class ConstructionStats:
    t: int
    vertex_count: int
    max_mono_degree: int
    edge_count: int

    def as_dict(self) -> dict[str, int]:
        return {"t": self.t, "vertex_count": self.vertex_count,
                "max_mono_degree": self.max_mono_degree, "edge_count": self.edge_count}


@dataclass(frozen=True)
class LabeledConstruction:
    t: int
    multigraph: EdgeColoredMultigraph
    apex: int | None
    copy_map: Mapping[int, tuple[int, int]] = field(hash=False, repr=False)


def shift(i: int, x: int, t: int | None = None) -> int:
    """Shift function: x for x <= i-1, x+1 otherwise. Never returns i.

    With ``t`` given, checks 1 <= x <= t and 1 <= i <= t+1.
    """
    if x < 1 or i < 1:
        raise ValueError(f"shift({i}, {x}): arguments must be positive")
    if t is not None and (x > t or i > t + 1):
        raise ValueError(f"shift({i}, {x}) out of range for t={t}")
    return x if x <= i - 1 else x + 1


def construction_stats(t: int) -> ConstructionStats:
    """V_t, Delta_t and the edge count E_t by the recurrences.

    E_1 = 1 and E_t = t*E_{t-1} + t*V_{t-1}: t copies plus the apex edges.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    if t > STATS_LIMIT:
        raise OverflowError(f"t={t} exceeds the arithmetic limit {STATS_LIMIT}")
    v, delta, e = 2, 1, 1
    for s in range(2, t + 1):
        v, delta, e = s * v + 1, v, s * e + s * v
    return ConstructionStats(t, v, delta, e)


def vertex_ratio(t: int) -> Fraction:
    """V_t / t! exactly; equals sum_{k<=t} 1/k!, so it tends to e."""
    return Fraction(construction_stats(t).vertex_count, math.factorial(t))


def max_t_for_degree(d: int) -> int:
    """The t with Delta_t <= d < Delta_{t+1}."""
    if d < 1:
        raise ValueError("d must be >= 1")
    t = 1
    while construction_stats(t + 1).max_mono_degree <= d:
        t += 1
    return t


def _build_arrays(t: int) -> tuple[int, np.ndarray, np.ndarray, np.ndarray]:
    n = 2
    us, vs, cs = np.array([0]), np.array([1]), np.array([1])
    for s in range(2, t + 1):
        offs = np.arange(s) * n
        new_u = [us + off for off in offs]
        new_v = [vs + off for off in offs]
        new_c = [np.where(cs >= i, cs + 1, cs) for i in range(1, s + 1)]
        apex = s * n
        new_u.append(np.arange(s * n))
        new_v.append(np.full(s * n, apex))
        new_c.append(np.repeat(np.arange(1, s + 1), n))
        us, vs, cs = np.concatenate(new_u), np.concatenate(new_v), np.concatenate(new_c)
        n = s * n + 1
    return n, us, vs, cs


def build_construction(t: int, cap: int = DEFAULT_CAP) -> LabeledConstruction:
    if t < 1:
        raise ValueError("t must be >= 1")
    if t > cap:
        raise ValueError(f"t={t} exceeds the construction cap {cap} "
                         f"(V_t={construction_stats(t).vertex_count}); raise the cap explicitly")
    n, us, vs, cs = _build_arrays(t)
    edges = sorted(zip(us.tolist(), vs.tolist(), cs.tolist()))
    m = EdgeColoredMultigraph(frozenset(range(n)), tuple(edges), t)
    if t == 1:
        return LabeledConstruction(1, m, None, {})
    block = (n - 1) // t
    copy_map = {x: (x // block + 1, x % block) for x in range(n - 1)}
    return LabeledConstruction(t, m, n - 1, copy_map)


def copy_subgraph(c: LabeledConstruction, i: int) -> EdgeColoredMultigraph:
    """Copy H_i with its shifted coloring (colors drawn from {1..t} minus {i})."""
    return c.multigraph.induced(x for x, (j, _) in c.copy_map.items() if j == i)


def extract_star_family(c: LabeledConstruction) -> GraphFamily:
    """Member i carries the color-i edges on the full vertex set."""
    fam = adapted_to_family(c.multigraph, c.t)
    return GraphFamily(fam.universal_vertices, fam.members,
                       tuple(f"color{i}" for i in range(1, c.t + 1)))
