"""Instance files, colorings and DOT export.

An instance is a JSON document::

    {"version": 1, "mode": "common" | "list",
     "vertex_labels": ["a", "b", ...],
     "members": [{"name": "G1", "vertices": [...], "edges": [["a", "b"], ...]}, ...]}

Vertex ids are positions in ``vertex_labels``. Canonical output lists members
in index order and sorts vertices and edges by vertex id, so the same family
always serializes to the same bytes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

from .graphs import CooperativeColoring, EdgeColoredMultigraph, Graph, GraphFamily

FORMAT_VERSION = 1


class InstanceFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Instance:
    family: GraphFamily
    labels: tuple[str, ...]

    def label(self, v: int) -> str:
        return self.labels[v]

    @property
    def index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}


def default_labels(family: GraphFamily) -> tuple[str, ...]:
    n = max(family.universal_vertices) + 1
    return tuple(str(i) for i in range(n))


def instance_to_dict(family: GraphFamily, labels: Sequence[str] | None = None) -> dict[str, Any]:
    if labels is None:
        labels = default_labels(family)
    if sorted(family.universal_vertices) != list(range(len(labels))):
        raise InstanceFormatError("vertex ids must be exactly 0..len(labels)-1")
    members = []
    for i, g in enumerate(family.members, start=1):
        members.append({
            "name": family.member_name(i),
            "vertices": [labels[v] for v in sorted(g.vertices)],
            "edges": [[labels[u], labels[v]] for u, v in sorted(g.edges)],
        })
    return {
        "version": FORMAT_VERSION,
        "mode": "common" if family.is_common else "list",
        "vertex_labels": list(labels),
        "members": members,
    }


def dumps_instance(family: GraphFamily, labels: Sequence[str] | None = None) -> str:
    return json.dumps(instance_to_dict(family, labels), indent=1) + "\n"


def save_instance(path: str | Path, family: GraphFamily, labels: Sequence[str] | None = None) -> None:
    Path(path).write_text(dumps_instance(family, labels), encoding="utf-8")


def instance_from_dict(doc: Mapping[str, Any]) -> Instance:
    if doc.get("version") != FORMAT_VERSION:
        raise InstanceFormatError(f"unsupported version {doc.get('version')!r}")
    mode = doc.get("mode")
    if mode not in ("common", "list"):
        raise InstanceFormatError(f"mode must be 'common' or 'list', got {mode!r}")
    labels = doc.get("vertex_labels")
    if not isinstance(labels, list) or len(set(map(str, labels))) != len(labels):
        raise InstanceFormatError("vertex_labels must be a list of distinct labels")
    labels = tuple(str(x) for x in labels)
    ident = {lab: i for i, lab in enumerate(labels)}

    def vid(lab: Any) -> int:
        try:
            return ident[str(lab)]
        except KeyError:
            raise InstanceFormatError(f"unknown vertex label {lab!r}") from None

    raw_members = doc.get("members")
    if not isinstance(raw_members, list) or not raw_members:
        raise InstanceFormatError("members must be a nonempty list")
    members, names = [], []
    for n, m in enumerate(raw_members, start=1):
        names.append(str(m.get("name", f"G{n}")))
        if "vertices" in m:
            verts = frozenset(vid(x) for x in m["vertices"])
        elif mode == "common":
            verts = frozenset(range(len(labels)))
        else:
            raise InstanceFormatError(f"member {n} lacks a vertex list in list mode")
        edges = []
        for e in m.get("edges", []):
            if len(e) != 2:
                raise InstanceFormatError(f"member {n}: edge {e!r} is not a pair")
            edges.append((vid(e[0]), vid(e[1])))
        try:
            members.append(Graph.build(verts, edges))
        except ValueError as exc:
            raise InstanceFormatError(f"member {n}: {exc}") from None
    universe = frozenset(range(len(labels)))
    try:
        family = GraphFamily(universe, tuple(members), tuple(names))
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from None
    if mode == "common" and not family.is_common:
        raise InstanceFormatError("common mode requires every member to span all vertex_labels")
    return Instance(family, labels)


def loads_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"not valid JSON: {exc}") from None
    return instance_from_dict(doc)


def load_instance(path: str | Path) -> Instance:
    return loads_instance(Path(path).read_text(encoding="utf-8"))


def coloring_to_dict(coloring: CooperativeColoring, labels: Sequence[str]) -> dict[str, int]:
    return {labels[v]: coloring.assignment[v] for v in sorted(coloring.assignment)}


def coloring_from_dict(doc: Mapping[str, Any], instance: Instance) -> CooperativeColoring:
    ident = instance.index
    asg = {}
    for lab, i in doc.items():
        if lab not in ident:
            raise InstanceFormatError(f"coloring mentions unknown vertex {lab!r}")
        asg[ident[lab]] = int(i)
    return CooperativeColoring(asg)


def save_coloring(path: str | Path, coloring: CooperativeColoring, labels: Sequence[str]) -> None:
    Path(path).write_text(json.dumps(coloring_to_dict(coloring, labels), indent=1) + "\n",
                          encoding="utf-8")


def load_coloring(path: str | Path, instance: Instance) -> CooperativeColoring:
    return coloring_from_dict(json.loads(Path(path).read_text(encoding="utf-8")), instance)


def multigraph_to_dict(m: EdgeColoredMultigraph, labels: Sequence[str] | None = None) -> dict[str, Any]:
    """Edge-colored multigraph document (the adapted-coloring view)."""
    if labels is None:
        labels = [str(v) for v in range(max(m.vertices) + 1)]
    return {
        "version": FORMAT_VERSION,
        "kind": "edge-colored",
        "palette_size": m.palette_size,
        "vertex_labels": [labels[v] for v in sorted(m.vertices)],
        "edges": [[labels[u], labels[v], c] for u, v, c in m.colored_edges],
    }


# color names cycle for palettes larger than this list
_DOT_COLORS = ("red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan",
               "gold", "gray40")


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def family_to_dot(family: GraphFamily, labels: Sequence[str] | None = None,
                  coloring: CooperativeColoring | None = None, name: str = "family") -> str:
    """Union multigraph with one edge color per member; vertices filled by assigned index."""
    if labels is None:
        labels = default_labels(family)
    lines = [f"graph {_q(name)} {{", "  node [shape=circle, style=filled, fillcolor=white];"]
    for v in sorted(family.universal_vertices):
        attrs = ""
        if coloring is not None and v in coloring.assignment:
            i = coloring.assignment[v]
            attrs = f' [fillcolor={_DOT_COLORS[(i - 1) % len(_DOT_COLORS)]}, xlabel="{i}"]'
        lines.append(f"  {_q(labels[v])}{attrs};")
    for i, g in enumerate(family.members, start=1):
        col = _DOT_COLORS[(i - 1) % len(_DOT_COLORS)]
        for u, v in sorted(g.edges):
            lines.append(f'  {_q(labels[u])} -- {_q(labels[v])} [color={col}, label="{i}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
