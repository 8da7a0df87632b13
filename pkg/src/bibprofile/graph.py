"""Undirected weighted graphs and their byte-stable DOT/GraphML serialization."""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping
from xml.sax.saxutils import escape, quoteattr

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"
FORMATS = ("dot", "graphml")


@dataclass(frozen=True)
class Node:
    key: str
    label: str
    weight: float


@dataclass(frozen=True)
class Edge:
    a: str
    b: str
    weight: float


@dataclass(frozen=True)
class Graph:
    nodes: tuple[Node, ...] = ()
    edges: tuple[Edge, ...] = ()
    _weights: dict[frozenset[str], float] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        keys = [n.key for n in self.nodes]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate node keys")
        known = set(keys)
        pairs: dict[frozenset[str], float] = {}
        for e in self.edges:
            if e.a == e.b:
                raise ValueError(f"self-loop on {e.a!r}")
            if e.a not in known or e.b not in known:
                raise ValueError(f"edge {e.a!r}-{e.b!r} references an unknown node")
            if e.weight <= 0:
                raise ValueError(f"non-positive edge weight on {e.a!r}-{e.b!r}")
            pair = frozenset((e.a, e.b))
            if pair in pairs:
                raise ValueError(f"duplicate edge {e.a!r}-{e.b!r}")
            pairs[pair] = e.weight
        object.__setattr__(self, "_weights", pairs)

    def node(self, key: str) -> Node:
        return next(n for n in self.nodes if n.key == key)

    def weight(self, a: str, b: str) -> float:
        """Edge weight between two nodes, 0 when not connected."""
        return self._weights.get(frozenset((a, b)), 0.0)

    def summary(self) -> dict[str, int]:
        return {"nodes": len(self.nodes), "edges": len(self.edges)}


def cooccurrence_graph(
    groups: Iterable[Iterable[str]], labels: Mapping[str, str] | None = None
) -> Graph:
    """Node weight = number of groups containing the key; edge weight = groups containing both."""
    node_counts: Counter[str] = Counter()
    pair_counts: Counter[tuple[str, str]] = Counter()
    for group in groups:
        members = sorted(set(group))
        node_counts.update(members)
        pair_counts.update(combinations(members, 2))
    labels = labels or {}
    return Graph(
        nodes=tuple(Node(k, labels.get(k, k), float(node_counts[k])) for k in sorted(node_counts)),
        edges=tuple(Edge(a, b, float(w)) for (a, b), w in sorted(pair_counts.items())),
    )


def _fmt(weight: float) -> str:
    return str(int(weight)) if float(weight).is_integer() else repr(float(weight))


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _dot_unquote(text: str) -> str:
    return re.sub(r"\\(.)", lambda m: "\n" if m.group(1) == "n" else m.group(1), text[1:-1])


def _sorted(graph: Graph) -> tuple[list[Node], list[Edge]]:
    nodes = sorted(graph.nodes, key=lambda n: n.key)
    edges = sorted(
        (Edge(*sorted((e.a, e.b)), e.weight) for e in graph.edges), key=lambda e: (e.a, e.b)
    )
    return nodes, edges


def to_dot(graph: Graph, name: str = "G") -> str:
    nodes, edges = _sorted(graph)
    lines = [f"graph {_dot_quote(name)} {{"]
    for n in nodes:
        lines.append(f"  {_dot_quote(n.key)} [label={_dot_quote(n.label)}, weight={_fmt(n.weight)}];")
    for e in edges:
        lines.append(f"  {_dot_quote(e.a)} -- {_dot_quote(e.b)} [weight={_fmt(e.weight)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_graphml(graph: Graph, name: str = "G") -> str:
    nodes, edges = _sorted(graph)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<graphml xmlns="{GRAPHML_NS}">',
        '  <key id="label" for="node" attr.name="label" attr.type="string"/>',
        '  <key id="weight" for="node" attr.name="weight" attr.type="double"/>',
        '  <key id="eweight" for="edge" attr.name="weight" attr.type="double"/>',
        f"  <graph id={quoteattr(name)} edgedefault=\"undirected\">",
    ]
    for n in nodes:
        lines.append(
            f"    <node id={quoteattr(n.key)}>"
            f'<data key="label">{escape(n.label)}</data>'
            f'<data key="weight">{_fmt(n.weight)}</data></node>'
        )
    for e in edges:
        lines.append(
            f"    <edge source={quoteattr(e.a)} target={quoteattr(e.b)}>"
            f'<data key="eweight">{_fmt(e.weight)}</data></edge>'
        )
    lines += ["  </graph>", "</graphml>"]
    return "\n".join(lines) + "\n"


def export_graph(graph: Graph, fmt: str, name: str = "G") -> bytes:
    fmt = fmt.lower()
    if fmt == "dot":
        return to_dot(graph, name).encode("utf-8")
    if fmt == "graphml":
        return to_graphml(graph, name).encode("utf-8")
    raise ValueError(f"unsupported graph format {fmt!r}; expected one of {', '.join(FORMATS)}")


_Q = r'"(?:[^"\\]|\\.)*"'
_DOT_NODE = re.compile(rf"^\s*({_Q}) \[label=({_Q}), weight=([^\]]+)\];$")
_DOT_EDGE = re.compile(rf"^\s*({_Q}) -- ({_Q}) \[weight=([^\]]+)\];$")
_DOT_HEAD = re.compile(rf"^graph ({_Q}) \{{$")


def parse_graph(data: bytes, fmt: str) -> tuple[Graph, str]:
    """Read a graph written by :func:`export_graph`; returns ``(graph, name)``."""
    text = data.decode("utf-8")
    fmt = fmt.lower()
    if fmt == "dot":
        lines = text.splitlines()
        head = _DOT_HEAD.match(lines[0]) if lines else None
        if head is None or lines[-1] != "}":
            raise ValueError("not a graph written by export_graph")
        nodes, edges = [], []
        for line in lines[1:-1]:
            if m := _DOT_NODE.match(line):
                nodes.append(Node(_dot_unquote(m[1]), _dot_unquote(m[2]), float(m[3])))
            elif m := _DOT_EDGE.match(line):
                edges.append(Edge(_dot_unquote(m[1]), _dot_unquote(m[2]), float(m[3])))
            else:
                raise ValueError(f"unrecognized DOT line: {line!r}")
        return Graph(tuple(nodes), tuple(edges)), _dot_unquote(head[1])
    if fmt == "graphml":
        ns = {"g": GRAPHML_NS}
        root = ET.fromstring(text)
        g = root.find("g:graph", ns)
        if g is None:
            raise ValueError("GraphML document has no graph element")
        nodes, edges = [], []
        for el in g.findall("g:node", ns):
            data_ = {d.get("key"): d.text or "" for d in el.findall("g:data", ns)}
            nodes.append(Node(el.get("id", ""), data_.get("label", ""), float(data_.get("weight", 0))))
        for el in g.findall("g:edge", ns):
            data_ = {d.get("key"): d.text or "" for d in el.findall("g:data", ns)}
            edges.append(Edge(el.get("source", ""), el.get("target", ""), float(data_["eweight"])))
        return Graph(tuple(nodes), tuple(edges)), g.get("id", "G")
    raise ValueError(f"unsupported graph format {fmt!r}; expected one of {', '.join(FORMATS)}")
