"""Colored multigraphs: unary-labeled nodes plus directed labeled edge sets.

This is the common target of every structure encoding and the input of the
color-refinement engine.  Edge sets are stored as deduplicated numpy arrays
so large instances stay compact.
"""

from __future__ import annotations

from array import array

import numpy as np


class ColoredMultigraph:
    def __init__(self, n: int, labels: dict, edges: dict, node_names=None):
        """labels: node id -> frozenset of unary label names (sparse; missing
        means no labels).  edges: label name -> int array of shape (m, 2)."""
        self.n = n
        self.labels = {v: frozenset(ls) for v, ls in labels.items() if ls}
        self.edges = {}
        for name, rows in edges.items():
            a = np.asarray(rows, dtype=np.int64).reshape(-1, 2)
            if len(a):
                a = np.unique(a, axis=0)
            self.edges[name] = a
        self.node_names = node_names

    def node_labels(self, v) -> frozenset:
        return self.labels.get(v, frozenset())

    def edge_pairs(self, name):
        for u, v in self.edges.get(name, ()):
            yield int(u), int(v)

    def has_edge(self, name, u, v) -> bool:
        a = self.edges.get(name)
        if a is None or not len(a):
            return False
        i = np.searchsorted(a[:, 0] * (self.n + 1) + a[:, 1], u * (self.n + 1) + v)
        return i < len(a) and a[i, 0] == u and a[i, 1] == v

    def edge_count(self) -> int:
        return sum(len(a) for a in self.edges.values())

    def edge_labels_between(self):
        """Map (u, v) -> sorted tuple of labels of directed edges u -> v."""
        out: dict = {}
        for name in sorted(self.edges):
            for u, v in self.edge_pairs(name):
                out.setdefault((u, v), []).append(name)
        return {k: tuple(v) for k, v in out.items()}

    def gaifman_adjacency(self):
        """Undirected adjacency (ignoring loops) as a dict of sorted lists."""
        adj = {v: set() for v in range(self.n)}
        for a in self.edges.values():
            for u, v in a:
                if u != v:
                    adj[int(u)].add(int(v))
                    adj[int(v)].add(int(u))
        return {v: sorted(ws) for v, ws in adj.items()}

    def name_of(self, v):
        if self.node_names is not None:
            return self.node_names[v]
        return str(v)

    def to_dot(self, graph_name="G") -> str:
        lines = ["digraph %s {" % graph_name]
        for v in range(self.n):
            labs = sorted(self.node_labels(v))
            shape = "box" if labs else "circle"
            label = self.name_of(v)
            if labs:
                label += "\\n" + ",".join(labs)
            lines.append('  n%d [label="%s", shape=%s];' % (v, label, shape))
        by_pair: dict = {}
        for name in sorted(self.edges):
            for u, v in self.edge_pairs(name):
                by_pair.setdefault((u, v), []).append(name)
        for (u, v), names in sorted(by_pair.items()):
            lines.append('  n%d -> n%d [label="%s"];' % (u, v, ", ".join(names)))
        lines.append("}")
        return "\n".join(lines) + "\n"


class MultigraphBuilder:
    """Incremental construction with compact int buffers."""

    def __init__(self, n: int):
        self.n = n
        self.labels: dict = {}
        self._edges: dict = {}
        self.node_names = None

    def add_label(self, v, label):
        self.labels.setdefault(v, set()).add(label)

    def add_edge(self, label, u, v):
        buf = self._edges.get(label)
        if buf is None:
            buf = self._edges[label] = array("q")
        buf.append(u)
        buf.append(v)

    def build(self) -> ColoredMultigraph:
        edges = {
            name: np.frombuffer(buf, dtype=np.int64).reshape(-1, 2)
            for name, buf in self._edges.items()}
        return ColoredMultigraph(self.n, self.labels, edges,
                                 node_names=self.node_names)
