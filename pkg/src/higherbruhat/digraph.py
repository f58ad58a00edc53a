"""
Small directed-graph container with the structural queries the braid and
packet graphs need: acyclicity, sources/sinks, undirected diameter, DOT
export.  Node labels are arbitrary hashables.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field


class DisconnectedGraphError(ValueError):
    """Diameter requested on a disconnected graph; carries two separated nodes."""

    def __init__(self, a, b):
        super().__init__(f"graph is disconnected: no path between {a!r} and {b!r}")
        self.nodes = (a, b)


@dataclass(frozen=True)
class Digraph:
    nodes: tuple
    arcs: frozenset  # of (src, dst) pairs

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        arcs = frozenset(self.arcs)
        node_set = set(self.nodes)
        for a, b in arcs:
            if a not in node_set or b not in node_set:
                raise ValueError(f"arc ({a!r}, {b!r}) references a missing node")
        object.__setattr__(self, "arcs", arcs)

    def _adjacency(self) -> dict:
        adj = {v: [] for v in self.nodes}
        for a, b in self.arcs:
            adj[a].append(b)
        return adj

    def topological_order(self):
        """A topological order of the nodes, or None if the graph has a cycle."""
        order, state = [], {}
        adj = self._adjacency()
        for root in self.nodes:
            if root in state:
                continue
            stack = [(root, iter(adj[root]))]
            state[root] = "open"
            while stack:
                node, it = stack[-1]
                advanced = False
                for nxt in it:
                    if state.get(nxt) == "open":
                        return None
                    if nxt not in state:
                        state[nxt] = "open"
                        stack.append((nxt, iter(adj[nxt])))
                        advanced = True
                        break
                if not advanced:
                    state[node] = "done"
                    order.append(node)
                    stack.pop()
        order.reverse()
        return order

    def is_acyclic(self) -> bool:
        return self.topological_order() is not None

    def find_cycle(self):
        """A list of nodes forming a directed cycle, or None if acyclic."""
        adj = self._adjacency()
        state: dict = {}
        parent: dict = {}
        for root in self.nodes:
            if root in state:
                continue
            stack = [(root, iter(adj[root]))]
            state[root] = "open"
            while stack:
                node, it = stack[-1]
                advanced = False
                for nxt in it:
                    if state.get(nxt) == "open":
                        cycle = [node]
                        cur = node
                        while cur != nxt:
                            cur = parent[cur]
                            cycle.append(cur)
                        cycle.reverse()
                        return cycle
                    if nxt not in state:
                        state[nxt] = "open"
                        parent[nxt] = node
                        stack.append((nxt, iter(adj[nxt])))
                        advanced = True
                        break
                if not advanced:
                    state[node] = "done"
                    stack.pop()
        return None

    def sources(self):
        with_in = {b for _, b in self.arcs}
        return [v for v in self.nodes if v not in with_in]

    def sinks(self):
        with_out = {a for a, _ in self.arcs}
        return [v for v in self.nodes if v not in with_out]

    def undirected_diameter(self) -> int:
        """Diameter of the underlying undirected graph (all-pairs BFS).

        Raises DisconnectedGraphError naming two separated nodes if the
        underlying graph is not connected.
        """
        if not self.nodes:
            raise ValueError("diameter of the empty graph is undefined")
        und = {v: set() for v in self.nodes}
        for a, b in self.arcs:
            if a != b:
                und[a].add(b)
                und[b].add(a)
        best = 0
        for start in self.nodes:
            dist = {start: 0}
            queue = deque([start])
            while queue:
                v = queue.popleft()
                for u in und[v]:
                    if u not in dist:
                        dist[u] = dist[v] + 1
                        queue.append(u)
            if len(dist) < len(self.nodes):
                other = next(v for v in self.nodes if v not in dist)
                raise DisconnectedGraphError(start, other)
            best = max(best, max(dist.values()))
        return best


@dataclass(frozen=True)
class DigraphReport:
    acyclic: bool
    sources: tuple
    sinks: tuple
    undirected_diameter: int


def digraph_checks(g: Digraph) -> DigraphReport:
    """Acyclicity, source/sink lists, and undirected diameter in one record."""
    return DigraphReport(
        acyclic=g.is_acyclic(),
        sources=tuple(g.sources()),
        sinks=tuple(g.sinks()),
        undirected_diameter=g.undirected_diameter(),
    )


def to_dot(
    g: Digraph,
    name: str = "G",
    directed: bool = True,
    label_of=str,
    arc_attrs=None,
) -> str:
    """Render as DOT.  arc_attrs, when given, maps (src, dst) to an attribute
    string such as 'color=red' appended to that edge."""
    ids = {v: f"n{i}" for i, v in enumerate(g.nodes)}
    kind, dash = ("digraph", "->") if directed else ("graph", "--")
    lines = [f"{kind} {name} {{"]
    for v in g.nodes:
        lines.append(f'  {ids[v]} [label="{label_of(v)}"];')
    for a, b in sorted(g.arcs, key=lambda e: (str(e[0]), str(e[1]))):
        attrs = ""
        if arc_attrs is not None:
            extra = arc_attrs((a, b))
            if extra:
                attrs = f" [{extra}]"
        lines.append(f"  {ids[a]} {dash} {ids[b]}{attrs};")
    lines.append("}")
    return "\n".join(lines)
