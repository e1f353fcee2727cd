"""Graphs underlying graph states and their adjacency-level transformation rules.

This module provides:

- ``Graph``: an undirected simple graph over integer vertex ids, with an
  optional proper coloring and optional coordinate labels.
- ``build_graph``: generators for the standard graphs used throughout
  (GHZ stars, lines, 2D/3D lattices, block graphs).
- ``local_complement``, ``merge_vertices``, ``connect_project``: the
  transformation rules used to combine graph states, expressed purely at
  the adjacency level.  Local Clifford byproducts are never tracked; the
  downstream pipeline only consumes statistics that are invariant under
  local Z corrections.
- ``color_graph``: deterministic proper coloring (bipartite BFS with a
  greedy fallback).
- ``to_text`` / ``from_text``: the newline-delimited exchange format used
  by the CLI and test fixtures.

All operations return new graphs; nothing here mutates shared state, so
evaluations are safe to run in parallel.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping


class GraphError(ValueError):
    """Raised for invalid vertices, malformed input or impossible requests."""


class ColoringError(GraphError):
    """Raised when no proper coloring exists within the allowed color count."""


class Graph:
    """Undirected simple graph with stable vertex ids.

    Vertex ids survive deletions (removing a vertex never renumbers the
    others), which keeps coordinate labels valid while covers are merged.

    Parameters
    ----------
    vertices : iterable of int
        Vertex ids.
    edges : iterable of (int, int)
        Undirected edges; self-loops are rejected.
    coloring : mapping vertex -> color id, optional
        Must be proper (no edge inside a color class).
    coords : mapping vertex -> tuple, optional
        Coordinate labels attached by the lattice generators.
    """

    __slots__ = ("_adj", "coloring", "coords")

    def __init__(
        self,
        vertices: Iterable[int] = (),
        edges: Iterable[tuple[int, int]] = (),
        coloring: Mapping[int, int] | None = None,
        coords: Mapping[int, tuple] | None = None,
    ):
        self._adj: dict[int, set[int]] = {int(v): set() for v in vertices}
        for a, b in edges:
            self._add_edge(int(a), int(b))
        self.coloring = dict(coloring) if coloring is not None else None
        self.coords = dict(coords) if coords is not None else None
        self._check_invariants()

    def _add_edge(self, a: int, b: int) -> None:
        if a == b:
            raise GraphError(f"self-edge at vertex {a}")
        for v in (a, b):
            if v not in self._adj:
                raise GraphError(f"edge ({a},{b}) references unknown vertex {v}")
        self._adj[a].add(b)
        self._adj[b].add(a)

    def _check_invariants(self) -> None:
        if self.coloring is not None:
            for v in self._adj:
                if v not in self.coloring:
                    raise GraphError(f"coloring missing vertex {v}")
            for a, nbrs in self._adj.items():
                for b in nbrs:
                    if self.coloring[a] == self.coloring[b]:
                        raise GraphError(
                            f"improper coloring: edge ({a},{b}) joins color "
                            f"{self.coloring[a]} with itself"
                        )

    # -- read access -------------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self._adj)

    def vertices(self) -> list[int]:
        return sorted(self._adj)

    def has_vertex(self, v: int) -> bool:
        return v in self._adj

    def neighbors(self, v: int) -> set[int]:
        self._require(v)
        return set(self._adj[v])

    def degree(self, v: int) -> int:
        self._require(v)
        return len(self._adj[v])

    def has_edge(self, a: int, b: int) -> bool:
        return a in self._adj and b in self._adj[a]

    def edges(self) -> list[tuple[int, int]]:
        return sorted(
            (a, b) for a, nbrs in self._adj.items() for b in nbrs if a < b
        )

    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self._adj.values()) // 2

    def _require(self, v: int) -> None:
        if v not in self._adj:
            raise GraphError(f"vertex {v} not in graph")

    # -- value semantics ----------------------------------------------------

    def copy(self) -> "Graph":
        g = Graph.__new__(Graph)
        g._adj = {v: set(nbrs) for v, nbrs in self._adj.items()}
        g.coloring = dict(self.coloring) if self.coloring is not None else None
        g.coords = dict(self.coords) if self.coords is not None else None
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj and self.coloring == other.coloring

    def __repr__(self) -> str:
        return f"Graph({self.vertex_count} vertices, {self.edge_count()} edges)"


# -- generators -------------------------------------------------------------


def _lattice(dims: tuple[int, ...], periodic: bool) -> Graph:
    for d in dims:
        if d < 1:
            raise GraphError(f"lattice dimension must be >= 1, got {d}")
    sites = sorted(itertools.product(*(range(d) for d in dims)))
    index = {s: i for i, s in enumerate(sites)}
    edges = []
    for s in sites:
        for axis in range(len(dims)):
            t = list(s)
            t[axis] += 1
            if t[axis] == dims[axis]:
                if not periodic or dims[axis] == 1:
                    continue
                t[axis] = 0
            t = tuple(t)
            if t == s:
                continue
            if index[s] < index[t] or periodic:
                edges.append((index[s], index[t]))
    g = Graph(range(len(sites)), set(tuple(sorted(e)) for e in edges))
    g.coords = {i: s for s, i in index.items()}
    return g


def build_graph(kind: str, **params) -> Graph:
    """Build one of the named standard graphs.

    Supported kinds:

    - ``"ghz-star"``: star on ``s`` vertices, vertex 0 is the center.
    - ``"line"``: path on ``n`` vertices.
    - ``"lattice2d"``: ``w`` x ``h`` grid, optional ``periodic`` wrap.
    - ``"lattice3d"``: ``w`` x ``h`` x ``d`` grid, optional ``periodic``.
    - ``"windmill"`` / ``"shifted-grid"``: a single building block of the
      given ``block_size`` and ``dimensionality`` (see :mod:`multinet.blocks`).

    Lattice and block vertices carry coordinate labels in ``coords``.
    """
    if kind == "ghz-star":
        s = int(params["s"])
        if s < 1:
            raise GraphError("star size must be >= 1")
        return Graph(range(s), [(0, i) for i in range(1, s)])
    if kind == "line":
        n = int(params["n"])
        if n < 1:
            raise GraphError("line length must be >= 1")
        return Graph(range(n), [(i, i + 1) for i in range(n - 1)])
    if kind == "lattice2d":
        return _lattice((int(params["w"]), int(params["h"])), bool(params.get("periodic", False)))
    if kind == "lattice3d":
        return _lattice(
            (int(params["w"]), int(params["h"]), int(params["d"])),
            bool(params.get("periodic", False)),
        )
    if kind in ("windmill", "shifted-grid"):
        from . import blocks

        return blocks.block_graph(
            kind,
            int(params.get("dimensionality", 2)),
            int(params.get("block_size", 1)),
        )
    raise GraphError(f"unknown graph generator {kind!r}")


# -- transformation rules ----------------------------------------------------


def local_complement(g: Graph, v: int) -> Graph:
    """Complement the edges inside the neighborhood of ``v``.

    Involutive at fixed ``v``.  The coloring is dropped because new edges may
    join vertices of equal color; coordinates are preserved.
    """
    g._require(v)
    out = g.copy()
    out.coloring = None
    nbrs = sorted(g._adj[v])
    for i, a in enumerate(nbrs):
        for b in nbrs[i + 1:]:
            if b in out._adj[a]:
                out._adj[a].discard(b)
                out._adj[b].discard(a)
            else:
                out._adj[a].add(b)
                out._adj[b].add(a)
    return out


def merge_vertices(g: Graph, a: int, b: int) -> Graph:
    """Identify vertices ``a`` and ``b``; the survivor is ``a``.

    The new neighborhood of ``a`` is the symmetric difference of the two
    old neighborhoods with ``a`` and ``b`` themselves removed.  Vertex ``b``
    is deleted; all other ids are unchanged.
    """
    g._require(a)
    g._require(b)
    if a == b:
        raise GraphError("cannot merge a vertex with itself")
    out = g.copy()
    out.coloring = None
    new_nbrs = (out._adj[a] ^ out._adj[b]) - {a, b}
    for u in out._adj[a] | out._adj[b]:
        out._adj[u].discard(a)
        out._adj[u].discard(b)
    del out._adj[b]
    if out.coords is not None:
        out.coords.pop(b, None)
    out._adj[a] = set(new_nbrs)
    for u in new_nbrs:
        out._adj[u].add(a)
    return out


def connect_project(g: Graph, a: int, b: int) -> Graph:
    """Cross-link the neighborhoods of two non-adjacent vertices, removing both.

    For every pair (i, j) with i in N(a) and j in N(b) (or vice versa) the
    edge i-j is toggled; then ``a`` and ``b`` are deleted.  Applied to the
    leaves of two stars this produces the graph of the combined star on the
    remaining vertices.
    """
    g._require(a)
    g._require(b)
    if a == b:
        raise GraphError("connect needs two distinct vertices")
    if g.has_edge(a, b):
        raise GraphError(f"connect requires non-adjacent vertices, {a}-{b} is an edge")
    out = g.copy()
    out.coloring = None
    na = out._adj[a] - {b}
    nb = out._adj[b] - {a}
    for i in sorted(na | nb):
        for j in sorted(na | nb):
            if j <= i:
                continue
            toggle = ((i in na) and (j in nb)) != ((i in nb) and (j in na))
            if toggle:
                if j in out._adj[i]:
                    out._adj[i].discard(j)
                    out._adj[j].discard(i)
                else:
                    out._adj[i].add(j)
                    out._adj[j].add(i)
    for v in (a, b):
        for u in out._adj[v]:
            out._adj[u].discard(v)
        del out._adj[v]
        if out.coords is not None:
            out.coords.pop(v, None)
    return out


# -- coloring ----------------------------------------------------------------


def color_graph(g: Graph, max_colors: int = 2) -> dict[int, int]:
    """Return a deterministic proper coloring with at most ``max_colors`` colors.

    Bipartite graphs are detected by BFS and always colored with the two
    colors {0, 1} (isolated vertices get color 0).  Otherwise a greedy pass
    in ascending vertex order assigns the lowest admissible color and fails
    loudly if it would exceed ``max_colors``.
    """
    if g.vertex_count == 0:
        raise GraphError("cannot color an empty graph")
    coloring: dict[int, int] = {}
    bipartite = True
    for start in g.vertices():
        if start in coloring:
            continue
        coloring[start] = 0
        queue = [start]
        while queue and bipartite:
            v = queue.pop(0)
            for u in sorted(g._adj[v]):
                if u not in coloring:
                    coloring[u] = 1 - coloring[v]
                    queue.append(u)
                elif coloring[u] == coloring[v]:
                    bipartite = False
                    break
    if bipartite:
        return coloring
    if max_colors < 3:
        raise ColoringError(f"graph is not {max_colors}-colorable (odd cycle present)")
    coloring = {}
    for v in g.vertices():
        used = {coloring[u] for u in g._adj[v] if u in coloring}
        color = next(c for c in itertools.count() if c not in used)
        if color >= max_colors:
            raise ColoringError(f"greedy coloring needs more than {max_colors} colors")
        coloring[v] = color
    return coloring


# -- serialization ------------------------------------------------------------


def to_text(g: Graph) -> str:
    """Serialize to the newline-delimited exchange format.

    Vertices are relabeled densely to ``0..n-1`` in ascending id order, so
    graphs with deletion holes serialize cleanly; coordinates are not kept.
    """
    ids = {v: i for i, v in enumerate(g.vertices())}
    lines = [f"graph {g.vertex_count}"]
    lines += [f"e {ids[a]} {ids[b]}" for a, b in g.edges()]
    if g.coloring is not None:
        lines += [f"c {ids[v]} {g.coloring[v]}" for v in g.vertices()]
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Graph:
    """Parse the exchange format produced by :func:`to_text`."""
    n = None
    edges = []
    coloring: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "graph" and len(parts) == 2:
            if n is not None:
                raise GraphError(f"line {lineno}: duplicate header")
            n = int(parts[1])
        elif parts[0] == "e" and len(parts) == 3:
            edges.append((int(parts[1]), int(parts[2])))
        elif parts[0] == "c" and len(parts) == 3:
            coloring[int(parts[1])] = int(parts[2])
        else:
            raise GraphError(f"line {lineno}: cannot parse {raw!r}")
    if n is None:
        raise GraphError("missing 'graph <n>' header")
    for a, b in edges:
        if not (0 <= a < n and 0 <= b < n):
            raise GraphError(f"edge ({a},{b}) out of range for {n} vertices")
    return Graph(range(n), edges, coloring=coloring or None)
