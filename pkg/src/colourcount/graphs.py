"""Simple undirected graphs and their sparsity measurements.

Vertices are 0..n-1.  Adjacency is stored as one Python-int bitmask per vertex,
which is word-parallel at any n, so the same representation serves both the
counting hot paths and arbitrary-size bookkeeping.  Graphs are immutable.

The sparsity profile collects the quantities the bound calculator consumes:
maximum degree Delta, the local density d (an exact rational), their ratio
rho = Delta/(d+1), per-vertex neighbourhood edge counts, and the geometric mean
degree D (defined only when every degree is >= 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, InputError

__all__ = [
    "Graph",
    "SparsityProfile",
    "induced_subgraph",
    "local_density",
    "degree_stats",
    "parse_graph",
    "format_graph",
    "load_graph",
    "save_graph",
]


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph on vertices 0..n-1."""

    n: int
    adj: tuple[int, ...]                 # bitmask of neighbours per vertex
    labels: tuple[str, ...] | None = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   labels: Sequence[str] | None = None) -> "Graph":
        if n < 0:
            raise InputError(f"vertex count must be >= 0, got {n}")
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) outside vertex range 0..{n - 1}")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        lab = None
        if labels is not None:
            if len(labels) != n:
                raise InputError(f"expected {n} labels, got {len(labels)}")
            lab = tuple(str(x) for x in labels)
        return cls(n, tuple(adj), lab)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(a.bit_count() for a in self.adj)

    @property
    def m(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbours(self, v: int) -> list[int]:
        return _bits(self.adj[v])

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            rest = self.adj[u] >> (u + 1)
            v = u + 1
            while rest:
                if rest & 1:
                    yield (u, v)
                rest >>= 1
                v += 1

    def max_degree(self) -> int:
        return max((a.bit_count() for a in self.adj), default=0)

    def is_triangle_free(self) -> bool:
        for u, v in self.edges():
            if self.adj[u] & self.adj[v]:
                return False
        return True

    def connected_components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], [s]
            while stack:
                x = stack.pop()
                for y in _bits(self.adj[x]):
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        stack.append(y)
            comps.append(sorted(comp))
        return comps


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Induced subgraph on the given vertices plus the stable old->new index map.

    Vertices are renumbered in increasing old-index order.  Duplicates or
    out-of-range members are rejected.
    """
    vs = sorted(set(vertices))
    if vs and not (0 <= vs[0] and vs[-1] < g.n):
        bad = vs[0] if vs[0] < 0 else vs[-1]
        raise InputError(f"vertex {bad} outside range 0..{g.n - 1}")
    index = {old: new for new, old in enumerate(vs)}
    adj = []
    for old in vs:
        mask = 0
        rest = g.adj[old]
        for y in _bits(rest):
            j = index.get(y)
            if j is not None:
                mask |= 1 << j
        adj.append(mask)
    labels = tuple(g.labels[old] for old in vs) if g.labels else None
    return Graph(len(vs), tuple(adj), labels), index


@dataclass(frozen=True)
class SparsityProfile:
    """Measured sparsity quantities of one graph.

    local_density is max over vertices of degree >= 1 of
    2 * |E(G[N(v)])| / deg(v), an exact rational (0 for edgeless graphs).
    rho = max_degree / (local_density + 1), also exact.
    geometric_mean_degree is None when some vertex has degree 0.
    """

    n: int
    degrees: tuple[int, ...]
    max_degree: int
    local_density: Fraction
    rho: Fraction
    neighbourhood_edge_counts: tuple[int, ...]
    geometric_mean_degree: float | None = field(default=None)

    def summary(self) -> dict:
        return {
            "n": self.n,
            "max_degree": self.max_degree,
            "local_density": str(self.local_density),
            "rho": str(self.rho),
            "geometric_mean_degree": self.geometric_mean_degree,
        }


def _neighbourhood_edges(g: Graph, v: int) -> int:
    nb = _bits(g.adj[v])
    mask = g.adj[v]
    total = 0
    for u in nb:
        total += (g.adj[u] & mask).bit_count()
    return total // 2


def local_density(g: Graph) -> SparsityProfile:
    """Measure the full sparsity profile of g."""
    degs = g.degrees
    delta = max(degs, default=0)
    counts = tuple(_neighbourhood_edges(g, v) for v in range(g.n))
    d = Fraction(0)
    for v in range(g.n):
        if degs[v] >= 1:
            d = max(d, Fraction(2 * counts[v], degs[v]))
    rho = Fraction(delta) / (d + 1)
    geo = None
    if g.n and all(x >= 1 for x in degs):
        geo = math.exp(sum(math.log(x) for x in degs) / g.n)
    return SparsityProfile(g.n, degs, delta, d, rho, counts, geo)


def degree_stats(g: Graph) -> tuple[tuple[int, ...], int, float]:
    """Per-vertex degrees, the maximum degree, and the geometric mean degree D.

    D is computed in log space.  A vertex of degree 0 makes D undefined and
    raises a DomainError naming the vertex.
    """
    degs = g.degrees
    for v, x in enumerate(degs):
        if x == 0:
            raise DomainError(f"geometric mean degree undefined: vertex {v} has degree 0")
    if g.n == 0:
        raise DomainError("geometric mean degree undefined for the empty graph")
    return degs, max(degs), math.exp(sum(math.log(x) for x in degs) / g.n)


# ---------------------------------------------------------------------------
# text format: "n m" header then one "u v" line per edge; '#' starts a comment;
# a bare edge list (no header) is accepted with n inferred as max index + 1.

def parse_graph(text: str) -> Graph:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InputError(f"line {lineno}: expected two integers, got {raw!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise InputError(f"line {lineno}: expected two integers, got {raw!r}") from None
        rows.append((a, b))
    if not rows:
        raise InputError("empty graph file")
    n, m = rows[0]
    body = rows[1:]
    if m == len(body) and n >= 0 and all(0 <= u < n and 0 <= v < n for u, v in body):
        return Graph.from_edges(n, body)
    # no consistent header: treat every row as an edge
    n = max(max(u, v) for u, v in rows) + 1
    return Graph.from_edges(n, rows)


def format_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def load_graph(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph(fh.read())


def save_graph(g: Graph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_graph(g))
