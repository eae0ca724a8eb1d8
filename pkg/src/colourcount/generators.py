"""Corpus generators: named graphs, triangle-free random graphs, random
regular triangle-free graphs, and the degree-regularization doubling.

Generators are best-effort toward their targets; every consumer re-measures
the sparsity profile of the output and trusts only the measured values.
Reproducibility: the same spec (including seed) always yields the same graph.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import GenerationError, InputError
from .graphs import Graph, SparsityProfile, local_density
from .sampling import RandomSource

__all__ = [
    "GeneratorSpec",
    "parse_spec",
    "format_spec",
    "generate",
    "named_graph",
    "triangle_free_gnp",
    "bipartite_random",
    "regular_triangle_free",
    "regularize",
]

KINDS = ("triangle_free_gnp", "bipartite_random", "regular_triangle_free",
         "named", "doubled_regularization")
ATTEMPT_BUDGET = 10 ** 4
REGULARIZE_MAX_ROUNDS = 10


@dataclass(frozen=True)
class GeneratorSpec:
    """Recipe for one corpus graph.  Flat key=value text on disk."""

    kind: str
    seed: int
    n: int | None = None
    delta: int | None = None
    p: float | None = None
    target_d: Fraction | None = None
    name: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown generator kind {self.kind!r}; "
                             f"expected one of {', '.join(KINDS)}")
        if self.p is not None and not (0.0 <= self.p <= 1.0):
            raise InputError(f"edge probability must lie in [0, 1], got {self.p}")
        if self.n is not None and self.n < 0:
            raise InputError(f"vertex count must be >= 0, got {self.n}")
        if self.target_d is not None and self.target_d < 0:
            raise InputError(f"target d must be >= 0, got {self.target_d}")


_SPEC_FIELDS = ("kind", "seed", "n", "delta", "p", "target_d", "name")


def parse_spec(text: str) -> GeneratorSpec:
    """Parse a flat key=value spec file; '#' starts a comment."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"line {lineno}: expected key=value, got {line!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _SPEC_FIELDS:
            raise InputError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise InputError(f"line {lineno}: duplicate key {key!r}")
        values[key] = val
    if "kind" not in values:
        raise InputError("spec is missing the kind")
    if "seed" not in values:
        raise InputError("spec is missing the seed")
    return GeneratorSpec(
        kind=values["kind"],
        seed=int(values["seed"]),
        n=int(values["n"]) if "n" in values else None,
        delta=int(values["delta"]) if "delta" in values else None,
        p=float(values["p"]) if "p" in values else None,
        target_d=Fraction(values["target_d"]) if "target_d" in values else None,
        name=values.get("name"))


def format_spec(spec: GeneratorSpec) -> str:
    lines = [f"kind={spec.kind}", f"seed={spec.seed}"]
    for key in ("n", "delta", "p", "target_d", "name"):
        val = getattr(spec, key)
        if val is not None:
            lines.append(f"{key}={val}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# named graphs

_PETERSEN_EDGES = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
                   (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
                   (0, 5), (1, 6), (2, 7), (3, 8), (4, 9)]


def named_graph(name: str) -> Graph:
    """Small standard graphs by name: petersen, cube, Kn, Ka,b, Cn, Pn."""
    key = name.strip().lower()
    if key == "petersen":
        return Graph.from_edges(10, _PETERSEN_EDGES)
    if key == "cube":
        return Graph.from_edges(8, [(u, u ^ 1) for u in range(0, 8, 2)]
                                + [(u, u ^ 2) for u in range(8) if u < u ^ 2]
                                + [(u, u ^ 4) for u in range(4)])
    match = re.fullmatch(r"k(\d+),(\d+)", key)
    if match:
        a, b = int(match.group(1)), int(match.group(2))
        return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])
    match = re.fullmatch(r"([kcp])(\d+)", key)
    if match:
        shape, n = match.group(1), int(match.group(2))
        if shape == "k":
            return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
        if shape == "c":
            if n < 3:
                raise InputError(f"a cycle needs >= 3 vertices, got {n}")
            return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])
        return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
    raise InputError(f"unknown named graph {name!r}")


# ---------------------------------------------------------------------------
# random generators

def _random_graph(n: int, p: float, gen: np.random.Generator) -> list[tuple[int, int]]:
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    keep = gen.random(len(pairs)) < p
    return [e for e, k in zip(pairs, keep) if k]


def _delete_triangles(n: int, edges: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """One ascending scan over triples (u, v, w); each triangle found loses its
    lexicographically-last edge (v, w).  Deletions never create triangles, so
    a single pass leaves the graph triangle-free."""
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    for u in range(n):
        for v in range(u + 1, n):
            if v not in adj[u]:
                continue
            for w in range(v + 1, n):
                if w in adj[u] and w in adj[v]:
                    adj[v].discard(w)
                    adj[w].discard(v)
    return [(u, v) for u in range(n) for v in adj[u] if u < v]


def triangle_free_gnp(n: int, p: float, rng: RandomSource) -> Graph:
    """G(n, p) made triangle-free by the deterministic deletion scan."""
    if n < 0:
        raise InputError(f"vertex count must be >= 0, got {n}")
    if not (0.0 <= p <= 1.0):
        raise InputError(f"edge probability must lie in [0, 1], got {p}")
    gen = rng.generator()
    g = Graph.from_edges(n, _delete_triangles(n, _random_graph(n, p, gen)))
    assert g.is_triangle_free()
    return g


def bipartite_random(n: int, p: float, rng: RandomSource) -> Graph:
    """Random bipartite graph with parts 0..ceil(n/2)-1 and the rest."""
    if n < 0:
        raise InputError(f"vertex count must be >= 0, got {n}")
    if not (0.0 <= p <= 1.0):
        raise InputError(f"edge probability must lie in [0, 1], got {p}")
    gen = rng.generator()
    a = (n + 1) // 2
    pairs = [(u, v) for u in range(a) for v in range(a, n)]
    keep = gen.random(len(pairs)) < p
    return Graph.from_edges(n, [e for e, k in zip(pairs, keep) if k])


def regular_triangle_free(n: int, delta: int, rng: RandomSource,
                          attempts: int = ATTEMPT_BUDGET) -> Graph:
    """Random Delta-regular triangle-free graph via configuration-model
    pairings rejected until simple and triangle-free."""
    if delta < 0:
        raise InputError(f"degree must be >= 0, got {delta}")
    if n <= delta:
        raise InputError(f"need n > Delta for a simple Delta-regular graph, "
                         f"got n={n}, Delta={delta}")
    if n * delta % 2:
        raise InputError(f"n * Delta must be even, got n={n}, Delta={delta}")
    gen = rng.generator()
    stubs = np.repeat(np.arange(n), delta)
    for _ in range(attempts):
        perm = gen.permutation(stubs)
        seen = set()
        ok = True
        for i in range(0, len(perm), 2):
            u, v = int(perm[i]), int(perm[i + 1])
            if u == v or (u, v) in seen or (v, u) in seen:
                ok = False
                break
            seen.add((u, v))
        if not ok:
            continue
        g = Graph.from_edges(n, list(seen))
        if g.is_triangle_free():
            assert all(d == delta for d in g.degrees)
            return g
    raise GenerationError(
        f"no simple triangle-free {delta}-regular graph on {n} vertices found "
        f"in {attempts} pairings")


def regularize(g: Graph, delta: int) -> tuple[Graph, tuple[int, ...]]:
    """Make g delta-regular by iterated doubling: while some vertex is
    deficient, take two disjoint copies and join each deficient vertex to its
    twin.  Returns (H, phi) with phi mapping each vertex of H to the vertex of
    g it copies.

    Each added twin is adjacent to none of a vertex's other neighbours, so for
    every v the number of edges inside H[N(v)] stays equal to that inside
    g[N(phi(v))].
    """
    if delta < g.max_degree():
        raise InputError(f"target degree {delta} is below the maximum degree "
                         f"{g.max_degree()}")
    h = g
    phi = list(range(g.n))
    for _ in range(REGULARIZE_MAX_ROUNDS):
        deficient = [v for v in range(h.n) if h.degree(v) < delta]
        if not deficient:
            return h, tuple(phi)
        edges = list(h.edges())
        edges += [(u + h.n, v + h.n) for u, v in edges]
        edges += [(v, v + h.n) for v in deficient]
        h = Graph.from_edges(2 * h.n, edges)
        phi = phi + phi
    if all(d == delta for d in h.degrees):
        return h, tuple(phi)
    raise GenerationError(
        f"not {delta}-regular after {REGULARIZE_MAX_ROUNDS} doubling rounds; "
        f"minimum degree reached {min(h.degrees)}")


def _densify(g: Graph, target_d: Fraction, gen: np.random.Generator,
             attempts: int = 2000) -> Graph:
    """Add random edges between vertices sharing a neighbour for as long as
    the measured local density stays <= target_d.

    Best-effort: stops when the attempt budget runs out; the target is never
    exceeded, and the measured value is what counts downstream.
    """
    edges = set(g.edges())
    adj = [set(g.neighbours(v)) for v in range(g.n)]
    misses = 0
    while misses < attempts:
        candidates = sorted(
            (u, w)
            for v in range(g.n) for u in adj[v] for w in adj[v]
            if u < w and w not in adj[u])
        if not candidates:
            break
        u, w = candidates[int(gen.integers(len(candidates)))]
        trial = Graph.from_edges(g.n, list(edges | {(u, w)}))
        if local_density(trial).local_density <= target_d:
            edges.add((u, w))
            adj[u].add(w)
            adj[w].add(u)
            misses = 0
        else:
            misses += 1
    return Graph.from_edges(g.n, list(edges))


def generate(spec: GeneratorSpec,
             rng: RandomSource | None = None) -> tuple[Graph, SparsityProfile]:
    """Build the graph a spec describes and measure its sparsity profile.

    The profile is measured on the actual output; targets in the spec are
    advisory.  Profiles with an isolated vertex report no geometric mean
    degree, so measurement never fails.
    """
    rng = rng if rng is not None else RandomSource(spec.seed)
    kind = spec.kind
    if kind == "named":
        if spec.name is None:
            raise InputError("kind=named needs name=")
        g = named_graph(spec.name)
    elif kind == "triangle_free_gnp":
        if spec.n is None or spec.p is None:
            raise InputError("kind=triangle_free_gnp needs n= and p=")
        g = triangle_free_gnp(spec.n, spec.p, rng)
        if spec.target_d is not None and spec.target_d > 0:
            g = _densify(g, spec.target_d, rng.spawn(rng.stream + 1).generator())
    elif kind == "bipartite_random":
        if spec.n is None or spec.p is None:
            raise InputError("kind=bipartite_random needs n= and p=")
        g = bipartite_random(spec.n, spec.p, rng)
    elif kind == "regular_triangle_free":
        if spec.n is None or spec.delta is None:
            raise InputError("kind=regular_triangle_free needs n= and delta=")
        g = regular_triangle_free(spec.n, spec.delta, rng)
    else:
        if spec.n is None or spec.p is None or spec.delta is None:
            raise InputError("kind=doubled_regularization needs n=, p= and delta=")
        base = triangle_free_gnp(spec.n, spec.p, rng)
        if base.max_degree() > spec.delta:
            raise InputError(
                f"base graph reached degree {base.max_degree()} > delta="
                f"{spec.delta}; lower p or raise delta")
        g, _ = regularize(base, spec.delta)
    return g, local_density(g)
