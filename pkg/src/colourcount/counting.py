"""Exact counting of proper list colourings.

count_colourings splits the graph into connected components and dispatches per
component: forest DP for acyclic pieces, the subset-DP chromatic evaluation
when the lists are uniform, otherwise pruned backtracking over a greedy
minimum-fill order with bitmask candidate filtering.  All counts are exact
Python ints.  Budgets (search nodes, enumeration cap, subset-DP size) raise
CapacityError rather than truncating.

Derived operations: extension counts of a partial colouring, the expected
list-length ratio |C(G)| / |C(G - v)|, the prefix inequality chain behind the
star check, and the exact tail probability of a short list at one vertex.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from . import chromatic
from .bounds import LogValue
from .errors import CapacityError, InputError
from .graphs import Graph, induced_subgraph

__all__ = [
    "ListAssignment",
    "PartialColouring",
    "CountBudget",
    "available_list",
    "count_colourings",
    "chromatic_polynomial_eval",
    "count_extensions",
    "expected_available",
    "enumerate_colourings",
    "verify_star",
    "StarReport",
    "tail_probability",
    "parse_lists",
    "format_lists",
    "load_lists",
]

chromatic_polynomial_eval = chromatic.chromatic_polynomial_eval


@dataclass(frozen=True)
class ListAssignment:
    """One colour list per vertex; colours are dense ints 0..palette_size-1.

    uniform_size is set iff all lists are identical (the uniform fast path).
    """

    lists: tuple[tuple[int, ...], ...]
    palette_size: int
    uniform_size: int | None

    @classmethod
    def from_lists(cls, lists: Iterable[Iterable[int]]) -> "ListAssignment":
        rows = []
        for v, raw in enumerate(lists):
            given = tuple(int(c) for c in raw)
            row = tuple(sorted(set(given)))
            if len(row) != len(given):
                raise InputError(f"duplicate colour in list of vertex {v}")
            if row and row[0] < 0:
                raise InputError(f"negative colour in list of vertex {v}")
            rows.append(row)
        palette = max((r[-1] + 1 for r in rows if r), default=0)
        uniform = rows[0] if rows else ()
        size = len(uniform) if all(r == uniform for r in rows) else None
        return cls(tuple(rows), palette, size)

    @classmethod
    def uniform(cls, n: int, q: int) -> "ListAssignment":
        if q < 0:
            raise InputError(f"list size must be >= 0, got {q}")
        row = tuple(range(q))
        return cls(tuple(row for _ in range(n)), q, q)

    @property
    def n(self) -> int:
        return len(self.lists)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.lists)

    def masks(self) -> list[int]:
        return [_mask_of(r) for r in self.lists]

    def without_colour(self, colour: int) -> "ListAssignment":
        return ListAssignment.from_lists(
            tuple(c for c in row if c != colour) for row in self.lists)

    def restrict(self, index_map: Mapping[int, int]) -> "ListAssignment":
        """Lists for an induced subgraph, given its old->new index map."""
        pairs = sorted(index_map.items(), key=lambda kv: kv[1])
        return ListAssignment(tuple(self.lists[old] for old, _ in pairs),
                              self.palette_size,
                              self.uniform_size)


def _mask_of(colours: Iterable[int]) -> int:
    m = 0
    for c in colours:
        m |= 1 << c
    return m


@dataclass(frozen=True)
class PartialColouring:
    """An assignment of colours to a subset of vertices."""

    assignment: tuple[tuple[int, int], ...]       # sorted (vertex, colour) pairs

    @classmethod
    def of(cls, mapping: Mapping[int, int]) -> "PartialColouring":
        return cls(tuple(sorted((int(v), int(c)) for v, c in mapping.items())))

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(v for v, _ in self.assignment)

    def as_dict(self) -> dict[int, int]:
        return dict(self.assignment)

    def validate(self, g: Graph, lists: ListAssignment) -> None:
        c = self.as_dict()
        for v, x in c.items():
            if not (0 <= v < g.n):
                raise InputError(f"coloured vertex {v} outside range 0..{g.n - 1}")
            if x not in lists.lists[v]:
                raise InputError(f"colour {x} not in the list of vertex {v}")
        for v, x in c.items():
            for u in g.neighbours(v):
                if c.get(u) == x:
                    raise InputError(f"edge ({v}, {u}) is monochromatic in colour {x}")


@dataclass(frozen=True)
class CountBudget:
    """Resource limits for the counting engine."""

    nodes: int = 10 ** 9                # backtracking search nodes
    subset_vertices: int = chromatic.SUBSET_DP_MAX_VERTICES
    memory_bytes: int = chromatic.MEMORY_BUDGET_BYTES
    enumeration: int = 10 ** 6          # colourings yielded by enumerate_colourings


DEFAULT_BUDGET = CountBudget()


def available_list(g: Graph, lists: ListAssignment, c: PartialColouring, v: int) -> tuple[int, ...]:
    """L(v) minus the colours already used on coloured neighbours of v."""
    if not (0 <= v < g.n):
        raise InputError(f"vertex {v} outside range 0..{g.n - 1}")
    cd = c.as_dict()
    if v in cd:
        raise InputError(f"vertex {v} is already coloured")
    used = {cd[u] for u in g.neighbours(v) if u in cd}
    return tuple(x for x in lists.lists[v] if x not in used)


def _check_instance(g: Graph, lists: ListAssignment) -> None:
    if lists.n != g.n:
        raise InputError(f"graph has {g.n} vertices but {lists.n} lists given")


# ---------------------------------------------------------------------------
# engines

def _count_edgeless(lists: Sequence[tuple[int, ...]]) -> int:
    out = 1
    for row in lists:
        out *= len(row)
    return out


def _forest_order(n: int, adjl: list[list[int]]) -> tuple[list[int], list[int]]:
    parent = [-1] * n
    order = []
    seen = [False] * n
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        stack = [root]
        while stack:
            x = stack.pop()
            order.append(x)
            for y in adjl[x]:
                if not seen[y]:
                    seen[y] = True
                    parent[y] = x
                    stack.append(y)
    return order, parent


def _count_forest(g: Graph, lists: Sequence[tuple[int, ...]]) -> int:
    """Rooted DP, O(n * q) big-int operations via the complement trick."""
    n = g.n
    adjl = [g.neighbours(v) for v in range(n)]
    order, parent = _forest_order(n, adjl)
    ways: list[dict[int, int] | None] = [None] * n
    totals = [0] * n
    pending: list[list[int]] = [[] for _ in range(n)]
    result = 1
    for x in reversed(order):
        w: dict[int, int] = {}
        for colour in lists[x]:
            prod = 1
            for y in pending[x]:
                wy = ways[y]
                prod *= totals[y] - wy.get(colour, 0)  # type: ignore[union-attr]
                if not prod:
                    break
            w[colour] = prod
        t = sum(w.values())
        ways[x] = w
        totals[x] = t
        for y in pending[x]:
            ways[y] = None
        p = parent[x]
        if p >= 0:
            pending[p].append(x)
        else:
            result *= t
            if not result:
                return 0
    return result


def _min_fill_order(g: Graph, vertices: list[int]) -> list[int]:
    """Greedy minimum-fill elimination order; ties broken by smallest index."""
    work = {v: set(g.neighbours(v)) & set(vertices) for v in vertices}
    remaining = set(vertices)
    order = []
    while remaining:
        best, best_fill = None, None
        for v in sorted(remaining):
            nb = work[v] & remaining
            fill = 0
            nbl = sorted(nb)
            for i, a in enumerate(nbl):
                for b in nbl[i + 1:]:
                    if b not in work[a]:
                        fill += 1
            if best_fill is None or fill < best_fill:
                best, best_fill = v, fill
        nb = work[best] & remaining
        nbl = sorted(nb)
        for i, a in enumerate(nbl):
            for b in nbl[i + 1:]:
                work[a].add(b)
                work[b].add(a)
        order.append(best)
        remaining.discard(best)
    return order


class _NodeBudget:
    __slots__ = ("left", "total")

    def __init__(self, nodes: int):
        self.left = nodes
        self.total = nodes

    def spend(self, k: int = 1) -> None:
        self.left -= k
        if self.left < 0:
            raise CapacityError(
                f"backtracking node budget exhausted ({self.total} nodes)",
                budget=self.total)


def _count_backtrack(g: Graph, lists: Sequence[tuple[int, ...]],
                     vertices: list[int], budget: _NodeBudget) -> int:
    """Pruned DFS over a minimum-fill order with bitmask candidate filtering."""
    order = _min_fill_order(g, vertices)
    k = len(order)
    pos = {v: i for i, v in enumerate(order)}
    list_masks = [_mask_of(lists[v]) for v in order]
    later: list[list[int]] = [[] for _ in range(k)]
    for i, v in enumerate(order):
        for u in g.neighbours(v):
            j = pos.get(u)
            if j is not None and j > i:
                later[i].append(j)
    forbidden = [0] * k
    total = 0
    # each frame: (depth, untried colour mask, undo entries of the taken branch)
    stack: list[tuple[int, int, list[tuple[int, int]]]] = []
    depth = 0
    avail = list_masks[0] & ~forbidden[0]
    while True:
        budget.spend()
        if avail == 0:
            while True:
                if not stack:
                    return total
                depth, avail, undo = stack.pop()
                for j, prev in undo:
                    forbidden[j] = prev
                if avail:
                    break
            continue
        bit = avail & -avail
        avail ^= bit
        if depth == k - 1:
            # every remaining candidate bit at the last level is a completion
            total += 1 + avail.bit_count()
            budget.spend(avail.bit_count())
            avail = 0
            continue
        new_undo: list[tuple[int, int]] = []
        for j in later[depth]:
            prev = forbidden[j]
            if not prev & bit:
                forbidden[j] = prev | bit
                new_undo.append((j, prev))
        stack.append((depth, avail, new_undo))
        depth += 1
        avail = list_masks[depth] & ~forbidden[depth]


def _component_count(g: Graph, lists: ListAssignment, comp: list[int],
                     budget: CountBudget, method: str) -> int:
    sub, imap = induced_subgraph(g, comp)
    sub_lists = lists.restrict(imap)
    rows = sub_lists.lists
    if any(not r for r in rows):
        return 0
    if sub.m == 0:
        return _count_edgeless(rows)
    if method == "auto":
        if sub.m == sub.n - 1:          # connected with n-1 edges: a tree
            return _count_forest(sub, rows)
        if sub_lists.uniform_size is not None and sub.n <= budget.subset_vertices:
            try:
                return chromatic.chromatic_polynomial_eval(
                    sub, sub_lists.uniform_size,
                    max_vertices=budget.subset_vertices,
                    memory_budget=budget.memory_bytes)
            except CapacityError:
                pass
        return _count_backtrack(sub, rows, list(range(sub.n)), _NodeBudget(budget.nodes))
    if method == "forest":
        if sub.m != sub.n - 1:
            raise InputError("forest method requested on a component with a cycle")
        return _count_forest(sub, rows)
    if method == "chromatic":
        if sub_lists.uniform_size is None:
            raise InputError("chromatic method requires uniform lists")
        return chromatic.chromatic_polynomial_eval(
            sub, sub_lists.uniform_size,
            max_vertices=budget.subset_vertices, memory_budget=budget.memory_bytes)
    if method == "backtracking":
        return _count_backtrack(sub, rows, list(range(sub.n)), _NodeBudget(budget.nodes))
    raise InputError(f"unknown counting method {method!r}")


def count_colourings(g: Graph, lists: ListAssignment, *,
                     budget: CountBudget = DEFAULT_BUDGET,
                     method: str = "auto") -> int:
    """Exact number of proper colourings of g with one colour per vertex drawn
    from its list.  The count over a disconnected graph is the product over
    components.  method forces an engine ("forest", "chromatic",
    "backtracking") for cross-validation; "auto" dispatches.
    """
    _check_instance(g, lists)
    if g.n == 0:
        return 1
    total = 1
    for comp in g.connected_components():
        total *= _component_count(g, lists, comp, budget, method)
        if not total:
            return 0
    return total


def count_extensions(g: Graph, lists: ListAssignment, c: PartialColouring, *,
                     budget: CountBudget = DEFAULT_BUDGET) -> int:
    """Number of full proper colourings extending the partial colouring c.

    When dom(c) = V - {v} this equals the length of the reduced list of v.
    """
    _check_instance(g, lists)
    c.validate(g, lists)
    cd = c.as_dict()
    rest = [v for v in range(g.n) if v not in cd]
    if not rest:
        return 1
    sub, imap = induced_subgraph(g, rest)
    reduced = []
    for old in rest:
        used = {cd[u] for u in g.neighbours(old) if u in cd}
        reduced.append(tuple(x for x in lists.lists[old] if x not in used))
    return count_colourings(sub, ListAssignment.from_lists(reduced), budget=budget)


def expected_available(g: Graph, lists: ListAssignment, v: int, *,
                       budget: CountBudget = DEFAULT_BUDGET) -> Fraction:
    """|C(G)| / |C(G - v)| as an exact rational: the average, over uniform
    proper colourings of G - v, of the number of colours left for v."""
    _check_instance(g, lists)
    if not (0 <= v < g.n):
        raise InputError(f"vertex {v} outside range 0..{g.n - 1}")
    rest = [u for u in range(g.n) if u != v]
    sub, imap = induced_subgraph(g, rest)
    den = count_colourings(sub, lists.restrict(imap), budget=budget)
    if den == 0:
        raise InputError(f"C(G - {v}) is empty; the ratio is undefined")
    num = count_colourings(g, lists, budget=budget)
    return Fraction(num, den)


def enumerate_colourings(g: Graph, lists: ListAssignment, *,
                         budget: CountBudget = DEFAULT_BUDGET) -> Iterator[tuple[int, ...]]:
    """Yield every proper colouring as a tuple indexed by vertex.

    Intended for small instances; stops with CapacityError beyond the
    enumeration budget.
    """
    _check_instance(g, lists)
    n = g.n
    if n == 0:
        yield ()
        return
    rows = lists.lists
    if any(not r for r in rows):
        return
    order = _min_fill_order(g, list(range(n)))
    pos = {v: i for i, v in enumerate(order)}
    list_masks = [_mask_of(rows[v]) for v in order]
    later: list[list[int]] = [[] for _ in range(n)]
    for i, v in enumerate(order):
        for u in g.neighbours(v):
            j = pos.get(u)
            if j is not None and j > i:
                later[i].append(j)
    forbidden = [0] * n
    chosen = [0] * n
    yielded = 0
    stack: list[tuple[int, int, list[tuple[int, int]]]] = []
    depth = 0
    avail = list_masks[0] & ~forbidden[0]
    out = [0] * n
    while True:
        if avail == 0:
            while True:
                if not stack:
                    return
                depth, avail, undo = stack.pop()
                for j, prev in undo:
                    forbidden[j] = prev
                if avail:
                    break
            continue
        bit = avail & -avail
        avail ^= bit
        chosen[depth] = bit.bit_length() - 1
        if depth == n - 1:
            yielded += 1
            if yielded > budget.enumeration:
                raise CapacityError("colouring enumeration budget exhausted",
                                    budget=budget.enumeration)
            for i in range(n):
                out[order[i]] = chosen[i]
            yield tuple(out)
            continue
        new_undo: list[tuple[int, int]] = []
        for j in later[depth]:
            prev = forbidden[j]
            if not prev & bit:
                forbidden[j] = prev | bit
                new_undo.append((j, prev))
        stack.append((depth, avail, new_undo))
        depth += 1
        avail = list_masks[depth] & ~forbidden[depth]


# ---------------------------------------------------------------------------
# the star chain and the tail bound

@dataclass(frozen=True)
class PrefixCheck:
    index: int
    vertex: int
    count: int
    previous: int
    ratio: Fraction | None
    status: str                    # pass / fail / marginal


@dataclass(frozen=True)
class StarReport:
    """Prefix counts |C(H_i)| along a vertex order, each compared against
    ell * |C(H_{i-1})| in log space, plus the final |C(G)| vs ell^n check."""

    order: tuple[int, ...]
    ell: float
    prefixes: tuple[PrefixCheck, ...]
    final_count: int
    final_status: str
    log_band: float = 1e-9

    @property
    def passed(self) -> bool:
        return all(p.status != "fail" for p in self.prefixes) and self.final_status != "fail"

    def first_violation(self) -> PrefixCheck | None:
        for p in self.prefixes:
            if p.status == "fail":
                return p
        return None


def verify_star(g: Graph, lists: ListAssignment, ell: float,
                order: Sequence[int] | None = None, *,
                budget: CountBudget = DEFAULT_BUDGET,
                log_band: float = 1e-9) -> StarReport:
    """Check |C(H_i)| >= ell * |C(H_{i-1})| for every prefix H_i of the order
    (default: ascending degree, ties by index), then |C(G)| >= ell^n."""
    _check_instance(g, lists)
    if ell <= 0:
        raise InputError(f"ell must be positive, got {ell}")
    if order is None:
        order = sorted(range(g.n), key=lambda v: (g.degree(v), v))
    else:
        order = list(order)
        if sorted(order) != list(range(g.n)):
            raise InputError("order must be a permutation of all vertices")
    checks = []
    prev = 1
    for i in range(1, g.n + 1):
        sub, imap = induced_subgraph(g, order[:i])
        cnt = count_colourings(sub, lists.restrict(imap), budget=budget)
        lhs = LogValue.from_count(cnt)
        if prev == 0:
            status = "pass"                            # ell * 0 = 0 <= anything
            ratio = None
        else:
            rhs = LogValue.from_count(prev)
            cmp = lhs.compare(LogValue.from_log(rhs.log + math.log(ell)), log_band)
            status = {"greater": "pass", "marginal": "marginal", "less": "fail"}[cmp]
            ratio = Fraction(cnt, prev)
        checks.append(PrefixCheck(i, order[i - 1], cnt, prev, ratio, status))
        prev = cnt
    final = LogValue.from_count(prev).compare(LogValue.from_power(ell, g.n), log_band)
    final_status = {"greater": "pass", "marginal": "marginal", "less": "fail"}[final]
    return StarReport(tuple(order), ell, tuple(checks), prev, final_status, log_band)


def tail_probability(g: Graph, lists: ListAssignment, u: int, threshold: float, *,
                     budget: CountBudget = DEFAULT_BUDGET) -> Fraction:
    """Exact probability, under a uniform proper colouring c of g, that
    |L(u) - c(N(u))| <= threshold.

    The list length is determined by the colours on N(u) alone, so only the
    colourings of the induced neighbourhood are enumerated; each one is
    weighted by its exact extension count in g - u.  The answer is a ratio
    of two exact sums.
    """
    _check_instance(g, lists)
    if not (0 <= u < g.n):
        raise InputError(f"vertex {u} outside range 0..{g.n - 1}")
    rest = [x for x in range(g.n) if x != u]
    sub, imap = induced_subgraph(g, rest)
    sub_lists = lists.restrict(imap)
    nb = g.neighbours(u)
    nbg, nmap = induced_subgraph(g, nb)
    nb_lists = lists.restrict(nmap)
    mask_u = _mask_of(lists.lists[u])
    num = 0
    den = 0
    for x in enumerate_colourings(nbg, nb_lists, budget=budget):
        used = 0
        for w in nb:
            used |= 1 << x[nmap[w]]
        avail = (mask_u & ~used).bit_count()
        weight = count_extensions(
            sub, sub_lists, PartialColouring.of({imap[w]: x[nmap[w]] for w in nb}),
            budget=budget)
        den += avail * weight
        if avail <= threshold:
            num += avail * weight
    if den == 0:
        raise InputError("C(g) is empty; the tail probability is undefined")
    return Fraction(num, den)


# ---------------------------------------------------------------------------
# list files: "v: c1 c2 c3 ..." lines, or a single "uniform q" header

def parse_lists(text: str, n: int) -> ListAssignment:
    """Parse a list-assignment file for a graph on n vertices.

    Sparse colour names are renumbered to dense ints in increasing order.
    """
    rows: dict[int, list[int]] = {}
    uniform_q = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("uniform"):
            parts = line.split()
            if len(parts) != 2:
                raise InputError(f"line {lineno}: expected 'uniform q'")
            uniform_q = int(parts[1])
            continue
        if ":" not in line:
            raise InputError(f"line {lineno}: expected 'v: c1 c2 ...'")
        head, tail = line.split(":", 1)
        v = int(head.strip())
        if not (0 <= v < n):
            raise InputError(f"line {lineno}: vertex {v} outside range 0..{n - 1}")
        if v in rows:
            raise InputError(f"line {lineno}: duplicate list for vertex {v}")
        rows[v] = [int(tok) for tok in tail.split()]
    if uniform_q is not None:
        if rows:
            raise InputError("a file may contain either 'uniform q' or per-vertex lists")
        return ListAssignment.uniform(n, uniform_q)
    missing = [v for v in range(n) if v not in rows]
    if missing:
        raise InputError(f"no list given for vertices {missing}")
    seen = sorted(set(c for row in rows.values() for c in row))
    dense = {c: i for i, c in enumerate(seen)}
    return ListAssignment.from_lists(
        [dense[c] for c in rows[v]] for v in range(n))


def format_lists(lists: ListAssignment) -> str:
    q = lists.uniform_size
    if q is not None and (lists.n == 0 or lists.lists[0] == tuple(range(q))):
        return f"uniform {q}\n"
    return "".join(f"{v}: " + " ".join(map(str, row)) + "\n"
                   for v, row in enumerate(lists.lists))


def load_lists(path: str, n: int) -> ListAssignment:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_lists(fh.read(), n)
