"""Exactly uniform sampling of proper colourings and the resampling experiment.

sample_uniform walks the vertices in index order; at each step the colour is
drawn with probability proportional to the exact number of completions, so the
chain-rule product telescopes to 1/|C| and the output is uniform with no
approximation.  resample_once redraws every vertex once against the current
colours of its neighbours; with |L(v)| >= deg(v)+1 the redraw set is never
empty and a uniform input stays uniform.

The four-step experiment, run at a vertex v on G' = g - v: (i) sample c
uniformly on G'; (ii) drop the colours of N(v) and mark the neighbours whose
remaining list is shorter than the threshold t_u (those keep their colour);
(iii) uncolour the rest of N(v); (iv) redraw the uncoloured set uniformly
among proper completions.  Exact-distribution twins of both experiments
propagate rationals over every randomness branch for small instances.

Randomness: numpy's Philox counter generator keyed by (seed, stream).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .bounds import BoundParams, neighbour_thresholds
from .counting import (CountBudget, DEFAULT_BUDGET, ListAssignment,
                       count_colourings, enumerate_colourings, expected_available)
from .errors import CapacityError, InputError, UncolourableError
from .graphs import Graph, induced_subgraph

__all__ = [
    "RandomSource",
    "sample_uniform",
    "chain_rule_probability",
    "resample_once",
    "avoidance_probability_bound",
    "ExperimentTrace",
    "four_step_experiment",
    "four_step_exact_distribution",
    "resample_exact_distribution",
    "DiagnosticsReport",
    "experiment_diagnostics",
]


@dataclass(frozen=True)
class RandomSource:
    """Counter-based generator with an explicit (seed, stream) identity.

    Same (seed, stream) means the same draws on any platform.  spawn(k) gives
    an independent stream under the same seed.
    """

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed & (2 ** 64 - 1), self.stream & (2 ** 64 - 1)],
                       dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))

    def spawn(self, stream: int) -> "RandomSource":
        return RandomSource(self.seed, stream)


def _draw_below(gen: np.random.Generator, total: int) -> int:
    """Uniform integer in [0, total), exact for arbitrary-size totals."""
    if total <= 0:
        raise InputError("cannot draw from an empty range")
    bits = total.bit_length()
    nbytes = (bits + 7) // 8
    shift = nbytes * 8 - bits
    while True:
        r = int.from_bytes(gen.bytes(nbytes), "little") >> shift
        if r < total:
            return r


@lru_cache(maxsize=1 << 14)
def _suffix_graph(g: Graph, start: int) -> Graph:
    sub, _ = induced_subgraph(g, range(start, g.n))
    return sub


@lru_cache(maxsize=1 << 16)
def _suffix_count(g: Graph, start: int, rows: tuple[tuple[int, ...], ...],
                  budget: CountBudget) -> int:
    """Count completions over vertices start..n-1 with the given reduced lists.

    Memoized: repeated sampling revisits a small set of (prefix, lists)
    states, so the chain-rule walk amortizes to dictionary lookups.
    """
    return count_colourings(_suffix_graph(g, start),
                            ListAssignment.from_lists(rows), budget=budget)


def _strip(g: Graph, v: int, colour: int,
           suffix: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
    """Reduced lists for vertices v+1..n-1 after v takes the given colour."""
    nb = g.adj[v]
    return tuple(
        tuple(x for x in row if x != colour) if nb >> (v + 1 + j) & 1 else row
        for j, row in enumerate(suffix[1:]))


def sample_uniform(g: Graph, lists: ListAssignment, rng: RandomSource | np.random.Generator,
                   *, budget: CountBudget = DEFAULT_BUDGET) -> tuple[int, ...]:
    """One exactly uniform proper colouring of g.

    Vertices are coloured in index order; each colour is drawn with
    probability (completions after the choice) / (completions before), so the
    product of the step probabilities telescopes to 1/|C(g)|.  Raises
    UncolourableError when no proper colouring exists.
    """
    gen = rng.generator() if isinstance(rng, RandomSource) else rng
    suffix = lists.lists
    total = _suffix_count(g, 0, suffix, budget)
    if total == 0:
        raise UncolourableError()
    out = []
    for v in range(g.n):
        r = _draw_below(gen, total)
        acc = 0
        for x in suffix[0]:
            nxt = _strip(g, v, x, suffix)
            w = _suffix_count(g, v + 1, nxt, budget)
            acc += w
            if r < acc:
                out.append(x)
                suffix = nxt
                total = w
                break
        else:
            raise AssertionError("weights failed to cover the draw")
    return tuple(out)


def chain_rule_probability(g: Graph, lists: ListAssignment,
                           colouring: Iterable[int], *,
                           budget: CountBudget = DEFAULT_BUDGET) -> Fraction:
    """The exact probability sample_uniform assigns to a given colouring.

    Equals 1/|C(g)| for every proper colouring (and 0 for improper ones).
    """
    col = tuple(colouring)
    if len(col) != g.n:
        raise InputError(f"expected {g.n} colours, got {len(col)}")
    suffix = lists.lists
    total = _suffix_count(g, 0, suffix, budget)
    if total == 0:
        raise UncolourableError()
    prob = Fraction(1)
    for v in range(g.n):
        if col[v] not in suffix[0]:
            return Fraction(0)
        nxt = _strip(g, v, col[v], suffix)
        w = _suffix_count(g, v + 1, nxt, budget)
        if w == 0:
            return Fraction(0)
        prob *= Fraction(w, total)
        suffix = nxt
        total = w
    return prob


def resample_once(g: Graph, lists: ListAssignment, colouring: Iterable[int],
                  rng: RandomSource | np.random.Generator) -> tuple[int, ...]:
    """Redraw every vertex once, in index order, uniformly from its list minus
    the current colours of its neighbours.

    Requires |L(v)| >= deg(v) + 1 for every v, which keeps every redraw set
    non-empty; a uniform input distribution is preserved.
    """
    gen = rng.generator() if isinstance(rng, RandomSource) else rng
    c = list(colouring)
    if len(c) != g.n:
        raise InputError(f"expected {g.n} colours, got {len(c)}")
    for v in range(g.n):
        if len(lists.lists[v]) < g.degree(v) + 1:
            raise InputError(
                f"resample_once needs |L(v)| >= deg(v)+1; vertex {v} has "
                f"{len(lists.lists[v])} colours for degree {g.degree(v)}")
    for v in range(g.n):
        used = {c[u] for u in g.neighbours(v)}
        free = [x for x in lists.lists[v] if x not in used]
        c[v] = free[_draw_below(gen, len(free))]
    return tuple(c)


def resample_exact_distribution(g: Graph, lists: ListAssignment,
                                start: Mapping[tuple[int, ...], Fraction],
                                ) -> dict[tuple[int, ...], Fraction]:
    """Push an input distribution through resample_once exactly."""
    for v in range(g.n):
        if len(lists.lists[v]) < g.degree(v) + 1:
            raise InputError(
                f"resample needs |L(v)| >= deg(v)+1; vertex {v} is short")
    dist = dict(start)
    for v in range(g.n):
        nxt: dict[tuple[int, ...], Fraction] = {}
        for col, p in dist.items():
            used = {col[u] for u in g.neighbours(v)}
            free = [x for x in lists.lists[v] if x not in used]
            share = p / len(free)
            for x in free:
                new = col[:v] + (x,) + col[v + 1:]
                nxt[new] = nxt.get(new, Fraction(0)) + share
        dist = nxt
    return dist


def avoidance_probability_bound(g: Graph, lists: ListAssignment) -> Fraction:
    """prod_v (1 - 1/(|L(v)| - deg(v))): the guaranteed lower bound on the
    probability that a uniform proper colouring avoids any one fixed colour.

    Requires |L(v)| >= deg(v) + 1 everywhere; a vertex with exactly deg+1
    colours contributes a zero factor (the bound degenerates, it does not
    error).
    """
    out = Fraction(1)
    for v in range(g.n):
        slack = len(lists.lists[v]) - g.degree(v)
        if slack < 1:
            raise InputError(
                f"avoidance bound needs |L(v)| >= deg(v)+1; vertex {v} has "
                f"slack {slack}")
        out *= Fraction(slack - 1, slack)
    return out


# ---------------------------------------------------------------------------
# the four-step experiment

@dataclass
class ExperimentTrace:
    """Everything one run of the four-step experiment touched."""

    seed: int
    stream: int
    vertex: int
    initial: tuple[int, ...] | None            # uniform colouring of g - v (g indexing)
    thresholds: dict[int, float]               # t_u per neighbour u
    marked: tuple[int, ...]                    # short-list neighbours, colour kept
    uncoloured: tuple[int, ...]                # X_0, redrawn in step (iv)
    final: tuple[int, ...] | None              # colouring of g - v after recolouring
    k_v: int                                   # |L(v) minus colours of short-list neighbours|
    ell_final: int                             # |L(v) minus final colours of N(v)|
    anomaly: str | None = None

    def to_json_line(self) -> str:
        payload = {
            "seed": self.seed,
            "stream": self.stream,
            "vertex": self.vertex,
            "marked": list(self.marked),
            "uncoloured": list(self.uncoloured),
            "thresholds": {str(u): t for u, t in sorted(self.thresholds.items())},
            "k_v": self.k_v,
            "ell_final": self.ell_final,
        }
        if self.anomaly:
            payload["anomaly"] = self.anomaly
        return json.dumps(payload, sort_keys=True)


def _split_neighbours(g: Graph, v: int, lists: ListAssignment,
                      colouring: Mapping[int, int],
                      thresholds: Mapping[int, float]) -> tuple[dict[int, int], list[int], list[int]]:
    """Per-neighbour list lengths after dropping the colours of N(v), then the
    (marked, uncoloured) split by threshold."""
    nb = g.neighbours(v)
    nb_set = set(nb)
    lengths: dict[int, int] = {}
    for u in nb:
        used = {colouring[w] for w in g.neighbours(u)
                if w != v and w not in nb_set and w in colouring}
        lengths[u] = len([x for x in lists.lists[u] if x not in used])
    marked = [u for u in nb if lengths[u] < thresholds[u]]
    uncoloured = [u for u in nb if lengths[u] >= thresholds[u]]
    return lengths, marked, uncoloured


def _k_v_observed(g: Graph, v: int, lists: ListAssignment,
                  colouring: Mapping[int, int], lengths: Mapping[int, int],
                  thresholds: Mapping[int, float]) -> int:
    dropped = {colouring[u] for u in g.neighbours(v) if lengths[u] <= thresholds[u]}
    return len([x for x in lists.lists[v] if x not in dropped])


def _resolve_thresholds(g: Graph, v: int, params: BoundParams | None,
                        thresholds: Mapping[int, float] | None) -> dict[int, float]:
    if thresholds is not None:
        missing = [u for u in g.neighbours(v) if u not in thresholds]
        if missing:
            raise InputError(f"no threshold given for neighbours {missing}")
        return {u: float(thresholds[u]) for u in g.neighbours(v)}
    if params is None:
        raise InputError("need either params or explicit thresholds")
    return neighbour_thresholds(g, v, params.rho)


def four_step_experiment(g: Graph, v: int, lists: ListAssignment,
                         params: BoundParams | None,
                         rng: RandomSource, *,
                         thresholds: Mapping[int, float] | None = None,
                         budget: CountBudget = DEFAULT_BUDGET) -> ExperimentTrace:
    """One run of the four-step resampling experiment at vertex v.

    Thresholds t_u default to (d_u + 1)(ln rho + 1) from params; an explicit
    mapping overrides them (0 everywhere redraws all of N(v), +inf everywhere
    redraws nothing).  The output colouring of g - v is again exactly uniform;
    the trace records the marked/uncoloured split, k(v) observed, and the
    final list length of v.
    """
    if not (0 <= v < g.n):
        raise InputError(f"vertex {v} outside range 0..{g.n - 1}")
    gen = rng.generator()
    thresholds = _resolve_thresholds(g, v, params, thresholds)
    rest = [x for x in range(g.n) if x != v]
    sub, imap = induced_subgraph(g, rest)
    sub_lists = lists.restrict(imap)
    back = {j: old for old, j in imap.items()}

    sample = sample_uniform(sub, sub_lists, gen, budget=budget)
    colouring = {back[j]: sample[j] for j in range(sub.n)}

    lengths, marked, uncoloured = _split_neighbours(g, v, lists, colouring, thresholds)
    k_v = _k_v_observed(g, v, lists, colouring, lengths, thresholds)

    final = dict(colouring)
    anomaly = None
    if uncoloured:
        xg, xmap = induced_subgraph(g, uncoloured)
        rows = []
        for old in sorted(uncoloured):
            used = {final[w] for w in g.neighbours(old)
                    if w != v and w not in xmap and w in final}
            rows.append(tuple(x for x in lists.lists[old] if x not in used))
        xlists = ListAssignment.from_lists(rows)
        try:
            redraw = sample_uniform(xg, xlists, gen, budget=budget)
        except UncolourableError:
            anomaly = "recolouring_infeasible"
            redraw = None
        if redraw is None:
            final = None
        else:
            xback = {j: old for old, j in xmap.items()}
            for j in range(xg.n):
                final[xback[j]] = redraw[j]

    if final is None:
        ell_final = -1
    else:
        used = {final[u] for u in g.neighbours(v)}
        ell_final = len([x for x in lists.lists[v] if x not in used])
    return ExperimentTrace(
        seed=rng.seed, stream=rng.stream, vertex=v,
        initial=tuple(colouring[x] for x in sorted(colouring)) if colouring else (),
        thresholds=thresholds,
        marked=tuple(sorted(marked)), uncoloured=tuple(sorted(uncoloured)),
        final=None if final is None else tuple(final[x] for x in sorted(final)),
        k_v=k_v, ell_final=ell_final, anomaly=anomaly)


def four_step_exact_distribution(g: Graph, v: int, lists: ListAssignment,
                                 params: BoundParams | None, *,
                                 thresholds: Mapping[int, float] | None = None,
                                 branch_budget: int = 10 ** 6,
                                 budget: CountBudget = DEFAULT_BUDGET,
                                 ) -> dict[tuple[int, ...], Fraction]:
    """The exact output distribution of the four-step experiment over all
    randomness branches, keyed by colourings of g - v in induced order."""
    if not (0 <= v < g.n):
        raise InputError(f"vertex {v} outside range 0..{g.n - 1}")
    thresholds = _resolve_thresholds(g, v, params, thresholds)
    rest = [x for x in range(g.n) if x != v]
    sub, imap = induced_subgraph(g, rest)
    sub_lists = lists.restrict(imap)
    back = {j: old for old, j in imap.items()}
    total = count_colourings(sub, sub_lists, budget=budget)
    if total == 0:
        raise UncolourableError()
    out: dict[tuple[int, ...], Fraction] = {}
    branches = 0
    base_p = Fraction(1, total)
    for sample in enumerate_colourings(sub, sub_lists, budget=budget):
        colouring = {back[j]: sample[j] for j in range(sub.n)}
        lengths, marked, uncoloured = _split_neighbours(g, v, lists, colouring, thresholds)
        if not uncoloured:
            key = tuple(colouring[x] for x in sorted(colouring))
            out[key] = out.get(key, Fraction(0)) + base_p
            branches += 1
            continue
        xg, xmap = induced_subgraph(g, uncoloured)
        rows = []
        for old in sorted(uncoloured):
            used = {colouring[w] for w in g.neighbours(old)
                    if w != v and w not in xmap and w in colouring}
            rows.append(tuple(x for x in lists.lists[old] if x not in used))
        xlists = ListAssignment.from_lists(rows)
        xback = {j: old for old, j in xmap.items()}
        redraws = list(enumerate_colourings(xg, xlists, budget=budget))
        if not redraws:
            raise UncolourableError("a step-(iv) state admits no recolouring")
        share = base_p / len(redraws)
        for redraw in redraws:
            branches += 1
            if branches > branch_budget:
                raise CapacityError("exact-distribution branch budget exhausted",
                                    budget=branch_budget)
            final = dict(colouring)
            for j in range(xg.n):
                final[xback[j]] = redraw[j]
            key = tuple(final[x] for x in sorted(final))
            out[key] = out.get(key, Fraction(0)) + share
    return out


# ---------------------------------------------------------------------------
# diagnostics

@dataclass
class DiagnosticsReport:
    """Observed experiment statistics next to their guaranteed sides.

    Exact mode carries rationals; Monte-Carlo mode carries means with standard
    errors over the trials.
    """

    vertex: int
    trials: int                            # 0 in exact mode
    exact: bool
    k_v_mean: float
    k_v_lower: float                       # k(v) - t deg(v) / ell
    ell_final_mean: float
    ell_lower: float                       # ell
    tail_frequencies: dict[int, float]     # per neighbour u
    tail_bounds: dict[int, float]          # t_u / ell
    double_sum_mean: float
    double_sum_upper: float                # (1 + 1/ln rho) deg(v)
    k_v_stderr: float = 0.0
    ell_final_stderr: float = 0.0
    double_sum_stderr: float = 0.0
    anomalies: int = 0
    exact_values: dict[str, Fraction] = field(default_factory=dict)
    traces: tuple[ExperimentTrace, ...] = ()


def _double_sum(g: Graph, v: int, lists: ListAssignment,
                colouring: Mapping[int, int], lengths: Mapping[int, int],
                thresholds: Mapping[int, float], d_u: Mapping[int, int]) -> Fraction:
    """sum over colours x in L(v) of sum over u in N_c(x) of
    1/(len_u - d_u - 1), where N_c(x) holds the long-list neighbours whose
    reduced list still contains x."""
    nb = g.neighbours(v)
    nb_set = set(nb)
    long_lists: dict[int, tuple[int, ...]] = {}
    for u in nb:
        if lengths[u] >= thresholds[u]:
            used = {colouring[w] for w in g.neighbours(u)
                    if w != v and w not in nb_set and w in colouring}
            long_lists[u] = tuple(x for x in lists.lists[u] if x not in used)
    total = Fraction(0)
    for x in lists.lists[v]:
        for u, row in long_lists.items():
            if x in row:
                total += Fraction(1, lengths[u] - d_u[u] - 1)
    return total


def experiment_diagnostics(g: Graph, v: int, lists: ListAssignment,
                           params: BoundParams, rng: RandomSource,
                           trials: int = 0, *, exact: bool = False,
                           thresholds: Mapping[int, float] | None = None,
                           keep_traces: bool = False,
                           budget: CountBudget = DEFAULT_BUDGET) -> DiagnosticsReport:
    """Monte-Carlo (trials > 0) or exact enumeration (exact=True) diagnostics
    of the four-step experiment at v."""
    if params.k is None:
        raise InputError("diagnostics need params built by thm1_params")
    thresholds = _resolve_thresholds(g, v, params, thresholds)
    nb = g.neighbours(v)
    nb_mask = g.adj[v]
    d_u = {u: (g.adj[u] & nb_mask).bit_count() for u in nb}
    deg_v = g.degree(v)
    ell = params.ell
    log_rho = params.log_rho
    k_v_lower = params.k[v] - params.t * deg_v / ell
    tail_bounds = {u: thresholds[u] / ell for u in nb}
    ds_upper = (1.0 + 1.0 / log_rho) * deg_v

    if exact:
        rest = [x for x in range(g.n) if x != v]
        sub, imap = induced_subgraph(g, rest)
        sub_lists = lists.restrict(imap)
        back = {j: old for old, j in imap.items()}
        total = count_colourings(sub, sub_lists, budget=budget)
        if total == 0:
            raise UncolourableError()
        k_sum = Fraction(0)
        ds_sum = Fraction(0)
        tail_counts = {u: 0 for u in nb}
        for sample in enumerate_colourings(sub, sub_lists, budget=budget):
            colouring = {back[j]: sample[j] for j in range(sub.n)}
            lengths, marked, uncoloured = _split_neighbours(
                g, v, lists, colouring, thresholds)
            k_sum += _k_v_observed(g, v, lists, colouring, lengths, thresholds)
            ds_sum += _double_sum(g, v, lists, colouring, lengths, thresholds, d_u)
            for u in nb:
                if lengths[u] <= thresholds[u]:
                    tail_counts[u] += 1
        k_mean = k_sum / total
        ds_mean = ds_sum / total
        ell_mean = expected_available(g, lists, v, budget=budget)
        return DiagnosticsReport(
            vertex=v, trials=0, exact=True,
            k_v_mean=float(k_mean), k_v_lower=k_v_lower,
            ell_final_mean=float(ell_mean), ell_lower=ell,
            tail_frequencies={u: tail_counts[u] / total for u in nb},
            tail_bounds=tail_bounds,
            double_sum_mean=float(ds_mean), double_sum_upper=ds_upper,
            exact_values={
                "k_v_mean": k_mean,
                "ell_final_mean": ell_mean,
                "double_sum_mean": ds_mean,
                **{f"tail_{u}": Fraction(tail_counts[u], total) for u in nb},
            })

    if trials <= 0:
        raise InputError("trials must be positive in Monte-Carlo mode")
    k_vals: list[float] = []
    ell_vals: list[float] = []
    ds_vals: list[float] = []
    tail_hits = {u: 0 for u in nb}
    anomalies = 0
    kept: list[ExperimentTrace] = []
    for i in range(trials):
        trace = four_step_experiment(g, v, lists, params, rng.spawn(rng.stream + i),
                                     thresholds=thresholds, budget=budget)
        if keep_traces:
            kept.append(trace)
        if trace.anomaly:
            anomalies += 1
            continue
        k_vals.append(trace.k_v)
        ell_vals.append(trace.ell_final)
        colouring = {u: c for u, c in zip(sorted(set(range(g.n)) - {v}), trace.initial)}
        lengths, _, _ = _split_neighbours(g, v, lists, colouring, thresholds)
        ds_vals.append(float(_double_sum(g, v, lists, colouring, lengths,
                                         thresholds, d_u)))
        for u in nb:
            if lengths[u] <= thresholds[u]:
                tail_hits[u] += 1
    done = len(k_vals)
    if done == 0:
        raise UncolourableError("all trials anomalous")

    def mean_err(xs: list[float]) -> tuple[float, float]:
        m = sum(xs) / len(xs)
        if len(xs) < 2:
            return m, 0.0
        var = sum((x - m) ** 2 for x in xs) / (len(xs) - 1)
        return m, math.sqrt(var / len(xs))

    k_mean, k_err = mean_err(k_vals)
    e_mean, e_err = mean_err(ell_vals)
    d_mean, d_err = mean_err(ds_vals)
    return DiagnosticsReport(
        vertex=v, trials=trials, exact=False,
        k_v_mean=k_mean, k_v_lower=k_v_lower,
        ell_final_mean=e_mean, ell_lower=ell,
        tail_frequencies={u: tail_hits[u] / done for u in nb},
        tail_bounds=tail_bounds,
        double_sum_mean=d_mean, double_sum_upper=ds_upper,
        k_v_stderr=k_err, ell_final_stderr=e_err, double_sum_stderr=d_err,
        anomalies=anomalies, traces=tuple(kept))
