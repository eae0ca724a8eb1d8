"""Verification pipelines: measured instance in, report of checks out.

Each pipeline measures the sparsity profile itself and never trusts caller
targets.  Check anchors are the toolkit's stable labels (thm1, thm4, thm3,
cor2, lemma2, eq2, star, experiment); statuses follow one rule everywhere:
exact comparisons use rationals or integers outright, log-space comparisons
use a 1e-9 marginal band, Monte-Carlo comparisons allow 3 standard errors
before failing, and diagnostics that the headline does not depend on are
reported as informational rather than failing the run.
"""
from __future__ import annotations

import math
import time
from fractions import Fraction
from typing import Mapping, Sequence

from ._version import VERSION
from .bounds import (BoundParams, LogValue, check_thm1_hypotheses, cor2_bound,
                     thm1_params, thm3_bound, thm3_sharpness_ceiling,
                     thm4_bound, thm4_params, neighbour_thresholds)
from .counting import (CountBudget, DEFAULT_BUDGET, ListAssignment,
                       count_colourings, tail_probability, verify_star)
from .errors import CapacityError, HypothesisError, InputError
from .graphs import Graph, SparsityProfile, induced_subgraph, local_density
from .reports import Check, InstanceInfo, Status, TaggedValue, VerificationReport
from .sampling import (DiagnosticsReport, ExperimentTrace, RandomSource,
                       avoidance_probability_bound, experiment_diagnostics,
                       four_step_exact_distribution, four_step_experiment)

__all__ = [
    "verify_thm1",
    "verify_thm4",
    "check_lemma2",
    "check_markov",
    "run_experiment",
    "thm3_compare",
    "bounds_grid",
    "GRID_FIELDS",
]

_LOG_BAND = 1e-9

_STATUS_GE = {"greater": Status.PASS, "marginal": Status.MARGINAL,
              "less": Status.FAIL}
_STATUS_LE = {"less": Status.PASS, "marginal": Status.MARGINAL,
              "greater": Status.FAIL}


def _instance(g: Graph, source: str, seed: int | None) -> tuple[InstanceInfo, SparsityProfile]:
    profile = local_density(g)
    info = InstanceInfo(source=source, n=g.n, m=g.m, seed=seed,
                        profile=profile.summary())
    return info, profile


def _log_compare(count: int, rhs_log: float, table: Mapping[str, Status]) -> Status:
    cmp = LogValue.from_count(count).compare(LogValue.from_log(rhs_log), _LOG_BAND)
    return table[cmp]


def _int_compare_ge(lhs: int, rhs: int) -> Status:
    if lhs > rhs:
        return Status.PASS
    if lhs == rhs:
        return Status.MARGINAL
    return Status.FAIL


def _frac_compare(lhs: Fraction, rhs: Fraction, table=None) -> Status:
    table = table or {"greater": Status.PASS, "marginal": Status.MARGINAL,
                      "less": Status.FAIL}
    if lhs > rhs:
        return table["greater"]
    if lhs == rhs:
        return table["marginal"]
    return table["less"]


# ---------------------------------------------------------------------------
# the counting chain (thm1 / star)

def _hypothesis_checks(g: Graph, profile: SparsityProfile,
                       lists: ListAssignment | None, ell: float) -> tuple[list[Check], bool]:
    sizes = lists.sizes() if lists is not None else (0,) * g.n
    report = check_thm1_hypotheses(g, profile, sizes, ell)
    checks = [Check(name=f"hypothesis-{c.name}", anchor="thm1",
                    lhs=TaggedValue.of_text(c.lhs), rhs=TaggedValue.of_text(c.rhs),
                    comparison=c.comparison,
                    status=Status.PASS if c.passed else Status.FAIL,
                    note=c.note)
              for c in report.conditions]
    return checks, report.passed


def _star_checks(g: Graph, lists: ListAssignment, ell: float,
                 order: Sequence[int] | None, budget: CountBudget) -> list[Check]:
    started = time.perf_counter()
    star = verify_star(g, lists, ell, order, budget=budget, log_band=_LOG_BAND)
    elapsed = time.perf_counter() - started
    checks = []
    for p in star.prefixes:
        if p.previous == 0:
            rhs = TaggedValue.of_int(0)
        else:
            rhs = TaggedValue.of_log(math.log(p.previous) + math.log(ell))
        status = {"pass": Status.PASS, "marginal": Status.MARGINAL,
                  "fail": Status.FAIL}[p.status]
        checks.append(Check(
            name=f"star-prefix-{p.index}", anchor="star",
            lhs=TaggedValue.of_int(p.count), rhs=rhs, comparison=">=",
            status=status,
            note=f"prefix of {p.index} vertices, added vertex {p.vertex}"))
    if float(ell).is_integer():
        bound = int(ell) ** g.n
        final = Check(
            name="count-vs-ell-power-n", anchor="thm1",
            lhs=TaggedValue.of_int(star.final_count),
            rhs=TaggedValue.of_int(bound), comparison=">=",
            status=_int_compare_ge(star.final_count, bound),
            note="exact integer comparison", runtime_s=elapsed)
    else:
        final = Check(
            name="count-vs-ell-power-n", anchor="thm1",
            lhs=TaggedValue.of_int(star.final_count),
            rhs=TaggedValue.of_log(g.n * math.log(ell)), comparison=">=",
            status=_log_compare(star.final_count, g.n * math.log(ell), _STATUS_GE),
            note="log-space comparison", runtime_s=elapsed)
    checks.append(final)
    return checks


def verify_thm1(g: Graph, ell: float, lists: ListAssignment | None = None,
                order: Sequence[int] | None = None, *,
                budget: CountBudget = DEFAULT_BUDGET,
                source: str = "<memory>", seed: int | None = None) -> VerificationReport:
    """Hypothesis checks, the per-prefix star chain, and the ell^n count bound.

    With no lists given, uniform lists of size max ceil(k(v)) are built from
    the measured profile; that needs rho > 1, otherwise counting is skipped
    and only the (failed) hypothesis checks are reported.  Explicit lists are
    always verified, even when hypotheses fail.
    """
    if ell <= 0:
        raise InputError(f"ell must be positive, got {ell}")
    info, profile = _instance(g, source, seed)
    auto_note = ""
    if lists is None and profile.rho > 1:
        params = thm1_params(profile, ell)
        size = max(params.list_floor, default=0)
        lists = ListAssignment.uniform(g.n, size)
        auto_note = f"auto-built uniform lists of size {size}"
    checks, hyp_ok = _hypothesis_checks(g, profile, lists, ell)
    if lists is None:
        checks.append(Check(
            name="counting-skipped", anchor="thm1",
            lhs=TaggedValue.of_text("skipped"),
            rhs=TaggedValue.of_text("rho <= 1"), comparison="",
            status=Status.INFO,
            note="cannot build default lists: k(v) needs rho > 1"))
    else:
        star = _star_checks(g, lists, ell, order, budget)
        if auto_note:
            star[-1] = _with_note(star[-1], auto_note)
        checks.extend(star)
    return VerificationReport("verify-thm1", info, tuple(checks), VERSION)


def _with_note(check: Check, extra: str) -> Check:
    note = f"{check.note}; {extra}" if check.note else extra
    return Check(check.name, check.anchor, check.lhs, check.rhs,
                 check.comparison, check.status, note, check.runtime_s)


# ---------------------------------------------------------------------------
# the tight chain (thm4)

def verify_thm4(g: Graph, lists: ListAssignment | None = None,
                order: Sequence[int] | None = None, *,
                budget: CountBudget = DEFAULT_BUDGET,
                source: str = "<memory>", seed: int | None = None) -> VerificationReport:
    """The per-vertex q(v) chain and the (q/sqrt(D))^n headline bound.

    Default lists have per-vertex size ceil((1 + 1/ln rho) q(v)); the default
    order is by non-decreasing q(v), ties by index.  Chain steps are
    diagnostics: a step below its factor is reported informational, only the
    headline comparison gates the run.
    """
    info, profile = _instance(g, source, seed)
    try:
        params = thm4_params(profile)
    except HypothesisError as err:
        checks = [
            Check(name="hypothesis-rho", anchor="thm4",
                  lhs=TaggedValue.of_rational(profile.rho),
                  rhs=TaggedValue.of_int(6), comparison=">=",
                  status=Status.FAIL, note=str(err)),
            Check(name="counting-skipped", anchor="thm4",
                  lhs=TaggedValue.of_text("skipped"),
                  rhs=TaggedValue.of_text("hypothesis failure"), comparison="",
                  status=Status.INFO, note="")]
        return VerificationReport("verify-thm4", info, tuple(checks), VERSION)
    checks = [Check(
        name="hypothesis-rho", anchor="thm4",
        lhs=TaggedValue.of_rational(profile.rho), rhs=TaggedValue.of_int(6),
        comparison=">=", status=Status.PASS,
        note="rho = Delta/(d+1) >= 6, the same as d <= Delta/6 - 1")]
    if lists is None:
        lists = ListAssignment.from_lists(
            tuple(range(s)) for s in params.list_floor)
    short = [v for v in range(g.n) if len(lists.lists[v]) < params.list_floor[v]]
    checks.append(Check(
        name="hypothesis-list-sizes", anchor="thm4",
        lhs=TaggedValue.of_text("all |L(v)|" if not short
                                else f"|L({short[0]})| = {len(lists.lists[short[0]])}"),
        rhs=TaggedValue.of_text("ceil((1 + 1/ln rho) q(v))"
                                if not short
                                else str(params.list_floor[short[0]])),
        comparison=">=", status=Status.PASS if not short else Status.FAIL,
        note=f"{len(short)} vertices below the demand" if short else ""))
    if short:
        checks.append(Check(
            name="counting-skipped", anchor="thm4",
            lhs=TaggedValue.of_text("skipped"),
            rhs=TaggedValue.of_text("lists too short"), comparison="",
            status=Status.INFO, note=""))
        return VerificationReport("verify-thm4", info, tuple(checks), VERSION)

    if order is None:
        order = sorted(range(g.n), key=lambda v: (params.q[v], v))
        order_note = ""
    else:
        order = list(order)
        if sorted(order) != list(range(g.n)):
            raise InputError("order must be a permutation of all vertices")
        qs = [params.q[v] for v in order]
        order_note = "" if all(a <= b for a, b in zip(qs, qs[1:])) \
            else "order is not by non-decreasing q(v); chain factors still reported"

    started = time.perf_counter()
    factor_scale = 1.0 + 1.0 / params.log_rho
    prev = 1
    placed: list[int] = []
    for i, v in enumerate(order, 1):
        placed.append(v)
        sub, imap = induced_subgraph(g, placed)
        cnt = count_colourings(sub, lists.restrict(imap), budget=budget)
        deg_prefix = sum(1 for u in placed[:-1] if g.has_edge(v, u))
        qv = params.q[v]
        step_log = math.log(qv) - factor_scale * deg_prefix / qv
        if prev == 0:
            status = Status.INFO
            rhs = TaggedValue.of_int(0)
            note = f"vertex {v}: empty prefix count"
        else:
            rhs_log = math.log(prev) + step_log
            status = _log_compare(cnt, rhs_log, _STATUS_GE)
            if status is Status.FAIL:
                status = Status.INFO
            rhs = TaggedValue.of_log(rhs_log)
            note = (f"vertex {v}, prefix degree {deg_prefix}, "
                    f"step factor exp({step_log:.6f}); diagnostic only")
        checks.append(Check(name=f"chain-step-{i}", anchor="thm4",
                            lhs=TaggedValue.of_int(cnt), rhs=rhs,
                            comparison=">=", status=status, note=note))
        prev = cnt
    elapsed = time.perf_counter() - started
    headline = thm4_bound(params, profile.geometric_mean_degree, g.n)
    status = _log_compare(prev, headline.log, _STATUS_GE)
    note = "headline: count vs (q/sqrt(D))^n in log space"
    if order_note:
        note += "; " + order_note
    checks.append(Check(name="count-vs-headline", anchor="thm4",
                        lhs=TaggedValue.of_int(prev),
                        rhs=TaggedValue.of_log(headline.log), comparison=">=",
                        status=status, note=note, runtime_s=elapsed))
    return VerificationReport("verify-thm4", info, tuple(checks), VERSION)


# ---------------------------------------------------------------------------
# avoidance bound (lemma2) and the tail bound (eq2)

def check_lemma2(g: Graph, lists: ListAssignment,
                 colours: Sequence[int] | None = None, *,
                 budget: CountBudget = DEFAULT_BUDGET,
                 source: str = "<memory>", seed: int | None = None) -> VerificationReport:
    """Exact avoidance probability of each colour against the product bound.

    Requires |L(v)| >= deg(v) + 1 everywhere (which also guarantees at least
    one proper colouring, so the probability is well defined).
    """
    info, _ = _instance(g, source, seed)
    bound = avoidance_probability_bound(g, lists)
    total = count_colourings(g, lists, budget=budget)
    checks = []
    palette = list(colours) if colours is not None else list(range(lists.palette_size))
    for x in palette:
        cnt = count_colourings(g, lists.without_colour(x), budget=budget)
        exact = Fraction(cnt, total)
        checks.append(Check(
            name=f"avoid-colour-{x}", anchor="lemma2",
            lhs=TaggedValue.of_rational(exact),
            rhs=TaggedValue.of_rational(bound), comparison=">=",
            status=_frac_compare(exact, bound),
            note=f"{cnt} of {total} colourings avoid colour {x} everywhere"))
    return VerificationReport("check-lemma2", info, tuple(checks), VERSION)


def check_markov(g: Graph, lists: ListAssignment, ell: float,
                 v: int | None = None, *,
                 budget: CountBudget = DEFAULT_BUDGET,
                 source: str = "<memory>", seed: int | None = None) -> VerificationReport:
    """Exact tail probabilities Pr[available list of u <= t_u] on g - v, each
    against t_u / ell, next to the pair inequality that justifies it.

    v defaults to a maximum-degree vertex (ties by index).
    """
    if ell <= 0:
        raise InputError(f"ell must be positive, got {ell}")
    if g.n == 0:
        raise InputError("check_markov needs a non-empty graph")
    info, profile = _instance(g, source, seed)
    if v is None:
        v = max(range(g.n), key=lambda u: (g.degree(u), -u))
    if not (0 <= v < g.n):
        raise InputError(f"vertex {v} outside range 0..{g.n - 1}")
    thresholds = neighbour_thresholds(g, v, profile.rho)
    rest = [x for x in range(g.n) if x != v]
    sub, imap = induced_subgraph(g, rest)
    sub_lists = lists.restrict(imap)
    base = count_colourings(sub, sub_lists, budget=budget)
    checks = []
    for u in g.neighbours(v):
        rest2 = [x for x in rest if x != u]
        sub2, imap2 = induced_subgraph(g, rest2)
        cnt2 = count_colourings(sub2, lists.restrict(imap2), budget=budget)
        if cnt2 == 0:
            pair_status = Status.PASS if base > 0 else Status.MARGINAL
            rhs = TaggedValue.of_int(0)
        else:
            rhs_log = math.log(cnt2) + math.log(ell)
            pair_status = _log_compare(base, rhs_log, _STATUS_GE)
            rhs = TaggedValue.of_log(rhs_log)
        checks.append(Check(
            name=f"pair-star-{u}", anchor="star",
            lhs=TaggedValue.of_int(base), rhs=rhs, comparison=">=",
            status=pair_status,
            note=f"|C(g-{v})| vs ell * |C(g-{v}-{u})|; justifies the tail bound"))
        t_u = thresholds[u]
        p = tail_probability(sub, sub_lists, imap[u], t_u, budget=budget)
        rhs_val = t_u / ell
        if p == 0:
            tail_status = Status.PASS if rhs_val >= 0 else Status.FAIL
        else:
            cmp = LogValue.from_real(float(p)).compare(
                LogValue.from_real(rhs_val), _LOG_BAND)
            tail_status = _STATUS_LE[cmp]
        checks.append(Check(
            name=f"tail-{u}", anchor="eq2",
            lhs=TaggedValue.of_rational(p), rhs=TaggedValue.of_real(rhs_val),
            comparison="<=", status=tail_status,
            note=f"threshold t_u = {t_u!r} on g-{v}"))
    return VerificationReport("check-markov", info, tuple(checks), VERSION)


# ---------------------------------------------------------------------------
# the four-step experiment

def _mc_lower(mean: float, bound: float, stderr: float) -> Status:
    if mean >= bound:
        return Status.PASS
    if mean >= bound - 3.0 * stderr:
        return Status.MARGINAL
    return Status.FAIL


def _mc_upper(mean: float, bound: float, stderr: float) -> Status:
    if mean <= bound:
        return Status.PASS
    if mean <= bound + 3.0 * stderr:
        return Status.MARGINAL
    return Status.FAIL


def _exact_lower(mean: float, bound: float) -> Status:
    if math.isclose(mean, bound, rel_tol=0.0, abs_tol=1e-12):
        return Status.MARGINAL
    return Status.PASS if mean >= bound else Status.FAIL


def _diag_checks(diag: DiagnosticsReport, deg_v: int, trials_done: int) -> list[Check]:
    checks = []
    mode = "exact enumeration" if diag.exact else f"{diag.trials} trials"
    if diag.exact:
        k_status = _exact_lower(diag.k_v_mean, diag.k_v_lower)
        e_status = _exact_lower(diag.ell_final_mean, diag.ell_lower)
        d_status = _exact_lower(diag.double_sum_upper, diag.double_sum_mean)
    else:
        k_status = _mc_lower(diag.k_v_mean, diag.k_v_lower, diag.k_v_stderr)
        e_status = _mc_lower(diag.ell_final_mean, diag.ell_lower,
                             diag.ell_final_stderr)
        d_status = _mc_upper(diag.double_sum_mean, diag.double_sum_upper,
                             diag.double_sum_stderr)
    checks.append(Check(
        name="expected-k", anchor="experiment",
        lhs=TaggedValue.of_real(diag.k_v_mean),
        rhs=TaggedValue.of_real(diag.k_v_lower), comparison=">=",
        status=k_status,
        note=f"E[k(v)] vs k(v) - t deg(v)/ell ({mode}, stderr {diag.k_v_stderr:.4g})"))
    checks.append(Check(
        name="expected-available", anchor="star",
        lhs=TaggedValue.of_real(diag.ell_final_mean),
        rhs=TaggedValue.of_real(diag.ell_lower), comparison=">=",
        status=e_status,
        note=f"E[available list of v] vs ell ({mode}, stderr {diag.ell_final_stderr:.4g})"))
    for u in sorted(diag.tail_frequencies):
        freq = diag.tail_frequencies[u]
        bound = diag.tail_bounds[u]
        if diag.exact:
            status = {Status.PASS: Status.PASS, Status.MARGINAL: Status.MARGINAL,
                      Status.FAIL: Status.FAIL}[_exact_lower(bound, freq)]
            stderr = 0.0
        else:
            stderr = math.sqrt(max(freq * (1.0 - freq), 0.0) / max(trials_done, 1))
            status = _mc_upper(freq, bound, stderr)
        checks.append(Check(
            name=f"tail-frequency-{u}", anchor="eq2",
            lhs=TaggedValue.of_real(freq), rhs=TaggedValue.of_real(bound),
            comparison="<=", status=status,
            note=f"frequency of short list at {u} vs t_u/ell ({mode})"))
    checks.append(Check(
        name="double-sum", anchor="experiment",
        lhs=TaggedValue.of_real(diag.double_sum_mean),
        rhs=TaggedValue.of_real(diag.double_sum_upper), comparison="<=",
        status=d_status,
        note=f"mean double sum vs (1 + 1/ln rho) deg(v) = "
             f"{diag.double_sum_upper:.6f} ({mode})"))
    checks.append(Check(
        name="anomalies", anchor="experiment",
        lhs=TaggedValue.of_int(diag.anomalies), rhs=TaggedValue.of_int(0),
        comparison="==", status=Status.INFO,
        note="runs whose recolouring step had no proper extension"))
    return checks


def run_experiment(g: Graph, v: int, lists: ListAssignment, *,
                   ell: float | None = None,
                   trials: int = 0, exact: bool = False, seed: int = 0,
                   thresholds: Mapping[int, float] | None = None,
                   keep_traces: bool = False,
                   budget: CountBudget = DEFAULT_BUDGET,
                   source: str = "<memory>",
                   instance_seed: int | None = None,
                   ) -> tuple[VerificationReport, list[ExperimentTrace]]:
    """The four-step experiment at v: exact-distribution uniformity check
    (exact=True) and/or Monte-Carlo diagnostics (trials > 0).

    ell enables the expectation diagnostics (it fixes k(v) and the reported
    bounds); without it, explicit thresholds are required and only the
    uniformity check and traces are produced.
    """
    info, profile = _instance(g, source, instance_seed)
    if not (0 <= v < g.n):
        raise InputError(f"vertex {v} outside range 0..{g.n - 1}")
    params: BoundParams | None = None
    if ell is not None:
        params = thm1_params(profile, ell)
    elif thresholds is None:
        raise InputError("need ell (for default thresholds) or explicit thresholds")
    checks: list[Check] = []
    traces: list[ExperimentTrace] = []
    rng = RandomSource(seed)

    if exact:
        try:
            dist = four_step_exact_distribution(
                g, v, lists, params, thresholds=thresholds, budget=budget)
        except CapacityError as err:
            raise CapacityError(
                f"{err}; use trials for Monte-Carlo mode instead of exact",
                budget=err.budget, needed=err.needed) from err
        share = Fraction(1, len(dist))
        tv = sum(abs(p - share) for p in dist.values()) / 2
        checks.append(Check(
            name="output-uniformity", anchor="experiment",
            lhs=TaggedValue.of_rational(tv), rhs=TaggedValue.of_rational(Fraction(0)),
            comparison="==",
            status=Status.PASS if tv == 0 else Status.FAIL,
            note=f"total variation from uniform over {len(dist)} colourings, "
                 "exact rationals"))
        if params is not None:
            diag = experiment_diagnostics(g, v, lists, params, rng, exact=True,
                                          thresholds=thresholds, budget=budget)
            checks.extend(_diag_checks(diag, g.degree(v), 0))

    if trials > 0:
        if params is not None:
            diag = experiment_diagnostics(g, v, lists, params, rng, trials,
                                          thresholds=thresholds,
                                          keep_traces=keep_traces, budget=budget)
            traces.extend(diag.traces)
            checks.extend(_diag_checks(diag, g.degree(v),
                                       trials - diag.anomalies))
        else:
            anomalies = 0
            for i in range(trials):
                trace = four_step_experiment(g, v, lists, None,
                                             rng.spawn(rng.stream + i),
                                             thresholds=thresholds, budget=budget)
                if keep_traces:
                    traces.append(trace)
                if trace.anomaly:
                    anomalies += 1
            checks.append(Check(
                name="anomalies", anchor="experiment",
                lhs=TaggedValue.of_int(anomalies), rhs=TaggedValue.of_int(0),
                comparison="==", status=Status.INFO,
                note="runs whose recolouring step had no proper extension"))
    if not checks:
        raise InputError("nothing to do: set exact=True or trials > 0")
    return (VerificationReport("experiment", info, tuple(checks), VERSION),
            traces)


# ---------------------------------------------------------------------------
# closed-form tables and the informational count comparison

def thm3_compare(g: Graph, q: int, *,
                 budget: CountBudget = DEFAULT_BUDGET,
                 source: str = "<memory>", seed: int | None = None) -> VerificationReport:
    """Exact count next to the (1-1/q)^m ((1-delta)q)^n bound and the
    regular-construction ceiling.  Informational by design: the bound's
    validity threshold on Delta is unspecified, so nothing passes or fails.
    """
    info, profile = _instance(g, source, seed)
    cnt = count_colourings(g, ListAssignment.uniform(g.n, q), budget=budget)
    bound = thm3_bound(g.n, g.m, profile.max_degree, q)
    checks = []
    if bound.vacuous:
        checks.append(Check(
            name="count-vs-bound", anchor="thm3",
            lhs=TaggedValue.of_int(cnt), rhs=TaggedValue.of_text("vacuous"),
            comparison=">=", status=Status.INFO,
            note=f"delta parameter {bound.delta_param!r} >= 1: bound says nothing"))
    else:
        checks.append(Check(
            name="count-vs-bound", anchor="thm3",
            lhs=TaggedValue.of_int(cnt),
            rhs=TaggedValue.of_log(bound.value.log), comparison=">=",
            status=Status.INFO,
            note=f"informational: count {'meets' if math.log(cnt) >= bound.value.log else 'misses'} "
                 f"the bound; validity threshold on Delta unspecified"))
    if g.n >= 2:
        ceiling = thm3_sharpness_ceiling(g.n, profile.max_degree, q)
        checks.append(Check(
            name="count-vs-ceiling", anchor="thm3-sharpness",
            lhs=TaggedValue.of_int(cnt),
            rhs=TaggedValue.of_log(ceiling.log), comparison="<=",
            status=Status.INFO,
            note="informational: the almost-sure ceiling for random regular "
                 "triangle-free graphs, stated only as n -> infinity"))
    return VerificationReport("thm3-compare", info, tuple(checks), VERSION)


GRID_FIELDS = [
    "delta", "f", "q", "n_ref",
    "cor2_list_size", "cor2_reference", "cor2_reason",
    "thm1_list_size", "thm1_reason",
    "thm4_list_size", "thm4_reason",
    "thm3_delta_param", "thm3_log_bound", "thm3_reason",
    "thm3_ceiling_log",
]


def _reference_profile(delta: int) -> SparsityProfile:
    # the measured profile of any Delta-regular triangle-free graph
    return SparsityProfile(
        n=2 * delta, degrees=(delta,) * (2 * delta), max_degree=delta,
        local_density=Fraction(0), rho=Fraction(delta),
        neighbourhood_edge_counts=(0,) * (2 * delta),
        geometric_mean_degree=float(delta))


def _grid_cell(delta: int, f: float, q: int, n_ref: int) -> dict:
    row: dict = {"delta": delta, "f": f, "q": q, "n_ref": n_ref}
    try:
        c2 = cor2_bound(delta, f)
        row["cor2_list_size"] = repr(c2.list_size)
        row["cor2_reference"] = repr(c2.asymptotic_ref)
        row["cor2_reason"] = ""
    except HypothesisError:
        row["cor2_list_size"] = None
        row["cor2_reference"] = None
        row["cor2_reason"] = "rho_le_1"
    except InputError:
        row["cor2_list_size"] = None
        row["cor2_reference"] = None
        row["cor2_reason"] = "f_out_of_range"
    if delta >= 2:
        profile = _reference_profile(delta)
        ell = math.log(delta) ** 3
        row["thm1_list_size"] = max(thm1_params(profile, ell).list_floor)
        row["thm1_reason"] = ""
    else:
        row["thm1_list_size"] = None
        row["thm1_reason"] = "rho_le_1"
    if delta >= 6:
        profile = _reference_profile(delta)
        row["thm4_list_size"] = max(thm4_params(profile).list_floor)
        row["thm4_reason"] = ""
    else:
        row["thm4_list_size"] = None
        row["thm4_reason"] = "rho_lt_6"
    t3 = thm3_bound(n_ref, delta * n_ref // 2, delta, q)
    row["thm3_delta_param"] = repr(t3.delta_param)
    if t3.vacuous:
        row["thm3_log_bound"] = None
        row["thm3_reason"] = "vacuous"
    else:
        row["thm3_log_bound"] = repr(t3.value.log)
        row["thm3_reason"] = ""
    row["thm3_ceiling_log"] = repr(thm3_sharpness_ceiling(n_ref, delta, q).log)
    return row


def bounds_grid(deltas: Sequence[int], fs: Sequence[float], qs: Sequence[int],
                n_ref: int = 1000, jobs: int = 1) -> list[dict]:
    """One row per (Delta, f, q) cell.  Hypothesis violations leave empty
    cells with a reason code instead of raising."""
    cells = [(d, f, q) for d in deltas for f in fs for q in qs]
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda c: _grid_cell(*c, n_ref), cells))
    else:
        rows = [_grid_cell(d, f, q, n_ref) for d, f, q in cells]
    return rows
