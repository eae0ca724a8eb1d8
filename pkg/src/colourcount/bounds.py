"""Bound formulas: Lambert W, list-size demands, and log-space comparisons.

Everything here is closed-form arithmetic on a measured sparsity profile.  The
counting engine supplies exact counts; this module supplies the right-hand
sides they are compared against.  Check identifiers (thm1, thm4, cor2, thm3,
lemma2, eq2/star) are the toolkit's stable labels, used consistently by the
report types, the CLI and the service.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, HypothesisError, InputError
from .graphs import Graph, SparsityProfile

__all__ = [
    "lambert_w",
    "LogValue",
    "Condition",
    "HypothesisReport",
    "BoundParams",
    "thm1_params",
    "check_thm1_hypotheses",
    "neighbour_thresholds",
    "Cor2Bound",
    "cor2_bound",
    "Thm3Bound",
    "thm3_bound",
    "thm3_sharpness_ceiling",
    "thm4_params",
    "thm4_bound",
]

W_TOLERANCE = 1e-12
_MAX_HALLEY = 50


def lambert_w(z: float) -> float:
    """Principal branch of Lambert W on [0, inf).

    Halley iteration seeded at ln(1+z).  Iterates until the step stalls at
    machine precision (relative to w itself, so tiny arguments stay accurate),
    then verifies the residual |W e^W - z| <= 1e-12 * max(1, z).
    """
    if math.isnan(z) or z < 0.0:
        raise DomainError(f"lambert_w defined on [0, inf), got {z}")
    if z == 0.0:
        return 0.0
    w = math.log1p(z)
    for _ in range(_MAX_HALLEY):
        ew = math.exp(w)
        f = w * ew - z
        fp = ew * (w + 1.0)
        step = f / (fp - (w + 2.0) * f / (2.0 * w + 2.0))
        w -= step
        if abs(step) <= 1e-16 * abs(w):
            break
    if abs(w * math.exp(w) - z) <= W_TOLERANCE * max(1.0, z):
        return w
    raise ArithmeticError(f"lambert_w failed to converge for z={z}")


@dataclass(frozen=True)
class LogValue:
    """A non-negative real carried as its natural log, plus a zero flag.

    Counts become LogValue via from_count; bound sides via from_power or
    from_log.  compare() returns "less" / "greater" / "marginal", where
    marginal means the logs agree within the given band.
    """

    log: float
    is_zero: bool = False

    @classmethod
    def from_count(cls, value: int) -> "LogValue":
        if value < 0:
            raise InputError("counts are non-negative")
        if value == 0:
            return cls(float("-inf"), True)
        return cls(math.log(value))

    @classmethod
    def from_real(cls, x: float) -> "LogValue":
        if x < 0:
            raise InputError("LogValue represents non-negative reals")
        if x == 0:
            return cls(float("-inf"), True)
        return cls(math.log(x))

    @classmethod
    def from_power(cls, base: float, exponent: float) -> "LogValue":
        if base < 0:
            raise InputError("base must be non-negative")
        if base == 0:
            return cls(float("-inf"), True) if exponent > 0 else cls(0.0)
        return cls(exponent * math.log(base))

    @classmethod
    def from_log(cls, log: float) -> "LogValue":
        return cls(log)

    def to_float(self) -> float:
        return 0.0 if self.is_zero else math.exp(self.log)

    def compare(self, other: "LogValue", band: float = 1e-9) -> str:
        if self.is_zero and other.is_zero:
            return "marginal"
        if self.is_zero:
            return "less"
        if other.is_zero:
            return "greater"
        diff = self.log - other.log
        if abs(diff) <= band:
            return "marginal"
        return "greater" if diff > 0 else "less"


@dataclass(frozen=True)
class Condition:
    name: str
    lhs: str
    rhs: str
    comparison: str
    passed: bool
    note: str = ""


@dataclass(frozen=True)
class HypothesisReport:
    conditions: tuple[Condition, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def failed_names(self) -> list[str]:
        return [c.name for c in self.conditions if not c.passed]


@dataclass(frozen=True)
class BoundParams:
    """Per-instance bound parameters.

    mode "thm1": k(v) filled, list_floor = ceil(k(v)).
    mode "thm4": q(v) filled, list_floor = ceil((1 + 1/ln rho) * q(v)),
    q_geomean_log = mean of ln q(v).
    """

    mode: str
    rho: Fraction
    ell: float
    t: float
    k: tuple[float, ...] | None
    q: tuple[float, ...] | None
    list_floor: tuple[int, ...]
    q_geomean_log: float | None = None

    @property
    def log_rho(self) -> float:
        return math.log(self.rho)


def _require_rho_gt(rho: Fraction, floor: int, label: str) -> None:
    if rho <= floor:
        raise HypothesisError(
            f"{label} requires rho > {floor}; measured rho = {rho} "
            f"(= {float(rho):.6g})")


def _k_of(deg: int, ell: float, log_rho: float) -> float:
    # deg -> (1 + 2/ln rho) * deg / W(deg/ell); the deg=0 limit is ell
    factor = 1.0 + 2.0 / log_rho
    if deg == 0:
        return factor * ell
    return factor * deg / lambert_w(deg / ell)


def thm1_params(profile: SparsityProfile, ell: float) -> BoundParams:
    """k(v) per vertex and the uncolouring threshold scale t.

    Requires rho > 1 (ln rho > 0) and ell > 0.  t = (d+1)(ln rho + 1).
    """
    if ell <= 0:
        raise InputError(f"ell must be positive, got {ell}")
    _require_rho_gt(profile.rho, 1, "thm1_params")
    log_rho = math.log(profile.rho)
    k = tuple(_k_of(deg, ell, log_rho) for deg in profile.degrees)
    t = float(profile.local_density + 1) * (log_rho + 1.0)
    floors = tuple(math.ceil(x) for x in k)
    return BoundParams("thm1", profile.rho, ell, t, k, None, floors)


def neighbour_thresholds(g: Graph, v: int, rho: Fraction) -> dict[int, float]:
    """t_u = (d_u + 1)(ln rho + 1) for u in N(v), with d_u the degree of u
    inside G[N(v)]."""
    if not (0 <= v < g.n):
        raise InputError(f"vertex {v} outside range 0..{g.n - 1}")
    _require_rho_gt(rho, 1, "neighbour_thresholds")
    log_rho = math.log(rho)
    nb_mask = g.adj[v]
    out = {}
    for u in g.neighbours(v):
        d_u = (g.adj[u] & nb_mask).bit_count()
        out[u] = (d_u + 1) * (log_rho + 1.0)
    return out


def check_thm1_hypotheses(g: Graph, profile: SparsityProfile,
                          list_sizes, ell: float) -> HypothesisReport:
    """The three entry conditions: d <= Delta/6 - 1 (exact rationals),
    ell >= (d+1)(ln rho)^3, and |L(v)| >= k(v) for every vertex.

    list_sizes is either a per-vertex sequence of sizes or a ListAssignment.
    """
    if hasattr(list_sizes, "lists"):
        list_sizes = tuple(len(row) for row in list_sizes.lists)
    conds = []
    d = profile.local_density
    bound = Fraction(profile.max_degree, 6) - 1
    conds.append(Condition("density", str(d), str(bound), "<=", d <= bound,
                           "local density d vs Delta/6 - 1 (exact rationals)"))
    rho_ok = profile.rho > 1
    conds.append(Condition("rho", str(profile.rho), "1", ">", rho_ok,
                           "rho = Delta/(d+1) must exceed 1"))
    if rho_ok:
        log_rho = math.log(profile.rho)
        ell_floor = float(d + 1) * log_rho ** 3
        conds.append(Condition("ell_floor", f"{ell}", f"{ell_floor!r}", ">=",
                               ell >= ell_floor, "ell vs (d+1)(ln rho)^3"))
        k = tuple(_k_of(deg, ell, log_rho) for deg in profile.degrees)
        short = [v for v in range(g.n) if list_sizes[v] < k[v]]
        worst = min(range(g.n), key=lambda v: list_sizes[v] - k[v], default=None)
        lhs = "all |L(v)|" if worst is None else f"|L({worst})| = {list_sizes[worst]}"
        rhs = "k(v)" if worst is None else f"k({worst}) = {k[worst]:.6f}"
        conds.append(Condition("list_sizes", lhs, rhs, ">=", not short,
                               f"{len(short)} vertices below k(v)" if short else ""))
    else:
        conds.append(Condition("ell_floor", f"{ell}", "undefined", ">=", False,
                               "skipped: rho <= 1"))
        conds.append(Condition("list_sizes", "|L(v)|", "undefined", ">=", False,
                               "skipped: rho <= 1"))
    return HypothesisReport(tuple(conds))


@dataclass(frozen=True)
class Cor2Bound:
    delta: int
    f: float
    rho: float
    list_size: float
    asymptotic_ref: float


def cor2_bound(delta: int, f: float) -> Cor2Bound:
    """List-size bound (1 + 2/ln rho) * Delta / W(rho / (ln rho)^3) with
    rho = min{f, Delta}/3, next to the reference scale Delta / ln min{Delta, f}.

    Requires f >= 1 and rho > 1; f beyond Delta^2 + 1 is absorbed by the min.
    """
    if delta < 1:
        raise InputError(f"Delta must be >= 1, got {delta}")
    if f < 1:
        raise InputError(f"f must be >= 1, got {f}")
    rho = min(f, float(delta)) / 3.0
    if rho <= 1.0:
        raise HypothesisError(f"cor2_bound requires min(f, Delta)/3 > 1, got rho = {rho}")
    log_rho = math.log(rho)
    size = (1.0 + 2.0 / log_rho) * delta / lambert_w(rho / log_rho ** 3)
    ref = delta / math.log(min(float(delta), f))
    return Cor2Bound(delta, f, rho, size, ref)


@dataclass(frozen=True)
class Thm3Bound:
    n: int
    m: int
    delta: int
    q: int
    delta_param: float         # (4/q) e^(Delta/q)
    vacuous: bool              # delta_param >= 1: bound says nothing
    value: LogValue | None     # log of (1 - 1/q)^m ((1 - delta) q)^n

    @property
    def log_value(self) -> float | None:
        return None if self.value is None else self.value.log


def thm3_bound(n: int, m: int, delta: int, q: int) -> Thm3Bound:
    """Log-space lower bound m ln(1 - 1/q) + n ln((1 - delta) q) with
    delta = (4/q) e^(Delta/q); delta >= 1 yields a vacuous marker, not an error."""
    if q < 2:
        raise InputError(f"q must be >= 2, got {q}")
    if n < 0 or m < 0 or delta < 0:
        raise InputError("n, m, Delta must be non-negative")
    dp = (4.0 / q) * math.exp(delta / q)
    if dp >= 1.0:
        return Thm3Bound(n, m, delta, q, dp, True, None)
    log_val = m * math.log1p(-1.0 / q) + n * math.log((1.0 - dp) * q)
    return Thm3Bound(n, m, delta, q, dp, False, LogValue.from_log(log_val))


def thm3_sharpness_ceiling(n: int, delta: int, q: int) -> LogValue:
    """Log of (1 - 1/q)^(Delta n / 2) * ((1 + 2 ln n / n) q)^n, the ceiling a
    Delta-regular construction cannot beat."""
    if q < 2:
        raise InputError(f"q must be >= 2, got {q}")
    if n < 2:
        raise InputError(f"n must be >= 2, got {n}")
    log_val = (delta * n / 2.0) * math.log1p(-1.0 / q) \
        + n * math.log((1.0 + 2.0 * math.log(n) / n) * q)
    return LogValue.from_log(log_val)


def thm4_params(profile: SparsityProfile) -> BoundParams:
    """q(v) = (1 + 1/ln rho) * deg(v) / W(deg(v) / ((d+1)(ln rho)^3)).

    Requires rho >= 6 and every degree >= 1.  list_floor demands
    ceil((1 + 1/ln rho) q(v)); q_geomean_log is the mean of ln q(v).
    """
    if profile.n == 0:
        raise InputError("empty graph")
    for v, deg in enumerate(profile.degrees):
        if deg == 0:
            raise DomainError(f"thm4_params requires min degree >= 1; vertex {v} is isolated")
    if profile.rho < 6:
        raise HypothesisError(
            f"thm4_params requires rho >= 6; measured rho = {profile.rho} "
            f"(= {float(profile.rho):.6g})")
    log_rho = math.log(profile.rho)
    ell_scale = float(profile.local_density + 1) * log_rho ** 3
    factor = 1.0 + 1.0 / log_rho
    q = tuple(factor * deg / lambert_w(deg / ell_scale) for deg in profile.degrees)
    floors = tuple(math.ceil(factor * x) for x in q)
    t = float(profile.local_density + 1) * (log_rho + 1.0)
    geo = sum(math.log(x) for x in q) / profile.n
    return BoundParams("thm4", profile.rho, ell_scale, t, None, q, floors, geo)


def thm4_bound(params: BoundParams, geometric_mean_degree: float, n: int) -> LogValue:
    """Headline count bound (q / sqrt(D))^n in log space, with q the geometric
    mean of q(v) and D the geometric mean degree."""
    if params.q_geomean_log is None:
        raise InputError("thm4_bound needs params built by thm4_params")
    if geometric_mean_degree is None or geometric_mean_degree < 1:
        raise DomainError("geometric mean degree must be >= 1")
    log_val = n * (params.q_geomean_log - 0.5 * math.log(geometric_mean_degree))
    return LogValue.from_log(log_val)
