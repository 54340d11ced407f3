"""Obstruction queries: does given manifold data contradict positive curvature?

A query supplies the dimension ``n``, the symmetry rank ``r`` (dimension of
an effectively acting torus) and one piece of structure (Euler
characteristic, a product or connected-sum decomposition, a symmetric-space
rank, a tower of fibrations, or elliptic-genus hypotheses).  Each applicable
result yields one report entry with two verdicts:

``applicable``
    whether the symmetry-rank hypothesis is certified to hold;
``obstructed``
    whether the inequality is certified to fail.  Never true unless
    ``applicable`` is.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Union

from .bounds import betti_sum_expr, f0, s_alpha_expr, theorem_a_envelope, theorem_b_bounds
from .exactnum import (
    CERT_FALSE,
    DEFAULT_CEILING_BITS,
    DomainError,
    Verdict,
    add,
    certify,
    enclose,
    log,
    mul,
    power,
)
from .lie import Space, dimension, euler_characteristic

FOUR_THIRDS = Fraction(4, 3)
MAX_ALPHA_SCAN = 64


class QueryError(DomainError):
    """The query violates a hypothesis of the result it asks about."""


@dataclass(frozen=True)
class Euler:
    chi: int


@dataclass(frozen=True)
class ProductPower:
    """M = N x ... x N (k factors); N given by its Euler characteristic or a space."""

    k: int
    chi_factor: int | None = None
    factor: Space | None = None

    def factor_chi(self) -> int:
        if self.factor is not None:
            return euler_characteristic(self.factor)
        if self.chi_factor is None:
            raise QueryError("product_power needs chi_factor or factor")
        return self.chi_factor


@dataclass(frozen=True)
class ConnectedSum:
    chi_factor: int
    k: int


@dataclass(frozen=True)
class SymmetricSpace:
    rank: int


@dataclass(frozen=True)
class FibrationTower:
    fiber_chis: tuple[int, ...]


@dataclass(frozen=True)
class EllipticGenus:
    spin: bool = False
    b2_b4_zero: bool = False


Structure = Union[Euler, ProductPower, ConnectedSum, SymmetricSpace, FibrationTower, EllipticGenus]


@dataclass(frozen=True)
class ObstructionQuery:
    n: int
    r: int
    structure: Structure
    simply_connected: bool = True

    def __post_init__(self):
        if self.n < 1:
            raise QueryError(f"dimension must be positive, got {self.n}")
        if self.r < 0:
            raise QueryError(f"symmetry rank must be >= 0, got {self.r}")


@dataclass
class Entry:
    theorem: str
    applicable: Verdict
    obstructed: Verdict
    witness: str
    values: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)


@dataclass
class ObstructionReport:
    query: ObstructionQuery
    entries: list[Entry]
    flags: list[str] = field(default_factory=list)

    @property
    def obstructed(self) -> Verdict:
        v = CERT_FALSE
        for e in self.entries:
            v = v | e.obstructed
        return v


def max_symmetry_rank(n: int) -> int:
    return (n + 1) // 2


def min_rank_theorem_a(n: int) -> int:
    """Smallest integer r with r >= log_{4/3}(n), i.e. 4**r >= n * 3**r."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    r = 0
    while 4 ** r < n * 3 ** r:
        r += 1
    return r


def _gate(entry_applicable: Verdict, inequality: Verdict) -> Verdict:
    # below a theorem's threshold nothing is claimed
    return inequality if entry_applicable.is_true else CERT_FALSE


def _hypotheses(n: int, simply_connected: bool, need_even: bool = True) -> list[str]:
    problems = []
    if need_even and n % 2:
        problems.append(f"dimension n = {n} is odd; the bound needs even n")
    if not simply_connected:
        problems.append("manifold is not simply connected")
    return problems


def log_rank_applicable(n: int, r: int, ceiling: int = DEFAULT_CEILING_BITS) -> Verdict:
    """r >= log_{4/3} n, decided exactly as 4**r >= n * 3**r."""
    return certify(r, ">=", log(FOUR_THIRDS, n), ceiling)


def _log_rank_entry(theorem: str, n: int, r: int, simply_connected: bool, ceiling: int) -> tuple[Verdict, list[str]]:
    problems = _hypotheses(n, simply_connected)
    if problems:
        return CERT_FALSE, problems
    return log_rank_applicable(n, r, ceiling), []


def check_euler(query: ObstructionQuery, ceiling: int = DEFAULT_CEILING_BITS) -> Entry:
    """chi(M) against f0(n) under symmetry rank >= log_{4/3} n."""
    if not isinstance(query.structure, Euler):
        raise QueryError("check_euler needs an euler structure")
    n, r, chi = query.n, query.r, query.structure.chi
    applicable, notes = _log_rank_entry("theorem-A", n, r, query.simply_connected, ceiling)
    if notes:
        return Entry("theorem-A", applicable, CERT_FALSE, "hypotheses not met", {"chi": chi}, notes)
    bound = f0(n)
    inequality = Verdict.of(chi > bound)
    values = {
        "chi": chi,
        "f0": bound,
        "min_rank": min_rank_theorem_a(n),
        "envelope": theorem_a_envelope(n),
        "inequality_violated": inequality,
    }
    rel = ">" if chi > bound else "<="
    return Entry(
        "theorem-A",
        applicable,
        _gate(applicable, inequality),
        f"chi = {chi} {rel} f0({n}) = {bound}",
        values,
    )


def check_theorem_b(
    n: int,
    r: int,
    alpha: int,
    chi: int | None = None,
    simply_connected: bool = True,
    ceiling: int = DEFAULT_CEILING_BITS,
) -> Entry:
    """Component and Betti-sum bounds under symmetry rank >= s_alpha(n)."""
    if alpha < 3:
        raise QueryError(f"alpha must be >= 3, got {alpha}")
    problems = _hypotheses(n, simply_connected)
    if problems:
        return Entry(f"theorem-B(alpha={alpha})", CERT_FALSE, CERT_FALSE, "hypotheses not met", {}, problems)
    applicable = certify(r, ">=", s_alpha_expr(alpha, n), ceiling)
    components, betti = theorem_b_bounds(alpha, n)
    values: dict[str, Any] = {
        "alpha": alpha,
        "s_alpha": enclose(s_alpha_expr(alpha, n), 64),
        "components_bound": components,
        "betti_sum_bound": betti,
    }
    obstructed = CERT_FALSE
    witness = f"M^T has at most {components} components"
    if chi is not None:
        inequality = certify(chi, ">", betti_sum_expr(alpha, n), ceiling)
        values["chi"] = chi
        values["inequality_violated"] = inequality
        obstructed = _gate(applicable, inequality)
        witness += f"; chi = {chi} vs even Betti sum bound ~ {float(betti.mid):.6g}"
    return Entry(f"theorem-B(alpha={alpha})", applicable, obstructed, witness, values)


def best_theorem_b(query: ObstructionQuery, ceiling: int = DEFAULT_CEILING_BITS) -> Entry:
    """Theorem B at the smallest alpha whose rank hypothesis holds (the sharpest bound)."""
    chi = query.structure.chi if isinstance(query.structure, Euler) else None
    for alpha in range(3, MAX_ALPHA_SCAN + 1):
        entry = check_theorem_b(query.n, query.r, alpha, chi, query.simply_connected, ceiling)
        if entry.applicable.is_true or entry.notes:
            return entry
    entry.notes.append(f"rank {query.r} is below s_alpha(n) for every alpha <= {MAX_ALPHA_SCAN}")
    return entry


def _three_log2_sq(n: int):
    return mul(3, power(log(2, n), 2))


def _power_compare(base: int, k: int, bound: int) -> tuple[bool, bool]:
    """(base**k < 2, base**k > bound) without materialising huge powers."""
    if k <= 4096 or abs(base) <= 1:
        v = base ** k
        return v < 2, v > bound
    if base < 0 and k % 2:
        return True, False
    # |base| >= 2 and k > 4096: the power has far more bits than any bound we meet
    if (abs(base).bit_length() - 1) * k > bound.bit_length() + 1:
        return False, True
    v = base ** k
    return v < 2, v > bound


def check_stable_hopf(query: ObstructionQuery, ceiling: int = DEFAULT_CEILING_BITS) -> Entry:
    """Product and connected-sum powers: corollary inequality plus the direct chi test."""
    s = query.structure
    n, r = query.n, query.r
    if isinstance(s, ProductPower):
        theorem = "corollary-C-product"
        k = s.k
        chi_n = s.factor_chi()
        if s.factor is not None and k * dimension(s.factor) != n:
            raise QueryError(f"k * dim(N) = {k * dimension(s.factor)} does not match n = {n}")
    elif isinstance(s, ConnectedSum):
        theorem = "corollary-C-connected-sum"
        k = s.k
        chi_n = s.chi_factor
        if chi_n == 2:
            raise QueryError("connected sums need chi(N) != 2")
    else:
        raise QueryError("check_stable_hopf needs a product_power or connected_sum structure")
    if k < 2:
        raise QueryError(f"k must be >= 2, got {k}")

    applicable, notes = _log_rank_entry(theorem, n, r, query.simply_connected, ceiling)
    if notes:
        return Entry(theorem, applicable, CERT_FALSE, "hypotheses not met", {"k": k, "chi_factor": chi_n}, notes)

    bound = f0(n)
    threshold = _three_log2_sq(n)
    if theorem == "corollary-C-product":
        corollary = certify(k, ">=", threshold, ceiling)
        too_small, too_big = _power_compare(chi_n, k, bound)
        chi_text = f"chi(N)^k = {chi_n}^{k}"
        cor_text = f"k = {k} >= 3(log2 n)^2"
    else:
        corollary = certify(log(2, k), ">=", threshold, ceiling)
        chi_m = 2 + k * (chi_n - 2)
        too_small, too_big = chi_m < 2, chi_m > bound
        chi_text = f"2 + k(chi(N) - 2) = {chi_m}"
        cor_text = f"k = {k} >= 2^(3(log2 n)^2)"
    direct = Verdict.of(too_small or too_big)
    values = {
        "k": k,
        "chi_factor": chi_n,
        "f0": bound,
        "three_log2_n_squared": enclose(threshold, 64),
        "corollary_violated": corollary,
        "direct_violated": direct,
    }
    if theorem == "corollary-C-product" and k <= 4096:
        values["chi"] = chi_n ** k
    elif theorem == "corollary-C-connected-sum":
        values["chi"] = 2 + k * (chi_n - 2)
    parts = []
    if corollary.is_true:
        parts.append(cor_text)
    if too_small:
        parts.append(f"{chi_text} < 2")
    if too_big:
        parts.append(f"{chi_text} > f0({n})")
    witness = "; ".join(parts) if parts else f"{chi_text} within [2, f0({n})] and corollary inequality holds"
    return Entry(theorem, applicable, _gate(applicable, corollary | direct), witness, values)


def check_symmetric_space(query: ObstructionQuery, ceiling: int = DEFAULT_CEILING_BITS) -> Entry:
    """Rank of a symmetric space rationally modelling M, at symmetry rank >= 2 log2 n + 7."""
    s = query.structure
    if not isinstance(s, SymmetricSpace):
        raise QueryError("check_symmetric_space needs a symmetric_space structure")
    n, r = query.n, query.r
    theorem = "corollary-D"
    problems = _hypotheses(n, query.simply_connected)
    if problems:
        return Entry(theorem, CERT_FALSE, CERT_FALSE, "hypotheses not met", {"rank": s.rank}, problems)
    rank_threshold = add(mul(2, log(2, n)), 7)
    applicable = certify(r, ">=", rank_threshold, ceiling)
    spheres = _three_log2_sq(n)
    inequality = certify(s.rank, ">=", add(spheres, 3), ceiling)
    values = {
        "rank": s.rank,
        "rank_threshold": enclose(rank_threshold, 64),
        "rank_bound": enclose(add(spheres, 3), 64),
        "spherical_factor_bound": enclose(spheres, 64),
        "inequality_violated": inequality,
    }
    rel = ">=" if inequality.is_true else "<"
    return Entry(
        theorem,
        applicable,
        _gate(applicable, inequality),
        f"rank {s.rank} {rel} 3(log2 {n})^2 + 3; fewer than 3(log2 n)^2 spherical factors",
        values,
    )


def check_fibration_tower(query: ObstructionQuery, ceiling: int = DEFAULT_CEILING_BITS) -> Entry:
    """Iterated fibrations with equal-rank homogeneous fibres: chi is the product of fibre chis."""
    s = query.structure
    if not isinstance(s, FibrationTower):
        raise QueryError("check_fibration_tower needs a fibration_tower structure")
    if not s.fiber_chis:
        raise QueryError("fibration tower needs at least one fibre")
    bad = [c for c in s.fiber_chis if c < 2]
    if bad:
        raise QueryError(f"equal-rank homogeneous fibres have chi >= 2; got {bad}")
    n, r = query.n, query.r
    theorem = "fibration-tower"
    chi = 1
    for c in s.fiber_chis:
        chi *= c
    applicable, notes = _log_rank_entry(theorem, n, r, query.simply_connected, ceiling)
    if notes:
        return Entry(theorem, applicable, CERT_FALSE, "hypotheses not met", {"chi": chi}, notes)
    bound = f0(n)
    inequality = Verdict.of(chi > bound)
    rel = ">" if chi > bound else "<="
    return Entry(
        theorem,
        applicable,
        _gate(applicable, inequality),
        f"chi(M_k) = {chi} {rel} f0({n}) = {bound}",
        {"chi": chi, "fibers": len(s.fiber_chis), "f0": bound, "inequality_violated": inequality},
    )


def elliptic_genus_vanishing(
    n: int,
    spin: bool,
    b2_b4_zero: bool,
    r: int,
    simply_connected: bool = True,
    ceiling: int = DEFAULT_CEILING_BITS,
) -> Entry:
    """Number of leading elliptic-genus coefficients forced to vanish: floor(n/16)."""
    if n % 4:
        raise QueryError(f"elliptic genus statement needs n divisible by 4, got {n}")
    if spin == b2_b4_zero:
        raise QueryError("set exactly one of spin / b2_b4_zero")
    theorem = "theorem-F"
    applicable, notes = _log_rank_entry(theorem, n, r, simply_connected, ceiling)
    count = n // 16
    if spin:
        exception = "M has 4-periodic rational cohomology"
    else:
        exception = "M is a rational sphere"
    witness = f"first {count} elliptic genus coefficients vanish unless {exception}"
    return Entry(
        theorem,
        applicable,
        CERT_FALSE,
        witness if applicable.is_true else "hypotheses not met",
        {"vanishing_count": count, "exception": exception},
        notes,
    )


def analyze(query: ObstructionQuery, ceiling: int = DEFAULT_CEILING_BITS) -> ObstructionReport:
    """Run every check that matches the query's structure."""
    s = query.structure
    if isinstance(s, Euler):
        entries = [check_euler(query, ceiling), best_theorem_b(query, ceiling)]
    elif isinstance(s, (ProductPower, ConnectedSum)):
        entries = [check_stable_hopf(query, ceiling)]
    elif isinstance(s, SymmetricSpace):
        entries = [check_symmetric_space(query, ceiling)]
    elif isinstance(s, FibrationTower):
        entries = [check_fibration_tower(query, ceiling)]
    elif isinstance(s, EllipticGenus):
        entries = [elliptic_genus_vanishing(query.n, s.spin, s.b2_b4_zero, query.r, query.simply_connected, ceiling)]
    else:
        raise QueryError(f"unsupported structure {type(s).__name__}")
    for e in entries:
        violated = e.values.get("inequality_violated", e.values.get("direct_violated"))
        if isinstance(violated, Verdict) and violated.is_true and not e.applicable.is_true:
            e.notes.append("inequality fails, but the rank hypothesis is not certified; nothing is claimed (vacuous)")
    flags = []
    top = max_symmetry_rank(query.n)
    if query.r > top:
        flags.append(
            f"rank {query.r} exceeds the maximal symmetry rank floor((n+1)/2) = {top}; "
            "no positively curved manifold has this symmetry, so any verdict is vacuous"
        )
    return ObstructionReport(query, entries, flags)
