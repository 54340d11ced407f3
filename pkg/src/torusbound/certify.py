"""Registry of finite numerical claims, each re-checked with certified arithmetic.

A claim is a finite grid plus a predicate returning a :class:`Verdict` per
grid point.  Running a claim evaluates the whole grid and compares the
outcome against the claim's expectation:

* ``all-true``: every point CertTrue;
* ``exception-set``: the CertFalse points must include ``must_fail`` and lie
  inside ``may_fail``;
* ``report-only``: outcomes are recorded, only Undecided points fail.

Undecided points always fail the claim; they are never read as refutations.
"""

from __future__ import annotations

import functools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Hashable, Sequence

from . import bounds, codes
from .exactnum import (
    DEFAULT_CEILING_BITS,
    Expr,
    Verdict,
    add,
    affine_log2_sign,
    certified_ceil,
    certify,
    const,
    enclose,
    ln,
    log,
    mul,
    power,
    sub,
)

TABLE1_N = (54, 74, 100, 135, 183, 247)
TABLE1_KAPPA = (
    Fraction("3.14823e-15"),
    Fraction("1.45259e-15"),
    Fraction("4.80780e-16"),
    Fraction("3.40869e-16"),
    Fraction("1.10871e-16"),
    Fraction("2.15684e-17"),
)
KAPPA_REL_TOL = Fraction(5, 10**6)

GRID_N_MAX = 10_000
ALPHA_RANGE = (4, 40)
CHAIN_N_MAX = 100_000

LEMMA41_COEFF = Fraction(325973, 10**6)
LEMMA41_CONST = Fraction(26074, 10**4)
LEMMA41_RANGE = (121, 6000)

SPHERE_POWER_RANK = 20
SPHERE_POWER_K = (2, 400)
SPHERE_POWER_PUBLISHED = (124, 314)


@dataclass(frozen=True)
class ClaimRecord:
    id: str
    alias: str
    citation: str
    statement: str
    domain: str
    expectation: str
    grid: Callable[[], Sequence[Hashable]]
    predicate: Callable[[Any, int], Verdict]
    must_fail: frozenset = frozenset()
    may_fail: frozenset = frozenset()
    details: Callable[[int, list], dict] | None = None

    def __post_init__(self):
        if not self.statement.strip():
            raise ValueError(f"claim {self.id} needs a non-empty statement")
        if self.expectation not in ("all-true", "exception-set", "report-only"):
            raise ValueError(f"claim {self.id}: bad expectation {self.expectation!r}")


@dataclass
class ClaimReport:
    id: str
    alias: str
    citation: str
    statement: str
    domain: str
    expectation: str
    grid_size: int
    counts: dict[str, int]
    false_points: list
    undecided_points: list
    passed: bool
    ceiling_bits: int
    details: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def verdict_of(self, point) -> str:
        if point in self.undecided_points:
            return "undecided"
        if point in self.false_points:
            return "false"
        return "true"


# ---------------------------------------------------------------------------
# Table 1


def _n_seq_point(i: int, ceiling: int) -> Verdict:
    return Verdict.of(bounds.n_sequence(6)[i] == TABLE1_N[i - 1])


def _kappa_point(i: int, ceiling: int) -> Verdict:
    e = bounds.kappa_expr(TABLE1_N[i - 1])
    printed = TABLE1_KAPPA[i - 1]
    lo = certify(e, ">=", printed * (1 - KAPPA_REL_TOL), ceiling)
    if lo.is_false:
        return lo
    return lo & certify(e, "<=", printed * (1 + KAPPA_REL_TOL), ceiling)


def _kappa_details(ceiling: int, _verdicts: list) -> dict:
    rows = {}
    for entry in bounds.kappa_sequence(6, ceiling)[1:]:
        rows[str(entry.n)] = {"kappa": entry.kappa, "width_verdict": entry.verdict}
    return {"enclosures": rows, "printed": {str(n): k for n, k in zip(TABLE1_N, TABLE1_KAPPA)}}


# ---------------------------------------------------------------------------
# f0 against kappa_1 * envelope, compared in log space:
#   f0(n) <= kappa_1 env(n)  <=>  ln(f0(n)/f0(54)) <= ln env(n) - ln env(54)


def kappa1_bound_margin(n: int) -> tuple[Expr, Expr]:
    lhs = ln(Fraction(bounds.f0(n), bounds.f0(54)))
    rhs = sub(bounds.log_envelope_expr(n), bounds.log_envelope_expr(54))
    return lhs, rhs


def _kappa1_point(n: int, ceiling: int) -> Verdict:
    lhs, rhs = kappa1_bound_margin(n)
    return certify(lhs, "<=", rhs, ceiling)


def _chain_point(n: int, ceiling: int) -> Verdict:
    # 2^s(n) - 1 <= n(n+2)/4 - 1, scaled by 4
    return Verdict.of(4 * (2 ** bounds.s_of(n) - 1) <= n * (n + 2) - 4)


def _envelope_vs_2pow_point(n: int, ceiling: int) -> Verdict:
    # ln env(n) < 3 (log2 n)^2 ln 2
    rhs = mul(mul(3, ln(2)), power(log(2, n), 2))
    return certify(bounds.log_envelope_expr(n), "<", rhs, ceiling)


# ---------------------------------------------------------------------------
# s_alpha estimates.  Differences of s_alpha values are formed with a single
# merged logarithm so exact equalities stay decidable.


def s_alpha_difference(alpha1: int, n1: int | Fraction, alpha2: int, n2: int | Fraction) -> Expr:
    """s_{alpha1}(n1) - s_{alpha2}(n2) with the two log2 terms merged."""
    q1 = Fraction(n1) / (2 * alpha1)
    q2 = Fraction(n2) / (2 * alpha2)
    return add(const(q1 - q2 + alpha1 - alpha2), mul(2, log(2, q1 / q2)))


def _lemma51_small_grid() -> list:
    lo, hi = ALPHA_RANGE
    return [(a, n) for a in range(lo, hi + 1) for n in range(2, a * (a - 1) // 3 + 1, 2)]


def _lemma51_large_grid() -> list:
    lo, hi = ALPHA_RANGE
    pts = []
    for a in range(lo, hi + 1):
        start = a * (a - 1) // 3 + 1
        start += start % 2
        pts.extend((a, n) for n in range(start, GRID_N_MAX + 1, 2))
    return pts


def lemma51_k_samples(alpha: int, n: int) -> list[int]:
    k0 = -(-n // alpha)
    top = n // 2
    if k0 > top:
        return []
    return sorted({k0, min(k0 + 1, top), (k0 + top) // 2, top})


def _lemma51_step_grid() -> list:
    lo, hi = ALPHA_RANGE
    return [
        (a, n, k)
        for a in range(lo, hi + 1)
        for n in range(2, GRID_N_MAX + 1, 2)
        for k in lemma51_k_samples(a, n)
    ]


def _s_alpha_gap(alpha1: int, n1: int, alpha2: int, n2: int, shift: int, ceiling: int) -> Verdict:
    """s_{alpha1}(n1) - s_{alpha2}(n2) - shift >= 0."""
    q1 = Fraction(n1, 2 * alpha1)
    q2 = Fraction(n2, 2 * alpha2)
    return affine_log2_sign(q1 - q2 + alpha1 - alpha2 - shift, 2, q1 / q2, ceiling)


def _lemma51_small_point(p, ceiling: int) -> Verdict:
    a, n = p
    return _s_alpha_gap(a, n, a - 1, n, 0, ceiling)


def _lemma51_large_point(p, ceiling: int) -> Verdict:
    a, n = p
    q = Fraction(n, 2 * a)
    poly = bounds.alpha_constants(a).a_alpha * n * n + 2 * n + 2
    # s_alpha(n) - log2(poly) = q + a + 3 + log2(q^2 / poly)
    return affine_log2_sign(q + a + 3, 1, q * q / poly, ceiling)


def _lemma51_step_point(p, ceiling: int) -> Verdict:
    a, n, k = p
    return _s_alpha_gap(a, n, a - 1, n - k, 1, ceiling)


# ---------------------------------------------------------------------------
# Involution-existence estimate for n > 120


def lemma41_rank(n: int, reading: str = "integer-rank", ceiling: int = DEFAULT_CEILING_BITS):
    """Torus rank available at a fixed point, as (value or None, verdict)."""
    dim_t, v = certified_ceil(add(const(Fraction(n, 6) - 3), mul(2, log(2, n))), ceiling)
    if dim_t is None:
        return None, v
    if reading == "literal":
        return dim_t - n % 2, v
    return dim_t, v


def lemma41_required(n: int, reading: str = "integer-rank") -> Expr:
    """0.325973 m + 1.5 log2 m + 2.6074."""
    m = Fraction(n, 2) if reading == "integer-rank" else Fraction(n // 2)
    return add(const(LEMMA41_COEFF * m + LEMMA41_CONST), mul(Fraction(3, 2), log(2, m)))


def lemma41_point(n: int, ceiling: int, reading: str = "integer-rank") -> Verdict:
    r, v = lemma41_rank(n, reading, ceiling)
    if r is None:
        return v
    return certify(r, ">=", lemma41_required(n, reading), ceiling)


def _lemma41_predicate(n: int, ceiling: int) -> Verdict:
    return lemma41_point(n, ceiling)


def _lemma41_details(ceiling: int, _verdicts: list) -> dict:
    lo, hi = LEMMA41_RANGE
    literal_false, literal_undecided = [], []
    for n in range(lo, hi + 1):
        v = lemma41_point(n, ceiling, "literal")
        if v.is_false:
            literal_false.append(n)
        elif v.is_undecided:
            literal_undecided.append(n)
    margins = {}
    for reading in ("integer-rank", "literal"):
        r, _ = lemma41_rank(121, reading, ceiling)
        if r is not None:
            margins[reading] = enclose(sub(r, lemma41_required(121, reading)), 64)
    return {
        "reading": "m = n/2, r = ceil(n/6 + 2 log2 n - 3)",
        "literal_reading": "m = floor(n/2), r = ceil(n/6 + 2 log2 n - 3) - (n mod 2)",
        "literal_false_points": literal_false,
        "literal_undecided_points": literal_undecided,
        "margin_at_121": margins,
    }


# ---------------------------------------------------------------------------
# Griesmer thresholds


def _griesmer_grid() -> list:
    return [
        (t, n, c)
        for t in range(1, 9)
        for n in range(2, 513, 2)
        for c in range(0, 3 * n // 4 + 1, 2)
    ]


def _griesmer_point(p, ceiling: int) -> Verdict:
    t, n, c = p
    return Verdict.of(codes.minimal_forcing_rank(t, n, c) <= codes.proposition_threshold(t, n, c) + 1)


def _griesmer_details(ceiling: int, _verdicts: list) -> dict:
    at_threshold = not_at_threshold = 0
    gap_min = gap_max = None
    for t, n, c in _griesmer_grid():
        r_min = codes.minimal_forcing_rank(t, n, c)
        r_star = codes.proposition_threshold(t, n, c)
        if r_min <= r_star:
            at_threshold += 1
        else:
            not_at_threshold += 1
        gap = codes.stated_threshold(t, n, c) - r_star
        gap_min = gap if gap_min is None else min(gap_min, gap)
        gap_max = gap if gap_max is None else max(gap_max, gap)
    return {
        "cells_true_at_proof_threshold": at_threshold,
        "cells_true_only_above_proof_threshold": not_at_threshold,
        "stated_minus_proof_threshold": {"min": gap_min, "max": gap_max},
    }


# ---------------------------------------------------------------------------
# Remaining claims


def _fig_ref_point(n: int, ceiling: int) -> Verdict:
    return Verdict.of(bounds.f0(n) <= bounds.reference_exponential(n))


def _log_ratio_point(n, ceiling: int) -> Verdict:
    if n == "exact":
        # log2(4/3) <= 1/2  <=>  (4/3)^2 <= 2
        return Verdict.of(Fraction(4, 3) ** 2 <= 2)
    return certify(log(Fraction(4, 3), n), ">=", mul(2, log(2, n)), ceiling)


def _kappa_monotone_point(i: int, ceiling: int) -> Verdict:
    def kappa(j):
        return const(1) if j == 0 else bounds.kappa_expr(TABLE1_N[j - 1])

    return certify(kappa(i + 1), "<", kappa(i), ceiling)


def _sphere_power_point(k: int, ceiling: int) -> Verdict:
    n = 2 * k
    applicable = certify(SPHERE_POWER_RANK, ">=", log(Fraction(4, 3), n), ceiling)
    return applicable & Verdict.of(2 ** k > bounds.f0(n))


def _runs(values: list[int]) -> list[list[int]]:
    out: list[list[int]] = []
    for v in values:
        if out and v == out[-1][1] + 1:
            out[-1][1] = v
        else:
            out.append([v, v])
    return out


def _sphere_power_details(ceiling: int, verdicts: list) -> dict:
    lo, _ = SPHERE_POWER_K
    excluded = [lo + i for i, v in enumerate(verdicts) if v.is_true]
    vacuous = [k for k in excluded if SPHERE_POWER_RANK > k]
    return {
        "excluded_k_ranges": _runs(excluded),
        "excluded_k_with_rank_above_maximal": _runs(vacuous),
        "max_k_by_rank_hypothesis": max((k for k in range(1, 1000) if 4**SPHERE_POWER_RANK >= 2 * k * 3**SPHERE_POWER_RANK), default=None),
        "published_range": list(SPHERE_POWER_PUBLISHED),
    }


# ---------------------------------------------------------------------------
# Catalog


def _even(lo: int, hi: int) -> Callable[[], list]:
    return lambda: list(range(lo, hi + 1, 2))


CLAIMS: dict[str, ClaimRecord] = {}


def register(claim: ClaimRecord) -> ClaimRecord:
    if claim.id in CLAIMS:
        raise ValueError(f"duplicate claim id {claim.id}")
    CLAIMS[claim.id] = claim
    return claim


register(ClaimRecord(
    "T1-n-seq", "C1", "Table of n_i and kappa_i, n column",
    "n_1..n_6 = 54, 74, 100, 135, 183, 247",
    "i = 1..6", "all-true", lambda: list(range(1, 7)), _n_seq_point,
))
register(ClaimRecord(
    "T1-kappa", "C2", "Table of n_i and kappa_i, kappa column",
    "kappa_i = f0(n_i) / (n_i/2 + 1)^(1 + log_{4/3}(n_i/2 + 1))",
    "i = 1..6, relative tolerance 5e-6", "all-true", lambda: list(range(1, 7)), _kappa_point,
    details=_kappa_details,
))
register(ClaimRecord(
    "L2.2-base", "C3", "f0 envelope lemma, finite base range",
    "f0(n) <= kappa_1 (n/2 + 1)^(1 + log_{4/3}(n/2 + 1))",
    "even n in [54, 72]", "all-true", _even(54, 72), _kappa1_point,
))
register(ClaimRecord(
    "L2.2-extended", "C4", "f0 envelope lemma, induction range checked directly",
    "f0(n) <= kappa_1 (n/2 + 1)^(1 + log_{4/3}(n/2 + 1))",
    f"even n in [74, {GRID_N_MAX}]", "all-true", _even(74, GRID_N_MAX), _kappa1_point,
))
register(ClaimRecord(
    "L2.2-chain", "C5", "f0 envelope lemma, induction step",
    "2^s(n) - 1 <= n(n + 2)/4 - 1",
    f"even n in [54, {CHAIN_N_MAX}]", "all-true", _even(54, CHAIN_N_MAX), _chain_point,
))
register(ClaimRecord(
    "envelope-vs-2pow", "C6", "envelope below 2^(3 (log2 n)^2)",
    "(n/2 + 1)^(1 + log_{4/3}(n/2 + 1)) < 2^(3 (log2 n)^2)",
    "even n in [4, 2048]", "all-true", _even(4, 2048), _envelope_vs_2pow_point,
))
register(ClaimRecord(
    "L5.1-1", "C7", "s_alpha estimates, small n",
    "n <= alpha(alpha - 1)/3  =>  s_alpha(n) >= s_{alpha-1}(n)",
    "alpha in [4, 40], even n <= alpha(alpha-1)/3", "all-true", _lemma51_small_grid, _lemma51_small_point,
))
register(ClaimRecord(
    "L5.1-2", "C8", "s_alpha estimates, large n",
    "n > alpha(alpha - 1)/3  =>  s_alpha(n) >= log2(a_alpha n^2 + 2n + 2)",
    f"alpha in [4, 40], even n in (alpha(alpha-1)/3, {GRID_N_MAX}]", "all-true",
    _lemma51_large_grid, _lemma51_large_point,
))
register(ClaimRecord(
    "L5.1-3", "C9", "s_alpha estimates, descent step",
    "k >= n/alpha  =>  s_alpha(n) - 1 >= s_{alpha-1}(n - k)",
    f"alpha in [4, 40], even n <= {GRID_N_MAX}, k in {{ceil(n/alpha), +1, midpoint, n/2}}", "all-true",
    _lemma51_step_grid, _lemma51_step_point,
))
register(ClaimRecord(
    "L4.1-exceptions", "C10", "involution estimate for n > 120",
    "r >= 0.325973 m + 1.5 log2(m) + 2.6074",
    "n in [121, 6000]", "exception-set",
    lambda: list(range(LEMMA41_RANGE[0], LEMMA41_RANGE[1] + 1)), _lemma41_predicate,
    must_fail=frozenset({126, 131}), may_fail=frozenset({121, 126, 131}),
    details=_lemma41_details,
))
register(ClaimRecord(
    "griesmer-threshold", "C11", "Griesmer forcing threshold consistency",
    "r_min(t, n, c) <= tc/2 + floor(log2(tn - tc + 2)) + 1, r_min least r with sum_{i<r} ceil((t(n-c)+2)/2^(i+2)) > tn/2",
    "t in [1, 8], even n in [2, 512], even c <= 3n/4", "report-only",
    _griesmer_grid, _griesmer_point, details=_griesmer_details,
))
register(ClaimRecord(
    "fig-ref-bound", "C12", "exponential reference curve",
    "f0(n) <= 1.13576e-12 * 2^n",
    "even n in [54, 400]", "report-only", _even(54, 400), _fig_ref_point,
))
register(ClaimRecord(
    "cor-c-log-ineq", "C13", "logarithm comparison behind the product corollaries",
    "log_{4/3} n >= 2 log2 n",
    f"n in [2, {GRID_N_MAX}] plus the exact check (4/3)^2 <= 2", "all-true",
    lambda: ["exact"] + list(range(2, GRID_N_MAX + 1)), _log_ratio_point,
))
register(ClaimRecord(
    "kappa-monotone", "C14", "kappa_i strictly decreasing",
    "kappa_{i+1} < kappa_i",
    "i = 0..5", "report-only", lambda: list(range(0, 6)), _kappa_monotone_point,
))
register(ClaimRecord(
    "sphere-power-example", "C15", "excluded powers of S^2 under a rank-20 torus",
    "20 >= log_{4/3}(2k) and 2^k > f0(2k)",
    f"k in [{SPHERE_POWER_K[0]}, {SPHERE_POWER_K[1]}]", "report-only",
    lambda: list(range(SPHERE_POWER_K[0], SPHERE_POWER_K[1] + 1)), _sphere_power_point,
    details=_sphere_power_details,
))

_ALIASES = {c.alias: c.id for c in CLAIMS.values()}


def resolve(claim_id: str) -> ClaimRecord:
    key = _ALIASES.get(claim_id, claim_id)
    try:
        return CLAIMS[key]
    except KeyError:
        raise KeyError(f"unknown claim id {claim_id!r}") from None


# ---------------------------------------------------------------------------
# Running


def _evaluate(claim_id: str, points: Sequence, ceiling: int) -> list[Verdict]:
    claim = CLAIMS[claim_id]
    return [claim.predicate(p, ceiling) for p in points]


@functools.lru_cache(maxsize=4)
def _grid(claim_id: str) -> tuple:
    return tuple(CLAIMS[claim_id].grid())


def _evaluate_chunk(args) -> list[Verdict]:
    claim_id, lo, hi, ceiling = args
    points = _grid(claim_id)[lo:hi]
    return _evaluate(claim_id, points, ceiling)


def _point_json(p):
    return list(p) if isinstance(p, tuple) else p


def _assemble(claim: ClaimRecord, points: Sequence, verdicts: list[Verdict], ceiling: int, elapsed: float) -> ClaimReport:
    false_pts = [_point_json(p) for p, v in zip(points, verdicts) if v.is_false]
    undecided_pts = [_point_json(p) for p, v in zip(points, verdicts) if v.is_undecided]
    counts = {
        "true": sum(v.is_true for v in verdicts),
        "false": len(false_pts),
        "undecided": len(undecided_pts),
    }
    if counts["undecided"]:
        passed = False
    elif claim.expectation == "all-true":
        passed = counts["false"] == 0
    elif claim.expectation == "exception-set":
        got = set(false_pts)
        passed = claim.must_fail <= got <= claim.may_fail
    else:
        passed = True
    details = claim.details(ceiling, verdicts) if claim.details else {}
    if claim.expectation == "exception-set":
        details = {
            "must_fail": sorted(claim.must_fail),
            "may_fail": sorted(claim.may_fail),
            **details,
        }
    return ClaimReport(
        claim.id, claim.alias, claim.citation, claim.statement, claim.domain, claim.expectation,
        len(points), counts, false_pts, undecided_pts, passed, ceiling, details, elapsed,
    )


def run_claim(claim_id: str, ceiling: int = DEFAULT_CEILING_BITS) -> ClaimReport:
    claim = resolve(claim_id)
    start = time.perf_counter()
    points = claim.grid()
    verdicts = _evaluate(claim.id, points, ceiling)
    return _assemble(claim, points, verdicts, ceiling, time.perf_counter() - start)


@dataclass
class SuiteResult:
    reports: list[ClaimReport]
    exit_status: int
    ceiling_bits: int

    @property
    def passed(self) -> bool:
        return self.exit_status == 0


def exit_status(reports: Sequence[ClaimReport]) -> int:
    """2 if any point is Undecided, else 1 if any expectation fails, else 0."""
    if any(r.counts["undecided"] for r in reports):
        return 2
    if not all(r.passed for r in reports):
        return 1
    return 0


def _select(ids: str | Sequence[str]) -> list[ClaimRecord]:
    if ids == "all" or ids == ["all"]:
        return list(CLAIMS.values())
    if isinstance(ids, str):
        ids = [s for s in ids.split(",") if s]
    return [resolve(i) for i in ids]


CHUNK = 2048


def run_suite(
    ids: str | Sequence[str] = "all",
    ceiling: int = DEFAULT_CEILING_BITS,
    jobs: int = 1,
) -> SuiteResult:
    """Run claims in catalog order; ``jobs > 1`` spreads grid chunks over processes.

    Reports are assembled in grid order, so the result does not depend on
    ``jobs``.
    """
    claims = _select(ids)
    if jobs <= 1:
        return SuiteResult([run_claim(c.id, ceiling) for c in claims], 0, ceiling)._finish()

    grids = {c.id: c.grid() for c in claims}
    tasks = []
    for c in claims:
        size = len(grids[c.id])
        for lo in range(0, size, CHUNK):
            tasks.append((c.id, lo, min(lo + CHUNK, size), ceiling))
    start = time.perf_counter()
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_evaluate_chunk, tasks))
    by_claim: dict[str, list[Verdict]] = {c.id: [] for c in claims}
    for (cid, *_), verdicts in zip(tasks, results):
        by_claim[cid].extend(verdicts)
    elapsed = time.perf_counter() - start
    reports = [_assemble(c, grids[c.id], by_claim[c.id], ceiling, elapsed) for c in claims]
    return SuiteResult(reports, 0, ceiling)._finish()


def _finish(self: SuiteResult) -> SuiteResult:
    self.exit_status = exit_status(self.reports)
    return self


SuiteResult._finish = _finish


def default_ceiling() -> int:
    raw = os.environ.get("PRECISION_CEILING_BITS")
    if not raw:
        return DEFAULT_CEILING_BITS
    value = int(raw)
    if value < 1:
        raise ValueError("PRECISION_CEILING_BITS must be positive")
    return value
