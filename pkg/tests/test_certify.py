from fractions import Fraction

import pytest

from torusbound import certify as cf
from torusbound.exactnum import CERT_TRUE, Verdict

CHEAP = ["T1-n-seq", "T1-kappa", "L2.2-base", "L2.2-chain", "envelope-vs-2pow", "L5.1-1",
         "fig-ref-bound", "kappa-monotone", "sphere-power-example"]


def test_catalog_is_complete():
    assert [c.alias for c in cf.CLAIMS.values()] == [f"C{i}" for i in range(1, 16)]
    assert len({c.id for c in cf.CLAIMS.values()}) == 15
    for c in cf.CLAIMS.values():
        assert c.statement.strip() and c.citation.strip() and c.domain.strip()
        grid = c.grid()
        assert len(grid) == len(c.grid()) > 0


def test_empty_statement_rejected():
    with pytest.raises(ValueError):
        cf.ClaimRecord("x", "C0", "c", " ", "d", "all-true", lambda: [1], lambda p, b: CERT_TRUE)


def test_unknown_claim():
    with pytest.raises(KeyError):
        cf.run_claim("no-such-claim")


def test_alias_resolution():
    assert cf.resolve("C3").id == "L2.2-base"
    assert cf.resolve("L2.2-base").alias == "C3"


@pytest.mark.parametrize("claim_id", CHEAP)
def test_cheap_claims_pass(claim_id):
    r = cf.run_claim(claim_id)
    assert sum(r.counts.values()) == r.grid_size
    assert r.counts["undecided"] == 0
    assert r.passed


def test_lemma41_exceptions():
    r = cf.run_claim("L4.1-exceptions")
    assert r.false_points == [126, 131]
    assert r.counts["undecided"] == 0 and r.passed
    d = r.details
    assert d["margin_at_121"]["integer-rank"].lo > Fraction(79, 100)
    assert d["margin_at_121"]["literal"].hi < 0
    assert len(d["literal_false_points"]) == 34 and d["literal_false_points"][:3] == [121, 123, 125]


def test_lemma41_point_margins():
    # nearest points either side of the two exceptions
    assert cf.lemma41_point(142, 4096).is_true
    assert cf.lemma41_point(125, 4096).is_true
    assert cf.lemma41_point(126, 4096).is_false
    assert cf.lemma41_point(131, 4096).is_false


def test_sphere_power_details():
    d = cf.run_claim("C15").details
    assert d["excluded_k_ranges"] == [[2, 157]]
    assert d["max_k_by_rank_hypothesis"] == 157
    assert d["published_range"] == [124, 314]


def test_s_alpha_difference_exact_at_k_equal_n_over_alpha():
    # s_a(n) - s_{a-1}(n - n/a) has equal log arguments, so the log term folds to 0
    e = cf.s_alpha_difference(4, 64, 3, 48)
    assert e.exact_value() is not None


def _report(expectation, false=(), undecided=(), must=frozenset(), may=frozenset()):
    claim = cf.ClaimRecord("t", "T", "c", "s", "d", expectation, lambda: [], lambda p, b: CERT_TRUE,
                           must_fail=must, may_fail=may)
    pts = list(range(5))
    verdicts = [Verdict.undecided(16) if p in undecided else Verdict.of(p not in false) for p in pts]
    return cf._assemble(claim, pts, verdicts, 16, 0.0)


def test_expectations_and_exit_status():
    assert _report("all-true").passed
    assert not _report("all-true", false=[1]).passed
    assert not _report("report-only", undecided=[2]).passed
    assert _report("report-only", false=[1, 2]).passed
    assert _report("exception-set", false=[1], must=frozenset({1}), may=frozenset({1, 2})).passed
    assert not _report("exception-set", false=[3], must=frozenset({1}), may=frozenset({1, 3})).passed
    assert not _report("exception-set", false=[1, 4], must=frozenset({1}), may=frozenset({1, 2})).passed
    ok, bad, und = _report("all-true"), _report("all-true", false=[0]), _report("all-true", undecided=[0])
    assert cf.exit_status([ok]) == 0
    assert cf.exit_status([ok, bad]) == 1
    assert cf.exit_status([bad, und]) == 2


def test_suite_single_claim():
    s = cf.run_suite(["T1-n-seq"])
    assert s.exit_status == 0 and len(s.reports) == 1


def test_suite_parallel_matches_serial():
    ids = ["L2.2-base", "envelope-vs-2pow", "L5.1-1", "L4.1-exceptions"]
    serial = cf.run_suite(ids, jobs=1)
    parallel = cf.run_suite(ids, jobs=3)
    for a, b in zip(serial.reports, parallel.reports):
        assert (a.counts, a.false_points, a.undecided_points, a.passed) == (b.counts, b.false_points, b.undecided_points, b.passed)


def test_higher_ceiling_never_flips():
    for claim_id in ["T1-kappa", "L4.1-exceptions", "envelope-vs-2pow", "kappa-monotone"]:
        starved = cf.run_claim(claim_id, 16)
        full = cf.run_claim(claim_id, 4096)
        assert full.counts["undecided"] == 0
        assert not set(starved.false_points) - set(full.false_points)
        assert starved.counts["true"] <= full.counts["true"]


def test_default_ceiling_env(monkeypatch):
    monkeypatch.setenv("PRECISION_CEILING_BITS", "256")
    assert cf.default_ceiling() == 256
    monkeypatch.delenv("PRECISION_CEILING_BITS")
    assert cf.default_ceiling() == 4096
    monkeypatch.setenv("PRECISION_CEILING_BITS", "0")
    with pytest.raises(ValueError):
        cf.default_ceiling()
