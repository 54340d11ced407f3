"""Acceptance criteria 1-10, one PASS/FAIL line each (see the terminal summary).

Run standalone with ``python3 tests/test_acceptance.py``.
"""

import io
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import record  # noqa: E402
from test_codes import M_MAX, R_MAX, enumerate_codes  # noqa: E402
from test_lie import _so_weyl  # noqa: E402
from test_obstruct import random_query  # noqa: E402

from torusbound import cli, codes, lie  # noqa: E402
from torusbound import obstruct as ob  # noqa: E402
from torusbound.certify import run_claim  # noqa: E402
from torusbound.exactnum import DEFAULT_CEILING_BITS  # noqa: E402

PRINTED_KAPPA = ["3.14823e-15", "1.45259e-15", "4.80780e-16", "3.40869e-16", "1.10871e-16", "2.15684e-17"]
REL_TOL = Fraction(5, 10**6)


def run_cli(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def verdict_map(text):
    """(claim id, point) -> verdict label, for points that are not CertTrue."""
    env = json.loads(text)
    marks = {}
    for rep in env["result"]["reports"]:
        for p in rep["false_points"]:
            marks[(rep["id"], json.dumps(p))] = "false"
        for p in rep["undecided_points"]:
            marks[(rep["id"], json.dumps(p))] = "undecided"
    return env, marks


@pytest.fixture(scope="module")
def default_suite():
    t = time.perf_counter()
    code, text = run_cli("certify", "--suite", "all", "--json", "--jobs", "1")
    return code, text, time.perf_counter() - t


def test_criterion_1_table1():
    t = time.perf_counter()
    code, text = run_cli("table1", "--max-i", "6")
    elapsed = time.perf_counter() - t
    rows = json.loads(text)["result"]["rows"][1:]
    ns_ok = [r["n"] for r in rows] == [54, 74, 100, 135, 183, 247]
    kappa_ok = True
    for row, printed in zip(rows, PRINTED_KAPPA):
        lo, hi = Fraction(row["kappa"]["lo"]), Fraction(row["kappa"]["hi"])
        p = Fraction(printed)
        # the printed value is rounded to 6 digits: it must lie within tolerance of the enclosure
        kappa_ok &= lo * (1 - REL_TOL) <= p <= hi * (1 + REL_TOL)
        kappa_ok &= (hi - lo) / lo <= REL_TOL
    ok = code == 0 and ns_ok and kappa_ok and elapsed < 5
    record(1, ok, f"n_i {'exact' if ns_ok else 'WRONG'}, kappa enclosures {'match' if kappa_ok else 'MISMATCH'}", elapsed)
    assert ok


def test_criterion_2_lemma22():
    t = time.perf_counter()
    c3, c4 = run_claim("C3"), run_claim("C4")
    elapsed = time.perf_counter() - t
    c3_dom = c3.grid_size == len(range(54, 73, 2))
    c4_dom = c4.grid_size == len(range(74, 10_001, 2))
    ok = c3.passed and c4.passed and c3_dom and c4_dom and c3.counts["true"] == c3.grid_size and c4.counts["true"] == c4.grid_size and elapsed < 30
    record(2, ok, f"C3 {c3.counts}, C4 {c4.counts}", elapsed)
    assert ok


def test_criterion_3_lemma41():
    t = time.perf_counter()
    rep = run_claim("C10")
    elapsed = time.perf_counter() - t
    got = set(rep.false_points)
    margin = rep.details.get("margin_at_121", {})
    ok = {126, 131} <= got <= {121, 126, 131} and rep.counts["undecided"] == 0 and bool(margin) and elapsed < 60
    record(3, ok, f"CertFalse set {sorted(got)}, undecided {rep.counts['undecided']}, n=121 margin flagged", elapsed)
    assert ok


def test_criterion_4_lemma51():
    t = time.perf_counter()
    reps = [run_claim(c) for c in ("C7", "C8", "C9")]
    elapsed = time.perf_counter() - t
    ok = all(r.passed and r.counts["false"] == 0 and r.counts["undecided"] == 0 for r in reps) and elapsed < 120
    total = sum(r.grid_size for r in reps)
    record(4, ok, f"C7-C9 all true on {total} points", elapsed)
    assert ok


def test_criterion_5_envelope_vs_power():
    t = time.perf_counter()
    rep = run_claim("C6")
    elapsed = time.perf_counter() - t
    ok = rep.passed and rep.grid_size == len(range(4, 2049, 2)) and rep.counts["true"] == rep.grid_size
    record(5, ok, f"C6 {rep.counts}", elapsed)
    assert ok


def test_criterion_6_griesmer():
    t = time.perf_counter()
    violations = 0
    census = 0
    for r in range(1, R_MAX + 1):
        for lengths, minw in enumerate_codes(r, M_MAX):
            census += len(lengths)
            bound = {int(w): codes.griesmer_length(r, int(w)) for w in set(minw.tolist())}
            violations += int(sum(int(m) < bound[int(w)] for m, w in zip(lengths, minw)))
    w = codes.forcing_weight(1, 54, 0)
    hand = (codes.griesmer_length(4, w), codes.griesmer_length(5, w)) == (27, 28)
    checks = codes.involution_forcing_check(1, 54, 0, 4).is_false and codes.involution_forcing_check(1, 54, 0, 5).is_true
    elapsed = time.perf_counter() - t
    ok = violations == 0 and hand and checks
    record(6, ok, f"{census} codes, {violations} violations, (1,54,0,r=4/5) -> 27/28 vs 27", elapsed)
    assert ok


def test_criterion_7_grassmannians():
    t = time.perf_counter()
    cases = disagreements = 0
    for m in range(1, 201):
        for p in (2, 3):
            if p == 3 and m % 2:
                continue
            cases += 1
            values = {
                lie.grassmannian_closed_form(p, m),
                lie.grassmannian_weyl_quotient(p, m),
                lie.euler_characteristic(lie.RealGrassmannian(p, m)),
                _so_weyl(p + m) // (_so_weyl(p) * _so_weyl(m)),
            }
            disagreements += len(values) != 1
    elapsed = time.perf_counter() - t
    ok = disagreements == 0
    record(7, ok, f"{cases} grassmannian cases, {disagreements} disagreements", elapsed)
    assert ok


def test_criterion_8_obstruction_engine():
    t = time.perf_counter()
    expected = [(14, 6000, True, True), (14, 5000, True, False), (13, 6000, False, False)]
    examples_ok = True
    for r, chi, applicable, obstructed in expected:
        e = ob.check_euler(ob.ObstructionQuery(54, r, ob.Euler(chi)))
        examples_ok &= e.applicable.is_true is applicable and e.applicable.is_false is not applicable
        examples_ok &= e.obstructed.is_true is obstructed and e.obstructed.is_false is not obstructed
    rng = random.Random(2026)
    gate_bad = monotone_bad = 0
    for _ in range(10_000):
        for e in ob.analyze(random_query(rng)).entries:
            gate_bad += e.obstructed.is_true and not e.applicable.is_true
        n = 2 * rng.randint(1, 200)
        r = rng.randint(0, n)
        chi = rng.randint(0, 10**12)
        lo = ob.check_euler(ob.ObstructionQuery(n, r, ob.Euler(chi)))
        hi = ob.check_euler(ob.ObstructionQuery(n, r, ob.Euler(chi + rng.randint(0, 10**9))))
        monotone_bad += lo.obstructed.is_true and not hi.obstructed.is_true
    elapsed = time.perf_counter() - t
    ok = examples_ok and gate_bad == 0 and monotone_bad == 0
    record(8, ok, f"examples {'exact' if examples_ok else 'WRONG'}, 10^4 queries: {gate_bad} gate / {monotone_bad} monotonicity failures", elapsed)
    assert ok


def test_criterion_9_determinism(default_suite):
    code1, text1, t1 = default_suite
    t = time.perf_counter()
    code8, text8 = run_cli("certify", "--suite", "all", "--json", "--jobs", "8")
    doubled = str(2 * DEFAULT_CEILING_BITS)
    code2, text2 = run_cli("certify", "--suite", "all", "--json", "--precision", doubled)
    elapsed = t1 + time.perf_counter() - t
    identical = text1 == text8 and code1 == code8
    _, base = verdict_map(text1)
    _, high = verdict_map(text2)
    # every decided point must keep its verdict; only Undecided may resolve
    flips = [k for k, v in high.items() if v == "false" and base.get(k) != "false"]
    flips += [k for k, v in base.items() if v == "false" and high.get(k) != "false"]
    ok = identical and not flips
    record(9, ok, f"jobs 1 vs 8 {'byte-identical' if identical else 'DIFFER'}, {doubled}-bit rerun: {len(flips)} flips", elapsed)
    assert ok


def test_criterion_10_starvation(default_suite):
    _, text_default, _ = default_suite
    t = time.perf_counter()
    code, text = run_cli("certify", "--suite", "all", "--json", "--precision", "16")
    elapsed = time.perf_counter() - t
    _, base = verdict_map(text_default)
    _, starved = verdict_map(text)
    new_false = [k for k, v in starved.items() if v == "false" and base.get(k) != "false"]
    undecided = sum(v == "undecided" for v in starved.values())
    ok = code == 2 and not new_false
    record(10, ok, f"16-bit exit {code}, {undecided} undecided, {len(new_false)} CertTrue->CertFalse", elapsed)
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
