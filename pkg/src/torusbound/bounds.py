"""Bound functions on the fixed-point sets of torus actions.

``f0`` is the recursive bound on the even Betti sum of the fixed-point set
under logarithmic symmetry rank, ``theorem_a_envelope`` its closed-form
majorant, and ``kappa_sequence`` the scaling constants relating the two.
``s_alpha`` / ``alpha_constants`` / ``theorem_b_bounds`` cover the linear
symmetry-rank regime.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import (
    CERT_TRUE,
    DEFAULT_CEILING_BITS,
    DomainError,
    Expr,
    Interval,
    Verdict,
    add,
    const,
    floor_log_exact,
    ln,
    log,
    mul,
    power,
    precision_ladder,
)

FOUR_THIRDS = Fraction(4, 3)
KAPPA_WIDTH_TARGET = Fraction(1, 10**21)


def s_of(n: int) -> int:
    """floor(log2 n) + floor(log2(n + 2)) - 2."""
    if n < 1:
        raise DomainError(f"s(n) needs n >= 1, got {n}")
    return floor_log_exact(2, n) + floor_log_exact(2, n + 2) - 2


def recursion_argument(n: int) -> int:
    """The smaller dimension 2*floor((3n - 4)/8) the f0 recursion descends to."""
    return 2 * ((3 * n - 4) // 8)


_f0_memo: dict[int, int] = {}
_f0_lock = threading.Lock()


def f0(n: int) -> int:
    """Recursive bound: n/2 + 1 up to 52, then (2**s(n) - 1) * f0(2*floor((3n-4)/8)).

    Accepts even n in [2, 52] and every integer n >= 54.
    """
    if not isinstance(n, int) or isinstance(n, bool):
        raise DomainError(f"f0 needs an integer, got {n!r}")
    if n < 2 or (n <= 53 and n % 2):
        raise DomainError(f"f0 is undefined at n = {n}")
    cached = _f0_memo.get(n)
    if cached is not None:
        return cached
    # iterative descent keeps the stack flat for large n
    chain = []
    m = n
    while m >= 54 and m not in _f0_memo:
        chain.append(m)
        m = recursion_argument(m)
    value = _f0_memo.get(m, m // 2 + 1)
    for m in reversed(chain):
        value = (2 ** s_of(m) - 1) * value
        with _f0_lock:
            _f0_memo.setdefault(m, value)
    return value if chain else _f0_memo.setdefault(n, value)


def envelope_expr(n: int | Fraction) -> Expr:
    """(n/2 + 1) ** (1 + log_{4/3}(n/2 + 1)) as an expression."""
    x = Fraction(n) / 2 + 1
    return power(x, add(1, log(FOUR_THIRDS, x)))


def log_envelope_expr(n: int | Fraction) -> Expr:
    """Natural log of the envelope: (1 + log_{4/3} x) * ln x with x = n/2 + 1."""
    x = Fraction(n) / 2 + 1
    return mul(add(1, log(FOUR_THIRDS, x)), ln(x))


def theorem_a_envelope(n: int, bits: int = 64) -> Interval:
    """Rigorous enclosure of (n/2 + 1)**(1 + log_{4/3}(n/2 + 1))."""
    if n < 2:
        raise DomainError(f"envelope needs n >= 2, got {n}")
    return envelope_expr(n).evaluate(bits)


@dataclass(frozen=True)
class KappaEntry:
    index: int
    n: int
    kappa: Interval
    f0_value: int
    verdict: Verdict = CERT_TRUE
    bits: int = 0


def n_sequence(max_i: int) -> list[int]:
    """n_0 = 0, n_1 = 54, then each n_i minimal with n_{i-1} <= 2*floor((3 n_i - 4)/8)."""
    if max_i < 0:
        raise DomainError("max_i must be >= 0")
    seq = [0, 54][: max_i + 1]
    while len(seq) <= max_i:
        prev = seq[-1]
        n = prev + 1
        while recursion_argument(n) < prev:
            n += 1
        if recursion_argument(n - 1) >= prev:
            raise AssertionError(f"minimality failed at n_{len(seq)} = {n}")
        seq.append(n)
    return seq


def kappa_expr(n: int) -> Expr:
    return f0(n) / envelope_expr(n)


def kappa_sequence(max_i: int, ceiling: int = DEFAULT_CEILING_BITS) -> list[KappaEntry]:
    """KappaEntry rows 0..max_i; kappa_0 = 1 exactly.

    Each enclosure is refined until its width is at most 1e-21; entries that
    cannot reach it below ``ceiling`` carry an undecided verdict.
    """
    entries = []
    for i, n in enumerate(n_sequence(max_i)):
        if i == 0:
            entries.append(KappaEntry(0, 0, Interval.point(1), 1))
            continue
        e = kappa_expr(n)
        enc, bits = None, 0
        for bits in precision_ladder(ceiling):
            enc = e.evaluate(bits)
            if enc.width <= KAPPA_WIDTH_TARGET:
                break
        verdict = CERT_TRUE if enc.width <= KAPPA_WIDTH_TARGET else Verdict.undecided(bits)
        entries.append(KappaEntry(i, n, enc, f0(n), verdict, bits))
    return entries


@dataclass(frozen=True)
class AlphaConstants:
    """a_alpha = 3*2**(alpha-4)/alpha and b_alpha = 1 + 1/(2**(alpha-3) - 1).

    For alpha = 3, ``b_alpha`` is None and ``log_term_zero`` is set: the
    logarithm to base b_3 is read as 0.
    """

    alpha: int
    a_alpha: Fraction
    b_alpha: Fraction | None
    log_term_zero: bool = False


def alpha_constants(alpha: int) -> AlphaConstants:
    if alpha < 3:
        raise DomainError(f"alpha must be >= 3, got {alpha}")
    a = Fraction(3 * 2 ** alpha, 16 * alpha)
    if alpha == 3:
        return AlphaConstants(3, a, None, True)
    return AlphaConstants(alpha, a, 1 + Fraction(1, 2 ** (alpha - 3) - 1))


def s_alpha_expr(alpha: int, n: int | Fraction) -> Expr:
    """n/(2 alpha) + 2 log2(n/(2 alpha)) + alpha + 3."""
    if alpha < 3:
        raise DomainError(f"alpha must be >= 3, got {alpha}")
    if n <= 0:
        raise DomainError(f"s_alpha needs n > 0, got {n}")
    q = Fraction(n) / (2 * alpha)
    return add(const(q + alpha + 3), mul(2, log(2, q)))


def s_alpha(alpha: int, n: int, bits: int = 64) -> Interval:
    """Enclosure of s_alpha(n); a point interval when n/(2 alpha) is a power of 2."""
    return s_alpha_expr(alpha, n).evaluate(bits)


def betti_sum_expr(alpha: int, n: int) -> Expr:
    """(n/2 + 1)(1 + log_{b_alpha}(n/2 + 1)); exactly n/2 + 1 for alpha = 3."""
    c = alpha_constants(alpha)
    x = Fraction(n, 2) + 1
    if c.log_term_zero:
        return const(x)
    return mul(x, add(1, log(c.b_alpha, x)))


def theorem_b_bounds(alpha: int, n: int, bits: int = 64) -> tuple[int, Interval]:
    """(components bound floor(a_alpha n) + 1, enclosure of the even Betti sum bound)."""
    if n < 2 or n % 2:
        raise DomainError(f"n must be even and >= 2, got {n}")
    c = alpha_constants(alpha)
    components = int(c.a_alpha * n) + 1
    return components, betti_sum_expr(alpha, n).evaluate(bits)


def reference_exponential(n: int) -> Fraction:
    """1.13576e-12 * 2**n, exactly."""
    return Fraction(113576, 10**17) * 2 ** n
