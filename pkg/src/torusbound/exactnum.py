"""Exact rationals, rigorous interval enclosures and certified comparison.

Every interval here has :class:`fractions.Fraction` endpoints. Transcendental
values (logarithms, exponentials, real powers) are computed with fixed-point
integer series whose truncation and rounding errors are bounded explicitly,
so the returned interval always contains the true real value.

Precision is measured in bits.  A comparison starts at a modest precision and
doubles until the two enclosures separate or a ceiling is reached, in which
case the answer is :data:`Verdict` ``undecided`` rather than a guess.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

Number = Union[int, Fraction]

DEFAULT_START_BITS = 64
DEFAULT_CEILING_BITS = 4096


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PrecisionError(ArithmeticError):
    """A requested width could not be reached below the precision ceiling."""

    def __init__(self, message: str, best: "Interval", bits: int):
        super().__init__(message)
        self.best = best
        self.bits = bits


# ---------------------------------------------------------------------------
# Verdicts and orderings


class Ordering(enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"

    def flipped(self) -> "Ordering":
        if self is Ordering.LESS:
            return Ordering.GREATER
        if self is Ordering.GREATER:
            return Ordering.LESS
        return self


@dataclass(frozen=True)
class Verdict:
    """Three-valued certified truth.

    ``kind`` is one of ``"true"``, ``"false"`` or ``"undecided"``; an undecided
    verdict records the precision (in bits) at which the attempt gave up.
    """

    kind: str
    bits: int | None = None

    def __post_init__(self):
        if self.kind not in ("true", "false", "undecided"):
            raise ValueError(f"bad verdict kind {self.kind!r}")

    @classmethod
    def of(cls, flag: bool) -> "Verdict":
        return CERT_TRUE if flag else CERT_FALSE

    @classmethod
    def undecided(cls, bits: int) -> "Verdict":
        return cls("undecided", bits)

    @property
    def is_true(self) -> bool:
        return self.kind == "true"

    @property
    def is_false(self) -> bool:
        return self.kind == "false"

    @property
    def is_undecided(self) -> bool:
        return self.kind == "undecided"

    def __and__(self, other: "Verdict") -> "Verdict":
        if self.is_false or other.is_false:
            return CERT_FALSE
        if self.is_true and other.is_true:
            return CERT_TRUE
        return self if self.is_undecided else other

    def __or__(self, other: "Verdict") -> "Verdict":
        if self.is_true or other.is_true:
            return CERT_TRUE
        if self.is_false and other.is_false:
            return CERT_FALSE
        return self if self.is_undecided else other

    def __invert__(self) -> "Verdict":
        if self.is_undecided:
            return self
        return Verdict.of(not self.is_true)

    def label(self) -> str:
        if self.is_true:
            return "CertTrue"
        if self.is_false:
            return "CertFalse"
        return f"Undecided({self.bits})"

    def __str__(self) -> str:
        return self.label()


CERT_TRUE = Verdict("true")
CERT_FALSE = Verdict("false")


# ---------------------------------------------------------------------------
# Dyadic rounding helpers


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def round_down(x: Fraction, bits: int) -> Fraction:
    """Largest dyadic with about ``bits`` significant bits that is <= x."""
    if x == 0 or x.denominator == 1 and abs(x.numerator).bit_length() <= bits:
        return x
    shift = bits - (abs(x.numerator).bit_length() - x.denominator.bit_length())
    if shift >= 0:
        num = _floor_div(x.numerator << shift, x.denominator)
        return Fraction(num, 1 << shift)
    num = _floor_div(x.numerator, x.denominator << -shift)
    return Fraction(num << -shift)


def round_up(x: Fraction, bits: int) -> Fraction:
    return -round_down(-x, bits)


def _to_fraction(value: Number | float | str) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(value)


# ---------------------------------------------------------------------------
# Intervals


class Interval:
    """Closed interval ``[lo, hi]`` with exact rational endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: Number | str, hi: Number | str | None = None):
        lo = _to_fraction(lo)
        hi = lo if hi is None else _to_fraction(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def point(cls, x: Number) -> "Interval":
        return cls(x, x)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: Number | "Interval") -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def round_out(self, bits: int) -> "Interval":
        if self.is_point:
            return self
        return Interval(round_down(self.lo, bits), round_up(self.hi, bits))

    def relative_width(self) -> Fraction | None:
        """Width divided by the smallest magnitude in the interval, or None if it spans 0."""
        if self.lo <= 0 <= self.hi:
            return None if not (self.lo == self.hi == 0) else Fraction(0)
        return self.width / min(abs(self.lo), abs(self.hi))

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self) -> str:
        if self.is_point:
            return f"Interval({self.lo})"
        return f"Interval([{float(self.lo):.17g}, {float(self.hi):.17g}])"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Interval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    @staticmethod
    def _wrap(other: "Interval | Number") -> "Interval":
        if isinstance(other, Interval):
            return other
        return Interval.point(_to_fraction(other))

    def __add__(self, other):
        o = self._wrap(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        o = self._wrap(other)
        return Interval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        o = self._wrap(other)
        if self.lo >= 0 and o.lo >= 0:
            return Interval(self.lo * o.lo, self.hi * o.hi)
        p = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(p), max(p))

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval division by an interval containing 0")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * self._wrap(other).reciprocal()

    def __rtruediv__(self, other):
        return self._wrap(other) * self.reciprocal()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("Interval ** requires an integer exponent; use pow_enclosure")
        if k == 0:
            return Interval.point(1)
        if k < 0:
            return (self ** -k).reciprocal()
        a, b = self.lo ** k, self.hi ** k
        if k % 2 == 1 or self.lo >= 0:
            return Interval(min(a, b), max(a, b))
        if self.hi <= 0:
            return Interval(b, a)
        return Interval(0, max(a, b))


# ---------------------------------------------------------------------------
# Fixed-point series kernels
#
# Each kernel works with integers scaled by 2**w and returns (value, err) such
# that the true quantity lies in [(value - err) / 2**w, (value + err) / 2**w].


def _atanh_fixed(z: Fraction, w: int, per_term_err: int) -> tuple[int, int]:
    """2*atanh(z) scaled by 2**w, for |z| <= 1/3."""
    zf = (z.numerator << w) // z.denominator
    z2 = (zf * zf) >> w
    total = 0
    term = zf
    j = 0
    terms = 0
    # the tail after the last computed term is below 2 ulps once |term| <= 1
    while term != 0 and term != -1:
        total += term // (2 * j + 1) if term >= 0 else -((-term) // (2 * j + 1))
        term = (term * z2) >> w
        j += 1
        terms += 1
        if terms > 4 * w + 64:
            raise RuntimeError("atanh series failed to converge")
    err = per_term_err * terms + 4
    return 2 * total, 2 * err


@lru_cache(maxsize=None)
def _ln2_fixed(w: int) -> tuple[int, int]:
    return _atanh_fixed(Fraction(1, 3), w, 4)


_SQRT_HALF_SQ = Fraction(1, 2)


def _ln_fixed(x: Fraction, w: int) -> tuple[int, int]:
    """ln(x) scaled by 2**w with an error bound in ulps, for x > 0."""
    k = x.numerator.bit_length() - x.denominator.bit_length()
    y = x / (1 << k) if k >= 0 else x * (1 << -k)
    # bring y into [1/sqrt 2, sqrt 2] so |z| <= 0.1716
    while y * y > 2:
        y /= 2
        k += 1
    while y * y < _SQRT_HALF_SQ:
        y *= 2
        k -= 1
    z = (y - 1) / (y + 1)
    if z == 0:
        vy, ey = 0, 0
    else:
        vy, ey = _atanh_fixed(z, w, 4)
    if k == 0:
        return vy, ey + 1
    l2, e2 = _ln2_fixed(w)
    return vy + k * l2, ey + abs(k) * e2 + 1


def _exp_fixed_small(rho_num: int, w: int) -> tuple[int, int]:
    """exp(rho_num / 2**w) scaled by 2**w for |rho| <= 1/2, with error in ulps."""
    one = 1 << w
    total = 0
    term = one
    j = 0
    while term != 0:
        total += term
        j += 1
        term = (term * rho_num) // (one * j) if term * rho_num >= 0 else -((-term * rho_num) // (one * j))
        if j > 4 * w + 64:
            raise RuntimeError("exp series failed to converge")
    # per-term error <= 2 ulps; remaining tail <= 4 ulps once a term vanishes
    return total, 2 * j + 6


@lru_cache(maxsize=1 << 16)
def ln_point(x: Fraction, bits: int) -> Interval:
    """Enclosure of ln(x) for a positive rational, accurate to roughly 2**-bits."""
    if x <= 0:
        raise DomainError(f"ln undefined for x = {x}")
    if x == 1:
        return Interval.point(0)
    w = max(bits, 8)
    v, e = _ln_fixed(x, w)
    scale = Fraction(1, 1 << w)
    return Interval((v - e) * scale, (v + e) * scale)


def _exp_point_bounds(q: Fraction, w: int) -> tuple[Fraction, Fraction]:
    """Lower and upper rational bounds for exp(q)."""
    if q == 0:
        return Fraction(1), Fraction(1)
    l2, e2 = _ln2_fixed(w)
    qf_lo = (q.numerator << w) // q.denominator
    # k ~ round(q / ln 2)
    k = (2 * qf_lo + l2) // (2 * l2)
    # r = q - k ln2 lies in [r_lo, r_hi] (scaled by 2**w)
    r_center = qf_lo - k * l2
    r_err = abs(k) * e2 + 1
    r_lo = r_center - r_err
    r_hi = r_center + r_err + 1
    half = 1 << (w - 1)
    if r_lo < -half or r_hi > half:
        raise RuntimeError("exp argument reduction out of range")
    v_lo, err_lo = _exp_fixed_small(r_lo, w)
    v_hi, err_hi = _exp_fixed_small(r_hi, w)
    scale = Fraction(1, 1 << w)
    lo = (v_lo - err_lo) * scale
    hi = (v_hi + err_hi) * scale
    if lo <= 0:
        lo = Fraction(0)
    two_k = Fraction(2) ** k
    return lo * two_k, hi * two_k


@lru_cache(maxsize=1 << 14)
def _exp_lo(q: Fraction, bits: int) -> Fraction:
    return _exp_point_bounds(q, _exp_working_bits(q, bits))[0]


@lru_cache(maxsize=1 << 14)
def _exp_hi(q: Fraction, bits: int) -> Fraction:
    return _exp_point_bounds(q, _exp_working_bits(q, bits))[1]


def _exp_working_bits(q: Fraction, bits: int) -> int:
    # k*ln2 reduction loses about log2|k| bits; keep the series honest at tiny precisions
    return max(bits, 8) + max(0, abs(math.floor(q)).bit_length())


# ---------------------------------------------------------------------------
# Public enclosure operations


def ln_interval(x: Interval, bits: int) -> Interval:
    if x.lo <= 0:
        raise DomainError(f"ln undefined on {x!r}")
    if x.is_point:
        return ln_point(x.lo, bits)
    return Interval(ln_point(x.lo, bits).lo, ln_point(x.hi, bits).hi)


def exp_interval(x: Interval, bits: int) -> Interval:
    lo = round_down(x.lo, bits + 8)
    hi = round_up(x.hi, bits + 8)
    return Interval(_exp_lo(lo, bits), _exp_hi(hi, bits)).round_out(bits + 4)


def ln_enclosure(
    x: Number,
    target_width: Number,
    ceiling: int = DEFAULT_CEILING_BITS,
) -> Interval:
    """Enclosure of ln(x) whose width does not exceed ``target_width``.

    Raises :class:`DomainError` for x <= 0 and :class:`PrecisionError` (carrying
    the best interval found) when the width is unreachable below ``ceiling``.
    """
    x = _to_fraction(x)
    target_width = _to_fraction(target_width)
    if x <= 0:
        raise DomainError(f"ln undefined for x = {x}")
    if target_width <= 0:
        raise DomainError("target width must be positive")
    bits = min(DEFAULT_START_BITS, ceiling)
    while True:
        enc = ln_point(x, bits)
        if enc.width <= target_width:
            return enc
        if bits >= ceiling:
            raise PrecisionError(
                f"ln({x}) width {float(enc.width):.3g} > {float(target_width):.3g} at {bits} bits",
                enc,
                bits,
            )
        bits = min(2 * bits, ceiling)


def pow_enclosure(base: Interval, exponent: Interval, bits: int) -> Interval:
    """Enclosure of base**exponent over all pairs drawn from the two intervals."""
    if base.lo <= 0:
        raise DomainError(f"pow requires a positive base, got {base!r}")
    if base.is_point and base.lo == 1:
        return Interval.point(1)
    if exponent.is_point and exponent.lo.denominator == 1:
        k = int(exponent.lo)
        if base.is_point or abs(k) <= 64:
            return base ** k
    ln_b = ln_interval(base, bits + 8)
    return exp_interval(exponent * ln_b, bits)


def floor_log_exact(base: int, n: int) -> int:
    """The unique e with base**e <= n < base**(e+1), using integer arithmetic only."""
    if base < 2:
        raise DomainError("base must be >= 2")
    if n < 1:
        raise DomainError("n must be >= 1")
    if base == 2:
        return n.bit_length() - 1
    # bit-length estimate, then correct by exact comparison
    e = max(0, (n.bit_length() - 1) // base.bit_length())
    p = base ** e
    while p > n:
        e -= 1
        p //= base
    while p * base <= n:
        e += 1
        p *= base
    return e


def floor_log2(x: Fraction | int) -> int:
    """floor(log2 x) for a positive rational, exactly."""
    x = Fraction(x)
    if x <= 0:
        raise DomainError("log2 needs x > 0")
    p, q = x.numerator, x.denominator
    e = p.bit_length() - q.bit_length()
    # 2**e <= p/q < 2**(e+2) from the bit lengths; settle which
    if (p << -e if e < 0 else p) < (q << e if e > 0 else q):
        e -= 1
    return e


def affine_log2_sign(c: Fraction, k: int, x: Fraction, ceiling: int = DEFAULT_CEILING_BITS) -> Verdict:
    """Verdict for c + k*log2(x) >= 0 with k > 0.

    The integer bracket floor(log2 x) <= log2 x < floor(log2 x) + 1 settles most
    cases without series; the rest go through :func:`certify`.
    """
    if k <= 0:
        raise DomainError("k must be positive")
    c, x = Fraction(c), Fraction(x)
    e = floor_log2(x)
    if c + k * e >= 0:
        return CERT_TRUE
    if c + k * (e + 1) <= 0:
        return CERT_FALSE
    return certify(add(const(c), mul(k, log(2, x))), ">=", 0, ceiling)


def exact_log(base: Fraction, x: Fraction) -> Fraction | None:
    """log_base(x) when it is an integer, else None."""
    if base <= 0 or base == 1 or x <= 0:
        return None
    if x == 1:
        return Fraction(0)
    b = base if base > 1 else 1 / base
    y = x if x > 1 else 1 / x
    sign = 1 if (base > 1) == (x > 1) else -1
    # b = p/q in lowest terms, so b**e = p**e / q**e is also in lowest terms
    e = floor_log_exact(b.numerator, y.numerator)
    if b.numerator ** e == y.numerator and b.denominator ** e == y.denominator:
        return Fraction(sign * e)
    return None


# ---------------------------------------------------------------------------
# Expression trees


class Expr:
    """Base class of immutable expression nodes.

    Arithmetic operators build trees; plain ints and Fractions are wrapped as
    constants.  ``exact_value`` returns a Fraction when the subtree is exactly
    rational (structurally), else None.
    """

    __slots__ = ()

    def exact_value(self) -> Fraction | None:
        raise NotImplementedError

    def evaluate(self, bits: int) -> Interval:
        raise NotImplementedError

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(other, self)

    def __neg__(self):
        return Neg(self)


def as_expr(x: Expr | Number) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return Const(Fraction(x))
    raise TypeError(f"cannot convert {type(x).__name__} to Expr")


@dataclass(frozen=True, eq=True)
class Const(Expr):
    value: Fraction

    def exact_value(self):
        return self.value

    def evaluate(self, bits):
        return Interval.point(self.value)


@dataclass(frozen=True, eq=True)
class _Binary(Expr):
    a: Expr
    b: Expr

    def exact_value(self):
        x, y = self.a.exact_value(), self.b.exact_value()
        if x is None or y is None:
            return None
        return self._exact(x, y)


class Add(_Binary):
    def _exact(self, x, y):
        return x + y

    def evaluate(self, bits):
        return (self.a.evaluate(bits) + self.b.evaluate(bits)).round_out(bits + 8)


class Sub(_Binary):
    def _exact(self, x, y):
        return x - y

    def evaluate(self, bits):
        return (self.a.evaluate(bits) - self.b.evaluate(bits)).round_out(bits + 8)


class Mul(_Binary):
    def _exact(self, x, y):
        return x * y

    def evaluate(self, bits):
        return (self.a.evaluate(bits) * self.b.evaluate(bits)).round_out(bits + 8)


class Div(_Binary):
    def _exact(self, x, y):
        if y == 0:
            raise DomainError("division by zero")
        return x / y

    def evaluate(self, bits):
        return (self.a.evaluate(bits) / self.b.evaluate(bits)).round_out(bits + 8)


@dataclass(frozen=True, eq=True)
class Neg(Expr):
    a: Expr

    def exact_value(self):
        x = self.a.exact_value()
        return None if x is None else -x

    def evaluate(self, bits):
        return -self.a.evaluate(bits)


@dataclass(frozen=True, eq=True)
class Ln(Expr):
    a: Expr

    def exact_value(self):
        x = self.a.exact_value()
        return Fraction(0) if x == 1 else None

    def evaluate(self, bits):
        return ln_interval(self.a.evaluate(bits), bits)


@dataclass(frozen=True, eq=True)
class Exp(Expr):
    a: Expr

    def exact_value(self):
        x = self.a.exact_value()
        return Fraction(1) if x == 0 else None

    def evaluate(self, bits):
        x = self.a.evaluate(bits)
        if x.is_point and x.lo == 0:
            return Interval.point(1)
        return exp_interval(x, bits)


@dataclass(frozen=True, eq=True)
class Pow(Expr):
    base: Expr
    exponent: Expr

    def exact_value(self):
        b, e = self.base.exact_value(), self.exponent.exact_value()
        if b is None or e is None:
            return None
        if b == 1:
            return Fraction(1)
        if e.denominator == 1 and (b != 0 or e >= 0):
            return b ** int(e)
        return None

    def evaluate(self, bits):
        exact = self.exact_value()
        if exact is not None:
            return Interval.point(exact)
        return pow_enclosure(self.base.evaluate(bits), self.exponent.evaluate(bits), bits)


@dataclass(frozen=True, eq=True)
class Log(Expr):
    """Logarithm of ``arg`` to ``base``; exact when arg is an integer power of base."""

    base: Expr
    arg: Expr

    def exact_value(self):
        b, x = self.base.exact_value(), self.arg.exact_value()
        if b is None or x is None:
            return None
        return exact_log(b, x)

    def evaluate(self, bits):
        exact = self.exact_value()
        if exact is not None:
            return Interval.point(exact)
        num = ln_interval(self.arg.evaluate(bits + 4), bits + 4)
        den = ln_interval(self.base.evaluate(bits + 4), bits + 4)
        return (num / den).round_out(bits + 8)


@dataclass(frozen=True, eq=True)
class Floor(Expr):
    a: Expr

    def __post_init__(self):
        if self.a.exact_value() is None:
            raise DomainError("floor is only defined over exactly rational subexpressions")

    def exact_value(self):
        return Fraction(math.floor(self.a.exact_value()))

    def evaluate(self, bits):
        return Interval.point(self.exact_value())


@dataclass(frozen=True, eq=True)
class Ceil(Expr):
    a: Expr

    def __post_init__(self):
        if self.a.exact_value() is None:
            raise DomainError("ceil is only defined over exactly rational subexpressions")

    def exact_value(self):
        return Fraction(math.ceil(self.a.exact_value()))

    def evaluate(self, bits):
        return Interval.point(self.exact_value())


# constructors that fold identical operands, keeping equalities decidable


def add(a, b) -> Expr:
    a, b = as_expr(a), as_expr(b)
    if isinstance(b, Const) and b.value == 0:
        return a
    if isinstance(a, Const) and a.value == 0:
        return b
    return Add(a, b)


def sub(a, b) -> Expr:
    a, b = as_expr(a), as_expr(b)
    if a == b:
        return Const(Fraction(0))
    if isinstance(b, Const) and b.value == 0:
        return a
    return Sub(a, b)


def mul(a, b) -> Expr:
    a, b = as_expr(a), as_expr(b)
    if isinstance(a, Const) and a.value == 1:
        return b
    if isinstance(b, Const) and b.value == 1:
        return a
    return Mul(a, b)


def div(a, b) -> Expr:
    a, b = as_expr(a), as_expr(b)
    if a == b:
        return Const(Fraction(1))
    if isinstance(b, Const) and b.value == 1:
        return a
    return Div(a, b)


def const(x: Number) -> Const:
    return Const(_to_fraction(x))


def ln(x) -> Expr:
    return Ln(as_expr(x))


def exp(x) -> Expr:
    return Exp(as_expr(x))


def power(base, exponent) -> Expr:
    return Pow(as_expr(base), as_expr(exponent))


def log(base, x) -> Expr:
    return Log(as_expr(base), as_expr(x))


def floor(x) -> Expr:
    return Floor(as_expr(x))


def ceil(x) -> Expr:
    return Ceil(as_expr(x))


# ---------------------------------------------------------------------------
# Certified comparison


@dataclass(frozen=True)
class Comparison:
    verdict: Verdict
    ordering: Ordering | None
    bits: int

    def holds(self, relation: str) -> Verdict:
        """Verdict for ``lhs <relation> rhs`` given this comparison."""
        if self.ordering is None:
            return self.verdict
        o = self.ordering
        table = {
            "<": o is Ordering.LESS,
            "<=": o is not Ordering.GREATER,
            ">": o is Ordering.GREATER,
            ">=": o is not Ordering.LESS,
            "==": o is Ordering.EQUAL,
            "!=": o is not Ordering.EQUAL,
        }
        try:
            return Verdict.of(table[relation])
        except KeyError:
            raise ValueError(f"unknown relation {relation!r}") from None


def _order(x: Fraction, y: Fraction) -> Ordering:
    if x < y:
        return Ordering.LESS
    if x > y:
        return Ordering.GREATER
    return Ordering.EQUAL


def precision_ladder(ceiling: int, start: int = DEFAULT_START_BITS) -> list[int]:
    if ceiling < 1:
        raise DomainError("precision ceiling must be positive")
    bits = min(start, ceiling)
    ladder = [bits]
    while bits < ceiling:
        bits = min(2 * bits, ceiling)
        ladder.append(bits)
    return ladder


def compare_enclosures(
    lhs: Callable[[int], Interval],
    rhs: Callable[[int], Interval],
    ceiling: int = DEFAULT_CEILING_BITS,
    start: int = DEFAULT_START_BITS,
) -> Comparison:
    """Compare two quantities given as precision -> enclosure functions."""
    bits = start
    for bits in precision_ladder(ceiling, start):
        a, b = lhs(bits), rhs(bits)
        if a.hi < b.lo:
            return Comparison(CERT_TRUE, Ordering.LESS, bits)
        if a.lo > b.hi:
            return Comparison(CERT_TRUE, Ordering.GREATER, bits)
        if a.is_point and b.is_point:
            return Comparison(CERT_TRUE, Ordering.EQUAL, bits)
    return Comparison(Verdict.undecided(bits), None, bits)


def _log_integer_rewrite(lhs: Expr, rhs: Expr) -> Ordering | None:
    """log_b(x) vs integer r decided as b**r vs x, exactly."""
    if not isinstance(lhs, Log):
        return None
    b, x, r = lhs.base.exact_value(), lhs.arg.exact_value(), rhs.exact_value()
    if b is None or x is None or r is None or r.denominator != 1:
        return None
    if b <= 0 or b == 1 or x <= 0:
        return None
    bp = b ** int(r)
    # log_b x < r  <=>  x < b**r  when b > 1; reversed when b < 1
    o = _order(x, bp)
    return o if b > 1 else o.flipped()


def certified_compare(
    lhs: Expr | Number,
    rhs: Expr | Number,
    ceiling: int = DEFAULT_CEILING_BITS,
    start: int = DEFAULT_START_BITS,
) -> Comparison:
    """Three-way comparison of two expressions with a certified verdict.

    Exact rational sides are compared exactly; ``log_b(x)`` against an integer
    is rewritten to an integer-power comparison; otherwise enclosures are
    refined by doubling precision until they separate or ``ceiling`` is hit.
    """
    lhs, rhs = as_expr(lhs), as_expr(rhs)
    if lhs == rhs:
        return Comparison(CERT_TRUE, Ordering.EQUAL, 0)
    o = _log_integer_rewrite(lhs, rhs)
    if o is not None:
        return Comparison(CERT_TRUE, o, 0)
    o = _log_integer_rewrite(rhs, lhs)
    if o is not None:
        return Comparison(CERT_TRUE, o.flipped(), 0)
    x, y = lhs.exact_value(), rhs.exact_value()
    if x is not None and y is not None:
        return Comparison(CERT_TRUE, _order(x, y), 0)
    return compare_enclosures(lhs.evaluate, rhs.evaluate, ceiling, start)


def certify(
    lhs: Expr | Number,
    relation: str,
    rhs: Expr | Number,
    ceiling: int = DEFAULT_CEILING_BITS,
) -> Verdict:
    """Verdict for ``lhs <relation> rhs``."""
    return certified_compare(lhs, rhs, ceiling).holds(relation)


def enclose(e: Expr | Number, bits: int) -> Interval:
    return as_expr(e).evaluate(bits)


def certified_ceil(e: Expr | Number, ceiling: int = DEFAULT_CEILING_BITS) -> tuple[int | None, Verdict]:
    """ceil(e) for a possibly irrational e, certified by two comparisons.

    Returns (c, CERT_TRUE) once c - 1 < e <= c is proven, or (None, Undecided)
    when e cannot be separated from an integer below ``ceiling``.
    """
    e = as_expr(e)
    x = e.exact_value()
    if x is not None:
        return math.ceil(x), CERT_TRUE
    bits = DEFAULT_START_BITS
    for bits in precision_ladder(ceiling):
        enc = e.evaluate(bits)
        c = math.ceil(enc.hi)
        if enc.lo > c - 1:
            return c, CERT_TRUE
    return None, Verdict.undecided(bits)
