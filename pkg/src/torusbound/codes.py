"""Griesmer-bound arithmetic for binary linear codes.

An involution subgroup Z_2^r of a torus acting at a fixed point gives a
linear map Z_2^r -> Z_2^m whose Hamming weights are half the codimensions of
fixed-point components; the Griesmer bound then forces a low-codimension
involution once r is large.  Everything here is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactnum import DomainError, Verdict, floor_log_exact


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def griesmer_length(r: int, w: int) -> int:
    """Minimum length sum_{i<r} ceil(w / 2**i) of an r-dimensional code of weight >= w."""
    if r < 1:
        raise DomainError(f"dimension must be >= 1, got {r}")
    if w < 1:
        raise DomainError(f"weight must be >= 1, got {w}")
    # terms are 1 once 2**i >= w
    full = (w - 1).bit_length()
    head = min(r, full)
    total = sum(_ceil_div(w, 1 << i) for i in range(head))
    return total + (r - head)


def griesmer_length_direct(r: int, w: int) -> int:
    """Term-by-term sum; kept as a cross-check for :func:`griesmer_length`."""
    return sum(_ceil_div(w, 2 ** i) for i in range(r))


@dataclass(frozen=True)
class GriesmerQuery:
    r: int
    w: int
    m: int

    def __post_init__(self):
        if self.r < 1 or self.w < 1 or self.m < 1:
            raise DomainError("Griesmer query fields must be positive")

    def satisfiable(self) -> bool:
        """Whether the Griesmer bound permits such a code (necessary, not sufficient)."""
        return self.m >= griesmer_length(self.r, self.w)


def _check_tnc(t: int, n: int, c: int) -> None:
    if t < 1:
        raise DomainError(f"t must be >= 1, got {t}")
    if n < 0 or n % 2:
        raise DomainError(f"n must be even and >= 0, got {n}")
    if c < 0 or c % 2 or c > n:
        raise DomainError(f"c must be even with 0 <= c <= n, got {c}")


def forcing_weight(t: int, n: int, c: int) -> int:
    """ceil((t(n - c) + 2) / 4): least Hamming weight when every codimension exceeds t(n-c)/2."""
    _check_tnc(t, n, c)
    return _ceil_div(t * (n - c) + 2, 4)


def involution_forcing_check(t: int, n: int, c: int, r: int) -> Verdict:
    """CertTrue iff no r-dimensional code of weight forcing_weight fits in length tn/2."""
    _check_tnc(t, n, c)
    if r < 1:
        return Verdict.of(False)
    return Verdict.of(griesmer_length(r, forcing_weight(t, n, c)) > t * n // 2)


def minimal_forcing_rank(t: int, n: int, c: int) -> int:
    """Smallest r for which :func:`involution_forcing_check` is CertTrue.

    The Griesmer sum grows by at least 1 per extra dimension, so this exists
    and the check stays true for every larger r.
    """
    _check_tnc(t, n, c)
    w = forcing_weight(t, n, c)
    budget = t * n // 2
    total = 0
    r = 0
    full = (w - 1).bit_length()
    while r < full:
        total += _ceil_div(w, 1 << r)
        r += 1
        if total > budget:
            return r
    return r + (budget - total) + 1


def proposition_threshold(t: int, n: int, c: int) -> int:
    """Proof-side threshold tc/2 + floor(log2(tn - tc + 2))."""
    _check_tnc(t, n, c)
    return t * c // 2 + floor_log_exact(2, t * n - t * c + 2)


def stated_threshold(t: int, n: int, c: int) -> int:
    """Hypothesis as stated: tn/2 + floor(log2(tn - tc + 2))."""
    _check_tnc(t, n, c)
    return t * n // 2 + floor_log_exact(2, t * n - t * c + 2)
