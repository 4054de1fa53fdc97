"""Closed-form upper bounds on hypergeometric tail probabilities.

For a sample of n draws from a population of size N with positive
fraction p = M/N, these bounds control P[i >= (p + t) n] (and by
symmetry P[i <= (p - t) n]) for a deviation fraction t > 0:

    KL  exp(-n * D(p + t || p))   D = Kullback-Leibler divergence
                                  between Bernoulli distributions
    B1  exp(-2 t^2 n)
    B2  exp(-2 t^2 n * N / (N - n + 1))
    B3  exp(-2 t^2 n * n / (N - n))
    B4  exp(-2 t^2 n * n N / ((N - n)(n + 1)))

B2 tightens B1 and B4 tightens B3 for every sample size; B3 and B4 beat
B1 and B2 exactly when n > N/2, and the pairs coincide at n = N/2.
Each bound is clamped to 1 on return; the unclamped log survives in
``BoundValue.exponent``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from ._validation import as_int, check_positive, check_range
from .errors import DomainError, UnsupportedBoundError
from .exact import _log_add, as_population

_LN2 = math.log(2.0)


class BoundFamily(Enum):
    KL = "kl"
    B1 = "b1"
    B2 = "b2"
    B3 = "b3"
    B4 = "b4"
    AUTO = "auto"


@dataclass(frozen=True)
class BoundValue:
    """A tail bound together with the formula that produced it.

    ``exponent`` is the log of the unclamped single-tail bound, so
    ``value == min(1, exp(exponent))`` for one-sided results and
    ``value == min(1, 2 * exp(exponent))`` when ``two_sided`` is set.
    """

    value: float
    family_used: BoundFamily
    exponent: float
    two_sided: bool = False


def _single(exponent: float, family: BoundFamily) -> BoundValue:
    exponent = min(0.0, exponent)
    return BoundValue(min(1.0, math.exp(exponent)), family, exponent)


def _doubled(exponent: float, family: BoundFamily) -> BoundValue:
    exponent = min(0.0, exponent)
    return BoundValue(min(1.0, 2.0 * math.exp(exponent)), family, exponent, True)


def _zero(family: BoundFamily, two_sided: bool = False) -> BoundValue:
    return BoundValue(0.0, family, float("-inf"), two_sided)


def _check_nt(n, t, N=None):
    n = as_int(n, "n")
    if n < 1:
        raise DomainError(f"n must satisfy n >= 1, got {n}")
    if N is not None and n > N:
        raise DomainError(f"n must satisfy n <= N = {N}, got {n}")
    return n, check_positive(t, "t")


def kl_upper_tail_bound(pop, n: int, t: float) -> BoundValue:
    """exp(-n * D(p+t || p)), the Chernoff-style bound on P[i >= (p+t)n].

    Returns 0 when p + t > 1 (the event is impossible) or when p = 0
    (no positives to draw).  At p + t = 1 the divergence term
    (1-p-t) ln((1-p)/(1-p-t)) is taken at its limit 0, so the bound
    degenerates to p^n.  Tighter than b1_tail wherever both apply.
    """
    pop = as_population(pop)
    if pop.M is None:
        raise UnsupportedBoundError("the KL bound requires a known positive count M")
    n, t = _check_nt(n, t, pop.N)
    p_frac = pop.positive_fraction
    # Branch on exact rationals so the boundary cases do not depend on
    # floating-point cancellation in 1 - p - t.
    t_frac = Fraction(t)
    if p_frac == 0 or p_frac + t_frac > 1:
        return _zero(BoundFamily.KL)
    p = float(p_frac)
    shifted = float(p_frac + t_frac)
    if p_frac + t_frac == 1:
        exponent = n * shifted * math.log(p / shifted)
    else:
        # Form the small tail mass 1 - p - t exactly before rounding once.
        remainder = float(1 - p_frac - t_frac)
        exponent = n * (
            shifted * math.log(p / shifted)
            + remainder * math.log(float(1 - p_frac) / remainder)
        )
    return _single(exponent, BoundFamily.KL)


def b1_tail(n: int, t: float) -> BoundValue:
    """min(1, exp(-2 t^2 n)): the sample-size-only bound, valid for
    either tail."""
    n, t = _check_nt(n, t)
    return _single(-2.0 * t * t * n, BoundFamily.B1)


def b2_tail(N: int, n: int, t: float) -> BoundValue:
    """min(1, exp(-2 t^2 n N / (N - n + 1))): tightens b1 by the
    without-replacement factor N/(N - n + 1), valid for either tail."""
    N = as_int(N, "N")
    n, t = _check_nt(n, t, N)
    return _single(-2.0 * t * t * n * (N / (N - n + 1)), BoundFamily.B2)


def b3_tail(N: int, n: int, t: float) -> BoundValue:
    """min(1, exp(-2 t^2 n^2 / (N - n))): the complement-sample bound,
    defined for n < N and tighter than b1 once n > N/2."""
    N = as_int(N, "N")
    n, t = _check_nt(n, t, N)
    if n >= N:
        raise DomainError(f"n must satisfy n < N = {N}, got {n}")
    return _single(-2.0 * t * t * n * (n / (N - n)), BoundFamily.B3)


def b4_tail(N: int, n: int, t: float) -> BoundValue:
    """min(1, exp(-2 t^2 n^2 N / ((N - n)(n + 1)))): the complement
    form of b2, defined for n < N and tighter than b2 once n > N/2."""
    N = as_int(N, "N")
    n, t = _check_nt(n, t, N)
    if n >= N:
        raise DomainError(f"n must satisfy n < N = {N}, got {n}")
    return _single(-2.0 * t * t * n * ((n * N) / ((N - n) * (n + 1))), BoundFamily.B4)


def best_bound(N: int, n: int, t: float) -> BoundValue:
    """The tighter of b2 and b4: b2 for n <= N/2, b4 for n > N/2.

    The two coincide at n = N/2; at n = N only b2 is defined.  The KL
    form is excluded because it needs M, which the planning use cases
    do not have.
    """
    N = as_int(N, "N")
    n = as_int(n, "n")
    two = b2_tail(N, n, t)
    if n == N:
        return two
    four = b4_tail(N, n, t)
    family = BoundFamily.B2 if 2 * n <= N else BoundFamily.B4
    return BoundValue(
        min(two.value, four.value), family, min(two.exponent, four.exponent), False
    )


def concentration_bound(
    N: int, n: int, t: float, family: BoundFamily = BoundFamily.AUTO, M: int | None = None
) -> BoundValue:
    """Two-sided bound on P[|i - n M/N| >= t n] for the chosen family.

    For B1 through B4 the same exponent controls both tails, so the
    result is min(1, 2 exp(exponent)).  The KL exponent is tail
    dependent, so that family sums the upper-tail bound at p and at
    1 - p (the flipped population covers the lower tail); the stored
    exponent absorbs the sum so that value = min(1, 2 exp(exponent))
    still holds.  KL requires M; B3 and B4 require n < N; AUTO picks
    best_bound.
    """
    N = as_int(N, "N")
    n = as_int(n, "n")
    if not isinstance(family, BoundFamily):
        raise DomainError(f"family must be a BoundFamily, got {family!r}")
    if family in (BoundFamily.B3, BoundFamily.B4) and n >= N:
        raise UnsupportedBoundError(
            f"family {family.value} requires n < N, got n = {n}, N = {N}"
        )
    if family is BoundFamily.KL:
        if M is None:
            raise UnsupportedBoundError("family kl requires a known positive count M")
        M = check_range(M, "M", 0, N)
        up = kl_upper_tail_bound((N, M), n, t)
        down = kl_upper_tail_bound((N, N - M), n, t)
        if up.exponent == float("-inf") and down.exponent == float("-inf"):
            return _zero(BoundFamily.KL, two_sided=True)
        return _doubled(_log_add(up.exponent, down.exponent) - _LN2, BoundFamily.KL)
    if family is BoundFamily.AUTO:
        single = best_bound(N, n, t)
    elif family is BoundFamily.B1:
        n, t = _check_nt(n, t, N)
        single = b1_tail(n, t)
    elif family is BoundFamily.B2:
        single = b2_tail(N, n, t)
    elif family is BoundFamily.B3:
        single = b3_tail(N, n, t)
    else:
        single = b4_tail(N, n, t)
    return _doubled(single.exponent, single.family_used)
