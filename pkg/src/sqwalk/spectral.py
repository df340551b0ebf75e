"""Fourier analysis on the binary cube and closed-form mixing bounds.

Distributions on a d-dimensional GF(2) space are analyzed through the
Walsh transform Q^(beta) = sum_alpha Q(alpha) (-1)^(alpha.beta).  For the
square-and-add walk the transform after n steps is a product over the
weight sequence of transpose-iterates of beta, and with the cyclotomic
modulus the d-step value collapses to a four-case closed form keyed on
(parity of |beta|, beta_0).  Summing the 2m-th powers over the nonzero
characters splits into four sums by case; those sums, their envelopes,
the single-term lower bound and the hypercube reference bound are all
evaluated here in the log domain at WORKING_DPS decimal digits.

Characters are int bitmasks (bit i = coefficient of x^i) like everywhere
else in this package; CharacterIndex is a thin validated wrapper for
callers that want the weight and bottom bit spelled out.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .algebra import BinaryMatrix

WALSH_CAP = 20          # full transforms up to 2^20 entries
ENUM_CAP = 14           # full character enumeration up to 2^14 - 1 terms
WORKING_DPS = 30        # ~100 bits; sums with binomials need well over 53


@dataclass(frozen=True)
class CharacterIndex:
    """A character beta of the d-dimensional cube, as a d-bit mask."""

    bits: int
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be positive")
        if not 0 <= self.bits < (1 << self.d):
            raise ValueError(f"character needs {self.d} bits")

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    @property
    def bit0(self) -> int:
        # coefficient of 1 in beta; selects the closed-form case
        return self.bits & 1


def _beta_bits(beta, d: int) -> int:
    if isinstance(beta, CharacterIndex):
        if beta.d != d:
            raise ValueError(f"character has dimension {beta.d}, expected {d}")
        return beta.bits
    b = int(beta)
    if not 0 <= b < (1 << d):
        raise ValueError(f"character needs {d} bits")
    return b


def walsh_transform(q) -> list:
    """Unnormalized Walsh transform of a distribution (or any vector).

    Input is a Distribution or a sequence of 2^d numbers indexed by the
    states as bitmasks.  Output entry beta is
    sum_alpha q[alpha] (-1)^(popcount(alpha & beta)), as floats.  Applying
    the transform twice multiplies by 2^d (inversion formula).
    """
    raw = getattr(q, "values", q)
    vals = [float(v) for v in raw]
    n = len(vals)
    if n == 0 or n & (n - 1):
        raise ValueError("length must be a power of two")
    d = n.bit_length() - 1
    if d > WALSH_CAP:
        raise ValueError(f"walsh_transform capped at 2^{WALSH_CAP} entries")
    h = 1
    while h < n:
        for start in range(0, n, 2 * h):
            for i in range(start, start + h):
                a, b = vals[i], vals[i + h]
                vals[i] = a + b
                vals[i + h] = a - b
        h *= 2
    return vals


def fourier_product(A: BinaryMatrix, beta, n: int) -> float:
    """Transform of the n-step walk with squaring map A at character beta.

    Equals the product over j < n of (1 - w_j/d) where w_j is the weight
    of the j-th transpose-iterate of beta.  A must be invertible.
    """
    A.inverse()  # rejects singular maps
    return _fourier_product_unchecked(A, _beta_bits(beta, A.d), n)


def _fourier_product_unchecked(A: BinaryMatrix, bits: int, n: int) -> float:
    d = A.d
    prod = 1.0
    for _ in range(n):
        prod *= 1.0 - bits.bit_count() / d
        if prod == 0.0:
            break
        bits = A.apply_transpose(bits)
    return prod


def fourier_block(d: int, w: int, b0: int) -> Fraction:
    """Exact d-step transform value for a character of weight w, bottom bit b0.

    Four cases keyed on (parity of w, b0); valid when the modulus is the
    cyclotomic polynomial of a prime with 2 as primitive root, d = p - 1.
    w = 0 is the trivial character and returns 1.
    """
    if not 0 <= w <= d:
        raise ValueError(f"weight must lie in [0, {d}]")
    if b0 not in (0, 1):
        raise ValueError("b0 must be 0 or 1")
    if w == 0:
        return Fraction(1)
    lo = Fraction(d - w, d)          # 1 - w/d
    up = Fraction(d - w + 1, d)      # 1 - (w-1)/d
    dn = Fraction(d - w - 1, d) if w < d else Fraction(0)  # 1 - (w+1)/d
    if w % 2 == 0:
        if b0 == 0:
            return lo ** (d - w) * up ** w
        return lo ** (d - w + 1) * up ** (w - 1)
    if b0 == 0:
        return lo ** (w + 1) * dn ** (d - w - 1)
    return lo ** w * dn ** (d - w)


# -- the four sums ---------------------------------------------------------

def _log_binomial(n: int, k: int):
    return (mpmath.loggamma(n + 1) - mpmath.loggamma(k + 1)
            - mpmath.loggamma(n - k + 1))


def _kahan(terms):
    total = mpmath.mpf(0)
    comp = mpmath.mpf(0)
    for t in terms:
        y = t - comp
        nxt = total + y
        comp = (nxt - total) - y
        total = nxt
    return total


def _term(d, pairs, binom_k):
    """exp(sum of exponent*log(num/d) + log C(d-1, binom_k)), or None if 0.

    pairs are (numerator, exponent); an exponent of 0 contributes a factor
    1 even on a zero base, a zero base with positive exponent kills the
    term.
    """
    acc = _log_binomial(d - 1, binom_k)
    logd = mpmath.log(d)
    for num, e in pairs:
        if e == 0:
            continue
        if num == 0:
            return None
        acc += e * (mpmath.log(num) - logd)
    return mpmath.exp(acc)


def sigma_sums(d: int, m):
    """The four character-class sums of the 2m-th transform powers.

    Ascending-j log-domain evaluation with compensated accumulation;
    m may be any real >= 1.  Classes: bottom bit clear with even or odd
    weight j counts C(d-1, j); bottom bit set counts C(d-1, j-1).
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    if not m >= 1:
        raise ValueError("m must be at least 1")
    with mpmath.mp.workdps(WORKING_DPS):
        m2 = 2 * mpmath.mpf(m)
        s1 = _kahan(t for j in range(2, d, 2)
                    if (t := _term(d, [(d - j, m2 * (d - j)),
                                       (d - j + 1, m2 * j)], j)) is not None)
        s2 = _kahan(t for j in range(1, d, 2)
                    if (t := _term(d, [(d - j, m2 * (j + 1)),
                                       (d - j - 1, m2 * (d - j - 1))], j))
                    is not None)
        s3 = _kahan(t for j in range(2, d + 1, 2)
                    if (t := _term(d, [(d - j, m2 * (d - j + 1)),
                                       (d - j + 1, m2 * (j - 1))], j - 1))
                    is not None)
        s4 = _kahan(t for j in range(1, d + 1, 2)
                    if (t := _term(d, [(d - j, m2 * j),
                                       (d - j - 1, m2 * (d - j))], j - 1))
                    is not None)
        return s1, s2, s3, s4


def _sigma1_j2_term(d: int, m):
    # the j=2 term of the first sum, for real m of either sign
    if d < 3:
        return mpmath.mpf(0)
    with mpmath.mp.workdps(WORKING_DPS):
        m2 = 2 * mpmath.mpf(m)
        t = _term(d, [(d - 2, m2 * (d - 2)), (d - 1, m2 * 2)], 2)
        return mpmath.mpf(0) if t is None else t


def lower_bound_term(d: int, c):
    """The j=2 term of the first sum at m = (log d - c)/2.

    m enters as a real exponent.  For large d the value approaches
    exp(2c)/2, witnessing that the walk is far from uniform at
    n = d(log d - c)/2 steps.
    """
    if d < 3:
        raise ValueError("dimension must be at least 3")
    with mpmath.mp.workdps(WORKING_DPS):
        m = (mpmath.log(d) - mpmath.mpf(c)) / 2
        return _sigma1_j2_term(d, m)


def envelope_bounds(d: int, c):
    """Closed-form envelopes dominating the four sums at m = (log d + c)/2.

    Termwise, with 1 - x <= exp(-x) and C(n, j) <= n^j / j!:
      sum I terms  <= exp(-cj(1 - 1/d) + j log(d)/d) / j!
      sum II terms <= exp(-cj) / j!
      sum III terms<= exp(-c(j-1)) / (j-1)!
      sum IV terms <= exp(-cj - log d) / (j-1)!
    Summing the exponential series (and absorbing j log(d)/d <= 2 in the
    regime of interest for the first):
      f1 = e^2 (exp(exp(-c(1 - 1/d))) - 1)
      f2 = exp(exp(-c)) - 1
      f3 = exp(exp(-c)) - 1          (k = j - 1 runs over 1, 2, ...)
      f4 = (exp(-c)/d) exp(exp(-c))  (k = j - 1 runs over 0, 1, ...)
    Meaningful as bounds for c > 0; evaluated for any real c.
    """
    if d < 3:
        raise ValueError("dimension must be at least 3")
    with mpmath.mp.workdps(WORKING_DPS):
        c = mpmath.mpf(c)
        ec = mpmath.exp(-c)
        f1 = mpmath.e ** 2 * (mpmath.exp(mpmath.exp(-c * (1 - mpmath.mpf(1) / d))) - 1)
        f2 = mpmath.exp(ec) - 1
        f3 = mpmath.exp(ec) - 1
        f4 = ec / d * mpmath.exp(ec)
        return f1, f2, f3, f4


@dataclass(frozen=True)
class MixingReport:
    """One grid point of the mixing sweep; all reals as floats."""

    d: int
    m: float
    n: float
    c: float
    sigma1: float
    sigma2: float
    sigma3: float
    sigma4: float
    l2_sq: float
    tv_upper: float
    lower_term: float
    f1: float
    f2: float
    f3: float
    f4: float


def l2_bound_and_tv(d: int, m, c=None) -> MixingReport:
    """Evaluate the four sums at (d, m) and package the derived bounds.

    l2_sq is the total, tv_upper = sqrt(l2_sq)/2, lower_term the j=2 term
    of the first sum at the same m.  c defaults to 2m - log d; passing it
    explicitly keeps grid labels exact when m was derived from c.
    """
    s1, s2, s3, s4 = sigma_sums(d, m)
    with mpmath.mp.workdps(WORKING_DPS):
        l2 = s1 + s2 + s3 + s4
        tv = mpmath.sqrt(l2) / 2
        if c is None:
            c = 2 * mpmath.mpf(m) - mpmath.log(d)
        lower = _sigma1_j2_term(d, m)
        f1, f2, f3, f4 = envelope_bounds(d, c)
        return MixingReport(
            d=d, m=float(m), n=float(d * mpmath.mpf(m)), c=float(c),
            sigma1=float(s1), sigma2=float(s2), sigma3=float(s3),
            sigma4=float(s4), l2_sq=float(l2), tv_upper=float(tv),
            lower_term=float(lower),
            f1=float(f1), f2=float(f2), f3=float(f3), f4=float(f4))


# -- hypercube reference and rearrangement ---------------------------------

def hypercube_l2(d: int, n: int):
    """Squared L2 distance to uniform of the plain add-only walk.

    sum_{j=1}^{d} C(d, j) (1 - j/d)^(2n), log domain.  n = 0 gives
    2^d - 1.
    """
    if d < 1:
        raise ValueError("dimension must be positive")
    if n < 0:
        raise ValueError("steps must be nonnegative")
    if n == 0:
        return mpmath.mpf((1 << d) - 1)
    with mpmath.mp.workdps(WORKING_DPS):
        terms = []
        for j in range(1, d):  # j = d contributes 0 once n > 0
            terms.append(mpmath.exp(
                _log_binomial(d, j)
                + 2 * n * (mpmath.log(d - j) - mpmath.log(d))))
        return _kahan(terms)


def hypercube_envelope(c):
    """exp(exp(-c)) - 1, the reference bound at n = d(log d + c)/2."""
    with mpmath.mp.workdps(WORKING_DPS):
        return mpmath.exp(mpmath.exp(-mpmath.mpf(c))) - 1


def _enum_l2_sum(A, d: int, n: int) -> float:
    # A=None walks the weights in place (identity map); both paths share
    # the multiply loop so identical weight sequences give identical floats
    step = (lambda bits: bits) if A is None else A.apply_transpose
    terms = []
    for beta in range(1, 1 << d):
        bits = beta
        prod = 1.0
        for _ in range(n):
            prod *= 1.0 - bits.bit_count() / d
            if prod == 0.0:
                break
            bits = step(bits)
        terms.append(prod * prod)
    return math.fsum(terms)


def rearrangement_check(A: BinaryMatrix, d: int, n: int) -> bool:
    """True when the squared-transform sum under A stays below the identity's.

    Both sides run the same full-character enumeration, so A = identity
    compares equal rather than merely close.
    """
    if A.d != d:
        raise ValueError(f"map acts on {A.d} bits, expected {d}")
    if d > ENUM_CAP:
        raise ValueError(f"rearrangement_check capped at dimension {ENUM_CAP}")
    if n < 0:
        raise ValueError("steps must be nonnegative")
    A.inverse()  # rejects singular maps
    return _enum_l2_sum(A, d, n) <= _enum_l2_sum(None, d, n)
