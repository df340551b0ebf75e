"""The quadratic walk on Z/p: exact stationary vectors and zero structure.

The chain moves a -> a^2 + 1 or a^2 - 1 with probability 1/2 each. Its
stationary row vector is computed exactly and rescaled to the minimal
positive integer vector pi_tilde. Around a quarter of all residues are
forced zeroes (both neighbours non-squares); for p = 3 (mod 4) a closed
counting formula gives the whole vector, and the census machinery checks
how far the forced zeroes explain the observed ones across a range of
primes.

State counts are halved before any linear algebra: the squared walk
Z = X^2 is itself a Markov chain on the quadratic residues, and its
stationary law lifts through one walk step back to the full vector.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .chain import (
    MODP_CAP,
    Distribution,
    TransitionMatrix,
    build_modp,
    evolve,
    stationary,
)
from .gf2poly import is_prime

__all__ = [
    "StationaryReport",
    "CensusRow",
    "ClassSummary",
    "ZeroCensus",
    "stationary_integer",
    "predicted_zeros",
    "counting_stationary",
    "ergodicity_report",
    "zero_census",
]


def _check_odd_prime(p: int) -> None:
    if p == 2 or not is_prime(p):
        raise ValueError(f"p = {p} is not an odd prime")


def _check_solvable(p: int) -> None:
    _check_odd_prime(p)
    if p > MODP_CAP:
        raise ValueError(f"p = {p} exceeds cap {MODP_CAP}")


@dataclass(frozen=True)
class StationaryReport:
    """Exact stationary data for the walk on Z/p.

    pi_tilde is the minimal positive integer scaling of the stationary
    row vector, indexed by residue. When the eigenvalue-1 eigenspace is
    not one-dimensional the vector-dependent fields hold None and unique
    is False: a non-unique vector is reported, never silently chosen.
    """

    p: int
    pi_tilde: tuple | None
    zero_set: tuple | None
    predicted_zero_set: tuple
    unique: bool
    max_min_ratio: Fraction | None

    def __post_init__(self):
        if not self.unique:
            return
        nonzero = [v for v in self.pi_tilde if v]
        if math.gcd(*nonzero) != 1:
            raise ValueError("pi_tilde is not minimally scaled")
        if not set(self.predicted_zero_set) <= set(self.zero_set):
            raise ValueError("a predicted zero carries stationary mass")

    @property
    def gap_set(self) -> tuple:
        """Observed zeroes beyond the forced ones (no rule is claimed)."""
        if self.zero_set is None:
            return ()
        forced = set(self.predicted_zero_set)
        return tuple(j for j in self.zero_set if j not in forced)


def _square_chain(p: int):
    """The squared walk on quadratic residues, with its residue list.

    From X one step gives X^2 +/- 1, so Z = X^2 moves z -> (z+1)^2 or
    (z-1)^2 with probability 1/2 each ((p+1)/2 states instead of p).
    Averaging a stationary law of this chain over the two step outcomes
    lifts it to a stationary law of the full walk, and summing a
    stationary law of the full walk over the square roots of each
    residue collapses it back; the two maps are mutually inverse linear
    bijections between the eigenvalue-1 left eigenspaces, so dimension
    and uniqueness transfer in both directions.
    """
    half = Fraction(1, 2)
    squares = sorted({k * k % p for k in range(p)})
    index = {z: i for i, z in enumerate(squares)}
    rows = []
    for z in squares:
        up = index[(z + 1) ** 2 % p]
        dn = index[(z - 1) ** 2 % p]
        # up == dn only at z = 0, where both signs land on 1
        rows.append({up: Fraction(1)} if up == dn else {up: half, dn: half})
    return squares, TransitionMatrix([str(z) for z in squares], rows)


def stationary_integer(p: int) -> StationaryReport:
    """Minimal integer stationary vector of the walk on Z/p.

    Solves the squared walk exactly, lifts the result through one step,
    verifies stationarity against the full transition matrix by an exact
    rational multiply, and divides out the gcd so the integer vector is
    as small as possible. Odd primes up to 20000 are accepted; expect
    runs above 2000 to be slow.
    """
    _check_solvable(p)
    squares, Z = _square_chain(p)
    predicted = tuple(sorted(predicted_zeros(p)))
    mu, unique = stationary(Z)
    if not unique:
        return StationaryReport(p, None, None, predicted, False, None)
    on_square = dict(zip(squares, mu.values))
    half = Fraction(1, 2)
    zero = Fraction(0)
    pi = [
        half * (on_square.get((j - 1) % p, zero) + on_square.get((j + 1) % p, zero))
        for j in range(p)
    ]
    dist = Distribution([str(j) for j in range(p)], pi)
    if evolve(dist, build_modp(p), 1) != dist:
        raise ArithmeticError(f"lifted vector is not stationary for p = {p}")
    scale = math.lcm(*(x.denominator for x in pi))
    ints = [int(x * scale) for x in pi]
    g = math.gcd(*ints)
    pi_tilde = tuple(v // g for v in ints)
    nonzero = [v for v in pi_tilde if v]
    return StationaryReport(
        p=p,
        pi_tilde=pi_tilde,
        zero_set=tuple(j for j, v in enumerate(pi_tilde) if v == 0),
        predicted_zero_set=predicted,
        unique=True,
        max_min_ratio=Fraction(max(nonzero), min(nonzero)),
    )


def predicted_zeros(p: int) -> set:
    """Residues whose two neighbours are both non-squares mod p.

    One step of the walk lands on (square) + 1 or (square) - 1, so such
    residues are never visited and their stationary mass is forced to
    zero. 0 counts as a square here (0 = 0^2); everything else goes
    through Euler's criterion.
    """
    _check_odd_prime(p)
    exp = (p - 1) // 2

    def square(a: int) -> bool:
        return a == 0 or pow(a, exp, p) == 1

    return {
        j for j in range(p)
        if not square((j - 1) % p) and not square((j + 1) % p)
    }


def counting_stationary(p: int) -> Distribution:
    """Counting form of the stationary law, valid for p = 3 (mod 4).

    pi(j) = |{k in Z/p : k^2 + 1 = j or k^2 - 1 = j}| / 2p. Each of the
    p values of k contributes once per sign, so the counts total 2p and
    the mass is exactly one.
    """
    _check_odd_prime(p)
    if p % 4 != 3:
        raise ValueError(
            f"p = {p} is 1 (mod 4); the counting form holds for p = 3 (mod 4)")
    counts = [0] * p
    for k in range(p):
        sq = k * k % p
        counts[(sq + 1) % p] += 1
        counts[(sq - 1) % p] += 1
    return Distribution(
        [str(j) for j in range(p)],
        [Fraction(c, 2 * p) for c in counts],
    )


def ergodicity_report(p: int) -> bool:
    """True when the eigenvalue-1 left eigenspace is one-dimensional."""
    _check_solvable(p)
    _, Z = _square_chain(p)
    _, unique = stationary(Z)
    return unique


@dataclass(frozen=True)
class CensusRow:
    """Zero accounting for one prime; vector fields None if not unique."""

    p: int
    residue_class: int
    unique: bool
    zero_count: int | None
    predicted_count: int
    exact_match: bool | None
    min_nonzero: int | None
    max_entry: int | None


@dataclass(frozen=True)
class ClassSummary:
    primes: int
    mean_zero_fraction: Fraction
    all_exact: bool


@dataclass(frozen=True)
class ZeroCensus:
    """Per-prime rows plus aggregates for each residue class mod 4."""

    rows: tuple
    class_one: ClassSummary | None
    class_three: ClassSummary | None


def _census_row(p: int) -> CensusRow:
    report = stationary_integer(p)
    if not report.unique:
        return CensusRow(p, p % 4, False, None,
                         len(report.predicted_zero_set), None, None, None)
    nonzero = [v for v in report.pi_tilde if v]
    return CensusRow(
        p=p,
        residue_class=p % 4,
        unique=True,
        zero_count=len(report.zero_set),
        predicted_count=len(report.predicted_zero_set),
        exact_match=report.zero_set == report.predicted_zero_set,
        min_nonzero=min(nonzero),
        max_entry=max(report.pi_tilde),
    )


def zero_census(p_min: int, p_max: int, threads: int | None = None) -> ZeroCensus:
    """Zero structure of pi_tilde for every odd prime in [p_min, p_max].

    Each prime is an independent exact computation, so the census can
    fan out over a thread pool; rows are merged back in ascending prime
    order either way, and the summaries aggregate the mean zero fraction
    and the forced-zero match flag per residue class mod 4.
    """
    if p_min > p_max:
        raise ValueError("empty census range")
    if p_max > MODP_CAP:
        raise ValueError(f"census range exceeds cap {MODP_CAP}")
    start = max(3, p_min) | 1
    primes = [p for p in range(start, p_max + 1, 2) if is_prime(p)]
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_census_row, primes))
    else:
        rows = [_census_row(p) for p in primes]
    rows.sort(key=lambda row: row.p)

    def summarize(cls: int):
        chosen = [r for r in rows if r.residue_class == cls and r.unique]
        if not chosen:
            return None
        mean = sum(
            (Fraction(r.zero_count, r.p) for r in chosen), Fraction(0)
        ) / len(chosen)
        return ClassSummary(len(chosen), mean, all(r.exact_match for r in chosen))

    return ZeroCensus(tuple(rows), summarize(1), summarize(3))
