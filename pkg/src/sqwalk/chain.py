"""Exact Markov-chain machinery for square-and-add walks.

Transition matrices are row-stochastic with Fraction entries and sparse
row storage (each walk row has d+1 nonzeros). Everything in this module
is exact rational arithmetic; floating point lives only in `simulate`,
which counts integer events, and in the spectral module.

The square-and-add walk moves alpha -> alpha^2 + eps where eps is 0 with
probability 1/2 and a uniformly chosen basis element otherwise. The
add-only variant drops the squaring. The mod-p walk moves
alpha -> alpha^2 +/- 1 with a fair sign.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._linalg import (
    KernelNotCertified,
    certified_left_kernel,
    char_poly_exact,
    fraction_null_space,
)
from .algebra import (
    AlgebraElement,
    BinaryMatrix,
    QuotientAlgebra,
    _independent,
    discrete_log_table,
    element_label,
)
from .gf2poly import _mulmod_bits, is_prime

#: dense-construction bound on the number of states
DENSE_STATE_CAP = 1 << 14
#: stationary() switches from exact elimination to the modular route here
EXACT_SOLVE_CAP = 64
#: char_poly is exact dense arithmetic, deliberately small
CHAR_POLY_CAP = 64
#: largest prime for the mod-p walk constructor
MODP_CAP = 20000
#: simulate splits trials into fixed batches so thread count cannot
#: change the result (batch b always uses seed + b)
SIMULATE_BATCH = 1 << 16
SIMULATE_FIELD_CAP = 1 << 20


class TransitionMatrix:
    """Row-stochastic square matrix over the rationals.

    rows[i] maps column index -> Fraction; zero entries are absent.
    Rows are checked to sum to exactly 1 at construction. Instances are
    treated as immutable; nothing in the package mutates them after
    construction.
    """

    __slots__ = ("states", "rows")

    def __init__(self, states, rows):
        states = tuple(str(s) for s in states)
        n = len(states)
        if len(rows) != n:
            raise ValueError("row count does not match state count")
        clean = []
        for i, row in enumerate(rows):
            acc = {}
            total = Fraction(0)
            for j, p in row.items():
                if not isinstance(j, int) or not 0 <= j < n:
                    raise ValueError(f"row {i}: bad column index {j!r}")
                p = Fraction(p)
                if p < 0 or p > 1:
                    raise ValueError(f"entry ({i},{j}) = {p} outside [0,1]")
                if p:
                    acc[j] = p
                    total += p
            if total != 1:
                raise ValueError(f"row {i} sums to {total}, not 1")
            clean.append(dict(sorted(acc.items())))
        self.states = states
        self.rows = tuple(clean)

    @property
    def n(self) -> int:
        return len(self.states)

    def entry(self, i: int, j: int) -> Fraction:
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError("state index out of range")
        return self.rows[i].get(j, Fraction(0))

    def dense(self) -> list:
        zero = Fraction(0)
        return [
            [row.get(j, zero) for j in range(self.n)] for row in self.rows
        ]

    def permuted(self, order, labels=None) -> "TransitionMatrix":
        """Relabel states so that new state i is old state order[i]."""
        n = self.n
        order = list(order)
        if sorted(order) != list(range(n)):
            raise ValueError("order is not a permutation of the states")
        inv = [0] * n
        for new, old in enumerate(order):
            inv[old] = new
        rows = [
            {inv[j]: p for j, p in self.rows[old].items()} for old in order
        ]
        states = labels if labels is not None else [self.states[o] for o in order]
        return TransitionMatrix(states, rows)

    def __eq__(self, other):
        if isinstance(other, TransitionMatrix):
            return self.states == other.states and self.rows == other.rows
        return NotImplemented

    def __repr__(self):
        return f"<TransitionMatrix on {self.n} states>"


class Distribution:
    """Probability vector with exact rational entries."""

    __slots__ = ("states", "values")

    def __init__(self, states, values):
        states = tuple(str(s) for s in states)
        values = tuple(Fraction(v) for v in values)
        if len(states) != len(values):
            raise ValueError("state and value counts differ")
        if any(v < 0 for v in values):
            raise ValueError("negative probability")
        if sum(values) != 1:
            raise ValueError(f"total mass {sum(values)} is not 1")
        self.states = states
        self.values = values

    @classmethod
    def point_mass(cls, states, index: int) -> "Distribution":
        v = [Fraction(0)] * len(states)
        v[index] = Fraction(1)
        return cls(states, v)

    @classmethod
    def uniform(cls, states) -> "Distribution":
        n = len(states)
        return cls(states, [Fraction(1, n)] * n)

    def __eq__(self, other):
        if isinstance(other, Distribution):
            return self.states == other.states and self.values == other.values
        return NotImplemented

    def __repr__(self):
        return f"<Distribution on {len(self.states)} states>"


def tv_distance(P: Distribution, Q: Distribution) -> Fraction:
    """Total variation distance (1/2) sum |P - Q|, exact."""
    if P.states != Q.states:
        raise ValueError("distributions live on different state spaces")
    return sum((abs(p - q) for p, q in zip(P.values, Q.values)),
               Fraction(0)) / 2


# -- constructors ----------------------------------------------------------

def _check_basis(alg: QuotientAlgebra, basis) -> list:
    elems = list(basis)
    if len(elems) != alg.d:
        raise ValueError(f"need exactly {alg.d} basis elements, got {len(elems)}")
    bits = []
    for b in elems:
        if not isinstance(b, AlgebraElement) or b.algebra != alg:
            raise ValueError("basis elements must belong to the given algebra")
        bits.append(b.bits)
    if not _independent(bits):
        raise ValueError("basis elements are linearly dependent")
    return bits


def _field_rows(alg: QuotientAlgebra, basis_bits, squaring: bool) -> list:
    half = Fraction(1, 2)
    small = Fraction(1, 2 * alg.d)
    fb = alg.modulus.bits
    rows = []
    for a in range(alg.q):
        base = _mulmod_bits(a, a, fb) if squaring else a
        row = {base: half}
        for b in basis_bits:
            row[base ^ b] = small
        rows.append(row)
    return rows


def _field_labels(alg: QuotientAlgebra) -> list:
    return [element_label(a) for a in range(alg.q)]


def build_square_add(alg: QuotientAlgebra, basis) -> TransitionMatrix:
    """K(a, b) = 1/2 if b = a^2, 1/(2d) if b = a^2 + basis element."""
    if alg.q > DENSE_STATE_CAP:
        raise ValueError(f"state space {alg.q} exceeds cap {DENSE_STATE_CAP}")
    bits = _check_basis(alg, basis)
    return TransitionMatrix(_field_labels(alg), _field_rows(alg, bits, True))


def build_add_only(alg: QuotientAlgebra, basis) -> TransitionMatrix:
    """Same step law without the squaring; symmetric in characteristic 2."""
    if alg.q > DENSE_STATE_CAP:
        raise ValueError(f"state space {alg.q} exceeds cap {DENSE_STATE_CAP}")
    bits = _check_basis(alg, basis)
    return TransitionMatrix(_field_labels(alg), _field_rows(alg, bits, False))


def build_modp(p: int) -> TransitionMatrix:
    """The walk a -> a^2 +/- 1 on Z/p for an odd prime p."""
    if p == 2:
        raise ValueError("p = 2 collapses +1 and -1 into the same step")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p > MODP_CAP:
        raise ValueError(f"p = {p} exceeds cap {MODP_CAP}")
    half = Fraction(1, 2)
    rows = []
    for a in range(p):
        sq = a * a % p
        rows.append({(sq + 1) % p: half, (sq - 1) % p: half})
    return TransitionMatrix([str(i) for i in range(p)], rows)


def power_ordering(alg: QuotientAlgebra) -> tuple:
    """Display order 0, 1, g, g^2, ... with matching labels.

    Needs a discrete-log table, so the algebra must be a small field.
    Returns (order, labels) suitable for TransitionMatrix.permuted.
    """
    table = discrete_log_table(alg)
    inv = {k: bits for bits, k in table.items()}
    order = [0] + [inv[k] for k in range(alg.q - 1)]
    labels = ["0"] + [element_label(inv[k], table) for k in range(alg.q - 1)]
    return order, labels


# -- evolution and spectra -------------------------------------------------

def evolve(v0: Distribution, K: TransitionMatrix, n: int) -> Distribution:
    """v0 K^n, exact.

    Internally scales everything to a common integer denominator so the
    hot loop is integer multiply-accumulate; Fractions reappear only at
    the end.
    """
    if v0.states != K.states:
        raise ValueError("distribution and matrix use different state spaces")
    if n < 0:
        raise ValueError("negative step count")
    if n == 0:
        return v0
    N = K.n
    D = 1
    for row in K.rows:
        for p in row.values():
            D = D * p.denominator // math.gcd(D, p.denominator)
    int_rows = [
        {j: int(p * D) for j, p in row.items()} for row in K.rows
    ]
    den = 1
    for v in v0.values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    vec = [int(v * den) for v in v0.values]
    for _ in range(n):
        new = [0] * N
        for i, vi in enumerate(vec):
            if vi:
                for j, w in int_rows[i].items():
                    new[j] += vi * w
        vec = new
        den *= D
    return Distribution(K.states, [Fraction(x, den) for x in vec])


def char_poly(K: TransitionMatrix) -> tuple:
    """Monic characteristic polynomial, ascending Fraction coefficients."""
    if K.n > CHAR_POLY_CAP:
        raise ValueError(f"char_poly capped at {CHAR_POLY_CAP} states")
    return char_poly_exact(K.dense())


def stationary(K: TransitionMatrix):
    """Exact stationary distribution(s) of K.

    Returns (Distribution, True) when the left null space of K - I is
    one-dimensional. Otherwise returns (basis, False) where basis is a
    list of rational vectors spanning all solutions of vK = v.

    Small systems are solved by dense exact elimination. Larger ones go
    through the modular route with an exact sparse verification of the
    reconstructed vector, falling back to dense exact arithmetic if the
    kernel is not one-dimensional.
    """
    n = K.n
    if n > DENSE_STATE_CAP:
        raise ValueError(f"stationary capped at {DENSE_STATE_CAP} states")
    if n <= EXACT_SOLVE_CAP:
        return _stationary_exact(K)
    D = 1
    for row in K.rows:
        for p in row.values():
            D = D * p.denominator // math.gcd(D, p.denominator)
    int_rows = []
    for i, row in enumerate(K.rows):
        r = {j: int(p * D) for j, p in row.items()}
        r[i] = r.get(i, 0) - D
        int_rows.append({j: v for j, v in r.items() if v})
    try:
        status, vec = certified_left_kernel(int_rows, n)
    except KernelNotCertified:
        return _stationary_exact(K)
    if status != "unique":
        return _stationary_exact(K)
    total = sum(vec)
    if total == 0:
        return _stationary_exact(K)
    if total < 0:
        vec = tuple(-x for x in vec)
        total = -total
    return Distribution(K.states, [x / total for x in vec]), True


def _stationary_exact(K: TransitionMatrix):
    n = K.n
    dense = K.dense()
    # left kernel of K - I = right kernel of (K - I)^T
    transposed = [
        [dense[i][j] - (1 if i == j else 0) for i in range(n)]
        for j in range(n)
    ]
    basis = fraction_null_space(transposed)
    if not basis:
        raise ArithmeticError("stochastic matrix with empty stationary space")
    if len(basis) > 1:
        return list(basis), False
    vec = basis[0]
    total = sum(vec)
    if total < 0:
        vec = tuple(-x for x in vec)
        total = -total
    return Distribution(K.states, [x / total for x in vec]), True


# -- ergodicity ------------------------------------------------------------

def _support(K: TransitionMatrix) -> list:
    return [list(row.keys()) for row in K.rows]


def _reaches_all(adj, start) -> bool:
    n = len(adj)
    seen = bytearray(n)
    seen[start] = 1
    queue = deque([start])
    count = 1
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = 1
                count += 1
                queue.append(v)
    return count == n


def is_irreducible(K: TransitionMatrix) -> bool:
    """True iff the support digraph is strongly connected."""
    adj = _support(K)
    n = len(adj)
    radj = [[] for _ in range(n)]
    for u, targets in enumerate(adj):
        for v in targets:
            radj[v].append(u)
    return _reaches_all(adj, 0) and _reaches_all(radj, 0)


def _strongly_connected_components(adj) -> list:
    # Tarjan, iterative; components come back in reverse topological order
    n = len(adj)
    index = [0] * n
    low = [0] * n
    on_stack = bytearray(n)
    visited = bytearray(n)
    stack = []
    components = []
    counter = [1]
    for root in range(n):
        if visited[root]:
            continue
        work = [(root, 0)]
        while work:
            u, ptr = work[-1]
            if ptr == 0:
                visited[u] = 1
                index[u] = low[u] = counter[0]
                counter[0] += 1
                stack.append(u)
                on_stack[u] = 1
            advanced = False
            for k in range(ptr, len(adj[u])):
                v = adj[u][k]
                if not visited[v]:
                    work[-1] = (u, k + 1)
                    work.append((v, 0))
                    advanced = True
                    break
                if on_stack[v]:
                    low[u] = min(low[u], index[v])
            if advanced:
                continue
            work.pop()
            if low[u] == index[u]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = 0
                    comp.append(w)
                    if w == u:
                        break
                components.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[u])
    return components


def is_aperiodic(K: TransitionMatrix) -> bool:
    """True iff every recurrent class has period 1 (BFS-level gcd)."""
    adj = _support(K)
    n = len(adj)
    components = _strongly_connected_components(adj)
    comp_of = [0] * n
    for ci, comp in enumerate(components):
        for u in comp:
            comp_of[u] = ci
    for ci, comp in enumerate(components):
        recurrent = all(comp_of[v] == ci for u in comp for v in adj[u])
        if not recurrent:
            continue
        members = set(comp)
        level = {comp[0]: 0}
        queue = deque([comp[0]])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v in members and v not in level:
                    level[v] = level[u] + 1
                    queue.append(v)
        g = 0
        for u in comp:
            for v in adj[u]:
                if v in members:
                    g = math.gcd(g, level[u] + 1 - level[v])
        if g != 1:
            return False
    return True


# -- simulation ------------------------------------------------------------

@dataclass(frozen=True)
class WalkSpec:
    """What to walk on: a field with a chosen basis, or the integers mod p.

    basis stores coordinate bitmasks. The step law is fixed by the walk
    kind: 0 with probability 1/2 and a uniform basis element otherwise,
    or a fair +/-1 for the mod-p walk.
    """

    algebra: QuotientAlgebra | None = None
    basis: tuple = ()
    modulus: int | None = None
    squaring: bool = True

    @classmethod
    def field_walk(cls, alg: QuotientAlgebra, basis, squaring: bool = True):
        bits = _check_basis(alg, basis)
        if alg.q > SIMULATE_FIELD_CAP:
            raise ValueError(f"state space {alg.q} exceeds cap {SIMULATE_FIELD_CAP}")
        return cls(algebra=alg, basis=tuple(bits), modulus=None, squaring=squaring)

    @classmethod
    def modp_walk(cls, p: int):
        if p == 2 or not is_prime(p):
            raise ValueError(f"{p} is not an odd prime")
        if p > MODP_CAP:
            raise ValueError(f"p = {p} exceeds cap {MODP_CAP}")
        return cls(algebra=None, basis=(), modulus=p, squaring=True)

    @property
    def state_count(self) -> int:
        return self.modulus if self.modulus else self.algebra.q

    def state_labels(self) -> list:
        if self.modulus:
            return [str(i) for i in range(self.modulus)]
        return _field_labels(self.algebra)


def simulate(spec: WalkSpec, n: int, trials: int, seed: int,
             threads: int = 1) -> Distribution:
    """Empirical law of X_n over independent runs started at 0.

    Deterministic for a given seed regardless of thread count: trials are
    split into fixed-size batches and batch b always draws from a fresh
    generator seeded with seed + b.
    """
    if n < 0:
        raise ValueError("negative step count")
    if trials <= 0:
        raise ValueError("need at least one trial")
    if not 0 <= seed < 1 << 64:
        raise ValueError("seed must fit in 64 bits")
    q = spec.state_count
    if spec.modulus is None:
        fb = spec.algebra.modulus.bits
        if spec.squaring:
            step_map = np.array(
                [_mulmod_bits(a, a, fb) for a in range(q)], dtype=np.int64)
        else:
            step_map = np.arange(q, dtype=np.int64)
        d = spec.algebra.d
        eps_table = np.array([0] * d + list(spec.basis), dtype=np.int64)
    sizes = []
    left = trials
    while left > 0:
        take = min(left, SIMULATE_BATCH)
        sizes.append(take)
        left -= take

    def run_batch(args):
        b, size = args
        rng = np.random.default_rng(seed + b)
        x = np.zeros(size, dtype=np.int64)
        if spec.modulus is None:
            two_d = 2 * spec.algebra.d
            for _ in range(n):
                idx = rng.integers(0, two_d, size=size)
                x = step_map[x] ^ eps_table[idx]
        else:
            p = spec.modulus
            for _ in range(n):
                sign = 2 * rng.integers(0, 2, size=size) - 1
                x = (x * x + sign) % p
        return np.bincount(x, minlength=q)

    jobs = list(enumerate(sizes))
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts_list = list(pool.map(run_batch, jobs))
    else:
        counts_list = [run_batch(job) for job in jobs]
    counts = np.zeros(q, dtype=np.int64)
    for c in counts_list:
        counts += c
    return Distribution(
        spec.state_labels(),
        [Fraction(int(c), trials) for c in counts])


# -- structural comparisons ------------------------------------------------

def intertwiner_check(K1: TransitionMatrix, K2: TransitionMatrix, L) -> bool:
    """True iff K2(L(a), L(b)) = K1(a, b) for all states a, b."""
    n = K1.n
    if K2.n != n:
        raise ValueError("state counts differ")
    L = list(L)
    if sorted(L) != list(range(n)):
        raise ValueError("L is not a bijection on state indices")
    for a, row in enumerate(K1.rows):
        mapped = {L[b]: p for b, p in row.items()}
        if mapped != K2.rows[L[a]]:
            return False
    return True


def frobenius_matched_map(alg: QuotientAlgebra, source, target) -> list:
    """Linear bijection pairing two squaring-ordered normal bases.

    source and target are orbit tuples of coordinate bitmasks, each
    listed in squaring order (as frobenius_orbits emits them). The map
    sends the i-th element of source to the i-th element of target and
    extends linearly; returned as a state permutation list.
    """
    d = alg.d
    fb = alg.modulus.bits
    for orb in (source, target):
        if len(orb) != d or not _independent(orb):
            raise ValueError("orbit is not a normal basis")
        for i, b in enumerate(orb):
            if _mulmod_bits(b, b, fb) != orb[(i + 1) % d]:
                raise ValueError("orbit is not in squaring order")
    lin = BinaryMatrix(target) @ BinaryMatrix(source).inverse()
    return [lin.apply(s) for s in range(alg.q)]


def block_equivalence_check(alg: QuotientAlgebra, basis) -> bool:
    """Compare square-and-add vs add-only from 0 at n = d, 2d, 3d.

    Requires the basis to be a Frobenius orbit (a normal basis): the
    squaring map then permutes the basis, which is what lines the two
    walks up at multiples of d. Exact evolution on both sides.
    """
    if alg.q > DENSE_STATE_CAP:
        raise ValueError(f"state space {alg.q} exceeds cap {DENSE_STATE_CAP}")
    bits = _check_basis(alg, basis)
    fb = alg.modulus.bits
    if {_mulmod_bits(b, b, fb) for b in bits} != set(bits):
        raise ValueError("basis is not closed under squaring (not normal)")
    labels = _field_labels(alg)
    K = TransitionMatrix(labels, _field_rows(alg, bits, True))
    T = TransitionMatrix(labels, _field_rows(alg, bits, False))
    v0 = Distribution.point_mass(labels, 0)
    return all(
        evolve(v0, K, k * alg.d) == evolve(v0, T, k * alg.d)
        for k in (1, 2, 3))
