"""Exact linear algebra working set.

Dense rational routines (null spaces, characteristic polynomials) for
small systems, and a certified modular route for large sparse kernels:
find the kernel modulo one word-size prime, lift it to high p-adic
precision with Hensel steps (one matrix inversion mod P buys all the
precision), reconstruct rational entries, then verify the candidate
exactly against the original sparse system. Nothing is trusted until
that last exact check passes, so the modular shortcut cannot silently
give a wrong answer.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

# primes just below 2^20: small enough that every product in the lifting
# loop stays inside int64, large enough that a rank drop mod P is rare
KERNEL_PRIMES = (1048573, 1048571, 1048559, 1048549)

MAX_LIFT_STEPS = 640    # ~12.8k bits of p-adic precision
_ENTRY_GUARD = 1 << 27  # |entry| bound keeping the int64 matvecs exact


def fraction_null_space(matrix) -> list:
    """Basis of the right null space of a dense rational matrix.

    Input is a list of rows; each basis vector comes back as a tuple of
    Fractions. Plain Gauss-Jordan, exact.
    """
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    rows = [[Fraction(x) for x in row] for row in matrix]
    pivot_cols = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivot_cols.append(c)
        r += 1
    free_cols = sorted(set(range(n)) - set(pivot_cols))
    basis = []
    for fc in free_cols:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for pr, pc in enumerate(pivot_cols):
            v[pc] = -rows[pr][fc]
        basis.append(tuple(v))
    return basis


def char_poly_exact(matrix) -> tuple:
    """Coefficients (ascending, monic) of det(lambda*I - M), exactly.

    Similarity-reduces M to upper Hessenberg form with exact rational
    row/column operations, then expands the leading principal minors:

        p_m = (lambda - H[m-1][m-1]) p_{m-1}
              - sum_{k=0}^{m-2} H[k][m-1] (prod_{l=k+1}^{m-1} H[l][l-1]) p_k
    """
    n = len(matrix)
    H = [[Fraction(x) for x in row] for row in matrix]
    for j in range(n - 2):
        piv = next((i for i in range(j + 1, n) if H[i][j]), None)
        if piv is None:
            continue
        if piv != j + 1:
            H[j + 1], H[piv] = H[piv], H[j + 1]
            for row in H:
                row[j + 1], row[piv] = row[piv], row[j + 1]
        base = H[j + 1][j]
        for i in range(j + 2, n):
            if H[i][j]:
                t = H[i][j] / base
                H[i] = [a - t * b for a, b in zip(H[i], H[j + 1])]
                # inverse column operation keeps the spectrum intact
                for row in H:
                    row[j + 1] += t * row[i]
    polys = [(Fraction(1),)]
    for m in range(1, n + 1):
        prev = polys[m - 1]
        pm = [Fraction(0)] + list(prev)
        diag = H[m - 1][m - 1]
        for idx, c in enumerate(prev):
            pm[idx] -= diag * c
        prod = Fraction(1)
        for k in range(m - 2, -1, -1):
            prod *= H[k + 1][k]
            if not prod:
                break
            coef = H[k][m - 1] * prod
            if coef:
                for idx, c in enumerate(polys[k]):
                    pm[idx] -= coef * c
        polys.append(tuple(pm))
    return polys[n]


def eliminate_mod_p(A: np.ndarray, P: int) -> tuple:
    """In-place Gauss-Jordan of an int64 matrix modulo a word prime.

    Returns (rank, pivot column list); A ends in reduced row echelon form.
    All intermediate products stay below 2^62.
    """
    m, n = A.shape
    A %= P
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, P)
        A[r] = A[r] * inv % P
        others = np.nonzero(A[:, c])[0]
        others = others[others != r]
        if others.size:
            A[others] = (A[others] - A[others, c][:, None] * A[r][None, :]) % P
        pivots.append(c)
        r += 1
    return r, pivots


def nullspace_mod_p(A: np.ndarray, P: int) -> list:
    """Null space basis mod P of an int64 matrix; destroys A."""
    m, n = A.shape
    rank, pivots = eliminate_mod_p(A, P)
    free_cols = sorted(set(range(n)) - set(pivots))
    basis = []
    for fc in free_cols:
        v = np.zeros(n, dtype=np.int64)
        v[fc] = 1
        for pr, pc in enumerate(pivots):
            v[pc] = (-A[pr, fc]) % P
        basis.append(v)
    return basis


def rational_reconstruct(c: int, M: int) -> Fraction | None:
    """Fraction r/t with r/t = c mod M and |r|, |t| <= sqrt(M/2), or None.

    Half-extended Euclid; unique when it exists. The caller must verify
    the result against the original system, since c may simply not encode
    a small rational.
    """
    c %= M
    bound = math.isqrt(M // 2)
    r0, r1 = M, c
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound:
        return None
    if math.gcd(r1, abs(t1)) != 1:
        return None
    return Fraction(r1, t1)


class KernelNotCertified(ArithmeticError):
    """Modular route could not pin down a one-dimensional kernel."""


def certified_left_kernel(int_rows: list, n: int, primes=KERNEL_PRIMES) -> tuple:
    """Left kernel of a sparse square integer matrix, certified exact.

    int_rows holds dicts {column: integer} for each of the n rows of M.
    Returns ("unique", v) with v a tuple of Fractions spanning the left
    kernel, after an exact sparse verification of v*M = 0; ("none", 0)
    when some prime shows full rank (so the kernel is empty over Q);
    ("multi", k) with k >= 2 when some prime already shows a k-dimensional
    kernel (the caller falls back to dense exact elimination). Raises
    KernelNotCertified if no prime leads to a verified vector.
    """
    height = max((max(map(abs, row.values()), default=0) for row in int_rows),
                 default=0)
    if height >= _ENTRY_GUARD:
        raise KernelNotCertified("matrix entries too large for int64 lifting")
    for P in primes:
        # left kernel of M = right kernel of M^T; build M^T densely mod P
        A = np.zeros((n, n), dtype=np.int64)
        for i, row in enumerate(int_rows):
            for j, val in row.items():
                A[j, i] = val % P
        basis = nullspace_mod_p(A, P)
        if len(basis) == 0:
            # rank n mod P forces rank n over Q: no kernel at all
            return "none", 0
        if len(basis) > 1:
            return "multi", len(basis)
        anchor = int(np.nonzero(basis[0])[0][0])
        vec = _lift_left_kernel(int_rows, n, P, anchor)
        if vec is not None:
            return "unique", vec
    raise KernelNotCertified(
        f"no verified kernel vector after {len(primes)} lifting attempts")


def _lift_left_kernel(int_rows: list, n: int, P: int, anchor: int):
    """Hensel-lift the kernel vector pinned to 1 at one coordinate.

    Solves the bordered square system

        [ M^T  e_a ] [x]     [0]
        [ e_a^T  0 ] [t]  =  [1]

    whose unique solution has x equal to the kernel vector scaled so that
    x[anchor] = 1. The rows of M sum to zero, so the all-ones vector
    spans the right kernel and the border is invertible mod P exactly
    when the left nullity mod P is one and x[anchor] is a unit, which the
    caller has already checked. One inversion mod P then buys arbitrary
    precision: a Hensel step costs two matrix-vector products, and the
    periodic reconstruction attempts stop as soon as the exact sparse
    verification passes. Returns the Fraction tuple, or None.
    """
    m = n + 1
    S = np.zeros((m, m), dtype=np.int64)
    for i, row in enumerate(int_rows):
        for j, val in row.items():
            S[j, i] = val
    S[anchor, n] = 1
    S[n, anchor] = 1
    aug = np.concatenate([S % P, np.eye(m, dtype=np.int64)], axis=1)
    rank, pivots = eliminate_mod_p(aug, P)
    if rank < m or pivots != list(range(m)):
        return None
    Sinv = np.ascontiguousarray(aug[:, m:])
    digits = [0] * m
    residual = np.zeros(m, dtype=np.int64)
    residual[n] = 1
    modulus = 1
    attempt_at = 2
    for step in range(1, MAX_LIFT_STEPS + 1):
        y = Sinv @ (residual % P) % P
        for idx in range(m):
            digits[idx] += int(y[idx]) * modulus
        modulus *= P
        # exact division: S @ y is congruent to residual mod P
        residual = (residual - S @ y) // P
        if step == attempt_at or step == MAX_LIFT_STEPS:
            attempt_at *= 2
            candidate = []
            for idx in range(n):
                frac = rational_reconstruct(digits[idx], modulus)
                if frac is None:
                    break
                candidate.append(frac)
            if len(candidate) == n and _verify_left_kernel(candidate, int_rows, n):
                return tuple(candidate)
    return None


def _verify_left_kernel(v, int_rows, n) -> bool:
    acc = [Fraction(0)] * n
    for i, row in enumerate(int_rows):
        vi = v[i]
        if vi:
            for j, val in row.items():
                acc[j] += vi * val
    return all(x == 0 for x in acc)
