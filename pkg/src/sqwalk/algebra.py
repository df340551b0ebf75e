"""The quotient algebra F_2[x]/(f) and its squaring structure.

Everything here is exact bit arithmetic. An algebra element is a d-bit
coordinate vector over the power basis 1, x, ..., x^(d-1), stored as an
integer bitmask exactly like BinaryPolynomial. The squaring map is F_2
linear (Frobenius), so it has a d x d matrix A; for the cyclotomic case
f = Phi_p with 2 a primitive root mod p, every power A^j (1 <= j <= d-1)
is a permutation matrix with a single column replaced by all ones, and
this module verifies that structure rather than assuming it.
"""

from __future__ import annotations

import math

from .gf2poly import (
    BinaryPolynomial,
    _divmod_bits,
    _mulmod_bits,
    _prime_factors,
    cyclotomic,
    factor_degree_profile,
    is_irreducible,
    is_prime,
    is_squarefree,
    order_of_two,
)

#: largest field for the exhaustive primitive-element scan
PRIMITIVE_SEARCH_CAP = 1 << 20
#: largest field for a discrete-log table
DLOG_TABLE_CAP = 1 << 16
#: largest dimension for the Frobenius orbit scan
ORBIT_DIMENSION_CAP = 24


class QuotientAlgebra:
    """F_2[x]/(f) for a squarefree modulus f of degree d; 2^d elements.

    Squarefreeness is what makes squaring invertible on the quotient
    (it is an automorphism on each CRT component), and the walk built on
    top relies on that, so it is enforced at construction.
    """

    __slots__ = ("modulus", "d", "q", "_irr")

    def __init__(self, modulus: BinaryPolynomial):
        if modulus.degree < 1:
            raise ValueError("modulus must have degree >= 1")
        if not is_squarefree(modulus):
            raise ValueError(
                f"modulus {modulus} has a repeated factor; squaring would "
                "not be invertible on the quotient")
        self.modulus = modulus
        self.d = modulus.degree
        self.q = 1 << self.d
        self._irr = None

    @property
    def irreducible(self) -> bool:
        if self._irr is None:
            self._irr = is_irreducible(self.modulus)
        return self._irr

    def element(self, bits: int) -> "AlgebraElement":
        return AlgebraElement(self, bits)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, 0)

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, 1)

    def x(self) -> "AlgebraElement":
        if self.d == 1:
            return AlgebraElement(self, _divmod_bits(0b10, self.modulus.bits)[1])
        return AlgebraElement(self, 0b10)

    def reduce(self, poly: BinaryPolynomial) -> "AlgebraElement":
        """Image of an arbitrary polynomial in the quotient."""
        return AlgebraElement(self, _divmod_bits(poly.bits, self.modulus.bits)[1])

    def elements(self):
        """All 2^d elements in coordinate order."""
        return (AlgebraElement(self, bits) for bits in range(self.q))

    def __eq__(self, other):
        if isinstance(other, QuotientAlgebra):
            return self.modulus == other.modulus
        return NotImplemented

    def __hash__(self):
        return hash(("QuotientAlgebra", self.modulus.bits))

    def __repr__(self):
        return f"QuotientAlgebra({self.modulus!r})"


class AlgebraElement:
    """A d-bit coordinate vector in its parent algebra."""

    __slots__ = ("algebra", "bits")

    def __init__(self, algebra: QuotientAlgebra, bits: int):
        if not 0 <= bits < algebra.q:
            raise ValueError(
                f"coordinate vector {bits:#x} does not fit dimension {algebra.d}")
        self.algebra = algebra
        self.bits = bits

    @property
    def coords(self) -> tuple:
        """Coefficients over 1, x, ..., x^(d-1); always length d."""
        return tuple(self.bits >> i & 1 for i in range(self.algebra.d))

    def _check_same(self, other):
        if self.algebra != other.algebra:
            raise ValueError("elements live in different algebras")

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check_same(other)
        return AlgebraElement(self.algebra, self.bits ^ other.bits)

    __sub__ = __add__

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check_same(other)
        return AlgebraElement(
            self.algebra,
            _mulmod_bits(self.bits, other.bits, self.algebra.modulus.bits))

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers not supported")
        base = self.bits
        fb = self.algebra.modulus.bits
        acc = _divmod_bits(1, fb)[1]
        while e:
            if e & 1:
                acc = _mulmod_bits(acc, base, fb)
            base = _mulmod_bits(base, base, fb)
            e >>= 1
        return AlgebraElement(self.algebra, acc)

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.algebra == other.algebra and self.bits == other.bits
        return NotImplemented

    def __hash__(self):
        return hash((self.algebra, self.bits))

    def __bool__(self):
        return self.bits != 0

    def __str__(self):
        return str(BinaryPolynomial(self.bits))

    def __repr__(self):
        return f"<{self} in F_2[x]/({self.algebra.modulus})>"


class BinaryMatrix:
    """Square matrix over F_2 acting on coordinate column vectors.

    Stored one column per integer: bit i of cols[j] is the entry in row i,
    column j, i.e. the coefficient of x^i in the image of x^j.
    """

    __slots__ = ("d", "cols")

    def __init__(self, cols):
        cols = tuple(cols)
        d = len(cols)
        if d == 0:
            raise ValueError("empty matrix")
        for c in cols:
            if not 0 <= c < 1 << d:
                raise ValueError("column does not fit the dimension")
        self.d = d
        self.cols = cols

    @classmethod
    def identity(cls, d: int) -> "BinaryMatrix":
        return cls(1 << i for i in range(d))

    @classmethod
    def from_rows(cls, rows) -> "BinaryMatrix":
        """Build from row bitmasks (bit j of rows[i] = entry (i, j))."""
        rows = tuple(rows)
        d = len(rows)
        return cls(
            sum((rows[i] >> j & 1) << i for i in range(d)) for j in range(d))

    def entry(self, i: int, j: int) -> int:
        if not (0 <= i < self.d and 0 <= j < self.d):
            raise IndexError("matrix index out of range")
        return self.cols[j] >> i & 1

    def rows(self) -> tuple:
        return tuple(
            sum((self.cols[j] >> i & 1) << j for j in range(self.d))
            for i in range(self.d))

    def apply(self, v: int) -> int:
        """Matrix times column vector: XOR of the columns v selects."""
        acc = 0
        j = 0
        while v:
            if v & 1:
                acc ^= self.cols[j]
            v >>= 1
            j += 1
        return acc

    def apply_transpose(self, beta: int) -> int:
        """Transpose action on a character mask: bit i = parity(col_i & beta)."""
        acc = 0
        for i, c in enumerate(self.cols):
            acc |= ((c & beta).bit_count() & 1) << i
        return acc

    def __matmul__(self, other):
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        if self.d != other.d:
            raise ValueError("dimension mismatch")
        return BinaryMatrix(self.apply(c) for c in other.cols)

    def __pow__(self, j: int) -> "BinaryMatrix":
        return matrix_power(self, j)

    def inverse(self) -> "BinaryMatrix":
        """Inverse over F_2 by Gauss-Jordan on columns; raises if singular."""
        d = self.d
        work = list(self.cols)
        acc = [1 << i for i in range(d)]
        for i in range(d):
            piv = next((j for j in range(i, d) if work[j] >> i & 1), None)
            if piv is None:
                raise ValueError("matrix is singular over F_2")
            work[i], work[piv] = work[piv], work[i]
            acc[i], acc[piv] = acc[piv], acc[i]
            for j in range(d):
                if j != i and work[j] >> i & 1:
                    work[j] ^= work[i]
                    acc[j] ^= acc[i]
        return BinaryMatrix(acc)

    def __eq__(self, other):
        if isinstance(other, BinaryMatrix):
            return self.cols == other.cols
        return NotImplemented

    def __hash__(self):
        return hash(("BinaryMatrix", self.cols))

    def __str__(self):
        # row-major, column 0 leftmost; matches how the matrices are usually printed
        return "\n".join(
            "".join(str(self.cols[j] >> i & 1) for j in range(self.d))
            for i in range(self.d))

    def __repr__(self):
        return f"BinaryMatrix(cols={self.cols!r})"


def make_algebra(f: BinaryPolynomial) -> QuotientAlgebra:
    """Quotient algebra handle; rejects non-squarefree moduli."""
    return QuotientAlgebra(f)


def square(alg: QuotientAlgebra, a: AlgebraElement) -> AlgebraElement:
    """a^2 in the algebra, by direct modular multiplication."""
    if a.algebra != alg:
        raise ValueError("element does not belong to this algebra")
    return a * a


def squaring_matrix(alg: QuotientAlgebra) -> BinaryMatrix:
    """Matrix of y -> y^2: column j holds the coordinates of x^(2j) mod f."""
    fb = alg.modulus.bits
    return BinaryMatrix(
        _divmod_bits(1 << 2 * j, fb)[1] for j in range(alg.d))


def matrix_power(A: BinaryMatrix, j: int) -> BinaryMatrix:
    """A^j by binary powering; j = 0 gives the identity."""
    if j < 0:
        raise ValueError("negative matrix powers not supported")
    acc = BinaryMatrix.identity(A.d)
    base = A
    while j:
        if j & 1:
            acc = acc @ base
        base = base @ base
        j >>= 1
    return acc


def frobenius_column_structure(p: int) -> list:
    """Verify and report the shape of the squaring-matrix powers for Phi_p.

    Requires 2 to be a primitive root mod p so that Phi_p is irreducible.
    For each j in 1..d-1 (d = p-1), A^j must be a permutation matrix whose
    column j* = (p-1) * 2^(-j) mod p is replaced by all ones. Returns the
    list of (j, j*) pairs; any deviation raises, since it would mean the
    matrix arithmetic itself is broken.
    """
    if p == 2 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    k = order_of_two(p)
    if k != p - 1:
        raise ValueError(
            f"order of 2 mod {p} is {k}, so 2 is not a primitive root and "
            f"the cyclotomic modulus splits")
    d = p - 1
    A = squaring_matrix(make_algebra(cyclotomic(p)))
    ones = (1 << d) - 1
    pairs = []
    power = A
    for j in range(1, d):
        jstar = (p - 1) * pow(2, -j, p) % p
        seen = 0
        for col_index, col in enumerate(power.cols):
            if col_index == jstar:
                if col != ones:
                    raise ArithmeticError(
                        f"A^{j}: column {col_index} should be all ones")
            elif col.bit_count() != 1 or seen & col:
                raise ArithmeticError(
                    f"A^{j}: column {col_index} breaks the permutation part")
            else:
                seen |= col
        pairs.append((j, jstar))
        power = A @ power
    return pairs


def find_primitive_element(alg: QuotientAlgebra) -> AlgebraElement:
    """First generator of the multiplicative group, scanning coordinate order.

    Order checks factor q-1 and test a^((q-1)/l) != 1 for each prime l.
    Exhaustive, hence the field-size cap.
    """
    if not alg.irreducible:
        raise ValueError("primitive elements require an irreducible modulus")
    if alg.q > PRIMITIVE_SEARCH_CAP:
        raise ValueError(f"field size {alg.q} exceeds search cap {PRIMITIVE_SEARCH_CAP}")
    n = alg.q - 1
    prime_parts = _prime_factors(n) if n > 1 else []
    for bits in range(1, alg.q):
        a = alg.element(bits)
        if all((a ** (n // l)).bits != 1 for l in prime_parts):
            return a
    raise ArithmeticError("no generator found; the field arithmetic is broken")


def discrete_log_table(alg: QuotientAlgebra) -> dict:
    """Map element bits -> k with g^k = element, g the first primitive element.

    Covers all q-1 nonzero elements; capped at q <= 2^16 since the table
    is dense.
    """
    if alg.q > DLOG_TABLE_CAP:
        raise ValueError(f"field size {alg.q} exceeds table cap {DLOG_TABLE_CAP}")
    g = find_primitive_element(alg)
    table = {}
    acc = alg.one()
    for k in range(alg.q - 1):
        if acc.bits in table:
            raise ArithmeticError("generator order collapsed; arithmetic is broken")
        table[acc.bits] = k
        acc = acc * g
    return table


def element_label(bits: int, table: dict | None = None) -> str:
    """Human name for an element: "r^k" form with a log table, else the
    polynomial text form (zero prints as "-", matching the parser)."""
    if table is None:
        return str(BinaryPolynomial(bits))
    if bits == 0:
        return "0"
    k = table[bits]
    if k == 0:
        return "1"
    if k == 1:
        return "r"
    return f"r^{k}"


def frobenius_orbits(alg: QuotientAlgebra) -> list:
    """Orbits of the nonzero elements under y -> y^2.

    Each orbit is a tuple of coordinate bitmasks in squaring order,
    starting from the smallest member; orbits are listed by that smallest
    member. Raw ints rather than AlgebraElement keeps the d=24 scan sane.
    """
    if not alg.irreducible:
        raise ValueError("orbit scan requires an irreducible modulus")
    if alg.d > ORBIT_DIMENSION_CAP:
        raise ValueError(f"dimension {alg.d} exceeds orbit cap {ORBIT_DIMENSION_CAP}")
    fb = alg.modulus.bits
    seen = bytearray(alg.q)
    orbits = []
    for start in range(1, alg.q):
        if seen[start]:
            continue
        orbit = []
        b = start
        while not seen[b]:
            seen[b] = 1
            orbit.append(b)
            b = _mulmod_bits(b, b, fb)
        orbits.append(tuple(orbit))
    return orbits


def _independent(vectors) -> bool:
    pivots = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = v
                break
            v ^= pivots[top]
        else:
            return False
    return True


def normal_bases(alg: QuotientAlgebra) -> list:
    """Frobenius orbits of full size d that are F_2-linearly independent."""
    return [orb for orb in frobenius_orbits(alg)
            if len(orb) == alg.d and _independent(orb)]


def crt_summary(f: BinaryPolynomial) -> list:
    """Component field sizes 2^(d_i) of F_2[x]/(f), ascending."""
    return [1 << d for d in factor_degree_profile(f)]
