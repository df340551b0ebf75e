"""Polynomials over GF(2), plus the small amount of integer number theory
the rest of the package needs (primality, multiplicative order of 2).

A binary polynomial is stored as an arbitrary-precision integer bitmask:
bit i is the coefficient of x^i, so 0b1011 = 11 is 1 + x + x^3. Addition
is XOR, and every nonzero polynomial is automatically monic. The zero
polynomial is the integer 0.

Two text forms are accepted:

  * an ascending comma-separated exponent list, e.g. "0,1,3" for 1+x+x^3,
    with "-" denoting the zero polynomial;
  * a hex literal of the coefficient bitmask, e.g. "0xb" for the same.

Emission always uses the exponent list. Degrees are capped at 2^20: this
is a desk-scale library and the cap keeps worst-case memory and runtime
honest rather than open-ended.
"""

from __future__ import annotations

import functools
import math

DEGREE_CAP = 1 << 20


class PolynomialParseError(ValueError):
    """Raised for malformed polynomial text; carries the offending position."""

    def __init__(self, text, pos, reason):
        self.text = text
        self.pos = pos
        self.reason = reason
        super().__init__(f"cannot parse {text!r} at position {pos}: {reason}")


@functools.total_ordering
class BinaryPolynomial:
    """Immutable polynomial over GF(2), wrapping an integer bitmask."""

    __slots__ = ("bits",)

    def __init__(self, bits: int = 0):
        if bits < 0:
            raise ValueError("coefficient bitmask must be nonnegative")
        if bits >> (DEGREE_CAP + 1):
            raise ValueError(f"degree exceeds cap {DEGREE_CAP}")
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("BinaryPolynomial is immutable")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_exponents(cls, exponents) -> "BinaryPolynomial":
        """Build from an iterable of exponents; repeats cancel in pairs."""
        bits = 0
        for e in exponents:
            if e < 0:
                raise ValueError("negative exponent")
            if e > DEGREE_CAP:
                raise ValueError(f"degree exceeds cap {DEGREE_CAP}")
            bits ^= 1 << e
        return cls(bits)

    @classmethod
    def parse(cls, text: str) -> "BinaryPolynomial":
        """Parse an exponent list ("0,1,3"), hex bitmask ("0xb"), or "-"."""
        stripped = text.strip()
        if stripped == "-":
            return cls(0)
        if stripped.lower().startswith("0x"):
            body = stripped[2:]
            if not body:
                raise PolynomialParseError(text, len(text), "empty hex literal")
            try:
                return cls(int(body, 16))
            except ValueError:
                bad = next(i for i, ch in enumerate(body)
                           if ch not in "0123456789abcdefABCDEF")
                raise PolynomialParseError(text, text.index(body) + bad,
                                           f"invalid hex digit {body[bad]!r}") from None
        if not stripped:
            raise PolynomialParseError(text, 0, "empty input")
        bits = 0
        pos = 0
        for piece in text.split(","):
            item = piece.strip()
            if not item.isdigit():
                raise PolynomialParseError(text, pos, f"invalid exponent {item!r}")
            e = int(item)
            if e > DEGREE_CAP:
                raise PolynomialParseError(text, pos, f"degree exceeds cap {DEGREE_CAP}")
            if bits >> e & 1:
                raise PolynomialParseError(text, pos, f"repeated exponent {e}")
            bits |= 1 << e
            pos += len(piece) + 1
        return cls(bits)

    @classmethod
    def x(cls) -> "BinaryPolynomial":
        return cls(0b10)

    @classmethod
    def one(cls) -> "BinaryPolynomial":
        return cls(1)

    # -- inspection -------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return self.bits.bit_length() - 1

    def exponents(self) -> tuple:
        return tuple(i for i in range(self.bits.bit_length()) if self.bits >> i & 1)

    def __bool__(self):
        return self.bits != 0

    def __eq__(self, other):
        if isinstance(other, BinaryPolynomial):
            return self.bits == other.bits
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, BinaryPolynomial):
            return self.bits < other.bits
        return NotImplemented

    def __hash__(self):
        return hash(("BinaryPolynomial", self.bits))

    def __str__(self):
        if not self.bits:
            return "-"
        return ",".join(str(e) for e in self.exponents())

    def __repr__(self):
        return f"BinaryPolynomial({str(self)!r})"

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, BinaryPolynomial):
            return NotImplemented
        return BinaryPolynomial(self.bits ^ other.bits)

    __sub__ = __add__  # characteristic 2

    def __mul__(self, other):
        if not isinstance(other, BinaryPolynomial):
            return NotImplemented
        return BinaryPolynomial(_mul_bits(self.bits, other.bits))

    def __divmod__(self, other):
        if not isinstance(other, BinaryPolynomial):
            return NotImplemented
        q, r = _divmod_bits(self.bits, other.bits)
        return BinaryPolynomial(q), BinaryPolynomial(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]


# -- low-level bitmask arithmetic -----------------------------------------

def _mul_bits(a: int, b: int) -> int:
    # carryless shift-and-add; iterate over the sparser operand
    if a.bit_count() > b.bit_count():
        a, b = b, a
    acc = 0
    while a:
        low = a & -a
        acc ^= b << (low.bit_length() - 1)
        a ^= low
    return acc


def _divmod_bits(a: int, b: int) -> tuple:
    if b == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    db = b.bit_length() - 1
    q = 0
    while a.bit_length() - 1 >= db and a:
        shift = a.bit_length() - 1 - db
        q ^= 1 << shift
        a ^= b << shift
    return q, a


def _mulmod_bits(a: int, b: int, f: int) -> int:
    df = f.bit_length() - 1
    _, a = _divmod_bits(a, f)
    _, b = _divmod_bits(b, f)
    top = 1 << df
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= f
    return acc


# -- public operations ----------------------------------------------------

def poly_add(a: BinaryPolynomial, b: BinaryPolynomial) -> BinaryPolynomial:
    """Sum (= difference) of two binary polynomials."""
    return a + b


def poly_mulmod(a: BinaryPolynomial, b: BinaryPolynomial,
                f: BinaryPolynomial) -> BinaryPolynomial:
    """a*b mod f. The modulus must have degree >= 1."""
    if f.degree < 1:
        raise ValueError("modulus must have degree >= 1")
    return BinaryPolynomial(_mulmod_bits(a.bits, b.bits, f.bits))


def poly_gcd(a: BinaryPolynomial, b: BinaryPolynomial) -> BinaryPolynomial:
    """Greatest common divisor; monic by construction. Not both zero."""
    if not a.bits and not b.bits:
        raise ValueError("gcd(0, 0) is undefined")
    x, y = a.bits, b.bits
    while y:
        _, r = _divmod_bits(x, y)
        x, y = y, r
    return BinaryPolynomial(x)


@functools.lru_cache(maxsize=8)
def _odd_bit_mask(nbytes: int) -> int:
    # bits 0, 2, 4, ... set; used to pick the odd-degree coefficients after >> 1
    return int.from_bytes(b"\x55" * nbytes, "little")


def derivative(f: BinaryPolynomial) -> BinaryPolynomial:
    """Formal derivative; in characteristic 2 only odd-degree terms survive."""
    shifted = f.bits >> 1
    mask = _odd_bit_mask((shifted.bit_length() + 15) // 8 + 1)
    return BinaryPolynomial(shifted & mask)


def is_squarefree(f: BinaryPolynomial) -> bool:
    """True iff f has no repeated irreducible factor (deg f >= 1 required)."""
    if f.degree < 1:
        raise ValueError("squarefreeness needs degree >= 1")
    return poly_gcd(f, derivative(f)).bits == 1


def _x_pow2_tower(f: BinaryPolynomial, upto: int) -> list:
    """[x^(2^k) mod f for k = 0..upto], by repeated squaring mod f."""
    fb = f.bits
    h = _divmod_bits(0b10, fb)[1]
    tower = [h]
    for _ in range(upto):
        h = _mulmod_bits(h, h, fb)
        tower.append(h)
    return tower


def is_irreducible(f: BinaryPolynomial) -> bool:
    """Deterministic irreducibility test over GF(2).

    f of degree d is irreducible iff x^(2^d) = x mod f and, for every prime
    l dividing d, gcd(x^(2^(d/l)) - x, f) = 1 (no factor of degree d/l or
    smaller dividing d/l).
    """
    d = f.degree
    if d < 1:
        raise ValueError("irreducibility needs degree >= 1")
    if d == 1:
        return True
    tower = _x_pow2_tower(f, d)
    xb = _divmod_bits(0b10, f.bits)[1]
    if tower[d] != xb:
        return False
    for l in _prime_factors(d):
        g = BinaryPolynomial(tower[d // l] ^ xb)
        if poly_gcd(g, f).bits != 1:
            return False
    return True


def cyclotomic(n: int) -> BinaryPolynomial:
    """Cyclotomic polynomial of prime-power index, reduced mod 2.

    For prime p this is 1 + x + ... + x^(p-1); for p^k it is the same
    polynomial evaluated at x^(p^(k-1)). Indices that are not prime powers
    are rejected: the general product formula is out of scope here.
    """
    if n < 2:
        raise ValueError("index must be a prime power >= 2")
    primes = _prime_factors(n)
    if len(primes) != 1:
        raise ValueError(f"{n} is not a prime power")
    p = primes[0]
    stride = n // p
    bits = 0
    for i in range(p):
        e = i * stride
        if e > DEGREE_CAP:
            raise ValueError(f"degree exceeds cap {DEGREE_CAP}")
        bits |= 1 << e
    return BinaryPolynomial(bits)


def factor_degree_profile(f: BinaryPolynomial) -> tuple:
    """Degrees of the irreducible factors of a squarefree f, ascending.

    Distinct-degree factorization: strip out gcd(x^(2^k) - x, remaining)
    for k = 1, 2, ...; a squarefree product of degree-k irreducibles
    splits off as deg/k factors of degree k.
    """
    if not is_squarefree(f):
        raise ValueError("degree profile requires a squarefree polynomial")
    profile = []
    g = f.bits
    h = _divmod_bits(0b10, g)[1]
    k = 0
    while g.bit_length() - 1 > 0:
        k += 1
        if 2 * k > g.bit_length() - 1:
            # whatever survives has no factor of degree <= its half: irreducible
            profile.append(g.bit_length() - 1)
            break
        h = _mulmod_bits(h, h, g)
        # gcd(h - x, g) collects every irreducible factor of degree k
        d_k = poly_gcd(BinaryPolynomial(h ^ 0b10), BinaryPolynomial(g)).bits
        if d_k != 1:
            profile.extend([k] * ((d_k.bit_length() - 1) // k))
            g = _divmod_bits(g, d_k)[0]
            if g.bit_length() - 1 == 0:
                break
            h = _divmod_bits(h, g)[1]
    return tuple(sorted(profile))


# -- integer number theory -------------------------------------------------

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all 64-bit inputs."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list:
    """Distinct prime factors by trial division (inputs stay desk-scale)."""
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out.append(m)
    return out


def multiplicative_order(a: int, n: int) -> int:
    """Order of a in (Z/n)*; gcd(a, n) must be 1."""
    a %= n
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} is not invertible mod {n}")
    order = _group_exponent_bound(n)
    for p in _prime_factors(order):
        while order % p == 0 and pow(a, order // p, n) == 1:
            order //= p
    return order


def _group_exponent_bound(n: int) -> int:
    # Carmichael-style bound is overkill; Euler phi suffices as a starting
    # multiple of the true order.
    phi = 1
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            phi *= p - 1
            m //= p
            while m % p == 0:
                phi *= p
                m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        phi *= m - 1
    return phi


def order_of_two(p: int) -> int:
    """Multiplicative order of 2 mod an odd prime p."""
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    return multiplicative_order(2, p)


def is_two_primitive_root(p: int) -> bool:
    """True iff 2 generates the full multiplicative group mod p."""
    return order_of_two(p) == p - 1
