"""
Polynomials over GF(2) stored as Python integers: bit i is the coefficient of x^i.

Supports modular multiplication and exponentiation (exponents as large as
2^23209), Berlekamp-Massey, irreducibility testing and the SHA-1 digest used
to tell parameterized statuses apart.
"""
import hashlib
from dataclasses import dataclass
from typing import Iterable

from mtsieve.errors import ConstantPolynomialError, EmptySequenceError, ZeroModulusError

# Degree reported for the zero polynomial.
ZERO_DEGREE = -1

# Spread of each byte to 16 bits (squaring over GF(2) interleaves zeros).
_SQUARE_TABLE = tuple(
    sum(((b >> i) & 1) << (2 * i) for i in range(8)) for b in range(256)
)


@dataclass(frozen=True, slots=True)
class Gf2Poly:
    coeffs: int = 0

    def __post_init__(self):
        if self.coeffs < 0:
            raise ValueError("coefficient vector must be non-negative")

    @classmethod
    def from_exponents(cls, exponents: Iterable[int]) -> "Gf2Poly":
        value = 0
        for e in exponents:
            value ^= 1 << e
        return cls(value)

    @property
    def degree(self) -> int:
        return self.coeffs.bit_length() - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs == 0

    def coefficient(self, i: int) -> int:
        return (self.coeffs >> i) & 1

    def reciprocal(self) -> "Gf2Poly":
        """x^deg * p(1/x)."""
        if self.coeffs == 0:
            return self
        return Gf2Poly(int(format(self.coeffs, "b")[::-1], 2))

    def __add__(self, other: "Gf2Poly") -> "Gf2Poly":
        return Gf2Poly(self.coeffs ^ other.coeffs)

    __sub__ = __add__

    def __mul__(self, other: "Gf2Poly") -> "Gf2Poly":
        return Gf2Poly(_mul(self.coeffs, other.coeffs))

    def __mod__(self, other: "Gf2Poly") -> "Gf2Poly":
        if other.coeffs == 0:
            raise ZeroModulusError()
        return Gf2Poly(_mod(self.coeffs, other.coeffs))

    def __str__(self) -> str:
        if self.coeffs == 0:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            if self.coefficient(i):
                terms.append("1" if i == 0 else "x" if i == 1 else f"x^{i}")
        return "+".join(terms)


ONE = Gf2Poly(1)
X = Gf2Poly(2)


def _mul(a: int, b: int) -> int:
    if a < b:
        a, b = b, a
    c = 0
    while b:
        if b & 1:
            c ^= a
        a <<= 1
        b >>= 1
    return c


def _square(a: int) -> int:
    if a == 0:
        return 0
    data = a.to_bytes((a.bit_length() + 7) // 8, "little")
    out = 0
    for i, byte in enumerate(data):
        if byte:
            out |= _SQUARE_TABLE[byte] << (16 * i)
    return out


def _mod(a: int, b: int) -> int:
    db = b.bit_length() - 1
    da = a.bit_length() - 1
    while da >= db:
        a ^= b << (da - db)
        da = a.bit_length() - 1
    return a


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _mod(a, b)
    return a


def _check_modulus(modulus: Gf2Poly) -> None:
    if modulus.coeffs == 0:
        raise ZeroModulusError()
    if modulus.degree < 1:
        raise ValueError("modulus must have degree >= 1")


def poly_mul_mod(p: Gf2Poly, q: Gf2Poly, modulus: Gf2Poly) -> Gf2Poly:
    """(p * q) mod modulus."""
    _check_modulus(modulus)
    m = modulus.coeffs
    return Gf2Poly(_mod(_mul(_mod(p.coeffs, m), _mod(q.coeffs, m)), m))


def poly_pow_mod(base: Gf2Poly, exponent: int, modulus: Gf2Poly) -> Gf2Poly:
    """base^exponent mod modulus by left-to-right square-and-multiply."""
    _check_modulus(modulus)
    if exponent < 0:
        raise ValueError("exponent must be non-negative")
    m = modulus.coeffs
    b = _mod(base.coeffs, m)
    result = 1
    for bit in format(exponent, "b"):
        result = _mod(_square(result), m)
        if bit == "1":
            result = _mod(_mul(result, b), m)
    return Gf2Poly(_mod(result, m))


def _frobenius(p: int, times: int, start: int = 2) -> int:
    """start^(2^times) mod p by repeated squaring."""
    value = start
    for _ in range(times):
        value = _mod(_square(value), p)
    return value


def _prime_factors(n: int) -> list[int]:
    factors, q = [], 2
    while q * q <= n:
        if n % q == 0:
            factors.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        factors.append(n)
    return factors


def is_irreducible(p: Gf2Poly) -> bool:
    """Rabin's test: x^(2^d) == x mod p and gcd(x^(2^(d/q)) - x, p) == 1 for primes q | d."""
    d = p.degree
    if d < 1:
        raise ConstantPolynomialError()
    if d == 1:
        return True
    f = p.coeffs
    if not f & 1:
        return False  # divisible by x
    # Cheap screen for small factors: gcd(x^(2^k) - x, p) for small k.
    screen = min(d // 2, 16)
    value = 2
    for _ in range(screen):
        value = _mod(_square(value), f)
        if _gcd(f, value ^ 2) != 1:
            return False
    for q in _prime_factors(d):
        k = d // q
        if k <= screen:
            continue  # already covered by the screen
        if _gcd(f, _frobenius(f, k) ^ 2) != 1:
            return False
    return _frobenius(f, d - screen, value) == _mod(2, f)


def berlekamp_massey(bits: Iterable[int]) -> Gf2Poly:
    """Minimal polynomial (characteristic orientation) of a binary sequence.

    The connection polynomial C(x) = 1 + c_1 x + ... + c_L x^L of the shortest
    LFSR is returned as x^L C(1/x), whose degree is the linear complexity L.
    """
    seq = [int(b) & 1 for b in bits]
    if not seq:
        raise EmptySequenceError()
    c, b = 1, 1
    length, shift = 0, 1
    window = 0  # bit j holds s_{i-j}
    for i, s in enumerate(seq):
        window = (window << 1) | s
        if (c & window).bit_count() & 1:
            previous = c
            c ^= b << shift
            if 2 * length <= i:
                length = i + 1 - length
                b = previous
                shift = 1
            else:
                shift += 1
        else:
            shift += 1
    # Reverse the L + 1 coefficients of C.
    reversed_bits = format(c, f"0{length + 1}b")[-(length + 1):]
    return Gf2Poly(int(reversed_bits[::-1], 2))


def poly_digest(p: Gf2Poly) -> str:
    """SHA-1 of the 8-byte little-endian coefficient count followed by the little-endian coefficient bytes."""
    count = p.coeffs.bit_length()
    payload = count.to_bytes(8, "little") + p.coeffs.to_bytes((count + 7) // 8, "little")
    return hashlib.sha1(payload).hexdigest()
