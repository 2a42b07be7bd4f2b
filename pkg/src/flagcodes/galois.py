"""Arithmetic in GF(2^m) for building BCH check matrices.

Elements are polynomials over F2 packed into integers (bit i is the
coefficient of x^i), reduced modulo a fixed irreducible polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import InvalidArgument
from .f2core import BitVector

# Standard primitive polynomials, one per degree.
PRIMITIVE_POLYNOMIALS = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}

MAX_DEGREE = 16


def _poly_mod(a: int, mod: int) -> int:
    dm = mod.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= mod << (a.bit_length() - 1 - dm)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for q in range(1 << d, 1 << (d + 1)):
            if _poly_mod(poly, q) == 0:
                return False
    return True


@dataclass(frozen=True)
class FieldElement:
    value: int
    m: int

    @property
    def coeffs(self) -> BitVector:
        return BitVector(self.m, self.value)

    def is_zero(self) -> bool:
        return self.value == 0

    def __str__(self) -> str:
        return str(self.coeffs)


@dataclass(frozen=True)
class FieldParams:
    m: int
    modulus: int
    primitive: FieldElement

    @property
    def order(self) -> int:
        """Size of the multiplicative group."""
        return (1 << self.m) - 1

    def element(self, value: int) -> FieldElement:
        if not 0 <= value < (1 << self.m):
            raise InvalidArgument(f"{value} is not an element of GF(2^{self.m})")
        return FieldElement(value, self.m)

    @property
    def one(self) -> FieldElement:
        return FieldElement(1, self.m)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(0, self.m)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(v, self.m) for v in range(1 << self.m)]


def _mul_raw(a: int, b: int, m: int, modulus: int) -> int:
    r = 0
    top = 1 << m
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= modulus
    return r


def _order(a: int, m: int, modulus: int) -> int:
    if a == 0:
        return 0
    x = a
    k = 1
    while x != 1:
        x = _mul_raw(x, a, m, modulus)
        k += 1
        if k > (1 << m):
            return 0
    return k


@lru_cache(maxsize=None)
def make_field(m: int, modulus: int | None = None) -> FieldParams:
    """Return GF(2^m) with a primitive element found by exhaustive order test."""
    if not 1 <= m <= MAX_DEGREE:
        raise InvalidArgument(f"extension degree must be in 1..{MAX_DEGREE}, got {m}")
    if modulus is None:
        modulus = PRIMITIVE_POLYNOMIALS[m]
    if modulus.bit_length() - 1 != m:
        raise InvalidArgument(f"modulus {modulus:#x} does not have degree {m}")
    if not is_irreducible(modulus):
        raise InvalidArgument(f"modulus {modulus:#x} is reducible")
    target = (1 << m) - 1
    # start from x (or 1 in GF(2)) and walk upward
    for cand in range(2 if m > 1 else 1, 1 << m):
        if _order(cand, m, modulus) == target:
            return FieldParams(m, modulus, FieldElement(cand, m))
    raise InvalidArgument(f"no primitive element modulo {modulus:#x}")  # pragma: no cover


def _check(a: FieldElement, p: FieldParams) -> None:
    if a.m != p.m or not 0 <= a.value < (1 << p.m):
        raise InvalidArgument("element does not belong to this field")


def gf_add(a: FieldElement, b: FieldElement, p: FieldParams) -> FieldElement:
    _check(a, p)
    _check(b, p)
    return FieldElement(a.value ^ b.value, p.m)


def gf_mul(a: FieldElement, b: FieldElement, p: FieldParams) -> FieldElement:
    _check(a, p)
    _check(b, p)
    return FieldElement(_mul_raw(a.value, b.value, p.m, p.modulus), p.m)


def gf_pow(a: FieldElement, k: int, p: FieldParams) -> FieldElement:
    _check(a, p)
    if a.value == 0:
        if k == 0:
            raise InvalidArgument("0^0 is undefined")
        if k < 0:
            raise InvalidArgument("zero has no inverse")
        return p.zero
    k %= p.order
    result = 1
    base = a.value
    while k:
        if k & 1:
            result = _mul_raw(result, base, p.m, p.modulus)
        base = _mul_raw(base, base, p.m, p.modulus)
        k >>= 1
    return FieldElement(result, p.m)


def gf_inv(a: FieldElement, p: FieldParams) -> FieldElement:
    if a.value == 0:
        raise InvalidArgument("zero has no inverse")
    return gf_pow(a, p.order - 1, p)


def alpha_power(i: int, p: FieldParams) -> FieldElement:
    return gf_pow(p.primitive, i, p)
