"""GF(2^m) arithmetic on precomputed exp/log tables, for m in {8, 16}."""

from __future__ import annotations

from functools import lru_cache

from .errors import ParamError

# Reduction polynomials, bit i = coefficient of x^i.
DEFAULT_POLY = {8: 0x11D, 16: 0x1100B}


def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def poly_mod(a: int, b: int) -> int:
    """Remainder of a divided by b in GF(2)[x]."""
    db = poly_degree(b)
    while a and poly_degree(a) >= db:
        a ^= b << (poly_degree(a) - db)
    return a


def find_factor(poly: int) -> int | None:
    """Smallest nontrivial factor of poly over GF(2), or None if irreducible.

    Trial division by every polynomial of degree 1..deg/2.
    """
    half = poly_degree(poly) // 2
    for d in range(2, 1 << (half + 1)):
        if poly_mod(poly, d) == 0:
            return d
    return None


def clmul_reduce(a: int, b: int, poly: int, m: int) -> int:
    """Reference multiply: carry-less product of a and b, reduced by poly."""
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        a <<= 1
        b >>= 1
    for bit in range(poly_degree(acc), m - 1, -1):
        if acc >> bit & 1:
            acc ^= poly << (bit - m)
    return acc


class GF:
    """The field GF(2^m) with the given reduction polynomial.

    Immutable after construction; all operations are pure table lookups.
    """

    def __init__(self, m: int, poly: int):
        if m < 1:
            raise ParamError(f"extension degree must be positive, got {m}")
        if poly_degree(poly) != m:
            raise ParamError(
                f"polynomial {poly:#x} has degree {poly_degree(poly)}, expected {m}"
            )
        factor = find_factor(poly)
        if factor is not None:
            raise ParamError(
                f"polynomial {poly:#x} is reducible over GF(2): divisible by {factor:#x}"
            )
        self.m = m
        self.poly = poly
        self.order = 1 << m
        self.exp, self.log = self._build_tables()

    def _build_tables(self) -> tuple[list[int], list[int]]:
        # Walk powers of a generator; the reduction polynomial need not be
        # primitive, so search for a generator of the full cyclic group.
        size = self.order - 1
        for g in range(2, self.order):
            exp = [0] * (2 * size)
            log = [0] * self.order
            x = 1
            ok = True
            for i in range(size):
                if x == 1 and i > 0:
                    ok = False  # g has smaller multiplicative order
                    break
                exp[i] = x
                log[x] = i
                x = clmul_reduce(x, g, self.poly, self.m)
            if ok and x == 1:
                # duplicate so mul can skip the mod in the hot path
                for i in range(size, 2 * size):
                    exp[i] = exp[i - size]
                return exp, log
        raise ParamError(f"no generator found for GF(2^{self.m})/{self.poly:#x}")

    def __repr__(self) -> str:
        return f"GF(2^{self.m}, poly={self.poly:#x})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GF) and (self.m, self.poly) == (other.m, other.poly)

    def __hash__(self) -> int:
        return hash((self.m, self.poly))

    def add(self, a: int, b: int) -> int:
        return a ^ b

    sub = add  # characteristic 2

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in GF(2^m)")
        return self.exp[self.order - 1 - self.log[a]]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by 0 in GF(2^m)")
        if a == 0:
            return 0
        return self.exp[(self.log[a] - self.log[b]) % (self.order - 1)]

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            return 0
        return self.exp[(self.log[a] * e) % (self.order - 1)]


@lru_cache(maxsize=None)
def field_create(m: int, poly: int | None = None) -> GF:
    """Build (and cache) a field handle; poly defaults per extension degree."""
    if poly is None:
        try:
            poly = DEFAULT_POLY[m]
        except KeyError:
            raise ParamError(f"no default polynomial for m={m}; pass one explicitly")
    return GF(m, poly)


def field_for_codeword_length(length: int) -> GF:
    """Smallest supported field whose nonzero elements cover `length` points.

    GF(2^8) handles codes up to 255 symbols; longer codes promote to GF(2^16).
    """
    if length <= 255:
        return field_create(8)
    if length <= 65535:
        return field_create(16)
    raise ParamError(f"codeword length {length} exceeds GF(2^16) support")
