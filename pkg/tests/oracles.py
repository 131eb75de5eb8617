"""Independent reference implementations used only by the tests.

These deliberately re-derive results through different code paths than the
package (shift-and-reduce multiplication, cofactor determinants, a separate
row elimination) so the tests check against something other than the
implementation under test.
"""

from __future__ import annotations


def gf2_mod(a: int, b: int) -> int:
    db = b.bit_length() - 1
    while a.bit_length() - 1 >= db and a:
        a ^= b << (a.bit_length() - 1 - db)
    return a


def gf2_factors(poly: int) -> list[int]:
    """All nontrivial divisors of poly over GF(2) up to half degree."""
    half = (poly.bit_length() - 1) // 2
    return [d for d in range(2, 1 << (half + 1)) if gf2_mod(poly, d) == 0]


def ref_mul(a: int, b: int, poly: int, m: int) -> int:
    """Russian-peasant multiply with step-wise reduction, unlike the tables."""
    acc = 0
    for _ in range(m):
        if b & 1:
            acc ^= a
        b >>= 1
        a <<= 1
        if a >> m & 1:
            a ^= poly
    return acc


def det(gf, rows: list[list[int]]) -> int:
    """Cofactor-expansion determinant (characteristic 2: no sign bookkeeping)."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total ^= gf.mul(rows[0][j], det(gf, minor))
    return total


def rank(gf, rows: list[list[int]]) -> int:
    """Forward elimination only; independent of the package's row reduction."""
    rows = [r[:] for r in rows]
    n_cols = len(rows[0]) if rows else 0
    r = 0
    for c in range(n_cols):
        for i in range(r, len(rows)):
            if rows[i][c]:
                rows[r], rows[i] = rows[i], rows[r]
                break
        else:
            continue
        for i in range(r + 1, len(rows)):
            if rows[i][c]:
                f = gf.div(rows[i][c], rows[r][c])
                rows[i] = [x ^ gf.mul(f, y) for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def majorizes(a, b) -> bool:
    sa, sb = sorted(a, reverse=True), sorted(b, reverse=True)
    if sum(sa) != sum(sb) or len(sa) != len(sb):
        return False
    acc_a = acc_b = 0
    for x, y in zip(sa, sb):
        acc_a += x
        acc_b += y
        if acc_a < acc_b:
            return False
    return True
